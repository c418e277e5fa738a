//! Coherent closure by two-dimensional Weisfeiler-Leman refinement.

use std::collections::HashMap;

use super::{canonical_labels, Relation, Scheme, SchemeError};
use crate::fingerprint::{Fingerprint, SeqHasher};
use crate::par::{self, Execution};

/// The coarsest coherent configuration refining an initial arc colouring.
/// Colours are canonically numbered (diagonal classes first).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoherentClosure {
    pub n: usize,
    pub rank: usize,
    pub colors: Vec<Relation>,
    /// Number of colour classes on the diagonal.
    pub fibers: usize,
    /// Refinement rounds until the class count stopped growing.
    pub rounds: usize,
}

impl CoherentClosure {
    pub fn into_scheme(self) -> Result<Scheme, SchemeError> {
        if self.fibers != 1 {
            return Err(SchemeError::NotHomogeneous(self.fibers));
        }
        Scheme::from_partition(self.n, &self.colors)
    }
}

pub fn wl_closure(n: usize, colors: &[u32]) -> CoherentClosure {
    wl_closure_with(n, colors, Execution::default())
}

/// Refines until stable. The initial colour of `(a, b)` combines the input
/// colours of `(a, b)` and `(b, a)` with the diagonal flag, so the result is
/// closed under transposition and separates the diagonal.
pub fn wl_closure_with(n: usize, colors: &[u32], exec: Execution) -> CoherentClosure {
    assert_eq!(colors.len(), n * n, "colour matrix must be n x n");
    let mut keys: HashMap<(u32, u32, bool), u32> = HashMap::new();
    let initial: Vec<u32> = (0..n * n)
        .map(|i| {
            let (a, b) = (i / n, i % n);
            let key = (colors[i], colors[b * n + a], a == b);
            let next = keys.len() as u32;
            *keys.entry(key).or_insert(next)
        })
        .collect();
    let (mut current, mut classes) = canonical_labels(n, &initial);

    let mut rounds = 0;
    loop {
        rounds += 1;
        let (next, count) = refine_round(n, &current, exec);
        current = next;
        if count == classes {
            break;
        }
        classes = count;
    }
    let (colors, rank) = canonical_labels(n, &current);
    let mut diag: Vec<u32> = (0..n).map(|a| colors[a * n + a]).collect();
    diag.sort_unstable();
    diag.dedup();
    CoherentClosure { n, rank, colors, fibers: diag.len(), rounds }
}

fn signature(n: usize, colors: &[u32], a: usize, b: usize, buf: &mut Vec<u64>) {
    buf.clear();
    let row = &colors[a * n..(a + 1) * n];
    buf.extend((0..n).map(|g| ((row[g] as u64) << 32) | colors[g * n + b] as u64));
    buf.sort_unstable();
}

fn hash_signature(old: u32, sig: &[u64]) -> Fingerprint {
    let mut h = SeqHasher::new(old as u64);
    for &x in sig {
        h.push(x);
    }
    h.finish()
}

/// One refinement step. New classes are numbered by first occurrence in
/// row-major order; hash classes are confirmed by exact signature comparison.
fn refine_round(n: usize, colors: &[u32], exec: Execution) -> (Vec<u32>, usize) {
    let rows: Vec<Vec<Fingerprint>> = par::map_range(exec, n, |a| {
        let mut buf = Vec::with_capacity(n);
        (0..n)
            .map(|b| {
                signature(n, colors, a, b, &mut buf);
                hash_signature(colors[a * n + b], &buf)
            })
            .collect()
    });
    let mut ids: HashMap<Fingerprint, u32> = HashMap::new();
    let mut reps: Vec<usize> = Vec::new();
    let mut next = vec![0u32; n * n];
    for (a, row) in rows.iter().enumerate() {
        for (b, fp) in row.iter().enumerate() {
            let id = *ids.entry(*fp).or_insert_with(|| {
                reps.push(a * n + b);
                reps.len() as u32 - 1
            });
            next[a * n + b] = id;
        }
    }

    let rep_sigs: Vec<Vec<u64>> = reps
        .iter()
        .map(|&cell| {
            let mut buf = Vec::with_capacity(n);
            signature(n, colors, cell / n, cell % n, &mut buf);
            buf
        })
        .collect();
    let collision = par::find_first(exec, n, |a| {
        let mut buf = Vec::with_capacity(n);
        (0..n).find(|&b| {
            let id = next[a * n + b] as usize;
            let rep = reps[id];
            signature(n, colors, a, b, &mut buf);
            colors[rep] != colors[a * n + b] || buf != rep_sigs[id]
        })
    });
    if collision.is_some() {
        return exact_round(n, colors);
    }
    (next, reps.len())
}

fn exact_round(n: usize, colors: &[u32]) -> (Vec<u32>, usize) {
    let mut ids: HashMap<(u32, Vec<u64>), u32> = HashMap::new();
    let mut buf = Vec::with_capacity(n);
    let mut next = vec![0u32; n * n];
    for a in 0..n {
        for b in 0..n {
            signature(n, colors, a, b, &mut buf);
            let fresh = ids.len() as u32;
            next[a * n + b] = *ids.entry((colors[a * n + b], buf.clone())).or_insert(fresh);
        }
    }
    (next, ids.len())
}
