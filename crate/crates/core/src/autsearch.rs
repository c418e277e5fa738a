//! Individualization-refinement search for automorphisms of a scheme.
//!
//! Vertex colourings are refined by counting, for each point, the colours
//! of its neighbours in every relation. Colour numbers depend only on the
//! refined invariants, so a source and a target colouring refined in
//! lockstep can be compared class by class.

use std::collections::HashMap;

use crate::fingerprint::{mix64, Fingerprint, MultisetHasher, SeqHasher};
use crate::perm::Permutation;
use crate::scheme::{Point, Scheme};

/// Result of enumerating a point stabilizer.
#[derive(Debug, Clone)]
pub struct StabilizerSearch {
    /// Distinct automorphisms fixing the point, identity included.
    pub elements: Vec<Permutation>,
    /// False when the search stopped at the cap.
    pub complete: bool,
    /// Search tree nodes visited.
    pub nodes: u64,
}

/// Stable refinement of `colors`; returns the new colouring and a trace of
/// the invariants seen, which equal colourings must share.
fn refine(scheme: &Scheme, colors: &mut Vec<u32>) -> Fingerprint {
    let n = scheme.n();
    let mut trace = SeqHasher::new(n as u64);
    let mut classes = count_classes(colors);
    loop {
        let sigs: Vec<Fingerprint> = (0..n)
            .map(|a| {
                let row = scheme.row(a);
                let mut h = MultisetHasher::default();
                for b in 0..n {
                    h.add(mix64(((row[b] as u64) << 32) | colors[b] as u64));
                }
                let f = h.finish();
                Fingerprint(mix64(f.0 ^ colors[a] as u64), f.1 ^ colors[a] as u64)
            })
            .collect();
        let mut distinct = sigs.clone();
        distinct.sort_unstable();
        distinct.dedup();
        for s in &distinct {
            trace.push(s.0);
            trace.push(s.1);
        }
        let index: HashMap<Fingerprint, u32> = distinct.iter().enumerate().map(|(i, &s)| (s, i as u32)).collect();
        *colors = sigs.iter().map(|s| index[s]).collect();
        trace.push(distinct.len() as u64);
        if distinct.len() == classes {
            return trace.finish();
        }
        classes = distinct.len();
    }
}

fn count_classes(colors: &[u32]) -> usize {
    let mut c = colors.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

fn individualize(colors: &mut [u32], a: Point) {
    colors[a] = colors.iter().max().map_or(0, |m| m + 1);
}

/// One level of the source path: the point individualized there, the
/// colouring before individualization and the trace after refining.
struct Level {
    point: Point,
    before: Vec<u32>,
    trace: Fingerprint,
}

/// Enumerates automorphisms fixing `point`, stopping after `cap` of them.
pub fn stabilizer_automorphisms(scheme: &Scheme, point: Point, cap: usize) -> StabilizerSearch {
    let n = scheme.n();
    // source path: individualize `point`, then the first point of the
    // smallest non-singleton class at each level
    let mut levels = Vec::new();
    let mut colors = vec![0u32; n];
    let mut next = point;
    loop {
        let before = colors.clone();
        individualize(&mut colors, next);
        let trace = refine(scheme, &mut colors);
        levels.push(Level { point: next, before, trace });
        match target_cell(&colors) {
            Some(c) => next = (0..n).find(|&a| colors[a] == c).expect("class is nonempty"),
            None => break,
        }
    }
    let leaf = colors;

    let mut search = Search { scheme, levels: &levels, leaf: &leaf, cap, nodes: 0, found: Vec::new() };
    // the first level is forced: `point` maps to itself
    let mut start = levels[0].before.clone();
    individualize(&mut start, point);
    if refine(scheme, &mut start) == levels[0].trace {
        search.descend(1, start);
    }
    let complete = search.found.len() < cap;
    StabilizerSearch { elements: search.found, complete, nodes: search.nodes }
}

/// The smallest non-singleton class, ties broken by colour.
fn target_cell(colors: &[u32]) -> Option<u32> {
    let mut sizes: HashMap<u32, usize> = HashMap::new();
    for &c in colors {
        *sizes.entry(c).or_default() += 1;
    }
    sizes.into_iter().filter(|&(_, s)| s > 1).min_by_key(|&(c, s)| (s, c)).map(|(c, _)| c)
}

struct Search<'a> {
    scheme: &'a Scheme,
    levels: &'a [Level],
    leaf: &'a [u32],
    cap: usize,
    nodes: u64,
    found: Vec<Permutation>,
}

impl Search<'_> {
    fn descend(&mut self, depth: usize, colors: Vec<u32>) {
        self.nodes += 1;
        if self.found.len() >= self.cap {
            return;
        }
        if depth == self.levels.len() {
            self.leaf_map(&colors);
            return;
        }
        let level = &self.levels[depth];
        let class = level.before[level.point];
        for w in 0..colors.len() {
            if colors[w] != class {
                continue;
            }
            let mut child = colors.clone();
            individualize(&mut child, w);
            if refine(self.scheme, &mut child) == level.trace {
                self.descend(depth + 1, child);
            }
            if self.found.len() >= self.cap {
                return;
            }
        }
    }

    fn leaf_map(&mut self, target: &[u32]) {
        let n = target.len();
        let mut by_color = vec![usize::MAX; n];
        for (b, &c) in target.iter().enumerate() {
            by_color[c as usize] = b;
        }
        let images: Vec<Point> = self.leaf.iter().map(|&c| by_color[c as usize]).collect();
        let Ok(f) = Permutation::new(images) else { return };
        let s = self.scheme;
        let preserves = (0..n).all(|a| {
            let (row, image) = (s.row(a), s.row(f.image(a)));
            (0..n).all(|b| row[b] == image[f.image(b)])
        });
        if preserves && !self.found.contains(&f) {
            self.found.push(f);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frobenius::{build_frobenius, FrobeniusSpec};
    use crate::scheme::fixtures::{f3_lines, z9};

    /// Automorphisms fixing 0 by trying every permutation.
    fn brute_stabilizer(s: &Scheme) -> usize {
        fn go(s: &Scheme, images: &mut Vec<usize>, used: &mut Vec<bool>) -> usize {
            let n = s.n();
            let a = images.len();
            if a == n {
                return 1;
            }
            let mut count = 0;
            for b in 0..n {
                if used[b] || (a == 0 && b != 0) {
                    continue;
                }
                if (0..a).all(|c| s.relation(c, a) == s.relation(images[c], b) && s.relation(a, c) == s.relation(b, images[c])) {
                    images.push(b);
                    used[b] = true;
                    count += go(s, images, used);
                    used[b] = false;
                    images.pop();
                }
            }
            count
        }
        go(s, &mut Vec::new(), &mut vec![false; s.n()])
    }

    #[test]
    fn small_stabilizers_match_brute_force() {
        for s in [z9(), f3_lines(), Scheme::trivial(6)] {
            let found = stabilizer_automorphisms(&s, 0, usize::MAX);
            assert!(found.complete);
            assert_eq!(found.elements.len(), brute_stabilizer(&s));
            assert!(found.elements.iter().all(|g| g.image(0) == 0));
        }
    }

    #[test]
    fn frobenius_stabilizer_is_the_complement() {
        let spec = FrobeniusSpec::cyclic(105, &[-1]).unwrap();
        let s = Scheme::from_orbitals(&build_frobenius(&spec).unwrap()).unwrap();
        let found = stabilizer_automorphisms(&s, 0, 10);
        assert!(found.complete);
        assert_eq!(found.elements.len(), 2);
    }

    #[test]
    fn cap_stops_the_search() {
        let found = stabilizer_automorphisms(&Scheme::trivial(7), 0, 5);
        assert!(!found.complete);
        assert_eq!(found.elements.len(), 5);
    }
}
