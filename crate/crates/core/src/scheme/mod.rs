//! Association schemes stored as a color matrix over `Ω × Ω`.
//!
//! Relation 0 is always the diagonal. Constructors that start from an
//! arbitrary partition renumber the relations canonically: diagonal first,
//! then by (valency, smallest pair in row-major order). Two schemes on the
//! same point set are therefore equal as partitions iff their color matrices
//! are equal.

mod closure;
mod tensor;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::perm::{PermError, PermGroup};

pub use closure::{wl_closure, wl_closure_with, CoherentClosure};
pub use tensor::{compute_tensor, compute_tensor_with, IntersectionTensor};

pub type Point = usize;
pub type Relation = u32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SchemeError {
    #[error("color matrix has {found} entries, expected {n}x{n}")]
    BadShape { n: usize, found: usize },
    #[error("C1 violated: diagonal is not a single relation 0 (cell ({a},{b}))")]
    DiagonalNotRelation { a: Point, b: Point },
    #[error("C2 violated: r({b},{a}) = {found} but star(r({a},{b})) = {expected}")]
    StarViolation { a: Point, b: Point, expected: Relation, found: Relation },
    #[error("relation index {index} out of range for rank {rank}")]
    RelationOutOfRange { index: Relation, rank: usize },
    #[error("relation {0} is empty")]
    EmptyRelation(Relation),
    #[error("relation {relation} is not closed under transposition")]
    NotTransposeClosed { relation: Relation },
    #[error("C3 violated: c[{r}][{s}][{t}] is {count1} at {pair1:?} but {count2} at {pair2:?}")]
    NotCoherent {
        r: Relation,
        s: Relation,
        t: Relation,
        pair1: (Point, Point),
        pair2: (Point, Point),
        count1: u32,
        count2: u32,
    },
    #[error("coherent configuration has {0} fibers, a scheme needs exactly one")]
    NotHomogeneous(usize),
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error("invalid scheme JSON: {0}")]
    Json(String),
}

/// A scheme on `0..n` with relation `colors[a*n + b] = r(a, b)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Scheme {
    n: usize,
    rank: usize,
    colors: Vec<Relation>,
    star: Vec<Relation>,
}

/// Wire format: `{"n":int,"rank":int,"star":[...],"colors":[[...],...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchemeJson {
    pub n: usize,
    pub rank: usize,
    pub star: Vec<Relation>,
    pub colors: Vec<Vec<Relation>>,
}

impl Scheme {
    /// Validates C1 and C2 for an explicitly numbered scheme.
    pub fn new(n: usize, rank: usize, colors: Vec<Relation>, star: Vec<Relation>) -> Result<Self, SchemeError> {
        if colors.len() != n * n {
            return Err(SchemeError::BadShape { n, found: colors.len() });
        }
        if star.len() != rank {
            return Err(SchemeError::Json(format!("star has {} entries, rank is {rank}", star.len())));
        }
        for &s in &star {
            if s as usize >= rank {
                return Err(SchemeError::RelationOutOfRange { index: s, rank });
            }
        }
        let mut used = vec![false; rank];
        for a in 0..n {
            for b in 0..n {
                let c = colors[a * n + b];
                if c as usize >= rank {
                    return Err(SchemeError::RelationOutOfRange { index: c, rank });
                }
                if (a == b) != (c == 0) {
                    return Err(SchemeError::DiagonalNotRelation { a, b });
                }
                let back = colors[b * n + a];
                if back != star[c as usize] {
                    return Err(SchemeError::StarViolation { a, b, expected: star[c as usize], found: back });
                }
                used[c as usize] = true;
            }
        }
        if let Some(empty) = used.iter().position(|u| !u) {
            return Err(SchemeError::EmptyRelation(empty as Relation));
        }
        Ok(Scheme { n, rank, colors, star })
    }

    /// Builds a scheme from an arbitrary labelling of the cells, renumbering
    /// the classes canonically and deriving `star`.
    pub fn from_partition(n: usize, labels: &[u32]) -> Result<Self, SchemeError> {
        if labels.len() != n * n {
            return Err(SchemeError::BadShape { n, found: labels.len() });
        }
        let (colors, rank) = canonical_labels(n, labels);
        let mut star = vec![u32::MAX; rank];
        for a in 0..n {
            for b in 0..n {
                let c = colors[a * n + b] as usize;
                let back = colors[b * n + a];
                if star[c] == u32::MAX {
                    star[c] = back;
                } else if star[c] != back {
                    return Err(SchemeError::NotTransposeClosed { relation: c as u32 });
                }
            }
        }
        Scheme::new(n, rank, colors, star)
    }

    /// The scheme of a transitive permutation group (its 2-orbits).
    pub fn from_orbitals(group: &PermGroup) -> Result<Self, SchemeError> {
        let orb = group.orbitals()?;
        Scheme::from_partition(orb.degree, &orb.colors)
    }

    /// The rank-2 scheme on `n` points.
    pub fn trivial(n: usize) -> Self {
        let colors = (0..n * n).map(|i| u32::from(i / n != i % n)).collect();
        let rank = if n > 1 { 2 } else { 1 };
        Scheme { n, rank, colors, star: (0..rank as u32).collect() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    #[inline]
    pub fn relation(&self, a: Point, b: Point) -> Relation {
        self.colors[a * self.n + b]
    }

    pub fn colors(&self) -> &[Relation] {
        &self.colors
    }

    pub fn row(&self, a: Point) -> &[Relation] {
        &self.colors[a * self.n..(a + 1) * self.n]
    }

    pub fn star(&self, s: Relation) -> Relation {
        self.star[s as usize]
    }

    pub fn stars(&self) -> &[Relation] {
        &self.star
    }

    /// Out-degree of each relation, read off row 0.
    pub fn valencies(&self) -> Vec<u32> {
        let mut v = vec![0u32; self.rank];
        for &c in self.row(0) {
            v[c as usize] += 1;
        }
        v
    }

    /// The common irreflexive valency, if all irreflexive relations share one.
    pub fn equivalenced_valency(&self) -> Option<u32> {
        let v = self.valencies();
        let k = *v.get(1)?;
        v[1..].iter().all(|&x| x == k).then_some(k)
    }

    /// `αs`: the `s`-neighbours of `a`, in increasing order.
    pub fn neighbours(&self, a: Point, s: Relation) -> Vec<Point> {
        self.row(a).iter().enumerate().filter(|(_, &c)| c == s).map(|(b, _)| b).collect()
    }

    /// First pair of each relation in row-major order.
    pub fn representatives(&self) -> Vec<(Point, Point)> {
        let mut reps = vec![None; self.rank];
        let mut missing = self.rank;
        for (i, &c) in self.colors.iter().enumerate() {
            if reps[c as usize].is_none() {
                reps[c as usize] = Some((i / self.n, i % self.n));
                missing -= 1;
                if missing == 0 {
                    break;
                }
            }
        }
        reps.into_iter().map(|r| r.expect("every relation is nonempty")).collect()
    }

    /// True when the relation numbering is the canonical one.
    pub fn is_canonical(&self) -> bool {
        canonical_labels(self.n, &self.colors).0 == self.colors
    }

    /// Same partition, canonically numbered.
    pub fn canonicalized(&self) -> Scheme {
        Scheme::from_partition(self.n, &self.colors).expect("relabelling preserves the scheme axioms")
    }

    /// Image of the scheme under a point bijection `f` (pairs `(a^f, b^f)`).
    pub fn relabel_points(&self, images: &[Point]) -> Scheme {
        let n = self.n;
        let mut colors = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                colors[images[a] * n + images[b]] = self.colors[a * n + b];
            }
        }
        Scheme { n, rank: self.rank, colors, star: self.star.clone() }
    }

    pub fn to_json(&self) -> SchemeJson {
        SchemeJson {
            n: self.n,
            rank: self.rank,
            star: self.star.clone(),
            colors: (0..self.n).map(|a| self.row(a).to_vec()).collect(),
        }
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&self.to_json()).expect("scheme serialization cannot fail")
    }

    pub fn from_json(json: SchemeJson) -> Result<Self, SchemeError> {
        if json.colors.len() != json.n {
            return Err(SchemeError::Json(format!("colors has {} rows, n is {}", json.colors.len(), json.n)));
        }
        let mut colors = Vec::with_capacity(json.n * json.n);
        for (i, row) in json.colors.iter().enumerate() {
            if row.len() != json.n {
                return Err(SchemeError::Json(format!("row {i} has {} entries, n is {}", row.len(), json.n)));
            }
            colors.extend_from_slice(row);
        }
        Scheme::new(json.n, json.rank, colors, json.star)
    }

    pub fn from_json_str(text: &str) -> Result<Self, SchemeError> {
        let json: SchemeJson = serde_json::from_str(text).map_err(|e| SchemeError::Json(e.to_string()))?;
        Scheme::from_json(json)
    }
}

/// Canonical renumbering of an arbitrary cell labelling: classes meeting the
/// diagonal first (by smallest cell), then the rest by (size, smallest cell).
pub(crate) fn canonical_labels(n: usize, labels: &[u32]) -> (Vec<Relation>, usize) {
    use std::collections::HashMap;
    // class id -> (meets diagonal, size, first cell)
    let mut index: HashMap<u32, usize> = HashMap::new();
    let mut info: Vec<(bool, usize, usize)> = Vec::new();
    let mut dense = Vec::with_capacity(labels.len());
    for (i, &l) in labels.iter().enumerate() {
        let id = *index.entry(l).or_insert_with(|| {
            info.push((false, 0, i));
            info.len() - 1
        });
        info[id].1 += 1;
        dense.push(id);
    }
    for a in 0..n {
        let id = dense[a * n + a];
        info[id].0 = true;
    }
    let mut order: Vec<usize> = (0..info.len()).collect();
    order.sort_by_key(|&id| {
        let (diag, size, first) = info[id];
        if diag {
            (0, 0, first)
        } else {
            (1, size, first)
        }
    });
    let mut relabel = vec![0u32; info.len()];
    for (new, &old) in order.iter().enumerate() {
        relabel[old] = new as u32;
    }
    (dense.into_iter().map(|id| relabel[id]).collect(), info.len())
}
