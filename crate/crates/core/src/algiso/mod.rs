//! Algebraic isomorphisms between schemes, base-triple coordinates, the
//! point bijections they induce, and automorphism construction.

mod base;
mod schurity;

use serde::Serialize;
use thiserror::Error;

use crate::scheme::{IntersectionTensor, Point, Relation, SchemeError};

pub use base::{
    base_coordinates, find_compatible_triples, first_base_triple, induced_bijection, is_induced, is_induced_at, verify_induced, BaseTriple,
    CoordinateMap, InducedVerdict,
};
pub use schurity::{four_condition_frobenius_verdict, schurity_via_base_triples, FrobeniusVerdict, SchurityResult};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgIsoError {
    #[error(transparent)]
    Scheme(#[from] SchemeError),
    #[error("({mu}, {nu}, {rho}) is not a base triple: {reason}")]
    NotBaseTriple { mu: Point, nu: Point, rho: Point, reason: String },
    #[error("points {first} and {second} share coordinates {coords:?}")]
    DuplicateCoordinates { first: Point, second: Point, coords: (Relation, Relation) },
    #[error("coordinate alphabet has {alphabet} pairs for {n} points")]
    AlphabetSize { alphabet: usize, n: usize },
    #[error("point {point} has coordinates {coords:?} outside the alphabet")]
    OutsideAlphabet { point: Point, coords: (Relation, Relation) },
    #[error("anchor {name} has coordinates {found:?}, expected {expected:?}")]
    Anchor { name: &'static str, found: (Relation, Relation), expected: (Relation, Relation) },
    #[error("target triple does not match the source triple under the relation map")]
    IncompatibleTriples,
    #[error("the relation map is not an algebraic isomorphism: {0}")]
    NotAlgebraic(String),
    #[error("the image of the parabolic is not a parabolic of the target")]
    ParabolicImage,
    #[error("reference Frobenius group: {0}")]
    Reference(String),
    #[error("scheme is primitive")]
    Primitive,
    #[error("scheme is not equivalenced")]
    NotEquivalenced,
    #[error("no 4-condition certificate for this scheme; run the 4-condition check first")]
    MissingCertificate,
}

/// A map from the relations of one scheme to those of another.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct RelationBijection {
    pub map: Vec<Relation>,
}

impl RelationBijection {
    pub fn identity(rank: usize) -> Self {
        RelationBijection { map: (0..rank as Relation).collect() }
    }

    #[inline]
    pub fn apply(&self, r: Relation) -> Relation {
        self.map[r as usize]
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.map.len()];
        for (r, &s) in self.map.iter().enumerate() {
            inv[s as usize] = r as Relation;
        }
        RelationBijection { map: inv }
    }

    /// Checks bijectivity, the diagonal, star, valencies and every tensor entry.
    pub fn verify(&self, x: &IntersectionTensor, y: &IntersectionTensor) -> Result<(), AlgIsoError> {
        let m = x.rank();
        if y.rank() != m || self.map.len() != m {
            return Err(AlgIsoError::NotAlgebraic(format!("ranks {} and {} with a map of length {}", m, y.rank(), self.map.len())));
        }
        let mut seen = vec![false; m];
        for &s in &self.map {
            if s as usize >= m || std::mem::replace(&mut seen[s as usize], true) {
                return Err(AlgIsoError::NotAlgebraic("not a bijection".into()));
            }
        }
        if self.apply(0) != 0 {
            return Err(AlgIsoError::NotAlgebraic("diagonal not fixed".into()));
        }
        for r in 0..m as Relation {
            if self.apply(x.star(r)) != y.star(self.apply(r)) {
                return Err(AlgIsoError::NotAlgebraic(format!("star not preserved at {r}")));
            }
            if x.valency(r) != y.valency(self.apply(r)) {
                return Err(AlgIsoError::NotAlgebraic(format!("valency not preserved at {r}")));
            }
        }
        for r in 0..m as Relation {
            for s in 0..m as Relation {
                for t in 0..m as Relation {
                    if x.get(r, s, t) != y.get(self.apply(r), self.apply(s), self.apply(t)) {
                        return Err(AlgIsoError::NotAlgebraic(format!("c[{r}][{s}][{t}] not preserved")));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Invariant of a relation under algebraic isomorphisms.
fn signature(t: &IntersectionTensor, r: Relation) -> (u32, bool, Vec<u32>) {
    let m = t.rank() as Relation;
    let mut row: Vec<u32> = (0..m).flat_map(|s| (0..m).map(move |u| (s, u))).map(|(s, u)| t.get(r, s, u)).collect();
    row.sort_unstable();
    (t.valency(r), t.star(r) == r, row)
}

/// Up to `limit` algebraic isomorphisms from `x` to `y`, found by
/// backtracking over relations ordered by valency and row signature.
pub fn find_algebraic_isomorphisms(x: &IntersectionTensor, y: &IntersectionTensor, limit: usize) -> Vec<RelationBijection> {
    let m = x.rank();
    if y.rank() != m || x.degree() != y.degree() || limit == 0 {
        return Vec::new();
    }
    let sx: Vec<_> = (0..m as Relation).map(|r| signature(x, r)).collect();
    let sy: Vec<_> = (0..m as Relation).map(|r| signature(y, r)).collect();
    let mut order: Vec<Relation> = (1..m as Relation).collect();
    order.sort_by(|&a, &b| (&sx[a as usize], a).cmp(&(&sx[b as usize], b)));

    let mut search = Search {
        x,
        y,
        sx: &sx,
        sy: &sy,
        order,
        map: vec![None; m],
        used: vec![false; m],
        assigned: vec![0],
        found: Vec::new(),
        limit,
    };
    search.map[0] = Some(0);
    search.used[0] = true;
    if search.consistent(&[0]) {
        search.run(0);
    }
    search.found.retain(|f| f.verify(x, y).is_ok());
    search.found
}

struct Search<'a> {
    x: &'a IntersectionTensor,
    y: &'a IntersectionTensor,
    sx: &'a [(u32, bool, Vec<u32>)],
    sy: &'a [(u32, bool, Vec<u32>)],
    order: Vec<Relation>,
    map: Vec<Option<Relation>>,
    used: Vec<bool>,
    assigned: Vec<Relation>,
    found: Vec<RelationBijection>,
    limit: usize,
}

impl Search<'_> {
    fn run(&mut self, depth: usize) {
        if self.found.len() >= self.limit {
            return;
        }
        let Some(&r) = self.order[depth.min(self.order.len())..].iter().find(|&&r| self.map[r as usize].is_none()) else {
            self.found.push(RelationBijection { map: self.map.iter().map(|v| v.expect("all assigned")).collect() });
            return;
        };
        let next_depth = self.order.iter().position(|&o| o == r).expect("r is ordered") + 1;
        let rs = self.x.star(r);
        for c in 0..self.x.rank() as Relation {
            if self.used[c as usize] || self.sx[r as usize] != self.sy[c as usize] {
                continue;
            }
            let cs = self.y.star(c);
            if (rs == r) != (cs == c) || (rs != r && self.used[cs as usize]) {
                continue;
            }
            let mut new = vec![(r, c)];
            if rs != r {
                new.push((rs, cs));
            }
            for &(a, b) in &new {
                self.map[a as usize] = Some(b);
                self.used[b as usize] = true;
                self.assigned.push(a);
            }
            let fresh: Vec<Relation> = new.iter().map(|p| p.0).collect();
            if self.consistent(&fresh) {
                self.run(next_depth);
            }
            for &(a, b) in &new {
                self.map[a as usize] = None;
                self.used[b as usize] = false;
                self.assigned.pop();
            }
            if self.found.len() >= self.limit {
                return;
            }
        }
    }

    /// Tensor entries among assigned relations that involve a fresh one.
    fn consistent(&self, fresh: &[Relation]) -> bool {
        let f = |r: Relation| self.map[r as usize].expect("assigned");
        for &a in &self.assigned {
            for &b in &self.assigned {
                for &c in &self.assigned {
                    if !(fresh.contains(&a) || fresh.contains(&b) || fresh.contains(&c)) {
                        continue;
                    }
                    if self.x.get(a, b, c) != self.y.get(f(a), f(b), f(c)) {
                        return false;
                    }
                }
            }
        }
        true
    }
}
