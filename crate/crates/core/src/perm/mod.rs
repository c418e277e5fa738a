//! Permutations of `0..n` and permutation groups given by generators.
//!
//! Composition is written left to right: `g.then(h)` maps `x` to `h(g(x))`,
//! matching the exponential notation `x^{gh}` for right actions.

mod chain;
mod parse;

use std::collections::VecDeque;
use std::fmt;

use num_bigint::BigUint;
use thiserror::Error;

pub use chain::StabilizerChain;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PermError {
    #[error("image list is not a bijection on 0..{degree}")]
    NotBijection { degree: usize },
    #[error("point {point} out of range for degree {degree}")]
    PointOutOfRange { point: usize, degree: usize },
    #[error("generator degree {found} differs from group degree {expected}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("group is not transitive: orbit of 0 has {orbit_len} of {degree} points")]
    NotTransitive { orbit_len: usize, degree: usize },
    #[error("cannot parse permutation: {0}")]
    Parse(String),
}

/// A bijection of `0..degree`, stored as its image list.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self, PermError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || seen[x] {
                return Err(PermError::NotBijection { degree: n });
            }
            seen[x] = true;
        }
        Ok(Permutation { images })
    }

    pub(crate) fn from_images_unchecked(images: Vec<usize>) -> Self {
        debug_assert!(Permutation::new(images.clone()).is_ok());
        Permutation { images }
    }

    pub fn identity(degree: usize) -> Self {
        Permutation { images: (0..degree).collect() }
    }

    /// Builds a permutation from disjoint cycles; points not mentioned are fixed.
    pub fn from_cycles(degree: usize, cycles: &[Vec<usize>]) -> Result<Self, PermError> {
        let mut images: Vec<usize> = (0..degree).collect();
        let mut touched = vec![false; degree];
        for cycle in cycles {
            for (i, &x) in cycle.iter().enumerate() {
                if x >= degree {
                    return Err(PermError::PointOutOfRange { point: x, degree });
                }
                if touched[x] {
                    return Err(PermError::NotBijection { degree });
                }
                touched[x] = true;
                images[x] = cycle[(i + 1) % cycle.len()];
            }
        }
        Permutation::new(images)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn image(&self, point: usize) -> usize {
        self.images[point]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        debug_assert_eq!(self.degree(), other.degree());
        Permutation { images: self.images.iter().map(|&x| other.images[x]).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.degree()];
        for (x, &y) in self.images.iter().enumerate() {
            inv[y] = x;
        }
        Permutation { images: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(x, &y)| x == y)
    }

    pub fn fixed_points(&self) -> impl Iterator<Item = usize> + '_ {
        self.images.iter().enumerate().filter(|(x, y)| x == *y).map(|(x, _)| x)
    }

    /// Nontrivial cycles, each starting at its smallest point, in order of that point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] || self.images[start] == start {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut x = self.images[start];
            while x != start {
                seen[x] = true;
                cycle.push(x);
                x = self.images[x];
            }
            out.push(cycle);
        }
        out
    }

    /// Image-list notation, e.g. `[1,2,0]`.
    pub fn to_image_string(&self) -> String {
        let parts: Vec<String> = self.images.iter().map(|x| x.to_string()).collect();
        format!("[{}]", parts.join(","))
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            let parts: Vec<String> = c.iter().map(|x| x.to_string()).collect();
            write!(f, "({})", parts.join(" "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation{}", self)
    }
}

/// The group generated by a list of permutations of the same degree.
#[derive(Debug, Clone)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Permutation>,
}

/// Orbits of a transitive group on ordered pairs.
///
/// Classes are numbered canonically: the diagonal is 0, the remaining classes
/// follow in order of (valency, smallest pair in row-major order).
#[derive(Debug, Clone)]
pub struct Orbitals {
    pub degree: usize,
    pub count: usize,
    /// Row-major `degree × degree` class indices.
    pub colors: Vec<u32>,
}

impl Orbitals {
    pub fn class_of(&self, a: usize, b: usize) -> u32 {
        self.colors[a * self.degree + b]
    }
}

impl PermGroup {
    pub fn new(degree: usize, generators: Vec<Permutation>) -> Result<Self, PermError> {
        for g in &generators {
            if g.degree() != degree {
                return Err(PermError::DegreeMismatch { expected: degree, found: g.degree() });
            }
        }
        Ok(PermGroup { degree, generators })
    }

    pub fn trivial(degree: usize) -> Self {
        PermGroup { degree, generators: Vec::new() }
    }

    /// Full symmetric group on `degree` points.
    pub fn symmetric(degree: usize) -> Self {
        let mut gens = Vec::new();
        if degree >= 2 {
            gens.push(Permutation::from_cycles(degree, &[vec![0, 1]]).unwrap());
            gens.push(Permutation::from_cycles(degree, &[(0..degree).collect()]).unwrap());
        }
        PermGroup { degree, generators: gens }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    /// Sorted orbit of `point` under the generated group.
    pub fn orbit(&self, point: usize) -> Result<Vec<usize>, PermError> {
        if point >= self.degree {
            return Err(PermError::PointOutOfRange { point, degree: self.degree });
        }
        let mut seen = vec![false; self.degree];
        seen[point] = true;
        let mut queue = VecDeque::from([point]);
        let mut out = vec![point];
        while let Some(x) = queue.pop_front() {
            for g in &self.generators {
                let y = g.image(x);
                if !seen[y] {
                    seen[y] = true;
                    out.push(y);
                    queue.push_back(y);
                }
            }
        }
        out.sort_unstable();
        Ok(out)
    }

    pub fn is_transitive(&self) -> bool {
        self.degree == 0 || self.orbit(0).map(|o| o.len() == self.degree).unwrap_or(false)
    }

    pub fn stabilizer_chain(&self) -> StabilizerChain {
        StabilizerChain::new(self.degree, &self.generators)
    }

    /// Exact group order.
    pub fn order(&self) -> BigUint {
        self.stabilizer_chain().order()
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        g.degree() == self.degree && self.stabilizer_chain().contains(g)
    }

    /// Orbits on `Ω × Ω`, computed from the suborbits of the stabilizer of 0
    /// and a transversal mapping 0 to every point.
    pub fn orbitals(&self) -> Result<Orbitals, PermError> {
        let n = self.degree;
        if n == 0 {
            return Ok(Orbitals { degree: 0, count: 0, colors: Vec::new() });
        }
        let orbit = self.orbit(0)?;
        if orbit.len() != n {
            return Err(PermError::NotTransitive { orbit_len: orbit.len(), degree: n });
        }
        let chain = self.stabilizer_chain();
        let stab = PermGroup { degree: n, generators: chain.stabilizer_generators(0) };

        // suborbits of the point stabilizer, ordered by (size, smallest point)
        let mut suborbit_of = vec![usize::MAX; n];
        let mut suborbits: Vec<Vec<usize>> = Vec::new();
        for x in 0..n {
            if suborbit_of[x] == usize::MAX {
                let o = stab.orbit(x)?;
                for &y in &o {
                    suborbit_of[y] = suborbits.len();
                }
                suborbits.push(o);
            }
        }
        let mut order: Vec<usize> = (0..suborbits.len()).collect();
        order.sort_by_key(|&i| (suborbits[i][0] != 0, suborbits[i].len(), suborbits[i][0]));
        let mut relabel = vec![0u32; suborbits.len()];
        for (new, &old) in order.iter().enumerate() {
            relabel[old] = new as u32;
        }

        // transversal: a permutation sending 0 to each point, by BFS over generators
        let mut colors = vec![0u32; n * n];
        let mut visited = vec![false; n];
        visited[0] = true;
        let mut queue = VecDeque::from([(0usize, Permutation::identity(n))]);
        while let Some((x, rep)) = queue.pop_front() {
            let inv = rep.inverse();
            for b in 0..n {
                colors[x * n + b] = relabel[suborbit_of[inv.image(b)]];
            }
            for g in &self.generators {
                let y = g.image(x);
                if !visited[y] {
                    visited[y] = true;
                    queue.push_back((y, rep.then(g)));
                }
            }
        }
        Ok(Orbitals { degree: n, count: suborbits.len(), colors })
    }
}
