use super::{Point, Relation, Scheme, SchemeError};
use crate::par::{self, Execution};

/// Intersection numbers `c[r][s][t] = |αr ∩ βs*|` for `(α, β) ∈ t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionTensor {
    rank: usize,
    entries: Vec<u32>,
    valencies: Vec<u32>,
    star: Vec<Relation>,
}

impl IntersectionTensor {
    pub fn rank(&self) -> usize {
        self.rank
    }

    #[inline]
    pub fn get(&self, r: Relation, s: Relation, t: Relation) -> u32 {
        self.entries[(r as usize * self.rank + s as usize) * self.rank + t as usize]
    }

    pub fn valency(&self, s: Relation) -> u32 {
        self.valencies[s as usize]
    }

    pub fn valencies(&self) -> &[u32] {
        &self.valencies
    }

    pub fn star(&self, s: Relation) -> Relation {
        self.star[s as usize]
    }

    pub fn degree(&self) -> u64 {
        self.valencies.iter().map(|&v| v as u64).sum()
    }

    /// Relations `t` with `c[r][s][t] > 0`, the complex product `rs`.
    pub fn product(&self, r: Relation, s: Relation) -> Vec<Relation> {
        (0..self.rank as Relation).filter(|&t| self.get(r, s, t) > 0).collect()
    }

    /// First triple violating `n_t c[r][s][t*] = n_r c[s][t][r*] = n_s c[t][r][s*]`.
    pub fn triangle_violation(&self) -> Option<(Relation, Relation, Relation)> {
        let m = self.rank as Relation;
        for r in 0..m {
            for s in 0..m {
                for t in 0..m {
                    let a = self.valency(t) as u64 * self.get(r, s, self.star(t)) as u64;
                    let b = self.valency(r) as u64 * self.get(s, t, self.star(r)) as u64;
                    let c = self.valency(s) as u64 * self.get(t, r, self.star(s)) as u64;
                    if a != b || b != c {
                        return Some((r, s, t));
                    }
                }
            }
        }
        None
    }

    /// First `(r, s)` with `Σ_t c[r][s][t] n_t ≠ n_r n_s`.
    pub fn row_sum_violation(&self) -> Option<(Relation, Relation)> {
        let m = self.rank as Relation;
        for r in 0..m {
            for s in 0..m {
                let sum: u64 = (0..m).map(|t| self.get(r, s, t) as u64 * self.valency(t) as u64).sum();
                if sum != self.valency(r) as u64 * self.valency(s) as u64 {
                    return Some((r, s));
                }
            }
        }
        None
    }

    /// `n_s = c[s][s*][0]` for every `s`.
    pub fn valency_identity_holds(&self) -> bool {
        (0..self.rank as Relation).all(|s| self.get(s, self.star(s), 0) == self.valency(s))
    }
}

/// Computes the tensor and verifies C3 exhaustively over all pairs.
pub fn compute_tensor(scheme: &Scheme) -> Result<IntersectionTensor, SchemeError> {
    compute_tensor_with(scheme, Execution::default())
}

pub fn compute_tensor_with(scheme: &Scheme, exec: Execution) -> Result<IntersectionTensor, SchemeError> {
    let n = scheme.n();
    let m = scheme.rank();
    let reps = scheme.representatives();
    let mut entries = vec![0u32; m * m * m];
    for (t, &(a, b)) in reps.iter().enumerate() {
        for g in 0..n {
            let r = scheme.relation(a, g) as usize;
            let s = scheme.relation(g, b) as usize;
            entries[(r * m + s) * m + t] += 1;
        }
    }
    let mut support = vec![0usize; m];
    for (i, &e) in entries.iter().enumerate() {
        if e > 0 {
            support[i % m] += 1;
        }
    }

    let violation = par::find_first(exec, n, |a| {
        let mut counts = vec![0u32; m * m];
        let mut touched: Vec<usize> = Vec::with_capacity(n);
        let row_a = scheme.row(a);
        let stars = scheme.stars();
        let mut column = vec![0usize; n];
        for b in 0..n {
            let t = row_a[b] as usize;
            // column[g] = r(g, b), read from row b for locality
            for (c, &r) in column.iter_mut().zip(scheme.row(b)) {
                *c = stars[r as usize] as usize;
            }
            for g in 0..n {
                let idx = row_a[g] as usize * m + column[g];
                if counts[idx] == 0 {
                    touched.push(idx);
                }
                counts[idx] += 1;
            }
            let consistent = touched.len() == support[t] && touched.iter().all(|&i| counts[i] == entries[i * m + t]);
            for &i in &touched {
                counts[i] = 0;
            }
            touched.clear();
            if !consistent {
                return Some(b);
            }
        }
        None
    });

    if let Some((a, b)) = violation {
        return Err(witness(scheme, &entries, &reps, (a, b)));
    }

    Ok(IntersectionTensor {
        rank: m,
        entries,
        valencies: scheme.valencies(),
        star: scheme.stars().to_vec(),
    })
}

fn witness(scheme: &Scheme, entries: &[u32], reps: &[(Point, Point)], (a, b): (Point, Point)) -> SchemeError {
    let n = scheme.n();
    let m = scheme.rank();
    let t = scheme.relation(a, b) as usize;
    let mut counts = vec![0u32; m * m];
    for g in 0..n {
        counts[scheme.relation(a, g) as usize * m + scheme.relation(g, b) as usize] += 1;
    }
    let i = (0..m * m).find(|&i| counts[i] != entries[i * m + t]).expect("a violating pair differs somewhere");
    SchemeError::NotCoherent {
        r: (i / m) as Relation,
        s: (i % m) as Relation,
        t: t as Relation,
        pair1: reps[t],
        pair2: (a, b),
        count1: entries[i * m + t],
        count2: counts[i],
    }
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::*;

    /// Direct count of `|{γ : r(α,γ) = r, r(γ,β) = s}|`.
    fn brute(scheme: &Scheme, r: u32, s: u32, pair: (usize, usize)) -> u32 {
        (0..scheme.n()).filter(|&g| scheme.relation(pair.0, g) == r && scheme.relation(g, pair.1) == s).count() as u32
    }

    #[test]
    fn complete_graph() {
        let t = compute_tensor(&Scheme::trivial(4)).unwrap();
        assert_eq!(t.get(1, 1, 1), 2);
        assert_eq!(t.valency(1), 3);
    }

    #[test]
    fn z9_entries() {
        let z9 = z9();
        let t = compute_tensor(&z9).unwrap();
        // r_d is the relation of difference ±d; pairs (0,2) ∈ r_2, (0,3) ∈ r_3
        assert_eq!(z9.relation(0, 2), 2);
        assert_eq!(t.get(1, 1, 2), brute(&z9, 1, 1, (0, 2)));
        assert_eq!(t.get(1, 1, 2), 1);
        assert_eq!(t.get(1, 1, 3), 0);
        assert_eq!(t.get(1, 2, 3), 1);
        assert_eq!(t.triangle_violation(), None);
        assert_eq!(t.row_sum_violation(), None);
        assert!(t.valency_identity_holds());
    }

    #[test]
    fn f3_line_entries() {
        let f3 = f3_lines();
        let t = compute_tensor(&f3).unwrap();
        for i in 1..5u32 {
            assert_eq!(t.get(i, i, i), 1);
            for j in 1..5u32 {
                if j != i {
                    assert_eq!(t.get(i, i, j), 0);
                    for k in 1..5u32 {
                        if k != i && k != j {
                            assert_eq!(t.get(i, j, k), 1);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn non_coherent_partition_reports_witness() {
        // path 0-1-2 with the edge relation: not coherent
        let labels = [0, 1, 2, 1, 0, 1, 2, 1, 0];
        let s = Scheme::from_partition(3, &labels).unwrap();
        match compute_tensor(&s) {
            Err(SchemeError::NotCoherent { r, s: s_rel, t, pair1, pair2, count1, count2 }) => {
                assert_ne!(count1, count2);
                assert_eq!(brute(&s, r, s_rel, pair1), count1);
                assert_eq!(brute(&s, r, s_rel, pair2), count2);
                assert_eq!(s.relation(pair1.0, pair1.1), t);
                assert_eq!(s.relation(pair2.0, pair2.1), t);
            }
            other => panic!("expected C3 failure, got {other:?}"),
        }
        // the same failure is found sequentially
        assert_eq!(
            compute_tensor_with(&s, Execution::Sequential).unwrap_err(),
            compute_tensor_with(&s, Execution::Parallel).unwrap_err()
        );
    }
}
