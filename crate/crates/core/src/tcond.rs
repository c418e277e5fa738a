//! The t-condition for t = 3 and t = 4.
//!
//! For a pair `(α, β)` the completions are the tuples `(α, β, γ_3, .., γ_t)`;
//! each has an array type, the relations between all its entries. The
//! t-condition holds when the multiset of completion types depends only on the
//! relation containing `(α, β)`.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::fingerprint::{Fingerprint, MultisetHasher, SeqHasher};
use crate::par::{self, Execution};
use crate::scheme::{Point, Relation, Scheme};

const FIELD_BITS: u32 = 12;
const MAX_RANK: usize = 1 << FIELD_BITS;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TConditionError {
    #[error("t must be 3 or 4, got {0}")]
    UnsupportedT(usize),
    #[error("rank {0} exceeds the supported {MAX_RANK}")]
    RankTooLarge(usize),
}

/// The relations `r(γ_i, γ_j)` for `i < j`, in the order
/// (1,2), (1,3), (2,3) for t = 3 and (1,2), (1,3), (1,4), (2,3), (2,4), (3,4)
/// for t = 4.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ArrayType {
    pub t: usize,
    pub upper: Vec<Relation>,
}

impl ArrayType {
    fn pairs(t: usize) -> &'static [(usize, usize)] {
        match t {
            3 => &[(0, 1), (0, 2), (1, 2)],
            _ => &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)],
        }
    }

    /// Entry `(i, j)`, 0-based, using `T_ji = T_ij*` and `T_ii = 0`.
    pub fn entry(&self, scheme: &Scheme, i: usize, j: usize) -> Relation {
        if i == j {
            return 0;
        }
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        let k = Self::pairs(self.t).iter().position(|&p| p == (a, b)).expect("index in range");
        if i < j {
            self.upper[k]
        } else {
            scheme.star(self.upper[k])
        }
    }

    pub fn full(&self, scheme: &Scheme) -> Vec<Vec<Relation>> {
        (0..self.t).map(|i| (0..self.t).map(|j| self.entry(scheme, i, j)).collect()).collect()
    }

    pub fn of_tuple(scheme: &Scheme, gamma: &[Point]) -> Self {
        let upper = Self::pairs(gamma.len()).iter().map(|&(i, j)| scheme.relation(gamma[i], gamma[j])).collect();
        ArrayType { t: gamma.len(), upper }
    }

    fn from_key(t: usize, r: Relation, key: u64) -> Self {
        let rest = Self::pairs(t).len() - 1;
        let mask = (1u64 << FIELD_BITS) - 1;
        let mut upper = vec![r];
        upper.extend((0..rest).rev().map(|i| ((key >> (i as u32 * FIELD_BITS)) & mask) as Relation));
        ArrayType { t, upper }
    }
}

impl fmt::Display for ArrayType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = Self::pairs(self.t)
            .iter()
            .zip(&self.upper)
            .map(|(&(i, j), r)| format!("T{}{}={r}", i + 1, j + 1))
            .collect();
        write!(f, "{}", cells.join(" "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TWitness {
    pub relation: Relation,
    pub array_type: ArrayType,
    pub pair1: (Point, Point),
    pub pair2: (Point, Point),
    pub count1: u64,
    pub count2: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TConditionReport {
    pub t: usize,
    pub passed: bool,
    pub witness: Option<TWitness>,
    /// Fingerprint of the scheme the report is about.
    #[serde(skip)]
    scheme_fingerprint: Fingerprint,
}

/// Packed types of all completions of `(a, b)`, without the fixed `T_12`.
fn completion_keys(scheme: &Scheme, t: usize, a: Point, b: Point, out: &mut Vec<u64>) {
    let n = scheme.n();
    let (row_a, row_b) = (scheme.row(a), scheme.row(b));
    out.clear();
    match t {
        3 => out.extend((0..n).map(|g| (row_a[g] as u64) << FIELD_BITS | row_b[g] as u64)),
        _ => {
            for g3 in 0..n {
                let row_3 = scheme.row(g3);
                let (t13, t23) = (row_a[g3] as u64, row_b[g3] as u64);
                // most significant first: T13 T14 T23 T24 T34
                out.extend((0..n).map(|g4| {
                    t13 << (4 * FIELD_BITS)
                        | (row_a[g4] as u64) << (3 * FIELD_BITS)
                        | t23 << (2 * FIELD_BITS)
                        | (row_b[g4] as u64) << FIELD_BITS
                        | row_3[g4] as u64
                }));
            }
        }
    }
}

fn fingerprint_pair(scheme: &Scheme, t: usize, a: Point, b: Point, buf: &mut Vec<u64>) -> Fingerprint {
    completion_keys(scheme, t, a, b, buf);
    let mut h = MultisetHasher::default();
    for &k in buf.iter() {
        h.add(k);
    }
    h.finish()
}

/// Exact completion counts of `(a, b)` as a sorted list of `(type, count)`.
pub fn completion_counts(scheme: &Scheme, t: usize, pair: (Point, Point)) -> Result<Vec<(ArrayType, u64)>, TConditionError> {
    validate(scheme, t)?;
    let r = scheme.relation(pair.0, pair.1);
    let mut keys = Vec::new();
    completion_keys(scheme, t, pair.0, pair.1, &mut keys);
    Ok(run_lengths(&mut keys).into_iter().map(|(k, c)| (ArrayType::from_key(t, r, k), c)).collect())
}

fn run_lengths(keys: &mut [u64]) -> Vec<(u64, u64)> {
    keys.sort_unstable();
    let mut out: Vec<(u64, u64)> = Vec::new();
    for &k in keys.iter() {
        match out.last_mut() {
            Some((last, c)) if *last == k => *c += 1,
            _ => out.push((k, 1)),
        }
    }
    out
}

/// `c_T^r(α, β)` by enumerating all tuples directly.
pub fn count_array_type(scheme: &Scheme, array_type: &ArrayType, pair: (Point, Point)) -> u64 {
    let n = scheme.n();
    let mut gamma = vec![pair.0, pair.1];
    let mut count = 0;
    fn rec(scheme: &Scheme, target: &ArrayType, gamma: &mut Vec<Point>, n: usize, count: &mut u64) {
        if gamma.len() == target.t {
            if ArrayType::of_tuple(scheme, gamma) == *target {
                *count += 1;
            }
            return;
        }
        for g in 0..n {
            gamma.push(g);
            rec(scheme, target, gamma, n, count);
            gamma.pop();
        }
    }
    rec(scheme, array_type, &mut gamma, n, &mut count);
    count
}

fn validate(scheme: &Scheme, t: usize) -> Result<(), TConditionError> {
    if t != 3 && t != 4 {
        return Err(TConditionError::UnsupportedT(t));
    }
    if scheme.rank() > MAX_RANK {
        return Err(TConditionError::RankTooLarge(scheme.rank()));
    }
    Ok(())
}

pub fn check_t_condition(scheme: &Scheme, t: usize) -> Result<TConditionReport, TConditionError> {
    check_t_condition_with(scheme, t, Execution::default())
}

/// Fingerprints every pair's completion multiset, compares each pair with the
/// first pair of its relation in row-major order, and confirms mismatches by
/// exact comparison. The witness is for the smallest failing relation, its
/// first differing pair, and the smallest differing type.
pub fn check_t_condition_with(scheme: &Scheme, t: usize, exec: Execution) -> Result<TConditionReport, TConditionError> {
    validate(scheme, t)?;
    let n = scheme.n();
    let rows: Vec<Vec<Fingerprint>> = par::map_range(exec, n, |a| {
        let mut buf = Vec::with_capacity(if t == 4 { n * n } else { n });
        (0..n).map(|b| fingerprint_pair(scheme, t, a, b, &mut buf)).collect()
    });
    let reps = scheme.representatives();

    let mut witness = None;
    'relations: for (r, &rep) in reps.iter().enumerate() {
        let rep_fp = rows[rep.0][rep.1];
        let mut rep_counts: Option<Vec<(u64, u64)>> = None;
        for (a, row) in rows.iter().enumerate() {
            for (b, &fp) in row.iter().enumerate() {
                if scheme.relation(a, b) as usize != r || fp == rep_fp {
                    continue;
                }
                let mut buf = Vec::new();
                let expected = rep_counts.get_or_insert_with(|| {
                    completion_keys(scheme, t, rep.0, rep.1, &mut buf);
                    run_lengths(&mut buf)
                });
                completion_keys(scheme, t, a, b, &mut buf);
                let found = run_lengths(&mut buf);
                if found != *expected {
                    let (key, c1, c2) = first_difference(expected, &found);
                    witness = Some(TWitness {
                        relation: r as Relation,
                        array_type: ArrayType::from_key(t, r as Relation, key),
                        pair1: rep,
                        pair2: (a, b),
                        count1: c1,
                        count2: c2,
                    });
                    break 'relations;
                }
            }
        }
    }
    Ok(TConditionReport { t, passed: witness.is_none(), witness, scheme_fingerprint: scheme_fingerprint(scheme) })
}

fn first_difference(x: &[(u64, u64)], y: &[(u64, u64)]) -> (u64, u64, u64) {
    let (mut i, mut j) = (0, 0);
    loop {
        let kx = x.get(i).map(|e| e.0).unwrap_or(u64::MAX);
        let ky = y.get(j).map(|e| e.0).unwrap_or(u64::MAX);
        let key = kx.min(ky);
        let cx = if kx == key { x[i].1 } else { 0 };
        let cy = if ky == key { y[j].1 } else { 0 };
        if cx != cy {
            return (key, cx, cy);
        }
        i += usize::from(kx == key);
        j += usize::from(ky == key);
    }
}

fn scheme_fingerprint(scheme: &Scheme) -> Fingerprint {
    let mut h = SeqHasher::new(scheme.n() as u64);
    for &c in scheme.colors() {
        h.push(c as u64);
    }
    h.finish()
}

/// Proof that a particular scheme passed the 4-condition; only obtainable
/// from a passing t = 4 report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FourConditionCertificate {
    scheme_fingerprint: Fingerprint,
}

impl FourConditionCertificate {
    pub fn from_report(report: &TConditionReport) -> Option<Self> {
        (report.t == 4 && report.passed).then_some(FourConditionCertificate { scheme_fingerprint: report.scheme_fingerprint })
    }

    pub fn certifies(&self, scheme: &Scheme) -> bool {
        self.scheme_fingerprint == scheme_fingerprint(scheme)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scheme::compute_tensor;
    use crate::scheme::fixtures::{f3_lines, z9};

    /// Cayley scheme of Z_n with the given connection sets (a partition of Z_n∖{0}).
    fn cyclic_scheme(n: usize, classes: &[&[usize]]) -> Scheme {
        let labels: Vec<u32> = (0..n * n)
            .map(|i| {
                let d = (i % n + n - i / n) % n;
                if d == 0 {
                    0
                } else {
                    1 + classes.iter().position(|c| c.contains(&d)).unwrap() as u32
                }
            })
            .collect();
        Scheme::from_partition(n, &labels).unwrap()
    }

    #[test]
    fn three_condition_is_coherence() {
        for s in [z9(), f3_lines(), Scheme::trivial(5), cyclic_scheme(7, &[&[1, 2, 4], &[3, 5, 6]])] {
            compute_tensor(&s).unwrap();
            assert!(check_t_condition(&s, 3).unwrap().passed);
        }
    }

    #[test]
    fn four_condition_on_schurian_schemes() {
        for s in [z9(), f3_lines(), Scheme::trivial(6)] {
            let report = check_t_condition(&s, 4).unwrap();
            assert!(report.passed);
            let cert = FourConditionCertificate::from_report(&report).unwrap();
            assert!(cert.certifies(&s));
            assert!(!cert.certifies(&Scheme::trivial(9)));
        }
    }

    #[test]
    fn three_report_gives_no_certificate() {
        let report = check_t_condition(&z9(), 3).unwrap();
        assert!(FourConditionCertificate::from_report(&report).is_none());
    }

    #[test]
    fn bad_t_rejected() {
        assert_eq!(check_t_condition(&z9(), 2).unwrap_err(), TConditionError::UnsupportedT(2));
        assert_eq!(check_t_condition(&z9(), 5).unwrap_err(), TConditionError::UnsupportedT(5));
    }

    #[test]
    fn counts_match_direct_enumeration() {
        let s = z9();
        for t in [3, 4] {
            let counts = completion_counts(&s, t, (0, 2)).unwrap();
            let total: u64 = counts.iter().map(|c| c.1).sum();
            assert_eq!(total, 9u64.pow(t as u32 - 2));
            for (ty, c) in counts.iter().take(12) {
                assert_eq!(count_array_type(&s, ty, (0, 2)), *c, "{ty}");
                assert_eq!(ty.upper[0], s.relation(0, 2));
            }
        }
        // for t = 3 the counts are intersection numbers
        let tensor = compute_tensor(&s).unwrap();
        for (ty, c) in completion_counts(&s, 3, (0, 2)).unwrap() {
            assert_eq!(tensor.get(ty.upper[1], s.star(ty.upper[2]), ty.upper[0]) as u64, c);
        }
    }

    #[test]
    fn full_array_reconstruction() {
        let s = z9();
        let gamma = [0, 2, 5, 7];
        let ty = ArrayType::of_tuple(&s, &gamma);
        let full = ty.full(&s);
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(full[i][j], s.relation(gamma[i], gamma[j]));
            }
        }
    }

    /// Cayley graph on Z_4 x Z_4 with connection set `conn`, as a rank-3 scheme.
    fn z4_squared_graph(conn: &[(usize, usize)]) -> Scheme {
        let labels: Vec<u32> = (0..256)
            .map(|i| {
                let (a, b) = (i / 16, i % 16);
                let d = ((b / 4 + 4 - a / 4) % 4, (b % 4 + 4 - a % 4) % 4);
                if a == b {
                    0
                } else if conn.contains(&d) {
                    1
                } else {
                    2
                }
            })
            .collect();
        Scheme::from_partition(16, &labels).unwrap()
    }

    #[test]
    fn shrikhande_fails_rook_passes() {
        // both strongly regular with parameters (16, 6, 2, 2)
        let rook = z4_squared_graph(&[(0, 1), (0, 2), (0, 3), (1, 0), (2, 0), (3, 0)]);
        let shrikhande = z4_squared_graph(&[(0, 1), (0, 3), (1, 0), (3, 0), (1, 1), (3, 3)]);
        let (tr, ts) = (compute_tensor(&rook).unwrap(), compute_tensor(&shrikhande).unwrap());
        assert_eq!(tr, ts);
        assert!(check_t_condition(&rook, 4).unwrap().passed);
        for exec in [Execution::Sequential, Execution::Parallel] {
            let report = check_t_condition_with(&shrikhande, 4, exec).unwrap();
            assert!(!report.passed);
            let w = report.witness.unwrap();
            assert_eq!(count_array_type(&shrikhande, &w.array_type, w.pair1), w.count1);
            assert_eq!(count_array_type(&shrikhande, &w.array_type, w.pair2), w.count2);
            assert_ne!(w.count1, w.count2);
            assert_eq!(shrikhande.relation(w.pair1.0, w.pair1.1), w.relation);
            assert_eq!(shrikhande.relation(w.pair2.0, w.pair2.1), w.relation);
            assert!(check_t_condition(&shrikhande, 3).unwrap().passed);
        }
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let s = cyclic_scheme(13, &[&[1, 3, 9], &[2, 6, 5], &[4, 12, 10], &[8, 11, 7]]);
        let a = check_t_condition_with(&s, 4, Execution::Sequential).unwrap();
        let b = check_t_condition_with(&s, 4, Execution::Parallel).unwrap();
        assert_eq!(a, b);
        assert!(a.passed);
    }
}
