//! Frobenius groups `G = H ⋊ K` with abelian kernel `H`, acting on `H`.
//!
//! `H` is a direct product of cyclic and elementary abelian factors and `K`
//! acts componentwise: by unit multiplication on a cyclic factor, by an
//! invertible matrix on an elementary abelian one. Points are elements of
//! `H` in mixed-radix order, first factor most significant; a vector
//! `(v_0, .., v_{d-1})` over `F_p` is linearised with `v_0` most significant.
//! Matrices act on column vectors, `v ↦ M v`.

mod lattice;
mod profile;

use std::collections::{HashSet, VecDeque};
use std::fmt;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numtheory::{gcd, is_prime, reduce};
use crate::perm::{PermGroup, Permutation};

pub use lattice::{invariant_lattice, InvariantSubgroupLattice, Subgroup};
pub use profile::{
    all_principal_sections, principal_sections, thm2_profile, CaseCheck, ProperVerdict, Section, SectionProfile,
    Thm2Profile,
};

/// Largest kernel order accepted; keeps subgroup enumeration exact.
pub const MAX_KERNEL_ORDER: u64 = 1 << 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FrobeniusError {
    #[error("spec error: {0}")]
    Spec(String),
    #[error("complement element {complement} fixes the nonzero kernel element {kernel_element} ({digits:?})")]
    FixedPoint { complement: String, kernel_element: usize, digits: Vec<u64> },
    #[error("complement generators generate a group of order {found}, spec says {expected}")]
    OrderMismatch { expected: u64, found: u64 },
    #[error("gcd(|H|, |K|) = gcd({kernel}, {complement}) is not 1")]
    NotCoprime { kernel: u64, complement: u64 },
    #[error("built group has order {found}, expected {expected}")]
    GroupOrder { expected: BigUint, found: BigUint },
    #[error("invalid spec JSON: {0}")]
    Json(String),
}

pub type Matrix = Vec<Vec<u64>>;

/// One direct factor of the kernel with the action of each complement generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KernelFactor {
    Cyclic { modulus: u64, units: Vec<u64> },
    ElementaryAbelian { p: u64, dim: usize, matrices: Vec<Matrix> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrobeniusSpec {
    pub kernel: Vec<KernelFactor>,
    pub complement_order: u64,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum FactorJson {
    Cyclic { cyclic: u64, units: Vec<i64> },
    ElementaryAbelian { elem_abelian: (u64, usize), matrices: Vec<Vec<Vec<i64>>> },
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecJson {
    kernel: Vec<FactorJson>,
    complement_order: u64,
}

impl FrobeniusSpec {
    /// Cyclic kernel `Z_m` with complement generated by `units` (reduced mod `m`,
    /// negative values allowed). The complement order is computed.
    pub fn cyclic(modulus: u64, units: &[i64]) -> Result<Self, FrobeniusError> {
        if modulus < 2 {
            return Err(FrobeniusError::Spec(format!("cyclic modulus {modulus} must be at least 2")));
        }
        let units: Vec<u64> = units.iter().map(|&u| reduce(u, modulus)).collect();
        let mut spec = FrobeniusSpec { kernel: vec![KernelFactor::Cyclic { modulus, units }], complement_order: 0 };
        spec.complement_order = spec.generated_complement_order()?;
        Ok(spec)
    }

    /// Order of the group generated by the complement generators, without
    /// checking fixed-point-freeness.
    pub fn generated_complement_order(&self) -> Result<u64, FrobeniusError> {
        let kernel = KernelGroup::new(&self.kernel)?;
        let gens = self.complement_generators()?;
        Ok(enumerate_complement(&kernel, &gens, kernel.order as usize)?.len() as u64)
    }

    pub fn kernel_order(&self) -> u64 {
        self.kernel
            .iter()
            .map(|f| match f {
                KernelFactor::Cyclic { modulus, .. } => *modulus,
                KernelFactor::ElementaryAbelian { p, dim, .. } => p.pow(*dim as u32),
            })
            .product()
    }

    fn complement_generators(&self) -> Result<Vec<ComplementElement>, FrobeniusError> {
        let counts: Vec<usize> = self
            .kernel
            .iter()
            .map(|f| match f {
                KernelFactor::Cyclic { units, .. } => units.len(),
                KernelFactor::ElementaryAbelian { matrices, .. } => matrices.len(),
            })
            .collect();
        let g = counts[0];
        if counts.iter().any(|&c| c != g) {
            return Err(FrobeniusError::Spec(format!("factors list different numbers of complement generators: {counts:?}")));
        }
        Ok((0..g)
            .map(|j| ComplementElement {
                actions: self
                    .kernel
                    .iter()
                    .map(|f| match f {
                        KernelFactor::Cyclic { units, .. } => FactorAction::Unit(units[j]),
                        KernelFactor::ElementaryAbelian { matrices, .. } => FactorAction::Matrix(matrices[j].clone()),
                    })
                    .collect(),
            })
            .collect())
    }

    /// Checks every spec invariant and enumerates the complement.
    pub fn validate(&self) -> Result<FrobeniusGroup, FrobeniusError> {
        let kernel = KernelGroup::new(&self.kernel)?;
        let gens = self.complement_generators()?;
        if gens.is_empty() {
            return Err(FrobeniusError::Spec("no complement generators given".into()));
        }
        if self.complement_order < 2 {
            return Err(FrobeniusError::Spec(format!("complement order {} must be at least 2", self.complement_order)));
        }
        for (factor, f) in self.kernel.iter().enumerate() {
            match f {
                KernelFactor::Cyclic { modulus, units } => {
                    if let Some(u) = units.iter().find(|&&u| gcd(u, *modulus) != 1) {
                        return Err(FrobeniusError::Spec(format!("{u} is not a unit modulo {modulus} (factor {factor})")));
                    }
                }
                KernelFactor::ElementaryAbelian { p, matrices, .. } => {
                    if let Some(m) = matrices.iter().find(|m| !is_invertible(m, *p)) {
                        return Err(FrobeniusError::Spec(format!("matrix {m:?} is singular over F_{p} (factor {factor})")));
                    }
                }
            }
        }
        // a fixed-point-free complement has order at most |H| - 1
        let elements = enumerate_complement(&kernel, &gens, kernel.order as usize)?;
        for kappa in elements.iter().skip(1) {
            if let Some(h) = kernel.smallest_fixed_nonzero(kappa) {
                return Err(FrobeniusError::FixedPoint {
                    complement: kappa.to_string(),
                    kernel_element: h,
                    digits: kernel.digits(h),
                });
            }
        }
        if elements.len() as u64 != self.complement_order {
            return Err(FrobeniusError::OrderMismatch { expected: self.complement_order, found: elements.len() as u64 });
        }
        if gcd(kernel.order, self.complement_order) != 1 {
            return Err(FrobeniusError::NotCoprime { kernel: kernel.order, complement: self.complement_order });
        }
        Ok(FrobeniusGroup { spec: self.clone(), kernel, generators: gens, complement: elements })
    }

    pub fn to_json_string(&self) -> String {
        let json = SpecJson {
            kernel: self
                .kernel
                .iter()
                .map(|f| match f {
                    KernelFactor::Cyclic { modulus, units } => {
                        FactorJson::Cyclic { cyclic: *modulus, units: units.iter().map(|&u| u as i64).collect() }
                    }
                    KernelFactor::ElementaryAbelian { p, dim, matrices } => FactorJson::ElementaryAbelian {
                        elem_abelian: (*p, *dim),
                        matrices: matrices
                            .iter()
                            .map(|m| m.iter().map(|row| row.iter().map(|&x| x as i64).collect()).collect())
                            .collect(),
                    },
                })
                .collect(),
            complement_order: self.complement_order,
        };
        serde_json::to_string(&json).expect("spec serialization cannot fail")
    }

    pub fn from_json_str(text: &str) -> Result<Self, FrobeniusError> {
        let json: SpecJson = serde_json::from_str(text).map_err(|e| FrobeniusError::Json(e.to_string()))?;
        let mut kernel = Vec::new();
        for f in json.kernel {
            kernel.push(match f {
                FactorJson::Cyclic { cyclic, units } => {
                    if cyclic < 2 {
                        return Err(FrobeniusError::Json(format!("cyclic modulus {cyclic} must be at least 2")));
                    }
                    KernelFactor::Cyclic { modulus: cyclic, units: units.iter().map(|&u| reduce(u, cyclic)).collect() }
                }
                FactorJson::ElementaryAbelian { elem_abelian: (p, dim), matrices } => {
                    if !is_prime(p) || dim == 0 {
                        return Err(FrobeniusError::Json(format!("elem_abelian needs a prime and a positive dimension, got [{p},{dim}]")));
                    }
                    let mut ms = Vec::new();
                    for m in matrices {
                        if m.len() != dim || m.iter().any(|row| row.len() != dim) {
                            return Err(FrobeniusError::Json(format!("matrix is not {dim}x{dim}")));
                        }
                        ms.push(m.iter().map(|row| row.iter().map(|&x| reduce(x, p)).collect()).collect());
                    }
                    KernelFactor::ElementaryAbelian { p, dim, matrices: ms }
                }
            });
        }
        Ok(FrobeniusSpec { kernel, complement_order: json.complement_order })
    }
}

/// Action of a complement element on one kernel factor.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FactorAction {
    Unit(u64),
    Matrix(Matrix),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ComplementElement {
    actions: Vec<FactorAction>,
}

impl fmt::Display for ComplementElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .actions
            .iter()
            .map(|a| match a {
                FactorAction::Unit(u) => u.to_string(),
                FactorAction::Matrix(m) => format!("{m:?}"),
            })
            .collect();
        if parts.len() == 1 {
            write!(f, "{}", parts[0])
        } else {
            write!(f, "({})", parts.join(", "))
        }
    }
}

/// The kernel as a product of cyclic groups `Z_{radix_i}` on digit vectors.
#[derive(Debug, Clone)]
pub struct KernelGroup {
    radices: Vec<u64>,
    /// Digit range of each factor.
    factor_digits: Vec<(usize, usize)>,
    factor_modulus: Vec<u64>,
    order: u64,
    /// Digits of every element, row-major.
    table: Vec<u64>,
}

impl KernelGroup {
    fn new(factors: &[KernelFactor]) -> Result<Self, FrobeniusError> {
        if factors.is_empty() {
            return Err(FrobeniusError::Spec("kernel has no factors".into()));
        }
        let mut radices = Vec::new();
        let mut factor_digits = Vec::new();
        let mut factor_modulus = Vec::new();
        for f in factors {
            let start = radices.len();
            match f {
                KernelFactor::Cyclic { modulus, .. } => {
                    if *modulus < 2 {
                        return Err(FrobeniusError::Spec(format!("cyclic modulus {modulus} must be at least 2")));
                    }
                    radices.push(*modulus);
                    factor_modulus.push(*modulus);
                }
                KernelFactor::ElementaryAbelian { p, dim, matrices } => {
                    if !is_prime(*p) || *dim == 0 {
                        return Err(FrobeniusError::Spec(format!("bad elementary abelian factor {p}^{dim}")));
                    }
                    if matrices.iter().any(|m| m.len() != *dim || m.iter().any(|r| r.len() != *dim)) {
                        return Err(FrobeniusError::Spec(format!("matrices must be {dim}x{dim}")));
                    }
                    radices.extend(std::iter::repeat_n(*p, *dim));
                    factor_modulus.push(*p);
                }
            }
            factor_digits.push((start, radices.len()));
        }
        let order = radices.iter().try_fold(1u64, |acc, &r| acc.checked_mul(r)).filter(|&o| o <= MAX_KERNEL_ORDER);
        let order = order.ok_or_else(|| FrobeniusError::Spec(format!("kernel order exceeds {MAX_KERNEL_ORDER}")))?;
        let mut group = KernelGroup { radices, factor_digits, factor_modulus, order, table: Vec::new() };
        group.table = (0..order as usize).flat_map(|x| group.slow_digits(x)).collect();
        Ok(group)
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn digits(&self, x: usize) -> Vec<u64> {
        self.digit_slice(x).to_vec()
    }

    fn digit_slice(&self, x: usize) -> &[u64] {
        let w = self.radices.len();
        &self.table[x * w..(x + 1) * w]
    }

    fn slow_digits(&self, mut x: usize) -> Vec<u64> {
        let mut d = vec![0u64; self.radices.len()];
        for i in (0..self.radices.len()).rev() {
            d[i] = x as u64 % self.radices[i];
            x /= self.radices[i] as usize;
        }
        d
    }

    pub fn index(&self, digits: &[u64]) -> usize {
        digits.iter().zip(&self.radices).fold(0usize, |acc, (&d, &r)| acc * r as usize + d as usize)
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        let (da, db) = (self.digit_slice(a), self.digit_slice(b));
        da.iter().zip(db).zip(&self.radices).fold(0usize, |acc, ((x, y), &r)| acc * r as usize + ((x + y) % r) as usize)
    }

    /// Elements with a single nonzero digit equal to 1; they generate the group.
    pub fn basis(&self) -> Vec<usize> {
        (0..self.radices.len())
            .map(|i| {
                let mut d = vec![0u64; self.radices.len()];
                d[i] = 1;
                self.index(&d)
            })
            .collect()
    }

    pub fn apply_digits(&self, kappa: &ComplementElement, digits: &[u64]) -> Vec<u64> {
        let mut out = digits.to_vec();
        for (f, action) in kappa.actions.iter().enumerate() {
            let (lo, hi) = self.factor_digits[f];
            let m = self.factor_modulus[f];
            match action {
                FactorAction::Unit(u) => out[lo] = digits[lo] * u % m,
                FactorAction::Matrix(mat) => {
                    for i in 0..hi - lo {
                        out[lo + i] = (0..hi - lo).map(|j| mat[i][j] * digits[lo + j]).sum::<u64>() % m;
                    }
                }
            }
        }
        out
    }

    pub fn apply(&self, kappa: &ComplementElement, x: usize) -> usize {
        self.index(&self.apply_digits(kappa, self.digit_slice(x)))
    }

    fn compose(&self, a: &ComplementElement, b: &ComplementElement) -> ComplementElement {
        let actions = a
            .actions
            .iter()
            .zip(&b.actions)
            .enumerate()
            .map(|(f, pair)| {
                let m = self.factor_modulus[f];
                match pair {
                    (FactorAction::Unit(x), FactorAction::Unit(y)) => FactorAction::Unit(x * y % m),
                    (FactorAction::Matrix(x), FactorAction::Matrix(y)) => FactorAction::Matrix(mat_mul(y, x, m)),
                    _ => unreachable!("factor kinds agree"),
                }
            })
            .collect();
        ComplementElement { actions }
    }

    fn identity_element(&self, template: &ComplementElement) -> ComplementElement {
        ComplementElement {
            actions: template
                .actions
                .iter()
                .map(|a| match a {
                    FactorAction::Unit(_) => FactorAction::Unit(1),
                    FactorAction::Matrix(m) => FactorAction::Matrix(identity_matrix(m.len())),
                })
                .collect(),
        }
    }

    /// Smallest nonzero kernel element fixed by `kappa`. Fixed points of a
    /// componentwise action are products of per-factor fixed points, so the
    /// smallest one has a single nonzero factor.
    fn smallest_fixed_nonzero(&self, kappa: &ComplementElement) -> Option<usize> {
        let mut best: Option<usize> = None;
        for (f, action) in kappa.actions.iter().enumerate() {
            let (lo, hi) = self.factor_digits[f];
            let m = self.factor_modulus[f];
            let local = match action {
                FactorAction::Unit(u) => {
                    let g = gcd((u + m - 1) % m, m);
                    (g != 1).then(|| vec![m / g])
                }
                FactorAction::Matrix(mat) => {
                    let dim = hi - lo;
                    let size = m.pow(dim as u32) as usize;
                    (1..size).find_map(|x| {
                        let mut v = vec![0u64; dim];
                        let mut y = x;
                        for i in (0..dim).rev() {
                            v[i] = y as u64 % m;
                            y /= m as usize;
                        }
                        let fixed = (0..dim).all(|i| (0..dim).map(|j| mat[i][j] * v[j]).sum::<u64>() % m == v[i]);
                        fixed.then_some(v)
                    })
                }
            };
            if let Some(v) = local {
                let mut digits = vec![0u64; self.radices.len()];
                digits[lo..hi].copy_from_slice(&v);
                let idx = self.index(&digits);
                best = Some(best.map_or(idx, |b| b.min(idx)));
            }
        }
        best
    }
}

fn enumerate_complement(
    kernel: &KernelGroup,
    gens: &[ComplementElement],
    limit: usize,
) -> Result<Vec<ComplementElement>, FrobeniusError> {
    let Some(first) = gens.first() else {
        return Ok(Vec::new());
    };
    let id = kernel.identity_element(first);
    let mut seen: HashSet<ComplementElement> = HashSet::from([id.clone()]);
    let mut out = vec![id.clone()];
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = kernel.compose(&x, g);
            if seen.insert(y.clone()) {
                out.push(y.clone());
                queue.push_back(y);
                if out.len() > limit {
                    return Err(FrobeniusError::Spec(format!(
                        "complement exceeds {limit} elements, so it cannot act fixed-point-freely"
                    )));
                }
            }
        }
    }
    Ok(out)
}

fn identity_matrix(n: usize) -> Matrix {
    (0..n).map(|i| (0..n).map(|j| u64::from(i == j)).collect()).collect()
}

fn mat_mul(a: &Matrix, b: &Matrix, p: u64) -> Matrix {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum::<u64>() % p).collect()).collect()
}

fn is_invertible(m: &Matrix, p: u64) -> bool {
    let n = m.len();
    let mut a: Vec<Vec<u64>> = m.iter().map(|r| r.iter().map(|x| x % p).collect()).collect();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| a[r][col] != 0) else {
            return false;
        };
        a.swap(col, pivot);
        let inv = crate::numtheory::pow_mod(a[col][col], p - 2, p);
        for r in 0..n {
            if r != col && a[r][col] != 0 {
                let factor = a[r][col] * inv % p;
                let pivot_row = a[col].clone();
                for (x, &y) in a[r].iter_mut().zip(&pivot_row) {
                    *x = (*x + p * p - factor * y % p) % p;
                }
            }
        }
    }
    true
}

/// A validated Frobenius group: kernel, complement elements, generators.
#[derive(Debug, Clone)]
pub struct FrobeniusGroup {
    spec: FrobeniusSpec,
    kernel: KernelGroup,
    generators: Vec<ComplementElement>,
    complement: Vec<ComplementElement>,
}

impl FrobeniusGroup {
    pub fn spec(&self) -> &FrobeniusSpec {
        &self.spec
    }

    pub fn kernel(&self) -> &KernelGroup {
        &self.kernel
    }

    pub fn kernel_order(&self) -> u64 {
        self.kernel.order
    }

    pub fn complement_order(&self) -> u64 {
        self.complement.len() as u64
    }

    /// All complement elements, identity first.
    pub fn complement(&self) -> &[ComplementElement] {
        &self.complement
    }

    /// The `K`-orbit of a kernel element.
    pub fn complement_orbit(&self, h: usize) -> Vec<usize> {
        let d = self.kernel.digits(h);
        let mut out: Vec<usize> =
            self.complement.iter().map(|k| self.kernel.index(&self.kernel.apply_digits(k, &d))).collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Permutation generators: kernel translations `h ↦ h + b`, then the
    /// complement generators.
    pub fn permutation_generators(&self) -> Vec<Permutation> {
        let n = self.kernel.order as usize;
        let mut gens: Vec<Permutation> = self
            .kernel
            .basis()
            .into_iter()
            .map(|b| Permutation::from_images_unchecked((0..n).map(|x| self.kernel.add(x, b)).collect()))
            .collect();
        for kappa in &self.generators {
            let p = Permutation::from_images_unchecked((0..n).map(|x| self.kernel.apply(kappa, x)).collect());
            if !p.is_identity() && !gens.contains(&p) {
                gens.push(p);
            }
        }
        gens
    }

    pub fn permutation_group(&self) -> PermGroup {
        PermGroup::new(self.kernel.order as usize, self.permutation_generators()).expect("generators share the degree")
    }
}

/// The permutation group of a spec on its kernel, with its order verified to
/// be `|H|·|K|`.
pub fn build_frobenius(spec: &FrobeniusSpec) -> Result<PermGroup, FrobeniusError> {
    let g = spec.validate()?;
    let group = g.permutation_group();
    let expected = BigUint::from(g.kernel_order()) * BigUint::from(g.complement_order());
    let found = group.order();
    if found != expected {
        return Err(FrobeniusError::GroupOrder { expected, found });
    }
    Ok(group)
}
