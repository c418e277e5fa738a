use thiserror::Error;

use super::field::{FieldError, FiniteField};
use crate::frobenius::{FrobeniusSpec, KernelFactor};
use crate::scheme::{Scheme, SchemeError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpreadError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("q = {0} is not a square")]
    NotSquare(u64),
    #[error("delta = {0} is not a nonzero element of the subfield")]
    BadDelta(usize),
    #[error("expected {expected} components, found {found}")]
    ComponentCount { expected: usize, found: usize },
    #[error("component {0} has {1} points, expected q")]
    ComponentSize(usize, usize),
    #[error("component {0} is not an additive subgroup")]
    NotSubgroup(usize),
    #[error("point {point} lies in components {first} and {second}")]
    Overlap { point: usize, first: usize, second: usize },
    #[error("point {0} is not covered")]
    Uncovered(usize),
    #[error(transparent)]
    Scheme(#[from] SchemeError),
}

/// A partition of `F_q^2 ∖ {0}` into `q + 1` subgroups of order `q` (with 0
/// added back). The point `(x, y)` has index `x·q + y`.
#[derive(Debug, Clone)]
pub struct Spread {
    field: FiniteField,
    components: Vec<Vec<usize>>,
}

impl Spread {
    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn q(&self) -> usize {
        self.field.order()
    }

    /// Sorted point lists.
    pub fn components(&self) -> &[Vec<usize>] {
        &self.components
    }

    pub fn point_count(&self) -> usize {
        self.q() * self.q()
    }

    pub fn add_points(&self, a: usize, b: usize) -> usize {
        let q = self.q();
        let f = &self.field;
        f.add(a / q, b / q) * q + f.add(a % q, b % q)
    }

    pub fn sub_points(&self, a: usize, b: usize) -> usize {
        let q = self.q();
        let f = &self.field;
        f.sub(a / q, b / q) * q + f.sub(a % q, b % q)
    }

    /// Builds and verifies a spread from raw components.
    pub fn from_components(field: FiniteField, components: Vec<Vec<usize>>) -> Result<Self, SpreadError> {
        let mut components: Vec<Vec<usize>> = components
            .into_iter()
            .map(|mut c| {
                c.sort_unstable();
                c
            })
            .collect();
        components.sort();
        let spread = Spread { field, components };
        verify_spread(&spread)?;
        Ok(spread)
    }
}

/// Component sizes, subgroup closure, pairwise trivial intersection, cover.
pub fn verify_spread(spread: &Spread) -> Result<(), SpreadError> {
    let q = spread.q();
    if spread.components.len() != q + 1 {
        return Err(SpreadError::ComponentCount { expected: q + 1, found: spread.components.len() });
    }
    let mut owner = vec![usize::MAX; q * q];
    for (i, c) in spread.components.iter().enumerate() {
        if c.len() != q {
            return Err(SpreadError::ComponentSize(i, c.len()));
        }
        let closed = c.contains(&0) && c.iter().all(|&a| c.iter().all(|&b| c.binary_search(&spread.add_points(a, b)).is_ok()));
        if !closed {
            return Err(SpreadError::NotSubgroup(i));
        }
        for &x in c.iter().filter(|&&x| x != 0) {
            if owner[x] != usize::MAX {
                return Err(SpreadError::Overlap { point: x, first: owner[x], second: i });
            }
            owner[x] = i;
        }
    }
    match (1..q * q).find(|&x| owner[x] == usize::MAX) {
        Some(x) => Err(SpreadError::Uncovered(x)),
        None => Ok(()),
    }
}

/// Component `{(x, m·x)}`.
fn line(field: &FiniteField, m: usize) -> Vec<usize> {
    let q = field.order();
    (0..q).map(|x| x * q + field.mul(m, x)).collect()
}

fn vertical(q: usize) -> Vec<usize> {
    (0..q).collect()
}

/// The one-dimensional `F_q`-subspaces of `F_q^2`.
pub fn desarguesian_spread(q: u64) -> Result<Spread, SpreadError> {
    let field = FiniteField::new(q)?;
    let mut components: Vec<Vec<usize>> = (0..field.order()).map(|m| line(&field, m)).collect();
    components.push(vertical(field.order()));
    Spread::from_components(field, components)
}

/// The André spread of order `q = s^2`: the components `y = m·x` with
/// `m^{s+1} = delta` are replaced by `y = m·x^s`. For `s = 3` this is the Hall
/// spread. `delta` is a field element index that must lie in `F_s^*`.
pub fn andre_spread(s: u64, delta: usize) -> Result<Spread, SpreadError> {
    let q = s.checked_mul(s).ok_or(SpreadError::NotSquare(s))?;
    let field = FiniteField::new(q)?;
    let subfield = field.subfield(s).ok_or(SpreadError::NotSquare(q))?;
    if delta == 0 || !subfield.contains(&delta) {
        return Err(SpreadError::BadDelta(delta));
    }
    let qn = field.order();
    let mut components = Vec::new();
    for m in 0..qn {
        if m != 0 && field.pow(m, s + 1) == delta {
            components.push((0..qn).map(|x| x * qn + field.mul(m, field.pow(x, s))).collect());
        } else {
            components.push(line(&field, m));
        }
    }
    components.push(vertical(qn));
    Spread::from_components(field, components)
}

/// Translation scheme of a spread: `(a, b)` lies in the relation of the
/// component containing `b - a`.
pub fn spread_scheme(spread: &Spread) -> Result<Scheme, SpreadError> {
    verify_spread(spread)?;
    let n = spread.point_count();
    let mut owner = vec![0u32; n];
    for (i, c) in spread.components.iter().enumerate() {
        for &x in c.iter().filter(|&&x| x != 0) {
            owner[x] = i as u32 + 1;
        }
    }
    let labels: Vec<u32> = (0..n * n).map(|i| owner[spread.sub_points(i % n, i / n)]).collect();
    Ok(Scheme::from_partition(n, &labels)?)
}

/// Frobenius spec whose kernel is `F_q^2` as `F_p^{2e}` and whose complement
/// is the scalar multiplications by `F_q^*`. Kernel element indices coincide
/// with the spread point indices.
pub fn desarguesian_frobenius_spec(q: u64) -> Result<FrobeniusSpec, SpreadError> {
    let field = FiniteField::new(q)?;
    let (p, e) = (field.characteristic(), field.degree() as usize);
    let w = field.primitive_element();
    let dim = 2 * e;
    // kernel digit i (most significant first) is the coefficient of p^{dim-1-i} in x·q + y
    let to_vector = |point: usize| -> Vec<u64> {
        let mut v = vec![0u64; dim];
        let mut x = point;
        for i in (0..dim).rev() {
            v[i] = x as u64 % p;
            x /= p as usize;
        }
        v
    };
    let qn = field.order();
    let mut matrix = vec![vec![0u64; dim]; dim];
    for j in 0..dim {
        let mut basis = vec![0u64; dim];
        basis[j] = 1;
        let point = basis.iter().fold(0usize, |acc, &c| acc * p as usize + c as usize);
        let (x, y) = (point / qn, point % qn);
        let image = to_vector(field.mul(w, x) * qn + field.mul(w, y));
        for i in 0..dim {
            matrix[i][j] = image[i];
        }
    }
    Ok(FrobeniusSpec {
        kernel: vec![KernelFactor::ElementaryAbelian { p, dim, matrices: vec![matrix] }],
        complement_order: q - 1,
    })
}
