use serde::Serialize;

use super::{AlgIsoError, RelationBijection};
use crate::par::{find_first, Execution};
use crate::parabolic::Parabolic;
use crate::scheme::{IntersectionTensor, Point, Relation, Scheme};

/// `(μ, ν, ρ)` with `μ ≠ ν`, `r(μ,ν) ∈ e` and `r(μ,ρ) ∉ e`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BaseTriple {
    pub mu: Point,
    pub nu: Point,
    pub rho: Point,
    /// `r(μ,ρ)`
    pub r: Relation,
    /// `r(μ,ν)`
    pub s: Relation,
    /// `r(ν,ρ)`
    pub t: Relation,
}

impl BaseTriple {
    pub fn new(scheme: &Scheme, e: &Parabolic, mu: Point, nu: Point, rho: Point) -> Result<Self, AlgIsoError> {
        let n = scheme.n();
        let bad = |reason: &str| AlgIsoError::NotBaseTriple { mu, nu, rho, reason: reason.into() };
        if mu >= n || nu >= n || rho >= n {
            return Err(bad("point out of range"));
        }
        if mu == nu {
            return Err(bad("μ = ν"));
        }
        let (r, s, t) = (scheme.relation(mu, rho), scheme.relation(mu, nu), scheme.relation(nu, rho));
        if !e.contains(s) {
            return Err(bad("(μ, ν) is outside the parabolic"));
        }
        if e.contains(r) {
            return Err(bad("(μ, ρ) is inside the parabolic"));
        }
        Ok(BaseTriple { mu, nu, rho, r, s, t })
    }
}

/// The base triple at `mu` with the smallest admissible `ν` and `ρ`.
pub fn first_base_triple(scheme: &Scheme, e: &Parabolic, mu: Point) -> Result<BaseTriple, AlgIsoError> {
    let row = scheme.row(mu);
    let nu = (0..scheme.n()).find(|&b| b != mu && e.contains(row[b]));
    let rho = (0..scheme.n()).find(|&b| !e.contains(row[b]));
    match (nu, rho) {
        (Some(nu), Some(rho)) => BaseTriple::new(scheme, e, mu, nu, rho),
        _ => Err(AlgIsoError::NotBaseTriple { mu, nu: nu.unwrap_or(mu), rho: rho.unwrap_or(mu), reason: "parabolic is trivial".into() }),
    }
}

/// Coordinates `α ↦ (x_α, y_α)` relative to a base triple.
#[derive(Debug, Clone, Serialize)]
pub struct CoordinateMap {
    pub triple: BaseTriple,
    coords: Vec<(Relation, Relation)>,
    /// Sorted coordinate alphabet.
    alphabet: Vec<(Relation, Relation)>,
    #[serde(skip)]
    rank: usize,
    /// `inverse[x * rank + y]`, `usize::MAX` when unused.
    #[serde(skip)]
    inverse: Vec<Point>,
}

impl CoordinateMap {
    pub fn coordinates(&self, a: Point) -> (Relation, Relation) {
        self.coords[a]
    }

    pub fn alphabet(&self) -> &[(Relation, Relation)] {
        &self.alphabet
    }

    pub fn point(&self, (x, y): (Relation, Relation)) -> Option<Point> {
        let i = *self.inverse.get(x as usize * self.rank + y as usize)?;
        (i != usize::MAX).then_some(i)
    }
}

/// Computes the coordinates of every point and checks that they are distinct,
/// that they fill the alphabet exactly and that the anchors land where they should.
pub fn base_coordinates(
    scheme: &Scheme,
    tensor: &IntersectionTensor,
    e: &Parabolic,
    triple: BaseTriple,
) -> Result<CoordinateMap, AlgIsoError> {
    let n = scheme.n();
    let m = scheme.rank();
    let BaseTriple { mu, nu, rho, r, s, t } = triple;
    let coords: Vec<(Relation, Relation)> = (0..n)
        .map(|a| {
            let x = scheme.relation(mu, a);
            let y = if e.contains(x) { scheme.relation(rho, a) } else { scheme.relation(nu, a) };
            (x, y)
        })
        .collect();

    let mut alphabet = Vec::new();
    for x in 0..m as Relation {
        let target = if e.contains(x) { r } else { s };
        for y in 0..m as Relation {
            if tensor.get(x, tensor.star(y), target) > 0 {
                alphabet.push((x, y));
            }
        }
    }
    if alphabet.len() != n {
        return Err(AlgIsoError::AlphabetSize { alphabet: alphabet.len(), n });
    }

    let mut inverse = vec![usize::MAX; m * m];
    for (a, &(x, y)) in coords.iter().enumerate() {
        let slot = &mut inverse[x as usize * m + y as usize];
        if *slot != usize::MAX {
            return Err(AlgIsoError::DuplicateCoordinates { first: *slot, second: a, coords: (x, y) });
        }
        *slot = a;
        if alphabet.binary_search(&(x, y)).is_err() {
            return Err(AlgIsoError::OutsideAlphabet { point: a, coords: (x, y) });
        }
    }

    for (name, point, expected) in [("μ", mu, (0, scheme.star(r))), ("ν", nu, (s, scheme.star(t))), ("ρ", rho, (r, t))] {
        if coords[point] != expected {
            return Err(AlgIsoError::Anchor { name, found: coords[point], expected });
        }
    }
    Ok(CoordinateMap { triple, coords, alphabet, rank: m, inverse })
}

/// Every `τ' = (μ', ν', ρ')` in `y` with `μ' = mu` whose relations are the
/// images of those of `τ` under `phi`, in point order of `(ν', ρ')`.
pub fn find_compatible_triples(
    y: &Scheme,
    phi: &RelationBijection,
    tau: &BaseTriple,
    mu: Point,
) -> Vec<(Point, Point, Point)> {
    let (r, s, t) = (phi.apply(tau.r), phi.apply(tau.s), phi.apply(tau.t));
    let row = y.row(mu);
    let nus = (0..y.n()).filter(|&b| row[b] == s);
    let mut out = Vec::new();
    for nu in nus {
        let nu_row = y.row(nu);
        for rho in 0..y.n() {
            if row[rho] == r && nu_row[rho] == t {
                out.push((mu, nu, rho));
            }
        }
    }
    out
}

/// The point map `α ↦ f_τ'⁻¹(φ(f_τ(α)))` from `x` to `y`.
#[allow(clippy::too_many_arguments)]
pub fn induced_bijection(
    x: &Scheme,
    tx: &IntersectionTensor,
    y: &Scheme,
    ty: &IntersectionTensor,
    phi: &RelationBijection,
    e: &Parabolic,
    tau: BaseTriple,
    tau_prime: (Point, Point, Point),
) -> Result<Vec<Point>, AlgIsoError> {
    let e_image = image_parabolic(ty, phi, e)?;
    let (mu, nu, rho) = tau_prime;
    let tau_prime = BaseTriple::new(y, &e_image, mu, nu, rho)?;
    if (phi.apply(tau.r), phi.apply(tau.s), phi.apply(tau.t)) != (tau_prime.r, tau_prime.s, tau_prime.t) {
        return Err(AlgIsoError::IncompatibleTriples);
    }
    let cx = base_coordinates(x, tx, e, tau)?;
    let cy = base_coordinates(y, ty, &e_image, tau_prime)?;
    induced_from_coordinates(&cx, &cy, phi, x.n())
}

fn induced_from_coordinates(cx: &CoordinateMap, cy: &CoordinateMap, phi: &RelationBijection, n: usize) -> Result<Vec<Point>, AlgIsoError> {
    (0..n)
        .map(|a| {
            let (u, v) = cx.coordinates(a);
            let image = (phi.apply(u), phi.apply(v));
            cy.point(image).ok_or(AlgIsoError::OutsideAlphabet { point: a, coords: image })
        })
        .collect()
}

pub(crate) fn image_parabolic(ty: &IntersectionTensor, phi: &RelationBijection, e: &Parabolic) -> Result<Parabolic, AlgIsoError> {
    let image: Vec<Relation> = e.relations().iter().map(|&r| phi.apply(r)).collect();
    Parabolic::from_relations(&image, ty).ok_or(AlgIsoError::ParabolicImage)
}

/// Checks `φ(r(α,β)) = r(f(α), f(β))` for all pairs; returns the first pair
/// in row-major order that violates it.
pub fn verify_induced(x: &Scheme, y: &Scheme, f: &[Point], phi: &RelationBijection) -> Result<(), (Point, Point)> {
    verify_induced_with(x, y, f, phi, Execution::default())
}

pub fn verify_induced_with(x: &Scheme, y: &Scheme, f: &[Point], phi: &RelationBijection, exec: Execution) -> Result<(), (Point, Point)> {
    let n = x.n();
    if f.len() != n || y.n() != n {
        return Err((0, 0));
    }
    let hit = find_first(exec, n, |a| {
        let (row, image_row) = (x.row(a), y.row(f[a]));
        (0..n).find(|&b| phi.apply(row[b]) != image_row[f[b]])
    });
    match hit {
        Some((a, b)) => Err((a, b)),
        None => Ok(()),
    }
}

/// Outcome of the search for a point bijection inducing a given `φ`.
#[derive(Debug, Clone, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum InducedVerdict {
    Induced { map: Vec<Point>, tau: BaseTriple, tau_prime: (Point, Point, Point) },
    /// Every compatible `τ'` was tried against a fixed `τ`.
    NotInduced { tau: BaseTriple, candidates: usize },
}

impl InducedVerdict {
    pub fn is_induced(&self) -> bool {
        matches!(self, InducedVerdict::Induced { .. })
    }
}

/// Decides whether `φ` is induced by an isomorphism from `x` to `y`.
///
/// `τ` is fixed in `x`; if some isomorphism `g` induces `φ` then `τ^g` is
/// compatible and the map built from it is `g` itself, so exhausting all
/// compatible `τ'` settles the question. Only `φ` is decided here: whether the
/// schemes are isomorphic at all depends on every algebraic isomorphism.
pub fn is_induced(
    x: &Scheme,
    tx: &IntersectionTensor,
    y: &Scheme,
    ty: &IntersectionTensor,
    phi: &RelationBijection,
    e: &Parabolic,
) -> Result<InducedVerdict, AlgIsoError> {
    is_induced_at(x, tx, y, ty, phi, e, 0)
}

/// As [`is_induced`] with `τ` anchored at `mu`. The verdict does not depend
/// on `mu`; only which inducing map is reported may change.
pub fn is_induced_at(
    x: &Scheme,
    tx: &IntersectionTensor,
    y: &Scheme,
    ty: &IntersectionTensor,
    phi: &RelationBijection,
    e: &Parabolic,
    mu: Point,
) -> Result<InducedVerdict, AlgIsoError> {
    phi.verify(tx, ty)?;
    if x.n() != y.n() {
        return Err(AlgIsoError::NotAlgebraic("different degrees".into()));
    }
    let e_image = image_parabolic(ty, phi, e)?;
    let tau = first_base_triple(x, e, mu % x.n())?;
    let cx = base_coordinates(x, tx, e, tau)?;
    let mut candidates = 0;
    for mu in 0..y.n() {
        for tau_prime in find_compatible_triples(y, phi, &tau, mu) {
            candidates += 1;
            let Ok(tp) = BaseTriple::new(y, &e_image, tau_prime.0, tau_prime.1, tau_prime.2) else { continue };
            let Ok(cy) = base_coordinates(y, ty, &e_image, tp) else { continue };
            let Ok(map) = induced_from_coordinates(&cx, &cy, phi, x.n()) else { continue };
            if verify_induced(x, y, &map, phi).is_ok() {
                return Ok(InducedVerdict::Induced { map, tau, tau_prime });
            }
        }
    }
    Ok(InducedVerdict::NotInduced { tau, candidates })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algiso::find_algebraic_isomorphisms;
    use crate::generators::{andre_spread, desarguesian_spread, spread_scheme};
    use crate::parabolic::ParabolicLattice;
    use crate::scheme::compute_tensor;
    use crate::scheme::fixtures::{f3_lines, z9};

    fn nontrivial_parabolics(t: &IntersectionTensor) -> Vec<Parabolic> {
        let l = ParabolicLattice::from_tensor(t);
        l.nontrivial().into_iter().map(|i| l.parabolics()[i].clone()).collect()
    }

    #[test]
    fn z9_coordinates() {
        let x = z9();
        let t = compute_tensor(&x).unwrap();
        let e = Parabolic::from_relations(&[x.relation(0, 3)], &t).unwrap();
        let tau = BaseTriple::new(&x, &e, 0, 3, 1).unwrap();
        let c = base_coordinates(&x, &t, &e, tau).unwrap();
        let distinct: std::collections::HashSet<_> = (0..9).map(|a| c.coordinates(a)).collect();
        assert_eq!(distinct.len(), 9);
        assert_eq!(c.coordinates(0), (0, x.star(x.relation(0, 1))));
        assert!(BaseTriple::new(&x, &e, 0, 1, 3).is_err());
        assert!(BaseTriple::new(&x, &e, 0, 0, 1).is_err());
    }

    #[test]
    fn z9_translation_is_induced() {
        let x = z9();
        let t = compute_tensor(&x).unwrap();
        let e = Parabolic::from_relations(&[x.relation(0, 3)], &t).unwrap();
        let id = RelationBijection::identity(x.rank());
        let tau = BaseTriple::new(&x, &e, 0, 3, 1).unwrap();
        let same = induced_bijection(&x, &t, &x, &t, &id, &e, tau, (0, 3, 1)).unwrap();
        assert_eq!(same, (0..9).collect::<Vec<_>>());
        let f = induced_bijection(&x, &t, &x, &t, &id, &e, tau, (1, 4, 2)).unwrap();
        assert_eq!(f, (0..9).map(|a| (a + 1) % 9).collect::<Vec<_>>());
        assert!(verify_induced(&x, &x, &f, &id).is_ok());
        assert!(matches!(induced_bijection(&x, &t, &x, &t, &id, &e, tau, (1, 4, 3)), Err(AlgIsoError::IncompatibleTriples)));
    }

    #[test]
    fn coordinates_are_bijective_for_every_triple() {
        for x in [z9(), f3_lines()] {
            let t = compute_tensor(&x).unwrap();
            for e in nontrivial_parabolics(&t) {
                for mu in 0..x.n() {
                    for nu in 0..x.n() {
                        for rho in 0..x.n() {
                            if let Ok(tau) = BaseTriple::new(&x, &e, mu, nu, rho) {
                                base_coordinates(&x, &t, &e, tau).unwrap();
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn verify_induced_reports_first_violation() {
        let x = z9();
        let id = RelationBijection::identity(x.rank());
        // swapping 1 and 2 breaks r(0,1)
        let mut f: Vec<usize> = (0..9).collect();
        f.swap(1, 2);
        assert_eq!(verify_induced(&x, &x, &f, &id), Err((0, 1)));
        assert_eq!(verify_induced_with(&x, &x, &f, &id, Execution::Sequential), Err((0, 1)));
    }

    #[test]
    fn algebraic_automorphisms_of_z9_are_induced() {
        let x = z9();
        let t = compute_tensor(&x).unwrap();
        let e = &nontrivial_parabolics(&t)[0];
        for phi in find_algebraic_isomorphisms(&t, &t, usize::MAX) {
            let v = is_induced(&x, &t, &x, &t, &phi, e).unwrap();
            let InducedVerdict::Induced { map, .. } = v else { panic!("{phi:?} not induced") };
            // brute-force check independent of verify_induced
            for a in 0..9 {
                for b in 0..9 {
                    assert_eq!(phi.apply(x.relation(a, b)), x.relation(map[a], map[b]));
                }
            }
        }
    }

    #[test]
    fn verdict_does_not_depend_on_the_anchor() {
        let x = f3_lines();
        let t = compute_tensor(&x).unwrap();
        let e = &nontrivial_parabolics(&t)[0];
        for phi in find_algebraic_isomorphisms(&t, &t, 6) {
            let verdicts: Vec<bool> = (0..9).map(|mu| is_induced_at(&x, &t, &x, &t, &phi, e, mu).unwrap().is_induced()).collect();
            assert!(verdicts.iter().all(|&v| v == verdicts[0]), "{phi:?}: {verdicts:?}");
        }
    }

    #[test]
    fn hall_is_not_induced() {
        let des = spread_scheme(&desarguesian_spread(9).unwrap()).unwrap();
        let hall = spread_scheme(&andre_spread(3, 1).unwrap()).unwrap();
        let (td, th) = (compute_tensor(&des).unwrap(), compute_tensor(&hall).unwrap());
        let phis = find_algebraic_isomorphisms(&td, &th, 3);
        assert_eq!(phis.len(), 3);
        for phi in &phis {
            for e in nontrivial_parabolics(&td) {
                match is_induced(&des, &td, &hall, &th, phi, &e).unwrap() {
                    InducedVerdict::NotInduced { candidates, .. } => assert!(candidates > 0),
                    v => panic!("induced: {v:?}"),
                }
            }
        }
        // sanity: the Desarguesian scheme's own identity is induced
        let id = RelationBijection::identity(td.rank());
        let e = &nontrivial_parabolics(&td)[0];
        assert!(is_induced(&des, &td, &des, &td, &id, e).unwrap().is_induced());
    }
}
