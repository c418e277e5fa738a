use proptest::prelude::*;

use frobscheme::algiso::{find_algebraic_isomorphisms, is_induced, InducedVerdict, RelationBijection};
use frobscheme::frobenius::{build_frobenius, FrobeniusSpec};
use frobscheme::generators::CirculantSpec;
use frobscheme::par::Execution;
use frobscheme::parabolic::{equivalenced_valency, indistinguishing_number, ParabolicLattice};
use frobscheme::scheme::{compute_tensor, wl_closure_with, Scheme};
use frobscheme::tcond::check_t_condition_with;

fn dihedral(m: u64) -> Scheme {
    let spec = FrobeniusSpec::cyclic(m, &[-1]).unwrap();
    Scheme::from_orbitals(&build_frobenius(&spec).unwrap()).unwrap()
}

/// Symmetric circulant on `n` points from a bitmask over `1..=n/2`.
fn circulant(n: usize, mask: u64) -> CirculantSpec {
    let conn: Vec<usize> = (1..n).filter(|&d| mask >> (d.min(n - d) - 1) & 1 == 1).collect();
    CirculantSpec::new(n, &conn)
}

fn permutation(n: usize, seed: u64) -> Vec<usize> {
    // Fisher-Yates driven by a splitmix stream
    let mut state = seed;
    let mut next = move || {
        state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    };
    let mut p: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        p.swap(i, (next() % (i as u64 + 1)) as usize);
    }
    p
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn dihedral_schemes_pass_the_screen(half in 2u64..30) {
        let m = 2 * half + 1;
        let s = dihedral(m);
        let t = compute_tensor(&s).unwrap();
        prop_assert_eq!(equivalenced_valency(&t), Some(2));
        prop_assert_eq!(indistinguishing_number(&t), 1);
        prop_assert!(check_t_condition_with(&s, 4, Execution::Parallel).unwrap().passed);
        let closed = wl_closure_with(s.n(), s.colors(), Execution::Parallel).into_scheme().unwrap();
        prop_assert_eq!(closed, s.canonicalized());
    }

    #[test]
    fn closures_are_coherent_and_idempotent(n in 5usize..36, mask in any::<u64>()) {
        let c = circulant(n, mask);
        let once = wl_closure_with(n, &c.colors(), Execution::Parallel);
        let seq = wl_closure_with(n, &c.colors(), Execution::Sequential);
        prop_assert_eq!(&once, &seq);
        let s = once.into_scheme().unwrap();
        let t = compute_tensor(&s).unwrap();
        prop_assert!(t.triangle_violation().is_none());
        prop_assert!(t.row_sum_violation().is_none());
        let twice = wl_closure_with(n, s.colors(), Execution::Parallel).into_scheme().unwrap();
        prop_assert_eq!(twice, s);
    }

    #[test]
    fn parallel_and_sequential_reports_agree(n in 5usize..24, mask in any::<u64>()) {
        let s = wl_closure_with(n, &circulant(n, mask).colors(), Execution::Sequential).into_scheme().unwrap();
        for t in [3, 4] {
            let a = check_t_condition_with(&s, t, Execution::Sequential).unwrap();
            let b = check_t_condition_with(&s, t, Execution::Parallel).unwrap();
            prop_assert_eq!(a.passed, b.passed);
            prop_assert_eq!(a.witness, b.witness);
        }
        prop_assert!(check_t_condition_with(&s, 3, Execution::Parallel).unwrap().passed);
    }

    #[test]
    fn relabelled_schemes_are_isomorphic(half in 4u64..20, seed in any::<u64>()) {
        let x = dihedral(2 * half + 1);
        let f = permutation(x.n(), seed);
        let y = x.relabel_points(&f);
        let (tx, ty) = (compute_tensor(&x).unwrap(), compute_tensor(&y).unwrap());
        let id = RelationBijection::identity(x.rank());
        prop_assert!(find_algebraic_isomorphisms(&tx, &ty, usize::MAX).contains(&id));
        prop_assert_eq!(
            check_t_condition_with(&x, 4, Execution::Parallel).unwrap().passed,
            check_t_condition_with(&y, 4, Execution::Parallel).unwrap().passed
        );
        let lattice = ParabolicLattice::from_tensor(&tx);
        if let Some(&i) = lattice.nontrivial().first() {
            let v = is_induced(&x, &tx, &y, &ty, &id, &lattice.parabolics()[i]).unwrap();
            let InducedVerdict::Induced { map, .. } = v else { panic!("relabelling not recovered") };
            for a in 0..x.n() {
                for b in 0..x.n() {
                    prop_assert_eq!(x.relation(a, b), y.relation(map[a], map[b]));
                }
            }
        }
    }
}
