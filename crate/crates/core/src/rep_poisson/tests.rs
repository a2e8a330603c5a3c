use std::collections::BTreeMap;

use proptest::prelude::*;

use super::jacobiator::{check_jacobiator_formula, JacobiatorScope};
use super::*;
use crate::families::{kks, symmetric_pair_bracket};
use crate::free_algebra::word_elem;
use crate::matrix_involutions::{FormStyle, ThetaKind};

fn v(g: usize, i: usize, j: usize) -> PolyElem {
    poly::var(Var::new(g - 1, i - 1, j - 1))
}

fn transpose(d: usize) -> MatrixInvolution {
    MatrixInvolution::from_style(&FormStyle::Identity(d)).unwrap()
}

fn symplectic(d: usize) -> MatrixInvolution {
    MatrixInvolution::from_style(&FormStyle::Symplectic(d)).unwrap()
}

/// `{x_ij, x_kl} = δ_kj x_il − δ_il x_kj` for one generator, written out
/// independently of the double bracket machinery.
fn kks_closed_form(i: usize, j: usize, k: usize, l: usize) -> PolyElem {
    let mut out = PolyElem::zero();
    if k == j {
        out += &v(1, i, l);
    }
    if i == l {
        out -= &v(1, k, j);
    }
    out
}

#[test]
fn entry_polynomials() {
    let e = entry_poly(&word_elem(&[0, 1]), 0, 1, 2).unwrap();
    assert_eq!(e, poly::mul(&v(1, 1, 1), &v(2, 1, 2)) + poly::mul(&v(1, 1, 2), &v(2, 2, 2)));
    assert_eq!(entry_poly(&crate::free_algebra::one(), 1, 1, 3).unwrap(), poly::one_poly());
    assert!(entry_poly(&crate::free_algebra::one(), 0, 1, 3).unwrap().is_zero());
    let sum = crate::free_algebra::gen(0) + crate::free_algebra::gen(1);
    assert_eq!(entry_poly(&sum, 0, 0, 2).unwrap(), v(1, 1, 1) + v(2, 1, 1));
    assert!(matches!(entry_poly(&sum, 2, 0, 2), Err(Error::IndexOutOfRange(_))));
}

#[test]
fn var_round_trip() {
    let x: Var = "2:3:1".parse().unwrap();
    assert_eq!(x, Var::new(1, 2, 0));
    assert_eq!(x.to_string(), "2:3:1");
    assert!("0:1:1".parse::<Var>().is_err());
    assert!("1:1".parse::<Var>().is_err());
}

#[test]
fn plain_kks_matches_closed_form() {
    for d in 1..=3 {
        let s = PoissonStructure::induce_plain(&kks(1), d).unwrap();
        for (i, j, k, l) in itertools(d) {
            assert_eq!(
                s.var_bracket(&Var::new(0, i - 1, j - 1), &Var::new(0, k - 1, l - 1)),
                kks_closed_form(i, j, k, l),
                "d={d} ({i},{j},{k},{l})"
            );
        }
    }
    let s = PoissonStructure::induce_plain(&kks(1), 2).unwrap();
    assert_eq!(s.poisson_eval(&v(1, 1, 1), &v(1, 1, 2)), v(1, 1, 2));
    assert_eq!(s.poisson_eval(&v(1, 1, 2), &v(1, 2, 1)), v(1, 1, 1) - v(1, 2, 2));
    assert!(s.poisson_eval(&v(1, 1, 2), &poly::one_poly()).is_zero());
}

fn itertools(d: usize) -> Vec<(usize, usize, usize, usize)> {
    let r = 1..=d;
    r.clone()
        .flat_map(|i| {
            r.clone().flat_map(move |j| {
                (1..=d).flat_map(move |k| (1..=d).map(move |l| (i, j, k, l)))
            })
        })
        .collect()
}

#[test]
fn twisted_kks_transpose_is_so3() {
    let s = PoissonStructure::induce_twisted(&kks(1), &InvolutionSpec::PhiMinus, &transpose(3)).unwrap();
    assert_eq!(s.ring_vars().len(), 3);
    for i in 1..=3 {
        assert!(s.reduce(&v(1, i, i)).is_zero());
        for j in 1..=3 {
            assert_eq!(s.reduce(&v(1, j, i)), -s.reduce(&v(1, i, j)));
        }
    }
    assert_eq!(s.poisson_eval(&v(1, 1, 2), &v(1, 1, 3)), -s.reduce(&v(1, 2, 3)));
    assert!(check_jacobi_ring(&s, RingScope::Exhaustive).passed);
    assert!(check_skew(&s).passed);
}

#[test]
fn normal_form_ranks() {
    for d in 1..=4 {
        let sym = PoissonStructure::induce_twisted(&kks(2), &InvolutionSpec::PhiMinus, &transpose(d)).unwrap();
        assert_eq!(sym.ring_vars().len(), 2 * d * (d - 1) / 2, "symmetric d={d}");
        assert_eq!(sym.is_zero_ring(), d == 1);
        if d % 2 == 0 {
            let sk = PoissonStructure::induce_twisted(&kks(2), &InvolutionSpec::PhiMinus, &symplectic(d)).unwrap();
            assert_eq!(sk.ring_vars().len(), 2 * d * (d + 1) / 2, "skew d={d}");
        }
    }
    let s = PoissonStructure::induce_twisted(&kks(1), &InvolutionSpec::PhiMinus, &symplectic(2)).unwrap();
    let t = s.twist().unwrap();
    assert_eq!(t.nf.rank(), 1);
    for rel in t.nf.relations() {
        let p: PolyElem = rel.map_keys(|x| (Monomial::var(*x), q(1)));
        assert!(t.nf.reduce(&p).is_zero());
    }
    for x in t.nf.vars() {
        let once = t.nf.reduce(&poly::var(*x));
        assert_eq!(t.nf.reduce(&once), once);
    }
}

#[test]
fn jacobi_ring_detects_non_poisson() {
    let s = PoissonStructure::induce_plain(&kks(2), 2).unwrap();
    assert!(check_jacobi_ring(&s, RingScope::Exhaustive).passed);
    let bad = PoissonStructure::induce_plain(&symmetric_pair_bracket(), 2).unwrap();
    let r = check_jacobi_ring(&bad, RingScope::Exhaustive);
    assert!(!r.passed);
    // The witness is a genuine nonzero Jacobiator of three variables.
    let c = r.counterexample.unwrap();
    let names: Vec<Var> = c.inputs.trim_matches(|ch| ch == '(' || ch == ')')
        .split(", ")
        .map(|x| x.parse().unwrap())
        .collect();
    let (f, g, h) = (poly::var(names[0]), poly::var(names[1]), poly::var(names[2]));
    let direct = bad.poisson_eval(&f, &bad.poisson_eval(&g, &h))
        + bad.poisson_eval(&g, &bad.poisson_eval(&h, &f))
        + bad.poisson_eval(&h, &bad.poisson_eval(&f, &g));
    assert!(!direct.is_zero());
    assert_eq!(show(&direct), c.lhs);
}

#[test]
fn sampled_jacobi_is_deterministic() {
    let s = PoissonStructure::induce_plain(&symmetric_pair_bracket(), 2).unwrap();
    let a = check_jacobi_ring(&s, RingScope::Sampled { budget: 40, seed: 3 });
    let b = check_jacobi_ring(&s, RingScope::Sampled { budget: 40, seed: 3 });
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
}

#[test]
fn multiplicativity_and_well_definedness() {
    let s = PoissonStructure::induce_plain(&kks(2), 2).unwrap();
    assert!(check_multiplicativity(&s, 2).passed);
    let w = check_twisted_well_defined(&kks(1), &InvolutionSpec::PhiMinus, &transpose(2), 3);
    assert!(w.passed, "{w:?}");
    let bad = check_twisted_well_defined(&kks(1), &InvolutionSpec::PhiPlus, &transpose(2), 2);
    assert!(!bad.passed);
    assert!(bad.counterexample.unwrap().inputs.starts_with("[substitution_symmetry]"));
    assert!(matches!(
        PoissonStructure::induce_twisted(&kks(1), &InvolutionSpec::PhiPlus, &transpose(2)),
        Err(Error::NotPhiAdapted(_))
    ));
}

#[test]
fn equivariance_and_broken_table() {
    let s = PoissonStructure::induce_plain(&kks(1), 2).unwrap();
    assert!(check_equivariance(&s).passed);
    let broken = s.with_perturbed_entry(Var::new(0, 0, 0), Var::new(0, 0, 1), &poly::one_poly());
    assert!(!check_equivariance(&broken).passed);
    let t = PoissonStructure::induce_twisted(&kks(1), &InvolutionSpec::PhiMinus, &transpose(3)).unwrap();
    let r = check_equivariance(&t);
    assert!(r.passed);
    assert!(r.scope.contains("3 basis elements"));
}

#[test]
fn evaluation_at_points() {
    let s = PoissonStructure::induce_plain(&kks(2), 2).unwrap();
    let mut point = BTreeMap::new();
    for g in 0..2 {
        for i in 0..2 {
            for j in 0..2 {
                point.insert(Var::new(g, i, j), q((i == j) as i64));
            }
        }
    }
    let e = entry_poly(&word_elem(&[0, 1]), 0, 0, 2).unwrap();
    assert_eq!(s.evaluate(&e, &point).unwrap(), q(1));
    assert!(matches!(
        evaluate_at_point(&v(3, 1, 1), &point),
        Err(Error::MissingVariable(_))
    ));
    let t = PoissonStructure::induce_twisted(&kks(1), &InvolutionSpec::PhiMinus, &transpose(2)).unwrap();
    let mut bad = BTreeMap::new();
    bad.insert(Var::new(0, 0, 0), q(5));
    assert!(matches!(t.evaluate(&v(1, 1, 1), &bad), Err(Error::RelationViolated(_))));
}

#[test]
fn theta_forms_give_orthogonal_and_symplectic_rings() {
    let o = MatrixInvolution::from_style(&FormStyle::Theta { n: 3, kind: ThetaKind::Orthogonal }).unwrap();
    let s = PoissonStructure::induce_twisted(&kks(1), &InvolutionSpec::PhiMinus, &o).unwrap();
    assert_eq!(s.ring_vars().len(), 3);
    assert!(check_jacobi_ring(&s, RingScope::Exhaustive).passed);
    let sp = MatrixInvolution::from_style(&FormStyle::Theta { n: 4, kind: ThetaKind::Symplectic }).unwrap();
    let s = PoissonStructure::induce_twisted(&kks(1), &InvolutionSpec::PhiMinus, &sp).unwrap();
    assert_eq!(s.ring_vars().len(), 10);
    assert!(check_jacobi_ring(&s, RingScope::Exhaustive).passed);
}

#[test]
fn jacobiator_formula_plain_and_twisted() {
    let scope = JacobiatorScope { samples: 30, ..Default::default() };
    let r = check_jacobiator_formula(&kks(2), 2, None, &scope);
    assert!(r.passed);
    assert_eq!(r.details["nonzero"], 0);
    let r = check_jacobiator_formula(&symmetric_pair_bracket(), 2, None, &scope);
    assert!(r.passed, "{r:?}");
    assert!(r.details["nonzero"].as_u64().unwrap() > 0);
    let tau = transpose(2);
    let r = check_jacobiator_formula(&symmetric_pair_bracket(), 2, Some((&InvolutionSpec::PhiMinus, &tau)), &scope);
    assert!(r.passed, "{r:?}");
    assert!(r.details["nonzero"].as_u64().unwrap() > 0);
}

#[test]
fn entry_cache_matches_reduced_entries() {
    let s = PoissonStructure::induce_twisted(&kks(2), &InvolutionSpec::PhiMinus, &symplectic(4)).unwrap();
    let mut cache = EntryCache::new(&s);
    for w in Word::enumerate(2, 0, 3) {
        for i in 0..4 {
            for j in 0..4 {
                let direct = s.reduce(&word_entry(&w, i, j, 4));
                assert_eq!(cache.entry(&w, i, j), &direct, "{w} ({i},{j})");
            }
        }
    }
    let mut ev = BracketEvaluator::new(s.bracket());
    let (a, b) = (word_elem(&[0, 1]), word_elem(&[1, 1, 0]));
    let t = ev.eval(&a, &b);
    let x = p_of(&Dual1::basis((0, 2)), &Dual1::basis((3, 1)));
    assert_eq!(cache.pair2(&t, &x), s.reduce(&pair2(&t, &x, 4)));
}

fn arb_poly() -> impl Strategy<Value = PolyElem> {
    let var = (0usize..2, 0usize..2, 0usize..2).prop_map(|(g, i, j)| Var::new(g, i, j));
    prop::collection::vec((prop::collection::vec(var, 0..3), -2i64..3), 0..4).prop_map(|ts| {
        PolyElem::from_terms(ts.into_iter().map(|(vs, c)| (Monomial::from_vars(vs), q(c))))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn induced_bracket_is_skew_and_leibniz(f in arb_poly(), g in arb_poly(), h in arb_poly()) {
        let s = PoissonStructure::induce_plain(&symmetric_pair_bracket(), 2).unwrap();
        prop_assert_eq!(s.poisson_eval(&f, &g), -s.poisson_eval(&g, &f));
        prop_assert_eq!(
            s.poisson_eval(&poly::mul(&f, &g), &h),
            poly::mul(&f, &s.poisson_eval(&g, &h)) + poly::mul(&s.poisson_eval(&f, &h), &g)
        );
    }
}
