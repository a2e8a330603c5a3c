//! Named families of double brackets: KKS, linear brackets from structure
//! constants, quadratic brackets from an r-tensor, and the ORS example.

use num_traits::Zero;

use crate::double_bracket::DoubleBracket;
use crate::error::{Error, Result};
use crate::free_algebra::{gen, one, tensor2, Tensor2, Word};
use crate::lincomb::{format_q, q, Q};
use crate::report::{cx, CheckReport};

/// `⟦α_i, α_j⟧ = δ_ij (1⊗α_i − α_i⊗1)`
pub fn kks(n_gens: usize) -> DoubleBracket {
    DoubleBracket::from_fn(n_gens, |i, j| {
        if i == j {
            tensor2(&one(), &gen(i)) - tensor2(&gen(i), &one())
        } else {
            Tensor2::zero()
        }
    })
    .expect("KKS table is skew")
}

/// Structure constants `s^k_{ij}` of a multiplication on `k^L`, stored flat
/// in index order `(k; i, j)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureConstants {
    n: usize,
    s: Vec<Q>,
}

impl StructureConstants {
    pub fn new(n: usize, flat: Vec<Q>) -> Result<Self> {
        if flat.len() != n * n * n {
            return Err(Error::ShapeMismatch(format!(
                "structure constants need {} entries for L={n}, got {}",
                n * n * n,
                flat.len()
            )));
        }
        Ok(StructureConstants { n, s: flat })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize, usize) -> Q) -> Self {
        let mut s = Vec::with_capacity(n * n * n);
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    s.push(f(k, i, j));
                }
            }
        }
        StructureConstants { n, s }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `s^k_{ij}`
    pub fn get(&self, k: usize, i: usize, j: usize) -> &Q {
        &self.s[(k * self.n + i) * self.n + j]
    }

    pub fn flat(&self) -> &[Q] {
        &self.s
    }
}

/// `⟦α_i, α_j⟧ = Σ_k s^k_{ij} (α_k⊗1) − s^k_{ji} (1⊗α_k)`
pub fn linear_bracket(s: &StructureConstants) -> DoubleBracket {
    let n = s.n();
    DoubleBracket::from_fn(n, |i, j| {
        let mut t = Tensor2::zero();
        for k in 0..n {
            t.add_term((Word::letter(k), Word::empty()), s.get(k, i, j).clone());
            t.add_term((Word::empty(), Word::letter(k)), -s.get(k, j, i));
        }
        t
    })
    .expect("linear brackets are skew by construction")
}

/// The sign `c` for which `s^k_{ij} = c δ_{ij} δ_{ik}` reproduces KKS, found
/// by trying both signs against the KKS table.
pub fn kks_linear_sign(n_gens: usize) -> Option<i64> {
    let target = kks(n_gens);
    [1, -1].into_iter().find(|&c| {
        let s = StructureConstants::from_fn(n_gens, |k, i, j| {
            if i == j && i == k {
                q(c)
            } else {
                Q::zero()
            }
        });
        linear_bracket(&s) == target
    })
}

/// `Σ_m s^m_{ij} s^n_{mk} = Σ_m s^n_{im} s^m_{jk}` for all `i, j, k, n`.
pub fn check_associative(s: &StructureConstants) -> CheckReport {
    let n = s.n();
    let scope = format!("all {} index tuples (i,j,k,n), L={n}", n.pow(4));
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for t in 0..n {
                    let lhs: Q = (0..n).map(|m| s.get(m, i, j) * s.get(t, m, k)).sum();
                    let rhs: Q = (0..n).map(|m| s.get(t, i, m) * s.get(m, j, k)).sum();
                    if lhs != rhs {
                        return CheckReport::fail(
                            "associative",
                            scope,
                            cx(
                                format!("(i,j,k,n)=({},{},{},{})", i + 1, j + 1, k + 1, t + 1),
                                format_q(&lhs),
                                format_q(&rhs),
                            ),
                        );
                    }
                }
            }
        }
    }
    CheckReport::pass("associative", scope)
}

/// `s^k_{ij} = s^k_{ji}`
pub fn check_commutative(s: &StructureConstants) -> CheckReport {
    let n = s.n();
    let scope = format!("all {} index tuples (k,i,j), L={n}", n.pow(3));
    for k in 0..n {
        for i in 0..n {
            for j in i + 1..n {
                if s.get(k, i, j) != s.get(k, j, i) {
                    return CheckReport::fail(
                        "commutative",
                        scope,
                        cx(
                            format!("(k,i,j)=({},{},{})", k + 1, i + 1, j + 1),
                            format_q(s.get(k, i, j)),
                            format_q(s.get(k, j, i)),
                        ),
                    );
                }
            }
        }
    }
    CheckReport::pass("commutative", scope)
}

/// A 4-index tensor `r^{kl}_{ij}`, stored flat in index order `(k, l; i, j)`,
/// viewed as the operator `R(e_i⊗e_j) = Σ r^{kl}_{ij} e_k⊗e_l`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RTensor {
    n: usize,
    r: Vec<Q>,
}

impl RTensor {
    pub fn new(n: usize, flat: Vec<Q>) -> Result<Self> {
        if flat.len() != n.pow(4) {
            return Err(Error::ShapeMismatch(format!(
                "r-tensor needs {} entries for L={n}, got {}",
                n.pow(4),
                flat.len()
            )));
        }
        Ok(RTensor { n, r: flat })
    }

    pub fn zero(n: usize) -> Self {
        RTensor {
            n,
            r: vec![Q::zero(); n.pow(4)],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn idx(&self, k: usize, l: usize, i: usize, j: usize) -> usize {
        ((k * self.n + l) * self.n + i) * self.n + j
    }

    /// `r^{kl}_{ij}`
    pub fn get(&self, k: usize, l: usize, i: usize, j: usize) -> &Q {
        &self.r[self.idx(k, l, i, j)]
    }

    pub fn set(&mut self, k: usize, l: usize, i: usize, j: usize, v: Q) {
        let n = self.idx(k, l, i, j);
        self.r[n] = v;
    }

    pub fn flat(&self) -> &[Q] {
        &self.r
    }
}

/// `r^{kl}_{ij} = −r^{lk}_{ji}`, i.e. `R^{12} = −R^{21}`.
pub fn check_r_skew(r: &RTensor) -> CheckReport {
    let n = r.n();
    let scope = format!("all {} index tuples, L={n}", n.pow(4));
    match skew_witness(r) {
        Some((k, l, i, j)) => CheckReport::fail(
            "r_skew",
            scope,
            cx(
                format!("r^({},{})_({},{})", k + 1, l + 1, i + 1, j + 1),
                format_q(r.get(k, l, i, j)),
                format_q(&-r.get(l, k, j, i)),
            ),
        ),
        None => CheckReport::pass("r_skew", scope),
    }
}

fn skew_witness(r: &RTensor) -> Option<(usize, usize, usize, usize)> {
    let n = r.n();
    for k in 0..n {
        for l in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if r.get(k, l, i, j) != &-r.get(l, k, j, i) {
                        return Some((k, l, i, j));
                    }
                }
            }
        }
    }
    None
}

/// `r^{kl}_{ij} = r^{lk}_{ij}`
pub fn check_r_upper_symmetric(r: &RTensor) -> CheckReport {
    let n = r.n();
    let scope = format!("all {} index tuples, L={n}", n.pow(4));
    for k in 0..n {
        for l in k + 1..n {
            for i in 0..n {
                for j in 0..n {
                    if r.get(k, l, i, j) != r.get(l, k, i, j) {
                        return CheckReport::fail(
                            "r_upper_symmetric",
                            scope,
                            cx(
                                format!("r^({},{})_({},{})", k + 1, l + 1, i + 1, j + 1),
                                format_q(r.get(k, l, i, j)),
                                format_q(r.get(l, k, i, j)),
                            ),
                        );
                    }
                }
            }
        }
    }
    CheckReport::pass("r_upper_symmetric", scope)
}

/// A product `R^{ab} R^{cd}` with a sign; slots are 0-based, the right
/// factor acts first.
type AybeTerm = (i64, (usize, usize), (usize, usize));

/// `R¹²R¹³ − R²³R¹² + R¹³R²³`
pub const AYBE_B: [AybeTerm; 3] = [(1, (0, 1), (0, 2)), (-1, (1, 2), (0, 1)), (1, (0, 2), (1, 2))];
/// `R¹²R²³ − R²³R¹³ − R¹³R¹²`
pub const AYBE_A: [AybeTerm; 3] = [(1, (0, 1), (1, 2)), (-1, (1, 2), (0, 2)), (-1, (0, 2), (0, 1))];
/// `R¹²R²³ + R²³R³¹ + R³¹R¹²`
pub const AYBE_CYCLIC: [AybeTerm; 3] = [(1, (0, 1), (1, 2)), (1, (1, 2), (2, 0)), (1, (2, 0), (0, 1))];

/// `R^{ab}` applied to a vector of `V^{⊗3}` indexed by `(x_0, x_1, x_2)`;
/// the first index of `R` lands in slot `a`.
fn apply_pair(r: &RTensor, (a, b): (usize, usize), v: &[Q]) -> Vec<Q> {
    let n = r.n();
    let mut out = vec![Q::zero(); v.len()];
    for (pos, c) in v.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let x = [pos / (n * n), (pos / n) % n, pos % n];
        for k in 0..n {
            for l in 0..n {
                let coeff = r.get(k, l, x[a], x[b]);
                if coeff.is_zero() {
                    continue;
                }
                let mut y = x;
                y[a] = k;
                y[b] = l;
                out[(y[0] * n + y[1]) * n + y[2]] += coeff * c;
            }
        }
    }
    out
}

/// First basis vector `e_i⊗e_j⊗e_m` and output component `(k,l,n)` where the
/// given quadratic expression in `R` is nonzero.
pub fn aybe_witness(r: &RTensor, form: &[AybeTerm]) -> Option<([usize; 3], [usize; 3], Q)> {
    let n = r.n();
    let dim = n * n * n;
    for input in 0..dim {
        let mut e = vec![Q::zero(); dim];
        e[input] = q(1);
        let mut total = vec![Q::zero(); dim];
        for &(sign, left, right) in form {
            let v = apply_pair(r, left, &apply_pair(r, right, &e));
            for (t, x) in total.iter_mut().zip(v) {
                *t += x * q(sign);
            }
        }
        if let Some(pos) = total.iter().position(|c| !c.is_zero()) {
            let split = |p: usize| [p / (n * n) + 1, (p / n) % n + 1, p % n + 1];
            return Some((split(input), split(pos), total[pos].clone()));
        }
    }
    None
}

/// Checks the associative Yang-Baxter equation in the form
/// `R¹²R¹³ − R²³R¹² + R¹³R²³ = 0` on every basis vector of `(k^L)^{⊗3}`; the
/// equivalent form `R¹²R²³ − R²³R¹³ − R¹³R¹² = 0` is reported alongside.
pub fn check_aybe(r: &RTensor) -> CheckReport {
    let n = r.n();
    let scope = format!("all {} basis vectors of (k^L)^(x3), L={n}", n.pow(3));
    let other_form = aybe_witness(r, &AYBE_A).is_none();
    let report = match aybe_witness(r, &AYBE_B) {
        Some((input, output, value)) => CheckReport::fail(
            "aybe",
            scope,
            cx(
                format!(
                    "input e{}⊗e{}⊗e{}, component e{}⊗e{}⊗e{}",
                    input[0], input[1], input[2], output[0], output[1], output[2]
                ),
                format_q(&value),
                "0/1",
            ),
        ),
        None => CheckReport::pass("aybe", scope),
    };
    report.with_detail("second_form_holds", other_form)
}

/// `⟦α_i, α_j⟧ = Σ_{k,l} r^{kl}_{ij} α_k⊗α_l`; refuses a non-skew `r`.
pub fn quadratic_bracket(r: &RTensor) -> Result<DoubleBracket> {
    if let Some((k, l, i, j)) = skew_witness(r) {
        return Err(Error::RSkewViolation {
            k: k + 1,
            l: l + 1,
            i: i + 1,
            j: j + 1,
            value: format_q(&(r.get(k, l, i, j) + r.get(l, k, j, i))),
        });
    }
    let n = r.n();
    DoubleBracket::from_fn(n, |i, j| {
        let mut t = Tensor2::zero();
        for k in 0..n {
            for l in 0..n {
                t.add_term((Word::letter(k), Word::letter(l)), r.get(k, l, i, j).clone());
            }
        }
        t
    })
}

/// `⟦α_i, α_i⟧ = 0` and, for `i ≠ j`,
/// `⟦α_i, α_j⟧ = (α_i⊗α_j + α_j⊗α_i − α_i⊗α_i − α_j⊗α_j) / (λ_i − λ_j)`.
pub fn ors_example(lambda: &[Q]) -> Result<RTensor> {
    let n = lambda.len();
    for i in 0..n {
        for j in i + 1..n {
            if lambda[i] == lambda[j] {
                return Err(Error::DegenerateParameters(i + 1, j + 1));
            }
        }
    }
    let mut r = RTensor::zero(n);
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let c = (&lambda[i] - &lambda[j]).recip();
            r.set(i, j, i, j, c.clone());
            r.set(j, i, i, j, c.clone());
            r.set(i, i, i, j, -c.clone());
            r.set(j, j, i, j, -c);
        }
    }
    Ok(r)
}

/// Quadratic bracket on two generators with `⟦α_1, α_2⟧ = α_1⊗α_2 + α_2⊗α_1`
/// and `⟦α_i, α_i⟧ = 0`. It is skew and adapted to both `φ⁺` and `φ⁻`, but
/// its `r`-tensor violates the AYBE, so the double Jacobi identity fails.
pub fn symmetric_pair_bracket() -> DoubleBracket {
    DoubleBracket::from_upper(2, |i, j| {
        if i == j {
            Tensor2::zero()
        } else {
            tensor2(&gen(0), &gen(1)) + tensor2(&gen(1), &gen(0))
        }
    })
    .expect("skew by construction")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::double_bracket::{check_double_jacobi, check_phi_adapted, JacobiScope};
    use crate::free_algebra::InvolutionSpec;
    use crate::lincomb::q_frac;
    use proptest::prelude::*;

    fn kd(a: usize, b: usize) -> Q {
        if a == b {
            q(1)
        } else {
            Q::zero()
        }
    }

    #[test]
    fn kks_tables() {
        let b = kks(1);
        assert_eq!(
            b.generator(0, 0),
            &(tensor2(&one(), &gen(0)) - tensor2(&gen(0), &one()))
        );
        assert!(kks(2).generator(0, 1).is_zero());
    }

    #[test]
    fn kks_is_linear_with_negative_sign() {
        assert_eq!(kks_linear_sign(1), Some(-1));
        assert_eq!(kks_linear_sign(3), Some(-1));
    }

    #[test]
    fn structure_constant_examples() {
        let diag = StructureConstants::from_fn(2, |k, i, j| kd(k, i) * kd(i, j));
        assert!(check_associative(&diag).passed);
        assert!(check_commutative(&diag).passed);
        // Heisenberg-type 2-step nilpotent bracket: [e1,e2] = e3 = -[e2,e1].
        let heis = StructureConstants::from_fn(3, |k, i, j| match (k, i, j) {
            (2, 0, 1) => q(1),
            (2, 1, 0) => q(-1),
            _ => Q::zero(),
        });
        assert!(check_associative(&heis).passed);
        let c = check_commutative(&heis);
        assert!(!c.passed && c.counterexample.is_some());
        assert!(linear_bracket(&StructureConstants::from_fn(2, |_, _, _| Q::zero())).is_zero());
    }

    #[test]
    fn ors_examples() {
        let r = ors_example(&[q(0), q(1)]).unwrap();
        assert!(check_r_skew(&r).passed);
        assert!(check_aybe(&r).passed);
        assert!(check_r_upper_symmetric(&r).passed);
        let b = quadratic_bracket(&r).unwrap();
        assert!(b.generator(0, 0).is_zero());
        let expected = -(tensor2(&gen(0), &gen(1)) + tensor2(&gen(1), &gen(0))
            - tensor2(&gen(0), &gen(0))
            - tensor2(&gen(1), &gen(1)));
        assert_eq!(b.generator(0, 1), &expected);
        assert_eq!(
            ors_example(&[q(1), q(1)]),
            Err(Error::DegenerateParameters(1, 2))
        );
        assert!(quadratic_bracket(&RTensor::zero(2)).unwrap().is_zero());
    }

    #[test]
    fn ors_three_parameters() {
        let r = ors_example(&[q(0), q(1), q(3)]).unwrap();
        assert!(check_aybe(&r).passed);
        let b = quadratic_bracket(&r).unwrap();
        let scope = JacobiScope {
            exhaustive_len: 1,
            max_word_len: 3,
            samples: 20,
            seed: 3,
        };
        assert!(check_double_jacobi(&b, &scope).passed);
        for phi in [InvolutionSpec::PhiPlus, InvolutionSpec::PhiMinus] {
            assert!(check_phi_adapted(&b, &phi, 10, 3, 0).passed);
        }
    }

    #[test]
    fn non_skew_r_is_refused() {
        let mut r = RTensor::zero(2);
        r.set(0, 1, 0, 1, q(1));
        assert!(matches!(
            quadratic_bracket(&r),
            Err(Error::RSkewViolation { .. })
        ));
        assert!(!check_r_skew(&r).passed);
    }

    #[test]
    fn shape_errors() {
        assert!(RTensor::new(2, vec![q(0); 15]).is_err());
        assert!(StructureConstants::new(2, vec![q(0); 7]).is_err());
    }

    /// Skew r-tensor from free parameters: `r^{kl}_{ij}` for `(k,l,i,j)`
    /// lexicographically below its partner `(l,k,j,i)`.
    fn skew_from(n: usize, vals: &[i64]) -> RTensor {
        let mut r = RTensor::zero(n);
        let mut it = vals.iter().cycle();
        for k in 0..n {
            for l in 0..n {
                for i in 0..n {
                    for j in 0..n {
                        let me = (k, l, i, j);
                        let partner = (l, k, j, i);
                        if me < partner {
                            let v = q(*it.next().unwrap());
                            r.set(k, l, i, j, v.clone());
                            r.set(l, k, j, i, -v);
                        }
                    }
                }
            }
        }
        r
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        /// For skew r, the three AYBE forms agree with each other and with
        /// the double Jacobi identity of the quadratic bracket.
        #[test]
        fn aybe_forms_agree_with_double_jacobi(
            vals in prop::collection::vec(-1i64..=1, 6),
            mask in prop::collection::vec(prop::bool::ANY, 6),
        ) {
            let vals: Vec<i64> = vals.iter().zip(&mask).map(|(v, m)| if *m { *v } else { 0 }).collect();
            let r = skew_from(2, &vals);
            let b_form = aybe_witness(&r, &AYBE_B).is_none();
            prop_assert_eq!(b_form, aybe_witness(&r, &AYBE_A).is_none());
            prop_assert_eq!(b_form, aybe_witness(&r, &AYBE_CYCLIC).is_none());
            let b = quadratic_bracket(&r).unwrap();
            let jac = check_double_jacobi(&b, &JacobiScope { exhaustive_len: 1, max_word_len: 2, samples: 0, seed: 0 });
            prop_assert_eq!(b_form, jac.passed);
        }

        #[test]
        fn upper_symmetry_iff_adapted(vals in prop::collection::vec(-2i64..=2, 6)) {
            let r = skew_from(2, &vals);
            let b = quadratic_bracket(&r).unwrap();
            let sym = check_r_upper_symmetric(&r).passed;
            for phi in [InvolutionSpec::PhiPlus, InvolutionSpec::PhiMinus] {
                prop_assert_eq!(sym, check_phi_adapted(&b, &phi, 0, 1, 0).passed);
            }
        }
    }

    #[test]
    fn symmetric_pair_bracket_is_adapted_but_not_poisson() {
        let b = symmetric_pair_bracket();
        let t = b.triple(&gen(0), &gen(0), &gen(1));
        assert!(!t.is_zero());
        let scope = JacobiScope::default();
        let r = check_double_jacobi(&b, &scope);
        assert!(!r.passed && r.counterexample.is_some());
        for phi in [InvolutionSpec::PhiPlus, InvolutionSpec::PhiMinus] {
            assert!(check_phi_adapted(&b, &phi, 20, 3, 0).passed);
        }
    }

    /// The one-generator cubic bracket `⟦α,α⟧ = α²⊗α − α⊗α²` is skew, but its
    /// triple bracket vanishes, so it cannot serve as a non-Poisson example.
    #[test]
    fn cubic_one_generator_bracket_has_zero_triple_bracket() {
        use crate::free_algebra::word_elem;
        let b = DoubleBracket::from_fn(1, |_, _| {
            tensor2(&word_elem(&[0, 0]), &gen(0)) - tensor2(&gen(0), &word_elem(&[0, 0]))
        })
        .unwrap();
        assert!(b.triple(&gen(0), &gen(0), &gen(0)).is_zero());
        let scope = JacobiScope { exhaustive_len: 3, max_word_len: 4, samples: 40, seed: 5 };
        assert!(check_double_jacobi(&b, &scope).passed);
    }

    #[test]
    fn ors_rational_parameters() {
        let r = ors_example(&[q_frac(1, 2), q(-3), q_frac(7, 5)]).unwrap();
        assert!(check_aybe(&r).passed);
        assert!(check_r_skew(&r).passed);
    }
}
