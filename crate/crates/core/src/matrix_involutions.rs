//! Bilinear forms, the matrix involutions they define, and the dual side:
//! `Mat*(d)` with its coalgebra structure, the operator `P`, and `τ*`.
//!
//! A basis element `E*_{ij}` of `Mat*(d)` is written as the 0-based key
//! `(i, j)`.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::free_algebra::Perm3;
use crate::linalg::QMatrix;
use crate::lincomb::{format_q, q, LinComb, Q};
use crate::report::{cx, CheckReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FormKind {
    Symmetric,
    Skew,
}

/// Sign map of the `θ`-realization: `θ ≡ 1` (orthogonal) or `θ(i) = sgn i`
/// (symplectic).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ThetaKind {
    Orthogonal,
    Symplectic,
}

impl ThetaKind {
    pub fn theta(self, i: i64) -> i64 {
        match self {
            ThetaKind::Orthogonal => 1,
            ThetaKind::Symplectic => i.signum(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ThetaKind::Orthogonal => "orthogonal",
            ThetaKind::Symplectic => "symplectic",
        }
    }
}

/// The signed index set `{-r, …, r}` (without `0` when `n` is even),
/// `r = ⌊n/2⌋`, in increasing order.
pub fn theta_labels(n: usize) -> Vec<i64> {
    let r = (n / 2) as i64;
    (-r..=r).filter(|&i| i != 0 || n % 2 == 1).collect()
}

/// A nondegenerate symmetric or skew-symmetric bilinear form
/// `⟨ξ, η⟩ = ξᵗ g η` on `k^d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BilinearForm {
    g: QMatrix,
    kind: FormKind,
    /// Display labels of the basis vectors (`1..=d`, or the signed `θ` index
    /// set), in internal order.
    labels: Vec<i64>,
}

impl BilinearForm {
    pub fn new(g: QMatrix) -> Result<Self> {
        if !g.is_square() || g.rows() == 0 {
            return Err(Error::ShapeMismatch("form matrix must be square and nonempty".into()));
        }
        let gt = g.transpose();
        let kind = if gt == g {
            FormKind::Symmetric
        } else if gt == g.scale(&q(-1)) {
            FormKind::Skew
        } else {
            return Err(Error::validation("form.g", "matrix is neither symmetric nor skew-symmetric"));
        };
        if kind == FormKind::Skew && g.rows() % 2 == 1 {
            return Err(Error::BadParity(format!(
                "skew form needs even dimension, got {}",
                g.rows()
            )));
        }
        if g.inverse().is_none() {
            return Err(Error::SingularForm);
        }
        let labels = (1..=g.rows() as i64).collect();
        Ok(BilinearForm { g, kind, labels })
    }

    pub fn d(&self) -> usize {
        self.g.rows()
    }

    pub fn g(&self) -> &QMatrix {
        &self.g
    }

    pub fn kind(&self) -> FormKind {
        self.kind
    }

    pub fn labels(&self) -> &[i64] {
        &self.labels
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FormStyle {
    Identity(usize),
    /// `g = [[0, I], [-I, 0]]`
    Symplectic(usize),
    /// `⟨e_i, e_j⟩ = θ(i) δ_{i,-j}` on the signed index set of size `n`.
    Theta { n: usize, kind: ThetaKind },
    Matrix(QMatrix),
}

pub fn standard_form(style: &FormStyle) -> Result<BilinearForm> {
    match style {
        FormStyle::Identity(d) => BilinearForm::new(QMatrix::identity(*d)),
        FormStyle::Symplectic(d) => {
            if d % 2 == 1 || *d == 0 {
                return Err(Error::BadParity(format!(
                    "symplectic form needs positive even dimension, got {d}"
                )));
            }
            let m = d / 2;
            let mut g = QMatrix::zeros(*d, *d);
            for i in 0..m {
                g.set(i, m + i, q(1));
                g.set(m + i, i, q(-1));
            }
            BilinearForm::new(g)
        }
        FormStyle::Theta { n, kind } => {
            if *kind == ThetaKind::Symplectic && n % 2 == 1 {
                return Err(Error::BadParity(format!(
                    "symplectic theta form needs even N, got {n}"
                )));
            }
            if *n == 0 {
                return Err(Error::BadParity("theta form needs N >= 1".into()));
            }
            let labels = theta_labels(*n);
            let mut g = QMatrix::zeros(*n, *n);
            for (p, &ip) in labels.iter().enumerate() {
                for (qq, &iq) in labels.iter().enumerate() {
                    if ip == -iq {
                        g.set(p, qq, q(kind.theta(ip)));
                    }
                }
            }
            let mut form = BilinearForm::new(g)?;
            form.labels = labels;
            Ok(form)
        }
        FormStyle::Matrix(g) => BilinearForm::new(g.clone()),
    }
}

/// A linear endomorphism of `Mat(d)` given by `E_{ij} ↦ Σ c^{mn}_{ij} E_{mn}`.
/// Unvalidated; [`MatrixInvolution`] is the checked version.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixLinearMap {
    d: usize,
    /// Flat in index order `(m, n; i, j)`.
    coeffs: Vec<Q>,
}

impl MatrixLinearMap {
    /// From the images of the matrix units.
    pub fn from_images(d: usize, mut image: impl FnMut(usize, usize) -> QMatrix) -> Self {
        let mut coeffs = vec![Q::zero(); d.pow(4)];
        for i in 0..d {
            for j in 0..d {
                let m = image(i, j);
                for a in 0..d {
                    for b in 0..d {
                        coeffs[((a * d + b) * d + i) * d + j] = m.get(a, b).clone();
                    }
                }
            }
        }
        MatrixLinearMap { d, coeffs }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// `τ^{mn}_{ij}`
    pub fn coeff(&self, m: usize, n: usize, i: usize, j: usize) -> &Q {
        let d = self.d;
        &self.coeffs[((m * d + n) * d + i) * d + j]
    }

    /// Coefficients in index order `(m, n; i, j)`.
    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn apply(&self, x: &QMatrix) -> QMatrix {
        let d = self.d;
        let mut out = QMatrix::zeros(d, d);
        for i in 0..d {
            for j in 0..d {
                let c = x.get(i, j);
                if c.is_zero() {
                    continue;
                }
                for m in 0..d {
                    for n in 0..d {
                        let t = self.coeff(m, n, i, j);
                        if !t.is_zero() {
                            let v = out.get(m, n) + t * c;
                            out.set(m, n, v);
                        }
                    }
                }
            }
        }
        out
    }

    /// The matrix of the map on `Mat(d) ≅ k^{d²}` (column `(i,j)` is the
    /// image of `E_{ij}`).
    pub fn as_matrix(&self) -> QMatrix {
        let d = self.d;
        let mut m = QMatrix::zeros(d * d, d * d);
        for a in 0..d {
            for b in 0..d {
                for i in 0..d {
                    for j in 0..d {
                        m.set(a * d + b, i * d + j, self.coeff(a, b, i, j).clone());
                    }
                }
            }
        }
        m
    }

    /// First matrix unit `E_{ij}` with `τ(τ(E_{ij})) ≠ E_{ij}`.
    pub fn involutivity_witness(&self) -> Option<(usize, usize)> {
        let d = self.d;
        (0..d)
            .flat_map(|i| (0..d).map(move |j| (i, j)))
            .find(|&(i, j)| {
                let e = QMatrix::unit(d, i, j);
                self.apply(&self.apply(&e)) != e
            })
    }

    /// First pair of matrix units with `τ(XY) ≠ τ(Y)τ(X)`.
    pub fn antiautomorphism_witness(&self) -> Option<((usize, usize), (usize, usize))> {
        let d = self.d;
        let units: Vec<(usize, usize)> = (0..d).flat_map(|i| (0..d).map(move |j| (i, j))).collect();
        let images: Vec<QMatrix> = units
            .iter()
            .map(|&(i, j)| self.apply(&QMatrix::unit(d, i, j)))
            .collect();
        for (a, &x) in units.iter().enumerate() {
            for (b, &y) in units.iter().enumerate() {
                let xy = QMatrix::unit(d, x.0, x.1).mul(&QMatrix::unit(d, y.0, y.1));
                if self.apply(&xy) != images[b].mul(&images[a]) {
                    return Some((x, y));
                }
            }
        }
        None
    }
}

/// An involutive antiautomorphism `τ(M) = g⁻¹ Mᵗ g` of `Mat(d)`, the adjoint
/// with respect to the form: `⟨Mξ, η⟩ = ⟨ξ, τ(M) η⟩`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixInvolution {
    form: BilinearForm,
    map: MatrixLinearMap,
}

impl MatrixInvolution {
    pub fn from_form(form: BilinearForm) -> Result<Self> {
        let d = form.d();
        let g = form.g().clone();
        let ginv = g.inverse().ok_or(Error::SingularForm)?;
        let map = MatrixLinearMap::from_images(d, |i, j| {
            ginv.mul(&QMatrix::unit(d, i, j).transpose()).mul(&g)
        });
        if let Some((i, j)) = map.involutivity_witness() {
            return Err(Error::InvalidMatrixInvolution(format!(
                "τ∘τ ≠ id on E_({},{})",
                i + 1,
                j + 1
            )));
        }
        if let Some((x, y)) = map.antiautomorphism_witness() {
            return Err(Error::InvalidMatrixInvolution(format!(
                "τ(XY) ≠ τ(Y)τ(X) for X=E_({},{}), Y=E_({},{})",
                x.0 + 1,
                x.1 + 1,
                y.0 + 1,
                y.1 + 1
            )));
        }
        Ok(MatrixInvolution { form, map })
    }

    pub fn from_style(style: &FormStyle) -> Result<Self> {
        Self::from_form(standard_form(style)?)
    }

    pub fn d(&self) -> usize {
        self.form.d()
    }

    pub fn form(&self) -> &BilinearForm {
        &self.form
    }

    pub fn map(&self) -> &MatrixLinearMap {
        &self.map
    }

    pub fn apply(&self, x: &QMatrix) -> QMatrix {
        self.map.apply(x)
    }

    /// Basis of the Lie algebra `{x : τ(x) = −x}`.
    pub fn antifixed_basis(&self) -> Vec<QMatrix> {
        let d = self.d();
        let m = self.map.as_matrix().add(&QMatrix::identity(d * d));
        m.nullspace()
            .into_iter()
            .map(|v| {
                let mut x = QMatrix::zeros(d, d);
                for (n, c) in v.into_iter().enumerate() {
                    x.set(n / d, n % d, c);
                }
                x
            })
            .collect()
    }
}

/// Basis key `E*_{ij}` (0-based).
pub type DualKey = (usize, usize);
pub type Dual1 = LinComb<DualKey>;
pub type Dual2 = LinComb<(DualKey, DualKey)>;
pub type Dual3 = LinComb<(DualKey, DualKey, DualKey)>;

/// The bilinear operator `P` as a function on basis pairs, so that mutated
/// versions can be substituted in negative controls.
pub type POp<'a> = &'a (dyn Fn(DualKey, DualKey) -> Dual2 + Sync);

/// `P(E*_{ij} ⊗ E*_{kl}) = E*_{kj} ⊗ E*_{il}`
pub fn p_basis((i, j): DualKey, (k, l): DualKey) -> Dual2 {
    Dual2::basis(((k, j), (i, l)))
}

/// `τ*(E*_{ij}) = Σ_{kl} τ^{ij}_{kl} E*_{kl}`
pub fn tau_star_basis(tau: &MatrixLinearMap, (i, j): DualKey) -> Dual1 {
    let d = tau.d();
    let mut out = Dual1::zero();
    for k in 0..d {
        for l in 0..d {
            out.add_term((k, l), tau.coeff(i, j, k, l).clone());
        }
    }
    out
}

pub fn tau_star(tau: &MatrixLinearMap, x: &Dual1) -> Dual1 {
    x.map_linear(|&key| tau_star_basis(tau, key))
}

pub fn tau_star2(tau: &MatrixLinearMap, x: &Dual2) -> Dual2 {
    x.map_linear(|&(a, b)| {
        tau_star_basis(tau, a).bilinear(&tau_star_basis(tau, b), |&u, &v| Dual2::basis((u, v)))
    })
}

pub fn tau_star3(tau: &MatrixLinearMap, x: &Dual3) -> Dual3 {
    x.map_linear(|&(a, b, c)| {
        let ab = tau_star_basis(tau, a).bilinear(&tau_star_basis(tau, b), |&u, &v| Dual2::basis((u, v)));
        ab.bilinear(&tau_star_basis(tau, c), |&(u, v), &w| Dual3::basis((u, v, w)))
    })
}

pub fn apply_p(p: POp<'_>, x: &Dual2) -> Dual2 {
    x.map_linear(|&(a, b)| p(a, b))
}

pub fn swap2(x: &Dual2) -> Dual2 {
    x.map_keys(|&(a, b)| ((b, a), q(1)))
}

pub fn p12(p: POp<'_>, x: &Dual3) -> Dual3 {
    x.map_linear(|&(a, b, c)| p(a, b).map_keys(|&(u, v)| ((u, v, c), q(1))))
}

pub fn p23(p: POp<'_>, x: &Dual3) -> Dual3 {
    x.map_linear(|&(a, b, c)| p(b, c).map_keys(|&(u, v)| ((a, u, v), q(1))))
}

/// `P₁₂P₂₃`: `P₂₃` is applied first.
pub fn p12p23(p: POp<'_>, x: &Dual3) -> Dual3 {
    p12(p, &p23(p, x))
}

pub fn s3_dual(s: Perm3, x: &Dual3) -> Dual3 {
    x.map_keys(|(a, b, c)| {
        let [u, v, w] = s.permute([a, b, c]);
        ((u, v, w), q(1))
    })
}

/// `Δ(E*_{ij}) = Σ_p E*_{ip} ⊗ E*_{pj}`
pub fn coproduct(d: usize, (i, j): DualKey) -> Dual2 {
    Dual2::from_terms((0..d).map(|p| (((i, p), (p, j)), Q::one())))
}

/// `ε(E*_{ij}) = δ_{ij}`
pub fn counit((i, j): DualKey) -> Q {
    if i == j {
        Q::one()
    } else {
        Q::zero()
    }
}

/// `Δ` on the first factor of `Mat*(d)^{⊗2}`.
pub fn delta_l(d: usize, x: &Dual2) -> Dual3 {
    x.map_linear(|&(a, b)| coproduct(d, a).map_keys(|&(u, v)| ((u, v, b), q(1))))
}

/// `Δ` on the second factor.
pub fn delta_r(d: usize, x: &Dual2) -> Dual3 {
    x.map_linear(|&(a, b)| coproduct(d, b).map_keys(|&(u, v)| ((a, u, v), q(1))))
}

fn dual_basis(d: usize) -> Vec<DualKey> {
    (0..d).flat_map(|i| (0..d).map(move |j| (i, j))).collect()
}

fn key_str((i, j): DualKey) -> String {
    format!("E*({},{})", i + 1, j + 1)
}

fn show2(x: &Dual2) -> String {
    if x.is_zero() {
        return "0".into();
    }
    x.iter()
        .map(|((a, b), c)| format!("{}*{}⊗{}", format_q(c), key_str(*a), key_str(*b)))
        .collect::<Vec<_>>()
        .join(" + ")
}

fn show3(x: &Dual3) -> String {
    if x.is_zero() {
        return "0".into();
    }
    x.iter()
        .map(|((a, b, c), k)| {
            format!("{}*{}⊗{}⊗{}", format_q(k), key_str(*a), key_str(*b), key_str(*c))
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

/// Compares two operators `Mat*^{⊗2} → Mat*^{⊗2}` on every basis pair.
fn compare2(
    d: usize,
    name: &str,
    lhs: impl Fn(&Dual2) -> Dual2,
    rhs: impl Fn(&Dual2) -> Dual2,
) -> CheckReport {
    let basis = dual_basis(d);
    for &a in &basis {
        for &b in &basis {
            let x = Dual2::basis((a, b));
            let (l, r) = (lhs(&x), rhs(&x));
            if l != r {
                return CheckReport::fail(
                    name,
                    format!("d={d}, all {} basis pairs", d.pow(4)),
                    cx(format!("{}⊗{}", key_str(a), key_str(b)), show2(&l), show2(&r)),
                );
            }
        }
    }
    CheckReport::pass(name, format!("d={d}, all {} basis pairs", d.pow(4)))
}

fn compare_2_to_3(
    d: usize,
    name: &str,
    lhs: impl Fn(&Dual2) -> Dual3,
    rhs: impl Fn(&Dual2) -> Dual3,
) -> CheckReport {
    let basis = dual_basis(d);
    for &a in &basis {
        for &b in &basis {
            let x = Dual2::basis((a, b));
            let (l, r) = (lhs(&x), rhs(&x));
            if l != r {
                return CheckReport::fail(
                    name,
                    format!("d={d}, all {} basis pairs", d.pow(4)),
                    cx(format!("{}⊗{}", key_str(a), key_str(b)), show3(&l), show3(&r)),
                );
            }
        }
    }
    CheckReport::pass(name, format!("d={d}, all {} basis pairs", d.pow(4)))
}

fn compare3(
    d: usize,
    name: &str,
    lhs: impl Fn(&Dual3) -> Dual3,
    rhs: impl Fn(&Dual3) -> Dual3,
) -> CheckReport {
    let basis = dual_basis(d);
    for &a in &basis {
        for &b in &basis {
            for &c in &basis {
                let x = Dual3::basis((a, b, c));
                let (l, r) = (lhs(&x), rhs(&x));
                if l != r {
                    return CheckReport::fail(
                        name,
                        format!("d={d}, all {} basis triples", d.pow(6)),
                        cx(
                            format!("{}⊗{}⊗{}", key_str(a), key_str(b), key_str(c)),
                            show3(&l),
                            show3(&r),
                        ),
                    );
                }
            }
        }
    }
    CheckReport::pass(name, format!("d={d}, all {} basis triples", d.pow(6)))
}

/// Coassociativity and counit laws of `Δ`.
pub fn check_coalgebra_axioms(d: usize) -> CheckReport {
    for a in dual_basis(d) {
        let da = coproduct(d, a);
        let left = delta_l(d, &da);
        let right = delta_r(d, &da);
        if left != right {
            return CheckReport::fail(
                "coassociativity",
                format!("d={d}"),
                cx(key_str(a), show3(&left), show3(&right)),
            );
        }
        let back = Dual1::basis(a);
        let via_left = da
            .iter()
            .fold(Dual1::zero(), |mut acc, ((u, v), c)| {
                acc.add_term(*v, c * counit(*u));
                acc
            });
        let via_right = da
            .iter()
            .fold(Dual1::zero(), |mut acc, ((u, v), c)| {
                acc.add_term(*u, c * counit(*v));
                acc
            });
        if via_left != back || via_right != back {
            return CheckReport::fail(
                "counit",
                format!("d={d}"),
                cx(key_str(a), format!("{via_left:?} / {via_right:?}"), format!("{back:?}")),
            );
        }
    }
    CheckReport::pass("coalgebra_axioms", format!("d={d}, all {} basis elements", d * d))
}

/// The four identities tying `P` to the flip, the cyclic permutation and the
/// coproduct, plus the coalgebra axioms; `p` is normally [`p_basis`].
pub fn verify_coalgebra_lemmas_with(d: usize, p: POp<'_>) -> CheckReport {
    let swap_commutes = compare2(
        d,
        "(12)P = P(12)",
        |x| swap2(&apply_p(p, x)),
        |x| apply_p(p, &swap2(x)),
    );
    let cyclic = compare3(
        d,
        "P12P23(123) = (123)P12P23",
        |x| p12p23(p, &s3_dual(Perm3::C123, x)),
        |x| s3_dual(Perm3::C123, &p12p23(p, x)),
    );
    let left = compare_2_to_3(
        d,
        "Δ_L P = P23(12)Δ_R",
        |x| delta_l(d, &apply_p(p, x)),
        |x| p23(p, &s3_dual(Perm3::T12, &delta_r(d, x))),
    );
    let right = compare_2_to_3(
        d,
        "Δ_R P = P12 Δ_R",
        |x| delta_r(d, &apply_p(p, x)),
        |x| p12(p, &delta_r(d, x)),
    );
    CheckReport::merge(
        "coalgebra_lemmas",
        vec![check_coalgebra_axioms(d), swap_commutes, cyclic, left, right],
    )
}

pub fn verify_coalgebra_lemmas(d: usize) -> CheckReport {
    verify_coalgebra_lemmas_with(d, &p_basis)
}

/// `P` with the sign of its value on `E*_{11} ⊗ E*_{12}` flipped.
pub fn mutated_p(a: DualKey, b: DualKey) -> Dual2 {
    let v = p_basis(a, b);
    if (a, b) == ((0, 0), (0, 1)) {
        -v
    } else {
        v
    }
}

/// `⟨P(x⊗y), M⊗N⟩ = ⟨x⊗y, σ·(M⊗N)⟩` on full bases, where
/// `σ = Σ E_{ij}⊗E_{ji}` and `σ·(E_{pq}⊗E_{rs}) = Σ E_{ij}E_{pq} ⊗ E_{ji}E_{rs}`.
pub fn verify_p_dual_to_sigma(d: usize) -> CheckReport {
    let basis = dual_basis(d);
    // σ·(E_pq ⊗ E_rs) computed by multiplying matrix units.
    let sigma_times = |(p, qq): DualKey, (r, s): DualKey| -> LinComb<(DualKey, DualKey)> {
        let mut out = LinComb::zero();
        for i in 0..d {
            for j in 0..d {
                // E_ij E_pq = δ_jp E_iq ; E_ji E_rs = δ_ir E_js
                if j == p && i == r {
                    out.add_term(((i, qq), (j, s)), q(1));
                }
            }
        }
        out
    };
    for &x in &basis {
        for &y in &basis {
            let px = p_basis(x, y);
            for &m in &basis {
                for &n in &basis {
                    let lhs = px.coeff(&(m, n));
                    let rhs = sigma_times(m, n).coeff(&(x, y));
                    if lhs != rhs {
                        return CheckReport::fail(
                            "p_dual_to_sigma",
                            format!("d={d}"),
                            cx(
                                format!("{}⊗{} against E{:?}⊗E{:?}", key_str(x), key_str(y), m, n),
                                format_q(&lhs),
                                format_q(&rhs),
                            ),
                        );
                    }
                }
            }
        }
    }
    CheckReport::pass("p_dual_to_sigma", format!("d={d}, all {} basis pairings", d.pow(8)))
}

/// `τ^{⊗2}(σ) = σ`
pub fn check_sigma_invariance(tau: &MatrixLinearMap) -> CheckReport {
    let d = tau.d();
    let mut image: LinComb<(DualKey, DualKey)> = LinComb::zero();
    let mut sigma: LinComb<(DualKey, DualKey)> = LinComb::zero();
    for i in 0..d {
        for j in 0..d {
            sigma.add_term(((i, j), (j, i)), q(1));
            for m in 0..d {
                for n in 0..d {
                    let a = tau.coeff(m, n, i, j);
                    if a.is_zero() {
                        continue;
                    }
                    for p in 0..d {
                        for r in 0..d {
                            let b = tau.coeff(p, r, j, i);
                            if !b.is_zero() {
                                image.add_term(((m, n), (p, r)), a * b);
                            }
                        }
                    }
                }
            }
        }
    }
    CheckReport::new(
        "sigma_invariance",
        format!("d={d}"),
        (image != sigma).then(|| cx("τ⊗τ(σ)", format!("{image:?}"), format!("{sigma:?}"))),
    )
}

/// `(τ*)^{⊗2} P(x, y) = (12) P(τ*x, τ*y)` on all basis pairs, together with
/// `τ^{⊗2}(σ) = σ` and the triple identity
/// `(12)(τ*)^{⊗3} P₁₂P₂₃ = P₁₂P₂₃ (23)(τ*)^{⊗3}`.
pub fn verify_f33(tau: &MatrixLinearMap) -> CheckReport {
    let d = tau.d();
    let p: POp<'_> = &p_basis;
    let pair = compare2(
        d,
        "(τ*)^2 P = (12) P (τ*)^2",
        |x| tau_star2(tau, &apply_p(p, x)),
        |x| swap2(&apply_p(p, &tau_star2(tau, x))),
    );
    let corollary = verify_tau_p_corollary(tau);
    CheckReport::merge("f33", vec![pair, check_sigma_invariance(tau), corollary])
}

/// `(12)(τ*)^{⊗3} P₁₂P₂₃ = P₁₂P₂₃ (23)(τ*)^{⊗3}` on all basis triples.
pub fn verify_tau_p_corollary(tau: &MatrixLinearMap) -> CheckReport {
    let p: POp<'_> = &p_basis;
    compare3(
        tau.d(),
        "(12)(τ*)^3 P12P23 = P12P23 (23)(τ*)^3",
        |x| s3_dual(Perm3::T12, &tau_star3(tau, &p12p23(p, x))),
        |x| p12p23(p, &s3_dual(Perm3::T23, &tau_star3(tau, x))),
    )
}
