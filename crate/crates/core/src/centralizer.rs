//! The Lie–Poisson algebra `S(g^{⊕L})` for `g = o(N)` or `sp(N)` in the
//! basis `F_{ij}`, and the comparison of brackets of the word elements
//! `f_{ij}(w)` with the KKS double bracket twisted by `φ⁻`.
//!
//! Indices run over the signed set `{-r, …, r}` (no `0` for even `N`), with
//! `F_{ij} = −θ(i)θ(j) F_{−j,−i}`. Only one member of each pair
//! `{(i,j), (−j,−i)}` is a variable: the lexicographically smaller one.

use std::collections::HashMap;
use std::fmt;
use std::time::Instant;

use rayon::prelude::*;

use crate::double_bracket::BracketEvaluator;
use crate::error::{Error, Result};
use crate::families::kks;
use crate::free_algebra::{FreeElem, InvolutionSpec, Tensor2, Word};
use crate::linalg::QMatrix;
use crate::lincomb::q;
use crate::matrix_involutions::{theta_labels, FormStyle, MatrixInvolution, ThetaKind};
use crate::poly::{self, biderivation, DisplayPoly, Monomial, Poly};
use crate::report::{cx, CheckReport};

/// `F_{ij}` in the component `r` (0-based; displayed 1-based).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CVar {
    pub i: i64,
    pub j: i64,
    pub r: u16,
}

impl fmt::Display for CVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F({},{}|{})", self.i, self.j, self.r + 1)
    }
}

impl fmt::Debug for CVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

pub type CentElem = Poly<CVar>;

/// `g_N` in the `F_{ij}` realization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieData {
    n: usize,
    kind: ThetaKind,
    labels: Vec<i64>,
}

impl LieData {
    pub fn new(n: usize, kind: ThetaKind) -> Result<Self> {
        if n < 2 {
            return Err(Error::validation("N", "must be at least 2"));
        }
        if kind == ThetaKind::Symplectic && n % 2 == 1 {
            return Err(Error::BadParity(format!("sp({n}) needs N even")));
        }
        Ok(LieData {
            n,
            kind,
            labels: theta_labels(n),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> ThetaKind {
        self.kind
    }

    pub fn labels(&self) -> &[i64] {
        &self.labels
    }

    pub fn has_label(&self, i: i64) -> bool {
        self.labels.binary_search(&i).is_ok()
    }

    fn index(&self, i: i64) -> usize {
        self.labels.binary_search(&i).expect("label in index set")
    }

    /// `θ(i)θ(j)`
    pub fn theta2(&self, i: i64, j: i64) -> i64 {
        self.kind.theta(i) * self.kind.theta(j)
    }

    /// `F_{ij} = sign · F_{rep}`; `None` when `F_{ij} = 0`.
    pub fn canonical(&self, i: i64, j: i64) -> Option<(i64, (i64, i64))> {
        let partner = (-j, -i);
        let sign = -self.theta2(i, j);
        if partner == (i, j) {
            return (sign == 1).then_some((1, (i, j)));
        }
        if (i, j) < partner {
            Some((1, (i, j)))
        } else {
            Some((sign, partner))
        }
    }

    /// Representatives that are nonzero, in increasing order.
    pub fn live_pairs(&self) -> Vec<(i64, i64)> {
        let mut out = Vec::new();
        for &i in &self.labels {
            for &j in &self.labels {
                if let Some((_, rep)) = self.canonical(i, j) {
                    if rep == (i, j) {
                        out.push(rep);
                    }
                }
            }
        }
        out
    }

    /// `F_{ij|r}` as a polynomial in the representative variables.
    pub fn generator(&self, i: i64, j: i64, r: usize) -> CentElem {
        match self.canonical(i, j) {
            None => Poly::zero(),
            Some((s, (a, b))) => Poly::term(
                Monomial::var(CVar {
                    i: a,
                    j: b,
                    r: r as u16,
                }),
                q(s),
            ),
        }
    }

    /// `E_{ij} − θ(i)θ(j) E_{−j,−i}` in `gl(N)`, rows and columns in label
    /// order.
    pub fn matrix(&self, i: i64, j: i64) -> QMatrix {
        let mut m = QMatrix::unit(self.n, self.index(i), self.index(j));
        let (a, b) = (self.index(-j), self.index(-i));
        let v = m.get(a, b) - q(self.theta2(i, j));
        m.set(a, b, v);
        m
    }

    /// The matrix involution whose `−1` eigenspace is `g_N`.
    pub fn tau(&self) -> Result<MatrixInvolution> {
        MatrixInvolution::from_style(&FormStyle::Theta {
            n: self.n,
            kind: self.kind,
        })
    }

    /// `[F_{ij}, F_{kl}] = δ_{kj}F_{il} − δ_{il}F_{kj} − θ(i)θ(j)(δ_{k,−i}F_{−j,l} − δ_{−j,l}F_{k,−i})`
    /// in component `r`.
    pub fn commutator(&self, (i, j): (i64, i64), (k, l): (i64, i64), r: usize) -> CentElem {
        let mut out = Poly::zero();
        if k == j {
            out += &self.generator(i, l, r);
        }
        if i == l {
            out -= &self.generator(k, j, r);
        }
        let t = q(self.theta2(i, j));
        if k == -i {
            out.add_scaled(&self.generator(-j, l, r), &-&t);
        }
        if -j == l {
            out.add_scaled(&self.generator(k, -i, r), &t);
        }
        out
    }

    fn show_kind(&self) -> String {
        let g = match self.kind {
            ThetaKind::Orthogonal => "o",
            ThetaKind::Symplectic => "sp",
        };
        format!("{g}({})", self.n)
    }
}

/// Bracket of two variables: the commutator within a component, `0` across
/// components.
pub fn var_bracket(ld: &LieData, u: &CVar, v: &CVar) -> CentElem {
    if u.r != v.r {
        return Poly::zero();
    }
    ld.commutator((u.i, u.j), (v.i, v.j), u.r as usize)
}

pub fn lie_poisson_bracket(ld: &LieData, f: &CentElem, g: &CentElem) -> CentElem {
    biderivation(f, g, |u, v| var_bracket(ld, u, v))
}

/// `f_{ij}(w) = Σ F_{i a_1|w_1} F_{a_1 a_2|w_2} ⋯ F_{a_{m−1} j|w_m}`, and
/// `δ_{ij}` for the empty word.
pub fn f_word(ld: &LieData, i: i64, j: i64, w: &Word) -> Result<CentElem> {
    if !ld.has_label(i) || !ld.has_label(j) {
        return Err(Error::IndexOutOfRange(format!("({i},{j}) for {}", ld.show_kind())));
    }
    let mut row: Vec<CentElem> = ld
        .labels
        .iter()
        .map(|&a| if a == i { poly::one_poly() } else { Poly::zero() })
        .collect();
    for r in w.letters() {
        row = ld
            .labels
            .iter()
            .map(|&b| {
                let mut acc = Poly::zero();
                for (ra, &a) in row.iter().zip(&ld.labels) {
                    if !ra.is_zero() {
                        acc += &poly::mul(ra, &ld.generator(a, b, r));
                    }
                }
                acc
            })
            .collect();
    }
    Ok(row.swap_remove(ld.index(j)))
}

/// Per-worker cache of `f_{ij}(w)`.
struct FCache<'a> {
    ld: &'a LieData,
    map: HashMap<(Word, i64, i64), CentElem>,
}

impl FCache<'_> {
    fn word(&mut self, w: &Word, i: i64, j: i64) -> CentElem {
        let ld = self.ld;
        self.map
            .entry((w.clone(), i, j))
            .or_insert_with(|| f_word(ld, i, j, w).expect("labels checked"))
            .clone()
    }

    /// `Σ c · f_{ab}(u) f_{cd}(v)` over the terms `c·u⊗v` of `t`.
    fn tensor(&mut self, t: &Tensor2, (a, b): (i64, i64), (c, d): (i64, i64)) -> CentElem {
        let mut out = Poly::zero();
        for ((u, v), coeff) in t {
            let f = poly::mul(&self.word(u, a, b), &self.word(v, c, d));
            out.add_scaled(&f, coeff);
        }
        out
    }
}

/// Checks
/// `{f_{ij}(w), f_{kl}(t)} = f_{kj}(⟦w,t⟧′) f_{il}(⟦w,t⟧″) + s(i,j) f_{k,−i}(⟦φ⁻w,t⟧′) f_{−j,l}(⟦φ⁻w,t⟧″)`
/// with `s(i,j) = θ(i)θ(j)`, for all index quadruples and all nonempty word
/// pairs up to `max_word_len`, `⟦,⟧` the KKS bracket on `n_gens` letters.
pub fn check_prop_f10(ld: &LieData, n_gens: usize, max_word_len: usize, timings: bool) -> CheckReport {
    check_prop_f10_with(ld, n_gens, max_word_len, &|i, j| ld.theta2(i, j), timings)
}

/// As [`check_prop_f10`] with the sign `s(i,j)` of the second summand
/// supplied by the caller (for negative controls).
pub fn check_prop_f10_with(
    ld: &LieData,
    n_gens: usize,
    max_word_len: usize,
    sign: &(dyn Fn(i64, i64) -> i64 + Sync),
    timings: bool,
) -> CheckReport {
    let bracket = kks(n_gens);
    let words = Word::enumerate(n_gens, 1, max_word_len);
    let pairs: Vec<(&Word, &Word)> = words
        .iter()
        .flat_map(|w| words.iter().map(move |t| (w, t)))
        .collect();
    let labels = ld.labels();
    let results: Vec<(Option<_>, usize, u128)> = pairs
        .par_iter()
        .map_init(
            || (BracketEvaluator::new(&bracket), FCache { ld, map: HashMap::new() }),
            |(ev, cache), &(w, t)| {
                let start = Instant::now();
                let (a, b) = (FreeElem::basis(w.clone()), FreeElem::basis(t.clone()));
                let direct = ev.eval(&a, &b);
                let twisted = ev.eval(&InvolutionSpec::PhiMinus.apply(&a), &b);
                let mut max_terms = 0;
                for &i in labels {
                    for &j in labels {
                        let fw = cache.word(w, i, j);
                        for &k in labels {
                            for &l in labels {
                                let lhs = lie_poisson_bracket(ld, &fw, &cache.word(t, k, l));
                                let mut rhs = cache.tensor(&direct, (k, j), (i, l));
                                let s = sign(i, j);
                                if s != 0 {
                                    let second = cache.tensor(&twisted, (k, -i), (-j, l));
                                    rhs.add_scaled(&second, &q(s));
                                }
                                max_terms = max_terms.max(lhs.len()).max(rhs.len());
                                if lhs != rhs {
                                    let inputs = format!(
                                        "{{f({i},{j})({w}), f({k},{l})({t})}}"
                                    );
                                    let c = cx(inputs, DisplayPoly(&lhs), DisplayPoly(&rhs));
                                    return (Some(c), max_terms, start.elapsed().as_millis());
                                }
                            }
                        }
                    }
                }
                (None, max_terms, start.elapsed().as_millis())
            },
        )
        .collect();
    let max_terms = results.iter().map(|r| r.1).max().unwrap_or(0);
    let slowest = results.iter().map(|r| r.2).max().unwrap_or(0);
    let single_letter = pairs.iter().filter(|(w, t)| w.len() == 1 && t.len() == 1).count();
    let failure = results.into_iter().find_map(|r| r.0);
    let n4 = labels.len().pow(4);
    let mut r = CheckReport::new(
        "prop_f10",
        format!(
            "{}, L={n_gens}; {} word pairs of length <= {max_word_len} ({single_letter} single-letter) x {n4} index quadruples",
            ld.show_kind(),
            pairs.len()
        ),
        failure,
    )
    .with_detail("max_poly_terms", max_terms)
    .with_detail("comparisons", pairs.len() * n4);
    if timings {
        r = r.with_detail("slowest_word_pair_millis", slowest as u64);
    }
    r
}

/// Jacobi identity of the Lie–Poisson bracket on all triples of variables of
/// `n_gens` components.
pub fn check_lie_poisson_jacobi(ld: &LieData, n_gens: usize) -> CheckReport {
    let vars: Vec<CVar> = (0..n_gens)
        .flat_map(|r| {
            ld.live_pairs()
                .into_iter()
                .map(move |(i, j)| CVar { i, j, r: r as u16 })
        })
        .collect();
    let n = vars.len();
    let triples: Vec<[usize; 3]> = (0..n)
        .flat_map(|a| (a..n).flat_map(move |b| (b..n).map(move |c| [a, b, c])))
        .collect();
    let failure = triples
        .par_iter()
        .map(|&[a, b, c]| {
            let (x, y, z) = (poly::var(vars[a]), poly::var(vars[b]), poly::var(vars[c]));
            let jac = lie_poisson_bracket(ld, &x, &lie_poisson_bracket(ld, &y, &z))
                + lie_poisson_bracket(ld, &y, &lie_poisson_bracket(ld, &z, &x))
                + lie_poisson_bracket(ld, &z, &lie_poisson_bracket(ld, &x, &y));
            (!jac.is_zero()).then(|| cx(format!("({}, {}, {})", vars[a], vars[b], vars[c]), DisplayPoly(&jac), "0"))
        })
        .find_map_first(|x| x);
    CheckReport::new(
        "lie_poisson_jacobi",
        format!("{}, L={n_gens}; all {} variable triples", ld.show_kind(), triples.len()),
        failure,
    )
}

/// The `F_{ij}` against matrices: the commutator table equals matrix
/// commutators, `τ(E_{ij}) = θ(i)θ(j)E_{−j,−i}` for the `θ`-form, and the
/// `F_{ij}` span exactly `{x : τ(x) = −x}`.
pub fn check_matrix_realization(ld: &LieData) -> CheckReport {
    let scope = format!("{}; all generator pairs", ld.show_kind());
    let tau = match ld.tau() {
        Ok(t) => t,
        Err(e) => return CheckReport::fail("matrix_realization", scope, cx("theta form", e, "")),
    };
    let n = ld.n;
    let to_matrix = |p: &CentElem| -> QMatrix {
        let mut m = QMatrix::zeros(n, n);
        for (mono, c) in p {
            let v = mono.vars()[0];
            m = m.add(&ld.matrix(v.i, v.j).scale(c));
        }
        m
    };
    let labels = ld.labels();
    for &i in labels {
        for &j in labels {
            let e = QMatrix::unit(n, ld.index(i), ld.index(j));
            let expected = QMatrix::unit(n, ld.index(-j), ld.index(-i)).scale(&q(ld.theta2(i, j)));
            if tau.apply(&e) != expected {
                return CheckReport::fail(
                    "matrix_realization",
                    scope,
                    cx(format!("tau(E({i},{j}))"), format!("{:?}", tau.apply(&e)), format!("{expected:?}")),
                );
            }
            for &k in labels {
                for &l in labels {
                    let (a, b) = (ld.matrix(i, j), ld.matrix(k, l));
                    let direct = a.mul(&b).add(&b.mul(&a).scale(&q(-1)));
                    let table = to_matrix(&ld.commutator((i, j), (k, l), 0));
                    if direct != table {
                        return CheckReport::fail(
                            "matrix_realization",
                            scope,
                            cx(format!("[F({i},{j}), F({k},{l})]"), format!("{table:?}"), format!("{direct:?}")),
                        );
                    }
                }
            }
        }
    }
    let live = ld.live_pairs();
    let mut span = QMatrix::zeros(live.len(), n * n);
    for (row, &(i, j)) in live.iter().enumerate() {
        let m = ld.matrix(i, j);
        for a in 0..n {
            for b in 0..n {
                span.set(row, a * n + b, m.get(a, b).clone());
            }
        }
    }
    let (rank, dim) = (span.rank(), tau.antifixed_basis().len());
    if rank != live.len() || rank != dim {
        return CheckReport::fail(
            "matrix_realization",
            scope,
            cx("rank of span(F) vs dim {x : tau(x) = -x}", format!("{rank} ({} variables)", live.len()), dim),
        );
    }
    for &(i, j) in &live {
        if tau.apply(&ld.matrix(i, j)) != ld.matrix(i, j).scale(&q(-1)) {
            return CheckReport::fail("matrix_realization", scope, cx(format!("tau(F({i},{j}))"), "not -F", ""));
        }
    }
    CheckReport::pass("matrix_realization", scope).with_detail("dimension", dim)
}
