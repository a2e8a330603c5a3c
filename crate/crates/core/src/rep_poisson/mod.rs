//! Coordinate rings of representation spaces, their twisted quotients, and
//! the Poisson brackets induced from a double bracket.
//!
//! The ring `O(A,d)` is generated by the entries `v[g]_{ij}` of the generic
//! matrices of the generators. For a word `w`, `(w)_{ij}` is the corresponding
//! entry of the matrix product. The twisted ring `O(A,d)^{φ,τ}` is the
//! quotient by the linear relations `ε_g v[π(g)]_{ij} = Σ_{kl} τ^{ij}_{kl}
//! v[g]_{kl}`, handled through a [`LinearNormalForm`].

pub mod jacobiator;
pub mod normal_form;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde_json::json;

use crate::double_bracket::{BracketEvaluator, DoubleBracket};
use crate::error::{Error, Result};
use crate::free_algebra::{FreeElem, InvolutionSpec, Tensor2, Word};
use crate::linalg::QMatrix;
use crate::lincomb::{format_q, q, LinComb, Q};
use crate::matrix_involutions::{p_basis, tau_star, Dual1, Dual2, MatrixInvolution};
use crate::poly::{self, biderivation, derivation, DisplayPoly, Monomial, Poly};
use crate::report::{cx, CheckReport};
use crate::rng::prng;

pub use normal_form::LinearNormalForm;

/// The coordinate `v[gen]_{row,col}` (0-based fields; displayed 1-based as
/// `g:i:j`).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var {
    pub gen: u16,
    pub row: u16,
    pub col: u16,
}

impl Var {
    pub fn new(gen: usize, row: usize, col: usize) -> Self {
        Var {
            gen: gen as u16,
            row: row as u16,
            col: col as u16,
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.gen + 1, self.row + 1, self.col + 1)
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Var {
    type Err = Error;

    /// Parses the 1-based `g:i:j` form.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.trim().split(':').collect();
        let nums: Vec<usize> = parts
            .iter()
            .map(|p| p.trim().parse::<usize>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::validation("variable", format!("`{s}` is not of the form g:i:j")))?;
        match nums.as_slice() {
            [g, i, j] if *g > 0 && *i > 0 && *j > 0 => Ok(Var::new(g - 1, i - 1, j - 1)),
            _ => Err(Error::validation("variable", format!("`{s}` is not of the form g:i:j with 1-based indices"))),
        }
    }
}

pub type PolyElem = Poly<Var>;

pub fn show(p: &PolyElem) -> String {
    DisplayPoly(p).to_string()
}

/// `(w)_{ij} = Σ v[w_1]_{i a_1} v[w_2]_{a_1 a_2} ⋯ v[w_m]_{a_{m-1} j}`, and
/// `δ_{ij}` for the empty word.
pub fn word_entry(w: &Word, i: usize, j: usize, d: usize) -> PolyElem {
    let mut row: Vec<PolyElem> = (0..d)
        .map(|a| if a == i { poly::one_poly() } else { Poly::zero() })
        .collect();
    for g in w.letters() {
        row = (0..d)
            .map(|b| {
                let mut acc = Poly::zero();
                for (a, ra) in row.iter().enumerate() {
                    if !ra.is_zero() {
                        acc += &poly::mul(ra, &poly::var(Var::new(g, a, b)));
                    }
                }
                acc
            })
            .collect();
    }
    row.swap_remove(j)
}

/// `a_{ij}` for `a` in the free algebra (0-based `i, j`).
pub fn entry_poly(a: &FreeElem, i: usize, j: usize, d: usize) -> Result<PolyElem> {
    if i >= d || j >= d {
        return Err(Error::IndexOutOfRange(format!(
            "entry ({},{}) for d={d}",
            i + 1,
            j + 1
        )));
    }
    let mut out = Poly::zero();
    for (w, c) in a {
        out.add_scaled(&word_entry(w, i, j, d), c);
    }
    Ok(out)
}

/// `(a | x)` for `a ∈ A`, `x ∈ Mat*(d)`.
pub fn pair1(a: &FreeElem, x: &Dual1, d: usize) -> PolyElem {
    let mut out = Poly::zero();
    for (w, c) in a {
        for (&(i, j), e) in x {
            out.add_scaled(&word_entry(w, i, j, d), &(c * e));
        }
    }
    out
}

/// `(c' ⊗ c'' | x ⊗ y) = (c'|x)(c''|y)`, extended bilinearly.
pub fn pair2(t: &Tensor2, x: &Dual2, d: usize) -> PolyElem {
    let mut out = Poly::zero();
    for ((u, v), c) in t {
        for (&((i, j), (k, l)), e) in x {
            let f = poly::mul(&word_entry(u, i, j, d), &word_entry(v, k, l, d));
            out.add_scaled(&f, &(c * e));
        }
    }
    out
}

/// `P(x, y)` for general dual elements.
pub fn p_of(x: &Dual1, y: &Dual1) -> Dual2 {
    x.bilinear(y, |&a, &b| p_basis(a, b))
}

/// The twisting data of `O(A,d)^{φ,τ}`.
#[derive(Clone, Debug)]
pub struct Twist {
    pub phi: InvolutionSpec,
    pub tau: MatrixInvolution,
    pub nf: LinearNormalForm<Var>,
}

#[derive(Clone, Debug)]
pub enum Mode {
    Plain,
    Twisted(Box<Twist>),
}

/// `ε_g v[π(g)]_{ij} − Σ_{kl} τ^{ij}_{kl} v[g]_{kl}` for all `g, i, j`.
pub fn twisted_relations(n_gens: usize, phi: &InvolutionSpec, tau: &MatrixInvolution) -> Vec<LinComb<Var>> {
    let d = tau.d();
    let mut rels = Vec::new();
    for g in 0..n_gens {
        let (eps, pg) = phi.generator_image(g);
        for i in 0..d {
            for j in 0..d {
                let mut rel = LinComb::term(Var::new(pg, i, j), q(eps as i64));
                for ((k, l), c) in &tau_star(tau.map(), &Dual1::basis((i, j))) {
                    rel.add_term(Var::new(g, *k, *l), -c);
                }
                if !rel.is_zero() {
                    rels.push(rel);
                }
            }
        }
    }
    rels
}

pub fn all_vars(n_gens: usize, d: usize) -> Vec<Var> {
    let mut vs = Vec::with_capacity(n_gens * d * d);
    for g in 0..n_gens {
        for i in 0..d {
            for j in 0..d {
                vs.push(Var::new(g, i, j));
            }
        }
    }
    vs
}

/// Entry matrices of words in normal form, built letter by letter. The
/// reduction is a ring homomorphism, so products of cached entries need no
/// further reduction.
pub struct EntryCache<'s> {
    s: &'s PoissonStructure,
    words: HashMap<Word, Vec<PolyElem>>,
}

impl<'s> EntryCache<'s> {
    pub fn new(s: &'s PoissonStructure) -> Self {
        EntryCache {
            s,
            words: HashMap::new(),
        }
    }

    fn ensure(&mut self, w: &Word) {
        if self.words.contains_key(w) {
            return;
        }
        let d = self.s.d;
        let m: Vec<PolyElem> = match w.split_last() {
            None => (0..d * d)
                .map(|ij| if ij / d == ij % d { poly::one_poly() } else { Poly::zero() })
                .collect(),
            Some((head, g)) => {
                self.ensure(&head);
                let h = &self.words[&head];
                let letter: Vec<PolyElem> = (0..d * d)
                    .map(|ij| self.s.reduce(&poly::var(Var::new(g, ij / d, ij % d))))
                    .collect();
                (0..d * d)
                    .map(|ij| {
                        let (i, j) = (ij / d, ij % d);
                        let mut acc = Poly::zero();
                        for a in 0..d {
                            let (l, r) = (&h[i * d + a], &letter[a * d + j]);
                            if !l.is_zero() && !r.is_zero() {
                                acc += &poly::mul(l, r);
                            }
                        }
                        acc
                    })
                    .collect()
            }
        };
        self.words.insert(w.clone(), m);
    }

    /// `(w)_{ij}` in normal form.
    pub fn entry(&mut self, w: &Word, i: usize, j: usize) -> &PolyElem {
        self.ensure(w);
        &self.words[w][i * self.s.d + j]
    }

    /// [`pair2`] in normal form.
    pub fn pair2(&mut self, t: &Tensor2, x: &Dual2) -> PolyElem {
        let mut out = Poly::zero();
        for ((u, v), c) in t {
            self.ensure(u);
            self.ensure(v);
            let (mu, mv) = (&self.words[u], &self.words[v]);
            let d = self.s.d;
            for (&((i, j), (k, l)), e) in x {
                let (f, g) = (&mu[i * d + j], &mv[k * d + l]);
                if !f.is_zero() && !g.is_zero() {
                    out.add_scaled(&poly::mul(f, g), &(c * e));
                }
            }
        }
        out
    }
}

/// A Poisson structure (or, for a non-Poisson double bracket, just a skew
/// biderivation) on `O(A,d)` or `O(A,d)^{φ,τ}`, with the brackets of the
/// ring variables precomputed.
#[derive(Clone, Debug)]
pub struct PoissonStructure {
    d: usize,
    bracket: DoubleBracket,
    mode: Mode,
    ring_vars: Vec<Var>,
    table: HashMap<(Var, Var), PolyElem>,
}

impl PoissonStructure {
    /// `{a_{ij}, b_{kl}} = ⟦a,b⟧'_{kj} ⟦a,b⟧''_{il}`
    pub fn induce_plain(bracket: &DoubleBracket, d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::validation("d", "dimension must be at least 1"));
        }
        let mut s = PoissonStructure {
            d,
            bracket: bracket.clone(),
            mode: Mode::Plain,
            ring_vars: all_vars(bracket.n_gens(), d),
            table: HashMap::new(),
        };
        s.fill_table();
        Ok(s)
    }

    /// The twisted bracket
    /// `{a_{ij}, b_{kl}} = ⟦a,b⟧'_{kj}⟦a,b⟧''_{il} + Σ_{mn} τ^{ij}_{mn} ⟦φa,b⟧'_{kn}⟦φa,b⟧''_{ml}`
    /// on the quotient ring. Requires `φ`-adaptedness on generator pairs.
    pub fn induce_twisted(bracket: &DoubleBracket, phi: &InvolutionSpec, tau: &MatrixInvolution) -> Result<Self> {
        phi.check_generators(bracket.n_gens())?;
        let r = crate::double_bracket::check_phi_adapted(bracket, phi, 0, 1, 0);
        if let Some(c) = r.counterexample {
            return Err(Error::NotPhiAdapted(format!(
                "{}: {} vs {}",
                c.inputs, c.lhs, c.rhs
            )));
        }
        Self::induce_twisted_unchecked(bracket, phi, tau)
    }

    /// As [`induce_twisted`](Self::induce_twisted) without the adaptedness
    /// check; used to exhibit what goes wrong for a non-adapted bracket.
    pub fn induce_twisted_unchecked(
        bracket: &DoubleBracket,
        phi: &InvolutionSpec,
        tau: &MatrixInvolution,
    ) -> Result<Self> {
        phi.check_generators(bracket.n_gens())?;
        let d = tau.d();
        let vars = all_vars(bracket.n_gens(), d);
        let nf = LinearNormalForm::new(vars, twisted_relations(bracket.n_gens(), phi, tau))?;
        let ring_vars = nf.free_vars();
        let mut s = PoissonStructure {
            d,
            bracket: bracket.clone(),
            mode: Mode::Twisted(Box::new(Twist {
                phi: phi.clone(),
                tau: tau.clone(),
                nf,
            })),
            ring_vars,
            table: HashMap::new(),
        };
        s.fill_table();
        Ok(s)
    }

    fn fill_table(&mut self) {
        let pairs: Vec<(Var, Var)> = self
            .ring_vars
            .iter()
            .flat_map(|&u| self.ring_vars.iter().map(move |&v| (u, v)))
            .collect();
        let this = &*self;
        let values: Vec<((Var, Var), PolyElem)> = pairs
            .par_iter()
            .map_init(
                || BracketEvaluator::new(&this.bracket),
                |ev, &(u, v)| {
                    let val = this.formula(
                        ev,
                        &crate::free_algebra::gen(u.gen as usize),
                        &Dual1::basis((u.row as usize, u.col as usize)),
                        &crate::free_algebra::gen(v.gen as usize),
                        &Dual1::basis((v.row as usize, v.col as usize)),
                    );
                    ((u, v), val)
                },
            )
            .collect();
        self.table = values.into_iter().filter(|(_, p)| !p.is_zero()).collect();
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn bracket(&self) -> &DoubleBracket {
        &self.bracket
    }

    pub fn mode(&self) -> &Mode {
        &self.mode
    }

    pub fn twist(&self) -> Option<&Twist> {
        match &self.mode {
            Mode::Plain => None,
            Mode::Twisted(t) => Some(t),
        }
    }

    /// Generators of the ring: all variables (plain) or the free variables
    /// of the normal form (twisted).
    pub fn ring_vars(&self) -> &[Var] {
        &self.ring_vars
    }

    /// The twisted relations kill every variable (e.g. `d = 1` with `φ⁻`).
    pub fn is_zero_ring(&self) -> bool {
        self.ring_vars.is_empty()
    }

    pub fn reduce(&self, f: &PolyElem) -> PolyElem {
        match &self.mode {
            Mode::Plain => f.clone(),
            Mode::Twisted(t) => t.nf.reduce(f),
        }
    }

    /// `a_{ij}` in normal form.
    pub fn entry(&self, a: &FreeElem, i: usize, j: usize) -> Result<PolyElem> {
        Ok(self.reduce(&entry_poly(a, i, j, self.d)?))
    }

    /// The defining formula on `(a|x)` and `(b|y)`, in normal form:
    /// `(⟦a,b⟧ | P(x,y))`, plus `(⟦φa,b⟧ | P(τ*x, y))` when twisted.
    pub fn formula(
        &self,
        ev: &mut BracketEvaluator<'_>,
        a: &FreeElem,
        x: &Dual1,
        b: &FreeElem,
        y: &Dual1,
    ) -> PolyElem {
        self.formula_cached(ev, &mut EntryCache::new(self), a, x, b, y)
    }

    /// As [`formula`](Self::formula), reusing the entry matrices in `cache`.
    pub fn formula_cached(
        &self,
        ev: &mut BracketEvaluator<'_>,
        cache: &mut EntryCache<'_>,
        a: &FreeElem,
        x: &Dual1,
        b: &FreeElem,
        y: &Dual1,
    ) -> PolyElem {
        let mut out = cache.pair2(&ev.eval(a, b), &p_of(x, y));
        if let Mode::Twisted(t) = &self.mode {
            let fa = t.phi.apply(a);
            let tx = tau_star(t.tau.map(), x);
            out += &cache.pair2(&ev.eval(&fa, b), &p_of(&tx, y));
        }
        out
    }

    /// Bracket of two ring variables.
    pub fn var_bracket(&self, u: &Var, v: &Var) -> PolyElem {
        if let Some(p) = self.table.get(&(*u, *v)) {
            return p.clone();
        }
        let known = |w: &Var| self.ring_vars.binary_search(w).is_ok();
        if known(u) && known(v) {
            return Poly::zero();
        }
        // A variable outside the ring generators: go through its normal form.
        self.poisson_eval(&poly::var(*u), &poly::var(*v))
    }

    /// `{f, g}` by the biderivation rule; inputs are first brought to normal
    /// form, and so is the result.
    pub fn poisson_eval(&self, f: &PolyElem, g: &PolyElem) -> PolyElem {
        self.bracket_normal(&self.reduce(f), &self.reduce(g))
    }

    /// `{f, g}` for `f, g` already in normal form.
    fn bracket_normal(&self, f: &PolyElem, g: &PolyElem) -> PolyElem {
        biderivation(f, g, |u, v| self.table.get(&(*u, *v)).cloned().unwrap_or_default())
    }

    /// A copy whose table entry `{u, v}` is shifted by `delta` (and `{v, u}`
    /// by `-delta`), for negative controls.
    pub fn with_perturbed_entry(&self, u: Var, v: Var, delta: &PolyElem) -> Self {
        let mut s = self.clone();
        s.table.entry((u, v)).or_default().add_scaled(delta, &q(1));
        s.table.entry((v, u)).or_default().add_scaled(delta, &q(-1));
        s
    }

    /// Exact value of `f` at a point. In twisted mode the assignment must
    /// satisfy every relation whose variables it covers.
    pub fn evaluate(&self, f: &PolyElem, assignment: &BTreeMap<Var, Q>) -> Result<Q> {
        if let Mode::Twisted(t) = &self.mode {
            for rel in t.nf.relations() {
                let vals: Option<Vec<Q>> = rel
                    .iter()
                    .map(|(v, c)| assignment.get(v).map(|x| x * c))
                    .collect();
                if let Some(vals) = vals {
                    let total: Q = vals.into_iter().sum();
                    if total != Q::from_integer(0.into()) {
                        return Err(Error::RelationViolated(format!(
                            "{} = 0 evaluates to {}",
                            show_linear(rel),
                            format_q(&total)
                        )));
                    }
                }
            }
        }
        evaluate_at_point(f, assignment)
    }

    /// Relation system and free variables, for the report.
    pub fn normal_form_details(&self) -> serde_json::Value {
        match &self.mode {
            Mode::Plain => json!({ "mode": "plain", "variables": self.ring_vars.len() }),
            Mode::Twisted(t) => json!({
                "mode": "twisted",
                "phi": t.phi.name(),
                "relations": t.nf.relations().iter().map(|r| format!("{} = 0", show_linear(r))).collect::<Vec<_>>(),
                "rank": t.nf.rank(),
                "free_variables": self.ring_vars.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
                "zero_ring": self.is_zero_ring(),
            }),
        }
    }

    pub fn mode_name(&self) -> String {
        match &self.mode {
            Mode::Plain => format!("plain, L={}, d={}", self.bracket.n_gens(), self.d),
            Mode::Twisted(t) => format!(
                "twisted ({}, {:?} form), L={}, d={}",
                t.phi.name(),
                t.tau.form().kind(),
                self.bracket.n_gens(),
                self.d
            ),
        }
    }
}

pub fn show_linear(r: &LinComb<Var>) -> String {
    let p: PolyElem = r.map_keys(|v| (Monomial::var(*v), q(1)));
    show(&p)
}

/// Exact evaluation of `f` given values for its variables.
pub fn evaluate_at_point(f: &PolyElem, assignment: &BTreeMap<Var, Q>) -> Result<Q> {
    poly::evaluate(f, |v| assignment.get(v).cloned()).map_err(|v| Error::MissingVariable(v.to_string()))
}

/// Skew symmetry on every ordered pair of ring variables.
pub fn check_skew(s: &PoissonStructure) -> CheckReport {
    let name = if s.twist().is_some() { "twisted_skew" } else { "skew" };
    let vars = s.ring_vars();
    for u in vars {
        for v in vars {
            let a = s.var_bracket(u, v);
            let b = s.var_bracket(v, u);
            if a != -&b {
                return CheckReport::fail(
                    name,
                    s.mode_name(),
                    cx(format!("{{{u}, {v}}}"), show(&a), show(&-b)),
                );
            }
        }
    }
    CheckReport::pass(name, format!("{}; all {} ordered variable pairs", s.mode_name(), vars.len().pow(2)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RingScope {
    Exhaustive,
    Sampled { budget: usize, seed: u64 },
}

/// `{u, p}` for a single variable `u`.
fn bracket_var_poly(s: &PoissonStructure, u: &Var, p: &PolyElem) -> PolyElem {
    let mut out = Poly::zero();
    for (v, dp) in poly::partial_derivatives(p) {
        let b = s.var_bracket(u, &v);
        if !b.is_zero() {
            out += &poly::mul(&dp, &b);
        }
    }
    out
}

/// `{u,{v,w}} + {v,{w,u}} + {w,{u,v}}`
pub fn jacobiator_vars(s: &PoissonStructure, u: &Var, v: &Var, w: &Var) -> PolyElem {
    let mut j = bracket_var_poly(s, u, &s.var_bracket(v, w));
    j += &bracket_var_poly(s, v, &s.var_bracket(w, u));
    j += &bracket_var_poly(s, w, &s.var_bracket(u, v));
    j
}

/// Jacobi identity on triples of ring variables: all `u ≤ v ≤ w`, or a
/// seeded random sample.
pub fn check_jacobi_ring(s: &PoissonStructure, scope: RingScope) -> CheckReport {
    let vars = s.ring_vars();
    let n = vars.len();
    let triples: Vec<[usize; 3]> = match scope {
        RingScope::Exhaustive => (0..n)
            .flat_map(|a| (a..n).flat_map(move |b| (b..n).map(move |c| [a, b, c])))
            .collect(),
        RingScope::Sampled { budget, seed } => {
            use rand::Rng;
            let mut rng = prng(seed);
            if n == 0 {
                Vec::new()
            } else {
                (0..budget)
                    .map(|_| [0; 3].map(|_| rng.random_range(0..n)))
                    .collect()
            }
        }
    };
    let desc = match scope {
        RingScope::Exhaustive => format!("all {} variable triples", triples.len()),
        RingScope::Sampled { budget, seed } => format!("{budget} sampled variable triples (seed {seed})"),
    };
    let failure = triples
        .par_iter()
        .map(|&[a, b, c]| {
            let j = jacobiator_vars(s, &vars[a], &vars[b], &vars[c]);
            (!j.is_zero()).then(|| {
                cx(
                    format!("({}, {}, {})", vars[a], vars[b], vars[c]),
                    show(&j),
                    "0",
                )
            })
        })
        .find_map_first(|x| x);
    let mut r = CheckReport::new("jacobi_ring", format!("{}; {desc}", s.mode_name()), failure);
    if s.is_zero_ring() {
        r = r.with_detail("zero_ring", true);
    }
    r
}

/// `{(w)_{ij}, (t)_{kl}}` from the word-level formula against the Leibniz
/// expansion of the entry polynomials, for all nonempty words up to
/// `max_len` and all index quadruples.
pub fn check_multiplicativity(s: &PoissonStructure, max_len: usize) -> CheckReport {
    let d = s.d();
    let words = Word::enumerate(s.bracket().n_gens(), 1, max_len);
    let pairs: Vec<(&Word, &Word)> = words
        .iter()
        .flat_map(|w| words.iter().map(move |t| (w, t)))
        .collect();
    let failure = pairs
        .par_iter()
        .map_init(
            || (BracketEvaluator::new(s.bracket()), EntryCache::new(s)),
            |(ev, cache), &(w, t)| {
                let (a, b) = (FreeElem::basis(w.clone()), FreeElem::basis(t.clone()));
                for i in 0..d {
                    for j in 0..d {
                        let wij = cache.entry(w, i, j).clone();
                        for k in 0..d {
                            for l in 0..d {
                                let lhs = s.formula_cached(ev, cache, &a, &Dual1::basis((i, j)), &b, &Dual1::basis((k, l)));
                                let rhs = s.bracket_normal(&wij, cache.entry(t, k, l));
                                if lhs != rhs {
                                    return Some(cx(
                                        format!("{{({w})_({},{}), ({t})_({},{})}}", i + 1, j + 1, k + 1, l + 1),
                                        show(&lhs),
                                        show(&rhs),
                                    ));
                                }
                            }
                        }
                    }
                }
                None
            },
        )
        .find_map_first(|x| x);
    CheckReport::new(
        "multiplicativity",
        format!(
            "{}; {} word pairs of length <= {max_len}, all {} index quadruples",
            s.mode_name(),
            pairs.len(),
            d.pow(4)
        ),
        failure,
    )
}

/// In twisted mode, `(φ(a))_{ij}` and `(a | τ*E*_{ij})` name the same ring
/// element; the bracket formula must give the same value for both names, in
/// the first and in the second argument.
pub fn check_substitution_symmetry(s: &PoissonStructure, max_len: usize) -> CheckReport {
    let Some(t) = s.twist() else {
        return CheckReport::pass("substitution_symmetry", "plain mode: no relations");
    };
    let d = s.d();
    let words = Word::enumerate(s.bracket().n_gens(), 1, max_len);
    let basis: Vec<(usize, usize)> = (0..d).flat_map(|i| (0..d).map(move |j| (i, j))).collect();
    let pairs: Vec<(&Word, &Word)> = words
        .iter()
        .flat_map(|w| words.iter().map(move |u| (w, u)))
        .collect();
    let failure = pairs
        .par_iter()
        .map_init(
            || (BracketEvaluator::new(s.bracket()), EntryCache::new(s)),
            |(ev, cache), &(w, u)| {
                let (a, b) = (FreeElem::basis(w.clone()), FreeElem::basis(u.clone()));
                let (fa, fb) = (t.phi.apply(&a), t.phi.apply(&b));
                for &xk in &basis {
                    for &yk in &basis {
                        let (x, y) = (Dual1::basis(xk), Dual1::basis(yk));
                        let (tx, ty) = (tau_star(t.tau.map(), &x), tau_star(t.tau.map(), &y));
                        let mut f = |a: &FreeElem, x: &Dual1, b: &FreeElem, y: &Dual1| {
                            s.formula_cached(ev, cache, a, x, b, y)
                        };
                        let first = (f(&fa, &x, &b, &y), f(&a, &tx, &b, &y));
                        let second = (f(&a, &x, &fb, &y), f(&a, &x, &b, &ty));
                        for (slot, (l, r)) in [("first", first), ("second", second)] {
                            if l != r {
                                return Some(cx(
                                    format!(
                                        "{slot} argument: a={w}, x=E*({},{}), b={u}, y=E*({},{})",
                                        xk.0 + 1,
                                        xk.1 + 1,
                                        yk.0 + 1,
                                        yk.1 + 1
                                    ),
                                    show(&l),
                                    show(&r),
                                ));
                            }
                        }
                    }
                }
                None
            },
        )
        .find_map_first(|x| x);
    CheckReport::new(
        "substitution_symmetry",
        format!("{}; word pairs of length <= {max_len}, both arguments", s.mode_name()),
        failure,
    )
}

/// Well-definedness of the twisted bracket: substitution symmetry in both
/// arguments, skew symmetry, and compatibility with multiplication. The
/// adaptedness of `bracket` is deliberately not assumed.
pub fn check_twisted_well_defined(
    bracket: &DoubleBracket,
    phi: &InvolutionSpec,
    tau: &MatrixInvolution,
    max_len: usize,
) -> CheckReport {
    match PoissonStructure::induce_twisted_unchecked(bracket, phi, tau) {
        Ok(s) => CheckReport::merge(
            "well_defined",
            vec![
                check_substitution_symmetry(&s, max_len.min(2)),
                check_multiplicativity(&s, max_len),
            ],
        ),
        Err(e) => CheckReport::fail("well_defined", "construction", cx("twisted ring", e, "")),
    }
}

/// `D_X(v[g]_{ij}) = Σ_k X_{ik} v[g]_{kj} − v[g]_{ik} X_{kj}`, the first-order
/// part of `v ↦ (1 + tX) v (1 + tX)⁻¹`.
pub fn conjugation_derivation(x: &QMatrix, v: &Var) -> PolyElem {
    let d = x.rows();
    let mut out = Poly::zero();
    let (i, j) = (v.row as usize, v.col as usize);
    for k in 0..d {
        out.add_term(Monomial::var(Var::new(v.gen as usize, k, j)), x.get(i, k).clone());
        out.add_term(Monomial::var(Var::new(v.gen as usize, i, k)), -x.get(k, j));
    }
    out
}

/// `D_X{u, v} = {D_X u, v} + {u, D_X v}` for each basis element `X` of
/// `gl(d)` (plain) or `{X : τ(X) = −X}` (twisted) and all variable pairs.
pub fn check_equivariance(s: &PoissonStructure) -> CheckReport {
    let d = s.d();
    let (algebra, basis): (&str, Vec<QMatrix>) = match s.twist() {
        None => (
            "gl(d)",
            (0..d)
                .flat_map(|i| (0..d).map(move |j| QMatrix::unit(d, i, j)))
                .collect(),
        ),
        Some(t) => ("{X : τ(X) = -X}", t.tau.antifixed_basis()),
    };
    let vars = s.ring_vars();
    let dx_of = |x: &QMatrix, f: &PolyElem| -> PolyElem {
        s.reduce(&derivation(f, |v| conjugation_derivation(x, v)))
    };
    let jobs: Vec<(usize, usize, usize)> = (0..basis.len())
        .flat_map(|b| (0..vars.len()).flat_map(move |u| (0..vars.len()).map(move |v| (b, u, v))))
        .collect();
    let failure = jobs
        .par_iter()
        .map(|&(b, ui, vi)| {
            let x = &basis[b];
            let (u, v) = (&vars[ui], &vars[vi]);
            let (pu, pv) = (poly::var(*u), poly::var(*v));
            let lhs = dx_of(x, &s.var_bracket(u, v));
            let rhs = s.poisson_eval(&dx_of(x, &pu), &pv) + s.poisson_eval(&pu, &dx_of(x, &pv));
            (lhs != rhs).then(|| cx(format!("X={x:?}, u={u}, v={v}"), show(&lhs), show(&rhs)))
        })
        .find_map_first(|x| x);
    CheckReport::new(
        "equivariance",
        format!(
            "{}; {} basis elements of {algebra}, all {} variable pairs",
            s.mode_name(),
            basis.len(),
            vars.len().pow(2)
        ),
        failure,
    )
}

#[cfg(test)]
mod tests;
