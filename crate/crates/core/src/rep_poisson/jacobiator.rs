//! The bracket on the symmetric algebra of `L(A,d) = A ⊗ Mat*(d)` (and of its
//! twisted quotient `L(A,d)^{φ,τ}`), before any matrix relations are imposed,
//! and the closed formula for its Jacobiator in terms of the triple bracket.
//!
//! A generator `w ⊗ E*_{ij}` is a [`LVar`]. Nothing relates `(uv | x)` to `u`
//! and `v` at this level, so every word is its own family of variables. In
//! the twisted case the only relations are `φ(a) ⊗ x = a ⊗ τ*(x)`, which
//! pair a word `w` with `rev(π(w))`.

use std::collections::HashMap;
use std::fmt;

use rand::Rng;
use rayon::prelude::*;

use crate::double_bracket::{BracketEvaluator, DoubleBracket};
use crate::free_algebra::{FreeElem, InvolutionSpec, Tensor2, Tensor3, Word};
use crate::lincomb::{q, LinComb};
use crate::matrix_involutions::{p12p23, p_basis, tau_star, Dual1, Dual3, DualKey, MatrixInvolution};
use crate::poly::{self, biderivation, DisplayPoly, Monomial, Poly};
use crate::report::{cx, CheckReport};
use crate::rng::{prng, random_word};

use super::{p_of, LinearNormalForm};

/// The generator `word ⊗ E*_{key}` of `S(L(A,d))`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LVar {
    pub word: Word,
    pub key: DualKey,
}

impl fmt::Display for LVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}|{},{})", self.word, self.key.0 + 1, self.key.1 + 1)
    }
}

impl fmt::Debug for LVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

pub type SymPoly = Poly<LVar>;

fn lvar(word: &Word, key: DualKey) -> SymPoly {
    poly::var(LVar { word: word.clone(), key })
}

/// `a ⊗ x` as a linear element.
pub fn simple(a: &FreeElem, x: &Dual1) -> SymPoly {
    a.bilinear(x, |w, &k| SymPoly::basis(Monomial::var(LVar { word: w.clone(), key: k })))
}

/// `c ⊗² x = (c' ⊗ x')(c'' ⊗ x'')`
pub fn sym2(c: &Tensor2, x: &LinComb<(DualKey, DualKey)>) -> SymPoly {
    let mut out = SymPoly::zero();
    for ((u, v), a) in c {
        for ((k, l), b) in x {
            out.add_scaled(&poly::mul(&lvar(u, *k), &lvar(v, *l)), &(a * b));
        }
    }
    out
}

/// `c ⊗³ x`
pub fn sym3(c: &Tensor3, x: &Dual3) -> SymPoly {
    let mut out = SymPoly::zero();
    for ((u, v, w), a) in c {
        for ((k, l, m), b) in x {
            let f = poly::mul(&poly::mul(&lvar(u, *k), &lvar(v, *l)), &lvar(w, *m));
            out.add_scaled(&f, &(a * b));
        }
    }
    out
}

fn dual3(x: &Dual1, y: &Dual1, z: &Dual1) -> Dual3 {
    x.bilinear(y, |&a, &b| LinComb::basis((a, b)))
        .bilinear(z, |&(a, b), &c| Dual3::basis((a, b, c)))
}

/// Twisting data for `S(L(A,d)^{φ,τ})`.
#[derive(Clone, Debug)]
pub struct LayerTwist {
    phi: InvolutionSpec,
    tau: MatrixInvolution,
    /// For words with `φ(w) = ±w`: the solved system `±E*_x = τ*(E*_x)`,
    /// indexed by `(sign + 1) / 2`.
    fixed: [LinearNormalForm<DualKey>; 2],
}

impl LayerTwist {
    pub fn new(phi: &InvolutionSpec, tau: &MatrixInvolution) -> crate::Result<Self> {
        let d = tau.d();
        let keys: Vec<DualKey> = (0..d).flat_map(|i| (0..d).map(move |j| (i, j))).collect();
        let system = |s: i64| {
            let rels = keys
                .iter()
                .map(|&k| LinComb::term(k, q(s)) - tau_star(tau.map(), &Dual1::basis(k)))
                .filter(|r| !r.is_zero())
                .collect();
            LinearNormalForm::new(keys.clone(), rels)
        };
        Ok(LayerTwist {
            phi: phi.clone(),
            tau: tau.clone(),
            fixed: [system(-1)?, system(1)?],
        })
    }

    /// Normal form of a generator. For `φ(w) = s·w̃` with `w̃ ≠ w`, the larger
    /// of the two words is rewritten through `(w|y) = s·(w̃|τ*y)`.
    pub fn reduce_var(&self, v: &LVar) -> SymPoly {
        let (s, wt) = self.phi.apply_word(&v.word);
        if wt == v.word {
            let nf = &self.fixed[usize::from(s > 0)];
            nf.reduce_linear(&LinComb::basis(v.key))
                .map_keys(|&k| (Monomial::var(LVar { word: wt.clone(), key: k }), q(1)))
        } else if wt < v.word {
            simple(&FreeElem::basis(wt), &tau_star(self.tau.map(), &Dual1::basis(v.key)))
                .scale(&q(s as i64))
        } else {
            poly::var(v.clone())
        }
    }

    pub fn reduce(&self, f: &SymPoly) -> SymPoly {
        poly::substitute(f, |v| Some(self.reduce_var(v)))
    }
}

/// The bracket `{a ⊗ x, b ⊗ y} = ⟦a,b⟧ ⊗² P(x,y)` (plus
/// `⟦φa,b⟧ ⊗² P(τ*x, y)` when twisted), with a per-worker cache on
/// generator pairs.
pub struct SymBracket<'a> {
    ev: BracketEvaluator<'a>,
    twist: Option<&'a LayerTwist>,
    cache: HashMap<(LVar, LVar), SymPoly>,
}

impl<'a> SymBracket<'a> {
    pub fn new(bracket: &'a DoubleBracket, twist: Option<&'a LayerTwist>) -> Self {
        SymBracket {
            ev: BracketEvaluator::new(bracket),
            twist,
            cache: HashMap::new(),
        }
    }

    pub fn reduce(&self, f: &SymPoly) -> SymPoly {
        match self.twist {
            Some(t) => t.reduce(f),
            None => f.clone(),
        }
    }

    pub fn var_bracket(&mut self, u: &LVar, v: &LVar) -> SymPoly {
        if let Some(p) = self.cache.get(&(u.clone(), v.clone())) {
            return p.clone();
        }
        let (a, b) = (FreeElem::basis(u.word.clone()), FreeElem::basis(v.word.clone()));
        let (x, y) = (Dual1::basis(u.key), Dual1::basis(v.key));
        let mut out = sym2(&self.ev.eval(&a, &b), &p_of(&x, &y));
        if let Some(t) = self.twist {
            let fa = t.phi.apply(&a);
            out += &sym2(&self.ev.eval(&fa, &b), &p_of(&tau_star(t.tau.map(), &x), &y));
            out = t.reduce(&out);
        }
        self.cache.insert((u.clone(), v.clone()), out.clone());
        out
    }

    pub fn bracket(&mut self, f: &SymPoly, g: &SymPoly) -> SymPoly {
        let (f, g) = (self.reduce(f), self.reduce(g));
        biderivation(&f, &g, |u, v| self.var_bracket(u, v))
    }

    /// `{f,{g,h}} + {g,{h,f}} + {h,{f,g}}`
    pub fn jacobiator(&mut self, f: &SymPoly, g: &SymPoly, h: &SymPoly) -> SymPoly {
        let gh = self.bracket(g, h);
        let hf = self.bracket(h, f);
        let fg = self.bracket(f, g);
        self.bracket(f, &gh) + self.bracket(g, &hf) + self.bracket(h, &fg)
    }

    /// `⟦a,b,c⟧ ⊗³ P₁₂P₂₃(x,y,z) − ⟦a,c,b⟧ ⊗³ P₁₂P₂₃(x,z,y)`
    pub fn v_term(&mut self, abc: [&FreeElem; 3], xyz: [&Dual1; 3]) -> SymPoly {
        let [a, b, c] = abc;
        let [x, y, z] = xyz;
        let first = sym3(&self.ev.triple(a, b, c), &p12p23(&p_basis, &dual3(x, y, z)));
        let second = sym3(&self.ev.triple(a, c, b), &p12p23(&p_basis, &dual3(x, z, y)));
        first - second
    }

    /// The closed form of the Jacobiator of `a⊗x, b⊗y, c⊗z`: one `V` term
    /// when plain; four (each argument in turn replaced by `φ(·) ⊗ τ*(·)`)
    /// when twisted.
    pub fn jacobiator_formula(&mut self, abc: [&FreeElem; 3], xyz: [&Dual1; 3]) -> SymPoly {
        let mut out = self.v_term(abc, xyz);
        if let Some(t) = self.twist {
            for slot in 0..3 {
                let fa = t.phi.apply(abc[slot]);
                let tx = tau_star(t.tau.map(), xyz[slot]);
                let (mut a2, mut x2) = (abc, xyz);
                a2[slot] = &fa;
                x2[slot] = &tx;
                out += &self.v_term(a2, x2);
            }
            out = t.reduce(&out);
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct JacobiatorScope {
    pub samples: usize,
    pub max_word_len: usize,
    pub seed: u64,
}

impl Default for JacobiatorScope {
    fn default() -> Self {
        JacobiatorScope {
            samples: 50,
            max_word_len: 2,
            seed: 0,
        }
    }
}

/// Compares the Jacobiator of sampled triples of generators `w ⊗ E*_{ij}`
/// with its closed form. `twist = None` works in `S(L(A,d))`; otherwise in
/// `S(L(A,d)^{φ,τ})`, where the bracket must be `φ`-adapted for the bracket
/// itself to be well defined. The detail `nonzero` counts samples with a
/// nonvanishing Jacobiator.
pub fn check_jacobiator_formula(
    bracket: &DoubleBracket,
    d: usize,
    twist: Option<(&InvolutionSpec, &MatrixInvolution)>,
    scope: &JacobiatorScope,
) -> CheckReport {
    let n = bracket.n_gens();
    let layer = match twist {
        None => None,
        Some((phi, tau)) => match LayerTwist::new(phi, tau) {
            Ok(t) => Some(t),
            Err(e) => return CheckReport::fail("jacobiator_formula", "construction", cx("twist", e, "")),
        },
    };
    let d = layer.as_ref().map_or(d, |t| t.tau.d());
    let mode = match &layer {
        None => "plain".to_string(),
        Some(t) => format!("twisted ({}, {:?} form)", t.phi.name(), t.tau.form().kind()),
    };
    let desc = format!(
        "{mode}, L={n}, d={d}; {} sampled triples of words of length 1..={} (seed {})",
        scope.samples, scope.max_word_len, scope.seed
    );
    if n == 0 || d == 0 {
        return CheckReport::pass("jacobiator_formula", desc);
    }
    let mut rng = prng(scope.seed);
    let triples: Vec<[(Word, DualKey); 3]> = (0..scope.samples)
        .map(|_| {
            [(); 3].map(|_| {
                let w = random_word(&mut rng, n, 1, scope.max_word_len);
                (w, (rng.random_range(0..d), rng.random_range(0..d)))
            })
        })
        .collect();
    let results: Vec<(bool, Option<_>)> = triples
        .par_iter()
        .map_init(
            || SymBracket::new(bracket, layer.as_ref()),
            |sb, t| {
                let a: Vec<FreeElem> = t.iter().map(|(w, _)| FreeElem::basis(w.clone())).collect();
                let x: Vec<Dual1> = t.iter().map(|(_, k)| Dual1::basis(*k)).collect();
                let f: Vec<SymPoly> = a.iter().zip(&x).map(|(a, x)| simple(a, x)).collect();
                let lhs = sb.jacobiator(&f[0], &f[1], &f[2]);
                let rhs = sb.jacobiator_formula([&a[0], &a[1], &a[2]], [&x[0], &x[1], &x[2]]);
                let witness = (lhs != rhs).then(|| {
                    let names: Vec<String> = f.iter().map(|p| DisplayPoly(p).to_string()).collect();
                    cx(names.join(", "), DisplayPoly(&lhs), DisplayPoly(&rhs))
                });
                (!lhs.is_zero(), witness)
            },
        )
        .collect();
    let nonzero = results.iter().filter(|(nz, _)| *nz).count();
    let failure = results.into_iter().find_map(|(_, w)| w);
    CheckReport::new("jacobiator_formula", desc, failure).with_detail("nonzero", nonzero)
}
