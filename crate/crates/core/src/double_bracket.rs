//! Double brackets given by their values on generator pairs, extended to the
//! whole free algebra by the Leibniz rules.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::free_algebra::{
    flip, inner_words, outer_words, s3_act, DisplayFree, DisplayT2, DisplayT3, FreeElem,
    InvolutionSpec, Perm3, Tensor2, Tensor3, Word,
};
use crate::lincomb::q;
use crate::report::{cx, CheckReport};
use crate::rng::{prng, random_word};

/// A double bracket on `k<α_1, …, α_L>`, stored as the `L × L` table of
/// values `⟦α_i, α_j⟧`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DoubleBracket {
    n_gens: usize,
    table: Vec<Tensor2>,
}

impl DoubleBracket {
    /// Validates `⟦α_i, α_j⟧ = -⟦α_j, α_i⟧°` and that every word in the table
    /// uses only the `n_gens` generators.
    pub fn new(n_gens: usize, table: Vec<Vec<Tensor2>>) -> Result<Self> {
        if table.len() != n_gens || table.iter().any(|row| row.len() != n_gens) {
            return Err(Error::ShapeMismatch(format!(
                "bracket table must be {n_gens}x{n_gens}"
            )));
        }
        let table: Vec<Tensor2> = table.into_iter().flatten().collect();
        for (n, t) in table.iter().enumerate() {
            for (u, v) in t.keys() {
                if u.max_letter().max(v.max_letter()).is_some_and(|m| m >= n_gens) {
                    return Err(Error::IndexOutOfRange(format!(
                        "table entry ({},{}) uses a letter beyond {n_gens}",
                        n / n_gens + 1,
                        n % n_gens + 1
                    )));
                }
            }
        }
        let b = DoubleBracket { n_gens, table };
        for i in 0..n_gens {
            for j in i..n_gens {
                let diff = b.generator(i, j) + &flip(b.generator(j, i));
                if !diff.is_zero() {
                    return Err(Error::SkewViolation {
                        i: i + 1,
                        j: j + 1,
                        difference: DisplayT2(&diff).to_string(),
                    });
                }
            }
        }
        Ok(b)
    }

    /// Builds the table from `f(i, j)` for `i ≤ j` and fills the rest by skew
    /// symmetry.
    pub fn from_upper(n_gens: usize, mut f: impl FnMut(usize, usize) -> Tensor2) -> Result<Self> {
        let mut table = vec![vec![Tensor2::zero(); n_gens]; n_gens];
        for i in 0..n_gens {
            for j in i..n_gens {
                let v = f(i, j);
                table[j][i] = -flip(&v);
                table[i][j] = v;
            }
        }
        Self::new(n_gens, table)
    }

    pub fn from_fn(n_gens: usize, mut f: impl FnMut(usize, usize) -> Tensor2) -> Result<Self> {
        let table = (0..n_gens)
            .map(|i| (0..n_gens).map(|j| f(i, j)).collect())
            .collect();
        Self::new(n_gens, table)
    }

    pub fn zero(n_gens: usize) -> Self {
        DoubleBracket {
            n_gens,
            table: vec![Tensor2::zero(); n_gens * n_gens],
        }
    }

    pub fn n_gens(&self) -> usize {
        self.n_gens
    }

    /// `⟦α_i, α_j⟧` (0-based indices).
    pub fn generator(&self, i: usize, j: usize) -> &Tensor2 {
        &self.table[i * self.n_gens + j]
    }

    pub fn is_zero(&self) -> bool {
        self.table.iter().all(|t| t.is_zero())
    }

    /// One-shot evaluation of `⟦a, b⟧`.
    pub fn eval(&self, a: &FreeElem, b: &FreeElem) -> Tensor2 {
        BracketEvaluator::new(self).eval(a, b)
    }

    pub fn triple(&self, a: &FreeElem, b: &FreeElem, c: &FreeElem) -> Tensor3 {
        BracketEvaluator::new(self).triple(a, b, c)
    }
}

/// Which tensor factor a bracket is applied to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// `⟦a, x⟧_L = ⟦a, x'⟧ ⊗ x''`
    Left,
    /// `⟦a, x⟧_R = x' ⊗ ⟦a, x''⟧`
    Right,
}

/// Evaluates a double bracket on words with a memo table. Not shared between
/// threads; each worker builds its own.
pub struct BracketEvaluator<'a> {
    bracket: &'a DoubleBracket,
    memo: HashMap<(Word, Word), Tensor2>,
}

impl<'a> BracketEvaluator<'a> {
    pub fn new(bracket: &'a DoubleBracket) -> Self {
        BracketEvaluator {
            bracket,
            memo: HashMap::new(),
        }
    }

    pub fn bracket(&self) -> &'a DoubleBracket {
        self.bracket
    }

    /// `⟦u, v⟧` on words.
    pub fn words(&mut self, u: &Word, v: &Word) -> Tensor2 {
        if u.is_empty() || v.is_empty() {
            return Tensor2::zero();
        }
        if u.len() == 1 && v.len() == 1 {
            let i = u.letters().next().unwrap();
            let j = v.letters().next().unwrap();
            return self.bracket.generator(i, j).clone();
        }
        let key = (u.clone(), v.clone());
        if let Some(hit) = self.memo.get(&key) {
            return hit.clone();
        }
        let empty = Word::empty();
        let value = if v.len() > 1 {
            // ⟦u, v'x⟧ = ⟦u, v'⟧ x + v' ⟦u, x⟧
            let (head, last) = v.split_last().unwrap();
            let last = Word::letter(last);
            let mut out = outer_words(&empty, &self.words(u, &head), &last);
            out += &outer_words(&head, &self.words(u, &last), &empty);
            out
        } else {
            // ⟦u'y, v⟧ = ⟦u', v⟧ ∗ y + u' ∗ ⟦y, v⟧
            let (head, last) = u.split_last().unwrap();
            let last = Word::letter(last);
            let mut out = inner_words(&empty, &self.words(&head, v), &last);
            out += &inner_words(&head, &self.words(&last, v), &empty);
            out
        };
        self.memo.insert(key, value.clone());
        value
    }

    pub fn eval(&mut self, a: &FreeElem, b: &FreeElem) -> Tensor2 {
        let mut out = Tensor2::zero();
        for (u, cu) in a {
            for (v, cv) in b {
                out.add_scaled(&self.words(u, v), &(cu * cv));
            }
        }
        out
    }

    /// Applies `⟦a, -⟧` to one factor of `x`.
    pub fn on_tensor(&mut self, a: &FreeElem, x: &Tensor2, side: Side) -> Tensor3 {
        let mut out = Tensor3::zero();
        for ((x1, x2), c) in x {
            for (u, cu) in a {
                let target = if side == Side::Left { x1 } else { x2 };
                let inner = self.words(u, target);
                let c = c * cu;
                for ((p, q_), d) in &inner {
                    let key = match side {
                        Side::Left => (p.clone(), q_.clone(), x2.clone()),
                        Side::Right => (x1.clone(), p.clone(), q_.clone()),
                    };
                    out.add_term(key, &c * d);
                }
            }
        }
        out
    }

    /// `⟦a,b,c⟧ = ⟦a,⟦b,c⟧⟧_L + (123)·⟦b,⟦c,a⟧⟧_L + (123)²·⟦c,⟦a,b⟧⟧_L`
    pub fn triple(&mut self, a: &FreeElem, b: &FreeElem, c: &FreeElem) -> Tensor3 {
        let bc = self.eval(b, c);
        let ca = self.eval(c, a);
        let ab = self.eval(a, b);
        let mut out = self.on_tensor(a, &bc, Side::Left);
        out += &s3_act(Perm3::C123, &self.on_tensor(b, &ca, Side::Left));
        out += &s3_act(Perm3::C132, &self.on_tensor(c, &ab, Side::Left));
        out
    }
}

/// Scope of the double Jacobi sweep.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JacobiScope {
    /// Every triple of words of length `1..=exhaustive_len` is checked.
    pub exhaustive_len: usize,
    /// Random word triples of length `1..=max_word_len`.
    pub max_word_len: usize,
    pub samples: usize,
    pub seed: u64,
}

impl Default for JacobiScope {
    fn default() -> Self {
        JacobiScope {
            exhaustive_len: 1,
            max_word_len: 4,
            samples: 200,
            seed: 0,
        }
    }
}

/// Checks `⟦a,b,c⟧ = 0` on all short word triples and on sampled longer ones.
pub fn check_double_jacobi(b: &DoubleBracket, scope: &JacobiScope) -> CheckReport {
    let n = b.n_gens();
    let short = Word::enumerate(n, 1, scope.exhaustive_len);
    let mut triples = Vec::new();
    for u in &short {
        for v in &short {
            for w in &short {
                triples.push([u.clone(), v.clone(), w.clone()]);
            }
        }
    }
    let exhaustive = triples.len();
    if n > 0 {
        let mut rng = prng(scope.seed);
        for _ in 0..scope.samples {
            let t = [(); 3].map(|_| random_word(&mut rng, n, 1, scope.max_word_len));
            triples.push(t);
        }
    }
    let failure = triples
        .par_iter()
        .map_init(
            || BracketEvaluator::new(b),
            |ev, [u, v, w]| {
                let t = ev.triple(
                    &FreeElem::basis(u.clone()),
                    &FreeElem::basis(v.clone()),
                    &FreeElem::basis(w.clone()),
                );
                (!t.is_zero()).then(|| cx(format!("a={u}, b={v}, c={w}"), DisplayT3(&t), "0"))
            },
        )
        .find_map_first(|x| x);
    CheckReport::new(
        "double_jacobi",
        format!(
            "L={n}; all {exhaustive} word triples of length <= {}; {} sampled triples of length <= {} (seed {})",
            scope.exhaustive_len, scope.samples, scope.max_word_len, scope.seed
        ),
        failure,
    )
}

/// Compares both sides of `φ⊗φ(⟦a,b⟧) = ⟦φa, φb⟧°`; `None` when they agree.
pub fn adaptedness_defect(
    ev: &mut BracketEvaluator<'_>,
    phi: &InvolutionSpec,
    a: &FreeElem,
    b: &FreeElem,
) -> Option<(Tensor2, Tensor2)> {
    let lhs = phi.apply_tensor2(&ev.eval(a, b));
    let rhs = flip(&ev.eval(&phi.apply(a), &phi.apply(b)));
    (lhs != rhs).then_some((lhs, rhs))
}

/// Checks adaptedness on all generator pairs (which suffices) and on
/// `samples` random word pairs of length `1..=max_word_len`.
pub fn check_phi_adapted(
    b: &DoubleBracket,
    phi: &InvolutionSpec,
    samples: usize,
    max_word_len: usize,
    seed: u64,
) -> CheckReport {
    let n = b.n_gens();
    let scope = format!(
        "phi={}; all {} generator pairs; {samples} sampled word pairs of length <= {max_word_len} (seed {seed})",
        phi.name(),
        n * n
    );
    if let Err(e) = phi.check_generators(n) {
        return CheckReport::fail("phi_adapted", scope, cx("involution", e, ""));
    }
    let mut pairs: Vec<(Word, Word)> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (Word::letter(i), Word::letter(j))))
        .collect();
    if n > 0 {
        let mut rng = prng(seed);
        for _ in 0..samples {
            let u = random_word(&mut rng, n, 1, max_word_len);
            let v = random_word(&mut rng, n, 1, max_word_len);
            pairs.push((u, v));
        }
    }
    let failure = pairs
        .par_iter()
        .map_init(
            || BracketEvaluator::new(b),
            |ev, (u, v)| {
                let a = FreeElem::basis(u.clone());
                let bb = FreeElem::basis(v.clone());
                adaptedness_defect(ev, phi, &a, &bb).map(|(l, r)| {
                    cx(
                        format!("a={}, b={}", DisplayFree(&a), DisplayFree(&bb)),
                        DisplayT2(&l),
                        DisplayT2(&r),
                    )
                })
            },
        )
        .find_map_first(|x| x);
    CheckReport::new("phi_adapted", scope, failure)
}

/// Skew symmetry of the extended bracket on a word pair.
pub fn skew_defect(ev: &mut BracketEvaluator<'_>, u: &Word, v: &Word) -> Tensor2 {
    ev.words(u, v) + flip(&ev.words(v, u)).scale(&q(1))
}
