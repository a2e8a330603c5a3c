//! The free unital associative algebra `k<α_1, …, α_L>` over the rationals,
//! its tensor square and cube, and involutive antiautomorphisms.
//!
//! Generators are indexed from 0 inside the crate. The text formats (words
//! `[1,2,1]`, spec files, JSON) use 1-based letters.

use std::fmt;

use crate::error::{Error, Result};
use crate::lincomb::{q, write_lincomb, LinComb, Q};

/// A monomial `α_{i_1} ⋯ α_{i_k}`; the empty word is the unit.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<u16>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letter(i: usize) -> Self {
        Word(vec![i as u16])
    }

    pub fn new<I: IntoIterator<Item = usize>>(letters: I) -> Self {
        Word(letters.into_iter().map(|i| i as u16).collect())
    }

    /// Builds a word from 1-based letters, rejecting `0`.
    pub fn from_one_based(letters: &[usize]) -> Result<Self> {
        if let Some(&bad) = letters.iter().find(|&&l| l == 0) {
            return Err(Error::IndexOutOfRange(format!(
                "letter {bad} (letters are 1-based)"
            )));
        }
        Ok(Word::new(letters.iter().map(|l| l - 1)))
    }

    pub fn letters(&self) -> impl DoubleEndedIterator<Item = usize> + ExactSizeIterator + '_ {
        self.0.iter().map(|&l| l as usize)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max_letter(&self) -> Option<usize> {
        self.letters().max()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.0.len() + other.0.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// Splits off the last letter: `w = w' · last`.
    pub fn split_last(&self) -> Option<(Word, usize)> {
        let (&last, rest) = self.0.split_last()?;
        Some((Word(rest.to_vec()), last as usize))
    }

    pub fn prefix(&self, n: usize) -> Word {
        Word(self.0[..n].to_vec())
    }

    pub fn suffix_from(&self, n: usize) -> Word {
        Word(self.0[n..].to_vec())
    }

    /// All words over `letters` generators with length in `min_len..=max_len`,
    /// shortest first, lexicographic within a length.
    pub fn enumerate(letters: usize, min_len: usize, max_len: usize) -> Vec<Word> {
        let mut out = Vec::new();
        let mut layer = vec![Word::empty()];
        for len in 0..=max_len {
            if len >= min_len {
                out.extend(layer.iter().cloned());
            }
            if len == max_len {
                break;
            }
            layer = layer
                .iter()
                .flat_map(|w| (0..letters).map(move |l| w.concat(&Word::letter(l))))
                .collect();
        }
        out
    }
}

impl fmt::Display for Word {
    /// 1-based bracketed list, e.g. `[1,2,1]`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (n, l) in self.letters().enumerate() {
            if n > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", l + 1)?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Element of the free algebra.
pub type FreeElem = LinComb<Word>;
/// Element of `A ⊗ A`.
pub type Tensor2 = LinComb<(Word, Word)>;
/// Element of `A ⊗ A ⊗ A`.
pub type Tensor3 = LinComb<(Word, Word, Word)>;

pub fn one() -> FreeElem {
    FreeElem::basis(Word::empty())
}

pub fn gen(i: usize) -> FreeElem {
    FreeElem::basis(Word::letter(i))
}

pub fn word_elem(letters: &[usize]) -> FreeElem {
    FreeElem::basis(Word::new(letters.iter().copied()))
}

/// Product in the free algebra (concatenation extended bilinearly).
pub fn mul_free(a: &FreeElem, b: &FreeElem) -> FreeElem {
    a.bilinear(b, |u, v| FreeElem::basis(u.concat(v)))
}

pub fn tensor2(a: &FreeElem, b: &FreeElem) -> Tensor2 {
    a.bilinear(b, |u, v| Tensor2::basis((u.clone(), v.clone())))
}

pub fn tensor3(a: &FreeElem, b: &FreeElem, c: &FreeElem) -> Tensor3 {
    tensor2(a, b).bilinear(c, |(u, v), w| {
        Tensor3::basis((u.clone(), v.clone(), w.clone()))
    })
}

/// `x' ⊗ x'' ↦ x'' ⊗ x'`.
pub fn flip(x: &Tensor2) -> Tensor2 {
    x.map_keys(|(u, v)| ((v.clone(), u.clone()), q(1)))
}

/// Appends a third factor: `x ⊗ c`.
pub fn tensor2_then(x: &Tensor2, c: &FreeElem) -> Tensor3 {
    x.bilinear(c, |(u, v), w| Tensor3::basis((u.clone(), v.clone(), w.clone())))
}

/// Prepends a first factor: `c ⊗ x`.
pub fn then_tensor2(c: &FreeElem, x: &Tensor2) -> Tensor3 {
    c.bilinear(x, |w, (u, v)| Tensor3::basis((w.clone(), u.clone(), v.clone())))
}

/// Which bimodule structure on `A ⊗ A` to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BimoduleMode {
    /// `b · x · c = (b x') ⊗ (x'' c)`
    Outer,
    /// `b ∗ x ∗ c = (x' c) ⊗ (b x'')`
    Inner,
}

pub fn bimodule_act(mode: BimoduleMode, b: &FreeElem, x: &Tensor2, c: &FreeElem) -> Tensor2 {
    let mut out = Tensor2::zero();
    for (bw, bc) in b {
        for ((x1, x2), xc) in x {
            for (cw, cc) in c {
                let key = match mode {
                    BimoduleMode::Outer => (bw.concat(x1), x2.concat(cw)),
                    BimoduleMode::Inner => (x1.concat(cw), bw.concat(x2)),
                };
                out.add_term(key, bc * xc * cc);
            }
        }
    }
    out
}

/// Outer action by single words, used on hot paths.
pub(crate) fn outer_words(b: &Word, x: &Tensor2, c: &Word) -> Tensor2 {
    x.map_keys(|(x1, x2)| ((b.concat(x1), x2.concat(c)), q(1)))
}

/// Inner action by single words.
pub(crate) fn inner_words(b: &Word, x: &Tensor2, c: &Word) -> Tensor2 {
    x.map_keys(|(x1, x2)| ((x1.concat(c), b.concat(x2)), q(1)))
}

/// A permutation of `{1,2,3}`, stored 0-based as the images of `0,1,2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm3(pub [usize; 3]);

impl Perm3 {
    pub const ID: Perm3 = Perm3([0, 1, 2]);
    /// The cycle `1 → 2 → 3 → 1`.
    pub const C123: Perm3 = Perm3([1, 2, 0]);
    pub const C132: Perm3 = Perm3([2, 0, 1]);
    pub const T12: Perm3 = Perm3([1, 0, 2]);
    pub const T13: Perm3 = Perm3([2, 1, 0]);
    pub const T23: Perm3 = Perm3([0, 2, 1]);

    pub fn all() -> [Perm3; 6] {
        [Self::ID, Self::C123, Self::C132, Self::T12, Self::T13, Self::T23]
    }

    /// `(self ∘ other)(i) = self(other(i))`
    pub fn compose(self, other: Perm3) -> Perm3 {
        Perm3([self.0[other.0[0]], self.0[other.0[1]], self.0[other.0[2]]])
    }

    pub fn inverse(self) -> Perm3 {
        let mut inv = [0; 3];
        for (i, &s) in self.0.iter().enumerate() {
            inv[s] = i;
        }
        Perm3(inv)
    }

    /// `s · (x_1, x_2, x_3) = (x_{s⁻¹(1)}, x_{s⁻¹(2)}, x_{s⁻¹(3)})`: factor
    /// `i` moves to position `s(i)`.
    pub fn permute<T: Clone>(self, x: [&T; 3]) -> [T; 3] {
        let inv = self.inverse();
        [x[inv.0[0]].clone(), x[inv.0[1]].clone(), x[inv.0[2]].clone()]
    }
}

/// Natural left action of `S_3` on `A^{⊗3}`.
pub fn s3_act(s: Perm3, x: &Tensor3) -> Tensor3 {
    x.map_keys(|(a, b, c)| {
        let [p, q_, r] = s.permute([a, b, c]);
        ((p, q_, r), q(1))
    })
}

/// An involutive antiautomorphism of the free algebra that maps each
/// generator to a signed generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InvolutionSpec {
    /// `α_{i_1}⋯α_{i_k} ↦ α_{i_k}⋯α_{i_1}`
    PhiPlus,
    /// `α_{i_1}⋯α_{i_k} ↦ (-1)^k α_{i_k}⋯α_{i_1}`
    PhiMinus,
    /// `α_i ↦ ε_i α_{π(i)}` with `π` an involution and `ε_i ε_{π(i)} = 1`.
    Signed { perm: Vec<usize>, signs: Vec<i8> },
}

impl InvolutionSpec {
    pub fn signed(perm: Vec<usize>, signs: Vec<i8>) -> Result<Self> {
        let n = perm.len();
        if signs.len() != n {
            return Err(Error::InvalidInvolution(format!(
                "{} signs for {} generators",
                signs.len(),
                n
            )));
        }
        for (i, &p) in perm.iter().enumerate() {
            if p >= n {
                return Err(Error::InvalidInvolution(format!(
                    "image {} of generator {} out of range",
                    p + 1,
                    i + 1
                )));
            }
            if perm[p] != i {
                return Err(Error::InvalidInvolution(format!(
                    "permutation is not an involution at generator {}",
                    i + 1
                )));
            }
            if signs[i].abs() != 1 {
                return Err(Error::InvalidInvolution(format!(
                    "sign of generator {} must be ±1",
                    i + 1
                )));
            }
            if signs[i] * signs[p] != 1 {
                return Err(Error::InvalidInvolution(format!(
                    "sign condition ε_i ε_π(i) = 1 fails at generator {}",
                    i + 1
                )));
            }
        }
        Ok(InvolutionSpec::Signed { perm, signs })
    }

    /// Checks that the involution is defined on `n_gens` generators.
    pub fn check_generators(&self, n_gens: usize) -> Result<()> {
        match self {
            InvolutionSpec::Signed { perm, .. } if perm.len() != n_gens => {
                Err(Error::InvalidInvolution(format!(
                    "involution acts on {} generators, algebra has {}",
                    perm.len(),
                    n_gens
                )))
            }
            _ => Ok(()),
        }
    }

    /// `φ(α_i) = sign · α_j`
    pub fn generator_image(&self, i: usize) -> (i8, usize) {
        match self {
            InvolutionSpec::PhiPlus => (1, i),
            InvolutionSpec::PhiMinus => (-1, i),
            InvolutionSpec::Signed { perm, signs } => (signs[i], perm[i]),
        }
    }

    pub fn apply_word(&self, w: &Word) -> (i8, Word) {
        let mut sign = 1i8;
        let letters = w
            .letters()
            .rev()
            .map(|l| {
                let (s, j) = self.generator_image(l);
                sign *= s;
                j
            })
            .collect::<Vec<_>>();
        (sign, Word::new(letters))
    }

    pub fn apply(&self, a: &FreeElem) -> FreeElem {
        a.map_keys(|w| {
            let (s, img) = self.apply_word(w);
            (img, q(s as i64))
        })
    }

    /// `φ ⊗ φ`
    pub fn apply_tensor2(&self, x: &Tensor2) -> Tensor2 {
        x.map_keys(|(u, v)| {
            let (su, iu) = self.apply_word(u);
            let (sv, iv) = self.apply_word(v);
            ((iu, iv), q((su * sv) as i64))
        })
    }

    pub fn apply_tensor3(&self, x: &Tensor3) -> Tensor3 {
        x.map_keys(|(u, v, w)| {
            let (su, iu) = self.apply_word(u);
            let (sv, iv) = self.apply_word(v);
            let (sw, iw) = self.apply_word(w);
            ((iu, iv, iw), q((su * sv * sw) as i64))
        })
    }

    pub fn name(&self) -> String {
        match self {
            InvolutionSpec::PhiPlus => "phi_plus".into(),
            InvolutionSpec::PhiMinus => "phi_minus".into(),
            InvolutionSpec::Signed { perm, signs } => format!(
                "signed(perm={:?}, signs={:?})",
                perm.iter().map(|p| p + 1).collect::<Vec<_>>(),
                signs
            ),
        }
    }
}

pub struct DisplayFree<'a>(pub &'a FreeElem);
pub struct DisplayT2<'a>(pub &'a Tensor2);
pub struct DisplayT3<'a>(pub &'a Tensor3);

impl fmt::Display for DisplayFree<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_lincomb(f, self.0, |f, w| write!(f, "{w}"), |_| false)
    }
}

impl fmt::Display for DisplayT2<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_lincomb(f, self.0, |f, (u, v)| write!(f, "{u}⊗{v}"), |_| false)
    }
}

impl fmt::Display for DisplayT3<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_lincomb(
            f,
            self.0,
            |f, (u, v, w)| write!(f, "{u}⊗{v}⊗{w}"),
            |_| false,
        )
    }
}

/// Scalar multiple of the unit.
pub fn scalar(c: Q) -> FreeElem {
    FreeElem::term(Word::empty(), c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lincomb::q;
    use proptest::prelude::*;

    fn t2(u: &[usize], v: &[usize]) -> Tensor2 {
        Tensor2::basis((Word::new(u.iter().copied()), Word::new(v.iter().copied())))
    }

    #[test]
    fn multiplication_examples() {
        assert_eq!(mul_free(&gen(0), &gen(1)), word_elem(&[0, 1]));
        let a = word_elem(&[1, 0]) + gen(1);
        assert_eq!(mul_free(&one(), &a), a);
        let sum = gen(0) + gen(1);
        assert_eq!(
            mul_free(&sum, &gen(0)),
            word_elem(&[0, 0]) + word_elem(&[1, 0])
        );
    }

    #[test]
    fn involution_examples() {
        let phi_m = InvolutionSpec::PhiMinus;
        let phi_p = InvolutionSpec::PhiPlus;
        assert_eq!(phi_m.apply(&word_elem(&[0, 1])), word_elem(&[1, 0]));
        assert_eq!(phi_m.apply(&word_elem(&[0, 1, 1])), -word_elem(&[1, 1, 0]));
        assert_eq!(phi_p.apply(&word_elem(&[0, 1, 0])), word_elem(&[0, 1, 0]));
        assert_eq!(phi_m.apply(&one()), one());
    }

    #[test]
    fn signed_involution_validation() {
        assert!(InvolutionSpec::signed(vec![1, 0], vec![1, 1]).is_ok());
        assert!(InvolutionSpec::signed(vec![1, 0], vec![-1, -1]).is_ok());
        assert!(InvolutionSpec::signed(vec![1, 0], vec![1, -1]).is_err());
        assert!(InvolutionSpec::signed(vec![1, 2, 0], vec![1, 1, 1]).is_err());
        assert!(InvolutionSpec::signed(vec![0], vec![2]).is_err());
    }

    #[test]
    fn flip_examples() {
        assert_eq!(flip(&t2(&[0], &[1])), t2(&[1], &[0]));
        let x = t2(&[], &[0]) - t2(&[0], &[]);
        assert_eq!(flip(&x), t2(&[0], &[]) - t2(&[], &[0]));
        assert_eq!(flip(&flip(&x)), x);
    }

    #[test]
    fn s3_examples() {
        let x = tensor3(&gen(0), &gen(1), &gen(2));
        assert_eq!(s3_act(Perm3::C123, &x), tensor3(&gen(2), &gen(0), &gen(1)));
        assert_eq!(s3_act(Perm3::ID, &x), x);
        let c3 = Perm3::C123.compose(Perm3::C123).compose(Perm3::C123);
        assert_eq!(s3_act(c3, &x), x);
    }

    #[test]
    fn s3_is_a_left_action() {
        let x = tensor3(&word_elem(&[0, 1]), &gen(1), &(gen(2) + one()));
        for s in Perm3::all() {
            for t in Perm3::all() {
                assert_eq!(
                    s3_act(s, &s3_act(t, &x)),
                    s3_act(s.compose(t), &x),
                    "s={s:?} t={t:?}"
                );
            }
        }
    }

    #[test]
    fn bimodule_examples() {
        let unit = t2(&[], &[]);
        assert_eq!(
            bimodule_act(BimoduleMode::Outer, &gen(0), &unit, &gen(1)),
            t2(&[0], &[1])
        );
        assert_eq!(
            bimodule_act(BimoduleMode::Inner, &one(), &t2(&[0], &[1]), &gen(2)),
            t2(&[0, 2], &[1])
        );
        assert_eq!(
            bimodule_act(BimoduleMode::Outer, &one(), &t2(&[], &[0]), &gen(1)),
            t2(&[], &[0, 1])
        );
    }

    #[test]
    fn word_enumeration_counts() {
        assert_eq!(Word::enumerate(2, 0, 2).len(), 7);
        assert_eq!(Word::enumerate(3, 1, 3).len(), 3 + 9 + 27);
        assert_eq!(Word::enumerate(2, 2, 2)[1], Word::new([0, 1]));
    }

    fn arb_elem() -> impl Strategy<Value = FreeElem> {
        prop::collection::vec(
            (prop::collection::vec(0usize..3, 0..4), -3i64..4),
            0..4,
        )
        .prop_map(|terms| {
            FreeElem::from_terms(terms.into_iter().map(|(w, c)| (Word::new(w), q(c))))
        })
    }

    fn arb_involution() -> impl Strategy<Value = InvolutionSpec> {
        prop_oneof![
            Just(InvolutionSpec::PhiPlus),
            Just(InvolutionSpec::PhiMinus),
            Just(InvolutionSpec::signed(vec![1, 0, 2], vec![-1, -1, 1]).unwrap()),
            Just(InvolutionSpec::signed(vec![2, 1, 0], vec![1, -1, 1]).unwrap()),
        ]
    }

    proptest! {
        #[test]
        fn multiplication_is_associative_and_unital(a in arb_elem(), b in arb_elem(), c in arb_elem()) {
            prop_assert_eq!(
                mul_free(&mul_free(&a, &b), &c),
                mul_free(&a, &mul_free(&b, &c))
            );
            prop_assert_eq!(mul_free(&one(), &a), a.clone());
            prop_assert_eq!(mul_free(&a, &one()), a);
        }

        #[test]
        fn involution_is_involutive_antiautomorphism(
            phi in arb_involution(), a in arb_elem(), b in arb_elem()
        ) {
            prop_assert_eq!(
                phi.apply(&mul_free(&a, &b)),
                mul_free(&phi.apply(&b), &phi.apply(&a))
            );
            prop_assert_eq!(phi.apply(&phi.apply(&a)), a);
        }
    }
}
