//! Sparse commutative polynomials over the rationals in an arbitrary ordered
//! variable type, and the extension of a bracket on variables to a
//! biderivation.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::lincomb::{q, write_lincomb, LinComb, Q};

/// A commutative monomial: variables with multiplicity, kept sorted.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial<V>(Vec<V>);

impl<V: Ord + Clone> Monomial<V> {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: V) -> Self {
        Monomial(vec![v])
    }

    pub fn from_vars(mut vars: Vec<V>) -> Self {
        vars.sort();
        Monomial(vars)
    }

    pub fn vars(&self) -> &[V] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut a, mut b) = (self.0.iter().peekable(), other.0.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some(x), Some(y)) => {
                    if x <= y {
                        out.push(a.next().unwrap().clone());
                    } else {
                        out.push(b.next().unwrap().clone());
                    }
                }
                (Some(_), None) => out.push(a.next().unwrap().clone()),
                (None, Some(_)) => out.push(b.next().unwrap().clone()),
                (None, None) => break,
            }
        }
        Monomial(out)
    }

    /// Each distinct variable with the monomial divided by it once and the
    /// multiplicity (the partial derivative is `mult · rest`).
    pub fn partials(&self) -> Vec<(V, u32, Monomial<V>)> {
        let mut out = Vec::new();
        let mut n = 0;
        while n < self.0.len() {
            let v = &self.0[n];
            let mut m = n + 1;
            while m < self.0.len() && &self.0[m] == v {
                m += 1;
            }
            let mut rest = self.0.clone();
            rest.remove(n);
            out.push((v.clone(), (m - n) as u32, Monomial(rest)));
            n = m;
        }
        out
    }
}

pub type Poly<V> = LinComb<Monomial<V>>;

pub fn constant<V: Ord + Clone>(c: Q) -> Poly<V> {
    Poly::term(Monomial::one(), c)
}

pub fn var<V: Ord + Clone>(v: V) -> Poly<V> {
    Poly::basis(Monomial::var(v))
}

pub fn mul<V: Ord + Clone>(a: &Poly<V>, b: &Poly<V>) -> Poly<V> {
    a.bilinear(b, |x, y| Poly::basis(x.mul(y)))
}

/// Replaces every variable by a polynomial (`None` keeps the variable).
pub fn substitute<V: Ord + Clone>(f: &Poly<V>, mut sub: impl FnMut(&V) -> Option<Poly<V>>) -> Poly<V> {
    let mut cache: BTreeMap<V, Poly<V>> = BTreeMap::new();
    let mut out = Poly::zero();
    for (m, c) in f {
        let mut acc = constant(c.clone());
        for v in m.vars() {
            let image = cache
                .entry(v.clone())
                .or_insert_with(|| sub(v).unwrap_or_else(|| var(v.clone())));
            acc = mul(&acc, image);
        }
        out += &acc;
    }
    out
}

/// The derivation extending `d` on variables.
pub fn derivation<V: Ord + Clone>(f: &Poly<V>, mut d: impl FnMut(&V) -> Poly<V>) -> Poly<V> {
    let mut out = Poly::zero();
    for (m, c) in f {
        for (v, mult, rest) in m.partials() {
            let dv = d(&v);
            if dv.is_zero() {
                continue;
            }
            let rest = Poly::term(rest, c * q(mult as i64));
            out += &mul(&rest, &dv);
        }
    }
    out
}

/// `{f, g} = Σ ∂f/∂u · ∂g/∂v · {u, v}` for a bracket given on variables.
pub fn biderivation<V: Ord + Clone>(
    f: &Poly<V>,
    g: &Poly<V>,
    mut on_vars: impl FnMut(&V, &V) -> Poly<V>,
) -> Poly<V> {
    let df: Vec<(V, Poly<V>)> = partial_derivatives(f);
    let dg: Vec<(V, Poly<V>)> = partial_derivatives(g);
    let mut out = Poly::zero();
    for (u, fu) in &df {
        for (v, gv) in &dg {
            let b = on_vars(u, v);
            if b.is_zero() {
                continue;
            }
            out += &mul(&mul(fu, gv), &b);
        }
    }
    out
}

/// `(v, ∂f/∂v)` for every variable occurring in `f`.
pub fn partial_derivatives<V: Ord + Clone>(f: &Poly<V>) -> Vec<(V, Poly<V>)> {
    let mut parts: BTreeMap<V, Poly<V>> = BTreeMap::new();
    for (m, c) in f {
        for (v, mult, rest) in m.partials() {
            parts
                .entry(v)
                .or_default()
                .add_term(rest, c * q(mult as i64));
        }
    }
    parts.into_iter().filter(|(_, p)| !p.is_zero()).collect()
}

/// Evaluates at a point; `Err(v)` names the first unassigned variable.
pub fn evaluate<V: Ord + Clone>(f: &Poly<V>, value: impl Fn(&V) -> Option<Q>) -> Result<Q, V> {
    let mut total = Q::zero();
    for (m, c) in f {
        let mut t = c.clone();
        for v in m.vars() {
            t *= value(v).ok_or_else(|| v.clone())?;
        }
        total += t;
    }
    Ok(total)
}

pub fn variables<V: Ord + Clone>(f: &Poly<V>) -> Vec<V> {
    let mut vs: Vec<V> = f.keys().flat_map(|m| m.vars().iter().cloned()).collect();
    vs.sort();
    vs.dedup();
    vs
}

pub fn max_degree<V: Ord + Clone>(f: &Poly<V>) -> usize {
    f.keys().map(Monomial::degree).max().unwrap_or(0)
}

/// Display wrapper; variables are joined by `*`.
pub struct DisplayPoly<'a, V: Ord>(pub &'a Poly<V>);

impl<V: Ord + Clone + fmt::Display> fmt::Display for DisplayPoly<'_, V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_lincomb(
            f,
            self.0,
            |f, m| {
                for (n, v) in m.vars().iter().enumerate() {
                    if n > 0 {
                        write!(f, "*")?;
                    }
                    write!(f, "{v}")?;
                }
                Ok(())
            },
            Monomial::is_one,
        )
    }
}

impl<V: fmt::Debug> fmt::Debug for Monomial<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (n, v) in self.0.iter().enumerate() {
            if n > 0 {
                write!(f, "*")?;
            }
            write!(f, "{v:?}")?;
        }
        Ok(())
    }
}

pub fn one_poly<V: Ord + Clone>() -> Poly<V> {
    constant(Q::one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn x(i: u8) -> Poly<u8> {
        var(i)
    }

    #[test]
    fn arithmetic_and_display() {
        let p = mul(&(x(1) + x(2)), &(x(1) - x(2)));
        assert_eq!(p, mul(&x(1), &x(1)) - mul(&x(2), &x(2)));
        assert_eq!(DisplayPoly(&(x(1) + constant(q(2)))).to_string(), "2 + 1");
        assert_eq!(max_degree(&p), 2);
        assert_eq!(variables(&p), vec![1, 2]);
    }

    #[test]
    fn substitution_and_evaluation() {
        let p = mul(&x(1), &x(1)) + x(2);
        let s = substitute(&p, |v| (*v == 1).then(|| x(3) + constant(q(1))));
        assert_eq!(s, mul(&x(3), &x(3)) + x(3).scale(&q(2)) + constant(q(1)) + x(2));
        assert_eq!(evaluate(&p, |v| Some(q(*v as i64))), Ok(q(3)));
        assert_eq!(evaluate(&p, |v| (*v == 1).then(|| q(1))), Err(2));
    }

    fn arb_poly() -> impl Strategy<Value = Poly<u8>> {
        prop::collection::vec((prop::collection::vec(0u8..4, 0..3), -3i64..4), 0..4).prop_map(|ts| {
            Poly::from_terms(ts.into_iter().map(|(vs, c)| (Monomial::from_vars(vs), q(c))))
        })
    }

    /// Bracket on variables of the form `{x_a, x_b} = (a - b) x_a x_b`.
    fn toy(a: &u8, b: &u8) -> Poly<u8> {
        mul(&var(*a), &var(*b)).scale(&q(*a as i64 - *b as i64))
    }

    proptest! {
        #[test]
        fn biderivation_is_leibniz_and_skew(f in arb_poly(), g in arb_poly(), h in arb_poly()) {
            let lhs = biderivation(&mul(&f, &g), &h, toy);
            let rhs = mul(&f, &biderivation(&g, &h, toy)) + mul(&biderivation(&f, &h, toy), &g);
            prop_assert_eq!(lhs, rhs);
            prop_assert_eq!(biderivation(&f, &g, toy), -biderivation(&g, &f, toy));
        }

        #[test]
        fn derivation_is_leibniz(f in arb_poly(), g in arb_poly()) {
            let d = |v: &u8| var(*v).scale(&q(*v as i64 + 1));
            prop_assert_eq!(
                derivation(&mul(&f, &g), d),
                mul(&derivation(&f, d), &g) + mul(&f, &derivation(&g, d))
            );
        }
    }
}
