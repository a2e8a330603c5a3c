//! Linear normal forms: a homogeneous linear system in finitely many
//! variables, solved once so that every variable is rewritten in terms of a
//! fixed set of free variables.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::QMatrix;
use crate::lincomb::{q, LinComb};
use crate::poly::{substitute, Monomial, Poly};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearNormalForm<V: Ord> {
    /// Variables of the system, increasing.
    vars: Vec<V>,
    /// Solved form of each eliminated variable in terms of free ones.
    solved: BTreeMap<V, LinComb<V>>,
    relations: Vec<LinComb<V>>,
}

impl<V: Ord + Clone> LinearNormalForm<V> {
    /// Solves `relations` (each read as `= 0`). Elimination runs over the
    /// variables in decreasing order, so the free variables are the smallest
    /// ones in the variable order that the system allows.
    pub fn new(vars: Vec<V>, relations: Vec<LinComb<V>>) -> Result<Self> {
        let mut vars = vars;
        vars.sort();
        vars.dedup();
        let col: BTreeMap<&V, usize> = vars
            .iter()
            .rev()
            .enumerate()
            .map(|(c, v)| (v, c))
            .collect();
        let n = vars.len();
        let mut m = QMatrix::zeros(relations.len(), n);
        for (r, rel) in relations.iter().enumerate() {
            for (v, c) in rel {
                let Some(&c_idx) = col.get(v) else {
                    return Err(Error::InconsistentRelations);
                };
                m.set(r, c_idx, c.clone());
            }
        }
        let pivots = m.rref();
        let by_col: Vec<&V> = vars.iter().rev().collect();
        let mut solved = BTreeMap::new();
        for (r, &p) in pivots.iter().enumerate() {
            let mut image = LinComb::zero();
            for c in 0..n {
                if c != p && !m.get(r, c).is_zero() {
                    image.add_term(by_col[c].clone(), -m.get(r, c));
                }
            }
            solved.insert(by_col[p].clone(), image);
        }
        Ok(LinearNormalForm {
            vars,
            solved,
            relations,
        })
    }

    pub fn vars(&self) -> &[V] {
        &self.vars
    }

    pub fn relations(&self) -> &[LinComb<V>] {
        &self.relations
    }

    pub fn is_free(&self, v: &V) -> bool {
        !self.solved.contains_key(v)
    }

    /// Free variables of the system, increasing.
    pub fn free_vars(&self) -> Vec<V> {
        self.vars.iter().filter(|v| self.is_free(v)).cloned().collect()
    }

    pub fn rank(&self) -> usize {
        self.solved.len()
    }

    /// Image of a variable: its solved form, or itself if free or unknown.
    pub fn reduce_var(&self, v: &V) -> LinComb<V> {
        self.solved
            .get(v)
            .cloned()
            .unwrap_or_else(|| LinComb::basis(v.clone()))
    }

    pub fn reduce_linear(&self, f: &LinComb<V>) -> LinComb<V> {
        f.map_linear(|v| self.reduce_var(v))
    }

    pub fn reduce(&self, f: &Poly<V>) -> Poly<V> {
        if self.solved.is_empty() {
            return f.clone();
        }
        substitute(f, |v| {
            self.solved.get(v).map(|image| {
                image.map_keys(|w| (Monomial::var(w.clone()), q(1)))
            })
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{mul, var};

    #[test]
    fn free_variables_are_smallest() {
        // x0 + x1 = 0, x2 = 2 x1
        let rels = vec![
            LinComb::from_terms([(0u8, q(1)), (1, q(1))]),
            LinComb::from_terms([(2u8, q(1)), (1, q(-2))]),
        ];
        let nf = LinearNormalForm::new(vec![0, 1, 2], rels).unwrap();
        assert_eq!(nf.free_vars(), vec![0]);
        assert_eq!(nf.reduce_var(&2), LinComb::term(0, q(-2)));
        let p = mul(&var(2u8), &var(1));
        let r = nf.reduce(&p);
        assert_eq!(r, mul(&var(0), &var(0)).scale(&q(2)));
        assert_eq!(nf.reduce(&r), r);
        for rel in nf.relations() {
            assert!(nf.reduce_linear(rel).is_zero());
        }
    }

    #[test]
    fn unknown_variable_in_relation_is_rejected() {
        let rels = vec![LinComb::basis(5u8)];
        assert_eq!(LinearNormalForm::new(vec![0u8], rels), Err(Error::InconsistentRelations));
    }
}
