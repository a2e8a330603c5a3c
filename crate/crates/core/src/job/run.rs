use std::collections::BTreeMap;

use serde::Serialize;

use crate::centralizer::{check_lie_poisson_jacobi, check_matrix_realization, check_prop_f10, check_prop_f10_with, LieData};
use crate::double_bracket::{check_double_jacobi, check_phi_adapted, DoubleBracket, JacobiScope};
use crate::error::{Error, Result};
use crate::families::{
    check_aybe, check_associative, check_commutative, check_r_skew, check_r_upper_symmetric, kks, linear_bracket,
    ors_example, quadratic_bracket, symmetric_pair_bracket, RTensor, StructureConstants,
};
use crate::free_algebra::{InvolutionSpec, Word};
use crate::linalg::QMatrix;
use crate::lincomb::{q, Q};
use crate::matrix_involutions::{
    mutated_p, verify_coalgebra_lemmas, verify_coalgebra_lemmas_with, verify_f33,
    verify_p_dual_to_sigma, FormStyle, MatrixInvolution, ThetaKind,
};
use crate::poly;
use crate::rep_poisson::jacobiator::{check_jacobiator_formula, JacobiatorScope};
use crate::rep_poisson::{
    check_equivariance, check_jacobi_ring, check_multiplicativity, check_skew, check_twisted_well_defined,
    PoissonStructure, RingScope,
};
use crate::report::{cx, timed, CheckReport};
use crate::rng::PRNG_ID;

use super::{BracketSource, CheckItem, FormSource, InvolutionSource, JobSpec};

pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, Default)]
pub struct RunOptions {
    /// Record wall-clock time per check (makes reports run-dependent).
    pub timings: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub engine_version: String,
    pub prng: String,
    pub seed: u64,
    /// The job in canonical form.
    pub job_echo: String,
    pub checks: Vec<CheckReport>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }
}

impl BracketSource {
    /// The bracket, and the r-tensor or structure constants it came from.
    pub fn build(&self) -> Result<(DoubleBracket, Option<RTensor>, Option<StructureConstants>)> {
        Ok(match self {
            BracketSource::Kks { l } => (kks(*l), None, None),
            BracketSource::SymmetricPair => (symmetric_pair_bracket(), None, None),
            BracketSource::Linear { l, s } => {
                let mut flat = vec![Q::from_integer(0.into()); l * l * l];
                for (idx, c) in s {
                    let [k, i, j] = idx.map(|x| x - 1);
                    flat[(k * l + i) * l + j] += c;
                }
                let sc = StructureConstants::new(*l, flat)?;
                (linear_bracket(&sc), None, Some(sc))
            }
            BracketSource::Quadratic { l, r } => {
                let mut t = RTensor::zero(*l);
                for (idx, c) in r {
                    let [k, ll, i, j] = idx.map(|x| x - 1);
                    let v = t.get(k, ll, i, j) + c;
                    t.set(k, ll, i, j, v);
                }
                (quadratic_bracket(&t)?, Some(t), None)
            }
            BracketSource::Ors { lambda } => {
                let t = ors_example(lambda)?;
                (quadratic_bracket(&t)?, Some(t), None)
            }
            BracketSource::Table { l, entries } => {
                let mut upper: BTreeMap<(usize, usize), crate::free_algebra::Tensor2> = BTreeMap::new();
                for e in entries {
                    let left = Word::new(e.left.iter().map(|x| x - 1));
                    let right = Word::new(e.right.iter().map(|x| x - 1));
                    upper
                        .entry((e.i - 1, e.j - 1))
                        .or_default()
                        .add_term((left, right), e.coeff.clone());
                }
                let b = DoubleBracket::from_upper(*l, |i, j| upper.get(&(i, j)).cloned().unwrap_or_default())?;
                (b, None, None)
            }
        })
    }
}

impl InvolutionSource {
    pub fn build(&self) -> Result<InvolutionSpec> {
        match self {
            InvolutionSource::PhiPlus => Ok(InvolutionSpec::PhiPlus),
            InvolutionSource::PhiMinus => Ok(InvolutionSpec::PhiMinus),
            InvolutionSource::Signed { perm, signs } => {
                InvolutionSpec::signed(perm.iter().map(|p| p - 1).collect(), signs.clone())
            }
        }
    }
}

impl FormSource {
    pub fn build(&self) -> Result<MatrixInvolution> {
        let style = match self {
            FormSource::Identity { d } => FormStyle::Identity(*d),
            FormSource::Symplectic { d } => FormStyle::Symplectic(*d),
            FormSource::Theta { n, kind } => FormStyle::Theta { n: *n, kind: *kind },
            FormSource::Matrix { g } => FormStyle::Matrix(
                QMatrix::from_rows(g.clone()).ok_or_else(|| Error::validation("form.g", "rows differ in length"))?,
            ),
        };
        MatrixInvolution::from_style(&style)
    }
}

/// Built objects shared by the checks of one job.
struct Context<'j> {
    job: &'j JobSpec,
    seed: u64,
    bracket: Option<Result<(DoubleBracket, Option<RTensor>, Option<StructureConstants>)>>,
    structures: BTreeMap<(bool, usize), Result<PoissonStructure>>,
}

fn num(item: &CheckItem, key: &str, default: usize) -> usize {
    item.get(key).map_or(default, |v| v.parse().expect("validated when parsed"))
}

fn flag(item: &CheckItem, key: &str) -> bool {
    item.get(key) == Some("true")
}

impl Context<'_> {
    fn bracket(&mut self) -> Result<&(DoubleBracket, Option<RTensor>, Option<StructureConstants>)> {
        let job = self.job;
        let built = self.bracket.get_or_insert_with(|| match &job.bracket {
            Some(b) => b.build(),
            None => Err(Error::validation("bracket", "this check needs a [bracket] section")),
        });
        built.as_ref().map_err(Clone::clone)
    }

    fn phi(&self) -> Result<InvolutionSpec> {
        self.job
            .involution
            .as_ref()
            .ok_or_else(|| Error::validation("involution", "this check needs an [involution] section"))?
            .build()
    }

    fn tau(&self) -> Result<MatrixInvolution> {
        self.job
            .form
            .as_ref()
            .ok_or_else(|| Error::validation("form", "this check needs a [form] section"))?
            .build()
    }

    fn twisted(&self, item: &CheckItem) -> bool {
        match item.get("ring") {
            Some(r) => r == "twisted",
            None => self.job.involution.is_some() && self.job.form.is_some(),
        }
    }

    fn plain_d(&self, item: &CheckItem) -> Result<usize> {
        if let Some(d) = item.get("d") {
            return Ok(d.parse().expect("validated when parsed"));
        }
        self.job
            .d
            .or_else(|| self.job.form.as_ref().map(FormSource::d))
            .ok_or_else(|| Error::validation("checks.d", format!("check {} needs a dimension", item.name)))
    }

    fn structure(&mut self, item: &CheckItem) -> Result<PoissonStructure> {
        let twisted = self.twisted(item);
        let d = if twisted {
            self.tau()?.d()
        } else {
            self.plain_d(item)?
        };
        if !self.structures.contains_key(&(twisted, d)) {
            let built = self.bracket().cloned().and_then(|(b, _, _)| {
                if twisted {
                    PoissonStructure::induce_twisted(&b, &self.phi()?, &self.tau()?)
                } else {
                    PoissonStructure::induce_plain(&b, d)
                }
            });
            self.structures.insert((twisted, d), built);
        }
        self.structures[&(twisted, d)].clone()
    }

    fn lie(&self, item: &CheckItem) -> Result<LieData> {
        let theta = match &self.job.form {
            Some(FormSource::Theta { n, kind }) => Some((*n, *kind)),
            _ => None,
        };
        let n = match item.get("N") {
            Some(v) => v.parse().expect("validated when parsed"),
            None => theta
                .map(|t| t.0)
                .ok_or_else(|| Error::validation(format!("checks.{}.N", item.name), "missing (or give a theta [form])"))?,
        };
        let kind = match item.get("kind") {
            Some("symplectic") => ThetaKind::Symplectic,
            Some(_) => ThetaKind::Orthogonal,
            None => theta
                .map(|t| t.1)
                .ok_or_else(|| Error::validation(format!("checks.{}.kind", item.name), "missing (or give a theta [form])"))?,
        };
        LieData::new(n, kind)
    }

    fn lie_l(&self, item: &CheckItem) -> usize {
        match &self.job.bracket {
            Some(BracketSource::Kks { l }) => num(item, "L", *l),
            _ => num(item, "L", 1),
        }
    }

    fn run(&mut self, item: &CheckItem, opts: RunOptions) -> Result<CheckReport> {
        let seed = self.seed;
        Ok(match item.name.as_str() {
            "double_jacobi" => {
                let scope = JacobiScope {
                    exhaustive_len: num(item, "exhaustive_len", 1),
                    max_word_len: num(item, "max_word_len", 4),
                    samples: num(item, "samples", 200),
                    seed,
                };
                check_double_jacobi(&self.bracket()?.0, &scope)
            }
            "phi_adapted" => {
                let phi = self.phi()?;
                let b = &self.bracket()?.0;
                check_phi_adapted(b, &phi, num(item, "samples", 100), num(item, "max_word_len", 3), seed)
            }
            "associative" | "commutative" => {
                let sc = self.bracket()?.2.clone().ok_or_else(|| {
                    Error::validation("bracket.family", format!("{} needs family = linear", item.name))
                })?;
                if item.name == "associative" {
                    check_associative(&sc)
                } else {
                    check_commutative(&sc)
                }
            }
            "r_skew" | "aybe" | "r_upper_symmetric" => {
                let r = self.bracket()?.1.clone().ok_or_else(|| {
                    Error::validation("bracket.family", format!("{} needs family = quadratic or ors", item.name))
                })?;
                match item.name.as_str() {
                    "r_skew" => check_r_skew(&r),
                    "aybe" => check_aybe(&r),
                    _ => check_r_upper_symmetric(&r),
                }
            }
            "coalgebra_lemmas" => {
                let d = self.plain_d(item)?;
                if flag(item, "mutate_p") {
                    verify_coalgebra_lemmas_with(d, &mutated_p)
                } else {
                    CheckReport::merge(
                        "coalgebra_lemmas",
                        vec![verify_coalgebra_lemmas(d), verify_p_dual_to_sigma(d)],
                    )
                }
            }
            "tau_identities" => {
                let tau = self.tau()?;
                let mut r = verify_f33(tau.map());
                r.name = "tau_identities".into();
                r
            }
            "normal_form" => {
                let mut twisted_item = item.clone();
                twisted_item.params.insert("ring".into(), "twisted".into());
                let s = self.structure(&twisted_item)?;
                let mut r = CheckReport::pass("normal_form", format!("d={}", s.d()));
                if let serde_json::Value::Object(map) = s.normal_form_details() {
                    for (k, v) in map {
                        r = r.with_detail(&k, v);
                    }
                }
                r
            }
            "skew" => check_skew(&self.structure(item)?),
            "jacobi_ring" => {
                let scope = match item.get("mode") {
                    Some("sampled") => RingScope::Sampled {
                        budget: num(item, "budget", 500),
                        seed,
                    },
                    _ => RingScope::Exhaustive,
                };
                check_jacobi_ring(&self.structure(item)?, scope)
            }
            "multiplicativity" => check_multiplicativity(&self.structure(item)?, num(item, "max_word_len", 3)),
            "well_defined" => {
                let b = self.bracket()?.0.clone();
                check_twisted_well_defined(&b, &self.phi()?, &self.tau()?, num(item, "max_word_len", 3))
            }
            "equivariance" => {
                let mut s = self.structure(item)?;
                if flag(item, "perturb") {
                    let vars = s.ring_vars().to_vec();
                    if vars.len() < 2 {
                        return Err(Error::validation("checks.equivariance.perturb", "ring has fewer than two variables"));
                    }
                    s = s.with_perturbed_entry(vars[0], vars[1], &poly::constant(q(1)));
                }
                check_equivariance(&s)
            }
            "jacobiator_formula" => {
                let scope = JacobiatorScope {
                    samples: num(item, "samples", 50),
                    max_word_len: num(item, "max_word_len", 2),
                    seed,
                };
                let b = self.bracket()?.0.clone();
                if self.twisted(item) {
                    let (phi, tau) = (self.phi()?, self.tau()?);
                    check_jacobiator_formula(&b, tau.d(), Some((&phi, &tau)), &scope)
                } else {
                    check_jacobiator_formula(&b, self.plain_d(item)?, None, &scope)
                }
            }
            "prop_f10" => {
                let ld = self.lie(item)?;
                let (l, len) = (self.lie_l(item), num(item, "max_word_len", 2));
                if flag(item, "negate_theta") {
                    check_prop_f10_with(&ld, l, len, &|i, j| -ld.theta2(i, j), opts.timings)
                } else {
                    check_prop_f10(&ld, l, len, opts.timings)
                }
            }
            "lie_poisson_jacobi" => {
                let ld = self.lie(item)?;
                check_lie_poisson_jacobi(&ld, self.lie_l(item))
            }
            "matrix_realization" => check_matrix_realization(&self.lie(item)?),
            other => return Err(Error::validation("checks.check", format!("unknown check `{other}`"))),
        })
    }
}

/// Runs the given checks in order. Only a missing seed for a sampled check is
/// an error; problems building the bracket, involution or form become failed
/// checks carrying the error message.
pub fn run_checks(job: &JobSpec, checks: &[CheckItem], opts: RunOptions) -> Result<Report> {
    let seed = job.require_seed(checks)?;
    let mut ctx = Context {
        job,
        seed,
        bracket: None,
        structures: BTreeMap::new(),
    };
    let mut reports = Vec::with_capacity(checks.len());
    for item in checks {
        let r = timed(opts.timings, || match ctx.run(item, opts) {
            Ok(r) => r,
            Err(e) => CheckReport::fail(&item.name, "not run", cx("job", e, "")),
        });
        reports.push(r);
    }
    Ok(Report {
        engine_version: ENGINE_VERSION.to_string(),
        prng: PRNG_ID.to_string(),
        seed,
        job_echo: job.serialize(),
        checks: reports,
    })
}

pub fn run_job(job: &JobSpec, opts: RunOptions) -> Result<Report> {
    run_checks(job, &job.checks, opts)
}
