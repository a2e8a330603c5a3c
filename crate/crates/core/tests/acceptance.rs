//! One line per acceptance criterion, each with a wall-clock limit.
//! Runs without the libtest harness so the lines are always printed.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use dpoisson::centralizer::{check_prop_f10, check_prop_f10_with, LieData};
use dpoisson::double_bracket::{check_double_jacobi, check_phi_adapted, JacobiScope};
use dpoisson::families::{
    check_aybe, check_associative, check_commutative, check_r_skew, check_r_upper_symmetric, kks,
    linear_bracket, ors_example, quadratic_bracket, symmetric_pair_bracket, StructureConstants,
};
use dpoisson::free_algebra::InvolutionSpec;
use dpoisson::job::{run_job, JobSpec, RunOptions};
use dpoisson::lincomb::q;
use dpoisson::matrix_involutions::{
    mutated_p, verify_coalgebra_lemmas, verify_coalgebra_lemmas_with, verify_f33, FormKind, FormStyle,
    MatrixInvolution, ThetaKind,
};
use dpoisson::rep_poisson::jacobiator::{check_jacobiator_formula, JacobiatorScope};
use dpoisson::rep_poisson::{
    check_equivariance, check_jacobi_ring, check_multiplicativity, check_skew, check_twisted_well_defined,
    PoissonStructure, RingScope,
};
use dpoisson::report::CheckReport;

type Outcome = Result<String, String>;

fn need(r: CheckReport) -> Result<CheckReport, String> {
    if r.passed {
        Ok(r)
    } else {
        let c = r.counterexample.as_ref().unwrap();
        Err(format!("{} failed at {} (lhs {}, rhs {})", r.name, c.inputs, c.lhs, c.rhs))
    }
}

fn refute(r: CheckReport) -> Result<CheckReport, String> {
    match &r.counterexample {
        Some(c) if !r.passed && !c.inputs.is_empty() => Ok(r),
        _ => Err(format!("{} unexpectedly passed: {}", r.name, r.scope)),
    }
}

fn nonzero(r: &CheckReport) -> u64 {
    r.details.get("nonzero").and_then(|v| v.as_u64()).unwrap()
}

fn double_jacobi() -> Outcome {
    for l in 1..=3 {
        // Exhaustive as far as the time budget allows, then sampled up to
        // length 4.
        let exhaustive_len = [4, 3, 2][l - 1];
        let scope = JacobiScope { exhaustive_len, max_word_len: 4, samples: 3000, seed: 1 };
        need(check_double_jacobi(&kks(l), &scope))?;
    }
    Ok("kks(1..=3), words <= 4 (exhaustive to 4, 3, 2)".into())
}

fn algebra(n: usize, table: &[((usize, usize), &[(usize, i64)])]) -> StructureConstants {
    StructureConstants::from_fn(n, |k, i, j| {
        table
            .iter()
            .filter(|((a, b), _)| (*a, *b) == (i, j))
            .flat_map(|(_, v)| v.iter())
            .filter(|(kk, _)| *kk == k)
            .map(|(_, c)| q(*c))
            .sum()
    })
}

fn matrix_units() -> StructureConstants {
    // e_{2a+b} = E_{ab}
    StructureConstants::from_fn(4, |k, i, j| {
        let (a, b, c, d) = (i / 2, i % 2, j / 2, j % 2);
        if b == c && k == 2 * a + d {
            q(1)
        } else {
            q(0)
        }
    })
}

fn family_equivalences() -> Outcome {
    // (name, algebra, associative, commutative)
    let catalog: Vec<(&str, StructureConstants, bool, bool)> = vec![
        ("k", algebra(1, &[((0, 0), &[(0, 1)])]), true, true),
        ("k x k", algebra(2, &[((0, 0), &[(0, 1)]), ((1, 1), &[(1, 1)])]), true, true),
        ("dual numbers", algebra(2, &[((0, 0), &[(0, 1)]), ((0, 1), &[(1, 1)]), ((1, 0), &[(1, 1)])]), true, true),
        ("zero product", algebra(2, &[]), true, true),
        (
            "upper triangular 2x2",
            algebra(3, &[((0, 0), &[(0, 1)]), ((0, 1), &[(1, 1)]), ((1, 2), &[(1, 1)]), ((2, 2), &[(2, 1)])]),
            true,
            false,
        ),
        ("Mat(2)", matrix_units(), true, false),
        ("e1e1=e2, e2e2=e1", algebra(2, &[((0, 0), &[(1, 1)]), ((1, 1), &[(0, 1)])]), false, true),
        ("e1e2=e1", algebra(2, &[((0, 1), &[(0, 1)])]), false, false),
        ("e1e2=e2, e2e1=-e2", algebra(2, &[((0, 1), &[(1, 1)]), ((1, 0), &[(1, -1)])]), false, false),
    ];
    let scope = JacobiScope { exhaustive_len: 2, max_word_len: 3, samples: 100, seed: 2 };
    for (name, s, assoc, comm) in &catalog {
        let b = linear_bracket(s);
        let a = check_associative(s).passed;
        let c = check_commutative(s).passed;
        if (a, c) != (*assoc, *comm) {
            return Err(format!("{name}: catalog labels disagree with the structure constants"));
        }
        let j = check_double_jacobi(&b, &scope).passed;
        let p = check_phi_adapted(&b, &InvolutionSpec::PhiMinus, 50, 3, 2).passed;
        if j != a || p != c {
            return Err(format!("{name}: double Jacobi {j} vs associative {a}, adapted {p} vs commutative {c}"));
        }
    }
    Ok(format!("{} structure-constant instances", catalog.len()))
}

fn aybe_pipeline() -> Outcome {
    for lambda in [vec![q(0), q(1)], vec![q(0), q(1), q(3)]] {
        let r = ors_example(&lambda).map_err(|e| e.to_string())?;
        need(check_r_skew(&r))?;
        need(check_aybe(&r))?;
        need(check_r_upper_symmetric(&r))?;
        let b = quadratic_bracket(&r).map_err(|e| e.to_string())?;
        let scope = JacobiScope { exhaustive_len: 2, max_word_len: 4, samples: 300, seed: 3 };
        need(check_double_jacobi(&b, &scope))?;
        need(check_phi_adapted(&b, &InvolutionSpec::PhiPlus, 100, 4, 3))?;
        need(check_phi_adapted(&b, &InvolutionSpec::PhiMinus, 100, 4, 3))?;
    }
    let mut r = ors_example(&[q(0), q(1), q(3)]).map_err(|e| e.to_string())?;
    let v = r.get(0, 1, 1, 2).clone();
    r.set(0, 1, 1, 2, v + q(1));
    refute(check_aybe(&r))?;
    Ok("ors(0,1), ors(0,1,3); mutated r refuted".into())
}

fn operator_lemmas() -> Outcome {
    for d in 2..=4 {
        need(verify_coalgebra_lemmas(d))?;
    }
    let mut styles = Vec::new();
    for d in 1..=4 {
        styles.push(FormStyle::Identity(d));
        styles.push(FormStyle::Theta { n: d, kind: ThetaKind::Orthogonal });
    }
    for d in [2, 4] {
        styles.push(FormStyle::Symplectic(d));
        styles.push(FormStyle::Theta { n: d, kind: ThetaKind::Symplectic });
    }
    let (mut sym, mut skew) = (0, 0);
    for style in &styles {
        let tau = MatrixInvolution::from_style(style).map_err(|e| e.to_string())?;
        match tau.form().kind() {
            FormKind::Symmetric => sym += 1,
            FormKind::Skew => skew += 1,
        }
        need(verify_f33(tau.map()))?;
    }
    Ok(format!("d = 2,3,4; {sym} symmetric and {skew} skew forms"))
}

fn plain_induced() -> Outcome {
    let b = kks(2);
    for d in [2, 3] {
        let s = PoissonStructure::induce_plain(&b, d).map_err(|e| e.to_string())?;
        need(check_jacobi_ring(&s, RingScope::Exhaustive))?;
        need(check_multiplicativity(&s, 3))?;
        need(check_equivariance(&s))?;
    }
    Ok("kks(2), d = 2,3".into())
}

fn twisted_induced() -> Outcome {
    let b = kks(2);
    let phi = InvolutionSpec::PhiMinus;
    for style in [FormStyle::Identity(3), FormStyle::Symplectic(2), FormStyle::Symplectic(4)] {
        let tau = MatrixInvolution::from_style(&style).map_err(|e| e.to_string())?;
        let s = PoissonStructure::induce_twisted(&b, &phi, &tau).map_err(|e| e.to_string())?;
        need(check_skew(&s))?;
        need(check_twisted_well_defined(&b, &phi, &tau, 3))?;
        need(check_jacobi_ring(&s, RingScope::Exhaustive))?;
        need(check_equivariance(&s))?;
    }
    Ok("kks(2) with phi_minus: transpose d=3, symplectic d=2,4".into())
}

fn jacobiator_formulas() -> Outcome {
    let scope = JacobiatorScope { samples: 50, max_word_len: 2, seed: 4 };
    let tau = MatrixInvolution::from_style(&FormStyle::Identity(2)).map_err(|e| e.to_string())?;
    let phi = InvolutionSpec::PhiMinus;
    let fixture = symmetric_pair_bracket();
    for twist in [None, Some((&phi, &tau))] {
        let k = need(check_jacobiator_formula(&kks(2), 2, twist, &scope))?;
        if nonzero(&k) != 0 {
            return Err("KKS Jacobiator is nonzero".into());
        }
        let f = need(check_jacobiator_formula(&fixture, 2, twist, &scope))?;
        if nonzero(&f) == 0 {
            return Err("fixture Jacobiator vanished on every sample".into());
        }
    }
    Ok("d=2, 50 samples each, plain and twisted".into())
}

fn centralizer() -> Outcome {
    for (n, kind) in [(3, ThetaKind::Orthogonal), (4, ThetaKind::Symplectic)] {
        let ld = LieData::new(n, kind).map_err(|e| e.to_string())?;
        need(check_prop_f10(&ld, 2, 2, false))?;
    }
    Ok("o(3) and sp(4), L=2, words <= 2".into())
}

fn negative_controls() -> Outcome {
    refute(check_phi_adapted(&kks(2), &InvolutionSpec::PhiPlus, 20, 3, 5))?;
    let ld = LieData::new(3, ThetaKind::Orthogonal).map_err(|e| e.to_string())?;
    refute(check_prop_f10_with(&ld, 2, 1, &|i, j| -ld.theta2(i, j), false))?;
    refute(verify_coalgebra_lemmas_with(3, &mutated_p))?;
    Ok("phi_plus adaptedness, broken theta, mutated P".into())
}

const DETERMINISM_JOB: &str = "\
[bracket]
family = symmetric_pair

[involution]
kind = phi_minus

[form]
style = identity
d = 2

[checks]
d = 2
seed = 9
check = phi_adapted, samples = 40
check = jacobiator_formula, ring = twisted, samples = 20
check = jacobi_ring, ring = plain, mode = sampled, budget = 30
";

fn determinism() -> Outcome {
    let job = JobSpec::parse(DETERMINISM_JOB).map_err(|e| e.to_string())?;
    let a = run_job(&job, RunOptions::default()).map_err(|e| e.to_string())?.to_json();
    let b = run_job(&job, RunOptions::default()).map_err(|e| e.to_string())?.to_json();
    if a != b {
        return Err("reports differ".into());
    }
    Ok(format!("{} bytes, identical", a.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, u64, fn() -> Outcome); 10] = [
        ("double Jacobi", 10, double_jacobi),
        ("family equivalences", 10, family_equivalences),
        ("AYBE pipeline", 30, aybe_pipeline),
        ("operator lemmas", 10, operator_lemmas),
        ("plain induced structure", 60, plain_induced),
        ("twisted induced structure", 300, twisted_induced),
        ("Jacobiator formulas", 120, jacobiator_formulas),
        ("centralizer", 600, centralizer),
        ("negative controls", 600, negative_controls),
        ("determinism", 600, determinism),
    ];
    let mut failures = 0;
    for (n, (name, limit, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = f();
        let took = start.elapsed();
        let line = match &outcome {
            Ok(_) if took > Duration::from_secs(*limit) => Err(format!("over the {limit} s limit")),
            other => other.clone(),
        };
        let (tag, msg) = match &line {
            Ok(m) => ("PASS", m.clone()),
            Err(m) => {
                failures += 1;
                ("FAIL", m.clone())
            }
        };
        println!(
            "criterion {:>2} {tag} {name} [{:.2} s / {limit} s]: {msg}",
            n + 1,
            took.as_secs_f64()
        );
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failures} criteria failed");
        ExitCode::FAILURE
    }
}
