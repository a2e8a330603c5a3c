//! Verification jobs: a typed description read from a job file, its
//! canonical serialization, and the runner producing a JSON report.
//!
//! Indices in job files are 1-based, as in all external output.

mod run;
pub mod syntax;

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::lincomb::Q;
use crate::matrix_involutions::ThetaKind;

use syntax::{atom, boolean, int, list, parse_sections, rational, uint, Pair, Section, Value};

pub use run::{run_checks, run_job, Report, RunOptions, ENGINE_VERSION};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableEntry {
    pub i: usize,
    pub j: usize,
    pub coeff: Q,
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

/// Where the double bracket comes from. Index tuples are 1-based; unlisted
/// structure constants and r-tensor entries are zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BracketSource {
    Kks { l: usize },
    Linear { l: usize, s: Vec<([usize; 3], Q)> },
    Quadratic { l: usize, r: Vec<([usize; 4], Q)> },
    Ors { lambda: Vec<Q> },
    /// Generator values `⟦α_i, α_j⟧` for `i ≤ j`, term by term.
    Table { l: usize, entries: Vec<TableEntry> },
    SymmetricPair,
}

impl BracketSource {
    pub fn family(&self) -> &'static str {
        match self {
            BracketSource::Kks { .. } => "kks",
            BracketSource::Linear { .. } => "linear",
            BracketSource::Quadratic { .. } => "quadratic",
            BracketSource::Ors { .. } => "ors",
            BracketSource::Table { .. } => "table",
            BracketSource::SymmetricPair => "symmetric_pair",
        }
    }

    pub fn n_gens(&self) -> usize {
        match self {
            BracketSource::Kks { l }
            | BracketSource::Linear { l, .. }
            | BracketSource::Quadratic { l, .. }
            | BracketSource::Table { l, .. } => *l,
            BracketSource::Ors { lambda } => lambda.len(),
            BracketSource::SymmetricPair => 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InvolutionSource {
    PhiPlus,
    PhiMinus,
    /// 1-based permutation and signs.
    Signed { perm: Vec<usize>, signs: Vec<i8> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FormSource {
    Identity { d: usize },
    Symplectic { d: usize },
    Theta { n: usize, kind: ThetaKind },
    Matrix { g: Vec<Vec<Q>> },
}

impl FormSource {
    pub fn d(&self) -> usize {
        match self {
            FormSource::Identity { d } | FormSource::Symplectic { d } => *d,
            FormSource::Theta { n, .. } => *n,
            FormSource::Matrix { g } => g.len(),
        }
    }
}

/// One requested check with its parameters (validated, kept as text).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckItem {
    pub name: String,
    pub params: BTreeMap<String, String>,
}

impl CheckItem {
    pub fn new(name: &str) -> Self {
        CheckItem {
            name: name.to_string(),
            params: BTreeMap::new(),
        }
    }

    pub fn with(mut self, key: &str, value: impl ToString) -> Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.params.get(key).map(String::as_str)
    }

    /// Whether the check draws random samples (and so needs a seed).
    pub fn is_sampled(&self) -> bool {
        match self.name.as_str() {
            "double_jacobi" | "phi_adapted" | "jacobiator_formula" => true,
            "jacobi_ring" => self.get("mode") == Some("sampled"),
            _ => false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JobSpec {
    pub bracket: Option<BracketSource>,
    pub involution: Option<InvolutionSource>,
    pub form: Option<FormSource>,
    pub d: Option<usize>,
    pub seed: Option<u64>,
    pub checks: Vec<CheckItem>,
}

#[derive(Clone, Copy)]
enum Kind {
    Uint,
    Bool,
    Choice(&'static [&'static str]),
}

const RING: Kind = Kind::Choice(&["plain", "twisted"]);
const LIE: Kind = Kind::Choice(&["orthogonal", "symplectic"]);

/// Known checks and their parameters.
const CHECKS: &[(&str, &[(&str, Kind)])] = &[
    ("double_jacobi", &[("exhaustive_len", Kind::Uint), ("max_word_len", Kind::Uint), ("samples", Kind::Uint)]),
    ("phi_adapted", &[("max_word_len", Kind::Uint), ("samples", Kind::Uint)]),
    ("associative", &[]),
    ("commutative", &[]),
    ("r_skew", &[]),
    ("aybe", &[]),
    ("r_upper_symmetric", &[]),
    ("coalgebra_lemmas", &[("d", Kind::Uint), ("mutate_p", Kind::Bool)]),
    ("tau_identities", &[]),
    ("normal_form", &[]),
    ("skew", &[("ring", RING), ("d", Kind::Uint)]),
    (
        "jacobi_ring",
        &[
            ("ring", RING),
            ("d", Kind::Uint),
            ("mode", Kind::Choice(&["exhaustive", "sampled"])),
            ("budget", Kind::Uint),
        ],
    ),
    ("multiplicativity", &[("ring", RING), ("d", Kind::Uint), ("max_word_len", Kind::Uint)]),
    ("well_defined", &[("max_word_len", Kind::Uint)]),
    ("equivariance", &[("ring", RING), ("d", Kind::Uint), ("perturb", Kind::Bool)]),
    (
        "jacobiator_formula",
        &[("ring", RING), ("d", Kind::Uint), ("samples", Kind::Uint), ("max_word_len", Kind::Uint)],
    ),
    (
        "prop_f10",
        &[
            ("N", Kind::Uint),
            ("kind", LIE),
            ("L", Kind::Uint),
            ("max_word_len", Kind::Uint),
            ("negate_theta", Kind::Bool),
        ],
    ),
    ("lie_poisson_jacobi", &[("N", Kind::Uint), ("kind", LIE), ("L", Kind::Uint)]),
    ("matrix_realization", &[("N", Kind::Uint), ("kind", LIE)]),
];

pub fn check_names() -> Vec<&'static str> {
    CHECKS.iter().map(|(n, _)| *n).collect()
}

/// What a CLI subcommand runs: the declared checks of its kind, or its
/// default list when the job declares none of them.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Task {
    Run,
    CheckBracket,
    Induce,
    InduceTwisted,
    CheckJacobiator,
    Centralizer,
    Aybe,
}

impl Task {
    fn members(self) -> &'static [&'static str] {
        match self {
            Task::Run => &[],
            Task::CheckBracket => &["double_jacobi", "phi_adapted", "associative", "commutative"],
            Task::Aybe => &["r_skew", "aybe", "r_upper_symmetric", "double_jacobi", "phi_adapted"],
            Task::Induce => &["skew", "jacobi_ring", "multiplicativity", "equivariance"],
            Task::InduceTwisted => &[
                "normal_form",
                "skew",
                "well_defined",
                "jacobi_ring",
                "multiplicativity",
                "equivariance",
            ],
            Task::CheckJacobiator => &["jacobiator_formula"],
            Task::Centralizer => &["matrix_realization", "lie_poisson_jacobi", "prop_f10"],
        }
    }

    fn defaults(self, job: &JobSpec) -> Vec<&'static str> {
        let has_phi = job.involution.is_some();
        let linear = matches!(job.bracket, Some(BracketSource::Linear { .. }));
        match self {
            Task::CheckBracket => {
                let mut v = vec!["double_jacobi"];
                if has_phi {
                    v.push("phi_adapted");
                }
                if linear {
                    v.extend(["associative", "commutative"]);
                }
                v
            }
            Task::Aybe => {
                let mut v = vec!["r_skew", "aybe", "r_upper_symmetric", "double_jacobi"];
                if has_phi {
                    v.push("phi_adapted");
                }
                v
            }
            Task::Induce => self.members().to_vec(),
            Task::InduceTwisted => vec!["normal_form", "skew", "well_defined", "jacobi_ring", "equivariance"],
            _ => self.members().to_vec(),
        }
    }

    pub fn select(self, job: &JobSpec) -> Vec<CheckItem> {
        if self == Task::Run {
            return job.checks.clone();
        }
        let members = self.members();
        let declared: Vec<CheckItem> = job
            .checks
            .iter()
            .filter(|c| members.contains(&c.name.as_str()))
            .cloned()
            .collect();
        let mut items = if declared.is_empty() {
            self.defaults(job).into_iter().map(CheckItem::new).collect()
        } else {
            declared
        };
        let ring = match self {
            Task::Induce => Some("plain"),
            Task::InduceTwisted => Some("twisted"),
            _ => None,
        };
        if let Some(ring) = ring {
            for item in &mut items {
                let takes_ring = CHECKS
                    .iter()
                    .any(|(n, ps)| *n == item.name && ps.iter().any(|(k, _)| *k == "ring"));
                if takes_ring {
                    item.params.insert("ring".into(), ring.into());
                }
            }
        }
        items
    }
}

fn parse_err(p: &Pair, message: impl Into<String>) -> Error {
    Error::Parse {
        line: p.line,
        column: p.column,
        message: message.into(),
    }
}

/// Pairs of one section by key, rejecting unknown keys and repeats of
/// non-repeatable keys.
fn collect<'s>(
    sec: &'s Section,
    allowed: &[&str],
    repeatable: &[&str],
) -> Result<BTreeMap<&'s str, Vec<&'s Pair>>> {
    let mut out: BTreeMap<&str, Vec<&Pair>> = BTreeMap::new();
    for p in sec.lines.iter().flatten() {
        if !allowed.contains(&p.key.as_str()) {
            return Err(parse_err(p, format!("unknown key `{}` in [{}]", p.key, sec.name)));
        }
        let slot = out.entry(p.key.as_str()).or_default();
        if !slot.is_empty() && !repeatable.contains(&p.key.as_str()) {
            return Err(parse_err(p, format!("duplicate key `{}`", p.key)));
        }
        slot.push(p);
    }
    Ok(out)
}

fn one<'s>(m: &BTreeMap<&str, Vec<&'s Pair>>, key: &str) -> Option<&'s Pair> {
    m.get(key).and_then(|v| v.first().copied())
}

fn required<'s>(m: &BTreeMap<&str, Vec<&'s Pair>>, key: &str, field: &str) -> Result<&'s Pair> {
    one(m, key).ok_or_else(|| Error::validation(field, "missing"))
}

fn positive(v: &Value, field: &str) -> Result<usize> {
    let n = uint(v, field)?;
    if n == 0 {
        return Err(Error::validation(field, "must be at least 1"));
    }
    Ok(n)
}

fn index(v: &Value, field: &str, max: usize) -> Result<usize> {
    let i = uint(v, field)?;
    if i == 0 || i > max {
        return Err(Error::validation(field, format!("index {i} outside 1..={max}")));
    }
    Ok(i)
}

fn word(v: &Value, field: &str, l: usize) -> Result<Vec<usize>> {
    list(v, field)?.iter().map(|x| index(x, field, l)).collect()
}

fn parse_bracket(sec: &Section) -> Result<BracketSource> {
    let m = collect(sec, &["family", "L", "s", "r", "lambda", "entry"], &["s", "r", "entry"])?;
    let fam = atom(&required(&m, "family", "bracket.family")?.value, "bracket.family")?;
    let l = match one(&m, "L") {
        Some(p) => Some(positive(&p.value, "bracket.L")?),
        None => None,
    };
    let need_l = || l.ok_or_else(|| Error::validation("bracket.L", format!("required by family {fam}")));
    let used: &[&str] = match fam {
        "kks" | "symmetric_pair" => &["L"],
        "linear" => &["L", "s"],
        "quadratic" => &["L", "r"],
        "ors" => &["lambda"],
        "table" => &["L", "entry"],
        other => {
            return Err(Error::validation(
                "bracket.family",
                format!("unknown family `{other}` (kks, linear, quadratic, ors, table, symmetric_pair)"),
            ))
        }
    };
    for key in m.keys() {
        if *key != "family" && !used.contains(key) {
            return Err(Error::validation(format!("bracket.{key}"), format!("not used by family {fam}")));
        }
    }
    let tuples = |key: &str, arity: usize, l: usize| -> Result<Vec<(Vec<usize>, Q)>> {
        let field = format!("bracket.{key}");
        m.get(key)
            .into_iter()
            .flatten()
            .map(|p| {
                let items = list(&p.value, &field)?;
                if items.len() != arity + 1 {
                    return Err(Error::validation(
                        &field,
                        format!("expected {} indices and a coefficient, found {} values", arity, items.len()),
                    ));
                }
                let idx = items[..arity]
                    .iter()
                    .map(|x| index(x, &field, l))
                    .collect::<Result<Vec<_>>>()?;
                Ok((idx, rational(&items[arity], &field)?))
            })
            .collect()
    };
    Ok(match fam {
        "kks" => BracketSource::Kks { l: need_l()? },
        "symmetric_pair" => {
            if let Some(l) = l {
                if l != 2 {
                    return Err(Error::validation("bracket.L", "symmetric_pair has L = 2"));
                }
            }
            BracketSource::SymmetricPair
        }
        "linear" => {
            let l = need_l()?;
            let s = tuples("s", 3, l)?.into_iter().map(|(i, c)| ([i[0], i[1], i[2]], c)).collect();
            BracketSource::Linear { l, s }
        }
        "quadratic" => {
            let l = need_l()?;
            let r = tuples("r", 4, l)?
                .into_iter()
                .map(|(i, c)| ([i[0], i[1], i[2], i[3]], c))
                .collect();
            BracketSource::Quadratic { l, r }
        }
        "ors" => {
            let p = required(&m, "lambda", "bracket.lambda")?;
            let lambda = list(&p.value, "bracket.lambda")?
                .iter()
                .map(|x| rational(x, "bracket.lambda"))
                .collect::<Result<Vec<_>>>()?;
            if lambda.is_empty() {
                return Err(Error::validation("bracket.lambda", "needs at least one parameter"));
            }
            BracketSource::Ors { lambda }
        }
        _ => {
            let l = need_l()?;
            let field = "bracket.entry";
            let entries = m
                .get("entry")
                .into_iter()
                .flatten()
                .map(|p| {
                    let items = list(&p.value, field)?;
                    if items.len() != 5 {
                        return Err(Error::validation(
                            field,
                            format!("expected [i, j, coefficient, [left word], [right word]], found {} values", items.len()),
                        ));
                    }
                    let (i, j) = (index(&items[0], field, l)?, index(&items[1], field, l)?);
                    if i > j {
                        return Err(Error::validation(field, format!("give ({i},{j}) as ({j},{i}); the rest follows by skew symmetry")));
                    }
                    Ok(TableEntry {
                        i,
                        j,
                        coeff: rational(&items[2], field)?,
                        left: word(&items[3], field, l)?,
                        right: word(&items[4], field, l)?,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            BracketSource::Table { l, entries }
        }
    })
}

fn parse_involution(sec: &Section) -> Result<InvolutionSource> {
    let m = collect(sec, &["kind", "perm", "signs"], &[])?;
    let kind = atom(&required(&m, "kind", "involution.kind")?.value, "involution.kind")?;
    let extra = m.keys().find(|k| **k != "kind");
    match kind {
        "phi_plus" | "phi_minus" => {
            if let Some(k) = extra {
                return Err(Error::validation(format!("involution.{k}"), format!("not used by {kind}")));
            }
            Ok(if kind == "phi_plus" {
                InvolutionSource::PhiPlus
            } else {
                InvolutionSource::PhiMinus
            })
        }
        "signed" => {
            let perm_v = list(&required(&m, "perm", "involution.perm")?.value, "involution.perm")?;
            let n = perm_v.len();
            let perm = perm_v
                .iter()
                .map(|x| index(x, "involution.perm", n))
                .collect::<Result<Vec<_>>>()?;
            let signs = list(&required(&m, "signs", "involution.signs")?.value, "involution.signs")?
                .iter()
                .map(|x| match int(x, "involution.signs")? {
                    1 => Ok(1),
                    -1 => Ok(-1),
                    s => Err(Error::validation("involution.signs", format!("sign {s} is not 1 or -1"))),
                })
                .collect::<Result<Vec<i8>>>()?;
            let checked = crate::free_algebra::InvolutionSpec::signed(
                perm.iter().map(|p| p - 1).collect(),
                signs.clone(),
            );
            if let Err(e) = checked {
                return Err(Error::validation("involution", e.to_string()));
            }
            Ok(InvolutionSource::Signed { perm, signs })
        }
        other => Err(Error::validation(
            "involution.kind",
            format!("unknown kind `{other}` (phi_plus, phi_minus, signed)"),
        )),
    }
}

fn parse_lie_kind(v: &Value, field: &str) -> Result<ThetaKind> {
    match atom(v, field)? {
        "orthogonal" => Ok(ThetaKind::Orthogonal),
        "symplectic" => Ok(ThetaKind::Symplectic),
        other => Err(Error::validation(field, format!("unknown kind `{other}` (orthogonal, symplectic)"))),
    }
}

fn parse_form(sec: &Section) -> Result<FormSource> {
    let m = collect(sec, &["style", "d", "N", "kind", "g"], &[])?;
    let style = atom(&required(&m, "style", "form.style")?.value, "form.style")?;
    let used: &[&str] = match style {
        "identity" | "symplectic" => &["d"],
        "theta" => &["N", "kind"],
        "matrix" => &["g"],
        other => {
            return Err(Error::validation(
                "form.style",
                format!("unknown style `{other}` (identity, symplectic, theta, matrix)"),
            ))
        }
    };
    for key in m.keys() {
        if *key != "style" && !used.contains(key) {
            return Err(Error::validation(format!("form.{key}"), format!("not used by style {style}")));
        }
    }
    let d = || -> Result<usize> { positive(&required(&m, "d", "form.d")?.value, "form.d") };
    let form = match style {
        "identity" => FormSource::Identity { d: d()? },
        "symplectic" => FormSource::Symplectic { d: d()? },
        "theta" => FormSource::Theta {
            n: positive(&required(&m, "N", "form.N")?.value, "form.N")?,
            kind: parse_lie_kind(&required(&m, "kind", "form.kind")?.value, "form.kind")?,
        },
        _ => {
            let rows = list(&required(&m, "g", "form.g")?.value, "form.g")?
                .iter()
                .map(|r| list(r, "form.g")?.iter().map(|x| rational(x, "form.g")).collect())
                .collect::<Result<Vec<Vec<Q>>>>()?;
            if rows.is_empty() || rows.iter().any(|r| r.len() != rows.len()) {
                return Err(Error::validation("form.g", "expected a nonempty square matrix"));
            }
            FormSource::Matrix { g: rows }
        }
    };
    Ok(form)
}

fn parse_checks(sec: &Section, job: &mut JobSpec) -> Result<()> {
    let mut seen_d = false;
    let mut seen_seed = false;
    for line in &sec.lines {
        let first = &line[0];
        if first.key == "check" {
            let name = atom(&first.value, "checks.check")?;
            let Some((_, params)) = CHECKS.iter().find(|(n, _)| *n == name) else {
                return Err(Error::validation(
                    "checks.check",
                    format!("unknown check `{name}` (known: {})", check_names().join(", ")),
                ));
            };
            let mut item = CheckItem::new(name);
            for p in &line[1..] {
                let Some((_, kind)) = params.iter().find(|(k, _)| *k == p.key) else {
                    return Err(parse_err(p, format!("unknown parameter `{}` for check {name}", p.key)));
                };
                if item.params.contains_key(&p.key) {
                    return Err(parse_err(p, format!("duplicate parameter `{}`", p.key)));
                }
                let field = format!("checks.{name}.{}", p.key);
                let text = match kind {
                    Kind::Uint => uint(&p.value, &field)?.to_string(),
                    Kind::Bool => boolean(&p.value, &field)?.to_string(),
                    Kind::Choice(options) => {
                        let a = atom(&p.value, &field)?;
                        if !options.contains(&a) {
                            return Err(Error::validation(field, format!("expected one of {}", options.join(", "))));
                        }
                        a.to_string()
                    }
                };
                item.params.insert(p.key.clone(), text);
            }
            job.checks.push(item);
            continue;
        }
        for p in line {
            match p.key.as_str() {
                "d" if !seen_d => {
                    seen_d = true;
                    job.d = Some(positive(&p.value, "checks.d")?);
                }
                "seed" if !seen_seed => {
                    seen_seed = true;
                    let a = atom(&p.value, "checks.seed")?;
                    job.seed = Some(
                        a.parse()
                            .map_err(|_| Error::validation("checks.seed", format!("expected a 64-bit unsigned integer, found `{a}`")))?,
                    );
                }
                "d" | "seed" => return Err(parse_err(p, format!("duplicate key `{}`", p.key))),
                "check" => return Err(parse_err(p, "`check` must start its line")),
                _ => return Err(parse_err(p, format!("unknown key `{}` in [checks]", p.key))),
            }
        }
    }
    Ok(())
}

impl JobSpec {
    /// Parses and validates a job file.
    pub fn parse(text: &str) -> Result<Self> {
        let mut job = JobSpec {
            bracket: None,
            involution: None,
            form: None,
            d: None,
            seed: None,
            checks: Vec::new(),
        };
        for sec in parse_sections(text)? {
            match sec.name.as_str() {
                "bracket" => job.bracket = Some(parse_bracket(&sec)?),
                "involution" => job.involution = Some(parse_involution(&sec)?),
                "form" => job.form = Some(parse_form(&sec)?),
                "checks" => parse_checks(&sec, &mut job)?,
                other => {
                    return Err(Error::Parse {
                        line: sec.line,
                        column: 1,
                        message: format!("unknown section [{other}] (bracket, involution, form, checks)"),
                    })
                }
            }
        }
        job.validate()?;
        Ok(job)
    }

    /// Cross-section consistency.
    pub fn validate(&self) -> Result<()> {
        if let (Some(b), Some(InvolutionSource::Signed { perm, .. })) = (&self.bracket, &self.involution) {
            if perm.len() != b.n_gens() {
                return Err(Error::validation(
                    "involution.perm",
                    format!("has {} entries but the bracket has L = {}", perm.len(), b.n_gens()),
                ));
            }
        }
        Ok(())
    }

    /// Sampled checks need a seed.
    pub fn require_seed(&self, checks: &[CheckItem]) -> Result<u64> {
        match (self.seed, checks.iter().find(|c| c.is_sampled())) {
            (Some(s), _) => Ok(s),
            (None, None) => Ok(0),
            (None, Some(c)) => Err(Error::validation("checks.seed", format!("required by sampled check {}", c.name))),
        }
    }

    /// Canonical text: fixed section and key order, one pair per line
    /// except `check` lines, integers without denominators.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        let qs = |x: &Q| {
            if x.is_integer() {
                x.numer().to_string()
            } else {
                format!("{}/{}", x.numer(), x.denom())
            }
        };
        let nums = |v: &[usize]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ");
        if let Some(b) = &self.bracket {
            let _ = writeln!(out, "[bracket]\nfamily = {}", b.family());
            match b {
                BracketSource::Kks { l } => {
                    let _ = writeln!(out, "L = {l}");
                }
                BracketSource::SymmetricPair => {}
                BracketSource::Linear { l, s } => {
                    let _ = writeln!(out, "L = {l}");
                    for (i, c) in s {
                        let _ = writeln!(out, "s = [{}, {}]", nums(i), qs(c));
                    }
                }
                BracketSource::Quadratic { l, r } => {
                    let _ = writeln!(out, "L = {l}");
                    for (i, c) in r {
                        let _ = writeln!(out, "r = [{}, {}]", nums(i), qs(c));
                    }
                }
                BracketSource::Ors { lambda } => {
                    let v: Vec<String> = lambda.iter().map(qs).collect();
                    let _ = writeln!(out, "lambda = [{}]", v.join(", "));
                }
                BracketSource::Table { l, entries } => {
                    let _ = writeln!(out, "L = {l}");
                    for e in entries {
                        let _ = writeln!(
                            out,
                            "entry = [{}, {}, {}, [{}], [{}]]",
                            e.i,
                            e.j,
                            qs(&e.coeff),
                            nums(&e.left),
                            nums(&e.right)
                        );
                    }
                }
            }
            out.push('\n');
        }
        if let Some(inv) = &self.involution {
            match inv {
                InvolutionSource::PhiPlus => out.push_str("[involution]\nkind = phi_plus\n"),
                InvolutionSource::PhiMinus => out.push_str("[involution]\nkind = phi_minus\n"),
                InvolutionSource::Signed { perm, signs } => {
                    let s: Vec<String> = signs.iter().map(|x| x.to_string()).collect();
                    let _ = writeln!(
                        out,
                        "[involution]\nkind = signed\nperm = [{}]\nsigns = [{}]",
                        nums(perm),
                        s.join(", ")
                    );
                }
            }
            out.push('\n');
        }
        if let Some(form) = &self.form {
            match form {
                FormSource::Identity { d } => {
                    let _ = writeln!(out, "[form]\nstyle = identity\nd = {d}");
                }
                FormSource::Symplectic { d } => {
                    let _ = writeln!(out, "[form]\nstyle = symplectic\nd = {d}");
                }
                FormSource::Theta { n, kind } => {
                    let _ = writeln!(out, "[form]\nstyle = theta\nN = {n}\nkind = {}", kind.name());
                }
                FormSource::Matrix { g } => {
                    let rows: Vec<String> = g
                        .iter()
                        .map(|r| format!("[{}]", r.iter().map(qs).collect::<Vec<_>>().join(", ")))
                        .collect();
                    let _ = writeln!(out, "[form]\nstyle = matrix\ng = [{}]", rows.join(", "));
                }
            }
            out.push('\n');
        }
        if self.d.is_some() || self.seed.is_some() || !self.checks.is_empty() {
            out.push_str("[checks]\n");
            if let Some(d) = self.d {
                let _ = writeln!(out, "d = {d}");
            }
            if let Some(s) = self.seed {
                let _ = writeln!(out, "seed = {s}");
            }
            for c in &self.checks {
                out.push_str("check = ");
                out.push_str(&c.name);
                for (k, v) in &c.params {
                    let _ = write!(out, ", {k} = {v}");
                }
                out.push('\n');
            }
        }
        while out.ends_with("\n\n") {
            out.pop();
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kks_job_on_one_line() {
        let job = JobSpec::parse("[bracket]\nfamily = kks, L = 2\n").unwrap();
        assert_eq!(job.bracket, Some(BracketSource::Kks { l: 2 }));
        assert!(job.checks.is_empty());
    }

    #[test]
    fn validation_errors_name_the_field() {
        let e = JobSpec::parse("[bracket]\nfamily = quadratic, L = 2\nr = [1, 2, 1, 1/2]\n").unwrap_err();
        assert!(matches!(e, Error::Validation { ref field, .. } if field == "bracket.r"), "{e}");
        let e = JobSpec::parse("[bracket]\nfamily = kks\n").unwrap_err();
        assert!(matches!(e, Error::Validation { ref field, .. } if field == "bracket.L"));
        let e = JobSpec::parse("[bracket]\nfamily = kks, L = 2\n[involution]\nkind = signed\nperm = [2, 1, 3]\nsigns = [1, 1, 1]\n")
            .unwrap_err();
        assert!(matches!(e, Error::Validation { ref field, .. } if field == "involution.perm"));
        let e = JobSpec::parse("[checks]\ncheck = jacobi_ring, mode = often\n").unwrap_err();
        assert!(matches!(e, Error::Validation { ref field, .. } if field == "checks.jacobi_ring.mode"));
    }

    #[test]
    fn parse_errors_carry_positions() {
        let e = JobSpec::parse("[bracket]\nfamily = ors\nlambda = [0, 1/0]\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 3, column: 14, .. }), "{e}");
        let e = JobSpec::parse("[bracket]\nfamily = kks, L = 1, colour = red\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, column: 22, .. }), "{e}");
        let e = JobSpec::parse("[checks]\ncheck = skew, depth = 3\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, column: 15, .. }), "{e}");
        assert!(matches!(JobSpec::parse("[extra]\n"), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn seeds_are_required_for_sampled_checks() {
        let job = JobSpec::parse("[bracket]\nfamily = kks, L = 1\n[checks]\ncheck = double_jacobi\n").unwrap();
        assert!(job.require_seed(&job.checks).is_err());
        let job = JobSpec::parse("[checks]\ncheck = jacobi_ring\n").unwrap();
        assert_eq!(job.require_seed(&job.checks), Ok(0));
    }

    #[test]
    fn canonical_round_trip() {
        let text = "[bracket]\nfamily=table,L=2\nentry=[1,2,-1/2,[1],[2,1]]\nentry = [2, 2, 1, [], [2]]\n\
                    [involution]\nkind=signed, perm=[2,1], signs=[1,1]\n\
                    [form]\nstyle=matrix, g=[[0,1],[-1,0]]\n\
                    [checks]\nseed=9\nd=2\ncheck=jacobi_ring, mode=sampled, budget=10\ncheck=prop_f10, kind=orthogonal, N=3\n";
        let job = JobSpec::parse(text).unwrap();
        let canon = job.serialize();
        let again = JobSpec::parse(&canon).unwrap();
        assert_eq!(again, job);
        assert_eq!(again.serialize(), canon);
        for src in ["[bracket]\nfamily = ors\nlambda = [0, 1, 3]\n", "[form]\nstyle = theta\nN = 4\nkind = symplectic\n"] {
            let job = JobSpec::parse(src).unwrap();
            assert_eq!(job.serialize(), src.trim_end_matches('\n').to_string() + "\n");
        }
    }
}
