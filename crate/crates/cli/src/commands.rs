use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;

use sks_core::analytic::{self, LocalModel, RealMat2};
use sks_core::exact::IntMat2;
use sks_core::fixtures::{self, Table3Row};
use sks_core::kodaira::{
    classify as classify_matrix, monodromy_group, parse_rational, rescale_config, type_summary, validate_config, FiberConfig,
    KodairaType, ValidationReport,
};
use sks_core::modgroup::{coset_enumerate_with_cap, index_of_generated, subgroups_equal, SubgroupSpec};
use sks_core::ng::{compute_ng, find_conjugating_witness, Conjugator};

use crate::error::CliError;
use crate::{input, ConfigSource, Format, ModelArgs};

fn emit<T: Serialize>(fmt: Format, value: &T, text: impl FnOnce() -> String) -> Result<(), CliError> {
    if fmt.pretty {
        print!("{}", text());
    } else {
        println!("{}", serde_json::to_string(value)?);
    }
    Ok(())
}

fn index_with_cap(g: &SubgroupSpec, cap: usize) -> Result<usize, CliError> {
    Ok(match g.listed_generators() {
        Some(gens) => index_of_generated(gens, cap)?,
        None => coset_enumerate_with_cap(g, cap)?.index(),
    })
}

pub fn ng(group: &str, fmt: Format) -> Result<bool, CliError> {
    let report = compute_ng(&input::group(group)?)?;
    emit(fmt, &report, || {
        let mut s = format!(
            "group     {}\nindex     {}\nexponent  {}\nN(G)      {}\nwitnesses\n",
            report.group, report.index, report.exponent_n, report.count
        );
        for w in &report.witnesses {
            let _ = writeln!(s, "  B = {}  m = {}", w.b(), w.m());
        }
        s
    })?;
    Ok(true)
}

#[derive(Serialize)]
struct PartnerResult {
    group: String,
    index: usize,
    #[serde(rename = "N")]
    n: usize,
}

#[derive(Serialize)]
struct Table3Result {
    group: String,
    expected_index: usize,
    index: usize,
    #[serde(rename = "expected_N")]
    expected_n: usize,
    #[serde(rename = "actual_N")]
    actual_n: usize,
    partners: Vec<PartnerResult>,
    pass: bool,
}

#[derive(Serialize)]
struct Table3Report {
    rows: Vec<Table3Result>,
    passed: usize,
    total: usize,
    pass: bool,
}

fn table3_row(row: &Table3Row) -> Result<Table3Result, CliError> {
    let r = compute_ng(&input::group(&row.group)?)?;
    let mut partners = Vec::new();
    for p in &row.partners {
        let pr = compute_ng(&input::group(p)?)?;
        partners.push(PartnerResult { group: p.clone(), index: pr.index, n: pr.count });
    }
    let pass = r.index == row.index && r.count == row.n && partners.iter().all(|p| p.index == row.index && p.n == row.n);
    Ok(Table3Result {
        group: row.group.clone(),
        expected_index: row.index,
        index: r.index,
        expected_n: row.n,
        actual_n: r.count,
        partners,
        pass,
    })
}

pub fn table3(file: Option<&Path>, fmt: Format) -> Result<bool, CliError> {
    let rows: Vec<Table3Row> = match file {
        Some(p) => serde_json::from_str(&std::fs::read_to_string(p)?)?,
        None => fixtures::table3(),
    };
    let results = rows.iter().map(table3_row).collect::<Result<Vec<_>, _>>()?;
    let passed = results.iter().filter(|r| r.pass).count();
    let report = Table3Report { total: results.len(), passed, pass: passed == results.len(), rows: results };
    if fmt.json {
        println!("{}", serde_json::to_string(&report)?);
    } else {
        let name = |r: &Table3Result| {
            let mut v = vec![r.group.clone()];
            v.extend(r.partners.iter().map(|p| p.group.clone()));
            v.join(" ~ ")
        };
        let width = report.rows.iter().map(|r| name(r).chars().count()).max().unwrap_or(5).max(5);
        println!("{:<width$}  {:>5}  {:>5}  {:>4}  {:>4}  result", "group", "index", "want", "N", "want");
        for r in &report.rows {
            println!(
                "{:<width$}  {:>5}  {:>5}  {:>4}  {:>4}  {}",
                name(r),
                r.index,
                r.expected_index,
                r.actual_n,
                r.expected_n,
                if r.pass { "PASS" } else { "FAIL" }
            );
        }
        println!("{}/{} PASS", report.passed, report.total);
    }
    Ok(report.pass)
}

#[derive(Serialize)]
struct ClassifyReport {
    matrix: IntMat2,
    #[serde(rename = "type")]
    kind: KodairaType,
    index12: u64,
    beta: Option<String>,
}

pub fn classify(matrix: &str, projective: bool, fmt: Format) -> Result<bool, CliError> {
    let a = input::matrix(matrix)?;
    let t = classify_matrix(&a, projective)?;
    let report = ClassifyReport { matrix: a, kind: t, index12: t.index12(), beta: t.beta().map(|b| b.to_string()) };
    emit(fmt, &report, || {
        let beta = report.beta.as_deref().map(|b| format!("  beta {b}")).unwrap_or_default();
        format!("{}  {}  index12 {}{beta}\n", report.matrix, report.kind, report.index12)
    })?;
    Ok(true)
}

fn validation_text(r: &ValidationReport) -> String {
    let mut s = format!("fibers       {} ({})\nindex sum    {}\n", r.fiber_count, r.summary, r.index12_sum);
    if let Some(p) = &r.product {
        let _ = writeln!(s, "product      {p}");
    }
    let _ = writeln!(s, "valid        {}", r.valid);
    s
}

pub fn config_validate(src: &ConfigSource, fmt: Format) -> Result<bool, CliError> {
    let report = validate_config(&input::config(src)?)?;
    emit(fmt, &report, || validation_text(&report))?;
    Ok(report.valid)
}

#[derive(Serialize)]
struct RescaleReport {
    q: String,
    config: FiberConfig,
    types: Vec<KodairaType>,
    summary: String,
}

pub fn config_rescale(src: &ConfigSource, q: &str, fmt: Format) -> Result<bool, CliError> {
    let cfg = input::config(src)?;
    let q = parse_rational(q).map_err(CliError::Parse)?;
    let out = rescale_config(&cfg, &q)?;
    let types = out.types()?;
    let report = RescaleReport { q: q.to_string(), summary: type_summary(&types), types, config: out };
    emit(fmt, &report, || {
        let mut s = format!("q = {}: {}\n", report.q, report.summary);
        if let Some(ms) = report.config.matrices() {
            for m in ms {
                let _ = writeln!(s, "  {m}");
            }
        }
        s
    })?;
    Ok(true)
}

/// Named groups that a computed monodromy group is compared against.
fn known_groups() -> Vec<String> {
    let mut v = Vec::new();
    for row in fixtures::table3() {
        v.push(row.group);
        v.extend(row.partners);
    }
    v
}

#[derive(Serialize)]
struct GroupReport {
    index: usize,
    generators: usize,
    equals: Vec<String>,
}

pub fn config_group(src: &ConfigSource, cap: usize, fmt: Format) -> Result<bool, CliError> {
    let cfg = input::config(src)?;
    let mats = cfg.matrices().ok_or_else(|| CliError::Rejected("group needs based loops, not a type list".into()))?;
    let g = SubgroupSpec::generated_with_cap(mats.clone(), cap)?;
    let index = index_of_generated(&mats, cap)?;
    let mut equals = Vec::new();
    for name in known_groups() {
        let h = input::group(&name)?;
        if coset_enumerate_with_cap(&h, cap)?.index() == index && subgroups_equal(&g, &h)? {
            equals.push(name);
        }
    }
    let report = GroupReport { index, generators: mats.len(), equals };
    emit(fmt, &report, || {
        let eq = if report.equals.is_empty() { "(no listed group)".to_string() } else { report.equals.join(" = ") };
        format!("index {}  {eq}\n", report.index)
    })?;
    Ok(true)
}

#[derive(Serialize)]
struct IndexReport {
    group: String,
    index: usize,
    level: Option<u64>,
}

pub fn group_index(group: &str, cap: usize, fmt: Format) -> Result<bool, CliError> {
    let g = input::group(group)?;
    let report = IndexReport { group: g.to_string(), index: index_with_cap(&g, cap)?, level: g.level() };
    emit(fmt, &report, || format!("{}  index {}\n", report.group, report.index))?;
    Ok(true)
}

fn two_groups(groups: &[String]) -> Result<(SubgroupSpec, SubgroupSpec), CliError> {
    match groups {
        [a, b] => Ok((input::group(a)?, input::group(b)?)),
        _ => Err(CliError::Parse(format!("expected exactly two --group arguments, got {}", groups.len()))),
    }
}

#[derive(Serialize)]
struct EqualReport {
    first: String,
    second: String,
    equal: bool,
}

pub fn group_equal(groups: &[String], fmt: Format) -> Result<bool, CliError> {
    let (a, b) = two_groups(groups)?;
    let report = EqualReport { equal: subgroups_equal(&a, &b)?, first: a.to_string(), second: b.to_string() };
    emit(fmt, &report, || format!("{} {} {}\n", report.first, if report.equal { "==" } else { "!=" }, report.second))?;
    Ok(report.equal)
}

#[derive(Serialize)]
struct ConjugateReport {
    group: String,
    target: Option<String>,
    conjugator: Option<Conjugator>,
    result: Option<String>,
    index: Option<usize>,
}

pub fn group_conjugate(groups: &[String], matrix: Option<&str>, fmt: Format) -> Result<bool, CliError> {
    let report = match (groups, matrix) {
        ([g], Some(m)) => {
            let g = input::group(g)?;
            let c = Conjugator::from_matrix(&input::matrix(m)?)?;
            let h = sks_core::modgroup::conjugate_subgroup(&g, &c)?;
            let index = index_with_cap(&h, sks_core::modgroup::DEFAULT_CAP)?;
            ConjugateReport {
                group: g.to_string(),
                target: None,
                conjugator: Some(c),
                result: Some(h.to_string()),
                index: Some(index),
            }
        }
        (gs, None) => {
            let (a, b) = two_groups(gs)?;
            let w = find_conjugating_witness(&a, &b)?;
            ConjugateReport { group: a.to_string(), target: Some(b.to_string()), result: None, index: None, conjugator: w }
        }
        _ => return Err(CliError::Parse("use one --group with --matrix, or two --group".into())),
    };
    let found = report.conjugator.is_some();
    emit(fmt, &report, || match (&report.conjugator, &report.target, &report.result) {
        (Some(c), Some(t), _) => format!("P⁻¹·{}·P = {t} with P = ({})/√{}\n", report.group, c.b(), c.m()),
        (None, Some(t), _) => format!("no integral conjugator from {} to {t}\n", report.group),
        (Some(c), None, Some(r)) => format!("{r}  index {}  (B = {}, m = {})\n", report.index.unwrap_or(0), c.b(), c.m()),
        _ => String::new(),
    })?;
    Ok(found)
}

fn load_model(m: &ModelArgs) -> Result<LocalModel, CliError> {
    input::model(&m.model)
}

#[derive(Serialize)]
struct MonodromyReport {
    kind: String,
    radius: f64,
    steps: usize,
    matrix: RealMat2,
    rounded: [i64; 4],
    rounding_error: f64,
    #[serde(rename = "type")]
    kind_classified: Option<KodairaType>,
    exact: Option<IntMat2>,
    max_error: Option<f64>,
}

pub fn monodromy(m: &ModelArgs, radius: f64, steps: usize, fmt: Format) -> Result<bool, CliError> {
    let model = load_model(m)?;
    let a = analytic::continue_monodromy(&model, radius, steps)?;
    let rounded = analytic::round_matrix(&a);
    let rm = IntMat2::from_i64(rounded);
    let rounding_error = analytic::max_abs_diff(&a, &rm.to_f64());
    // Raw types have non-integral monodromy; only classify genuinely integral results.
    let kind_classified = if rounding_error < 1e-6 { classify_matrix(&rm, false).ok() } else { None };
    // The exact matrix is only meaningful in the standard frame.
    let exact = if model.frame == analytic::IDENTITY_FRAME { model.kind.exact_monodromy() } else { None };
    let max_error = exact.as_ref().map(|e| analytic::max_abs_diff(&a, &e.to_f64()));
    let report = MonodromyReport {
        kind: model.kind.to_string(),
        radius,
        steps,
        matrix: a,
        rounded,
        rounding_error,
        kind_classified,
        exact,
        max_error,
    };
    emit(fmt, &report, || {
        let t = report.kind_classified.map(|t| t.to_string()).unwrap_or_else(|| "-".into());
        format!("[[{:.9}, {:.9}], [{:.9}, {:.9}]]\nrounded {}  type {t}\n", a[0][0], a[0][1], a[1][0], a[1][1], rm)
    })?;
    Ok(true)
}

#[derive(Serialize)]
struct ConeReport {
    kind: String,
    radius: f64,
    angle: f64,
    expected: Option<f64>,
}

pub fn coneangle(m: &ModelArgs, radius: f64, fmt: Format) -> Result<bool, CliError> {
    let model = load_model(m)?;
    let angle = analytic::cone_angle(&model, radius)?;
    let expected = model.kind.beta().map(|b| 2.0 * std::f64::consts::PI * (*b.numer() as f64) / (*b.denom() as f64));
    let report = ConeReport { kind: model.kind.to_string(), radius, angle, expected };
    emit(fmt, &report, || match report.expected {
        Some(e) => format!("{}  r = {:e}  C/L = {:.9}  (2πβ = {e:.9})\n", report.kind, radius, angle),
        None => format!("{}  r = {:e}  C/L = {:.9}\n", report.kind, radius, angle),
    })?;
    Ok(true)
}

#[derive(Serialize)]
struct PointReport {
    kind: String,
    point: [f64; 2],
    value: f64,
}

pub fn density(m: &ModelArgs, point: &str, fmt: Format) -> Result<bool, CliError> {
    let model = load_model(m)?;
    let z = input::point(point)?;
    let value = analytic::density(&model, z)?;
    let report = PointReport { kind: model.kind.to_string(), point: [z.re, z.im], value };
    emit(fmt, &report, || format!("{}\n", report.value))?;
    Ok(true)
}

pub fn curvature(m: &ModelArgs, point: &str, h: f64, fmt: Format) -> Result<bool, CliError> {
    let model = load_model(m)?;
    let z = input::point(point)?;
    let value = analytic::curvature_sample(&model, z, h)?;
    let report = PointReport { kind: model.kind.to_string(), point: [z.re, z.im], value };
    emit(fmt, &report, || format!("{}\n", report.value))?;
    Ok(true)
}

#[derive(Serialize)]
struct StageReport {
    q: String,
    types: Vec<KodairaType>,
    summary: String,
    expected_summary: Option<String>,
    index: usize,
    expected_group: Option<String>,
    group_equal: Option<bool>,
    pass: bool,
}

#[derive(Serialize)]
struct ExampleReport {
    name: String,
    validation: ValidationReport,
    stages: Vec<StageReport>,
    pass: bool,
}

fn expected_summary(types: &[String]) -> Result<String, CliError> {
    let t = types.iter().map(|s| s.parse::<KodairaType>()).collect::<Result<Vec<_>, _>>()?;
    Ok(type_summary(&t))
}

fn stage(cfg: &FiberConfig, q: String, want_types: Option<&[String]>, want_group: Option<&str>) -> Result<StageReport, CliError> {
    let types = cfg.types()?;
    let summary = type_summary(&types);
    let g = monodromy_group(cfg)?;
    let index = index_with_cap(&g, sks_core::modgroup::DEFAULT_CAP)?;
    let expected_summary = want_types.map(expected_summary).transpose()?;
    let group_equal = match want_group {
        Some(w) => Some(subgroups_equal(&g, &input::group(w)?)?),
        None => None,
    };
    let pass = expected_summary.as_ref().is_none_or(|e| *e == summary) && group_equal.unwrap_or(true);
    Ok(StageReport {
        q,
        types,
        summary,
        expected_summary,
        index,
        expected_group: want_group.map(str::to_string),
        group_equal,
        pass,
    })
}

pub fn example_hjmm(q: Option<&str>, fmt: Format) -> Result<bool, CliError> {
    let ex = fixtures::worked_example();
    let cfg = FiberConfig::from_matrices(&ex.matrices);
    let validation = validate_config(&cfg)?;
    let mut stages = Vec::new();
    match q {
        None => {
            stages.push(stage(&cfg, "1".into(), Some(&ex.types), Some(&ex.group))?);
            for r in &ex.rescalings {
                let qv = parse_rational(&r.q).map_err(CliError::Parse)?;
                stages.push(stage(&rescale_config(&cfg, &qv)?, qv.to_string(), Some(&r.types), Some(&r.group))?);
            }
        }
        Some(qs) => {
            let qv = parse_rational(qs).map_err(CliError::Parse)?;
            let q_str = qv.to_string();
            let out = rescale_config(&cfg, &qv)?;
            let known = ex.rescalings.iter().find(|r| parse_rational(&r.q).ok().as_ref() == Some(&qv));
            let (types, group) = match known {
                Some(r) => (Some(r.types.as_slice()), Some(r.group.as_str())),
                None if q_str == "1" => (Some(ex.types.as_slice()), Some(ex.group.as_str())),
                None => (None, None),
            };
            stages.push(stage(&out, q_str, types, group)?);
        }
    }
    let pass = validation.valid && stages.iter().all(|s| s.pass);
    let report = ExampleReport { name: ex.name.clone(), validation, stages, pass };
    emit(fmt, &report, || {
        let mut s = validation_text(&report.validation);
        for st in &report.stages {
            let g = st.expected_group.as_deref().unwrap_or("-");
            let eq = match st.group_equal {
                Some(true) => "=",
                Some(false) => "!=",
                None => "?",
            };
            let _ = writeln!(
                s,
                "q = {:<3} {:<14} index {:<3} group {eq} {g}  {}",
                st.q,
                st.summary,
                st.index,
                if st.pass { "PASS" } else { "FAIL" }
            );
        }
        s
    })?;
    Ok(report.pass)
}
