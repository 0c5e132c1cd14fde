//! Acceptance criteria, one PASS/FAIL line each. Exits nonzero if any criterion fails.

use std::f64::consts::PI;
use std::process::Command;
use std::time::Instant;

use num_bigint::BigInt;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use sks_core::analytic::{
    angle_mod_pi_diff, cone_angle, continue_monodromy, density, max_abs_diff, recover_twist, round_matrix, twist, LocalModel,
    ModelKind, DEFAULT_STEPS,
};
use sks_core::exact::{column_hnf, is_column_hnf, primitive_hnf_of_det, st_word, IntMat2};
use sks_core::fixtures;
use sks_core::kodaira::{
    classify, monodromy_group, parse_rational, rescale_config, type_summary, validate_config, FiberConfig, KodairaType,
};
use sks_core::modgroup::{
    conjugate_subgroup, coset_enumerate, generating_set, index_of_generated, parse_spec, subgroups_equal, SubgroupSpec,
};
use sks_core::ng::{compute_ng, find_conjugating_witness};

type Outcome = Result<String, String>;

fn check(cond: bool, what: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what.into())
    }
}

fn sks(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_sks")).args(args).output().expect("run sks");
    (out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stdout).into_owned())
}

fn group(s: &str) -> SubgroupSpec {
    parse_spec(s).expect("valid group spec")
}

fn table3_reproduction() -> Outcome {
    let want_index = [1, 2, 3, 3, 4, 6, 12, 12, 12, 12, 24, 24, 24, 24, 24];
    let want_n = [1, 1, 1, 2, 2, 4, 2, 4, 5, 6, 2, 6, 6, 8, 10];
    let t0 = Instant::now();
    let (code, out) = sks(&["table3", "--json"]);
    let secs = t0.elapsed().as_secs_f64();
    check(code == 0, format!("table3 exit {code}"))?;
    let v: Value = serde_json::from_str(&out).map_err(|e| e.to_string())?;
    let rows = v["rows"].as_array().ok_or("no rows")?;
    let idx: Vec<u64> = rows.iter().map(|r| r["index"].as_u64().unwrap_or(0)).collect();
    let n: Vec<u64> = rows.iter().map(|r| r["actual_N"].as_u64().unwrap_or(0)).collect();
    check(idx == want_index, format!("indices {idx:?}"))?;
    check(n == want_n, format!("N values {n:?}"))?;
    check(rows.iter().all(|r| r["pass"] == Value::Bool(true)), "a row failed")?;
    check(secs < 60.0, format!("took {secs:.1}s"))?;

    // Negative control: one expected value altered.
    let mut rows: Vec<Value> = serde_json::from_str(fixtures::raw("table3").unwrap()).unwrap();
    rows[8]["n"] = Value::from(4);
    let path = std::env::temp_dir().join(format!("sks-table3-altered-{}.json", std::process::id()));
    std::fs::write(&path, serde_json::to_string(&rows).unwrap()).map_err(|e| e.to_string())?;
    let (bad, _) = sks(&["table3", "--json", "--file", path.to_str().unwrap()]);
    let _ = std::fs::remove_file(&path);
    check(bad == 2, format!("altered table exit {bad}"))?;
    Ok(format!("{}/{} rows, {secs:.2}s, altered fixture exit {bad}", rows.len(), rows.len()))
}

fn ng_full_group() -> Outcome {
    let n = compute_ng(&SubgroupSpec::full()).map_err(|e| e.to_string())?.count;
    check(n == 1, format!("N = {n}"))?;
    let (code, out) = sks(&["ng", "--group", "SL2Z"]);
    let v: Value = serde_json::from_str(&out).map_err(|e| e.to_string())?;
    check(code == 0 && v["count"] == 1, format!("cli: exit {code}, {out}"))?;
    Ok("N(SL2Z) = 1".into())
}

fn worked_example() -> Outcome {
    let t0 = Instant::now();
    let ex = fixtures::worked_example();
    let cfg = FiberConfig::from_matrices(&ex.matrices);
    let r = validate_config(&cfg).map_err(|e| e.to_string())?;
    check(r.product_is_identity == Some(true), "product is not I")?;
    check(r.types == vec![KodairaType::I(4); 6], format!("types {}", r.summary))?;
    check(r.index12_sum == 24 && r.valid, format!("index sum {}", r.index12_sum))?;
    let g = monodromy_group(&cfg).map_err(|e| e.to_string())?;
    let idx = index_of_generated(&ex.matrices, 10_000).map_err(|e| e.to_string())?;
    check(idx == 24, format!("index {idx}"))?;
    check(subgroups_equal(&g, &SubgroupSpec::gamma(4)).map_err(|e| e.to_string())?, "group is not Γ(4)")?;
    for (q, summary, name) in [("2", "4I2+2I8", "Intersect(Gamma0(8), Gamma(2))"), ("4", "4I1+I4+I16", "Gamma0(16)")] {
        let out = rescale_config(&cfg, &parse_rational(q).unwrap()).map_err(|e| e.to_string())?;
        let s = type_summary(&out.types().map_err(|e| e.to_string())?);
        check(s == summary, format!("q={q}: {s}"))?;
        let h = monodromy_group(&out).map_err(|e| e.to_string())?;
        check(subgroups_equal(&h, &group(name)).map_err(|e| e.to_string())?, format!("q={q}: group is not {name}"))?;
    }
    let (code, _) = sks(&["example-hjmm"]);
    check(code == 0, format!("example-hjmm exit {code}"))?;
    let secs = t0.elapsed().as_secs_f64();
    check(secs < 10.0, format!("took {secs:.1}s"))?;
    Ok(format!("6I4 / Γ(4); 4I2+2I8 / Γ0(8)∩Γ(2); 4I1+I4+I16 / Γ0(16); {secs:.2}s"))
}

fn conjugacy_consistency() -> Outcome {
    let pairs = [
        ("Gamma(2)", "Gamma0(4)"),
        ("Gamma(3)", "Gamma0(9)"),
        ("Gamma0(8)", "Intersect(Gamma0(4), Gamma(2))"),
        ("Gamma0(12)", "Intersect(Gamma0(3), Gamma(2))"),
        ("Gamma(4)", "Gamma0(16)"),
        ("Gamma(4)", "Intersect(Gamma0(8), Gamma(2))"),
        ("Gamma1(8;4,1,2)", "Gamma1(16;16,2,2)"),
    ];
    let mut found = Vec::new();
    for (a, b) in pairs {
        let (ga, gb) = (group(a), group(b));
        let na = compute_ng(&ga).map_err(|e| e.to_string())?.count;
        let nb = compute_ng(&gb).map_err(|e| e.to_string())?.count;
        check(na == nb, format!("N({a}) = {na}, N({b}) = {nb}"))?;
        let w = find_conjugating_witness(&ga, &gb).map_err(|e| e.to_string())?.ok_or(format!("no witness {a} -> {b}"))?;
        let conj = conjugate_subgroup(&ga, &w).map_err(|e| e.to_string())?;
        check(subgroups_equal(&conj, &gb).map_err(|e| e.to_string())?, format!("witness {} fails for {a} -> {b}", w.b()))?;
        found.push(format!("{}", w.b()));
    }
    Ok(format!("7 pairs, witnesses {}", found.join(" ")))
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Least upper-triangular `(α, β mod α, δ)` in the orbit `B·SL₂(ℤ)` of the primitive part of `B`.
fn orbit_key(b: [i64; 4]) -> (i64, i64, i64, i64) {
    let g = gcd(gcd(b[0], b[1]), gcd(b[2], b[3]));
    let [a, bb, c, d] = b.map(|x| x / g);
    let mut best = None;
    for u in -30i64..=30 {
        for w in -30i64..=30 {
            if gcd(u, w) != 1 || c * u + d * w != 0 || a * u + bb * w <= 0 {
                continue;
            }
            let alpha = a * u + bb * w;
            for y in -30i64..=30 {
                for z in -30i64..=30 {
                    if u * z - y * w == 1 {
                        let key = (alpha, (a * y + bb * z).rem_euclid(alpha), c * y + d * z);
                        if best.is_none_or(|k| key < k) {
                            best = Some(key);
                        }
                    }
                }
            }
        }
    }
    let (x, y, z) = best.expect("bounded orbit search");
    (x * z, x, y, z)
}

fn oracle_equivalence() -> Outcome {
    let g = SubgroupSpec::gamma0(2);
    let gens = generating_set(&g).map_err(|e| e.to_string())?;
    let mut cosets = std::collections::BTreeSet::new();
    for a in -8i64..=8 {
        for b in -8i64..=8 {
            for c in -8i64..=8 {
                for d in -8i64..=8 {
                    let m = a * d - b * c;
                    if !(1..=8).contains(&m) {
                        continue;
                    }
                    let bm = IntMat2::new(a, b, c, d);
                    let adj = bm.adjugate();
                    let mm = BigInt::from(m);
                    if gens.iter().all(|h| (&(&adj * h) * &bm).div_exact(&mm).is_some()) {
                        cosets.insert(orbit_key([a, b, c, d]));
                    }
                }
            }
        }
    }
    let n = compute_ng(&g).map_err(|e| e.to_string())?.count;
    check(cosets.len() == 2 && n == 2, format!("brute force {}, algorithm {n}", cosets.len()))?;
    Ok(format!("brute force {} = algorithm {n}", cosets.len()))
}

fn enumeration_counts() -> Outcome {
    let mut got = Vec::new();
    for (m, want) in [(2u64, 3usize), (3, 4), (4, 6), (8, 12), (16, 24)] {
        let k = primitive_hnf_of_det(m).len();
        let idx = coset_enumerate(&SubgroupSpec::gamma0(m)).map_err(|e| e.to_string())?.index();
        check(k == want && idx == want, format!("m={m}: {k} forms, index {idx}"))?;
        got.push(k);
    }
    Ok(format!("{got:?}"))
}

fn numeric_monodromy() -> Outcome {
    let mut worst = 0.0f64;
    let rows = fixtures::table2();
    for row in &rows {
        let ty: KodairaType = row.type_name.parse().map_err(|e: sks_core::kodaira::KodairaError| e.to_string())?;
        let model = LocalModel::of_type(ty).ok_or(format!("no model for {ty}"))?;
        let a = continue_monodromy(&model, 0.1, DEFAULT_STEPS).map_err(|e| e.to_string())?;
        let err = max_abs_diff(&a, &row.matrix.to_f64());
        worst = worst.max(err);
        check(err < 1e-6, format!("{ty}: error {err:e}"))?;
        let t = classify(&IntMat2::from_i64(round_matrix(&a)), false).map_err(|e| e.to_string())?;
        check(t == ty, format!("{ty} classified as {t}"))?;
    }
    Ok(format!("{} rows, max error {worst:.1e}", rows.len()))
}

fn cone_angles() -> Outcome {
    let mut worst = 0.0f64;
    for k in ["II", "II*", "III", "III*", "IV", "IV*", "I0*"] {
        let m = LocalModel::new(k.parse().map_err(|e: sks_core::analytic::AnalyticError| e.to_string())?);
        let b = m.kind.beta().unwrap();
        let want = 2.0 * PI * (*b.numer() as f64) / (*b.denom() as f64);
        let a = cone_angle(&m, 1e-3).map_err(|e| e.to_string())?;
        worst = worst.max((a - want).abs());
        check((a - want).abs() < 1e-3, format!("{k}: {a} vs {want}"))?;
    }
    let i1 = LocalModel::new(ModelKind::I(1));
    let a3 = cone_angle(&i1, 1e-3).map_err(|e| e.to_string())?;
    let a4 = cone_angle(&i1, 1e-4).map_err(|e| e.to_string())?;
    let detail = format!("seven β within {worst:.1e}; I1: {a3:.4} at 1e-3, {a4:.4} at 1e-4");
    check(a4 < 0.5 && a4 < a3, format!("{detail} (needs < 0.5 and decreasing as r shrinks)"))?;
    Ok(detail)
}

fn twist_invariance() -> Outcome {
    let f = vec![Complex64::new(0.2, 0.1), Complex64::new(0.0, -0.3)];
    let models = vec![
        LocalModel::new(ModelKind::I(1)),
        LocalModel::new(ModelKind::I(2)).with_f(f.clone()),
        LocalModel::new(ModelKind::IStar(1)).with_f(f.clone()),
        LocalModel::new(ModelKind::Type1).with_f(f.clone()),
        LocalModel::new(ModelKind::Type2),
        LocalModel::new(ModelKind::II).with_f(f.clone()),
        LocalModel::new(ModelKind::IIIStar).with_f(f.clone()),
        LocalModel::new(ModelKind::IV).with_f(f.clone()),
        LocalModel::new("Type3(1/2)".parse().unwrap()).with_f(f.clone()),
        LocalModel::new(ModelKind::IStar0)
            .with_gh(vec![Complex64::new(1.0, 0.0)], vec![Complex64::i(), Complex64::new(0.5, 0.2)]),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut worst_d, mut worst_t) = (0.0f64, 0.0f64);
    for m in &models {
        for _ in 0..100 {
            let z = Complex64::from_polar(rng.gen_range(1e-3..0.45), rng.gen_range(-PI..PI));
            let th = rng.gen_range(-2.0 * PI..2.0 * PI);
            let d0 = density(m, z).map_err(|e| e.to_string())?;
            let d1 = density(&twist(m, th), z).map_err(|e| e.to_string())?;
            let rel = (d0 - d1).abs() / d0.max(1.0);
            worst_d = worst_d.max(rel);
            check(rel <= 1e-12, format!("{}: density changed by {rel:e}", m.kind))?;
        }
        for _ in 0..4 {
            let th = rng.gen_range(0.0..2.0 * PI);
            let r = recover_twist(m, &twist(m, th), 24).map_err(|e| format!("{}: {e}", m.kind))?;
            let err = angle_mod_pi_diff(r.theta, th);
            worst_t = worst_t.max(err);
            check(err < 1e-8, format!("{}: θ {} vs {th}", m.kind, r.theta))?;
        }
    }
    Ok(format!("{} models, density {worst_d:.1e}, θ {worst_t:.1e}", models.len()))
}

fn random_sl2(rng: &mut ChaCha8Rng, len: usize) -> IntMat2 {
    let mut x = IntMat2::identity();
    for _ in 0..len {
        let g = match rng.gen_range(0..3) {
            0 => IntMat2::s(),
            1 => IntMat2::t(),
            _ => IntMat2::t_pow(-1),
        };
        x = &x * &g;
    }
    x
}

fn property_suites() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let types = [
        KodairaType::I(1),
        KodairaType::I(5),
        KodairaType::IStar(0),
        KodairaType::IStar(3),
        KodairaType::II,
        KodairaType::IIStar,
        KodairaType::III,
        KodairaType::IIIStar,
        KodairaType::IV,
        KodairaType::IVStar,
    ];
    for i in 0..1000 {
        let t = types[i % types.len()];
        let a = t.standard_matrix();
        let x = {
            let len = rng.gen_range(1..12);
            random_sl2(&mut rng, len)
        };
        let conj = &(&x * &a) * &x.inverse_unimodular().unwrap();
        let got = classify(&conj, false).map_err(|e| e.to_string())?;
        check(got == t, format!("{t} conjugated to {conj} classified {got}"))?;
        if t.is_elliptic() {
            let inv = classify(&conj.inverse_unimodular().unwrap(), false).map_err(|e| e.to_string())?;
            check(inv == t.dual(), format!("inverse of {t} classified {inv}"))?;
        }
    }
    for _ in 0..1000 {
        let a = {
            let len = rng.gen_range(0..=40);
            random_sl2(&mut rng, len)
        };
        let w = st_word(&a).map_err(|e| e.to_string())?;
        check(w.evaluate() == a, format!("st_word round trip failed for {a}"))?;
    }
    let mut hnf_cases = 0;
    while hnf_cases < 1000 {
        let b = IntMat2::new(rng.gen_range(-20..21), rng.gen_range(-20..21), rng.gen_range(-20..21), rng.gen_range(-20..21));
        if b.det() <= BigInt::from(0) {
            continue;
        }
        hnf_cases += 1;
        let (h, _) = column_hnf(&b).map_err(|e| e.to_string())?;
        check(is_column_hnf(&h) && column_hnf(&h).unwrap().0 == h, format!("HNF of {b} not idempotent"))?;
        let x = {
            let len = rng.gen_range(1..15);
            random_sl2(&mut rng, len)
        };
        check(column_hnf(&(&b * &x)).unwrap().0 == h, format!("HNF not constant on orbit of {b}"))?;
    }
    let valid = |cfg: &FiberConfig| validate_config(cfg).map(|r| r.valid).map_err(|e| e.to_string());
    check(valid(&FiberConfig::TypesOnly(vec![KodairaType::I(1); 24]))?, "24 I1 rejected")?;
    check(valid(&FiberConfig::TypesOnly(vec![KodairaType::IStar(0); 4]))?, "4 I0* rejected")?;
    check(valid(&FiberConfig::from_matrices(&fixtures::worked_example_matrices()))?, "6 I4 rejected")?;
    check(!valid(&FiberConfig::TypesOnly(vec![KodairaType::I(4); 5]))?, "5 I4 accepted")?;
    Ok("classify 1000, st_word 1000, HNF 1000, validator 24I1/4I0*/6I4 accept, 5I4 reject".into())
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("table3 reproduction", table3_reproduction),
        ("N(SL2Z) = 1", ng_full_group),
        ("worked example", worked_example),
        ("conjugacy consistency", conjugacy_consistency),
        ("brute-force oracle for N(Gamma0(2))", oracle_equivalence),
        ("primitive HNF counts", enumeration_counts),
        ("numeric monodromy", numeric_monodromy),
        ("cone angles", cone_angles),
        ("twist invariance", twist_invariance),
        ("property suites", property_suites),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("PASS  {:>2}  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL  {:>2}  {name}: {why}", i + 1);
            }
        }
    }
    println!("{}/{} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
