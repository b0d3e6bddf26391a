use std::fmt::Write as _;

use serde_json::{json, Value};

use crate::config::{write_file, RunConfig};
use crate::symbolic::dimension_rows;
use crate::{profile, Failure};

fn load(cfg: &RunConfig, name: &str) -> Result<Option<Value>, Failure> {
    let path = cfg.report_dir.join(name);
    if !path.exists() {
        return Ok(None);
    }
    let text = std::fs::read_to_string(&path)
        .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map(Some)
        .map_err(|e| Failure::usage(format!("bad report {}: {e}", path.display())))
}

fn symbolic_summary(v: &Value) -> Value {
    let levels: Vec<Value> = v["levels"]
        .as_array()
        .into_iter()
        .flatten()
        .map(|l| {
            json!({
                "t": l["t"], "k": l["k"],
                "z": l["z_count"], "zprime": l["zprime_count"],
                "rank": l["rank"], "expected_rank": l["expected_rank"],
                "pass": l["pass"],
            })
        })
        .collect();
    let parabolic: Vec<Value> = v["parabolic"]
        .as_array()
        .into_iter()
        .flatten()
        .map(|p| json!({ "t": p["t"], "k": p["k"], "pass": p["pass"] }))
        .collect();
    json!({
        "config": v["config"],
        "levels": levels,
        "parabolic": parabolic,
        "pass": v["pass"],
    })
}

pub fn run(cfg: &RunConfig) -> Result<(), Failure> {
    let symbolic = load(cfg, "symbolic.json")?;
    let numeric = load(cfg, "numeric.json")?;
    if symbolic.is_none() && numeric.is_none() {
        return Err(Failure::verification(format!(
            "nothing to report in {}",
            cfg.report_dir.display()
        )));
    }
    let dimensions = match symbolic.as_ref().map(|s| s["dimensions"].clone()) {
        Some(d @ Value::Array(_)) => d,
        _ => serde_json::to_value(dimension_rows(cfg, &profile(cfg)?)?).expect("rows serialize"),
    };
    let pass = [&symbolic, &numeric]
        .iter()
        .filter_map(|r| r.as_ref())
        .all(|r| r["pass"] == Value::Bool(true));

    let mut txt = String::new();
    let mark = |b: &Value| if b == &Value::Bool(true) { "PASS" } else { "FAIL" };
    if let Some(s) = &symbolic {
        let _ = writeln!(txt, "symbolic verification: {}", mark(&s["pass"]));
        for l in s["levels"].as_array().into_iter().flatten() {
            let _ = writeln!(
                txt,
                "  t={} k={}  Z {}  Z' {}  rank {}/{}  {}",
                l["t"], l["k"], l["z_count"], l["zprime_count"], l["rank"], l["expected_rank"],
                mark(&l["pass"])
            );
        }
        for p in s["parabolic"].as_array().into_iter().flatten() {
            let _ = writeln!(txt, "  parabolic lemma t={} k={}  {}", p["t"], p["k"], mark(&p["pass"]));
        }
    }
    if let Some(n) = &numeric {
        let _ = writeln!(txt, "numeric verification ({}): {}", n["group"].as_str().unwrap_or("?"), mark(&n["pass"]));
        for s in n["summary"].as_array().into_iter().flatten() {
            let printed = match s["max_printed"].as_f64() {
                Some(p) => format!("  as printed {p:.1e}"),
                None => String::new(),
            };
            let _ = writeln!(
                txt,
                "  {:<16} {:>4} cases  max residual {:.1e}{printed}  {}",
                s["check"].as_str().unwrap_or("?"),
                s["cases"],
                s["max_residual"].as_f64().unwrap_or(f64::NAN),
                mark(&s["pass"])
            );
        }
    }
    let _ = writeln!(txt, "dimension of the spanning set");
    let _ = writeln!(txt, "  {:>2} {:>2} {:>6} {:>14} {:>14}", "t", "k", "dim M", "implemented", "sum to (2g)^t");
    for d in dimensions.as_array().into_iter().flatten() {
        let _ = writeln!(
            txt,
            "  {:>2} {:>2} {:>6} {:>14} {:>14}",
            d["t"], d["k"], d["dim_m"], d["implemented"], d["paper_formula"]
        );
    }
    let _ = writeln!(
        txt,
        "  implemented counts one basis form per label of J_r for r <= t; the closed formula sums one more power of 2g."
    );

    let report = json!({
        "symbolic": symbolic.as_ref().map(symbolic_summary),
        "numeric": numeric.as_ref().map(|n| json!({
            "config": n["config"],
            "group": n["group"],
            "summary": n["summary"],
            "pass": n["pass"],
        })),
        "dimensions": dimensions,
        "pass": pass,
    });
    let json = serde_json::to_string_pretty(&report).expect("report serializes");
    let a = write_file(&cfg.report_dir, "report.json", &(json + "\n"))?;
    let b = write_file(&cfg.report_dir, "report.txt", &txt)?;
    print!("{txt}");
    println!("reports: {} {}", a.display(), b.display());
    if pass {
        Ok(())
    } else {
        Err(Failure::verification("some verification failed".into()))
    }
}
