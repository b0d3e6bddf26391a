use clap::ValueEnum;
use hoforms::construct::{DimensionReport, ParabolicReport};
use hoforms::{
    check_parabolic_lemma, dimension_zm, enumerate_i, enumerate_j, exclusion_reason,
    verify_level, BaseForm, ConstructionRecord, Constructor, GroupProfile, IndexEntry, Kind,
    LevelReport, Word,
};
use serde::Serialize;

use crate::config::{write_file, RunConfig};
use crate::{env_error, profile, Failure};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Z,
    Zprime,
    Both,
}

/// `[-1,1];f1`.
pub fn parse_entry(s: &str, profile: &GroupProfile) -> Result<IndexEntry, Failure> {
    let (w, b) = s
        .split_once(';')
        .ok_or_else(|| Failure::usage(format!("entry `{s}` is not of the form <word>;<base>")))?;
    let word = Word::parse(w, profile.genus).map_err(env_error)?;
    let base = BaseForm::parse(b.trim()).map_err(env_error)?;
    let weight = base.weight();
    Ok(IndexEntry::new(word, base, weight))
}

pub fn enumerate(cfg: &RunConfig) -> Result<(), Failure> {
    let p = profile(cfg)?;
    let t = cfg.t_max;
    for &k in &cfg.weights {
        if t == 1 {
            let basis = p.basis(k).map_err(env_error)?;
            println!("# basis M_{k}: {} forms", basis.len());
            for b in basis {
                println!("{b}");
            }
            continue;
        }
        let j = enumerate_j(t, k, &p).map_err(env_error)?;
        let i = enumerate_i(t, k, &p).map_err(env_error)?;
        println!("# J t={t} k={k}: {} entries", j.len());
        for e in &j {
            match exclusion_reason(e, k) {
                Some(r) => println!("{e}\texcluded: {r}"),
                None => println!("{e}"),
            }
        }
        println!("# I t={t} k={k}: {} entries", i.len());
        for e in &i {
            println!("{e}");
        }
    }
    Ok(())
}

fn kind_label(kind: Kind) -> &'static str {
    match kind {
        Kind::Z => "Z",
        Kind::ZPrime => "Z'",
    }
}

/// The serialized name of a unit enum variant.
fn label<T: Serialize>(v: &T) -> String {
    serde_json::to_value(v)
        .ok()
        .and_then(|v| v.as_str().map(str::to_owned))
        .unwrap_or_default()
}

fn print_record(rec: &ConstructionRecord) {
    println!(
        "{} {} residual={} corrections={} extra={}",
        kind_label(rec.kind),
        rec.entry,
        label(&rec.residual_class),
        rec.corrections_used.len(),
        rec.extra_corrections.len()
    );
    println!("  form: {}", rec.form.to_text());
    for line in rec.form.fe().to_canonical_text().lines() {
        println!("  fe: {line}");
    }
}

pub fn construct(cfg: &RunConfig, entry: Option<&str>, kind: KindArg) -> Result<(), Failure> {
    let p = profile(cfg)?;
    let ctor = Constructor::new(p.clone());
    let want_z = kind != KindArg::Zprime;
    let want_zp = kind != KindArg::Z;
    let mut failed = Vec::new();
    let mut run = |e: &IndexEntry, z: bool| {
        let r = if z {
            ctor.construct_z(e)
        } else {
            ctor.construct_zprime(e)
        };
        match r {
            Ok(rec) => print_record(&rec),
            Err(err) => {
                println!("{} {e} error: {err}", if z { "Z" } else { "Z'" });
                failed.push(e.to_string());
            }
        }
    };
    if let Some(s) = entry {
        let e = parse_entry(s, &p)?;
        if want_zp {
            run(&e, false);
        }
        if want_z && e.in_i(&p) {
            run(&e, true);
        }
    } else {
        for &k in &cfg.weights {
            let t = cfg.t_max;
            if want_zp {
                for e in enumerate_j(t, k, &p).map_err(env_error)? {
                    run(&e, false);
                }
            }
            if want_z {
                for e in enumerate_i(t, k, &p).map_err(env_error)? {
                    run(&e, true);
                }
            }
        }
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::verification(format!(
            "{} constructions failed: {}",
            failed.len(),
            failed.join(", ")
        )))
    }
}

#[derive(Serialize)]
struct SymbolicReport<'a> {
    command: &'static str,
    config: &'a RunConfig,
    #[serde(skip_serializing_if = "Option::is_none")]
    fault: Option<String>,
    levels: Vec<LevelReport>,
    parabolic: Vec<ParabolicReport>,
    dimensions: Vec<DimensionReport>,
    pass: bool,
}

fn parse_fault(s: &str, p: &GroupProfile) -> Result<(Kind, IndexEntry), Failure> {
    let (kind, rest) = s
        .split_once(':')
        .ok_or_else(|| Failure::usage(format!("fault `{s}` is not of the form <Z|Z'>:<entry>")))?;
    let kind = match kind.trim() {
        "Z" => Kind::Z,
        "Z'" => Kind::ZPrime,
        other => return Err(Failure::usage(format!("unknown kind `{other}`"))),
    };
    Ok((kind, parse_entry(rest, p)?))
}

pub fn dimension_rows(cfg: &RunConfig, p: &GroupProfile) -> Result<Vec<DimensionReport>, Failure> {
    let mut rows = Vec::new();
    for &k in &cfg.weights {
        for t in 1..=cfg.t_max {
            rows.push(dimension_zm(t, k, p).map_err(env_error)?);
        }
    }
    Ok(rows)
}

pub fn verify(cfg: &RunConfig, fault: Option<&str>) -> Result<(), Failure> {
    let p = profile(cfg)?;
    let mut ctor = Constructor::new(p.clone());
    if let Some(s) = fault {
        let (kind, e) = parse_fault(s, &p)?;
        ctor = ctor.with_fault(kind, e);
    }
    let pool = cfg.pool()?;
    let (levels, parabolic) = pool.install(|| -> Result<_, Failure> {
        let mut levels = Vec::new();
        let mut parabolic = Vec::new();
        for &k in &cfg.weights {
            for t in 1..=cfg.t_max {
                levels.push(verify_level(&ctor, t, k).map_err(env_error)?);
            }
            for t in 3..=cfg.t_max {
                parabolic.push(check_parabolic_lemma(&ctor, t, k).map_err(env_error)?);
            }
        }
        Ok((levels, parabolic))
    })?;
    let mut pass = true;
    for l in &levels {
        let mark = if l.pass { "PASS" } else { "FAIL" };
        println!(
            "level t={} k={}: Z {} Z' {} rank {}/{} {mark}",
            l.t, l.k, l.z_count, l.zprime_count, l.rank, l.expected_rank
        );
        for e in l.failures() {
            let why = e.error.clone().unwrap_or_else(|| match &e.residual_class {
                Some(c) => format!("residual {}", label(c)),
                None => "no residual".into(),
            });
            println!("  FAIL {} {}: {why}", kind_label(e.kind), e.entry);
        }
        pass &= l.pass;
    }
    for r in &parabolic {
        let ok = r.entries.iter().filter(|e| e.pass).count();
        let mark = if r.pass { "PASS" } else { "FAIL" };
        println!("parabolic t={} k={}: {ok}/{} {mark}", r.t, r.k, r.entries.len());
        for e in r.entries.iter().filter(|e| !e.pass) {
            println!("  FAIL {}: expected {:?} got {:?}", e.entry, e.expected, e.computed);
        }
        pass &= r.pass;
    }
    let dimensions = dimension_rows(cfg, &p)?;
    let report = SymbolicReport {
        command: "verify-symbolic",
        config: cfg,
        fault: fault.map(str::to_owned),
        levels,
        parabolic,
        dimensions,
        pass,
    };
    let json = serde_json::to_string_pretty(&report).expect("report serializes");
    let path = write_file(&cfg.report_dir, "symbolic.json", &(json + "\n"))?;
    println!("report: {}", path.display());
    if pass {
        Ok(())
    } else {
        Err(Failure::verification("symbolic verification failed".into()))
    }
}
