use std::path::Path;
use std::time::Instant;

use anyhow::{Context, Result};
use heatpot::greens::{compare_theorem2, default_theorem2_probes, Theorem2Comparison};
use heatpot::kernel::{kernel_gradient, iterated_kernel};
use heatpot::oracle::{compare_cascade, seeded_probes, OracleComparison, ORACLE_PROBES};
use heatpot::scenario::{bundled_names, Scenario};
use heatpot::transparent_bc::{verify_theorem1 as run_verify, Check, ResidualReport};
use heatpot::{HeatError, KernelOrder, SpaceVec};
use serde::Serialize;

use crate::output::{emit_report, print_checks, Report, Table, Timings};
use crate::Outcome;

/// Reads a scenario from a file, falling back to the bundled set by name.
pub fn load_scenario(arg: &str) -> Result<Scenario> {
    let path = Path::new(arg);
    if path.is_file() {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {arg}"))?;
        return Ok(Scenario::from_json(&text)?);
    }
    if bundled_names().any(|n| n == arg) {
        return Ok(Scenario::bundled(arg)?);
    }
    Err(HeatError::Config(format!(
        "{arg:?} is neither a readable file nor a bundled scenario ({})",
        bundled_names().collect::<Vec<_>>().join(", ")
    ))
    .into())
}

fn parse_point(text: &str) -> Result<SpaceVec, HeatError> {
    let coords = text
        .split(',')
        .map(|c| c.trim().parse::<f64>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| HeatError::Argument(format!("bad point {text:?}: {e}")))?;
    SpaceVec::from_slice(&coords)
}

/// `x@t` or `x,y@t`.
fn parse_probe(text: &str) -> Result<(SpaceVec, f64), HeatError> {
    let (x, t) = text
        .split_once('@')
        .ok_or_else(|| HeatError::Argument(format!("probe {text:?} must look like x@t or x,y@t")))?;
    let t = t
        .trim()
        .parse::<f64>()
        .map_err(|e| HeatError::Argument(format!("bad probe time in {text:?}: {e}")))?;
    Ok((parse_point(x)?, t))
}

fn outcome(checks: &[Check]) -> Outcome {
    if checks.iter().all(|c| c.pass) {
        Outcome::Pass
    } else {
        Outcome::CheckFailed
    }
}

fn fmt(v: f64) -> String {
    format!("{:e}", v + 0.0)
}

fn coords(x: &[f64]) -> impl Iterator<Item = String> + '_ {
    x.iter().map(|v| fmt(*v))
}

fn coord_header(n: u32) -> Vec<&'static str> {
    if n == 1 {
        vec!["x"]
    } else {
        vec!["x", "y"]
    }
}

pub fn kernel_eval(m: u32, n: u32, xs: &[String], ts: &[f64], normal: Option<&str>) -> Result<Outcome> {
    let order = KernelOrder::new(m, n)?;
    let normal = match normal {
        Some(s) => parse_point(s)?,
        None => SpaceVec::zero(n).shifted(0, 1.0),
    };
    if normal.dim() != n || (normal.norm() - 1.0).abs() > 1e-12 {
        return Err(HeatError::Argument(format!("normal must be a unit vector in {n} dimensions")).into());
    }
    let points = xs.iter().map(|s| parse_point(s)).collect::<Result<Vec<_>, _>>()?;
    if let Some(p) = points.iter().find(|p| p.dim() != n) {
        return Err(HeatError::Argument(format!("point {:?} does not have {n} coordinates", p.as_slice())).into());
    }

    let mut header = vec!["m", "n"];
    header.extend(coord_header(n));
    header.extend(["t", "value"]);
    header.extend(if n == 1 { vec!["grad_x"] } else { vec!["grad_x", "grad_y"] });
    header.push("normal_derivative");
    let mut table = Table::new(&header);
    for x in &points {
        for &t in ts {
            // The kernel vanishes for t <= 0, and so do its derivatives.
            let grad = if t > 0.0 { kernel_gradient(order, x, t)? } else { SpaceVec::zero(n) };
            let mut row = vec![m.to_string(), n.to_string()];
            row.extend(coords(x.as_slice()));
            row.push(fmt(t));
            row.push(fmt(iterated_kernel(order, x, t)));
            row.extend(coords(grad.as_slice()));
            row.push(fmt(grad.dot(&normal)));
            table.row(row);
        }
    }
    print!("{}", table.render());
    Ok(Outcome::Pass)
}

#[derive(Serialize)]
struct LevelResult {
    level: u32,
    report: ResidualReport,
}

/// Empirical orders `log2(r_{l-1} / r_l)` of the boundary residual `I^k`.
#[derive(Serialize)]
struct Convergence {
    k: u32,
    max_abs: Vec<f64>,
    orders: Vec<Option<f64>>,
}

#[derive(Serialize)]
struct VerifyResult {
    levels: Vec<LevelResult>,
    convergence: Vec<Convergence>,
}

fn convergence(levels: &[LevelResult]) -> Vec<Convergence> {
    let Some(first) = levels.first() else {
        return Vec::new();
    };
    first
        .report
        .boundary
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let max_abs: Vec<f64> = levels.iter().map(|l| l.report.boundary[i].max_abs).collect();
            let orders = max_abs
                .windows(2)
                .map(|w| (w[0] > 0.0 && w[1] > 0.0).then(|| (w[0] / w[1]).log2()))
                .collect();
            Convergence { k: r.k, max_abs, orders }
        })
        .collect()
}

pub fn verify_theorem1(
    scenario: &str,
    refinements: u32,
    report: Option<String>,
    values: Option<String>,
) -> Result<Outcome> {
    let sc = load_scenario(scenario)?;
    let start = Instant::now();
    let mut levels = Vec::new();
    let mut level_seconds = Vec::new();
    let mut checks = Vec::new();
    for level in 0..=refinements {
        let t0 = Instant::now();
        let rep = run_verify(&sc.refined(level))?;
        level_seconds.push(t0.elapsed().as_secs_f64());
        for mut c in rep.checks(&sc.tolerances) {
            c.name = format!("level{level}/{}", c.name);
            checks.push(c);
        }
        levels.push(LevelResult { level, report: rep });
    }

    let mut table = Table::new(&["level", "time_nodes", "boundary_nodes", "check", "value", "limit", "pass"]);
    for (l, chunk) in levels.iter().zip(checks.chunks(checks.len() / levels.len())) {
        for c in chunk {
            table.row([
                l.level.to_string(),
                l.report.time_nodes.to_string(),
                l.report.boundary_nodes.to_string(),
                c.name.clone(),
                fmt(c.value),
                fmt(c.limit),
                c.pass.to_string(),
            ]);
        }
    }
    table.save(values.as_deref().or(sc.output.values.as_deref()))?;

    print_checks(&checks);
    let result = VerifyResult {
        convergence: convergence(&levels),
        levels,
    };
    let timings = Timings {
        total_seconds: start.elapsed().as_secs_f64(),
        level_seconds,
    };
    let doc = Report::new("verify-theorem1", &sc, result, &checks, timings);
    emit_report(&doc, report.as_deref().or(sc.output.report.as_deref()))?;
    Ok(outcome(&checks))
}

pub fn solve_theorem2(
    scenario: &str,
    probes: &[String],
    report: Option<String>,
    values: Option<String>,
) -> Result<Outcome> {
    let sc = load_scenario(scenario)?;
    let start = Instant::now();
    let probes = if probes.is_empty() {
        default_theorem2_probes(&sc)
    } else {
        probes.iter().map(|p| parse_probe(p)).collect::<Result<Vec<_>, _>>()?
    };
    for (x, t) in &probes {
        if sc.domain.is_interior(x)? && *t > 0.0 && *t <= sc.horizon {
            continue;
        }
        return Err(HeatError::Argument(format!(
            "probe {:?}@{t} must be interior with 0 < t <= {}",
            x.as_slice(),
            sc.horizon
        ))
        .into());
    }
    let cmp: Theorem2Comparison = compare_theorem2(&sc, &probes)?;

    let mut checks = vec![Check {
        name: "oracle_max_abs_diff".into(),
        value: cmp.max_abs_diff,
        limit: sc.tolerances.oracle,
        pass: cmp.max_abs_diff <= sc.tolerances.oracle,
    }];
    if let Some(same) = cmp.matches_potential {
        checks.push(Check {
            name: "matches_potential".into(),
            value: if same { 1.0 } else { 0.0 },
            limit: 1.0,
            pass: same,
        });
    }

    let mut header = coord_header(sc.order.n());
    header.extend(["t", "u", "oracle", "abs_diff"]);
    let mut table = Table::new(&header);
    for p in &cmp.probes {
        let mut row: Vec<String> = coords(&p.x).collect();
        row.extend([fmt(p.t), fmt(p.green), fmt(p.oracle), fmt(p.abs_diff)]);
        table.row(row);
    }
    table.save(values.as_deref().or(sc.output.values.as_deref()))?;

    print_checks(&checks);
    let timings = Timings {
        total_seconds: start.elapsed().as_secs_f64(),
        ..Default::default()
    };
    let doc = Report::new("solve-theorem2", &sc, &cmp, &checks, timings);
    emit_report(&doc, report.as_deref().or(sc.output.report.as_deref()))?;
    Ok(outcome(&checks))
}

pub fn compare_oracle(
    scenario: &str,
    seed: Option<u64>,
    report: Option<String>,
    values: Option<String>,
) -> Result<Outcome> {
    let mut sc = load_scenario(scenario)?;
    if let Some(s) = seed {
        sc.seed = s;
    }
    let start = Instant::now();
    let probes = seeded_probes(&sc.domain, sc.horizon, sc.seed, ORACLE_PROBES)?;
    let cmp: OracleComparison = compare_cascade(&sc, &probes)?;
    let checks = vec![Check {
        name: "cascade_max_rel_diff".into(),
        value: cmp.max_rel_diff,
        limit: sc.tolerances.oracle,
        pass: cmp.max_rel_diff <= sc.tolerances.oracle,
    }];

    let mut header = coord_header(sc.order.n());
    header.extend(["t", "direct", "cascade", "abs_diff"]);
    let mut table = Table::new(&header);
    for p in &cmp.probes {
        let mut row: Vec<String> = coords(&p.x).collect();
        row.extend([fmt(p.t), fmt(p.direct), fmt(p.cascade), fmt(p.abs_diff)]);
        table.row(row);
    }
    table.save(values.as_deref().or(sc.output.values.as_deref()))?;

    print_checks(&checks);
    let timings = Timings {
        total_seconds: start.elapsed().as_secs_f64(),
        ..Default::default()
    };
    let doc = Report::new("compare-oracle", &sc, &cmp, &checks, timings);
    emit_report(&doc, report.as_deref().or(sc.output.report.as_deref()))?;
    Ok(outcome(&checks))
}

pub fn scenarios(show: Option<&str>) -> Result<Outcome> {
    match show {
        Some(name) => println!("{}", load_scenario(name)?.to_json()),
        None => {
            for name in bundled_names() {
                println!("{name}");
            }
        }
    }
    Ok(Outcome::Pass)
}
