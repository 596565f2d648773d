use std::f64::consts::{FRAC_PI_2, PI};
use std::path::Path;

use bml::anticommutation::{check_prop1, verify_certificate, ACGraph};
use bml::inequalities::{chain, gen_svetlichny, hybrid_bilocal_bound, local_bound, quantum_upper_bound_spectral, BoundsRecord};
use bml::networks::{certify_by_complementarity, preset, Certification, TradeOffRelation};
use bml::nosignaling::{ns_max, ns_preset, LpMode, NsObjective};
use bml::quantum::{
    bell_value, boundary_scan, ghz_chain, ghz_svetlichny, ladder_bilinear_max, restart_seeds, seesaw_maximize,
    verify_flat_region, verify_sos_chain, SeesawOptions, MAX_LADDER_N,
};
use bml::randomness::{pguess, ObservedValues, RandomnessError};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{CliError, Exit};
use crate::report::{list, num, opt, Outcome, Table};

/// A scan point is on the boundary when ΣI² is this close to the bound.
pub const BOUNDARY_TOL: f64 = 1e-3;
pub const SOS_TOL: f64 = 1e-9;
/// Largest number of grid points accepted by `scan`.
pub const MAX_SCAN_POINTS: usize = 20_000;
/// The structural report runs only on graphs up to this size.
const PROP1_MAX_VERTICES: usize = 64;

pub fn read_json(path: &str) -> Result<Value, CliError> {
    let text = if path == "-" {
        std::io::read_to_string(std::io::stdin())?
    } else {
        std::fs::read_to_string(Path::new(path)).map_err(|e| CliError::BadInput(format!("{path}: {e}")))?
    };
    Ok(serde_json::from_str(&text)?)
}

fn relation_from(preset_name: Option<&str>, input: Option<&str>) -> Result<TradeOffRelation, CliError> {
    match (preset_name, input) {
        (Some(p), None) => Ok(preset(p)?),
        (None, Some(path)) => Ok(TradeOffRelation::from_json(&read_json(path)?)?),
        _ => Err(CliError::BadInput("give exactly one of --preset and --input".into())),
    }
}

fn method_name(c: &Certification) -> Option<Value> {
    match c {
        Certification::Certified { method, .. } => Some(json!(method)),
        _ => None,
    }
}

/// n_parties and n_edges for the structural report, when the relation has
/// equal-size edges counted once.
fn prop1_shape(rel: &TradeOffRelation, graph: &ACGraph) -> Option<(usize, usize)> {
    let k = rel.hypergraph.uniform_rank()?;
    (rel.exponent == 2 && rel.multiplicity.iter().all(|&m| m == 1) && graph.len() <= PROP1_MAX_VERTICES)
        .then_some((k, rel.hypergraph.n_edges()))
}

pub fn certify(preset_name: Option<&str>, input: Option<&str>, budget: Option<u64>) -> Result<Outcome, CliError> {
    let rel = relation_from(preset_name, input)?;
    let (graph, cert) = certify_by_complementarity(&rel, budget)?;
    let (exit, stats, reason) = match &cert {
        Certification::Certified { stats, .. } => (Exit::Ok, *stats, None),
        Certification::NotCertifiable { stats } => (Exit::Impossible, *stats, None),
        Certification::Inconclusive { stats, reason } => (Exit::Inconclusive, *stats, Some(reason.clone())),
    };
    let prop1 = prop1_shape(&rel, &graph).map(|(k, e)| check_prop1(&graph, k, e)).transpose()?;
    let mut table = Table::new(vec!["group", "operator"]);
    let mut groups = Value::Null;
    let mut verification = Value::Null;
    if let Some(c) = cert.certificate() {
        let labels = c.labels(&graph);
        for (g, ops) in labels.iter().enumerate() {
            for op in ops {
                table.push(vec![g.to_string(), op.clone()]);
            }
        }
        groups = json!(labels);
        verification = serde_json::to_value(verify_certificate(&graph, c)?)?;
    }
    let result = json!({
        "relation": rel.to_json(),
        "certification": cert.status(),
        "method": method_name(&cert),
        "reason": reason,
        "n_operators": graph.len(),
        "groups": groups,
        "verification": verification,
        "search": stats,
        "structure": prop1,
    });
    let mut out = Outcome::new(exit, &result, table)?.tol("bound_integrality", 1e-9).note("certification", cert.status());
    out = out.note("search_nodes", stats.nodes);
    if let Some(r) = &reason {
        out = out.note("reason", r);
    }
    Ok(out)
}

/// Product grid over the hyperspherical angles, `grid` points per angle.
pub fn angle_grid(n_angles: usize, grid: usize) -> Result<Vec<Vec<f64>>, CliError> {
    if grid == 0 {
        return Err(CliError::BadInput("--grid must be positive".into()));
    }
    let total = grid.checked_pow(n_angles as u32).filter(|&t| t <= MAX_SCAN_POINTS);
    if total.is_none() {
        return Err(CliError::BadInput(format!("{grid}^{n_angles} grid points exceed the limit of {MAX_SCAN_POINTS}")));
    }
    let axis: Vec<f64> = match grid {
        1 => vec![0.0],
        _ => (0..grid).map(|k| FRAC_PI_2 * k as f64 / (grid - 1) as f64).collect(),
    };
    let mut pts = vec![Vec::new()];
    for _ in 0..n_angles {
        pts = pts.into_iter().flat_map(|p| axis.iter().map(move |&a| [p.clone(), vec![a]].concat())).collect();
    }
    Ok(pts)
}

#[derive(Serialize)]
struct ScanRow {
    angles: Vec<f64>,
    weights: Vec<f64>,
    values: Vec<f64>,
    sum_sq: f64,
    gap: f64,
    on_boundary: bool,
    seed: u64,
}

pub fn scan(preset_name: Option<&str>, input: Option<&str>, grid: usize, restarts: usize, seed: u64) -> Result<Outcome, CliError> {
    let rel = relation_from(preset_name, input)?;
    if rel.hypergraph.n_edges() < 2 {
        return Err(CliError::BadInput("a scan needs at least two edges".into()));
    }
    let pts = angle_grid(rel.hypergraph.n_edges() - 1, grid)?;
    let opts = SeesawOptions { restarts, seed, ..SeesawOptions::default() };
    let scanned = pts
        .par_iter()
        .map(|a| boundary_scan(&rel, std::slice::from_ref(a), &opts).map(|mut v| v.remove(0)))
        .collect::<Result<Vec<_>, _>>()?;
    let mut table = Table::new(vec!["index", "angles", "weights", "values", "sum_sq", "bound", "gap", "on_boundary", "seed"]);
    let rows: Vec<ScanRow> = scanned
        .into_iter()
        .map(|p| {
            let gap = rel.bound - p.sum_sq;
            ScanRow {
                on_boundary: gap.abs() <= BOUNDARY_TOL,
                gap,
                angles: p.angles,
                weights: p.weights,
                values: p.values,
                sum_sq: p.sum_sq,
                seed: p.seed,
            }
        })
        .collect();
    for (i, r) in rows.iter().enumerate() {
        table.push(vec![
            i.to_string(),
            list(&r.angles),
            list(&r.weights),
            list(&r.values),
            num(r.sum_sq),
            num(rel.bound),
            num(r.gap),
            r.on_boundary.to_string(),
            r.seed.to_string(),
        ]);
    }
    let result = json!({
        "relation": rel.name,
        "bound": rel.bound,
        "restarts": restarts,
        "points": rows,
        "below_boundary": rows.iter().filter(|r| !r.on_boundary).count(),
    });
    Ok(Outcome::new(Exit::Ok, &result, table)?.tol("boundary", BOUNDARY_TOL).tol("seesaw_convergence", opts.tol))
}

pub fn nsbound(preset_name: Option<&str>, input: Option<&str>, exact: bool) -> Result<Outcome, CliError> {
    let obj = match (preset_name, input) {
        (Some(p), None) => ns_preset(p)?,
        (None, Some(path)) => NsObjective::from_json(&read_json(path)?)?,
        _ => return Err(CliError::BadInput("give exactly one of --preset and --input".into())),
    };
    let mode = if exact { LpMode::Exact } else { LpMode::Float };
    let lp = ns_max(&obj, mode)?;
    let mut table = Table::new(vec!["objective", "mode", "value", "exact_value", "iterations", "basis_size", "n_vars", "n_rows"]);
    table.push(vec![
        obj.name.clone(),
        if exact { "exact" } else { "float" }.into(),
        num(lp.value),
        lp.exact_value.clone().unwrap_or_default(),
        lp.iterations.to_string(),
        lp.basis_size.to_string(),
        lp.n_vars.to_string(),
        lp.n_rows.to_string(),
    ]);
    let result = json!({ "objective": obj.to_json(), "lp": lp });
    Ok(Outcome::new(Exit::Ok, &result, table)?.tol("lp_feasibility", bml::nosignaling::LP_FEAS_TOL))
}

#[derive(Serialize)]
struct FamilyRow {
    family: &'static str,
    n: usize,
    m: usize,
    #[serde(flatten)]
    bounds: BoundsRecord,
}

pub fn family(kind: &str, n: Option<usize>, ms: &[usize]) -> Result<Outcome, CliError> {
    let mut rows = Vec::new();
    for &m in ms {
        let row = match kind {
            "chain" => {
                if n.is_some_and(|n| n != 2) {
                    return Err(CliError::BadInput("the chain family is bipartite (n = 2)".into()));
                }
                let e = chain(m)?;
                let attained = bell_value(&e, &ghz_chain(m)?, &[0, 1])?;
                FamilyRow {
                    family: "chain",
                    n: 2,
                    m,
                    bounds: BoundsRecord {
                        classical: local_bound(&e)?,
                        bilocal: None,
                        quantum_upper: Some(quantum_upper_bound_spectral(&e)?),
                        quantum_attained: Some(attained),
                    },
                }
            }
            "svetlichny" => {
                let n = n.unwrap_or(3);
                let e = gen_svetlichny(n, m)?;
                let parties: Vec<usize> = (0..n).collect();
                let attained = bell_value(&e, &ghz_svetlichny(n, m)?, &parties)?;
                FamilyRow {
                    family: "svetlichny",
                    n,
                    m,
                    bounds: BoundsRecord {
                        classical: local_bound(&e)?,
                        bilocal: if n >= 3 { Some(hybrid_bilocal_bound(&e)?) } else { None },
                        quantum_upper: Some(quantum_upper_bound_spectral(&e)?),
                        quantum_attained: Some(attained),
                    },
                }
            }
            other => return Err(CliError::BadInput(format!("unknown family {other:?}; use chain or svetlichny"))),
        };
        rows.push(row);
    }
    let mut table = Table::new(vec!["family", "n", "m", "classical", "bilocal", "spectral", "attained_by_ghz"]);
    for r in &rows {
        table.push(vec![
            r.family.into(),
            r.n.to_string(),
            r.m.to_string(),
            num(r.bounds.classical),
            opt(r.bounds.bilocal.as_ref().map(|b| b.0)),
            opt(r.bounds.quantum_upper),
            opt(r.bounds.quantum_attained),
        ]);
    }
    Ok(Outcome::new(Exit::Ok, &json!({ "rows": rows }), table)?)
}

pub fn parse_mermin(s: &str) -> Result<(usize, f64), String> {
    let (j, v) = s.split_once(':').ok_or("expected J:VALUE, e.g. 3:4.0")?;
    Ok((j.trim().parse().map_err(|e| format!("{e}"))?, v.trim().parse().map_err(|e| format!("{e}"))?))
}

pub fn pguess_cmd(input: Option<&str>, mermin: &[(usize, f64)], chsh: Option<f64>) -> Result<Outcome, CliError> {
    let obs = match input {
        Some(path) => {
            if !mermin.is_empty() || chsh.is_some() {
                return Err(CliError::BadInput("--input cannot be combined with --mermin or --chsh".into()));
            }
            serde_json::from_value::<ObservedValues>(read_json(path)?)?
        }
        None => ObservedValues { mermin_values: mermin.to_vec(), chsh_value: chsh },
    };
    let form = if obs.chsh_value.is_some() { "hybrid" } else { "mermin_chain" };
    let (exit, record) = match pguess(&obs) {
        Ok(b) => (Exit::Ok, json!({ "raw": b.raw, "capped": b.capped, "feasible": true, "radicand": b.radicand })),
        Err(RandomnessError::InfeasibleObservation(r)) => {
            (Exit::Impossible, json!({ "raw": null, "capped": null, "feasible": false, "radicand": r }))
        }
        Err(e) => return Err(e.into()),
    };
    let mut table = Table::new(vec!["form", "raw", "capped", "feasible", "radicand"]);
    table.push(vec![
        form.into(),
        opt(record["raw"].as_f64()),
        opt(record["capped"].as_f64()),
        record["feasible"].to_string(),
        opt(record["radicand"].as_f64()),
    ]);
    let result = json!({ "form": form, "observed": obs, "bound": record });
    Ok(Outcome::new(exit, &result, table)?.tol("radicand_clamp", bml::randomness::RADICAND_TOL))
}

pub fn flatregion(grid: Option<usize>) -> Result<Outcome, CliError> {
    let thetas: Vec<f64> = match grid {
        None => vec![PI / 12.0, PI / 6.0, PI / 4.0, PI / 3.0],
        Some(0) => return Err(CliError::BadInput("--grid must be positive".into())),
        Some(1) => vec![0.0],
        Some(g) => (0..g).map(|k| FRAC_PI_2 * k as f64 / (g - 1) as f64).collect(),
    };
    let pts = verify_flat_region(&thetas)?;
    let all_pass = pts.iter().all(|p| p.pass());
    let mut table = Table::new(vec!["theta", "box1", "value_box1", "value_box2", "a1b1_box1", "a1b1_box2", "max_correlator_gap", "pass"]);
    for p in &pts {
        table.push(vec![
            num(p.theta),
            p.box1.into(),
            num(p.values1.2),
            num(p.values2.2),
            num(p.a1b1.0),
            num(p.a1b1.1),
            num(p.max_correlator_gap),
            p.pass().to_string(),
        ]);
    }
    let exit = if all_pass { Exit::Ok } else { Exit::Inconclusive };
    Ok(Outcome::new(exit, &json!({ "points": pts, "all_pass": all_pass }), table)?
        .tol("value", 1e-9)
        .tol("distinctness", 0.1))
}

pub fn ladder(n: usize, restarts: usize, seed: u64) -> Result<Outcome, CliError> {
    if !(1..=MAX_LADDER_N).contains(&n) {
        return Err(CliError::BadInput(format!("n = {n} must be in 1..={MAX_LADDER_N}")));
    }
    let b = ladder_bilinear_max(n, restarts, seed)?;
    let mut table = Table::new(vec!["n", "bilinear_real", "bilinear_complex", "network", "seesaw_sum_sq", "bound", "unnormalized_sum_sq"]);
    let mut result = json!({ "bilinear": b, "network": null });
    let mut row = vec![n.to_string(), num(b.real), num(b.complex), String::new(), String::new(), String::new(), String::new()];
    // Equal-weight seesaw on ladder(n), whose bound is also 2^{n-1}.
    if n >= 2 {
        let rel = preset(&format!("ladder({n})"))?;
        let w = vec![1.0 / (rel.hypergraph.n_edges() as f64).sqrt(); rel.hypergraph.n_edges()];
        let out = seesaw_maximize(&rel, &w, &SeesawOptions { restarts, seed, ..SeesawOptions::default() })?;
        let sum_sq: f64 = out.edge_values.iter().map(|v| v * v).sum();
        let unnormalized = rel.scale.map(|s| s * s * sum_sq);
        row[3..].clone_from_slice(&[rel.name.clone(), num(sum_sq), num(rel.bound), opt(unnormalized)]);
        result = json!({
            "bilinear": b,
            "network": rel.name,
            "bound": rel.bound,
            "seesaw_values": out.edge_values,
            "seesaw_sum_sq": sum_sq,
            "unnormalized_sum_sq": unnormalized,
        });
    }
    table.push(row);
    Ok(Outcome::new(Exit::Ok, &result, table)?)
}

pub fn sos(ms: &[usize], thetas: &[f64], samples: usize, seed: u64) -> Result<Outcome, CliError> {
    let seeds = restart_seeds(seed, samples);
    let mut reports = Vec::new();
    for &m in ms {
        for &t in thetas {
            reports.push(verify_sos_chain(m, t, &seeds)?);
        }
    }
    let all_pass = reports.iter().all(|r| r.pass(SOS_TOL));
    let mut table = Table::new(vec!["m", "theta", "blocks", "seeds", "max_residual", "min_eigenvalue", "max_sampled_ratio", "pass"]);
    for r in &reports {
        table.push(vec![
            r.m.to_string(),
            num(r.theta),
            r.blocks.to_string(),
            r.seeds.to_string(),
            num(r.max_residual),
            num(r.min_eigenvalue),
            num(r.max_sampled_ratio),
            r.pass(SOS_TOL).to_string(),
        ]);
    }
    let exit = if all_pass { Exit::Ok } else { Exit::Numerical };
    Ok(Outcome::new(exit, &json!({ "checks": reports, "all_pass": all_pass }), table)?.tol("residual", SOS_TOL))
}
