use gaudinqq::backlund::{full_qq_generate, full_qq_generate_prefix, FullQQSystem};
use gaudinqq::bethe::{bethe_residual, bethe_solve, bethe_solve_exact, qq_to_roots, roots_to_qq, BetheConfiguration, GaudinProblem, SolveOptions};
use gaudinqq::io::{matrix_to_json, poly_to_json, qq_solution_from_json, qq_solution_to_json, ratfunc_to_json, scalar_to_json, twist_to_json};
use gaudinqq::polyring::{rational_roots, Poly, Scalar, C, Q};
use gaudinqq::qqcore::{check_nondegenerate, qq_residual_norm, solve_q_minus, MasterData, QMinus, QQSolution};
use gaudinqq::wronskian::{build_g, det_is_one, gauss_matches_construction, minor_qq_match, verify_wronskian_equation, wronskian_connection_check};
use gaudinqq::Error;
use serde_json::{json, Map, Value};

use crate::scenario::{config_error, parse_json, Scenario};
use crate::{CliError, Mode, Outcome, Settings};

pub const FORMAT_VERSION: u64 = 1;
const DEFAULT_TOL: f64 = 1e-10;
const DEFAULT_STARTS: usize = 64;

/// JSON number, or `null` when not finite.
fn num(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        Value::Null
    }
}

fn word_label(word: &[usize]) -> String {
    if word.is_empty() {
        "e".into()
    } else {
        gaudinqq::cartan::word_string(word)
    }
}

/// Per-mode solver.
pub trait ModeScalar: Scalar {
    const MODE: Mode;
    fn solve(prob: &GaudinProblem<Self>, opts: &SolveOptions, tol: f64) -> Vec<QQSolution<Self>>;
}

impl ModeScalar for Q {
    const MODE: Mode = Mode::Exact;
    fn solve(prob: &GaudinProblem<Q>, opts: &SolveOptions, _tol: f64) -> Vec<QQSolution<Q>> {
        bethe_solve_exact(prob, opts)
    }
}

impl ModeScalar for C {
    const MODE: Mode = Mode::Float;
    fn solve(prob: &GaudinProblem<C>, opts: &SolveOptions, tol: f64) -> Vec<QQSolution<C>> {
        bethe_solve(prob, opts)
            .iter()
            .filter_map(|cfg| roots_to_qq(prob, cfg, tol).ok())
            .collect()
    }
}

/// Tolerance used for checks: zero in exact mode.
fn check_tol<F: Scalar>(explicit: Option<f64>, fallback: Option<f64>) -> f64 {
    if F::EXACT {
        0.0
    } else {
        explicit.or(fallback).unwrap_or(DEFAULT_TOL)
    }
}

/// Tolerance for rank and resonance decisions inside computations.
fn work_tol<F: Scalar>(tol: f64, floor: f64) -> f64 {
    if F::EXACT {
        0.0
    } else {
        tol.max(floor)
    }
}

fn problem_of<F: Scalar>(sol: &QQSolution<F>) -> Result<GaudinProblem<F>, Error> {
    GaudinProblem::new(sol.cd.clone(), sol.master.clone(), sol.twist.clone(), sol.degrees())
}

/// Per-node Bethe residual: exact when every root is rational, otherwise
/// evaluated at numerical roots.
fn bethe_node_residuals<F: Scalar>(sol: &QQSolution<F>) -> Result<Vec<f64>, Error> {
    let r = sol.rank();
    let fold = |vals: Vec<f64>, degrees: &[usize]| {
        let mut out = vec![0.0f64; r];
        let mut k = 0;
        for (i, &d) in degrees.iter().enumerate() {
            for _ in 0..d {
                out[i] = out[i].max(vals[k]);
                k += 1;
            }
        }
        out
    };
    let degrees = sol.degrees();
    if F::EXACT {
        if let Some((prob, cfg)) = exact_problem(sol) {
            let res = bethe_residual(&prob, &cfg)?;
            return Ok(fold(res.iter().map(|x| x.modulus()).collect(), &degrees));
        }
    }
    let fsol = sol.to_float();
    let prob = problem_of(&fsol)?;
    let cfg = qq_to_roots(&fsol)?;
    let res = bethe_residual(&prob, &cfg)?;
    Ok(fold(res.iter().map(|x| x.norm()).collect(), &degrees))
}

fn exact_problem<F: Scalar>(sol: &QQSolution<F>) -> Option<(GaudinProblem<Q>, BetheConfiguration<Q>)> {
    let to_q = |p: &Poly<F>| -> Option<Poly<Q>> { p.coeffs().iter().map(|c| c.as_exact()).collect::<Option<Vec<_>>>().map(Poly::new) };
    let roots = sol
        .q_plus
        .iter()
        .map(|p| rational_roots(&to_q(p)?).ok()?.all_rational())
        .collect::<Option<Vec<_>>>()?;
    let master = if sol.master.has_points() {
        let pts = sol.master.points().iter().map(|p| p.as_exact()).collect::<Option<Vec<_>>>()?;
        MasterData::new(&sol.cd, pts, sol.master.coweights().to_vec()).ok()?
    } else {
        MasterData::from_lambdas(&sol.cd, sol.master.lambdas().iter().map(to_q).collect::<Option<Vec<_>>>()?).ok()?
    };
    let twist = gaudinqq::cartan::CartanTwist::new(sol.twist.zeta.iter().map(|z| z.as_exact()).collect::<Option<Vec<_>>>()?);
    let prob = GaudinProblem::new(sol.cd.clone(), master, twist, sol.degrees()).ok()?;
    Some((prob, BetheConfiguration { roots }))
}

/// Residual table for one solution.
fn diagnose<F: Scalar>(sol: &QQSolution<F>, tol: f64) -> Result<(Value, bool), Error> {
    let r = sol.rank();
    let nd = check_nondegenerate(sol, work_tol::<F>(tol, 1e-12));
    let bethe = bethe_node_residuals(sol).ok();
    let mut nodes = Vec::new();
    let mut passed = nd.all_pass();
    for i in 0..r {
        let qq = qq_residual_norm(sol, i)?;
        let qq_pass = qq <= tol;
        let status = match solve_q_minus(&sol.cd, &sol.twist, &sol.master, &sol.q_plus, i, tol)? {
            QMinus::Unique(_) => "unique",
            QMinus::Family { .. } => "family",
            QMinus::Inconsistent { .. } => "inconsistent",
        };
        let b = bethe.as_ref().map(|v| v[i]);
        let bethe_pass = b.is_some_and(|x| x <= tol.max(0.0));
        passed &= qq_pass && status != "inconsistent" && bethe_pass;
        nodes.push(json!({
            "node": i + 1,
            "qq_residual": num(qq),
            "qq_pass": qq_pass,
            "q_minus": status,
            "bethe_residual": b.map(num).unwrap_or(Value::Null),
            "bethe_pass": bethe_pass,
            "squarefree": nd.squarefree[i],
            "avoids_singularities": nd.avoids_singularities[i],
            "coprime": nd.coprime[i],
        }));
    }
    let neighbours: Vec<Value> = nd
        .neighbours_distinct
        .iter()
        .map(|&(i, j, ok)| json!({"i": i + 1, "j": j + 1, "distinct": ok}))
        .collect();
    Ok((
        json!({"nodes": nodes, "neighbours": neighbours, "nondegenerate": nd.all_pass(), "passed": passed}),
        passed,
    ))
}

fn roots_json(cfg: &BetheConfiguration<C>) -> Value {
    Value::Array(cfg.roots.iter().map(|node| Value::Array(node.iter().map(scalar_to_json).collect())).collect())
}

fn problem_json<F: Scalar>(prob: &GaudinProblem<F>) -> Value {
    let mut out = Map::new();
    out.insert("group".into(), json!(prob.cd.label()));
    gaudinqq::io::master_to_json(&prob.master, &mut out);
    out.insert("twist".into(), twist_to_json(&prob.twist));
    out.insert("degrees".into(), json!(prob.degrees));
    Value::Object(out)
}

pub fn cmd_solve(sc: &Scenario, settings: &Settings) -> Result<Outcome, CliError> {
    match settings.mode.unwrap_or(sc.mode) {
        Mode::Exact => solve_in::<Q>(sc, settings),
        Mode::Float => solve_in::<C>(sc, settings),
    }
}

fn solve_in<F: ModeScalar>(sc: &Scenario, settings: &Settings) -> Result<Outcome, CliError> {
    let prob = sc.problem::<F>()?;
    let tol = check_tol::<F>(settings.tol, sc.tol);
    let seed = settings.seed.or(sc.seed).unwrap_or(0);
    let starts = sc.starts.unwrap_or(DEFAULT_STARTS);
    let opts = SolveOptions {
        starts,
        seed,
        tol: settings.tol.or(sc.tol).unwrap_or(DEFAULT_TOL),
        ..SolveOptions::default()
    };
    let sols = F::solve(&prob, &opts, tol);
    let mut entries = Vec::new();
    let mut summary = vec![format!("{}: {} solution(s) in {} mode", prob.cd.label(), sols.len(), F::label())];
    for (k, sol) in sols.iter().enumerate() {
        let roots = qq_to_roots(sol).map_err(CliError::from_core)?;
        let (diag, ok) = diagnose(sol, tol).map_err(CliError::from_core)?;
        summary.push(format!("  solution {}: {}", k + 1, if ok { "pass" } else { "FAIL" }));
        entries.push(json!({
            "index": k + 1,
            "bethe_roots": roots_json(&roots),
            "qq": qq_solution_to_json(sol),
            "diagnostics": diag,
        }));
    }
    let passed = !sols.is_empty();
    let report = json!({
        "kind": "solutions",
        "version": FORMAT_VERSION,
        "mode": F::label(),
        "seed": seed,
        "starts": starts,
        "tol": tol,
        "problem": problem_json(&prob),
        "solutions": entries,
        "passed": passed,
    });
    Ok(Outcome { report, passed, summary })
}

/// Solutions from a solutions file, or a bare solution object.
fn load_solutions<F: Scalar>(text: &str) -> Result<Vec<QQSolution<F>>, CliError> {
    let v = parse_json(text)?;
    let items: Vec<&Value> = match v.get("solutions") {
        Some(list) => list
            .as_array()
            .ok_or_else(|| config_error(text, "solutions", "\"solutions\" must be an array"))?
            .iter()
            .map(|s| s.get("qq").unwrap_or(s))
            .collect(),
        None => vec![&v],
    };
    items
        .into_iter()
        .map(|s| qq_solution_from_json::<F>(s).map_err(|e| config_error(text, "q_plus", e.to_string())))
        .collect()
}

fn file_mode(text: &str) -> Mode {
    match serde_json::from_str::<Value>(text).ok().as_ref().and_then(|v| v.get("mode")).and_then(Value::as_str) {
        Some("float") => Mode::Float,
        _ => Mode::Exact,
    }
}

pub fn cmd_verify(text: &str, settings: &Settings) -> Result<Outcome, CliError> {
    match settings.mode.unwrap_or_else(|| file_mode(text)) {
        Mode::Exact => verify_in::<Q>(text, settings),
        Mode::Float => verify_in::<C>(text, settings),
    }
}

fn verify_in<F: Scalar>(text: &str, settings: &Settings) -> Result<Outcome, CliError> {
    let sols = load_solutions::<F>(text)?;
    let tol = check_tol::<F>(settings.tol, None);
    let mut passed = !sols.is_empty();
    let mut out = Vec::new();
    let mut summary = Vec::new();
    for (k, sol) in sols.iter().enumerate() {
        let (mut diag, ok) = diagnose(sol, tol).map_err(CliError::from_core)?;
        diag["index"] = json!(k + 1);
        passed &= ok;
        summary.push(format!("solution {}: {}", k + 1, if ok { "pass" } else { "FAIL" }));
        for node in diag["nodes"].as_array().into_iter().flatten() {
            let family = if node["q_minus"] == "family" { " (q- family, informational)" } else { "" };
            summary.push(format!(
                "  node {}: qq residual {} bethe residual {}{}",
                node["node"], node["qq_residual"], node["bethe_residual"], family
            ));
        }
        out.push(diag);
    }
    let report = json!({
        "kind": "verify",
        "version": FORMAT_VERSION,
        "mode": F::label(),
        "tol": tol,
        "solutions": out,
        "passed": passed,
    });
    Ok(Outcome { report, passed, summary })
}

fn orbit_json<F: Scalar>(full: &FullQQSystem<F>, tol: f64) -> Result<(Value, bool), Error> {
    let mut entries = Vec::new();
    for e in &full.entries {
        let residuals = (0..e.solution.rank())
            .map(|i| qq_residual_norm(&e.solution, i).map(num))
            .collect::<Result<Vec<_>, _>>()?;
        entries.push(json!({
            "word": word_label(e.element.word()),
            "length": e.element.length(),
            "twist": twist_to_json(&e.solution.twist),
            "q_plus": e.solution.q_plus.iter().map(poly_to_json).collect::<Vec<_>>(),
            "q_minus": e.solution.q_minus.iter().map(poly_to_json).collect::<Vec<_>>(),
            "step": e.step.as_ref().map(|(i, s)| json!({"node": i + 1, "scalar": scalar_to_json(s)})).unwrap_or(Value::Null),
            "accumulated_scalar": scalar_to_json(&e.accumulated),
            "qq_residual": residuals,
        }));
    }
    let failures: Vec<Value> = full
        .failures
        .iter()
        .map(|f| json!({"word": word_label(&f.word), "message": f.message}))
        .collect();
    let max_res = full.max_residual();
    let passed = full.failures.is_empty() && max_res <= tol;
    Ok((
        json!({
            "entries": entries,
            "failures": failures,
            "truncated": full.truncated,
            "max_residual": num(max_res),
            "passed": passed,
        }),
        passed,
    ))
}

pub fn cmd_orbit(text: &str, settings: &Settings) -> Result<Outcome, CliError> {
    match settings.mode.unwrap_or_else(|| file_mode(text)) {
        Mode::Exact => orbit_in::<Q>(text, settings),
        Mode::Float => orbit_in::<C>(text, settings),
    }
}

fn orbit_in<F: Scalar>(text: &str, settings: &Settings) -> Result<Outcome, CliError> {
    let sols = load_solutions::<F>(text)?;
    let tol = check_tol::<F>(settings.tol, None);
    let mut passed = !sols.is_empty();
    let mut orbits = Vec::new();
    let mut summary = Vec::new();
    for (k, sol) in sols.iter().enumerate() {
        let full = full_qq_generate_prefix(sol, settings.weyl_cap, work_tol::<F>(tol, 1e-13));
        let (mut v, ok) = orbit_json(&full, tol).map_err(CliError::from_core)?;
        v["index"] = json!(k + 1);
        passed &= ok;
        summary.push(format!(
            "solution {}: {} entries{}{}",
            k + 1,
            full.entries.len(),
            if full.truncated { " (truncated by --weyl-cap)" } else { "" },
            if ok { "" } else { ", FAIL" }
        ));
        for f in &full.failures {
            summary.push(format!("  degenerate at word {}: {}", word_label(&f.word), f.message));
        }
        orbits.push(v);
    }
    let report = json!({
        "kind": "orbit",
        "version": FORMAT_VERSION,
        "mode": F::label(),
        "weyl_cap": settings.weyl_cap,
        "orbits": orbits,
        "passed": passed,
    });
    Ok(Outcome { report, passed, summary })
}

pub fn cmd_wronskian(text: &str, settings: &Settings) -> Result<Outcome, CliError> {
    match settings.mode.unwrap_or_else(|| file_mode(text)) {
        Mode::Exact => wronskian_in::<Q>(text, settings),
        Mode::Float => wronskian_in::<C>(text, settings),
    }
}

fn wronskian_one<F: Scalar>(sol: &QQSolution<F>, settings: &Settings, tol: f64) -> Result<(Value, bool), CliError> {
    let ctol = work_tol::<F>(tol, 1e-12);
    let wd = match build_g(sol, ctol) {
        Ok(wd) => wd,
        Err(e @ Error::TailUnsolvable { .. }) => {
            return Ok((json!({"error": e.to_string(), "passed": false}), false));
        }
        Err(e) => return Err(CliError::from_core(e)),
    };
    let full = full_qq_generate(sol, settings.weyl_cap, ctol).map_err(CliError::from_core)?;
    let det_ok = det_is_one(&wd.g, tol.max(1e-9));
    let relations = verify_wronskian_equation(&wd, tol.max(1e-9)).map_err(CliError::from_core)?;
    let conn_ok = wronskian_connection_check(&wd, tol.max(1e-9)).map_err(CliError::from_core)?;
    let gauss_ok = gauss_matches_construction(&wd, tol.max(1e-9)).map_err(CliError::from_core)?;
    let matches = minor_qq_match(&wd, &full, tol.max(1e-8)).map_err(CliError::from_core)?;
    let rel_ok = relations.iter().all(|r| r.holds);
    let match_ok = matches.iter().all(|m| m.passes()) && full.failures.is_empty();
    let passed = det_ok && rel_ok && conn_ok && gauss_ok && match_ok;
    let v = json!({
        "b_minus": matrix_to_json(&wd.b_minus),
        "n_plus": matrix_to_json(&wd.n_plus),
        "g": matrix_to_json(&wd.g),
        "resonant_entries": wd.resonant_entries.iter().map(|&(i, j)| json!([i + 1, j + 1])).collect::<Vec<_>>(),
        "det_is_one": det_ok,
        "relations": relations.iter().map(|r| json!({
            "node": r.node + 1,
            "relation": r.relation,
            "norm": num(r.norm),
            "holds": r.holds,
        })).collect::<Vec<_>>(),
        "connection_check": conn_ok,
        "gauss_check": gauss_ok,
        "minor_matches": matches.iter().map(|m| json!({
            "word": word_label(&m.word),
            "node": m.node + 1,
            "minor": ratfunc_to_json(&m.minor),
            "q_plus": poly_to_json(&m.q_plus),
            "polynomial": m.is_polynomial,
            "constant": m.constant.as_ref().map(scalar_to_json).unwrap_or(Value::Null),
            "passed": m.passes(),
        })).collect::<Vec<_>>(),
        "passed": passed,
    });
    Ok((v, passed))
}

fn wronskian_in<F: Scalar>(text: &str, settings: &Settings) -> Result<Outcome, CliError> {
    let sols = load_solutions::<F>(text)?;
    let tol = check_tol::<F>(settings.tol, None);
    if let Some(s) = sols.iter().find(|s| !s.cd.is_type_a()) {
        return Err(CliError::Refused(format!(
            "the G-Wronskian is built for type A only; got {}",
            s.cd.label()
        )));
    }
    let mut passed = !sols.is_empty();
    let mut out = Vec::new();
    let mut summary = Vec::new();
    for (k, sol) in sols.iter().enumerate() {
        let (mut v, ok) = wronskian_one(sol, settings, tol)?;
        v["index"] = json!(k + 1);
        passed &= ok;
        match v.get("error") {
            Some(e) => summary.push(format!("solution {}: B- construction failed: {}", k + 1, e)),
            None => {
                let n = v["minor_matches"].as_array().map_or(0, Vec::len);
                let good = v["minor_matches"].as_array().map_or(0, |a| a.iter().filter(|m| m["passed"] == true).count());
                summary.push(format!(
                    "solution {}: det {} relations {} minor matches {}/{}",
                    k + 1,
                    if v["det_is_one"] == true { "= 1" } else { "!= 1" },
                    if v["relations"].as_array().is_some_and(|a| a.iter().all(|r| r["holds"] == true)) { "hold" } else { "FAIL" },
                    good,
                    n
                ));
            }
        }
        out.push(v);
    }
    let report = json!({
        "kind": "wronskian",
        "version": FORMAT_VERSION,
        "mode": F::label(),
        "tol": tol,
        "wronskians": out,
        "passed": passed,
    });
    Ok(Outcome { report, passed, summary })
}

/// Every stage in turn on a scenario.
pub fn cmd_report(sc: &Scenario, settings: &Settings) -> Result<Outcome, CliError> {
    let mut settings = settings.clone();
    settings.mode = Some(settings.mode.unwrap_or(sc.mode));
    if settings.tol.is_none() {
        settings.tol = sc.tol;
    }
    let solve = cmd_solve(sc, &settings)?;
    let solutions_text = solve.to_json_string();
    let verify = cmd_verify(&solutions_text, &settings)?;
    let orbit = cmd_orbit(&solutions_text, &settings)?;
    let wronskian = if sc.cd.is_type_a() && solve.passed {
        Some(cmd_wronskian(&solutions_text, &settings)?)
    } else {
        None
    };
    let passed = solve.passed && verify.passed && orbit.passed && wronskian.as_ref().is_none_or(|w| w.passed);
    let mut summary = Vec::new();
    for (name, o) in [("solve", Some(&solve)), ("verify", Some(&verify)), ("orbit", Some(&orbit)), ("wronskian", wronskian.as_ref())] {
        match o {
            Some(o) => {
                summary.push(format!("[{}] {}", if o.passed { "pass" } else { "FAIL" }, name));
                summary.extend(o.summary.iter().map(|l| format!("    {l}")));
            }
            None => summary.push(format!("[skip] {name}")),
        }
    }
    let report = json!({
        "kind": "report",
        "version": FORMAT_VERSION,
        "mode": solve.report["mode"],
        "solve": solve.report,
        "verify": verify.report,
        "orbit": orbit.report,
        "wronskian": wronskian.map(|w| w.report).unwrap_or(Value::Null),
        "passed": passed,
    });
    Ok(Outcome { report, passed, summary })
}
