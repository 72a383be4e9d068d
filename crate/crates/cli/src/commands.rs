use std::io::{Read, Write};
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use qcapax_core::capacity::{
    capacity_bounds, capacity_bounds_gadc, crossing_windows, trajectory as sweep,
};
use qcapax_core::channel::{is_cp, non_unitality, stationary_state};
use qcapax_core::dynamics::{
    convolution_identity_check, mixture_equivalence, volterra_solve, GadcFamily, Profile,
    RecipeSpec,
};
use qcapax_core::oracle::{ce_bruteforce, chi_bruteforce};
use qcapax_core::{gadc, make_channel, Error, PhaseCovariantChannel};

use crate::format::{sink, time, value};
use crate::{
    CapacityArgs, CliError, CrossArgs, KernelArgs, Method, MixcheckArgs, OutputFormat,
    ReportFormat, RunConfig, TrajectoryArgs, VerifyArgs,
};

type CliResult = Result<(), CliError>;

const VERIFY_CHI_TOL: f64 = 5e-3;
const VERIFY_CE_TOL: f64 = 1e-4;

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Invalid(msg.into())
}

fn load_profile(spec: &str) -> Result<Profile, CliError> {
    match spec {
        "exp" => Ok(Profile::ExpDecay),
        "cos" => Ok(Profile::Cosine),
        path => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| invalid(format!("cannot read profile {path:?}: {e}")))?;
            parse_tabulated(&text).map_err(|e| invalid(format!("profile {path:?}: {e}")))
        }
    }
}

/// Two-column `t,lambda` samples on a uniform grid starting at `t = 0`.
/// Blank lines, `#` comments and a non-numeric header are skipped.
pub fn parse_tabulated(text: &str) -> Result<Profile, String> {
    let mut ts = Vec::new();
    let mut vals = Vec::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let cols: Vec<&str> = line.split(',').map(str::trim).collect();
        let parsed: Option<Vec<f64>> = cols.iter().map(|c| c.parse().ok()).collect();
        match parsed {
            Some(v) if v.len() == 2 => {
                ts.push(v[0]);
                vals.push(v[1]);
            }
            None if ts.is_empty() => continue,
            _ => return Err(format!("line {}: expected `t,lambda`", no + 1)),
        }
    }
    if ts.len() < 3 {
        return Err("need at least 3 samples".into());
    }
    let dt = ts[1] - ts[0];
    if ts[0] != 0.0 || !(dt > 0.0) {
        return Err("grid must start at t = 0 and increase".into());
    }
    for (i, &t) in ts.iter().enumerate() {
        if (t - i as f64 * dt).abs() > 1e-6 * dt.max(t) {
            return Err(format!("grid is not uniform at t = {t}"));
        }
    }
    Profile::tabulated(dt, vals).map_err(|e| e.to_string())
}

fn family(run: &RunConfig) -> Result<GadcFamily, CliError> {
    if !(run.t_max > 0.0) || !run.t_max.is_finite() {
        return Err(invalid(format!(
            "--t-max must be positive, got {}",
            run.t_max
        )));
    }
    if !(run.dt > 0.0) || run.dt > run.t_max {
        return Err(invalid(format!(
            "--dt must lie in (0, t-max], got {}",
            run.dt
        )));
    }
    Ok(GadcFamily::new(load_profile(&run.profile)?, run.p)?)
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct CapacityReport {
    lambda1: f64,
    lambda3: f64,
    lambda_star: f64,
    method: &'static str,
    p: Option<f64>,
    chi: f64,
    c_e: f64,
    non_unitality: Option<f64>,
    stationary_z: Option<f64>,
    cp_translation_margin: f64,
    cp_ellipsoid_margin: f64,
    off_axis_better: Option<bool>,
}

fn capacity_channel(a: &CapacityArgs) -> Result<PhaseCovariantChannel, CliError> {
    let ch = match (a.lambda, a.lambda1, a.lambda3, a.lambda_star) {
        (Some(l), None, None, None) => gadc(l, a.p.unwrap_or(0.0))?,
        (None, Some(l1), Some(l3), Some(ls)) => make_channel(l1, l3, ls)?,
        _ => {
            return Err(invalid(
                "give either --lambda [--p] or all of --lambda1, --lambda3, --lambda-star",
            ))
        }
    };
    ch.require_valid()?;
    Ok(ch)
}

pub fn capacity(a: &CapacityArgs) -> CliResult {
    let ch = capacity_channel(a)?;
    let [l1, l3, ls] = ch.params();
    let (_, margins) = is_cp(&ch);
    let mut report = CapacityReport {
        lambda1: l1,
        lambda3: l3,
        lambda_star: ls,
        method: "formula",
        p: None,
        chi: f64::NAN,
        c_e: f64::NAN,
        non_unitality: non_unitality(&ch).ok(),
        stationary_z: stationary_state(&ch).ok().map(|r| r.to_bloch().z),
        cp_translation_margin: margins.translation,
        cp_ellipsoid_margin: margins.ellipsoid,
        off_axis_better: None,
    };
    match a.method {
        Method::Formula => {
            let b = capacity_bounds(&ch).map_err(|e| match e {
                Error::NotGadc(msg) => invalid(format!(
                    "{msg}; the closed formulas cover the GADC family only, use --method oracle"
                )),
                other => other.into(),
            })?;
            report.p = Some(b.p);
            report.chi = b.lower;
            report.c_e = b.upper;
            if b.low_confidence {
                eprintln!("warning: Holevo root search was ambiguous");
            }
        }
        Method::Oracle => {
            let (chi, ce) = rayon::join(
                || chi_bruteforce(&ch, a.max_states, a.seed),
                || ce_bruteforce(&ch, a.seed),
            );
            let ce = ce?;
            report.method = "oracle";
            report.chi = chi?.value;
            report.c_e = ce.value;
            report.off_axis_better = Some(ce.off_axis_better());
        }
    }
    let mut out = sink(None)?;
    match a.format {
        ReportFormat::Json => writeln!(out, "{}", serde_json::to_string_pretty(&report)?)?,
        ReportFormat::Text => {
            let opt = |x: Option<f64>| x.map_or("undefined".to_string(), value);
            writeln!(
                out,
                "channel      ({}, {}, {})",
                value(l1),
                value(l3),
                value(ls)
            )?;
            writeln!(out, "method       {}", report.method)?;
            if let Some(p) = report.p {
                writeln!(out, "p            {}", value(p))?;
            }
            writeln!(out, "chi          {}", value(report.chi))?;
            writeln!(out, "c_e          {}", value(report.c_e))?;
            writeln!(out, "NU           {}", opt(report.non_unitality))?;
            writeln!(out, "stationary_z {}", opt(report.stationary_z))?;
            writeln!(
                out,
                "cp_margins   {} {}",
                value(margins.translation),
                value(margins.ellipsoid)
            )?;
            if let Some(off) = report.off_axis_better {
                writeln!(out, "off_axis     {off}")?;
            }
        }
    }
    out.flush()?;
    Ok(())
}

pub fn trajectory(a: &TrajectoryArgs) -> CliResult {
    let fam = family(&a.run)?;
    if a.steps < 2 {
        return Err(invalid(format!(
            "--steps must be at least 2, got {}",
            a.steps
        )));
    }
    let rows = sweep(&fam, a.run.t_max, a.steps)?;
    for r in rows.iter().filter(|r| !r.flags.is_empty()) {
        eprintln!("warning: t = {}: {}", time(r.t), r.flags.join("; "));
    }
    let mut out = sink(a.output.as_deref())?;
    match a.format {
        OutputFormat::Json => writeln!(out, "{}", serde_json::to_string(&rows)?)?,
        OutputFormat::Csv => {
            writeln!(out, "t,lambda,p,chi,c_e,chi_unital,c_e_unital")?;
            for r in &rows {
                writeln!(
                    out,
                    "{},{},{},{},{},{},{}",
                    time(r.t),
                    value(r.lambda),
                    value(r.p),
                    value(r.chi),
                    value(r.c_e),
                    value(r.chi_unital),
                    value(r.c_e_unital)
                )?;
            }
        }
    }
    out.flush()?;
    Ok(())
}

fn read_recipe(path: &Path) -> Result<String, CliError> {
    if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        std::fs::read_to_string(path)
            .map_err(|e| invalid(format!("cannot read recipe {path:?}: {e}")))
    }
}

pub fn kernel(a: &KernelArgs) -> CliResult {
    if !(a.t_max > 0.0) || !(a.dt > 0.0) || a.dt > a.t_max {
        return Err(invalid("need t-max > 0 and 0 < dt <= t-max"));
    }
    if a.stride == 0 {
        return Err(invalid("--stride must be positive"));
    }
    let recipe = RecipeSpec::from_json(&read_recipe(&a.recipe)?)?.build(a.t_max, a.dt)?;

    let mut report: Vec<String> = recipe
        .checks
        .iter()
        .map(|c| {
            let at = c
                .worst_t
                .map_or(String::new(), |t| format!(" at t = {}", time(t)));
            format!(
                "check {:<24} {}  worst margin {}{at}",
                c.name,
                if c.passed { "pass" } else { "FAIL" },
                value(c.worst_margin)
            )
        })
        .collect();
    report.push(format!("admissible {}", recipe.admissible()));
    let to_stderr = a.solve && a.output.is_none();
    let emit = |lines: &[String]| {
        for l in lines {
            if to_stderr {
                eprintln!("{l}");
            } else {
                println!("{l}");
            }
        }
    };
    emit(&report);
    if !recipe.admissible() {
        return Err(invalid("recipe violates the admissibility conditions"));
    }
    if !a.solve {
        return Ok(());
    }

    let traj = volterra_solve(&recipe.kernel, a.t_max, a.dt)?;
    let mut out = sink(a.output.as_deref())?;
    writeln!(
        out,
        "t,lambda1,lambda3,lambda_star,err_lambda1,err_lambda3,err_lambda_star"
    )?;
    let mut max_err: f64 = 0.0;
    for i in 0..traj.len() {
        let (t, got) = (traj.times[i], traj.at(i));
        let want = recipe.closed_form.eigenvalues(t);
        let err = [got[0] - want[0], got[1] - want[1], got[2] - want[2]];
        max_err = err.iter().fold(max_err, |m, e| m.max(e.abs()));
        if i % a.stride == 0 || i + 1 == traj.len() {
            writeln!(
                out,
                "{},{},{},{},{},{},{}",
                time(t),
                value(got[0]),
                value(got[1]),
                value(got[2]),
                value(err[0]),
                value(err[1]),
                value(err[2])
            )?;
        }
    }
    out.flush()?;
    emit(&[
        format!("max closed-form error {}", value(max_err)),
        format!(
            "convolution residual {}",
            value(convolution_identity_check(&recipe.kernel, &traj))
        ),
    ]);
    Ok(())
}

fn parse_grid(points: &[String]) -> Result<Vec<(f64, f64)>, CliError> {
    if points.is_empty() {
        let lambdas = (1..=9).map(|i| i as f64 / 10.0);
        return Ok(lambdas
            .flat_map(|l| [0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0].map(|p| (l, p)))
            .collect());
    }
    points
        .iter()
        .map(|s| {
            let (l, p) = s
                .split_once(':')
                .ok_or_else(|| invalid(format!("grid point {s:?} is not `lambda:p`")))?;
            let num = |x: &str| {
                x.trim()
                    .parse::<f64>()
                    .map_err(|_| invalid(format!("grid point {s:?} is not numeric")))
            };
            Ok((num(l)?, num(p)?))
        })
        .collect()
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct VerifyRow {
    lambda: f64,
    p: f64,
    chi_formula: f64,
    chi_oracle: f64,
    d_chi: f64,
    c_e_formula: f64,
    c_e_oracle: f64,
    d_c_e: f64,
}

pub fn verify(a: &VerifyArgs) -> CliResult {
    let grid = parse_grid(&a.grid)?;
    for &(l, p) in &grid {
        gadc(l, p)?;
    }
    let rows: Vec<VerifyRow> = grid
        .par_iter()
        .map(|&(lambda, p)| -> Result<VerifyRow, Error> {
            let ch = gadc(lambda, p)?;
            let bounds = capacity_bounds_gadc(lambda, p)?;
            let chi = chi_bruteforce(&ch, a.max_states, a.seed)?.value;
            let ce = ce_bruteforce(&ch, a.seed)?.value;
            Ok(VerifyRow {
                lambda,
                p,
                chi_formula: bounds.lower,
                chi_oracle: chi,
                d_chi: (bounds.lower - chi).abs(),
                c_e_formula: bounds.upper,
                c_e_oracle: ce,
                d_c_e: (bounds.upper - ce).abs(),
            })
        })
        .collect::<Result<_, _>>()?;

    let mut out = sink(a.output.as_deref())?;
    match a.format {
        OutputFormat::Json => writeln!(out, "{}", serde_json::to_string(&rows)?)?,
        OutputFormat::Csv => {
            writeln!(
                out,
                "lambda,p,chi_formula,chi_oracle,d_chi,c_e_formula,c_e_oracle,d_c_e"
            )?;
            for r in &rows {
                writeln!(
                    out,
                    "{},{},{},{},{},{},{},{}",
                    value(r.lambda),
                    value(r.p),
                    value(r.chi_formula),
                    value(r.chi_oracle),
                    value(r.d_chi),
                    value(r.c_e_formula),
                    value(r.c_e_oracle),
                    value(r.d_c_e)
                )?;
            }
        }
    }
    out.flush()?;
    let worst_chi = rows.iter().map(|r| r.d_chi).fold(0.0, f64::max);
    let worst_ce = rows.iter().map(|r| r.d_c_e).fold(0.0, f64::max);
    eprintln!(
        "max d_chi {} (tol {VERIFY_CHI_TOL:e}), max d_c_e {} (tol {VERIFY_CE_TOL:e})",
        value(worst_chi),
        value(worst_ce)
    );
    if worst_chi <= VERIFY_CHI_TOL && worst_ce <= VERIFY_CE_TOL {
        Ok(())
    } else {
        Err(CliError::Runtime(
            "formula and oracle disagree beyond tolerance".into(),
        ))
    }
}

pub fn cross(a: &CrossArgs) -> CliResult {
    let fam = family(&a.run)?;
    if a.run.p == 0.0 {
        return Err(invalid("crossing search needs |p| > 0"));
    }
    let windows: Vec<[f64; 2]> = crossing_windows(&fam, a.run.t_max, a.run.dt)?
        .into_iter()
        .map(|w| [w.start, w.end])
        .collect();
    println!("{}", serde_json::to_string(&windows)?);
    Ok(())
}

pub fn mixcheck(a: &MixcheckArgs) -> CliResult {
    let fam = family(&a.run)?;
    let r = mixture_equivalence(&fam, a.run.t_max, a.run.dt)?;
    let limit = 100.0 * a.run.dt;
    let pass = r.max_deviation() < limit;
    println!(
        "{}",
        serde_json::to_string_pretty(&json!({
            "profile": fam.profile.name(),
            "p": fam.p,
            "tMax": a.run.t_max,
            "dt": a.run.dt,
            "mapVsGenerator": r.map_vs_generator,
            "mapVsKernel": r.map_vs_kernel,
            "generatorVsKernel": r.generator_vs_kernel,
            "maxDeviation": r.max_deviation(),
            "limit": limit,
            "pass": pass,
        }))?
    );
    if pass {
        Ok(())
    } else {
        Err(CliError::Runtime(format!(
            "route deviation {} exceeds {}",
            value(r.max_deviation()),
            value(limit)
        )))
    }
}
