use std::f64::consts::PI;

use anyhow::Result;
use rsr_core::abelmono::{
    eta_case, homotopy_deviation, jacobian_rank, locus_scan, match_y, monodromies_with, ChiChoice,
    ConnectionParams, JacobianOptions, LocusRow, LocusTable, MatchOptions, SweepOptions, TorusPath,
};
use rsr_core::charvar::{
    abelianize, classify_real, eta_locus_residual, eta_locus_y, fricke_sphere_residual, fricke_torus_residual,
    genus_of_weight, lift_traces, reconstruct_rep, solve_z, RealClass, SphereTraceCoords, TraceCoords,
    Weight,
};
use rsr_core::covering::{covering_triviality_check, SignChoice};
use rsr_core::dodeca::verify_dodeca;
use rsr_core::lorentz::{dihedral_data, lift_check, Tetrahedron};
use rsr_core::spingraft::{line_holonomy, Curve, GraftState, SpinClass};
use rsr_core::C64;
use serde_json::{json, Map, Value};

use crate::args::{
    ChiArg, CharvarOp, Command, CoveringOp, Format, JacobianArgs, LocusArgs, LorentzOp, MatchArgs, MonodromyArgs,
    SpinArgs, Surface, VerifyTarget,
};
use crate::config::RunConfig;
use crate::error::InputError;
use crate::output::{dodeca_trace, emit_locus_svg, report, to_csv, to_json, to_text};

pub struct Outcome {
    pub body: String,
    pub passed: bool,
    pub warnings: Vec<String>,
}

impl Outcome {
    fn new(body: String, passed: bool) -> Self {
        Self { body, passed, warnings: Vec::new() }
    }
}

fn unsupported(cfg: &RunConfig, verb: &str) -> InputError {
    InputError::new("format", format!("{verb} does not support --format {}", cfg.format.name()))
}

fn render(cfg: &RunConfig, verb: &str, v: &Value, passed: bool) -> Result<Outcome> {
    let body = match cfg.format {
        Format::Json => to_json(v),
        Format::Text => to_text(v),
        _ => return Err(unsupported(cfg, verb).into()),
    };
    Ok(Outcome::new(body, passed))
}

fn torus_r(s: &str) -> Result<f64> {
    if s.contains('/') {
        return Ok(Weight::parse_torus(s, false)?.torus_weight());
    }
    let r: f64 = s.trim().parse().map_err(|_| InputError::new("weight", format!("'{s}' is not a weight")))?;
    if !(r > 0.0 && r < 0.5) {
        return Err(InputError::new("weight", format!("r = {r} outside (0, 1/2)")).into());
    }
    Ok(r)
}

fn positive(name: &str, v: f64) -> Result<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(InputError::new("params", format!("{name} = {v} must be positive")).into())
    }
}

fn weight_json(w: &Weight) -> Value {
    let (n, d) = w.torus_fraction();
    json!({ "sphere": w.to_string(), "torus": format!("{n}/{d}"), "r": w.torus_weight(), "r_tilde": w.sphere_weight() })
}

fn coords(c: &[C64; 3]) -> TraceCoords {
    TraceCoords::new(c[0], c[1], c[2])
}

pub fn run(cmd: &Command, cfg: &RunConfig) -> Result<Outcome> {
    match cmd {
        Command::Verify { target } => verify(target, cfg),
        Command::Charvar { op } => charvar(op, cfg),
        Command::Lorentz { op: LorentzOp::Angles } => lorentz_angles(cfg),
        Command::Covering { op } => covering(op, cfg),
        Command::Monodromy(a) => monodromy(a, cfg),
        Command::Locus(a) => locus(a, cfg),
        Command::Match(a) => matching(a, cfg),
        Command::Jacobian(a) => jacobian(a, cfg),
        Command::Spin(a) => spin(a, cfg),
    }
}

fn verify(target: &VerifyTarget, cfg: &RunConfig) -> Result<Outcome> {
    let VerifyTarget::Dodeca { tol, json } = target;
    let mut cfg = cfg.clone();
    if let Some(t) = tol {
        cfg.tolerances.tol_alg = positive("tol", *t)?;
    }
    if *json {
        cfg.format = Format::Json;
    }
    let rep = verify_dodeca(cfg.tolerances.tol_alg);
    let residuals: Map<String, Value> = rep.checks.iter().map(|c| (c.name.clone(), json!(c.residual))).collect();
    let v = report("verify dodeca", rep.passed, &cfg.tolerances, Value::Object(residuals), &rep);
    render(&cfg, "verify", &v, rep.passed)
}

fn charvar(op: &CharvarOp, cfg: &RunConfig) -> Result<Outcome> {
    let tol = cfg.tolerances;
    let v = match op {
        CharvarOp::Residual { surface, coords: c, weight } => {
            let (w, res) = match surface {
                Surface::Torus => {
                    let w = Weight::parse_torus(&weight.weight, weight.normalize_weight)?;
                    (w, fricke_torus_residual(&coords(c), &w))
                }
                Surface::Sphere => {
                    let w = Weight::parse_sphere(&weight.weight, weight.normalize_weight)?;
                    (w, fricke_sphere_residual(&SphereTraceCoords::new(c[0], c[1], c[2], w.mu())))
                }
            };
            let on = res.norm() <= tol.tol_char;
            let surface = if *surface == Surface::Torus { "torus" } else { "sphere" };
            report(
                "charvar residual",
                true,
                &tol,
                json!({ "fricke": res }),
                json!({ "surface": surface, "coords": c, "weight": weight_json(&w), "residual": res, "on_variety": on }),
            )
        }
        CharvarOp::Abelianize { coords: c, weight } => {
            let w = Weight::parse_torus(&weight.weight, weight.normalize_weight)?;
            let t = coords(c);
            let s = abelianize(&t, &w);
            let torus = fricke_torus_residual(&t, &w);
            let sphere = fricke_sphere_residual(&s);
            let ok = torus.norm() <= tol.tol_char && sphere.norm() <= tol.tol_char;
            report(
                "charvar abelianize",
                ok,
                &tol,
                json!({ "torus_fricke": torus, "sphere_fricke": sphere }),
                json!({ "weight": weight_json(&w), "torus": t, "sphere": s }),
            )
        }
        CharvarOp::Lift { coords: c, weight } => {
            let w = Weight::parse_sphere(&weight.weight, weight.normalize_weight)?;
            let s = SphereTraceCoords::new(c[0], c[1], c[2], w.mu());
            let lifts = lift_traces(&s, &w, tol.tol_char)?;
            let res: Vec<C64> = lifts.iter().map(|t| fricke_torus_residual(t, &w)).collect();
            report(
                "charvar lift",
                !lifts.is_empty(),
                &tol,
                json!({ "sphere_fricke": fricke_sphere_residual(&s), "torus_fricke": res }),
                json!({ "weight": weight_json(&w), "sphere": s, "lifts": lifts }),
            )
        }
        CharvarOp::SolveZ { x, y, weight } => {
            let w = Weight::parse_torus(&weight.weight, weight.normalize_weight)?;
            let (z1, z2) = solve_z(*x, *y, &w);
            let r1 = fricke_torus_residual(&TraceCoords::new(*x, *y, z1), &w);
            let r2 = fricke_torus_residual(&TraceCoords::new(*x, *y, z2), &w);
            report(
                "charvar solve-z",
                r1.norm().max(r2.norm()) <= tol.tol_char,
                &tol,
                json!({ "z1": r1, "z2": r2 }),
                json!({ "weight": weight_json(&w), "x": x, "y": y, "z": [z1, z2] }),
            )
        }
        CharvarOp::Classify { coords: c, weight } => {
            let w = Weight::parse_torus(&weight.weight, weight.normalize_weight)?;
            let t = coords(c);
            let class = classify_real(&t, &w, tol.tol_char)?;
            report(
                "charvar classify",
                true,
                &tol,
                json!({ "fricke": fricke_torus_residual(&t, &w), "max_imag": t.max_imag() }),
                json!({ "weight": weight_json(&w), "coords": t, "class": class }),
            )
        }
        CharvarOp::Reconstruct { coords: c } => {
            let t = coords(c);
            let rep = reconstruct_rep(&t, tol.tol_alg)?;
            let back = rep.traces();
            let dev = (back.x - t.x).norm().max((back.y - t.y).norm()).max((back.z - t.z).norm());
            report(
                "charvar reconstruct",
                dev <= tol.tol_alg,
                &tol,
                json!({ "trace_roundtrip": dev }),
                json!({ "coords": t, "X": rep.x, "Y": rep.y, "commutator_trace": rep.commutator().trace() }),
            )
        }
        CharvarOp::Genus { weight } => {
            let w = Weight::parse_sphere(&weight.weight, weight.normalize_weight)?;
            report(
                "charvar genus",
                true,
                &tol,
                json!({}),
                json!({ "weight": weight_json(&w), "order": w.order(), "genus": genus_of_weight(&w) }),
            )
        }
        CharvarOp::Eta { x, y, weight } => {
            let w = Weight::parse_torus(&weight.weight, weight.normalize_weight)?;
            let branch = eta_locus_y(*x, &w);
            let res = y.map(|y| eta_locus_residual(*x, y, &w));
            report(
                "charvar eta",
                true,
                &tol,
                json!({ "eta": res }),
                json!({ "weight": weight_json(&w), "x": x, "y": y, "locus_y": branch }),
            )
        }
    };
    let passed = v["passed"].as_bool().unwrap_or(false);
    render(cfg, "charvar", &v, passed)
}

fn lorentz_angles(cfg: &RunConfig) -> Result<Outcome> {
    let tol = cfg.tolerances;
    let t = Tetrahedron::canonical();
    t.validate(tol.tol_alg)?;
    let cos = dihedral_data(&t);
    let mut expected = [0.0, 0.0, 0.0, (PI / 5.0).cos(), (PI / 3.0).cos(), (PI / 4.0).cos()];
    expected.sort_by(f64::total_cmp);
    let angle_dev = cos.iter().zip(expected).map(|(c, e)| (c - e).abs()).fold(0.0, f64::max);
    let d = rsr_core::dodeca::build_dodeca();
    let mut lifts = Map::new();
    for (m, n, g) in d.generators() {
        lifts.insert(format!("g{m}{n}"), json!(lift_check(&g, &t.reflection_pair(m, n), tol.tol_char)?));
    }
    let lift_max = lifts.values().filter_map(Value::as_f64).fold(0.0, f64::max);
    let passed = angle_dev <= tol.tol_alg && lift_max <= tol.tol_char;
    let angles: Vec<f64> = cos.iter().map(|c| c.clamp(-1.0, 1.0).acos() / PI).collect();
    let v = report(
        "lorentz angles",
        passed,
        &tol,
        json!({ "dihedral_cosines": angle_dev, "lift_check": lifts }),
        json!({ "cosines": cos, "angles_over_pi": angles, "expected_cosines": expected }),
    );
    render(cfg, "lorentz", &v, passed)
}

fn admissible_weights(max_order: i64) -> Vec<Weight> {
    let mut out = Vec::new();
    for k in 2..=max_order {
        for l in 1..k {
            if let Ok(w) = Weight::sphere(l, k) {
                if w.order() == k && w.numerator() == l {
                    out.push(w);
                }
            }
        }
    }
    out
}

fn covering(op: &CoveringOp, cfg: &RunConfig) -> Result<Outcome> {
    let CoveringOp::Check { weight, signs, max_order, normalize_weight } = op;
    let tol = cfg.tolerances;
    let s: SignChoice = signs.parse()?;
    let weights = match (weight, max_order) {
        (Some(w), None) => vec![Weight::parse_sphere(w, *normalize_weight)?],
        (None, Some(k)) if *k >= 2 => admissible_weights(*k),
        (None, Some(k)) => return Err(InputError::new("params", format!("max-order {k} must be at least 2")).into()),
        _ => return Err(InputError::new("usage", "give exactly one of --weight or --max-order").into()),
    };
    let mut results = Vec::new();
    let mut residuals = Map::new();
    let mut passed = true;
    for w in &weights {
        let rep = covering_triviality_check(w, s, tol.tol_alg);
        passed &= rep.passed;
        residuals.insert(w.to_string(), json!(rep.max_defect));
        results.push(json!({ "weight": weight_json(w), "genus": genus_of_weight(w), "report": rep }));
    }
    let v = report(
        "covering check",
        passed,
        &tol,
        Value::Object(residuals),
        json!({ "signs": s.to_string(), "checks": results }),
    );
    render(cfg, "covering", &v, passed)
}

fn monodromy(a: &MonodromyArgs, cfg: &RunConfig) -> Result<Outcome> {
    let tol = cfg.tolerances;
    let p = ConnectionParams::new(a.a, a.chi, torus_r(&a.r)?, a.tau);
    p.validate()?;
    let opts = cfg.transport();
    let m = monodromies_with(&p, &opts)?;
    let homotopy = if a.homotopy { Some(homotopy_deviation(&p, &opts)?) } else { None };
    let passed = m.passes(tol.tol_mono, tol.tol_char) && homotopy.is_none_or(|h| h <= tol.tol_mono);
    if cfg.format == Format::Csv {
        let row = LocusRow {
            t: 0.0,
            a: p.a,
            x: m.x,
            y: m.y,
            z: m.z,
            eta_residual: eta_locus_residual(m.x.re, m.y.re, p.r),
            real: false,
            refined: false,
        };
        return Ok(Outcome::new(to_csv([&row])?, passed));
    }
    let mut residuals = serde_json::to_value(m.residuals)?;
    residuals["homotopy_deviation"] = json!(homotopy);
    let v = report(
        "monodromy",
        passed,
        &tol,
        residuals,
        json!({ "monodromy": m, "eta_case": eta_case(&p) }),
    );
    render(cfg, "monodromy", &v, passed)
}

/// 16 moduli spaced geometrically over [0.6, 6].
pub fn default_taus() -> Vec<f64> {
    let n = 16;
    (0..n).map(|i| 0.6 * 10f64.powf(i as f64 / (n - 1) as f64)).collect()
}

fn chi_choice(c: ChiArg) -> ChiChoice {
    match c {
        ChiArg::Real => ChiChoice::Real,
        ChiArg::Imaginary => ChiChoice::Imaginary,
    }
}

fn locus(a: &LocusArgs, cfg: &RunConfig) -> Result<Outcome> {
    let tol = cfg.tolerances;
    let r = torus_r(&a.r)?;
    let taus = match (&a.tau, &a.taus) {
        (Some(t), _) => vec![*t],
        (None, Some(ts)) if !ts.is_empty() => ts.clone(),
        _ => default_taus(),
    };
    for &t in &taus {
        positive("tau", t)?;
    }
    if a.samples < 2 {
        return Err(InputError::new("params", "at least 2 samples are needed").into());
    }
    let opts = SweepOptions { transport: cfg.transport(), tol_mono: tol.tol_mono };
    let mut tables = locus_scan(r, chi_choice(a.chi), &taus, a.range, a.samples, &opts)?;
    if a.real_only {
        for t in &mut tables {
            t.rows.retain(|row| row.real);
        }
    }

    let summary = locus_summary(&tables, r);
    let real_points = summary["real_points"].as_u64().unwrap_or(0);
    let max_eta = summary["max_eta_residual"].as_f64().unwrap_or(0.0);
    let on_locus = max_eta <= 1e-4;
    let mut warnings = Vec::new();
    if real_points == 0 {
        warnings.push("W:no-locus-points:no sampled row lies on the real locus; overlay only".to_string());
    }
    let passed = real_points == 0 || on_locus;

    let body = match cfg.format {
        Format::Csv => to_csv(tables.iter().flat_map(|t| t.rows.iter()))?,
        Format::Svg => emit_locus_svg(&tables, r)?,
        Format::Json => to_json(&locus_report(&tables, summary, passed, cfg)),
        Format::Text => to_text(&report("locus", passed, &tol, json!({ "max_eta_residual": max_eta }), summary)),
    };
    Ok(Outcome { body, passed, warnings })
}

fn locus_report(tables: &[LocusTable], summary: Value, passed: bool, cfg: &RunConfig) -> Value {
    let max_eta = summary["max_eta_residual"].clone();
    let mut v = report("locus", passed, &cfg.tolerances, json!({ "max_eta_residual": max_eta }), tables);
    v["summary"] = summary;
    v
}

fn locus_summary(tables: &[LocusTable], r: f64) -> Value {
    let real: Vec<&LocusRow> = tables.iter().flat_map(|t| t.real_rows()).collect();
    let max_eta = real.iter().map(|row| row.eta_residual.abs()).fold(0.0, f64::max);
    let d = dodeca_trace();
    let nearest = real.iter().map(|row| (row.x.re - d).hypot(row.y.re - d)).fold(f64::INFINITY, f64::min);
    // Points on the x, y > 2 branch on either side of the symmetric point.
    let branch: Vec<f64> = real.iter().filter(|row| row.x.re > 2.0 && row.y.re > 2.0).map(|row| row.x.re).collect();
    let straddles = branch.iter().any(|&x| x < d) && branch.iter().any(|&x| x > d);
    let overlay_at_symmetric = eta_locus_y(d, r).map(|y| (y - d).abs());
    json!({
        "r": r,
        "taus": tables.iter().map(|t| t.tau).collect::<Vec<_>>(),
        "rows": tables.iter().map(|t| t.rows.len()).sum::<usize>(),
        "real_points": real.len(),
        "max_eta_residual": max_eta,
        "nearest_to_symmetric_point": if nearest.is_finite() { json!(nearest) } else { Value::Null },
        "branch_straddles_symmetric_point": straddles,
        "overlay_symmetric_deviation": overlay_at_symmetric,
    })
}

fn matching(a: &MatchArgs, cfg: &RunConfig) -> Result<Outcome> {
    let tol = cfg.tolerances;
    let r = torus_r(&a.r)?;
    let tau = positive("tau", a.tau)?;
    let choice = chi_choice(a.chi);
    let chi0 = choice.chi0(tau);
    let bracket = a.bracket.unwrap_or(match choice {
        ChiChoice::Real => (-PI / (4.0 * tau), -PI / (4.0 * tau) + 1.6),
        ChiChoice::Imaginary => (-0.8, 0.8),
    });
    let opts = MatchOptions {
        transport: cfg.transport(),
        tol_root: tol.tol_root,
        max_evaluations: a.max_evals,
        ..MatchOptions::default()
    };
    let m = match_y(a.y, r, tau, chi0, bracket, &opts)?;
    let t = m.monodromy.traces();
    let class = classify_real(&t, r, tol.tol_mono);
    let eta = eta_locus_residual(t.x.re, t.y.re, r);
    let sl2r = matches!(class, Ok(RealClass::Sl2r(_)));
    let passed = m.residual <= tol.tol_root && sl2r && eta.abs() <= 1e-4;
    let class_json = match &class {
        Ok(c) => json!(c),
        Err(e) => json!({ "error": e.to_string() }),
    };
    let v = report(
        "match",
        passed,
        &tol,
        json!({ "y": m.residual, "eta": eta, "monodromy": m.monodromy.residuals }),
        json!({ "target": a.y, "tau": tau, "chi0": chi0, "bracket": bracket, "match": m, "class": class_json }),
    );
    render(cfg, "match", &v, passed)
}

fn jacobian(a: &JacobianArgs, cfg: &RunConfig) -> Result<Outcome> {
    let tol = cfg.tolerances;
    let r = torus_r(&a.r)?;
    let tau = positive("tau", a.tau)?;
    let opts = JacobianOptions { transport: cfg.transport(), h: positive("h", a.h)?, tol_mono: tol.tol_mono };
    let rep = jacobian_rank(a.a, tau, r, &opts)?;
    let passed = rep.rank == 2 && rep.stable();
    let v = report(
        "jacobian",
        passed,
        &tol,
        json!({ "relative_change": rep.relative_change, "sigma_min": rep.singular_values[1] }),
        rep,
    );
    render(cfg, "jacobian", &v, passed)
}

fn spin_state(s: &GraftState) -> (Value, f64) {
    let chi = s.chi();
    let hx = line_holonomy(chi, &TorusPath::gamma_x(s.tau));
    let hy = line_holonomy(chi, &TorusPath::gamma_y(s.tau));
    let dev = (hx - s.spin.eps_x as f64).norm().max((hy - s.spin.eps_y as f64).norm());
    let q = [s.spin.q(true, false), s.spin.q(false, true), s.spin.q(true, true)];
    (
        json!({
            "spin": s.spin.to_string(),
            "tau": s.tau,
            "grafts": [s.n_x, s.n_y],
            "chi": chi,
            "holonomy": [hx, hy],
            "q": q,
            "arf": s.spin.arf(),
        }),
        dev,
    )
}

fn spin(a: &SpinArgs, cfg: &RunConfig) -> Result<Outcome> {
    let tol = cfg.tolerances;
    let start: SpinClass = a.state.parse()?;
    let seq = Curve::parse_sequence(&a.graft)?;
    let mut state = GraftState::new(a.tau, start)?;
    let mut states = Vec::new();
    let mut max_dev: f64 = 0.0;
    let (v0, d0) = spin_state(&state);
    states.push(v0);
    max_dev = max_dev.max(d0);
    for c in seq {
        state = state.graft(c, a.ell)?;
        let (v, d) = spin_state(&state);
        states.push(v);
        max_dev = max_dev.max(d);
    }
    let passed = max_dev <= 1e-10;
    let v = report("spin", passed, &tol, json!({ "holonomy": max_dev }), json!({ "ell": a.ell, "states": states }));
    render(cfg, "spin", &v, passed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_and_moduli() {
        assert!((torus_r("1/10").unwrap() - 0.1).abs() < 1e-15);
        assert!((torus_r("0.25").unwrap() - 0.25).abs() < 1e-15);
        assert!(torus_r("0.7").is_err());
        assert!(torus_r("x").is_err());
        let taus = default_taus();
        assert_eq!(taus.len(), 16);
        assert!((taus[0] - 0.6).abs() < 1e-12 && (taus[15] - 6.0).abs() < 1e-12);
        assert_eq!(admissible_weights(5).iter().map(|w| w.to_string()).collect::<Vec<_>>(), ["1/3", "2/5"]);
    }
}
