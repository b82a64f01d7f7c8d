use std::path::Path;

use rayon::prelude::*;
use serde_json::{json, Value};
use sigma2::elliptic::{EllipticContext, EllipticCurveParams};
use sigma2::inversion::{rational_closed_form, rational_inversion};
use sigma2::sigma::DegenSigmaContext;
use sigma2::spectral::{real_family, Family};
use sigma2::strata::{classify, G2Params, Stratum};
use sigma2::verify::{run_criterion, suite_ids, CriterionReport, VerifyOptions};
use sigma2::{Error, NumericsConfig, C};

use crate::job::{Command, FamilyArg, Grid, JobSpec, Moduli};

pub const SCHEMA: &str = "sigma2/1";

pub enum Fail {
    Usage(String),
    Lib(Error),
    Io(String),
    /// Verification finished but some criteria are red; the report is still the result.
    Red(Value),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidInput(m) => Fail::Usage(m),
            e => Fail::Lib(e),
        }
    }
}

type Out = Result<Value, Fail>;

/// Exit code and JSON document for a job.
pub fn run(job: &JobSpec) -> (u8, Value) {
    let cfg = NumericsConfig {
        tol: job.cfg.tol,
        fd_step: job.cfg.fd_step,
        ..NumericsConfig::default()
    };
    let res = match &job.command {
        Command::Classify { lambda } => run_classify(lambda, &cfg),
        Command::Sigma {
            moduli,
            u,
            raw,
            grid,
        } => run_sigma(moduli, u, *raw, grid, &cfg),
        Command::Invert {
            moduli,
            big_u1,
            big_u3,
            rational_alpha,
        } => run_invert(moduli, big_u1, big_u3, rational_alpha.as_deref(), &cfg),
        Command::Potential {
            gamma,
            alpha,
            family,
            phi,
            points,
            csv,
        } => run_potential(gamma, alpha, *family, *phi, *points, csv.as_deref(), &cfg),
        Command::Periods { moduli } => run_periods(moduli, &cfg),
        Command::Verify {
            suite,
            seed,
            samples,
        } => run_verify(suite, *seed, *samples, &cfg),
    };
    let doc = |key: &str, v: Value| json!({ "schema": SCHEMA, "job": job, key: v });
    match res {
        Ok(v) => (0, doc("result", v)),
        Err(Fail::Red(v)) => (2, doc("result", v)),
        Err(Fail::Usage(m)) => (1, doc("error", json!({ "kind": "usage", "message": m }))),
        Err(Fail::Io(m)) => (2, doc("error", json!({ "kind": "io", "message": m }))),
        Err(Fail::Lib(e)) => {
            let code = if matches!(e, Error::AmbiguousClassification(_)) {
                3
            } else {
                2
            };
            (
                code,
                doc(
                    "error",
                    json!({ "kind": kind(&e), "message": e.to_string() }),
                ),
            )
        }
    }
}

fn kind(e: &Error) -> &'static str {
    match e {
        Error::DegenerateCurve(_) => "degenerate_curve",
        Error::NumericalFailure { .. } => "numerical_failure",
        Error::PoleAtArgument(_) => "pole_at_argument",
        Error::AmbiguousClassification(_) => "ambiguous_classification",
        Error::NotOnStratum(_) => "not_on_stratum",
        Error::SingularConfiguration(_) => "singular_configuration",
        Error::NotBranchPoint => "not_branch_point",
        Error::NotRealLattice => "not_real_lattice",
        Error::NotRealAlpha => "not_real_alpha",
        Error::InvalidInput(_) => "invalid_input",
    }
}

pub fn cj(z: C) -> Value {
    json!([z.re, z.im])
}

fn cjs<const N: usize>(zs: &[C; N]) -> Value {
    Value::Array(zs.iter().map(|z| cj(*z)).collect())
}

fn mat<const R: usize, const K: usize>(m: &[[C; K]; R]) -> Value {
    Value::Array(m.iter().map(cjs).collect())
}

/// `n` complex numbers from 2n reals.
fn complexes(v: &[f64], n: usize, what: &str) -> Result<Vec<C>, Fail> {
    if v.len() != 2 * n {
        return Err(Fail::Usage(format!(
            "{what} needs {} comma-separated reals, got {}",
            2 * n,
            v.len()
        )));
    }
    Ok(v.chunks(2).map(|p| C::new(p[0], p[1])).collect())
}

fn context(m: &Moduli, cfg: &NumericsConfig) -> Result<DegenSigmaContext, Fail> {
    if let Some(l0) = &m.lambda0 {
        let ab = complexes(l0, 2, "--lambda0")?;
        return Ok(DegenSigmaContext::on_lambda0(ab[0], ab[1], cfg)?);
    }
    let (Some(a2), Some(g)) = (&m.a2, &m.gamma) else {
        return Err(Fail::Usage("give --a2 and --gamma, or --lambda0".into()));
    };
    let a2 = complexes(a2, 1, "--a2")?[0];
    let g = complexes(g, 2, "--gamma")?;
    Ok(DegenSigmaContext::on_lambda1(
        a2,
        EllipticCurveParams::new(g[0], g[1]),
        cfg,
    )?)
}

fn lambda1_only(ctx: &DegenSigmaContext) -> Result<(), Fail> {
    match ctx.lambda1() {
        Some(_) => Ok(()),
        None => Err(Fail::Usage(
            "this command needs a Λ1 context (--a2, --gamma)".into(),
        )),
    }
}

fn stratum_json(s: &Stratum) -> Value {
    match s {
        Stratum::Lambda2 => json!({ "stratum": "Lambda2" }),
        Stratum::Lambda1 { a2, gamma } => json!({
            "stratum": "Lambda1", "a2": cj(*a2), "gamma": [cj(gamma.gamma4), cj(gamma.gamma6)],
        }),
        Stratum::Lambda0 { a2, b2 } => {
            json!({ "stratum": "Lambda0", "a2": cj(*a2), "b2": cj(*b2) })
        }
    }
}

fn run_classify(lambda: &[f64], cfg: &NumericsConfig) -> Out {
    let l: Vec<C> = match lambda.len() {
        4 => lambda.iter().map(|&x| C::new(x, 0.0)).collect(),
        8 => complexes(lambda, 4, "--lambda")?,
        n => {
            return Err(Fail::Usage(format!(
                "--lambda needs 4 reals or 8 (re, im) values, got {n}"
            )))
        }
    };
    let c = classify(&G2Params::from_array([l[0], l[1], l[2], l[3]]), cfg)?;
    let mut v = stratum_json(&c.stratum);
    v["partition"] = json!(c.partition);
    v["rank"] = json!(c.rank);
    v["residuals"] =
        json!({ "delta_abs": c.residuals.delta_abs, "gamma_norm": c.residuals.gamma_norm });
    Ok(v)
}

fn run_sigma(m: &Moduli, u: &[f64], raw: bool, grid: &Grid, cfg: &NumericsConfig) -> Out {
    let ctx = context(m, cfg)?;
    let u = complexes(u, 2, "--u")?;
    let value = ctx.sigma2_with(u[0], u[1], !raw)?;
    let mut v = json!({
        "lambda": cjs(&ctx.lambda.to_array()),
        "stratum": if ctx.lambda1().is_some() { "Lambda1" } else { "Lambda0" },
        "u": [cj(u[0]), cj(u[1])],
        "value": cj(value),
        "normalized": !raw,
    });
    if let (Some(n), Some(path)) = (grid.grid, &grid.csv) {
        if n == 0 {
            return Err(Fail::Usage("--grid must be at least 1".into()));
        }
        let step = |i: usize| {
            if n == 1 {
                0.0
            } else {
                -grid.extent + 2.0 * grid.extent * i as f64 / (n - 1) as f64
            }
        };
        let mut rows = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let (x, y) = (step(i), step(j));
                let s = ctx.sigma2_with(C::new(x, 0.0), C::new(y, 0.0), !raw)?;
                rows.push([x, y, s.re, s.im]);
            }
        }
        write_csv(path, &["u3", "u1", "re", "im"], &rows)?;
        let non_finite = rows
            .iter()
            .filter(|r| !(r[2].is_finite() && r[3].is_finite()))
            .count();
        let max_abs = rows.iter().map(|r| r[2].hypot(r[3])).fold(0.0, f64::max);
        v["grid"] =
            json!({ "points": n * n, "non_finite": non_finite, "max_abs": max_abs, "csv": path });
    }
    Ok(v)
}

fn write_csv<const N: usize>(
    path: &Path,
    header: &[&str; N],
    rows: &[[f64; N]],
) -> Result<(), Fail> {
    let io = |e: csv::Error| Fail::Io(format!("{}: {e}", path.display()));
    let mut w = csv::Writer::from_path(path).map_err(io)?;
    w.write_record(header).map_err(io)?;
    for r in rows {
        w.write_record(r.iter().map(|x| x.to_string()))
            .map_err(io)?;
    }
    w.flush()
        .map_err(|e| Fail::Io(format!("{}: {e}", path.display())))
}

fn run_invert(
    m: &Moduli,
    u1: &[f64],
    u3: &[f64],
    rational: Option<&[f64]>,
    cfg: &NumericsConfig,
) -> Out {
    let u1 = complexes(u1, 1, "--U1")?[0];
    let u3 = complexes(u3, 1, "--U3")?[0];
    if let Some(a) = rational {
        let alpha = complexes(a, 1, "--rational-alpha")?[0];
        let (e1, e2) = rational_inversion(alpha, u1, u3)?;
        let (c1, c2) = rational_closed_form(alpha, u1, u3);
        let r = (e1 * e1 - e2 * 4.0).sqrt();
        return Ok(json!({
            "alpha": cj(alpha), "gamma": [[0.0, 0.0], [0.0, 0.0]], "U1": cj(u1), "U3": cj(u3),
            "X": [cj((e1 + r) * 0.5), cj((e1 - r) * 0.5)],
            "residuals": { "closed_form": (e1 - c1).norm().max((e2 - c2).norm()) },
        }));
    }
    let ctx = context(m, cfg)?;
    lambda1_only(&ctx)?;
    let d = ctx.lambda1().expect("checked");
    let r = ctx.solve_inversion(u1, u3)?;
    let (g4, g6) = d.ectx.gamma();
    Ok(json!({
        "A": cj(d.wp_alpha), "gamma": [cj(g4), cj(g6)], "U1": cj(u1), "U3": cj(u3),
        "X": cjs(&r.x), "Y": cjs(&r.y), "xi": cjs(&r.xi),
        "residuals": { "curve": r.curve_residual },
    }))
}

fn run_potential(
    gamma: &[f64],
    alpha: &[f64],
    family: FamilyArg,
    phi: f64,
    points: usize,
    csv: Option<&Path>,
    cfg: &NumericsConfig,
) -> Out {
    if gamma.len() != 2 {
        return Err(Fail::Usage("--gamma needs two reals γ4,γ6".into()));
    }
    if points == 0 {
        return Err(Fail::Usage("--points must be at least 1".into()));
    }
    let alpha = complexes(alpha, 1, "--alpha")?[0];
    let params = EllipticCurveParams::new(C::new(gamma[0], 0.0), C::new(gamma[1], 0.0));
    let e = EllipticContext::real_rectangular(params, cfg)?;
    let grid: Vec<f64> = (0..points)
        .map(|i| (i as f64 + 0.5) / points as f64)
        .collect();
    let fam = match family {
        FamilyArg::V1 => Family::V1,
        FamilyArg::V2 => Family::V2,
    };
    let s = real_family(&e, alpha, fam, phi, &grid, cfg)?;
    if let Some(path) = csv {
        let rows: Vec<[f64; 3]> = s
            .grid
            .iter()
            .zip(&s.values)
            .map(|(x, v)| [*x, v.re, v.im])
            .collect();
        write_csv(path, &["x", "re", "im"], &rows)?;
    }
    Ok(json!({
        "gamma": gamma, "alpha": cj(alpha), "family": family, "phi": phi, "points": points,
        "segment": format!("{:?}", s.segment),
        "max_imag": s.max_imag, "max_abs": s.max_abs,
        "spectrum": { "point": s.spectrum.point, "band1": s.spectrum.band1, "band2_lo": s.spectrum.band2_lo },
        "omega": e.omega.re, "omega_prime": cj(e.omega_p),
        "csv": csv,
    }))
}

fn run_periods(m: &Moduli, cfg: &NumericsConfig) -> Out {
    let ctx = context(m, cfg)?;
    lambda1_only(&ctx)?;
    let l = ctx.period_matrices()?;
    Ok(json!({
        "T": mat(&l.t), "H": mat(&l.h), "K1": mat(&l.k1), "K2": mat(&l.k2), "K3": mat(&l.k3),
        "legendre": mat(&l.legendre),
        "residuals": { "legendre": l.legendre_residual },
    }))
}

pub fn report_json(r: &CriterionReport) -> Value {
    json!({
        "id": r.id, "title": r.title, "passed": r.passed,
        "clauses": r.clauses.iter().map(|c| json!({
            "name": c.name, "worst": c.worst, "tolerance": c.tolerance,
            "failures": c.failures, "count": c.count, "passed": c.passed(),
        })).collect::<Vec<_>>(),
        "info": r.info,
    })
}

fn run_verify(suite: &str, seed: u64, samples: usize, cfg: &NumericsConfig) -> Out {
    let ids = suite_ids(suite).ok_or_else(|| Fail::Usage(format!("unknown suite {suite:?}")))?;
    let opts = VerifyOptions {
        seed,
        samples,
        cfg: *cfg,
    };
    let mut reports: Vec<CriterionReport> =
        ids.par_iter().map(|&id| run_criterion(id, &opts)).collect();
    reports.sort_by_key(|r| r.id);
    for r in &reports {
        eprintln!("{r}");
    }
    let red: Vec<u8> = reports.iter().filter(|r| !r.passed).map(|r| r.id).collect();
    let v = json!({
        "seed": seed, "samples": samples,
        "criteria": reports.iter().map(report_json).collect::<Vec<_>>(),
        "red": red,
    });
    if red.is_empty() {
        Ok(v)
    } else {
        Err(Fail::Red(v))
    }
}
