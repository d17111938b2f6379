use std::io::Write;
use std::path::Path;

use exact_series::navier_stokes::{self as ns, FlowSeries};
use exact_series::prandtl::{self, BoundaryLayerSeries, ExternalFlow, WallSlope};
use exact_series::pvi::{self, oracle, PviParams, PviSeed};
use exact_series::{Backend, Rational, Scalar, Series1, SeriesK};
use serde_json::json;

use crate::args::{Command, PviParamArgs, PviSeedArgs};
use crate::document::{kind, CoefficientDocument};
use crate::profile::{profile_csv, GridAxis};
use crate::report::VerifyReport;
use crate::{emit, CliError, Outcome};

/// Calls `$f::<T>(args)` with `T` chosen by a runtime [`Backend`].
macro_rules! by_backend {
    ($backend:expr, $f:ident($($arg:expr),* $(,)?)) => {
        match $backend {
            Backend::Exact => $f::<Rational>($($arg),*),
            Backend::Float => $f::<f64>($($arg),*),
        }
    };
}

pub const EXPANSION_POINT: &str = "shifted x = 0 (original x = -1)";

/// Runs one command, writing its primary output to `--output` or `stdout`.
pub fn run(command: Command, stdout: &mut dyn Write) -> Result<Outcome, CliError> {
    match command {
        Command::PviSolve {
            params,
            seed,
            order,
            backend,
            out,
        } => {
            let doc = by_backend!(Backend::from(backend), pvi_solve(&params, &seed, order))?;
            emit(out.output.as_deref(), &doc.to_json(), stdout)?;
            Ok(Outcome::Success)
        }
        Command::PviVerify { input, out } => {
            let doc = CoefficientDocument::read(&input)?;
            doc.expect_kind(kind::PVI)?;
            let report = by_backend!(doc.backend()?, pvi_verify(&doc))?;
            emit_report(out.output.as_deref(), &report, stdout)
        }
        Command::PviOracle {
            input,
            x_end,
            step,
            tolerance,
            out,
        } => {
            let doc = CoefficientDocument::read(&input)?;
            doc.expect_kind(kind::PVI)?;
            let cmp = by_backend!(doc.backend()?, pvi_oracle(&doc, x_end, step))?;
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["x", "series", "numeric", "abs_error"]).map_err(CliError::input)?;
            for r in &cmp.rows {
                w.write_record([r.x, r.series, r.numeric, r.abs_error].map(|v| format!("{v:.16e}")))
                    .map_err(CliError::input)?;
            }
            let text = String::from_utf8(w.into_inner().map_err(CliError::input)?).expect("utf-8");
            emit(out.output.as_deref(), &text, stdout)?;
            let pass = cmp.max_abs_error <= tolerance;
            eprintln!(
                "max |series - numeric| = {:.3e} ({} tolerance {tolerance:.1e})",
                cmp.max_abs_error,
                if pass { "within" } else { "exceeds" }
            );
            Ok(Outcome::from_pass(pass))
        }
        Command::PviCrosscheck {
            params,
            seed,
            i_max,
            backend,
            out,
        } => {
            let (value, agrees) = by_backend!(Backend::from(backend), pvi_crosscheck(&params, &seed, i_max))?;
            let mut text = serde_json::to_string_pretty(&value).expect("json");
            text.push('\n');
            emit(out.output.as_deref(), &text, stdout)?;
            Ok(Outcome::from_pass(agrees))
        }
        Command::NsVerify { input, out } => {
            let doc = CoefficientDocument::read(&input)?;
            doc.expect_kind(kind::NAVIER_STOKES)?;
            let report = by_backend!(doc.backend()?, ns_verify(&doc))?;
            emit_report(out.output.as_deref(), &report, stdout)
        }
        Command::NsMarch { input, levels, out } => {
            let doc = CoefficientDocument::read(&input)?;
            doc.expect_kind(kind::NAVIER_STOKES)?;
            let marched = by_backend!(doc.backend()?, ns_march(&doc, levels))?;
            emit(out.output.as_deref(), &marched.to_json(), stdout)?;
            Ok(Outcome::Success)
        }
        Command::NsTaylorGreen {
            caps,
            rho,
            nu,
            backend,
            out,
        } => {
            let caps: [usize; 4] = caps.try_into().map_err(|_| CliError::Input("--caps needs x,y,z,t".into()))?;
            let doc = by_backend!(Backend::from(backend), ns_taylor_green(caps, &rho, &nu))?;
            emit(out.output.as_deref(), &doc.to_json(), stdout)?;
            Ok(Outcome::Success)
        }
        Command::PrandtlSolve {
            external,
            wall,
            nu,
            rho,
            caps,
            polynomial_inputs,
            out,
        } => {
            let caps: [usize; 3] = caps.try_into().map_err(|_| CliError::Input("--caps needs I,J,K".into()))?;
            let ext = CoefficientDocument::read(&external)?;
            ext.expect_kind(kind::EXTERNAL_FLOW)?;
            let wall = CoefficientDocument::read(&wall)?;
            wall.expect_kind(kind::WALL_SLOPE)?;
            let backend = ext.backend()?;
            if wall.backend()? != backend {
                return Err(CliError::Input(format!(
                    "external flow is `{backend}` but wall slope is `{}`",
                    wall.backend
                )));
            }
            let doc = by_backend!(backend, prandtl_solve(&ext, &wall, &nu, &rho, caps, polynomial_inputs))?;
            emit(out.output.as_deref(), &doc.to_json(), stdout)?;
            Ok(Outcome::Success)
        }
        Command::PrandtlVerify { input, out } => {
            let doc = CoefficientDocument::read(&input)?;
            doc.expect_kind(kind::PRANDTL)?;
            let report = by_backend!(doc.backend()?, prandtl_verify(&doc))?;
            emit_report(out.output.as_deref(), &report, stdout)
        }
        Command::PrandtlShear {
            input,
            t,
            x_min,
            x_max,
            points,
            out,
        } => {
            let doc = CoefficientDocument::read(&input)?;
            doc.expect_kind(kind::PRANDTL)?;
            let grid = GridAxis {
                label: "x".into(),
                lo: x_min,
                hi: x_max,
                n: points,
            };
            if points < 2 || x_min >= x_max || x_min.is_nan() || x_max.is_nan() {
                return Err(CliError::Input("shear scan needs --points >= 2 and --x-min < --x-max".into()));
            }
            let value = by_backend!(doc.backend()?, prandtl_shear(&doc, t, &grid.points()))?;
            let mut text = serde_json::to_string_pretty(&value).expect("json");
            text.push('\n');
            emit(out.output.as_deref(), &text, stdout)?;
            Ok(Outcome::Success)
        }
        Command::Profile {
            input,
            field,
            grids,
            out,
        } => {
            let doc = CoefficientDocument::read(&input)?;
            let series = match doc.backend()? {
                Backend::Exact => doc.series::<Rational>(&field)?.to_f64(),
                Backend::Float => doc.series::<f64>(&field)?,
            };
            let grids = grids.iter().map(|g| GridAxis::parse(g)).collect::<Result<Vec<_>, _>>()?;
            emit(out.output.as_deref(), &profile_csv(&series, &field, &grids)?, stdout)?;
            Ok(Outcome::Success)
        }
    }
}

fn emit_report(path: Option<&Path>, report: &VerifyReport, stdout: &mut dyn Write) -> Result<Outcome, CliError> {
    let mut text = serde_json::to_string_pretty(report).expect("report serializes");
    text.push('\n');
    emit(path, &text, stdout)?;
    Ok(Outcome::from_pass(report.passed()))
}

fn scalar<T: Scalar>(name: &str, text: &str) -> Result<T, CliError> {
    T::parse(text).map_err(|e| CliError::Input(format!("--{name}: {e}")))
}

fn pvi_inputs<T: Scalar>(p: &PviParamArgs, s: &PviSeedArgs) -> Result<(PviParams<T>, PviSeed<T>), CliError> {
    let params = PviParams::new(
        scalar("alpha", &p.alpha)?,
        scalar("beta", &p.beta)?,
        scalar("gamma", &p.gamma)?,
        scalar("delta", &p.delta)?,
    );
    let seed = PviSeed::new(scalar("a0", &s.a0)?, scalar("a1", &s.a1)?).map_err(CliError::input)?;
    Ok((params, seed))
}

fn pvi_document<T: Scalar>(params: &PviParams<T>, series: &Series1<T>) -> CoefficientDocument {
    CoefficientDocument::new(kind::PVI, T::BACKEND, &["x"])
        .parameter_value("alpha", &params.alpha)
        .parameter_value("beta", &params.beta)
        .parameter_value("gamma", &params.gamma)
        .parameter_value("delta", &params.delta)
        .meta("expansion_point", EXPANSION_POINT)
        .meta("order", series.order().to_string())
        .field("y", &series.to_multi("x"))
}

fn pvi_solve<T: Scalar>(p: &PviParamArgs, s: &PviSeedArgs, order: usize) -> Result<CoefficientDocument, CliError> {
    let (params, seed) = pvi_inputs::<T>(p, s)?;
    let series = pvi::solve(&params, &seed, order).map_err(CliError::input)?;
    Ok(pvi_document(&params, &series))
}

fn pvi_read<T: Scalar>(doc: &CoefficientDocument) -> Result<(PviParams<T>, Series1<T>), CliError> {
    let params = PviParams::new(
        doc.parameter("alpha")?,
        doc.parameter("beta")?,
        doc.parameter("gamma")?,
        doc.parameter("delta")?,
    );
    let series = Series1::from_multi(&doc.series::<T>("y")?).map_err(CliError::input)?;
    Ok((params, series))
}

fn pvi_verify<T: Scalar>(doc: &CoefficientDocument) -> Result<VerifyReport, CliError> {
    let (params, series) = pvi_read::<T>(doc)?;
    let report = pvi::verify(&series, &params).map_err(CliError::input)?;
    Ok(VerifyReport::new(kind::PVI, [("pvi", &report)]))
}

fn pvi_oracle<T: Scalar>(doc: &CoefficientDocument, x_end: f64, step: f64) -> Result<oracle::OracleComparison, CliError> {
    let (params, series) = pvi_read::<T>(doc)?;
    oracle::oracle_compare(&series, &params, x_end, step).map_err(CliError::input)
}

fn pvi_crosscheck<T: Scalar>(p: &PviParamArgs, s: &PviSeedArgs, i_max: usize) -> Result<(serde_json::Value, bool), CliError> {
    let (params, seed) = pvi_inputs::<T>(p, s)?;
    let check = pvi::members_vs_engine(i_max, &params, &seed).map_err(CliError::input)?;
    let disagreement = check.disagreement.as_ref().map(|d| {
        json!({
            "i": d.i,
            "engine": d.engine.to_text(),
            "members": d.members.to_text(),
            "active_members": d.active_members,
        })
    });
    let value = json!({
        "backend": T::BACKEND.name(),
        "checked_through": check.checked_through,
        "agrees": check.agrees(),
        "disagreement": disagreement,
    });
    Ok((value, check.agrees()))
}

fn flow_document<T: Scalar>(flow: &FlowSeries<T>) -> CoefficientDocument {
    let mut doc = CoefficientDocument::new(kind::NAVIER_STOKES, T::BACKEND, &ns::AXES)
        .parameter_value("rho", flow.rho())
        .parameter_value("nu", flow.nu());
    for (name, s) in ns::FIELDS.iter().zip(flow.fields()) {
        doc = doc.field(name, s);
    }
    doc
}

fn ns_read<T: Scalar>(doc: &CoefficientDocument) -> Result<FlowSeries<T>, CliError> {
    let [u, v, w, p] = ns::FIELDS.map(|f| doc.series::<T>(f));
    FlowSeries::new(u?, v?, w?, p?, doc.parameter("rho")?, doc.parameter("nu")?).map_err(CliError::input)
}

fn ns_verify<T: Scalar>(doc: &CoefficientDocument) -> Result<VerifyReport, CliError> {
    let report = ns::verify(&ns_read::<T>(doc)?);
    let parts: Vec<_> = report.reports().collect();
    Ok(VerifyReport::new(kind::NAVIER_STOKES, parts))
}

fn ns_march<T: Scalar>(doc: &CoefficientDocument, levels: usize) -> Result<CoefficientDocument, CliError> {
    if doc.axes != ns::AXES {
        return Err(CliError::Input(format!("navier-stokes documents use axes {:?}", ns::AXES)));
    }
    let spatial = SeriesK::<T>::axis_labels(&ns::AXES[..3]);
    let initial = ["u", "v", "w"]
        .map(|f| doc.series::<T>(f).map(|s| SeriesK::from_fn(spatial.clone(), s.caps()[..3].to_vec(), |i| s.at(&[i[0], i[1], i[2], 0]).clone())));
    let [u, v, w] = initial;
    let (u, v, w) = (u?, v?, w?);
    let pressure = doc.series::<T>("P")?;
    let flow = ns::time_march([&u, &v, &w], &pressure, doc.parameter("rho")?, doc.parameter("nu")?, levels)
        .map_err(CliError::input)?;
    Ok(flow_document(&flow).meta("march_levels", levels.to_string()))
}

fn ns_taylor_green<T: Scalar>(caps: [usize; 4], rho: &str, nu: &str) -> Result<CoefficientDocument, CliError> {
    let flow = ns::taylor_green(caps, scalar::<T>("rho", rho)?, scalar::<T>("nu", nu)?).map_err(CliError::input)?;
    Ok(flow_document(&flow).meta("fixture", "taylor-green"))
}

fn widen<T: Scalar>(s: &SeriesK<T>, need: [usize; 2]) -> SeriesK<T> {
    let caps: Vec<usize> = s.caps().iter().zip(need).map(|(&c, n)| c.max(n)).collect();
    s.zero_extend(&caps)
}

fn prandtl_solve<T: Scalar>(
    ext: &CoefficientDocument,
    wall: &CoefficientDocument,
    nu: &str,
    rho: &str,
    caps: [usize; 3],
    polynomial_inputs: bool,
) -> Result<CoefficientDocument, CliError> {
    let mut u = ext.series::<T>("U")?;
    let mut a1 = wall.series::<T>("A1")?;
    if polynomial_inputs {
        let need = prandtl::level_demand(caps).map_err(CliError::input)?;
        u = widen(&u, need.external);
        a1 = widen(&a1, need.wall);
    }
    let external = ExternalFlow::new(u).map_err(CliError::input)?;
    let wall = WallSlope::new(a1).map_err(CliError::input)?;
    let bl = prandtl::construct(&external, &wall, scalar("nu", nu)?, scalar("rho", rho)?, caps).map_err(CliError::input)?;
    Ok(CoefficientDocument::new(kind::PRANDTL, T::BACKEND, &prandtl::AXES)
        .parameter_value("nu", &bl.nu)
        .parameter_value("rho", &bl.rho)
        .field("u", &bl.a)
        .field("v", &bl.b)
        .field("U", &external.series().insert_axis(1, "y", 0)))
}

fn prandtl_read<T: Scalar>(doc: &CoefficientDocument) -> Result<(BoundaryLayerSeries<T>, ExternalFlow<T>), CliError> {
    let u3 = doc.series::<T>("U")?;
    if doc.axes != prandtl::AXES || u3.caps()[1] != 0 {
        return Err(CliError::Input(format!(
            "prandtl documents use axes {:?} and store U with y-cap 0",
            prandtl::AXES
        )));
    }
    let surface = SeriesK::<T>::axis_labels(&prandtl::SURFACE_AXES);
    let u = SeriesK::from_fn(surface, vec![u3.caps()[0], u3.caps()[2]], |i| u3.at(&[i[0], 0, i[1]]).clone());
    let bl = BoundaryLayerSeries {
        a: doc.series("u")?,
        b: doc.series("v")?,
        nu: doc.parameter("nu")?,
        rho: doc.parameter("rho")?,
    };
    Ok((bl, ExternalFlow::new(u).map_err(CliError::input)?))
}

fn prandtl_verify<T: Scalar>(doc: &CoefficientDocument) -> Result<VerifyReport, CliError> {
    let (bl, external) = prandtl_read::<T>(doc)?;
    let r = prandtl::verify(&bl, &external).map_err(CliError::input)?;
    Ok(VerifyReport::new(kind::PRANDTL, [("momentum", &r.momentum), ("continuity", &r.continuity)]))
}

fn prandtl_shear<T: Scalar>(doc: &CoefficientDocument, t: f64, xs: &[f64]) -> Result<serde_json::Value, CliError> {
    let (bl, _) = prandtl_read::<T>(doc)?;
    let shear = prandtl::wall_shear_profile(&bl).to_f64();
    let samples: Vec<_> = xs
        .iter()
        .map(|&x| json!({ "x": x, "shear": shear.eval(&[x, t]) }))
        .collect();
    let brackets: Vec<_> = prandtl::shear_sign_changes(&shear, t, xs)
        .iter()
        .map(|b| json!({ "lo": b.lo, "hi": b.hi, "root": b.root }))
        .collect();
    Ok(json!({ "t": t, "samples": samples, "sign_changes": brackets }))
}
