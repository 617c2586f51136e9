//! The `twinsurf` command line.
//!
//! Every command prints one JSON report (`"schema": 1`) on stdout. Exit codes:
//! 0 success, 1 a residual above tolerance, 2 bad input or unknown name,
//! 3 domain or grid problems, 4 curl, spacelike or area-decreasing failures.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::catalog::{self, mesh::export_obj, DomainSpec};
use crate::conformal::{
    build_conformal_chart, cauchy_riemann_residual, conformality_residual, reflect_vertical, weierstrass_data,
    weierstrass_twin_residual,
};
use crate::error::{Error, Result};
use crate::io::{read_fields_csv, write_multigraph_csv, write_scalar_csv, write_weierstrass_csv};
use crate::numerics::{Bounds, Grid2D, MaskSpec, ResidualReport, ScalarField};
use crate::twin1::{cmc_residual, inverse_twin_transform_with, twin_transform_with, CmcParams, GraphData, TwinOptions};
use crate::twin2::{
    first_fundamental, inverse_twin_transform_codim_with, maximal_system_residual, minimal_system_residual,
    twin_transform_codim_with, CodimOptions, MultiGraph,
};
use crate::Signature;

pub const SCHEMA: u32 = 1;

#[derive(Parser, Debug)]
#[command(name = "twinsurf", version, about = "Twin CMC graphs on sampled grids")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Residual of the CMC equation (or the minimal/maximal system) for a field CSV.
    Verify(InputArgs),
    /// Twin of a field CSV, with curl and dual-equation reports.
    Twin(TwinArgs),
    /// The registry of example surfaces.
    #[command(subcommand)]
    Catalog(CatalogCommand),
    /// Conformal chart and Weierstrass data of a minimal graph and its twin.
    Conformal(ConformalArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Ambient {
    /// `E(κ, τ)` or `L(κ, τ)`, codimension one.
    Bcv,
    /// `R^{n+2}` or `R^{n+2}_n`.
    Flat,
}

#[derive(Args, Debug, Clone)]
pub struct InputArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value = "bcv")]
    pub ambient: Ambient,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub kappa: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub tau: f64,
    #[arg(long = "H", default_value_t = 0.0, allow_hyphen_values = true)]
    pub h: f64,
    /// +1 for the Riemannian side, −1 for the Lorentzian side.
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub eps: f64,
    /// Number of height columns; any value selects the flat ambient.
    #[arg(long)]
    pub codim: Option<usize>,
    /// Extra mask intersected with the input's nodes.
    #[arg(long)]
    pub mask: Option<String>,
    /// Integration anchor `X,Y` (nearest masked node).
    #[arg(long)]
    pub anchor: Option<String>,
    /// Residual tolerance; defaults to 10·h².
    #[arg(long)]
    pub tol: Option<f64>,
    /// Also write the JSON report here.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct TwinArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Twin field CSV.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// OBJ mesh of the twin.
    #[arg(long)]
    pub obj: Option<PathBuf>,
    /// OBJ mesh of the input surface.
    #[arg(long)]
    pub obj_source: Option<PathBuf>,
    /// Height column used for OBJ output in codimension > 1 (1-based).
    #[arg(long, default_value_t = 1)]
    pub component: usize,
    /// Compare against a catalog example (codimension one).
    #[arg(long)]
    pub expect: Option<String>,
    /// Parameter of the expected example, `key=value`, repeatable.
    #[arg(long = "param")]
    pub params: Vec<String>,
    /// Curl tolerance; defaults to 10·h²·(1 + max|W|).
    #[arg(long)]
    pub curl_tol: Option<f64>,
}

#[derive(Subcommand, Debug)]
pub enum CatalogCommand {
    /// Registered examples and pairs.
    List,
    /// Regression of one pair source, or of `all`.
    Check {
        name: String,
        /// Grid size `N` or `NX,NY` (square grids are used).
        #[arg(long, default_value = "201")]
        grid: String,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Samples an example and reports its own residual.
    Eval {
        name: String,
        /// Parameter override `key=value`, repeatable.
        #[arg(long = "param")]
        params: Vec<String>,
        #[arg(long, default_value = "101")]
        grid: String,
        #[arg(long, allow_hyphen_values = true)]
        bounds: Option<String>,
        #[arg(long)]
        mask: Option<String>,
        #[arg(long)]
        anchor: Option<String>,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long)]
        obj: Option<PathBuf>,
        #[arg(long)]
        tol: Option<f64>,
    },
}

#[derive(Args, Debug)]
pub struct ConformalArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub anchor: Option<String>,
    /// Weierstrass data of the input.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Weierstrass data of the reflected twin.
    #[arg(long)]
    pub twin_output: Option<PathBuf>,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

/// Parses arguments, runs, prints the report and returns the exit code.
pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let name = command_name(&cli.command);
    match run(&cli) {
        Ok((report, code)) => {
            emit(&report);
            code
        }
        Err(e) => {
            log::error!("{e}");
            eprintln!("error: {e}");
            emit(&error_report(name, &e));
            exit_code(&e)
        }
    }
}

/// Prints a report; a closed stdout is not an error.
fn emit(v: &Value) {
    let mut out = std::io::stdout().lock();
    if serde_json::to_writer_pretty(&mut out, v).is_ok() {
        let _ = writeln!(out);
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Verify(_) => "verify",
        Command::Twin(_) => "twin",
        Command::Catalog(_) => "catalog",
        Command::Conformal(_) => "conformal",
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_) | Error::UnknownExample(_) | Error::Io(_) | Error::Csv(_) | Error::Json(_) => 2,
        Error::NotAGradient { .. }
        | Error::SpacelikeViolation { .. }
        | Error::LightlikeDegeneracy { .. }
        | Error::NotAreaDecreasing { .. } => 4,
        _ => 3,
    }
}

fn error_report(command: &str, e: &Error) -> Value {
    let (kind, details) = match e {
        Error::NotAGradient { context, report, tol } => ("not_a_gradient", json!({ "context": context, "curl": report, "tol": tol })),
        Error::SpacelikeViolation { nodes, min_margin } => ("spacelike_violation", json!({ "nodes": nodes.len(), "min_margin": min_margin })),
        Error::LightlikeDegeneracy { min_margin, guard, .. } => ("lightlike_degeneracy", json!({ "min_margin": min_margin, "guard": guard })),
        Error::NotAreaDecreasing { nodes, max_norm } => ("not_area_decreasing", json!({ "nodes": nodes.len(), "max_norm": max_norm })),
        Error::UnknownExample(n) => ("unknown_example", json!({ "name": n })),
        Error::Parse(_) | Error::Io(_) | Error::Csv(_) | Error::Json(_) => ("parse", Value::Null),
        Error::Topology(_) => ("topology", Value::Null),
        _ => ("domain", Value::Null),
    };
    json!({
        "schema": SCHEMA,
        "command": command,
        "ok": false,
        "error": { "kind": kind, "message": e.to_string(), "details": details },
    })
}

fn run(cli: &Cli) -> Result<(Value, i32)> {
    match &cli.command {
        Command::Verify(a) => cmd_verify(a),
        Command::Twin(a) => cmd_twin(a),
        Command::Catalog(c) => cmd_catalog(c),
        Command::Conformal(a) => cmd_conformal(a),
    }
}

fn parse_list(s: &str, n: usize, what: &str) -> Result<Vec<f64>> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| Error::Parse(format!("{what} `{s}`: {e}")))?;
    if v.len() != n {
        return Err(Error::Parse(format!("{what} `{s}` needs {n} number(s)")));
    }
    Ok(v)
}

fn parse_params(raw: &[String]) -> Result<Vec<(String, f64)>> {
    raw.iter()
        .map(|s| {
            let (k, v) = s.split_once('=').ok_or_else(|| Error::Parse(format!("parameter `{s}` must be key=value")))?;
            let v: f64 = v.trim().parse().map_err(|e| Error::Parse(format!("parameter `{s}`: {e}")))?;
            Ok((k.trim().to_string(), v))
        })
        .collect()
}

fn parse_grid(s: &str) -> Result<(usize, usize)> {
    let parts: Vec<usize> = s
        .split(',')
        .map(|t| t.trim().parse::<usize>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| Error::Parse(format!("grid `{s}`: {e}")))?;
    match parts[..] {
        [n] => Ok((n, n)),
        [nx, ny] => Ok((nx, ny)),
        _ => Err(Error::Parse(format!("grid `{s}` must be N or NX,NY"))),
    }
}

fn write_file(path: &Path, f: impl FnOnce(&mut BufWriter<File>) -> Result<()>) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    f(&mut w)?;
    w.flush()?;
    Ok(())
}

fn save_report(path: &Option<PathBuf>, v: &Value) -> Result<()> {
    if let Some(p) = path {
        write_file(p, |w| {
            serde_json::to_writer_pretty(&mut *w, v)?;
            writeln!(w)?;
            Ok(())
        })?;
    }
    Ok(())
}

/// Loaded input fields after masking and anchoring.
struct Loaded {
    fields: Vec<ScalarField>,
}

fn load(a: &InputArgs) -> Result<Loaded> {
    let csv = read_fields_csv(BufReader::new(File::open(&a.input)?))?;
    let mut grid: Grid2D = (*csv.grid).clone();
    if let Some(m) = &a.mask {
        let spec = MaskSpec::parse(m)?;
        let hy = grid.hy();
        grid = grid.restrict(|x, y| spec.contains(x, y, hy))?;
    } else {
        grid = grid.restrict(|_, _| true)?;
    }
    if let Some(s) = &a.anchor {
        let v = parse_list(s, 2, "anchor")?;
        grid = grid.with_anchor_near(v[0], v[1])?;
    }
    let grid = Arc::new(grid);
    let fields = csv.fields.iter().map(|f| f.with_grid(&grid)).collect::<Result<Vec<_>>>()?;
    log::info!("read {} field(s) on {} nodes from {}", fields.len(), grid.masked_count(), a.input.display());
    Ok(Loaded { fields })
}

fn codim_of(a: &InputArgs, found: usize) -> Result<Option<usize>> {
    match (a.codim, a.ambient) {
        (Some(n), _) if n != found => Err(Error::Parse(format!("--codim {n} but the input has {found} value column(s)"))),
        (Some(n), _) => Ok(Some(n)),
        (None, Ambient::Flat) => Ok(Some(found)),
        (None, Ambient::Bcv) if found == 1 => Ok(None),
        (None, Ambient::Bcv) => Err(Error::Parse(format!("{found} value columns need --codim or --ambient flat"))),
    }
}

fn cmc_params(a: &InputArgs) -> Result<CmcParams> {
    Ok(CmcParams::new(a.kappa, a.tau, a.h, Signature::from_sign(a.eps)?))
}

fn default_tol(grid: &Grid2D) -> f64 {
    10.0 * grid.h() * grid.h()
}

fn cmd_verify(a: &InputArgs) -> Result<(Value, i32)> {
    let input = load(a)?;
    let signature = Signature::from_sign(a.eps)?;
    let grid = input.fields[0].grid().clone();
    let tol = a.tol.unwrap_or_else(|| default_tol(&grid));
    let (report, ambient) = match codim_of(a, input.fields.len())? {
        None => {
            let params = cmc_params(a)?;
            let data = GraphData::new(input.fields[0].clone(), params)?;
            (ResidualReport::of(&cmc_residual(&data)?.abs()), json!({ "family": "bcv", "params": params }))
        }
        Some(n) => {
            let mg = MultiGraph::new(input.fields)?;
            let sys = match signature {
                Signature::Riemannian => minimal_system_residual(&mg)?,
                Signature::Lorentzian => maximal_system_residual(&mg)?,
            };
            (sys.report(), json!({ "family": "flat", "codim": n, "signature": signature }))
        }
    };
    let pass = report.passes(tol);
    let v = json!({
        "schema": SCHEMA,
        "command": "verify",
        "ok": pass,
        "ambient": ambient,
        "residual": report,
        "tol": tol,
    });
    save_report(&a.report, &v)?;
    Ok((v, if pass { 0 } else { 1 }))
}

fn cmd_twin(t: &TwinArgs) -> Result<(Value, i32)> {
    let a = &t.input;
    let input = load(a)?;
    let signature = Signature::from_sign(a.eps)?;
    let grid = input.fields[0].grid().clone();
    let mut code = 0;
    let mut v = match codim_of(a, input.fields.len())? {
        None => {
            let params = cmc_params(a)?;
            let data = GraphData::new(input.fields[0].clone(), params)?;
            let opts = TwinOptions { curl_tol: t.curl_tol, ..TwinOptions::default() };
            let r = match signature {
                Signature::Riemannian => twin_transform_with(&data, &opts)?,
                Signature::Lorentzian => inverse_twin_transform_with(&data, &opts)?,
            };
            if let Some(p) = &t.output {
                write_file(p, |w| write_scalar_csv(w, &r.g))?;
            }
            if let Some(p) = &t.obj {
                write_file(p, |w| Ok(w.write_all(export_obj(&r.g)?.as_bytes())?))?;
            }
            if let Some(p) = &t.obj_source {
                write_file(p, |w| Ok(w.write_all(export_obj(&input.fields[0])?.as_bytes())?))?;
            }
            let mut v = json!({
                "schema": SCHEMA,
                "command": "twin",
                "ok": true,
                "source_params": params,
                "twin_params": params.twin(),
                "curl": r.curl_report,
                "curl_tol": r.curl_tol,
                "dual_pde": r.dual_pde_report,
                "path_discrepancy": r.path_discrepancy,
            });
            if signature == Signature::Riemannian {
                v["spacelike_margin"] = json!(r.spacelike_margin);
            }
            if let Some(name) = &t.expect {
                let pair = catalog::pair_for_target(name)?;
                let overrides = parse_params(&t.params)?;
                let err = r.g.sub(&catalog::expected_twin_with(pair, &overrides, &grid)?)?.max_abs();
                let tol = a.tol.unwrap_or_else(|| default_tol(&grid));
                let pass = err <= tol;
                if !pass {
                    code = 1;
                    v["ok"] = json!(false);
                }
                v["expect"] = json!({ "name": name, "sign": pair.sign, "shift": [pair.shift.0, pair.shift.1], "max_error": err, "tol": tol, "pass": pass });
            }
            v
        }
        Some(n) => {
            if t.expect.is_some() {
                return Err(Error::Parse("--expect applies to codimension one".into()));
            }
            let mg = MultiGraph::new(input.fields.clone())?;
            let opts = CodimOptions { curl_tol: t.curl_tol, ..CodimOptions::default() };
            let r = match signature {
                Signature::Riemannian => twin_transform_codim_with(&mg, &opts)?,
                Signature::Lorentzian => inverse_twin_transform_codim_with(&mg, &opts)?,
            };
            if let Some(p) = &t.output {
                write_file(p, |w| write_multigraph_csv(w, r.g.fields()))?;
            }
            let pick = |m: &MultiGraph| -> Result<ScalarField> {
                m.fields()
                    .get(t.component.wrapping_sub(1))
                    .cloned()
                    .ok_or_else(|| Error::Parse(format!("--component {} out of 1..={}", t.component, m.n())))
            };
            if let Some(p) = &t.obj {
                let z = pick(&r.g)?;
                write_file(p, |w| Ok(w.write_all(export_obj(&z)?.as_bytes())?))?;
            }
            if let Some(p) = &t.obj_source {
                let z = pick(&mg)?;
                write_file(p, |w| Ok(w.write_all(export_obj(&z)?.as_bytes())?))?;
            }
            let mut v = json!({
                "schema": SCHEMA,
                "command": "twin",
                "ok": true,
                "codim": n,
                "source_signature": signature,
                "curl": r.curl_reports,
                "curl_tol": r.curl_tols,
                "system": r.system_report,
                "dualities": r.dualities,
                "path_discrepancy": r.path_discrepancy,
            });
            if signature == Signature::Riemannian {
                v["spacelike_margin"] = json!(r.spacelike_margin);
            }
            v
        }
    };
    v["nodes"] = json!(grid.masked_count());
    v["h"] = json!(grid.h());
    save_report(&a.report, &v)?;
    Ok((v, code))
}

fn cmd_catalog(c: &CatalogCommand) -> Result<(Value, i32)> {
    match c {
        CatalogCommand::List => {
            let examples: Vec<Value> = catalog::list_examples()
                .iter()
                .map(|e| {
                    let p = e.resolve::<&str>(&[]).expect("defaults resolve");
                    json!({
                        "name": e.name,
                        "summary": e.summary,
                        "params": p,
                        "ambient": e.ambient(&p),
                        "expected_twin": e.expected_twin,
                    })
                })
                .collect();
            Ok((json!({ "schema": SCHEMA, "command": "catalog list", "ok": true, "examples": examples, "pairs": catalog::list_pairs() }), 0))
        }
        CatalogCommand::Check { name, grid, report } => {
            let (n, _) = parse_grid(grid)?;
            let pairs: Vec<_> = if name == "all" {
                catalog::list_pairs().iter().collect()
            } else {
                catalog::find_example(name)?;
                let v: Vec<_> = catalog::pairs_from(name).collect();
                if v.is_empty() {
                    return Err(Error::UnknownExample(format!("{name} (no registered pair starts here)")));
                }
                v
            };
            let mut results = Vec::new();
            let mut all = true;
            for p in pairs {
                let r = catalog::check_pair(p, n)?;
                log::info!("{} -> {}: error {:.3e}, ratio {:.2}", r.source, r.target, r.twin_error, r.ratio);
                all &= r.pass();
                let mut v = serde_json::to_value(&r)?;
                v["pass"] = json!(r.pass());
                results.push(v);
            }
            let v = json!({ "schema": SCHEMA, "command": "catalog check", "ok": all, "grid": n, "pairs": results });
            save_report(report, &v)?;
            Ok((v, if all { 0 } else { 1 }))
        }
        CatalogCommand::Eval { name, params, grid, bounds, mask, anchor, output, obj, tol } => {
            let ex = catalog::find_example(name)?;
            let overrides = parse_params(params)?;
            let p = ex.resolve(&overrides)?;
            let (nx, ny) = parse_grid(grid)?;
            let mut dom = ex.domain(&p);
            if let Some(b) = bounds {
                let v = parse_list(b, 4, "bounds")?;
                dom = DomainSpec { bounds: Bounds::new(v[0], v[1], v[2], v[3]), ..dom };
            }
            if let Some(m) = mask {
                dom = DomainSpec { mask: MaskSpec::parse(m)?, ..dom };
            }
            if let Some(s) = anchor {
                let v = parse_list(s, 2, "anchor")?;
                dom.anchor = Some((v[0], v[1]));
            }
            let g = dom.grid(nx, ny)?;
            let data = catalog::eval_on(ex, &p, &g)?;
            if let Some(path) = output {
                write_file(path, |w| write_scalar_csv(w, &data.f))?;
            }
            if let Some(path) = obj {
                write_file(path, |w| Ok(w.write_all(export_obj(&data.f)?.as_bytes())?))?;
            }
            let res = ResidualReport::of(&cmc_residual(&data)?.abs());
            let tol = tol.unwrap_or_else(|| default_tol(&g));
            let pass = res.passes(tol);
            let v = json!({
                "schema": SCHEMA,
                "command": "catalog eval",
                "ok": pass,
                "name": ex.name,
                "params": p,
                "ambient": data.params,
                "nodes": g.masked_count(),
                "residual": res,
                "tol": tol,
            });
            Ok((v, if pass { 0 } else { 1 }))
        }
    }
}

fn cmd_conformal(a: &ConformalArgs) -> Result<(Value, i32)> {
    let args = InputArgs {
        input: a.input.clone(),
        ambient: Ambient::Flat,
        kappa: 0.0,
        tau: 0.0,
        h: 0.0,
        eps: 1.0,
        codim: None,
        mask: None,
        anchor: a.anchor.clone(),
        tol: None,
        report: None,
    };
    let input = load(&args)?;
    let mg = MultiGraph::new(input.fields)?;
    let ff = first_fundamental(&mg, Signature::Riemannian)?;
    let chart = build_conformal_chart(&mg, &ff)?;
    let twin = twin_transform_codim_with(&mg, &CodimOptions::default())?;
    let wf = weierstrass_data(&chart, &mg, Signature::Riemannian)?;
    let wg = reflect_vertical(&weierstrass_data(&chart, &twin.g, Signature::Lorentzian)?);
    if let Some(p) = &a.output {
        write_file(p, |w| write_weierstrass_csv(w, &wf))?;
    }
    if let Some(p) = &a.twin_output {
        write_file(p, |w| write_weierstrass_csv(w, &wg))?;
    }
    let v = json!({
        "schema": SCHEMA,
        "command": "conformal",
        "ok": true,
        "codim": mg.n(),
        "min_j_psi": chart.j_psi.min(),
        "xi_nodes": chart.xi_grid.masked_count(),
        "xi_h": chart.xi_grid.h(),
        "ambiguous_nodes": chart.ambiguous,
        "inversion_error": chart.inversion_error()?,
        "conformality": conformality_residual(&chart, &mg, Signature::Riemannian)?,
        "nullity": wf.nullity_residual(),
        "twin_nullity": wg.nullity_residual(),
        "twin_relation": weierstrass_twin_residual(&wf, &wg)?,
        "cauchy_riemann": cauchy_riemann_residual(&chart, &mg, &twin.g)?,
    });
    save_report(&a.report, &v)?;
    Ok((v, 0))
}
