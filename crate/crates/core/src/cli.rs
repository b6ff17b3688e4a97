//! The `crngeom` command line: subcommands driven by a JSON scenario.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::convexfun::ThermoFunction;
use crate::dynamics::{degiorgi_ledger, lyapunov_monitor, simulate, simulate_timedep, OutputGrid, Trajectory};
use crate::error::{Error, Result};
use crate::infogeo::{
    birch_point, effective_keq, effective_kst, hhk_decompose, pythagoras_vertex, SolverOptions,
};
use crate::kinetics::{classify_state, find_steady_state, lma_dissipation, lma_flux, wegscheider_check};
use crate::netio::{report_json, schedule_to_json, trajectory_csv, Scenario};

#[derive(Debug, Parser)]
#[command(name = "crngeom", version, about = "Information geometry of reaction networks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Scenario JSON file.
    #[arg(long, global = true)]
    pub scenario: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    pub out: PathBuf,
    /// Overrides the scenario's certificate tolerance.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Seed for randomized certificate sampling.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Rate sweep such as `r2.kf=1,2,3`; one run per value.
    #[arg(long, global = true)]
    pub sweep: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Dimensions, conservation laws, cycles and the Wegscheider verdict.
    Info,
    /// Integrate the mass-action flow and write the trajectory CSV.
    Simulate,
    /// Birch point of x0 relative to x_ref with Pythagorean certificates.
    Equilibrium,
    /// Flux and force decomposition at one state.
    Decompose,
    /// Effective equilibrium kinetics along a trajectory, with closed-loop check.
    EffectiveEq,
    /// Effective cycle kinetics along a trajectory.
    EffectiveCycle,
    /// Energy balance and Lyapunov monitor for equilibrium-class networks.
    Ledger,
    /// Steady, complex-balanced or detailed-balanced classification.
    Classify,
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_SOLVER: i32 = 2;
pub const EXIT_BOUNDARY: i32 = 3;

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NoConvergence { .. } | Error::Domain(_) => EXIT_SOLVER,
        Error::BoundaryHalt { .. } => EXIT_BOUNDARY,
        _ => EXIT_USAGE,
    }
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code.
pub fn main_with_args<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(stderr, "{}", e.render());
                return EXIT_USAGE;
            }
            let _ = write!(stdout, "{}", e.render());
            return EXIT_OK;
        }
    };
    match run(&cli, stdout) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}

pub fn run(cli: &Cli, stdout: &mut dyn Write) -> Result<()> {
    let path = cli
        .common
        .scenario
        .as_deref()
        .ok_or_else(|| Error::Scenario("--scenario <path> is required".into()))?;
    let mut scenario = Scenario::load(path)?;
    if let Some(tol) = cli.common.tol {
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(Error::Scenario(format!("--tol must be positive, got {tol}")));
        }
        scenario.config.tol = tol;
    }
    match &cli.common.sweep {
        None => run_command(cli.command, &scenario, &cli.common.out, cli.common.seed, stdout),
        Some(spec) => run_sweep(cli, &scenario, spec, stdout),
    }
}

fn parse_sweep(spec: &str) -> Result<(String, Vec<f64>)> {
    let (key, values) = spec
        .split_once('=')
        .ok_or_else(|| Error::Scenario(format!("sweep `{spec}` must look like <label>.kf=v1,v2,...")))?;
    let values = values
        .split(',')
        .map(|v| {
            v.trim()
                .parse::<f64>()
                .map_err(|_| Error::Scenario(format!("sweep value `{v}` is not a number")))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((key.trim().to_string(), values))
}

#[derive(Serialize)]
struct SweepRun {
    index: usize,
    key: String,
    value: f64,
    exit_code: i32,
    error: Option<String>,
}

fn run_sweep(cli: &Cli, base: &Scenario, spec: &str, stdout: &mut dyn Write) -> Result<()> {
    let (key, values) = parse_sweep(spec)?;
    let mut scenarios = Vec::with_capacity(values.len());
    for &v in &values {
        let mut s = base.clone();
        s.set_rate(&key, v)?;
        scenarios.push(s);
    }
    let results: Vec<(Vec<u8>, Result<()>)> = std::thread::scope(|scope| {
        let handles: Vec<_> = scenarios
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let out = cli.common.out.join(format!("sweep_{i}"));
                scope.spawn(move || {
                    let mut buf = Vec::new();
                    let r = run_command(cli.command, s, &out, cli.common.seed, &mut buf);
                    (buf, r)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("sweep run panicked")).collect()
    });
    let mut index = Vec::new();
    let mut worst = None;
    for (i, ((buf, r), &v)) in results.into_iter().zip(&values).enumerate() {
        writeln!(stdout, "== sweep {i}: {key} = {v}")?;
        stdout.write_all(&buf)?;
        let (code, error) = match &r {
            Ok(()) => (EXIT_OK, None),
            Err(e) => {
                writeln!(stdout, "error: {e}")?;
                (exit_code(e), Some(e.to_string()))
            }
        };
        if let Err(e) = r {
            worst.get_or_insert(e);
        }
        index.push(SweepRun {
            index: i,
            key: key.clone(),
            value: v,
            exit_code: code,
            error,
        });
    }
    std::fs::create_dir_all(&cli.common.out)?;
    std::fs::write(cli.common.out.join("sweep.json"), report_json(&index)?)?;
    worst.map_or(Ok(()), Err)
}

fn write(out: &Path, name: &str, text: &str) -> Result<()> {
    std::fs::create_dir_all(out)?;
    std::fs::write(out.join(name), text)?;
    Ok(())
}

fn fmt_vec(v: &[f64]) -> String {
    let cells: Vec<String> = v.iter().map(|x| format!("{x:.10}")).collect();
    format!("[{}]", cells.join(", "))
}

fn solver_options(s: &Scenario) -> SolverOptions {
    SolverOptions {
        tol: (s.config.tol * 1e-2).min(1e-10),
        ..SolverOptions::default()
    }
}

fn thermo(s: &Scenario) -> Result<ThermoFunction> {
    match &s.config.x_origin {
        Some(o) => ThermoFunction::kl(DVector::from_column_slice(o)),
        None => Ok(ThermoFunction::kl_unit(s.network.n_species())),
    }
}

/// x_ref if given, otherwise the Wegscheider reference state exp(ỹ).
fn reference(s: &Scenario) -> DVector<f64> {
    s.x_ref().unwrap_or_else(|| wegscheider_check(&s.network).reference_state())
}

fn run_trajectory(s: &Scenario, out: &Path) -> Result<Trajectory> {
    let net = &s.network;
    let opts = s.sim_options();
    let result = match &s.schedule {
        Some(sched) => simulate_timedep(net, &s.x0(), s.config.t_end, sched, &opts),
        None => simulate(net, &s.x0(), s.config.t_end, &opts),
    };
    match result {
        Ok(tr) => {
            write(out, "trajectory.csv", &trajectory_csv(&tr, net))?;
            Ok(tr)
        }
        Err(Error::BoundaryHalt { t, reason, partial }) => {
            write(out, "trajectory.csv", &trajectory_csv(&partial, net))?;
            Err(Error::BoundaryHalt { t, reason, partial })
        }
        Err(e) => Err(e),
    }
}

fn certificate(ok: bool, what: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Domain(format!("certificate failed: {what}")))
    }
}

#[derive(Serialize)]
struct InfoReport<'a> {
    species: &'a [String],
    labels: &'a [String],
    n_species: usize,
    n_hypervertices: usize,
    n_edges: usize,
    rank: usize,
    n_conserved: usize,
    n_cycles: usize,
    stoichiometric_matrix: Vec<Vec<i64>>,
    conservation_laws: Vec<Vec<i64>>,
    cycles: Vec<Vec<i64>>,
    wegscheider: crate::kinetics::WegscheiderReport,
}

pub fn run_command(cmd: Command, s: &Scenario, out: &Path, seed: u64, stdout: &mut dyn Write) -> Result<()> {
    let net = &s.network;
    let tol = s.config.tol;
    match cmd {
        Command::Info => {
            let weg = wegscheider_check(net);
            let report = InfoReport {
                species: net.species(),
                labels: net.labels(),
                n_species: net.n_species(),
                n_hypervertices: net.n_hypervertices(),
                n_edges: net.n_edges(),
                rank: net.rank(),
                n_conserved: net.n_conserved(),
                n_cycles: net.n_cycles(),
                stoichiometric_matrix: net.stoich().rows_vec(),
                conservation_laws: net.cons_basis().rows_vec(),
                cycles: net.cycle_basis().transpose().rows_vec(),
                wegscheider: weg.clone(),
            };
            write(out, "info.json", &report_json(&report)?)?;
            writeln!(
                stdout,
                "N_X={} N_v={} N_e={} rank={} N_l={} N_z={}",
                report.n_species, report.n_hypervertices, report.n_edges, report.rank, report.n_conserved, report.n_cycles
            )?;
            for u in &report.conservation_laws {
                writeln!(stdout, "U row: {u:?}")?;
            }
            for v in &report.cycles {
                writeln!(stdout, "V column: {v:?}")?;
            }
            let verdict = if weg.is_equilibrium { "equilibrium" } else { "nonequilibrium" };
            writeln!(stdout, "Wegscheider: {verdict} (cycle affinity {})", fmt_vec(&weg.cycle_affinity))?;
        }
        Command::Simulate => {
            let tr = run_trajectory(s, out)?;
            let pepr_ok = tr.ledger.iter().all(|r| r.epr >= r.pepr);
            writeln!(stdout, "samples: {}  accepted steps: {}  rejected: {}", tr.len(), tr.steps.len(), tr.rejected)?;
            writeln!(stdout, "final state: {}", fmt_vec(tr.final_state().unwrap().as_slice()))?;
            writeln!(stdout, "conservation drift: {:e}", tr.conservation_drift())?;
            writeln!(stdout, "EPR >= pEPR on every row: {pepr_ok}")?;
        }
        Command::Equilibrium => {
            let th = thermo(s)?;
            let x0 = s.x0();
            let xr = reference(s);
            let bp = birch_point(net, &th, &x0, &xr, &solver_options(s))?;
            let pyth = pythagoras_vertex(net, &th, &x0, &bp.x_eq, &xr)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut max_rel_gap: f64 = 0.0;
            for _ in 0..s.config.samples {
                let w = DVector::from_fn(net.n_edges(), |_, _| rng.gen_range(-1.0..1.0));
                let dx = net.stoich_f64() * w;
                let mut scale = 1.0;
                let mut x = &bp.x_eq + &dx;
                while x.iter().any(|&v| v <= 0.0) {
                    scale *= 0.5;
                    x = &bp.x_eq + scale * &dx;
                }
                let c = DVector::from_fn(net.n_conserved(), |_, _| rng.gen_range(-1.0..1.0));
                let shift = net.cons_f64().tr_mul(&c);
                let xq = xr.zip_map(&shift, |a, b| a * b.exp());
                let p = pythagoras_vertex(net, &th, &x, &bp.x_eq, &xq)?;
                max_rel_gap = max_rel_gap.max(p.gap.abs() / (1.0 + p.d_x_q));
            }
            #[derive(Serialize)]
            struct Report {
                birch: crate::infogeo::BirchPoint,
                x_ref: Vec<f64>,
                pythagoras: crate::infogeo::PythagorasReport,
                random_triples: usize,
                seed: u64,
                max_relative_gap: f64,
            }
            let report = Report {
                x_ref: xr.as_slice().to_vec(),
                pythagoras: pyth.clone(),
                random_triples: s.config.samples,
                seed,
                max_relative_gap: max_rel_gap,
                birch: bp.clone(),
            };
            write(out, "equilibrium.json", &report_json(&report)?)?;
            writeln!(stdout, "x_eq: {}", fmt_vec(bp.x_eq.as_slice()))?;
            writeln!(stdout, "conservation residual: {:e}", bp.conservation_residual)?;
            writeln!(stdout, "Pythagorean gap: {:e}", pyth.gap)?;
            writeln!(stdout, "max relative gap over {} random triples: {:e}", s.config.samples, max_rel_gap)?;
            certificate(
                bp.conservation_residual < 1e-10 * (1.0 + x0.amax()) && pyth.gap.abs() < 1e-9 * (1.0 + pyth.d_x_q),
                "Birch point residuals",
            )?;
            certificate(max_rel_gap < 1e-9, "random Pythagorean triples")?;
        }
        Command::Decompose => {
            let x = s.state();
            let dissip = lma_dissipation(net, &x)?;
            let (j, f) = match &s.config.flux {
                Some(j) => {
                    let j = DVector::from_column_slice(j);
                    let f = dissip.force(&j)?;
                    (j, f)
                }
                None => {
                    let p = lma_flux(net, &x)?;
                    (p.flux, p.force)
                }
            };
            let d = hhk_decompose(net, &dissip, &x, &j, &f, &solver_options(s))?;
            write(out, "decompose.json", &report_json(&d)?)?;
            writeln!(stdout, "j_eq: {}", fmt_vec(d.flux.j_eq.as_slice()))?;
            writeln!(stdout, "f_st: {}", fmt_vec(d.force.f_st.as_slice()))?;
            writeln!(stdout, "divergence residual: {:e}", d.flux.divergence_residual)?;
            writeln!(stdout, "stationarity residual: {:e}", d.force.stationarity_residual)?;
            writeln!(stdout, "Pythagorean gaps: flux {:e}, force {:e}", d.flux.pythagoras_gap, d.force.pythagoras_gap)?;
            let scale = 1.0 + j.amax();
            certificate(
                d.flux.divergence_residual < 1e-9 * scale && d.force.stationarity_residual < 1e-9 * scale,
                "decomposition residuals",
            )?;
        }
        Command::EffectiveEq => {
            let tr = run_trajectory(s, out)?;
            let sched = effective_keq(net, &tr, &solver_options(s))?;
            let rates = sched.rate_schedule()?;
            let replay = simulate_timedep(net, &s.x0(), s.config.t_end, &rates, &s.sim_options())?;
            let deviation = tr.relative_sup_distance(&replay)?;
            #[derive(Serialize)]
            struct Report<'a> {
                schedule: &'a crate::infogeo::EffectiveSchedule,
                kappa_drift: f64,
                closed_loop_deviation: f64,
            }
            let report = Report {
                schedule: &sched,
                kappa_drift: sched.kappa_drift(),
                closed_loop_deviation: deviation,
            };
            write(out, "schedule_eq.json", &report_json(&report)?)?;
            write(out, "rates_eq.json", &schedule_to_json(&rates)?)?;
            write(out, "replay.csv", &trajectory_csv(&replay, net))?;
            writeln!(stdout, "grid points: {}", sched.entries.len())?;
            writeln!(stdout, "max cycle-affinity residual: {:e}", sched.max_cycle_residual)?;
            writeln!(stdout, "max relative velocity mismatch: {:e}", sched.max_flow_residual)?;
            writeln!(stdout, "kappa drift: {:e}", sched.kappa_drift())?;
            writeln!(stdout, "closed-loop deviation (relative sup-norm): {deviation:e}")?;
            certificate(sched.max_cycle_residual < tol && sched.max_flow_residual < 1e-7, "schedule certificates")?;
            certificate(deviation < 1e-4, "closed-loop reproduction")?;
        }
        Command::EffectiveCycle => {
            let tr = run_trajectory(s, out)?;
            let sched = effective_kst(net, &tr, &solver_options(s))?;
            let rates = sched.rate_schedule()?;
            #[derive(Serialize)]
            struct Report<'a> {
                schedule: &'a crate::infogeo::EffectiveSchedule,
                kappa_drift: f64,
            }
            write(
                out,
                "schedule_cycle.json",
                &report_json(&Report {
                    schedule: &sched,
                    kappa_drift: sched.kappa_drift(),
                })?,
            )?;
            write(out, "rates_cycle.json", &schedule_to_json(&rates)?)?;
            writeln!(stdout, "grid points: {}", sched.entries.len())?;
            writeln!(stdout, "max steadiness residual: {:e}", sched.max_flow_residual)?;
            writeln!(stdout, "max cycle-affinity mismatch: {:e}", sched.max_cycle_residual)?;
            writeln!(stdout, "kappa drift: {:e}", sched.kappa_drift())?;
            certificate(sched.max_flow_residual < tol && sched.max_cycle_residual < 1e-9, "steadiness certificates")?;
        }
        Command::Ledger => {
            let weg = wegscheider_check(net);
            if !weg.is_equilibrium {
                return Err(Error::Domain(format!(
                    "ledger needs an equilibrium-class network; cycle affinity is {}",
                    fmt_vec(&weg.cycle_affinity)
                )));
            }
            let xr = reference(s);
            let mut sc = s.clone();
            sc.config.x_ref = Some(xr.as_slice().to_vec());
            let tr = run_trajectory(&sc, out)?;
            // Stiff initial layers need the accepted steps themselves as quadrature nodes.
            let fine_opts = sc.sim_options().with_grid(OutputGrid::Steps);
            let fine = match &sc.schedule {
                Some(sched) => simulate_timedep(net, &sc.x0(), sc.config.t_end, sched, &fine_opts)?,
                None => simulate(net, &sc.x0(), sc.config.t_end, &fine_opts)?,
            };
            let dg = degiorgi_ledger(&fine, net, &xr)?;
            let ly = lyapunov_monitor(&tr, net, &xr)?;
            #[derive(Serialize)]
            struct Report {
                x_ref: Vec<f64>,
                degiorgi: crate::dynamics::DeGiorgiReport,
                lyapunov_max_rate: f64,
                lyapunov_violations: usize,
                conservation_drift: f64,
            }
            let report = Report {
                x_ref: xr.as_slice().to_vec(),
                degiorgi: dg.clone(),
                lyapunov_max_rate: ly.max_rate,
                lyapunov_violations: ly.violations,
                conservation_drift: tr.conservation_drift(),
            };
            write(out, "ledger.json", &report_json(&report)?)?;
            writeln!(stdout, "divergence drop: {:.12e}", dg.lhs)?;
            writeln!(stdout, "dissipated:      {:.12e}", dg.rhs)?;
            writeln!(stdout, "gap: {:e} (tolerance {:e})", dg.gap, dg.tolerance)?;
            writeln!(stdout, "max dD/dt: {:e}  violations: {}", ly.max_rate, ly.violations)?;
            certificate(dg.passed, "energy balance")?;
            certificate(ly.non_increasing(), "Lyapunov monotonicity")?;
        }
        Command::Classify => {
            let (x, searched) = match &s.config.state {
                Some(_) => (s.state(), false),
                None => (find_steady_state(net, &s.x0(), 1e-13)?, true),
            };
            let c = classify_state(net, &x, tol)?;
            #[derive(Serialize)]
            struct Report {
                state: Vec<f64>,
                located_by_newton: bool,
                tolerance: f64,
                classification: crate::kinetics::Classification,
            }
            write(
                out,
                "classify.json",
                &report_json(&Report {
                    state: x.as_slice().to_vec(),
                    located_by_newton: searched,
                    tolerance: tol,
                    classification: c.clone(),
                })?,
            )?;
            writeln!(stdout, "state: {}", fmt_vec(x.as_slice()))?;
            writeln!(
                stdout,
                "class: {}  |Sj| = {:e}  |Bj| = {:e}  |j| = {:e}",
                serde_json::to_value(c.class)?.as_str().unwrap_or("?"),
                c.steady_residual,
                c.complex_residual,
                c.flux_residual
            )?;
        }
    }
    Ok(())
}
