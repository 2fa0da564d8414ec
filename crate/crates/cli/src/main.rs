//! `nsreg` - anisotropic regularity-criterion toolkit.
//!
//! Subcommands map one-to-one onto the library surfaces: exponent
//! checks (check-params, derive), admissibility-region export (region),
//! inequality ensembles (verify-lemma), the pseudo-spectral solver
//! (simulate) and criterion monitoring along stored trajectories
//! (monitor). Exit status: 0 success, 1 validation or precondition
//! failure, 2 I/O failure. All outputs are deterministic for fixed
//! inputs and seeds.

mod config;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use config::RunConfig;
use nsreg_core::criteria::exact::{
    check_spec_exact, derive_lemma_params_exact, lemma_identity_residuals_exact, ExactSpec, XR,
};
use nsreg_core::criteria::region::region_sample;
use nsreg_core::criteria::{
    check_spec, derive_lemma_params, lemma_identity_residuals, CriterionSpec, LemmaContext,
    Theorem,
};
use nsreg_core::error::Error;
use nsreg_core::lab::{
    self, Calibration, CalibrationEntry, EnsembleConfig,
};
use nsreg_core::monitor::evaluate_criterion;
use nsreg_core::solver::{simulate, Trajectory};
use nsreg_core::Field;
use num_traits::ToPrimitive;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "nsreg",
    about = "Anisotropic mixed-norm regularity criteria: exponent algebra, inequality ensembles, solver and monitor",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a hypothesis set and print the derived exponents.
    CheckParams(CheckParamsArgs),
    /// Print the interpolation-lemma parameters for a proof context.
    Derive(DeriveArgs),
    /// Sample an admissibility region to CSV and SVG.
    Region(RegionArgs),
    /// Run the inequality ensembles; write trial CSVs and a calibration file.
    VerifyLemma(VerifyLemmaArgs),
    /// Integrate a run configuration and write snapshots and diagnostics.
    Simulate(SimulateArgs),
    /// Evaluate criterion quantities along a stored trajectory.
    Monitor(MonitorArgs),
}

#[derive(Args)]
struct ExponentArgs {
    /// Vertical integrability exponent alpha (dimensionless, >= 1 or 'inf').
    #[arg(long)]
    alpha: Option<String>,
    /// Horizontal integrability exponent beta (dimensionless, >= 1 or 'inf').
    #[arg(long)]
    beta: Option<String>,
    /// Component integrability exponent s (dimensionless, >= 1 or 'inf').
    #[arg(long)]
    s: Option<String>,
    /// Time exponent q (dimensionless, >= 1 or 'inf'); the pair exponent t
    /// for the classical full-velocity class.
    #[arg(long)]
    q: Option<String>,
    /// Time exponent p on the mixed norm (dimensionless, >= 1 or 'inf').
    #[arg(long)]
    p: Option<String>,
}

#[derive(Args)]
struct CheckParamsArgs {
    /// Hypothesis set: ps, t11i, t11ii, t13, t14 or t15.
    #[arg(long)]
    theorem: String,
    #[command(flatten)]
    exponents: ExponentArgs,
}

#[derive(Args)]
struct DeriveArgs {
    /// Proof context: t11i, t11ii, t13 or t145.
    #[arg(long)]
    context: String,
    /// Vertical exponent alpha (dimensionless rational, e.g. 2 or 7/2).
    #[arg(long)]
    alpha: String,
    /// Horizontal exponent beta; derived (and optional) for t13.
    #[arg(long)]
    beta: Option<String>,
    /// Component exponent s; fixed by the t11i/t11ii contexts.
    #[arg(long)]
    s: Option<String>,
}

#[derive(Args)]
struct RegionArgs {
    /// Sup-in-time hypothesis set to sample: t11i or t11ii.
    #[arg(long)]
    theorem: String,
    /// Largest alpha of the lattice (dimensionless).
    #[arg(long, default_value_t = 6.0)]
    alpha_max: f64,
    /// Largest beta of the lattice (dimensionless).
    #[arg(long, default_value_t = 6.0)]
    beta_max: f64,
    /// Lattice spacing (dimensionless).
    #[arg(long, default_value_t = 0.05)]
    step: f64,
    /// Output directory for region.csv and region.svg.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct VerifyLemmaArgs {
    /// Samples per axis of the cubic evaluation grid.
    #[arg(long, default_value_t = 64)]
    grid: usize,
    /// Base seed of the trial ensembles.
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Number of trials per ensemble.
    #[arg(long, default_value_t = 100)]
    trials: usize,
    /// Vertical exponent alpha of the trilinear ensemble (dimensionless).
    #[arg(long, default_value_t = 2.0)]
    alpha: f64,
    /// Horizontal exponent beta of the trilinear ensemble (dimensionless).
    #[arg(long, default_value_t = 4.0)]
    beta: f64,
    /// Largest wavenumber per axis of the test functions.
    #[arg(long, default_value_t = 3)]
    mode_cap: usize,
    /// Output directory for trial CSVs and calibration.cal.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SimulateArgs {
    /// Run configuration file (flat key = value lines).
    #[arg(long)]
    config: PathBuf,
}

#[derive(Args)]
struct MonitorArgs {
    /// Trajectory directory produced by simulate (index.csv + snapshots).
    #[arg(long)]
    traj: PathBuf,
    /// Hypothesis set: ps, t11i, t11ii, t13, t14 or t15.
    #[arg(long)]
    theorem: String,
    #[command(flatten)]
    exponents: ExponentArgs,
    /// Optional bound M to compare both aggregates against.
    #[arg(long)]
    threshold: Option<f64>,
    /// Report CSV path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let ok = matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            let _ = e.print();
            return if ok { ExitCode::SUCCESS } else { ExitCode::from(1) };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Io { .. } | Error::Format { .. } => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::CheckParams(args) => check_params(args),
        Command::Derive(args) => derive(args),
        Command::Region(args) => region(args),
        Command::VerifyLemma(args) => verify_lemma(args),
        Command::Simulate(args) => simulate_cmd(args),
        Command::Monitor(args) => monitor_cmd(args),
    }
}

fn parse_opt_xr(name: &str, v: &Option<String>) -> Result<Option<XR>, Error> {
    match v {
        Some(text) => XR::parse(text)
            .map(Some)
            .map_err(|e| Error::invalid(format!("--{name}: {e}"))),
        None => Ok(None),
    }
}

/// Six-digit decimal with the exact fraction alongside when it adds
/// information, e.g. "2.666667 (8/3)".
fn fmt_xr(x: &XR) -> String {
    match x {
        XR::Inf => "inf".to_string(),
        XR::Fin(r) => {
            let f = r.to_f64().unwrap_or(f64::NAN);
            if r.is_integer() {
                format!("{f}")
            } else {
                format!("{f:.6} ({r})")
            }
        }
    }
}

fn check_params(args: CheckParamsArgs) -> Result<ExitCode, Error> {
    let theorem = Theorem::parse(&args.theorem)?;
    let ex = &args.exponents;
    let exact_spec = ExactSpec {
        theorem,
        alpha: parse_opt_xr("alpha", &ex.alpha)?,
        beta: parse_opt_xr("beta", &ex.beta)?,
        s: parse_opt_xr("s", &ex.s)?,
        q: parse_opt_xr("q", &ex.q)?,
        p: parse_opt_xr("p", &ex.p)?,
    };
    let float_spec = CriterionSpec {
        theorem,
        alpha: exact_spec.alpha.as_ref().map(XR::to_f64),
        beta: exact_spec.beta.as_ref().map(XR::to_f64),
        s: exact_spec.s.as_ref().map(XR::to_f64),
        q: exact_spec.q.as_ref().map(XR::to_f64),
        p: exact_spec.p.as_ref().map(XR::to_f64),
    };

    let exact = check_spec_exact(&exact_spec);
    let float = check_spec(&float_spec);

    println!("{float_spec}");
    println!("admissible={}", exact.admissible);
    if !exact.violated.is_empty() {
        println!("violated: {}", exact.violated.join(", "));
    }
    if exact.admissible != float.admissible {
        println!(
            "note: floating-point path disagrees (boundary case); float says {}",
            float.admissible
        );
    }
    if let Some(beta) = &exact.derived_beta {
        println!("beta={}", fmt_xr(beta));
    }
    if let Some(p) = &exact.derived_p {
        println!("p={}", fmt_xr(p));
    }
    if let Some(q) = &exact.derived_q {
        println!("q={}", fmt_xr(q));
    }
    if let Some(sum) = &exact.scaling_sum {
        println!("scaling_sum={}", fmt_xr(&XR::Fin(sum.clone())));
    }
    if let Some(lemma) = &exact.lemma {
        println!(
            "lemma: r={} theta={} a={} t={}",
            lemma.r, lemma.theta, lemma.a, lemma.t
        );
    }
    if let Some(lemma) = &float.lemma {
        let res = lemma_identity_residuals(
            lemma,
            float_spec.alpha.unwrap_or(f64::NAN),
            float.derived_beta.or(float_spec.beta).unwrap_or(f64::NAN),
            float_spec.s.unwrap_or(match lemma.context {
                LemmaContext::T11i => 2.0,
                LemmaContext::T11ii => 3.0,
                _ => f64::NAN,
            }),
        );
        let max = res.iter().cloned().fold(0.0f64, f64::max);
        println!("identity_residual_max={max:e}");
    }
    for note in &float.notes {
        println!("note: {note}");
    }
    Ok(if exact.admissible {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn derive(args: DeriveArgs) -> Result<ExitCode, Error> {
    let context = LemmaContext::parse(&args.context)?;
    let alpha = XR::parse(&args.alpha)?;
    let XR::Fin(alpha_q) = &alpha else {
        return Err(Error::invalid("--alpha must be finite for derivation"));
    };

    let s = match (&args.s, context.fixed_s()) {
        (Some(text), Some(fixed)) => {
            let v = XR::parse(text)?;
            if v.to_f64() != fixed {
                return Err(Error::precondition(format!(
                    "context {} fixes s = {fixed}",
                    context.name()
                )));
            }
            v
        }
        (Some(text), None) => XR::parse(text)?,
        (None, Some(fixed)) => XR::parse(&format!("{fixed}"))?,
        (None, None) => return Err(Error::invalid("--s is required for this context")),
    };
    let XR::Fin(s_q) = &s else {
        return Err(Error::invalid("--s must be finite for derivation"));
    };

    let beta = match (&args.beta, context) {
        (_, LemmaContext::T13) => {
            let (beta, _) = nsreg_core::criteria::exact::t13_derived_exact(alpha_q, s_q);
            if let Some(text) = &args.beta {
                let given = XR::parse(text)?;
                if given != beta {
                    return Err(Error::precondition(format!(
                        "--beta {} is not the derived value {}",
                        text,
                        fmt_xr(&beta)
                    )));
                }
            }
            println!("beta={} (derived)", fmt_xr(&beta));
            beta
        }
        (Some(text), _) => XR::parse(text)?,
        (None, _) => return Err(Error::invalid("--beta is required for this context")),
    };
    let XR::Fin(beta_q) = &beta else {
        return Err(Error::precondition(
            "beta is infinite; the lemma parameters degenerate at this endpoint",
        ));
    };

    let params = derive_lemma_params_exact(context, alpha_q, beta_q, s_q)?;
    println!("context={}", context.name());
    println!("r={}", fmt_xr(&XR::Fin(params.r.clone())));
    println!("theta={}", fmt_xr(&XR::Fin(params.theta.clone())));
    println!("a={}", fmt_xr(&XR::Fin(params.a.clone())));
    println!("t={}", fmt_xr(&params.t));
    let residuals = lemma_identity_residuals_exact(&params, alpha_q, beta_q, s_q);
    let all_zero = residuals
        .iter()
        .flatten()
        .all(num_traits::Zero::is_zero);
    println!("identity_residuals_exact_zero={all_zero}");

    // Float mirror for the residual magnitudes.
    let fp = derive_lemma_params(context, alpha.to_f64(), beta.to_f64(), s.to_f64())?;
    let res = lemma_identity_residuals(&fp, alpha.to_f64(), beta.to_f64(), s.to_f64());
    println!(
        "identity_residual_float_max={:e}",
        res.iter().cloned().fold(0.0f64, f64::max)
    );
    Ok(ExitCode::SUCCESS)
}

fn write_text(path: &Path, text: &str) -> Result<(), Error> {
    fs::write(path, text).map_err(|e| Error::io(path.display().to_string(), e))
}

fn ensure_dir(path: &Path) -> Result<(), Error> {
    fs::create_dir_all(path).map_err(|e| Error::io(path.display().to_string(), e))
}

fn region(args: RegionArgs) -> Result<ExitCode, Error> {
    let theorem = Theorem::parse(&args.theorem)?;
    let sample = region_sample(theorem, args.alpha_max, args.beta_max, args.step)?;
    ensure_dir(&args.out)?;
    write_text(&args.out.join("region.csv"), &sample.to_csv())?;
    write_text(&args.out.join("region.svg"), &sample.to_svg())?;
    let members = sample.member.iter().filter(|m| **m).count();
    println!(
        "region {}: {} of {} lattice points admissible; wrote region.csv and region.svg to {}",
        theorem.name(),
        members,
        sample.member.len(),
        args.out.display()
    );
    Ok(ExitCode::SUCCESS)
}

fn verify_lemma(args: VerifyLemmaArgs) -> Result<ExitCode, Error> {
    let cfg = EnsembleConfig {
        n: args.grid,
        seed: args.seed,
        trials: args.trials,
        mode_cap: args.mode_cap,
    };
    ensure_dir(&args.out)?;
    let mut calibration = Calibration::default();
    let mut record = |name: String, value: f64| {
        calibration.upsert(CalibrationEntry {
            name,
            grid: args.grid,
            seed: args.seed,
            value,
        });
    };

    for r in [2.5, 3.0, 6.0] {
        let rows = lab::ftc_ensemble(&cfg, r)?;
        let worst = lab::max_ratio(&rows);
        write_text(
            &args.out.join(format!("ftc_r{r}.csv")),
            &lab::trials_csv("ftc_column_bound", &cfg, &format!("r={r}"), &rows),
        )?;
        println!("ftc r={r}: max ratio {worst:.6} (bound 1)");
        if worst > 1.0 + 1e-8 {
            return Err(Error::Consistency(format!(
                "oscillation bound violated: ratio {worst}"
            )));
        }
    }

    let s = 2.0;
    let params = derive_lemma_params(LemmaContext::T11i, args.alpha, args.beta, s)?;
    let gn_rows = lab::gn_ensemble(&cfg, args.alpha, s, params.theta, params.r)?;
    let gn_max = lab::max_ratio(&gn_rows);
    write_text(
        &args.out.join("gn.csv"),
        &lab::trials_csv(
            "gn1d_check",
            &cfg,
            &format!(
                "alpha={} s={s} theta={} r={}",
                args.alpha, params.theta, params.r
            ),
            &gn_rows,
        ),
    )?;
    record(lab::gn_constant_name(args.alpha, s, params.theta, params.r), gn_max);
    println!("gn1d: max ratio {gn_max:.6}");

    let lemma_rows = lab::lemma22_ensemble(&cfg, args.alpha, args.beta, s, &params)?;
    let lemma_max = lab::max_ratio(&lemma_rows);
    write_text(
        &args.out.join("lemma22.csv"),
        &lab::trials_csv(
            "lemma22_ratio",
            &cfg,
            &format!("alpha={} beta={} s={s} {params}", args.alpha, args.beta),
            &lemma_rows,
        ),
    )?;
    record(lab::lemma22_constant_name(args.alpha, args.beta, s), lemma_max);
    println!("trilinear: max ratio {lemma_max:.6}");

    for r in [3.0, 4.0, 6.0] {
        let rows = lab::ladyzhenskaya_ensemble(&cfg, r)?;
        let worst = lab::max_ratio(&rows);
        write_text(
            &args.out.join(format!("lad_r{r}.csv")),
            &lab::trials_csv("ladyzhenskaya_ratio", &cfg, &format!("r={r}"), &rows),
        )?;
        record(lab::ladyzhenskaya_constant_name(r), worst);
        println!("ladyzhenskaya r={r}: max ratio {worst:.6}");
    }

    let cal_path = args.out.join("calibration.cal");
    calibration.write(&cal_path)?;
    println!("wrote {}", cal_path.display());
    Ok(ExitCode::SUCCESS)
}

fn simulate_cmd(args: SimulateArgs) -> Result<ExitCode, Error> {
    let text = fs::read_to_string(&args.config)
        .map_err(|e| Error::io(args.config.display().to_string(), e))?;
    let cfg = RunConfig::parse(&text)?;
    let traj = simulate(&cfg.solver)?;
    ensure_dir(&cfg.out_dir)?;

    write_text(&cfg.out_dir.join("diagnostics.csv"), &traj.diagnostics_csv())?;

    let mut index = String::new();
    index.push_str(&format!("# {}\n", nsreg_core::DOMAIN_NOTICE));
    index.push_str(&format!("# nu={}\n", cfg.solver.nu));
    index.push_str(&format!("# dt={}\n", cfg.solver.dt));
    let n = cfg.solver.grid.n();
    index.push_str(&format!("# grid.n={},{},{}\n", n[0], n[1], n[2]));
    index.push_str("step,time,filename\n");
    for (time, field) in &traj.snapshots {
        let step = (time / cfg.solver.dt).round() as usize;
        let filename = format!("snap_{step:06}.ansf");
        field.write_ansf(cfg.out_dir.join(&filename))?;
        index.push_str(&format!("{step},{time},{filename}\n"));
    }
    write_text(&cfg.out_dir.join("index.csv"), &index)?;
    println!(
        "integrated {} steps; wrote {} snapshots and diagnostics.csv to {}",
        cfg.solver.steps(),
        traj.snapshots.len(),
        cfg.out_dir.display()
    );
    Ok(ExitCode::SUCCESS)
}

/// Reads a trajectory directory written by simulate: index.csv with a
/// `# nu=` header plus the referenced snapshot files.
fn read_trajectory(dir: &Path) -> Result<Trajectory, Error> {
    let index_path = dir.join("index.csv");
    let text = fs::read_to_string(&index_path)
        .map_err(|e| Error::io(index_path.display().to_string(), e))?;
    let mut nu = None;
    let mut snapshots = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if let Some(rest) = line.strip_prefix('#') {
            if let Some(v) = rest.trim().strip_prefix("nu=") {
                nu = v.parse::<f64>().ok();
            }
            continue;
        }
        if line.is_empty() || line.starts_with("step,") {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 3 {
            return Err(Error::format(
                index_path.display().to_string(),
                format!("bad index row '{line}'"),
            ));
        }
        let time: f64 = fields[1].parse().map_err(|_| {
            Error::format(
                index_path.display().to_string(),
                format!("bad time in row '{line}'"),
            )
        })?;
        let field = Field::read_ansf(dir.join(fields[2]))?;
        snapshots.push((time, field));
    }
    let nu = nu.ok_or_else(|| {
        Error::format(
            index_path.display().to_string(),
            "missing '# nu=' header line",
        )
    })?;
    Trajectory::from_snapshots(nu, snapshots)
}

fn monitor_cmd(args: MonitorArgs) -> Result<ExitCode, Error> {
    let theorem = Theorem::parse(&args.theorem)?;
    let ex = &args.exponents;
    let spec = CriterionSpec {
        theorem,
        alpha: parse_opt_xr("alpha", &ex.alpha)?.as_ref().map(XR::to_f64),
        beta: parse_opt_xr("beta", &ex.beta)?.as_ref().map(XR::to_f64),
        s: parse_opt_xr("s", &ex.s)?.as_ref().map(XR::to_f64),
        q: parse_opt_xr("q", &ex.q)?.as_ref().map(XR::to_f64),
        p: parse_opt_xr("p", &ex.p)?.as_ref().map(XR::to_f64),
    };
    let traj = read_trajectory(&args.traj)?;
    let report = evaluate_criterion(&traj, &spec)?;
    let csv = report.to_csv(args.threshold);
    match &args.out {
        Some(path) => {
            write_text(path, &csv)?;
            println!(
                "u3 aggregate {} | d3u3 aggregate {} | h1 max {} | report {}",
                report.quantity_u3,
                report.quantity_d3u3,
                report.h1_max,
                path.display()
            );
        }
        None => print!("{csv}"),
    }
    Ok(ExitCode::SUCCESS)
}
