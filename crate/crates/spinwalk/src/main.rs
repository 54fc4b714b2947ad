//! Thin command-line front end over the library.
//!
//! ```text
//! spinwalk evolve     --config cfg.json [--out DIR] [--stride N] [--memory-cap BYTES]
//! spinwalk sweep      --config cfg.json [--out DIR] [--workers N] [--memory-cap BYTES]
//! spinwalk dispersion [--config cfg.json] [--out DIR]
//! spinwalk llcompare  --config cfg.json [--out DIR] [--memory-cap BYTES]
//! ```
//!
//! Exit codes: 0 success, 2 config error, 3 resource-cap error, 1 anything else.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use spinwalk::config::{WalkConfig, DEFAULT_MEMORY_CAP};
use spinwalk::error::Error;
use spinwalk::{io, runner, semiclassical, sweep};

struct Args {
    command: String,
    config: Option<PathBuf>,
    out: PathBuf,
    workers: usize,
    memory_cap: usize,
    stride: Option<usize>,
}

fn usage() -> String {
    "usage: spinwalk <evolve|sweep|dispersion|llcompare> \
     [--config PATH] [--out DIR] [--workers N] [--memory-cap BYTES] [--stride N]"
        .to_string()
}

fn parse_args(mut argv: impl Iterator<Item = String>) -> Result<Args, String> {
    let command = argv.next().ok_or_else(usage)?;
    if !["evolve", "sweep", "dispersion", "llcompare"].contains(&command.as_str()) {
        return Err(format!("unknown subcommand `{command}`\n{}", usage()));
    }
    let mut args = Args {
        command,
        config: None,
        out: PathBuf::from("."),
        workers: std::thread::available_parallelism()
            .map(|n| n.get())
            .unwrap_or(1),
        memory_cap: DEFAULT_MEMORY_CAP,
        stride: None,
    };
    while let Some(flag) = argv.next() {
        let mut value = || argv.next().ok_or(format!("flag {flag} needs a value"));
        match flag.as_str() {
            "--config" => args.config = Some(PathBuf::from(value()?)),
            "--out" => args.out = PathBuf::from(value()?),
            "--workers" => {
                args.workers = value()?.parse().map_err(|e| format!("--workers: {e}"))?
            }
            "--memory-cap" => {
                args.memory_cap = value()?.parse().map_err(|e| format!("--memory-cap: {e}"))?
            }
            "--stride" => {
                args.stride = Some(value()?.parse().map_err(|e| format!("--stride: {e}"))?)
            }
            other => return Err(format!("unknown flag `{other}`\n{}", usage())),
        }
    }
    Ok(args)
}

fn load_config(args: &Args) -> spinwalk::Result<WalkConfig> {
    let path = args
        .config
        .as_ref()
        .ok_or_else(|| Error::config("config", "this subcommand needs --config PATH"))?;
    let mut cfg = WalkConfig::from_path(path)?;
    if let Some(stride) = args.stride {
        cfg.sample_stride = Some(stride);
    }
    Ok(cfg)
}

fn cmd_evolve(args: &Args) -> spinwalk::Result<()> {
    let started = Instant::now();
    let cfg = load_config(args)?;
    let resolved = cfg.resolve()?;
    let series = runner::run_walk(&resolved, args.memory_cap)?;
    let files = io::write_series(&args.out, &series)?;
    io::write_manifest(
        &args.out.join("manifest.json"),
        &cfg,
        started.elapsed().as_secs_f64(),
    )?;
    for f in files {
        println!("wrote {}", f.display());
    }
    Ok(())
}

fn cmd_sweep(args: &Args) -> spinwalk::Result<()> {
    let started = Instant::now();
    let cfg = load_config(args)?;
    let default_axis = || -> Vec<f64> {
        (1..=32)
            .map(|i| std::f64::consts::PI * i as f64 / 33.0)
            .collect()
    };
    let grid = sweep::SweepGrid {
        theta_values: cfg
            .theta_values
            .clone()
            .or_else(|| cfg.theta.map(|t| vec![t]))
            .unwrap_or_else(default_axis),
        j_values: cfg.j_values.clone().unwrap_or_else(|| vec![cfg.j]),
        template: cfg.clone(),
    };
    let result = sweep::run_sweep(&grid, args.workers, args.memory_cap)?;
    let path = args.out.join("sweep.csv");
    io::write_sweep_csv(&path, &result)?;
    io::write_manifest(
        &args.out.join("manifest.json"),
        &cfg,
        started.elapsed().as_secs_f64(),
    )?;
    let failures = result.cells.iter().filter(|c| c.is_err()).count();
    println!(
        "wrote {} ({} cells, {failures} failed)",
        path.display(),
        result.cells.len()
    );
    Ok(())
}

fn cmd_dispersion(args: &Args) -> spinwalk::Result<()> {
    use std::fmt::Write as _;
    let started = Instant::now();
    let mut config_echo = None;
    let thetas: Vec<f64> = match &args.config {
        Some(_) => {
            let cfg = load_config(args)?;
            let thetas = match (cfg.theta, &cfg.theta_values) {
                (_, Some(vals)) => vals.clone(),
                (Some(t), None) => vec![t],
                _ => {
                    return Err(Error::config(
                        "theta",
                        "dispersion needs `theta` or `theta_values`",
                    ))
                }
            };
            config_echo = Some(cfg);
            thetas
        }
        None => vec![
            std::f64::consts::PI / 8.0,
            std::f64::consts::PI / 4.0,
            3.0 * std::f64::consts::PI / 8.0,
            std::f64::consts::PI / 2.0,
        ],
    };
    let grid: Vec<f64> = (0..=256)
        .map(|i| -std::f64::consts::PI + 2.0 * std::f64::consts::PI * i as f64 / 256.0)
        .collect();

    let mut bands = String::from("theta,k,E_plus,E_minus,dx,dy,dz\n");
    for &theta in &thetas {
        for &k in &grid {
            let q = semiclassical::quasienergy(k, theta);
            match q.d_hat {
                Some(d) => {
                    let _ = writeln!(
                        bands,
                        "{theta},{k},{},{},{},{},{}",
                        q.e_plus, q.e_minus, d[0], d[1], d[2]
                    );
                }
                None => {
                    let _ = writeln!(bands, "{theta},{k},{},{},,,", q.e_plus, q.e_minus);
                }
            }
        }
    }
    let mut velocity = String::from("theta,p,v_g\n");
    for &theta in &thetas {
        for &p in &grid {
            if let Ok(v) = semiclassical::group_velocity(p, theta) {
                let _ = writeln!(velocity, "{theta},{p},{v}");
            }
        }
    }
    std::fs::create_dir_all(&args.out)?;
    let bands_path = args.out.join("bands.csv");
    let velocity_path = args.out.join("velocity.csv");
    std::fs::write(&bands_path, bands)?;
    std::fs::write(&velocity_path, velocity)?;
    if let Some(cfg) = &config_echo {
        io::write_manifest(
            &args.out.join("manifest.json"),
            cfg,
            started.elapsed().as_secs_f64(),
        )?;
    }
    println!("wrote {}", bands_path.display());
    println!("wrote {}", velocity_path.display());
    Ok(())
}

fn cmd_llcompare(args: &Args) -> spinwalk::Result<()> {
    use std::fmt::Write as _;
    let started = Instant::now();
    let mut cfg = load_config(args)?;
    if !cfg.observables.iter().any(|o| o == "mean_spin") {
        cfg.observables.push("mean_spin".into());
    }
    let resolved = cfg.resolve()?;
    let theta = resolved
        .coin
        .uniform_angle()
        .ok_or_else(|| Error::config("theta", "llcompare needs a uniform coin angle"))?;
    if resolved.lattice.boundary() != spinwalk::hilbert::Boundary::Periodic {
        return Err(Error::config(
            "boundary",
            "llcompare compares against the homogeneous mean field; use \"p\"",
        ));
    }
    let num_nodes = resolved.lattice.num_nodes();

    let series = runner::run_walk(&resolved, args.memory_cap)?;
    let exact = series.mean_spin.as_ref().expect("mean_spin recorded");

    // mean-field twins, matched to the energy of the initial condition
    let p = semiclassical::reference_momentum(theta, num_nodes);
    let coeffs = semiclassical::dirac_coefficients(p, theta)
        .map_err(|e| Error::InvalidArgument(format!("no mean-field reference here: {e}")))?;
    let v_g = coeffs.group_velocity();
    let s0 = [exact[0].sx, exact[0].sy, exact[0].sz];
    let substeps = 10;
    let dt = 1.0 / substeps as f64;
    let mut prec = s0;
    let mut diss = s0;
    let mut rows = Vec::with_capacity(series.times.len());
    rows.push((prec, diss));
    for window in series.times.windows(2) {
        let walk_steps = window[1] - window[0];
        for _ in 0..walk_steps * substeps {
            prec = semiclassical::ll_precession_step(prec, coeffs.d0, cfg.j, num_nodes, dt);
            diss = semiclassical::ll_dissipative_step(diss, coeffs.d0, cfg.j, num_nodes, v_g, dt)?;
        }
        rows.push((prec, diss));
    }

    let mut out = String::from(
        "t,exact.sx,exact.sy,exact.sz,prec.sx,prec.sy,prec.sz,diss.sx,diss.sy,diss.sz\n",
    );
    for ((t, s), (p_row, d_row)) in series.times.iter().zip(exact).zip(&rows) {
        let _ = writeln!(
            out,
            "{t},{},{},{},{},{},{},{},{},{}",
            s.sx, s.sy, s.sz, p_row[0], p_row[1], p_row[2], d_row[0], d_row[1], d_row[2]
        );
    }
    std::fs::create_dir_all(&args.out)?;
    let path = args.out.join("llcompare.csv");
    std::fs::write(&path, out)?;
    io::write_manifest(
        &args.out.join("manifest.json"),
        &cfg,
        started.elapsed().as_secs_f64(),
    )?;
    println!("wrote {} (p = {p:.6})", path.display());
    Ok(())
}

fn main() -> ExitCode {
    let args = match parse_args(std::env::args().skip(1)) {
        Ok(args) => args,
        Err(msg) => {
            eprintln!("{msg}");
            return ExitCode::from(2);
        }
    };
    let result = match args.command.as_str() {
        "evolve" => cmd_evolve(&args),
        "sweep" => cmd_sweep(&args),
        "dispersion" => cmd_dispersion(&args),
        "llcompare" => cmd_llcompare(&args),
        _ => unreachable!("validated in parse_args"),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            match err {
                Error::Config { .. } | Error::InvalidArgument(_) | Error::Json(_) => {
                    ExitCode::from(2)
                }
                Error::MemoryCap { .. } | Error::DimensionCap { .. } => ExitCode::from(3),
                _ => ExitCode::from(1),
            }
        }
    }
}
