use std::process::ExitCode;

use clap::Parser;

use modent::io::{
    binned_csv, binned_json, edges_csv, edges_json, emit_plot_data, per_state_csv,
    per_state_json, provenance_header, resolve_config, sweep_csv, sweep_json, write_output,
    Command, ConfigFile, OutputFormat, RunConfig,
};
use modent::{
    detect_mobility_edges, diagonalize, run_ensemble, spectrum_concurrence, sweep_parameter,
    Error,
};

/// Single-electron mode entanglement on 1D lattices.
#[derive(Parser, Debug)]
#[command(name = "modent", version, about)]
struct Cli {
    /// Run command: spectrum | ensemble | sweep | edges (overrides config)
    command: Option<String>,
    /// TOML configuration file
    #[arg(short, long)]
    config: Option<String>,
    /// Override chain size N
    #[arg(long)]
    n: Option<usize>,
    /// Override the base seed
    #[arg(long)]
    seed: Option<u64>,
    /// Override the ensemble sample count
    #[arg(long)]
    samples: Option<usize>,
    /// Disorder realization index (spectrum command)
    #[arg(long, default_value_t = 0)]
    realization: u64,
    /// Override the output path
    #[arg(short, long)]
    output: Option<String>,
    /// Override the output format: csv | json
    #[arg(long)]
    format: Option<String>,
}

fn load(cli: &Cli) -> modent::Result<RunConfig> {
    let mut file: ConfigFile = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
                path: path.clone(),
                source,
            })?;
            toml::from_str(&text)
                .map_err(|e| Error::Config(format!("{path}: config parse error: {e}")))?
        }
        None => ConfigFile::default(),
    };
    if let Some(cmd) = &cli.command {
        file.command = Some(cmd.clone());
    }
    if let Some(n) = cli.n {
        file.model.n = Some(n);
    }
    if let Some(seed) = cli.seed {
        file.model.seed = Some(seed);
        file.ensemble.base_seed = Some(seed);
    }
    if let Some(samples) = cli.samples {
        file.ensemble.samples = Some(samples);
    }
    if let Some(path) = &cli.output {
        file.output.path = Some(path.clone());
    }
    if let Some(format) = &cli.format {
        file.output.format = Some(format.clone());
    }
    let mut cfg = resolve_config(&file)?;
    cfg.realization = cli.realization;
    Ok(cfg)
}

fn run(cfg: &RunConfig) -> modent::Result<()> {
    let header = provenance_header(&cfg.resolved);
    print!("{header}");
    let contents = match cfg.command {
        Command::Spectrum => {
            let h = modent::build_hamiltonian(&cfg.spec.params, cfg.realization)?;
            let spectrum = diagonalize(&h)?;
            let report = spectrum_concurrence(&spectrum);
            println!(
                "# N={} scaled_mean_concurrence={:.6} residual={:.3e}",
                cfg.spec.params.n, report.scaled_mean_concurrence, spectrum.residual_norm
            );
            match cfg.format {
                OutputFormat::Csv => per_state_csv(&report, &header),
                OutputFormat::Json => per_state_json(&report, &cfg.resolved),
            }
        }
        Command::Ensemble => {
            let (curve, global) = run_ensemble(&cfg.spec)?;
            println!(
                "# samples={} scaled_concurrence_mean={:.6} stderr={:.3e}",
                global.samples, global.mean_scaled_concurrence, global.stderr
            );
            match cfg.format {
                OutputFormat::Csv => binned_csv(&curve, Some(&global), &header),
                OutputFormat::Json => binned_json(&curve, Some(&global), &cfg.resolved),
            }
        }
        Command::Sweep => {
            let parameter = cfg
                .sweep_parameter
                .ok_or_else(|| Error::Config("sweep section missing".into()))?;
            let grid = cfg.sweep_grid.as_deref().unwrap_or(&[]);
            let result = sweep_parameter(&cfg.spec, parameter, grid, &cfg.sweep_sizes)?;
            for series in &result.series {
                match &series.transitions.headline {
                    Some(t) => println!(
                        "# N={} transition at {}={:.4} +/- {:.4} ({:?})",
                        series.n,
                        result.parameter.name(),
                        t.location,
                        t.uncertainty,
                        t.method
                    ),
                    None => println!("# N={} no transition detected", series.n),
                }
            }
            let stem = cfg
                .output_path
                .strip_suffix(".csv")
                .or_else(|| cfg.output_path.strip_suffix(".json"))
                .unwrap_or(&cfg.output_path);
            for path in emit_plot_data(&result, stem, &header)? {
                println!("# wrote {path}");
            }
            match cfg.format {
                OutputFormat::Csv => sweep_csv(&result, &header),
                OutputFormat::Json => sweep_json(&result, &cfg.resolved),
            }
        }
        Command::Edges => {
            let (curve, _) = run_ensemble(&cfg.spec)?;
            let est = detect_mobility_edges(&curve, cfg.edge_threshold, cfg.spec.params.n)?;
            println!(
                "# edges: lower={:?} upper={:?} threshold={}",
                est.lower_edge, est.upper_edge, est.threshold_used
            );
            match cfg.format {
                OutputFormat::Csv => edges_csv(&est, &header),
                OutputFormat::Json => edges_json(&est, &cfg.resolved),
            }
        }
    };
    write_output(&cfg.output_path, &contents)?;
    println!("# wrote {}", cfg.output_path);
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match load(&cli) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    match run(&cfg) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e @ (Error::Config(_) | Error::InvalidParams(_))) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
    }
}
