//! `splv`: conformance checking for software product lines.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use splv::containment::compute_conformance;
use splv::error::Error;
use splv::generator::{self, GenConfig};
use splv::limits::Limits;
use splv::promela::emit_promela;
use splv::qbf::{qcir::export_qcir, qdimacs::export_qdimacs};
use splv::report::Report;
use splv::spl::{
    build_manifest_psi, check_spl, cross_check, load_machine, load_manifest, CheckOptions,
    SplMode,
};

#[derive(Parser)]
#[command(name = "splv", version, about = "Variability conformance checking for SPL models")]
struct Cli {
    /// Worker threads for feature and pair checks (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check one feature: design against requirement.
    CheckFeature(CheckFeatureArgs),
    /// Check a whole SPL manifest.
    CheckSpl(CheckSplArgs),
    /// Generate a random SPL (conforming by construction unless bugs are
    /// injected).
    Gen(GenArgs),
    /// Render a previously written report file.
    Report(ReportArgs),
    /// Export artifacts without deciding a verdict.
    #[command(subcommand)]
    Export(ExportCommand),
}

#[derive(Args)]
struct CheckFeatureArgs {
    /// Requirement model file.
    req: PathBuf,
    /// Design model file.
    des: PathBuf,
    /// Also write the generated Promela model here.
    #[arg(long)]
    promela: Option<PathBuf>,
    /// Also write the conformance mapping table here.
    #[arg(long)]
    mapping: Option<PathBuf>,
    /// Write the machine-readable report here.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct CheckSplArgs {
    /// Manifest file.
    manifest: PathBuf,
    /// Checking strategy.
    #[arg(long, default_value = "qbf")]
    mode: SplMode,
    /// Run all three strategies and require agreement.
    #[arg(long)]
    cross_check: bool,
    /// Run the SPL-level step even when a feature already failed.
    #[arg(long)]
    keep_going: bool,
    /// Export the conformance formula (`.qdimacs` or `.qcir` by extension).
    #[arg(long)]
    export_qbf: Option<PathBuf>,
    /// Write the machine-readable report here.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct GenArgs {
    /// Output directory for the generated models and manifest.
    out: PathBuf,
    /// Number of features.
    #[arg(long)]
    features: usize,
    /// Generator seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Per-feature bug injection probability.
    #[arg(long, default_value_t = 0.0)]
    inject_bugs: f64,
}

#[derive(Args)]
struct ReportArgs {
    /// Report file written by check-feature or check-spl.
    file: PathBuf,
    #[arg(long, value_enum, default_value_t = ReportFormat::Table)]
    format: ReportFormat,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportFormat {
    Table,
    Kv,
}

#[derive(Subcommand)]
enum ExportCommand {
    /// Build the conformance formula of a manifest and write it out.
    Qbf {
        manifest: PathBuf,
        /// Output path; format chosen by --format.
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = QbfFormat::Qdimacs)]
        format: QbfFormat,
    },
    /// Emit the Promela conformance model for one feature.
    Promela {
        req: PathBuf,
        des: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Compute and write the conformance mapping table for one feature.
    Mapping {
        req: PathBuf,
        des: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum QbfFormat {
    Qdimacs,
    Qcir,
}

fn write_file(path: &PathBuf, content: &str) -> Result<(), Error> {
    std::fs::write(path, content).map_err(|e| Error::Io(path.display().to_string(), e))
}

fn exit_code_for(err: &Error) -> ExitCode {
    match err {
        Error::Internal(_) => ExitCode::from(3),
        _ => ExitCode::from(2),
    }
}

fn run_check_feature(args: &CheckFeatureArgs, limits: &Limits) -> Result<ExitCode, Error> {
    let start = std::time::Instant::now();
    let req = load_machine(&args.req)?;
    let des = load_machine(&args.des)?;
    let mapping = compute_conformance(&des, &req, limits)?;
    if let Some(path) = &args.promela {
        write_file(path, &emit_promela(&des, &req))?;
    }
    if let Some(path) = &args.mapping {
        write_file(path, &mapping.render_table())?;
    }
    let failing: Vec<String> =
        mapping.failing().iter().map(|c| c.render(&mapping.design_scope)).collect();
    let report = Report {
        name: format!("{}<={}", des.name, req.name),
        kind: "feature".into(),
        features: vec![splv::report::FeatureRow {
            name: format!("{}<={}", des.name, req.name),
            design_variants: mapping.design_variants(),
            requirement_variants: mapping.requirement_variants,
            mapping_pairs: mapping.pair_count(),
            failing: failing.clone(),
            time_ms: start.elapsed().as_millis(),
        }],
        spl: None,
        total_time_ms: start.elapsed().as_millis(),
    };
    if let Some(path) = &args.report {
        write_file(path, &report.to_kv())?;
    }
    print!("{}", report.to_table());
    if mapping.conforms() {
        println!("feature verdict: conforms");
        Ok(ExitCode::SUCCESS)
    } else {
        println!("feature verdict: NON-CONFORMING");
        for f in failing {
            println!("  empty image: {f}");
        }
        Ok(ExitCode::from(1))
    }
}

fn run_check_spl(args: &CheckSplArgs, limits: &Limits) -> Result<ExitCode, Error> {
    let manifest = load_manifest(&args.manifest)?;
    let opts = CheckOptions { limits: *limits, keep_going: args.keep_going };
    let outcomes = if args.cross_check {
        cross_check(&manifest, &[SplMode::Qbf, SplMode::Monolithic, SplMode::Enumerate], &opts)?
    } else {
        vec![check_spl(&manifest, args.mode, &opts)?]
    };

    if let Some(path) = &args.export_qbf {
        let psi = build_manifest_psi(&manifest, &outcomes[0].features)?;
        let is_qcir = path.extension().map(|e| e == "qcir").unwrap_or(false);
        let text = if is_qcir { export_qcir(&psi) } else { export_qdimacs(&psi) };
        write_file(path, &text)?;
    }

    let scope = manifest.design_scope()?;
    let primary = &outcomes[0];
    let report = Report::from_outcome(primary, Some(&scope));
    if let Some(path) = &args.report {
        write_file(path, &report.to_kv())?;
    }
    print!("{}", report.to_table());
    for extra in &outcomes[1..] {
        let r = Report::from_outcome(extra, Some(&scope));
        if let Some(spl) = &r.spl {
            println!("cross-check {}: {}", spl.mode, spl.verdict);
        }
    }
    if primary.conforms() {
        println!("spl verdict: conforms");
        Ok(ExitCode::SUCCESS)
    } else {
        println!("spl verdict: NON-CONFORMING");
        Ok(ExitCode::from(1))
    }
}

fn run(cli: &Cli) -> Result<ExitCode, Error> {
    let limits = Limits::from_env();
    match &cli.command {
        Command::CheckFeature(args) => run_check_feature(args, &limits),
        Command::CheckSpl(args) => run_check_spl(args, &limits),
        Command::Gen(args) => {
            let cfg = GenConfig {
                features: args.features.max(1),
                seed: args.seed,
                inject_bugs: args.inject_bugs,
            };
            let generated = generator::generate(&cfg);
            generator::write_to(&args.out, &generated)?;
            println!(
                "wrote {} files to {} (manifest: {})",
                generated.files.len(),
                args.out.display(),
                generated.manifest_path
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Report(args) => {
            let text = std::fs::read_to_string(&args.file)
                .map_err(|e| Error::Io(args.file.display().to_string(), e))?;
            let report = Report::from_kv(&text)
                .map_err(|e| Error::parse_in(args.file.display().to_string(), e))?;
            match args.format {
                ReportFormat::Table => print!("{}", report.to_table()),
                ReportFormat::Kv => print!("{}", report.to_kv()),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Export(cmd) => {
            match cmd {
                ExportCommand::Qbf { manifest, out, format } => {
                    let manifest = load_manifest(manifest)?;
                    let outcome = check_spl(
                        &manifest,
                        SplMode::Qbf,
                        &CheckOptions { limits, keep_going: true },
                    )?;
                    let psi = build_manifest_psi(&manifest, &outcome.features)?;
                    let text = match format {
                        QbfFormat::Qdimacs => export_qdimacs(&psi),
                        QbfFormat::Qcir => export_qcir(&psi),
                    };
                    write_file(out, &text)?;
                }
                ExportCommand::Promela { req, des, out } => {
                    let req = load_machine(req)?;
                    let des = load_machine(des)?;
                    write_file(out, &emit_promela(&des, &req))?;
                }
                ExportCommand::Mapping { req, des, out } => {
                    let req = load_machine(req)?;
                    let des = load_machine(des)?;
                    let mapping = compute_conformance(&des, &req, &limits)?;
                    write_file(out, &mapping.render_table())?;
                }
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global();
    }
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            let prefix = match &e {
                Error::Capacity(_) => "capacity error",
                Error::Internal(_) => "internal error",
                _ => "error",
            };
            eprintln!("{prefix}: {e}");
            exit_code_for(&e)
        }
    }
}
