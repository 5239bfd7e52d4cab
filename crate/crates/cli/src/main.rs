use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use msldpc::codegen::{CodeBuilder, CATALOG};
use msldpc::decoder::{Selection, StopScope};
use msldpc::simchan::{csv_row, SimOptions, CSV_HEADER};
use msldpc::{build_code, catalog, catalog_code, CodeSpec, Decoder, DecoderConfig, DecoderKind, StopRule};

mod ebno;

#[derive(Parser)]
#[command(
    name = "msldpc",
    version,
    about = "Cyclic LDPC codes from idempotents, with BP and substitution BP decoding"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a code from cyclotomic coset representatives, or search for orthogonal ones.
    Construct(ConstructArgs),
    /// List the built-in codes.
    Catalog,
    /// Monte-Carlo FER and mrl statistics over BPSK/AWGN.
    Simulate(Box<SimulateArgs>),
}

#[derive(Args)]
struct ConstructArgs {
    /// Code length (odd).
    #[arg(long)]
    n: usize,
    /// Comma-separated coset representatives selecting the factors of 1+z^n.
    #[arg(
        long,
        value_delimiter = ',',
        conflicts_with = "search",
        required_unless_present = "search"
    )]
    cosets: Vec<usize>,
    /// List every orthogonal code whose parity-check weight is at most this.
    #[arg(long)]
    search: Option<usize>,
    /// Write the code file here (with --search: a directory, one file per code).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Directory for code files when --out is not given.
    #[arg(long, env = "MSLDPC_OUT_DIR")]
    out_dir: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum DecoderArg {
    Bp,
    Modbp,
}

#[derive(Clone, Copy, ValueEnum)]
enum SelectionArg {
    Random,
    Sequential,
}

#[derive(Clone, Copy, ValueEnum)]
enum StopArg {
    Trial,
    Global,
}

#[derive(Args)]
#[command(group = clap::ArgGroup::new("selector").required(true).args(["code", "spec", "n"]))]
struct SimulateArgs {
    /// Built-in code, e.g. 63_37.
    #[arg(long)]
    code: Option<String>,
    /// Code file written by `construct`.
    #[arg(long)]
    spec: Option<PathBuf>,
    /// Code length, together with --cosets.
    #[arg(long, requires = "cosets")]
    n: Option<usize>,
    /// Coset representatives, together with --n.
    #[arg(long, value_delimiter = ',', requires = "n")]
    cosets: Vec<usize>,

    #[arg(long, value_enum, default_value = "bp")]
    decoder: DecoderArg,
    /// Rows substituted per iteration (modbp).
    #[arg(long, default_value_t = 1)]
    psi: usize,
    /// Substitution trials per frame (modbp).
    #[arg(long, default_value_t = 50)]
    trials: usize,
    #[arg(long, default_value_t = 50)]
    max_iter: usize,
    /// Number of extra dual codewords generated for substitution.
    #[arg(long, default_value_t = 1024)]
    pool_size: usize,
    /// Parity-check rows summed per extra dual codeword.
    #[arg(long, default_value_t = 2)]
    pool_order: usize,
    #[arg(long, default_value_t = 0)]
    pool_seed: u64,
    /// Magnitude limit on channel and check-to-variable LLRs.
    #[arg(long, default_value_t = msldpc::decoder::DEFAULT_CLIP)]
    clip: f64,
    #[arg(long, value_enum, default_value = "random")]
    selection: SelectionArg,
    /// Whether a valid decision inside a trial ends that trial or the whole decode.
    #[arg(long, value_enum, default_value = "trial")]
    stop: StopArg,
    /// Skip substitution trials when standard BP already returns a codeword.
    #[arg(long)]
    early_stop: bool,

    /// Eb/N0 points in dB: `a..b:step` (inclusive) or a comma-separated list.
    #[arg(long, allow_hyphen_values = true)]
    ebno: String,
    #[arg(long, default_value_t = 100)]
    min_errors: u64,
    #[arg(long, default_value_t = 10_000_000)]
    max_frames: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Parallel workers; 0 uses all cores.
    #[arg(long, default_value_t = 0)]
    workers: usize,
    /// Report progress every this many frames; 0 is silent.
    #[arg(long, default_value_t = 0)]
    progress_every: u64,
    /// Transmit the all-zero codeword instead of random messages.
    #[arg(long)]
    all_zero: bool,
    /// CSV output file; stdout when neither this nor --out-dir is set.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Directory for the CSV when --out is not given.
    #[arg(long, env = "MSLDPC_OUT_DIR")]
    out_dir: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.command {
        Command::Construct(a) => construct(&a),
        Command::Catalog => print_catalog(),
        Command::Simulate(a) => simulate(&a),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn summary(spec: &CodeSpec) -> String {
    let reps: Vec<String> = spec.coset_reps.iter().map(|r| r.to_string()).collect();
    format!(
        "n={} k={} row_weight={} d_min={} orthogonal={} cosets={}",
        spec.n,
        spec.k,
        spec.row_weight,
        spec.d_min.map_or("unknown".to_string(), |d| d.to_string()),
        if spec.orthogonal { "yes" } else { "no" },
        reps.join(",")
    )
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

fn construct(a: &ConstructArgs) -> Result<()> {
    if let Some(w) = a.search {
        let hits = CodeBuilder::new(a.n)?.search_orthogonal(w)?;
        println!(
            "{} orthogonal codes of length {} with row weight <= {w}",
            hits.len(),
            a.n
        );
        let dir = a.out.as_ref().or(a.out_dir.as_ref());
        if let Some(d) = dir {
            fs::create_dir_all(d).with_context(|| format!("cannot create {}", d.display()))?;
        }
        for (reps, spec) in &hits {
            println!("{}", summary(spec));
            if let Some(d) = dir {
                let tag: Vec<String> = reps.iter().map(|r| r.to_string()).collect();
                write_file(
                    &d.join(format!("{}_c{}.code", spec.name(), tag.join("-"))),
                    &spec.to_text(),
                )?;
            }
        }
        return Ok(());
    }

    let spec = build_code(a.n, &a.cosets)?;
    println!("{}", summary(&spec));
    println!("u(x) = {}", spec.u.poly().to_string().replace('z', "x"));
    println!("h(x) = {}", spec.h.to_string().replace('z', "x"));
    println!("g(x) = {}", spec.g.to_string().replace('z', "x"));
    if !spec.orthogonal {
        let report = msldpc::check_orthogonality(spec.u.poly(), spec.n);
        let detail = report
            .collision
            .map(|c| {
                format!(
                    ": difference {} occurs for pairs {:?} and {:?}",
                    c.difference, c.first, c.second
                )
            })
            .unwrap_or_default();
        eprintln!("warning: parity checks are not orthogonal{detail}");
    }
    let path = match (&a.out, &a.out_dir) {
        (Some(p), _) => Some(p.clone()),
        (None, Some(d)) => Some(d.join(format!("{}.code", spec.name()))),
        _ => None,
    };
    if let Some(p) = path {
        write_file(&p, &spec.to_text())?;
        println!("wrote {}", p.display());
    }
    Ok(())
}

fn print_catalog() -> Result<()> {
    let codes = catalog()?;
    println!(
        "{:<9} {:>4} {:>4} {:>10} {:>5}  cosets",
        "code", "n", "k", "row_weight", "d_min"
    );
    for (entry, spec) in CATALOG.iter().zip(&codes) {
        let reps: Vec<String> = entry.coset_reps.iter().map(|r| r.to_string()).collect();
        println!(
            "{:<9} {:>4} {:>4} {:>10} {:>5}  {}",
            spec.name(),
            spec.n,
            spec.k,
            spec.row_weight,
            spec.d_min.map_or("?".into(), |d| d.to_string()),
            reps.join(",")
        );
    }
    Ok(())
}

fn decoder_config(a: &SimulateArgs) -> DecoderConfig {
    DecoderConfig {
        kind: match a.decoder {
            DecoderArg::Bp => DecoderKind::Standard,
            DecoderArg::Modbp => DecoderKind::Modified,
        },
        max_iter: a.max_iter,
        trials: a.trials,
        psi: a.psi,
        pool_size: a.pool_size,
        pool_order: a.pool_order,
        pool_seed: a.pool_seed,
        clip: a.clip,
        selection: match a.selection {
            SelectionArg::Random => Selection::Random,
            SelectionArg::Sequential => Selection::Sequential,
        },
        stop: match a.stop {
            StopArg::Trial => StopScope::Trial,
            StopArg::Global => StopScope::Global,
        },
        early_stop_on_valid: a.early_stop,
    }
}

fn load_code(a: &SimulateArgs) -> Result<CodeSpec> {
    if let Some(name) = &a.code {
        return Ok(catalog_code(name)?);
    }
    if let Some(path) = &a.spec {
        let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
        return CodeSpec::from_text(&text).with_context(|| format!("invalid code file {}", path.display()));
    }
    match a.n {
        Some(n) => Ok(build_code(n, &a.cosets)?),
        None => bail!("no code selected"),
    }
}

fn simulate(a: &SimulateArgs) -> Result<()> {
    let spec = load_code(a)?;
    let points = ebno::parse(&a.ebno)?;
    let cfg = decoder_config(a);
    let decoder = Decoder::new(&spec, cfg.clone())?;
    if !spec.orthogonal {
        eprintln!("warning: parity checks of {} are not orthogonal", spec.name());
    }
    let stop = StopRule {
        min_errors: a.min_errors,
        max_frames: a.max_frames,
    };
    let opts = SimOptions {
        workers: a.workers,
        all_zero: a.all_zero,
        progress_every: a.progress_every,
        ..SimOptions::default()
    };

    let path = match (&a.out, &a.out_dir) {
        (Some(p), _) => Some(p.clone()),
        (None, Some(d)) => Some(d.join(format!("{}_{}_s{}.csv", spec.name(), cfg.name(), a.seed))),
        _ => None,
    };
    let mut out: Box<dyn Write> = match &path {
        Some(p) => {
            let f = File::create(p).with_context(|| format!("cannot create {}", p.display()))?;
            // Settings the CSV columns do not carry go into a sidecar next to it.
            let meta = format!(
                "{}{}seed={}\nmin_errors={}\nmax_frames={}\nall_zero={}\n",
                spec.to_text(),
                cfg.to_text(),
                a.seed,
                a.min_errors,
                a.max_frames,
                a.all_zero
            );
            write_file(&p.with_extension("meta"), &meta)?;
            Box::new(BufWriter::new(f))
        }
        None => Box::new(io::stdout().lock()),
    };
    writeln!(out, "{CSV_HEADER}")?;
    out.flush()?;

    eprintln!(
        "{}: {} decoder, {} point(s), seed {}",
        spec.name(),
        cfg.name(),
        points.len(),
        a.seed
    );
    let mut write_err = None;
    msldpc::run_sweep(
        &spec,
        &decoder,
        &points,
        stop,
        a.seed,
        &opts,
        |p| {
            let res = writeln!(out, "{}", csv_row(p, &cfg, a.seed)).and_then(|_| out.flush());
            if let Err(e) = res {
                write_err.get_or_insert(e);
            }
            eprintln!(
                "Eb/N0 {} dB: {} frames, {} errors, FER {:.3e}, mrl {}",
                p.ebno_db,
                p.frames,
                p.errors,
                p.fer(),
                p.mrl_pct().map_or("n/a".into(), |m| format!("{m:.1}%"))
            );
        },
        |p| {
            eprintln!(
                "  Eb/N0 {} dB: {} frames, {} errors, FER {:.3e}",
                p.ebno_db,
                p.frames,
                p.errors,
                p.fer()
            )
        },
    )?;
    if let Some(e) = write_err {
        return Err(e).context("writing CSV output");
    }
    if let Some(p) = path {
        eprintln!("wrote {}", p.display());
    }
    Ok(())
}
