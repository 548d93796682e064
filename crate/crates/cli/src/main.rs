//! Command-line driver for Monte Carlo BER sweeps.
//!
//! Builds one experiment per code x modulation combination, runs the sweeps,
//! and writes the merged records as CSV (stdout, or `--out <path>`) plus a
//! short human-readable summary on stderr. `--preset paper-table1` pins the
//! full RS(15,11)/BCH(15,11) comparison grid in one flag.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;

use anyhow::{bail, Context};
use clap::{Parser, ValueEnum};

use fec::ber::{confidence_interval, run_sweep, BerRecord, CodeSelect, ExperimentSpec, StopRule};
use fec::channel::FadingMode;
use fec::modem::ModScheme;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CodeArg {
    Rs,
    Bch,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModArg {
    Bpsk,
    Qam16,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FadingArg {
    Correlated,
    Independent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Csv,
    Tsv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Preset {
    /// RS(15,11) + BCH(15,11), BPSK + 16-QAM, Eb/N0 0..10 dB step 1,
    /// correlated fading with fd*Ts = 1e-4.
    PaperTable1,
}

#[derive(Debug, Parser)]
#[command(name = "fec", version, about = "Block-code BER sweeps over a Rayleigh fading channel")]
struct Cli {
    /// Expand a named experiment preset; explicit flags override its values.
    #[arg(long)]
    preset: Option<Preset>,

    /// Code family to sweep.
    #[arg(long)]
    code: Option<CodeArg>,

    /// RS codeword length in symbols.
    #[arg(long)]
    n: Option<usize>,

    /// RS message length in symbols.
    #[arg(long)]
    k: Option<usize>,

    /// Field order exponent (symbols are m bits). [default: 4]
    #[arg(long)]
    m: Option<u32>,

    /// BCH error correction capability in bits.
    #[arg(long)]
    t: Option<usize>,

    /// Modulation scheme.
    #[arg(long = "mod")]
    modulation: Option<ModArg>,

    /// Eb/N0 grid in dB as start:stop:step (inclusive). [default: 0:10:1]
    #[arg(long)]
    ebn0: Option<String>,

    /// Normalized Doppler fd*Ts for correlated fading. [default: 1e-4]
    #[arg(long)]
    doppler: Option<f64>,

    /// Fading gain model. [default: correlated]
    #[arg(long)]
    fading: Option<FadingArg>,

    /// Master RNG seed. [default: 1]
    #[arg(long)]
    seed: Option<u64>,

    /// Stop a grid point after this many information-bit errors. [default: 200]
    #[arg(long = "min-errors")]
    min_errors: Option<u64>,

    /// ... or after this many information bits. [default: 10000000]
    #[arg(long = "max-bits")]
    max_bits: Option<u64>,

    /// Output path; CSV goes to stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,

    /// Output field separator.
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
}

/// Everything needed to run, after flag/preset merging and validation.
struct Config {
    codes: Vec<CodeSelect>,
    modulations: Vec<ModScheme>,
    ebn0_points: Vec<f64>,
    doppler_fdts: f64,
    fading_mode: FadingMode,
    seed: u64,
    stop: StopRule,
    out: Option<PathBuf>,
    format: FormatArg,
}

fn parse_ebn0_grid(text: &str) -> anyhow::Result<Vec<f64>> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        bail!("--ebn0 must be start:stop:step, got {text:?}");
    }
    let start: f64 = parts[0].parse().with_context(|| format!("bad grid start {:?}", parts[0]))?;
    let stop: f64 = parts[1].parse().with_context(|| format!("bad grid stop {:?}", parts[1]))?;
    let step: f64 = parts[2].parse().with_context(|| format!("bad grid step {:?}", parts[2]))?;
    if step.is_nan() || step <= 0.0 {
        bail!("--ebn0 step must be positive, got {step}");
    }
    if stop < start {
        bail!("--ebn0 stop {stop} is below start {start}");
    }
    let mut points = Vec::new();
    let mut i = 0u32;
    loop {
        let value = start + step * i as f64;
        // half-step slack absorbs accumulated float error at the top end
        if value > stop + step * 0.5 {
            break;
        }
        points.push(value.min(stop));
        i += 1;
    }
    Ok(points)
}

fn resolve(cli: Cli) -> anyhow::Result<Config> {
    let preset = cli.preset;
    let is_paper = preset == Some(Preset::PaperTable1);

    let code = cli.code.or(if is_paper { Some(CodeArg::Both) } else { None });
    let modulation = cli.modulation.or(if is_paper { Some(ModArg::Both) } else { None });
    let m = cli.m.unwrap_or(4);
    let n = cli.n.or(if is_paper { Some(15) } else { None });
    let k = cli.k.or(if is_paper { Some(11) } else { None });
    let t = cli.t.or(if is_paper { Some(1) } else { None });
    let ebn0_text = cli.ebn0.unwrap_or_else(|| "0:10:1".to_string());
    let doppler_fdts = cli.doppler.unwrap_or(1e-4);
    let fading_mode = match cli.fading.unwrap_or(FadingArg::Correlated) {
        FadingArg::Correlated => FadingMode::Correlated,
        FadingArg::Independent => FadingMode::Independent,
    };

    let Some(code) = code else { bail!("--code is required (or use --preset)") };

    let mut codes = Vec::new();
    if matches!(code, CodeArg::Rs | CodeArg::Both) {
        let n = n.context("--n is required for RS codes")?;
        let k = k.context("--k is required for RS codes")?;
        codes.push(CodeSelect::Rs { m, n, k });
    } else if cli.n.is_some() || cli.k.is_some() {
        bail!("--n/--k only apply to RS codes");
    }
    if matches!(code, CodeArg::Bch | CodeArg::Both) {
        let t = t.context("--t is required for BCH codes")?;
        codes.push(CodeSelect::Bch { m, t });
    } else if cli.t.is_some() {
        bail!("--t only applies to BCH codes");
    }

    let modulation = modulation.context("--mod is required (or use --preset)")?;
    let modulations = match modulation {
        ModArg::Bpsk => vec![ModScheme::Bpsk],
        ModArg::Qam16 => vec![ModScheme::Qam16],
        ModArg::Both => vec![ModScheme::Bpsk, ModScheme::Qam16],
    };

    let defaults = StopRule::default();
    Ok(Config {
        codes,
        modulations,
        ebn0_points: parse_ebn0_grid(&ebn0_text)?,
        doppler_fdts,
        fading_mode,
        seed: cli.seed.unwrap_or(1),
        stop: StopRule {
            min_bit_errors: cli.min_errors.unwrap_or(defaults.min_bit_errors),
            max_info_bits: cli.max_bits.unwrap_or(defaults.max_info_bits),
        },
        out: cli.out,
        format: cli.format,
    })
}

fn run_experiments(config: &Config) -> anyhow::Result<Vec<BerRecord>> {
    let mut records = Vec::new();
    for code in &config.codes {
        for &modulation in &config.modulations {
            let spec = ExperimentSpec {
                code: code.clone(),
                modulation,
                ebn0_points: config.ebn0_points.clone(),
                doppler_fdts: config.doppler_fdts,
                fading_mode: config.fading_mode,
                seed: config.seed,
                stop: config.stop,
            };
            records.extend(run_sweep(&spec)?);
        }
    }
    records.sort_by(|a, b| {
        a.ebn0_db
            .total_cmp(&b.ebn0_db)
            .then_with(|| a.code.cmp(&b.code))
            .then_with(|| a.modulation.cmp(&b.modulation))
    });
    Ok(records)
}

/// RFC 4180 quoting: fields containing the separator or a quote get wrapped,
/// with embedded quotes doubled. Code labels like RS(15,11) need this.
fn quote_field(field: &str, sep: char) -> String {
    if field.contains(sep) || field.contains('"') {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

/// Renders records in the fixed column order, one row per record.
fn render_results(records: &[BerRecord], format: FormatArg) -> anyhow::Result<String> {
    if records.is_empty() {
        bail!("no records to write");
    }
    let sep = match format {
        FormatArg::Csv => ',',
        FormatArg::Tsv => '\t',
    };
    let header = [
        "ebn0_db",
        "code",
        "modulation",
        "info_bits",
        "bit_errors",
        "ber",
        "ci_lo",
        "ci_hi",
        "seed",
    ];
    let mut out = String::new();
    writeln!(out, "{}", header.join(&sep.to_string()))?;
    for r in records {
        let (ci_lo, ci_hi) = confidence_interval(r);
        writeln!(
            out,
            "{}{sep}{}{sep}{}{sep}{}{sep}{}{sep}{:.6e}{sep}{:.6e}{sep}{:.6e}{sep}{}",
            r.ebn0_db,
            quote_field(&r.code, sep),
            quote_field(&r.modulation, sep),
            r.info_bits_sent,
            r.bit_errors,
            r.ber,
            ci_lo,
            ci_hi,
            r.seed
        )?;
    }
    Ok(out)
}

fn write_results(records: &[BerRecord], config: &Config) -> anyhow::Result<()> {
    let rendered = render_results(records, config.format)?;
    match &config.out {
        Some(path) => std::fs::write(path, rendered)
            .with_context(|| format!("writing results to {}", path.display()))?,
        None => std::io::stdout().write_all(rendered.as_bytes()).context("writing results")?,
    }
    Ok(())
}

fn print_summary(records: &[BerRecord], config: &Config) {
    eprintln!(
        "{:>8}  {:<12} {:<6} {:>12} {:>10}  {:<12} 95% CI",
        "Eb/N0 dB", "code", "mod", "info bits", "errors", "BER"
    );
    for r in records {
        let (lo, hi) = confidence_interval(r);
        eprintln!(
            "{:>8}  {:<12} {:<6} {:>12} {:>10}  {:<12.6e} [{:.3e}, {:.3e}]",
            r.ebn0_db, r.code, r.modulation, r.info_bits_sent, r.bit_errors, r.ber, lo, hi
        );
    }
    match &config.out {
        Some(path) => eprintln!("{} records written to {}", records.len(), path.display()),
        None => eprintln!("{} records written to stdout", records.len()),
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let config = resolve(cli)?;
    let records = run_experiments(&config)?;
    write_results(&records, &config)?;
    print_summary(&records, &config);
    Ok(())
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ebn0_grid_parsing() {
        assert_eq!(parse_ebn0_grid("0:10:1").unwrap().len(), 11);
        assert_eq!(parse_ebn0_grid("5:5:1").unwrap(), vec![5.0]);
        assert_eq!(parse_ebn0_grid("0:1:0.5").unwrap(), vec![0.0, 0.5, 1.0]);
        assert!(parse_ebn0_grid("10:0:1").is_err());
        assert!(parse_ebn0_grid("0:10:0").is_err());
        assert!(parse_ebn0_grid("0:10:-1").is_err());
        assert!(parse_ebn0_grid("0:10").is_err());
        assert!(parse_ebn0_grid("a:b:c").is_err());
    }

    #[test]
    fn ebn0_grid_handles_float_step_accumulation() {
        // 0:2:0.2 hits the top point despite float error.
        let grid = parse_ebn0_grid("0:2:0.2").unwrap();
        assert_eq!(grid.len(), 11);
        assert!((grid.last().unwrap() - 2.0).abs() < 1e-12);
    }

    fn parse(args: &[&str]) -> anyhow::Result<Config> {
        resolve(Cli::try_parse_from(std::iter::once("fec").chain(args.iter().copied())).unwrap())
    }

    #[test]
    fn preset_expands_to_paper_grid() {
        let config = parse(&["--preset", "paper-table1"]).unwrap();
        assert_eq!(config.codes.len(), 2);
        assert!(config.codes.contains(&CodeSelect::Rs { m: 4, n: 15, k: 11 }));
        assert!(config.codes.contains(&CodeSelect::Bch { m: 4, t: 1 }));
        assert_eq!(config.modulations, vec![ModScheme::Bpsk, ModScheme::Qam16]);
        assert_eq!(config.ebn0_points.len(), 11);
        assert_eq!(config.doppler_fdts, 1e-4);
        assert_eq!(config.fading_mode, FadingMode::Correlated);
        assert_eq!(config.stop, StopRule::default());
    }

    #[test]
    fn explicit_flags_override_preset() {
        let config = parse(&["--preset", "paper-table1", "--mod", "bpsk", "--seed", "9"]).unwrap();
        assert_eq!(config.modulations, vec![ModScheme::Bpsk]);
        assert_eq!(config.seed, 9);
    }

    #[test]
    fn code_flag_consistency() {
        assert!(parse(&["--code", "rs", "--mod", "bpsk"]).is_err());
        assert!(parse(&["--code", "bch", "--mod", "bpsk"]).is_err());
        assert!(parse(&["--code", "bch", "--t", "1", "--n", "15", "--mod", "bpsk"]).is_err());
        assert!(parse(&["--code", "rs", "--n", "15", "--k", "11", "--t", "2", "--mod", "bpsk"])
            .is_err());
        assert!(parse(&["--mod", "bpsk"]).is_err());
        let config = parse(&["--code", "rs", "--n", "15", "--k", "11", "--mod", "qam16"]).unwrap();
        assert_eq!(config.codes, vec![CodeSelect::Rs { m: 4, n: 15, k: 11 }]);
        assert_eq!(config.modulations, vec![ModScheme::Qam16]);
    }

    #[test]
    fn render_has_exact_header_and_shape() {
        let records = vec![BerRecord {
            ebn0_db: 0.0,
            code: "BCH(15,11)".into(),
            modulation: "BPSK".into(),
            info_bits_sent: 10_000,
            bit_errors: 100,
            ber: 0.01,
            seed: 1,
        }];
        let csv = render_results(&records, FormatArg::Csv).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[0], "ebn0_db,code,modulation,info_bits,bit_errors,ber,ci_lo,ci_hi,seed");
        // the comma inside the code label is quoted so the row stays 9 fields
        assert!(lines[1].starts_with("0,\"BCH(15,11)\",BPSK,10000,100,1.000000e-2,"));
        // tabs don't occur in labels, so TSV rows need no quoting
        let tsv = render_results(&records, FormatArg::Tsv).unwrap();
        assert!(tsv.lines().nth(1).unwrap().starts_with("0\tBCH(15,11)\tBPSK\t"));
        assert!(render_results(&[], FormatArg::Csv).is_err());
    }
}
