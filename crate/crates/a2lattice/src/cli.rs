//! Command-line interface: verification runs, sector tables and spectrum
//! dumps.
//!
//! The `verify` subcommand accepts either command-line flags or a JSON run
//! configuration (`--config`); flags override file values.  Reports contain
//! no timestamps, so identical configuration and seed produce byte-identical
//! output.

use std::collections::hash_map::DefaultHasher;
use std::fs;
use std::hash::{Hash, Hasher};
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::linkstate;
use crate::relations::{self, RunSpec, Suite};
use crate::scalars::{BraidLabel, Params, Sector, C64};
use crate::transfer::Transfer;

/// Environment variable naming a directory used to cache spectrum dumps.
pub const CACHE_DIR_ENV: &str = "A2LATTICE_CACHE_DIR";

#[derive(Parser)]
#[command(
    name = "a2lattice",
    version,
    about = "Transfer matrices and functional identities of a two-colour loop model"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Run a verification suite and emit a JSON report.
    Verify(VerifyArgs),
    /// List the link-state sectors of a strip with their dimensions.
    Sectors {
        /// Strip width (number of columns).
        #[arg(long = "N")]
        n: usize,
    },
    /// Write transfer-matrix spectra as CSV, sorted by (re, im).
    DumpSpectra(DumpArgs),
}

/// JSON run configuration mirroring the `verify` flags.  Any field given on
/// the command line overrides the file value.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub suite: Option<String>,
    pub p: Option<u32>,
    pub pprime: Option<u32>,
    pub lambda: Option<f64>,
    /// Twist as `[re, im]`.
    pub omega: Option<[f64; 2]>,
    pub n_max: Option<usize>,
    /// Sector filter as `(defects, vacancies)` pairs.
    pub sectors: Option<Vec<(usize, usize)>>,
    pub samples: Option<usize>,
    pub tolerance: Option<f64>,
    pub proof_grade: Option<bool>,
    pub seed: Option<u64>,
    pub jobs: Option<usize>,
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// JSON run configuration; flags override its fields.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Suite: local, hierarchy, tsystem, ysystem, closure, yclosure, braid,
    /// vacancy, fusion-direct, rsos, or all.
    #[arg(long)]
    pub suite: Option<String>,
    /// Numerator of the rational coupling (with --pprime).
    #[arg(long)]
    pub p: Option<u32>,
    /// Denominator of the rational coupling (with --p).
    #[arg(long)]
    pub pprime: Option<u32>,
    /// Generic crossing parameter (mutually exclusive with --p/--pprime).
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Twist as "re,im" (default "1,0").
    #[arg(long)]
    pub omega: Option<String>,
    /// Largest strip width.
    #[arg(long)]
    pub n_max: Option<usize>,
    /// Sector filter as "d,v;d,v;...".
    #[arg(long)]
    pub sectors: Option<String>,
    /// Sample points per identity.
    #[arg(long)]
    pub samples: Option<usize>,
    /// Residual threshold override.
    #[arg(long)]
    pub tolerance: Option<f64>,
    /// Sample enough points to pin the identities as polynomial identities.
    #[arg(long)]
    pub proof_grade: bool,
    /// Random seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker thread count.
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Report destination (stdout when omitted).
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct DumpArgs {
    /// Numerator of the rational coupling (with --pprime).
    #[arg(long)]
    pub p: Option<u32>,
    /// Denominator of the rational coupling (with --p).
    #[arg(long)]
    pub pprime: Option<u32>,
    /// Generic crossing parameter (mutually exclusive with --p/--pprime).
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Twist as "re,im" (default "1,0").
    #[arg(long)]
    pub omega: Option<String>,
    /// Strip width.
    #[arg(long = "N")]
    pub n: usize,
    /// Spectral parameter as "re,im".
    #[arg(long, default_value = "0.5,0.1")]
    pub u: String,
    /// CSV destination (stdout when omitted).
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

fn parse_pair(s: &str) -> Result<(f64, f64)> {
    match s.split(',').collect::<Vec<_>>().as_slice() {
        [re] => Ok((re.trim().parse()?, 0.0)),
        [re, im] => Ok((re.trim().parse()?, im.trim().parse()?)),
        _ => bail!("expected \"re\" or \"re,im\", got {s:?}"),
    }
}

fn parse_sectors(s: &str) -> Result<Vec<(usize, usize)>> {
    s.split(';')
        .filter(|part| !part.trim().is_empty())
        .map(|part| {
            let (d, v) = part
                .split_once(',')
                .with_context(|| format!("expected \"d,v\", got {part:?}"))?;
            Ok((d.trim().parse()?, v.trim().parse()?))
        })
        .collect()
}

/// Builds the coupling from the merged configuration.  Exactly one of the
/// rational pair `(p, pprime)` or the generic `lambda` must be present.
fn build_params(
    p: Option<u32>,
    pprime: Option<u32>,
    lambda: Option<f64>,
    omega: C64,
) -> Result<Params> {
    match (p, pprime, lambda) {
        (Some(p), Some(pp), None) => Ok(Params::from_root(p, pp, omega)),
        (None, None, Some(l)) => Ok(Params::new(l, omega)),
        (None, None, None) => bail!("specify a coupling: either --p with --pprime, or --lambda"),
        (Some(_), None, None) | (None, Some(_), None) => {
            bail!("--p and --pprime must be given together")
        }
        _ => bail!("--p/--pprime and --lambda are mutually exclusive"),
    }
}

fn merged_config(args: &VerifyArgs) -> Result<RunConfig> {
    let mut cfg = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?
        }
        None => RunConfig::default(),
    };
    if args.suite.is_some() {
        cfg.suite = args.suite.clone();
    }
    if args.p.is_some() {
        cfg.p = args.p;
    }
    if args.pprime.is_some() {
        cfg.pprime = args.pprime;
    }
    if args.lambda.is_some() {
        cfg.lambda = args.lambda;
    }
    if let Some(om) = &args.omega {
        let (re, im) = parse_pair(om)?;
        cfg.omega = Some([re, im]);
    }
    if args.n_max.is_some() {
        cfg.n_max = args.n_max;
    }
    if let Some(s) = &args.sectors {
        cfg.sectors = Some(parse_sectors(s)?);
    }
    if args.samples.is_some() {
        cfg.samples = args.samples;
    }
    if args.tolerance.is_some() {
        cfg.tolerance = args.tolerance;
    }
    if args.proof_grade {
        cfg.proof_grade = Some(true);
    }
    if args.seed.is_some() {
        cfg.seed = args.seed;
    }
    if args.jobs.is_some() {
        cfg.jobs = args.jobs;
    }
    if args.output.is_some() {
        cfg.output = args.output.clone();
    }
    Ok(cfg)
}

fn verify(args: &VerifyArgs) -> Result<bool> {
    let cfg = merged_config(args)?;
    let omega = cfg
        .omega
        .map_or(C64::new(1.0, 0.0), |[re, im]| C64::new(re, im));
    let params = build_params(cfg.p, cfg.pprime, cfg.lambda, omega)?;
    let suite_name = cfg.suite.as_deref().unwrap_or("all");
    let suite = Suite::parse(suite_name)
        .with_context(|| format!("unknown suite {suite_name:?}"))?;
    let mut spec = RunSpec::new(suite, vec![params]);
    if let Some(n) = cfg.n_max {
        spec.n_max = n;
    }
    spec.sectors = cfg.sectors.clone();
    if let Some(s) = cfg.samples {
        spec.samples = s;
    }
    spec.tolerance = cfg.tolerance;
    spec.proof_grade = cfg.proof_grade.unwrap_or(false);
    spec.seed = cfg.seed.unwrap_or(0);
    spec.jobs = cfg.jobs.unwrap_or(1);
    let report = relations::run(&spec);
    for check in &report.checks {
        eprintln!(
            "{:4} {:32} {:28} residual {:.3e} (tol {:.0e})",
            match check.verdict {
                relations::Verdict::Pass => "pass",
                relations::Verdict::Fail => "FAIL",
            },
            check.id,
            check.sector,
            check.residual,
            check.tolerance,
        );
    }
    let json = report.to_json();
    match &cfg.output {
        Some(path) => fs::write(path, json.as_bytes())
            .with_context(|| format!("writing {}", path.display()))?,
        None => println!("{json}"),
    }
    let failures = report.failures().len();
    eprintln!(
        "{} checks, {} failed",
        report.checks.len(),
        failures
    );
    Ok(report.passed())
}

fn sectors_table(n: usize) -> String {
    let mut out = String::from("d\tv\tdim\n");
    let mut total = 0;
    for sector in Sector::all(n) {
        let dim = linkstate::dimension(sector);
        total += dim;
        out.push_str(&format!("{}\t{}\t{}\n", sector.defects, sector.vacancies, dim));
    }
    out.push_str(&format!("total\t\t{total}\n"));
    out
}

fn spectra_csv(params: &Params, n: usize, u: C64) -> Result<Vec<u8>> {
    let (p, pp) = params.root.map_or((String::new(), String::new()), |(p, pp)| {
        (p.to_string(), pp.to_string())
    });
    let mut wtr = csv::Writer::from_writer(Vec::new());
    wtr.write_record(["kind", "N", "d", "v", "p", "pprime", "re", "im"])?;
    for sector in Sector::all(n) {
        let engine = Transfer::new(params, sector);
        for (kind, label) in [("first", BraidLabel::OneZero), ("second", BraidLabel::ZeroOne)] {
            let mut eig = relations::eigenvalues(&engine.elementary(label, u));
            eig.sort_by(|a, b| {
                (a.re, a.im)
                    .partial_cmp(&(b.re, b.im))
                    .expect("finite eigenvalues")
            });
            for z in eig {
                wtr.write_record([
                    kind,
                    &n.to_string(),
                    &sector.defects.to_string(),
                    &sector.vacancies.to_string(),
                    &p,
                    &pp,
                    &format!("{:.15e}", z.re),
                    &format!("{:.15e}", z.im),
                ])?;
            }
        }
    }
    Ok(wtr.into_inner()?)
}

fn dump_spectra(args: &DumpArgs) -> Result<()> {
    let omega = match &args.omega {
        Some(s) => {
            let (re, im) = parse_pair(s)?;
            C64::new(re, im)
        }
        None => C64::new(1.0, 0.0),
    };
    let params = build_params(args.p, args.pprime, args.lambda, omega)?;
    let (ure, uim) = parse_pair(&args.u)?;
    let u = C64::new(ure, uim);
    // Optional byte cache keyed by the full request.
    let cache_path = std::env::var_os(CACHE_DIR_ENV).map(|dir| {
        let mut hasher = DefaultHasher::new();
        format!(
            "{}|{}|{:?}|{:?}|{:?}",
            relations::params_desc(&params),
            args.n,
            u,
            params.alpha,
            params.gauge
        )
        .hash(&mut hasher);
        PathBuf::from(dir).join(format!("spectra-{:016x}.csv", hasher.finish()))
    });
    let bytes = match &cache_path {
        Some(path) if path.is_file() => fs::read(path)?,
        _ => {
            let bytes = spectra_csv(&params, args.n, u)?;
            if let Some(path) = &cache_path {
                if let Some(dir) = path.parent() {
                    fs::create_dir_all(dir)?;
                }
                fs::write(path, &bytes)?;
            }
            bytes
        }
    };
    match &args.output {
        Some(path) => fs::write(path, &bytes)
            .with_context(|| format!("writing {}", path.display()))?,
        None => print!("{}", String::from_utf8_lossy(&bytes)),
    }
    Ok(())
}

/// Entry point used by the binary; returns the process exit code.
pub fn main_with(cli: Cli) -> i32 {
    let outcome = match &cli.command {
        Command::Verify(args) => match verify(args) {
            Ok(true) => Ok(0),
            Ok(false) => Ok(1),
            Err(e) => Err(e),
        },
        Command::Sectors { n } => {
            print!("{}", sectors_table(*n));
            Ok(0)
        }
        Command::DumpSpectra(args) => dump_spectra(args).map(|()| 0),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            2
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_parsing() {
        assert_eq!(parse_pair("1").unwrap(), (1.0, 0.0));
        assert_eq!(parse_pair("0.5, -0.25").unwrap(), (0.5, -0.25));
        assert!(parse_pair("a,b").is_err());
        assert!(parse_pair("1,2,3").is_err());
    }

    #[test]
    fn sector_filter_parsing() {
        assert_eq!(parse_sectors("0,0;2,1").unwrap(), vec![(0, 0), (2, 1)]);
        assert!(parse_sectors("3").is_err());
    }

    #[test]
    fn coupling_requires_exactly_one_form() {
        let om = C64::new(1.0, 0.0);
        assert!(build_params(Some(1), Some(3), None, om).is_ok());
        assert!(build_params(None, None, Some(0.83), om).is_ok());
        assert!(build_params(None, None, None, om).is_err());
        assert!(build_params(Some(1), None, None, om).is_err());
        assert!(build_params(Some(1), Some(3), Some(0.8), om).is_err());
    }

    #[test]
    fn config_file_fields_are_overridden_by_flags() {
        let dir = std::env::temp_dir().join("a2lattice-cli-test");
        fs::create_dir_all(&dir).unwrap();
        let path = dir.join("config.json");
        fs::write(
            &path,
            r#"{"suite": "braid", "lambda": 0.83, "samples": 7}"#,
        )
        .unwrap();
        let args = VerifyArgs {
            config: Some(path),
            suite: None,
            p: None,
            pprime: None,
            lambda: Some(0.9),
            omega: None,
            n_max: None,
            sectors: None,
            samples: None,
            tolerance: None,
            proof_grade: false,
            seed: None,
            jobs: None,
            output: None,
        };
        let cfg = merged_config(&args).unwrap();
        assert_eq!(cfg.suite.as_deref(), Some("braid"));
        assert_eq!(cfg.lambda, Some(0.9));
        assert_eq!(cfg.samples, Some(7));
    }

    #[test]
    fn sector_table_matches_state_count() {
        let table = sectors_table(3);
        assert!(table.contains("d\tv\tdim"));
        let total: usize = Sector::all(3).iter().map(|&s| linkstate::dimension(s)).sum();
        assert!(table.contains(&format!("total\t\t{total}")));
    }

    #[test]
    fn spectra_csv_is_sorted_and_stable() {
        let params = Params::new(0.83, C64::new(1.0, 0.0));
        let a = spectra_csv(&params, 2, C64::new(0.5, 0.1)).unwrap();
        let b = spectra_csv(&params, 2, C64::new(0.5, 0.1)).unwrap();
        assert_eq!(a, b);
        let text = String::from_utf8(a).unwrap();
        assert!(text.starts_with("kind,N,d,v,p,pprime,re,im"));
        assert!(text.lines().count() > 1);
    }
}
