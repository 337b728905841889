use std::fs;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use nilrand::arithstat::{
    check_monotonicity, det_gcd_frequency, exact_coord_dist, primitivity_frequency, residue_deviation,
};
use nilrand::experiments::{run_experiment, ExperimentConfig, ExperimentKind};
use nilrand::heiscalc::MalcevTriple;
use nilrand::predict::{format_truncated, prob_cyclic, prob_gcd_dets_one, prob_primitive, DEFAULT_CUTOFF};
use nilrand::quotients::{classify_one_relator, heis_quotient_order};
use num_bigint::BigInt;

#[derive(Parser)]
#[command(name = "nilrand", version, about = "Random nilpotent groups")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Classify the one-relator Heisenberg quotient a^i b^j c^k.
    Classify {
        #[arg(long, allow_hyphen_values = true)]
        i: BigInt,
        #[arg(long, allow_hyphen_values = true)]
        j: BigInt,
        #[arg(long, allow_hyphen_values = true)]
        k: BigInt,
    },
    /// Order of the Heisenberg quotient by a list of relators.
    Order {
        /// Relators as "i,j,k;i,j,k;...".
        #[arg(long, allow_hyphen_values = true)]
        relators: String,
    },
    Predict {
        #[command(subcommand)]
        what: PredictCmd,
    },
    /// Run a seeded Monte Carlo campaign.
    Simulate {
        kind: SimKind,
        #[arg(long, default_value_t = 2)]
        m: usize,
        #[arg(long, default_value_t = 1)]
        r_min: usize,
        #[arg(long, default_value_t = 1)]
        r_max: usize,
        #[arg(long, default_value_t = 1000)]
        len: usize,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Walk statistics checks.
    Appendix {
        kind: AppendixKind,
        #[arg(long, default_value_t = 2)]
        m: usize,
        #[arg(long, default_value_t = 1000)]
        len: usize,
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Modulus for uniformity.
        #[arg(long, default_value_t = 3)]
        n: u64,
        /// Number of matrices for det-gcd.
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum PredictCmd {
    /// Probability that the abelianization is cyclic with m-1 or m relators.
    Table {
        #[arg(long, default_value_t = 10)]
        max_m: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SimKind {
    Heatmap,
    HeisTable,
    BalancedOrders,
    DdCensus,
}

#[derive(Clone, Copy, ValueEnum)]
enum AppendixKind {
    Uniformity,
    Primitivity,
    DetGcd,
    Monotonicity,
}

fn parse_relators(s: &str) -> Result<Vec<MalcevTriple>> {
    s.split(';')
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            let v: Vec<BigInt> = t
                .split(',')
                .map(|x| x.trim().parse::<BigInt>().with_context(|| format!("bad integer {x:?}")))
                .collect::<Result<_>>()?;
            match v.as_slice() {
                [a, b, c] => Ok(MalcevTriple::new(a.clone(), b.clone(), c.clone())),
                _ => bail!("relator {t:?} needs three coordinates"),
            }
        })
        .collect()
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn predict_table(max_m: usize) -> Result<String> {
    if max_m < 2 {
        bail!("--max-m must be at least 2");
    }
    let mut s = String::from("m,r_m_minus_1,r_m\n");
    for m in 2..=max_m {
        let a = prob_cyclic(m, m - 1)?.value;
        let b = prob_cyclic(m, m)?.value;
        s += &format!("{m},{},{}\n", format_truncated(a, 4), format_truncated(b, 4));
    }
    Ok(s)
}

fn appendix(
    kind: AppendixKind,
    m: usize,
    len: usize,
    trials: usize,
    seed: u64,
    n: u64,
    k: usize,
) -> Result<String> {
    Ok(match kind {
        AppendixKind::Uniformity => {
            let one = residue_deviation(m, len, n, trials, seed, 1)?;
            let two = residue_deviation(m, len, n, trials, seed, 2)?;
            format!("coords,n,max_deviation\n1,{n},{one}\n2,{n},{two}\n")
        }
        AppendixKind::Primitivity => {
            let f = primitivity_frequency(m, len, trials, seed)?;
            let p = prob_primitive(m)?.value;
            format!("m,len,trials,observed,predicted\n{m},{len},{trials},{f},{p}\n")
        }
        AppendixKind::DetGcd => {
            let f = det_gcd_frequency(m, k, len, trials, seed)?;
            let p = prob_gcd_dets_one(m, k, DEFAULT_CUTOFF)?.value;
            format!(
                "m,k,len,trials,observed,predicted,singular\n{m},{k},{len},{trials},{},{p},{}\n",
                f.coprime, f.singular
            )
        }
        AppendixKind::Monotonicity => {
            let mut d = exact_coord_dist(m, 0)?;
            let mut s = String::from("len,monotone\n");
            for l in 0..=len {
                s += &format!("{l},{}\n", check_monotonicity(&d));
                if l < len {
                    d = d.step();
                }
            }
            s
        }
    })
}

fn main() -> Result<()> {
    match Cli::parse().cmd {
        Cmd::Classify { i, j, k } => {
            let g = classify_one_relator(&MalcevTriple::new(i, j, k))?;
            println!("{}", serde_json::to_string_pretty(&g.to_json())?);
        }
        Cmd::Order { relators } => {
            let rels = parse_relators(&relators)?;
            if rels.is_empty() {
                bail!("no relators given");
            }
            println!("{}", serde_json::to_string_pretty(&heis_quotient_order(&rels)?.to_json())?);
        }
        Cmd::Predict { what: PredictCmd::Table { max_m } } => print!("{}", predict_table(max_m)?),
        Cmd::Simulate { kind, m, r_min, r_max, len, trials, seed, out, json } => {
            let kind = match kind {
                SimKind::Heatmap => ExperimentKind::RankHeatmap,
                SimKind::HeisTable => ExperimentKind::HeisTable,
                SimKind::BalancedOrders => ExperimentKind::BalancedOrders,
                SimKind::DdCensus => ExperimentKind::DdCensus,
            };
            let report = run_experiment(&ExperimentConfig::new(kind, m, r_min, r_max, len, trials, seed))?;
            report.write_csv(&out).with_context(|| format!("writing {}", out.display()))?;
            if let Some(p) = json {
                report.write_json(&p).with_context(|| format!("writing {}", p.display()))?;
            }
            for e in nilrand::experiments::compare_with_predictions(&report).flagged() {
                eprintln!(
                    "r={} {}: observed {:.4}, predicted {:.4}, z={:.2}",
                    e.r, e.label, e.frequency, e.predicted.value, e.z
                );
            }
        }
        Cmd::Appendix { kind, m, len, trials, seed, n, k, out } => {
            emit(&appendix(kind, m, len, trials, seed, n, k)?, out.as_ref())?;
        }
    }
    Ok(())
}
