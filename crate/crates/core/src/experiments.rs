//! Seeded Monte Carlo campaigns.
//!
//! Every campaign iterates over a range of relator counts `r`. Trial `t` of
//! row `r` draws from `RngStream::new(seed, (r << 32) + t)`, and per-thread
//! tallies are merged by addition, so reports are identical for any number
//! of worker threads.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::heiscalc::{malcev_coords, weight_vector, MalcevTriple};
use crate::intlinalg::{cokernel_invariants, rank_and_dim, IntMatrix};
use crate::predict::{prob_cyclic, prob_primitive, prob_rank_drop, prob_trivial, ProbValue};
use crate::quotients::{
    big_json, build_finite_quotient, classify_one_relator, heis_quotient_order, identify_small_group,
    profile_from_weights, weight_matrix, DescriptorKind, QuotientOrder,
};
use crate::randwalk::{fold_trials, random_relator, RngStream};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExperimentKind {
    RankHeatmap,
    HeisTable,
    BalancedOrders,
    DdCensus,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::RankHeatmap => "heatmap",
            ExperimentKind::HeisTable => "heis-table",
            ExperimentKind::BalancedOrders => "balanced-orders",
            ExperimentKind::DdCensus => "dd-census",
        }
    }

    /// Whether the campaign works in the Heisenberg group (`m = 2`, `s = 2`).
    pub fn is_heisenberg(self) -> bool {
        !matches!(self, ExperimentKind::RankHeatmap)
    }
}

impl FromStr for ExperimentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "heatmap" => Ok(ExperimentKind::RankHeatmap),
            "heis-table" => Ok(ExperimentKind::HeisTable),
            "balanced-orders" => Ok(ExperimentKind::BalancedOrders),
            "dd-census" => Ok(ExperimentKind::DdCensus),
            other => Err(Error::Parse(format!("unknown experiment kind {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub m: usize,
    pub s: usize,
    pub r_min: usize,
    pub r_max: usize,
    pub len: usize,
    pub trials: usize,
    pub seed: u64,
}

impl ExperimentConfig {
    /// Heisenberg kinds override `m` with 2.
    pub fn new(kind: ExperimentKind, m: usize, r_min: usize, r_max: usize, len: usize, trials: usize, seed: u64) -> Self {
        Self {
            kind,
            m: if kind.is_heisenberg() { 2 } else { m },
            s: 2,
            r_min,
            r_max,
            len,
            trials,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if self.trials < 1 {
            return bad("trials must be at least 1".into());
        }
        if self.len < 2 {
            return bad(format!("relator length {} is below 2", self.len));
        }
        if self.m < 1 {
            return bad("rank must be at least 1".into());
        }
        if self.r_min < 1 || self.r_min > self.r_max {
            return bad(format!("relator range {}..={} is empty or starts at 0", self.r_min, self.r_max));
        }
        if self.r_max >= 1 << 31 {
            return bad("relator count too large".into());
        }
        if self.kind.is_heisenberg() && (self.m, self.s) != (2, 2) {
            return bad(format!("{} needs m = 2 and s = 2", self.kind.name()));
        }
        match self.kind {
            ExperimentKind::BalancedOrders if (self.r_min, self.r_max) != (2, 2) => {
                bad("balanced-orders uses exactly 2 relators".into())
            }
            ExperimentKind::DdCensus if (self.r_min, self.r_max) != (1, 1) => {
                bad("dd-census uses exactly 1 relator".into())
            }
            _ => Ok(()),
        }
    }

    pub fn r_values(&self) -> std::ops::RangeInclusive<usize> {
        self.r_min..=self.r_max
    }

    pub fn to_json(&self) -> Value {
        json!({
            "kind": self.kind.name(),
            "m": self.m,
            "s": self.s,
            "r_min": self.r_min,
            "r_max": self.r_max,
            "len": self.len,
            "trials": self.trials,
            "seed": self.seed,
        })
    }
}

pub const HEIS_LABELS: [&str; 7] = [
    "trivial",
    "cyclic_infinite",
    "cyclic_finite",
    "abelian_noncyclic_infinite",
    "abelian_noncyclic_finite",
    "nonabelian_infinite",
    "nonabelian_finite",
];

pub const BALANCED_LABELS: [&str; 5] = [
    "trivial",
    "cyclic",
    "abelian_noncyclic",
    "nonabelian_infinite",
    "nonabelian_finite",
];

pub const DD_LABELS: [&str; 4] = ["cyclic_z", "bs_type", "other_generic", "central_relator"];

fn labels_for(cfg: &ExperimentConfig) -> Vec<String> {
    match cfg.kind {
        ExperimentKind::RankHeatmap => (0..=cfg.m).map(|j| format!("rank_{j}")).collect(),
        ExperimentKind::HeisTable => HEIS_LABELS.iter().map(|s| s.to_string()).collect(),
        ExperimentKind::BalancedOrders => BALANCED_LABELS.iter().map(|s| s.to_string()).collect(),
        ExperimentKind::DdCensus => DD_LABELS.iter().map(|s| s.to_string()).collect(),
    }
}

/// Outcome counts for one relator count.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub r: usize,
    pub cells: BTreeMap<String, u64>,
    /// Side tallies that do not partition the trials (order histogram, Q8/D4 split).
    pub extras: BTreeMap<String, u64>,
    /// `(d²/D, d)` census for one-relator campaigns.
    pub pairs: BTreeMap<(BigInt, BigInt), u64>,
    pub largest_finite_order: Option<BigInt>,
    pub predicted: Option<BTreeMap<String, ProbValue>>,
}

impl ReportRow {
    pub fn total(&self) -> u64 {
        self.cells.values().sum()
    }

    pub fn count(&self, label: &str) -> u64 {
        self.cells.get(label).copied().unwrap_or(0)
    }

    pub fn frequency(&self, label: &str) -> f64 {
        self.count(label) as f64 / self.total().max(1) as f64
    }

    pub fn extra(&self, key: &str) -> u64 {
        self.extras.get(key).copied().unwrap_or(0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub labels: Vec<String>,
    pub rows: Vec<ReportRow>,
}

impl ExperimentReport {
    pub fn row(&self, r: usize) -> Option<&ReportRow> {
        self.rows.iter().find(|row| row.r == r)
    }

    /// `r` followed by one column per outcome label.
    pub fn buckets_csv(&self) -> String {
        let mut out = String::from("r");
        for l in &self.labels {
            out.push(',');
            out.push_str(l);
        }
        out.push('\n');
        for row in &self.rows {
            write!(out, "{}", row.r).unwrap();
            for l in &self.labels {
                write!(out, ",{}", row.count(l)).unwrap();
            }
            out.push('\n');
        }
        out
    }

    /// `(d²/D, d, count)` rows summed over all relator counts.
    pub fn census_csv(&self) -> String {
        let mut merged: BTreeMap<&(BigInt, BigInt), u64> = BTreeMap::new();
        for row in &self.rows {
            for (k, v) in &row.pairs {
                *merged.entry(k).or_insert(0) += v;
            }
        }
        let mut out = String::from("d2_over_D,d,count\n");
        for ((x, d), c) in merged {
            writeln!(out, "{x},{d},{c}").unwrap();
        }
        out
    }

    /// The campaign's CSV: the census for `dd-census`, bucket counts otherwise.
    pub fn to_csv(&self) -> String {
        match self.config.kind {
            ExperimentKind::DdCensus => self.census_csv(),
            _ => self.buckets_csv(),
        }
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let pairs: Vec<Value> = row
                    .pairs
                    .iter()
                    .map(|((x, d), c)| json!([big_json(x), big_json(d), c]))
                    .collect();
                let predicted = row.predicted.as_ref().map(|p| {
                    p.iter()
                        .map(|(k, v)| (k.clone(), json!({"value": v.value, "err_bound": v.err_bound})))
                        .collect::<serde_json::Map<_, _>>()
                });
                json!({
                    "r": row.r,
                    "cells": row.cells,
                    "extras": row.extras,
                    "pairs": pairs,
                    "largest_finite_order": row.largest_finite_order.as_ref().map(big_json),
                    "predicted": predicted,
                })
            })
            .collect();
        json!({
            "version": env!("CARGO_PKG_VERSION"),
            "config": self.config.to_json(),
            "labels": self.labels,
            "rows": rows,
            "comparison": compare_with_predictions(self).to_json(),
        })
    }

    pub fn write_csv(&self, path: &Path) -> std::io::Result<()> {
        std::fs::write(path, self.to_csv())
    }

    pub fn write_json(&self, path: &Path) -> std::io::Result<()> {
        let mut text = serde_json::to_string_pretty(&self.to_json()).expect("json values serialize");
        text.push('\n');
        std::fs::write(path, text)
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
struct Tally {
    cells: Vec<u64>,
    extras: BTreeMap<String, u64>,
    pairs: BTreeMap<(BigInt, BigInt), u64>,
    largest: Option<BigInt>,
}

impl Tally {
    fn new(width: usize) -> Self {
        Self {
            cells: vec![0; width],
            ..Self::default()
        }
    }

    fn bump(&mut self, key: &str) {
        *self.extras.entry(key.to_string()).or_insert(0) += 1;
    }

    fn see_order(&mut self, n: &BigInt) {
        if self.largest.as_ref().is_none_or(|l| n > l) {
            self.largest = Some(n.clone());
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        for (a, b) in self.cells.iter_mut().zip(other.cells) {
            *a += b;
        }
        for (k, v) in other.extras {
            *self.extras.entry(k).or_insert(0) += v;
        }
        for (k, v) in other.pairs {
            *self.pairs.entry(k).or_insert(0) += v;
        }
        if let Some(n) = other.largest {
            self.see_order(&n);
        }
        self
    }
}

fn draw_triples(rng: &mut RngStream, r: usize, len: usize) -> Vec<MalcevTriple> {
    (0..r)
        .map(|_| {
            let w = random_relator(2, len, rng).expect("validated config");
            malcev_coords(&w).expect("rank 2")
        })
        .collect()
}

fn run_rows(cfg: &ExperimentConfig, expect: ExperimentKind, trial: impl Fn(usize, &mut RngStream, &mut Tally) + Sync + Send) -> Result<ExperimentReport> {
    if cfg.kind != expect {
        return Err(Error::InvalidConfig(format!(
            "expected a {} config, got {}",
            expect.name(),
            cfg.kind.name()
        )));
    }
    cfg.validate()?;
    let labels = labels_for(cfg);
    let width = labels.len();
    let mut rows = Vec::new();
    for r in cfg.r_values() {
        let tally = fold_trials(
            cfg.seed,
            (r as u64) << 32,
            cfg.trials,
            || Tally::new(width),
            |rng, acc| trial(r, rng, acc),
            Tally::merge,
        );
        let cells: BTreeMap<String, u64> = labels.iter().cloned().zip(tally.cells).collect();
        debug_assert_eq!(cells.values().sum::<u64>(), cfg.trials as u64);
        let predicted = predictions(cfg, r)?;
        rows.push(ReportRow {
            r,
            cells,
            extras: tally.extras,
            pairs: tally.pairs,
            largest_finite_order: tally.largest,
            predicted: (!predicted.is_empty()).then_some(predicted),
        });
    }
    Ok(ExperimentReport {
        config: cfg.clone(),
        labels,
        rows,
    })
}

/// Rank of `Z^m/⟨R⟩` for `r` random relators, per relator count.
pub fn run_rank_heatmap(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let (m, len) = (cfg.m, cfg.len);
    run_rows(cfg, ExperimentKind::RankHeatmap, |r, rng, acc| {
        let cols: Vec<Vec<BigInt>> = (0..r)
            .map(|_| {
                let w = random_relator(m, len, rng).expect("validated config");
                weight_vector(&w).0.into_iter().map(BigInt::from).collect()
            })
            .collect();
        let profile = profile_from_weights(&IntMatrix::from_columns(m, &cols).expect("m-entry columns"));
        acc.cells[profile.rank] += 1;
    })
}

/// Coarse isomorphism data of a Heisenberg quotient.
struct HeisOutcome {
    order: QuotientOrder,
    ab_rank: usize,
}

impl HeisOutcome {
    fn new(rels: &[MalcevTriple]) -> Self {
        let order = heis_quotient_order(rels).expect("nonempty relator set");
        let (ab_rank, _) = rank_and_dim(&cokernel_invariants(&weight_matrix(rels)));
        let out = Self { order, ab_rank };
        let trivial = out.is_trivial();
        let nonabelian = !out.order.gamma.is_one();
        assert!(!trivial || !nonabelian, "trivial quotient with c of order {}", out.order.gamma);
        assert!(nonabelian || out.ab_rank <= 2);
        out
    }

    fn is_trivial(&self) -> bool {
        self.order.order.as_ref().is_some_and(One::is_one)
    }

    fn is_nonabelian(&self) -> bool {
        !self.order.gamma.is_one()
    }
}

/// Seven-way classification of `H(Z)/⟨⟨R⟩⟩` per relator count.
pub fn run_heis_table(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let len = cfg.len;
    run_rows(cfg, ExperimentKind::HeisTable, |r, rng, acc| {
        let out = HeisOutcome::new(&draw_triples(rng, r, len));
        let finite = out.order.is_finite();
        let bucket = if out.is_trivial() {
            0
        } else if out.is_nonabelian() {
            if finite { 6 } else { 5 }
        } else if out.ab_rank <= 1 {
            if finite { 2 } else { 1 }
        } else if finite {
            4
        } else {
            3
        };
        if let Some(n) = &out.order.order {
            acc.see_order(n);
        }
        acc.cells[bucket] += 1;
    })
}

/// Balanced two-relator quotients with short relators. Finite nonabelian
/// orders are histogrammed as `order_<n>`, checked for `d³ | |G|`, and order
/// 8 groups are split into `Q8` and `D4`.
pub fn run_balanced_orders(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let len = cfg.len;
    run_rows(cfg, ExperimentKind::BalancedOrders, |r, rng, acc| {
        acc.extras.entry("d3_violations".into()).or_insert(0);
        let rels = draw_triples(rng, r, len);
        let out = HeisOutcome::new(&rels);
        let bucket = if out.is_trivial() {
            0
        } else if out.is_nonabelian() {
            match &out.order.order {
                Some(n) => {
                    acc.bump(&format!("order_{n}"));
                    let d = &out.order.d;
                    if !(n % (d * d * d)).is_zero() {
                        acc.bump("d3_violations");
                    }
                    if *n == BigInt::from(8) {
                        let table = build_finite_quotient(&rels).expect("order 8 fits the cap");
                        acc.bump(&identify_small_group(&table));
                    }
                    4
                }
                None => 3,
            }
        } else if out.ab_rank <= 1 {
            1
        } else {
            2
        };
        if let Some(n) = &out.order.order {
            acc.see_order(n);
        }
        acc.cells[bucket] += 1;
    })
}

/// One-relator quotients: the `(d²/D, d)` census plus the cyclic,
/// BS-type and central-relator counts.
pub fn run_dd_census(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let len = cfg.len;
    run_rows(cfg, ExperimentKind::DdCensus, |r, rng, acc| {
        let rels = draw_triples(rng, r, len);
        let bucket = match classify_one_relator(&rels[0]) {
            Err(_) => 3,
            Ok(g) if g.kind == DescriptorKind::CentralRelator => 3,
            Ok(g) => {
                *acc.pairs.entry((g.torsion_pair.0.clone(), g.d.clone())).or_insert(0) += 1;
                if g.is_cyclic_z {
                    0
                } else if g.is_bs_type {
                    1
                } else {
                    2
                }
            }
        };
        acc.cells[bucket] += 1;
    })
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    match cfg.kind {
        ExperimentKind::RankHeatmap => run_rank_heatmap(cfg),
        ExperimentKind::HeisTable => run_heis_table(cfg),
        ExperimentKind::BalancedOrders => run_balanced_orders(cfg),
        ExperimentKind::DdCensus => run_dd_census(cfg),
    }
}

fn complement(p: ProbValue) -> ProbValue {
    ProbValue {
        value: 1.0 - p.value,
        err_bound: p.err_bound,
    }
}

/// Predicted probabilities for a row. Labels are either outcome labels or
/// the aggregates `rank_lt_m` and `rank_le_1`.
fn predictions(cfg: &ExperimentConfig, r: usize) -> Result<BTreeMap<String, ProbValue>> {
    let mut p = BTreeMap::new();
    let m = cfg.m;
    match cfg.kind {
        ExperimentKind::RankHeatmap if m >= 2 => {
            p.insert("rank_lt_m".into(), prob_rank_drop(m, r)?);
            if r + 1 == m || r == m {
                p.insert("rank_le_1".into(), prob_cyclic(m, r)?);
            }
            if r > m {
                p.insert("rank_0".into(), prob_trivial(m, r)?);
            }
        }
        ExperimentKind::HeisTable => {
            p.insert("trivial".into(), prob_trivial(2, r)?);
            if r == 1 {
                let z = prob_primitive(2)?;
                p.insert("cyclic_infinite".into(), z);
                p.insert("nonabelian_infinite".into(), complement(z));
            }
            if r == 2 {
                p.insert("cyclic_finite".into(), prob_cyclic(2, 2)?);
            }
        }
        ExperimentKind::DdCensus => {
            let z2 = prob_primitive(2)?;
            let z3 = prob_primitive(3)?;
            p.insert("cyclic_z".into(), z2);
            // Heuristic value; exact only when one weight is even.
            p.insert(
                "bs_type".into(),
                ProbValue {
                    value: z3.value - z2.value,
                    err_bound: z3.err_bound + z2.err_bound,
                },
            );
        }
        _ => {}
    }
    Ok(p)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonEntry {
    pub r: usize,
    pub label: String,
    pub predicted: ProbValue,
    pub observed: u64,
    pub trials: u64,
    pub frequency: f64,
    pub z: f64,
    pub flagged: bool,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Comparison {
    pub entries: Vec<ComparisonEntry>,
}

impl Comparison {
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn flagged(&self) -> impl Iterator<Item = &ComparisonEntry> {
        self.entries.iter().filter(|e| e.flagged)
    }

    pub fn get(&self, r: usize, label: &str) -> Option<&ComparisonEntry> {
        self.entries.iter().find(|e| e.r == r && e.label == label)
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.entries
                .iter()
                .map(|e| {
                    json!({
                        "r": e.r,
                        "label": e.label,
                        "predicted": e.predicted.value,
                        "err_bound": e.predicted.err_bound,
                        "observed": e.observed,
                        "trials": e.trials,
                        "frequency": e.frequency,
                        // JSON has no infinity; an impossible observation is reported as null.
                        "z": e.z.is_finite().then_some(e.z),
                        "flagged": e.flagged,
                    })
                })
                .collect(),
        )
    }
}

fn observed(report: &ExperimentReport, row: &ReportRow, label: &str) -> u64 {
    let m = report.config.m;
    match label {
        "rank_lt_m" => (0..m).map(|j| row.count(&format!("rank_{j}"))).sum(),
        "rank_le_1" => row.count("rank_0") + row.count("rank_1"),
        other => row.count(other),
    }
}

/// Binomial z-score of an observed count against a predicted probability.
pub fn z_score(observed: u64, trials: u64, p: f64) -> f64 {
    let n = trials as f64;
    let expected = n * p;
    let var = n * p * (1.0 - p);
    if var > 0.0 {
        (observed as f64 - expected) / var.sqrt()
    } else if (observed as f64 - expected).abs() < 0.5 {
        0.0
    } else {
        f64::INFINITY
    }
}

/// Predicted vs observed frequencies with z-scores; `|z| > 4` is flagged.
pub fn compare_with_predictions(report: &ExperimentReport) -> Comparison {
    let mut entries = Vec::new();
    for row in &report.rows {
        let Some(pred) = &row.predicted else { continue };
        let trials = row.total();
        if trials == 0 {
            continue;
        }
        for (label, p) in pred {
            let obs = observed(report, row, label);
            let z = z_score(obs, trials, p.value);
            entries.push(ComparisonEntry {
                r: row.r,
                label: label.clone(),
                predicted: *p,
                observed: obs,
                trials,
                frequency: obs as f64 / trials as f64,
                z,
                flagged: z.abs() > 4.0,
            });
        }
    }
    Comparison { entries }
}
