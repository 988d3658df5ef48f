//! Group enumeration, parallel scoring sweeps, and the CSV outputs.

use std::io::Write;

use rayon::prelude::*;

use crate::equilibrium::Limits;
use crate::error::{Error, Result};
use crate::game::{standard_costs, standard_game, GroupSpec, TypeCode};
use crate::rational::Rational;
use crate::scoring::{
    divergence, mean_motivation, rank_table, BinnedComparison, RankedRow, ScoreReport, Scorer,
};

/// Which agent types a sweep draws groups from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TypeUniverse {
    /// `A`, `O`, `B`; two goals only.
    Abo,
    /// All `3^M` type codes.
    FullGrid,
}

impl TypeUniverse {
    pub fn types(self, n_goals: usize) -> Result<Vec<TypeCode>> {
        match self {
            TypeUniverse::Abo if n_goals != 2 => Err(Error::InvalidConfig(format!(
                "the A/O/B universe needs exactly 2 goals, got {n_goals}"
            ))),
            TypeUniverse::Abo => Ok(TypeCode::abo()),
            TypeUniverse::FullGrid => Ok(TypeCode::full_grid(n_goals)),
        }
    }
}

/// Default cap on estimated sweep work, in scanned goal columns.
pub const DEFAULT_WORK_CAP: u128 = 50_000_000;

#[derive(Clone, Debug)]
pub struct SweepConfig {
    pub n_agents: usize,
    pub n_goals: usize,
    pub delta: Rational,
    pub type_universe: TypeUniverse,
    pub divergence_cutoff: Rational,
    pub bin_width: Rational,
    pub worker_count: usize,
    pub work_cap: u128,
    /// Skip the work cap.
    pub allow_large: bool,
}

impl SweepConfig {
    pub fn new(n_agents: usize, n_goals: usize) -> Self {
        SweepConfig {
            n_agents,
            n_goals,
            delta: Rational::frac(1, 4),
            type_universe: TypeUniverse::FullGrid,
            divergence_cutoff: Rational::frac(1, 2),
            bin_width: Rational::frac(1, 10),
            worker_count: 1,
            work_cap: DEFAULT_WORK_CAP,
            allow_large: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_agents < 1 || self.n_goals < 1 {
            return Err(Error::InvalidConfig(
                "need at least one agent and one goal".into(),
            ));
        }
        if !self.bin_width.is_positive() {
            return Err(Error::InvalidConfig(format!(
                "bin width {} must be positive",
                self.bin_width
            )));
        }
        if self.delta.is_negative() {
            return Err(Error::InvalidConfig(format!(
                "delta {} is negative",
                self.delta
            )));
        }
        if self.worker_count < 1 {
            return Err(Error::InvalidConfig(
                "worker count must be at least 1".into(),
            ));
        }
        self.type_universe.types(self.n_goals)?;
        Ok(())
    }

    /// `C(|types| + N - 1, N)`.
    pub fn group_count(&self) -> Result<u128> {
        let types = self.type_universe.types(self.n_goals)?.len() as u128;
        Ok(multiset_coefficient(types, self.n_agents as u128))
    }

    /// Groups times `M K^N` scanned goal columns per game.
    pub fn work_estimate(&self) -> Result<u128> {
        let k = standard_costs(self.n_goals).len() as u128;
        let per_game = u32::try_from(self.n_agents)
            .ok()
            .and_then(|n| k.checked_pow(n))
            .and_then(|c| c.checked_mul(self.n_goals as u128))
            .unwrap_or(u128::MAX);
        Ok(self.group_count()?.saturating_mul(per_game))
    }
}

/// Number of multisets of size `k` over `n` kinds.
pub fn multiset_coefficient(n: u128, k: u128) -> u128 {
    if n == 0 {
        return u128::from(k == 0);
    }
    // C(n + k - 1, k), built incrementally so every division is exact.
    let mut acc: u128 = 1;
    for i in 1..=k {
        acc = acc.saturating_mul(n + i - 1) / i;
    }
    acc
}

/// Every multiset of `N` agent types, in canonical order.
pub fn enumerate_groups(config: &SweepConfig) -> Result<Vec<GroupSpec>> {
    config.validate()?;
    let types = config.type_universe.types(config.n_goals)?;
    let n = config.n_agents;
    let mut out = Vec::new();
    let mut idx = vec![0usize; n];
    loop {
        let agents = idx.iter().map(|&i| types[i].clone()).collect();
        out.push(GroupSpec::new(agents, config.delta.clone())?);
        // Next non-decreasing index sequence.
        let Some(pos) = (0..n).rev().find(|&p| idx[p] + 1 < types.len()) else {
            return Ok(out);
        };
        let v = idx[pos] + 1;
        for slot in &mut idx[pos..] {
            *slot = v;
        }
    }
}

/// One scored group; the unit row of the sweep CSV.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepRecord {
    pub label: String,
    pub n_agents: usize,
    pub n_goals: usize,
    pub mean_motivation: Rational,
    pub divergence: Rational,
    pub divergent: bool,
    pub mga: Option<Rational>,
    pub all_score: Option<Rational>,
    pub dd: Option<Rational>,
    pub vl: Option<Rational>,
    pub equilibrium_counts: Vec<u64>,
    pub no_equilibrium_scenarios: usize,
}

impl SweepRecord {
    pub fn report(&self) -> ScoreReport {
        ScoreReport {
            mga: self.mga.clone(),
            all_score: self.all_score.clone(),
            dd: self.dd.clone(),
            vl: self.vl.clone(),
            no_equilibrium_scenarios: self.no_equilibrium_scenarios,
            equilibrium_counts: self.equilibrium_counts.clone(),
        }
    }
}

/// Builds and scores the standard game of one group.
pub fn score_group(
    scorer: &mut Scorer,
    group: &GroupSpec,
    divergence_cutoff: &Rational,
) -> Result<SweepRecord> {
    let game = standard_game(group.n_agents(), group.n_goals(), group)?;
    let report = scorer.score(&game, group.delta())?;
    let divergence = divergence(&game);
    Ok(SweepRecord {
        label: group.label(),
        n_agents: game.n_agents(),
        n_goals: game.n_goals(),
        mean_motivation: mean_motivation(&game),
        divergent: divergence >= *divergence_cutoff,
        divergence,
        mga: report.mga,
        all_score: report.all_score,
        dd: report.dd,
        vl: report.vl,
        equilibrium_counts: report.equilibrium_counts,
        no_equilibrium_scenarios: report.no_equilibrium_scenarios,
    })
}

/// Scores every group of the configuration. Output order is the canonical
/// group order whatever the worker count.
pub fn run_sweep(config: &SweepConfig) -> Result<Vec<SweepRecord>> {
    config.validate()?;
    let estimate = config.work_estimate()?;
    if !config.allow_large && estimate > config.work_cap {
        return Err(Error::CapExceeded {
            what: "sweep",
            estimate,
            cap: config.work_cap,
        });
    }
    let groups = enumerate_groups(config)?;
    let limits = Limits::default();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.worker_count)
        .build()
        .map_err(|e| Error::InvalidConfig(format!("worker pool: {e}")))?;
    pool.install(|| {
        groups
            .par_iter()
            .map_init(
                || Scorer::new(limits.clone()),
                |scorer, group| score_group(scorer, group, &config.divergence_cutoff),
            )
            .collect()
    })
}

/// Sweeps the configuration and ranks the groups.
pub fn ranked_table(config: &SweepConfig) -> Result<Vec<RankedRow>> {
    let rows: Vec<(String, ScoreReport)> = run_sweep(config)?
        .iter()
        .map(|r| (r.label.clone(), r.report()))
        .collect();
    rank_table(&rows)
}

pub const SWEEP_HEADER: [&str; 18] = [
    "label",
    "n_agents",
    "n_goals",
    "mean_motivation",
    "mean_motivation_exact",
    "divergence",
    "divergence_exact",
    "divergent",
    "mga",
    "mga_exact",
    "all",
    "all_exact",
    "dd",
    "dd_exact",
    "vl",
    "vl_exact",
    "eq_counts",
    "no_eq_scenarios",
];

pub const TABLE_HEADER: [&str; 11] = [
    "motivations",
    "mga",
    "all",
    "dd",
    "vl",
    "mgar",
    "allr",
    "ddr",
    "vlr",
    "wins",
    "ties",
];

pub const BINNED_HEADER: [&str; 6] = [
    "bin_low",
    "bin_high",
    "top_div",
    "top_nondiv",
    "diff",
    "ribbon",
];

fn csv_writer<W: Write>(out: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .quote_style(csv::QuoteStyle::Necessary)
        .from_writer(out)
}

/// Scores print with two decimals, rounding half away from zero.
pub fn display(v: &Rational) -> String {
    v.to_fixed(2)
}

fn display_opt(v: &Option<Rational>) -> String {
    v.as_ref().map(display).unwrap_or_default()
}

fn exact_opt(v: &Option<Rational>) -> String {
    v.as_ref()
        .map(Rational::to_exact_string)
        .unwrap_or_default()
}

pub fn write_sweep_csv<W: Write>(records: &[SweepRecord], out: W) -> Result<()> {
    let mut w = csv_writer(out);
    w.write_record(SWEEP_HEADER)?;
    for r in records {
        let counts = r
            .equilibrium_counts
            .iter()
            .map(u64::to_string)
            .collect::<Vec<_>>()
            .join(";");
        w.write_record([
            r.label.clone(),
            r.n_agents.to_string(),
            r.n_goals.to_string(),
            display(&r.mean_motivation),
            r.mean_motivation.to_exact_string(),
            display(&r.divergence),
            r.divergence.to_exact_string(),
            r.divergent.to_string(),
            display_opt(&r.mga),
            exact_opt(&r.mga),
            display_opt(&r.all_score),
            exact_opt(&r.all_score),
            display_opt(&r.dd),
            exact_opt(&r.dd),
            display_opt(&r.vl),
            exact_opt(&r.vl),
            counts,
            r.no_equilibrium_scenarios.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_table_csv<W: Write>(rows: &[RankedRow], out: W) -> Result<()> {
    let mut w = csv_writer(out);
    w.write_record(TABLE_HEADER)?;
    for r in rows {
        let mut fields = vec![r.label.clone()];
        fields.extend(r.scores.iter().map(display));
        fields.extend(r.ranks.iter().map(usize::to_string));
        fields.push(r.wins.to_string());
        fields.push(r.ties.to_string());
        w.write_record(&fields)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_binned_csv<W: Write>(bins: &[BinnedComparison], out: W) -> Result<()> {
    let mut w = csv_writer(out);
    w.write_record(BINNED_HEADER)?;
    for b in bins {
        w.write_record([
            b.bin_low.to_trimmed(6),
            b.bin_high.to_trimmed(6),
            display_opt(&b.top_divergent_mga),
            display_opt(&b.top_nondivergent_mga),
            display_opt(&b.difference),
            display_opt(&b.ribbon_width),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn abo(n: usize) -> SweepConfig {
        SweepConfig {
            type_universe: TypeUniverse::Abo,
            ..SweepConfig::new(n, 2)
        }
    }

    #[test]
    fn abo_groups() {
        let labels: Vec<String> = enumerate_groups(&abo(2))
            .unwrap()
            .iter()
            .map(GroupSpec::label)
            .collect();
        assert_eq!(labels, ["AA", "AO", "AB", "OO", "OB", "BB"]);
        assert_eq!(enumerate_groups(&abo(4)).unwrap().len(), 15);
        assert_eq!(
            enumerate_groups(&SweepConfig::new(3, 2)).unwrap().len(),
            165
        );
    }

    #[test]
    fn abo_needs_two_goals() {
        let c = SweepConfig {
            type_universe: TypeUniverse::Abo,
            ..SweepConfig::new(2, 3)
        };
        assert!(enumerate_groups(&c).is_err());
    }

    #[test]
    fn multiset_counts() {
        assert_eq!(multiset_coefficient(9, 3), 165);
        assert_eq!(multiset_coefficient(27, 5), 169_911);
        assert_eq!(multiset_coefficient(9, 5), 1287);
        assert_eq!(multiset_coefficient(3, 0), 1);
    }

    #[test]
    fn sweep_ab_record() {
        let records = run_sweep(&abo(2)).unwrap();
        assert_eq!(records.len(), 6);
        let ab = records.iter().find(|r| r.label == "AB").unwrap();
        assert_eq!(ab.mga, Some(q("1")));
        assert_eq!(ab.all_score, Some(q("1")));
        assert_eq!(ab.dd, Some(q("1/2")));
        assert_eq!(ab.vl, Some(q("3/4")));
        assert!(ab.divergent);
    }

    #[test]
    fn sweep_lone_agent() {
        let config = SweepConfig::new(1, 1);
        let records = run_sweep(&config).unwrap();
        let lone = records.iter().find(|r| r.label == "2").unwrap();
        assert_eq!(lone.mga, Some(q("1")));
    }

    #[test]
    fn sweep_cap() {
        let config = SweepConfig::new(5, 3);
        assert_eq!(config.work_estimate().unwrap(), 169_911 * 3 * 243);
        assert!(matches!(run_sweep(&config), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn empty_csvs_have_headers() {
        let mut buf = Vec::new();
        write_sweep_csv(&[], &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "label,n_agents,n_goals,mean_motivation,mean_motivation_exact,divergence,divergence_exact,divergent,mga,mga_exact,all,all_exact,dd,dd_exact,vl,vl_exact,eq_counts,no_eq_scenarios\n"
        );
        let mut buf = Vec::new();
        write_table_csv(&[], &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "motivations,mga,all,dd,vl,mgar,allr,ddr,vlr,wins,ties\n"
        );
        let mut buf = Vec::new();
        write_binned_csv(&[], &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "bin_low,bin_high,top_div,top_nondiv,diff,ribbon\n"
        );
    }

    #[test]
    fn sweep_csv_row() {
        let records = run_sweep(&abo(2)).unwrap();
        let mut buf = Vec::new();
        write_sweep_csv(&records, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.contains(
            "\nAB,2,2,1.50,3/2,1.00,1/1,true,1.00,1/1,1.00,1/1,0.50,1/2,0.75,3/4,1;1,0\n"
        ));
        assert!(!text.contains('\r'));
    }
}
