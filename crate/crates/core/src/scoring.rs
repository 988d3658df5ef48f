//! Group performance scores (MGA, ALL, DD, VL), divergence, mean motivation,
//! the rank/wins/ties table and the binned divergent-vs-non-divergent
//! comparison.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;

use crate::equilibrium::{goal_summary, GoalSummary, Limits};
use crate::error::{Error, Result};
use crate::game::Game;
use crate::rational::Rational;
use crate::sweep::SweepRecord;

/// MGA, ALL, DD and VL for one game. Scores are `None` when the base game
/// has a goal without any pure equilibrium.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScoreReport {
    pub mga: Option<Rational>,
    pub all_score: Option<Rational>,
    pub dd: Option<Rational>,
    pub vl: Option<Rational>,
    /// DD and VL scenarios that had a goal without equilibria (counted as 0).
    pub no_equilibrium_scenarios: usize,
    /// `|E_j|` of the base game.
    pub equilibrium_counts: Vec<u64>,
}

/// Mean of scenario MGAs; scenarios without equilibria count as 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScenarioAverage {
    pub value: Rational,
    pub no_equilibrium_scenarios: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct GoalKey {
    costs: Vec<Rational>,
    threshold: Rational,
    weights: Vec<Rational>,
}

/// Scores games, caching single-goal summaries. A single-goal summary only
/// depends on the multiset of motivations toward that goal, so groups that
/// share agent types reuse each other's work.
#[derive(Debug, Default)]
pub struct Scorer {
    limits: Limits,
    cache: HashMap<GoalKey, GoalSummary>,
}

impl Scorer {
    pub fn new(limits: Limits) -> Self {
        Scorer {
            limits,
            cache: HashMap::new(),
        }
    }

    pub fn goal_summaries(&mut self, game: &Game) -> Result<Vec<GoalSummary>> {
        (0..game.n_goals())
            .map(|j| {
                let mut weights = game.motivation_column(j);
                weights.sort();
                let key = GoalKey {
                    costs: game.costs().as_slice().to_vec(),
                    threshold: game.threshold(j).clone(),
                    weights,
                };
                if let Some(s) = self.cache.get(&key) {
                    return Ok(*s);
                }
                let s = goal_summary(game.costs(), &key.weights, &key.threshold, &self.limits)?;
                self.cache.insert(key, s);
                Ok(s)
            })
            .collect()
    }

    /// `(1/M) sum_j a_j`.
    pub fn mga(&mut self, game: &Game) -> Result<Option<Rational>> {
        Ok(mga_from(&self.goal_summaries(game)?))
    }

    /// `prod_j a_j`.
    pub fn all_score(&mut self, game: &Game) -> Result<Option<Rational>> {
        Ok(all_from(&self.goal_summaries(game)?))
    }

    fn scenario_average(&mut self, scenarios: Vec<Game>) -> Result<ScenarioAverage> {
        let count = scenarios.len();
        let mut total = Rational::zero();
        let mut missing = 0;
        for scenario in scenarios {
            match self.mga(&scenario)? {
                Some(v) => total = total + v,
                None => missing += 1,
            }
        }
        Ok(ScenarioAverage {
            value: total / Rational::from(count),
            no_equilibrium_scenarios: missing,
        })
    }

    /// Mean MGA over the `N` games where one agent's motivations are all
    /// replaced by `defector_motivation`.
    pub fn dd(&mut self, game: &Game, defector_motivation: &Rational) -> Result<ScenarioAverage> {
        let row = vec![defector_motivation.clone(); game.n_goals()];
        let scenarios = (0..game.n_agents())
            .map(|i| game.with_motivation_row(i, row.clone()))
            .collect::<Result<Vec<_>>>()?;
        self.scenario_average(scenarios)
    }

    /// Mean MGA over the `2M` games where one goal's threshold moves one
    /// effort unit up or down.
    pub fn vl(&mut self, game: &Game) -> Result<ScenarioAverage> {
        let one = Rational::one();
        let mut scenarios = Vec::with_capacity(2 * game.n_goals());
        for j in 0..game.n_goals() {
            let g = game.threshold(j);
            scenarios.push(game.with_threshold(j, g + &one)?);
            scenarios.push(game.with_threshold(j, g - &one)?);
        }
        self.scenario_average(scenarios)
    }

    pub fn score(&mut self, game: &Game, defector_motivation: &Rational) -> Result<ScoreReport> {
        let base = self.goal_summaries(game)?;
        let counts = base.iter().map(|s| s.equilibria).collect();
        let Some(mga) = mga_from(&base) else {
            return Ok(ScoreReport {
                mga: None,
                all_score: None,
                dd: None,
                vl: None,
                no_equilibrium_scenarios: 0,
                equilibrium_counts: counts,
            });
        };
        let dd = self.dd(game, defector_motivation)?;
        let vl = self.vl(game)?;
        Ok(ScoreReport {
            mga: Some(mga),
            all_score: all_from(&base),
            dd: Some(dd.value),
            vl: Some(vl.value),
            no_equilibrium_scenarios: dd.no_equilibrium_scenarios + vl.no_equilibrium_scenarios,
            equilibrium_counts: counts,
        })
    }
}

fn mga_from(summaries: &[GoalSummary]) -> Option<Rational> {
    let fractions: Option<Vec<Rational>> = summaries
        .iter()
        .map(GoalSummary::achieved_fraction)
        .collect();
    fractions.map(|f| f.iter().sum::<Rational>() / Rational::from(f.len()))
}

fn all_from(summaries: &[GoalSummary]) -> Option<Rational> {
    summaries
        .iter()
        .map(GoalSummary::achieved_fraction)
        .product::<Option<Rational>>()
}

pub fn mga(game: &Game) -> Result<Option<Rational>> {
    Scorer::default().mga(game)
}

pub fn all_score(game: &Game) -> Result<Option<Rational>> {
    Scorer::default().all_score(game)
}

pub fn dd_score(game: &Game, defector_motivation: &Rational) -> Result<ScenarioAverage> {
    Scorer::default().dd(game, defector_motivation)
}

pub fn vl_score(game: &Game) -> Result<ScenarioAverage> {
    Scorer::default().vl(game)
}

pub fn score(game: &Game, defector_motivation: &Rational) -> Result<ScoreReport> {
    Scorer::default().score(game, defector_motivation)
}

/// `V = (1/M) max_{i,j} sum_k (w_ik - w_jk)^2`; zero for a single agent.
pub fn divergence(game: &Game) -> Rational {
    let rows = game.motivations();
    let mut best = Rational::zero();
    for (a, ra) in rows.iter().enumerate() {
        for rb in &rows[a + 1..] {
            let d: Rational = ra
                .iter()
                .zip(rb)
                .map(|(x, y)| {
                    let diff = x - y;
                    &diff * &diff
                })
                .sum();
            if d > best {
                best = d;
            }
        }
    }
    best / Rational::from(game.n_goals())
}

/// Total motivation divided by the number of agents.
pub fn mean_motivation(game: &Game) -> Rational {
    let total: Rational = game.motivations().iter().flatten().sum();
    total / Rational::from(game.n_agents())
}

pub const SCORE_NAMES: [&str; 4] = ["mga", "all", "dd", "vl"];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankedRow {
    pub label: String,
    /// MGA, ALL, DD, VL.
    pub scores: [Rational; 4],
    /// MGAR, ALLR, DDR, VLR (1 = best; ties take the minimum rank).
    pub ranks: [usize; 4],
    pub wins: usize,
    pub ties: usize,
}

/// Ranks every score descending with minimum tied rank, then compares every
/// pair of groups: whoever is better ranked on more scores wins, equal counts
/// are a tie for both.
pub fn rank_table(rows: &[(String, ScoreReport)]) -> Result<Vec<RankedRow>> {
    let scores: Vec<[Rational; 4]> = rows
        .iter()
        .map(|(label, r)| {
            let get = |v: &Option<Rational>, score: &'static str| {
                v.clone().ok_or_else(|| Error::MissingScore {
                    label: label.clone(),
                    score,
                })
            };
            Ok([
                get(&r.mga, "mga")?,
                get(&r.all_score, "all")?,
                get(&r.dd, "dd")?,
                get(&r.vl, "vl")?,
            ])
        })
        .collect::<Result<_>>()?;

    let ranks: Vec<[usize; 4]> = scores
        .iter()
        .map(|mine| {
            std::array::from_fn(|s| 1 + scores.iter().filter(|other| other[s] > mine[s]).count())
        })
        .collect();

    let mut out: Vec<RankedRow> = rows
        .iter()
        .zip(scores)
        .zip(&ranks)
        .map(|(((label, _), scores), r)| RankedRow {
            label: label.clone(),
            scores,
            ranks: *r,
            wins: 0,
            ties: 0,
        })
        .collect();

    for a in 0..out.len() {
        for b in a + 1..out.len() {
            let a_better = (0..4).filter(|&s| ranks[a][s] < ranks[b][s]).count();
            let b_better = (0..4).filter(|&s| ranks[b][s] < ranks[a][s]).count();
            match a_better.cmp(&b_better) {
                std::cmp::Ordering::Greater => out[a].wins += 1,
                std::cmp::Ordering::Less => out[b].wins += 1,
                std::cmp::Ordering::Equal => {
                    out[a].ties += 1;
                    out[b].ties += 1;
                }
            }
        }
    }

    out.sort_by(|x, y| {
        y.wins
            .cmp(&x.wins)
            .then(y.ties.cmp(&x.ties))
            .then_with(|| x.label.cmp(&y.label))
    });
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinnedComparison {
    pub bin_low: Rational,
    pub bin_high: Rational,
    pub top_divergent_mga: Option<Rational>,
    pub top_nondivergent_mga: Option<Rational>,
    pub difference: Option<Rational>,
    /// MAD of divergent MGAs plus MAD of non-divergent MGAs.
    pub ribbon_width: Option<Rational>,
}

fn median(sorted: &[Rational]) -> Option<Rational> {
    let n = sorted.len();
    match n {
        0 => None,
        _ if n % 2 == 1 => Some(sorted[n / 2].clone()),
        _ => Some((&sorted[n / 2 - 1] + &sorted[n / 2]) / Rational::from_integer(2)),
    }
}

/// Median absolute deviation from the median, without a scale constant.
pub fn median_absolute_deviation(values: &[Rational]) -> Option<Rational> {
    let mut sorted = values.to_vec();
    sorted.sort();
    let m = median(&sorted)?;
    let mut deviations: Vec<Rational> = sorted.iter().map(|v| (v - &m).abs()).collect();
    deviations.sort();
    median(&deviations)
}

/// Buckets records by mean motivation into `[k w, (k+1) w)` and compares the
/// best divergent (`divergence >= cutoff`) against the best non-divergent
/// MGA in each occupied bucket. Records without an MGA are ignored.
pub fn binned_top_difference(
    records: &[SweepRecord],
    width: &Rational,
    divergence_cutoff: &Rational,
) -> Result<Vec<BinnedComparison>> {
    if !width.is_positive() {
        return Err(Error::InvalidConfig(format!(
            "bin width {width} must be positive"
        )));
    }
    let mut bins: BTreeMap<BigInt, (Vec<Rational>, Vec<Rational>)> = BTreeMap::new();
    for r in records {
        let Some(mga) = &r.mga else { continue };
        let k = (&r.mean_motivation / width).floor();
        let entry = bins.entry(k).or_default();
        if r.divergence >= *divergence_cutoff {
            entry.0.push(mga.clone());
        } else {
            entry.1.push(mga.clone());
        }
    }
    Ok(bins
        .into_iter()
        .map(|(k, (div, nondiv))| {
            let bin_low = width * Rational::from(k);
            let bin_high = &bin_low + width;
            let top_div = Rational::max_of(&div);
            let top_nondiv = Rational::max_of(&nondiv);
            let difference = match (&top_div, &top_nondiv) {
                (Some(a), Some(b)) => Some(a - b),
                _ => None,
            };
            let ribbon = match (
                median_absolute_deviation(&div),
                median_absolute_deviation(&nondiv),
            ) {
                (Some(a), Some(b)) => Some(a + b),
                _ => None,
            };
            BinnedComparison {
                bin_low,
                bin_high,
                top_divergent_mga: top_div,
                top_nondivergent_mga: top_nondiv,
                difference,
                ribbon_width: ribbon,
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{standard_game, GroupSpec};

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn std_game(label: &str, n_goals: usize) -> Game {
        let group = GroupSpec::parse(label, n_goals, q("1/4")).unwrap();
        standard_game(group.n_agents(), n_goals, &group).unwrap()
    }

    fn delta() -> Rational {
        q("1/4")
    }

    #[test]
    fn mga_values() {
        assert_eq!(mga(&std_game("AB", 2)).unwrap(), Some(q("1")));
        assert_eq!(mga(&std_game("AA", 2)).unwrap(), Some(q("1/2")));
        assert_eq!(mga(&std_game("AAA", 2)).unwrap(), Some(q("7/16")));
    }

    #[test]
    fn all_values() {
        assert_eq!(all_score(&std_game("AB", 2)).unwrap(), Some(q("1")));
        assert_eq!(all_score(&std_game("OO", 2)).unwrap(), Some(q("1/4")));
        assert_eq!(all_score(&std_game("AAAA", 2)).unwrap(), Some(q("0")));
    }

    #[test]
    fn dd_values() {
        assert_eq!(
            dd_score(&std_game("AB", 2), &delta()).unwrap().value,
            q("1/2")
        );
        assert_eq!(
            dd_score(&std_game("AAA", 2), &delta()).unwrap().value,
            q("1/3")
        );
        assert_eq!(
            dd_score(&std_game("OOOO", 2), &delta()).unwrap().value,
            q("0")
        );
        assert_eq!(
            dd_score(&std_game("AAAA", 2), &delta()).unwrap().value,
            q("3/7")
        );
    }

    #[test]
    fn vl_values() {
        let ab = vl_score(&std_game("AB", 2)).unwrap();
        assert_eq!(ab.value, q("3/4"));
        assert_eq!(ab.no_equilibrium_scenarios, 0);
        assert_eq!(vl_score(&std_game("AA", 2)).unwrap().value, q("9/16"));
        let expected = (q("1/2") + q("5/11") + q("19/40") + q("19/40")) / q("4");
        assert_eq!(vl_score(&std_game("AAAA", 2)).unwrap().value, expected);
        assert_eq!(expected.to_fixed(2), "0.48");
    }

    #[test]
    fn vl_scenarios_of_ab() {
        let g = std_game("AB", 2);
        assert_eq!(
            mga(&g.with_threshold(0, q("0")).unwrap()).unwrap(),
            Some(q("1"))
        );
        assert_eq!(
            mga(&g.with_threshold(0, q("2")).unwrap()).unwrap(),
            Some(q("1/2"))
        );
    }

    #[test]
    fn divergence_values() {
        assert_eq!(divergence(&std_game("AB", 2)), q("1"));
        assert_eq!(divergence(&std_game("OO", 2)), q("0"));
        assert_eq!(divergence(&std_game("AO", 2)), q("1/4"));
        assert_eq!(divergence(&std_game("A", 2)), q("0"));
    }

    #[test]
    fn mean_motivation_values() {
        assert_eq!(mean_motivation(&std_game("AB", 2)), q("3/2"));
        assert_eq!(mean_motivation(&std_game("OO", 2)), q("3/2"));
        let lone = Game::new(
            crate::game::CostSet::new(vec![q("0"), q("1")]).unwrap(),
            vec![q("1")],
            vec![vec![q("0")]],
        )
        .unwrap();
        assert_eq!(mean_motivation(&lone), q("0"));
    }

    #[test]
    fn report_is_consistent() {
        let r = score(&std_game("AB", 2), &delta()).unwrap();
        assert_eq!(r.mga, Some(q("1")));
        assert_eq!(r.all_score, Some(q("1")));
        assert_eq!(r.dd, Some(q("1/2")));
        assert_eq!(r.vl, Some(q("3/4")));
        assert_eq!(r.equilibrium_counts, vec![1, 1]);
    }

    fn report(mga: &str, all: &str, dd: &str, vl: &str) -> ScoreReport {
        ScoreReport {
            mga: Some(q(mga)),
            all_score: Some(q(all)),
            dd: Some(q(dd)),
            vl: Some(q(vl)),
            no_equilibrium_scenarios: 0,
            equilibrium_counts: vec![],
        }
    }

    #[test]
    fn single_row_ranks() {
        let rows = rank_table(&[("AB".to_string(), report("1", "1", "1/2", "3/4"))]).unwrap();
        assert_eq!(rows[0].ranks, [1, 1, 1, 1]);
        assert_eq!((rows[0].wins, rows[0].ties), (0, 0));
    }

    #[test]
    fn ranks_use_minimum_on_ties() {
        let rows = rank_table(&[
            ("X".to_string(), report("1/2", "0", "0", "0")),
            ("Y".to_string(), report("1/2", "1", "0", "0")),
            ("Z".to_string(), report("1/4", "1", "0", "0")),
        ])
        .unwrap();
        let by = |l: &str| rows.iter().find(|r| r.label == l).unwrap().clone();
        assert_eq!(by("X").ranks, [1, 3, 1, 1]);
        assert_eq!(by("Y").ranks, [1, 1, 1, 1]);
        assert_eq!(by("Z").ranks, [3, 1, 1, 1]);
        assert_eq!(by("Y").wins, 2);
        assert_eq!(by("X").ties, 1);
        assert_eq!(by("Z").ties, 1);
    }

    #[test]
    fn missing_score_is_an_error() {
        let mut r = report("1", "1", "1", "1");
        r.dd = None;
        assert!(matches!(
            rank_table(&[("AB".into(), r)]),
            Err(Error::MissingScore { score: "dd", .. })
        ));
    }

    #[test]
    fn mad() {
        assert_eq!(median_absolute_deviation(&[]), None);
        assert_eq!(
            median_absolute_deviation(&[q("1/2"), q("1/2")]),
            Some(q("0"))
        );
        assert_eq!(
            median_absolute_deviation(&[q("1"), q("2"), q("3"), q("4"), q("100")]),
            Some(q("1"))
        );
    }

    fn record(label: &str, mean: &str, div: &str, mga: &str) -> SweepRecord {
        SweepRecord {
            label: label.into(),
            n_agents: 2,
            n_goals: 2,
            mean_motivation: q(mean),
            divergence: q(div),
            divergent: false,
            mga: Some(q(mga)),
            all_score: None,
            dd: None,
            vl: None,
            equilibrium_counts: vec![],
            no_equilibrium_scenarios: 0,
        }
    }

    #[test]
    fn binned_ab_vs_oo() {
        let records = [
            record("AB", "3/2", "1", "1"),
            record("OO", "3/2", "0", "1/2"),
        ];
        let bins = binned_top_difference(&records, &q("1/10"), &q("1/2")).unwrap();
        assert_eq!(bins.len(), 1);
        assert_eq!(bins[0].bin_low, q("3/2"));
        assert_eq!(bins[0].bin_high, q("8/5"));
        assert_eq!(bins[0].difference, Some(q("1/2")));
        assert_eq!(bins[0].ribbon_width, Some(q("0")));
    }

    #[test]
    fn binned_one_sided() {
        let bins =
            binned_top_difference(&[record("AB", "3/2", "1", "1")], &q("1/10"), &q("1/2")).unwrap();
        assert_eq!(bins[0].difference, None);

        let twins = [record("X", "1", "1", "1/2"), record("Y", "1", "1", "1/2")];
        let bins = binned_top_difference(&twins, &q("1/10"), &q("1/2")).unwrap();
        assert_eq!(bins[0].top_divergent_mga, Some(q("1/2")));
        assert_eq!(bins[0].top_nondivergent_mga, None);
        assert_eq!(bins[0].difference, None);
        assert_eq!(bins[0].ribbon_width, None);
        assert_eq!(
            median_absolute_deviation(&[q("1/2"), q("1/2")]),
            Some(q("0"))
        );
    }

    #[test]
    fn binned_rejects_bad_width() {
        assert!(binned_top_difference(&[], &q("0"), &q("1/2")).is_err());
        assert!(binned_top_difference(&[], &q("-1"), &q("1/2")).is_err());
    }
}
