//! Pure-strategy Nash equilibria, iterated elimination of strictly dominated
//! strategies, and the constructive check of the "importance of being
//! different" theorem.
//!
//! Utilities are additive over goals and each goal term depends only on the
//! agent's own entry and the column sum, so a profile is an equilibrium iff
//! every goal column is an equilibrium of its single-goal game. The full
//! equilibrium set is therefore the Cartesian product of per-goal column sets.
//! [`brute_force_equilibria`] scans whole profiles with whole-row deviations
//! and is kept as the independent cross-check of that factorization.

use std::collections::BTreeSet;
use std::ops::{Add, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use rand::Rng;

use crate::error::{Error, Result};
use crate::game::{ContributionProfile, CostSet, Game};
use crate::odometer::Odometer;
use crate::rational::Rational;

/// Guardrails on exhaustive enumeration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Maximum `K^(M N)` for [`brute_force_equilibria`].
    pub brute_force_profiles: u128,
    /// Maximum `K^N` columns scanned per goal.
    pub goal_columns: u128,
    /// Maximum strategy pairs compared per elimination round.
    pub iesds_pairs: u128,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            brute_force_profiles: 10_000_000,
            goal_columns: 10_000_000,
            iesds_pairs: 1_000_000,
        }
    }
}

/// All agents' contributions toward a single goal, as cost-set indices.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GoalColumnProfile {
    pub column: Vec<usize>,
    pub achieves_goal: bool,
}

/// Equilibrium count and how many of those equilibria reach the goal.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct GoalSummary {
    pub equilibria: u64,
    pub achieving: u64,
}

impl GoalSummary {
    /// `achieving / equilibria`, undefined when there is no equilibrium.
    pub fn achieved_fraction(&self) -> Option<Rational> {
        (self.equilibria > 0).then(|| {
            Rational::from(self.achieving as usize) / Rational::from(self.equilibria as usize)
        })
    }
}

trait Scalar: Clone + Ord + Add<Output = Self> + Sub<Output = Self> {
    fn zero() -> Self;
}

impl Scalar for i128 {
    fn zero() -> Self {
        0
    }
}

impl Scalar for Rational {
    fn zero() -> Self {
        Rational::zero()
    }
}

/// Rescales every value by the lcm of the denominators when the resulting
/// integers comfortably fit in `i128`.
fn to_scaled_integers(groups: &[&[Rational]]) -> Option<Vec<Vec<i128>>> {
    let mut lcm = BigInt::one();
    for v in groups.iter().flat_map(|g| g.iter()) {
        lcm = lcm.lcm(v.denom());
    }
    let bound = BigInt::one() << 96;
    groups
        .iter()
        .map(|g| {
            g.iter()
                .map(|v| {
                    let scaled = v.numer() * (&lcm / v.denom());
                    if scaled > bound || scaled < -&bound {
                        None
                    } else {
                        scaled.to_i128()
                    }
                })
                .collect()
        })
        .collect()
}

/// Visits every equilibrium column of the single-goal game in lexicographic
/// order together with whether it reaches the threshold.
fn scan_goal<T: Scalar>(
    costs: &[T],
    weights: &[T],
    threshold: &T,
    mut visit: impl FnMut(&[usize], bool),
) {
    let zero = T::zero();
    for column in Odometer::new(weights.len(), costs.len()) {
        let sum = column
            .iter()
            .fold(zero.clone(), |acc, &k| acc + costs[k].clone());
        let achieved = sum >= *threshold;
        let stable = column.iter().enumerate().all(|(agent, &own)| {
            let w = &weights[agent];
            let others = sum.clone() - costs[own].clone();
            let payoff = |k: usize| -> T {
                let reached = others.clone() + costs[k].clone() >= *threshold;
                let gain = if reached { w.clone() } else { zero.clone() };
                gain - costs[k].clone()
            };
            let current = payoff(own);
            (0..costs.len()).all(|k| k == own || payoff(k) <= current)
        });
        if stable {
            visit(&column, achieved);
        }
    }
}

fn scan_goal_exact(
    costs: &CostSet,
    weights: &[Rational],
    threshold: &Rational,
    visit: impl FnMut(&[usize], bool),
) {
    let threshold_slice = std::slice::from_ref(threshold);
    match to_scaled_integers(&[costs.as_slice(), weights, threshold_slice]) {
        Some(scaled) => scan_goal(&scaled[0], &scaled[1], &scaled[2][0], visit),
        None => scan_goal(costs.as_slice(), weights, threshold, visit),
    }
}

fn check_columns(costs: &CostSet, n_agents: usize, limits: &Limits) -> Result<()> {
    let estimate = Odometer::count(n_agents, costs.len()).unwrap_or(u128::MAX);
    if estimate > limits.goal_columns {
        return Err(Error::CapExceeded {
            what: "single-goal column enumeration",
            estimate,
            cap: limits.goal_columns,
        });
    }
    Ok(())
}

/// Counts the equilibria of one single-goal game without materializing them.
///
/// Depends only on the multiset of `weights`, so callers may cache on a
/// sorted copy.
pub fn goal_summary(
    costs: &CostSet,
    weights: &[Rational],
    threshold: &Rational,
    limits: &Limits,
) -> Result<GoalSummary> {
    check_columns(costs, weights.len(), limits)?;
    let mut summary = GoalSummary::default();
    scan_goal_exact(costs, weights, threshold, |_, achieved| {
        summary.equilibria += 1;
        summary.achieving += u64::from(achieved);
    });
    Ok(summary)
}

pub fn single_goal_equilibria(game: &Game, goal: usize) -> Result<Vec<GoalColumnProfile>> {
    single_goal_equilibria_with_limits(game, goal, &Limits::default())
}

/// Columns where no agent can strictly improve its own goal term by changing
/// only its own entry, in lexicographic order.
pub fn single_goal_equilibria_with_limits(
    game: &Game,
    goal: usize,
    limits: &Limits,
) -> Result<Vec<GoalColumnProfile>> {
    game.check_goal(goal)?;
    check_columns(game.costs(), game.n_agents(), limits)?;
    let weights = game.motivation_column(goal);
    let mut out = Vec::new();
    scan_goal_exact(
        game.costs(),
        &weights,
        game.threshold(goal),
        |column, achieved| {
            out.push(GoalColumnProfile {
                column: column.to_vec(),
                achieves_goal: achieved,
            })
        },
    );
    Ok(out)
}

/// The pure equilibria of a game, held factored as one column list per goal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquilibriumSet {
    pub per_goal: Vec<Vec<GoalColumnProfile>>,
}

impl EquilibriumSet {
    pub fn counts(&self) -> Vec<usize> {
        self.per_goal.iter().map(Vec::len).collect()
    }

    /// Product of the per-goal counts (saturating).
    pub fn total_count(&self) -> u128 {
        self.per_goal
            .iter()
            .fold(1u128, |acc, e| acc.saturating_mul(e.len() as u128))
    }

    pub fn is_empty(&self) -> bool {
        self.per_goal.iter().any(Vec::is_empty)
    }

    pub fn summaries(&self) -> Vec<GoalSummary> {
        self.per_goal
            .iter()
            .map(|e| GoalSummary {
                equilibria: e.len() as u64,
                achieving: e.iter().filter(|c| c.achieves_goal).count() as u64,
            })
            .collect()
    }

    /// Per-goal `a_j`; `None` for goals without equilibria.
    pub fn achieved_fractions(&self) -> Vec<Option<Rational>> {
        self.summaries()
            .iter()
            .map(GoalSummary::achieved_fraction)
            .collect()
    }

    /// Materializes the product as full profiles, lexicographically sorted.
    pub fn profiles(&self) -> Vec<ContributionProfile> {
        let n_goals = self.per_goal.len();
        let n_agents = self
            .per_goal
            .iter()
            .find_map(|e| e.first().map(|c| c.column.len()))
            .unwrap_or(0);
        if self.is_empty() {
            return Vec::new();
        }
        let sizes = self.counts();
        let mut out = Vec::new();
        let mut pick = vec![0usize; n_goals];
        loop {
            let rows = (0..n_agents)
                .map(|i| {
                    (0..n_goals)
                        .map(|j| self.per_goal[j][pick[j]].column[i])
                        .collect()
                })
                .collect();
            out.push(ContributionProfile::new(rows));
            let mut pos = n_goals;
            loop {
                if pos == 0 {
                    out.sort();
                    return out;
                }
                pos -= 1;
                pick[pos] += 1;
                if pick[pos] < sizes[pos] {
                    break;
                }
                pick[pos] = 0;
            }
        }
    }
}

pub fn equilibria(game: &Game) -> Result<EquilibriumSet> {
    equilibria_with_limits(game, &Limits::default())
}

pub fn equilibria_with_limits(game: &Game, limits: &Limits) -> Result<EquilibriumSet> {
    let per_goal = (0..game.n_goals())
        .map(|j| single_goal_equilibria_with_limits(game, j, limits))
        .collect::<Result<Vec<_>>>()?;
    Ok(EquilibriumSet { per_goal })
}

/// Nash check by single-entry deviations, one goal at a time.
pub fn is_equilibrium(game: &Game, profile: &ContributionProfile) -> Result<bool> {
    game.check_profile(profile)?;
    let costs = game.costs();
    for goal in 0..game.n_goals() {
        let sum = game.column_sum(profile, goal);
        let g = game.threshold(goal);
        for (agent, row) in profile.rows().iter().enumerate() {
            let w = game.motivation(agent, goal);
            let others = &sum - &costs[row[goal]];
            let payoff = |k: usize| {
                let gain = if &others + &costs[k] >= *g {
                    w.clone()
                } else {
                    Rational::zero()
                };
                gain - &costs[k]
            };
            let current = payoff(row[goal]);
            if (0..costs.len()).any(|k| payoff(k) > current) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Nash check by scanning all `K^M` replacement rows of every agent and
/// comparing total utilities.
pub fn is_equilibrium_full_scan(game: &Game, profile: &ContributionProfile) -> Result<bool> {
    game.check_profile(profile)?;
    let sums: Vec<Rational> = (0..game.n_goals())
        .map(|j| game.column_sum(profile, j))
        .collect();
    Ok(rows_are_best_responses(game, profile, &sums))
}

fn row_utility(game: &Game, agent: usize, row: &[usize], others: &[Rational]) -> Rational {
    let costs = game.costs();
    row.iter()
        .enumerate()
        .map(|(j, &k)| {
            let achieved = &others[j] + &costs[k] >= *game.threshold(j);
            let gain = if achieved {
                game.motivation(agent, j).clone()
            } else {
                Rational::zero()
            };
            gain - &costs[k]
        })
        .sum()
}

fn rows_are_best_responses(game: &Game, profile: &ContributionProfile, sums: &[Rational]) -> bool {
    let costs = game.costs();
    profile.rows().iter().enumerate().all(|(agent, row)| {
        let others: Vec<Rational> = row.iter().zip(sums).map(|(&k, s)| s - &costs[k]).collect();
        let current = row_utility(game, agent, row, &others);
        Odometer::new(game.n_goals(), costs.len())
            .all(|alt| row_utility(game, agent, &alt, &others) <= current)
    })
}

pub fn brute_force_equilibria(game: &Game) -> Result<Vec<ContributionProfile>> {
    brute_force_equilibria_with_limits(game, &Limits::default())
}

/// Exhaustive scan of all `K^(M N)` profiles with whole-row deviations, in
/// lexicographic (row-major) order.
pub fn brute_force_equilibria_with_limits(
    game: &Game,
    limits: &Limits,
) -> Result<Vec<ContributionProfile>> {
    let (n, m, k) = (game.n_agents(), game.n_goals(), game.costs().len());
    let estimate = Odometer::count(n * m, k).unwrap_or(u128::MAX);
    if estimate > limits.brute_force_profiles {
        return Err(Error::CapExceeded {
            what: "brute-force profile enumeration",
            estimate,
            cap: limits.brute_force_profiles,
        });
    }
    let mut out = Vec::new();
    for flat in Odometer::new(n * m, k) {
        let profile = ContributionProfile::new(flat.chunks(m).map(<[usize]>::to_vec).collect());
        let sums: Vec<Rational> = (0..m).map(|j| game.column_sum(&profile, j)).collect();
        if rows_are_best_responses(game, &profile, &sums) {
            out.push(profile);
        }
    }
    Ok(out)
}

/// Order in which dominated strategies are removed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum EliminationOrder {
    /// Each round removes every currently dominated strategy of every agent.
    #[default]
    Simultaneous,
    /// Each round removes a single dominated strategy, scanning agents and
    /// strategies from the back.
    OneAtATime,
}

/// Strategies (rows of `M` choice indices) left to each agent after iterated
/// strict-dominance elimination.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurvivorSets {
    pub per_agent: Vec<Vec<Vec<usize>>>,
    pub rounds: usize,
}

impl SurvivorSets {
    pub fn contains(&self, agent: usize, strategy: &[usize]) -> bool {
        self.per_agent[agent].iter().any(|s| s == strategy)
    }
}

pub fn iesds(game: &Game) -> Result<SurvivorSets> {
    iesds_with(game, &Limits::default(), EliminationOrder::default())
}

pub fn iesds_with(game: &Game, limits: &Limits, order: EliminationOrder) -> Result<SurvivorSets> {
    let (n, m, k) = (game.n_agents(), game.n_goals(), game.costs().len());
    let per_agent = Odometer::count(m, k).unwrap_or(u128::MAX);
    let pairs = per_agent
        .saturating_mul(per_agent)
        .saturating_mul(n as u128);
    if pairs > limits.iesds_pairs {
        return Err(Error::CapExceeded {
            what: "dominance elimination",
            estimate: pairs,
            cap: limits.iesds_pairs,
        });
    }

    let all: Vec<Vec<usize>> = Odometer::new(m, k).collect();
    let mut survivors = vec![all; n];
    let mut rounds = 0;
    loop {
        let mut removed_any = false;
        let mut removals: Vec<(usize, usize)> = Vec::new();
        let agents: Vec<usize> = match order {
            EliminationOrder::Simultaneous => (0..n).collect(),
            EliminationOrder::OneAtATime => (0..n).rev().collect(),
        };
        'agents: for agent in agents {
            let dominated = dominated_strategies(game, &survivors, agent);
            match order {
                EliminationOrder::Simultaneous => {
                    removals.extend(dominated.into_iter().map(|s| (agent, s)));
                }
                EliminationOrder::OneAtATime => {
                    if let Some(&s) = dominated.last() {
                        removals.push((agent, s));
                        break 'agents;
                    }
                }
            }
        }
        // Remove from the back so earlier indices stay valid.
        removals.sort_unstable_by(|a, b| b.cmp(a));
        for (agent, s) in removals {
            survivors[agent].remove(s);
            removed_any = true;
        }
        if !removed_any {
            return Ok(SurvivorSets {
                per_agent: survivors,
                rounds,
            });
        }
        rounds += 1;
    }
}

/// Every vector of per-goal contribution totals the other agents can produce
/// from their surviving strategies.
fn opponent_totals(game: &Game, survivors: &[Vec<Vec<usize>>], agent: usize) -> Vec<Vec<Rational>> {
    let costs = game.costs();
    let mut totals: BTreeSet<Vec<Rational>> = BTreeSet::new();
    totals.insert(vec![Rational::zero(); game.n_goals()]);
    for (other, strategies) in survivors.iter().enumerate() {
        if other == agent {
            continue;
        }
        let mut next = BTreeSet::new();
        for base in &totals {
            for s in strategies {
                next.insert(
                    base.iter()
                        .zip(s)
                        .map(|(t, &k)| t + &costs[k])
                        .collect::<Vec<_>>(),
                );
            }
        }
        totals = next;
    }
    totals.into_iter().collect()
}

/// Indices (ascending) into `survivors[agent]` of strategies strictly
/// dominated by some other surviving strategy.
fn dominated_strategies(game: &Game, survivors: &[Vec<Vec<usize>>], agent: usize) -> Vec<usize> {
    let totals = opponent_totals(game, survivors, agent);
    let own = &survivors[agent];
    let payoffs: Vec<Vec<Rational>> = own
        .iter()
        .map(|s| {
            totals
                .iter()
                .map(|t| row_utility(game, agent, s, t))
                .collect()
        })
        .collect();
    (0..own.len())
        .filter(|&s| {
            (0..own.len()).any(|d| {
                d != s
                    && payoffs[d]
                        .iter()
                        .zip(&payoffs[s])
                        .all(|(better, worse)| better > worse)
            })
        })
        .collect()
}

/// Outcome of checking the "importance of being different" theorem on one game.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TheoremReport {
    /// Extreme, even individual purpose game with `c_1 = 0` and `c_K = g`.
    pub applicable: bool,
    pub unique_equilibrium: bool,
    /// Every equilibrium has `d_ii = g_i` and `d_ij = 0` off the diagonal.
    pub equilibrium_is_diagonal: bool,
    /// Every equilibrium achieves every goal.
    pub all_goals_achieved: bool,
    pub equilibrium_count: u128,
    pub equilibria: Vec<ContributionProfile>,
}

impl TheoremReport {
    pub fn holds(&self) -> bool {
        !self.applicable
            || (self.unique_equilibrium && self.equilibrium_is_diagonal && self.all_goals_achieved)
    }
}

pub fn verify_importance_of_being_different(game: &Game) -> Result<TheoremReport> {
    let class = game.classify();
    let costs = game.costs();
    let applicable = class.is_extreme
        && class.is_even
        && costs.lowest().is_zero()
        && class.universal_threshold.as_ref() == Some(costs.highest());

    let set = equilibria(game)?;
    let count = set.total_count();
    // Enumerate the product only when it is small; a diagonal check on a
    // huge set is meaningless anyway.
    let profiles = if count <= 10_000 {
        set.profiles()
    } else {
        Vec::new()
    };
    let square = game.n_agents() == game.n_goals();
    let is_diagonal = |p: &ContributionProfile| {
        square
            && p.rows().iter().enumerate().all(|(i, row)| {
                row.iter().enumerate().all(|(j, &k)| {
                    let v = &costs[k];
                    if i == j {
                        v == game.threshold(j)
                    } else {
                        v.is_zero()
                    }
                })
            })
    };
    let achieves_all = set
        .per_goal
        .iter()
        .all(|e| !e.is_empty() && e.iter().all(|c| c.achieves_goal));
    Ok(TheoremReport {
        applicable,
        unique_equilibrium: count == 1,
        equilibrium_is_diagonal: !profiles.is_empty() && profiles.iter().all(is_diagonal),
        all_goals_achieved: achieves_all,
        equilibrium_count: count,
        equilibria: profiles,
    })
}

/// A random extreme even individual purpose game with `N = M = n_agents`:
/// `g` uniform in {1, 2, 3}, costs {0, g/2, g}, `w_ii = g + 1 + u/8` with `u`
/// uniform in 0..=8, and `w_ij` uniform in {0, s/4, s/2} where `s = g/2`.
pub fn random_applicable_game<R: Rng + ?Sized>(n_agents: usize, rng: &mut R) -> Result<Game> {
    if n_agents < 1 {
        return Err(Error::InvalidGame("need at least one agent".into()));
    }
    let g = Rational::from_integer(rng.random_range(1..=3));
    let half = &g / Rational::from_integer(2);
    let costs = CostSet::new(vec![Rational::zero(), half.clone(), g.clone()])?;
    let step = costs.first_step();
    let off_diagonal = [
        Rational::zero(),
        &step / Rational::from_integer(4),
        &step / Rational::from_integer(2),
    ];
    let motivations = (0..n_agents)
        .map(|i| {
            (0..n_agents)
                .map(|j| {
                    if i == j {
                        &g + Rational::one() + Rational::frac(rng.random_range(0..=8), 8)
                    } else {
                        off_diagonal[rng.random_range(0..off_diagonal.len())].clone()
                    }
                })
                .collect()
        })
        .collect();
    Game::new(costs, vec![g; n_agents], motivations)
}
