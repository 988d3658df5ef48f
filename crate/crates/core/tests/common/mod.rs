#![allow(dead_code)]

use achievement::cli;
use achievement::{CostSet, Game, GroupSpec, Rational};
use rand::seq::IndexedRandom;
use rand::Rng;

pub fn q(s: &str) -> Rational {
    s.parse().unwrap()
}

pub fn std_game(label: &str, n_goals: usize) -> Game {
    let group = GroupSpec::parse(label, n_goals, q("1/4")).unwrap();
    achievement::standard_game(group.n_agents(), n_goals, &group).unwrap()
}

/// Runs the CLI in-process; returns (exit code, stdout, stderr).
pub fn run_cli(args: &[&str]) -> (u8, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut argv = vec!["achievement"];
    argv.extend_from_slice(args);
    let code = cli::run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

const STEPS: [&str; 4] = ["1/4", "1/3", "1/2", "1"];
const WEIGHTS: [&str; 11] = [
    "-1/4", "0", "1/6", "1/4", "1/3", "1/2", "3/4", "1", "5/4", "3/2", "2",
];

/// Small random game: N, M <= 3 and K in {2, 3}, with thresholds often
/// landing exactly on an achievable contribution total.
pub fn random_game<R: Rng>(rng: &mut R, max_agents: usize, max_goals: usize) -> Game {
    let n = rng.random_range(1..=max_agents);
    let m = rng.random_range(1..=max_goals);
    let k = rng.random_range(2..=3);
    let mut costs = vec![if rng.random_bool(0.75) {
        q("0")
    } else {
        q("1/4")
    }];
    for _ in 1..k {
        let step = q(STEPS.choose(rng).unwrap());
        let next = costs.last().unwrap() + &step;
        costs.push(next);
    }
    let thresholds = (0..m)
        .map(|_| {
            if rng.random_bool(0.5) {
                let total: Rational = (0..n).map(|_| costs.choose(rng).unwrap().clone()).sum();
                if total.is_positive() {
                    return total;
                }
            }
            Rational::frac(rng.random_range(1..=18), 6)
        })
        .collect();
    let motivations = (0..n)
        .map(|_| (0..m).map(|_| q(WEIGHTS.choose(rng).unwrap())).collect())
        .collect();
    Game::new(CostSet::new(costs).unwrap(), thresholds, motivations).unwrap()
}
