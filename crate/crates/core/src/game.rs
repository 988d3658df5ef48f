//! Game representation, utility evaluation and classification.
//!
//! Agents, goals and cost choices are addressed by zero-based indices
//! throughout the API.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// The ordered set of contribution levels an agent may pay toward each goal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CostSet(Vec<Rational>);

impl CostSet {
    /// Requires at least two levels, a non-negative lowest level, and strictly
    /// increasing order.
    pub fn new(choices: Vec<Rational>) -> Result<Self> {
        if choices.len() < 2 {
            return Err(Error::InvalidGame(format!(
                "cost set needs at least 2 choices, got {}",
                choices.len()
            )));
        }
        if choices[0].is_negative() {
            return Err(Error::InvalidGame(format!(
                "lowest cost {} is negative",
                choices[0]
            )));
        }
        if let Some(w) = choices.windows(2).find(|w| w[0] >= w[1]) {
            return Err(Error::InvalidGame(format!(
                "cost set not strictly increasing at {} >= {}",
                w[0], w[1]
            )));
        }
        Ok(CostSet(choices))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, index: usize) -> Option<&Rational> {
        self.0.get(index)
    }

    pub fn as_slice(&self) -> &[Rational] {
        &self.0
    }

    pub fn lowest(&self) -> &Rational {
        &self.0[0]
    }

    pub fn highest(&self) -> &Rational {
        &self.0[self.0.len() - 1]
    }

    /// `c_2 - c_1`, the smallest step up from the cheapest action.
    pub fn first_step(&self) -> Rational {
        &self.0[1] - &self.0[0]
    }

    pub fn index_of(&self, value: &Rational) -> Option<usize> {
        self.0.binary_search(value).ok()
    }
}

impl std::ops::Index<usize> for CostSet {
    type Output = Rational;
    fn index(&self, index: usize) -> &Rational {
        &self.0[index]
    }
}

/// An `N`-agent, `M`-goal, `K`-choice achievement game.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Game {
    n_agents: usize,
    n_goals: usize,
    costs: CostSet,
    thresholds: Vec<Rational>,
    motivations: Vec<Vec<Rational>>,
}

impl Game {
    /// Builds a base game. Thresholds must be positive here; variants built
    /// with [`Game::with_threshold`] may relax that.
    pub fn new(
        costs: CostSet,
        thresholds: Vec<Rational>,
        motivations: Vec<Vec<Rational>>,
    ) -> Result<Self> {
        let game = Self::new_unchecked_thresholds(costs, thresholds, motivations)?;
        if let Some((j, g)) = game
            .thresholds
            .iter()
            .enumerate()
            .find(|(_, g)| !g.is_positive())
        {
            return Err(Error::InvalidGame(format!(
                "threshold of goal {j} must be positive, got {g}"
            )));
        }
        Ok(game)
    }

    fn new_unchecked_thresholds(
        costs: CostSet,
        thresholds: Vec<Rational>,
        motivations: Vec<Vec<Rational>>,
    ) -> Result<Self> {
        let n_agents = motivations.len();
        let n_goals = thresholds.len();
        if n_agents == 0 {
            return Err(Error::InvalidGame("at least one agent is required".into()));
        }
        if n_goals == 0 {
            return Err(Error::InvalidGame("at least one goal is required".into()));
        }
        if let Some((i, row)) = motivations
            .iter()
            .enumerate()
            .find(|(_, row)| row.len() != n_goals)
        {
            return Err(Error::ShapeMismatch(format!(
                "motivation row {i} has {} entries, expected {n_goals}",
                row.len()
            )));
        }
        Ok(Game {
            n_agents,
            n_goals,
            costs,
            thresholds,
            motivations,
        })
    }

    pub fn n_agents(&self) -> usize {
        self.n_agents
    }

    pub fn n_goals(&self) -> usize {
        self.n_goals
    }

    pub fn costs(&self) -> &CostSet {
        &self.costs
    }

    pub fn thresholds(&self) -> &[Rational] {
        &self.thresholds
    }

    pub fn threshold(&self, goal: usize) -> &Rational {
        &self.thresholds[goal]
    }

    pub fn motivations(&self) -> &[Vec<Rational>] {
        &self.motivations
    }

    pub fn motivation(&self, agent: usize, goal: usize) -> &Rational {
        &self.motivations[agent][goal]
    }

    /// Motivations of every agent toward one goal.
    pub fn motivation_column(&self, goal: usize) -> Vec<Rational> {
        self.motivations
            .iter()
            .map(|row| row[goal].clone())
            .collect()
    }

    /// Copy of the game with goal `goal`'s threshold replaced. The new
    /// threshold may be zero or negative, in which case the goal is always
    /// achieved.
    pub fn with_threshold(&self, goal: usize, threshold: Rational) -> Result<Game> {
        self.check_goal(goal)?;
        let mut game = self.clone();
        game.thresholds[goal] = threshold;
        Ok(game)
    }

    /// Copy of the game with agent `agent`'s motivation row replaced.
    pub fn with_motivation_row(&self, agent: usize, row: Vec<Rational>) -> Result<Game> {
        self.check_agent(agent)?;
        if row.len() != self.n_goals {
            return Err(Error::ShapeMismatch(format!(
                "replacement row has {} entries, expected {}",
                row.len(),
                self.n_goals
            )));
        }
        let mut game = self.clone();
        game.motivations[agent] = row;
        Ok(game)
    }

    pub(crate) fn check_goal(&self, goal: usize) -> Result<()> {
        if goal >= self.n_goals {
            return Err(Error::index("goal", goal, self.n_goals));
        }
        Ok(())
    }

    pub(crate) fn check_agent(&self, agent: usize) -> Result<()> {
        if agent >= self.n_agents {
            return Err(Error::index("agent", agent, self.n_agents));
        }
        Ok(())
    }

    pub(crate) fn check_profile(&self, profile: &ContributionProfile) -> Result<()> {
        let rows = profile.rows();
        if rows.len() != self.n_agents || rows.iter().any(|r| r.len() != self.n_goals) {
            return Err(Error::ShapeMismatch(format!(
                "profile is not {}x{}",
                self.n_agents, self.n_goals
            )));
        }
        if let Some(&k) = rows.iter().flatten().find(|&&k| k >= self.costs.len()) {
            return Err(Error::index("choice", k, self.costs.len()));
        }
        Ok(())
    }

    /// Total contribution toward `goal`.
    pub fn column_sum(&self, profile: &ContributionProfile, goal: usize) -> Rational {
        profile
            .rows()
            .iter()
            .map(|row| &self.costs[row[goal]])
            .sum()
    }

    /// Goal `goal` is achieved iff the contributions toward it reach its
    /// threshold; meeting it exactly counts.
    pub fn goal_achieved(&self, profile: &ContributionProfile, goal: usize) -> Result<bool> {
        self.check_goal(goal)?;
        self.check_profile(profile)?;
        Ok(self.column_sum(profile, goal) >= self.thresholds[goal])
    }

    /// `u_i = -sum_j d_ij + sum_j w_ij [goal j achieved]`.
    pub fn utility(&self, profile: &ContributionProfile, agent: usize) -> Result<Rational> {
        self.check_agent(agent)?;
        self.check_profile(profile)?;
        let row = &profile.rows()[agent];
        let mut total = Rational::zero();
        for (goal, &choice) in row.iter().enumerate() {
            total = total - &self.costs[choice];
            if self.column_sum(profile, goal) >= self.thresholds[goal] {
                total = total + &self.motivations[agent][goal];
            }
        }
        Ok(total)
    }

    pub fn classify(&self) -> Classification {
        let n = self.n_agents;
        let individual_purpose = n == self.n_goals
            && (0..n).all(|i| {
                (0..n).all(|j| {
                    let w = &self.motivations[i][j];
                    let g = &self.thresholds[j];
                    if i == j {
                        w > g
                    } else {
                        w < g
                    }
                })
            });
        let even = individual_purpose && self.thresholds.windows(2).all(|w| w[0] == w[1]);
        let step = self.costs.first_step();
        let extreme = individual_purpose
            && (0..n).all(|i| (0..n).all(|j| i == j || self.motivations[i][j] < step));
        Classification {
            is_individual_purpose: individual_purpose,
            is_even: even,
            is_extreme: extreme,
            universal_threshold: even.then(|| self.thresholds[0].clone()),
        }
    }

    /// Parses a game document (JSON).
    pub fn from_json_str(text: &str) -> Result<Game> {
        let doc: GameDocument = serde_json::from_str(text)?;
        doc.into_game()
    }

    pub fn to_document(&self) -> GameDocument {
        GameDocument {
            agents: self.n_agents,
            goals: self.n_goals,
            costs: self.costs.as_slice().to_vec(),
            thresholds: self.thresholds.clone(),
            motivations: self.motivations.clone(),
        }
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("game document serializes")
    }
}

/// Serialized form of a [`Game`]. Rationals are strings such as `"1/3"` or
/// `"0.25"`; bare integers are accepted on input.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GameDocument {
    pub agents: usize,
    pub goals: usize,
    pub costs: Vec<Rational>,
    pub thresholds: Vec<Rational>,
    pub motivations: Vec<Vec<Rational>>,
}

impl GameDocument {
    pub fn into_game(self) -> Result<Game> {
        if self.thresholds.len() != self.goals {
            return Err(Error::ShapeMismatch(format!(
                "{} thresholds for {} goals",
                self.thresholds.len(),
                self.goals
            )));
        }
        if self.motivations.len() != self.agents {
            return Err(Error::ShapeMismatch(format!(
                "{} motivation rows for {} agents",
                self.motivations.len(),
                self.agents
            )));
        }
        Game::new(CostSet::new(self.costs)?, self.thresholds, self.motivations)
    }
}

/// The `N x M` matrix `D` of chosen contributions, stored as indices into
/// the game's [`CostSet`].
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ContributionProfile(Vec<Vec<usize>>);

impl ContributionProfile {
    pub fn new(rows: Vec<Vec<usize>>) -> Self {
        ContributionProfile(rows)
    }

    pub fn zeros(n_agents: usize, n_goals: usize) -> Self {
        ContributionProfile(vec![vec![0; n_goals]; n_agents])
    }

    /// Maps contribution values onto cost-set indices.
    pub fn from_values(game: &Game, values: &[Vec<Rational>]) -> Result<Self> {
        let rows = values
            .iter()
            .map(|row| {
                row.iter()
                    .map(|v| {
                        game.costs().index_of(v).ok_or_else(|| {
                            Error::InvalidGame(format!("contribution {v} is not in the cost set"))
                        })
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let profile = ContributionProfile(rows);
        game.check_profile(&profile)?;
        Ok(profile)
    }

    /// Parses `{"contributions": [[...], ...]}` against `game`.
    pub fn from_json_str(game: &Game, text: &str) -> Result<Self> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Doc {
            contributions: Vec<Vec<Rational>>,
        }
        let doc: Doc = serde_json::from_str(text)?;
        Self::from_values(game, &doc.contributions)
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.0
    }

    pub fn choice(&self, agent: usize, goal: usize) -> usize {
        self.0[agent][goal]
    }

    pub fn values(&self, game: &Game) -> Vec<Vec<Rational>> {
        self.0
            .iter()
            .map(|row| row.iter().map(|&k| game.costs()[k].clone()).collect())
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub is_individual_purpose: bool,
    pub is_even: bool,
    pub is_extreme: bool,
    /// Present iff `is_even`.
    pub universal_threshold: Option<Rational>,
}

/// One agent type: an `M`-digit base-3 code where digit 0, 1, 2 selects a
/// motivation of lowest, middle or highest cost plus the excess `delta`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TypeCode(Vec<u8>);

impl TypeCode {
    pub fn new(digits: Vec<u8>) -> Result<Self> {
        if digits.is_empty() {
            return Err(Error::InvalidGroup("empty type code".into()));
        }
        if let Some(d) = digits.iter().find(|&&d| d > 2) {
            return Err(Error::InvalidGroup(format!(
                "type digit {d} is not 0, 1 or 2"
            )));
        }
        Ok(TypeCode(digits))
    }

    /// Parses `"201"`-style codes or, when `n_goals == 2`, the aliases
    /// `A` (`20`), `O` (`11`) and `B` (`02`).
    pub fn parse(text: &str, n_goals: usize) -> Result<Self> {
        if n_goals == 2 {
            match text {
                "A" => return Ok(TypeCode(vec![2, 0])),
                "O" => return Ok(TypeCode(vec![1, 1])),
                "B" => return Ok(TypeCode(vec![0, 2])),
                _ => {}
            }
        }
        let digits = text
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                '2' => Ok(2),
                _ => Err(Error::InvalidGroup(format!("bad type code {text:?}"))),
            })
            .collect::<Result<Vec<u8>>>()?;
        if digits.len() != n_goals {
            return Err(Error::InvalidGroup(format!(
                "type code {text:?} has length {}, expected {n_goals}",
                digits.len()
            )));
        }
        TypeCode::new(digits)
    }

    pub fn digits(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn alias(&self) -> Option<char> {
        match self.0.as_slice() {
            [2, 0] => Some('A'),
            [1, 1] => Some('O'),
            [0, 2] => Some('B'),
            _ => None,
        }
    }

    pub fn code(&self) -> String {
        self.0.iter().map(|d| char::from(b'0' + d)).collect()
    }

    /// Canonical type order: descending code, so `A < O < B` for two goals
    /// and `200 < 020 < 002` for three.
    pub fn canonical_cmp(&self, other: &TypeCode) -> Ordering {
        other.0.cmp(&self.0)
    }

    /// All `3^M` codes in canonical order.
    pub fn full_grid(n_goals: usize) -> Vec<TypeCode> {
        let mut codes: Vec<TypeCode> = (0..3usize.pow(n_goals as u32))
            .map(|mut x| {
                let mut digits = vec![0u8; n_goals];
                for d in digits.iter_mut().rev() {
                    *d = (x % 3) as u8;
                    x /= 3;
                }
                TypeCode(digits)
            })
            .collect();
        codes.sort_by(|a, b| a.canonical_cmp(b));
        codes
    }

    /// The `A`, `O`, `B` universe for two goals.
    pub fn abo() -> Vec<TypeCode> {
        vec![
            TypeCode(vec![2, 0]),
            TypeCode(vec![1, 1]),
            TypeCode(vec![0, 2]),
        ]
    }
}

impl fmt::Display for TypeCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.alias() {
            Some(a) => write!(f, "{a}"),
            None => f.write_str(&self.code()),
        }
    }
}

/// A group of typed agents sharing one excess motivation `delta`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupSpec {
    agent_types: Vec<TypeCode>,
    delta: Rational,
}

impl GroupSpec {
    /// Agent types are stored in canonical order.
    pub fn new(mut agent_types: Vec<TypeCode>, delta: Rational) -> Result<Self> {
        let Some(first) = agent_types.first() else {
            return Err(Error::InvalidGroup(
                "a group needs at least one agent".into(),
            ));
        };
        let m = first.len();
        if agent_types.iter().any(|t| t.len() != m) {
            return Err(Error::InvalidGroup("type codes differ in length".into()));
        }
        if delta.is_negative() {
            return Err(Error::InvalidGroup(format!("delta {delta} is negative")));
        }
        agent_types.sort_by(|a, b| a.canonical_cmp(b));
        Ok(GroupSpec { agent_types, delta })
    }

    /// Parses a label: `"AOOB"` (two goals), single digits (one goal, e.g.
    /// `"22"`), or codes separated by `-` or `,` (`"200-020-002"`).
    pub fn parse(label: &str, n_goals: usize, delta: Rational) -> Result<Self> {
        let label = label.trim();
        let parts: Vec<&str> = if label.contains(['-', ',']) {
            label.split(['-', ',']).map(str::trim).collect()
        } else if (n_goals == 2 && label.chars().all(|c| matches!(c, 'A' | 'O' | 'B')))
            || n_goals == 1
        {
            label
                .char_indices()
                .map(|(i, c)| &label[i..i + c.len_utf8()])
                .collect()
        } else {
            vec![label]
        };
        let types = parts
            .into_iter()
            .map(|p| TypeCode::parse(p, n_goals))
            .collect::<Result<Vec<_>>>()?;
        GroupSpec::new(types, delta)
    }

    pub fn agent_types(&self) -> &[TypeCode] {
        &self.agent_types
    }

    pub fn delta(&self) -> &Rational {
        &self.delta
    }

    pub fn n_agents(&self) -> usize {
        self.agent_types.len()
    }

    pub fn n_goals(&self) -> usize {
        self.agent_types[0].len()
    }

    /// `AOOB`-style when every agent has an alias, otherwise codes joined by `-`.
    pub fn label(&self) -> String {
        let aliases: Option<String> = self.agent_types.iter().map(TypeCode::alias).collect();
        aliases.unwrap_or_else(|| {
            self.agent_types
                .iter()
                .map(TypeCode::code)
                .collect::<Vec<_>>()
                .join("-")
        })
    }
}

/// Cost set `{0, 1/M, 1}` (collapsing to `{0, 1}` when `M = 1`).
pub fn standard_costs(n_goals: usize) -> CostSet {
    let mut choices = vec![
        Rational::zero(),
        Rational::frac(1, n_goals as i64),
        Rational::one(),
    ];
    choices.dedup();
    CostSet::new(choices).expect("standard cost set is valid")
}

/// The computational setup: costs `{0, 1/M, 1}`, every threshold `N/M`, and
/// motivations derived from the group's type codes.
pub fn standard_game(n_agents: usize, n_goals: usize, group: &GroupSpec) -> Result<Game> {
    if n_agents < 1 || n_goals < 1 {
        return Err(Error::InvalidGame(
            "need at least one agent and one goal".into(),
        ));
    }
    if group.n_agents() != n_agents {
        return Err(Error::InvalidGroup(format!(
            "group has {} agents, expected {n_agents}",
            group.n_agents()
        )));
    }
    if let Some(t) = group.agent_types().iter().find(|t| t.len() != n_goals) {
        return Err(Error::InvalidGroup(format!(
            "type code {} has length {}, expected {n_goals}",
            t.code(),
            t.len()
        )));
    }
    let costs = standard_costs(n_goals);
    let level = |digit: u8| -> Rational {
        let base = match digit {
            0 => costs.lowest().clone(),
            1 => Rational::frac(1, n_goals as i64),
            _ => costs.highest().clone(),
        };
        base + group.delta()
    };
    let motivations = group
        .agent_types()
        .iter()
        .map(|t| t.digits().iter().map(|&d| level(d)).collect())
        .collect();
    let thresholds = vec![Rational::frac(n_agents as i64, n_goals as i64); n_goals];
    Game::new(costs, thresholds, motivations)
}
