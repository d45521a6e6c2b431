//! The voting market: electorate, distances, within-coalition competition
//! and front-runner selection.
//!
//! Politicians sort into coalitions and compete for the support of K voter
//! groups placed on the 1-5 left-right axis. Distance between politician
//! `i` and group `k` is `(mu_i - i_k) / w_k`: the division penalizes
//! focusing on small groups. Two vote-assignment readings are provided (see
//! [`VoteRule`]); both end in the same place: each coalition elects the
//! member with the largest vote weight as its front-runner, whose position
//! is the reference point for the signaling stage.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

/// Grid size used to discretize continuous electorates. Fine enough that
/// modularity and target-ideology results are grid-stable to 1e-3.
pub const CONTINUOUS_GRID_POINTS: usize = 1001;

#[derive(Debug, Error)]
pub enum SpatialError {
    #[error("voter group has zero weight")]
    ZeroWeight,
    #[error("no politicians to compete (empty coalition set)")]
    EmptyCoalition,
    #[error("invalid electorate shares: {0}")]
    InvalidShare(String),
    #[error("politician {id}: {reason}")]
    InvalidPolitician { id: String, reason: String },
}

/// One voter group: a position on the 1-5 axis and its population weight.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VoterGroup {
    pub ideology: f64,
    pub weight: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ElectorateKind {
    EmpiricalDiscrete,
    NormalDiscrete,
    NormalContinuous,
}

/// The demand side of the market: voter groups with strictly increasing
/// ideology, weights normalized to sum to one.
#[derive(Debug, Clone, PartialEq)]
pub struct Electorate {
    groups: Vec<VoterGroup>,
    pub kind: ElectorateKind,
}

/// Parameters from which an [`Electorate`] is built.
///
/// `EmpiricalDiscrete` takes the five observed bin shares (ideology 1..5)
/// plus the share of respondents without a stated ideology; null mass is
/// spread uniformly over the five bins before normalizing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ElectorateSpec {
    EmpiricalDiscrete { shares: [f64; 5], null_share: f64 },
    NormalDiscrete { mean: f64, std: f64 },
    NormalContinuous { mean: f64, std: f64 },
}

impl Electorate {
    /// Validates and normalizes raw groups: positive weights, strictly
    /// increasing ideology, weights summing to one.
    pub fn new(groups: Vec<VoterGroup>, kind: ElectorateKind) -> Result<Self, SpatialError> {
        if groups.is_empty() {
            return Err(SpatialError::InvalidShare("no voter groups".into()));
        }
        for pair in groups.windows(2) {
            if pair[1].ideology <= pair[0].ideology {
                return Err(SpatialError::InvalidShare(
                    "group ideologies must be strictly increasing".into(),
                ));
            }
        }
        if groups.iter().any(|g| g.weight <= 0.0 || !g.weight.is_finite()) {
            return Err(SpatialError::ZeroWeight);
        }
        let total: f64 = groups.iter().map(|g| g.weight).sum();
        let groups = groups
            .into_iter()
            .map(|g| VoterGroup {
                ideology: g.ideology,
                weight: g.weight / total,
            })
            .collect();
        Ok(Self { groups, kind })
    }

    pub fn groups(&self) -> &[VoterGroup] {
        &self.groups
    }

    pub fn mean(&self) -> f64 {
        self.groups.iter().map(|g| g.ideology * g.weight).sum()
    }

    pub fn std_dev(&self) -> f64 {
        let mean = self.mean();
        self.groups
            .iter()
            .map(|g| g.weight * (g.ideology - mean).powi(2))
            .sum::<f64>()
            .sqrt()
    }
}

fn normal_pdf(x: f64, mean: f64, std: f64) -> f64 {
    let z = (x - mean) / std;
    (-0.5 * z * z).exp()
}

/// Places normal-ish mass on the given support points and renormalizes.
/// A degenerate std (zero or so small everything underflows) collapses all
/// mass onto the point nearest the mean.
fn normal_mass_on(points: &[f64], mean: f64, std: f64, kind: ElectorateKind) -> Electorate {
    let weights: Vec<f64> = if std > 0.0 {
        points.iter().map(|&x| normal_pdf(x, mean, std)).collect()
    } else {
        vec![0.0; points.len()]
    };
    let total: f64 = weights.iter().sum();
    let groups: Vec<VoterGroup> = if total > 0.0 {
        points
            .iter()
            .zip(&weights)
            .filter(|(_, &w)| w > 0.0)
            .map(|(&x, &w)| VoterGroup {
                ideology: x,
                weight: w,
            })
            .collect()
    } else {
        let nearest = points
            .iter()
            .cloned()
            .min_by(|a, b| {
                (a - mean)
                    .abs()
                    .partial_cmp(&(b - mean).abs())
                    .unwrap()
            })
            .unwrap();
        vec![VoterGroup {
            ideology: nearest,
            weight: 1.0,
        }]
    };
    Electorate::new(groups, kind).expect("normal mass construction is valid")
}

/// Builds an electorate from its spec. See [`ElectorateSpec`].
pub fn make_electorate(spec: &ElectorateSpec) -> Result<Electorate, SpatialError> {
    match spec {
        ElectorateSpec::EmpiricalDiscrete { shares, null_share } => {
            let all = shares.iter().chain(std::iter::once(null_share));
            if all.clone().any(|&s| !(0.0..=1.0).contains(&s) || !s.is_finite()) {
                return Err(SpatialError::InvalidShare(
                    "every share must lie in [0, 1]".into(),
                ));
            }
            let total: f64 = all.sum();
            if total <= 0.0 {
                return Err(SpatialError::InvalidShare("all shares are zero".into()));
            }
            if total > 1.0 + 1e-9 {
                return Err(SpatialError::InvalidShare(format!(
                    "shares sum to {total}, exceeding 1"
                )));
            }
            let groups = shares
                .iter()
                .enumerate()
                .map(|(b, &s)| VoterGroup {
                    ideology: (b + 1) as f64,
                    weight: s + null_share / 5.0,
                })
                .filter(|g| g.weight > 0.0)
                .collect();
            Electorate::new(groups, ElectorateKind::EmpiricalDiscrete)
        }
        ElectorateSpec::NormalDiscrete { mean, std } => {
            if !mean.is_finite() || !std.is_finite() || *std < 0.0 {
                return Err(SpatialError::InvalidShare(
                    "normal electorate needs finite mean and std >= 0".into(),
                ));
            }
            let points: Vec<f64> = (1..=5).map(f64::from).collect();
            Ok(normal_mass_on(
                &points,
                *mean,
                *std,
                ElectorateKind::NormalDiscrete,
            ))
        }
        ElectorateSpec::NormalContinuous { mean, std } => {
            if !mean.is_finite() || !std.is_finite() || *std < 0.0 {
                return Err(SpatialError::InvalidShare(
                    "normal electorate needs finite mean and std >= 0".into(),
                ));
            }
            let n = CONTINUOUS_GRID_POINTS;
            let points: Vec<f64> = (0..n)
                .map(|i| 1.0 + 4.0 * i as f64 / (n - 1) as f64)
                .collect();
            Ok(normal_mass_on(
                &points,
                *mean,
                *std,
                ElectorateKind::NormalContinuous,
            ))
        }
    }
}

/// The agent of the model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Politician {
    pub id: String,
    /// Ideology location on the 1-5 axis.
    pub mu: f64,
    /// Ideology spread; also the scale of the messages she emits.
    pub sigma: f64,
    pub coalition: u32,
    /// Authenticity: penalty weight on endorsing messages far from `mu`.
    #[serde(default)]
    pub gamma: f64,
}

impl Politician {
    pub fn new(
        id: impl Into<String>,
        mu: f64,
        sigma: f64,
        coalition: u32,
        gamma: f64,
    ) -> Result<Self, SpatialError> {
        let id = id.into();
        if sigma <= 0.0 || !sigma.is_finite() {
            return Err(SpatialError::InvalidPolitician {
                id,
                reason: format!("sigma must be positive, got {sigma}"),
            });
        }
        if gamma < 0.0 || !gamma.is_finite() {
            return Err(SpatialError::InvalidPolitician {
                id,
                reason: format!("gamma must be non-negative, got {gamma}"),
            });
        }
        if !mu.is_finite() {
            return Err(SpatialError::InvalidPolitician {
                id,
                reason: "mu must be finite".into(),
            });
        }
        Ok(Self {
            id,
            mu,
            sigma,
            coalition,
            gamma,
        })
    }
}

/// Signed weighted distance between a politician and a voter group:
/// `(mu_i - i_k) / w_k`. Positive means the politician sits to the left of
/// the group. Competition uses the magnitude.
pub fn distance(politician: &Politician, group: &VoterGroup) -> Result<f64, SpatialError> {
    if group.weight == 0.0 {
        return Err(SpatialError::ZeroWeight);
    }
    Ok((politician.mu - group.ideology) / group.weight)
}

/// How voter weight is credited to coalition members.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VoteRule {
    /// Each politician is credited with the single group minimizing her
    /// weighted distance |mu_i - i_k| / w_k; her vote weight is that
    /// group's weight. Division by w_k steers politicians toward large
    /// groups, so a lumpy electorate pulls front-runners to the lumps.
    #[default]
    NearestGroup,
    /// Classic proximity voting: each group backs the nearest member of
    /// each coalition, and a member's votes are the group weights won.
    /// Under this rule every coalition contest allocates total weight 1.
    GroupProximity,
}

/// Front-runner of one coalition.
#[derive(Debug, Clone, PartialEq)]
pub struct FrontRunner {
    pub politician_id: String,
    pub mu: f64,
}

/// Result of the within-coalition vote competition.
#[derive(Debug, Clone, PartialEq)]
pub struct CompetitionOutcome {
    /// Vote weight won by each politician.
    pub votes: BTreeMap<String, f64>,
    /// Highest-vote member per coalition; ties break to the smallest id.
    pub front_runner: BTreeMap<u32, FrontRunner>,
}

impl CompetitionOutcome {
    /// Front-runner ideology for the coalition of the given politician.
    pub fn front_runner_mu(&self, coalition: u32) -> Option<f64> {
        self.front_runner.get(&coalition).map(|f| f.mu)
    }
}

/// Runs the vote competition. Every coalition must have at least one
/// member; the politician list must be non-empty.
pub fn compete(
    politicians: &[Politician],
    electorate: &Electorate,
    rule: VoteRule,
) -> Result<CompetitionOutcome, SpatialError> {
    if politicians.is_empty() {
        return Err(SpatialError::EmptyCoalition);
    }
    let groups = electorate.groups();
    let mut votes: BTreeMap<String, f64> = politicians
        .iter()
        .map(|p| (p.id.clone(), 0.0))
        .collect();

    match rule {
        VoteRule::NearestGroup => {
            for p in politicians {
                let mut best_k = 0;
                let mut best = f64::INFINITY;
                for (k, g) in groups.iter().enumerate() {
                    let d = distance(p, g)?.abs();
                    if d < best {
                        best = d;
                        best_k = k;
                    }
                }
                *votes.get_mut(&p.id).unwrap() = groups[best_k].weight;
            }
        }
        VoteRule::GroupProximity => {
            let mut coalitions: BTreeMap<u32, Vec<&Politician>> = BTreeMap::new();
            for p in politicians {
                coalitions.entry(p.coalition).or_default().push(p);
            }
            for members in coalitions.values() {
                let mut members: Vec<&&Politician> = members.iter().collect();
                members.sort_by(|a, b| a.id.cmp(&b.id));
                for g in groups {
                    let winner = members
                        .iter()
                        .min_by(|a, b| {
                            let da = (a.mu - g.ideology).abs() / g.weight;
                            let db = (b.mu - g.ideology).abs() / g.weight;
                            da.partial_cmp(&db).unwrap()
                        })
                        .unwrap();
                    *votes.get_mut(&winner.id).unwrap() += g.weight;
                }
            }
        }
    }

    let mut front_runner: BTreeMap<u32, FrontRunner> = BTreeMap::new();
    let mut by_id: Vec<&Politician> = politicians.iter().collect();
    by_id.sort_by(|a, b| a.id.cmp(&b.id));
    for p in by_id {
        let v = votes[&p.id];
        let entry = front_runner.entry(p.coalition);
        match entry {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(FrontRunner {
                    politician_id: p.id.clone(),
                    mu: p.mu,
                });
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                if v > votes[&e.get().politician_id] {
                    e.insert(FrontRunner {
                        politician_id: p.id.clone(),
                        mu: p.mu,
                    });
                }
            }
        }
    }
    Ok(CompetitionOutcome {
        votes,
        front_runner,
    })
}

/// For each politician, the ideology of her coalition's front-runner -- the
/// position she has an incentive to signal toward.
pub fn target_ideology(
    politicians: &[Politician],
    electorate: &Electorate,
    rule: VoteRule,
) -> Result<BTreeMap<String, f64>, SpatialError> {
    let outcome = compete(politicians, electorate, rule)?;
    Ok(politicians
        .iter()
        .map(|p| {
            let mu = outcome
                .front_runner_mu(p.coalition)
                .expect("every coalition has a front-runner");
            (p.id.clone(), mu)
        })
        .collect())
}

/// Assigns coalitions by ideology terciles (or n-tiles): politicians are
/// sorted by (mu, id) and split into `n` contiguous blocks of near-equal
/// size, earlier blocks taking the remainder.
pub fn assign_coalitions(politicians: &mut [Politician], n: u32) -> Result<(), SpatialError> {
    if n == 0 || politicians.is_empty() || (n as usize) > politicians.len() {
        return Err(SpatialError::EmptyCoalition);
    }
    let mut order: Vec<usize> = (0..politicians.len()).collect();
    order.sort_by(|&a, &b| {
        politicians[a]
            .mu
            .partial_cmp(&politicians[b].mu)
            .unwrap()
            .then_with(|| politicians[a].id.cmp(&politicians[b].id))
    });
    let len = politicians.len();
    let base = len / n as usize;
    let extra = len % n as usize;
    let mut cursor = 0;
    for c in 0..n as usize {
        let size = base + usize::from(c < extra);
        for &idx in &order[cursor..cursor + size] {
            politicians[idx].coalition = c as u32;
        }
        cursor += size;
    }
    Ok(())
}
