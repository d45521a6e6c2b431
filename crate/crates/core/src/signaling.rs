//! Message emission, belief updates and the like decision.
//!
//! Politicians emit messages drawn from their own ideology distribution.
//! Observing politician `i` endorse a message at position `delta`, voters
//! update their belief about `i` to a weighted average of prior and signal
//! (weight `omega`). `i` endorses exactly when the electoral gain from the
//! moved belief exceeds the authenticity cost `gamma * |delta - mu_i| /
//! sigma_i` of backing a message far from her own position.
//!
//! A simulation run is fully determined by the politicians, the electorate
//! and a [`SimulationConfig`]; all randomness flows from the config seed
//! through named sub-streams (one per sender, one per authenticity draw),
//! so enlarging the cast never perturbs existing draws.

use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};
use std::io;

use crate::spatial::{compete, CompetitionOutcome, Electorate, Politician, SpatialError, VoteRule};
use crate::stream::substream;

/// A single emitted message: the sender and its position on the axis.
#[derive(Debug, Clone, PartialEq)]
pub struct Message {
    pub sender: String,
    pub delta: f64,
}

/// How authenticity is assigned across politicians.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum GammaMode {
    /// Every politician shares the same authenticity.
    Homogeneous { gamma: f64 },
    /// Authenticity drawn once per politician from a normal truncated at
    /// zero (rejection sampling).
    Heterogeneous { mean: f64, sd: f64 },
}

impl Default for GammaMode {
    fn default() -> Self {
        GammaMode::Heterogeneous { mean: 0.1, sd: 0.1 }
    }
}

/// Parameters of one simulation run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationConfig {
    /// Signal weight in the posterior; 1 weighs prior and signal equally.
    pub omega: f64,
    /// Messages emitted by each politician.
    pub messages_per_politician: u32,
    pub seed: u64,
    pub gamma_mode: GammaMode,
    #[serde(default)]
    pub vote_rule: VoteRule,
}

impl Default for SimulationConfig {
    fn default() -> Self {
        Self {
            omega: 1.0,
            messages_per_politician: 500,
            seed: 42,
            gamma_mode: GammaMode::default(),
            vote_rule: VoteRule::default(),
        }
    }
}

/// Like counts between ordered pairs: `counts[i][j]` is the number of `j`'s
/// messages liked by `i`. Row/column order follows `ids`.
#[derive(Debug, Clone, PartialEq)]
pub struct LikeMatrix {
    pub ids: Vec<String>,
    pub counts: Vec<Vec<u32>>,
}

impl LikeMatrix {
    pub fn n(&self) -> usize {
        self.ids.len()
    }

    pub fn as_f64(&self) -> Vec<Vec<f64>> {
        self.counts
            .iter()
            .map(|row| row.iter().map(|&c| f64::from(c)).collect())
            .collect()
    }

    pub fn total(&self) -> u64 {
        self.counts
            .iter()
            .flat_map(|row| row.iter())
            .map(|&c| u64::from(c))
            .sum()
    }

    /// Share of likes crossing coalition lines; zero when there are no
    /// likes at all. `coalition_of[i]` must align with `ids`.
    pub fn cross_coalition_share(&self, coalition_of: &[u32]) -> f64 {
        let mut cross = 0u64;
        let mut total = 0u64;
        for (i, row) in self.counts.iter().enumerate() {
            for (j, &c) in row.iter().enumerate() {
                total += u64::from(c);
                if coalition_of[i] != coalition_of[j] {
                    cross += u64::from(c);
                }
            }
        }
        if total == 0 {
            0.0
        } else {
            cross as f64 / total as f64
        }
    }

    /// Writes all ordered pairs as `liker_id,sender_id,likes`.
    pub fn write_csv<W: io::Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "liker_id,sender_id,likes")?;
        for (i, liker) in self.ids.iter().enumerate() {
            for (j, sender) in self.ids.iter().enumerate() {
                writeln!(w, "{},{},{}", liker, sender, self.counts[i][j])?;
            }
        }
        Ok(())
    }

    /// Reads a matrix written by [`LikeMatrix::write_csv`] (any row order;
    /// missing pairs default to zero).
    pub fn read_csv<R: io::Read>(r: R) -> Result<Self, String> {
        let mut rdr = csv::Reader::from_reader(r);
        let headers = rdr.headers().map_err(|e| e.to_string())?.clone();
        for want in ["liker_id", "sender_id", "likes"] {
            if !headers.iter().any(|h| h == want) {
                return Err(format!("missing column `{want}`"));
            }
        }
        let ci = headers.iter().position(|h| h == "liker_id").unwrap();
        let cj = headers.iter().position(|h| h == "sender_id").unwrap();
        let cc = headers.iter().position(|h| h == "likes").unwrap();
        let mut triples: Vec<(String, String, u32)> = Vec::new();
        for rec in rdr.records() {
            let rec = rec.map_err(|e| e.to_string())?;
            let likes: u32 = rec
                .get(cc)
                .unwrap_or("")
                .parse()
                .map_err(|_| format!("bad likes value `{}`", rec.get(cc).unwrap_or("")))?;
            triples.push((
                rec.get(ci).unwrap_or("").to_string(),
                rec.get(cj).unwrap_or("").to_string(),
                likes,
            ));
        }
        let mut ids: Vec<String> = triples
            .iter()
            .flat_map(|(i, j, _)| [i.clone(), j.clone()])
            .collect();
        ids.sort();
        ids.dedup();
        let index: std::collections::BTreeMap<&str, usize> = ids
            .iter()
            .enumerate()
            .map(|(k, id)| (id.as_str(), k))
            .collect();
        let mut counts = vec![vec![0u32; ids.len()]; ids.len()];
        let mut seen = vec![vec![false; ids.len()]; ids.len()];
        for (i, j, c) in &triples {
            let (a, b) = (index[i.as_str()], index[j.as_str()]);
            if seen[a][b] {
                return Err(format!("duplicate pair ({i}, {j})"));
            }
            seen[a][b] = true;
            counts[a][b] = *c;
        }
        Ok(Self { ids, counts })
    }
}

/// Everything a run produces: the like matrix, the authenticity each
/// politician ended up with, and the competition the decisions were
/// evaluated against.
#[derive(Debug, Clone)]
pub struct SimulationOutput {
    pub likes: LikeMatrix,
    pub gammas: Vec<f64>,
    pub competition: CompetitionOutcome,
}

/// Voters' posterior belief about a politician at `mu` after seeing her
/// endorse a message at `delta`: `mu/(1+omega) + omega/(1+omega) * delta`.
pub fn posterior(mu: f64, delta: f64, omega: f64) -> f64 {
    mu / (1.0 + omega) + omega / (1.0 + omega) * delta
}

/// The like decision: endorse iff the popularity gain (distance to the
/// front-runner before minus after the belief update) strictly exceeds the
/// authenticity cost.
pub fn like_decision(
    liker: &Politician,
    message: &Message,
    front_runner_mu: f64,
    omega: f64,
) -> bool {
    let mu_star = posterior(liker.mu, message.delta, omega);
    let gain = (liker.mu - front_runner_mu).abs() - (mu_star - front_runner_mu).abs();
    let cost = liker.gamma * (message.delta - liker.mu).abs() / liker.sigma;
    gain - cost > 0.0
}

/// Draws each politician's authenticity for this run.
fn draw_gammas(politicians: &[Politician], config: &SimulationConfig) -> Vec<f64> {
    match config.gamma_mode {
        GammaMode::Homogeneous { gamma } => vec![gamma; politicians.len()],
        GammaMode::Heterogeneous { mean, sd } => politicians
            .iter()
            .map(|p| {
                let mut rng = substream(config.seed, &format!("gamma.{}", p.id));
                let normal = Normal::new(mean, sd).expect("finite gamma parameters");
                loop {
                    let g: f64 = normal.sample(&mut rng);
                    if g >= 0.0 {
                        return g;
                    }
                }
            })
            .collect(),
    }
}

/// Runs one simulation: competes for front-runners once, then lets every
/// politician judge every other politician's messages. Deterministic given
/// the config seed; politicians' positions are never mutated.
pub fn simulate(
    politicians: &[Politician],
    electorate: &Electorate,
    config: &SimulationConfig,
) -> Result<SimulationOutput, SpatialError> {
    let competition = compete(politicians, electorate, config.vote_rule)?;
    let gammas = draw_gammas(politicians, config);

    let n = politicians.len();
    let front_mu: Vec<f64> = politicians
        .iter()
        .map(|p| {
            competition
                .front_runner_mu(p.coalition)
                .expect("coalition has a front-runner")
        })
        .collect();

    let mut counts = vec![vec![0u32; n]; n];
    for (j, sender) in politicians.iter().enumerate() {
        let mut rng = substream(config.seed, &format!("messages.{}", sender.id));
        let dist = Normal::new(sender.mu, sender.sigma).expect("sigma > 0");
        for _ in 0..config.messages_per_politician {
            let delta: f64 = rng.sample(dist);
            for (i, liker) in politicians.iter().enumerate() {
                if i == j {
                    continue;
                }
                let mu_star = posterior(liker.mu, delta, config.omega);
                let gain =
                    (liker.mu - front_mu[i]).abs() - (mu_star - front_mu[i]).abs();
                let cost = gammas[i] * (delta - liker.mu).abs() / liker.sigma;
                if gain - cost > 0.0 {
                    counts[i][j] += 1;
                }
            }
        }
    }

    Ok(SimulationOutput {
        likes: LikeMatrix {
            ids: politicians.iter().map(|p| p.id.clone()).collect(),
            counts,
        },
        gammas,
        competition,
    })
}

/// One row of the simulated dyad table.
#[derive(Debug, Clone, PartialEq)]
pub struct DyadRecord {
    pub liker: String,
    pub sender: String,
    pub likes: u32,
    pub opponents: bool,
}

/// All ordered pairs, self-pairs included (zero likes, not opponents), so a
/// cast of N yields N^2 rows.
pub fn dyad_table(likes: &LikeMatrix, politicians: &[Politician]) -> Vec<DyadRecord> {
    let coalition: Vec<u32> = politicians.iter().map(|p| p.coalition).collect();
    let mut rows = Vec::with_capacity(likes.n() * likes.n());
    for (i, liker) in likes.ids.iter().enumerate() {
        for (j, sender) in likes.ids.iter().enumerate() {
            rows.push(DyadRecord {
                liker: liker.clone(),
                sender: sender.clone(),
                likes: likes.counts[i][j],
                opponents: coalition[i] != coalition[j],
            });
        }
    }
    rows
}

/// Writes the dyad table as `liker_id,sender_id,likes,opponents`.
pub fn write_dyads<W: io::Write>(mut w: W, dyads: &[DyadRecord]) -> io::Result<()> {
    writeln!(w, "liker_id,sender_id,likes,opponents")?;
    for d in dyads {
        writeln!(
            w,
            "{},{},{},{}",
            d.liker,
            d.sender,
            d.likes,
            u8::from(d.opponents)
        )?;
    }
    Ok(())
}
