//! Perceived-ideology estimation from opinion-survey microdata.
//!
//! For each politician we regress respondents' opinion of her (1-5) on the
//! respondents' self-reported ideology (1-5). The slope measures how
//! strongly favorable opinion lines up with the left-right axis; slopes are
//! then mapped affinely onto the 1-5 ideology axis so that the two extreme
//! politicians land exactly on 1 and 5. Standard errors are carried through
//! the same affine map and become the ideology spread `sigma`.

use std::collections::BTreeMap;
use std::io;
use std::path::Path;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum IdeologyError {
    #[error("survey schema error: {0}")]
    Schema(String),
    #[error("politician {politician_id}: {usable} usable responses, need at least 3")]
    InsufficientData { politician_id: String, usable: usize },
    #[error("politician {politician_id}: self-ideology has zero variance among usable rows")]
    DegenerateRegressor { politician_id: String },
    #[error("cannot rescale: all raw slopes are identical")]
    DegenerateRange,
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

/// One respondent: self-reported ideology plus opinions of the surveyed
/// politicians, all on the 1-5 scale, `None` for refused/unknown.
#[derive(Debug, Clone, PartialEq)]
pub struct SurveyResponse {
    pub respondent_id: String,
    pub self_ideology: Option<u8>,
    pub opinions: BTreeMap<String, Option<u8>>,
}

/// Raw per-politician regression output, before rescaling.
#[derive(Debug, Clone, PartialEq)]
pub struct RawEstimate {
    pub politician_id: String,
    pub beta: f64,
    pub beta_se: f64,
}

/// A politician's position on the 1-5 axis with its spread.
#[derive(Debug, Clone, PartialEq)]
pub struct IdeologyEstimate {
    pub politician_id: String,
    pub beta: f64,
    pub beta_se: f64,
    pub mu: f64,
    pub sigma: f64,
}

fn check_scale(value: u8, what: &str, line: u64) -> Result<u8, IdeologyError> {
    if (1..=5).contains(&value) {
        Ok(value)
    } else {
        Err(IdeologyError::Schema(format!(
            "line {line}: {what} = {value} outside the 1..5 scale"
        )))
    }
}

/// Reads a long-format survey CSV with header
/// `respondent_id,self_ideology,politician_id,opinion`; empty fields are
/// nulls. One row per (respondent, politician) pair.
pub fn read_survey<R: io::Read>(reader: R) -> Result<Vec<SurveyResponse>, IdeologyError> {
    let mut rdr = csv::Reader::from_reader(reader);
    let headers = rdr.headers()?.clone();
    let col = |name: &str| -> Result<usize, IdeologyError> {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| IdeologyError::Schema(format!("missing column `{name}`")))
    };
    let c_resp = col("respondent_id")?;
    let c_self = col("self_ideology")?;
    let c_pol = col("politician_id")?;
    let c_op = col("opinion")?;

    let parse_opt = |field: &str, what: &str, line: u64| -> Result<Option<u8>, IdeologyError> {
        if field.is_empty() {
            return Ok(None);
        }
        let v: u8 = field.parse().map_err(|_| {
            IdeologyError::Schema(format!("line {line}: {what} `{field}` is not an integer"))
        })?;
        check_scale(v, what, line).map(Some)
    };

    let mut by_respondent: BTreeMap<String, SurveyResponse> = BTreeMap::new();
    for record in rdr.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line());
        let respondent_id = record.get(c_resp).unwrap_or("").to_string();
        if respondent_id.is_empty() {
            return Err(IdeologyError::Schema(format!(
                "line {line}: empty respondent_id"
            )));
        }
        let self_ideology = parse_opt(record.get(c_self).unwrap_or(""), "self_ideology", line)?;
        let politician_id = record.get(c_pol).unwrap_or("").to_string();
        if politician_id.is_empty() {
            return Err(IdeologyError::Schema(format!(
                "line {line}: empty politician_id"
            )));
        }
        let opinion = parse_opt(record.get(c_op).unwrap_or(""), "opinion", line)?;

        let entry = by_respondent
            .entry(respondent_id.clone())
            .or_insert_with(|| SurveyResponse {
                respondent_id,
                self_ideology,
                opinions: BTreeMap::new(),
            });
        if entry.self_ideology != self_ideology {
            return Err(IdeologyError::Schema(format!(
                "line {line}: respondent {} reports conflicting self_ideology",
                entry.respondent_id
            )));
        }
        if entry
            .opinions
            .insert(politician_id.clone(), opinion)
            .is_some()
        {
            return Err(IdeologyError::Schema(format!(
                "line {line}: duplicate opinion for respondent {} on politician {politician_id}",
                entry.respondent_id
            )));
        }
    }
    Ok(by_respondent.into_values().collect())
}

pub fn read_survey_file(path: &Path) -> Result<Vec<SurveyResponse>, IdeologyError> {
    read_survey(std::fs::File::open(path)?)
}

/// All politician ids appearing in the survey, sorted.
pub fn politician_ids(survey: &[SurveyResponse]) -> Vec<String> {
    let mut ids: Vec<String> = survey
        .iter()
        .flat_map(|r| r.opinions.keys().cloned())
        .collect();
    ids.sort();
    ids.dedup();
    ids
}

/// OLS of opinion on self-ideology (with intercept) for one politician.
/// Rows missing either value are dropped pairwise. Returns the slope and its
/// classical standard error.
pub fn estimate_raw(
    survey: &[SurveyResponse],
    politician_id: &str,
) -> Result<(f64, f64), IdeologyError> {
    let pairs: Vec<(f64, f64)> = survey
        .iter()
        .filter_map(|r| {
            let x = r.self_ideology?;
            let y = (*r.opinions.get(politician_id)?)?;
            Some((f64::from(x), f64::from(y)))
        })
        .collect();
    let n = pairs.len();
    if n < 3 {
        return Err(IdeologyError::InsufficientData {
            politician_id: politician_id.to_string(),
            usable: n,
        });
    }
    let nf = n as f64;
    let mean_x = pairs.iter().map(|p| p.0).sum::<f64>() / nf;
    let mean_y = pairs.iter().map(|p| p.1).sum::<f64>() / nf;
    let sxx: f64 = pairs.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    if sxx == 0.0 {
        return Err(IdeologyError::DegenerateRegressor {
            politician_id: politician_id.to_string(),
        });
    }
    let sxy: f64 = pairs
        .iter()
        .map(|p| (p.0 - mean_x) * (p.1 - mean_y))
        .sum();
    let beta = sxy / sxx;
    let alpha = mean_y - beta * mean_x;
    let rss: f64 = pairs
        .iter()
        .map(|p| (p.1 - alpha - beta * p.0).powi(2))
        .sum();
    let sigma2 = rss / (nf - 2.0);
    let beta_se = (sigma2 / sxx).sqrt();
    Ok((beta, beta_se))
}

/// Affine map sending the largest slope to 5 (left) and the smallest to 1
/// (right); standard errors are scaled by the same factor so standardized
/// quantities survive the rescale.
pub fn rescale(estimates: &[RawEstimate]) -> Result<Vec<IdeologyEstimate>, IdeologyError> {
    let betas: Vec<f64> = estimates.iter().map(|e| e.beta).collect();
    let min = betas.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = betas.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if estimates.len() < 2 || max <= min {
        return Err(IdeologyError::DegenerateRange);
    }
    let scale = 4.0 / (max - min);
    Ok(estimates
        .iter()
        .map(|e| IdeologyEstimate {
            politician_id: e.politician_id.clone(),
            beta: e.beta,
            beta_se: e.beta_se,
            // endpoints pinned so the extremes land on 1 and 5 exactly
            mu: if e.beta == min {
                1.0
            } else if e.beta == max {
                5.0
            } else {
                1.0 + scale * (e.beta - min)
            },
            sigma: e.beta_se * scale,
        })
        .collect())
}

/// Full pipeline: estimate every politician in the survey, then rescale.
pub fn estimate_survey(survey: &[SurveyResponse]) -> Result<Vec<IdeologyEstimate>, IdeologyError> {
    let mut raws = Vec::new();
    for id in politician_ids(survey) {
        let (beta, beta_se) = estimate_raw(survey, &id)?;
        raws.push(RawEstimate {
            politician_id: id,
            beta,
            beta_se,
        });
    }
    rescale(&raws)
}

/// Writes estimates as `politician_id,beta,beta_se,mu,sigma`.
pub fn write_estimates<W: io::Write>(
    mut writer: W,
    estimates: &[IdeologyEstimate],
) -> Result<(), IdeologyError> {
    writeln!(writer, "politician_id,beta,beta_se,mu,sigma")?;
    for e in estimates {
        writeln!(
            writer,
            "{},{},{},{},{}",
            e.politician_id, e.beta, e.beta_se, e.mu, e.sigma
        )?;
    }
    Ok(())
}
