//! File-based panel assembly and summary statistics.
//!
//! Four long-format CSVs describe the interactions: likes and votes per
//! dyad-period, following links, and coalition membership. The loader joins
//! them on (i, j, t); a dyad present on one side only is kept with a zero on
//! the other side, and every such fill is recorded in a join report so the
//! asymmetry stays visible.

use std::collections::{BTreeMap, BTreeSet};
use std::io;
use std::path::Path;

use thiserror::Error;

pub use crate::econometrics::PanelRow;

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("{file}: {msg}")]
    Schema { file: String, msg: String },
    #[error("politician {id} missing from the coalition file")]
    UnknownPolitician { id: String },
    #[error("duplicate dyad {key} in {file}")]
    DuplicateDyad { file: String, key: String },
    #[error("no rows match {0}")]
    EmptyGroup(String),
    #[error("invalid period {label}: {msg}")]
    InvalidPeriod { label: String, msg: String },
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// One analysis window: the vote collection span and the date the likes
/// snapshot was taken.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodSpec {
    pub label: String,
    pub votes_start: String,
    pub votes_end: String,
    pub likes_date: String,
}

fn check_iso_date(s: &str) -> bool {
    let bytes = s.as_bytes();
    if bytes.len() != 10 || bytes[4] != b'-' || bytes[7] != b'-' {
        return false;
    }
    let digits = |r: std::ops::Range<usize>| s[r].chars().all(|c| c.is_ascii_digit());
    if !(digits(0..4) && digits(5..7) && digits(8..10)) {
        return false;
    }
    let month: u32 = s[5..7].parse().unwrap_or(0);
    let day: u32 = s[8..10].parse().unwrap_or(0);
    (1..=12).contains(&month) && (1..=31).contains(&day)
}

impl PeriodSpec {
    pub fn new(
        label: impl Into<String>,
        votes_start: impl Into<String>,
        votes_end: impl Into<String>,
        likes_date: impl Into<String>,
    ) -> Result<Self, IngestError> {
        let spec = Self {
            label: label.into(),
            votes_start: votes_start.into(),
            votes_end: votes_end.into(),
            likes_date: likes_date.into(),
        };
        for d in [&spec.votes_start, &spec.votes_end, &spec.likes_date] {
            if !check_iso_date(d) {
                return Err(IngestError::InvalidPeriod {
                    label: spec.label.clone(),
                    msg: format!("`{d}` is not an ISO-8601 date"),
                });
            }
        }
        // ISO dates compare correctly as strings
        if !(spec.votes_start < spec.votes_end && spec.votes_end <= spec.likes_date) {
            return Err(IngestError::InvalidPeriod {
                label: spec.label.clone(),
                msg: "need votes_start < votes_end <= likes_date".into(),
            });
        }
        Ok(spec)
    }
}

/// Reads `label,votes_start,votes_end,likes_date`.
pub fn load_periods(path: &Path) -> Result<Vec<PeriodSpec>, IngestError> {
    let file = path.display().to_string();
    let mut rdr = csv_reader(path, &file, &["label", "votes_start", "votes_end", "likes_date"])?;
    let mut out = Vec::new();
    for rec in rdr.0.records() {
        let rec = rec.map_err(|e| IngestError::Schema {
            file: file.clone(),
            msg: e.to_string(),
        })?;
        let get = |name: &str| rec.get(rdr.1[name]).unwrap_or("").to_string();
        out.push(PeriodSpec::new(
            get("label"),
            get("votes_start"),
            get("votes_end"),
            get("likes_date"),
        )?);
    }
    Ok(out)
}

/// The assembled interaction panel plus the coalition map it was built
/// from (needed to re-emit loadable files).
#[derive(Debug, Clone, PartialEq)]
pub struct Panel {
    pub rows: Vec<PanelRow>,
    pub coalitions: BTreeMap<String, String>,
}

/// Fills applied during the join, as lines `MISSING <side> <i> <j> <t>`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct JoinReport {
    pub lines: Vec<String>,
}

impl JoinReport {
    pub fn write<W: io::Write>(&self, mut w: W) -> io::Result<()> {
        for line in &self.lines {
            writeln!(w, "{line}")?;
        }
        Ok(())
    }
}

type IndexedReader = (csv::Reader<std::fs::File>, BTreeMap<String, usize>);

fn csv_reader(path: &Path, file: &str, required: &[&str]) -> Result<IndexedReader, IngestError> {
    let mut rdr = csv::Reader::from_path(path).map_err(|e| IngestError::Schema {
        file: file.to_string(),
        msg: e.to_string(),
    })?;
    let headers = rdr
        .headers()
        .map_err(|e| IngestError::Schema {
            file: file.to_string(),
            msg: e.to_string(),
        })?
        .clone();
    let mut cols = BTreeMap::new();
    for name in required {
        let pos = headers.iter().position(|h| h == *name).ok_or_else(|| {
            IngestError::Schema {
                file: file.to_string(),
                msg: format!("missing column `{name}`"),
            }
        })?;
        cols.insert((*name).to_string(), pos);
    }
    Ok((rdr, cols))
}

fn read_dyad_period_counts(
    path: &Path,
    columns: [&str; 4],
) -> Result<BTreeMap<(String, String, String), u64>, IngestError> {
    let file = path.display().to_string();
    let (mut rdr, cols) = csv_reader(path, &file, &columns)?;
    let mut out = BTreeMap::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| IngestError::Schema {
            file: file.clone(),
            msg: e.to_string(),
        })?;
        let get = |name: &str| rec.get(cols[name]).unwrap_or("").to_string();
        let t = get(columns[0]);
        let i = get(columns[1]);
        let j = get(columns[2]);
        let raw = get(columns[3]);
        let count: u64 = raw.parse().map_err(|_| IngestError::Schema {
            file: file.clone(),
            msg: format!("`{raw}` is not a non-negative count"),
        })?;
        if out.insert((t.clone(), i.clone(), j.clone()), count).is_some() {
            return Err(IngestError::DuplicateDyad {
                file,
                key: format!("({i}, {j}, {t})"),
            });
        }
    }
    Ok(out)
}

/// Joins the four input files into the interaction panel. Dyad-periods
/// present in exactly one of likes/votes are kept with the missing side at
/// zero and reported; the following flag defaults to zero.
pub fn load_panel(
    likes_path: &Path,
    votes_path: &Path,
    following_path: &Path,
    coalitions_path: &Path,
) -> Result<(Panel, JoinReport), IngestError> {
    let likes = read_dyad_period_counts(likes_path, ["period", "liker_id", "target_id", "likes"])?;
    let votes = read_dyad_period_counts(votes_path, ["period", "i", "j", "votes_in_favor"])?;

    let file = following_path.display().to_string();
    let (mut rdr, cols) = csv_reader(following_path, &file, &["i", "j", "follows"])?;
    let mut following: BTreeMap<(String, String), bool> = BTreeMap::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| IngestError::Schema {
            file: file.clone(),
            msg: e.to_string(),
        })?;
        let i = rec.get(cols["i"]).unwrap_or("").to_string();
        let j = rec.get(cols["j"]).unwrap_or("").to_string();
        let raw = rec.get(cols["follows"]).unwrap_or("");
        let flag = match raw {
            "0" => false,
            "1" => true,
            other => {
                return Err(IngestError::Schema {
                    file,
                    msg: format!("follows must be 0 or 1, got `{other}`"),
                })
            }
        };
        if following.insert((i.clone(), j.clone()), flag).is_some() {
            return Err(IngestError::DuplicateDyad {
                file,
                key: format!("({i}, {j})"),
            });
        }
    }

    let file = coalitions_path.display().to_string();
    let (mut rdr, cols) = csv_reader(coalitions_path, &file, &["politician_id", "coalition"])?;
    let mut coalitions: BTreeMap<String, String> = BTreeMap::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| IngestError::Schema {
            file: file.clone(),
            msg: e.to_string(),
        })?;
        let id = rec.get(cols["politician_id"]).unwrap_or("").to_string();
        let coalition = rec.get(cols["coalition"]).unwrap_or("").to_string();
        if coalitions.insert(id.clone(), coalition).is_some() {
            return Err(IngestError::DuplicateDyad {
                file,
                key: id,
            });
        }
    }

    let keys: BTreeSet<&(String, String, String)> = likes.keys().chain(votes.keys()).collect();
    let mut rows = Vec::with_capacity(keys.len());
    let mut report = JoinReport::default();
    for key in keys {
        let (t, i, j) = key;
        for id in [i, j] {
            if !coalitions.contains_key(id) {
                return Err(IngestError::UnknownPolitician { id: id.clone() });
            }
        }
        let like_count = likes.get(key).copied();
        let vote_count = votes.get(key).copied();
        if like_count.is_none() {
            report.lines.push(format!("MISSING likes {i} {j} {t}"));
        }
        if vote_count.is_none() {
            report.lines.push(format!("MISSING votes {i} {j} {t}"));
        }
        rows.push(PanelRow {
            i: i.clone(),
            j: j.clone(),
            t: t.clone(),
            likes: like_count.unwrap_or(0),
            votes: vote_count.unwrap_or(0),
            opponents: coalitions[i] != coalitions[j],
            following: following.get(&(i.clone(), j.clone())).copied().unwrap_or(false),
        });
    }
    rows.sort_by(|a, b| (&a.t, &a.i, &a.j).cmp(&(&b.t, &b.i, &b.j)));
    report.lines.sort();
    Ok((Panel { rows, coalitions }, report))
}

/// Re-emits a loaded panel as the four input CSVs (sorted, deterministic),
/// such that loading them again reproduces the panel exactly.
pub fn write_panel(panel: &Panel, dir: &Path) -> Result<(), IngestError> {
    use std::fmt::Write as _;
    let mut likes = String::from("period,liker_id,target_id,likes\n");
    let mut votes = String::from("period,i,j,votes_in_favor\n");
    for row in &panel.rows {
        writeln!(likes, "{},{},{},{}", row.t, row.i, row.j, row.likes).unwrap();
        writeln!(votes, "{},{},{},{}", row.t, row.i, row.j, row.votes).unwrap();
    }
    let mut follows: BTreeMap<(String, String), bool> = BTreeMap::new();
    for row in &panel.rows {
        follows.insert((row.i.clone(), row.j.clone()), row.following);
    }
    let mut following = String::from("i,j,follows\n");
    for ((i, j), flag) in &follows {
        writeln!(following, "{i},{j},{}", u8::from(*flag)).unwrap();
    }
    let mut coalitions = String::from("politician_id,coalition\n");
    for (id, coalition) in &panel.coalitions {
        writeln!(coalitions, "{id},{coalition}").unwrap();
    }
    std::fs::write(dir.join("likes.csv"), likes)?;
    std::fs::write(dir.join("votes.csv"), votes)?;
    std::fs::write(dir.join("following.csv"), following)?;
    std::fs::write(dir.join("coalitions.csv"), coalitions)?;
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupFilter {
    All,
    Opponents,
}

impl std::fmt::Display for GroupFilter {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GroupFilter::All => write!(f, "all"),
            GroupFilter::Opponents => write!(f, "opponents"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    Likes,
    Votes,
}

impl Metric {
    fn value(&self, row: &PanelRow) -> f64 {
        match self {
            Metric::Likes => row.likes as f64,
            Metric::Votes => row.votes as f64,
        }
    }
}

impl std::fmt::Display for Metric {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Metric::Likes => write!(f, "likes"),
            Metric::Votes => write!(f, "votes"),
        }
    }
}

/// Summary of one (period, group, metric) cell.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryBlock {
    pub period: String,
    pub group: GroupFilter,
    pub metric: Metric,
    pub mean: f64,
    pub median: f64,
    pub std_dev: f64,
    pub n: usize,
}

fn median_of(sorted: &[f64]) -> f64 {
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0
    }
}

/// Per-period mean/median/sample-std/N for both metrics, over all dyads or
/// opponent dyads only.
pub fn summarize(
    panel: &[PanelRow],
    group: GroupFilter,
) -> Result<Vec<SummaryBlock>, IngestError> {
    let mut periods: Vec<&str> = panel.iter().map(|r| r.t.as_str()).collect();
    periods.sort_unstable();
    periods.dedup();
    if periods.is_empty() {
        return Err(IngestError::EmptyGroup("empty panel".into()));
    }
    let mut out = Vec::new();
    for period in periods {
        let rows: Vec<&PanelRow> = panel
            .iter()
            .filter(|r| r.t == period)
            .filter(|r| match group {
                GroupFilter::All => true,
                GroupFilter::Opponents => r.opponents,
            })
            .collect();
        if rows.is_empty() {
            return Err(IngestError::EmptyGroup(format!(
                "period {period}, group {group}"
            )));
        }
        for metric in [Metric::Likes, Metric::Votes] {
            let mut values: Vec<f64> = rows.iter().map(|r| metric.value(r)).collect();
            values.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let n = values.len();
            let mean = values.iter().sum::<f64>() / n as f64;
            let std_dev = if n > 1 {
                (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n as f64 - 1.0))
                    .sqrt()
            } else {
                0.0
            };
            out.push(SummaryBlock {
                period: period.to_string(),
                group,
                metric,
                mean,
                median: median_of(&values),
                std_dev,
                n,
            });
        }
    }
    Ok(out)
}

/// Writes summary blocks as `period,group,metric,n,mean,median,std_dev`.
pub fn write_summary<W: io::Write>(mut w: W, blocks: &[SummaryBlock]) -> io::Result<()> {
    writeln!(w, "period,group,metric,n,mean,median,std_dev")?;
    for b in blocks {
        writeln!(
            w,
            "{},{},{},{},{},{},{}",
            b.period, b.group, b.metric, b.n, b.mean, b.median, b.std_dev
        )?;
    }
    Ok(())
}

/// Square interaction matrix of one metric for one period over the given
/// node order; absent dyads are zero.
pub fn metric_matrix(
    panel: &[PanelRow],
    metric: Metric,
    period: &str,
    ids: &[String],
) -> Vec<Vec<f64>> {
    let index: BTreeMap<&str, usize> = ids
        .iter()
        .enumerate()
        .map(|(k, id)| (id.as_str(), k))
        .collect();
    let mut matrix = vec![vec![0.0; ids.len()]; ids.len()];
    for row in panel.iter().filter(|r| r.t == period) {
        if let (Some(&a), Some(&b)) = (index.get(row.i.as_str()), index.get(row.j.as_str())) {
            if a != b {
                matrix[a][b] = metric.value(row);
            }
        }
    }
    matrix
}
