//! Bundled default calibration: a 28-politician cast spanning the 1-5 axis
//! in three coalitions, and a lumpy empirical electorate with 55% of
//! respondents unaligned (spread uniformly over the bins). Survey-based
//! runs replace these defaults with estimates from the ideology module.

use std::io;
use std::path::Path;

use crate::spatial::{
    assign_coalitions, make_electorate, Electorate, ElectorateSpec, Politician, SpatialError,
};

/// (mu, sigma) pairs for the default cast, sorted right to left.
const DEFAULT_CAST: [(f64, f64); 28] = [
    (1.00, 0.48),
    (1.15, 0.62),
    (1.30, 0.39),
    (1.45, 0.55),
    (1.60, 0.44),
    (1.72, 0.68),
    (1.85, 0.51),
    (2.00, 0.36),
    (2.18, 0.58),
    (2.35, 0.47),
    (2.50, 0.65),
    (2.62, 0.41),
    (2.75, 0.53),
    (2.88, 0.37),
    (3.00, 0.60),
    (3.12, 0.45),
    (3.25, 0.56),
    (3.40, 0.42),
    (3.55, 0.64),
    (3.70, 0.49),
    (3.85, 0.38),
    (4.00, 0.57),
    (4.15, 0.46),
    (4.30, 0.61),
    (4.45, 0.43),
    (4.60, 0.54),
    (4.80, 0.40),
    (5.00, 0.52),
];

/// Observed bin shares (ideology 1..5) and the unaligned share of the
/// default electorate.
pub const DEFAULT_SHARES: [f64; 5] = [0.10, 0.04, 0.14, 0.05, 0.12];
pub const DEFAULT_NULL_SHARE: f64 = 0.55;

/// The default cast: ids d01..d28, coalitions assigned by mu terciles.
pub fn default_politicians() -> Vec<Politician> {
    let mut cast: Vec<Politician> = DEFAULT_CAST
        .iter()
        .enumerate()
        .map(|(idx, &(mu, sigma))| {
            Politician::new(format!("d{:02}", idx + 1), mu, sigma, 0, 0.0)
                .expect("default cast is valid")
        })
        .collect();
    assign_coalitions(&mut cast, 3).expect("28 politicians split into 3 coalitions");
    cast
}

pub fn default_electorate_spec() -> ElectorateSpec {
    ElectorateSpec::EmpiricalDiscrete {
        shares: DEFAULT_SHARES,
        null_share: DEFAULT_NULL_SHARE,
    }
}

pub fn default_electorate() -> Electorate {
    make_electorate(&default_electorate_spec()).expect("default shares are valid")
}

/// Normal electorates (discrete on the five bins, continuous on the grid)
/// matching the mean and standard deviation of the given electorate. Used
/// by the electoral-incentive comparison.
pub fn matched_normal_specs(electorate: &Electorate) -> (ElectorateSpec, ElectorateSpec) {
    let mean = electorate.mean();
    let std = electorate.std_dev();
    (
        ElectorateSpec::NormalDiscrete { mean, std },
        ElectorateSpec::NormalContinuous { mean, std },
    )
}

/// Reads a politician table: `id,mu,sigma` with optional `coalition` and
/// `gamma` columns. When the coalition column is absent, membership is
/// assigned by mu terciles over `default_coalitions` groups.
pub fn read_politicians<R: io::Read>(
    reader: R,
    default_coalitions: u32,
) -> Result<Vec<Politician>, String> {
    let mut rdr = csv::Reader::from_reader(reader);
    let headers = rdr.headers().map_err(|e| e.to_string())?.clone();
    let col = |name: &str| headers.iter().position(|h| h == name);
    let c_id = col("id").ok_or("missing column `id`")?;
    let c_mu = col("mu").ok_or("missing column `mu`")?;
    let c_sigma = col("sigma").ok_or("missing column `sigma`")?;
    let c_coalition = col("coalition");
    let c_gamma = col("gamma");

    let mut cast = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| e.to_string())?;
        let field = |idx: usize| rec.get(idx).unwrap_or("").to_string();
        let parse_f64 = |idx: usize, what: &str| -> Result<f64, String> {
            field(idx)
                .parse::<f64>()
                .map_err(|_| format!("{what} `{}` is not a number", field(idx)))
        };
        let id = field(c_id);
        let mu = parse_f64(c_mu, "mu")?;
        let sigma = parse_f64(c_sigma, "sigma")?;
        let coalition = match c_coalition {
            Some(idx) if !field(idx).is_empty() => field(idx)
                .parse::<u32>()
                .map_err(|_| format!("coalition `{}` is not an integer", field(idx)))?,
            _ => 0,
        };
        let gamma = match c_gamma {
            Some(idx) if !field(idx).is_empty() => parse_f64(idx, "gamma")?,
            _ => 0.0,
        };
        cast.push(Politician::new(id, mu, sigma, coalition, gamma).map_err(|e| e.to_string())?);
    }
    if cast.is_empty() {
        return Err("politician table is empty".into());
    }
    if c_coalition.is_none() {
        assign_coalitions(&mut cast, default_coalitions).map_err(|e: SpatialError| e.to_string())?;
    }
    Ok(cast)
}

pub fn read_politicians_file(
    path: &Path,
    default_coalitions: u32,
) -> Result<Vec<Politician>, String> {
    let file = std::fs::File::open(path).map_err(|e| format!("{}: {e}", path.display()))?;
    read_politicians(file, default_coalitions)
}

/// Writes `id,mu,sigma,coalition,gamma`.
pub fn write_politicians<W: io::Write>(mut w: W, cast: &[Politician]) -> io::Result<()> {
    writeln!(w, "id,mu,sigma,coalition,gamma")?;
    for p in cast {
        writeln!(w, "{},{},{},{},{}", p.id, p.mu, p.sigma, p.coalition, p.gamma)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spatial::{compete, VoteRule};
    use approx::assert_abs_diff_eq;

    #[test]
    fn default_cast_shape() {
        let cast = default_politicians();
        assert_eq!(cast.len(), 28);
        assert_abs_diff_eq!(cast[0].mu, 1.0);
        assert_abs_diff_eq!(cast[27].mu, 5.0);
        let sizes: Vec<usize> = (0..3)
            .map(|c| cast.iter().filter(|p| p.coalition == c).count())
            .collect();
        assert_eq!(sizes, vec![10, 9, 9]);
        assert!(cast.windows(2).all(|w| w[0].mu < w[1].mu));
    }

    #[test]
    fn default_electorate_is_lumpy_with_center_mass() {
        let e = default_electorate();
        assert_eq!(e.groups().len(), 5);
        let w: Vec<f64> = e.groups().iter().map(|g| g.weight).collect();
        // null mass pushes every bin up; extremes and center dominate
        assert!(w[0] > w[1] && w[2] > w[1] && w[2] > w[3] && w[4] > w[3]);
        assert_abs_diff_eq!(w.iter().sum::<f64>(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn default_competition_has_one_front_runner_per_coalition() {
        let cast = default_politicians();
        let e = default_electorate();
        for rule in [VoteRule::NearestGroup, VoteRule::GroupProximity] {
            let out = compete(&cast, &e, rule).unwrap();
            assert_eq!(out.front_runner.len(), 3);
        }
    }

    /// Brute force over all (politician, group) pairs on the full default
    /// cast, for both vote rules.
    #[test]
    fn default_competition_matches_exhaustive_enumeration() {
        let cast = default_politicians();
        let e = default_electorate();

        // claim rule: each politician gets the weight of her best-ratio group
        let claim = compete(&cast, &e, VoteRule::NearestGroup).unwrap();
        for p in &cast {
            let expected = e
                .groups()
                .iter()
                .map(|g| ((p.mu - g.ideology).abs() / g.weight, g.weight))
                .min_by(|a, b| a.0.partial_cmp(&b.0).unwrap())
                .unwrap()
                .1;
            assert_abs_diff_eq!(claim.votes[&p.id], expected, epsilon = 1e-12);
        }
        // with this electorate the front-runners claim the heavy extreme
        // and center bins
        let targets: Vec<f64> = (0..3)
            .map(|c| claim.front_runner[&c].mu)
            .collect();
        assert_abs_diff_eq!(targets[0], 1.0);
        assert_abs_diff_eq!(targets[1], 2.5);
        assert_abs_diff_eq!(targets[2], 4.45);

        // proximity rule: every group backs the nearest member per coalition
        let proximity = compete(&cast, &e, VoteRule::GroupProximity).unwrap();
        let mut expected: std::collections::BTreeMap<&str, f64> =
            cast.iter().map(|p| (p.id.as_str(), 0.0)).collect();
        for c in 0..3u32 {
            for g in e.groups() {
                let winner = cast
                    .iter()
                    .filter(|p| p.coalition == c)
                    .min_by(|a, b| {
                        ((a.mu - g.ideology).abs() / g.weight)
                            .partial_cmp(&((b.mu - g.ideology).abs() / g.weight))
                            .unwrap()
                            .then_with(|| a.id.cmp(&b.id))
                    })
                    .unwrap();
                *expected.get_mut(winner.id.as_str()).unwrap() += g.weight;
            }
        }
        for p in &cast {
            assert_abs_diff_eq!(
                proximity.votes[&p.id],
                expected[p.id.as_str()],
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn politician_csv_round_trip() {
        let cast = default_politicians();
        let mut buf = Vec::new();
        write_politicians(&mut buf, &cast).unwrap();
        let back = read_politicians(buf.as_slice(), 3).unwrap();
        assert_eq!(cast, back);
    }

    #[test]
    fn coalition_column_optional() {
        let csv = "id,mu,sigma\na,1.0,0.5\nb,3.0,0.5\nc,5.0,0.5\n";
        let cast = read_politicians(csv.as_bytes(), 3).unwrap();
        let coalitions: Vec<u32> = cast.iter().map(|p| p.coalition).collect();
        assert_eq!(coalitions, vec![0, 1, 2]);
    }

    #[test]
    fn bad_rows_are_rejected() {
        assert!(read_politicians("id,mu,sigma\na,x,0.5\n".as_bytes(), 3).is_err());
        assert!(read_politicians("id,mu\na,1.0\n".as_bytes(), 3).is_err());
        assert!(read_politicians("id,mu,sigma\na,1.0,0.0\n".as_bytes(), 3).is_err());
    }
}
