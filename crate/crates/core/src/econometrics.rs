//! Least-squares machinery: the shared OLS core, the dyad regression of
//! simulated likes on opponent status, the two-way fixed-effects panel
//! regression, and the two-variable principal component used in the
//! residual analysis.
//!
//! Fixed effects are absorbed with explicit dummy variables (one dropped
//! per group); at panel sizes of a few dozen entities this is exact and
//! keeps the design matrix transparent.

use nalgebra::{DMatrix, DVector};
use std::collections::BTreeMap;
use std::io;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum EconError {
    #[error("design has {rows} rows but {cols} columns")]
    TooFewRows { rows: usize, cols: usize },
    #[error("design is rank deficient at column {index} ({term})")]
    RankDeficient { index: usize, term: String },
    #[error("regressor `{0}` has no variation")]
    NoVariation(String),
    #[error("vector has zero variance")]
    ZeroVariance,
    #[error("invalid regression spec: {0}")]
    InvalidSpec(String),
    #[error("input vectors have different lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),
}

/// Variance estimator for the coefficient covariance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CovarianceType {
    /// Classical homoskedastic `sigma^2 (X'X)^-1`.
    #[default]
    Classical,
    /// Heteroskedasticity-robust HC1 sandwich.
    Hc1,
}

/// Output of every OLS variant.
#[derive(Debug, Clone)]
pub struct RegressionResult {
    /// Column names in design order.
    pub terms: Vec<String>,
    pub coefficients: BTreeMap<String, f64>,
    pub std_errors: BTreeMap<String, f64>,
    pub n_obs: usize,
    pub adj_r2: f64,
    pub residuals: Vec<f64>,
}

impl RegressionResult {
    pub fn coef(&self, term: &str) -> Option<f64> {
        self.coefficients.get(term).copied()
    }

    pub fn se(&self, term: &str) -> Option<f64> {
        self.std_errors.get(term).copied()
    }

    pub fn t_stat(&self, term: &str) -> Option<f64> {
        let c = self.coef(term)?;
        let s = self.se(term)?;
        if s == 0.0 {
            None
        } else {
            Some(c / s)
        }
    }

    /// Emits `term,coef,se,tstat` rows followed by `n_obs` and `adj_r2`
    /// summary rows.
    pub fn write_csv<W: io::Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "term,coef,se,tstat")?;
        for term in &self.terms {
            let coef = self.coefficients[term];
            let se = self.std_errors[term];
            if se == 0.0 {
                writeln!(w, "{term},{coef},{se},")?;
            } else {
                writeln!(w, "{term},{coef},{se},{}", coef / se)?;
            }
        }
        writeln!(w, "n_obs,{},,", self.n_obs)?;
        writeln!(w, "adj_r2,{},,", self.adj_r2)?;
        Ok(())
    }
}

/// Core least-squares solver via Householder QR. `names` labels the design
/// columns and must match its width.
pub fn ols(
    design: &DMatrix<f64>,
    y: &DVector<f64>,
    names: &[String],
    cov: CovarianceType,
) -> Result<RegressionResult, EconError> {
    let n = design.nrows();
    let p = design.ncols();
    if names.len() != p {
        return Err(EconError::InvalidSpec(format!(
            "{} names for {p} columns",
            names.len()
        )));
    }
    if y.len() != n {
        return Err(EconError::LengthMismatch(n, y.len()));
    }
    if n < p {
        return Err(EconError::TooFewRows { rows: n, cols: p });
    }

    let qr = design.clone().qr();
    let r = qr.r();
    let max_diag = (0..p).map(|i| r[(i, i)].abs()).fold(0.0f64, f64::max);
    let tol = f64::EPSILON * (n.max(p) as f64) * max_diag.max(1e-300);
    for i in 0..p {
        if r[(i, i)].abs() <= tol {
            return Err(EconError::RankDeficient {
                index: i,
                term: names[i].clone(),
            });
        }
    }
    let qty = qr.q().transpose() * y;
    let beta = r
        .solve_upper_triangular(&qty)
        .ok_or(EconError::RankDeficient {
            index: 0,
            term: names[0].clone(),
        })?;

    let fitted = design * &beta;
    let residuals = y - &fitted;
    let rss: f64 = residuals.iter().map(|e| e * e).sum();
    let dof = (n - p) as f64;

    // (X'X)^-1 = R^-1 R^-T
    let r_inv = r
        .try_inverse()
        .ok_or(EconError::RankDeficient {
            index: 0,
            term: names[0].clone(),
        })?;
    let xtx_inv = &r_inv * r_inv.transpose();
    let cov_matrix = match cov {
        CovarianceType::Classical => {
            let sigma2 = if dof > 0.0 { rss / dof } else { 0.0 };
            xtx_inv * sigma2
        }
        CovarianceType::Hc1 => {
            // X' diag(e^2) X with the small-sample n/(n-p) correction
            let mut meat = DMatrix::zeros(p, p);
            for row in 0..n {
                let x_row = design.row(row).transpose();
                let e2 = residuals[row] * residuals[row];
                meat += &x_row * x_row.transpose() * e2;
            }
            let scale = if dof > 0.0 { n as f64 / dof } else { 0.0 };
            &xtx_inv * meat * &xtx_inv * scale
        }
    };

    let mean_y = y.iter().sum::<f64>() / n as f64;
    let tss: f64 = y.iter().map(|v| (v - mean_y).powi(2)).sum();
    let adj_r2 = if tss > 0.0 && n > p {
        let r2 = 1.0 - rss / tss;
        1.0 - (1.0 - r2) * (n as f64 - 1.0) / dof
    } else {
        0.0
    };

    let coefficients: BTreeMap<String, f64> = names
        .iter()
        .cloned()
        .zip(beta.iter().copied())
        .collect();
    let std_errors: BTreeMap<String, f64> = names
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, name)| (name, cov_matrix[(i, i)].max(0.0).sqrt()))
        .collect();

    Ok(RegressionResult {
        terms: names.to_vec(),
        coefficients,
        std_errors,
        n_obs: n,
        adj_r2,
        residuals: residuals.iter().copied().collect(),
    })
}

/// Regression of simulated like counts on the opponent dummy:
/// `likes = alpha + beta * opponents + e`.
pub fn simulated_regression(dyads: &[(f64, bool)]) -> Result<RegressionResult, EconError> {
    if dyads.len() < 3 {
        return Err(EconError::TooFewRows {
            rows: dyads.len(),
            cols: 2,
        });
    }
    let first = dyads[0].1;
    if dyads.iter().all(|d| d.1 == first) {
        return Err(EconError::NoVariation("opponents".into()));
    }
    let n = dyads.len();
    let design = DMatrix::from_fn(n, 2, |r, c| match c {
        0 => 1.0,
        _ => f64::from(u8::from(dyads[r].1)),
    });
    let y = DVector::from_iterator(n, dyads.iter().map(|d| d.0));
    ols(
        &design,
        &y,
        &["const".to_string(), "opponents".to_string()],
        CovarianceType::Classical,
    )
}

/// One dyad-period observation of the interaction panel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PanelRow {
    pub i: String,
    pub j: String,
    pub t: String,
    pub likes: u64,
    pub votes: u64,
    pub opponents: bool,
    pub following: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dependent {
    Likes,
    Votes,
}

impl Dependent {
    fn value(&self, row: &PanelRow) -> f64 {
        match self {
            Dependent::Likes => row.likes as f64,
            Dependent::Votes => row.votes as f64,
        }
    }
}

/// Regressors available to the panel specification.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Term {
    Opponents,
    Following,
    Likes,
    LikesSq,
    LikesOpp,
    LikesSqOpp,
}

impl Term {
    pub fn name(&self) -> &'static str {
        match self {
            Term::Opponents => "opponents",
            Term::Following => "following",
            Term::Likes => "likes",
            Term::LikesSq => "likes_sq",
            Term::LikesOpp => "likes_x_opp",
            Term::LikesSqOpp => "likes_sq_x_opp",
        }
    }

    fn value(&self, row: &PanelRow) -> f64 {
        let likes = row.likes as f64;
        let opp = f64::from(u8::from(row.opponents));
        match self {
            Term::Opponents => opp,
            Term::Following => f64::from(u8::from(row.following)),
            Term::Likes => likes,
            Term::LikesSq => likes * likes,
            Term::LikesOpp => likes * opp,
            Term::LikesSqOpp => likes * likes * opp,
        }
    }
}

fn validate_terms(terms: &[Term]) -> Result<(), EconError> {
    for (idx, t) in terms.iter().enumerate() {
        if terms[..idx].contains(t) {
            return Err(EconError::InvalidSpec(format!(
                "term `{}` listed twice",
                t.name()
            )));
        }
    }
    let has = |t: Term| terms.contains(&t);
    if has(Term::LikesSq) && !has(Term::Likes) {
        return Err(EconError::InvalidSpec(
            "likes_sq requires likes in the spec".into(),
        ));
    }
    if has(Term::LikesSqOpp) && !has(Term::LikesOpp) {
        return Err(EconError::InvalidSpec(
            "likes_sq_x_opp requires likes_x_opp in the spec".into(),
        ));
    }
    Ok(())
}

/// Two-way fixed-effects regression: dependent on the given regressors plus
/// entity (politician `i`) and period dummies, first group dropped from
/// each. Needs at least two entities and two periods.
pub fn panel_fe_regression(
    panel: &[PanelRow],
    dependent: Dependent,
    terms: &[Term],
    cov: CovarianceType,
) -> Result<RegressionResult, EconError> {
    validate_terms(terms)?;
    let mut entities: Vec<&str> = panel.iter().map(|r| r.i.as_str()).collect();
    entities.sort_unstable();
    entities.dedup();
    let mut periods: Vec<&str> = panel.iter().map(|r| r.t.as_str()).collect();
    periods.sort_unstable();
    periods.dedup();
    if entities.len() < 2 || periods.len() < 2 {
        return Err(EconError::InvalidSpec(format!(
            "panel needs >= 2 entities and >= 2 periods, got {} and {}",
            entities.len(),
            periods.len()
        )));
    }

    let n = panel.len();
    let mut names: Vec<String> = vec!["const".to_string()];
    names.extend(terms.iter().map(|t| t.name().to_string()));
    names.extend(entities[1..].iter().map(|e| format!("fe_i:{e}")));
    names.extend(periods[1..].iter().map(|t| format!("fe_t:{t}")));
    let p = names.len();

    let entity_pos: BTreeMap<&str, usize> = entities
        .iter()
        .enumerate()
        .map(|(k, &e)| (e, k))
        .collect();
    let period_pos: BTreeMap<&str, usize> = periods
        .iter()
        .enumerate()
        .map(|(k, &t)| (t, k))
        .collect();

    let mut design = DMatrix::zeros(n, p);
    for (row_idx, row) in panel.iter().enumerate() {
        design[(row_idx, 0)] = 1.0;
        for (k, term) in terms.iter().enumerate() {
            design[(row_idx, 1 + k)] = term.value(row);
        }
        let e = entity_pos[row.i.as_str()];
        if e > 0 {
            design[(row_idx, 1 + terms.len() + e - 1)] = 1.0;
        }
        let t = period_pos[row.t.as_str()];
        if t > 0 {
            design[(row_idx, 1 + terms.len() + entities.len() - 1 + t - 1)] = 1.0;
        }
    }
    let y = DVector::from_iterator(n, panel.iter().map(|r| dependent.value(r)));
    ols(&design, &y, &names, cov)
}

/// First principal component of two standardized variables.
#[derive(Debug, Clone)]
pub struct Pc1 {
    /// Per-observation component scores.
    pub scores: Vec<f64>,
    /// Loadings on (xs, ys); the xs loading is normalized positive.
    pub loadings: [f64; 2],
    /// Share of total variance captured.
    pub explained: f64,
}

fn standardize(v: &[f64]) -> Result<Vec<f64>, EconError> {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    if var <= 0.0 {
        return Err(EconError::ZeroVariance);
    }
    let sd = var.sqrt();
    Ok(v.iter().map(|x| (x - mean) / sd).collect())
}

/// Scores of the first principal component of the standardized two-column
/// data, sign-normalized so the loading on `xs` is positive.
pub fn pc1(xs: &[f64], ys: &[f64]) -> Result<Pc1, EconError> {
    if xs.len() != ys.len() {
        return Err(EconError::LengthMismatch(xs.len(), ys.len()));
    }
    if xs.len() < 2 {
        return Err(EconError::TooFewRows {
            rows: xs.len(),
            cols: 2,
        });
    }
    let zx = standardize(xs)?;
    let zy = standardize(ys)?;
    let n = xs.len() as f64;
    let r: f64 = zx.iter().zip(&zy).map(|(a, b)| a * b).sum::<f64>() / (n - 1.0);

    let corr = nalgebra::Matrix2::new(1.0, r, r, 1.0);
    let eigen = nalgebra::SymmetricEigen::new(corr);
    let (top, _) = eigen
        .eigenvalues
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
        .map(|(i, &v)| (i, v))
        .unwrap();
    let lambda = eigen.eigenvalues[top];
    let mut v = [eigen.eigenvectors[(0, top)], eigen.eigenvectors[(1, top)]];
    if v[0] < 0.0 || (v[0] == 0.0 && v[1] < 0.0) {
        v = [-v[0], -v[1]];
    }
    let scores = zx
        .iter()
        .zip(&zy)
        .map(|(a, b)| a * v[0] + b * v[1])
        .collect();
    Ok(Pc1 {
        scores,
        loadings: v,
        explained: lambda / 2.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn design_from(cols: &[Vec<f64>]) -> DMatrix<f64> {
        let n = cols[0].len();
        DMatrix::from_fn(n, cols.len(), |r, c| cols[c][r])
    }

    fn names(labels: &[&str]) -> Vec<String> {
        labels.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn exact_fit_recovers_line() {
        let x = vec![1.0, 2.0, 3.0, 4.0, 5.0];
        let y: Vec<f64> = x.iter().map(|v| 2.0 * v + 1.0).collect();
        let design = design_from(&[vec![1.0; 5], x]);
        let res = ols(
            &design,
            &DVector::from_vec(y),
            &names(&["const", "x"]),
            CovarianceType::Classical,
        )
        .unwrap();
        assert_abs_diff_eq!(res.coefficients["x"], 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(res.coefficients["const"], 1.0, epsilon = 1e-12);
        for e in &res.residuals {
            assert_abs_diff_eq!(*e, 0.0, epsilon = 1e-10);
        }
        assert_abs_diff_eq!(res.adj_r2, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn orthogonal_outcome_gets_zero_slope() {
        // x demeaned, y orthogonal to it
        let x = vec![-2.0, -1.0, 0.0, 1.0, 2.0];
        let y = vec![1.0, -1.0, 0.0, -1.0, 1.0]; // dot(x, y) = 0
        let design = design_from(&[vec![1.0; 5], x]);
        let res = ols(
            &design,
            &DVector::from_vec(y),
            &names(&["const", "x"]),
            CovarianceType::Classical,
        )
        .unwrap();
        assert_abs_diff_eq!(res.coefficients["x"], 0.0, epsilon = 1e-12);
    }

    /// Independent normal-equations route: beta = (X'X)^-1 X'y.
    fn normal_equations(design: &DMatrix<f64>, y: &DVector<f64>) -> DVector<f64> {
        let xtx = design.transpose() * design;
        let xty = design.transpose() * y;
        xtx.try_inverse().unwrap() * xty
    }

    #[test]
    fn matches_normal_equations_oracle() {
        let design = design_from(&[
            vec![1.0, 1.0, 1.0, 1.0, 1.0],
            vec![0.3, -1.2, 2.5, 0.7, -0.4],
            vec![1.1, 0.2, -0.9, 2.2, 0.5],
        ]);
        let y = DVector::from_vec(vec![2.0, -0.5, 4.4, 3.1, 0.9]);
        let res = ols(
            &design,
            &y,
            &names(&["const", "a", "b"]),
            CovarianceType::Classical,
        )
        .unwrap();
        let oracle = normal_equations(&design, &y);
        assert_abs_diff_eq!(res.coefficients["const"], oracle[0], epsilon = 1e-10);
        assert_abs_diff_eq!(res.coefficients["a"], oracle[1], epsilon = 1e-10);
        assert_abs_diff_eq!(res.coefficients["b"], oracle[2], epsilon = 1e-10);
    }

    #[test]
    fn duplicate_column_is_rank_deficient() {
        let x = vec![0.3, -1.2, 2.5, 0.7, -0.4];
        let design = design_from(&[vec![1.0; 5], x.clone(), x]);
        let err = ols(
            &design,
            &DVector::from_vec(vec![1.0, 2.0, 3.0, 4.0, 5.0]),
            &names(&["const", "a", "a_again"]),
            CovarianceType::Classical,
        )
        .unwrap_err();
        match err {
            EconError::RankDeficient { term, .. } => assert_eq!(term, "a_again"),
            other => panic!("expected RankDeficient, got {other:?}"),
        }
    }

    #[test]
    fn hc1_errors_stay_finite_and_positive() {
        let design = design_from(&[
            vec![1.0; 6],
            vec![0.0, 1.0, 2.0, 3.0, 4.0, 5.0],
        ]);
        let y = DVector::from_vec(vec![0.1, 1.4, 1.9, 3.3, 3.8, 5.4]);
        let res = ols(
            &design,
            &y,
            &names(&["const", "x"]),
            CovarianceType::Hc1,
        )
        .unwrap();
        assert!(res.std_errors["x"] > 0.0);
        assert!(res.std_errors["x"].is_finite());
    }

    #[test]
    fn simulated_regression_on_constant_likes() {
        let dyads: Vec<(f64, bool)> = vec![(3.0, false), (3.0, true), (3.0, false), (3.0, true)];
        let res = simulated_regression(&dyads).unwrap();
        assert_abs_diff_eq!(res.coefficients["opponents"], 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(res.coefficients["const"], 3.0, epsilon = 1e-12);
    }

    #[test]
    fn simulated_regression_intercept_is_mean_of_friendly_dyads() {
        let dyads = vec![
            (10.0, false),
            (14.0, false),
            (0.0, true),
            (2.0, true),
            (1.0, true),
        ];
        let res = simulated_regression(&dyads).unwrap();
        assert_abs_diff_eq!(res.coefficients["const"], 12.0, epsilon = 1e-10);
        assert_abs_diff_eq!(res.coefficients["opponents"], 1.0 - 12.0, epsilon = 1e-10);
    }

    #[test]
    fn simulated_regression_needs_variation() {
        let dyads = vec![(1.0, true), (2.0, true), (3.0, true)];
        assert!(matches!(
            simulated_regression(&dyads),
            Err(EconError::NoVariation(_))
        ));
    }

    fn synthetic_panel(slopes: bool) -> Vec<PanelRow> {
        // 4 entities x 3 partners x 3 periods; planted coefficients when
        // slopes is true, pure entity/time effects otherwise. Outcomes are
        // shifted and scaled by 1000 so votes stays an exact integer.
        let entity_effect = [0.0, 5.0, -3.0, 1.5];
        let time_effect = [0.0, 2.0, -1.0];
        let mut rows = Vec::new();
        let mut wiggle = 0u64;
        for (ei, e) in ["a", "b", "c", "d"].iter().enumerate() {
            for j in ["x", "y", "z"] {
                for (ti, t) in ["t1", "t2", "t3"].iter().enumerate() {
                    wiggle = (wiggle * 31 + 17) % 23;
                    let likes = wiggle % 11;
                    let opponents = (ei + usize::from(j == "y")) % 2 == 0;
                    let following = (ei + ti) % 2 == 0;
                    let base = entity_effect[ei] + time_effect[ti];
                    let lf = likes as f64;
                    let y = if slopes {
                        base - 0.3 * lf
                            + 0.002 * lf * lf
                            + 1.5 * lf * f64::from(u8::from(opponents))
                    } else {
                        base
                    };
                    rows.push(PanelRow {
                        i: e.to_string(),
                        j: j.to_string(),
                        t: t.to_string(),
                        likes,
                        votes: ((y + 10.0) * 1000.0).round() as u64,
                        opponents,
                        following,
                    });
                }
            }
        }
        rows
    }

    #[test]
    fn pure_fixed_effects_leave_zero_slopes() {
        let panel = synthetic_panel(false);
        let res = panel_fe_regression(
            &panel,
            Dependent::Votes,
            &[Term::Likes, Term::Opponents, Term::Following],
            CovarianceType::Classical,
        )
        .unwrap();
        assert_abs_diff_eq!(res.coefficients["likes"], 0.0, epsilon = 1e-8);
        assert_abs_diff_eq!(res.coefficients["opponents"], 0.0, epsilon = 1e-8);
        assert_abs_diff_eq!(res.coefficients["following"], 0.0, epsilon = 1e-8);
    }

    #[test]
    fn planted_panel_coefficients_are_recovered() {
        let panel = synthetic_panel(true);
        let res = panel_fe_regression(
            &panel,
            Dependent::Votes,
            &[Term::Likes, Term::LikesSq, Term::LikesOpp],
            CovarianceType::Classical,
        )
        .unwrap();
        // outcomes were scaled by 1000 to stay integer-exact
        assert_abs_diff_eq!(res.coefficients["likes"], -300.0, epsilon = 1e-6);
        assert_abs_diff_eq!(res.coefficients["likes_sq"], 2.0, epsilon = 1e-6);
        assert_abs_diff_eq!(res.coefficients["likes_x_opp"], 1500.0, epsilon = 1e-6);
    }

    #[test]
    fn panel_is_row_order_invariant() {
        let panel = synthetic_panel(true);
        let mut reversed = panel.clone();
        reversed.reverse();
        let spec = [Term::Likes, Term::Opponents];
        let a =
            panel_fe_regression(&panel, Dependent::Votes, &spec, CovarianceType::Classical)
                .unwrap();
        let b = panel_fe_regression(
            &reversed,
            Dependent::Votes,
            &spec,
            CovarianceType::Classical,
        )
        .unwrap();
        for term in &a.terms {
            assert_abs_diff_eq!(
                a.coefficients[term],
                b.coefficients[term],
                epsilon = 1e-8
            );
        }
    }

    #[test]
    fn spec_hierarchy_is_enforced() {
        let panel = synthetic_panel(true);
        assert!(matches!(
            panel_fe_regression(
                &panel,
                Dependent::Votes,
                &[Term::LikesSq],
                CovarianceType::Classical
            ),
            Err(EconError::InvalidSpec(_))
        ));
        assert!(matches!(
            panel_fe_regression(
                &panel,
                Dependent::Votes,
                &[Term::Likes, Term::LikesSq, Term::LikesSqOpp],
                CovarianceType::Classical
            ),
            Err(EconError::InvalidSpec(_))
        ));
    }

    #[test]
    fn shifting_outcome_moves_only_the_intercept() {
        let design = design_from(&[
            vec![1.0; 6],
            vec![0.3, -1.2, 2.5, 0.7, -0.4, 1.8],
        ]);
        let y = DVector::from_vec(vec![2.0, -0.5, 4.4, 3.1, 0.9, 2.2]);
        let shifted = y.map(|v| v + 100.0);
        let labels = names(&["const", "x"]);
        let a = ols(&design, &y, &labels, CovarianceType::Classical).unwrap();
        let b = ols(&design, &shifted, &labels, CovarianceType::Classical).unwrap();
        assert_abs_diff_eq!(
            a.coefficients["x"],
            b.coefficients["x"],
            epsilon = 1e-10
        );
        assert_abs_diff_eq!(
            b.coefficients["const"] - a.coefficients["const"],
            100.0,
            epsilon = 1e-10
        );
    }

    #[test]
    fn pc1_of_identical_columns_explains_everything() {
        let xs = vec![1.0, 2.0, 3.0, 4.0];
        let out = pc1(&xs, &xs).unwrap();
        assert_abs_diff_eq!(out.explained, 1.0, epsilon = 1e-12);
        // scores proportional to standardized xs with factor sqrt(2)
        let zx = super::standardize(&xs).unwrap();
        for (s, z) in out.scores.iter().zip(&zx) {
            assert_abs_diff_eq!(*s, z * 2.0f64.sqrt(), epsilon = 1e-10);
        }
    }

    #[test]
    fn pc1_matches_closed_form_oracle() {
        let xs = vec![0.5, 2.0, 3.5, 1.0];
        let ys = vec![4.0, 1.0, 2.5, 3.0];
        let out = pc1(&xs, &ys).unwrap();
        // closed form for a 2x2 correlation matrix: top eigenvector is
        // (1, 1)/sqrt(2) when r > 0 and (1, -1)/sqrt(2) when r < 0
        let zx = super::standardize(&xs).unwrap();
        let zy = super::standardize(&ys).unwrap();
        let r: f64 =
            zx.iter().zip(&zy).map(|(a, b)| a * b).sum::<f64>() / (xs.len() as f64 - 1.0);
        let sign = if r >= 0.0 { 1.0 } else { -1.0 };
        let inv_sqrt2 = 1.0 / 2.0f64.sqrt();
        assert_abs_diff_eq!(out.loadings[0], inv_sqrt2, epsilon = 1e-10);
        assert_abs_diff_eq!(out.loadings[1], sign * inv_sqrt2, epsilon = 1e-10);
        assert_abs_diff_eq!(out.explained, (1.0 + r.abs()) / 2.0, epsilon = 1e-10);
        for ((s, a), b) in out.scores.iter().zip(&zx).zip(&zy) {
            assert_abs_diff_eq!(*s, (a + sign * b) * inv_sqrt2, epsilon = 1e-10);
        }
    }

    #[test]
    fn pc1_rejects_degenerate_input() {
        assert!(matches!(
            pc1(&[1.0, 1.0, 1.0], &[1.0, 2.0, 3.0]),
            Err(EconError::ZeroVariance)
        ));
        assert!(matches!(
            pc1(&[1.0, 2.0], &[1.0]),
            Err(EconError::LengthMismatch(2, 1))
        ));
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            /// Residuals are orthogonal to every design column.
            #[test]
            fn residuals_orthogonal_to_design(
                xs in proptest::collection::vec(-10.0f64..10.0, 8..30),
                ys_seed in proptest::collection::vec(-10.0f64..10.0, 8..30),
            ) {
                let n = xs.len().min(ys_seed.len());
                prop_assume!(n >= 8);
                let xs = &xs[..n];
                let ys = &ys_seed[..n];
                prop_assume!(xs.iter().any(|&v| (v - xs[0]).abs() > 1e-6));
                let design = DMatrix::from_fn(n, 2, |r, c| if c == 0 { 1.0 } else { xs[r] });
                let y = DVector::from_iterator(n, ys.iter().copied());
                let res = ols(
                    &design,
                    &y,
                    &super::names(&["const", "x"]),
                    CovarianceType::Classical,
                ).unwrap();
                let scale = y.iter().map(|v| v.abs()).fold(1.0, f64::max);
                for c in 0..2 {
                    let dot: f64 = (0..n).map(|r| design[(r, c)] * res.residuals[r]).sum();
                    prop_assert!(dot.abs() < 1e-8 * scale * n as f64);
                }
            }
        }
    }
}
