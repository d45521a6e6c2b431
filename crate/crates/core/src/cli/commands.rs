//! The five subcommands. Every command validates its inputs, runs the
//! relevant modules, writes outputs atomically (temp file + rename) and
//! echoes the fully resolved configuration as a manifest so the run can be
//! reproduced byte for byte.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use crate::calibration;
use crate::econometrics::{
    panel_fe_regression, pc1, simulated_regression, CovarianceType, Dependent, EconError,
    RegressionResult, Term,
};
use crate::ideology;
use crate::ingest::{self, GroupFilter, Metric, Panel};
use crate::netsci::{
    correlation_network, modularity, to_dot, to_graphml, CommunityMethod, Partition,
    WeightedGraph,
};
use crate::signaling::{dyad_table, simulate, write_dyads, GammaMode, LikeMatrix};
use crate::spatial::make_electorate;

use super::config::{require_exists, Resolved};
use super::CliError;

/// Column specifications of the interaction regression table, in column
/// order: (1)-(3) likes on affiliation controls, (4)-(6) votes on the same,
/// (7)-(9) votes on likes with interactions and the quadratic.
pub fn interaction_table_specs() -> Vec<(Dependent, Vec<Term>)> {
    vec![
        (Dependent::Likes, vec![Term::Opponents]),
        (Dependent::Likes, vec![Term::Following]),
        (Dependent::Likes, vec![Term::Opponents, Term::Following]),
        (Dependent::Votes, vec![Term::Opponents]),
        (Dependent::Votes, vec![Term::Following]),
        (Dependent::Votes, vec![Term::Opponents, Term::Following]),
        (Dependent::Votes, vec![Term::Likes, Term::Following]),
        (
            Dependent::Votes,
            vec![Term::Likes, Term::LikesOpp, Term::Following, Term::Opponents],
        ),
        (
            Dependent::Votes,
            vec![
                Term::Likes,
                Term::LikesSq,
                Term::LikesOpp,
                Term::LikesSqOpp,
                Term::Following,
                Term::Opponents,
            ],
        ),
    ]
}

fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    let file_name = path
        .file_name()
        .ok_or_else(|| CliError::Internal(format!("bad output path {}", path.display())))?;
    let tmp = path.with_file_name(format!("{}.tmp", file_name.to_string_lossy()));
    std::fs::write(&tmp, bytes)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

fn write_manifest(resolved: &Resolved, path: &Path) -> Result<(), CliError> {
    write_atomic(path, resolved.manifest_toml()?.as_bytes())
}

/// Survey -> per-politician ideology estimates CSV.
pub fn cmd_estimate_ideology(resolved: &Resolved) -> Result<(), CliError> {
    let survey_path = resolved
        .inputs
        .survey
        .as_ref()
        .ok_or_else(|| CliError::Config("estimate-ideology needs --survey".into()))?;
    require_exists(survey_path)?;
    let out = resolved
        .out_file
        .clone()
        .unwrap_or_else(|| resolved.out_dir.join("estimates.csv"));

    let survey = ideology::read_survey_file(survey_path)?;
    let estimates = ideology::estimate_survey(&survey)?;
    let mut buf = Vec::new();
    ideology::write_estimates(&mut buf, &estimates).map_err(|e| CliError::Internal(e.to_string()))?;
    write_atomic(&out, &buf)?;
    write_manifest(resolved, &manifest_sibling(&out))?;
    println!("estimated {} politicians -> {}", estimates.len(), out.display());
    Ok(())
}

fn manifest_sibling(out_file: &Path) -> PathBuf {
    let name = out_file
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| "out".into());
    out_file.with_file_name(format!("{name}.manifest.toml"))
}

fn network_artifacts(
    labels: &[String],
    matrix: &[Vec<f64>],
    theta: f64,
    method: CommunityMethod,
    seed: u64,
) -> Result<(WeightedGraph, Partition, f64), CliError> {
    let graph = correlation_network(labels, matrix, theta)?;
    let partition = method.detect(&graph, seed)?;
    let q = modularity(&graph, &partition)?;
    Ok((graph, partition, q))
}

fn write_network_files(
    dir: &Path,
    stem: &str,
    graph: &WeightedGraph,
    partition: &Partition,
) -> Result<(), CliError> {
    write_atomic(
        &dir.join(format!("{stem}.graphml")),
        to_graphml(graph, Some(partition)).as_bytes(),
    )?;
    write_atomic(
        &dir.join(format!("{stem}.dot")),
        to_dot(graph, Some(partition)).as_bytes(),
    )?;
    Ok(())
}

fn modularity_csv(rows: &[(String, CommunityMethod, f64)]) -> String {
    let mut out = String::from("label,method,Q\n");
    for (label, method, q) in rows {
        out.push_str(&format!("{label},{method},{q}\n"));
    }
    out
}

fn regression_csv(result: &RegressionResult) -> Result<Vec<u8>, CliError> {
    let mut buf = Vec::new();
    result
        .write_csv(&mut buf)
        .map_err(|e| CliError::Internal(e.to_string()))?;
    Ok(buf)
}

/// Calibrated simulation: baseline run (plus optional homogeneous-gamma
/// sweep), like matrices, dyad table, the dyad regression, residual/PC
/// export, graph exports and the modularity series.
pub fn cmd_simulate(resolved: &Resolved) -> Result<(), CliError> {
    let dir = &resolved.out_dir;
    std::fs::create_dir_all(dir)?;
    let electorate = make_electorate(&resolved.electorate)?;
    let cast = &resolved.politicians;
    let sim = resolved.simulation_config();

    let run = simulate(cast, &electorate, &sim)?;

    let mut cast_csv = Vec::new();
    calibration::write_politicians(&mut cast_csv, cast)?;
    write_atomic(&dir.join("politicians.csv"), &cast_csv)?;

    let mut likes_csv = Vec::new();
    run.likes.write_csv(&mut likes_csv)?;
    write_atomic(&dir.join("likes.csv"), &likes_csv)?;

    let dyads = dyad_table(&run.likes, cast);
    let mut dyads_csv = Vec::new();
    write_dyads(&mut dyads_csv, &dyads)?;
    write_atomic(&dir.join("dyads.csv"), &dyads_csv)?;

    let pairs: Vec<(f64, bool)> = dyads
        .iter()
        .map(|d| (f64::from(d.likes), d.opponents))
        .collect();
    let regression = simulated_regression(&pairs)?;
    write_atomic(&dir.join("regression.csv"), &regression_csv(&regression)?)?;

    // residual vs first principal component of (ideology, authenticity);
    // meaningful only when authenticity varies across the cast
    let mus: Vec<f64> = cast.iter().map(|p| p.mu).collect();
    if let Ok(pc) = pc1(&mus, &run.gammas) {
        let mut out = String::from("liker_id,sender_id,residual,pc1_liker,pc1_sender\n");
        let n = cast.len();
        for (row, d) in dyads.iter().enumerate() {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                d.liker,
                d.sender,
                regression.residuals[row],
                pc.scores[row / n],
                pc.scores[row % n],
            ));
        }
        write_atomic(&dir.join("residual_pc.csv"), out.as_bytes())?;
    }

    let (graph, partition, baseline_q) = network_artifacts(
        &run.likes.ids,
        &run.likes.as_f64(),
        resolved.theta,
        resolved.method,
        resolved.seed,
    )?;
    write_network_files(dir, "network", &graph, &partition)?;

    let mut q_rows: Vec<(String, CommunityMethod, f64)> = Vec::new();
    if resolved.gamma_sweep.is_empty() {
        q_rows.push(("baseline".into(), resolved.method, baseline_q));
    } else {
        for &gamma in &resolved.gamma_sweep {
            let mut sweep_sim = sim.clone();
            sweep_sim.gamma_mode = GammaMode::Homogeneous { gamma };
            let sweep_run = simulate(cast, &electorate, &sweep_sim)?;
            let label = format!("{gamma}");

            let mut csv = Vec::new();
            sweep_run.likes.write_csv(&mut csv)?;
            write_atomic(&dir.join(format!("likes_gamma_{label}.csv")), &csv)?;

            let (g, p, q) = network_artifacts(
                &sweep_run.likes.ids,
                &sweep_run.likes.as_f64(),
                resolved.theta,
                resolved.method,
                resolved.seed,
            )?;
            write_network_files(dir, &format!("network_gamma_{label}"), &g, &p)?;
            q_rows.push((label, resolved.method, q));
        }
    }
    write_atomic(&dir.join("modularity.csv"), modularity_csv(&q_rows).as_bytes())?;

    write_manifest(resolved, &dir.join("manifest.toml"))?;
    println!(
        "simulated {} politicians, {} likes -> {}",
        cast.len(),
        run.likes.total(),
        dir.display()
    );
    Ok(())
}

fn load_panel_from(resolved: &Resolved) -> Result<(Panel, ingest::JoinReport), CliError> {
    let need = |field: &Option<PathBuf>, name: &str| -> Result<PathBuf, CliError> {
        let path = field
            .clone()
            .ok_or_else(|| CliError::Config(format!("missing --{name}")))?;
        require_exists(&path)?;
        Ok(path)
    };
    let likes = need(&resolved.inputs.likes, "likes")?;
    let votes = need(&resolved.inputs.votes, "votes")?;
    let following = need(&resolved.inputs.following, "following")?;
    let coalitions = need(&resolved.inputs.coalitions, "coalitions")?;
    Ok(ingest::load_panel(&likes, &votes, &following, &coalitions)?)
}

fn ordered_periods(panel: &Panel, resolved: &Resolved) -> Result<Vec<String>, CliError> {
    let present: BTreeSet<String> = panel.rows.iter().map(|r| r.t.clone()).collect();
    match &resolved.inputs.periods {
        Some(path) => {
            require_exists(path)?;
            let specs = ingest::load_periods(path)?;
            let mut ordered: Vec<String> = specs
                .iter()
                .map(|s| s.label.clone())
                .filter(|l| present.contains(l))
                .collect();
            for label in &present {
                if !ordered.contains(label) {
                    ordered.push(label.clone());
                }
            }
            Ok(ordered)
        }
        None => Ok(present.into_iter().collect()),
    }
}

fn summary_csv(panel: &Panel) -> Result<Vec<u8>, CliError> {
    let mut blocks = ingest::summarize(&panel.rows, GroupFilter::All)?;
    blocks.extend(ingest::summarize(&panel.rows, GroupFilter::Opponents)?);
    let mut buf = Vec::new();
    ingest::write_summary(&mut buf, &blocks).map_err(|e| CliError::Internal(e.to_string()))?;
    Ok(buf)
}

/// Full empirical pipeline: panel ingestion, summary statistics, per-period
/// correlation networks and modularity, and the nine-column regression
/// table.
pub fn cmd_analyze(resolved: &Resolved) -> Result<(), CliError> {
    let dir = &resolved.out_dir;
    std::fs::create_dir_all(dir)?;
    let (panel, report) = load_panel_from(resolved)?;

    let mut report_text = Vec::new();
    report
        .write(&mut report_text)
        .map_err(|e| CliError::Internal(e.to_string()))?;
    write_atomic(&dir.join("join_report.txt"), &report_text)?;

    write_atomic(&dir.join("summary.csv"), &summary_csv(&panel)?)?;

    let periods = ordered_periods(&panel, resolved)?;
    let mut ids: Vec<String> = panel
        .rows
        .iter()
        .flat_map(|r| [r.i.clone(), r.j.clone()])
        .collect();
    ids.sort();
    ids.dedup();

    for metric in [Metric::Likes, Metric::Votes] {
        let mut q_rows = Vec::new();
        for period in &periods {
            let matrix = ingest::metric_matrix(&panel.rows, metric, period, &ids);
            let (graph, partition, q) = network_artifacts(
                &ids,
                &matrix,
                resolved.theta,
                resolved.method,
                resolved.seed,
            )?;
            write_network_files(dir, &format!("network_{metric}_{period}"), &graph, &partition)?;
            q_rows.push((period.clone(), resolved.method, q));
        }
        write_atomic(
            &dir.join(format!("modularity_{metric}.csv")),
            modularity_csv(&q_rows).as_bytes(),
        )?;
    }

    for (idx, (dependent, terms)) in interaction_table_specs().iter().enumerate() {
        let result = panel_fe_regression(
            &panel.rows,
            *dependent,
            terms,
            CovarianceType::Classical,
        )
        .map_err(|e: EconError| CliError::Estimation(format!("column {}: {e}", idx + 1)))?;
        write_atomic(
            &dir.join(format!("regression_{}.csv", idx + 1)),
            &regression_csv(&result)?,
        )?;
    }

    write_manifest(resolved, &dir.join("manifest.toml"))?;
    println!(
        "analyzed {} dyad-period rows over {} periods -> {}",
        panel.rows.len(),
        periods.len(),
        dir.display()
    );
    Ok(())
}

/// Summary statistics only.
pub fn cmd_summarize(resolved: &Resolved) -> Result<(), CliError> {
    let (panel, _) = load_panel_from(resolved)?;
    let out = resolved
        .out_file
        .clone()
        .unwrap_or_else(|| resolved.out_dir.join("summary.csv"));
    write_atomic(&out, &summary_csv(&panel)?)?;
    write_manifest(resolved, &manifest_sibling(&out))?;
    println!("summary -> {}", out.display());
    Ok(())
}

/// One interaction matrix -> thresholded network, communities, modularity.
pub fn cmd_network(resolved: &Resolved) -> Result<(), CliError> {
    let matrix_path = resolved
        .inputs
        .matrix
        .as_ref()
        .ok_or_else(|| CliError::Config("network needs --matrix".into()))?;
    require_exists(matrix_path)?;
    let dir = &resolved.out_dir;
    std::fs::create_dir_all(dir)?;

    let file = std::fs::File::open(matrix_path)?;
    let matrix = LikeMatrix::read_csv(file).map_err(CliError::Schema)?;
    let (graph, partition, q) = network_artifacts(
        &matrix.ids,
        &matrix.as_f64(),
        resolved.theta,
        resolved.method,
        resolved.seed,
    )?;
    write_network_files(dir, "network", &graph, &partition)?;
    write_atomic(
        &dir.join("modularity.csv"),
        modularity_csv(&[("network".into(), resolved.method, q)]).as_bytes(),
    )?;
    write_manifest(resolved, &dir.join("manifest.toml"))?;
    println!(
        "network: {} nodes, {} edges, Q = {q:.4} -> {}",
        graph.node_count(),
        graph.edge_count(),
        dir.display()
    );
    Ok(())
}
