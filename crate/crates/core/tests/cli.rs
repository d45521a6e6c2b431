//! End-to-end tests of the agora binary: exit codes, output cardinality,
//! manifest reruns and the generate-then-fit oracle for the regression
//! table.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::Command;

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_agora")
}

fn run_in(dir: &Path, args: &[&str]) -> (i32, String, String) {
    let out = Command::new(bin())
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

fn write(dir: &Path, name: &str, content: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, content).unwrap();
    path
}

// ------------------------------------------------------------------
// estimate-ideology
// ------------------------------------------------------------------

fn linear_survey() -> String {
    let mut csv = String::from("respondent_id,self_ideology,politician_id,opinion\n");
    for r in 0..30 {
        let ideology = [1, 3, 5][r % 3];
        for (pol, slope) in [("p1", 1.0f64), ("p2", -1.0), ("p3", 0.5)] {
            let opinion = 3.0 + slope * (ideology as f64 - 3.0);
            csv.push_str(&format!("r{r},{ideology},{pol},{opinion:.0}\n"));
        }
    }
    csv
}

#[test]
fn estimate_ideology_writes_one_row_per_politician() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "survey.csv", &linear_survey());
    let (code, _, _) = run_in(
        dir.path(),
        &["estimate-ideology", "--survey", "survey.csv", "--out", "estimates.csv"],
    );
    assert_eq!(code, 0);
    let text = std::fs::read_to_string(dir.path().join("estimates.csv")).unwrap();
    assert_eq!(text.lines().count(), 4); // header + 3 politicians
    assert!(dir.path().join("estimates.csv.manifest.toml").exists());
}

#[test]
fn estimate_ideology_schema_error_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "survey.csv", "respondent_id,politician_id,opinion\nr,p,1\n");
    let (code, _, stderr) = run_in(
        dir.path(),
        &["estimate-ideology", "--survey", "survey.csv", "--out", "x.csv"],
    );
    assert_eq!(code, 2);
    assert!(stderr.contains("self_ideology"));
}

#[test]
fn estimate_ideology_degenerate_survey_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "survey.csv",
        "respondent_id,self_ideology,politician_id,opinion\n\
         r1,2,p,1\nr2,2,p,3\nr3,2,p,5\nr4,2,q,1\nr5,2,q,2\nr6,2,q,3\n",
    );
    let (code, _, stderr) = run_in(
        dir.path(),
        &["estimate-ideology", "--survey", "survey.csv", "--out", "x.csv"],
    );
    assert_eq!(code, 3);
    assert!(stderr.contains("zero variance"));
}

// ------------------------------------------------------------------
// simulate
// ------------------------------------------------------------------

#[test]
fn simulate_sweep_writes_five_graphs_and_five_rows() {
    let dir = tempfile::tempdir().unwrap();
    let (code, _, stderr) = run_in(
        dir.path(),
        &[
            "simulate",
            "--seed",
            "7",
            "--messages",
            "60",
            "--gamma-sweep",
            "0,0.05,0.1,0.15,0.2",
            "--out-dir",
            "out",
        ],
    );
    assert_eq!(code, 0, "{stderr}");
    let out = dir.path().join("out");
    let graphs: Vec<_> = std::fs::read_dir(&out)
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .filter(|n| n.starts_with("network_gamma_") && n.ends_with(".graphml"))
        .collect();
    assert_eq!(graphs.len(), 5);
    let modularity = std::fs::read_to_string(out.join("modularity.csv")).unwrap();
    assert_eq!(modularity.lines().count(), 6); // header + 5 sweep rows
}

#[test]
fn simulate_heterogeneous_run_reports_opponents_term() {
    let dir = tempfile::tempdir().unwrap();
    let (code, _, stderr) = run_in(
        dir.path(),
        &[
            "simulate",
            "--gamma-mode",
            "heterogeneous",
            "--messages",
            "80",
            "--out-dir",
            "out",
        ],
    );
    assert_eq!(code, 0, "{stderr}");
    let regression = std::fs::read_to_string(dir.path().join("out/regression.csv")).unwrap();
    assert!(regression.lines().any(|l| l.starts_with("opponents,")));
    // heterogeneous gamma varies, so the residual/PC export must exist
    assert!(dir.path().join("out/residual_pc.csv").exists());
}

#[test]
fn simulate_rerun_from_manifest_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let (code, _, _) = run_in(
        dir.path(),
        &["simulate", "--seed", "3", "--messages", "40", "--out-dir", "out"],
    );
    assert_eq!(code, 0);
    let likes_first = std::fs::read(dir.path().join("out/likes.csv")).unwrap();
    let manifest_first = std::fs::read(dir.path().join("out/manifest.toml")).unwrap();
    let (code, _, _) = run_in(dir.path(), &["simulate", "--config", "out/manifest.toml"]);
    assert_eq!(code, 0);
    assert_eq!(likes_first, std::fs::read(dir.path().join("out/likes.csv")).unwrap());
    assert_eq!(
        manifest_first,
        std::fs::read(dir.path().join("out/manifest.toml")).unwrap()
    );
}

#[test]
fn simulate_rejects_bad_config_with_4() {
    let dir = tempfile::tempdir().unwrap();
    let (code, _, _) = run_in(dir.path(), &["simulate", "--theta", "2.0", "--out-dir", "o"]);
    assert_eq!(code, 4);
    let (code, _, _) = run_in(
        dir.path(),
        &["simulate", "--gamma", "0.1", "--gamma-mode", "heterogeneous", "--out-dir", "o"],
    );
    assert_eq!(code, 4);
    write(dir.path(), "bad.toml", "sead = 1\n");
    let (code, _, stderr) = run_in(dir.path(), &["simulate", "--config", "bad.toml"]);
    assert_eq!(code, 4);
    assert!(stderr.contains("sead"));
}

#[test]
fn config_file_values_are_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "run.toml",
        "seed = 5\n\n[simulation]\nmessages = 25\n",
    );
    let (code, _, _) = run_in(
        dir.path(),
        &["simulate", "--config", "run.toml", "--seed", "9", "--out-dir", "out"],
    );
    assert_eq!(code, 0);
    let manifest = std::fs::read_to_string(dir.path().join("out/manifest.toml")).unwrap();
    assert!(manifest.contains("seed = 9"), "{manifest}");
    assert!(manifest.contains("messages = 25"), "{manifest}");
}

// ------------------------------------------------------------------
// analyze / summarize / network
// ------------------------------------------------------------------

/// Panel generated from the full regression equation with integer-exact
/// coefficients (likes are multiples of 50).
struct PlantedPanel {
    beta: f64,
    lambda: f64,
    beta_opp: f64,
    lambda_opp: f64,
    follow_shift: f64,
    opp_shift: f64,
}

impl PlantedPanel {
    fn coefficients() -> Self {
        PlantedPanel {
            beta: -0.3,
            lambda: 0.002,
            beta_opp: 1.5,
            lambda_opp: 0.002,
            follow_shift: 2.0,
            opp_shift: 7.0,
        }
    }

    fn write(&self, dir: &Path) {
        let entities = ["a", "b", "c", "d", "e", "f"];
        let periods = ["t1", "t2", "t3"];
        let entity_effect = [0.0, 40.0, -25.0, 10.0, 65.0, -5.0];
        let time_effect = [0.0, 15.0, -10.0];
        let mut likes_csv = String::from("period,liker_id,target_id,likes\n");
        let mut votes_csv = String::from("period,i,j,votes_in_favor\n");
        let mut following_csv = String::from("i,j,follows\n");
        let mut coalition_csv = String::from("politician_id,coalition\n");
        for (ei, e) in entities.iter().enumerate() {
            coalition_csv.push_str(&format!("{e},{}\n", if ei % 2 == 0 { "A" } else { "B" }));
        }
        let mut state = 11u64;
        let mut follow_written = std::collections::BTreeSet::new();
        for (ei, e) in entities.iter().enumerate() {
            for (ji, j) in entities.iter().enumerate() {
                if ei == ji {
                    continue;
                }
                let opponents = ei % 2 != ji % 2;
                let following = (ei + ji) % 3 == 0;
                if follow_written.insert((ei, ji)) {
                    following_csv.push_str(&format!("{e},{j},{}\n", u8::from(following)));
                }
                for (ti, t) in periods.iter().enumerate() {
                    state = state
                        .wrapping_mul(6364136223846793005)
                        .wrapping_add(1442695040888963407);
                    let likes = 50 * ((state >> 33) % 5);
                    let lf = likes as f64;
                    let opp = f64::from(u8::from(opponents));
                    let y = 500.0
                        + entity_effect[ei]
                        + time_effect[ti]
                        + self.beta * lf
                        + self.lambda * lf * lf
                        + self.beta_opp * lf * opp
                        + self.lambda_opp * lf * lf * opp
                        + self.follow_shift * f64::from(u8::from(following))
                        + self.opp_shift * opp;
                    likes_csv.push_str(&format!("{t},{e},{j},{likes}\n"));
                    votes_csv.push_str(&format!("{t},{e},{j},{y:.0}\n"));
                }
            }
        }
        write(dir, "likes.csv", &likes_csv);
        write(dir, "votes.csv", &votes_csv);
        write(dir, "following.csv", &following_csv);
        write(dir, "coalitions.csv", &coalition_csv);
    }
}

fn read_regression(path: &Path) -> BTreeMap<String, f64> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .skip(1)
        .filter_map(|l| {
            let mut parts = l.split(',');
            let term = parts.next()?.to_string();
            let coef: f64 = parts.next()?.parse().ok()?;
            Some((term, coef))
        })
        .collect()
}

#[test]
fn analyze_writes_nine_regressions_and_recovers_planted_coefficients() {
    let dir = tempfile::tempdir().unwrap();
    let planted = PlantedPanel::coefficients();
    planted.write(dir.path());
    let (code, _, stderr) = run_in(
        dir.path(),
        &[
            "analyze",
            "--likes",
            "likes.csv",
            "--votes",
            "votes.csv",
            "--following",
            "following.csv",
            "--coalitions",
            "coalitions.csv",
            "--out-dir",
            "analysis",
        ],
    );
    assert_eq!(code, 0, "{stderr}");
    for k in 1..=9 {
        assert!(
            dir.path().join(format!("analysis/regression_{k}.csv")).exists(),
            "regression_{k}.csv missing"
        );
    }
    let col9 = read_regression(&dir.path().join("analysis/regression_9.csv"));
    assert!((col9["likes"] - planted.beta).abs() < 1e-6, "likes {}", col9["likes"]);
    assert!((col9["likes_sq"] - planted.lambda).abs() < 1e-6);
    assert!((col9["likes_x_opp"] - planted.beta_opp).abs() < 1e-6);
    assert!((col9["likes_sq_x_opp"] - planted.lambda_opp).abs() < 1e-6);
    assert!((col9["following"] - planted.follow_shift).abs() < 1e-6);
    assert!((col9["opponents"] - planted.opp_shift).abs() < 1e-6);
}

#[test]
fn analyze_identical_periods_have_identical_modularity() {
    let dir = tempfile::tempdir().unwrap();
    // two periods with exactly the same interaction pattern
    let mut likes_csv = String::from("period,liker_id,target_id,likes\n");
    let mut votes_csv = String::from("period,i,j,votes_in_favor\n");
    let ids = ["a", "b", "c", "d", "e", "f"];
    for t in ["t1", "t2"] {
        for (ii, i) in ids.iter().enumerate() {
            for (ji, j) in ids.iter().enumerate() {
                if ii == ji {
                    continue;
                }
                let same = (ii < 3) == (ji < 3);
                let likes = if same { 9 + ((ii * ji) % 4) } else { (ii + ji) % 3 };
                likes_csv.push_str(&format!("{t},{i},{j},{likes}\n"));
                votes_csv.push_str(&format!("{t},{i},{j},{}\n", 50 + likes * 3));
            }
        }
    }
    let mut following_csv = String::from("i,j,follows\n");
    for (ii, i) in ids.iter().enumerate() {
        for (ji, j) in ids.iter().enumerate() {
            if ii != ji {
                following_csv.push_str(&format!("{i},{j},{}\n", (ii + ji) % 2));
            }
        }
    }
    let mut coalition_csv = String::from("politician_id,coalition\n");
    for (k, i) in ids.iter().enumerate() {
        coalition_csv.push_str(&format!("{i},{}\n", if k < 3 { "A" } else { "B" }));
    }
    write(dir.path(), "likes.csv", &likes_csv);
    write(dir.path(), "votes.csv", &votes_csv);
    write(dir.path(), "following.csv", &following_csv);
    write(dir.path(), "coalitions.csv", &coalition_csv);
    let (code, _, stderr) = run_in(
        dir.path(),
        &[
            "analyze",
            "--likes",
            "likes.csv",
            "--votes",
            "votes.csv",
            "--following",
            "following.csv",
            "--coalitions",
            "coalitions.csv",
            "--out-dir",
            "analysis",
        ],
    );
    assert_eq!(code, 0, "{stderr}");
    let text =
        std::fs::read_to_string(dir.path().join("analysis/modularity_likes.csv")).unwrap();
    let qs: Vec<&str> = text
        .lines()
        .skip(1)
        .map(|l| l.rsplit(',').next().unwrap())
        .collect();
    assert_eq!(qs.len(), 2);
    assert_eq!(qs[0], qs[1]);
}

#[test]
fn summarize_writes_summary_csv() {
    let dir = tempfile::tempdir().unwrap();
    PlantedPanel::coefficients().write(dir.path());
    let (code, _, _) = run_in(
        dir.path(),
        &[
            "summarize",
            "--likes",
            "likes.csv",
            "--votes",
            "votes.csv",
            "--following",
            "following.csv",
            "--coalitions",
            "coalitions.csv",
            "--out",
            "summary.csv",
        ],
    );
    assert_eq!(code, 0);
    let text = std::fs::read_to_string(dir.path().join("summary.csv")).unwrap();
    assert!(text.starts_with("period,group,metric,n,mean,median,std_dev"));
    // 3 periods x 2 metrics x 2 groups
    assert_eq!(text.lines().count(), 1 + 12);
}

#[test]
fn network_scores_a_matrix_file() {
    let dir = tempfile::tempdir().unwrap();
    let mut matrix = String::from("liker_id,sender_id,likes\n");
    let ids = ["a", "b", "c", "d", "e", "f"];
    for (ii, i) in ids.iter().enumerate() {
        for (ji, j) in ids.iter().enumerate() {
            if ii == ji {
                continue;
            }
            let same = (ii < 3) == (ji < 3);
            matrix.push_str(&format!("{i},{j},{}\n", if same { 8 + ii } else { 0 }));
        }
    }
    write(dir.path(), "matrix.csv", &matrix);
    let (code, stdout, stderr) = run_in(
        dir.path(),
        &["network", "--matrix", "matrix.csv", "--out-dir", "net"],
    );
    assert_eq!(code, 0, "{stderr}");
    assert!(stdout.contains("Q ="));
    assert!(dir.path().join("net/network.graphml").exists());
    assert!(dir.path().join("net/network.dot").exists());
    let q_line = std::fs::read_to_string(dir.path().join("net/modularity.csv")).unwrap();
    let q: f64 = q_line.lines().nth(1).unwrap().rsplit(',').next().unwrap().parse().unwrap();
    assert!((q - 0.5).abs() < 1e-9, "two clean blocks should score 0.5, got {q}");
}

#[test]
fn missing_inputs_exit_4() {
    let dir = tempfile::tempdir().unwrap();
    let (code, _, _) = run_in(
        dir.path(),
        &["analyze", "--likes", "nope.csv", "--votes", "nope.csv", "--following", "nope.csv", "--coalitions", "nope.csv"],
    );
    assert_eq!(code, 4);
    let (code, _, _) = run_in(dir.path(), &["network", "--matrix", "absent.csv"]);
    assert_eq!(code, 4);
}
