use std::fs;
use std::path::Path;

use flexkit_harness::{read_trace_csv, run_benchmark, BenchmarkConfig};

fn config(dir: &Path, body: &str) -> BenchmarkConfig {
    let text = format!("[benchmark]\noutput = \"{}\"\n{body}", dir.display());
    BenchmarkConfig::from_toml(&text).unwrap()
}

const GRID: &str = r#"
problems = ["quadmm:n=6,omega=0.01", "bilinear:n=3", "cournot:n=4"]
methods = ["eg", "aa2", "prox"]
budget = 4000
seed = 11

[aa2]
method = "flex"
direction = "aa2"
memory = 5

[prox]
method = "proxflex"
direction = "residual"
"#;

fn files(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut out: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read(&p).unwrap()))
        .collect();
    out.sort();
    out
}

#[test]
fn parallelism_does_not_change_outputs() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let serial = run_benchmark(&config(a.path(), &format!("jobs = 1\n{GRID}"))).unwrap();
    let parallel = run_benchmark(&config(b.path(), &format!("jobs = 4\n{GRID}"))).unwrap();
    assert_eq!(serial.rows, parallel.rows);
    assert_eq!(files(a.path()), files(b.path()));
    // Flex needs g = 0, so only its constrained cells fail.
    let failed: Vec<_> = serial.failures().map(|r| (r.problem.as_str(), r.method.as_str())).collect();
    assert_eq!(failed, vec![("bilinear:n=3,seed=11", "aa2"), ("cournot:n=4,seed=11", "aa2")]);
    assert!(serial.failures().all(|r| r.status.starts_with("error: ") && r.trace_file.is_none()));
}

#[test]
fn repetitions_are_identical() {
    let dir = tempfile::tempdir().unwrap();
    let body = "problem = \"quadmm:n=5,omega=0\"\nmethods = [\"eg\"]\nbudget = 2000\nrepetitions = 3\nseed = 2\n";
    let summary = run_benchmark(&config(dir.path(), body)).unwrap();
    assert_eq!(summary.rows.len(), 3);
    let traces: Vec<Vec<u8>> = summary.rows.iter().map(|r| fs::read(dir.path().join(r.trace_file.as_ref().unwrap())).unwrap()).collect();
    assert!(traces.windows(2).all(|w| w[0] == w[1]));
}

#[test]
fn summary_matches_final_trace_rows() {
    let dir = tempfile::tempdir().unwrap();
    let summary = run_benchmark(&config(dir.path(), &format!("tolerance = 1e-4\n{GRID}"))).unwrap();
    for row in summary.rows.iter().filter(|r| r.status == "ok") {
        let trace = read_trace_csv(&dir.path().join(row.trace_file.as_ref().unwrap())).unwrap();
        let last = trace.last().unwrap();
        assert_eq!(row.iterations, trace.len());
        assert_eq!(row.final_norm_r, Some(last.norm_r));
        assert_eq!(row.final_natural_residual, Some(last.natural_residual));
        assert!(row.f_evals + row.prox_evals <= 4000 + 64);
        let first = trace.iter().find(|t| t.norm_r <= 1e-4).map(|t| t.operator_evals);
        assert_eq!(row.evals_to_tolerance, first);
    }
    let text = fs::read_to_string(dir.path().join("summary.csv")).unwrap();
    assert_eq!(text.lines().count(), summary.rows.len() + 1);
    assert!(text.starts_with("problem,method,repetition,status,termination,iterations,f_evals,prox_evals,operator_evals,"));
}

#[test]
fn empty_method_list_gives_empty_summary() {
    let dir = tempfile::tempdir().unwrap();
    let summary = run_benchmark(&config(dir.path(), "problem = \"quadmm:n=3\"\nmethods = []\nbudget = 10\n")).unwrap();
    assert!(summary.rows.is_empty());
    let text = fs::read_to_string(dir.path().join("summary.csv")).unwrap();
    assert_eq!(text.lines().count(), 1);
}

#[test]
fn missing_data_file_is_recorded_not_fatal() {
    let dir = tempfile::tempdir().unwrap();
    let body = "problems = [\"logistic:path=/nonexistent/data.svm\", \"quadmm:n=3\"]\nmethods = [\"proxflex\"]\nbudget = 500\n";
    let summary = run_benchmark(&config(dir.path(), body)).unwrap();
    assert_eq!(summary.rows.len(), 2);
    assert!(summary.rows[0].status.contains("nonexistent"));
    assert_eq!(summary.rows[1].status, "ok");
}

#[test]
fn loading_resolves_output_relative_to_config() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bench.toml");
    fs::write(&path, "[benchmark]\nproblem = \"quadmm:n=3\"\nmethods = [\"eg\"]\nbudget = 100\noutput = \"out\"\n").unwrap();
    let cfg = BenchmarkConfig::load(&path).unwrap();
    assert_eq!(cfg.benchmark.output, dir.path().join("out"));
}
