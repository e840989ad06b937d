//! End-to-end tests that drive the installed binary plus in-process
//! round-trip batteries for the file formats.

use std::path::PathBuf;
use std::process::{Command, Output};

use num_complex::Complex64;
use polyeig::families::{q_class, random_scaled};
use polyeig::kernels::SplitMix64;
use polyeig::matpoly::scalar_polynomial;
use polyeig::oracle::companion_eigenvalues;
use polyeig::{ComplexMatrix, MatrixPolynomial};
use polyeig_cli::format::{parse_json, parse_text, write_json, write_text};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_polyeig"))
}

fn tmp_path(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("polyeig-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn write_file(name: &str, content: &str) -> PathBuf {
    let path = tmp_path(name);
    std::fs::write(&path, content).unwrap();
    path
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr_of(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn assert_same_polynomial(a: &MatrixPolynomial, b: &MatrixPolynomial) {
    assert_eq!(a.size(), b.size());
    assert_eq!(a.degree(), b.degree());
    assert_eq!(a.stripped_power(), b.stripped_power());
    for i in 0..=a.degree() {
        assert_eq!(
            a.coeff(i).max_abs_diff(b.coeff(i)),
            0.0,
            "coefficient {i} changed in the round trip"
        );
    }
}

fn battery() -> Vec<MatrixPolynomial> {
    let mut out = Vec::new();
    let mut rng = SplitMix64::new(0xF11E);
    for k in 0..20u64 {
        let m = 1 + (k % 4) as usize;
        let n = 1 + (k % 5) as usize;
        let sigma: Vec<f64> = (0..=n)
            .map(|_| 10f64.powf(-6.0 + 12.0 * rng.next_f64()))
            .collect();
        out.push(random_scaled(m, &sigma, 0xBEEF + k).unwrap());
    }
    // Entry-grammar edge cases: pure real, pure imaginary, zeros, and a
    // polynomial divisible by x (stripped zero block).
    let mut special = ComplexMatrix::zeros(2, 2);
    special.set(0, 0, Complex64::new(0.0, 1.0));
    special.set(0, 1, Complex64::new(-2.5, 0.0));
    special.set(1, 0, Complex64::new(0.0, -3.25e-7));
    special.set(1, 1, Complex64::new(1.0e12, -7.0));
    out.push(
        MatrixPolynomial::normalize(vec![
            ComplexMatrix::zeros(2, 2),
            special,
            ComplexMatrix::identity(2),
        ])
        .unwrap(),
    );
    out
}

#[test]
fn text_format_round_trips_exactly() {
    for p in battery() {
        let text = write_text(&p);
        let back = parse_text(&text).unwrap();
        assert_same_polynomial(&p, &back);
    }
}

#[test]
fn json_format_round_trips_exactly() {
    for p in battery() {
        let json = write_json(&p);
        let back = parse_json(&json).unwrap();
        assert_same_polynomial(&p, &back);
    }
}

fn quintic_scalar_file(name: &str) -> PathBuf {
    let p = scalar_polynomial(&[
        real(1.0),
        real(1e3),
        real(1e-2),
        real(1.0),
        real(1e6),
        real(1.0),
    ])
    .unwrap();
    write_file(name, &write_text(&p))
}

#[test]
fn tropical_reports_the_polygon() {
    let file = quintic_scalar_file("quintic.txt");
    let out = bin().arg("tropical").arg(&file).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", stderr_of(&out));
    let stdout = stdout_of(&out);
    assert!(stdout.contains("vertices: 0 1 4 5"), "{stdout}");
    assert!(stdout.contains("1.000000e-3"), "{stdout}");
    assert!(stdout.contains("1.000000e-1"), "{stdout}");
    assert!(stdout.contains("1.000000e6"), "{stdout}");
}

#[test]
fn tropical_rejects_constant_polynomials() {
    let p = MatrixPolynomial::normalize(vec![ComplexMatrix::identity(2)]).unwrap();
    let file = write_file("constant.txt", &write_text(&p));
    let out = bin().arg("tropical").arg(&file).output().unwrap();
    assert_eq!(out.status.code(), Some(2), "{}", stderr_of(&out));
    assert!(stderr_of(&out).contains("degenerate"), "{}", stderr_of(&out));
}

#[test]
fn tropical_plot_writes_the_point_table() {
    let file = quintic_scalar_file("quintic-plot.txt");
    let tsv = tmp_path("quintic.tsv");
    let out = bin()
        .arg("tropical")
        .arg(&file)
        .arg("--plot")
        .arg(&tsv)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", stderr_of(&out));
    let data = std::fs::read_to_string(&tsv).unwrap();
    let lines: Vec<&str> = data.lines().collect();
    assert_eq!(lines.len(), 6, "{data}");
    assert_eq!(lines[0], "0\t0\t1");
    for l in &lines {
        assert_eq!(l.split('\t').count(), 3, "{l}");
    }
    // Hull membership flags match the known vertices 0, 1, 4, 5.
    let flags: Vec<&str> = lines.iter().map(|l| l.rsplit('\t').next().unwrap()).collect();
    assert_eq!(flags, vec!["1", "1", "0", "0", "1", "1"]);
}

#[test]
fn bounds_counts_the_shifted_identity() {
    let p = MatrixPolynomial::normalize(vec![
        ComplexMatrix::identity(2).scale(real(-2.0)),
        ComplexMatrix::identity(2),
    ])
    .unwrap();
    let file = write_file("shifted.txt", &write_text(&p));
    let out = bin().arg("bounds").arg(&file).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", stderr_of(&out));
    let stdout = stdout_of(&out);
    assert!(
        stdout.contains("[2.000000e0, 2.000000e0] holds exactly 2 eigenvalues"),
        "{stdout}"
    );
}

#[test]
fn bounds_exits_3_when_nothing_is_solvable() {
    // diag(1,0) + I x + diag(1,0) x^2: both endpoint blocks are
    // singular and the middle abscissa has no positive Pellet roots.
    let mut d = ComplexMatrix::zeros(2, 2);
    d.set(0, 0, real(1.0));
    let p = MatrixPolynomial::normalize(vec![d.clone(), ComplexMatrix::identity(2), d]).unwrap();
    let file = write_file("nobounds.txt", &write_text(&p));
    let out = bin().arg("bounds").arg(&file).output().unwrap();
    assert_eq!(out.status.code(), Some(3), "{}", stderr_of(&out));
}

#[test]
fn bounds_notes_missing_origin_bound() {
    let mut d = ComplexMatrix::zeros(2, 2);
    d.set(0, 0, real(1.0));
    let p = MatrixPolynomial::normalize(vec![d, ComplexMatrix::identity(2)]).unwrap();
    let file = write_file("singular-origin.txt", &write_text(&p));
    let out = bin().arg("bounds").arg(&file).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", stderr_of(&out));
    assert!(stdout_of(&out).contains("no lower bound t_0"), "{}", stdout_of(&out));
}

#[test]
fn bounds_localizes_separated_scaled_unitary_instances() {
    // Edge radii 1/20, 1, 20: every ratio is 1/20 < 1/12.12.
    let sigma = [1.0, 20.0, 20.0, 1.0];
    let p = q_class(3, &sigma, 11).unwrap();
    let file = write_file("qclass.txt", &write_text(&p));
    let out = bin().arg("bounds").arg(&file).arg("--q-class").output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", stderr_of(&out));
    let stdout = stdout_of(&out);
    assert!(stdout.contains("tropical localization"), "{stdout}");
    assert!(stdout.contains("refined ["), "{stdout}");
    assert!(stdout.contains("holds exactly 3 eigenvalues"), "{stdout}");
    assert!(!stdout.contains("not applicable"), "{stdout}");
}

#[test]
fn solve_emits_the_json_envelope() {
    let p = MatrixPolynomial::normalize(vec![
        ComplexMatrix::identity(2).scale(real(-2.0)),
        ComplexMatrix::identity(2),
    ])
    .unwrap();
    let file = write_file("solve-json.txt", &write_text(&p));
    let out = bin().arg("solve").arg(&file).arg("--json").output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", stderr_of(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    let eigs = v["eigenvalues"].as_array().unwrap();
    assert_eq!(eigs.len(), 2);
    for e in eigs {
        let pair = e.as_array().unwrap();
        assert!((pair[0].as_f64().unwrap() - 2.0).abs() < 1e-10);
        assert!(pair[1].as_f64().unwrap().abs() < 1e-10);
    }
    assert_eq!(v["nu"].as_array().unwrap().len(), 2);
    assert!(v["simul_it"].as_u64().is_some());
    assert!(v["aver_it"].as_f64().is_some());
    assert!(!v["annuli"].as_array().unwrap().is_empty());
}

#[test]
fn solve_prints_stats_and_stop_reasons() {
    let p = MatrixPolynomial::normalize(vec![
        ComplexMatrix::identity(2).scale(real(-2.0)),
        ComplexMatrix::identity(2),
    ])
    .unwrap();
    let file = write_file("solve-human.txt", &write_text(&p));
    let out = bin().arg("solve").arg(&file).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", stderr_of(&out));
    let stdout = stdout_of(&out);
    assert!(stdout.contains("eigenvalues (2):"), "{stdout}");
    assert!(stdout.contains("-small"), "{stdout}");
    assert!(!stdout.contains("not-converged"), "{stdout}");
    assert!(stdout.contains("simul_it = "), "{stdout}");
    assert!(stdout.contains("aver_it = "), "{stdout}");
}

#[test]
fn solve_exits_4_when_the_sweep_budget_is_too_small() {
    let file = quintic_scalar_file("quintic-budget.txt");
    let out = bin()
        .arg("solve")
        .arg(&file)
        .arg("--init")
        .arg("circle")
        .arg("--max-sweeps")
        .arg("2")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4), "{}", stderr_of(&out));
    assert!(stdout_of(&out).contains("not-converged"), "{}", stdout_of(&out));
}

#[test]
fn solve_agrees_with_the_oracle_on_moderate_instances() {
    let mut rng = SplitMix64::new(0xA6EE);
    for k in 0..6u64 {
        let m = 2 + (k % 3) as usize;
        let n = 3 + (k % 3) as usize;
        let sigma: Vec<f64> = (0..=n)
            .map(|_| 10f64.powf(-1.0 + 2.0 * rng.next_f64()))
            .collect();
        let p = random_scaled(m, &sigma, 0xC0FFEE + k).unwrap();
        let file = write_file(&format!("agree-{k}.txt"), &write_text(&p));
        let out = bin().arg("solve").arg(&file).arg("--json").output().unwrap();
        assert_eq!(out.status.code(), Some(0), "{}", stderr_of(&out));
        let v: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
        let mut got: Vec<Complex64> = v["eigenvalues"]
            .as_array()
            .unwrap()
            .iter()
            .map(|e| {
                let pair = e.as_array().unwrap();
                Complex64::new(pair[0].as_f64().unwrap(), pair[1].as_f64().unwrap())
            })
            .collect();
        let reference = companion_eigenvalues(&p).unwrap();
        assert_eq!(got.len(), reference.len());
        for r in &reference {
            let (idx, dist) = got
                .iter()
                .enumerate()
                .map(|(i, g)| (i, (g - r).norm()))
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .unwrap();
            assert!(
                dist <= 1e-6 * (1.0 + r.norm()),
                "instance {k}: eigenvalue {r} unmatched (closest at distance {dist:.3e})"
            );
            got.swap_remove(idx);
        }
    }
}

#[test]
fn oracle_reports_scalar_roots_sorted_by_modulus() {
    let p = scalar_polynomial(&[real(2.0), real(-3.0), real(1.0)]).unwrap();
    let file = write_file("oracle-quadratic.txt", &write_text(&p));
    let out = bin().arg("oracle").arg(&file).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", stderr_of(&out));
    let stdout = stdout_of(&out);
    let row0 = stdout.lines().nth(1).unwrap();
    let row1 = stdout.lines().nth(2).unwrap();
    assert!(row0.contains("1.000000e0"), "{stdout}");
    assert!(row1.contains("2.000000e0"), "{stdout}");
}

#[test]
fn oracle_suggests_reversal_for_singular_leading_blocks() {
    let mut d = ComplexMatrix::zeros(2, 2);
    d.set(0, 0, real(1.0));
    let p = MatrixPolynomial::normalize(vec![ComplexMatrix::identity(2), d]).unwrap();
    let file = write_file("oracle-singular.txt", &write_text(&p));

    let out = bin().arg("oracle").arg(&file).output().unwrap();
    assert_eq!(out.status.code(), Some(1), "{}", stderr_of(&out));
    assert!(stderr_of(&out).contains("--reverse"), "{}", stderr_of(&out));

    let out = bin().arg("oracle").arg(&file).arg("--reverse").output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", stderr_of(&out));
    let stdout = stdout_of(&out);
    assert!(stdout.contains("-1.000000e0"), "{stdout}");
    assert!(stdout.contains("infinite"), "{stdout}");
}

#[test]
fn oracle_enforces_the_companion_size_limit() {
    let mut sigma = vec![0.0; 14];
    sigma[0] = 1.0;
    sigma[13] = 1.0;
    let p = random_scaled(40, &sigma, 99).unwrap(); // companion would be 520
    let file = write_file("oracle-toolarge.txt", &write_text(&p));
    let out = bin().arg("oracle").arg(&file).output().unwrap();
    assert_eq!(out.status.code(), Some(1), "{}", stderr_of(&out));
    assert!(stderr_of(&out).contains("512"), "{}", stderr_of(&out));
}

#[test]
fn bench_is_bitwise_reproducible() {
    let run = || {
        bin()
            .args(["bench", "--class", "q", "--m", "3", "--seed", "7"])
            .output()
            .unwrap()
    };
    let first = run();
    let second = run();
    assert_eq!(first.status.code(), Some(0), "{}", stderr_of(&first));
    assert_eq!(first.stdout, second.stdout);
    let stdout = stdout_of(&first);
    assert!(stdout.contains("simul_it"), "{stdout}");
    assert!(stdout.contains("newton"), "{stdout}");
    assert!(stdout.contains("circle"), "{stdout}");
}

#[test]
fn bench_flags_the_normalization_choice() {
    let out = bin()
        .args([
            "bench",
            "--class",
            "random-scaled",
            "--m",
            "2",
            "--seed",
            "3",
            "--strategies",
            "newton",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", stderr_of(&out));
    assert!(
        stdout_of(&out).contains("normalized to unit spectral norm"),
        "{}",
        stdout_of(&out)
    );
}

#[test]
fn bench_rejects_zero_endpoint_scales() {
    let out = bin()
        .args(["bench", "--m", "2", "--sigma", "0,1,1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2), "{}", stderr_of(&out));
}

#[test]
fn unreadable_input_is_a_parse_error() {
    let out = bin().arg("bounds").arg("/definitely/not/there.txt").output().unwrap();
    assert_eq!(out.status.code(), Some(2), "{}", stderr_of(&out));
}

#[test]
fn malformed_files_report_the_line() {
    let file = write_file("broken.txt", "matpoly 2 1\ncoeff 0\n1 2\n3 fish\ncoeff 1\n1 0\n0 1\n");
    let out = bin().arg("tropical").arg(&file).output().unwrap();
    assert_eq!(out.status.code(), Some(2), "{}", stderr_of(&out));
    assert!(stderr_of(&out).contains("line 4"), "{}", stderr_of(&out));
}
