use std::path::PathBuf;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_clifford-ergotropy");

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("clifford-ergotropy-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn value(out: &str, key: &str) -> f64 {
    let prefix = format!("{key}=");
    out.lines()
        .find_map(|l| l.strip_prefix(&prefix))
        .unwrap_or_else(|| panic!("missing {key} in\n{out}"))
        .parse()
        .unwrap()
}

const TT: &str = "# |TT>\n0.5 0\n0.353553390593274 0.353553390593274\n0.353553390593274 0.353553390593274\n0 0.5\n";

#[test]
fn sweep_writes_csv_and_cusps() {
    let path = scratch("sweep0.csv");
    let o = run(&["sweep2q", "--h", "0", "--out", path.to_str().unwrap()]);
    assert!(o.status.success());
    let csv = std::fs::read_to_string(&path).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "g,initial_energy,ergotropy,clifford_ergotropy_exact,clifford_ergotropy_analytic,bound_rearrangement,bound_holder,gap"
    );
    assert_eq!(csv.lines().count(), 82);
    let origin: Vec<f64> = csv
        .lines()
        .find(|l| l.starts_with("0,"))
        .unwrap()
        .split(',')
        .map(|v| v.parse().unwrap())
        .collect();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    assert!((origin[2] - 1.0).abs() < 1e-12);
    for k in [3, 4, 5, 6] {
        assert!((origin[k] - s).abs() < 1e-12);
    }
    assert!((origin[7] - 0.29289).abs() < 1e-5);

    let o = run(&[
        "sweep2q",
        "--h",
        "0.5",
        "--report-cusps",
        "--out",
        scratch("sweep5.csv").to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("cusps=-0.5,0,0.5"));
    let csv = std::fs::read_to_string(scratch("sweep5.csv")).unwrap();
    let row: Vec<f64> = csv
        .lines()
        .find(|l| l.starts_with("0.3,"))
        .unwrap()
        .split(',')
        .map(|v| v.parse().unwrap())
        .collect();
    assert!(row[5] < row[6]);
}

#[test]
fn sweep_rejects_bad_input() {
    assert_eq!(run(&["sweep2q", "--steps", "1"]).status.code(), Some(2));
    assert_eq!(
        run(&["sweep2q", "--out", "/nonexistent-dir/x.csv"]).status.code(),
        Some(2)
    );
}

#[test]
fn typicality_is_reproducible() {
    let a = scratch("typ_a.csv");
    let b = scratch("typ_b.csv");
    let oa = run(&[
        "typicality",
        "--n",
        "4",
        "--samples",
        "30",
        "--seed",
        "7",
        "--out",
        a.to_str().unwrap(),
    ]);
    let ob = run(&[
        "typicality",
        "--n",
        "4",
        "--samples",
        "30",
        "--seed",
        "7",
        "--out",
        b.to_str().unwrap(),
    ]);
    assert!(oa.status.success() && ob.status.success());
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(stdout(&oa), stdout(&ob));
    let summary = stdout(&oa);
    assert!(summary.contains("violations=0"));
    assert!(summary.contains("median_m_infinity="));
    let csv = std::fs::read_to_string(&a).unwrap();
    assert_eq!(
        csv.lines().next().unwrap(),
        "sample_index,r1,m_infinity,initial_energy,violation_flag"
    );
    assert_eq!(csv.lines().count(), 31);
    assert_eq!(run(&["typicality", "--n", "1"]).status.code(), Some(2));
    assert_eq!(run(&["typicality", "--n", "4", "--a", "0.5"]).status.code(), Some(2));
}

#[test]
fn bounds_report_for_tt() {
    let state = scratch("tt.txt");
    let ham = scratch("ising00.txt");
    std::fs::write(&state, TT).unwrap();
    std::fs::write(&ham, "-1.0 ZZ\n").unwrap();
    let o = run(&[
        "bounds",
        "--state",
        state.to_str().unwrap(),
        "--hamiltonian",
        ham.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    for key in ["bound_rearrangement", "bound_holder", "bound_sre", "clifford_ergotropy"] {
        assert!((value(&out, key) - 0.7071068).abs() < 1e-7);
    }
    assert!(out.contains("clifford_method=exact"));
    assert!((value(&out, "gap") - 0.29289).abs() < 1e-5);
}

#[test]
fn bounds_report_for_product_t_state() {
    let state = scratch("t4.txt");
    let ham = scratch("classical4.txt");
    let a = std::f64::consts::FRAC_1_SQRT_2;
    let amps: Vec<(f64, f64)> = (0..16u32)
        .map(|b| {
            let ones = b.count_ones() as f64;
            let mag = 0.25;
            let phase = ones * std::f64::consts::FRAC_PI_4;
            (mag * phase.cos(), mag * phase.sin())
        })
        .collect();
    let text: String = amps.iter().map(|(re, im)| format!("{re:.17e} {im:.17e}\n")).collect();
    std::fs::write(&state, text).unwrap();
    std::fs::write(&ham, "-1 ZZII\n-1 IZZI\n-1 IIZZ\n-1 ZIIZ\n").unwrap();
    let o = run(&[
        "bounds",
        "--state",
        state.to_str().unwrap(),
        "--hamiltonian",
        ham.to_str().unwrap(),
        "--heuristic-budget",
        "8x50",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    assert!(out.contains("clifford_method=heuristic"));
    assert!((value(&out, "gap_lower_bound") - 4.0 * (1.0 - a)).abs() < 1e-9);
    assert!(value(&out, "gap_lower_bound") >= 1.17157);
    assert!(value(&out, "clifford_ergotropy") <= value(&out, "bound_rearrangement") + 1e-10);
}

#[test]
fn bounds_stabilizer_state_has_no_gap() {
    let state = scratch("zero.txt");
    let ham = scratch("zfield.txt");
    std::fs::write(&state, "1 0\n0 0\n0 0\n0 0\n").unwrap();
    std::fs::write(&ham, "1 ZI\n1 IZ\n-0.5 ZZ\n").unwrap();
    let out = stdout(&run(&[
        "bounds",
        "--state",
        state.to_str().unwrap(),
        "--hamiltonian",
        ham.to_str().unwrap(),
    ]));
    assert!(value(&out, "gap").abs() < 1e-12);
    let charge = stdout(&run(&[
        "bounds",
        "--state",
        state.to_str().unwrap(),
        "--hamiltonian",
        ham.to_str().unwrap(),
        "--maximize",
    ]));
    assert!(charge.contains("mode=charge"));
    assert!(value(&charge, "clifford_ergotropy").abs() < 1e-12);
}

#[test]
fn bounds_parse_errors_carry_line_numbers() {
    let state = scratch("tt2.txt");
    let ham = scratch("bad.txt");
    std::fs::write(&state, TT).unwrap();
    std::fs::write(&ham, "-1.0 ZZ\n# comment\n0.5 XQ\n").unwrap();
    let o = run(&[
        "bounds",
        "--state",
        state.to_str().unwrap(),
        "--hamiltonian",
        ham.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
    let o = run(&[
        "bounds",
        "--state",
        "/nonexistent",
        "--hamiltonian",
        ham.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&[
        "bounds",
        "--state",
        state.to_str().unwrap(),
        "--hamiltonian",
        ham.to_str().unwrap(),
        "--heuristic-budget",
        "fast",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn ising_bound_reports() {
    let out = stdout(&run(&["ising-bound", "--model", "tfim", "--g", "0.3", "--n", "12"]));
    assert!((value(&out, "crossing_low") - 0.506).abs() < 2e-3);
    assert!((value(&out, "crossing_high") - 1.975).abs() < 2e-3);
    assert!(out.contains("ground_energy_source=asymptotic"));

    let out = stdout(&run(&["ising-bound", "--model", "classical", "--h", "0", "--n", "4"]));
    assert!((value(&out, "gap_lower_bound") - 1.17157).abs() < 1e-5);
    let out = stdout(&run(&["ising-bound", "--model", "classical", "--h", "-1", "--n", "2"]));
    let s = std::f64::consts::FRAC_1_SQRT_2;
    assert!((value(&out, "gap_lower_bound") - 4.0 * (1.0 - s)).abs() < 1e-12);

    assert_eq!(
        run(&["ising-bound", "--model", "heisenberg", "--n", "4"]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["ising-bound", "--model", "tfim", "--n", "1"]).status.code(),
        Some(2)
    );
}

#[test]
fn single_qubit_report() {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let arg = format!("{s},{s},0");
    let out = stdout(&run(&["single-qubit", "--bloch", &arg]));
    assert!((value(&out, "clifford_ergotropy") - s).abs() < 1e-12);
    assert!((value(&out, "stabilizer_fidelity") - 0.85355).abs() < 1e-5);
    assert!((value(&out, "gap") - (1.0 - s)).abs() < 1e-12);
    assert_eq!(run(&["single-qubit", "--bloch", "1,1,0"]).status.code(), Some(2));
    assert_eq!(run(&["single-qubit", "--bloch", "0,1"]).status.code(), Some(2));
}

#[test]
fn negative_values_parse() {
    let o = run(&["single-qubit", "--bloch", "-0.6,0,-0.8", "--field", "-1"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(value(&stdout(&o), "clifford_ergotropy") >= 0.0);
    assert!(run(&[
        "sweep2q",
        "--h",
        "-0.5",
        "--steps",
        "5",
        "--out",
        scratch("neg.csv").to_str().unwrap()
    ])
    .status
    .success());
}
