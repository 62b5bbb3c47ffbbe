use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_adiabatic"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn record(text: &str, key: &str) -> Option<String> {
    text.lines()
        .find_map(|l| l.strip_prefix(&format!("{key}=")).map(str::to_string))
}

#[test]
fn gap_farhi_n4() {
    let o = run(&["gap", "--n", "4", "--preset", "farhi", "--points", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let err = stderr(&o);
    assert_eq!(record(&err, "A").as_deref(), Some("3"));
    assert_eq!(record(&err, "B").as_deref(), Some("-3"));
    assert_eq!(record(&err, "C").as_deref(), Some("1"));
    assert_eq!(record(&err, "g_min").as_deref(), Some("0.5"));
    for key in ["# n=4", "# x=0.5", "# a4=0", "# b4=0", "# a1=1"] {
        assert!(err.contains(key), "missing {key} in {err}");
    }
    assert_eq!(
        stdout(&o),
        "s,e_ground,e_excited,e_bulk,g2_analytic,g2_numeric,bulk_flag\n\
         0,0,1,1,1,1,0\n0.5,0.25,0.75,1,0.25,0.25,0\n1,0,1,1,1,1,0\n"
    );
}

#[test]
fn gap_two_points() {
    let o = run(&["gap", "--n", "2", "--preset", "farhi", "--points", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let rows: Vec<String> = stdout(&o).lines().skip(1).map(str::to_string).collect();
    assert_eq!(rows.len(), 2);
    assert!(rows[0].starts_with("0,") && rows[1].starts_with("1,"));
}

#[test]
fn constraint_violations_exit_2() {
    let o = run(&["gap", "--n", "4", "--coeffs", "a1=0,a2=1,a3=1,b1=0,b2=1,b3=0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("a3 > a2"));
    let o = run(&["gap", "--n", "4", "--coeffs", "a1=0,a2=0,a3=1,b1=0,b2=-1,b3=0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("b2 > b3"));
    for bad in [
        vec!["gap", "--n", "1", "--preset", "farhi"],
        vec!["gap", "--n", "4", "--marked", "4", "--preset", "farhi"],
        vec!["gap", "--n", "4", "--preset", "scaled:-1"],
        vec!["gap", "--n", "4"],
        vec!["gap", "--n", "4", "--coeffs", "a1=0,a2=0,a3=1,a4=0,b1=0,b2=1,b3=0"],
        vec!["schedule", "--n", "4", "--preset", "farhi", "--epsilon", "1.5"],
        vec!["evolve", "--n", "4", "--preset", "farhi", "--steps", "10"],
        vec!["area", "--a", "-1"],
        vec!["sweep", "--n", "16,48"],
        vec!["verify", "--n-max", "8192"],
        vec!["bogus"],
    ] {
        assert_eq!(run(&bad).status.code(), Some(2), "{bad:?}");
    }
}

#[test]
fn verify_passes_and_is_deterministic() {
    let args = [
        "verify",
        "--n-max",
        "64",
        "--trials",
        "12",
        "--seed",
        "42",
        "--tolerance",
        "1e-9",
    ];
    let (a, b) = (run(&args), run(&args));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(stdout(&a).lines().count(), 13);
    let single = run(&[&args[..], &["--threads", "1"]].concat());
    assert_eq!(a.stdout, single.stdout);
}

#[test]
fn verify_failure_exits_1() {
    let o = run(&["verify", "--n-max", "16", "--trials", "3", "--tolerance", "0"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("trial 0 n=4"));
}

#[test]
fn verify_rejects_zero_trials() {
    assert_eq!(run(&["verify", "--trials", "0"]).status.code(), Some(2));
}

#[test]
fn area_example() {
    let o = run(&["area", "--a", "3", "--c", "0", "--grid", "101"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "argmin_p=0.5,min_integral=0.25\n");
}

#[test]
fn evolve_farhi_local() {
    let o = run(&[
        "evolve",
        "--n",
        "64",
        "--preset",
        "farhi",
        "--kind",
        "local",
        "--epsilon",
        "0.1",
        "--steps",
        "10000",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(
        lines.next(),
        Some("factor,total_time,steps,success_probability,norm_drift")
    );
    let p: f64 = lines.next().unwrap().split(',').nth(3).unwrap().parse().unwrap();
    assert!(p >= 0.9, "success probability {p}");
}

#[test]
fn evolve_factor_scan_rows_in_order() {
    let o = run(&[
        "evolve",
        "--n",
        "16",
        "--preset",
        "farhi",
        "--factors",
        "0.01,1,10",
        "--steps",
        "2000",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let factors: Vec<String> = stdout(&o)
        .lines()
        .skip(1)
        .map(|l| l.split(',').next().unwrap().to_string())
        .collect();
    assert_eq!(factors, ["0.01", "1", "10"]);
}

#[test]
fn schedule_writes_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s.csv");
    let meta = dir.path().join("bounds.txt");
    let o = run(&[
        "schedule",
        "--n",
        "16",
        "--preset",
        "farhi",
        "--resolution",
        "5",
        "--out",
        out.to_str().unwrap(),
        "--meta",
        meta.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let csv = std::fs::read_to_string(&out).unwrap();
    assert_eq!(csv.lines().count(), 6);
    assert_eq!(csv.lines().last().unwrap().split(',').nth(1), Some("1"));
    let rec = std::fs::read_to_string(&meta).unwrap();
    let t_local: f64 = record(&rec, "t_local").unwrap().parse().unwrap();
    let t_global: f64 = record(&rec, "t_global").unwrap().parse().unwrap();
    assert!(t_local < t_global);
    assert_eq!(
        csv.lines()
            .last()
            .unwrap()
            .split(',')
            .next()
            .unwrap()
            .parse::<f64>()
            .unwrap(),
        t_local
    );
}

#[test]
fn sweep_local_quarter() {
    let o = run(&[
        "sweep",
        "--kind",
        "local",
        "--gamma",
        "0.25",
        "--n",
        "16,64,256,1024,4096",
        "--epsilon",
        "0.1",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(
        out.lines().next(),
        Some("gamma,kind,exponent,intercept,r_squared,num_points")
    );
    let exponent: f64 = out.lines().nth(1).unwrap().split(',').nth(2).unwrap().parse().unwrap();
    assert!((0.15..=0.35).contains(&exponent), "exponent {exponent}");
}

#[test]
fn sweep_report_dir() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report");
    let o = run(&["sweep", "--report-dir", report.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 9);
    assert!(report.join("fits.csv").exists() && report.join("points.csv").exists());
    let svgs = std::fs::read_dir(&report)
        .unwrap()
        .filter(|e| e.as_ref().unwrap().path().extension().is_some_and(|x| x == "svg"));
    assert_eq!(svgs.count(), 8);
}

#[test]
fn config_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(
        &cfg,
        "# bundle\nn=16\nmarked_index=3\na1=0\na2=-1\na3=1\nb1=0\nb2=2\nb3=-0.5\n",
    )
    .unwrap();
    let from_file = run(&["gap", "--config", cfg.to_str().unwrap(), "--points", "5"]);
    let from_flags = run(&[
        "gap",
        "--n",
        "16",
        "--marked",
        "3",
        "--coeffs",
        "a1=0,a2=-1,a3=1,b1=0,b2=2,b3=-0.5",
        "--points",
        "5",
    ]);
    assert_eq!(from_file.status.code(), Some(0));
    assert_eq!(from_file.stdout, from_flags.stdout);
    assert_eq!(from_file.stderr, from_flags.stderr);
    assert_eq!(run(&["gap", "--config", "/nonexistent/cfg"]).status.code(), Some(2));
}

#[test]
fn help_lists_units() {
    for sub in ["gap", "verify", "schedule", "evolve", "sweep", "area"] {
        let o = run(&[sub, "--help"]);
        assert_eq!(o.status.code(), Some(0));
        let text = stdout(&o);
        for line in text
            .lines()
            .filter(|l| l.trim_start().starts_with("--") && !l.contains("--help"))
        {
            let described = line.contains('(')
                || line.contains("instead of")
                || line.contains("file with")
                || line.contains("Directory");
            assert!(described, "{sub}: flag without units: {line}");
        }
    }
}
