use adiabatic_core::experiments::{
    dynamic_csv, emit_report, fits_csv, points_csv, run_dynamic_sweep, run_sweep, SweepFit, SweepSpec, DEFAULT_GAMMAS,
};
use adiabatic_core::schedule::{MatrixElementMode, ScheduleKind};

fn spec(kind: ScheduleKind, gamma: f64) -> SweepSpec {
    SweepSpec {
        n_values: vec![16, 64, 256, 1024, 4096],
        gamma,
        epsilon: 0.1,
        kind,
        mode: MatrixElementMode::OperatorNormBound,
        steps: 2_000,
        seed: 5,
    }
}

fn grid() -> Vec<SweepFit> {
    let mut out = Vec::new();
    for kind in [ScheduleKind::Local, ScheduleKind::Global] {
        for g in DEFAULT_GAMMAS.iter().rev() {
            out.push(run_sweep(&spec(kind, *g)).unwrap());
        }
    }
    out
}

#[test]
fn sweeps_are_byte_deterministic() {
    let (a, b) = (grid(), grid());
    assert_eq!(points_csv(&a), points_csv(&b));
    assert_eq!(fits_csv(&a), fits_csv(&b));
    let mut reversed = a.clone();
    reversed.reverse();
    assert_eq!(fits_csv(&a), fits_csv(&reversed));
}

#[test]
fn local_bounds_sit_below_global() {
    for g in DEFAULT_GAMMAS {
        let local = run_sweep(&spec(ScheduleKind::Local, g)).unwrap().fit;
        let global = run_sweep(&spec(ScheduleKind::Global, g)).unwrap().fit;
        for (l, gl) in local.points.iter().zip(&global.points) {
            assert_eq!(l.0, gl.0);
            assert!(l.1 <= gl.1, "n={} gamma={g}", l.0);
        }
    }
}

#[test]
fn report_writes_csv_and_svg() {
    let dir = tempfile::tempdir().unwrap();
    let fits = grid();
    let files = emit_report(&fits, dir.path()).unwrap();
    assert_eq!(files.len(), 2 + fits.len());
    for f in &files {
        assert!(f.exists());
    }
    let fits_text = std::fs::read_to_string(dir.path().join("fits.csv")).unwrap();
    assert_eq!(fits_text.lines().count(), 1 + fits.len());
    assert!(emit_report(&[], dir.path()).is_err());
}

#[test]
fn dynamic_sweep_succeeds_at_bound() {
    let mut s = spec(ScheduleKind::Local, 0.0);
    s.n_values = vec![16, 64, 256];
    let rows = run_dynamic_sweep(&s).unwrap();
    assert_eq!(rows.len(), 3);
    assert!(rows
        .iter()
        .all(|r| r.success_probability >= 0.9 && r.norm_drift <= 1e-9));
    assert_eq!(dynamic_csv(&rows), dynamic_csv(&run_dynamic_sweep(&s).unwrap()));
}
