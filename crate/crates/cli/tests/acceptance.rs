//! Acceptance gate: one test per release criterion, each printing a
//! `[PASS]` line with the decisive measurements when it clears.
//!
//! The criteria pin the library's headline behavior end to end: the
//! elliptical incenter locus, the orbit invariants with the perimeter as an
//! independent Poncelet oracle, the circle degeneracies, the axis-crossing
//! structure, the emitted foci-distance table (checked against a frozen
//! golden margin), and the three verification suites.

use std::fs;
use std::path::Path;
use std::time::Instant;

use poncelet::{
    axis_crossing_suite, caustic_for_3_periodic, confocal_suite, incenter, inradius,
    isotropic_limit_suite, locus_of_incenters, orbit_family, orbit_from_vertex,
    reflection_suite, transversality_check, Branch, Ellipse, LocusOutcome, SuiteReport,
    Tolerances,
};

const TABLES: [(f64, f64); 3] = [(1.0, 0.3), (1.0, 0.5), (1.0, 0.8)];
const SWEEP: usize = 360;

fn table(a: f64, b: f64) -> Ellipse {
    Ellipse::new(a, b).unwrap()
}

fn fitted(a: f64, b: f64, n: usize) -> poncelet::ConicFit {
    match locus_of_incenters(&table(a, b), n, &Tolerances::DEFAULT).unwrap() {
        LocusOutcome::Fitted { fit, .. } => fit,
        LocusOutcome::PointLocus { .. } => panic!("expected a fitted locus for ({a}, {b})"),
    }
}

fn assert_suite(report: &SuiteReport) {
    for check in &report.checks {
        assert!(
            check.pass,
            "{} {}: measured {:.3e} {} {:.3e}",
            report.suite,
            check.name,
            check.measured,
            check.op.symbol(),
            check.threshold
        );
    }
}

#[test]
fn a01_incenter_locus_is_a_centered_axis_aligned_ellipse() {
    let start = Instant::now();
    let mut worst_residual: f64 = 0.0;
    for (a, b) in TABLES {
        let fit = fitted(a, b, SWEEP);
        assert_eq!(fit.kind.as_str(), "ellipse", "table ({a}, {b})");
        assert!(
            fit.residual_max < 1e-8,
            "table ({a}, {b}): residual_max {:.3e}",
            fit.residual_max
        );
        let params = fit.ellipse.as_ref().unwrap();
        let center = params.center.coords.norm();
        assert!(center < 1e-8, "table ({a}, {b}): center offset {center:.3e}");
        let cross = fit.coeffs.coeffs()[1].abs();
        assert!(cross < 1e-8, "table ({a}, {b}): cross term {cross:.3e}");
        worst_residual = worst_residual.max(fit.residual_max);
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 5.0, "sweeps took {elapsed:?}");
    println!(
        "[PASS] a01 locus ellipse: 3 tables x {SWEEP} orbits, worst residual {worst_residual:.3e}, {:.2} s",
        elapsed.as_secs_f64()
    );
}

#[test]
fn a02_orbit_invariants_and_perimeter_oracle() {
    let mut worst = (0f64, 0f64, 0f64, 0f64); // reflection, closure, tangency, spread
    for (a, b) in TABLES {
        let start = Instant::now();
        let t = table(a, b);
        let family = orbit_family(&t, SWEEP).unwrap();
        let mut low = f64::INFINITY;
        let mut high = f64::NEG_INFINITY;
        for orbit in &family {
            let residuals = orbit.validate(&t);
            assert!(
                residuals.reflection < 1e-9,
                "table ({a}, {b}): reflection {:.3e}",
                residuals.reflection
            );
            assert!(
                residuals.closure < 1e-9,
                "table ({a}, {b}): closure {:.3e}",
                residuals.closure
            );
            assert!(
                residuals.tangency < 1e-9,
                "table ({a}, {b}): tangency {:.3e}",
                residuals.tangency
            );
            low = low.min(orbit.perimeter);
            high = high.max(orbit.perimeter);
            worst.0 = worst.0.max(residuals.reflection);
            worst.1 = worst.1.max(residuals.closure);
            worst.2 = worst.2.max(residuals.tangency);
        }
        let spread = (high - low) / (0.5 * (high + low));
        assert!(spread < 1e-8, "table ({a}, {b}): perimeter spread {spread:.3e}");
        worst.3 = worst.3.max(spread);
        let elapsed = start.elapsed();
        assert!(
            elapsed.as_secs_f64() < 2.0,
            "family ({a}, {b}) took {elapsed:?}"
        );
    }
    println!(
        "[PASS] a02 orbit invariants: reflection {:.3e}, closure {:.3e}, tangency {:.3e}, perimeter spread {:.3e}",
        worst.0, worst.1, worst.2, worst.3
    );
}

#[test]
fn a03_circle_degeneracy_pins_caustic_and_incenters() {
    let circle = table(1.0, 1.0);
    let solution = caustic_for_3_periodic(&circle).unwrap();
    let lambda_error = (solution.lambda_star - 0.75).abs();
    assert!(lambda_error < 1e-12, "lambda* error {lambda_error:.3e}");
    let family = orbit_family(&circle, SWEEP).unwrap();
    let mut worst: f64 = 0.0;
    for orbit in &family {
        let center = incenter(orbit).unwrap().coords.norm();
        worst = worst.max(center);
    }
    assert!(worst < 1e-9, "incenter excursion {worst:.3e}");
    println!(
        "[PASS] a03 circle degeneracy: lambda* error {lambda_error:.3e}, incenter excursion {worst:.3e}"
    );
}

#[test]
fn a04_axis_crossings_transversality_and_evenness() {
    let t = table(1.0, 0.5);
    let fit = fitted(1.0, 0.5, SWEEP);
    let crossings = poncelet::axis_intersections(&fit).unwrap();
    assert!(
        crossings[0].x < crossings[1].x,
        "crossings must be simple and ordered"
    );

    let solution = caustic_for_3_periodic(&t).unwrap();
    let mut match_error: f64 = 0.0;
    for theta in [0.0, std::f64::consts::PI] {
        let orbit = orbit_from_vertex(&t, &solution, theta, Branch::First).unwrap();
        let point = incenter(&orbit).unwrap();
        let nearest = crossings
            .iter()
            .map(|q| (point - q).norm())
            .fold(f64::INFINITY, f64::min);
        match_error = match_error.max(nearest);
    }
    assert!(match_error < 1e-6, "axis incenter match {match_error:.3e}");

    let derivative = transversality_check(&t, 1e-4, &Tolerances::DEFAULT).unwrap();
    assert!(derivative.abs() > 1e-3, "transversality {derivative:.3e}");

    let mut evenness: f64 = 0.0;
    for delta in [0.01, 0.1, 0.5] {
        let plus = inradius(&orbit_from_vertex(&t, &solution, delta, Branch::First).unwrap()).unwrap();
        let minus =
            inradius(&orbit_from_vertex(&t, &solution, -delta, Branch::First).unwrap()).unwrap();
        evenness = evenness.max((plus - minus).abs());
    }
    assert!(evenness < 1e-12, "inradius evenness {evenness:.3e}");
    println!(
        "[PASS] a04 axis structure: incenter match {match_error:.3e}, transversality {:.3e}, evenness {evenness:.3e}",
        derivative.abs()
    );
}

#[test]
fn a05_foci_distance_table_from_the_cli() {
    let start = Instant::now();
    let dir = tempfile::tempdir().unwrap();
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_poncelet"))
        .args(["foci-curve", "--out"])
        .arg(dir.path())
        .output()
        .expect("binary launches");
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));

    let csv = fs::read_to_string(dir.path().join("foci.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "t,d_gamma,d_locus");
    let mut rows = 0;
    let mut half_gap: Option<f64> = None;
    for line in lines {
        let cells: Vec<f64> = line.split(',').map(|c| c.parse().unwrap()).collect();
        let (t, d_gamma, d_locus) = (cells[0], cells[1], cells[2]);
        assert_eq!(
            d_gamma.to_bits(),
            (1.0 - t * t).sqrt().to_bits(),
            "d_gamma must equal sqrt(1 - t^2) exactly at t = {t}"
        );
        assert!(d_locus < d_gamma, "d_locus >= d_gamma at t = {t}");
        if (t - 0.5).abs() < 1e-9 {
            half_gap = Some((d_locus - 0.75f64.sqrt()).abs());
        }
        rows += 1;
    }
    assert_eq!(rows, 19, "default grid is 0.05..0.95 in 19 steps");

    let golden_path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/foci_gap.json");
    let golden: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(golden_path).unwrap()).unwrap();
    let margin = golden["margin"].as_f64().unwrap();
    let half_gap = half_gap.expect("grid contains the t = 0.5 row");
    assert!(
        half_gap > margin,
        "non-confocality gap {half_gap:.6e} under the frozen margin {margin:.6e}"
    );

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 30.0, "full grid took {elapsed:?}");
    println!(
        "[PASS] a05 foci table: 19 rows, t=0.5 gap {half_gap:.3e} > margin {margin:.3e}, {:.2} s",
        elapsed.as_secs_f64()
    );
}

#[test]
fn a06_reflection_coordinate_suite() {
    let report = reflection_suite(1000, 42, &Tolerances::DEFAULT);
    assert_suite(&report);
    let measured = |name: &str| {
        report
            .checks
            .iter()
            .find(|c| c.name == name)
            .unwrap()
            .measured
    };
    println!(
        "[PASS] a06 reflection suite: euclidean max {:.3e}, decay slope error {:.3e}",
        measured("euclidean-consistency-max"),
        measured("quadratic-decay-slope-error")
    );
}

#[test]
fn a07_confocal_tangent_suite() {
    let report = confocal_suite(10, 42, &Tolerances::DEFAULT).unwrap();
    assert_suite(&report);
    let measured = |name: &str| {
        report
            .checks
            .iter()
            .find(|c| c.name == name)
            .unwrap()
            .measured
    };
    println!(
        "[PASS] a07 confocal suite: tangent match {:.3e}, foci incidence {:.3e}, circle isotropy {:.3e}",
        measured("tangent-match-max"),
        measured("foci-incidence-max"),
        measured("circle-center-isotropy")
    );
}

#[test]
fn a08_isotropic_limit_suite() {
    let start = Instant::now();
    let report = isotropic_limit_suite(&table(1.0, 0.5), &Tolerances::DEFAULT).unwrap();
    assert_suite(&report);
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "limit experiment took {elapsed:?}");
    let measured = |name: &str| {
        report
            .checks
            .iter()
            .find(|c| c.name == name)
            .unwrap()
            .measured
    };
    println!(
        "[PASS] a08 isotropic limit: modulus {:.3e}, exponent error {:.3e}, tangency {:.3e}, {:.3} s",
        measured("limit-modulus-lower"),
        measured("tangent-angle-exponent-error"),
        measured("limit-tangency-residual"),
        elapsed.as_secs_f64()
    );
}

// the axis-crossing suite doubles as a consistency check between the
// library-level criteria above and the CLI-facing report
#[test]
fn a04b_axis_suite_agrees_with_the_direct_checks() {
    let report = axis_crossing_suite(&table(1.0, 0.5), SWEEP, &Tolerances::DEFAULT).unwrap();
    assert_suite(&report);
}
