//! Cross-checks between the solvers and routes that do not share code with
//! them: finite-difference contact oracles, the reduced switching equation,
//! residuals of the classic system, and solver-vs-closed-form agreement.

use std::f64::consts::FRAC_PI_2;

use sofa_core::path::{check_well_behaved, contact_points, contact_points_oracle};
use sofa_core::{ambi, gerver};
use sofa_core::RotationPath;

// ---- helpers ----

fn sample_angles(path: &RotationPath, per_segment: usize) -> Vec<f64> {
    // Stay clear of segment junctions, where one-sided differences of the
    // oracle would straddle a switch.
    let margin = 1e-3;
    path.segments()
        .iter()
        .flat_map(|seg| {
            (0..per_segment).map(move |k| {
                let u = (k as f64 + 0.5) / per_segment as f64;
                seg.t_lo + margin + u * (seg.t_hi - seg.t_lo - 2.0 * margin)
            })
        })
        .collect()
}

fn assert_oracle_agrees(path: &RotationPath, label: &str) {
    for t in sample_angles(path, 8) {
        let analytic = contact_points(path, t).expect("contacts");
        let oracle = contact_points_oracle(path, t, 1e-6).expect("oracle");
        for (have, want, name) in [
            (analytic.a, oracle.a, "A"),
            (analytic.b, oracle.b, "B"),
            (analytic.c, oracle.c, "C"),
            (analytic.d, oracle.d, "D"),
        ] {
            assert!(
                have.dist(want) <= 1e-4,
                "{label} {name}(t) at t {t:.4}: analytic {have:?} vs oracle {want:?}"
            );
        }
    }
}

// ---- contact oracles ----

#[test]
fn contact_formulas_agree_with_the_support_oracle() {
    let gerver = gerver::solve_gerver(1e-12).expect("gerver solve");
    assert_oracle_agrees(&gerver.path().expect("path"), "gerver");

    let ambi = ambi::closed_form_params();
    assert_oracle_agrees(&ambi.path().expect("path"), "ambi");

    let hammersley = sofa_core::path::hammersley_path(0.55).expect("path");
    assert_oracle_agrees(&hammersley, "hammersley");
}

// ---- path regularity ----

#[test]
fn solved_paths_are_well_behaved() {
    let gerver = gerver::solve_gerver(1e-12).expect("gerver solve");
    let violations = check_well_behaved(&gerver.path().expect("path"), 500);
    assert!(
        violations.is_empty(),
        "gerver path violates {} at t {:.6}: {:.3e}",
        violations[0].condition,
        violations[0].t,
        violations[0].value
    );

    let ambi = ambi::closed_form_params();
    let violations = check_well_behaved(&ambi.path().expect("path"), 500);
    assert!(
        violations.is_empty(),
        "ambi path violates {} at t {:.6}: {:.3e}",
        violations[0].condition,
        violations[0].t,
        violations[0].value
    );

    let hammersley = sofa_core::path::hammersley_path(2.0 / std::f64::consts::PI).expect("path");
    let violations = check_well_behaved(&hammersley, 500);
    assert!(
        violations.is_empty(),
        "hammersley path violates {} at t {:.6}: {:.3e}",
        violations[0].condition,
        violations[0].t,
        violations[0].value
    );
}

// ---- solver routes ----

#[test]
fn numeric_ambi_solver_lands_on_the_closed_form() {
    let solved = ambi::solve_ambi(1e-12).expect("ambi solve");
    let closed = ambi::closed_form_params();
    for ((name, got), (_, want)) in solved.table().iter().zip(closed.table()) {
        assert!(
            (got - want).abs() <= 1e-11 * (1.0 + want.abs()),
            "{name}: solver {got:.16} vs closed form {want:.16}"
        );
    }
}

#[test]
fn reduced_switching_equation_vanishes_only_at_beta() {
    let beta = ambi::closed_form_beta();
    let at_root = ambi::reduced_switching_residual(beta);
    assert!(
        at_root.abs() <= 1e-12,
        "switching residual at beta: {at_root:.3e}"
    );
    for offset in [-0.05, -0.01, 0.01, 0.05] {
        let off = ambi::reduced_switching_residual(beta + offset);
        assert!(
            off.abs() > 1e-4,
            "switching residual {off:.3e} too small at beta{offset:+}"
        );
    }
}

#[test]
fn classic_system_residuals_vanish_at_the_solution_only() {
    let classic = gerver::solve_classic(1e-12).expect("classic solve");
    for (i, r) in gerver::classic_residuals(&classic).iter().enumerate() {
        assert!(r.abs() <= 1e-10, "classic residual {i}: {r:.3e}");
    }

    let mut off = classic;
    off.phi += 1e-3;
    let worst = gerver::classic_residuals(&off)
        .iter()
        .fold(0.0f64, |m, r| m.max(r.abs()));
    assert!(
        worst > 1e-5,
        "residuals {worst:.3e} insensitive to a phi shift"
    );
}

#[test]
fn gerver_solver_is_stable_across_tolerances() {
    let tight = gerver::solve_gerver(1e-13).expect("tight solve");
    for tol in [1e-8, 1e-10, 1e-12] {
        let loose = gerver::solve_gerver(tol).expect("solve");
        for ((name, got), (_, want)) in loose.table().iter().zip(tight.table()) {
            assert!(
                (got - want).abs() <= 1e-7 * (1.0 + want.abs()),
                "{name} drifts with tolerance {tol:.0e}: {got:.16} vs {want:.16}"
            );
        }
    }
}

// ---- junction continuity ----

#[test]
fn solved_paths_are_continuous_through_their_junctions() {
    let gerver = gerver::solve_gerver(1e-12).expect("gerver solve");
    for path in [
        gerver.path().expect("path"),
        ambi::closed_form_params().path().expect("path"),
    ] {
        let segs = path.segments();
        for pair in segs.windows(2) {
            let t = pair[0].t_hi;
            let jump = pair[0].kind.position(t).dist(pair[1].kind.position(t));
            assert!(
                jump <= 1e-12,
                "position jump {jump:.3e} at junction t {t:.6}"
            );
        }
        assert!(
            segs[0].t_lo.abs() <= 1e-15
                && (segs[segs.len() - 1].t_hi - FRAC_PI_2).abs() <= 1e-15,
            "segments do not cover the quarter turn"
        );
    }
}
