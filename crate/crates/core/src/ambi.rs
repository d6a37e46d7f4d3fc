//! Solver and exact closed forms for the symmetric three-phase path,
//! whose swept shape is the ambidextrous sofa: the largest known shape
//! that can turn both left and right through the hallway.
//!
//! The path runs through regimes 1, 6, 5 on `[0, beta]`,
//! `[beta, pi/2 - beta]`, `[pi/2 - beta, pi/2]`. Mirror symmetry makes
//! everything hinge on the single switching angle `beta`: given `beta`,
//! all twelve remaining parameters satisfy affine conditions, and `beta`
//! itself is pinned by requiring the corner's tangential velocity to
//! vanish where the corner contact switches on. That condition reduces to
//! `tan(beta)` being the real root of `4 z^3 + 3 z - 1`, which is why
//! every parameter here is an algebraic number with a small closed form.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, SQRT_2};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{frame_at_unchecked, Vec2};
use crate::numerics::{integrate, newton_scalar, solve_linear};
use crate::ode::{Sol, SolFamily};
use crate::path::{contact_points, PathSegment, RotationPath, SegmentKind};

/// Parameters of the three-phase symmetric path.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AmbiParams {
    pub beta: f64,
    pub kappa11: f64,
    pub kappa12: f64,
    pub kappa61: f64,
    pub kappa62: f64,
    pub kappa51: f64,
    pub kappa52: f64,
    pub a1: f64,
    pub a2: f64,
    pub e1: f64,
    pub e2: f64,
    pub f1: f64,
    pub f2: f64,
}

impl AmbiParams {
    /// The three closed-form phases in order.
    pub fn sols(&self) -> [Sol; 3] {
        [
            Sol::new(
                SolFamily::Sol1,
                [self.a1, self.a2],
                Vec2::new(self.kappa11, self.kappa12),
            ),
            Sol::new(
                SolFamily::Sol6,
                [self.f1, self.f2],
                Vec2::new(self.kappa61, self.kappa62),
            ),
            Sol::new(
                SolFamily::Sol5,
                [self.e1, self.e2],
                Vec2::new(self.kappa51, self.kappa52),
            ),
        ]
    }

    pub fn phase_spans(&self) -> [(f64, f64); 3] {
        [
            (0.0, self.beta),
            (self.beta, FRAC_PI_2 - self.beta),
            (FRAC_PI_2 - self.beta, FRAC_PI_2),
        ]
    }

    pub fn path(&self) -> Result<RotationPath> {
        let segments = self
            .sols()
            .into_iter()
            .zip(self.phase_spans())
            .map(|(sol, (t_lo, t_hi))| PathSegment {
                kind: SegmentKind::Sol(sol),
                t_lo,
                t_hi,
                contacts: sol.family.case().contacts(),
            })
            .collect();
        RotationPath::new(segments)
    }

    /// Values paired with names, in reporting order.
    pub fn table(&self) -> [(&'static str, f64); 13] {
        [
            ("beta", self.beta),
            ("kappa11", self.kappa11),
            ("kappa12", self.kappa12),
            ("kappa61", self.kappa61),
            ("kappa62", self.kappa62),
            ("kappa51", self.kappa51),
            ("kappa52", self.kappa52),
            ("a1", self.a1),
            ("a2", self.a2),
            ("e1", self.e1),
            ("e2", self.e2),
            ("f1", self.f1),
            ("f2", self.f2),
        ]
    }
}

const N_UNKNOWNS: usize = 12;

fn params_from(beta: f64, u: &[f64]) -> AmbiParams {
    AmbiParams {
        beta,
        kappa11: u[0],
        kappa12: u[1],
        kappa61: u[2],
        kappa62: u[3],
        kappa51: u[4],
        kappa52: u[5],
        a1: u[6],
        a2: u[7],
        e1: u[8],
        e2: u[9],
        f1: u[10],
        f2: u[11],
    }
}

/// Residuals of the twelve conditions that are affine in the unknowns.
fn linear_equation_residuals(beta: f64, u: &[f64]) -> [f64; N_UNKNOWNS] {
    let params = params_from(beta, u);
    let [s1, s6, s5] = params.sols();
    let late = FRAC_PI_2 - beta;

    let c16_pos = s1.position(beta) - s6.position(beta);
    let c16_vel = s1.velocity(beta) - s6.velocity(beta);
    let c65_pos = s6.position(late) - s5.position(late);

    [
        // Mirror symmetry ties the outer phases together and fixes the
        // direction of the middle phase's coefficient pair.
        params.e1 - params.a1,
        params.e2 + params.a2,
        params.f2 - (1.0 - SQRT_2) * params.f1,
        // Anchoring: the A contact starts at (1, 1/2) on the symmetry
        // line, forcing kappa_1 and the phase 1 coefficients.
        params.kappa11 + params.a1 - 1.0,
        params.a2,
        params.kappa12 - 0.5,
        // Continuity at the first junction; position continuity at the
        // mirrored one.
        c16_pos.x,
        c16_pos.y,
        c16_vel.x,
        c16_vel.y,
        c65_pos.x,
        c65_pos.y,
    ]
}

fn solve_linear_stage(beta: f64) -> Result<AmbiParams> {
    let zero = [0.0; N_UNKNOWNS];
    let base = linear_equation_residuals(beta, &zero);
    let mut matrix = vec![vec![0.0; N_UNKNOWNS]; N_UNKNOWNS];
    for j in 0..N_UNKNOWNS {
        let mut unit = [0.0; N_UNKNOWNS];
        unit[j] = 1.0;
        let shifted = linear_equation_residuals(beta, &unit);
        for i in 0..N_UNKNOWNS {
            matrix[i][j] = shifted[i] - base[i];
        }
    }
    let rhs: Vec<f64> = base.iter().map(|v| -v).collect();
    let u = solve_linear(matrix, rhs)?;
    Ok(params_from(beta, &u))
}

/// Tangential corner velocity at the first junction. The switching angle
/// is the `beta` where this vanishes.
fn switching_residual(beta: f64) -> f64 {
    match solve_linear_stage(beta) {
        Ok(params) => {
            let [s1, _, _] = params.sols();
            let f = frame_at_unchecked(beta);
            s1.velocity(beta).dot(f.mu)
        }
        Err(_) => f64::NAN,
    }
}

/// Solve for the parameter set numerically.
pub fn solve_ambi(tol: f64) -> Result<AmbiParams> {
    // Bracket the switching angle before polishing with Newton.
    let grid: Vec<f64> = (1..=11).map(|k| 0.05 * k as f64).collect();
    let mut bracket = None;
    for pair in grid.windows(2) {
        let (lo, hi) = (pair[0], pair[1]);
        let (r_lo, r_hi) = (switching_residual(lo), switching_residual(hi));
        if r_lo.is_finite() && r_hi.is_finite() && r_lo.signum() != r_hi.signum() {
            bracket = Some((lo, hi));
            break;
        }
    }
    let bracket = bracket.ok_or(Error::RootFindingFailed {
        iterations: 0,
        residual: f64::NAN,
        last: vec![FRAC_PI_4 / 2.0],
    })?;
    let beta = newton_scalar(switching_residual, FRAC_PI_4 / 2.0, bracket, tol)?;
    solve_linear_stage(beta)
}

// ---- closed forms ----

/// The switching angle: `arctan` of the real root of `4 z^3 + 3 z - 1`.
pub fn closed_form_beta() -> f64 {
    let tan_beta = 0.5 * ((SQRT_2 + 1.0).cbrt() - (SQRT_2 - 1.0).cbrt());
    tan_beta.atan()
}

/// Every parameter as an exact algebraic expression.
pub fn closed_form_params() -> AmbiParams {
    let beta = closed_form_beta();
    let a1 = 0.25
        * (4.0 + (71.0 + 8.0 * SQRT_2).cbrt() + (71.0 - 8.0 * SQRT_2).cbrt()).sqrt();
    let f1 = (83.0 + (420619.0 + 15104.0 * SQRT_2).cbrt() + (420619.0 - 15104.0 * SQRT_2).cbrt())
        .powf(0.25)
        / (3.0 * (2.0 * (2.0 - SQRT_2)).sqrt());
    AmbiParams {
        beta,
        kappa11: 1.0 - a1,
        kappa12: 0.5,
        kappa61: 1.0 - 4.0 * a1 / 3.0,
        kappa62: 0.5,
        kappa51: 1.0 - 5.0 * a1 / 3.0,
        kappa52: 0.5,
        a1,
        a2: 0.0,
        e1: a1,
        e2: 0.0,
        f1,
        f2: -(SQRT_2 - 1.0) * f1,
    }
}

/// Exact area of the swept sofa:
/// `cbrt(3 + 2 sqrt 2) + cbrt(3 - 2 sqrt 2) - 1 + beta`.
pub fn closed_form_area() -> f64 {
    (3.0 + 2.0 * SQRT_2).cbrt() + (3.0 - 2.0 * SQRT_2).cbrt() - 1.0 + closed_form_beta()
}

/// Exact length of the sofa: `(8/3) a1`.
pub fn closed_form_length() -> f64 {
    8.0 * closed_form_params().a1 / 3.0
}

/// The switching condition after eliminating the linear unknowns by hand.
/// Vanishes at the true `beta`; used as an independent cross-check on the
/// nested numerical solve.
pub fn reduced_switching_residual(beta: f64) -> f64 {
    let (s1, c1) = (0.5 * beta).sin_cos();
    let (s3, c3) = (1.5 * beta).sin_cos();
    3.0 * s1 + s3 + (SQRT_2 - 1.0) * (-3.0 * c1 + c3)
}

// ---- derived quantities ----

/// Area of the swept sofa, computed by integrating the boundary motion.
///
/// Writing `A`, `B` for the outer and inner wall contacts on the vertical
/// arm and `x` for the corner path, the shape's symmetry about both
/// `y = 1/2` and the vertical line through `x(pi/4)` folds the boundary
/// integral `oint (x - 1/2) dy` into three pieces along those contact
/// curves plus the rectangle the fold leaves between the bite's lowest
/// point and the centerline:
///
/// ```text
///   4 [ int_beta^{pi/2} (A_1 - 1/2) A_2' dt
///       + int_beta^{pi/2} (B_1 - 1/2) B_2' dt
///       + int_beta^{pi/4} (1/2 - x_1) x_2' dt ]
///   + 2 (1 - 2 x_1(pi/4)) (1/2 - x_2(pi/4))
/// ```
///
/// Each integral is split at the phase junction `pi/2 - beta` so the
/// quadrature only ever sees smooth integrands.
pub fn area_by_integral(params: &AmbiParams, tol: f64) -> Result<f64> {
    let path = params.path()?;
    let late = FRAC_PI_2 - params.beta;

    let a_term = |t: f64| {
        let f = frame_at_unchecked(t);
        let x = path.position(t);
        let v = path.velocity(t);
        let acc = path.acceleration(t);
        let a1 = x.x + v.dot(f.mu) * f.nu.x + f.mu.x;
        let rate = (acc.dot(f.mu) + 2.0 * v.dot(f.nu) + 1.0) * f.nu.y;
        (a1 - 0.5) * rate
    };
    let b_term = |t: f64| {
        let f = frame_at_unchecked(t);
        let x = path.position(t);
        let v = path.velocity(t);
        let acc = path.acceleration(t);
        let b1 = x.x + v.dot(f.mu) * f.nu.x;
        let rate = (acc.dot(f.mu) + 2.0 * v.dot(f.nu)) * f.nu.y;
        (b1 - 0.5) * rate
    };
    let x_term = |t: f64| {
        let x = path.position(t);
        let v = path.velocity(t);
        (0.5 - x.x) * v.y
    };

    let piece_tol = tol / 8.0;
    let mut total = 0.0;
    total += integrate(a_term, params.beta, late, piece_tol)?;
    total += integrate(a_term, late, FRAC_PI_2, piece_tol)?;
    total += integrate(b_term, params.beta, late, piece_tol)?;
    total += integrate(b_term, late, FRAC_PI_2, piece_tol)?;
    total += integrate(x_term, params.beta, FRAC_PI_4, piece_tol)?;

    let mid = path.position(FRAC_PI_4);
    Ok(4.0 * total + 2.0 * (1.0 - 2.0 * mid.x) * (0.5 - mid.y))
}

/// Length of the sofa: the horizontal extent from the fixed right end of
/// the A contact to the fixed left end of the C contact.
pub fn length(params: &AmbiParams) -> Result<f64> {
    let path = params.path()?;
    let pts = contact_points(&path, FRAC_PI_2)?;
    Ok(1.0 - pts.c.x)
}

/// Conditions that hold at the solution without being imposed: velocity
/// continuity at the second junction, and the incidence of the path ends
/// with the inner-wall contacts. Each entry is the largest component of a
/// vector condition.
pub fn redundancy_checks(params: &AmbiParams) -> Vec<(&'static str, f64)> {
    let [s1, s6, s5] = params.sols();
    let beta = params.beta;
    let late = FRAC_PI_2 - beta;

    let v65 = s6.velocity(late) - s5.velocity(late);

    let f_beta = frame_at_unchecked(beta);
    let b = s6.position(beta) + f_beta.nu * s6.velocity(beta).dot(f_beta.mu);
    let start_on_b = s1.position(beta) - b;

    let f_late = frame_at_unchecked(late);
    let d = s6.position(late) - f_late.mu * s6.velocity(late).dot(f_late.nu);
    let end_on_d = s5.position(late) - d;

    vec![
        ("velocity match 6|5", v65.max_abs()),
        ("junction on inner wall contact B", start_on_b.max_abs()),
        ("mirrored junction on inner wall contact D", end_on_d.max_abs()),
    ]
}

/// Published reference values for the solved parameters.
#[allow(clippy::excessive_precision)]
pub mod reference {
    pub const BETA: f64 = 0.289653820817320941;
    pub const KAPPA11: f64 = 0.124712637587267758;
    pub const KAPPA12: f64 = 0.5;
    pub const KAPPA61: f64 = -0.167049816550309655;
    pub const KAPPA62: f64 = 0.5;
    pub const KAPPA51: f64 = -0.458812270687887068;
    pub const KAPPA52: f64 = 0.5;
    pub const A1: f64 = 0.875287362412732241;
    pub const A2: f64 = 0.0;
    pub const E1: f64 = 0.875287362412732241;
    pub const E2: f64 = 0.0;
    pub const F1: f64 = 1.202938908156911389;
    pub const F2: f64 = -0.498273610464875672;

    pub const AREA: f64 = 1.644955218425440;
    pub const LENGTH: f64 = 2.334099633100619;

    pub const TABLE: [(&str, f64); 13] = [
        ("beta", BETA),
        ("kappa11", KAPPA11),
        ("kappa12", KAPPA12),
        ("kappa61", KAPPA61),
        ("kappa62", KAPPA62),
        ("kappa51", KAPPA51),
        ("kappa52", KAPPA52),
        ("a1", A1),
        ("a2", A2),
        ("e1", E1),
        ("e2", E2),
        ("f1", F1),
        ("f2", F2),
    ];
}
