//! Algebraic verification of the ambidextrous sofa.
//!
//! The constants behind the shape are algebraic numbers, and its boundary
//! pieces lie on algebraic curves. This module checks both claims
//! numerically: minimal polynomials evaluated at the computed constants,
//! and sextic curve equations evaluated at sampled boundary points after
//! an affine change of coordinates.
//!
//! Key design points:
//!
//! * Polynomial residuals pass when `|p(v)| <= 1e-8 * (1 + |p'(v)|)`,
//!   which bounds the backward error in `v` rather than the raw value,
//!   so high-degree rows with huge coefficients are judged fairly.
//! * The boundary segment table fixes a counterclockwise labeling
//!   starting at the rightmost point `(1, 1/2)` and records which contact
//!   curve, phase, and mirror produce each of the 18 segments.

use crate::ambi::AmbiParams;
use crate::error::{Error, Result};
use crate::geometry::Vec2;
use crate::ode::ContactKind;
use crate::shape::contact_curve_point;

// ---- integer polynomials ----

/// A polynomial with integer coefficients, ascending in degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntPolynomial {
    coefficients: Vec<i64>,
}

impl IntPolynomial {
    pub fn new(coefficients: Vec<i64>) -> Result<Self> {
        match coefficients.last() {
            None => Err(Error::InvalidParameter {
                name: "coefficients",
                reason: "empty polynomial".to_string(),
            }),
            Some(0) => Err(Error::InvalidParameter {
                name: "coefficients",
                reason: "leading coefficient is zero".to_string(),
            }),
            Some(_) => Ok(IntPolynomial { coefficients }),
        }
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn coefficients(&self) -> &[i64] {
        &self.coefficients
    }

    /// Horner evaluation of the polynomial and its derivative.
    pub fn eval_with_derivative(&self, x: f64) -> (f64, f64) {
        let mut value = 0.0;
        let mut derivative = 0.0;
        for &c in self.coefficients.iter().rev() {
            derivative = derivative * x + value;
            value = value * x + c as f64;
        }
        (value, derivative)
    }
}

/// Outcome of one minimal-polynomial residual check.
#[derive(Debug, Clone)]
pub struct PolyCheck {
    pub quantity: &'static str,
    pub value: f64,
    pub residual: f64,
    pub threshold: f64,
}

impl PolyCheck {
    pub fn passes(&self) -> bool {
        self.residual <= self.threshold
    }
}

/// Evaluate `|p(value)|` against the gradient-scaled threshold.
pub fn check_min_poly(quantity: &'static str, p: &IntPolynomial, value: f64) -> PolyCheck {
    let (v, d) = p.eval_with_derivative(value);
    PolyCheck {
        quantity,
        value,
        residual: v.abs(),
        threshold: 1e-8 * (1.0 + d.abs()),
    }
}

/// The ten minimal polynomials of the shape's algebraic constants, keyed
/// by the quantity they annihilate.
pub fn minimal_polynomials() -> Vec<(&'static str, IntPolynomial)> {
    let poly = |coeffs: &[i64]| IntPolynomial::new(coeffs.to_vec()).unwrap();
    vec![
        ("tan(beta)", poly(&[-1, 3, 0, 4])),
        ("sin(beta)", poly(&[-1, 0, 12, 0, 3, 0, 2])),
        ("cos(beta)", poly(&[-16, 0, 24, 0, -9, 0, 2])),
        ("a1 and e1", poly(&[-1, 0, -24, 0, -1536, 0, 2048])),
        (
            "f1 and f2",
            poly(&[
                256, 0, -13824, 0, 256608, 0, -1936224, 0, 6672537, 0, -9920232, 0, 4251528,
            ]),
        ),
        (
            "kappa_{1,1}",
            poly(&[487, -6096, 21480, -34816, 29184, -12288, 2048]),
        ),
        (
            "kappa_{6,1}",
            poly(&[-272, -432, 5076, -10692, 9963, -4374, 729]),
        ),
        (
            "kappa_{5,1}",
            poly(&[
                -1768033, 3753648, 3597480, -17418240, 19284480, -8957952, 1492992,
            ]),
        ),
        ("area minus beta", poly(&[-8, 0, 3, 1])),
        ("lambda", poly(&[-128, 0, -432, 0, -3888, 0, 729])),
    ]
}

/// Run every minimal-polynomial row against the solved parameters, the
/// computed area, and the computed length. The two shared rows are
/// checked at both of their annihilated values, giving twelve checks.
pub fn check_all_minimal_polynomials(params: &AmbiParams, area: f64, length: f64) -> Vec<PolyCheck> {
    let polys = minimal_polynomials();
    let by_name = |name: &str| -> &IntPolynomial {
        &polys.iter().find(|(n, _)| *n == name).unwrap().1
    };
    vec![
        check_min_poly("tan(beta)", by_name("tan(beta)"), params.beta.tan()),
        check_min_poly("sin(beta)", by_name("sin(beta)"), params.beta.sin()),
        check_min_poly("cos(beta)", by_name("cos(beta)"), params.beta.cos()),
        check_min_poly("a1", by_name("a1 and e1"), params.a1),
        check_min_poly("e1", by_name("a1 and e1"), params.e1),
        check_min_poly("f1", by_name("f1 and f2"), params.f1),
        check_min_poly("f2", by_name("f1 and f2"), params.f2),
        check_min_poly("kappa_{1,1}", by_name("kappa_{1,1}"), params.kappa11),
        check_min_poly("kappa_{6,1}", by_name("kappa_{6,1}"), params.kappa61),
        check_min_poly("kappa_{5,1}", by_name("kappa_{5,1}"), params.kappa51),
        check_min_poly(
            "area minus beta",
            by_name("area minus beta"),
            area - params.beta,
        ),
        check_min_poly("lambda", by_name("lambda"), length),
    ]
}

// ---- sextic boundary curves ----

/// Coefficients of the sextic curves, generated by the cubic number
/// `Z = (4+2*sqrt(2))^(1/3) + (4-2*sqrt(2))^(1/3)`.
#[derive(Debug, Clone)]
pub struct CurveConstants {
    pub z: f64,
    pub gamma: [f64; 5],
    pub alpha: [f64; 4],
}

impl CurveConstants {
    pub fn new() -> Self {
        let s2 = 2.0f64.sqrt();
        let z = (4.0 + 2.0 * s2).cbrt() + (4.0 - 2.0 * s2).cbrt();
        assert!(
            (z * z * z - 6.0 * z - 8.0).abs() <= 1e-12,
            "Z fails its cubic"
        );
        let z2 = z * z;
        let gamma = [
            -3.0 * z + 14.0,
            -z + 4.0,
            -27.0 * z2 + 156.0 * z - 190.0,
            8.0 * z2 - 26.0 * z + 8.0,
            9.0 * z - 20.0,
        ];
        let alpha = [
            -3.0 * z + 16.0,
            27.0 * z2 - 240.0 * z + 592.0,
            12.0 * z2 - 54.0 * z + 56.0,
            -9.0 * z + 28.0,
        ];
        assert!(gamma[1] >= 0.0, "gamma_2 radicand is negative");
        assert!(gamma[3] >= 0.0, "gamma_4 radicand is negative");
        assert!(alpha[2] >= 0.0, "alpha_3 radicand is negative");
        CurveConstants { z, gamma, alpha }
    }
}

impl Default for CurveConstants {
    fn default() -> Self {
        CurveConstants::new()
    }
}

/// The scale of the affine change of variables, `(1/4) sqrt(2-sqrt 2) f1`.
pub fn curve_scale(params: &AmbiParams) -> f64 {
    0.25 * (2.0 - 2.0f64.sqrt()).sqrt() * params.f1
}

/// Map a point from sofa coordinates to the curves' `(X, Y)` frame.
pub fn to_curve_coords(p: Vec2, params: &AmbiParams) -> Vec2 {
    let s = curve_scale(params);
    Vec2::new((p.x - params.kappa61) / s, (p.y - params.kappa62) / s)
}

/// Evaluate the three sextics at a point of the `(X, Y)` frame,
/// returned as `(P, Q, R)`.
pub fn eval_curves(x: f64, y: f64, c: &CurveConstants) -> (f64, f64, f64) {
    let r2 = x * x + y * y;
    let p = (r2 - 8.0).powi(3) - 216.0 * (y - x).powi(2);
    let q = r2.powi(3) - 12.0 * c.gamma[0] * r2.powi(2)
        - 216.0 * c.gamma[1].sqrt() * r2 * (y - x)
        - 12.0 * c.gamma[2] * r2
        - 432.0 * c.gamma[3].sqrt() * (y - x)
        + 432.0 * x * y
        - 32.0 * c.gamma[4];
    let r = r2.powi(3) - 24.0 * c.alpha[0] * r2.powi(2) + 48.0 * c.alpha[1] * r2
        + 13824.0 * c.alpha[2].sqrt() * y
        + 4096.0 * c.alpha[3];
    (p, q, r)
}

// ---- boundary segment fixture ----

/// The algebraic curve a boundary segment is claimed to lie on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SigmaCurve {
    P,
    Q,
    R,
    /// Circle of radius 1/2 about the first focal point.
    CircleF1,
    /// Circle of radius 1/2 about the second focal point.
    CircleF2,
}

impl SigmaCurve {
    pub fn label(self) -> &'static str {
        match self {
            SigmaCurve::P => "sextic P",
            SigmaCurve::Q => "sextic Q",
            SigmaCurve::R => "sextic R",
            SigmaCurve::CircleF1 => "circle about F1",
            SigmaCurve::CircleF2 => "circle about F2",
        }
    }
}

/// One labeled boundary segment of the ambidextrous sofa.
#[derive(Debug, Clone, Copy)]
pub struct SigmaSegment {
    /// Index 1 through 18, clockwise from the rightmost point.
    pub id: usize,
    pub contact: ContactKind,
    /// Index into the rotation path's segments (0 through 2).
    pub phase: usize,
    /// Reflected across the strip's center line `y = 1/2`.
    pub mirrored: bool,
    /// The declared curve, if the segment has one.
    pub curve: Option<SigmaCurve>,
}

/// The 18 boundary segments in clockwise order from `(1, 1/2)`.
///
/// The rightmost point itself is the stationary outer contact of phase 1
/// (a degenerate, single-point curve), so the walk opens with the mirror
/// image of the moving outer contact of phase 2.
pub fn sigma_segments() -> [SigmaSegment; 18] {
    use ContactKind::{A, B, C, D, X};
    use SigmaCurve::{CircleF1, CircleF2, P, Q, R};
    let seg = |id, contact, phase, mirrored, curve| SigmaSegment {
        id,
        contact,
        phase,
        mirrored,
        curve,
    };
    [
        seg(1, A, 1, true, None),
        seg(2, A, 2, true, Some(CircleF2)),
        seg(3, B, 2, false, Some(CircleF2)),
        seg(4, B, 1, false, Some(Q)),
        seg(5, X, 1, false, Some(R)),
        seg(6, D, 1, false, None),
        seg(7, D, 0, false, Some(CircleF1)),
        seg(8, C, 0, true, Some(CircleF1)),
        seg(9, C, 1, true, Some(P)),
        seg(10, C, 1, false, None),
        seg(11, C, 0, false, Some(CircleF1)),
        seg(12, D, 0, true, Some(CircleF1)),
        seg(13, D, 1, true, None),
        seg(14, X, 1, true, None),
        seg(15, B, 1, true, None),
        seg(16, B, 2, true, Some(CircleF2)),
        seg(17, A, 2, false, Some(CircleF2)),
        seg(18, A, 1, false, Some(P)),
    ]
}

/// The centers of the radius-1/2 circular boundary arcs, as `(F1, F2)`.
///
/// During phase 1 the two corner-side contacts stay at distance 1/2 from
/// `F1`; during phase 3 the two wall-side contacts orbit `F2`.
pub fn focal_points(params: &AmbiParams) -> (Vec2, Vec2) {
    (
        Vec2::new(1.0 - 2.0 * params.a1, 0.5),
        Vec2::new(params.kappa51 + params.e1, 0.5),
    )
}

/// Distance between the two focal points; equals half the sofa's length.
pub fn focal_separation(params: &AmbiParams) -> f64 {
    let (f1, f2) = focal_points(params);
    f1.dist(f2)
}

/// Outcome of sampling one boundary segment against its declared curve.
#[derive(Debug, Clone)]
pub struct CurveCheck {
    pub segment: usize,
    pub curve: SigmaCurve,
    pub samples: usize,
    pub max_residual: f64,
    pub threshold: f64,
}

impl CurveCheck {
    pub fn passes(&self) -> bool {
        self.max_residual <= self.threshold
    }
}

/// Sample a boundary segment from its contact-path formula and measure
/// how far the samples stray from the declared algebraic curve.
pub fn check_curve_membership(
    params: &AmbiParams,
    segment_id: usize,
    samples: usize,
) -> Result<CurveCheck> {
    if samples < 2 {
        return Err(Error::InvalidParameter {
            name: "samples",
            reason: format!("{samples} is fewer than 2"),
        });
    }
    let spec = sigma_segments()
        .into_iter()
        .find(|s| s.id == segment_id)
        .ok_or(Error::UnknownSegment { id: segment_id })?;
    let Some(curve) = spec.curve else {
        return Err(Error::UnknownSegment { id: segment_id });
    };

    let path = params.path()?;
    let seg = &path.segments()[spec.phase];
    let constants = CurveConstants::new();
    let (f1, f2) = focal_points(params);

    let mut max_residual = 0.0f64;
    for k in 0..samples {
        let t = seg.t_lo + (seg.t_hi - seg.t_lo) * (k as f64) / (samples - 1) as f64;
        let p = contact_curve_point(seg, spec.contact, t, spec.mirrored);
        let residual = match curve {
            SigmaCurve::CircleF1 => (p.dist(f1) - 0.5).abs(),
            SigmaCurve::CircleF2 => (p.dist(f2) - 0.5).abs(),
            _ => {
                let c = to_curve_coords(p, params);
                let (pv, qv, rv) = eval_curves(c.x, c.y, &constants);
                match curve {
                    SigmaCurve::P => pv.abs(),
                    SigmaCurve::Q => qv.abs(),
                    SigmaCurve::R => rv.abs(),
                    _ => unreachable!(),
                }
            }
        };
        max_residual = max_residual.max(residual);
    }

    Ok(CurveCheck {
        segment: segment_id,
        curve,
        samples,
        max_residual,
        threshold: 1e-7,
    })
}

/// Check every segment that declares a curve: the four sextic pieces and
/// the eight circular arcs.
pub fn check_all_curves(params: &AmbiParams, samples: usize) -> Result<Vec<CurveCheck>> {
    sigma_segments()
        .into_iter()
        .filter(|s| s.curve.is_some())
        .map(|s| check_curve_membership(params, s.id, samples))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ambi::{closed_form_area, closed_form_length, closed_form_params};
    use approx::assert_abs_diff_eq;

    #[test]
    fn horner_matches_direct_evaluation() {
        let p = IntPolynomial::new(vec![-1, 3, 0, 4]).unwrap();
        let x = 0.7;
        let (v, d) = p.eval_with_derivative(x);
        assert_abs_diff_eq!(v, 4.0 * x * x * x + 3.0 * x - 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(d, 12.0 * x * x + 3.0, epsilon = 1e-15);
        assert_eq!(p.degree(), 3);
    }

    #[test]
    fn degenerate_polynomials_are_rejected() {
        assert!(IntPolynomial::new(vec![]).is_err());
        assert!(IntPolynomial::new(vec![1, 2, 0]).is_err());
    }

    #[test]
    fn tan_beta_annihilates_its_cubic() {
        let params = closed_form_params();
        let p = IntPolynomial::new(vec![-1, 3, 0, 4]).unwrap();
        let (v, _) = p.eval_with_derivative(params.beta.tan());
        assert!(v.abs() <= 1e-13, "cubic residual {:.3e}", v);
    }

    #[test]
    fn every_table_row_passes() {
        let params = closed_form_params();
        let checks = check_all_minimal_polynomials(&params, closed_form_area(), closed_form_length());
        assert_eq!(checks.len(), 12);
        for check in &checks {
            assert!(
                check.passes(),
                "{}: residual {:.3e} over threshold {:.3e}",
                check.quantity,
                check.residual,
                check.threshold
            );
        }
    }

    #[test]
    fn curve_constants_satisfy_their_relations() {
        let c = CurveConstants::new();
        assert_abs_diff_eq!(c.z.powi(3), 6.0 * c.z + 8.0, epsilon = 1e-12);
        assert!(c.gamma[1] > 0.0 && c.gamma[3] > 0.0 && c.alpha[2] > 0.0);
    }

    #[test]
    fn sextic_values_at_known_points() {
        let c = CurveConstants::new();
        let (p, _, _) = eval_curves(2.0, 2.0, &c);
        assert_abs_diff_eq!(p, 0.0, epsilon = 1e-12);
        let (p0, _, _) = eval_curves(0.0, 0.0, &c);
        assert_abs_diff_eq!(p0, -512.0, epsilon = 1e-12);
    }

    #[test]
    fn p_is_symmetric_across_the_antidiagonal() {
        let c = CurveConstants::new();
        for &(x, y) in &[(0.3, -1.7), (2.5, 0.1), (-3.0, 2.0), (1.234, 4.321)] {
            let (p, _, _) = eval_curves(x, y, &c);
            let (p_ref, _, _) = eval_curves(-y, -x, &c);
            assert_abs_diff_eq!(p, p_ref, epsilon = 1e-10);
        }
    }

    #[test]
    fn curve_coordinates_center_and_scale() {
        let params = closed_form_params();
        let center = Vec2::new(params.kappa61, params.kappa62);
        let origin = to_curve_coords(center, &params);
        assert_abs_diff_eq!(origin.x, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(origin.y, 0.0, epsilon = 1e-15);
        let unit = to_curve_coords(center + Vec2::new(curve_scale(&params), 0.0), &params);
        assert_abs_diff_eq!(unit.x, 1.0, epsilon = 1e-14);
    }

    #[test]
    fn all_declared_segments_lie_on_their_curves() {
        let params = closed_form_params();
        let checks = check_all_curves(&params, 200).unwrap();
        assert_eq!(checks.len(), 12);
        for check in &checks {
            assert!(
                check.passes(),
                "segment {} on {}: residual {:.3e}",
                check.segment,
                check.curve.label(),
                check.max_residual
            );
        }
    }

    #[test]
    fn segments_without_curves_are_rejected() {
        let params = closed_form_params();
        assert!(check_curve_membership(&params, 1, 200).is_err());
        assert!(check_curve_membership(&params, 19, 200).is_err());
        assert!(check_curve_membership(&params, 0, 200).is_err());
    }

    #[test]
    fn focal_distance_is_half_the_length() {
        let params = closed_form_params();
        let sep = focal_separation(&params);
        assert_abs_diff_eq!(sep, closed_form_length() / 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(sep, 4.0 / 3.0 * params.a1, epsilon = 1e-12);
    }
}
