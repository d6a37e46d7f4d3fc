//! Rotation paths and the contact points they drag along the hallway
//! walls.
//!
//! A rotation path `x(t)`, `t` in `[0, pi/2]`, is the trajectory of the
//! hallway's inner corner while the hallway rotates around the sofa. Such
//! a path determines four wall contact points at every angle:
//!
//! ```text
//!     A = x + <x', mu> nu + mu      outer wall, vertical arm
//!     B = x + <x', mu> nu           inner wall, vertical arm
//!     C = x - <x', nu> mu + nu      outer wall, horizontal arm
//!     D = x - <x', nu> mu           inner wall, horizontal arm
//! ```
//!
//! so that `A - B = mu` and `C - D = nu` exactly. These formulas are the
//! envelope limits of intersecting each wall line at two nearby angles;
//! [`contact_points_oracle`] computes exactly that finite intersection and
//! exists so the closed forms never have to be taken on faith.
//!
//! Paths are piecewise: a list of segments, each a closed-form ODE
//! solution, a circular arc, or a cubic, together with the set of contacts
//! that are genuinely active on that stretch.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{frame_at, frame_at_unchecked, Vec2};
use crate::ode::{ContactKind, ContactSet, Sol};

/// Position mismatch allowed between consecutive segments.
const JUNCTION_TOL: f64 = 1e-9;

/// How a single segment of a rotation path is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum SegmentKind {
    /// Closed-form ODE solution.
    Sol(Sol),
    /// `x(t) = r (cos 2t - 1, sin 2t)`: the inner corner runs along a
    /// circle of radius `r` through the origin, completing a half turn.
    Semicircle { radius: f64 },
    /// Cubic polynomial `c0 + c1 t + c2 t^2 + c3 t^3` for paths that are
    /// not optimal for anything but still legitimate to sweep.
    Cubic { coeffs: [Vec2; 4] },
}

impl SegmentKind {
    pub fn position(&self, t: f64) -> Vec2 {
        match self {
            SegmentKind::Sol(sol) => sol.position(t),
            SegmentKind::Semicircle { radius } => {
                let (s2, c2) = (2.0 * t).sin_cos();
                Vec2::new(radius * (c2 - 1.0), radius * s2)
            }
            SegmentKind::Cubic { coeffs } => {
                let [c0, c1, c2, c3] = *coeffs;
                c0 + c1 * t + c2 * (t * t) + c3 * (t * t * t)
            }
        }
    }

    pub fn velocity(&self, t: f64) -> Vec2 {
        match self {
            SegmentKind::Sol(sol) => sol.velocity(t),
            SegmentKind::Semicircle { radius } => {
                let (s2, c2) = (2.0 * t).sin_cos();
                Vec2::new(-2.0 * radius * s2, 2.0 * radius * c2)
            }
            SegmentKind::Cubic { coeffs } => {
                let [_, c1, c2, c3] = *coeffs;
                c1 + c2 * (2.0 * t) + c3 * (3.0 * t * t)
            }
        }
    }

    pub fn acceleration(&self, t: f64) -> Vec2 {
        match self {
            SegmentKind::Sol(sol) => sol.acceleration(t),
            SegmentKind::Semicircle { radius } => {
                let (s2, c2) = (2.0 * t).sin_cos();
                Vec2::new(-4.0 * radius * c2, -4.0 * radius * s2)
            }
            SegmentKind::Cubic { coeffs } => {
                let [_, _, c2, c3] = *coeffs;
                c2 * 2.0 + c3 * (6.0 * t)
            }
        }
    }
}

/// One stretch of a rotation path.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PathSegment {
    pub kind: SegmentKind,
    pub t_lo: f64,
    pub t_hi: f64,
    /// Contacts actually realized on the sofa boundary along this stretch.
    pub contacts: ContactSet,
}

/// Piecewise rotation path covering `[0, pi/2]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RotationPath {
    segments: Vec<PathSegment>,
}

impl RotationPath {
    /// Validate and assemble a path. Segments must tile `[0, pi/2]` in
    /// order and meet continuously.
    pub fn new(segments: Vec<PathSegment>) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::InvalidPath {
                reason: "no segments".into(),
            });
        }
        let first = &segments[0];
        if first.t_lo.abs() > JUNCTION_TOL {
            return Err(Error::InvalidPath {
                reason: format!("first segment starts at {} instead of 0", first.t_lo),
            });
        }
        let last = segments.last().unwrap();
        if (last.t_hi - FRAC_PI_2).abs() > JUNCTION_TOL {
            return Err(Error::InvalidPath {
                reason: format!("last segment ends at {} instead of pi/2", last.t_hi),
            });
        }
        for (i, seg) in segments.iter().enumerate() {
            if seg.t_hi.partial_cmp(&seg.t_lo) != Some(std::cmp::Ordering::Greater) {
                return Err(Error::InvalidPath {
                    reason: format!("segment {i} has empty span [{}, {}]", seg.t_lo, seg.t_hi),
                });
            }
            if i + 1 < segments.len() {
                let next = &segments[i + 1];
                if (next.t_lo - seg.t_hi).abs() > JUNCTION_TOL {
                    return Err(Error::InvalidPath {
                        reason: format!(
                            "segments {i} and {} leave a gap at t = {}",
                            i + 1,
                            seg.t_hi
                        ),
                    });
                }
                let gap = seg
                    .kind
                    .position(seg.t_hi)
                    .dist(next.kind.position(next.t_lo));
                if gap > JUNCTION_TOL {
                    return Err(Error::InvalidPath {
                        reason: format!(
                            "position jump of {gap:.3e} between segments {i} and {}",
                            i + 1
                        ),
                    });
                }
            }
        }
        Ok(RotationPath { segments })
    }

    /// Single-segment path over the whole quarter turn.
    pub fn single(kind: SegmentKind, contacts: ContactSet) -> Result<Self> {
        RotationPath::new(vec![PathSegment {
            kind,
            t_lo: 0.0,
            t_hi: FRAC_PI_2,
            contacts,
        }])
    }

    pub fn segments(&self) -> &[PathSegment] {
        &self.segments
    }

    /// Index of the segment owning `t`. Junction angles belong to the
    /// earlier segment, matching one-sided evaluation from the left.
    pub fn segment_index_at(&self, t: f64) -> usize {
        self.segments
            .partition_point(|seg| seg.t_hi < t)
            .min(self.segments.len() - 1)
    }

    pub fn position(&self, t: f64) -> Vec2 {
        let seg = &self.segments[self.segment_index_at(t)];
        seg.kind.position(t)
    }

    pub fn velocity(&self, t: f64) -> Vec2 {
        let seg = &self.segments[self.segment_index_at(t)];
        seg.kind.velocity(t)
    }

    pub fn acceleration(&self, t: f64) -> Vec2 {
        let seg = &self.segments[self.segment_index_at(t)];
        seg.kind.acceleration(t)
    }

    /// Contacts declared active at `t` (taken from the owning segment).
    pub fn contacts_at(&self, t: f64) -> ContactSet {
        self.segments[self.segment_index_at(t)].contacts
    }
}

// ---- contact points ----

/// The four wall contact points at a fixed angle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContactPoints {
    pub a: Vec2,
    pub b: Vec2,
    pub c: Vec2,
    pub d: Vec2,
}

/// Velocities of the four wall contact points.
///
/// `A` and `B` move along `nu` only, `C` and `D` along `mu` only; the
/// scalar rates are
///
/// ```text
///     A: <x'', mu> + 2 <x', nu> + 1        C: 2 <x', mu> - <x'', nu> - 1
///     B: <x'', mu> + 2 <x', nu>            D: 2 <x', mu> - <x'', nu>
/// ```
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContactVelocities {
    pub a: Vec2,
    pub b: Vec2,
    pub c: Vec2,
    pub d: Vec2,
}

/// Wall contact points of `path` at angle `t`.
pub fn contact_points(path: &RotationPath, t: f64) -> Result<ContactPoints> {
    let f = frame_at(t)?;
    let x = path.position(t);
    let v = path.velocity(t);
    Ok(contact_points_from_state(x, v, f.mu, f.nu))
}

fn contact_points_from_state(x: Vec2, v: Vec2, mu: Vec2, nu: Vec2) -> ContactPoints {
    let b = x + nu * v.dot(mu);
    let d = x - mu * v.dot(nu);
    ContactPoints {
        a: b + mu,
        b,
        c: d + nu,
        d,
    }
}

/// Contact point velocities of `path` at angle `t`.
pub fn contact_velocities(path: &RotationPath, t: f64) -> Result<ContactVelocities> {
    let f = frame_at(t)?;
    let v = path.velocity(t);
    let acc = path.acceleration(t);
    let along_nu = acc.dot(f.mu) + 2.0 * v.dot(f.nu);
    let along_mu = 2.0 * v.dot(f.mu) - acc.dot(f.nu);
    Ok(ContactVelocities {
        a: f.nu * (along_nu + 1.0),
        b: f.nu * along_nu,
        c: f.mu * (along_mu - 1.0),
        d: f.mu * along_mu,
    })
}

/// Contact points recovered by intersecting each wall line at angles `t`
/// and `t + delta` instead of taking the envelope limit.
///
/// The four wall lines at angle `s` are
///
/// ```text
///     A: <p, mu_s> = <x(s), mu_s> + 1      B: <p, mu_s> = <x(s), mu_s>
///     C: <p, nu_s> = <x(s), nu_s> + 1      D: <p, nu_s> = <x(s), nu_s>
/// ```
///
/// As `delta` shrinks, the pairwise intersections converge to the
/// envelope contact points with an `O(delta)` error. `delta` must be
/// positive and at most `1e-3`; the second angle steps backwards when
/// `t + delta` would leave the quarter turn.
pub fn contact_points_oracle(
    path: &RotationPath,
    t: f64,
    delta: f64,
) -> Result<ContactPoints> {
    if !(delta > 0.0 && delta <= 1e-3) {
        return Err(Error::InvalidParameter {
            name: "delta",
            reason: format!("{delta} not in (0, 1e-3]"),
        });
    }
    frame_at(t)?;
    let s = if t + delta <= FRAC_PI_2 { t + delta } else { t - delta };

    let f0 = frame_at_unchecked(t);
    let f1 = frame_at_unchecked(s);
    let x0 = path.position(t);
    let x1 = path.position(s);

    let cross = |n0: Vec2, c0: f64, n1: Vec2, c1: f64| -> Result<Vec2> {
        let det = n0.cross(n1);
        if det.abs() < 1e-15 {
            return Err(Error::ParallelWallLines { t });
        }
        Ok(Vec2::new(
            (c0 * n1.y - c1 * n0.y) / det,
            (n0.x * c1 - n1.x * c0) / det,
        ))
    };

    Ok(ContactPoints {
        a: cross(f0.mu, x0.dot(f0.mu) + 1.0, f1.mu, x1.dot(f1.mu) + 1.0)?,
        b: cross(f0.mu, x0.dot(f0.mu), f1.mu, x1.dot(f1.mu))?,
        c: cross(f0.nu, x0.dot(f0.nu) + 1.0, f1.nu, x1.dot(f1.nu) + 1.0)?,
        d: cross(f0.nu, x0.dot(f0.nu), f1.nu, x1.dot(f1.nu))?,
    })
}

// ---- well-behaved checks ----

/// A pointwise failure of the monotonicity conditions a sweepable path
/// must satisfy.
#[derive(Debug, Clone, PartialEq)]
pub struct WellBehavedViolation {
    pub t: f64,
    pub condition: &'static str,
    /// Signed value of the violated expression; the condition requires it
    /// to be nonnegative.
    pub value: f64,
}

/// Tolerance below zero before a well-behaved condition counts as broken.
const WELL_BEHAVED_TOL: f64 = 1e-9;

/// Check the monotonicity conditions on sampled interior angles.
///
/// Per segment, `samples` angles are taken strictly inside the span
/// (staying `1e-6` away from the junctions, where one-sided derivatives
/// disagree). The conditions, each required to be `>= 0` where the
/// relevant contact is active:
///
/// * `x` active: `<x', nu> >= 0` and `-<x', mu> >= 0`
/// * `A` active: `<A', nu> >= 0`, `B` active: `-<B', nu> >= 0`
/// * `C` active: `-<C', mu> >= 0`, `D` active: `<D', mu> >= 0`
pub fn check_well_behaved(path: &RotationPath, samples: usize) -> Vec<WellBehavedViolation> {
    let mut violations = Vec::new();
    let margin = 1e-6;
    for seg in path.segments() {
        let lo = seg.t_lo + margin;
        let hi = seg.t_hi - margin;
        if hi <= lo {
            continue;
        }
        for k in 0..samples {
            let t = lo + (hi - lo) * (k as f64 + 0.5) / samples as f64;
            let f = frame_at_unchecked(t);
            let v = seg.kind.velocity(t);
            let acc = seg.kind.acceleration(t);
            let along_nu = acc.dot(f.mu) + 2.0 * v.dot(f.nu);
            let along_mu = 2.0 * v.dot(f.mu) - acc.dot(f.nu);

            let mut check = |kind: ContactKind, condition: &'static str, value: f64| {
                if seg.contacts.contains(kind) && value < -WELL_BEHAVED_TOL {
                    violations.push(WellBehavedViolation {
                        t,
                        condition,
                        value,
                    });
                }
            };
            check(ContactKind::X, "<x', nu> >= 0", v.dot(f.nu));
            check(ContactKind::X, "<x', mu> <= 0", -v.dot(f.mu));
            check(ContactKind::A, "<A', nu> >= 0", along_nu + 1.0);
            check(ContactKind::B, "<B', nu> <= 0", -along_nu);
            check(ContactKind::C, "<C', mu> <= 0", -(along_mu - 1.0));
            check(ContactKind::D, "<D', mu> >= 0", along_mu);
        }
    }
    violations
}

// ---- the one-parameter circular family ----

/// Rotation path whose inner corner runs along a semicircle of radius `r`.
///
/// This is the classical one-parameter family of sofas: the hallway pivots
/// while its corner sweeps `x(t) = r (cos 2t - 1, sin 2t)`. `r = 0` keeps
/// the corner pinned (the half-disc sofa); `r = 1` is the largest radius
/// before the two straight wall pieces pinch together.
pub fn hammersley_path(r: f64) -> Result<RotationPath> {
    if !(0.0..=1.0).contains(&r) {
        return Err(Error::InvalidParameter {
            name: "r",
            reason: format!("{r} not in [0, 1]"),
        });
    }
    RotationPath::single(SegmentKind::Semicircle { radius: r }, ContactSet::ALL)
}

/// Contact points of the radius-`r` circular path in closed form:
/// `A = (cos t, sin t)`, `B = (0, 0)`, `C = (-2r - sin t, cos t)`,
/// `D = (-2r, 0)`. `B` and `D` stay pinned at the ends of the sofa's
/// underside bite.
pub fn hammersley_contacts(r: f64, t: f64) -> ContactPoints {
    let (s, c) = t.sin_cos();
    ContactPoints {
        a: Vec2::new(c, s),
        b: Vec2::ZERO,
        c: Vec2::new(-2.0 * r - s, c),
        d: Vec2::new(-2.0 * r, 0.0),
    }
}

/// Area of the radius-`r` circular-path sofa: `pi/2 + r (2 - pi r / 2)`.
pub fn hammersley_area(r: f64) -> f64 {
    FRAC_PI_2 + r * (2.0 - FRAC_PI_2 * r)
}

/// Radius maximizing [`hammersley_area`]: `2 / pi`.
pub fn hammersley_optimal_radius() -> f64 {
    2.0 / std::f64::consts::PI
}
