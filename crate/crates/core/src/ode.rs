//! The six contact regimes of an area-maximizing rotation path and their
//! closed-form solutions.
//!
//! While the hallway rotates, the sofa boundary can touch it in up to five
//! places: the inner corner `x` and four wall contacts `A`, `B`, `C`, `D`.
//! Which subset is active determines a linear second-order ODE for the
//! rotation path,
//!
//! ```text
//!     x''(t) = R_t ( v + M(t) x'(t) ),
//!     M(t) = [ p sin t   -p cos t ]
//!            [ q cos t    q sin t ]
//! ```
//!
//! with constants `v`, `p`, `q` fixed per regime. Substituting the
//! rotating-frame velocity `y = R_{-t} x'` turns this into the autonomous
//! system `y' = T y + v` with `T = [[0, 1 - p], [q - 1, 0]]`, which is why
//! every regime integrates in closed form: the solutions are trigonometric
//! polynomials in `t` or `t/2` plus quadratics.
//!
//! Key design points:
//!
//! * Both coefficient tables, `(p, q, v)` for the world-frame form and
//!   `(T, v)` for the rotating-frame form, are stored independently and
//!   cross-checked by test. A typo in one cannot silently corrupt both.
//! * Each solution family [`SolFamily`] carries its basis `w(t)` with
//!   `x(t) = R_t w(t) + kappa`; position, velocity and acceleration come
//!   from differentiating that representation, so a family can be checked
//!   against its regime's ODE pointwise.

use serde::{Deserialize, Serialize};

use crate::geometry::{frame_at_unchecked, Rotation, Vec2};

// ---- contact kinds ----

/// One of the five possible hallway contacts.
///
/// In the frame of the rotated hallway with inner corner at the rotation
/// path point, `A` slides on the outer wall of the vertical arm, `B` on
/// its inner wall, `C` on the outer wall of the horizontal arm, `D` on its
/// inner wall, and `X` is the inner corner itself pressing into the sofa.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ContactKind {
    X,
    A,
    B,
    C,
    D,
}

impl ContactKind {
    pub const ALL: [ContactKind; 5] = [
        ContactKind::X,
        ContactKind::A,
        ContactKind::B,
        ContactKind::C,
        ContactKind::D,
    ];

    pub fn label(self) -> &'static str {
        match self {
            ContactKind::X => "x",
            ContactKind::A => "A",
            ContactKind::B => "B",
            ContactKind::C => "C",
            ContactKind::D => "D",
        }
    }
}

/// Set of active contacts, stored as a five-bit mask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContactSet {
    bits: u8,
}

impl ContactSet {
    pub const EMPTY: ContactSet = ContactSet { bits: 0 };
    pub const ALL: ContactSet = ContactSet { bits: 0b11111 };

    pub fn of(kinds: &[ContactKind]) -> Self {
        let mut bits = 0u8;
        for &k in kinds {
            bits |= 1 << (k as u8);
        }
        ContactSet { bits }
    }

    pub fn contains(self, kind: ContactKind) -> bool {
        self.bits & (1 << (kind as u8)) != 0
    }

    pub fn iter(self) -> impl Iterator<Item = ContactKind> {
        ContactKind::ALL
            .into_iter()
            .filter(move |&k| self.contains(k))
    }

    pub fn len(self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.bits == 0
    }
}

// ---- the six regimes ----

/// Contact regime of an optimal rotation path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OdeCase {
    /// Contacts A, C, D. The A contact is stationary.
    Case1,
    /// Contacts x, A, C, D.
    Case2,
    /// Contacts x, A, C.
    Case3,
    /// Contacts x, A, B, C.
    Case4,
    /// Contacts A, B, C. The C contact is stationary.
    Case5,
    /// All five contacts at once.
    Case6,
}

/// World-frame coefficients: the multipliers `p`, `q` in `M(t)` and the
/// constant forcing `v`.
const PQV: [(f64, f64, Vec2); 6] = [
    (2.0, 2.0, Vec2 { x: -1.0, y: -0.5 }),
    (1.0, 1.5, Vec2 { x: -1.0, y: -0.5 }),
    (1.0, 1.0, Vec2 { x: -1.0, y: -1.0 }),
    (1.5, 1.0, Vec2 { x: -0.5, y: -1.0 }),
    (2.0, 2.0, Vec2 { x: -0.5, y: -1.0 }),
    (1.5, 1.5, Vec2 { x: -0.5, y: -0.5 }),
];

/// Rotating-frame coefficients: `y' = T y + v` for `y = R_{-t} x'`, with
/// `T` stored row-major. Derived independently of [`PQV`] and kept as a
/// second source of truth.
const TV: [([[f64; 2]; 2], Vec2); 6] = [
    ([[0.0, -1.0], [1.0, 0.0]], Vec2 { x: -1.0, y: -0.5 }),
    ([[0.0, 0.0], [0.5, 0.0]], Vec2 { x: -1.0, y: -0.5 }),
    ([[0.0, 0.0], [0.0, 0.0]], Vec2 { x: -1.0, y: -1.0 }),
    ([[0.0, -0.5], [0.0, 0.0]], Vec2 { x: -0.5, y: -1.0 }),
    ([[0.0, -1.0], [1.0, 0.0]], Vec2 { x: -0.5, y: -1.0 }),
    ([[0.0, -0.5], [0.5, 0.0]], Vec2 { x: -0.5, y: -0.5 }),
];

const CONTACT_SETS: [&[ContactKind]; 6] = [
    &[ContactKind::A, ContactKind::C, ContactKind::D],
    &[ContactKind::X, ContactKind::A, ContactKind::C, ContactKind::D],
    &[ContactKind::X, ContactKind::A, ContactKind::C],
    &[ContactKind::X, ContactKind::A, ContactKind::B, ContactKind::C],
    &[ContactKind::A, ContactKind::B, ContactKind::C],
    &[
        ContactKind::X,
        ContactKind::A,
        ContactKind::B,
        ContactKind::C,
        ContactKind::D,
    ],
];

impl OdeCase {
    pub const ALL: [OdeCase; 6] = [
        OdeCase::Case1,
        OdeCase::Case2,
        OdeCase::Case3,
        OdeCase::Case4,
        OdeCase::Case5,
        OdeCase::Case6,
    ];

    /// One-based index matching the usual numbering of the regimes.
    pub fn index(self) -> usize {
        self as usize + 1
    }

    pub fn contacts(self) -> ContactSet {
        ContactSet::of(CONTACT_SETS[self as usize])
    }

    /// Constant forcing term `v`.
    pub fn forcing(self) -> Vec2 {
        PQV[self as usize].2
    }

    /// The multipliers `(p, q)` of the velocity coupling `M(t)`.
    pub fn velocity_multipliers(self) -> (f64, f64) {
        let (p, q, _) = PQV[self as usize];
        (p, q)
    }

    /// Right-hand side of the world-frame ODE: `x'' = R_t (v + M(t) x')`.
    pub fn acceleration(self, t: f64, velocity: Vec2) -> Vec2 {
        let (p, q, v) = PQV[self as usize];
        let (sin, cos) = t.sin_cos();
        let m_xdot = Vec2::new(
            p * sin * velocity.x - p * cos * velocity.y,
            q * cos * velocity.x + q * sin * velocity.y,
        );
        Rotation { cos, sin }.apply(v + m_xdot)
    }

    /// Right-hand side of the rotating-frame system: `y' = T y + v`.
    pub fn rotating_velocity_rate(self, y: Vec2) -> Vec2 {
        let (t_mat, v) = TV[self as usize];
        Vec2::new(
            t_mat[0][0] * y.x + t_mat[0][1] * y.y + v.x,
            t_mat[1][0] * y.x + t_mat[1][1] * y.y + v.y,
        )
    }

    /// World-frame acceleration reconstructed from the rotating-frame
    /// table alone: `x'' = R_t (J y + y')` with `y = R_{-t} x'`.
    pub fn acceleration_via_rotating_frame(self, t: f64, velocity: Vec2) -> Vec2 {
        let rot = Rotation::new(t);
        let y = rot.apply_inverse(velocity);
        let y_rate = self.rotating_velocity_rate(y);
        rot.apply(y.perp() + y_rate)
    }
}

// ---- closed-form solution families ----

/// The closed-form solution family for each regime.
///
/// A member of family `k` solves the regime-`k` ODE and has the shape
/// `x(t) = R_t w(t) + kappa` where `w` depends on two free coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SolFamily {
    Sol1,
    Sol2,
    Sol3,
    Sol4,
    Sol5,
    Sol6,
}

impl SolFamily {
    pub const ALL: [SolFamily; 6] = [
        SolFamily::Sol1,
        SolFamily::Sol2,
        SolFamily::Sol3,
        SolFamily::Sol4,
        SolFamily::Sol5,
        SolFamily::Sol6,
    ];

    pub fn case(self) -> OdeCase {
        OdeCase::ALL[self as usize]
    }

    pub fn index(self) -> usize {
        self as usize + 1
    }
}

/// A concrete closed-form solution: family, its two free coefficients,
/// and the translation `kappa`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sol {
    pub family: SolFamily,
    pub coeffs: [f64; 2],
    pub kappa: Vec2,
}

impl Sol {
    pub fn new(family: SolFamily, coeffs: [f64; 2], kappa: Vec2) -> Self {
        Sol {
            family,
            coeffs,
            kappa,
        }
    }

    /// The rotating-frame offset `w(t)` and its first two derivatives.
    ///
    /// Families 1 and 5 are full-angle circular, family 6 is half-angle
    /// circular, families 2 and 4 are quadratic in `t`, family 3 linear.
    fn basis(&self, t: f64) -> (Vec2, Vec2, Vec2) {
        let [u, v] = self.coeffs;
        match self.family {
            SolFamily::Sol1 | SolFamily::Sol5 => {
                let (s, c) = t.sin_cos();
                let shift = if self.family == SolFamily::Sol1 {
                    Vec2::new(-1.0, -0.5)
                } else {
                    Vec2::new(-0.5, -1.0)
                };
                let w = Vec2::new(u * c + v * s, -v * c + u * s) + shift;
                let w1 = Vec2::new(-u * s + v * c, v * s + u * c);
                let w2 = Vec2::new(-u * c - v * s, v * c - u * s);
                (w, w1, w2)
            }
            SolFamily::Sol2 => {
                let w = Vec2::new(-t * t / 4.0 + u * t + v, t / 2.0 - u - 1.0);
                let w1 = Vec2::new(-t / 2.0 + u, 0.5);
                let w2 = Vec2::new(-0.5, 0.0);
                (w, w1, w2)
            }
            SolFamily::Sol3 => {
                let w = Vec2::new(u - t, v + t);
                let w1 = Vec2::new(-1.0, 1.0);
                (w, w1, Vec2::ZERO)
            }
            SolFamily::Sol4 => {
                let w = Vec2::new(-t / 2.0 + u - 1.0, -t * t / 4.0 + u * t + v);
                let w1 = Vec2::new(-0.5, -t / 2.0 + u);
                let w2 = Vec2::new(0.0, -0.5);
                (w, w1, w2)
            }
            SolFamily::Sol6 => {
                let (s, c) = (0.5 * t).sin_cos();
                let w = Vec2::new(u * c + v * s - 1.0, -v * c + u * s - 1.0);
                let w1 = Vec2::new(-u * s + v * c, v * s + u * c) * 0.5;
                let w2 = Vec2::new(-u * c - v * s, v * c - u * s) * 0.25;
                (w, w1, w2)
            }
        }
    }

    pub fn position(&self, t: f64) -> Vec2 {
        let rot = Rotation::new(t);
        let (w, _, _) = self.basis(t);
        rot.apply(w) + self.kappa
    }

    /// First derivative, using `(R_t w)' = R_t (J w + w')`.
    pub fn velocity(&self, t: f64) -> Vec2 {
        let rot = Rotation::new(t);
        let (w, w1, _) = self.basis(t);
        rot.apply(w.perp() + w1)
    }

    /// Second derivative, using `(R_t w)'' = R_t (-w + 2 J w' + w'')`.
    pub fn acceleration(&self, t: f64) -> Vec2 {
        let rot = Rotation::new(t);
        let (w, w1, w2) = self.basis(t);
        rot.apply(-w + w1.perp() * 2.0 + w2)
    }

    /// Largest component of `x'' - R_t (v + M(t) x')` at `t`. Zero, up to
    /// roundoff, whenever the coefficients are finite.
    pub fn ode_residual(&self, t: f64) -> f64 {
        let lhs = self.acceleration(t);
        let rhs = self.family.case().acceleration(t, self.velocity(t));
        (lhs - rhs).max_abs()
    }

    /// Residual of the rotating-frame system `y' = T y + v` at `t`, with
    /// `y'` approximated by a central difference of step `h`.
    pub fn rotating_frame_residual(&self, t: f64, h: f64) -> f64 {
        let y = |s: f64| {
            let f = frame_at_unchecked(s);
            let vel = self.velocity(s);
            Vec2::new(vel.dot(f.mu), vel.dot(f.nu))
        };
        let y_rate_fd = (y(t + h) - y(t - h)) * (0.5 / h);
        let y_rate = self.family.case().rotating_velocity_rate(y(t));
        (y_rate_fd - y_rate).max_abs()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::FRAC_PI_2;

    fn random_sol(rng: &mut ChaCha8Rng, family: SolFamily) -> Sol {
        Sol::new(
            family,
            [rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)],
            Vec2::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)),
        )
    }

    #[test]
    fn contact_sets_match_regime_definitions() {
        assert_eq!(OdeCase::Case1.contacts().len(), 3);
        assert!(!OdeCase::Case1.contacts().contains(ContactKind::X));
        assert!(!OdeCase::Case1.contacts().contains(ContactKind::B));
        assert_eq!(OdeCase::Case2.contacts().len(), 4);
        assert!(!OdeCase::Case2.contacts().contains(ContactKind::B));
        assert_eq!(OdeCase::Case3.contacts().len(), 3);
        assert_eq!(OdeCase::Case4.contacts().len(), 4);
        assert!(!OdeCase::Case4.contacts().contains(ContactKind::D));
        assert_eq!(OdeCase::Case5.contacts().len(), 3);
        assert!(!OdeCase::Case5.contacts().contains(ContactKind::X));
        assert_eq!(OdeCase::Case6.contacts(), ContactSet::ALL);
    }

    #[test]
    fn both_coefficient_tables_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for case in OdeCase::ALL {
            for _ in 0..50 {
                let t = rng.gen_range(0.0..FRAC_PI_2);
                let vel = Vec2::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
                let direct = case.acceleration(t, vel);
                let via_rotating = case.acceleration_via_rotating_frame(t, vel);
                assert!(
                    (direct - via_rotating).max_abs() < 1e-12,
                    "table mismatch for {case:?} at t = {t}"
                );
            }
        }
    }

    #[test]
    fn every_family_solves_its_regime() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for family in SolFamily::ALL {
            for _ in 0..100 {
                let sol = random_sol(&mut rng, family);
                let t = rng.gen_range(0.0..FRAC_PI_2);
                let res = sol.ode_residual(t);
                assert!(
                    res < 1e-9,
                    "family {family:?} residual {res:.3e} at t = {t}"
                );
            }
        }
    }

    #[test]
    fn acceleration_matches_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let h = 1e-5;
        for family in SolFamily::ALL {
            for _ in 0..20 {
                let sol = random_sol(&mut rng, family);
                let t = rng.gen_range(0.1..FRAC_PI_2 - 0.1);
                let vel_fd = (sol.position(t + h) - sol.position(t - h)) * (0.5 / h);
                assert!(
                    (vel_fd - sol.velocity(t)).max_abs() < 1e-6,
                    "velocity finite difference failed for {family:?}"
                );
                let acc_fd =
                    (sol.position(t + h) - sol.position(t) * 2.0 + sol.position(t - h))
                        * (1.0 / (h * h));
                assert!(
                    (acc_fd - sol.acceleration(t)).max_abs() < 1e-4,
                    "acceleration finite difference failed for {family:?}"
                );
            }
        }
    }

    #[test]
    fn rotating_frame_system_holds_under_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        for family in SolFamily::ALL {
            let sol = random_sol(&mut rng, family);
            for _ in 0..20 {
                let t = rng.gen_range(0.1..FRAC_PI_2 - 0.1);
                let res = sol.rotating_frame_residual(t, 1e-6);
                assert!(
                    res < 1e-7,
                    "rotating frame residual {res:.3e} for {family:?} at t = {t}"
                );
            }
        }
    }

    #[test]
    fn contact_set_iteration_roundtrips() {
        let set = ContactSet::of(&[ContactKind::A, ContactKind::D]);
        let kinds: Vec<ContactKind> = set.iter().collect();
        assert_eq!(kinds, vec![ContactKind::A, ContactKind::D]);
        assert!(ContactSet::EMPTY.is_empty());
        assert_eq!(ContactSet::ALL.len(), 5);
    }
}
