//! Numerical workhorses: adaptive Gauss-Legendre quadrature, dense linear
//! solves, and Newton iterations for the solver modules.
//!
//! Everything here is deliberately small and dependency-free. The systems
//! are tiny (at most a few dozen unknowns) and the integrands are smooth
//! trigonometric expressions, so 15-point Gauss panels with interval
//! bisection and plain Gaussian elimination with partial pivoting are
//! comfortably enough.

use crate::error::{Error, Result};

// ---- quadrature ----

/// Nodes of the 15-point Gauss-Legendre rule on `[-1, 1]`.
#[allow(clippy::excessive_precision)]
const GL15_NODES: [f64; 15] = [
    -0.98799251802048542849,
    -0.93727339240070590431,
    -0.8482065834104272162,
    -0.72441773136017004742,
    -0.57097217260853884754,
    -0.3941513470775633699,
    -0.2011940939974345223,
    0.0,
    0.2011940939974345223,
    0.3941513470775633699,
    0.57097217260853884754,
    0.72441773136017004742,
    0.8482065834104272162,
    0.93727339240070590431,
    0.98799251802048542849,
];

/// Weights of the 15-point Gauss-Legendre rule on `[-1, 1]`.
#[allow(clippy::excessive_precision)]
const GL15_WEIGHTS: [f64; 15] = [
    0.030753241996117268355,
    0.070366047488108124709,
    0.10715922046717193501,
    0.13957067792615431445,
    0.16626920581699393355,
    0.18616100001556221103,
    0.19843148532711157646,
    0.20257824192556127288,
    0.19843148532711157646,
    0.18616100001556221103,
    0.16626920581699393355,
    0.13957067792615431445,
    0.10715922046717193501,
    0.070366047488108124709,
    0.030753241996117268355,
];

/// Recursion depth limit for adaptive bisection. 40 halvings take the
/// panel width below 1e-12 of the original interval; if that has not
/// converged the integrand is not one of ours.
const MAX_QUAD_DEPTH: usize = 40;

fn gauss15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut sum = 0.0;
    for (node, weight) in GL15_NODES.iter().zip(GL15_WEIGHTS.iter()) {
        sum += weight * f(mid + half * node);
    }
    half * sum
}

/// Integrate `f` over `[a, b]` to absolute tolerance `tol`.
///
/// Each panel is accepted when the 15-point estimate of the whole panel
/// agrees with the sum over its two halves; otherwise the halves recurse
/// with the tolerance split between them. Exceeding the depth limit
/// returns [`Error::QuadratureDepthExceeded`] carrying the best estimate.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let whole = gauss15(&f, a, b);
    adaptive(&f, a, b, whole, tol, 0)
}

fn adaptive<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    whole: f64,
    tol: f64,
    depth: usize,
) -> Result<f64> {
    let mid = 0.5 * (a + b);
    let left = gauss15(f, a, mid);
    let right = gauss15(f, mid, b);
    let refined = left + right;
    if (refined - whole).abs() <= tol {
        return Ok(refined);
    }
    if depth >= MAX_QUAD_DEPTH {
        return Err(Error::QuadratureDepthExceeded { tol, best: refined });
    }
    let half_tol = 0.5 * tol;
    let l = adaptive(f, a, mid, left, half_tol, depth + 1)?;
    let r = adaptive(f, mid, b, right, half_tol, depth + 1)?;
    Ok(l + r)
}

// ---- linear algebra ----

/// Solve the dense system `m x = rhs` by Gaussian elimination with
/// partial pivoting. `m` is given in row-major order and is consumed.
///
/// Sized for the solver systems in this crate (n up to a few dozen); a
/// pivot below 1e-14 times the largest initial entry is treated as
/// singular.
pub fn solve_linear(mut m: Vec<Vec<f64>>, mut rhs: Vec<f64>) -> Result<Vec<f64>> {
    let n = m.len();
    assert_eq!(rhs.len(), n, "matrix and right-hand side sizes differ");
    for row in &m {
        assert_eq!(row.len(), n, "matrix is not square");
    }

    let scale = m
        .iter()
        .flat_map(|row| row.iter())
        .fold(0.0f64, |acc, &v| acc.max(v.abs()))
        .max(1.0);

    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))
            .unwrap();
        if m[pivot_row][col].abs() < 1e-14 * scale {
            return Err(Error::SingularMatrix { pivot: col });
        }
        m.swap(col, pivot_row);
        rhs.swap(col, pivot_row);
        let pivot = m[col][col];
        for row in col + 1..n {
            let factor = m[row][col] / pivot;
            if factor == 0.0 {
                continue;
            }
            let (head, tail) = m.split_at_mut(row);
            for (target, &source) in tail[0][col..].iter_mut().zip(&head[col][col..]) {
                *target -= factor * source;
            }
            rhs[row] -= factor * rhs[col];
        }
    }

    let mut x = vec![0.0; n];
    for col in (0..n).rev() {
        let mut acc = rhs[col];
        for k in col + 1..n {
            acc -= m[col][k] * x[k];
        }
        x[col] = acc / m[col][col];
    }
    Ok(x)
}

// ---- root finding ----

/// Damped Newton iteration on `f : R^n -> R^n` with a forward-difference
/// Jacobian, refreshed every step.
///
/// The step is halved (up to 30 times) until the residual norm decreases.
/// Convergence means `max |f_i| <= tol`. On failure the error carries the
/// last iterate and its residual.
pub fn newton_system<F>(f: F, x0: &[f64], tol: f64, max_iter: usize) -> Result<Vec<f64>>
where
    F: Fn(&[f64]) -> Vec<f64>,
{
    let n = x0.len();
    let mut x = x0.to_vec();
    let mut fx = f(&x);
    assert_eq!(fx.len(), n, "residual dimension differs from unknowns");

    for iter in 0..max_iter {
        let res = max_abs(&fx);
        if res <= tol {
            return Ok(x);
        }

        let mut jacobian = vec![vec![0.0; n]; n];
        for j in 0..n {
            let h = 1e-7 * (1.0 + x[j].abs());
            let mut xh = x.clone();
            xh[j] += h;
            let fh = f(&xh);
            for i in 0..n {
                jacobian[i][j] = (fh[i] - fx[i]) / h;
            }
        }
        let step = solve_linear(jacobian, fx.clone()).map_err(|_| Error::RootFindingFailed {
            iterations: iter,
            residual: res,
            last: x.clone(),
        })?;

        let mut damping = 1.0;
        let mut accepted = false;
        for _ in 0..30 {
            let trial: Vec<f64> = x
                .iter()
                .zip(step.iter())
                .map(|(xi, si)| xi - damping * si)
                .collect();
            let ft = f(&trial);
            if max_abs(&ft) < res {
                x = trial;
                fx = ft;
                accepted = true;
                break;
            }
            damping *= 0.5;
        }
        if !accepted {
            return Err(Error::RootFindingFailed {
                iterations: iter,
                residual: res,
                last: x,
            });
        }
    }

    let res = max_abs(&fx);
    if res <= tol {
        Ok(x)
    } else {
        Err(Error::RootFindingFailed {
            iterations: max_iter,
            residual: res,
            last: x,
        })
    }
}

/// Newton iteration for a scalar function, guarded by bisection.
///
/// `bracket` must contain a sign change of `f`. Newton steps that leave
/// the current bracket, or fail to shrink the residual, fall back to the
/// midpoint. Converges when `|f| <= tol` or the bracket width reaches
/// machine precision.
pub fn newton_scalar<F>(f: F, x0: f64, bracket: (f64, f64), tol: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let (mut lo, mut hi) = bracket;
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::RootFindingFailed {
            iterations: 0,
            residual: f_lo.abs().min(f_hi.abs()),
            last: vec![x0],
        });
    }

    let mut x = x0.clamp(lo, hi);
    for _ in 0..200 {
        let fx = f(x);
        if fx.abs() <= tol {
            return Ok(x);
        }
        // Maintain the bracket.
        if fx.signum() == f_lo.signum() {
            lo = x;
            f_lo = fx;
        } else {
            hi = x;
        }
        if (hi - lo).abs() <= f64::EPSILON * (1.0 + x.abs()) {
            return Ok(x);
        }

        let h = 1e-7 * (1.0 + x.abs());
        let dfx = (f(x + h) - fx) / h;
        let newton = x - fx / dfx;
        x = if dfx != 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
    }

    let fx = f(x);
    if fx.abs() <= tol {
        Ok(x)
    } else {
        Err(Error::RootFindingFailed {
            iterations: 200,
            residual: fx.abs(),
            last: vec![x],
        })
    }
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |acc, &x| acc.max(x.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{E, FRAC_PI_2, PI};

    #[test]
    fn integrates_polynomials_exactly() {
        // Degree 29 is the exactness limit of a 15-point rule.
        let val = integrate(|x| x.powi(29) + 3.0 * x * x, 0.0, 1.0, 1e-14).unwrap();
        assert_abs_diff_eq!(val, 1.0 / 30.0 + 1.0, epsilon = 1e-13);
    }

    #[test]
    fn integrates_trig_and_exp() {
        let s = integrate(f64::sin, 0.0, PI, 1e-13).unwrap();
        assert_abs_diff_eq!(s, 2.0, epsilon = 1e-12);
        let e = integrate(f64::exp, 0.0, 1.0, 1e-13).unwrap();
        assert_abs_diff_eq!(e, E - 1.0, epsilon = 1e-12);
        let c = integrate(|x| (10.0 * x).cos(), 0.0, FRAC_PI_2, 1e-13).unwrap();
        assert_abs_diff_eq!(c, (10.0 * FRAC_PI_2).sin() / 10.0, epsilon = 1e-12);
    }

    #[test]
    fn integration_respects_orientation() {
        let forward = integrate(|x| x, 0.0, 2.0, 1e-13).unwrap();
        let backward = integrate(|x| x, 2.0, 0.0, 1e-13).unwrap();
        assert_abs_diff_eq!(forward, -backward, epsilon = 1e-13);
    }

    #[test]
    fn quadrature_reports_failure_on_pathological_integrand() {
        // A near-singularity stalls the bisection at the depth limit.
        let res = integrate(|x| 1.0 / (x - 0.3).abs().max(1e-300), 0.0, 1.0, 1e-13);
        match res {
            Err(Error::QuadratureDepthExceeded { best, .. }) => assert!(best.is_finite()),
            other => panic!("expected depth failure, got {other:?}"),
        }
    }

    #[test]
    fn solves_small_linear_system() {
        let m = vec![
            vec![2.0, 1.0, -1.0],
            vec![-3.0, -1.0, 2.0],
            vec![-2.0, 1.0, 2.0],
        ];
        let rhs = vec![8.0, -11.0, -3.0];
        let x = solve_linear(m, rhs).unwrap();
        assert_abs_diff_eq!(x[0], 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(x[1], 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(x[2], -1.0, epsilon = 1e-12);
    }

    #[test]
    fn linear_solve_residual_is_small_on_random_systems() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let mut next = move || rng.gen_range(-1.0..1.0);
        for n in [4usize, 8, 16, 32] {
            let m: Vec<Vec<f64>> = (0..n).map(|_| (0..n).map(|_| next()).collect()).collect();
            let rhs: Vec<f64> = (0..n).map(|_| next()).collect();
            let rhs_max = rhs.iter().fold(0.0f64, |a, &v| a.max(v.abs()));
            let x = solve_linear(m.clone(), rhs.clone()).unwrap();
            for i in 0..n {
                let mut acc = 0.0;
                for j in 0..n {
                    acc += m[i][j] * x[j];
                }
                assert!(
                    (acc - rhs[i]).abs() <= 1e-10 * (1.0 + rhs_max),
                    "row {i} residual {}",
                    (acc - rhs[i]).abs()
                );
            }
        }
    }

    #[test]
    fn singular_matrix_is_reported_with_pivot() {
        let m = vec![vec![1.0, 2.0], vec![2.0, 4.0]];
        match solve_linear(m, vec![1.0, 2.0]) {
            Err(Error::SingularMatrix { pivot }) => assert_eq!(pivot, 1),
            other => panic!("expected singular error, got {other:?}"),
        }
    }

    #[test]
    fn newton_solves_coupled_system() {
        // x^2 + y^2 = 4, x y = 1.
        let f = |v: &[f64]| vec![v[0] * v[0] + v[1] * v[1] - 4.0, v[0] * v[1] - 1.0];
        let root = newton_system(f, &[2.0, 0.3], 1e-13, 50).unwrap();
        assert_abs_diff_eq!(root[0] * root[0] + root[1] * root[1], 4.0, epsilon = 1e-12);
        assert_abs_diff_eq!(root[0] * root[1], 1.0, epsilon = 1e-12);
    }

    #[test]
    fn newton_reports_divergence() {
        // No real root and a residual bounded away from zero.
        let f = |v: &[f64]| vec![v[0] * v[0] + 1.0];
        match newton_system(f, &[3.0], 1e-13, 50) {
            Err(Error::RootFindingFailed { residual, .. }) => assert!(residual >= 1.0),
            other => panic!("expected failure, got {other:?}"),
        }
    }

    #[test]
    fn scalar_newton_finds_cubic_root() {
        // 4 x^3 + 3 x - 1 has a single real root.
        let f = |x: f64| 4.0 * x * x * x + 3.0 * x - 1.0;
        let r = newton_scalar(f, 0.5, (0.0, 1.0), 1e-15).unwrap();
        assert!(f(r).abs() < 1e-14);
    }

    #[test]
    fn scalar_newton_survives_bad_initial_guess() {
        // tan-like blowup pushes plain Newton out of the bracket.
        let f = |x: f64| x.tan() - 1.0;
        let r = newton_scalar(f, 1.5, (0.0, 1.55), 1e-13).unwrap();
        assert_abs_diff_eq!(r, FRAC_PI_2 / 2.0, epsilon = 1e-10);
    }

    #[test]
    fn scalar_newton_requires_sign_change() {
        let f = |x: f64| x * x + 1.0;
        assert!(newton_scalar(f, 0.5, (0.0, 1.0), 1e-13).is_err());
    }
}
