//! Numerical integration on triangles, plus the closed-form static integrals
//! used by the singularity-subtraction scheme of the assembler.

use nalgebra::Vector3;

/// One quadrature node in barycentric-ish reference coordinates (xi, eta)
/// over the unit triangle {xi >= 0, eta >= 0, xi + eta <= 1}; weights sum
/// to 1 and are multiplied by the physical triangle area on use.
#[derive(Debug, Clone, Copy)]
pub struct TriPoint {
    pub xi: f64,
    pub eta: f64,
    pub weight: f64,
}

/// Quadrature configuration of the assembler.
#[derive(Debug, Clone, Copy)]
pub struct QuadratureConfig {
    /// Rule for well-separated pairs (number of points per triangle from
    /// [`triangle_rule`]).
    pub regular_points: usize,
    /// One-dimensional order of the tensor rule used on singular and
    /// near-singular pairs (n^2 points per triangle).
    pub singular_tensor_order: usize,
    /// Pairs with centroid gap below `near_factor * h_avg` get the upgraded
    /// treatment even without shared vertices.
    pub near_factor: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self { regular_points: 7, singular_tensor_order: 4, near_factor: 0.1 }
    }
}

/// Symmetric rules: 1-point (degree 1), 3-point (degree 2), 7-point
/// (degree 5). Other sizes fall back to a collapsed tensor rule with at
/// least the requested point count.
pub fn triangle_rule(points: usize) -> Vec<TriPoint> {
    match points {
        1 => vec![TriPoint { xi: 1.0 / 3.0, eta: 1.0 / 3.0, weight: 1.0 }],
        3 => vec![
            TriPoint { xi: 1.0 / 6.0, eta: 1.0 / 6.0, weight: 1.0 / 3.0 },
            TriPoint { xi: 2.0 / 3.0, eta: 1.0 / 6.0, weight: 1.0 / 3.0 },
            TriPoint { xi: 1.0 / 6.0, eta: 2.0 / 3.0, weight: 1.0 / 3.0 },
        ],
        7 => {
            let a = 0.059715871789770;
            let b = 0.470142064105115;
            let c = 0.797426985353087;
            let d = 0.101286507323456;
            let w1 = 0.225;
            let w2 = 0.132394152788506;
            let w3 = 0.125939180544827;
            vec![
                TriPoint { xi: 1.0 / 3.0, eta: 1.0 / 3.0, weight: w1 },
                TriPoint { xi: a, eta: b, weight: w2 },
                TriPoint { xi: b, eta: a, weight: w2 },
                TriPoint { xi: b, eta: b, weight: w2 },
                TriPoint { xi: c, eta: d, weight: w3 },
                TriPoint { xi: d, eta: c, weight: w3 },
                TriPoint { xi: d, eta: d, weight: w3 },
            ]
        }
        n => {
            let order = (n as f64).sqrt().ceil() as usize;
            tensor_triangle_rule(order.max(2))
        }
    }
}

/// Collapsed Gauss-Legendre tensor rule with n^2 points; exact to high
/// degree, used both as the singular-pair workhorse and as the brute-force
/// oracle in tests (n = 8 gives the 64-point rule).
pub fn tensor_triangle_rule(n: usize) -> Vec<TriPoint> {
    let (nodes, weights) = gauss_legendre(n);
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        // map [-1,1] -> [0,1]
        let u = 0.5 * (nodes[i] + 1.0);
        let wu = 0.5 * weights[i];
        for j in 0..n {
            let v = 0.5 * (nodes[j] + 1.0);
            let wv = 0.5 * weights[j];
            // Duffy map: (u, v) -> (u, v(1-u)), Jacobian (1-u); the factor 2
            // renormalizes weights to sum to 1 over the unit triangle.
            out.push(TriPoint { xi: u, eta: v * (1.0 - u), weight: 2.0 * wu * wv * (1.0 - u) });
        }
    }
    out
}

/// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        // Chebyshev initial guess
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre(n, x);
        nodes[n - 1 - i] = x;
        weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Physical quadrature point on a triangle.
#[inline]
pub fn map_point(corners: &[Vector3<f64>; 3], p: &TriPoint) -> Vector3<f64> {
    corners[0] * (1.0 - p.xi - p.eta) + corners[1] * p.xi + corners[2] * p.eta
}

/// Closed-form statics of a flat triangle seen from an observation point:
/// `i0 = Int 1/R`, `iv = Int (y - rho)/R` (rho = in-plane projection of the
/// observation point) and `grad = Int (x - y)/R^3` (principal value in-plane).
#[derive(Debug, Clone, Copy)]
pub struct StaticIntegrals {
    pub i0: f64,
    pub iv: Vector3<f64>,
    pub grad: Vector3<f64>,
    /// In-plane projection of the observation point.
    pub rho: Vector3<f64>,
}

/// Analytic potential integrals over the triangle with the given corners.
///
/// Edge-decomposition formulas for flat panels: each edge contributes through
/// `f = ln((R+ + l+)/(R- + l-))` and an arctangent pair; `iv` follows from
/// the in-plane divergence theorem applied to `grad_s R = (y - rho)/R`.
pub fn static_integrals(corners: &[Vector3<f64>; 3], obs: Vector3<f64>) -> StaticIntegrals {
    let n = {
        let v = (corners[1] - corners[0]).cross(&(corners[2] - corners[0]));
        v / v.norm()
    };
    let d = n.dot(&(obs - corners[0]));
    let rho = obs - d * n;
    let mut i0 = 0.0;
    let mut iv = Vector3::zeros();
    let mut grad_s = Vector3::zeros();
    let mut beta = 0.0;
    for k in 0..3 {
        let a = corners[k];
        let b = corners[(k + 1) % 3];
        let l_hat = (b - a) / (b - a).norm();
        let u_hat = l_hat.cross(&n); // outward in-plane edge normal (CCW corners)
        let lm = (a - rho).dot(&l_hat);
        let lp = (b - rho).dot(&l_hat);
        let p0 = (a - rho).dot(&u_hat);
        let r0sq = p0 * p0 + d * d;
        let rm = (obs - a).norm();
        let rp = (obs - b).norm();
        // log term; (R + l)(R - l) = R0^2 picks the cancellation-free form,
        // and an edge line through the observation point contributes nothing
        let f = if r0sq < 1e-28 * (lp - lm).powi(2) {
            0.0
        } else if lp + lm >= 0.0 {
            ((rp + lp) / (rm + lm)).ln()
        } else {
            ((rm - lm) / (rp - lp)).ln()
        };
        let beta_k = if r0sq == 0.0 {
            0.0
        } else {
            (p0 * lp).atan2(r0sq + d.abs() * rp) - (p0 * lm).atan2(r0sq + d.abs() * rm)
        };
        i0 += p0 * f - d.abs() * beta_k;
        iv += u_hat * 0.5 * (r0sq * f + lp * rp - lm * rm);
        grad_s += u_hat * f;
        beta += beta_k;
    }
    // Int (x - y)/R^3 = -grad_x Int 1/R = sum u f + sign(d) beta n
    // (the principal value drops the normal part exactly in-plane)
    let normal_part = if d == 0.0 { Vector3::zeros() } else { n * d.signum() * beta };
    let grad = grad_s + normal_part;
    StaticIntegrals { i0, iv, grad, rho }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn brute<F: Fn(Vector3<f64>) -> f64>(corners: &[Vector3<f64>; 3], f: F, n: usize) -> f64 {
        let area = 0.5 * (corners[1] - corners[0]).cross(&(corners[2] - corners[0])).norm();
        tensor_triangle_rule(n)
            .iter()
            .map(|p| f(map_point(corners, p)) * p.weight * area)
            .sum()
    }

    #[test]
    fn gauss_legendre_exactness() {
        let (x, w) = gauss_legendre(5);
        // degree-9 polynomial x^8 integrates to 2/9
        let s: f64 = x.iter().zip(&w).map(|(xi, wi)| wi * xi.powi(8)).sum();
        assert_relative_eq!(s, 2.0 / 9.0, epsilon = 1e-13);
        let total: f64 = w.iter().sum();
        assert_relative_eq!(total, 2.0, epsilon = 1e-13);
    }

    #[test]
    fn rules_integrate_constants() {
        for pts in [1usize, 3, 7, 16] {
            let total: f64 = triangle_rule(pts).iter().map(|p| p.weight).sum();
            assert_relative_eq!(total, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn seven_point_rule_degree_five() {
        // integrate xi^2 eta^2 (degree 4) over unit triangle: exact 1/180
        let exact = 1.0 / 180.0;
        let v: f64 = triangle_rule(7).iter().map(|p| p.weight * p.xi * p.xi * p.eta * p.eta).sum();
        // weights are area-normalized (area of unit triangle = 1/2)
        assert_relative_eq!(v * 0.5, exact, epsilon = 1e-12);
    }

    #[test]
    fn statics_match_brute_force_off_plane() {
        let c = [
            Vector3::new(0.0, 0.0, 0.0),
            Vector3::new(1.1, 0.1, 0.0),
            Vector3::new(0.2, 0.9, 0.0),
        ];
        for obs in [
            Vector3::new(0.3, 0.3, 0.4),
            Vector3::new(-0.2, 0.5, -0.3),
            Vector3::new(1.5, 1.5, 0.05),
        ] {
            let s = static_integrals(&c, obs);
            let i0_ref = brute(&c, |y| 1.0 / (obs - y).norm(), 64);
            assert_relative_eq!(s.i0, i0_ref, max_relative = 1e-7);
            for ax in 0..3 {
                let iv_ref = brute(&c, |y| (y - s.rho)[ax] / (obs - y).norm(), 64);
                assert_relative_eq!(s.iv[ax], iv_ref, epsilon = 1e-7, max_relative = 1e-6);
                let g_ref = brute(&c, |y| (obs - y)[ax] / (obs - y).norm().powi(3), 64);
                assert_relative_eq!(s.grad[ax], g_ref, epsilon = 1e-6, max_relative = 1e-5);
            }
        }
    }

    #[test]
    fn statics_in_plane_observation() {
        // observation inside the triangle plane: i0 finite and matching a
        // Duffy-refined brute force around the singularity
        let c = [
            Vector3::new(0.0, 0.0, 0.0),
            Vector3::new(1.0, 0.0, 0.0),
            Vector3::new(0.0, 1.0, 0.0),
        ];
        let obs = Vector3::new(2.0, 0.5, 0.0); // outside triangle, in plane
        let s = static_integrals(&c, obs);
        let i0_ref = brute(&c, |y| 1.0 / (obs - y).norm(), 80);
        assert_relative_eq!(s.i0, i0_ref, max_relative = 1e-8);
        // normal component of grad vanishes in-plane (principal value)
        assert!(s.grad.z.abs() < 1e-12);
    }
}
