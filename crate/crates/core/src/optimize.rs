//! Minimization over Bloch-sphere angles: coarse grid, then Nelder–Mead.

use std::f64::consts::PI;

use crate::measures::OptimizerConfig;

#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct BlochOptimum {
    pub theta: f64,
    pub phi: f64,
    pub value: f64,
    pub evaluations: usize,
}

/// Maps arbitrary angles onto `θ ∈ [0, π]`, `φ ∈ [0, 2π)` without changing the direction.
pub(crate) fn normalize_angles(theta: f64, phi: f64) -> (f64, f64) {
    let mut t = theta.rem_euclid(2.0 * PI);
    let mut p = phi;
    if t > PI {
        t = 2.0 * PI - t;
        p += PI;
    }
    let p = p.rem_euclid(2.0 * PI);
    // rem_euclid can round up to exactly 2π.
    (t, if p >= 2.0 * PI { 0.0 } else { p })
}

/// Minimizes `f(θ, φ)`.
///
/// The grid has `N` polar points on `[0, π]` (endpoints included) and `2N`
/// azimuthal points on `[0, 2π)`. It is scanned θ-major and only a strictly
/// smaller value replaces the incumbent, so ties go to the lexicographically
/// smallest `(θ, φ)`. The best grid point seeds a Nelder–Mead simplex whose
/// edges are one grid step long.
pub(crate) fn minimize_on_sphere(cfg: &OptimizerConfig, mut f: impl FnMut(f64, f64) -> f64) -> BlochOptimum {
    let n_theta = cfg.grid_resolution;
    let n_phi = 2 * cfg.grid_resolution;
    let d_theta = PI / (n_theta - 1) as f64;
    let d_phi = 2.0 * PI / n_phi as f64;

    let mut evaluations = 0;
    let mut best = (0.0, 0.0, f64::INFINITY);
    for i in 0..n_theta {
        let theta = i as f64 * d_theta;
        for j in 0..n_phi {
            let phi = j as f64 * d_phi;
            let v = f(theta, phi);
            evaluations += 1;
            if v < best.2 {
                best = (theta, phi, v);
            }
        }
    }

    let mut simplex = [
        ([best.0, best.1], best.2),
        ([best.0 + d_theta, best.1], f64::NAN),
        ([best.0, best.1 + d_phi], f64::NAN),
    ];
    for vertex in simplex.iter_mut().skip(1) {
        vertex.1 = f(vertex.0[0], vertex.0[1]);
        evaluations += 1;
    }
    evaluations += nelder_mead(&mut simplex, cfg.refine_iterations, &mut f);

    let (theta, phi) = normalize_angles(simplex[0].0[0], simplex[0].0[1]);
    let value = f(theta, phi);
    evaluations += 1;
    BlochOptimum {
        theta,
        phi,
        value,
        evaluations,
    }
}

type Vertex = ([f64; 2], f64);

fn sort_simplex(simplex: &mut [Vertex; 3]) {
    // Stable: equal values keep their current order.
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
}

/// Standard Nelder–Mead on a 2-simplex; leaves the best vertex first and
/// returns the number of objective evaluations.
fn nelder_mead(simplex: &mut [Vertex; 3], iterations: usize, f: &mut impl FnMut(f64, f64) -> f64) -> usize {
    const REFLECT: f64 = 1.0;
    const EXPAND: f64 = 2.0;
    const CONTRACT: f64 = 0.5;
    const SHRINK: f64 = 0.5;
    const MIN_DIAMETER: f64 = 1e-11;

    let mut evals = 0;
    let mut eval = |x: [f64; 2], evals: &mut usize| {
        *evals += 1;
        f(x[0], x[1])
    };
    let lerp = |a: [f64; 2], b: [f64; 2], t: f64| [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])];

    sort_simplex(simplex);
    for _ in 0..iterations {
        let diameter = simplex
            .iter()
            .skip(1)
            .map(|v| (v.0[0] - simplex[0].0[0]).hypot(v.0[1] - simplex[0].0[1]))
            .fold(0.0, f64::max);
        if diameter < MIN_DIAMETER {
            break;
        }

        let centroid = lerp(simplex[0].0, simplex[1].0, 0.5);
        let worst = simplex[2];
        let reflected = lerp(centroid, worst.0, -REFLECT);
        let f_reflected = eval(reflected, &mut evals);

        if f_reflected < simplex[0].1 {
            let expanded = lerp(centroid, worst.0, -EXPAND);
            let f_expanded = eval(expanded, &mut evals);
            simplex[2] = if f_expanded < f_reflected {
                (expanded, f_expanded)
            } else {
                (reflected, f_reflected)
            };
        } else if f_reflected < simplex[1].1 {
            simplex[2] = (reflected, f_reflected);
        } else {
            let (contracted, f_contracted) = if f_reflected < worst.1 {
                let x = lerp(centroid, reflected, CONTRACT);
                (x, eval(x, &mut evals))
            } else {
                let x = lerp(centroid, worst.0, CONTRACT);
                (x, eval(x, &mut evals))
            };
            if f_contracted < worst.1.min(f_reflected) {
                simplex[2] = (contracted, f_contracted);
            } else {
                let anchor = simplex[0].0;
                for vertex in simplex.iter_mut().skip(1) {
                    let x = lerp(anchor, vertex.0, SHRINK);
                    *vertex = (x, eval(x, &mut evals));
                }
            }
        }
        sort_simplex(simplex);
    }
    evals
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalization_preserves_direction() {
        let dir = |t: f64, p: f64| [t.sin() * p.cos(), t.sin() * p.sin(), t.cos()];
        for (t, p) in [(4.0, 1.0), (-0.5, 3.0), (7.0, -2.0), (3.2, 6.5), (0.3, 0.2)] {
            let (tn, pn) = normalize_angles(t, p);
            assert!((0.0..=PI).contains(&tn) && (0.0..2.0 * PI).contains(&pn));
            let (a, b) = (dir(t, p), dir(tn, pn));
            for k in 0..3 {
                assert!((a[k] - b[k]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn finds_smooth_minimum_off_grid() {
        let cfg = OptimizerConfig::default();
        let target = [0.713, 2.345];
        let opt = minimize_on_sphere(&cfg, |t, p| (t - target[0]).powi(2) + (p - target[1]).powi(2));
        assert!((opt.theta - target[0]).abs() < 1e-6);
        assert!((opt.phi - target[1]).abs() < 1e-6);
        assert!(opt.evaluations > cfg.grid_resolution * cfg.grid_resolution * 2);
    }

    #[test]
    fn grid_ties_go_to_smallest_angles() {
        let cfg = OptimizerConfig {
            refine_iterations: 0,
            ..OptimizerConfig::default()
        };
        let opt = minimize_on_sphere(&cfg, |_, _| 1.0);
        assert_eq!((opt.theta, opt.phi), (0.0, 0.0));
    }
}
