//! Gauss–Legendre quadrature (fixed, composite and adaptive).

use std::f64::consts::PI;

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Newton iteration on `P_n` from Chebyshev-like initial guesses.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let half = n.div_ceil(2);
        for i in 0..half {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            dp = if d != 0.0 { d } else { dp };
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        half * self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| w * f(mid + half * x))
            .sum::<f64>()
    }

    /// `panels` equal sub-intervals, this rule on each.
    pub fn integrate_composite(&self, f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
        let width = (b - a) / panels as f64;
        (0..panels)
            .map(|k| {
                let lo = a + k as f64 * width;
                let hi = if k + 1 == panels { b } else { lo + width };
                self.integrate(&f, lo, hi)
            })
            .sum()
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { 1.0 } else { p1 };
    let d = if n == 0 {
        0.0
    } else {
        n as f64 * (x * p1 - p0) / (x * x - 1.0)
    };
    (p, d)
}

/// Adaptive bisection driven by comparing a 20-point panel estimate with
/// the sum over its two halves. Stops when the difference is below
/// `rel_tol` times the running magnitude of the integral.
pub fn adaptive_gauss_legendre(f: impl Fn(f64) -> f64, a: f64, b: f64, rel_tol: f64) -> f64 {
    let rule = GaussLegendre::new(20);
    // Seed with a coarse composite pass so that oscillatory integrands
    // are resolved before the tolerance test is trusted.
    let seed_panels = 8;
    let width = (b - a) / seed_panels as f64;
    let scale = rule
        .integrate_composite(|x| f(x).abs(), a, b, seed_panels)
        .max(f64::MIN_POSITIVE);
    let mut total = 0.0;
    let mut stack: Vec<(f64, f64, f64, usize)> = (0..seed_panels)
        .map(|k| {
            let lo = a + k as f64 * width;
            let hi = if k + 1 == seed_panels { b } else { lo + width };
            (lo, hi, rule.integrate(&f, lo, hi), 0)
        })
        .collect();
    while let Some((lo, hi, whole, depth)) = stack.pop() {
        let mid = 0.5 * (lo + hi);
        let left = rule.integrate(&f, lo, mid);
        let right = rule.integrate(&f, mid, hi);
        let span = (hi - lo) / (b - a);
        if (left + right - whole).abs() <= rel_tol * scale * span.max(1e-3) || depth >= 40 {
            total += left + right;
        } else {
            stack.push((lo, mid, left, depth + 1));
            stack.push((mid, hi, right, depth + 1));
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exactness() {
        let rule = GaussLegendre::new(10);
        // Degree 19 is integrated exactly.
        let v = rule.integrate(|x| x.powi(18) + x.powi(19), -1.0, 1.0);
        assert!((v - 2.0 / 19.0).abs() < 1e-14);
        let w: f64 = GaussLegendre::new(7).weights.iter().sum();
        assert!((w - 2.0).abs() < 1e-14);
    }

    #[test]
    fn adaptive_smooth_integrand() {
        let v = adaptive_gauss_legendre(|r| r.powi(-3), 2.0, 7.0, 1e-13);
        let exact = 0.5 * (1.0 / 4.0 - 1.0 / 49.0);
        assert!((v - exact).abs() < 1e-14 * exact.max(1.0));
    }

    #[test]
    fn adaptive_oscillatory() {
        let v = adaptive_gauss_legendre(|x| (30.0 * x).sin().powi(2), 0.0, PI, 1e-12);
        assert!((v - PI / 2.0).abs() < 1e-11);
    }
}
