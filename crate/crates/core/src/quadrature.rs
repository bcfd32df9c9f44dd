//! Gauss–Legendre rules and a small adaptive driver built on them.

use std::f64::consts::PI;
use std::sync::OnceLock;

/// Nodes and weights of an `n`-point Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Computes the rule by Newton iteration on `P_n`.
    pub fn new(order: usize) -> Self {
        assert!(order >= 1, "Gauss–Legendre rule needs at least one node");
        let mut nodes = vec![0.0; order];
        let mut weights = vec![0.0; order];
        let n = order as f64;
        for i in 0..order.div_ceil(2) {
            // Tricomi's initial guess for the i-th root.
            let mut x = (PI * (i as f64 + 0.75) / (n + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(order, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(order, x);
            dp = if d != 0.0 { d } else { dp };
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            weights[i] = w;
            nodes[order - 1 - i] = x;
            weights[order - 1 - i] = w;
        }
        if order % 2 == 1 {
            nodes[order / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Applies the rule to `f` on `[a, b]`.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut sum = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            sum += w * f(mid + half * x);
        }
        sum * half
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// The shared 10-point rule used by the length and entropy quadratures.
pub(crate) fn gl10() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(10))
}

/// Adaptive bisection on `[a, b]` comparing one panel against its two halves
/// until they agree to `rel_tol` (relative to the running total magnitude).
pub fn integrate_adaptive<F: FnMut(f64) -> f64>(
    a: f64,
    b: f64,
    rel_tol: f64,
    max_depth: u32,
    mut f: F,
) -> f64 {
    let rule = gl10();
    let whole = rule.integrate(a, b, &mut f);
    adapt(rule, a, b, whole, rel_tol, whole.abs(), max_depth, &mut f)
}

#[allow(clippy::too_many_arguments)]
fn adapt<F: FnMut(f64) -> f64>(
    rule: &GaussLegendre,
    a: f64,
    b: f64,
    whole: f64,
    rel_tol: f64,
    scale: f64,
    depth: u32,
    f: &mut F,
) -> f64 {
    let mid = 0.5 * (a + b);
    let left = rule.integrate(a, mid, &mut *f);
    let right = rule.integrate(mid, b, &mut *f);
    let refined = left + right;
    let scale = scale.max(refined.abs());
    if depth == 0 || (refined - whole).abs() <= rel_tol * scale || (refined - whole).abs() < 1e-300 {
        return refined;
    }
    adapt(rule, a, mid, left, rel_tol, scale, depth - 1, f)
        + adapt(rule, mid, b, right, rel_tol, scale, depth - 1, f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_two() {
        for n in 1..=20 {
            let rule = GaussLegendre::new(n);
            let total: f64 = rule.weights().iter().sum();
            assert!((total - 2.0).abs() < 1e-14, "n = {n}");
        }
    }

    #[test]
    fn exact_for_polynomials_of_degree_2n_minus_1() {
        let rule = GaussLegendre::new(5);
        // ∫₀¹ x⁹ dx = 1/10
        let v = rule.integrate(0.0, 1.0, |x| x.powi(9));
        assert!((v - 0.1).abs() < 1e-15);
    }

    #[test]
    fn adaptive_handles_peaked_integrand() {
        let v = integrate_adaptive(-1.0, 1.0, 1e-12, 40, |x| 1.0 / (1e-4 + x * x));
        let exact = 2.0 * (1.0 / 1e-4f64.sqrt()) * (1.0 / 1e-4f64.sqrt()).atan();
        assert!((v - exact).abs() / exact < 1e-10);
    }
}
