//! Gauss-Legendre rules and the panel layout used for period integrals over
//! `theta` in `[0, pi/2]`.

use std::collections::HashMap;
use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::{Arc, Mutex, OnceLock};

use crate::potential::ScaledQs;

/// Nodes and weights of the `n`-point rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

/// `P_n(x)` and `P_n'(x)` by the three-term recurrence.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "rule needs at least one node");
        if n == 1 {
            return GaussLegendre {
                nodes: vec![0.0],
                weights: vec![2.0],
            };
        }
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() <= 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d.is_finite() {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        GaussLegendre { nodes, weights }
    }

    /// Shared, lazily built rule.
    pub fn cached(n: usize) -> Arc<GaussLegendre> {
        static CACHE: OnceLock<Mutex<HashMap<usize, Arc<GaussLegendre>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        if let Some(rule) = cache.lock().expect("rule cache").get(&n) {
            return rule.clone();
        }
        let rule = Arc::new(GaussLegendre::new(n));
        cache.lock().expect("rule cache").insert(n, rule.clone());
        rule
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        half * self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(mid + half * x))
            .sum::<f64>()
    }
}

/// Panels on `[0, pi/2]`, shrinking geometrically toward `theta = 0`.
///
/// Near the turning point the kernel switches from `2 S(A)` to
/// `1/(A^2 sin^2 theta)` over a width `~ 1/(A sqrt(S(A)))`, and for high
/// degree the factor `cos^{2m}` adds a layer of width `~ 1/sqrt(m)`. The
/// panels are graded down past the narrower of the two so that each panel
/// sees an integrand that is smooth on its own scale.
pub fn turning_point_panels(qs: &ScaledQs, m: u32) -> Vec<(f64, f64)> {
    let s_at_turn = qs.s_normalized().eval_in_square(1.0);
    let ln_width = -0.5 * (qs.scale().ln() + s_at_turn.ln());
    let width = ln_width.exp().min(1.0 / (m.max(1) as f64).sqrt()).min(1.0);
    let floor = (1e-3 * width).clamp(1e-15, 1e-3);
    let mut edges = vec![FRAC_PI_2];
    let mut t = FRAC_PI_2;
    while t > floor {
        t *= 0.25;
        edges.push(t);
    }
    edges.push(0.0);
    edges.reverse();
    edges.windows(2).map(|w| (w[0], w[1])).collect()
}

/// Integrates over panels with an `n`-point rule on each.
pub fn integrate_panels<F: FnMut(f64) -> f64>(panels: &[(f64, f64)], n: usize, mut f: F) -> f64 {
    let rule = GaussLegendre::cached(n);
    panels.iter().map(|&(a, b)| rule.integrate(a, b, &mut f)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn five_point_rule() {
        let r = GaussLegendre::new(5);
        let x = (5.0 - 2.0 * (10.0f64 / 7.0).sqrt()).sqrt() / 3.0;
        let w = (322.0 + 13.0 * 70f64.sqrt()) / 900.0;
        assert_relative_eq!(r.nodes()[3], x, max_relative = 1e-15);
        assert_relative_eq!(r.weights()[3], w, max_relative = 1e-14);
        assert_eq!(r.nodes()[2], 0.0);
        assert_relative_eq!(r.weights()[2], 128.0 / 225.0, max_relative = 1e-14);
    }

    #[test]
    fn exact_for_degree_2n_minus_1() {
        for n in [2, 7, 40, 200] {
            let r = GaussLegendre::new(n);
            assert_relative_eq!(r.weights().iter().sum::<f64>(), 2.0, max_relative = 1e-13);
            let d = (2 * n - 1) as i32 - 1; // even degree below 2n
            let got = r.integrate(0.0, 1.0, |x| x.powi(d));
            assert_relative_eq!(got, 1.0 / (d + 1) as f64, max_relative = 1e-13);
        }
    }

    #[test]
    fn large_rule_is_accurate() {
        let r = GaussLegendre::new(1600);
        let got = r.integrate(0.0, PI, f64::sin);
        assert_relative_eq!(got, 2.0, max_relative = 1e-13);
        assert!(r.nodes().windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn panels_cover_quarter_period() {
        let qs = crate::Potential::augmented(2).unwrap().scaled_qs(1000.0).unwrap();
        let panels = turning_point_panels(&qs, 2);
        assert_eq!(panels.first().unwrap().0, 0.0);
        assert_eq!(panels.last().unwrap().1, FRAC_PI_2);
        assert!(panels.windows(2).all(|w| w[0].1 == w[1].0));
        // boundary layer of width ~1e-6 must be graded past
        assert!(panels[1].0 < 1e-8);
    }
}
