//! Quadrature rules: Gauss–Legendre on an interval and the equispaced
//! periodic trapezoidal rule.

use std::f64::consts::{PI, TAU};

/// Gauss–Legendre nodes and weights on `[-1, 1]`, by Newton iteration on
/// `P_n` from Tricomi's initial guesses.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n > 0, "Gauss-Legendre rule needs at least one node");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let k = (i + 1) as f64;
        // Tricomi: cos(π(4k − 1)/(4n + 2)) with a 1/n² correction
        let mut x = (PI * (4.0 * k - 1.0) / (4.0 * nf + 2.0)).cos()
            * (1.0 - (nf - 1.0) / (8.0 * nf * nf * nf));
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
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Gauss–Legendre rule mapped onto `[a, b]`.
pub fn gauss_legendre_on(n: usize, a: f64, b: f64) -> Vec<(f64, f64)> {
    let (x, w) = gauss_legendre(n);
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    x.iter()
        .zip(&w)
        .map(|(xi, wi)| (mid + half * xi, half * wi))
        .collect()
}

/// `n` equispaced nodes of the periodic trapezoidal rule on a full period
/// starting at `start`; every node has weight `2π/n`.
pub fn periodic_nodes(n: usize, start: f64) -> Vec<f64> {
    (0..n).map(|i| start + TAU * i as f64 / n as f64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_order_rules() {
        let (x, w) = gauss_legendre(2);
        let r = 1.0 / 3f64.sqrt();
        assert!((x[0] + r).abs() < 1e-15 && (x[1] - r).abs() < 1e-15);
        assert!((w[0] - 1.0).abs() < 1e-15 && (w[1] - 1.0).abs() < 1e-15);
        let (x, w) = gauss_legendre(3);
        assert!((x[2] - 0.6f64.sqrt()).abs() < 1e-15 && x[1] == 0.0);
        assert!((w[1] - 8.0 / 9.0).abs() < 1e-15 && (w[0] - 5.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn integrates_polynomials_exactly() {
        for n in [1, 4, 7, 16, 33] {
            let rule = gauss_legendre_on(n, -0.5, 2.0);
            for deg in 0..(2 * n) {
                let exact = (2f64.powi(deg as i32 + 1) - (-0.5f64).powi(deg as i32 + 1))
                    / (deg as f64 + 1.0);
                let approx: f64 = rule.iter().map(|(x, w)| w * x.powi(deg as i32)).sum();
                assert!(
                    (approx - exact).abs() <= 1e-13 * exact.abs().max(1.0),
                    "n={n} deg={deg}: {approx} vs {exact}"
                );
            }
        }
    }

    #[test]
    fn trapezoid_is_spectral_for_periodic() {
        // ∫₀^{2π} e^{cos θ} dθ = 2π I₀(1)
        let exact = TAU * 1.266_065_877_752_008_4;
        let approx: f64 = periodic_nodes(16, 0.3)
            .iter()
            .map(|t| t.cos().exp())
            .sum::<f64>()
            * TAU
            / 16.0;
        assert!((approx - exact).abs() < 1e-14);
    }
}
