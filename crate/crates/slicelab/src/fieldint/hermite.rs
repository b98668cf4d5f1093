//! Gauss–Hermite quadrature rules for the weight e^{−x²} on ℝ.
//!
//! Nodes are the roots of the physicists' Hermite polynomial Hₙ, found by
//! scanning the orthonormal three-term recurrence for sign changes and
//! polishing with bisection plus a few Newton steps; weights come from the
//! Christoffel formula 1/Σₖ pₖ(xᵢ)². Everything is done in the orthonormal
//! normalization so intermediate values stay O(1) even for large n.

/// Orthonormal Hermite values p₀(x) … p_{n}(x).
///
/// p₀ = π^{−1/4}, p_{k+1} = x·√(2/(k+1))·p_k − √(k/(k+1))·p_{k−1}.
fn orthonormal_values(n: usize, x: f64, out: &mut Vec<f64>) {
    out.clear();
    out.push(std::f64::consts::PI.powf(-0.25));
    if n == 0 {
        return;
    }
    out.push(x * 2f64.sqrt() * out[0]);
    for k in 1..n {
        let k = k as f64;
        let next = x * (2.0 / (k + 1.0)).sqrt() * out[out.len() - 1]
            - (k / (k + 1.0)).sqrt() * out[out.len() - 2];
        out.push(next);
    }
}

/// pₙ(x) alone.
fn pn(n: usize, x: f64, scratch: &mut Vec<f64>) -> f64 {
    orthonormal_values(n, x, scratch);
    scratch[n]
}

/// Nodes (ascending) and weights of the n-point Gauss–Hermite rule:
/// ∫ f(x) e^{−x²} dx ≈ Σ wᵢ f(xᵢ). Weights sum to √π.
pub fn gauss_hermite(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "quadrature order must be at least 1");
    let mut scratch = Vec::with_capacity(n + 1);
    // all roots lie inside (−√(2n+1), √(2n+1)); find the positive ones
    let bound = ((2 * n + 1) as f64).sqrt();
    let mut positive = Vec::with_capacity(n / 2);
    let steps = 40 * n; // fine enough that adjacent roots never share a cell
    let lo0 = if n % 2 == 0 { 0.0 } else { 1e-12 }; // skip the root at 0 for odd n
    let mut prev_x = lo0;
    let mut prev_v = pn(n, prev_x, &mut scratch);
    for i in 1..=steps {
        let x = lo0 + (bound - lo0) * i as f64 / steps as f64;
        let v = pn(n, x, &mut scratch);
        if prev_v == 0.0 {
            positive.push(prev_x);
        } else if prev_v * v < 0.0 {
            positive.push(refine_root(n, prev_x, x, &mut scratch));
        }
        prev_x = x;
        prev_v = v;
    }
    debug_assert_eq!(positive.len(), n / 2, "root scan missed a sign change");

    let mut nodes = Vec::with_capacity(n);
    for &r in positive.iter().rev() {
        nodes.push(-r);
    }
    if n % 2 == 1 {
        nodes.push(0.0);
    }
    nodes.extend(positive.iter().copied());

    let weights = nodes
        .iter()
        .map(|&x| {
            orthonormal_values(n - 1, x, &mut scratch);
            1.0 / scratch.iter().map(|p| p * p).sum::<f64>()
        })
        .collect();
    (nodes, weights)
}

/// Bisection to ~1e−10 followed by Newton polishing.
///
/// pₙ′(x) = √(2n)·p_{n−1}(x) for the orthonormal family.
fn refine_root(n: usize, mut lo: f64, mut hi: f64, scratch: &mut Vec<f64>) -> f64 {
    let mut flo = pn(n, lo, scratch);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        let fmid = pn(n, mid, scratch);
        if fmid == 0.0 {
            return mid;
        }
        if flo * fmid < 0.0 {
            hi = mid;
        } else {
            lo = mid;
            flo = fmid;
        }
        if hi - lo < 1e-10 {
            break;
        }
    }
    let mut x = 0.5 * (lo + hi);
    for _ in 0..4 {
        orthonormal_values(n, x, scratch);
        let f = scratch[n];
        let df = (2.0 * n as f64).sqrt() * scratch[n - 1];
        if df == 0.0 {
            break;
        }
        let step = f / df;
        x -= step;
        if step.abs() < 1e-16 * x.abs().max(1.0) {
            break;
        }
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    const SQRT_PI: f64 = 1.772453850905516;

    #[test]
    fn one_point_rule_is_midpoint() {
        let (x, w) = gauss_hermite(1);
        assert_eq!(x, vec![0.0]);
        assert!((w[0] - SQRT_PI).abs() < 1e-15);
    }

    #[test]
    fn two_point_rule_matches_closed_form() {
        let (x, w) = gauss_hermite(2);
        let r = 0.5f64.sqrt();
        assert!((x[0] + r).abs() < 1e-14);
        assert!((x[1] - r).abs() < 1e-14);
        assert!((w[0] - SQRT_PI / 2.0).abs() < 1e-14);
        assert!((w[1] - SQRT_PI / 2.0).abs() < 1e-14);
    }

    #[test]
    fn weights_sum_to_sqrt_pi() {
        for n in 1..=48 {
            let (_, w) = gauss_hermite(n);
            let sum: f64 = w.iter().sum();
            assert!((sum - SQRT_PI).abs() < 1e-12, "n = {n}: sum = {sum}");
        }
    }

    #[test]
    fn nodes_are_symmetric_and_sorted() {
        for n in [2usize, 5, 8, 13, 24] {
            let (x, w) = gauss_hermite(n);
            assert_eq!(x.len(), n);
            for i in 1..n {
                assert!(x[i] > x[i - 1]);
            }
            for i in 0..n {
                assert!((x[i] + x[n - 1 - i]).abs() < 1e-12);
                assert!((w[i] - w[n - 1 - i]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn low_moments_are_exact() {
        // ∫ x² e^{−x²} = √π/2, ∫ x⁴ e^{−x²} = 3√π/4, odd moments vanish
        for n in [3usize, 6, 16, 24] {
            let (x, w) = gauss_hermite(n);
            let m2: f64 = x.iter().zip(&w).map(|(x, w)| w * x * x).sum();
            let m3: f64 = x.iter().zip(&w).map(|(x, w)| w * x * x * x).sum();
            let m4: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(4)).sum();
            assert!((m2 - SQRT_PI / 2.0).abs() < 1e-12, "n = {n}");
            assert!(m3.abs() < 1e-12, "n = {n}");
            assert!((m4 - 3.0 * SQRT_PI / 4.0).abs() < 1e-12, "n = {n}");
        }
    }

    #[test]
    fn oscillatory_integral_converges() {
        // ∫ cos(x) e^{−x²} dx = √π e^{−1/4}
        let want = SQRT_PI * (-0.25f64).exp();
        let (x, w) = gauss_hermite(16);
        let got: f64 = x.iter().zip(&w).map(|(x, w)| w * x.cos()).sum();
        assert!((got - want).abs() < 1e-12);
    }

    #[test]
    fn polynomial_of_degree_2n_minus_1_is_exact() {
        // degree-9 polynomial integrated by the 5-point rule
        let (x, w) = gauss_hermite(5);
        let poly = |t: f64| 3.0 + t - 2.0 * t.powi(3) + 0.5 * t.powi(6) + t.powi(9);
        let got: f64 = x.iter().zip(&w).map(|(x, w)| w * poly(*x)).sum();
        // moments: m0 = √π, m6 = 15√π/8, odd vanish
        let want = 3.0 * SQRT_PI + 0.5 * 15.0 * SQRT_PI / 8.0;
        assert!((got - want).abs() < 1e-12);
    }
}
