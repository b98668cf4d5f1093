//! Small floating-point toolbox: adaptive quadrature, root bracketing,
//! one-dimensional minimization, and least-squares polynomial fits.

/// Adaptive Simpson integration of `f` over `[a, b]` to absolute tolerance
/// `tol`. Recursion depth is capped; the cap is generous for the smooth
/// integrands used here.
pub fn integrate<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
        let m = 0.5 * (a + b);
        let fm = f(m);
        let s = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        (m, fm, s)
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        m: f64,
        fm: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let (lm, flm, left) = simpson(f, a, fa, m, fm);
        let (rm, frm, right) = simpson(f, m, fm, b, fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        recurse(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1)
            + recurse(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1)
    }
    let fa = f(a);
    let fb = f(b);
    let (m, fm, whole) = simpson(f, a, fa, b, fb);
    recurse(f, a, fa, b, fb, m, fm, whole, tol, 48)
}

/// Bisection on a bracketing interval: requires sign(f(a)) ≠ sign(f(b)).
/// Returns the midpoint of the final interval of width ≤ `tol`.
pub fn bisect<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let mut fa = f(a);
    let fb = f(b);
    assert!(
        fa.signum() != fb.signum(),
        "bisect needs a sign change on [{a}, {b}]"
    );
    while (b - a).abs() > tol {
        let m = 0.5 * (a + b);
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Golden-section minimization of a unimodal `f` on `[a, b]`.
pub fn golden_min<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64, tol: f64) -> f64 {
    const INVPHI: f64 = 0.618_033_988_749_894_9;
    let mut c = b - INVPHI * (b - a);
    let mut d = a + INVPHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INVPHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INVPHI * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

/// Least-squares polynomial fit of degree `degree` through `(xs, ys)`,
/// returned as ascending coefficients. Solves the normal equations by
/// Gaussian elimination with partial pivoting; fine for the small degrees
/// used here. Returns `None` if the system is singular (degenerate grid).
///
/// The abscissae are centred and scaled to [−1, 1] internally before the
/// Vandermonde system is formed — otherwise the normal equations square an
/// already lopsided condition number and extrapolated values (the constant
/// term in particular) lose half their digits.
pub fn polyfit(xs: &[f64], ys: &[f64], degree: usize) -> Option<Vec<f64>> {
    assert_eq!(xs.len(), ys.len());
    let n = degree + 1;
    if xs.len() < n {
        return None;
    }
    let mid = xs.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| {
        (lo.min(x), hi.max(x))
    });
    let center = 0.5 * (mid.0 + mid.1);
    let half = 0.5 * (mid.1 - mid.0);
    let scale = if half > 0.0 { half } else { 1.0 };
    // Normal equations A^T A c = A^T y with A_{ij} = t_i^j, t = (x − c)/s.
    let mut ata = vec![vec![0.0; n]; n];
    let mut aty = vec![0.0; n];
    for (&x, &y) in xs.iter().zip(ys) {
        let t = (x - center) / scale;
        let mut powers = vec![1.0; 2 * n - 1];
        for k in 1..2 * n - 1 {
            powers[k] = powers[k - 1] * t;
        }
        for i in 0..n {
            aty[i] += powers[i] * y;
            for j in 0..n {
                ata[i][j] += powers[i + j];
            }
        }
    }
    let c = solve_linear(&mut ata, &mut aty)?;
    // Expand Σ cₖ((x − c)/s)^k back into ascending powers of x.
    let mut binom = vec![0.0; n]; // running row of C(k, j)·(−c)^{k−j}/s^k
    let mut out = vec![0.0; n];
    for (k, &ck) in c.iter().enumerate() {
        if k == 0 {
            binom[0] = 1.0;
        } else {
            for j in (1..=k).rev() {
                binom[j] = (binom[j] * (-center) + binom[j - 1]) / scale;
            }
            binom[0] = binom[0] * (-center) / scale;
        }
        for j in 0..=k {
            out[j] += ck * binom[j];
        }
    }
    Some(out)
}

/// In-place Gaussian elimination with partial pivoting; returns the solution
/// or `None` on a (numerically) singular matrix.
fn solve_linear(a: &mut [Vec<f64>], b: &mut [f64]) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| {
            a[i][col]
                .abs()
                .partial_cmp(&a[j][col].abs())
                .unwrap_or(std::cmp::Ordering::Equal)
        })?;
        if a[pivot][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let factor = a[row][col] / a[col][col];
            for k in col..n {
                a[row][k] -= factor * a[col][k];
            }
            b[row] -= factor * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut acc = b[row];
        for k in row + 1..n {
            acc -= a[row][k] * x[k];
        }
        x[row] = acc / a[row][row];
    }
    Some(x)
}

/// Evaluate ascending-coefficient polynomial at `x`.
pub fn polyval(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

/// Slope of the least-squares line through (ln x, ln y): the fitted power in
/// y ∝ x^p. All xs and ys must be positive.
pub fn fitted_power(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let line = polyfit(&lx, &ly, 1).expect("power fit needs two distinct points");
    line[1]
}
