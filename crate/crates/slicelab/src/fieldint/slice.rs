//! Dense complex matrices and single-slice transfer operators.
//!
//! Everything the field integral touches is tiny (2×2 for one spin-1/2,
//! 4×4 for the dimer, (2s+1)×(2s+1) in general), so a plain row-major
//! `Vec<Complex64>` beats any sparse or external representation. The one
//! numerically delicate spot is `exp(a·Ŝ)` for complex field vectors `a`:
//! we use the closed cosh/sinh form for spin-1/2 and Lagrange interpolation
//! on the eigenvalues for higher spin, each with a series fallback near the
//! removable singularity at `a·a = 0`.

use num::complex::Complex64;

use crate::model::Spin;

/// Square complex matrix, row-major storage.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(n: usize) -> Self {
        CMatrix { n, data: vec![Complex64::new(0.0, 0.0); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMatrix::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.n + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: Complex64) {
        self.data[row * self.n + col] = value;
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.n).map(|i| self.data[i * self.n + i]).sum()
    }

    pub fn mul(&self, rhs: &CMatrix) -> CMatrix {
        let mut out = CMatrix::zeros(self.n);
        self.mul_into(rhs, &mut out);
        out
    }

    /// `out = self · rhs` without allocating. `out` must not alias an input.
    pub(crate) fn mul_into(&self, rhs: &CMatrix, out: &mut CMatrix) {
        let n = self.n;
        assert_eq!(rhs.n, n, "matrix dimensions must agree");
        assert_eq!(out.n, n, "output dimension must agree");
        for i in 0..n {
            for j in 0..n {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..n {
                    acc += self.data[i * n + k] * rhs.data[k * n + j];
                }
                out.data[i * n + j] = acc;
            }
        }
    }

    /// Kronecker product `self ⊗ rhs`.
    pub fn kron(&self, rhs: &CMatrix) -> CMatrix {
        let mut out = CMatrix::zeros(self.n * rhs.n);
        self.kron_into(rhs, &mut out);
        out
    }

    pub(crate) fn kron_into(&self, rhs: &CMatrix, out: &mut CMatrix) {
        let (a, b) = (self.n, rhs.n);
        assert_eq!(out.n, a * b, "output dimension must agree");
        for i in 0..a {
            for j in 0..a {
                let f = self.data[i * a + j];
                for k in 0..b {
                    for l in 0..b {
                        out.data[(i * b + k) * (a * b) + (j * b + l)] = f * rhs.data[k * b + l];
                    }
                }
            }
        }
    }

    pub(crate) fn copy_from(&mut self, rhs: &CMatrix) {
        assert_eq!(self.n, rhs.n, "matrix dimensions must agree");
        self.data.copy_from_slice(&rhs.data);
    }

    pub(crate) fn fill_zero(&mut self) {
        self.data.fill(Complex64::new(0.0, 0.0));
    }

    pub(crate) fn set_identity(&mut self) {
        self.fill_zero();
        for i in 0..self.n {
            self.data[i * self.n + i] = Complex64::new(1.0, 0.0);
        }
    }

    /// `self += factor · rhs`.
    pub(crate) fn add_assign_scaled(&mut self, rhs: &CMatrix, factor: Complex64) {
        assert_eq!(self.n, rhs.n, "matrix dimensions must agree");
        for (d, r) in self.data.iter_mut().zip(&rhs.data) {
            *d += factor * r;
        }
    }

    pub(crate) fn scale_assign(&mut self, factor: Complex64) {
        for d in &mut self.data {
            *d *= factor;
        }
    }

    /// `Tr[self · rhs]` in O(n²), no product matrix formed.
    pub(crate) fn trace_of_product(&self, rhs: &CMatrix) -> Complex64 {
        let n = self.n;
        assert_eq!(rhs.n, n, "matrix dimensions must agree");
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..n {
            for k in 0..n {
                acc += self.data[i * n + k] * rhs.data[k * n + i];
            }
        }
        acc
    }

    /// Conjugate transpose; handy in tests for unitarity checks.
    pub fn adjoint(&self) -> CMatrix {
        let mut out = CMatrix::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                out.data[j * self.n + i] = self.data[i * self.n + j].conj();
            }
        }
        out
    }

    /// Largest entrywise absolute deviation from `rhs`.
    pub fn max_abs_diff(&self, rhs: &CMatrix) -> f64 {
        assert_eq!(self.n, rhs.n, "matrix dimensions must agree");
        self.data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

/// Spin operator triple (Sx, Sy, Sz) in the basis m = s, s−1, …, −s.
pub(crate) fn spin_operators(s: Spin) -> [CMatrix; 3] {
    let d = s.multiplicity() as usize;
    let sv = s.value().to_f64();
    let mut sx = CMatrix::zeros(d);
    let mut sy = CMatrix::zeros(d);
    let mut sz = CMatrix::zeros(d);
    for i in 0..d {
        let m = sv - i as f64;
        sz.set(i, i, Complex64::new(m, 0.0));
        if i >= 1 {
            // ⟨m+1| S₊ |m⟩ with m the state at row i
            let c = (sv * (sv + 1.0) - m * (m + 1.0)).sqrt();
            sx.set(i - 1, i, Complex64::new(c / 2.0, 0.0));
            sx.set(i, i - 1, Complex64::new(c / 2.0, 0.0));
            sy.set(i - 1, i, Complex64::new(0.0, -c / 2.0));
            sy.set(i, i - 1, Complex64::new(0.0, c / 2.0));
        }
    }
    [sx, sy, sz]
}

/// sinh(w/2)/w with the removable singularity handled by series.
fn half_sinhc(w: Complex64) -> Complex64 {
    if w.norm() < 1e-4 {
        let w2 = w * w;
        Complex64::new(0.5, 0.0) + w2 / 48.0 + w2 * w2 / 3840.0
    } else {
        (w / 2.0).sinh() / w
    }
}

/// exp(a·Ŝ) for spin-1/2: cosh(w/2)·I + (sinh(w/2)/w)·(a·σ) with w² = a·a.
pub(crate) fn su2_exp_into(a: &[Complex64; 3], out: &mut CMatrix) {
    debug_assert_eq!(out.dim(), 2);
    let w = (a[0] * a[0] + a[1] * a[1] + a[2] * a[2]).sqrt();
    let ch = (w / 2.0).cosh();
    let sc = half_sinhc(w);
    let i = Complex64::new(0.0, 1.0);
    out.set(0, 0, ch + sc * a[2]);
    out.set(0, 1, sc * (a[0] - i * a[1]));
    out.set(1, 0, sc * (a[0] + i * a[1]));
    out.set(1, 1, ch - sc * a[2]);
}

/// exp(a·Ŝ) for arbitrary spin.
///
/// The matrix a·Ŝ has eigenvalues m·w for m = −s…s with w the principal
/// square root of a·a, so the exponential is the Lagrange interpolant of
/// exp at those points. Near w = 0 the denominators collapse and we switch
/// to the plain Taylor series, which converges instantly there.
pub(crate) fn spin_exp(s: Spin, ops: &[CMatrix; 3], a: &[Complex64; 3]) -> CMatrix {
    let d = s.multiplicity() as usize;
    if s.two_s() == 1 {
        let mut out = CMatrix::zeros(2);
        su2_exp_into(a, &mut out);
        return out;
    }
    let mut coupling = CMatrix::zeros(d);
    for c in 0..3 {
        coupling.add_assign_scaled(&ops[c], a[c]);
    }
    let w = (a[0] * a[0] + a[1] * a[1] + a[2] * a[2]).sqrt();
    if w.norm() < 1e-3 {
        return exp_series(&coupling);
    }
    let sv = s.value().to_f64();
    let levels: Vec<f64> = (0..d).map(|i| sv - i as f64).collect();
    let mut out = CMatrix::zeros(d);
    let mut numer = CMatrix::zeros(d);
    let mut shifted = CMatrix::zeros(d);
    let mut tmp = CMatrix::zeros(d);
    for (i, &mi) in levels.iter().enumerate() {
        numer.set_identity();
        let mut denom = Complex64::new(1.0, 0.0);
        for (j, &mj) in levels.iter().enumerate() {
            if j == i {
                continue;
            }
            shifted.copy_from(&coupling);
            for k in 0..d {
                let v = shifted.get(k, k) - mj * w;
                shifted.set(k, k, v);
            }
            numer.mul_into(&shifted, &mut tmp);
            numer.copy_from(&tmp);
            denom *= (mi - mj) * w;
        }
        out.add_assign_scaled(&numer, (mi * w).exp() / denom);
    }
    out
}

/// Taylor series for exp(M); only used when ‖M‖ is already tiny.
fn exp_series(m: &CMatrix) -> CMatrix {
    let d = m.dim();
    let mut sum = CMatrix::identity(d);
    let mut term = CMatrix::identity(d);
    let mut tmp = CMatrix::zeros(d);
    for k in 1..=40u32 {
        term.mul_into(m, &mut tmp);
        tmp.scale_assign(Complex64::new(1.0 / k as f64, 0.0));
        term.copy_from(&tmp);
        sum.add_assign_scaled(&term, Complex64::new(1.0, 0.0));
        if term.max_abs() < 1e-18 {
            break;
        }
    }
    sum
}
