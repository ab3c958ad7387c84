//! Periodic grid, Fourier transform and multiplier operators.
//!
//! All fields live on the torus `[0, 2pi)` sampled at `x_j = 2pi j / N` and
//! are stored as Fourier coefficients with the convention
//!
//! ```text
//! c(k) = (1/2pi) * integral of f(x) exp(-i k x) dx,   k = -N/2+1 .. N/2,
//! ```
//!
//! so Parseval reads `||f||_L2^2 = 2pi * sum_k |c(k)|^2` and the `H^s` norm
//! is the weighted sum with weight `(1 + k^2)^s`. Coefficients are kept in
//! FFT layout (index `i` holds frequency `i` for `i <= N/2`, else `i - N`).

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

/// Errors from grid construction and cross-grid operations.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SpectralError {
    #[error("grid size {0} is invalid: N must be even and >= 8")]
    InvalidGridSize(usize),
    #[error("fields live on different grids ({0} vs {1} points)")]
    GridMismatch(usize, usize),
    #[error("frequency {freq} exceeds the capability of a {grid_size}-point grid")]
    FrequencyTooHigh { freq: i64, grid_size: usize },
}

struct GridInner {
    n: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

/// Uniform periodic grid on `[0, 2pi)` with cached FFT plans.
///
/// Cloning is cheap (shared plans). Two grids compare equal iff they have
/// the same number of points.
#[derive(Clone)]
pub struct PeriodicGrid {
    inner: Arc<GridInner>,
}

impl PeriodicGrid {
    /// Build a grid with `n` collocation points; `n` must be even and >= 8.
    pub fn new(n: usize) -> Result<Self, SpectralError> {
        if n < 8 || n % 2 != 0 {
            return Err(SpectralError::InvalidGridSize(n));
        }
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(n);
        let inverse = planner.plan_fft_inverse(n);
        Ok(Self {
            inner: Arc::new(GridInner {
                n,
                forward,
                inverse,
            }),
        })
    }

    /// Number of collocation points.
    pub fn len(&self) -> usize {
        self.inner.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Grid spacing `2pi / N`.
    pub fn spacing(&self) -> f64 {
        2.0 * PI / self.inner.n as f64
    }

    /// Collocation points `x_j = 2pi j / N`.
    pub fn points(&self) -> Vec<f64> {
        (0..self.inner.n)
            .map(|j| self.spacing() * j as f64)
            .collect()
    }

    /// Largest representable frequency, `N/2`.
    pub fn bandwidth(&self) -> i64 {
        (self.inner.n / 2) as i64
    }

    /// 2/3-rule cutoff: modes with `|k| > N/3` are purged by [`SpectralField::dealias`].
    pub fn dealias_cutoff(&self) -> i64 {
        (self.inner.n / 3) as i64
    }

    /// Signed frequency held at coefficient index `i`.
    fn frequency(&self, i: usize) -> i64 {
        let n = self.inner.n;
        if i <= n / 2 {
            i as i64
        } else {
            i as i64 - n as i64
        }
    }
}

impl PartialEq for PeriodicGrid {
    fn eq(&self, other: &Self) -> bool {
        self.inner.n == other.inner.n
    }
}

impl Eq for PeriodicGrid {}

impl fmt::Debug for PeriodicGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PeriodicGrid(N={})", self.inner.n)
    }
}

/// Regularity exponent of a Sobolev norm `H^s`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SobolevIndex(pub f64);

impl From<f64> for SobolevIndex {
    fn from(s: f64) -> Self {
        SobolevIndex(s)
    }
}

impl fmt::Display for SobolevIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "H^{}", self.0)
    }
}

/// Real-valued periodic function stored as Fourier coefficients.
///
/// The coefficient vector is Hermitian-symmetric (`c(-k) = conj(c(k))`) up
/// to round-off; every operation below preserves that invariant.
#[derive(Clone)]
pub struct SpectralField {
    grid: PeriodicGrid,
    coeffs: Vec<Complex64>,
}

impl SpectralField {
    /// The identically-zero field.
    pub fn zeros(grid: &PeriodicGrid) -> Self {
        Self {
            grid: grid.clone(),
            coeffs: vec![Complex64::new(0.0, 0.0); grid.len()],
        }
    }

    /// The constant field `f(x) = c`.
    pub fn constant(grid: &PeriodicGrid, c: f64) -> Self {
        let mut out = Self::zeros(grid);
        out.coeffs[0] = Complex64::new(c, 0.0);
        out
    }

    /// `cos(freq * x - phase)` built directly in coefficient space
    /// (`c(+-freq) = exp(-+ i phase)/2`), exact to round-off.
    pub fn harmonic(grid: &PeriodicGrid, freq: i64, phase: f64) -> Result<Self, SpectralError> {
        if freq < 1 || freq >= grid.bandwidth() {
            return Err(SpectralError::FrequencyTooHigh {
                freq,
                grid_size: grid.len(),
            });
        }
        let mut out = Self::zeros(grid);
        let half = Complex64::from_polar(0.5, -phase);
        out.coeffs[freq as usize] = half;
        out.coeffs[grid.len() - freq as usize] = half.conj();
        Ok(out)
    }

    /// `sin(freq * x - phase)`, i.e. `cos(freq * x - phase - pi/2)`.
    pub fn harmonic_sin(grid: &PeriodicGrid, freq: i64, phase: f64) -> Result<Self, SpectralError> {
        Self::harmonic(grid, freq, phase + PI / 2.0)
    }

    /// Random trig polynomial with modes `|k| <= max_mode` and coefficients
    /// uniform in the unit square, Hermitian by construction.
    pub fn random_trig(grid: &PeriodicGrid, max_mode: i64, rng: &mut impl rand::Rng) -> Self {
        let max_mode = max_mode.min(grid.bandwidth() - 1).max(0);
        let mut out = Self::zeros(grid);
        out.coeffs[0] = Complex64::new(rng.gen_range(-1.0..1.0), 0.0);
        for k in 1..=max_mode {
            let c = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            out.coeffs[k as usize] = c;
            out.coeffs[grid.len() - k as usize] = c.conj();
        }
        out
    }

    /// Transform collocation values into a field.
    pub fn from_values(grid: &PeriodicGrid, values: &[f64]) -> Result<Self, SpectralError> {
        if values.len() != grid.len() {
            return Err(SpectralError::GridMismatch(values.len(), grid.len()));
        }
        let mut buf: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        grid.inner.forward.process(&mut buf);
        let scale = 1.0 / grid.len() as f64;
        for c in &mut buf {
            *c *= scale;
        }
        Ok(Self {
            grid: grid.clone(),
            coeffs: buf,
        })
    }

    /// Sample `f` at the collocation points and transform.
    pub fn from_fn(grid: &PeriodicGrid, f: impl Fn(f64) -> f64) -> Self {
        let values: Vec<f64> = grid.points().iter().map(|&x| f(x)).collect();
        Self::from_values(grid, &values).expect("sampled on own grid")
    }

    pub fn grid(&self) -> &PeriodicGrid {
        &self.grid
    }

    /// Raw coefficients in FFT layout.
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Coefficient at signed frequency `k` (zero outside the band).
    pub fn coeff(&self, k: i64) -> Complex64 {
        let half = self.grid.bandwidth();
        if k > half || k < -half + 1 {
            return Complex64::new(0.0, 0.0);
        }
        let n = self.grid.len() as i64;
        let idx = if k >= 0 { k } else { k + n };
        self.coeffs[idx as usize]
    }

    /// Collocation values (inverse transform, real parts).
    pub fn values(&self) -> Vec<f64> {
        let mut buf = self.coeffs.clone();
        self.grid.inner.inverse.process(&mut buf);
        buf.iter().map(|c| c.re).collect()
    }

    /// Largest absolute collocation value.
    pub fn sup_abs(&self) -> f64 {
        self.values().iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// True if every coefficient is finite.
    pub fn is_finite(&self) -> bool {
        self.coeffs
            .iter()
            .all(|c| c.re.is_finite() && c.im.is_finite())
    }

    /// Apply a real multiplier `m(k)` per mode.
    fn multiplier(&self, m: impl Fn(i64) -> f64) -> Self {
        let mut out = self.clone();
        for (i, c) in out.coeffs.iter_mut().enumerate() {
            *c *= m(self.grid.frequency(i));
        }
        out
    }

    /// Spectral derivative: `c(k) -> (ik)^order c(k)`.
    ///
    /// For odd orders the Nyquist mode has no real-valued counterpart and is
    /// zeroed to preserve Hermitian symmetry.
    pub fn derivative(&self, order: u32) -> Self {
        let mut out = self.clone();
        let n = self.grid.len();
        for (i, c) in out.coeffs.iter_mut().enumerate() {
            let k = self.grid.frequency(i);
            let ik = Complex64::new(0.0, k as f64);
            *c *= ik.powu(order);
        }
        if order % 2 == 1 {
            out.coeffs[n / 2] = Complex64::new(0.0, 0.0);
        }
        out
    }

    /// Helmholtz inverse `(1 - d_xx)^{-1}`: `c(k) -> c(k) / (1 + k^2)`.
    pub fn helmholtz_inverse(&self) -> Self {
        self.multiplier(|k| 1.0 / (1.0 + (k * k) as f64))
    }

    /// Bessel-potential power `(1 - d_xx)^{s/2}`: `c(k) -> (1 + k^2)^{s/2} c(k)`.
    pub fn lambda_power(&self, s: SobolevIndex) -> Self {
        self.multiplier(|k| (1.0 + (k * k) as f64).powf(s.0 / 2.0))
    }

    /// Sobolev norm `||f||_{H^s} = sqrt(2pi * sum_k (1+k^2)^s |c(k)|^2)`.
    pub fn sobolev_norm(&self, s: SobolevIndex) -> f64 {
        let sum: f64 = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let k = self.grid.frequency(i);
                (1.0 + (k * k) as f64).powf(s.0) * c.norm_sqr()
            })
            .sum();
        (2.0 * PI * sum).sqrt()
    }

    /// 2/3-rule truncation: zero every mode with `|k| > N/3`. Idempotent.
    pub fn dealias(&self) -> Self {
        let cutoff = self.grid.dealias_cutoff();
        self.multiplier(|k| if k.abs() > cutoff { 0.0 } else { 1.0 })
    }

    /// Shift `f(x) -> f(x - x0)` by rotating coefficients.
    pub fn translate(&self, x0: f64) -> Self {
        let mut out = self.clone();
        for (i, c) in out.coeffs.iter_mut().enumerate() {
            let k = self.grid.frequency(i);
            *c *= Complex64::from_polar(1.0, -k as f64 * x0);
        }
        out
    }

    /// Re-expand on another grid by embedding or truncating coefficients.
    pub fn resample(&self, grid: &PeriodicGrid) -> Self {
        let mut out = SpectralField::zeros(grid);
        let half = self.grid.bandwidth().min(grid.bandwidth());
        for k in -half + 1..=half - 1 {
            let n = grid.len() as i64;
            let idx = if k >= 0 { k } else { k + n };
            out.coeffs[idx as usize] = self.coeff(k);
        }
        out
    }

    /// Largest departure from Hermitian symmetry, `max_k |c(-k) - conj(c(k))|`.
    pub fn hermitian_defect(&self) -> f64 {
        let half = self.grid.bandwidth();
        let mut worst = self.coeffs[half as usize].im.abs();
        for k in 1..half {
            let d = (self.coeff(-k) - self.coeff(k).conj()).norm();
            worst = worst.max(d);
        }
        worst
    }
}

impl fmt::Debug for SpectralField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "SpectralField(N={}, L2={:.6e})",
            self.grid.len(),
            self.sobolev_norm(SobolevIndex(0.0))
        )
    }
}

/// Pair norm `||(u, v)||_s = ||u||_{H^s} + ||v||_{H^s}`.
pub fn pair_norm(
    u: &SpectralField,
    v: &SpectralField,
    s: SobolevIndex,
) -> Result<f64, SpectralError> {
    if u.grid != v.grid {
        return Err(SpectralError::GridMismatch(u.grid.len(), v.grid.len()));
    }
    Ok(u.sobolev_norm(s) + v.sobolev_norm(s))
}

/// Collocation product with 2/3-rule dealiasing.
///
/// Both factors are brought to physical space, multiplied pointwise,
/// transformed back and truncated. Exact to round-off whenever the true
/// product fits under the dealias cutoff.
pub fn pointwise_product(
    f: &SpectralField,
    g: &SpectralField,
) -> Result<SpectralField, SpectralError> {
    if f.grid != g.grid {
        return Err(SpectralError::GridMismatch(f.grid.len(), g.grid.len()));
    }
    let fv = f.values();
    let gv = g.values();
    let prod: Vec<f64> = fv.iter().zip(&gv).map(|(a, b)| a * b).collect();
    Ok(SpectralField::from_values(&f.grid, &prod)?.dealias())
}

/// Product of pre-computed collocation values, transformed and dealiased.
/// Agrees with [`pointwise_product`] bit-for-bit; used by hot paths that
/// reuse physical-space values across several products.
pub(crate) fn product_of_values(grid: &PeriodicGrid, fv: &[f64], gv: &[f64]) -> SpectralField {
    let prod: Vec<f64> = fv.iter().zip(gv).map(|(a, b)| a * b).collect();
    SpectralField::from_values(grid, &prod)
        .expect("values sampled on the same grid")
        .dealias()
}

// Elementwise arithmetic. Operands must share a grid; violating that is a
// programming error, so the operators assert rather than return Result.

impl std::ops::Add for &SpectralField {
    type Output = SpectralField;
    fn add(self, rhs: &SpectralField) -> SpectralField {
        assert_eq!(self.grid, rhs.grid, "grid mismatch in field addition");
        let coeffs = self
            .coeffs
            .iter()
            .zip(&rhs.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        SpectralField {
            grid: self.grid.clone(),
            coeffs,
        }
    }
}

impl std::ops::Sub for &SpectralField {
    type Output = SpectralField;
    fn sub(self, rhs: &SpectralField) -> SpectralField {
        assert_eq!(self.grid, rhs.grid, "grid mismatch in field subtraction");
        let coeffs = self
            .coeffs
            .iter()
            .zip(&rhs.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        SpectralField {
            grid: self.grid.clone(),
            coeffs,
        }
    }
}

impl std::ops::Mul<f64> for &SpectralField {
    type Output = SpectralField;
    fn mul(self, rhs: f64) -> SpectralField {
        SpectralField {
            grid: self.grid.clone(),
            coeffs: self.coeffs.iter().map(|c| c * rhs).collect(),
        }
    }
}

impl std::ops::Neg for &SpectralField {
    type Output = SpectralField;
    fn neg(self) -> SpectralField {
        self * -1.0
    }
}
