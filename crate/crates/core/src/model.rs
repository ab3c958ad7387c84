//! Nonlocal form of the generalized two-component Camassa-Holm system.
//!
//! The evolution is
//!
//! ```text
//! u_t = -v^p u_x - I1(u, v)
//! v_t = -u^q v_x - I2(u, v)
//! ```
//!
//! with the smoothing terms
//!
//! ```text
//! I1 = (1-dxx)^{-1}[ (a/p)(v^p)_x u + ((p-a)/p)(v^p)_x u_xx ]
//!    + (1-dxx)^{-1} d_x[ (v^p)_x u_x ]
//! ```
//!
//! and `I2` the mirror image under `(u, p, a) <-> (v, q, b)`. Powers are
//! formed by repeated dealiased collocation products and `(v^p)_x` is the
//! spectral derivative of the assembled power.

use crate::spectral::{
    pointwise_product, product_of_values, PeriodicGrid, SobolevIndex, SpectralField,
};
use serde::{Deserialize, Serialize};

/// Errors from parameter validation.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ModelError {
    #[error("powers must satisfy p >= 1 and q >= 1 (got p={p}, q={q})")]
    InvalidPower { p: u32, q: u32 },
    #[error("couplings must be finite (got a={a}, b={b})")]
    NonFiniteCoupling { a: f64, b: f64 },
}

/// The quadruple `(p, q, a, b)` selecting one member of the family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    pub p: u32,
    pub q: u32,
    pub a: f64,
    pub b: f64,
}

impl SystemParams {
    pub fn new(p: u32, q: u32, a: f64, b: f64) -> Result<Self, ModelError> {
        if p < 1 || q < 1 {
            return Err(ModelError::InvalidPower { p, q });
        }
        if !a.is_finite() || !b.is_finite() {
            return Err(ModelError::NonFiniteCoupling { a, b });
        }
        Ok(Self { p, q, a, b })
    }

    /// Parameters with the two components swapped: `(q, p, b, a)`.
    pub fn swapped(&self) -> Self {
        Self {
            p: self.q,
            q: self.p,
            a: self.b,
            b: self.a,
        }
    }

    /// Both powers even; selects the `omega in {1, 0}` branch of the
    /// separation experiments.
    pub fn both_even(&self) -> bool {
        self.p % 2 == 0 && self.q % 2 == 0
    }
}

impl std::fmt::Display for SystemParams {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "(p={}, q={}, a={}, b={})",
            self.p, self.q, self.a, self.b
        )
    }
}

/// A `(u, v)` state on a shared grid.
#[derive(Debug, Clone)]
pub struct StatePair {
    pub u: SpectralField,
    pub v: SpectralField,
}

impl StatePair {
    pub fn new(u: SpectralField, v: SpectralField) -> Result<Self, crate::spectral::SpectralError> {
        if u.grid() != v.grid() {
            return Err(crate::spectral::SpectralError::GridMismatch(
                u.grid().len(),
                v.grid().len(),
            ));
        }
        Ok(Self { u, v })
    }

    pub fn zeros(grid: &PeriodicGrid) -> Self {
        Self {
            u: SpectralField::zeros(grid),
            v: SpectralField::zeros(grid),
        }
    }

    pub fn grid(&self) -> &PeriodicGrid {
        self.u.grid()
    }

    /// `||u||_{H^s} + ||v||_{H^s}`.
    pub fn pair_norm(&self, s: SobolevIndex) -> f64 {
        self.u.sobolev_norm(s) + self.v.sobolev_norm(s)
    }

    pub fn is_finite(&self) -> bool {
        self.u.is_finite() && self.v.is_finite()
    }

    pub fn sup_abs(&self) -> f64 {
        self.u.sup_abs().max(self.v.sup_abs())
    }

    /// Componentwise `self + rhs * scale`; the RK4 kernel.
    pub fn add_scaled(&self, rhs: &StatePair, scale: f64) -> StatePair {
        StatePair {
            u: &self.u + &(&rhs.u * scale),
            v: &self.v + &(&rhs.v * scale),
        }
    }
}

/// `f^power` by repeated dealiased products (`power >= 1`).
fn power(f: &SpectralField, power: u32) -> SpectralField {
    let mut acc = f.clone();
    for _ in 1..power {
        acc = pointwise_product(&acc, f).expect("power of a field on its own grid");
    }
    acc
}

/// Smoothing term for one component, given the carrier power `c = v^p`
/// (already assembled) and the transported field.
///
/// Computes `(1-dxx)^{-1}[(a/p) c_x u + ((p-a)/p) c_x u_xx] +
/// (1-dxx)^{-1} d_x[c_x u_x]`.
fn nonlocal_from_power(
    carrier_pow: &SpectralField,
    transported: &SpectralField,
    p: u32,
    coupling: f64,
) -> SpectralField {
    let grid = carrier_pow.grid();
    let cx = carrier_pow.derivative(1).values();
    let t0 = transported.values();
    let t1 = transported.derivative(1).values();
    let t2 = transported.derivative(2).values();

    let p = p as f64;
    let inner = &(&product_of_values(grid, &cx, &t0) * (coupling / p))
        + &(&product_of_values(grid, &cx, &t2) * ((p - coupling) / p));
    let flux = product_of_values(grid, &cx, &t1);
    &inner.helmholtz_inverse() + &flux.derivative(1).helmholtz_inverse()
}

/// `I1(u, v)`: the smoothing term of the first equation.
pub fn nonlocal_i1(state: &StatePair, params: &SystemParams) -> SpectralField {
    let vp = power(&state.v, params.p);
    nonlocal_from_power(&vp, &state.u, params.p, params.a)
}

/// `I2(u, v)`: the smoothing term of the second equation, the mirror of
/// [`nonlocal_i1`] under `(u, p, a) <-> (v, q, b)`.
pub fn nonlocal_i2(state: &StatePair, params: &SystemParams) -> SpectralField {
    let uq = power(&state.u, params.q);
    nonlocal_from_power(&uq, &state.v, params.q, params.b)
}

/// Time derivative `(u_t, v_t) = (-v^p u_x - I1, -u^q v_x - I2)`.
pub fn rhs(state: &StatePair, params: &SystemParams) -> StatePair {
    let vp = power(&state.v, params.p);
    let uq = power(&state.u, params.q);
    let grid = state.grid();

    let burgers_u = product_of_values(grid, &vp.values(), &state.u.derivative(1).values());
    let burgers_v = product_of_values(grid, &uq.values(), &state.v.derivative(1).values());

    let du = &(-&burgers_u) - &nonlocal_from_power(&vp, &state.u, params.p, params.a);
    let dv = &(-&burgers_v) - &nonlocal_from_power(&uq, &state.v, params.q, params.b);
    StatePair { u: du, v: dv }
}

/// Momentum variables `m = u - u_xx`, `n = v - v_xx` (multiplier `1 + k^2`).
pub fn momentum(state: &StatePair) -> (SpectralField, SpectralField) {
    let two = SobolevIndex(2.0);
    (state.u.lambda_power(two), state.v.lambda_power(two))
}
