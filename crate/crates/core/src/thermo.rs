//! Partition function and internal energy of the Raman Hamiltonian.
//!
//! Each normal mode contributes a geometric series over blocks,
//! `Z_f = Σ_{2j≥0} e^(-β f 2j) = 1 / (1 - e^(-β f))`, and
//! `U = A / (e^(βA) - 1) + B / (e^(βB) - 1)`. Both require `B > 0`,
//! i.e. `ω1 ω2 > λ²`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::raman::{block_spectrum_oracle, normal_modes, spectrum_closed, RamanParams};

/// Largest block index the spectral oracle is allowed to reach.
pub const MAX_ORACLE_TWO_J: u32 = 10_000;
/// Relative truncation error accepted by the spectral oracle.
pub const ORACLE_TAIL_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThermoParams {
    beta: f64,
}

impl ThermoParams {
    pub fn new(beta: f64) -> Result<Self> {
        if !beta.is_finite() || beta <= 0.0 {
            return Err(Error::BadBeta { beta });
        }
        Ok(Self { beta })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ThermoResult {
    pub beta: f64,
    pub z_plus: f64,
    pub z_minus: f64,
    pub z_total: f64,
    pub internal_energy: f64,
}

/// `ω1 ω2 - λ² > 0`, equivalently both normal-mode frequencies positive.
pub fn stability(p: &RamanParams) -> bool {
    stability_gap(p) > 0.0
}

fn stability_gap(p: &RamanParams) -> f64 {
    p.omega1() * p.omega2() - p.lambda() * p.lambda()
}

fn require_stable(p: &RamanParams) -> Result<()> {
    if !stability(p) {
        return Err(Error::UnstableSystem { gap: stability_gap(p) });
    }
    Ok(())
}

/// `Σ_{n≥0} e^(-β f n) = 1 / (1 - e^(-β f))`.
pub fn branch_partition(freq: f64, beta: f64) -> Result<f64> {
    ThermoParams::new(beta)?;
    if freq <= 0.0 || !freq.is_finite() {
        return Err(Error::UnstableBranch { freq });
    }
    Ok(-1.0 / (-beta * freq).exp_m1())
}

/// `f / (e^(β f) - 1)`, the mean energy of one mode.
fn branch_energy(freq: f64, beta: f64) -> f64 {
    freq / (beta * freq).exp_m1()
}

pub fn total_partition(p: &RamanParams, t: ThermoParams) -> Result<ThermoResult> {
    require_stable(p)?;
    let m = normal_modes(p);
    let z_plus = branch_partition(m.a, t.beta)?;
    let z_minus = branch_partition(m.b, t.beta)?;
    Ok(ThermoResult {
        beta: t.beta,
        z_plus,
        z_minus,
        z_total: z_plus * z_minus,
        internal_energy: branch_energy(m.a, t.beta) + branch_energy(m.b, t.beta),
    })
}

pub fn internal_energy(p: &RamanParams, t: ThermoParams) -> Result<f64> {
    Ok(total_partition(p, t)?.internal_energy)
}

/// `ln Z(β)`, used for finite-difference checks of `U = -∂β ln Z`.
pub fn ln_partition(p: &RamanParams, t: ThermoParams) -> Result<f64> {
    require_stable(p)?;
    let m = normal_modes(p);
    Ok(-(-(-t.beta * m.a).exp()).ln_1p() - (-(-t.beta * m.b).exp()).ln_1p())
}

/// Where the block spectra come from in the brute-force sum.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpectrumSource {
    /// `{A n + B (2j - n)}`.
    Closed,
    /// Jacobi diagonalization of each block.
    Jacobi,
}

/// Brute-force `(Z, U)` over blocks `2j = 0..=max_two_j`, no tail check.
pub fn truncated_spectral_sum(
    p: &RamanParams,
    t: ThermoParams,
    max_two_j: u32,
    source: SpectrumSource,
) -> Result<(f64, f64)> {
    let mut z = 0.0;
    let mut e_sum = 0.0;
    for two_j in 0..=max_two_j {
        let levels = match source {
            SpectrumSource::Closed => spectrum_closed(p, two_j),
            SpectrumSource::Jacobi => block_spectrum_oracle(p, two_j)?,
        };
        for e in levels {
            let w = (-t.beta * e).exp();
            z += w;
            e_sum += e * w;
        }
    }
    Ok((z, e_sum / z))
}

/// Upper bounds on the omitted `(Z, Σ E e^(-βE))` mass beyond block `cap`.
///
/// Block `N` holds `N + 1` levels, each with weight at most `y^N`
/// (`y = e^(-βB)`) and energy at most `A N`.
fn tail_bounds(a: f64, beta_b: f64, cap: u32) -> (f64, f64) {
    let k = cap as f64 + 1.0;
    let y = (-beta_b).exp();
    let one_minus = -(-beta_b).exp_m1();
    let yk = (-k * beta_b).exp();
    // Σ_{N≥K} (N+1) y^N
    let z_tail = yk * ((k + 1.0) - k * y) / (one_minus * one_minus);
    // Σ_{N≥K} N (N+1) y^N = y d/dy Σ (N+1) y^N, closed form
    let e_tail = a * yk * (k * (k + 1.0) * one_minus * one_minus + 2.0 * (k + 1.0) * y * one_minus
        + 2.0 * y * y)
        / (one_minus * one_minus * one_minus);
    (z_tail, e_tail)
}

fn tail_ok(p: &RamanParams, t: ThermoParams, cap: u32) -> (bool, f64) {
    let m = normal_modes(p);
    let x = t.beta * m.b;
    // Z ≥ 1 and Σ E e^(-βE) ≥ B e^(-βB) (the lowest excited level)
    let e_floor = m.b * (-x).exp();
    let (zt, et) = tail_bounds(m.a, x, cap);
    (zt < ORACLE_TAIL_TOL && et < ORACLE_TAIL_TOL * e_floor, zt)
}

/// Smallest block cap whose truncation error meets the relative tail tolerance.
pub fn oracle_cap(p: &RamanParams, t: ThermoParams) -> Result<u32> {
    require_stable(p)?;
    let (ok, bound) = tail_ok(p, t, MAX_ORACLE_TWO_J);
    if !ok {
        return Err(Error::TailTooFat { cap: MAX_ORACLE_TWO_J, bound });
    }
    let (mut lo, mut hi) = (0u32, MAX_ORACLE_TWO_J);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if tail_ok(p, t, mid).0 {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(lo)
}

/// Brute-force `(Z, U)` from the closed-form block spectra up to `max_two_j`.
///
/// Fails with `TailTooFat` unless the omitted blocks are provably below `1e-12`
/// relative, or if `max_two_j` exceeds [`MAX_ORACLE_TWO_J`].
pub fn spectral_sum_oracle(p: &RamanParams, t: ThermoParams, max_two_j: u32) -> Result<(f64, f64)> {
    require_stable(p)?;
    let (ok, bound) = tail_ok(p, t, max_two_j);
    if !ok || max_two_j > MAX_ORACLE_TWO_J {
        return Err(Error::TailTooFat { cap: max_two_j, bound });
    }
    truncated_spectral_sum(p, t, max_two_j, SpectrumSource::Closed)
}

/// [`spectral_sum_oracle`] at the smallest admissible cap.
pub fn spectral_sum_oracle_auto(p: &RamanParams, t: ThermoParams) -> Result<(f64, f64)> {
    spectral_sum_oracle(p, t, oracle_cap(p, t)?)
}
