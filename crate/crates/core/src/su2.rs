//! Dicke states and atomic (spin) coherent states in the Schwinger realization.
//!
//! The coherent state with label `(j, τ)` is
//!
//! ```text
//! |τ⟩ = (1 + |τ|²)^(-j) Σ_l sqrt(C(2j, l)) τ^(2j-l) |2j-l⟩⊗|l⟩
//! ```
//!
//! with `τ = e^(-iφ) tan(θ/2)` on the sphere chart. Coefficients are assembled
//! from a log-magnitude and a unit phasor, so `2j` up to [`MAX_TWO_J`] never
//! overflows.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{BlockMatrix, BlockVector, Schwinger};
use crate::linalg::expm;

/// Largest supported `2j`.
pub const MAX_TWO_J: u32 = 200;

/// Angular distance from θ = π inside which the τ chart is rejected.
pub const SOUTH_POLE_GUARD: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AcsAngles {
    theta: f64,
    phi: f64,
}

impl AcsAngles {
    /// `theta` must lie in `[0, π]`; `phi` is wrapped into `[0, 2π)`.
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !theta.is_finite() || !phi.is_finite() || !(0.0..=PI).contains(&theta) {
            return Err(Error::InvalidAngles { theta, phi });
        }
        let phi = phi.rem_euclid(2.0 * PI);
        // rem_euclid can round up to exactly 2π
        let phi = if phi >= 2.0 * PI { 0.0 } else { phi };
        Ok(Self { theta, phi })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// `μ = (θ/2) e^(-iφ)`.
    pub fn mu(&self) -> Complex64 {
        Complex64::from_polar(0.5 * self.theta, -self.phi)
    }

    /// `τ = e^(-iφ) tan(θ/2)`.
    pub fn tau(&self) -> Result<Complex64> {
        tau_from_angles(*self)
    }
}

pub fn tau_from_angles(ang: AcsAngles) -> Result<Complex64> {
    if ang.theta >= PI - SOUTH_POLE_GUARD {
        return Err(Error::PoleAtSouthPole { theta: ang.theta });
    }
    Ok(Complex64::from_polar((0.5 * ang.theta).tan(), -ang.phi))
}

/// `(j, τ)` label of an atomic coherent state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AcsLabel {
    two_j: u32,
    tau: Complex64,
}

impl AcsLabel {
    pub fn new(two_j: u32, tau: Complex64) -> Result<Self> {
        if !tau.re.is_finite() || !tau.im.is_finite() {
            return Err(Error::NonFiniteTau { re: tau.re, im: tau.im });
        }
        Ok(Self { two_j, tau })
    }

    pub fn from_angles(two_j: u32, ang: AcsAngles) -> Result<Self> {
        Self::new(two_j, tau_from_angles(ang)?)
    }

    pub fn two_j(&self) -> u32 {
        self.two_j
    }

    pub fn tau(&self) -> Complex64 {
        self.tau
    }
}

/// `|j, m⟩` with both quantum numbers stored doubled.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DickeLabel {
    two_j: u32,
    two_m: i64,
}

impl DickeLabel {
    pub fn new(two_j: u32, two_m: i64) -> Result<Self> {
        let tj = two_j as i64;
        if two_m.abs() > tj || (tj + two_m) % 2 != 0 {
            return Err(Error::InvalidDickeLabel { two_j, two_m });
        }
        Ok(Self { two_j, two_m })
    }

    /// The lowest-weight state `|j, -j⟩`.
    pub fn lowest(two_j: u32) -> Self {
        Self { two_j, two_m: -(two_j as i64) }
    }

    pub fn two_j(&self) -> u32 {
        self.two_j
    }

    pub fn two_m(&self) -> i64 {
        self.two_m
    }
}

/// `|j, m⟩ = |j+m⟩⊗|j-m⟩`, i.e. a one at `l = j - m`.
pub fn build_dicke(lbl: DickeLabel) -> BlockVector {
    let l = ((lbl.two_j as i64 - lbl.two_m) / 2) as usize;
    BlockVector::unit(lbl.two_j, l).expect("validated label")
}

/// `ln n!` for `n = 0..=max`.
fn ln_factorials(max: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(max + 1);
    let mut acc = 0.0;
    out.push(0.0);
    for k in 1..=max {
        acc += (k as f64).ln();
        out.push(acc);
    }
    out
}

/// `u^k` by repeated squaring; exact for unit phasors on the axes.
fn phasor_pow(u: Complex64, mut k: u32) -> Complex64 {
    let mut base = u;
    let mut acc = Complex64::new(1.0, 0.0);
    while k > 0 {
        if k & 1 == 1 {
            acc *= base;
        }
        base *= base;
        k >>= 1;
    }
    acc
}

pub fn build_acs(lbl: AcsLabel) -> Result<BlockVector> {
    let two_j = lbl.two_j;
    if two_j > MAX_TWO_J {
        return Err(Error::CombinatoricsOverflow { two_j, max: MAX_TWO_J });
    }
    let n = two_j as usize;
    let tau = lbl.tau;
    let r = tau.norm();
    let lnf = ln_factorials(n);
    // -j ln(1 + |τ|²)
    let ln_norm = -0.5 * two_j as f64 * (r * r).ln_1p();
    let unit = if r > 0.0 { tau / r } else { Complex64::new(1.0, 0.0) };
    let ln_r = r.ln();

    let amps = (0..=n)
        .map(|l| {
            let k = n - l;
            if k > 0 && r == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            let ln_binom = lnf[n] - lnf[l] - lnf[k];
            let ln_mag = 0.5 * ln_binom + if k > 0 { k as f64 * ln_r } else { 0.0 } + ln_norm;
            phasor_pow(unit, k as u32) * ln_mag.exp()
        })
        .collect();
    BlockVector::from_amps(two_j, amps)
}

/// Independent construction `exp(μJ+ - μ*J-)|j, -j⟩` by a dense matrix
/// exponential on the block.
pub fn build_acs_exponential_oracle(ang: AcsAngles, two_j: u32) -> Result<BlockVector> {
    tau_from_angles(ang)?;
    if two_j > MAX_TWO_J {
        return Err(Error::CombinatoricsOverflow { two_j, max: MAX_TWO_J });
    }
    let mu = ang.mu();
    let generator = &BlockMatrix::schwinger(two_j, Schwinger::JPlus).scale(mu)
        - &BlockMatrix::schwinger(two_j, Schwinger::JMinus).scale(mu.conj());
    expm(&generator)?.matvec(&build_dicke(DickeLabel::lowest(two_j)))
}

/// Closed-form overlap `⟨τ'|τ⟩ = (1 + conj(τ')τ)^(2j) / ((1+|τ|²)^j (1+|τ'|²)^j)`.
pub fn acs_overlap_closed(two_j: u32, tau_prime: Complex64, tau: Complex64) -> Complex64 {
    let j = 0.5 * two_j as f64;
    let num = (Complex64::new(1.0, 0.0) + tau_prime.conj() * tau).powi(two_j as i32);
    let den = ((1.0 + tau.norm_sqr()) * (1.0 + tau_prime.norm_sqr())).powf(j);
    num / den
}

/// Norms of the three eigenvector-relation defects of `|τ⟩`:
///
/// * `(J- + τ² J+)|τ⟩ - 2jτ|τ⟩`
/// * `(J- + τ Jz)|τ⟩ - jτ|τ⟩`
/// * `(τ J+ - Jz)|τ⟩ - j|τ⟩`
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EigenrelationResiduals {
    pub r1: f64,
    pub r2: f64,
    pub r3: f64,
}

impl EigenrelationResiduals {
    pub fn max(&self) -> f64 {
        self.r1.max(self.r2).max(self.r3)
    }
}

pub fn eigenrelation_residuals(lbl: AcsLabel) -> Result<EigenrelationResiduals> {
    let state = build_acs(lbl)?;
    Ok(residuals_of(&state, lbl.tau))
}

/// Eigenvector-relation residuals of an arbitrary block vector for a given τ.
pub fn residuals_of(state: &BlockVector, tau: Complex64) -> EigenrelationResiduals {
    let j = Complex64::from(0.5 * state.two_j() as f64);
    let jp = state.schwinger(Schwinger::JPlus);
    let jm = state.schwinger(Schwinger::JMinus);
    let jz = state.schwinger(Schwinger::Jz);
    let one = Complex64::new(1.0, 0.0);
    let minus = Complex64::new(-1.0, 0.0);

    let defect = |terms: &[(Complex64, &BlockVector)]| {
        terms
            .iter()
            .skip(1)
            .fold(terms[0].1.scale(terms[0].0), |acc, (f, v)| acc.axpy(*f, v).expect("same block"))
            .norm()
    };
    EigenrelationResiduals {
        r1: defect(&[(one, &jm), (tau * tau, &jp), (-(j * 2.0) * tau, state)]),
        r2: defect(&[(one, &jm), (tau, &jz), (-j * tau, state)]),
        r3: defect(&[(tau, &jp), (minus, &jz), (-j, state)]),
    }
}
