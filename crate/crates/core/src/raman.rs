//! The Raman coupled-oscillator Hamiltonian
//! `H = ω1 a†a + ω2 b†b - iλ(a†b - ab†)` on fixed-quanta blocks.
//!
//! `H` conserves `n_a + n_b`, so each block of dimension `2j + 1` is treated
//! separately. Coherent states with `τ±` solving `iλτ² + (ω2 - ω1)τ + iλ = 0`
//! are eigenstates with energies `2jA` and `2jB`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{jz_diag, raise_coeff, BlockMatrix};
use crate::linalg::jacobi_eigh;
use crate::su2::{build_acs, AcsLabel};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RamanParams {
    omega1: f64,
    omega2: f64,
    lambda: f64,
}

impl RamanParams {
    pub fn new(omega1: f64, omega2: f64, lambda: f64) -> Result<Self> {
        let ok = omega1.is_finite() && omega2.is_finite() && lambda.is_finite();
        if !ok || omega1 <= 0.0 || omega2 <= 0.0 {
            return Err(Error::InvalidParams { omega1, omega2, lambda });
        }
        Ok(Self { omega1, omega2, lambda })
    }

    pub fn omega1(&self) -> f64 {
        self.omega1
    }

    pub fn omega2(&self) -> f64 {
        self.omega2
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// `sqrt((ω1 - ω2)² + 4λ²)`.
    pub fn splitting(&self) -> f64 {
        (self.omega1 - self.omega2).hypot(2.0 * self.lambda)
    }
}

/// Normal-mode frequencies, `A ≥ B`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NormalModes {
    pub a: f64,
    pub b: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }
}

impl std::str::FromStr for Branch {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "plus" | "+" => Ok(Branch::Plus),
            "minus" | "-" => Ok(Branch::Minus),
            other => Err(format!("unknown branch `{other}`, expected plus or minus")),
        }
    }
}

impl std::fmt::Display for Branch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Branch::Plus => "plus",
            Branch::Minus => "minus",
        })
    }
}

/// Hermitian matrix of `H` on the block `n_a + n_b = 2j`.
pub fn hamiltonian_block(p: &RamanParams, two_j: u32) -> BlockMatrix {
    let n = two_j as usize;
    BlockMatrix::from_fn(two_j, |r, c| {
        if r == c {
            // ω1 n_a + ω2 n_b
            Complex64::from(p.omega1 * (n - r) as f64 + p.omega2 * r as f64)
        } else if c == r + 1 {
            // -iλ J+
            Complex64::new(0.0, -p.lambda * raise_coeff(n, c))
        } else if r == c + 1 {
            // +iλ J-
            Complex64::new(0.0, p.lambda * raise_coeff(n, r))
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

/// Roots `τ± = ((ω1 - ω2) ± sqrt((ω1 - ω2)² + 4λ²)) / (2iλ)`.
///
/// The root without cancellation is evaluated directly and the other one
/// from `τ+ τ- = 1`.
pub fn tau_pm(p: &RamanParams) -> Result<(Complex64, Complex64)> {
    if p.lambda == 0.0 {
        return Err(Error::ZeroCoupling);
    }
    let delta = p.omega1 - p.omega2;
    let d = p.splitting();
    // τ = -i (δ ± d) / (2λ) = i y
    let inv_i = |y: f64| Complex64::new(0.0, -1.0 / y);
    if delta >= 0.0 {
        let y_plus = -(delta + d) / (2.0 * p.lambda);
        Ok((Complex64::new(0.0, y_plus), inv_i(y_plus)))
    } else {
        let y_minus = -(delta - d) / (2.0 * p.lambda);
        Ok((inv_i(y_minus), Complex64::new(0.0, y_minus)))
    }
}

pub fn tau_of(p: &RamanParams, b: Branch) -> Result<Complex64> {
    let (plus, minus) = tau_pm(p)?;
    Ok(match b {
        Branch::Plus => plus,
        Branch::Minus => minus,
    })
}

pub fn normal_modes(p: &RamanParams) -> NormalModes {
    let a = 0.5 * (p.omega1 + p.omega2 + p.splitting());
    // A > 0 always; B from the product avoids cancellation
    let b = (p.omega1 * p.omega2 - p.lambda * p.lambda) / a;
    NormalModes { a, b }
}

/// `E± = 2jA` or `2jB`.
pub fn energy(p: &RamanParams, two_j: u32, b: Branch) -> f64 {
    let m = normal_modes(p);
    two_j as f64
        * match b {
            Branch::Plus => m.a,
            Branch::Minus => m.b,
        }
}

/// `‖H|τ_b⟩ - E_b|τ_b⟩‖₂` on the block.
pub fn eigen_residual(p: &RamanParams, two_j: u32, b: Branch) -> Result<f64> {
    let tau = tau_of(p, b)?;
    let state = build_acs(AcsLabel::new(two_j, tau)?)?;
    let h_state = hamiltonian_block(p, two_j).matvec(&state)?;
    Ok(h_state.axpy(Complex64::from(-energy(p, two_j, b)), &state)?.norm())
}

/// Block eigenvalues from the dense Jacobi solver, ascending.
pub fn block_spectrum_oracle(p: &RamanParams, two_j: u32) -> Result<Vec<f64>> {
    Ok(jacobi_eigh(&hamiltonian_block(p, two_j))?.values)
}

/// `{A n + B (2j - n) : n = 0..=2j}`, ascending.
pub fn spectrum_closed(p: &RamanParams, two_j: u32) -> Vec<f64> {
    let NormalModes { a, b } = normal_modes(p);
    (0..=two_j).map(|n| a * n as f64 + b * (two_j - n) as f64).collect()
}

/// `Jz` expectation of a block eigenvector; handy for labelling states.
pub fn jz_expectation(state: &crate::fock::BlockVector) -> f64 {
    let n = state.two_j() as usize;
    state.amps().iter().enumerate().map(|(l, a)| a.norm_sqr() * jz_diag(n, l)).sum()
}
