//! Resolution of the identity by coherent states, checked by quadrature on
//! the sphere.
//!
//! In the `2j` block the projector `|τ⟩⟨τ|` has entries
//! `sin^(k+k')(θ/2) cos^(4j-k-k')(θ/2) e^(-i(k-k')φ)`. A uniform φ rule with
//! more than `2j` points integrates every harmonic exactly, and the surviving
//! `k = k'` terms are polynomials of degree `2j` in `u = cos θ`, so Gauss–Legendre
//! in `u` with at least `j + 1` nodes is exact as well. The weighted sum
//! `(2j + 1) ∫ dΩ/4π |τ⟩⟨τ|` then reproduces the block identity to rounding.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::{BlockMatrix, ModeOccupation};
use crate::su2::{build_acs, tau_from_angles, AcsAngles, AcsLabel};

/// Environment variable that forces serial evaluation of quadrature terms.
pub const DETERMINISTIC_ENV: &str = "ACS_DETERMINISTIC_REDUCTION";

/// Gauss–Legendre nodes and weights on `[-1, 1]`, nodes ascending.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = vec![(0.0, 0.0); n];
    for i in 0..n.div_ceil(2) {
        // Tricomi initial guess, then Newton on P_n
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                let (_, d) = legendre_with_derivative(n, x);
                dp = d;
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out[i] = (-x, w);
        out[n - 1 - i] = (x, w);
    }
    if n % 2 == 1 {
        out[n / 2].0 = 0.0;
    }
    out
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Product grid: Gauss–Legendre in `cos θ` times a uniform φ rule.
///
/// Weights are normalized to the measure `dΩ / 4π`, so they sum to one.
#[derive(Clone, Debug, PartialEq)]
pub struct SphereGrid {
    /// `(θ_i, w_i)` with `Σ w_i = 1`.
    theta_nodes: Vec<(f64, f64)>,
    phi_count: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GridSummary {
    pub theta_nodes: usize,
    pub phi_count: usize,
}

impl SphereGrid {
    pub fn new(theta_nodes: usize, phi_count: usize) -> Self {
        let theta_nodes = gauss_legendre(theta_nodes)
            .into_iter()
            .map(|(u, w)| (u.clamp(-1.0, 1.0).acos(), 0.5 * w))
            .collect();
        Self { theta_nodes, phi_count }
    }

    /// Default grid for a block: `2j + 2` θ nodes and `4j + 2` φ points.
    pub fn for_block(two_j: u32) -> Self {
        Self::new(two_j as usize + 2, 2 * two_j as usize + 2)
    }

    pub fn theta_nodes(&self) -> &[(f64, f64)] {
        &self.theta_nodes
    }

    pub fn phi_count(&self) -> usize {
        self.phi_count
    }

    pub fn summary(&self) -> GridSummary {
        GridSummary { theta_nodes: self.theta_nodes.len(), phi_count: self.phi_count }
    }

    /// Every `(θ, φ, weight)` point of the grid.
    pub fn points(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        let n_phi = self.phi_count;
        self.theta_nodes.iter().flat_map(move |&(theta, w)| {
            (0..n_phi).map(move |k| (theta, 2.0 * PI * k as f64 / n_phi as f64, w / n_phi as f64))
        })
    }

    pub fn total_weight(&self) -> f64 {
        self.points().map(|(_, _, w)| w).sum()
    }

    /// Minimum `(θ nodes, φ points)` for exact integration in block `2j`.
    pub fn exactness_bounds(two_j: u32) -> (usize, usize) {
        // ⌈j + 1⌉ and 4j + 2
        ((two_j as usize + 3) / 2, 2 * two_j as usize + 2)
    }

    pub fn check_exact_for(&self, two_j: u32) -> Result<()> {
        let (min_theta_nodes, min_phi_count) = Self::exactness_bounds(two_j);
        if self.theta_nodes.len() < min_theta_nodes || self.phi_count < min_phi_count {
            return Err(Error::GridTooCoarse {
                two_j,
                theta_nodes: self.theta_nodes.len(),
                min_theta_nodes,
                phi_count: self.phi_count,
                min_phi_count,
            });
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResolutionReport {
    pub two_j: u32,
    /// Truncation of the full-space check; `None` for a single block.
    pub n_max: Option<u32>,
    pub max_abs_deviation: f64,
    /// Largest entry outside the diagonal blocks (full-space check only).
    pub cross_block_max: Option<f64>,
    pub grid_used: GridSummary,
}

fn serial_requested() -> bool {
    std::env::var(DETERMINISTIC_ENV).map(|v| v == "1").unwrap_or(false)
}

/// Sums in a fixed binary tree so the result does not depend on scheduling.
fn pairwise_sum(mut terms: Vec<BlockMatrix>) -> Option<BlockMatrix> {
    while terms.len() > 1 {
        let mut next = Vec::with_capacity(terms.len().div_ceil(2));
        let mut it = terms.chunks(2);
        for pair in &mut it {
            next.push(match pair {
                [a, b] => a + b,
                [a] => a.clone(),
                _ => unreachable!(),
            });
        }
        terms = next;
    }
    terms.pop()
}

/// `Σ_grid w |τ(θ, φ)⟩⟨τ(θ, φ)|` on the block, without the `(2j + 1)` weight.
///
/// No exactness check is made; see [`identity_resolution_j`] for the gated
/// version.
pub fn assemble_projector_integral(two_j: u32, grid: &SphereGrid) -> Result<BlockMatrix> {
    let node_term = |&(theta, w): &(f64, f64)| -> Result<BlockMatrix> {
        let mut acc = BlockMatrix::zeros(two_j);
        for k in 0..grid.phi_count {
            let phi = 2.0 * PI * k as f64 / grid.phi_count as f64;
            let tau = tau_from_angles(AcsAngles::new(theta, phi)?)?;
            let v = build_acs(AcsLabel::new(two_j, tau)?)?;
            let weight = w / grid.phi_count as f64;
            acc = &acc + &(&BlockMatrix::outer(&v, &v)? * weight);
        }
        Ok(acc)
    };
    let terms: Vec<BlockMatrix> = if serial_requested() {
        grid.theta_nodes.iter().map(node_term).collect::<Result<_>>()?
    } else {
        grid.theta_nodes.par_iter().map(node_term).collect::<Result<_>>()?
    };
    Ok(pairwise_sum(terms).unwrap_or_else(|| BlockMatrix::zeros(two_j)))
}

/// `(2j + 1) ∫ dΩ/4π |τ⟩⟨τ|` on the block; should be the identity.
pub fn resolution_operator(two_j: u32, grid: &SphereGrid) -> Result<BlockMatrix> {
    Ok(&assemble_projector_integral(two_j, grid)? * (two_j as f64 + 1.0))
}

pub fn identity_resolution_j(two_j: u32, grid: &SphereGrid) -> Result<ResolutionReport> {
    grid.check_exact_for(two_j)?;
    let m = resolution_operator(two_j, grid)?;
    Ok(ResolutionReport {
        two_j,
        n_max: None,
        max_abs_deviation: m.max_abs_diff(&BlockMatrix::identity(two_j))?,
        cross_block_max: None,
        grid_used: grid.summary(),
    })
}

/// Index of every occupation with `n_a + n_b ≤ n_max`, block by block.
fn truncated_basis(n_max: u32) -> Vec<ModeOccupation> {
    (0..=n_max)
        .flat_map(|t| (0..=t).map(move |l| ModeOccupation::new(t - l, l)))
        .collect()
}

/// `Σ_{2j=0}^{max_two_j} (2j + 1) ∫ dΩ/4π |τ⟩_j⟨τ|` restricted to total
/// quanta `≤ n_max`, compared against the identity there.
///
/// Each term is embedded in the general two-mode container and accumulated
/// over the whole truncated basis, so any leakage between blocks would show up
/// in `cross_block_max`.
pub fn identity_resolution_full(max_two_j: u32, n_max: u32) -> Result<ResolutionReport> {
    if n_max > max_two_j {
        return Err(Error::CutoffAboveSum { n_max, max_two_j });
    }
    let basis = truncated_basis(n_max);
    let dim = basis.len();
    let mut total = vec![Complex64::new(0.0, 0.0); dim * dim];

    // Blocks above n_max are orthogonal to the truncated space and drop out.
    for two_j in 0..=n_max {
        let grid = SphereGrid::for_block(two_j);
        grid.check_exact_for(two_j)?;
        let degeneracy = two_j as f64 + 1.0;
        for (theta, phi, w) in grid.points() {
            let tau = tau_from_angles(AcsAngles::new(theta, phi)?)?;
            let state = build_acs(AcsLabel::new(two_j, tau)?)?.embed(max_two_j)?;
            let column: Vec<Complex64> = basis.iter().map(|o| state.amplitude(*o)).collect();
            for (r, a) in column.iter().enumerate() {
                if *a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for (c, b) in column.iter().enumerate() {
                    total[r * dim + c] += a * b.conj() * (degeneracy * w);
                }
            }
        }
    }

    let mut max_dev = 0.0f64;
    let mut cross = 0.0f64;
    for r in 0..dim {
        for c in 0..dim {
            let target = if r == c { 1.0 } else { 0.0 };
            let entry = total[r * dim + c];
            max_dev = max_dev.max((entry - target).norm());
            if basis[r].total() != basis[c].total() {
                cross = cross.max(entry.norm());
            }
        }
    }
    Ok(ResolutionReport {
        two_j: max_two_j,
        n_max: Some(n_max),
        max_abs_deviation: max_dev,
        cross_block_max: Some(cross),
        grid_used: SphereGrid::for_block(n_max).summary(),
    })
}
