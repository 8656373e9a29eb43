//! Energy, momentum and angular momentum of a harmonic field.
//!
//! In Gaussian units with `F = E + iB`:
//!
//! ```text
//! ℰ = |F|²/8π,    𝒫 = (Re F × Im F)/4π = (E × B)/4π.
//! ```
//!
//! Volume integrals use the modified toroidal system on a shell
//! `τ_min ≤ τ ≤ τ_max`: Gauss–Legendre in `τ`, periodic trapezoid in `η`
//! and `φ`. Each `τ` slice is summed in node order and the slices are then
//! combined in index order, so the result does not depend on thread count.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coords::{frame_at, modified_to_cartesian, ModifiedToroidalPoint};
use crate::error::{invalid, Result};
use crate::field::{ComplexVector3, HarmonicMode, Vec3};
use crate::quadrature::{gauss_legendre_on, periodic_nodes};

/// Energy density `|F|²/8π`.
pub fn energy_density(f: &ComplexVector3) -> f64 {
    f.norm_sqr() / (8.0 * PI)
}

/// Momentum density `(Re F × Im F)/4π`.
pub fn poynting(f: &ComplexVector3) -> Vec3 {
    f.re().cross(f.im()) * (1.0 / (4.0 * PI))
}

/// Outward momentum flux `∮ 𝒫·dσ` through the torus `τ = τ_s`.
pub fn flux_through_torus<M: HarmonicMode + ?Sized>(
    mode: &M,
    tau_s: f64,
    rho0: f64,
    n_eta: usize,
    n_phi: usize,
) -> Result<f64> {
    if !(tau_s > 0.0 && tau_s < 1.0) {
        return Err(invalid(format!(
            "flux surface tau = {tau_s} must lie in (0, 1)"
        )));
    }
    if n_eta == 0 || n_phi == 0 {
        return Err(invalid("flux quadrature needs nodes in both angles"));
    }
    let weight = (2.0 * PI / n_eta as f64) * (2.0 * PI / n_phi as f64);
    let phis = periodic_nodes(n_phi, 0.0);
    let rows = periodic_nodes(n_eta, -PI)
        .into_par_iter()
        .map(|eta| {
            let mut row = 0.0;
            for &phi in &phis {
                let q = ModifiedToroidalPoint::new(tau_s, eta, phi);
                let frame = frame_at(q, rho0)?;
                let f = mode.eval(modified_to_cartesian(q, rho0)?)?;
                row += poynting(&f).dot(frame.e_tau) * frame.h_eta * frame.h_phi;
            }
            Ok(row)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(rows.iter().sum::<f64>() * weight)
}

/// Integration region `τ_min ≤ τ ≤ τ_max` with its quadrature sizes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShellDomain {
    pub tau_min: f64,
    pub tau_max: f64,
    pub rho0: f64,
    pub n_tau: usize,
    pub n_eta: usize,
    pub n_phi: usize,
}

impl ShellDomain {
    pub fn validate(&self) -> Result<()> {
        if !(self.tau_min > 0.0 && self.tau_min < self.tau_max && self.tau_max < 1.0) {
            return Err(invalid(format!(
                "shell must satisfy 0 < tau_min < tau_max < 1, got [{}, {}]",
                self.tau_min, self.tau_max
            )));
        }
        if !(self.rho0.is_finite() && self.rho0 > 0.0) {
            return Err(invalid(format!("rho0 = {} must be positive", self.rho0)));
        }
        if self.n_tau == 0 || self.n_eta == 0 || self.n_phi == 0 {
            return Err(invalid("shell quadrature sizes must be positive"));
        }
        Ok(())
    }

    /// `∫ h_τ h_η h_φ dτ dη dφ` with the shell's quadrature.
    pub fn volume(&self) -> Result<f64> {
        self.integrate(|_, _| Ok(1.0)).map(|(v, _)| v)
    }

    fn integrate<G>(&self, g: G) -> Result<(f64, Vec3)>
    where
        G: Fn(Vec3, &ModifiedToroidalPoint) -> Result<f64> + Sync,
    {
        self.integrate_pair(|x, q| Ok((g(x, q)?, Vec3::ZERO)))
    }

    fn integrate_pair<G>(&self, g: G) -> Result<(f64, Vec3)>
    where
        G: Fn(Vec3, &ModifiedToroidalPoint) -> Result<(f64, Vec3)> + Sync,
    {
        self.validate()?;
        let angle_weight = (2.0 * PI / self.n_eta as f64) * (2.0 * PI / self.n_phi as f64);
        let etas = periodic_nodes(self.n_eta, -PI);
        let phis = periodic_nodes(self.n_phi, 0.0);
        let slices = gauss_legendre_on(self.n_tau, self.tau_min, self.tau_max)
            .into_par_iter()
            .map(|(tau, w_tau)| {
                let mut s = 0.0;
                let mut v = Vec3::ZERO;
                for &eta in &etas {
                    for &phi in &phis {
                        let q = ModifiedToroidalPoint::new(tau, eta, phi);
                        let jac = frame_at(q, self.rho0)?.volume_element();
                        let x = modified_to_cartesian(q, self.rho0)?;
                        let (a, b) = g(x, &q)?;
                        s += a * jac;
                        v = v + b * jac;
                    }
                }
                let w = w_tau * angle_weight;
                Ok((s * w, v * w))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(slices
            .into_iter()
            .fold((0.0, Vec3::ZERO), |(s, v), (a, b)| (s + a, v + b)))
    }
}

/// Shell integrals of energy and angular momentum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MassSpin {
    /// `∫ ℰ dV`.
    pub mass: f64,
    /// `∫ x × 𝒫 dV`.
    pub angular_momentum: Vec3,
    /// `|∫ x × 𝒫 dV|`.
    pub spin: f64,
}

/// Energy and angular momentum of `mode` over `shell`.
pub fn mass_and_spin<M: HarmonicMode + ?Sized>(mode: &M, shell: &ShellDomain) -> Result<MassSpin> {
    let (mass, angular_momentum) = shell.integrate_pair(|x, _| {
        let f = mode.eval(x)?;
        Ok((energy_density(&f), x.cross(poynting(&f))))
    })?;
    Ok(MassSpin {
        mass,
        angular_momentum,
        spin: angular_momentum.norm(),
    })
}
