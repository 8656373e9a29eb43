//! Cylindrical, toroidal and modified toroidal coordinates around a ring of
//! radius `ρ₀`, with exact scale factors and orthonormal frames.
//!
//! The toroidal system `(u, v, φ)` maps to cylindrical coordinates by
//!
//! ```text
//! ρ = ρ₀ sinh v / (cosh v − cos u),    z = ρ₀ sin u / (cosh v − cos u).
//! ```
//!
//! The modified system uses `τ = sech v ∈ [0, 1]` and `η = −u ∈ (−π, π]`,
//! which gives
//!
//! ```text
//! ρ = ρ₀ √(1 − τ²) / (1 − τ cos η),    z = −ρ₀ τ sin η / (1 − τ cos η).
//! ```
//!
//! `τ = 0` is the ring itself and `τ = 1` the symmetry axis. Near the ring the
//! bent coordinates `(ρ₀τ, η, ρ₀φ)` behave like cylindrical coordinates whose
//! axis is the ring.

use std::f64::consts::{PI, TAU};

use crate::error::{domain, Result};
use crate::field::{CartesianPoint, Vec3};

/// Position in modified toroidal coordinates. Dimensionless.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ModifiedToroidalPoint {
    pub tau: f64,
    pub eta: f64,
    pub phi: f64,
}

impl ModifiedToroidalPoint {
    pub const fn new(tau: f64, eta: f64, phi: f64) -> Self {
        Self { tau, eta, phi }
    }

    /// From classical toroidal coordinates: `τ = sech v`, `η = −u`.
    pub fn from_toroidal(u: f64, v: f64, phi: f64) -> Self {
        Self::new(1.0 / v.cosh(), wrap_eta(-u), phi)
    }

    /// Classical toroidal `(u, v)`; `v` is infinite on the ring.
    pub fn to_toroidal(&self) -> (f64, f64) {
        (-self.eta, (1.0 / self.tau).acosh())
    }

    pub fn to_cartesian(&self, rho0: f64) -> Result<CartesianPoint> {
        modified_to_cartesian(*self, rho0)
    }
}

/// Cylindrical position `(ρ, φ, z)`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct CylindricalPoint {
    pub rho: f64,
    pub phi: f64,
    pub z: f64,
}

impl CylindricalPoint {
    pub const fn new(rho: f64, phi: f64, z: f64) -> Self {
        Self { rho, phi, z }
    }

    pub fn to_cartesian(&self) -> CartesianPoint {
        let (s, c) = self.phi.sin_cos();
        Vec3::new(self.rho * c, self.rho * s, self.z)
    }

    /// `φ` is reported in `[0, 2π)`; on the axis it is 0.
    pub fn from_cartesian(p: CartesianPoint) -> Self {
        Self::new(p.x.hypot(p.y), wrap_phi(p.y.atan2(p.x)), p.z)
    }

    /// Radial and azimuthal unit vectors at this azimuth.
    pub fn unit_vectors(&self) -> (Vec3, Vec3) {
        let (s, c) = self.phi.sin_cos();
        (Vec3::new(c, s, 0.0), Vec3::new(-s, c, 0.0))
    }
}

/// Bent coordinates `(ρ̆, φ̆, z̆) = (ρ₀τ, η, ρ₀φ)`: locally cylindrical about
/// the ring.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BentPoint {
    pub rho_b: f64,
    pub phi_b: f64,
    pub z_b: f64,
}

impl BentPoint {
    pub fn from_modified(p: ModifiedToroidalPoint, rho0: f64) -> Self {
        Self {
            rho_b: rho0 * p.tau,
            phi_b: p.eta,
            z_b: rho0 * p.phi,
        }
    }

    /// The same point read as a cylindrical position about the ring axis.
    pub fn as_cylindrical(&self) -> CylindricalPoint {
        CylindricalPoint::new(self.rho_b, self.phi_b, self.z_b)
    }
}

/// Scale factors and orthonormal frame of the modified toroidal system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameData {
    pub h_tau: f64,
    pub h_eta: f64,
    pub h_phi: f64,
    pub e_tau: Vec3,
    pub e_eta: Vec3,
    pub e_phi: Vec3,
}

impl FrameData {
    /// `h_τ h_η h_φ`, the volume per unit `dτ dη dφ`.
    pub fn volume_element(&self) -> f64 {
        self.h_tau * self.h_eta * self.h_phi
    }
}

fn wrap_phi(phi: f64) -> f64 {
    let w = phi.rem_euclid(TAU);
    if w >= TAU {
        0.0
    } else {
        w
    }
}

/// Maps an angle into `(−π, π]`.
pub fn wrap_eta(eta: f64) -> f64 {
    let mut w = (eta + PI).rem_euclid(TAU) - PI;
    if w <= -PI {
        w += TAU;
    }
    w
}

fn check_tau(tau: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&tau) {
        return Err(domain(format!("tau = {tau} lies outside [0, 1]")));
    }
    Ok(())
}

fn check_rho0(rho0: f64) -> Result<()> {
    if !(rho0 > 0.0 && rho0.is_finite()) {
        return Err(domain(format!(
            "ring radius rho0 = {rho0} must be positive"
        )));
    }
    Ok(())
}

/// Cylindrical `(ρ, z)` of a modified toroidal point.
pub fn modified_to_cylindrical(p: ModifiedToroidalPoint, rho0: f64) -> Result<CylindricalPoint> {
    check_tau(p.tau)?;
    check_rho0(rho0)?;
    let (sin_eta, cos_eta) = p.eta.sin_cos();
    let den = 1.0 - p.tau * cos_eta;
    if den <= 0.0 {
        return Err(domain(format!(
            "point (tau = {}, eta = {}) is the point at infinity on the axis",
            p.tau, p.eta
        )));
    }
    let rho = rho0 * (1.0 - p.tau * p.tau).max(0.0).sqrt() / den;
    let z = -rho0 * p.tau * sin_eta / den;
    Ok(CylindricalPoint::new(rho, p.phi, z))
}

pub fn modified_to_cartesian(p: ModifiedToroidalPoint, rho0: f64) -> Result<CartesianPoint> {
    Ok(modified_to_cylindrical(p, rho0)?.to_cartesian())
}

/// Inverse map. On the ring itself `η` is undefined and reported as 0.
pub fn cartesian_to_modified(x: CartesianPoint, rho0: f64) -> Result<ModifiedToroidalPoint> {
    check_rho0(rho0)?;
    let cyl = CylindricalPoint::from_cartesian(x);
    let (rho, z) = (cyl.rho, cyl.z);
    let d1_sq = (rho + rho0) * (rho + rho0) + z * z;
    let d2_sq = (rho - rho0) * (rho - rho0) + z * z;
    let tau = (2.0 * (d1_sq * d2_sq).sqrt() / (d1_sq + d2_sq)).min(1.0);
    if d2_sq == 0.0 {
        return Ok(ModifiedToroidalPoint::new(0.0, 0.0, cyl.phi));
    }
    // u = atan2(2ρ₀z, ρ² + z² − ρ₀²), written to avoid cancellation near the ring
    let u = (2.0 * rho0 * z).atan2((rho - rho0) * (rho + rho0) + z * z);
    Ok(ModifiedToroidalPoint::new(tau, wrap_eta(-u), cyl.phi))
}

/// Exact scale factors and unit vectors; requires `0 < τ < 1`.
pub fn frame_at(p: ModifiedToroidalPoint, rho0: f64) -> Result<FrameData> {
    check_rho0(rho0)?;
    if !(p.tau > 0.0 && p.tau < 1.0) {
        return Err(domain(format!(
            "frame is degenerate at tau = {} (requires 0 < tau < 1)",
            p.tau
        )));
    }
    let (sin_eta, cos_eta) = p.eta.sin_cos();
    let s = (1.0 - p.tau * p.tau).sqrt();
    let den = 1.0 - p.tau * cos_eta;
    let (rho_hat, phi_hat) = CylindricalPoint::new(0.0, p.phi, 0.0).unit_vectors();

    let e_tau = rho_hat * ((cos_eta - p.tau) / den) - Vec3::Z * (s * sin_eta / den);
    let e_eta = -(rho_hat * (s * sin_eta / den)) - Vec3::Z * ((cos_eta - p.tau) / den);

    Ok(FrameData {
        h_tau: rho0 / (den * s),
        h_eta: rho0 * p.tau / den,
        h_phi: rho0 * s / den,
        e_tau,
        e_eta,
        e_phi: phi_hat,
    })
}

/// The locally cylindrical frame `(ê_ρ̆, ê_φ̆, ê_z̆)` whose axis is the ring.
///
/// This is the `τ → 0` limit of the modified toroidal frame.
pub fn bent_frame(eta: f64, phi: f64) -> [Vec3; 3] {
    let (sin_eta, cos_eta) = eta.sin_cos();
    let (rho_hat, phi_hat) = CylindricalPoint::new(0.0, phi, 0.0).unit_vectors();
    [
        rho_hat * cos_eta - Vec3::Z * sin_eta,
        -(Vec3::Z * cos_eta + rho_hat * sin_eta),
        phi_hat,
    ]
}

/// Outward (increasing `τ`) oriented area of the torus `τ = τ₀` per unit
/// `dη dφ`: `e_τ h_η h_φ`.
pub fn torus_surface_element(tau0: f64, eta: f64, phi: f64, rho0: f64) -> Result<Vec3> {
    let f = frame_at(ModifiedToroidalPoint::new(tau0, eta, phi), rho0)?;
    Ok(f.e_tau * (f.h_eta * f.h_phi))
}
