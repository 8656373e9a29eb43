//! Cylindrical Beltrami eigenmodes ("Bessel beams").
//!
//! The generating potential is the Helmholtz solution
//! `ψ = Z_l(k_ρ ρ) e^{i(lφ + kz)}` with `k_ρ = √(ω² − k²)`. The field is the
//! Chandrasekhar–Kendall combination
//!
//! ```text
//! F = ∇×(ψẑ) + (1/ω) ∇×∇×(ψẑ),
//! ```
//!
//! which satisfies `∇×F = ωF` and `∇·F = 0` whenever `∇²ψ = −ω²ψ`. In
//! cylindrical components:
//!
//! ```text
//! F_ρ = i l ψ/ρ + (i k/ω) ∂_ρψ
//! F_φ = −∂_ρψ − (k l/ω) ψ/ρ
//! F_z = (k_ρ²/ω) ψ
//! ```

use num_complex::Complex64;

use crate::coords::CylindricalPoint;
use crate::error::{invalid, Result};
use crate::field::{complex_times_real, CartesianPoint, ComplexVector3, HarmonicMode, Vec3};
use crate::specfun::{bessel_orders, BesselKind};

/// Parameters selecting one cylindrical eigenmode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CylModeSpec {
    pub omega: f64,
    /// Axial wavenumber; `|k| < ω`.
    pub k: f64,
    /// Angular index around the axis.
    pub l: i32,
    pub kind: BesselKind,
    pub amplitude: Complex64,
}

impl CylModeSpec {
    pub fn new(omega: f64, k: f64, l: i32, kind: BesselKind) -> Self {
        Self {
            omega,
            k,
            l,
            kind,
            amplitude: Complex64::new(1.0, 0.0),
        }
    }

    pub fn with_amplitude(mut self, amplitude: Complex64) -> Self {
        self.amplitude = amplitude;
        self
    }

    /// Transverse wavenumber `√(ω² − k²)`.
    pub fn k_rho(&self) -> f64 {
        ((self.omega - self.k) * (self.omega + self.k)).sqrt()
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.omega.is_finite() && self.omega > 0.0) {
            return Err(invalid(format!("omega = {} must be positive", self.omega)));
        }
        if !(self.k.is_finite() && self.k.abs() < self.omega) {
            return Err(invalid(format!(
                "axial wavenumber |k| = {} must be below omega = {} for a propagating beam",
                self.k.abs(),
                self.omega
            )));
        }
        if !self.amplitude.is_finite() || self.amplitude == Complex64::new(0.0, 0.0) {
            return Err(invalid("amplitude must be finite and nonzero"));
        }
        Ok(())
    }
}

/// `ψ` and its analytic derivatives at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HelmholtzJet {
    pub psi: Complex64,
    /// `ψ/ρ`, finite on the axis for the regular kind.
    pub psi_over_rho: Complex64,
    pub d_rho: Complex64,
    pub d_rho_rho: Complex64,
    pub d_phi: Complex64,
    pub d_phi_phi: Complex64,
    pub d_z: Complex64,
    pub d_z_z: Complex64,
}

impl HelmholtzJet {
    /// `∇²ψ` assembled from the jet; needs `ρ > 0` unless `l = 0`.
    pub fn laplacian(&self, rho: f64) -> Complex64 {
        let mut lap = self.d_rho_rho + self.d_z_z;
        if rho > 0.0 {
            lap += self.d_rho / rho + self.d_phi_phi / (rho * rho);
        } else {
            // on the axis ∂_ρψ/ρ → ∂²_ρψ for an l = 0 potential
            lap += self.d_rho_rho;
        }
        lap
    }
}

/// Generating potential `ψ = Z_l(k_ρ ρ) e^{i(lφ + kz)}` and its derivatives.
pub fn helmholtz_scalar(spec: &CylModeSpec, p: CylindricalPoint) -> Result<HelmholtzJet> {
    spec.validate()?;
    let kr = spec.k_rho();
    let x = kr * p.rho;
    let l = spec.l;
    // Z_{l-2} ..= Z_{l+2}
    let z = bessel_orders(spec.kind, l - 2, l + 2, x)?;
    let phase = spec.amplitude * Complex64::from_polar(1.0, l as f64 * p.phi + spec.k * p.z);
    let lf = l as f64;

    let value = z[2];
    let deriv = 0.5 * (z[1] - z[3]);
    let second = 0.25 * (z[0] - 2.0 * z[2] + z[4]);
    // Z_l(x)/x = (Z_{l-1} + Z_{l+1}) / (2l), valid on the axis as well
    let over_x = if l == 0 {
        0.0
    } else {
        (z[1] + z[3]) / (2.0 * lf)
    };

    let psi = phase * value;
    let i = Complex64::i();
    Ok(HelmholtzJet {
        psi,
        psi_over_rho: phase * (kr * over_x),
        d_rho: phase * (kr * deriv),
        d_rho_rho: phase * (kr * kr * second),
        d_phi: i * lf * psi,
        d_phi_phi: -(lf * lf) * psi,
        d_z: i * spec.k * psi,
        d_z_z: -(spec.k * spec.k) * psi,
    })
}

/// Cylindrical components `(F_ρ, F_φ, F_z)` of the eigenmode.
pub fn ck_mode_components(spec: &CylModeSpec, p: CylindricalPoint) -> Result<[Complex64; 3]> {
    let jet = helmholtz_scalar(spec, p)?;
    let i = Complex64::i();
    let (omega, k, lf) = (spec.omega, spec.k, spec.l as f64);
    let kr2 = (omega - k) * (omega + k);
    Ok([
        i * lf * jet.psi_over_rho + i * (k / omega) * jet.d_rho,
        -jet.d_rho - (k * lf / omega) * jet.psi_over_rho,
        (kr2 / omega) * jet.psi,
    ])
}

/// The eigenmode in Cartesian components.
pub fn ck_mode(spec: &CylModeSpec, p: CylindricalPoint) -> Result<ComplexVector3> {
    let [f_rho, f_phi, f_z] = ck_mode_components(spec, p)?;
    let (rho_hat, phi_hat) = p.unit_vectors();
    Ok(complex_times_real(f_rho, rho_hat)
        + complex_times_real(f_phi, phi_hat)
        + complex_times_real(f_z, Vec3::Z))
}

/// A cylindrical eigenmode as a [`HarmonicMode`].
#[derive(Debug, Clone, Copy)]
pub struct CylMode {
    spec: CylModeSpec,
}

impl CylMode {
    pub fn new(spec: CylModeSpec) -> Result<Self> {
        spec.validate()?;
        Ok(Self { spec })
    }

    pub fn spec(&self) -> &CylModeSpec {
        &self.spec
    }
}

impl HarmonicMode for CylMode {
    fn omega(&self) -> f64 {
        self.spec.omega
    }

    fn eval(&self, p: CartesianPoint) -> Result<ComplexVector3> {
        ck_mode(&self.spec, CylindricalPoint::from_cartesian(p))
    }
}
