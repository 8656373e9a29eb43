//! Ring modes: eigenmodes localized around a circle of radius `ρ₀`.
//!
//! A cylindrical eigenmode is bent so its axis follows the ring: its value
//! at bent coordinates `(ρ̆, φ̆, z̆) = (ρ₀τ₀, η, ρ₀φ)` in the frame
//! [`bent_frame`] gives a boundary trace `C` on the torus `τ = τ₀`. The
//! axial wavenumber is quantized, `k = m/ρ₀`, so the trace is single valued
//! around the ring. The field everywhere else is the surface integral
//!
//! ```text
//! F(x) = −(1/8π) ∮ [ a(d) C×dσ + b(d) ( x̃ (C·dσ) + x̃ × (C×dσ) ) ],
//! a(d) = 2ω cos(ωd)/d,    b(d) = 2cos(ωd)/d³ + 2ω sin(ωd)/d²,
//! ```
//!
//! with `x̃ = x′ − x`, `d = |x̃|` and `x′` running over the torus. The
//! integral is evaluated with the periodic trapezoidal rule in `η` and `φ`.
//!
//! Away from the surface the integral satisfies, node by node,
//!
//! ```text
//! ∇×F − ωF = ∇Φ,    ∇·F = ωΦ,
//! Φ(x) = −(1/8π) ∮ [ b(d) x̃·(C×dσ) − a(d) C·dσ ],
//! ```
//!
//! so `F` is Beltrami exactly when the defect potential `Φ` vanishes, and
//! `F + ∇Φ/ω` is Beltrami for any trace. See [`defect_potential`].

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::coords::{
    bent_frame, frame_at, modified_to_cartesian, wrap_eta, BentPoint, ModifiedToroidalPoint,
};
use crate::cyl_modes::{ck_mode_components, CylModeSpec};
use crate::error::{invalid, Error, Result};
use crate::field::{complex_times_real, CartesianPoint, ComplexVector3, HarmonicMode, Vec3};
use crate::quadrature::periodic_nodes;
use crate::specfun::BesselKind;

/// Largest tube parameter accepted for the boundary surface.
pub const MAX_TAU0: f64 = 0.3;

/// Minimum target distance from the surface, in quadrature spacings.
pub const MIN_STANDOFF_SPACINGS: f64 = 3.0;

/// Parameters of one ring mode and its quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RingModeSpec {
    pub omega: f64,
    /// Number of axial wavelengths around the ring.
    pub m: i32,
    /// Angular index around the tube.
    pub l: i32,
    pub rho0: f64,
    pub kind: BesselKind,
    /// Tube parameter of the boundary surface.
    pub tau0: f64,
    pub n_eta: usize,
    pub n_phi: usize,
    pub amplitude: Complex64,
    /// The assembled field is multiplied by `τ₀^(−p)`.
    pub scaling_exponent: f64,
}

impl RingModeSpec {
    /// Spec with `τ₀ = 0.01`, a 32 × 256 grid, unit amplitude and no
    /// rescaling.
    pub fn new(omega: f64, m: i32, l: i32, rho0: f64, kind: BesselKind) -> Self {
        Self {
            omega,
            m,
            l,
            rho0,
            kind,
            tau0: 0.01,
            n_eta: 32,
            n_phi: 256,
            amplitude: Complex64::new(1.0, 0.0),
            scaling_exponent: 0.0,
        }
    }

    pub fn with_tau0(mut self, tau0: f64) -> Self {
        self.tau0 = tau0;
        self
    }

    pub fn with_nodes(mut self, n_eta: usize, n_phi: usize) -> Self {
        self.n_eta = n_eta;
        self.n_phi = n_phi;
        self
    }

    pub fn with_amplitude(mut self, amplitude: Complex64) -> Self {
        self.amplitude = amplitude;
        self
    }

    pub fn with_scaling_exponent(mut self, p: f64) -> Self {
        self.scaling_exponent = p;
        self
    }

    /// Quantized axial wavenumber `m/ρ₀`.
    pub fn k(&self) -> f64 {
        self.m as f64 / self.rho0
    }

    /// The straight-beam mode whose bent copy supplies the boundary trace.
    pub fn cylinder_mode(&self) -> CylModeSpec {
        CylModeSpec::new(self.omega, self.k(), self.l, self.kind).with_amplitude(self.amplitude)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rho0.is_finite() && self.rho0 > 0.0) {
            return Err(invalid(format!("rho0 = {} must be positive", self.rho0)));
        }
        if !(self.omega.is_finite() && self.omega > 0.0) {
            return Err(invalid(format!("omega = {} must be positive", self.omega)));
        }
        quantized_wavenumber(self.m, self.rho0)?;
        if self.k().abs() >= self.omega {
            return Err(invalid(format!(
                "|m|/rho0 = {} must be below omega = {} so the bent beam propagates",
                self.k().abs(),
                self.omega
            )));
        }
        if !(self.tau0 > 0.0 && self.tau0 <= MAX_TAU0) {
            return Err(invalid(format!(
                "tau0 = {} must lie in (0, {MAX_TAU0}]",
                self.tau0
            )));
        }
        for (name, n) in [("n_eta", self.n_eta), ("n_phi", self.n_phi)] {
            if n < 8 || n % 2 != 0 {
                return Err(invalid(format!("{name} = {n} must be even and at least 8")));
            }
        }
        if !self.amplitude.is_finite() || self.amplitude == Complex64::new(0.0, 0.0) {
            return Err(invalid("amplitude must be finite and nonzero"));
        }
        if !self.scaling_exponent.is_finite() {
            return Err(invalid("scaling_exponent must be finite"));
        }
        Ok(())
    }
}

/// Axial wavenumber `k = m/ρ₀` of a mode with `m` wavelengths around the ring.
pub fn quantized_wavenumber(m: i32, rho0: f64) -> Result<f64> {
    if m == 0 {
        return Err(invalid(
            "m = 0 is not allowed: the ring must hold a whole, nonzero number of axial \
             wavelengths, 2*pi*rho0 = |m| * lambda",
        ));
    }
    if !(rho0.is_finite() && rho0 > 0.0) {
        return Err(invalid(format!("rho0 = {rho0} must be positive")));
    }
    Ok(m as f64 / rho0)
}

/// Axial wavelength `2πρ₀/|m|`.
pub fn ring_wavelength(m: i32, rho0: f64) -> Result<f64> {
    quantized_wavenumber(m, rho0).map(|k| 2.0 * PI / k.abs())
}

/// Boundary trace `C` at surface angles `(η, φ)` of the torus `τ = τ₀`.
pub fn boundary_trace(spec: &RingModeSpec, eta: f64, phi: f64) -> Result<ComplexVector3> {
    let bent = BentPoint::from_modified(ModifiedToroidalPoint::new(spec.tau0, eta, phi), spec.rho0);
    let comps = ck_mode_components(&spec.cylinder_mode(), bent.as_cylindrical())?;
    let frame = bent_frame(eta, phi);
    Ok(complex_times_real(comps[0], frame[0])
        + complex_times_real(comps[1], frame[1])
        + complex_times_real(comps[2], frame[2]))
}

/// Kernel weights `(a(d), b(d))`.
pub fn kernel_weights(omega: f64, d: f64) -> (f64, f64) {
    let (s, c) = (omega * d).sin_cos();
    let a = 2.0 * c * omega / d;
    let b = 2.0 * c / (d * d * d) + 2.0 * omega * s / (d * d);
    (a, b)
}

/// The same weights written with `e^{±iωd}`:
/// `a = ω(e^{iωd} + e^{−iωd})/d`,
/// `b = (e^{iωd} + e^{−iωd})/d³ − iω(e^{iωd} − e^{−iωd})/d²`.
pub fn kernel_weights_exponential(omega: f64, d: f64) -> (Complex64, Complex64) {
    let ep = Complex64::from_polar(1.0, omega * d);
    let em = Complex64::from_polar(1.0, -omega * d);
    let i = Complex64::i();
    let a = omega * (ep + em) / d;
    let b = (ep + em) / (d * d * d) - i * omega * (ep - em) / (d * d);
    (a, b)
}

/// One node of the surface rule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureNode {
    pub eta: f64,
    pub phi: f64,
    pub position: CartesianPoint,
    /// Boundary trace `C` at the node.
    pub trace: ComplexVector3,
    /// Weighted oriented area `e_τ h_η h_φ Δη Δφ`.
    pub area: Vec3,
    /// Trapezoid weight `Δη Δφ`.
    pub weight: f64,
    c_cross_area: ComplexVector3,
    c_dot_area: Complex64,
}

/// The discretized boundary surface of a ring mode.
#[derive(Debug, Clone)]
pub struct RingQuadrature {
    spec: RingModeSpec,
    nodes: Vec<QuadratureNode>,
    spacing: f64,
}

impl RingQuadrature {
    /// Builds the `n_eta × n_phi` node set, `η`-major.
    pub fn new(spec: &RingModeSpec) -> Result<Self> {
        spec.validate()?;
        let etas: Vec<f64> = periodic_nodes(spec.n_eta, 0.0)
            .into_iter()
            .map(wrap_eta)
            .collect();
        let phis = periodic_nodes(spec.n_phi, 0.0);
        let d_eta = 2.0 * PI / spec.n_eta as f64;
        let d_phi = 2.0 * PI / spec.n_phi as f64;
        let weight = d_eta * d_phi;
        let mut nodes = Vec::with_capacity(spec.n_eta * spec.n_phi);
        let mut spacing: f64 = 0.0;
        for &eta in &etas {
            for &phi in &phis {
                let q = ModifiedToroidalPoint::new(spec.tau0, eta, phi);
                let frame = frame_at(q, spec.rho0)?;
                spacing = spacing.max(frame.h_eta * d_eta).max(frame.h_phi * d_phi);
                let area = frame.e_tau * (frame.h_eta * frame.h_phi * weight);
                let trace = boundary_trace(spec, eta, phi)?;
                nodes.push(QuadratureNode {
                    eta,
                    phi,
                    position: modified_to_cartesian(q, spec.rho0)?,
                    trace,
                    area,
                    weight,
                    c_cross_area: trace.cross_real(area),
                    c_dot_area: trace.dot_real(area),
                });
            }
        }
        Ok(Self {
            spec: *spec,
            nodes,
            spacing,
        })
    }

    pub fn spec(&self) -> &RingModeSpec {
        &self.spec
    }

    pub fn nodes(&self) -> &[QuadratureNode] {
        &self.nodes
    }

    /// Largest distance between neighbouring nodes.
    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    /// Minimum distance from `x` to any node.
    pub fn min_distance(&self, x: CartesianPoint) -> f64 {
        self.nodes
            .iter()
            .map(|n| (n.position - x).norm())
            .fold(f64::INFINITY, f64::min)
    }

    fn check_standoff(&self, x: CartesianPoint) -> Result<()> {
        let distance = self.min_distance(x);
        let required = MIN_STANDOFF_SPACINGS * self.spacing;
        if !(distance >= required) {
            return Err(Error::TooCloseToSurface {
                x: x.x,
                y: x.y,
                z: x.z,
                distance,
                required,
            });
        }
        Ok(())
    }

    fn prefactor(&self) -> f64 {
        -self.spec.tau0.powf(-self.spec.scaling_exponent) / (8.0 * PI)
    }

    /// Field at a Cartesian target.
    pub fn field_at(&self, x: CartesianPoint) -> Result<ComplexVector3> {
        self.check_standoff(x)?;
        let omega = self.spec.omega;
        let mut sum = ComplexVector3::ZERO;
        for n in &self.nodes {
            let xt = n.position - x;
            let (a, b) = kernel_weights(omega, xt.norm());
            // x̃ × W = −W × x̃
            let term = n.c_cross_area * a + complex_times_real(n.c_dot_area * b, xt)
                - n.c_cross_area.cross_real(xt) * b;
            sum += term;
        }
        Ok(sum * self.prefactor())
    }

    /// Defect potential `Φ` and its gradient at a Cartesian target.
    pub fn defect_at(&self, x: CartesianPoint) -> Result<DefectSample> {
        self.check_standoff(x)?;
        let omega = self.spec.omega;
        let mut phi = Complex64::new(0.0, 0.0);
        let mut grad = ComplexVector3::ZERO;
        for n in &self.nodes {
            let xt = n.position - x;
            let d = xt.norm();
            let (a, b) = kernel_weights(omega, d);
            let (s, c) = (omega * d).sin_cos();
            let (d2, d3, d4) = (d * d, d * d * d, d * d * d * d);
            let da = 2.0 * omega * (-omega * s / d - c / d2);
            let db = -6.0 * c / d4 - 6.0 * omega * s / d3 + 2.0 * omega * omega * c / d2;
            let xw = n.c_cross_area.dot_real(xt);
            phi += b * xw - a * n.c_dot_area;
            // ∇ₓ d = −x̃/d and ∇ₓ x̃ = −I
            grad += complex_times_real(-(db / d) * xw + (da / d) * n.c_dot_area, xt)
                - n.c_cross_area * b;
        }
        let f = self.prefactor();
        Ok(DefectSample {
            potential: phi * f,
            gradient: grad * f,
        })
    }
}

/// `Φ` and `∇Φ` at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DefectSample {
    pub potential: Complex64,
    pub gradient: ComplexVector3,
}

/// Evaluates the defect potential at Cartesian targets.
pub fn defect_potential(
    spec: &RingModeSpec,
    targets: &[CartesianPoint],
) -> Result<Vec<DefectSample>> {
    let quad = RingQuadrature::new(spec)?;
    targets.par_iter().map(|&x| quad.defect_at(x)).collect()
}

/// A ring mode as a [`HarmonicMode`].
#[derive(Debug, Clone)]
pub struct RingMode {
    quad: RingQuadrature,
    projected: bool,
}

impl RingMode {
    pub fn new(spec: &RingModeSpec) -> Result<Self> {
        Ok(Self {
            quad: RingQuadrature::new(spec)?,
            projected: false,
        })
    }

    /// The same mode with `∇Φ/ω` added, which removes the Beltrami defect.
    pub fn beltrami_projected(spec: &RingModeSpec) -> Result<Self> {
        Ok(Self {
            quad: RingQuadrature::new(spec)?,
            projected: true,
        })
    }

    pub fn quadrature(&self) -> &RingQuadrature {
        &self.quad
    }
}

impl HarmonicMode for RingMode {
    fn omega(&self) -> f64 {
        self.quad.spec.omega
    }

    fn eval(&self, p: CartesianPoint) -> Result<ComplexVector3> {
        let f = self.quad.field_at(p)?;
        if !self.projected {
            return Ok(f);
        }
        let defect = self.quad.defect_at(p)?;
        Ok(f + defect.gradient * (1.0 / self.quad.spec.omega))
    }
}

/// Assembles the field at targets given in modified toroidal coordinates.
///
/// Targets are evaluated in parallel; each one sums the nodes in a fixed
/// order, so results do not depend on the thread count.
pub fn assemble_ring_mode(
    spec: &RingModeSpec,
    targets: &[ModifiedToroidalPoint],
) -> Result<Vec<ComplexVector3>> {
    let quad = RingQuadrature::new(spec)?;
    let points = targets
        .iter()
        .map(|t| modified_to_cartesian(*t, spec.rho0))
        .collect::<Result<Vec<_>>>()?;
    points.par_iter().map(|&x| quad.field_at(x)).collect()
}

/// Raw field at one target for a sequence of `τ₀`, with log–log fits.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalingStudy {
    pub tau0: Vec<f64>,
    pub fields: Vec<ComplexVector3>,
    /// Fitted exponent of `|F_x|, |F_y|, |F_z|`, or `None` when the
    /// component is negligible throughout.
    pub component_exponents: [Option<f64>; 3],
    /// Fitted exponent of `‖F‖`.
    pub norm_exponent: f64,
    /// Exponents of `‖F‖` between consecutive `τ₀`.
    pub local_exponents: Vec<f64>,
}

impl ScalingStudy {
    /// Fields multiplied by `τ₀^(−p)`.
    pub fn rescaled(&self, p: f64) -> Vec<ComplexVector3> {
        self.tau0
            .iter()
            .zip(&self.fields)
            .map(|(t, f)| *f * t.powf(-p))
            .collect()
    }
}

/// Least-squares slope of `y` against `x`.
pub fn fit_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

/// Evaluates the raw (`p = 0`) field at `target` for each `τ₀` and fits
/// `|F| ∝ τ₀^p`.
pub fn tau0_scaling_study(
    spec: &RingModeSpec,
    target: ModifiedToroidalPoint,
    tau0_sequence: &[f64],
) -> Result<ScalingStudy> {
    if tau0_sequence.len() < 4 {
        return Err(invalid("a tau0 scaling study needs at least four values"));
    }
    if tau0_sequence.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(invalid("tau0 sequence must be strictly decreasing"));
    }
    let x = modified_to_cartesian(target, spec.rho0)?;
    let mut fields = Vec::with_capacity(tau0_sequence.len());
    for &t in tau0_sequence {
        let s = spec.with_tau0(t).with_scaling_exponent(0.0);
        fields.push(RingQuadrature::new(&s)?.field_at(x)?);
    }
    let logt: Vec<f64> = tau0_sequence.iter().map(|t| t.ln()).collect();
    let peak = fields.iter().map(|f| f.norm()).fold(0.0, f64::max);
    if !(peak > 0.0) {
        return Err(Error::Domain("field vanishes at the scaling target".into()));
    }
    let mut component_exponents = [None; 3];
    for (c, slot) in component_exponents.iter_mut().enumerate() {
        let mags: Vec<f64> = fields.iter().map(|f| f.components()[c].norm()).collect();
        if mags.iter().all(|m| *m > 1e-9 * peak) {
            let logm: Vec<f64> = mags.iter().map(|m| m.ln()).collect();
            *slot = Some(fit_slope(&logt, &logm));
        }
    }
    let logn: Vec<f64> = fields.iter().map(|f| f.norm().ln()).collect();
    let local_exponents = logt
        .windows(2)
        .zip(logn.windows(2))
        .map(|(t, n)| (n[1] - n[0]) / (t[1] - t[0]))
        .collect();
    Ok(ScalingStudy {
        tau0: tau0_sequence.to_vec(),
        fields,
        component_exponents,
        norm_exponent: fit_slope(&logt, &logn),
        local_exponents,
    })
}
