//! Real and complex 3-vectors, the harmonic-mode abstraction, and the
//! finite-difference curl/divergence used to verify eigenfields.
//!
//! The electromagnetic field is carried as a single complex vector
//! `F = E + iB`: the real part is the electric field and the imaginary part
//! the magnetic field. In vacuum `D = E` and `H = B`. A time-harmonic field is
//! `F(x, t) = F_ω(x) e^{-iωt}`, and the vacuum Maxwell equations for such a
//! field reduce to the Beltrami pair
//!
//! ```text
//! ∇ × F_ω = ω F_ω,    ∇ · F_ω = 0.
//! ```
//!
//! All products here are bilinear: `dot` does not conjugate.

use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::Result;

/// A real Cartesian 3-vector. Also used for positions.
#[derive(Debug, Clone, Copy, PartialEq, Default, serde::Serialize, serde::Deserialize)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

/// Position in Cartesian space.
pub type CartesianPoint = Vec3;

impl Vec3 {
    pub const ZERO: Vec3 = Vec3::new(0.0, 0.0, 0.0);
    pub const X: Vec3 = Vec3::new(1.0, 0.0, 0.0);
    pub const Y: Vec3 = Vec3::new(0.0, 1.0, 0.0);
    pub const Z: Vec3 = Vec3::new(0.0, 0.0, 1.0);

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn dot(self, other: Vec3) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn cross(self, other: Vec3) -> Vec3 {
        Vec3::new(
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        )
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn normalized(self) -> Vec3 {
        self * (1.0 / self.norm())
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    /// Rotation about the z axis by `angle` radians.
    pub fn rotate_z(self, angle: f64) -> Vec3 {
        let (s, c) = angle.sin_cos();
        Vec3::new(c * self.x - s * self.y, s * self.x + c * self.y, self.z)
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, s: f64) -> Vec3 {
        Vec3::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Mul<Vec3> for f64 {
    type Output = Vec3;
    fn mul(self, v: Vec3) -> Vec3 {
        v * self
    }
}

/// One sample of the complex field `F = E + iB`, in Cartesian components.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ComplexVector3 {
    pub cx: Complex64,
    pub cy: Complex64,
    pub cz: Complex64,
}

impl ComplexVector3 {
    pub const ZERO: ComplexVector3 = ComplexVector3 {
        cx: Complex64::new(0.0, 0.0),
        cy: Complex64::new(0.0, 0.0),
        cz: Complex64::new(0.0, 0.0),
    };

    pub const fn new(cx: Complex64, cy: Complex64, cz: Complex64) -> Self {
        Self { cx, cy, cz }
    }

    /// Builds `E + iB` from the electric and magnetic parts.
    pub fn from_parts(e: Vec3, b: Vec3) -> Self {
        Self::new(
            Complex64::new(e.x, b.x),
            Complex64::new(e.y, b.y),
            Complex64::new(e.z, b.z),
        )
    }

    pub fn from_real(v: Vec3) -> Self {
        Self::from_parts(v, Vec3::ZERO)
    }

    /// Electric part, `Re F`.
    pub fn re(&self) -> Vec3 {
        Vec3::new(self.cx.re, self.cy.re, self.cz.re)
    }

    /// Magnetic part, `Im F`.
    pub fn im(&self) -> Vec3 {
        Vec3::new(self.cx.im, self.cy.im, self.cz.im)
    }

    pub fn components(&self) -> [Complex64; 3] {
        [self.cx, self.cy, self.cz]
    }

    /// Bilinear dot product, `Σ aᵢbᵢ`, without conjugation.
    pub fn dot(&self, other: &ComplexVector3) -> Complex64 {
        self.cx * other.cx + self.cy * other.cy + self.cz * other.cz
    }

    /// Bilinear dot product with a real vector.
    pub fn dot_real(&self, v: Vec3) -> Complex64 {
        self.cx * v.x + self.cy * v.y + self.cz * v.z
    }

    /// Bilinear cross product.
    pub fn cross(&self, other: &ComplexVector3) -> ComplexVector3 {
        ComplexVector3::new(
            self.cy * other.cz - self.cz * other.cy,
            self.cz * other.cx - self.cx * other.cz,
            self.cx * other.cy - self.cy * other.cx,
        )
    }

    /// Cross product `self × v` with a real vector.
    pub fn cross_real(&self, v: Vec3) -> ComplexVector3 {
        ComplexVector3::new(
            self.cy * v.z - self.cz * v.y,
            self.cz * v.x - self.cx * v.z,
            self.cx * v.y - self.cy * v.x,
        )
    }

    /// Hermitian norm squared, `|E|² + |B|²`.
    pub fn norm_sqr(&self) -> f64 {
        self.cx.norm_sqr() + self.cy.norm_sqr() + self.cz.norm_sqr()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn scale(&self, s: Complex64) -> ComplexVector3 {
        ComplexVector3::new(self.cx * s, self.cy * s, self.cz * s)
    }

    pub fn is_finite(&self) -> bool {
        self.components().iter().all(|c| c.is_finite())
    }

    /// Rotation of both real and imaginary parts about the z axis.
    pub fn rotate_z(&self, angle: f64) -> ComplexVector3 {
        let (s, c) = angle.sin_cos();
        ComplexVector3::new(
            c * self.cx - s * self.cy,
            s * self.cx + c * self.cy,
            self.cz,
        )
    }

    /// The physical field at time `x0`: `F · e^{-iωx⁰}`.
    pub fn at_time(&self, omega: f64, x0: f64) -> ComplexVector3 {
        self.scale(Complex64::from_polar(1.0, -omega * x0))
    }
}

impl Add for ComplexVector3 {
    type Output = ComplexVector3;
    fn add(self, o: ComplexVector3) -> ComplexVector3 {
        ComplexVector3::new(self.cx + o.cx, self.cy + o.cy, self.cz + o.cz)
    }
}

impl AddAssign for ComplexVector3 {
    fn add_assign(&mut self, o: ComplexVector3) {
        self.cx += o.cx;
        self.cy += o.cy;
        self.cz += o.cz;
    }
}

impl Sub for ComplexVector3 {
    type Output = ComplexVector3;
    fn sub(self, o: ComplexVector3) -> ComplexVector3 {
        ComplexVector3::new(self.cx - o.cx, self.cy - o.cy, self.cz - o.cz)
    }
}

impl Neg for ComplexVector3 {
    type Output = ComplexVector3;
    fn neg(self) -> ComplexVector3 {
        ComplexVector3::new(-self.cx, -self.cy, -self.cz)
    }
}

impl Mul<f64> for ComplexVector3 {
    type Output = ComplexVector3;
    fn mul(self, s: f64) -> ComplexVector3 {
        ComplexVector3::new(self.cx * s, self.cy * s, self.cz * s)
    }
}

impl Mul<Complex64> for ComplexVector3 {
    type Output = ComplexVector3;
    fn mul(self, s: Complex64) -> ComplexVector3 {
        self.scale(s)
    }
}

/// Complex scalar times a real vector.
pub fn complex_times_real(s: Complex64, v: Vec3) -> ComplexVector3 {
    ComplexVector3::new(s * v.x, s * v.y, s * v.z)
}

/// A time-harmonic field: the spatial factor `F_ω` of `F_ω(x) e^{-iωx⁰}`.
pub trait HarmonicMode: Sync {
    /// Angular frequency (units 1/length, c = 1).
    fn omega(&self) -> f64;

    /// Spatial factor `F_ω` at a Cartesian point.
    fn eval(&self, p: CartesianPoint) -> Result<ComplexVector3>;

    /// Physical field at time `x0`.
    fn eval_at_time(&self, p: CartesianPoint, x0: f64) -> Result<ComplexVector3> {
        Ok(self.eval(p)?.at_time(self.omega(), x0))
    }
}

impl<T: HarmonicMode + ?Sized> HarmonicMode for &T {
    fn omega(&self) -> f64 {
        (**self).omega()
    }
    fn eval(&self, p: CartesianPoint) -> Result<ComplexVector3> {
        (**self).eval(p)
    }
}

/// A closure-backed harmonic mode; handy for tests and ad hoc fields.
pub struct FnMode<F> {
    omega: f64,
    f: F,
}

impl<F> FnMode<F>
where
    F: Fn(CartesianPoint) -> ComplexVector3 + Sync,
{
    pub fn new(omega: f64, f: F) -> Self {
        Self { omega, f }
    }
}

impl<F> HarmonicMode for FnMode<F>
where
    F: Fn(CartesianPoint) -> ComplexVector3 + Sync,
{
    fn omega(&self) -> f64 {
        self.omega
    }
    fn eval(&self, p: CartesianPoint) -> Result<ComplexVector3> {
        Ok((self.f)(p))
    }
}

/// Curl and divergence from second-order central differences with step `h`.
pub fn fd_curl_div<M: HarmonicMode + ?Sized>(
    mode: &M,
    p: CartesianPoint,
    h: f64,
) -> Result<(ComplexVector3, Complex64)> {
    let axes = [Vec3::X, Vec3::Y, Vec3::Z];
    // d[j] = ∂F/∂x_j
    let mut d = [ComplexVector3::ZERO; 3];
    for (j, axis) in axes.iter().enumerate() {
        let plus = mode.eval(p + *axis * h)?;
        let minus = mode.eval(p - *axis * h)?;
        d[j] = (plus - minus) * (0.5 / h);
    }
    let curl = ComplexVector3::new(d[1].cz - d[2].cy, d[2].cx - d[0].cz, d[0].cy - d[1].cx);
    let div = d[0].cx + d[1].cy + d[2].cz;
    Ok((curl, div))
}

/// Relative Beltrami residuals `‖∇×F − ωF‖/‖ωF‖` and `|∇·F|/‖ωF‖` at `p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeltramiResidual {
    pub curl: f64,
    pub div: f64,
    /// `‖F‖` at the point, for reference.
    pub field_norm: f64,
}

pub fn beltrami_residual<M: HarmonicMode + ?Sized>(
    mode: &M,
    p: CartesianPoint,
    h: f64,
) -> Result<BeltramiResidual> {
    let f = mode.eval(p)?;
    let (curl, div) = fd_curl_div(mode, p, h)?;
    let scale = mode.omega() * f.norm();
    Ok(BeltramiResidual {
        curl: (curl - f * mode.omega()).norm() / scale,
        div: div.norm() / scale,
        field_norm: f.norm(),
    })
}
