//! Bessel functions of integer order, first (`J`) and second (`Y`) kind.
//!
//! `J_n` comes from the power series for `x ≤ 1` and from Miller's backward
//! recurrence, normalized by `J₀ + 2ΣJ₂ₖ = 1`, above that. `Y₀` and `Y₁` use
//! the Neumann series in the `J₂ₖ` up to `x = 25` and Hankel's asymptotic
//! expansion beyond; higher `Y_n` follow by forward recurrence, which is
//! stable for the second kind.

use std::f64::consts::{FRAC_2_PI, PI};

use crate::error::{domain, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const SERIES_LIMIT: f64 = 1.0;
const ASYMPTOTIC_LIMIT: f64 = 25.0;
const RESCALE: f64 = 1e250;

/// Radial factor of a cylindrical mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BesselKind {
    /// First kind, `J_l`, finite on the axis.
    Regular,
    /// Second kind, `Y_l`, singular on the axis.
    Singular,
}

impl BesselKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            BesselKind::Regular => "regular",
            BesselKind::Singular => "singular",
        }
    }
}

fn check_argument(kind: BesselKind, x: f64) -> Result<()> {
    if x.is_nan() || x < 0.0 {
        return Err(domain(format!(
            "Bessel argument x = {x} must be nonnegative"
        )));
    }
    if kind == BesselKind::Singular && x == 0.0 {
        return Err(domain("Y_l is singular at x = 0"));
    }
    Ok(())
}

/// `Z_l(x)` for integer `l` of either sign (`Z_{-l} = (-1)^l Z_l`).
pub fn bessel(kind: BesselKind, l: i32, x: f64) -> Result<f64> {
    check_argument(kind, x)?;
    let n = l.unsigned_abs() as usize;
    let v = sequence(kind, n, x)[n];
    Ok(reflect(l, v))
}

/// `Z_l'(x) = (Z_{l-1}(x) − Z_{l+1}(x)) / 2`.
pub fn bessel_deriv(kind: BesselKind, l: i32, x: f64) -> Result<f64> {
    Ok(bessel_with_deriv(kind, l, x)?.1)
}

/// `(Z_l(x), Z_l'(x))` from a single recurrence sweep.
pub fn bessel_with_deriv(kind: BesselKind, l: i32, x: f64) -> Result<(f64, f64)> {
    check_argument(kind, x)?;
    let n = l.unsigned_abs() as usize;
    let seq = sequence(kind, n + 1, x);
    let value = seq[n];
    let next = seq[n + 1];
    let prev = if n == 0 { -seq[1] } else { seq[n - 1] };
    Ok((reflect(l, value), reflect(l, 0.5 * (prev - next))))
}

/// `[Z_lo(x), …, Z_hi(x)]` for a contiguous range of integer orders.
pub fn bessel_orders(kind: BesselKind, lo: i32, hi: i32, x: f64) -> Result<Vec<f64>> {
    check_argument(kind, x)?;
    assert!(lo <= hi, "empty order range");
    let top = lo.unsigned_abs().max(hi.unsigned_abs()) as usize;
    let seq = sequence(kind, top, x);
    Ok((lo..=hi)
        .map(|l| reflect(l, seq[l.unsigned_abs() as usize]))
        .collect())
}

fn reflect(l: i32, v: f64) -> f64 {
    if l < 0 && l % 2 != 0 {
        -v
    } else {
        v
    }
}

/// `Z_0(x) ..= Z_nmax(x)`; the argument has been checked.
fn sequence(kind: BesselKind, nmax: usize, x: f64) -> Vec<f64> {
    match kind {
        BesselKind::Regular => {
            if x == 0.0 {
                let mut v = vec![0.0; nmax + 1];
                v[0] = 1.0;
                v
            } else {
                let mut v = j_sequence(nmax, x);
                v.truncate(nmax + 1);
                v
            }
        }
        BesselKind::Singular => {
            let (y0, y1) = y0_y1(x);
            let mut v = Vec::with_capacity(nmax + 1);
            v.push(y0);
            if nmax >= 1 {
                v.push(y1);
            }
            for k in 1..nmax {
                let next = (2.0 * k as f64 / x) * v[k] - v[k - 1];
                v.push(next);
            }
            v
        }
    }
}

/// `J_0 ..= J_m` for some `m ≥ nmax`; `x > 0`.
fn j_sequence(nmax: usize, x: f64) -> Vec<f64> {
    if x <= SERIES_LIMIT {
        // enough orders for the Neumann series of Y as well
        let m = nmax.max(24);
        (0..=m).map(|n| j_series(n, x)).collect()
    } else {
        j_miller(nmax, x)
    }
}

fn j_series(n: usize, x: f64) -> f64 {
    let half = 0.5 * x;
    let mut lead = 1.0;
    for i in 1..=n {
        lead *= half / i as f64;
    }
    if lead == 0.0 {
        return 0.0;
    }
    let q = -half * half;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..60 {
        term *= q / (k as f64 * (k + n) as f64);
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    lead * sum
}

fn j_miller(nmax: usize, x: f64) -> Vec<f64> {
    let top = (nmax as f64).max(x);
    let mut start = (top + 20.0 + 4.0 * top.sqrt()).ceil() as usize;
    start += start % 2;
    let mut b = vec![0.0; start + 2];
    b[start] = 1.0;
    for k in (1..=start).rev() {
        let prev = (2.0 * k as f64 / x) * b[k] - b[k + 1];
        b[k - 1] = prev;
        if prev.abs() > RESCALE {
            for v in b[k - 1..].iter_mut() {
                *v /= RESCALE;
            }
        }
    }
    let norm: f64 = b[0] + 2.0 * b.iter().skip(2).step_by(2).sum::<f64>();
    b.truncate(start + 1);
    for v in b.iter_mut() {
        *v /= norm;
    }
    b
}

fn y0_y1(x: f64) -> (f64, f64) {
    if x > ASYMPTOTIC_LIMIT {
        return (hankel_asymptotic(0, x).1, hankel_asymptotic(1, x).1);
    }
    let j = j_sequence(0, x);
    let log_term = (0.5 * x).ln() + EULER_GAMMA;
    let mut s0 = 0.0;
    let mut s1 = 0.0;
    let mut k = 1;
    while 2 * k + 1 < j.len() {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        s0 += sign * j[2 * k] / k as f64;
        s1 += sign * (j[2 * k - 1] - j[2 * k + 1]) / k as f64;
        k += 1;
    }
    let y0 = FRAC_2_PI * (log_term * j[0] - 2.0 * s0);
    let y1 = FRAC_2_PI * (-(j[0] / x - log_term * j[1]) + s1);
    (y0, y1)
}

/// `(J_ν(x), Y_ν(x))` for `ν ∈ {0, 1}` from Hankel's expansion; `x` large.
fn hankel_asymptotic(nu: u32, x: f64) -> (f64, f64) {
    let mu = 4.0 * (nu * nu) as f64;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term = 1.0_f64;
    let mut last = f64::INFINITY;
    for j in 1..200 {
        let odd = (2 * j - 1) as f64;
        term *= (mu - odd * odd) / (8.0 * j as f64 * x);
        if term.abs() >= last || term == 0.0 {
            break;
        }
        last = term.abs();
        // P takes the even orders with sign (−1)^{j/2}, Q the odd ones with (−1)^{(j−1)/2}
        match j % 4 {
            0 => p += term,
            1 => q += term,
            2 => p -= term,
            _ => q -= term,
        }
        if term.abs() < 1e-18 {
            break;
        }
    }
    let shift = (0.5 * nu as f64 + 0.25) * PI;
    let (sx, cx) = x.sin_cos();
    let (sa, ca) = shift.sin_cos();
    let cos_chi = cx * ca + sx * sa;
    let sin_chi = sx * ca - cx * sa;
    let amp = (FRAC_2_PI / x).sqrt();
    (
        amp * (p * cos_chi - q * sin_chi),
        amp * (p * sin_chi + q * cos_chi),
    )
}
