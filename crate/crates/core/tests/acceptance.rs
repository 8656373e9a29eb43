//! Acceptance suite: one PASS/FAIL line per criterion, with detail lines
//! underneath. Exits nonzero if any criterion fails.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, TAU};
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ringmodes::coords::{
    cartesian_to_modified, frame_at, modified_to_cartesian, wrap_eta, ModifiedToroidalPoint,
};
use ringmodes::cyl_modes::{CylMode, CylModeSpec};
use ringmodes::field::{
    beltrami_residual, fd_curl_div, CartesianPoint, ComplexVector3, FnMode, HarmonicMode, Vec3,
};
use ringmodes::job::{run_job, JobConfig};
use ringmodes::observables::{
    energy_density, flux_through_torus, mass_and_spin, poynting, ShellDomain,
};
use ringmodes::ring::{
    kernel_weights, kernel_weights_exponential, tau0_scaling_study, RingMode, RingModeSpec,
    RingQuadrature,
};
use ringmodes::specfun::{bessel, BesselKind};

use BesselKind::{Regular, Singular};

struct Outcome {
    pass: bool,
    summary: String,
    details: Vec<String>,
}

impl Outcome {
    fn new(pass: bool, summary: impl Into<String>) -> Self {
        Self {
            pass,
            summary: summary.into(),
            details: Vec::new(),
        }
    }

    fn with(mut self, details: Vec<String>) -> Self {
        self.details = details;
        self
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

// ---------------------------------------------------------------- 1

fn coordinates() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let rho0 = 1.0;
    let (mut cart, mut tau, mut eta, mut eta_arc, mut phi) =
        (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for _ in 0..1000 {
        let q = ModifiedToroidalPoint::new(
            rng.gen_range(0.0..1.0),
            rng.gen_range(-PI..PI),
            rng.gen_range(0.0..TAU),
        );
        let x = modified_to_cartesian(q, rho0).unwrap();
        let back = cartesian_to_modified(x, rho0).unwrap();
        let x2 = modified_to_cartesian(back, rho0).unwrap();
        cart = cart.max(
            (x - x2)
                .to_array()
                .iter()
                .map(|d| d.abs())
                .fold(0.0, f64::max)
                / rho0,
        );
        tau = tau.max((back.tau - q.tau).abs());
        let de = wrap_eta(back.eta - q.eta).abs();
        eta = eta.max(de);
        eta_arc = eta_arc.max(q.tau * de);
        phi = phi.max((back.phi - q.phi).abs());
    }

    // scale factors against a central-difference Jacobian
    let mut jac_err: f64 = 0.0;
    let h = 1e-6;
    for _ in 0..200 {
        let p = ModifiedToroidalPoint::new(
            rng.gen_range(0.01..0.99),
            rng.gen_range(-PI..PI),
            rng.gen_range(0.0..TAU),
        );
        let f = frame_at(p, rho0).unwrap();
        let map = |q: ModifiedToroidalPoint| modified_to_cartesian(q, rho0).unwrap();
        let cols = [
            (map(ModifiedToroidalPoint::new(p.tau + h, p.eta, p.phi))
                - map(ModifiedToroidalPoint::new(p.tau - h, p.eta, p.phi)))
                * (0.5 / h),
            (map(ModifiedToroidalPoint::new(p.tau, p.eta + h, p.phi))
                - map(ModifiedToroidalPoint::new(p.tau, p.eta - h, p.phi)))
                * (0.5 / h),
            (map(ModifiedToroidalPoint::new(p.tau, p.eta, p.phi + h))
                - map(ModifiedToroidalPoint::new(p.tau, p.eta, p.phi - h)))
                * (0.5 / h),
        ];
        for (c, s) in cols.iter().zip([f.h_tau, f.h_eta, f.h_phi]) {
            jac_err = jac_err.max(rel(c.norm(), s));
        }
    }

    // near the ring: h_τ → ρ₀, h_η → ρ₀τ, h_φ → ρ₀
    let t = 1e-4;
    let mut asym: f64 = 0.0;
    for eta in [-2.5, -0.3, 0.0, 1.2, PI] {
        let f = frame_at(ModifiedToroidalPoint::new(t, eta, 0.4), rho0).unwrap();
        asym = asym
            .max(rel(f.h_tau, rho0))
            .max(rel(f.h_eta, rho0 * t))
            .max(rel(f.h_phi, rho0));
    }

    let round_trip = cart < 1e-12 && tau < 1e-12 && phi < 1e-12 && eta < 1e-12;
    let pass = round_trip && jac_err < 1e-6 && asym < 2e-4;
    Outcome::new(
        pass,
        format!("round trip {cart:.1e} (Cartesian/rho0), scale factors vs FD {jac_err:.1e}, near-ring asymptotics {asym:.1e}"),
    )
    .with(vec![
        format!("1000 random points, tau uniform in (0,1): max |dtau| {tau:.1e}, |dphi| {phi:.1e}, tau*|deta| {eta_arc:.1e}, raw |deta| {eta:.1e}"),
        "eta is ill-conditioned like 1/tau toward the ring; tau*|deta| is the arc-length error".into(),
    ])
}

// ---------------------------------------------------------------- 2

fn digamma_int(n: usize) -> f64 {
    // ψ(n) for integer n ≥ 1
    const EULER: f64 = 0.577_215_664_901_532_9;
    -EULER + (1..n).map(|k| 1.0 / k as f64).sum::<f64>()
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

fn j_series(n: usize, x: f64) -> f64 {
    let h = x / 2.0;
    let mut term = h.powi(n as i32) / factorial(n);
    let mut sum = term;
    for k in 1..200 {
        term *= -h * h / (k as f64 * (n + k) as f64);
        sum += term;
        if term.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    sum
}

fn y_series(n: usize, x: f64) -> f64 {
    let h = x / 2.0;
    let mut finite = 0.0;
    for k in 0..n {
        finite += factorial(n - k - 1) / factorial(k) * h.powi(2 * k as i32 - n as i32);
    }
    let mut tail = 0.0;
    let mut term = h.powi(n as i32) / factorial(n);
    for k in 0..200 {
        if k > 0 {
            term *= -h * h / (k as f64 * (n + k) as f64);
        }
        let t = (digamma_int(k + 1) + digamma_int(n + k + 1)) * term;
        tail += t;
        if k > 5 && t.abs() < 1e-18 * tail.abs() {
            break;
        }
    }
    -finite / PI + 2.0 / PI * h.ln() * j_series(n, x) - tail / PI
}

#[allow(clippy::excessive_precision)]
const MPMATH: &[(i32, f64, f64, f64)] = &[
    (
        10,
        10.0,
        0.207_486_106_633_358_86,
        -0.359_814_152_183_402_72,
    ),
    (
        20,
        30.0,
        0.004_831_019_993_404_064_5,
        -0.168_481_539_487_426_77,
    ),
    (
        0,
        50.0,
        0.055_812_327_669_251_815,
        -0.098_064_995_470_077_079,
    ),
    (
        15,
        45.2,
        -0.024_303_703_349_855_996,
        -0.119_741_833_664_782_72,
    ),
    (
        1,
        26.0,
        0.015_045_730_586_915_811,
        -0.155_796_553_229_602_65,
    ),
];

fn special_functions() -> Outcome {
    let mut wr: f64 = 0.0;
    let mut rec: f64 = 0.0;
    let mut x = 0.1;
    while x <= 50.0 {
        for l in 0..=10 {
            let (j0, j1) = (
                bessel(Regular, l, x).unwrap(),
                bessel(Regular, l + 1, x).unwrap(),
            );
            let (y0, y1) = (
                bessel(Singular, l, x).unwrap(),
                bessel(Singular, l + 1, x).unwrap(),
            );
            let w = j1 * y0 - j0 * y1;
            let scale = (j1 * y0).abs() + (j0 * y1).abs();
            wr = wr.max((w - 2.0 / (PI * x)).abs() / scale);
            if l >= 1 {
                for kind in [Regular, Singular] {
                    let (a, b, c) = (
                        bessel(kind, l - 1, x).unwrap(),
                        bessel(kind, l, x).unwrap(),
                        bessel(kind, l + 1, x).unwrap(),
                    );
                    let lhs = a + c;
                    let rhs = 2.0 * l as f64 / x * b;
                    rec = rec.max((lhs - rhs).abs() / (a.abs() + c.abs()).max(rhs.abs()));
                }
            }
        }
        x += 0.0997;
    }
    let mut spot: f64 = 0.0;
    let mut count = 0;
    for &x in &[0.1, 0.5, 1.0, 2.0, 3.7, 5.0] {
        for &n in &[0usize, 1, 2, 3, 5, 10] {
            spot = spot.max(rel(bessel(Regular, n as i32, x).unwrap(), j_series(n, x)));
            spot = spot.max(rel(bessel(Singular, n as i32, x).unwrap(), y_series(n, x)));
            count += 2;
        }
    }
    let mut table: f64 = 0.0;
    for &(n, x, j, y) in MPMATH {
        table = table
            .max(rel(bessel(Regular, n, x).unwrap(), j))
            .max(rel(bessel(Singular, n, x).unwrap(), y));
    }
    let pass = wr < 1e-10 && rec < 1e-10 && spot < 1e-12 && table < 1e-12;
    Outcome::new(
        pass,
        format!("Wronskian {wr:.1e}, recurrence {rec:.1e}, series oracle {spot:.1e}, tabulated {table:.1e}"),
    )
    .with(vec![format!(
        "l <= 10, x in [0.1, 50] on a 0.0997 step; {count} series spot values (x <= 5), {} high-precision table entries",
        MPMATH.len() * 2
    )])
}

// ---------------------------------------------------------------- 3

fn cylindrical_modes() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut curl, mut div) = (0.0f64, 0.0f64);
    let (mut ratio_lo, mut ratio_hi) = (f64::INFINITY, 0.0f64);
    for _ in 0..20 {
        let omega = rng.gen_range(0.5..5.0);
        let spec = CylModeSpec::new(
            omega,
            omega * rng.gen_range(-0.9..0.9),
            rng.gen_range(-4..=4),
            if rng.gen_bool(0.5) { Regular } else { Singular },
        )
        .with_amplitude(Complex64::new(
            rng.gen_range(0.5..2.0),
            rng.gen_range(-1.0..1.0),
        ));
        let mode = CylMode::new(spec).unwrap();
        let rho = rng.gen_range(0.3..3.0) / omega.sqrt();
        let p = Vec3::new(rho * 0.6, rho * 0.8, rng.gen_range(-1.0..1.0));
        let h = 1e-4 / omega;
        let r = beltrami_residual(&mode, p, h).unwrap();
        curl = curl.max(r.curl);
        div = div.max(r.div);
        // order of the truncation error, measured where it dominates rounding
        let err = |h: f64| {
            let (c, _) = fd_curl_div(&mode, p, h).unwrap();
            let f = mode.eval(p).unwrap() * omega;
            (c - f).norm()
        };
        let h0 = 1e-2 / omega;
        let ratio = err(h0) / err(h0 / 2.0);
        ratio_lo = ratio_lo.min(ratio);
        ratio_hi = ratio_hi.max(ratio);
    }
    let pass = curl < 1e-5 && div < 1e-5 && ratio_lo > 3.5 && ratio_hi < 4.5;
    Outcome::new(
        pass,
        format!("20 random specs: curl residual {curl:.1e}, div residual {div:.1e} at h = 1e-4/omega"),
    )
    .with(vec![format!(
        "error ratio on halving h from 1e-2/omega: [{ratio_lo:.3}, {ratio_hi:.3}] (4 for second order)"
    )])
}

// ---------------------------------------------------------------- 4

fn kernel_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst: f64 = 0.0;
    for _ in 0..10_000 {
        let omega = rng.gen_range(0.01..20.0);
        let d = rng.gen_range(0.01..20.0);
        let (a, b) = kernel_weights(omega, d);
        let (ae, be) = kernel_weights_exponential(omega, d);
        let (s, c) = (omega * d).sin_cos();
        // scale of the terms being combined
        let a_scale = (2.0 * omega / d).abs() * c.abs().max(f64::EPSILON);
        let b_scale = (2.0 * c / (d * d * d)).abs() + (2.0 * omega * s / (d * d)).abs();
        worst = worst
            .max((ae - a).norm() / a_scale)
            .max((be - b).norm() / b_scale);
    }
    Outcome::new(
        worst < 1e-15,
        format!("10^4 random (omega, d): max relative difference {worst:.1e}"),
    )
}

// ---------------------------------------------------------------- 5

fn ring_modes() -> Vec<(i32, i32, BesselKind)> {
    let mut v = Vec::new();
    for kind in [Regular, Singular] {
        for m in [1, -1, 2, -2] {
            for l in [0, 1] {
                v.push((m, l, kind));
            }
        }
    }
    v
}

const OMEGA: f64 = 3.0;
const TAU0: f64 = 0.01;

fn ring_spec(m: i32, l: i32, kind: BesselKind, n_eta: usize, n_phi: usize) -> RingModeSpec {
    RingModeSpec::new(OMEGA, m, l, 1.0, kind)
        .with_tau0(TAU0)
        .with_nodes(n_eta, n_phi)
}

fn residual_targets() -> Vec<CartesianPoint> {
    let mut v = Vec::new();
    for tau in [0.3, 0.5, 0.7] {
        for eta in [-2.0, 0.4, 2.9] {
            v.push(modified_to_cartesian(ModifiedToroidalPoint::new(tau, eta, 0.7), 1.0).unwrap());
        }
    }
    v
}

struct BeltramiReport {
    worst: Vec<f64>,
    defect_mismatch: f64,
}

fn beltrami_report(m: i32, l: i32, kind: BesselKind) -> BeltramiReport {
    let h = 1e-4 / OMEGA;
    let mut worst = Vec::new();
    let mut defect_mismatch: f64 = 0.0;
    for (ne, np) in [(16, 128), (32, 256), (64, 512)] {
        let spec = ring_spec(m, l, kind, ne, np);
        let mode = RingMode::new(&spec).unwrap();
        let mut w: f64 = 0.0;
        for x in residual_targets() {
            let r = beltrami_residual(&mode, x, h).unwrap();
            w = w.max(r.curl).max(r.div);
            if ne == 32 {
                let f = mode.eval(x).unwrap();
                let (curl, _) = fd_curl_div(&mode, x, h).unwrap();
                let defect = mode.quadrature().defect_at(x).unwrap();
                defect_mismatch = defect_mismatch
                    .max((curl - f * OMEGA - defect.gradient).norm() / (OMEGA * f.norm()));
            }
        }
        worst.push(w);
    }
    BeltramiReport {
        worst,
        defect_mismatch,
    }
}

fn assembled_beltrami(reports: &[((i32, i32, BesselKind), BeltramiReport)]) -> Outcome {
    let fd_floor = 1e-8;
    let mut details = Vec::new();
    let mut passing = 0;
    let mut worst_all: f64 = 0.0;
    let mut defect_all: f64 = 0.0;
    for ((m, l, kind), r) in reports {
        let finest = *r.worst.last().unwrap();
        let refines = r
            .worst
            .windows(2)
            .all(|w| w[1] <= w[0] * 1.01 || w[1] < fd_floor);
        let decreasing = r
            .worst
            .windows(2)
            .all(|w| w[1] < 0.5 * w[0] || w[1] < fd_floor);
        let ok = finest < 1e-3 && refines;
        passing += ok as usize;
        worst_all = worst_all.max(finest);
        defect_all = defect_all.max(r.defect_mismatch);
        details.push(format!(
            "{} {kind:?} m={m:+} l={l}: residual {:.2e} / {:.2e} / {:.2e} at 16x128 / 32x256 / 64x512 nodes{}{}",
            if ok { "ok  " } else { "FAIL" },
            r.worst[0],
            r.worst[1],
            r.worst[2],
            if decreasing { "" } else { ", flat under refinement" },
            if finest < 1e-3 { "" } else { ", above 1e-3" },
        ));
    }
    details.push(format!(
        "curl F - omega F matches the defect gradient grad(Phi) to {defect_all:.1e} relative in every mode: \
         the residual is the analytic defect of the bent trace, not quadrature error"
    ));
    Outcome::new(
        passing == reports.len(),
        format!(
            "{passing}/{} modes below 1e-3 at omega={OMEGA}, tau0={TAU0}; worst {worst_all:.2e}",
            reports.len()
        ),
    )
    .with(details)
}

// ---------------------------------------------------------------- 6

fn standing_wave() -> Outcome {
    let shell = ShellDomain {
        tau_min: 0.3,
        tau_max: 0.7,
        rho0: 1.0,
        n_tau: 6,
        n_eta: 24,
        n_phi: 32,
    };
    let mut worst_ratio: f64 = 0.0;
    let mut worst_change: f64 = 0.0;
    let mut details = Vec::new();
    for (m, l, kind) in ring_modes() {
        let mode = RingMode::new(&ring_spec(m, l, kind, 16, 128)).unwrap();
        let energy = mass_and_spin(&mode, &shell).unwrap().mass;
        let coarse = flux_through_torus(&mode, 0.5, 1.0, 16, 32).unwrap();
        let fine = flux_through_torus(&mode, 0.5, 1.0, 32, 64).unwrap();
        let scale = OMEGA * energy;
        let ratio = fine.abs() / scale;
        let change = (fine - coarse).abs() / scale;
        worst_ratio = worst_ratio.max(ratio);
        worst_change = worst_change.max(change);
        details.push(format!(
            "{kind:?} m={m:+} l={l}: |flux|/(omega E) {ratio:.1e}, change on doubling {change:.1e}"
        ));
    }
    Outcome::new(
        worst_ratio < 1e-3 && worst_change < 1e-6,
        format!("|flux| through tau=0.5 <= {worst_ratio:.1e} x omega*E(shell 0.3..0.7); doubling change <= {worst_change:.1e} x omega*E"),
    )
    .with(details)
}

// ---------------------------------------------------------------- 7

fn equivariance(reports: &[((i32, i32, BesselKind), BeltramiReport)]) -> Outcome {
    let mut pass = true;
    let mut worst: f64 = 0.0;
    let mut details = Vec::new();
    for ((m, l, kind), r) in reports {
        let spec = ring_spec(*m, *l, *kind, 32, 256);
        let quad = RingQuadrature::new(&spec).unwrap();
        let budget = 10.0 * r.worst[1];
        let mut mode_worst: f64 = 0.0;
        for x in residual_targets() {
            let f = quad.field_at(x).unwrap();
            for delta in [FRAC_PI_4, FRAC_PI_2] {
                let g = quad.field_at(x.rotate_z(delta)).unwrap();
                let expected = f
                    .rotate_z(delta)
                    .scale(Complex64::from_polar(1.0, *m as f64 * delta));
                mode_worst = mode_worst.max((g - expected).norm() / f.norm());
            }
        }
        pass &= mode_worst <= budget;
        worst = worst.max(mode_worst);
        details.push(format!(
            "{kind:?} m={m:+} l={l}: {mode_worst:.1e} (budget {budget:.1e})"
        ));
    }
    Outcome::new(
        pass,
        format!("rotation by pi/4 and pi/2: max mismatch {worst:.1e} relative"),
    )
    .with(details)
}

// ---------------------------------------------------------------- 8

fn scaling_study() -> Outcome {
    let seq = [0.04, 0.02, 0.01, 0.005, 0.0025];
    let target = ModifiedToroidalPoint::new(0.5, 0.9, 0.4);
    let mut pass = true;
    let mut details = Vec::new();
    let mut exponents = Vec::new();
    for kind in [Regular, Singular] {
        for l in [0, 1] {
            let spec = RingModeSpec::new(OMEGA, 1, l, 1.0, kind).with_nodes(16, 128);
            let s = tau0_scaling_study(&spec, target, &seq).unwrap();
            let n = s.local_exponents.len();
            let (p1, p2) = (s.local_exponents[n - 2], s.local_exponents[n - 1]);
            let stable = (p1 - p2).abs() <= 0.1;
            let rescaled = s.rescaled(s.norm_exponent);
            let finest = &rescaled[rescaled.len() - 3..];
            let mut spread: f64 = 0.0;
            for a in finest {
                for b in finest {
                    spread = spread.max((*a - *b).norm() / b.norm());
                }
            }
            let ok = stable && spread < 0.05;
            pass &= ok;
            exponents.push(format!("{kind:?} l={l}: p={:.3}", s.norm_exponent));
            details.push(format!(
                "{} {kind:?} l={l}: fitted p {:.4}, last two local exponents {p1:.4}, {p2:.4}, rescaled spread over 3 finest {spread:.1e}, components {:?}",
                if ok { "ok  " } else { "FAIL" },
                s.norm_exponent,
                s.component_exponents.map(|c| c.map(|v| (v * 1e3).round() / 1e3)),
            ));
        }
    }
    Outcome::new(pass, format!("tau0 in {seq:?}: {}", exponents.join(", "))).with(details)
}

// ---------------------------------------------------------------- 9

fn observables() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut amgm: f64 = f64::NEG_INFINITY;
    for _ in 0..10_000 {
        let mut c = || {
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
                * 10f64.powf(rng.gen_range(-3.0..3.0))
        };
        let f = ComplexVector3::new(c(), c(), c());
        let e = energy_density(&f);
        amgm = amgm.max((poynting(&f).norm() - e) / e);
    }
    // on an actual ring field
    let spec = ring_spec(1, 1, Singular, 16, 128);
    let mode = RingMode::new(&spec).unwrap();
    for x in residual_targets() {
        let f = mode.eval(x).unwrap();
        let e = energy_density(&f);
        amgm = amgm.max((poynting(&f).norm() - e) / e);
    }

    let shell = ShellDomain {
        tau_min: 0.3,
        tau_max: 0.7,
        rho0: 1.0,
        n_tau: 4,
        n_eta: 16,
        n_phi: 16,
    };
    let doubled = RingMode::new(&spec.with_amplitude(Complex64::new(2.0, 0.0))).unwrap();
    let a = mass_and_spin(&mode, &shell).unwrap();
    let b = mass_and_spin(&doubled, &shell).unwrap();
    let exact = b.mass == 4.0 * a.mass && b.spin == 4.0 * a.spin;

    // constant field: shell mass against a Monte-Carlo volume
    let f = ComplexVector3::new(
        Complex64::new(1.0, 0.3),
        Complex64::new(-0.5, 0.0),
        Complex64::new(0.0, 2.0),
    );
    let flat = FnMode::new(1.0, move |_| f);
    let big = ShellDomain {
        n_tau: 16,
        n_eta: 64,
        n_phi: 32,
        ..shell
    };
    let mass = mass_and_spin(&flat, &big).unwrap().mass;
    let r = (1.0 - 0.49f64).sqrt() / 0.3;
    let zmax = 0.7 / (1.0 - 0.49f64).sqrt();
    let n = 400_000;
    let mut hits = 0;
    for _ in 0..n {
        let x = Vec3::new(
            rng.gen_range(-r..r),
            rng.gen_range(-r..r),
            rng.gen_range(-zmax..zmax),
        );
        if let Ok(q) = cartesian_to_modified(x, 1.0) {
            hits += (q.tau >= 0.3 && q.tau <= 0.7) as usize;
        }
    }
    let volume = hits as f64 / n as f64 * 4.0 * r * r * 2.0 * zmax;
    let mc = rel(mass, energy_density(&f) * volume);
    let pass = amgm <= 1e-14 && exact && mc < 0.01;
    Outcome::new(
        pass,
        format!(
            "AM-GM max (|P| - E)/E = {amgm:.1e}; doubling: mass x{}, spin x{}; Monte-Carlo volume {mc:.1e}",
            b.mass / a.mass,
            b.spin / a.spin
        ),
    )
}

// ---------------------------------------------------------------- 10

fn reproducibility() -> Outcome {
    let job = r#"{
        "name": "repro",
        "task": "mode-eval",
        "mode": {"omega": 3.0, "m": 2, "l": 1, "kind": "singular", "tau0": 0.01, "amplitude": [0.7, -0.2]},
        "quadrature": {"n_eta": 16, "n_phi": 128},
        "grid": {"system": "toroidal", "tau": {"start": 0.3, "stop": 0.7, "count": 5},
                 "eta": {"start": -3.14159, "stop": 3.14159, "count": 12},
                 "phi": {"start": 0.0, "stop": 6.283185307179586, "count": 8, "endpoint": false}}
    }"#;
    let cfg = JobConfig::from_json(job).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let mut files = Vec::new();
    for (i, threads) in [Some(1), Some(2), Some(8), None, Some(1)]
        .into_iter()
        .enumerate()
    {
        let out = run_job(&cfg, &dir.path().join(format!("run{i}")), threads).unwrap();
        files.push(std::fs::read(out.csv).unwrap());
    }
    let identical = files.windows(2).all(|w| w[0] == w[1]);
    Outcome::new(
        identical,
        format!(
            "5 runs (threads 1, 2, 8, all, 1): CSV {} bytes, identical = {identical}",
            files[0].len()
        ),
    )
}

fn main() {
    let start = Instant::now();
    let mut outcomes: Vec<(usize, &str, Outcome, f64)> = Vec::new();
    let mut run = |n: usize, name: &'static str, f: &mut dyn FnMut() -> Outcome| {
        let t = Instant::now();
        let o = f();
        let secs = t.elapsed().as_secs_f64();
        println!(
            "criterion {n:>2} {:<28} {} ({secs:.1} s)  {}",
            name,
            if o.pass { "PASS" } else { "FAIL" },
            o.summary
        );
        for d in &o.details {
            println!("    {d}");
        }
        outcomes.push((n, name, o, secs));
    };

    run(1, "coordinate fidelity", &mut coordinates);
    run(2, "special functions", &mut special_functions);
    run(3, "cylindrical eigenmodes", &mut cylindrical_modes);
    run(4, "kernel identity", &mut kernel_identity);
    let mut reports = Vec::new();
    run(5, "assembled ring is Beltrami", &mut || {
        reports = ring_modes()
            .into_iter()
            .map(|k| (k, beltrami_report(k.0, k.1, k.2)))
            .collect();
        assembled_beltrami(&reports)
    });
    run(6, "standing wave (zero flux)", &mut standing_wave);
    run(7, "rotation equivariance", &mut || equivariance(&reports));
    run(8, "tau0 scaling study", &mut scaling_study);
    run(9, "observables", &mut observables);
    run(10, "reproducibility", &mut reproducibility);

    let failed: Vec<usize> = outcomes.iter().filter(|o| !o.2.pass).map(|o| o.0).collect();
    println!(
        "acceptance: {}/{} criteria pass in {:.1} s{}",
        outcomes.len() - failed.len(),
        outcomes.len(),
        start.elapsed().as_secs_f64(),
        if failed.is_empty() {
            String::new()
        } else {
            format!("; failing: {failed:?}")
        }
    );
    if !failed.is_empty() {
        std::process::exit(1);
    }
}
