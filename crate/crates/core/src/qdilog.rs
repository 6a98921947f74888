//! The non-compact quantum dilogarithm φ_b, the Barnes double sine S₂, the
//! compact dilogarithm Ψ_q, and the phase constants they share.
//!
//! φ_b(z) is defined inside the strip |Im z| < Im c_b by the contour integral
//!
//! ```text
//! log φ_b(z) = (1/4) ∫_C e^{-2izt} / (sh(bt) sh(t/b)) dt/t,
//! ```
//!
//! where C runs along the real axis and passes the origin on a small
//! semicircle from above. Outside the strip the functional equations
//! φ(z - ib^{±1}/2) = (1 + e^{2πb^{±1}z}) φ(z + ib^{±1}/2) ladder the
//! argument back in. Poles sit at c_b + i(mb + nb⁻¹), zeros at the mirror
//! lattice, m, n ≥ 0.
//!
//! Evaluation is generic over the working precision ([`crate::extprec::Real`])
//! so the contour-pinch protocol can run with guard digits.

use num_complex::Complex64;
use thiserror::Error;

use crate::extprec::{Cx, Real};
use crate::quad::{integrate_segment, Gk15};

/// Maximum number of functional-equation shifts before giving up.
pub const MAX_SHIFTS: usize = 64;

#[derive(Debug, Error)]
pub enum QdError {
    #[error("argument {z} is within the pole guard of a dilogarithm pole at {pole}")]
    PoleHit { z: Complex64, pole: Complex64 },
    #[error("functional-equation ladder exceeded {max} shifts; achieved error ~{achieved:.2e}")]
    AccuracyLoss { max: usize, achieved: f64 },
    #[error("non-convergent: {0}")]
    NonConvergent(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type QdResult<T> = Result<T, QdError>;

/// Working precision selector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Precision {
    Double,
    Extended,
}

impl Default for Precision {
    fn default() -> Self {
        Precision::Double
    }
}

/// Parameter bundle shared by every evaluation: the modular parameter b,
/// the coupling τ, and the phase constants attached to them.
#[derive(Clone, Debug)]
pub struct QdContext {
    pub b: f64,
    pub tau: f64,
    pub rel_tol: f64,
    pub precision: Precision,
    /// q = e^{πib²}
    pub q: Complex64,
    /// q̃ = e^{πib⁻²}
    pub qtilde: Complex64,
    /// c_b = i(b + b⁻¹)/2
    pub c_b: Complex64,
    /// ζ = e^{πi(1-4c_b²)/12}
    pub zeta: Complex64,
    /// ζ_s = e^{πi(1-c_b²)/6}
    pub zeta_s: Complex64,
    /// ζ_inv = ζ⁻² e^{-πic_b²}
    pub zeta_inv: Complex64,
    /// t = e^{πb(2τ + c_b)}
    pub t: Complex64,
}

impl QdContext {
    pub fn new(b: f64, tau: f64) -> QdResult<Self> {
        if !(b > 0.0 && b < 1.0) {
            if b == 1.0 {
                return Err(QdError::InvalidParameter(
                    "b = 1 gives a confluent (double-pole) lattice; use b < 1".into(),
                ));
            }
            return Err(QdError::InvalidParameter(format!(
                "b must lie in (0, 1), got {b}"
            )));
        }
        if !tau.is_finite() {
            return Err(QdError::InvalidParameter("tau must be finite".into()));
        }
        let i = Complex64::i();
        let pi = std::f64::consts::PI;
        let im_cb = 0.5 * (b + 1.0 / b);
        let c_b = i * im_cb;
        let cb2 = -im_cb * im_cb; // c_b² is real
        let q = (i * pi * b * b).exp();
        let qtilde = (i * pi / (b * b)).exp();
        let zeta = (i * pi * (1.0 - 4.0 * cb2) / 12.0).exp();
        let zeta_s = (i * pi * (1.0 - cb2) / 6.0).exp();
        let zeta_inv = zeta.powi(-2) * (-i * pi * cb2).exp();
        let t = ((2.0 * tau * pi * b) + c_b * pi * b).exp();
        Ok(QdContext {
            b,
            tau,
            rel_tol: 1e-11,
            precision: Precision::Double,
            q,
            qtilde,
            c_b,
            zeta,
            zeta_s,
            zeta_inv,
            t,
        })
    }

    pub fn with_rel_tol(mut self, tol: f64) -> Self {
        self.rel_tol = tol;
        self
    }

    pub fn with_precision(mut self, p: Precision) -> Self {
        self.precision = p;
        self
    }

    /// Im c_b = (b + b⁻¹)/2, the lattice scale.
    pub fn im_cb(&self) -> f64 {
        0.5 * (self.b + 1.0 / self.b)
    }

    /// Distance below which an argument counts as sitting on a pole.
    pub fn pole_guard(&self) -> f64 {
        1e-8 * self.im_cb()
    }

    /// The Ruijsenaars coupling g = -i(c_b + 2τ).
    pub fn g(&self) -> Complex64 {
        -Complex64::i() * (self.c_b + 2.0 * self.tau)
    }

    /// τ₋ = c_b/2 - τ.
    pub fn tau_minus(&self) -> Complex64 {
        0.5 * self.c_b - self.tau
    }

    /// τ₊ = c_b/2 + τ, the companion shift of τ₋.
    pub fn tau_plus(&self) -> Complex64 {
        0.5 * self.c_b + self.tau
    }

    /// Warn when b is (nearly) a ratio of small integers, which puts b²
    /// rational and eventually degenerates the pole lattice.
    pub fn b_rational_warning(&self) -> Option<String> {
        for den in 1..=12u32 {
            let num = (self.b * den as f64).round();
            if num >= 1.0 && (self.b - num / den as f64).abs() < 1e-9 {
                return Some(format!(
                    "b = {}/{} makes b² rational; high lattice points may collide",
                    num as u32, den
                ));
            }
        }
        None
    }
}

/// Which lattice a query refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LatticeKind {
    Pole,
    Zero,
}

/// The pole or zero lattice of z ↦ φ(z - shift): points
/// `apex ± i(mb + nb⁻¹)` with apex = shift ± c_b.
#[derive(Clone, Copy, Debug)]
pub struct PoleZeroLattice {
    pub kind: LatticeKind,
    pub apex: Complex64,
    b: f64,
}

impl PoleZeroLattice {
    /// Lattice of φ(z - shift) itself; `shift = 0` gives the lattice of φ.
    pub fn of_phi(kind: LatticeKind, shift: Complex64, b: f64) -> Self {
        let im_cb = 0.5 * (b + 1.0 / b);
        let apex = match kind {
            LatticeKind::Pole => shift + Complex64::new(0.0, im_cb),
            LatticeKind::Zero => shift - Complex64::new(0.0, im_cb),
        };
        PoleZeroLattice { kind, apex, b }
    }

    /// The (m, n) lattice point.
    pub fn point(&self, m: u32, n: u32) -> Complex64 {
        let step = m as f64 * self.b + n as f64 / self.b;
        match self.kind {
            LatticeKind::Pole => self.apex + Complex64::new(0.0, step),
            LatticeKind::Zero => self.apex - Complex64::new(0.0, step),
        }
    }

    /// Nearest lattice point to z: returns (distance, m, n).
    pub fn nearest(&self, z: Complex64) -> (f64, u32, u32) {
        let dx = z.re - self.apex.re;
        let dy = match self.kind {
            LatticeKind::Pole => z.im - self.apex.im,
            LatticeKind::Zero => self.apex.im - z.im,
        };
        let mut best = (f64::INFINITY, 0u32, 0u32);
        if dy < 0.0 {
            let d = (dx * dx + dy * dy).sqrt();
            return (d, 0, 0);
        }
        let m_max = (dy / self.b).ceil() as i64 + 1;
        for m in 0..=m_max {
            let rem = dy - m as f64 * self.b;
            let n = (rem * self.b).round().max(0.0) as i64;
            for nn in [n - 1, n, n + 1] {
                if nn < 0 {
                    continue;
                }
                let off = dy - m as f64 * self.b - nn as f64 / self.b;
                let d = (dx * dx + off * off).sqrt();
                if d < best.0 {
                    best = (d, m as u32, nn as u32);
                }
            }
        }
        best
    }
}

// ---------------------------------------------------------------------------
// core evaluation, generic over precision
// ---------------------------------------------------------------------------

/// Scale-split complex number `mantissa * exp(log_scale)`: keeps long factor
/// products away from overflow without complex logarithms.
#[derive(Clone, Copy)]
struct Scaled<T: Real> {
    m: Cx<T>,
    log: T,
}

impl<T: Real> Scaled<T> {
    fn one() -> Self {
        Scaled {
            m: Cx::one(),
            log: T::zero(),
        }
    }
    fn mul(&mut self, f: Cx<T>) {
        self.m = self.m * f;
        self.renorm();
    }
    fn div(&mut self, f: Cx<T>) {
        self.m = self.m / f;
        self.renorm();
    }
    fn renorm(&mut self) {
        let a = self.m.abs().to_f64();
        if !(1e-60..=1e60).contains(&a) && a > 0.0 {
            let s = self.m.abs();
            self.log = self.log + s.ln();
            self.m = self.m.scale(T::one() / s);
        }
    }
    fn value(self) -> Cx<T> {
        self.m.scale(self.log.exp())
    }
}

fn ladder_target(b: f64) -> f64 {
    0.3 * 0.5 * (b + 1.0 / b)
}

/// Defining-integral evaluation of log φ at z₀ with |Im z₀| ≤ 0.8 Im c_b.
fn defining_integral<T: Real>(z0: Cx<T>, b: f64, tol: f64, rule: &Gk15<T>) -> Cx<T> {
    let r0 = 0.25 * b.min(1.0 / b);
    let im_z = z0.im.to_f64().abs();
    let rate = (b + 1.0 / b) - 2.0 * im_z;
    let t_cut = ((1.0 / tol).ln() + 6.0) / rate;
    let bt = T::from_f64(b);
    let ibt = T::from_f64(1.0 / b);
    let quarter = T::from_f64(0.25);
    let mut f = |t: Cx<T>| -> Cx<T> {
        let e = (-(Cx::new(T::zero(), T::one()) * z0 * t).scale(T::from_f64(2.0))).exp();
        let den = t.scale(bt).sinh() * t.scale(ibt).sinh() * t;
        (e / den).scale(quarter)
    };
    // breakpoints grow geometrically; oscillation is handled adaptively
    let mut val = Cx::zero();
    let re_z = z0.re.to_f64().abs();
    let h0 = (3.0 / (1.0 + re_z)).min(1.5);
    let seg_tol = tol * 0.3;
    for sign in [1.0f64, -1.0] {
        let mut lo = r0;
        while lo < t_cut {
            let hi = (lo.max(h0) * 2.0).min(t_cut).max(lo + h0);
            // keep left-to-right orientation on both half-axes
            let (a, bnd) = if sign > 0.0 {
                (Cx::from_f64(lo, 0.0), Cx::from_f64(hi, 0.0))
            } else {
                (Cx::from_f64(-hi, 0.0), Cx::from_f64(-lo, 0.0))
            };
            val += integrate_segment(rule, &mut f, a, bnd, seg_tol).value;
            lo = hi;
        }
    }
    // semicircle above the origin, θ from π to 0, t = r₀ e^{iθ}
    let mut g = |w: Cx<T>| -> Cx<T> {
        let (s, c) = w.re.sin_cos();
        let t = Cx::new(c, s).scale(T::from_f64(r0));
        f(t) * t * Cx::new(T::zero(), T::one())
    };
    val += integrate_segment(
        rule,
        &mut g,
        Cx::from_f64(std::f64::consts::PI, 0.0),
        Cx::zero(),
        seg_tol,
    )
    .value;
    val
}

fn log_zeta_inv<T: Real>(b: f64) -> Cx<T> {
    // log ζ_inv = -πi(1 + 2c_b²)/6 with c_b² = -((b+1/b)/2)²
    let im_cb = 0.5 * (b + 1.0 / b);
    let x = -(1.0 + 2.0 * (-im_cb * im_cb)) / 6.0 * std::f64::consts::PI;
    Cx::from_f64(0.0, x)
}

/// φ_b(z) at scalar type T. `rule` is the shared quadrature table.
pub(crate) fn phib_in<T: Real>(z: Cx<T>, b: f64, tol: f64, rule: &Gk15<T>) -> QdResult<Cx<T>> {
    let im_cb = 0.5 * (b + 1.0 / b);
    let zf = z.to_c64();
    let poles = PoleZeroLattice::of_phi(LatticeKind::Pole, Complex64::new(0.0, 0.0), b);
    if zf.re.abs() < 1e-8 * im_cb && zf.im > im_cb - 1e-8 * im_cb {
        let (d, m, n) = poles.nearest(zf);
        if d < 1e-8 * im_cb {
            return Err(QdError::PoleHit {
                z: zf,
                pole: poles.point(m, n),
            });
        }
    }

    // ladder into the strip, collecting functional-equation factors
    let target = ladder_target(b);
    let mut zc = z;
    let mut fac = Scaled::<T>::one();
    let mut shifts = 0usize;
    loop {
        let im = zc.im.to_f64();
        if im.abs() <= target {
            break;
        }
        // candidate steps toward the real axis
        let (s, new_im) = {
            let s1 = b;
            let s2 = 1.0 / b;
            let n1 = (im.abs() - s1).abs();
            let n2 = (im.abs() - s2).abs();
            if n2 <= n1 {
                (s2, im.abs() - s2)
            } else {
                (s1, im.abs() - s1)
            }
        };
        if new_im.abs() >= im.abs() - 1e-12 {
            // no further progress possible
            if im.abs() <= 0.8 * im_cb {
                break;
            }
            return Err(QdError::AccuracyLoss {
                max: MAX_SHIFTS,
                achieved: 1.0,
            });
        }
        if shifts >= MAX_SHIFTS {
            return Err(QdError::AccuracyLoss {
                max: MAX_SHIFTS,
                achieved: tol * 10.0_f64.powi(shifts as i32 - MAX_SHIFTS as i32),
            });
        }
        let two_pi_s = T::from_f64(2.0 * std::f64::consts::PI * s);
        if im > 0.0 {
            // φ(z) = φ(z - is) / (1 + e^{2πs(z - is/2)})
            let w = (zc - Cx::from_f64(0.0, 0.5 * s)).scale(two_pi_s);
            fac.div(Cx::one() + w.exp());
            zc = zc - Cx::from_f64(0.0, s);
        } else {
            // φ(z) = φ(z + is) · (1 + e^{2πs(z + is/2)})
            let w = (zc + Cx::from_f64(0.0, 0.5 * s)).scale(two_pi_s);
            fac.mul(Cx::one() + w.exp());
            zc = zc + Cx::from_f64(0.0, s);
        }
        shifts += 1;
    }

    // asymptotic regime or direct quadrature
    let re0 = zc.re.to_f64();
    let b_min = b.min(1.0 / b);
    let log_phi0 = if 2.0 * std::f64::consts::PI * b_min * re0.abs() > (1.0 / tol).ln() + 4.6 {
        if re0 < 0.0 {
            Cx::zero()
        } else {
            let pi_i = Cx::from_f64(0.0, std::f64::consts::PI);
            log_zeta_inv::<T>(b) + pi_i * zc * zc
        }
    } else {
        defining_integral(zc, b, tol, rule)
    };
    let mut out = fac;
    out.mul(log_phi0.exp());
    Ok(out.value())
}

/// Principal-branch logarithm of φ_b, continued through the functional
/// equations by summing factor logarithms (f64 only).
pub(crate) fn log_phib_f64(z: Complex64, b: f64, tol: f64, rule: &Gk15<f64>) -> QdResult<Complex64> {
    let im_cb = 0.5 * (b + 1.0 / b);
    let poles = PoleZeroLattice::of_phi(LatticeKind::Pole, Complex64::new(0.0, 0.0), b);
    let (d, m, n) = poles.nearest(z);
    if d < 1e-8 * im_cb {
        return Err(QdError::PoleHit {
            z,
            pole: poles.point(m, n),
        });
    }
    let target = ladder_target(b);
    let mut zc = z;
    let mut log_fac = Complex64::new(0.0, 0.0);
    let mut shifts = 0usize;
    loop {
        let im = zc.im;
        if im.abs() <= target {
            break;
        }
        let s = {
            let n1 = (im.abs() - b).abs();
            let n2 = (im.abs() - 1.0 / b).abs();
            if n2 <= n1 {
                1.0 / b
            } else {
                b
            }
        };
        let new_im = im.abs() - s;
        if new_im.abs() >= im.abs() - 1e-12 {
            if im.abs() <= 0.8 * im_cb {
                break;
            }
            return Err(QdError::AccuracyLoss {
                max: MAX_SHIFTS,
                achieved: 1.0,
            });
        }
        if shifts >= MAX_SHIFTS {
            return Err(QdError::AccuracyLoss {
                max: MAX_SHIFTS,
                achieved: tol,
            });
        }
        let two_pi_s = 2.0 * std::f64::consts::PI * s;
        if im > 0.0 {
            let w = two_pi_s * (zc - Complex64::new(0.0, 0.5 * s));
            log_fac -= (Complex64::new(1.0, 0.0) + w.exp()).ln();
            zc -= Complex64::new(0.0, s);
        } else {
            let w = two_pi_s * (zc + Complex64::new(0.0, 0.5 * s));
            log_fac += (Complex64::new(1.0, 0.0) + w.exp()).ln();
            zc += Complex64::new(0.0, s);
        }
        shifts += 1;
    }
    let re0 = zc.re;
    let b_min = b.min(1.0 / b);
    let base = if 2.0 * std::f64::consts::PI * b_min * re0.abs() > (1.0 / tol).ln() + 4.6 {
        if re0 < 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            log_zeta_inv::<f64>(b).to_c64() + Complex64::i() * std::f64::consts::PI * zc * zc
        }
    } else {
        defining_integral(Cx::from_c64(zc), b, tol, rule).to_c64()
    };
    Ok(base + log_fac)
}

// ---------------------------------------------------------------------------
// public f64 entry points
// ---------------------------------------------------------------------------

thread_local! {
    static RULE_F64: Gk15<f64> = Gk15::get();
}

/// Evaluate φ_b(z).
pub fn phib(z: Complex64, ctx: &QdContext) -> QdResult<Complex64> {
    RULE_F64.with(|rule| phib_in(Cx::from_c64(z), ctx.b, ctx.rel_tol * 1e-2, rule).map(Cx::to_c64))
}

/// Overflow-safe log φ_b(z) with exp(log_phib) = phib to relative tolerance.
pub fn log_phib(z: Complex64, ctx: &QdContext) -> QdResult<Complex64> {
    RULE_F64.with(|rule| log_phib_f64(z, ctx.b, ctx.rel_tol * 1e-2, rule))
}

/// 1/φ_b(z): exactly zero when z lies on the pole lattice.
pub fn inv_phib(z: Complex64, ctx: &QdContext) -> QdResult<Complex64> {
    let poles = PoleZeroLattice::of_phi(LatticeKind::Pole, Complex64::new(0.0, 0.0), ctx.b);
    let (d, _, _) = poles.nearest(z);
    if d < ctx.pole_guard() {
        return Ok(Complex64::new(0.0, 0.0));
    }
    Ok(1.0 / phib(z, ctx)?)
}

/// Barnes double sine S₂(z | ω₁, ω₂) from its defining integral, valid in
/// the strip 0 < Re z < ω₁ + ω₂ (real positive periods). The integrand is
/// evaluated in double-double to absorb the small-t cancellation.
pub fn double_sine(z: Complex64, omega1: f64, omega2: f64, tol: f64) -> QdResult<Complex64> {
    use crate::extprec::Dd;
    if omega1 <= 0.0 || omega2 <= 0.0 {
        return Err(QdError::InvalidParameter(
            "double_sine needs positive periods".into(),
        ));
    }
    let wsum = omega1 + omega2;
    if !(z.re > 0.0 && z.re < wsum) {
        return Err(QdError::InvalidParameter(format!(
            "double_sine argument Re z = {} outside the strip (0, {wsum})",
            z.re
        )));
    }
    let a = 2.0 * z - wsum;
    let decay = wsum - a.re.abs();
    let t_cut = ((1.0 / tol).ln() + 8.0) / decay;
    let rule = Gk15::<Dd>::get();
    let ac: Cx<Dd> = Cx::from_c64(a);
    let w1 = Dd::from_f64(omega1);
    let w2 = Dd::from_f64(omega2);
    let mut f = |t: Cx<Dd>| -> Cx<Dd> {
        // t stays on the real axis
        let num = (ac * t).sinh();
        let den = t.scale(w1).sinh() * t.scale(w2).sinh();
        let counter = ac * t.inv().scale(w1 * w2);
        (num / den - counter) / t.scale(Dd::from_f64(2.0))
    };
    let mut val = Cx::zero();
    let brk = [0.0, 0.7, 3.0, 10.0, 30.0, t_cut];
    for w in brk.windows(2) {
        if w[1] <= w[0] {
            continue;
        }
        let hi = w[1].min(t_cut);
        val += integrate_segment(
            &rule,
            &mut f,
            Cx::from_f64(w[0], 0.0),
            Cx::from_f64(hi, 0.0),
            tol * 0.1,
        )
        .value;
        if hi >= t_cut {
            break;
        }
    }
    // analytic tail of the counterterm: ∫_T^∞ -a/(2ω₁ω₂ t²) dt = -a/(2ω₁ω₂ T)
    let tail = Cx::from_c64(-a / (2.0 * omega1 * omega2 * t_cut));
    val += tail;
    Ok(val.to_c64().exp())
}

/// Result of a truncated compact-dilogarithm product.
#[derive(Clone, Copy, Debug)]
pub struct PsiQ {
    pub value: Complex64,
    /// Certified bound on |log| of the dropped tail.
    pub tail_bound: f64,
    pub terms: usize,
}

/// Compact quantum dilogarithm Ψ_q(X) = ∏_{n≥0} (1 + X q^{2n+1})⁻¹, |q| < 1.
pub fn psi_q_compact(x: Complex64, q: Complex64, tol: f64) -> QdResult<PsiQ> {
    let qn = q.norm();
    if qn >= 1.0 {
        return Err(QdError::NonConvergent(format!(
            "|q| = {qn} >= 1: the compact dilogarithm product diverges"
        )));
    }
    let q2 = q * q;
    let mut qpow = q; // q^{2n+1}
    let mut prod = Complex64::new(1.0, 0.0);
    let mut terms = 0usize;
    loop {
        let factor = 1.0 + x * qpow;
        if factor.norm() < 1e-14 {
            return Err(QdError::PoleHit {
                z: x,
                pole: -1.0 / qpow,
            });
        }
        prod /= factor;
        terms += 1;
        qpow *= q2;
        let tail_head = x.norm() * qpow.norm();
        if tail_head < 0.5 {
            // Σ_{k≥n} |X| |q|^{2k+1} / (1 - |X||q|^{2k+1}) bounded geometrically
            let bound = tail_head / (1.0 - qn * qn) / (1.0 - tail_head);
            if bound < tol {
                return Ok(PsiQ {
                    value: prod,
                    tail_bound: bound,
                    terms,
                });
            }
        }
        if terms > 100_000 {
            return Err(QdError::NonConvergent(
                "compact dilogarithm did not reach tolerance".into(),
            ));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(b: f64) -> QdContext {
        QdContext::new(b, 0.0).unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn context_constants_consistent() {
        let ctx = ctx(0.8);
        assert!((ctx.q.norm() - 1.0).abs() < 1e-15);
        assert!((ctx.qtilde.norm() - 1.0).abs() < 1e-15);
        assert!(ctx.c_b.re.abs() < 1e-15 && ctx.c_b.im > 0.0);
        // ζ_inv = ζ⁻² e^{-πi c_b²} holds by construction; check the closed form
        let alt = (-Complex64::i() * std::f64::consts::PI * (1.0 + 2.0 * ctx.c_b.powi(2).re) / 6.0)
            .exp();
        assert!((ctx.zeta_inv - alt).norm() < 1e-14);
        // ζ_inv = ζ² ζ_s⁻², the compatibility constant between the two suites
        let alt2 = ctx.zeta.powi(2) * ctx.zeta_s.powi(-2);
        assert!((ctx.zeta_inv - alt2).norm() < 1e-14);
        assert!(QdContext::new(1.0, 0.0).is_err());
        assert!(QdContext::new(-0.5, 0.0).is_err());
        assert!(ctx.b_rational_warning().is_some()); // 0.8 = 4/5
        assert!(QdContext::new(0.8137215, 0.0).unwrap().b_rational_warning().is_none());
    }

    // Golden values computed by independent high-accuracy quadrature of the
    // defining integral (40+ digit working precision), frozen here.
    #[test]
    fn golden_phib_values() {
        let v = phib(c(0.0, 0.0), &ctx(0.7)).unwrap();
        let gold = c(0.945625790981874762077684055979, 0.325256611662090128055866880312);
        assert!((v - gold).norm() < 1e-11, "phib(0) off by {}", (v - gold).norm());
        // φ(0)² = ζ_inv pins the sign of the square root
        assert!((v * v - ctx(0.7).zeta_inv).norm() < 1e-11);

        let v = phib(c(0.3, 0.0), &ctx(0.8)).unwrap();
        let gold = c(0.717163251794944182717501660792, 0.696905208959512290346492072517);
        assert!((v - gold).norm() < 1e-11);
        assert!((v.norm() - 1.0).abs() < 1e-12, "|φ| = 1 on the real axis");

        let v = phib(c(0.25, 0.1), &ctx(0.9)).unwrap();
        let gold = c(0.671416374442507439081319651014, 0.470945896464837579641648161842);
        assert!((v - gold).norm() < 1e-11);
    }

    #[test]
    fn phib_pole_hit_at_cb() {
        let ctx = ctx(0.75);
        match phib(ctx.c_b, &ctx) {
            Err(QdError::PoleHit { .. }) => {}
            other => panic!("expected PoleHit, got {other:?}"),
        }
    }

    #[test]
    fn unitarity_and_inversion() {
        let ctx = ctx(0.77);
        let pts = [
            c(0.3, 0.2),
            c(-0.8, -0.4),
            c(1.4, 0.9),
            c(-0.1, 1.3),
            c(2.2, -1.1),
        ];
        for &z in &pts {
            let u = phib(z, &ctx).unwrap().conj() * phib(z.conj(), &ctx).unwrap();
            assert!((u - 1.0).norm() < 1e-10, "unitarity at {z}: {u}");
            let lhs = phib(z, &ctx).unwrap() * phib(-z, &ctx).unwrap();
            let rhs = ctx.zeta_inv * (Complex64::i() * std::f64::consts::PI * z * z).exp();
            assert!((lhs - rhs).norm() < 1e-10 * rhs.norm().max(1.0), "inversion at {z}");
        }
    }

    #[test]
    fn functional_equations_both_directions() {
        let ctx = ctx(0.83);
        let b = ctx.b;
        for &z in &[c(0.25, 0.15), c(-0.6, -0.3), c(0.9, 0.7)] {
            for s in [b, 1.0 / b] {
                let lhs = phib(z - c(0.0, 0.5 * s), &ctx).unwrap();
                let rhs = (1.0 + (2.0 * std::f64::consts::PI * s * z).exp())
                    * phib(z + c(0.0, 0.5 * s), &ctx).unwrap();
                assert!(
                    (lhs - rhs).norm() < 1e-10 * rhs.norm().max(1.0),
                    "functional equation s={s} at {z}"
                );
            }
        }
    }

    #[test]
    fn b_duality() {
        // φ with parameter b equals φ with parameter 1/b; our context stores
        // b < 1, so compare two contexts whose (b, 1/b) pairs coincide.
        let c1 = ctx(0.65);
        let z = c(0.4, 0.55);
        let v1 = phib(z, &c1).unwrap();
        // direct kernel call with the reciprocal parameter
        let rule = Gk15::<f64>::get();
        let v2 = phib_in(Cx::from_c64(z), 1.0 / 0.65, 1e-13, &rule)
            .unwrap()
            .to_c64();
        assert!((v1 - v2).norm() < 1e-10);
    }

    #[test]
    fn ladder_deep_arguments() {
        // |Im z| up to 10 Im c_b must still satisfy the inversion relation
        let ctx = ctx(0.71);
        let im_cb = ctx.im_cb();
        let z = c(0.4, 9.7 * im_cb) + c(0.3, 0.0); // generic, off both lattices
        let lhs = phib(z, &ctx).unwrap() * phib(-z, &ctx).unwrap();
        let rhs = ctx.zeta_inv * (Complex64::i() * std::f64::consts::PI * z * z).exp();
        assert!((lhs - rhs).norm() < 1e-8 * rhs.norm());
    }

    #[test]
    fn log_phib_cases() {
        let ctx = ctx(0.8);
        // real argument: log is purely imaginary
        let l = log_phib(c(0.45, 0.0), &ctx).unwrap();
        assert!(l.re.abs() < 1e-11, "Re log φ = {}", l.re);
        // far left: log → 0
        let l = log_phib(c(-5.0, 0.0), &ctx).unwrap();
        assert!(l.norm() < 1e-11);
        // far right: log → log ζ_inv + πi z² (up to 2πik)
        let l = log_phib(c(5.0, 0.0), &ctx).unwrap();
        let target = ctx.zeta_inv.ln() + Complex64::i() * std::f64::consts::PI * 25.0;
        let diff = (l - target) / (2.0 * std::f64::consts::PI);
        let k = diff.im.round();
        assert!((diff - Complex64::new(0.0, k)).norm() < 1e-10, "diff {diff}");
        // exp(log_phib) = phib
        for &z in &[c(0.3, 0.4), c(-1.0, 1.9), c(0.8, -2.3)] {
            let v = phib(z, &ctx).unwrap();
            let l = log_phib(z, &ctx).unwrap().exp();
            assert!((v - l).norm() < 1e-10 * v.norm().max(1e-10));
        }
    }

    #[test]
    fn residue_law_extrapolated() {
        // φ(z ± c_b) ~ ±ζ⁻¹ (2πiz)^{∓1} as z → 0
        let ctx = ctx(0.73);
        let two_pi_i = Complex64::i() * 2.0 * std::f64::consts::PI;
        let mut vals_pole = Vec::new();
        let mut vals_zero = Vec::new();
        for k in 3..=6 {
            let z = c(10f64.powi(-k), 0.0);
            vals_pole.push(phib(z + ctx.c_b, &ctx).unwrap() * two_pi_i * z);
            vals_zero.push(phib(z - ctx.c_b, &ctx).unwrap() / z);
        }
        // Richardson: v(h) = v0 + a h, pairs (k, k+1) with ratio 10
        let extrap = |v: &[Complex64]| (10.0 * v[v.len() - 1] - v[v.len() - 2]) / 9.0;
        let inv_zeta = 1.0 / ctx.zeta;
        let p = extrap(&vals_pole);
        assert!((p - inv_zeta).norm() < 1e-7, "pole residue law: {p} vs {inv_zeta}");
        let zr = extrap(&vals_zero);
        let target = -inv_zeta * two_pi_i;
        assert!((zr - target).norm() < 1e-6 * target.norm(), "zero law: {zr} vs {target}");
    }

    #[test]
    fn lattice_blowup_near_poles_and_zeros() {
        let ctx = ctx(0.718);
        let poles = PoleZeroLattice::of_phi(LatticeKind::Pole, c(0.0, 0.0), ctx.b);
        let zeros = PoleZeroLattice::of_phi(LatticeKind::Zero, c(0.0, 0.0), ctx.b);
        for m in 0..=4u32 {
            for n in 0..=(4 - m) {
                let p = poles.point(m, n) + c(1e-6, 0.0);
                let v = phib(p, &ctx).unwrap();
                assert!(v.norm() > 1e6 * 0.1, "|φ| near pole ({m},{n}) = {}", v.norm());
                let z = zeros.point(m, n) + c(1e-6, 0.0);
                let v = phib(z, &ctx).unwrap();
                assert!(v.norm() < 1e-5, "|φ| near zero ({m},{n}) = {}", v.norm());
            }
        }
    }

    #[test]
    fn nearest_lattice_point_search() {
        let b = 0.77;
        let l = PoleZeroLattice::of_phi(LatticeKind::Pole, c(0.0, 0.0), b);
        let p = l.point(2, 3);
        let (d, m, n) = l.nearest(p + c(1e-9, -1e-9));
        assert_eq!((m, n), (2, 3));
        assert!(d < 2e-9);
    }

    #[test]
    fn double_sine_midpoint_reflection_golden() {
        let b = 0.9;
        let wsum = b + 1.0 / b;
        // S₂ at the midpoint: the integrand vanishes identically
        let v = double_sine(c(wsum / 2.0, 0.0), b, 1.0 / b, 1e-12).unwrap();
        assert!((v - 1.0).norm() < 1e-12);
        // reflection: S₂(z) S₂(ω̲ - z) = 1
        let z = c(0.4, -0.1);
        let prod = double_sine(z, b, 1.0 / b, 1e-12).unwrap()
            * double_sine(Complex64::new(wsum, 0.0) - z, b, 1.0 / b, 1e-12).unwrap();
        assert!((prod - 1.0).norm() < 1e-10, "reflection product {prod}");
        // golden value (independent 40-digit quadrature of the Barnes integral)
        let gold = c(1.43311605842626178402201774719, -0.0808108879453697471513458774727);
        let v = double_sine(z, b, 1.0 / b, 1e-13).unwrap();
        assert!((v - gold).norm() < 1e-11, "S₂ golden off by {}", (v - gold).norm());
    }

    #[test]
    fn double_sine_phi_relation() {
        // S₂(z | b, b⁻¹) = φ(iz - c_b) e^{-πi(iz-c_b)²/2} e^{-πi(b²+b⁻²)/24};
        // the last factor equals 1/φ(0) and is pinned by S₂(ω̲/2) = 1.
        for &b in &[0.9, 0.75] {
            let ctx = ctx(b);
            let z = c(0.4, -0.1);
            let w = Complex64::i() * z - ctx.c_b;
            let s2 = double_sine(z, b, 1.0 / b, 1e-12).unwrap();
            let cnorm =
                (-Complex64::i() * std::f64::consts::PI * (b * b + 1.0 / (b * b)) / 24.0).exp();
            let rel = phib(w, &ctx).unwrap()
                * (-Complex64::i() * std::f64::consts::PI / 2.0 * w * w).exp()
                * cnorm;
            assert!((s2 - rel).norm() < 1e-10 * s2.norm(), "b={b}: {s2} vs {rel}");
        }
    }

    #[test]
    fn psi_q_basics() {
        let q = c(0.5, 0.0);
        // X = 0: empty product
        let v = psi_q_compact(c(0.0, 0.0), q, 1e-14).unwrap();
        assert_eq!(v.value, c(1.0, 0.0));
        // functional equation Ψ_q(qX)/Ψ_q(q⁻¹X) = (1+X)⁻¹ ... rearranged:
        // Ψ_q(qX) = (1+X) Ψ_q(q⁻¹X) with X = 0.3
        let x = c(0.3, 0.0);
        let lhs = psi_q_compact(q * x, q, 1e-14).unwrap().value;
        let rhs = (1.0 + x) * psi_q_compact(x / q, q, 1e-14).unwrap().value;
        assert!((lhs - rhs).norm() < 1e-12);
        // two truncation depths agree within the certified tail bound
        let loose = psi_q_compact(c(1.0, 0.0), q, 1e-6).unwrap();
        let tight = psi_q_compact(c(1.0, 0.0), q, 1e-14).unwrap();
        assert!((loose.value - tight.value).norm() < 2.0 * loose.tail_bound + 1e-13);
        assert!(loose.terms < tight.terms);
        // divergence flagged
        assert!(matches!(
            psi_q_compact(x, c(1.1, 0.0), 1e-10),
            Err(QdError::NonConvergent(_))
        ));
    }

    #[test]
    fn extended_precision_agrees_with_double() {
        use crate::extprec::Dd;
        let rule = Gk15::<Dd>::get();
        let z = Cx::<Dd>::from_f64(0.3, 0.2);
        let v = phib_in(z, 0.8, 1e-17, &rule).unwrap().to_c64();
        let ctx = ctx(0.8);
        let v64 = phib(c(0.3, 0.2), &ctx).unwrap();
        assert!((v - v64).norm() < 1e-10);
        // and the Dd value squares to ζ_inv e^{πiz²} against its own mirror
        let vm = phib_in(-z, 0.8, 1e-17, &rule).unwrap().to_c64();
        let rhs = ctx.zeta_inv * (Complex64::i() * std::f64::consts::PI * c(0.3, 0.2).powi(2)).exp();
        assert!((v * vm - rhs).norm() < 1e-13 * rhs.norm());
    }
}
