//! Extended-precision scalars and the generic real/complex layer.
//!
//! The numerical kernels (quantum dilogarithm, path quadrature, wavefunction
//! integrals) are written once over the [`Real`] trait and instantiated at two
//! precisions:
//!
//! - `f64` — the default working precision;
//! - [`Dd`] — an unevaluated double-double pair giving ~31 significant
//!   digits, used as a guard-digit mode for contour-pinch evaluations.
//!
//! [`Cx`] is the matching complex type. It is intentionally minimal: only the
//! operations the kernels need.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

/// Real scalar abstraction for the numeric kernels.
pub trait Real:
    Copy
    + PartialOrd
    + fmt::Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_f64(x: f64) -> Self;
    fn to_f64(self) -> f64;
    /// Parse a decimal literal; used for quadrature node tables.
    fn from_decimal(s: &str) -> Self;
    fn zero() -> Self;
    fn one() -> Self;
    fn pi() -> Self;
    fn abs(self) -> Self;
    fn exp(self) -> Self;
    fn ln(self) -> Self;
    fn sqrt(self) -> Self;
    fn sin_cos(self) -> (Self, Self);
    fn sinh(self) -> Self;
    fn cosh(self) -> Self;
    /// Machine epsilon of the representation.
    fn eps() -> f64;
}

impl Real for f64 {
    fn from_f64(x: f64) -> Self {
        x
    }
    fn to_f64(self) -> f64 {
        self
    }
    fn from_decimal(s: &str) -> Self {
        s.parse().expect("bad decimal literal")
    }
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn pi() -> Self {
        std::f64::consts::PI
    }
    fn abs(self) -> Self {
        f64::abs(self)
    }
    fn exp(self) -> Self {
        f64::exp(self)
    }
    fn ln(self) -> Self {
        f64::ln(self)
    }
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    fn sin_cos(self) -> (Self, Self) {
        f64::sin_cos(self)
    }
    fn sinh(self) -> Self {
        f64::sinh(self)
    }
    fn cosh(self) -> Self {
        f64::cosh(self)
    }
    fn eps() -> f64 {
        f64::EPSILON
    }
}

/// Double-double number: value = `hi + lo` with `|lo| <= ulp(hi)/2`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let err = b - (s - a);
    (s, err)
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let err = a.mul_add(b, -p);
    (p, err)
}

impl Dd {
    pub const fn new(hi: f64, lo: f64) -> Self {
        Dd { hi, lo }
    }

    pub fn from_f64(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    fn renorm(hi: f64, lo: f64) -> Self {
        let (s, e) = quick_two_sum(hi, lo);
        Dd { hi: s, lo: e }
    }

    pub fn is_finite(self) -> bool {
        self.hi.is_finite()
    }

    fn mul_pow2(self, k: f64) -> Self {
        Dd {
            hi: self.hi * k,
            lo: self.lo * k,
        }
    }

    fn ldexp(self, k: i32) -> Self {
        let f = (k as f64).exp2();
        self.mul_pow2(f)
    }

    fn recip(self) -> Self {
        Dd::from_f64(1.0) / self
    }

    fn floor(self) -> Self {
        let fhi = self.hi.floor();
        if fhi == self.hi {
            Dd::renorm(fhi, self.lo.floor())
        } else {
            Dd { hi: fhi, lo: 0.0 }
        }
    }

    fn round(self) -> Self {
        (self + Dd::from_f64(0.5)).floor()
    }

    /// exp by argument reduction: x = k ln2 + r, exp(r) by scaled Taylor.
    fn exp_impl(self) -> Self {
        if self.hi > 709.0 {
            return Dd::from_f64(f64::INFINITY);
        }
        if self.hi < -745.0 {
            return Dd::from_f64(0.0);
        }
        let ln2 = Dd::new(0.6931471805599453, 2.3190468138462996e-17);
        let k = (self.hi / ln2.hi).round();
        let r = self - ln2 * Dd::from_f64(k);
        // scale r down by 2^9, Taylor, then square 9 times
        let rs = r.ldexp(-9);
        let mut term = rs;
        let mut sum = rs;
        let mut fact = 1.0f64;
        for n in 2..22 {
            fact *= n as f64;
            term = term * rs;
            let add = term / Dd::from_f64(fact);
            sum = sum + add;
            if add.hi.abs() < 1e-35 * sum.hi.abs() {
                break;
            }
        }
        // sum = exp(rs) - 1 ; repeated doubling (1+y)^2 - 1 = 2y + y^2
        let mut y = sum;
        for _ in 0..9 {
            y = y.mul_pow2(2.0) + y * y;
        }
        (y + Dd::from_f64(1.0)).ldexp(k as i32)
    }

    fn ln_impl(self) -> Self {
        if self.hi <= 0.0 {
            return Dd::from_f64(f64::NAN);
        }
        // Newton on y -> y + x e^{-y} - 1 starting from the f64 log
        let mut y = Dd::from_f64(self.hi.ln());
        for _ in 0..2 {
            y = y + self * (-y).exp_impl() - Dd::from_f64(1.0);
        }
        y
    }

    fn sqrt_impl(self) -> Self {
        if self.hi == 0.0 {
            return Dd::from_f64(0.0);
        }
        // one Newton step on the f64 seed: s' = s + (x - s^2)/(2s)
        let s = Dd::from_f64(self.hi.sqrt());
        s + (self - s * s) / (s.mul_pow2(2.0))
    }

    /// sin and cos with reduction modulo 2*pi (adequate for |x| < ~1e8).
    fn sin_cos_impl(self) -> (Self, Self) {
        let two_pi = Dd::new(6.283185307179586, 2.4492935982947064e-16);
        let half_pi = Dd::new(1.5707963267948966, 6.123233995736766e-17);
        let k = (self / two_pi).round();
        let mut r = self - two_pi * k;
        // reduce to |r| <= pi/4 tracking the quadrant
        let mut quad = 0i32;
        while r.hi > half_pi.hi / 2.0 + 0.2 {
            r = r - half_pi;
            quad += 1;
        }
        while r.hi < -(half_pi.hi / 2.0 + 0.2) {
            r = r + half_pi;
            quad -= 1;
        }
        let (s, c) = taylor_sin_cos(r);
        match quad.rem_euclid(4) {
            0 => (s, c),
            1 => (c, -s),
            2 => (-s, -c),
            _ => (-c, s),
        }
    }
}

fn taylor_sin_cos(r: Dd) -> (Dd, Dd) {
    let r2 = r * r;
    let mut s = r;
    let mut term = r;
    let mut n = 1.0f64;
    loop {
        term = term * r2 / Dd::from_f64((n + 1.0) * (n + 2.0));
        n += 2.0;
        s = if (n as i64 - 1) / 2 % 2 == 1 { s - term } else { s + term };
        if term.hi.abs() < 1e-35 * (s.hi.abs() + 1e-300) || n > 40.0 {
            break;
        }
    }
    let mut c = Dd::from_f64(1.0);
    let mut termc = Dd::from_f64(1.0);
    let mut m = 0.0f64;
    loop {
        termc = termc * r2 / Dd::from_f64((m + 1.0) * (m + 2.0));
        m += 2.0;
        c = if (m as i64) / 2 % 2 == 1 { c - termc } else { c + termc };
        if termc.hi.abs() < 1e-35 || m > 40.0 {
            break;
        }
    }
    (s, c)
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, o: Dd) -> Dd {
        let (s1, s2) = two_sum(self.hi, o.hi);
        let (t1, t2) = two_sum(self.lo, o.lo);
        let (s1b, s2b) = quick_two_sum(s1, s2 + t1);
        Dd::renorm(s1b, s2b + t2)
    }
}

impl Sub for Dd {
    type Output = Dd;
    fn sub(self, o: Dd) -> Dd {
        self + (-o)
    }
}

impl Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Mul for Dd {
    type Output = Dd;
    fn mul(self, o: Dd) -> Dd {
        let (p1, p2) = two_prod(self.hi, o.hi);
        let p2b = p2 + self.hi * o.lo + self.lo * o.hi;
        Dd::renorm(p1, p2b)
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, o: Dd) -> Dd {
        let q1 = self.hi / o.hi;
        let r = self - o * Dd::from_f64(q1);
        let q2 = r.hi / o.hi;
        let r2 = r - o * Dd::from_f64(q2);
        let q3 = r2.hi / o.hi;
        Dd::renorm(q1, q2) + Dd::from_f64(q3)
    }
}

impl AddAssign for Dd {
    fn add_assign(&mut self, o: Dd) {
        *self = *self + o;
    }
}
impl SubAssign for Dd {
    fn sub_assign(&mut self, o: Dd) {
        *self = *self - o;
    }
}
impl MulAssign for Dd {
    fn mul_assign(&mut self, o: Dd) {
        *self = *self * o;
    }
}

impl PartialOrd for Dd {
    fn partial_cmp(&self, o: &Dd) -> Option<std::cmp::Ordering> {
        match self.hi.partial_cmp(&o.hi) {
            Some(std::cmp::Ordering::Equal) => self.lo.partial_cmp(&o.lo),
            other => other,
        }
    }
}

impl fmt::Display for Dd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:e}{:+e}", self.hi, self.lo)
    }
}

impl Real for Dd {
    fn from_f64(x: f64) -> Self {
        Dd::from_f64(x)
    }
    fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
    fn from_decimal(s: &str) -> Self {
        // exact accumulation digit by digit: d0.d1 d2 ... => Horner in Dd
        let neg = s.starts_with('-');
        let body = s.trim_start_matches('-');
        let (mant, exp10) = match body.split_once(['e', 'E']) {
            Some((m, e)) => (m, e.parse::<i32>().expect("bad exponent")),
            None => (body, 0),
        };
        let (int_part, frac_part) = match mant.split_once('.') {
            Some((i, fr)) => (i, fr),
            None => (mant, ""),
        };
        let mut v = Dd::from_f64(0.0);
        for c in int_part.chars().chain(frac_part.chars()) {
            let d = c.to_digit(10).expect("bad digit") as f64;
            v = v * Dd::from_f64(10.0) + Dd::from_f64(d);
        }
        let shift = exp10 - frac_part.len() as i32;
        let ten = Dd::from_f64(10.0);
        let mut scale = Dd::from_f64(1.0);
        for _ in 0..shift.abs() {
            scale = scale * ten;
        }
        let out = if shift >= 0 { v * scale } else { v / scale };
        if neg {
            -out
        } else {
            out
        }
    }
    fn zero() -> Self {
        Dd::from_f64(0.0)
    }
    fn one() -> Self {
        Dd::from_f64(1.0)
    }
    fn pi() -> Self {
        Dd::new(3.141592653589793, 1.2246467991473532e-16)
    }
    fn abs(self) -> Self {
        if self.hi < 0.0 {
            -self
        } else {
            self
        }
    }
    fn exp(self) -> Self {
        self.exp_impl()
    }
    fn ln(self) -> Self {
        self.ln_impl()
    }
    fn sqrt(self) -> Self {
        self.sqrt_impl()
    }
    fn sin_cos(self) -> (Self, Self) {
        self.sin_cos_impl()
    }
    fn sinh(self) -> Self {
        let e = self.exp_impl();
        (e - e.recip()).mul_pow2(0.5)
    }
    fn cosh(self) -> Self {
        let e = self.exp_impl();
        (e + e.recip()).mul_pow2(0.5)
    }
    fn eps() -> f64 {
        4.93e-32
    }
}

/// Minimal complex number over a [`Real`] scalar.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Cx<T> {
    pub re: T,
    pub im: T,
}

impl<T: Real> Cx<T> {
    pub fn new(re: T, im: T) -> Self {
        Cx { re, im }
    }
    pub fn zero() -> Self {
        Cx::new(T::zero(), T::zero())
    }
    pub fn one() -> Self {
        Cx::new(T::one(), T::zero())
    }
    pub fn from_f64(re: f64, im: f64) -> Self {
        Cx::new(T::from_f64(re), T::from_f64(im))
    }
    pub fn to_c64(self) -> num_complex::Complex64 {
        num_complex::Complex64::new(self.re.to_f64(), self.im.to_f64())
    }
    pub fn from_c64(z: num_complex::Complex64) -> Self {
        Cx::from_f64(z.re, z.im)
    }
    pub fn scale(self, k: T) -> Self {
        Cx::new(self.re * k, self.im * k)
    }
    pub fn conj(self) -> Self {
        Cx::new(self.re, -self.im)
    }
    pub fn norm_sqr(self) -> T {
        self.re * self.re + self.im * self.im
    }
    pub fn abs(self) -> T {
        self.norm_sqr().sqrt()
    }
    pub fn exp(self) -> Self {
        let r = self.re.exp();
        let (s, c) = self.im.sin_cos();
        Cx::new(r * c, r * s)
    }
    pub fn inv(self) -> Self {
        let d = self.norm_sqr();
        Cx::new(self.re / d, -self.im / d)
    }
    /// Complex sinh via the real exponential.
    pub fn sinh(self) -> Self {
        let (s, c) = self.im.sin_cos();
        Cx::new(self.re.sinh() * c, self.re.cosh() * s)
    }
}

impl<T: Real> Add for Cx<T> {
    type Output = Cx<T>;
    fn add(self, o: Self) -> Self {
        Cx::new(self.re + o.re, self.im + o.im)
    }
}
impl<T: Real> Sub for Cx<T> {
    type Output = Cx<T>;
    fn sub(self, o: Self) -> Self {
        Cx::new(self.re - o.re, self.im - o.im)
    }
}
impl<T: Real> Neg for Cx<T> {
    type Output = Cx<T>;
    fn neg(self) -> Self {
        Cx::new(-self.re, -self.im)
    }
}
impl<T: Real> Mul for Cx<T> {
    type Output = Cx<T>;
    fn mul(self, o: Self) -> Self {
        Cx::new(
            self.re * o.re - self.im * o.im,
            self.re * o.im + self.im * o.re,
        )
    }
}
impl<T: Real> Div for Cx<T> {
    type Output = Cx<T>;
    fn div(self, o: Self) -> Self {
        self * o.inv()
    }
}
impl<T: Real> AddAssign for Cx<T> {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}
impl<T: Real> MulAssign for Cx<T> {
    fn mul_assign(&mut self, o: Self) {
        *self = *self * o;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Dd, b: f64, tol: f64) -> bool {
        (a.to_f64() - b).abs() <= tol * (1.0 + b.abs())
    }

    #[test]
    fn dd_basic_arithmetic() {
        let a = Dd::from_f64(0.1) + Dd::from_f64(0.2);
        let b = Dd::from_f64(0.3);
        assert!((a - b).to_f64().abs() < 1e-16);
        let c = Dd::from_f64(3.0) / Dd::from_f64(7.0) * Dd::from_f64(7.0);
        assert!(close(c, 3.0, 1e-30));
    }

    #[test]
    fn dd_from_decimal_roundtrip() {
        let x = Dd::from_decimal("0.991455371120812639206854697526328517");
        // hi must be the correctly rounded f64
        assert!((x.hi - 0.9914553711208126).abs() < 1e-16);
        assert!(x.lo.abs() < 1e-16 && x.lo.abs() > 0.0);
        let y = Dd::from_decimal("-2.5e-3");
        assert_eq!(y.to_f64(), -0.0025);
    }

    #[test]
    fn dd_transcendentals_match_f64_seeds() {
        for &x in &[0.3, -1.7, 2.5, 0.0, 10.0, -20.0] {
            let d = Dd::from_f64(x).exp();
            assert!(close(d, x.exp(), 1e-14), "exp({x})");
        }
        for &x in &[0.5, 1.0, 3.25, 100.0] {
            assert!(close(Dd::from_f64(x).ln(), x.ln(), 1e-14));
            assert!(close(Dd::from_f64(x).sqrt(), x.sqrt(), 1e-14));
        }
        for &x in &[0.2, -0.9, 3.0, 12.5, -7.3] {
            let (s, c) = Dd::from_f64(x).sin_cos();
            assert!(close(s, x.sin(), 1e-13), "sin({x})");
            assert!(close(c, x.cos(), 1e-13), "cos({x})");
            assert!(close(Dd::from_f64(x).sinh(), x.sinh(), 1e-13));
        }
    }

    #[test]
    fn dd_exp_ln_inverse_to_30_digits() {
        // exp then ln should return the argument to double-double accuracy
        for &x in &[0.123456789, 1.5, -2.25, 5.0] {
            let d = Dd::from_f64(x);
            let r = d.exp().ln() - d;
            assert!(
                r.to_f64().abs() < 1e-29,
                "exp/ln roundtrip at {x}: {}",
                r.to_f64()
            );
        }
    }

    #[test]
    fn dd_sin_cos_pythagoras_tight() {
        for &x in &[0.37, 1.1, 2.9, -4.4] {
            let (s, c) = Dd::from_f64(x).sin_cos();
            let p = s * s + c * c - Dd::from_f64(1.0);
            assert!(p.to_f64().abs() < 1e-29, "s^2+c^2 at {x}: {}", p.to_f64());
        }
    }

    #[test]
    fn cx_exp_agrees_with_num_complex() {
        let z = Cx::<f64>::new(0.3, -1.2);
        let w = z.exp().to_c64();
        let r = num_complex::Complex64::new(0.3, -1.2).exp();
        assert!((w - r).norm() < 1e-15);
        let zd = Cx::<Dd>::from_f64(0.3, -1.2);
        assert!((zd.exp().to_c64() - r).norm() < 1e-15);
    }
}
