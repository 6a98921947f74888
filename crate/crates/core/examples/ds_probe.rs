use ruitoda::extprec::{Cx, Dd, Real};
use num_complex::Complex64;
fn main() {
    let (omega1, omega2) = (0.9f64, 1.0/0.9f64);
    let z = Complex64::new(0.4, -0.1);
    let wsum = omega1 + omega2;
    let a = 2.0 * z - wsum;
    let ac: Cx<Dd> = Cx::from_c64(a);
    let w1 = Dd::from_f64(omega1);
    let w2 = Dd::from_f64(omega2);
    let t = Cx::<Dd>::from_f64(1e-6, 0.0);
    let num = (ac * t).sinh();
    let den = t.scale(w1).sinh() * t.scale(w2).sinh();
    let ratio = num / den;
    let counter = ac * t.inv().scale(w1 * w2);
    println!("num   = {:e} {:e} | {:e} {:e}", num.re.hi, num.re.lo, num.im.hi, num.im.lo);
    println!("den   = {:e} {:e} | {:e} {:e}", den.re.hi, den.re.lo, den.im.hi, den.im.lo);
    println!("ratio = {:e} {:e} | {:e} {:e}", ratio.re.hi, ratio.re.lo, ratio.im.hi, ratio.im.lo);
    println!("countr= {:e} {:e} | {:e} {:e}", counter.re.hi, counter.re.lo, counter.im.hi, counter.im.lo);
    let diff = ratio - counter;
    println!("diff  = {:e} | {:e}", diff.re.hi, diff.im.hi);
    // reference: a/(w1 w2 t) * [1 + (a^2 - w1^2 - w2^2) t^2/6 + O(t^4)] - a/(w1w2 t)
    //          = a (a^2 - s2) t/(6 w1w2) + ...
    // with exact ratio expansion; easier: mpmath says f(1e-6) ~ c0*2t ... print f
    let f = (num / den - counter) / t.scale(Dd::from_f64(2.0));
    println!("f     = {:e} | {:e}", f.re.hi, f.im.hi);
}
