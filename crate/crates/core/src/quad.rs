//! Adaptive Gauss–Kronrod (15/7) quadrature along straight complex segments.
//!
//! One generic kernel serves both working precisions; the node table is
//! stored as decimal literals and parsed into the target scalar, so the
//! double-double path keeps its full accuracy.

use crate::extprec::{Cx, Real};

/// 15-point Kronrod nodes (ascending) with Kronrod weights. The odd-indexed
/// nodes are the embedded 7-point Gauss rule.
const GK15: [(&str, &str); 15] = [
    (
        "-0.991455371120812639206854697526328517",
        "0.022935322010529224963732008058969592",
    ),
    (
        "-0.949107912342758524526189684047851262",
        "0.0630920926299785532907006631892042867",
    ),
    (
        "-0.864864423359769072789712788640926201",
        "0.104790010322250183839876322541518017",
    ),
    (
        "-0.741531185599394439863864773280788407",
        "0.14065325971552591874518959051023792",
    ),
    (
        "-0.586087235467691130294144838258729598",
        "0.169004726639267902826583426598550284",
    ),
    (
        "-0.405845151377397166906606412076961463",
        "0.190350578064785409913256402421013683",
    ),
    (
        "-0.207784955007898467600689403773244913",
        "0.204432940075298892414161999234649085",
    ),
    ("0.0", "0.209482141084727828012999174891714264"),
    (
        "0.207784955007898467600689403773244913",
        "0.204432940075298892414161999234649085",
    ),
    (
        "0.405845151377397166906606412076961463",
        "0.190350578064785409913256402421013683",
    ),
    (
        "0.586087235467691130294144838258729598",
        "0.169004726639267902826583426598550284",
    ),
    (
        "0.741531185599394439863864773280788407",
        "0.14065325971552591874518959051023792",
    ),
    (
        "0.864864423359769072789712788640926201",
        "0.104790010322250183839876322541518017",
    ),
    (
        "0.949107912342758524526189684047851262",
        "0.0630920926299785532907006631892042867",
    ),
    (
        "0.991455371120812639206854697526328517",
        "0.022935322010529224963732008058969592",
    ),
];

const G7_W: [&str; 7] = [
    "0.129484966168869693270611432679082018",
    "0.279705391489276667901467771423779582",
    "0.381830050505118944950369775488975134",
    "0.417959183673469387755102040816326531",
    "0.381830050505118944950369775488975134",
    "0.279705391489276667901467771423779582",
    "0.129484966168869693270611432679082018",
];

/// Parsed rule for scalar type `T`.
pub struct Gk15<T> {
    nodes: [T; 15],
    wk: [T; 15],
    wg: [T; 7],
}

impl<T: Real> Gk15<T> {
    pub fn get() -> Self {
        let mut nodes = [T::zero(); 15];
        let mut wk = [T::zero(); 15];
        let mut wg = [T::zero(); 7];
        for (i, (n, w)) in GK15.iter().enumerate() {
            nodes[i] = T::from_decimal(n);
            wk[i] = T::from_decimal(w);
        }
        for (i, w) in G7_W.iter().enumerate() {
            wg[i] = T::from_decimal(w);
        }
        Gk15 { nodes, wk, wg }
    }

    /// One panel over the straight segment `a -> b`.
    /// Returns (kronrod value, |K15 - G7| error estimate, sum |f| |w| |dz|).
    pub fn panel<F>(&self, f: &mut F, a: Cx<T>, b: Cx<T>) -> (Cx<T>, f64, f64)
    where
        F: FnMut(Cx<T>) -> Cx<T>,
    {
        let half = (b - a).scale(T::from_f64(0.5));
        let mid = (a + b).scale(T::from_f64(0.5));
        let mut kron = Cx::zero();
        let mut gauss = Cx::zero();
        let mut absum = 0.0f64;
        for i in 0..15 {
            let z = mid + half.scale(self.nodes[i]);
            let fv = f(z);
            kron += fv.scale(self.wk[i]);
            absum += fv.abs().to_f64() * self.wk[i].to_f64();
            if i % 2 == 1 {
                gauss += fv.scale(self.wg[i / 2]);
            }
        }
        // dz = half dx along the segment
        let value = kron * half;
        let err = ((kron - gauss) * half).abs().to_f64();
        (value, err, absum * half.abs().to_f64())
    }
}

/// Result of an adaptive integration.
#[derive(Clone, Copy, Debug)]
pub struct QuadResult<T> {
    pub value: Cx<T>,
    /// Estimated absolute error.
    pub err: f64,
    /// Integral of |f| |dz| (scale indicator).
    pub abs_integral: f64,
    pub evals: usize,
}

/// Adaptively integrate `f` along the straight segment `a -> b` to absolute
/// tolerance `tol_abs`, refining the worst panel first under a global panel
/// budget. Panels whose error estimate sits at the arithmetic noise floor are
/// accepted as converged.
pub fn integrate_segment<T: Real, F>(
    rule: &Gk15<T>,
    f: &mut F,
    a: Cx<T>,
    b: Cx<T>,
    tol_abs: f64,
) -> QuadResult<T>
where
    F: FnMut(Cx<T>) -> Cx<T>,
{
    struct Panel<T> {
        lo: Cx<T>,
        hi: Cx<T>,
        value: Cx<T>,
        err: f64,
        ab: f64,
        depth: u32,
    }
    let total_len = (b - a).abs().to_f64();
    let noise = 50.0 * T::eps();
    let mut evals = 15usize;
    let (v0, e0, ab0) = rule.panel(f, a, b);
    let mut panels = vec![Panel {
        lo: a,
        hi: b,
        value: v0,
        err: e0,
        ab: ab0,
        depth: 0,
    }];
    let budget = 6000usize;
    loop {
        let err_tot: f64 = panels.iter().map(|p| p.err).sum();
        if err_tot <= tol_abs || panels.len() >= budget {
            break;
        }
        // worst refinable panel
        let mut worst: Option<usize> = None;
        let mut worst_err = 0.0;
        for (i, p) in panels.iter().enumerate() {
            let seg_len = (p.hi - p.lo).abs().to_f64();
            let refinable = p.depth < 40 && seg_len > 1e-13 * total_len && p.err > noise * p.ab;
            if refinable && p.err > worst_err {
                worst_err = p.err;
                worst = Some(i);
            }
        }
        let Some(i) = worst else { break };
        let p = panels.swap_remove(i);
        let mid = (p.lo + p.hi).scale(T::from_f64(0.5));
        for (lo, hi) in [(p.lo, mid), (mid, p.hi)] {
            let (v, e, ab) = rule.panel(f, lo, hi);
            evals += 15;
            panels.push(Panel {
                lo,
                hi,
                value: v,
                err: e,
                ab,
                depth: p.depth + 1,
            });
        }
    }
    let mut value = Cx::zero();
    let mut err = 0.0;
    let mut abs_integral = 0.0;
    for p in &panels {
        value += p.value;
        err += p.err;
        abs_integral += p.ab;
    }
    QuadResult {
        value,
        err,
        abs_integral,
        evals,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extprec::Dd;

    #[test]
    fn gauss7_nodes_are_odd_kronrod_nodes() {
        let r = Gk15::<f64>::get();
        // G7 node values must match classical Gauss-Legendre 7 roots
        assert!((r.nodes[7]).abs() < 1e-30);
        assert!((r.nodes[1] + 0.9491079123427585).abs() < 1e-15);
        // weights sum to 2
        let swk: f64 = r.wk.iter().sum();
        let swg: f64 = r.wg.iter().sum();
        assert!((swk - 2.0).abs() < 1e-14);
        assert!((swg - 2.0).abs() < 1e-14);
    }

    #[test]
    fn integrates_gaussian_on_real_line() {
        let r = Gk15::<f64>::get();
        let mut f = |z: Cx<f64>| {
            let e = -(z * z).scale(std::f64::consts::PI);
            e.exp()
        };
        let a = Cx::new(-8.0, 0.0);
        let b = Cx::new(8.0, 0.0);
        let q = integrate_segment(&r, &mut f, a, b, 1e-13);
        assert!((q.value.re - 1.0).abs() < 1e-12, "got {}", q.value.re);
        assert!(q.value.im.abs() < 1e-13);
    }

    #[test]
    fn integrates_oscillatory_segment_complex() {
        // int_0^1 e^{i k t} dt = (e^{ik} - 1)/(ik), along a rotated segment
        let r = Gk15::<f64>::get();
        let k = 37.0;
        let mut f = |z: Cx<f64>| (z.scale(k) * Cx::new(0.0, 1.0)).exp();
        let q = integrate_segment(&r, &mut f, Cx::zero(), Cx::one(), 1e-13);
        let exact = (num_complex::Complex64::new(0.0, k).exp() - 1.0)
            / num_complex::Complex64::new(0.0, k);
        assert!((q.value.to_c64() - exact).norm() < 1e-12);
    }

    #[test]
    fn dd_panel_beats_f64_accuracy() {
        // smooth integrand: int_0^1 exp(x) dx = e - 1, to ~30 digits in Dd
        let r = Gk15::<Dd>::get();
        let mut f = |z: Cx<Dd>| z.exp();
        let q = integrate_segment(&r, &mut f, Cx::zero(), Cx::one(), 1e-25);
        let em1 = Dd::from_f64(1.0).exp() - Dd::from_f64(1.0);
        let diff = (q.value.re - em1).to_f64().abs();
        assert!(diff < 1e-25, "dd quadrature error {diff}");
    }
}
