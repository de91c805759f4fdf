//! J_β(a; ℓ) = ∫_{[0,ℓ_1]×…×[0,ℓ_k]} (a + t_1 + … + t_k)^{−β−k} dt and its two-sided bounds.

use crate::error::{invalid, Error, Result};
use serde::Serialize;

pub const MAX_K: usize = 4;
const REL_TOL: f64 = 1e-10;
const MAX_DEPTH: usize = 40;

// 15-point Kronrod nodes and weights with the embedded 7-point Gauss weights.
#[allow(clippy::excessive_precision)]
const XK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
#[allow(clippy::excessive_precision)]
const WK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

fn gk15(f: &mut dyn FnMut(f64) -> Result<f64>, a: f64, b: f64) -> Result<(f64, f64)> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c)?;
    let mut k = fc * WK[7];
    let mut g = fc * WG[3];
    for j in 0..7 {
        let dx = h * XK[j];
        let s = f(c - dx)? + f(c + dx)?;
        k += WK[j] * s;
        if j % 2 == 1 {
            g += WG[j / 2] * s;
        }
    }
    Ok((k * h, ((k - g) * h).abs()))
}

/// Adaptive Gauss–Kronrod integration to a relative tolerance.
pub fn integrate(f: &mut dyn FnMut(f64) -> Result<f64>, a: f64, b: f64, rel_tol: f64) -> Result<(f64, f64)> {
    fn rec(f: &mut dyn FnMut(f64) -> Result<f64>, a: f64, b: f64, whole: (f64, f64), tol: f64, depth: usize) -> Result<(f64, f64)> {
        if whole.1 <= tol || whole.1 <= 1e-15 * whole.0.abs() {
            return Ok(whole);
        }
        if depth == MAX_DEPTH {
            return Err(Error::NotConverged { iterations: depth, residual: whole.1 });
        }
        let m = 0.5 * (a + b);
        let l = gk15(f, a, m)?;
        let r = gk15(f, m, b)?;
        let (lv, le) = rec(f, a, m, l, 0.5 * tol, depth + 1)?;
        let (rv, re) = rec(f, m, b, r, 0.5 * tol, depth + 1)?;
        Ok((lv + rv, le + re))
    }
    if b <= a {
        return Ok((0.0, 0.0));
    }
    let whole = gk15(f, a, b)?;
    let tol = rel_tol * whole.0.abs();
    rec(f, a, b, whole, tol, 0)
}

/// ∫_0^{ℓ[0]} … (c + Σ t)^{−p}, one coordinate per level. Long intervals (ℓ > c) substitute
/// u = ln(c + t) so the integrand is smooth on a logarithmic scale.
fn nested(c: f64, ell: &[f64], p: f64) -> Result<f64> {
    match ell.split_first() {
        None => Ok(c.powf(-p)),
        Some((&l, rest)) => {
            if l == 0.0 {
                return Ok(0.0);
            }
            let tol = REL_TOL * 10f64.powi(-(rest.len() as i32));
            if l <= c {
                let mut f = |t: f64| nested(c + t, rest, p);
                return Ok(integrate(&mut f, 0.0, l, tol)?.0);
            }
            let mut f = |u: f64| -> Result<f64> {
                let s = u.exp();
                Ok(nested(s.max(c), rest, p)? * s)
            };
            Ok(integrate(&mut f, c.ln(), (c + l).ln(), tol)?.0)
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct JThetaReport {
    pub beta: f64,
    pub a: f64,
    pub ell: Vec<f64>,
    pub value: f64,
    pub lower: f64,
    pub upper: f64,
    pub holds: bool,
}

/// a^{−β} Π_i (1 ∧ ℓ_i/a).
pub fn j_theta_profile(beta: f64, a: f64, ell: &[f64]) -> f64 {
    a.powf(-beta) * ell.iter().map(|l| f64::min(1.0, l / a)).product::<f64>()
}

/// Lower constant (1+k)^{−β−k} from restricting to the cube [0, 1 ∧ ℓ_i/a] in scaled variables.
pub fn j_theta_lower_constant(beta: f64, k: usize) -> f64 {
    (1.0 + k as f64).powf(-beta - k as f64)
}

/// Upper constant: with m the number of i having ℓ_i > a, the remaining integral over [0,∞)^m of
/// (1 + Σv)^{−β−k} equals Π_{j=1}^{m} 1/(β + k − j).
pub fn j_theta_upper_constant(beta: f64, a: f64, ell: &[f64]) -> f64 {
    let k = ell.len();
    let m = ell.iter().filter(|&&l| l / a > 1.0).count();
    (1..=m).map(|j| 1.0 / (beta + (k - j) as f64)).product()
}

/// Numeric J_β with both bounds and the verdict lower ≤ J ≤ upper (relative slack 1e-9).
pub fn j_theta_integral(beta: f64, a: f64, ell: &[f64]) -> Result<JThetaReport> {
    if !(beta > 0.0 && a > 0.0) || ell.iter().any(|l| !(*l >= 0.0 && l.is_finite())) {
        return invalid("need β > 0, a > 0 and finite ℓ_i ≥ 0");
    }
    let k = ell.len();
    if k == 0 || k > MAX_K {
        return invalid(format!("1 ≤ k ≤ {MAX_K} supported"));
    }
    let value = nested(a, ell, beta + k as f64)?;
    let prof = j_theta_profile(beta, a, ell);
    let lower = j_theta_lower_constant(beta, k) * prof;
    let upper = j_theta_upper_constant(beta, a, ell) * prof;
    let holds = value >= lower * (1.0 - 1e-9) && value <= upper * (1.0 + 1e-9);
    Ok(JThetaReport { beta, a, ell: ell.to_vec(), value, lower, upper, holds })
}

/// Closed form for k = 1.
pub fn j_theta_one(beta: f64, a: f64, l: f64) -> f64 {
    (a.powf(-beta) - (a + l).powf(-beta)) / beta
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_dimensional_closed_form() {
        for &(b, a, l) in &[(0.5, 1.0, 3.0), (1.0, 1e-3, 1e3), (2.5, 7.0, 0.01), (0.1, 2.0, 1e5)] {
            let r = j_theta_integral(b, a, &[l]).unwrap();
            let exact = j_theta_one(b, a, l);
            assert!((r.value / exact - 1.0).abs() < 1e-8, "{b} {a} {l}: {} vs {exact}", r.value);
            assert!(r.holds);
        }
    }

    #[test]
    fn two_dimensional_closed_form() {
        // (β(β+1))^{-1} [a^{−β} − (a+ℓ1)^{−β} − (a+ℓ2)^{−β} + (a+ℓ1+ℓ2)^{−β}]
        let (b, a, l1, l2): (f64, f64, f64, f64) = (1.3, 0.7, 2.0, 5.0);
        let exact = (a.powf(-b) - (a + l1).powf(-b) - (a + l2).powf(-b) + (a + l1 + l2).powf(-b)) / (b * (b + 1.0));
        let r = j_theta_integral(b, a, &[l1, l2]).unwrap();
        assert!((r.value / exact - 1.0).abs() < 1e-8);
    }

    #[test]
    fn empty_box() {
        let r = j_theta_integral(1.0, 1.0, &[0.0, 2.0]).unwrap();
        assert_eq!((r.value, r.lower, r.upper), (0.0, 0.0, 0.0));
        assert!(r.holds);
        let s = j_theta_integral(1.0, 1.0, &[1e-9, 1e-9]).unwrap();
        assert!(s.value < 1e-17 && s.holds);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(j_theta_integral(0.0, 1.0, &[1.0]).is_err());
        assert!(j_theta_integral(1.0, 1.0, &[1.0; 5]).is_err());
    }
}
