//! Discrete Hardy inequalities: for sequences, and along a voltage-decreasing path.

use crate::error::{invalid, Result};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InequalityCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

impl InequalityCheck {
    /// lhs ≥ rhs with a relative round-off allowance.
    pub fn ge(lhs: f64, rhs: f64) -> Self {
        InequalityCheck { lhs, rhs, holds: lhs >= rhs * (1.0 - 1e-12) }
    }
}

/// Σ 1/a_n ≥ ¼ Σ n/A_n with A_n = a_1 + … + a_n.
pub fn hardy_sequence_check(a: &[f64]) -> Result<InequalityCheck> {
    if let Some(v) = a.iter().find(|&&v| !(v > 0.0)) {
        return invalid(format!("sequence entries must be positive, found {v}"));
    }
    let lhs = a.iter().map(|v| 1.0 / v).sum();
    let mut partial = 0.0;
    let mut rhs = 0.0;
    for (i, v) in a.iter().enumerate() {
        partial += v;
        rhs += (i + 1) as f64 / partial;
    }
    Ok(InequalityCheck::ge(lhs, rhs / 4.0))
}

/// Σ_{i<m} V_i^q/δ_i ≥ ((q−1)/4) Σ_{j=1}^{m−1} j V_j^{q−1}, with V_i = Σ_{j≥i} δ_j.
pub fn path_hardy_from_drops(drops: &[f64], q: f64) -> Result<InequalityCheck> {
    if !(q > 1.0) {
        return invalid("q must exceed 1");
    }
    if drops.is_empty() || drops.iter().any(|&d| !(d > 0.0)) {
        return invalid("path drops must be positive and nonempty");
    }
    let m = drops.len();
    let mut v = vec![0.0; m + 1];
    for i in (0..m).rev() {
        v[i] = v[i + 1] + drops[i];
    }
    let lhs = (0..m).map(|i| v[i].powf(q) / drops[i]).sum();
    let rhs = (q - 1.0) / 4.0 * (1..m).map(|j| j as f64 * v[j].powf(q - 1.0)).sum::<f64>();
    Ok(InequalityCheck::ge(lhs, rhs))
}

/// The path inequality evaluated on the voltages of a sampled path.
pub fn path_hardy_check(path: &super::SampledPath, q: f64) -> Result<InequalityCheck> {
    path_hardy_from_drops(&path.drops(), q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn constant_sequence() {
        let c = hardy_sequence_check(&[1.0; 10]).unwrap();
        assert_eq!(c.lhs, 10.0);
        assert_eq!(c.rhs, 2.5);
        assert!(c.holds);
    }

    #[test]
    fn linear_sequence() {
        let a: Vec<f64> = (1..=10).map(|n| n as f64).collect();
        let c = hardy_sequence_check(&a).unwrap();
        assert!((c.lhs - 2.9289682539682538).abs() < 1e-12);
        let expect: f64 = 0.25 * (1..=10).map(|n| n as f64 / (n * (n + 1) / 2) as f64).sum::<f64>();
        assert!((c.rhs - expect).abs() < 1e-12 && c.holds);
    }

    #[test]
    fn unit_drops() {
        let c = path_hardy_from_drops(&[1.0; 5], 2.0).unwrap();
        assert_eq!(c.lhs, 55.0);
        assert_eq!(c.rhs, 5.0);
        let single = path_hardy_from_drops(&[0.7], 3.0).unwrap();
        assert_eq!(single.rhs, 0.0);
        assert!(single.holds);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(hardy_sequence_check(&[1.0, 0.0]).is_err());
        assert!(path_hardy_from_drops(&[1.0], 1.0).is_err());
    }

    proptest! {
        #[test]
        fn sequence_inequality(a in prop::collection::vec(-6.0f64..6.0, 1..60)) {
            let a: Vec<f64> = a.iter().map(|e| 10f64.powf(*e)).collect();
            prop_assert!(hardy_sequence_check(&a).unwrap().holds);
        }

        #[test]
        fn path_inequality(d in prop::collection::vec(-4.0f64..4.0, 1..60), q in 1.01f64..5.0) {
            let d: Vec<f64> = d.iter().map(|e| 10f64.powf(*e)).collect();
            prop_assert!(path_hardy_from_drops(&d, q).unwrap().holds);
        }
    }
}
