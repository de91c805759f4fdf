//! Killed random-walk partial sums Σ_{n≤N} p_n^Ω(pole, ·), used only as a cross-check oracle.

use super::dirichlet::PotentialField;
use crate::error::{invalid, Result};
use crate::graph::{DomainSpec, WeightedGraph};

/// Partial sums of the killed heat kernel p_n^Ω(pole,x) = P^n(pole,x)/μ(x) for n = 0..=n_steps.
pub fn heat_kernel_green(g: &WeightedGraph, dom: &DomainSpec, pole: usize, n_steps: usize) -> Result<PotentialField> {
    if !dom.contains(pole) {
        return invalid(format!("pole {pole} is not an interior vertex"));
    }
    let n = g.num_vertices();
    let mut mass = vec![0.0; n];
    let mut next = vec![0.0; n];
    let mut acc = vec![0.0; n];
    mass[pole] = 1.0;
    for step in 0..=n_steps {
        for &x in dom.interior() {
            acc[x] += mass[x] / g.measure(x);
        }
        if step == n_steps {
            break;
        }
        next.iter_mut().for_each(|v| *v = 0.0);
        for &x in dom.interior() {
            if mass[x] == 0.0 {
                continue;
            }
            let m = mass[x] / g.measure(x);
            for (y, w) in g.neighbors(x) {
                if dom.contains(y) {
                    next[y] += m * w;
                }
            }
        }
        std::mem::swap(&mut mass, &mut next);
    }
    Ok(PotentialField::new(format!("heat kernel partial sum N={n_steps}"), acc))
}
