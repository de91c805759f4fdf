//! Empirical (3G) constants from sampled vertex triples.

use crate::error::{invalid, Result};
use crate::rng::{chunk_ranges, substream};
use crate::solver::DirichletProblem;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct ThreeGReport {
    /// max over triples of (1/g(x,y)) / (1/g(x,z) + 1/g(z,y)).
    pub kappa_sum: f64,
    /// max over triples of min{g(x,y), g(x,z)} / g(y,z).
    pub kappa_min: f64,
    pub triples: usize,
    /// Triples dropped because some Green value was zero.
    pub excluded: usize,
    pub pole_count: usize,
}

/// Required κ for one triple in both forms, given g(x,y), g(x,z), g(z,y) and g(y,z).
pub fn triple_kappas(gxy: f64, gxz: f64, gzy: f64, gyz: f64) -> Option<(f64, f64)> {
    if !(gxy > 0.0 && gxz > 0.0 && gzy > 0.0 && gyz > 0.0) {
        return None;
    }
    Some(((1.0 / gxy) / (1.0 / gxz + 1.0 / gzy), gxy.min(gxz) / gyz))
}

/// Samples `pole_count` vertices from `candidates` (default: the whole interior), computes their
/// Green columns, then draws `triples` ordered triples (with repetition) from that set.
pub fn three_g_constant(prob: &DirichletProblem, candidates: Option<&[usize]>, pole_count: usize, triples: usize, seed: u64) -> Result<ThreeGReport> {
    let interior = candidates.unwrap_or(prob.domain().interior());
    if interior.is_empty() || pole_count == 0 {
        return invalid("need at least one pole");
    }
    if let Some(v) = interior.iter().find(|&&v| !prob.domain().contains(v)) {
        return invalid(format!("candidate {v} is not interior"));
    }
    let poles: Vec<usize> = if pole_count >= interior.len() {
        interior.to_vec()
    } else {
        let mut rng = substream(seed, 0);
        rand::seq::index::sample(&mut rng, interior.len(), pole_count).into_iter().map(|i| interior[i]).collect()
    };
    let cols: Result<Vec<Vec<f64>>> = poles.par_iter().map(|&p| prob.green_vector(p).map(|s| s.values)).collect();
    let cols = cols?;
    let k = poles.len();
    let g = |a: usize, b: usize| cols[b][poles[a]];
    let parts: Vec<(f64, f64, usize, usize)> = chunk_ranges(triples)
        .into_par_iter()
        .enumerate()
        .map(|(c, range)| {
            let mut rng = substream(seed, 1 + c as u64);
            let mut acc = (0.0f64, 0.0f64, 0usize, 0usize);
            for _ in range {
                let (x, y, z) = (rng.random_range(0..k), rng.random_range(0..k), rng.random_range(0..k));
                match triple_kappas(g(x, y), g(x, z), g(z, y), g(y, z)) {
                    Some((a, b)) => {
                        acc.0 = acc.0.max(a);
                        acc.1 = acc.1.max(b);
                        acc.2 += 1;
                    }
                    None => acc.3 += 1,
                }
            }
            acc
        })
        .collect();
    let mut rep = ThreeGReport { kappa_sum: 0.0, kappa_min: 0.0, triples: 0, excluded: 0, pole_count: k };
    for (a, b, n, e) in parts {
        rep.kappa_sum = rep.kappa_sum.max(a);
        rep.kappa_min = rep.kappa_min.max(b);
        rep.triples += n;
        rep.excluded += e;
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_lattice, DomainSpec};

    #[test]
    fn coincident_points() {
        let (a, _) = triple_kappas(0.3, 0.9, 0.3, 0.3).unwrap();
        assert!(a <= 1.0);
        assert!(triple_kappas(0.0, 1.0, 1.0, 1.0).is_none());
    }

    fn segment_kappa(r: i32) -> f64 {
        let g = build_lattice(1, r as usize).unwrap();
        let o = g.vertex_at(&[0]).unwrap();
        let p = DirichletProblem::new(&g, DomainSpec::ball(&g, o, r as usize).unwrap()).unwrap();
        three_g_constant(&p, None, 1000, 20_000, 3).unwrap().kappa_sum
    }

    #[test]
    fn segment_kappa_grows() {
        assert!(segment_kappa(40) > 1.5 * segment_kappa(10));
    }

    #[test]
    fn deterministic_given_seed() {
        let g = build_lattice(3, 6).unwrap();
        let o = g.vertex_at(&[0, 0, 0]).unwrap();
        let p = DirichletProblem::new(&g, DomainSpec::ball(&g, o, 6).unwrap()).unwrap();
        let a = three_g_constant(&p, None, 20, 5000, 11).unwrap();
        let b = three_g_constant(&p, None, 20, 5000, 11).unwrap();
        assert_eq!(a.kappa_sum, b.kappa_sum);
        assert_eq!(a.triples + a.excluded, 5000);
    }
}
