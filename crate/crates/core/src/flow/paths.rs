//! Random o→∂ paths drawn with transition probabilities p(x,y) = θ_xy/θ⁺(x).

use super::current::UnitFlow;
use crate::error::{Error, Result};
use crate::rng::{chunk_ranges, substream};
use rand::Rng;
use rayon::prelude::*;

#[derive(Debug, Clone, PartialEq)]
pub struct SampledPath {
    /// Local vertex ids x_0 = o, …, x_m = ∂.
    pub vertices: Vec<usize>,
    /// Directed edge ids e_i = (x_i, x_{i+1}).
    pub edges: Vec<usize>,
    /// V_i = g(x_i), with V_m = 0.
    pub voltages: Vec<f64>,
    /// Graph distance of each x_i from the pole.
    pub distances: Vec<usize>,
}

impl SampledPath {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// δ_i = V_i − V_{i+1}.
    pub fn drops(&self) -> Vec<f64> {
        self.voltages.windows(2).map(|w| w[0] - w[1]).collect()
    }

    /// τ_n: first index whose vertex lies on the sphere S_n.
    pub fn first_exit(&self, n: usize) -> Option<usize> {
        self.distances.iter().position(|&d| d == n)
    }
}

/// Cumulative transition probabilities per vertex, so that a step costs one binary search.
pub struct PathSampler<'a> {
    flow: &'a UnitFlow,
    cumulative: Vec<f64>,
}

impl<'a> PathSampler<'a> {
    pub fn new(flow: &'a UnitFlow) -> Self {
        let mut cumulative = vec![0.0; flow.num_edges()];
        for v in 0..flow.num_vertices() {
            let out = flow.outflow(v);
            let mut acc = 0.0;
            for e in flow.out_edges(v) {
                acc += flow.current(e) / out;
                cumulative[e] = acc;
            }
        }
        PathSampler { flow, cumulative }
    }

    pub fn sample(&self, rng: &mut impl Rng) -> Result<SampledPath> {
        let f = self.flow;
        let mut v = f.source;
        let mut path = SampledPath { vertices: vec![v], edges: Vec::new(), voltages: vec![f.voltage(v)], distances: vec![f.distance(v)] };
        while v != f.sink {
            let r = f.out_edges(v);
            if r.is_empty() {
                return Err(Error::Invariant(format!("path stuck at vertex {v} with zero outflow")));
            }
            let u: f64 = rng.random();
            let slice = &self.cumulative[r.clone()];
            let k = slice.partition_point(|&c| c <= u).min(slice.len() - 1);
            let e = r.start + k;
            v = f.head(e);
            path.edges.push(e);
            path.vertices.push(v);
            path.voltages.push(f.voltage(v));
            path.distances.push(f.distance(v));
        }
        Ok(path)
    }
}

/// One path drawn from the seeded stream.
pub fn sample_path(flow: &UnitFlow, seed: u64) -> Result<SampledPath> {
    PathSampler::new(flow).sample(&mut substream(seed, 0))
}

/// Draws `count` paths in fixed chunks with per-chunk substreams and maps each through `f`.
/// The output order, and hence any reduction over it, is independent of the thread count.
pub fn sample_map<T: Send>(flow: &UnitFlow, count: usize, seed: u64, f: impl Fn(&SampledPath) -> T + Sync) -> Result<Vec<T>> {
    let sampler = PathSampler::new(flow);
    let chunks: Result<Vec<Vec<T>>> = chunk_ranges(count)
        .into_par_iter()
        .enumerate()
        .map(|(c, range)| {
            let mut rng = substream(seed, c as u64);
            range.map(|_| sampler.sample(&mut rng).map(|p| f(&p))).collect()
        })
        .collect();
    Ok(chunks?.into_iter().flatten().collect())
}

/// Monte Carlo edge-usage frequencies with binomial standard errors.
pub fn edge_marginals_mc(flow: &UnitFlow, count: usize, seed: u64) -> Result<(Vec<f64>, Vec<f64>)> {
    let used = sample_map(flow, count, seed, |p| p.edges.clone())?;
    let mut hits = vec![0u64; flow.num_edges()];
    for path in used {
        for e in path {
            hits[e] += 1;
        }
    }
    let n = count as f64;
    let freq: Vec<f64> = hits.iter().map(|&h| h as f64 / n).collect();
    let se = freq.iter().map(|&p| (p * (1.0 - p) / n).sqrt()).collect();
    Ok((freq, se))
}
