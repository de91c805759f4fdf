//! Unit current induced by a Green voltage, with the exterior collapsed to a single sink.

use crate::error::{Error, Result};
use crate::graph::{bfs_distances, DomainKind, DomainSpec, WeightedGraph};
use crate::solver::GreenSolution;
use serde::Serialize;

/// Drops at or below this fraction of g(o) are treated as zero.
pub const ZERO_DROP: f64 = 1e-14;
/// Absolute tolerance for conservation and unit strength.
pub const FLOW_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Default, Serialize)]
pub struct FlowReport {
    pub num_edges: usize,
    pub dropped_edges: usize,
    pub source_out: f64,
    pub source_in: f64,
    pub sink_in: f64,
    pub sink_out: f64,
    pub max_conservation_error: f64,
    pub acyclic: bool,
}

impl FlowReport {
    pub fn valid(&self) -> bool {
        self.acyclic
            && (self.source_out - 1.0).abs() <= FLOW_TOL
            && self.source_in == 0.0
            && (self.sink_in - 1.0).abs() <= FLOW_TOL
            && self.sink_out == 0.0
            && self.max_conservation_error <= FLOW_TOL
    }
}

/// Directed acyclic unit flow from the pole to the collapsed sink. Vertices are local indices:
/// interior vertices in domain order, then the sink.
#[derive(Debug, Clone)]
pub struct UnitFlow {
    pub source: usize,
    pub sink: usize,
    graph_ids: Vec<usize>,
    voltage: Vec<f64>,
    dist: Vec<usize>,
    offsets: Vec<usize>,
    heads: Vec<u32>,
    theta: Vec<f64>,
    cond: Vec<f64>,
    out_total: Vec<f64>,
    in_total: Vec<f64>,
    order: Vec<usize>,
    pub report: FlowReport,
    /// Radius R of the ball domain the flow came from, if any.
    pub ball_radius: Option<usize>,
}

impl UnitFlow {
    pub fn num_vertices(&self) -> usize {
        self.voltage.len()
    }

    pub fn num_edges(&self) -> usize {
        self.heads.len()
    }

    pub fn voltage(&self, v: usize) -> f64 {
        self.voltage[v]
    }

    /// Graph distance from the pole; the sink sits at the ball radius.
    pub fn distance(&self, v: usize) -> usize {
        self.dist[v]
    }

    pub fn graph_id(&self, v: usize) -> Option<usize> {
        self.graph_ids.get(v).copied()
    }

    /// Directed edge ids leaving `v`.
    pub fn out_edges(&self, v: usize) -> std::ops::Range<usize> {
        self.offsets[v]..self.offsets[v + 1]
    }

    pub fn head(&self, e: usize) -> usize {
        self.heads[e] as usize
    }

    pub fn tail(&self, e: usize) -> usize {
        self.offsets.partition_point(|&o| o <= e) - 1
    }

    pub fn current(&self, e: usize) -> f64 {
        self.theta[e]
    }

    /// Conductance μ_e of the collapsed network.
    pub fn conductance(&self, e: usize) -> f64 {
        self.cond[e]
    }

    pub fn outflow(&self, v: usize) -> f64 {
        self.out_total[v]
    }

    pub fn inflow(&self, v: usize) -> f64 {
        self.in_total[v]
    }

    /// Vertices by decreasing voltage, ties by index; every edge points forward in this order.
    pub fn topological_order(&self) -> &[usize] {
        &self.order
    }
}

/// Orients θ_xy = μ_xy |g(x) − g(y)| downhill and verifies the unit-flow invariants.
pub fn orient_current(graph: &WeightedGraph, dom: &DomainSpec, gs: &GreenSolution) -> Result<UnitFlow> {
    let n_int = dom.len();
    let sink = n_int;
    let source = dom.local(gs.pole).ok_or_else(|| Error::InvalidArgument("pole outside domain".into()))?;
    let g = &gs.values;
    let thr = ZERO_DROP * g[gs.pole];
    let mut voltage: Vec<f64> = dom.interior().iter().map(|&x| g[x]).collect();
    voltage.push(0.0);
    let (radius, gd) = match dom.kind() {
        DomainKind::Ball { radius, .. } => (Some(*radius), bfs_distances(graph, gs.pole, *radius)),
        _ => (None, bfs_distances(graph, gs.pole, usize::MAX)),
    };
    let mut dist: Vec<usize> = dom.interior().iter().map(|&x| gd[x]).collect();
    dist.push(radius.unwrap_or_else(|| dist.iter().copied().max().unwrap_or(0) + 1));

    let mut offsets = vec![0usize];
    let mut heads = Vec::new();
    let mut theta = Vec::new();
    let mut cond = Vec::new();
    let mut dropped = 0usize;
    let mut in_total = vec![0.0; n_int + 1];
    let mut out_total = vec![0.0; n_int + 1];
    for (i, &x) in dom.interior().iter().enumerate() {
        let mut to_sink = 0.0;
        for (y, w) in graph.neighbors(x) {
            match dom.local(y) {
                Some(j) => {
                    let drop = g[x] - g[y];
                    if drop.abs() <= thr {
                        if j > i {
                            dropped += 1;
                        }
                    } else if drop > 0.0 {
                        heads.push(j as u32);
                        theta.push(w * drop);
                        cond.push(w);
                    }
                }
                None => to_sink += w,
            }
        }
        if to_sink > 0.0 {
            if g[x] <= thr {
                dropped += 1;
            } else {
                heads.push(sink as u32);
                theta.push(to_sink * g[x]);
                cond.push(to_sink);
            }
        }
        offsets.push(heads.len());
    }
    offsets.push(heads.len());
    for v in 0..n_int {
        for e in offsets[v]..offsets[v + 1] {
            out_total[v] += theta[e];
            in_total[heads[e] as usize] += theta[e];
        }
    }
    let mut order: Vec<usize> = (0..=n_int).collect();
    order.sort_by(|&a, &b| voltage[b].partial_cmp(&voltage[a]).unwrap().then(a.cmp(&b)));
    let mut pos = vec![0usize; n_int + 1];
    for (k, &v) in order.iter().enumerate() {
        pos[v] = k;
    }
    let acyclic = (0..n_int).all(|v| (offsets[v]..offsets[v + 1]).all(|e| pos[heads[e] as usize] > pos[v]));
    let max_conservation_error = (0..n_int).filter(|&v| v != source).map(|v| (out_total[v] - in_total[v]).abs()).fold(0.0, f64::max);
    let report = FlowReport {
        num_edges: heads.len(),
        dropped_edges: dropped,
        source_out: out_total[source],
        source_in: in_total[source],
        sink_in: in_total[sink],
        sink_out: out_total[sink],
        max_conservation_error,
        acyclic,
    };
    if !acyclic {
        return Err(Error::Invariant("oriented current contains a cycle".into()));
    }
    if !report.valid() {
        return Err(Error::Invariant(format!(
            "unit flow check failed: source out {:.3e}, sink in {:.3e}, conservation error {:.3e}",
            report.source_out, report.sink_in, report.max_conservation_error
        )));
    }
    Ok(UnitFlow {
        source,
        sink,
        graph_ids: dom.interior().to_vec(),
        voltage,
        dist,
        offsets,
        heads,
        theta,
        cond,
        out_total,
        in_total,
        order,
        report,
        ball_radius: radius,
    })
}

/// Exact probability that the path measure uses each directed edge, by propagating the visit
/// probability r along the topological order: P(e) = r(tail)·θ_e/θ⁺(tail).
pub fn edge_marginals_exact(flow: &UnitFlow) -> Result<Vec<f64>> {
    let mut r = vec![0.0; flow.num_vertices()];
    r[flow.source] = 1.0;
    let mut marg = vec![0.0; flow.num_edges()];
    for &v in flow.topological_order() {
        if v == flow.sink || r[v] == 0.0 {
            continue;
        }
        let out = flow.outflow(v);
        if !(out > 0.0) {
            return Err(Error::Invariant(format!("vertex {v} is reached but has no outflow")));
        }
        for e in flow.out_edges(v) {
            let p = r[v] * flow.current(e) / out;
            marg[e] = p;
            r[flow.head(e)] += p;
        }
    }
    Ok(marg)
}
