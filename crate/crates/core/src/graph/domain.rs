use super::{bfs_distances, WeightedGraph};
use crate::error::{invalid, Error, Result};
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum DomainKind {
    /// Interior {x : d(center, x) < radius}; boundary is the sphere of the given radius.
    Ball { center: usize, radius: usize },
    Orthant { k: usize },
    Explicit,
}

/// A finite Dirichlet domain Ω with its vertex boundary ∂Ω.
#[derive(Debug, Clone)]
pub struct DomainSpec {
    kind: DomainKind,
    interior: Vec<usize>,
    local: Vec<u32>,
    boundary: Vec<usize>,
}

const NONE: u32 = u32::MAX;

impl DomainSpec {
    pub fn from_mask(g: &WeightedGraph, kind: DomainKind, mask: &[bool]) -> Result<Self> {
        if mask.len() != g.num_vertices() {
            return invalid("mask length differs from vertex count");
        }
        let mut local = vec![NONE; mask.len()];
        let mut interior = Vec::new();
        for (x, &m) in mask.iter().enumerate() {
            if m {
                local[x] = interior.len() as u32;
                interior.push(x);
            }
        }
        let mut on_bdry = vec![false; mask.len()];
        for &x in &interior {
            for (y, _) in g.neighbors(x) {
                if !mask[y] {
                    on_bdry[y] = true;
                }
            }
        }
        let boundary = (0..mask.len()).filter(|&y| on_bdry[y]).collect();
        Ok(DomainSpec { kind, interior, local, boundary })
    }

    pub fn explicit(g: &WeightedGraph, vertices: &[usize]) -> Result<Self> {
        let mut mask = vec![false; g.num_vertices()];
        for &v in vertices {
            if v >= mask.len() {
                return invalid(format!("vertex {v} not in graph"));
            }
            mask[v] = true;
        }
        Self::from_mask(g, DomainKind::Explicit, &mask)
    }

    /// Ball B(center, radius) with interior {d < radius}. On lattice truncations the sphere of
    /// the requested radius must be fully stored.
    pub fn ball(g: &WeightedGraph, center: usize, radius: usize) -> Result<Self> {
        if center >= g.num_vertices() {
            return invalid(format!("center {center} not in graph"));
        }
        if let (Some(safe), Some(c)) = (g.safe_radius(), g.coord(center)) {
            let off = c.iter().map(|v| v.unsigned_abs() as usize).sum::<usize>();
            if off + radius > safe + 1 {
                return Err(Error::Censored { requested: off + radius, safe: safe + 1 });
            }
        }
        let dist = bfs_distances(g, center, radius);
        let mask: Vec<bool> = dist.iter().map(|&d| d < radius).collect();
        Self::from_mask(g, DomainKind::Ball { center, radius }, &mask)
    }

    pub fn kind(&self) -> &DomainKind {
        &self.kind
    }

    /// Interior vertices in increasing graph index.
    pub fn interior(&self) -> &[usize] {
        &self.interior
    }

    pub fn boundary(&self) -> &[usize] {
        &self.boundary
    }

    pub fn len(&self) -> usize {
        self.interior.len()
    }

    pub fn is_empty(&self) -> bool {
        self.interior.is_empty()
    }

    /// Position of vertex `x` in the interior list.
    pub fn local(&self, x: usize) -> Option<usize> {
        match self.local.get(x) {
            Some(&l) if l != NONE => Some(l as usize),
            _ => None,
        }
    }

    pub fn contains(&self, x: usize) -> bool {
        self.local(x).is_some()
    }

    /// Subset test on interiors.
    pub fn is_subset_of(&self, other: &DomainSpec) -> bool {
        self.interior.iter().all(|&x| other.contains(x))
    }

    /// Extends an interior vector to the whole graph with zeros outside Ω.
    pub fn extend(&self, n: usize, vals: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; n];
        for (i, &x) in self.interior.iter().enumerate() {
            out[x] = vals[i];
        }
        out
    }
}
