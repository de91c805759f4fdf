use super::{BoxIndex, DomainKind, DomainSpec, WeightedGraph};
use crate::error::{invalid, Error, Result};

/// Vertex cap for lattice builders, read from `GREENLANE_MAX_VERTICES` (default 5 000 000).
pub fn max_vertices() -> usize {
    std::env::var("GREENLANE_MAX_VERTICES").ok().and_then(|s| s.parse().ok()).unwrap_or(5_000_000)
}

/// Number of points of ℤᵈ at ℓ¹ distance ≤ r from the origin: Σ_k 2^k C(d,k) C(r,k).
pub fn l1_ball_size(d: usize, r: usize) -> u128 {
    let mut total = 0u128;
    let mut cd = 1u128;
    let mut cr = 1u128;
    for k in 0..=d.min(r) {
        total += (1u128 << k) * cd * cr;
        cd = cd * (d - k) as u128 / (k + 1) as u128;
        cr = cr * (r - k) as u128 / (k + 1) as u128;
    }
    total
}

/// Unit-conductance subgraph of ℤᵈ induced by the points of the box `[lo, hi]` accepted by `include`.
/// Vertices are numbered in lexicographic coordinate order.
pub fn lattice_region(d: usize, lo: &[i32], hi: &[i32], include: impl Fn(&[i32]) -> bool, safe_radius: Option<usize>) -> Result<WeightedGraph> {
    if d == 0 || lo.len() != d || hi.len() != d {
        return invalid("box dimensions do not match d");
    }
    let ext: Vec<usize> = (0..d).map(|i| (hi[i] - lo[i] + 1).max(0) as usize).collect();
    let cells = ext.iter().try_fold(1usize, |a, &e| a.checked_mul(e));
    let cap = max_vertices();
    let cells = match cells {
        Some(c) if c <= cap.saturating_mul(8) => c,
        _ => return Err(Error::Resource(format!("bounding box too large for vertex cap {cap}"))),
    };
    let mut map = vec![u32::MAX; cells];
    let mut coords = Vec::new();
    let mut c = lo.to_vec();
    let mut n = 0usize;
    for slot in map.iter_mut() {
        if include(&c) {
            if n >= cap {
                return Err(Error::Resource(format!("more than {cap} vertices")));
            }
            *slot = n as u32;
            coords.extend_from_slice(&c);
            n += 1;
        }
        for i in (0..d).rev() {
            if c[i] < hi[i] {
                c[i] += 1;
                break;
            }
            c[i] = lo[i];
        }
    }
    let index = BoxIndex { lo: lo.to_vec(), ext, map };
    let mut offsets = Vec::with_capacity(n + 1);
    let mut adj = Vec::new();
    offsets.push(0);
    let mut nb = vec![0i32; d];
    for x in 0..n {
        let cx = &coords[x * d..(x + 1) * d];
        let mut row: Vec<u32> = Vec::with_capacity(2 * d);
        for i in 0..d {
            for s in [-1, 1] {
                nb.copy_from_slice(cx);
                nb[i] += s;
                if let Some(off) = index.offset(&nb) {
                    if index.map[off] != u32::MAX {
                        row.push(index.map[off]);
                    }
                }
            }
        }
        row.sort_unstable();
        adj.extend_from_slice(&row);
        offsets.push(adj.len());
    }
    let wts = vec![1.0; adj.len()];
    Ok(WeightedGraph::assemble(offsets, adj, wts, d, coords, Some(index), safe_radius))
}

/// The ℓ¹-ball of the given radius in ℤᵈ with unit conductances.
/// Measures are exact (2d) strictly inside the ball, so the safe radius is `radius − 1`.
pub fn build_lattice(d: usize, radius: usize) -> Result<WeightedGraph> {
    if d == 0 || radius == 0 {
        return invalid("build_lattice needs d ≥ 1 and radius ≥ 1");
    }
    let size = l1_ball_size(d, radius);
    if size > max_vertices() as u128 {
        return Err(Error::Resource(format!("ℓ¹ ball has {size} vertices, cap is {}", max_vertices())));
    }
    let r = radius as i32;
    let lo = vec![-r; d];
    let hi = vec![r; d];
    lattice_region(d, &lo, &hi, |c| c.iter().map(|v| v.abs()).sum::<i32>() <= r, Some(radius - 1))
}

/// Truncation of the k-orthant {x_1, …, x_k ≥ 1}: constrained axes run over 1..=ext[i],
/// free axes over −ext[i]..=ext[i].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrthantBox {
    pub d: usize,
    pub k: usize,
    pub ext: Vec<usize>,
}

impl OrthantBox {
    pub fn new(d: usize, k: usize, ext: Vec<usize>) -> Result<Self> {
        if k < 1 || k > d {
            return invalid(format!("orthant needs 1 ≤ k ≤ d, got k={k}, d={d}"));
        }
        if ext.len() != d || ext.iter().any(|&e| e < 2) {
            return invalid("orthant box needs d extents, each ≥ 2");
        }
        Ok(OrthantBox { d, k, ext })
    }

    pub fn cube(d: usize, k: usize, side: usize) -> Result<Self> {
        Self::new(d, k, vec![side; d])
    }

    pub fn contains(&self, c: &[i32]) -> bool {
        c.iter().enumerate().all(|(i, &v)| {
            let e = self.ext[i] as i32;
            if i < self.k { (1..=e).contains(&v) } else { (-e..=e).contains(&v) }
        })
    }
}

/// Graph covering the orthant truncation plus its boundary layer, and the Dirichlet domain on it.
pub fn build_orthant(spec: &OrthantBox) -> Result<(WeightedGraph, DomainSpec)> {
    let d = spec.d;
    let lo: Vec<i32> = (0..d).map(|i| if i < spec.k { 0 } else { -(spec.ext[i] as i32) - 1 }).collect();
    let hi: Vec<i32> = spec.ext.iter().map(|&e| e as i32 + 1).collect();
    let include = |c: &[i32]| {
        if spec.contains(c) {
            return true;
        }
        let mut nb = c.to_vec();
        for i in 0..d {
            for s in [-1, 1] {
                nb[i] += s;
                let hit = spec.contains(&nb);
                nb[i] -= s;
                if hit {
                    return true;
                }
            }
        }
        false
    };
    let g = lattice_region(d, &lo, &hi, include, None)?;
    let mask: Vec<bool> = (0..g.num_vertices()).map(|x| spec.contains(g.coord(x).unwrap())).collect();
    let dom = DomainSpec::from_mask(&g, DomainKind::Orthant { k: spec.k }, &mask)?;
    Ok((g, dom))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_graph() {
        let g = build_lattice(1, 3).unwrap();
        assert_eq!(g.num_vertices(), 7);
        assert_eq!(g.num_edges(), 6);
        let o = g.vertex_at(&[0]).unwrap();
        assert_eq!(g.measure(o), 2.0);
        assert_eq!(g.measure(g.vertex_at(&[3]).unwrap()), 1.0);
    }

    #[test]
    fn small_balls_match_enumeration() {
        let g = build_lattice(2, 1).unwrap();
        assert_eq!(g.num_vertices(), 5);
        assert_eq!(g.measure(g.vertex_at(&[0, 0]).unwrap()), 4.0);
        let g3 = build_lattice(3, 2).unwrap();
        let brute = (-2..=2i32)
            .flat_map(|a| (-2..=2i32).flat_map(move |b| (-2..=2i32).map(move |c| a.abs() + b.abs() + c.abs())))
            .filter(|&s| s <= 2)
            .count();
        assert_eq!(g3.num_vertices(), brute);
        assert_eq!(brute, 25);
        for d in 1..5 {
            for r in 0..6 {
                let cnt = (0..(2 * r + 1usize).pow(d as u32))
                    .filter(|&mut_i| {
                        let mut i = mut_i;
                        let mut s = 0;
                        for _ in 0..d {
                            s += ((i % (2 * r + 1)) as i64 - r as i64).abs();
                            i /= 2 * r + 1;
                        }
                        s <= r as i64
                    })
                    .count();
                assert_eq!(l1_ball_size(d, r), cnt as u128, "d={d} r={r}");
            }
        }
    }

    #[test]
    fn interior_measure_is_2d() {
        let g = build_lattice(3, 4).unwrap();
        for x in 0..g.num_vertices() {
            let n: i32 = g.coord(x).unwrap().iter().map(|v| v.abs()).sum();
            if n < 4 {
                assert_eq!(g.measure(x), 6.0);
            }
        }
        assert!(g.check_symmetry());
    }

    #[test]
    fn resource_cap() {
        assert!(matches!(build_lattice(6, 400), Err(Error::Resource(_))));
    }

    #[test]
    fn half_space_box() {
        let (g, dom) = build_orthant(&OrthantBox::cube(3, 1, 4).unwrap()).unwrap();
        assert_eq!(dom.interior().len(), 4 * 9 * 9);
        for &x in dom.interior() {
            let c = g.coord(x).unwrap();
            assert!((1..=4).contains(&c[0]));
        }
        let wall = g.vertex_at(&[0, 2, -3]).unwrap();
        assert!(dom.boundary().contains(&wall));
    }

    #[test]
    fn full_orthant_box() {
        let (_, dom) = build_orthant(&OrthantBox::cube(3, 3, 3).unwrap()).unwrap();
        assert_eq!(dom.interior().len(), 27);
        let (g, dom) = build_orthant(&OrthantBox::new(4, 2, vec![3, 3, 2, 2]).unwrap()).unwrap();
        for &x in dom.interior() {
            let c = g.coord(x).unwrap();
            assert!(c[0] >= 1 && c[1] >= 1);
        }
        assert!(OrthantBox::cube(3, 0, 3).is_err());
        assert!(OrthantBox::cube(3, 4, 3).is_err());
    }
}
