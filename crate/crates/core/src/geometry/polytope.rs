use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::hull::{affine_basis, dot, facets, norm, project, sub, Point, HULL_TOL};
use crate::error::{Error, Result};
use crate::spectra::{sorted_desc, ProbabilityVector};

/// Largest `N` for which the face lattice is computed.
pub const FULL_LIMIT: usize = 5;
/// Largest `N` for which the vertex set alone is enumerated.
pub const VERTEX_LIMIT: usize = 8;
/// Components closer than this are treated as equal when deduplicating
/// permutations.
const DEDUP_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Combinatorics {
    VerticesOnly,
    Full,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Face {
    pub dim: usize,
    pub vertices: Vec<usize>,
}

/// Convex hull of all permutations of a spectrum. `faces` holds every face of
/// dimension `2 ..= dim − 1`; edges are listed separately.
#[derive(Debug, Clone, Serialize)]
pub struct Polytope {
    pub vertices: Vec<Vec<f64>>,
    pub edges: Vec<[usize; 2]>,
    pub faces: Vec<Face>,
    #[serde(skip)]
    dim: usize,
    #[serde(skip)]
    full: bool,
    #[serde(skip)]
    halfspaces: Vec<(Point, f64)>,
}

/// Distinct permutations of `d`, starting with `d` sorted descending.
fn distinct_permutations(d: &[f64]) -> Vec<Vec<f64>> {
    let sorted = sorted_desc(d);
    let mut values: Vec<f64> = Vec::new();
    let mut labels: Vec<usize> = Vec::with_capacity(sorted.len());
    for &x in &sorted {
        match values.last() {
            Some(&v) if (v - x).abs() <= DEDUP_TOL => {}
            _ => values.push(x),
        }
        labels.push(values.len() - 1);
    }
    let mut out = Vec::new();
    loop {
        out.push(labels.iter().map(|&l| values[l]).collect());
        // next lexicographic permutation of the label multiset
        let Some(i) = (0..labels.len().saturating_sub(1)).rev().find(|&i| labels[i] < labels[i + 1]) else {
            break;
        };
        let j = (i + 1..labels.len()).rev().find(|&j| labels[j] > labels[i]).unwrap();
        labels.swap(i, j);
        labels[i + 1..].reverse();
    }
    out
}

/// The polytope of spectra reachable from `d` by random fields.
pub fn future_polytope(d: &ProbabilityVector, depth: Combinatorics) -> Result<Polytope> {
    let n = d.len();
    if n > VERTEX_LIMIT {
        return Err(Error::TooLarge {
            what: "vertex enumeration",
            n,
            limit: VERTEX_LIMIT,
        });
    }
    if depth == Combinatorics::Full && n > FULL_LIMIT {
        return Err(Error::TooLarge {
            what: "face lattice",
            n,
            limit: FULL_LIMIT,
        });
    }
    let vertices = distinct_permutations(d.as_slice());
    let all: Vec<usize> = (0..vertices.len()).collect();
    let basis = affine_basis(&vertices, &all);
    let mut poly = Polytope {
        vertices,
        edges: Vec::new(),
        faces: Vec::new(),
        dim: basis.len(),
        full: depth == Combinatorics::Full,
        halfspaces: Vec::new(),
    };
    if depth == Combinatorics::VerticesOnly || poly.dim == 0 {
        return Ok(poly);
    }

    let origin = poly.vertices[0].clone();
    let local = project(&poly.vertices, &all, &origin, &basis);
    let top = facets(&local);
    for f in &top {
        let mut normal = vec![0.0; n];
        for (c, b) in f.normal.iter().zip(&basis) {
            normal.iter_mut().zip(b).for_each(|(x, y)| *x += c * y);
        }
        let offset = f.offset + dot(&normal, &origin);
        poly.halfspaces.push((normal, offset));
    }

    if poly.dim == 1 {
        poly.edges = vec![[top[0].members[0], top[1].members[0]]];
        return Ok(poly);
    }
    let mut levels: BTreeMap<usize, BTreeSet<Vec<usize>>> = BTreeMap::new();
    levels.insert(poly.dim - 1, top.into_iter().map(|f| f.members).collect());
    for j in (2..poly.dim).rev() {
        let mut below = BTreeSet::new();
        for face in &levels[&j] {
            let fb = affine_basis(&poly.vertices, face);
            let pts = project(&poly.vertices, face, &poly.vertices[face[0]], &fb);
            for r in facets(&pts) {
                below.insert(r.members.iter().map(|&i| face[i]).collect::<Vec<_>>());
            }
        }
        levels.insert(j - 1, below);
    }
    poly.edges = levels
        .get(&1)
        .map(|s| s.iter().map(|e| [e[0], e[1]]).collect())
        .unwrap_or_default();
    for (&dim, set) in levels.iter().rev() {
        if dim >= 2 {
            poly.faces.extend(set.iter().map(|v| Face { dim, vertices: v.clone() }));
        }
    }
    Ok(poly)
}

impl Polytope {
    /// Affine dimension of the vertex set.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Number of faces of dimension `dim`, counting vertices, edges and the
    /// polytope itself.
    pub fn face_count(&self, dim: usize) -> usize {
        match dim {
            0 => self.vertices.len(),
            1 => self.edges.len(),
            d if d == self.dim => 1,
            d => self.faces.iter().filter(|f| f.dim == d).count(),
        }
    }

    /// Faces of dimension `dim − 1`.
    pub fn facet_count(&self) -> usize {
        self.face_count(self.dim.saturating_sub(1))
    }

    /// `Σ_{j<dim} (−1)^j f_j`; equals `1 − (−1)^dim` for a convex polytope.
    pub fn euler_characteristic(&self) -> i64 {
        (0..self.dim)
            .map(|j| if j % 2 == 0 { 1 } else { -1 } * self.face_count(j) as i64)
            .sum()
    }

    /// Geometric membership through the facet inequalities.
    pub fn contains(&self, q: &[f64]) -> Result<bool> {
        if !self.full {
            return Err(Error::InvalidInput("membership needs the face lattice".into()));
        }
        if q.len() != self.vertices[0].len() {
            return Err(Error::LengthMismatch {
                left: q.len(),
                right: self.vertices[0].len(),
            });
        }
        if (q.iter().sum::<f64>() - 1.0).abs() > HULL_TOL {
            return Ok(false);
        }
        if self.dim == 0 {
            return Ok(norm(&sub(q, &self.vertices[0])) <= HULL_TOL);
        }
        Ok(self
            .halfspaces
            .iter()
            .all(|(n, off)| dot(n, q) <= off + HULL_TOL))
    }

    pub fn edge_length(&self, e: [usize; 2]) -> f64 {
        norm(&sub(&self.vertices[e[0]], &self.vertices[e[1]]))
    }

    /// `max − min` over all edge lengths.
    pub fn edge_length_spread(&self) -> f64 {
        let (lo, hi) = self.edges.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), &e| {
            let l = self.edge_length(e);
            (lo.min(l), hi.max(l))
        });
        if self.edges.is_empty() {
            0.0
        } else {
            hi - lo
        }
    }

    /// Vertices of a two-dimensional face in boundary order.
    pub fn polygon_cycle(&self, face: &[usize]) -> Option<Vec<usize>> {
        let inside = |v: usize| face.contains(&v);
        let nbrs = |v: usize| -> Vec<usize> {
            self.edges
                .iter()
                .filter_map(|&[a, b]| {
                    if a == v && inside(b) {
                        Some(b)
                    } else if b == v && inside(a) {
                        Some(a)
                    } else {
                        None
                    }
                })
                .collect()
        };
        let mut cycle = vec![face[0]];
        let mut prev = usize::MAX;
        let mut cur = face[0];
        loop {
            let ns = nbrs(cur);
            if ns.len() != 2 {
                return None;
            }
            let next = if ns[0] != prev { ns[0] } else { ns[1] };
            if next == face[0] {
                break;
            }
            if cycle.len() > face.len() {
                return None;
            }
            cycle.push(next);
            prev = cur;
            cur = next;
        }
        (cycle.len() == face.len()).then_some(cycle)
    }

    /// Equal sides and equal interior angles, each within `tol`.
    pub fn is_regular_polygon(&self, face: &[usize], tol: f64) -> bool {
        let Some(cycle) = self.polygon_cycle(face) else {
            return false;
        };
        let m = cycle.len();
        let mut sides = Vec::with_capacity(m);
        let mut angles = Vec::with_capacity(m);
        for k in 0..m {
            let (a, v, b) = (cycle[(k + m - 1) % m], cycle[k], cycle[(k + 1) % m]);
            let (x, y) = (sub(&self.vertices[a], &self.vertices[v]), sub(&self.vertices[b], &self.vertices[v]));
            sides.push(norm(&y));
            angles.push((dot(&x, &y) / (norm(&x) * norm(&y))).clamp(-1.0, 1.0).acos());
        }
        let spread = |v: &[f64]| v.iter().cloned().fold(f64::NEG_INFINITY, f64::max) - v.iter().cloned().fold(f64::INFINITY, f64::min);
        spread(&sides) <= tol && spread(&angles) <= tol
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::arch_line_point;
    use crate::majorize::majorizes;

    fn pv(v: &[f64]) -> ProbabilityVector {
        ProbabilityVector::new(v.to_vec()).unwrap()
    }

    #[test]
    fn permutation_counts() {
        assert_eq!(distinct_permutations(&[0.4, 0.3, 0.2, 0.1]).len(), 24);
        assert_eq!(distinct_permutations(&[0.4, 0.4, 0.2]).len(), 3);
        assert_eq!(distinct_permutations(&[0.3, 0.3, 0.2, 0.2]).len(), 6);
        assert_eq!(distinct_permutations(&[0.25; 4]).len(), 1);
        assert_eq!(distinct_permutations(&[0.4, 0.3, 0.2, 0.1])[0], vec![0.4, 0.3, 0.2, 0.1]);
    }

    #[test]
    fn generic_n4_counts() {
        let p = future_polytope(&pv(&[0.4, 0.3, 0.2, 0.1]), Combinatorics::Full).unwrap();
        assert_eq!((p.vertex_count(), p.edge_count(), p.facet_count()), (24, 36, 14));
        assert_eq!(p.euler_characteristic(), 2);
    }

    #[test]
    fn generic_n5_counts() {
        let p = future_polytope(&pv(&[0.35, 0.25, 0.2, 0.12, 0.08]), Combinatorics::Full).unwrap();
        assert_eq!(p.vertex_count(), 120);
        assert_eq!(p.edge_count(), 120 * 4 / 2);
        assert_eq!(p.facet_count(), 30);
        assert_eq!(p.euler_characteristic(), 0);
    }

    #[test]
    fn n3_hexagon_and_triangle() {
        let h = future_polytope(&pv(&[0.5, 0.3, 0.2]), Combinatorics::Full).unwrap();
        assert_eq!((h.dim(), h.vertex_count(), h.edge_count()), (2, 6, 6));
        let all: Vec<usize> = (0..6).collect();
        assert!(!h.is_regular_polygon(&all, 1e-9));
        let r = future_polytope(&pv(&[1.0 / 3.0 + 0.2, 1.0 / 3.0, 1.0 / 3.0 - 0.2]), Combinatorics::Full).unwrap();
        assert!(r.is_regular_polygon(&all, 1e-9));
        let t = future_polytope(&pv(&[0.4, 0.4, 0.2]), Combinatorics::Full).unwrap();
        assert_eq!((t.vertex_count(), t.edge_count()), (3, 3));
        assert!(t.is_regular_polygon(&[0, 1, 2], 1e-9));
    }

    #[test]
    fn truncated_octahedron_on_arch_line() {
        for x in [0.25, 0.5, 1.0] {
            let p = future_polytope(&arch_line_point(x).unwrap(), Combinatorics::Full).unwrap();
            let hex = p.faces.iter().filter(|f| f.vertices.len() == 6).count();
            let sq = p.faces.iter().filter(|f| f.vertices.len() == 4).count();
            assert_eq!((hex, sq), (8, 6));
            assert!(p.faces.iter().all(|f| p.is_regular_polygon(&f.vertices, 1e-9)));
            assert!(p.edge_length_spread() <= 1e-9);
        }
    }

    #[test]
    fn degenerate_and_tiny_cases() {
        let u = future_polytope(&ProbabilityVector::uniform(4), Combinatorics::Full).unwrap();
        assert_eq!((u.dim(), u.vertex_count(), u.edge_count()), (0, 1, 0));
        assert!(u.contains(&[0.25; 4]).unwrap());
        let s = future_polytope(&pv(&[0.7, 0.3]), Combinatorics::Full).unwrap();
        assert_eq!((s.dim(), s.vertex_count(), s.edge_count()), (1, 2, 1));
        let o = future_polytope(&pv(&[0.3, 0.3, 0.2, 0.2]), Combinatorics::Full).unwrap();
        assert_eq!((o.vertex_count(), o.edge_count(), o.facet_count()), (6, 12, 8));
    }

    #[test]
    fn size_limits() {
        let d6 = ProbabilityVector::uniform(6);
        assert!(matches!(future_polytope(&d6, Combinatorics::Full), Err(Error::TooLarge { .. })));
        assert!(future_polytope(&d6, Combinatorics::VerticesOnly).is_ok());
        let d9 = ProbabilityVector::uniform(9);
        assert!(matches!(future_polytope(&d9, Combinatorics::VerticesOnly), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn membership_agrees_with_majorization() {
        for d in [vec![0.5, 0.3, 0.2], vec![0.6, 0.4, 0.0], vec![0.4, 0.3, 0.2, 0.1], vec![0.5, 1.0 / 3.0, 1.0 / 6.0, 0.0]] {
            let d = pv(&d);
            let p = future_polytope(&d, Combinatorics::Full).unwrap();
            let n = d.len();
            let res = 12usize;
            let mut idx = vec![0usize; n - 1];
            loop {
                let used: usize = idx.iter().sum();
                if used <= res {
                    let mut q: Vec<f64> = idx.iter().map(|&k| k as f64 / res as f64).collect();
                    q.push((res - used) as f64 / res as f64);
                    let q = ProbabilityVector::new(q).unwrap();
                    assert_eq!(p.contains(q.as_slice()).unwrap(), majorizes(&q, &d).unwrap(), "{:?}", q.as_slice());
                }
                let mut k = 0;
                while k < n - 1 {
                    idx[k] += 1;
                    if idx[k] <= res {
                        break;
                    }
                    idx[k] = 0;
                    k += 1;
                }
                if k == n - 1 {
                    break;
                }
            }
        }
    }

    #[test]
    fn serializes_three_keys() {
        let p = future_polytope(&pv(&[0.5, 0.3, 0.2]), Combinatorics::Full).unwrap();
        let v = serde_json::to_value(&p).unwrap();
        let mut keys: Vec<_> = v.as_object().unwrap().keys().cloned().collect();
        keys.sort();
        assert_eq!(keys, vec!["edges", "faces", "vertices"]);
    }
}
