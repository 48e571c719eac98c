//! Facets of small full-dimensional point sets by recursive gift wrapping.
//!
//! Facets are kept as point sets, so non-simplicial faces (hexagons, squares)
//! come out whole. Ridges of a facet are found by running the same routine
//! inside the facet's own affine span.

use std::collections::{HashSet, VecDeque};

pub(crate) const HULL_TOL: f64 = 1e-9;

pub(crate) type Point = Vec<f64>;

/// Supporting hyperplane `normal · x = offset` with every point on the
/// `≤` side; `members` lists the points lying on it, ascending.
#[derive(Debug, Clone)]
pub(crate) struct Facet {
    pub members: Vec<usize>,
    pub normal: Point,
    pub offset: f64,
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn sub(a: &[f64], b: &[f64]) -> Point {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn centroid(points: &[Point], idx: &[usize]) -> Point {
    let mut c = vec![0.0; points[idx[0]].len()];
    for &i in idx {
        for (ck, pk) in c.iter_mut().zip(&points[i]) {
            *ck += pk;
        }
    }
    c.iter_mut().for_each(|x| *x /= idx.len() as f64);
    c
}

/// Removes the components of `v` along the orthonormal `basis`, twice.
fn reject(mut v: Point, basis: &[Point]) -> Point {
    for _ in 0..2 {
        for b in basis {
            let p = dot(&v, b);
            v.iter_mut().zip(b).for_each(|(x, y)| *x -= p * y);
        }
    }
    v
}

/// Orthonormal basis of the span of `vs`; nearly dependent vectors are dropped.
pub(crate) fn orthonormal_basis(vs: impl IntoIterator<Item = Point>, tol: f64) -> Vec<Point> {
    let mut basis: Vec<Point> = Vec::new();
    for v in vs {
        let r = reject(v, &basis);
        let n = norm(&r);
        if n > tol {
            basis.push(r.into_iter().map(|x| x / n).collect());
        }
    }
    basis
}

/// Orthonormal basis of the affine span of the selected points.
pub(crate) fn affine_basis(points: &[Point], idx: &[usize]) -> Vec<Point> {
    let o = &points[idx[0]];
    orthonormal_basis(idx[1..].iter().map(|&i| sub(&points[i], o)), HULL_TOL)
}

/// Coordinates of the selected points in `basis`, relative to `origin`.
pub(crate) fn project(points: &[Point], idx: &[usize], origin: &[f64], basis: &[Point]) -> Vec<Point> {
    idx.iter()
        .map(|&i| {
            let d = sub(&points[i], origin);
            basis.iter().map(|b| dot(&d, b)).collect()
        })
        .collect()
}

fn on_plane(points: &[Point], normal: &[f64], offset: f64) -> Vec<usize> {
    (0..points.len())
        .filter(|&i| (dot(&points[i], normal) - offset).abs() <= HULL_TOL)
        .collect()
}

fn is_supporting(points: &[Point], normal: &[f64], offset: f64) -> bool {
    points.iter().all(|p| dot(p, normal) <= offset + HULL_TOL)
}

/// Unit vector orthogonal to the `k − 1` given directions in `R^k`.
fn complement(dirs: &[Point], k: usize) -> Option<Point> {
    let basis = orthonormal_basis(dirs.iter().cloned(), 1e-12);
    if basis.len() + 1 != k {
        return None;
    }
    (0..k)
        .map(|j| {
            let mut e = vec![0.0; k];
            e[j] = 1.0;
            reject(e, &basis)
        })
        .max_by(|a, b| norm(a).total_cmp(&norm(b)))
        .map(|v| {
            let n = norm(&v);
            v.into_iter().map(|x| x / n).collect()
        })
}

/// A facet through the lexicographically smallest point, found by trying
/// hyperplanes through it and `k − 1` further points.
fn initial_facet(points: &[Point]) -> Facet {
    let k = points[0].len();
    let first = (0..points.len())
        .min_by(|&a, &b| {
            points[a]
                .iter()
                .zip(&points[b])
                .map(|(x, y)| x.total_cmp(y))
                .find(|o| o.is_ne())
                .unwrap_or(std::cmp::Ordering::Equal)
        })
        .unwrap();
    let others: Vec<usize> = (0..points.len()).filter(|&i| i != first).collect();
    let p0 = &points[first];
    let mut combo: Vec<usize> = (0..k - 1).collect();
    loop {
        let dirs: Vec<Point> = combo.iter().map(|&c| sub(&points[others[c]], p0)).collect();
        if let Some(n) = complement(&dirs, k) {
            for normal in [n.clone(), n.into_iter().map(|x| -x).collect()] {
                let offset = dot(&normal, p0);
                if is_supporting(points, &normal, offset) {
                    return Facet {
                        members: on_plane(points, &normal, offset),
                        normal,
                        offset,
                    };
                }
            }
        }
        // next combination in lexicographic order
        let m = others.len();
        let mut i = k - 1;
        loop {
            if i == 0 {
                panic!("point set is not full-dimensional");
            }
            i -= 1;
            if combo[i] < m - (k - 1) + i {
                break;
            }
        }
        combo[i] += 1;
        for j in i + 1..k - 1 {
            combo[j] = combo[j - 1] + 1;
        }
    }
}

/// All facets of a point set spanning `R^k`, `k ≥ 1`.
pub(crate) fn facets(points: &[Point]) -> Vec<Facet> {
    let k = points[0].len();
    if k == 1 {
        let (lo, hi) = points.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| (lo.min(p[0]), hi.max(p[0])));
        return vec![
            Facet {
                members: on_plane(points, &[-1.0], -lo),
                normal: vec![-1.0],
                offset: -lo,
            },
            Facet {
                members: on_plane(points, &[1.0], hi),
                normal: vec![1.0],
                offset: hi,
            },
        ];
    }

    let start = initial_facet(points);
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    seen.insert(start.members.clone());
    let mut queue = VecDeque::from([start]);
    let mut out = Vec::new();
    while let Some(f) = queue.pop_front() {
        for ridge in ridges(points, &f) {
            let next = wrap(points, &f, &ridge);
            if seen.insert(next.members.clone()) {
                queue.push_back(next);
            }
        }
        out.push(f);
    }
    out
}

/// Ridges of `f` as index sets into `points`.
fn ridges(points: &[Point], f: &Facet) -> Vec<Vec<usize>> {
    let basis = affine_basis(points, &f.members);
    let local = project(points, &f.members, &points[f.members[0]], &basis);
    facets(&local)
        .into_iter()
        .map(|r| r.members.iter().map(|&i| f.members[i]).collect())
        .collect()
}

/// Neighbour of `f` across `ridge`: rotate the facet plane about the ridge
/// until it meets the next point.
fn wrap(points: &[Point], f: &Facet, ridge: &[usize]) -> Facet {
    let c_r = centroid(points, ridge);
    let ridge_basis = affine_basis(points, ridge);
    let inward = reject(sub(&centroid(points, &f.members), &c_r), &ridge_basis);
    let inward = reject(inward, std::slice::from_ref(&f.normal));
    let len = norm(&inward);
    let u: Point = inward.iter().map(|x| -x / len).collect();

    let mut best = f64::INFINITY;
    for (i, p) in points.iter().enumerate() {
        if f.members.binary_search(&i).is_ok() {
            continue;
        }
        let w = sub(p, &c_r);
        let theta = (-dot(&w, &f.normal)).atan2(dot(&w, &u));
        best = best.min(theta);
    }
    let (s, c) = best.sin_cos();
    let normal: Point = u.iter().zip(&f.normal).map(|(a, b)| s * a + c * b).collect();
    let nn = norm(&normal);
    let normal: Point = normal.into_iter().map(|x| x / nn).collect();
    let offset = dot(&normal, &c_r);
    debug_assert!(is_supporting(points, &normal, offset));
    Facet {
        members: on_plane(points, &normal, offset),
        normal,
        offset,
    }
}
