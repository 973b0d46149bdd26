//! Splitting a convex polyhedron by a plane.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::polyhedron::ConvexPolyhedron;
use crate::vec3::{Plane, Point3, Vec3};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Side {
    Below,
    On,
    Above,
}

/// One side of a plane cut.
#[derive(Debug, Clone)]
pub struct Half {
    pub poly: ConvexPolyhedron,
    /// Index of the mutual face C among `poly`'s facets.
    pub cap: usize,
    /// For each facet of `poly`, the facet of the original polyhedron it is a
    /// fragment of (`None` for the cap).
    pub sources: Vec<Option<usize>>,
    /// `cap_vertices[k]` is the vertex of `poly` at position `k` of
    /// [`CutResult::cap_polygon`].
    pub cap_vertices: Vec<usize>,
}

/// Result of cutting P by a plane: the larger half P_1, the smaller half P_2
/// and their mutual face C.
#[derive(Debug, Clone)]
pub struct CutResult {
    pub plane: Plane,
    pub larger: Half,
    pub smaller: Half,
    /// Vertices of C, counterclockwise as seen from outside `larger`.
    pub cap_polygon: Vec<Point3>,
    /// Outward normal of C with respect to `larger` (points into `smaller`).
    pub cap_normal: Vec3,
    /// `true` if `larger` is the side where `plane.signed_distance < 0`.
    pub larger_below: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CutSummary {
    pub plane: Plane,
    pub volume_larger: f64,
    pub volume_smaller: f64,
    pub cap_area: f64,
    pub cap_polygon: Vec<Point3>,
}

impl CutResult {
    pub fn cap_area(&self) -> f64 {
        self.larger.poly.face_area(self.larger.cap)
    }

    pub fn summary(&self) -> CutSummary {
        CutSummary {
            plane: self.plane,
            volume_larger: self.larger.poly.volume(),
            volume_smaller: self.smaller.poly.volume(),
            cap_area: self.cap_area(),
            cap_polygon: self.cap_polygon.clone(),
        }
    }
}

struct Split {
    vertices: Vec<Point3>,
    below_loops: Vec<(Vec<usize>, usize)>,
    above_loops: Vec<(Vec<usize>, usize)>,
    cap: Vec<usize>,
    has_below: bool,
    has_above: bool,
}

fn split(p: &ConvexPolyhedron, plane: &Plane, tol: f64) -> Split {
    let eps = tol * p.scale();
    let dist: Vec<f64> = p.vertices().iter().map(|&v| plane.signed_distance(v)).collect();
    let side: Vec<Side> = dist
        .iter()
        .map(|&s| {
            if s > eps {
                Side::Above
            } else if s < -eps {
                Side::Below
            } else {
                Side::On
            }
        })
        .collect();
    let mut vertices = p.vertices().to_vec();
    let mut crossing: HashMap<(usize, usize), usize> = HashMap::new();
    for e in p.edges() {
        let [a, b] = e.vertices;
        let straddles = matches!(
            (side[a], side[b]),
            (Side::Below, Side::Above) | (Side::Above, Side::Below)
        );
        if straddles {
            let t = dist[a] / (dist[a] - dist[b]);
            let q = vertices[a] + (vertices[b] - vertices[a]) * t;
            crossing.insert((a.min(b), a.max(b)), vertices.len());
            vertices.push(plane.project(q));
        }
    }
    let mut below_loops = Vec::new();
    let mut above_loops = Vec::new();
    for (fi, f) in p.facets().iter().enumerate() {
        let mut lo = Vec::new();
        let mut hi = Vec::new();
        for (i, &a) in f.iter().enumerate() {
            let b = f[(i + 1) % f.len()];
            if side[a] != Side::Above {
                lo.push(a);
            }
            if side[a] != Side::Below {
                hi.push(a);
            }
            if let Some(&x) = crossing.get(&(a.min(b), a.max(b))) {
                lo.push(x);
                hi.push(x);
            }
        }
        if lo.len() >= 3 {
            below_loops.push((lo, fi));
        }
        if hi.len() >= 3 {
            above_loops.push((hi, fi));
        }
    }

    let mut cap: Vec<usize> = (0..p.num_vertices())
        .filter(|&k| side[k] == Side::On)
        .chain(p.num_vertices()..vertices.len())
        .collect();
    if cap.len() >= 3 {
        let centre = cap.iter().fold(Vec3::ZERO, |acc, &k| acc + vertices[k]) / cap.len() as f64;
        let (u, w) = plane.normal.orthonormal_basis();
        let angle = |k: usize| {
            let d = vertices[k] - centre;
            d.dot(w).atan2(d.dot(u))
        };
        cap.sort_by(|&i, &j| angle(i).total_cmp(&angle(j)));
    }
    Split {
        vertices,
        below_loops,
        above_loops,
        cap,
        has_below: side.contains(&Side::Below),
        has_above: side.contains(&Side::Above),
    }
}

/// Builds one half from its facet loops plus the cap loop. `cap` must be ordered
/// counterclockwise around the half's outward cap normal.
fn assemble(
    all: &[Point3],
    loops: &[(Vec<usize>, usize)],
    cap: &[usize],
    cap_plane: Plane,
    source: &ConvexPolyhedron,
    tol: f64,
) -> Result<Half> {
    let mut remap = vec![usize::MAX; all.len()];
    let mut vertices = Vec::new();
    let mut take = |k: usize, vertices: &mut Vec<Point3>| {
        if remap[k] == usize::MAX {
            remap[k] = vertices.len();
            vertices.push(all[k]);
        }
        remap[k]
    };
    let mut facets = Vec::with_capacity(loops.len() + 1);
    let mut planes = Vec::with_capacity(loops.len() + 1);
    let mut sources = Vec::with_capacity(loops.len() + 1);
    for (lp, src) in loops {
        facets.push(lp.iter().map(|&k| take(k, &mut vertices)).collect::<Vec<_>>());
        planes.push(source.plane(*src));
        sources.push(Some(*src));
    }
    let cap_vertices: Vec<usize> = cap.iter().map(|&k| take(k, &mut vertices)).collect();
    facets.push(cap_vertices.clone());
    planes.push(cap_plane);
    sources.push(None);
    let cap_index = facets.len() - 1;
    let poly = ConvexPolyhedron::from_parts(vertices, facets, planes, tol.max(1e-12) * 10.0)
        .map_err(|_| Error::DegenerateCut("halves do not form closed polyhedra"))?;
    Ok(Half {
        poly,
        cap: cap_index,
        sources,
        cap_vertices,
    })
}

/// Cuts `p` by `plane` into the larger half P_1, the smaller half P_2 and
/// their mutual face C.
///
/// Fails with [`Error::DegenerateCut`] if the plane misses the interior of
/// `p` or the cross-section has area at most `tol`.
pub fn clip(p: &ConvexPolyhedron, plane: &Plane, tol: f64) -> Result<CutResult> {
    let s = split(p, plane, tol);
    if !s.has_below || !s.has_above {
        return Err(Error::DegenerateCut("plane does not cross the interior"));
    }
    if s.cap.len() < 3 {
        return Err(Error::DegenerateCut("empty cross-section"));
    }
    let cap_area = crate::polyhedron::loop_area(&s.vertices, &s.cap, plane.normal);
    if cap_area <= tol * p.scale() * p.scale() {
        return Err(Error::DegenerateCut("cross-section area below tolerance"));
    }
    // Below half has outward cap normal +n; the sorted cap is counterclockwise
    // around +n.
    let below = assemble(&s.vertices, &s.below_loops, &s.cap, *plane, p, tol)?;
    let reversed: Vec<usize> = s.cap.iter().rev().copied().collect();
    let mut above = assemble(&s.vertices, &s.above_loops, &reversed, plane.flipped(), p, tol)?;
    // Re-index so that position k of both halves refers to the same cap point.
    above.cap_vertices.reverse();

    let vb = below.poly.volume();
    let va = above.poly.volume();
    let larger_below = if (vb - va).abs() <= 1e-12 * p.volume() {
        // Tie: the side holding the lexicographically smallest vertex of P.
        let first = (0..p.num_vertices())
            .min_by(|&i, &j| p.vertices()[i].lex_cmp(&p.vertices()[j]))
            .unwrap();
        plane.signed_distance(p.vertices()[first]) <= 0.0
    } else {
        vb > va
    };
    let cap_points: Vec<Point3> = s.cap.iter().map(|&k| s.vertices[k]).collect();
    let (larger, smaller, cap_polygon, cap_normal) = if larger_below {
        (below, above, cap_points, plane.normal)
    } else {
        // Reverse the polygon so it is counterclockwise around -n, and keep the
        // per-half position maps aligned with it.
        let mut above = above;
        let mut below = below;
        above.cap_vertices.reverse();
        below.cap_vertices.reverse();
        let pts = cap_points.into_iter().rev().collect();
        (above, below, pts, -plane.normal)
    };
    Ok(CutResult {
        plane: *plane,
        larger,
        smaller,
        cap_polygon,
        cap_normal,
        larger_below,
    })
}

/// Intersection of `p` with the half-space `plane.signed_distance(x) <= 0`.
/// Returns `None` when the intersection has no interior.
pub fn keep_below(p: &ConvexPolyhedron, plane: &Plane, tol: f64) -> Result<Option<ConvexPolyhedron>> {
    let s = split(p, plane, tol);
    if !s.has_above {
        return Ok(Some(p.clone()));
    }
    if !s.has_below {
        return Ok(None);
    }
    let cap_area = crate::polyhedron::loop_area(&s.vertices, &s.cap, plane.normal);
    if s.cap.len() < 3 || cap_area <= tol * p.scale() * p.scale() {
        return Ok(None);
    }
    Ok(Some(assemble(&s.vertices, &s.below_loops, &s.cap, *plane, p, tol)?.poly))
}

/// Bounded intersection of half-spaces `n·x <= c`, computed by clipping a box of
/// half-width `extent`.
pub fn from_halfspaces(planes: &[Plane], extent: f64, tol: f64) -> Result<ConvexPolyhedron> {
    let mut poly = crate::genlab::cube(extent);
    for pl in planes {
        poly = keep_below(&poly, pl, tol)?
            .ok_or(Error::DegenerateInput("half-space intersection has no interior"))?;
    }
    Ok(poly)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::genlab::{cube, unit_tetrahedron};
    use crate::polyhedron::DEFAULT_TOL;

    #[test]
    fn cube_cut_in_half() {
        let c = cube(1.0);
        let cut = clip(&c, &Plane::new(Vec3::Z, 0.0).unwrap(), DEFAULT_TOL).unwrap();
        for h in [&cut.larger, &cut.smaller] {
            assert!((h.poly.volume() - 4.0).abs() < 1e-12);
            assert_eq!(h.poly.num_facets(), 6);
            assert!((h.poly.face_area(h.cap) - 4.0).abs() < 1e-12);
        }
        assert_eq!(cut.cap_polygon.len(), 4);
        assert!((cut.cap_area() - 4.0).abs() < 1e-12);
        // Tie broken toward the side with the lexicographically smallest vertex (-1,-1,-1).
        assert!(cut.larger_below);
    }

    #[test]
    fn tetrahedron_cut_through_an_edge() {
        let t = unit_tetrahedron();
        let a = Vec3::new(0.0, 0.0, 0.0);
        let b = Vec3::new(1.0, 0.0, 0.0);
        let m = (Vec3::new(0.0, 1.0, 0.0) + Vec3::new(0.0, 0.0, 1.0)) * 0.5;
        let plane = Plane::through_points(a, b, m).unwrap();
        let cut = clip(&t, &plane, DEFAULT_TOL).unwrap();
        assert_eq!(cut.cap_polygon.len(), 3);
        assert!(cut.cap_polygon.contains(&a));
        assert!(cut.cap_polygon.contains(&b));
        let total = cut.larger.poly.volume() + cut.smaller.poly.volume();
        assert!((total - 1.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn far_plane_is_degenerate() {
        let c = cube(1.0);
        let err = clip(&c, &Plane::new(Vec3::X, 5.0).unwrap(), DEFAULT_TOL).unwrap_err();
        assert!(matches!(err, Error::DegenerateCut(_)));
        let facet_plane = Plane::new(Vec3::X, 1.0).unwrap();
        assert!(clip(&c, &facet_plane, DEFAULT_TOL).is_err());
    }

    #[test]
    fn cap_positions_agree_between_halves() {
        let c = cube(1.0);
        let plane = Plane::new(Vec3::new(0.3, -0.2, 1.0), 0.4).unwrap();
        let cut = clip(&c, &plane, DEFAULT_TOL).unwrap();
        for (k, &p) in cut.cap_polygon.iter().enumerate() {
            assert_eq!(cut.larger.poly.vertices()[cut.larger.cap_vertices[k]], p);
            assert_eq!(cut.smaller.poly.vertices()[cut.smaller.cap_vertices[k]], p);
        }
        // Larger half's cap loop is counterclockwise around its outward normal.
        let h = &cut.larger;
        assert!((h.poly.normal(h.cap) - cut.cap_normal).norm() < 1e-12);
        assert!(cut.larger.poly.volume() > cut.smaller.poly.volume());
    }

    #[test]
    fn halfspace_construction() {
        let planes = [
            Plane::new(Vec3::new(1.0, 1.0, 1.0), 1.0).unwrap(),
            Plane::new(-Vec3::X, 0.0).unwrap(),
            Plane::new(-Vec3::Y, 0.0).unwrap(),
            Plane::new(-Vec3::Z, 0.0).unwrap(),
        ];
        let t = from_halfspaces(&planes, 4.0, DEFAULT_TOL).unwrap();
        assert_eq!(t.num_vertices(), 4);
        assert!((t.volume() - 1.0 / 6.0).abs() < 1e-12);
    }
}
