//! Convex polyhedron representation and basic measurements.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::vec3::{Plane, Point3, Vec3};

/// An edge of a polyhedron with its two incident facets.
///
/// `facets[0]` traverses the edge as `vertices[0] -> vertices[1]`,
/// `facets[1]` traverses it in the opposite direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Edge {
    pub vertices: [usize; 2],
    pub facets: [usize; 2],
}

/// A closed convex polyhedron.
///
/// Facets are vertex-index loops ordered counterclockwise when seen from
/// outside; each facet carries its outward unit supporting plane. The value is
/// immutable once built.
#[derive(Debug, Clone)]
pub struct ConvexPolyhedron {
    vertices: Vec<Point3>,
    facets: Vec<Vec<usize>>,
    planes: Vec<Plane>,
    edges: Vec<Edge>,
}

/// Default absolute tolerance used by the kernel, relative to unit scale.
pub const DEFAULT_TOL: f64 = 1e-9;

impl ConvexPolyhedron {
    /// Assembles a polyhedron from already-consistent parts and checks the
    /// combinatorial invariants (closed 2-manifold, Euler relation). Planes are
    /// trusted; geometric convexity is checked against `tol`.
    pub fn from_parts(
        vertices: Vec<Point3>,
        facets: Vec<Vec<usize>>,
        planes: Vec<Plane>,
        tol: f64,
    ) -> Result<Self> {
        if facets.len() != planes.len() {
            return Err(Error::InvalidPolyhedron(
                "facet and plane counts differ".into(),
            ));
        }
        if vertices.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidPolyhedron("non-finite vertex".into()));
        }
        let edges = build_edges(vertices.len(), &facets)?;
        let poly = ConvexPolyhedron {
            vertices,
            facets,
            planes,
            edges,
        };
        let v = poly.vertices.len() as i64;
        let e = poly.edges.len() as i64;
        let f = poly.facets.len() as i64;
        if v - e + f != 2 {
            return Err(Error::InvalidPolyhedron(format!(
                "Euler characteristic V - E + F = {} - {} + {} != 2",
                v, e, f
            )));
        }
        poly.check_convex(tol)?;
        Ok(poly)
    }

    /// Builds a polyhedron from vertices and facet loops, computing facet planes
    /// from the loops. A consistently inward-oriented input is flipped.
    pub fn from_facets(vertices: Vec<Point3>, mut facets: Vec<Vec<usize>>, tol: f64) -> Result<Self> {
        for (i, f) in facets.iter().enumerate() {
            if f.len() < 3 {
                return Err(Error::InvalidPolyhedron(format!(
                    "facet {i} has fewer than 3 vertices"
                )));
            }
            if let Some(&bad) = f.iter().find(|&&k| k >= vertices.len()) {
                return Err(Error::InvalidPolyhedron(format!(
                    "facet {i} references vertex {bad} out of range"
                )));
            }
        }
        let signed: f64 = facets
            .iter()
            .map(|f| signed_loop_volume(&vertices, f, vertices[0]))
            .sum();
        if signed < 0.0 {
            for f in &mut facets {
                f.reverse();
            }
        }
        let mut planes = Vec::with_capacity(facets.len());
        for (i, f) in facets.iter().enumerate() {
            let plane = loop_plane(&vertices, f).ok_or_else(|| {
                Error::InvalidPolyhedron(format!("facet {i} has zero area"))
            })?;
            planes.push(plane);
        }
        let poly = Self::from_parts(vertices, facets, planes, tol)?;
        let scale = poly.scale();
        for (i, f) in poly.facets.iter().enumerate() {
            for &k in f {
                if poly.planes[i].signed_distance(poly.vertices[k]).abs() > tol * scale {
                    return Err(Error::InvalidPolyhedron(format!("facet {i} is not planar")));
                }
            }
        }
        Ok(poly)
    }

    fn check_convex(&self, tol: f64) -> Result<()> {
        let slack = tol * self.scale();
        for (i, plane) in self.planes.iter().enumerate() {
            if let Some(k) = self
                .vertices
                .iter()
                .position(|&v| plane.signed_distance(v) > slack)
            {
                return Err(Error::InvalidPolyhedron(format!(
                    "vertex {k} lies outside facet {i} by {:e}",
                    plane.signed_distance(self.vertices[k])
                )));
            }
        }
        Ok(())
    }

    pub fn vertices(&self) -> &[Point3] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Vec<usize>] {
        &self.facets
    }

    pub fn facet(&self, f: usize) -> &[usize] {
        &self.facets[f]
    }

    pub fn planes(&self) -> &[Plane] {
        &self.planes
    }

    pub fn plane(&self, f: usize) -> Plane {
        self.planes[f]
    }

    /// Outward unit normal of facet `f`.
    pub fn normal(&self, f: usize) -> Vec3 {
        self.planes[f].normal
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_facets(&self) -> usize {
        self.facets.len()
    }

    pub fn facet_points(&self, f: usize) -> impl Iterator<Item = Point3> + '_ {
        self.facets[f].iter().map(move |&k| self.vertices[k])
    }

    /// Length scale used to make tolerances relative: at least 1, otherwise the
    /// largest absolute coordinate.
    pub fn scale(&self) -> f64 {
        self.vertices
            .iter()
            .flat_map(|v| [v.x.abs(), v.y.abs(), v.z.abs()])
            .fold(1.0, f64::max)
    }

    /// Volume by the divergence theorem (sum of signed cone volumes).
    pub fn volume(&self) -> f64 {
        let origin = self.vertices[0];
        self.facets
            .iter()
            .map(|f| signed_loop_volume(&self.vertices, f, origin))
            .sum()
    }

    /// Center of mass of the solid.
    pub fn centroid(&self) -> Point3 {
        let origin = self.vertex_mean();
        let mut total = 0.0;
        let mut acc = Vec3::ZERO;
        for f in &self.facets {
            let a = self.vertices[f[0]] - origin;
            for w in f[1..].windows(2) {
                let b = self.vertices[w[0]] - origin;
                let c = self.vertices[w[1]] - origin;
                let vol = a.dot(b.cross(c)) / 6.0;
                total += vol;
                acc += (a + b + c) * (vol / 4.0);
            }
        }
        origin + acc / total
    }

    pub fn vertex_mean(&self) -> Point3 {
        let sum = self.vertices.iter().fold(Vec3::ZERO, |acc, &v| acc + v);
        sum / self.vertices.len() as f64
    }

    /// Area of facet `f` by fan triangulation of its loop.
    pub fn face_area(&self, f: usize) -> f64 {
        loop_area(&self.vertices, &self.facets[f], self.planes[f].normal)
    }

    pub fn total_area(&self) -> f64 {
        (0..self.num_facets()).map(|f| self.face_area(f)).sum()
    }

    pub fn edge_length(&self, e: &Edge) -> f64 {
        self.vertices[e.vertices[0]].distance(self.vertices[e.vertices[1]])
    }

    pub fn edge_lengths(&self) -> Vec<f64> {
        self.edges.iter().map(|e| self.edge_length(e)).collect()
    }

    /// Maximum pairwise vertex distance.
    pub fn diameter(&self) -> f64 {
        let mut best = 0.0f64;
        for (i, &a) in self.vertices.iter().enumerate() {
            for &b in &self.vertices[i + 1..] {
                best = best.max((a - b).norm_squared());
            }
        }
        best.sqrt()
    }

    /// Whether `p` satisfies every facet constraint within `slack`.
    pub fn contains(&self, p: Point3, slack: f64) -> bool {
        self.planes.iter().all(|pl| pl.signed_distance(p) <= slack)
    }

    /// Finds the edge joining `a` and `b`, if any.
    pub fn find_edge(&self, a: usize, b: usize) -> Option<&Edge> {
        self.edges.iter().find(|e| {
            (e.vertices[0] == a && e.vertices[1] == b) || (e.vertices[0] == b && e.vertices[1] == a)
        })
    }

    /// Applies an affine map `p -> m p + t` to every vertex. `m` must be a
    /// similarity (rotation/reflection times positive scale) so facet planes can
    /// be mapped directly; orientation-reversing maps flip the loops.
    pub fn transformed(&self, m: [[f64; 3]; 3], t: Vec3) -> ConvexPolyhedron {
        let apply = |p: Vec3| {
            Vec3::new(
                m[0][0] * p.x + m[0][1] * p.y + m[0][2] * p.z,
                m[1][0] * p.x + m[1][1] * p.y + m[1][2] * p.z,
                m[2][0] * p.x + m[2][1] * p.y + m[2][2] * p.z,
            )
        };
        let det = crate::vec3::det3(
            Vec3::from(m[0]),
            Vec3::from(m[1]),
            Vec3::from(m[2]),
        );
        let scale = det.abs().cbrt();
        let vertices: Vec<Point3> = self.vertices.iter().map(|&v| apply(v) + t).collect();
        let mut facets = self.facets.clone();
        if det < 0.0 {
            for f in &mut facets {
                f.reverse();
            }
        }
        let planes = self
            .planes
            .iter()
            .zip(&facets)
            .map(|(pl, f)| {
                // A similarity maps normals to m n / scale.
                let n = (apply(pl.normal) / scale).normalize();
                Plane {
                    normal: n,
                    offset: n.dot(vertices[f[0]]),
                }
            })
            .collect();
        let edges = build_edges(vertices.len(), &facets).expect("topology is preserved");
        ConvexPolyhedron {
            vertices,
            facets,
            planes,
            edges,
        }
    }

    pub fn translated(&self, t: Vec3) -> ConvexPolyhedron {
        self.transformed([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]], t)
    }

    pub fn scaled(&self, s: f64) -> ConvexPolyhedron {
        self.transformed([[s, 0.0, 0.0], [0.0, s, 0.0], [0.0, 0.0, s]], Vec3::ZERO)
    }
}

/// Signed volume of the cone from `origin` over a facet loop.
fn signed_loop_volume(vertices: &[Point3], f: &[usize], origin: Point3) -> f64 {
    let a = vertices[f[0]] - origin;
    f[1..]
        .windows(2)
        .map(|w| a.dot((vertices[w[0]] - origin).cross(vertices[w[1]] - origin)))
        .sum::<f64>()
        / 6.0
}

/// Area of a planar loop measured along `normal`.
pub(crate) fn loop_area(vertices: &[Point3], f: &[usize], normal: Vec3) -> f64 {
    let a = vertices[f[0]];
    0.5 * f[1..]
        .windows(2)
        .map(|w| normal.dot((vertices[w[0]] - a).cross(vertices[w[1]] - a)))
        .sum::<f64>()
}

/// Supporting plane of a loop via Newell's method, offset averaged over the loop.
pub(crate) fn loop_plane(vertices: &[Point3], f: &[usize]) -> Option<Plane> {
    let mut n = Vec3::ZERO;
    for (i, &k) in f.iter().enumerate() {
        let p = vertices[k];
        let q = vertices[f[(i + 1) % f.len()]];
        n.x += (p.y - q.y) * (p.z + q.z);
        n.y += (p.z - q.z) * (p.x + q.x);
        n.z += (p.x - q.x) * (p.y + q.y);
    }
    let n = n.try_normalize()?;
    let offset = f.iter().map(|&k| n.dot(vertices[k])).sum::<f64>() / f.len() as f64;
    Some(Plane { normal: n, offset })
}

fn build_edges(num_vertices: usize, facets: &[Vec<usize>]) -> Result<Vec<Edge>> {
    // key: (min, max) -> (forward facet, backward facet)
    let mut map: HashMap<(usize, usize), (Option<usize>, Option<usize>)> = HashMap::new();
    let mut order = Vec::new();
    for (fi, f) in facets.iter().enumerate() {
        for (i, &a) in f.iter().enumerate() {
            let b = f[(i + 1) % f.len()];
            if a == b || a >= num_vertices || b >= num_vertices {
                return Err(Error::InvalidPolyhedron(format!(
                    "facet {fi} has a degenerate or out-of-range edge"
                )));
            }
            let key = (a.min(b), a.max(b));
            let slot = map.entry(key).or_insert_with(|| {
                order.push(key);
                (None, None)
            });
            let side = if a < b { &mut slot.0 } else { &mut slot.1 };
            if side.replace(fi).is_some() {
                return Err(Error::InvalidPolyhedron(format!(
                    "edge {a}-{b} traversed twice in the same direction"
                )));
            }
        }
    }
    let mut used = vec![false; num_vertices];
    let mut edges = Vec::with_capacity(order.len());
    for key in order {
        match map[&key] {
            (Some(f0), Some(f1)) => {
                used[key.0] = true;
                used[key.1] = true;
                edges.push(Edge {
                    vertices: [key.0, key.1],
                    facets: [f0, f1],
                });
            }
            _ => {
                return Err(Error::InvalidPolyhedron(format!(
                    "edge {}-{} has only one incident facet",
                    key.0, key.1
                )))
            }
        }
    }
    if let Some(k) = used.iter().position(|&u| !u) {
        return Err(Error::InvalidPolyhedron(format!("vertex {k} is unused")));
    }
    Ok(edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::genlab::{cube, unit_tetrahedron};

    #[test]
    fn cube_measurements() {
        let c = cube(1.0);
        assert_eq!(c.num_facets(), 6);
        assert_eq!(c.edges().len(), 12);
        assert!((c.volume() - 8.0).abs() < 1e-12);
        for f in 0..6 {
            assert!((c.face_area(f) - 4.0).abs() < 1e-12);
        }
        assert!((c.diameter() - 2.0 * 3f64.sqrt()).abs() < 1e-12);
        assert!(c.centroid().norm() < 1e-12);
    }

    #[test]
    fn tetrahedron_measurements() {
        let t = unit_tetrahedron();
        assert!((t.volume() - 1.0 / 6.0).abs() < 1e-15);
        let base = (0..4).find(|&f| t.normal(f) == -Vec3::Z).unwrap();
        assert!((t.face_area(base) - 0.5).abs() < 1e-15);
        assert!(t.edge_lengths().iter().all(|&l| l <= 2f64.sqrt() + 1e-15));
    }

    #[test]
    fn inward_loops_are_flipped() {
        let t = unit_tetrahedron();
        let flipped: Vec<Vec<usize>> = t
            .facets()
            .iter()
            .map(|f| f.iter().rev().copied().collect())
            .collect();
        let u = ConvexPolyhedron::from_facets(t.vertices().to_vec(), flipped, DEFAULT_TOL).unwrap();
        assert!((u.volume() - 1.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn open_surface_is_rejected() {
        let t = unit_tetrahedron();
        let facets = t.facets()[..3].to_vec();
        let err = ConvexPolyhedron::from_facets(t.vertices().to_vec(), facets, DEFAULT_TOL);
        assert!(matches!(err, Err(Error::InvalidPolyhedron(_))));
    }

    #[test]
    fn nonconvex_is_rejected() {
        // A "dented" cube: one top corner pushed below the top plane of its facet
        // makes the top quad non-planar.
        let c = cube(1.0);
        let mut vs = c.vertices().to_vec();
        let k = vs.iter().position(|v| *v == Vec3::new(1.0, 1.0, 1.0)).unwrap();
        vs[k] = Vec3::new(1.0, 1.0, 0.5);
        let err = ConvexPolyhedron::from_facets(vs, c.facets().to_vec(), DEFAULT_TOL);
        assert!(err.is_err());
    }

    #[test]
    fn similarity_transform_scales_measures() {
        let c = cube(1.0);
        let s = 3.0;
        let (cs, sn) = (0.3f64.cos(), 0.3f64.sin());
        let m = [[s * cs, -s * sn, 0.0], [s * sn, s * cs, 0.0], [0.0, 0.0, s]];
        let t = c.transformed(m, Vec3::new(1.0, -2.0, 0.5));
        assert!((t.volume() - 8.0 * 27.0).abs() < 1e-9);
        assert!((t.face_area(0) - 4.0 * 9.0).abs() < 1e-9);
        for f in 0..t.num_facets() {
            for p in t.facet_points(f) {
                assert!(t.plane(f).signed_distance(p).abs() < 1e-12);
            }
        }
    }
}
