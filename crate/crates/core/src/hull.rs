//! Incremental 3-D convex hull with coplanar-facet merging.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::polyhedron::{loop_plane, ConvexPolyhedron};
use crate::vec3::{Plane, Point3, Vec3};

/// Adjacent hull triangles whose normals differ by less than this angle (rad)
/// are merged into one facet.
pub const MERGE_ANGLE: f64 = 1e-7;

#[derive(Debug, Clone)]
struct Tri {
    v: [usize; 3],
    plane: Plane,
    alive: bool,
}

/// Incremental hull of a growing point set.
///
/// Points are inserted one at a time; the current triangles are available at
/// any time through [`HullBuilder::triangles`], and [`HullBuilder::finish`]
/// produces a [`ConvexPolyhedron`] with coplanar triangles merged.
#[derive(Debug, Clone)]
pub struct HullBuilder {
    points: Vec<Point3>,
    tris: Vec<Tri>,
    // directed edge -> triangle containing it
    edge_tri: HashMap<(usize, usize), usize>,
    eps: f64,
    tol: f64,
}

impl HullBuilder {
    /// Starts a hull from the points, choosing a well-spread initial simplex.
    /// The remaining points are inserted in index order.
    pub fn new(points: &[Point3], tol: f64) -> Result<Self> {
        if points.len() < 4 {
            return Err(Error::DegenerateInput("fewer than 4 points"));
        }
        if points.iter().any(|p| !p.is_finite()) {
            return Err(Error::DegenerateInput("non-finite point"));
        }
        let scale = points
            .iter()
            .flat_map(|v| [v.x.abs(), v.y.abs(), v.z.abs()])
            .fold(1.0, f64::max);
        let eps = tol * scale;
        let simplex = initial_simplex(points, eps)?;
        let mut hb = HullBuilder {
            points: points.to_vec(),
            tris: Vec::new(),
            edge_tri: HashMap::new(),
            eps,
            tol,
        };
        let [a, b, c, d] = simplex;
        for (p, q, r, opp) in [(a, b, c, d), (a, b, d, c), (a, c, d, b), (b, c, d, a)] {
            let pl = Plane::through_points(points[p], points[q], points[r]).unwrap();
            if pl.signed_distance(points[opp]) > 0.0 {
                hb.push_tri([p, r, q]);
            } else {
                hb.push_tri([p, q, r]);
            }
        }
        for i in 0..points.len() {
            if !simplex.contains(&i) {
                hb.insert_index(i);
            }
        }
        Ok(hb)
    }

    fn push_tri(&mut self, v: [usize; 3]) -> usize {
        let [a, b, c] = v.map(|k| self.points[k]);
        let normal = (b - a)
            .cross(c - a)
            .try_normalize()
            .unwrap_or_else(|| (b - a).any_orthogonal());
        let plane = Plane {
            normal,
            offset: normal.dot(a),
        };
        let id = self.tris.len();
        for i in 0..3 {
            self.edge_tri.insert((v[i], v[(i + 1) % 3]), id);
        }
        self.tris.push(Tri {
            v,
            plane,
            alive: true,
        });
        id
    }

    /// Adds a new point; returns `true` if it changed the hull.
    pub fn insert(&mut self, p: Point3) -> bool {
        self.points.push(p);
        self.insert_index(self.points.len() - 1)
    }

    fn insert_index(&mut self, i: usize) -> bool {
        let p = self.points[i];
        let visible: Vec<usize> = self
            .tris
            .iter()
            .enumerate()
            .filter(|(_, t)| t.alive && t.plane.signed_distance(p) > self.eps)
            .map(|(k, _)| k)
            .collect();
        if visible.is_empty() {
            return false;
        }
        let mut is_visible = vec![false; self.tris.len()];
        for &k in &visible {
            is_visible[k] = true;
        }
        let mut horizon = Vec::new();
        for &k in &visible {
            let v = self.tris[k].v;
            for j in 0..3 {
                let (a, b) = (v[j], v[(j + 1) % 3]);
                let twin = self.edge_tri[&(b, a)];
                if !is_visible[twin] {
                    horizon.push((a, b));
                }
            }
        }
        for &k in &visible {
            self.tris[k].alive = false;
            let v = self.tris[k].v;
            for j in 0..3 {
                let key = (v[j], v[(j + 1) % 3]);
                if self.edge_tri.get(&key) == Some(&k) {
                    self.edge_tri.remove(&key);
                }
            }
        }
        for (a, b) in horizon {
            self.push_tri([a, b, i]);
        }
        true
    }

    /// Current hull triangles as (vertex indices, outward plane).
    pub fn triangles(&self) -> impl Iterator<Item = ([usize; 3], Plane)> + '_ {
        self.tris.iter().filter(|t| t.alive).map(|t| (t.v, t.plane))
    }

    pub fn points(&self) -> &[Point3] {
        &self.points
    }

    /// Indices of points that are hull vertices.
    pub fn hull_vertex_indices(&self) -> Vec<usize> {
        let mut used = vec![false; self.points.len()];
        for (v, _) in self.triangles() {
            for k in v {
                used[k] = true;
            }
        }
        (0..self.points.len()).filter(|&k| used[k]).collect()
    }

    /// Merges coplanar adjacent triangles, drops non-extreme vertices and
    /// returns the compacted polyhedron.
    pub fn finish(&self) -> Result<ConvexPolyhedron> {
        let alive: Vec<usize> = (0..self.tris.len()).filter(|&k| self.tris[k].alive).collect();
        let mut uf = UnionFind::new(self.tris.len());
        let cos_lim = MERGE_ANGLE.cos();
        for &k in &alive {
            let t = &self.tris[k];
            for j in 0..3 {
                let other = self.edge_tri[&(t.v[(j + 1) % 3], t.v[j])];
                if other <= k {
                    continue;
                }
                let u = &self.tris[other];
                if t.plane.normal.dot(u.plane.normal) > cos_lim
                    && t.plane.normal.cross(u.plane.normal).norm() < MERGE_ANGLE
                    && (t.plane.offset - u.plane.offset).abs() <= self.eps
                {
                    uf.union(k, other);
                }
            }
        }
        let mut groups: HashMap<usize, Vec<usize>> = HashMap::new();
        let mut group_order = Vec::new();
        for &k in &alive {
            let r = uf.find(k);
            groups
                .entry(r)
                .or_insert_with(|| {
                    group_order.push(r);
                    Vec::new()
                })
                .push(k);
        }

        let mut loops: Vec<Vec<usize>> = Vec::with_capacity(group_order.len());
        for r in &group_order {
            let members = &groups[r];
            if members.len() == 1 {
                loops.push(self.tris[members[0]].v.to_vec());
                continue;
            }
            // Boundary of the merged region: directed edges whose twin lies outside.
            let mut next: HashMap<usize, usize> = HashMap::new();
            for &k in members {
                let v = self.tris[k].v;
                for j in 0..3 {
                    let (a, b) = (v[j], v[(j + 1) % 3]);
                    let twin = self.edge_tri[&(b, a)];
                    if uf.find(twin) != *r && next.insert(a, b).is_some() {
                        return Err(Error::DegenerateInput("pinched coplanar facet region"));
                    }
                }
            }
            let start = *next.keys().min().unwrap();
            let mut lp = vec![start];
            let mut cur = next[&start];
            while cur != start {
                lp.push(cur);
                cur = *next
                    .get(&cur)
                    .ok_or(Error::DegenerateInput("open coplanar facet boundary"))?;
                if lp.len() > next.len() {
                    return Err(Error::DegenerateInput("coplanar facet boundary does not close"));
                }
            }
            if lp.len() != next.len() {
                return Err(Error::DegenerateInput("coplanar facet region with a hole"));
            }
            loops.push(lp);
        }

        // Vertices incident to fewer than three facets lie on an edge or inside a
        // facet; they are not vertices of the polytope.
        let mut facet_count = vec![0usize; self.points.len()];
        for lp in &loops {
            for &k in lp {
                facet_count[k] += 1;
            }
        }
        for lp in &mut loops {
            lp.retain(|&k| facet_count[k] >= 3);
        }

        let mut remap = vec![usize::MAX; self.points.len()];
        let mut vertices = Vec::new();
        for lp in &mut loops {
            for k in lp.iter_mut() {
                if remap[*k] == usize::MAX {
                    remap[*k] = vertices.len();
                    vertices.push(self.points[*k]);
                }
                *k = remap[*k];
            }
        }
        let mut planes = Vec::with_capacity(loops.len());
        for (lp, r) in loops.iter().zip(&group_order) {
            let plane = if groups[r].len() == 1 {
                self.tris[groups[r][0]].plane
            } else {
                loop_plane(&vertices, lp).ok_or(Error::DegenerateInput("zero-area facet"))?
            };
            planes.push(plane);
        }
        ConvexPolyhedron::from_parts(vertices, loops, planes, self.tol.max(1e-12) * 10.0)
    }
}

fn initial_simplex(points: &[Point3], eps: f64) -> Result<[usize; 4]> {
    let a = (0..points.len())
        .min_by(|&i, &j| points[i].lex_cmp(&points[j]))
        .unwrap();
    let b = argmax(points, |p| p.distance(points[a]));
    if points[a].distance(points[b]) <= eps {
        return Err(Error::DegenerateInput("all points coincide"));
    }
    let dir = (points[b] - points[a]).normalize();
    let line_dist = |p: Point3| (p - points[a]).cross(dir).norm();
    let c = argmax(points, line_dist);
    if line_dist(points[c]) <= eps {
        return Err(Error::DegenerateInput("points are collinear"));
    }
    let n = (points[b] - points[a]).cross(points[c] - points[a]).normalize();
    let plane_dist = |p: Point3| n.dot(p - points[a]).abs();
    let d = argmax(points, plane_dist);
    if plane_dist(points[d]) <= eps {
        return Err(Error::DegenerateInput("points are coplanar"));
    }
    Ok([a, b, c, d])
}

fn argmax(points: &[Point3], f: impl Fn(Point3) -> f64) -> usize {
    let mut best = 0;
    let mut best_val = f64::NEG_INFINITY;
    for (i, &p) in points.iter().enumerate() {
        let v = f(p);
        if v > best_val {
            best_val = v;
            best = i;
        }
    }
    best
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Convex hull of `points` with coplanar facets merged.
pub fn build_hull(points: &[Point3], tol: f64) -> Result<ConvexPolyhedron> {
    HullBuilder::new(points, tol)?.finish()
}

/// Hull of a point set given as `[x, y, z]` triples.
pub fn build_hull_from_arrays(points: &[[f64; 3]], tol: f64) -> Result<ConvexPolyhedron> {
    let pts: Vec<Vec3> = points.iter().map(|&a| Vec3::from(a)).collect();
    build_hull(&pts, tol)
}
