//! Castability through a facet: the direction linear program, thickness and
//! the volume bound `V <= S h` for castable facets.
//!
//! Pull directions for base facet `F` are parameterized on the affine chart
//! `n_F · d = 1` (the part leaves the mold half-space through `F`). Every other
//! facet `G` contributes the constraint `n_G · d <= 0`. In the chart
//! coordinates `(x, y)` with `d = n_F + x u + y w` this is a 2-variable LP.
//!
//! The feasible region is computed exactly by clipping in homogeneous
//! coordinates `(X, Y, W)`: a point with `W > 0` is the chart point
//! `(X/W, Y/W)`, and `W = 0` points are directions at infinity. Starting from
//! the closed hemisphere `W >= 0`, each constraint is a half-space through the
//! origin, so the region stays a convex spherical polygon and its ideal
//! vertices give the recession cone of the unbounded region directly.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::polyhedron::ConvexPolyhedron;
use crate::vec3::Vec3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Feasibility {
    Infeasible,
    /// Feasible only on the boundary (sliding contact).
    WeaklyFeasible,
    /// Nonempty interior.
    StronglyFeasible,
}

impl Feasibility {
    pub fn is_feasible(self) -> bool {
        self != Feasibility::Infeasible
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strictness {
    Weak,
    Strong,
}

/// One half-plane `a · (x, y) <= b` of the chart LP, kept with its source facet.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct DirectionConstraint {
    pub facet: usize,
    /// Outward normal of the facet.
    pub normal: Vec3,
    /// Chart coefficients `(n_G · u, n_G · w)`.
    pub a: [f64; 2],
    /// Chart right-hand side `-n_G · n_F`.
    pub b: f64,
}

/// Feasible pull directions for one base facet.
#[derive(Debug, Clone, Serialize)]
pub struct DirectionRegion {
    pub facet: usize,
    pub base_normal: Vec3,
    /// Chart basis: `d = base_normal + x u + y w`.
    pub basis: [Vec3; 2],
    pub constraints: Vec<DirectionConstraint>,
    pub status: Feasibility,
    /// Unit pull direction satisfying all constraints within tolerance.
    pub witness: Option<Vec3>,
    /// Unit pull direction satisfying all constraints with margin above tolerance.
    pub interior_witness: Option<Vec3>,
    /// Extreme unit directions (orthogonal to `base_normal`) along which the
    /// feasible chart region is unbounded.
    pub recession_rays: Vec<Vec3>,
    pub tolerance: f64,
    /// Vertices of the region in homogeneous chart coordinates `(X, Y, W)`.
    #[serde(skip)]
    pub homogeneous_vertices: Vec<Vec3>,
}

impl DirectionRegion {
    /// Chart coordinates of a pull direction with `base_normal · d > 0`.
    pub fn chart_point(&self, d: Vec3) -> [f64; 2] {
        let w = self.base_normal.dot(d);
        [self.basis[0].dot(d) / w, self.basis[1].dot(d) / w]
    }

    /// Smallest slack `-n_G · d` over constraints, together with `n_F · d`,
    /// for a unit direction `d`.
    pub fn margin(&self, d: Vec3) -> f64 {
        let d = d.normalize();
        self.constraints
            .iter()
            .map(|c| -c.normal.dot(d))
            .fold(self.base_normal.dot(d), f64::min)
    }

    /// Angular bisector of the recession cone, when the region is unbounded.
    pub fn recession_bisector(&self) -> Option<Vec3> {
        recession_bisector(&self.homogeneous_vertices, self.basis, self.tolerance)
    }
}

/// Solves the direction LP for pull directions through facet `f`, using the
/// constraints of all other facets.
pub fn direction_lp(p: &ConvexPolyhedron, f: usize, tol: f64) -> DirectionRegion {
    let facets: Vec<usize> = (0..p.num_facets()).filter(|&g| g != f).collect();
    direction_lp_with(p, f, &facets, tol)
}

/// Direction LP for facet `f` restricted to the constraints of `facets`.
pub fn direction_lp_with(p: &ConvexPolyhedron, f: usize, facets: &[usize], tol: f64) -> DirectionRegion {
    let normals: Vec<(usize, Vec3)> = facets.iter().map(|&g| (g, p.normal(g))).collect();
    solve_direction_lp(f, p.normal(f), &normals, tol)
}

/// Direction LP for an arbitrary base normal and list of `(facet, outward normal)`
/// constraints, processed in the given order.
pub fn solve_direction_lp(
    facet: usize,
    base_normal: Vec3,
    normals: &[(usize, Vec3)],
    tol: f64,
) -> DirectionRegion {
    let n_f = base_normal.normalize();
    let (u, w) = n_f.orthonormal_basis();
    let constraints: Vec<DirectionConstraint> = normals
        .iter()
        .map(|&(g, n)| DirectionConstraint {
            facet: g,
            normal: n,
            a: [n.dot(u), n.dot(w)],
            b: -n.dot(n_f),
        })
        .collect();

    // Closed hemisphere W >= 0, as a square on the ideal circle.
    let mut poly = vec![
        Vec3::new(1.0, 0.0, 0.0),
        Vec3::new(0.0, 1.0, 0.0),
        Vec3::new(-1.0, 0.0, 0.0),
        Vec3::new(0.0, -1.0, 0.0),
    ];
    // Constraints parallel to n_F either cut nothing or everything with W > 0.
    let mut clipped = false;
    for c in &constraints {
        // a·(X,Y) - b W <= 0  <=>  n_G · d <= 0
        let h = Vec3::new(c.a[0], c.a[1], -c.b);
        if c.a[0].hypot(c.a[1]) <= tol {
            if h.z > tol {
                poly.clear();
                break;
            }
            continue;
        }
        clipped = true;
        poly = clip_homogeneous(&poly, h, tol);
        if poly.is_empty() {
            break;
        }
    }

    let to_dir = |q: Vec3| (u * q.x + w * q.y + n_f * q.z).normalize();
    let margin = |d: Vec3| {
        constraints
            .iter()
            .map(|c| -c.normal.dot(d))
            .fold(n_f.dot(d), f64::min)
    };

    let mut status = Feasibility::Infeasible;
    let mut witness = None;
    let mut interior_witness = None;
    let top = if !clipped && !poly.is_empty() {
        Some(Vec3::Z)
    } else {
        poly.iter()
            .copied()
            .max_by(|a, b| a.z.total_cmp(&b.z))
            .filter(|q| q.z > tol)
    };
    if let Some(top) = top {
        status = Feasibility::WeaklyFeasible;
        let mean = poly.iter().fold(Vec3::ZERO, |acc, &q| acc + q);
        let candidate = if clipped {
            mean.try_normalize().filter(|m| m.z > tol).unwrap_or(top)
        } else {
            top
        };
        let d = to_dir(candidate);
        witness = Some(if margin(d) >= -tol { d } else { to_dir(top) });
        if margin(d) > tol {
            status = Feasibility::StronglyFeasible;
            interior_witness = Some(d);
        }
    }

    let mut recession_rays = Vec::new();
    if status.is_feasible() {
        if !clipped {
            recession_rays = vec![u, w];
        } else {
            for q in ideal_run(&poly, tol) {
                let r = (u * q.x + w * q.y).normalize();
                if recession_rays.iter().all(|&s: &Vec3| s.dot(r) < 1.0 - 1e-12) {
                    recession_rays.push(r);
                }
            }
            if recession_rays.len() > 2 {
                let first = recession_rays[0];
                let last = *recession_rays.last().unwrap();
                recession_rays = vec![first, last];
            }
        }
    }

    DirectionRegion {
        facet,
        base_normal: n_f,
        basis: [u, w],
        constraints,
        status,
        witness,
        interior_witness,
        recession_rays,
        tolerance: tol,
        homogeneous_vertices: poly,
    }
}

/// Sutherland–Hodgman clip of a spherical polygon (unit vertices in `W >= 0`)
/// against `h · q <= 0`.
fn clip_homogeneous(poly: &[Vec3], h: Vec3, tol: f64) -> Vec<Vec3> {
    let n = poly.len();
    if n == 0 {
        return Vec::new();
    }
    let s: Vec<f64> = poly.iter().map(|&q| h.dot(q)).collect();
    if s.iter().all(|&v| v <= tol) {
        return poly.to_vec();
    }
    let mut out: Vec<Vec3> = Vec::with_capacity(n + 2);
    for i in 0..n {
        let j = (i + 1) % n;
        let (p, q) = (poly[i], poly[j]);
        let (sp, sq) = (s[i], s[j]);
        let p_in = sp <= tol;
        let q_in = sq <= tol;
        if p_in {
            out.push(p);
        }
        if p_in != q_in {
            let t = (sp / (sp - sq)).clamp(0.0, 1.0);
            let x = p + (q - p) * t;
            if let Some(x) = x.try_normalize() {
                out.push(x);
            }
        }
    }
    // The new edge runs along the clipping great circle; when its endpoints are
    // antipodal (both ideal) the chord through the origin is not the edge, so
    // insert the point of the circle that lies in W > 0.
    let pole = Vec3::Z;
    let hn = h.normalize();
    let mid = (pole - hn * hn.dot(pole)).try_normalize();
    let mut fixed: Vec<Vec3> = Vec::with_capacity(out.len() + 1);
    for i in 0..out.len() {
        let a = out[i];
        let b = out[(i + 1) % out.len()];
        fixed.push(a);
        if out.len() > 1 && a.dot(b) < -1.0 + 1e-9 {
            if let Some(m) = mid {
                fixed.push(m);
            }
        }
    }
    dedup_cyclic(fixed)
}

fn dedup_cyclic(mut v: Vec<Vec3>) -> Vec<Vec3> {
    v.dedup_by(|a, b| a.dot(*b) > 1.0 - 1e-15);
    while v.len() > 1 && v[0].dot(*v.last().unwrap()) > 1.0 - 1e-15 {
        v.pop();
    }
    v
}

/// Maximal cyclic run of ideal (`W ≈ 0`) vertices, in boundary order.
fn ideal_run(poly: &[Vec3], tol: f64) -> Vec<Vec3> {
    let n = poly.len();
    let ideal: Vec<bool> = poly.iter().map(|q| q.z.abs() <= tol).collect();
    if !ideal.iter().any(|&b| b) {
        return Vec::new();
    }
    if ideal.iter().all(|&b| b) {
        return poly.to_vec();
    }
    // Start right after a finite vertex so the run is contiguous.
    let start = (0..n).find(|&i| !ideal[i] && ideal[(i + 1) % n]).unwrap();
    (1..=n)
        .map(|k| (start + k) % n)
        .take_while(|&i| ideal[i])
        .map(|i| poly[i])
        .collect()
}

fn recession_bisector(poly: &[Vec3], basis: [Vec3; 2], tol: f64) -> Option<Vec3> {
    let run = ideal_run(poly, tol);
    if run.is_empty() {
        return None;
    }
    if run.len() == 1 {
        return Some((basis[0] * run[0].x + basis[1] * run[0].y).normalize());
    }
    // Walk the arc and stop at half its angular length.
    let angles: Vec<f64> = run
        .windows(2)
        .map(|w| w[0].dot(w[1]).clamp(-1.0, 1.0).acos())
        .collect();
    let total: f64 = angles.iter().sum();
    let mut remaining = total / 2.0;
    for (k, &a) in angles.iter().enumerate() {
        if remaining <= a {
            let p = run[k];
            let q = run[k + 1];
            // Rotate p toward q by `remaining` within their plane.
            let axis = (q - p * p.dot(q)).try_normalize()?;
            let m = p * remaining.cos() + axis * remaining.sin();
            return Some((basis[0] * m.x + basis[1] * m.y).normalize());
        }
        remaining -= a;
    }
    let last = run.last().unwrap();
    Some((basis[0] * last.x + basis[1] * last.y).normalize())
}

/// Castability verdict for one facet.
#[derive(Debug, Clone, Serialize)]
pub struct CastVerdict {
    pub facet: usize,
    pub castable_weak: bool,
    pub castable_strong: bool,
    pub witness: Option<Vec3>,
    pub thickness: f64,
    pub area: f64,
    /// `V <= S h` holds (always checked; must hold whenever castable).
    pub volume_bound_ok: bool,
}

impl CastVerdict {
    pub fn castable(&self, strictness: Strictness) -> bool {
        match strictness {
            Strictness::Weak => self.castable_weak,
            Strictness::Strong => self.castable_strong,
        }
    }
}

/// Relative slack allowed in the volume bound `V <= S h`.
pub const VOLUME_BOUND_REL_TOL: f64 = 1e-9;

/// Maximum distance of a vertex from the plane of facet `f`.
pub fn thickness(p: &ConvexPolyhedron, f: usize) -> f64 {
    let pl = p.plane(f);
    p.vertices()
        .iter()
        .map(|&v| -pl.signed_distance(v))
        .fold(0.0, f64::max)
}

fn volume_bound_holds(p: &ConvexPolyhedron, f: usize) -> bool {
    let v = p.volume();
    v <= p.face_area(f) * thickness(p, f) + VOLUME_BOUND_REL_TOL * v
}

/// Checks `V(P) <= S(F) h` for a facet through which `p` is (weakly) castable.
pub fn check_volume_bound(p: &ConvexPolyhedron, f: usize, tol: f64) -> Result<bool> {
    if !direction_lp(p, f, tol).status.is_feasible() {
        return Err(Error::NotCastable { facet: f });
    }
    Ok(volume_bound_holds(p, f))
}

/// One verdict per facet.
///
/// Panics if a castable facet violates `V <= S h`, which would indicate a bug
/// in the LP or the measurements.
pub fn castable_faces(p: &ConvexPolyhedron, tol: f64) -> Vec<CastVerdict> {
    (0..p.num_facets()).map(|f| cast_verdict(p, f, tol)).collect()
}

pub fn cast_verdict(p: &ConvexPolyhedron, f: usize, tol: f64) -> CastVerdict {
    let region = direction_lp(p, f, tol);
    let castable_weak = region.status.is_feasible();
    let volume_bound_ok = volume_bound_holds(p, f);
    assert!(
        !castable_weak || volume_bound_ok,
        "facet {f} is castable but violates V <= S h"
    );
    CastVerdict {
        facet: f,
        castable_weak,
        castable_strong: region.status == Feasibility::StronglyFeasible,
        witness: region.witness,
        thickness: thickness(p, f),
        area: p.face_area(f),
        volume_bound_ok,
    }
}

/// Facets castable under the given strictness.
pub fn castable_facets(p: &ConvexPolyhedron, strictness: Strictness, tol: f64) -> Vec<usize> {
    castable_faces(p, tol)
        .into_iter()
        .filter(|v| v.castable(strictness))
        .map(|v| v.facet)
        .collect()
}

/// Whether any facet admits a (weakly) feasible pull direction; stops at the first.
pub fn is_castable(p: &ConvexPolyhedron, strictness: Strictness, tol: f64) -> bool {
    (0..p.num_facets()).any(|f| {
        let st = direction_lp(p, f, tol).status;
        match strictness {
            Strictness::Weak => st.is_feasible(),
            Strictness::Strong => st == Feasibility::StronglyFeasible,
        }
    })
}
