//! General-position validation: no four coplanar vertices, no three facets
//! parallel to a common line.

use serde::Serialize;

use crate::polyhedron::ConvexPolyhedron;
use crate::vec3::det3;

/// Exhaustive 4-subset coplanarity testing is done up to this vertex count.
pub const EXHAUSTIVE_LIMIT: usize = 20;

#[derive(Debug, Clone, Serialize)]
pub struct GeneralPositionReport {
    /// Smallest `|tetrahedron volume| / diameter^3` over the tested 4-vertex
    /// subsets (three vertices of a facet plus any other vertex).
    pub coplanarity_margin: f64,
    /// Same minimum over all 4-subsets; only computed for small polyhedra.
    pub exhaustive_coplanarity_margin: Option<f64>,
    /// Smallest `|det(n_a, n_b, n_c)|` over facet triples.
    pub parallelism_margin: f64,
    /// Facets with more than three vertices.
    pub non_triangular_facets: usize,
    pub tolerance: f64,
    pub pass: bool,
}

/// Checks general position with the given tolerance (1e-9 by default).
pub fn validate_general_position(p: &ConvexPolyhedron, tol: f64) -> GeneralPositionReport {
    let vs = p.vertices();
    let diam3 = p.diameter().powi(3);
    let non_triangular = p.facets().iter().filter(|f| f.len() > 3).count();

    let mut coplanar = f64::INFINITY;
    for (fi, f) in p.facets().iter().enumerate() {
        let (a, b, c) = (vs[f[0]], vs[f[1]], vs[f[2]]);
        let n = (b - a).cross(c - a);
        if f.len() > 3 {
            // The fourth loop vertex is coplanar with the first three.
            let d = vs[f[3]];
            coplanar = coplanar.min(n.dot(d - a).abs() / 6.0 / diam3);
        }
        let plane = p.plane(fi);
        for (k, &v) in vs.iter().enumerate() {
            if f.contains(&k) {
                continue;
            }
            // |n| = 2 * triangle area, height = plane distance.
            let vol = n.norm() * plane.signed_distance(v).abs() / 6.0;
            coplanar = coplanar.min(vol / diam3);
        }
    }

    let exhaustive = (vs.len() <= EXHAUSTIVE_LIMIT).then(|| {
        let mut m = f64::INFINITY;
        let n = vs.len();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    for l in k + 1..n {
                        let vol = det3(vs[j] - vs[i], vs[k] - vs[i], vs[l] - vs[i]).abs() / 6.0;
                        m = m.min(vol / diam3);
                    }
                }
            }
        }
        m
    });

    let normals: Vec<_> = p.planes().iter().map(|pl| pl.normal).collect();
    let mut parallel = f64::INFINITY;
    for i in 0..normals.len() {
        for j in i + 1..normals.len() {
            let cij = normals[i].cross(normals[j]);
            for nk in &normals[j + 1..] {
                parallel = parallel.min(cij.dot(*nk).abs());
            }
        }
    }

    let coplanar_ok = coplanar > tol && exhaustive.is_none_or(|m| m > tol);
    GeneralPositionReport {
        coplanarity_margin: coplanar,
        exhaustive_coplanarity_margin: exhaustive,
        parallelism_margin: parallel,
        non_triangular_facets: non_triangular,
        tolerance: tol,
        pass: coplanar_ok && parallel > tol && non_triangular == 0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::genlab::{cube, unit_tetrahedron};

    #[test]
    fn cube_fails() {
        let r = validate_general_position(&cube(1.0), 1e-9);
        assert!(!r.pass);
        assert_eq!(r.non_triangular_facets, 6);
        assert!(r.coplanarity_margin < 1e-15);
    }

    #[test]
    fn tetrahedron_margins() {
        let t = unit_tetrahedron();
        let r = validate_general_position(&t, 1e-9);
        // Normals (-x, -y, -z, (1,1,1)/sqrt3): the four triple determinants are
        // 1 and 1/sqrt3 (three times).
        let expected = 1.0 / 3f64.sqrt();
        assert!((r.parallelism_margin - expected).abs() < 1e-12);
        // Only 4 vertices: the single 4-subset spans volume 1/6, diameter sqrt2.
        let vol = (1.0 / 6.0) / 2f64.sqrt().powi(3);
        assert!((r.exhaustive_coplanarity_margin.unwrap() - vol).abs() < 1e-12);
        assert!(r.pass);
    }

    #[test]
    fn octahedron_equator_caught_only_exhaustively() {
        // The four equatorial vertices are coplanar but never share a facet.
        let o = crate::genlab::octahedron();
        let r = validate_general_position(&o, 1e-9);
        assert!(r.coplanarity_margin > 1e-3);
        assert!(r.exhaustive_coplanarity_margin.unwrap() < 1e-15);
        assert!(!r.pass);
    }
}
