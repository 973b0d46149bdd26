//! Test polyhedra: canonical solids, prisms, sphere-sample hulls with a target
//! fatness ratio, and general-position perturbations.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fatness::{annulus_at, FatnessReport};
use crate::hull::{build_hull, HullBuilder};
use crate::polyhedron::{ConvexPolyhedron, DEFAULT_TOL};
use crate::position::{validate_general_position, GeneralPositionReport};
use crate::vec3::{Point3, Vec3};

/// Radial jitter used by [`gen_with_target_ratio`] after the ratio is reached.
pub const DEFAULT_EPSILON: f64 = 1e-5;
/// Attempts made by [`perturb_general_position`].
pub const PERTURB_ATTEMPTS: usize = 10;
const INITIAL_SAMPLES: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Platonic {
    Tetrahedron,
    Cube,
    Octahedron,
    Dodecahedron,
    Icosahedron,
}

impl Platonic {
    pub const ALL: [Platonic; 5] = [
        Platonic::Tetrahedron,
        Platonic::Cube,
        Platonic::Octahedron,
        Platonic::Dodecahedron,
        Platonic::Icosahedron,
    ];

    pub fn build(self) -> ConvexPolyhedron {
        match self {
            Platonic::Tetrahedron => regular_tetrahedron(),
            Platonic::Cube => cube(1.0),
            Platonic::Octahedron => octahedron(),
            Platonic::Dodecahedron => dodecahedron(),
            Platonic::Icosahedron => icosahedron(),
        }
    }
}

/// What to generate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum GenSpec {
    SphereHull { n: usize, seed: u64 },
    TargetRatio { ratio: f64, cap: usize, seed: u64 },
    Platonic { solid: Platonic },
    Prism { sides: usize, height: f64, seed: u64 },
    Perturbed { base: Box<GenSpec>, epsilon: f64, seed: u64 },
}

/// A generated polyhedron with its fatness at the generator's center.
#[derive(Debug, Clone)]
pub struct Generated {
    pub spec: GenSpec,
    pub polyhedron: ConvexPolyhedron,
    pub fatness: FatnessReport,
    /// Number of sphere samples used (sphere-based generators only).
    pub points_used: usize,
    /// Sub-seed retries needed because of degenerate samples or perturbations.
    pub retries: usize,
    pub general_position: Option<GeneralPositionReport>,
}

/// Sidecar written next to generated OFF files.
#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub spec: GenSpec,
    pub seed: Option<u64>,
    pub achieved_ratio: f64,
    pub fatness: FatnessReport,
    pub vertices: usize,
    pub facets: usize,
    pub points_used: usize,
    pub retries: usize,
    pub general_position_margins: Option<GeneralPositionReport>,
}

impl Generated {
    pub fn manifest(&self) -> Manifest {
        let seed = match &self.spec {
            GenSpec::SphereHull { seed, .. }
            | GenSpec::TargetRatio { seed, .. }
            | GenSpec::Prism { seed, .. }
            | GenSpec::Perturbed { seed, .. } => Some(*seed),
            GenSpec::Platonic { .. } => None,
        };
        Manifest {
            spec: self.spec.clone(),
            seed,
            achieved_ratio: self.fatness.ratio,
            fatness: self.fatness,
            vertices: self.polyhedron.num_vertices(),
            facets: self.polyhedron.num_facets(),
            points_used: self.points_used,
            retries: self.retries,
            general_position_margins: self.general_position.clone(),
        }
    }
}

/// Runs a generation spec.
pub fn generate(spec: &GenSpec) -> Result<Generated> {
    match spec {
        GenSpec::SphereHull { n, seed } => gen_sphere_hull(*n, *seed),
        GenSpec::TargetRatio { ratio, cap, seed } => gen_with_target_ratio(*ratio, *seed, *cap),
        GenSpec::Platonic { solid } => Ok(with_centroid_fatness(spec.clone(), solid.build())),
        GenSpec::Prism { sides, height, seed } => {
            Ok(with_centroid_fatness(spec.clone(), random_prism(*sides, *height, *seed)))
        }
        GenSpec::Perturbed { base, epsilon, seed } => {
            let g = generate(base)?;
            let p = perturb_general_position(&g.polyhedron, *epsilon, *seed)?;
            let mut out = with_centroid_fatness(spec.clone(), p);
            out.general_position = Some(validate_general_position(&out.polyhedron, DEFAULT_TOL));
            out.points_used = g.points_used;
            Ok(out)
        }
    }
}

fn with_centroid_fatness(spec: GenSpec, p: ConvexPolyhedron) -> Generated {
    let fatness = annulus_at(&p, p.centroid()).expect("centroid of a convex body is interior");
    Generated {
        spec,
        polyhedron: p,
        fatness,
        points_used: 0,
        retries: 0,
        general_position: None,
    }
}

/// Uniform point on the unit sphere (normalized Gaussian triple).
pub fn sphere_point<R: Rng + ?Sized>(rng: &mut R) -> Vec3 {
    loop {
        let v = Vec3::new(
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
        );
        if let Some(u) = v.try_normalize() {
            return u;
        }
    }
}

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Hull of `n` uniform unit-sphere samples; fatness measured at the origin.
pub fn gen_sphere_hull(n: usize, seed: u64) -> Result<Generated> {
    if n < 4 {
        return Err(Error::DegenerateInput("need at least 4 points"));
    }
    let mut last_err = None;
    for retry in 0..PERTURB_ATTEMPTS {
        let mut rng = rng_for(seed, retry as u64);
        let pts: Vec<Point3> = (0..n).map(|_| sphere_point(&mut rng)).collect();
        let p = match build_hull(&pts, DEFAULT_TOL) {
            Ok(p) => p,
            Err(e) => {
                last_err = Some(e);
                continue;
            }
        };
        // Few points can leave the origin outside the hull.
        let Ok(fatness) = annulus_at(&p, Vec3::ZERO) else {
            last_err = Some(Error::DegenerateInput("origin outside the sample hull"));
            continue;
        };
        return Ok(Generated {
            spec: GenSpec::SphereHull { n, seed },
            polyhedron: p,
            fatness,
            points_used: n,
            retries: retry,
            general_position: None,
        });
    }
    Err(last_err.unwrap())
}

/// Grows a sphere-sample hull until its ratio at the origin is at most `ratio`,
/// then perturbs it into general position.
///
/// Starts from a few uniform samples and repeatedly adds the center of the
/// largest cap cut off the unit sphere by a hull facet (the point of the sphere
/// in the direction of that facet's normal), falling back to a uniform sample
/// if a step does not change the hull.
pub fn gen_with_target_ratio(ratio: f64, seed: u64, cap: usize) -> Result<Generated> {
    if ratio.is_nan() || ratio <= 1.0 {
        return Err(Error::DegenerateInput("target ratio must exceed 1"));
    }
    if cap < 4 {
        return Err(Error::CapExceeded {
            cap,
            best_ratio: f64::INFINITY,
        });
    }
    let mut rng = rng_for(seed, 0);
    let mut retries = 0;
    let mut builder = loop {
        let initial: Vec<Point3> = (0..INITIAL_SAMPLES.min(cap))
            .map(|_| sphere_point(&mut rng))
            .collect();
        match HullBuilder::new(&initial, DEFAULT_TOL) {
            Ok(b) => break b,
            Err(_) if retries < PERTURB_ATTEMPTS => retries += 1,
            Err(e) => return Err(e),
        }
    };
    let mut best_ratio = f64::INFINITY;
    let mut perturb_round = 0u64;
    loop {
        let (min_offset, normal) = builder
            .triangles()
            .map(|(_, pl)| (pl.offset, pl.normal))
            .min_by(|a, b| a.0.total_cmp(&b.0))
            .unwrap();
        let current = if min_offset > 0.0 {
            1.0 / min_offset
        } else {
            f64::INFINITY
        };
        best_ratio = best_ratio.min(current);
        if current <= ratio {
            let p = builder.finish()?;
            perturb_round += 1;
            if let Ok(q) = perturb_general_position(&p, DEFAULT_EPSILON, seed ^ (perturb_round << 32)) {
                if let Ok(fatness) = annulus_at(&q, Vec3::ZERO) {
                    if fatness.ratio <= ratio {
                        let gp = validate_general_position(&q, DEFAULT_TOL);
                        return Ok(Generated {
                            spec: GenSpec::TargetRatio { ratio, cap, seed },
                            polyhedron: q,
                            fatness,
                            points_used: builder.points().len(),
                            retries,
                            general_position: Some(gp),
                        });
                    }
                }
            }
        }
        if builder.points().len() >= cap {
            return Err(Error::CapExceeded { cap, best_ratio });
        }
        if !builder.insert(normal) {
            builder.insert(sphere_point(&mut rng));
        }
    }
}

/// Jitters every vertex along its direction from a point near the centroid by
/// a uniform amount in `[-epsilon, epsilon]`, re-hulls, and retries with a
/// fresh sub-seed until the result is in general position.
pub fn perturb_general_position(p: &ConvexPolyhedron, epsilon: f64, seed: u64) -> Result<ConvexPolyhedron> {
    let centroid = p.centroid();
    let inset = p
        .planes()
        .iter()
        .map(|pl| -pl.signed_distance(centroid))
        .fold(f64::INFINITY, f64::min);
    for attempt in 0..PERTURB_ATTEMPTS {
        let candidate = if epsilon == 0.0 {
            p.clone()
        } else {
            let mut rng = rng_for(seed, attempt as u64);
            // Radial jitter about a point offset from the centroid.
            let center = centroid + sphere_point(&mut rng) * (0.01 * inset);
            let pts: Vec<Point3> = p
                .vertices()
                .iter()
                .map(|&v| {
                    let dir = (v - center).normalize();
                    v + dir * rng.gen_range(-epsilon..=epsilon)
                })
                .collect();
            match build_hull(&pts, DEFAULT_TOL) {
                Ok(q) => q,
                Err(_) => continue,
            }
        };
        if validate_general_position(&candidate, DEFAULT_TOL).pass {
            return Ok(candidate);
        }
        if epsilon == 0.0 {
            break;
        }
    }
    Err(Error::PerturbationFailed {
        attempts: PERTURB_ATTEMPTS,
    })
}

fn hull_of(points: &[[f64; 3]]) -> ConvexPolyhedron {
    crate::hull::build_hull_from_arrays(points, DEFAULT_TOL).expect("canonical solid")
}

/// Axis-aligned cube `[-h, h]^3`.
pub fn cube(h: f64) -> ConvexPolyhedron {
    let mut pts = Vec::with_capacity(8);
    for x in [-h, h] {
        for y in [-h, h] {
            for z in [-h, h] {
                pts.push([x, y, z]);
            }
        }
    }
    hull_of(&pts)
}

/// Tetrahedron with vertices at the origin and the three unit axis points.
pub fn unit_tetrahedron() -> ConvexPolyhedron {
    hull_of(&[[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]])
}

/// Regular tetrahedron inscribed in the cube `[-1, 1]^3`, centered at the origin.
pub fn regular_tetrahedron() -> ConvexPolyhedron {
    hull_of(&[[1.0, 1.0, 1.0], [1.0, -1.0, -1.0], [-1.0, 1.0, -1.0], [-1.0, -1.0, 1.0]])
}

pub fn octahedron() -> ConvexPolyhedron {
    hull_of(&[
        [1.0, 0.0, 0.0],
        [-1.0, 0.0, 0.0],
        [0.0, 1.0, 0.0],
        [0.0, -1.0, 0.0],
        [0.0, 0.0, 1.0],
        [0.0, 0.0, -1.0],
    ])
}

fn golden() -> f64 {
    (1.0 + 5f64.sqrt()) / 2.0
}

pub fn icosahedron() -> ConvexPolyhedron {
    let g = golden();
    let mut pts = Vec::new();
    for a in [-1.0, 1.0] {
        for b in [-g, g] {
            pts.push([0.0, a, b]);
            pts.push([a, b, 0.0]);
            pts.push([b, 0.0, a]);
        }
    }
    hull_of(&pts)
}

pub fn dodecahedron() -> ConvexPolyhedron {
    let g = golden();
    let ig = 1.0 / g;
    let mut pts = Vec::new();
    for x in [-1.0, 1.0] {
        for y in [-1.0, 1.0] {
            for z in [-1.0, 1.0] {
                pts.push([x, y, z]);
            }
        }
    }
    for a in [-ig, ig] {
        for b in [-g, g] {
            pts.push([0.0, a, b]);
            pts.push([a, b, 0.0]);
            pts.push([b, 0.0, a]);
        }
    }
    hull_of(&pts)
}

/// Right prism over a convex polygon in the `z = 0` plane, of the given height.
pub fn prism(polygon: &[[f64; 2]], height: f64) -> Result<ConvexPolyhedron> {
    let pts: Vec<Point3> = polygon
        .iter()
        .flat_map(|&[x, y]| [Vec3::new(x, y, 0.0), Vec3::new(x, y, height)])
        .collect();
    build_hull(&pts, DEFAULT_TOL)
}

/// Prism over a polygon inscribed in the unit circle at `sides` random angles.
pub fn random_prism(sides: usize, height: f64, seed: u64) -> ConvexPolyhedron {
    let mut rng = rng_for(seed, 0);
    loop {
        let mut angles: Vec<f64> = (0..sides.max(3))
            .map(|_| rng.gen_range(0.0..std::f64::consts::TAU))
            .collect();
        angles.sort_by(f64::total_cmp);
        let gaps_ok = angles
            .windows(2)
            .all(|w| w[1] - w[0] > 1e-3)
            && angles[0] + std::f64::consts::TAU - angles[angles.len() - 1] > 1e-3;
        let poly: Vec<[f64; 2]> = angles.iter().map(|a| [a.cos(), a.sin()]).collect();
        if gaps_ok {
            if let Ok(p) = prism(&poly, height) {
                if p.num_vertices() == 2 * angles.len() {
                    return p;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn platonic_counts() {
        let expect = [(4, 4), (8, 6), (6, 8), (20, 12), (12, 20)];
        for (s, (v, f)) in Platonic::ALL.iter().zip(expect) {
            let p = s.build();
            assert_eq!((p.num_vertices(), p.num_facets()), (v, f), "{s:?}");
        }
    }

    #[test]
    fn sphere_hull_is_deterministic() {
        let a = gen_sphere_hull(50, 3).unwrap();
        let b = gen_sphere_hull(50, 3).unwrap();
        assert_eq!(a.polyhedron.vertices(), b.polyhedron.vertices());
        assert_eq!(a.fatness, b.fatness);
    }

    #[test]
    fn target_ratio_cap() {
        let e = gen_with_target_ratio(1.000001, 1, 100).unwrap_err();
        assert!(matches!(e, Error::CapExceeded { cap: 100, .. }));
    }

    #[test]
    fn loose_target_is_cheap() {
        let g = gen_with_target_ratio(1.5, 2, 200).unwrap();
        assert!(g.fatness.ratio <= 1.5);
        assert!(g.points_used <= 40, "{}", g.points_used);
        assert!(g.general_position.unwrap().pass);
    }

    #[test]
    fn perturbed_cube_is_in_general_position() {
        let p = perturb_general_position(&cube(1.0), 1e-3, 9).unwrap();
        assert_eq!(p.num_vertices(), 8);
        assert!(p.num_facets() >= 12);
        assert!(validate_general_position(&p, DEFAULT_TOL).pass);
    }

    #[test]
    fn zero_epsilon_keeps_general_position_input() {
        let t = unit_tetrahedron();
        let p = perturb_general_position(&t, 0.0, 0).unwrap();
        assert_eq!(p.vertices(), t.vertices());
        assert!(perturb_general_position(&cube(1.0), 0.0, 0).is_err());
    }
}
