//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use polycast::genlab::{self, Platonic};
use polycast::{ConvexPolyhedron, Vec3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `count` directions spread over the open hemisphere around `pole`
/// (Fibonacci lattice in the height coordinate).
pub fn hemisphere_directions(pole: Vec3, count: usize) -> Vec<Vec3> {
    let (u, w) = pole.orthonormal_basis();
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..count)
        .map(|i| {
            let h = (i as f64 + 0.5) / count as f64;
            let r = (1.0 - h * h).sqrt();
            let phi = golden * i as f64;
            (u * (r * phi.cos()) + w * (r * phi.sin()) + pole * h).normalize()
        })
        .collect()
}

/// `min(n_F · d, min_G -n_G · d)` for unit `d`.
pub fn cast_margin(p: &ConvexPolyhedron, f: usize, d: Vec3) -> f64 {
    let d = d.normalize();
    (0..p.num_facets())
        .filter(|&g| g != f)
        .map(|g| -p.normal(g).dot(d))
        .fold(p.normal(f).dot(d), f64::min)
}

/// Best casting margin through facet `f`: dense hemisphere sampling, then
/// (unless the best sample is clearly negative) repeated zooming with a local
/// tangent-plane grid around the incumbent.
pub fn sampled_cast_margin(p: &ConvexPolyhedron, f: usize, samples: usize) -> (f64, Vec3) {
    let n = p.normal(f);
    let others: Vec<Vec3> = (0..p.num_facets())
        .filter(|&g| g != f)
        .map(|g| p.normal(g))
        .collect();
    // Margin of unit `d`, abandoned as soon as it drops to `floor`.
    let eval = |d: Vec3, floor: f64| -> f64 {
        let mut m = n.dot(d);
        for g in &others {
            m = m.min(-g.dot(d));
            if m <= floor {
                return m;
            }
        }
        m
    };
    let mut best_d = n;
    let mut best = eval(n, f64::NEG_INFINITY);
    for d in hemisphere_directions(n, samples) {
        let m = eval(d, best);
        if m > best {
            best = m;
            best_d = d;
        }
    }
    if best < -0.1 {
        return (best, best_d);
    }
    const HALF: i32 = 20;
    let mut radius = 0.05;
    while radius > 1e-13 {
        let (u, w) = best_d.orthonormal_basis();
        let center = best_d;
        let step = radius / HALF as f64;
        for i in -HALF..=HALF {
            for j in -HALF..=HALF {
                let d = (center + u * (i as f64 * step) + w * (j as f64 * step)).normalize();
                let m = eval(d, best);
                if m > best {
                    best = m;
                    best_d = d;
                }
            }
        }
        radius *= 0.5;
    }
    (best, best_d)
}

/// Monte-Carlo volume by rejection sampling in the bounding box, with its
/// standard error.
pub fn monte_carlo_volume(p: &ConvexPolyhedron, samples: usize, seed: u64) -> (f64, f64) {
    let mut lo = Vec3::new(f64::INFINITY, f64::INFINITY, f64::INFINITY);
    let mut hi = -lo;
    for v in p.vertices() {
        lo = Vec3::new(lo.x.min(v.x), lo.y.min(v.y), lo.z.min(v.z));
        hi = Vec3::new(hi.x.max(v.x), hi.y.max(v.y), hi.z.max(v.z));
    }
    let ext = hi - lo;
    let box_vol = ext.x * ext.y * ext.z;
    let mut r = rng(seed);
    let mut inside = 0usize;
    for _ in 0..samples {
        let x = Vec3::new(
            lo.x + ext.x * r.gen::<f64>(),
            lo.y + ext.y * r.gen::<f64>(),
            lo.z + ext.z * r.gen::<f64>(),
        );
        if p.planes().iter().all(|pl| pl.normal.dot(x) <= pl.offset) {
            inside += 1;
        }
    }
    let frac = inside as f64 / samples as f64;
    let se = box_vol * (frac * (1.0 - frac) / samples as f64).sqrt();
    (box_vol * frac, se)
}

/// Random rotation (from a normalized Gaussian quaternion) as a matrix.
pub fn random_rotation(r: &mut ChaCha8Rng) -> [[f64; 3]; 3] {
    let q: [f64; 4] = std::array::from_fn(|_| r.sample::<f64, _>(rand_distr::StandardNormal));
    let n = q.iter().map(|x| x * x).sum::<f64>().sqrt();
    let [w, x, y, z] = q.map(|c| c / n);
    [
        [1.0 - 2.0 * (y * y + z * z), 2.0 * (x * y - z * w), 2.0 * (x * z + y * w)],
        [2.0 * (x * y + z * w), 1.0 - 2.0 * (x * x + z * z), 2.0 * (y * z - x * w)],
        [2.0 * (x * z - y * w), 2.0 * (y * z + x * w), 1.0 - 2.0 * (x * x + y * y)],
    ]
}

pub fn apply(m: &[[f64; 3]; 3], v: Vec3) -> Vec3 {
    Vec3::new(
        m[0][0] * v.x + m[0][1] * v.y + m[0][2] * v.z,
        m[1][0] * v.x + m[1][1] * v.y + m[1][2] * v.z,
        m[2][0] * v.x + m[2][1] * v.y + m[2][2] * v.z,
    )
}

/// Platonic solids, random prisms and sphere hulls with n in {10, 50, 200}:
/// 30 polyhedra in all.
pub fn oracle_corpus() -> Vec<(String, ConvexPolyhedron)> {
    let mut out: Vec<(String, ConvexPolyhedron)> = Platonic::ALL
        .iter()
        .map(|s| (format!("{s:?}"), s.build()))
        .collect();
    for k in 0..10u64 {
        let sides = 3 + (k as usize % 6);
        out.push((
            format!("prism{sides}-{k}"),
            genlab::random_prism(sides, 0.5 + 0.2 * k as f64, k),
        ));
    }
    for n in [10, 50, 200] {
        for seed in 0..5u64 {
            let g = genlab::gen_sphere_hull(n, 100 + seed).unwrap();
            out.push((format!("sphere{n}-{seed}"), g.polyhedron));
        }
    }
    out
}

/// Fat sphere-sample hulls for the bound suites.
pub fn fat_corpus(count: usize) -> Vec<genlab::Generated> {
    (0..count as u64)
        .map(|seed| {
            let n = [30, 60, 120, 250][seed as usize % 4];
            genlab::gen_sphere_hull(n, 1000 + seed).unwrap()
        })
        .collect()
}
