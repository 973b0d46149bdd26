//! Concentric-sphere fatness: inner radius (largest ball at a center inside
//! P), outer radius (smallest ball at the same center containing P), and the
//! edge/area/volume bounds they imply.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polyhedron::ConvexPolyhedron;
use crate::vec3::{Point3, Vec3};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FatnessReport {
    pub center: Point3,
    pub r_inner: f64,
    pub r_outer: f64,
    pub ratio: f64,
    /// `true` when the radii are exact for `center`; `false` when the center
    /// itself came from a heuristic search.
    pub certified: bool,
}

/// Inner and outer radii of the concentric spheres at `center`.
pub fn annulus_at(p: &ConvexPolyhedron, center: Point3) -> Result<FatnessReport> {
    let r_inner = inner_radius(p, center);
    if r_inner <= 0.0 {
        return Err(Error::CenterOutside { distance: r_inner });
    }
    let r_outer = outer_radius(p, center);
    Ok(FatnessReport {
        center,
        r_inner,
        r_outer,
        ratio: r_outer / r_inner,
        certified: true,
    })
}

fn inner_radius(p: &ConvexPolyhedron, c: Point3) -> f64 {
    p.planes()
        .iter()
        .map(|pl| -pl.signed_distance(c))
        .fold(f64::INFINITY, f64::min)
}

fn outer_radius(p: &ConvexPolyhedron, c: Point3) -> f64 {
    p.vertices()
        .iter()
        .map(|&v| (v - c).norm_squared())
        .fold(0.0, f64::max)
        .sqrt()
}

fn ratio_at(p: &ConvexPolyhedron, c: Point3) -> f64 {
    let ri = inner_radius(p, c);
    if ri <= 0.0 {
        f64::INFINITY
    } else {
        outer_radius(p, c) / ri
    }
}

/// Default iteration budget of the ratio-minimizing stage of [`best_center`].
pub const DEFAULT_CENTER_ITERS: usize = 200;

/// Searches for the center minimizing `R_o / R_i`.
///
/// Stage 1 climbs toward the center of the largest inscribed ball from the
/// centroid; stage 2 minimizes the ratio with a Nelder–Mead simplex seeded at
/// the stage-1 point for `iters` iterations per restart. The result is never
/// worse than the centroid's ratio and is reported as uncertified.
pub fn best_center(p: &ConvexPolyhedron, iters: usize) -> FatnessReport {
    let centroid = p.centroid();
    let scale = p.diameter();
    let stage1 = nelder_mead(
        |c| -inner_radius(p, c),
        centroid,
        0.1 * scale,
        iters.max(50),
        1e-13 * scale,
    );
    let mut best = if ratio_at(p, stage1) < ratio_at(p, centroid) {
        stage1
    } else {
        centroid
    };
    let mut step = 0.05 * scale;
    for _ in 0..8 {
        let next = nelder_mead(|c| ratio_at(p, c), best, step, iters, 1e-14 * scale);
        let improved = ratio_at(p, next) < ratio_at(p, best);
        if improved {
            best = next;
        }
        step *= 0.25;
        if !improved && step < 1e-9 * scale {
            break;
        }
    }
    let mut report = annulus_at(p, best).expect("search stays inside the polyhedron");
    report.certified = false;
    report
}

/// Minimizes `f` over R^3 with the Nelder–Mead simplex method.
fn nelder_mead(f: impl Fn(Vec3) -> f64, start: Vec3, step: f64, iters: usize, xtol: f64) -> Vec3 {
    let mut simplex: Vec<(Vec3, f64)> = [Vec3::ZERO, Vec3::X, Vec3::Y, Vec3::Z]
        .iter()
        .map(|&e| {
            let x = start + e * step;
            (x, f(x))
        })
        .collect();
    for _ in 0..iters {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let spread = simplex[1..]
            .iter()
            .map(|(x, _)| x.distance(simplex[0].0))
            .fold(0.0, f64::max);
        if spread < xtol {
            break;
        }
        let centroid = simplex[..3].iter().fold(Vec3::ZERO, |acc, (x, _)| acc + *x) / 3.0;
        let (worst, f_worst) = simplex[3];
        let reflect = centroid + (centroid - worst);
        let f_reflect = f(reflect);
        if f_reflect < simplex[0].1 {
            let expand = centroid + (centroid - worst) * 2.0;
            let f_expand = f(expand);
            simplex[3] = if f_expand < f_reflect {
                (expand, f_expand)
            } else {
                (reflect, f_reflect)
            };
        } else if f_reflect < simplex[2].1 {
            simplex[3] = (reflect, f_reflect);
        } else {
            let (towards, f_towards) = if f_reflect < f_worst {
                (reflect, f_reflect)
            } else {
                (worst, f_worst)
            };
            let contract = centroid + (towards - centroid) * 0.5;
            let f_contract = f(contract);
            if f_contract < f_towards {
                simplex[3] = (contract, f_contract);
            } else {
                let best = simplex[0].0;
                for s in simplex.iter_mut().skip(1) {
                    let x = best + (s.0 - best) * 0.5;
                    *s = (x, f(x));
                }
            }
        }
    }
    simplex
        .into_iter()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap()
        .0
}

/// Bounds implied for a polyhedron normalized to inner radius 1 and outer radius `R`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SizeBounds {
    pub ratio: f64,
    /// Maximum edge length `2 sqrt(R^2 - 1)`.
    pub l_star: f64,
    /// Maximum facet area `pi (R^2 - 1)`.
    pub s_star: f64,
    pub v_lo: f64,
    pub v_hi: f64,
}

impl SizeBounds {
    pub fn for_ratio(ratio: f64) -> Self {
        let excess = (ratio * ratio - 1.0).max(0.0);
        SizeBounds {
            ratio,
            l_star: 2.0 * excess.sqrt(),
            s_star: PI * excess,
            v_lo: 4.0 * PI / 3.0,
            v_hi: 4.0 * PI * ratio.powi(3) / 3.0,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SizeBoundItem {
    pub name: String,
    pub value: f64,
    pub bound: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SizeBoundsCheck {
    pub bounds: SizeBounds,
    pub items: Vec<SizeBoundItem>,
}

impl SizeBoundsCheck {
    pub fn pass(&self) -> bool {
        self.items.iter().all(|i| i.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &SizeBoundItem> {
        self.items.iter().filter(|i| !i.pass)
    }
}

/// Checks edge, facet-area, volume and diameter bounds of `p` against the
/// values implied by `report`, after rescaling so the inner radius is 1.
pub fn check_size_bounds(p: &ConvexPolyhedron, report: &FatnessReport, tol: f64) -> SizeBoundsCheck {
    let s = 1.0 / report.r_inner;
    let bounds = SizeBounds::for_ratio(report.r_outer / report.r_inner);
    let mut items = Vec::new();
    let max_edge = p.edge_lengths().into_iter().fold(0.0, f64::max) * s;
    items.push(SizeBoundItem {
        name: "max edge length".into(),
        value: max_edge,
        bound: bounds.l_star,
        pass: max_edge <= bounds.l_star + tol,
    });
    let max_area = (0..p.num_facets())
        .map(|f| p.face_area(f))
        .fold(0.0, f64::max)
        * s
        * s;
    items.push(SizeBoundItem {
        name: "max facet area".into(),
        value: max_area,
        bound: bounds.s_star,
        pass: max_area <= bounds.s_star + tol,
    });
    let vol = p.volume() * s.powi(3);
    items.push(SizeBoundItem {
        name: "volume lower".into(),
        value: vol,
        bound: bounds.v_lo,
        pass: vol > bounds.v_lo - tol,
    });
    items.push(SizeBoundItem {
        name: "volume upper".into(),
        value: vol,
        bound: bounds.v_hi,
        pass: vol < bounds.v_hi + tol,
    });
    let diam = p.diameter() * s;
    items.push(SizeBoundItem {
        name: "diameter".into(),
        value: diam,
        bound: 2.0 * bounds.ratio,
        pass: diam <= 2.0 * bounds.ratio + tol,
    });
    SizeBoundsCheck { bounds, items }
}
