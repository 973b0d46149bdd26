//! Plane cuts into two castable halves: candidate enumeration, search,
//! marked/unmarked edges of the mutual face, and the chain diagnostic.

use std::collections::{BTreeMap, HashSet};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::casting::{castable_faces, direction_lp, direction_lp_with, CastVerdict, Feasibility};
use crate::clip::{clip, CutResult, CutSummary, Half};
use crate::error::{Error, Result};
use crate::fatness::FatnessReport;
use crate::genlab::sphere_point;
use crate::hull::MERGE_ANGLE;
use crate::polyhedron::ConvexPolyhedron;
use crate::vec3::{Plane, Point3, Vec3};

/// Cuts whose smaller half has volume below this fraction of V(P) are skipped.
pub const THIN_SLAB_FRACTION: f64 = 1e-6;
/// Offsets per facet direction in the mixed strategy.
pub const MIXED_FACET_OFFSETS: usize = 7;
const CHUNK: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    VertexTriple,
    FacetParallel,
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CutPlane {
    pub plane: Plane,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Strategy {
    VertexTriple,
    FacetParallel { offsets: usize },
    Random,
    /// Facet-parallel sweeps with 7 offsets, then vertex triples for half of
    /// the remaining budget, then random planes.
    Mixed,
}

impl Strategy {
    pub fn name(&self) -> String {
        match self {
            Strategy::VertexTriple => "vertex-triple".into(),
            Strategy::FacetParallel { offsets } => format!("facet-parallel:{offsets}"),
            Strategy::Random => "random".into(),
            Strategy::Mixed => "mixed".into(),
        }
    }
}

impl std::str::FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "vertex-triple" | "triples" => Ok(Strategy::VertexTriple),
            "random" => Ok(Strategy::Random),
            "mixed" => Ok(Strategy::Mixed),
            "facet-parallel" => Ok(Strategy::FacetParallel {
                offsets: MIXED_FACET_OFFSETS,
            }),
            _ => match s.strip_prefix("facet-parallel:") {
                Some(k) => k
                    .parse()
                    .ok()
                    .filter(|&k: &usize| k > 0)
                    .map(|offsets| Strategy::FacetParallel { offsets })
                    .ok_or_else(|| format!("bad offset count in {s:?}")),
                None => Err(format!("unknown strategy {s:?}")),
            },
        }
    }
}

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// `true` if vertices of `p` lie strictly on both sides of `plane`.
fn crosses_interior(p: &ConvexPolyhedron, plane: &Plane, eps: f64) -> bool {
    let (mut below, mut above) = (false, false);
    for &v in p.vertices() {
        let s = plane.signed_distance(v);
        below |= s < -eps;
        above |= s > eps;
        if below && above {
            return true;
        }
    }
    false
}

fn extent_along(p: &ConvexPolyhedron, n: Vec3) -> (f64, f64) {
    p.vertices()
        .iter()
        .map(|v| n.dot(*v))
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| (lo.min(x), hi.max(x)))
}

/// Facet normal directions with parallel and antiparallel duplicates removed,
/// in order of first facet index.
pub fn distinct_facet_directions(p: &ConvexPolyhedron) -> Vec<Vec3> {
    let mut dirs: Vec<Vec3> = Vec::new();
    let cos = MERGE_ANGLE.cos();
    for f in 0..p.num_facets() {
        let n = p.normal(f);
        if dirs.iter().all(|d| d.dot(n).abs() < cos) {
            dirs.push(n);
        }
    }
    dirs
}

fn facet_parallel(p: &ConvexPolyhedron, offsets: usize, limit: usize) -> Vec<CutPlane> {
    let mut out = Vec::new();
    for n in distinct_facet_directions(p) {
        let (lo, hi) = extent_along(p, n);
        for j in 1..=offsets {
            if out.len() >= limit {
                return out;
            }
            let c = lo + (hi - lo) * j as f64 / (offsets + 1) as f64;
            out.push(CutPlane {
                plane: Plane { normal: n, offset: c },
                provenance: Provenance::FacetParallel,
            });
        }
    }
    out
}

fn vertex_triples(p: &ConvexPolyhedron, budget: usize, seed: u64) -> Vec<CutPlane> {
    let v = p.num_vertices();
    let total = v * v.saturating_sub(1) * v.saturating_sub(2) / 6;
    let triples: Vec<[usize; 3]> = if total <= budget {
        let mut all = Vec::with_capacity(total);
        for a in 0..v {
            for b in a + 1..v {
                for c in b + 1..v {
                    all.push([a, b, c]);
                }
            }
        }
        all
    } else {
        let mut rng = rng_for(seed, 1);
        let mut seen = HashSet::new();
        let mut picked = Vec::with_capacity(budget);
        while picked.len() < budget {
            let mut t = [rng.gen_range(0..v), rng.gen_range(0..v), rng.gen_range(0..v)];
            t.sort_unstable();
            if t[0] != t[1] && t[1] != t[2] && seen.insert(t) {
                picked.push(t);
            }
        }
        picked
    };
    let eps = 1e-9 * p.scale();
    let pts = p.vertices();
    triples
        .into_iter()
        .filter_map(|[a, b, c]| Plane::through_points(pts[a], pts[b], pts[c]))
        .filter(|pl| crosses_interior(p, pl, eps))
        .map(|plane| CutPlane {
            plane,
            provenance: Provenance::VertexTriple,
        })
        .collect()
}

fn random_planes(p: &ConvexPolyhedron, count: usize, seed: u64) -> Vec<CutPlane> {
    let mut rng = rng_for(seed, 2);
    let eps = 1e-9 * p.scale();
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let n = sphere_point(&mut rng);
        let (lo, hi) = extent_along(p, n);
        let c = lo + (hi - lo) * rng.gen::<f64>();
        let plane = Plane { normal: n, offset: c };
        if crosses_interior(p, &plane, eps) {
            out.push(CutPlane {
                plane,
                provenance: Provenance::Random,
            });
        }
    }
    out
}

/// Deterministic list of candidate cut planes (at most `budget`).
pub fn candidate_planes(p: &ConvexPolyhedron, strategy: Strategy, budget: usize, seed: u64) -> Vec<CutPlane> {
    match strategy {
        Strategy::VertexTriple => vertex_triples(p, budget, seed),
        Strategy::FacetParallel { offsets } => facet_parallel(p, offsets, budget),
        Strategy::Random => random_planes(p, budget, seed),
        Strategy::Mixed => {
            let mut out = facet_parallel(p, MIXED_FACET_OFFSETS, budget);
            let rest = budget - out.len();
            out.extend(vertex_triples(p, rest / 2, seed));
            let rest = budget - out.len();
            out.extend(random_planes(p, rest, seed));
            out
        }
    }
}

/// Outcome of cutting P by one plane and testing both halves for castability.
#[derive(Debug, Clone, Serialize)]
pub struct CutVerdict {
    #[serde(skip)]
    pub cut: CutResult,
    pub summary: CutSummary,
    /// Index of C among the facets of P_1 and of P_2.
    pub caps: [usize; 2],
    pub larger: Vec<CastVerdict>,
    pub smaller: Vec<CastVerdict>,
    pub two_castable: bool,
    pub both_through_c: bool,
}

impl CutVerdict {
    pub fn castable_larger(&self) -> impl Iterator<Item = usize> + '_ {
        self.larger.iter().filter(|v| v.castable_weak).map(|v| v.facet)
    }

    pub fn castable_smaller(&self) -> impl Iterator<Item = usize> + '_ {
        self.smaller.iter().filter(|v| v.castable_weak).map(|v| v.facet)
    }
}

pub fn test_cut(p: &ConvexPolyhedron, plane: &Plane, tol: f64) -> Result<CutVerdict> {
    Ok(verdict_for(clip(p, plane, tol)?, tol))
}

fn verdict_for(cut: CutResult, tol: f64) -> CutVerdict {
    let larger = castable_faces(&cut.larger.poly, tol);
    let smaller = castable_faces(&cut.smaller.poly, tol);
    let any = |vs: &[CastVerdict]| vs.iter().any(|v| v.castable_weak);
    let two_castable = any(&larger) && any(&smaller);
    let both_through_c = larger[cut.larger.cap].castable_weak && smaller[cut.smaller.cap].castable_weak;
    CutVerdict {
        summary: cut.summary(),
        caps: [cut.larger.cap, cut.smaller.cap],
        two_castable,
        both_through_c,
        larger,
        smaller,
        cut,
    }
}

/// One edge of the mutual face C.
#[derive(Debug, Clone, Serialize)]
pub struct CapEdge {
    /// Position along the cap polygon; the edge joins points `k` and `k + 1`.
    pub position: usize,
    pub endpoints: [Point3; 2],
    pub length: f64,
    /// Unit outward normal of the edge within the plane of C.
    pub outward: Vec3,
    /// Incident facet other than C in P_1 and in P_2.
    pub facets: [usize; 2],
    /// Facets of P those fragments come from.
    pub sources: [Option<usize>; 2],
    pub marked: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct EdgeMarking {
    pub edges: Vec<CapEdge>,
    pub unmarked: usize,
}

impl EdgeMarking {
    pub fn marked(&self) -> impl Iterator<Item = &CapEdge> {
        self.edges.iter().filter(|e| e.marked)
    }

    pub fn unmarked_edges(&self) -> impl Iterator<Item = &CapEdge> {
        self.edges.iter().filter(|e| !e.marked)
    }
}

fn side_facet(h: &Half, k: usize) -> usize {
    let n = h.cap_vertices.len();
    let (a, b) = (h.cap_vertices[k], h.cap_vertices[(k + 1) % n]);
    let e = h.poly.find_edge(a, b).expect("consecutive cap vertices share an edge");
    if e.facets[0] == h.cap {
        e.facets[1]
    } else {
        e.facets[0]
    }
}

/// Marks each edge of C whose two incident facets lie on one supporting plane
/// (normals within 1e-7 rad, offsets within `tol` times the scale of P).
pub fn classify_edges(p: &ConvexPolyhedron, cut: &CutResult, tol: f64) -> EdgeMarking {
    let m = cut.cap_polygon.len();
    let cos = MERGE_ANGLE.cos();
    let eps = tol * p.scale();
    let edges: Vec<CapEdge> = (0..m)
        .map(|k| {
            let (a, b) = (cut.cap_polygon[k], cut.cap_polygon[(k + 1) % m]);
            let f1 = side_facet(&cut.larger, k);
            let f2 = side_facet(&cut.smaller, k);
            let p1 = cut.larger.poly.plane(f1);
            let p2 = cut.smaller.poly.plane(f2);
            let marked = p1.normal.dot(p2.normal) >= cos && (p1.offset - p2.offset).abs() <= eps;
            CapEdge {
                position: k,
                endpoints: [a, b],
                length: a.distance(b),
                outward: (b - a).cross(cut.cap_normal).normalize(),
                facets: [f1, f2],
                sources: [cut.larger.sources[f1], cut.smaller.sources[f2]],
                marked,
            }
        })
        .collect();
    let unmarked = edges.iter().filter(|e| !e.marked).count();
    EdgeMarking { edges, unmarked }
}

/// Segments in the plane of C parallel to the recession direction, tangent to
/// the inner sphere's cross-section and ending on the outer sphere's.
#[derive(Debug, Clone, Serialize)]
pub struct Chords {
    /// Projection of the fatness center onto the plane of C.
    pub foot: Point3,
    pub inner_radius: f64,
    pub outer_radius: f64,
    pub q: Point3,
    pub s: Point3,
    pub r: Point3,
    pub t: Point3,
}

#[derive(Debug, Clone, Serialize)]
pub struct ChainDiagnostic {
    pub marking: EdgeMarking,
    /// Recession direction of the restricted LP of P_1, in the plane of C.
    pub recession: Option<Vec3>,
    pub lp1_status: Feasibility,
    pub lp1_unbounded: bool,
    /// Every marked edge has `(n, v) <= 0`.
    pub marked_face_away: bool,
    /// Positions of the edges with `(n, v) > 0`, in cyclic order.
    pub chain: Vec<usize>,
    pub chain_contiguous: bool,
    pub chain_all_unmarked: bool,
    /// Lengths in units of the inner radius.
    pub chain_length: f64,
    pub max_chain_edge: f64,
    /// Width of the chain across `v`, in units of the inner radius.
    pub chain_width: f64,
    pub chords: Option<Chords>,
}

fn marked_facets(h: &Half, marking: &EdgeMarking, which: usize) -> Vec<usize> {
    let mut fs: Vec<usize> = marking.marked().map(|e| e.facets[which]).collect();
    fs.sort_unstable();
    fs.dedup();
    fs.retain(|&f| f != h.cap);
    fs
}

/// Recession direction, chain of C's edges facing it, and the tangent chords.
///
/// Requires both halves to be strongly castable through C.
pub fn chain_diagnostic(
    p: &ConvexPolyhedron,
    cut: &CutResult,
    fatness: &FatnessReport,
    tol: f64,
) -> Result<ChainDiagnostic> {
    for (name, h) in [("P_1", &cut.larger), ("P_2", &cut.smaller)] {
        let st = direction_lp(&h.poly, h.cap, tol).status;
        if st != Feasibility::StronglyFeasible {
            return Err(Error::PreconditionFailed(format!(
                "{name} is not strongly castable through the mutual face ({st:?})"
            )));
        }
    }
    let marking = classify_edges(p, cut, tol);
    let lp1 = direction_lp_with(&cut.larger.poly, cut.larger.cap, &marked_facets(&cut.larger, &marking, 0), tol);
    let recession = lp1.recession_bisector();
    let lp1_unbounded = !lp1.recession_rays.is_empty();
    let ri = fatness.r_inner;
    let eps = tol.max(1e-12);

    let (chain, marked_face_away) = match recession {
        Some(v) => (
            marking
                .edges
                .iter()
                .filter(|e| e.outward.dot(v) > eps)
                .map(|e| e.position)
                .collect::<Vec<_>>(),
            marking.marked().all(|e| e.outward.dot(v) <= eps),
        ),
        None => (Vec::new(), false),
    };
    let chain_contiguous = is_cyclic_run(&chain, marking.edges.len());
    let chain_all_unmarked = chain.iter().all(|&k| !marking.edges[k].marked);
    let chain_length = chain.iter().map(|&k| marking.edges[k].length).sum::<f64>() / ri;
    let max_chain_edge = chain
        .iter()
        .map(|&k| marking.edges[k].length)
        .fold(0.0, f64::max)
        / ri;
    let (chain_width, chords) = match recession {
        Some(v) => {
            let across = cut.cap_normal.cross(v).normalize();
            let (lo, hi) = chain
                .iter()
                .flat_map(|&k| marking.edges[k].endpoints)
                .map(|x| across.dot(x))
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), x| (a.min(x), b.max(x)));
            let width = if chain.is_empty() { 0.0 } else { (hi - lo) / ri };
            (width, chords(cut, fatness, v, across))
        }
        None => (0.0, None),
    };
    Ok(ChainDiagnostic {
        marking,
        recession,
        lp1_status: lp1.status,
        lp1_unbounded,
        marked_face_away,
        chain,
        chain_contiguous,
        chain_all_unmarked,
        chain_length,
        max_chain_edge,
        chain_width,
        chords,
    })
}

fn chords(cut: &CutResult, f: &FatnessReport, v: Vec3, across: Vec3) -> Option<Chords> {
    let plane = Plane::through_point(cut.cap_normal, cut.cap_polygon[0])?;
    let h = plane.signed_distance(f.center);
    if h.abs() >= f.r_inner {
        return None;
    }
    let foot = plane.project(f.center);
    let ri = (f.r_inner * f.r_inner - h * h).sqrt();
    let ro = (f.r_outer * f.r_outer - h * h).sqrt();
    let run = (ro * ro - ri * ri).sqrt();
    let q = foot + across * ri;
    let r = foot - across * ri;
    Some(Chords {
        foot,
        inner_radius: ri,
        outer_radius: ro,
        q,
        s: q + v * run,
        r,
        t: r + v * run,
    })
}

/// `true` if the sorted positions form one contiguous run modulo `m`.
fn is_cyclic_run(positions: &[usize], m: usize) -> bool {
    if positions.is_empty() || positions.len() == m {
        return true;
    }
    let set: HashSet<usize> = positions.iter().copied().collect();
    // Exactly one position starts a run.
    positions
        .iter()
        .filter(|&&k| !set.contains(&((k + m - 1) % m)))
        .count()
        == 1
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct MirrorCheck {
    /// Marked-pair constraints of P_2 evaluated at `-d`.
    pub checked: usize,
    /// Smallest `mu_2 · (-d)` over them; positive means all are violated.
    pub min_violation: f64,
    pub pass: bool,
}

/// If P_1 has an interior pull direction `d` through C for its marked-edge
/// facets, then `-d` violates every marked-pair constraint of P_2.
/// Returns `None` when no interior direction exists.
pub fn mirror_antisymmetry(p: &ConvexPolyhedron, cut: &CutResult, tol: f64) -> Option<MirrorCheck> {
    let marking = classify_edges(p, cut, tol);
    let f1 = marked_facets(&cut.larger, &marking, 0);
    let lp1 = direction_lp_with(&cut.larger.poly, cut.larger.cap, &f1, tol);
    let d = lp1.interior_witness?;
    let f2 = marked_facets(&cut.smaller, &marking, 1);
    let min_violation = f2
        .iter()
        .map(|&f| cut.smaller.poly.normal(f).dot(-d))
        .fold(f64::INFINITY, f64::min);
    Some(MirrorCheck {
        checked: f2.len(),
        min_violation,
        pass: f2.is_empty() || min_violation > 0.0,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct SearchReport {
    pub input: String,
    pub budget: usize,
    pub strategies: Vec<String>,
    pub seed: u64,
    pub candidates: usize,
    pub cuts_tested: usize,
    pub skipped_degenerate: usize,
    pub skipped_thin: usize,
    pub witness_index: Option<usize>,
    pub witness_provenance: Option<Provenance>,
    pub witness: Option<CutVerdict>,
    /// Number of tested cuts by count of unmarked edges of C.
    pub unmarked_histogram: BTreeMap<usize, usize>,
    pub max_unmarked: usize,
    pub runtime_ms: f64,
}

enum Outcome {
    Degenerate,
    Thin,
    Tested { unmarked: usize, verdict: Option<Box<CutVerdict>> },
}

fn evaluate(p: &ConvexPolyhedron, plane: &Plane, min_volume: f64, tol: f64) -> Outcome {
    let Ok(cut) = clip(p, plane, tol) else {
        return Outcome::Degenerate;
    };
    if cut.smaller.poly.volume() < min_volume {
        return Outcome::Thin;
    }
    let unmarked = classify_edges(p, &cut, tol).unmarked;
    let v = verdict_for(cut, tol);
    Outcome::Tested {
        unmarked,
        verdict: v.two_castable.then(|| Box::new(v)),
    }
}

/// Tests candidate cuts in order and returns the first 2-castable one by
/// candidate index. Candidates are evaluated in parallel chunks; the search
/// stops after the first chunk containing a witness.
pub fn search_two_castable(
    p: &ConvexPolyhedron,
    input: &str,
    strategies: &[Strategy],
    budget: usize,
    seed: u64,
    tol: f64,
) -> SearchReport {
    let start = Instant::now();
    let mut candidates = Vec::new();
    for (i, s) in strategies.iter().enumerate() {
        let left = budget - candidates.len().min(budget);
        let share = if i + 1 == strategies.len() {
            left
        } else {
            (budget / strategies.len()).min(left)
        };
        candidates.extend(candidate_planes(p, *s, share, seed));
    }
    candidates.truncate(budget);
    let min_volume = THIN_SLAB_FRACTION * p.volume();

    let mut report = SearchReport {
        input: input.to_string(),
        budget,
        strategies: strategies.iter().map(Strategy::name).collect(),
        seed,
        candidates: candidates.len(),
        cuts_tested: 0,
        skipped_degenerate: 0,
        skipped_thin: 0,
        witness_index: None,
        witness_provenance: None,
        witness: None,
        unmarked_histogram: BTreeMap::new(),
        max_unmarked: 0,
        runtime_ms: 0.0,
    };
    'chunks: for (c, chunk) in candidates.chunks(CHUNK).enumerate() {
        let outcomes: Vec<Outcome> = chunk
            .par_iter()
            .map(|cp| evaluate(p, &cp.plane, min_volume, tol))
            .collect();
        for (i, o) in outcomes.into_iter().enumerate() {
            match o {
                Outcome::Degenerate => report.skipped_degenerate += 1,
                Outcome::Thin => report.skipped_thin += 1,
                Outcome::Tested { unmarked, verdict } => {
                    report.cuts_tested += 1;
                    *report.unmarked_histogram.entry(unmarked).or_default() += 1;
                    report.max_unmarked = report.max_unmarked.max(unmarked);
                    if let Some(v) = verdict {
                        let idx = c * CHUNK + i;
                        report.witness_index = Some(idx);
                        report.witness_provenance = Some(candidates[idx].provenance);
                        report.witness = Some(*v);
                        break 'chunks;
                    }
                }
            }
        }
    }
    report.runtime_ms = start.elapsed().as_secs_f64() * 1e3;
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::genlab::{cube, unit_tetrahedron};
    use crate::hull::build_hull_from_arrays;
    use crate::polyhedron::DEFAULT_TOL;

    #[test]
    fn tetrahedron_vertex_triples_are_all_degenerate() {
        let t = unit_tetrahedron();
        assert!(candidate_planes(&t, Strategy::VertexTriple, 100, 0).is_empty());
    }

    #[test]
    fn cube_facet_parallel_count() {
        let c = cube(1.0);
        let cs = candidate_planes(&c, Strategy::FacetParallel { offsets: 5 }, 1000, 0);
        assert_eq!(cs.len(), 15);
        assert!(cs.iter().all(|c| c.provenance == Provenance::FacetParallel));
    }

    #[test]
    fn random_candidates_are_deterministic() {
        let c = cube(1.0);
        let a = candidate_planes(&c, Strategy::Random, 1000, 5);
        let b = candidate_planes(&c, Strategy::Random, 1000, 5);
        assert_eq!(a, b);
        assert_eq!(a.len(), 1000);
        assert_ne!(a, candidate_planes(&c, Strategy::Random, 1000, 6));
    }

    #[test]
    fn mixed_fills_budget() {
        let c = crate::genlab::icosahedron();
        let cs = candidate_planes(&c, Strategy::Mixed, 300, 1);
        assert_eq!(cs.len(), 300);
        assert_eq!(cs[0].provenance, Provenance::FacetParallel);
        assert_eq!(cs.last().unwrap().provenance, Provenance::Random);
    }

    #[test]
    fn strategy_parsing() {
        assert_eq!("mixed".parse::<Strategy>(), Ok(Strategy::Mixed));
        assert_eq!(
            "facet-parallel:5".parse::<Strategy>(),
            Ok(Strategy::FacetParallel { offsets: 5 })
        );
        assert!("facet-parallel:0".parse::<Strategy>().is_err());
        assert!("bogus".parse::<Strategy>().is_err());
    }

    #[test]
    fn cube_midplane_cut() {
        let c = cube(1.0);
        let v = test_cut(&c, &Plane::new(Vec3::Z, 0.0).unwrap(), DEFAULT_TOL).unwrap();
        assert!(v.two_castable);
        assert!(v.both_through_c);
        let m = classify_edges(&c, &v.cut, DEFAULT_TOL);
        assert_eq!(m.edges.len(), 4);
        assert_eq!(m.unmarked, 0);
        let e = chain_diagnostic(&c, &v.cut, &crate::fatness::annulus_at(&c, Vec3::ZERO).unwrap(), DEFAULT_TOL);
        assert!(matches!(e, Err(Error::PreconditionFailed(_))));
    }

    #[test]
    fn cube_search_finds_witness() {
        let c = cube(1.0);
        let r = search_two_castable(&c, "cube", &[Strategy::FacetParallel { offsets: 5 }], 15, 0, DEFAULT_TOL);
        assert_eq!(r.witness_index, Some(0));
        assert!(r.witness.unwrap().two_castable);
    }

    #[test]
    fn tetrahedron_cut_through_edge() {
        // Plane x = y contains the edge from the origin to (0, 0, 1).
        let t = unit_tetrahedron();
        let pl = Plane::new(Vec3::new(1.0, -1.0, 0.0), 0.0).unwrap();
        let cut = clip(&t, &pl, DEFAULT_TOL).unwrap();
        let m = classify_edges(&t, &cut, DEFAULT_TOL);
        assert_eq!(m.edges.len(), 3);
        assert_eq!(m.unmarked, 1);
        let e = m.unmarked_edges().next().unwrap();
        let on_axis = |x: Point3| x.x.abs() < 1e-12 && x.y.abs() < 1e-12;
        assert!(e.endpoints.iter().all(|&x| on_axis(x)));
    }

    #[test]
    fn cyclic_runs() {
        assert!(is_cyclic_run(&[4, 0, 1], 5));
        assert!(is_cyclic_run(&[2, 3], 5));
        assert!(!is_cyclic_run(&[0, 2], 5));
        assert!(is_cyclic_run(&[], 5));
    }

    /// Lens with a ridge edge in the plane z = 0 on the +x side.
    fn ridge_lens() -> ConvexPolyhedron {
        build_hull_from_arrays(
            &[
                [-1.0, 1.0, 1.0],
                [-1.0, -1.0, 1.0],
                [-1.0, 1.0, -1.0],
                [-1.0, -1.0, -1.0],
                [1.0, 1.5, 0.0],
                [1.0, -1.5, 0.0],
            ],
            DEFAULT_TOL,
        )
        .unwrap()
    }

    #[test]
    fn chain_on_ridge_lens() {
        let p = ridge_lens();
        let cut = clip(&p, &Plane::new(Vec3::Z, 0.0).unwrap(), DEFAULT_TOL).unwrap();
        let fat = crate::fatness::best_center(&p, 200);
        let d = chain_diagnostic(&p, &cut, &fat, DEFAULT_TOL).unwrap();
        assert_eq!(d.marking.unmarked, 1);
        let v = d.recession.unwrap();
        assert!((v - Vec3::X).norm() < 1e-9, "{v:?}");
        assert!(d.marked_face_away);
        assert_eq!(d.chain.len(), 1);
        assert!(d.chain_contiguous && d.chain_all_unmarked);
        assert!((d.max_chain_edge * fat.r_inner - 3.0).abs() < 1e-9);
        assert!(d.chain_length >= 2.0);
        let m = mirror_antisymmetry(&p, &cut, DEFAULT_TOL).unwrap();
        assert_eq!(m.checked, 3);
        assert!(m.pass);
    }
}
