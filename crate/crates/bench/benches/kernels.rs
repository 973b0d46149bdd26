use criterion::{black_box, criterion_group, criterion_main, Criterion};
use polycast::bounds::BoundsTable;
use polycast::genlab::gen_sphere_hull;
use polycast::{build_hull, castable_faces, clip, direction_lp, Plane, Vec3, DEFAULT_TOL};

fn hull(c: &mut Criterion) {
    let g = gen_sphere_hull(500, 1).unwrap();
    let pts = g.polyhedron.vertices().to_vec();
    c.bench_function("hull_500", |b| b.iter(|| build_hull(black_box(&pts), DEFAULT_TOL).unwrap()));
}

fn lp(c: &mut Criterion) {
    let p = gen_sphere_hull(200, 2).unwrap().polyhedron;
    c.bench_function("direction_lp_200", |b| b.iter(|| direction_lp(black_box(&p), 0, DEFAULT_TOL)));
    c.bench_function("castable_faces_200", |b| b.iter(|| castable_faces(black_box(&p), DEFAULT_TOL)));
}

fn cut(c: &mut Criterion) {
    let p = gen_sphere_hull(200, 3).unwrap().polyhedron;
    let plane = Plane::new(Vec3::new(0.3, -0.2, 1.0), 0.1).unwrap();
    c.bench_function("clip_200", |b| b.iter(|| clip(black_box(&p), &plane, DEFAULT_TOL).unwrap()));
}

fn bounds(c: &mut Criterion) {
    c.bench_function("bounds_table", |b| b.iter(BoundsTable::compute));
}

criterion_group!(benches, hull, lp, cut, bounds);
criterion_main!(benches);
