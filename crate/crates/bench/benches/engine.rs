use std::hint::black_box;
use std::sync::Arc;

use criterion::{criterion_group, criterion_main, Criterion};
use uag_core::dsl::Document;
use uag_core::geometry::{ac_closure, decompose, ClosureSystem};
use uag_core::sigterm::parse_system;
use uag_core::{AffineSpace, FiniteAlgebra, Limits};

const ALGEBRAS: &str = "
signature G { op +/2; op -/1; const e; }
signature B { op */2; }
algebra Z3 over G { carrier 3; + = [[0,1,2],[1,2,0],[2,0,1]]; - = [0,2,1]; e = 0; }
algebra Z4 over G {
  carrier 4;
  + = [[0,1,2,3],[1,2,3,0],[2,3,0,1],[3,0,1,2]];
  - = [0,3,2,1];
  e = 0;
}
algebra Sheffer over B { carrier 3; * = [[1,1,1],[1,2,2],[1,2,0]]; }
";

fn algebra(name: &str) -> Arc<FiniteAlgebra> {
    Document::parse(ALGEBRAS).unwrap().algebra(name).unwrap().algebra.clone()
}

fn closure(c: &mut Criterion) {
    let z4 = AffineSpace::standard(algebra("Z4"), 2, Limits::default()).unwrap();
    let sheffer = AffineSpace::standard(algebra("Sheffer"), 2, Limits::default()).unwrap();
    c.bench_function("term functions of Z4^2", |b| b.iter(|| black_box(z4.full().coordinate_algebra().unwrap().len())));
    // about a second per run: the groupoid is primal, so T(A^2) has 3^9 elements
    let mut dense = c.benchmark_group("dense");
    dense.sample_size(10);
    dense.bench_function("closure system of a primal groupoid, n=2", |b| {
        b.iter(|| black_box(ClosureSystem::new(&sheffer).unwrap().functions()))
    });
    dense.finish();
    let line = AffineSpace::standard(algebra("Z4"), 2, Limits::default()).unwrap();
    let y = uag_core::AlgebraicSet::from_codes(line.clone(), vec![0, 1, 6]);
    c.bench_function("ac closure of three points in Z4^2", |b| b.iter(|| black_box(ac_closure(&y).unwrap().len())));
}

fn solve(c: &mut Criterion) {
    let space = AffineSpace::standard(algebra("Z3"), 4, Limits::default()).unwrap();
    let s = parse_system("+(x1,x2) = x3; +(x3,-(x4)) = e;", space.signature(), space.vars()).unwrap();
    c.bench_function("solve two equations in Z3^4", |b| b.iter(|| black_box(space.solve(&s).unwrap().len())));
    let plane = AffineSpace::standard(algebra("Z3"), 2, Limits::default()).unwrap();
    let y = plane.full();
    c.bench_function("decompose Z3^2", |b| b.iter(|| black_box(decompose(&y).unwrap().len())));
}

fn homs(c: &mut Criterion) {
    let limits = Limits::default();
    let z4 = algebra("Z4");
    let z4sq = z4.direct_power(2, &limits).unwrap();
    c.bench_function("homomorphisms Z4^2 -> Z4", |b| {
        b.iter(|| black_box(z4sq.homomorphisms_to(&z4, &limits).unwrap().len()))
    });
    let sheffer = algebra("Sheffer");
    let cube = sheffer.direct_power(2, &limits).unwrap();
    c.bench_function("separation of a 9-element groupoid by its factor", |b| {
        b.iter(|| black_box(cube.separation_by(&sheffer, &limits).unwrap().separated))
    });
}

criterion_group!(benches, closure, solve, homs);
criterion_main!(benches);
