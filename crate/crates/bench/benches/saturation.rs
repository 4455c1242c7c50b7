use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use hiersep::trees::SaturateOptions;
use hiersep::{saturate, saturate_naive, st_separates, transition_monoid, Input, Level, Limits, SeparateOptions, Strategy};
use hiersep_bench::{contexts, nfa_pairs, qbf_pair};

fn saturation(c: &mut Criterion) {
    let mut g = c.benchmark_group("saturate");
    for (m, n) in [(3, 3), (5, 4), (8, 6)] {
        let ctxs = contexts(20, m, n, 7);
        g.bench_with_input(BenchmarkId::new("antichain", format!("{m}x{n}")), &ctxs, |b, ctxs| {
            b.iter(|| {
                for ctx in ctxs {
                    let h = ctx.alpha().basis().monoid().j_depth();
                    black_box(saturate(ctx, h, &SaturateOptions::default()).unwrap());
                }
            })
        });
    }
    let small = contexts(20, 3, 3, 7);
    g.bench_function("naive/3x3", |b| {
        b.iter(|| {
            for ctx in &small {
                black_box(saturate_naive(ctx, &Limits::default()).unwrap());
            }
        })
    });
    g.finish();
}

fn levels(c: &mut Criterion) {
    let mut g = c.benchmark_group("separate");
    g.sample_size(10);
    for states in [2, 3] {
        let pairs = nfa_pairs(states, 10, 11);
        for level in Level::st_levels() {
            g.bench_with_input(BenchmarkId::new(level.to_string(), states), &pairs, |b, pairs| {
                b.iter(|| {
                    for (x, y) in pairs {
                        let v = st_separates(
                            &level,
                            &Input::Nfa(x.clone()),
                            &Input::Nfa(y.clone()),
                            Strategy::Tm,
                            &SeparateOptions::default(),
                        );
                        black_box(v.unwrap());
                    }
                })
            });
        }
    }
    let (l, lp) = qbf_pair();
    g.bench_function("qbf-2var/st-3/2", |b| {
        b.iter(|| {
            let v = st_separates(
                &Level::StThreeHalf,
                &Input::Nfa(l.clone()),
                &Input::Nfa(lp.clone()),
                Strategy::Tm,
                &SeparateOptions::default(),
            );
            black_box(v.unwrap());
        })
    });
    g.finish();
}

fn monoids(c: &mut Criterion) {
    let pairs = nfa_pairs(4, 10, 13);
    c.bench_function("transition_monoid/4", |b| {
        b.iter(|| {
            for (x, _) in &pairs {
                black_box(transition_monoid(x, &Limits::default()).unwrap());
            }
        })
    });
}

criterion_group!(benches, saturation, levels, monoids);
criterion_main!(benches);
