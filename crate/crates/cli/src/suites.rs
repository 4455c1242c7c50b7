//! The acceptance suites, shared by `hiersep selftest` and the `acceptance`
//! test target.

use std::sync::Arc;
use std::time::{Duration, Instant};

use hiersep::algebra::morphism_to_nfa;
use hiersep::automata::parse_regex;
use hiersep::corpus::{self, ab, Rng8};
use hiersep::hardness::{build_bpolred_instance, check_qbf_reduction, Lit, Outcome, Qbf, Quantifier};
use hiersep::reduction::{build_l_monoid, build_l_nfa, cyclic_tagging, l_monoid_bound};
use hiersep::separation::red_step;
use hiersep::trees::SaturateOptions;
use hiersep::{
    image, is_good, saturate, saturate_naive, st_separates, verify_certificate, Alphabet, Basis,
    ElemSet, Input, Level, Limits, Nfa, SeparateOptions, Strategy, TagLetters, TreeContext,
};

/// Wall-clock budget of the tree oracle comparison.
pub const ORACLE_BUDGET: Duration = Duration::from_secs(300);
/// Wall-clock budget of the height stability check.
pub const STABILITY_BUDGET: Duration = Duration::from_secs(120);
/// Number of random contexts in the oracle corpus.
pub const RANDOM_CONTEXTS: usize = 200;
/// Extra heights used by the stability check.
pub const EXTRA_HEIGHT: usize = 3;
pub const VERDICTS_BUDGET: Duration = Duration::from_secs(60);
pub const MONOTONICITY_BUDGET: Duration = Duration::from_secs(600);
/// Per-instance budget of the level 3/2 strategy comparison.
pub const TAG_BUDGET: Duration = Duration::from_secs(30);
pub const REDUCTION_BUDGET: Duration = Duration::from_secs(300);
/// Per-formula budget for one-variable QBFs.
pub const QBF_BUDGET: Duration = Duration::from_secs(120);
/// Per-formula budget for the best-effort two-variable QBFs.
pub const QBF2_BUDGET: Duration = Duration::from_secs(60);
pub const QBF_TOTAL_BUDGET: Duration = Duration::from_secs(1800);
/// Per-instance budget of the level 2 transform check.
pub const BPOLRED_BUDGET: Duration = Duration::from_secs(60);
/// Skips at or above this fraction fail a criterion.
pub const MAX_SKIP_RATE: f64 = 0.5;

/// Expected verdicts of the known-verdict suite that the deciders and the
/// independent oracles in `crates/core/tests/finite_oracles.rs` both refute.
/// They are still reported as failures.
pub const DISPUTED_VERDICTS: &[&str] = &["aA* | bA* at st-1/2", "aA* | bA* at st-1"];

#[derive(Clone, Debug)]
pub struct Report {
    pub ok: bool,
    /// Every failure is one of [`DISPUTED_VERDICTS`].
    pub disputed_only: bool,
    pub detail: String,
}

fn report(ok: bool, detail: impl Into<String>) -> Report {
    Report {
        ok,
        disputed_only: false,
        detail: detail.into(),
    }
}

#[derive(Clone, Debug)]
pub struct SuiteResult {
    pub id: usize,
    pub name: &'static str,
    pub report: Report,
    pub seconds: f64,
}

impl SuiteResult {
    pub fn line(&self) -> String {
        format!(
            "criterion {:>2} {:<22} {}  {}",
            self.id,
            self.name,
            if self.report.ok { "PASS" } else { "FAIL" },
            self.report.detail
        )
    }
}

pub const SUITES: [(usize, &str, &str); 10] = [
    (1, "oracle", "oracle equivalence"),
    (2, "oracle", "height stability"),
    (3, "verdicts", "known verdicts"),
    (4, "monotonicity", "level monotonicity"),
    (5, "strategies", "strategy agreement"),
    (6, "reduction", "L[A,P] constructions"),
    (7, "qbf", "QBF reduction"),
    (8, "bpolred", "level 2 transform"),
    (9, "red", "Red chains"),
    (10, "certificates", "certificates"),
];

/// Criterion numbers selected by a suite name (`all` selects everything).
pub fn suite_ids(name: &str) -> Option<Vec<usize>> {
    let ids: Vec<usize> = SUITES
        .iter()
        .filter(|(_, s, _)| name == "all" || *s == name)
        .map(|(i, _, _)| *i)
        .collect();
    (!ids.is_empty()).then_some(ids)
}

/// Runs the selected criteria. Each criterion uses its own number as seed
/// unless `seed` overrides it. `progress` sees every result as it lands.
pub fn run(ids: &[usize], seed: Option<u64>, mut progress: impl FnMut(&SuiteResult)) -> Vec<SuiteResult> {
    let seed_for = |i: usize| seed.unwrap_or(i as u64);
    let mut out = Vec::new();
    let mut push = |id: usize, report: Report, seconds: f64| {
        let name = SUITES[id - 1].2;
        let r = SuiteResult {
            id,
            name,
            report,
            seconds,
        };
        progress(&r);
        out.push(r);
    };
    if ids.contains(&1) || ids.contains(&2) {
        let t = Instant::now();
        let corpus = oracle_corpus(seed_for(1));
        let (r1, r2) = oracle_and_stability(&corpus);
        let secs = t.elapsed().as_secs_f64();
        if ids.contains(&1) {
            push(1, r1, secs);
        }
        if ids.contains(&2) {
            push(2, r2, secs);
        }
    }
    let checks: [(usize, fn(u64) -> Report); 8] = [
        (3, known_verdicts),
        (4, monotonicity),
        (5, strategies),
        (6, reduction),
        (7, qbf),
        (8, bpolred),
        (9, red_chains),
        (10, certificates),
    ];
    for (id, f) in checks {
        if ids.contains(&id) {
            let t = Instant::now();
            let r = f(seed_for(id));
            push(id, r, t.elapsed().as_secs_f64());
        }
    }
    out
}

fn sep(level: &Level, a: &Nfa, b: &Nfa, strategy: Strategy, limits: &Limits) -> hiersep::Result<bool> {
    let opts = SeparateOptions {
        limits: limits.clone(),
        ..SeparateOptions::default()
    };
    Ok(st_separates(level, &Input::Nfa(a.clone()), &Input::Nfa(b.clone()), strategy, &opts)?.separable)
}

fn re(text: &str, a: &Alphabet) -> Nfa {
    parse_regex(text, a).expect("valid expression")
}

fn over_budget(elapsed: Duration, budget: Duration) -> String {
    if elapsed > budget {
        format!(" (over the {}s budget)", budget.as_secs())
    } else {
        String::new()
    }
}

/// The exhaustive and random tree contexts.
pub fn oracle_corpus(seed: u64) -> Vec<TreeContext> {
    let a = ab();
    let la = hiersep::Letter::new("a").expect("letter");
    let z2 = {
        let m = hiersep::Morphism::new(a.clone(), Arc::new(hiersep::Monoid::cyclic(2)), vec![1, 1])
            .expect("parity morphism");
        Basis::user("z2", m).expect("surjective")
    };
    let small_bases = [
        Basis::triv(&a),
        Basis::at_restricted(&a, &[la]).expect("restricted basis"),
        z2,
    ];
    let mut out = Vec::new();
    for b in small_bases {
        let b = Arc::new(b);
        let morphisms = corpus::all_compatible(&b, 3);
        for beta in &morphisms {
            for s in corpus::all_good_subsets(beta) {
                for alpha in &morphisms {
                    out.push(TreeContext::new(alpha.clone(), beta.clone(), s.clone()).expect("valid context"));
                }
            }
        }
    }
    let mut rng = corpus::rng(seed);
    let bases = corpus::corpus_bases();
    for i in 0..RANDOM_CONTEXTS {
        let b = &bases[i % bases.len()];
        out.push(corpus::random_context(&mut rng, b, 5, 4));
    }
    out
}

fn oracle_and_stability(corpus: &[TreeContext]) -> (Report, Report) {
    let limits = Limits::default();
    let opts = SaturateOptions::default();
    let (mut agree, mut stable, mut deep) = (0, 0, 0);
    let mut first_bad = None;
    let (mut t_oracle, mut t_stable) = (Duration::ZERO, Duration::ZERO);
    for (i, ctx) in corpus.iter().enumerate() {
        let t = Instant::now();
        let h = ctx.alpha().basis().monoid().j_depth();
        let f = saturate(ctx, h, &opts).expect("unbounded saturation");
        if f.stats().fixpoint_at.map_or(true, |k| k > 0) {
            deep += 1;
        }
        let naive = saturate_naive(ctx, &limits).expect("unbounded oracle").maximal();
        if f == naive {
            agree += 1;
        } else if first_bad.is_none() {
            first_bad = Some(i);
        }
        t_oracle += t.elapsed();
        let t = Instant::now();
        if saturate(ctx, h + EXTRA_HEIGHT, &opts).expect("unbounded saturation") == f {
            stable += 1;
        }
        t_stable += t.elapsed();
    }
    let n = corpus.len();
    let r1 = report(
        agree == n && t_oracle <= ORACLE_BUDGET,
        format!(
            "{agree}/{n} contexts agree with the oracle ({deep} need an S-operation) in {:.1}s{}{}",
            t_oracle.as_secs_f64(),
            over_budget(t_oracle, ORACLE_BUDGET),
            first_bad.map(|i| format!(", first mismatch #{i}")).unwrap_or_default()
        ),
    );
    let r2 = report(
        stable == n && t_stable <= STABILITY_BUDGET,
        format!(
            "{stable}/{n} contexts unchanged at height h+{EXTRA_HEIGHT} in {:.1}s{}",
            t_stable.as_secs_f64(),
            over_budget(t_stable, STABILITY_BUDGET)
        ),
    );
    (r1, r2)
}

fn known_verdicts(_seed: u64) -> Report {
    let start = Instant::now();
    let a = ab();
    let lim = Limits::default();
    let all = Level::st_levels();
    let mut cases: Vec<(String, Nfa, Nfa, Vec<Level>, bool)> = vec![
        ("aA* | bA*".into(), re("a (a+b)*", &a), re("b (a+b)*", &a), all.to_vec(), true),
        ("{ab} | {a}".into(), re("a b", &a), re("a", &a), vec![Level::StHalf], true),
        ("{a} | {ab}".into(), re("a", &a), re("a b", &a), vec![Level::StHalf], false),
        ("(aa)* | a(aa)*".into(), re("(a a)*", &a), re("a (a a)*", &a), all.to_vec(), false),
    ];
    for (name, text) in [("ab*+ba", "a b* + b a"), ("A*aA*", "(a+b)* a (a+b)*")] {
        cases.push((format!("{name} | itself"), re(text, &a), re(text, &a), all.to_vec(), false));
    }
    let mut wrong = Vec::new();
    let mut total = 0;
    for (name, x, y, levels, expected) in &cases {
        for l in levels {
            total += 1;
            if sep(l, x, y, Strategy::Tm, &lim).expect("small instance") != *expected {
                wrong.push(format!("{name} at {l}"));
            }
        }
    }
    let elapsed = start.elapsed();
    let mut r = report(
        wrong.is_empty() && elapsed <= VERDICTS_BUDGET,
        if wrong.is_empty() {
            format!("{total} verdicts as expected{}", over_budget(elapsed, VERDICTS_BUDGET))
        } else {
            format!(
                "{}/{total} as expected; differs: {}{}",
                total - wrong.len(),
                wrong.join(", "),
                over_budget(elapsed, VERDICTS_BUDGET)
            )
        },
    );
    r.disputed_only = elapsed <= VERDICTS_BUDGET
        && !wrong.is_empty()
        && wrong.iter().all(|w| DISPUTED_VERDICTS.contains(&w.as_str()));
    r
}

fn random_pair(rng: &mut Rng8, max_states: usize, max_trans: Option<usize>) -> (Nfa, Nfa) {
    let a = ab();
    (
        corpus::random_nfa(rng, &a, max_states, 0.4, max_trans),
        corpus::random_nfa(rng, &a, max_states, 0.4, max_trans),
    )
}

fn monotonicity(seed: u64) -> Report {
    let start = Instant::now();
    let mut rng = corpus::rng(seed);
    let lim = Limits::default();
    let levels = Level::st_levels();
    let mut violations = 0;
    let mut profile = [0usize; 4];
    for _ in 0..100 {
        let (x, y) = random_pair(&mut rng, 3, None);
        let v: Vec<bool> = levels
            .iter()
            .map(|l| sep(l, &x, &y, Strategy::Tm, &lim).expect("no caps hit"))
            .collect();
        for (i, &b) in v.iter().enumerate() {
            profile[i] += b as usize;
        }
        if v.windows(2).any(|w| w[0] && !w[1]) {
            violations += 1;
        }
    }
    let elapsed = start.elapsed();
    report(
        violations == 0 && elapsed <= MONOTONICITY_BUDGET,
        format!(
            "{violations} violations; separable pairs per level {profile:?}{}",
            over_budget(elapsed, MONOTONICITY_BUDGET)
        ),
    )
}

fn strategies(seed: u64) -> Report {
    let mut rng = corpus::rng(seed);
    let lim = Limits::default();
    let mut mismatches = Vec::new();
    let (mut skipped, mut tried) = (0, 0);
    for i in 0..100 {
        let (x, y) = random_pair(&mut rng, 3, Some(4));
        for l in [Level::StHalf, Level::StOne] {
            let tm = sep(&l, &x, &y, Strategy::Tm, &lim).expect("no caps hit");
            let tag = sep(&l, &x, &y, Strategy::Tag, &lim).expect("no caps hit");
            if tm != tag {
                mismatches.push(format!("#{i} at {l}"));
            }
        }
        tried += 1;
        let tm = sep(&Level::StThreeHalf, &x, &y, Strategy::Tm, &lim).expect("no caps hit");
        match sep(&Level::StThreeHalf, &x, &y, Strategy::Tag, &lim.clone().with_budget(TAG_BUDGET)) {
            Ok(tag) if tag != tm => mismatches.push(format!("#{i} at st-3/2")),
            Ok(_) => {}
            Err(e) if e.is_resource() => skipped += 1,
            Err(e) => panic!("{e}"),
        }
    }
    let rate = skipped as f64 / tried as f64;
    report(
        mismatches.is_empty() && rate < MAX_SKIP_RATE,
        format!(
            "{} mismatches{}; st-3/2 skipped {skipped}/{tried}",
            mismatches.len(),
            if mismatches.is_empty() { String::new() } else { format!(" ({})", mismatches.join(", ")) }
        ),
    )
}

fn reduction(seed: u64) -> Report {
    let start = Instant::now();
    let mut rng = corpus::rng(seed);
    let lim = Limits::default();
    let a = ab();
    let tags = TagLetters::for_alphabet(&a);
    let (mut equal, mut bounded) = (0, 0);
    let mut largest = 0;
    for _ in 0..100 {
        let n = corpus::random_nfa(&mut rng, &a, 3, 0.4, Some(4));
        let p = cyclic_tagging(n.transition_count().max(1));
        let l_nfa = build_l_nfa(&n, &p, &tags).expect("valid tagging");
        let l_mon = build_l_monoid(&n, &p, &tags, &lim).expect("no caps hit");
        if l_nfa.equivalent(&morphism_to_nfa(&l_mon), &lim).expect("no caps hit") {
            equal += 1;
        }
        let size = l_mon.morphism.monoid().size();
        largest = largest.max(size);
        if size <= l_monoid_bound(&n, &p) {
            bounded += 1;
        }
    }
    let elapsed = start.elapsed();
    report(
        equal == 100 && bounded == 100 && elapsed <= REDUCTION_BUDGET,
        format!(
            "{equal}/100 equivalent, {bounded}/100 within the size bound (largest monoid {largest}){}",
            over_budget(elapsed, REDUCTION_BUDGET)
        ),
    )
}

/// The 12 formulas `Q x_1. C` with `C` a set of one or two clauses drawn
/// from `{x_1}`, `{¬x_1}`, `{x_1, ¬x_1}`.
pub fn one_variable_formulas() -> Vec<Qbf> {
    let sets = [vec![Lit::pos(1)], vec![Lit::neg(1)], vec![Lit::pos(1), Lit::neg(1)]];
    let mut out = Vec::new();
    for mask in 1u32..8 {
        let clauses: Vec<Vec<Lit>> = (0..3).filter(|i| mask >> i & 1 == 1).map(|i| sets[i].clone()).collect();
        if clauses.len() > 2 {
            continue;
        }
        for q in [Quantifier::Exists, Quantifier::Forall] {
            out.push(Qbf::new(vec![q], clauses.clone()).expect("valid formula"));
        }
    }
    out
}

fn two_variable_formulas() -> Vec<Qbf> {
    use Quantifier::*;
    let clauses = vec![vec![Lit::pos(1), Lit::pos(2)], vec![Lit::neg(1), Lit::neg(2)]];
    vec![
        Qbf::new(vec![Exists, Forall], clauses.clone()).expect("valid formula"),
        Qbf::new(vec![Forall, Exists], clauses).expect("valid formula"),
    ]
}

fn qbf(_seed: u64) -> Report {
    let start = Instant::now();
    let lim = Limits::default();
    let formulas = one_variable_formulas();
    let mut tally = [0usize; 3];
    let mut slowest = 0;
    for q in &formulas {
        let r = check_qbf_reduction(q, QBF_BUDGET, &lim).expect("instance builds");
        slowest = slowest.max(r.millis);
        tally[match r.outcome {
            Outcome::Pass => 0,
            Outcome::Fail => 1,
            Outcome::Skipped => 2,
        }] += 1;
    }
    let mut extra = Vec::new();
    for q in two_variable_formulas() {
        let r = check_qbf_reduction(&q, QBF2_BUDGET, &lim).expect("instance builds");
        extra.push(match r.outcome {
            Outcome::Pass => "PASS",
            Outcome::Fail => "FAIL",
            Outcome::Skipped => "SKIPPED",
        });
    }
    let elapsed = start.elapsed();
    report(
        tally[0] == formulas.len() && !extra.contains(&"FAIL") && elapsed <= QBF_TOTAL_BUDGET,
        format!(
            "{}/{} one-variable formulas pass ({} fail, {} skipped, slowest {slowest} ms); two-variable: {}{}",
            tally[0],
            formulas.len(),
            tally[1],
            tally[2],
            extra.join(" "),
            over_budget(elapsed, QBF_TOTAL_BUDGET)
        ),
    )
}

fn bpolred(seed: u64) -> Report {
    let mut rng = corpus::rng(seed);
    let lim = Limits::default();
    let (mut agree, mut skipped, mut disagree) = (0, 0, 0);
    for _ in 0..20 {
        let (h, hp) = random_pair(&mut rng, 2, None);
        let expected = sep(&Level::StThreeHalf, &h, &hp, Strategy::Tm, &lim).expect("no caps hit");
        let inst = build_bpolred_instance(&h, &hp).expect("shared alphabet");
        match sep(&Level::StTwo, &inst.l, &inst.lprime, Strategy::Tm, &lim.clone().with_budget(BPOLRED_BUDGET)) {
            Ok(v) if v == expected => agree += 1,
            Ok(_) => disagree += 1,
            Err(e) if e.is_resource() => skipped += 1,
            Err(e) => panic!("{e}"),
        }
    }
    report(
        disagree == 0 && (skipped as f64 / 20.0) < MAX_SKIP_RATE,
        format!("{agree} agree, {disagree} disagree, {skipped} skipped of 20"),
    )
}

/// Walks `S_0 ⊇ S_1 ⊇ ...` by hand, checking goodness and strict descent
/// at every step.
fn red_chain_ok(cm: &hiersep::CompatibleMorphism, lim: &Limits) -> (bool, usize) {
    let sq = cm.square();
    let n = cm.monoid().size() as u32;
    let img = image(cm.morphism());
    let mut s: ElemSet = img.iter().flat_map(|x| img.iter().map(move |y| x * n + y)).collect();
    let mut len = 1;
    loop {
        if !is_good(&s, &sq) {
            return (false, len);
        }
        let (red, _) = red_step(cm, &sq, &s, lim).expect("no caps hit");
        if !red.is_subset(&s) {
            return (false, len);
        }
        if red == s {
            return (true, len);
        }
        len += 1;
        s = red;
    }
}

fn red_chains(seed: u64) -> Report {
    let mut rng = corpus::rng(seed);
    let lim = Limits::default();
    let bases = corpus::corpus_bases();
    let (mut bad, mut longest) = (0, 0);
    for i in 0..60 {
        let cm = corpus::random_compatible(&mut rng, &bases[i % bases.len()], 6);
        let (ok, len) = red_chain_ok(&cm, &lim);
        longest = longest.max(len);
        bad += !ok as usize;
    }
    // chains recorded by full decider runs on automaton pairs
    let mut rng = corpus::rng(seed);
    let (mut runs, mut bad_runs) = (0, 0);
    for _ in 0..30 {
        let (x, y) = random_pair(&mut rng, 3, None);
        for l in [Level::StOne, Level::StTwo] {
            let opts = SeparateOptions::default();
            let v = st_separates(&l, &Input::Nfa(x.clone()), &Input::Nfa(y.clone()), Strategy::Tm, &opts)
                .expect("no caps hit");
            runs += 1;
            let c = &v.stats.red_chain;
            if c.is_empty() || c.windows(2).any(|w| w[1] >= w[0]) {
                bad_runs += 1;
            }
        }
    }
    report(
        bad == 0 && bad_runs == 0,
        format!(
            "{bad}/60 hand-walked chains broken (longest {longest}); {bad_runs}/{runs} decider chains not strictly decreasing"
        ),
    )
}

fn certificates(seed: u64) -> Report {
    let mut rng = corpus::rng(seed);
    let lim = Limits::default();
    let a = ab();
    let (mut verified, mut separable) = (0, 0);
    for _ in 0..20 {
        let c = corpus::random_at_certificate(&mut rng);
        let k = c.to_nfa(&a, &lim).expect("valid certificate");
        let co = k.complement(&lim).expect("no caps hit");
        if verify_certificate(&c, &k, &co, &lim).expect("no caps hit") {
            verified += 1;
        }
        if sep(&Level::StThreeHalf, &k, &co, Strategy::Tm, &lim).expect("no caps hit") {
            separable += 1;
        }
    }
    report(
        verified == 20 && separable == 20,
        format!("{verified}/20 certificates verify, {separable}/20 separable at st-3/2"),
    )
}
