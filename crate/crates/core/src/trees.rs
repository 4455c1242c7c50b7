//! Root labels of `(alpha, beta, S)`-trees.
//!
//! A label is a pair `(s, T)` with `s` in the target `M` of `alpha` and `T` a
//! subset of the target `N` of `beta`. The family of root labels is downward
//! closed in `T`, so [`LabelFamily`] keeps only the maximal sets for each `s`.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;

use log::debug;

use crate::algebra::{is_good, CompatibleMorphism, Elem, Monoid};
use crate::{ElemSet, Error, Limits, Result};

/// Two compatible morphisms over a common alphabet and basis, and a good
/// subset `S` of the target of `beta`.
#[derive(Clone, Debug)]
pub struct TreeContext {
    alpha: CompatibleMorphism,
    beta: CompatibleMorphism,
    good: ElemSet,
    by_class: HashMap<Elem, ElemSet>,
}

impl TreeContext {
    pub fn new(alpha: CompatibleMorphism, beta: CompatibleMorphism, good: ElemSet) -> Result<Self> {
        if alpha.alphabet() != beta.alphabet() {
            return Err(Error::AlphabetMismatch("alpha and beta alphabets differ".into()));
        }
        if !alpha.basis().same_as(beta.basis()) {
            return Err(Error::Invalid("alpha and beta use different bases".into()));
        }
        if good.iter().any(|t| t as usize >= beta.monoid().size()) {
            return Err(Error::Invalid("S is not a subset of the target of beta".into()));
        }
        if !is_good(&good, &beta) {
            return Err(Error::Invalid("S is not a good subset".into()));
        }
        Ok(Self::new_unchecked(alpha, beta, good))
    }

    /// Skips the goodness check, which is quadratic in `|S|`.
    pub(crate) fn new_unchecked(
        alpha: CompatibleMorphism,
        beta: CompatibleMorphism,
        good: ElemSet,
    ) -> Self {
        let mut groups: BTreeMap<Elem, Vec<Elem>> = BTreeMap::new();
        for t in good.iter() {
            groups.entry(beta.class(t)).or_default().push(t);
        }
        let by_class = groups
            .into_iter()
            .map(|(c, v)| (c, ElemSet::from_vec(v)))
            .collect();
        TreeContext {
            alpha,
            beta,
            good,
            by_class,
        }
    }

    pub fn alpha(&self) -> &CompatibleMorphism {
        &self.alpha
    }

    pub fn beta(&self) -> &CompatibleMorphism {
        &self.beta
    }

    pub fn good_subset(&self) -> &ElemSet {
        &self.good
    }

    /// `{t ∈ S : ⌈t⌉ = c}`.
    pub fn good_of_class(&self, c: Elem) -> ElemSet {
        self.by_class.get(&c).cloned().unwrap_or_default()
    }

    /// `{(α(w), β(w)) : w ∈ A*}`, sorted.
    pub fn leaf_labels(&self) -> Vec<(Elem, Elem)> {
        let (m, n) = (self.alpha.monoid(), self.beta.monoid());
        let gens: Vec<(Elem, Elem)> = (0..self.alpha.alphabet().len())
            .map(|a| {
                (
                    self.alpha.morphism().letter_image(a),
                    self.beta.morphism().letter_image(a),
                )
            })
            .collect();
        let start = (m.unit(), n.unit());
        let mut seen = BTreeSet::from([start]);
        let mut queue = VecDeque::from([start]);
        while let Some((s, t)) = queue.pop_front() {
            for &(x, y) in &gens {
                let next = (m.mul(s, x), n.mul(t, y));
                if seen.insert(next) {
                    queue.push_back(next);
                }
            }
        }
        seen.into_iter().collect()
    }
}

/// Setwise product in the subset monoid of `n`.
pub(crate) fn set_mul(n: &Monoid, a: &ElemSet, b: &ElemSet) -> ElemSet {
    if let Some(base) = n.square_base() {
        if b.len() >= SQUARE_MIN && a.len() * b.len() >= 4096 {
            return set_mul_square(base, a, b);
        }
    }
    let mut bits = vec![0u64; n.size().div_ceil(64)];
    for x in a.iter() {
        for y in b.iter() {
            let z = n.mul(x, y);
            bits[z as usize / 64] |= 1 << (z % 64);
        }
    }
    bits_to_set(&bits)
}

/// The right operand of setwise products in `M × M`, grouped by first
/// coordinate. The translates `x2 · row` are cached, so the operand can be
/// reused across products.
struct SquareOperand {
    n: usize,
    w: usize,
    firsts: Vec<Elem>,
    rows: Vec<u64>,
    translates: HashMap<Elem, Vec<u64>>,
}

impl SquareOperand {
    fn new(base: &Monoid, b: &ElemSet) -> Self {
        let n = base.size();
        let w = n.div_ceil(64);
        let mut firsts: Vec<Elem> = Vec::new();
        let mut rows: Vec<u64> = Vec::new();
        for y in b.iter() {
            let (y1, y2) = (y / n as Elem, y % n as Elem);
            if firsts.last() != Some(&y1) {
                firsts.push(y1);
                rows.extend(std::iter::repeat(0).take(w));
            }
            let k = firsts.len() - 1;
            rows[k * w + y2 as usize / 64] |= 1 << (y2 % 64);
        }
        SquareOperand {
            n,
            w,
            firsts,
            rows,
            translates: HashMap::new(),
        }
    }

    fn words(&self) -> usize {
        self.n * self.w
    }

    /// ORs `x · b` into `out`, laid out as `n` rows of `w` words.
    fn row_into(&mut self, base: &Monoid, x: Elem, out: &mut [u64]) {
        let (n, w) = (self.n, self.w);
        let (x1, x2) = (x / n as Elem, x % n as Elem);
        let (firsts, rows) = (&self.firsts, &self.rows);
        let tr = self.translates.entry(x2).or_insert_with(|| {
            let mut t = vec![0u64; firsts.len() * w];
            for k in 0..firsts.len() {
                for y2 in bit_iter(&rows[k * w..(k + 1) * w]) {
                    let z = base.mul(x2, y2);
                    t[k * w + z as usize / 64] |= 1 << (z % 64);
                }
            }
            t
        });
        for (k, &y1) in firsts.iter().enumerate() {
            let z1 = base.mul(x1, y1) as usize;
            for (o, r) in out[z1 * w..(z1 + 1) * w].iter_mut().zip(&tr[k * w..(k + 1) * w]) {
                *o |= r;
            }
        }
    }

    fn collect(&self, out: &[u64]) -> ElemSet {
        let (n, w) = (self.n, self.w);
        let mut elems = Vec::new();
        for z1 in 0..n {
            for z2 in bit_iter(&out[z1 * w..(z1 + 1) * w]) {
                elems.push((z1 * n) as Elem + z2);
            }
        }
        ElemSet::from_sorted(elems)
    }

    /// `a · b`.
    fn mul_left(&mut self, base: &Monoid, a: &ElemSet) -> ElemSet {
        let mut out = vec![0u64; self.words()];
        for x in a.iter() {
            self.row_into(base, x, &mut out);
        }
        self.collect(&out)
    }
}

fn set_mul_square(base: &Monoid, a: &ElemSet, b: &ElemSet) -> ElemSet {
    SquareOperand::new(base, b).mul_left(base, a)
}

fn bit_iter(bits: &[u64]) -> impl Iterator<Item = Elem> + '_ {
    bits.iter().enumerate().flat_map(|(i, &word)| {
        let mut word = word;
        std::iter::from_fn(move || {
            if word == 0 {
                return None;
            }
            let b = word.trailing_zeros();
            word &= word - 1;
            Some(i as Elem * 64 + b)
        })
    })
}

fn bits_to_set(bits: &[u64]) -> ElemSet {
    ElemSet::from_sorted(bit_iter(bits).collect())
}

/// The unique idempotent power of `e` in the subset monoid of `n`.
pub(crate) fn set_omega_power(n: &Monoid, e: &ElemSet, limits: &Limits) -> Result<ElemSet> {
    let mut p = e.clone();
    let mut k = 0usize;
    loop {
        let sq = set_mul(n, &p, &p);
        if sq == p {
            return Ok(p);
        }
        p = set_mul(n, &p, e);
        k += 1;
        if k % 64 == 0 {
            limits.check_deadline()?;
        }
    }
}

/// Counters describing one saturation run.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SaturationStats {
    /// Number of height levels computed.
    pub heights: usize,
    /// First height at which the family stopped changing, if reached.
    pub fixpoint_at: Option<usize>,
    /// Stored sets after each height level, starting with `R_0`.
    pub stored_per_height: Vec<usize>,
    /// Number of set products evaluated.
    pub products: u64,
}

/// For every `s` in `M`, the `⊆`-maximal sets `T` such that `(s, T)` is a
/// root label. The family is read as downward closed.
#[derive(Clone, Debug)]
pub struct LabelFamily {
    sets: Vec<Vec<ElemSet>>,
    stats: SaturationStats,
}

impl PartialEq for LabelFamily {
    fn eq(&self, other: &Self) -> bool {
        self.sets == other.sets
    }
}

impl Eq for LabelFamily {}

impl LabelFamily {
    /// Builds a family from arbitrary sets, keeping only the maximal ones.
    pub fn from_sets(m_size: usize, labels: impl IntoIterator<Item = (Elem, ElemSet)>) -> Self {
        let mut sets = vec![Vec::new(); m_size];
        for (s, t) in labels {
            insert_maximal(&mut sets[s as usize], t);
        }
        for v in &mut sets {
            v.sort();
        }
        LabelFamily {
            sets,
            stats: SaturationStats::default(),
        }
    }

    pub fn m_size(&self) -> usize {
        self.sets.len()
    }

    pub fn maximal_sets(&self, s: Elem) -> &[ElemSet] {
        &self.sets[s as usize]
    }

    pub fn iter(&self) -> impl Iterator<Item = (Elem, &ElemSet)> + '_ {
        self.sets
            .iter()
            .enumerate()
            .flat_map(|(s, v)| v.iter().map(move |t| (s as Elem, t)))
    }

    /// Whether `(s, {t})` is a root label.
    pub fn has_root_label(&self, s: Elem, t: Elem) -> bool {
        self.sets[s as usize].iter().any(|x| x.contains(t))
    }

    /// Whether `(s, t)` is a root label.
    pub fn contains(&self, s: Elem, t: &ElemSet) -> bool {
        self.sets[s as usize].iter().any(|x| t.is_subset(x))
    }

    /// Pointwise inclusion of the downward closures.
    pub fn is_below(&self, other: &LabelFamily) -> bool {
        self.iter().all(|(s, t)| other.contains(s, t))
    }

    pub fn stored_count(&self) -> usize {
        self.sets.iter().map(Vec::len).sum()
    }

    pub fn is_antichain(&self) -> bool {
        self.sets.iter().all(|v| {
            v.iter()
                .enumerate()
                .all(|(i, a)| v.iter().enumerate().all(|(j, b)| i == j || !a.is_subset(b)))
        })
    }

    pub fn stats(&self) -> &SaturationStats {
        &self.stats
    }

    /// One line `s: t1 t2 ...` per stored set, in sorted order.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (s, t) in self.iter() {
            let items: Vec<String> = t.iter().map(|x| x.to_string()).collect();
            let _ = writeln!(out, "{s}: {}", items.join(" "));
        }
        out
    }
}

/// Inserts `t` unless dominated; evicts the sets it dominates.
fn insert_maximal(v: &mut Vec<ElemSet>, t: ElemSet) -> bool {
    if v.iter().any(|x| t.is_subset(x)) {
        return false;
    }
    v.retain(|x| !x.is_subset(&t));
    v.push(t);
    true
}

/// Tuning knobs for [`saturate`].
#[derive(Clone, Debug, Default)]
pub struct SaturateOptions {
    /// Drop every `t` with `⌈t⌉ ≠ ⌈s⌉` from generated sets. Only meaningful
    /// for alphabet-testable bases.
    pub prune: bool,
    pub limits: Limits,
}

/// Right operands in `M × M` at least this large are grouped by rows.
const SQUARE_MIN: usize = 32;
/// Generators at least this large get a cache of left translates.
const ROW_CACHE_MIN: usize = 64;
/// Memory cap of the translate caches, in 64-bit words.
const ROW_CACHE_WORDS: usize = 1 << 25;

struct Gen {
    s: Elem,
    t: ElemSet,
    /// `x ↦ x·t` as a bitset over `N`, filled on demand.
    rows: HashMap<Elem, Box<[u64]>>,
    square: Option<SquareOperand>,
    /// `(s, t)` is idempotent, so multiplying by it twice is useless.
    idempotent: bool,
}

struct Work<'a> {
    ctx: &'a TreeContext,
    sets: Vec<Vec<ElemSet>>,
    /// Labels to multiply, with the generator they were last multiplied by.
    queue: VecDeque<(Elem, ElemSet, Option<usize>)>,
    gens: Vec<Gen>,
    stored: usize,
    products: u64,
    cached_words: usize,
    opts: &'a SaturateOptions,
}

impl<'a> Work<'a> {
    fn add(&mut self, s: Elem, t: ElemSet) -> Result<bool> {
        self.add_from(s, t, None)
    }

    fn add_from(&mut self, s: Elem, mut t: ElemSet, origin: Option<usize>) -> Result<bool> {
        if self.opts.prune {
            let c = self.ctx.alpha.class(s);
            t.retain(|&x| self.ctx.beta.class(x) == c);
        }
        let v = &mut self.sets[s as usize];
        let before = v.len();
        if !insert_maximal(v, t.clone()) {
            return Ok(false);
        }
        self.stored = self.stored + v.len() - before;
        self.opts
            .limits
            .check("stored label sets", self.stored, self.opts.limits.stored_sets)?;
        self.queue.push_back((s, t, origin));
        Ok(true)
    }

    /// `left · gens[g].t`.
    fn right_mul(&mut self, left: &ElemSet, g: usize) -> Result<ElemSet> {
        self.products += 1;
        let n = self.ctx.beta.monoid().clone();
        let words = n.size().div_ceil(64);
        let gen = &mut self.gens[g];
        if let Some(base) = n.square_base() {
            if gen.t.len() >= SQUARE_MIN && left.len() * gen.t.len() >= 4096 {
                self.opts.limits.check_deadline()?;
                let op = gen.square.get_or_insert_with(|| SquareOperand::new(base, &gen.t));
                let len = op.words();
                let mut acc = vec![0u64; len];
                for x in left.iter() {
                    if let Some(row) = gen.rows.get(&x) {
                        for (a, r) in acc.iter_mut().zip(row.iter()) {
                            *a |= r;
                        }
                    } else if self.cached_words + len <= ROW_CACHE_WORDS {
                        let mut row = vec![0u64; len];
                        op.row_into(base, x, &mut row);
                        for (a, r) in acc.iter_mut().zip(row.iter()) {
                            *a |= r;
                        }
                        self.cached_words += len;
                        gen.rows.insert(x, row.into_boxed_slice());
                    } else {
                        op.row_into(base, x, &mut acc);
                    }
                }
                return Ok(op.collect(&acc));
            }
        }
        if gen.t.len() < ROW_CACHE_MIN || left.len() < 2 || n.square_base().is_some() {
            return Ok(set_mul(&n, left, &gen.t));
        }
        self.opts.limits.check_deadline()?;
        let mut acc = vec![0u64; words];
        for x in left.iter() {
            if let Some(row) = gen.rows.get(&x) {
                for (a, r) in acc.iter_mut().zip(row.iter()) {
                    *a |= r;
                }
                continue;
            }
            let mut row = vec![0u64; words];
            for y in gen.t.iter() {
                let z = n.mul(x, y);
                row[z as usize / 64] |= 1 << (z % 64);
            }
            for (a, r) in acc.iter_mut().zip(row.iter()) {
                *a |= r;
            }
            if self.cached_words + words <= ROW_CACHE_WORDS {
                self.cached_words += words;
                gen.rows.insert(x, row.into_boxed_slice());
            }
        }
        Ok(bits_to_set(&acc))
    }

    /// Adds `(s, t)` as a generator: as a label, and multiplied on the
    /// right of every stored label.
    fn generator(&mut self, s: Elem, t: ElemSet) -> Result<bool> {
        if !self.add(s, t.clone())? {
            return Ok(false);
        }
        let m = self.ctx.alpha.monoid().clone();
        let idempotent =
            m.mul(s, s) == s && set_mul(self.ctx.beta.monoid(), &t, &t) == t;
        self.gens.push(Gen {
            s,
            t,
            rows: HashMap::new(),
            square: None,
            idempotent,
        });
        let g = self.gens.len() - 1;
        let snapshot: Vec<(Elem, ElemSet)> = self
            .sets
            .iter()
            .enumerate()
            .flat_map(|(x, v)| v.iter().map(move |u| (x as Elem, u.clone())))
            .collect();
        for (x, u) in snapshot {
            let p = self.right_mul(&u, g)?;
            self.add_from(m.mul(x, s), p, Some(g))?;
        }
        Ok(true)
    }

    /// Closes under products. Every label is a product of generators, so
    /// multiplying new labels on the right by generators suffices; products
    /// are monotone, so dominated labels can be dropped.
    fn close(&mut self) -> Result<()> {
        let m = self.ctx.alpha.monoid().clone();
        while let Some((s, t, origin)) = self.queue.pop_front() {
            if !self.sets[s as usize].contains(&t) {
                continue;
            }
            self.opts.limits.check_deadline()?;
            for g in 0..self.gens.len() {
                if origin == Some(g) && self.gens[g].idempotent {
                    continue;
                }
                let x = m.mul(s, self.gens[g].s);
                let p = self.right_mul(&t, g)?;
                self.add_from(x, p, Some(g))?;
            }
        }
        Ok(())
    }

    fn operations(&self) -> Result<Vec<(Elem, ElemSet)>> {
        let m = self.ctx.alpha.monoid();
        let n = self.ctx.beta.monoid();
        let mut out = Vec::new();
        for e in m.idempotents().iter() {
            let x = self.ctx.good_of_class(self.ctx.alpha.class(e));
            for e0 in &self.sets[e as usize] {
                let big = set_omega_power(n, e0, &self.opts.limits)?;
                let t = set_mul(n, &set_mul(n, &big, &x), &big);
                out.push((e, t));
            }
        }
        Ok(out)
    }
}

/// Root labels of trees with at most `max_height` S-operation nodes on each
/// branch. Stops early once a height level adds nothing.
pub fn saturate(ctx: &TreeContext, max_height: usize, opts: &SaturateOptions) -> Result<LabelFamily> {
    let m_size = ctx.alpha.monoid().size();
    let mut work = Work {
        ctx,
        sets: vec![Vec::new(); m_size],
        queue: VecDeque::new(),
        gens: Vec::new(),
        stored: 0,
        cached_words: 0,
        products: 0,
        opts,
    };
    for (s, t) in ctx.leaf_labels() {
        work.add(s, ElemSet::singleton(t))?;
    }
    for a in 0..ctx.alpha.alphabet().len() {
        let s = ctx.alpha.morphism().letter_image(a);
        let t = ctx.beta.morphism().letter_image(a);
        work.gens.push(Gen {
            s,
            t: ElemSet::singleton(t),
            rows: HashMap::new(),
            square: None,
            idempotent: false,
        });
    }
    work.close()?;
    let mut stats = SaturationStats {
        stored_per_height: vec![work.stored],
        ..SaturationStats::default()
    };
    for h in 1..=max_height {
        let mut changed = false;
        for (e, t) in work.operations()? {
            changed |= work.generator(e, t)?;
        }
        work.close()?;
        stats.heights = h;
        stats.stored_per_height.push(work.stored);
        debug!("height {h}: {} stored sets", work.stored);
        if !changed {
            stats.fixpoint_at = Some(h - 1);
            break;
        }
    }
    stats.products = work.products;
    let mut sets = work.sets;
    for v in &mut sets {
        v.sort();
    }
    Ok(LabelFamily { sets, stats })
}

/// The height bound used by the deciders: the length of the longest chain
/// of pairwise distinct elements of the basis monoid, each a two-sided
/// multiple of the previous.
pub fn default_height(ctx: &TreeContext) -> usize {
    ctx.alpha.basis().monoid().element_chain_depth()
}

/// Removes from every stored set the elements whose class differs from the
/// class of the key.
pub fn alphabet_safe_prune(f: &LabelFamily, ctx: &TreeContext) -> LabelFamily {
    let labels = f.iter().map(|(s, t)| {
        let c = ctx.alpha.class(s);
        let kept: ElemSet = t.iter().filter(|&x| ctx.beta.class(x) == c).collect();
        (s, kept)
    });
    let mut out = LabelFamily::from_sets(f.m_size(), labels);
    out.stats = f.stats.clone();
    out
}

/// Largest `|N|` accepted by [`saturate_naive`].
pub const NAIVE_MAX_N: usize = 12;

/// Explicit least fixpoint over `M × 2^N`, with sets stored as bitmasks.
#[derive(Clone, Debug)]
pub struct NaiveLabels {
    labels: Vec<BTreeSet<u32>>,
}

impl NaiveLabels {
    pub fn contains(&self, s: Elem, t: &ElemSet) -> bool {
        self.labels[s as usize].contains(&to_mask(t))
    }

    pub fn len(&self) -> usize {
        self.labels.iter().map(BTreeSet::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = (Elem, ElemSet)> + '_ {
        self.labels
            .iter()
            .enumerate()
            .flat_map(|(s, v)| v.iter().map(move |&k| (s as Elem, from_mask(k))))
    }

    /// Whether every member's subsets are members too.
    pub fn is_downward_closed(&self) -> bool {
        self.labels
            .iter()
            .all(|v| v.iter().all(|&k| submasks(k).all(|x| v.contains(&x))))
    }

    /// The maximal members, as a [`LabelFamily`].
    pub fn maximal(&self) -> LabelFamily {
        LabelFamily::from_sets(self.labels.len(), self.iter())
    }
}

fn to_mask(t: &ElemSet) -> u32 {
    t.iter().fold(0, |acc, x| acc | (1 << x))
}

fn from_mask(k: u32) -> ElemSet {
    (0..32).filter(|i| k >> i & 1 == 1).collect()
}

fn submasks(k: u32) -> impl Iterator<Item = u32> {
    let mut next = Some(k);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == 0 { None } else { Some((cur - 1) & k) };
        Some(cur)
    })
}

/// Closes the leaf labels under the binary rule (every subset of a product)
/// and the S-operation rule applied to exactly idempotent labels.
pub fn saturate_naive(ctx: &TreeContext, limits: &Limits) -> Result<NaiveLabels> {
    let m = ctx.alpha.monoid().clone();
    let n = ctx.beta.monoid().clone();
    limits.check("naive oracle |N|", n.size(), NAIVE_MAX_N)?;
    let n_size = n.size();
    let mul_mask = |a: u32, b: u32| -> u32 {
        let mut out = 0u32;
        for x in 0..n_size {
            if a >> x & 1 == 0 {
                continue;
            }
            for y in 0..n_size {
                if b >> y & 1 == 1 {
                    out |= 1 << n.mul(x as Elem, y as Elem);
                }
            }
        }
        out
    };
    let class_mask: HashMap<Elem, u32> = m
        .elements()
        .map(|s| {
            let c = ctx.alpha.class(s);
            (c, to_mask(&ctx.good_of_class(c)))
        })
        .collect();

    let mut labels: Vec<BTreeSet<u32>> = vec![BTreeSet::new(); m.size()];
    let mut queue: VecDeque<(Elem, u32)> = VecDeque::new();
    let add_down = |labels: &mut Vec<BTreeSet<u32>>,
                        queue: &mut VecDeque<(Elem, u32)>,
                        s: Elem,
                        k: u32| {
        for x in submasks(k) {
            if labels[s as usize].insert(x) {
                queue.push_back((s, x));
            }
        }
    };
    for (s, t) in ctx.leaf_labels() {
        add_down(&mut labels, &mut queue, s, 1 << t);
    }
    while let Some((s, k)) = queue.pop_front() {
        limits.check_deadline()?;
        if m.is_idempotent(s) && mul_mask(k, k) == k {
            let x = class_mask[&ctx.alpha.class(s)];
            let t = mul_mask(mul_mask(k, x), k);
            add_down(&mut labels, &mut queue, s, t);
        }
        let snapshot: Vec<(Elem, u32)> = labels
            .iter()
            .enumerate()
            .flat_map(|(x, v)| v.iter().map(move |&u| (x as Elem, u)))
            .collect();
        for (x, u) in snapshot {
            add_down(&mut labels, &mut queue, m.mul(s, x), mul_mask(k, u));
            add_down(&mut labels, &mut queue, m.mul(x, s), mul_mask(u, k));
        }
    }
    Ok(NaiveLabels { labels })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{image, Basis, Morphism};
    use crate::automata::Alphabet;
    use std::sync::Arc;

    fn trivial_ctx() -> TreeContext {
        let a = Alphabet::new(["a"]).unwrap();
        let basis = Arc::new(Basis::triv(&a));
        let m = Morphism::new(a, Arc::new(Monoid::trivial()), vec![0]).unwrap();
        let cm = CompatibleMorphism::new(m, vec![0], basis).unwrap();
        TreeContext::new(cm.clone(), cm, ElemSet::singleton(0)).unwrap()
    }

    fn parity_ctx() -> TreeContext {
        let a = Alphabet::new(["a"]).unwrap();
        let basis = Arc::new(Basis::triv(&a));
        let m = Morphism::new(a, Arc::new(Monoid::cyclic(2)), vec![1]).unwrap();
        let cm = CompatibleMorphism::new(m, vec![0, 0], basis).unwrap();
        let s = image(cm.morphism());
        TreeContext::new(cm.clone(), cm, s).unwrap()
    }

    #[test]
    fn trivial_family_is_a_fixpoint() {
        let ctx = trivial_ctx();
        let f = saturate(&ctx, 5, &SaturateOptions::default()).unwrap();
        assert_eq!(f.dump(), "0: 0\n");
        assert_eq!(f.stats().fixpoint_at, Some(0));
    }

    #[test]
    fn height_zero_is_leaves() {
        let ctx = parity_ctx();
        let f = saturate(&ctx, 0, &SaturateOptions::default()).unwrap();
        assert_eq!(f.dump(), "0: 0\n1: 1\n");
    }

    #[test]
    fn parity_merges_under_operation() {
        let ctx = parity_ctx();
        let f = saturate(&ctx, 1, &SaturateOptions::default()).unwrap();
        assert_eq!(f.dump(), "0: 0 1\n1: 0 1\n");
        let naive = saturate_naive(&ctx, &Limits::default()).unwrap();
        assert_eq!(naive.maximal(), f);
        assert!(naive.is_downward_closed());
    }

    #[test]
    fn prune_removes_corrupted_entry() {
        let a = Alphabet::new(["a", "b"]).unwrap();
        let basis = Arc::new(Basis::at(&a).unwrap());
        let cm = CompatibleMorphism::new(
            basis.canonical().clone(),
            (0..4).collect(),
            basis.clone(),
        )
        .unwrap();
        let ctx = TreeContext::new(cm.clone(), cm, ElemSet::full(4)).unwrap();
        let f = saturate(&ctx, 3, &SaturateOptions::default()).unwrap();
        assert_eq!(alphabet_safe_prune(&f, &ctx), f);
        let bad = LabelFamily::from_sets(4, [(1, ElemSet::from_vec(vec![1, 3]))]);
        assert_eq!(alphabet_safe_prune(&bad, &ctx).dump(), "1: 1\n");
    }

    #[test]
    fn set_omega_power_in_group() {
        let z3 = Monoid::cyclic(3);
        let e = set_omega_power(&z3, &ElemSet::singleton(1), &Limits::default()).unwrap();
        assert_eq!(e, ElemSet::singleton(0));
        let e = set_omega_power(&z3, &ElemSet::from_vec(vec![0, 1]), &Limits::default()).unwrap();
        assert_eq!(e, ElemSet::full(3));
    }
}
