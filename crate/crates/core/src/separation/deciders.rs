use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{reachable, Verdict, VerdictStats};
use crate::algebra::{image, CompatibleMorphism, Elem};
use crate::trees::{default_height, saturate, SaturateOptions, TreeContext};
use crate::{ElemSet, Error, LabelFamily, Limits, Result};

/// Above this many pairs, closure under multiplication is checked on a
/// seeded sample of this size.
pub const GOOD_CHECK_PAIRS: usize = 1 << 26;

fn saturate_with(ctx: &TreeContext, limits: &Limits) -> Result<(LabelFamily, usize)> {
    let h = default_height(ctx);
    let opts = SaturateOptions {
        prune: false,
        limits: limits.clone(),
    };
    Ok((saturate(ctx, h, &opts)?, h))
}

/// Separation by `Pol` of the basis of `cm`: `α^{-1}(F0)` is separable from
/// `α^{-1}(F1)` iff no `(s0, {s1})` with `s0 ∈ F0`, `s1 ∈ F1` is a root label
/// of an `(α, α, α(A*))`-tree.
pub fn pol_separates(
    cm: &CompatibleMorphism,
    f0: &ElemSet,
    f1: &ElemSet,
    limits: &Limits,
) -> Result<Verdict> {
    let img = image(cm.morphism());
    let ctx = TreeContext::new_unchecked(cm.clone(), cm.clone(), img.clone());
    let (family, height) = saturate_with(&ctx, limits)?;
    let mut witnesses = Vec::new();
    for s0 in reachable(f0, &img) {
        for s1 in reachable(f1, &img) {
            if family.has_root_label(s0, s1) {
                witnesses.push((s0, s1));
            }
        }
    }
    Ok(Verdict {
        separable: witnesses.is_empty(),
        level: format!("pol({})", cm.basis().kind()),
        strategy: None,
        witnesses,
        stats: VerdictStats {
            monoid_size: cm.monoid().size(),
            basis_size: cm.basis().monoid().size(),
            height,
            saturations: 1,
            stored_sets: family.stored_count(),
            ..VerdictStats::default()
        },
    })
}

/// `Red(α, S)`: the pairs `(s, t) ∈ S` such that `(s, {(t, s)})` is a root
/// label of an `(α, β, S)`-tree, where `β = (α, α)`. Pairs are encoded as
/// `s·|M| + t`.
pub fn red_step(
    cm: &CompatibleMorphism,
    beta: &CompatibleMorphism,
    s: &ElemSet,
    limits: &Limits,
) -> Result<(ElemSet, LabelFamily)> {
    let n = cm.monoid().size() as Elem;
    let ctx = TreeContext::new_unchecked(cm.clone(), beta.clone(), s.clone());
    let (family, _) = saturate_with(&ctx, limits)?;
    let red = s
        .iter()
        .filter(|&p| {
            let (x, y) = (p / n, p % n);
            family.has_root_label(x, y * n + x)
        })
        .collect();
    Ok((red, family))
}

/// Membership bitmap over `0..size`.
struct Bitmap(Vec<u64>);

impl Bitmap {
    fn new(size: usize, set: &ElemSet) -> Bitmap {
        let mut v = vec![0u64; size.div_ceil(64)];
        for x in set.iter() {
            v[x as usize / 64] |= 1 << (x % 64);
        }
        Bitmap(v)
    }

    fn contains(&self, x: Elem) -> bool {
        self.0[x as usize / 64] >> (x % 64) & 1 == 1
    }
}

/// Checks goodness of `s` for `beta`; returns whether the check was sampled.
fn check_good(s: &ElemSet, beta: &CompatibleMorphism, limits: &Limits) -> Result<bool> {
    let m = beta.monoid();
    let bits = Bitmap::new(m.size(), s);
    if !image(beta.morphism()).iter().all(|x| bits.contains(x)) {
        return Err(Error::Invariant("S does not contain the image of beta".into()));
    }
    let items = s.as_slice();
    let closed_at = |x: Elem, y: Elem| bits.contains(m.mul(x, y));
    let sampled = items.len().saturating_mul(items.len()) > GOOD_CHECK_PAIRS;
    let ok = if sampled {
        let mut rng = ChaCha8Rng::seed_from_u64(items.len() as u64);
        (0..GOOD_CHECK_PAIRS).all(|_| {
            let x = items[rng.gen_range(0..items.len())];
            let y = items[rng.gen_range(0..items.len())];
            closed_at(x, y)
        })
    } else {
        let mut ok = true;
        for &x in items {
            limits.check_deadline()?;
            if !items.iter().all(|&y| closed_at(x, y)) {
                ok = false;
                break;
            }
        }
        ok
    };
    if !ok {
        return Err(Error::Invariant("S is not closed under multiplication".into()));
    }
    Ok(sampled)
}

/// Separation by `BPol` of the basis of `cm`, through the greatest fixpoint
/// of `Red` below `α(A*) × α(A*)`.
pub fn bpol_separates(
    cm: &CompatibleMorphism,
    f0: &ElemSet,
    f1: &ElemSet,
    limits: &Limits,
) -> Result<Verdict> {
    let n = cm.monoid().size() as Elem;
    let img = image(cm.morphism());
    let beta = cm.square();
    let mut s: ElemSet = img
        .iter()
        .flat_map(|x| img.iter().map(move |y| x * n + y))
        .collect();
    let mut stats = VerdictStats {
        monoid_size: cm.monoid().size(),
        basis_size: cm.basis().monoid().size(),
        height: cm.basis().monoid().element_chain_depth(),
        red_chain: vec![s.len()],
        ..VerdictStats::default()
    };
    loop {
        if check_good(&s, &beta, limits)? {
            stats.sampled_good_checks += 1;
        }
        let (red, family) = red_step(cm, &beta, &s, limits)?;
        stats.saturations += 1;
        stats.stored_sets = family.stored_count();
        if !red.is_subset(&s) {
            return Err(Error::Invariant("Red(S) is not a subset of S".into()));
        }
        if red.len() == s.len() {
            break;
        }
        s = red;
        stats.red_chain.push(s.len());
    }
    let mut witnesses = Vec::new();
    for s0 in reachable(f0, &img) {
        for s1 in reachable(f1, &img) {
            if s.contains(s0 * n + s1) {
                witnesses.push((s0, s1));
            }
        }
    }
    Ok(Verdict {
        separable: witnesses.is_empty(),
        level: format!("bpol({})", cm.basis().kind()),
        strategy: None,
        witnesses,
        stats,
    })
}
