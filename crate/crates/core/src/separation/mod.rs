//! Separation deciders and level dispatch.

mod certificate;
mod deciders;

use std::fmt;
use std::sync::Arc;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::algebra::{compatible_product, transition_monoid, Basis, Elem, RecognizedLanguage};
use crate::automata::{Alphabet, Nfa};
use crate::{reduction, ElemSet, Error, Limits, Result};

pub use certificate::{verify_certificate, CertExpr, CertItem, Certificate};
pub use deciders::{bpol_separates, pol_separates, red_step, GOOD_CHECK_PAIRS};

/// Which closure of the basis a level denotes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Closure {
    Pol,
    BPol,
}

/// A basis choice independent of the alphabet.
#[derive(Clone, Debug)]
pub enum BasisSpec {
    Triv,
    At,
    AtRestricted(Vec<String>),
    User(Arc<Basis>),
}

impl BasisSpec {
    /// `triv`, `at` or `at:a,b`. User bases are built with [`BasisSpec::User`].
    pub fn parse(text: &str) -> Result<BasisSpec> {
        match text {
            "triv" => Ok(BasisSpec::Triv),
            "at" => Ok(BasisSpec::At),
            _ => match text.strip_prefix("at:") {
                Some(rest) => Ok(BasisSpec::AtRestricted(
                    rest.split(',').filter(|s| !s.is_empty()).map(String::from).collect(),
                )),
                None => Err(Error::Invalid(format!("unknown basis `{text}`"))),
            },
        }
    }

    pub fn build(&self, alphabet: &Alphabet) -> Result<Basis> {
        match self {
            BasisSpec::Triv => Ok(Basis::triv(alphabet)),
            BasisSpec::At => Basis::at(alphabet),
            BasisSpec::AtRestricted(_) => Basis::parse_spec(&self.to_string(), alphabet),
            BasisSpec::User(b) => {
                if !b.alphabet().same_set(alphabet) {
                    return Err(Error::AlphabetMismatch(
                        "user basis alphabet differs from the input alphabet".into(),
                    ));
                }
                b.reindexed(alphabet)
            }
        }
    }
}

impl fmt::Display for BasisSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisSpec::Triv => write!(f, "triv"),
            BasisSpec::At => write!(f, "at"),
            BasisSpec::AtRestricted(ls) => write!(f, "at:{}", ls.join(",")),
            BasisSpec::User(b) => write!(f, "{}", b.kind()),
        }
    }
}

/// A level of a concatenation hierarchy.
#[derive(Clone, Debug)]
pub enum Level {
    StHalf,
    StOne,
    StThreeHalf,
    StTwo,
    Pol(BasisSpec),
    BPol(BasisSpec),
}

impl Level {
    /// `st-1/2`, `st-1`, `st-3/2`, `st-2`, or `pol`/`bpol` over `basis`.
    pub fn parse(text: &str, basis: Option<BasisSpec>) -> Result<Level> {
        let basis = || basis.clone().unwrap_or(BasisSpec::Triv);
        match text {
            "st-1/2" => Ok(Level::StHalf),
            "st-1" => Ok(Level::StOne),
            "st-3/2" => Ok(Level::StThreeHalf),
            "st-2" => Ok(Level::StTwo),
            "pol" => Ok(Level::Pol(basis())),
            "bpol" => Ok(Level::BPol(basis())),
            _ => Err(Error::Invalid(format!("unknown level `{text}`"))),
        }
    }

    pub fn desugar(&self) -> (Closure, BasisSpec) {
        match self {
            Level::StHalf => (Closure::Pol, BasisSpec::Triv),
            Level::StOne => (Closure::BPol, BasisSpec::Triv),
            Level::StThreeHalf => (Closure::Pol, BasisSpec::At),
            Level::StTwo => (Closure::BPol, BasisSpec::At),
            Level::Pol(b) => (Closure::Pol, b.clone()),
            Level::BPol(b) => (Closure::BPol, b.clone()),
        }
    }

    /// The four Straubing-Thérien levels, in increasing order.
    pub fn st_levels() -> [Level; 4] {
        [Level::StHalf, Level::StOne, Level::StThreeHalf, Level::StTwo]
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Level::StHalf => write!(f, "st-1/2"),
            Level::StOne => write!(f, "st-1"),
            Level::StThreeHalf => write!(f, "st-3/2"),
            Level::StTwo => write!(f, "st-2"),
            Level::Pol(b) => write!(f, "pol({b})"),
            Level::BPol(b) => write!(f, "bpol({b})"),
        }
    }
}

/// Counters attached to a verdict. Wall time is kept out of the serialized
/// form so that equal runs give identical files.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictStats {
    /// Size of the monoid handed to the decider.
    pub monoid_size: usize,
    /// Size of the compatible product before the syntactic quotient.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub product_size: Option<usize>,
    pub basis_size: usize,
    pub height: usize,
    pub saturations: usize,
    /// Stored sets of the last saturation.
    pub stored_sets: usize,
    /// `|S_0|, |S_1|, ...` for BPol runs.
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub red_chain: Vec<usize>,
    /// Goodness checks done on a sample instead of exhaustively.
    #[serde(skip_serializing_if = "is_zero", default)]
    pub sampled_good_checks: usize,
    #[serde(skip)]
    pub wall_ms: u128,
}

fn is_zero(x: &usize) -> bool {
    *x == 0
}

/// Outcome of a separation query. Inseparable verdicts list the bad pairs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub separable: bool,
    pub level: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub strategy: Option<String>,
    pub witnesses: Vec<(Elem, Elem)>,
    pub stats: VerdictStats,
}

impl Verdict {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("verdict serializes")
    }
}

/// An input language: an automaton or a recognizing morphism.
#[derive(Clone, Debug)]
pub enum Input {
    Nfa(Nfa),
    Language(RecognizedLanguage),
}

impl Input {
    pub fn alphabet(&self) -> &Alphabet {
        match self {
            Input::Nfa(n) => n.alphabet(),
            Input::Language(l) => l.alphabet(),
        }
    }

    pub fn to_nfa(&self) -> Nfa {
        match self {
            Input::Nfa(n) => n.clone(),
            Input::Language(l) => l.to_nfa(),
        }
    }

    fn to_language(&self, limits: &Limits) -> Result<RecognizedLanguage> {
        match self {
            Input::Nfa(n) => transition_monoid(n, limits),
            Input::Language(l) => Ok(l.clone()),
        }
    }
}

/// How NFA inputs are turned into a morphism.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// Transition monoids of both automata.
    Tm,
    /// The tagging reduction to `L[A,P]` languages over `A ∪ {0,1}`.
    Tag,
}

impl Strategy {
    pub fn parse(text: &str) -> Result<Strategy> {
        match text {
            "tm" => Ok(Strategy::Tm),
            "tag" => Ok(Strategy::Tag),
            _ => Err(Error::Invalid(format!("unknown strategy `{text}`"))),
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::Tm => "tm",
            Strategy::Tag => "tag",
        })
    }
}

/// Options for [`st_separates`].
#[derive(Clone, Debug)]
pub struct SeparateOptions {
    pub limits: Limits,
    /// Replace the compatible product by its syntactic quotient before
    /// deciding. The recognized languages, hence the verdict, are unchanged.
    pub minimize: bool,
}

impl Default for SeparateOptions {
    fn default() -> Self {
        SeparateOptions {
            limits: Limits::default(),
            minimize: true,
        }
    }
}

/// Decides whether `in1` is separable from `in2` at `level`.
pub fn st_separates(
    level: &Level,
    in1: &Input,
    in2: &Input,
    strategy: Strategy,
    opts: &SeparateOptions,
) -> Result<Verdict> {
    let start = Instant::now();
    let limits = &opts.limits;
    if !in1.alphabet().same_set(in2.alphabet()) {
        return Err(Error::AlphabetMismatch("inputs use different alphabets".into()));
    }
    let (closure, spec) = level.desugar();
    let both_morphisms = matches!((in1, in2), (Input::Language(_), Input::Language(_)));
    let (cm, f0, f1) = if strategy == Strategy::Tag && !both_morphisms {
        let n1 = in1.to_nfa();
        let n2 = in2.to_nfa().with_alphabet(n1.alphabet())?;
        let r = reduction::reduce_instance(&n1, &n2, level, limits)?;
        (r.morphism, r.accept0, r.accept1)
    } else {
        let l1 = in1.to_language(limits)?;
        let l2 = in2.to_language(limits)?;
        let basis = Arc::new(spec.build(l1.alphabet())?);
        compatible_product(&l1, &l2, &basis, limits)?
    };
    let product_size = cm.monoid().size();
    let (cm, f0, f1) = if opts.minimize {
        let (q, mut fs) = cm.syntactic_quotient(&[&f0, &f1]);
        let f1 = fs.pop().expect("two accept sets");
        let f0 = fs.pop().expect("two accept sets");
        (q, f0, f1)
    } else {
        (cm, f0, f1)
    };
    let mut verdict = match closure {
        Closure::Pol => pol_separates(&cm, &f0, &f1, limits)?,
        Closure::BPol => bpol_separates(&cm, &f0, &f1, limits)?,
    };
    verdict.level = level.to_string();
    verdict.strategy = Some(strategy.to_string());
    verdict.stats.product_size = Some(product_size);
    verdict.stats.wall_ms = start.elapsed().as_millis();
    Ok(verdict)
}

/// Elements of `f` that lie in the image of the morphism.
pub(crate) fn reachable(f: &ElemSet, img: &ElemSet) -> Vec<Elem> {
    f.iter().filter(|&x| img.contains(x)).collect()
}
