use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use hiersep::corpus;
use hiersep::hardness::{build_qbf_languages, check_qbf_reduction, parse_qdimacs, Lit, Outcome, Qbf, Quantifier};
use hiersep::reduction::{cyclic_tagging, ReductionArtifacts};
use hiersep::separation::Certificate;
use hiersep::{
    compatible_product, st_separates, transition_monoid, verify_certificate, Basis, ElemSet, Input,
    Level, Limits, RecognizedLanguage, SeparateOptions, Strategy, TagLetters,
};
use hiersep_cli::io::{
    self, exit, language_value, load_input, load_nfa, nfa_value, parse_alphabet, parse_basis, wrap,
    Caps, CliError, CliResult, Manifest,
};
use hiersep_cli::suites;
use rand::Rng;
use serde_json::{json, Value};

/// Separation of regular languages by low levels of concatenation
/// hierarchies.
///
/// Inputs are JSON NFA files, JSON morphism files, or `re:EXPR` expressions
/// over `--alphabet`.
///
/// Exit codes: 0 separable / success, 1 usage or input error, 2 resource cap
/// or time limit hit, 3 inseparable / invalid certificate, 4 a self-check
/// failed.
#[derive(Parser, Debug)]
#[command(name = "hiersep", version, about, long_about)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Largest monoid any construction may build.
    #[arg(long, global = true, default_value_t = 50_000, value_parser = positive)]
    cap_monoid: usize,
    /// Largest determinization (subset construction) allowed.
    #[arg(long, global = true, default_value_t = 1 << 20, value_parser = positive)]
    cap_det: usize,
    /// Largest number of sets a saturation may store.
    #[arg(long, global = true, default_value_t = 4_000_000, value_parser = positive)]
    cap_sets: usize,
    /// Wall-clock limit in seconds.
    #[arg(long, global = true, value_parser = positive_u64)]
    time_limit: Option<u64>,
    /// Seed of every randomized step; recorded in manifests.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output file (default: stdout).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Alphabet of `re:` inputs, comma separated.
    #[arg(long, global = true, default_value = "a,b")]
    alphabet: String,
    /// Log progress to stderr.
    #[arg(short, long, global = true)]
    verbose: bool,
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be positive".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

fn positive_u64(s: &str) -> Result<u64, String> {
    positive(s).map(|n| n as u64)
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum StrategyArg {
    Tm,
    Tag,
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Strategy {
        match s {
            StrategyArg::Tm => Strategy::Tm,
            StrategyArg::Tag => Strategy::Tag,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide whether the first language is separable from the second.
    Separate {
        first: String,
        second: String,
        /// st-1/2, st-1, st-3/2, st-2, pol or bpol.
        #[arg(long, default_value = "st-1/2")]
        level: String,
        /// Basis of pol/bpol: triv, at, at:a,b or user:PATH.
        #[arg(long)]
        basis: Option<String>,
        #[arg(long, value_enum, default_value_t = StrategyArg::Tm)]
        strategy: StrategyArg,
        /// Keep the full compatible product instead of its syntactic quotient.
        #[arg(long)]
        no_minimize: bool,
    },
    /// Export the transition monoid of an automaton, or the canonical
    /// morphism of a basis when no input is given.
    Monoid {
        input: Option<String>,
        /// Basis whose canonical morphism over `--alphabet` is exported.
        #[arg(long)]
        basis: Option<String>,
        /// Export the syntactic monoid instead of the transition monoid.
        #[arg(long)]
        syntactic: bool,
    },
    /// Build the tagged language L[A,P] of an automaton and its monoid.
    Reduce { input: String },
    /// Compile or cross-check QBF instances.
    Qbf {
        #[command(subcommand)]
        action: QbfCommand,
    },
    /// Check that a separator certificate contains the first language and
    /// misses the second.
    Certify {
        certificate: String,
        first: String,
        second: String,
    },
    /// Run acceptance suites.
    Selftest {
        /// oracle, verdicts, monotonicity, strategies, reduction, qbf,
        /// bpolred, red, certificates or all.
        #[arg(long, default_value = "all")]
        suite: String,
    },
    /// Time the deciders on random automaton pairs; writes CSV.
    Bench {
        /// Automaton sizes (states), comma separated.
        #[arg(long, default_value = "1,2,3,4", value_delimiter = ',')]
        sizes: Vec<usize>,
        /// Pairs per size.
        #[arg(long, default_value_t = 10, value_parser = positive)]
        pairs: usize,
        /// Levels to time, comma separated.
        #[arg(long, default_value = "st-1/2,st-1,st-3/2,st-2", value_delimiter = ',')]
        levels: Vec<String>,
        /// Per-instance budget in seconds.
        #[arg(long, default_value_t = 10, value_parser = positive_u64)]
        budget: u64,
    },
}

#[derive(Subcommand, Debug)]
enum QbfCommand {
    /// Compile a QDIMACS formula (or a random one when no file is given)
    /// into a pair of automata.
    Gen {
        file: Option<String>,
        /// Variables of a random formula.
        #[arg(long, default_value_t = 2, value_parser = positive)]
        vars: usize,
        /// Clauses of a random formula.
        #[arg(long, default_value_t = 2, value_parser = positive)]
        clauses: usize,
        /// Directory receiving `l.json`, `lprime.json` and `instance.json`.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Check that the formula is true iff its instance is inseparable at
    /// st-3/2.
    Check {
        file: String,
        /// Budget in seconds for the separation check.
        #[arg(long, default_value_t = 120, value_parser = positive_u64)]
        budget: u64,
    },
}

impl Common {
    fn caps(&self) -> Caps {
        Caps {
            monoid_size: self.cap_monoid,
            det_states: self.cap_det,
            stored_sets: self.cap_sets,
            time_limit_s: self.time_limit,
        }
    }

    fn manifest(&self, command: &str) -> Manifest {
        Manifest::new(command, self.seed, self.caps())
    }

    fn limits(&self) -> Limits {
        self.caps().limits()
    }

    /// Renders either the JSON document or the text form with a manifest
    /// header.
    fn output(&self, manifest: &Manifest, fields: Vec<(&str, Value)>, text: String) -> CliResult<()> {
        let body = match self.format {
            Format::Json => wrap(manifest, fields),
            Format::Text if self.out.is_some() => format!("{}{text}", manifest.text_header()),
            Format::Text => text,
        };
        io::emit(self.out.as_deref(), &body)
    }
}

fn separate(
    c: &Common,
    first: &str,
    second: &str,
    level: &str,
    basis: Option<&str>,
    strategy: Strategy,
    no_minimize: bool,
) -> CliResult<u8> {
    let alphabet = parse_alphabet(&c.alphabet)?;
    let mut m = c.manifest("separate");
    let (basis, basis_record) = match basis {
        Some(b) => {
            let (spec, rec) = parse_basis(b)?;
            (Some(spec), rec)
        }
        None => (None, None),
    };
    if basis.is_some() && !matches!(level, "pol" | "bpol") {
        return Err(CliError::usage("--basis only applies to --level pol and bpol"));
    }
    let level = Level::parse(level, basis)?;
    let (in1, r1) = load_input(first, &alphabet)?;
    let (in2, r2) = load_input(second, &alphabet)?;
    m.inputs = vec![r1, r2];
    m.inputs.extend(basis_record);
    m.param("level", level.to_string());
    m.param("strategy", strategy.to_string());
    m.param("minimize", !no_minimize);
    let opts = SeparateOptions {
        limits: c.limits(),
        minimize: !no_minimize,
    };
    let v = st_separates(&level, &in1, &in2, strategy, &opts)?;
    let text = format!(
        "{} at {} (strategy {}); monoid {}, {} stored sets\n",
        if v.separable { "separable" } else { "inseparable" },
        v.level,
        strategy,
        v.stats.monoid_size,
        v.stats.stored_sets
    );
    c.output(&m, vec![("verdict", serde_json::to_value(&v)?)], text)?;
    Ok(if v.separable { exit::SEPARABLE } else { exit::INSEPARABLE })
}

fn syntactic(l: &RecognizedLanguage, limits: &Limits) -> CliResult<RecognizedLanguage> {
    let triv = std::sync::Arc::new(Basis::triv(l.alphabet()));
    let (cm, f, _) = compatible_product(l, l, &triv, limits)?;
    let (q, mut fs) = cm.syntactic_quotient(&[&f]);
    Ok(RecognizedLanguage::new(q.morphism().clone(), fs.pop().expect("one accept set"))?)
}

fn monoid(c: &Common, input: Option<&str>, basis: Option<&str>, want_syntactic: bool) -> CliResult<u8> {
    let alphabet = parse_alphabet(&c.alphabet)?;
    let limits = c.limits();
    let mut m = c.manifest("monoid");
    let lang = match (input, basis) {
        (Some(arg), None) => {
            let (inp, rec) = load_input(arg, &alphabet)?;
            m.inputs.push(rec);
            match inp {
                Input::Nfa(n) => transition_monoid(&n, &limits)?,
                Input::Language(l) => l,
            }
        }
        (None, Some(b)) => {
            let (spec, rec) = parse_basis(b)?;
            m.inputs.extend(rec);
            m.param("basis", spec.to_string());
            let basis = spec.build(&alphabet)?;
            RecognizedLanguage::new(basis.canonical().clone(), ElemSet::new())?
        }
        _ => return Err(CliError::usage("give exactly one of an input or --basis")),
    };
    let lang = if want_syntactic { syntactic(&lang, &limits)? } else { lang };
    m.param("syntactic", want_syntactic);
    let monoid = lang.morphism.monoid();
    let stats = json!({
        "size": monoid.size(),
        "idempotents": monoid.idempotents().len(),
        "j_depth": monoid.j_depth(),
    });
    let text = format!(
        "size {}, {} idempotents, J-depth {}\n",
        monoid.size(),
        monoid.idempotents().len(),
        monoid.j_depth()
    );
    c.output(&m, vec![("morphism", language_value(&lang)), ("stats", stats)], text)?;
    Ok(exit::OK)
}

fn reduce(c: &Common, input: &str) -> CliResult<u8> {
    let alphabet = parse_alphabet(&c.alphabet)?;
    let (n, rec) = load_nfa(input, &alphabet)?;
    let mut m = c.manifest("reduce");
    m.inputs.push(rec);
    let p = cyclic_tagging(n.transition_count().max(1));
    let tags = TagLetters::for_alphabet(n.alphabet());
    let art = ReductionArtifacts::build(&n, &p, &tags, &c.limits())?;
    let summary = art.summary();
    let text = format!(
        "L[A,P]: {} NFA states, monoid {} (bound {}, {})\n",
        summary.language_nfa_states,
        summary.monoid_size,
        summary.size_bound,
        if summary.size_bound_holds { "holds" } else { "VIOLATED" }
    );
    let ok = summary.size_bound_holds;
    c.output(
        &m,
        vec![
            ("morphism", language_value(&art.language_monoid)),
            ("language_nfa", nfa_value(&art.language_nfa)),
            ("artifacts", serde_json::to_value(&summary)?),
        ],
        text,
    )?;
    Ok(if ok { exit::OK } else { exit::CHECK_FAILED })
}

fn random_qbf(seed: u64, vars: usize, clauses: usize) -> Qbf {
    let mut rng = corpus::rng(seed);
    let quantifiers = (0..vars)
        .map(|_| if rng.gen_bool(0.5) { Quantifier::Exists } else { Quantifier::Forall })
        .collect();
    let clauses = (0..clauses)
        .map(|_| {
            let width = rng.gen_range(1..=vars.min(3));
            let mut c: Vec<Lit> = Vec::new();
            while c.len() < width {
                let v = rng.gen_range(1..=vars);
                if c.iter().all(|l| l.var != v) {
                    c.push(if rng.gen_bool(0.5) { Lit::pos(v) } else { Lit::neg(v) });
                }
            }
            c
        })
        .collect();
    Qbf::new(quantifiers, clauses).expect("well-formed by construction")
}

fn qbf_gen(c: &Common, file: Option<&str>, vars: usize, clauses: usize, out_dir: Option<&PathBuf>) -> CliResult<u8> {
    let mut m = c.manifest("qbf gen");
    let q = match file {
        Some(f) => {
            let (text, rec) = io::read_file(f)?;
            m.inputs.push(rec);
            parse_qdimacs(&text)?
        }
        None => {
            m.param("vars", vars);
            m.param("clauses", clauses);
            random_qbf(c.seed, vars, clauses)
        }
    };
    let inst = build_qbf_languages(&q)?;
    let qm = inst.manifest(&q);
    let fields = |with_nfas: bool| {
        let mut f = vec![
            ("qdimacs", Value::String(q.to_qdimacs())),
            ("truth", Value::Bool(hiersep::hardness::eval_qbf(&q))),
            ("instance", serde_json::to_value(&qm).expect("serializable")),
        ];
        if with_nfas {
            f.push(("l", nfa_value(&inst.l)));
            f.push(("lprime", nfa_value(&inst.lprime)));
        }
        f
    };
    match out_dir {
        Some(dir) => {
            std::fs::create_dir_all(dir)?;
            let write = |name: &str, body: String| {
                io::emit(Some(&dir.join(name)), &body)
            };
            write("instance.json", wrap(&m, fields(false)))?;
            write("l.json", wrap(&m, vec![("nfa", nfa_value(&inst.l))]))?;
            write("lprime.json", wrap(&m, vec![("nfa", nfa_value(&inst.lprime))]))?;
            println!(
                "wrote {} (L: {} states, L': {} states)",
                dir.display(),
                qm.l_states,
                qm.lprime_states
            );
        }
        None => {
            let text = format!(
                "{} variables, {} clauses; L: {} states, L': {} states\n",
                q.var_count(),
                q.clauses.len(),
                qm.l_states,
                qm.lprime_states
            );
            c.output(&m, fields(true), text)?;
        }
    }
    Ok(exit::OK)
}

fn qbf_check(c: &Common, file: &str, budget: u64) -> CliResult<u8> {
    let (text, rec) = io::read_file(file)?;
    let q = parse_qdimacs(&text)?;
    let mut m = c.manifest("qbf check");
    m.inputs.push(rec);
    m.param("budget_s", budget);
    let r = check_qbf_reduction(&q, Duration::from_secs(budget), &c.limits())?;
    let word = match r.outcome {
        Outcome::Pass => "PASS",
        Outcome::Fail => "FAIL",
        Outcome::Skipped => "SKIPPED",
    };
    let text = format!(
        "{word}: formula {}, instance {} at st-3/2 (strategy tm)\n",
        r.truth,
        match r.separable {
            Some(true) => "separable",
            Some(false) => "inseparable",
            None => "undecided within budget",
        }
    );
    let mut report = serde_json::to_value(&r)?;
    if let Value::Object(o) = &mut report {
        o.remove("millis");
    }
    c.output(&m, vec![("report", report)], text)?;
    Ok(match r.outcome {
        Outcome::Pass => exit::OK,
        Outcome::Fail => exit::CHECK_FAILED,
        Outcome::Skipped => exit::RESOURCE,
    })
}

fn certify(c: &Common, cert: &str, first: &str, second: &str) -> CliResult<u8> {
    let alphabet = parse_alphabet(&c.alphabet)?;
    let (text, rc) = io::read_file(cert)?;
    let certificate = Certificate::from_json(&text)?;
    let (n1, r1) = load_nfa(first, &alphabet)?;
    let (n2, r2) = load_nfa(second, &alphabet)?;
    let mut m = c.manifest("certify");
    m.inputs = vec![rc, r1, r2];
    let valid = verify_certificate(&certificate, &n1, &n2, &c.limits())?;
    let text = format!(
        "certificate {} at {}\n",
        if valid { "valid" } else { "invalid" },
        certificate.level
    );
    c.output(&m, vec![("valid", Value::Bool(valid))], text)?;
    Ok(if valid { exit::OK } else { exit::INSEPARABLE })
}

fn selftest(c: &Common, suite: &str) -> CliResult<u8> {
    let ids = suites::suite_ids(suite).ok_or_else(|| CliError::usage(format!("unknown suite `{suite}`")))?;
    let seed = (c.seed != 0).then_some(c.seed);
    let results = suites::run(&ids, seed, |r| {
        if c.verbose {
            eprintln!("{} ({:.1}s)", r.line(), r.seconds);
        }
    });
    let text: String = results.iter().map(|r| format!("{}\n", r.line())).collect();
    let m = c.manifest("selftest");
    let rows: Vec<Value> = results
        .iter()
        .map(|r| json!({"criterion": r.id, "name": r.name, "pass": r.report.ok, "detail": r.report.detail}))
        .collect();
    c.output(&m, vec![("results", Value::Array(rows))], text)?;
    Ok(if results.iter().all(|r| r.report.ok) { exit::OK } else { exit::CHECK_FAILED })
}

fn bench(c: &Common, sizes: &[usize], pairs: usize, levels: &[String], budget: u64) -> CliResult<u8> {
    let levels = levels
        .iter()
        .map(|l| Level::parse(l, None))
        .collect::<hiersep::Result<Vec<_>>>()?;
    let alphabet = parse_alphabet(&c.alphabet)?;
    let mut rng = corpus::rng(c.seed);
    let mut m = c.manifest("bench");
    m.param("sizes", sizes);
    m.param("pairs", pairs);
    m.param("budget_s", budget);
    let mut csv = m.text_header();
    csv.push_str("states,pair,level,outcome,monoid_size,stored_sets,millis\n");
    for &n in sizes {
        for i in 0..pairs {
            let x = corpus::random_nfa(&mut rng, &alphabet, n, 0.4, None);
            let y = corpus::random_nfa(&mut rng, &alphabet, n, 0.4, None);
            for l in &levels {
                let opts = SeparateOptions {
                    limits: c.limits().with_budget(Duration::from_secs(budget)),
                    ..SeparateOptions::default()
                };
                let t = Instant::now();
                let r = st_separates(l, &Input::Nfa(x.clone()), &Input::Nfa(y.clone()), Strategy::Tm, &opts);
                let ms = t.elapsed().as_millis();
                let row = match r {
                    Ok(v) => format!(
                        "{n},{i},{l},{},{},{},{ms}\n",
                        if v.separable { "separable" } else { "inseparable" },
                        v.stats.monoid_size,
                        v.stats.stored_sets
                    ),
                    Err(e) if e.is_resource() => format!("{n},{i},{l},skipped,,,{ms}\n"),
                    Err(e) => return Err(e.into()),
                };
                if c.verbose {
                    eprint!("{row}");
                }
                csv.push_str(&row);
            }
        }
    }
    io::emit(c.out.as_deref(), &csv)?;
    Ok(exit::OK)
}

fn run(cli: Cli) -> CliResult<u8> {
    let c = &cli.common;
    match &cli.command {
        Command::Separate {
            first,
            second,
            level,
            basis,
            strategy,
            no_minimize,
        } => separate(c, first, second, level, basis.as_deref(), (*strategy).into(), *no_minimize),
        Command::Monoid { input, basis, syntactic } => monoid(c, input.as_deref(), basis.as_deref(), *syntactic),
        Command::Reduce { input } => reduce(c, input),
        Command::Qbf { action } => match action {
            QbfCommand::Gen {
                file,
                vars,
                clauses,
                out_dir,
            } => qbf_gen(c, file.as_deref(), *vars, *clauses, out_dir.as_ref()),
            QbfCommand::Check { file, budget } => qbf_check(c, file, *budget),
        },
        Command::Certify {
            certificate,
            first,
            second,
        } => certify(c, certificate, first, second),
        Command::Selftest { suite } => selftest(c, suite),
        Command::Bench {
            sizes,
            pairs,
            levels,
            budget,
        } => bench(c, sizes, *pairs, levels, *budget),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { exit::USAGE } else { exit::OK });
        }
    };
    env_logger::Builder::new()
        .filter_level(if cli.common.verbose { log::LevelFilter::Debug } else { log::LevelFilter::Warn })
        .parse_default_env()
        .init();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code)
        }
    }
}
