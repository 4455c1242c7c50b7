//! Loading inputs and wrapping outputs in manifests.

use std::fmt;
use std::path::Path;
use std::sync::Arc;

use hiersep::algebra::MorphismFile;
use hiersep::automata::{parse_regex, NfaFile};
use hiersep::{Alphabet, Basis, BasisSpec, Input, Limits, Nfa, RecognizedLanguage};
use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

/// Process exit codes.
pub mod exit {
    pub const SEPARABLE: u8 = 0;
    pub const OK: u8 = 0;
    pub const USAGE: u8 = 1;
    pub const RESOURCE: u8 = 2;
    pub const INSEPARABLE: u8 = 3;
    pub const CHECK_FAILED: u8 = 4;
}

/// A failure with its exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError {
            code: exit::USAGE,
            message: message.into(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<hiersep::Error> for CliError {
    fn from(e: hiersep::Error) -> Self {
        CliError {
            code: if e.is_resource() { exit::RESOURCE } else { exit::USAGE },
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::usage(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::usage(format!("malformed JSON: {e}"))
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Where an input came from, for the manifest.
#[derive(Clone, Debug, Serialize)]
pub struct InputRecord {
    pub source: String,
    pub sha256: String,
}

pub fn read_file(path: &str) -> CliResult<(String, InputRecord)> {
    let bytes = std::fs::read(path).map_err(|e| CliError::usage(format!("cannot read `{path}`: {e}")))?;
    let text = String::from_utf8(bytes).map_err(|_| CliError::usage(format!("`{path}` is not UTF-8")))?;
    let record = InputRecord {
        source: path.to_string(),
        sha256: sha256_hex(text.as_bytes()),
    };
    Ok((text, record))
}

/// Finds the payload of a file written by this tool (`{"nfa": ...}` or
/// `{"morphism": ...}` next to a manifest) or a bare NFA/morphism object.
fn payload(v: Value) -> Value {
    match v {
        Value::Object(mut m) => {
            for key in ["nfa", "morphism"] {
                if let Some(inner) = m.remove(key) {
                    if inner.is_object() {
                        return inner;
                    }
                }
            }
            Value::Object(m)
        }
        other => other,
    }
}

/// Parses JSON text holding an NFA or a morphism file.
pub fn parse_input_text(text: &str) -> CliResult<Input> {
    let v = payload(serde_json::from_str(text)?);
    if v.get("mul").is_some() {
        let f: MorphismFile = serde_json::from_value(v)?;
        Ok(Input::Language(f.into_language()?))
    } else {
        let f: NfaFile = serde_json::from_value(v)?;
        Ok(Input::Nfa(Nfa::try_from(f)?))
    }
}

/// `re:EXPR` is an expression over `alphabet`; anything else is a path to a
/// JSON NFA or morphism file.
pub fn load_input(arg: &str, alphabet: &Alphabet) -> CliResult<(Input, InputRecord)> {
    if let Some(expr) = arg.strip_prefix("re:") {
        let nfa = parse_regex(expr, alphabet)?;
        let record = InputRecord {
            source: arg.to_string(),
            sha256: sha256_hex(expr.as_bytes()),
        };
        return Ok((Input::Nfa(nfa), record));
    }
    let (text, record) = read_file(arg)?;
    let input = parse_input_text(&text).map_err(|e| CliError {
        code: e.code,
        message: format!("{arg}: {}", e.message),
    })?;
    Ok((input, record))
}

pub fn load_nfa(arg: &str, alphabet: &Alphabet) -> CliResult<(Nfa, InputRecord)> {
    let (input, record) = load_input(arg, alphabet)?;
    Ok((input.to_nfa(), record))
}

pub fn parse_alphabet(text: &str) -> CliResult<Alphabet> {
    Ok(Alphabet::new(text.split(',').filter(|s| !s.is_empty()))?)
}

/// `triv`, `at`, `at:a,b` or `user:PATH` (a morphism file whose morphism is
/// the canonical morphism of the basis).
pub fn parse_basis(text: &str) -> CliResult<(BasisSpec, Option<InputRecord>)> {
    match text.strip_prefix("user:") {
        Some(path) => {
            let (body, record) = read_file(path)?;
            let Input::Language(l) = parse_input_text(&body)? else {
                return Err(CliError::usage(format!("`{path}` is not a morphism file")));
            };
            let basis = Basis::user(path, l.morphism)?;
            Ok((BasisSpec::User(Arc::new(basis)), Some(record)))
        }
        None => Ok((BasisSpec::parse(text)?, None)),
    }
}

/// Resource caps as recorded in manifests.
#[derive(Clone, Debug, Serialize)]
pub struct Caps {
    pub monoid_size: usize,
    pub det_states: usize,
    pub stored_sets: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub time_limit_s: Option<u64>,
}

impl Caps {
    pub fn limits(&self) -> Limits {
        let l = Limits {
            monoid_size: self.monoid_size,
            det_states: self.det_states,
            stored_sets: self.stored_sets,
            deadline: None,
        };
        match self.time_limit_s {
            Some(s) => l.with_budget(std::time::Duration::from_secs(s)),
            None => l,
        }
    }
}

/// Provenance embedded in every output. Two runs with equal manifests give
/// byte-identical outputs.
#[derive(Clone, Debug, Serialize)]
pub struct Manifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub seed: u64,
    pub caps: Caps,
    pub inputs: Vec<InputRecord>,
    #[serde(skip_serializing_if = "serde_json::Map::is_empty")]
    pub params: serde_json::Map<String, Value>,
}

impl Manifest {
    pub fn new(command: &str, seed: u64, caps: Caps) -> Self {
        Manifest {
            tool: "hiersep",
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            seed,
            caps,
            inputs: Vec::new(),
            params: serde_json::Map::new(),
        }
    }

    pub fn param(&mut self, key: &str, value: impl Serialize) {
        self.params.insert(key.to_string(), serde_json::to_value(value).expect("serializable"));
    }

    /// `# key: value` lines for text outputs.
    pub fn text_header(&self) -> String {
        let v = serde_json::to_value(self).expect("serializable");
        let mut out = String::new();
        if let Value::Object(m) = v {
            for (k, v) in m {
                out.push_str(&format!("# {k}: {v}\n"));
            }
        }
        out
    }
}

/// `{"manifest": ..., key: value, ...}` as pretty JSON with a final newline.
pub fn wrap(manifest: &Manifest, fields: Vec<(&str, Value)>) -> String {
    let mut m = serde_json::Map::new();
    m.insert("manifest".into(), serde_json::to_value(manifest).expect("serializable"));
    for (k, v) in fields {
        m.insert(k.into(), v);
    }
    let mut s = serde_json::to_string_pretty(&Value::Object(m)).expect("serializable");
    s.push('\n');
    s
}

/// Writes to `out` when given, else to stdout.
pub fn emit(out: Option<&Path>, text: &str) -> CliResult<()> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::usage(format!("cannot write `{}`: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Converts a recognized language to its on-disk form.
pub fn language_value(l: &RecognizedLanguage) -> Value {
    serde_json::to_value(l.to_file()).expect("serializable")
}

pub fn nfa_value(n: &Nfa) -> Value {
    serde_json::to_value(NfaFile::from(n)).expect("serializable")
}
