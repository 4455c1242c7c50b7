use serde::{Deserialize, Serialize};

use super::{Alphabet, Nfa};
use crate::{Error, Result};

/// The on-disk NFA format (ε-free, 0-based states).
///
/// ```json
/// {"alphabet":["a","b"],"states":3,"initial":[0],"final":[2],"transitions":[[0,"a",1],[1,"b",2]]}
/// ```
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NfaFile {
    pub alphabet: Vec<String>,
    pub states: usize,
    pub initial: Vec<u32>,
    #[serde(rename = "final")]
    pub finals: Vec<u32>,
    pub transitions: Vec<(u32, String, u32)>,
}

impl From<&Nfa> for NfaFile {
    fn from(n: &Nfa) -> Self {
        NfaFile {
            alphabet: n.alphabet().letters().iter().map(|l| l.to_string()).collect(),
            states: n.state_count(),
            initial: n.initial().iter().collect(),
            finals: n.finals().iter().collect(),
            transitions: n
                .transitions_by_token()
                .into_iter()
                .map(|(p, l, q)| (p, l.to_string(), q))
                .collect(),
        }
    }
}

impl TryFrom<NfaFile> for Nfa {
    type Error = Error;

    fn try_from(f: NfaFile) -> Result<Nfa> {
        let alphabet = Alphabet::new(&f.alphabet)?;
        let trans = f
            .transitions
            .iter()
            .map(|(p, l, q)| {
                alphabet
                    .index_of(l)
                    .map(|a| (*p, a, *q))
                    .ok_or_else(|| Error::UnknownLetter(l.clone()))
            })
            .collect::<Result<Vec<_>>>()?;
        Nfa::new(alphabet, f.states, f.initial, f.finals, trans)
    }
}

impl Nfa {
    pub fn to_json(&self) -> String {
        serde_json::to_string(&NfaFile::from(self)).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Nfa> {
        let f: NfaFile = serde_json::from_str(text)?;
        Nfa::try_from(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_round_trip_is_bit_exact() {
        let text = r#"{"alphabet":["a","b"],"states":3,"initial":[0],"final":[2],"transitions":[[0,"a",1],[1,"b",2]]}"#;
        let n = Nfa::from_json(text).unwrap();
        assert_eq!(n.to_json(), text);
    }

    #[test]
    fn transitions_sorted_by_token() {
        // letter order in the alphabet differs from token order
        let text = r#"{"alphabet":["b","a"],"states":2,"initial":[0],"final":[1],"transitions":[[0,"b",1],[0,"a",1]]}"#;
        let n = Nfa::from_json(text).unwrap();
        assert!(n.to_json().contains(r#"[[0,"a",1],[0,"b",1]]"#));
    }

    #[test]
    fn rejects_out_of_range_and_unknown() {
        let bad_state = r#"{"alphabet":["a"],"states":1,"initial":[0],"final":[3],"transitions":[]}"#;
        assert!(Nfa::from_json(bad_state).is_err());
        let bad_letter = r#"{"alphabet":["a"],"states":1,"initial":[0],"final":[0],"transitions":[[0,"z",0]]}"#;
        assert!(matches!(Nfa::from_json(bad_letter), Err(Error::UnknownLetter(_))));
    }
}
