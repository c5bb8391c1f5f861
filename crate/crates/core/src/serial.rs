//! Canonical JSON form of an automaton.
//!
//! Names are written in their text form (`(1,2)`, `L:x`, `eps`) and weights
//! as reduced fractions. States, labels and transitions follow the
//! automaton's own order, so equal automata serialize to equal bytes.

use serde::{Deserialize, Serialize};

use crate::alphabet::{Alphabet, OrderedSet};
use crate::analysis::parse_state_name;
use crate::automaton::WeightedAutomaton;
use crate::error::{Error, Result};
use crate::name::Name;
use crate::weight::Weight;

pub const FORMAT: &str = "markov-compose/automaton";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlphabetJson {
    pub labels: Vec<String>,
    pub epsilon: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InterfaceJson {
    pub domain: Vec<String>,
    /// `[point, state]` pairs in domain order.
    pub map: Vec<(String, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransitionJson {
    pub from: String,
    pub left: String,
    pub right: String,
    pub to: String,
    pub weight: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AutomatonJson {
    pub format: String,
    pub states: Vec<String>,
    pub left: AlphabetJson,
    pub right: AlphabetJson,
    pub top: InterfaceJson,
    pub bottom: InterfaceJson,
    pub transitions: Vec<TransitionJson>,
}

fn alphabet_json(a: &Alphabet) -> AlphabetJson {
    AlphabetJson {
        labels: a.labels().iter().map(Name::to_string).collect(),
        epsilon: a.epsilon_label().map(Name::to_string),
    }
}

impl From<&WeightedAutomaton> for AutomatonJson {
    fn from(aut: &WeightedAutomaton) -> Self {
        let iface = |m: &crate::alphabet::InterfaceMap| InterfaceJson {
            domain: m.domain().iter().map(Name::to_string).collect(),
            map: m.iter().map(|(p, s)| (p.to_string(), aut.state(s).to_string())).collect(),
        };
        AutomatonJson {
            format: FORMAT.to_string(),
            states: aut.states().iter().map(Name::to_string).collect(),
            left: alphabet_json(aut.left()),
            right: alphabet_json(aut.right()),
            top: iface(aut.top()),
            bottom: iface(aut.bottom()),
            transitions: aut
                .table()
                .iter()
                .map(|(&(s, a, b, t), w)| TransitionJson {
                    from: aut.state(s).to_string(),
                    left: aut.left().label(a).to_string(),
                    right: aut.right().label(b).to_string(),
                    to: aut.state(t).to_string(),
                    weight: w.to_string(),
                })
                .collect(),
        }
    }
}

fn parse_name(text: &str) -> Result<Name> {
    parse_state_name(text).map_err(Error::Eval)
}

fn names(items: &[String]) -> Result<Vec<Name>> {
    items.iter().map(|s| parse_name(s)).collect()
}

fn alphabet_from(j: &AlphabetJson) -> Result<Alphabet> {
    let labels = OrderedSet::from_vec(names(&j.labels)?).map_err(Error::DuplicateLabel)?;
    let eps = j.epsilon.as_deref().map(parse_name).transpose()?;
    Alphabet::new(labels, eps).map_err(Error::UnknownLabel)
}

impl AutomatonJson {
    pub fn to_automaton(&self) -> Result<WeightedAutomaton> {
        if self.format != FORMAT {
            return Err(Error::Eval(format!("expected format `{FORMAT}`, found `{}`", self.format)));
        }
        let iface = |j: &InterfaceJson| -> Result<Vec<(Name, Name)>> {
            let domain = names(&j.domain)?;
            let pairs: Vec<(Name, Name)> =
                j.map.iter().map(|(p, s)| Ok((parse_name(p)?, parse_name(s)?))).collect::<Result<_>>()?;
            if pairs.len() != domain.len() || pairs.iter().zip(&domain).any(|((p, _), d)| p != d) {
                return Err(Error::InterfaceMismatch("map must list each domain point once, in order".into()));
            }
            Ok(pairs)
        };
        let transitions = self
            .transitions
            .iter()
            .map(|t| {
                let w: Weight = t.weight.parse().map_err(|e| Error::Eval(format!("weight {}: {e}", t.weight)))?;
                Ok((parse_name(&t.from)?, parse_name(&t.left)?, parse_name(&t.right)?, parse_name(&t.to)?, w))
            })
            .collect::<Result<Vec<_>>>()?;
        WeightedAutomaton::from_named(
            names(&self.states)?,
            alphabet_from(&self.left)?,
            alphabet_from(&self.right)?,
            iface(&self.top)?,
            iface(&self.bottom)?,
            transitions,
        )
    }
}

/// Pretty-printed canonical JSON.
pub fn to_json(aut: &WeightedAutomaton) -> String {
    serde_json::to_string_pretty(&AutomatonJson::from(aut)).expect("serializable")
}

pub fn from_json(text: &str) -> Result<WeightedAutomaton> {
    let j: AutomatonJson = serde_json::from_str(text).map_err(|e| Error::Eval(format!("invalid automaton JSON: {e}")))?;
    j.to_automaton()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::ops::boxplus_sum;

    #[test]
    fn round_trips() {
        for aut in [fixtures::phil(), fixtures::fork(), fixtures::example(), boxplus_sum(&fixtures::phil(), &fixtures::fork())] {
            let text = to_json(&aut);
            let back = from_json(&text).unwrap();
            assert_eq!(back, aut);
            assert_eq!(to_json(&back), text);
        }
    }

    #[test]
    fn weights_are_fractions() {
        let text = to_json(&fixtures::fork());
        assert!(text.contains("\"1/3\""), "{text}");
        assert!(from_json(&text.replace("\"1/3\"", "\"0.3\"")).is_err());
    }
}
