//! JSON potential files.
//!
//! Either four explicit sequences
//!
//! ```json
//! { "a": {"kind": "constant", "value": -0.69}, "b": ..., "c": ..., "d": ... }
//! ```
//!
//! or a preset, `{"preset": "markov", "matrix": [[0.6, 0.4], [0.3, 0.7]]}` or
//! `{"preset": "hofbauer", "gamma": 2.0}`. Both forms accept an optional
//! `"description"` string.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::normalization::markov_g_function;
use crate::potential::{make_hofbauer_with, make_markov, HofbauerParams, WaltersPotential};
use crate::sequence::SequenceSpec;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "preset", rename_all = "snake_case", deny_unknown_fields)]
pub enum Preset {
    /// `A(x) = log P[x_1][x_2]`; with `normalized`, `log P[x_2][x_1]`.
    Markov {
        matrix: [[f64; 2]; 2],
        #[serde(default, skip_serializing_if = "std::ops::Not::not")]
        normalized: bool,
    },
    Hofbauer {
        gamma: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        a: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        b: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        d: Option<f64>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Sequences {
    a: SequenceSpec,
    b: SequenceSpec,
    c: SequenceSpec,
    d: SequenceSpec,
}

#[derive(Clone, Debug, PartialEq)]
pub enum PotentialSource {
    Sequences(WaltersPotential),
    Preset(Preset),
}

#[derive(Clone, Debug, PartialEq)]
pub struct PotentialSpec {
    pub description: Option<String>,
    pub source: PotentialSource,
}

impl PotentialSpec {
    pub fn from_potential(pot: WaltersPotential) -> Self {
        PotentialSpec { description: None, source: PotentialSource::Sequences(pot) }
    }

    /// Builds and validates the potential.
    pub fn potential(&self) -> Result<WaltersPotential> {
        let pot = match &self.source {
            PotentialSource::Sequences(p) => p.clone(),
            PotentialSource::Preset(Preset::Markov { matrix, normalized: false }) => make_markov(*matrix)?,
            PotentialSource::Preset(Preset::Markov { matrix, normalized: true }) => markov_g_function(*matrix)?,
            PotentialSource::Preset(Preset::Hofbauer { gamma, a, b, d }) => {
                let def = HofbauerParams::with_defaults(*gamma)?;
                make_hofbauer_with(HofbauerParams {
                    gamma: *gamma,
                    a: a.unwrap_or(def.a),
                    b: b.unwrap_or(def.b),
                    d: d.unwrap_or(def.d),
                })?
            }
        };
        pot.validate()?;
        Ok(pot)
    }
}

fn parse_err(e: serde_json::Error) -> Error {
    Error::Parse(e.to_string())
}

pub fn parse_potential_spec(text: &str) -> Result<PotentialSpec> {
    let mut value: Value = serde_json::from_str(text).map_err(parse_err)?;
    let obj = value.as_object_mut().ok_or_else(|| Error::Parse("potential file must be a JSON object".into()))?;
    let description = match obj.remove("description") {
        None => None,
        Some(Value::String(s)) => Some(s),
        Some(_) => return Err(Error::Parse("`description` must be a string".into())),
    };
    let source = if obj.contains_key("preset") {
        PotentialSource::Preset(serde_json::from_value(value).map_err(parse_err)?)
    } else {
        let s: Sequences = serde_json::from_value(value).map_err(parse_err)?;
        PotentialSource::Sequences(WaltersPotential::new(s.a, s.b, s.c, s.d))
    };
    Ok(PotentialSpec { description, source })
}

/// Parses and builds in one step.
pub fn load_potential(text: &str) -> Result<WaltersPotential> {
    parse_potential_spec(text)?.potential()
}

/// Pretty JSON. Custom sequences have no file form and are rejected.
pub fn print_potential_spec(spec: &PotentialSpec) -> Result<String> {
    let mut value = match &spec.source {
        PotentialSource::Sequences(p) => {
            for (name, s) in [("a", &p.a), ("b", &p.b), ("c", &p.c), ("d", &p.d)] {
                if let SequenceSpec::Custom(c) = s {
                    return Err(Error::InvalidParameter(format!(
                        "sequence {name} (`{}`) has no file form; tabulate it first",
                        c.name
                    )));
                }
            }
            serde_json::to_value(p).map_err(parse_err)?
        }
        PotentialSource::Preset(p) => serde_json::to_value(p).map_err(parse_err)?,
    };
    if let (Some(d), Some(obj)) = (&spec.description, value.as_object_mut()) {
        obj.insert("description".into(), Value::String(d.clone()));
    }
    serde_json::to_string_pretty(&value).map_err(parse_err)
}

/// Replaces custom sequences by finite-plus-constant tables of `n_terms`
/// values. Returns the largest truncation error `sup_{n>n_terms} |s_n − s|`.
pub fn tabulate_potential(pot: &WaltersPotential, n_terms: usize) -> (WaltersPotential, f64) {
    let mut worst: f64 = 0.0;
    let mut tab = |s: &SequenceSpec| match s {
        SequenceSpec::Custom(_) => {
            let (t, b) = s.tabulate(n_terms);
            worst = worst.max(b);
            t
        }
        other => other.clone(),
    };
    let out = WaltersPotential::new(tab(&pot.a), tab(&pot.b), tab(&pot.c), tab(&pot.d));
    (out, worst)
}
