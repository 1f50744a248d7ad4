//! The `towercoh/1` input document: JSON with a `schema` tag and exactly one
//! of `complex`, `tower` or `generator`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generators::{Built, Generated, GeneratorSpec};
use crate::simplicial::Pair;
use crate::tower::Tower;

pub const SCHEMA: &str = "towercoh/1";

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Input {
    /// A pair `(X, Z)`; `Z` may be empty.
    Complex(Pair),
    Tower(Tower),
    Generator(GeneratorSpec),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDocument {
    schema: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    complex: Option<Pair>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    tower: Option<Tower>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    generator: Option<GeneratorSpec>,
}

impl Input {
    /// Errors carry the line and column reported by the JSON reader.
    pub fn parse(text: &str) -> Result<Input> {
        if text.trim().is_empty() {
            return Err(Error::Document("line 1, column 1: empty document".into()));
        }
        let raw: RawDocument = serde_json::from_str(text).map_err(|e| {
            Error::Document(format!("line {}, column {}: {}", e.line(), e.column(), strip_location(&e)))
        })?;
        if raw.schema != SCHEMA {
            return Err(Error::Document(format!(
                "field `schema`: expected \"{SCHEMA}\", found \"{}\"",
                raw.schema
            )));
        }
        match (raw.complex, raw.tower, raw.generator) {
            (Some(c), None, None) => Ok(Input::Complex(c)),
            (None, Some(t), None) => Ok(Input::Tower(t)),
            (None, None, Some(g)) => Ok(Input::Generator(g)),
            _ => Err(Error::Document(
                "exactly one of `complex`, `tower`, `generator` must be present".into(),
            )),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.raw()).expect("serializable");
        s.push('\n');
        s
    }

    pub fn to_value(&self) -> serde_json::Value {
        serde_json::to_value(self.raw()).expect("serializable")
    }

    fn raw(&self) -> RawDocument {
        let mut raw = RawDocument {
            schema: SCHEMA.into(),
            complex: None,
            tower: None,
            generator: None,
        };
        match self {
            Input::Complex(p) => raw.complex = Some(p.clone()),
            Input::Tower(t) => raw.tower = Some(t.clone()),
            Input::Generator(g) => raw.generator = Some(g.clone()),
        }
        raw
    }
}

impl From<&Built> for Input {
    fn from(b: &Built) -> Self {
        Input::from(&b.object)
    }
}

impl From<&Generated> for Input {
    fn from(g: &Generated) -> Self {
        match g {
            Generated::Complex(c) => Input::Complex(Pair::absolute(c.clone())),
            Generated::Pair(p) => Input::Complex(p.clone()),
            Generated::Tower(t) => Input::Tower(t.clone()),
        }
    }
}

fn strip_location(e: &serde_json::Error) -> String {
    let msg = e.to_string();
    match msg.rfind(" at line ") {
        Some(i) => msg[..i].to_string(),
        None => msg,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{build, named};

    #[test]
    fn round_trips_generators() {
        for name in ["cycle3", "disk-pair", "solenoid", "trivial-interval-pair", "voltage"] {
            let built = build(&named(name, 2, 2).unwrap()).unwrap();
            let doc = Input::from(&built);
            let text = doc.to_json();
            assert_eq!(Input::parse(&text).unwrap(), doc, "{name}");
            assert_eq!(Input::parse(&text).unwrap().to_json(), text);
            let spec = Input::Generator(built.spec.clone());
            assert_eq!(Input::parse(&spec.to_json()).unwrap(), spec);
        }
    }

    #[test]
    fn locates_errors() {
        let err = Input::parse("{\n  \"schema\": \"towercoh/1\",\n  \"complex\": {\"total\": {\"vertices\": [0], \"simplices\": [[0, 1]]}}\n}")
            .unwrap_err()
            .to_string();
        assert!(err.contains("line 3"), "{err}");
        assert!(err.contains("unlisted vertex 1"), "{err}");
        let err = Input::parse("{\"schema\": \"towercoh/2\", \"generator\": {\"kind\": \"point\"}}").unwrap_err();
        assert!(err.to_string().contains("schema"));
        assert!(Input::parse("").is_err());
        assert!(Input::parse("{\"schema\": \"towercoh/1\"}").is_err());
        let extra = "{\"schema\": \"towercoh/1\", \"generator\": {\"kind\": \"point\"}, \"colour\": 1}";
        assert!(Input::parse(extra).unwrap_err().to_string().contains("colour"));
    }

    #[test]
    fn subcomplex_example() {
        let text = r#"{
  "schema": "towercoh/1",
  "complex": {
    "total": {"vertices": [0, 1, 2], "simplices": [[0, 1], [1, 2]]},
    "sub": [[0], [2]]
  }
}"#;
        match Input::parse(text).unwrap() {
            Input::Complex(p) => assert_eq!(p.sub().count(0), 2),
            other => panic!("{other:?}"),
        }
    }
}
