//! The family file: JSON (canonical) or one set per line of whitespace-separated ids.
//!
//! ```json
//! {"n": 4, "sets": [[0, 1], [1, 2], [2, 3]], "weights": ["1/2", "1/4", "1/4"]}
//! ```
//!
//! The text form puts one set per line; `#` starts a comment, `-` alone is
//! the empty set and an optional first directive `n <size>` fixes the ground
//! size (otherwise it is one more than the largest id).

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sunflower_core::rational::{parse_rational, to_ratio_string};
use sunflower_core::spread::WeightedFamily;
use sunflower_core::{GroundSet, MemberSet, Rational, SetFamily};

/// A malformed input, with the position of the problem.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InputError {
    pub position: String,
    pub message: String,
}

impl InputError {
    fn at(position: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            position: position.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.position, self.message)
    }
}

impl std::error::Error for InputError {}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyFile {
    pub n: usize,
    pub sets: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blocks: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dummy_start: Option<usize>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub meta: BTreeMap<String, Value>,
}

impl FamilyFile {
    pub fn from_family(family: &SetFamily) -> Self {
        Self {
            n: family.n(),
            sets: family.members().iter().map(MemberSet::to_vec).collect(),
            weights: None,
            blocks: family.ground().block_bounds().map(<[usize]>::to_vec),
            dummy_start: family.ground().dummy_start(),
            meta: BTreeMap::new(),
        }
    }

    pub fn from_weighted(wf: &WeightedFamily) -> Self {
        let mut file = Self::from_family(wf.family());
        file.weights = Some(wf.sigma().iter().map(to_ratio_string).collect());
        file
    }

    pub fn with_meta(mut self, key: &str, value: Value) -> Self {
        self.meta.insert(key.to_owned(), value);
        self
    }

    /// Parses JSON (a family file, or a report carrying one under
    /// `result.family`) or the text form, chosen by the first non-blank byte.
    pub fn parse(text: &str, source: &str) -> Result<Self, InputError> {
        if text.trim_start().starts_with('{') {
            Self::parse_json(text, source)
        } else {
            Self::parse_text(text, source)
        }
    }

    pub fn parse_json(text: &str, source: &str) -> Result<Self, InputError> {
        let value: Value = serde_json::from_str(text)
            .map_err(|e| InputError::at(format!("{source}:{}:{}", e.line(), e.column()), e.to_string()))?;
        let inner = match value.pointer("/result/family") {
            Some(v) if value.get("command").is_some() => v.clone(),
            _ => value,
        };
        let file: FamilyFile = serde_json::from_value(inner).map_err(|e| InputError::at(source, e.to_string()))?;
        file.check(source)?;
        Ok(file)
    }

    pub fn parse_text(text: &str, source: &str) -> Result<Self, InputError> {
        let mut n: Option<usize> = None;
        let mut sets = Vec::new();
        let mut seen_set = false;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("");
            let trimmed = line.trim();
            if trimmed.is_empty() {
                continue;
            }
            let pos = |col: usize| format!("{source}:{}:{}", lineno + 1, col + 1);
            let col_of = |tok: &str| tok.as_ptr() as usize - raw.as_ptr() as usize;
            let mut tokens = trimmed.split_whitespace();
            let first = tokens.next().unwrap_or("");
            if first == "n" {
                if seen_set || n.is_some() {
                    return Err(InputError::at(pos(col_of(first)), "the `n` directive must come first"));
                }
                let tok = tokens.next().ok_or_else(|| InputError::at(pos(col_of(first)), "`n` needs a size"))?;
                n = Some(tok.parse().map_err(|_| InputError::at(pos(col_of(tok)), format!("bad size `{tok}`")))?);
                if let Some(extra) = tokens.next() {
                    return Err(InputError::at(pos(col_of(extra)), "unexpected token after `n <size>`"));
                }
                continue;
            }
            seen_set = true;
            if first == "-" {
                if let Some(extra) = tokens.next() {
                    return Err(InputError::at(pos(col_of(extra)), "`-` (the empty set) must stand alone"));
                }
                sets.push(Vec::new());
                continue;
            }
            let mut set = Vec::new();
            for tok in trimmed.split_whitespace() {
                let id: usize = tok
                    .parse()
                    .map_err(|_| InputError::at(pos(col_of(tok)), format!("expected an element id, found `{tok}`")))?;
                if set.contains(&id) {
                    return Err(InputError::at(pos(col_of(tok)), format!("element {id} repeated in a set")));
                }
                set.push(id);
            }
            set.sort_unstable();
            sets.push(set);
        }
        let max = sets.iter().flatten().max().map_or(0, |&m| m + 1);
        let file = FamilyFile {
            n: n.unwrap_or(max),
            sets,
            weights: None,
            blocks: None,
            dummy_start: None,
            meta: BTreeMap::new(),
        };
        file.check(source)?;
        Ok(file)
    }

    fn check(&self, source: &str) -> Result<(), InputError> {
        for (i, set) in self.sets.iter().enumerate() {
            for (j, &x) in set.iter().enumerate() {
                if x >= self.n {
                    return Err(InputError::at(
                        format!("{source}: sets[{i}][{j}]"),
                        format!("element {x} is outside 0..{}", self.n),
                    ));
                }
                if set[..j].contains(&x) {
                    return Err(InputError::at(format!("{source}: sets[{i}][{j}]"), format!("element {x} repeated")));
                }
            }
        }
        if let Some(w) = &self.weights {
            if w.len() != self.sets.len() {
                return Err(InputError::at(
                    format!("{source}: weights"),
                    format!("{} weights for {} sets", w.len(), self.sets.len()),
                ));
            }
            for (i, s) in w.iter().enumerate() {
                let v = parse_rational(s).map_err(|e| InputError::at(format!("{source}: weights[{i}]"), e.to_string()))?;
                if v < Rational::from_integer(0.into()) {
                    return Err(InputError::at(format!("{source}: weights[{i}]"), "weights must be nonnegative"));
                }
            }
        }
        self.ground().map_err(|e| InputError::at(format!("{source}: blocks"), e.to_string()))?;
        Ok(())
    }

    fn ground(&self) -> sunflower_core::Result<GroundSet> {
        let g = match &self.blocks {
            Some(b) => GroundSet::with_blocks(self.n, b.clone())?,
            None => GroundSet::new(self.n),
        };
        match self.dummy_start {
            Some(d) => g.with_dummy_start(d),
            None => Ok(g),
        }
    }

    pub fn family(&self) -> sunflower_core::Result<SetFamily> {
        let members = self.sets.iter().map(|s| MemberSet::from_elements(s.iter().copied())).collect();
        SetFamily::new(self.ground()?, members)
    }

    /// The file's weights, or counting weights when absent.
    pub fn weighted(&self) -> sunflower_core::Result<WeightedFamily> {
        let family = self.family()?;
        match &self.weights {
            Some(w) => WeightedFamily::new(family, w.iter().map(|s| parse_rational(s)).collect::<Result<_, _>>()?),
            None => Ok(WeightedFamily::counting(family)),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("family files serialize")
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("n {}\n", self.n);
        for s in &self.sets {
            if s.is_empty() {
                out.push_str("-\n");
            } else {
                let ids: Vec<String> = s.iter().map(usize::to_string).collect();
                out.push_str(&ids.join(" "));
                out.push('\n');
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip() {
        let text = r#"{"n": 4, "sets": [[0, 1], [1, 2], []], "weights": ["1/2", "1/4", "1/4"], "meta": {"k": 1}}"#;
        let f = FamilyFile::parse(text, "in").unwrap();
        let again = FamilyFile::parse(&f.to_json(), "in").unwrap();
        assert_eq!(f, again);
        assert_eq!(f.weighted().unwrap().total(), Rational::from_integer(1.into()));
    }

    #[test]
    fn text_round_trip() {
        let f = FamilyFile::parse("n 5\n1 0\n# comment\n-\n2 3 4\n", "in").unwrap();
        assert_eq!(f.sets, vec![vec![0, 1], vec![], vec![2, 3, 4]]);
        assert_eq!(FamilyFile::parse(&f.to_text(), "in").unwrap(), f);
    }

    #[test]
    fn errors_carry_positions() {
        let e = FamilyFile::parse("0 1\n2 x\n", "f.txt").unwrap_err();
        assert_eq!(e.position, "f.txt:2:3");
        let e = FamilyFile::parse("{\"n\": 2,\n \"sets\": [[0, 1],]}", "f.json").unwrap_err();
        assert!(e.position.starts_with("f.json:2:"));
        let e = FamilyFile::parse(r#"{"n": 2, "sets": [[0], [0, 5]]}"#, "f.json").unwrap_err();
        assert_eq!(e.position, "f.json: sets[1][1]");
        let e = FamilyFile::parse("n 3\n0 0\n", "t").unwrap_err();
        assert_eq!(e.position, "t:2:3");
    }

    #[test]
    fn report_wrapping_is_accepted() {
        let text = r#"{"command": "gen product", "result": {"family": {"n": 2, "sets": [[0], [1]]}}}"#;
        assert_eq!(FamilyFile::parse(text, "r").unwrap().sets.len(), 2);
    }
}
