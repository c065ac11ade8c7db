//! JSON input documents: a tableau given either by a spanning set of `r x n`
//! matrices or by its symbol coefficients.
//!
//! ```json
//! {"r": 2, "n": 2, "presentation": "coefficients", "characters": [2, 0],
//!  "coefficients": [{"a": 1, "lambda": 1, "i": 2, "b": 2, "value": "-1/2"}]}
//! ```
//!
//! Indices are 1-based. Rationals are strings `"p"` or `"p/q"`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::RatMatrix;
use crate::rational::Rational;
use crate::tableau::{tableau_from_coefficients, CartanCharacters, CoefficientKey, SymbolPresentation, Tableau};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PresentationKind {
    Basis,
    Coefficients,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoefficientRecord {
    pub a: usize,
    pub i: usize,
    pub lambda: usize,
    pub b: usize,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDocument {
    r: usize,
    n: usize,
    presentation: PresentationKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    characters: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    basis: Vec<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    coefficients: Vec<CoefficientRecord>,
}

/// A validated input document.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TableauDocument {
    Basis(Tableau),
    Coefficients(SymbolPresentation),
}

fn parse_at(s: &str, path: &str) -> Result<Rational> {
    s.trim().parse().map_err(|e| Error::InvalidDocument(format!("{path}: {e}")))
}

impl TableauDocument {
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawDocument = serde_json::from_str(text).map_err(|e| Error::InvalidDocument(e.to_string()))?;
        let (r, n) = (raw.r, raw.n);
        match raw.presentation {
            PresentationKind::Basis => {
                if raw.characters.is_some() || !raw.coefficients.is_empty() {
                    return Err(Error::InvalidDocument(
                        "basis documents take no characters or coefficients".into(),
                    ));
                }
                let mut mats = Vec::with_capacity(raw.basis.len());
                for (k, m) in raw.basis.iter().enumerate() {
                    if m.len() != r {
                        return Err(Error::InvalidDocument(format!("basis[{k}]: expected {r} rows, got {}", m.len())));
                    }
                    let mut rows = Vec::with_capacity(r);
                    for (a, row) in m.iter().enumerate() {
                        if row.len() != n {
                            return Err(Error::InvalidDocument(format!(
                                "basis[{k}][{a}]: expected {n} entries, got {}",
                                row.len()
                            )));
                        }
                        let parsed = row
                            .iter()
                            .enumerate()
                            .map(|(i, s)| parse_at(s, &format!("basis[{k}][{a}][{i}]")))
                            .collect::<Result<Vec<_>>>()?;
                        rows.push(parsed);
                    }
                    mats.push(if r == 0 { RatMatrix::zeros(0, n) } else { RatMatrix::from_rows(rows) });
                }
                Ok(TableauDocument::Basis(Tableau::from_spanning_set(r, n, mats)?))
            }
            PresentationKind::Coefficients => {
                if !raw.basis.is_empty() {
                    return Err(Error::InvalidDocument("coefficient documents take no basis".into()));
                }
                let s = raw
                    .characters
                    .ok_or_else(|| Error::InvalidDocument("characters: required for coefficient documents".into()))?;
                if s.len() != n {
                    return Err(Error::InvalidDocument(format!("characters: expected {n} entries, got {}", s.len())));
                }
                let chars = CartanCharacters::new(s)?;
                let mut entries = Vec::with_capacity(raw.coefficients.len());
                for (k, c) in raw.coefficients.iter().enumerate() {
                    let value = parse_at(&c.value, &format!("coefficients[{k}].value"))?;
                    entries.push((CoefficientKey::new(c.a, c.lambda, c.i, c.b), value));
                }
                let p = SymbolPresentation::new(r, chars, entries)
                    .map_err(|e| Error::InvalidDocument(format!("coefficients: {e}")))?;
                Ok(TableauDocument::Coefficients(p))
            }
        }
    }

    pub fn from_path(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidDocument(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn tableau(&self) -> Tableau {
        match self {
            TableauDocument::Basis(t) => t.clone(),
            TableauDocument::Coefficients(p) => tableau_from_coefficients(p),
        }
    }

    pub fn to_json(&self) -> String {
        let raw = match self {
            TableauDocument::Basis(t) => RawDocument {
                r: t.r(),
                n: t.n(),
                presentation: PresentationKind::Basis,
                characters: None,
                basis: t
                    .basis()
                    .iter()
                    .map(|m| (0..m.rows()).map(|a| m.row(a).iter().map(ToString::to_string).collect()).collect())
                    .collect(),
                coefficients: Vec::new(),
            },
            TableauDocument::Coefficients(p) => RawDocument {
                r: p.r(),
                n: p.n(),
                presentation: PresentationKind::Coefficients,
                characters: Some(p.characters().as_slice().to_vec()),
                basis: Vec::new(),
                coefficients: p
                    .coefficients()
                    .iter()
                    .map(|(k, v)| CoefficientRecord { a: k.a, i: k.i, lambda: k.lambda, b: k.b, value: v.to_string() })
                    .collect(),
            },
        };
        serde_json::to_string_pretty(&raw).expect("plain data serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coefficient_document_round_trip() {
        let text = r#"{"r": 2, "n": 2, "presentation": "coefficients", "characters": [2, 0],
            "coefficients": [{"a": 1, "lambda": 1, "i": 2, "b": 2, "value": "-1/2"}]}"#;
        let doc = TableauDocument::from_json(text).unwrap();
        let again = TableauDocument::from_json(&doc.to_json()).unwrap();
        assert_eq!(doc, again);
        assert_eq!(doc.tableau().dim(), 2);
    }

    #[test]
    fn basis_document_round_trip() {
        let text = r#"{"r": 1, "n": 2, "presentation": "basis", "basis": [[["1", "3/4"]], [["2", "3/2"]]]}"#;
        let doc = TableauDocument::from_json(text).unwrap();
        assert_eq!(doc.tableau().dim(), 1);
        assert_eq!(TableauDocument::from_json(&doc.to_json()).unwrap(), doc);
    }

    #[test]
    fn errors_name_the_field() {
        let text = r#"{"r": 1, "n": 2, "presentation": "basis", "basis": [[["1", "1/0"]]]}"#;
        let err = TableauDocument::from_json(text).unwrap_err().to_string();
        assert!(err.contains("basis[0][0][1]") && err.contains("zero denominator"), "{err}");
        let text = r#"{"r": 1, "n": 2, "presentation": "basis", "basis": [[["1"]]]}"#;
        assert!(TableauDocument::from_json(text).unwrap_err().to_string().contains("basis[0][0]"));
        let text = r#"{"r": 2, "n": 2, "presentation": "coefficients", "characters": [2, 0],
            "coefficients": [{"a": 1, "lambda": 1, "i": 2, "b": 2, "value": "x"}]}"#;
        assert!(TableauDocument::from_json(text).unwrap_err().to_string().contains("coefficients[0].value"));
        let text = r#"{"r": 2, "n": 2, "presentation": "coefficients"}"#;
        assert!(TableauDocument::from_json(text).unwrap_err().to_string().contains("characters"));
    }

    #[test]
    fn structural_checks_run_before_use() {
        // a = 1 is not above s_2 = 1
        let text = r#"{"r": 2, "n": 2, "presentation": "coefficients", "characters": [2, 1],
            "coefficients": [{"a": 1, "lambda": 1, "i": 2, "b": 1, "value": "1"}]}"#;
        assert!(matches!(TableauDocument::from_json(text), Err(Error::InvalidDocument(_))));
    }
}
