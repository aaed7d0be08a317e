//! JSON target documents.
//!
//! ```json
//! {
//!   "photons": [
//!     { "label": 1, "alpha1": [0.6, 0.0], "alpha2": [0.0, 0.8] }
//!   ]
//! }
//! ```
//!
//! Each `alpha` is a `[re, im]` pair. Labels are positive integers and must
//! be distinct.

use std::collections::BTreeSet;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::value::RawValue;

use crate::error::{Diagnostic, Error, Result};
use crate::state::PhotonLabel;
use crate::synth::{TargetPhoton, TargetSpec};

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDoc<'a> {
    #[serde(borrow)]
    photons: Vec<&'a RawValue>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PhotonEntry {
    label: u32,
    alpha1: [f64; 2],
    alpha2: [f64; 2],
}

#[derive(Serialize)]
struct Doc {
    photons: Vec<PhotonEntry>,
}

/// 1-based (line, column) of byte `offset` in `text`.
fn position(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset];
    let line = before.matches('\n').count() + 1;
    let line_start = before.rfind('\n').map_or(0, |i| i + 1);
    (line, before[line_start..].chars().count() + 1)
}

/// Translates a serde error inside `fragment` (a slice of `text`) to a
/// position in `text`.
fn fragment_diagnostic(text: &str, fragment: &str, err: &serde_json::Error) -> Diagnostic {
    let offset = fragment.as_ptr() as usize - text.as_ptr() as usize;
    let (line0, col0) = position(text, offset);
    let msg = err.to_string();
    let msg = msg.split(" at line ").next().unwrap_or(&msg).to_string();
    if err.line() <= 1 {
        Diagnostic::new(line0, col0 + err.column().saturating_sub(1), msg)
    } else {
        Diagnostic::new(line0 + err.line() - 1, err.column(), msg)
    }
}

/// Reads and validates a target document.
///
/// Structural problems (bad JSON, missing fields, label 0, duplicate labels)
/// come back as [`Error::Diagnostic`]; a photon whose amplitudes do not have
/// unit norm is [`Error::NotNormalized`].
pub fn parse_target_doc(text: &str) -> Result<TargetSpec> {
    let raw: RawDoc = serde_json::from_str(text).map_err(|e| {
        let msg = e.to_string();
        let msg = msg.split(" at line ").next().unwrap_or(&msg).to_string();
        Diagnostic::new(e.line().max(1), e.column().max(1), msg)
    })?;
    if raw.photons.is_empty() {
        return Err(Diagnostic::new(1, 1, "`photons` list is empty").into());
    }

    let mut seen = BTreeSet::new();
    let mut photons = Vec::with_capacity(raw.photons.len());
    for fragment in &raw.photons {
        let src = fragment.get();
        let (line, column) = position(text, src.as_ptr() as usize - text.as_ptr() as usize);
        let entry: PhotonEntry = serde_json::from_str(src).map_err(|e| fragment_diagnostic(text, src, &e))?;
        let label = PhotonLabel::new(entry.label)
            .map_err(|_| Diagnostic::new(line, column, "photon label must be a positive integer"))?;
        if !seen.insert(label) {
            return Err(Diagnostic::new(line, column, format!("duplicate photon label {}", entry.label)).into());
        }
        if entry.alpha1.iter().chain(&entry.alpha2).any(|x| !x.is_finite()) {
            return Err(Diagnostic::new(line, column, "amplitudes must be finite").into());
        }
        photons.push(TargetPhoton::new(
            label,
            Complex64::new(entry.alpha1[0], entry.alpha1[1]),
            Complex64::new(entry.alpha2[0], entry.alpha2[1]),
        ));
    }
    TargetSpec::new(photons).map_err(|e| match e {
        Error::LabelCollision(l) => Diagnostic::new(1, 1, format!("duplicate photon label {}", l.index())).into(),
        other => other,
    })
}

/// Writes a target document that [`parse_target_doc`] reads back exactly.
pub fn emit_target_doc(t: &TargetSpec) -> String {
    let doc = Doc {
        photons: t
            .photons()
            .iter()
            .map(|p| PhotonEntry {
                label: p.label.index(),
                alpha1: [p.alpha1.re, p.alpha1.im],
                alpha2: [p.alpha2.re, p.alpha2.im],
            })
            .collect(),
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("plain data serializes");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag(text: &str) -> Diagnostic {
        match parse_target_doc(text) {
            Err(Error::Diagnostic(d)) => d,
            other => panic!("expected a diagnostic, got {other:?}"),
        }
    }

    #[test]
    fn single_photon() {
        let t = parse_target_doc(r#"{"photons": [{"label": 1, "alpha1": [1, 0], "alpha2": [0, 0]}]}"#).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t.photons()[0].alpha1, Complex64::new(1.0, 0.0));
    }

    #[test]
    fn duplicate_labels_point_at_second_entry() {
        let text = "{\"photons\": [\n  {\"label\": 2, \"alpha1\": [1, 0], \"alpha2\": [0, 0]},\n  {\"label\": 2, \"alpha1\": [0, 0], \"alpha2\": [1, 0]}\n]}";
        let d = diag(text);
        assert_eq!((d.line, d.column), (3, 3));
        assert!(d.message.contains("duplicate"));
    }

    #[test]
    fn not_normalized_is_a_domain_error() {
        let text = r#"{"photons": [{"label": 4, "alpha1": [0.9486832980505138, 0], "alpha2": [0, 0]}]}"#;
        match parse_target_doc(text) {
            Err(Error::NotNormalized { label, norm_sqr }) => {
                assert_eq!(label.unwrap().index(), 4);
                assert!((norm_sqr - 0.9).abs() < 1e-12);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn malformed_documents() {
        let d = diag("{\"photons\": [\n  {\"label\": 1, \"alpha1\": [1, 0]}\n]}");
        assert_eq!(d.line, 2);
        assert!(d.message.contains("alpha2"), "{}", d.message);

        let d = diag("{\"photons\": [\n  {\"label\": 0, \"alpha1\": [1, 0], \"alpha2\": [0, 0]}\n]}");
        assert_eq!((d.line, d.column), (2, 3));

        let d = diag("{\n  \"photons\": [1, 2,\n");
        assert!(d.line >= 2);

        let d = diag("{\"photons\": []}");
        assert!(d.message.contains("empty"));

        let d = diag("{\"photon\": []}");
        assert_eq!(d.line, 1);
    }

    #[test]
    fn emit_round_trips() {
        let text = r#"{"photons": [{"label": 3, "alpha1": [0.6, 0.1], "alpha2": [0.0, -0.7937253933193772]}]}"#;
        let t = parse_target_doc(text).unwrap();
        assert_eq!(parse_target_doc(&emit_target_doc(&t)).unwrap(), t);
    }
}
