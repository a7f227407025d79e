//! JSON state files.
//!
//! ```json
//! {"kind": "sc2q", "c1": 0.7, "c2": [0.2, 0.0], "c4": 0.3}
//! {"kind": "sc", "levels": 3, "parties": 2, "c": [[[re, im], ...], ...]}
//! {"kind": "density", "dims": [2, 2], "matrix": [[[re, im], ...], ...]}
//! {"kind": "pure", "dims": [2, 2], "coeffs": [[[re, im], ...], ...]}
//! ```
//!
//! Complex entries are `[re, im]` pairs; a bare number is read as a real entry.
//! `pure` coefficients may also be given as a flat amplitude list.

use lueq::{BipartiteDims, ComplexMatrix, DensityMatrix, PureState, SCCoefficients};
use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize};
use serde_json::Value;
use thiserror::Error;

pub const KINDS: [&str; 4] = ["sc2q", "sc", "density", "pure"];

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("malformed state file at line {line}, column {column}: {message}")]
    MalformedSyntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("unknown state kind {found:?}, expected one of sc2q, sc, density, pure")]
    UnknownKind { found: Option<String> },

    #[error("state fails validation ({invariant}): {source}")]
    ValidationFailed {
        invariant: &'static str,
        #[source]
        source: lueq::Error,
    },
}

impl From<lueq::Error> for ParseError {
    fn from(source: lueq::Error) -> Self {
        ParseError::ValidationFailed {
            invariant: source.invariant_name(),
            source,
        }
    }
}

/// A complex number written as `[re, im]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Cx(pub f64, pub f64);

impl<'de> Deserialize<'de> for Cx {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Pair(f64, f64),
            Real(f64),
        }
        match Repr::deserialize(d).map_err(|_| serde::de::Error::custom("expected [re, im] or a real number"))? {
            Repr::Pair(re, im) => Ok(Cx(re, im)),
            Repr::Real(re) => Ok(Cx(re, 0.0)),
        }
    }
}

impl From<Complex64> for Cx {
    fn from(z: Complex64) -> Self {
        Cx(z.re, z.im)
    }
}

impl From<Cx> for Complex64 {
    fn from(z: Cx) -> Self {
        Complex64::new(z.0, z.1)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coefficients {
    Rows(Vec<Vec<Cx>>),
    Flat(Vec<Cx>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum StateFile {
    Sc2q {
        c1: f64,
        c2: Cx,
        c4: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        label: Option<String>,
    },
    Sc {
        levels: usize,
        parties: usize,
        c: Vec<Vec<Cx>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        label: Option<String>,
    },
    Density {
        dims: [usize; 2],
        matrix: Vec<Vec<Cx>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        label: Option<String>,
    },
    Pure {
        dims: [usize; 2],
        coeffs: Coefficients,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        label: Option<String>,
    },
}

/// A validated state.
#[derive(Debug, Clone, PartialEq)]
pub enum State {
    Sc(SCCoefficients),
    Density(DensityMatrix),
    Pure(PureState),
}

impl State {
    /// The state as a density matrix on its composite space.
    pub fn density(&self) -> DensityMatrix {
        match self {
            State::Sc(sc) => sc.embed(),
            State::Density(rho) => rho.clone(),
            State::Pure(psi) => psi.density(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            State::Sc(sc) if sc.is_two_qubit() => "sc2q",
            State::Sc(_) => "sc",
            State::Density(_) => "density",
            State::Pure(_) => "pure",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledState {
    pub state: State,
    pub label: Option<String>,
}

fn matrix_from_rows(rows: &[Vec<Cx>]) -> Result<ComplexMatrix, ParseError> {
    let rows: Vec<Vec<Complex64>> = rows.iter().map(|r| r.iter().map(|&z| z.into()).collect()).collect();
    Ok(lueq::linalg::from_rows(&rows)?)
}

fn rows_of(m: &ComplexMatrix) -> Vec<Vec<Cx>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)].into()).collect())
        .collect()
}

fn shape_error(expected: String, found: String) -> ParseError {
    lueq::Error::DimensionMismatch { expected, found }.into()
}

impl StateFile {
    pub fn label(&self) -> Option<&str> {
        match self {
            StateFile::Sc2q { label, .. }
            | StateFile::Sc { label, .. }
            | StateFile::Density { label, .. }
            | StateFile::Pure { label, .. } => label.as_deref(),
        }
    }

    pub fn validate(&self) -> Result<LabeledState, ParseError> {
        let state = match self {
            StateFile::Sc2q { c1, c2, c4, .. } => State::Sc(SCCoefficients::two_qubit(*c1, (*c2).into(), *c4)?),
            StateFile::Sc { levels, parties, c, .. } => {
                let m = matrix_from_rows(c)?;
                if m.nrows() != *levels {
                    return Err(shape_error(
                        format!("{levels} levels"),
                        format!("{}x{}", m.nrows(), m.ncols()),
                    ));
                }
                State::Sc(SCCoefficients::new(m, *parties)?)
            }
            StateFile::Density { dims, matrix, .. } => {
                State::Density(DensityMatrix::new(matrix_from_rows(matrix)?, dims)?)
            }
            StateFile::Pure { dims, coeffs, .. } => {
                let d = BipartiteDims::new(dims[0], dims[1])?;
                let psi = match coeffs {
                    Coefficients::Rows(rows) => {
                        let m = matrix_from_rows(rows)?;
                        if m.nrows() != d.dim_a || m.ncols() != d.dim_b {
                            return Err(shape_error(
                                format!("{}x{}", d.dim_a, d.dim_b),
                                format!("{}x{}", m.nrows(), m.ncols()),
                            ));
                        }
                        PureState::new(m)?
                    }
                    Coefficients::Flat(amps) => {
                        let amps: Vec<Complex64> = amps.iter().map(|&z| z.into()).collect();
                        PureState::from_amplitudes(&amps, d)?
                    }
                };
                State::Pure(psi)
            }
        };
        Ok(LabeledState {
            state,
            label: self.label().map(str::to_owned),
        })
    }

    pub fn from_state(state: &State, label: Option<String>) -> Self {
        match state {
            State::Sc(sc) if sc.is_two_qubit() => StateFile::Sc2q {
                c1: sc.c1(),
                c2: sc.c2().into(),
                c4: sc.c4(),
                label,
            },
            State::Sc(sc) => StateFile::Sc {
                levels: sc.levels(),
                parties: sc.parties(),
                c: rows_of(sc.matrix()),
                label,
            },
            State::Density(rho) => {
                let d = rho.dims();
                let dims = if d.len() == 2 { [d[0], d[1]] } else { [rho.dim(), 1] };
                StateFile::Density {
                    dims,
                    matrix: rows_of(rho.mat()),
                    label,
                }
            }
            State::Pure(psi) => {
                let d = psi.dims();
                StateFile::Pure {
                    dims: [d.dim_a, d.dim_b],
                    coeffs: Coefficients::Rows(rows_of(psi.coeffs())),
                    label,
                }
            }
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("state files serialize")
    }
}

fn syntax_error(e: &serde_json::Error) -> ParseError {
    ParseError::MalformedSyntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    }
}

/// Parses the raw file without validating the state.
pub fn parse_state_file_raw(text: &[u8]) -> Result<StateFile, ParseError> {
    let text = std::str::from_utf8(text).map_err(|e| {
        let before = &text[..e.valid_up_to()];
        let line = before.iter().filter(|&&b| b == b'\n').count() + 1;
        let column = before.iter().rev().take_while(|&&b| b != b'\n').count() + 1;
        ParseError::MalformedSyntax {
            line,
            column,
            message: format!("invalid UTF-8: {e}"),
        }
    })?;
    let value: Value = serde_json::from_str(text).map_err(|e| syntax_error(&e))?;
    match value.get("kind") {
        Some(Value::String(k)) if KINDS.contains(&k.as_str()) => {}
        Some(Value::String(k)) => return Err(ParseError::UnknownKind { found: Some(k.clone()) }),
        Some(other) => {
            return Err(ParseError::UnknownKind {
                found: Some(other.to_string()),
            })
        }
        None => return Err(ParseError::UnknownKind { found: None }),
    }
    // Re-read from the text so that field errors carry a position.
    serde_json::from_str(text).map_err(|e| syntax_error(&e))
}

pub fn parse_state_file(text: &[u8]) -> Result<LabeledState, ParseError> {
    parse_state_file_raw(text)?.validate()
}

#[cfg(test)]
mod tests {
    use super::*;

    const BELL: &str = r#"{"kind":"density","dims":[2,2],"matrix":[
        [[0.5,0],[0,0],[0,0],[0.5,0]],
        [[0,0],[0,0],[0,0],[0,0]],
        [[0,0],[0,0],[0,0],[0,0]],
        [[0.5,0],[0,0],[0,0],[0.5,0]]]}"#;

    #[test]
    fn parses_sc2q() {
        let s = parse_state_file(br#"{"kind":"sc2q","c1":0.7,"c2":[0.2,0.0],"c4":0.3}"#).unwrap();
        match s.state {
            State::Sc(sc) => {
                assert_eq!(sc.c1(), 0.7);
                assert_eq!(sc.c2(), Complex64::new(0.2, 0.0));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn rejects_non_psd_sc2q() {
        let err = parse_state_file(br#"{"kind":"sc2q","c1":0.5,"c2":[0.6,0],"c4":0.5}"#).unwrap_err();
        assert!(
            matches!(
                err,
                ParseError::ValidationFailed {
                    invariant: "NotPSD",
                    ..
                }
            ),
            "{err}"
        );
    }

    #[test]
    fn parses_bell_density() {
        let s = parse_state_file(BELL.as_bytes()).unwrap();
        assert!(matches!(s.state, State::Density(_)));
    }

    #[test]
    fn reports_syntax_position() {
        let err = parse_state_file(b"{\"kind\":\"sc2q\",\n\"c1\": 0.7,,}").unwrap_err();
        match err {
            ParseError::MalformedSyntax { line, .. } => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unknown_and_missing_kind() {
        assert!(matches!(
            parse_state_file(br#"{"kind":"qutrit"}"#).unwrap_err(),
            ParseError::UnknownKind { found: Some(_) }
        ));
        assert!(matches!(
            parse_state_file(br#"{"c1":1}"#).unwrap_err(),
            ParseError::UnknownKind { found: None }
        ));
    }

    #[test]
    fn missing_field_is_positioned() {
        let err = parse_state_file(br#"{"kind":"sc2q","c1":0.7,"c4":0.3}"#).unwrap_err();
        assert!(matches!(err, ParseError::MalformedSyntax { .. }), "{err}");
    }

    #[test]
    fn pure_flat_and_rows_agree() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let flat = format!(r#"{{"kind":"pure","dims":[2,2],"coeffs":[{h},0,0,[{h},0]]}}"#);
        let rows = format!(r#"{{"kind":"pure","dims":[2,2],"coeffs":[[[{h},0],[0,0]],[[0,0],[{h},0]]]}}"#);
        assert_eq!(
            parse_state_file(flat.as_bytes()).unwrap(),
            parse_state_file(rows.as_bytes()).unwrap()
        );
    }

    #[test]
    fn pure_shape_mismatch() {
        let err = parse_state_file(br#"{"kind":"pure","dims":[2,3],"coeffs":[[1,0],[0,0]]}"#).unwrap_err();
        assert!(matches!(
            err,
            ParseError::ValidationFailed {
                invariant: "DimensionMismatch",
                ..
            }
        ));
    }

    #[test]
    fn round_trip_keeps_label() {
        let text = r#"{"kind":"sc","levels":3,"parties":3,"label":"ghz-like",
            "c":[[[0.5,0],[0.1,0.1],[0,0]],[[0.1,-0.1],[0.3,0],[0,0]],[[0,0],[0,0],[0.2,0]]]}"#;
        let parsed = parse_state_file(text.as_bytes()).unwrap();
        let file = StateFile::from_state(&parsed.state, parsed.label.clone());
        let again = parse_state_file(file.to_json().as_bytes()).unwrap();
        assert_eq!(parsed, again);
        assert_eq!(again.label.as_deref(), Some("ghz-like"));
    }
}
