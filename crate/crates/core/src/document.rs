//! JSON problem documents.
//!
//! ```json
//! {
//!   "space_dim": 2,
//!   "objective": {
//!     "pieces": [{"v": ["1", "-1"], "beta": "1"}, {"v": ["-1", "-1"], "beta": "0"}],
//!     "domain": {"eq": {"B": [], "z": []}, "ineq": {"U": [], "gamma": []}}
//!   },
//!   "constraint_set": {"ineq": {"G": [["1", "0"], ["0", "1"]], "alpha": ["1", "2"]}}
//! }
//! ```
//!
//! Every number is a rational string (`"3"`, `"-1/2"`, `"0.25"`). `domain`,
//! `constraint_set`, and each `eq`/`ineq` block may be omitted.

use serde::{Deserialize, Serialize};

use crate::analysis::Problem;
use crate::error::{Error, Result};
use crate::functions::{GPolyFunc, Piece};
use crate::numeric::{format_rational, parse_rational, Rational};
use crate::sets::GPolySet;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    space_dim: usize,
    objective: ObjectiveDoc,
    #[serde(default, skip_serializing_if = "SetDoc::is_empty")]
    constraint_set: SetDoc,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ObjectiveDoc {
    pieces: Vec<PieceDoc>,
    #[serde(default, skip_serializing_if = "DomainDoc::is_empty")]
    domain: DomainDoc,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PieceDoc {
    v: Vec<String>,
    beta: String,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DomainDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    eq: Option<DomainEq>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    ineq: Option<DomainIneq>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DomainEq {
    #[serde(rename = "B")]
    b: Vec<Vec<String>>,
    z: Vec<String>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DomainIneq {
    #[serde(rename = "U")]
    u: Vec<Vec<String>>,
    gamma: Vec<String>,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SetDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    eq: Option<SetEq>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    ineq: Option<SetIneq>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SetEq {
    #[serde(rename = "A")]
    a: Vec<Vec<String>>,
    y: Vec<String>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SetIneq {
    #[serde(rename = "G")]
    g: Vec<Vec<String>>,
    alpha: Vec<String>,
}

impl DomainDoc {
    fn is_empty(&self) -> bool {
        self.eq.is_none() && self.ineq.is_none()
    }
}

impl SetDoc {
    fn is_empty(&self) -> bool {
        self.eq.is_none() && self.ineq.is_none()
    }
}

fn parse_entry(path: &str, text: &str) -> Result<Rational> {
    parse_rational(text).map_err(|e| Error::Parse {
        location: path.to_string(),
        message: e.to_string(),
    })
}

fn parse_vector(path: &str, dim: usize, texts: &[String]) -> Result<Vec<Rational>> {
    if texts.len() != dim {
        return Err(Error::DimensionMismatch {
            context: path.to_string(),
            expected: dim,
            found: texts.len(),
        });
    }
    texts
        .iter()
        .enumerate()
        .map(|(i, t)| parse_entry(&format!("{path}[{i}]"), t))
        .collect()
}

/// Pairs each row with its right-hand side.
fn parse_block(
    path: &str,
    names: (&str, &str),
    dim: usize,
    rows: &[Vec<String>],
    rhs: &[String],
) -> Result<Vec<(Vec<Rational>, Rational)>> {
    if rows.len() != rhs.len() {
        return Err(Error::Parse {
            location: path.to_string(),
            message: format!(
                "{} has {} rows but {} has {} entries",
                names.0,
                rows.len(),
                names.1,
                rhs.len()
            ),
        });
    }
    rows.iter()
        .zip(rhs)
        .enumerate()
        .map(|(i, (row, r))| {
            Ok((
                parse_vector(&format!("{path}.{}[{i}]", names.0), dim, row)?,
                parse_entry(&format!("{path}.{}[{i}]", names.1), r)?,
            ))
        })
        .collect()
}

/// Parses a problem document.
///
/// Syntax and type errors report the line and column; structural errors
/// report the field path, such as `constraint_set.ineq.G[2]`.
pub fn parse_problem(text: &str) -> Result<Problem> {
    let doc: Document = serde_json::from_str(text).map_err(|e| Error::Parse {
        location: format!("line {} column {}", e.line(), e.column()),
        message: e.to_string(),
    })?;
    let n = doc.space_dim;

    let pieces = doc
        .objective
        .pieces
        .iter()
        .enumerate()
        .map(|(k, p)| {
            let path = format!("objective.pieces[{k}]");
            Ok(Piece::new(
                parse_vector(&format!("{path}.v"), n, &p.v)?,
                parse_entry(&format!("{path}.beta"), &p.beta)?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;

    let dom = &doc.objective.domain;
    let dom_eq = match &dom.eq {
        Some(b) => parse_block("objective.domain.eq", ("B", "z"), n, &b.b, &b.z)?,
        None => Vec::new(),
    };
    let dom_ineq = match &dom.ineq {
        Some(b) => parse_block("objective.domain.ineq", ("U", "gamma"), n, &b.u, &b.gamma)?,
        None => Vec::new(),
    };
    let set = &doc.constraint_set;
    let set_eq = match &set.eq {
        Some(b) => parse_block("constraint_set.eq", ("A", "y"), n, &b.a, &b.y)?,
        None => Vec::new(),
    };
    let set_ineq = match &set.ineq {
        Some(b) => parse_block("constraint_set.ineq", ("G", "alpha"), n, &b.g, &b.alpha)?,
        None => Vec::new(),
    };

    let f = GPolyFunc::new(pieces, GPolySet::from_rows(n, dom_eq, dom_ineq)?)?;
    Problem::new(f, GPolySet::from_rows(n, set_eq, set_ineq)?)
}

fn strings(v: &[Rational]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

fn rows(set_rows: impl Iterator<Item = Vec<Rational>>) -> Vec<Vec<String>> {
    set_rows.map(|r| strings(&r)).collect()
}

/// Emits a document that [`parse_problem`] maps back to an identical problem.
/// Empty blocks are omitted.
pub fn emit_problem(p: &Problem) -> String {
    let f = p.objective();
    let dom = f.domain();
    let d = p.constraints();
    let doc = Document {
        space_dim: p.dim(),
        objective: ObjectiveDoc {
            pieces: f
                .pieces()
                .iter()
                .map(|pc| PieceDoc {
                    v: strings(&pc.slope),
                    beta: format_rational(&pc.constant),
                })
                .collect(),
            domain: DomainDoc {
                eq: (!dom.eq_rhs().is_empty()).then(|| DomainEq {
                    b: rows(dom.eq_matrix().row_iter().map(<[_]>::to_vec)),
                    z: strings(dom.eq_rhs()),
                }),
                ineq: (!dom.ineq_rhs().is_empty()).then(|| DomainIneq {
                    u: rows(dom.ineq_matrix().row_iter().map(<[_]>::to_vec)),
                    gamma: strings(dom.ineq_rhs()),
                }),
            },
        },
        constraint_set: SetDoc {
            eq: (!d.eq_rhs().is_empty()).then(|| SetEq {
                a: rows(d.eq_matrix().row_iter().map(<[_]>::to_vec)),
                y: strings(d.eq_rhs()),
            }),
            ineq: (!d.ineq_rhs().is_empty()).then(|| SetIneq {
                g: rows(d.ineq_matrix().row_iter().map(<[_]>::to_vec)),
                alpha: strings(d.ineq_rhs()),
            }),
        },
    };
    serde_json::to_string_pretty(&doc).expect("documents are plain data")
}
