//! JSON file formats for spaces and operators.

use std::fs;
use std::path::Path;

use bjgeo_core::{Exponent, Matrix, NormSpace, Operator};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::InputError;

/// `"inf"` or a number.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PSpec {
    Finite(f64),
    Named(Infinity),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Infinity {
    #[serde(rename = "inf")]
    Inf,
}

/// On-disk form of a [`NormSpace`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", try_from = "RawSpace")]
pub enum SpaceSpec {
    Lp { p: PSpec, dim: usize },
    Polygon { vertices: Vec<[f64; 2]> },
    InnerProduct { gram: Vec<Vec<f64>> },
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(rename_all = "snake_case")]
enum Kind {
    Lp,
    Polygon,
    InnerProduct,
}

/// Flat form read from disk. A tagged enum would buffer its input and lose
/// the positions that diagnostics report.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpace {
    kind: Kind,
    p: Option<PSpec>,
    dim: Option<usize>,
    vertices: Option<Vec<[f64; 2]>>,
    gram: Option<Vec<Vec<f64>>>,
}

impl TryFrom<RawSpace> for SpaceSpec {
    type Error = String;

    fn try_from(raw: RawSpace) -> Result<Self, String> {
        let extra = |name: &str, present: bool| {
            if present {
                Err(format!("field `{name}` does not belong to this kind"))
            } else {
                Ok(())
            }
        };
        match raw.kind {
            Kind::Lp => {
                extra("vertices", raw.vertices.is_some())?;
                extra("gram", raw.gram.is_some())?;
                Ok(SpaceSpec::Lp { p: raw.p.ok_or("missing field `p`")?, dim: raw.dim.ok_or("missing field `dim`")? })
            }
            Kind::Polygon => {
                extra("p", raw.p.is_some())?;
                extra("gram", raw.gram.is_some())?;
                if raw.dim.is_some_and(|d| d != 2) {
                    return Err("a polygon space has dimension 2".into());
                }
                Ok(SpaceSpec::Polygon { vertices: raw.vertices.ok_or("missing field `vertices`")? })
            }
            Kind::InnerProduct => {
                extra("p", raw.p.is_some())?;
                extra("vertices", raw.vertices.is_some())?;
                let gram = raw.gram.ok_or("missing field `gram`")?;
                if raw.dim.is_some_and(|d| d != gram.len()) {
                    return Err("`dim` disagrees with the size of `gram`".into());
                }
                Ok(SpaceSpec::InnerProduct { gram })
            }
        }
    }
}

impl SpaceSpec {
    pub fn build(&self) -> bjgeo_core::Result<NormSpace> {
        match self {
            SpaceSpec::Lp { p: PSpec::Finite(p), dim } => NormSpace::lp(*dim, *p),
            SpaceSpec::Lp { p: PSpec::Named(Infinity::Inf), dim } => NormSpace::sup(*dim),
            SpaceSpec::Polygon { vertices } => NormSpace::polygon(vertices),
            SpaceSpec::InnerProduct { gram } => NormSpace::inner_product(Matrix::from_rows(gram)?),
        }
    }
}

impl From<&NormSpace> for SpaceSpec {
    fn from(space: &NormSpace) -> Self {
        match space {
            NormSpace::Lp { dim, p: Exponent::Finite(p) } => SpaceSpec::Lp { p: PSpec::Finite(*p), dim: *dim },
            NormSpace::Lp { dim, p: Exponent::Infinity } => SpaceSpec::Lp { p: PSpec::Named(Infinity::Inf), dim: *dim },
            NormSpace::Polygon(poly) => SpaceSpec::Polygon { vertices: poly.vertices().to_vec() },
            NormSpace::InnerProduct(g) => SpaceSpec::InnerProduct { gram: g.matrix().to_rows() },
        }
    }
}

/// On-disk form of an [`Operator`]. A missing codomain means the domain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorSpec {
    pub matrix: Vec<Vec<f64>>,
    pub domain: SpaceSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub codomain: Option<SpaceSpec>,
}

impl OperatorSpec {
    pub fn build(&self) -> bjgeo_core::Result<Operator> {
        let domain = self.domain.build()?;
        let codomain = match &self.codomain {
            Some(c) => c.build()?,
            None => domain.clone(),
        };
        Operator::new(Matrix::from_rows(&self.matrix)?, domain, codomain)
    }
}

impl From<&Operator> for OperatorSpec {
    fn from(op: &Operator) -> Self {
        OperatorSpec { matrix: op.matrix().to_rows(), domain: op.domain().into(), codomain: Some(op.codomain().into()) }
    }
}

/// Parses JSON, reporting the line, column and field path of the first error.
pub fn parse_json<T: DeserializeOwned>(text: &str, origin: &str) -> Result<T, InputError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        InputError::Parse {
            origin: origin.to_string(),
            line: inner.line(),
            column: inner.column(),
            field: if path == "." { None } else { Some(path) },
            message: inner.to_string(),
        }
    })
}

fn read(path: &Path) -> Result<String, InputError> {
    fs::read_to_string(path).map_err(|source| InputError::Io { path: path.display().to_string(), source })
}

pub fn load_space(path: &Path) -> Result<NormSpace, InputError> {
    let spec: SpaceSpec = parse_json(&read(path)?, &path.display().to_string())?;
    Ok(spec.build()?)
}

pub fn load_operator(path: &Path) -> Result<Operator, InputError> {
    let spec: OperatorSpec = parse_json(&read(path)?, &path.display().to_string())?;
    Ok(spec.build()?)
}

/// A vector given as `1,-0.5` or `[1, -0.5]`.
pub fn parse_vector(s: &str) -> Result<Vec<f64>, String> {
    let body = s.trim().trim_start_matches('[').trim_end_matches(']');
    body.split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| format!("bad coordinate {:?}: {e}", t.trim())))
        .collect()
}
