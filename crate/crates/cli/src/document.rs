//! Versioned JSON output and the automorphism file format.
//!
//! Polynomials are written as canonical strings (the `Display` form, which
//! the parser reads back exactly) and rationals as `"p/q"` strings.

use planar_lnd::expr::{parse_poly, parse_rat, ParseError};
use planar_lnd::{Derivation, ElementaryMap, PolyAut, Rat};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Ok,
    /// A mathematical negative answer: not locally nilpotent, not a
    /// coordinate, verification failed.
    Negative,
    Error,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultDocument {
    pub schema_version: u32,
    pub command: Vec<String>,
    pub status: Status,
    pub payload: serde_json::Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<f64>,
}

#[derive(Debug, Error)]
pub enum FormatError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error("invalid elementary map: {0}")]
    InvalidMap(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivationJson {
    pub p: String,
    pub q: String,
}

impl From<&Derivation> for DerivationJson {
    fn from(d: &Derivation) -> Self {
        DerivationJson {
            p: d.p.to_string(),
            q: d.q.to_string(),
        }
    }
}

impl DerivationJson {
    pub fn parse(&self) -> Result<Derivation, ParseError> {
        Ok(Derivation::new(parse_poly(&self.p)?, parse_poly(&self.q)?))
    }
}

/// One elementary map as stored in automorphism files.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum MapJson {
    Affine {
        matrix: [[String; 2]; 2],
        translation: [String; 2],
    },
    ShearX {
        c: String,
        k: u32,
    },
    ShearY {
        c: String,
        k: u32,
    },
}

impl From<&ElementaryMap> for MapJson {
    fn from(e: &ElementaryMap) -> Self {
        let s = |r: &Rat| r.to_string();
        match e {
            ElementaryMap::Affine { matrix, translation } => MapJson::Affine {
                matrix: [[s(&matrix[0][0]), s(&matrix[0][1])], [s(&matrix[1][0]), s(&matrix[1][1])]],
                translation: [s(&translation[0]), s(&translation[1])],
            },
            ElementaryMap::ShearX { c, k } => MapJson::ShearX { c: s(c), k: *k },
            ElementaryMap::ShearY { c, k } => MapJson::ShearY { c: s(c), k: *k },
        }
    }
}

impl MapJson {
    pub fn to_map(&self) -> Result<ElementaryMap, FormatError> {
        let invalid = |e: planar_lnd::automorphism::AutError| FormatError::InvalidMap(e.to_string());
        Ok(match self {
            MapJson::Affine { matrix, translation } => {
                let r = |t: &String| parse_rat(t);
                ElementaryMap::affine(
                    [[r(&matrix[0][0])?, r(&matrix[0][1])?], [r(&matrix[1][0])?, r(&matrix[1][1])?]],
                    [r(&translation[0])?, r(&translation[1])?],
                )
                .map_err(invalid)?
            }
            MapJson::ShearX { c, k } => ElementaryMap::shear_x(parse_rat(c)?, *k).map_err(invalid)?,
            MapJson::ShearY { c, k } => ElementaryMap::shear_y(parse_rat(c)?, *k).map_err(invalid)?,
        })
    }
}

/// An automorphism with its chain and the images of `x` and `y`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AutJson {
    pub chain: Vec<MapJson>,
    pub image_x: String,
    pub image_y: String,
}

impl From<&PolyAut> for AutJson {
    fn from(theta: &PolyAut) -> Self {
        AutJson {
            chain: theta.chain().iter().map(MapJson::from).collect(),
            image_x: theta.image_x().to_string(),
            image_y: theta.image_y().to_string(),
        }
    }
}

impl AutJson {
    pub fn to_aut(&self) -> Result<PolyAut, FormatError> {
        chain_to_aut(&self.chain)
    }
}

pub fn chain_to_aut(chain: &[MapJson]) -> Result<PolyAut, FormatError> {
    let maps = chain.iter().map(MapJson::to_map).collect::<Result<Vec<_>, _>>()?;
    Ok(PolyAut::from_chain(maps))
}

/// Reads an automorphism file: a JSON array of elementary maps.
pub fn read_theta(text: &str) -> Result<PolyAut, FormatError> {
    let chain: Vec<MapJson> = serde_json::from_str(text)?;
    chain_to_aut(&chain)
}

pub fn write_theta(theta: &PolyAut) -> String {
    let chain: Vec<MapJson> = theta.chain().iter().map(MapJson::from).collect();
    serde_json::to_string_pretty(&chain).expect("serializable")
}

#[cfg(test)]
mod tests {
    use super::*;
    use planar_lnd::rat;

    #[test]
    fn theta_file_round_trip() {
        let theta = PolyAut::from_chain(vec![
            ElementaryMap::swap(),
            ElementaryMap::shear_y(rat(-3, 2), 2).unwrap(),
            ElementaryMap::affine([[rat(1, 1), rat(2, 1)], [rat(0, 1), rat(1, 3)]], [rat(5, 1), rat(0, 1)]).unwrap(),
        ]);
        let text = write_theta(&theta);
        assert_eq!(read_theta(&text).unwrap(), theta);
        assert!(text.contains("\"type\": \"shear_y\""));
        assert!(text.contains("\"-3/2\""));
    }

    #[test]
    fn bad_theta_files() {
        assert!(matches!(read_theta("[{\"type\":\"shear_x\",\"c\":\"1\",\"k\":0}]"), Err(FormatError::InvalidMap(_))));
        assert!(matches!(
            read_theta("[{\"type\":\"affine\",\"matrix\":[[\"1\",\"2\"],[\"2\",\"4\"]],\"translation\":[\"0\",\"0\"]}]"),
            Err(FormatError::InvalidMap(_))
        ));
        assert!(matches!(read_theta("[{\"type\":\"shear_x\",\"c\":\"1/0\",\"k\":1}]"), Err(FormatError::Parse(_))));
        assert!(matches!(read_theta("{}"), Err(FormatError::Json(_))));
    }

    #[test]
    fn document_omits_timing_by_default() {
        let doc = ResultDocument {
            schema_version: SCHEMA_VERSION,
            command: vec!["div".into()],
            status: Status::Ok,
            payload: serde_json::json!({"divergence": "0"}),
            timing_ms: None,
        };
        let text = serde_json::to_string(&doc).unwrap();
        assert!(!text.contains("timing"));
        assert_eq!(serde_json::from_str::<ResultDocument>(&text).unwrap(), doc);
    }
}
