//! Body-spec files: the JSON wire format for convex bodies.
//!
//! ```json
//! {"type":"ball","center":[0,0],"radius":1}
//! {"type":"ellipsoid","semi_axes":[2,1]}
//! {"type":"polytope","vertices":[[0,0],[1,0],[0,1]]}
//! {"type":"revolution","exponent":1.5,"height":1.0,"dim":2}
//! {"type":"hull","base":{...},"points":[[0,-1.1]]}
//! {"type":"rounded","base":{...},"phi":0.1}
//! ```
//!
//! Unknown fields are rejected.

use anyhow::{bail, Context, Result};
use hatlab_core::body::BodyKind;
use hatlab_core::ConvexBody;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum BodySpec {
    Ball {
        center: Vec<f64>,
        radius: f64,
    },
    Ellipsoid {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        center: Option<Vec<f64>>,
        semi_axes: Vec<f64>,
    },
    Polytope {
        vertices: Vec<Vec<f64>>,
    },
    Revolution {
        exponent: f64,
        height: f64,
        dim: usize,
    },
    Hull {
        base: Box<BodySpec>,
        points: Vec<Vec<f64>>,
    },
    Rounded {
        base: Box<BodySpec>,
        phi: f64,
    },
}

impl BodySpec {
    pub fn build(&self) -> Result<ConvexBody> {
        match self {
            BodySpec::Ball { center, radius } => {
                ConvexBody::ball(center.clone(), *radius).map_err(into_anyhow)
            }
            BodySpec::Ellipsoid { center, semi_axes } => {
                let c = center.clone().unwrap_or_else(|| vec![0.0; semi_axes.len()]);
                ConvexBody::ellipsoid(c, semi_axes.clone()).map_err(into_anyhow)
            }
            BodySpec::Polytope { vertices } => {
                ConvexBody::polytope(vertices.clone()).map_err(into_anyhow)
            }
            BodySpec::Revolution { exponent, height, dim } => {
                ConvexBody::revolution(*exponent, *height, *dim).map_err(into_anyhow)
            }
            BodySpec::Hull { base, points } => {
                let mut body = base.build()?;
                for p in points {
                    body = body.hull_with_point(p.clone()).map_err(into_anyhow)?;
                }
                Ok(body)
            }
            BodySpec::Rounded { base, phi } => {
                base.build()?.minkowski_ball(*phi).map_err(into_anyhow)
            }
        }
    }

    /// Serializes a body back into the wire format.
    pub fn from_body(body: &ConvexBody) -> Result<BodySpec> {
        Ok(match body.kind() {
            BodyKind::Ball { center, radius } => {
                BodySpec::Ball { center: center.clone(), radius: *radius }
            }
            BodyKind::Ellipsoid { center, semi_axes } => BodySpec::Ellipsoid {
                center: Some(center.clone()),
                semi_axes: semi_axes.clone(),
            },
            BodyKind::Polytope { vertices } => BodySpec::Polytope { vertices: vertices.clone() },
            BodyKind::Revolution { exponent, height, dim } => BodySpec::Revolution {
                exponent: *exponent,
                height: *height,
                dim: *dim,
            },
            BodyKind::Hull { base, points } => BodySpec::Hull {
                base: Box::new(BodySpec::from_body(base)?),
                points: points.clone(),
            },
            BodyKind::Rounded { base, phi } => BodySpec::Rounded {
                base: Box::new(BodySpec::from_body(base)?),
                phi: *phi,
            },
        })
    }

    pub fn from_json(text: &str) -> Result<BodySpec> {
        serde_json::from_str(text).context("malformed body spec")
    }

    pub fn load(path: &std::path::Path) -> Result<ConvexBody> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading body spec {}", path.display()))?;
        let spec = BodySpec::from_json(&text)?;
        spec.build()
    }
}

fn into_anyhow(e: hatlab_core::Error) -> anyhow::Error {
    anyhow::anyhow!("{e}")
}

/// Cap-spec wire format: `{"tip":[..],"axis":[..],"eps":ε,"delta":δ}`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct CapSpecWire {
    pub tip: Vec<f64>,
    pub axis: Vec<f64>,
    pub eps: f64,
    pub delta: f64,
}

impl CapSpecWire {
    pub fn build(&self) -> Result<hatlab_core::CapSpec> {
        let axis = hatlab_core::Direction::normalized(self.axis.clone()).map_err(into_anyhow)?;
        hatlab_core::CapSpec::new(self.tip.clone(), axis, self.eps, self.delta)
            .map_err(into_anyhow)
    }

    pub fn from_cap(cap: &hatlab_core::CapSpec) -> CapSpecWire {
        CapSpecWire {
            tip: cap.tip().to_vec(),
            axis: cap.axis().as_slice().to_vec(),
            eps: cap.eps(),
            delta: cap.delta(),
        }
    }
}

/// Parses a comma-separated vector such as `"0,1"` or `"0.5,-1,2"`.
pub fn parse_vector(text: &str) -> Result<Vec<f64>> {
    let parts: Vec<f64> = text
        .split(',')
        .map(|p| p.trim().parse::<f64>().with_context(|| format!("bad number {p:?}")))
        .collect::<Result<_>>()?;
    if parts.len() < 2 {
        bail!("vector needs at least two components, got {text:?}");
    }
    Ok(parts)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_all_variants() {
        let specs = [
            r#"{"type":"ball","center":[0,0],"radius":1}"#,
            r#"{"type":"ellipsoid","semi_axes":[2,1]}"#,
            r#"{"type":"polytope","vertices":[[0,0],[1,0],[0,1]]}"#,
            r#"{"type":"revolution","exponent":1.5,"height":1.0,"dim":2}"#,
            r#"{"type":"hull","base":{"type":"ball","center":[0,0],"radius":1},"points":[[0,-1.1]]}"#,
            r#"{"type":"rounded","base":{"type":"polytope","vertices":[[0,0],[1,0],[0,1]]},"phi":0.1}"#,
        ];
        for text in specs {
            let spec = BodySpec::from_json(text).unwrap();
            let body = spec.build().unwrap();
            let back = BodySpec::from_body(&body).unwrap();
            let body2 = back.build().unwrap();
            assert_eq!(body, body2, "round trip changed {text}");
        }
    }

    #[test]
    fn unknown_fields_rejected() {
        let bad = r#"{"type":"ball","center":[0,0],"radius":1,"color":"red"}"#;
        assert!(BodySpec::from_json(bad).is_err());
    }

    #[test]
    fn parse_vector_examples() {
        assert_eq!(parse_vector("0,1").unwrap(), vec![0.0, 1.0]);
        assert_eq!(parse_vector("0.5, -1, 2").unwrap(), vec![0.5, -1.0, 2.0]);
        assert!(parse_vector("1").is_err());
        assert!(parse_vector("a,b").is_err());
    }
}
