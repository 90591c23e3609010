use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::chart::{Chart, ChartError, Interval};
use crate::expr::{parse_expr, Expr, ParseError};

pub type Vector = [Expr; 3];
pub type Matrix = [[Expr; 3]; 3];

/// Almost contact metric data on a chart: metric `g`, the (1,1)-tensor
/// `phi` (row = output component), the vector field `xi` and the 1-form
/// `eta`. Nothing here is assumed to satisfy the axioms; that is what the
/// checks are for.
#[derive(Clone, Debug)]
pub struct AcmStructure {
    pub name: Option<String>,
    pub chart: Chart,
    pub g: Matrix,
    pub phi: Matrix,
    pub xi: Vector,
    pub eta: Vector,
}

/// On-disk manifold description. Every expression is a string in the
/// expression grammar over the chart's coordinate names.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifoldFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub coords: [String; 3],
    /// Open interval per coordinate; missing coordinates default to R.
    #[serde(default)]
    pub domain: BTreeMap<String, Interval>,
    pub sample_box: BTreeMap<String, Interval>,
    pub metric: [[String; 3]; 3],
    pub phi: [[String; 3]; 3],
    pub xi: [String; 3],
    pub eta: [String; 3],
}

#[derive(Debug, Error)]
pub enum StructureError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{field}: {source}")]
    Expr {
        field: String,
        #[source]
        source: ParseError,
    },
    #[error(transparent)]
    Chart(#[from] ChartError),
    #[error("sample_box is missing coordinate {0:?}")]
    MissingSampleBox(String),
    #[error("{0} names a coordinate that is not in coords")]
    UnknownCoordinate(String),
    #[error("metric is not symmetric: entry ({0},{1}) differs from ({1},{0})")]
    AsymmetricMetric(usize, usize),
}

impl StructureError {
    /// Byte offset inside the offending expression, for parse failures.
    pub fn expr_offset(&self) -> Option<usize> {
        match self {
            StructureError::Expr { source, .. } => Some(source.offset),
            _ => None,
        }
    }
}

impl AcmStructure {
    pub fn from_json(src: &str) -> Result<Self, StructureError> {
        let file: ManifoldFile = serde_json::from_str(src)?;
        Self::from_file(&file)
    }

    pub fn from_file(file: &ManifoldFile) -> Result<Self, StructureError> {
        let names = file.coords.clone();
        for key in file.domain.keys().chain(file.sample_box.keys()) {
            if !names.contains(key) {
                return Err(StructureError::UnknownCoordinate(key.clone()));
            }
        }
        let domain = names
            .clone()
            .map(|n| file.domain.get(&n).copied().unwrap_or(Interval::REAL_LINE));
        let mut sample_box = [Interval::REAL_LINE; 3];
        for (i, n) in names.iter().enumerate() {
            sample_box[i] = *file
                .sample_box
                .get(n)
                .ok_or_else(|| StructureError::MissingSampleBox(n.clone()))?;
        }
        let chart = Chart::new(names, domain, sample_box)?;
        let vars = chart.names();
        let parse = |field: String, src: &str| {
            parse_expr(src, &vars).map_err(|source| StructureError::Expr { field, source })
        };
        let matrix = |label: &str, m: &[[String; 3]; 3]| -> Result<Matrix, StructureError> {
            let mut out: Matrix = Default::default();
            for i in 0..3 {
                for j in 0..3 {
                    out[i][j] = parse(format!("{label}[{i}][{j}]"), &m[i][j])?;
                }
            }
            Ok(out)
        };
        let vector = |label: &str, v: &[String; 3]| -> Result<Vector, StructureError> {
            let mut out: Vector = Default::default();
            for i in 0..3 {
                out[i] = parse(format!("{label}[{i}]"), &v[i])?;
            }
            Ok(out)
        };
        let g = matrix("metric", &file.metric)?;
        let phi = matrix("phi", &file.phi)?;
        let xi = vector("xi", &file.xi)?;
        let eta = vector("eta", &file.eta)?;
        for i in 0..3 {
            for j in i + 1..3 {
                if g[i][j].fold() != g[j][i].fold() {
                    return Err(StructureError::AsymmetricMetric(i, j));
                }
            }
        }
        Ok(AcmStructure {
            name: file.name.clone(),
            chart,
            g,
            phi,
            xi,
            eta,
        })
    }

    pub fn to_file(&self) -> ManifoldFile {
        let names = self.chart.names().map(str::to_string);
        let by_name = |iv: &[Interval; 3]| {
            names
                .iter()
                .cloned()
                .zip(iv.iter().copied())
                .collect::<BTreeMap<_, _>>()
        };
        let m = |m: &Matrix| m.clone().map(|row| row.map(|e| e.to_string()));
        ManifoldFile {
            name: self.name.clone(),
            coords: names.clone(),
            domain: by_name(self.chart.domain()),
            sample_box: by_name(self.chart.sample_box()),
            metric: m(&self.g),
            phi: m(&self.phi),
            xi: self.xi.clone().map(|e| e.to_string()),
            eta: self.eta.clone().map(|e| e.to_string()),
        }
    }
}

impl Default for Expr {
    fn default() -> Self {
        Expr::zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SRC: &str = r#"{
        "coords": ["x", "y", "z"],
        "domain": {"z": [0, null]},
        "sample_box": {"x": [-2, 2], "y": [-2, 2], "z": [0.2, 3]},
        "metric": [["z + y^2", "0", "-y"], ["0", "z", "0"], ["-y", "0", "1"]],
        "phi": [["0", "-1", "0"], ["1", "0", "0"], ["0", "-y", "0"]],
        "xi": ["0", "0", "1"],
        "eta": ["-y", "0", "1"]
    }"#;

    #[test]
    fn parses_and_round_trips() {
        let s = AcmStructure::from_json(SRC).unwrap();
        assert_eq!(s.g[1][1], Expr::var("z"));
        assert_eq!(s.chart.domain()[2].lo, 0.0);
        assert_eq!(s.chart.domain()[0], Interval::REAL_LINE);
        let text = serde_json::to_string(&s.to_file()).unwrap();
        let back = AcmStructure::from_json(&text).unwrap();
        assert_eq!(back.g, s.g);
        assert_eq!(back.phi, s.phi);
    }

    #[test]
    fn reports_field_and_offset() {
        let bad = SRC.replace("\"z + y^2\"", "\"z + w\"");
        let err = AcmStructure::from_json(&bad).unwrap_err();
        assert_eq!(err.expr_offset(), Some(4));
        assert!(err.to_string().starts_with("metric[0][0]:"), "{err}");
    }

    #[test]
    fn rejects_asymmetric_metric() {
        let bad = SRC.replacen("\"-y\", \"0\", \"1\"", "\"y\", \"0\", \"1\"", 1);
        assert!(matches!(
            AcmStructure::from_json(&bad),
            Err(StructureError::AsymmetricMetric(0, 2))
        ));
    }
}
