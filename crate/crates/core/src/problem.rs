//! Problem files: JSON descriptions of a system, its suspect points, and the
//! component fixtures backing the oracle.
//!
//! Complex numbers are `[re, im]` pairs throughout. Component
//! parametrizations are strings in the parameters `t` (one-dimensional) or
//! `t1..td`; rational entries such as `1/t` are allowed.

use serde::Deserialize;

use num_complex::Complex64;

use crate::config::NumericalConfig;
use crate::dual::Point;
use crate::error::{Error, Result};
use crate::oracle::{param_ring, ComponentSpec, OracleHandle, Representation};
use crate::parse::{parse_poly, parse_rational};
use crate::poly::Polynomial;
use crate::ring::{ring_from_names, Ring};

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Problem {
    pub variables: Vec<String>,
    pub generators: Vec<String>,
    #[serde(default)]
    pub suspects: Vec<SuspectSpec>,
    #[serde(default)]
    pub components: Vec<ComponentJson>,
    #[serde(default)]
    pub config: NumericalConfig,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuspectSpec {
    pub point: Vec<[f64; 2]>,
    #[serde(default)]
    pub dim: usize,
    /// Component id carrying the suspect's parametrization (required when
    /// dim > 0 and ambiguous).
    #[serde(default)]
    pub component: Option<String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentJson {
    pub id: String,
    pub dim: usize,
    #[serde(default)]
    pub parametrization: Option<Vec<String>>,
    #[serde(default)]
    pub points: Option<Vec<Vec<[f64; 2]>>>,
}

fn to_complex(pair: &[f64; 2]) -> Complex64 {
    Complex64::new(pair[0], pair[1])
}

impl SuspectSpec {
    pub fn to_point(&self) -> Point {
        Point::new(self.point.iter().map(to_complex).collect())
    }
}

impl Problem {
    pub fn parse(src: &str) -> Result<Problem> {
        let p: Problem = serde_json::from_str(src).map_err(|e| Error::Problem(format!("{}", e)))?;
        p.validate()?;
        Ok(p)
    }

    pub fn from_path(path: &std::path::Path) -> Result<Problem> {
        let src = std::fs::read_to_string(path)
            .map_err(|e| Error::Problem(format!("{}: {}", path.display(), e)))?;
        Problem::parse(&src)
    }

    fn validate(&self) -> Result<()> {
        if self.variables.is_empty() {
            return Err(Error::Problem("no variables declared".into()));
        }
        let mut names = self.variables.clone();
        names.sort();
        names.dedup();
        if names.len() != self.variables.len() {
            return Err(Error::Problem("duplicate variable names".into()));
        }
        if self.generators.is_empty() {
            return Err(Error::Problem("no generators".into()));
        }
        let mut ids: Vec<&str> = self.components.iter().map(|c| c.id.as_str()).collect();
        ids.sort();
        ids.dedup();
        if ids.len() != self.components.len() {
            return Err(Error::Problem("duplicate component ids".into()));
        }
        for c in &self.components {
            match (&c.parametrization, &c.points) {
                (Some(_), Some(_)) | (None, None) => {
                    return Err(Error::Problem(format!(
                        "component {}: exactly one of parametrization/points is required",
                        c.id
                    )))
                }
                (Some(p), None) => {
                    if c.dim == 0 {
                        return Err(Error::Problem(format!(
                            "component {}: a parametrization needs dim >= 1",
                            c.id
                        )));
                    }
                    if p.len() != self.variables.len() {
                        return Err(Error::Problem(format!(
                            "component {}: parametrization must give one entry per variable",
                            c.id
                        )));
                    }
                }
                (None, Some(_)) => {
                    if c.dim != 0 {
                        return Err(Error::Problem(format!(
                            "component {}: point lists are for dim 0",
                            c.id
                        )));
                    }
                }
            }
        }
        for s in &self.suspects {
            if s.point.len() != self.variables.len() {
                return Err(Error::Problem(
                    "suspect point length does not match the variable count".into(),
                ));
            }
        }
        Ok(())
    }

    pub fn ring(&self) -> Ring {
        ring_from_names(self.variables.clone())
    }

    pub fn parsed_generators(&self) -> Result<Vec<Polynomial>> {
        let r = self.ring();
        self.generators.iter().map(|s| parse_poly(s, &r)).collect()
    }

    pub fn parsed_components(&self) -> Result<Vec<ComponentSpec>> {
        self.components
            .iter()
            .map(|c| {
                let rep = match (&c.parametrization, &c.points) {
                    (Some(entries), None) => {
                        let pr = param_ring(c.dim);
                        Representation::Parametrization(
                            entries
                                .iter()
                                .map(|s| parse_rational(s, &pr))
                                .collect::<Result<_>>()?,
                        )
                    }
                    (None, Some(pts)) => Representation::PointList(
                        pts.iter()
                            .map(|p| Point::new(p.iter().map(to_complex).collect()))
                            .collect(),
                    ),
                    _ => unreachable!("validated"),
                };
                Ok(ComponentSpec {
                    id: c.id.clone(),
                    dim: c.dim,
                    rep,
                    constraints: Vec::new(),
                })
            })
            .collect()
    }

    /// Oracle over all fixture components, anchored at `suspect`.
    pub fn oracle(&self, suspect: &Point, cfg: &NumericalConfig) -> Result<OracleHandle> {
        OracleHandle::new(
            &self.ring(),
            self.parsed_generators()?,
            self.parsed_components()?,
            suspect.clone(),
            cfg,
        )
    }

    /// Per-run configuration with CLI overrides applied.
    pub fn effective_config(
        &self,
        delta: Option<f64>,
        seed: Option<u64>,
        max_degree: Option<usize>,
    ) -> NumericalConfig {
        let mut cfg = self.config.clone();
        if let Some(d) = delta {
            cfg.delta = d;
        }
        if let Some(s) = seed {
            cfg.seed = s;
        }
        if let Some(m) = max_degree {
            cfg.max_degree = m;
        }
        cfg
    }

    /// The component a positive-dimensional suspect rides on.
    pub fn suspect_component(&self, s: &SuspectSpec) -> Result<String> {
        if let Some(id) = &s.component {
            return Ok(id.clone());
        }
        let candidates: Vec<&ComponentJson> =
            self.components.iter().filter(|c| c.dim == s.dim).collect();
        match candidates.len() {
            1 => Ok(candidates[0].id.clone()),
            0 => Err(Error::Problem(format!(
                "no fixture component of dimension {} for the suspect",
                s.dim
            ))),
            _ => Err(Error::Problem(
                "ambiguous suspect component; set the suspect's \"component\" field".into(),
            )),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_a_problem_file() {
        let src = r#"{
            "variables": ["x", "y"],
            "generators": ["x(y^2 - x^3)", "y(y^2 - x^3)"],
            "suspects": [{"point": [[0.0, 0.0], [0.0, 0.0]], "dim": 0}],
            "components": [{"id": "cusp", "dim": 1, "parametrization": ["t^2", "t^3"]}],
            "config": {"seed": 7}
        }"#;
        let p = Problem::parse(src).unwrap();
        assert_eq!(p.variables, vec!["x", "y"]);
        assert_eq!(p.config.seed, 7);
        assert_eq!(p.config.delta, 1e-8);
        let gens = p.parsed_generators().unwrap();
        assert_eq!(gens.len(), 2);
        let comps = p.parsed_components().unwrap();
        assert_eq!(comps.len(), 1);
    }

    #[test]
    fn rejects_bad_files() {
        assert!(Problem::parse(r#"{"variables": [], "generators": ["x"]}"#).is_err());
        assert!(Problem::parse(r#"{"variables": ["x"], "generators": []}"#).is_err());
        let both = r#"{
            "variables": ["x"], "generators": ["x"],
            "components": [{"id": "c", "dim": 1, "parametrization": ["t"], "points": [[[0,0]]]}]
        }"#;
        assert!(Problem::parse(both).is_err());
        let unknown = r#"{"variables": ["x"], "generators": ["x"], "extra": 1}"#;
        assert!(Problem::parse(unknown).is_err());
    }
}
