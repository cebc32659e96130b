//! JSON fixture files: a polynomial and/or an explicit field, a base point,
//! a gauge degree, and optional configuration overrides.

use std::fs;
use std::path::Path;

use leafgauge::fields::VectorFieldC2;
use leafgauge::wirtinger::{parse_rational, ComplexQ, Monomial, WirtingerPoly};
use leafgauge::PointC2;
use serde::{Deserialize, Deserializer, Serialize};

use crate::CliError;

/// One monomial `coeff · z^dz z̄^dzbar w^dw w̄^dwbar`. Coefficients are exact
/// decimals or fractions such as `"0.25"` or `"-1/3"`; plain JSON numbers are
/// read through their decimal text.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermRecord {
    #[serde(default)]
    pub dz: u32,
    #[serde(default)]
    pub dzbar: u32,
    #[serde(default)]
    pub dw: u32,
    #[serde(default)]
    pub dwbar: u32,
    #[serde(default = "zero_text", deserialize_with = "coeff_text")]
    pub re: String,
    #[serde(
        default = "zero_text",
        deserialize_with = "coeff_text",
        skip_serializing_if = "is_zero_text"
    )]
    pub im: String,
}

fn zero_text() -> String {
    String::from("0")
}

fn is_zero_text(s: &String) -> bool {
    s == "0"
}

fn coeff_text<'de, D: Deserializer<'de>>(d: D) -> Result<String, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Text(String),
        Number(serde_json::Number),
    }
    Ok(match Repr::deserialize(d)? {
        Repr::Text(s) => s,
        Repr::Number(n) => n.to_string(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldRecord {
    pub z: Vec<TermRecord>,
    pub w: Vec<TermRecord>,
    pub m: u32,
}

/// Optional numeric settings; command-line flags take precedence.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigOverrides {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol_ode: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol_root: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chart_radius: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sample_radius: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
}

impl ConfigOverrides {
    /// Fields set in `self` win over those in `base`.
    pub fn over(self, base: ConfigOverrides) -> ConfigOverrides {
        ConfigOverrides {
            seed: self.seed.or(base.seed),
            samples: self.samples.or(base.samples),
            tol_ode: self.tol_ode.or(base.tol_ode),
            tol_root: self.tol_root.or(base.tol_root),
            chart_radius: self.chart_radius.or(base.chart_radius),
            sample_radius: self.sample_radius.or(base.sample_radius),
            delta: self.delta.or(base.delta),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Fixture {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub polynomial: Vec<TermRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<FieldRecord>,
    /// Base point as `(Re z, Im z, Re w, Im w)`.
    pub point: [f64; 4],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    #[serde(default, skip_serializing_if = "is_default")]
    pub config: ConfigOverrides,
}

fn is_default(c: &ConfigOverrides) -> bool {
    *c == ConfigOverrides::default()
}

impl Fixture {
    pub fn from_json(text: &str) -> Result<Fixture, CliError> {
        let f: Fixture =
            serde_json::from_str(text).map_err(|e| CliError::Input(format!("fixture: {e}")))?;
        f.validate()?;
        Ok(f)
    }

    pub fn load(path: &Path) -> Result<Fixture, CliError> {
        Fixture::from_json(&read_text(path)?)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("fixture serializes");
        s.push('\n');
        s
    }

    fn validate(&self) -> Result<(), CliError> {
        if self.polynomial.is_empty() && self.field.is_none() {
            return Err(CliError::Input(String::from(
                "fixture needs a polynomial or a field",
            )));
        }
        if !self.point.iter().all(|v| v.is_finite()) {
            return Err(CliError::Input(String::from("point must be finite")));
        }
        if self.n == Some(0) {
            return Err(CliError::Input(String::from("n must be positive")));
        }
        self.poly()?;
        self.vector_field()?;
        Ok(())
    }

    pub fn base_point(&self) -> PointC2 {
        PointC2::from_real(self.point)
    }

    pub fn poly(&self) -> Result<Option<WirtingerPoly>, CliError> {
        if self.polynomial.is_empty() {
            return Ok(None);
        }
        records_to_poly(&self.polynomial).map(Some)
    }

    pub fn vector_field(&self) -> Result<Option<VectorFieldC2>, CliError> {
        let Some(f) = &self.field else {
            return Ok(None);
        };
        Ok(Some(VectorFieldC2::new(
            records_to_poly(&f.z)?,
            records_to_poly(&f.w)?,
            f.m,
        )))
    }
}

pub fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn coefficient(text: &str) -> Result<leafgauge::wirtinger::Rational, CliError> {
    parse_rational(text.trim()).ok_or_else(|| CliError::Input(format!("bad coefficient {text:?}")))
}

pub fn records_to_poly(records: &[TermRecord]) -> Result<WirtingerPoly, CliError> {
    let mut terms = Vec::with_capacity(records.len());
    for r in records {
        let c = ComplexQ::new(coefficient(&r.re)?, coefficient(&r.im)?);
        terms.push((Monomial([r.dz, r.dzbar, r.dw, r.dwbar]), c));
    }
    Ok(WirtingerPoly::from_terms(terms))
}

pub fn poly_to_records(p: &WirtingerPoly) -> Vec<TermRecord> {
    p.terms()
        .map(|(m, c)| TermRecord {
            dz: m.0[0],
            dzbar: m.0[1],
            dw: m.0[2],
            dwbar: m.0[3],
            re: c.re.to_string(),
            im: c.im.to_string(),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const PZW: &str = r#"{
        "polynomial": [{"dz": 1, "dzbar": 1, "dw": 1, "dwbar": 1, "re": "1"}],
        "point": [1, 0, 1, 0],
        "n": 4
    }"#;

    #[test]
    fn parses_minimal_fixture() {
        let f = Fixture::from_json(PZW).unwrap();
        assert_eq!(f.poly().unwrap().unwrap().to_string(), "z*zbar*w*wbar");
        assert_eq!(f.base_point(), PointC2::real(1.0, 1.0));
        assert_eq!(f.n, Some(4));
    }

    #[test]
    fn numbers_and_fractions_are_exact() {
        let f = Fixture::from_json(
            r#"{"polynomial": [{"dz": 2, "re": 0.1, "im": "-1/3"}, {"dz": 2, "re": "0.2"}], "point": [1, 0, 0, 0]}"#,
        )
        .unwrap();
        let p = f.poly().unwrap().unwrap();
        let (_, c) = p.terms().next().unwrap();
        assert_eq!(c.re.to_string(), "3/10");
        assert_eq!(c.im.to_string(), "-1/3");
    }

    #[test]
    fn rejects_malformed_input() {
        for bad in [
            r#"{"point": [1, 0, 0, 0]}"#,
            r#"{"polynomial": [{"dz": 1, "re": "x"}], "point": [1, 0, 0, 0]}"#,
            r#"{"polynomial": [{"dz": 1, "re": "1"}], "point": [1, 0, 0]}"#,
            r#"{"polynomial": [{"dz": 1, "re": "1"}], "point": [1, 0, 0, 0], "colour": 1}"#,
            r#"{"polynomial": [{"dz": 1, "re": "1"}], "point": [1, 0, 0, 0], "n": 0}"#,
        ] {
            assert!(
                matches!(Fixture::from_json(bad), Err(CliError::Input(_))),
                "{bad}"
            );
        }
    }

    #[test]
    fn round_trip_preserves_terms() {
        let text = r#"{
            "polynomial": [
                {"dz": 1, "dzbar": 0, "dw": 1, "dwbar": 0, "re": "0.5", "im": "-2/7"},
                {"dz": 0, "dzbar": 1, "dw": 0, "dwbar": 1, "re": "0.5", "im": "2/7"}
            ],
            "field": {"z": [{"dz": 1, "re": "-1"}], "w": [{"dw": 1, "re": "1"}], "m": 1},
            "point": [1, 0, 1, 0],
            "config": {"seed": 7, "tol_ode": 1e-9}
        }"#;
        let a = Fixture::from_json(text).unwrap();
        let b = Fixture::from_json(&a.to_json()).unwrap();
        assert_eq!(a.poly().unwrap(), b.poly().unwrap());
        assert_eq!(a.vector_field().unwrap(), b.vector_field().unwrap());
        let canonical = Fixture {
            polynomial: poly_to_records(&a.poly().unwrap().unwrap()),
            ..a.clone()
        };
        let again = Fixture::from_json(&canonical.to_json()).unwrap();
        assert_eq!(again, canonical);
        assert_eq!(again.config, a.config);
    }
}
