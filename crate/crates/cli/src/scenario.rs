//! Scenario files and line-anchored configuration errors.

use gaudinqq::bethe::GaudinProblem;
use gaudinqq::cartan::{CartanData, CartanTwist};
use gaudinqq::io::{coweights_from_json, poly_from_json, scalars_from_json};
use gaudinqq::polyring::{Poly, Scalar};
use gaudinqq::qqcore::MasterData;
use serde_json::Value;

use crate::{CliError, Mode};

const KNOWN_KEYS: &[&str] = &[
    "group",
    "marked_points",
    "coweights",
    "lambdas",
    "twist",
    "degrees",
    "mode",
    "tolerances",
    "seed",
    "starts",
];

/// 1-based line of the first occurrence of `"key"` in `text`.
pub fn locate(text: &str, key: &str) -> Option<usize> {
    let needle = format!("\"{key}\"");
    text.lines().position(|l| l.contains(&needle)).map(|k| k + 1)
}

pub fn config_error(text: &str, key: &str, msg: impl Into<String>) -> CliError {
    CliError::Config {
        line: locate(text, key),
        message: msg.into(),
    }
}

/// Parse JSON, reporting syntax errors at their line.
pub fn parse_json(text: &str) -> Result<Value, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Config {
        line: Some(e.line()),
        message: format!("invalid JSON: {e}"),
    })
}

/// Validated scenario, still mode-agnostic.
#[derive(Clone, Debug)]
pub struct Scenario {
    pub text: String,
    pub raw: Value,
    pub cd: CartanData,
    pub degrees: Vec<usize>,
    pub mode: Mode,
    pub tol: Option<f64>,
    pub seed: Option<u64>,
    pub starts: Option<usize>,
}

impl Scenario {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let raw = parse_json(text)?;
        let obj = raw
            .as_object()
            .ok_or_else(|| config_error(text, "", "scenario must be a JSON object"))?;
        if let Some(k) = obj.keys().find(|k| !KNOWN_KEYS.contains(&k.as_str())) {
            return Err(config_error(text, k, format!("unknown field \"{k}\"")));
        }
        let label = obj
            .get("group")
            .and_then(Value::as_str)
            .ok_or_else(|| config_error(text, "group", "\"group\" must be a type label such as \"A2\""))?;
        let cd = CartanData::from_label(label).map_err(|e| config_error(text, "group", e.to_string()))?;
        let degrees = obj
            .get("degrees")
            .and_then(Value::as_array)
            .ok_or_else(|| config_error(text, "degrees", "\"degrees\" must be an integer array"))?
            .iter()
            .map(|d| {
                d.as_i64()
                    .ok_or_else(|| config_error(text, "degrees", "degrees must be integers"))
                    .and_then(|d| {
                        usize::try_from(d).map_err(|_| config_error(text, "degrees", format!("negative degree {d}")))
                    })
            })
            .collect::<Result<Vec<_>, _>>()?;
        if degrees.len() != cd.rank() {
            return Err(config_error(
                text,
                "degrees",
                format!("{} degrees given for rank {}", degrees.len(), cd.rank()),
            ));
        }
        let mode = match obj.get("mode") {
            None => Mode::Exact,
            Some(v) => match v.as_str() {
                Some("exact") => Mode::Exact,
                Some("float") => Mode::Float,
                _ => return Err(config_error(text, "mode", "\"mode\" must be \"exact\" or \"float\"")),
            },
        };
        let tol = match obj.get("tolerances") {
            None => None,
            Some(t) => {
                let tol = t
                    .get("tol")
                    .and_then(Value::as_f64)
                    .ok_or_else(|| config_error(text, "tolerances", "\"tolerances\" needs a numeric \"tol\""))?;
                if !(tol > 0.0 && tol.is_finite()) {
                    return Err(config_error(text, "tolerances", "tolerance must be positive"));
                }
                Some(tol)
            }
        };
        let seed = match obj.get("seed") {
            None => None,
            Some(s) => Some(s.as_u64().ok_or_else(|| config_error(text, "seed", "seed must be a nonnegative integer"))?),
        };
        let starts = match obj.get("starts") {
            None => None,
            Some(s) => Some(
                s.as_u64()
                    .filter(|&n| n > 0)
                    .ok_or_else(|| config_error(text, "starts", "starts must be a positive integer"))? as usize,
            ),
        };
        if obj.contains_key("marked_points") == obj.contains_key("lambdas") {
            return Err(config_error(
                text,
                "marked_points",
                "give either \"marked_points\" with \"coweights\" or \"lambdas\"",
            ));
        }
        Ok(Scenario {
            text: text.to_string(),
            raw,
            cd,
            degrees,
            mode,
            tol,
            seed,
            starts,
        })
    }

    /// Typed problem in the requested arithmetic.
    pub fn problem<F: Scalar>(&self) -> Result<GaudinProblem<F>, CliError> {
        let text = &self.text;
        let r = self.cd.rank();
        let master = if let Some(pts) = self.raw.get("marked_points") {
            let points: Vec<F> = scalars_from_json(pts, "marked_points").map_err(|e| config_error(text, "marked_points", e.to_string()))?;
            let cw = self
                .raw
                .get("coweights")
                .ok_or_else(|| config_error(text, "marked_points", "\"coweights\" is required with \"marked_points\""))?;
            let coweights = coweights_from_json(cw).map_err(|e| config_error(text, "coweights", e.to_string()))?;
            if coweights.len() != points.len() {
                return Err(config_error(
                    text,
                    "coweights",
                    format!("{} coweights for {} marked points", coweights.len(), points.len()),
                ));
            }
            if let Some(k) = coweights.iter().position(|c| c.len() != r) {
                return Err(config_error(text, "coweights", format!("coweights[{k}] must have {r} entries")));
            }
            MasterData::new(&self.cd, points, coweights).map_err(|e| config_error(text, "coweights", e.to_string()))?
        } else {
            let list = self.raw["lambdas"]
                .as_array()
                .ok_or_else(|| config_error(text, "lambdas", "\"lambdas\" must be a list of coefficient arrays"))?;
            let lambdas: Vec<Poly<F>> = list
                .iter()
                .enumerate()
                .map(|(k, p)| poly_from_json(p, &format!("lambdas[{k}]")))
                .collect::<Result<_, _>>()
                .map_err(|e| config_error(text, "lambdas", e.to_string()))?;
            if lambdas.len() != r {
                return Err(config_error(text, "lambdas", format!("expected {r} master polynomials")));
            }
            MasterData::from_lambdas(&self.cd, lambdas).map_err(|e| config_error(text, "lambdas", e.to_string()))?
        };
        let twist_v = self
            .raw
            .get("twist")
            .ok_or_else(|| config_error(text, "twist", "missing field \"twist\""))?;
        let zeta: Vec<F> = scalars_from_json(twist_v, "twist").map_err(|e| config_error(text, "twist", e.to_string()))?;
        if zeta.len() != r {
            return Err(config_error(text, "twist", format!("twist must have {r} entries")));
        }
        GaudinProblem::new(self.cd.clone(), master, CartanTwist::new(zeta), self.degrees.clone())
            .map_err(|e| config_error(text, "degrees", e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use gaudinqq::polyring::{q, Q};

    const SL2: &str = r#"{
  "group": "A1",
  "marked_points": ["0"],
  "coweights": [[1]],
  "twist": ["1/2"],
  "degrees": [1]
}"#;

    #[test]
    fn parses_sl2() {
        let s = Scenario::parse(SL2).unwrap();
        assert_eq!(s.mode, Mode::Exact);
        let p = s.problem::<Q>().unwrap();
        assert_eq!(p.twist.zeta, vec![q(1, 2)]);
        assert_eq!(p.master.lambda(0), &Poly::from_i64(&[0, 1]));
    }

    #[test]
    fn negative_degree_anchored() {
        let text = SL2.replace("[1]\n", "[-1]\n");
        match Scenario::parse(&text).unwrap_err() {
            CliError::Config { line, message } => {
                assert_eq!(line, Some(6));
                assert!(message.contains("negative"), "{message}");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn syntax_error_anchored() {
        let text = SL2.replace("\"A1\",", "\"A1\"");
        match Scenario::parse(&text).unwrap_err() {
            CliError::Config { line, .. } => assert_eq!(line, Some(3)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn length_mismatch() {
        let text = SL2.replace("[[1]]", "[[1], [1]]");
        let s = Scenario::parse(&text).unwrap();
        match s.problem::<Q>().unwrap_err() {
            CliError::Config { line, .. } => assert_eq!(line, Some(4)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unknown_field() {
        let text = SL2.replace("\"degrees\"", "\"degree\"");
        assert!(matches!(Scenario::parse(&text), Err(CliError::Config { line: Some(6), .. })));
    }
}
