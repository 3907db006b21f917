//! Plain-text model files.
//!
//! ```text
//! maboost-model 1
//! algorithm maboost-active
//! geometry entropy
//! features 2
//! stumps 2
//! 0 0 1 1
//! 1 -0.25 -1 0.5
//! ```
//!
//! Each stump line is `feature threshold polarity eta`. Numbers use the
//! shortest representation that reads back to the same `f64`.

use std::fmt::Write as _;
use std::path::Path;

use maboost::{Ensemble, Stump};

use crate::CliError;

#[derive(Debug, Clone, PartialEq)]
pub struct Model {
    pub algorithm: String,
    pub geometry: String,
    pub features: usize,
    pub ensemble: Ensemble,
}

impl Model {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "maboost-model 1").unwrap();
        writeln!(s, "algorithm {}", self.algorithm).unwrap();
        writeln!(s, "geometry {}", self.geometry).unwrap();
        writeln!(s, "features {}", self.features).unwrap();
        writeln!(s, "stumps {}", self.ensemble.len()).unwrap();
        for (h, eta) in self.ensemble.members() {
            writeln!(s, "{} {} {} {}", h.feature, h.threshold, h.polarity, eta).unwrap();
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut lines = text.lines().enumerate();
        let mut next = |key: &str| -> Result<String, CliError> {
            let (k, line) = lines
                .next()
                .ok_or_else(|| CliError::Parse(format!("model ends before '{key}'")))?;
            match line.split_once(' ') {
                Some((found, value)) if found == key => Ok(value.trim().to_string()),
                _ => Err(CliError::Parse(format!(
                    "model line {}: expected '{key} …'",
                    k + 1
                ))),
            }
        };
        if next("maboost-model")? != "1" {
            return Err(CliError::Parse("unsupported model version".into()));
        }
        let algorithm = next("algorithm")?;
        let geometry = next("geometry")?;
        let features = parse_num::<usize>(&next("features")?, 4)?;
        let count = parse_num::<usize>(&next("stumps")?, 5)?;
        let mut members = Vec::with_capacity(count);
        for (k, line) in lines {
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 4 {
                return Err(CliError::Parse(format!(
                    "model line {}: expected 4 fields",
                    k + 1
                )));
            }
            let feature = parse_num::<usize>(fields[0], k + 1)?;
            let threshold = parse_num::<f64>(fields[1], k + 1)?;
            let polarity = parse_num::<i8>(fields[2], k + 1)?;
            let eta = parse_num::<f64>(fields[3], k + 1)?;
            if feature >= features || !(polarity == 1 || polarity == -1) {
                return Err(CliError::Parse(format!(
                    "model line {}: invalid stump",
                    k + 1
                )));
            }
            members.push((Stump::new(feature, threshold, polarity), eta));
        }
        if members.len() != count {
            return Err(CliError::Parse(format!(
                "model declares {count} stumps, found {}",
                members.len()
            )));
        }
        Ok(Model {
            algorithm,
            geometry,
            features,
            ensemble: Ensemble::from_members(members),
        })
    }

    pub fn save(&self, path: &Path) -> Result<(), CliError> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        Self::parse(&std::fs::read_to_string(path)?)
    }
}

fn parse_num<T: std::str::FromStr>(raw: &str, line: usize) -> Result<T, CliError> {
    raw.parse()
        .map_err(|_| CliError::Parse(format!("model line {line}: cannot parse '{raw}'")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip() {
        let ensemble = Ensemble::from_members(vec![
            (Stump::new(0, f64::NEG_INFINITY, -1), 0.1),
            (Stump::new(1, -0.25, 1), 1.0 / 3.0),
        ]);
        let model = Model {
            algorithm: "smooth".into(),
            geometry: "entropy".into(),
            features: 2,
            ensemble,
        };
        let text = model.to_text();
        assert!(text.contains("\n0 -inf -1 0.1\n"));
        assert_eq!(Model::parse(&text).unwrap(), model);
    }

    #[test]
    fn rejects_truncated_models() {
        assert!(Model::parse("maboost-model 1\nalgorithm smooth\n").is_err());
        let text =
            "maboost-model 1\nalgorithm a\ngeometry entropy\nfeatures 1\nstumps 2\n0 0 1 1\n";
        assert!(Model::parse(text).is_err());
        let text =
            "maboost-model 1\nalgorithm a\ngeometry entropy\nfeatures 1\nstumps 1\n3 0 1 1\n";
        assert!(Model::parse(text).is_err());
    }
}
