//! Warp serialization: `{ "domain": [lo, hi], "knots": [...], "values": [...] }`.

use std::fs;
use std::path::Path;

use kmr_core::{TimeWarp, WarpFunction};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Serialize, Deserialize)]
pub struct WarpJson {
    pub domain: [f64; 2],
    pub knots: Vec<f64>,
    pub values: Vec<f64>,
}

impl From<&WarpFunction> for WarpJson {
    fn from(w: &WarpFunction) -> Self {
        let (lo, hi) = w.domain();
        WarpJson {
            domain: [lo, hi],
            knots: w.knots().to_vec(),
            values: w.values().to_vec(),
        }
    }
}

impl TryFrom<WarpJson> for WarpFunction {
    type Error = CliError;
    fn try_from(j: WarpJson) -> Result<WarpFunction, CliError> {
        let w = WarpFunction::new(j.knots, j.values)?;
        let (lo, hi) = w.domain();
        if j.domain != [lo, hi] {
            return Err(CliError::Data(format!(
                "warp domain {:?} does not match knot range [{lo}, {hi}]",
                j.domain
            )));
        }
        Ok(w)
    }
}

pub fn save_warp(path: &Path, w: &WarpFunction) -> Result<(), CliError> {
    let json = serde_json::to_string_pretty(&WarpJson::from(w))
        .map_err(|e| CliError::Data(e.to_string()))?;
    fs::write(path, json + "\n").map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

pub fn load_warp(path: &Path) -> Result<WarpFunction, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    let j: WarpJson = serde_json::from_str(&text)
        .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    j.try_into()
}
