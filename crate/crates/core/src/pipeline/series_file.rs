//! JSON interchange format for a monthly series.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::ingest::AvocadoType;
use super::monthly::Aggregate;
use crate::error::{Error, Result};
use crate::regress::Series;

/// `{"x": [...], "y": [...], "region": ..., "type": ..., "agg": ...}`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSeriesFile", into = "RawSeriesFile")]
pub struct SeriesFile {
    pub series: Series,
    pub region: String,
    pub avocado_type: AvocadoType,
    pub agg: Aggregate,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSeriesFile {
    x: Vec<f64>,
    y: Vec<f64>,
    region: String,
    #[serde(rename = "type")]
    avocado_type: AvocadoType,
    agg: Aggregate,
}

impl TryFrom<RawSeriesFile> for SeriesFile {
    type Error = Error;

    fn try_from(raw: RawSeriesFile) -> Result<Self> {
        Ok(SeriesFile {
            series: Series::new(raw.x, raw.y)?,
            region: raw.region,
            avocado_type: raw.avocado_type,
            agg: raw.agg,
        })
    }
}

impl From<SeriesFile> for RawSeriesFile {
    fn from(f: SeriesFile) -> Self {
        RawSeriesFile {
            x: f.series.x().to_vec(),
            y: f.series.y().to_vec(),
            region: f.region,
            avocado_type: f.avocado_type,
            agg: f.agg,
        }
    }
}

impl SeriesFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text)
            .map_err(|e| Error::schema(Some(e.line()), format!("invalid series file: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("series serializes") + "\n"
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_json()).map_err(|e| Error::io(path, e))
    }
}
