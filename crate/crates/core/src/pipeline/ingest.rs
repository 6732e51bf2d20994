//! Avocado price CSV ingestion.

use std::fmt;
use std::fs::File;
use std::io::Read;
use std::path::Path;
use std::str::FromStr;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DATE_COLUMN: &str = "Date";
pub const PRICE_COLUMN: &str = "AveragePrice";
pub const TYPE_COLUMN: &str = "type";
pub const REGION_COLUMN: &str = "region";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AvocadoType {
    Conventional,
    Organic,
}

impl AvocadoType {
    pub fn as_str(self) -> &'static str {
        match self {
            AvocadoType::Conventional => "conventional",
            AvocadoType::Organic => "organic",
        }
    }
}

impl fmt::Display for AvocadoType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for AvocadoType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "conventional" => Ok(AvocadoType::Conventional),
            "organic" => Ok(AvocadoType::Organic),
            other => Err(Error::schema(
                None,
                format!("unknown avocado type {other:?}"),
            )),
        }
    }
}

/// One weekly observation.
#[derive(Debug, Clone, PartialEq)]
pub struct RawRecord {
    pub date: NaiveDate,
    pub region: String,
    pub avocado_type: AvocadoType,
    pub average_price: f64,
}

fn column(headers: &csv::StringRecord, name: &str) -> Result<usize> {
    headers
        .iter()
        .position(|h| h.trim() == name)
        .or_else(|| {
            headers
                .iter()
                .position(|h| h.trim().eq_ignore_ascii_case(name))
        })
        .ok_or_else(|| Error::schema(Some(1), format!("missing column {name:?}")))
}

/// Reads records for one region and type from CSV text, sorted by date.
///
/// Only selected rows have their date and price validated; other rows and
/// extra columns are ignored.
pub fn read_records<R: Read>(
    reader: R,
    region: &str,
    avocado_type: AvocadoType,
) -> Result<Vec<RawRecord>> {
    let mut rdr = csv::ReaderBuilder::new().flexible(true).from_reader(reader);
    let headers = rdr
        .headers()
        .map_err(|e| Error::schema(Some(1), format!("unreadable header: {e}")))?
        .clone();
    let date_col = column(&headers, DATE_COLUMN)?;
    let price_col = column(&headers, PRICE_COLUMN)?;
    let type_col = column(&headers, TYPE_COLUMN)?;
    let region_col = column(&headers, REGION_COLUMN)?;

    let mut records = Vec::new();
    for result in rdr.records() {
        let rec = result.map_err(|e| {
            let line = e.position().map(|p| p.line() as usize);
            Error::schema(line, format!("malformed CSV: {e}"))
        })?;
        let line = rec.position().map(|p| p.line() as usize);
        let field = |idx: usize, name: &str| {
            rec.get(idx)
                .ok_or_else(|| Error::schema(line, format!("missing {name} value")))
        };
        if field(region_col, REGION_COLUMN)?.trim() != region {
            continue;
        }
        let row_type = field(type_col, TYPE_COLUMN)?;
        if !row_type.trim().eq_ignore_ascii_case(avocado_type.as_str()) {
            continue;
        }
        let raw_date = field(date_col, DATE_COLUMN)?.trim();
        let date = NaiveDate::parse_from_str(raw_date, "%Y-%m-%d")
            .map_err(|_| Error::schema(line, format!("bad date {raw_date:?}")))?;
        let raw_price = field(price_col, PRICE_COLUMN)?.trim();
        let average_price: f64 = raw_price
            .parse()
            .map_err(|_| Error::schema(line, format!("bad price {raw_price:?}")))?;
        if !average_price.is_finite() || average_price <= 0.0 {
            return Err(Error::schema(
                line,
                format!("price must be positive, got {raw_price:?}"),
            ));
        }
        records.push(RawRecord {
            date,
            region: region.to_string(),
            avocado_type,
            average_price,
        });
    }
    if records.is_empty() {
        return Err(Error::EmptySelection {
            region: region.to_string(),
            avocado_type: avocado_type.to_string(),
        });
    }
    records.sort_by_key(|r| r.date);
    Ok(records)
}

/// [`read_records`] on a file.
pub fn ingest_csv(
    path: impl AsRef<Path>,
    region: &str,
    avocado_type: AvocadoType,
) -> Result<Vec<RawRecord>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_records(file, region, avocado_type)
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "\
,Date,AveragePrice,Total Volume,type,year,region
0,2015-02-08,1.10,100,conventional,2015,Chicago
1,2015-01-04,1.20,100,conventional,2015,Chicago
2,2015-01-04,1.90,100,organic,2015,Chicago
3,2015-01-11,0.95,100,conventional,2015,Boise
4,2015-01-04,1.30,100,conventional,2015,Chicago
";

    #[test]
    fn selects_and_sorts() {
        let recs = read_records(SAMPLE.as_bytes(), "Chicago", AvocadoType::Conventional).unwrap();
        assert_eq!(recs.len(), 3);
        assert!(recs.windows(2).all(|w| w[0].date <= w[1].date));
        assert_eq!(recs[2].average_price, 1.10);
        let organic = read_records(SAMPLE.as_bytes(), "Chicago", AvocadoType::Organic).unwrap();
        assert_eq!(organic.len(), 1);
    }

    #[test]
    fn unknown_region_is_empty_selection() {
        let err =
            read_records(SAMPLE.as_bytes(), "Atlantis", AvocadoType::Conventional).unwrap_err();
        assert!(matches!(err, Error::EmptySelection { .. }));
    }

    #[test]
    fn malformed_price_names_the_row() {
        let csv = "Date,AveragePrice,type,region\n2015-01-04,1.2,conventional,Chicago\n2015-01-11,abc,conventional,Chicago\n";
        match read_records(csv.as_bytes(), "Chicago", AvocadoType::Conventional) {
            Err(Error::Schema {
                row: Some(3),
                message,
            }) => assert!(message.contains("abc")),
            other => panic!("unexpected {other:?}"),
        }
        let csv = "Date,AveragePrice,type,region\n2015-01-04,-1.2,conventional,Chicago\n";
        assert!(matches!(
            read_records(csv.as_bytes(), "Chicago", AvocadoType::Conventional),
            Err(Error::Schema { .. })
        ));
    }

    #[test]
    fn missing_column_is_schema_error() {
        let csv = "Date,type,region\n2015-01-04,conventional,Chicago\n";
        let err = read_records(csv.as_bytes(), "Chicago", AvocadoType::Conventional).unwrap_err();
        match err {
            Error::Schema { message, .. } => assert!(message.contains("AveragePrice")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn bad_date_is_schema_error() {
        let csv = "Date,AveragePrice,type,region\n04/01/2015,1.2,conventional,Chicago\n";
        assert!(matches!(
            read_records(csv.as_bytes(), "Chicago", AvocadoType::Conventional),
            Err(Error::Schema { row: Some(2), .. })
        ));
    }

    #[test]
    fn missing_file_is_io_error() {
        let err = ingest_csv(
            "/nonexistent/avocado.csv",
            "Chicago",
            AvocadoType::Conventional,
        )
        .unwrap_err();
        assert!(matches!(err, Error::Io { .. }));
    }

    #[test]
    fn type_parsing() {
        assert_eq!(
            "Organic".parse::<AvocadoType>().unwrap(),
            AvocadoType::Organic
        );
        assert!("hass".parse::<AvocadoType>().is_err());
    }
}
