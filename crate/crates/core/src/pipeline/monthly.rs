//! Monthly grouping and box-plot statistics.

use std::fmt;
use std::str::FromStr;

use chrono::Datelike;
use serde::{Deserialize, Serialize};

use super::ingest::RawRecord;
use crate::error::{Error, Result};
use crate::regress::Series;

/// Monthly aggregate used as the regression target.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Aggregate {
    #[default]
    Median,
    Mean,
}

impl fmt::Display for Aggregate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Aggregate::Median => "median",
            Aggregate::Mean => "mean",
        })
    }
}

impl FromStr for Aggregate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "median" => Ok(Aggregate::Median),
            "mean" => Ok(Aggregate::Mean),
            other => Err(Error::domain(format!("unknown aggregate {other:?}"))),
        }
    }
}

/// Prices observed in one calendar month.
#[derive(Debug, Clone, PartialEq)]
pub struct MonthlyGroup {
    /// 1-based chronological rank of the month among those present.
    pub month_index: usize,
    pub year: i32,
    pub month: u32,
    /// Sorted ascending.
    pub prices: Vec<f64>,
    pub median: f64,
    pub mean: f64,
    pub q1: f64,
    pub q3: f64,
    /// Most extreme prices within 1.5·IQR of the quartiles.
    pub whisker_lo: f64,
    pub whisker_hi: f64,
}

impl MonthlyGroup {
    pub fn label(&self) -> String {
        format!("{:04}-{:02}", self.year, self.month)
    }

    pub fn outliers(&self) -> impl Iterator<Item = f64> + '_ {
        self.prices
            .iter()
            .copied()
            .filter(|&p| p < self.whisker_lo || p > self.whisker_hi)
    }

    fn aggregate(&self, agg: Aggregate) -> f64 {
        match agg {
            Aggregate::Median => self.median,
            Aggregate::Mean => self.mean,
        }
    }
}

/// Quantile by linear interpolation between order statistics
/// (h = (n−1)·p). `sorted` must be non-empty and ascending.
pub fn quantile(sorted: &[f64], p: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Sample median; the mean of the middle pair for even counts.
pub fn median(sorted: &[f64]) -> f64 {
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0
    }
}

fn summarize(month_index: usize, year: i32, month: u32, mut prices: Vec<f64>) -> MonthlyGroup {
    prices.sort_by(f64::total_cmp);
    let q1 = quantile(&prices, 0.25);
    let q3 = quantile(&prices, 0.75);
    let iqr = q3 - q1;
    let lo_fence = q1 - 1.5 * iqr;
    let hi_fence = q3 + 1.5 * iqr;
    let whisker_lo = prices
        .iter()
        .copied()
        .find(|&p| p >= lo_fence)
        .unwrap_or(q1);
    let whisker_hi = prices
        .iter()
        .rev()
        .copied()
        .find(|&p| p <= hi_fence)
        .unwrap_or(q3);
    MonthlyGroup {
        month_index,
        year,
        month,
        median: median(&prices),
        mean: prices.iter().sum::<f64>() / prices.len() as f64,
        q1,
        q3,
        whisker_lo,
        whisker_hi,
        prices,
    }
}

/// Groups date-sorted records by calendar month. The series uses x = 1..N
/// (chronological rank, so missing months leave no gaps) and y = the
/// chosen monthly aggregate. At least two distinct months are required.
pub fn group_monthly(records: &[RawRecord], agg: Aggregate) -> Result<(Series, Vec<MonthlyGroup>)> {
    if records.is_empty() {
        return Err(Error::Empty("no records to group".into()));
    }
    let mut buckets: Vec<((i32, u32), Vec<f64>)> = Vec::new();
    for r in records {
        let key = (r.date.year(), r.date.month());
        match buckets.last_mut() {
            Some((k, prices)) if *k == key => prices.push(r.average_price),
            Some((k, _)) if *k > key => {
                return Err(Error::domain("records must be sorted by date"));
            }
            _ => buckets.push((key, vec![r.average_price])),
        }
    }
    let groups: Vec<MonthlyGroup> = buckets
        .into_iter()
        .enumerate()
        .map(|(i, ((year, month), prices))| summarize(i + 1, year, month, prices))
        .collect();
    if groups.len() < 2 {
        return Err(Error::Empty(
            "records span a single month; a series needs two".into(),
        ));
    }
    let y = groups.iter().map(|g| g.aggregate(agg)).collect();
    let series = Series::indexed(y)?;
    Ok((series, groups))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pipeline::ingest::AvocadoType;
    use chrono::NaiveDate;

    fn rec(y: i32, m: u32, d: u32, p: f64) -> RawRecord {
        RawRecord {
            date: NaiveDate::from_ymd_opt(y, m, d).unwrap(),
            region: "X".into(),
            avocado_type: AvocadoType::Conventional,
            average_price: p,
        }
    }

    #[test]
    fn three_months() {
        let recs = vec![
            rec(2015, 1, 4, 1.0),
            rec(2015, 1, 11, 1.2),
            rec(2015, 2, 1, 1.1),
            rec(2015, 3, 1, 1.3),
        ];
        let (s, groups) = group_monthly(&recs, Aggregate::Median).unwrap();
        assert_eq!(s.x(), &[1.0, 2.0, 3.0]);
        assert_eq!(s.y(), &[1.1, 1.1, 1.3]);
        assert_eq!(groups[0].label(), "2015-01");
    }

    #[test]
    fn gaps_do_not_create_gaps_in_x() {
        let recs = vec![rec(2015, 1, 4, 1.0), rec(2015, 6, 7, 1.2)];
        let (s, _) = group_monthly(&recs, Aggregate::Mean).unwrap();
        assert_eq!(s.x(), &[1.0, 2.0]);
    }

    #[test]
    fn medians() {
        assert_eq!(median(&[1.0, 2.0, 3.0, 4.0]), 2.5);
        let g = summarize(1, 2015, 1, vec![1.0, 1.0, 1.0, 100.0]);
        assert_eq!(g.median, 1.0);
        assert_eq!(g.mean, 25.75);
        assert_eq!(g.outliers().collect::<Vec<_>>(), vec![100.0]);
        assert_eq!(g.whisker_hi, 1.0);
    }

    #[test]
    fn type7_quartiles() {
        let v = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0];
        assert_eq!(quantile(&v, 0.25), 2.75);
        assert_eq!(quantile(&v, 0.75), 6.25);
        assert_eq!(quantile(&[5.0], 0.25), 5.0);
    }

    #[test]
    fn unsorted_or_empty_input() {
        assert!(group_monthly(&[], Aggregate::Median).is_err());
        let recs = vec![rec(2015, 3, 1, 1.0), rec(2015, 1, 4, 1.0)];
        assert!(group_monthly(&recs, Aggregate::Median).is_err());
        let one_month = vec![rec(2015, 3, 1, 1.0), rec(2015, 3, 8, 1.1)];
        assert!(matches!(
            group_monthly(&one_month, Aggregate::Median),
            Err(Error::Empty(_))
        ));
    }
}
