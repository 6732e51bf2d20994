#![no_main]

use fracreg_core::pipeline::{group_monthly, read_records, Aggregate, AvocadoType};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    for t in [AvocadoType::Conventional, AvocadoType::Organic] {
        let Ok(records) = read_records(data, "Chicago", t) else {
            continue;
        };
        assert!(!records.is_empty());
        assert!(records.windows(2).all(|w| w[0].date <= w[1].date));
        assert!(records
            .iter()
            .all(|r| r.average_price > 0.0 && r.average_price.is_finite()));
        for agg in [Aggregate::Median, Aggregate::Mean] {
            if let Ok((series, groups)) = group_monthly(&records, agg) {
                assert_eq!(series.len(), groups.len());
                for g in &groups {
                    assert!(g.q1 <= g.median && g.median <= g.q3);
                }
            }
        }
    }
});
