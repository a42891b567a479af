use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use super::direct::{normalize, raw_bound, tet_index};
use crate::qlaurent::{QuarterExp, QuarterSeries};

/// Concurrent memo table for I(m,e).
///
/// Entries are keyed by the symmetry-normalized representative and remember
/// the order they were computed to; a request for more precision recomputes
/// and replaces the entry. Concurrent writers compute identical values, so
/// last-write-wins is harmless.
#[derive(Debug, Default)]
pub struct IndexTable {
    cache: RwLock<HashMap<(i64, i64), Arc<QuarterSeries>>>,
}

impl IndexTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// I(m,e) truncated at `trunc`.
    pub fn get(&self, m: i64, e: i64, trunc: QuarterExp) -> QuarterSeries {
        let rep = normalize(m, e);
        let need = QuarterExp(trunc.0 - rep.shift.0);
        if need.0 <= raw_bound(rep.m, rep.e) {
            return QuarterSeries::zero(trunc);
        }
        let key = (rep.m, rep.e);
        let cached = self.cache.read().unwrap().get(&key).filter(|s| s.trunc() >= need).cloned();
        let series = match cached {
            Some(s) => s,
            None => {
                // Round up so nearby requests reuse the entry.
                let target = QuarterExp(need.0 + 8);
                let fresh = Arc::new(tet_index(rep.m, rep.e, target));
                let mut cache = self.cache.write().unwrap();
                let slot = cache.entry(key).or_insert_with(|| fresh.clone());
                if slot.trunc() < fresh.trunc() {
                    *slot = fresh.clone();
                }
                fresh
            }
        };
        series.truncated_to(need).shift(rep.shift).scale_i64(rep.sign)
    }

    /// Number of cached representatives.
    pub fn len(&self) -> usize {
        self.cache.read().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lookups_match_direct_computation() {
        let table = IndexTable::new();
        let t = QuarterExp::whole(10);
        for m in -5..=5 {
            for e in -5..=5 {
                assert_eq!(table.get(m, e, t), tet_index(m, e, t), "({m},{e})");
            }
        }
        assert!(table.len() < 121);
    }

    #[test]
    fn higher_precision_request_recomputes() {
        let table = IndexTable::new();
        let low = table.get(1, 2, QuarterExp::whole(4));
        let high = table.get(1, 2, QuarterExp::whole(12));
        assert_eq!(high.trunc(), QuarterExp::whole(12));
        assert!(low.agrees_with(&high));
    }
}
