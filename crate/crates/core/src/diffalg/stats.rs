//! Per-thread kernel statistics: the highest jet order produced by a
//! derivation and the largest normalized expression. Both are maxima, so the
//! values do not depend on evaluation order, and keeping them per thread lets
//! concurrent runs in one process report independently.

use std::cell::Cell;

thread_local! {
    static MAX_JET_ORDER: Cell<usize> = const { Cell::new(0) };
    static PEAK_TERMS: Cell<usize> = const { Cell::new(0) };
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Snapshot {
    pub max_jet_order: usize,
    pub peak_terms: usize,
}

pub fn reset() {
    MAX_JET_ORDER.with(|c| c.set(0));
    PEAK_TERMS.with(|c| c.set(0));
}

pub fn snapshot() -> Snapshot {
    Snapshot { max_jet_order: MAX_JET_ORDER.with(Cell::get), peak_terms: PEAK_TERMS.with(Cell::get) }
}

pub(crate) fn record_jet_order(k: usize) {
    MAX_JET_ORDER.with(|c| c.set(c.get().max(k)));
}

pub(crate) fn record_terms(n: usize) {
    PEAK_TERMS.with(|c| c.set(c.get().max(n)));
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn maxima_accumulate_until_reset() {
        reset();
        record_jet_order(3);
        record_jet_order(2);
        record_terms(10);
        assert_eq!(snapshot(), Snapshot { max_jet_order: 3, peak_terms: 10 });
        reset();
        assert_eq!(snapshot(), Snapshot::default());
    }
}
