use std::sync::atomic::{AtomicU64, Ordering};

/// Node-count limit for the exponential searches. Exhausting the budget is
/// always reported explicitly; partial results are flagged, never silently
/// truncated. The counter is atomic so parallel search branches can share it.
#[derive(Debug)]
pub struct Budget {
    limit: u64,
    used: AtomicU64,
}

impl Budget {
    pub fn new(limit: u64) -> Self {
        Budget {
            limit,
            used: AtomicU64::new(0),
        }
    }

    /// No practical limit; searches terminate on their own.
    pub fn unlimited() -> Self {
        Budget::new(u64::MAX)
    }

    /// Count one search node. Returns false once the limit is exceeded.
    #[inline]
    pub fn tick(&self) -> bool {
        self.used.fetch_add(1, Ordering::Relaxed) < self.limit
    }

    /// Fold a child budget's consumption into this one.
    pub fn tick_many(&self, n: u64) {
        self.used.fetch_add(n, Ordering::Relaxed);
    }

    pub fn used(&self) -> u64 {
        self.used.load(Ordering::Relaxed)
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::unlimited()
    }
}
