//! Work limit for bounded enumerations, read from `MONCAT_MAX_WORK`.

use std::sync::atomic::{AtomicUsize, Ordering};

use crate::error::{Error, Result};

pub const DEFAULT_MAX_WORK: usize = 1_000_000;

pub fn max_work() -> usize {
    std::env::var("MONCAT_MAX_WORK")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_WORK)
}

/// Counts expanded search nodes; shareable between worker threads.
#[derive(Debug)]
pub struct Budget {
    limit: usize,
    used: AtomicUsize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget::new(max_work())
    }
}

impl Budget {
    pub fn new(limit: usize) -> Self {
        Budget { limit, used: AtomicUsize::new(0) }
    }

    pub fn spend(&self, n: usize) -> Result<()> {
        let used = self.used.fetch_add(n, Ordering::Relaxed) + n;
        if used > self.limit {
            Err(Error::WorkLimit(self.limit))
        } else {
            Ok(())
        }
    }

    pub fn used(&self) -> usize {
        self.used.load(Ordering::Relaxed)
    }
}
