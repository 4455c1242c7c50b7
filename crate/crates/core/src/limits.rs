use std::time::{Duration, Instant};

use crate::{Error, Result};

/// Resource caps shared by every potentially exponential construction.
#[derive(Clone, Debug)]
pub struct Limits {
    /// Maximal number of subsets produced by a determinization.
    pub det_states: usize,
    /// Maximal number of elements of a computed monoid.
    pub monoid_size: usize,
    /// Maximal number of sets stored by a saturation.
    pub stored_sets: usize,
    /// Optional wall-clock deadline, checked cooperatively.
    pub deadline: Option<Instant>,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            det_states: 1 << 20,
            monoid_size: 50_000,
            stored_sets: 4_000_000,
            deadline: None,
        }
    }
}

impl Limits {
    pub fn with_budget(mut self, budget: Duration) -> Self {
        self.deadline = Some(Instant::now() + budget);
        self
    }

    pub(crate) fn check_deadline(&self) -> Result<()> {
        match self.deadline {
            Some(d) if Instant::now() >= d => Err(Error::Budget),
            _ => Ok(()),
        }
    }

    pub(crate) fn check(&self, what: &'static str, value: usize, cap: usize) -> Result<()> {
        if value > cap {
            Err(Error::Limit { what, cap })
        } else {
            Ok(())
        }
    }
}
