use crate::error::Error;

/// Cap on the number of items an enumeration may emit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    limit: u64,
}

impl Budget {
    pub const UNLIMITED: Budget = Budget { limit: u64::MAX };

    pub fn new(limit: u64) -> Self {
        Budget { limit }
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// Fails once `count` goes past the limit.
    #[inline]
    pub(crate) fn check(&self, count: u64, what: &str) -> Result<(), Error> {
        if count > self.limit {
            Err(Error::budget(what, self.limit))
        } else {
            Ok(())
        }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::UNLIMITED
    }
}
