use crate::error::{Error, Result};

/// Default bound on the word length for exhaustive enumeration.
pub const DEFAULT_MAX_N: usize = 24;
/// Default bound on the word length when adjacency is materialized.
pub const DEFAULT_MAX_N_GRAPH: usize = 20;
/// Default bound on the vertex count of a component passed to the canonicalizer.
pub const DEFAULT_COMPONENT_CAP: usize = 1024;
/// Word ids are stored as `u32`, so no enumeration may exceed this.
pub const HARD_MAX_N: usize = 32;

/// Resource envelope for the enumerating engines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Settings {
    pub max_n: usize,
    pub max_n_graph: usize,
    pub component_cap: usize,
    /// Worker threads used by the partition engine; `1` runs sequentially.
    pub workers: usize,
}

impl Default for Settings {
    fn default() -> Self {
        Self {
            max_n: DEFAULT_MAX_N,
            max_n_graph: DEFAULT_MAX_N_GRAPH,
            component_cap: DEFAULT_COMPONENT_CAP,
            workers: std::thread::available_parallelism().map_or(1, |p| p.get()),
        }
    }
}

impl Settings {
    /// Defaults, with `max_n` overridden by `KWCLASS_MAX_N` when set.
    pub fn from_env() -> Result<Self> {
        let mut settings = Self::default();
        if let Ok(raw) = std::env::var("KWCLASS_MAX_N") {
            let max_n: usize = raw.trim().parse().map_err(|_| {
                Error::InvalidParameter(format!("KWCLASS_MAX_N={raw:?} is not an integer"))
            })?;
            settings = settings.with_max_n(max_n)?;
        }
        Ok(settings)
    }

    pub fn with_max_n(mut self, max_n: usize) -> Result<Self> {
        if max_n > HARD_MAX_N {
            return Err(Error::CapacityExceeded {
                requested: max_n,
                limit: HARD_MAX_N,
            });
        }
        self.max_n = max_n;
        Ok(self)
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers.max(1);
        self
    }

    pub fn sequential() -> Self {
        Self::default().with_workers(1)
    }

    pub(crate) fn check_n(&self, n: usize) -> Result<()> {
        if n > self.max_n {
            return Err(Error::CapacityExceeded {
                requested: n,
                limit: self.max_n,
            });
        }
        Ok(())
    }

    pub(crate) fn check_graph_n(&self, n: usize) -> Result<()> {
        let limit = self.max_n_graph.min(self.max_n);
        if n > limit {
            return Err(Error::CapacityExceeded {
                requested: n,
                limit,
            });
        }
        Ok(())
    }
}
