//! Work limits for the finite computations (boxes, enumerations, searches).

use crate::error::{Error, Result};

pub const DEFAULT_CELLS: usize = 10_000;
pub const DEFAULT_ENUMERATION: u64 = 1 << 22;
pub const DEFAULT_SEARCH: u64 = 10_000_000;

/// Environment variable overriding the defaults: either a bare integer
/// (cell budget) or comma-separated `cells=..,enum=..,search=..`.
pub const BUDGET_ENV: &str = "POLYMIX_BUDGET";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    /// Largest box, in lattice cells, used for solution spaces.
    pub cells: usize,
    /// Largest number of configurations a brute-force count may visit.
    pub enumeration: u64,
    /// Largest number of candidates a relation search may test.
    pub search: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { cells: DEFAULT_CELLS, enumeration: DEFAULT_ENUMERATION, search: DEFAULT_SEARCH }
    }
}

impl Budget {
    pub fn parse(text: &str) -> Result<Self> {
        let mut b = Budget::default();
        let text = text.trim();
        if let Ok(cells) = text.parse::<usize>() {
            b.cells = cells;
            return Ok(b);
        }
        for part in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (key, value) =
                part.split_once('=').ok_or_else(|| Error::Parse(format!("bad budget entry {part:?}")))?;
            let n: u64 = value.trim().parse().map_err(|_| Error::Parse(format!("bad budget value {value:?}")))?;
            match key.trim() {
                "cells" => b.cells = n as usize,
                "enum" | "enumeration" => b.enumeration = n,
                "search" => b.search = n,
                other => return Err(Error::Parse(format!("unknown budget key {other:?}"))),
            }
        }
        Ok(b)
    }

    /// Defaults, overridden by the environment when set.
    pub fn from_env() -> Result<Self> {
        match std::env::var(BUDGET_ENV) {
            Ok(s) => Self::parse(&s),
            Err(_) => Ok(Self::default()),
        }
    }
}
