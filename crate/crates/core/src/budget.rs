//! Resource caps shared by every search in the crate.

use crate::error::{Error, Result};

pub const DEFAULT_MAX_ELEMENTS: usize = 200_000;
pub const DEFAULT_MAX_ASSIGNMENTS: u64 = 10_000_000;
pub const DEFAULT_COSET_LIMIT: usize = 1_000_000;

/// Caps on closure sizes, exhaustive assignment scans and coset tables.
/// Exceeding any of them yields [`Error::BudgetExceeded`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub max_elements: usize,
    pub max_assignments: u64,
    pub coset_limit: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_elements: DEFAULT_MAX_ELEMENTS,
            max_assignments: DEFAULT_MAX_ASSIGNMENTS,
            coset_limit: DEFAULT_COSET_LIMIT,
        }
    }
}

impl Budget {
    /// Parses `elements=N,assignments=N,cosets=N` (any subset, any order).
    pub fn parse(spec: &str) -> Result<Budget> {
        let mut b = Budget::default();
        for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, val) = part.split_once('=').ok_or_else(|| Error::Syntax {
                pos: 0,
                msg: format!("budget entry `{part}` is not key=value"),
            })?;
            let n: u64 = val.trim().parse().map_err(|_| Error::Syntax {
                pos: 0,
                msg: format!("budget value `{val}` is not an integer"),
            })?;
            match key.trim() {
                "elements" => b.max_elements = n as usize,
                "assignments" => b.max_assignments = n,
                "cosets" => b.coset_limit = n as usize,
                other => {
                    return Err(Error::Syntax {
                        pos: 0,
                        msg: format!("unknown budget key `{other}`"),
                    })
                }
            }
        }
        Ok(b)
    }

    /// Defaults overridden by the `FINVAR_BUDGET` environment variable.
    pub fn from_env() -> Result<Budget> {
        match std::env::var("FINVAR_BUDGET") {
            Ok(s) => Budget::parse(&s),
            Err(_) => Ok(Budget::default()),
        }
    }

    pub(crate) fn check_assignments(&self, n: u64) -> Result<()> {
        if n > self.max_assignments {
            Err(Error::BudgetExceeded {
                what: "assignments",
                limit: self.max_assignments,
            })
        } else {
            Ok(())
        }
    }
}

/// Receives progress notifications from long-running searches.
pub trait Progress: Sync {
    fn report(&self, stage: &str, done: u64, total: Option<u64>);
}

/// Discards all progress notifications.
pub struct Silent;

impl Progress for Silent {
    fn report(&self, _stage: &str, _done: u64, _total: Option<u64>) {}
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_overrides_subset() {
        let b = Budget::parse("cosets=10, elements=5").unwrap();
        assert_eq!(b.coset_limit, 10);
        assert_eq!(b.max_elements, 5);
        assert_eq!(b.max_assignments, DEFAULT_MAX_ASSIGNMENTS);
        assert!(Budget::parse("bogus=1").is_err());
        assert!(Budget::parse("cosets").is_err());
    }
}
