use crate::error::{GrigError, Result};

/// Hard ceiling on quotient depth: the level-`n` portrait must fit a `u64`
/// key and vertex indices must fit a `u8`.
pub const MAX_SUPPORTED_DEPTH: u8 = 6;

/// Size guards for the exhaustive and tower computations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Guards {
    /// Largest quotient depth `n` for `Γ/Stab(n)` (order `2^(5·2^(n-3)+2)`).
    pub max_depth: u8,
    /// Largest `m` for coset computations modulo `K_m`.
    pub max_level: u8,
    /// Largest wreath-product order that may be enumerated.
    pub max_wreath_order: usize,
}

impl Default for Guards {
    fn default() -> Self {
        Guards { max_depth: 5, max_level: 4, max_wreath_order: 100_000 }
    }
}

impl Guards {
    pub fn check_depth(&self, depth: u8) -> Result<()> {
        let limit = self.max_depth.min(MAX_SUPPORTED_DEPTH);
        if depth > limit {
            return Err(GrigError::DepthGuard { requested: depth, limit });
        }
        Ok(())
    }

    pub fn check_level(&self, level: u8) -> Result<()> {
        if level > self.max_level {
            return Err(GrigError::LevelGuard { requested: level, limit: self.max_level });
        }
        Ok(())
    }

    pub fn check_wreath_order(&self, order: u128) -> Result<()> {
        if order > self.max_wreath_order as u128 {
            return Err(GrigError::WreathTooLarge { order, limit: self.max_wreath_order });
        }
        Ok(())
    }
}
