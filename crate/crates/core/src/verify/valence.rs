use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::decompose_weight;

/// Zero accounting for a weight-`w` form: `ν_∞ + ν_i/2 + ν_ρ/3 + interior = w/12`.
///
/// `nu_i_min` and `nu_rho_min` are the orders forced by `w mod 12`; the
/// interior count is what remains for zeros in `F ∖ {i, ρ}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValenceBudget {
    pub weight: u32,
    pub nu_inf: u32,
    pub nu_i_min: u32,
    pub nu_rho_min: u32,
    pub interior: u32,
}

impl ValenceBudget {
    /// The identity, multiplied through by 12 so it is checked in integers.
    pub fn identity_holds(&self) -> bool {
        12 * self.nu_inf + 6 * self.nu_i_min + 4 * self.nu_rho_min + 12 * self.interior
            == self.weight
    }
}

/// Minimal `(ν_i, ν_ρ) ∈ {0,1} × {0,1,2}` with `ν_i/2 + ν_ρ/3 ≡ s/12 (mod 1)`
/// where `w = 12n + s`.
pub fn valence_budget(weight: u32, nu_inf: u32) -> Result<ValenceBudget> {
    let d = decompose_weight(weight)?;
    let (nu_i_min, nu_rho_min) = match d.s {
        0 => (0, 0),
        4 => (0, 1),
        6 => (1, 0),
        8 => (0, 2),
        10 => (1, 1),
        14 => (1, 2),
        _ => unreachable!("decompose_weight yields s in the fixed set"),
    };
    let interior = d.n.checked_sub(nu_inf).ok_or_else(|| {
        Error::InvalidArgument(format!("nu_inf = {nu_inf} exceeds weight budget {}", d.n))
    })?;
    Ok(ValenceBudget { weight, nu_inf, nu_i_min, nu_rho_min, interior })
}
