//! Weight decompositions, the sample angles `θ_m = 2mπ/w` and the counting
//! arithmetic of the intermediate-value argument.
//!
//! All range membership is decided in integers: `θ_m ∈ [π/2, 2π/3]` iff
//! `4m >= w` and `3m <= w`.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::arc::{m_term, ArcAngle, FormSpec, ARC_HI, ARC_LO};
use crate::error::{Error, Result};

pub const S_VALUES: [u32; 6] = [0, 4, 6, 8, 10, 14];

/// `weight = 12n + s` with `s ∈ {0, 4, 6, 8, 10, 14}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightDecomposition {
    pub weight: u32,
    pub n: u32,
    pub s: u32,
}

pub fn decompose_weight(weight: u32) -> Result<WeightDecomposition> {
    if weight < 4 || weight % 2 != 0 {
        return Err(Error::InvalidWeight(weight as i64));
    }
    let s = match weight % 12 {
        2 => 14,
        r => r,
    };
    Ok(WeightDecomposition { weight, n: (weight - s) / 12, s })
}

/// `k = (12/n)·l_n + s_n` with `s_n ∈ {0, 2, …, 12/n - 2}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PowerDecomposition {
    pub k: u32,
    pub n: u32,
    pub l_n: u32,
    pub s_n: u32,
}

pub fn decompose_power(k: u32, n: u32) -> Result<PowerDecomposition> {
    if n != 2 && n != 3 {
        return Err(Error::InvalidArgument(format!("n = {n} must be 2 or 3")));
    }
    if k < 4 || k % 2 != 0 {
        return Err(Error::InvalidWeight(k as i64));
    }
    let q = 12 / n;
    Ok(PowerDecomposition { k, n, l_n: k / q, s_n: k % q })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(m: i64) -> Self {
        if m % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    /// `(-1)^m`
    pub fn sign(self) -> f64 {
        match self {
            Parity::Even => 1.0,
            Parity::Odd => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SamplePoint {
    pub m: i64,
    pub theta: ArcAngle,
    pub parity: Parity,
}

/// Inclusive integer range `[ceil(w/4), floor(w/3)]`.
pub fn sample_range(weight: u32) -> (i64, i64) {
    let w = weight as i64;
    ((w + 3) / 4, w / 3)
}

/// `2mπ/w`, snapped to the arc endpoints when `m` sits exactly on them.
pub fn sample_angle(m: i64, weight: u32) -> f64 {
    let w = weight as i64;
    if 4 * m == w {
        ARC_LO
    } else if 3 * m == w {
        ARC_HI
    } else {
        2.0 * m as f64 * PI / weight as f64
    }
}

pub fn sample_points_for_weight(weight: u32) -> Vec<SamplePoint> {
    let (lo, hi) = sample_range(weight);
    (lo..=hi)
        .map(|m| SamplePoint {
            m,
            theta: ArcAngle::new(sample_angle(m, weight)).expect("m in range"),
            parity: Parity::of(m),
        })
        .collect()
}

/// All `m` with `2mπ/w ∈ [π/2, 2π/3]`, ascending, `w` the weight of `form`.
pub fn sample_points(form: &FormSpec) -> Vec<SamplePoint> {
    sample_points_for_weight(form.weight())
}

/// `n + 1` (single and product forms, `w = 12n + s`) or `l_n + 1` (power
/// sums).
pub fn expected_count(form: &FormSpec) -> usize {
    match *form {
        FormSpec::PowerSum { n, k } if n == 2 || n == 3 => {
            decompose_power(k, n).map(|d| d.l_n as usize + 1).unwrap_or(0)
        }
        _ => decompose_weight(form.weight()).map(|d| d.n as usize + 1).unwrap_or(0),
    }
}

/// Residue of an even integer mod 6 folded into `{-2, 0, 2}`.
fn residue_pm(x: u32) -> i64 {
    match x % 6 {
        0 => 0,
        2 => 2,
        _ => -2,
    }
}

/// Largest odd `m` in the sample range of `E_kⁿ + E_{nk}`.
///
/// For `n = 2` this is `2k/3 - (3 - r)/3` with `k ≡ r (mod 6)`; for `n = 3`
/// the range is `[3k/4, k]` and the answer is `k - 1`.
pub fn m_odd_power(k: u32, n: u32) -> Result<i64> {
    if k < 4 || k % 2 != 0 {
        return Err(Error::InvalidWeight(k as i64));
    }
    match n {
        2 => Ok((2 * k as i64 - (3 - residue_pm(k))) / 3),
        3 => Ok(k as i64 - 1),
        _ => Err(Error::InvalidArgument(format!("n = {n} must be 2 or 3"))),
    }
}

/// Largest odd `m` in `[(k+l)/4, (k+l)/3]`: `(k+l)/3 - (3 + r)/3` with
/// `k + l ≡ r (mod 6)`.
pub fn m_odd_product(weight: u32) -> Result<i64> {
    if weight < 4 || weight % 2 != 0 {
        return Err(Error::InvalidWeight(weight as i64));
    }
    Ok((weight as i64 - (3 + residue_pm(weight))) / 3)
}

/// Enumeration oracle for the largest odd integer in the sample range.
pub fn largest_odd_by_enumeration(weight: u32) -> Option<i64> {
    let (lo, hi) = sample_range(weight);
    (lo..=hi).rev().find(|m| m % 2 != 0)
}

/// Residue class of `l` mod 6 for the `θ*` casework.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ResidueCase {
    Zero,
    Two,
    Four,
}

impl ResidueCase {
    pub fn of(l: u32) -> Option<Self> {
        match l % 6 {
            0 => Some(ResidueCase::Zero),
            2 => Some(ResidueCase::Two),
            4 => Some(ResidueCase::Four),
            _ => None,
        }
    }

    fn value(self) -> u32 {
        match self {
            ResidueCase::Zero => 0,
            ResidueCase::Two => 2,
            ResidueCase::Four => 4,
        }
    }
}

/// Upper end of the angle interval considered in each residue case:
/// `2π/3`, `2π/3 - π/(3l)` and `2π/3 - 2π/(3l)`.
pub fn theta_star_interval_end(l: u32, case: ResidueCase) -> f64 {
    let l = l as f64;
    match case {
        ResidueCase::Zero => ARC_HI,
        ResidueCase::Two => ARC_HI - PI / (3.0 * l),
        ResidueCase::Four => ARC_HI - 2.0 * PI / (3.0 * l),
    }
}

/// Closed form `θ*`: `2π/3 - π/l` (`l ≡ 0`), `2π/3 - 7π/(3l)` (`l ≡ 2`), and
/// for `l ≡ 4` the split point `2π/3 - 2π/(3l)`.
pub fn theta_star(l: u32, case: ResidueCase) -> Result<ArcAngle> {
    if l < 10 || l % 2 != 0 {
        return Err(Error::InvalidWeight(l as i64));
    }
    if ResidueCase::of(l) != Some(case) {
        return Err(Error::ResidueMismatch { l, expected: case.value() });
    }
    let lf = l as f64;
    let t = match case {
        ResidueCase::Zero => ARC_HI - PI / lf,
        ResidueCase::Two => ARC_HI - 7.0 * PI / (3.0 * lf),
        ResidueCase::Four => theta_star_interval_end(l, case),
    };
    ArcAngle::new(t)
}

/// Grid oracle for `θ*`: the supremum of `{θ ∈ [π/2, end] : M_l(θ) < 0}`, or
/// `π/2` when that set is empty. Strict negativity matters: in the `l ≡ 2`
/// case the interval end is itself a zero of `M_l`.
pub fn theta_star_by_grid(l: u32, case: ResidueCase, points: usize) -> f64 {
    let end = theta_star_interval_end(l, case);
    let h = (end - ARC_LO) / points as f64;
    let floor = 1e-9;
    let last = (0..=points).rev().find(|&j| m_term(l, ARC_LO + j as f64 * h) < -floor);
    let Some(j) = last else { return ARC_LO };
    if j == points {
        return end;
    }
    // the sign region ends inside (θ_j, θ_{j+1}]; bisect for the crossing
    let (mut a, mut b) = (ARC_LO + j as f64 * h, ARC_LO + (j + 1) as f64 * h);
    for _ in 0..80 {
        let mid = 0.5 * (a + b);
        if m_term(l, mid) < 0.0 {
            a = mid;
        } else {
            b = mid;
        }
    }
    0.5 * (a + b)
}
