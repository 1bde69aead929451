//! Real-valued restrictions of the studied forms to the arc
//! `{e^{iθ} : π/2 <= θ <= 2π/3}` and their main-term/remainder split.
//!
//! With `M_k(θ) = 2cos(kθ/2)` and `N_k(θ) = (2cos(θ/2))^{-k}`:
//!
//! - `F_k(θ) = e^{ikθ/2} E_k(e^{iθ}) = M_k + N_k + R_k`
//! - `F_{n,k} = F_kⁿ + F_{nk}`, main term `(M_k + N_k)ⁿ + M_{nk} + N_{nk}`
//! - `G_{k,l} = F_k F_l ± F_{k+l}`, main term `(M_k+N_k)(M_l+N_l) ± (M_{k+l}+N_{k+l})`

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::eisenstein::{self, UpperHalfPoint, Weight};
use crate::error::{Error, Result};
use crate::MAX_WEIGHT;

pub const ARC_LO: f64 = PI / 2.0;
pub const ARC_HI: f64 = 2.0 * PI / 3.0;

/// Slack for angles computed as `2mπ/w` that land a rounding step outside.
const ANGLE_SLACK: f64 = 1e-12;

/// Threshold on the imaginary part of an arc value relative to `max(1, |re|)`.
pub const IMAG_LEAK_TOL: f64 = 1e-8;

/// An angle `θ ∈ [π/2, 2π/3]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct ArcAngle(f64);

impl ArcAngle {
    pub fn new(theta: f64) -> Result<Self> {
        if !(theta >= ARC_LO - ANGLE_SLACK && theta <= ARC_HI + ANGLE_SLACK) {
            return Err(Error::AngleOutOfRange(theta));
        }
        Ok(ArcAngle(theta.clamp(ARC_LO, ARC_HI)))
    }

    pub fn get(self) -> f64 {
        self.0
    }

    pub fn point(self) -> UpperHalfPoint {
        UpperHalfPoint::on_unit_circle(self.0).expect("arc lies in the upper half plane")
    }
}

impl TryFrom<f64> for ArcAngle {
    type Error = Error;
    fn try_from(t: f64) -> Result<Self> {
        ArcAngle::new(t)
    }
}

impl From<ArcAngle> for f64 {
    fn from(a: ArcAngle) -> f64 {
        a.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn factor(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        }
    }
}

/// Value of an arc restriction. The function is real on the arc; the
/// imaginary part that survives evaluation is reported as `imag_leak`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArcValue {
    pub real_part: f64,
    pub imag_leak: f64,
    pub abs_error_bound: f64,
}

impl ArcValue {
    fn from_complex(z: Complex64, abs_error_bound: f64) -> Self {
        ArcValue { real_part: z.re, imag_leak: z.im.abs(), abs_error_bound }
    }

    pub fn leak_ok(&self) -> bool {
        self.imag_leak <= IMAG_LEAK_TOL * self.real_part.abs().max(1.0)
    }
}

/// Which combined form is under study.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FormSpec {
    /// `E_k`
    Single { k: u32 },
    /// `E_kⁿ + E_{nk}`
    PowerSum { n: u32, k: u32 },
    /// `E_k E_l ± E_{k+l}`
    ProductSum { k: u32, l: u32, sign: Sign },
}

fn check_even(k: u32, min: u32, what: &str) -> Result<()> {
    if k % 2 != 0 || k < min {
        return Err(Error::InvalidForm(format!("{what} = {k} must be even and >= {min}")));
    }
    Ok(())
}

impl FormSpec {
    pub fn single(k: u32) -> Result<Self> {
        let f = FormSpec::Single { k };
        f.check_hypotheses()?;
        Ok(f)
    }

    /// `E_kⁿ + E_{nk}` within the theorem range: `n = 2, k >= 10` or
    /// `n = 3, k >= 16`.
    pub fn power_sum(n: u32, k: u32) -> Result<Self> {
        let f = FormSpec::PowerSum { n, k };
        f.check_hypotheses()?;
        Ok(f)
    }

    /// `E_kⁿ + E_{nk}` for any `2 <= n <= 6`, even `k >= 4`; no theorem
    /// hypothesis is imposed.
    pub fn power_sum_exploratory(n: u32, k: u32) -> Result<Self> {
        let f = FormSpec::PowerSum { n, k };
        f.validate()?;
        Ok(f)
    }

    pub fn product_sum(k: u32, l: u32, sign: Sign) -> Result<Self> {
        let f = FormSpec::ProductSum { k, l, sign };
        f.check_hypotheses()?;
        Ok(f)
    }

    /// Structural validity: even weights, supported `n`, weight envelope.
    pub fn validate(&self) -> Result<()> {
        match *self {
            FormSpec::Single { k } => check_even(k, 4, "k")?,
            FormSpec::PowerSum { n, k } => {
                if !(2..=6).contains(&n) {
                    return Err(Error::InvalidForm(format!("n = {n} must lie in 2..=6")));
                }
                check_even(k, 4, "k")?;
            }
            FormSpec::ProductSum { k, l, .. } => {
                check_even(k, 4, "k")?;
                check_even(l, 4, "l")?;
                if k <= l {
                    return Err(Error::InvalidForm(format!("need k > l, got k = {k}, l = {l}")));
                }
            }
        }
        let w = self.weight();
        if w > MAX_WEIGHT {
            return Err(Error::WeightTooLarge(w));
        }
        Ok(())
    }

    /// The theorem hypotheses on top of [`validate`](Self::validate).
    pub fn check_hypotheses(&self) -> Result<()> {
        self.validate()?;
        match *self {
            FormSpec::Single { .. } => Ok(()),
            FormSpec::PowerSum { n: 2, k } if k >= 10 => Ok(()),
            FormSpec::PowerSum { n: 3, k } if k >= 16 => Ok(()),
            FormSpec::PowerSum { n, k } => Err(Error::Hypothesis(format!(
                "power sum needs (n = 2, k >= 10) or (n = 3, k >= 16), got n = {n}, k = {k}"
            ))),
            FormSpec::ProductSum { l, .. } if l >= 10 => Ok(()),
            FormSpec::ProductSum { k, l, .. } => Err(Error::Hypothesis(format!(
                "product sum needs k > l >= 10, got k = {k}, l = {l}"
            ))),
        }
    }

    pub fn weight(&self) -> u32 {
        match *self {
            FormSpec::Single { k } => k,
            FormSpec::PowerSum { n, k } => n * k,
            FormSpec::ProductSum { k, l, .. } => k + l,
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            FormSpec::Single { .. } => "single",
            FormSpec::PowerSum { .. } => "power_sum",
            FormSpec::ProductSum { .. } => "product_sum",
        }
    }

    /// Constant term of the q-expansion: 1 for `E_k`, 2 for the plus sums,
    /// 0 for the cusp form `E_k E_l - E_{k+l}`.
    pub fn constant_term(&self) -> u32 {
        match self {
            FormSpec::Single { .. } => 1,
            FormSpec::PowerSum { .. } => 2,
            FormSpec::ProductSum { sign: Sign::Plus, .. } => 2,
            FormSpec::ProductSum { sign: Sign::Minus, .. } => 0,
        }
    }

    /// Complex value of `e^{iwθ/2} f(e^{iθ})` with a propagated error bound.
    pub fn eval_complex(&self, theta: ArcAngle) -> Result<(Complex64, f64)> {
        self.validate()?;
        let t = theta.get();
        match *self {
            FormSpec::Single { k } => arc_eisenstein(k, t),
            FormSpec::PowerSum { n, k } => {
                let (fk, ek) = arc_eisenstein(k, t)?;
                let (fnk, enk) = arc_eisenstein(n * k, t)?;
                let pow = fk.powi(n as i32);
                let err = n as f64 * fk.norm().powi(n as i32 - 1) * ek + enk;
                Ok((pow + fnk, err))
            }
            FormSpec::ProductSum { k, l, sign } => {
                let (fk, ek) = arc_eisenstein(k, t)?;
                let (fl, el) = arc_eisenstein(l, t)?;
                let (fkl, ekl) = arc_eisenstein(k + l, t)?;
                let err = fk.norm() * el + fl.norm() * ek + ekl;
                Ok((fk * fl + fkl * sign.factor(), err))
            }
        }
    }

    pub fn eval(&self, theta: ArcAngle) -> Result<ArcValue> {
        let (z, err) = self.eval_complex(theta)?;
        Ok(ArcValue::from_complex(z, err))
    }

    /// The closed-form main term.
    pub fn main_term(&self, theta: ArcAngle) -> f64 {
        let t = theta.get();
        match *self {
            FormSpec::Single { k } => {
                let (m, n) = main_terms_raw(k, t);
                m + n
            }
            FormSpec::PowerSum { n, k } => main_term_power_raw(n, k, t),
            FormSpec::ProductSum { k, l, sign } => main_term_product_raw(k, l, t, sign),
        }
    }

    /// Upper bound for `|f - main_term|` on the arc.
    pub fn remainder_bound(&self) -> f64 {
        match *self {
            FormSpec::Single { k } => remainder_bound_single(k),
            FormSpec::PowerSum { n, k } => remainder_bound_power(n, k),
            FormSpec::ProductSum { k, l, .. } => remainder_bound_product(k, l),
        }
    }
}

impl std::fmt::Display for FormSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match *self {
            FormSpec::Single { k } => write!(f, "E_{k}"),
            FormSpec::PowerSum { n, k } => write!(f, "E_{k}^{n} + E_{}", n * k),
            FormSpec::ProductSum { k, l, sign } => {
                write!(f, "E_{k} E_{l} {} E_{}", sign.symbol(), k + l)
            }
        }
    }
}

/// `e^{ikθ/2} E_k(e^{iθ})` and its error bound.
fn arc_eisenstein(k: u32, theta: f64) -> Result<(Complex64, f64)> {
    let weight = Weight::new(k)?;
    let tau = UpperHalfPoint::on_unit_circle(theta)?;
    let e = eisenstein::eval(weight, tau)?;
    let phase = Complex64::from_polar(1.0, 0.5 * k as f64 * theta);
    // the phase angle kθ/2 is itself rounded
    let phase_err = f64::EPSILON * (0.5 * k as f64 * theta + 2.0) * e.value.norm();
    Ok((phase * e.value, e.abs_error_bound + phase_err))
}

/// `F_k(θ) = e^{ikθ/2} E_k(e^{iθ})`.
pub fn f_k(k: Weight, theta: ArcAngle) -> Result<ArcValue> {
    FormSpec::Single { k: k.get() }.eval(theta)
}

fn main_terms_raw(k: u32, theta: f64) -> (f64, f64) {
    let m = 2.0 * (0.5 * k as f64 * theta).cos();
    let n = (2.0 * (0.5 * theta).cos()).powi(-(k as i32));
    (m, n)
}

/// `(M_k(θ), N_k(θ)) = (2cos(kθ/2), (2cos(θ/2))^{-k})`.
pub fn main_terms(k: Weight, theta: ArcAngle) -> (f64, f64) {
    main_terms_raw(k.get(), theta.get())
}

/// `N_k(θ) = (2cos(θ/2))^{-k}` for any real exponent-carrying weight.
pub fn n_term(k: u32, theta: f64) -> f64 {
    (2.0 * (0.5 * theta).cos()).powi(-(k as i32))
}

/// `M_k(θ) = 2cos(kθ/2)`.
pub fn m_term(k: u32, theta: f64) -> f64 {
    2.0 * (0.5 * k as f64 * theta).cos()
}

/// `(1/2)^{k/2} + 4(2/5)^{k/2} + 20√2/(k-3) · (2/9)^{(k-3)/2}`, the bound on
/// the tail `R_k` of `F_k` after removing `M_k + N_k`.
pub fn remainder_bound_single(k: u32) -> f64 {
    let k = k as f64;
    0.5f64.powf(k / 2.0)
        + 4.0 * 0.4f64.powf(k / 2.0)
        + 20.0 * 2f64.sqrt() / (k - 3.0) * (2.0f64 / 9.0).powf((k - 3.0) / 2.0)
}

fn validated_power(n: u32, k: u32) -> Result<FormSpec> {
    if n != 2 && n != 3 {
        return Err(Error::InvalidForm(format!("n = {n} must be 2 or 3")));
    }
    FormSpec::power_sum(n, k)
}

/// `F_{n,k}(θ) = F_k(θ)ⁿ + F_{nk}(θ)` for the theorem range of `(n, k)`.
pub fn f_power(n: u32, k: Weight, theta: ArcAngle) -> Result<ArcValue> {
    validated_power(n, k.get())?.eval(theta)
}

fn main_term_power_raw(n: u32, k: u32, theta: f64) -> f64 {
    let (mk, nk) = main_terms_raw(k, theta);
    let (mnk, nnk) = main_terms_raw(n * k, theta);
    (mk + nk).powi(n as i32) + mnk + nnk
}

/// `(M_k + N_k)ⁿ + M_{nk} + N_{nk}`.
pub fn main_term_power(n: u32, k: Weight, theta: ArcAngle) -> f64 {
    main_term_power_raw(n, k.get(), theta.get())
}

fn binomial(n: u32, i: u32) -> f64 {
    (0..i).fold(1.0, |acc, j| acc * (n - j) as f64 / (j + 1) as f64)
}

/// `Σ_{i=1}^{n-1} C(n,i) 3^i B(k)^{n-i} + B(k)ⁿ + B(nk)` with `B` the single
/// remainder bound. The `i = n` term would be the pure main term and is not
/// part of the remainder.
pub fn remainder_bound_power(n: u32, k: u32) -> f64 {
    let b = remainder_bound_single(k);
    let mixed: f64 = (1..n)
        .map(|i| binomial(n, i) * 3f64.powi(i as i32) * b.powi((n - i) as i32))
        .sum();
    mixed + b.powi(n as i32) + remainder_bound_single(n * k)
}

fn validated_product(k: u32, l: u32, sign: Sign) -> Result<FormSpec> {
    FormSpec::product_sum(k, l, sign)
}

/// `G_{k,l}(θ) = F_k F_l ± F_{k+l}`.
pub fn g_product(k: Weight, l: Weight, theta: ArcAngle, sign: Sign) -> Result<ArcValue> {
    validated_product(k.get(), l.get(), sign)?.eval(theta)
}

fn main_term_product_raw(k: u32, l: u32, theta: f64, sign: Sign) -> f64 {
    let (mk, nk) = main_terms_raw(k, theta);
    let (ml, nl) = main_terms_raw(l, theta);
    let (mkl, nkl) = main_terms_raw(k + l, theta);
    (mk + nk) * (ml + nl) + sign.factor() * (mkl + nkl)
}

/// `(M_k + N_k)(M_l + N_l) + M_{k+l} + N_{k+l}`.
pub fn main_term_product(k: Weight, l: Weight, theta: ArcAngle) -> f64 {
    main_term_product_raw(k.get(), l.get(), theta.get(), Sign::Plus)
}

/// The split `(-1)^m M_{k,l}(θ_m) = P + Q` at `θ_m = 2mπ/(k+l)`, with
/// `P = 2 + 2(-1)^m N_{k+l}` and `Q = M_l² + M_l (N_l + (-1)^m N_k)`.
pub fn pq_split(k: Weight, l: Weight, m: i64) -> Result<(f64, f64)> {
    let w = k.get() + l.get();
    let wi = w as i64;
    if 4 * m < wi || 3 * m > wi {
        return Err(Error::SampleIndexOutOfRange { m, weight: w });
    }
    let theta = 2.0 * m as f64 * PI / w as f64;
    let parity = if m % 2 == 0 { 1.0 } else { -1.0 };
    let (ml, nl) = main_terms_raw(l.get(), theta);
    let nk = n_term(k.get(), theta);
    let p = 2.0 + 2.0 * parity * n_term(w, theta);
    let q = ml * ml + ml * (nl + parity * nk);
    Ok((p, q))
}

/// `3B(l) + 3B(k) + B(k)B(l) + B(k+l)`.
pub fn remainder_bound_product(k: u32, l: u32) -> f64 {
    let bk = remainder_bound_single(k);
    let bl = remainder_bound_single(l);
    3.0 * bl + 3.0 * bk + bk * bl + remainder_bound_single(k + l)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(k: u32) -> Weight {
        Weight::new(k).unwrap()
    }

    fn a(t: f64) -> ArcAngle {
        ArcAngle::new(t).unwrap()
    }

    #[test]
    fn angle_range() {
        assert!(ArcAngle::new(1.0).is_err());
        assert!(ArcAngle::new(2.2).is_err());
        assert_eq!(ArcAngle::new(ARC_HI + 1e-14).unwrap().get(), ARC_HI);
    }

    #[test]
    fn forced_zeros_of_single_forms() {
        assert!(f_k(w(4), a(ARC_HI)).unwrap().real_part.abs() < 1e-8);
        assert!(f_k(w(6), a(ARC_LO)).unwrap().real_part.abs() < 1e-8);
    }

    #[test]
    fn f12_at_i() {
        let v = f_k(w(12), a(ARC_LO)).unwrap();
        assert!(v.real_part < 0.0);
        let (m, n) = main_terms(w(12), a(ARC_LO));
        assert!((m + 2.0).abs() < 1e-15);
        assert!((n - 0.015625).abs() < 1e-15);
        assert!((v.real_part - m).abs() <= 1.0 + 0.0357);
    }

    #[test]
    fn main_terms_at_rho() {
        for k in [4u32, 10, 38, 100] {
            let (_, n) = main_terms(w(k), a(ARC_HI));
            assert!((n - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn single_bound_values() {
        assert!((remainder_bound_single(12) - 0.03563).abs() < 5e-5);
        assert!((remainder_bound_single(10) - 0.09312).abs() < 5e-5);
        assert!(remainder_bound_single(100) < 1e-15);
        for k in (10..200).step_by(2) {
            assert!(remainder_bound_single(k + 2) < remainder_bound_single(k));
        }
    }

    #[test]
    fn power_identity_and_bounds() {
        let t = a(ARC_LO);
        let f = f_power(2, w(10), t).unwrap().real_part;
        let a10 = f_k(w(10), t).unwrap().real_part;
        let a20 = f_k(w(20), t).unwrap().real_part;
        assert!((f - (a10 * a10 + a20)).abs() < 1e-10);

        assert!((main_term_power(2, w(12), a(ARC_HI)) - 12.0).abs() < 1e-11);
        let expected = (2.0 * (4.0 * PI).cos() + 2f64.powi(-8)).powi(3)
            + 2.0 * (12.0 * PI).cos()
            + 2f64.powi(-24);
        assert!((main_term_power(3, w(16), t) - expected).abs() < 1e-12);

        assert!((remainder_bound_power(2, 10) - 0.56875).abs() < 1e-3);
        assert!((remainder_bound_power(3, 16) - 0.17999).abs() < 1e-3);
        assert!(remainder_bound_power(2, 40) < 0.01);
    }

    #[test]
    fn power_rejects_outside_theorem() {
        assert!(f_power(2, w(8), a(1.8)).is_err());
        assert!(f_power(3, w(14), a(1.8)).is_err());
        assert!(f_power(4, w(20), a(1.8)).is_err());
    }

    #[test]
    fn power_n3_matches_direct_evaluation() {
        let t = a(ARC_HI);
        let f = f_power(3, w(16), t).unwrap().real_part;
        let rho = t.point();
        let e16 = eisenstein::eval(w(16), rho).unwrap().value;
        let e48 = eisenstein::eval(w(48), rho).unwrap().value;
        let direct = Complex64::from_polar(1.0, 24.0 * ARC_HI) * (e16.powi(3) + e48);
        assert!((f - direct.re).abs() < 1e-9);
        assert!(direct.im.abs() < 1e-9);
    }

    #[test]
    fn product_identities() {
        let t = a(ARC_LO);
        let g = g_product(w(12), w(10), t, Sign::Plus).unwrap().real_part;
        let f12 = f_k(w(12), t).unwrap().real_part;
        let f10 = f_k(w(10), t).unwrap().real_part;
        let f22 = f_k(w(22), t).unwrap().real_part;
        assert!((g - (f12 * f10 + f22)).abs() < 1e-10);

        let t = a(0.6 * PI);
        let plus = g_product(w(12), w(10), t, Sign::Plus).unwrap().real_part;
        let minus = g_product(w(12), w(10), t, Sign::Minus).unwrap().real_part;
        let f22 = f_k(w(22), t).unwrap().real_part;
        assert!((plus - 2.0 * f22 - minus).abs() < 1e-10);
    }

    #[test]
    fn pq_reconstruction() {
        for (k, l) in [(14u32, 10u32), (12, 10), (30, 18), (50, 48)] {
            let wt = (k + l) as i64;
            for m in (wt + 3) / 4..=wt / 3 {
                let (p, q) = pq_split(w(k), w(l), m).unwrap();
                let theta = 2.0 * m as f64 * PI / wt as f64;
                let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                let mkl = main_term_product(w(k), w(l), a(theta));
                assert!((sign * mkl - (p + q)).abs() < 1e-12, "({k},{l}) m={m}");
                let mk = m_term(k, theta);
                let ml = m_term(l, theta);
                assert!((mk - sign * ml).abs() < 1e-12);
                if m % 2 == 0 {
                    assert!(p > 2.0);
                }
            }
        }
        assert!(pq_split(w(12), w(10), 5).is_err());
        assert!(pq_split(w(12), w(10), 8).is_err());
    }

    #[test]
    fn product_bound_values() {
        assert!((remainder_bound_product(12, 10) - 0.39018).abs() < 1e-3);
        // 3B(38) + 3B(40) + B(40)B(38) + B(78), dominated by 3·(1/2)^19
        assert!((remainder_bound_product(40, 38) - 9.044878e-6).abs() < 1e-11);
        assert!(remainder_bound_product(14, 10) < remainder_bound_product(12, 10));
    }

    #[test]
    fn form_validation() {
        assert!(FormSpec::single(2).is_err());
        assert!(FormSpec::power_sum(2, 10).is_ok());
        assert!(FormSpec::power_sum(3, 14).is_err());
        assert!(FormSpec::power_sum_exploratory(4, 10).is_ok());
        assert!(FormSpec::power_sum_exploratory(7, 10).is_err());
        assert!(FormSpec::product_sum(10, 12, Sign::Plus).is_err());
        assert!(FormSpec::product_sum(12, 8, Sign::Plus).is_err());
        assert!(FormSpec::single(402).is_err());
        assert_eq!(FormSpec::product_sum(12, 10, Sign::Plus).unwrap().weight(), 22);
        assert_eq!(FormSpec::power_sum(3, 16).unwrap().weight(), 48);
    }

    #[test]
    fn form_spec_json_shape() {
        let f = FormSpec::product_sum(16, 14, Sign::Minus).unwrap();
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(s, r#"{"kind":"product_sum","k":16,"l":14,"sign":"minus"}"#);
        let back: FormSpec = serde_json::from_str(&s).unwrap();
        assert_eq!(back, f);
    }
}
