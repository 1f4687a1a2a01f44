//! Extended-precision reference arithmetic for the test suites.
//!
//! Everything here exists to check the shipped `f64` code against an
//! independent evaluation path: couplings from the explicit
//! factorial/Laguerre series, populations from term-by-term summation, all
//! carried out in fixed-point decimal arithmetic with 70 significant digits.
//! None of this crate is reachable from the library itself.

use std::cmp::Ordering;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Roots;

/// Working precision: values are stored as `mantissa / 10^SCALE_DIGITS`.
pub const SCALE_DIGITS: u32 = 70;

fn scale_factor() -> BigInt {
    BigInt::from(10u32).pow(SCALE_DIGITS)
}

/// Fixed-point decimal with 70 fractional digits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BigFix(BigInt);

impl BigFix {
    pub fn zero() -> Self {
        BigFix(BigInt::from(0))
    }

    pub fn from_int<T: Into<BigInt>>(v: T) -> Self {
        BigFix(v.into() * scale_factor())
    }

    /// Exact rational `numer / denom`, rounded (truncated) to working precision.
    pub fn from_ratio(numer: BigInt, denom: BigInt) -> Self {
        assert!(denom != BigInt::from(0), "zero denominator");
        BigFix(numer * scale_factor() / denom)
    }

    /// Parses decimal strings such as `"0.069"`, `"-3.5"`, `"1e-12"`, `"2.5e3"`.
    pub fn parse(s: &str) -> Self {
        let (mantissa, exp) = match s.split_once(['e', 'E']) {
            Some((m, e)) => (m, e.parse::<i64>().expect("exponent")),
            None => (s, 0),
        };
        let (sign, body) = match mantissa.strip_prefix('-') {
            Some(b) => (-1, b),
            None => (1, mantissa.strip_prefix('+').unwrap_or(mantissa)),
        };
        let (int_part, frac_part) = match body.split_once('.') {
            Some((i, f)) => (i, f),
            None => (body, ""),
        };
        let digits: BigInt = format!("{int_part}{frac_part}")
            .parse()
            .expect("decimal digits");
        let ten = BigInt::from(10u32);
        let shift = exp - frac_part.len() as i64;
        let value = if shift >= 0 {
            BigFix(digits * ten.pow(shift as u32) * scale_factor())
        } else {
            BigFix::from_ratio(digits, ten.pow((-shift) as u32))
        };
        if sign < 0 {
            -&value
        } else {
            value
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0 == BigInt::from(0)
    }

    pub fn abs(&self) -> Self {
        if self.0 < BigInt::from(0) {
            -self
        } else {
            self.clone()
        }
    }

    pub fn cmp_abs(&self, other: &Self) -> Ordering {
        self.abs().0.cmp(&other.abs().0)
    }

    /// Floor square root; requires a non-negative value.
    pub fn sqrt(&self) -> Self {
        assert!(self.0 >= BigInt::from(0), "sqrt of negative");
        BigFix((self.0.clone() * scale_factor()).sqrt())
    }

    pub fn div_int(&self, d: i64) -> Self {
        BigFix(self.0.clone() / BigInt::from(d))
    }

    /// Conversion through a 25-digit scientific literal; exact to well below
    /// one `f64` ulp.
    pub fn to_f64(&self) -> f64 {
        let s = self.0.to_string();
        let (sign, digits) = match s.strip_prefix('-') {
            Some(d) => ("-", d),
            None => ("", s.as_str()),
        };
        if digits == "0" {
            return 0.0;
        }
        let exp = digits.len() as i64 - 1 - SCALE_DIGITS as i64;
        let take = digits.len().min(25);
        let lead = &digits[..1];
        let rest = &digits[1..take];
        let literal = if rest.is_empty() {
            format!("{sign}{lead}e{exp}")
        } else {
            format!("{sign}{lead}.{rest}e{exp}")
        };
        literal.parse().expect("scientific literal")
    }

    /// `e^(-x)` by Taylor series; intended for `0 <= x < 1`.
    pub fn exp_neg(x: &BigFix) -> Self {
        assert!(x.0 >= BigInt::from(0));
        let mut term = BigFix::from_int(1);
        let mut sum = term.clone();
        let mut k: i64 = 0;
        while !term.is_zero() {
            k += 1;
            term = (-&(&term * x)).div_int(k);
            sum = &sum + &term;
        }
        sum
    }

    /// Taylor-series sine; accurate for |x| up to a few turns.
    pub fn sin(&self) -> Self {
        let x2 = self * self;
        let mut term = self.clone();
        let mut sum = term.clone();
        let mut k: i64 = 0;
        while !term.is_zero() {
            term = (-&(&term * &x2)).div_int((2 * k + 2) * (2 * k + 3));
            sum = &sum + &term;
            k += 1;
        }
        sum
    }

    pub fn pi() -> Self {
        BigFix::parse(
            "3.1415926535897932384626433832795028841971693993751058209749445923078164",
        )
    }
}

impl Add for &BigFix {
    type Output = BigFix;
    fn add(self, rhs: &BigFix) -> BigFix {
        BigFix(&self.0 + &rhs.0)
    }
}

impl Sub for &BigFix {
    type Output = BigFix;
    fn sub(self, rhs: &BigFix) -> BigFix {
        BigFix(&self.0 - &rhs.0)
    }
}

impl Mul for &BigFix {
    type Output = BigFix;
    fn mul(self, rhs: &BigFix) -> BigFix {
        BigFix(&self.0 * &rhs.0 / scale_factor())
    }
}

impl Div for &BigFix {
    type Output = BigFix;
    fn div(self, rhs: &BigFix) -> BigFix {
        assert!(!rhs.is_zero(), "division by zero");
        BigFix(&self.0 * scale_factor() / &rhs.0)
    }
}

impl Neg for &BigFix {
    type Output = BigFix;
    fn neg(self) -> BigFix {
        BigFix(-&self.0)
    }
}

fn big_factorial_ratio(hi: u64, lo: u64) -> BigInt {
    // hi! / lo! for hi >= lo
    let mut acc = BigInt::from(1u32);
    for i in (lo + 1)..=hi {
        acc *= BigInt::from(i);
    }
    acc
}

fn parse_decimal_fraction(s: &str) -> (BigInt, u32) {
    // "0.069" -> (69, 3): value = p / 10^k
    let (int_part, frac_part) = match s.split_once('.') {
        Some((i, f)) => (i, f),
        None => (s, ""),
    };
    let digits: BigInt = format!("{int_part}{frac_part}").parse().expect("digits");
    (digits, frac_part.len() as u32)
}

/// Coupling coefficient from the explicit series
/// `e^(-eta^2/2) * eta^q * sqrt(n!/(n+q)!) * L_n^q(eta^2)`,
/// with the generalized Laguerre polynomial expanded term by term in exact
/// integer arithmetic. `eta` must be a plain decimal string so that the
/// series is exact; only the final exponential, square root, and division
/// round, each at 70 digits.
pub fn coupling_series(n: u64, q: u64, eta: &str) -> BigFix {
    let (p, k) = parse_decimal_fraction(eta);
    let ten = BigInt::from(10u32);
    let p2 = &p * &p; // numerator of eta^2 over 10^(2k)
    let x_den_step = ten.pow(2 * k);

    // L_n^q(x) * 10^(2kn) * n! = sum_j (-1)^j C(n+q, n-j) (n!/j!) p2^j 10^(2k(n-j))
    let mut term = big_factorial_ratio(n + q, q) * ten.pow(2 * k * n as u32);
    let mut sum = term.clone();
    let mut negative = false;
    for j in 0..n {
        // t_{j+1} = t_j * (n-j) * p^2 / ((j+1)(q+j+1) * 10^(2k)); exact division
        term = term * BigInt::from(n - j) * &p2
            / (BigInt::from(j + 1) * BigInt::from(q + j + 1) * &x_den_step);
        negative = !negative;
        if negative {
            sum -= &term;
        } else {
            sum += &term;
        }
    }
    let laguerre_scaled = BigFix::from_ratio(
        sum,
        ten.pow(2 * k * n as u32) * big_factorial_ratio(n, 0),
    );

    let half_x = BigFix::from_ratio(p2.clone(), BigInt::from(2u32) * ten.pow(2 * k));
    let prefactor = BigFix::exp_neg(&half_x);
    let eta_pow = BigFix::from_ratio(p.pow(q as u32), ten.pow(k * q as u32));
    let inv_rising = BigFix::from_ratio(BigInt::from(1u32), big_factorial_ratio(n + q, n));
    let root = inv_rising.sqrt();

    &(&(&prefactor * &eta_pow) * &root) * &laguerre_scaled
}

/// The same scaled coupling coefficients by the bounded three-term
/// recurrence, carried in 70-digit arithmetic. Used where the series is
/// impractical (tables to n ~ 14000); its algebra is itself checked against
/// [`coupling_series`] for small n.
pub fn coupling_table_recurrence(eta: &str, q: u64, n_max: usize) -> Vec<BigFix> {
    let (p, k) = parse_decimal_fraction(eta);
    let ten = BigInt::from(10u32);
    let x = BigFix::from_ratio(&p * &p, ten.pow(2 * k));
    let half_x = x.div_int(2);

    let q_factorial = big_factorial_ratio(q, 0);
    let eta_pow = BigFix::from_ratio(p.pow(q as u32), ten.pow(k * q as u32));
    let c0 = &(&BigFix::exp_neg(&half_x) * &eta_pow)
        / &BigFix::from_int(q_factorial).sqrt();

    let mut values = Vec::with_capacity(n_max + 1);
    values.push(c0.clone());
    if n_max == 0 {
        return values;
    }
    let lag1 = &BigFix::from_int(1 + q as i64) - &x;
    let c1 = &(&c0 * &lag1) / &BigFix::from_int(q as i64 + 1).sqrt();
    values.push(c1);

    for n in 1..n_max {
        let nf = n as i64;
        let qf = q as i64;
        let a_poly = &BigFix::from_int(2 * nf + qf + 1) - &x;
        let a_root = BigFix::from_ratio(BigInt::from(nf + 1), BigInt::from(nf + qf + 1)).sqrt();
        let b_root = BigFix::from_ratio(
            BigInt::from(nf) * BigInt::from(nf + 1) * BigInt::from(nf + qf),
            BigInt::from(nf + qf + 1),
        )
        .sqrt();
        let next = (&(&(&a_poly * &a_root) * &values[n]) - &(&b_root * &values[n - 1]))
            .div_int(nf + 1);
        values.push(next);
    }
    values
}

/// Smallest `n_max` whose untruncated geometric tail is below `eps`,
/// decided in exact integer arithmetic:
/// `(nbar/(nbar+1))^(n_max+1) < eps`.
pub fn thermal_n_max(nbar: u64, eps: &str) -> usize {
    let (e_p, e_k) = {
        let f = BigFix::parse(eps);
        assert!(f.0 > BigInt::from(0), "eps must be positive");
        (f.0, SCALE_DIGITS)
    };
    let ten = BigInt::from(10u32);
    let r_num = BigInt::from(nbar);
    let r_den = BigInt::from(nbar + 1);
    let cond = |m_plus_1: u32| -> bool {
        // r^(m+1) < e_p / 10^e_k  <=>  r_num^(m+1) * 10^e_k < e_p * r_den^(m+1)
        r_num.pow(m_plus_1) * ten.pow(e_k) < &e_p * r_den.pow(m_plus_1)
    };
    let (mut lo, mut hi) = (1u32, 1u32);
    while !cond(hi) {
        lo = hi;
        hi *= 2;
        assert!(hi < 1 << 24, "eps too small for oracle");
    }
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if cond(mid) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    (lo - 1) as usize
}

/// Exact (to working precision) thermal weights `nbar^m / (nbar+1)^(m+1)`
/// for m = 0..=n_max, unnormalized.
pub fn thermal_weights(nbar: u64, n_max: usize) -> Vec<BigFix> {
    let r = BigFix::from_ratio(BigInt::from(nbar), BigInt::from(nbar + 1));
    let mut w = BigFix::from_ratio(BigInt::from(1u32), BigInt::from(nbar + 1));
    let mut out = Vec::with_capacity(n_max + 1);
    for _ in 0..=n_max {
        out.push(w.clone());
        w = &w * &r;
    }
    out
}

/// Term-by-term `sum_n w_n sin^2(c_n * omega_t) / sum_n w_n`.
pub fn sideband_population_hp(
    weights: &[BigFix],
    couplings: &[BigFix],
    omega_t: &BigFix,
) -> BigFix {
    assert!(couplings.len() >= weights.len());
    let mut num = BigFix::zero();
    let mut den = BigFix::zero();
    for (w, c) in weights.iter().zip(couplings) {
        let s = (c * omega_t).sin();
        num = &num + &(w * &(&s * &s));
        den = &den + w;
    }
    &num / &den
}

/// Relative error of an `f64` against a high-precision expected value.
pub fn rel_err(actual: f64, expected: &BigFix) -> f64 {
    let e = expected.to_f64();
    if e == 0.0 {
        actual.abs()
    } else {
        ((actual - e) / e).abs()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_to_f64_round_trip() {
        assert_eq!(BigFix::parse("0.5").to_f64(), 0.5);
        assert_eq!(BigFix::parse("-2.25").to_f64(), -2.25);
        assert_eq!(BigFix::parse("1e-12").to_f64(), 1e-12);
        assert_eq!(BigFix::parse("2.5e3").to_f64(), 2500.0);
    }

    #[test]
    fn sin_matches_known_values() {
        let pi = BigFix::pi();
        let x = pi.div_int(6);
        assert!((x.sin().to_f64() - 0.5).abs() < 1e-15);
        let y = pi.div_int(2);
        assert!((y.sin().to_f64() - 1.0).abs() < 1e-15);
        // a few turns out, the series still converges cleanly
        let z = &BigFix::from_int(4) * &pi;
        assert!(z.sin().to_f64().abs() < 1e-15);
    }

    #[test]
    fn exp_neg_matches_e() {
        let v = BigFix::exp_neg(&BigFix::from_int(1));
        assert!((v.to_f64() - (-1.0f64).exp()).abs() < 1e-16);
    }

    #[test]
    fn sqrt_two() {
        let v = BigFix::from_int(2).sqrt();
        assert!((v.to_f64() - std::f64::consts::SQRT_2).abs() < 1e-15);
    }

    // Cross-checked against an independent 70-digit evaluation (mpmath).
    #[test]
    fn series_reference_values() {
        let k010 = coupling_series(0, 1, "0.122");
        assert!((k010.to_f64() - 0.1210954460201254533994187_f64).abs() < 1e-16);

        let k200 = coupling_series(200, 15, "0.217");
        assert!(rel_err(1.107392319023244333869863e-5, &k200) < 1e-20);

        let k100 = coupling_series(100, 3, "0.069");
        assert!(rel_err(0.04987603548298433900538789, &k100) < 1e-15);

        let k300 = coupling_series(300, 15, "0.069");
        assert!(rel_err(1.23065376660795754124499e-11, &k300) < 1e-15);
    }

    #[test]
    fn recurrence_agrees_with_series() {
        let table = coupling_table_recurrence("0.217", 15, 250);
        for n in [0usize, 1, 2, 10, 100, 250] {
            let series = coupling_series(n as u64, 15, "0.217");
            let diff = (&table[n] - &series).abs();
            // both are 70-digit paths; agreement far below any f64 scale
            assert!(diff.cmp_abs(&BigFix::parse("1e-55")) == std::cmp::Ordering::Less);
        }
    }

    #[test]
    fn thermal_truncation_reference() {
        assert_eq!(thermal_n_max(5, "1e-12"), 151);
        assert_eq!(thermal_n_max(1500, "0.02"), 5869);
    }

    #[test]
    fn population_reference_value() {
        let n_max = thermal_n_max(5, "1e-12");
        let weights = thermal_weights(5, n_max);
        let couplings: Vec<BigFix> = (0..=n_max as u64)
            .map(|n| coupling_series(n, 1, "0.122"))
            .collect();
        let p = sideband_population_hp(&weights, &couplings, &BigFix::pi());
        assert!(rel_err(0.5070364761165657464177377, &p) < 1e-18);
    }
}
