//! Exact arithmetic in cyclotomic fields Q(ζ_m) = Q[x]/(Φ_m(x)).
//!
//! Values of different orders interoperate: both operands are embedded
//! into Q(ζ_l), l = lcm of the orders, through ζ_a ↦ ζ_l^{l/a}. Order 1 is
//! plain Q, so rationals are cyclotomic scalars of order 1.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::{Arc, Mutex};

use num_integer::Integer;
use once_cell::sync::Lazy;

use super::field::Field;
use super::rational::Rational;
use crate::error::Error;

static CYCLOTOMIC_CACHE: Lazy<Mutex<HashMap<u64, Arc<Vec<Rational>>>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

/// Coefficients of Φ_m, lowest degree first. The polynomial is monic.
pub fn cyclotomic_polynomial(m: u64) -> Arc<Vec<Rational>> {
    assert!(m >= 1, "cyclotomic order must be positive");
    if let Some(p) = CYCLOTOMIC_CACHE.lock().unwrap().get(&m) {
        return p.clone();
    }
    // Φ_m = (x^m − 1) / Π_{d | m, d < m} Φ_d
    let mut num = vec![Rational::zero(); m as usize + 1];
    num[0] = Rational::from_integer(-1);
    num[m as usize] = Rational::one();
    for d in 1..m {
        if m.is_multiple_of(d) {
            let phi_d = cyclotomic_polynomial(d);
            let (q, r) = poly_divrem(&num, &phi_d);
            debug_assert!(r.iter().all(Rational::is_zero));
            num = q;
        }
    }
    let phi = Arc::new(num);
    CYCLOTOMIC_CACHE.lock().unwrap().insert(m, phi.clone());
    phi
}

pub fn euler_phi(m: u64) -> usize {
    cyclotomic_polynomial(m).len() - 1
}

fn poly_trim(p: &mut Vec<Rational>) {
    while p.last().is_some_and(Rational::is_zero) {
        p.pop();
    }
}

/// Polynomial long division over Q (divisor nonzero).
fn poly_divrem(num: &[Rational], den: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let mut den = den.to_vec();
    poly_trim(&mut den);
    let mut rem = num.to_vec();
    poly_trim(&mut rem);
    let dd = den.len() - 1;
    if rem.len() < den.len() {
        return (Vec::new(), rem);
    }
    let lead_inv = den[dd].recip();
    let mut quot = vec![Rational::zero(); rem.len() - dd];
    for k in (0..quot.len()).rev() {
        let c = &rem[k + dd] * &lead_inv;
        if c.is_zero() {
            continue;
        }
        for (i, di) in den.iter().enumerate() {
            rem[k + i] = &rem[k + i] - &(&c * di);
        }
        quot[k] = c;
    }
    rem.truncate(dd);
    poly_trim(&mut rem);
    (quot, rem)
}

fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] = &out[i + j] + &(x * y);
            }
        }
    }
    out
}

fn poly_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let n = a.len().max(b.len());
    let zero = Rational::zero();
    let mut out: Vec<Rational> = (0..n)
        .map(|i| a.get(i).unwrap_or(&zero) - b.get(i).unwrap_or(&zero))
        .collect();
    poly_trim(&mut out);
    out
}

/// Element Σ c_k ζ_m^k, with `coeffs.len() == φ(m)`.
#[derive(Clone)]
pub struct CyclotomicScalar {
    order: u64,
    coeffs: Vec<Rational>,
}

impl CyclotomicScalar {
    /// Reduce an arbitrary polynomial in ζ_m modulo Φ_m.
    pub fn from_poly(order: u64, poly: Vec<Rational>) -> Self {
        let phi = cyclotomic_polynomial(order);
        let deg = phi.len() - 1;
        let (_, mut rem) = poly_divrem(&poly, &phi);
        rem.resize(deg, Rational::zero());
        CyclotomicScalar { order, coeffs: rem }
    }

    pub fn from_rational(r: Rational) -> Self {
        CyclotomicScalar { order: 1, coeffs: vec![r] }
    }

    /// ζ_m^j for any integer j.
    pub fn zeta(order: u64, exponent: i64) -> Self {
        assert!(order >= 1);
        let j = exponent.rem_euclid(order as i64) as usize;
        let mut poly = vec![Rational::zero(); j + 1];
        poly[j] = Rational::one();
        CyclotomicScalar::from_poly(order, poly)
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn coefficients(&self) -> &[Rational] {
        &self.coeffs
    }

    /// The rational value, if the element lies in Q.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.coeffs.iter().skip(1).all(Rational::is_zero) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    /// Image under Q(ζ_a) ↪ Q(ζ_target), `a` dividing `target`.
    fn embed(&self, target: u64) -> CyclotomicScalar {
        if target == self.order {
            return self.clone();
        }
        debug_assert!(target.is_multiple_of(self.order));
        let step = (target / self.order) as usize;
        let mut poly = vec![Rational::zero(); (self.coeffs.len().max(1) - 1) * step + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            poly[k * step] = c.clone();
        }
        CyclotomicScalar::from_poly(target, poly)
    }

    fn common(a: &Self, b: &Self) -> (CyclotomicScalar, CyclotomicScalar) {
        let l = a.order.lcm(&b.order);
        (a.embed(l), b.embed(l))
    }

    pub fn pow(&self, exp: i64) -> Self {
        let base = if exp < 0 { self.inv() } else { self.clone() };
        let mut e = exp.unsigned_abs();
        let mut acc = CyclotomicScalar::from_rational(Rational::one());
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * &sq;
            }
            e >>= 1;
            if e > 0 {
                sq = sq.clone() * &sq;
            }
        }
        acc
    }
}

impl PartialEq for CyclotomicScalar {
    fn eq(&self, other: &Self) -> bool {
        if self.order == other.order {
            return self.coeffs == other.coeffs;
        }
        let (a, b) = CyclotomicScalar::common(self, other);
        a.coeffs == b.coeffs
    }
}

impl Eq for CyclotomicScalar {}

impl<'a> Add<&'a CyclotomicScalar> for CyclotomicScalar {
    type Output = CyclotomicScalar;
    fn add(self, rhs: &'a CyclotomicScalar) -> CyclotomicScalar {
        let (a, b) = CyclotomicScalar::common(&self, rhs);
        let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect();
        CyclotomicScalar { order: a.order, coeffs }
    }
}

impl<'a> Sub<&'a CyclotomicScalar> for CyclotomicScalar {
    type Output = CyclotomicScalar;
    fn sub(self, rhs: &'a CyclotomicScalar) -> CyclotomicScalar {
        let (a, b) = CyclotomicScalar::common(&self, rhs);
        let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x - y).collect();
        CyclotomicScalar { order: a.order, coeffs }
    }
}

impl<'a> Mul<&'a CyclotomicScalar> for CyclotomicScalar {
    type Output = CyclotomicScalar;
    fn mul(self, rhs: &'a CyclotomicScalar) -> CyclotomicScalar {
        let (a, b) = CyclotomicScalar::common(&self, rhs);
        CyclotomicScalar::from_poly(a.order, poly_mul(&a.coeffs, &b.coeffs))
    }
}

impl Add for CyclotomicScalar {
    type Output = CyclotomicScalar;
    fn add(self, rhs: CyclotomicScalar) -> CyclotomicScalar {
        self + &rhs
    }
}

impl Sub for CyclotomicScalar {
    type Output = CyclotomicScalar;
    fn sub(self, rhs: CyclotomicScalar) -> CyclotomicScalar {
        self - &rhs
    }
}

impl Mul for CyclotomicScalar {
    type Output = CyclotomicScalar;
    fn mul(self, rhs: CyclotomicScalar) -> CyclotomicScalar {
        self * &rhs
    }
}

impl Neg for CyclotomicScalar {
    type Output = CyclotomicScalar;
    fn neg(self) -> CyclotomicScalar {
        CyclotomicScalar { order: self.order, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Field for CyclotomicScalar {
    fn zero() -> Self {
        CyclotomicScalar::from_rational(Rational::zero())
    }

    fn one() -> Self {
        CyclotomicScalar::from_rational(Rational::one())
    }

    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Rational::is_zero)
    }

    /// Extended Euclid against Φ_m.
    fn inv(&self) -> Self {
        assert!(!Field::is_zero(self), "inverse of zero");
        let phi = cyclotomic_polynomial(self.order);
        let mut a = self.coeffs.clone();
        poly_trim(&mut a);
        // invariant: r_i ≡ s_i · a (mod Φ)
        let (mut r0, mut r1) = (phi.to_vec(), a);
        let (mut s0, mut s1): (Vec<Rational>, Vec<Rational>) = (Vec::new(), vec![Rational::one()]);
        while r1.len() > 1 {
            let (q, r) = poly_divrem(&r0, &r1);
            let s2 = poly_sub(&s0, &poly_mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
        }
        // r1 is a nonzero constant since Φ is irreducible
        let c = r1[0].recip();
        let poly = s1.iter().map(|x| x * &c).collect();
        CyclotomicScalar::from_poly(self.order, poly)
    }

    fn from_rational(r: &Rational) -> Self {
        CyclotomicScalar::from_rational(r.clone())
    }
}

impl fmt::Display for CyclotomicScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = self.as_rational() {
            return write!(f, "{r}");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                _ if c.is_one() => write!(f, "zeta_{}^{k}", self.order)?,
                _ => write!(f, "({c})*zeta_{}^{k}", self.order)?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for CyclotomicScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for CyclotomicScalar {
    type Err = Error;

    /// Accepts a rational (`"-2/3"`) or a root-of-unity token
    /// `"zeta_m"` / `"zeta_m^j"`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix("zeta_") {
            let bad = || Error::Parse(format!("bad root-of-unity token: {s:?}"));
            let (m, j) = match rest.split_once('^') {
                Some((m, j)) => (m, j.parse::<i64>().map_err(|_| bad())?),
                None => (rest, 1),
            };
            let m: u64 = m.parse().map_err(|_| bad())?;
            if m == 0 {
                return Err(bad());
            }
            return Ok(CyclotomicScalar::zeta(m, j));
        }
        Ok(CyclotomicScalar::from_rational(s.parse()?))
    }
}
