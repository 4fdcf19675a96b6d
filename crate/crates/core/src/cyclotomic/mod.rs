//! Exact arithmetic in cyclotomic fields `Q(zeta_N)`.
//!
//! Values are stored in the power basis `1, z, ..., z^(phi(N)-1)` reduced
//! modulo the N-th cyclotomic polynomial, with arbitrary-precision rational
//! coefficients. Operands of different conductors are lifted to the lcm.

mod matrix;
mod parse;

pub use matrix::CycloMatrix;

use std::collections::HashMap;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num::{BigInt, BigRational, Complex, Integer, One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub type Rational = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CyclotomicError {
    #[error("conductor must be positive")]
    ZeroConductor,
    #[error("cannot parse cyclotomic `{text}`: {reason}")]
    Parse { text: String, reason: String },
}

pub fn rational(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn integer(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `<q>`: the fractional part, always in `[0, 1)`.
pub fn fractional_part(q: &Rational) -> Rational {
    q - q.floor()
}

type Poly = Arc<Vec<i64>>;

fn phi_cache() -> &'static Mutex<HashMap<u32, Poly>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Poly>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Coefficients (low degree first) of the monic polynomial `Phi_n`, built
/// as `(x^n - 1) / prod_{d | n, d < n} Phi_d`.
pub(crate) fn cyclotomic_polynomial(n: u32) -> Poly {
    if let Some(p) = phi_cache().lock().expect("cache lock").get(&n) {
        return p.clone();
    }
    let mut num: Vec<i64> = vec![0; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in (1..n).filter(|d| n % d == 0) {
        let den = cyclotomic_polynomial(d);
        num = exact_monic_division(&num, &den);
    }
    let poly = Arc::new(num);
    phi_cache().lock().expect("cache lock").insert(n, poly.clone());
    poly
}

fn exact_monic_division(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let qd = rem.len() - 1 - dd;
    let mut quot = vec![0i64; qd + 1];
    for i in (0..=qd).rev() {
        let c = rem[i + dd];
        quot[i] = c;
        if c != 0 {
            for (j, &dj) in den.iter().enumerate() {
                rem[i + j] -= c * dj;
            }
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    quot
}

pub fn euler_phi(n: u32) -> u32 {
    (1..=n).filter(|k| k.gcd(&n) == 1).count() as u32
}

/// An element of `Q(zeta_N)`.
#[derive(Clone, Debug)]
pub struct Cyclotomic {
    conductor: u32,
    coeffs: Vec<Rational>,
}

impl Cyclotomic {
    pub fn zero() -> Self {
        Cyclotomic { conductor: 1, coeffs: vec![Rational::zero()] }
    }

    pub fn one() -> Self {
        Self::from_rational(Rational::one())
    }

    pub fn from_rational(q: Rational) -> Self {
        Cyclotomic { conductor: 1, coeffs: vec![q] }
    }

    pub fn from_integer(n: i64) -> Self {
        Self::from_rational(integer(n))
    }

    /// `zeta_N^k`.
    pub fn root_of_unity(conductor: u32, k: i64) -> Result<Self, CyclotomicError> {
        if conductor == 0 {
            return Err(CyclotomicError::ZeroConductor);
        }
        let mut v = vec![Rational::zero(); conductor as usize];
        v[k.rem_euclid(conductor as i64) as usize] = Rational::one();
        Ok(Self::from_exponents(conductor, v))
    }

    /// Panicking shorthand for [`Cyclotomic::root_of_unity`] with `N >= 1`.
    pub fn zeta(conductor: u32, k: i64) -> Self {
        Self::root_of_unity(conductor, k).expect("positive conductor")
    }

    /// Reduces `sum_k v[k] zeta_N^k` (k < N) into the canonical basis.
    pub fn from_exponents(conductor: u32, mut v: Vec<Rational>) -> Self {
        let phi = cyclotomic_polynomial(conductor);
        let deg = phi.len() - 1;
        for top in (deg..v.len()).rev() {
            if v[top].is_zero() {
                continue;
            }
            let c = std::mem::take(&mut v[top]);
            for (j, &pj) in phi.iter().enumerate().take(deg) {
                if pj != 0 {
                    let shift = top - deg + j;
                    v[shift] -= &c * integer(pj);
                }
            }
        }
        v.truncate(deg);
        Cyclotomic { conductor, coeffs: v }
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    /// Coefficients in the reduced power basis at the stored conductor.
    pub fn coefficients(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.as_rational().is_some_and(|q| q.is_one())
    }

    pub fn as_rational(&self) -> Option<Rational> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    pub fn as_integer(&self) -> Option<BigInt> {
        self.as_rational().filter(|q| q.is_integer()).map(|q| q.to_integer())
    }

    /// Same value expressed at a multiple `target` of the conductor.
    pub fn lift(&self, target: u32) -> Self {
        assert!(target % self.conductor == 0, "lift target must be a multiple");
        if target == self.conductor {
            return self.clone();
        }
        let step = (target / self.conductor) as usize;
        let mut v = vec![Rational::zero(); target as usize];
        for (k, c) in self.coeffs.iter().enumerate() {
            v[k * step] = c.clone();
        }
        Self::from_exponents(target, v)
    }

    fn align(&self, other: &Self) -> (Self, Self) {
        let l = self.conductor.lcm(&other.conductor);
        (self.lift(l), other.lift(l))
    }

    /// The automorphism `zeta_N -> zeta_N^a`, `gcd(a, N) = 1`.
    pub fn galois(&self, a: i64) -> Self {
        let n = self.conductor as i64;
        assert!(a.gcd(&n) == 1, "Galois exponent must be a unit mod N");
        let mut v = vec![Rational::zero(); n as usize];
        for (k, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                v[(a * k as i64).rem_euclid(n) as usize] += c;
            }
        }
        Self::from_exponents(self.conductor, v)
    }

    /// Complex conjugation, `zeta_N^k -> zeta_N^(N-k)`.
    pub fn conj(&self) -> Self {
        self.galois(-1)
    }

    /// Multiplicative inverse via the field norm: `x^-1 = prod_{s != 1} s(x) / N(x)`.
    pub fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if let Some(q) = self.as_rational() {
            return Some(Self::from_rational(q.recip()));
        }
        let n = self.conductor as i64;
        let mut others = Cyclotomic::one();
        for a in 2..n {
            if a.gcd(&n) == 1 {
                others = &others * &self.galois(a);
            }
        }
        let norm = (self * &others).as_rational().expect("norm is rational");
        Some(others.scale(&norm.recip()))
    }

    pub fn scale(&self, q: &Rational) -> Self {
        Cyclotomic {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| c * q).collect(),
        }
    }

    pub fn pow(&self, mut k: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Cyclotomic::one();
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            k >>= 1;
        }
        acc
    }

    /// The same value at the smallest conductor whose field contains it.
    pub fn minimal(&self) -> Self {
        if self.as_rational().is_some() {
            return Cyclotomic::from_rational(self.coeffs[0].clone());
        }
        let n = self.conductor;
        for m in (2..n).filter(|m| n % m == 0) {
            if let Some(v) = self.express_at(m) {
                return v;
            }
        }
        self.clone()
    }

    /// Solves for coordinates in `Q(zeta_m)`, `m | N`, if the value lies there.
    fn express_at(&self, m: u32) -> Option<Self> {
        let rows = self.coeffs.len();
        let cols = euler_phi(m) as usize;
        let basis: Vec<Cyclotomic> = (0..cols)
            .map(|j| Cyclotomic::zeta(m, j as i64).lift(self.conductor))
            .collect();
        // Augmented system [basis | self], eliminated over Q.
        let mut a: Vec<Vec<Rational>> = (0..rows)
            .map(|r| {
                let mut row: Vec<Rational> = basis.iter().map(|b| b.coeffs[r].clone()).collect();
                row.push(self.coeffs[r].clone());
                row
            })
            .collect();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else { continue };
            a.swap(r, p);
            let inv = a[r][c].recip();
            for x in a[r].iter_mut() {
                *x *= &inv;
            }
            for i in 0..rows {
                if i != r && !a[i][c].is_zero() {
                    let f = a[i][c].clone();
                    for j in 0..=cols {
                        let t = &f * &a[r][j];
                        a[i][j] -= t;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        if a[r..].iter().any(|row| !row[cols].is_zero()) {
            return None;
        }
        let mut coeffs = vec![Rational::zero(); cols];
        for (i, &c) in pivots.iter().enumerate() {
            coeffs[c] = a[i][cols].clone();
        }
        Some(Cyclotomic { conductor: m, coeffs })
    }

    /// Double-precision image under `zeta_N -> exp(2 pi i / N)`.
    pub fn to_complex(&self) -> Complex<f64> {
        let n = self.conductor as f64;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| {
                let angle = std::f64::consts::TAU * k as f64 / n;
                Complex::from_polar(1.0, angle) * c.to_f64().unwrap_or(f64::NAN)
            })
            .sum()
    }
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        if self.conductor == other.conductor {
            return self.coeffs == other.coeffs;
        }
        let (a, b) = self.align(other);
        a.coeffs == b.coeffs
    }
}

impl Eq for Cyclotomic {}

impl From<Rational> for Cyclotomic {
    fn from(q: Rational) -> Self {
        Cyclotomic::from_rational(q)
    }
}

impl From<i64> for Cyclotomic {
    fn from(n: i64) -> Self {
        Cyclotomic::from_integer(n)
    }
}

impl<'a> Add<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;

    fn add(self, rhs: &Cyclotomic) -> Cyclotomic {
        let (mut a, b) = self.align(rhs);
        for (x, y) in a.coeffs.iter_mut().zip(b.coeffs) {
            *x += y;
        }
        a
    }
}

impl<'a> Sub<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;

    fn sub(self, rhs: &Cyclotomic) -> Cyclotomic {
        let (mut a, b) = self.align(rhs);
        for (x, y) in a.coeffs.iter_mut().zip(b.coeffs) {
            *x -= y;
        }
        a
    }
}

impl<'a> Mul<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;

    fn mul(self, rhs: &Cyclotomic) -> Cyclotomic {
        if let Some(q) = self.as_rational() {
            return rhs.scale(&q);
        }
        if let Some(q) = rhs.as_rational() {
            return self.scale(&q);
        }
        let (a, b) = self.align(rhs);
        let n = a.conductor as usize;
        let mut v = vec![Rational::zero(); n];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    v[(i + j) % n] += x * y;
                }
            }
        }
        Cyclotomic::from_exponents(a.conductor, v)
    }
}

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;

    fn neg(self) -> Cyclotomic {
        Cyclotomic {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for Cyclotomic {
    type Output = Cyclotomic;

    fn neg(self) -> Cyclotomic {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr<Cyclotomic> for Cyclotomic {
            type Output = Cyclotomic;
            fn $method(self, rhs: Cyclotomic) -> Cyclotomic {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $tr<&'a Cyclotomic> for Cyclotomic {
            type Output = Cyclotomic;
            fn $method(self, rhs: &Cyclotomic) -> Cyclotomic {
                (&self).$method(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Sum for Cyclotomic {
    fn sum<I: Iterator<Item = Cyclotomic>>(iter: I) -> Self {
        iter.fold(Cyclotomic::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Cyclotomic> for Cyclotomic {
    fn sum<I: Iterator<Item = &'a Cyclotomic>>(iter: I) -> Self {
        iter.fold(Cyclotomic::zero(), |acc, x| acc + x)
    }
}

/// Text form such as `1`, `-1/2` or `z5^2 - z5`, highest power first,
/// printed at the minimal conductor.
impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = self.minimal();
        let mut terms: Vec<String> = Vec::new();
        for (k, c) in v.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let term = if k == 0 {
                c.to_string()
            } else {
                let base = if k == 1 {
                    format!("z{}", v.conductor)
                } else {
                    format!("z{}^{}", v.conductor, k)
                };
                if c.is_one() {
                    base
                } else if (-c).is_one() {
                    format!("-{base}")
                } else {
                    format!("{c}*{base}")
                }
            };
            terms.push(term);
        }
        if terms.is_empty() {
            return f.write_str("0");
        }
        let mut out = String::new();
        for (i, t) in terms.iter().enumerate() {
            match (i, t.strip_prefix('-')) {
                (0, _) => out.push_str(t),
                (_, Some(rest)) => {
                    out.push_str(" - ");
                    out.push_str(rest);
                }
                (_, None) => {
                    out.push_str(" + ");
                    out.push_str(t);
                }
            }
        }
        f.write_str(&out)
    }
}

impl std::str::FromStr for Cyclotomic {
    type Err = CyclotomicError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse::parse(s)
    }
}

/// Total order on canonical coefficient vectors, used only for stable sorting.
pub(crate) fn canonical_key(x: &Cyclotomic, conductor: u32) -> Vec<Rational> {
    x.lift(conductor.lcm(&x.conductor)).coeffs
}

pub(crate) fn is_nonnegative_integer(q: &Rational) -> bool {
    q.is_integer() && !q.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: u32, k: i64) -> Cyclotomic {
        Cyclotomic::zeta(n, k)
    }

    #[test]
    fn roots_of_unity_basics() {
        assert!(z(1, 0).is_one());
        assert_eq!(z(2, 1), Cyclotomic::from_integer(-1));
        assert_eq!(&z(3, 1) + &z(3, 2), Cyclotomic::from_integer(-1));
        assert_eq!(Cyclotomic::root_of_unity(0, 1), Err(CyclotomicError::ZeroConductor));
    }

    #[test]
    fn reduction_examples() {
        assert_eq!(z(4, 2), Cyclotomic::from_integer(-1));
        assert_eq!(z(5, 1).conj(), z(5, 4));
        let lifted = (-z(3, 2)).lift(6);
        assert_eq!(z(6, 1), lifted);
        assert_eq!(z(6, 1).to_string(), "z3 + 1");
        assert_eq!(z(6, 1).minimal().conductor(), 3);
    }

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(*cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(*cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(*cyclotomic_polynomial(6), vec![1, -1, 1]);
        assert_eq!(*cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
        for n in 1..=30 {
            assert_eq!(cyclotomic_polynomial(n).len() - 1, euler_phi(n) as usize);
        }
    }

    #[test]
    fn fractional_parts() {
        assert_eq!(fractional_part(&rational(-1, 2)), rational(1, 2));
        assert_eq!(fractional_part(&integer(3)), integer(0));
        assert_eq!(
            fractional_part(&rational(-2, 3)) + fractional_part(&rational(2, 3)),
            integer(1)
        );
    }

    #[test]
    fn inverses() {
        let x = &z(7, 1) + &Cyclotomic::from_integer(2);
        let inv = x.inverse().unwrap();
        assert!((&x * &inv).is_one());
        assert!(Cyclotomic::zero().inverse().is_none());
    }

    #[test]
    fn display_forms() {
        assert_eq!(Cyclotomic::from_rational(rational(-1, 2)).to_string(), "-1/2");
        assert_eq!((&z(5, 2) - &z(5, 1)).to_string(), "z5^2 - z5");
        assert_eq!(Cyclotomic::zero().to_string(), "0");
        assert_eq!(z(8, 1).scale(&rational(3, 2)).to_string(), "3/2*z8");
        // zeta_12^3 = i lives in Q(zeta_4)
        assert_eq!(z(12, 3).to_string(), "z4");
    }

    #[test]
    fn parse_display_examples() {
        for text in ["1", "-1/2", "z5^2 - z5", "0", "3/2*z8 + 1", "-z3 - 1"] {
            let v: Cyclotomic = text.parse().unwrap();
            assert_eq!(v.to_string(), text);
        }
        let v: Cyclotomic = "z4^2".parse().unwrap();
        assert_eq!(v, Cyclotomic::from_integer(-1));
        assert!("z0".parse::<Cyclotomic>().is_err());
        assert!("2 +".parse::<Cyclotomic>().is_err());
    }

    #[test]
    fn mixed_conductors() {
        let s = &z(3, 1) + &z(4, 1);
        assert_eq!(s.conductor(), 12);
        assert_eq!(&s - &z(4, 1), z(3, 1));
    }

    #[test]
    fn complex_embedding() {
        let c = z(8, 1).to_complex();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((c.re - h).abs() < 1e-12 && (c.im - h).abs() < 1e-12);
    }
}
