//! Integer Laurent polynomials `Z[y_1^{±1}, ..., y_m^{±1}]`.
//!
//! This is the representation ring `R(T^m)` of an `m`-torus: a monomial
//! `y^e` is the character with weight `e`. The only division supported is by
//! products of binomials `1 - y^alpha`, which is all the K-theory of GKM
//! graphs ever needs.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Deref, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::lattice;

/// Exponent of a Laurent monomial; equally, a weight in `Z^m`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ExponentVector(SmallVec<[i64; 6]>);

impl ExponentVector {
    pub fn zero(m: usize) -> Self {
        ExponentVector(SmallVec::from_elem(0, m))
    }

    /// The `i`-th standard basis vector (0-based).
    pub fn unit(m: usize, i: usize) -> Self {
        let mut e = Self::zero(m);
        e.0[i] = 1;
        e
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.0
    }

    pub fn dot(&self, other: &ExponentVector) -> i128 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(&a, &b)| a as i128 * b as i128)
            .sum()
    }

    pub fn scaled(&self, k: i64) -> Self {
        ExponentVector(self.0.iter().map(|&x| x * k).collect())
    }
}

impl Deref for ExponentVector {
    type Target = [i64];
    fn deref(&self) -> &[i64] {
        &self.0
    }
}

impl From<Vec<i64>> for ExponentVector {
    fn from(v: Vec<i64>) -> Self {
        ExponentVector(SmallVec::from_vec(v))
    }
}

impl From<&[i64]> for ExponentVector {
    fn from(v: &[i64]) -> Self {
        ExponentVector(SmallVec::from_slice(v))
    }
}

impl<const N: usize> From<[i64; N]> for ExponentVector {
    fn from(v: [i64; N]) -> Self {
        ExponentVector(SmallVec::from_slice(&v))
    }
}

impl FromIterator<i64> for ExponentVector {
    fn from_iter<I: IntoIterator<Item = i64>>(iter: I) -> Self {
        ExponentVector(iter.into_iter().collect())
    }
}

impl fmt::Debug for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.as_slice())
    }
}

impl Add for &ExponentVector {
    type Output = ExponentVector;
    fn add(self, rhs: &ExponentVector) -> ExponentVector {
        debug_assert_eq!(self.len(), rhs.len());
        self.0
            .iter()
            .zip(rhs.0.iter())
            .map(|(a, b)| a + b)
            .collect()
    }
}

impl Sub for &ExponentVector {
    type Output = ExponentVector;
    fn sub(self, rhs: &ExponentVector) -> ExponentVector {
        debug_assert_eq!(self.len(), rhs.len());
        self.0
            .iter()
            .zip(rhs.0.iter())
            .map(|(a, b)| a - b)
            .collect()
    }
}

impl Neg for &ExponentVector {
    type Output = ExponentVector;
    fn neg(self) -> ExponentVector {
        self.0.iter().map(|a| -a).collect()
    }
}

/// The quotient lattice `Z^m / Z alpha`, realized as a coset key.
///
/// A unimodular `U` with `U alpha = (g, 0, ..., 0)` is computed once; the key
/// of `e` is `((U e)_1 mod g, (U e)_2, ..., (U e)_m)`. Non-primitive `alpha`
/// (`g > 1`) gives the torsion component.
#[derive(Clone, Debug)]
pub struct LatticeQuotient {
    alpha: ExponentVector,
    basis: Vec<Vec<i64>>,
    torsion: i64,
}

impl LatticeQuotient {
    pub fn new(alpha: &ExponentVector) -> Result<Self> {
        if alpha.is_zero() {
            return Err(Error::InvalidDivisor);
        }
        let (basis, torsion) = lattice::unimodular_reduction(alpha);
        Ok(LatticeQuotient {
            alpha: alpha.clone(),
            basis,
            torsion,
        })
    }

    pub fn alpha(&self) -> &ExponentVector {
        &self.alpha
    }

    /// Order of the torsion part of the quotient (the gcd of `alpha`).
    pub fn torsion(&self) -> i64 {
        self.torsion
    }

    /// Coset key: `project(a) == project(b)` iff `a - b` lies in `Z alpha`.
    pub fn project(&self, e: &ExponentVector) -> ExponentVector {
        self.basis
            .iter()
            .enumerate()
            .map(|(i, row)| {
                let v: i64 = row.iter().zip(e.iter()).map(|(a, b)| a * b).sum();
                if i == 0 {
                    v.rem_euclid(self.torsion)
                } else {
                    v
                }
            })
            .collect()
    }
}

/// An element of `Z[y_1^{±1}, ..., y_m^{±1}]` in canonical form.
///
/// Terms are kept in a sorted map with no zero coefficients, so structural
/// equality is ring equality and iteration is lexicographic in the exponent.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LaurentPolynomial {
    m: usize,
    terms: BTreeMap<ExponentVector, BigInt>,
}

impl LaurentPolynomial {
    pub fn zero(m: usize) -> Self {
        LaurentPolynomial {
            m,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(m: usize) -> Self {
        Self::constant(m, 1)
    }

    pub fn constant(m: usize, c: impl Into<BigInt>) -> Self {
        let c = c.into();
        let mut p = Self::zero(m);
        if !c.is_zero() {
            p.terms.insert(ExponentVector::zero(m), c);
        }
        p
    }

    /// The monomial `y^e`.
    pub fn monomial(m: usize, e: impl Into<ExponentVector>) -> Result<Self> {
        Self::term(m, e, 1)
    }

    /// The single term `c y^e`.
    pub fn term(m: usize, e: impl Into<ExponentVector>, c: impl Into<BigInt>) -> Result<Self> {
        let e = e.into();
        if e.len() != m {
            return Err(Error::DimensionMismatch {
                expected: m,
                found: e.len(),
            });
        }
        let c = c.into();
        let mut p = Self::zero(m);
        if !c.is_zero() {
            p.terms.insert(e, c);
        }
        Ok(p)
    }

    /// `1 - y^alpha`.
    pub fn binomial(alpha: &ExponentVector) -> Self {
        let m = alpha.len();
        let mut p = Self::one(m);
        p.add_term(alpha.clone(), BigInt::from(-1));
        p
    }

    /// Builds a polynomial from (exponent, coefficient) pairs, merging
    /// repeated exponents and dropping zeros.
    pub fn from_terms<E, C, I>(m: usize, terms: I) -> Result<Self>
    where
        E: Into<ExponentVector>,
        C: Into<BigInt>,
        I: IntoIterator<Item = (E, C)>,
    {
        let mut p = Self::zero(m);
        for (e, c) in terms {
            let e = e.into();
            if e.len() != m {
                return Err(Error::DimensionMismatch {
                    expected: m,
                    found: e.len(),
                });
            }
            p.add_term(e, c.into());
        }
        Ok(p)
    }

    fn add_term(&mut self, e: ExponentVector, c: BigInt) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Number of variables.
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .next()
                .is_some_and(|(e, c)| e.is_zero() && c.is_one())
    }

    /// Number of nonzero terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExponentVector, &BigInt)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, e: &ExponentVector) -> BigInt {
        self.terms.get(e).cloned().unwrap_or_default()
    }

    /// Replaces the coefficient of `y^e` (a zero value removes the term).
    pub fn with_coefficient(&self, e: ExponentVector, c: BigInt) -> Result<Self> {
        check_dim(self.m, e.len())?;
        let mut p = self.clone();
        p.terms.remove(&e);
        p.add_term(e, c);
        Ok(p)
    }

    /// If this is a single term `c y^e`, returns `(e, c)`.
    pub fn as_term(&self) -> Option<(&ExponentVector, &BigInt)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    /// Inverse of a unit `± y^e`.
    pub fn inverse_monomial(&self) -> Result<Self> {
        match self.as_term() {
            Some((e, c)) if c.abs().is_one() => {
                let mut p = Self::zero(self.m);
                p.terms.insert(-e, c.clone());
                Ok(p)
            }
            _ => Err(Error::NotInvertible(self.to_string())),
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        check_dim(self.m, other.m)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        check_dim(self.m, other.m)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c);
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        check_dim(self.m, other.m)?;
        let mut out = Self::zero(self.m);
        if self.is_zero() || other.is_zero() {
            return Ok(out);
        }
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                out.add_term(ea + eb, ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return Self::zero(self.m);
        }
        LaurentPolynomial {
            m: self.m,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * k)).collect(),
        }
    }

    /// Multiplies by the monomial `y^e`.
    pub fn shift(&self, e: &ExponentVector) -> Self {
        LaurentPolynomial {
            m: self.m,
            terms: self.terms.iter().map(|(f, c)| (f + e, c.clone())).collect(),
        }
    }

    /// Tests membership in the ideal `(1 - y^alpha)`.
    ///
    /// `R / (1 - y^alpha)` is the group ring of `Z^m / Z alpha`, so `g` lies in
    /// the ideal iff its coefficients sum to zero on every coset of `Z alpha`.
    pub fn divisible_by_binomial(&self, alpha: &ExponentVector) -> Result<bool> {
        check_dim(self.m, alpha.len())?;
        let quotient = LatticeQuotient::new(alpha)?;
        let mut buckets: BTreeMap<ExponentVector, BigInt> = BTreeMap::new();
        for (e, c) in &self.terms {
            *buckets.entry(quotient.project(e)).or_default() += c;
        }
        Ok(buckets.values().all(Zero::is_zero))
    }

    /// Exact quotient `q` with `(1 - y^alpha) q = self`.
    ///
    /// Leading-term elimination under `lambda(e) = <e, alpha>` (ties broken
    /// lexicographically): the lambda-maximal term `c y^e` of the remainder is
    /// cancelled by the quotient term `-c y^{e - alpha}`. Every term of a true
    /// quotient has lambda at least the minimum over `supp(self)`, which bounds
    /// the search for non-divisible input.
    pub fn div_exact_binomial(&self, alpha: &ExponentVector) -> Result<Self> {
        check_dim(self.m, alpha.len())?;
        if alpha.is_zero() {
            return Err(Error::InvalidDivisor);
        }
        let step = alpha.dot(alpha);
        let Some(floor) = self.terms.keys().map(|e| e.dot(alpha)).min() else {
            return Ok(Self::zero(self.m));
        };
        let mut rem: BTreeMap<(i128, ExponentVector), BigInt> = self
            .terms
            .iter()
            .map(|(e, c)| ((e.dot(alpha), e.clone()), c.clone()))
            .collect();
        let mut quotient = Self::zero(self.m);
        while let Some(((level, e), c)) = rem.pop_last() {
            if level - step < floor {
                return Err(Error::NotDivisible {
                    alpha: alpha.to_vec(),
                    factor: None,
                });
            }
            let lower = &e - alpha;
            quotient.terms.insert(lower.clone(), -c.clone());
            let key = (level - step, lower);
            let slot = rem.entry(key.clone()).or_default();
            *slot += c;
            if slot.is_zero() {
                rem.remove(&key);
            }
        }
        Ok(quotient)
    }

    /// Exact quotient by `prod_i (1 - y^{alpha_i})`, dividing in the given order.
    pub fn div_exact_product(&self, alphas: &[ExponentVector]) -> Result<Self> {
        let mut q = self.clone();
        for (i, alpha) in alphas.iter().enumerate() {
            q = q.div_exact_binomial(alpha).map_err(|err| match err {
                Error::NotDivisible { alpha, .. } => Error::NotDivisible {
                    alpha,
                    factor: Some(i),
                },
                other => other,
            })?;
        }
        Ok(q)
    }

    /// Canonical JSON: `{"m":..,"terms":[{"exp":[..],"coef":".."}]}`.
    pub fn emit(&self) -> String {
        serde_json::to_string(self).expect("polynomial serialization is infallible")
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }
}

fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

impl fmt::Display for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let mut factors = Vec::new();
            for (k, &x) in e.iter().enumerate() {
                match x {
                    0 => {}
                    1 => factors.push(format!("y{}", k + 1)),
                    _ => factors.push(format!("y{}^{}", k + 1, x)),
                }
            }
            if factors.is_empty() {
                write!(f, "{abs}")?;
            } else {
                if !abs.is_one() {
                    write!(f, "{abs}*")?;
                }
                write!(f, "{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPolynomial[m={}]({})", self.m, self)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr for &LaurentPolynomial {
            type Output = LaurentPolynomial;
            fn $method(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
                self.$checked(rhs)
                    .expect("operands live in different rings")
            }
        }
        impl $tr for LaurentPolynomial {
            type Output = LaurentPolynomial;
            fn $method(self, rhs: LaurentPolynomial) -> LaurentPolynomial {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl Neg for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn neg(self) -> LaurentPolynomial {
        LaurentPolynomial {
            m: self.m,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

impl Neg for LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn neg(self) -> LaurentPolynomial {
        -&self
    }
}

#[derive(Serialize, Deserialize)]
struct TermDoc {
    exp: Vec<i64>,
    coef: String,
}

#[derive(Serialize, Deserialize)]
struct PolyDoc {
    m: usize,
    terms: Vec<TermDoc>,
}

impl Serialize for LaurentPolynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        PolyDoc {
            m: self.m,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| TermDoc {
                    exp: e.to_vec(),
                    coef: c.to_string(),
                })
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for LaurentPolynomial {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let doc = PolyDoc::deserialize(deserializer)?;
        let mut p = LaurentPolynomial::zero(doc.m);
        for (i, t) in doc.terms.into_iter().enumerate() {
            if t.exp.len() != doc.m {
                return Err(de::Error::custom(format!(
                    "term #{i} {:?}: exponent has length {}, expected {}",
                    t.exp,
                    t.exp.len(),
                    doc.m
                )));
            }
            let c: BigInt = t.coef.parse().map_err(|_| {
                de::Error::custom(format!(
                    "term #{i} {:?}: bad coefficient {:?}",
                    t.exp, t.coef
                ))
            })?;
            if c.is_zero() {
                return Err(de::Error::custom(format!(
                    "term #{i} {:?}: zero coefficient",
                    t.exp
                )));
            }
            let e = ExponentVector::from(t.exp);
            if p.terms.contains_key(&e) {
                return Err(de::Error::custom(format!(
                    "term #{i} {e:?}: duplicate exponent"
                )));
            }
            p.terms.insert(e, c);
        }
        Ok(p)
    }
}
