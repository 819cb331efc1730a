//! Sparse multivariate polynomials with arbitrary-precision integer
//! coefficients, in at most six variables.
//!
//! Terms are kept in a `BTreeMap` keyed by the exponent vector, so iteration
//! order is lexicographic on exponents and two equal polynomials always
//! serialize identically. Zero coefficients are never stored; the zero
//! polynomial is the empty map.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub const MAX_VARS: usize = 6;

/// Exponent vector. Entries past the owning polynomial's `nvars` are zero.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Exponents(pub [u8; MAX_VARS]);

impl Exponents {
    pub fn zero() -> Self {
        Exponents([0; MAX_VARS])
    }

    pub fn unit(var: usize) -> Self {
        let mut e = [0; MAX_VARS];
        e[var] = 1;
        Exponents(e)
    }

    pub fn from_slice(exps: &[u8]) -> Self {
        let mut e = [0; MAX_VARS];
        e[..exps.len()].copy_from_slice(exps);
        Exponents(e)
    }

    pub fn get(&self, var: usize) -> u8 {
        self.0[var]
    }

    pub fn total(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    fn plus(&self, other: &Exponents) -> Exponents {
        let mut e = [0; MAX_VARS];
        for (i, slot) in e.iter_mut().enumerate() {
            *slot = self.0[i]
                .checked_add(other.0[i])
                .expect("exponent overflow");
        }
        Exponents(e)
    }

    /// Componentwise `<=`.
    pub fn dominated_by(&self, other: &Exponents) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }
}

/// A single term `coeff * x^exponents`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Monomial {
    pub coeff: BigInt,
    pub exponents: Exponents,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Exponents, BigInt>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        assert!(nvars <= MAX_VARS, "at most {MAX_VARS} variables");
        Polynomial {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: impl Into<BigInt>) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(Exponents::zero(), c.into());
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, 1)
    }

    /// The coordinate function `x_var` (zero-based).
    pub fn var(nvars: usize, var: usize) -> Self {
        assert!(var < nvars, "variable {var} out of range");
        let mut p = Self::zero(nvars);
        p.add_term(Exponents::unit(var), BigInt::one());
        p
    }

    pub fn monomial(nvars: usize, coeff: impl Into<BigInt>, exps: &[u8]) -> Self {
        assert!(exps.len() == nvars);
        let mut p = Self::zero(nvars);
        p.add_term(Exponents::from_slice(exps), coeff.into());
        p
    }

    /// Builds a polynomial from raw terms, merging duplicates and dropping zeros.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u8>, BigInt)>,
    {
        if nvars > MAX_VARS {
            return Err(Error::TooManyVars(nvars));
        }
        let mut p = Self::zero(nvars);
        for (exps, c) in terms {
            if exps.len() != nvars {
                return Err(Error::Arity {
                    expected: nvars,
                    got: exps.len(),
                });
            }
            p.add_term(Exponents::from_slice(&exps), c);
        }
        Ok(p)
    }

    /// Adds `c * x^e` in place.
    pub fn add_term(&mut self, e: Exponents, c: BigInt) {
        if c.is_zero() {
            return;
        }
        debug_assert!(e.0[self.nvars..].iter().all(|&x| x == 0));
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &BigInt)> {
        self.terms.iter()
    }

    pub fn monomials(&self) -> impl Iterator<Item = Monomial> + '_ {
        self.terms.iter().map(|(e, c)| Monomial {
            coeff: c.clone(),
            exponents: *e,
        })
    }

    pub fn coeff(&self, exps: &[u8]) -> BigInt {
        self.terms
            .get(&Exponents::from_slice(exps))
            .cloned()
            .unwrap_or_default()
    }

    pub fn constant_term(&self) -> BigInt {
        self.terms
            .get(&Exponents::zero())
            .cloned()
            .unwrap_or_default()
    }

    /// Highest exponent of `var` over the support (0 for the zero polynomial).
    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|e| e.0[var] as u32).max().unwrap_or(0)
    }

    /// Componentwise maximum of the exponents in the support.
    pub fn envelope(&self) -> Exponents {
        let mut env = [0u8; MAX_VARS];
        for e in self.terms.keys() {
            for (slot, &x) in env.iter_mut().zip(e.0.iter()) {
                *slot = (*slot).max(x);
            }
        }
        Exponents(env)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Exponents::total).max().unwrap_or(0)
    }

    /// `Some(d)` when every term has total degree `d`.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(Exponents::total);
        let d = it.next()?;
        it.all(|x| x == d).then_some(d)
    }

    /// Fails when some exponent exceeds `cap`.
    pub fn check_degree_cap(&self, cap: u32) -> Result<()> {
        for e in self.terms.keys() {
            for var in 0..self.nvars {
                if e.0[var] as u32 > cap {
                    return Err(Error::DegreeCap {
                        var,
                        exponent: e.0[var] as u32,
                        cap,
                    });
                }
            }
        }
        Ok(())
    }

    fn same_vars(&self, other: &Polynomial) -> Result<()> {
        if self.nvars != other.nvars {
            Err(Error::VarMismatch {
                left: self.nvars,
                right: other.nvars,
            })
        } else {
            Ok(())
        }
    }

    pub fn try_add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.same_vars(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(*e, c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.same_vars(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(*e, -c);
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.same_vars(other)?;
        let mut acc: BTreeMap<Exponents, BigInt> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                *acc.entry(ea.plus(eb)).or_default() += ca * cb;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Ok(Polynomial {
            nvars: self.nvars,
            terms: acc,
        })
    }

    pub fn scale(&self, k: &BigInt) -> Polynomial {
        if k.is_zero() {
            return Polynomial::zero(self.nvars);
        }
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (*e, c * k)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Polynomial {
        let mut out = Polynomial::one(self.nvars);
        for _ in 0..n {
            out = &out * self;
        }
        out
    }

    pub fn evaluate(&self, point: &[BigInt]) -> Result<BigInt> {
        if point.len() != self.nvars {
            return Err(Error::Arity {
                expected: self.nvars,
                got: point.len(),
            });
        }
        // Power tables keep each term to a handful of multiplications.
        let tables = power_tables(point, &self.envelope());
        let mut total = BigInt::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (var, table) in tables.iter().enumerate() {
                let k = e.0[var] as usize;
                if k > 0 {
                    term *= &table[k];
                }
            }
            total += term;
        }
        Ok(total)
    }

    pub fn evaluate_i64(&self, point: &[i64]) -> Result<BigInt> {
        let pt: Vec<BigInt> = point.iter().map(|&x| BigInt::from(x)).collect();
        self.evaluate(&pt)
    }

    pub fn evaluate_rational(&self, point: &[BigRational]) -> Result<BigRational> {
        if point.len() != self.nvars {
            return Err(Error::Arity {
                expected: self.nvars,
                got: point.len(),
            });
        }
        let tables = power_tables(point, &self.envelope());
        let mut total = BigRational::zero();
        for (e, c) in &self.terms {
            let mut term = BigRational::from_integer(c.clone());
            for (var, table) in tables.iter().enumerate() {
                let k = e.0[var] as usize;
                if k > 0 {
                    term *= &table[k];
                }
            }
            total += term;
        }
        Ok(total)
    }

    /// Floating-point evaluation, used only for screening.
    pub fn evaluate_f64(&self, point: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                let mut t = c.to_f64().unwrap_or(f64::NAN);
                for (var, &x) in point.iter().enumerate() {
                    t *= x.powi(e.0[var] as i32);
                }
                t
            })
            .sum()
    }

    pub fn partial_derivative(&self, var: usize) -> Result<Polynomial> {
        if var >= self.nvars {
            return Err(Error::VarIndex {
                index: var,
                nvars: self.nvars,
            });
        }
        let mut out = Polynomial::zero(self.nvars);
        for (e, c) in &self.terms {
            let k = e.0[var];
            if k == 0 {
                continue;
            }
            let mut e2 = *e;
            e2.0[var] -= 1;
            out.add_term(e2, c * BigInt::from(k));
        }
        Ok(out)
    }

    /// Composition `p(images[0], ..., images[n-1])`.
    pub fn substitute(&self, images: &[Polynomial]) -> Result<Polynomial> {
        if images.len() != self.nvars {
            return Err(Error::Arity {
                expected: self.nvars,
                got: images.len(),
            });
        }
        let m = images.first().map_or(self.nvars, |p| p.nvars);
        for img in images {
            if img.nvars != m {
                return Err(Error::VarMismatch {
                    left: m,
                    right: img.nvars,
                });
            }
        }
        let env = self.envelope();
        let tables: Vec<Vec<Polynomial>> = images
            .iter()
            .enumerate()
            .map(|(var, img)| {
                let mut row = vec![Polynomial::one(m)];
                for k in 1..=env.0[var] as usize {
                    let next = &row[k - 1] * img;
                    row.push(next);
                }
                row
            })
            .collect();
        let mut out = Polynomial::zero(m);
        for (e, c) in &self.terms {
            let mut term = Polynomial::constant(m, c.clone());
            for (var, table) in tables.iter().enumerate() {
                let k = e.0[var] as usize;
                if k > 0 {
                    term = &term * &table[k];
                }
            }
            for (e2, c2) in term.terms {
                out.add_term(e2, c2);
            }
        }
        Ok(out)
    }

    /// Restriction along a polynomial curve: `t -> p(curve[0](t), ...)`.
    pub fn restrict_curve(&self, curve: &[UnivariatePoly]) -> Result<UnivariatePoly> {
        if curve.len() != self.nvars {
            return Err(Error::Arity {
                expected: self.nvars,
                got: curve.len(),
            });
        }
        let env = self.envelope();
        let tables: Vec<Vec<UnivariatePoly>> = curve
            .iter()
            .enumerate()
            .map(|(var, c)| {
                let mut row = vec![UnivariatePoly::constant(1)];
                for k in 1..=env.0[var] as usize {
                    let next = &row[k - 1] * c;
                    row.push(next);
                }
                row
            })
            .collect();
        let mut out = UnivariatePoly::zero();
        for (e, c) in &self.terms {
            let mut term = UnivariatePoly::from_coeffs(vec![c.clone()]);
            for (var, table) in tables.iter().enumerate() {
                let k = e.0[var] as usize;
                if k > 0 {
                    term = &term * &table[k];
                }
            }
            out = &out + &term;
        }
        Ok(out)
    }

    /// Renames variables: variable `i` becomes variable `perm[i]`.
    pub fn permute_vars(&self, perm: &[usize]) -> Polynomial {
        assert_eq!(perm.len(), self.nvars);
        let mut out = Polynomial::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut e2 = [0u8; MAX_VARS];
            for (i, &target) in perm.iter().enumerate() {
                e2[target] = e.0[i];
            }
            out.add_term(Exponents(e2), c.clone());
        }
        out
    }

    /// Parses the line-oriented text format `<coeff> <e1> ... <ek>`.
    ///
    /// The variable count is taken from the first monomial line unless given.
    pub fn parse(text: &str, nvars: Option<usize>) -> Result<Polynomial> {
        let mut nv = nvars;
        let mut terms = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut fields = line.split_whitespace();
            let coeff_str = fields.next().unwrap();
            let coeff: BigInt = coeff_str.parse().map_err(|_| Error::Parse {
                line: idx + 1,
                msg: format!("bad coefficient `{coeff_str}`"),
            })?;
            let exps = fields
                .map(|f| {
                    f.parse::<u8>().map_err(|_| Error::Parse {
                        line: idx + 1,
                        msg: format!("bad exponent `{f}`"),
                    })
                })
                .collect::<Result<Vec<u8>>>()?;
            match nv {
                None => {
                    if exps.len() > MAX_VARS {
                        return Err(Error::TooManyVars(exps.len()));
                    }
                    nv = Some(exps.len());
                }
                Some(n) if n != exps.len() => {
                    return Err(Error::Parse {
                        line: idx + 1,
                        msg: format!("expected {n} exponents, got {}", exps.len()),
                    })
                }
                _ => {}
            }
            terms.push((exps, coeff));
        }
        let nv = nv.ok_or(Error::Parse {
            line: 0,
            msg: "no terms and no variable count".into(),
        })?;
        Polynomial::from_terms(nv, terms)
    }

    /// Canonical text form, one monomial per line in lexicographic order.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (e, c) in &self.terms {
            s.push_str(&c.to_string());
            for var in 0..self.nvars {
                s.push(' ');
                s.push_str(&e.0[var].to_string());
            }
            s.push('\n');
        }
        s
    }
}

fn power_tables<T>(point: &[T], env: &Exponents) -> Vec<Vec<T>>
where
    T: Clone + One + for<'a> Mul<&'a T, Output = T>,
{
    point
        .iter()
        .enumerate()
        .map(|(var, x)| {
            let mut row = vec![T::one()];
            for k in 1..=env.0[var] as usize {
                let next = row[k - 1].clone() * x;
                row.push(next);
            }
            row
        })
        .collect()
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            let a = c.abs();
            let has_vars = e.total() > 0;
            if !has_vars || !a.is_one() {
                write!(f, "{a}")?;
            }
            for var in 0..self.nvars {
                match e.0[var] {
                    0 => {}
                    1 => write!(f, "x{}", var + 1)?,
                    k => write!(f, "x{}^{}", var + 1, k)?,
                }
            }
        }
        Ok(())
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl<'a> $trait<&'a Polynomial> for &'a Polynomial {
            type Output = Polynomial;
            /// Panics if the variable counts differ; use the `try_` form to
            /// get an error instead.
            fn $method(self, rhs: &'a Polynomial) -> Polynomial {
                self.$checked(rhs).expect("polynomial arithmetic")
            }
        }
        impl $trait<Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                self.$checked(&rhs).expect("polynomial arithmetic")
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

/// Dense univariate polynomial `c_0 + c_1 t + ...`, trailing zeros trimmed.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct UnivariatePoly {
    coeffs: Vec<BigInt>,
}

impl UnivariatePoly {
    pub fn zero() -> Self {
        UnivariatePoly { coeffs: Vec::new() }
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::from_coeffs(vec![c.into()])
    }

    /// The identity `t`.
    pub fn t() -> Self {
        Self::from_coeffs(vec![BigInt::zero(), BigInt::one()])
    }

    pub fn from_coeffs(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UnivariatePoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    /// Lowest-degree nonzero term as `(degree, coefficient)`.
    pub fn lowest_term(&self) -> Option<(usize, BigInt)> {
        self.coeffs
            .iter()
            .enumerate()
            .find(|(_, c)| !c.is_zero())
            .map(|(k, c)| (k, c.clone()))
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn evaluate(&self, t: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * t + c)
    }
}

impl Add for &UnivariatePoly {
    type Output = UnivariatePoly;
    fn add(self, rhs: &UnivariatePoly) -> UnivariatePoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UnivariatePoly::from_coeffs(
            (0..n)
                .map(|k| self.coeff(k) + rhs.coeff(k))
                .collect(),
        )
    }
}

impl Sub for &UnivariatePoly {
    type Output = UnivariatePoly;
    fn sub(self, rhs: &UnivariatePoly) -> UnivariatePoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UnivariatePoly::from_coeffs(
            (0..n)
                .map(|k| self.coeff(k) - rhs.coeff(k))
                .collect(),
        )
    }
}

impl Mul for &UnivariatePoly {
    type Output = UnivariatePoly;
    fn mul(self, rhs: &UnivariatePoly) -> UnivariatePoly {
        if self.is_zero() || rhs.is_zero() {
            return UnivariatePoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UnivariatePoly::from_coeffs(out)
    }
}

impl fmt::Display for UnivariatePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            first = false;
            let a = c.abs();
            match k {
                0 => write!(f, "{a}")?,
                1 => write!(f, "{a}t")?,
                _ => write!(f, "{a}t^{k}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(n: usize, i: usize) -> Polynomial {
        Polynomial::var(n, i)
    }

    fn c(n: usize, v: i64) -> Polynomial {
        Polynomial::constant(n, v)
    }

    #[test]
    fn addition_examples() {
        let s = &(&x(2, 0) + &x(2, 1)) + &(&x(2, 0) - &x(2, 1));
        assert_eq!(s, x(2, 0).scale(&BigInt::from(2)));

        let p = &c(2, 3) + &x(2, 1);
        assert_eq!(&p + &Polynomial::zero(2), p);

        // 3 - 4x + 2x^2 plus its negation
        let q = Polynomial::from_terms(
            1,
            vec![(vec![0], 3.into()), (vec![1], (-4).into()), (vec![2], 2.into())],
        )
        .unwrap();
        assert!((&q + &(-&q)).is_zero());
    }

    #[test]
    fn mismatched_vars_is_an_error() {
        assert!(matches!(
            x(2, 0).try_add(&x(3, 0)),
            Err(Error::VarMismatch { left: 2, right: 3 })
        ));
        assert!(x(2, 0).try_mul(&x(3, 0)).is_err());
    }

    #[test]
    fn multiplication_examples() {
        let a = &(&x(2, 0) + &c(2, 1)) * &(&x(2, 0) - &c(2, 1));
        assert_eq!(a, &x(2, 0).pow(2) - &c(2, 1));
        let p = &x(2, 0) + &c(2, 7);
        assert_eq!(&p * &Polynomial::one(2), p);
        let s = (&x(2, 0) + &x(2, 1)).pow(2);
        assert_eq!(s.coeff(&[2, 0]), 1.into());
        assert_eq!(s.coeff(&[1, 1]), 2.into());
        assert_eq!(s.coeff(&[0, 2]), 1.into());
        assert_eq!(s.len(), 3);
    }

    #[test]
    fn evaluate_and_arity() {
        let p = &x(2, 0) * &x(2, 1);
        assert_eq!(p.evaluate_i64(&[3, 5]).unwrap(), 15.into());
        assert!(p.evaluate_i64(&[3]).is_err());
    }

    #[test]
    fn derivative_examples() {
        let p = x(2, 0).pow(3);
        assert_eq!(
            p.partial_derivative(0).unwrap(),
            x(2, 0).pow(2).scale(&3.into())
        );
        assert!(p.partial_derivative(1).unwrap().is_zero());
        assert!(p.partial_derivative(2).is_err());
    }

    #[test]
    fn substitute_examples() {
        let p = x(1, 0).pow(2);
        let img = &x(2, 0) + &x(2, 1);
        assert_eq!(p.substitute(&[img.clone()]).unwrap(), img.pow(2));
        let q = &(&x(3, 0) * &x(3, 2)) + &c(3, -4);
        let id: Vec<_> = (0..3).map(|i| x(3, i)).collect();
        assert_eq!(q.substitute(&id).unwrap(), q);
    }

    #[test]
    fn restrict_examples() {
        let p = &x(2, 0) * &x(2, 1);
        let r = p
            .restrict_curve(&[UnivariatePoly::t(), UnivariatePoly::t()])
            .unwrap();
        assert_eq!(r, UnivariatePoly::from_i64(&[0, 0, 1]));
        assert_eq!(r.lowest_term(), Some((2, 1.into())));
    }

    #[test]
    fn text_format_is_canonical() {
        let text = "# comment\n2 0 1\n\n-3 1 0  # trailing\n5 0 0\n1 0 1\n";
        let p = Polynomial::parse(text, None).unwrap();
        assert_eq!(p.nvars(), 2);
        assert_eq!(p.to_text(), "5 0 0\n3 0 1\n-3 1 0\n");
        assert_eq!(Polynomial::parse(&p.to_text(), None).unwrap(), p);
        assert!(Polynomial::parse("1 0 0\n2 1\n", None).is_err());
        assert!(Polynomial::parse("x 1\n", None).is_err());
    }

    #[test]
    fn display_is_readable() {
        let p = Polynomial::from_terms(
            2,
            vec![(vec![0, 0], 3.into()), (vec![1, 0], (-1).into()), (vec![2, 1], 2.into())],
        )
        .unwrap();
        assert_eq!(p.to_string(), "3 - x1 + 2x1^2x2");
        assert_eq!(UnivariatePoly::from_i64(&[0, -2, 0, 5]).to_string(), "-2t + 5t^3");
    }
}
