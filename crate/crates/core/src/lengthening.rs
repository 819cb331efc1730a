//! Exact property checks for unit lengthening and for sums of squared lists.
//!
//! Both suites work in integers only: volume ratios are compared through
//! `f = 288 V^2` after clearing the sixth powers of the edge sums.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cayley_menger::{build_f, build_f_on_squares, is_tetrahedral_i64, FACES};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LengthenOutcome {
    pub list: [i64; 6],
    pub t: i64,
    /// `f(D+t) * S^6`
    #[serde(serialize_with = "ser_display")]
    pub lhs: BigInt,
    /// `f(D) * (S+6t)^6`
    #[serde(serialize_with = "ser_display")]
    pub rhs: BigInt,
    pub equality: bool,
    pub tetrahedral_after: bool,
}

impl LengthenOutcome {
    pub fn holds(&self) -> bool {
        self.lhs >= self.rhs && self.tetrahedral_after
    }
}

fn ser_display<S: serde::Serializer, T: std::fmt::Display>(
    v: &T,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// Compares `vol(D+t) / vol(D)` with `(1 + 6t/S)^3`, squared and cleared.
pub fn lengthen_check(d: &[i64; 6], t: i64) -> Result<LengthenOutcome> {
    if t <= 0 {
        return Err(Error::InvalidArgument(format!("increment {t} is not positive")));
    }
    if !is_tetrahedral_i64(d) {
        return Err(Error::NotTetrahedral);
    }
    let f = build_f();
    let s: i64 = d.iter().sum();
    let longer = d.map(|x| x + t);
    let lhs = f.evaluate_i64(&longer)? * BigInt::from(s).pow(6);
    let rhs = f.evaluate_i64(d)? * BigInt::from(s + 6 * t).pow(6);
    Ok(LengthenOutcome {
        list: *d,
        t,
        equality: lhs == rhs,
        lhs,
        rhs,
        tetrahedral_after: is_tetrahedral_i64(&longer),
    })
}

/// Squared form of the strict triangle inequality: for squared sides
/// `x, y, z`, `2(xy+yz+zx) - (x^2+y^2+z^2)` is sixteen times the squared area.
pub fn heron_positive(x: &BigInt, y: &BigInt, z: &BigInt) -> bool {
    let two = BigInt::from(2);
    let h = &two * (x * y + y * z + z * x) - (x * x + y * y + z * z);
    h.is_positive()
}

fn faces_ok(q: &[BigInt]) -> bool {
    FACES
        .iter()
        .all(|&[a, b, c]| heron_positive(&q[a], &q[b], &q[c]))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AppendixOutcome {
    pub a: [i64; 6],
    pub b: [i64; 6],
    /// `fhat(A^2)`
    #[serde(serialize_with = "ser_display")]
    pub fa: BigInt,
    /// `fhat(A^2 + B^2)`
    #[serde(serialize_with = "ser_display")]
    pub fc: BigInt,
    pub faces: bool,
}

impl AppendixOutcome {
    pub fn holds(&self) -> bool {
        self.fa.is_positive() && self.fc > self.fa && self.faces
    }
}

/// The list `sqrt(A^2 + B^2)` is tetrahedral and encloses more volume than `A`.
pub fn appendix_check(a: &[i64; 6], b: &[i64; 6]) -> Result<AppendixOutcome> {
    if !is_tetrahedral_i64(a) || !is_tetrahedral_i64(b) {
        return Err(Error::NotTetrahedral);
    }
    let fhat = build_f_on_squares();
    let sq: Vec<BigInt> = a.iter().map(|&x| BigInt::from(x * x)).collect();
    let comb: Vec<BigInt> = a
        .iter()
        .zip(b)
        .map(|(&x, &y)| BigInt::from(x * x + y * y))
        .collect();
    Ok(AppendixOutcome {
        a: *a,
        b: *b,
        fa: fhat.evaluate(&sq)?,
        fc: fhat.evaluate(&comb)?,
        faces: faces_ok(&comb),
    })
}

/// Reads a tetrahedral list `D` as squared lengths: `sqrt(D)` must be tetrahedral.
pub fn square_root_check(d: &[i64; 6]) -> Result<bool> {
    if !is_tetrahedral_i64(d) {
        return Err(Error::NotTetrahedral);
    }
    let q: Vec<BigInt> = d.iter().map(|&x| x.into()).collect();
    let v = build_f_on_squares().evaluate(&q)?;
    Ok(v.is_positive() && faces_ok(&q))
}

/// A uniformly drawn tetrahedral list with entries in `[1, max]`, by rejection.
pub fn random_tetrahedral(rng: &mut ChaCha8Rng, max: i64) -> [i64; 6] {
    loop {
        let d: [i64; 6] = std::array::from_fn(|_| rng.gen_range(1..=max));
        if is_tetrahedral_i64(&d) {
            return d;
        }
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct SuiteReport {
    pub name: String,
    pub seed: u64,
    pub trials: usize,
    pub passed: usize,
    pub equalities: usize,
    pub failures: Vec<String>,
}

impl SuiteReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty() && self.passed == self.trials
    }

    pub fn summary(&self) -> String {
        let mut s = format!(
            "{}: {}/{} passed (seed {}, equalities {})\n",
            self.name, self.passed, self.trials, self.seed, self.equalities
        );
        for f in &self.failures {
            s.push_str(&format!("  FAIL {f}\n"));
        }
        s
    }
}

/// Unit lengthening on `trials` random lists with entries in `[1, 100]`.
pub fn lengthen_suite(trials: usize, seed: u64) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rep = SuiteReport {
        name: "lengthen".into(),
        seed,
        trials,
        ..Default::default()
    };
    for _ in 0..trials {
        let d = random_tetrahedral(&mut rng, 100);
        let out = lengthen_check(&d, 1)?;
        if out.holds() {
            rep.passed += 1;
        } else {
            rep.failures.push(format!("{d:?}"));
        }
        rep.equalities += out.equality as usize;
    }
    Ok(rep)
}

/// Sums of squared lists on `trials` random pairs with entries in `[1, 50]`.
pub fn appendix_suite(trials: usize, seed: u64) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rep = SuiteReport {
        name: "appendix".into(),
        seed,
        trials,
        ..Default::default()
    };
    for _ in 0..trials {
        let a = random_tetrahedral(&mut rng, 50);
        let b = random_tetrahedral(&mut rng, 50);
        if appendix_check(&a, &b)?.holds() {
            rep.passed += 1;
        } else {
            rep.failures.push(format!("{a:?} {b:?}"));
        }
    }
    Ok(rep)
}

/// Square roots of random tetrahedral lists with entries in `[1, 100]`.
pub fn square_root_suite(trials: usize, seed: u64) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rep = SuiteReport {
        name: "square-root".into(),
        seed,
        trials,
        ..Default::default()
    };
    for _ in 0..trials {
        let d = random_tetrahedral(&mut rng, 100);
        if square_root_check(&d)? {
            rep.passed += 1;
        } else {
            rep.failures.push(format!("{d:?}"));
        }
    }
    Ok(rep)
}

/// `fhat(A^2 + B^2) / fhat(A^2)` as an exact ratio when it is an integer.
pub fn integer_ratio(out: &AppendixOutcome) -> Option<BigInt> {
    if out.fa.is_zero() || !(&out.fc % &out.fa).is_zero() {
        return None;
    }
    Some(&out.fc / &out.fa)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn regular_lists_give_equality() {
        for a in [1, 2, 7, 30] {
            let out = lengthen_check(&[a; 6], 1).unwrap();
            assert!(out.equality && out.holds());
            let out = lengthen_check(&[a; 6], 5).unwrap();
            assert!(out.equality);
        }
    }

    #[test]
    fn irregular_list_is_strict() {
        let out = lengthen_check(&[3, 4, 5, 4, 5, 3], 1).unwrap();
        assert!(out.holds());
        assert!(!out.equality);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            lengthen_check(&[1, 1, 1, 1, 1, 5], 1),
            Err(Error::NotTetrahedral)
        ));
        assert!(lengthen_check(&[1; 6], 0).is_err());
        assert!(appendix_check(&[1, 1, 1, 1, 1, 5], &[1; 6]).is_err());
    }

    #[test]
    fn regular_pair_ratio_is_eight() {
        let out = appendix_check(&[3; 6], &[3; 6]).unwrap();
        assert!(out.holds());
        assert_eq!(integer_ratio(&out), Some(BigInt::from(8)));
    }

    #[test]
    fn heron_matches_triangle_inequality() {
        // 3-4-5 right triangle, degenerate 1-1-2, and an obtuse one.
        let sq = |a: i64, b: i64, c: i64| {
            heron_positive(&(a * a).into(), &(b * b).into(), &(c * c).into())
        };
        assert!(sq(3, 4, 5));
        assert!(!sq(1, 1, 2));
        assert!(sq(2, 2, 3));
        assert!(!sq(1, 2, 4));
    }

    #[test]
    fn small_suites_pass() {
        assert!(lengthen_suite(100, 5).unwrap().ok());
        assert!(appendix_suite(50, 5).unwrap().ok());
        assert!(square_root_suite(50, 5).unwrap().ok());
    }

    #[test]
    fn suites_are_deterministic() {
        let a = lengthen_suite(20, 9).unwrap().summary();
        let b = lengthen_suite(20, 9).unwrap().summary();
        assert_eq!(a, b);
    }
}
