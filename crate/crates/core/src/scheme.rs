//! Hamming and Johnson association schemes.
//!
//! Everything here is exact integer or rational arithmetic. Binomials vanish
//! outside `0 <= k <= n`, which the intersection-number sums rely on.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::scalar::{big, Rational};
use crate::Error;

/// `C(n, k)`, zero when `k` is out of range.
pub fn binomial(n: u32, k: i64) -> BigInt {
    binom(i64::from(n), k)
}

/// Binomial with signed arguments; zero whenever `n < 0`, `k < 0` or `k > n`.
pub(crate) fn binom(n: i64, k: i64) -> BigInt {
    if n < 0 || k < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for j in 0..k {
        acc *= n - j;
        acc /= j + 1;
    }
    acc
}

/// `V(n, e)`: number of words within Hamming distance `e` of a fixed word.
pub fn sphere_volume(n: u32, e: u32) -> BigInt {
    (0..=i64::from(e.min(n))).map(|j| binomial(n, j)).sum()
}

/// Krawtchouk polynomial `P_k(i)` for length `n`.
pub fn krawtchouk(n: u32, k: u32, i: u32) -> BigInt {
    let (n, k, i) = (i64::from(n), i64::from(k), i64::from(i));
    (0..=k)
        .map(|j| {
            let t = binom(i, j) * binom(n - i, k - j);
            if j % 2 == 0 {
                t
            } else {
                -t
            }
        })
        .sum()
}

/// Eberlein polynomial: eigenvalue of distance-`k` relation of J(n,w) on eigenspace `x`.
pub fn eberlein(n: u32, w: u32, k: u32, x: u32) -> BigInt {
    let (n, w, k, x) = (i64::from(n), i64::from(w), i64::from(k), i64::from(x));
    (0..=k)
        .map(|j| {
            let t = binom(x, j) * binom(w - x, k - j) * binom(n - w - x, k - j);
            if j % 2 == 0 {
                t
            } else {
                -t
            }
        })
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SchemeKind {
    Hamming,
    Johnson,
}

/// A metric association scheme on binary words.
///
/// For Johnson schemes the distance is half the Hamming distance, and
/// `class_count` is `min(w, n - w)` since larger distances have no pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Scheme {
    pub kind: SchemeKind,
    pub n: u32,
    pub w: u32,
}

impl Scheme {
    pub fn hamming(n: u32) -> Self {
        Scheme {
            kind: SchemeKind::Hamming,
            n,
            w: 0,
        }
    }

    pub fn johnson(n: u32, w: u32) -> Result<Self, Error> {
        if w > n {
            return Err(Error::InvalidParameters(format!(
                "Johnson scheme needs w <= n, got n={n} w={w}"
            )));
        }
        Ok(Scheme {
            kind: SchemeKind::Johnson,
            n,
            w,
        })
    }

    pub fn class_count(&self) -> u32 {
        match self.kind {
            SchemeKind::Hamming => self.n,
            SchemeKind::Johnson => self.w.min(self.n - self.w),
        }
    }

    pub fn point_count(&self) -> BigInt {
        match self.kind {
            SchemeKind::Hamming => BigInt::one() << self.n,
            SchemeKind::Johnson => binomial(self.n, self.w.into()),
        }
    }

    fn check(&self, i: u32) -> Result<(), Error> {
        let max = self.class_count();
        if i > max {
            return Err(Error::IndexOutOfRange {
                index: i as usize,
                max: max as usize,
            });
        }
        Ok(())
    }

    pub fn valency(&self, i: u32) -> Result<BigInt, Error> {
        self.check(i)?;
        Ok(self.valency_unchecked(i))
    }

    pub(crate) fn valency_unchecked(&self, i: u32) -> BigInt {
        let i = i64::from(i);
        match self.kind {
            SchemeKind::Hamming => binom(self.n.into(), i),
            SchemeKind::Johnson => {
                let (n, w) = (i64::from(self.n), i64::from(self.w));
                binom(w, i) * binom(n - w, i)
            }
        }
    }

    /// `p_{i,j}^k`: points at distance `i` from `x` and `j` from `y` when `d(x,y) = k`.
    pub fn intersection_number(&self, i: u32, j: u32, k: u32) -> Result<BigInt, Error> {
        self.check(i)?;
        self.check(j)?;
        self.check(k)?;
        Ok(self.intersection_unchecked(i, j, k))
    }

    pub(crate) fn intersection_unchecked(&self, i: u32, j: u32, k: u32) -> BigInt {
        let (i, j, k) = (i64::from(i), i64::from(j), i64::from(k));
        let n = i64::from(self.n);
        match self.kind {
            SchemeKind::Hamming => {
                if (i + j - k).rem_euclid(2) != 0 {
                    return BigInt::zero();
                }
                let a = i - j + k;
                let b = i + j - k;
                if a < 0 || b < 0 {
                    return BigInt::zero();
                }
                binom(k, a / 2) * binom(n - k, b / 2)
            }
            SchemeKind::Johnson => {
                let w = i64::from(self.w);
                (0..=(w - k).max(-1))
                    .map(|l| {
                        binom(w - k, l)
                            * binom(k, w - i - l)
                            * binom(k, w - j - l)
                            * binom(n - w - k, i + j + l - w)
                    })
                    .sum()
            }
        }
    }

    /// First and second eigenvalue matrices, checked against `P·Q = v·I`.
    pub fn eigen_tables(&self) -> Result<EigenTables, Error> {
        let d = self.class_count();
        let size = d as usize + 1;
        let (p, m): (Vec<Vec<BigInt>>, Vec<BigInt>) = match self.kind {
            SchemeKind::Hamming => {
                let p = (0..=d)
                    .map(|k| (0..=d).map(|i| krawtchouk(self.n, k, i)).collect())
                    .collect();
                let m = (0..=d).map(|k| binomial(self.n, k.into())).collect();
                (p, m)
            }
            SchemeKind::Johnson => {
                let w = self.w.min(self.n - self.w);
                let p = (0..=d)
                    .map(|k| (0..=d).map(|i| eberlein(self.n, w, k, i)).collect())
                    .collect();
                let m = (0..=d)
                    .map(|k| {
                        binomial(self.n, k.into()) - binomial(self.n, i64::from(k) - 1)
                    })
                    .collect();
                (p, m)
            }
        };
        let valencies: Vec<BigInt> = (0..=d).map(|i| self.valency_unchecked(i)).collect();
        // Q[k][i] = m_k * P[i][k] / v_i
        let q: Vec<Vec<Rational>> = (0..size)
            .map(|k| {
                (0..size)
                    .map(|i| {
                        Rational::new(m[k].clone() * p[i][k].clone(), valencies[i].clone())
                    })
                    .collect()
            })
            .collect();
        let p: Vec<Vec<Rational>> = p
            .into_iter()
            .map(|row| row.into_iter().map(big).collect())
            .collect();
        let tables = EigenTables {
            p,
            q,
            multiplicities: m,
        };
        tables.validate(&valencies, &self.point_count())?;
        Ok(tables)
    }
}

/// `p[k][i]`: eigenvalue of relation `k` on eigenspace `i`.
/// `q[k][i]`: second eigenvalue, eigenspace `k` and relation `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenTables {
    pub p: Vec<Vec<Rational>>,
    pub q: Vec<Vec<Rational>>,
    pub multiplicities: Vec<BigInt>,
}

impl EigenTables {
    fn validate(&self, valencies: &[BigInt], points: &BigInt) -> Result<(), Error> {
        let size = valencies.len();
        for k in 0..size {
            if self.p[k][0] != big(valencies[k].clone()) {
                return Err(Error::Duality(format!("P[{k}][0] is not the valency")));
            }
            if self.q[k][0] != big(self.multiplicities[k].clone()) {
                return Err(Error::Duality(format!("Q[{k}][0] is not the multiplicity")));
            }
        }
        let v = big(points.clone());
        for r in 0..size {
            for c in 0..size {
                let s: Rational = (0..size).map(|t| &self.p[r][t] * &self.q[t][c]).sum();
                let want = if r == c { v.clone() } else { Rational::zero() };
                if s != want {
                    return Err(Error::Duality(format!("(P·Q)[{r}][{c}] = {s}")));
                }
            }
        }
        Ok(())
    }
}
