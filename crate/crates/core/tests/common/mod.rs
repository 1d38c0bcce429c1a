//! Independent oracles shared by the integration tests.
#![allow(dead_code, clippy::needless_range_loop)]

use codebounds::cw::CwProvider;
use codebounds::holes::{
    brute_force_holes, e_class_size, hdi_bound, holes_distribution, nc_distribution, DistCaps, ExplicitCode,
};
use codebounds::lp::{Constraint, LinearProgram, Relation};
use codebounds::scalar::int;
use codebounds::scheme::{binomial, sphere_volume, Scheme};
use codebounds::{Error, Rational};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::Rng;

/// Rows `a x (rel) b` covering constraints and finite variable bounds.
fn all_rows(lp: &LinearProgram) -> Vec<(Vec<Rational>, Relation, Rational)> {
    let n = lp.var_count;
    let mut rows: Vec<_> = lp
        .constraints
        .iter()
        .map(|c| (c.coefficients.clone(), c.relation, c.rhs.clone()))
        .collect();
    for j in 0..n {
        let unit = |v: i64| {
            let mut r = vec![Rational::zero(); n];
            r[j] = int(v);
            r
        };
        if let Some(l) = &lp.lower[j] {
            rows.push((unit(1), Relation::Ge, l.clone()));
        }
        if let Some(u) = &lp.upper[j] {
            rows.push((unit(1), Relation::Le, u.clone()));
        }
    }
    rows
}

/// Unique solution of a square system, by exact Gauss-Jordan elimination.
fn solve_square(mut m: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, pivot);
        b.swap(col, pivot);
        let inv = Rational::one() / &m[col][col];
        for k in col..n {
            m[col][k] = &m[col][k] * &inv;
        }
        b[col] = &b[col] * &inv;
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for k in col..n {
                    let t = &f * &m[col][k];
                    m[r][k] -= t;
                }
                let t = &f * &b[col];
                b[r] -= t;
            }
        }
    }
    Some(b)
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Maximum over all feasible basic points, `None` if there is none. Only
/// meaningful for programs whose feasible region is bounded.
pub fn vertex_max(lp: &LinearProgram) -> Option<Rational> {
    let n = lp.var_count;
    let rows = all_rows(lp);
    let mut best: Option<Rational> = None;
    for pick in combinations(rows.len(), n) {
        let m = pick.iter().map(|&r| rows[r].0.clone()).collect();
        let b = pick.iter().map(|&r| rows[r].2.clone()).collect();
        if let Some(x) = solve_square(m, b) {
            if lp.is_feasible(&x) {
                let v = lp.objective_at(&x);
                if best.as_ref().is_none_or(|b| v > *b) {
                    best = Some(v);
                }
            }
        }
    }
    best
}

/// A random program over a box, so the region is bounded (possibly empty).
pub fn random_boxed_lp(rng: &mut impl Rng) -> LinearProgram {
    let n = rng.gen_range(1..=3);
    let m = rng.gen_range(1..=4);
    let mut lp = LinearProgram::new(n);
    let small = |rng: &mut dyn rand::RngCore| int(rng.gen_range(-4..=4));
    lp.objective = (0..n).map(|_| small(rng)).collect();
    for j in 0..n {
        if rng.gen_bool(0.3) {
            lp.lower[j] = Some(int(rng.gen_range(-3..=0)));
        }
        lp.upper[j] = Some(int(rng.gen_range(1..=6)));
    }
    for _ in 0..m {
        let coeffs = (0..n).map(|_| small(rng)).collect();
        let relation = match rng.gen_range(0..6) {
            0 => Relation::Eq,
            1 | 2 => Relation::Ge,
            _ => Relation::Le,
        };
        let rhs = Rational::new(BigInt::from(rng.gen_range(-6..=12)), BigInt::from(rng.gen_range(1..=3)));
        lp.add(Constraint::new(coeffs, relation, rhs));
    }
    lp
}

/// `2^n / V(n,e)` straight from binomials.
pub fn sphere_value(n: u32, e: u32) -> Rational {
    let v: BigInt = (0..=e).map(|i| binomial(n, i.into())).sum();
    Rational::new(BigInt::one() << n, v)
}

pub fn c(n: u32, k: u32) -> Rational {
    Rational::from_integer(binomial(n, k.into()))
}

fn pow2(n: u32) -> Rational {
    Rational::from_integer(BigInt::one() << n)
}

fn vol(n: u32, e: u32) -> Rational {
    (0..=e).map(|i| c(n, i)).sum()
}

/// Every hole identity checked against brute force on one code. Returns the
/// list of disagreements, empty when all hold.
pub fn identity_mismatches(code: &ExplicitCode) -> Vec<String> {
    let n = code.length();
    let e = code.radius();
    let s = Scheme::hamming(n);
    let m = code.len() as u64;
    let dist = code.distance_distribution();
    let report = brute_force_holes(code).unwrap();
    let mut bad = Vec::new();

    let predicted = (BigInt::one() << n) - BigInt::from(m) * sphere_volume(n, e);
    if BigInt::from(report.hole_count) != predicted {
        bad.push(format!("hole count {} vs {predicted}", report.hole_count));
    }
    let formula = holes_distribution(&s, e, m, &dist).unwrap();
    let via_nc = nc_distribution(&s, e, &report);
    for (i, &b) in report.d.iter().enumerate() {
        if formula[i] != Rational::from_integer(BigInt::from(b)) {
            bad.push(format!("D_{i}: formula {} vs brute force {b}", formula[i]));
        }
        if via_nc[i] != BigInt::from(b) {
            bad.push(format!("D_{i}: neighbour-count form {} vs brute force {b}", via_nc[i]));
        }
    }
    let total: u128 = report.d.iter().sum();
    if total != u128::from(report.hole_count).pow(2) {
        bad.push(format!("sum of D_i is {total}"));
    }
    for t in 0..=e {
        let want = e_class_size(&s, e, t, m, &dist).unwrap();
        if want != int(report.e_class_size(n, t) as i64) {
            bad.push(format!("|E_(n-{t})| formula {want} vs {}", report.e_class_size(n, t)));
        }
    }
    if report.hole_count == 0 && formula.iter().any(|x| !x.is_zero()) {
        bad.push("perfect code with nonzero D".into());
    }
    bad.into_iter().map(|b| format!("n={n} M={m}: {b}")).collect()
}

fn same(got: Result<Rational, Error>, num: Rational, den: Rational, what: String, bad: &mut Vec<String>) {
    match got {
        Ok(g) if den.is_positive() && g == num.clone() / den.clone() => {}
        Err(Error::VacuousBound(_)) if !den.is_positive() => {}
        g => bad.push(format!("{what}: hdi {g:?}, direct {num}/({den})")),
    }
}

/// The hole-distance bound with the three classical index sequences, against
/// direct evaluation of the sphere packing, Johnson and improved Johnson
/// formulas.
pub fn recovery_mismatches(p: &CwProvider, e: u32, n: u32) -> Vec<String> {
    let a = |n, d, w| int(p.cw_upper(n, d, w).unwrap().value as i64);
    let s = Scheme::hamming(n);
    let pi = |i, j, k| Rational::from_integer(s.intersection_number(i, j, k).unwrap());
    let zero = vec![Rational::zero(); n as usize + 1];
    let mut bad = Vec::new();

    let mut q = zero.clone();
    q[0] = int(1);
    let got = hdi_bound(&s, e, &q, &int(1), &DistCaps::default());
    same(got, pow2(n), vol(n, e), format!("sphere n={n} e={e}"), &mut bad);

    let mut q = zero.clone();
    q[1] = int(1);
    let far = a(n, 2 * e + 2, 2 * e + 1);
    let near = a(n, 2 * e + 2, e + 1);
    let mut caps = DistCaps::default();
    caps.per_index.insert(2 * e as usize + 1, far.clone());
    let xi = pi(1, e, e + 1) * &near;
    let den = vol(n, e) + (c(n, e + 1) - c(2 * e + 1, e + 1) * &far) / &near;
    same(hdi_bound(&s, e, &q, &xi, &caps), pow2(n), den, format!("Johnson n={n} e={e}"), &mut bad);

    let mut q = zero;
    q[1] = (pi(2, e, e + 2) - pi(2, e - 1, e + 1) - pi(2, e, e + 1)) / pi(1, e, e + 1);
    q[2] = int(1);
    let far = a(n + 1, 2 * e + 2, 2 * e + 2);
    let near = a(n + 1, 2 * e + 2, e + 2);
    let mut caps = DistCaps::default();
    caps.groups.push((vec![2 * e as usize + 1, 2 * e as usize + 2], far.clone()));
    let xi = pi(2, e, e + 2) * &near;
    let den = vol(n, e) + (c(n + 1, e + 2) - c(2 * e + 2, e + 2) * &far) / &near;
    same(hdi_bound(&s, e, &q, &xi, &caps), pow2(n), den, format!("improved Johnson n={n} e={e}"), &mut bad);
    bad
}
