//! Holes of a code and their distance distribution.
//!
//! A hole of a code with minimum distance `2e+1` is a word at distance more
//! than `e` from every codeword. The distance distribution of the holes is a
//! linear function of the code's own distance distribution; the coefficients
//! of that function are built here from intersection numbers, and a
//! brute-force enumerator checks them on explicit codes.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::lp::{self, Constraint, LinearProgram, Relation};
use crate::scalar::{big, int, Rational};
use crate::scheme::{Scheme, SchemeKind};
use crate::Error;

/// Longest code accepted by [`brute_force_holes`].
pub const MAX_BRUTE_FORCE_LENGTH: u32 = 22;

/// A binary code given by its words, with packing radius `e`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExplicitCode {
    n: u32,
    words: Vec<u64>,
    e: u32,
}

impl ExplicitCode {
    /// Checks that words are distinct and pairwise at distance at least `2e+1`.
    pub fn new(n: u32, mut words: Vec<u64>, e: u32) -> Result<Self, Error> {
        if n == 0 || n > 63 {
            return Err(Error::InvalidParameters(format!("length {n}")));
        }
        if words.is_empty() {
            return Err(Error::InvalidParameters("a code needs at least one word".into()));
        }
        if let Some(w) = words.iter().find(|&&w| w >> n != 0) {
            return Err(Error::InvalidParameters(format!("word {w:#b} longer than {n}")));
        }
        words.sort_unstable();
        if words.windows(2).any(|p| p[0] == p[1]) {
            return Err(Error::InvalidParameters("duplicate codeword".into()));
        }
        if let Some(d) = min_distance(&words) {
            if d < 2 * e + 1 {
                return Err(Error::InvalidParameters(format!(
                    "minimum distance {d} is below 2e+1 = {}",
                    2 * e + 1
                )));
            }
        }
        Ok(ExplicitCode { n, words, e })
    }

    /// Radius taken from the minimum distance, `floor((d-1)/2)`. A single
    /// word has no pairs; its radius is then `e_if_single`.
    pub fn with_inferred_radius(n: u32, words: Vec<u64>, e_if_single: u32) -> Result<Self, Error> {
        let mut sorted = words.clone();
        sorted.sort_unstable();
        sorted.dedup();
        let e = match min_distance(&sorted) {
            Some(d) if sorted.len() == words.len() => d.saturating_sub(1) / 2,
            _ => e_if_single,
        };
        ExplicitCode::new(n, words, e)
    }

    /// Parses one word per line of `0`/`1` characters. Blank lines and `#`
    /// comments are skipped; the first word fixes the length.
    pub fn parse(text: &str) -> Result<(u32, Vec<u64>), Error> {
        let mut n = None;
        let mut words = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let err = |msg: String| Error::CodeFile { line, msg };
            if body.len() > 63 {
                return Err(err("word longer than 63 symbols".into()));
            }
            let mut w = 0u64;
            for ch in body.chars() {
                w = (w << 1)
                    | match ch {
                        '0' => 0,
                        '1' => 1,
                        c => return Err(err(format!("unexpected character {c:?}"))),
                    };
            }
            let len = body.len() as u32;
            match n {
                None => n = Some(len),
                Some(m) if m != len => {
                    return Err(err(format!("word has length {len}, expected {m}")))
                }
                _ => {}
            }
            if words.contains(&w) {
                return Err(err("duplicate word".into()));
            }
            words.push(w);
        }
        match n {
            Some(n) => Ok((n, words)),
            None => Err(Error::CodeFile {
                line: 0,
                msg: "no words".into(),
            }),
        }
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn length(&self) -> u32 {
        self.n
    }

    pub fn radius(&self) -> u32 {
        self.e
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// Normalized distance distribution `A_i`.
    pub fn distance_distribution(&self) -> DistanceDistribution {
        let mut counts = vec![0u64; self.n as usize + 1];
        for &a in &self.words {
            for &b in &self.words {
                counts[(a ^ b).count_ones() as usize] += 1;
            }
        }
        let m = self.words.len() as i64;
        DistanceDistribution {
            a: counts
                .into_iter()
                .map(|c| Rational::new(BigInt::from(c), BigInt::from(m)))
                .collect(),
        }
    }
}

fn min_distance(words: &[u64]) -> Option<u32> {
    let mut best = None;
    for (i, &a) in words.iter().enumerate() {
        for &b in &words[i + 1..] {
            let d = (a ^ b).count_ones();
            best = Some(best.map_or(d, |x: u32| x.min(d)));
        }
    }
    best
}

/// Greedy (lexicode-style) code: scan words in a given order and keep each one
/// at distance at least `d` from all kept words.
pub fn greedy_code(n: u32, d: u32, order: impl IntoIterator<Item = u64>) -> Vec<u64> {
    let mut kept: Vec<u64> = Vec::new();
    for w in order {
        if w >> n != 0 {
            continue;
        }
        if kept.iter().all(|&c| (c ^ w).count_ones() >= d) {
            kept.push(w);
        }
    }
    kept
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistanceDistribution {
    #[serde(with = "crate::scalar::serde_text::vec")]
    pub a: Vec<Rational>,
}

/// Result of enumerating every word of the space.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HoleReport {
    pub hole_count: u64,
    /// Ordered hole pairs at each distance.
    pub d: Vec<u128>,
    /// `(distance, c) -> number of holes with exactly c codewords at that distance`, `c >= 1`.
    pub nc_histogram: BTreeMap<(u32, u32), u64>,
}

impl HoleReport {
    /// Total `Σ_h NC(h, C, k)`.
    pub fn nc_total(&self, k: u32) -> u64 {
        self.nc_histogram
            .range((k, 0)..=(k, u32::MAX))
            .map(|(&(_, c), &cnt)| u64::from(c) * cnt)
            .sum()
    }

    /// `|E_{n-t}|`: holes with exactly one codeword at distance `n - t`.
    pub fn e_class_size(&self, n: u32, t: u32) -> u64 {
        self.nc_histogram.get(&(n - t, 1)).copied().unwrap_or(0)
    }
}

/// Enumerates all `2^n` words. Holes' pair counts come from an integer
/// Walsh-Hadamard autocorrelation of the hole indicator.
pub fn brute_force_holes(code: &ExplicitCode) -> Result<HoleReport, Error> {
    let n = code.n;
    if n > MAX_BRUTE_FORCE_LENGTH {
        return Err(Error::Budget(format!(
            "length {n} exceeds the enumeration limit {MAX_BRUTE_FORCE_LENGTH}"
        )));
    }
    let size = 1usize << n;
    let mut indicator = vec![0i128; size];
    let mut hist: BTreeMap<(u32, u32), u64> = BTreeMap::new();
    let mut per_distance = vec![0u32; n as usize + 1];
    let mut holes = 0u64;
    for x in 0..size as u64 {
        per_distance.iter_mut().for_each(|c| *c = 0);
        let mut nearest = u32::MAX;
        for &c in &code.words {
            let d = (x ^ c).count_ones();
            per_distance[d as usize] += 1;
            nearest = nearest.min(d);
        }
        if nearest > code.e {
            holes += 1;
            indicator[x as usize] = 1;
            for (k, &c) in per_distance.iter().enumerate() {
                if c > 0 {
                    *hist.entry((k as u32, c)).or_insert(0) += 1;
                }
            }
        }
    }
    walsh_hadamard(&mut indicator);
    for v in indicator.iter_mut() {
        *v *= *v;
    }
    walsh_hadamard(&mut indicator);
    let mut d = vec![0u128; n as usize + 1];
    for (z, v) in indicator.iter().enumerate() {
        let pairs = v >> n;
        d[(z as u64).count_ones() as usize] += pairs as u128;
    }
    Ok(HoleReport {
        hole_count: holes,
        d,
        nc_histogram: hist,
    })
}

fn walsh_hadamard(v: &mut [i128]) {
    let mut h = 1;
    while h < v.len() {
        for i in (0..v.len()).step_by(2 * h) {
            for j in i..i + h {
                let (a, b) = (v[j], v[j + h]);
                v[j] = a + b;
                v[j + h] = a - b;
            }
        }
        h *= 2;
    }
}

fn sphere(s: &Scheme, e: u32) -> BigInt {
    (0..=e.min(s.class_count())).map(|j| s.valency_unchecked(j)).sum()
}

/// Coefficients `c_k` with `R(C,i) = Σ_k c_k A_k`.
pub fn r_coefficients(s: &Scheme, e: u32, i: u32) -> Result<Vec<BigInt>, Error> {
    let top = s.class_count();
    if i > top {
        return Err(Error::IndexOutOfRange {
            index: i as usize,
            max: top as usize,
        });
    }
    if e < 1 {
        return Err(Error::InvalidParameters("radius must be at least 1".into()));
    }
    let e = e.min(top);
    // reach[l] = Σ_{j=1}^{e} p_{i,j}^l
    let reach: Vec<BigInt> = (0..=top)
        .map(|l| (1..=e).map(|j| s.intersection_unchecked(i, j, l)).sum())
        .collect();
    Ok((0..=top)
        .map(|k| {
            let mut c = BigInt::from(i64::from(i == k));
            let near: BigInt = (1..=e).map(|j| s.intersection_unchecked(i, j, k)).sum();
            c += near * 2;
            for l in 1..=top {
                if reach[l as usize].is_zero() {
                    continue;
                }
                let around: BigInt = (1..=e).map(|m| s.intersection_unchecked(l, m, k)).sum();
                c += around * &reach[l as usize];
            }
            c
        })
        .collect())
}

fn dot(c: &[BigInt], a: &[Rational]) -> Rational {
    c.iter().zip(a).map(|(c, a)| big(c.clone()) * a).sum()
}

/// `D_i = v v_i + |C| (R(C,i) - 2 V v_i)` for every `i`.
pub fn holes_distribution(
    s: &Scheme,
    e: u32,
    code_size: u64,
    dist: &DistanceDistribution,
) -> Result<Vec<Rational>, Error> {
    let top = s.class_count();
    if dist.a.len() != top as usize + 1 {
        return Err(Error::InvalidParameters("distribution length mismatch".into()));
    }
    let v = big(s.point_count());
    let vol = big(sphere(s, e));
    let m = int(code_size as i64);
    (0..=top)
        .map(|i| {
            let vi = big(s.valency_unchecked(i));
            let r = dot(&r_coefficients(s, e, i)?, &dist.a);
            Ok(&v * &vi + &m * (r - int(2) * &vol * &vi))
        })
        .collect()
}

/// `Σ q_i D_i` evaluated through the distance distribution.
pub fn weighted_hole_sum(
    s: &Scheme,
    e: u32,
    code_size: u64,
    dist: &DistanceDistribution,
    q: &[Rational],
) -> Result<Rational, Error> {
    let top = s.class_count();
    if q.len() != top as usize + 1 {
        return Err(Error::InvalidParameters("q must have one entry per class".into()));
    }
    let v = big(s.point_count());
    let vol = big(sphere(s, e));
    let m = int(code_size as i64);
    let mut left = Rational::zero();
    let mut right = Rational::zero();
    for (i, qi) in q.iter().enumerate() {
        if qi.is_zero() {
            continue;
        }
        let vi = big(s.valency_unchecked(i as u32));
        left += qi * &vi;
        let r = dot(&r_coefficients(s, e, i as u32)?, &dist.a);
        right += qi * (r - int(2) * &vol * &vi);
    }
    Ok(v * left + m * right)
}

/// `D_i` recomputed hole by hole from `NC` totals:
/// `|H| v_i - Σ_{k=e+1}^{e+i} (Σ_{j<=e} p_{i,j}^k) Σ_h NC(h,C,k)`.
pub fn nc_distribution(s: &Scheme, e: u32, report: &HoleReport) -> Vec<BigInt> {
    let top = s.class_count();
    (0..=top)
        .map(|i| {
            let mut d = BigInt::from(report.hole_count) * s.valency_unchecked(i);
            for k in (e + 1)..=(e + i).min(top) {
                let inner: BigInt = (0..=e).map(|j| s.intersection_unchecked(i, j, k)).sum();
                d -= inner * BigInt::from(report.nc_total(k));
            }
            d
        })
        .collect()
}

/// `Σ_{i=0}^{e+t} A_{n-i} Σ_{j=0}^{e} p_{n-t,j}^{n-i}` as coefficients on `A`.
pub fn far_shell_coefficients(s: &Scheme, e: u32, t: u32) -> Vec<BigInt> {
    let n = s.class_count();
    let mut c = vec![BigInt::zero(); n as usize + 1];
    for i in 0..=(e + t).min(n) {
        let k = n - i;
        c[k as usize] = (0..=e)
            .map(|j| s.intersection_unchecked(n - t, j, k))
            .sum();
    }
    c
}

/// Predicted `|E_{n-t}| = |C| (v_{n-t} - Σ ...)`.
pub fn e_class_size(
    s: &Scheme,
    e: u32,
    t: u32,
    code_size: u64,
    dist: &DistanceDistribution,
) -> Result<Rational, Error> {
    if s.kind != SchemeKind::Hamming || t > e {
        return Err(Error::InvalidParameters("E classes need a Hamming scheme and t <= e".into()));
    }
    let n = s.n;
    let inner = dot(&far_shell_coefficients(s, e, t), &dist.a);
    Ok(int(code_size as i64) * (big(s.valency_unchecked(n - t)) - inner))
}

/// Every hole identity checked on one explicit code.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub n: u32,
    pub e: u32,
    pub code_size: u64,
    /// Counted by enumeration.
    pub hole_count: u64,
    /// `2^n - |C| V(n,e)`.
    pub predicted_hole_count: u64,
    /// Brute-force `D_i`.
    pub brute_force: Vec<u128>,
    /// `D_i` from the code's distance distribution, as `p/q` text.
    pub from_distribution: Vec<String>,
    /// `D_i` rebuilt from the `NC` totals.
    pub from_nc: Vec<String>,
    /// `(t, counted |E_{n-t}|, predicted)` for `t = 0..=e`.
    pub e_classes: Vec<(u32, u64, String)>,
    pub sum_is_square: bool,
    pub holds: bool,
}

/// Checks the hole count, both closed forms for `D_i` and the `E` classes
/// against enumeration of the whole space.
pub fn verify_identities(code: &ExplicitCode) -> Result<IdentityReport, Error> {
    let n = code.n;
    let e = code.e;
    let report = brute_force_holes(code)?;
    let s = Scheme::hamming(n);
    let dist = code.distance_distribution();
    let m = code.len() as u64;
    let predicted = s.point_count() - BigInt::from(m) * sphere(&s, e);
    let predicted = u64::try_from(predicted).unwrap_or(u64::MAX);
    let formula = holes_distribution(&s, e, m, &dist)?;
    let via_nc = nc_distribution(&s, e, &report);
    let as_rational = |x: u128| big(BigInt::from(x));
    let formula_ok = formula.iter().zip(&report.d).all(|(f, &b)| *f == as_rational(b));
    let nc_ok = via_nc.iter().zip(&report.d).all(|(l, &b)| *l == BigInt::from(b));
    let mut e_classes = Vec::new();
    let mut classes_ok = true;
    for t in 0..=e.min(n) {
        let want = e_class_size(&s, e, t, m, &dist)?;
        let got = report.e_class_size(n, t);
        classes_ok &= want == int(got as i64);
        e_classes.push((t, got, crate::scalar::to_text(&want)));
    }
    let total: u128 = report.d.iter().sum();
    let sum_is_square = total == u128::from(report.hole_count).pow(2);
    let holds = report.hole_count == predicted && formula_ok && nc_ok && classes_ok && sum_is_square;
    Ok(IdentityReport {
        n,
        e,
        code_size: m,
        hole_count: report.hole_count,
        predicted_hole_count: predicted,
        from_distribution: formula.iter().map(crate::scalar::to_text).collect(),
        from_nc: via_nc.iter().map(|x| x.to_string()).collect(),
        brute_force: report.d,
        e_classes,
        sum_is_square,
        holds,
    })
}

/// Caps on distance-distribution entries used by [`hdi_bound`].
#[derive(Debug, Clone, Default, PartialEq)]
pub struct DistCaps {
    pub per_index: BTreeMap<usize, Rational>,
    /// `Σ_{k in set} A_k <= cap`.
    pub groups: Vec<(Vec<usize>, Rational)>,
}

impl DistCaps {
    /// `A_k <= A(n, 2e+2, k)` for every `k >= 2e+1`.
    pub fn from_provider(n: u32, e: u32, caps: &crate::cw::CwProvider) -> Result<Self, Error> {
        let mut out = DistCaps::default();
        for k in (2 * e + 1)..=n {
            let s = caps.cw_upper(n, 2 * e + 2, k)?;
            out.per_index.insert(k as usize, int(s.value as i64));
        }
        Ok(out)
    }
}

/// Largest value of `Σ_i q_i R(C,i)` over distributions allowed by `caps`.
pub fn max_weighted_r(s: &Scheme, e: u32, q: &[Rational], caps: &DistCaps) -> Result<Rational, Error> {
    let top = s.class_count();
    let vars = top as usize + 1;
    if q.len() != vars {
        return Err(Error::InvalidParameters("q must have one entry per class".into()));
    }
    let mut weight = vec![Rational::zero(); vars];
    for (i, qi) in q.iter().enumerate() {
        if qi.is_zero() {
            continue;
        }
        for (k, c) in r_coefficients(s, e, i as u32)?.into_iter().enumerate() {
            weight[k] += qi * big(c);
        }
    }
    let mut lp = LinearProgram::new(vars);
    lp.objective = weight;
    lp.fix(0, int(1));
    for k in 1..=(2 * e as usize).min(top as usize) {
        lp.fix(k, Rational::zero());
    }
    for (&k, cap) in &caps.per_index {
        if k < vars && k > 2 * e as usize {
            lp.upper[k] = Some(cap.clone());
        }
    }
    for (set, cap) in &caps.groups {
        let mut row = vec![Rational::zero(); vars];
        for &k in set {
            if k < vars {
                row[k] = int(1);
            }
        }
        lp.add(Constraint::new(row, Relation::Le, cap.clone()));
    }
    let sol = lp::solve(&lp)?;
    Ok(sol.optimum()?.clone())
}

/// Size bound from an HDI sequence `q`:
/// `v / (V + Σ_i q_i (V v_i - R(C,i)) / ξ)` with `R` maximized under `caps`
/// and `ξ` replaced by the caller's upper bound.
pub fn hdi_bound(
    s: &Scheme,
    e: u32,
    q: &[Rational],
    xi_upper: &Rational,
    caps: &DistCaps,
) -> Result<Rational, Error> {
    if !xi_upper.is_positive() {
        return Err(Error::VacuousBound(format!("xi upper bound {xi_upper}")));
    }
    let vol = big(sphere(s, e));
    let base: Rational = q
        .iter()
        .enumerate()
        .map(|(i, qi)| qi * &vol * big(s.valency_unchecked(i as u32)))
        .sum();
    let numerator = base - max_weighted_r(s, e, q, caps)?;
    let denom = &vol + numerator / xi_upper;
    if !denom.is_positive() {
        return Err(Error::VacuousBound(crate::scalar::to_text(&denom)));
    }
    Ok(big(s.point_count()) / denom)
}
