//! Bound methods. Each returns a [`BoundRecord`] holding the exact rational,
//! its floor, every table value consumed and, for LP-backed methods, an
//! auditable LP certificate.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::cw::{CwProvider, Provenance, Served, TableKey};
use crate::holes::{far_shell_coefficients, r_coefficients};
use crate::lp::{self, antipodal_constraints, Constraint, build_lp_even, build_lp_odd, johnson_delsarte, transfer_bound, DualCertificate, LinearProgram};
use crate::scalar::{self, big, frac, int, serde_text, Rational};
use crate::scheme::{binomial, sphere_volume, Scheme};
use crate::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Sphere,
    Johnson,
    ImprovedJohnson,
    LpImprovedJohnson,
    Residue9,
    Residue10,
    LargeTwo,
    LargeTwoEven,
    LargeThree,
    JohnsonScheme,
    Centering,
}

impl Method {
    pub const ALL: [Method; 11] = [
        Method::Sphere,
        Method::Johnson,
        Method::ImprovedJohnson,
        Method::LpImprovedJohnson,
        Method::Residue9,
        Method::Residue10,
        Method::LargeTwo,
        Method::LargeTwoEven,
        Method::LargeThree,
        Method::JohnsonScheme,
        Method::Centering,
    ];

    /// Methods bounding `A(n,d)` for odd `d`.
    pub const BINARY: [Method; 9] = [
        Method::Sphere,
        Method::Johnson,
        Method::ImprovedJohnson,
        Method::LpImprovedJohnson,
        Method::Residue9,
        Method::Residue10,
        Method::LargeTwo,
        Method::LargeTwoEven,
        Method::LargeThree,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Method::Sphere => "sphere",
            Method::Johnson => "johnson",
            Method::ImprovedJohnson => "improved-johnson",
            Method::LpImprovedJohnson => "lp-improved-johnson",
            Method::Residue9 => "residue9",
            Method::Residue10 => "residue10",
            Method::LargeTwo => "large2",
            Method::LargeTwoEven => "large2-even",
            Method::LargeThree => "large3",
            Method::JohnsonScheme => "johnson-scheme",
            Method::Centering => "centering",
        }
    }

    /// Short aliases accepted on the command line.
    pub fn alias(self) -> Option<&'static str> {
        match self {
            Method::LpImprovedJohnson => Some("thm5"),
            Method::Residue9 => Some("thm7"),
            Method::LargeTwo => Some("thm8"),
            Method::LargeTwoEven => Some("thm9"),
            Method::Residue10 => Some("thm10"),
            Method::LargeThree => Some("thm11"),
            Method::JohnsonScheme => Some("thm12"),
            Method::Centering => Some("thm13"),
            _ => None,
        }
    }

    pub fn is_constant_weight(self) -> bool {
        matches!(self, Method::JohnsonScheme | Method::Centering)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        Method::ALL
            .into_iter()
            .find(|m| m.id() == s || m.alias() == Some(s))
            .ok_or_else(|| Error::InvalidParameters(format!("unknown method {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// Formula inputs must come from tables, closed forms or exhaustive search.
    Strict,
    /// Fallback bounds are accepted and the record is marked non-reproducing.
    Permissive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableInput {
    pub key: TableKey,
    pub value: u64,
    pub provenance: Provenance,
    /// False for LP variable caps, true for values entering the bound formula.
    pub formula: bool,
}

/// An LP optimum that can be checked offline.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LpCertificate {
    pub program: LinearProgram,
    #[serde(with = "serde_text")]
    pub optimum: Rational,
    #[serde(with = "serde_text::vec")]
    pub primal: Vec<Rational>,
    pub dual: DualCertificate,
}

impl LpCertificate {
    /// Re-checks the primal point and the dual bound in exact arithmetic.
    pub fn verify(&self) -> Result<(), Error> {
        self.program.validate()?;
        if !self.program.is_feasible(&self.primal) {
            return Err(Error::Certificate("primal point is infeasible".into()));
        }
        if self.program.objective_at(&self.primal) != self.optimum {
            return Err(Error::Certificate("primal value differs from optimum".into()));
        }
        self.dual.verify(&self.program, &self.optimum)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundRecord {
    pub method: Method,
    pub n: u32,
    /// Hamming distance.
    pub d: u32,
    pub w: Option<u32>,
    /// Johnson-scheme distance (`d / 2`) for constant-weight methods.
    pub scheme_distance: Option<u32>,
    #[serde(with = "serde_text")]
    pub exact_value: Rational,
    #[serde(with = "bigint_text")]
    pub bound: BigInt,
    pub inputs: Vec<TableInput>,
    /// True when every formula input has a pinned, reproducible source.
    pub reproducing: bool,
    /// Caller-supplied rows that entered the program.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub extra_rows: Vec<Constraint>,
    pub certificate: Option<LpCertificate>,
}

mod bigint_text {
    use num_bigint::BigInt;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        String::deserialize(d)?.parse().map_err(de::Error::custom)
    }
}

impl BoundRecord {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("record serializes")
    }
}

/// Collects consumed table values for one bound computation.
struct Ledger<'a> {
    provider: &'a CwProvider,
    mode: Mode,
    inputs: Vec<TableInput>,
}

impl<'a> Ledger<'a> {
    fn record(&mut self, key: TableKey, s: &Served, formula: bool) -> Result<Rational, Error> {
        if formula && self.mode == Mode::Strict && !s.provenance.is_reproducible() {
            return Err(Error::MissingTableEntry(format!("{key} ({})", s.provenance)));
        }
        if !self.inputs.iter().any(|i| i.key == key) {
            self.inputs.push(TableInput {
                key,
                value: s.value,
                provenance: s.provenance.clone(),
                formula,
            });
        }
        Ok(int(s.value as i64))
    }

    fn a(&mut self, n: u32, d: u32, w: u32) -> Result<Rational, Error> {
        let s = self.provider.cw_upper(n, d, w)?;
        self.record(TableKey::A { n, d, w }, &s, true)
    }

    fn t(&mut self, w1: u32, n1: u32, w2: u32, n2: u32, d: u32) -> Result<Rational, Error> {
        let s = self.provider.t_upper(w1, n1, w2, n2, d)?;
        self.record(TableKey::T { w1, n1, w2, n2, d }, &s, true)
    }

    fn caps(&mut self, caps: Vec<(TableKey, Served)>) {
        for (k, s) in caps {
            let _ = self.record(k, &s, false);
        }
    }

    fn reproducing(&self) -> bool {
        self.inputs
            .iter()
            .filter(|i| i.formula)
            .all(|i| i.provenance.is_reproducible())
    }
}

fn c(n: u32, k: u32) -> Rational {
    big(binomial(n, k.into()))
}

fn pow2(n: u32) -> Rational {
    big(BigInt::one() << n)
}

fn vol(n: u32, e: u32) -> Rational {
    big(sphere_volume(n, e))
}

fn solve_max(mut program: LinearProgram, extra: &[Constraint]) -> Result<(Rational, LpCertificate), Error> {
    let vars = program.var_count;
    program
        .constraints
        .extend(extra.iter().filter(|r| r.coefficients.len() == vars).cloned());
    let sol = lp::solve(&program)?;
    let optimum = sol.optimum()?.clone();
    let cert = LpCertificate {
        optimum: optimum.clone(),
        primal: sol.primal.clone(),
        dual: sol.certificate.clone().expect("optimal has a certificate"),
        program,
    };
    Ok((optimum, cert))
}

fn add_scaled(target: &mut [Rational], coeffs: &[BigInt], scale: &Rational) {
    for (t, c) in target.iter_mut().zip(coeffs) {
        if !c.is_zero() {
            *t += scale * big(c.clone());
        }
    }
}

fn require(ok: bool, what: impl FnOnce() -> String) -> Result<(), Error> {
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidParameters(what()))
    }
}

fn quotient(numerator: Rational, denominator: Rational) -> Result<Rational, Error> {
    if !denominator.is_positive() {
        return Err(Error::VacuousBound(scalar::to_text(&denominator)));
    }
    Ok(numerator / denominator)
}

/// Bound computations over one immutable provider.
#[derive(Debug, Clone)]
pub struct BoundEngine {
    pub provider: CwProvider,
    pub mode: Mode,
    /// Additional valid rows appended to every program whose variable count
    /// matches. Rows of another length are ignored.
    pub extra_rows: Vec<Constraint>,
}

impl BoundEngine {
    pub fn new(provider: CwProvider, mode: Mode) -> Self {
        BoundEngine {
            provider,
            mode,
            extra_rows: Vec::new(),
        }
    }

    fn ledger(&self) -> Ledger<'_> {
        Ledger {
            provider: &self.provider,
            mode: self.mode,
            inputs: Vec::new(),
        }
    }

    /// The odd or parity-extended program with the antipodal rows appended.
    fn tightened(&self, l: &mut Ledger<'_>, m: u32, e: u32, even: bool) -> Result<LinearProgram, Error> {
        let (rows, used) = antipodal_constraints(m, e, &self.provider, even)?;
        let dl = if even {
            build_lp_even(m, e, &self.provider, &rows)?
        } else {
            build_lp_odd(m, e, &self.provider, &rows)?
        };
        l.caps(dl.caps);
        l.caps(used);
        Ok(dl.program)
    }

    #[allow(clippy::too_many_arguments)]
    fn finish(
        &self,
        method: Method,
        n: u32,
        d: u32,
        w: Option<u32>,
        exact_value: Rational,
        ledger: Ledger<'_>,
        certificate: Option<LpCertificate>,
    ) -> BoundRecord {
        BoundRecord {
            method,
            n,
            d,
            w,
            scheme_distance: w.map(|_| d / 2),
            bound: scalar::floor(&exact_value),
            exact_value,
            reproducing: ledger.reproducing(),
            inputs: ledger.inputs,
            extra_rows: match &certificate {
                Some(c) => self
                    .extra_rows
                    .iter()
                    .filter(|r| r.coefficients.len() == c.program.var_count)
                    .cloned()
                    .collect(),
                None => Vec::new(),
            },
            certificate,
        }
    }

    /// Dispatches on method. `d` is the Hamming distance; constant-weight
    /// methods also need `w`.
    pub fn compute(&self, method: Method, n: u32, d: u32, w: Option<u32>) -> Result<BoundRecord, Error> {
        let odd_e = || -> Result<u32, Error> {
            require(d % 2 == 1 && d >= 3, || format!("{method} needs odd d >= 3, got {d}"))?;
            Ok((d - 1) / 2)
        };
        let need_w = || w.ok_or_else(|| Error::InvalidParameters(format!("{method} needs a weight")));
        match method {
            Method::Sphere => self.sphere_packing(n, odd_e()?),
            Method::Johnson => self.johnson(n, odd_e()?),
            Method::ImprovedJohnson => self.improved_johnson(n, odd_e()?),
            Method::LpImprovedJohnson => self.lp_improved_johnson(n, odd_e()?),
            Method::Residue9 => {
                require(d == 3, || "the residue-9 closed form is for d = 3".into())?;
                self.closed_form_mod12_9(n)
            }
            Method::Residue10 => {
                require(d == 3, || "the residue-10 closed form is for d = 3".into())?;
                self.closed_form_mod12_10(n)
            }
            Method::LargeTwo => self.large_indices_two(n, odd_e()?),
            Method::LargeTwoEven => {
                require(d == 3, || "this method is for d = 3".into())?;
                self.large_indices_two_even(n)
            }
            Method::LargeThree => self.large_indices_three(n, odd_e()?),
            Method::JohnsonScheme => {
                require(d % 4 == 2 && d >= 6, || format!("{method} needs d = 4e+2, got {d}"))?;
                self.johnson_scheme_bound(n, need_w()?, (d - 2) / 4)
            }
            Method::Centering => {
                require(d == 10, || "the centering bound is for d = 10".into())?;
                self.centering_spheres_bound(n, need_w()?)
            }
        }
    }

    /// `2^n / V(n,e)`.
    pub fn sphere_packing(&self, n: u32, e: u32) -> Result<BoundRecord, Error> {
        require(2 * e + 1 <= n, || format!("need 2e+1 <= n, got n={n} e={e}"))?;
        let value = pow2(n) / vol(n, e);
        Ok(self.finish(Method::Sphere, n, 2 * e + 1, None, value, self.ledger(), None))
    }

    pub fn johnson(&self, n: u32, e: u32) -> Result<BoundRecord, Error> {
        require(2 * e + 1 <= n, || format!("need 2e+1 <= n, got n={n} e={e}"))?;
        let mut l = self.ledger();
        let far = l.a(n, 2 * e + 2, 2 * e + 1)?;
        let near = l.a(n, 2 * e + 2, e + 1)?;
        let frac_term = (c(n, e + 1) - c(2 * e + 1, e + 1) * far) / near;
        let value = quotient(pow2(n), vol(n, e) + frac_term)?;
        Ok(self.finish(Method::Johnson, n, 2 * e + 1, None, value, l, None))
    }

    pub fn improved_johnson(&self, n: u32, e: u32) -> Result<BoundRecord, Error> {
        require(2 * e + 2 <= n + 1, || format!("need 2e+2 <= n+1, got n={n} e={e}"))?;
        let mut l = self.ledger();
        let far = l.a(n + 1, 2 * e + 2, 2 * e + 2)?;
        let near = l.a(n + 1, 2 * e + 2, e + 2)?;
        let frac_term = (c(n + 1, e + 2) - c(2 * e + 2, e + 2) * far) / near;
        let value = quotient(pow2(n), vol(n, e) + frac_term)?;
        Ok(self.finish(Method::ImprovedJohnson, n, 2 * e + 1, None, value, l, None))
    }

    /// The improved Johnson bound with `A_{2e+1} + A_{2e+2}` replaced by the
    /// LP maximum of `Ã_{2e+2}` for the parity-extended code.
    pub fn lp_improved_johnson(&self, n: u32, e: u32) -> Result<BoundRecord, Error> {
        require(e >= 1 && 2 * e + 2 <= n + 1, || format!("need 2e+2 <= n+1, got n={n} e={e}"))?;
        let mut l = self.ledger();
        let near = l.a(n + 1, 2 * e + 2, e + 2)?;
        let mut dl = build_lp_even(n + 1, e, &self.provider, &[])?;
        dl.program.objective[(2 * e + 2) as usize] = int(1);
        l.caps(dl.caps);
        let (max_a, cert) = solve_max(dl.program, &self.extra_rows).map_err(internal_lp)?;
        let frac_term = (c(n + 1, e + 2) - c(2 * e + 2, e + 2) * max_a) / near;
        let value = quotient(pow2(n), vol(n, e) + frac_term)?;
        Ok(self.finish(Method::LpImprovedJohnson, n, 2 * e + 1, None, value, l, Some(cert)))
    }

    /// `A(n,3) <= 2^n / (n + 3 + 4/(n^2-3))` for `n = 9 (mod 12)`.
    pub fn closed_form_mod12_9(&self, n: u32) -> Result<BoundRecord, Error> {
        require(n % 12 == 9, || format!("n must be 9 mod 12, got {n}"))?;
        let nn = int(i64::from(n));
        let den = &nn + int(3) + int(4) / (&nn * &nn - int(3));
        let value = pow2(n) / den;
        Ok(self.finish(Method::Residue9, n, 3, None, value, self.ledger(), None))
    }

    /// `A(n,3) <= 2^n / (n + 2 + 8/(n+3))` for `n = 10 (mod 12)`.
    pub fn closed_form_mod12_10(&self, n: u32) -> Result<BoundRecord, Error> {
        require(n % 12 == 10, || format!("n must be 10 mod 12, got {n}"))?;
        let nn = int(i64::from(n));
        let den = &nn + int(2) + int(8) / (&nn + int(3));
        let value = pow2(n) / den;
        Ok(self.finish(Method::Residue10, n, 3, None, value, self.ledger(), None))
    }

    /// Bound from the HDI sequence supported on the two largest distances.
    pub fn large_indices_two(&self, n: u32, e: u32) -> Result<BoundRecord, Error> {
        require(e >= 1 && 2 * e + 1 <= n, || format!("need 2e+1 <= n, got n={n} e={e}"))?;
        let s = Scheme::hamming(n);
        let mut l = self.ledger();
        let full = n / (e + 1);
        let shifted = (n - e) / (e + 1);
        let block = int(i64::from((e + 1) * full));
        let far_gap = int(i64::from(n + 1 - (e + 1) * full));
        let near_gap = int(i64::from(n - e - (e + 1) * shifted));
        let tail_weight = int(i64::from(e + 1)) * int(1 + i64::from(shifted) - i64::from(full));

        let mut objective = vec![Rational::zero(); n as usize + 1];
        add_scaled(&mut objective, &r_coefficients(&s, e, n - 1)?, &int(1));
        add_scaled(&mut objective, &r_coefficients(&s, e, n)?, &int(1));
        for t in 0..e {
            add_scaled(&mut objective, &far_shell_coefficients(&s, e, t), &-far_gap.clone());
        }
        add_scaled(&mut objective, &far_shell_coefficients(&s, e, e), &-tail_weight);

        let mut program = self.tightened(&mut l, n, e, false)?;
        program.objective = objective;
        let (u, cert) = solve_max(program, &self.extra_rows).map_err(internal_lp)?;
        let den = int(2) * vol(n, e) + (c(n, e) * near_gap - u) / block;
        let value = quotient(pow2(n), den)?;
        Ok(self.finish(Method::LargeTwo, n, 2 * e + 1, None, value, l, Some(cert)))
    }

    /// Single-error case for even `n`, through the parity-extended program.
    pub fn large_indices_two_even(&self, n: u32) -> Result<BoundRecord, Error> {
        require(n.is_multiple_of(2) && n >= 4, || format!("n must be even and >= 4, got {n}"))?;
        let mut l = self.ledger();
        let nt = n + 1;
        let mut program = self.tightened(&mut l, nt, 1, true)?;
        program.objective[(nt - 3) as usize] = int(6);
        program.objective[(nt - 1) as usize] = int(3 * i64::from(n));
        let (u, cert) = solve_max(program, &self.extra_rows).map_err(internal_lp)?;
        let nn = int(i64::from(n));
        let den = int(2) * &nn + int(3) - u / nn;
        let value = quotient(pow2(n), den)?;
        Ok(self.finish(Method::LargeTwoEven, n, 3, None, value, l, Some(cert)))
    }

    /// Bound from the HDI sequence supported on the three largest distances.
    pub fn large_indices_three(&self, n: u32, e: u32) -> Result<BoundRecord, Error> {
        require(e >= 1 && 2 * e + 1 <= n, || format!("need 2e+1 <= n, got n={n} e={e}"))?;
        let s = Scheme::hamming(n);
        let mut l = self.ledger();
        let outer = l.a(n + 1, 2 * e + 2, e + 2)?;
        let inner = l.a(n + 1 - e, 2 * e + 2, e + 2)?;
        let pairs = c(e + 2, 2);
        let scale = &pairs * &outer;
        let phi = c(n + 1, e) * (c(n + 1 - e, 2) - &pairs * &inner) / &scale;
        let head = int(1) + c(n + 1, 2) - &pairs * &outer;
        let tail = int(1) + int(i64::from(e * (n - e))) + c(e + 1, 2) - &pairs * (&outer - &inner);

        let mut objective = vec![Rational::zero(); n as usize + 1];
        for i in (n - 2)..=n {
            add_scaled(&mut objective, &r_coefficients(&s, e, i)?, &int(1));
        }
        for t in 0..e.saturating_sub(1) {
            add_scaled(&mut objective, &far_shell_coefficients(&s, e, t), &-head.clone());
        }
        for t in (e - 1)..=e {
            add_scaled(&mut objective, &far_shell_coefficients(&s, e, t), &-tail.clone());
        }

        let mut program = self.tightened(&mut l, n, e, false)?;
        program.objective = objective;
        let (u, cert) = solve_max(program, &self.extra_rows).map_err(internal_lp)?;
        let den = int(2) * vol(n, e) + phi - u / scale;
        let value = quotient(pow2(n), den)?;
        Ok(self.finish(Method::LargeThree, n, 2 * e + 1, None, value, l, Some(cert)))
    }

    /// `A(n, 4e+2, w)` via the Johnson-scheme form of the Johnson bound, with
    /// `A_{2e+1}` capped by the Johnson-scheme Delsarte program.
    pub fn johnson_scheme_bound(&self, n: u32, w: u32, e: u32) -> Result<BoundRecord, Error> {
        require(e >= 1 && e + 1 <= w && w + e + 1 <= n, || {
            format!("need e+1 <= w <= n-e-1, got n={n} w={w} e={e}")
        })?;
        let s = Scheme::johnson(n, w)?;
        require(s.class_count() >= 2 * e + 1, || "no pair of words at the required distance".into())?;
        let mut l = self.ledger();
        let t = l.t(e + 1, w, e + 1, n - w, 4 * e + 2)?;
        let mut program = johnson_delsarte(n, w, e)?;
        program.objective[(2 * e + 1) as usize] = int(1);
        let (u, cert) = solve_max(program, &self.extra_rows).map_err(internal_lp)?;
        let near: Rational = (0..=e).map(|i| big(s.valency_unchecked(i))).sum();
        let ring = big(s.valency_unchecked(e + 1));
        let mult = c(2 * e + 1, e) * c(2 * e + 1, e);
        let den = near + (ring - mult * u) / t;
        let value = quotient(c(n, w), den)?;
        Ok(self.finish(Method::JohnsonScheme, n, 4 * e + 2, Some(w), value, l, Some(cert)))
    }

    /// `A(n,10,w)` by counting points at distance 3 and 4 around codewords.
    ///
    /// Not valid in general: a point at distance 3 from one codeword and 4
    /// from another is charged `1/T3 + 1/T4`, which can exceed 1. Three
    /// disjoint 5-sets in 15 points form a code of size 3 while this gives 2.
    pub fn centering_spheres_bound(&self, n: u32, w: u32) -> Result<BoundRecord, Error> {
        require(4 <= w && w + 4 <= n, || format!("need 4 <= w <= n-4, got n={n} w={w}"))?;
        let s = Scheme::johnson(n, w)?;
        let top = s.class_count();
        require(top >= 5, || "no pair of words at distance 10".into())?;
        let mut l = self.ledger();
        let t3 = l.t(3, w, 3, n - w, 10)?;
        let t4 = l.t(4, w, 4, n - w, 10)?;
        let mut program = johnson_delsarte(n, w, 2)?;
        program.objective[5] = int(100) / &t3 + (int(50 * i64::from(n)) - int(475)) / &t4;
        if top >= 6 {
            program.objective[6] = int(225) / &t4;
        }
        let (u, cert) = solve_max(program, &self.extra_rows).map_err(internal_lp)?;
        let v = |i| big(s.valency_unchecked(i));
        let den = v(0) + v(1) + v(2) + v(3) / t3 + v(4) / t4 - u;
        let value = quotient(c(n, w), den)?;
        Ok(self.finish(Method::Centering, n, 10, Some(w), value, l, Some(cert)))
    }

    /// Cap on `Ã_4` for even-weight codes of length `ñ` and distance 4.
    pub fn vroedt_cap(&self, n_tilde: u32) -> Result<Rational, Error> {
        require(n_tilde >= 4, || format!("length must be at least 4, got {n_tilde}"))?;
        let nt = i64::from(n_tilde);
        match n_tilde % 4 {
            1 => Ok(frac((nt - 1) * (nt - 2) * (nt - 3), 24)),
            2 => {
                let shorter = frac((nt - 2) * (nt - 3) * (nt - 4), 24);
                let p: Vec<Rational> = (0..=n_tilde).map(|i| int(i64::from(i == 4))).collect();
                Ok(transfer_bound(n_tilde, &p, &shorter)? / int(nt - 4))
            }
            _ => {
                let mut dl = build_lp_even(n_tilde, 1, &self.provider, &[])?;
                dl.program.objective[4] = int(1);
                Ok(solve_max(dl.program, &self.extra_rows).map_err(internal_lp)?.0)
            }
        }
    }
}

fn internal_lp(e: Error) -> Error {
    match e {
        Error::LpStatus(s) => Error::LpStatus(format!("{s} (Delsarte program)")),
        other => other,
    }
}

/// Re-evaluates a record with a provider holding exactly its recorded inputs.
pub fn reevaluate(record: &BoundRecord) -> Result<BoundRecord, Error> {
    let provider = CwProvider::pinned(record.inputs.iter().map(|i| (i.key, i.value)))?;
    let mut engine = BoundEngine::new(provider, Mode::Permissive);
    engine.extra_rows = record.extra_rows.clone();
    engine.compute(record.method, record.n, record.d, record.w)
}
