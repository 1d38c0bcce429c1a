//! Exact rational linear programming.
//!
//! Programs are always maximizations. The solver is a two-phase dense tableau
//! simplex with Bland's rule, so it terminates on degenerate programs. Every
//! optimal answer carries a dual certificate that [`DualCertificate::verify`]
//! checks without looking at the pivoting path.

mod delsarte;
mod simplex;

pub use delsarte::{
    antipodal_constraints, build_lp_even, build_lp_odd, johnson_delsarte, transfer_bound, DelsarteLp,
};

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::scalar::{self, serde_text, Rational};
use crate::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = "=")]
    Eq,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Constraint {
    #[serde(with = "serde_text::vec")]
    pub coefficients: Vec<Rational>,
    pub relation: Relation,
    #[serde(with = "serde_text")]
    pub rhs: Rational,
}

impl Constraint {
    pub fn new(coefficients: Vec<Rational>, relation: Relation, rhs: Rational) -> Self {
        Constraint {
            coefficients,
            relation,
            rhs,
        }
    }

    fn holds_at(&self, x: &[Rational]) -> bool {
        let lhs: Rational = self.coefficients.iter().zip(x).map(|(a, v)| a * v).sum();
        match self.relation {
            Relation::Le => lhs <= self.rhs,
            Relation::Ge => lhs >= self.rhs,
            Relation::Eq => lhs == self.rhs,
        }
    }
}

/// Maximize `objective · x` subject to `constraints` and per-variable bounds.
/// A missing bound means the variable is unbounded on that side.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearProgram {
    pub var_count: usize,
    #[serde(with = "serde_text::vec")]
    pub objective: Vec<Rational>,
    pub constraints: Vec<Constraint>,
    #[serde(with = "serde_text::opt_vec")]
    pub lower: Vec<Option<Rational>>,
    #[serde(with = "serde_text::opt_vec")]
    pub upper: Vec<Option<Rational>>,
}

impl LinearProgram {
    /// A program over `var_count` nonnegative variables with a zero objective.
    pub fn new(var_count: usize) -> Self {
        LinearProgram {
            var_count,
            objective: vec![Rational::zero(); var_count],
            constraints: Vec::new(),
            lower: vec![Some(Rational::zero()); var_count],
            upper: vec![None; var_count],
        }
    }

    pub fn fix(&mut self, var: usize, value: Rational) {
        self.lower[var] = Some(value.clone());
        self.upper[var] = Some(value);
    }

    pub fn add(&mut self, c: Constraint) {
        self.constraints.push(c);
    }

    pub fn validate(&self) -> Result<(), Error> {
        let n = self.var_count;
        let bad = |m: String| Err(Error::MalformedProgram(m));
        if self.objective.len() != n {
            return bad(format!("objective has {} entries, expected {n}", self.objective.len()));
        }
        if self.lower.len() != n || self.upper.len() != n {
            return bad("bound vectors must have one entry per variable".into());
        }
        for (r, c) in self.constraints.iter().enumerate() {
            if c.coefficients.len() != n {
                return bad(format!("constraint {r} has {} coefficients", c.coefficients.len()));
            }
        }
        for j in 0..n {
            if let (Some(l), Some(u)) = (&self.lower[j], &self.upper[j]) {
                if l > u {
                    return bad(format!("variable {j} has lower bound above upper bound"));
                }
            }
        }
        Ok(())
    }

    pub fn objective_at(&self, x: &[Rational]) -> Rational {
        self.objective.iter().zip(x).map(|(c, v)| c * v).sum()
    }

    /// Exact feasibility check of a point.
    pub fn is_feasible(&self, x: &[Rational]) -> bool {
        if x.len() != self.var_count {
            return false;
        }
        let bounds_ok = x.iter().enumerate().all(|(j, v)| {
            self.lower[j].as_ref().is_none_or(|l| v >= l)
                && self.upper[j].as_ref().is_none_or(|u| v <= u)
        });
        bounds_ok && self.constraints.iter().all(|c| c.holds_at(x))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("program serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, Error> {
        let lp: LinearProgram =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        lp.validate()?;
        Ok(lp)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

/// Dual multipliers proving an upper bound on the objective.
///
/// `constraint_duals[r]` is nonnegative for `<=`, nonpositive for `>=` and free
/// for `=` rows. `upper_duals` and `lower_duals` are nonnegative and may only be
/// nonzero where the corresponding bound exists. Stationarity
/// `c = Σ y_r a_r + μ - λ` must hold exactly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DualCertificate {
    #[serde(with = "serde_text::vec")]
    pub constraint_duals: Vec<Rational>,
    #[serde(with = "serde_text::vec")]
    pub upper_duals: Vec<Rational>,
    #[serde(with = "serde_text::vec")]
    pub lower_duals: Vec<Rational>,
}

impl DualCertificate {
    /// Value of the dual objective; an upper bound on every feasible point.
    pub fn dual_value(&self, lp: &LinearProgram) -> Rational {
        let mut v: Rational = self
            .constraint_duals
            .iter()
            .zip(&lp.constraints)
            .map(|(y, c)| y * &c.rhs)
            .sum();
        for j in 0..lp.var_count {
            if !self.upper_duals[j].is_zero() {
                v += &self.upper_duals[j] * lp.upper[j].as_ref().expect("checked");
            }
            if !self.lower_duals[j].is_zero() {
                v -= &self.lower_duals[j] * lp.lower[j].as_ref().expect("checked");
            }
        }
        v
    }

    /// Checks sign feasibility, stationarity and that the dual value equals `claimed`.
    pub fn verify(&self, lp: &LinearProgram, claimed: &Rational) -> Result<(), Error> {
        let fail = |m: String| Err(Error::Certificate(m));
        let n = lp.var_count;
        if self.constraint_duals.len() != lp.constraints.len()
            || self.upper_duals.len() != n
            || self.lower_duals.len() != n
        {
            return fail("multiplier vectors have the wrong length".into());
        }
        for (r, (y, c)) in self.constraint_duals.iter().zip(&lp.constraints).enumerate() {
            let ok = match c.relation {
                Relation::Le => !y.is_negative(),
                Relation::Ge => !y.is_positive(),
                Relation::Eq => true,
            };
            if !ok {
                return fail(format!("multiplier of row {r} has the wrong sign"));
            }
        }
        for j in 0..n {
            let (mu, lam) = (&self.upper_duals[j], &self.lower_duals[j]);
            if mu.is_negative() || lam.is_negative() {
                return fail(format!("bound multiplier of variable {j} is negative"));
            }
            if !mu.is_zero() && lp.upper[j].is_none() {
                return fail(format!("variable {j} has no upper bound to price"));
            }
            if !lam.is_zero() && lp.lower[j].is_none() {
                return fail(format!("variable {j} has no lower bound to price"));
            }
            let combo: Rational = self
                .constraint_duals
                .iter()
                .zip(&lp.constraints)
                .map(|(y, c)| y * &c.coefficients[j])
                .sum::<Rational>()
                + mu
                - lam;
            if combo != lp.objective[j] {
                return fail(format!("stationarity fails at variable {j}"));
            }
        }
        let dv = self.dual_value(lp);
        if &dv != claimed {
            return fail(format!(
                "dual value {} differs from claimed {}",
                scalar::to_text(&dv),
                scalar::to_text(claimed)
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LpSolution {
    pub status: LpStatus,
    #[serde(with = "serde_text::opt", default)]
    pub value: Option<Rational>,
    #[serde(with = "serde_text::vec")]
    pub primal: Vec<Rational>,
    pub certificate: Option<DualCertificate>,
}

impl LpSolution {
    pub fn optimum(&self) -> Result<&Rational, Error> {
        match self.status {
            LpStatus::Optimal => Ok(self.value.as_ref().expect("optimal has a value")),
            LpStatus::Infeasible => Err(Error::LpStatus("infeasible".into())),
            LpStatus::Unbounded => Err(Error::LpStatus("unbounded".into())),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("solution serializes")
    }
}

/// Solves `lp` exactly. An optimal return has been re-checked for primal
/// feasibility and strong duality before it is handed back.
pub fn solve(lp: &LinearProgram) -> Result<LpSolution, Error> {
    lp.validate()?;
    let sol = simplex::run(lp)?;
    if let LpStatus::Optimal = sol.status {
        let value = sol.value.as_ref().expect("optimal");
        if !lp.is_feasible(&sol.primal) || lp.objective_at(&sol.primal) != *value {
            return Err(Error::Certificate("primal point failed re-check".into()));
        }
        sol.certificate
            .as_ref()
            .expect("optimal carries a certificate")
            .verify(lp, value)?;
    }
    Ok(sol)
}
