use num_traits::{One, Signed, Zero};

use super::{DualCertificate, LinearProgram, LpSolution, LpStatus, Relation};
use crate::scalar::Rational;
use crate::Error;

/// How an original variable is expressed in nonnegative tableau columns.
enum VarMap {
    Fixed(Rational),
    /// `x = offset + col`
    Shift { col: usize, offset: Rational },
    /// `x = offset - col`
    Mirror { col: usize, offset: Rational },
    /// `x = pos - neg`
    Split { pos: usize, neg: usize },
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    /// Reduced costs `c_j - z_j`; entering candidates are positive entries.
    obj: Vec<Rational>,
    /// Negated objective value.
    obj_rhs: Rational,
    basis: Vec<usize>,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c].clone();
        if !p.is_one() {
            for v in self.rows[r].iter_mut() {
                *v /= &p;
            }
            self.rhs[r] /= &p;
        }
        let prow = self.rows[r].clone();
        let prhs = self.rhs[r].clone();
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][c].is_zero() {
                continue;
            }
            let f = self.rows[i][c].clone();
            for (v, pv) in self.rows[i].iter_mut().zip(&prow) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
            self.rhs[i] -= &f * &prhs;
        }
        if !self.obj[c].is_zero() {
            let f = self.obj[c].clone();
            for (v, pv) in self.obj.iter_mut().zip(&prow) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
            self.obj_rhs -= &f * &prhs;
        }
        self.basis[r] = c;
    }

    /// Resets the objective row to the given column costs for the current basis.
    fn price(&mut self, costs: &[Rational]) {
        self.obj = costs.to_vec();
        self.obj_rhs = Rational::zero();
        for (i, &b) in self.basis.iter().enumerate() {
            let cb = &costs[b];
            if cb.is_zero() {
                continue;
            }
            for (v, t) in self.obj.iter_mut().zip(&self.rows[i]) {
                *v -= cb * t;
            }
            self.obj_rhs -= cb * &self.rhs[i];
        }
    }

    /// Bland's rule iterations. Returns false if the program is unbounded.
    fn optimize(&mut self, allowed: usize) -> bool {
        loop {
            let Some(c) = (0..allowed).find(|&j| self.obj[j].is_positive()) else {
                return true;
            };
            let mut best: Option<(usize, Rational)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][c];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / a;
                let better = match &best {
                    None => true,
                    Some((bi, br)) => {
                        ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi])
                    }
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                Some((r, _)) => self.pivot(r, c),
                None => return false,
            }
        }
    }
}

pub(super) fn run(lp: &LinearProgram) -> Result<LpSolution, Error> {
    let n = lp.var_count;
    let mut maps = Vec::with_capacity(n);
    let mut ncols = 0usize;
    let mut bound_rows: Vec<(usize, Rational)> = Vec::new();
    for j in 0..n {
        let map = match (&lp.lower[j], &lp.upper[j]) {
            (Some(l), Some(u)) if l == u => VarMap::Fixed(l.clone()),
            (Some(l), u) => {
                let col = ncols;
                ncols += 1;
                if let Some(u) = u {
                    bound_rows.push((col, u - l));
                }
                VarMap::Shift {
                    col,
                    offset: l.clone(),
                }
            }
            (None, Some(u)) => {
                let col = ncols;
                ncols += 1;
                VarMap::Mirror {
                    col,
                    offset: u.clone(),
                }
            }
            (None, None) => {
                ncols += 2;
                VarMap::Split {
                    pos: ncols - 2,
                    neg: ncols - 1,
                }
            }
        };
        maps.push(map);
    }

    // Rows in structural columns: (coefficients, relation, rhs).
    let mut rows: Vec<(Vec<Rational>, Relation, Rational)> = Vec::new();
    for c in &lp.constraints {
        let mut coef = vec![Rational::zero(); ncols];
        let mut rhs = c.rhs.clone();
        for (j, a) in c.coefficients.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            match &maps[j] {
                VarMap::Fixed(v) => rhs -= a * v,
                VarMap::Shift { col, offset } => {
                    rhs -= a * offset;
                    coef[*col] += a;
                }
                VarMap::Mirror { col, offset } => {
                    rhs -= a * offset;
                    coef[*col] -= a;
                }
                VarMap::Split { pos, neg } => {
                    coef[*pos] += a;
                    coef[*neg] -= a;
                }
            }
        }
        rows.push((coef, c.relation, rhs));
    }
    for (col, cap) in &bound_rows {
        let mut coef = vec![Rational::zero(); ncols];
        coef[*col] = Rational::one();
        rows.push((coef, Relation::Le, cap.clone()));
    }

    let m = rows.len();
    let nslack = rows.iter().filter(|r| r.1 != Relation::Eq).count();
    // Decide which rows need an artificial column.
    let mut sign = vec![Rational::one(); m];
    let mut needs_art = vec![false; m];
    for (i, (_, rel, rhs)) in rows.iter().enumerate() {
        let flip = rhs.is_negative();
        if flip {
            sign[i] = -Rational::one();
        }
        // slack coefficient after the flip must be +1 to start basic
        needs_art[i] = match rel {
            Relation::Le => flip,
            Relation::Ge => !flip,
            Relation::Eq => true,
        };
    }
    let nart = needs_art.iter().filter(|&&b| b).count();
    let total = ncols + nslack + nart;
    let art_start = ncols + nslack;

    let mut t = Tableau {
        rows: Vec::with_capacity(m),
        rhs: Vec::with_capacity(m),
        obj: Vec::new(),
        obj_rhs: Rational::zero(),
        basis: vec![0; m],
    };
    let mut identity_col = vec![0usize; m];
    let mut slack = ncols;
    let mut art = art_start;
    for (i, (coef, rel, rhs)) in rows.into_iter().enumerate() {
        let mut row = vec![Rational::zero(); total];
        for (v, a) in row.iter_mut().zip(coef) {
            *v = a * &sign[i];
        }
        let slack_col = match rel {
            Relation::Eq => None,
            Relation::Le => {
                row[slack] = sign[i].clone();
                slack += 1;
                Some(slack - 1)
            }
            Relation::Ge => {
                row[slack] = -sign[i].clone();
                slack += 1;
                Some(slack - 1)
            }
        };
        if needs_art[i] {
            row[art] = Rational::one();
            identity_col[i] = art;
            art += 1;
        } else {
            identity_col[i] = slack_col.expect("slack present");
        }
        t.basis[i] = identity_col[i];
        t.rows.push(row);
        t.rhs.push(rhs * &sign[i]);
    }

    if nart > 0 {
        let mut costs = vec![Rational::zero(); total];
        for c in costs.iter_mut().skip(art_start) {
            *c = -Rational::one();
        }
        t.price(&costs);
        t.optimize(total);
        if !t.obj_rhs.is_zero() {
            return Ok(LpSolution {
                status: LpStatus::Infeasible,
                value: None,
                primal: Vec::new(),
                certificate: None,
            });
        }
        // Drive zero-level artificials out of the basis where possible.
        for i in 0..m {
            if t.basis[i] >= art_start {
                if let Some(c) = (0..art_start).find(|&j| !t.rows[i][j].is_zero()) {
                    t.pivot(i, c);
                }
            }
        }
    }

    // Phase two costs in tableau columns, plus the constant from fixed/shifted variables.
    let mut costs = vec![Rational::zero(); total];
    let mut constant = Rational::zero();
    for (j, map) in maps.iter().enumerate() {
        let c = &lp.objective[j];
        match map {
            VarMap::Fixed(v) => constant += c * v,
            VarMap::Shift { col, offset } => {
                constant += c * offset;
                costs[*col] = c.clone();
            }
            VarMap::Mirror { col, offset } => {
                constant += c * offset;
                costs[*col] = -c.clone();
            }
            VarMap::Split { pos, neg } => {
                costs[*pos] = c.clone();
                costs[*neg] = -c.clone();
            }
        }
    }
    t.price(&costs);
    if !t.optimize(art_start) {
        return Ok(LpSolution {
            status: LpStatus::Unbounded,
            value: None,
            primal: Vec::new(),
            certificate: None,
        });
    }

    let mut colval = vec![Rational::zero(); total];
    for (i, &b) in t.basis.iter().enumerate() {
        colval[b] = t.rhs[i].clone();
    }
    let primal: Vec<Rational> = maps
        .iter()
        .map(|map| match map {
            VarMap::Fixed(v) => v.clone(),
            VarMap::Shift { col, offset } => offset + &colval[*col],
            VarMap::Mirror { col, offset } => offset - &colval[*col],
            VarMap::Split { pos, neg } => &colval[*pos] - &colval[*neg],
        })
        .collect();
    let value = -t.obj_rhs.clone() + constant;

    // Row duals: identity columns have zero cost, so y_i = -reduced cost.
    let constraint_duals: Vec<Rational> = (0..lp.constraints.len())
        .map(|i| -t.obj[identity_col[i]].clone() * &sign[i])
        .collect();
    let mut upper_duals = vec![Rational::zero(); n];
    let mut lower_duals = vec![Rational::zero(); n];
    for j in 0..n {
        let priced: Rational = constraint_duals
            .iter()
            .zip(&lp.constraints)
            .map(|(y, c)| y * &c.coefficients[j])
            .sum();
        let residual = &lp.objective[j] - priced;
        if residual.is_positive() {
            upper_duals[j] = residual;
        } else if residual.is_negative() {
            lower_duals[j] = -residual;
        }
    }

    Ok(LpSolution {
        status: LpStatus::Optimal,
        value: Some(value),
        primal,
        certificate: Some(DualCertificate {
            constraint_duals,
            upper_duals,
            lower_duals,
        }),
    })
}
