//! Delsarte constraint systems over distance distributions.

use num_traits::Zero;

use super::{Constraint, LinearProgram, Relation};
use crate::cw::{CwProvider, Served, TableKey};
use crate::scalar::{big, int, Rational};
use crate::scheme::{krawtchouk, Scheme};
use crate::Error;

/// Table values used as variable caps, with how each was served.
pub type Caps = Vec<(TableKey, Served)>;

/// A Delsarte program together with the table values used as variable caps.
#[derive(Debug, Clone)]
pub struct DelsarteLp {
    pub program: LinearProgram,
    pub caps: Caps,
}

fn check_extra(extra: &[Constraint], vars: usize) -> Result<(), Error> {
    match extra.iter().find(|c| c.coefficients.len() != vars) {
        Some(_) => Err(Error::MalformedProgram(format!(
            "extra constraint must have {vars} coefficients"
        ))),
        None => Ok(()),
    }
}

/// `LP[n,2e+1]`: variables `A_0..A_n` of an `(n, M, 2e+1)` code.
///
/// The objective is left zero. `extra` rows are appended verbatim.
pub fn build_lp_odd(
    n: u32,
    e: u32,
    caps: &CwProvider,
    extra: &[Constraint],
) -> Result<DelsarteLp, Error> {
    if e < 1 || 2 * e + 1 > n {
        return Err(Error::InvalidParameters(format!(
            "LP[n,2e+1] needs 1 <= e and 2e+1 <= n, got n={n} e={e}"
        )));
    }
    let vars = n as usize + 1;
    check_extra(extra, vars)?;
    let mut lp = LinearProgram::new(vars);
    for k in 0..=n {
        let row = (0..=n).map(|i| big(krawtchouk(n, k, i))).collect();
        lp.add(Constraint::new(row, Relation::Ge, Rational::zero()));
    }
    lp.fix(0, int(1));
    for i in 1..(2 * e + 1) {
        lp.fix(i as usize, Rational::zero());
    }
    let mut used = Vec::new();
    for i in (2 * e + 1)..=n {
        let s = caps.cw_upper(n, 2 * e + 2, i)?;
        lp.upper[i as usize] = Some(int(s.value as i64));
        used.push((
            TableKey::A {
                n,
                d: 2 * e + 2,
                w: i,
            },
            s,
        ));
    }
    lp.constraints.extend_from_slice(extra);
    Ok(DelsarteLp {
        program: lp,
        caps: used,
    })
}

/// `LP_e[ñ,2e+2]`: the even-weight extension of an `(ñ-1, M, 2e+1)` code.
///
/// Odd distances are fixed to zero and only the first `floor(ñ/2)+1`
/// inequalities are kept; the others repeat them on even indices.
pub fn build_lp_even(
    n_tilde: u32,
    e: u32,
    caps: &CwProvider,
    extra: &[Constraint],
) -> Result<DelsarteLp, Error> {
    if e < 1 || 2 * e + 2 > n_tilde {
        return Err(Error::InvalidParameters(format!(
            "LP_e[n,2e+2] needs 1 <= e and 2e+2 <= n, got n={n_tilde} e={e}"
        )));
    }
    let n = n_tilde;
    let vars = n as usize + 1;
    check_extra(extra, vars)?;
    let mut lp = LinearProgram::new(vars);
    for k in 0..=(n / 2) {
        let row = (0..=n).map(|i| big(krawtchouk(n, k, i))).collect();
        lp.add(Constraint::new(row, Relation::Ge, Rational::zero()));
    }
    lp.fix(0, int(1));
    for i in 1..=n {
        if i % 2 == 1 || i < 2 * e + 2 {
            lp.fix(i as usize, Rational::zero());
        }
    }
    let mut used = Vec::new();
    for i in ((2 * e + 2)..=2 * (n / 2)).step_by(2) {
        let s = caps.cw_upper(n, 2 * e + 2, i)?;
        lp.upper[i as usize] = Some(int(s.value as i64));
        used.push((
            TableKey::A {
                n,
                d: 2 * e + 2,
                w: i,
            },
            s,
        ));
    }
    lp.constraints.extend_from_slice(extra);
    Ok(DelsarteLp {
        program: lp,
        caps: used,
    })
}

/// Delsarte inequalities of the Johnson scheme `J(n,w)` for a code of
/// scheme distance at least `2e+1`. Variables are `A_0..A_D`, `D = min(w, n-w)`.
pub fn johnson_delsarte(n: u32, w: u32, e: u32) -> Result<LinearProgram, Error> {
    let s = Scheme::johnson(n, w)?;
    let top = s.class_count();
    if e < 1 || 2 * e + 1 > top {
        return Err(Error::InvalidParameters(format!(
            "J({n},{w}) has no distance {}",
            2 * e + 1
        )));
    }
    let tables = s.eigen_tables()?;
    let vars = top as usize + 1;
    let mut lp = LinearProgram::new(vars);
    for k in 0..vars {
        lp.add(Constraint::new(
            tables.q[k].clone(),
            Relation::Ge,
            Rational::zero(),
        ));
    }
    lp.fix(0, int(1));
    for i in 1..=(2 * e as usize) {
        lp.fix(i, Rational::zero());
    }
    Ok(lp)
}

/// Constraints from the words around the complement of a codeword.
///
/// Fix a codeword `x` and let `B_j` count codewords at distance `j` from its
/// complement, so `B_j = A_{m-j}` for a code of length `m`. At most one
/// codeword lies within distance `e` of the complement. Words in the shells
/// just outside pack as constant-weight words after extension, and a near
/// word forces them to avoid its support, which leaves `m+1-e` usable
/// coordinates. Both facts hold for every `x`, hence for the averages.
///
/// `even` selects the parity-extended program, whose length `m` is already
/// extended and where only shell `e+2` is constrained.
pub fn antipodal_constraints(
    m: u32,
    e: u32,
    caps: &CwProvider,
    even: bool,
) -> Result<(Vec<Constraint>, Caps), Error> {
    if e < 1 || 2 * e + 2 > m {
        return Err(Error::InvalidParameters(format!(
            "antipodal constraints need 2e+2 <= {m}, got e={e}"
        )));
    }
    let vars = m as usize + 1;
    let (outer_len, inner_len) = if even { (m, m - e) } else { (m + 1, m + 1 - e) };
    let d = 2 * e + 2;
    let outer = caps.cw_upper(outer_len, d, e + 2)?;
    let inner = caps.cw_upper(inner_len, d, e + 2)?;
    let penalty = int(outer.value as i64) - int(inner.value as i64);

    let mut near = vec![Rational::zero(); vars];
    for j in 0..=e {
        near[(m - j) as usize] = int(1);
    }
    let mut shells = near.iter().map(|c| c * &penalty).collect::<Vec<_>>();
    shells[(m - e - 2) as usize] = int(1);
    if !even {
        shells[(m - e - 1) as usize] = int(1);
    }
    let rows = vec![
        Constraint::new(near, Relation::Le, int(1)),
        Constraint::new(shells, Relation::Le, int(outer.value as i64)),
    ];
    let used = vec![
        (TableKey::A { n: outer_len, d, w: e + 2 }, outer),
        (TableKey::A { n: inner_len, d, w: e + 2 }, inner),
    ];
    Ok((rows, used))
}

/// Shortening transfer: if `Σ p_i A'_i <= shorter_cap` for every code of
/// length `n-1`, then `Σ (n-i) p_i A_i <= n · shorter_cap` at length `n`.
pub fn transfer_bound(n: u32, p: &[Rational], shorter_cap: &Rational) -> Result<Rational, Error> {
    if p.len() != n as usize + 1 {
        return Err(Error::InvalidParameters(format!(
            "coefficient vector must have {} entries",
            n + 1
        )));
    }
    Ok(int(i64::from(n)) * shorter_cap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::solve;
    use crate::scalar::frac;

    #[test]
    fn hamming_code_distribution_is_feasible() {
        let d = build_lp_odd(7, 1, &CwProvider::empty(), &[]).unwrap();
        let mut a = vec![Rational::zero(); 8];
        a[0] = int(1);
        a[3] = int(7);
        a[4] = int(7);
        a[7] = int(1);
        assert!(d.program.is_feasible(&a));
        let total: Rational = a.iter().sum();
        assert_eq!(total, int(16));
        assert_eq!(d.program.upper[1], Some(Rational::zero()));
        assert!(d.program.constraints[0].coefficients.iter().all(|c| *c == int(1)));
    }

    #[test]
    fn even_program_fixes_odd_indices() {
        let d = build_lp_even(9, 1, &CwProvider::empty(), &[]).unwrap();
        for i in (1..=9).step_by(2) {
            assert_eq!(d.program.lower[i], Some(Rational::zero()));
            assert_eq!(d.program.upper[i], Some(Rational::zero()));
        }
        assert_eq!(d.program.constraints.len(), 5);
    }

    #[test]
    fn even_lp_respects_closed_caps() {
        let p = CwProvider::with_default_table();
        for (nt, cap) in [(9, frac(14, 1)), (10, frac(70, 3))] {
            let mut d = build_lp_even(nt, 1, &p, &[]).unwrap();
            d.program.objective[4] = int(1);
            let v = solve(&d.program).unwrap().value.unwrap();
            assert!(v <= cap, "ñ={nt}: {v}");
        }
    }

    #[test]
    fn antipodal_rows_hold_for_hamming_code() {
        let p = CwProvider::with_default_table();
        let (rows, used) = antipodal_constraints(7, 1, &p, false).unwrap();
        assert_eq!(used.len(), 2);
        let mut a = vec![Rational::zero(); 8];
        a[0] = int(1);
        a[3] = int(7);
        a[4] = int(7);
        a[7] = int(1);
        for r in &rows {
            let lhs: Rational = r.coefficients.iter().zip(&a).map(|(c, x)| c * x).sum();
            assert!(lhs <= r.rhs, "{lhs} > {}", r.rhs);
        }
    }

    #[test]
    fn transfer_examples() {
        let p: Vec<Rational> = (0..=10).map(|i| int(i64::from(i == 4))).collect();
        assert_eq!(transfer_bound(10, &p, &int(14)).unwrap(), int(140));
        assert_eq!(transfer_bound(10, &p, &int(0)).unwrap(), int(0));
        // (ñ-4) Ã_4 <= ñ (ñ-2)(ñ-3)(ñ-4)/24 at ñ = 10
        let cap = frac(8 * 7 * 6, 24);
        let lhs_cap = transfer_bound(10, &p, &cap).unwrap();
        assert_eq!(lhs_cap / int(6), frac(70, 3));
        assert!(transfer_bound(10, &p[..5], &cap).is_err());
    }

    #[test]
    fn extra_rows_are_appended() {
        let mut row = vec![Rational::zero(); 8];
        row[3] = int(1);
        let extra = [Constraint::new(row, Relation::Le, int(5))];
        let d = build_lp_odd(7, 1, &CwProvider::empty(), &extra).unwrap();
        assert_eq!(d.program.constraints.len(), 9);
        assert!(build_lp_odd(7, 1, &CwProvider::empty(), &[Constraint::new(vec![], Relation::Le, int(0))]).is_err());
    }
}
