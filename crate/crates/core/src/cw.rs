//! Upper bounds on constant-weight code sizes `A(n,d,w)` and on the
//! split-weight packing number `T(w1,n1,w2,n2,d)`.
//!
//! Lookups go through user tables first, then proven closed forms, then
//! recursive fallbacks. Every served value carries its provenance so a bound
//! can list exactly what it consumed.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::lp::{self, Constraint, LinearProgram, Relation};
use crate::oracle;
use crate::scalar::{floor, int};
use crate::scheme::{binomial, Scheme};
use crate::Error;

/// The table shipped with the crate. See the file header for sources.
pub const DEFAULT_TABLE: &str = include_str!("../data/default_tables.csv");

/// Largest length accepted by the provider. Keeps intermediate products in `u128`.
pub const MAX_LENGTH: u32 = 64;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Provenance {
    /// User or shipped table, with its cited source.
    Table(String),
    /// A proven closed form, named.
    ClosedForm(String),
    /// Johnson-type recursion `A(n,d,w) <= floor(n/w A(n-1,d,w-1))`.
    Recursion,
    /// Projection of a split-weight packing onto one half.
    Projection,
    /// Exhaustive maximum-clique search.
    Exhaustive,
    /// Delsarte LP on the product of the two halves' Johnson schemes.
    ProductLp,
}

impl Provenance {
    /// True for sources that pin a definite published or computed value.
    /// Fallback upper bounds are not reproducing inputs.
    pub fn is_reproducible(&self) -> bool {
        !matches!(self, Provenance::Recursion | Provenance::Projection | Provenance::ProductLp)
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Table(s) => write!(f, "table: {s}"),
            Provenance::ClosedForm(s) => write!(f, "closed form: {s}"),
            Provenance::Recursion => write!(f, "Johnson recursion"),
            Provenance::Projection => write!(f, "projection onto one half"),
            Provenance::Exhaustive => write!(f, "exhaustive clique search"),
            Provenance::ProductLp => write!(f, "product-scheme Delsarte LP"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Served {
    pub value: u64,
    pub provenance: Provenance,
}

/// Key of a consumed table quantity, in the parameters the caller asked for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TableKey {
    A { n: u32, d: u32, w: u32 },
    T { w1: u32, n1: u32, w2: u32, n2: u32, d: u32 },
}

impl fmt::Display for TableKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            TableKey::A { n, d, w } => write!(f, "A({n},{d},{w})"),
            TableKey::T { w1, n1, w2, n2, d } => write!(f, "T({w1},{n1},{w2},{n2},{d})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct TableLine {
    key: TableKey,
    value: u64,
    source: String,
}

impl TableLine {
    fn render(&self) -> String {
        match self.key {
            TableKey::A { n, d, w } => format!("A,{n},{d},{w},{},{}", self.value, self.source),
            TableKey::T { w1, n1, w2, n2, d } => {
                format!("T,{w1},{n1},{w2},{n2},{d},{},{}", self.value, self.source)
            }
        }
    }
}

fn canonical_a(n: u32, d: u32, w: u32) -> (u32, u32, u32) {
    (n, d + d % 2, w.min(n - w))
}

/// Canonical key of a split packing `T(w1,n1,w2,n2,d)`.
type TKey = (u32, u32, u32, u32, u32);

fn canonical_t(w1: u32, n1: u32, w2: u32, n2: u32, d: u32) -> TKey {
    let a = (w1.min(n1 - w1), n1);
    let b = (w2.min(n2 - w2), n2);
    let (a, b) = if a <= b { (a, b) } else { (b, a) };
    (a.0, a.1, b.0, b.1, d + d % 2)
}

/// Immutable bound provider. Clones are cheap enough to hand to worker threads.
#[derive(Debug, Clone)]
pub struct CwProvider {
    lines: Vec<TableLine>,
    a_table: HashMap<(u32, u32, u32), (u64, String)>,
    t_table: HashMap<TKey, (u64, String)>,
    /// Vertex budget for the exhaustive `T` computation; `0` disables it.
    pub clique_budget: usize,
    /// Search nodes allowed for that computation before it gives up and the
    /// other bounds stand. Node counts are deterministic, so results are too.
    pub clique_node_limit: u64,
    /// Serve table entries only; every other request is an error.
    pinned: bool,
}

impl Default for CwProvider {
    fn default() -> Self {
        CwProvider::empty()
    }
}

impl CwProvider {
    /// Closed forms and recursion only.
    pub fn empty() -> Self {
        CwProvider {
            lines: Vec::new(),
            a_table: HashMap::new(),
            t_table: HashMap::new(),
            clique_budget: oracle::DEFAULT_BUDGET,
            clique_node_limit: oracle::DEFAULT_NODE_LIMIT,
            pinned: false,
        }
    }

    /// Provider that answers exactly the given keys and nothing else.
    pub fn pinned(entries: impl IntoIterator<Item = (TableKey, u64)>) -> Result<Self, Error> {
        let mut p = CwProvider::empty();
        p.clique_budget = 0;
        p.pinned = true;
        for (key, value) in entries {
            let src = "pinned".to_string();
            match key {
                TableKey::A { n, d, w } if w <= n => {
                    p.a_table.insert(canonical_a(n, d, w), (value, src));
                }
                TableKey::T { w1, n1, w2, n2, d } if w1 <= n1 && w2 <= n2 => {
                    p.t_table.insert(canonical_t(w1, n1, w2, n2, d), (value, src));
                }
                _ => return Err(Error::InvalidParameters(format!("pinned key {key}"))),
            }
        }
        Ok(p)
    }

    /// Provider loaded with [`DEFAULT_TABLE`].
    pub fn with_default_table() -> Self {
        let mut p = CwProvider::empty();
        p.load_str(DEFAULT_TABLE)
            .expect("shipped table is well formed");
        p
    }

    /// Adds the entries of a table file. Entries already present from an earlier
    /// file are replaced; a key repeated within the same file is an error.
    pub fn load_str(&mut self, text: &str) -> Result<(), Error> {
        let mut seen_a = HashMap::new();
        let mut seen_t = HashMap::new();
        let mut parsed = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let body = raw.trim();
            if body.is_empty() || body.starts_with('#') {
                continue;
            }
            let err = |msg: &str| Error::TableFile {
                line,
                msg: msg.to_string(),
            };
            let fields: Vec<&str> = body.split(',').map(str::trim).collect();
            let nums = |k: usize| -> Result<Vec<u64>, Error> {
                if fields.len() < k + 1 {
                    return Err(err("too few fields"));
                }
                fields[1..=k]
                    .iter()
                    .map(|f| f.parse::<u64>().map_err(|_| err("expected a nonnegative integer")))
                    .collect()
            };
            let small = |v: u64| -> Result<u32, Error> {
                u32::try_from(v)
                    .ok()
                    .filter(|&x| x <= MAX_LENGTH)
                    .ok_or_else(|| err("parameter out of range"))
            };
            let entry = match fields[0] {
                "A" => {
                    let v = nums(4)?;
                    let (n, d, w) = (small(v[0])?, small(v[1])?, small(v[2])?);
                    if w > n {
                        return Err(err("weight exceeds length"));
                    }
                    let source = fields[5..].join(",");
                    if seen_a.insert(canonical_a(n, d, w), line).is_some() {
                        return Err(err("duplicate A entry"));
                    }
                    TableLine {
                        key: TableKey::A { n, d, w },
                        value: v[3],
                        source,
                    }
                }
                "T" => {
                    let v = nums(6)?;
                    let (w1, n1, w2, n2, d) =
                        (small(v[0])?, small(v[1])?, small(v[2])?, small(v[3])?, small(v[4])?);
                    if w1 > n1 || w2 > n2 {
                        return Err(err("weight exceeds length"));
                    }
                    let source = fields[7..].join(",");
                    if seen_t.insert(canonical_t(w1, n1, w2, n2, d), line).is_some() {
                        return Err(err("duplicate T entry"));
                    }
                    TableLine {
                        key: TableKey::T { w1, n1, w2, n2, d },
                        value: v[5],
                        source,
                    }
                }
                _ => return Err(err("line must start with A or T")),
            };
            parsed.push(entry);
        }
        for entry in parsed {
            match entry.key {
                TableKey::A { n, d, w } => {
                    let k = canonical_a(n, d, w);
                    if self.a_table.insert(k, (entry.value, entry.source.clone())).is_some() {
                        self.lines.retain(|l| !matches!(l.key, TableKey::A { n, d, w } if canonical_a(n, d, w) == k));
                    }
                }
                TableKey::T { w1, n1, w2, n2, d } => {
                    let k = canonical_t(w1, n1, w2, n2, d);
                    if self.t_table.insert(k, (entry.value, entry.source.clone())).is_some() {
                        self.lines.retain(|l| !matches!(l.key, TableKey::T { w1, n1, w2, n2, d } if canonical_t(w1, n1, w2, n2, d) == k));
                    }
                }
            }
            self.lines.push(entry);
        }
        Ok(())
    }

    /// Table entries in load order, one canonical line each.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for l in &self.lines {
            out.push_str(&l.render());
            out.push('\n');
        }
        out
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    /// Upper bound on `A(n,d,w)`. Odd `d` is read as `d + 1`.
    pub fn cw_upper(&self, n: u32, d: u32, w: u32) -> Result<Served, Error> {
        if w > n || n > MAX_LENGTH {
            return Err(Error::InvalidParameters(format!("A({n},{d},{w})")));
        }
        if self.pinned {
            return match self.a_table.get(&canonical_a(n, d, w)) {
                Some((v, src)) => Ok(Served {
                    value: *v,
                    provenance: Provenance::Table(src.clone()),
                }),
                None => Err(Error::MissingTableEntry(format!("A({n},{d},{w})"))),
            };
        }
        let mut memo = BTreeMap::new();
        let (value, provenance) = self.cw_inner(n, d + d % 2, w.min(n - w), &mut memo);
        Ok(Served {
            value: value as u64,
            provenance,
        })
    }

    fn cw_inner(
        &self,
        n: u32,
        d: u32,
        w: u32,
        memo: &mut BTreeMap<(u32, u32, u32), (u128, Provenance)>,
    ) -> (u128, Provenance) {
        let w = w.min(n - w);
        if let Some(hit) = memo.get(&(n, d, w)) {
            return hit.clone();
        }
        let out = if let Some((v, src)) = self.a_table.get(&(n, d, w)) {
            (u128::from(*v), Provenance::Table(src.clone()))
        } else if let Some(closed) = closed_form(n, d, w) {
            closed
        } else {
            let nn = u128::from(n);
            let down = self.cw_inner(n - 1, d, w - 1, memo).0 * nn / u128::from(w);
            let side = self.cw_inner(n - 1, d, w, memo).0 * nn / u128::from(n - w);
            let weaker = self.cw_inner(n, d - 2, w, memo).0;
            (down.min(side).min(weaker), Provenance::Recursion)
        };
        memo.insert((n, d, w), out.clone());
        out
    }

    /// Upper bound on `T(w1,n1,w2,n2,d)`.
    pub fn t_upper(&self, w1: u32, n1: u32, w2: u32, n2: u32, d: u32) -> Result<Served, Error> {
        if w1 > n1 || w2 > n2 || n1 + n2 > MAX_LENGTH {
            return Err(Error::InvalidParameters(format!(
                "T({w1},{n1},{w2},{n2},{d})"
            )));
        }
        let d = d + d % 2;
        if let Some((v, src)) = self.t_table.get(&canonical_t(w1, n1, w2, n2, d)) {
            return Ok(Served {
                value: *v,
                provenance: Provenance::Table(src.clone()),
            });
        }
        if self.pinned {
            return Err(Error::MissingTableEntry(format!("T({w1},{n1},{w2},{n2},{d})")));
        }
        let h1 = 2 * w1.min(n1 - w1);
        let h2 = 2 * w2.min(n2 - w2);
        let all = binomial(n1, w1.into()) * binomial(n2, w2.into());
        let all: u64 = u64::try_from(all).unwrap_or(u64::MAX);
        if d > h1 + h2 {
            return Ok(Served {
                value: 1,
                provenance: Provenance::ClosedForm("d exceeds the largest distance".into()),
            });
        }
        if d <= 2 {
            return Ok(Served {
                value: all,
                provenance: Provenance::ClosedForm("all split-weight words".into()),
            });
        }
        let mut best = Served {
            value: all,
            provenance: Provenance::Projection,
        };
        // Within a packing, two words differ by at most h2 on the second half,
        // so their first halves are at distance >= d - h2.
        if d >= h2 + 2 {
            let v = self.cw_upper(n1, d - h2, w1)?.value;
            best.value = best.value.min(v);
        }
        if d >= h1 + 2 {
            let v = self.cw_upper(n2, d - h1, w2)?.value;
            best.value = best.value.min(v);
        }
        let mut memo = BTreeMap::new();
        let counted = self.t_counting(canonical_t(w1, n1, w2, n2, d), &mut memo)?;
        if counted < best.value {
            best = Served {
                value: counted,
                provenance: Provenance::Recursion,
            };
        }
        if let Some(v) = self.t_product_lp(w1, n1, w2, n2, d)? {
            if v < best.value {
                best = Served {
                    value: v,
                    provenance: Provenance::ProductLp,
                };
            }
        }
        if (all as u128) <= self.clique_budget as u128 && self.clique_budget > 0 {
            let found = oracle::exact_t_within(w1, n1, w2, n2, d, self.clique_budget, self.clique_node_limit)?;
            if let Some(exact) = found.filter(|&x| x as u64 <= best.value) {
                best = Served {
                    value: exact as u64,
                    provenance: Provenance::Exhaustive,
                };
            }
        }
        Ok(best)
    }

    /// Delsarte bound in `J(n1,w1) x J(n2,w2)`. Variable `(i,j)` counts words at
    /// Johnson distance `i` on the first half and `j` on the second. Words
    /// agreeing on one half form a constant-weight code on the other, which
    /// caps the two boundary groups.
    fn t_product_lp(&self, w1: u32, n1: u32, w2: u32, n2: u32, d: u32) -> Result<Option<u64>, Error> {
        if w1 == 0 || w1 == n1 || w2 == 0 || w2 == n2 {
            return Ok(None);
        }
        let (s1, s2) = (Scheme::johnson(n1, w1)?, Scheme::johnson(n2, w2)?);
        let (r1, r2) = (s1.class_count() as usize + 1, s2.class_count() as usize + 1);
        if r1 * r2 > PRODUCT_LP_MAX_VARS {
            return Ok(None);
        }
        let (q1, q2) = (s1.eigen_tables()?.q, s2.eigen_tables()?.q);
        let at = |i: usize, j: usize| i * r2 + j;
        let mut program = LinearProgram::new(r1 * r2);
        for k in 0..r1 {
            for l in 0..r2 {
                let mut row = vec![int(0); r1 * r2];
                for i in 0..r1 {
                    for j in 0..r2 {
                        row[at(i, j)] = &q1[k][i] * &q2[l][j];
                    }
                }
                program.add(Constraint::new(row, Relation::Ge, int(0)));
            }
        }
        for i in 0..r1 {
            for j in 0..r2 {
                let hamming = 2 * (i + j) as u32;
                if i + j == 0 {
                    program.fix(0, int(1));
                } else if hamming < d {
                    program.fix(at(i, j), int(0));
                }
            }
        }
        let same_first = self.cw_upper(n2, d, w2)?.value;
        let same_second = self.cw_upper(n1, d, w1)?.value;
        let mut row = vec![int(0); r1 * r2];
        (1..r2).for_each(|j| row[at(0, j)] = int(1));
        program.add(Constraint::new(row, Relation::Le, int(same_first as i64 - 1)));
        let mut row = vec![int(0); r1 * r2];
        (1..r1).for_each(|i| row[at(i, 0)] = int(1));
        program.add(Constraint::new(row, Relation::Le, int(same_second as i64 - 1)));
        program.objective = vec![int(1); r1 * r2];
        let sol = lp::solve(&program)?;
        let v = floor(sol.optimum()?);
        Ok(u64::try_from(v).ok())
    }

    /// Johnson-type double counting on one coordinate of either half:
    /// `w1 T <= n1 T(w1-1, n1-1, ...)` and `(n1-w1) T <= n1 T(w1, n1-1, ...)`.
    fn t_counting(
        &self,
        key: TKey,
        memo: &mut BTreeMap<TKey, u64>,
    ) -> Result<u64, Error> {
        let (w1, n1, w2, n2, d) = key;
        if let Some(&v) = memo.get(&key) {
            return Ok(v);
        }
        let v = if let Some((v, _)) = self.t_table.get(&key) {
            *v
        } else if w1 == 0 {
            self.cw_upper(n2, d, w2)?.value
        } else if d > 2 * w1 + 2 * w2 {
            1
        } else if d <= 2 {
            u64::try_from(binomial(n1, w1.into()) * binomial(n2, w2.into())).unwrap_or(u64::MAX)
        } else {
            let mut v = u64::MAX;
            let halves = [(w1, n1, w2, n2), (w2, n2, w1, n1)];
            for (a, m, b, k) in halves {
                if a == 0 {
                    continue;
                }
                let ones = self.t_counting(canonical_t(a - 1, m - 1, b, k, d), memo)?;
                v = v.min((u128::from(m) * u128::from(ones) / u128::from(a)) as u64);
                if m > a {
                    let zeros = self.t_counting(canonical_t(a, m - 1, b, k, d), memo)?;
                    v = v.min((u128::from(m) * u128::from(zeros) / u128::from(m - a)) as u64);
                }
            }
            match self.t_product_lp(w1, n1, w2, n2, d)? {
                Some(lp) => v.min(lp),
                None => v,
            }
        };
        memo.insert(key, v);
        Ok(v)
    }
}

/// Largest product program the provider will solve.
const PRODUCT_LP_MAX_VARS: usize = 64;

/// Proven exact values. `w` is already at most `n - w` and `d` is even.
fn closed_form(n: u32, d: u32, w: u32) -> Option<(u128, Provenance)> {
    let cf = |v: u128, name: &str| Some((v, Provenance::ClosedForm(name.to_string())));
    if d <= 2 {
        let all = binomial(n, w.into());
        return cf(u128::try_from(all).ok()?, "all words of the weight");
    }
    if w == 0 || d > 2 * w {
        return cf(1, "distance exceeds twice the weight");
    }
    if d == 2 * w {
        return cf(u128::from(n / w), "floor(n/w) disjoint supports");
    }
    if w == 3 && d == 4 && n >= 1 && (n - 1) % 12 == 9 {
        let m = u128::from(n - 1);
        return cf((m * m - 3) / 6, "A(m+1,4,3) = (m^2-3)/6 for m = 9 mod 12");
    }
    None
}
