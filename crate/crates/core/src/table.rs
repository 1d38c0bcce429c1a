//! Comparison tables: one row per length, one cell per method, with the
//! smallest bound in each row flagged. Rendering is deterministic.

use std::fmt::Write as _;
use std::ops::RangeInclusive;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::bounds::{BoundEngine, BoundRecord, Method, Mode};
use crate::Error;

/// What to tabulate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableSpec {
    pub d: u32,
    pub w: Option<u32>,
    pub n_range: RangeInclusive<u32>,
    pub methods: Vec<Method>,
}

impl TableSpec {
    pub fn validate(&self) -> Result<(), Error> {
        if self.methods.is_empty() {
            return Err(Error::InvalidParameters("no methods selected".into()));
        }
        if self.n_range.is_empty() {
            return Err(Error::InvalidParameters(format!(
                "empty length range {}..{}",
                self.n_range.start(),
                self.n_range.end()
            )));
        }
        Ok(())
    }
}

/// Outcome of one cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "status")]
pub enum Cell {
    Bound { record: Box<BoundRecord> },
    /// The method does not apply at these parameters.
    NotApplicable { reason: String },
    /// The method applies but could not produce a bound.
    Failed { kind: FailureKind, reason: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FailureKind {
    MissingInput,
    Vacuous,
    Lp,
    Other,
}

impl Cell {
    fn from_result(r: Result<BoundRecord, Error>) -> Cell {
        match r {
            Ok(record) => Cell::Bound {
                record: Box::new(record),
            },
            Err(Error::InvalidParameters(reason)) => Cell::NotApplicable { reason },
            Err(e) => {
                let kind = match e {
                    Error::MissingTableEntry(_) => FailureKind::MissingInput,
                    Error::VacuousBound(_) => FailureKind::Vacuous,
                    Error::LpStatus(_) | Error::MalformedProgram(_) => FailureKind::Lp,
                    _ => FailureKind::Other,
                };
                Cell::Failed {
                    kind,
                    reason: e.to_string(),
                }
            }
        }
    }

    pub fn bound(&self) -> Option<&BigInt> {
        match self {
            Cell::Bound { record } => Some(&record.bound),
            _ => None,
        }
    }

    /// Short text for CSV and plain output.
    pub fn marker(&self) -> String {
        match self {
            Cell::Bound { record } => record.bound.to_string(),
            Cell::NotApplicable { .. } => "-".into(),
            Cell::Failed { kind, .. } => match kind {
                FailureKind::MissingInput => "missing".into(),
                FailureKind::Vacuous => "vacuous".into(),
                FailureKind::Lp => "lp-error".into(),
                FailureKind::Other => "error".into(),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub n: u32,
    /// In the order of [`Table::methods`].
    pub cells: Vec<Cell>,
    /// Index into the methods of the smallest bound; ties go to the first.
    pub best: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub d: u32,
    pub w: Option<u32>,
    pub mode: Mode,
    pub methods: Vec<Method>,
    pub rows: Vec<Row>,
}

impl Table {
    /// Computes every cell. With `parallel`, cells are spread over scoped
    /// threads; the result does not depend on the schedule.
    pub fn compute(engine: &BoundEngine, spec: &TableSpec, parallel: bool) -> Result<Table, Error> {
        spec.validate()?;
        let jobs: Vec<(u32, Method)> = spec
            .n_range
            .clone()
            .flat_map(|n| spec.methods.iter().map(move |&m| (n, m)))
            .collect();
        let run = |&(n, m): &(u32, Method)| Cell::from_result(engine.compute(m, n, spec.d, spec.w));
        let cells: Vec<Cell> = if parallel && jobs.len() > 1 {
            let workers = std::thread::available_parallelism()
                .map(|p| p.get())
                .unwrap_or(1)
                .min(jobs.len());
            let mut slots: Vec<Option<Cell>> = vec![None; jobs.len()];
            let next = std::sync::atomic::AtomicUsize::new(0);
            let done = std::sync::Mutex::new(&mut slots);
            std::thread::scope(|s| {
                for _ in 0..workers {
                    s.spawn(|| loop {
                        let i = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                        let Some(job) = jobs.get(i) else { break };
                        let cell = run(job);
                        done.lock().expect("no worker panicked")[i] = Some(cell);
                    });
                }
            });
            slots.into_iter().map(|c| c.expect("every job ran")).collect()
        } else {
            jobs.iter().map(run).collect()
        };

        let width = spec.methods.len();
        let rows = spec
            .n_range
            .clone()
            .zip(cells.chunks(width))
            .map(|(n, chunk)| {
                let best = chunk
                    .iter()
                    .enumerate()
                    .filter_map(|(i, c)| c.bound().map(|b| (b, i)))
                    .min()
                    .map(|(_, i)| i);
                Row {
                    n,
                    cells: chunk.to_vec(),
                    best,
                }
            })
            .collect();
        Ok(Table {
            d: spec.d,
            w: spec.w,
            mode: engine.mode,
            methods: spec.methods.clone(),
            rows,
        })
    }

    /// The first failed cell in row-major order, if any.
    pub fn first_failure(&self) -> Option<(u32, Method, FailureKind, &str)> {
        self.rows.iter().find_map(|r| {
            r.cells.iter().zip(&self.methods).find_map(|(c, m)| match c {
                Cell::Failed { kind, reason } => Some((r.n, *m, *kind, reason.as_str())),
                _ => None,
            })
        })
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("n");
        for m in &self.methods {
            out.push(',');
            out.push_str(m.id());
        }
        out.push_str(",best,best_method\n");
        for r in &self.rows {
            write!(out, "{}", r.n).unwrap();
            for c in &r.cells {
                write!(out, ",{}", c.marker()).unwrap();
            }
            match r.best {
                Some(i) => writeln!(out, ",{},{}", r.cells[i].marker(), self.methods[i]).unwrap(),
                None => out.push_str(",-,-\n"),
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("table serializes")
    }

    pub fn from_json(text: &str) -> Result<Table, Error> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    /// Aligned text with the best cell of each row starred.
    pub fn to_plain(&self) -> String {
        let mut grid: Vec<Vec<String>> = vec![std::iter::once("n".to_string())
            .chain(self.methods.iter().map(|m| m.id().to_string()))
            .collect()];
        for r in &self.rows {
            let mut line = vec![r.n.to_string()];
            for (i, c) in r.cells.iter().enumerate() {
                let star = if r.best == Some(i) { "*" } else { "" };
                line.push(format!("{}{star}", c.marker()));
            }
            grid.push(line);
        }
        let widths: Vec<usize> = (0..grid[0].len())
            .map(|j| grid.iter().map(|l| l[j].len()).max().unwrap_or(0))
            .collect();
        let mut out = String::new();
        for line in grid {
            let cols: Vec<String> = line
                .iter()
                .zip(&widths)
                .map(|(s, w)| format!("{s:>w$}"))
                .collect();
            out.push_str(cols.join("  ").trim_end());
            out.push('\n');
        }
        out
    }
}
