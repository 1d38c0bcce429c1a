//! Exact code sizes by maximum-clique search on small compatibility graphs.
//!
//! Vertices are words and two words are adjacent when their Hamming distance
//! is at least `d`. The search is a bitset branch and bound with greedy
//! colouring bounds. Every graph built here is vertex-transitive under
//! coordinate permutations that preserve a split of the coordinates into two
//! halves (and translations for unrestricted codes), so the first vertex is
//! fixed. Further up the tree, the chosen words cut the coordinates into cells;
//! permutations preserving every cell fix the partial clique, and the search
//! branches on one word per orbit of that group.

use std::collections::BTreeMap;

use crate::Error;

/// Default vertex budget for constant-weight and split-weight searches.
pub const DEFAULT_BUDGET: usize = 5000;
/// Default budget on `2^n` for unrestricted codes.
pub const DEFAULT_WORD_BUDGET: usize = 512;
/// Default node limit when a table provider runs the search on its own.
pub const DEFAULT_NODE_LIMIT: u64 = 200_000;
/// Budgets above this are refused whatever the configuration says.
pub const HARD_CEILING: usize = 1 << 16;

type Bits = Vec<u64>;

fn words(bits: usize) -> usize {
    bits.div_ceil(64)
}

fn set(b: &mut [u64], i: usize) {
    b[i / 64] |= 1 << (i % 64);
}

fn clear(b: &mut [u64], i: usize) {
    b[i / 64] &= !(1 << (i % 64));
}

fn first_bit(bits: &[u64]) -> Option<usize> {
    bits.iter()
        .enumerate()
        .find(|(_, &w)| w != 0)
        .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
}

#[derive(Debug, Clone)]
pub struct CompatGraph {
    pub vertices: Vec<u64>,
    left_mask: u64,
    adj: Vec<Bits>,
}

impl CompatGraph {
    /// Graph on `vertices` with one coordinate block.
    pub fn new(vertices: Vec<u64>, d: u32) -> Self {
        CompatGraph::with_halves(vertices, d, u64::MAX)
    }

    /// Graph whose symmetry group preserves the coordinates in `left_mask`
    /// and its complement separately.
    pub fn with_halves(vertices: Vec<u64>, d: u32, left_mask: u64) -> Self {
        let m = vertices.len();
        let mut adj = vec![vec![0u64; words(m)]; m];
        for i in 0..m {
            for j in (i + 1)..m {
                if (vertices[i] ^ vertices[j]).count_ones() >= d {
                    set(&mut adj[i], j);
                    set(&mut adj[j], i);
                }
            }
        }
        CompatGraph {
            vertices,
            left_mask,
            adj,
        }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        self.adj[i][j / 64] >> (j % 64) & 1 == 1
    }

    /// Clique number of the subgraph induced by `mask` (all vertices if
    /// `None`). No symmetry is assumed.
    pub fn clique_number(&self, mask: Option<&[bool]>) -> usize {
        let m = self.len();
        let mut p = vec![0u64; words(m)];
        for v in 0..m {
            if mask.is_none_or(|k| k[v]) {
                set(&mut p, v);
            }
        }
        let mut st = Search::new(usize::MAX, u64::MAX);
        self.expand(0, p, &mut st);
        st.best
    }

    /// Clique number using the symmetry described in the module docs.
    pub fn clique_number_transitive(&self) -> usize {
        self.search_transitive(usize::MAX, u64::MAX)
            .expect("unlimited search completes")
    }

    /// As [`clique_number_transitive`](Self::clique_number_transitive), but
    /// gives up with `None` after visiting `node_limit` search nodes.
    pub fn clique_number_within(&self, node_limit: u64) -> Option<usize> {
        self.search_transitive(usize::MAX, node_limit)
    }

    /// True when a clique of `k` vertices exists. Stops at the first witness.
    pub fn has_clique(&self, k: usize) -> bool {
        k == 0
            || self
                .search_transitive(k, u64::MAX)
                .expect("unlimited search completes")
                >= k
    }

    /// Decision version with a node limit; `None` when the limit ran out first.
    pub fn has_clique_within(&self, k: usize, node_limit: u64) -> Option<bool> {
        if k == 0 {
            return Some(true);
        }
        self.search_transitive(k, node_limit).map(|b| b >= k)
    }

    fn search_transitive(&self, target: usize, node_limit: u64) -> Option<usize> {
        if self.is_empty() {
            return Some(0);
        }
        let mut st = Search::new(target, node_limit);
        st.best = 1;
        if target <= 1 {
            return Some(1);
        }
        let cells = refine(&[self.left_mask, !self.left_mask], self.vertices[0]);
        self.expand_orbits(1, self.adj[0].clone(), &cells, &mut st);
        (!st.aborted).then_some(st.best)
    }

    /// Branch and bound that branches on one vertex per orbit of the group of
    /// coordinate permutations preserving every cell, then drops the orbit.
    fn expand_orbits(&self, size: usize, mut p: Bits, cells: &[u64], st: &mut Search) {
        if !st.visit() {
            return;
        }
        let mut orbits: BTreeMap<Vec<u8>, Vec<usize>> = BTreeMap::new();
        let mut members = 0;
        for (wi, &word) in p.iter().enumerate() {
            let mut bits = word;
            while bits != 0 {
                let v = wi * 64 + bits.trailing_zeros() as usize;
                bits &= bits - 1;
                let x = self.vertices[v];
                let key = cells.iter().map(|c| (x & c).count_ones() as u8).collect();
                orbits.entry(key).or_default().push(v);
                members += 1;
            }
        }
        if members == 0 {
            st.best = st.best.max(size);
            return;
        }
        if orbits.len() == members {
            self.expand(size, p, st);
            return;
        }
        let mut orbits: Vec<Vec<usize>> = orbits.into_values().collect();
        orbits.sort_by_key(|o| std::cmp::Reverse(o.len()));
        for orbit in orbits {
            if st.done() || size + self.colour_count(&p) <= st.best {
                return;
            }
            let v = orbit[0];
            let next: Bits = p.iter().zip(&self.adj[v]).map(|(a, b)| a & b).collect();
            let finer = refine(cells, self.vertices[v]);
            self.expand_orbits(size + 1, next, &finer, st);
            for u in orbit {
                clear(&mut p, u);
            }
        }
    }

    fn colour_count(&self, p: &[u64]) -> usize {
        let mut uncoloured = p.to_vec();
        let mut q = vec![0u64; p.len()];
        let mut k = 0;
        while uncoloured.iter().any(|&w| w != 0) {
            k += 1;
            q.copy_from_slice(&uncoloured);
            while let Some(v) = first_bit(&q) {
                clear(&mut uncoloured, v);
                clear(&mut q, v);
                for (a, b) in q.iter_mut().zip(&self.adj[v]) {
                    *a &= !b;
                }
            }
        }
        k
    }

    fn expand(&self, size: usize, mut p: Bits, st: &mut Search) {
        if !st.visit() {
            return;
        }
        let need = (st.best + 1).saturating_sub(size);
        let (order, colours) = self.colour(&p, need);
        for idx in (0..order.len()).rev() {
            if size + colours[idx] <= st.best || st.done() {
                return;
            }
            let v = order[idx];
            let next: Bits = p.iter().zip(&self.adj[v]).map(|(a, b)| a & b).collect();
            if next.iter().all(|&w| w == 0) {
                st.best = st.best.max(size + 1);
            } else {
                self.expand(size + 1, next, st);
            }
            clear(&mut p, v);
        }
    }

    /// Greedy sequential colouring of the candidate set. Only vertices whose
    /// colour reaches `need` are returned, in nondecreasing colour order; the
    /// rest cannot complete a larger clique on their own.
    fn colour(&self, p: &[u64], need: usize) -> (Vec<usize>, Vec<usize>) {
        let mut uncoloured = p.to_vec();
        let mut q = vec![0u64; p.len()];
        let mut order = Vec::new();
        let mut colours = Vec::new();
        let mut k = 0;
        while uncoloured.iter().any(|&w| w != 0) {
            k += 1;
            q.copy_from_slice(&uncoloured);
            while let Some(v) = first_bit(&q) {
                clear(&mut uncoloured, v);
                clear(&mut q, v);
                for (a, b) in q.iter_mut().zip(&self.adj[v]) {
                    *a &= !b;
                }
                if k >= need {
                    order.push(v);
                    colours.push(k);
                }
            }
        }
        (order, colours)
    }
}

/// Mutable state of one search.
struct Search {
    best: usize,
    target: usize,
    nodes_left: u64,
    aborted: bool,
}

impl Search {
    fn new(target: usize, node_limit: u64) -> Self {
        Search {
            best: 0,
            target,
            nodes_left: node_limit,
            aborted: false,
        }
    }

    /// Counts a node; false once the limit is spent.
    fn visit(&mut self) -> bool {
        if self.nodes_left == 0 {
            self.aborted = true;
            return false;
        }
        self.nodes_left -= 1;
        true
    }

    fn done(&self) -> bool {
        self.aborted || self.best >= self.target
    }
}

/// Splits every cell by the support of `word`, dropping empty parts.
fn refine(cells: &[u64], word: u64) -> Vec<u64> {
    cells
        .iter()
        .flat_map(|&c| [c & word, c & !word])
        .filter(|&c| c != 0)
        .collect()
}

fn check_budget(count: usize, budget: usize) -> Result<(), Error> {
    if budget > HARD_CEILING {
        return Err(Error::Budget(format!(
            "budget {budget} is above the hard ceiling {HARD_CEILING}"
        )));
    }
    if count > budget {
        return Err(Error::Budget(format!(
            "{count} vertices exceed the budget of {budget}"
        )));
    }
    Ok(())
}

/// Words of length `n` and weight `w`, in increasing numeric order.
pub fn weight_words(n: u32, w: u32) -> Vec<u64> {
    assert!(n <= 63);
    let mut out = Vec::new();
    if w > n {
        return out;
    }
    if w == 0 {
        return vec![0];
    }
    let mut x: u64 = (1u64 << w) - 1;
    let limit = 1u64 << n;
    while x < limit {
        out.push(x);
        // Gosper's hack: next word with the same popcount
        let c = x & x.wrapping_neg();
        let r = x + c;
        x = (((r ^ x) >> 2) / c) | r;
    }
    out
}

fn whole_space(n: u32, d: u32, budget: usize) -> Result<Option<CompatGraph>, Error> {
    if n >= 32 {
        return Err(Error::Budget(format!("length {n} is beyond exhaustive search")));
    }
    if d > n || d <= 1 {
        return Ok(None);
    }
    check_budget(1usize << n, budget)?;
    Ok(Some(CompatGraph::new((0..1u64 << n).collect(), d)))
}

/// Exact `A(n,d)`. Requires `2^n <= budget`.
pub fn exact_a(n: u32, d: u32, budget: usize) -> Result<usize, Error> {
    if d > n {
        return Ok(1);
    }
    match whole_space(n, d, budget)? {
        Some(g) => Ok(g.clique_number_transitive()),
        None => Ok(1usize << n),
    }
}

fn cw_graph(n: u32, d: u32, w: u32, budget: usize) -> Result<CompatGraph, Error> {
    if w > n || n > 63 {
        return Err(Error::InvalidParameters(format!("A({n},{d},{w})")));
    }
    let w = w.min(n - w);
    let count = crate::scheme::binomial(n, w.into());
    let count = usize::try_from(count).unwrap_or(usize::MAX);
    check_budget(count, budget)?;
    Ok(CompatGraph::new(weight_words(n, w), d))
}

/// Exact `A(n,d,w)`. Requires `C(n,w) <= budget`.
pub fn exact_cw(n: u32, d: u32, w: u32, budget: usize) -> Result<usize, Error> {
    Ok(cw_graph(n, d, w, budget)?.clique_number_transitive())
}

/// Whether some `(n, size, d)` constant-weight code of weight `w` exists.
/// Cheaper than [`exact_cw`] when `size` is above the true maximum.
pub fn cw_code_exists(n: u32, d: u32, w: u32, size: usize, budget: usize) -> Result<bool, Error> {
    Ok(cw_graph(n, d, w, budget)?.has_clique(size))
}

fn t_graph(w1: u32, n1: u32, w2: u32, n2: u32, d: u32, budget: usize) -> Result<CompatGraph, Error> {
    if w1 > n1 || w2 > n2 || n1 + n2 > 63 {
        return Err(Error::InvalidParameters(format!("T({w1},{n1},{w2},{n2},{d})")));
    }
    let left = weight_words(n1, w1);
    let right = weight_words(n2, w2);
    check_budget(left.len().saturating_mul(right.len()), budget)?;
    let mut vertices = Vec::with_capacity(left.len() * right.len());
    for &a in &left {
        for &b in &right {
            vertices.push(a << n2 | b);
        }
    }
    vertices.sort_unstable();
    let left_mask = ((1u64 << n1) - 1) << n2;
    Ok(CompatGraph::with_halves(vertices, d, left_mask))
}

/// Exact `T(w1,n1,w2,n2,d)`. Requires `C(n1,w1) C(n2,w2) <= budget`.
pub fn exact_t(w1: u32, n1: u32, w2: u32, n2: u32, d: u32, budget: usize) -> Result<usize, Error> {
    Ok(t_graph(w1, n1, w2, n2, d, budget)?.clique_number_transitive())
}

/// [`exact_cw`] that gives up with `None` after `node_limit` search nodes.
pub fn exact_cw_within(n: u32, d: u32, w: u32, budget: usize, node_limit: u64) -> Result<Option<usize>, Error> {
    Ok(cw_graph(n, d, w, budget)?.clique_number_within(node_limit))
}

/// [`cw_code_exists`] with a node limit.
pub fn cw_code_exists_within(
    n: u32,
    d: u32,
    w: u32,
    size: usize,
    budget: usize,
    node_limit: u64,
) -> Result<Option<bool>, Error> {
    Ok(cw_graph(n, d, w, budget)?.has_clique_within(size, node_limit))
}

/// Exact `T(...)` if the search finishes within `node_limit` nodes.
pub fn exact_t_within(
    w1: u32,
    n1: u32,
    w2: u32,
    n2: u32,
    d: u32,
    budget: usize,
    node_limit: u64,
) -> Result<Option<usize>, Error> {
    Ok(t_graph(w1, n1, w2, n2, d, budget)?.clique_number_within(node_limit))
}

/// Whether a split-weight packing of `size` words exists.
pub fn t_packing_exists(
    w1: u32,
    n1: u32,
    w2: u32,
    n2: u32,
    d: u32,
    size: usize,
    budget: usize,
) -> Result<bool, Error> {
    Ok(t_graph(w1, n1, w2, n2, d, budget)?.has_clique(size))
}
