use num_bigint::BigInt;
use rayon::prelude::*;

use super::field::Field;
use super::subspace::{uses_bits, Subspace};
use super::GfqError;
use crate::qnum::gauss_binom;

/// Default cap on the number of subspaces a single enumeration may visit.
pub const DEFAULT_BUDGET: u64 = 1 << 24;

/// Environment variable overriding [`DEFAULT_BUDGET`].
pub const BUDGET_ENV: &str = "QGRASS_BUDGET";

/// The default budget, or the value of `QGRASS_BUDGET` when it parses.
pub fn default_budget() -> u64 {
    std::env::var(BUDGET_ENV).ok().and_then(|s| s.trim().parse().ok()).unwrap_or(DEFAULT_BUDGET)
}

/// Errors unless `[n, k]_q` fits the budget.
pub fn check_budget(n: usize, k: usize, q: u64, budget: u64) -> Result<u64, GfqError> {
    let count = gauss_binom(n as i64, k as i64, q);
    if count > BigInt::from(budget) {
        return Err(GfqError::BudgetExceeded { count: count.to_string(), budget });
    }
    Ok(u64::try_from(count).expect("count below a u64 budget"))
}

/// All reduced echelon matrices sharing one set of pivot columns.
#[derive(Clone, Debug)]
pub struct PivotBlock {
    pivots: Vec<usize>,
    // (row, column) of each free entry, row-major
    free: Vec<(usize, usize)>,
    len: u64,
}

impl PivotBlock {
    fn new(n: usize, pivots: Vec<usize>, q: u64) -> PivotBlock {
        let mut free = Vec::new();
        for (r, &p) in pivots.iter().enumerate() {
            for c in p + 1..n {
                if !pivots.contains(&c) {
                    free.push((r, c));
                }
            }
        }
        let len = q.pow(free.len() as u32);
        PivotBlock { pivots, free, len }
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// The member with odometer index `rank`; the last free entry varies fastest.
    fn member(&self, field: &Field, n: usize, rank: u64) -> Subspace {
        let q = field.q() as u64;
        let k = self.pivots.len();
        let nfree = self.free.len();
        if uses_bits(field.q(), n) {
            let mut words: Vec<u64> = self.pivots.iter().map(|&p| 1u64 << p).collect();
            for (i, &(r, c)) in self.free.iter().enumerate() {
                let bit = (rank >> (nfree - 1 - i)) & 1;
                words[r] |= bit << c;
            }
            Subspace::from_bits_rref(field, n, words)
        } else {
            let mut flat = vec![0u8; k * n];
            for (r, &p) in self.pivots.iter().enumerate() {
                flat[r * n + p] = 1;
            }
            let mut x = rank;
            for &(r, c) in self.free.iter().rev() {
                flat[r * n + c] = (x % q) as u8;
                x /= q;
            }
            Subspace::from_dense_rref(field, n, flat)
        }
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        // advance to the next k-subset in lexicographic order
        let Some(i) = (0..k).rev().find(|&i| cur[i] < n - k + i) else {
            return out;
        };
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// Contiguous range of odometer indices inside one pivot block.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Chunk {
    pub block: usize,
    pub start: u64,
    pub end: u64,
}

/// The k-subspaces of GF(q)^n, enumerated by pivot pattern (lexicographic)
/// and then by free entries in odometer order.
#[derive(Clone, Debug)]
pub struct Grassmannian {
    field: Field,
    n: usize,
    k: usize,
    blocks: Vec<PivotBlock>,
    len: u64,
}

const CHUNK_LEN: u64 = 4096;

impl Grassmannian {
    pub fn new(field: &Field, n: usize, k: usize, budget: u64) -> Result<Grassmannian, GfqError> {
        if k > n {
            return Err(GfqError::InvalidDims(format!("k = {k} exceeds n = {n}")));
        }
        let len = check_budget(n, k, field.q() as u64, budget)?;
        let blocks: Vec<PivotBlock> =
            combinations(n, k).into_iter().map(|p| PivotBlock::new(n, p, field.q() as u64)).collect();
        debug_assert_eq!(blocks.iter().map(|b| b.len).sum::<u64>(), len);
        Ok(Grassmannian { field: field.clone(), n, k, blocks, len })
    }

    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.k
    }

    pub fn blocks(&self) -> &[PivotBlock] {
        &self.blocks
    }

    pub fn iter(&self) -> impl Iterator<Item = Subspace> + '_ {
        self.blocks.iter().flat_map(move |b| (0..b.len).map(move |r| b.member(&self.field, self.n, r)))
    }

    /// Disjoint ranges covering the whole enumeration, in enumeration order.
    pub fn chunks(&self, max_len: u64) -> Vec<Chunk> {
        let max_len = max_len.max(1);
        let mut out = Vec::new();
        for (i, b) in self.blocks.iter().enumerate() {
            let mut s = 0;
            while s < b.len {
                let e = (s + max_len).min(b.len);
                out.push(Chunk { block: i, start: s, end: e });
                s = e;
            }
        }
        out
    }

    pub fn chunk_iter(&self, c: Chunk) -> impl Iterator<Item = Subspace> + '_ {
        let b = &self.blocks[c.block];
        (c.start..c.end).map(move |r| b.member(&self.field, self.n, r))
    }

    /// Members satisfying `pred`, in enumeration order, computed in parallel.
    pub fn par_filter<P>(&self, pred: P) -> Vec<Subspace>
    where
        P: Fn(&Subspace) -> bool + Sync,
    {
        let parts: Vec<Vec<Subspace>> =
            self.chunks(CHUNK_LEN).into_par_iter().map(|c| self.chunk_iter(c).filter(|s| pred(s)).collect()).collect();
        parts.into_iter().flatten().collect()
    }

    /// First member in enumeration order satisfying `pred`.
    pub fn par_find_first<P>(&self, pred: P) -> Option<Subspace>
    where
        P: Fn(&Subspace) -> bool + Sync,
    {
        self.chunks(CHUNK_LEN).into_par_iter().find_map_first(|c| self.chunk_iter(c).find(|s| pred(s)))
    }

    pub fn par_count<P>(&self, pred: P) -> u64
    where
        P: Fn(&Subspace) -> bool + Sync,
    {
        self.chunks(CHUNK_LEN).into_par_iter().map(|c| self.chunk_iter(c).filter(|s| pred(s)).count() as u64).sum()
    }
}

/// Owning stream over the k-subspaces of GF(q)^n.
pub struct GrassmannianStream {
    g: Grassmannian,
    block: usize,
    rank: u64,
}

impl Iterator for GrassmannianStream {
    type Item = Subspace;

    fn next(&mut self) -> Option<Subspace> {
        while self.block < self.g.blocks.len() {
            let b = &self.g.blocks[self.block];
            if self.rank < b.len {
                let s = b.member(&self.g.field, self.g.n, self.rank);
                self.rank += 1;
                return Some(s);
            }
            self.block += 1;
            self.rank = 0;
        }
        None
    }
}

impl IntoIterator for Grassmannian {
    type Item = Subspace;
    type IntoIter = GrassmannianStream;

    fn into_iter(self) -> GrassmannianStream {
        GrassmannianStream { g: self, block: 0, rank: 0 }
    }
}

/// Every k-subspace of GF(q)^n exactly once, in deterministic order.
pub fn enumerate_grassmannian(n: usize, k: usize, field: &Field, budget: u64) -> Result<GrassmannianStream, GfqError> {
    Ok(Grassmannian::new(field, n, k, budget)?.into_iter())
}

/// The k-subspaces of `host`, enumerated through its coordinate map.
pub fn subspaces_of(host: &Subspace, k: usize, budget: u64) -> Result<Vec<Subspace>, GfqError> {
    let g = Grassmannian::new(host.field(), host.dim(), k, budget)?;
    g.iter().map(|s| host.embed(&s)).collect()
}

#[cfg(test)]
mod tests {
    use std::collections::HashSet;

    use super::*;
    use crate::gfq::make_field;

    #[test]
    fn small_counts() {
        let f = make_field(2).unwrap();
        let all: Vec<Subspace> = enumerate_grassmannian(4, 2, &f, DEFAULT_BUDGET).unwrap().collect();
        assert_eq!(all.len(), 35);
        let set: HashSet<_> = all.iter().cloned().collect();
        assert_eq!(set.len(), 35);
        let zero: Vec<_> = enumerate_grassmannian(5, 0, &f, DEFAULT_BUDGET).unwrap().collect();
        assert_eq!(zero, vec![Subspace::zero(&f, 5)]);
    }

    #[test]
    fn order_is_lexicographic_in_pivots() {
        let f = make_field(3).unwrap();
        let g = Grassmannian::new(&f, 4, 2, DEFAULT_BUDGET).unwrap();
        let pivots: Vec<Vec<usize>> = g.iter().map(|s| s.pivots()).collect();
        let mut sorted = pivots.clone();
        sorted.sort();
        assert_eq!(pivots, sorted);
        let first = g.iter().next().unwrap();
        assert_eq!(first.rows(), vec![vec![1, 0, 0, 0], vec![0, 1, 0, 0]]);
    }

    #[test]
    fn chunks_cover_everything_once() {
        let f = make_field(2).unwrap();
        let g = Grassmannian::new(&f, 7, 3, DEFAULT_BUDGET).unwrap();
        let via_chunks: Vec<Subspace> =
            g.chunks(100).into_iter().flat_map(|c| g.chunk_iter(c).collect::<Vec<_>>()).collect();
        let direct: Vec<Subspace> = g.iter().collect();
        assert_eq!(via_chunks, direct);
        assert_eq!(g.par_filter(|_| true), direct);
        assert_eq!(
            g.par_count(|s| s.pivots()[0] == 0),
            g.blocks().iter().filter(|b| b.pivots()[0] == 0).map(|b| b.len()).sum::<u64>()
        );
        let target = direct[12345 % direct.len()].clone();
        assert_eq!(g.par_find_first(|s| *s == target), Some(target));
    }

    #[test]
    fn budget_is_enforced() {
        let f = make_field(2).unwrap();
        assert!(matches!(Grassmannian::new(&f, 10, 5, 1000), Err(GfqError::BudgetExceeded { .. })));
        assert!(Grassmannian::new(&f, 4, 2, 35).is_ok());
        assert!(Grassmannian::new(&f, 4, 2, 34).is_err());
    }

    #[test]
    fn subspaces_of_a_host() {
        let f = make_field(2).unwrap();
        let host =
            Subspace::from_rows(&f, 6, &[vec![1, 1, 0, 0, 0, 0], vec![0, 0, 1, 1, 0, 0], vec![0, 0, 0, 0, 1, 1]])
                .unwrap();
        let lines = subspaces_of(&host, 1, DEFAULT_BUDGET).unwrap();
        assert_eq!(lines.len(), 7);
        assert!(lines.iter().all(|l| host.contains(l)));
    }
}
