use std::fmt;
use std::hash::{Hash, Hasher};

use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::field::{make_field, Field, FieldSpec};
use super::GfqError;

/// Basis rows in reduced row-echelon form.
///
/// Over GF(2) with `n <= 64` a row is a word whose bit `j` is column `j`;
/// otherwise rows are stored flat, `n` element indices per row.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) enum Rows {
    Bits(Vec<u64>),
    Dense(Vec<u8>),
}

/// A subspace of GF(q)^n held as its unique reduced row-echelon basis.
///
/// Pivot columns increase down the rows, pivot entries are 1 and every other
/// entry in a pivot column is 0, so two values are equal exactly when they
/// span the same set of vectors.
#[derive(Clone)]
pub struct Subspace {
    field: Field,
    n: usize,
    dim: usize,
    rows: Rows,
}

impl PartialEq for Subspace {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.field.q() == other.field.q() && self.rows == other.rows
    }
}

impl Eq for Subspace {}

impl Hash for Subspace {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.n.hash(state);
        self.field.q().hash(state);
        self.rows.hash(state);
    }
}

impl PartialOrd for Subspace {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Subspace {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.field.q(), self.n, self.dim, &self.rows).cmp(&(other.field.q(), other.n, other.dim, &other.rows))
    }
}

pub(crate) fn uses_bits(q: u8, n: usize) -> bool {
    q == 2 && n <= 64
}

#[inline]
fn low_bit(v: u64) -> u64 {
    v & v.wrapping_neg()
}

/// Reduced echelon basis of the span of `vs`, sorted by pivot column.
pub(crate) fn rref_bits(vs: impl IntoIterator<Item = u64>) -> Vec<u64> {
    let mut basis: Vec<u64> = Vec::new();
    for mut v in vs {
        for &b in &basis {
            if v & low_bit(b) != 0 {
                v ^= b;
            }
        }
        if v == 0 {
            continue;
        }
        let p = low_bit(v);
        for b in basis.iter_mut() {
            if *b & p != 0 {
                *b ^= v;
            }
        }
        basis.push(v);
    }
    basis.sort_unstable_by_key(|b| b.trailing_zeros());
    basis
}

/// In-place reduced echelon form of a flat `nrows x n` matrix; returns the rank
/// and truncates `m` to the nonzero rows.
pub(crate) fn rref_dense(f: &FieldSpec, n: usize, m: &mut Vec<u8>) -> usize {
    let nrows = if n == 0 { 0 } else { m.len() / n };
    let mut rank = 0;
    for col in 0..n {
        if rank == nrows {
            break;
        }
        let Some(r) = (rank..nrows).find(|&r| m[r * n + col] != 0) else {
            continue;
        };
        if r != rank {
            for j in 0..n {
                m.swap(r * n + j, rank * n + j);
            }
        }
        let s = f.inv(m[rank * n + col]);
        if s != 1 {
            for j in col..n {
                m[rank * n + j] = f.mul(s, m[rank * n + j]);
            }
        }
        for i in 0..nrows {
            if i == rank {
                continue;
            }
            let c = m[i * n + col];
            if c == 0 {
                continue;
            }
            for j in col..n {
                let sub = f.mul(c, m[rank * n + j]);
                m[i * n + j] = f.sub(m[i * n + j], sub);
            }
        }
        rank += 1;
    }
    m.truncate(rank * n);
    rank
}

impl Subspace {
    /// The zero subspace of GF(q)^n.
    pub fn zero(field: &Field, n: usize) -> Subspace {
        let rows = if uses_bits(field.q(), n) { Rows::Bits(Vec::new()) } else { Rows::Dense(Vec::new()) };
        Subspace { field: field.clone(), n, dim: 0, rows }
    }

    /// GF(q)^n itself.
    pub fn full(field: &Field, n: usize) -> Subspace {
        let rows: Vec<Vec<u8>> = (0..n).map(|i| (0..n).map(|j| u8::from(i == j)).collect()).collect();
        Subspace::from_rows(field, n, &rows).expect("identity rows are valid")
    }

    /// Canonical form of the span of `rows`.
    pub fn from_rows(field: &Field, n: usize, rows: &[Vec<u8>]) -> Result<Subspace, GfqError> {
        let q = field.q();
        for (i, r) in rows.iter().enumerate() {
            if r.len() != n {
                return Err(GfqError::RowLength { row: i, expected: n, got: r.len() });
            }
            if let Some(col) = r.iter().position(|&x| x >= q) {
                return Err(GfqError::InvalidEntry { row: i, col, value: r[col] as u64, q: q as u64 });
            }
        }
        if uses_bits(q, n) {
            let words = rows.iter().map(|r| r.iter().enumerate().fold(0u64, |acc, (j, &x)| acc | ((x as u64) << j)));
            Ok(Self::from_bits_rref(field, n, rref_bits(words)))
        } else {
            let mut flat: Vec<u8> = rows.iter().flatten().copied().collect();
            let dim = rref_dense(field, n, &mut flat);
            Ok(Subspace { field: field.clone(), n, dim, rows: Rows::Dense(flat) })
        }
    }

    /// Like [`Subspace::from_rows`] but requires `rows` to already be the
    /// canonical basis; reports the first row that differs.
    pub fn from_canonical_rows(field: &Field, n: usize, rows: &[Vec<u8>]) -> Result<Subspace, GfqError> {
        let s = Subspace::from_rows(field, n, rows)?;
        let canon = s.rows();
        if canon.len() != rows.len() {
            return Err(GfqError::NotCanonical { row: canon.len().min(rows.len()) });
        }
        if let Some(row) = canon.iter().zip(rows).position(|(a, b)| a != b) {
            return Err(GfqError::NotCanonical { row });
        }
        Ok(s)
    }

    /// `words` must already be sorted reduced echelon rows.
    pub(crate) fn from_bits_rref(field: &Field, n: usize, words: Vec<u64>) -> Subspace {
        debug_assert!(uses_bits(field.q(), n));
        Subspace { field: field.clone(), n, dim: words.len(), rows: Rows::Bits(words) }
    }

    /// `flat` must already be a reduced echelon matrix.
    pub(crate) fn from_dense_rref(field: &Field, n: usize, flat: Vec<u8>) -> Subspace {
        let dim = if n == 0 { 0 } else { flat.len() / n };
        if uses_bits(field.q(), n) {
            let words = flat
                .chunks(n)
                .map(|r| r.iter().enumerate().fold(0u64, |acc, (j, &x)| acc | ((x as u64) << j)))
                .collect();
            return Self::from_bits_rref(field, n, words);
        }
        Subspace { field: field.clone(), n, dim, rows: Rows::Dense(flat) }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn q(&self) -> u64 {
        self.field.q() as u64
    }

    /// Canonical basis rows as element indices.
    pub fn rows(&self) -> Vec<Vec<u8>> {
        match &self.rows {
            Rows::Bits(ws) => ws.iter().map(|w| (0..self.n).map(|j| ((w >> j) & 1) as u8).collect()).collect(),
            Rows::Dense(flat) => flat.chunks(self.n.max(1)).map(|r| r.to_vec()).collect(),
        }
    }

    /// Pivot column of each basis row.
    pub fn pivots(&self) -> Vec<usize> {
        match &self.rows {
            Rows::Bits(ws) => ws.iter().map(|w| w.trailing_zeros() as usize).collect(),
            Rows::Dense(flat) => {
                flat.chunks(self.n.max(1)).map(|r| r.iter().position(|&x| x != 0).expect("nonzero row")).collect()
            }
        }
    }

    fn check_same_space(&self, other: &Subspace) -> Result<(), GfqError> {
        if self.n != other.n || self.field.q() != other.field.q() {
            return Err(GfqError::AmbientMismatch { left: (self.n, self.q()), right: (other.n, other.q()) });
        }
        Ok(())
    }

    /// Reduces `v` against this basis; the result is zero iff `v` lies in the span.
    fn reduce_dense(&self, v: &mut [u8]) {
        let Rows::Dense(flat) = &self.rows else { unreachable!() };
        let n = self.n;
        let f = &self.field;
        for (row, &p) in flat.chunks(n).zip(self.pivots().iter()) {
            let c = v[p];
            if c != 0 {
                for j in p..n {
                    v[j] = f.sub(v[j], f.mul(c, row[j]));
                }
            }
        }
    }

    /// Rank of the rows of `other` modulo `self`.
    fn rank_mod(&self, other: &Subspace) -> usize {
        match (&self.rows, &other.rows) {
            (Rows::Bits(a), Rows::Bits(b)) => {
                let reduce = |w: u64| {
                    let mut v = w;
                    for &r in a {
                        if v & low_bit(r) != 0 {
                            v ^= r;
                        }
                    }
                    v
                };
                if b.len() > 16 {
                    return rref_bits(b.iter().map(|&w| reduce(w))).len();
                }
                // echelon basis of the residues, each with a distinct lowest bit
                let mut basis = [0u64; 16];
                let mut rank = 0;
                for &w in b {
                    let mut v = reduce(w);
                    for &r in &basis[..rank] {
                        if v & low_bit(r) != 0 {
                            v ^= r;
                        }
                    }
                    if v != 0 {
                        let p = low_bit(v);
                        for r in basis[..rank].iter_mut() {
                            if *r & p != 0 {
                                *r ^= v;
                            }
                        }
                        basis[rank] = v;
                        rank += 1;
                    }
                }
                rank
            }
            (Rows::Dense(_), Rows::Dense(b)) => {
                let n = self.n;
                let mut residue: Vec<u8> = Vec::with_capacity(b.len());
                for row in b.chunks(n) {
                    let mut v = row.to_vec();
                    self.reduce_dense(&mut v);
                    residue.extend_from_slice(&v);
                }
                rref_dense(&self.field, n, &mut residue)
            }
            _ => unreachable!("mixed row storage in one ambient space"),
        }
    }

    /// `dim(self ∩ other)` without shape checks; callers guarantee a shared ambient space.
    #[inline]
    pub(crate) fn meet_dim(&self, other: &Subspace) -> usize {
        other.dim - self.rank_mod(other)
    }

    /// `dim(self ∩ other)`.
    pub fn intersect_dim(&self, other: &Subspace) -> Result<usize, GfqError> {
        self.check_same_space(other)?;
        Ok(self.meet_dim(other))
    }

    /// True when `other ⊆ self`.
    pub fn contains(&self, other: &Subspace) -> bool {
        other.dim <= self.dim && self.rank_mod(other) == 0
    }

    pub fn contains_vector(&self, v: &[u8]) -> Result<bool, GfqError> {
        let s = Subspace::from_rows(&self.field, self.n, &[v.to_vec()])?;
        Ok(self.contains(&s))
    }

    /// `self + other`.
    pub fn sum(&self, other: &Subspace) -> Result<Subspace, GfqError> {
        self.check_same_space(other)?;
        Ok(self.sum_unchecked(other))
    }

    pub(crate) fn sum_unchecked(&self, other: &Subspace) -> Subspace {
        match (&self.rows, &other.rows) {
            (Rows::Bits(a), Rows::Bits(b)) => {
                Self::from_bits_rref(&self.field, self.n, rref_bits(a.iter().chain(b).copied()))
            }
            (Rows::Dense(a), Rows::Dense(b)) => {
                let mut flat = a.clone();
                flat.extend_from_slice(b);
                let dim = rref_dense(&self.field, self.n, &mut flat);
                Subspace { field: self.field.clone(), n: self.n, dim, rows: Rows::Dense(flat) }
            }
            _ => unreachable!("mixed row storage in one ambient space"),
        }
    }

    /// `self ∩ other` by the Zassenhaus algorithm.
    pub fn intersection(&self, other: &Subspace) -> Result<Subspace, GfqError> {
        self.check_same_space(other)?;
        Ok(self.intersection_unchecked(other))
    }

    pub(crate) fn intersection_unchecked(&self, other: &Subspace) -> Subspace {
        let n = self.n;
        match (&self.rows, &other.rows) {
            (Rows::Bits(a), Rows::Bits(b)) => {
                // (a | a) and (b | 0) in 2n columns, left half in the low bits.
                let mut basis: Vec<u128> = Vec::new();
                let rows = a.iter().map(|&w| w as u128 | ((w as u128) << n)).chain(b.iter().map(|&w| w as u128));
                for mut v in rows {
                    for &r in &basis {
                        if v & (r & r.wrapping_neg()) != 0 {
                            v ^= r;
                        }
                    }
                    if v == 0 {
                        continue;
                    }
                    let p = v & v.wrapping_neg();
                    for r in basis.iter_mut() {
                        if *r & p != 0 {
                            *r ^= v;
                        }
                    }
                    basis.push(v);
                }
                let left_mask = if n == 64 { u64::MAX as u128 } else { (1u128 << n) - 1 };
                let meet = basis.iter().filter(|&&r| r & left_mask == 0).map(|&r| (r >> n) as u64);
                Self::from_bits_rref(&self.field, n, rref_bits(meet))
            }
            (Rows::Dense(a), Rows::Dense(b)) => {
                let w = 2 * n;
                let mut m = Vec::with_capacity((self.dim + other.dim) * w);
                for row in a.chunks(n) {
                    m.extend_from_slice(row);
                    m.extend_from_slice(row);
                }
                for row in b.chunks(n) {
                    m.extend_from_slice(row);
                    m.extend(std::iter::repeat(0).take(n));
                }
                rref_dense(&self.field, w, &mut m);
                let mut meet: Vec<u8> = Vec::new();
                for row in m.chunks(w) {
                    if row[..n].iter().all(|&x| x == 0) {
                        meet.extend_from_slice(&row[n..]);
                    }
                }
                let dim = rref_dense(&self.field, n, &mut meet);
                Subspace { field: self.field.clone(), n, dim, rows: Rows::Dense(meet) }
            }
            _ => unreachable!("mixed row storage in one ambient space"),
        }
    }

    /// Image of `sub ⊆ GF(q)^{dim self}` under the coordinate map given by this
    /// basis, i.e. the subspace of `self` whose coordinates span `sub`.
    pub fn embed(&self, sub: &Subspace) -> Result<Subspace, GfqError> {
        if sub.n != self.dim || sub.q() != self.q() {
            return Err(GfqError::AmbientMismatch { left: (self.dim, self.q()), right: (sub.n, sub.q()) });
        }
        let f = &self.field;
        let basis = self.rows();
        let images: Vec<Vec<u8>> = sub
            .rows()
            .iter()
            .map(|coords| {
                let mut v = vec![0u8; self.n];
                for (c, b) in coords.iter().zip(&basis) {
                    if *c != 0 {
                        for (x, &y) in v.iter_mut().zip(b) {
                            *x = f.add(*x, f.mul(*c, y));
                        }
                    }
                }
                v
            })
            .collect();
        Subspace::from_rows(f, self.n, &images)
    }

    /// All `q^dim` vectors of the subspace.
    pub fn vectors(&self) -> Vec<Vec<u8>> {
        let q = self.field.q() as usize;
        let basis = self.rows();
        let total = q.pow(self.dim as u32);
        let f = &self.field;
        (0..total)
            .map(|mut code| {
                let mut v = vec![0u8; self.n];
                for b in &basis {
                    let c = (code % q) as u8;
                    code /= q;
                    if c != 0 {
                        for (x, &y) in v.iter_mut().zip(b) {
                            *x = f.add(*x, f.mul(c, y));
                        }
                    }
                }
                v
            })
            .collect()
    }

    /// Uniformly random vectors until their span reaches dimension `d`.
    pub fn random<R: Rng + ?Sized>(field: &Field, n: usize, d: usize, rng: &mut R) -> Result<Subspace, GfqError> {
        if d > n {
            return Err(GfqError::InvalidDims(format!("dimension {d} exceeds ambient {n}")));
        }
        Subspace::zero(field, n).extend_randomly(d, rng)
    }

    /// A random superspace of `self` of dimension `d`.
    pub fn extend_randomly<R: Rng + ?Sized>(&self, d: usize, rng: &mut R) -> Result<Subspace, GfqError> {
        if d < self.dim || d > self.n {
            return Err(GfqError::InvalidDims(format!("cannot extend dim {} to {d} in ambient {}", self.dim, self.n)));
        }
        let q = self.field.q();
        let mut cur = self.clone();
        while cur.dim < d {
            let v: Vec<u8> = (0..self.n).map(|_| rng.gen_range(0..q)).collect();
            let line = Subspace::from_rows(&self.field, self.n, &[v])?;
            cur = cur.sum_unchecked(&line);
        }
        Ok(cur)
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(GF({})^{}, dim {}, {})", self.q(), self.n, self.dim, self)
    }
}

impl fmt::Display for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> =
            self.rows().iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")).collect();
        write!(f, "[{}]", rows.join("; "))
    }
}

#[derive(Serialize, Deserialize)]
struct SubspaceRepr {
    n: usize,
    q: u64,
    dim: usize,
    rows: Vec<Vec<u8>>,
}

impl Serialize for Subspace {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        SubspaceRepr { n: self.n, q: self.q(), dim: self.dim, rows: self.rows() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Subspace {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let repr = SubspaceRepr::deserialize(d)?;
        let field = make_field(repr.q).map_err(D::Error::custom)?;
        if repr.rows.len() != repr.dim {
            return Err(D::Error::custom(format!("dim {} but {} rows", repr.dim, repr.rows.len())));
        }
        Subspace::from_canonical_rows(&field, repr.n, &repr.rows).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn gf(q: u64) -> Field {
        make_field(q).unwrap()
    }

    fn dense_copy(s: &Subspace) -> Subspace {
        // Same subspace forced into flat storage.
        let mut flat: Vec<u8> = s.rows().into_iter().flatten().collect();
        let dim = rref_dense(s.field(), s.n, &mut flat);
        Subspace { field: s.field.clone(), n: s.n, dim, rows: Rows::Dense(flat) }
    }

    #[test]
    fn canonical_form_example() {
        let f = gf(2);
        let s = Subspace::from_rows(&f, 3, &[vec![1, 1, 0], vec![0, 1, 1]]).unwrap();
        assert_eq!(s.dim(), 2);
        assert_eq!(s.pivots(), vec![0, 1]);
        assert_eq!(s.rows(), vec![vec![1, 0, 1], vec![0, 1, 1]]);
        assert_eq!(Subspace::from_rows(&f, 3, &s.rows()).unwrap(), s);
    }

    #[test]
    fn empty_and_duplicate_rows() {
        let f = gf(3);
        let z = Subspace::from_rows(&f, 4, &[]).unwrap();
        assert_eq!(z.dim(), 0);
        assert_eq!(z, Subspace::zero(&f, 4));
        let one = Subspace::from_rows(&f, 4, &[vec![2, 1, 0, 1]]).unwrap();
        let dup = Subspace::from_rows(&f, 4, &[vec![2, 1, 0, 1], vec![2, 1, 0, 1], vec![1, 2, 0, 2]]).unwrap();
        assert_eq!(one, dup);
        assert_eq!(one.rows(), vec![vec![1, 2, 0, 2]]);
    }

    #[test]
    fn row_validation() {
        let f = gf(2);
        assert!(matches!(
            Subspace::from_rows(&f, 3, &[vec![1, 0]]),
            Err(GfqError::RowLength { row: 0, expected: 3, got: 2 })
        ));
        assert!(matches!(
            Subspace::from_rows(&f, 3, &[vec![1, 0, 0], vec![0, 2, 0]]),
            Err(GfqError::InvalidEntry { row: 1, col: 1, .. })
        ));
        assert!(matches!(
            Subspace::from_canonical_rows(&f, 3, &[vec![1, 1, 0], vec![0, 1, 1]]),
            Err(GfqError::NotCanonical { row: 0 })
        ));
    }

    #[test]
    fn complementary_lines() {
        let f = gf(2);
        let a = Subspace::from_rows(&f, 2, &[vec![1, 0]]).unwrap();
        let b = Subspace::from_rows(&f, 2, &[vec![1, 1]]).unwrap();
        assert_eq!(a.intersect_dim(&b).unwrap(), 0);
        assert_eq!(a.sum(&b).unwrap(), Subspace::full(&f, 2));
        assert_eq!(a.intersect_dim(&a).unwrap(), 1);
    }

    #[test]
    fn ambient_mismatch() {
        let f = gf(2);
        let a = Subspace::full(&f, 3);
        let b = Subspace::full(&f, 4);
        assert!(matches!(a.intersect_dim(&b), Err(GfqError::AmbientMismatch { .. })));
        let c = Subspace::full(&gf(3), 3);
        assert!(a.sum(&c).is_err());
    }

    #[test]
    fn vector_count_and_membership() {
        let f = gf(3);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let s = Subspace::random(&f, 5, 2, &mut rng).unwrap();
        let vs = s.vectors();
        assert_eq!(vs.len(), 9);
        for v in &vs {
            assert!(s.contains_vector(v).unwrap());
        }
        let e = Subspace::from_rows(&f, 5, &vs).unwrap();
        assert_eq!(e, s);
    }

    #[test]
    fn binary_and_dense_paths_agree() {
        let f = gf(2);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..500 {
            let n = rng.gen_range(1..=10);
            let da = rng.gen_range(0..=n);
            let db = rng.gen_range(0..=n);
            let a = Subspace::random(&f, n, da, &mut rng).unwrap();
            let b = Subspace::random(&f, n, db, &mut rng).unwrap();
            let (ad, bd) = (dense_copy(&a), dense_copy(&b));
            assert_eq!(a.rows(), ad.rows());
            assert_eq!(a.meet_dim(&b), ad.meet_dim(&bd));
            assert_eq!(a.sum_unchecked(&b).rows(), ad.sum_unchecked(&bd).rows());
            assert_eq!(a.intersection_unchecked(&b).rows(), ad.intersection_unchecked(&bd).rows());
        }
    }

    #[test]
    fn modular_law_on_samples() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for q in [2u64, 3, 4, 9] {
            let f = gf(q);
            let samples = if q == 2 { 10_000 } else { 1_000 };
            for _ in 0..samples {
                let n = 6;
                let a = Subspace::random(&f, n, rng.gen_range(0..=n), &mut rng).unwrap();
                let b = Subspace::random(&f, n, rng.gen_range(0..=n), &mut rng).unwrap();
                let meet = a.intersection(&b).unwrap();
                let join = a.sum(&b).unwrap();
                assert_eq!(meet.dim(), a.intersect_dim(&b).unwrap());
                assert_eq!(meet.dim() + join.dim(), a.dim() + b.dim());
                assert!(a.contains(&meet) && b.contains(&meet));
                assert!(join.contains(&a) && join.contains(&b));
            }
        }
    }

    #[test]
    fn embed_maps_into_span() {
        let f = gf(3);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let host = Subspace::random(&f, 6, 4, &mut rng).unwrap();
        let sub = Subspace::random(&f, 4, 2, &mut rng).unwrap();
        let img = host.embed(&sub).unwrap();
        assert_eq!(img.dim(), 2);
        assert!(host.contains(&img));
        assert_eq!(host.embed(&Subspace::full(&f, 4)).unwrap(), host);
    }

    #[test]
    fn json_round_trip() {
        let f = gf(4);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let s = Subspace::random(&f, 5, 3, &mut rng).unwrap();
        let js = serde_json::to_string(&s).unwrap();
        let back: Subspace = serde_json::from_str(&js).unwrap();
        assert_eq!(back, s);
        assert_eq!(serde_json::to_string(&back).unwrap(), js);
        let bad = r#"{"n":3,"q":2,"dim":1,"rows":[[0,1,1],[1,0,0]]}"#;
        assert!(serde_json::from_str::<Subspace>(bad).is_err());
    }
}
