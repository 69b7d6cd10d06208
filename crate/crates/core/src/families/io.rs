//! Family files: JSON `{params, provenance, members}` and a packed binary form.
//!
//! Binary layout, little-endian:
//!
//! ```text
//! "QGF1"  q:u8  n:u16  k:u16  t:u16  kind:u8
//! defining subspaces (h1: X M, h2: X M C, h3: Z, custom: none)
//! count:u64  members
//! ```
//!
//! Each subspace is `rows:u16` followed by its canonical rows, each packed
//! LSB-first with `ceil(log2 q)` bits per entry and padded to a whole byte.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{Family, FamilyError, FamilyParams, Provenance};
use crate::gfq::{make_field, Field, GfqError, Subspace};

const MAGIC: &[u8; 4] = b"QGF1";

#[derive(Debug, Error)]
pub enum FamilyIoError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{context}: {source}")]
    Subspace { context: String, source: GfqError },
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error("malformed binary family: {0}")]
    Binary(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Serialize, Deserialize)]
struct RawSubspace {
    n: usize,
    q: u64,
    dim: usize,
    rows: Vec<Vec<u8>>,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum RawProvenance {
    H1 { x: RawSubspace, m: RawSubspace },
    H2 { x: RawSubspace, m: RawSubspace, c: RawSubspace },
    H3 { z: RawSubspace },
    Custom,
}

#[derive(Serialize, Deserialize)]
struct RawFamily {
    params: FamilyParams,
    provenance: RawProvenance,
    members: Vec<RawSubspace>,
}

fn raw(s: &Subspace) -> RawSubspace {
    RawSubspace { n: s.ambient_dim(), q: s.q(), dim: s.dim(), rows: s.rows() }
}

fn cook(r: &RawSubspace, p: &FamilyParams, field: &Field, context: String) -> Result<Subspace, FamilyIoError> {
    let fail = |source| FamilyIoError::Subspace { context: context.clone(), source };
    if r.n != p.n || r.q != p.q {
        return Err(fail(GfqError::AmbientMismatch { left: (p.n, p.q), right: (r.n, r.q) }));
    }
    let s = Subspace::from_canonical_rows(field, r.n, &r.rows).map_err(fail)?;
    if s.dim() != r.dim {
        return Err(fail(GfqError::InvalidDims(format!("declared dim {} but {} rows", r.dim, s.dim()))));
    }
    Ok(s)
}

fn provenance_parts(p: &Provenance) -> Vec<(&'static str, &Subspace)> {
    match p {
        Provenance::H1 { x, m } => vec![("X", x), ("M", m)],
        Provenance::H2 { x, m, c } => vec![("X", x), ("M", m), ("C", c)],
        Provenance::H3 { z } => vec![("Z", z)],
        Provenance::Custom => vec![],
    }
}

fn provenance_from(kind: u8, parts: Vec<Subspace>) -> Result<Provenance, FamilyIoError> {
    let mut it = parts.into_iter();
    let mut next = || it.next().expect("part count checked by caller");
    Ok(match kind {
        0 => Provenance::Custom,
        1 => Provenance::H1 { x: next(), m: next() },
        2 => Provenance::H2 { x: next(), m: next(), c: next() },
        3 => Provenance::H3 { z: next() },
        other => return Err(FamilyIoError::Binary(format!("unknown provenance kind {other}"))),
    })
}

fn kind_of(p: &Provenance) -> u8 {
    match p {
        Provenance::Custom => 0,
        Provenance::H1 { .. } => 1,
        Provenance::H2 { .. } => 2,
        Provenance::H3 { .. } => 3,
    }
}

pub fn to_json(fam: &Family) -> String {
    let provenance = match fam.provenance() {
        Provenance::H1 { x, m } => RawProvenance::H1 { x: raw(x), m: raw(m) },
        Provenance::H2 { x, m, c } => RawProvenance::H2 { x: raw(x), m: raw(m), c: raw(c) },
        Provenance::H3 { z } => RawProvenance::H3 { z: raw(z) },
        Provenance::Custom => RawProvenance::Custom,
    };
    let file = RawFamily { params: fam.params(), provenance, members: fam.members().iter().map(raw).collect() };
    serde_json::to_string_pretty(&file).expect("plain data serializes")
}

/// Parses and fully re-validates a JSON family file.
pub fn from_json(text: &str) -> Result<Family, FamilyIoError> {
    let file: RawFamily = serde_json::from_str(text)?;
    let p = file.params;
    let field = make_field(p.q).map_err(|source| FamilyIoError::Subspace { context: "params".into(), source })?;
    let part = |name: &str, r: &RawSubspace| cook(r, &p, &field, format!("provenance {name}"));
    let provenance = match &file.provenance {
        RawProvenance::H1 { x, m } => Provenance::H1 { x: part("X", x)?, m: part("M", m)? },
        RawProvenance::H2 { x, m, c } => Provenance::H2 { x: part("X", x)?, m: part("M", m)?, c: part("C", c)? },
        RawProvenance::H3 { z } => Provenance::H3 { z: part("Z", z)? },
        RawProvenance::Custom => Provenance::Custom,
    };
    let members = file
        .members
        .iter()
        .enumerate()
        .map(|(i, r)| cook(r, &p, &field, format!("member {i}")))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Family::new(p, members, provenance)?)
}

fn bits_per_entry(q: u64) -> usize {
    (64 - (q - 1).leading_zeros()) as usize
}

fn write_subspace(out: &mut Vec<u8>, s: &Subspace, bpe: usize) {
    out.extend_from_slice(&(s.dim() as u16).to_le_bytes());
    let n = s.ambient_dim();
    let row_bytes = (n * bpe).div_ceil(8);
    for row in s.rows() {
        let mut buf = vec![0u8; row_bytes];
        for (j, &e) in row.iter().enumerate() {
            for b in 0..bpe {
                if (e >> b) & 1 == 1 {
                    let bit = j * bpe + b;
                    buf[bit / 8] |= 1 << (bit % 8);
                }
            }
        }
        out.extend_from_slice(&buf);
    }
}

struct Reader<'a> {
    data: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, len: usize, what: &str) -> Result<&'a [u8], FamilyIoError> {
        if self.data.len() - self.pos < len {
            return Err(FamilyIoError::Binary(format!("truncated while reading {what} at byte {}", self.pos)));
        }
        let s = &self.data[self.pos..self.pos + len];
        self.pos += len;
        Ok(s)
    }

    fn u8(&mut self, what: &str) -> Result<u8, FamilyIoError> {
        Ok(self.take(1, what)?[0])
    }

    fn u16(&mut self, what: &str) -> Result<u16, FamilyIoError> {
        Ok(u16::from_le_bytes(self.take(2, what)?.try_into().unwrap()))
    }

    fn u64(&mut self, what: &str) -> Result<u64, FamilyIoError> {
        Ok(u64::from_le_bytes(self.take(8, what)?.try_into().unwrap()))
    }

    fn subspace(&mut self, field: &Field, n: usize, bpe: usize, what: String) -> Result<Subspace, FamilyIoError> {
        let dim = self.u16(&what)? as usize;
        if dim > n {
            return Err(FamilyIoError::Binary(format!("{what}: {dim} rows exceed n = {n}")));
        }
        let row_bytes = (n * bpe).div_ceil(8);
        let mut rows = Vec::with_capacity(dim);
        for _ in 0..dim {
            let buf = self.take(row_bytes, &what)?;
            let row: Vec<u8> = (0..n)
                .map(|j| {
                    (0..bpe).fold(0u8, |acc, b| {
                        let bit = j * bpe + b;
                        acc | (((buf[bit / 8] >> (bit % 8)) & 1) << b)
                    })
                })
                .collect();
            rows.push(row);
        }
        Subspace::from_canonical_rows(field, n, &rows)
            .map_err(|source| FamilyIoError::Subspace { context: what, source })
    }
}

pub fn to_binary(fam: &Family) -> Vec<u8> {
    let p = fam.params();
    let bpe = bits_per_entry(p.q);
    let mut out = Vec::new();
    out.extend_from_slice(MAGIC);
    out.push(p.q as u8);
    for v in [p.n, p.k, p.t] {
        out.extend_from_slice(&(v as u16).to_le_bytes());
    }
    out.push(kind_of(fam.provenance()));
    for (_, s) in provenance_parts(fam.provenance()) {
        write_subspace(&mut out, s, bpe);
    }
    out.extend_from_slice(&(fam.len() as u64).to_le_bytes());
    for m in fam.members() {
        write_subspace(&mut out, m, bpe);
    }
    out
}

pub fn from_binary(data: &[u8]) -> Result<Family, FamilyIoError> {
    let mut r = Reader { data, pos: 0 };
    if r.take(4, "magic")? != MAGIC {
        return Err(FamilyIoError::Binary("bad magic".into()));
    }
    let q = r.u8("q")? as u64;
    let n = r.u16("n")? as usize;
    let k = r.u16("k")? as usize;
    let t = r.u16("t")? as usize;
    let kind = r.u8("provenance kind")?;
    let field = make_field(q).map_err(|source| FamilyIoError::Subspace { context: "header".into(), source })?;
    let bpe = bits_per_entry(q);
    let names: &[&str] = match kind {
        0 => &[],
        1 => &["X", "M"],
        2 => &["X", "M", "C"],
        3 => &["Z"],
        other => return Err(FamilyIoError::Binary(format!("unknown provenance kind {other}"))),
    };
    let parts = names
        .iter()
        .map(|name| r.subspace(&field, n, bpe, format!("provenance {name}")))
        .collect::<Result<Vec<_>, _>>()?;
    let provenance = provenance_from(kind, parts)?;
    let count = r.u64("member count")?;
    let mut members = Vec::new();
    for i in 0..count {
        members.push(r.subspace(&field, n, bpe, format!("member {i}"))?);
    }
    if r.pos != data.len() {
        return Err(FamilyIoError::Binary(format!("{} trailing bytes", data.len() - r.pos)));
    }
    Ok(Family::new(FamilyParams { n, k, q, t }, members, provenance)?)
}

/// Reads either format, choosing by the magic bytes.
pub fn read_family(path: &std::path::Path) -> Result<Family, FamilyIoError> {
    let data = std::fs::read(path)?;
    if data.starts_with(MAGIC) {
        from_binary(&data)
    } else {
        from_json(std::str::from_utf8(&data).map_err(|e| FamilyIoError::Binary(e.to_string()))?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{build_seeded, Construction};
    use crate::gfq::DEFAULT_BUDGET;

    fn assert_identical(a: &Family, b: &Family) {
        assert_eq!(a.params(), b.params());
        assert_eq!(a.provenance(), b.provenance());
        assert_eq!(a.members(), b.members());
    }

    #[test]
    fn json_and_binary_round_trip() {
        for q in [2, 3, 4] {
            let f = make_field(q).unwrap();
            let n = if q == 2 { 7 } else { 6 };
            for which in [Construction::H1, Construction::H2 { c: 5 }, Construction::H3] {
                let fam = build_seeded(which, &f, n, 3, 1, 17, DEFAULT_BUDGET).unwrap();
                let j = to_json(&fam);
                assert_identical(&from_json(&j).unwrap(), &fam);
                assert_eq!(to_json(&from_json(&j).unwrap()), j);
                let b = to_binary(&fam);
                assert_identical(&from_binary(&b).unwrap(), &fam);
                assert!(b.len() < j.len() / 4);
            }
        }
    }

    #[test]
    fn malformed_members_are_named() {
        let f = make_field(2).unwrap();
        let fam = build_seeded(Construction::H3, &f, 6, 3, 1, 1, DEFAULT_BUDGET).unwrap();
        let mut v: serde_json::Value = serde_json::from_str(&to_json(&fam)).unwrap();
        v["members"][5]["rows"][1] = serde_json::json!([1, 1, 1, 1, 1, 1]);
        let err = from_json(&v.to_string()).unwrap_err().to_string();
        assert!(err.contains("member 5") && err.contains("row"), "{err}");

        let mut v: serde_json::Value = serde_json::from_str(&to_json(&fam)).unwrap();
        v["members"][3] = v["members"][2].clone();
        assert!(matches!(
            from_json(&v.to_string()),
            Err(FamilyIoError::Family(FamilyError::DuplicateMember { index: 3, first: 2 }))
        ));

        let b = to_binary(&fam);
        assert!(from_binary(&b[..b.len() - 1]).is_err());
        let mut extra = b.clone();
        extra.push(0);
        assert!(from_binary(&extra).is_err());
        assert!(from_json("{\"params\": 3}").is_err());
    }

    #[test]
    fn packing_widths() {
        assert_eq!([2, 3, 4, 5, 7, 8, 9].map(bits_per_entry), [1, 2, 2, 3, 3, 3, 4]);
    }
}
