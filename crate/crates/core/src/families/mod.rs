//! The three families and the structural predicates used to study them.
//!
//! Constructions enumerate the whole Grassmannian `[V, k]` and keep the
//! members satisfying the defining condition, so every size reported here is
//! an independent check on the closed forms in [`crate::qnum`].

mod cover;
pub mod io;
mod predicates;

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gfq::{Field, GfqError, Grassmannian, Subspace};
use crate::qnum::{self, QnumError};

pub use cover::{
    analyze_t_structure, classify_witnesses, covering_number, reconstruct, refine_restriction, CoverResult,
    CoverWitness, Reconstruction, Refinement, TStructure,
};
pub use predicates::{
    common_core, common_core_dim, is_maximal, is_t_intersecting, is_trivial, probe_order, restrict_to,
    IntersectingCheck, MaximalityCheck,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error(transparent)]
    Gfq(#[from] GfqError),
    #[error(transparent)]
    Qnum(#[from] QnumError),
    #[error("invalid dimensions: {0}")]
    Dimension(String),
    #[error("containment violated: {0}")]
    Containment(String),
    #[error("member {index}: {reason}")]
    InvalidMember { index: usize, reason: String },
    #[error("member {index} duplicates member {first}")]
    DuplicateMember { index: usize, first: usize },
    #[error("the family is empty")]
    Empty,
    #[error("precondition violated: {0}")]
    Precondition(String),
}

/// `(n, k, q, t)` for a family of k-subspaces of GF(q)^n.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FamilyParams {
    pub n: usize,
    pub k: usize,
    pub q: u64,
    pub t: usize,
}

/// How a family was produced, with its defining subspaces.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Provenance {
    H1 { x: Subspace, m: Subspace },
    H2 { x: Subspace, m: Subspace, c: Subspace },
    H3 { z: Subspace },
    Custom,
}

impl Provenance {
    pub fn tag(&self) -> &'static str {
        match self {
            Provenance::H1 { .. } => "h1",
            Provenance::H2 { .. } => "h2",
            Provenance::H3 { .. } => "h3",
            Provenance::Custom => "custom",
        }
    }
}

/// Which defining condition of `H2(X, M, C)` a member satisfies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum H2Part {
    A,
    B,
    C,
}

/// A set of distinct k-subspaces of one ambient space.
#[derive(Debug, Clone)]
pub struct Family {
    params: FamilyParams,
    members: Vec<Subspace>,
    index: HashMap<Subspace, usize>,
    provenance: Provenance,
}

impl Family {
    /// Validates dimensions, ambient space and duplicates.
    pub fn new(params: FamilyParams, members: Vec<Subspace>, provenance: Provenance) -> Result<Family, FamilyError> {
        let mut index = HashMap::with_capacity(members.len());
        for (i, m) in members.iter().enumerate() {
            if m.ambient_dim() != params.n || m.q() != params.q {
                return Err(FamilyError::InvalidMember {
                    index: i,
                    reason: format!(
                        "lives in GF({})^{}, expected GF({})^{}",
                        m.q(),
                        m.ambient_dim(),
                        params.q,
                        params.n
                    ),
                });
            }
            if m.dim() != params.k {
                return Err(FamilyError::InvalidMember {
                    index: i,
                    reason: format!("has dimension {}, expected {}", m.dim(), params.k),
                });
            }
            if let Some(&first) = index.get(m) {
                return Err(FamilyError::DuplicateMember { index: i, first });
            }
            index.insert(m.clone(), i);
        }
        Ok(Family { params, members, index, provenance })
    }

    pub fn custom(params: FamilyParams, members: Vec<Subspace>) -> Result<Family, FamilyError> {
        Family::new(params, members, Provenance::Custom)
    }

    pub fn params(&self) -> FamilyParams {
        self.params
    }

    pub fn members(&self) -> &[Subspace] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, s: &Subspace) -> bool {
        self.index.contains_key(s)
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn field(&self) -> Option<&Field> {
        self.members.first().map(Subspace::field)
    }

    /// True when both families have the same member set.
    pub fn same_members(&self, other: &Family) -> bool {
        self.len() == other.len() && self.members.iter().all(|m| other.contains(m))
    }

    /// A copy without `member`.
    pub fn without(&self, member: &Subspace) -> Family {
        let members: Vec<Subspace> = self.members.iter().filter(|m| *m != member).cloned().collect();
        Family::custom(self.params, members).expect("subfamily of a valid family")
    }

    /// For an `H2` family, the part a member belongs to.
    pub fn h2_part(&self, f: &Subspace) -> Option<H2Part> {
        let Provenance::H2 { x, m, c } = &self.provenance else {
            return None;
        };
        h2_membership(self.params, x, m, c, f)
    }

    /// `(|A|, |B|, |C|)` for an `H2` family.
    pub fn h2_part_sizes(&self) -> Option<[u64; 3]> {
        if !matches!(self.provenance, Provenance::H2 { .. }) {
            return None;
        }
        let mut out = [0u64; 3];
        for f in &self.members {
            match self.h2_part(f)? {
                H2Part::A => out[0] += 1,
                H2Part::B => out[1] += 1,
                H2Part::C => out[2] += 1,
            }
        }
        Some(out)
    }
}

fn check_range(n: usize, k: usize, t: usize) -> Result<(), FamilyError> {
    if !(t >= 1 && t + 2 <= k && 2 * k <= n) {
        return Err(FamilyError::Dimension(format!("need 1 <= t <= k-2 and 2k <= n, got n={n}, k={k}, t={t}")));
    }
    Ok(())
}

fn check_dim(name: &str, s: &Subspace, want: usize) -> Result<(), FamilyError> {
    if s.dim() != want {
        return Err(FamilyError::Dimension(format!("dim {name} = {}, expected {want}", s.dim())));
    }
    Ok(())
}

fn check_inside(inner: (&str, &Subspace), outer: (&str, &Subspace)) -> Result<(), FamilyError> {
    inner.1.intersect_dim(outer.1)?;
    if !outer.1.contains(inner.1) {
        return Err(FamilyError::Containment(format!("{} is not contained in {}", inner.0, outer.0)));
    }
    Ok(())
}

fn h2_membership(p: FamilyParams, x: &Subspace, m: &Subspace, c: &Subspace, f: &Subspace) -> Option<H2Part> {
    let (k, t) = (p.k, p.t);
    let fm = m.meet_dim(f);
    if x.dim() <= fm && f.contains(x) {
        if fm >= t + 1 {
            return Some(H2Part::A);
        }
        if fm == t && c.meet_dim(f) + k == c.dim() + t {
            return Some(H2Part::B);
        }
        return None;
    }
    if fm + 1 == k && c.contains(f) && x.meet_dim(f) + 1 == t {
        return Some(H2Part::C);
    }
    None
}

/// `H1(X, M) = {F : X ⊆ F, dim(F ∩ M) >= t+1} ∪ [M, k]` with `dim X = t`, `dim M = k + 1`.
pub fn build_h1(x: &Subspace, m: &Subspace, t: usize, k: usize, budget: u64) -> Result<Family, FamilyError> {
    let n = x.ambient_dim();
    check_range(n, k, t)?;
    check_dim("X", x, t)?;
    check_dim("M", m, k + 1)?;
    check_inside(("X", x), ("M", m))?;
    let g = Grassmannian::new(x.field(), n, k, budget)?;
    let members = g.par_filter(|f| m.contains(f) || (f.contains(x) && m.meet_dim(f) > t));
    let params = FamilyParams { n, k, q: x.q(), t };
    Family::new(params, members, Provenance::H1 { x: x.clone(), m: m.clone() })
}

/// `H2(X, M, C) = A ∪ B ∪ C` with `dim X = t`, `dim M = k`, `dim C = c`.
pub fn build_h2(
    x: &Subspace,
    m: &Subspace,
    c: &Subspace,
    t: usize,
    k: usize,
    budget: u64,
) -> Result<Family, FamilyError> {
    let n = x.ambient_dim();
    check_range(n, k, t)?;
    check_dim("X", x, t)?;
    check_dim("M", m, k)?;
    check_inside(("X", x), ("M", m))?;
    check_inside(("M", m), ("C", c))?;
    let cd = c.dim();
    if !qnum::c_admissible(t as i64, k as i64, cd as i64, n as i64) {
        return Err(QnumError::InadmissibleC { c: cd as i64, k: k as i64, t: t as i64, n: n as i64 }.into());
    }
    let params = FamilyParams { n, k, q: x.q(), t };
    let g = Grassmannian::new(x.field(), n, k, budget)?;
    let members = g.par_filter(|f| h2_membership(params, x, m, c, f).is_some());
    Family::new(params, members, Provenance::H2 { x: x.clone(), m: m.clone(), c: c.clone() })
}

/// `H3(Z) = {F : dim(F ∩ Z) >= t+1}` with `dim Z = t + 2`.
pub fn build_h3(z: &Subspace, t: usize, k: usize, budget: u64) -> Result<Family, FamilyError> {
    let n = z.ambient_dim();
    check_range(n, k, t)?;
    check_dim("Z", z, t + 2)?;
    let g = Grassmannian::new(z.field(), n, k, budget)?;
    let members = g.par_filter(|f| z.meet_dim(f) > t);
    let params = FamilyParams { n, k, q: z.q(), t };
    Family::new(params, members, Provenance::H3 { z: z.clone() })
}

/// Which construction to build from a seeded flag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Construction {
    H1,
    /// `H2` with `dim C = c`.
    H2 {
        c: usize,
    },
    H3,
}

impl Construction {
    pub fn label(&self) -> String {
        match self {
            Construction::H1 => "h1".into(),
            Construction::H2 { c } => format!("h2(c={c})"),
            Construction::H3 => "h3".into(),
        }
    }

    /// Closed-form size.
    pub fn size_formula(&self, n: usize, k: usize, t: usize, q: u64) -> Result<qnum::ExactInt, QnumError> {
        let (n, k, t) = (n as i64, k as i64, t as i64);
        match *self {
            Construction::H1 => Ok(qnum::h1_size(t, k, n, q)),
            Construction::H2 { c } => qnum::h2_size(t, k, c as i64, n, q),
            Construction::H3 => Ok(qnum::h3_size(t, k, n, q)),
        }
    }
}

/// Builds a construction from a pseudo-random flag determined by `seed`.
pub fn build_seeded(
    which: Construction,
    field: &Field,
    n: usize,
    k: usize,
    t: usize,
    seed: u64,
    budget: u64,
) -> Result<Family, FamilyError> {
    check_range(n, k, t)?;
    match which {
        Construction::H1 => {
            let flag = crate::gfq::build_flag(n, field, &[t, k + 1], seed)?;
            build_h1(&flag.parts()[0], &flag.parts()[1], t, k, budget)
        }
        Construction::H2 { c } => {
            if !qnum::c_admissible(t as i64, k as i64, c as i64, n as i64) {
                return Err(QnumError::InadmissibleC { c: c as i64, k: k as i64, t: t as i64, n: n as i64 }.into());
            }
            let flag = crate::gfq::build_flag(n, field, &[t, k, c], seed)?;
            let p = flag.parts();
            build_h2(&p[0], &p[1], &p[2], t, k, budget)
        }
        Construction::H3 => {
            let flag = crate::gfq::build_flag(n, field, &[t + 2], seed)?;
            build_h3(&flag.parts()[0], t, k, budget)
        }
    }
}
