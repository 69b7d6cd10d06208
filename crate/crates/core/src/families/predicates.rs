use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{Family, FamilyError, Provenance};
use crate::gfq::{Grassmannian, Subspace};

/// Outcome of the pairwise intersection test.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectingCheck {
    pub intersecting: bool,
    /// Member indices `(i, j)` and `dim(F_i ∩ F_j)` of a violating pair.
    pub witness: Option<(usize, usize, usize)>,
}

/// True when every pair of members meets in dimension at least `t`.
pub fn is_t_intersecting(fam: &Family) -> IntersectingCheck {
    let t = fam.params().t;
    let ms = fam.members();
    let witness = (0..ms.len()).into_par_iter().find_map_first(|i| {
        (i + 1..ms.len()).find_map(|j| {
            let d = ms[i].meet_dim(&ms[j]);
            (d < t).then_some((i, j, d))
        })
    });
    IntersectingCheck { intersecting: witness.is_none(), witness }
}

/// `∩ F` over all members.
pub fn common_core(fam: &Family) -> Result<Subspace, FamilyError> {
    let mut it = fam.members().iter();
    let mut core = it.next().ok_or(FamilyError::Empty)?.clone();
    for m in it {
        if core.dim() == 0 {
            break;
        }
        core = core.intersection_unchecked(m);
    }
    Ok(core)
}

pub fn common_core_dim(fam: &Family) -> Result<usize, FamilyError> {
    Ok(common_core(fam)?.dim())
}

/// True when all members share a common t-subspace.
pub fn is_trivial(fam: &Family) -> Result<bool, FamilyError> {
    Ok(common_core_dim(fam)? >= fam.params().t)
}

/// A member ordering for early rejection: a greedy farthest-first prefix,
/// so that candidates failing against some member tend to fail early.
pub fn probe_order(fam: &Family) -> Vec<usize> {
    const PREFIX: usize = 48;
    let ms = fam.members();
    let len = ms.len();
    if len <= 2 {
        return (0..len).collect();
    }
    let mut chosen = vec![0usize];
    let mut used = vec![false; len];
    used[0] = true;
    // closest[i] = max dim(F_i ∩ F_j) over chosen j
    let mut closest: Vec<usize> = ms.iter().map(|m| ms[0].meet_dim(m)).collect();
    while chosen.len() < PREFIX.min(len) {
        let next = (0..len).filter(|&i| !used[i]).min_by_key(|&i| (closest[i], i)).unwrap();
        used[next] = true;
        chosen.push(next);
        for (i, c) in closest.iter_mut().enumerate() {
            if !used[i] {
                *c = (*c).max(ms[next].meet_dim(&ms[i]));
            }
        }
    }
    chosen.extend((0..len).filter(|&i| !used[i]));
    chosen
}

/// Outcome of the maximality scan.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaximalityCheck {
    pub maximal: bool,
    /// A non-member meeting every member in dimension at least `t`.
    pub witness: Option<Subspace>,
    pub scanned: u64,
}

/// Scans `[V, k]` for a non-member t-intersecting every member.
///
/// The family must be t-intersecting; otherwise the question is not posed.
pub fn is_maximal(fam: &Family, budget: u64) -> Result<MaximalityCheck, FamilyError> {
    let p = fam.params();
    let field = fam.field().ok_or(FamilyError::Empty)?.clone();
    if let Some((i, j, d)) = is_t_intersecting(fam).witness {
        return Err(FamilyError::Precondition(format!("members {i} and {j} meet in dimension {d} < t = {}", p.t)));
    }
    let g = Grassmannian::new(&field, p.n, p.k, budget)?;
    let order = probe_order(fam);
    let ms = fam.members();
    let t = p.t;
    let witness = g.par_find_first(|cand| order.iter().all(|&i| ms[i].meet_dim(cand) >= t) && !fam.contains(cand));
    Ok(MaximalityCheck { maximal: witness.is_none(), witness, scanned: g.len() })
}

/// `{F ∈ fam : S ⊆ F}`.
pub fn restrict_to(fam: &Family, s: &Subspace) -> Result<Family, FamilyError> {
    let p = fam.params();
    if s.ambient_dim() != p.n || s.q() != p.q {
        return Err(crate::gfq::GfqError::AmbientMismatch { left: (p.n, p.q), right: (s.ambient_dim(), s.q()) }.into());
    }
    let members: Vec<Subspace> = fam.members().iter().filter(|m| m.contains(s)).cloned().collect();
    Family::new(p, members, Provenance::Custom)
}
