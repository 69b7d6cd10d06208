use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::predicates::{common_core, probe_order};
use super::{build_h1, build_h2, build_h3, Family, FamilyError};
use crate::gfq::{subspaces_of, Grassmannian, Subspace};
use crate::qnum;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverWitness {
    pub subspace: Subspace,
    pub level: usize,
    /// `dim(T ∩ F) >= t` was checked against every member.
    pub verified: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverResult {
    /// The covering number, or `None` when it exceeds `max_level`.
    pub level: Option<usize>,
    /// Every cover at `level`, in enumeration order.
    pub witnesses: Vec<CoverWitness>,
    pub max_level: usize,
}

/// t-covering number by bottom-up search.
///
/// At level `t` the covers are exactly the t-subspaces of the common core.
/// Above that, candidates range over the span `S` of all members: if `T`
/// covers then so does `T ∩ S`, so every cover of minimal dimension lies in
/// `S` and the witness list is complete.
pub fn covering_number(fam: &Family, max_level: usize, budget: u64) -> Result<CoverResult, FamilyError> {
    let p = fam.params();
    let t = p.t;
    let field = fam.field().ok_or(FamilyError::Empty)?.clone();
    let max_level = max_level.min(p.n);
    let ms = fam.members();
    let order = probe_order(fam);
    let covers = |cand: &Subspace| order.iter().all(|&i| ms[i].meet_dim(cand) >= t);
    let core = common_core(fam)?;
    let span = ms.iter().skip(1).fold(ms[0].clone(), |acc, m| acc.sum_unchecked(m));
    let wrap = |level: usize, found: Vec<Subspace>| {
        let witnesses: Vec<CoverWitness> =
            found.into_iter().map(|subspace| CoverWitness { subspace, level, verified: true }).collect();
        CoverResult { level: Some(level), witnesses, max_level }
    };
    for d in t..=max_level {
        let found: Vec<Subspace> = if d == t {
            if core.dim() < t {
                continue;
            }
            subspaces_of(&core, t, budget)?
        } else if span.dim() == p.n {
            Grassmannian::new(&field, p.n, d, budget)?.par_filter(covers)
        } else if d > span.dim() {
            // the span itself covers, so a smaller level was already found
            continue;
        } else {
            let g = Grassmannian::new(&field, span.dim(), d, budget)?;
            let embed = |c: &Subspace| span.embed(c).expect("coordinates match the span");
            g.par_filter(|c| covers(&embed(c))).iter().map(embed).collect()
        };
        if !found.is_empty() {
            return Ok(wrap(d, found));
        }
    }
    Ok(CoverResult { level: None, witnesses: Vec::new(), max_level })
}

/// Shape of the witness set `𝒯` at level `t + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "case", rename_all = "snake_case")]
pub enum TStructure {
    /// Every witness contains the t-subspace `x`; `m` is their span, `l = dim m`.
    CommonCore {
        x: Subspace,
        m: Subspace,
        l: usize,
        witnesses: usize,
    },
    /// The witnesses are all (t+1)-subspaces of the (t+2)-subspace `z`.
    Grassmannian {
        z: Subspace,
        witnesses: usize,
    },
    Anomaly {
        reason: String,
        witnesses: usize,
    },
}

impl TStructure {
    pub fn label(&self) -> &'static str {
        match self {
            TStructure::CommonCore { .. } => "common_core",
            TStructure::Grassmannian { .. } => "grassmannian",
            TStructure::Anomaly { .. } => "anomaly",
        }
    }
}

/// Classifies a witness set of (t+1)-subspaces.
pub fn classify_witnesses(witnesses: &[Subspace], t: usize, k: usize, q: u64) -> TStructure {
    let count = witnesses.len();
    let anomaly = |reason: String| TStructure::Anomaly { reason, witnesses: count };
    let Some(first) = witnesses.first() else {
        return anomaly("no witnesses".into());
    };
    if let Some(w) = witnesses.iter().find(|w| w.dim() != t + 1) {
        return anomaly(format!("witness of dimension {} at level {}", w.dim(), t + 1));
    }
    let span = witnesses.iter().skip(1).fold(first.clone(), |acc, w| acc.sum_unchecked(w));
    let distinct: HashSet<&Subspace> = witnesses.iter().collect();
    if distinct.len() != count {
        return anomaly("repeated witness".into());
    }
    let grass = qnum::gauss_binom((t + 2) as i64, (t + 1) as i64, q);
    if span.dim() == t + 2 && qnum::ExactInt::from(count) == grass {
        return TStructure::Grassmannian { z: span, witnesses: count };
    }
    let core = witnesses.iter().skip(1).fold(first.clone(), |acc, w| acc.intersection_unchecked(w));
    if core.dim() < t {
        return anomaly(format!(
            "common core has dimension {} < t and the span has dimension {}",
            core.dim(),
            span.dim()
        ));
    }
    let x = if core.dim() == t {
        core
    } else {
        // single witness: its first t-subspace in enumeration order
        subspaces_of(first, t, u64::MAX).expect("small").swap_remove(0)
    };
    let l = span.dim();
    if l > k + 1 {
        return anomaly(format!("span dimension {l} exceeds k+1 = {}", k + 1));
    }
    let between = qnum::gauss_binom((l - t) as i64, 1, q);
    if qnum::ExactInt::from(count) != between {
        return anomaly(format!("{count} witnesses but {between} (t+1)-spaces lie between X and M"));
    }
    TStructure::CommonCore { x, m: span, l, witnesses: count }
}

/// Computes `𝒯` and classifies it; `Ok(None)` when `τ_t != t + 1`.
pub fn analyze_t_structure(fam: &Family, budget: u64) -> Result<Option<(CoverResult, TStructure)>, FamilyError> {
    let p = fam.params();
    let cover = covering_number(fam, p.t + 1, budget)?;
    if cover.level != Some(p.t + 1) {
        return Ok(None);
    }
    let ws: Vec<Subspace> = cover.witnesses.iter().map(|w| w.subspace.clone()).collect();
    let s = classify_witnesses(&ws, p.t, p.k, p.q);
    Ok(Some((cover, s)))
}

/// The construction a family is forced to be, given its `𝒯`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum Reconstruction {
    H1 { x: Subspace, m: Subspace },
    H2 { x: Subspace, m: Subspace, c: Subspace },
    H3 { z: Subspace },
    NotDetermined { reason: String },
}

/// Rebuilds the family determined by `structure` and returns it alongside
/// the defining data. Comparing it with `fam` is the caller's job.
pub fn reconstruct(
    fam: &Family,
    structure: &TStructure,
    budget: u64,
) -> Result<(Reconstruction, Option<Family>), FamilyError> {
    let p = fam.params();
    let (t, k) = (p.t, p.k);
    match structure {
        TStructure::Grassmannian { z, .. } => {
            Ok((Reconstruction::H3 { z: z.clone() }, Some(build_h3(z, t, k, budget)?)))
        }
        TStructure::CommonCore { x, m, l, .. } if *l == k + 1 => {
            Ok((Reconstruction::H1 { x: x.clone(), m: m.clone() }, Some(build_h1(x, m, t, k, budget)?)))
        }
        TStructure::CommonCore { x, m, l, .. } if *l == k => {
            let c = fam.members().iter().filter(|f| !f.contains(x)).fold(m.clone(), |acc, f| acc.sum_unchecked(f));
            let cd = c.dim();
            if (k + 2..=2 * k - t).contains(&cd) || cd == p.n {
                let built = build_h2(x, m, &c, t, k, budget)?;
                Ok((Reconstruction::H2 { x: x.clone(), m: m.clone(), c }, Some(built)))
            } else {
                let reason = format!("l = k but dim C = {cd} is neither in k+2..=2k-t nor n");
                Ok((Reconstruction::NotDetermined { reason }, None))
            }
        }
        TStructure::CommonCore { l, .. } => {
            Ok((Reconstruction::NotDetermined { reason: format!("l = {l} is below k") }, None))
        }
        TStructure::Anomaly { reason, .. } => Ok((Reconstruction::NotDetermined { reason: reason.clone() }, None)),
    }
}

/// Exhaustive check of the refinement `|F_S| <= [k-r, i] |F_T|` for one `(S, F', i)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Refinement {
    pub s: usize,
    pub r: usize,
    pub i: usize,
    /// `|F_S|`.
    pub fs: u64,
    /// Number of `(s+i)`-subspaces `H` with `S ⊆ H ⊆ S + F'`.
    pub candidates: u64,
    pub best: Subspace,
    /// `max |F_H|` over the candidates.
    pub best_size: u64,
    /// Every member of `F_S` contains some candidate.
    pub covered: bool,
}

pub fn refine_restriction(
    fam: &Family,
    s: &Subspace,
    f_prime: &Subspace,
    i: usize,
    budget: u64,
) -> Result<Refinement, FamilyError> {
    let p = fam.params();
    let r = s.intersect_dim(f_prime)?;
    let sd = s.dim();
    if !(sd + 1 >= p.t && sd < p.k) {
        return Err(FamilyError::Precondition(format!("need t-1 <= dim S <= k-1, got dim S = {sd}")));
    }
    if !fam.contains(f_prime) {
        return Err(FamilyError::Precondition("F' is not a member".into()));
    }
    if r >= p.t || i == 0 || i > p.t - r {
        return Err(FamilyError::Precondition(format!("need r < t and 1 <= i <= t-r, got r = {r}, i = {i}")));
    }
    let host = s.sum_unchecked(f_prime);
    let hs: Vec<Subspace> = subspaces_of(&host, sd + i, budget)?.into_iter().filter(|h| h.contains(s)).collect();
    let fs: Vec<&Subspace> = fam.members().iter().filter(|f| f.contains(s)).collect();
    let sizes: Vec<u64> = hs.iter().map(|h| fs.iter().filter(|f| f.contains(h)).count() as u64).collect();
    let (bi, &best_size) =
        sizes.iter().enumerate().max_by_key(|&(j, v)| (*v, std::cmp::Reverse(j))).expect("S + F' strictly contains S");
    let covered = fs.iter().all(|f| hs.iter().any(|h| f.contains(h)));
    Ok(Refinement {
        s: sd,
        r,
        i,
        fs: fs.len() as u64,
        candidates: hs.len() as u64,
        best: hs[bi].clone(),
        best_size,
        covered,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{build_seeded, restrict_to, Construction, Provenance};
    use crate::gfq::{make_field, DEFAULT_BUDGET};

    #[test]
    fn star_has_covering_number_t() {
        let f = make_field(2).unwrap();
        let fam = build_seeded(Construction::H1, &f, 6, 3, 1, 9, DEFAULT_BUDGET).unwrap();
        let Provenance::H1 { x, .. } = fam.provenance().clone() else { unreachable!() };
        let star = restrict_to(&fam, &x).unwrap();
        let c = covering_number(&star, 3, DEFAULT_BUDGET).unwrap();
        assert_eq!(c.level, Some(1));
        assert!(c.witnesses.iter().any(|w| w.subspace == x));
    }

    #[test]
    fn structures_recover_the_flags() {
        let f = make_field(2).unwrap();
        let h1 = build_seeded(Construction::H1, &f, 7, 3, 1, 3, DEFAULT_BUDGET).unwrap();
        let (_, s) = analyze_t_structure(&h1, DEFAULT_BUDGET).unwrap().unwrap();
        let Provenance::H1 { x, m } = h1.provenance() else { unreachable!() };
        assert_eq!(s, TStructure::CommonCore { x: x.clone(), m: m.clone(), l: 4, witnesses: 7 });
        let (rec, built) = reconstruct(&h1, &s, DEFAULT_BUDGET).unwrap();
        assert!(matches!(rec, Reconstruction::H1 { .. }));
        assert!(built.unwrap().same_members(&h1));

        let h3 = build_seeded(Construction::H3, &f, 7, 3, 1, 3, DEFAULT_BUDGET).unwrap();
        let (_, s) = analyze_t_structure(&h3, DEFAULT_BUDGET).unwrap().unwrap();
        let Provenance::H3 { z } = h3.provenance() else { unreachable!() };
        assert_eq!(s, TStructure::Grassmannian { z: z.clone(), witnesses: 7 });
    }

    #[test]
    fn h2_reconstruction() {
        let f = make_field(2).unwrap();
        let h2 = build_seeded(Construction::H2 { c: 6 }, &f, 8, 4, 2, 6, DEFAULT_BUDGET).unwrap();
        let (cover, s) = analyze_t_structure(&h2, DEFAULT_BUDGET).unwrap().unwrap();
        assert_eq!(cover.level, Some(3));
        let Provenance::H2 { x, m, c } = h2.provenance().clone() else { unreachable!() };
        assert!(matches!(&s, TStructure::CommonCore { x: sx, m: sm, l: 4, .. } if *sx == x && *sm == m));
        let (rec, built) = reconstruct(&h2, &s, DEFAULT_BUDGET).unwrap();
        assert_eq!(rec, Reconstruction::H2 { x, m, c });
        assert!(built.unwrap().same_members(&h2));
    }

    #[test]
    fn classifier_anomalies() {
        let f = make_field(2).unwrap();
        let a = Subspace::from_rows(&f, 5, &[vec![1, 0, 0, 0, 0], vec![0, 1, 0, 0, 0]]).unwrap();
        let b = Subspace::from_rows(&f, 5, &[vec![0, 0, 1, 0, 0], vec![0, 0, 0, 1, 0]]).unwrap();
        assert!(matches!(classify_witnesses(&[a.clone(), b], 1, 3, 2), TStructure::Anomaly { .. }));
        assert!(matches!(classify_witnesses(&[], 1, 3, 2), TStructure::Anomaly { .. }));
        match classify_witnesses(&[a.clone()], 1, 3, 2) {
            TStructure::CommonCore { m, l: 2, witnesses: 1, x } => {
                assert_eq!(m, a);
                assert!(a.contains(&x));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn refinement_bound_holds() {
        let f = make_field(2).unwrap();
        let fam = build_seeded(Construction::H1, &f, 6, 3, 1, 4, DEFAULT_BUDGET).unwrap();
        let zero = Subspace::zero(&f, 6);
        let other = fam.members().iter().find(|m| m.meet_dim(&fam.members()[0]) == 1).unwrap().clone();
        let s = fam.members()[0].intersection(&other).unwrap();
        let fp = fam.members().iter().find(|m| m.meet_dim(&s) == 0).unwrap().clone();
        let r = refine_restriction(&fam, &s, &fp, 1, DEFAULT_BUDGET).unwrap();
        assert!(r.covered);
        assert_eq!(qnum::ExactInt::from(r.candidates), qnum::gauss_binom(3, 1, 2));
        assert!(r.fs <= r.candidates * r.best_size);
        assert!(refine_restriction(&fam, &zero, &fp, 1, DEFAULT_BUDGET).is_ok());
        assert!(refine_restriction(&fam, &s, &fp, 2, DEFAULT_BUDGET).is_err());
    }
}
