//! Checks that enumerate subspaces.

use std::collections::{BTreeMap, HashSet};
use std::time::Instant;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::record::{CheckRecord, Point, Rel, SkipReason};
use super::{CountGrid, EnumPoint, TypeCountGrid};
use crate::families::{
    self, analyze_t_structure, build_seeded, common_core_dim, is_maximal, is_t_intersecting, reconstruct,
    refine_restriction, restrict_to, Construction, Family, Provenance, Reconstruction, TStructure,
};
use crate::gfq::{check_budget, make_field, Field, Grassmannian, Subspace};
use crate::qnum;

/// An expected value frozen from an earlier enumeration run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fixture {
    pub check: String,
    #[serde(flatten)]
    pub point: Point,
    pub expected: String,
}

fn ms(t0: Instant) -> u64 {
    t0.elapsed().as_millis() as u64
}

/// Why a point cannot be enumerated, if it cannot.
fn feasibility(q: u64, n: i64, k: i64, t: i64, budget: u64) -> Result<Field, SkipReason> {
    let field = make_field(q).map_err(|_| SkipReason::UnsupportedQ)?;
    if !(t >= 1 && t + 2 <= k && 2 * k <= n) {
        return Err(SkipReason::OutOfHypothesis);
    }
    check_budget(n as usize, k as usize, q, budget).map_err(|_| SkipReason::OverBudget)?;
    Ok(field)
}

/// The constructions requested at a point; an empty `cs` means every admissible `c`.
pub fn point_constructions(p: &EnumPoint) -> Vec<Construction> {
    let mut cs: Vec<i64> =
        if p.cs.is_empty() { (p.k + 1..=2 * p.k - p.t).chain(std::iter::once(p.n)).collect() } else { p.cs.clone() };
    cs.dedup();
    let mut v = vec![Construction::H1];
    v.extend(cs.into_iter().map(|c| Construction::H2 { c: c as usize }));
    v.push(Construction::H3);
    v
}

fn construction_point(p: &EnumPoint, which: Construction) -> Point {
    let base = Point::nkt(p.q, p.n, p.k, p.t);
    match which {
        Construction::H2 { c } => base.with_c(c as i64),
        _ => base,
    }
}

fn check_id(which: Construction) -> &'static str {
    match which {
        Construction::H1 => "size.h1",
        Construction::H2 { .. } => "size.h2",
        Construction::H3 => "size.h3",
    }
}

fn build(
    p: &EnumPoint,
    field: &Field,
    which: Construction,
    seed: u64,
    budget: u64,
) -> Result<Family, families::FamilyError> {
    build_seeded(which, field, p.n as usize, p.k as usize, p.t as usize, seed, budget)
}

/// `(check id, point, enumerated value)` for every size observable at `p`.
fn enumerated_sizes(p: &EnumPoint, seed: u64, budget: u64) -> Result<Vec<(String, Point, BigInt, u64)>, SkipReason> {
    let field = feasibility(p.q, p.n, p.k, p.t, budget)?;
    let mut out = Vec::new();
    for which in point_constructions(p) {
        let pt = construction_point(p, which);
        let id = check_id(which);
        let t0 = Instant::now();
        let fam = match build(p, &field, which, seed, budget) {
            Ok(f) => f,
            Err(families::FamilyError::Qnum(_)) => continue,
            Err(_) => return Err(SkipReason::OverBudget),
        };
        let elapsed = ms(t0);
        out.push((id.to_string(), pt, BigInt::from(fam.len()), elapsed));
        if let Some([a, b, c]) = fam.h2_part_sizes() {
            for (part, v) in [("a", a), ("b", b), ("c", c)] {
                out.push((format!("{id}.{part}"), pt, BigInt::from(v), 0));
            }
        }
    }
    Ok(out)
}

fn closed_form(id: &str, p: Point) -> Option<BigInt> {
    let (q, n, k, t) = (p.q, p.n?, p.k?, p.t?);
    Some(match id {
        "size.h1" => qnum::h1_size(t, k, n, q),
        "size.h3" => qnum::h3_size(t, k, n, q),
        "size.h2" => qnum::h2_size(t, k, p.c?, n, q).ok()?,
        "size.h2.a" => qnum::h2_parts(t, k, p.c?, n, q).ok()?.a,
        "size.h2.b" => qnum::h2_parts(t, k, p.c?, n, q).ok()?.b,
        "size.h2.c" => qnum::h2_parts(t, k, p.c?, n, q).ok()?.c,
        _ => return None,
    })
}

fn skip_all(p: &EnumPoint, reason: SkipReason) -> Vec<CheckRecord> {
    point_constructions(p)
        .into_iter()
        .map(|w| CheckRecord::skip(check_id(w), construction_point(p, w), reason))
        .collect()
}

/// Enumerated sizes against the closed forms.
pub fn size_checks(p: &EnumPoint, seed: u64, budget: u64) -> Vec<CheckRecord> {
    match enumerated_sizes(p, seed, budget) {
        Err(reason) => skip_all(p, reason),
        Ok(vals) => vals
            .into_iter()
            .map(|(id, pt, actual, elapsed)| {
                let expected = closed_form(&id, pt).expect("closed form for every size id");
                CheckRecord::exact(&id, pt, &expected, &actual).ms(elapsed)
            })
            .collect(),
    }
}

/// Enumerates every size observable at the points, for freezing as fixtures.
pub fn freeze_fixtures(points: &[EnumPoint], seed: u64, budget: u64) -> Vec<Fixture> {
    let mut out = Vec::new();
    for p in points {
        if let Ok(vals) = enumerated_sizes(p, seed, budget) {
            out.extend(vals.into_iter().map(|(check, point, v, _)| Fixture { check, point, expected: v.to_string() }));
        }
    }
    out
}

/// Enumerated sizes against frozen fixtures.
pub fn fixture_checks(fixtures: &[Fixture], seed: u64, budget: u64) -> Vec<CheckRecord> {
    // one enumeration per (q, n, k, t)
    let mut groups: BTreeMap<(u64, i64, i64, i64), Vec<&Fixture>> = BTreeMap::new();
    let mut out = Vec::new();
    for f in fixtures {
        match (f.point.n, f.point.k, f.point.t) {
            (Some(n), Some(k), Some(t)) => groups.entry((f.point.q, n, k, t)).or_default().push(f),
            _ => out.push(CheckRecord::failed(
                &format!("fixture.{}", f.check),
                f.point,
                f.expected.clone(),
                "fixture lacks n, k or t".into(),
            )),
        }
    }
    for ((q, n, k, t), fs) in groups {
        let mut cs: Vec<i64> = fs.iter().filter_map(|f| f.point.c).collect();
        cs.sort();
        cs.dedup();
        let p = EnumPoint { q, n, k, t, cs: if cs.is_empty() { vec![k + 1] } else { cs }, ..EnumPoint::default() };
        let vals = enumerated_sizes(&p, seed, budget);
        for f in fs {
            let id = format!("fixture.{}", f.check);
            let r = match &vals {
                Err(reason) => CheckRecord::skip(&id, f.point, *reason),
                Ok(vals) => match vals.iter().find(|(c, pt, _, _)| *c == f.check && *pt == f.point) {
                    Some((_, _, v, elapsed)) => {
                        CheckRecord::matches(&id, f.point, f.expected.clone(), v.to_string()).ms(*elapsed)
                    }
                    None => CheckRecord::failed(&id, f.point, f.expected.clone(), "no such observable".into()),
                },
            };
            out.push(r);
        }
    }
    out
}

/// Enumeration length against `[n, k]_q`.
pub fn grassmannian_counts(grid: &CountGrid, budget: u64) -> Vec<CheckRecord> {
    let mut out = Vec::new();
    let field = match make_field(grid.q) {
        Ok(f) => f,
        Err(_) => return vec![CheckRecord::skip("count.grassmannian", Point::q(grid.q), SkipReason::UnsupportedQ)],
    };
    for n in 0..=grid.n_max {
        for k in 0..=n {
            let p = Point { q: grid.q, n: Some(n as i64), k: Some(k as i64), ..Point::default() };
            let t0 = Instant::now();
            let g = match Grassmannian::new(&field, n, k, budget) {
                Ok(g) => g,
                Err(_) => {
                    out.push(CheckRecord::skip("count.grassmannian", p, SkipReason::OverBudget));
                    continue;
                }
            };
            let expected = qnum::gauss_binom(n as i64, k as i64, grid.q);
            if g.len() <= grid.distinct_max {
                let all: Vec<Subspace> = g.iter().collect();
                let distinct: HashSet<&Subspace> = all.iter().collect();
                out.push(CheckRecord::exact("count.grassmannian", p, &expected, &BigInt::from(all.len())).ms(ms(t0)));
                out.push(CheckRecord::exact(
                    "count.grassmannian_distinct",
                    p,
                    &expected,
                    &BigInt::from(distinct.len()),
                ));
            } else {
                let count = g.iter().count();
                out.push(CheckRecord::exact("count.grassmannian", p, &expected, &BigInt::from(count)).ms(ms(t0)));
            }
        }
    }
    out
}

/// `e_j` for each `j` in `cols`, as rows of length `n`.
fn unit_rows(n: usize, cols: impl IntoIterator<Item = usize>) -> Vec<Vec<u8>> {
    cols.into_iter()
        .map(|j| {
            let mut v = vec![0u8; n];
            v[j] = 1;
            v
        })
        .collect()
}

/// `dim(F ∩ L_l)` for the coordinate subspaces `L_l = <e_{n-l}, ..., e_{n-1}>`,
/// read off the canonical basis: a vector of `F` vanishes on the first `n-l`
/// coordinates iff it is a combination of rows with pivot `>= n-l`.
fn meets_with_tail(pivots: &[usize], n: usize, out: &mut [usize]) {
    for (l, slot) in out.iter_mut().enumerate() {
        *slot = pivots.iter().filter(|&&p| p + l >= n).count();
    }
}

struct Tally {
    // counts[l][h]
    counts: Vec<Vec<u64>>,
    sampled: u64,
    agreed: u64,
}

impl Tally {
    fn new(n: usize) -> Tally {
        Tally { counts: vec![vec![0; n + 1]; n + 1], sampled: 0, agreed: 0 }
    }

    fn add(&mut self, f: &Subspace, tails: &[Subspace], idx: u64, sample_every: u64, buf: &mut [usize]) {
        let n = f.ambient_dim();
        meets_with_tail(&f.pivots(), n, buf);
        for l in 0..=n {
            self.counts[l][buf[l]] += 1;
        }
        if sample_every > 0 && idx % sample_every == 0 {
            let l = (idx / sample_every) as usize % (n + 1);
            self.sampled += 1;
            if tails[l].intersect_dim(f).expect("same ambient") == buf[l] {
                self.agreed += 1;
            }
        }
    }
}

/// Subspace types and containing counts against their closed forms.
pub fn type_counts(grid: &TypeCountGrid, seed: u64, budget: u64) -> Vec<CheckRecord> {
    let mut out = Vec::new();
    for &q in &grid.qs {
        let field = match make_field(q) {
            Ok(f) => f,
            Err(_) => {
                out.push(CheckRecord::skip("count.type", Point::q(q), SkipReason::UnsupportedQ));
                continue;
            }
        };
        for total in 2..=grid.ambient_max {
            out.extend(type_counts_in(&field, total, grid, seed, budget));
        }
    }
    out
}

fn type_counts_in(field: &Field, n: usize, grid: &TypeCountGrid, seed: u64, budget: u64) -> Vec<CheckRecord> {
    let q = field.q() as u64;
    let mut out = Vec::new();
    let tails: Vec<Subspace> =
        (0..=n).map(|l| Subspace::from_rows(field, n, &unit_rows(n, n - l..n)).unwrap()).collect();
    let mut buf = vec![0usize; n + 1];
    let base = Point { q, n: Some(n as i64), ..Point::default() };

    for m in 0..=n {
        let p = Point { k: Some(m as i64), ..base };
        let t0 = Instant::now();
        let g = match Grassmannian::new(field, n, m, budget) {
            Ok(g) => g,
            Err(_) => {
                out.push(CheckRecord::skip("count.type", p, SkipReason::OverBudget));
                continue;
            }
        };
        let mut tally = Tally::new(n);
        for (idx, f) in g.iter().enumerate() {
            tally.add(&f, &tails, idx as u64, grid.sample_every, &mut buf);
        }
        let elapsed = ms(t0);
        for l in 1..n {
            let e = n - l;
            let mut stray = 0u64;
            for h in 0..=m.min(l) {
                let admissible = m - h <= e;
                let got = tally.counts[l][h];
                if admissible {
                    let want = qnum::type_count(m as i64, h as i64, e as i64, l as i64, q);
                    out.push(
                        CheckRecord::exact("count.type", p, &want, &BigInt::from(got))
                            .detail(format!("e={e} l={l} m={m} h={h}"))
                            .ms(elapsed),
                    );
                } else {
                    stray += got;
                }
            }
            out.push(
                CheckRecord::exact("count.type_inadmissible", p, &BigInt::from(0), &BigInt::from(stray))
                    .detail(format!("e={e} l={l} m={m}")),
            );
        }
        out.push(CheckRecord::exact("count.meet_sample", p, &BigInt::from(tally.sampled), &BigInt::from(tally.agreed)));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (q << 32) ^ n as u64);
    for l in 1..n {
        let e = n - l;
        for m1 in 1..n {
            for h1 in 0..=m1.min(l) {
                if m1 - h1 > e {
                    continue;
                }
                let f1 = typed_subspace(field, e, l, m1, h1, &mut rng);
                out.extend(containing_counts(field, &f1, e, l, h1, &tails[l], grid.sample_every, budget));
            }
        }
    }
    out
}

/// A pseudo-random `m1`-subspace meeting `L = <e_e, ..., e_{e+l-1}>` in dimension exactly `h1`.
fn typed_subspace(field: &Field, e: usize, l: usize, m1: usize, h1: usize, rng: &mut ChaCha8Rng) -> Subspace {
    let n = e + l;
    let q = field.q();
    let inner = Subspace::random(field, l, h1, rng).unwrap();
    let outer = Subspace::random(field, e, m1 - h1, rng).unwrap();
    let mut rows = Vec::with_capacity(m1);
    for r in inner.rows() {
        let mut v = vec![0u8; e];
        v.extend(r);
        rows.push(v);
    }
    for r in outer.rows() {
        let mut v = r;
        v.extend((0..l).map(|_| rng.gen_range(0..q)));
        rows.push(v);
    }
    Subspace::from_rows(field, n, &rows).unwrap()
}

fn containing_counts(
    field: &Field,
    f1: &Subspace,
    e: usize,
    l: usize,
    h1: usize,
    tail: &Subspace,
    sample_every: u64,
    budget: u64,
) -> Vec<CheckRecord> {
    let q = field.q() as u64;
    let n = e + l;
    let m1 = f1.dim();
    let pivots = f1.pivots();
    // the unit vectors off the pivots of F1 span a complement W; F ⊇ F1 ↔ F ∩ W
    let free: Vec<usize> = (0..n).filter(|j| !pivots.contains(j)).collect();
    let f1_rows = f1.rows();
    let mut out = Vec::new();
    for m in m1..=n {
        let p = Point { q, n: Some(n as i64), k: Some(m as i64), ..Point::default() };
        let d = format!("e={e} l={l} m1={m1} h1={h1} m={m}");
        let t0 = Instant::now();
        let g = match Grassmannian::new(field, n - m1, m - m1, budget) {
            Ok(g) => g,
            Err(_) => {
                out.push(CheckRecord::skip("count.containing", p, SkipReason::OverBudget).detail(d));
                continue;
            }
        };
        let mut by_h = vec![0u64; n + 1];
        let (mut sampled, mut agreed) = (0u64, 0u64);
        let mut buf = vec![0usize; n + 1];
        for (idx, w) in g.iter().enumerate() {
            let mut rows = f1_rows.clone();
            for r in w.rows() {
                let mut v = vec![0u8; n];
                for (j, x) in free.iter().zip(r) {
                    v[*j] = x;
                }
                rows.push(v);
            }
            let f = Subspace::from_rows(field, n, &rows).unwrap();
            meets_with_tail(&f.pivots(), n, &mut buf);
            by_h[buf[l]] += 1;
            if sample_every > 0 && idx as u64 % sample_every == 0 {
                sampled += 1;
                agreed += u64::from(tail.intersect_dim(&f).unwrap() == buf[l] && f.contains(f1));
            }
        }
        let elapsed = ms(t0);
        let mut stray = 0u64;
        for (h, &got) in by_h.iter().enumerate() {
            let admissible = h1 <= h && h <= l && m1 - h1 <= m.saturating_sub(h) && h <= m && m - h <= e;
            if admissible {
                let want = qnum::containing_count(m1 as i64, h1 as i64, m as i64, h as i64, e as i64, l as i64, q);
                out.push(
                    CheckRecord::exact("count.containing", p, &want, &BigInt::from(got))
                        .detail(format!("{d} h={h}"))
                        .ms(elapsed),
                );
            } else {
                stray += got;
            }
        }
        out.push(
            CheckRecord::exact("count.containing_inadmissible", p, &BigInt::from(0), &BigInt::from(stray))
                .detail(d.clone()),
        );
        out.push(CheckRecord::exact("count.meet_sample", p, &BigInt::from(sampled), &BigInt::from(agreed)).detail(d));
    }
    out
}

/// The structure a construction should exhibit, read from its provenance.
enum Expected {
    Core { x: Subspace, m: Subspace, l: usize, c: Option<Subspace> },
    Grass { z: Subspace },
}

fn expected_structure(fam: &Family) -> Option<Expected> {
    let p = fam.params();
    Some(match fam.provenance() {
        Provenance::H1 { x, m } => Expected::Core { x: x.clone(), m: m.clone(), l: p.k + 1, c: None },
        Provenance::H2 { x, m, c } if c.dim() == p.k + 1 => {
            Expected::Core { x: x.clone(), m: c.clone(), l: p.k + 1, c: None }
        }
        Provenance::H2 { m, c, .. } if c.dim() == p.n && p.t + 2 == p.k => Expected::Grass { z: m.clone() },
        Provenance::H2 { x, m, c } => Expected::Core { x: x.clone(), m: m.clone(), l: p.k, c: Some(c.clone()) },
        Provenance::H3 { z } => Expected::Grass { z: z.clone() },
        Provenance::Custom => return None,
    })
}

fn shape_label(s: &TStructure) -> String {
    match s {
        TStructure::CommonCore { l, .. } => format!("common_core(l={l})"),
        TStructure::Grassmannian { .. } => "grassmannian".into(),
        TStructure::Anomaly { reason, .. } => format!("anomaly({reason})"),
    }
}

fn expected_label(e: &Expected) -> String {
    match e {
        Expected::Core { l, .. } => format!("common_core(l={l})"),
        Expected::Grass { .. } => "grassmannian".into(),
    }
}

/// Predicates, covering number, structure and reconstruction for each construction at `p`.
pub fn structure_checks(p: &EnumPoint, seed: u64, budget: u64) -> Vec<CheckRecord> {
    let field = match feasibility(p.q, p.n, p.k, p.t, budget) {
        Ok(f) => f,
        Err(reason) => {
            return point_constructions(p)
                .into_iter()
                .map(|w| CheckRecord::skip("structure", construction_point(p, w), reason).detail(w.label()))
                .collect()
        }
    };
    let mut out = Vec::new();
    for which in point_constructions(p) {
        let pt = construction_point(p, which);
        let label = which.label();
        match build(p, &field, which, seed, budget) {
            Ok(fam) => out.extend(family_structure(&fam, p, pt, &label, seed, budget)),
            Err(families::FamilyError::Qnum(_)) => {}
            Err(e) => out.push(CheckRecord::failed("structure.build", pt, label.clone(), e.to_string()).detail(label)),
        }
    }
    out
}

fn family_structure(fam: &Family, p: &EnumPoint, pt: Point, label: &str, seed: u64, budget: u64) -> Vec<CheckRecord> {
    let mut out = Vec::new();
    let t = p.t as usize;
    let n_members = BigInt::from(fam.len());

    let t0 = Instant::now();
    let inter = is_t_intersecting(fam);
    let mut r = CheckRecord::flag("structure.intersecting", pt, true, inter.intersecting).detail(label).ms(ms(t0));
    if let Some((i, j, d)) = inter.witness {
        r.detail = Some(format!("{label}: members {i}, {j} meet in dim {d}"));
    }
    out.push(r);

    let core = common_core_dim(fam).unwrap_or(0);
    out.push(
        CheckRecord::relation("structure.nontrivial", pt, &BigInt::from(core), Rel::Lt, &BigInt::from(t))
            .detail(format!("{label}: core dim {core}")),
    );

    if p.maximal && inter.intersecting {
        let t0 = Instant::now();
        let r = match is_maximal(fam, budget) {
            Ok(m) => {
                let d = match &m.witness {
                    Some(w) => format!("{label}: addable {w}"),
                    None => format!("{label}: scanned {}", m.scanned),
                };
                CheckRecord::flag("structure.maximal", pt, true, m.maximal).detail(d)
            }
            Err(e) => {
                CheckRecord::skip("structure.maximal", pt, SkipReason::OverBudget).detail(format!("{label}: {e}"))
            }
        };
        out.push(r.ms(ms(t0)));
    }

    let t0 = Instant::now();
    let analysis = match analyze_t_structure(fam, budget) {
        Ok(a) => a,
        Err(e) => {
            out.push(CheckRecord::skip("structure.tau", pt, SkipReason::OverBudget).detail(format!("{label}: {e}")));
            return out;
        }
    };
    let Some((cover, shape)) = analysis else {
        let got = families::covering_number(fam, p.k as usize, budget).ok().and_then(|c| c.level);
        let actual = got.map_or("none".to_string(), |l| l.to_string());
        out.push(CheckRecord::matches("structure.tau", pt, (t + 1).to_string(), actual).detail(label));
        return out;
    };
    let witnesses = cover.witnesses.len();
    out.push(
        CheckRecord::exact("structure.tau", pt, &BigInt::from(t + 1), &BigInt::from(cover.level.unwrap_or(0)))
            .detail(format!("{label}: {witnesses} witnesses"))
            .ms(ms(t0)),
    );

    let Some(expected) = expected_structure(fam) else {
        return out;
    };
    out.push(CheckRecord::matches("structure.shape", pt, expected_label(&expected), shape_label(&shape)).detail(label));

    let t0 = Instant::now();
    let (rec, rebuilt) = match reconstruct(fam, &shape, budget) {
        Ok(x) => x,
        Err(e) => {
            out.push(CheckRecord::failed("structure.reconstructed", pt, "true".into(), e.to_string()).detail(label));
            return out;
        }
    };
    let recovered = match (&expected, &shape, &rec) {
        (Expected::Grass { z }, TStructure::Grassmannian { z: got, .. }, _) => z == got,
        (Expected::Core { x, m, c, .. }, TStructure::CommonCore { x: gx, m: gm, .. }, rec) => {
            let c_ok = match (c, rec) {
                (Some(c), Reconstruction::H2 { c: gc, .. }) => c == gc,
                (None, _) => true,
                _ => false,
            };
            x == gx && m == gm && c_ok
        }
        _ => false,
    };
    out.push(CheckRecord::flag("structure.recovered", pt, true, recovered).detail(label));
    let same = rebuilt.as_ref().is_some_and(|r| r.same_members(fam));
    let shape_name = match &rec {
        Reconstruction::H1 { .. } => "h1".to_string(),
        Reconstruction::H2 { c, .. } => format!("h2(c={})", c.dim()),
        Reconstruction::H3 { .. } => "h3".to_string(),
        Reconstruction::NotDetermined { reason } => format!("none: {reason}"),
    };
    out.push(
        CheckRecord::flag("structure.reconstructed", pt, true, same)
            .detail(format!("{label} as {shape_name}"))
            .ms(ms(t0)),
    );

    let (q, n, k, ti) = (p.q, p.n, p.k, p.t);
    match &shape {
        TStructure::CommonCore { l, witnesses, .. } if *witnesses >= 2 => {
            let b = qnum::bound_tau1_interval(ti, k, n, *l as i64, q).expect("l within range");
            out.push(
                CheckRecord::relation("bound.tau1", pt, &n_members, Rel::Le, &b)
                    .detail(format!("{label}: interval bound, l={l}")),
            );
        }
        TStructure::CommonCore { .. } => {
            let b = qnum::bound_tau1_single(ti, k, n, q);
            out.push(
                CheckRecord::relation("bound.tau1", pt, &n_members, Rel::Le, &b)
                    .detail(format!("{label}: single cover bound")),
            );
        }
        TStructure::Grassmannian { .. } => {
            let h3 = qnum::h3_size(ti, k, n, q);
            out.push(
                CheckRecord::exact("bound.tau1", pt, &h3, &n_members).detail(format!("{label}: grassmannian case")),
            );
        }
        TStructure::Anomaly { .. } => {}
    }

    out.extend(sampled_restrictions(fam, p, pt, label, seed, budget));
    out
}

/// Sampled checks of the `|F_S|` bound and its refinement.
fn sampled_restrictions(
    fam: &Family,
    p: &EnumPoint,
    pt: Point,
    label: &str,
    seed: u64,
    budget: u64,
) -> Vec<CheckRecord> {
    let mut out = Vec::new();
    let (t, k, n, q) = (p.t as usize, p.k as usize, p.n as usize, p.q);
    let field = fam.field().expect("nonempty").clone();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed ^ ((n as u64) << 8) ^ ((k as u64) << 16) ^ fam.len() as u64);
    let s_lo = t - 1;
    for j in 0..p.samples {
        let s = s_lo + j % (k - s_lo);
        let sub = if j % 2 == 0 {
            let host = &fam.members()[rng.gen_range(0..fam.len())];
            host.embed(&Subspace::random(&field, k, s, &mut rng).unwrap()).unwrap()
        } else {
            Subspace::random(&field, n, s, &mut rng).unwrap()
        };
        let d = format!("{label}: sample {j}, dim S = {s}");
        let Some(fp) = fam.members().iter().find(|m| m.meet_dim(&sub) < t) else {
            out.push(CheckRecord::skip("bound.fs", pt, SkipReason::OutOfHypothesis).detail(d));
            continue;
        };
        let r = fp.meet_dim(&sub);
        let fs = BigInt::from(restrict_to(fam, &sub).expect("same ambient").len());
        let bound = qnum::fs_bound(k as i64, t as i64, r as i64, s as i64, n as i64, q).expect("checked ranges");
        out.push(CheckRecord::relation("bound.fs", pt, &fs, Rel::Le, &bound).detail(format!("{d}, r = {r}")));
        for i in 1..=t - r {
            let di = format!("{d}, r = {r}, i = {i}");
            match refine_restriction(fam, &sub, fp, i, budget) {
                Ok(rf) => {
                    let count = qnum::gauss_binom((k - r) as i64, i as i64, q);
                    out.push(
                        CheckRecord::exact("bound.refine.candidates", pt, &count, &BigInt::from(rf.candidates))
                            .detail(di.clone()),
                    );
                    out.push(CheckRecord::flag("bound.refine.covered", pt, true, rf.covered).detail(di.clone()));
                    let rhs = count * BigInt::from(rf.best_size);
                    out.push(CheckRecord::relation("bound.refine", pt, &BigInt::from(rf.fs), Rel::Le, &rhs).detail(di));
                }
                Err(e) => out.push(CheckRecord::failed("bound.refine", pt, "<=".into(), e.to_string()).detail(di)),
            }
        }
    }
    out
}
