//! Single-field structural mutations and the fuzz driver.
//!
//! Every mutation is classified by an oracle from [`super::oracle`] as
//! breaking or equivalent. A breaking mutant must be flagged by its
//! validator (otherwise it survives); an equivalent mutant is a valid
//! instance and must pass (otherwise the validator has a false positive).

use std::fmt;
use std::sync::Arc;

use rand::Rng;

use crate::error::Result;
use crate::groupoid::{validate_groupoid, FiniteGroupoid};
use crate::harness::gen::{random_gauge, random_nonzero, random_ruth, random_vb, trial_rng, Bounds};
use crate::harness::oracle::{morphism_is_valid, ruth_is_valid, table_cancels, vb_is_valid_at_random_points};
use crate::harness::{merge_trial, run_trials};
use crate::linalg::{Matrix, Rational};
use crate::report::Report;
use crate::ruth::{validate_morphism, validate_ruth, Ruth, RuthMorphism};
use crate::vb::{validate_vb, VbGroupoid};
use crate::wrep::{equivariant_from_morphism, validate_equivariant, validate_wrep, wrep_from_ruth, EquivariantMap, WeakRepresentation};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Class {
    CompositionEntry,
    RuthEntry,
    AlphaCell,
    MultEntry,
    DeltaCell,
}

impl Class {
    pub const ALL: [Class; 5] = [Class::CompositionEntry, Class::RuthEntry, Class::AlphaCell, Class::MultEntry, Class::DeltaCell];

    pub fn name(self) -> &'static str {
        match self {
            Class::CompositionEntry => "composition-entry",
            Class::RuthEntry => "ruth-entry",
            Class::AlphaCell => "alpha-cell",
            Class::MultEntry => "mult-entry",
            Class::DeltaCell => "delta-cell",
        }
    }
}

/// The verdicts on one mutant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub class: Class,
    pub description: String,
    pub breaking: bool,
    pub flagged: bool,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.class.name(), self.description)
    }
}

fn bumped(m: &Matrix, i: usize, j: usize, c: &Rational) -> Matrix {
    let mut out = m.clone();
    out.set(i, j, m.get(i, j) + c);
    out
}

/// A uniformly random entry among the matrices; `None` if all are empty.
fn pick_entry(rng: &mut impl Rng, ms: &[&Matrix]) -> Option<(usize, usize, usize)> {
    let total: usize = ms.iter().map(|m| m.rows() * m.cols()).sum();
    if total == 0 {
        return None;
    }
    let mut k = rng.gen_range(0..total);
    for (idx, m) in ms.iter().enumerate() {
        let n = m.rows() * m.cols();
        if k < n {
            return Some((idx, k / m.cols(), k % m.cols()));
        }
        k -= n;
    }
    unreachable!("index within total")
}

/// Replaces one composite by a different arrow or by "undefined".
pub fn mutate_composition(rng: &mut impl Rng, g: &FiniteGroupoid) -> Outcome {
    let (a, b) = g.pairs()[rng.gen_range(0..g.pairs().len())];
    let old = g.compose(a, b);
    let others: Vec<usize> = (0..g.num_arrows()).filter(|&c| c != old).collect();
    let value = if others.is_empty() || rng.gen_bool(0.25) { None } else { Some(others[rng.gen_range(0..others.len())]) };
    let m = g.with_composite(a, b, value);
    let shown = value.map_or("undefined".to_string(), |c| g.arrow_name(c).to_string());
    Outcome {
        class: Class::CompositionEntry,
        description: format!("{} := {shown}", g.fmt_tuple(&[a, b])),
        breaking: !table_cancels(&m),
        flagged: !validate_groupoid(&m).passed(),
    }
}

/// `r` with one entry of `δ`, `λ⁰`, `λ¹` or `Ω` changed by `c`; the field
/// index runs over those four families in that order.
fn ruth_with_entry(r: &Ruth, field: usize, i: usize, j: usize, c: &Rational) -> Result<(Ruth, String)> {
    let g = r.groupoid();
    let (mut diffs, mut l0, mut l1, mut om) = (r.complex().diffs().to_vec(), r.lambda0s().to_vec(), r.lambda1s().to_vec(), r.omegas().to_vec());
    let no = g.num_objects();
    let na = g.num_arrows();
    let what = if field < no {
        diffs[field] = bumped(&diffs[field], i, j, c);
        format!("delta[{}]", g.object_name(field))
    } else if field < no + na {
        let a = field - no;
        l0[a] = bumped(&l0[a], i, j, c);
        format!("lambda0[{}]", g.arrow_name(a))
    } else if field < no + 2 * na {
        let a = field - no - na;
        l1[a] = bumped(&l1[a], i, j, c);
        format!("lambda1[{}]", g.arrow_name(a))
    } else {
        let p = field - no - 2 * na;
        om[p] = bumped(&om[p], i, j, c);
        let (a, b) = g.pairs()[p];
        format!("omega[{}]", g.fmt_tuple(&[a, b]))
    };
    let complex = crate::twoterm::TwoTermComplex::new(g.objects().to_vec(), diffs)?;
    Ok((r.with_parts(complex, l0, l1, om)?, format!("{what}({i},{j}) += {c}")))
}

pub fn mutate_ruth(rng: &mut impl Rng, r: &Ruth) -> Result<Option<Outcome>> {
    let fields: Vec<&Matrix> = r.complex().diffs().iter().chain(r.lambda0s()).chain(r.lambda1s()).chain(r.omegas()).collect();
    let Some((field, i, j)) = pick_entry(rng, &fields) else { return Ok(None) };
    let c = random_nonzero(rng);
    let (m, description) = ruth_with_entry(r, field, i, j, &c)?;
    Ok(Some(Outcome {
        class: Class::RuthEntry,
        description,
        breaking: !ruth_is_valid(&Arc::new(m.clone())),
        flagged: !validate_ruth(&m).passed(),
    }))
}

/// One cell of `α` in `w = wrep_from_ruth(r)`. The arrow block is the
/// source of the cell, so changing it always breaks; the `E⁰` block is
/// `Ω`, judged by the representation oracle.
pub fn mutate_alpha(rng: &mut impl Rng, r: &Ruth, w: &WeakRepresentation) -> Result<Option<Outcome>> {
    let g = r.groupoid();
    let cells: Vec<&Matrix> = w.alpha.iter().collect();
    let Some((p, i, j)) = pick_entry(rng, &cells) else { return Ok(None) };
    let c = random_nonzero(rng);
    let (a, b) = g.pairs()[p];
    let mut m = w.clone();
    m.alpha[p] = bumped(&w.alpha[p], i, j, &c);
    let d0 = r.dim0(g.tgt(a));
    let breaking = if i < d0 {
        let field = g.num_objects() + 2 * g.num_arrows() + p;
        !ruth_is_valid(&Arc::new(ruth_with_entry(r, field, i, j, &c)?.0))
    } else {
        true
    };
    Ok(Some(Outcome {
        class: Class::AlphaCell,
        description: format!("alpha[{}]({i},{j}) += {c}", g.fmt_tuple(&[a, b])),
        breaking,
        flagged: !validate_wrep(&m).passed(),
    }))
}

pub fn mutate_mult(rng: &mut impl Rng, v: &VbGroupoid) -> Option<Outcome> {
    let g = v.base();
    let maps = v.mult_maps();
    let Some((p, i, j)) = pick_entry(rng, &maps.iter().collect::<Vec<_>>()) else { return None };
    let c = random_nonzero(rng);
    let m = v.with_mult_map(p, bumped(&maps[p], i, j, &c));
    let (a, b) = g.pairs()[p];
    Some(Outcome {
        class: Class::MultEntry,
        description: format!("mult[{}]({i},{j}) += {c}", g.fmt_tuple(&[a, b])),
        breaking: !vb_is_valid_at_random_points(&m, rng, 2),
        flagged: !validate_vb(&m).passed(),
    })
}

/// One cell of `δ` in `e = Φ(m)`. The arrow block is the source of the
/// cell, so changing it always breaks; the `E⁰` block is `-μ`, judged by
/// the morphism oracle.
pub fn mutate_delta(rng: &mut impl Rng, m: &RuthMorphism, e: &EquivariantMap) -> Result<Option<Outcome>> {
    let g = m.source.groupoid();
    let cells: Vec<&Matrix> = e.delta.iter().collect();
    let Some((a, i, j)) = pick_entry(rng, &cells) else { return Ok(None) };
    let c = random_nonzero(rng);
    let mut mutant = e.clone();
    mutant.delta[a] = bumped(&e.delta[a], i, j, &c);
    let breaking = if i < m.target.dim0(g.tgt(a)) {
        let mut mu = m.mu.clone();
        mu[a] = bumped(&mu[a], i, j, &-c.clone());
        let m2 = RuthMorphism::new(m.source.clone(), m.target.clone(), m.phi0.clone(), m.phi1.clone(), mu)?;
        !morphism_is_valid(&m2)
    } else {
        true
    };
    Ok(Some(Outcome {
        class: Class::DeltaCell,
        description: format!("delta[{}]({i},{j}) += {c}", g.arrow_name(a)),
        breaking,
        flagged: !validate_equivariant(&mutant).passed(),
    }))
}

/// The instances of one fuzz trial: a random representation `r`, a gauge
/// morphism into it, and their images.
struct Subjects {
    r: Arc<Ruth>,
    m: RuthMorphism,
    w: WeakRepresentation,
    v: Arc<VbGroupoid>,
    e: EquivariantMap,
}

fn subjects(rng: &mut impl Rng, bounds: Bounds) -> Result<Subjects> {
    let r = random_ruth(rng, bounds);
    let m = random_gauge(rng, &r);
    let w = wrep_from_ruth(&r)?;
    let (v, _) = random_vb(rng, &r)?;
    let e = equivariant_from_morphism(&m)?;
    Ok(Subjects { r, m, w, v, e })
}

/// One trial: validators must accept every unmutated subject, then one
/// mutation of each class is applied and judged.
pub fn fuzz_trial(seed: u64, trial: u64, bounds: Bounds) -> Report {
    let mut rep = Report::new();
    let mut rng = trial_rng(seed, trial);
    let s = match subjects(&mut rng, bounds) {
        Ok(s) => s,
        Err(e) => {
            rep.push("generator", "subjects", "valid instances", e);
            return rep;
        }
    };
    let controls = [
        ("groupoid", validate_groupoid(s.r.groupoid())),
        ("ruth", validate_ruth(&s.r)),
        ("morphism", validate_morphism(&s.m)),
        ("wrep", validate_wrep(&s.w)),
        ("vb", validate_vb(&s.v)),
        ("equivariant", validate_equivariant(&s.e)),
    ];
    for (kind, r) in controls {
        rep.count("controls", 1);
        if !r.passed() {
            rep.push("control", kind, "pass", r.failed_checks().join(", "));
        }
    }
    let outcomes: Vec<Result<Option<Outcome>>> = vec![
        Ok(Some(mutate_composition(&mut rng, s.r.groupoid()))),
        mutate_ruth(&mut rng, &s.r),
        mutate_alpha(&mut rng, &s.r, &s.w),
        Ok(mutate_mult(&mut rng, &s.v)),
        mutate_delta(&mut rng, &s.m, &s.e),
    ];
    for o in outcomes {
        match o {
            Ok(Some(o)) => record(&mut rep, &o),
            Ok(None) => rep.count("skipped-empty", 1),
            Err(e) => rep.push("mutation", "construction", "mutant", e),
        }
    }
    rep
}

fn record(rep: &mut Report, o: &Outcome) {
    rep.count("mutations", 1);
    rep.count(&format!("mutations/{}", o.class.name()), 1);
    match (o.breaking, o.flagged) {
        (true, true) => {
            rep.count("breaking", 1);
            rep.count("killed", 1);
        }
        (true, false) => {
            rep.count("breaking", 1);
            rep.push("survivor", o.to_string(), "flagged", "passed");
        }
        (false, false) => rep.count("equivalent", 1),
        (false, true) => {
            rep.count("equivalent", 1);
            rep.push("false-positive", o.to_string(), "pass", "flagged");
        }
    }
}

/// `trials` independent fuzz trials, merged by trial index.
pub fn fuzz(seed: u64, trials: u64, bounds: Bounds) -> Report {
    let mut rep = Report::new();
    for (t, r) in run_trials(trials, |t| fuzz_trial(seed, t, bounds)).into_iter().enumerate() {
        merge_trial(&mut rep, t as u64, r);
    }
    rep.count("trials", trials);
    rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::pair_ruth;
    use crate::harness::gen::trial_rng;

    #[test]
    fn fuzz_kills_every_breaking_mutant() {
        let rep = fuzz(1, 12, Bounds::default());
        assert!(rep.passed(), "{rep}");
        assert_eq!(rep.counter("killed"), rep.counter("breaking"));
        assert_eq!(rep.counter("controls"), 72);
        assert!(rep.counter("mutations") >= 55);
    }

    #[test]
    fn omega_mutation_on_zero_differential_is_equivalent() {
        let r = crate::fixtures::z2_ruth(crate::linalg::q(1));
        let g = r.groupoid();
        let gen = g.arrow_id("g").unwrap();
        let p = g.pair_index(gen, gen).unwrap();
        let field = g.num_objects() + 2 * g.num_arrows() + p;
        let (m, _) = ruth_with_entry(&r, field, 0, 0, &crate::linalg::q(1)).unwrap();
        assert!(ruth_is_valid(&Arc::new(m.clone())));
        assert!(validate_ruth(&m).passed());
    }

    #[test]
    fn source_block_mutations_always_break() {
        let r = Arc::new(pair_ruth());
        let w = wrep_from_ruth(&r).unwrap();
        let mut rng = trial_rng(9, 0);
        for _ in 0..40 {
            let o = mutate_alpha(&mut rng, &r, &w).unwrap().unwrap();
            assert_eq!(o.breaking, o.flagged, "{o}");
        }
    }
}
