//! Validity oracles that share no code path with the validators: the
//! cochain operator for representations and morphisms, random-point
//! evaluation for VB-groupoids, and the cancellation property for
//! composition tables. Fuzzing uses them to tell breaking mutants from
//! equivalent ones.

use std::sync::Arc;

use rand::Rng;

use crate::cochain::{check_morphism_operator, Cochains};
use crate::groupoid::FiniteGroupoid;
use crate::harness::gen::random_vector;
use crate::linalg::{vadd, Matrix, Vector};
use crate::ruth::{Ruth, RuthMorphism};
use crate::vb::VbGroupoid;

/// Every identity of a representation shows up in `D²` at total degree 0
/// or 1, so `r` is valid iff it is normalized and `D²` vanishes there.
pub fn ruth_is_valid(r: &Arc<Ruth>) -> bool {
    let g = r.groupoid();
    let normalized = (0..g.num_objects()).all(|x| {
        let u = g.unit(x);
        r.lambda0(u).is_identity() && r.lambda1(u).is_identity()
    }) && g
        .pairs()
        .iter()
        .enumerate()
        .all(|(p, &(a, b))| !(g.is_unit(a) || g.is_unit(b)) || r.omegas()[p].is_zero());
    normalized
        && Cochains::new(r.clone(), 3)
            .check_d_squared(1)
            .is_ok_and(|rep| rep.passed())
}

/// A morphism is valid iff `μ` vanishes at units and its cochain map
/// commutes with the total operators (degrees 0 and 1 cover every identity).
pub fn morphism_is_valid(m: &RuthMorphism) -> bool {
    let g = m.source.groupoid();
    (0..g.num_arrows()).filter(|&a| g.is_unit(a)).all(|a| m.mu[a].is_zero())
        && check_morphism_operator(m, 1).is_ok_and(|rep| rep.passed())
}

/// Left and right multiplication by each arrow are injective with the
/// right endpoints and units act trivially. A valid table has this
/// property, and changing a single entry of one destroys it: the new value
/// either has the wrong endpoints, is missing, or is already hit from the
/// same row.
pub fn table_cancels(g: &FiniteGroupoid) -> bool {
    let n = g.num_arrows();
    for a in 0..n {
        let mut row = vec![false; n];
        let mut col = vec![false; n];
        for b in 0..n {
            if g.src(a) == g.tgt(b) {
                let Some(c) = g.try_compose(a, b) else { return false };
                if g.src(c) != g.src(b) || g.tgt(c) != g.tgt(a) || std::mem::replace(&mut row[c], true) {
                    return false;
                }
                if g.is_unit(a) && c != b {
                    return false;
                }
            }
            if g.src(b) == g.tgt(a) {
                let Some(c) = g.try_compose(b, a) else { return false };
                if std::mem::replace(&mut col[c], true) {
                    return false;
                }
                if g.is_unit(a) && c != b {
                    return false;
                }
            }
        }
    }
    true
}

const RANGE: i64 = 1000;

/// A random `y` over arrow `h` with `t̃y = target`, if one exists.
fn random_with_target(rng: &mut impl Rng, v: &VbGroupoid, h: usize, target: &[crate::linalg::Rational]) -> Option<Vector> {
    random_in_preimage(rng, v.ttilde(h), target)
}

fn random_with_source(rng: &mut impl Rng, v: &VbGroupoid, h: usize, source: &[crate::linalg::Rational]) -> Option<Vector> {
    random_in_preimage(rng, v.stilde(h), source)
}

fn random_in_preimage(rng: &mut impl Rng, m: &Matrix, b: &[crate::linalg::Rational]) -> Option<Vector> {
    let base = m.solve(b).ok()??;
    let k = m.kernel_basis();
    Some(vadd(&base, &k.apply(&random_vector(rng, k.cols(), RANGE))))
}

/// Evaluates every VB-groupoid axiom at `samples` random points of each
/// fiber and fibered product.
pub fn vb_is_valid_at_random_points(v: &VbGroupoid, rng: &mut impl Rng, samples: usize) -> bool {
    let g = v.base();
    for _ in 0..samples {
        for x in 0..g.num_objects() {
            let u = g.unit(x);
            let e = random_vector(rng, v.objdim(x), RANGE);
            let p = v.unit(x, &e);
            if v.src(u, &p) != e || v.tgt(u, &p) != e {
                return false;
            }
        }
        for a in 0..g.num_arrows() {
            let (s, t, ai) = (g.src(a), g.tgt(a), g.inv(a));
            let w = random_vector(rng, v.arrdim(a), RANGE);
            let (sw, tw) = (v.src(a, &w), v.tgt(a, &w));
            if v.mul(a, g.unit(s), &w, &v.unit(s, &sw)).as_ref() != Some(&w)
                || v.mul(g.unit(t), a, &v.unit(t, &tw), &w).as_ref() != Some(&w)
            {
                return false;
            }
            let iw = v.inv(a, &w);
            if v.mul(a, ai, &w, &iw) != Some(v.unit(t, &tw)) || v.mul(ai, a, &iw, &w) != Some(v.unit(s, &sw)) {
                return false;
            }
        }
        for &(a, b) in g.pairs() {
            let x = random_vector(rng, v.arrdim(a), RANGE);
            let Some(y) = random_with_target(rng, v, b, &v.src(a, &x)) else { return false };
            let Some(xy) = v.mul(a, b, &x, &y) else { return false };
            let ab = g.compose(a, b);
            if v.src(ab, &xy) != v.src(b, &y) || v.tgt(ab, &xy) != v.tgt(a, &x) {
                return false;
            }
        }
        for &(a, b) in g.pairs() {
            for c in (0..g.num_arrows()).filter(|&c| g.tgt(c) == g.src(b)) {
                let z = random_vector(rng, v.arrdim(c), RANGE);
                let Some(y) = random_with_source(rng, v, b, &v.tgt(c, &z)) else { return false };
                let Some(x) = random_with_source(rng, v, a, &v.tgt(b, &y)) else { return false };
                let left = v.mul(a, b, &x, &y).and_then(|xy| v.mul(g.compose(a, b), c, &xy, &z));
                let right = v.mul(b, c, &y, &z).and_then(|yz| v.mul(a, g.compose(b, c), &x, &yz));
                if left.is_none() || left != right {
                    return false;
                }
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{pair_ruth, z2_ruth, z2_ruth_broken4};
    use crate::harness::gen::trial_rng;
    use crate::linalg::q;
    use crate::semidirect::semidirect;

    #[test]
    fn ruth_oracle_agrees_on_fixtures() {
        assert!(ruth_is_valid(&Arc::new(z2_ruth(q(1)))));
        assert!(ruth_is_valid(&Arc::new(pair_ruth())));
        assert!(!ruth_is_valid(&Arc::new(z2_ruth_broken4())));
    }

    #[test]
    fn vb_oracle_accepts_semidirect_and_rejects_a_changed_product() {
        let v = semidirect(&pair_ruth()).unwrap();
        let mut rng = trial_rng(1, 0);
        assert!(vb_is_valid_at_random_points(&v, &mut rng, 2));
        let p = v.base().pairs().iter().position(|&(a, b)| !v.base().is_unit(a) && !v.base().is_unit(b)).unwrap();
        let mut m = v.mult_map(p).clone();
        m.set(0, 0, m.get(0, 0) + &q(1));
        assert!(!vb_is_valid_at_random_points(&v.with_mult_map(p, m), &mut rng, 2));
    }

    #[test]
    fn table_oracle() {
        let g = FiniteGroupoid::cyclic(3);
        assert!(table_cancels(&g));
        let (a, b) = g.pairs()[4];
        let other = (0..3).find(|&c| c != g.compose(a, b)).unwrap();
        assert!(!table_cancels(&g.with_composite(a, b, Some(other))));
        assert!(!table_cancels(&g.with_composite(a, b, None)));
    }
}
