//! The semi-direct product `G ⋉ E` of a 2-term representation and the
//! functor `Ψ` on morphisms.
//!
//! `V₀ = E¹` and `V₁(g) = E⁰_{t g} ⊕ E¹_{s g}` with coordinates `(e₀, e₁)`:
//!
//! ```text
//! s̃(e₀, e₁) = e₁        t̃(e₀, e₁) = δe₀ + λ¹_g e₁        ũ(e) = (0, e)
//! (e₀, e₁)·(f₀, f₁) = (e₀ + λ⁰_g f₀ - Ω_{g,h} f₁, f₁)
//! (e₀, e₁)⁻¹ = (-λ⁰_{g⁻¹} e₀ + Ω_{g⁻¹,g} e₁, δe₀ + λ¹_g e₁)
//! ```

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::ruth::{validate_ruth, validate_morphism, Ruth, RuthMorphism};
use crate::vb::{VbGroupoid, VbMap, VbShape};

fn semidirect_unchecked(r: &Ruth) -> Result<VbGroupoid> {
    let g = r.groupoid();
    let na = g.num_arrows();
    let shape = VbShape {
        objdim: (0..g.num_objects()).map(|x| r.dim1(x)).collect(),
        arrdim: (0..na).map(|a| r.dim0(g.tgt(a)) + r.dim1(g.src(a))).collect(),
        stilde: (0..na)
            .map(|a| Matrix::zeros(r.dim1(g.src(a)), r.dim0(g.tgt(a))).hstack(&Matrix::identity(r.dim1(g.src(a)))))
            .collect(),
        ttilde: (0..na).map(|a| r.delta(g.tgt(a)).hstack(r.lambda1(a))).collect(),
        utilde: (0..g.num_objects())
            .map(|x| Matrix::zeros(r.dim0(x), r.dim1(x)).vstack(&Matrix::identity(r.dim1(x))))
            .collect(),
        inverse: (0..na)
            .map(|a| {
                let ai = g.inv(a);
                let top = r.lambda0(ai).neg().hstack(r.omega(ai, a));
                let bottom = r.delta(g.tgt(a)).hstack(r.lambda1(a));
                top.vstack(&bottom)
            })
            .collect(),
    };
    let pairs = g.pairs().to_vec();
    VbGroupoid::from_linear(r.groupoid_arc().clone(), shape, |p| {
        let (a, b) = pairs[p];
        let (t, sb) = (g.tgt(a), g.src(b));
        let (d0, d1) = (r.dim0(t), r.dim1(g.src(a)));
        let top = Matrix::identity(d0)
            .hstack(&Matrix::zeros(d0, d1))
            .hstack(r.lambda0(a))
            .hstack(&r.omega(a, b).neg());
        let bottom = Matrix::zeros(r.dim1(sb), d0 + d1 + r.dim0(g.tgt(b))).hstack(&Matrix::identity(r.dim1(sb)));
        top.vstack(&bottom)
    })
}

/// `G ⋉ E`; the representation must be valid.
pub fn semidirect(r: &Ruth) -> Result<VbGroupoid> {
    let rep = validate_ruth(r);
    if !rep.passed() {
        return Err(Error::Validation(format!("invalid representation: {}", rep.failed_checks().join(", "))));
    }
    semidirect_unchecked(r)
}

/// The semi-direct product formulas applied to arbitrary data, without
/// validating the representation first; for mutation testing.
pub fn semidirect_raw(r: &Ruth) -> Result<VbGroupoid> {
    semidirect_unchecked(r)
}

/// `Ψ(φ⁰, φ¹, μ)`: `e ↦ φ¹e` on objects and
/// `(e₀, e₁) ↦ (φ⁰e₀ + μ_g e₁, φ¹e₁)` on arrows.
pub fn psi_morphism(m: &RuthMorphism) -> Result<VbMap> {
    let rep = validate_morphism(m);
    if !rep.passed() {
        return Err(Error::Validation(format!("invalid morphism: {}", rep.failed_checks().join(", "))));
    }
    let src = Arc::new(semidirect(&m.source)?);
    let tgt = Arc::new(semidirect(&m.target)?);
    psi_between(m, src, tgt)
}

/// [`psi_morphism`] with given semi-direct products of the source and
/// target, which must be the ones [`semidirect`] returns.
pub fn psi_between(m: &RuthMorphism, src: Arc<VbGroupoid>, tgt: Arc<VbGroupoid>) -> Result<VbMap> {
    let g = m.source.groupoid();
    let f1 = (0..g.num_arrows())
        .map(|a| {
            let (s, t) = (g.src(a), g.tgt(a));
            let top = m.phi0[t].hstack(&m.mu[a]);
            let bottom = Matrix::zeros(m.target.dim1(s), m.source.dim0(t)).hstack(&m.phi1[s]);
            top.vstack(&bottom)
        })
        .collect();
    VbMap::over_identity(src, tgt, m.phi1.clone(), f1)
}

/// Reads a morphism of representations off a VB map between their
/// semi-direct products: `φ¹ = f₀`, `φ⁰` from the unit arrows and `μ` from
/// the off-diagonal blocks. Fails with `NotInduced` if `f` is not of the
/// form `Ψ(m)`.
pub fn psi_inverse(source: Arc<Ruth>, target: Arc<Ruth>, f: &VbMap) -> Result<RuthMorphism> {
    let g = source.groupoid();
    if *f.source != semidirect(&source)? || *f.target != semidirect(&target)? {
        return Err(Error::Structure("map is not between the given semi-direct products".into()));
    }
    if f.objmap.iter().enumerate().any(|(i, &j)| i != j) || f.arrmap.iter().enumerate().any(|(i, &j)| i != j) {
        return Err(Error::Structure("map does not cover the identity".into()));
    }
    let phi1 = f.f0.clone();
    let phi0: Vec<Matrix> = (0..g.num_objects())
        .map(|x| f.f1[g.unit(x)].block(0, target.dim0(x), 0, source.dim0(x)))
        .collect();
    let mut mu = Vec::with_capacity(g.num_arrows());
    for a in 0..g.num_arrows() {
        let (s, t) = (g.src(a), g.tgt(a));
        let (r0, c0) = (target.dim0(t), source.dim0(t));
        let m = &f.f1[a];
        let (rows, cols) = m.shape();
        if m.block(0, r0, 0, c0) != phi0[t]
            || !m.block(r0, rows, 0, c0).is_zero()
            || m.block(r0, rows, c0, cols) != phi1[s]
        {
            return Err(Error::NotInduced(format!("arrow map at {} is not of semi-direct form", g.arrow_name(a))));
        }
        mu.push(m.block(0, r0, c0, cols));
    }
    RuthMorphism::new(source, target, phi0, phi1, mu)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{pair_ruth, pair_strict_ruth, z2_ruth, z2_ruth_broken4};
    use crate::linalg::{concat, q};
    use crate::ruth::{compose_morphisms, gauge_transport};
    use crate::vb::{find_unital_connection, kernel_groupoid, validate_connection, validate_vb, validate_vb_map};

    fn v(xs: &[i64]) -> Vec<crate::linalg::Rational> {
        xs.iter().map(|&x| q(x)).collect()
    }

    #[test]
    fn semidirect_fixtures_are_valid() {
        for r in [z2_ruth(q(0)), z2_ruth(q(1)), pair_strict_ruth(), pair_ruth()] {
            let s = semidirect(&r).unwrap();
            let rep = validate_vb(&s);
            assert!(rep.passed(), "{rep}");
        }
    }

    #[test]
    fn z2_multiplication_example() {
        let r = z2_ruth(q(1));
        let s = semidirect(&r).unwrap();
        let g = r.groupoid().arrow_id("g").unwrap();
        let e = r.groupoid().arrow_id("e").unwrap();
        // composable needs e₁ = t̃(f₀, f₁) = -f₁
        let (f0, f1) = (2, 7);
        let (e0, e1) = (3, -f1);
        let (k, out) = s.mul_arrows(g, g, &v(&[e0, e1]), &v(&[f0, f1])).unwrap();
        assert_eq!(k, e);
        assert_eq!(out, v(&[e0 - f0 - f1, f1]));
    }

    #[test]
    fn units_have_equal_source_and_target() {
        let r = z2_ruth(q(1));
        let s = semidirect(&r).unwrap();
        let u = s.unit(0, &v(&[4]));
        assert_eq!(s.src(0, &u), v(&[4]));
        assert_eq!(s.tgt(0, &u), v(&[4]));
    }

    #[test]
    fn invalid_input_rejected() {
        assert!(matches!(semidirect(&z2_ruth_broken4()), Err(Error::Validation(_))));
    }

    #[test]
    fn flipped_omega_breaks_associativity() {
        // over Z/2 the sign of Ω is free, so use a fixture with Ωδ ≠ 0
        let r = pair_ruth();
        let flipped: Vec<Matrix> = r.omegas().iter().map(Matrix::neg).collect();
        let bad = r.with_parts(r.complex().clone(), r.lambda0s().to_vec(), r.lambda1s().to_vec(), flipped).unwrap();
        let rep = validate_vb(&semidirect_raw(&bad).unwrap());
        assert!(rep.has_check("associativity"), "{rep}");
    }

    #[test]
    fn strict_zero_differential_is_action_groupoid() {
        let r = pair_strict_ruth().with_parts(
            crate::twoterm::TwoTermComplex::new(vec!["x".into(), "y".into()], vec![Matrix::zeros(2, 1); 2]).unwrap(),
            pair_strict_ruth().lambda0s().to_vec(),
            pair_strict_ruth().lambda1s().to_vec(),
            pair_strict_ruth().omegas().to_vec(),
        );
        let r = r.unwrap();
        let s = semidirect(&r).unwrap();
        assert!(validate_vb(&s).passed());
        let a = r.groupoid().arrow_id("a").unwrap();
        let w = concat(&v(&[9]), &v(&[1, 1]));
        assert_eq!(s.tgt(a, &w), v(&[1, 2]));
    }

    fn gauge(target: &Arc<Ruth>, k: i64) -> RuthMorphism {
        let g = target.groupoid();
        let phi0 = (0..g.num_objects()).map(|x| Matrix::scalar(target.dim0(x), q(k + x as i64))).collect::<Vec<_>>();
        let phi1 = (0..g.num_objects())
            .map(|x| {
                let d = target.dim1(x);
                Matrix::from_fn(d, d, |i, j| if i == j { q(1) } else if j == i + 1 { q(k) } else { q(0) })
            })
            .collect::<Vec<_>>();
        let mu = (0..g.num_arrows())
            .map(|a| {
                let (t, s) = (g.tgt(a), g.src(a));
                if g.is_unit(a) {
                    Matrix::zeros(target.dim0(t), target.dim1(s))
                } else {
                    Matrix::from_fn(target.dim0(t), target.dim1(s), |i, j| q((i + j + a) as i64 - k))
                }
            })
            .collect::<Vec<_>>();
        gauge_transport(target, &phi0, &phi1, &mu).unwrap().1
    }

    #[test]
    fn psi_of_identity_is_identity() {
        let r = Arc::new(pair_ruth());
        let f = psi_morphism(&RuthMorphism::identity(r)).unwrap();
        assert!(f.is_identity());
    }

    #[test]
    fn psi_is_functorial() {
        let t = Arc::new(pair_ruth());
        let m2 = gauge(&t, 2);
        let m1 = gauge(&m2.source, 3);
        let f = psi_morphism(&m2).unwrap().compose(&psi_morphism(&m1).unwrap()).unwrap();
        let c = psi_morphism(&compose_morphisms(&m2, &m1).unwrap()).unwrap();
        assert_eq!(f, c);
        assert!(validate_vb_map(&f).passed());
    }

    #[test]
    fn psi_rejects_mu_at_unit() {
        let t = Arc::new(z2_ruth(q(1)));
        let mut m = RuthMorphism::identity(t);
        m.mu[0] = Matrix::scalar(1, q(1));
        assert!(matches!(psi_morphism(&m), Err(Error::Validation(_))));
    }

    #[test]
    fn psi_inverse_round_trip() {
        let t = Arc::new(pair_ruth());
        let m = gauge(&t, 1);
        let f = psi_morphism(&m).unwrap();
        let back = psi_inverse(m.source.clone(), m.target.clone(), &f).unwrap();
        assert_eq!(back, m);
        let mut bad = f.clone();
        bad.f1[2] = bad.f1[2].add(&Matrix::from_fn(3, 3, |i, j| if i == 2 && j == 0 { q(1) } else { q(0) }));
        assert!(matches!(psi_inverse(m.source.clone(), m.target.clone(), &bad), Err(Error::NotInduced(_))));
    }

    #[test]
    fn canonical_connection_of_semidirect() {
        let r = pair_ruth();
        let s = semidirect(&r).unwrap();
        let c = find_unital_connection(&s).unwrap();
        assert!(validate_connection(&s, &c).passed());
        let g = r.groupoid();
        for a in 0..g.num_arrows() {
            let (t, src) = (g.tgt(a), g.src(a));
            let want = Matrix::zeros(r.dim0(t), r.dim1(src)).vstack(&Matrix::identity(r.dim1(src)));
            assert_eq!(c.sigma[a], want);
        }
    }

    #[test]
    fn kernel_of_semidirect_is_phi_object() {
        let r = pair_ruth();
        let k = kernel_groupoid(&semidirect(&r).unwrap()).unwrap();
        let p = crate::twoterm::phi_object(r.complex());
        assert_eq!(k.as_vb(), p.as_vb());
        for x in 0..k.num_objects() {
            let ker = k.arrdim_at(x) - k.s_at(x).rank();
            assert_eq!(k.arrdim_at(x), k.objdim(x) + ker);
        }
    }
}
