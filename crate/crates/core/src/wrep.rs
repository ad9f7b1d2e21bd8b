//! Weak representations on linear groupoid bundles, equivariant maps, the
//! linear action groupoid and the passage between VB-groupoids, weak
//! representations and 2-term representations.
//!
//! A weak representation of `G` on a bundle `V₁ ⇒ V₀` over `G₀` is given per
//! arrow `g` by the action `A0_g : V₀(s g) → V₀(t g)`, `A1_g : V₁(s g) → V₁(t g)`
//! and per composable pair by the associator `α_{g,h} : V₀(s h) → V₁(t g)`,
//! an arrow from `g·(h·x)` to `(gh)·x`. The unitor is the identity.
//!
//! An equivariant map is a bundle map `F` with `δ_g : V₀(s g) → W₁(t g)`,
//! an arrow from `F(g·x)` to `g·F(x)`.
//!
//! In the linear action groupoid an arrow over `g` is `(g, x, h)` with
//! `h ∈ V₁(t g)` and `t̃h = g·x`; it is stored in coordinates `(x, c)` with
//! `h = ũ(g·x) + K c` where `K` is the canonical basis of `ker t̃`.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groupoid::{FiniteGroupoid, GroupoidSpec};
use crate::linalg::{concat, fmt_vector, unit_vector, Matrix, Rational, Vector};
use crate::report::Report;
use crate::ruth::{validate_morphism, validate_ruth, Ruth, RuthMorphism};
use crate::twoterm::{
    extract_chain_map, extract_homotopy, phi_object, phi_onemorphism, phi_twomorphism, split_bundle, ChainHomotopy,
    ChainMap, TwoTermComplex,
};
use crate::vb::{
    arrow_table, find_unital_connection, kernel_groupoid, object_table, pair_entries, pair_table, per_arrow,
    per_object, transport, validate_vb, validate_vb_map, BundleTransformation, Connection, LinearGroupoidBundle,
    PairMap, VbGroupoid, VbMap, VbShape, VbSpec,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeakRepresentation {
    pub groupoid: Arc<FiniteGroupoid>,
    pub bundle: Arc<LinearGroupoidBundle>,
    /// Per arrow `g`: `V₀(s g) → V₀(t g)`.
    pub a0: Vec<Matrix>,
    /// Per arrow `g`: `V₁(s g) → V₁(t g)`.
    pub a1: Vec<Matrix>,
    /// Per composable pair: `V₀(s h) → V₁(t g)`.
    pub alpha: Vec<Matrix>,
}

fn shape_check(what: &str, at: &str, m: &Matrix, want: (usize, usize)) -> Result<()> {
    if m.shape() != want {
        return Err(Error::Structure(format!(
            "{what} at {at}: expected {}x{}, got {}x{}",
            want.0,
            want.1,
            m.rows(),
            m.cols()
        )));
    }
    Ok(())
}

impl WeakRepresentation {
    /// Checks that the bundle lives over the objects of `G` and every map
    /// has the right shape.
    pub fn new(
        groupoid: Arc<FiniteGroupoid>,
        bundle: Arc<LinearGroupoidBundle>,
        a0: Vec<Matrix>,
        a1: Vec<Matrix>,
        alpha: Vec<Matrix>,
    ) -> Result<Self> {
        let g = &*groupoid;
        if bundle.base().objects() != g.objects() {
            return Err(Error::Structure("bundle must live over the objects of the groupoid".into()));
        }
        if a0.len() != g.num_arrows() || a1.len() != g.num_arrows() || alpha.len() != g.pairs().len() {
            return Err(Error::Structure("action data has the wrong count".into()));
        }
        for a in 0..g.num_arrows() {
            let (s, t) = (g.src(a), g.tgt(a));
            shape_check("A0", g.arrow_name(a), &a0[a], (bundle.objdim(t), bundle.objdim(s)))?;
            shape_check("A1", g.arrow_name(a), &a1[a], (bundle.arrdim_at(t), bundle.arrdim_at(s)))?;
        }
        for (p, &(a, b)) in g.pairs().iter().enumerate() {
            let want = (bundle.arrdim_at(g.tgt(a)), bundle.objdim(g.src(b)));
            shape_check("α", &g.fmt_tuple(&[a, b]), &alpha[p], want)?;
        }
        Ok(WeakRepresentation { groupoid, bundle, a0, a1, alpha })
    }

    pub fn alpha_at(&self, g: usize, h: usize) -> &Matrix {
        &self.alpha[self.groupoid.pair_index(g, h).expect("composable pair")]
    }

    fn m(&self, x: usize, v: &[Rational], w: &[Rational]) -> Option<Vector> {
        self.bundle.m(x, v, w)
    }

    /// Whether `α` consists of units.
    pub fn is_strict(&self) -> bool {
        let g = &*self.groupoid;
        g.pairs()
            .iter()
            .enumerate()
            .all(|(p, &(a, b))| self.alpha[p] == self.bundle.utilde(g.tgt(a)).mul(&self.a0[g.compose(a, b)]))
    }
}

/// Pairs of basis vectors of the fibered product `V₁ ×_{V₀} V₁` over `x`.
fn composable_basis(b: &LinearGroupoidBundle, x: usize) -> Vec<(Vector, Vector)> {
    let p = b.base().pair_index(x, x).expect("unit pair");
    let d = b.arrdim_at(x);
    b.mult_basis(p).columns().into_iter().map(|c| (c[..d].to_vec(), c[d..].to_vec())).collect()
}

fn show(o: &Option<Vector>) -> String {
    o.as_ref().map_or("not composable".into(), |v| fmt_vector(v))
}

/// Checks the bundle axioms, functoriality and unitality of the action,
/// the associator endpoints and naturality, the pentagon and the unit
/// coherences; empty report = valid.
pub fn validate_wrep(w: &WeakRepresentation) -> Report {
    let mut r = Report::new();
    let g = &*w.groupoid;
    let b = &*w.bundle;
    r.merge_prefixed("bundle", validate_vb(b.as_vb()));
    if !r.passed() {
        return r;
    }
    for a in 0..g.num_arrows() {
        let (s, t) = (g.src(a), g.tgt(a));
        let name = g.arrow_name(a);
        let lhs = b.s_at(t).mul(&w.a1[a]);
        let rhs = w.a0[a].mul(b.s_at(s));
        if lhs != rhs {
            r.push("functor-source", name, rhs, lhs);
        }
        let lhs = b.t_at(t).mul(&w.a1[a]);
        let rhs = w.a0[a].mul(b.t_at(s));
        if lhs != rhs {
            r.push("functor-target", name, rhs, lhs);
        }
        let lhs = w.a1[a].mul(b.utilde(s));
        let rhs = b.utilde(t).mul(&w.a0[a]);
        if lhs != rhs {
            r.push("functor-unit", name, rhs, lhs);
        }
        for (k, (v, u)) in composable_basis(b, s).iter().enumerate() {
            let lhs = w.m(s, v, u).map(|p| w.a1[a].apply(&p));
            let rhs = w.m(t, &w.a1[a].apply(v), &w.a1[a].apply(u));
            if lhs.is_none() || lhs != rhs {
                r.push("functor-mult", format!("{name} basis pair {k}"), show(&rhs), show(&lhs));
            }
        }
        if g.is_unit(a) {
            if !w.a0[a].is_identity() {
                r.push("unital", format!("A0 at {name}"), "identity", &w.a0[a]);
            }
            if !w.a1[a].is_identity() {
                r.push("unital", format!("A1 at {name}"), "identity", &w.a1[a]);
            }
        }
    }
    for (p, &(a, c)) in g.pairs().iter().enumerate() {
        let loc = g.fmt_tuple(&[a, c]);
        let t = g.tgt(a);
        let al = &w.alpha[p];
        let lhs = b.s_at(t).mul(al);
        let rhs = w.a0[a].mul(&w.a0[c]);
        if lhs != rhs {
            r.push("alpha-source", &loc, rhs, lhs);
        }
        let lhs = b.t_at(t).mul(al);
        let rhs = w.a0[g.compose(a, c)].clone();
        if lhs != rhs {
            r.push("alpha-target", &loc, rhs, lhs);
        }
    }
    if !r.passed() {
        return r;
    }
    for (p, &(a, c)) in g.pairs().iter().enumerate() {
        let (t, s) = (g.tgt(a), g.src(c));
        let ac = g.compose(a, c);
        let al = &w.alpha[p];
        for k in 0..b.arrdim_at(s) {
            let e = unit_vector(b.arrdim_at(s), k);
            let lhs = w.m(t, &al.apply(&b.t(s, &e)), &w.a1[a].apply(&w.a1[c].apply(&e)));
            let rhs = w.m(t, &w.a1[ac].apply(&e), &al.apply(&b.s(s, &e)));
            if lhs.is_none() || lhs != rhs {
                r.push("alpha-naturality", format!("{loc} basis {k}", loc = g.fmt_tuple(&[a, c])), show(&rhs), show(&lhs));
            }
        }
    }
    for &(a, c) in g.pairs() {
        for d in g.pairs().iter().filter(|q| q.0 == c).map(|q| q.1) {
            let (t, s) = (g.tgt(a), g.src(d));
            let (ac, cd) = (g.compose(a, c), g.compose(c, d));
            for k in 0..b.objdim(s) {
                let x = unit_vector(b.objdim(s), k);
                let lhs = w.m(t, &w.alpha_at(a, cd).apply(&x), &w.a1[a].apply(&w.alpha_at(c, d).apply(&x)));
                let rhs = w.m(t, &w.alpha_at(ac, d).apply(&x), &w.alpha_at(a, c).apply(&w.a0[d].apply(&x)));
                if lhs.is_none() || lhs != rhs {
                    r.push("pentagon", format!("{} basis {k}", g.fmt_tuple(&[a, c, d])), show(&rhs), show(&lhs));
                }
            }
        }
    }
    for a in 0..g.num_arrows() {
        let (s, t) = (g.src(a), g.tgt(a));
        let want = b.utilde(t).mul(&w.a0[a]);
        let right = w.alpha_at(a, g.unit(s));
        if *right != want {
            r.push("unit-right", g.fmt_tuple(&[a, g.unit(s)]), &want, right);
        }
        let left = w.alpha_at(g.unit(t), a);
        if *left != want {
            r.push("unit-left", g.fmt_tuple(&[g.unit(t), a]), &want, left);
        }
    }
    r
}

/// The pullback of `c` along `map : index set → base`, named by index.
fn pulled(c: &TwoTermComplex, map: &[usize]) -> Result<Arc<TwoTermComplex>> {
    let names = (0..map.len()).map(|i| format!("{i:06}")).collect();
    Ok(Arc::new(c.pullback(names, map)?))
}

struct Pullbacks {
    src1: Arc<TwoTermComplex>,
    tgt1: Arc<TwoTermComplex>,
    src2: Arc<TwoTermComplex>,
    tgt2: Arc<TwoTermComplex>,
}

/// `s*E`, `t*E` over `G₁` and `s₂*E`, `t₂*E` over `G₂`, where `s₂(g,h) = s h`
/// and `t₂(g,h) = t g`.
fn pullbacks(g: &FiniteGroupoid, c: &TwoTermComplex) -> Result<Pullbacks> {
    let arrows: Vec<usize> = (0..g.num_arrows()).collect();
    let s1: Vec<usize> = arrows.iter().map(|&a| g.src(a)).collect();
    let t1: Vec<usize> = arrows.iter().map(|&a| g.tgt(a)).collect();
    let s2: Vec<usize> = g.pairs().iter().map(|&(_, b)| g.src(b)).collect();
    let t2: Vec<usize> = g.pairs().iter().map(|&(a, _)| g.tgt(a)).collect();
    Ok(Pullbacks { src1: pulled(c, &s1)?, tgt1: pulled(c, &t1)?, src2: pulled(c, &s2)?, tgt2: pulled(c, &t2)? })
}

fn ident(n: usize) -> Vec<usize> {
    (0..n).collect()
}

/// `Φ(G)` on objects: the sum groupoid of the complex, with the action
/// `Φ(λ_g)` over each arrow and the associator `Φ(Ω_{g,h})` over each pair.
pub fn wrep_from_ruth(r: &Ruth) -> Result<WeakRepresentation> {
    let rep = validate_ruth(r);
    if !rep.passed() {
        return Err(Error::Validation(format!("invalid representation: {}", rep.failed_checks().join(", "))));
    }
    wrep_from_ruth_raw(r)
}

/// [`wrep_from_ruth`] without validating `r`; needs only that each `λ_g` is
/// a chain map and `Ω` a homotopy `λ_gλ_h ⇒ λ_{gh}`.
pub fn wrep_from_ruth_raw(r: &Ruth) -> Result<WeakRepresentation> {
    let g = r.groupoid();
    let pb = pullbacks(g, r.complex())?;
    let lam = ChainMap::new(
        pb.src1.clone(),
        pb.tgt1.clone(),
        ident(g.num_arrows()),
        r.lambda0s().to_vec(),
        r.lambda1s().to_vec(),
    )?;
    let action = phi_onemorphism(&lam);
    let np = g.pairs().len();
    let comp = |f: &[Matrix]| -> Vec<Matrix> { g.pairs().iter().map(|&(a, b)| f[a].mul(&f[b])).collect() };
    let along = |f: &[Matrix]| -> Vec<Matrix> { g.pairs().iter().map(|&(a, b)| f[g.compose(a, b)].clone()).collect() };
    let (l0, l1) = (r.lambda0s(), r.lambda1s());
    let from = ChainMap::new(pb.src2.clone(), pb.tgt2.clone(), ident(np), comp(l0), comp(l1))?;
    let to = ChainMap::new(pb.src2, pb.tgt2, ident(np), along(l0), along(l1))?;
    let assoc = phi_twomorphism(&ChainHomotopy::new(from, to, r.omegas().to_vec())?);
    WeakRepresentation::new(
        r.groupoid_arc().clone(),
        Arc::new(phi_object(r.complex())),
        action.f0,
        action.f1,
        assoc.components,
    )
}

/// The representation underlying `w` in the basis of [`split_bundle`],
/// together with the strict equivariant isomorphism `Φ(r) → w`.
pub fn ruth_from_wrep_witness(w: &WeakRepresentation) -> Result<(Ruth, EquivariantMap)> {
    let g = &*w.groupoid;
    let (c, iota) = split_bundle(&w.bundle)?;
    let inv1 = iota.f1.iter().map(Matrix::inverse).collect::<Result<Vec<_>>>()?;
    let pb = pullbacks(g, &c)?;
    let sum = |k: &Arc<TwoTermComplex>| Arc::new(phi_object(k).into_inner());
    let a1: Vec<Matrix> = (0..g.num_arrows())
        .map(|a| inv1[g.tgt(a)].mul(&w.a1[a]).mul(&iota.f1[g.src(a)]))
        .collect();
    let action = VbMap::new(
        sum(&pb.src1),
        sum(&pb.tgt1),
        ident(g.num_arrows()),
        ident(g.num_arrows()),
        w.a0.clone(),
        a1,
    )?;
    let lam = extract_chain_map(&action)?;
    let np = g.pairs().len();
    let comp = |f: &[Matrix]| -> Vec<Matrix> { g.pairs().iter().map(|&(a, b)| f[a].mul(&f[b])).collect() };
    let along = |f: &[Matrix]| -> Vec<Matrix> { g.pairs().iter().map(|&(a, b)| f[g.compose(a, b)].clone()).collect() };
    let from = ChainMap::new_unchecked(pb.src2.clone(), pb.tgt2.clone(), ident(np), comp(&lam.f0), comp(&lam.f1))?;
    let to = ChainMap::new_unchecked(pb.src2.clone(), pb.tgt2.clone(), ident(np), along(&lam.f0), along(&lam.f1))?;
    let components = g
        .pairs()
        .iter()
        .enumerate()
        .map(|(p, &(a, _))| inv1[g.tgt(a)].mul(&w.alpha[p]))
        .collect();
    let t = BundleTransformation { from: phi_onemorphism(&from), to: phi_onemorphism(&to), components };
    let omega = extract_homotopy(&t)?.omega;
    let r = Ruth::new(w.groupoid.clone(), Arc::new(c), lam.f0, lam.f1, omega)?;
    let rep = validate_ruth(&r);
    if !rep.passed() {
        return Err(Error::NotInduced(format!("extracted data violates {}", rep.failed_checks().join(", "))));
    }
    let image = Arc::new(wrep_from_ruth(&r)?);
    let e = strict_equivariant(image, Arc::new(w.clone()), iota.f0.clone(), iota.f1.clone())?;
    Ok((r, e))
}

/// The quasi-inverse of [`wrep_from_ruth`].
pub fn ruth_from_wrep(w: &WeakRepresentation) -> Result<Ruth> {
    let rep = validate_wrep(w);
    if !rep.passed() {
        return Err(Error::Validation(format!("invalid weak representation: {}", rep.failed_checks().join(", "))));
    }
    Ok(ruth_from_wrep_witness(w)?.0)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivariantMap {
    pub source: Arc<WeakRepresentation>,
    pub target: Arc<WeakRepresentation>,
    /// Per object: `V₀(x) → W₀(x)`.
    pub f0: Vec<Matrix>,
    /// Per object: `V₁(x) → W₁(x)`.
    pub f1: Vec<Matrix>,
    /// Per arrow `g`: `V₀(s g) → W₁(t g)`.
    pub delta: Vec<Matrix>,
}

impl EquivariantMap {
    pub fn new(
        source: Arc<WeakRepresentation>,
        target: Arc<WeakRepresentation>,
        f0: Vec<Matrix>,
        f1: Vec<Matrix>,
        delta: Vec<Matrix>,
    ) -> Result<Self> {
        if source.groupoid != target.groupoid {
            return Err(Error::Structure("equivariant map needs equal groupoids".into()));
        }
        let g = &*source.groupoid;
        let (v, w) = (&*source.bundle, &*target.bundle);
        if f0.len() != g.num_objects() || f1.len() != g.num_objects() || delta.len() != g.num_arrows() {
            return Err(Error::Structure("equivariant map data has the wrong count".into()));
        }
        for x in 0..g.num_objects() {
            shape_check("F0", g.object_name(x), &f0[x], (w.objdim(x), v.objdim(x)))?;
            shape_check("F1", g.object_name(x), &f1[x], (w.arrdim_at(x), v.arrdim_at(x)))?;
        }
        for a in 0..g.num_arrows() {
            shape_check("δ", g.arrow_name(a), &delta[a], (w.arrdim_at(g.tgt(a)), v.objdim(g.src(a))))?;
        }
        Ok(EquivariantMap { source, target, f0, f1, delta })
    }

    pub fn identity(w: Arc<WeakRepresentation>) -> Self {
        let g = &*w.groupoid;
        let b = &*w.bundle;
        let f0 = (0..g.num_objects()).map(|x| Matrix::identity(b.objdim(x))).collect();
        let f1 = (0..g.num_objects()).map(|x| Matrix::identity(b.arrdim_at(x))).collect();
        let delta = (0..g.num_arrows()).map(|a| b.utilde(g.tgt(a)).mul(&w.a0[a])).collect();
        EquivariantMap { source: w.clone(), target: w, f0, f1, delta }
    }

    fn bundle_map(&self) -> Result<VbMap> {
        VbMap::over_identity(
            Arc::new(self.source.bundle.as_vb().clone()),
            Arc::new(self.target.bundle.as_vb().clone()),
            self.f0.clone(),
            self.f1.clone(),
        )
    }

    pub fn is_isomorphism(&self) -> bool {
        self.f0.iter().chain(&self.f1).all(|m| m.inverse().is_ok())
    }
}

/// A strict equivariant map: `δ` consists of units, which requires
/// `F ∘ A = A' ∘ F` on objects.
pub fn strict_equivariant(
    source: Arc<WeakRepresentation>,
    target: Arc<WeakRepresentation>,
    f0: Vec<Matrix>,
    f1: Vec<Matrix>,
) -> Result<EquivariantMap> {
    let g = source.groupoid.clone();
    let delta = (0..g.num_arrows())
        .map(|a| target.bundle.utilde(g.tgt(a)).mul(&f0[g.tgt(a)]).mul(&source.a0[a]))
        .collect();
    EquivariantMap::new(source, target, f0, f1, delta)
}

/// Checks that `F` is a bundle map and that `δ` is a natural
/// transformation `F∘A ⇒ A'∘F` satisfying the hexagon and unit triangle.
pub fn validate_equivariant(e: &EquivariantMap) -> Report {
    let mut r = Report::new();
    let (v, w) = (&*e.source, &*e.target);
    let g = &*v.groupoid;
    let (bv, bw) = (&*v.bundle, &*w.bundle);
    match e.bundle_map() {
        Ok(f) => r.merge_prefixed("functor", validate_vb_map(&f)),
        Err(err) => r.push("functor/shape", "F", "bundle map", err),
    }
    if !r.passed() {
        return r;
    }
    for a in 0..g.num_arrows() {
        let (s, t) = (g.src(a), g.tgt(a));
        let name = g.arrow_name(a);
        let d = &e.delta[a];
        let lhs = bw.s_at(t).mul(d);
        let rhs = e.f0[t].mul(&v.a0[a]);
        if lhs != rhs {
            r.push("delta-source", name, rhs, lhs);
        }
        let lhs = bw.t_at(t).mul(d);
        let rhs = w.a0[a].mul(&e.f0[s]);
        if lhs != rhs {
            r.push("delta-target", name, rhs, lhs);
        }
    }
    if !r.passed() {
        return r;
    }
    for a in 0..g.num_arrows() {
        let (s, t) = (g.src(a), g.tgt(a));
        let d = &e.delta[a];
        for k in 0..bv.arrdim_at(s) {
            let x = unit_vector(bv.arrdim_at(s), k);
            let lhs = bw.m(t, &d.apply(&bv.t(s, &x)), &e.f1[t].apply(&v.a1[a].apply(&x)));
            let rhs = bw.m(t, &w.a1[a].apply(&e.f1[s].apply(&x)), &d.apply(&bv.s(s, &x)));
            if lhs.is_none() || lhs != rhs {
                r.push("naturality", format!("{} basis {k}", g.arrow_name(a)), show(&rhs), show(&lhs));
            }
        }
    }
    for (p, &(a, c)) in g.pairs().iter().enumerate() {
        let (s, t) = (g.src(c), g.tgt(a));
        let ac = g.compose(a, c);
        for k in 0..bv.objdim(s) {
            let x = unit_vector(bv.objdim(s), k);
            let inner = bw.m(t, &w.a1[a].apply(&e.delta[c].apply(&x)), &e.delta[a].apply(&v.a0[c].apply(&x)));
            let lhs = inner.and_then(|i| bw.m(t, &w.alpha[p].apply(&e.f0[s].apply(&x)), &i));
            let rhs = bw.m(t, &e.delta[ac].apply(&x), &e.f1[t].apply(&v.alpha[p].apply(&x)));
            if lhs.is_none() || lhs != rhs {
                r.push("hexagon", format!("{} basis {k}", g.fmt_tuple(&[a, c])), show(&rhs), show(&lhs));
            }
        }
    }
    for x in 0..g.num_objects() {
        let want = bw.utilde(x).mul(&e.f0[x]);
        let got = &e.delta[g.unit(x)];
        if *got != want {
            r.push("unit-triangle", g.object_name(x), &want, got);
        }
    }
    r
}

/// `e2 ∘ e1` with `δ_g = δ2_g F1₀ ∘ F2₁ δ1_g`.
pub fn compose_equivariant(e2: &EquivariantMap, e1: &EquivariantMap) -> Result<EquivariantMap> {
    if e1.target != e2.source {
        return Err(Error::Composition("equivariant maps do not compose".into()));
    }
    let g = &*e1.source.groupoid;
    let bx = &*e2.target.bundle;
    let n = g.num_objects();
    let f0 = (0..n).map(|x| e2.f0[x].mul(&e1.f0[x])).collect();
    let f1 = (0..n).map(|x| e2.f1[x].mul(&e1.f1[x])).collect();
    let mut delta = Vec::with_capacity(g.num_arrows());
    for a in 0..g.num_arrows() {
        let (s, t) = (g.src(a), g.tgt(a));
        let dim = e1.source.bundle.objdim(s);
        let cols: Vec<Vector> = (0..dim)
            .map(|k| {
                let x = unit_vector(dim, k);
                bx.m(t, &e2.delta[a].apply(&e1.f0[s].apply(&x)), &e2.f1[t].apply(&e1.delta[a].apply(&x)))
                    .ok_or_else(|| Error::Composition(format!("δ cells do not compose at {}", g.arrow_name(a))))
            })
            .collect::<Result<_>>()?;
        delta.push(Matrix::from_columns(bx.arrdim_at(t), &cols));
    }
    EquivariantMap::new(e1.source.clone(), e2.target.clone(), f0, f1, delta)
}

/// The inverse of an equivariant isomorphism: `F⁻¹` with
/// `δ'_g(y) = (F⁻¹ δ_g(F⁻¹ y))⁻¹`.
pub fn inverse_equivariant(e: &EquivariantMap) -> Result<EquivariantMap> {
    let g = &*e.source.groupoid;
    let i0 = e.f0.iter().map(Matrix::inverse).collect::<Result<Vec<_>>>()?;
    let i1 = e.f1.iter().map(Matrix::inverse).collect::<Result<Vec<_>>>()?;
    let bv = &e.source.bundle;
    let delta = (0..g.num_arrows())
        .map(|a| {
            let (s, t) = (g.src(a), g.tgt(a));
            bv.i_at(t).mul(&i1[t]).mul(&e.delta[a]).mul(&i0[s])
        })
        .collect();
    EquivariantMap::new(e.target.clone(), e.source.clone(), i0, i1, delta)
}

/// The equivariant map `Φ(r) → Φ(r')` of a morphism: `F = (φ¹, φ⁰ ⊕ φ¹)` and
/// `δ_g x = (-μ_g x, φ¹λ¹_g x)`.
pub fn equivariant_from_morphism(m: &RuthMorphism) -> Result<EquivariantMap> {
    let rep = validate_morphism(m);
    if !rep.passed() {
        return Err(Error::Validation(format!("invalid morphism: {}", rep.failed_checks().join(", "))));
    }
    let v = Arc::new(wrep_from_ruth(&m.source)?);
    let w = Arc::new(wrep_from_ruth(&m.target)?);
    equivariant_between(m, v, w)
}

/// [`equivariant_from_morphism`] with given images of source and target.
pub fn equivariant_between(m: &RuthMorphism, v: Arc<WeakRepresentation>, w: Arc<WeakRepresentation>) -> Result<EquivariantMap> {
    let g = m.source.groupoid();
    let f1 = (0..g.num_objects()).map(|x| Matrix::block_diag(&m.phi0[x], &m.phi1[x])).collect();
    let delta = (0..g.num_arrows())
        .map(|a| m.mu[a].neg().vstack(&m.phi1[g.tgt(a)].mul(m.source.lambda1(a))))
        .collect();
    EquivariantMap::new(v, w, m.phi1.clone(), f1, delta)
}

/// Reads a morphism off an equivariant map between `Φ(source)` and
/// `Φ(target)`; fails with `NotInduced` unless `F` is a sum of chain maps.
pub fn morphism_from_equivariant(e: &EquivariantMap, source: Arc<Ruth>, target: Arc<Ruth>) -> Result<RuthMorphism> {
    if *e.source != wrep_from_ruth(&source)? || *e.target != wrep_from_ruth(&target)? {
        return Err(Error::Structure("map is not between the images of the given representations".into()));
    }
    let f = extract_chain_map(&e.bundle_map()?)?;
    let g = source.groupoid();
    let mu = (0..g.num_arrows())
        .map(|a| e.delta[a].block(0, target.dim0(g.tgt(a)), 0, e.delta[a].cols()).neg())
        .collect();
    RuthMorphism::new(source, target, f.f0, f.f1, mu)
}

/// Transports `w` along invertible bundle maps `t0` on objects and `t1` on
/// arrows; returns the new representation and the strict isomorphism.
pub fn transport_wrep(w: &Arc<WeakRepresentation>, t0: &[Matrix], t1: &[Matrix]) -> Result<(Arc<WeakRepresentation>, EquivariantMap)> {
    let g = &*w.groupoid;
    let (nb, _) = transport(&Arc::new(w.bundle.as_vb().clone()), t0, t1)?;
    let bundle = Arc::new(LinearGroupoidBundle::new((*nb).clone())?);
    let i0 = t0.iter().map(Matrix::inverse).collect::<Result<Vec<_>>>()?;
    let i1 = t1.iter().map(Matrix::inverse).collect::<Result<Vec<_>>>()?;
    let a0 = (0..g.num_arrows()).map(|a| t0[g.tgt(a)].mul(&w.a0[a]).mul(&i0[g.src(a)])).collect();
    let a1 = (0..g.num_arrows()).map(|a| t1[g.tgt(a)].mul(&w.a1[a]).mul(&i1[g.src(a)])).collect();
    let alpha = g
        .pairs()
        .iter()
        .enumerate()
        .map(|(p, &(a, b))| t1[g.tgt(a)].mul(&w.alpha[p]).mul(&i0[g.src(b)]))
        .collect();
    let out = Arc::new(WeakRepresentation::new(w.groupoid.clone(), bundle, a0, a1, alpha)?);
    let e = strict_equivariant(w.clone(), out.clone(), t0.to_vec(), t1.to_vec())?;
    Ok((out, e))
}

/// Coordinates on the arrows of the linear action groupoid.
struct ActionCoords {
    kernel: Vec<Matrix>,
    left: Vec<Matrix>,
}

impl ActionCoords {
    fn new(w: &WeakRepresentation) -> Result<Self> {
        let b = &*w.bundle;
        let kernel: Vec<Matrix> = (0..b.num_objects()).map(|x| b.target_kernel(x)).collect();
        let left = kernel.iter().map(Matrix::left_inverse).collect::<Result<Vec<_>>>()?;
        Ok(ActionCoords { kernel, left })
    }

    /// `(x, c) ↦ (x, h)` over the arrow `a`.
    fn split(&self, w: &WeakRepresentation, a: usize, v: &[Rational]) -> (Vector, Vector) {
        let g = &*w.groupoid;
        let (s, t) = (g.src(a), g.tgt(a));
        let n = w.bundle.objdim(s);
        let x = v[..n].to_vec();
        let base = w.bundle.u(t, &w.a0[a].apply(&x));
        let h = crate::linalg::vadd(&base, &self.kernel[t].apply(&v[n..]));
        (x, h)
    }

    /// `(x, h) ↦ (x, c)` over the arrow `a`.
    fn join(&self, w: &WeakRepresentation, a: usize, x: &[Rational], h: &[Rational]) -> Vector {
        let g = &*w.groupoid;
        let t = g.tgt(a);
        let base = w.bundle.u(t, &w.a0[a].apply(x));
        concat(x, &self.left[t].apply(&crate::linalg::vsub(h, &base)))
    }
}

fn columns_of(rows: usize, dim: usize, f: impl Fn(&[Rational]) -> Vector) -> Matrix {
    let cols: Vec<Vector> = (0..dim).map(|k| f(&unit_vector(dim, k))).collect();
    Matrix::from_columns(rows, &cols)
}

/// The action groupoid of a weak representation, a VB-groupoid over `G`:
/// `(g, x, h)` runs from `x` to `s̃h` and
/// `(g, x, h)(g', x', h') = (gg', x', α_{g,g'}(x') ∘ g·h' ∘ h)`.
pub fn action_vb(w: &WeakRepresentation) -> Result<VbGroupoid> {
    let rep = validate_wrep(w);
    if !rep.passed() {
        return Err(Error::Validation(format!("invalid weak representation: {}", rep.failed_checks().join(", "))));
    }
    let co = ActionCoords::new(w)?;
    let g = &*w.groupoid;
    let b = &*w.bundle;
    let na = g.num_arrows();
    let kd = |x: usize| co.kernel[x].cols();
    let arrdim: Vec<usize> = (0..na).map(|a| b.objdim(g.src(a)) + kd(g.tgt(a))).collect();
    let inverse = (0..na)
        .map(|a| {
            let ai = g.inv(a);
            let s = g.src(a);
            columns_of(arrdim[ai], arrdim[a], |v| {
                let (x, h) = co.split(w, a, v);
                let y = b.s(g.tgt(a), &h);
                let back = w.a1[ai].apply(&b.i(g.tgt(a), &h));
                let cell = b.i(s, &w.alpha_at(ai, a).apply(&x));
                let h2 = b.m(s, &back, &cell).expect("inverse cells compose");
                co.join(w, ai, &y, &h2)
            })
        })
        .collect();
    let shape = VbShape {
        objdim: (0..g.num_objects()).map(|x| b.objdim(x)).collect(),
        arrdim: arrdim.clone(),
        stilde: (0..na)
            .map(|a| Matrix::identity(b.objdim(g.src(a))).hstack(&Matrix::zeros(b.objdim(g.src(a)), kd(g.tgt(a)))))
            .collect(),
        ttilde: (0..na).map(|a| w.a0[a].hstack(&b.s_at(g.tgt(a)).mul(&co.kernel[g.tgt(a)]))).collect(),
        utilde: (0..g.num_objects())
            .map(|x| Matrix::identity(b.objdim(x)).vstack(&Matrix::zeros(kd(x), b.objdim(x))))
            .collect(),
        inverse,
    };
    let pairs = g.pairs().to_vec();
    VbGroupoid::from_fn(w.groupoid.clone(), shape, |p, v, u| {
        let (a, c) = pairs[p];
        let t = g.tgt(a);
        let (_, h) = co.split(w, a, v);
        let (x2, h2) = co.split(w, c, u);
        let inner = b.m(t, &w.a1[a].apply(&h2), &h).expect("arrows compose");
        let big = b.m(t, &w.alpha[p].apply(&x2), &inner).expect("associator composes");
        co.join(w, g.compose(a, c), &x2, &big)
    })
}

/// `Act(F, δ)`: `x ↦ F₀x` and `(g, x, h) ↦ (g, F₀x, δ_g(x) ∘ F₁h)`.
pub fn act_on_morphism(e: &EquivariantMap) -> Result<VbMap> {
    let rep = validate_equivariant(e);
    if !rep.passed() {
        return Err(Error::Validation(format!("invalid equivariant map: {}", rep.failed_checks().join(", "))));
    }
    let (v, w) = (&*e.source, &*e.target);
    let src = Arc::new(action_vb(v)?);
    let tgt = Arc::new(action_vb(w)?);
    act_between(e, src, tgt)
}

/// [`act_on_morphism`] with given action groupoids of source and target.
pub fn act_between(e: &EquivariantMap, src: Arc<VbGroupoid>, tgt: Arc<VbGroupoid>) -> Result<VbMap> {
    let (v, w) = (&*e.source, &*e.target);
    let g = &*v.groupoid;
    let (cv, cw) = (ActionCoords::new(v)?, ActionCoords::new(w)?);
    let f1 = (0..g.num_arrows())
        .map(|a| {
            let t = g.tgt(a);
            columns_of(tgt.arrdim(a), src.arrdim(a), |u| {
                let (x, h) = cv.split(v, a, u);
                let x2 = e.f0[g.src(a)].apply(&x);
                let h2 = w.bundle.m(t, &e.delta[a].apply(&x), &e.f1[t].apply(&h)).expect("δ composes");
                cw.join(w, a, &x2, &h2)
            })
        })
        .collect();
    VbMap::over_identity(src, tgt, e.f0.clone(), f1)
}

/// Recovers `(F, δ)` from a VB map between action groupoids:
/// `F₁ = ι_W⁻¹ ∘ φ ∘ ι_V` on the kernel arrows with `ι(k) = (u, s̃k, k⁻¹)`,
/// and `δ_g(x)` the arrow part of `φ(g, x, ũ(g·x))`.
pub fn reconstruct_equivariant(phi: &VbMap, v: Arc<WeakRepresentation>, w: Arc<WeakRepresentation>) -> Result<EquivariantMap> {
    let g = &*v.groupoid;
    if phi.objmap.iter().enumerate().any(|(i, &j)| i != j) || phi.arrmap.iter().enumerate().any(|(i, &j)| i != j) {
        return Err(Error::Structure("map does not cover the identity".into()));
    }
    if *phi.source != action_vb(&v)? || *phi.target != action_vb(&w)? {
        return Err(Error::Structure("map is not between the given action groupoids".into()));
    }
    let (cv, cw) = (ActionCoords::new(&v)?, ActionCoords::new(&w)?);
    let (bv, bw) = (&*v.bundle, &*w.bundle);
    let f1 = (0..g.num_objects())
        .map(|x| {
            let u = g.unit(x);
            columns_of(bw.arrdim_at(x), bv.arrdim_at(x), |k| {
                let emb = cv.join(&v, u, &bv.s(x, k), &bv.i(x, k));
                let (_, h) = cw.split(&w, u, &phi.f1[u].apply(&emb));
                bw.i(x, &h)
            })
        })
        .collect();
    let delta = (0..g.num_arrows())
        .map(|a| {
            let (s, t) = (g.src(a), g.tgt(a));
            columns_of(bw.arrdim_at(t), bv.objdim(s), |x| {
                let arrow = concat(x, &vec![Rational::zero(); cv.kernel[t].cols()]);
                cw.split(&w, a, &phi.f1[a].apply(&arrow)).1
            })
        })
        .collect();
    EquivariantMap::new(v, w, phi.f0.clone(), f1, delta)
}

/// The weak representation on the kernel groupoid of `v` induced by a
/// unital connection, and the isomorphism from its action groupoid to `v`.
#[derive(Clone, Debug)]
pub struct VbToWrep {
    pub wrep: Arc<WeakRepresentation>,
    pub connection: Connection,
    /// `(g, x, h) ↦ h⁻¹ ∘ σ_g(x)`.
    pub iso: VbMap,
}

pub fn vb_to_wrep(v: &Arc<VbGroupoid>) -> Result<VbToWrep> {
    let c = find_unital_connection(v)?;
    vb_to_wrep_with(v, c)
}

/// `A0_g = t̃σ_g`, `A1_g(k) = σ_g(t̃k) ∘ k ∘ σ_g(s̃k)⁻¹` and
/// `α_{g,h}(x) = σ_{gh}(x) ∘ σ_h(x)⁻¹ ∘ σ_g(h·x)⁻¹`.
pub fn vb_to_wrep_with(v: &Arc<VbGroupoid>, c: Connection) -> Result<VbToWrep> {
    let rep = validate_vb(v);
    if !rep.passed() {
        return Err(Error::Validation(format!("invalid VB-groupoid: {}", rep.failed_checks().join(", "))));
    }
    let rep = crate::vb::validate_connection(v, &c);
    if !rep.passed() {
        return Err(Error::Validation(format!("invalid connection: {}", rep.failed_checks().join(", "))));
    }
    let g = v.base();
    let k = Arc::new(kernel_groupoid(v)?);
    let sig = &c.sigma;
    let inv = |a: usize, x: &[Rational]| v.inv(a, x);
    let mul = |a: usize, b: usize, x: &[Rational], y: &[Rational]| v.mul(a, b, x, y).expect("connection arrows compose");
    let a0: Vec<Matrix> = (0..g.num_arrows()).map(|a| v.ttilde(a).mul(&sig[a])).collect();
    let a1 = (0..g.num_arrows())
        .map(|a| {
            let (s, t) = (g.src(a), g.tgt(a));
            let (us, ai) = (g.unit(s), g.inv(a));
            columns_of(k.arrdim_at(t), k.arrdim_at(s), |kv| {
                let back = inv(a, &sig[a].apply(&v.src(us, kv)));
                let inner = mul(us, ai, kv, &back);
                mul(a, ai, &sig[a].apply(&v.tgt(us, kv)), &inner)
            })
        })
        .collect();
    let alpha = g
        .pairs()
        .iter()
        .map(|&(a, b)| {
            let ab = g.compose(a, b);
            let (ai, bi, abi) = (g.inv(a), g.inv(b), g.inv(ab));
            columns_of(k.arrdim_at(g.tgt(a)), v.objdim(g.src(b)), |x| {
                let hx = a0[b].apply(x);
                let inner = mul(bi, ai, &inv(b, &sig[b].apply(x)), &inv(a, &sig[a].apply(&hx)));
                mul(ab, abi, &sig[ab].apply(x), &inner)
            })
        })
        .collect();
    let wrep = Arc::new(WeakRepresentation::new(v.base_arc().clone(), k, a0, a1, alpha)?);
    let act = Arc::new(action_vb(&wrep)?);
    let co = ActionCoords::new(&wrep)?;
    let f1 = (0..g.num_arrows())
        .map(|a| {
            let ut = g.unit(g.tgt(a));
            columns_of(v.arrdim(a), act.arrdim(a), |u| {
                let (x, h) = co.split(&wrep, a, u);
                mul(ut, a, &v.inv(ut, &h), &sig[a].apply(&x))
            })
        })
        .collect();
    let f0 = (0..g.num_objects()).map(|x| Matrix::identity(v.objdim(x))).collect();
    let iso = VbMap::over_identity(act, v.clone(), f0, f1)?;
    Ok(VbToWrep { wrep, connection: c, iso })
}

/// The equivariant isomorphism between the weak representations of two
/// connections on `v`: `F = id` and `δ_g(x) = σ'_g(x) ∘ σ_g(x)⁻¹`.
pub fn connection_change(v: &Arc<VbGroupoid>, from: &VbToWrep, to: &VbToWrep) -> Result<EquivariantMap> {
    let g = v.base();
    let (s1, s2) = (&from.connection.sigma, &to.connection.sigma);
    let b = &*from.wrep.bundle;
    let delta = (0..g.num_arrows())
        .map(|a| {
            let ai = g.inv(a);
            columns_of(b.arrdim_at(g.tgt(a)), v.objdim(g.src(a)), |x| {
                v.mul(a, ai, &s2[a].apply(x), &v.inv(a, &s1[a].apply(x))).expect("connection arrows compose")
            })
        })
        .collect();
    let f0 = (0..g.num_objects()).map(|x| Matrix::identity(b.objdim(x))).collect();
    let f1 = (0..g.num_objects()).map(|x| Matrix::identity(b.arrdim_at(x))).collect();
    EquivariantMap::new(from.wrep.clone(), to.wrep.clone(), f0, f1, delta)
}

/// The isomorphism `G ⋉ E → action groupoid of Φ(r)`:
/// `(e₀, e₁) ↦ (g, e₁, (-e₀, δe₀ + λ¹_g e₁))`.
pub fn triangle_iso(r: &Ruth) -> Result<VbMap> {
    let semi = Arc::new(crate::semidirect::semidirect(r)?);
    let w = wrep_from_ruth(r)?;
    let act = Arc::new(action_vb(&w)?);
    let co = ActionCoords::new(&w)?;
    let g = r.groupoid();
    let f1 = (0..g.num_arrows())
        .map(|a| {
            let t = g.tgt(a);
            let d0 = r.dim0(t);
            columns_of(act.arrdim(a), semi.arrdim(a), |u| {
                let (e0, e1) = (&u[..d0], &u[d0..]);
                let top: Vector = e0.iter().map(|z| -z.clone()).collect();
                let bottom = crate::linalg::vadd(&r.delta(t).apply(e0), &r.lambda1(a).apply(e1));
                co.join(&w, a, e1, &concat(&top, &bottom))
            })
        })
        .collect();
    let f0 = (0..g.num_objects()).map(|x| Matrix::identity(r.dim1(x))).collect();
    VbMap::over_identity(semi, act, f0, f1)
}

/// Recovers a representation from a VB-groupoid through its weak
/// representation, with a VB isomorphism `G ⋉ E → v` as witness.
pub fn ruth_from_vb(v: &Arc<VbGroupoid>) -> Result<(Ruth, VbToWrep, VbMap)> {
    let vw = vb_to_wrep(v)?;
    let (r, e) = ruth_from_wrep_witness(&vw.wrep)?;
    let tri = triangle_iso(&r)?;
    let act = act_between(&e, tri.target.clone(), vw.iso.source.clone())?;
    let witness = vw.iso.compose(&act.compose(&tri)?)?;
    Ok((r, vw, witness))
}

/// JSON form of a weak representation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WrepSpec {
    pub groupoid: GroupoidSpec,
    pub bundle: VbSpec,
    #[serde(rename = "A0")]
    pub a0: BTreeMap<String, Matrix>,
    #[serde(rename = "A1")]
    pub a1: BTreeMap<String, Matrix>,
    pub alpha: Vec<PairMap>,
}

/// JSON form of an equivariant map.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivariantSpec {
    pub source: WrepSpec,
    pub target: WrepSpec,
    #[serde(rename = "F0")]
    pub f0: BTreeMap<String, Matrix>,
    #[serde(rename = "F1")]
    pub f1: BTreeMap<String, Matrix>,
    pub delta: BTreeMap<String, Matrix>,
}

impl WeakRepresentation {
    pub fn to_spec(&self) -> WrepSpec {
        let g = &*self.groupoid;
        WrepSpec {
            groupoid: g.to_spec(),
            bundle: self.bundle.as_vb().to_spec(),
            a0: arrow_table(g, &self.a0),
            a1: arrow_table(g, &self.a1),
            alpha: pair_entries(g, &self.alpha),
        }
    }

    pub fn from_spec(s: &WrepSpec) -> Result<Self> {
        let g = Arc::new(FiniteGroupoid::from_spec(&s.groupoid)?);
        let bundle = Arc::new(LinearGroupoidBundle::new(VbGroupoid::from_spec(&s.bundle)?)?);
        let a0 = per_arrow(&g, &s.a0, "A0")?;
        let a1 = per_arrow(&g, &s.a1, "A1")?;
        let alpha = pair_table(&g, &s.alpha, "alpha")?;
        Self::new(g, bundle, a0, a1, alpha)
    }
}

impl EquivariantMap {
    pub fn to_spec(&self) -> EquivariantSpec {
        let g = &*self.source.groupoid;
        EquivariantSpec {
            source: self.source.to_spec(),
            target: self.target.to_spec(),
            f0: object_table(g, &self.f0),
            f1: object_table(g, &self.f1),
            delta: arrow_table(g, &self.delta),
        }
    }

    pub fn from_spec(s: &EquivariantSpec) -> Result<Self> {
        let v = Arc::new(WeakRepresentation::from_spec(&s.source)?);
        let w = Arc::new(WeakRepresentation::from_spec(&s.target)?);
        let g = v.groupoid.clone();
        let f0 = per_object(&g, &s.f0, "F0")?;
        let f1 = per_object(&g, &s.f1, "F1")?;
        let delta = per_arrow(&g, &s.delta, "delta")?;
        Self::new(v, w, f0, f1, delta)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{pair_ruth, pair_strict_ruth, z2_ruth};
    use crate::linalg::q;
    use crate::ruth::gauge_transport;
    use crate::semidirect::semidirect;

    fn fixtures() -> Vec<Ruth> {
        vec![z2_ruth(q(0)), z2_ruth(q(1)), pair_strict_ruth(), pair_ruth()]
    }

    fn assert_ok(rep: Report) {
        assert!(rep.passed(), "{rep}");
    }

    /// A gauge morphism into `target` with nonzero `μ` at every non-unit arrow.
    fn gauge(target: &Arc<Ruth>) -> RuthMorphism {
        let g = target.groupoid();
        let phi0 = (0..g.num_objects()).map(|x| Matrix::scalar(target.dim0(x), q(2))).collect::<Vec<_>>();
        let phi1 = (0..g.num_objects()).map(|x| Matrix::scalar(target.dim1(x), q(3))).collect::<Vec<_>>();
        let mu = (0..g.num_arrows())
            .map(|a| {
                let (r, c) = (target.dim0(g.tgt(a)), target.dim1(g.src(a)));
                if g.is_unit(a) { Matrix::zeros(r, c) } else { Matrix::from_fn(r, c, |i, j| q((i + 2 * j + 1) as i64)) }
            })
            .collect::<Vec<_>>();
        gauge_transport(target, &phi0, &phi1, &mu).unwrap().1
    }

    #[test]
    fn images_of_representations_are_valid() {
        for r in fixtures() {
            let w = wrep_from_ruth(&r).unwrap();
            assert_ok(validate_wrep(&w));
            assert_eq!(w.is_strict(), r.is_strict());
        }
    }

    #[test]
    fn z2_image_has_expected_associator() {
        let w = wrep_from_ruth(&z2_ruth(q(1))).unwrap();
        let g = w.groupoid.arrow_id("g").unwrap();
        assert_eq!(*w.alpha_at(g, g), Matrix::from_ints(&[&[1], &[1]]));
        assert_eq!(w.a0[g], Matrix::scalar(1, q(-1)));
    }

    #[test]
    fn round_trip_through_weak_representations_is_exact() {
        for r in fixtures() {
            let w = wrep_from_ruth(&r).unwrap();
            let (back, e) = ruth_from_wrep_witness(&w).unwrap();
            assert_eq!(back, r);
            assert_ok(validate_equivariant(&e));
        }
    }

    #[test]
    fn broken_fourth_identity_fails_only_pentagon() {
        let w = wrep_from_ruth_raw(&crate::fixtures::z2_ruth_broken4()).unwrap();
        let rep = validate_wrep(&w);
        assert_eq!(rep.failed_checks(), vec!["pentagon"], "{rep}");
        assert!(wrep_from_ruth(&crate::fixtures::z2_ruth_broken4()).is_err());
    }

    #[test]
    fn moved_associator_fails_alpha_target() {
        let mut w = wrep_from_ruth(&pair_ruth()).unwrap();
        let g = &w.groupoid;
        let (a, b) = (g.arrow_id("a").unwrap(), g.arrow_id("b").unwrap());
        let p = g.pair_index(a, b).unwrap();
        w.alpha[p] = w.alpha[p].add(&Matrix::from_fn(w.alpha[p].rows(), w.alpha[p].cols(), |i, _| q((i == 0) as i64)));
        assert!(validate_wrep(&w).has_check("alpha-target"));
    }

    #[test]
    fn non_unital_action_is_caught() {
        let mut w = wrep_from_ruth(&pair_ruth()).unwrap();
        let u = w.groupoid.unit(0);
        w.a0[u] = Matrix::scalar(2, q(2));
        let rep = validate_wrep(&w);
        assert!(!rep.passed());
        assert!(ruth_from_wrep(&w).is_err());
    }

    #[test]
    fn morphisms_become_equivariant_maps_and_back() {
        for r in fixtures() {
            let m = gauge(&Arc::new(r));
            let e = equivariant_from_morphism(&m).unwrap();
            assert_ok(validate_equivariant(&e));
            let back = morphism_from_equivariant(&e, m.source.clone(), m.target.clone()).unwrap();
            assert_eq!(back, m);
        }
    }

    #[test]
    fn wrong_delta_breaks_equivariance() {
        let m = gauge(&Arc::new(pair_ruth()));
        let mut e = equivariant_from_morphism(&m).unwrap();
        let a = e.source.groupoid.arrow_id("a").unwrap();
        e.delta[a] = e.delta[a].add(&Matrix::from_fn(e.delta[a].rows(), e.delta[a].cols(), |i, _| q((i == 0) as i64)));
        assert!(!validate_equivariant(&e).passed());
    }

    #[test]
    fn equivariant_maps_compose() {
        let r = Arc::new(pair_ruth());
        let m1 = gauge(&r);
        let m2 = gauge(&m1.source);
        let e1 = equivariant_from_morphism(&m1).unwrap();
        let e2 = equivariant_from_morphism(&m2).unwrap();
        let e = compose_equivariant(&e1, &e2).unwrap();
        assert_ok(validate_equivariant(&e));
        let id = EquivariantMap::identity(e1.source.clone());
        assert_ok(validate_equivariant(&id));
        assert_eq!(compose_equivariant(&e1, &id).unwrap(), e1);
    }

    #[test]
    fn action_groupoids_and_triangle_are_valid() {
        for r in fixtures() {
            let w = wrep_from_ruth(&r).unwrap();
            assert_ok(validate_vb(&action_vb(&w).unwrap()));
            let t = triangle_iso(&r).unwrap();
            assert_ok(validate_vb_map(&t));
            assert!(t.is_isomorphism());
        }
    }

    #[test]
    fn act_is_functorial_and_reconstructible() {
        for r in fixtures() {
            let m = gauge(&Arc::new(r));
            let e = equivariant_from_morphism(&m).unwrap();
            let f = act_on_morphism(&e).unwrap();
            assert_ok(validate_vb_map(&f));
            let back = reconstruct_equivariant(&f, e.source.clone(), e.target.clone()).unwrap();
            assert_eq!(back, e);
        }
        let w = Arc::new(wrep_from_ruth(&pair_ruth()).unwrap());
        let id = act_on_morphism(&EquivariantMap::identity(w)).unwrap();
        assert!(id.is_identity());
    }

    #[test]
    fn vb_to_wrep_recovers_the_semidirect_product() {
        for r in fixtures() {
            let v = Arc::new(semidirect(&r).unwrap());
            let vw = vb_to_wrep(&v).unwrap();
            assert_ok(validate_wrep(&vw.wrep));
            assert_ok(validate_vb_map(&vw.iso));
            assert!(vw.iso.is_isomorphism());
            let (r2, _, witness) = ruth_from_vb(&v).unwrap();
            assert_ok(validate_ruth(&r2));
            assert_ok(validate_vb_map(&witness));
            assert!(witness.is_isomorphism());
            assert_eq!(*witness.target, *v);
        }
    }

    #[test]
    fn connection_change_is_equivariant() {
        let r = pair_ruth();
        let v = Arc::new(semidirect(&r).unwrap());
        let c1 = find_unital_connection(&v).unwrap();
        let g = v.base();
        // a second unital connection: add a kernel-valued shift at non-units
        let sigma = (0..g.num_arrows())
            .map(|a| {
                if g.is_unit(a) {
                    return c1.sigma[a].clone();
                }
                let k = v.stilde(a).kernel_basis();
                let shift = Matrix::from_fn(k.cols(), v.objdim(g.src(a)), |i, j| q((i + j + 1) as i64));
                c1.sigma[a].add(&k.mul(&shift))
            })
            .collect();
        let c2 = Connection { sigma };
        let a = vb_to_wrep_with(&v, c1).unwrap();
        let b = vb_to_wrep_with(&v, c2).unwrap();
        assert_ne!(a.wrep, b.wrep);
        assert_ok(validate_wrep(&b.wrep));
        let e = connection_change(&v, &a, &b).unwrap();
        assert_ok(validate_equivariant(&e));
        assert!(e.is_isomorphism());
    }

    #[test]
    fn transport_gives_isomorphic_representation() {
        let w = Arc::new(wrep_from_ruth(&pair_ruth()).unwrap());
        let b = &w.bundle;
        let t0 = (0..b.num_objects()).map(|x| Matrix::scalar(b.objdim(x), q(2))).collect::<Vec<_>>();
        let t1 = (0..b.num_objects())
            .map(|x| Matrix::from_fn(b.arrdim_at(x), b.arrdim_at(x), |i, j| q((i == j) as i64 + (j == i + 1) as i64)))
            .collect::<Vec<_>>();
        let (w2, e) = transport_wrep(&w, &t0, &t1).unwrap();
        assert_ok(validate_wrep(&w2));
        assert_ok(validate_equivariant(&e));
        let r = ruth_from_wrep(&w2).unwrap();
        assert_ok(validate_ruth(&r));
    }

    #[test]
    fn act_preserves_composition() {
        let r = Arc::new(pair_ruth());
        let m1 = gauge(&r);
        let m2 = gauge(&m1.source);
        let e1 = equivariant_from_morphism(&m1).unwrap();
        let e2 = equivariant_from_morphism(&m2).unwrap();
        let whole = act_on_morphism(&compose_equivariant(&e1, &e2).unwrap()).unwrap();
        let parts = act_on_morphism(&e1).unwrap().compose(&act_on_morphism(&e2).unwrap()).unwrap();
        assert_eq!(whole, parts);
        let m3 = gauge(&m2.source);
        let e3 = equivariant_from_morphism(&m3).unwrap();
        let left = compose_equivariant(&compose_equivariant(&e1, &e2).unwrap(), &e3).unwrap();
        let right = compose_equivariant(&e1, &compose_equivariant(&e2, &e3).unwrap()).unwrap();
        assert_eq!(left, right);
    }

    #[test]
    fn arrows_decompose_as_kernel_arrow_after_unit_lift() {
        let w = wrep_from_ruth(&pair_ruth()).unwrap();
        let act = action_vb(&w).unwrap();
        let g = &*w.groupoid;
        for a in 0..g.num_arrows() {
            let ut = g.unit(g.tgt(a));
            let (n, k) = (w.bundle.objdim(g.src(a)), act.arrdim(a) - w.bundle.objdim(g.src(a)));
            for j in 0..n + k {
                let arrow = unit_vector(n + k, j);
                let (x, c) = (&arrow[..n], &arrow[n..]);
                let lift = concat(x, &vec![Rational::zero(); k]);
                let kernel_part = concat(&w.a0[a].apply(x), c);
                assert_eq!(act.mul(ut, a, &kernel_part, &lift), Some(arrow.clone()));
            }
        }
    }

    #[test]
    fn maps_from_psi_are_reconstructed() {
        let target = Arc::new(pair_ruth());
        let m = gauge(&target);
        let psi = crate::semidirect::psi_morphism(&m).unwrap();
        let s = vb_to_wrep(&psi.source).unwrap();
        let t = vb_to_wrep(&psi.target).unwrap();
        let phi = t.iso.inverse().unwrap().compose(&psi.compose(&s.iso).unwrap()).unwrap();
        let e = reconstruct_equivariant(&phi, s.wrep.clone(), t.wrep.clone()).unwrap();
        assert_ok(validate_equivariant(&e));
        assert_eq!(act_on_morphism(&e).unwrap(), phi);
    }

    #[test]
    fn reconstruct_rejects_maps_off_the_identity() {
        let w = Arc::new(wrep_from_ruth(&pair_ruth()).unwrap());
        let mut f = act_on_morphism(&EquivariantMap::identity(w.clone())).unwrap();
        f.objmap.swap(0, 1);
        assert!(matches!(reconstruct_equivariant(&f, w.clone(), w), Err(Error::Structure(_))));
    }

    #[test]
    fn inverse_composes_to_identity() {
        let m = gauge(&Arc::new(pair_ruth()));
        let e = equivariant_from_morphism(&m).unwrap();
        let inv = inverse_equivariant(&e).unwrap();
        assert_ok(validate_equivariant(&inv));
        assert_eq!(compose_equivariant(&inv, &e).unwrap(), EquivariantMap::identity(e.source.clone()));
        assert_eq!(compose_equivariant(&e, &inv).unwrap(), EquivariantMap::identity(e.target.clone()));
    }

    #[test]
    fn json_round_trip() {
        let m = gauge(&Arc::new(pair_ruth()));
        let e = equivariant_from_morphism(&m).unwrap();
        let text = serde_json::to_string(&e.to_spec()).unwrap();
        let back = EquivariantMap::from_spec(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back, e);
    }
}
