//! VB-groupoids over a finite groupoid, their maps, linear groupoid bundles
//! (VB-groupoids over a discrete base) with natural transformations, and
//! connections.
//!
//! Fibers carry fixed ordered bases. Multiplication over a composable pair
//! `(g, h)` is stored as a matrix on the canonical basis of the fibered
//! product `{(v, w) ∈ V₁(g) ⊕ V₁(h) : s̃v = t̃w}`, namely the kernel basis of
//! `[s̃_g | -t̃_h]`.

use std::collections::BTreeMap;
use std::ops::Deref;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groupoid::{validate_groupoid, FiniteGroupoid, GroupoidSpec};
use crate::linalg::{concat, fmt_vector, unit_vector, Matrix, Pinning, Rational, Vector};
use crate::report::Report;

#[derive(Clone, Debug)]
struct FiberMult {
    basis: Matrix,
    left_inv: Matrix,
    map: Matrix,
}

impl FiberMult {
    fn new(basis: Matrix, map: Matrix) -> Self {
        let left_inv = basis.left_inverse().expect("kernel basis has independent columns");
        FiberMult { basis, left_inv, map }
    }
}

/// A VB-groupoid `V₁ ⇒ V₀` over a finite groupoid `G₁ ⇒ G₀`.
#[derive(Clone, Debug)]
pub struct VbGroupoid {
    base: Arc<FiniteGroupoid>,
    objdim: Vec<usize>,
    arrdim: Vec<usize>,
    stilde: Vec<Matrix>,
    ttilde: Vec<Matrix>,
    utilde: Vec<Matrix>,
    inverse: Vec<Matrix>,
    mult: Vec<FiberMult>,
}

impl PartialEq for VbGroupoid {
    fn eq(&self, o: &Self) -> bool {
        self.base == o.base
            && self.objdim == o.objdim
            && self.arrdim == o.arrdim
            && self.stilde == o.stilde
            && self.ttilde == o.ttilde
            && self.utilde == o.utilde
            && self.inverse == o.inverse
            && self.mult.iter().zip(&o.mult).all(|(a, b)| a.map == b.map)
    }
}

impl Eq for VbGroupoid {}

/// The structure maps of a VB-groupoid except multiplication.
#[derive(Clone, Debug)]
pub struct VbShape {
    pub objdim: Vec<usize>,
    pub arrdim: Vec<usize>,
    pub stilde: Vec<Matrix>,
    pub ttilde: Vec<Matrix>,
    pub utilde: Vec<Matrix>,
    pub inverse: Vec<Matrix>,
}

fn fibered_basis(s: &Matrix, t: &Matrix) -> Matrix {
    s.hstack(&t.neg()).kernel_basis()
}

fn shape_err(what: &str, loc: &str, want: (usize, usize), got: (usize, usize)) -> Error {
    Error::Structure(format!("{what} at {loc}: expected {}x{}, got {}x{}", want.0, want.1, got.0, got.1))
}

impl VbGroupoid {
    /// Assembles a VB-groupoid from its structure maps and one matrix per
    /// composable pair on the canonical fibered-product basis.
    pub fn new(base: Arc<FiniteGroupoid>, shape: VbShape, mult: Vec<Matrix>) -> Result<Self> {
        Self::check_shape(&base, &shape)?;
        if mult.len() != base.pairs().len() {
            return Err(Error::Structure(format!(
                "{} multiplication maps for {} composable pairs",
                mult.len(),
                base.pairs().len()
            )));
        }
        let mut fm = Vec::with_capacity(mult.len());
        for (&(g, h), map) in base.pairs().iter().zip(mult) {
            let basis = fibered_basis(&shape.stilde[g], &shape.ttilde[h]);
            let gh = base.compose(g, h);
            let want = (shape.arrdim[gh], basis.cols());
            if map.shape() != want {
                return Err(shape_err("multiplication", &base.fmt_tuple(&[g, h]), want, map.shape()));
            }
            fm.push(FiberMult::new(basis, map));
        }
        Ok(Self::from_parts(base, shape, fm))
    }

    /// Like [`VbGroupoid::new`], with multiplication given by a function of
    /// `(pair index, v, w)` that is evaluated on the fibered-product basis.
    pub fn from_fn(
        base: Arc<FiniteGroupoid>,
        shape: VbShape,
        mult: impl Fn(usize, &[Rational], &[Rational]) -> Vector,
    ) -> Result<Self> {
        Self::check_shape(&base, &shape)?;
        let mut fm = Vec::with_capacity(base.pairs().len());
        for (p, &(g, h)) in base.pairs().iter().enumerate() {
            let basis = fibered_basis(&shape.stilde[g], &shape.ttilde[h]);
            let gh = base.compose(g, h);
            let dg = shape.arrdim[g];
            let cols: Vec<Vector> = basis
                .columns()
                .iter()
                .map(|c| mult(p, &c[..dg], &c[dg..]))
                .collect();
            if cols.iter().any(|c| c.len() != shape.arrdim[gh]) {
                return Err(Error::Structure(format!(
                    "multiplication at {} has the wrong output size",
                    base.fmt_tuple(&[g, h])
                )));
            }
            let map = Matrix::from_columns(shape.arrdim[gh], &cols);
            fm.push(FiberMult::new(basis, map));
        }
        Ok(Self::from_parts(base, shape, fm))
    }

    /// Multiplication given by one matrix per pair acting on the stacked
    /// vector `(v, w)`.
    pub fn from_linear(base: Arc<FiniteGroupoid>, shape: VbShape, mult: impl Fn(usize) -> Matrix) -> Result<Self> {
        Self::from_fn(base, shape, |p, v, w| mult(p).apply(&concat(v, w)))
    }

    fn from_parts(base: Arc<FiniteGroupoid>, s: VbShape, mult: Vec<FiberMult>) -> Self {
        VbGroupoid {
            base,
            objdim: s.objdim,
            arrdim: s.arrdim,
            stilde: s.stilde,
            ttilde: s.ttilde,
            utilde: s.utilde,
            inverse: s.inverse,
            mult,
        }
    }

    fn check_shape(base: &FiniteGroupoid, s: &VbShape) -> Result<()> {
        if !validate_groupoid(base).passed() {
            return Err(Error::Structure("base groupoid violates the groupoid axioms".into()));
        }
        let (no, na) = (base.num_objects(), base.num_arrows());
        if s.objdim.len() != no || s.utilde.len() != no {
            return Err(Error::Structure("per-object data has the wrong length".into()));
        }
        if s.arrdim.len() != na || s.stilde.len() != na || s.ttilde.len() != na || s.inverse.len() != na {
            return Err(Error::Structure("per-arrow data has the wrong length".into()));
        }
        for g in 0..na {
            let loc = base.arrow_name(g);
            let d = s.arrdim[g];
            let want = (s.objdim[base.src(g)], d);
            if s.stilde[g].shape() != want {
                return Err(shape_err("source map", loc, want, s.stilde[g].shape()));
            }
            let want = (s.objdim[base.tgt(g)], d);
            if s.ttilde[g].shape() != want {
                return Err(shape_err("target map", loc, want, s.ttilde[g].shape()));
            }
            let want = (s.arrdim[base.inv(g)], d);
            if s.inverse[g].shape() != want {
                return Err(shape_err("inverse map", loc, want, s.inverse[g].shape()));
            }
        }
        for x in 0..no {
            let want = (s.arrdim[base.unit(x)], s.objdim[x]);
            if s.utilde[x].shape() != want {
                return Err(shape_err("unit map", base.object_name(x), want, s.utilde[x].shape()));
            }
        }
        Ok(())
    }

    pub fn base(&self) -> &FiniteGroupoid {
        &self.base
    }

    pub fn base_arc(&self) -> &Arc<FiniteGroupoid> {
        &self.base
    }

    pub fn objdim(&self, x: usize) -> usize {
        self.objdim[x]
    }

    pub fn arrdim(&self, g: usize) -> usize {
        self.arrdim[g]
    }

    pub fn stilde(&self, g: usize) -> &Matrix {
        &self.stilde[g]
    }

    pub fn ttilde(&self, g: usize) -> &Matrix {
        &self.ttilde[g]
    }

    pub fn utilde(&self, x: usize) -> &Matrix {
        &self.utilde[x]
    }

    pub fn inverse_map(&self, g: usize) -> &Matrix {
        &self.inverse[g]
    }

    /// The canonical basis of the fibered product over pair index `p`.
    pub fn mult_basis(&self, p: usize) -> &Matrix {
        &self.mult[p].basis
    }

    /// The multiplication matrix over pair index `p` on its canonical basis.
    pub fn mult_map(&self, p: usize) -> &Matrix {
        &self.mult[p].map
    }

    pub fn shape(&self) -> VbShape {
        VbShape {
            objdim: self.objdim.clone(),
            arrdim: self.arrdim.clone(),
            stilde: self.stilde.clone(),
            ttilde: self.ttilde.clone(),
            utilde: self.utilde.clone(),
            inverse: self.inverse.clone(),
        }
    }

    pub fn mult_maps(&self) -> Vec<Matrix> {
        self.mult.iter().map(|m| m.map.clone()).collect()
    }

    pub fn src(&self, g: usize, v: &[Rational]) -> Vector {
        self.stilde[g].apply(v)
    }

    pub fn tgt(&self, g: usize, v: &[Rational]) -> Vector {
        self.ttilde[g].apply(v)
    }

    pub fn unit(&self, x: usize, e: &[Rational]) -> Vector {
        self.utilde[x].apply(e)
    }

    pub fn inv(&self, g: usize, v: &[Rational]) -> Vector {
        self.inverse[g].apply(v)
    }

    /// `v · w` for `v ∈ V₁(g)`, `w ∈ V₁(h)`; `None` unless the arrows are
    /// composable (`s(g) = t(h)` and `s̃v = t̃w`).
    pub fn mul(&self, g: usize, h: usize, v: &[Rational], w: &[Rational]) -> Option<Vector> {
        let p = self.base.pair_index(g, h)?;
        if v.len() != self.arrdim[g] || w.len() != self.arrdim[h] || self.src(g, v) != self.tgt(h, w) {
            return None;
        }
        let fm = &self.mult[p];
        Some(fm.map.apply(&fm.left_inv.apply(&concat(v, w))))
    }

    /// Multiplication with the composite arrow of the base.
    pub fn mul_arrows(&self, g: usize, h: usize, v: &[Rational], w: &[Rational]) -> Option<(usize, Vector)> {
        let r = self.mul(g, h, v, w)?;
        Some((self.base.compose(g, h), r))
    }

    /// Replaces one multiplication matrix; for mutation testing.
    pub fn with_mult_map(&self, p: usize, map: Matrix) -> Self {
        let mut out = self.clone();
        out.mult[p].map = map;
        out
    }

    /// Replaces the non-multiplicative structure maps, keeping the
    /// multiplication matrices; for mutation testing.
    pub fn with_shape(&self, shape: VbShape) -> Result<Self> {
        Self::new(self.base.clone(), shape, self.mult_maps())
    }

    /// Whether the base groupoid has only unit arrows.
    pub fn is_over_discrete(&self) -> bool {
        self.base.is_discrete()
    }
}

fn loc_fiber(g: &FiniteGroupoid, arrows: &[usize], basis: usize) -> String {
    format!("{} basis {}", g.fmt_tuple(arrows), basis)
}

/// Checks every VB-groupoid axiom on fiber bases; empty report = valid.
pub fn validate_vb(v: &VbGroupoid) -> Report {
    let mut r = Report::new();
    let g = v.base();
    for x in 0..g.num_objects() {
        let u = g.unit(x);
        let id = Matrix::identity(v.objdim(x));
        let su = v.stilde(u).mul(v.utilde(x));
        if su != id {
            r.push("unit-source", g.object_name(x), &id, su);
        }
        let tu = v.ttilde(u).mul(v.utilde(x));
        if tu != id {
            r.push("unit-target", g.object_name(x), &id, tu);
        }
    }
    let fmt = |o: Option<Vector>| o.map_or("not composable".to_string(), |w| fmt_vector(&w));
    for (p, &(a, b)) in g.pairs().iter().enumerate() {
        let ab = g.compose(a, b);
        let basis = v.mult_basis(p);
        let da = v.arrdim(a);
        for (k, col) in basis.columns().iter().enumerate() {
            let (va, vb) = (&col[..da], &col[da..]);
            let m = v.mul(a, b, va, vb).expect("basis lies in the fibered product");
            let want = v.src(b, vb);
            let got = v.src(ab, &m);
            if want != got {
                r.push("mult-source", loc_fiber(g, &[a, b], k), fmt_vector(&want), fmt_vector(&got));
            }
            let want = v.tgt(a, va);
            let got = v.tgt(ab, &m);
            if want != got {
                r.push("mult-target", loc_fiber(g, &[a, b], k), fmt_vector(&want), fmt_vector(&got));
            }
        }
    }
    for a in 0..g.num_arrows() {
        let (s, t) = (g.src(a), g.tgt(a));
        let ai = g.inv(a);
        for k in 0..v.arrdim(a) {
            let e = unit_vector(v.arrdim(a), k);
            let loc = || loc_fiber(g, &[a], k);
            let ut = v.unit(t, &v.tgt(a, &e));
            let lu = v.mul(g.unit(t), a, &ut, &e);
            if lu.as_ref() != Some(&e) {
                r.push("left-unit", loc(), fmt_vector(&e), fmt(lu));
            }
            let us = v.unit(s, &v.src(a, &e));
            let ru = v.mul(a, g.unit(s), &e, &us);
            if ru.as_ref() != Some(&e) {
                r.push("right-unit", loc(), fmt_vector(&e), fmt(ru));
            }
            let ie = v.inv(a, &e);
            if v.src(ai, &ie) != v.tgt(a, &e) {
                r.push("inverse-source", loc(), fmt_vector(&v.tgt(a, &e)), fmt_vector(&v.src(ai, &ie)));
            }
            if v.tgt(ai, &ie) != v.src(a, &e) {
                r.push("inverse-target", loc(), fmt_vector(&v.src(a, &e)), fmt_vector(&v.tgt(ai, &ie)));
            }
            let li = v.mul(ai, a, &ie, &e);
            if li.as_ref() != Some(&us) {
                r.push("left-inverse", loc(), fmt_vector(&us), fmt(li));
            }
            let ri = v.mul(a, ai, &e, &ie);
            if ri.as_ref() != Some(&ut) {
                r.push("right-inverse", loc(), fmt_vector(&ut), fmt(ri));
            }
        }
    }
    let splits: Vec<Option<(Matrix, Matrix)>> = (0..g.num_arrows())
        .map(|a| {
            let s = v.stilde(a);
            (s.rank() == s.rows()).then(|| (s.right_inverse_on_image(None).expect("surjective"), s.kernel_basis()))
        })
        .collect();
    for a in 0..g.num_arrows() {
        for b in (0..g.num_arrows()).filter(|&b| g.src(a) == g.tgt(b)) {
            for c in (0..g.num_arrows()).filter(|&c| g.src(b) == g.tgt(c)) {
                let (da, db) = (v.arrdim(a), v.arrdim(b));
                let basis = match (&splits[a], &splits[b]) {
                    (Some(sa), Some(sb)) => triple_basis(v, [a, b, c], sa, sb),
                    _ => {
                        // constraints s̃v_a = t̃v_b and s̃v_b = t̃v_c
                        let (ns, nt, dc) = (v.objdim(g.src(a)), v.objdim(g.src(b)), v.arrdim(c));
                        let top = v.stilde(a).hstack(&v.ttilde(b).neg()).hstack(&Matrix::zeros(ns, dc));
                        let bottom = Matrix::zeros(nt, da).hstack(v.stilde(b)).hstack(&v.ttilde(c).neg());
                        top.vstack(&bottom).kernel_basis().columns()
                    }
                };
                for (k, col) in basis.iter().enumerate() {
                    let (x, y, z) = (&col[..da], &col[da..da + db], &col[da + db..]);
                    let left = v.mul(a, b, x, y).and_then(|xy| v.mul(g.compose(a, b), c, &xy, z));
                    let right = v.mul(b, c, y, z).and_then(|yz| v.mul(a, g.compose(b, c), x, &yz));
                    if left != right {
                        r.push("associativity", loc_fiber(g, &[a, b, c], k), fmt(right), fmt(left));
                    }
                }
            }
        }
    }
    r
}

/// A basis of the composable triples over `(a, b, c)` from splittings
/// `(σ, K)` of the source maps at `a` and `b`: `z` free, then
/// `y = σ_b t̃z + K_b·`, then `x = σ_a t̃y + K_a·`.
fn triple_basis(v: &VbGroupoid, [a, b, c]: [usize; 3], (sa, ka): &(Matrix, Matrix), (sb, kb): &(Matrix, Matrix)) -> Vec<Vector> {
    let (da, db, dc) = (v.arrdim(a), v.arrdim(b), v.arrdim(c));
    let lift_a = |y: &[Rational]| sa.apply(&v.tgt(b, y));
    let mut out = Vec::with_capacity(dc + kb.cols() + ka.cols());
    for i in 0..dc {
        let z = unit_vector(dc, i);
        let y = sb.apply(&v.tgt(c, &z));
        out.push(concat(&concat(&lift_a(&y), &y), &z));
    }
    for y in kb.columns() {
        out.push(concat(&concat(&lift_a(&y), &y), &vec![Rational::zero(); dc]));
    }
    for x in ka.columns() {
        out.push(concat(&x, &vec![Rational::zero(); db + dc]));
    }
    debug_assert!(out.iter().all(|w| w.len() == da + db + dc));
    out
}

/// A morphism of VB-groupoids covering a functor of base groupoids, given
/// by object and arrow tables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VbMap {
    pub source: Arc<VbGroupoid>,
    pub target: Arc<VbGroupoid>,
    pub objmap: Vec<usize>,
    pub arrmap: Vec<usize>,
    /// Per object `x`: `V₀(x) → W₀(objmap x)`.
    pub f0: Vec<Matrix>,
    /// Per arrow `g`: `V₁(g) → W₁(arrmap g)`.
    pub f1: Vec<Matrix>,
}

impl VbMap {
    /// A map over the identity of a shared base groupoid.
    pub fn over_identity(source: Arc<VbGroupoid>, target: Arc<VbGroupoid>, f0: Vec<Matrix>, f1: Vec<Matrix>) -> Result<Self> {
        if source.base() != target.base() {
            return Err(Error::Structure("map over the identity needs equal base groupoids".into()));
        }
        let objmap = (0..source.base().num_objects()).collect();
        let arrmap = (0..source.base().num_arrows()).collect();
        Self::new(source, target, objmap, arrmap, f0, f1)
    }

    pub fn new(
        source: Arc<VbGroupoid>,
        target: Arc<VbGroupoid>,
        objmap: Vec<usize>,
        arrmap: Vec<usize>,
        f0: Vec<Matrix>,
        f1: Vec<Matrix>,
    ) -> Result<Self> {
        let (g, h) = (source.base(), target.base());
        if objmap.len() != g.num_objects() || f0.len() != g.num_objects() {
            return Err(Error::Structure("per-object data has the wrong length".into()));
        }
        if arrmap.len() != g.num_arrows() || f1.len() != g.num_arrows() {
            return Err(Error::Structure("per-arrow data has the wrong length".into()));
        }
        if objmap.iter().any(|&y| y >= h.num_objects()) || arrmap.iter().any(|&b| b >= h.num_arrows()) {
            return Err(Error::Structure("base map points outside the target groupoid".into()));
        }
        for x in 0..g.num_objects() {
            let want = (target.objdim(objmap[x]), source.objdim(x));
            if f0[x].shape() != want {
                return Err(shape_err("object map", g.object_name(x), want, f0[x].shape()));
            }
        }
        for a in 0..g.num_arrows() {
            let want = (target.arrdim(arrmap[a]), source.arrdim(a));
            if f1[a].shape() != want {
                return Err(shape_err("arrow map", g.arrow_name(a), want, f1[a].shape()));
            }
        }
        Ok(VbMap { source, target, objmap, arrmap, f0, f1 })
    }

    pub fn identity(v: Arc<VbGroupoid>) -> Self {
        let g = v.base();
        let f0 = (0..g.num_objects()).map(|x| Matrix::identity(v.objdim(x))).collect();
        let f1 = (0..g.num_arrows()).map(|a| Matrix::identity(v.arrdim(a))).collect();
        Self::over_identity(v.clone(), v, f0, f1).expect("identity shapes agree")
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &VbMap) -> Result<VbMap> {
        if *first.target != *self.source {
            return Err(Error::Composition("intermediate VB-groupoids differ".into()));
        }
        let objmap = first.objmap.iter().map(|&y| self.objmap[y]).collect();
        let arrmap = first.arrmap.iter().map(|&b| self.arrmap[b]).collect();
        let f0 = first.f0.iter().enumerate().map(|(x, m)| self.f0[first.objmap[x]].mul(m)).collect();
        let f1 = first.f1.iter().enumerate().map(|(a, m)| self.f1[first.arrmap[a]].mul(m)).collect();
        VbMap::new(first.source.clone(), self.target.clone(), objmap, arrmap, f0, f1)
    }

    /// The inverse of a map whose base tables are bijections and whose
    /// fiber maps are invertible.
    pub fn inverse(&self) -> Result<VbMap> {
        let h = self.target.base();
        let invert = |m: &[usize], n: usize| -> Result<Vec<usize>> {
            let mut out = vec![usize::MAX; n];
            for (i, &j) in m.iter().enumerate() {
                if out[j] != usize::MAX {
                    return Err(Error::NotInvertible("base map is not injective".into()));
                }
                out[j] = i;
            }
            if out.contains(&usize::MAX) {
                return Err(Error::NotInvertible("base map is not surjective".into()));
            }
            Ok(out)
        };
        let objmap = invert(&self.objmap, h.num_objects())?;
        let arrmap = invert(&self.arrmap, h.num_arrows())?;
        let f0 = objmap.iter().map(|&x| self.f0[x].inverse()).collect::<Result<Vec<_>>>()?;
        let f1 = arrmap.iter().map(|&a| self.f1[a].inverse()).collect::<Result<Vec<_>>>()?;
        VbMap::new(self.target.clone(), self.source.clone(), objmap, arrmap, f0, f1)
    }

    pub fn is_identity(&self) -> bool {
        *self.source == *self.target
            && self.objmap.iter().enumerate().all(|(i, &j)| i == j)
            && self.arrmap.iter().enumerate().all(|(i, &j)| i == j)
            && self.f0.iter().all(Matrix::is_identity)
            && self.f1.iter().all(Matrix::is_identity)
    }

    /// Whether every fiber map is invertible and the base tables are
    /// bijections.
    pub fn is_isomorphism(&self) -> bool {
        self.inverse().is_ok()
    }
}

/// Checks that a [`VbMap`] is a functor compatible with all structure maps.
pub fn validate_vb_map(f: &VbMap) -> Report {
    let mut r = Report::new();
    let (v, w) = (&*f.source, &*f.target);
    let (g, h) = (v.base(), w.base());
    for a in 0..g.num_arrows() {
        let b = f.arrmap[a];
        if h.src(b) != f.objmap[g.src(a)] || h.tgt(b) != f.objmap[g.tgt(a)] {
            r.push("base-functor", g.arrow_name(a), "endpoints preserved", h.arrow_name(b));
        }
    }
    for x in 0..g.num_objects() {
        if f.arrmap[g.unit(x)] != h.unit(f.objmap[x]) {
            r.push("base-functor", g.object_name(x), "unit preserved", h.arrow_name(f.arrmap[g.unit(x)]));
        }
    }
    for &(a, b) in g.pairs() {
        let want = f.arrmap[g.compose(a, b)];
        if h.try_compose(f.arrmap[a], f.arrmap[b]) != Some(want) {
            r.push("base-functor", g.fmt_tuple(&[a, b]), "composition preserved", "violated");
        }
    }
    if !r.passed() {
        return r;
    }
    for a in 0..g.num_arrows() {
        let b = f.arrmap[a];
        let (sa, ta) = (g.src(a), g.tgt(a));
        let lhs = w.stilde(b).mul(&f.f1[a]);
        let rhs = f.f0[sa].mul(v.stilde(a));
        if lhs != rhs {
            r.push("source", g.arrow_name(a), rhs, lhs);
        }
        let lhs = w.ttilde(b).mul(&f.f1[a]);
        let rhs = f.f0[ta].mul(v.ttilde(a));
        if lhs != rhs {
            r.push("target", g.arrow_name(a), rhs, lhs);
        }
    }
    for x in 0..g.num_objects() {
        let lhs = f.f1[g.unit(x)].mul(v.utilde(x));
        let rhs = w.utilde(f.objmap[x]).mul(&f.f0[x]);
        if lhs != rhs {
            r.push("unit", g.object_name(x), rhs, lhs);
        }
    }
    if !r.passed() {
        return r;
    }
    for (p, &(a, b)) in g.pairs().iter().enumerate() {
        let ab = g.compose(a, b);
        let da = v.arrdim(a);
        for (k, col) in v.mult_basis(p).columns().iter().enumerate() {
            let (x, y) = (&col[..da], &col[da..]);
            let m = v.mul(a, b, x, y).expect("basis lies in the fibered product");
            let lhs = f.f1[ab].apply(&m);
            let rhs = w.mul(f.arrmap[a], f.arrmap[b], &f.f1[a].apply(x), &f.f1[b].apply(y));
            if rhs.as_ref() != Some(&lhs) {
                r.push(
                    "multiplicative",
                    loc_fiber(g, &[a, b], k),
                    rhs.map_or("not composable".into(), |z| fmt_vector(&z)),
                    fmt_vector(&lhs),
                );
            }
        }
    }
    r
}

/// A VB-groupoid over a discrete base: one linear groupoid per base
/// object. Base arrows are the units, named after their objects.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearGroupoidBundle(VbGroupoid);

impl LinearGroupoidBundle {
    pub fn new(v: VbGroupoid) -> Result<Self> {
        if !v.is_over_discrete() {
            return Err(Error::Structure("linear groupoid bundle needs a discrete base".into()));
        }
        Ok(LinearGroupoidBundle(v))
    }

    pub fn into_inner(self) -> VbGroupoid {
        self.0
    }

    pub fn as_vb(&self) -> &VbGroupoid {
        &self.0
    }

    pub fn num_objects(&self) -> usize {
        self.0.base().num_objects()
    }

    /// The arrow space over base object `x`.
    pub fn arrdim_at(&self, x: usize) -> usize {
        self.0.arrdim(self.0.base().unit(x))
    }

    pub fn s_at(&self, x: usize) -> &Matrix {
        self.0.stilde(self.0.base().unit(x))
    }

    pub fn t_at(&self, x: usize) -> &Matrix {
        self.0.ttilde(self.0.base().unit(x))
    }

    pub fn i_at(&self, x: usize) -> &Matrix {
        self.0.inverse_map(self.0.base().unit(x))
    }

    pub fn s(&self, x: usize, v: &[Rational]) -> Vector {
        self.s_at(x).apply(v)
    }

    pub fn t(&self, x: usize, v: &[Rational]) -> Vector {
        self.t_at(x).apply(v)
    }

    pub fn u(&self, x: usize, e: &[Rational]) -> Vector {
        self.0.unit(x, e)
    }

    pub fn i(&self, x: usize, v: &[Rational]) -> Vector {
        self.i_at(x).apply(v)
    }

    /// `v ∘ w` in the fiber over `x`, when composable.
    pub fn m(&self, x: usize, v: &[Rational], w: &[Rational]) -> Option<Vector> {
        let u = self.0.base().unit(x);
        self.0.mul(u, u, v, w)
    }

    /// Basis of the kernel of the source map over `x`.
    pub fn source_kernel(&self, x: usize) -> Matrix {
        self.s_at(x).kernel_basis()
    }

    /// Basis of the kernel of the target map over `x`.
    pub fn target_kernel(&self, x: usize) -> Matrix {
        self.t_at(x).kernel_basis()
    }
}

impl Deref for LinearGroupoidBundle {
    type Target = VbGroupoid;
    fn deref(&self) -> &VbGroupoid {
        &self.0
    }
}

/// A natural transformation `from ⇒ to` between two maps of linear
/// groupoid bundles with the same base map: per source object `x`, a map
/// `V₀(x) → W₁(b x)` sending each object to an arrow `from(e) → to(e)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BundleTransformation {
    pub from: VbMap,
    pub to: VbMap,
    pub components: Vec<Matrix>,
}

/// Checks source/target compatibility and the naturality square
/// `to(v) ∘ α(s̃v) = α(t̃v) ∘ from(v)` on every arrow basis vector.
pub fn validate_transformation(a: &BundleTransformation) -> Report {
    let mut r = Report::new();
    let (f, fp) = (&a.from, &a.to);
    if f.source != fp.source || f.target != fp.target || f.objmap != fp.objmap {
        r.push("boundary", "maps", "parallel maps", "mismatched");
        return r;
    }
    let v = LinearGroupoidBundle::new((*f.source).clone());
    let w = LinearGroupoidBundle::new((*f.target).clone());
    let (Ok(v), Ok(w)) = (v, w) else {
        r.push("boundary", "bases", "discrete", "not discrete");
        return r;
    };
    for x in 0..v.num_objects() {
        let y = f.objmap[x];
        let c = &a.components[x];
        if c.shape() != (w.arrdim_at(y), v.objdim(x)) {
            r.push("shape", v.base().object_name(x), "component shape", "mismatch");
            continue;
        }
        let s = w.s_at(y).mul(c);
        if s != f.f0[x] {
            r.push("source", v.base().object_name(x), &f.f0[x], s);
        }
        let t = w.t_at(y).mul(c);
        if t != fp.f0[x] {
            r.push("target", v.base().object_name(x), &fp.f0[x], t);
        }
    }
    if !r.passed() {
        return r;
    }
    for x in 0..v.num_objects() {
        let y = f.objmap[x];
        let ux = v.base().unit(x);
        let c = &a.components[x];
        for k in 0..v.arrdim_at(x) {
            let e = unit_vector(v.arrdim_at(x), k);
            let lhs = w.m(y, &c.apply(&v.t(x, &e)), &f.f1[ux].apply(&e));
            let rhs = w.m(y, &fp.f1[ux].apply(&e), &c.apply(&v.s(x, &e)));
            if lhs.is_none() || lhs != rhs {
                let show = |o: Option<Vector>| o.map_or("not composable".into(), |z| fmt_vector(&z));
                r.push("naturality", format!("{} basis {k}", v.base().object_name(x)), show(rhs), show(lhs));
            }
        }
    }
    r
}

/// A fiberwise linear splitting `σ_g : V₀(s g) → V₁(g)` of the source map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Connection {
    pub sigma: Vec<Matrix>,
}

/// Checks the splitting property and unitality of a connection.
pub fn validate_connection(v: &VbGroupoid, c: &Connection) -> Report {
    let mut r = Report::new();
    let g = v.base();
    for a in 0..g.num_arrows() {
        let want = Matrix::identity(v.objdim(g.src(a)));
        let sc = v.stilde(a).compose(&c.sigma[a]);
        match sc {
            Ok(m) if m == want => {}
            Ok(m) => r.push("splitting", g.arrow_name(a), want, m),
            Err(e) => r.push("splitting", g.arrow_name(a), want, e),
        }
    }
    for x in 0..g.num_objects() {
        let u = g.unit(x);
        if c.sigma[u] != *v.utilde(x) {
            r.push("unital", g.object_name(x), v.utilde(x), &c.sigma[u]);
        }
    }
    r
}

/// The deterministic unital connection: the unit section at unit arrows
/// and the pivot right inverse of the source map elsewhere.
pub fn find_unital_connection(v: &VbGroupoid) -> Result<Connection> {
    let g = v.base();
    let mut sigma = Vec::with_capacity(g.num_arrows());
    for a in 0..g.num_arrows() {
        let s = v.stilde(a);
        let m = if g.is_unit(a) {
            let x = g.src(a);
            let pin = Pinning { domain: Matrix::identity(v.objdim(x)), images: v.utilde(x).clone() };
            s.right_inverse_on_image(Some(&pin))
        } else {
            s.right_inverse_on_image(None)
        };
        sigma.push(m.map_err(|e| Error::Structure(format!("source map at {}: {e}", g.arrow_name(a))))?);
    }
    Ok(Connection { sigma })
}

/// The linear groupoid bundle of `V` restricted to the unit arrows of the
/// base, over the discrete groupoid on `G₀`.
pub fn kernel_groupoid(v: &VbGroupoid) -> Result<LinearGroupoidBundle> {
    let g = v.base();
    let base = Arc::new(FiniteGroupoid::discrete(g.objects()));
    let units: Vec<usize> = (0..g.num_objects()).map(|x| g.unit(x)).collect();
    // discrete arrows share object names and order, so arrow x is unit(x)
    let shape = VbShape {
        objdim: (0..g.num_objects()).map(|x| v.objdim(x)).collect(),
        arrdim: units.iter().map(|&u| v.arrdim(u)).collect(),
        stilde: units.iter().map(|&u| v.stilde(u).clone()).collect(),
        ttilde: units.iter().map(|&u| v.ttilde(u).clone()).collect(),
        utilde: (0..g.num_objects()).map(|x| v.utilde(x).clone()).collect(),
        inverse: units.iter().map(|&u| v.inverse_map(u).clone()).collect(),
    };
    let mult: Vec<Matrix> = base
        .pairs()
        .iter()
        .map(|&(x, _)| v.mult_map(g.pair_index(units[x], units[x]).expect("units compose")).clone())
        .collect();
    LinearGroupoidBundle::new(VbGroupoid::new(base, shape, mult)?)
}

/// Transports `v` along invertible fiber maps `p_x` on `V₀` and `q_g` on
/// `V₁`; returns the new VB-groupoid and the isomorphism `v → new`.
pub fn transport(v: &Arc<VbGroupoid>, p: &[Matrix], q: &[Matrix]) -> Result<(Arc<VbGroupoid>, VbMap)> {
    let g = v.base();
    let pinv = p.iter().map(Matrix::inverse).collect::<Result<Vec<_>>>()?;
    let qinv = q.iter().map(Matrix::inverse).collect::<Result<Vec<_>>>()?;
    let shape = VbShape {
        objdim: (0..g.num_objects()).map(|x| v.objdim(x)).collect(),
        arrdim: (0..g.num_arrows()).map(|a| v.arrdim(a)).collect(),
        stilde: (0..g.num_arrows()).map(|a| p[g.src(a)].mul(v.stilde(a)).mul(&qinv[a])).collect(),
        ttilde: (0..g.num_arrows()).map(|a| p[g.tgt(a)].mul(v.ttilde(a)).mul(&qinv[a])).collect(),
        utilde: (0..g.num_objects()).map(|x| q[g.unit(x)].mul(v.utilde(x)).mul(&pinv[x])).collect(),
        inverse: (0..g.num_arrows()).map(|a| q[g.inv(a)].mul(v.inverse_map(a)).mul(&qinv[a])).collect(),
    };
    let pairs = g.pairs().to_vec();
    let src = v.clone();
    let out = VbGroupoid::from_fn(v.base_arc().clone(), shape, |k, x, y| {
        let (a, b) = pairs[k];
        let m = src
            .mul(a, b, &qinv[a].apply(x), &qinv[b].apply(y))
            .expect("transport preserves composability");
        q[g.compose(a, b)].apply(&m)
    })?;
    let out = Arc::new(out);
    let iso = VbMap::over_identity(v.clone(), out.clone(), p.to_vec(), q.to_vec())?;
    Ok((out, iso))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairMap {
    pub pair: [String; 2],
    pub map: Matrix,
}

/// JSON form of a VB-groupoid. Multiplication is given on the canonical
/// fibered-product basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VbSpec {
    pub groupoid: GroupoidSpec,
    pub objdim: BTreeMap<String, usize>,
    pub arrdim: BTreeMap<String, usize>,
    pub stilde: BTreeMap<String, Matrix>,
    pub ttilde: BTreeMap<String, Matrix>,
    pub utilde: BTreeMap<String, Matrix>,
    pub inverse: BTreeMap<String, Matrix>,
    pub mult: Vec<PairMap>,
}

pub(crate) fn lookup<'a, T>(m: &'a BTreeMap<String, T>, key: &str, what: &str) -> Result<&'a T> {
    m.get(key).ok_or_else(|| Error::Structure(format!("{what} missing entry for {key:?}")))
}

pub(crate) fn pair_table(g: &FiniteGroupoid, entries: &[PairMap], what: &str) -> Result<Vec<Matrix>> {
    let mut out: Vec<Option<Matrix>> = vec![None; g.pairs().len()];
    for e in entries {
        let a = g.arrow_id(&e.pair[0]);
        let b = g.arrow_id(&e.pair[1]);
        let p = a.zip(b).and_then(|(a, b)| g.pair_index(a, b)).ok_or_else(|| {
            Error::Structure(format!("{what}: ({},{}) is not a composable pair", e.pair[0], e.pair[1]))
        })?;
        if out[p].replace(e.map.clone()).is_some() {
            return Err(Error::Structure(format!("{what}: pair ({},{}) given twice", e.pair[0], e.pair[1])));
        }
    }
    out.into_iter()
        .enumerate()
        .map(|(p, m)| {
            m.ok_or_else(|| {
                let (a, b) = g.pairs()[p];
                Error::Structure(format!("{what}: missing pair {}", g.fmt_tuple(&[a, b])))
            })
        })
        .collect()
}

pub(crate) fn pair_entries(g: &FiniteGroupoid, maps: &[Matrix]) -> Vec<PairMap> {
    g.pairs()
        .iter()
        .zip(maps)
        .map(|(&(a, b), m)| PairMap { pair: [g.arrow_name(a).into(), g.arrow_name(b).into()], map: m.clone() })
        .collect()
}

pub fn per_object<T: Clone>(g: &FiniteGroupoid, m: &BTreeMap<String, T>, what: &str) -> Result<Vec<T>> {
    g.objects().iter().map(|x| lookup(m, x, what).cloned()).collect()
}

pub fn per_arrow<T: Clone>(g: &FiniteGroupoid, m: &BTreeMap<String, T>, what: &str) -> Result<Vec<T>> {
    g.arrows().iter().map(|a| lookup(m, a, what).cloned()).collect()
}

pub fn object_table<T: Clone>(g: &FiniteGroupoid, v: &[T]) -> BTreeMap<String, T> {
    g.objects().iter().cloned().zip(v.iter().cloned()).collect()
}

pub fn arrow_table<T: Clone>(g: &FiniteGroupoid, v: &[T]) -> BTreeMap<String, T> {
    g.arrows().iter().cloned().zip(v.iter().cloned()).collect()
}

impl VbGroupoid {
    pub fn to_spec(&self) -> VbSpec {
        let g = self.base();
        VbSpec {
            groupoid: g.to_spec(),
            objdim: object_table(g, &self.objdim),
            arrdim: arrow_table(g, &self.arrdim),
            stilde: arrow_table(g, &self.stilde),
            ttilde: arrow_table(g, &self.ttilde),
            utilde: object_table(g, &self.utilde),
            inverse: arrow_table(g, &self.inverse),
            mult: pair_entries(g, &self.mult_maps()),
        }
    }

    pub fn from_spec(spec: &VbSpec) -> Result<Self> {
        let g = Arc::new(FiniteGroupoid::from_spec(&spec.groupoid)?);
        let shape = VbShape {
            objdim: per_object(&g, &spec.objdim, "objdim")?,
            arrdim: per_arrow(&g, &spec.arrdim, "arrdim")?,
            stilde: per_arrow(&g, &spec.stilde, "stilde")?,
            ttilde: per_arrow(&g, &spec.ttilde, "ttilde")?,
            utilde: per_object(&g, &spec.utilde, "utilde")?,
            inverse: per_arrow(&g, &spec.inverse, "inverse")?,
        };
        let mult = pair_table(&g, &spec.mult, "mult")?;
        VbGroupoid::new(g, shape, mult)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::q;

    /// The action groupoid of Z2 acting on ℚ by -1, with `V₁(a) = ℚ`.
    fn z2_sign_action() -> VbGroupoid {
        let g = Arc::new(FiniteGroupoid::cyclic(2));
        let e = g.arrow_id("e").unwrap();
        let sign = |a: usize| if a == e { q(1) } else { q(-1) };
        let shape = VbShape {
            objdim: vec![1],
            arrdim: vec![1, 1],
            stilde: vec![Matrix::identity(1); 2],
            ttilde: (0..2).map(|a| Matrix::scalar(1, sign(a))).collect(),
            utilde: vec![Matrix::identity(1)],
            inverse: (0..2).map(|a| Matrix::scalar(1, sign(a))).collect(),
        };
        VbGroupoid::from_fn(g, shape, |_, _, w| w.to_vec()).unwrap()
    }

    #[test]
    fn action_groupoid_of_sign_representation_is_valid() {
        let v = z2_sign_action();
        let r = validate_vb(&v);
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn corrupted_multiplication_is_caught() {
        let v = z2_sign_action();
        let bad = v.with_mult_map(3, Matrix::scalar(1, q(2)));
        let r = validate_vb(&bad);
        assert!(!r.passed());
    }

    #[test]
    fn connection_of_action_groupoid() {
        let v = z2_sign_action();
        let c = find_unital_connection(&v).unwrap();
        assert!(validate_connection(&v, &c).passed());
        assert_eq!(c.sigma, vec![Matrix::identity(1); 2]);
    }

    #[test]
    fn kernel_of_action_groupoid_is_trivial_bundle() {
        let v = z2_sign_action();
        let k = kernel_groupoid(&v).unwrap();
        assert!(validate_vb(&k).passed());
        assert_eq!(k.arrdim_at(0), 1);
        assert_eq!(k.source_kernel(0).cols(), 0);
    }

    #[test]
    fn transport_gives_isomorphic_vb() {
        let v = Arc::new(z2_sign_action());
        let (w, iso) = transport(&v, &[Matrix::scalar(1, q(3))], &[Matrix::scalar(1, q(3)), Matrix::scalar(1, q(-2))]).unwrap();
        assert!(validate_vb(&w).passed());
        assert!(validate_vb_map(&iso).passed());
        let back = iso.inverse().unwrap();
        assert!(back.compose(&iso).unwrap().is_identity());
    }

    #[test]
    fn spec_round_trip() {
        let v = z2_sign_action();
        let s = serde_json::to_string(&v.to_spec()).unwrap();
        let back = VbGroupoid::from_spec(&serde_json::from_str(&s).unwrap()).unwrap();
        assert_eq!(back, v);
    }
}
