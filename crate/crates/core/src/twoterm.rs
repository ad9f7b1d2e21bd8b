//! 2-term complexes of vector bundles over a finite set, chain maps, chain
//! homotopies, and the 2-functor Φ to linear groupoid bundles with its
//! inverse.
//!
//! A homotopy `Ω : f ⇒ g` satisfies `δ_D Ω = g¹ - f¹` and `Ω δ_C = g⁰ - f⁰`.
//! The sum groupoid of `C⁰ → C¹` has objects `C¹` and arrows `(c₀, c₁)` from
//! `c₁` to `δc₀ + c₁`; arrow coordinates are always ordered `(c₀, c₁)`.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groupoid::FiniteGroupoid;
use crate::linalg::Matrix;
use crate::report::Report;
use crate::vb::{BundleTransformation, LinearGroupoidBundle, VbGroupoid, VbMap, VbShape};

/// `δ_x : C⁰_x → C¹_x` for every `x` in a finite base set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoTermComplex {
    base: Vec<String>,
    diff: Vec<Matrix>,
}

impl TwoTermComplex {
    /// The base must be sorted and free of duplicates; `diff[x]` has shape
    /// `dim1(x) × dim0(x)`.
    pub fn new(base: Vec<String>, diff: Vec<Matrix>) -> Result<Self> {
        if base.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Structure("complex base must be sorted without duplicates".into()));
        }
        if base.len() != diff.len() {
            return Err(Error::Structure("one differential per base point is required".into()));
        }
        Ok(TwoTermComplex { base, diff })
    }

    pub fn zero(base: Vec<String>) -> Result<Self> {
        let diff = vec![Matrix::zeros(0, 0); base.len()];
        Self::new(base, diff)
    }

    pub fn base(&self) -> &[String] {
        &self.base
    }

    pub fn len(&self) -> usize {
        self.base.len()
    }

    pub fn is_empty(&self) -> bool {
        self.base.is_empty()
    }

    pub fn dim0(&self, x: usize) -> usize {
        self.diff[x].cols()
    }

    pub fn dim1(&self, x: usize) -> usize {
        self.diff[x].rows()
    }

    pub fn diff(&self, x: usize) -> &Matrix {
        &self.diff[x]
    }

    pub fn diffs(&self) -> &[Matrix] {
        &self.diff
    }

    /// The complex pulled back along `map : new base → self.base`.
    pub fn pullback(&self, names: Vec<String>, map: &[usize]) -> Result<Self> {
        Self::new(names, map.iter().map(|&x| self.diff[x].clone()).collect())
    }

    /// Fiberwise direct sum over the same base.
    pub fn direct_sum(&self, o: &Self) -> Result<Self> {
        if self.base != o.base {
            return Err(Error::Structure("direct sum needs equal bases".into()));
        }
        let diff = self.diff.iter().zip(&o.diff).map(|(a, b)| Matrix::block_diag(a, b)).collect();
        Self::new(self.base.clone(), diff)
    }

    pub fn to_spec(&self) -> ComplexSpec {
        let table = |f: &dyn Fn(usize) -> usize| self.base.iter().enumerate().map(|(i, x)| (x.clone(), f(i))).collect();
        ComplexSpec {
            base: self.base.clone(),
            dims0: table(&|i| self.dim0(i)),
            dims1: table(&|i| self.dim1(i)),
            diff: self.base.iter().cloned().zip(self.diff.iter().cloned()).collect(),
        }
    }

    pub fn from_spec(s: &ComplexSpec) -> Result<Self> {
        let mut base = s.base.clone();
        base.sort();
        let mut diff = Vec::with_capacity(base.len());
        for x in &base {
            let d = s.diff.get(x).ok_or_else(|| Error::Structure(format!("no differential at {x:?}")))?;
            let (d0, d1) = (s.dims0.get(x), s.dims1.get(x));
            if d0 != Some(&d.cols()) || d1 != Some(&d.rows()) {
                return Err(Error::Structure(format!("dimensions at {x:?} disagree with the differential")));
            }
            diff.push(d.clone());
        }
        Self::new(base, diff)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexSpec {
    pub base: Vec<String>,
    pub dims0: BTreeMap<String, usize>,
    pub dims1: BTreeMap<String, usize>,
    pub diff: BTreeMap<String, Matrix>,
}

/// A chain map covering `basemap : M → N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainMap {
    pub source: Arc<TwoTermComplex>,
    pub target: Arc<TwoTermComplex>,
    pub basemap: Vec<usize>,
    pub f0: Vec<Matrix>,
    pub f1: Vec<Matrix>,
}

impl ChainMap {
    /// Checks shapes and the chain-map square at every base point.
    pub fn new(
        source: Arc<TwoTermComplex>,
        target: Arc<TwoTermComplex>,
        basemap: Vec<usize>,
        f0: Vec<Matrix>,
        f1: Vec<Matrix>,
    ) -> Result<Self> {
        let m = Self::new_unchecked(source, target, basemap, f0, f1)?;
        let r = m.check();
        if !r.passed() {
            return Err(Error::Validation(format!("not a chain map: {}", r.entries[0].location)));
        }
        Ok(m)
    }

    /// Checks shapes only.
    pub fn new_unchecked(
        source: Arc<TwoTermComplex>,
        target: Arc<TwoTermComplex>,
        basemap: Vec<usize>,
        f0: Vec<Matrix>,
        f1: Vec<Matrix>,
    ) -> Result<Self> {
        let n = source.len();
        if basemap.len() != n || f0.len() != n || f1.len() != n {
            return Err(Error::Structure("chain map data has the wrong length".into()));
        }
        for x in 0..n {
            let y = basemap[x];
            if y >= target.len() {
                return Err(Error::Structure("base map points outside the target".into()));
            }
            if f0[x].shape() != (target.dim0(y), source.dim0(x)) || f1[x].shape() != (target.dim1(y), source.dim1(x)) {
                return Err(Error::Structure(format!("chain map at {} has the wrong shape", source.base()[x])));
            }
        }
        Ok(ChainMap { source, target, basemap, f0, f1 })
    }

    pub fn check(&self) -> Report {
        let mut r = Report::new();
        for x in 0..self.source.len() {
            let lhs = self.f1[x].mul(self.source.diff(x));
            let rhs = self.target.diff(self.basemap[x]).mul(&self.f0[x]);
            if lhs != rhs {
                r.push("chain-map", &self.source.base()[x], rhs, lhs);
            }
        }
        r
    }

    pub fn identity(c: Arc<TwoTermComplex>) -> Self {
        let n = c.len();
        let f0 = (0..n).map(|x| Matrix::identity(c.dim0(x))).collect();
        let f1 = (0..n).map(|x| Matrix::identity(c.dim1(x))).collect();
        ChainMap { source: c.clone(), target: c, basemap: (0..n).collect(), f0, f1 }
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &ChainMap) -> Result<ChainMap> {
        if first.target != self.source {
            return Err(Error::Composition("chain maps do not compose".into()));
        }
        let n = first.source.len();
        let basemap: Vec<usize> = first.basemap.iter().map(|&y| self.basemap[y]).collect();
        let f0 = (0..n).map(|x| self.f0[first.basemap[x]].mul(&first.f0[x])).collect();
        let f1 = (0..n).map(|x| self.f1[first.basemap[x]].mul(&first.f1[x])).collect();
        Ok(ChainMap { source: first.source.clone(), target: self.target.clone(), basemap, f0, f1 })
    }

    fn parallel(&self, o: &ChainMap) -> bool {
        self.source == o.source && self.target == o.target && self.basemap == o.basemap
    }
}

/// A chain homotopy `omega : from ⇒ to`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainHomotopy {
    pub from: ChainMap,
    pub to: ChainMap,
    /// Per source point `x`: `C¹_x → D⁰_{b(x)}`.
    pub omega: Vec<Matrix>,
}

impl ChainHomotopy {
    /// Checks shapes and both homotopy equations.
    pub fn new(from: ChainMap, to: ChainMap, omega: Vec<Matrix>) -> Result<Self> {
        let h = Self::new_unchecked(from, to, omega)?;
        let r = h.check();
        if !r.passed() {
            let e = &r.entries[0];
            return Err(Error::Validation(format!("not a homotopy: {} at {}", e.check, e.location)));
        }
        Ok(h)
    }

    /// Checks shapes only.
    pub fn new_unchecked(from: ChainMap, to: ChainMap, omega: Vec<Matrix>) -> Result<Self> {
        if !from.parallel(&to) {
            return Err(Error::Composition("homotopy between non-parallel chain maps".into()));
        }
        let (c, d) = (&from.source, &from.target);
        if omega.len() != c.len() {
            return Err(Error::Structure("homotopy data has the wrong length".into()));
        }
        for x in 0..c.len() {
            if omega[x].shape() != (d.dim0(from.basemap[x]), c.dim1(x)) {
                return Err(Error::Structure(format!("homotopy at {} has the wrong shape", c.base()[x])));
            }
        }
        Ok(ChainHomotopy { from, to, omega })
    }

    pub fn check(&self) -> Report {
        let mut r = Report::new();
        let (c, d) = (&self.from.source, &self.from.target);
        for x in 0..c.len() {
            let y = self.from.basemap[x];
            let lhs = d.diff(y).mul(&self.omega[x]);
            let rhs = self.to.f1[x].sub(&self.from.f1[x]);
            if lhs != rhs {
                r.push("homotopy-1", &c.base()[x], rhs, lhs);
            }
            let lhs = self.omega[x].mul(c.diff(x));
            let rhs = self.to.f0[x].sub(&self.from.f0[x]);
            if lhs != rhs {
                r.push("homotopy-0", &c.base()[x], rhs, lhs);
            }
        }
        r
    }

    /// The zero homotopy `f ⇒ f`.
    pub fn identity(f: ChainMap) -> Self {
        let (c, d) = (&f.source, &f.target);
        let omega = (0..c.len()).map(|x| Matrix::zeros(d.dim0(f.basemap[x]), c.dim1(x))).collect();
        ChainHomotopy { from: f.clone(), to: f, omega }
    }

    pub fn is_zero(&self) -> bool {
        self.omega.iter().all(Matrix::is_zero)
    }
}

/// Vertical composite `a` then `b`: components add.
pub fn vcompose(a: &ChainHomotopy, b: &ChainHomotopy) -> Result<ChainHomotopy> {
    if a.to != b.from {
        return Err(Error::Composition("vertical composite needs a.to = b.from".into()));
    }
    let omega = a.omega.iter().zip(&b.omega).map(|(x, y)| x.add(y)).collect();
    Ok(ChainHomotopy { from: a.from.clone(), to: b.to.clone(), omega })
}

/// Horizontal composite of `psi : f ⇒ g` (C → D) and `omega : k ⇒ l`
/// (D → E), a homotopy `k∘f ⇒ l∘g` with components `k⁰Ψ + Ωg¹`.
pub fn hcompose(psi: &ChainHomotopy, omega: &ChainHomotopy) -> Result<ChainHomotopy> {
    let (f, g) = (&psi.from, &psi.to);
    let (k, l) = (&omega.from, &omega.to);
    if f.target != k.source {
        return Err(Error::Composition("horizontal composite needs matching middle complexes".into()));
    }
    let from = k.compose(f)?;
    let to = l.compose(g)?;
    let comps = (0..f.source.len())
        .map(|x| {
            let y = f.basemap[x];
            k.f0[y].mul(&psi.omega[x]).add(&omega.omega[y].mul(&g.f1[x]))
        })
        .collect();
    ChainHomotopy::new_unchecked(from, to, comps)
}

/// The interchange law for `a1 : f ⇒ g`, `a2 : g ⇒ h` (C → D) and
/// `b1 : k ⇒ l`, `b2 : l ⇒ m` (D → E):
/// `(a2·a1) * (b2·b1) = (a2*b2)·(a1*b1)`.
///
/// Every input must satisfy the homotopy equations; otherwise the call
/// fails instead of answering.
pub fn check_interchange(a1: &ChainHomotopy, a2: &ChainHomotopy, b1: &ChainHomotopy, b2: &ChainHomotopy) -> Result<bool> {
    for (name, h) in [("a1", a1), ("a2", a2), ("b1", b1), ("b2", b2)] {
        if !h.check().passed() || !h.from.check().passed() || !h.to.check().passed() {
            return Err(Error::Validation(format!("{name} is not a chain homotopy")));
        }
    }
    let left = hcompose(&vcompose(a1, a2)?, &vcompose(b1, b2)?)?;
    let right = vcompose(&hcompose(a1, b1)?, &hcompose(a2, b2)?)?;
    Ok(left == right)
}

fn discrete_base(c: &TwoTermComplex) -> Arc<FiniteGroupoid> {
    Arc::new(FiniteGroupoid::discrete(c.base()))
}

/// The sum groupoid of `c`, fiber by fiber.
pub fn phi_object(c: &TwoTermComplex) -> LinearGroupoidBundle {
    let n = c.len();
    let block = |top: [Matrix; 2], bottom: [Matrix; 2]| top[0].hstack(&top[1]).vstack(&bottom[0].hstack(&bottom[1]));
    let shape = VbShape {
        objdim: (0..n).map(|x| c.dim1(x)).collect(),
        arrdim: (0..n).map(|x| c.dim0(x) + c.dim1(x)).collect(),
        stilde: (0..n).map(|x| Matrix::zeros(c.dim1(x), c.dim0(x)).hstack(&Matrix::identity(c.dim1(x)))).collect(),
        ttilde: (0..n).map(|x| c.diff(x).hstack(&Matrix::identity(c.dim1(x)))).collect(),
        utilde: (0..n).map(|x| Matrix::zeros(c.dim0(x), c.dim1(x)).vstack(&Matrix::identity(c.dim1(x)))).collect(),
        inverse: (0..n)
            .map(|x| {
                let (d0, d1) = (c.dim0(x), c.dim1(x));
                block(
                    [Matrix::identity(d0).neg(), Matrix::zeros(d0, d1)],
                    [c.diff(x).clone(), Matrix::identity(d1)],
                )
            })
            .collect(),
    };
    // (c₀, c₁)·(c₀', c₁') = (c₀ + c₀', c₁')
    let mult = |p: usize| {
        let (d0, d1) = (c.dim0(p), c.dim1(p));
        let top = Matrix::identity(d0)
            .hstack(&Matrix::zeros(d0, d1))
            .hstack(&Matrix::identity(d0))
            .hstack(&Matrix::zeros(d0, d1));
        let bottom = Matrix::zeros(d1, 2 * d0 + d1).hstack(&Matrix::identity(d1));
        top.vstack(&bottom)
    };
    let v = VbGroupoid::from_linear(discrete_base(c), shape, mult).expect("sum groupoid shapes agree");
    LinearGroupoidBundle::new(v).expect("discrete base")
}

/// `f¹` on objects and `f⁰ ⊕ f¹` on arrows.
pub fn phi_onemorphism(f: &ChainMap) -> VbMap {
    let src = Arc::new(phi_object(&f.source).into_inner());
    let tgt = Arc::new(phi_object(&f.target).into_inner());
    let f1 = (0..f.source.len()).map(|x| Matrix::block_diag(&f.f0[x], &f.f1[x])).collect();
    VbMap::new(src, tgt, f.basemap.clone(), f.basemap.clone(), f.f1.clone(), f1).expect("shapes agree")
}

/// `c ↦ (Ω c, f¹ c)`: the arrow from `f¹c` to `g¹c` given by the homotopy.
pub fn phi_twomorphism(h: &ChainHomotopy) -> BundleTransformation {
    let components = (0..h.from.source.len()).map(|x| h.omega[x].vstack(&h.from.f1[x])).collect();
    BundleTransformation { from: phi_onemorphism(&h.from), to: phi_onemorphism(&h.to), components }
}

/// Splits `v` into the complex `ker s̃ → V₀` (differential `t̃` on the
/// kernel) and the isomorphism `phi_object(complex) → v` given on arrows by
/// `(c₀, c₁) ↦ K c₀ + ũ c₁` with `K` the canonical kernel basis.
pub fn split_bundle(v: &LinearGroupoidBundle) -> Result<(TwoTermComplex, VbMap)> {
    let n = v.num_objects();
    let kernels: Vec<Matrix> = (0..n).map(|x| v.source_kernel(x)).collect();
    let diff = (0..n).map(|x| v.t_at(x).mul(&kernels[x])).collect();
    let c = TwoTermComplex::new(v.base().objects().to_vec(), diff)?;
    let f0 = (0..n).map(|x| Matrix::identity(v.objdim(x))).collect();
    let f1 = (0..n).map(|x| kernels[x].hstack(v.utilde(x))).collect();
    let src = Arc::new(phi_object(&c).into_inner());
    let iso = VbMap::over_identity(src, Arc::new(v.as_vb().clone()), f0, f1)?;
    Ok((c, iso))
}

/// The complex whose sum groupoid is exactly `v`.
fn complex_of_image(v: &VbGroupoid) -> Result<TwoTermComplex> {
    let b = LinearGroupoidBundle::new(v.clone()).map_err(|e| Error::NotInduced(e.to_string()))?;
    let (c, iso) = split_bundle(&b)?;
    if !iso.is_identity() || phi_object(&c).as_vb() != v {
        return Err(Error::NotInduced("bundle is not a sum groupoid".into()));
    }
    Ok(c)
}

/// The blocks of `F` on arrows, `[[w, x], [y, z]]` in `(c₀, c₁)` order.
fn four_blocks(m: &Matrix, d0: usize, c0: usize) -> [Matrix; 4] {
    [
        m.block(0, d0, 0, c0),
        m.block(0, d0, c0, m.cols()),
        m.block(d0, m.rows(), 0, c0),
        m.block(d0, m.rows(), c0, m.cols()),
    ]
}

/// Recovers the chain map `(w, z)` from a functor between sum groupoids
/// whose arrow blocks are `[[w, x], [y, z]]`; fails unless `x = 0`, `y = 0`
/// and `z` agrees with the object map.
pub fn extract_chain_map(f: &VbMap) -> Result<ChainMap> {
    let c = Arc::new(complex_of_image(&f.source)?);
    let d = Arc::new(complex_of_image(&f.target)?);
    if f.arrmap != f.objmap {
        return Err(Error::NotInduced("base map is not a map of sets".into()));
    }
    let mut f0 = Vec::with_capacity(c.len());
    let mut f1 = Vec::with_capacity(c.len());
    for x in 0..c.len() {
        let y = f.objmap[x];
        let [w, xb, yb, z] = four_blocks(&f.f1[x], d.dim0(y), c.dim0(x));
        let at = &c.base()[x];
        if !xb.is_zero() {
            return Err(Error::NotInduced(format!("off-diagonal block C¹ → D⁰ is nonzero at {at}")));
        }
        if !yb.is_zero() {
            return Err(Error::NotInduced(format!("off-diagonal block C⁰ → D¹ is nonzero at {at}")));
        }
        if z != f.f0[x] {
            return Err(Error::NotInduced(format!("arrow block differs from the object map at {at}")));
        }
        f0.push(w);
        f1.push(z);
    }
    ChainMap::new(c, d, f.objmap.clone(), f0, f1).map_err(|e| Error::NotInduced(e.to_string()))
}

/// Recovers the homotopy from a transformation `c ↦ (ᾱ c, f¹ c)` between
/// functors of sum groupoids.
pub fn extract_homotopy(a: &BundleTransformation) -> Result<ChainHomotopy> {
    let from = extract_chain_map(&a.from)?;
    let to = extract_chain_map(&a.to)?;
    let mut omega = Vec::with_capacity(a.components.len());
    for (x, comp) in a.components.iter().enumerate() {
        let d0 = from.target.dim0(from.basemap[x]);
        if comp.rows() < d0 {
            return Err(Error::NotInduced("component has the wrong shape".into()));
        }
        let first = comp.block(d0, comp.rows(), 0, comp.cols());
        if first != from.f1[x] {
            return Err(Error::NotInduced(format!("object component differs from f¹ at {}", from.source.base()[x])));
        }
        omega.push(comp.block(0, d0, 0, comp.cols()));
    }
    ChainHomotopy::new(from, to, omega).map_err(|e| Error::NotInduced(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{q, Rational};
    use crate::vb::{validate_transformation, validate_vb, validate_vb_map};

    fn point(d: Matrix) -> Arc<TwoTermComplex> {
        Arc::new(TwoTermComplex::new(vec!["p".into()], vec![d]).unwrap())
    }

    fn m1(n: i64) -> Matrix {
        Matrix::scalar(1, q(n))
    }

    fn map(c: &Arc<TwoTermComplex>, d: &Arc<TwoTermComplex>, f0: Matrix, f1: Matrix) -> ChainMap {
        ChainMap::new(c.clone(), d.clone(), vec![0], vec![f0], vec![f1]).unwrap()
    }

    #[test]
    fn vertical_composition_adds() {
        let c = point(m1(0));
        let f = map(&c, &c, m1(1), m1(1));
        let a = ChainHomotopy::new(f.clone(), f.clone(), vec![m1(1)]).unwrap();
        let b = ChainHomotopy::new(f.clone(), f.clone(), vec![m1(2)]).unwrap();
        assert_eq!(vcompose(&a, &b).unwrap().omega, vec![m1(3)]);
        let z = ChainHomotopy::identity(f.clone());
        assert_eq!(vcompose(&a, &z).unwrap(), a);
        let neg = ChainHomotopy::new(f.clone(), f, vec![m1(-1)]).unwrap();
        assert!(vcompose(&a, &neg).unwrap().is_zero());
    }

    #[test]
    fn vertical_composition_checks_boundaries() {
        let c = point(m1(0));
        let f = map(&c, &c, m1(1), m1(1));
        let g = map(&c, &c, m1(2), m1(2));
        let a = ChainHomotopy::identity(f);
        let b = ChainHomotopy::identity(g);
        assert!(matches!(vcompose(&a, &b), Err(Error::Composition(_))));
    }

    #[test]
    fn horizontal_composition_formula() {
        // all differentials zero so any maps are chain maps and any Ω is a
        // homotopy between maps with equal components
        let c = point(m1(0));
        let f = map(&c, &c, m1(1), m1(7));
        let psi = ChainHomotopy::new_unchecked(f.clone(), f.clone(), vec![m1(3)]).unwrap();
        let k = map(&c, &c, m1(2), m1(1));
        let om = ChainHomotopy::new_unchecked(k.clone(), k, vec![m1(5)]).unwrap();
        assert_eq!(hcompose(&psi, &om).unwrap().omega, vec![m1(41)]);
        let zero = ChainHomotopy::identity(f.clone());
        let w = hcompose(&zero, &om).unwrap();
        assert_eq!(w.omega, vec![m1(35)]);
        let zz = hcompose(&zero, &ChainHomotopy::identity(f)).unwrap();
        assert!(zz.is_zero());
    }

    #[test]
    fn interchange_holds_and_refuses_corrupt_input() {
        let c = point(m1(1));
        let f = map(&c, &c, m1(1), m1(1));
        let g = map(&c, &c, m1(3), m1(3));
        let h = map(&c, &c, m1(4), m1(4));
        let a1 = ChainHomotopy::new(f.clone(), g.clone(), vec![m1(2)]).unwrap();
        let a2 = ChainHomotopy::new(g.clone(), h.clone(), vec![m1(1)]).unwrap();
        let b1 = ChainHomotopy::new(g.clone(), h.clone(), vec![m1(1)]).unwrap();
        let b2 = ChainHomotopy::new(h.clone(), f.clone(), vec![m1(-3)]).unwrap();
        assert!(check_interchange(&a1, &a2, &b1, &b2).unwrap());
        let zeros: Vec<_> = [&f, &f, &f, &f].iter().map(|m| ChainHomotopy::identity((*m).clone())).collect();
        assert!(check_interchange(&zeros[0], &zeros[1], &zeros[2], &zeros[3]).unwrap());
        let bad = ChainHomotopy::new_unchecked(f.clone(), g, vec![m1(5)]).unwrap();
        assert!(matches!(check_interchange(&bad, &a2, &b1, &b2), Err(Error::Validation(_))));
    }

    #[test]
    fn sum_groupoid_with_zero_differential() {
        let c = point(m1(0));
        let b = phi_object(&c);
        assert!(validate_vb(&b).passed());
        assert_eq!(b.arrdim_at(0), 2);
        assert_eq!(b.s_at(0), b.t_at(0));
    }

    #[test]
    fn sum_groupoid_with_identity_differential() {
        let c = point(m1(1));
        let b = phi_object(&c);
        assert!(validate_vb(&b).passed());
        let arrow = vec![q(1), q(0)];
        assert_eq!(b.s(0, &arrow), vec![q(0)]);
        assert_eq!(b.t(0, &arrow), vec![q(1)]);
    }

    #[test]
    fn zero_complex_gives_trivial_groupoids() {
        let c = TwoTermComplex::zero(vec!["a".into(), "b".into()]).unwrap();
        let b = phi_object(&c);
        assert!(validate_vb(&b).passed());
        assert_eq!(b.arrdim_at(1), 0);
        let (back, iso) = split_bundle(&b).unwrap();
        assert_eq!(back, c);
        assert!(iso.is_identity());
    }

    #[test]
    fn onemorphism_is_diagonal_and_multiplicative() {
        let c = point(m1(0));
        let f = map(&c, &c, m1(2), m1(3));
        let fm = phi_onemorphism(&f);
        assert_eq!(fm.f1[0], Matrix::from_ints(&[&[2, 0], &[0, 3]]));
        assert!(validate_vb_map(&fm).passed());
        let id = phi_onemorphism(&ChainMap::identity(c.clone()));
        assert!(id.is_identity());
        let zero = phi_onemorphism(&map(&c, &c, m1(0), m1(0)));
        assert!(zero.f1[0].is_zero());
    }

    #[test]
    fn twomorphism_evaluation_and_naturality() {
        let c = point(m1(0));
        let f = map(&c, &c, m1(2), m1(3));
        let h = ChainHomotopy::new(f.clone(), f.clone(), vec![m1(5)]).unwrap();
        let t = phi_twomorphism(&h);
        assert_eq!(t.components[0].apply(&[q(1)]), vec![q(5), q(3)]);
        assert!(validate_transformation(&t).passed());
        let unit = phi_twomorphism(&ChainHomotopy::identity(f));
        assert_eq!(unit.components[0], Matrix::from_ints(&[&[0], &[3]]));
    }

    #[test]
    fn split_recovers_scrambled_complex() {
        let c = point(m1(1));
        let b = Arc::new(phi_object(&c).into_inner());
        let p = vec![m1(2)];
        let qm = vec![Matrix::from_ints(&[&[1, 1], &[0, 1]])];
        let (w, _) = crate::vb::transport(&b, &p, &qm).unwrap();
        let wb = LinearGroupoidBundle::new((*w).clone()).unwrap();
        let (c2, iso) = split_bundle(&wb).unwrap();
        assert!(validate_vb_map(&iso).passed());
        assert!(!iso.is_identity());
        assert!(iso.is_isomorphism());
        assert_eq!((c2.dim0(0), c2.dim1(0)), (1, 1));
        assert!(!c2.diff(0).is_zero());
    }

    #[test]
    fn extraction_inverts_phi() {
        let c = point(Matrix::from_ints(&[&[1, 0]]));
        let d = point(Matrix::from_ints(&[&[1]]));
        let f = map(&c, &d, Matrix::from_ints(&[&[1, 0]]), m1(1));
        assert_eq!(extract_chain_map(&phi_onemorphism(&f)).unwrap(), f);
        let g = map(&c, &d, Matrix::from_ints(&[&[2, 0]]), m1(2));
        let h = ChainHomotopy::new(f, g, vec![m1(1)]).unwrap();
        assert_eq!(extract_homotopy(&phi_twomorphism(&h)).unwrap(), h);
        let id = VbMap::identity(Arc::new(phi_object(&c).into_inner()));
        assert_eq!(extract_chain_map(&id).unwrap(), ChainMap::identity(c));
    }

    #[test]
    fn nonzero_off_diagonal_block_is_not_induced() {
        let c = point(m1(0));
        let f = map(&c, &c, m1(1), m1(1));
        let mut fm = phi_onemorphism(&f);
        // y-block: C⁰ → D¹
        fm.f1[0].set(1, 0, Rational::one());
        assert!(matches!(extract_chain_map(&fm), Err(Error::NotInduced(_))));
        assert!(!validate_vb_map(&fm).passed());
    }
}
