//! 2-term representations up to homotopy and their morphisms.
//!
//! A `Ruth` over `G` is a complex `δ : E⁰ → E¹` over `G₀` with quasi-actions
//! `λ⁰, λ¹` and a curvature `Ω_{g,h} : E¹_{s h} → E⁰_{t g}`, subject to
//!
//! 1. `δ λ⁰_g = λ¹_g δ`
//! 2. `λ⁰_{gh} - λ⁰_g λ⁰_h = Ω_{g,h} δ`
//! 3. `λ¹_{gh} - λ¹_g λ¹_h = δ Ω_{g,h}`
//! 4. `λ⁰_g Ω_{h,k} - Ω_{gh,k} + Ω_{g,hk} - Ω_{g,h} λ¹_k = 0`
//!
//! together with unitality of `λ` and normalization of `Ω`.
//!
//! A morphism `(φ⁰, φ¹, μ)` with `μ_g : E¹_{s g} → E'⁰_{t g}` satisfies
//!
//! 1. `φ¹ δ = δ' φ⁰`
//! 2. `φ⁰ λ⁰_g - λ'⁰_g φ⁰ = μ_g δ`
//! 3. `φ¹ λ¹_g - λ'¹_g φ¹ = δ' μ_g`
//! 4. `φ⁰ Ω_{g,h} + μ_g λ¹_h + λ'⁰_g μ_h = μ_{gh} + Ω'_{g,h} φ¹`
//!
//! and `μ` vanishes at units.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groupoid::{validate_groupoid, FiniteGroupoid, GroupoidSpec};
use crate::linalg::Matrix;
use crate::report::Report;
use crate::twoterm::{ComplexSpec, TwoTermComplex};
use crate::vb::{arrow_table, object_table, pair_entries, pair_table, per_arrow, per_object, PairMap};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ruth {
    groupoid: Arc<FiniteGroupoid>,
    complex: Arc<TwoTermComplex>,
    lambda0: Vec<Matrix>,
    lambda1: Vec<Matrix>,
    omega: Vec<Matrix>,
}

impl Ruth {
    /// Checks that `G` is a groupoid and that every map has the right shape.
    pub fn new(
        groupoid: Arc<FiniteGroupoid>,
        complex: Arc<TwoTermComplex>,
        lambda0: Vec<Matrix>,
        lambda1: Vec<Matrix>,
        omega: Vec<Matrix>,
    ) -> Result<Self> {
        if !validate_groupoid(&groupoid).passed() {
            return Err(Error::Structure("base groupoid violates the groupoid axioms".into()));
        }
        if complex.base() != groupoid.objects() {
            return Err(Error::Structure("complex must live over the objects of the groupoid".into()));
        }
        let g = &groupoid;
        if lambda0.len() != g.num_arrows() || lambda1.len() != g.num_arrows() || omega.len() != g.pairs().len() {
            return Err(Error::Structure("structure maps have the wrong count".into()));
        }
        for a in 0..g.num_arrows() {
            let (s, t) = (g.src(a), g.tgt(a));
            if lambda0[a].shape() != (complex.dim0(t), complex.dim0(s)) {
                return Err(Error::Structure(format!("λ⁰ at {} has the wrong shape", g.arrow_name(a))));
            }
            if lambda1[a].shape() != (complex.dim1(t), complex.dim1(s)) {
                return Err(Error::Structure(format!("λ¹ at {} has the wrong shape", g.arrow_name(a))));
            }
        }
        for (p, &(a, b)) in g.pairs().iter().enumerate() {
            if omega[p].shape() != (complex.dim0(g.tgt(a)), complex.dim1(g.src(b))) {
                return Err(Error::Structure(format!("Ω at {} has the wrong shape", g.fmt_tuple(&[a, b]))));
            }
        }
        Ok(Ruth { groupoid, complex, lambda0, lambda1, omega })
    }

    /// A strict representation: `λ` given, `Ω = 0`.
    pub fn strict(groupoid: Arc<FiniteGroupoid>, complex: Arc<TwoTermComplex>, lambda0: Vec<Matrix>, lambda1: Vec<Matrix>) -> Result<Self> {
        let omega = groupoid
            .pairs()
            .iter()
            .map(|&(a, b)| Matrix::zeros(complex.dim0(groupoid.tgt(a)), complex.dim1(groupoid.src(b))))
            .collect();
        Self::new(groupoid, complex, lambda0, lambda1, omega)
    }

    pub fn groupoid(&self) -> &FiniteGroupoid {
        &self.groupoid
    }

    pub fn groupoid_arc(&self) -> &Arc<FiniteGroupoid> {
        &self.groupoid
    }

    pub fn complex(&self) -> &TwoTermComplex {
        &self.complex
    }

    pub fn complex_arc(&self) -> &Arc<TwoTermComplex> {
        &self.complex
    }

    pub fn delta(&self, x: usize) -> &Matrix {
        self.complex.diff(x)
    }

    pub fn lambda0(&self, g: usize) -> &Matrix {
        &self.lambda0[g]
    }

    pub fn lambda1(&self, g: usize) -> &Matrix {
        &self.lambda1[g]
    }

    pub fn lambda0s(&self) -> &[Matrix] {
        &self.lambda0
    }

    pub fn lambda1s(&self) -> &[Matrix] {
        &self.lambda1
    }

    pub fn omegas(&self) -> &[Matrix] {
        &self.omega
    }

    /// `Ω_{g,h}`; panics unless `(g, h)` is composable.
    pub fn omega(&self, g: usize, h: usize) -> &Matrix {
        &self.omega[self.groupoid.pair_index(g, h).expect("composable pair")]
    }

    pub fn dim0(&self, x: usize) -> usize {
        self.complex.dim0(x)
    }

    pub fn dim1(&self, x: usize) -> usize {
        self.complex.dim1(x)
    }

    pub fn is_strict(&self) -> bool {
        self.omega.iter().all(Matrix::is_zero)
    }

    /// Rebuilds with replaced components; shapes are re-checked.
    pub fn with_parts(&self, complex: TwoTermComplex, lambda0: Vec<Matrix>, lambda1: Vec<Matrix>, omega: Vec<Matrix>) -> Result<Self> {
        Self::new(self.groupoid.clone(), Arc::new(complex), lambda0, lambda1, omega)
    }

    /// Fiberwise direct sum of two representations of the same groupoid.
    pub fn direct_sum(&self, o: &Ruth) -> Result<Ruth> {
        if self.groupoid != o.groupoid {
            return Err(Error::Structure("direct sum needs equal groupoids".into()));
        }
        let c = self.complex.direct_sum(&o.complex)?;
        let bd = |a: &[Matrix], b: &[Matrix]| a.iter().zip(b).map(|(x, y)| Matrix::block_diag(x, y)).collect();
        Ruth::new(self.groupoid.clone(), Arc::new(c), bd(&self.lambda0, &o.lambda0), bd(&self.lambda1, &o.lambda1), bd(&self.omega, &o.omega))
    }
}

/// Checks unitality, normalization and the four identities; each entry
/// names the identity and the offending arrow tuple.
pub fn validate_ruth(r: &Ruth) -> Report {
    let mut rep = Report::new();
    let g = r.groupoid();
    for x in 0..g.num_objects() {
        let u = g.unit(x);
        let name = g.arrow_name(u);
        let id0 = Matrix::identity(r.dim0(x));
        if *r.lambda0(u) != id0 {
            rep.push("unitality-0", name, id0, r.lambda0(u));
        }
        let id1 = Matrix::identity(r.dim1(x));
        if *r.lambda1(u) != id1 {
            rep.push("unitality-1", name, id1, r.lambda1(u));
        }
    }
    for (p, &(a, b)) in g.pairs().iter().enumerate() {
        if (g.is_unit(a) || g.is_unit(b)) && !r.omega[p].is_zero() {
            rep.push("normalization", g.fmt_tuple(&[a, b]), "0", &r.omega[p]);
        }
    }
    for a in 0..g.num_arrows() {
        let lhs = r.delta(g.tgt(a)).mul(r.lambda0(a));
        let rhs = r.lambda1(a).mul(r.delta(g.src(a)));
        if lhs != rhs {
            rep.push("identity(1)", g.fmt_tuple(&[a]), rhs, lhs);
        }
    }
    for &(a, b) in g.pairs() {
        let ab = g.compose(a, b);
        let om = r.omega(a, b);
        let lhs = r.lambda0(ab).sub(&r.lambda0(a).mul(r.lambda0(b)));
        let rhs = om.mul(r.delta(g.src(b)));
        if lhs != rhs {
            rep.push("identity(2)", g.fmt_tuple(&[a, b]), rhs, lhs);
        }
        let lhs = r.lambda1(ab).sub(&r.lambda1(a).mul(r.lambda1(b)));
        let rhs = r.delta(g.tgt(a)).mul(om);
        if lhs != rhs {
            rep.push("identity(3)", g.fmt_tuple(&[a, b]), rhs, lhs);
        }
    }
    for &(a, b) in g.pairs() {
        for c in (0..g.num_arrows()).filter(|&c| g.src(b) == g.tgt(c)) {
            let (ab, bc) = (g.compose(a, b), g.compose(b, c));
            let v = r
                .lambda0(a)
                .mul(r.omega(b, c))
                .sub(r.omega(ab, c))
                .add(r.omega(a, bc))
                .sub(&r.omega(a, b).mul(r.lambda1(c)));
            if !v.is_zero() {
                let zero = Matrix::zeros(v.rows(), v.cols());
                rep.push("identity(4)", g.fmt_tuple(&[a, b, c]), zero, v);
            }
        }
    }
    rep
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuthMorphism {
    pub source: Arc<Ruth>,
    pub target: Arc<Ruth>,
    pub phi0: Vec<Matrix>,
    pub phi1: Vec<Matrix>,
    pub mu: Vec<Matrix>,
}

impl RuthMorphism {
    /// Checks shapes only.
    pub fn new(source: Arc<Ruth>, target: Arc<Ruth>, phi0: Vec<Matrix>, phi1: Vec<Matrix>, mu: Vec<Matrix>) -> Result<Self> {
        let g = source.groupoid();
        if g != target.groupoid() {
            return Err(Error::Structure("morphism between representations of different groupoids".into()));
        }
        if phi0.len() != g.num_objects() || phi1.len() != g.num_objects() || mu.len() != g.num_arrows() {
            return Err(Error::Structure("morphism data has the wrong count".into()));
        }
        for x in 0..g.num_objects() {
            if phi0[x].shape() != (target.dim0(x), source.dim0(x)) || phi1[x].shape() != (target.dim1(x), source.dim1(x)) {
                return Err(Error::Structure(format!("φ at {} has the wrong shape", g.object_name(x))));
            }
        }
        for a in 0..g.num_arrows() {
            if mu[a].shape() != (target.dim0(g.tgt(a)), source.dim1(g.src(a))) {
                return Err(Error::Structure(format!("μ at {} has the wrong shape", g.arrow_name(a))));
            }
        }
        Ok(RuthMorphism { source, target, phi0, phi1, mu })
    }

    pub fn identity(r: Arc<Ruth>) -> Self {
        let g = r.groupoid();
        let phi0 = (0..g.num_objects()).map(|x| Matrix::identity(r.dim0(x))).collect();
        let phi1 = (0..g.num_objects()).map(|x| Matrix::identity(r.dim1(x))).collect();
        let mu = (0..g.num_arrows()).map(|a| Matrix::zeros(r.dim0(g.tgt(a)), r.dim1(g.src(a)))).collect();
        RuthMorphism { source: r.clone(), target: r, phi0, phi1, mu }
    }

    /// Whether `φ⁰` and `φ¹` are invertible at every object.
    pub fn is_isomorphism(&self) -> bool {
        self.phi0.iter().chain(&self.phi1).all(|m| m.inverse().is_ok())
    }

    /// The inverse of an isomorphism: `((φ⁰)⁻¹, (φ¹)⁻¹, -(φ⁰)⁻¹ μ (φ¹)⁻¹)`.
    pub fn inverse(&self) -> Result<Self> {
        let g = self.source.groupoid();
        let p0 = self.phi0.iter().map(Matrix::inverse).collect::<Result<Vec<_>>>()?;
        let p1 = self.phi1.iter().map(Matrix::inverse).collect::<Result<Vec<_>>>()?;
        let mu = (0..g.num_arrows()).map(|a| p0[g.tgt(a)].mul(&self.mu[a]).mul(&p1[g.src(a)]).neg()).collect();
        RuthMorphism::new(self.target.clone(), self.source.clone(), p0, p1, mu)
    }
}

/// Checks the four morphism identities and that `μ` vanishes at units.
pub fn validate_morphism(m: &RuthMorphism) -> Report {
    let mut rep = Report::new();
    let (r, rp) = (&*m.source, &*m.target);
    let g = r.groupoid();
    for x in 0..g.num_objects() {
        let lhs = m.phi1[x].mul(r.delta(x));
        let rhs = rp.delta(x).mul(&m.phi0[x]);
        if lhs != rhs {
            rep.push("morphism(1)", g.object_name(x), rhs, lhs);
        }
    }
    for a in 0..g.num_arrows() {
        let (s, t) = (g.src(a), g.tgt(a));
        if g.is_unit(a) && !m.mu[a].is_zero() {
            rep.push("mu-unit", g.arrow_name(a), "0", &m.mu[a]);
        }
        let lhs = m.phi0[t].mul(r.lambda0(a)).sub(&rp.lambda0(a).mul(&m.phi0[s]));
        let rhs = m.mu[a].mul(r.delta(s));
        if lhs != rhs {
            rep.push("morphism(2)", g.fmt_tuple(&[a]), rhs, lhs);
        }
        let lhs = m.phi1[t].mul(r.lambda1(a)).sub(&rp.lambda1(a).mul(&m.phi1[s]));
        let rhs = rp.delta(t).mul(&m.mu[a]);
        if lhs != rhs {
            rep.push("morphism(3)", g.fmt_tuple(&[a]), rhs, lhs);
        }
    }
    for &(a, b) in g.pairs() {
        let ab = g.compose(a, b);
        let lhs = m.phi0[g.tgt(a)]
            .mul(r.omega(a, b))
            .add(&m.mu[a].mul(r.lambda1(b)))
            .add(&rp.lambda0(a).mul(&m.mu[b]));
        let rhs = m.mu[ab].add(&rp.omega(a, b).mul(&m.phi1[g.src(b)]));
        if lhs != rhs {
            rep.push("morphism(4)", g.fmt_tuple(&[a, b]), rhs, lhs);
        }
    }
    rep
}

/// `m2 ∘ m1` with `φ = φ₂φ₁` and `μ_g = φ₂⁰ μ₁_g + μ₂_g φ₁¹`.
pub fn compose_morphisms(m2: &RuthMorphism, m1: &RuthMorphism) -> Result<RuthMorphism> {
    if m1.target != m2.source {
        return Err(Error::Composition("morphisms do not compose".into()));
    }
    let g = m1.source.groupoid();
    let n = g.num_objects();
    let phi0 = (0..n).map(|x| m2.phi0[x].mul(&m1.phi0[x])).collect();
    let phi1 = (0..n).map(|x| m2.phi1[x].mul(&m1.phi1[x])).collect();
    let mu = (0..g.num_arrows())
        .map(|a| m2.phi0[g.tgt(a)].mul(&m1.mu[a]).add(&m2.mu[a].mul(&m1.phi1[g.src(a)])))
        .collect();
    RuthMorphism::new(m1.source.clone(), m2.target.clone(), phi0, phi1, mu)
}

/// Pulls `target` back along invertible `φ⁰, φ¹` and unit-vanishing `μ`,
/// solving the morphism identities for the source structure. Returns the
/// source representation and the isomorphism `source → target`.
pub fn gauge_transport(target: &Arc<Ruth>, phi0: &[Matrix], phi1: &[Matrix], mu: &[Matrix]) -> Result<(Arc<Ruth>, RuthMorphism)> {
    let t = &**target;
    let g = t.groupoid();
    let n = g.num_objects();
    if phi0.len() != n || phi1.len() != n || mu.len() != g.num_arrows() {
        return Err(Error::Structure("gauge data has the wrong count".into()));
    }
    let i0 = phi0.iter().map(Matrix::inverse).collect::<Result<Vec<_>>>()?;
    let i1 = phi1.iter().map(Matrix::inverse).collect::<Result<Vec<_>>>()?;
    for a in (0..g.num_arrows()).filter(|&a| g.is_unit(a)) {
        if !mu[a].is_zero() {
            return Err(Error::Validation(format!("μ must vanish at the unit {}", g.arrow_name(a))));
        }
    }
    for x in 0..n {
        if phi1[x].cols() != phi1[x].rows() || phi0[x].rows() != t.dim0(x) || phi1[x].rows() != t.dim1(x) {
            return Err(Error::Structure(format!("φ at {} has the wrong shape", g.object_name(x))));
        }
    }
    let delta: Vec<Matrix> = (0..n).map(|x| i1[x].mul(t.delta(x)).mul(&phi0[x])).collect();
    let complex = TwoTermComplex::new(g.objects().to_vec(), delta.clone())?;
    let lambda0: Vec<Matrix> = (0..g.num_arrows())
        .map(|a| {
            let (s, tt) = (g.src(a), g.tgt(a));
            i0[tt].mul(&t.lambda0(a).mul(&phi0[s]).add(&mu[a].mul(&delta[s])))
        })
        .collect();
    let lambda1: Vec<Matrix> = (0..g.num_arrows())
        .map(|a| {
            let (s, tt) = (g.src(a), g.tgt(a));
            i1[tt].mul(&t.lambda1(a).mul(&phi1[s]).add(&t.delta(tt).mul(&mu[a])))
        })
        .collect();
    let omega: Vec<Matrix> = g
        .pairs()
        .iter()
        .map(|&(a, b)| {
            let ab = g.compose(a, b);
            let inner = mu[ab]
                .add(&t.omega(a, b).mul(&phi1[g.src(b)]))
                .sub(&mu[a].mul(&lambda1[b]))
                .sub(&t.lambda0(a).mul(&mu[b]));
            i0[g.tgt(a)].mul(&inner)
        })
        .collect();
    let source = Arc::new(Ruth::new(t.groupoid.clone(), Arc::new(complex), lambda0, lambda1, omega)?);
    let m = RuthMorphism::new(source.clone(), target.clone(), phi0.to_vec(), phi1.to_vec(), mu.to_vec())?;
    Ok((source, m))
}

/// JSON form of a representation; the groupoid is embedded.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuthSpec {
    pub groupoid: GroupoidSpec,
    pub complex: ComplexSpec,
    pub lambda0: BTreeMap<String, Matrix>,
    pub lambda1: BTreeMap<String, Matrix>,
    pub omega: Vec<PairMap>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphismSpec {
    pub source: RuthSpec,
    pub target: RuthSpec,
    pub phi0: BTreeMap<String, Matrix>,
    pub phi1: BTreeMap<String, Matrix>,
    pub mu: BTreeMap<String, Matrix>,
}

impl Ruth {
    pub fn to_spec(&self) -> RuthSpec {
        let g = self.groupoid();
        RuthSpec {
            groupoid: g.to_spec(),
            complex: self.complex.to_spec(),
            lambda0: arrow_table(g, &self.lambda0),
            lambda1: arrow_table(g, &self.lambda1),
            omega: pair_entries(g, &self.omega),
        }
    }

    pub fn from_spec(s: &RuthSpec) -> Result<Self> {
        let g = Arc::new(FiniteGroupoid::from_spec(&s.groupoid)?);
        let c = Arc::new(TwoTermComplex::from_spec(&s.complex)?);
        let l0 = per_arrow(&g, &s.lambda0, "lambda0")?;
        let l1 = per_arrow(&g, &s.lambda1, "lambda1")?;
        let om = pair_table(&g, &s.omega, "omega")?;
        Ruth::new(g, c, l0, l1, om)
    }
}

impl RuthMorphism {
    pub fn to_spec(&self) -> MorphismSpec {
        let g = self.source.groupoid();
        MorphismSpec {
            source: self.source.to_spec(),
            target: self.target.to_spec(),
            phi0: object_table(g, &self.phi0),
            phi1: object_table(g, &self.phi1),
            mu: arrow_table(g, &self.mu),
        }
    }

    pub fn from_spec(s: &MorphismSpec) -> Result<Self> {
        let src = Arc::new(Ruth::from_spec(&s.source)?);
        let tgt = Arc::new(Ruth::from_spec(&s.target)?);
        let g = src.groupoid().clone();
        let phi0 = per_object(&g, &s.phi0, "phi0")?;
        let phi1 = per_object(&g, &s.phi1, "phi1")?;
        let mu = per_arrow(&g, &s.mu, "mu")?;
        RuthMorphism::new(src, tgt, phi0, phi1, mu)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{z2_ruth, z2_ruth_broken4};
    use crate::linalg::{q, qr};

    #[test]
    fn z2_ruth_is_valid_for_several_omegas() {
        for w in [q(0), q(1), qr(-7, 3), q(100)] {
            let r = z2_ruth(w);
            let rep = validate_ruth(&r);
            assert!(rep.passed(), "{rep}");
        }
    }

    #[test]
    fn broken_identity_four_is_located() {
        let rep = validate_ruth(&z2_ruth_broken4());
        assert_eq!(rep.failed_checks(), vec!["identity(4)"]);
        assert_eq!(rep.entries.len(), 1);
        assert_eq!(rep.entries[0].location, "(g,g,g)");
    }

    #[test]
    fn strict_action_is_valid() {
        let r = z2_ruth(q(0));
        assert!(r.is_strict());
        assert!(validate_ruth(&r).passed());
    }

    #[test]
    fn identity_morphism_is_valid() {
        let r = Arc::new(z2_ruth(q(1)));
        let id = RuthMorphism::identity(r);
        assert!(validate_morphism(&id).passed());
    }

    #[test]
    fn gauge_transport_of_z2_example() {
        let t = Arc::new(z2_ruth(q(1)));
        let g = t.groupoid();
        let (e, gg) = (g.arrow_id("e").unwrap(), g.arrow_id("g").unwrap());
        let two = Matrix::scalar(1, q(2));
        let mut mu = vec![Matrix::zeros(1, 1); 2];
        mu[gg] = Matrix::scalar(1, q(1));
        let (src, m) = gauge_transport(&t, &[two.clone()], &[two], &mu).unwrap();
        assert!(validate_ruth(&src).passed());
        assert!(validate_morphism(&m).passed());
        // δ = 0, λ unchanged, and Ω_{g,g} = (0 + 1·2 + 1 + 1) / 2 with μ_e = 0
        assert_eq!(*src.lambda0(gg), Matrix::scalar(1, q(-1)));
        assert_eq!(*src.lambda1(gg), Matrix::scalar(1, q(-1)));
        assert_eq!(*src.omega(gg, gg), Matrix::scalar(1, q(2)));
        assert!(src.omega(e, gg).is_zero());
    }

    #[test]
    fn trivial_gauge_is_identity() {
        let t = Arc::new(z2_ruth(q(1)));
        let id = Matrix::identity(1);
        let mu = vec![Matrix::zeros(1, 1); 2];
        let (src, m) = gauge_transport(&t, &[id.clone()], &[id], &mu).unwrap();
        assert_eq!(*src, *t);
        assert_eq!(m, RuthMorphism::identity(t));
    }

    #[test]
    fn singular_gauge_is_rejected() {
        let t = Arc::new(z2_ruth(q(1)));
        let z = Matrix::zeros(1, 1);
        let mu = vec![Matrix::zeros(1, 1); 2];
        assert!(matches!(gauge_transport(&t, &[z.clone()], &[z], &mu), Err(Error::NotInvertible(_))));
    }

    #[test]
    fn perturbed_mu_breaks_fourth_identity() {
        let t = Arc::new(z2_ruth(q(1)));
        let mut m = RuthMorphism::identity(t);
        let g = m.source.groupoid().arrow_id("g").unwrap();
        m.mu[g] = Matrix::scalar(1, q(1));
        let rep = validate_morphism(&m);
        assert!(rep.has_check("morphism(4)"));
        assert!(rep.entries.iter().any(|e| e.location.contains('g')));
    }

    #[test]
    fn composition_with_identity_and_inverse() {
        let t = Arc::new(z2_ruth(q(1)));
        let gg = t.groupoid().arrow_id("g").unwrap();
        let mut mu = vec![Matrix::zeros(1, 1); 2];
        mu[gg] = Matrix::scalar(1, q(3));
        let (src, m) = gauge_transport(&t, &[Matrix::scalar(1, q(5))], &[Matrix::scalar(1, q(-1))], &mu).unwrap();
        let left = compose_morphisms(&m, &RuthMorphism::identity(src.clone())).unwrap();
        assert_eq!(left, m);
        let inv = m.inverse().unwrap();
        assert!(validate_morphism(&inv).passed());
        assert_eq!(compose_morphisms(&inv, &m).unwrap(), RuthMorphism::identity(src));
    }

    #[test]
    fn spec_round_trip() {
        let r = z2_ruth(qr(1, 3));
        let s = serde_json::to_string(&r.to_spec()).unwrap();
        let back = Ruth::from_spec(&serde_json::from_str(&s).unwrap()).unwrap();
        assert_eq!(back, r);
    }
}
