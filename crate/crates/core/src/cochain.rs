//! Groupoid cochains with coefficients, the twisted differentials `D_λ` and
//! the total operator `D` of a 2-term representation.
//!
//! A cochain of degree `k` assigns to each composable `k`-tuple a vector in
//! the fiber over `t(g₁)` (over the object itself in degree 0). Faces of a
//! tuple follow [`Simplicial::face`].
//!
//! Total degree `n` is `Cⁿ(G; E⁰) ⊕ Cⁿ⁻¹(G; E¹)` and
//!
//! ```text
//! D(a, b) = (D_{λ⁰} a + Ω⋆b,  δ∘a - D_{λ¹} b),    (Ω⋆b)(g₁, g₂, …) = Ω_{g₁,g₂} b(g₃, …)
//! ```
//!
//! With these signs `D² = 0` holds exactly when the four structure
//! identities hold, and `D(ω⋆f) = (Dω)⋆f + (-1)^{|ω|} ω⋆δf`.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::groupoid::{degeneracy_positions, Simplicial};
use crate::linalg::{fmt_vector, is_zero_vector, vadd, vscale, vsub, zero_vector, Matrix, Rational, Vector};
use crate::report::Report;
use crate::ruth::{Ruth, RuthMorphism};

/// Maximum nerve degree used by default: total degree 2 checks of `D²`
/// reach groupoid degree 4.
pub const DEFAULT_MAX_DEGREE: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Layer {
    Scalar,
    E0,
    E1,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cochain {
    pub layer: Layer,
    pub degree: usize,
    pub values: Vec<Vector>,
}

/// Cochains of a representation: the nerves up to a fixed degree together
/// with the coefficient fibers.
#[derive(Clone, Debug)]
pub struct Cochains {
    ruth: Arc<Ruth>,
    simp: Simplicial,
}

impl Cochains {
    pub fn new(ruth: Arc<Ruth>, max_degree: usize) -> Self {
        let simp = Simplicial::new(ruth.groupoid_arc().clone(), max_degree);
        Cochains { ruth, simp }
    }

    pub fn ruth(&self) -> &Ruth {
        &self.ruth
    }

    pub fn simplicial(&self) -> &Simplicial {
        &self.simp
    }

    pub fn max_degree(&self) -> usize {
        self.simp.max_degree()
    }

    pub fn fiber_dim(&self, layer: Layer, x: usize) -> usize {
        match layer {
            Layer::Scalar => 1,
            Layer::E0 => self.ruth.dim0(x),
            Layer::E1 => self.ruth.dim1(x),
        }
    }

    fn check_degree(&self, k: usize) -> Result<()> {
        if k > self.max_degree() {
            return Err(Error::Degree(format!("degree {k} exceeds the maximum {}", self.max_degree())));
        }
        Ok(())
    }

    pub fn zero(&self, layer: Layer, degree: usize) -> Result<Cochain> {
        self.check_degree(degree)?;
        let values = self
            .simp
            .nerve(degree)
            .simplices()
            .iter()
            .map(|s| zero_vector(self.fiber_dim(layer, s.target)))
            .collect();
        Ok(Cochain { layer, degree, values })
    }

    /// Builds a cochain from a function of `(tuple index, fiber dimension)`.
    pub fn from_fn(&self, layer: Layer, degree: usize, mut f: impl FnMut(usize, usize) -> Vector) -> Result<Cochain> {
        self.check_degree(degree)?;
        let values = self
            .simp
            .nerve(degree)
            .simplices()
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let d = self.fiber_dim(layer, s.target);
                let v = f(i, d);
                assert_eq!(v.len(), d, "cochain value has the wrong dimension");
                v
            })
            .collect();
        Ok(Cochain { layer, degree, values })
    }

    /// All basis cochains of one layer and degree: one per tuple and fiber
    /// coordinate.
    pub fn basis(&self, layer: Layer, degree: usize) -> Result<Vec<Cochain>> {
        let z = self.zero(layer, degree)?;
        let mut out = Vec::new();
        for (i, v) in z.values.iter().enumerate() {
            for k in 0..v.len() {
                let mut c = z.clone();
                c.values[i][k] = Rational::one();
                out.push(c);
            }
        }
        Ok(out)
    }

    /// Whether `c` vanishes on every tuple containing a unit.
    pub fn is_normalized(&self, c: &Cochain) -> bool {
        let flags = degeneracy_positions(self.simp.groupoid(), self.simp.nerve(c.degree));
        flags.iter().zip(&c.values).all(|(&deg, v)| !deg || is_zero_vector(v))
    }

    fn trivial_lambda(&self) -> Vec<Matrix> {
        vec![Matrix::identity(1); self.simp.groupoid().num_arrows()]
    }

    /// The groupoid coboundary of a scalar cochain:
    /// `(δf)(g₁…g_{k+1}) = f(g₂…) + Σ (-1)^i f(…g_i g_{i+1}…) + (-1)^{k+1} f(g₁…g_k)`,
    /// in degree 0 `(δf)(g) = f(s g) - f(t g)`.
    pub fn coboundary(&self, f: &Cochain) -> Result<Cochain> {
        if f.layer != Layer::Scalar {
            return Err(Error::Structure("coboundary takes a scalar cochain".into()));
        }
        self.twisted_differential(&self.trivial_lambda(), f)
    }

    /// `D_λ ω` for a quasi-action `λ` on the layer of `ω`.
    pub fn twisted_differential(&self, lambda: &[Matrix], w: &Cochain) -> Result<Cochain> {
        let k = w.degree;
        self.check_degree(k + 1)?;
        let layer = w.layer;
        self.from_fn(layer, k + 1, |i, _| {
            let s = self.simp.simplex(k + 1, i);
            let mut acc = lambda[s.arrows[0]].apply(&w.values[self.simp.face(k + 1, i, 0)]);
            for j in 1..=k + 1 {
                let v = &w.values[self.simp.face(k + 1, i, j)];
                acc = if j % 2 == 0 { vadd(&acc, v) } else { vsub(&acc, v) };
            }
            acc
        })
    }

    /// `(ω⋆f)(g₁…g_{p+q}) = f(g_{p+1}…g_{p+q}) · ω(g₁…g_p)`.
    pub fn star(&self, w: &Cochain, f: &Cochain) -> Result<Cochain> {
        if f.layer != Layer::Scalar {
            return Err(Error::Structure("the right factor of ⋆ must be scalar".into()));
        }
        let (p, q) = (w.degree, f.degree);
        self.check_degree(p + q)?;
        self.from_fn(w.layer, p + q, |i, _| {
            let head = &w.values[self.simp.sub(p + q, i, 0, p)];
            let tail = &f.values[self.simp.sub(p + q, i, p, p + q)];
            vscale(head, &tail[0])
        })
    }

    /// `(Ω⋆b)(g₁, g₂, g₃…) = Ω_{g₁,g₂} b(g₃…)`, an `E⁰` cochain two degrees up.
    pub fn omega_insert(&self, b: &Cochain) -> Result<Cochain> {
        let k = b.degree;
        self.check_degree(k + 2)?;
        self.from_fn(Layer::E0, k + 2, |i, _| {
            let s = self.simp.simplex(k + 2, i);
            let tail = &b.values[self.simp.sub(k + 2, i, 2, k + 2)];
            self.ruth.omega(s.arrows[0], s.arrows[1]).apply(tail)
        })
    }

    /// Postcomposition with `δ`.
    pub fn delta_post(&self, a: &Cochain) -> Result<Cochain> {
        let k = a.degree;
        self.from_fn(Layer::E1, k, |i, _| {
            let t = self.simp.simplex(k, i).target;
            self.ruth.delta(t).apply(&a.values[i])
        })
    }

    pub fn total_zero(&self, n: usize) -> Result<TotalCochain> {
        Ok(TotalCochain {
            degree: n,
            e0: self.zero(Layer::E0, n)?,
            e1: if n == 0 { None } else { Some(self.zero(Layer::E1, n - 1)?) },
        })
    }

    /// All basis elements of total degree `n`.
    pub fn total_basis(&self, n: usize) -> Result<Vec<TotalCochain>> {
        let z = self.total_zero(n)?;
        let mut out: Vec<TotalCochain> = self
            .basis(Layer::E0, n)?
            .into_iter()
            .map(|a| TotalCochain { e0: a, ..z.clone() })
            .collect();
        if n > 0 {
            for b in self.basis(Layer::E1, n - 1)? {
                out.push(TotalCochain { e1: Some(b), ..z.clone() });
            }
        }
        Ok(out)
    }

    /// `D` evaluated directly from the component formulas.
    pub fn total_operator(&self, c: &TotalCochain) -> Result<TotalCochain> {
        let n = c.degree;
        self.check_degree(n + 1)?;
        let mut e0 = self.twisted_differential(self.ruth.lambda0s(), &c.e0)?;
        let mut e1 = self.delta_post(&c.e0)?;
        if let Some(b) = &c.e1 {
            let ob = self.omega_insert(b)?;
            e0 = add_cochains(&e0, &ob);
            let db = self.twisted_differential(self.ruth.lambda1s(), b)?;
            e1 = sub_cochains(&e1, &db);
        }
        Ok(TotalCochain { degree: n + 1, e0, e1: Some(e1) })
    }

    /// `ω⋆f` for a total cochain.
    pub fn total_star(&self, w: &TotalCochain, f: &Cochain) -> Result<TotalCochain> {
        Ok(TotalCochain {
            degree: w.degree + f.degree,
            e0: self.star(&w.e0, f)?,
            e1: match &w.e1 {
                Some(b) => Some(self.star(b, f)?),
                None if f.degree > 0 => Some(self.zero(Layer::E1, w.degree + f.degree - 1)?),
                None => None,
            },
        })
    }

    fn total_blocks(&self, n: usize) -> Vec<(Layer, usize, usize)> {
        let mut blocks: Vec<(Layer, usize, usize)> = self
            .simp
            .nerve(n)
            .simplices()
            .iter()
            .enumerate()
            .map(|(i, s)| (Layer::E0, i, self.ruth.dim0(s.target)))
            .collect();
        if n > 0 {
            blocks.extend(
                self.simp
                    .nerve(n - 1)
                    .simplices()
                    .iter()
                    .enumerate()
                    .map(|(i, s)| (Layer::E1, i, self.ruth.dim1(s.target))),
            );
        }
        blocks
    }

    /// `D` from total degree `n` to `n + 1` as a block-sparse matrix; block
    /// indices list the `E⁰` tuples of degree `n` first, then the `E¹`
    /// tuples of degree `n - 1`.
    pub fn total_operator_matrix(&self, n: usize) -> Result<BlockOp> {
        self.check_degree(n + 1)?;
        let r = &*self.ruth;
        let (rows, cols) = (self.total_blocks(n + 1), self.total_blocks(n));
        let off_in = self.simp.nerve(n).len();
        let off_out = self.simp.nerve(n + 1).len();
        let mut op = BlockOp::new(&rows, &cols);
        for tau in 0..self.simp.nerve(n + 1).len() {
            let s = self.simp.simplex(n + 1, tau);
            let t = s.target;
            let g1 = s.arrows[0];
            op.add(tau, self.simp.face(n + 1, tau, 0), r.lambda0(g1));
            for j in 1..=n + 1 {
                let sign = if j % 2 == 0 { Rational::one() } else { -Rational::one() };
                op.add(tau, self.simp.face(n + 1, tau, j), &Matrix::scalar(r.dim0(t), sign));
            }
            if n >= 1 {
                let tail = self.simp.sub(n + 1, tau, 2, n + 1);
                op.add(tau, off_in + tail, r.omega(g1, s.arrows[1]));
            }
        }
        for rho in 0..self.simp.nerve(n).len() {
            let s = self.simp.simplex(n, rho);
            let t = s.target;
            op.add(off_out + rho, rho, r.delta(t));
            if n >= 1 {
                op.add(off_out + rho, off_in + self.simp.face(n, rho, 0), &r.lambda1(s.arrows[0]).neg());
                for j in 1..=n {
                    let sign = if j % 2 == 0 { -Rational::one() } else { Rational::one() };
                    op.add(off_out + rho, off_in + self.simp.face(n, rho, j), &Matrix::scalar(r.dim1(t), sign));
                }
            }
        }
        Ok(op)
    }

    /// Checks `D_{n+1} D_n = 0` for every total degree `n ≤ max_total`,
    /// reporting each nonzero block.
    pub fn check_d_squared(&self, max_total: usize) -> Result<Report> {
        let mut rep = Report::new();
        let g = self.simp.groupoid();
        for n in 0..=max_total {
            let d0 = self.total_operator_matrix(n)?;
            let d1 = self.total_operator_matrix(n + 1)?;
            let prod = d1.compose(&d0);
            let out = self.total_blocks(n + 2);
            let inp = self.total_blocks(n);
            let name = |deg: usize, blocks: &[(Layer, usize, usize)], i: usize| {
                let (layer, k, _) = blocks[i];
                let d = if layer == Layer::E0 { deg } else { deg - 1 };
                let s = self.simp.simplex(d, k);
                let tuple = if d == 0 { g.object_name(s.target).to_string() } else { g.fmt_tuple(&s.arrows) };
                format!("{layer:?}{tuple}")
            };
            for ((i, j), m) in prod.blocks() {
                if !m.is_zero() {
                    rep.push(
                        "d-squared",
                        format!("total degree {n}: {} <- {}", name(n + 2, &out, *i), name(n, &inp, *j)),
                        "0",
                        m,
                    );
                }
            }
            rep.count("blocks-checked", prod.blocks().len() as u64);
        }
        Ok(rep)
    }

    /// Checks `D(ω⋆f) = (Dω)⋆f + (-1)^{|ω|} ω⋆δf` on every sample.
    pub fn check_leibniz(&self, samples: &[(TotalCochain, Cochain)]) -> Result<Report> {
        let mut rep = Report::new();
        for (k, (w, f)) in samples.iter().enumerate() {
            let lhs = self.total_operator(&self.total_star(w, f)?)?;
            let a = self.total_star(&self.total_operator(w)?, f)?;
            let b = self.total_star(w, &self.coboundary(f)?)?;
            let rhs = if w.degree % 2 == 0 { a.add(&b) } else { a.sub(&b) };
            if lhs != rhs {
                rep.push("leibniz", format!("sample {k}"), rhs.describe(), lhs.describe());
            }
        }
        Ok(rep)
    }
}

/// `Φ(a, b) = (φ⁰a - μ⋆b, φ¹b)` with `(μ⋆b)(g₁, g₂…) = μ_{g₁} b(g₂…)`, the
/// cochain map induced by a morphism; it intertwines the total operators
/// exactly when the morphism identities hold.
pub fn morphism_operator_matrix(src: &Cochains, tgt: &Cochains, m: &RuthMorphism, n: usize) -> Result<BlockOp> {
    src.check_degree(n)?;
    let simp = &src.simp;
    let rows = tgt.total_blocks(n);
    let cols = src.total_blocks(n);
    let off = simp.nerve(n).len();
    let mut op = BlockOp::new(&rows, &cols);
    for sigma in 0..simp.nerve(n).len() {
        let s = simp.simplex(n, sigma);
        op.add(sigma, sigma, &m.phi0[s.target]);
        if n >= 1 {
            op.add(sigma, off + simp.sub(n, sigma, 1, n), &m.mu[s.arrows[0]].neg());
        }
    }
    if n >= 1 {
        for rho in 0..simp.nerve(n - 1).len() {
            let t = simp.simplex(n - 1, rho).target;
            op.add(off + rho, off + rho, &m.phi1[t]);
        }
    }
    Ok(op)
}

/// Checks `D' Φ = Φ D` from total degree `n` to `n + 1` for `n ≤ max_total`.
pub fn check_morphism_operator(m: &RuthMorphism, max_total: usize) -> Result<Report> {
    let src = Cochains::new(m.source.clone(), max_total + 1);
    let tgt = Cochains::new(m.target.clone(), max_total + 1);
    let mut rep = Report::new();
    for n in 0..=max_total {
        let left = tgt.total_operator_matrix(n)?.compose(&morphism_operator_matrix(&src, &tgt, m, n)?);
        let right = morphism_operator_matrix(&src, &tgt, m, n + 1)?.compose(&src.total_operator_matrix(n)?);
        let diff = left.sub(&right);
        for ((i, j), b) in diff.blocks() {
            if !b.is_zero() {
                rep.push("chain-map", format!("total degree {n}: block ({i},{j})"), "0", b);
            }
        }
    }
    Ok(rep)
}

/// An element of total degree `n`: an `E⁰` cochain of degree `n` and, for
/// `n > 0`, an `E¹` cochain of degree `n - 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TotalCochain {
    pub degree: usize,
    pub e0: Cochain,
    pub e1: Option<Cochain>,
}

impl TotalCochain {
    pub fn add(&self, o: &Self) -> Self {
        TotalCochain {
            degree: self.degree,
            e0: add_cochains(&self.e0, &o.e0),
            e1: self.e1.as_ref().zip(o.e1.as_ref()).map(|(a, b)| add_cochains(a, b)),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        TotalCochain {
            degree: self.degree,
            e0: sub_cochains(&self.e0, &o.e0),
            e1: self.e1.as_ref().zip(o.e1.as_ref()).map(|(a, b)| sub_cochains(a, b)),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.e0.values.iter().all(|v| is_zero_vector(v))
            && self.e1.as_ref().is_none_or(|b| b.values.iter().all(|v| is_zero_vector(v)))
    }

    fn describe(&self) -> String {
        let show = |c: &Cochain| c.values.iter().map(|v| fmt_vector(v)).collect::<Vec<_>>().join(" ");
        match &self.e1 {
            Some(b) => format!("E0[{}] E1[{}]", show(&self.e0), show(b)),
            None => format!("E0[{}]", show(&self.e0)),
        }
    }
}

pub fn add_cochains(a: &Cochain, b: &Cochain) -> Cochain {
    Cochain { layer: a.layer, degree: a.degree, values: a.values.iter().zip(&b.values).map(|(x, y)| vadd(x, y)).collect() }
}

pub fn sub_cochains(a: &Cochain, b: &Cochain) -> Cochain {
    Cochain { layer: a.layer, degree: a.degree, values: a.values.iter().zip(&b.values).map(|(x, y)| vsub(x, y)).collect() }
}

/// A block-sparse matrix with fixed block sizes.
#[derive(Clone, Debug)]
pub struct BlockOp {
    row_dims: Vec<usize>,
    col_dims: Vec<usize>,
    blocks: BTreeMap<(usize, usize), Matrix>,
}

impl BlockOp {
    fn new(rows: &[(Layer, usize, usize)], cols: &[(Layer, usize, usize)]) -> Self {
        BlockOp {
            row_dims: rows.iter().map(|b| b.2).collect(),
            col_dims: cols.iter().map(|b| b.2).collect(),
            blocks: BTreeMap::new(),
        }
    }

    fn add(&mut self, i: usize, j: usize, m: &Matrix) {
        assert_eq!(m.shape(), (self.row_dims[i], self.col_dims[j]), "block shape");
        match self.blocks.get_mut(&(i, j)) {
            Some(b) => *b = b.add(m),
            None => {
                self.blocks.insert((i, j), m.clone());
            }
        }
    }

    pub fn blocks(&self) -> &BTreeMap<(usize, usize), Matrix> {
        &self.blocks
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &BlockOp) -> BlockOp {
        assert_eq!(self.col_dims, first.row_dims, "block structures do not compose");
        let mut by_row: HashMap<usize, Vec<(usize, &Matrix)>> = HashMap::new();
        for (&(i, k), m) in &first.blocks {
            by_row.entry(i).or_default().push((k, m));
        }
        let mut out = BlockOp { row_dims: self.row_dims.clone(), col_dims: first.col_dims.clone(), blocks: BTreeMap::new() };
        for (&(j, i), a) in &self.blocks {
            if let Some(list) = by_row.get(&i) {
                for &(k, b) in list {
                    out.add(j, k, &a.mul(b));
                }
            }
        }
        out
    }

    pub fn sub(&self, o: &BlockOp) -> BlockOp {
        let mut out = self.clone();
        for (&(i, j), m) in &o.blocks {
            out.add(i, j, &m.neg());
        }
        out
    }

    /// Applies the operator to a vector given block by block.
    pub fn apply(&self, v: &[Vector]) -> Vec<Vector> {
        let mut out: Vec<Vector> = self.row_dims.iter().map(|&d| zero_vector(d)).collect();
        for (&(i, j), m) in &self.blocks {
            out[i] = vadd(&out[i], &m.apply(&v[j]));
        }
        out
    }
}

impl TotalCochain {
    /// The block vector in the layout of [`Cochains::total_operator_matrix`].
    pub fn to_blocks(&self) -> Vec<Vector> {
        let mut out = self.e0.values.clone();
        if let Some(b) = &self.e1 {
            out.extend(b.values.iter().cloned());
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{z2_ruth, z2_ruth_broken4};
    use crate::linalg::q;

    fn z2(w: i64) -> Cochains {
        Cochains::new(Arc::new(z2_ruth(q(w))), DEFAULT_MAX_DEGREE)
    }

    fn scalar(c: &Cochains, degree: usize, vals: &[i64]) -> Cochain {
        c.from_fn(Layer::Scalar, degree, |i, _| vec![q(vals[i])]).unwrap()
    }

    #[test]
    fn coboundary_of_constant_is_zero() {
        let c = z2(1);
        let f = scalar(&c, 0, &[5]);
        let df = c.coboundary(&f).unwrap();
        assert!(df.values.iter().all(|v| is_zero_vector(v)));
    }

    #[test]
    fn coboundary_example_on_z2() {
        let c = z2(1);
        // arrows sorted: e, g
        let f = scalar(&c, 1, &[0, 1]);
        let df = c.coboundary(&f).unwrap();
        let gg = c.simplicial().nerve(2).position(&[1, 1]).unwrap();
        assert_eq!(df.values[gg], vec![q(2)]);
    }

    #[test]
    fn coboundary_squares_to_zero() {
        let c = z2(0);
        for d in 0..=2 {
            for f in c.basis(Layer::Scalar, d).unwrap() {
                let dd = c.coboundary(&c.coboundary(&f).unwrap()).unwrap();
                assert!(dd.values.iter().all(|v| is_zero_vector(v)));
            }
        }
    }

    #[test]
    fn coboundary_degree_overflow() {
        let c = z2(0);
        let f = c.zero(Layer::Scalar, DEFAULT_MAX_DEGREE).unwrap();
        assert!(matches!(c.coboundary(&f), Err(Error::Degree(_))));
    }

    #[test]
    fn star_examples() {
        let c = z2(1);
        let w = c.from_fn(Layer::E0, 1, |i, _| vec![q(i as i64)]).unwrap();
        let f = scalar(&c, 1, &[0, 2]);
        let wf = c.star(&w, &f).unwrap();
        let gg = c.simplicial().nerve(2).position(&[1, 1]).unwrap();
        assert_eq!(wf.values[gg], vec![q(2)]);
        let one = scalar(&c, 0, &[1]);
        assert_eq!(c.star(&w, &one).unwrap(), w);
        let s = c.from_fn(Layer::E1, 0, |_, _| vec![q(3)]).unwrap();
        assert_eq!(c.star(&s, &scalar(&c, 0, &[4])).unwrap().values, vec![vec![q(12)]]);
    }

    #[test]
    fn twisted_differential_examples() {
        let c = z2(1);
        let w = c.from_fn(Layer::E0, 0, |_, _| vec![q(1)]).unwrap();
        let d = c.twisted_differential(c.ruth().lambda0s(), &w).unwrap();
        assert_eq!(d.values[1], vec![q(-2)]);
        // trivial coefficients reduce to the coboundary
        let f = scalar(&c, 1, &[3, -1]);
        let triv = vec![Matrix::identity(1); 2];
        assert_eq!(c.twisted_differential(&triv, &f).unwrap().values, c.coboundary(&f).unwrap().values);
        // a genuine action squares to zero
        for d0 in 0..=1 {
            for b in c.basis(Layer::E0, d0).unwrap() {
                let l = c.ruth().lambda0s();
                let dd = c.twisted_differential(l, &c.twisted_differential(l, &b).unwrap()).unwrap();
                assert!(dd.values.iter().all(|v| is_zero_vector(v)));
            }
        }
    }

    #[test]
    fn d_squared_vanishes_for_z2_ruths() {
        for w in [0, 1] {
            let rep = z2(w).check_d_squared(2).unwrap();
            assert!(rep.passed(), "{rep}");
        }
    }

    #[test]
    fn d_squared_detects_broken_identity() {
        let c = Cochains::new(Arc::new(z2_ruth_broken4()), DEFAULT_MAX_DEGREE);
        assert!(!c.check_d_squared(2).unwrap().passed());
    }

    #[test]
    fn sparse_and_direct_operator_agree() {
        let c = z2(1);
        for n in 0..=2 {
            let m = c.total_operator_matrix(n).unwrap();
            for b in c.total_basis(n).unwrap() {
                let direct = c.total_operator(&b).unwrap();
                assert_eq!(m.apply(&b.to_blocks()), direct.to_blocks());
            }
        }
    }

    #[test]
    fn leibniz_on_z2() {
        let c = z2(1);
        let mut samples = Vec::new();
        for n in 0..=1 {
            for w in c.total_basis(n).unwrap() {
                for f in c.basis(Layer::Scalar, 1).unwrap() {
                    samples.push((w.clone(), f));
                }
                samples.push((w.clone(), scalar(&c, 0, &[1])));
            }
        }
        let rep = c.check_leibniz(&samples).unwrap();
        assert!(rep.passed(), "{rep}");
        let zero = c.total_zero(1).unwrap();
        let f = scalar(&c, 1, &[2, 5]);
        assert!(c.check_leibniz(&[(zero, f)]).unwrap().passed());
    }

    #[test]
    fn normalized_cochains_stay_normalized() {
        let c = z2(1);
        let a = c.from_fn(Layer::E0, 1, |i, _| vec![if i == 1 { q(1) } else { q(0) }]).unwrap();
        assert!(c.is_normalized(&a));
        let t = TotalCochain { degree: 1, e0: a, e1: Some(c.zero(Layer::E1, 0).unwrap()) };
        let d = c.total_operator(&t).unwrap();
        assert!(c.is_normalized(&d.e0));
    }

    #[test]
    fn gauge_morphism_commutes_with_d() {
        let target = Arc::new(crate::fixtures::pair_strict_ruth());
        let phi0 = vec![Matrix::scalar(1, q(3)), Matrix::identity(1)];
        let phi1 = vec![Matrix::identity(2), Matrix::from_ints(&[&[1, 0], &[1, 1]])];
        let mu = vec![Matrix::zeros(1, 2), Matrix::zeros(1, 2), Matrix::from_ints(&[&[1, 2]]), Matrix::from_ints(&[&[0, 1]])];
        let (_, m) = crate::ruth::gauge_transport(&target, &phi0, &phi1, &mu).unwrap();
        assert!(check_morphism_operator(&m, 2).unwrap().passed());
        let mut bad = m.clone();
        bad.mu[2] = Matrix::from_ints(&[&[5, 2]]);
        assert!(!check_morphism_operator(&bad, 2).unwrap().passed());
    }

    #[test]
    fn identity_morphism_commutes_with_d() {
        let r = Arc::new(z2_ruth(q(1)));
        let id = RuthMorphism::identity(r);
        assert!(check_morphism_operator(&id, 2).unwrap().passed());
    }
}
