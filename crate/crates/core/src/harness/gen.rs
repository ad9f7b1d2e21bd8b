//! Seeded random instances: groupoids built from pair groupoids times
//! cyclic groups, strict representations conjugated by random bases, gauge
//! transports, scrambled VB-groupoids and weak representations, chain maps,
//! homotopies and equivariant maps.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::groupoid::{ArrowSpec, FiniteGroupoid, GroupoidSpec};
use crate::linalg::{q, qr, Matrix, Rational, Vector};
use crate::ruth::{gauge_transport, Ruth, RuthMorphism};
use crate::semidirect::semidirect;
use crate::twoterm::{ChainHomotopy, ChainMap, TwoTermComplex};
use crate::vb::{transport, Connection, VbGroupoid, VbMap};
use crate::wrep::{compose_equivariant, equivariant_from_morphism, inverse_equivariant, transport_wrep, EquivariantMap, WeakRepresentation};

/// Size bounds for generated instances.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bounds {
    pub max_objects: usize,
    pub max_arrows: usize,
    pub max_dim: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds { max_objects: 4, max_arrows: 12, max_dim: 3 }
    }
}

/// The generator for trial `trial` of a run seeded with `seed`; streams
/// are independent, so trials can run in any order.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

pub fn random_int(rng: &mut impl Rng, range: i64) -> Rational {
    q(rng.gen_range(-range..=range))
}

/// A nonzero perturbation: `±1`, `±2` or `±1/2`.
pub fn random_nonzero(rng: &mut impl Rng) -> Rational {
    let v = [q(1), q(2), qr(1, 2)][rng.gen_range(0..3)].clone();
    if rng.gen_bool(0.5) {
        -v
    } else {
        v
    }
}

pub fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize, range: i64) -> Matrix {
    Matrix::from_fn(rows, cols, |_, _| random_int(rng, range))
}

pub fn random_vector(rng: &mut impl Rng, n: usize, range: i64) -> Vector {
    (0..n).map(|_| random_int(rng, range)).collect()
}

/// `L·D·U` with unitriangular `L`, `U` and a diagonal from `{±1, ±2, ±1/2}`.
pub fn random_invertible(rng: &mut impl Rng, n: usize) -> Matrix {
    let lower = Matrix::from_fn(n, n, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Equal => q(1),
        std::cmp::Ordering::Greater => random_int(rng, 1),
        std::cmp::Ordering::Less => q(0),
    });
    let upper = Matrix::from_fn(n, n, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Equal => q(1),
        std::cmp::Ordering::Less => random_int(rng, 1),
        std::cmp::Ordering::Greater => q(0),
    });
    let diag = Matrix::from_fn(n, n, |i, j| if i == j { random_nonzero(rng) } else { q(0) });
    lower.mul(&diag).mul(&upper)
}

/// One connected block `pair(n) × Z/m` of a generated groupoid.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Block {
    pub objects: usize,
    pub order: usize,
}

/// A generated groupoid with its block structure; arrow `(i ← j, k)` of
/// block `b` is the pair arrow `j → i` times `g^k`.
#[derive(Clone, Debug)]
pub struct Family {
    pub groupoid: Arc<FiniteGroupoid>,
    pub blocks: Vec<Block>,
    /// Per object: `(block, index in block)`.
    pub object_at: Vec<(usize, usize)>,
    /// Per arrow: `(block, i, j, k)`.
    pub arrow_at: Vec<(usize, usize, usize, usize)>,
}

const LETTERS: [char; 8] = ['A', 'B', 'C', 'D', 'E', 'F', 'G', 'H'];

/// The disjoint union of `pair(n_b) × Z/m_b` over the given blocks.
pub fn family(blocks: &[Block]) -> Result<Family> {
    let mut spec = GroupoidSpec {
        objects: vec![],
        arrows: vec![],
        units: BTreeMap::new(),
        compose: vec![],
        inverse: BTreeMap::new(),
    };
    let obj = |b: usize, i: usize| format!("{}{i}", LETTERS[b]);
    let arr = |b: usize, i: usize, j: usize, k: usize| format!("{}{i}{j}g{k}", LETTERS[b]);
    for (b, blk) in blocks.iter().enumerate() {
        let (n, m) = (blk.objects, blk.order);
        for i in 0..n {
            spec.objects.push(obj(b, i));
            spec.units.insert(obj(b, i), arr(b, i, i, 0));
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..m {
                    spec.arrows.push(ArrowSpec { id: arr(b, i, j, k), src: obj(b, j), tgt: obj(b, i) });
                    spec.inverse.insert(arr(b, i, j, k), arr(b, j, i, (m - k) % m));
                    for l in 0..n {
                        for k2 in 0..m {
                            spec.compose.push([arr(b, i, j, k), arr(b, j, l, k2), arr(b, i, l, (k + k2) % m)]);
                        }
                    }
                }
            }
        }
    }
    let g = Arc::new(FiniteGroupoid::from_spec(&spec)?);
    let mut object_at = vec![(0, 0); g.num_objects()];
    let mut arrow_at = vec![(0, 0, 0, 0); g.num_arrows()];
    for (b, blk) in blocks.iter().enumerate() {
        for i in 0..blk.objects {
            object_at[g.object_id(&obj(b, i)).expect("object")] = (b, i);
            for j in 0..blk.objects {
                for k in 0..blk.order {
                    arrow_at[g.arrow_id(&arr(b, i, j, k)).expect("arrow")] = (b, i, j, k);
                }
            }
        }
    }
    Ok(Family { groupoid: g, blocks: blocks.to_vec(), object_at, arrow_at })
}

/// Random blocks within the bounds.
pub fn random_family(rng: &mut impl Rng, bounds: Bounds) -> Family {
    let mut blocks = Vec::new();
    let (mut objs, mut arrs) = (bounds.max_objects.max(1), bounds.max_arrows.max(1));
    let wanted = rng.gen_range(1..=2);
    while blocks.len() < wanted && objs >= 1 && arrs >= 1 && blocks.len() < LETTERS.len() {
        let max_n = (1..=objs.min(3)).filter(|n| n * n <= arrs).max().unwrap_or(1);
        let n = rng.gen_range(1..=max_n);
        let max_m = (arrs / (n * n)).clamp(1, 6);
        let m = rng.gen_range(1..=max_m);
        blocks.push(Block { objects: n, order: m });
        objs -= n;
        arrs = arrs.saturating_sub(n * n * m);
    }
    family(&blocks).expect("generated blocks form a groupoid")
}

/// A strict representation: per block, a sum of elementary complexes
/// (`ℚ → 0`, `0 → ℚ`, `ℚ → ℚ` by the identity) with a sign character of the
/// cyclic factor, conjugated by a random basis at every object.
pub fn random_strict_ruth(rng: &mut impl Rng, fam: &Family, bounds: Bounds) -> Ruth {
    let g = &fam.groupoid;
    let d = bounds.max_dim.max(1);
    struct Shape {
        delta: Matrix,
        p0: Matrix,
        p1: Matrix,
    }
    let shapes: Vec<Shape> = fam
        .blocks
        .iter()
        .map(|blk| loop {
            let c = rng.gen_range(0..=d);
            let a = rng.gen_range(0..=d - c);
            let b = rng.gen_range(0..=d - c);
            if a + b + c == 0 {
                continue;
            }
            let sign = |rng: &mut dyn rand::RngCore| {
                if blk.order % 2 == 0 && rng.gen_bool(0.5) {
                    q(-1)
                } else {
                    q(1)
                }
            };
            let ca: Vec<Rational> = (0..a).map(|_| sign(rng)).collect();
            let cb: Vec<Rational> = (0..b).map(|_| sign(rng)).collect();
            let cc: Vec<Rational> = (0..c).map(|_| sign(rng)).collect();
            let diag = |v: Vec<Rational>| Matrix::from_fn(v.len(), v.len(), |i, j| if i == j { v[i].clone() } else { q(0) });
            let delta = Matrix::from_fn(b + c, a + c, |i, j| q((i >= b && j >= a && i - b == j - a) as i64));
            let p0 = diag(ca.iter().chain(&cc).cloned().collect());
            let p1 = diag(cb.iter().chain(&cc).cloned().collect());
            break Shape { delta, p0, p1 };
        })
        .collect();
    let q0: Vec<Matrix> = fam.object_at.iter().map(|&(b, _)| random_invertible(rng, shapes[b].delta.cols())).collect();
    let q1: Vec<Matrix> = fam.object_at.iter().map(|&(b, _)| random_invertible(rng, shapes[b].delta.rows())).collect();
    let i0: Vec<Matrix> = q0.iter().map(|m| m.inverse().expect("invertible")).collect();
    let i1: Vec<Matrix> = q1.iter().map(|m| m.inverse().expect("invertible")).collect();
    let diffs = (0..g.num_objects()).map(|x| q1[x].mul(&shapes[fam.object_at[x].0].delta).mul(&i0[x])).collect();
    let complex = Arc::new(TwoTermComplex::new(g.objects().to_vec(), diffs).expect("shapes agree"));
    let power = |p: &Matrix, k: usize| (0..k).fold(Matrix::identity(p.rows()), |acc, _| acc.mul(p));
    let mut l0 = Vec::with_capacity(g.num_arrows());
    let mut l1 = Vec::with_capacity(g.num_arrows());
    for a in 0..g.num_arrows() {
        let (b, _, _, k) = fam.arrow_at[a];
        let (s, t) = (g.src(a), g.tgt(a));
        l0.push(q0[t].mul(&power(&shapes[b].p0, k)).mul(&i0[s]));
        l1.push(q1[t].mul(&power(&shapes[b].p1, k)).mul(&i1[s]));
    }
    Ruth::strict(g.clone(), complex, l0, l1).expect("well-shaped")
}

/// A random gauge `(φ⁰, φ¹, μ)` into `target`; returns the morphism from
/// the transported source.
pub fn random_gauge(rng: &mut impl Rng, target: &Arc<Ruth>) -> RuthMorphism {
    let g = target.groupoid();
    let phi0: Vec<Matrix> = (0..g.num_objects()).map(|x| random_invertible(rng, target.dim0(x))).collect();
    let phi1: Vec<Matrix> = (0..g.num_objects()).map(|x| random_invertible(rng, target.dim1(x))).collect();
    let mu: Vec<Matrix> = (0..g.num_arrows())
        .map(|a| {
            let (r, c) = (target.dim0(g.tgt(a)), target.dim1(g.src(a)));
            if g.is_unit(a) {
                Matrix::zeros(r, c)
            } else {
                random_matrix(rng, r, c, 2)
            }
        })
        .collect();
    gauge_transport(target, &phi0, &phi1, &mu).expect("invertible gauge").1
}

/// A random non-strict representation: a gauge transport of a random
/// strict one.
pub fn random_ruth(rng: &mut impl Rng, bounds: Bounds) -> Arc<Ruth> {
    let fam = random_family(rng, bounds);
    let strict = Arc::new(random_strict_ruth(rng, &fam, bounds));
    random_gauge(rng, &strict).source
}

/// `semidirect(r)` transported along random invertible fiber maps, with the
/// isomorphism from `semidirect(r)`.
pub fn random_vb(rng: &mut impl Rng, r: &Ruth) -> Result<(Arc<VbGroupoid>, VbMap)> {
    let v = Arc::new(semidirect(r)?);
    let g = v.base();
    let p: Vec<Matrix> = (0..g.num_objects()).map(|x| random_invertible(rng, v.objdim(x))).collect();
    let q: Vec<Matrix> = (0..g.num_arrows()).map(|a| random_invertible(rng, v.arrdim(a))).collect();
    transport(&v, &p, &q)
}

/// `c` shifted by kernel-valued maps at non-unit arrows; still a unital
/// connection, and different from `c` whenever some source kernel is
/// nonzero.
pub fn perturbed_connection(rng: &mut impl Rng, v: &VbGroupoid, c: &Connection) -> Connection {
    let g = v.base();
    let sigma = (0..g.num_arrows())
        .map(|a| {
            if g.is_unit(a) {
                return c.sigma[a].clone();
            }
            let k = v.stilde(a).kernel_basis();
            let mut shift = random_matrix(rng, k.cols(), v.objdim(g.src(a)), 2);
            if shift.is_zero() && shift.rows() > 0 && shift.cols() > 0 {
                shift.set(0, 0, q(1));
            }
            c.sigma[a].add(&k.mul(&shift))
        })
        .collect();
    Connection { sigma }
}

/// A complex over `names` with random dimensions and differential.
pub fn random_complex(rng: &mut impl Rng, names: Vec<String>, bounds: Bounds) -> TwoTermComplex {
    let diffs = names
        .iter()
        .map(|_| {
            let (d0, d1) = (rng.gen_range(0..=bounds.max_dim), rng.gen_range(0..=bounds.max_dim));
            match rng.gen_range(0..4) {
                0 => Matrix::zeros(d1, d0),
                1 => {
                    // rank at most one
                    let u = random_matrix(rng, d1, 1, 2);
                    u.mul(&random_matrix(rng, 1, d0, 2))
                }
                _ => random_matrix(rng, d1, d0, 2),
            }
        })
        .collect();
    TwoTermComplex::new(names, diffs).expect("shapes agree")
}

/// A random point of the space of chain maps `c → d` covering `basemap`.
pub fn random_chain_map(rng: &mut impl Rng, c: &Arc<TwoTermComplex>, d: &Arc<TwoTermComplex>, basemap: Vec<usize>) -> ChainMap {
    let mut f0 = Vec::with_capacity(c.len());
    let mut f1 = Vec::with_capacity(c.len());
    for (x, &y) in basemap.iter().enumerate() {
        let (a0, a1, b0, b1) = (c.dim0(x), c.dim1(x), d.dim0(y), d.dim1(y));
        let (n0, n1) = (b0 * a0, b1 * a1);
        // unknowns vec(f⁰) ++ vec(f¹), row-major; equations δ_D f⁰ - f¹ δ_C = 0
        let unpack = |v: &[Rational]| (Matrix::from_vec(b0, a0, v[..n0].to_vec()), Matrix::from_vec(b1, a1, v[n0..].to_vec()));
        let cols: Vec<Vector> = (0..n0 + n1)
            .map(|k| {
                let (m0, m1) = unpack(&crate::linalg::unit_vector(n0 + n1, k));
                d.diff(y).mul(&m0).sub(&m1.mul(c.diff(x))).entries().to_vec()
            })
            .collect();
        let eq = Matrix::from_columns(b1 * a0, &cols);
        let kernel = eq.kernel_basis();
        let coeffs = random_vector(rng, kernel.cols(), 2);
        let (m0, m1) = unpack(&kernel.apply(&coeffs));
        f0.push(m0);
        f1.push(m1);
    }
    ChainMap::new(c.clone(), d.clone(), basemap, f0, f1).expect("solutions are chain maps")
}

/// A random homotopy out of `f`: `Ω` random, target `f + (Ωδ, δΩ)`.
pub fn random_homotopy(rng: &mut impl Rng, f: &ChainMap) -> ChainHomotopy {
    let (c, d) = (&f.source, &f.target);
    let omega: Vec<Matrix> = (0..c.len()).map(|x| random_matrix(rng, d.dim0(f.basemap[x]), c.dim1(x), 2)).collect();
    let f0 = (0..c.len()).map(|x| f.f0[x].add(&omega[x].mul(c.diff(x)))).collect();
    let f1 = (0..c.len()).map(|x| f.f1[x].add(&d.diff(f.basemap[x]).mul(&omega[x]))).collect();
    let to = ChainMap::new(c.clone(), d.clone(), f.basemap.clone(), f0, f1).expect("homotopic maps are chain maps");
    ChainHomotopy::new(f.clone(), to, omega).expect("valid homotopy")
}

/// Names `p0, p1, ...`.
pub fn point_names(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

/// A random map of finite sets `{0..n} → {0..m}`.
pub fn random_basemap(rng: &mut impl Rng, n: usize, m: usize) -> Vec<usize> {
    (0..n).map(|_| rng.gen_range(0..m)).collect()
}

/// `w` transported along random invertible fiber maps, with the strict
/// isomorphism from `w`.
pub fn random_scramble(rng: &mut impl Rng, w: &Arc<WeakRepresentation>) -> Result<(Arc<WeakRepresentation>, EquivariantMap)> {
    let b = &w.bundle;
    let t0: Vec<Matrix> = (0..b.num_objects()).map(|x| random_invertible(rng, b.objdim(x))).collect();
    let t1: Vec<Matrix> = (0..b.num_objects()).map(|x| random_invertible(rng, b.arrdim_at(x))).collect();
    transport_wrep(w, &t0, &t1)
}

/// A random equivariant map between scrambled images: `T' ∘ Φ(m) ∘ T⁻¹`
/// for a random gauge morphism `m`.
pub fn random_equivariant(rng: &mut impl Rng, bounds: Bounds) -> Result<EquivariantMap> {
    let r = random_ruth(rng, bounds);
    let m = random_gauge(rng, &r);
    let e = equivariant_from_morphism(&m)?;
    let (_, ts) = random_scramble(rng, &e.source)?;
    let (_, tt) = random_scramble(rng, &e.target)?;
    compose_equivariant(&tt, &compose_equivariant(&e, &inverse_equivariant(&ts)?)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid::validate_groupoid;
    use crate::ruth::{validate_morphism, validate_ruth};
    use crate::vb::{validate_connection, validate_vb, validate_vb_map};
    use crate::wrep::validate_equivariant;

    #[test]
    fn families_are_groupoids_within_bounds() {
        for t in 0..30 {
            let mut rng = trial_rng(7, t);
            let fam = random_family(&mut rng, Bounds::default());
            let g = &fam.groupoid;
            assert!(validate_groupoid(g).passed());
            assert!(g.num_objects() <= 4 && g.num_arrows() <= 12, "{} {}", g.num_objects(), g.num_arrows());
        }
    }

    #[test]
    fn generated_instances_are_valid() {
        for t in 0..20 {
            let mut rng = trial_rng(11, t);
            let b = Bounds::default();
            let fam = random_family(&mut rng, b);
            let s = Arc::new(random_strict_ruth(&mut rng, &fam, b));
            assert!(validate_ruth(&s).passed());
            let m = random_gauge(&mut rng, &s);
            assert!(validate_ruth(&m.source).passed());
            assert!(validate_morphism(&m).passed());
            let (v, iso) = random_vb(&mut rng, &m.source).unwrap();
            assert!(validate_vb(&v).passed());
            assert!(validate_vb_map(&iso).passed());
            let c = crate::vb::find_unital_connection(&v).unwrap();
            assert!(validate_connection(&v, &perturbed_connection(&mut rng, &v, &c)).passed());
        }
    }

    #[test]
    fn random_equivariant_maps_are_valid() {
        for t in 0..10 {
            let e = random_equivariant(&mut trial_rng(3, t), Bounds::default()).unwrap();
            let rep = validate_equivariant(&e);
            assert!(rep.passed(), "{rep}");
        }
    }

    #[test]
    fn same_seed_same_instance() {
        let a = random_ruth(&mut trial_rng(5, 2), Bounds::default());
        let b = random_ruth(&mut trial_rng(5, 2), Bounds::default());
        assert_eq!(a, b);
        assert_ne!(a, random_ruth(&mut trial_rng(5, 3), Bounds::default()));
    }

    #[test]
    fn invertible_matrices_invert() {
        let mut rng = trial_rng(0, 0);
        for n in 0..4 {
            assert!(random_invertible(&mut rng, n).inverse().is_ok());
        }
    }
}
