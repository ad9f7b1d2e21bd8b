//! Round-trip pipelines: each lap builds instances, runs a chain of
//! conversions and validates the isomorphism witness that closes it.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};
use crate::harness::gen::{
    perturbed_connection, point_names, random_basemap, random_chain_map, random_complex, random_equivariant,
    random_gauge, random_homotopy, random_ruth, random_scramble, random_vb, trial_rng, Bounds,
};
use crate::harness::{merge_trial, run_trials};
use crate::report::Report;
use crate::ruth::{compose_morphisms, validate_morphism, validate_ruth, Ruth};
use crate::semidirect::{psi_between, psi_inverse, psi_morphism, semidirect};
use crate::twoterm::{
    check_interchange, extract_chain_map, extract_homotopy, phi_object, phi_onemorphism, phi_twomorphism, split_bundle,
    TwoTermComplex,
};
use crate::vb::{find_unital_connection, validate_transformation, validate_vb, validate_vb_map, VbGroupoid, VbMap};
use crate::wrep::{
    act_between, act_on_morphism, action_vb, compose_equivariant, connection_change, equivariant_from_morphism,
    inverse_equivariant, morphism_from_equivariant, reconstruct_equivariant, ruth_from_vb, ruth_from_wrep,
    ruth_from_wrep_witness, triangle_iso, validate_equivariant, validate_wrep, vb_to_wrep, vb_to_wrep_with,
    wrep_from_ruth, EquivariantMap, WeakRepresentation,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pipeline {
    /// representation → semi-direct product → representation, with `Ψ`
    /// functoriality and the witness of `ruth_from_vb`.
    RuthVb,
    /// VB-groupoid → weak representation, for two connections.
    VbWrep,
    /// representation → weak representation → representation, exact and
    /// after scrambling.
    WrepRuth,
    /// semi-direct product ≅ action groupoid of the weak representation.
    Triangle,
    /// chain maps and homotopies through the sum-groupoid functor.
    PhiHom,
    /// equivariant maps through `Act` and back.
    ActFf,
}

impl Pipeline {
    pub const ALL: [Pipeline; 6] =
        [Pipeline::RuthVb, Pipeline::VbWrep, Pipeline::WrepRuth, Pipeline::Triangle, Pipeline::PhiHom, Pipeline::ActFf];

    pub fn name(self) -> &'static str {
        match self {
            Pipeline::RuthVb => "ruth-vb",
            Pipeline::VbWrep => "vb-wrep",
            Pipeline::WrepRuth => "wrep-ruth",
            Pipeline::Triangle => "triangle",
            Pipeline::PhiHom => "phi-hom",
            Pipeline::ActFf => "act-ff",
        }
    }
}

impl fmt::Display for Pipeline {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Pipeline {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Pipeline::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::Usage(format!("unknown pipeline {s:?}")))
    }
}

/// A fixed instance that replaces the random one in every lap.
#[derive(Clone, Debug)]
pub enum Seed {
    Ruth(Arc<Ruth>),
    Vb(Arc<VbGroupoid>),
    Wrep(Arc<WeakRepresentation>),
    Complex(Arc<TwoTermComplex>),
    Equivariant(Arc<EquivariantMap>),
}

impl Seed {
    fn kind(&self) -> &'static str {
        match self {
            Seed::Ruth(_) => "ruth",
            Seed::Vb(_) => "vb",
            Seed::Wrep(_) => "wrep",
            Seed::Complex(_) => "complex",
            Seed::Equivariant(_) => "equivariant",
        }
    }
}

fn unsupported(p: Pipeline, s: &Seed) -> Error {
    Error::Usage(format!("pipeline {p} does not take a {} instance", s.kind()))
}

/// Records `rep` under `prefix` and counts the check.
fn check(out: &mut Report, prefix: &str, rep: Report) {
    out.count("checks", 1);
    out.merge_prefixed(prefix, rep);
}

fn expect(out: &mut Report, name: &str, ok: bool, expected: &str) {
    out.count("checks", 1);
    if !ok {
        out.push(name, "lap", expected, "differs");
    }
}

fn ruth_seed(p: Pipeline, rng: &mut impl Rng, bounds: Bounds, seed: Option<&Seed>) -> Result<Arc<Ruth>> {
    match seed {
        None => Ok(random_ruth(rng, bounds)),
        Some(Seed::Ruth(r)) => Ok(r.clone()),
        Some(Seed::Wrep(w)) if p == Pipeline::WrepRuth => Ok(Arc::new(ruth_from_wrep(w)?)),
        Some(s) => Err(unsupported(p, s)),
    }
}

fn lap_ruth_vb(rng: &mut impl Rng, bounds: Bounds, seed: Option<&Seed>) -> Result<Report> {
    let mut out = Report::new();
    let r = ruth_seed(Pipeline::RuthVb, rng, bounds, seed)?;
    let m1 = random_gauge(rng, &r);
    let m2 = random_gauge(rng, &m1.source);
    let semi = Arc::new(semidirect(&r)?);
    check(&mut out, "semidirect", validate_vb(&semi));
    let psi1 = psi_morphism(&m1)?;
    check(&mut out, "psi", validate_vb_map(&psi1));
    let psi12 = psi_morphism(&compose_morphisms(&m1, &m2)?)?;
    expect(&mut out, "psi-functor", psi12 == psi1.compose(&psi_morphism(&m2)?)?, "Psi(m1 m2) = Psi(m1) Psi(m2)");
    expect(&mut out, "psi-inverse", psi_inverse(m1.source.clone(), r.clone(), &psi1)? == m1, "psi_inverse(Psi(m)) = m");

    let (v, iso) = random_vb(rng, &r)?;
    let (r2, _, witness) = ruth_from_vb(&v)?;
    let r2 = Arc::new(r2);
    check(&mut out, "recovered", validate_ruth(&r2));
    check(&mut out, "witness", validate_vb_map(&witness));
    expect(&mut out, "witness-iso", witness.is_isomorphism(), "invertible witness");
    let back = iso.inverse()?.compose(&witness)?;
    let m = psi_inverse(r2, r, &back)?;
    check(&mut out, "witness-morphism", validate_morphism(&m));
    expect(&mut out, "witness-morphism-iso", m.is_isomorphism(), "invertible morphism");
    Ok(out)
}

fn lap_vb_wrep(rng: &mut impl Rng, bounds: Bounds, seed: Option<&Seed>) -> Result<Report> {
    let mut out = Report::new();
    let v = match seed {
        Some(Seed::Vb(v)) => v.clone(),
        _ => {
            let r = ruth_seed(Pipeline::VbWrep, rng, bounds, seed)?;
            random_vb(rng, &r)?.0
        }
    };
    let first = vb_to_wrep(&v)?;
    check(&mut out, "wrep", validate_wrep(&first.wrep));
    check(&mut out, "action", validate_vb(&first.iso.source));
    check(&mut out, "witness", validate_vb_map(&first.iso));
    expect(&mut out, "witness-iso", first.iso.is_isomorphism(), "invertible witness");

    let c2 = perturbed_connection(rng, &v, &find_unital_connection(&v)?);
    if c2 != first.connection {
        out.count("distinct-connections", 1);
    }
    let second = vb_to_wrep_with(&v, c2)?;
    check(&mut out, "second-wrep", validate_wrep(&second.wrep));
    check(&mut out, "second-witness", validate_vb_map(&second.iso));
    let e = connection_change(&v, &first, &second)?;
    check(&mut out, "connection-change", validate_equivariant(&e));
    expect(&mut out, "connection-change-iso", e.is_isomorphism(), "invertible equivariant map");
    Ok(out)
}

fn lap_wrep_ruth(rng: &mut impl Rng, bounds: Bounds, seed: Option<&Seed>) -> Result<Report> {
    let mut out = Report::new();
    let r = ruth_seed(Pipeline::WrepRuth, rng, bounds, seed)?;
    let w = Arc::new(wrep_from_ruth(&r)?);
    check(&mut out, "wrep", validate_wrep(&w));
    expect(&mut out, "exact-roundtrip", ruth_from_wrep(&w)? == *r, "ruth_from_wrep(wrep_from_ruth(r)) = r");

    let (w2, t) = random_scramble(rng, &w)?;
    check(&mut out, "scrambled", validate_wrep(&w2));
    let (r2, e2) = ruth_from_wrep_witness(&w2)?;
    let r2 = Arc::new(r2);
    check(&mut out, "recovered", validate_ruth(&r2));
    check(&mut out, "witness", validate_equivariant(&e2));
    let e = compose_equivariant(&inverse_equivariant(&e2)?, &t)?;
    let m = morphism_from_equivariant(&e, r, r2)?;
    check(&mut out, "witness-morphism", validate_morphism(&m));
    expect(&mut out, "witness-morphism-iso", m.is_isomorphism(), "invertible morphism");
    Ok(out)
}

fn lap_triangle(rng: &mut impl Rng, bounds: Bounds, seed: Option<&Seed>) -> Result<Report> {
    let mut out = Report::new();
    let r = ruth_seed(Pipeline::Triangle, rng, bounds, seed)?;
    let tri = triangle_iso(&r)?;
    check(&mut out, "semidirect", validate_vb(&tri.source));
    check(&mut out, "action", validate_vb(&tri.target));
    check(&mut out, "witness", validate_vb_map(&tri));
    expect(&mut out, "witness-iso", tri.is_isomorphism(), "invertible witness");
    Ok(out)
}

fn lap_phi_hom(rng: &mut impl Rng, bounds: Bounds, seed: Option<&Seed>) -> Result<Report> {
    let mut out = Report::new();
    let n = |rng: &mut _| -> usize { Rng::gen_range(rng, 1..=bounds.max_objects.max(1)) };
    let c = match seed {
        None => {
            let k = n(rng);
            Arc::new(random_complex(rng, point_names("c", k), bounds))
        }
        Some(Seed::Complex(c)) => c.clone(),
        Some(s) => return Err(unsupported(Pipeline::PhiHom, s)),
    };
    let (kd, ke) = (n(rng), n(rng));
    let d = Arc::new(random_complex(rng, point_names("d", kd), bounds));
    let e = Arc::new(random_complex(rng, point_names("e", ke), bounds));
    let (fb, kb) = (random_basemap(rng, c.len(), d.len()), random_basemap(rng, d.len(), e.len()));
    let f = random_chain_map(rng, &c, &d, fb);
    let k = random_chain_map(rng, &d, &e, kb);
    let a1 = random_homotopy(rng, &f);
    let a2 = random_homotopy(rng, &a1.to);
    let b1 = random_homotopy(rng, &k);
    let b2 = random_homotopy(rng, &b1.to);

    let pf = phi_onemorphism(&f);
    check(&mut out, "phi-map", validate_vb_map(&pf));
    expect(&mut out, "extract-map", extract_chain_map(&pf)? == f, "extract(phi(f)) = f");
    let pa = phi_twomorphism(&a1);
    check(&mut out, "phi-homotopy", validate_transformation(&pa));
    expect(&mut out, "extract-homotopy", extract_homotopy(&pa)? == a1, "extract(phi(a)) = a");
    expect(
        &mut out,
        "phi-functor",
        phi_onemorphism(&k.compose(&f)?) == phi_onemorphism(&k).compose(&pf)?,
        "phi(k f) = phi(k) phi(f)",
    );
    let (split, iso) = split_bundle(&phi_object(&c))?;
    expect(&mut out, "split-complex", split == *c, "split(phi(C)) = C");
    expect(&mut out, "split-basis", iso.is_identity(), "identity change of basis");
    expect(&mut out, "interchange", check_interchange(&a1, &a2, &b1, &b2)?, "interchange law");
    Ok(out)
}

fn lap_act_ff(rng: &mut impl Rng, bounds: Bounds, seed: Option<&Seed>) -> Result<Report> {
    let mut out = Report::new();
    let e = match seed {
        None => random_equivariant(rng, bounds)?,
        Some(Seed::Equivariant(e)) => (**e).clone(),
        Some(Seed::Ruth(r)) => equivariant_from_morphism(&random_gauge(rng, r))?,
        Some(s) => return Err(unsupported(Pipeline::ActFf, s)),
    };
    check(&mut out, "equivariant", validate_equivariant(&e));
    let phi = act_on_morphism(&e)?;
    check(&mut out, "act", validate_vb_map(&phi));
    let back = reconstruct_equivariant(&phi, e.source.clone(), e.target.clone())?;
    expect(&mut out, "reconstruct-act", back == e, "reconstruct(act(e)) = e");

    // A map between action groupoids built without Act: conjugate Ψ(m) by
    // the triangle isomorphisms.
    let r = match seed {
        Some(Seed::Ruth(r)) => r.clone(),
        _ => random_ruth(rng, bounds),
    };
    let m1 = random_gauge(rng, &r);
    let (ts, tt) = (triangle_iso(&m1.source)?, triangle_iso(&r)?);
    let psi = psi_between(&m1, ts.source.clone(), tt.source.clone())?;
    let phi2 = tt.compose(&psi.compose(&ts.inverse()?)?)?;
    let (ws, wt) = (Arc::new(wrep_from_ruth(&m1.source)?), Arc::new(wrep_from_ruth(&r)?));
    let e2 = reconstruct_equivariant(&phi2, ws, wt)?;
    check(&mut out, "reconstructed", validate_equivariant(&e2));
    expect(
        &mut out,
        "act-reconstruct",
        act_between(&e2, phi2.source.clone(), phi2.target.clone())? == phi2,
        "act(reconstruct(phi)) = phi",
    );

    let m2 = random_gauge(rng, &m1.source);
    let (x1, x2) = (equivariant_from_morphism(&m2)?, equivariant_from_morphism(&m1)?);
    let lhs = act_on_morphism(&compose_equivariant(&x2, &x1)?)?;
    let rhs = act_on_morphism(&x2)?.compose(&act_on_morphism(&x1)?)?;
    expect(&mut out, "act-functor", lhs == rhs, "act(e2 e1) = act(e2) act(e1)");
    let id = EquivariantMap::identity(x1.target.clone());
    expect(
        &mut out,
        "act-identity",
        act_on_morphism(&id)? == VbMap::identity(Arc::new(action_vb(&x1.target)?)),
        "act(id) = id",
    );
    Ok(out)
}

/// One lap of `p`; construction failures become report entries.
pub fn lap(p: Pipeline, seed_value: u64, trial: u64, bounds: Bounds, seed: Option<&Seed>) -> Report {
    let mut rng = trial_rng(seed_value, trial);
    let result = match p {
        Pipeline::RuthVb => lap_ruth_vb(&mut rng, bounds, seed),
        Pipeline::VbWrep => lap_vb_wrep(&mut rng, bounds, seed),
        Pipeline::WrepRuth => lap_wrep_ruth(&mut rng, bounds, seed),
        Pipeline::Triangle => lap_triangle(&mut rng, bounds, seed),
        Pipeline::PhiHom => lap_phi_hom(&mut rng, bounds, seed),
        Pipeline::ActFf => lap_act_ff(&mut rng, bounds, seed),
    };
    match result {
        Ok(mut r) => {
            r.count("laps", 1);
            r
        }
        Err(e) => {
            let mut r = Report::new();
            r.push(format!("{p}/construction"), "lap", "witness constructed", e);
            r
        }
    }
}

/// Checks that `seed` fits `p` before any lap runs.
pub fn check_seed(p: Pipeline, seed: &Seed) -> Result<()> {
    let ok = match p {
        Pipeline::RuthVb | Pipeline::Triangle => matches!(seed, Seed::Ruth(_)),
        Pipeline::WrepRuth => matches!(seed, Seed::Ruth(_) | Seed::Wrep(_)),
        Pipeline::VbWrep => matches!(seed, Seed::Ruth(_) | Seed::Vb(_)),
        Pipeline::PhiHom => matches!(seed, Seed::Complex(_)),
        Pipeline::ActFf => matches!(seed, Seed::Ruth(_) | Seed::Equivariant(_)),
    };
    if ok {
        Ok(())
    } else {
        Err(unsupported(p, seed))
    }
}

/// `trials` laps of `p`, run concurrently and merged by trial index.
pub fn roundtrip(p: Pipeline, seed_value: u64, trials: u64, bounds: Bounds, seed: Option<&Seed>) -> Result<Report> {
    if let Some(s) = seed {
        check_seed(p, s)?;
    }
    let mut out = Report::new();
    for (t, r) in run_trials(trials, |t| lap(p, seed_value, t, bounds, seed)).into_iter().enumerate() {
        merge_trial(&mut out, t as u64, r);
    }
    Ok(out)
}
