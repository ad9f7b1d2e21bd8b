//! Instance files: a kind tag, the JSON payload of that kind, and metadata
//! recording how the instance was produced.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::groupoid::{validate_groupoid, FiniteGroupoid, GroupoidSpec};
use crate::harness::pipeline::Seed;
use crate::linalg::Matrix;
use crate::report::Report;
use crate::ruth::{validate_morphism, validate_ruth, MorphismSpec, Ruth, RuthMorphism, RuthSpec};
use crate::semidirect::semidirect;
use crate::twoterm::{ComplexSpec, TwoTermComplex};
use crate::vb::{arrow_table, object_table, per_arrow, per_object, validate_vb, validate_vb_map, VbGroupoid, VbMap, VbSpec};
use crate::wrep::{
    action_vb, ruth_from_wrep_witness, validate_equivariant, validate_wrep, vb_to_wrep, wrep_from_ruth, EquivariantMap,
    EquivariantSpec, WeakRepresentation, WrepSpec,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Groupoid,
    Complex,
    Ruth,
    Vb,
    Wrep,
    Morphism,
    Equivariant,
}

impl Kind {
    pub const ALL: [Kind; 7] = [Kind::Groupoid, Kind::Complex, Kind::Ruth, Kind::Vb, Kind::Wrep, Kind::Morphism, Kind::Equivariant];

    pub fn name(self) -> &'static str {
        match self {
            Kind::Groupoid => "groupoid",
            Kind::Complex => "complex",
            Kind::Ruth => "ruth",
            Kind::Vb => "vb",
            Kind::Wrep => "wrep",
            Kind::Morphism => "morphism",
            Kind::Equivariant => "equivariant",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Kind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Kind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Usage(format!("unknown kind {s:?}")))
    }
}

/// The on-disk form of every instance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub kind: Kind,
    pub payload: Value,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub metadata: BTreeMap<String, Value>,
}

impl InstanceFile {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    /// Pretty JSON with a trailing newline; identical instances give
    /// identical bytes.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("instance files serialize");
        s.push('\n');
        s
    }
}

/// A parsed instance.
#[derive(Clone, Debug, PartialEq)]
pub enum Instance {
    Groupoid(Arc<FiniteGroupoid>),
    Complex(Arc<TwoTermComplex>),
    Ruth(Arc<Ruth>),
    Vb(Arc<VbGroupoid>),
    Wrep(Arc<WeakRepresentation>),
    Morphism(Arc<RuthMorphism>),
    Equivariant(Arc<EquivariantMap>),
}

fn payload<T: for<'de> Deserialize<'de>>(v: &Value) -> Result<T> {
    T::deserialize(v).map_err(|e| Error::Parse(e.to_string()))
}

fn to_value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("specs serialize")
}

impl Instance {
    pub fn kind(&self) -> Kind {
        match self {
            Instance::Groupoid(_) => Kind::Groupoid,
            Instance::Complex(_) => Kind::Complex,
            Instance::Ruth(_) => Kind::Ruth,
            Instance::Vb(_) => Kind::Vb,
            Instance::Wrep(_) => Kind::Wrep,
            Instance::Morphism(_) => Kind::Morphism,
            Instance::Equivariant(_) => Kind::Equivariant,
        }
    }

    /// Malformed JSON is a parse error; well-formed JSON that does not fit
    /// together (unknown names, wrong shapes) is a structure error.
    pub fn from_file(f: &InstanceFile) -> Result<Self> {
        let v = &f.payload;
        Ok(match f.kind {
            Kind::Groupoid => Instance::Groupoid(Arc::new(FiniteGroupoid::from_spec(&payload::<GroupoidSpec>(v)?)?)),
            Kind::Complex => Instance::Complex(Arc::new(TwoTermComplex::from_spec(&payload::<ComplexSpec>(v)?)?)),
            Kind::Ruth => Instance::Ruth(Arc::new(Ruth::from_spec(&payload::<RuthSpec>(v)?)?)),
            Kind::Vb => Instance::Vb(Arc::new(VbGroupoid::from_spec(&payload::<VbSpec>(v)?)?)),
            Kind::Wrep => Instance::Wrep(Arc::new(WeakRepresentation::from_spec(&payload::<WrepSpec>(v)?)?)),
            Kind::Morphism => Instance::Morphism(Arc::new(RuthMorphism::from_spec(&payload::<MorphismSpec>(v)?)?)),
            Kind::Equivariant => Instance::Equivariant(Arc::new(EquivariantMap::from_spec(&payload::<EquivariantSpec>(v)?)?)),
        })
    }

    pub fn payload(&self) -> Value {
        match self {
            Instance::Groupoid(g) => to_value(&g.to_spec()),
            Instance::Complex(c) => to_value(&c.to_spec()),
            Instance::Ruth(r) => to_value(&r.to_spec()),
            Instance::Vb(v) => to_value(&v.to_spec()),
            Instance::Wrep(w) => to_value(&w.to_spec()),
            Instance::Morphism(m) => to_value(&m.to_spec()),
            Instance::Equivariant(e) => to_value(&e.to_spec()),
        }
    }

    /// The file form, with the basis orders recorded in the metadata.
    pub fn to_file(&self, mut metadata: BTreeMap<String, Value>) -> InstanceFile {
        if let Some(g) = self.groupoid() {
            metadata.insert("objects".into(), json!(g.objects()));
            metadata.insert("arrows".into(), json!(g.arrows()));
        }
        InstanceFile { kind: self.kind(), payload: self.payload(), metadata }
    }

    fn groupoid(&self) -> Option<&FiniteGroupoid> {
        match self {
            Instance::Groupoid(g) => Some(g),
            Instance::Complex(_) => None,
            Instance::Ruth(r) => Some(r.groupoid()),
            Instance::Vb(v) => Some(v.base()),
            Instance::Wrep(w) => Some(&w.groupoid),
            Instance::Morphism(m) => Some(m.source.groupoid()),
            Instance::Equivariant(e) => Some(&e.source.groupoid),
        }
    }

    /// The validator of the instance's kind. A complex has no conditions
    /// beyond the shapes checked on loading.
    pub fn validate(&self) -> Report {
        match self {
            Instance::Groupoid(g) => validate_groupoid(g),
            Instance::Complex(_) => Report::new(),
            Instance::Ruth(r) => validate_ruth(r),
            Instance::Vb(v) => validate_vb(v),
            Instance::Wrep(w) => validate_wrep(w),
            Instance::Morphism(m) => validate_morphism(m),
            Instance::Equivariant(e) => validate_equivariant(e),
        }
    }

    pub fn to_seed(&self) -> Result<Seed> {
        Ok(match self {
            Instance::Complex(c) => Seed::Complex(c.clone()),
            Instance::Ruth(r) => Seed::Ruth(r.clone()),
            Instance::Vb(v) => Seed::Vb(v.clone()),
            Instance::Wrep(w) => Seed::Wrep(w.clone()),
            Instance::Equivariant(e) => Seed::Equivariant(e.clone()),
            other => return Err(Error::Usage(format!("a {} instance cannot seed a pipeline", other.kind()))),
        })
    }
}

/// JSON form of a VB map over the identity of a shared base groupoid.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VbMapSpec {
    pub source: VbSpec,
    pub target: VbSpec,
    pub f0: BTreeMap<String, Matrix>,
    pub f1: BTreeMap<String, Matrix>,
}

impl VbMapSpec {
    pub fn of(f: &VbMap) -> Self {
        let g = f.source.base();
        VbMapSpec {
            source: f.source.to_spec(),
            target: f.target.to_spec(),
            f0: object_table(g, &f.f0),
            f1: arrow_table(g, &f.f1),
        }
    }

    pub fn build(&self) -> Result<VbMap> {
        let src = Arc::new(VbGroupoid::from_spec(&self.source)?);
        let tgt = Arc::new(VbGroupoid::from_spec(&self.target)?);
        let f0 = per_object(src.base(), &self.f0, "f0")?;
        let f1 = per_arrow(src.base(), &self.f1, "f1")?;
        VbMap::over_identity(src, tgt, f0, f1)
    }
}

/// A witness recorded in metadata by a conversion.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "map", rename_all = "kebab-case")]
pub enum Witness {
    /// VB isomorphism from the action groupoid of the output to the input.
    VbMap(VbMapSpec),
    /// Equivariant isomorphism from the image of the output to the input.
    Equivariant(EquivariantSpec),
}

impl Witness {
    pub fn validate(&self) -> Result<Report> {
        let (mut rep, iso) = match self {
            Witness::VbMap(s) => {
                let f = s.build()?;
                (validate_vb_map(&f), f.is_isomorphism())
            }
            Witness::Equivariant(s) => {
                let e = EquivariantMap::from_spec(s)?;
                (validate_equivariant(&e), e.is_isomorphism())
            }
        };
        if !iso {
            rep.push("witness-invertible", "witness", "isomorphism", "not invertible");
        }
        Ok(rep)
    }
}

/// The witness recorded in `f`, if any.
pub fn recorded_witness(f: &InstanceFile) -> Result<Option<Witness>> {
    f.metadata.get("witness").map(|v| payload::<Witness>(v)).transpose()
}

/// Follows one edge of the conversion graph. The input must validate;
/// the output is re-validated and its metadata records the path, the
/// connection and the witness where the edge produces them.
pub fn convert(input: &Instance, to: Kind) -> Result<InstanceFile> {
    let from = input.kind();
    let rep = input.validate();
    if !rep.passed() {
        return Err(Error::Validation(format!("input {from} fails: {}", rep.failed_checks().join(", "))));
    }
    let mut meta: BTreeMap<String, Value> = BTreeMap::new();
    meta.insert("path".into(), json!([from.name(), to.name()]));
    let out = match (input, to) {
        (Instance::Ruth(r), Kind::Wrep) => Instance::Wrep(Arc::new(wrep_from_ruth(r)?)),
        (Instance::Ruth(r), Kind::Vb) => Instance::Vb(Arc::new(semidirect(r)?)),
        (Instance::Wrep(w), Kind::Ruth) => {
            let (r, e) = ruth_from_wrep_witness(w)?;
            meta.insert("witness".into(), to_value(&Witness::Equivariant(e.to_spec())));
            Instance::Ruth(Arc::new(r))
        }
        (Instance::Wrep(w), Kind::Vb) => Instance::Vb(Arc::new(action_vb(w)?)),
        (Instance::Vb(v), Kind::Wrep) => {
            let vw = vb_to_wrep(v)?;
            let g = v.base();
            meta.insert("connection".into(), to_value(&arrow_table(g, &vw.connection.sigma)));
            meta.insert("witness".into(), to_value(&Witness::VbMap(VbMapSpec::of(&vw.iso))));
            Instance::Wrep(vw.wrep)
        }
        _ => return Err(Error::Usage(format!("no conversion from {from} to {to}"))),
    };
    let rep = out.validate();
    if !rep.passed() {
        return Err(Error::Validation(format!("output {to} fails: {}", rep.failed_checks().join(", "))));
    }
    Ok(out.to_file(meta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{z2_ruth, z2_ruth_broken4};
    use crate::linalg::q;

    fn file_of(i: &Instance) -> InstanceFile {
        InstanceFile::parse(&i.to_file(BTreeMap::new()).to_json()).unwrap()
    }

    #[test]
    fn every_kind_round_trips_through_json() {
        let r = Arc::new(z2_ruth(q(1)));
        let w = Arc::new(wrep_from_ruth(&r).unwrap());
        let all = [
            Instance::Groupoid(r.groupoid_arc().clone()),
            Instance::Complex(r.complex_arc().clone()),
            Instance::Ruth(r.clone()),
            Instance::Vb(Arc::new(semidirect(&r).unwrap())),
            Instance::Wrep(w.clone()),
            Instance::Morphism(Arc::new(RuthMorphism::identity(r.clone()))),
            Instance::Equivariant(Arc::new(EquivariantMap::identity(w))),
        ];
        for i in all {
            let back = Instance::from_file(&file_of(&i)).unwrap();
            assert_eq!(back, i);
            assert!(back.validate().passed(), "{}", i.kind());
        }
    }

    #[test]
    fn malformed_payload_is_a_parse_error() {
        assert!(matches!(InstanceFile::parse("{"), Err(Error::Parse(_))));
        let f = InstanceFile { kind: Kind::Ruth, payload: json!({"groupoid": 3}), metadata: BTreeMap::new() };
        assert!(matches!(Instance::from_file(&f), Err(Error::Parse(_))));
    }

    #[test]
    fn conversion_graph() {
        let r = Instance::Ruth(Arc::new(z2_ruth(q(1))));
        assert!(matches!(convert(&r, Kind::Ruth), Err(Error::Usage(_))));
        let vb = convert(&r, Kind::Vb).unwrap();
        assert_eq!(vb.metadata["path"], json!(["ruth", "vb"]));
        let wrep = convert(&Instance::from_file(&vb).unwrap(), Kind::Wrep).unwrap();
        assert!(wrep.metadata.contains_key("connection"));
        assert!(recorded_witness(&wrep).unwrap().unwrap().validate().unwrap().passed());
        let back = convert(&Instance::from_file(&wrep).unwrap(), Kind::Ruth).unwrap();
        assert!(recorded_witness(&back).unwrap().unwrap().validate().unwrap().passed());
        assert!(Instance::from_file(&back).unwrap().validate().passed());
        let direct = convert(&r, Kind::Wrep).unwrap();
        assert!(convert(&Instance::from_file(&direct).unwrap(), Kind::Vb).is_ok());
    }

    #[test]
    fn invalid_input_is_refused() {
        let bad = Instance::Ruth(Arc::new(z2_ruth_broken4()));
        assert!(matches!(convert(&bad, Kind::Vb), Err(Error::Validation(_))));
    }

    #[test]
    fn conversion_is_deterministic() {
        let r = Instance::Ruth(Arc::new(z2_ruth(q(1))));
        let a = convert(&Instance::from_file(&convert(&r, Kind::Vb).unwrap()).unwrap(), Kind::Wrep).unwrap();
        let b = convert(&Instance::from_file(&convert(&r, Kind::Vb).unwrap()).unwrap(), Kind::Wrep).unwrap();
        assert_eq!(a.to_json(), b.to_json());
    }
}
