//! Finite groupoids given by explicit tables, their axioms, and their nerves.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::report::Report;

/// A finite groupoid. Objects and arrows are opaque string identifiers,
/// stored in lexicographic order; internally they are referred to by index.
///
/// `compose(g1, g2)` is `g1 ∘ g2` and is meant to be defined exactly when
/// `src(g1) == tgt(g2)`. Construction only checks that the tables are
/// well-formed; [`validate_groupoid`] checks the axioms.
#[derive(Clone, Debug)]
pub struct FiniteGroupoid {
    objects: Vec<String>,
    arrows: Vec<String>,
    src: Vec<usize>,
    tgt: Vec<usize>,
    units: Vec<usize>,
    inverse: Vec<usize>,
    comp: Vec<Option<usize>>,
    object_index: HashMap<String, usize>,
    arrow_index: HashMap<String, usize>,
    pairs: Vec<(usize, usize)>,
    pair_index: HashMap<(usize, usize), usize>,
}

impl PartialEq for FiniteGroupoid {
    fn eq(&self, o: &Self) -> bool {
        self.objects == o.objects
            && self.arrows == o.arrows
            && self.src == o.src
            && self.tgt == o.tgt
            && self.units == o.units
            && self.inverse == o.inverse
            && self.comp == o.comp
    }
}

impl Eq for FiniteGroupoid {}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrowSpec {
    pub id: String,
    pub src: String,
    pub tgt: String,
}

/// The JSON form of a groupoid.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupoidSpec {
    pub objects: Vec<String>,
    pub arrows: Vec<ArrowSpec>,
    pub units: BTreeMap<String, String>,
    pub compose: Vec<[String; 3]>,
    pub inverse: BTreeMap<String, String>,
}

impl FiniteGroupoid {
    pub fn from_spec(spec: &GroupoidSpec) -> Result<Self> {
        let mut objects = spec.objects.clone();
        objects.sort();
        if objects.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Structure("duplicate object identifier".into()));
        }
        let mut arrow_specs = spec.arrows.clone();
        arrow_specs.sort_by(|a, b| a.id.cmp(&b.id));
        if arrow_specs.windows(2).any(|w| w[0].id == w[1].id) {
            return Err(Error::Structure("duplicate arrow identifier".into()));
        }
        let object_index: HashMap<String, usize> =
            objects.iter().enumerate().map(|(i, o)| (o.clone(), i)).collect();
        let arrows: Vec<String> = arrow_specs.iter().map(|a| a.id.clone()).collect();
        let arrow_index: HashMap<String, usize> =
            arrows.iter().enumerate().map(|(i, a)| (a.clone(), i)).collect();
        let obj = |s: &str| {
            object_index
                .get(s)
                .copied()
                .ok_or_else(|| Error::Structure(format!("unknown object {s:?}")))
        };
        let arr = |s: &str| {
            arrow_index
                .get(s)
                .copied()
                .ok_or_else(|| Error::Structure(format!("unknown arrow {s:?}")))
        };
        let src = arrow_specs.iter().map(|a| obj(&a.src)).collect::<Result<Vec<_>>>()?;
        let tgt = arrow_specs.iter().map(|a| obj(&a.tgt)).collect::<Result<Vec<_>>>()?;
        let mut units = vec![usize::MAX; objects.len()];
        for (o, a) in &spec.units {
            units[obj(o)?] = arr(a)?;
        }
        if let Some(i) = units.iter().position(|&u| u == usize::MAX) {
            return Err(Error::Structure(format!("object {:?} has no unit", objects[i])));
        }
        let mut inverse = vec![usize::MAX; arrows.len()];
        for (a, b) in &spec.inverse {
            inverse[arr(a)?] = arr(b)?;
        }
        if let Some(i) = inverse.iter().position(|&u| u == usize::MAX) {
            return Err(Error::Structure(format!("arrow {:?} has no inverse", arrows[i])));
        }
        let n = arrows.len();
        let mut comp = vec![None; n * n];
        for [a, b, c] in &spec.compose {
            let slot = &mut comp[arr(a)? * n + arr(b)?];
            if slot.is_some() {
                return Err(Error::Structure(format!("composite ({a},{b}) given twice")));
            }
            *slot = Some(arr(c)?);
        }
        Ok(Self::assemble(objects, arrows, src, tgt, units, inverse, comp, object_index, arrow_index))
    }

    #[allow(clippy::too_many_arguments)]
    fn assemble(
        objects: Vec<String>,
        arrows: Vec<String>,
        src: Vec<usize>,
        tgt: Vec<usize>,
        units: Vec<usize>,
        inverse: Vec<usize>,
        comp: Vec<Option<usize>>,
        object_index: HashMap<String, usize>,
        arrow_index: HashMap<String, usize>,
    ) -> Self {
        let n = arrows.len();
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .filter(|&(a, b)| src[a] == tgt[b])
            .collect();
        let pair_index = pairs.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        FiniteGroupoid {
            objects,
            arrows,
            src,
            tgt,
            units,
            inverse,
            comp,
            object_index,
            arrow_index,
            pairs,
            pair_index,
        }
    }

    pub fn to_spec(&self) -> GroupoidSpec {
        let n = self.arrows.len();
        GroupoidSpec {
            objects: self.objects.clone(),
            arrows: (0..n)
                .map(|a| ArrowSpec {
                    id: self.arrows[a].clone(),
                    src: self.objects[self.src[a]].clone(),
                    tgt: self.objects[self.tgt[a]].clone(),
                })
                .collect(),
            units: (0..self.objects.len())
                .map(|x| (self.objects[x].clone(), self.arrows[self.units[x]].clone()))
                .collect(),
            compose: (0..n * n)
                .filter_map(|k| {
                    self.comp[k].map(|c| {
                        [self.arrows[k / n].clone(), self.arrows[k % n].clone(), self.arrows[c].clone()]
                    })
                })
                .collect(),
            inverse: (0..n)
                .map(|a| (self.arrows[a].clone(), self.arrows[self.inverse[a]].clone()))
                .collect(),
        }
    }

    /// Builds a groupoid from closures over identifiers; used by the
    /// standard families below.
    pub fn from_fns(
        objects: Vec<String>,
        arrows: Vec<ArrowSpec>,
        unit: impl Fn(&str) -> String,
        compose: impl Fn(&str, &str) -> String,
        inverse: impl Fn(&str) -> String,
    ) -> Result<Self> {
        let mut comp = Vec::new();
        for a in &arrows {
            for b in &arrows {
                if a.src == b.tgt {
                    comp.push([a.id.clone(), b.id.clone(), compose(&a.id, &b.id)]);
                }
            }
        }
        let spec = GroupoidSpec {
            units: objects.iter().map(|o| (o.clone(), unit(o))).collect(),
            inverse: arrows.iter().map(|a| (a.id.clone(), inverse(&a.id))).collect(),
            objects,
            arrows,
            compose: comp,
        };
        Self::from_spec(&spec)
    }

    /// The groupoid with the given objects and only unit arrows. Each unit
    /// shares its object's identifier.
    pub fn discrete(objects: &[String]) -> Self {
        let arrows = objects
            .iter()
            .map(|o| ArrowSpec { id: o.clone(), src: o.clone(), tgt: o.clone() })
            .collect();
        Self::from_fns(objects.to_vec(), arrows, |o| o.to_string(), |a, _| a.to_string(), |a| a.to_string())
            .expect("discrete groupoid is well-formed")
    }

    /// The cyclic group of order `n` on one object `*`, with arrows `e`, `g`,
    /// `g2`, ... (`g^k` is named `gk`).
    pub fn cyclic(n: usize) -> Self {
        assert!(n >= 1);
        let name = |k: usize| match k {
            0 => "e".to_string(),
            1 => "g".to_string(),
            k => format!("g{k}"),
        };
        let index = |s: &str| (0..n).find(|&k| name(k) == s).expect("known element");
        let arrows = (0..n)
            .map(|k| ArrowSpec { id: name(k), src: "*".into(), tgt: "*".into() })
            .collect();
        Self::from_fns(
            vec!["*".into()],
            arrows,
            |_| "e".into(),
            |a, b| name((index(a) + index(b)) % n),
            |a| name((n - index(a)) % n),
        )
        .expect("cyclic group is well-formed")
    }

    /// The pair groupoid on `{x, y}` with arrows `1x`, `1y`, `a: x→y`,
    /// `b: y→x`.
    pub fn pair_xy() -> Self {
        let arrow = |id: &str, s: &str, t: &str| ArrowSpec { id: id.into(), src: s.into(), tgt: t.into() };
        let arrows = vec![arrow("1x", "x", "x"), arrow("1y", "y", "y"), arrow("a", "x", "y"), arrow("b", "y", "x")];
        let endpoints = |id: &str| match id {
            "1x" => ("x", "x"),
            "1y" => ("y", "y"),
            "a" => ("x", "y"),
            _ => ("y", "x"),
        };
        let by_endpoints = |s: &str, t: &str| match (s, t) {
            ("x", "x") => "1x",
            ("y", "y") => "1y",
            ("x", "y") => "a",
            _ => "b",
        };
        Self::from_fns(
            vec!["x".into(), "y".into()],
            arrows,
            |o| format!("1{o}"),
            |a, b| by_endpoints(endpoints(b).0, endpoints(a).1).to_string(),
            |a| {
                let (s, t) = endpoints(a);
                by_endpoints(t, s).to_string()
            },
        )
        .expect("pair groupoid is well-formed")
    }

    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn num_arrows(&self) -> usize {
        self.arrows.len()
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn arrows(&self) -> &[String] {
        &self.arrows
    }

    pub fn object_name(&self, x: usize) -> &str {
        &self.objects[x]
    }

    pub fn arrow_name(&self, g: usize) -> &str {
        &self.arrows[g]
    }

    pub fn object_id(&self, name: &str) -> Option<usize> {
        self.object_index.get(name).copied()
    }

    pub fn arrow_id(&self, name: &str) -> Option<usize> {
        self.arrow_index.get(name).copied()
    }

    pub fn src(&self, g: usize) -> usize {
        self.src[g]
    }

    pub fn tgt(&self, g: usize) -> usize {
        self.tgt[g]
    }

    pub fn unit(&self, x: usize) -> usize {
        self.units[x]
    }

    pub fn inv(&self, g: usize) -> usize {
        self.inverse[g]
    }

    pub fn is_unit(&self, g: usize) -> bool {
        self.units[self.src[g]] == g || self.units.contains(&g)
    }

    pub fn try_compose(&self, g1: usize, g2: usize) -> Option<usize> {
        self.comp[g1 * self.arrows.len() + g2]
    }

    /// `g1 ∘ g2`; panics if the table has no entry (only valid groupoids
    /// should reach this).
    pub fn compose(&self, g1: usize, g2: usize) -> usize {
        self.try_compose(g1, g2).unwrap_or_else(|| {
            panic!("no composite for ({}, {})", self.arrows[g1], self.arrows[g2])
        })
    }

    /// Composable pairs `(g, h)` with `src(g) == tgt(h)`, lexicographic.
    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn pair_index(&self, g: usize, h: usize) -> Option<usize> {
        self.pair_index.get(&(g, h)).copied()
    }

    /// Whether every arrow is a unit.
    pub fn is_discrete(&self) -> bool {
        (0..self.arrows.len()).all(|g| self.is_unit(g))
    }

    pub fn fmt_tuple(&self, gs: &[usize]) -> String {
        let names: Vec<&str> = gs.iter().map(|&g| self.arrow_name(g)).collect();
        format!("({})", names.join(","))
    }

    /// Overwrites one composition-table entry; for mutation testing.
    pub fn with_composite(&self, g1: usize, g2: usize, value: Option<usize>) -> Self {
        let mut out = self.clone();
        out.comp[g1 * self.arrows.len() + g2] = value;
        out
    }

    /// Overwrites one inverse-table entry; for mutation testing.
    pub fn with_inverse(&self, g: usize, value: usize) -> Self {
        let mut out = self.clone();
        out.inverse[g] = value;
        out
    }

    /// Overwrites one unit-table entry; for mutation testing.
    pub fn with_unit(&self, x: usize, value: usize) -> Self {
        let mut out = self.clone();
        out.units[x] = value;
        out
    }

    /// Disjoint union; identifiers must not collide.
    pub fn disjoint_union(parts: &[FiniteGroupoid]) -> Result<Self> {
        let mut spec = GroupoidSpec {
            objects: vec![],
            arrows: vec![],
            units: BTreeMap::new(),
            compose: vec![],
            inverse: BTreeMap::new(),
        };
        for p in parts {
            let s = p.to_spec();
            spec.objects.extend(s.objects);
            spec.arrows.extend(s.arrows);
            spec.units.extend(s.units);
            spec.compose.extend(s.compose);
            spec.inverse.extend(s.inverse);
        }
        Self::from_spec(&spec)
    }
}

/// Checks the groupoid axioms exhaustively; an empty report means valid.
pub fn validate_groupoid(g: &FiniteGroupoid) -> Report {
    let mut r = Report::new();
    let n = g.num_arrows();
    let name = |a: usize| g.arrow_name(a).to_string();
    let oname = |x: usize| g.object_name(x).to_string();
    for x in 0..g.num_objects() {
        let u = g.unit(x);
        if g.src(u) != x || g.tgt(u) != x {
            r.push("unit-endpoints", oname(x), format!("{x0}->{x0}", x0 = oname(x)), format!("{}->{}", oname(g.src(u)), oname(g.tgt(u))));
        }
    }
    for a in 0..n {
        for b in 0..n {
            let composable = g.src(a) == g.tgt(b);
            let entry = g.try_compose(a, b);
            let loc = || format!("({},{})", name(a), name(b));
            match (composable, entry) {
                (true, None) => r.push("composition-domain", loc(), "defined", "missing"),
                (false, Some(c)) => r.push("composition-domain", loc(), "undefined", name(c)),
                (true, Some(c)) => {
                    if g.src(c) != g.src(b) || g.tgt(c) != g.tgt(a) {
                        r.push(
                            "composition-endpoints",
                            loc(),
                            format!("{}->{}", oname(g.src(b)), oname(g.tgt(a))),
                            format!("{}->{}", oname(g.src(c)), oname(g.tgt(c))),
                        );
                    }
                }
                (false, None) => {}
            }
        }
    }
    let comp_name = |a: usize, b: usize| g.try_compose(a, b).map_or("undefined".to_string(), name);
    for a in 0..n {
        let (s, t) = (g.src(a), g.tgt(a));
        let lu = comp_name(g.unit(t), a);
        if lu != name(a) {
            r.push("left-unit", name(a), name(a), lu);
        }
        let ru = comp_name(a, g.unit(s));
        if ru != name(a) {
            r.push("right-unit", name(a), name(a), ru);
        }
        let i = g.inv(a);
        if g.src(i) != t || g.tgt(i) != s {
            r.push("inverse-endpoints", name(a), format!("{}->{}", oname(t), oname(s)), format!("{}->{}", oname(g.src(i)), oname(g.tgt(i))));
        }
        let li = comp_name(i, a);
        if li != name(g.unit(s)) {
            r.push("left-inverse", name(a), name(g.unit(s)), li);
        }
        let ri = comp_name(a, i);
        if ri != name(g.unit(t)) {
            r.push("right-inverse", name(a), name(g.unit(t)), ri);
        }
    }
    for a in 0..n {
        for b in (0..n).filter(|&b| g.src(a) == g.tgt(b)) {
            for c in (0..n).filter(|&c| g.src(b) == g.tgt(c)) {
                let left = g.try_compose(a, b).and_then(|ab| g.try_compose(ab, c));
                let right = g.try_compose(b, c).and_then(|bc| g.try_compose(a, bc));
                if let (Some(l), Some(rt)) = (left, right) {
                    if l != rt {
                        r.push("associativity", g.fmt_tuple(&[a, b, c]), name(rt), name(l));
                    }
                }
            }
        }
    }
    r
}

/// One composable tuple `(g1, ..., gp)` with `src(g_i) == tgt(g_{i+1})`.
/// For degree 0 the tuple is empty and `source == target` is the object.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Simplex {
    pub arrows: Vec<usize>,
    /// `s_p`: the source of the last arrow.
    pub source: usize,
    /// `t_p`: the target of the first arrow.
    pub target: usize,
}

/// `G_p`: all composable `p`-tuples in lexicographic order of arrow
/// identifiers. Degree 0 lists the objects in order.
#[derive(Clone, Debug)]
pub struct Nerve {
    degree: usize,
    simplices: Vec<Simplex>,
    index: HashMap<Vec<usize>, usize>,
}

impl Nerve {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn simplices(&self) -> &[Simplex] {
        &self.simplices
    }

    pub fn get(&self, i: usize) -> &Simplex {
        &self.simplices[i]
    }

    /// Index of a tuple of positive length.
    pub fn position(&self, arrows: &[usize]) -> Option<usize> {
        self.index.get(arrows).copied()
    }
}

pub fn nerve(g: &FiniteGroupoid, p: usize) -> Nerve {
    let mut simplices: Vec<Simplex> = if p == 0 {
        (0..g.num_objects()).map(|x| Simplex { arrows: vec![], source: x, target: x }).collect()
    } else {
        (0..g.num_arrows())
            .map(|a| Simplex { arrows: vec![a], source: g.src(a), target: g.tgt(a) })
            .collect()
    };
    for _ in 1..p.max(1) {
        simplices = simplices
            .into_iter()
            .flat_map(|s| {
                (0..g.num_arrows()).filter(move |&b| g.tgt(b) == s.source).map({
                    let s = s.clone();
                    move |b| {
                        let mut arrows = s.arrows.clone();
                        arrows.push(b);
                        Simplex { arrows, source: g.src(b), target: s.target }
                    }
                })
            })
            .collect();
    }
    let index = if p == 0 {
        HashMap::new()
    } else {
        simplices.iter().enumerate().map(|(i, s)| (s.arrows.clone(), i)).collect()
    };
    Nerve { degree: p, simplices, index }
}

/// Marks the tuples containing at least one unit arrow.
pub fn degeneracy_positions(g: &FiniteGroupoid, n: &Nerve) -> Vec<bool> {
    n.simplices.iter().map(|s| s.arrows.iter().any(|&a| g.is_unit(a))).collect()
}

/// Nerves `G_0, ..., G_max` of one groupoid, with face and sub-tuple lookups.
#[derive(Clone, Debug)]
pub struct Simplicial {
    groupoid: Arc<FiniteGroupoid>,
    nerves: Vec<Nerve>,
}

impl Simplicial {
    pub fn new(groupoid: Arc<FiniteGroupoid>, max_degree: usize) -> Self {
        let nerves = (0..=max_degree).map(|p| nerve(&groupoid, p)).collect();
        Simplicial { groupoid, nerves }
    }

    pub fn groupoid(&self) -> &FiniteGroupoid {
        &self.groupoid
    }

    pub fn max_degree(&self) -> usize {
        self.nerves.len() - 1
    }

    pub fn nerve(&self, p: usize) -> &Nerve {
        &self.nerves[p]
    }

    pub fn simplex(&self, p: usize, i: usize) -> &Simplex {
        self.nerves[p].get(i)
    }

    /// Index in `G_{len}` of a tuple; an empty tuple is located at `anchor`.
    pub fn locate(&self, arrows: &[usize], anchor: usize) -> usize {
        if arrows.is_empty() {
            anchor
        } else {
            self.nerves[arrows.len()].position(arrows).expect("composable tuple")
        }
    }

    /// Index of the sub-tuple `arrows[a..b]` of simplex `i` of degree `p`.
    /// An empty sub-tuple sits at the object between its neighbours.
    pub fn sub(&self, p: usize, i: usize, a: usize, b: usize) -> usize {
        let s = self.simplex(p, i);
        let part = &s.arrows[a..b];
        let anchor = if !part.is_empty() {
            0
        } else if a > 0 {
            self.groupoid.src(s.arrows[a - 1])
        } else if b < p {
            self.groupoid.tgt(s.arrows[b])
        } else {
            s.target
        };
        self.locate(part, anchor)
    }

    /// Face `d_j` of simplex `i` in `G_p` (`p ≥ 1`): `d_0` drops the first
    /// arrow, `d_p` the last, and `d_j` composes `g_j g_{j+1}`.
    pub fn face(&self, p: usize, i: usize, j: usize) -> usize {
        assert!(p >= 1 && j <= p);
        if j == 0 {
            return self.sub(p, i, 1, p);
        }
        if j == p {
            return self.sub(p, i, 0, p - 1);
        }
        let s = self.simplex(p, i);
        let mut arrows = Vec::with_capacity(p - 1);
        arrows.extend_from_slice(&s.arrows[..j - 1]);
        arrows.push(self.groupoid.compose(s.arrows[j - 1], s.arrows[j]));
        arrows.extend_from_slice(&s.arrows[j + 1..]);
        self.locate(&arrows, 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_fixtures_are_valid() {
        assert!(validate_groupoid(&FiniteGroupoid::cyclic(2)).passed());
        assert!(validate_groupoid(&FiniteGroupoid::cyclic(5)).passed());
        assert!(validate_groupoid(&FiniteGroupoid::pair_xy()).passed());
        let d = FiniteGroupoid::discrete(&["p".into(), "q".into()]);
        assert!(validate_groupoid(&d).passed());
        assert!(d.is_discrete());
    }

    #[test]
    fn broken_inverse_is_reported() {
        let z2 = FiniteGroupoid::cyclic(2);
        let g = z2.arrow_id("g").unwrap();
        let e = z2.arrow_id("e").unwrap();
        let bad = z2.with_inverse(g, e);
        let r = validate_groupoid(&bad);
        assert!(!r.passed());
        assert!(r.has_check("left-inverse"));
        assert!(r.has_check("right-inverse"));
    }

    #[test]
    fn nerve_of_z2() {
        let z2 = FiniteGroupoid::cyclic(2);
        let n2 = nerve(&z2, 2);
        let names: Vec<String> = n2.simplices().iter().map(|s| z2.fmt_tuple(&s.arrows)).collect();
        assert_eq!(names, ["(e,e)", "(e,g)", "(g,e)", "(g,g)"]);
        let flags = degeneracy_positions(&z2, &n2);
        assert_eq!(flags, [true, true, true, false]);
        assert_eq!(nerve(&z2, 0).len(), 1);
    }

    #[test]
    fn nerve_of_pair_groupoid() {
        let p = FiniteGroupoid::pair_xy();
        assert_eq!(nerve(&p, 1).len(), 4);
        assert_eq!(nerve(&p, 0).len(), 2);
        for s in nerve(&p, 3).simplices() {
            let total = s.arrows.iter().skip(1).fold(s.arrows[0], |acc, &b| p.compose(acc, b));
            assert_eq!(p.src(total), s.source);
            assert_eq!(p.tgt(total), s.target);
        }
    }

    #[test]
    fn structure_errors() {
        let mut spec = FiniteGroupoid::cyclic(2).to_spec();
        spec.inverse.remove("g");
        assert!(matches!(FiniteGroupoid::from_spec(&spec), Err(Error::Structure(_))));
        let mut spec = FiniteGroupoid::cyclic(2).to_spec();
        spec.compose.push(["g".into(), "g".into(), "e".into()]);
        assert!(matches!(FiniteGroupoid::from_spec(&spec), Err(Error::Structure(_))));
        let mut spec = FiniteGroupoid::cyclic(2).to_spec();
        spec.arrows[0].src = "nowhere".into();
        assert!(matches!(FiniteGroupoid::from_spec(&spec), Err(Error::Structure(_))));
    }

    #[test]
    fn faces_in_z3() {
        let z3 = Arc::new(FiniteGroupoid::cyclic(3));
        let simp = Simplicial::new(z3.clone(), 3);
        let g = z3.arrow_id("g").unwrap();
        let g2 = z3.arrow_id("g2").unwrap();
        let e = z3.arrow_id("e").unwrap();
        let i = simp.nerve(2).position(&[g, g2]).unwrap();
        assert_eq!(simp.face(2, i, 0), simp.nerve(1).position(&[g2]).unwrap());
        assert_eq!(simp.face(2, i, 1), simp.nerve(1).position(&[e]).unwrap());
        assert_eq!(simp.face(2, i, 2), simp.nerve(1).position(&[g]).unwrap());
        // d_0 and d_1 of a 1-simplex are objects
        assert_eq!(simp.face(1, 0, 0), 0);
    }
}
