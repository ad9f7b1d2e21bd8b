//! Weak actions of a finite groupoid `G` on a finite groupoid `H`, given by
//! explicit tables, and their action groupoids.
//!
//! Arrows compose right to left: `a·b` means `b` first. The associator
//! `α(g, k, x)` goes from `g·(k·x)` to `(gk)·x` and the unitor `ε(x)` from
//! `u·x` to `x`.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::groupoid::{ArrowSpec, FiniteGroupoid};
use crate::report::Report;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeakAction {
    pub acting: Arc<FiniteGroupoid>,
    pub target: Arc<FiniteGroupoid>,
    /// Per object of `H`: an object of `G`.
    pub moment: Vec<usize>,
    /// `(g, x) ↦ g·x` for `s(g) = f(x)`.
    pub a0: BTreeMap<(usize, usize), usize>,
    /// `(g, h) ↦ g·h` for `s(g) = f(s h)`.
    pub a1: BTreeMap<(usize, usize), usize>,
    /// `(g, k, x) ↦ α(g, k, x)` for composable `(g, k)` with `s(k) = f(x)`.
    pub alpha: BTreeMap<(usize, usize, usize), usize>,
    /// Per object of `H`.
    pub epsilon: Vec<usize>,
}

impl WeakAction {
    /// Fills every table from functions on its domain.
    pub fn from_fns(
        acting: Arc<FiniteGroupoid>,
        target: Arc<FiniteGroupoid>,
        moment: Vec<usize>,
        a0: impl Fn(usize, usize) -> usize,
        a1: impl Fn(usize, usize) -> usize,
        alpha: impl Fn(usize, usize, usize) -> usize,
        epsilon: impl Fn(usize) -> usize,
    ) -> Result<Self> {
        let (g, h) = (&*acting, &*target);
        if moment.len() != h.num_objects() || moment.iter().any(|&y| y >= g.num_objects()) {
            return Err(Error::Structure("moment map has the wrong shape".into()));
        }
        let mut t0 = BTreeMap::new();
        let mut t1 = BTreeMap::new();
        let mut ta = BTreeMap::new();
        for a in 0..g.num_arrows() {
            for x in (0..h.num_objects()).filter(|&x| moment[x] == g.src(a)) {
                t0.insert((a, x), a0(a, x));
            }
            for k in (0..h.num_arrows()).filter(|&k| moment[h.src(k)] == g.src(a)) {
                t1.insert((a, k), a1(a, k));
            }
        }
        for &(a, b) in g.pairs() {
            for x in (0..h.num_objects()).filter(|&x| moment[x] == g.src(b)) {
                ta.insert((a, b, x), alpha(a, b, x));
            }
        }
        let eps = (0..h.num_objects()).map(epsilon).collect();
        Ok(WeakAction { acting, target, moment, a0: t0, a1: t1, alpha: ta, epsilon: eps })
    }

    /// A strict action: `α` and `ε` are units.
    pub fn strict(
        acting: Arc<FiniteGroupoid>,
        target: Arc<FiniteGroupoid>,
        moment: Vec<usize>,
        a0: impl Fn(usize, usize) -> usize,
        a1: impl Fn(usize, usize) -> usize,
    ) -> Result<Self> {
        let (g, h) = (acting.clone(), target.clone());
        let alpha = |a: usize, b: usize, x: usize| h.unit(a0(g.compose(a, b), x));
        Self::from_fns(acting.clone(), target.clone(), moment, &a0, a1, alpha, |x| h.unit(x))
    }

    fn act0(&self, g: usize, x: usize) -> Option<usize> {
        self.a0.get(&(g, x)).copied()
    }

    fn act1(&self, g: usize, h: usize) -> Option<usize> {
        self.a1.get(&(g, h)).copied()
    }
}

/// Checks the moment map, functoriality of the action, the associator and
/// unitor endpoints, naturality, the pentagon and the unit coherences.
pub fn validate_weak_action(w: &WeakAction) -> Report {
    let mut r = Report::new();
    let (g, h) = (&*w.acting, &*w.target);
    let f = &w.moment;
    let on = |x: usize| h.object_name(x).to_string();
    let an = |k: usize| h.arrow_name(k).to_string();
    let gn = |a: usize| g.arrow_name(a).to_string();

    // domains and ranges of the tables
    for a in 0..g.num_arrows() {
        for x in (0..h.num_objects()).filter(|&x| f[x] == g.src(a)) {
            match w.act0(a, x) {
                Some(y) if y < h.num_objects() => {}
                _ => r.push("domain", format!("A0({},{})", gn(a), on(x)), "object of H", "missing"),
            }
        }
        for k in (0..h.num_arrows()).filter(|&k| f[h.src(k)] == g.src(a)) {
            match w.act1(a, k) {
                Some(y) if y < h.num_arrows() => {}
                _ => r.push("domain", format!("A1({},{})", gn(a), an(k)), "arrow of H", "missing"),
            }
        }
    }
    for &(a, b) in g.pairs() {
        for x in (0..h.num_objects()).filter(|&x| f[x] == g.src(b)) {
            match w.alpha.get(&(a, b, x)) {
                Some(&y) if y < h.num_arrows() => {}
                _ => r.push("domain", format!("α({},{},{})", gn(a), gn(b), on(x)), "arrow of H", "missing"),
            }
        }
    }
    if w.epsilon.len() != h.num_objects() || w.epsilon.iter().any(|&e| e >= h.num_arrows()) {
        r.push("domain", "ε", "arrow of H per object", "missing");
    }
    if !r.passed() {
        return r;
    }
    let a0 = |a: usize, x: usize| w.a0[&(a, x)];
    let a1 = |a: usize, k: usize| w.a1[&(a, k)];
    let al = |a: usize, b: usize, x: usize| w.alpha[&(a, b, x)];
    let comp = |p: usize, q: usize| h.try_compose(p, q);

    for k in 0..h.num_arrows() {
        if f[h.src(k)] != f[h.tgt(k)] {
            r.push("moment-functor", an(k), on(h.src(k)), on(h.tgt(k)));
        }
    }
    for (&(a, x), &y) in &w.a0 {
        if f[y] != g.tgt(a) {
            r.push("moment", format!("({},{})", gn(a), on(x)), g.object_name(g.tgt(a)), g.object_name(f[y]));
        }
    }
    for (&(a, k), &v) in &w.a1 {
        let loc = format!("({},{})", gn(a), an(k));
        if h.src(v) != a0(a, h.src(k)) {
            r.push("functor-source", &loc, on(a0(a, h.src(k))), on(h.src(v)));
        }
        if h.tgt(v) != a0(a, h.tgt(k)) {
            r.push("functor-target", &loc, on(a0(a, h.tgt(k))), on(h.tgt(v)));
        }
    }
    for (&(a, b, x), &v) in &w.alpha {
        let loc = format!("({},{},{})", gn(a), gn(b), on(x));
        let want_s = a0(a, a0(b, x));
        let want_t = a0(g.compose(a, b), x);
        if h.src(v) != want_s {
            r.push("alpha-source", &loc, on(want_s), on(h.src(v)));
        }
        if h.tgt(v) != want_t {
            r.push("alpha-target", &loc, on(want_t), on(h.tgt(v)));
        }
    }
    for x in 0..h.num_objects() {
        let e = w.epsilon[x];
        let ux = g.unit(f[x]);
        if h.src(e) != a0(ux, x) {
            r.push("epsilon-source", on(x), on(a0(ux, x)), on(h.src(e)));
        }
        if h.tgt(e) != x {
            r.push("epsilon-target", on(x), on(x), on(h.tgt(e)));
        }
    }
    if !r.passed() {
        return r;
    }
    let show = |o: Option<usize>| o.map_or("not composable".to_string(), |k| h.arrow_name(k).to_string());
    for a in 0..g.num_arrows() {
        for x in (0..h.num_objects()).filter(|&x| f[x] == g.src(a)) {
            let got = a1(a, h.unit(x));
            let want = h.unit(a0(a, x));
            if got != want {
                r.push("functor-unit", format!("({},{})", gn(a), on(x)), an(want), an(got));
            }
        }
        for &(p, qq) in h.pairs() {
            if f[h.src(qq)] != g.src(a) {
                continue;
            }
            let lhs = Some(a1(a, h.compose(p, qq)));
            let rhs = comp(a1(a, p), a1(a, qq));
            if lhs != rhs {
                r.push("functor-mult", format!("({},{},{})", gn(a), an(p), an(qq)), show(rhs), show(lhs));
            }
        }
    }
    for &(a, b) in g.pairs() {
        let ab = g.compose(a, b);
        for k in (0..h.num_arrows()).filter(|&k| f[h.src(k)] == g.src(b)) {
            let (x, y) = (h.src(k), h.tgt(k));
            let lhs = comp(al(a, b, y), a1(a, a1(b, k)));
            let rhs = comp(a1(ab, k), al(a, b, x));
            if lhs.is_none() || lhs != rhs {
                r.push("alpha-naturality", format!("({},{},{})", gn(a), gn(b), an(k)), show(rhs), show(lhs));
            }
        }
    }
    for &(a, b) in g.pairs() {
        for c in g.pairs().iter().filter(|p| p.0 == b).map(|p| p.1) {
            for x in (0..h.num_objects()).filter(|&x| f[x] == g.src(c)) {
                let (ab, bc) = (g.compose(a, b), g.compose(b, c));
                let lhs = comp(al(a, bc, x), a1(a, al(b, c, x)));
                let rhs = comp(al(ab, c, x), al(a, b, a0(c, x)));
                if lhs.is_none() || lhs != rhs {
                    r.push("pentagon", format!("({},{},{},{})", gn(a), gn(b), gn(c), on(x)), show(rhs), show(lhs));
                }
            }
        }
    }
    for x in 0..h.num_objects() {
        let ux = g.unit(f[x]);
        for k in (0..h.num_arrows()).filter(|&k| h.src(k) == x) {
            let y = h.tgt(k);
            let lhs = comp(k, w.epsilon[x]);
            let rhs = comp(w.epsilon[y], a1(ux, k));
            if lhs.is_none() || lhs != rhs {
                r.push("epsilon-naturality", an(k), show(rhs), show(lhs));
            }
        }
    }
    for a in 0..g.num_arrows() {
        for x in (0..h.num_objects()).filter(|&x| f[x] == g.src(a)) {
            let (us, ut) = (g.unit(g.src(a)), g.unit(g.tgt(a)));
            let left = al(a, us, x);
            let want = a1(a, w.epsilon[x]);
            if left != want {
                r.push("unit-right", format!("({},{})", gn(a), on(x)), an(want), an(left));
            }
            let right = al(ut, a, x);
            let want = w.epsilon[a0(a, x)];
            if right != want {
                r.push("unit-left", format!("({},{})", gn(a), on(x)), an(want), an(right));
            }
        }
    }
    r
}

/// The action groupoid: objects of `H`, arrows `(g, x, h)` with
/// `s(g) = f(x)` and `t(h) = g·x`, from `x` to `s(h)`, and
/// `(g, x, h)(g', x', h') = (gg', x', α(g, g', x')·(g·h')·h)`.
pub fn action_groupoid(w: &WeakAction) -> Result<FiniteGroupoid> {
    let rep = validate_weak_action(w);
    if !rep.passed() {
        return Err(Error::Validation(format!("invalid weak action: {}", rep.failed_checks().join(", "))));
    }
    let (g, h) = (&*w.acting, &*w.target);
    let mut arrows: Vec<(usize, usize, usize)> = Vec::new();
    for a in 0..g.num_arrows() {
        for x in (0..h.num_objects()).filter(|&x| w.moment[x] == g.src(a)) {
            let gx = w.a0[&(a, x)];
            for k in (0..h.num_arrows()).filter(|&k| h.tgt(k) == gx) {
                arrows.push((a, x, k));
            }
        }
    }
    let name = |&(a, x, k): &(usize, usize, usize)| {
        format!("({},{},{})", g.arrow_name(a), h.object_name(x), h.arrow_name(k))
    };
    let index: HashMap<String, usize> = arrows.iter().enumerate().map(|(i, t)| (name(t), i)).collect();
    let mul = |p: (usize, usize, usize), q: (usize, usize, usize)| -> (usize, usize, usize) {
        let (a, _, k) = p;
        let (b, x2, k2) = q;
        let inner = h.compose(w.a1[&(a, k2)], k);
        (g.compose(a, b), x2, h.compose(w.alpha[&(a, b, x2)], inner))
    };
    let unit = |x: usize| (g.unit(w.moment[x]), x, h.inv(w.epsilon[x]));
    let specs: Vec<ArrowSpec> = arrows
        .iter()
        .map(|t| ArrowSpec { id: name(t), src: h.object_name(t.1).to_string(), tgt: h.object_name(h.src(t.2)).to_string() })
        .collect();
    let obj_index: HashMap<&str, usize> = (0..h.num_objects()).map(|x| (h.object_name(x), x)).collect();
    let mut inverse = vec![usize::MAX; arrows.len()];
    for (i, &(a, x, k)) in arrows.iter().enumerate() {
        let y = h.src(k);
        let target_unit = unit(x);
        inverse[i] = (0..arrows.len())
            .find(|&j| {
                let c = arrows[j];
                c.0 == g.inv(a) && c.1 == y && mul(c, (a, x, k)) == target_unit
            })
            .ok_or_else(|| Error::Validation(format!("no inverse for {}", name(&(a, x, k)))))?;
    }
    FiniteGroupoid::from_fns(
        h.objects().to_vec(),
        specs,
        |o| name(&unit(obj_index[o])),
        |p, q| name(&mul(arrows[index[p]], arrows[index[q]])),
        |p| name(&arrows[inverse[index[p]]]),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid::validate_groupoid;

    fn z2_extension(cocycle: bool) -> WeakAction {
        let g = Arc::new(FiniteGroupoid::cyclic(2));
        let h = Arc::new(FiniteGroupoid::cyclic(2));
        let gen = g.arrow_id("g").unwrap();
        let hgen = h.arrow_id("g").unwrap();
        let he = h.arrow_id("e").unwrap();
        WeakAction::from_fns(
            g.clone(),
            h.clone(),
            vec![0],
            |_, x| x,
            |_, k| k,
            |a, b, _| if cocycle && a == gen && b == gen { hgen } else { he },
            |_| he,
        )
        .unwrap()
    }

    #[test]
    fn trivial_action_with_cocycle_gives_z4() {
        let w = z2_extension(true);
        let rep = validate_weak_action(&w);
        assert!(rep.passed(), "{rep}");
        let ag = action_groupoid(&w).unwrap();
        assert!(validate_groupoid(&ag).passed());
        assert_eq!(ag.num_arrows(), 4);
        // some arrow has order 4
        let order = |a: usize| {
            let mut p = a;
            let mut n = 1;
            while !ag.is_unit(p) {
                p = ag.compose(p, a);
                n += 1;
            }
            n
        };
        assert!((0..4).any(|a| order(a) == 4));
        let plain = action_groupoid(&z2_extension(false)).unwrap();
        assert!((0..4).all(|a| plain.compose(a, a) == plain.unit(0)));
    }

    #[test]
    fn classical_action_on_a_set() {
        let g = Arc::new(FiniteGroupoid::cyclic(2));
        let pts = vec!["p".to_string(), "q".to_string()];
        let h = Arc::new(FiniteGroupoid::discrete(&pts));
        let gen = g.arrow_id("g").unwrap();
        let w = WeakAction::strict(g, h, vec![0, 0], |a, x| if a == gen { 1 - x } else { x }, |a, k| if a == gen { 1 - k } else { k })
            .unwrap();
        assert!(validate_weak_action(&w).passed());
        let ag = action_groupoid(&w).unwrap();
        assert!(validate_groupoid(&ag).passed());
        assert_eq!((ag.num_objects(), ag.num_arrows()), (2, 4));
        // one arrow between any two objects
        for x in 0..2 {
            for y in 0..2 {
                assert_eq!((0..4).filter(|&a| ag.src(a) == x && ag.tgt(a) == y).count(), 1);
            }
        }
    }

    #[test]
    fn broken_associator_is_reported() {
        let mut w = z2_extension(true);
        // α(g,e,*) := generator breaks the unit coherence and the pentagon
        let key = (1, 0, 0);
        w.alpha.insert(key, 1);
        let rep = validate_weak_action(&w);
        assert!(rep.has_check("pentagon"), "{rep}");
        assert!(rep.has_check("unit-right"));
        assert!(action_groupoid(&w).is_err());
    }

    #[test]
    fn broken_action_table_is_reported() {
        let mut w = z2_extension(false);
        // the generator acting on the unit arrow must give the unit
        w.a1.insert((1, 0), 1);
        let rep = validate_weak_action(&w);
        assert!(rep.has_check("functor-unit"), "{rep}");
        assert!(rep.has_check("functor-mult"));
        let mut w = z2_extension(false);
        w.a0.remove(&(1, 0));
        assert!(validate_weak_action(&w).has_check("domain"));
    }
}
