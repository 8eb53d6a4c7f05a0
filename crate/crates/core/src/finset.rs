//! Finite sets and functions, with a finite window of objects.
//!
//! Pullbacks and products are computed set-theoretically, so their apexes may
//! fall outside the window; checks only quantify over window objects.

use crate::category::{Category, Cone, EdgeClass, Square};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct SetObj {
    pub size: usize,
    pub tag: u8,
}

impl SetObj {
    pub const fn n(size: usize) -> Self {
        Self { size, tag: 0 }
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Func {
    pub src: SetObj,
    pub dst: SetObj,
    pub map: Vec<usize>,
}

impl Func {
    pub fn new(src: SetObj, dst: SetObj, map: Vec<usize>) -> Self {
        assert_eq!(map.len(), src.size, "function table length");
        assert!(map.iter().all(|&v| v < dst.size), "function value out of range");
        Self { src, dst, map }
    }

    pub fn of(src: usize, dst: usize, map: &[usize]) -> Self {
        Self::new(SetObj::n(src), SetObj::n(dst), map.to_vec())
    }

    pub fn identity(x: SetObj) -> Self {
        Self::new(x, x, (0..x.size).collect())
    }

    pub fn apply(&self, i: usize) -> usize {
        self.map[i]
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.dst.size];
        self.map.iter().all(|&v| !std::mem::replace(&mut seen[v], true))
    }

    pub fn is_surjective(&self) -> bool {
        let mut hit = vec![false; self.dst.size];
        for &v in &self.map {
            hit[v] = true;
        }
        hit.into_iter().all(|h| h)
    }

    pub fn is_bijective(&self) -> bool {
        self.src.size == self.dst.size && self.is_injective()
    }

    pub fn fiber(&self, y: usize) -> Vec<usize> {
        (0..self.src.size).filter(|&x| self.map[x] == y).collect()
    }

    /// `self ∘ f`.
    pub fn after(&self, f: &Func) -> Func {
        assert_eq!(f.dst, self.src, "composing non-composable functions");
        Func::new(f.src, self.dst, f.map.iter().map(|&i| self.map[i]).collect())
    }
}

impl fmt::Display for Func {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vals: Vec<String> = self.map.iter().map(usize::to_string).collect();
        write!(f, "{}->{}[{}]", self.src.size, self.dst.size, vals.join(","))
    }
}

/// Every function `x -> y`, in lexicographic order of value tables.
pub fn all_functions(x: SetObj, y: SetObj) -> Vec<Func> {
    if x.size > 0 && y.size == 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut cur = vec![0usize; x.size];
    loop {
        out.push(Func::new(x, y, cur.clone()));
        let mut i = x.size;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            cur[i] += 1;
            if cur[i] < y.size {
                break;
            }
            cur[i] = 0;
        }
    }
}

#[derive(Clone, Debug)]
pub struct FinSet {
    max: usize,
    extra: Vec<SetObj>,
    labels: BTreeMap<SetObj, String>,
    probe_max: usize,
}

impl FinSet {
    /// Window of sets `{0, .., n-1}` for `n <= max`.
    pub fn upto(max: usize) -> Self {
        Self {
            max,
            extra: Vec::new(),
            labels: BTreeMap::new(),
            probe_max: max.min(2),
        }
    }

    /// Adds a further window object of the given size, distinct from `size`.
    pub fn with_extra(mut self, size: usize, label: &str) -> (Self, SetObj) {
        let tag = self.extra.len() as u8 + 1;
        let o = SetObj { size, tag };
        self.extra.push(o);
        self.labels.insert(o, label.to_string());
        (self, o)
    }

    pub fn max(&self) -> usize {
        self.max
    }

    pub fn is_small(&self, x: &SetObj) -> bool {
        x.tag == 0
    }
}

impl Category for FinSet {
    type Obj = SetObj;
    type Mor = Func;

    fn source(&self, f: &Func) -> SetObj {
        f.src
    }
    fn target(&self, f: &Func) -> SetObj {
        f.dst
    }
    fn identity(&self, x: &SetObj) -> Func {
        Func::identity(*x)
    }
    fn compose(&self, g: &Func, f: &Func) -> Option<Func> {
        (f.dst == g.src).then(|| g.after(f))
    }
    fn hom(&self, x: &SetObj, y: &SetObj) -> Vec<Func> {
        all_functions(*x, *y)
    }
    fn window(&self) -> Vec<SetObj> {
        let mut w: Vec<SetObj> = (0..=self.max).map(SetObj::n).collect();
        w.extend(self.extra.iter().copied());
        w.sort();
        w
    }
    fn obj_label(&self, x: &SetObj) -> String {
        match self.labels.get(x) {
            Some(l) => l.clone(),
            None if x.tag == 0 => x.size.to_string(),
            None => format!("{}#{}", x.size, x.tag),
        }
    }
    fn mor_label(&self, f: &Func) -> String {
        let vals: Vec<String> = f.map.iter().map(usize::to_string).collect();
        format!("{}->{}[{}]", self.obj_label(&f.src), self.obj_label(&f.dst), vals.join(","))
    }
    fn probe_objects(&self) -> Vec<SetObj> {
        (0..=self.probe_max).map(SetObj::n).collect()
    }
    fn inverse(&self, f: &Func) -> Option<Func> {
        if !f.is_bijective() {
            return None;
        }
        let mut inv = vec![0; f.src.size];
        for (i, &v) in f.map.iter().enumerate() {
            inv[v] = i;
        }
        Some(Func::new(f.dst, f.src, inv))
    }
    fn is_iso(&self, f: &Func) -> bool {
        f.is_bijective()
    }
    fn is_mono(&self, f: &Func) -> bool {
        f.is_injective()
    }
    fn factorizations(&self, apex: &SetObj, legs: &[Func], test: &SetObj, maps: &[Func]) -> Vec<Func> {
        let cands: Vec<Vec<usize>> = (0..test.size)
            .map(|t| {
                (0..apex.size)
                    .filter(|&p| legs.iter().zip(maps).all(|(l, m)| l.map[p] == m.map[t]))
                    .collect()
            })
            .collect();
        if cands.iter().any(Vec::is_empty) {
            return Vec::new();
        }
        let mut out = Vec::new();
        let mut pick = vec![0usize; test.size];
        loop {
            out.push(Func::new(
                *test,
                *apex,
                pick.iter().enumerate().map(|(t, &k)| cands[t][k]).collect(),
            ));
            let mut i = test.size;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                pick[i] += 1;
                if pick[i] < cands[i].len() {
                    break;
                }
                pick[i] = 0;
            }
        }
    }
    fn factor(&self, apex: &SetObj, legs: &[Func], test: &SetObj, maps: &[Func]) -> Option<Func> {
        let mut out = Vec::with_capacity(test.size);
        for t in 0..test.size {
            let mut hit = (0..apex.size)
                .filter(|&p| legs.iter().zip(maps).all(|(l, m)| l.map[p] == m.map[t]));
            let p = hit.next()?;
            if hit.next().is_some() {
                return None;
            }
            out.push(p);
        }
        Some(Func::new(*test, *apex, out))
    }
    fn pullback(&self, f: &Func, g: &Func) -> Option<Square<SetObj, Func>> {
        if f.dst != g.dst {
            return None;
        }
        let mut pairs = Vec::new();
        for a in 0..f.src.size {
            for b in 0..g.src.size {
                if f.map[a] == g.map[b] {
                    pairs.push((a, b));
                }
            }
        }
        let apex = SetObj::n(pairs.len());
        Some(Cone {
            apex,
            legs: vec![
                Func::new(apex, f.src, pairs.iter().map(|p| p.0).collect()),
                Func::new(apex, g.src, pairs.iter().map(|p| p.1).collect()),
            ],
        })
    }
    fn product(&self, x: &SetObj, y: &SetObj) -> Option<Cone<SetObj, Func>> {
        let apex = SetObj::n(x.size * y.size);
        Some(Cone {
            apex,
            legs: vec![
                Func::new(apex, *x, (0..apex.size).map(|k| k / y.size.max(1)).collect()),
                Func::new(apex, *y, (0..apex.size).map(|k| k % y.size.max(1)).collect()),
            ],
        })
    }
    fn find_iso_over(&self, a: &SetObj, b: &SetObj, legs_a: &[Func], legs_b: &[Func]) -> Option<Func> {
        if a.size != b.size {
            return None;
        }
        let sig = |legs: &[Func], p: usize| -> Vec<usize> { legs.iter().map(|l| l.map[p]).collect() };
        let mut pool: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
        for q in 0..b.size {
            pool.entry(sig(legs_b, q)).or_default().push(q);
        }
        for v in pool.values_mut() {
            v.reverse();
        }
        let mut map = Vec::with_capacity(a.size);
        for p in 0..a.size {
            map.push(pool.get_mut(&sig(legs_a, p))?.pop()?);
        }
        Some(Func::new(*a, *b, map))
    }
}

pub fn injective() -> EdgeClass<FinSet> {
    EdgeClass::new("inj", |_: &FinSet, f: &Func| f.is_injective())
}

pub fn surjective() -> EdgeClass<FinSet> {
    EdgeClass::new("surj", |_: &FinSet, f: &Func| f.is_surjective())
}

pub fn bijective() -> EdgeClass<FinSet> {
    EdgeClass::new("isos", |_: &FinSet, f: &Func| f.is_bijective())
}

pub fn all_maps() -> EdgeClass<FinSet> {
    EdgeClass::all()
}

/// Looks up one of the named classes of functions.
pub fn named_class(name: &str) -> Option<EdgeClass<FinSet>> {
    match name {
        "inj" | "injective" => Some(injective()),
        "surj" | "surjective" => Some(surjective()),
        "isos" | "iso" | "bij" | "bijective" => Some(bijective()),
        "all" => Some(all_maps()),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::{certify_pullback, search_pullback};
    use crate::fincat::{check_category, materialize};

    fn count(c: &FinSet) -> usize {
        crate::category::window_morphisms(c).len()
    }

    #[test]
    fn morphism_counts() {
        assert_eq!(count(&FinSet::upto(2)), 11);
        assert_eq!(count(&FinSet::upto(3)), 60);
    }

    #[test]
    fn empty_cases() {
        assert_eq!(all_functions(SetObj::n(0), SetObj::n(0)).len(), 1);
        assert_eq!(all_functions(SetObj::n(2), SetObj::n(0)).len(), 0);
        assert_eq!(all_functions(SetObj::n(0), SetObj::n(3)).len(), 1);
    }

    #[test]
    fn skeleta_are_categories() {
        for k in 0..=3 {
            let m = materialize(&FinSet::upto(k), "FinSet");
            assert!(check_category(&m.cat).fully_passed());
        }
    }

    #[test]
    fn set_pullback_agrees_with_search() {
        // pulling 2 -> 1 back along itself gives 4 elements
        let c = FinSet::upto(4);
        let f = Func::of(2, 1, &[0, 0]);
        let sq = c.pullback(&f, &f).unwrap();
        assert_eq!(sq.apex.size, 4);
        assert!(certify_pullback(&c, &f, &f, &sq).is_ok());
        let found = search_pullback(&c, &f, &f).unwrap();
        assert_eq!(found.apex.size, 4);
    }

    #[test]
    fn iso_over_matches_signatures() {
        let c = FinSet::upto(2);
        let a = [Func::of(2, 2, &[0, 1])];
        let b = [Func::of(2, 2, &[1, 0])];
        let phi = c.find_iso_over(&SetObj::n(2), &SetObj::n(2), &a, &b).unwrap();
        assert_eq!(phi.map, vec![1, 0]);
        let z = [Func::of(2, 2, &[0, 0])];
        assert!(c.find_iso_over(&SetObj::n(2), &SetObj::n(2), &a, &z).is_none());
    }

    #[test]
    fn tagged_objects_are_distinct() {
        let (c, xp) = FinSet::upto(2).with_extra(2, "X'");
        assert_eq!(c.window().len(), 4);
        assert_eq!(c.obj_label(&xp), "X'");
        assert!(c.compose(&Func::identity(SetObj::n(2)), &Func::identity(xp)).is_none());
    }
}
