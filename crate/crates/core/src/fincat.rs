//! Explicit finite categories, functors between them, and their checkers.

use crate::category::Category;
use crate::report::{CheckBuilder, VerificationReport, Witness};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct ObjId(pub u32);

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct MorId(pub u32);

impl ObjId {
    pub fn idx(self) -> usize {
        self.0 as usize
    }
}

impl MorId {
    pub fn idx(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CategoryError {
    #[error("duplicate object id `{0}`")]
    DuplicateObject(String),
    #[error("duplicate morphism id `{0}`")]
    DuplicateMorphism(String),
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error("unknown morphism `{0}`")]
    UnknownMorphism(String),
    #[error("object `{0}` has no identity")]
    MissingIdentity(String),
    #[error("identity of `{obj}` is `{mor}`, which is not an endomorphism of it")]
    BadIdentity { obj: String, mor: String },
    #[error("composition `{g}∘{f}` given twice")]
    DuplicateComposition { g: String, f: String },
    #[error("malformed composition key `{0}`")]
    BadKey(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorRecord {
    pub name: String,
    pub src: ObjId,
    pub dst: ObjId,
}

/// A finite category stored as explicit tables.
#[derive(Clone, Debug)]
pub struct FinCategory {
    name: String,
    objects: Vec<String>,
    obj_index: HashMap<String, ObjId>,
    morphisms: Vec<MorRecord>,
    mor_index: HashMap<String, MorId>,
    identities: Vec<MorId>,
    table: HashMap<(MorId, MorId), MorId>,
    homs: HashMap<(ObjId, ObjId), Vec<MorId>>,
}

impl PartialEq for FinCategory {
    fn eq(&self, other: &Self) -> bool {
        self.objects == other.objects
            && self.morphisms == other.morphisms
            && self.identities == other.identities
            && self.table == other.table
    }
}

#[derive(Debug, Default)]
pub struct FinCategoryBuilder {
    name: String,
    objects: Vec<String>,
    obj_index: HashMap<String, ObjId>,
    morphisms: Vec<MorRecord>,
    mor_index: HashMap<String, MorId>,
    identities: Vec<Option<MorId>>,
    table: HashMap<(MorId, MorId), MorId>,
}

impl FinCategoryBuilder {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            ..Self::default()
        }
    }

    pub fn object(&mut self, name: impl Into<String>) -> Result<ObjId, CategoryError> {
        let name = name.into();
        if self.obj_index.contains_key(&name) {
            return Err(CategoryError::DuplicateObject(name));
        }
        let id = ObjId(self.objects.len() as u32);
        self.obj_index.insert(name.clone(), id);
        self.objects.push(name);
        self.identities.push(None);
        Ok(id)
    }

    pub fn obj_id(&self, name: &str) -> Result<ObjId, CategoryError> {
        self.obj_index
            .get(name)
            .copied()
            .ok_or_else(|| CategoryError::UnknownObject(name.to_string()))
    }

    pub fn mor_id(&self, name: &str) -> Result<MorId, CategoryError> {
        self.mor_index
            .get(name)
            .copied()
            .ok_or_else(|| CategoryError::UnknownMorphism(name.to_string()))
    }

    pub fn morphism(
        &mut self,
        name: impl Into<String>,
        src: ObjId,
        dst: ObjId,
    ) -> Result<MorId, CategoryError> {
        let name = name.into();
        if self.mor_index.contains_key(&name) {
            return Err(CategoryError::DuplicateMorphism(name));
        }
        let id = MorId(self.morphisms.len() as u32);
        self.mor_index.insert(name.clone(), id);
        self.morphisms.push(MorRecord { name, src, dst });
        Ok(id)
    }

    pub fn identity(&mut self, obj: ObjId, mor: MorId) -> Result<(), CategoryError> {
        let r = &self.morphisms[mor.idx()];
        if r.src != obj || r.dst != obj {
            return Err(CategoryError::BadIdentity {
                obj: self.objects[obj.idx()].clone(),
                mor: r.name.clone(),
            });
        }
        self.identities[obj.idx()] = Some(mor);
        Ok(())
    }

    pub fn compose(&mut self, g: MorId, f: MorId, h: MorId) -> Result<(), CategoryError> {
        if self.table.insert((g, f), h).is_some() {
            return Err(CategoryError::DuplicateComposition {
                g: self.morphisms[g.idx()].name.clone(),
                f: self.morphisms[f.idx()].name.clone(),
            });
        }
        Ok(())
    }

    pub fn build(self) -> Result<FinCategory, CategoryError> {
        let mut identities = Vec::with_capacity(self.objects.len());
        for (i, id) in self.identities.iter().enumerate() {
            match id {
                Some(m) => identities.push(*m),
                None => return Err(CategoryError::MissingIdentity(self.objects[i].clone())),
            }
        }
        let mut homs: HashMap<(ObjId, ObjId), Vec<MorId>> = HashMap::new();
        for (i, r) in self.morphisms.iter().enumerate() {
            homs.entry((r.src, r.dst)).or_default().push(MorId(i as u32));
        }
        Ok(FinCategory {
            name: self.name,
            objects: self.objects,
            obj_index: self.obj_index,
            morphisms: self.morphisms,
            mor_index: self.mor_index,
            identities,
            table: self.table,
            homs,
        })
    }
}

impl FinCategory {
    /// Builds a category from string ids; the composition list holds `(g, f, g∘f)`.
    pub fn from_names(
        name: &str,
        objects: &[&str],
        morphisms: &[(&str, &str, &str)],
        identities: &[(&str, &str)],
        compose: &[(&str, &str, &str)],
    ) -> Result<Self, CategoryError> {
        let mut b = FinCategoryBuilder::new(name);
        for o in objects {
            b.object(*o)?;
        }
        for (m, s, t) in morphisms {
            let (s, t) = (b.obj_id(s)?, b.obj_id(t)?);
            b.morphism(*m, s, t)?;
        }
        for (o, m) in identities {
            let (o, m) = (b.obj_id(o)?, b.mor_id(m)?);
            b.identity(o, m)?;
        }
        for (g, f, h) in compose {
            let (g, f, h) = (b.mor_id(g)?, b.mor_id(f)?, b.mor_id(h)?);
            b.compose(g, f, h)?;
        }
        b.build()
    }

    /// The poset category on `elements` with one arrow `a->b` per relation.
    pub fn poset(name: &str, elements: &[String], leq: impl Fn(usize, usize) -> bool) -> Self {
        let mut b = FinCategoryBuilder::new(name);
        for e in elements {
            b.object(e.clone()).expect("distinct poset elements");
        }
        let n = elements.len();
        let mut arrow = vec![None; n * n];
        for i in 0..n {
            for j in 0..n {
                if leq(i, j) {
                    let m = b
                        .morphism(
                            format!("{}->{}", elements[i], elements[j]),
                            ObjId(i as u32),
                            ObjId(j as u32),
                        )
                        .expect("distinct arrows");
                    arrow[i * n + j] = Some(m);
                }
            }
        }
        for i in 0..n {
            let m = arrow[i * n + i].expect("poset relation is reflexive");
            b.identity(ObjId(i as u32), m).expect("endomorphism");
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if let (Some(f), Some(g)) = (arrow[i * n + j], arrow[j * n + k]) {
                        let h = arrow[i * n + k].expect("poset relation is transitive");
                        b.compose(g, f, h).expect("fresh entry");
                    }
                }
            }
        }
        b.build().expect("poset category is well formed")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn morphism_count(&self) -> usize {
        self.morphisms.len()
    }

    pub fn objects(&self) -> impl Iterator<Item = ObjId> + '_ {
        (0..self.objects.len() as u32).map(ObjId)
    }

    pub fn morphisms(&self) -> impl Iterator<Item = MorId> + '_ {
        (0..self.morphisms.len() as u32).map(MorId)
    }

    pub fn object_name(&self, x: ObjId) -> &str {
        &self.objects[x.idx()]
    }

    pub fn morphism_name(&self, f: MorId) -> &str {
        &self.morphisms[f.idx()].name
    }

    pub fn record(&self, f: MorId) -> &MorRecord {
        &self.morphisms[f.idx()]
    }

    pub fn obj(&self, name: &str) -> Option<ObjId> {
        self.obj_index.get(name).copied()
    }

    pub fn mor(&self, name: &str) -> Option<MorId> {
        self.mor_index.get(name).copied()
    }

    pub fn id_of(&self, x: ObjId) -> MorId {
        self.identities[x.idx()]
    }

    pub fn table_entry(&self, g: MorId, f: MorId) -> Option<MorId> {
        self.table.get(&(g, f)).copied()
    }

    pub fn table_len(&self) -> usize {
        self.table.len()
    }

    /// Composable pairs `(g, f)` in id order.
    pub fn composable_pairs(&self) -> Vec<(MorId, MorId)> {
        let mut out = Vec::new();
        for f in self.morphisms() {
            for g in self.morphisms() {
                if self.record(f).dst == self.record(g).src {
                    out.push((g, f));
                }
            }
        }
        out
    }
}

impl Category for FinCategory {
    type Obj = ObjId;
    type Mor = MorId;

    fn source(&self, f: &MorId) -> ObjId {
        self.morphisms[f.idx()].src
    }
    fn target(&self, f: &MorId) -> ObjId {
        self.morphisms[f.idx()].dst
    }
    fn identity(&self, x: &ObjId) -> MorId {
        self.identities[x.idx()]
    }
    fn compose(&self, g: &MorId, f: &MorId) -> Option<MorId> {
        if self.target(f) != self.source(g) {
            return None;
        }
        self.table.get(&(*g, *f)).copied()
    }
    fn hom(&self, x: &ObjId, y: &ObjId) -> Vec<MorId> {
        self.homs.get(&(*x, *y)).cloned().unwrap_or_default()
    }
    fn window(&self) -> Vec<ObjId> {
        self.objects().collect()
    }
    fn obj_label(&self, x: &ObjId) -> String {
        self.objects[x.idx()].clone()
    }
    fn mor_label(&self, f: &MorId) -> String {
        self.morphisms[f.idx()].name.clone()
    }
}

/// The axioms of a category, checked exhaustively on the tables.
pub fn check_category(c: &FinCategory) -> VerificationReport {
    let mut rep = VerificationReport::new(format!("category {}", c.name()));
    let name = |f: MorId| c.morphism_name(f).to_string();

    let mut closure = CheckBuilder::new("category.closure", "composition defined on composable pairs");
    for (g, f) in c.composable_pairs() {
        let ok = match c.table_entry(g, f) {
            Some(h) => c.record(h).src == c.record(f).src && c.record(h).dst == c.record(g).dst,
            None => false,
        };
        closure.observe(ok, || {
            let w = Witness::new().with("g", name(g)).with("f", name(f));
            match c.table_entry(g, f) {
                Some(h) => w.with("g∘f", name(h)).with("problem", "wrong endpoints"),
                None => w.with("problem", "missing entry"),
            }
        });
    }
    rep.add(closure);

    let mut units = CheckBuilder::new("category.units", "identities are two-sided units");
    for f in c.morphisms() {
        let (s, t) = (c.record(f).src, c.record(f).dst);
        let right = c.compose(&f, &c.id_of(s)) == Some(f);
        let left = c.compose(&c.id_of(t), &f) == Some(f);
        units.observe(left && right, || {
            Witness::new()
                .with("f", name(f))
                .with("side", if right { "left" } else { "right" })
        });
    }
    rep.add(units);

    let mut assoc = CheckBuilder::new("category.associativity", "composition is associative");
    for f in c.morphisms() {
        for g in c.hom_from(c.record(f).dst) {
            for h in c.hom_from(c.record(g).dst) {
                let lhs = c.compose(&g, &f).and_then(|gf| c.compose(&h, &gf));
                let rhs = c.compose(&h, &g).and_then(|hg| c.compose(&hg, &f));
                assoc.observe(lhs.is_some() && lhs == rhs, || {
                    Witness::new()
                        .with("h", name(h))
                        .with("g", name(g))
                        .with("f", name(f))
                });
            }
        }
    }
    rep.add(assoc);
    rep
}

impl FinCategory {
    /// The opposite category; morphism names are kept.
    pub fn opposite(&self) -> FinCategory {
        let mut b = FinCategoryBuilder::new(format!("{}^op", self.name));
        for x in self.objects() {
            b.object(self.object_name(x)).expect("distinct");
        }
        for f in self.morphisms() {
            let r = self.record(f);
            b.morphism(r.name.clone(), r.dst, r.src).expect("distinct");
        }
        for x in self.objects() {
            b.identity(x, self.id_of(x)).expect("endomorphism");
        }
        for (&(g, f), &h) in &self.table {
            b.compose(f, g, h).expect("fresh");
        }
        b.build().expect("opposite is well formed")
    }

    /// The subcategory on all objects and the morphisms selected by `keep`,
    /// which must contain the identities and be closed under composition.
    pub fn wide_subcategory(
        &self,
        name: impl Into<String>,
        keep: impl Fn(MorId) -> bool,
    ) -> Result<(FinCategory, Vec<MorId>), CategoryError> {
        let mut b = FinCategoryBuilder::new(name);
        for x in self.objects() {
            b.object(self.object_name(x))?;
        }
        let kept: Vec<MorId> = self.morphisms().filter(|f| keep(*f)).collect();
        let mut local = HashMap::new();
        for f in &kept {
            let r = self.record(*f);
            local.insert(*f, b.morphism(r.name.clone(), r.src, r.dst)?);
        }
        for x in self.objects() {
            let id = self.id_of(x);
            let m = *local
                .get(&id)
                .ok_or_else(|| CategoryError::MissingIdentity(self.object_name(x).to_string()))?;
            b.identity(x, m)?;
        }
        for f in &kept {
            for g in &kept {
                if let Some(h) = self.table_entry(*g, *f) {
                    let h = *local
                        .get(&h)
                        .ok_or_else(|| CategoryError::UnknownMorphism(self.morphism_name(h).to_string()))?;
                    b.compose(local[g], local[f], h)?;
                }
            }
        }
        Ok((b.build()?, kept))
    }

    fn hom_from(&self, x: ObjId) -> Vec<MorId> {
        self.morphisms().filter(|m| self.record(*m).src == x).collect()
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FunctorError {
    #[error("object map is not total: missing `{0}`")]
    MissingObject(String),
    #[error("morphism map is not total: missing `{0}`")]
    MissingMorphism(String),
    #[error("`{0}` does not name an object of the target")]
    UnknownObject(String),
    #[error("`{0}` does not name a morphism of the target")]
    UnknownMorphism(String),
    #[error("functors are not composable")]
    NotComposable,
}

/// A functor between explicit finite categories.
#[derive(Clone, Debug)]
pub struct FunctorData {
    pub source: Arc<FinCategory>,
    pub target: Arc<FinCategory>,
    obj_map: Vec<ObjId>,
    mor_map: Vec<MorId>,
}

impl FunctorData {
    pub fn new(
        source: Arc<FinCategory>,
        target: Arc<FinCategory>,
        obj_map: Vec<ObjId>,
        mor_map: Vec<MorId>,
    ) -> Result<Self, FunctorError> {
        if obj_map.len() != source.object_count() {
            let missing = source.object_name(ObjId(obj_map.len().min(source.object_count()) as u32));
            return Err(FunctorError::MissingObject(missing.to_string()));
        }
        if mor_map.len() != source.morphism_count() {
            let missing = source.morphism_name(MorId(mor_map.len().min(source.morphism_count()) as u32));
            return Err(FunctorError::MissingMorphism(missing.to_string()));
        }
        Ok(Self {
            source,
            target,
            obj_map,
            mor_map,
        })
    }

    pub fn from_names(
        source: Arc<FinCategory>,
        target: Arc<FinCategory>,
        objects: &BTreeMap<String, String>,
        morphisms: &BTreeMap<String, String>,
    ) -> Result<Self, FunctorError> {
        let mut om = Vec::new();
        for x in source.objects() {
            let n = source.object_name(x);
            let t = objects.get(n).ok_or_else(|| FunctorError::MissingObject(n.to_string()))?;
            om.push(target.obj(t).ok_or_else(|| FunctorError::UnknownObject(t.clone()))?);
        }
        let mut mm = Vec::new();
        for f in source.morphisms() {
            let n = source.morphism_name(f);
            let t = morphisms.get(n).ok_or_else(|| FunctorError::MissingMorphism(n.to_string()))?;
            mm.push(target.mor(t).ok_or_else(|| FunctorError::UnknownMorphism(t.clone()))?);
        }
        Self::new(source, target, om, mm)
    }

    pub fn identity(c: Arc<FinCategory>) -> Self {
        let om = c.objects().collect();
        let mm = c.morphisms().collect();
        Self::new(Arc::clone(&c), c, om, mm).expect("identity is total")
    }

    pub fn obj(&self, x: ObjId) -> ObjId {
        self.obj_map[x.idx()]
    }

    pub fn mor(&self, f: MorId) -> MorId {
        self.mor_map[f.idx()]
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &FunctorData) -> Result<FunctorData, FunctorError> {
        if *self.target != *next.source {
            return Err(FunctorError::NotComposable);
        }
        let om = self.obj_map.iter().map(|x| next.obj(*x)).collect();
        let mm = self.mor_map.iter().map(|f| next.mor(*f)).collect();
        FunctorData::new(Arc::clone(&self.source), Arc::clone(&next.target), om, mm)
    }
}

impl PartialEq for FunctorData {
    fn eq(&self, other: &Self) -> bool {
        self.obj_map == other.obj_map && self.mor_map == other.mor_map
    }
}

pub fn check_functor(fd: &FunctorData) -> VerificationReport {
    let (s, t) = (&*fd.source, &*fd.target);
    let mut rep = VerificationReport::new(format!("functor {} -> {}", s.name(), t.name()));

    let mut ends = CheckBuilder::new("functor.endpoints", "morphisms map between image objects");
    for f in s.morphisms() {
        let r = s.record(f);
        let ff = t.record(fd.mor(f));
        ends.observe(ff.src == fd.obj(r.src) && ff.dst == fd.obj(r.dst), || {
            Witness::new().with("f", s.morphism_name(f)).with("F(f)", &ff.name)
        });
    }
    rep.add(ends);

    let mut ids = CheckBuilder::new("functor.identities", "identities are preserved");
    for x in s.objects() {
        ids.observe(fd.mor(s.id_of(x)) == t.id_of(fd.obj(x)), || {
            Witness::new().with("object", s.object_name(x))
        });
    }
    rep.add(ids);

    let mut comp = CheckBuilder::new("functor.composition", "composites are preserved");
    for (g, f) in s.composable_pairs() {
        let lhs = s.compose(&g, &f).map(|h| fd.mor(h));
        let rhs = t.compose(&fd.mor(g), &fd.mor(f));
        comp.observe(lhs.is_some() && lhs == rhs, || {
            Witness::new()
                .with("g", s.morphism_name(g))
                .with("f", s.morphism_name(f))
        });
    }
    rep.add(comp);
    rep
}

/// The maximal subgroupoid, together with the inclusion on morphisms.
pub fn core_groupoid(c: &FinCategory) -> (FinCategory, Vec<MorId>) {
    let mut b = FinCategoryBuilder::new(format!("core({})", c.name()));
    for x in c.objects() {
        b.object(c.object_name(x)).expect("distinct");
    }
    let isos: Vec<MorId> = c.morphisms().filter(|f| c.is_iso(f)).collect();
    let mut local = HashMap::new();
    for f in &isos {
        let r = c.record(*f);
        local.insert(*f, b.morphism(r.name.clone(), r.src, r.dst).expect("distinct"));
    }
    for x in c.objects() {
        b.identity(x, local[&c.id_of(x)]).expect("identity is iso");
    }
    for f in &isos {
        for g in &isos {
            if let Some(h) = c.compose(g, f) {
                b.compose(local[g], local[f], local[&h]).expect("fresh");
            }
        }
    }
    (b.build().expect("core is well formed"), isos)
}

/// The window of any category, written out as explicit tables.
pub struct Materialized<C: Category> {
    pub cat: Arc<FinCategory>,
    pub objs: Vec<C::Obj>,
    pub mors: Vec<C::Mor>,
    pub obj_of: HashMap<C::Obj, ObjId>,
    pub mor_of: HashMap<C::Mor, MorId>,
}

pub fn materialize<C: Category>(c: &C, name: &str) -> Materialized<C> {
    let mut b = FinCategoryBuilder::new(name);
    let objs = c.window();
    let mut obj_of = HashMap::new();
    for x in &objs {
        obj_of.insert(x.clone(), b.object(c.obj_label(x)).expect("distinct labels"));
    }
    let mut mors = Vec::new();
    let mut mor_of = HashMap::new();
    for x in &objs {
        for y in &objs {
            for f in c.hom(x, y) {
                let id = b
                    .morphism(c.mor_label(&f), obj_of[x], obj_of[y])
                    .expect("distinct labels");
                mor_of.insert(f.clone(), id);
                mors.push(f);
            }
        }
    }
    for x in &objs {
        b.identity(obj_of[x], mor_of[&c.identity(x)]).expect("endomorphism");
    }
    for f in &mors {
        for y in &objs {
            for g in c.hom(&c.target(f), y) {
                let h = c.comp(&g, f);
                b.compose(mor_of[&g], mor_of[f], mor_of[&h]).expect("fresh");
            }
        }
    }
    Materialized {
        cat: Arc::new(b.build().expect("materialized window is well formed")),
        objs,
        mors,
        obj_of,
        mor_of,
    }
}

impl fmt::Display for FinCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} ({} objects, {} morphisms)",
            self.name,
            self.objects.len(),
            self.morphisms.len()
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arrow() -> FinCategory {
        FinCategory::from_names(
            "arrow",
            &["a", "b"],
            &[("1a", "a", "a"), ("1b", "b", "b"), ("f", "a", "b")],
            &[("a", "1a"), ("b", "1b")],
            &[
                ("1a", "1a", "1a"),
                ("1b", "1b", "1b"),
                ("f", "1a", "f"),
                ("1b", "f", "f"),
            ],
        )
        .unwrap()
    }

    #[test]
    fn arrow_category_passes() {
        let rep = check_category(&arrow());
        assert!(rep.fully_passed(), "{}", rep.to_text());
    }

    #[test]
    fn missing_entry_is_located() {
        let c = FinCategory::from_names(
            "broken",
            &["a", "b"],
            &[("1a", "a", "a"), ("1b", "b", "b"), ("f", "a", "b")],
            &[("a", "1a"), ("b", "1b")],
            &[("1a", "1a", "1a"), ("1b", "1b", "1b"), ("f", "1a", "f")],
        )
        .unwrap();
        let rep = check_category(&c);
        let w = rep.check("category.closure").unwrap().witness.clone().unwrap();
        assert_eq!(w.get("g"), Some("1b"));
        assert_eq!(w.get("f"), Some("f"));
    }

    #[test]
    fn dangling_ids_are_malformed() {
        let e = FinCategory::from_names("x", &["a"], &[("1a", "a", "q")], &[], &[]);
        assert_eq!(e.unwrap_err(), CategoryError::UnknownObject("q".into()));
        let e = FinCategory::from_names("x", &["a"], &[("1a", "a", "a")], &[], &[]);
        assert_eq!(e.unwrap_err(), CategoryError::MissingIdentity("a".into()));
    }

    #[test]
    fn poset_of_two_chain_is_arrow_shaped() {
        let c = FinCategory::poset("2", &["0".into(), "1".into()], |i, j| i <= j);
        assert_eq!(c.morphism_count(), 3);
        assert!(check_category(&c).fully_passed());
    }

    #[test]
    fn core_of_arrow_drops_f() {
        let (g, inc) = core_groupoid(&arrow());
        assert_eq!(g.morphism_count(), 2);
        assert_eq!(inc.len(), 2);
        assert!(check_category(&g).fully_passed());
    }

    #[test]
    fn functor_checks_and_composes() {
        let a = Arc::new(arrow());
        let id = FunctorData::identity(Arc::clone(&a));
        assert!(check_functor(&id).fully_passed());
        // collapse onto the object a
        let f1a = a.mor("1a").unwrap();
        let bad = FunctorData::new(
            Arc::clone(&a),
            Arc::clone(&a),
            vec![a.obj("a").unwrap(); 2],
            vec![f1a, f1a, a.mor("f").unwrap()],
        )
        .unwrap();
        let rep = check_functor(&bad);
        assert!(!rep.passed());
        assert_eq!(id.then(&id).unwrap(), id);
        let e = FunctorData::new(Arc::clone(&a), a, vec![], vec![]);
        assert!(matches!(e, Err(FunctorError::MissingObject(_))));
    }
}
