//! Truncated simplicial sets: standard cells, horns, nerves, and the category
//! of simplices.

use crate::category::Category;
use crate::fincat::{FinCategory, FinCategoryBuilder, MorId, ObjId};
use std::collections::HashMap;
use std::hash::Hash;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SimplicialError {
    #[error("face d{i} of `{simplex}` in dimension {n} leaves the simplex set")]
    FaceNotClosed { n: usize, i: usize, simplex: String },
    #[error("degeneracy s{j} of `{simplex}` in dimension {n} leaves the simplex set")]
    DegeneracyNotClosed { n: usize, j: usize, simplex: String },
    #[error("simplicial identity `{identity}` fails at `{simplex}` in dimension {n}")]
    Identity { identity: String, n: usize, simplex: String },
    #[error("truncation bound {0} exceeds the supported maximum {MAX_DIM}")]
    TooDeep(usize),
    #[error("table shape does not match dimension {0}")]
    Shape(usize),
}

pub const MAX_DIM: usize = 4;

/// A simplicial set truncated at `dim`, stored as face and degeneracy tables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSimplicialSet {
    name: String,
    dim: usize,
    labels: Vec<Vec<String>>,
    /// `faces[n][i][σ]` for `1 <= n <= dim`.
    faces: Vec<Vec<Vec<usize>>>,
    /// `degens[n][j][σ]` sends an `n`-simplex to an `(n+1)`-simplex, `n < dim`.
    degens: Vec<Vec<Vec<usize>>>,
}

impl TruncatedSimplicialSet {
    /// Validates shapes and every simplicial identity.
    pub fn new(
        name: impl Into<String>,
        dim: usize,
        labels: Vec<Vec<String>>,
        faces: Vec<Vec<Vec<usize>>>,
        degens: Vec<Vec<Vec<usize>>>,
    ) -> Result<Self, SimplicialError> {
        if dim > MAX_DIM {
            return Err(SimplicialError::TooDeep(dim));
        }
        if labels.len() != dim + 1 || faces.len() != dim + 1 || degens.len() != dim + 1 {
            return Err(SimplicialError::Shape(dim));
        }
        for n in 0..=dim {
            let cnt = labels[n].len();
            if n >= 1 && (faces[n].len() != n + 1 || faces[n].iter().any(|t| t.len() != cnt)) {
                return Err(SimplicialError::Shape(n));
            }
            if n < dim && (degens[n].len() != n + 1 || degens[n].iter().any(|t| t.len() != cnt)) {
                return Err(SimplicialError::Shape(n));
            }
            if n >= 1 && faces[n].iter().flatten().any(|&s| s >= labels[n - 1].len()) {
                return Err(SimplicialError::Shape(n));
            }
            if n < dim && degens[n].iter().flatten().any(|&s| s >= labels[n + 1].len()) {
                return Err(SimplicialError::Shape(n));
            }
        }
        let k = Self {
            name: name.into(),
            dim,
            labels,
            faces,
            degens,
        };
        k.check_identities()?;
        Ok(k)
    }

    /// Builds from an explicit list of simplex keys per dimension.
    pub fn from_keys<K: Clone + Eq + Hash>(
        name: impl Into<String>,
        dim: usize,
        simplices: Vec<Vec<K>>,
        label: impl Fn(usize, &K) -> String,
        face: impl Fn(usize, usize, &K) -> K,
        degen: impl Fn(usize, usize, &K) -> K,
    ) -> Result<Self, SimplicialError> {
        if dim > MAX_DIM {
            return Err(SimplicialError::TooDeep(dim));
        }
        let index: Vec<HashMap<K, usize>> = simplices
            .iter()
            .map(|v| v.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect())
            .collect();
        let labels: Vec<Vec<String>> = simplices
            .iter()
            .enumerate()
            .map(|(n, v)| v.iter().map(|k| label(n, k)).collect())
            .collect();
        let mut faces = vec![Vec::new(); dim + 1];
        let mut degens = vec![Vec::new(); dim + 1];
        for n in 0..=dim {
            if n >= 1 {
                for i in 0..=n {
                    let mut col = Vec::with_capacity(simplices[n].len());
                    for s in &simplices[n] {
                        let f = face(n, i, s);
                        col.push(*index[n - 1].get(&f).ok_or_else(|| SimplicialError::FaceNotClosed {
                            n,
                            i,
                            simplex: label(n, s),
                        })?);
                    }
                    faces[n].push(col);
                }
            }
            if n < dim {
                for j in 0..=n {
                    let mut col = Vec::with_capacity(simplices[n].len());
                    for s in &simplices[n] {
                        let d = degen(n, j, s);
                        col.push(*index[n + 1].get(&d).ok_or_else(|| {
                            SimplicialError::DegeneracyNotClosed {
                                n,
                                j,
                                simplex: label(n, s),
                            }
                        })?);
                    }
                    degens[n].push(col);
                }
            }
        }
        Self::new(name, dim, labels, faces, degens)
    }

    fn check_identities(&self) -> Result<(), SimplicialError> {
        let fail = |identity: &str, n: usize, s: usize| SimplicialError::Identity {
            identity: identity.to_string(),
            n,
            simplex: self.labels[n][s].clone(),
        };
        for n in 2..=self.dim {
            for s in 0..self.count(n) {
                for j in 0..=n {
                    for i in 0..j {
                        if self.face(n - 1, i, self.face(n, j, s)) != self.face(n - 1, j - 1, self.face(n, i, s)) {
                            return Err(fail("d_i d_j = d_(j-1) d_i", n, s));
                        }
                    }
                }
            }
        }
        for n in 0..self.dim {
            for s in 0..self.count(n) {
                for j in 0..=n {
                    let t = self.degen(n, j, s);
                    for i in 0..=n + 1 {
                        let lhs = self.face(n + 1, i, t);
                        let ok = if i == j || i == j + 1 {
                            lhs == s
                        } else if i < j {
                            lhs == self.degen(n - 1, j - 1, self.face(n, i, s))
                        } else {
                            lhs == self.degen(n - 1, j, self.face(n, i - 1, s))
                        };
                        if !ok {
                            return Err(fail("d_i s_j", n, s));
                        }
                    }
                    if n + 1 < self.dim {
                        for i in 0..=j {
                            if self.degen(n + 1, i, t) != self.degen(n + 1, j + 1, self.degen(n, i, s)) {
                                return Err(fail("s_i s_j = s_(j+1) s_i", n, s));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn count(&self, n: usize) -> usize {
        self.labels.get(n).map_or(0, Vec::len)
    }

    pub fn label(&self, n: usize, s: usize) -> &str {
        &self.labels[n][s]
    }

    pub fn find(&self, n: usize, label: &str) -> Option<usize> {
        self.labels[n].iter().position(|l| l == label)
    }

    pub fn face(&self, n: usize, i: usize, s: usize) -> usize {
        self.faces[n][i][s]
    }

    pub fn degen(&self, n: usize, j: usize, s: usize) -> usize {
        self.degens[n][j][s]
    }

    pub fn is_degenerate(&self, n: usize, s: usize) -> bool {
        n > 0 && (0..n).any(|j| self.degens[n - 1][j].contains(&s))
    }

    pub fn nondegenerate(&self, n: usize) -> Vec<usize> {
        (0..self.count(n)).filter(|&s| !self.is_degenerate(n, s)).collect()
    }

    pub fn nondegenerate_counts(&self) -> Vec<usize> {
        (0..=self.dim).map(|n| self.nondegenerate(n).len()).collect()
    }

    /// `p^* σ` for a monotone `p: [n] -> [m]` and `σ` an `m`-simplex.
    pub fn act(&self, p: &[usize], m: usize, sigma: usize) -> usize {
        debug_assert!(p.windows(2).all(|w| w[0] <= w[1]) && p.iter().all(|&v| v <= m));
        let mut img: Vec<usize> = p.to_vec();
        img.dedup();
        let mut x = sigma;
        let mut cur = m;
        for i in (0..=m).rev() {
            if img.binary_search(&i).is_err() {
                x = self.face(cur, i, x);
                cur -= 1;
            }
        }
        let s: Vec<usize> = p.iter().map(|v| img.binary_search(v).unwrap()).collect();
        self.act_surjection(&s, x)
    }

    fn act_surjection(&self, s: &[usize], x: usize) -> usize {
        match s.windows(2).position(|w| w[0] == w[1]) {
            None => x,
            Some(j) => {
                let mut rest = s.to_vec();
                rest.remove(j + 1);
                let y = self.act_surjection(&rest, x);
                self.degen(rest.len() - 1, j, y)
            }
        }
    }

    /// Vertices of an `n`-simplex, in order.
    pub fn vertices(&self, n: usize, s: usize) -> Vec<usize> {
        (0..=n).map(|v| self.act(&[v], n, s)).collect()
    }
}

/// Every monotone map `[n] -> [m]`, as value sequences in lexicographic order.
pub fn monotone_maps(n: usize, m: usize) -> Vec<Vec<usize>> {
    fn go(len: usize, lo: usize, m: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for v in lo..=m {
            cur.push(v);
            go(len, v, m, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n + 1, 0, m, &mut Vec::new(), &mut out);
    out
}

fn seq_label(v: &[usize]) -> String {
    v.iter().map(usize::to_string).collect::<Vec<_>>().join("")
}

fn sub_cell(
    name: String,
    n: usize,
    d: usize,
    keep: impl Fn(&[usize]) -> bool,
) -> Result<TruncatedSimplicialSet, SimplicialError> {
    let simplices: Vec<Vec<Vec<usize>>> = (0..=d)
        .map(|k| monotone_maps(k, n).into_iter().filter(|s| keep(s)).collect())
        .collect();
    TruncatedSimplicialSet::from_keys(
        name,
        d,
        simplices,
        |_, s| seq_label(s),
        |_, i, s| {
            let mut t = s.clone();
            t.remove(i);
            t
        },
        |_, j, s| {
            let mut t = s.clone();
            t.insert(j, s[j]);
            t
        },
    )
}

fn image_set(s: &[usize]) -> Vec<usize> {
    let mut v = s.to_vec();
    v.dedup();
    v
}

/// The standard `n`-simplex truncated at `d`.
pub fn delta(n: usize, d: usize) -> Result<TruncatedSimplicialSet, SimplicialError> {
    sub_cell(format!("Δ{n}"), n, d, |_| true)
}

/// The boundary of the standard `n`-simplex truncated at `d`.
pub fn boundary(n: usize, d: usize) -> Result<TruncatedSimplicialSet, SimplicialError> {
    sub_cell(format!("∂Δ{n}"), n, d, |s| image_set(s).len() < n + 1)
}

/// The horn `Λ^n_k` truncated at `d`.
pub fn horn(n: usize, k: usize, d: usize) -> Result<TruncatedSimplicialSet, SimplicialError> {
    sub_cell(format!("Λ{n}_{k}"), n, d, move |s| {
        let img = image_set(s);
        img.len() < n + 1 && !(img.len() == n && !img.contains(&k))
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Chain {
    verts: Vec<ObjId>,
    arrows: Vec<MorId>,
}

/// The nerve of a finite category truncated at `d`.
pub fn nerve(c: &FinCategory, d: usize) -> Result<TruncatedSimplicialSet, SimplicialError> {
    if d > MAX_DIM {
        return Err(SimplicialError::TooDeep(d));
    }
    let mut levels: Vec<Vec<Chain>> = vec![c
        .objects()
        .map(|x| Chain {
            verts: vec![x],
            arrows: vec![],
        })
        .collect()];
    for n in 1..=d {
        let mut next = Vec::new();
        for ch in &levels[n - 1] {
            let last = *ch.verts.last().unwrap();
            for f in c.morphisms().filter(|f| c.source(f) == last) {
                let mut nc = ch.clone();
                nc.verts.push(c.target(&f));
                nc.arrows.push(f);
                next.push(nc);
            }
        }
        levels.push(next);
    }
    let label = |_: usize, ch: &Chain| {
        if ch.arrows.is_empty() {
            c.object_name(ch.verts[0]).to_string()
        } else {
            ch.arrows
                .iter()
                .map(|f| c.morphism_name(*f))
                .collect::<Vec<_>>()
                .join(" | ")
        }
    };
    let face = |n: usize, i: usize, ch: &Chain| {
        let mut verts = ch.verts.clone();
        verts.remove(i);
        let mut arrows = ch.arrows.clone();
        if i == 0 {
            arrows.remove(0);
        } else if i == n {
            arrows.pop();
        } else {
            let h = c.comp(&arrows[i], &arrows[i - 1]);
            arrows.splice(i - 1..=i, [h]);
        }
        Chain { verts, arrows }
    };
    let degen = |_: usize, j: usize, ch: &Chain| {
        let mut verts = ch.verts.clone();
        verts.insert(j, ch.verts[j]);
        let mut arrows = ch.arrows.clone();
        arrows.insert(j, c.id_of(ch.verts[j]));
        Chain { verts, arrows }
    };
    TruncatedSimplicialSet::from_keys(format!("N({})", c.name()), d, levels, label, face, degen)
}

/// Levelwise product, truncated at the smaller bound.
pub fn product(
    a: &TruncatedSimplicialSet,
    b: &TruncatedSimplicialSet,
) -> Result<TruncatedSimplicialSet, SimplicialError> {
    let d = a.dim().min(b.dim());
    let simplices: Vec<Vec<(usize, usize)>> = (0..=d)
        .map(|n| {
            (0..a.count(n))
                .flat_map(|x| (0..b.count(n)).map(move |y| (x, y)))
                .collect()
        })
        .collect();
    TruncatedSimplicialSet::from_keys(
        format!("{}×{}", a.name(), b.name()),
        d,
        simplices,
        |n, &(x, y)| format!("({},{})", a.label(n, x), b.label(n, y)),
        |n, i, &(x, y)| (a.face(n, i, x), b.face(n, i, y)),
        |n, j, &(x, y)| (a.degen(n, j, x), b.degen(n, j, y)),
    )
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HornError {
    #[error("horn index {k} is not inner for dimension {n}")]
    NotInner { n: usize, k: usize },
    #[error("expected {expected} face slots, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("dimension {0} exceeds the truncation of the ambient set")]
    TooDeep(usize),
    #[error("faces {i} and {j} do not glue")]
    Incompatible { i: usize, j: usize },
    #[error("slot {0} must be the missing face")]
    Slot(usize),
}

/// A map `Λ^n_k -> K`, given by the `n` faces other than the `k`-th.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HornProblem {
    pub n: usize,
    pub k: usize,
    pub faces: Vec<Option<usize>>,
}

impl HornProblem {
    pub fn new(n: usize, k: usize, faces: Vec<Option<usize>>) -> Self {
        Self { n, k, faces }
    }
}

/// Every filler of an inner horn, in simplex order.
pub fn fill_inner_horn(
    k: &TruncatedSimplicialSet,
    p: &HornProblem,
) -> Result<Vec<usize>, HornError> {
    let n = p.n;
    if p.k == 0 || p.k >= n {
        return Err(HornError::NotInner { n, k: p.k });
    }
    if n > k.dim() {
        return Err(HornError::TooDeep(n));
    }
    if p.faces.len() != n + 1 {
        return Err(HornError::Arity {
            expected: n + 1,
            got: p.faces.len(),
        });
    }
    for (i, f) in p.faces.iter().enumerate() {
        if (i == p.k) != f.is_none() {
            return Err(HornError::Slot(i));
        }
    }
    if n >= 2 {
        for j in 0..=n {
            for i in 0..j {
                if i == p.k || j == p.k {
                    continue;
                }
                let (xi, xj) = (p.faces[i].unwrap(), p.faces[j].unwrap());
                if k.face(n - 1, i, xj) != k.face(n - 1, j - 1, xi) {
                    return Err(HornError::Incompatible { i, j });
                }
            }
        }
    }
    Ok((0..k.count(n))
        .filter(|&s| {
            p.faces
                .iter()
                .enumerate()
                .all(|(i, f)| f.map_or(true, |x| k.face(n, i, s) == x))
        })
        .collect())
}

/// Objects `(n, σ)`, morphisms monotone `p: [n] -> [m]` with `p^* τ = σ`.
pub fn category_of_simplices(k: &TruncatedSimplicialSet) -> FinCategory {
    let mut b = FinCategoryBuilder::new(format!("Δ/{}", k.name()));
    let mut objs = Vec::new();
    for n in 0..=k.dim() {
        for s in 0..k.count(n) {
            let id = b.object(format!("({n},{})", k.label(n, s))).expect("distinct labels");
            objs.push((n, s, id));
        }
    }
    let mut mors: HashMap<(ObjId, ObjId, Vec<usize>), MorId> = HashMap::new();
    for &(n, s, x) in &objs {
        for &(m, t, y) in &objs {
            for p in monotone_maps(n, m) {
                if k.act(&p, m, t) == s {
                    let name = format!("{}->{}:{}", b_name(k, n, s), b_name(k, m, t), seq_label(&p));
                    let id = b.morphism(name, x, y).expect("distinct");
                    mors.insert((x, y, p), id);
                }
            }
        }
    }
    for &(n, _, x) in &objs {
        let idp: Vec<usize> = (0..=n).collect();
        b.identity(x, mors[&(x, x, idp)]).expect("endomorphism");
    }
    let mut keys: Vec<_> = mors.keys().cloned().collect();
    keys.sort();
    for (x, y, p) in &keys {
        for (y2, z, q) in &keys {
            if y2 != y {
                continue;
            }
            let qp: Vec<usize> = p.iter().map(|&i| q[i]).collect();
            let h = mors[&(*x, *z, qp)];
            b.compose(mors[&(*y, *z, q.clone())], mors[&(*x, *y, p.clone())], h)
                .expect("fresh");
        }
    }
    b.build().expect("category of simplices is well formed")
}

fn b_name(k: &TruncatedSimplicialSet, n: usize, s: usize) -> String {
    format!("({n},{})", k.label(n, s))
}

/// Simplicial maps `K -> L`, each as per-dimension tables.
pub fn simplicial_maps(
    k: &TruncatedSimplicialSet,
    l: &TruncatedSimplicialSet,
    mut admissible: impl FnMut(usize, usize, usize) -> bool,
) -> Vec<Vec<Vec<usize>>> {
    let d = k.dim().min(l.dim());
    let mut out = Vec::new();
    let mut cur: Vec<Vec<usize>> = (0..=d).map(|n| vec![usize::MAX; k.count(n)]).collect();
    fn go(
        k: &TruncatedSimplicialSet,
        l: &TruncatedSimplicialSet,
        d: usize,
        n: usize,
        s: usize,
        cur: &mut Vec<Vec<usize>>,
        out: &mut Vec<Vec<Vec<usize>>>,
        adm: &mut dyn FnMut(usize, usize, usize) -> bool,
    ) {
        if n > d {
            out.push(cur.clone());
            return;
        }
        if s == k.count(n) {
            go(k, l, d, n + 1, 0, cur, out, adm);
            return;
        }
        for t in 0..l.count(n) {
            let faces_ok = n == 0 || (0..=n).all(|i| l.face(n, i, t) == cur[n - 1][k.face(n, i, s)]);
            let degen_ok = n == 0
                || (0..n).all(|j| {
                    let lower = (0..k.count(n - 1)).find(|&r| k.degen(n - 1, j, r) == s);
                    lower.map_or(true, |r| l.degen(n - 1, j, cur[n - 1][r]) == t)
                });
            if faces_ok && degen_ok && adm(n, s, t) {
                cur[n][s] = t;
                go(k, l, d, n, s + 1, cur, out, adm);
            }
        }
        cur[n][s] = usize::MAX;
    }
    go(k, l, d, 0, 0, &mut cur, &mut out, &mut admissible);
    out
}

/// Low levels of the space of maps `K -> N(C)` with natural isomorphisms.
#[derive(Clone, Debug)]
pub struct MappingSpaceData {
    /// Maps `K -> N(C)`.
    pub points: Vec<Vec<Vec<usize>>>,
    /// Maps `K × Δ1 -> N(C)` sending every `{v} × Δ1` to an isomorphism.
    pub paths: Vec<Vec<Vec<usize>>>,
}

pub fn mapping_space(
    k: &TruncatedSimplicialSet,
    c: &FinCategory,
) -> Result<MappingSpaceData, SimplicialError> {
    let d = k.dim();
    let nc = nerve(c, d)?;
    let points = simplicial_maps(k, &nc, |_, _, _| true);
    let cyl = product(k, &delta(1, d)?)?;
    let d1 = delta(1, d)?;
    // the edges {v} × Δ1 are the pairs (s0 v, 01)
    let up = d1.find(1, "01").expect("Δ1 has the edge 01");
    let vertical: Vec<usize> = (0..k.count(0))
        .map(|v| k.degen(0, 0, v) * d1.count(1) + up)
        .collect();
    let paths = simplicial_maps(&cyl, &nc, |n, s, t| {
        n != 1 || !vertical.contains(&s) || {
            let f = c.mor(nc.label(1, t)).expect("1-simplices of a nerve are arrows");
            c.is_iso(&f)
        }
    });
    Ok(MappingSpaceData { points, paths })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::check_category;
    use crate::finset::FinSet;
    use proptest::prelude::*;

    fn binom(n: usize, k: usize) -> usize {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn delta_counts() {
        for n in 0..=3 {
            for d in 0..=3 {
                let k = delta(n, d).unwrap();
                for m in 0..=d {
                    assert_eq!(k.count(m), binom(n + m + 1, m + 1));
                }
            }
        }
        assert_eq!(delta(2, 2).unwrap().nondegenerate_counts(), vec![3, 3, 1]);
        assert_eq!(horn(2, 1, 2).unwrap().nondegenerate_counts(), vec![3, 2, 0]);
        assert_eq!(boundary(1, 1).unwrap().nondegenerate_counts(), vec![2, 0]);
        assert!(matches!(delta(1, 5), Err(SimplicialError::TooDeep(5))));
    }

    #[test]
    fn broken_identity_is_rejected() {
        // Δ1 truncated at 1 with the two faces of the edge swapped on the degenerate ones
        let k = delta(1, 1).unwrap();
        let mut faces = k.faces.clone();
        faces[1][0].swap(0, 2);
        let r = TruncatedSimplicialSet::new("bad", 1, k.labels.clone(), faces, k.degens.clone());
        assert!(matches!(r, Err(SimplicialError::Identity { .. })));
    }

    proptest! {
        #[test]
        fn action_is_precomposition(n in 0usize..4, m in 0usize..4, seed in any::<u64>()) {
            let k = delta(3, 3).unwrap();
            let ps = monotone_maps(n, m);
            let p = &ps[(seed as usize) % ps.len()];
            let sigmas = monotone_maps(m, 3);
            let sigma = &sigmas[(seed as usize / 7) % sigmas.len()];
            let s = k.find(m, &seq_label(sigma)).unwrap();
            let expected: Vec<usize> = p.iter().map(|&i| sigma[i]).collect();
            prop_assert_eq!(k.label(n, k.act(p, m, s)), seq_label(&expected));
        }
    }

    #[test]
    fn nerve_of_finset_is_simplicial() {
        let m = crate::fincat::materialize(&FinSet::upto(2), "FinSet≤2");
        let n = nerve(&m.cat, 3).unwrap();
        assert_eq!(n.count(0), 3);
        assert_eq!(n.count(1), 11);
    }

    #[test]
    fn inner_horns_in_nerves_fill_uniquely() {
        let m = crate::fincat::materialize(&FinSet::upto(2), "FinSet≤2");
        let c = &m.cat;
        let n = nerve(c, 3).unwrap();
        // Λ2_1: a composable pair
        let f = n.find(1, "1->2[0]").unwrap();
        let g = n.find(1, "2->1[0,0]").unwrap();
        let fill = fill_inner_horn(&n, &HornProblem::new(2, 1, vec![Some(g), None, Some(f)])).unwrap();
        assert_eq!(fill.len(), 1);
        assert_eq!(n.label(2, fill[0]), "1->2[0] | 2->1[0,0]");
        // Λ3_1 and Λ3_2 from a composable triple
        let h = n.find(1, "1->2[1]").unwrap();
        let triple = (0..n.count(3))
            .find(|&s| n.label(3, s) == "1->2[0] | 2->1[0,0] | 1->2[1]")
            .unwrap();
        let _ = h;
        for k in [1, 2] {
            let faces = (0..=3).map(|i| (i != k).then(|| n.face(3, i, triple))).collect();
            let fill = fill_inner_horn(&n, &HornProblem::new(3, k, faces)).unwrap();
            assert_eq!(fill, vec![triple]);
        }
    }

    #[test]
    fn horn_in_boundary_has_no_filler() {
        let b = boundary(2, 2).unwrap();
        let e01 = b.find(1, "01").unwrap();
        let e12 = b.find(1, "12").unwrap();
        let p = HornProblem::new(2, 1, vec![Some(e12), None, Some(e01)]);
        assert_eq!(fill_inner_horn(&b, &p).unwrap(), Vec::<usize>::new());
        assert!(matches!(
            fill_inner_horn(&b, &HornProblem::new(2, 0, vec![None, Some(e01), Some(e01)])),
            Err(HornError::NotInner { .. })
        ));
    }

    #[test]
    fn incompatible_faces_are_reported() {
        let k = delta(3, 3).unwrap();
        let f = |s: &str| Some(k.find(2, s).unwrap());
        let p = HornProblem::new(3, 1, vec![f("123"), None, f("013"), f("012")]);
        assert_eq!(fill_inner_horn(&k, &p).unwrap().len(), 1);
        let bad = HornProblem::new(3, 1, vec![f("123"), None, f("013"), f("022")]);
        assert!(matches!(fill_inner_horn(&k, &bad), Err(HornError::Incompatible { .. })));
    }

    #[test]
    fn simplices_of_a_point() {
        // every simplex of a point is degenerate on the vertex, so hom-sets are all monotone maps
        let pt = delta(0, 2).unwrap();
        let c = category_of_simplices(&pt);
        assert_eq!(c.object_count(), 3);
        for n in 0..=2 {
            for m in 0..=2 {
                let x = c.obj(&format!("({n},{})", "0".repeat(n + 1))).unwrap();
                let y = c.obj(&format!("({m},{})", "0".repeat(m + 1))).unwrap();
                assert_eq!(c.hom(&x, &y).len(), monotone_maps(n, m).len());
            }
        }
        assert!(check_category(&c).fully_passed());
    }

    #[test]
    fn simplices_of_delta_count() {
        for n in 0..=2 {
            for d in 0..=2 {
                let c = category_of_simplices(&delta(n, d).unwrap());
                let expected: usize = (0..=d).map(|m| monotone_maps(m, n).len()).sum();
                assert_eq!(c.object_count(), expected);
                assert!(check_category(&c).fully_passed());
            }
        }
    }

    fn functor_count(src: &FinCategory, dst: &FinCategory) -> usize {
        // oracle: assign objects, then morphisms, check functoriality
        let objs: Vec<ObjId> = src.objects().collect();
        let mut count = 0;
        let no = dst.object_count();
        let mut om = vec![0usize; objs.len()];
        loop {
            let mors: Vec<MorId> = src.morphisms().collect();
            let choices: Vec<Vec<MorId>> = mors
                .iter()
                .map(|f| {
                    let (s, t) = (src.source(f), src.target(f));
                    dst.hom(&ObjId(om[s.idx()] as u32), &ObjId(om[t.idx()] as u32))
                })
                .collect();
            for pick in itertools::Itertools::multi_cartesian_product(choices.iter().map(|c| c.iter())) {
                let ok_id = src.objects().all(|x| *pick[src.id_of(x).idx()] == dst.id_of(ObjId(om[x.idx()] as u32)));
                let ok_comp = src.composable_pairs().iter().all(|(g, f)| {
                    let h = src.compose(g, f).unwrap();
                    dst.compose(pick[g.idx()], pick[f.idx()]) == Some(*pick[h.idx()])
                });
                if ok_id && ok_comp {
                    count += 1;
                }
            }
            let mut i = 0;
            loop {
                if i == om.len() {
                    return count;
                }
                om[i] += 1;
                if om[i] < no {
                    break;
                }
                om[i] = 0;
                i += 1;
            }
        }
    }

    #[test]
    fn points_of_mapping_space_are_functors() {
        let arrow = FinCategory::poset("[1]", &["0".into(), "1".into()], |i, j| i <= j);
        let target = crate::fincat::materialize(&FinSet::upto(2), "FinSet≤2").cat;
        let ms = mapping_space(&nerve(&arrow, 2).unwrap(), &target).unwrap();
        assert_eq!(ms.points.len(), functor_count(&arrow, &target));
        assert_eq!(ms.points.len(), 11);
        // a point has one path per isomorphism
        let pt = FinCategory::poset("[0]", &["0".into()], |_, _| true);
        let ms = mapping_space(&nerve(&pt, 2).unwrap(), &target).unwrap();
        assert_eq!(ms.paths.len(), 4);
    }
}
