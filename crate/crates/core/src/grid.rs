//! The staircase posets `C(Δn)`, cartesian grids, and correspondence simplices.
//!
//! `C(Δn)` has elements `(i, j)` with `i <= j`, ordered by `(i, j) <= (i', j')`
//! iff `i <= i'` and `j' <= j`. Vertical edges raise `i`, horizontal edges
//! lower `j`.

use crate::category::{Category, EdgeClass};
use crate::fincat::{FinCategory, FunctorData, MorId, ObjId};
use crate::setup::{certified_pullback, GeometricSetup, SetupError};
use std::collections::BTreeMap;
use std::sync::Arc;
use thiserror::Error;

pub type Cell = (usize, usize);

pub fn staircase_cells(n: usize) -> Vec<Cell> {
    (0..=n).flat_map(|i| (i..=n).map(move |j| (i, j))).collect()
}

pub fn cell_leq(a: Cell, b: Cell) -> bool {
    a.0 <= b.0 && b.1 <= a.1
}

fn cell_name(c: Cell) -> String {
    format!("({},{})", c.0, c.1)
}

/// `C(Δn)` as a poset category.
pub fn c_of_simplex(n: usize) -> FinCategory {
    let cells = staircase_cells(n);
    let names: Vec<String> = cells.iter().map(|c| cell_name(*c)).collect();
    FinCategory::poset(&format!("C(Δ{n})"), &names, |a, b| cell_leq(cells[a], cells[b]))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeKind {
    Identity,
    /// `j` fixed.
    Vertical,
    /// `i` fixed.
    Horizontal,
    Mixed,
}

pub fn classify_edge(a: Cell, b: Cell) -> Option<EdgeKind> {
    if !cell_leq(a, b) {
        return None;
    }
    Some(match (a.0 == b.0, a.1 == b.1) {
        (true, true) => EdgeKind::Identity,
        (false, true) => EdgeKind::Vertical,
        (true, false) => EdgeKind::Horizontal,
        (false, false) => EdgeKind::Mixed,
    })
}

/// A square `a -> b, a -> c, b -> d, c -> d` that is both a pullback and a pushout.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct ExactSquare {
    pub initial: Cell,
    pub vertical: Cell,
    pub horizontal: Cell,
    pub terminal: Cell,
}

/// All rectangles `(i, j) <= (i', j), (i, j') <= (i', j')` with `i < i' <= j' < j`.
pub fn exact_squares(n: usize) -> Vec<ExactSquare> {
    let mut out = Vec::new();
    for i in 0..=n {
        for i2 in i + 1..=n {
            for j2 in i2..=n {
                for j in j2 + 1..=n {
                    out.push(ExactSquare {
                        initial: (i, j),
                        vertical: (i2, j),
                        horizontal: (i, j2),
                        terminal: (i2, j2),
                    });
                }
            }
        }
    }
    out
}

/// Every functor from a finite category into another, by backtracking.
pub fn enumerate_functors(src: &Arc<FinCategory>, dst: &Arc<FinCategory>) -> Vec<FunctorData> {
    let objs: Vec<ObjId> = src.objects().collect();
    let mors: Vec<MorId> = src.morphisms().collect();
    let pairs = src.composable_pairs();
    let mut out = Vec::new();
    let mut om: Vec<Option<ObjId>> = vec![None; objs.len()];
    let mut mm: Vec<Option<MorId>> = vec![None; mors.len()];

    fn assign_objs(
        k: usize,
        src: &Arc<FinCategory>,
        dst: &Arc<FinCategory>,
        pairs: &[(MorId, MorId)],
        om: &mut Vec<Option<ObjId>>,
        mm: &mut Vec<Option<MorId>>,
        out: &mut Vec<FunctorData>,
    ) {
        if k == om.len() {
            assign_mors(0, src, dst, pairs, om, mm, out);
            return;
        }
        for y in dst.objects() {
            om[k] = Some(y);
            assign_objs(k + 1, src, dst, pairs, om, mm, out);
        }
        om[k] = None;
    }

    fn assign_mors(
        k: usize,
        src: &Arc<FinCategory>,
        dst: &Arc<FinCategory>,
        pairs: &[(MorId, MorId)],
        om: &mut Vec<Option<ObjId>>,
        mm: &mut Vec<Option<MorId>>,
        out: &mut Vec<FunctorData>,
    ) {
        if k == mm.len() {
            out.push(
                FunctorData::new(
                    Arc::clone(src),
                    Arc::clone(dst),
                    om.iter().map(|x| x.unwrap()).collect(),
                    mm.iter().map(|x| x.unwrap()).collect(),
                )
                .expect("total"),
            );
            return;
        }
        let f = MorId(k as u32);
        let (s, t) = (src.source(&f), src.target(&f));
        let (fs, ft) = (om[s.idx()].unwrap(), om[t.idx()].unwrap());
        let cands = if src.id_of(s) == f {
            vec![dst.id_of(fs)]
        } else {
            dst.hom(&fs, &ft)
        };
        for cand in cands {
            mm[k] = Some(cand);
            let ok = pairs.iter().all(|(g, h)| {
                let gh = src.compose(g, h).unwrap();
                match (mm[g.idx()], mm[h.idx()], mm[gh.idx()]) {
                    (Some(a), Some(b), Some(c)) => dst.compose(&a, &b) == Some(c),
                    _ => true,
                }
            });
            if ok {
                assign_mors(k + 1, src, dst, pairs, om, mm, out);
            }
        }
        mm[k] = None;
    }

    assign_objs(0, src, dst, &pairs, &mut om, &mut mm, &mut out);
    out
}

/// The 1-simplices-and-up of the b-construction: functors `C(Δn) -> C`.
pub fn b_truncation(c: &Arc<FinCategory>, n: usize) -> Vec<FunctorData> {
    enumerate_functors(&Arc::new(c_of_simplex(n)), c)
}

/// `γ: (Δn)^op -> C(Δn), j ↦ (0, j)` and `γ': Δn -> C(Δn), i ↦ (i, n)`.
pub fn boundary_inclusions(n: usize) -> (FunctorData, FunctorData) {
    let target = Arc::new(c_of_simplex(n));
    let pts: Vec<String> = (0..=n).map(|i| i.to_string()).collect();
    let op = Arc::new(FinCategory::poset(&format!("Δ{n}op"), &pts, |a, b| b <= a));
    let fwd = Arc::new(FinCategory::poset(&format!("Δ{n}"), &pts, |a, b| a <= b));
    let build = |src: &Arc<FinCategory>, cell: &dyn Fn(usize) -> Cell| {
        let om = src
            .objects()
            .map(|x| target.obj(&cell_name(cell(x.idx()))).unwrap())
            .collect();
        let mm = src
            .morphisms()
            .map(|f| {
                let (a, b) = (cell(src.source(&f).idx()), cell(src.target(&f).idx()));
                target.mor(&format!("{}->{}", cell_name(a), cell_name(b))).unwrap()
            })
            .collect();
        FunctorData::new(Arc::clone(src), Arc::clone(&target), om, mm).expect("total")
    };
    (build(&op, &|j| (0, j)), build(&fwd, &|i| (i, n)))
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GridError {
    #[error("need one edge class per direction: {expected} expected, {got} given")]
    Classes { expected: usize, got: usize },
    #[error("grid dimension {0} is not supported")]
    Dimension(usize),
    #[error(transparent)]
    Pullback(#[from] SetupError),
    #[error("base change in direction {dir} left its class at vertex {vertex:?}")]
    NotStable { dir: usize, vertex: Vec<usize> },
    #[error("no induced edge in direction {dir} at vertex {vertex:?}")]
    NoFactorization { dir: usize, vertex: Vec<usize> },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GridMode {
    /// Every vertex is a window object; determined vertices range over all
    /// window objects isomorphic to the chosen pullback.
    Literal,
    /// Determined vertices are the oracle's chosen pullbacks.
    Canonical,
}

/// A functor `[n]^k -> C` with edges `v -> v + e_d`, every square cartesian.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GridSimplex<O, M> {
    pub k: usize,
    pub n: usize,
    pub vertices: Vec<O>,
    /// `edges[d][code(v)]` is the edge `v -> v + e_d`, absent when `v_d = n`.
    pub edges: Vec<Vec<Option<M>>>,
}

impl<O: Clone, M: Clone> GridSimplex<O, M> {
    pub fn code(&self, v: &[usize]) -> usize {
        grid_code(self.n, v)
    }

    pub fn vertex(&self, v: &[usize]) -> &O {
        &self.vertices[self.code(v)]
    }

    pub fn edge(&self, d: usize, v: &[usize]) -> &M {
        self.edges[d][self.code(v)].as_ref().expect("edge inside the grid")
    }
}

fn grid_code(n: usize, v: &[usize]) -> usize {
    v.iter().rev().fold(0, |acc, &x| acc * (n + 1) + x)
}

fn grid_decode(n: usize, k: usize, mut c: usize) -> Vec<usize> {
    let mut v = Vec::with_capacity(k);
    for _ in 0..k {
        v.push(c % (n + 1));
        c /= n + 1;
    }
    v
}

fn plus(v: &[usize], d: usize) -> Vec<usize> {
    let mut w = v.to_vec();
    w[d] += 1;
    w
}

struct GridBuild<'a, C: Category> {
    cat: &'a C,
    classes: &'a [EdgeClass<C>],
    k: usize,
    n: usize,
    mode: GridMode,
    window: Vec<C::Obj>,
    /// Determined vertices in processing order.
    order: Vec<Vec<usize>>,
}

impl<'a, C: Category> GridBuild<'a, C> {
    fn free_edges(&self) -> Vec<(usize, Vec<usize>)> {
        // along each axis through the terminal vertex, from the top down
        let mut out = Vec::new();
        for d in 0..self.k {
            for t in (0..self.n).rev() {
                let mut v = vec![self.n; self.k];
                v[d] = t;
                out.push((d, v));
            }
        }
        out
    }

    fn run(
        &self,
        verts: &mut Vec<Option<C::Obj>>,
        edges: &mut Vec<Vec<Option<C::Mor>>>,
        out: &mut Vec<GridSimplex<C::Obj, C::Mor>>,
    ) -> Result<(), GridError> {
        let top = vec![self.n; self.k];
        for t in self.window.clone() {
            verts[grid_code(self.n, &top)] = Some(t);
            self.free(0, &self.free_edges(), verts, edges, out)?;
        }
        Ok(())
    }

    fn free(
        &self,
        idx: usize,
        free: &[(usize, Vec<usize>)],
        verts: &mut Vec<Option<C::Obj>>,
        edges: &mut Vec<Vec<Option<C::Mor>>>,
        out: &mut Vec<GridSimplex<C::Obj, C::Mor>>,
    ) -> Result<(), GridError> {
        if idx == free.len() {
            return self.determined(0, verts, edges, out);
        }
        let (d, v) = &free[idx];
        let tgt = verts[grid_code(self.n, &plus(v, *d))].clone().unwrap();
        for x in self.window.clone() {
            for f in self.cat.hom(&x, &tgt) {
                if !self.classes[*d].contains(self.cat, &f) {
                    continue;
                }
                verts[grid_code(self.n, v)] = Some(x.clone());
                edges[*d][grid_code(self.n, v)] = Some(f);
                self.free(idx + 1, free, verts, edges, out)?;
            }
        }
        verts[grid_code(self.n, v)] = None;
        edges[*d][grid_code(self.n, v)] = None;
        Ok(())
    }

    fn determined(
        &self,
        idx: usize,
        verts: &mut Vec<Option<C::Obj>>,
        edges: &mut Vec<Vec<Option<C::Mor>>>,
        out: &mut Vec<GridSimplex<C::Obj, C::Mor>>,
    ) -> Result<(), GridError> {
        if idx == self.order.len() {
            out.push(GridSimplex {
                k: self.k,
                n: self.n,
                vertices: verts.iter().map(|x| x.clone().unwrap()).collect(),
                edges: edges.clone(),
            });
            return Ok(());
        }
        let c = self.cat;
        let v = &self.order[idx];
        let code = grid_code(self.n, v);
        let dirs: Vec<usize> = (0..self.k).filter(|&d| v[d] < self.n).collect();
        let (d1, d2) = (dirs[0], dirs[1]);
        let e = |d: usize, w: &[usize]| edges[d][grid_code(self.n, w)].clone().unwrap();
        let f = e(d2, &plus(v, d1));
        let g = e(d1, &plus(v, d2));
        let sq = certified_pullback(c, &f, &g)?;
        let mut legs: Vec<(usize, C::Mor)> = vec![(d1, sq.legs[0].clone()), (d2, sq.legs[1].clone())];
        for &d in &dirs[2..] {
            // induced through the pullback sitting at v + e_d
            let w = plus(v, d);
            let apex = verts[grid_code(self.n, &w)].clone().unwrap();
            let cone = [e(d1, &w), e(d2, &w)];
            let maps = [
                c.comp(&e(d, &plus(v, d1)), &sq.legs[0]),
                c.comp(&e(d, &plus(v, d2)), &sq.legs[1]),
            ];
            let u = c
                .factor(&apex, &cone, &sq.apex, &maps)
                .ok_or_else(|| GridError::NoFactorization { dir: d, vertex: v.clone() })?;
            legs.push((d, u));
        }
        for (d, leg) in &legs {
            if !self.classes[*d].contains(c, leg) {
                return Err(GridError::NotStable {
                    dir: *d,
                    vertex: v.clone(),
                });
            }
        }
        let choices: Vec<(C::Obj, Option<C::Mor>)> = match self.mode {
            GridMode::Canonical => vec![(sq.apex.clone(), None)],
            GridMode::Literal => {
                let mut cs = Vec::new();
                for q in &self.window {
                    for phi in c.hom(q, &sq.apex) {
                        if c.is_iso(&phi) {
                            cs.push((q.clone(), Some(phi)));
                        }
                    }
                }
                cs
            }
        };
        for (obj, phi) in choices {
            verts[code] = Some(obj);
            for (d, leg) in &legs {
                edges[*d][code] = Some(match &phi {
                    Some(p) => c.comp(leg, p),
                    None => leg.clone(),
                });
            }
            self.determined(idx + 1, verts, edges, out)?;
        }
        verts[code] = None;
        for (d, _) in &legs {
            edges[*d][code] = None;
        }
        Ok(())
    }
}

/// Every cartesian `[n]^k` grid whose direction-`d` edges lie in `classes[d]`.
pub fn enumerate_grid_simplices<C: Category>(
    cat: &C,
    classes: &[EdgeClass<C>],
    n: usize,
    mode: GridMode,
) -> Result<Vec<GridSimplex<C::Obj, C::Mor>>, GridError> {
    let k = classes.len();
    if k == 0 || k > 3 {
        return Err(GridError::Dimension(k));
    }
    let total = (n + 1).pow(k as u32);
    let mut order: Vec<Vec<usize>> = (0..total)
        .map(|c| grid_decode(n, k, c))
        .filter(|v| v.iter().filter(|&&x| x < n).count() >= 2)
        .collect();
    order.sort_by_key(|v| std::cmp::Reverse(v.iter().sum::<usize>()));
    let b = GridBuild {
        cat,
        classes,
        k,
        n,
        mode,
        window: cat.window(),
        order,
    };
    let mut verts = vec![None; total];
    let mut edges = vec![vec![None; total]; k];
    let mut out = Vec::new();
    b.run(&mut verts, &mut edges, &mut out)?;
    Ok(out)
}

/// A functor `C(Δn) -> C` with vertical edges in `E` and exact squares cartesian.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CorrSimplex<O, M> {
    pub n: usize,
    pub objects: BTreeMap<Cell, O>,
    /// `(i, j) -> (i + 1, j)`, keyed by source, for `i < j`.
    pub vertical: BTreeMap<Cell, M>,
    /// `(i, j) -> (i, j - 1)`, keyed by source, for `i < j`.
    pub horizontal: BTreeMap<Cell, M>,
}

/// The staircase `i <= j` of a two-dimensional grid, read through `(i, j) = (a, n - b)`.
pub fn grid_to_staircase<O: Clone, M: Clone>(g: &GridSimplex<O, M>) -> CorrSimplex<O, M> {
    assert_eq!(g.k, 2, "staircases come from two-dimensional grids");
    let n = g.n;
    let at = |c: Cell| vec![c.0, n - c.1];
    let mut cs = CorrSimplex {
        n,
        objects: BTreeMap::new(),
        vertical: BTreeMap::new(),
        horizontal: BTreeMap::new(),
    };
    for c in staircase_cells(n) {
        cs.objects.insert(c, g.vertex(&at(c)).clone());
        if c.0 < c.1 {
            cs.vertical.insert(c, g.edge(0, &at(c)).clone());
            cs.horizontal.insert(c, g.edge(1, &at(c)).clone());
        }
    }
    cs
}

/// Checks that a staircase diagram is a correspondence simplex.
pub fn is_corr_simplex<C: Category>(s: &GeometricSetup<C>, cs: &CorrSimplex<C::Obj, C::Mor>) -> bool {
    let c = &*s.cat;
    for (cell, f) in &cs.vertical {
        let up = (cell.0 + 1, cell.1);
        if c.source(f) != cs.objects[cell] || c.target(f) != cs.objects[&up] || !s.in_e(f) {
            return false;
        }
    }
    for (cell, f) in &cs.horizontal {
        let left = (cell.0, cell.1 - 1);
        if c.source(f) != cs.objects[cell] || c.target(f) != cs.objects[&left] {
            return false;
        }
    }
    // unit squares commute and are cartesian; larger rectangles follow by pasting
    for i in 0..cs.n {
        for j in i + 2..=cs.n {
            let a = (i, j);
            let (v, h) = (&cs.vertical[&a], &cs.horizontal[&a]);
            let (hv, vh) = (&cs.horizontal[&(i + 1, j)], &cs.vertical[&(i, j - 1)]);
            if c.compose(hv, v) != c.compose(vh, h) {
                return false;
            }
            let cone = crate::category::Cone {
                apex: cs.objects[&a].clone(),
                legs: vec![h.clone(), v.clone()],
            };
            if crate::category::certify_pullback(c, vh, hv, &cone).is_err() {
                return false;
            }
        }
    }
    true
}

/// Every correspondence `n`-simplex over the window.
pub fn corr_simplices<C: Category>(
    s: &GeometricSetup<C>,
    n: usize,
    mode: GridMode,
) -> Result<Vec<CorrSimplex<C::Obj, C::Mor>>, GridError> {
    let c = &*s.cat;
    let window = c.window();
    let mut out = Vec::new();
    let mut cur = CorrSimplex {
        n,
        objects: BTreeMap::new(),
        vertical: BTreeMap::new(),
        horizontal: BTreeMap::new(),
    };

    // free data: a chain of spans (i, i+1) between the diagonal cells
    fn spans<C: Category>(
        s: &GeometricSetup<C>,
        window: &[C::Obj],
        i: usize,
        mode: GridMode,
        cur: &mut CorrSimplex<C::Obj, C::Mor>,
        out: &mut Vec<CorrSimplex<C::Obj, C::Mor>>,
    ) -> Result<(), GridError> {
        let c = &*s.cat;
        let n = cur.n;
        if i == n {
            return fill(s, window, 2, 0, mode, cur, out);
        }
        let x = cur.objects[&(i, i)].clone();
        for y in window {
            for w in window {
                for g in c.hom(w, &x) {
                    for f in c.hom(w, y) {
                        if !s.in_e(&f) {
                            continue;
                        }
                        cur.objects.insert((i + 1, i + 1), y.clone());
                        cur.objects.insert((i, i + 1), w.clone());
                        cur.horizontal.insert((i, i + 1), g.clone());
                        cur.vertical.insert((i, i + 1), f);
                        spans(s, window, i + 1, mode, cur, out)?;
                    }
                }
            }
        }
        cur.objects.remove(&(i + 1, i + 1));
        cur.objects.remove(&(i, i + 1));
        cur.horizontal.remove(&(i, i + 1));
        cur.vertical.remove(&(i, i + 1));
        Ok(())
    }

    // determined cells (i, i + len) by increasing length
    fn fill<C: Category>(
        s: &GeometricSetup<C>,
        window: &[C::Obj],
        len: usize,
        i: usize,
        mode: GridMode,
        cur: &mut CorrSimplex<C::Obj, C::Mor>,
        out: &mut Vec<CorrSimplex<C::Obj, C::Mor>>,
    ) -> Result<(), GridError> {
        let c = &*s.cat;
        let n = cur.n;
        if len > n {
            out.push(cur.clone());
            return Ok(());
        }
        if i + len > n {
            return fill(s, window, len + 1, 0, mode, cur, out);
        }
        let j = i + len;
        let vh = cur.vertical[&(i, j - 1)].clone();
        let hv = cur.horizontal[&(i + 1, j)].clone();
        let sq = certified_pullback(c, &vh, &hv)?;
        if !s.in_e(&sq.legs[1]) {
            return Err(GridError::NotStable {
                dir: 0,
                vertex: vec![i, j],
            });
        }
        let choices: Vec<(C::Obj, Option<C::Mor>)> = match mode {
            GridMode::Canonical => vec![(sq.apex.clone(), None)],
            GridMode::Literal => window
                .iter()
                .flat_map(|q| {
                    c.hom(q, &sq.apex)
                        .into_iter()
                        .filter(|p| c.is_iso(p))
                        .map(move |p| (q.clone(), Some(p)))
                })
                .collect(),
        };
        for (obj, phi) in choices {
            let (h, v) = match &phi {
                Some(p) => (c.comp(&sq.legs[0], p), c.comp(&sq.legs[1], p)),
                None => (sq.legs[0].clone(), sq.legs[1].clone()),
            };
            cur.objects.insert((i, j), obj);
            cur.horizontal.insert((i, j), h);
            cur.vertical.insert((i, j), v);
            fill(s, window, len, i + 1, mode, cur, out)?;
        }
        cur.objects.remove(&(i, j));
        cur.horizontal.remove(&(i, j));
        cur.vertical.remove(&(i, j));
        Ok(())
    }

    for x in &window {
        cur.objects.insert((0, 0), x.clone());
        spans(s, &window, 0, mode, &mut cur, &mut out)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::check_functor;
    use crate::finset::{self, FinSet, Func};
    use std::collections::BTreeSet;

    #[test]
    fn staircase_sizes() {
        for n in 0..=4 {
            let c = c_of_simplex(n);
            assert_eq!(c.object_count(), (n + 1) * (n + 2) / 2);
            assert!(crate::fincat::check_category(&c).fully_passed());
        }
    }

    /// Incomparable pairs whose meet and join both exist, found from the order alone.
    fn brute_exact_pairs(n: usize) -> usize {
        let cells = staircase_cells(n);
        let glb = |a: Cell, b: Cell| {
            let lower: Vec<Cell> = cells.iter().copied().filter(|x| cell_leq(*x, a) && cell_leq(*x, b)).collect();
            lower.iter().copied().find(|x| lower.iter().all(|y| cell_leq(*y, *x)))
        };
        let lub = |a: Cell, b: Cell| {
            let upper: Vec<Cell> = cells.iter().copied().filter(|x| cell_leq(a, *x) && cell_leq(b, *x)).collect();
            upper.iter().copied().find(|x| upper.iter().all(|y| cell_leq(*x, *y)))
        };
        let mut count = 0;
        for (ia, &a) in cells.iter().enumerate() {
            for &b in &cells[ia + 1..] {
                if !cell_leq(a, b) && !cell_leq(b, a) && glb(a, b).is_some() && lub(a, b).is_some() {
                    count += 1;
                }
            }
        }
        count
    }

    #[test]
    fn exact_square_counts() {
        let counts: Vec<usize> = (0..=4).map(|n| exact_squares(n).len()).collect();
        assert_eq!(counts, vec![0, 0, 1, 5, 15]);
        for n in 0..=4 {
            assert_eq!(exact_squares(n).len(), brute_exact_pairs(n));
        }
        let sq = exact_squares(2)[0];
        assert_eq!(sq.initial, (0, 2));
        assert_eq!(sq.terminal, (1, 1));
        assert_eq!(classify_edge(sq.initial, sq.vertical), Some(EdgeKind::Vertical));
        assert_eq!(classify_edge(sq.initial, sq.horizontal), Some(EdgeKind::Horizontal));
    }

    #[test]
    fn b_construction_of_an_arrow() {
        let arrow = Arc::new(FinCategory::poset("[1]", &["0".into(), "1".into()], |i, j| i <= j));
        assert_eq!(b_truncation(&arrow, 0).len(), 2);
        assert_eq!(b_truncation(&arrow, 1).len(), 5);
    }

    #[test]
    fn boundary_inclusions_hit_the_right_edges() {
        for n in 1..=3 {
            let (g, g2) = boundary_inclusions(n);
            assert!(check_functor(&g).fully_passed());
            assert!(check_functor(&g2).fully_passed());
            let cells = staircase_cells(n);
            for (fd, kind) in [(&g, EdgeKind::Horizontal), (&g2, EdgeKind::Vertical)] {
                for f in fd.source.morphisms() {
                    let m = fd.mor(f);
                    let (a, b) = (fd.target.source(&m), fd.target.target(&m));
                    let k = classify_edge(cells[a.idx()], cells[b.idx()]).unwrap();
                    assert!(k == kind || k == EdgeKind::Identity);
                }
            }
        }
    }

    /// Commuting squares over the window whose top-left corner is a pullback.
    fn brute_cartesian_squares(c: &FinSet, vert: &EdgeClass<FinSet>) -> usize {
        let w = c.window();
        let mut count = 0;
        for z in &w {
            for x in &w {
                for y in &w {
                    for f in c.hom(x, z).into_iter().filter(|f| vert.contains(c, f)) {
                        for g in c.hom(y, z) {
                            for p in &w {
                                for a in c.hom(p, x) {
                                    for b in c.hom(p, y) {
                                        if f.after(&a) != g.after(&b) {
                                            continue;
                                        }
                                        // pullback iff the induced map to the set fiber product is bijective
                                        let pairs: Vec<(usize, usize)> = (0..x.size)
                                            .flat_map(|i| (0..y.size).map(move |j| (i, j)))
                                            .filter(|&(i, j)| f.map[i] == g.map[j])
                                            .collect();
                                        let img: BTreeSet<(usize, usize)> =
                                            (0..p.size).map(|t| (a.map[t], b.map[t])).collect();
                                        if img.len() == p.size && img.len() == pairs.len() {
                                            count += 1;
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        count
    }

    #[test]
    fn literal_squares_match_brute_force() {
        let c = FinSet::upto(2);
        let classes = [finset::injective(), finset::all_maps()];
        let grids = enumerate_grid_simplices(&c, &classes, 1, GridMode::Literal).unwrap();
        assert_eq!(grids.len(), brute_cartesian_squares(&c, &finset::injective()));
        let canon = enumerate_grid_simplices(&c, &classes, 1, GridMode::Canonical).unwrap();
        assert!(canon.len() <= grids.len());
    }

    #[test]
    fn cubes_have_cartesian_faces() {
        let c = FinSet::upto(2);
        let classes = [finset::injective(), finset::surjective(), finset::bijective()];
        let cubes = enumerate_grid_simplices(&c, &classes, 1, GridMode::Canonical).unwrap();
        assert!(!cubes.is_empty());
        for g in &cubes {
            for v in [[0, 0, 0], [0, 0, 1], [0, 1, 0], [1, 0, 0]] {
                for (d1, d2) in [(0, 1), (0, 2), (1, 2)] {
                    if v[d1] == 1 || v[d2] == 1 {
                        continue;
                    }
                    let v1 = plus(&v, d1);
                    let v2 = plus(&v, d2);
                    let cone = crate::category::Cone {
                        apex: *g.vertex(&v),
                        legs: vec![g.edge(d1, &v).clone(), g.edge(d2, &v).clone()],
                    };
                    assert!(crate::category::certify_pullback(&c, g.edge(d2, &v1), g.edge(d1, &v2), &cone).is_ok());
                }
            }
        }
    }

    #[test]
    fn two_simplices_compose_spans() {
        let s = GeometricSetup::new(Arc::new(FinSet::upto(1)), finset::all_maps());
        let ones = corr_simplices(&s, 1, GridMode::Literal).unwrap();
        // spans between sets of size ≤ 1 with apex ≤ 1
        assert_eq!(ones.len(), 1 + 1 + 1 + 1 + 1);
        let twos = corr_simplices(&s, 2, GridMode::Canonical).unwrap();
        for t in &twos {
            assert!(is_corr_simplex(&s, t));
        }
    }

    fn all_spans(c: &FinSet, e: &EdgeClass<FinSet>) -> BTreeSet<(Func, Func)> {
        let w = c.window();
        let mut out = BTreeSet::new();
        for x in &w {
            for y in &w {
                for a in &w {
                    for g in c.hom(a, x) {
                        for f in c.hom(a, y).into_iter().filter(|f| e.contains(c, f)) {
                            out.insert((g.clone(), f));
                        }
                    }
                }
            }
        }
        out
    }

    fn staircase_image(grid_window: usize, e: EdgeClass<FinSet>, feet: usize) -> BTreeSet<(Func, Func)> {
        let c = FinSet::upto(grid_window);
        let grids = enumerate_grid_simplices(&c, &[e, finset::all_maps()], 1, GridMode::Literal).unwrap();
        grids
            .iter()
            .map(grid_to_staircase)
            .filter(|cs| cs.objects.values().all(|o| o.size <= feet))
            .map(|cs| (cs.horizontal[&(0, 1)].clone(), cs.vertical[&(0, 1)].clone()))
            .collect()
    }

    #[test]
    fn staircase_restriction_is_onto_for_injections() {
        let small = FinSet::upto(2);
        let want = all_spans(&small, &finset::injective());
        assert_eq!(staircase_image(4, finset::injective(), 2), want);
    }

    #[test]
    fn staircase_restriction_misses_a_fold() {
        let small = FinSet::upto(2);
        let want = all_spans(&small, &finset::all_maps());
        let got = staircase_image(4, finset::all_maps(), 2);
        let fold = (Func::of(2, 1, &[0, 0]), Func::of(2, 1, &[0, 0]));
        assert!(want.contains(&fold));
        assert!(!got.contains(&fold));
    }
}
