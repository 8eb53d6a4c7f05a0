// Randomised invariants over small instances.

use std::sync::Arc;

use proptest::prelude::*;

use corrkit::category::{window_morphisms, Category};
use corrkit::descent::{cech_nerve, check_simplicial_identities};
use corrkit::fincat::{check_category, check_functor, core_groupoid, FinCategory, FunctorData};
use corrkit::finset::{self, all_functions, FinSet, Func, SetObj};
use corrkit::lattice::{adjunction_violation, left_adjoint, monotone_maps_between, right_adjoint, FiniteLattice};
use corrkit::model::FrameModel;
use corrkit::setup::GeometricSetup;
use corrkit::shriek::{build_shriek, NagataSetup, LowerShriek};
use corrkit::simplicial::{delta, product};
use corrkit::span::{classify_cocartesian, compose_spans, span_iso, Span, TensorEdge, TensorLeg};

// a random partial order on n points: a relation on i < j, closed transitively
fn random_poset(n: usize, bits: u64) -> FinCategory {
    let mut rel = vec![vec![false; n]; n];
    let mut k = 0;
    for (i, row) in rel.iter_mut().enumerate() {
        row[i] = true;
        for cell in row.iter_mut().skip(i + 1) {
            *cell = bits >> k & 1 == 1;
            k += 1;
        }
    }
    for m in 0..n {
        for i in 0..n {
            for j in 0..n {
                if rel[i][m] && rel[m][j] {
                    rel[i][j] = true;
                }
            }
        }
    }
    let names: Vec<String> = (0..n).map(|i| i.to_string()).collect();
    FinCategory::poset("P", &names, |a, b| rel[a][b])
}

fn func(src: usize, dst: usize, seed: u64) -> Func {
    let fs = all_functions(SetObj::n(src), SetObj::n(dst));
    fs[(seed as usize) % fs.len().max(1)].clone()
}

fn small_lattices() -> Vec<FiniteLattice> {
    vec![
        FiniteLattice::chain(2),
        FiniteLattice::chain(3),
        FiniteLattice::n5(),
        FiniteLattice::m3(),
        FiniteLattice::boolean(2),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn posets_are_categories_and_cores_are_stable(n in 1usize..5, bits in any::<u64>()) {
        let c = random_poset(n, bits);
        prop_assert!(check_category(&c).fully_passed());
        let (core, _) = core_groupoid(&c);
        let (core2, _) = core_groupoid(&core);
        prop_assert_eq!(core.object_count(), core2.object_count());
        prop_assert_eq!(core.morphism_count(), core2.morphism_count());
        // a poset's core is discrete
        prop_assert_eq!(core.morphism_count(), n);
    }

    #[test]
    fn composite_of_functors_is_a_functor(n in 1usize..4, bits in any::<u64>()) {
        let c = Arc::new(random_poset(n, bits));
        let id = FunctorData::identity(Arc::clone(&c));
        let twice = id.then(&id).unwrap();
        prop_assert!(check_functor(&twice).fully_passed());
    }

    #[test]
    fn product_counts_multiply(a in 0usize..3, b in 0usize..3, d in 0usize..3) {
        let (x, y) = (delta(a, d).unwrap(), delta(b, d).unwrap());
        let p = product(&x, &y).unwrap();
        for k in 0..=d {
            prop_assert_eq!(p.count(k), x.count(k) * y.count(k));
        }
    }

    #[test]
    fn span_composition_is_associative(sizes in prop::array::uniform4(0usize..3),
                                       apexes in prop::array::uniform3(0usize..3),
                                       seeds in prop::array::uniform6(any::<u64>())) {
        let s = GeometricSetup::new(Arc::new(FinSet::upto(2)), finset::all_maps());
        let span = |k: usize| {
            Span::new(
                SetObj::n(apexes[k]),
                func(apexes[k], sizes[k], seeds[2 * k]),
                func(apexes[k], sizes[k + 1], seeds[2 * k + 1]),
            )
        };
        // empty targets admit no maps from non-empty apexes
        prop_assume!((0..3).all(|k| apexes[k] == 0 || (sizes[k] > 0 && sizes[k + 1] > 0)));
        let (a, b, c) = (span(0), span(1), span(2));
        let left = compose_spans(&s, &compose_spans(&s, &a, &b).unwrap(), &c).unwrap();
        let right = compose_spans(&s, &a, &compose_spans(&s, &b, &c).unwrap()).unwrap();
        prop_assert!(span_iso(&*s.cat, &left, &right).is_some());
    }

    #[test]
    fn classification_is_invariant_under_isomorphic_legs(x0 in 1usize..3, x1 in 1usize..3, seed in any::<u64>(), perm in any::<u64>()) {
        let y = x0 * x1;
        let (cat, _) = FinSet::upto(2).with_extra(4, "4");
        let s = GeometricSetup::new(Arc::new(cat), finset::all_maps());
        let mk = |k: u64| func(y, if k % 2 == 0 { x0 } else { x1 }, seed.rotate_left(k as u32));
        let e = TensorEdge {
            sources: vec![SetObj::n(x0), SetObj::n(x1)],
            targets: vec![SetObj::n(y)],
            alpha: vec![Some(0), Some(0)],
            legs: vec![TensorLeg {
                apex: SetObj::n(y),
                to_sources: vec![mk(0), mk(1)],
                to_target: func(y, y, seed.rotate_left(7)),
            }],
        };
        let isos: Vec<Func> = all_functions(SetObj::n(y), SetObj::n(y)).into_iter().filter(|f| f.is_bijective()).collect();
        let phi = &isos[(perm as usize) % isos.len()];
        let moved = e.transport(&*s.cat, 0, phi).unwrap();
        prop_assert_eq!(
            classify_cocartesian(&s, &e).unwrap().cocartesian,
            classify_cocartesian(&s, &moved).unwrap().cocartesian
        );
    }

    #[test]
    fn adjoints_are_unique_and_triangular(i in 0usize..5, j in 0usize..5, pick in any::<u64>()) {
        let ls = small_lattices();
        let (a, b) = (&ls[i], &ls[j]);
        let maps = monotone_maps_between(a, b);
        let m = &maps[(pick as usize) % maps.len()];
        let back = monotone_maps_between(b, a);
        if let Some(l) = left_adjoint(m) {
            let others: Vec<_> = back.iter().filter(|g| adjunction_violation(g, m).is_none()).collect();
            prop_assert_eq!(others.len(), 1);
            prop_assert_eq!(others[0].table(), l.table());
            // l m l = l and m l m = m
            prop_assert_eq!(l.then(m).then(&l).table().to_vec(), l.table().to_vec());
            prop_assert_eq!(m.then(&l).then(m).table().to_vec(), m.table().to_vec());
        } else {
            prop_assert!(back.iter().all(|g| adjunction_violation(g, m).is_some()));
        }
        if let Some(r) = right_adjoint(m) {
            let others = back.iter().filter(|g| adjunction_violation(m, g).is_none()).count();
            prop_assert_eq!(others, 1);
            prop_assert_eq!(r.then(m).then(&r).table().to_vec(), r.table().to_vec());
        }
    }

    #[test]
    fn shriek_is_functorial(seed_f in any::<u64>(), seed_g in any::<u64>(), len in 2usize..4) {
        let s = GeometricSetup::new(Arc::new(FinSet::upto(2)), finset::all_maps());
        let ns = NagataSetup::new(s, finset::all_maps(), finset::bijective()).finset_middles();
        let sys = Arc::new(FrameModel::new(FiniteLattice::chain(len)));
        let sh = build_shriek(&ns, sys).unwrap();
        let mors = window_morphisms(ns.cat());
        let f = &mors[(seed_f as usize) % mors.len()];
        let gs: Vec<&Func> = mors.iter().filter(|g| g.src == f.dst).collect();
        let g = gs[(seed_g as usize) % gs.len()];
        let gf = ns.cat().comp(g, f);
        let lhs = sh.shriek(&gf).unwrap();
        let rhs = sh.shriek(f).unwrap().then(&sh.shriek(g).unwrap());
        prop_assert_eq!(lhs.table(), rhs.table());
    }

    #[test]
    fn cech_nerves_are_simplicial(pick in any::<u64>()) {
        let c = FinSet::upto(2);
        let mors = window_morphisms(&c);
        let x = &mors[(pick as usize) % mors.len()];
        let d = cech_nerve(&c, x, 2).unwrap();
        prop_assert!(check_simplicial_identities(&c, &d).fully_passed());
    }
}
