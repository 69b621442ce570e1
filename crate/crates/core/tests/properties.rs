use blowsplit::ainfty::clifford_algebra;
use blowsplit::blowup::{area_correspondence, index_correspondence, LocalModel};
use blowsplit::hochschild::HochschildComplex;
use blowsplit::openclosed::{oc_matrix, ring_hom_check, OcKind};
use blowsplit::rational::{format_rational, int, parse_rational, rat};
use blowsplit::toric::BlaschkeClass;
use blowsplit::trees::{enumerate_stable_types, BasedTree, EnumerationOptions, Endpoint, TreeEdge, TreedDiskType};
use blowsplit::{CyclotomicNumber, NovikovElement, Rational, Valuation};
use proptest::prelude::*;

fn cyclotomic(order: u32) -> impl Strategy<Value = CyclotomicNumber> {
    let deg = blowsplit::novikov::cyclotomic::totient(order);
    prop::collection::vec(-4i64..=4, deg).prop_map(move |c| CyclotomicNumber::from_coeffs(order, c.into_iter().map(int).collect()).unwrap())
}

fn exponent() -> impl Strategy<Value = Rational> {
    (0i64..12, 1i64..5).prop_map(|(p, q)| rat(p, q))
}

fn novikov(order: u32) -> impl Strategy<Value = NovikovElement> {
    prop::collection::vec((exponent(), cyclotomic(order)), 0..4).prop_map(move |t| NovikovElement::from_terms(order, t, Valuation::Infinite))
}

fn triple() -> impl Strategy<Value = (NovikovElement, NovikovElement, NovikovElement)> {
    prop_oneof![Just(1u32), Just(3), Just(4), Just(6)].prop_flat_map(|o| (novikov(o), novikov(o), novikov(o)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn novikov_ring_axioms((a, b, c) in triple()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) - &b, a.clone());
    }

    #[test]
    fn valuation_is_multiplicative((a, b, _) in triple()) {
        prop_assume!(!a.is_zero() && !b.is_zero());
        let v = a.val_q().finite().unwrap() + b.val_q().finite().unwrap();
        prop_assert_eq!((&a * &b).val_q(), Valuation::Finite(v));
    }

    #[test]
    fn inverse_below_cutoff((a, _, _) in triple(), e in 1i64..4) {
        prop_assume!(!a.is_zero());
        let unit = a.shift(&-a.val_q().finite().unwrap().clone());
        let inv = unit.invert(&int(e)).unwrap();
        let prod = (&unit * &inv).without_cutoff();
        prop_assert_eq!(prod.split_at(&int(e)).0, NovikovElement::one(a.order()));
    }

    #[test]
    fn novikov_json_round_trip((a, _, _) in triple()) {
        let s = serde_json::to_string(&a).unwrap();
        let b: NovikovElement = serde_json::from_str(&s).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn rational_print_parse(p in -1000i64..1000, q in 1i64..1000) {
        let r = rat(p, q);
        let s = format_rational(&r);
        prop_assert_eq!(parse_rational(&s).unwrap(), r.clone());
        prop_assert_eq!(format_rational(&parse_rational(&s).unwrap()), s);
    }

    #[test]
    fn blaschke_index_and_area_add(
        d1 in prop::collection::vec(0u32..4, 4),
        d2 in prop::collection::vec(0u32..4, 4),
        areas in prop::collection::vec(exponent().prop_map(|x| x + int(1)), 4),
    ) {
        let a = BlaschkeClass::new(d1.clone(), areas.clone()).unwrap();
        let b = BlaschkeClass::new(d2.clone(), areas).unwrap();
        let s = a.add(&b).unwrap();
        prop_assert_eq!(s.index(), a.index() + b.index());
        prop_assert_eq!(s.area(), a.area() + b.area());
        prop_assert_eq!(s.index(), 2 * d1.iter().chain(&d2).map(|x| *x as i64).sum::<i64>());
    }

    #[test]
    fn blowup_correspondence_matches_direct(
        n in 2usize..6,
        eps_num in 1i64..10,
        xs in prop::collection::vec((1i64..20, 1i64..5), 6),
        d in prop::collection::vec(0u32..4, 6),
        de in 0u32..4,
    ) {
        let eps = rat(eps_num, 10);
        let x: Vec<Rational> = xs[..n].iter().map(|(p, q)| rat(*p, *q) + &eps).collect();
        let m = LocalModel::new(eps.clone(), x).unwrap();
        let (up, down) = (m.upstairs(&d[..n], de).unwrap(), m.downstairs(&d[..n], de).unwrap());
        prop_assert_eq!(index_correspondence(down.index(), n, de).unwrap(), up.index());
        prop_assert_eq!(area_correspondence(&down.area(), &eps, de).area, up.area());
    }

    #[test]
    fn tree_encoding_ignores_labels(idx in 0usize..1000, seed in any::<u64>()) {
        let ts = enumerate_stable_types(3, 1, &EnumerationOptions::weighted()).unwrap();
        let t = &ts[idx % ts.len()];
        let g = t.to_graph();
        let h = relabel(&g, seed);
        prop_assert_eq!(TreedDiskType::from_graph(&h).unwrap().encoding(), t.encoding());
    }

    #[test]
    fn hochschild_independent_of_basis_order(q1 in 1i64..6, q2 in 1i64..6, s in any::<bool>()) {
        let q2 = if s { -q2 } else { q2 };
        let z = NovikovElement::zero(1);
        let qm = vec![vec![NovikovElement::integer(q1), z.clone()], vec![z, NovikovElement::integer(q2)]];
        let a = clifford_algebra(&qm, int(2)).unwrap();
        let fwd = HochschildComplex::new(&a, 3).unwrap();
        let rev = HochschildComplex::new(&a, 3).unwrap().reversed();
        prop_assert_eq!(fwd.dims_at(3).dims, rev.dims_at(3).dims);
        prop_assert_eq!(fwd.dims_at(3).total(), 1);
    }
}

/// Permute vertex and edge ids, rotate ribbons: same cyclic orders under new names.
fn relabel(g: &BasedTree, seed: u64) -> BasedTree {
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let (nv, ne) = (g.vertices.len(), g.edges.len());
    let mut pv: Vec<usize> = (0..nv).collect();
    let mut pe: Vec<usize> = (0..ne).collect();
    pv.shuffle(&mut rng);
    pe.shuffle(&mut rng);
    let ep = |p: Endpoint| match p {
        Endpoint::Vertex(v) => Endpoint::Vertex(pv[v]),
        Endpoint::Infinity => Endpoint::Infinity,
    };
    let mut h = BasedTree { vertices: g.vertices.clone(), edges: g.edges.clone(), ribbon: vec![Vec::new(); nv] };
    for v in 0..nv {
        h.vertices[pv[v]] = g.vertices[v];
        let mut r: Vec<usize> = g.ribbon[v].iter().map(|e| pe[*e]).collect();
        if !r.is_empty() {
            let k = (seed as usize) % r.len();
            r.rotate_left(k);
        }
        h.ribbon[pv[v]] = r;
    }
    for e in 0..ne {
        let old = g.edges[e];
        h.edges[pe[e]] = TreeEdge { tail: ep(old.tail), head: ep(old.head), kind: old.kind };
    }
    h
}

#[test]
fn co_is_a_ring_map() {
    for n in 1..=5 {
        for k in 0..=n {
            assert!(ring_hom_check(n, k).unwrap(), "n={n} k={k}");
        }
    }
}

#[test]
fn oc_columns_are_characters() {
    for n in 1..=7 {
        let m = oc_matrix(n, OcKind::Projective, None).unwrap();
        let g = m.character_gram();
        for (i, row) in g.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                assert_eq!(x.is_zero(), i != j, "n={n} ({i},{j})");
            }
        }
    }
}
