use super::*;
use crate::linalg::Matrix;
use crate::rational::{int, rat};

fn c(n: i64) -> NovikovElement {
    NovikovElement::integer(n)
}

fn qp(e: Rational) -> NovikovElement {
    NovikovElement::q_pow(e)
}

fn ident(n: usize) -> Matrix {
    (0..n).map(|i| (0..n).map(|j| c(i64::from(i == j))).collect()).collect()
}

fn hessian_like(n: usize) -> Matrix {
    // q^{1/3}(I + J)
    (0..n).map(|i| (0..n).map(|j| qp(rat(1, 3)).scale_rational(&int(if i == j { 2 } else { 1 }))).collect()).collect()
}

/// Independent check of the product: associativity and e_a e_b + e_b e_a = 2Q_ab on generators.
fn clifford_oracle(q: &Matrix) {
    let n = q.len();
    let mul = |x: &SparseVec, y: &SparseVec| -> SparseVec {
        let mut out = SparseVec::new();
        for (s, a) in x {
            for (t, b) in y {
                axpy(&mut out, &(a * b), &clifford_product(q, *s, *t));
            }
        }
        out
    };
    let basis = |s: usize| SparseVec::from([(s, c(1))]);
    for a in 0..n {
        for b in 0..n {
            let mut sum = mul(&basis(1 << a), &basis(1 << b));
            axpy(&mut sum, &c(1), &mul(&basis(1 << b), &basis(1 << a)));
            let mut want = SparseVec::new();
            add_entry(&mut want, 0, &q[a][b].scale_rational(&int(2)));
            assert_eq!(sum, want);
        }
    }
    for s in 0..(1 << n) {
        for t in 0..(1 << n) {
            for u in 0..(1 << n) {
                assert_eq!(mul(&mul(&basis(s), &basis(t)), &basis(u)), mul(&basis(s), &mul(&basis(t), &basis(u))));
            }
        }
    }
}

#[test]
fn clifford_relations() {
    let a = clifford_algebra(&ident(2), int(3)).unwrap();
    let e1 = a.index_of("e1").unwrap();
    let e2 = a.index_of("e2").unwrap();
    let e12 = a.index_of("e1_2").unwrap();
    let one = a.index_of("1").unwrap();
    // m_2(a,b) = (−1)^{|a|} ab
    assert_eq!(a.m(&[e1, e2]), SparseVec::from([(e12, c(-1))]));
    assert_eq!(a.m(&[e2, e1]), SparseVec::from([(e12, c(1))]));
    assert_eq!(a.m(&[e1, e1]), SparseVec::from([(one, c(-1))]));
    let n1 = clifford_algebra(&vec![vec![qp(rat(1, 2))]], int(3)).unwrap();
    assert_eq!(n1.rank(), 2);
    assert_eq!(clifford_product(&vec![vec![qp(rat(1, 2))]], 1, 1), SparseVec::from([(0, qp(rat(1, 2)))]));
}

#[test]
fn clifford_product_oracle() {
    for n in 1..=3 {
        clifford_oracle(&ident(n));
        clifford_oracle(&hessian_like(n));
    }
}

#[test]
fn clifford_passes_relations() {
    for n in 1..=3 {
        for q in [ident(n), hessian_like(n)] {
            let a = clifford_algebra(&q, int(3)).unwrap();
            assert_eq!(check_ainfty(&a), vec![], "n = {n}");
        }
    }
}

#[test]
fn degenerate_form_rejected() {
    let q = vec![vec![c(1), c(1)], vec![c(1), c(1)]];
    assert!(matches!(clifford_algebra(&q, int(3)), Err(Error::DegenerateQuadraticForm)));
    // q^5 is zero below the cutoff
    assert!(matches!(clifford_algebra(&vec![vec![qp(int(5))]], int(3)), Err(Error::DegenerateQuadraticForm)));
}

#[test]
fn perturbation_is_detected() {
    let mut a = clifford_algebra(&ident(2), int(3)).unwrap();
    let e1 = a.index_of("e1").unwrap();
    let e2 = a.index_of("e2").unwrap();
    let e12 = a.index_of("e1_2").unwrap();
    a.add_to_tensor(vec![e1, e2], e12, &qp(int(1))).unwrap();
    let v = check_ainfty(&a);
    assert!(v.iter().all(|x| x.kind == ViolationKind::Relation && x.inputs.len() == 3));
    assert!(v.iter().any(|x| x.inputs == ["e1", "e2", "e2"]));
    a.add_to_tensor(vec![e1, e2], e12, &-qp(int(1))).unwrap();
    assert_eq!(check_ainfty(&a), vec![]);
}

#[test]
fn curvature_in_span_of_unit_is_harmless() {
    let mut a = clifford_algebra(&hessian_like(2), int(3)).unwrap();
    a.set_curvature(0, SparseVec::from([(0, qp(rat(1, 3)).scale_rational(&int(3)))])).unwrap();
    assert_eq!(check_ainfty(&a), vec![]);
    // non-positive curvature is reported
    a.set_curvature(0, SparseVec::from([(0, c(1))])).unwrap();
    assert!(check_ainfty(&a).iter().any(|v| v.kind == ViolationKind::Curvature));
}

#[test]
fn zero_cochain_is_identity_deformation() {
    let a = clifford_algebra(&ident(2), int(3)).unwrap();
    let d = deform(&a, &BTreeMap::new()).unwrap();
    assert_eq!(d.tensors(), a.tensors());
    let d = deform(&a, &BTreeMap::from([(0, SparseVec::new())])).unwrap();
    assert_eq!(d.tensors(), a.tensors());
}

/// rank-2 algebra with m_d(x,…,x) = 1 for every d ≤ 6
fn all_arities() -> AInftyAlgebra {
    let mut a = AInftyAlgebra::new(2, int(3)).unwrap();
    let o = a.add_object("L").unwrap();
    let one = a.add_generator("1", 0, o, o).unwrap();
    let x = a.add_generator("x", 1, o, o).unwrap();
    a.set_unit(o, one).unwrap();
    for d in 1..=6 {
        a.set_tensor(vec![x; d], SparseVec::from([(one, c(1))])).unwrap();
    }
    a
}

#[test]
fn divergence_guard() {
    let a = all_arities();
    let x = a.index_of("x").unwrap();
    let bad = BTreeMap::from([(0, SparseVec::from([(x, c(1))]))]);
    assert!(matches!(deform(&a, &bad), Err(Error::NonConvergentDeformation(_))));
    let good = BTreeMap::from([(0, SparseVec::from([(x, qp(rat(1, 2)))]))]);
    assert!(deform(&a, &good).is_ok());
    // even cochains are rejected
    let even = BTreeMap::from([(0, SparseVec::from([(0, qp(int(1)))]))]);
    assert!(matches!(deform(&a, &even), Err(Error::InvalidInput(_))));
}

fn curved_clifford() -> (AInftyAlgebra, NovikovElement) {
    let mut a = clifford_algebra(&ident(2), int(3)).unwrap();
    let w0 = qp(rat(1, 3));
    a.set_curvature(0, SparseVec::from([(0, w0.clone())])).unwrap();
    (a, w0)
}

#[test]
fn potential_and_residual() {
    let (a, w0) = curved_clifford();
    let (w, res) = potential(&a, 0, &SparseVec::new()).unwrap();
    assert_eq!(w, w0);
    assert!(res.is_empty());
    // b = q^{1/2} e1: m_2(b,b) = −q·1
    let e1 = a.index_of("e1").unwrap();
    let b = SparseVec::from([(e1, qp(rat(1, 2)))]);
    let (w, res) = potential(&a, 0, &b).unwrap();
    assert_eq!(w, &w0 - &qp(int(1)));
    assert!(res.is_empty());
    // m_2(x,x) = y with y not the unit
    let mut t = AInftyAlgebra::new(2, int(3)).unwrap();
    let o = t.add_object("L").unwrap();
    let one = t.add_generator("1", 0, o, o).unwrap();
    let x = t.add_generator("x", 1, o, o).unwrap();
    let y = t.add_generator("y", 0, o, o).unwrap();
    t.set_unit(o, one).unwrap();
    t.set_tensor(vec![x, x], SparseVec::from([(y, c(1))])).unwrap();
    let (_, res) = potential(&t, 0, &SparseVec::from([(x, qp(rat(1, 2)))])).unwrap();
    assert_eq!(res, SparseVec::from([(y, qp(int(1)))]));
    assert!(Brane::new("t", t, vec![], SparseVec::from([(x, qp(rat(1, 2)))])).is_err());
}

#[test]
fn deformed_flat_algebra_passes() {
    let (a, _) = curved_clifford();
    let e1 = a.index_of("e1").unwrap();
    let e2 = a.index_of("e2").unwrap();
    let b = SparseVec::from([(e1, qp(rat(1, 2))), (e2, qp(rat(2, 3)))]);
    let br = Brane::new("L", a.clone(), vec![], b.clone()).unwrap();
    let d = deform(&a, &BTreeMap::from([(0, b)])).unwrap().shift_curvature(&br.w, &[0]).unwrap();
    assert!(d.is_flat());
    assert_eq!(check_ainfty(&d), vec![]);
    // m_1 is nonzero and squares to zero
    assert!(!d.m(&[e1]).is_empty());
    for g in 0..d.rank() {
        let once = d.m(&[g]);
        let twice = d.apply(&[once]);
        assert!(twice.values().all(|x| x.with_cutoff(Valuation::Finite(int(3))).is_zero()));
    }
}

#[test]
fn spectral_groups() {
    let mut branes = Vec::new();
    for k in 0..3 {
        let mut a = clifford_algebra(&hessian_like(2), int(3)).unwrap();
        let w = NovikovElement::monomial(CyclotomicNumber::root_of_unity(3, k), rat(1, 3)).scale_rational(&int(3));
        a.set_curvature(0, SparseVec::from([(0, w)])).unwrap();
        branes.push(Brane::new(&format!("L{k}"), a, vec![], SparseVec::new()).unwrap());
    }
    let groups = spectral_decompose(&branes).unwrap();
    assert_eq!(groups.len(), 3);
    for g in &groups {
        assert!(g.category.is_flat());
        assert_eq!(check_ainfty(&g.category), vec![]);
    }
    assert_eq!(spectral_decompose(&branes[..1]).unwrap().len(), 1);
    let twin = vec![branes[0].clone(), Brane { name: "L0b".into(), ..branes[0].clone() }];
    let groups = spectral_decompose(&twin).unwrap();
    assert_eq!(groups.len(), 1);
    assert_eq!(groups[0].members, vec![0, 1]);
    assert_eq!(groups[0].category.objects().len(), 2);
}

#[test]
fn collapse_signs_and_degrees() {
    let a = clifford_algebra(&ident(2), int(3)).unwrap();
    let e1 = a.index_of("e1").unwrap();
    let e2 = a.index_of("e2").unwrap();
    let one = a.index_of("1").unwrap();
    // k = 0: (−1)^{|x_−|} m_2
    let v = collapse_mu(&a, &vec![(c(1), vec![e1, e2])]).unwrap();
    let want: SparseVec = a.m(&[e1, e2]).into_iter().map(|(g, x)| (g, -x)).collect();
    assert_eq!(v, want);
    // strict unit inside: m_3 vanishes
    assert!(collapse_mu(&a, &vec![(c(1), vec![e1, one, e2])]).unwrap().is_empty());
    for (k, v) in a.tensors() {
        let sum: u32 = k.iter().map(|g| a.degree(*g)).sum();
        for g in v.keys() {
            assert_eq!(a.degree(*g), (sum + 2 - k.len() as u32) % 2);
        }
    }
}

#[test]
fn bar_differential_intertwines() {
    let (a, _) = curved_clifford();
    let e1 = a.index_of("e1").unwrap();
    let b = SparseVec::from([(e1, qp(rat(1, 2)))]);
    let br = Brane::new("L", a.clone(), vec![], b.clone()).unwrap();
    let d = deform(&a, &BTreeMap::from([(0, b)])).unwrap().shift_curvature(&br.w, &[0]).unwrap();
    let n = d.rank();
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let el: BarElement = vec![(c(1), vec![x, z]), (c(2), vec![x, y, z])];
                let lhs = collapse_mu(&d, &bar_differential(&d, &el).unwrap()).unwrap();
                let mu = collapse_mu(&d, &el).unwrap();
                let mut sum = d.apply(&[mu]);
                axpy(&mut sum, &c(1), &lhs);
                assert!(sum.values().all(|v| v.with_cutoff(Valuation::Finite(int(3))).is_zero()), "{x} {y} {z}");
            }
        }
    }
}

#[test]
fn weights_and_signs() {
    let aleph = CyclotomicNumber::root_of_unity(3, 1);
    let u = DiskContribution {
        bulk: c(1),
        branch_weight: int(1),
        holonomy: aleph.clone(),
        area: rat(1, 10),
        orientation: 1,
        leaf_counts: BTreeMap::from([("D".to_string(), 2)]),
    };
    assert_eq!(weight(&u), NovikovElement::monomial(aleph.clone(), rat(1, 10)).scale_rational(&rat(1, 2)));
    let triv = DiskContribution { holonomy: CyclotomicNumber::one(1), area: int(0), leaf_counts: BTreeMap::new(), ..u.clone() };
    assert_eq!(weight(&triv), c(1));
    let neg = DiskContribution { orientation: -1, area: int(0), leaf_counts: BTreeMap::new(), bulk: c(5), ..u };
    assert_eq!(weight(&neg), NovikovElement::constant(aleph).scale_rational(&int(-5)));
    assert_eq!(sign_heart(&[1, 0, 1]), 1);
    assert_eq!(sign_heart(&[0, 2, 4]), 1);
    assert_eq!(sign_heart(&[1]), -1);
}

#[test]
fn json_round_trip() {
    let (a, _) = curved_clifford();
    let j = serde_json::to_string(&a.to_json()).unwrap();
    let b = AInftyAlgebra::from_json(&serde_json::from_str(&j).unwrap()).unwrap();
    assert_eq!(serde_json::to_string(&b.to_json()).unwrap(), j);
    assert_eq!(check_ainfty(&b), vec![]);
    let bad = j.replacen("\"degree\":1", "\"degree\":0", 1);
    assert!(AInftyAlgebra::from_json(&serde_json::from_str(&bad).unwrap()).is_err());
}
