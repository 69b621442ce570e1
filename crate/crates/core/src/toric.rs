//! Blaschke disks, Laurent potentials of Clifford and exceptional tori, critical points and Hessians.

use serde::Serialize;

use crate::ainfty::{clifford_algebra, AInftyAlgebra};
use crate::error::{Error, Result};
use crate::linalg::{determinant, Matrix};
use crate::novikov::{is_unit_monomial, CyclotomicNumber, NovikovElement, Valuation};
use crate::rational::{int, is_positive, rat, Rational};

/// Degree vector of a Blaschke product into C^{n+1}, with the moment levels ε_i.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct BlaschkeClass {
    pub degrees: Vec<u32>,
    #[serde(serialize_with = "crate::rational::as_string::vec")]
    pub areas: Vec<Rational>,
}

impl BlaschkeClass {
    pub fn new(degrees: Vec<u32>, areas: Vec<Rational>) -> Result<Self> {
        if degrees.len() != areas.len() || degrees.is_empty() {
            return Err(Error::InvalidInput(format!("{} degrees for {} areas", degrees.len(), areas.len())));
        }
        if !areas.iter().all(is_positive) {
            return Err(Error::InvalidInput("areas must be positive".into()));
        }
        Ok(BlaschkeClass { degrees, areas })
    }

    pub fn n_plus_1(&self) -> usize {
        self.degrees.len()
    }

    /// I(u) = Σ 2d_i
    pub fn index(&self) -> i64 {
        self.degrees.iter().map(|d| 2 * *d as i64).sum()
    }

    /// A(u) = Σ d_i ε_i
    pub fn area(&self) -> Rational {
        self.degrees.iter().zip(&self.areas).map(|(d, e)| e * Rational::from_integer((*d).into())).sum()
    }

    pub fn add(&self, other: &BlaschkeClass) -> Result<BlaschkeClass> {
        if self.areas != other.areas {
            return Err(Error::InvalidInput("classes over different tori".into()));
        }
        let degrees = self.degrees.iter().zip(&other.degrees).map(|(a, b)| a + b).collect();
        Ok(BlaschkeClass { degrees, areas: self.areas.clone() })
    }
}

/// Passing through Z_k = {z_{k+1} = … = z_n = 0}: degree ≥ 1 in components k+1..n.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ZkConstraint {
    pub k: usize,
}

impl ZkConstraint {
    pub fn admits(&self, c: &BlaschkeClass) -> bool {
        c.degrees.iter().skip(self.k + 1).all(|d| *d >= 1)
    }
}

/// All degree vectors of index at most `index_cap`, in lexicographic order.
pub fn blaschke_enumerate(n: usize, areas: &[Rational], index_cap: u32, constraint: Option<ZkConstraint>) -> Result<Vec<BlaschkeClass>> {
    if areas.len() != n + 1 {
        return Err(Error::InvalidInput(format!("need {} areas, got {}", n + 1, areas.len())));
    }
    if let Some(z) = constraint {
        if z.k >= n {
            return Err(Error::InvalidInput(format!("Z_k needs k < n, got k = {}", z.k)));
        }
    }
    let max_deg = index_cap / 2;
    let mut out = Vec::new();
    let mut cur = vec![0u32; n + 1];
    fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i == cur.len() {
            out.push(cur.clone());
            return;
        }
        for d in 0..=left {
            cur[i] = d;
            rec(i + 1, left - d, cur, out);
        }
        cur[i] = 0;
    }
    let mut raw = Vec::new();
    rec(0, max_deg, &mut cur, &mut raw);
    for d in raw {
        let c = BlaschkeClass::new(d, areas.to_vec())?;
        if constraint.is_none_or(|z| z.admits(&c)) {
            out.push(c);
        }
    }
    out.sort();
    Ok(out)
}

/// The classes of least index in a list.
pub fn minimal_classes(classes: &[BlaschkeClass]) -> Vec<BlaschkeClass> {
    let Some(m) = classes.iter().map(|c| c.index()).min() else { return Vec::new() };
    classes.iter().filter(|c| c.index() == m).cloned().collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PotentialKind {
    CliffordTorusPn,
    ExceptionalBlowup,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Term {
    pub exponent: Vec<i64>,
    pub coeff: NovikovElement,
}

/// Laurent polynomial W(y) together with the minimal disks it counts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PotentialFunction {
    pub n: usize,
    pub kind: PotentialKind,
    #[serde(serialize_with = "crate::rational::as_string::opt")]
    pub eps: Option<Rational>,
    /// ∂ of the basic disk in the i-th factor, in H_1(L) = Z^n
    pub boundaries: Vec<Vec<i64>>,
    #[serde(serialize_with = "crate::rational::as_string::vec")]
    pub areas: Vec<Rational>,
    pub terms: Vec<Term>,
}

fn unit_vectors(n: usize) -> Vec<Vec<i64>> {
    (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
}

impl PotentialFunction {
    /// q^{1/(n+1)}(y_1 + … + y_n + (y_1…y_n)^{−1})
    pub fn clifford_torus(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("n must be at least 1".into()));
        }
        let mut boundaries = unit_vectors(n);
        boundaries.push(vec![-1; n]);
        let a = rat(1, n as i64 + 1);
        Ok(Self::from_disks(n, PotentialKind::CliffordTorusPn, None, boundaries, vec![a; n + 1]))
    }

    /// q^ε(y_1 + … + y_n + y_1…y_n)
    pub fn exceptional(n: usize, eps: Rational) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("n must be at least 1".into()));
        }
        if !is_positive(&eps) {
            return Err(Error::InvalidInput("epsilon must be positive".into()));
        }
        let mut boundaries = unit_vectors(n);
        boundaries.push(vec![1; n]);
        Ok(Self::from_disks(n, PotentialKind::ExceptionalBlowup, Some(eps.clone()), boundaries, vec![eps; n + 1]))
    }

    fn from_disks(n: usize, kind: PotentialKind, eps: Option<Rational>, boundaries: Vec<Vec<i64>>, areas: Vec<Rational>) -> Self {
        let terms = boundaries.iter().zip(&areas).map(|(b, a)| Term { exponent: b.clone(), coeff: NovikovElement::q_pow(a.clone()) }).collect();
        PotentialFunction { n, kind, eps, boundaries, areas, terms }
    }

    /// Order of the roots of unity carrying the critical points.
    pub fn root_order(&self) -> u32 {
        match self.kind {
            PotentialKind::CliffordTorusPn => self.n as u32 + 1,
            PotentialKind::ExceptionalBlowup => (2 * (self.n as u32).saturating_sub(1)).max(1),
        }
    }

    pub fn expected_critical_count(&self) -> usize {
        match self.kind {
            PotentialKind::CliffordTorusPn => self.n + 1,
            PotentialKind::ExceptionalBlowup => self.n - 1,
        }
    }

    /// ∂/∂x_a with y = exp(x): multiplies each monomial by its a-th exponent.
    pub fn derivative(&self, a: usize) -> Vec<Term> {
        derive(&self.terms, a)
    }

    pub fn evaluate(&self, y: &[CyclotomicNumber]) -> Result<NovikovElement> {
        eval_terms(&self.terms, y, self.n)
    }

    pub fn gradient(&self, y: &[CyclotomicNumber]) -> Result<Vec<NovikovElement>> {
        (0..self.n).map(|a| eval_terms(&self.derivative(a), y, self.n)).collect()
    }

    pub fn is_critical(&self, y: &[CyclotomicNumber]) -> Result<bool> {
        Ok(self.gradient(y)?.iter().all(|g| g.is_zero()))
    }

    /// Index-two Blaschke classes and their boundaries: the disks counted by m_0.
    pub fn disk_classes(&self) -> Result<Vec<(BlaschkeClass, Vec<i64>)>> {
        let classes = blaschke_enumerate(self.n, &self.areas, 2, None)?;
        Ok(classes
            .into_iter()
            .filter(|c| c.index() == 2)
            .map(|c| {
                let mut b = vec![0i64; self.n];
                for (i, d) in c.degrees.iter().enumerate() {
                    for (x, y) in b.iter_mut().zip(&self.boundaries[i]) {
                        *x += *d as i64 * y;
                    }
                }
                (c, b)
            })
            .collect())
    }
}

fn derive(terms: &[Term], a: usize) -> Vec<Term> {
    terms
        .iter()
        .filter(|t| t.exponent[a] != 0)
        .map(|t| Term { exponent: t.exponent.clone(), coeff: t.coeff.scale_rational(&int(t.exponent[a])) })
        .collect()
}

fn monomial_at(exponent: &[i64], y: &[CyclotomicNumber]) -> Result<CyclotomicNumber> {
    let mut acc = CyclotomicNumber::one(1);
    for (e, yi) in exponent.iter().zip(y) {
        acc = &acc * &yi.pow(*e)?;
    }
    Ok(acc)
}

fn eval_terms(terms: &[Term], y: &[CyclotomicNumber], n: usize) -> Result<NovikovElement> {
    if y.len() != n {
        return Err(Error::InvalidInput(format!("local system has {} coordinates, expected {n}", y.len())));
    }
    let mut acc = NovikovElement::zero(1);
    for t in terms {
        acc = &acc + &t.coeff.scale(&monomial_at(&t.exponent, y)?);
    }
    Ok(acc)
}

/// A critical local system y_(k).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CriticalPoint {
    pub k: usize,
    #[serde(serialize_with = "ser_cyc")]
    pub y: Vec<CyclotomicNumber>,
}

fn ser_cyc<S: serde::Serializer>(v: &[CyclotomicNumber], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|c| c.to_string()))
}

/// Projective: y_i = ζ^k, ζ of order n+1. Exceptional: all y_i equal with y^{n−1} = −1.
pub fn critical_points(w: &PotentialFunction) -> Vec<CriticalPoint> {
    let n = w.n;
    let order = w.root_order();
    (0..w.expected_critical_count())
        .map(|k| {
            let e = match w.kind {
                PotentialKind::CliffordTorusPn => k as i64,
                PotentialKind::ExceptionalBlowup => 2 * k as i64 + 1,
            };
            CriticalPoint { k, y: vec![CyclotomicNumber::root_of_unity(order, e); n] }
        })
        .collect()
}

/// ∂_{x_a}∂_{x_b}W at a critical point.
pub fn hessian(w: &PotentialFunction, y: &[CyclotomicNumber]) -> Result<Matrix> {
    if !w.is_critical(y)? {
        return Err(Error::NotCritical(format!("{y:?}").replace('"', "")));
    }
    second_derivatives(&w.terms, y, w.n)
}

fn second_derivatives(terms: &[Term], y: &[CyclotomicNumber], n: usize) -> Result<Matrix> {
    (0..n).map(|a| (0..n).map(|b| eval_terms(&derive(&derive(terms, a), b), y, n)).collect()).collect()
}

/// s with H = s·(I + J) and s a unit times a q-power, if any.
pub fn i_plus_j_factor(h: &Matrix) -> Option<NovikovElement> {
    let n = h.len();
    let s = if n == 1 { h[0][0].scale_rational(&rat(1, 2)) } else { h[0][1].clone() };
    if !is_unit_monomial(&s) {
        return None;
    }
    for (a, row) in h.iter().enumerate() {
        for (b, x) in row.iter().enumerate() {
            let want = if a == b { s.scale_rational(&int(2)) } else { s.clone() };
            if *x != want {
                return None;
            }
        }
    }
    Some(s)
}

/// Hessian = s(I+J) and det = (n+1)s^n ≠ 0.
pub fn hessian_has_clifford_shape(h: &Matrix) -> bool {
    let n = h.len();
    let Some(s) = i_plus_j_factor(h) else { return false };
    let det = determinant(h);
    !det.is_zero() && det == s.pow(n as u32).scale_rational(&int(n as i64 + 1))
}

/// The Clifford algebra of the Hessian at a critical point.
pub fn hessian_clifford(w: &PotentialFunction, y: &[CyclotomicNumber], cutoff: Rational) -> Result<AInftyAlgebra> {
    clifford_algebra(&hessian(w, y)?, cutoff)
}

/// Both sides of the symmetrized divisor equation: Σ_β ⟨x_a,∂β⟩⟨x_b,∂β⟩ m_{0,β}(1) and ∂_a∂_b m_0(1).
pub fn divisor_sides(w: &PotentialFunction, y: &[CyclotomicNumber]) -> Result<(Matrix, Matrix)> {
    let n = w.n;
    let classes = w.disk_classes()?;
    let mut lhs = vec![vec![NovikovElement::zero(1); n]; n];
    for (c, db) in &classes {
        let m0 = NovikovElement::q_pow(c.area()).scale(&monomial_at(db, y)?);
        for a in 0..n {
            for b in 0..n {
                let k = db[a] * db[b];
                if k != 0 {
                    lhs[a][b] = &lhs[a][b] + &m0.scale_rational(&int(k));
                }
            }
        }
    }
    Ok((lhs, second_derivatives(&w.terms, y, n)?))
}

/// Divisor equation for all degree-one basis pairs, below the cutoff.
pub fn divisor_equation_check(w: &PotentialFunction, y: &[CyclotomicNumber], cutoff: &Rational) -> Result<bool> {
    if !w.is_critical(y)? {
        return Err(Error::NotCritical(format!("{y:?}")));
    }
    let (lhs, rhs) = divisor_sides(w, y)?;
    let cut = Valuation::Finite(cutoff.clone());
    Ok(lhs.iter().flatten().zip(rhs.iter().flatten()).all(|(l, r)| (l - r).with_cutoff(cut.clone()).is_zero()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FloerDims {
    /// binomial(n, d) in degree d
    pub z_graded: Vec<u64>,
    /// even, odd
    pub z2: [u64; 2],
}

/// HF(φ_(k), φ_(k)) ≅ H((S¹)^n; Λ).
pub fn floer_cohomology_dims(w: &PotentialFunction, pt: &CriticalPoint) -> Result<FloerDims> {
    if !w.is_critical(&pt.y)? {
        return Err(Error::NotCritical(format!("k = {}", pt.k)));
    }
    let n = w.n as u64;
    let mut z_graded = vec![1u64];
    for d in 1..=n {
        let prev = *z_graded.last().unwrap();
        z_graded.push(prev * (n - d + 1) / d);
    }
    let mut z2 = [0u64; 2];
    for (d, c) in z_graded.iter().enumerate() {
        z2[d % 2] += c;
    }
    Ok(FloerDims { z_graded, z2 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ainfty::check_ainfty;

    fn q(a: i64, b: i64) -> NovikovElement {
        NovikovElement::q_pow(rat(a, b))
    }

    #[test]
    fn projective_points() {
        let w = PotentialFunction::clifford_torus(2).unwrap();
        let pts = critical_points(&w);
        assert_eq!(pts.len(), 3);
        for p in &pts {
            let z = CyclotomicNumber::root_of_unity(3, p.k as i64);
            assert_eq!(p.y, vec![z.clone(), z.clone()]);
            assert_eq!(z.pow(3).unwrap(), CyclotomicNumber::one(3));
            assert!(w.is_critical(&p.y).unwrap());
        }
        // value W(y_(k)) = (n+1) q^{1/(n+1)} ζ^k
        let v = w.evaluate(&pts[1].y).unwrap();
        assert_eq!(v, q(1, 3).scale(&CyclotomicNumber::root_of_unity(3, 1)).scale_rational(&int(3)));
    }

    #[test]
    fn exceptional_points() {
        let w = PotentialFunction::exceptional(2, rat(1, 10)).unwrap();
        let pts = critical_points(&w);
        assert_eq!(pts.len(), 1);
        let minus = CyclotomicNumber::from_rational(1, int(-1));
        assert_eq!(pts[0].y, vec![minus.clone(), minus]);
        let w3 = PotentialFunction::exceptional(3, rat(1, 10)).unwrap();
        let pts = critical_points(&w3);
        assert_eq!(pts.len(), 2);
        for p in &pts {
            assert!(w3.is_critical(&p.y).unwrap());
            assert_eq!(p.y[0].pow(2).unwrap(), CyclotomicNumber::from_rational(4, int(-1)));
        }
        // the displayed roots y = (1,1,1) are not critical: gradient 2q^ε
        let ones = vec![CyclotomicNumber::one(1); 3];
        assert_eq!(w3.gradient(&ones).unwrap()[0], q(1, 10).scale_rational(&int(2)));
        assert!(critical_points(&PotentialFunction::exceptional(1, rat(1, 10)).unwrap()).is_empty());
    }

    #[test]
    fn hessians() {
        let w = PotentialFunction::clifford_torus(2).unwrap();
        let y = critical_points(&w)[0].y.clone();
        let h = hessian(&w, &y).unwrap();
        assert_eq!(h, vec![vec![q(1, 3).scale_rational(&int(2)), q(1, 3)], vec![q(1, 3), q(1, 3).scale_rational(&int(2))]]);
        assert_eq!(determinant(&h), q(2, 3).scale_rational(&int(3)));
        assert!(hessian_has_clifford_shape(&h));
        for n in 1..=6 {
            let w = PotentialFunction::clifford_torus(n).unwrap();
            for p in critical_points(&w) {
                let h = hessian(&w, &p.y).unwrap();
                assert!(hessian_has_clifford_shape(&h), "n={n} k={}", p.k);
                for a in 0..n {
                    for b in 0..n {
                        assert_eq!(h[a][b], h[b][a]);
                    }
                }
            }
        }
        // exceptional: q^ε y (I − J)
        let w = PotentialFunction::exceptional(3, rat(1, 10)).unwrap();
        let p = &critical_points(&w)[0];
        let h = hessian(&w, &p.y).unwrap();
        let s = q(1, 10).scale(&p.y[0]);
        assert_eq!(h[0][0], NovikovElement::zero(1));
        assert_eq!(h[0][1], -&s);
        assert_eq!(determinant(&h), s.pow(3).scale_rational(&int(-2)));
        assert!(!hessian_has_clifford_shape(&h));
        let ones = vec![CyclotomicNumber::one(1); 3];
        assert!(matches!(hessian(&w, &ones), Err(Error::NotCritical(_))));
    }

    #[test]
    fn hessian_cliffords_pass() {
        for n in 1..=3 {
            let w = PotentialFunction::clifford_torus(n).unwrap();
            let a = hessian_clifford(&w, &critical_points(&w)[0].y, int(3)).unwrap();
            assert_eq!(a.rank(), 1 << n);
            assert!(check_ainfty(&a).is_empty());
        }
        let w = PotentialFunction::exceptional(3, rat(1, 3)).unwrap();
        let a = hessian_clifford(&w, &critical_points(&w)[1].y, int(3)).unwrap();
        assert!(check_ainfty(&a).is_empty());
    }

    #[test]
    fn blaschke_examples() {
        let areas = vec![rat(1, 10), rat(1, 5), rat(1, 3)];
        let c = BlaschkeClass::new(vec![1, 0, 0], areas.clone()).unwrap();
        assert_eq!((c.index(), c.area()), (2, rat(1, 10)));
        let c = BlaschkeClass::new(vec![1, 1, 1], areas.clone()).unwrap();
        assert_eq!((c.index(), c.area()), (6, rat(19, 30)));
        let all = blaschke_enumerate(2, &areas, 4, None).unwrap();
        // degree vectors in 3 slots with sum ≤ 2: C(5,2)
        assert_eq!(all.len(), 10);
        let eps = vec![rat(1, 10); 3];
        let zk = blaschke_enumerate(2, &eps, 6, Some(ZkConstraint { k: 1 })).unwrap();
        let min = minimal_classes(&zk);
        assert_eq!(min.len(), 1);
        assert_eq!(min[0].degrees, vec![0, 0, 1]);
        assert_eq!((min[0].index(), min[0].area()), (2, rat(1, 10)));
        for n in 2..=5 {
            for k in 1..n {
                let zk = blaschke_enumerate(n, &vec![rat(1, 7); n + 1], 2 * n as u32, Some(ZkConstraint { k })).unwrap();
                let min = minimal_classes(&zk);
                assert_eq!(min.len(), 1);
                assert_eq!(min[0].index(), 2 * (n - k) as i64);
                assert_eq!(min[0].area(), rat((n - k) as i64, 7));
            }
        }
    }

    #[test]
    fn divisor_equation() {
        let w = PotentialFunction::clifford_torus(1).unwrap();
        for p in critical_points(&w) {
            let (l, r) = divisor_sides(&w, &p.y).unwrap();
            // q^{1/2}(y + y^{−1}) has second log-derivative q^{1/2}(y + y^{−1})
            let want = w.evaluate(&p.y).unwrap();
            assert_eq!(l[0][0], want);
            assert_eq!(r[0][0], want);
            assert!(divisor_equation_check(&w, &p.y, &int(2)).unwrap());
        }
        for n in 1..=4 {
            for w in [PotentialFunction::clifford_torus(n).unwrap(), PotentialFunction::exceptional(n, rat(1, 10)).unwrap()] {
                for p in critical_points(&w) {
                    assert!(divisor_equation_check(&w, &p.y, &int(2)).unwrap());
                }
            }
        }
        // a direction no disk boundary sees
        let mut w = PotentialFunction::clifford_torus(2).unwrap();
        w.boundaries = vec![vec![1, 0], vec![-1, 0], vec![1, 0]];
        w.terms = PotentialFunction::from_disks(2, w.kind, None, w.boundaries.clone(), w.areas.clone()).terms;
        let y = vec![CyclotomicNumber::one(1), CyclotomicNumber::one(1)];
        let (l, r) = divisor_sides(&w, &y).unwrap();
        assert!(l[1][1].is_zero() && r[1][1].is_zero());
        assert!(l[0][1].is_zero() && r[0][1].is_zero());
    }

    #[test]
    fn floer_dims() {
        for (n, want) in [(1, vec![1, 1]), (2, vec![1, 2, 1]), (3, vec![1, 3, 3, 1])] {
            let w = PotentialFunction::clifford_torus(n).unwrap();
            let d = floer_cohomology_dims(&w, &critical_points(&w)[0]).unwrap();
            assert_eq!(d.z_graded, want);
            assert_eq!(d.z2, [1 << (n - 1), 1 << (n - 1)]);
        }
    }
}
