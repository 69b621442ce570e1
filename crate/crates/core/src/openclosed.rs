//! Open-closed and closed-open maps for Clifford and exceptional tori: FFT_q matrices, CO values, pairings.

use serde::Serialize;

use crate::ainfty::AInftyAlgebra;
use crate::error::{Error, Result};
use crate::hochschild::Cochain;
use crate::linalg::{determinant, is_diagonal, Matrix, SparseVec};
use crate::novikov::{CyclotomicNumber, NovikovElement};
use crate::rational::{format_rational, int, is_positive, rat, Rational};
use crate::toric::{blaschke_enumerate, critical_points, hessian_clifford, BlaschkeClass, PotentialFunction};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OcKind {
    Projective,
    Exceptional,
}

/// OC on point classes: rows are quantum basis classes, columns brane point classes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OCMatrix {
    pub n: usize,
    pub kind: OcKind,
    #[serde(serialize_with = "crate::rational::as_string::opt")]
    pub eps: Option<Rational>,
    /// order of ζ (projective) or ς (exceptional)
    pub root_order: u32,
    pub rows: Vec<String>,
    pub cols: Vec<String>,
    pub entries: Matrix,
}

/// Projective: entry (b, a) = q^{b/(n+1)} ζ^{ab}, b, a = 0..n. Exceptional: q^{bε} ς^{ab}, b = 1..n−1, a = 0..n−2.
pub fn oc_matrix(n: usize, kind: OcKind, eps: Option<Rational>) -> Result<OCMatrix> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be at least 1".into()));
    }
    match kind {
        OcKind::Projective => {
            let order = n as u32 + 1;
            let entries = (0..=n)
                .map(|b| (0..=n).map(|a| NovikovElement::monomial(CyclotomicNumber::root_of_unity(order, (a * b) as i64), rat(b as i64, n as i64 + 1))).collect())
                .collect();
            Ok(OCMatrix {
                n,
                kind,
                eps: None,
                root_order: order,
                rows: (0..=n).map(|b| format!("Z_{b}")).collect(),
                cols: (0..=n).map(|a| format!("pt_{a}")).collect(),
                entries,
            })
        }
        OcKind::Exceptional => {
            let eps = eps.ok_or_else(|| Error::InvalidInput("exceptional kind needs epsilon".into()))?;
            if !is_positive(&eps) {
                return Err(Error::InvalidInput("epsilon must be positive".into()));
            }
            if n < 2 {
                return Err(Error::InvalidInput("no exceptional branes for n = 1".into()));
            }
            let order = n as u32 - 1;
            let entries = (1..n)
                .map(|b| (0..n - 1).map(|a| NovikovElement::monomial(CyclotomicNumber::root_of_unity(order, (a * b) as i64), &eps * int(b as i64))).collect())
                .collect();
            Ok(OCMatrix {
                n,
                kind,
                eps: Some(eps),
                root_order: order,
                rows: (1..n).map(|b| format!("Z_{b}")).collect(),
                cols: (0..n - 1).map(|a| format!("pt_{a}")).collect(),
                entries,
            })
        }
    }
}

impl OCMatrix {
    /// Specialization q = 1.
    pub fn at_q_one(&self) -> Vec<Vec<CyclotomicNumber>> {
        self.entries.iter().map(|r| r.iter().map(|x| x.at_q_one()).collect()).collect()
    }

    /// Σ_b M_{bk} conj(M_{bj}) at q = 1.
    pub fn character_gram(&self) -> Vec<Vec<CyclotomicNumber>> {
        let m = self.at_q_one();
        let c = self.cols.len();
        (0..c)
            .map(|k| {
                (0..c)
                    .map(|j| m.iter().fold(CyclotomicNumber::zero(self.root_order), |acc, row| &acc + &(&row[k] * &row[j].conj())))
                    .collect()
            })
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("row");
        for c in &self.cols {
            s.push(',');
            s.push_str(c);
        }
        s.push('\n');
        for (r, row) in self.rows.iter().zip(&self.entries) {
            s.push_str(r);
            for x in row {
                s.push(',');
                s.push_str(&x.to_string());
            }
            s.push('\n');
        }
        s
    }

    pub fn to_markdown(&self) -> String {
        let mut s = format!("| |{}|\n|---|{}\n", self.cols.join("|"), "---|".repeat(self.cols.len()));
        for (r, row) in self.rows.iter().zip(&self.entries) {
            s.push_str(&format!("|{r}|{}|\n", row.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("|")));
        }
        s
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Surjectivity {
    Surjective,
    CutoffLimited,
    Deficient,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SurjectivityReport {
    pub verdict: Surjectivity,
    #[serde(serialize_with = "crate::rational::as_string::one")]
    pub cutoff: Rational,
    pub det: NovikovElement,
    pub det_below: NovikovElement,
    pub det_above: NovikovElement,
}

/// det split as det_{<E} + det_{≥E}; surjective iff det_{<E} ≠ 0.
pub fn surjectivity_test(m: &Matrix, e: &Rational) -> Result<SurjectivityReport> {
    if m.iter().any(|r| r.len() != m.len()) {
        return Err(Error::InvalidInput("surjectivity test needs a square matrix".into()));
    }
    let det = determinant(m);
    let (det_below, det_above) = det.split_at(e);
    let verdict = if !det_below.is_zero() {
        Surjectivity::Surjective
    } else if det.is_zero() {
        Surjectivity::Deficient
    } else {
        Surjectivity::CutoffLimited
    };
    Ok(SurjectivityReport { verdict, cutoff: e.clone(), det, det_below, det_above })
}

/// CO([P^ℓ]) = y_{(k),1}…y_{(k),n−ℓ} q^{(n−ℓ)/(n+1)}, the coefficient of 1.
pub fn co_value(n: usize, k: usize, ell: usize) -> Result<NovikovElement> {
    if n == 0 || k > n || ell > n {
        return Err(Error::InvalidInput(format!("co_value needs 0 ≤ k, ℓ ≤ n, got n={n} k={k} ℓ={ell}")));
    }
    let w = PotentialFunction::clifford_torus(n)?;
    let y = &critical_points(&w)[k].y;
    let mut c = CyclotomicNumber::one(n as u32 + 1);
    for yi in &y[..n - ell] {
        c = &c * yi;
    }
    Ok(NovikovElement::monomial(c, rat((n - ell) as i64, n as i64 + 1)))
}

/// The length-zero cochain CO([P^ℓ]) on the brane's Clifford algebra.
pub fn co_cochain(a: &AInftyAlgebra, n: usize, k: usize, ell: usize) -> Result<Cochain> {
    let v = co_value(n, k, ell)?;
    Ok(Cochain::unit(a)?.scaled(&v))
}

/// Clifford algebra of the Hessian at y_(k) on the Clifford torus in P^n.
pub fn brane_algebra(n: usize, k: usize, cutoff: Rational) -> Result<AInftyAlgebra> {
    let w = PotentialFunction::clifford_torus(n)?;
    let pts = critical_points(&w);
    let pt = pts.get(k).ok_or_else(|| Error::InvalidInput(format!("no brane k = {k} for n = {n}")))?;
    hessian_clifford(&w, &pt.y, cutoff)
}

/// Product in the underlying associative algebra: xy = (−1)^{|x|} m_2(x, y).
fn algebra_product(a: &AInftyAlgebra, x: &SparseVec, y: &SparseVec) -> SparseVec {
    let mut out = SparseVec::new();
    for (g, c) in x {
        let s = if a.degree(*g) % 2 == 1 { -c } else { c.clone() };
        let single = SparseVec::from([(*g, s)]);
        for (key, val) in a.apply(&[single, y.clone()]) {
            crate::linalg::add_entry(&mut out, key, &val);
        }
    }
    out
}

/// CO([P^{n−1}])^e in HF(φ_(k), φ_(k)).
pub fn co_power(n: usize, k: usize, e: u32) -> Result<SparseVec> {
    let a = brane_algebra(n, k, int(3))?;
    let unit = a.unit(0).ok_or_else(|| Error::MalformedAlgebra("no unit".into()))?;
    let x = SparseVec::from([(unit, co_value(n, k, n - 1)?)]);
    let mut acc = SparseVec::from([(unit, NovikovElement::one(1))]);
    for _ in 0..e {
        acc = algebra_product(&a, &acc, &x);
    }
    Ok(acc)
}

/// (CO([P^{n−1}]))^{n+1} = q·1, matching [P^{n−1}]^{n+1} = q.
pub fn ring_hom_check(n: usize, k: usize) -> Result<bool> {
    ring_hom_check_with(n, k, n as u32 + 1)
}

/// The same comparison with an arbitrary exponent.
pub fn ring_hom_check_with(n: usize, k: usize, e: u32) -> Result<bool> {
    let p = co_power(n, k, e)?;
    Ok(p == SparseVec::from([(0, NovikovElement::q_pow(int(1)))]))
}

/// QH(P^n) = Λ[h]/(h^{n+1} − q) in the basis h^0..h^n.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuantumCohomologyPn {
    pub n: usize,
}

impl QuantumCohomologyPn {
    pub fn dim(&self) -> usize {
        self.n + 1
    }

    /// h^a * h^b
    pub fn product(&self, a: usize, b: usize) -> (usize, NovikovElement) {
        let m = a + b;
        if m > self.n {
            (m - self.n - 1, NovikovElement::q_pow(int(1)))
        } else {
            (m, NovikovElement::one(1))
        }
    }

    /// Poincaré pairing ⟨h^a, h^b⟩ = 1 iff a + b = n.
    pub fn pairing(&self) -> Matrix {
        let d = self.dim();
        (0..d).map(|a| (0..d).map(|b| if a + b == self.n { NovikovElement::one(1) } else { NovikovElement::zero(1) }).collect()).collect()
    }

    /// [P^ℓ] = h^{n−ℓ}
    pub fn linear_subspace(&self, ell: usize) -> usize {
        self.n - ell
    }
}

/// CO respects products: CO(h^a) CO(h^b) = CO(h^a * h^b) for every pair, at brane k.
pub fn co_multiplicative(n: usize, k: usize) -> Result<bool> {
    let qh = QuantumCohomologyPn { n };
    let co = |a: usize| co_value(n, k, n - a);
    for a in 0..=n {
        for b in 0..=n {
            let (c, coeff) = qh.product(a, b);
            if &co(a)? * &co(b)? != &coeff * &co(c)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// ⟨x, y⟩ = xᵀ P y over column vectors.
pub fn pair_columns(p: &Matrix, x: &[NovikovElement], y: &[NovikovElement]) -> NovikovElement {
    let mut acc = NovikovElement::zero(1);
    for (a, xa) in x.iter().enumerate() {
        for (b, yb) in y.iter().enumerate() {
            if !p[a][b].is_zero() {
                acc = &acc + &(&(xa * &p[a][b]) * yb);
            }
        }
    }
    acc
}

pub fn column(m: &Matrix, j: usize) -> Vec<NovikovElement> {
    m.iter().map(|r| r[j].clone()).collect()
}

/// Gram matrix ⟨OC(pt_k), OC(pt_j)⟩ for the Clifford torus branes in P^n.
pub fn frobenius_orthogonality(n: usize) -> Result<Matrix> {
    let m = oc_matrix(n, OcKind::Projective, None)?;
    let p = QuantumCohomologyPn { n }.pairing();
    Ok((0..=n).map(|k| (0..=n).map(|j| pair_columns(&p, &column(&m.entries, k), &column(&m.entries, j))).collect()).collect())
}

/// Diagonal with nonzero constant·q-power diagonal entries.
pub fn is_orthogonal_gram(g: &Matrix) -> bool {
    is_diagonal(g) && (0..g.len()).all(|i| g[i][i].is_monomial() && !g[i][i].is_zero())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BulkShiftReport {
    pub leading: OCMatrix,
    #[serde(serialize_with = "crate::rational::as_string::one")]
    pub eps: Rational,
    /// least q-valuation among correction terms carrying one bulk point insertion
    #[serde(serialize_with = "crate::rational::as_string::one")]
    pub min_extra_valuation: Rational,
    /// the Blaschke class attaining it, with the row it contributes to
    pub witness: BlaschkeClass,
    pub witness_row: String,
}

/// OC(b + q^{−ε}p) = FFT_q + corrections; the corrections come from disks through the fixed point p = [0:…:0:1].
pub fn bulk_shift_perturbation(n: usize, eps: &Rational) -> Result<BulkShiftReport> {
    if !is_positive(eps) {
        return Err(Error::InvalidInput("epsilon must be positive".into()));
    }
    if *eps >= int(1) {
        return Err(Error::ShiftTooLarge(format_rational(eps)));
    }
    if n < 2 {
        return Err(Error::InvalidInput("bulk shift needs dim > 1".into()));
    }
    let leading = oc_matrix(n, OcKind::Projective, None)?;
    let areas = vec![rat(1, n as i64 + 1); n + 1];
    // roots at the bulk point: components 0..n−1; at the output point for Z_b: the last b components
    let mut best: Option<(Rational, BlaschkeClass, usize)> = None;
    for b in 1..n {
        let cap = 2 * (n + b) as u32;
        for c in blaschke_enumerate(n, &areas, cap, None)? {
            let ok = c.degrees.iter().enumerate().all(|(i, d)| {
                let need = u32::from(i < n) + u32::from(i >= n + 1 - b);
                *d >= need
            });
            if !ok {
                continue;
            }
            let v = c.area() - eps;
            if best.as_ref().is_none_or(|(bv, _, _)| v < *bv) {
                best = Some((v, c, b));
            }
        }
    }
    let (min_extra_valuation, witness, b) = best.ok_or_else(|| Error::InvalidInput("no correction classes".into()))?;
    Ok(BulkShiftReport { leading, eps: eps.clone(), min_extra_valuation, witness, witness_row: format!("Z_{b}") })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hochschild::{cc_differential, restrict_to_object};
    use std::f64::consts::PI;

    type C = (f64, f64);

    fn to_c(x: &CyclotomicNumber) -> C {
        let o = x.order() as f64;
        x.coeffs().iter().enumerate().fold((0.0, 0.0), |(re, im), (i, c)| {
            let c: f64 = c.numer().to_string().parse::<f64>().unwrap() / c.denom().to_string().parse::<f64>().unwrap();
            let t = 2.0 * PI * i as f64 / o;
            (re + c * t.cos(), im + c * t.sin())
        })
    }

    fn close(a: C, b: C) -> bool {
        (a.0 - b.0).abs() < 1e-9 && (a.1 - b.1).abs() < 1e-9
    }

    #[test]
    fn projective_n1() {
        let m = oc_matrix(1, OcKind::Projective, None).unwrap();
        let h = NovikovElement::q_pow(rat(1, 2));
        assert_eq!(m.entries, vec![vec![NovikovElement::one(1), NovikovElement::one(1)], vec![h.clone(), -&h]]);
    }

    #[test]
    fn entries_match_substitution() {
        for n in 1..=6 {
            let m = oc_matrix(n, OcKind::Projective, None).unwrap();
            for b in 0..=n {
                for a in 0..=n {
                    let x = &m.entries[b][a];
                    assert_eq!(x.val_q().finite().unwrap(), &rat(b as i64, n as i64 + 1));
                    let t = 2.0 * PI * (a * b) as f64 / (n + 1) as f64;
                    assert!(close(to_c(&x.at_q_one()), (t.cos(), t.sin())));
                }
            }
            let g = m.character_gram();
            for k in 0..=n {
                for j in 0..=n {
                    if k == j {
                        assert_eq!(g[k][j], CyclotomicNumber::from_rational(1, int(n as i64 + 1)));
                    } else {
                        assert!(g[k][j].is_zero());
                    }
                }
            }
        }
        let e = oc_matrix(2, OcKind::Exceptional, Some(rat(1, 10))).unwrap();
        assert_eq!(e.entries, vec![vec![NovikovElement::q_pow(rat(1, 10))]]);
        assert!(oc_matrix(1, OcKind::Exceptional, Some(rat(1, 10))).is_err());
    }

    #[test]
    fn surjectivity() {
        let m = oc_matrix(2, OcKind::Projective, None).unwrap();
        let r = surjectivity_test(&m.entries, &int(2)).unwrap();
        assert_eq!(r.verdict, Surjectivity::Surjective);
        // q^{(0+1+2)/3} det(DFT_3), det(DFT_3) = ±3√−3 = ±3(ζ − ζ²)
        let (re, im) = to_c(&r.det.leading().unwrap().1);
        assert_eq!(r.det.val_q().finite().unwrap(), &int(1));
        assert!((re * re + im * im - 27.0).abs() < 1e-9);
        let z = vec![vec![NovikovElement::zero(1); 2]; 2];
        assert_eq!(surjectivity_test(&z, &int(2)).unwrap().verdict, Surjectivity::Deficient);
        let hi = vec![vec![NovikovElement::q_pow(int(2)), NovikovElement::zero(1)], vec![NovikovElement::zero(1), NovikovElement::q_pow(int(3))]];
        assert_eq!(surjectivity_test(&hi, &int(2)).unwrap().verdict, Surjectivity::CutoffLimited);
        for n in 2..=6 {
            let e = oc_matrix(n, OcKind::Exceptional, Some(rat(1, 10))).unwrap();
            assert_eq!(surjectivity_test(&e.entries, &int(2)).unwrap().verdict, Surjectivity::Surjective);
        }
        // det valuation n/2 reaches the cutoff at n = 4
        for n in 1..=6 {
            let m = oc_matrix(n, OcKind::Projective, None).unwrap();
            let r = surjectivity_test(&m.entries, &int(2)).unwrap();
            assert_eq!(r.det.val_q().finite().unwrap(), &rat(n as i64, 2));
            let want = if n < 4 { Surjectivity::Surjective } else { Surjectivity::CutoffLimited };
            assert_eq!(r.verdict, want);
        }
    }

    #[test]
    fn co_values() {
        for n in 1..=4 {
            for k in 0..=n {
                assert!(co_value(n, k, n).unwrap().is_one());
            }
        }
        let z = CyclotomicNumber::root_of_unity(3, 1);
        assert_eq!(co_value(2, 1, 1).unwrap(), NovikovElement::monomial(z, rat(1, 3)));
        for k in 0..2 {
            let y = CyclotomicNumber::root_of_unity(2, k);
            assert_eq!(co_value(1, k as usize, 0).unwrap(), NovikovElement::monomial(y, rat(1, 2)));
        }
        let a = brane_algebra(2, 1, int(3)).unwrap();
        let tau = co_cochain(&a, 2, 1, 1).unwrap();
        assert_eq!(restrict_to_object(&tau, 0), SparseVec::from([(0, co_value(2, 1, 1).unwrap())]));
        assert!(cc_differential(&a, &tau).unwrap().is_zero(&a));
    }

    #[test]
    fn ring_homomorphism() {
        for n in 1..=4 {
            for k in 0..=n {
                assert!(ring_hom_check(n, k).unwrap());
                assert!(!ring_hom_check_with(n, k, n as u32).unwrap());
                assert!(co_multiplicative(n, k).unwrap());
            }
        }
    }

    #[test]
    fn orthogonality() {
        for n in 1..=4 {
            let g = frobenius_orthogonality(n).unwrap();
            assert!(is_orthogonal_gram(&g));
            for k in 0..=n {
                let d = &g[k][k];
                assert_eq!(d.val_q().finite().unwrap(), &rat(n as i64, n as i64 + 1));
                let (re, im) = to_c(&d.leading().unwrap().1);
                assert!((re.hypot(im) - (n + 1) as f64).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn bulk_shift() {
        let r = bulk_shift_perturbation(2, &rat(1, 10)).unwrap();
        assert_eq!(r.min_extra_valuation, rat(9, 10));
        assert_eq!(r.witness.degrees, vec![1, 1, 1]);
        for n in 2..=5 {
            for e in [rat(1, 10), rat(1, 3), rat(9, 10)] {
                let r = bulk_shift_perturbation(n, &e).unwrap();
                assert!(r.min_extra_valuation >= int(1) - &e);
                assert_eq!(surjectivity_test(&r.leading.entries, &int(2)).unwrap().verdict, surjectivity_test(&oc_matrix(n, OcKind::Projective, None).unwrap().entries, &int(2)).unwrap().verdict);
            }
        }
        assert!(matches!(bulk_shift_perturbation(2, &int(1)), Err(Error::ShiftTooLarge(_))));
        assert!(bulk_shift_perturbation(1, &rat(1, 10)).is_err());
    }
}
