//! Clifford algebras of quadratic forms over Novikov scalars, Z_2 graded.

use crate::error::{Error, Result};
use crate::linalg::{add_entry, determinant, Matrix, SparseVec};
use crate::novikov::{NovikovElement, Valuation};
use crate::rational::Rational;

use super::AInftyAlgebra;

/// Name of the basis monomial e_S: "1" or "e1_3" for S = {1,3}.
pub fn subset_name(mask: usize, n: usize) -> String {
    if mask == 0 {
        return "1".into();
    }
    let idx: Vec<String> = (0..n).filter(|i| mask & (1 << i) != 0).map(|i| (i + 1).to_string()).collect();
    format!("e{}", idx.join("_"))
}

/// e_a · Σ c_S e_S, reducing with e_a e_b = −e_b e_a + 2Q_ab and e_a² = Q_aa.
fn left_mul_gen(q: &Matrix, a: usize, v: &SparseVec) -> SparseVec {
    let mut out = SparseVec::new();
    for (s, c) in v {
        left_mul_word(q, a, *s, c, &mut out);
    }
    out
}

fn left_mul_word(q: &Matrix, a: usize, s: usize, c: &NovikovElement, out: &mut SparseVec) {
    let Some(first) = (0..q.len()).find(|i| s & (1 << i) != 0) else {
        add_entry(out, 1 << a, c);
        return;
    };
    if a < first {
        add_entry(out, s | (1 << a), c);
    } else if a == first {
        let x = c * &q[a][a];
        add_entry(out, s & !(1 << a), &x);
    } else {
        // e_a e_f w = −e_f (e_a w) + 2Q_af w
        let rest = s & !(1 << first);
        let two_q = q[a][first].scale_rational(&Rational::from_integer(2.into()));
        let x = c * &two_q;
        add_entry(out, rest, &x);
        let mut inner = SparseVec::new();
        left_mul_word(q, a, rest, c, &mut inner);
        for (t, y) in inner {
            left_mul_word(q, first, t, &-&y, out);
        }
    }
}

/// Associative Clifford product of e_S and e_T.
pub fn clifford_product(q: &Matrix, s: usize, t: usize) -> SparseVec {
    let n = q.len();
    let mut v = SparseVec::from([(t, NovikovElement::one(1))]);
    for a in (0..n).rev() {
        if s & (1 << a) != 0 {
            v = left_mul_gen(q, a, &v);
        }
    }
    v
}

/// Rank 2^n algebra with m_2(a,b) = (−1)^{|a|} a·b and all other m_d zero.
pub fn clifford_algebra(q: &Matrix, cutoff: Rational) -> Result<AInftyAlgebra> {
    let n = q.len();
    if n == 0 || n > 8 || q.iter().any(|r| r.len() != n) {
        return Err(Error::InvalidInput(format!("quadratic form must be square of size 1..=8, got {n}")));
    }
    for i in 0..n {
        for j in 0..i {
            if q[i][j] != q[j][i] {
                return Err(Error::InvalidInput("quadratic form is not symmetric".into()));
            }
        }
    }
    let det = determinant(q).with_cutoff(Valuation::Finite(cutoff.clone()));
    if det.is_zero() {
        return Err(Error::DegenerateQuadraticForm);
    }
    let mut a = AInftyAlgebra::new(2, cutoff)?;
    let o = a.add_object("L")?;
    for s in 0..(1usize << n) {
        a.add_generator(&subset_name(s, n), s.count_ones() % 2, o, o)?;
    }
    a.set_unit(o, 0)?;
    for s in 0..(1usize << n) {
        for t in 0..(1usize << n) {
            let mut v = clifford_product(q, s, t);
            if s.count_ones() % 2 == 1 {
                v = v.into_iter().map(|(k, x)| (k, -x)).collect();
            }
            a.set_tensor(vec![s, t], v)?;
        }
    }
    Ok(a)
}
