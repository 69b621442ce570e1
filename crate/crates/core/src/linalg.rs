//! Exact linear algebra over truncated Novikov scalars.

use std::collections::{BTreeMap, BTreeSet};

use crate::novikov::{NovikovElement, Valuation};
use crate::rational::Rational;

/// Sparse vector: index → nonzero entry.
pub type SparseVec = BTreeMap<usize, NovikovElement>;

/// Dense matrix, row major.
pub type Matrix = Vec<Vec<NovikovElement>>;

/// `acc += c·v`, dropping entries that cancel.
pub fn axpy(acc: &mut SparseVec, c: &NovikovElement, v: &SparseVec) {
    for (i, x) in v {
        add_entry(acc, *i, &(c * x));
    }
}

pub fn add_entry(acc: &mut SparseVec, i: usize, x: &NovikovElement) {
    if x.is_zero() && !x.is_truncated() {
        return;
    }
    let sum = match acc.get(&i) {
        Some(y) => y + x,
        None => x.clone(),
    };
    if sum.is_zero() && !sum.is_truncated() {
        acc.remove(&i);
    } else {
        acc.insert(i, sum);
    }
}

/// True iff every entry is an exact zero.
pub fn is_zero_vec(v: &SparseVec) -> bool {
    v.values().all(|x| x.is_zero() && !x.is_truncated())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankReport {
    pub rank: usize,
    /// Some rank deficiency could not be certified below the cutoff.
    pub cutoff_limited: bool,
}

/// Rank by Gaussian elimination with minimal-valuation full pivoting.
///
/// Each row is first rescaled by a power of q so its leading valuation is 0.
/// An entry is a pivot only if its valuation lies strictly below `cutoff`.
pub fn rank(rows: &[SparseVec], cutoff: &Rational) -> RankReport {
    let cut = Valuation::Finite(cutoff.clone());
    let mut work: Vec<SparseVec> = Vec::with_capacity(rows.len());
    let mut cutoff_limited = false;
    for r in rows {
        let min = r.values().filter_map(|x| x.val_q().finite().cloned()).min();
        let Some(min) = min else {
            if r.values().any(|x| x.is_truncated()) {
                cutoff_limited = true;
            }
            continue;
        };
        let shifted: SparseVec = r
            .iter()
            .map(|(i, x)| (*i, x.shift(&-&min).with_cutoff(cut.clone())))
            .filter(|(_, x)| !(x.is_zero() && !x.is_truncated()))
            .collect();
        work.push(shifted);
    }
    let mut col_rows: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
    for (ri, r) in work.iter().enumerate() {
        for (c, x) in r {
            if !x.is_zero() {
                col_rows.entry(*c).or_default().insert(ri);
            }
        }
    }
    let mut active: BTreeSet<usize> = (0..work.len()).collect();
    // cached best pivot per row: (valuation, non-monomial, column)
    let best_of = |r: &SparseVec| -> Option<(Rational, bool, usize)> {
        r.iter()
            .filter(|(_, x)| !x.is_zero())
            .map(|(c, x)| (x.val_q().finite().cloned().unwrap(), !x.is_monomial(), *c))
            .min()
    };
    let mut best: Vec<Option<(Rational, bool, usize)>> = work.iter().map(best_of).collect();
    let mut rank = 0usize;
    loop {
        let mut pick: Option<(Rational, bool, usize, usize)> = None;
        for &ri in &active {
            if let Some((v, nm, c)) = &best[ri] {
                let cand = (v.clone(), *nm, ri, *c);
                if pick.as_ref().map_or(true, |p| (&cand.0, cand.1, cand.2) < (&p.0, p.1, p.2)) {
                    pick = Some(cand);
                }
            }
        }
        let Some((v, _, pr, pc)) = pick else { break };
        if v >= *cutoff {
            cutoff_limited = true;
            break;
        }
        let pivot_row = std::mem::take(&mut work[pr]);
        active.remove(&pr);
        for c in pivot_row.keys() {
            if let Some(set) = col_rows.get_mut(c) {
                set.remove(&pr);
            }
        }
        let inv = pivot_row[&pc].invert(cutoff).expect("nonzero pivot");
        let targets: Vec<usize> = col_rows.get(&pc).map(|s| s.iter().copied().collect()).unwrap_or_default();
        for tr in targets {
            let f = &work[tr][&pc] * &inv;
            let neg_f = -&f;
            for (c, x) in &pivot_row {
                let before = work[tr].get(c).map_or(false, |y| !y.is_zero());
                add_entry(&mut work[tr], *c, &(&neg_f * x));
                if *c == pc {
                    // exact elimination of the pivot column
                    if let Some(y) = work[tr].get(c) {
                        let t = y.is_truncated();
                        if y.is_zero() || t {
                            work[tr].remove(c);
                        }
                    }
                }
                let after = work[tr].get(c).map_or(false, |y| !y.is_zero());
                match (before, after) {
                    (false, true) => {
                        col_rows.entry(*c).or_default().insert(tr);
                    }
                    (true, false) => {
                        if let Some(s) = col_rows.get_mut(c) {
                            s.remove(&tr);
                        }
                    }
                    _ => {}
                }
            }
            best[tr] = best_of(&work[tr]);
        }
        best[pr] = None;
        rank += 1;
    }
    for &ri in &active {
        if work[ri].values().any(|x| x.is_truncated()) {
            cutoff_limited = true;
        }
    }
    RankReport { rank, cutoff_limited }
}

/// Rank of a dense matrix (rows as given).
pub fn dense_rank(m: &Matrix, cutoff: &Rational) -> RankReport {
    let rows: Vec<SparseVec> = m
        .iter()
        .map(|r| r.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i, x.clone())).collect())
        .collect();
    rank(&rows, cutoff)
}

/// Determinant by Laplace expansion over column subsets; exact, division free.
pub fn determinant(m: &Matrix) -> NovikovElement {
    let n = m.len();
    assert!(m.iter().all(|r| r.len() == n), "determinant of a non-square matrix");
    assert!(n <= 20, "determinant size {n} too large");
    let order = m.iter().flatten().fold(1u32, |acc, x| num_integer::lcm(acc, x.order()));
    let mut f: Vec<Option<NovikovElement>> = vec![None; 1usize << n];
    f[0] = Some(NovikovElement::one(order));
    for mask in 1usize..(1 << n) {
        let k = mask.count_ones() as usize;
        let row = &m[k - 1];
        let mut acc = NovikovElement::zero(order);
        for j in 0..n {
            if mask & (1 << j) == 0 || row[j].is_zero() {
                continue;
            }
            let sub = f[mask ^ (1 << j)].as_ref().expect("filled in increasing order");
            if sub.is_zero() {
                continue;
            }
            let greater = (mask >> (j + 1)).count_ones();
            let term = &row[j] * sub;
            acc = if greater % 2 == 0 { &acc + &term } else { &acc - &term };
        }
        f[mask] = Some(acc);
    }
    f[(1 << n) - 1].take().unwrap()
}

pub fn transpose(m: &Matrix) -> Matrix {
    if m.is_empty() {
        return Vec::new();
    }
    (0..m[0].len()).map(|j| m.iter().map(|r| r[j].clone()).collect()).collect()
}

pub fn matmul(a: &Matrix, b: &Matrix) -> Matrix {
    let inner = b.len();
    let cols = if inner == 0 { 0 } else { b[0].len() };
    let order = 1;
    a.iter()
        .map(|r| {
            (0..cols)
                .map(|j| {
                    (0..inner).fold(NovikovElement::zero(order), |acc, k| {
                        if r[k].is_zero() || b[k][j].is_zero() {
                            acc
                        } else {
                            &acc + &(&r[k] * &b[k][j])
                        }
                    })
                })
                .collect()
        })
        .collect()
}

/// True iff all off-diagonal entries vanish.
pub fn is_diagonal(m: &Matrix) -> bool {
    m.iter().enumerate().all(|(i, r)| r.iter().enumerate().all(|(j, x)| i == j || x.is_zero()))
}

pub fn is_zero_matrix(m: &Matrix) -> bool {
    m.iter().flatten().all(NovikovElement::is_zero)
}

/// Smallest entry valuation.
pub fn min_valuation(m: &Matrix) -> Valuation {
    m.iter().flatten().map(|x| x.val_q()).min().unwrap_or(Valuation::Infinite)
}

pub fn zero_matrix(rows: usize, cols: usize) -> Matrix {
    vec![vec![NovikovElement::zero(1); cols]; rows]
}

pub fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { NovikovElement::one(1) } else { NovikovElement::zero(1) }).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::novikov::CyclotomicNumber;
    use crate::rational::{int, rat};

    fn c(n: i64) -> NovikovElement {
        NovikovElement::integer(n)
    }

    fn q(e: Rational) -> NovikovElement {
        NovikovElement::q_pow(e)
    }

    #[test]
    fn determinant_small() {
        let m = vec![vec![c(1), c(2)], vec![c(3), c(4)]];
        assert_eq!(determinant(&m), c(-2));
        let m3 = vec![vec![c(2), c(0), c(1)], vec![c(1), c(3), c(2)], vec![c(1), c(1), c(1)]];
        // 2(3-2) - 0 + 1(1-3) = 0
        assert_eq!(determinant(&m3), c(0));
        assert_eq!(determinant(&identity(5)), c(1));
    }

    #[test]
    fn dft3_determinant_matches_closed_form() {
        // det of (ζ^{ab}) for order 3 is 3(ζ² − ζ) up to sign; its square is −27
        let z = |k: i64| NovikovElement::constant(CyclotomicNumber::root_of_unity(3, k));
        let m: Matrix = (0..3).map(|b| (0..3).map(|a| z(a * b)).collect()).collect();
        let d = determinant(&m);
        assert_eq!(&d * &d, c(-27));
    }

    #[test]
    fn rank_examples() {
        let cut = int(3);
        let r = |v: Vec<NovikovElement>| -> SparseVec { v.into_iter().enumerate().filter(|(_, x)| !x.is_zero()).collect() };
        let rows = vec![r(vec![c(1), c(2)]), r(vec![c(2), c(4)])];
        assert_eq!(rank(&rows, &cut), RankReport { rank: 1, cutoff_limited: false });
        let rows = vec![r(vec![q(rat(1, 2)), c(1)]), r(vec![c(1), q(rat(1, 2))])];
        assert_eq!(rank(&rows, &cut).rank, 2);
        // rows (1, q) and (1+q, q+q²) are dependent; the non-monomial pivot path
        let one_q = &c(1) + &q(int(1));
        let rows = vec![r(vec![one_q.clone(), &one_q * &q(int(1))]), r(vec![c(1), q(int(1))])];
        assert_eq!(rank(&rows, &cut).rank, 1);
        assert_eq!(rank(&[], &cut).rank, 0);
    }

    #[test]
    fn rank_is_row_scaling_invariant() {
        let cut = int(3);
        let rows: Vec<SparseVec> = (0..4)
            .map(|b| (0..4).map(|a| (a as usize, NovikovElement::constant(CyclotomicNumber::root_of_unity(4, a * b)).shift(&rat(7 * b, 4)))).collect())
            .collect();
        assert_eq!(rank(&rows, &cut), RankReport { rank: 4, cutoff_limited: false });
    }
}
