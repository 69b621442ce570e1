//! Hochschild chains and cochains of flat A∞ categories; homology by exact elimination.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::ainfty::AInftyAlgebra;
use crate::error::{Error, Result};
use crate::linalg::{add_entry, axpy, rank, SparseVec};
use crate::novikov::{NovikovElement, Valuation};

/// A linear combination of cyclic words a_0 ⊗ a_1 ⊗ … ⊗ a_d.
pub type Chain = BTreeMap<Vec<usize>, NovikovElement>;

fn shifted(a: &AInftyAlgebra, g: usize) -> u32 {
    a.degree(g) + 1
}

fn sign(x: &NovikovElement, exp: u32) -> NovikovElement {
    if exp % 2 == 1 {
        -x
    } else {
        x.clone()
    }
}

fn add_chain(acc: &mut Chain, key: Vec<usize>, x: &NovikovElement) {
    if x.is_zero() {
        return;
    }
    let sum = match acc.remove(&key) {
        Some(y) => &y + x,
        None => x.clone(),
    };
    if !sum.is_zero() {
        acc.insert(key, sum);
    }
}

/// Degree |a_0| + Σ_{i≥1} (|a_i| − 1) in Z_N.
pub fn chain_degree(a: &AInftyAlgebra, word: &[usize]) -> u32 {
    let n = a.grading() as i64;
    let s: i64 = a.degree(word[0]) as i64 + word[1..].iter().map(|g| a.degree(*g) as i64 - 1).sum::<i64>();
    s.rem_euclid(n) as u32
}

fn degenerate(a: &AInftyAlgebra, word: &[usize]) -> bool {
    word[1..].iter().any(|g| a.is_unit(*g))
}

/// Boundary of one cyclic word in the normalized complex.
///
/// Contractions away from a_0 carry the Koszul sign of moving m past a_0 … a_{i−1};
/// contractions through a_0 first rotate the trailing block to the front.
pub fn boundary_word(a: &AInftyAlgebra, word: &[usize]) -> Chain {
    let n = word.len();
    let mut out = Chain::new();
    let sh: Vec<u32> = word.iter().map(|g| shifted(a, *g)).collect();
    // interior contractions
    for i in 1..n {
        let before: u32 = sh[..i].iter().sum();
        for j in 1..=(n - i) {
            let Some(v) = a.tensors().get(&word[i..i + j]) else { continue };
            for (g, x) in v {
                let mut w = Vec::with_capacity(n - j + 1);
                w.extend_from_slice(&word[..i]);
                w.push(*g);
                w.extend_from_slice(&word[i + j..]);
                if !degenerate(a, &w) {
                    add_chain(&mut out, w, &sign(x, before));
                }
            }
        }
    }
    // contractions through a_0: last r entries rotated to the front
    for r in 0..n {
        let tail: u32 = sh[n - r..].iter().sum();
        let head: u32 = sh[..n - r].iter().sum();
        let rot_sign = tail * head;
        let mut rotated = Vec::with_capacity(n);
        rotated.extend_from_slice(&word[n - r..]);
        rotated.extend_from_slice(&word[..n - r]);
        for j in 1..=(n - r) {
            let Some(v) = a.tensors().get(&rotated[..r + j]) else { continue };
            for (g, x) in v {
                let mut w = Vec::with_capacity(n - r - j + 1);
                w.push(*g);
                w.extend_from_slice(&rotated[r + j..]);
                if !degenerate(a, &w) {
                    add_chain(&mut out, w, &sign(x, rot_sign));
                }
            }
        }
    }
    out
}

/// Linear extension of the boundary.
pub fn hochschild_boundary(a: &AInftyAlgebra, chain: &Chain) -> Chain {
    let mut out = Chain::new();
    for (w, c) in chain {
        for (k, x) in boundary_word(a, w) {
            add_chain(&mut out, k, &(c * &x));
        }
    }
    out
}

/// Normalized cyclic words of length 1..=max_length, grouped by length.
pub fn chain_basis(a: &AInftyAlgebra, max_length: usize) -> Vec<Vec<Vec<usize>>> {
    let mut by_len = vec![Vec::new(); max_length + 1];
    let gens: Vec<usize> = (0..a.rank()).collect();
    let mut stack: Vec<Vec<usize>> = gens.iter().map(|g| vec![*g]).collect();
    while let Some(w) = stack.pop() {
        let last = a.generators()[*w.last().unwrap()].target;
        let first = a.generators()[w[0]].source;
        if last == first {
            by_len[w.len()].push(w.clone());
        }
        if w.len() < max_length {
            for &g in &gens {
                if a.generators()[g].source == last && !a.is_unit(g) {
                    let mut v = w.clone();
                    v.push(g);
                    stack.push(v);
                }
            }
        }
    }
    for l in by_len.iter_mut() {
        l.sort();
    }
    by_len
}

/// Per-degree dimensions at one truncation length.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HHDims {
    pub length: usize,
    pub dims: BTreeMap<u32, usize>,
    pub cutoff_limited: bool,
}

impl HHDims {
    pub fn total(&self) -> usize {
        self.dims.values().sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HHReport {
    pub current: HHDims,
    pub previous: HHDims,
    /// dimensions at L and L−1 agree
    pub stable: bool,
}

#[derive(Clone, Debug)]
pub struct HochschildComplex<'a> {
    algebra: &'a AInftyAlgebra,
    max_length: usize,
    words: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
    reverse: bool,
}

impl<'a> HochschildComplex<'a> {
    pub fn new(algebra: &'a AInftyAlgebra, max_length: usize) -> Result<Self> {
        if !algebra.is_flat() {
            return Err(Error::InvalidInput("Hochschild complex of a curved category; decompose by potential value first".into()));
        }
        if max_length < 2 {
            return Err(Error::InvalidInput("truncation length must be at least 2".into()));
        }
        let words: Vec<Vec<usize>> = chain_basis(algebra, max_length).into_iter().flatten().collect();
        if words.len() > 200_000 {
            return Err(Error::EnumerationBudget(format!("{} Hochschild chains at length {max_length}", words.len())));
        }
        let index = words.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();
        Ok(HochschildComplex { algebra, max_length, words, index, reverse: false })
    }

    /// Eliminate in reversed basis order (pivot tie-breaking changes).
    pub fn reversed(mut self) -> Self {
        self.reverse = !self.reverse;
        self
    }

    pub fn words(&self) -> &[Vec<usize>] {
        &self.words
    }

    fn rows(&self, len_max: usize, degree: u32, only_top: bool) -> Vec<SparseVec> {
        let mut rows: Vec<SparseVec> = self
            .words
            .iter()
            .filter(|w| w.len() <= len_max && chain_degree(self.algebra, w) == degree)
            .map(|w| {
                let mut row = SparseVec::new();
                for (k, x) in boundary_word(self.algebra, w) {
                    if only_top && k.len() != len_max {
                        continue;
                    }
                    let col = self.index[&k];
                    let col = if self.reverse { self.words.len() - 1 - col } else { col };
                    add_entry(&mut row, col, &x);
                }
                row
            })
            .collect();
        if self.reverse {
            rows.reverse();
        }
        rows
    }

    fn count(&self, len_max: usize, degree: u32) -> usize {
        self.words.iter().filter(|w| w.len() <= len_max && chain_degree(self.algebra, w) == degree).count()
    }

    /// Homology of words of length < `l`, with boundaries from words of length ≤ `l` whose boundary stays below `l`.
    pub fn dims_at(&self, l: usize) -> HHDims {
        let cut = self.algebra.cutoff();
        let n = self.algebra.grading();
        let mut dims = BTreeMap::new();
        let mut limited = false;
        for g in 0..n {
            let prev = (g + n - 1) % n;
            let rk_low = rank(&self.rows(l - 1, g, false), cut);
            let rk_full = rank(&self.rows(l, prev, false), cut);
            let rk_top = rank(&self.rows(l, prev, true), cut);
            limited |= rk_low.cutoff_limited || rk_full.cutoff_limited || rk_top.cutoff_limited;
            let kernel = self.count(l - 1, g) - rk_low.rank;
            let image = rk_full.rank - rk_top.rank;
            dims.insert(g, kernel - image);
        }
        HHDims { length: l, dims, cutoff_limited: limited }
    }

    pub fn max_length(&self) -> usize {
        self.max_length
    }

    /// Applies the boundary twice to every word of length ≤ L and returns the words where it fails.
    pub fn check_square_zero(&self) -> Vec<Vec<usize>> {
        let cut = Valuation::Finite(self.algebra.cutoff().clone());
        self.words
            .iter()
            .filter(|w| {
                let once = boundary_word(self.algebra, w);
                let twice = hochschild_boundary(self.algebra, &once);
                twice.values().any(|x| !x.with_cutoff(cut.clone()).is_zero())
            })
            .cloned()
            .collect()
    }
}

/// Dimensions at L and L−1 with the stabilization flag.
pub fn hochschild_homology_dims(a: &AInftyAlgebra, max_length: usize) -> Result<HHReport> {
    let c = HochschildComplex::new(a, max_length)?;
    let bad = c.check_square_zero();
    if let Some(w) = bad.first() {
        return Err(Error::MalformedAlgebra(format!("boundary does not square to zero on {}", a.names(w).join("⊗"))));
    }
    let current = c.dims_at(max_length);
    let previous = c.dims_at(max_length - 1);
    let stable = current.dims == previous.dims && !current.cutoff_limited && !previous.cutoff_limited;
    Ok(HHReport { current, previous, stable })
}

/// A Hochschild cochain τ = (τ_{ψ,d}), homogeneous of degree |τ|; keyed by (ψ, input word).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cochain {
    pub degree: u32,
    pub values: BTreeMap<(usize, Vec<usize>), SparseVec>,
}

impl Cochain {
    pub fn zero(degree: u32) -> Self {
        Cochain { degree, values: BTreeMap::new() }
    }

    /// The identity cochain 1_F.
    pub fn unit(a: &AInftyAlgebra) -> Result<Self> {
        let mut values = BTreeMap::new();
        for o in 0..a.objects().len() {
            let u = a.unit(o).ok_or_else(|| Error::MalformedAlgebra(format!("object {} has no unit", a.objects()[o])))?;
            values.insert((o, Vec::new()), SparseVec::from([(u, NovikovElement::one(1))]));
        }
        Ok(Cochain { degree: 0, values })
    }

    fn add(&mut self, key: (usize, Vec<usize>), c: &NovikovElement, v: &SparseVec) {
        let e = self.values.entry(key.clone()).or_default();
        axpy(e, c, v);
        if e.is_empty() {
            self.values.remove(&key);
        }
    }

    pub fn truncated(&self, a: &AInftyAlgebra) -> Cochain {
        let cut = Valuation::Finite(a.cutoff().clone());
        let values = self
            .values
            .iter()
            .map(|(k, v)| (k.clone(), v.iter().map(|(g, x)| (*g, x.with_cutoff(cut.clone()))).filter(|(_, x)| !x.is_zero()).collect::<SparseVec>()))
            .filter(|(_, v)| !v.is_empty())
            .collect();
        Cochain { degree: self.degree, values }
    }

    pub fn is_zero(&self, a: &AInftyAlgebra) -> bool {
        self.truncated(a).values.is_empty()
    }

    pub fn scaled(&self, c: &NovikovElement) -> Cochain {
        let mut out = Cochain::zero(self.degree);
        for (k, v) in &self.values {
            out.add(k.clone(), c, v);
        }
        out
    }

    pub fn plus(&self, other: &Cochain) -> Cochain {
        let mut out = self.clone();
        for (k, v) in &other.values {
            out.add(k.clone(), &NovikovElement::one(1), v);
        }
        out
    }
}

fn start(a: &AInftyAlgebra, word: &[usize], fallback: usize) -> usize {
    word.first().map_or(fallback, |g| a.generators()[*g].source)
}

fn sum_minus_one(a: &AInftyAlgebra, word: &[usize]) -> u32 {
    // Σ (|a_k| − 1) mod 2
    word.iter().map(|g| a.degree(*g) + 1).sum::<u32>() % 2
}

/// m¹_{CC}: insertion of τ into m, minus insertion of m into τ, with signs † and ♣.
pub fn cc_differential(a: &AInftyAlgebra, tau: &Cochain) -> Result<Cochain> {
    if !a.is_flat() {
        return Err(Error::InvalidInput("cochain differential needs a flat category".into()));
    }
    let t1 = (tau.degree + 1) % 2;
    let mut out = Cochain::zero((tau.degree + 1) % a.grading());
    let mut outer_index: BTreeMap<usize, Vec<(&Vec<usize>, usize)>> = BTreeMap::new();
    for k in a.tensors().keys() {
        for (p, g) in k.iter().enumerate() {
            outer_index.entry(*g).or_default().push((k, p));
        }
    }
    // first family: m(a_1..a_i, τ(…), …)
    for ((psi, key), val) in &tau.values {
        for (g, c) in val {
            let Some(outers) = outer_index.get(g) else { continue };
            for (o, p) in outers {
                let mut w = o[..*p].to_vec();
                w.extend_from_slice(key);
                w.extend_from_slice(&o[p + 1..]);
                let dagger = t1 * sum_minus_one(a, &o[..*p]);
                let obj = start(a, &w, *psi);
                out.add((obj, w), &sign(c, dagger), &a.tensors()[*o]);
            }
        }
    }
    // second family: −τ(a_1..a_i, m(…), …)
    for ((psi, key), val) in &tau.values {
        for (p, g) in key.iter().enumerate() {
            for (inner, iv) in a.tensors() {
                let Some(c) = iv.get(g) else { continue };
                let mut w = key[..p].to_vec();
                w.extend_from_slice(inner);
                w.extend_from_slice(&key[p + 1..]);
                let club = key[..p].iter().map(|x| a.degree(*x) + 1).sum::<u32>() + tau.degree + 1;
                let obj = start(a, &w, *psi);
                out.add((obj, w), &sign(c, club + 1), val);
            }
        }
    }
    Ok(out.truncated(a))
}

/// m^e_{CC}(τ_1, …, τ_e) for e ≥ 2.
pub fn cc_product(a: &AInftyAlgebra, taus: &[Cochain]) -> Result<Cochain> {
    let e = taus.len();
    if e < 2 {
        return Err(Error::InvalidInput("cc_product needs at least two cochains".into()));
    }
    if !a.is_flat() {
        return Err(Error::InvalidInput("cochain products need a flat category".into()));
    }
    let n = a.grading() as i64;
    let degree = (taus.iter().map(|t| t.degree as i64).sum::<i64>() + 2 - e as i64).rem_euclid(n) as u32;
    let mut out = Cochain::zero(degree);
    for (okey, oval) in a.tensors() {
        let d = okey.len();
        if d < e {
            continue;
        }
        // choose the slots of τ_1 … τ_e in increasing order
        let mut slots = Vec::with_capacity(e);
        choose_slots(d, e, 0, &mut slots, &mut |slots| {
            // per slot, the τ entries whose output contains the slot generator
            let mut partial: Vec<(Vec<usize>, NovikovElement, u32, usize)> = vec![(Vec::new(), NovikovElement::one(1), 0, usize::MAX)];
            let mut prev = 0;
            for (j, &s) in slots.iter().enumerate() {
                let tj = &taus[j];
                let tsh = (tj.degree + 1) % 2;
                let mut next = Vec::new();
                for (w, c, sg, obj) in &partial {
                    let mut w0 = w.clone();
                    w0.extend_from_slice(&okey[prev..s]);
                    let before = sum_minus_one(a, &w0);
                    for ((psi, key), val) in &tj.values {
                        let Some(x) = val.get(&okey[s]) else { continue };
                        let mut w1 = w0.clone();
                        w1.extend_from_slice(key);
                        let o = if *obj == usize::MAX && w0.is_empty() { *psi } else { *obj };
                        next.push((w1, c * x, sg + tsh * before, o));
                    }
                }
                partial = next;
                prev = s + 1;
            }
            for (mut w, c, sg, obj) in partial {
                w.extend_from_slice(&okey[prev..]);
                let o = if obj == usize::MAX { start(a, &w, 0) } else { obj };
                let o = if w.is_empty() { o } else { start(a, &w, o) };
                out.add((o, w), &sign(&c, sg), oval);
            }
        });
    }
    Ok(out.truncated(a))
}

fn choose_slots(d: usize, e: usize, from: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
    if cur.len() == e {
        f(cur);
        return;
    }
    for s in from..d {
        if d - s < e - cur.len() {
            break;
        }
        cur.push(s);
        choose_slots(d, e, s + 1, cur, f);
        cur.pop();
    }
}

/// The length-zero component at ψ.
pub fn restrict_to_object(tau: &Cochain, psi: usize) -> SparseVec {
    tau.values.get(&(psi, Vec::new())).cloned().unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ainfty::clifford_algebra;
    use crate::linalg::Matrix;
    use crate::rational::{int, rat};

    fn c(n: i64) -> NovikovElement {
        NovikovElement::integer(n)
    }

    fn form(n: usize) -> Matrix {
        (0..n).map(|i| (0..n).map(|j| NovikovElement::q_pow(rat(1, 3)).scale_rational(&int(if i == j { 2 } else { 1 }))).collect()).collect()
    }

    fn rank_one() -> AInftyAlgebra {
        let mut a = AInftyAlgebra::new(2, int(3)).unwrap();
        let o = a.add_object("L").unwrap();
        let u = a.add_generator("1", 0, o, o).unwrap();
        a.set_unit(o, u).unwrap();
        a.set_tensor(vec![u, u], SparseVec::from([(u, c(1))])).unwrap();
        a
    }

    #[test]
    fn rank_one_algebra() {
        let r = hochschild_homology_dims(&rank_one(), 3).unwrap();
        assert_eq!(r.current.dims, BTreeMap::from([(0, 1), (1, 0)]));
        assert!(r.stable);
    }

    /// dim A/[A,A]_s by direct super-commutator span
    fn supercommutator_quotient(a: &AInftyAlgebra) -> usize {
        let n = a.rank();
        let mut rows = Vec::new();
        for x in 0..n {
            for y in 0..n {
                // [x,y]_s = xy − (−1)^{|x||y|} yx with xy = (−1)^{|x|} m_2(x,y)
                let xy = a.m(&[x, y]);
                let yx = a.m(&[y, x]);
                let mut v = SparseVec::new();
                axpy(&mut v, &sign(&c(1), a.degree(x)), &xy);
                axpy(&mut v, &sign(&c(-1), a.degree(x) * a.degree(y) + a.degree(y)), &yx);
                rows.push(v);
            }
        }
        n - rank(&rows, a.cutoff()).rank
    }

    #[test]
    fn clifford_one_dimensional() {
        for n in 1..=2 {
            let a = clifford_algebra(&form(n), int(3)).unwrap();
            assert_eq!(supercommutator_quotient(&a), 1);
            let r = hochschild_homology_dims(&a, 3).unwrap();
            assert_eq!(r.current.total(), 1, "n = {n}");
            assert!(r.stable);
            let rev = HochschildComplex::new(&a, 3).unwrap().reversed().dims_at(3);
            assert_eq!(rev.dims, r.current.dims);
        }
    }

    #[test]
    fn boundary_of_length_one() {
        let a = clifford_algebra(&form(2), int(3)).unwrap();
        let e1 = a.index_of("e1").unwrap();
        let ch = boundary_word(&a, &[e1]);
        // m_1 = 0 and m_2 needs two inputs
        assert!(ch.is_empty());
        let e2 = a.index_of("e2").unwrap();
        // δ(e1 ⊗ e2) = m_2(e1,e2) + (−1)^{‖e2‖‖e1‖} m_2(e2,e1) = −e1e2 − e2e1 = −2Q_12·1
        let ch = boundary_word(&a, &[e1, e2]);
        let want: Chain = BTreeMap::from([(vec![0], NovikovElement::q_pow(rat(1, 3)).scale_rational(&int(-2)))]);
        assert_eq!(ch, want);
        // a strict unit in position ≥ 1 is degenerate and dropped
        assert!(boundary_word(&a, &[0, 0]).is_empty());
    }

    #[test]
    fn boundary_squares_to_zero() {
        for n in 1..=2 {
            let a = clifford_algebra(&form(n), int(3)).unwrap();
            assert!(HochschildComplex::new(&a, 4).unwrap().check_square_zero().is_empty());
        }
    }

    #[test]
    fn unit_cochain_is_closed() {
        let a = clifford_algebra(&form(2), int(3)).unwrap();
        let one = Cochain::unit(&a).unwrap();
        assert!(cc_differential(&a, &one).unwrap().is_zero(&a));
        assert_eq!(restrict_to_object(&one, 0), SparseVec::from([(0, c(1))]));
        assert!(restrict_to_object(&Cochain::zero(0), 0).is_empty());
    }

    fn sample_cochain(a: &AInftyAlgebra, degree: u32, seed: i64) -> Cochain {
        let mut t = Cochain::zero(degree);
        let r = a.rank();
        for (i, key) in [vec![], vec![1], vec![2], vec![1, 2], vec![3, 1]].into_iter().enumerate() {
            if key.iter().any(|g| *g >= r) {
                continue;
            }
            let dsum: u32 = key.iter().map(|g| a.degree(*g)).sum();
            let want = (dsum + degree + key.len() as u32) % 2;
            for g in 0..r {
                if a.degree(g) == want {
                    let coeff = NovikovElement::q_pow(rat((i as i64 + g as i64 + seed) % 5, 4)).scale_rational(&int(1 + (g as i64 * seed) % 3));
                    t.add((0, key.clone()), &coeff, &SparseVec::from([(g, c(1))]));
                }
            }
        }
        t
    }

    #[test]
    fn cochain_differential_squares_to_zero() {
        let a = clifford_algebra(&form(2), int(3)).unwrap();
        for deg in 0..2 {
            let t = sample_cochain(&a, deg, 3);
            let once = cc_differential(&a, &t).unwrap();
            assert!(!once.is_zero(&a));
            assert!(cc_differential(&a, &once).unwrap().is_zero(&a), "degree {deg}");
        }
        // inner derivation by an even element is closed
        let e12 = a.index_of("e1_2").unwrap();
        let x = Cochain { degree: 0, values: BTreeMap::from([((0, vec![]), SparseVec::from([(e12, c(1))]))]) };
        let inner = cc_differential(&a, &x).unwrap();
        assert!(cc_differential(&a, &inner).unwrap().is_zero(&a));
    }

    #[test]
    fn unit_acts_by_identity() {
        let a = clifford_algebra(&form(2), int(3)).unwrap();
        let one = Cochain::unit(&a).unwrap();
        for deg in 0..2 {
            let t = sample_cochain(&a, deg, 2);
            assert_eq!(cc_product(&a, &[one.clone(), t.clone()]).unwrap(), t.truncated(&a));
            let right = cc_product(&a, &[t.clone(), one.clone()]).unwrap();
            assert_eq!(right, t.scaled(&sign(&c(1), deg)).truncated(&a));
        }
        let c1 = one.scaled(&c(2));
        let c2 = one.scaled(&NovikovElement::q_pow(rat(1, 2)));
        let p = cc_product(&a, &[c1, c2]).unwrap();
        assert_eq!(p.values, BTreeMap::from([((0, vec![]), SparseVec::from([(0, NovikovElement::q_pow(rat(1, 2)).scale_rational(&int(2)))]))]));
    }

    #[test]
    fn leibniz_and_associativity() {
        let a = clifford_algebra(&form(2), int(3)).unwrap();
        for (d1, d2) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            let t1 = sample_cochain(&a, d1, 1);
            let t2 = sample_cochain(&a, d2, 4);
            let lhs = cc_differential(&a, &cc_product(&a, &[t1.clone(), t2.clone()]).unwrap()).unwrap();
            let x = cc_product(&a, &[cc_differential(&a, &t1).unwrap(), t2.clone()]).unwrap();
            let y = cc_product(&a, &[t1.clone(), cc_differential(&a, &t2).unwrap()]).unwrap();
            let total = lhs.plus(&x).plus(&y.scaled(&sign(&c(1), d1 + 1)));
            assert!(total.is_zero(&a), "{d1} {d2}");
            let t3 = sample_cochain(&a, 0, 5);
            let left = cc_product(&a, &[cc_product(&a, &[t1.clone(), t2.clone()]).unwrap(), t3.clone()]).unwrap();
            let right = cc_product(&a, &[t1.clone(), cc_product(&a, &[t2.clone(), t3.clone()]).unwrap()]).unwrap();
            assert!(left.plus(&right.scaled(&sign(&c(1), d1 + 1))).is_zero(&a), "{d1} {d2}");
        }
    }
}
