//! Point blowups: index and area under projection, the quantum cohomology splitting, generation by old and exceptional branes.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{is_zero_matrix, rank, zero_matrix, Matrix};
use crate::novikov::NovikovElement;
use crate::openclosed::{bulk_shift_perturbation, column, oc_matrix, pair_columns, OcKind, QuantumCohomologyPn};
use crate::rational::{format_rational, int, is_positive, Rational};
use crate::toric::BlaschkeClass;

/// I(ũ) = I(u) − 2(n−1)d, d = [ũ]·E.
pub fn index_correspondence(i_down: i64, n: usize, d: u32) -> Result<i64> {
    if i_down % 2 != 0 {
        return Err(Error::InvalidInput(format!("index {i_down} is odd")));
    }
    if n == 0 {
        return Err(Error::InvalidInput("n must be at least 1".into()));
    }
    Ok(i_down - 2 * (n as i64 - 1) * d as i64)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AreaCorrespondence {
    #[serde(serialize_with = "crate::rational::as_string::one")]
    pub area: Rational,
    /// the lifted area is ≤ 0
    pub nonpositive: bool,
}

/// A(ũ) = A(u) − εd.
pub fn area_correspondence(a_down: &Rational, eps: &Rational, d: u32) -> AreaCorrespondence {
    let area = a_down - eps * int(d as i64);
    let nonpositive = !is_positive(&area);
    AreaCorrespondence { area, nonpositive }
}

/// Toric fiber at moment position x in C^n and in its ε-blowup at the origin.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalModel {
    pub n: usize,
    pub eps: Rational,
    pub x: Vec<Rational>,
}

impl LocalModel {
    pub fn new(eps: Rational, x: Vec<Rational>) -> Result<Self> {
        let n = x.len();
        if n < 2 {
            return Err(Error::InvalidInput("local model needs n ≥ 2".into()));
        }
        if !is_positive(&eps) || !x.iter().all(is_positive) {
            return Err(Error::InvalidInput("moment coordinates and epsilon must be positive".into()));
        }
        let s: Rational = x.iter().sum();
        if s <= eps {
            return Err(Error::InvalidInput("fiber must lie outside the removed ball".into()));
        }
        Ok(LocalModel { n, eps, x })
    }

    /// Disk areas of the n coordinate divisors and of E.
    pub fn upstairs_areas(&self) -> Vec<Rational> {
        let mut a = self.x.clone();
        a.push(self.x.iter().sum::<Rational>() - &self.eps);
        a
    }

    /// Class with degrees d in the coordinate factors and d_e in the E factor.
    pub fn upstairs(&self, d: &[u32], d_e: u32) -> Result<BlaschkeClass> {
        let mut deg = d.to_vec();
        deg.push(d_e);
        BlaschkeClass::new(deg, self.upstairs_areas())
    }

    /// The projection: each E-root becomes a common root of all coordinates, passing through p.
    pub fn downstairs(&self, d: &[u32], d_e: u32) -> Result<BlaschkeClass> {
        BlaschkeClass::new(d.iter().map(|x| x + d_e).collect(), self.x.clone())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Summand {
    pub name: String,
    pub rank: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplitReport {
    pub n: usize,
    #[serde(serialize_with = "crate::rational::as_string::one")]
    pub eps: Rational,
    pub base_dim: usize,
    pub exceptional_dim: usize,
    pub total_dim: usize,
    pub summands: Vec<Summand>,
}

/// Bl_p P^n at size ε.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlowupModel {
    pub n: usize,
    pub eps: Rational,
    pub base: QuantumCohomologyPn,
}

impl BlowupModel {
    pub fn projective(n: usize, eps: Rational) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidInput(format!("no exceptional branes for n = {n}")));
        }
        if !is_positive(&eps) {
            return Err(Error::InvalidInput("epsilon must be positive".into()));
        }
        Ok(BlowupModel { n, eps, base: QuantumCohomologyPn { n } })
    }

    pub fn exceptional_labels(&self) -> Vec<String> {
        (1..self.n).map(|k| format!("Z_{k}")).collect()
    }

    /// Base classes first, then Z_1..Z_{n−1}.
    pub fn basis_labels(&self) -> Vec<String> {
        let mut v: Vec<String> = (0..self.base.dim()).map(|b| format!("h^{b}")).collect();
        v.extend(self.exceptional_labels());
        v
    }

    pub fn total_dim(&self) -> usize {
        self.base.dim() + self.n - 1
    }

    /// Poincaré pairing on the base, ⟨Z_a, Z_b⟩ = −1 iff a + b = n on the exceptional classes, zero across.
    pub fn pairing(&self) -> Matrix {
        let nb = self.base.dim();
        let mut p = zero_matrix(self.total_dim(), self.total_dim());
        for (i, row) in self.base.pairing().into_iter().enumerate() {
            for (j, x) in row.into_iter().enumerate() {
                p[i][j] = x;
            }
        }
        for a in 1..self.n {
            let b = self.n - a;
            p[nb + a - 1][nb + b - 1] = NovikovElement::integer(-1);
        }
        p
    }
}

/// QH(X̃) ≅ QH(X, b + q^{−ε}p) ⊕ QH(pt)^{⊕ n−1}.
pub fn qh_split(model: &BlowupModel) -> Result<SplitReport> {
    if model.eps >= int(1) {
        return Err(Error::ShiftTooLarge(format_rational(&model.eps)));
    }
    let mut summands = vec![Summand { name: format!("QH(P^{}, q^-{} p)", model.n, format_rational(&model.eps)), rank: model.base.dim() }];
    summands.extend((1..model.n).map(|k| Summand { name: format!("QH(pt)_{k}"), rank: 1 }));
    Ok(SplitReport {
        n: model.n,
        eps: model.eps.clone(),
        base_dim: model.base.dim(),
        exceptional_dim: model.n - 1,
        total_dim: summands.iter().map(|s| s.rank).sum(),
        summands,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Generation {
    Generates,
    Fails,
    CutoffLimited,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GenerationReport {
    pub orthogonal: bool,
    pub old_rank: usize,
    pub exceptional_rank: usize,
    pub total_dim: usize,
    pub cutoff_limited: bool,
    /// ⟨old column, exceptional column⟩
    pub cross_gram: Matrix,
    pub verdict: Generation,
}

/// Orthogonal block images of complementary dimension.
pub fn generation_check(oc_old: &Matrix, oc_exceptional: &Matrix, pairing: &Matrix, cutoff: &Rational) -> Result<GenerationReport> {
    let dim = pairing.len();
    if oc_old.len() != dim || oc_exceptional.len() != dim {
        return Err(Error::InvalidInput("blocks must be written over the common quantum basis".into()));
    }
    let cols = |m: &Matrix| if m.is_empty() { 0 } else { m[0].len() };
    let (co, ce) = (cols(oc_old), cols(oc_exceptional));
    let cross_gram: Matrix = (0..co).map(|i| (0..ce).map(|j| pair_columns(pairing, &column(oc_old, i), &column(oc_exceptional, j))).collect()).collect();
    let orthogonal = is_zero_matrix(&cross_gram);
    // row rank: each quantum-basis row is rescaled by its own q-power
    let as_rows = |m: &Matrix| m.iter().map(|r| r.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i, x.clone())).collect()).collect::<Vec<_>>();
    let ro = rank(&as_rows(oc_old), cutoff);
    let re = rank(&as_rows(oc_exceptional), cutoff);
    let cutoff_limited = ro.cutoff_limited || re.cutoff_limited;
    let verdict = if orthogonal && ro.rank + re.rank == dim {
        Generation::Generates
    } else if cutoff_limited {
        Generation::CutoffLimited
    } else {
        Generation::Fails
    };
    Ok(GenerationReport { orthogonal, old_rank: ro.rank, exceptional_rank: re.rank, total_dim: dim, cutoff_limited, cross_gram, verdict })
}

/// Old branes: FFT_q on the base rows. Exceptional branes: exceptional FFT_q on the Z rows.
pub fn blowup_blocks(model: &BlowupModel) -> Result<(Matrix, Matrix)> {
    let nb = model.base.dim();
    let dim = model.total_dim();
    let old = oc_matrix(model.n, OcKind::Projective, None)?;
    let exc = oc_matrix(model.n, OcKind::Exceptional, Some(model.eps.clone()))?;
    let mut a = zero_matrix(dim, nb);
    for (b, row) in old.entries.iter().enumerate() {
        a[b].clone_from(row);
    }
    let mut e = zero_matrix(dim, model.n - 1);
    for (b, row) in exc.entries.iter().enumerate() {
        e[nb + b].clone_from(row);
    }
    Ok((a, e))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlowupReport {
    pub split: Option<SplitReport>,
    pub basis: Vec<String>,
    pub generation: GenerationReport,
    #[serde(serialize_with = "crate::rational::as_string::opt")]
    pub min_extra_valuation: Option<Rational>,
    pub note: Option<String>,
}

/// The full bookkeeping for Bl_p P^n; ε ≥ 1 leaves the bulk-shift corrections uncontrolled.
pub fn blowup_generation(model: &BlowupModel, cutoff: &Rational) -> Result<BlowupReport> {
    let (old, exc) = blowup_blocks(model)?;
    let mut generation = generation_check(&old, &exc, &model.pairing(), cutoff)?;
    let (split, min_extra_valuation, note) = match bulk_shift_perturbation(model.n, &model.eps) {
        Ok(r) => (Some(qh_split(model)?), Some(r.min_extra_valuation), None),
        Err(Error::ShiftTooLarge(e)) => {
            if generation.verdict == Generation::Generates {
                generation.verdict = Generation::CutoffLimited;
            }
            (None, None, Some(format!("epsilon = {e}: corrections to the shifted block are not below the leading order")))
        }
        Err(e) => return Err(e),
    };
    Ok(BlowupReport { split, basis: model.basis_labels(), generation, min_extra_valuation, note })
}

/// Sphere degree bounds in E: d ≥ k + 2m from the (Π,R) index, d ≤ k − 2k/(n−1) from the forgotten type.
pub fn sphere_degree_bounds(n: usize, k: u32, m: u32) -> Result<(Rational, Rational)> {
    if n < 2 {
        return Err(Error::InvalidInput("needs n ≥ 2".into()));
    }
    if m == 0 {
        return Err(Error::InvalidInput("needs m ≥ 1 sphere components".into()));
    }
    let (n, k, m) = (n as i64, k as i64, m as i64);
    // 2d − 2k − 4m ≥ 0
    let lower = int(k + 2 * m);
    // (2n − 6)k − 2(n − 1)d ≥ 0
    let upper = Rational::new(((2 * n - 6) * k).into(), (2 * (n - 1)).into());
    Ok((lower, upper))
}

/// No integer d ≥ 1 meets both bounds.
pub fn exceptional_sphere_obstruction(n: usize, k: u32, m: u32) -> Result<bool> {
    let (lower, upper) = sphere_degree_bounds(n, k, m)?;
    let lo = lower.ceil().max(int(1));
    Ok(lo > upper.floor())
}
