//! The thirteen acceptance checks as library functions, shared by `verify-all` and the test suite.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::ainfty::check_ainfty;
use crate::blowup::{blowup_generation, exceptional_sphere_obstruction, index_correspondence, area_correspondence, BlowupModel, Generation, LocalModel};
use crate::hochschild::hochschild_homology_dims;
use crate::novikov::{CyclotomicNumber, NovikovElement, Valuation};
use crate::openclosed::{bulk_shift_perturbation, frobenius_orthogonality, is_orthogonal_gram, oc_matrix, ring_hom_check, surjectivity_test, OcKind, Surjectivity};
use crate::rational::{format_rational, int, rat, Rational};
use crate::toric::{critical_points, divisor_equation_check, hessian, hessian_clifford, hessian_has_clifford_shape, PotentialFunction, PotentialKind};
use crate::trees::{boundary_strata_with_ops, census, enumerate_stable_types, leq, Degeneration, EnumerationOptions, Weight};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyConfig {
    pub seed: u64,
    #[serde(serialize_with = "crate::rational::as_string::one")]
    pub cutoff: Rational,
    pub hh_length: usize,
    #[serde(serialize_with = "crate::rational::as_string::one")]
    pub exceptional_eps: Rational,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { seed: 20_240_601, cutoff: int(2), hh_length: 4, exceptional_eps: rat(1, 10) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

pub const CRITERIA: [&str; 13] = [
    "novikov field axioms",
    "tree census",
    "a-infinity verification",
    "critical points",
    "divisor equation",
    "hochschild one-dimensionality",
    "oc = fft_q",
    "surjectivity",
    "co ring homomorphism",
    "orthogonality",
    "blowup splitting and generation",
    "index/area correspondence",
    "determinism",
];

fn result(id: u8, failures: Vec<String>, ok_detail: String) -> CriterionResult {
    let passed = failures.is_empty();
    let detail = if passed { ok_detail } else { failures.join("; ") };
    CriterionResult { id, name: CRITERIA[id as usize - 1].to_string(), passed, detail }
}

fn random_rational(rng: &mut ChaCha8Rng, max_num: i64, max_den: i64) -> Rational {
    rat(rng.gen_range(0..=max_num), rng.gen_range(1..=max_den))
}

/// c·q^e sums with cyclotomic coefficients of order dividing 12.
pub fn random_novikov(rng: &mut ChaCha8Rng, cutoff: &Rational) -> NovikovElement {
    let order = [1u32, 2, 3, 4, 6, 12][rng.gen_range(0..6)];
    let deg = crate::novikov::cyclotomic::totient(order);
    let terms: Vec<(Rational, CyclotomicNumber)> = (0..rng.gen_range(1..=3))
        .map(|_| {
            let coeffs = (0..deg).map(|_| int(rng.gen_range(-3..=3))).collect();
            (random_rational(rng, 8, 4), CyclotomicNumber::from_coeffs(order, coeffs).expect("length matches"))
        })
        .collect();
    NovikovElement::from_terms(order, terms, Valuation::Finite(cutoff.clone()))
}

fn c1_novikov(cfg: &VerifyConfig) -> CriterionResult {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let cut = int(3);
    let mut bad = Vec::new();
    for i in 0..1000 {
        let (a, b, c) = (random_novikov(&mut rng, &cut), random_novikov(&mut rng, &cut), random_novikov(&mut rng, &cut));
        if &(&a * &b) * &c != &a * &(&b * &c) {
            bad.push(format!("associativity fails on triple {i}"));
        }
        if &a * &(&b + &c) != &(&a * &b) + &(&a * &c) {
            bad.push(format!("distributivity fails on triple {i}"));
        }
        if &(&a + &b) + &c != &a + &(&b + &c) || &a * &b != &b * &a {
            bad.push(format!("additive associativity or commutativity fails on triple {i}"));
        }
    }
    let mut pairs = 0;
    while pairs < 1000 {
        let a = random_novikov(&mut rng, &cut).without_cutoff();
        let b = random_novikov(&mut rng, &cut).without_cutoff();
        if a.is_zero() || b.is_zero() {
            continue;
        }
        pairs += 1;
        let (va, vb) = (a.val_q(), b.val_q());
        let want = Valuation::Finite(va.finite().unwrap() + vb.finite().unwrap());
        if (&a * &b).val_q() != want {
            bad.push(format!("val_q not multiplicative on pair {pairs}"));
        }
    }
    result(1, bad, "1000 triples below cutoff 3 and 1000 valuation pairs exact".into())
}

/// Planar trees with k leaves, every internal vertex of valence ≥ 3, counted by dimension k − 1 − #internal.
pub fn parenthesization_faces(k: usize) -> std::collections::BTreeMap<i64, usize> {
    // t[m][v]: trees with m leaves and v internal vertices
    fn trees(m: usize, memo: &mut Vec<Option<Vec<usize>>>) -> Vec<usize> {
        if let Some(t) = &memo[m] {
            return t.clone();
        }
        let mut t = vec![0usize; m + 1];
        if m == 1 {
            t[0] = 1;
        } else {
            // any: sequences of ≥ 0 subtrees, two: of ≥ 2, by (leaves, internal vertices)
            let mut any = vec![vec![0usize; m + 1]; m + 1];
            let mut two = vec![vec![0usize; m + 1]; m + 1];
            any[0][0] = 1;
            for leaves in 1..=m {
                for first in 1..=leaves.min(m - 1) {
                    let sub = trees(first, memo);
                    for (sv, cnt) in sub.iter().enumerate() {
                        if *cnt == 0 {
                            continue;
                        }
                        for v in 0..=m - sv {
                            let a = any[leaves - first][v];
                            let b = if leaves - first > 0 { any[leaves - first][v] } else { 0 };
                            if sv + v <= m {
                                any[leaves][sv + v] += cnt * a;
                                two[leaves][sv + v] += cnt * b;
                            }
                        }
                    }
                }
            }
            for v in 0..m {
                t[v + 1] += two[m][v];
            }
        }
        memo[m] = Some(t.clone());
        t
    }
    let t = trees(k, &mut vec![None; k + 1]);
    t.iter().enumerate().filter(|(_, c)| **c > 0).map(|(v, c)| (k as i64 - 1 - v as i64, *c)).collect()
}

/// Allowed codimension-one moves: collapse a zero edge, a finite edge to 0 or ∞, one input weight to 0 or 1
/// (only to 1 when the output is weighted).
pub fn allowed_boundary_degeneration(op: Degeneration, output_weighted: bool) -> bool {
    match op {
        Degeneration::DiskBubble | Degeneration::EdgeToZero | Degeneration::EdgeToInfinity | Degeneration::WeightToOne => true,
        Degeneration::WeightToZero => !output_weighted,
        Degeneration::SphereBubble => false,
    }
}

fn c2_trees(_cfg: &VerifyConfig) -> CriterionResult {
    let mut bad = Vec::new();
    let mut checked = 0;
    for k in 2..=4 {
        let types = match enumerate_stable_types(k, 0, &EnumerationOptions::associahedron()) {
            Ok(t) => t,
            Err(e) => {
                bad.push(format!("k={k}: {e}"));
                continue;
            }
        };
        let got = census(&types);
        let want = parenthesization_faces(k);
        if got != want {
            bad.push(format!("k={k}: census {got:?} vs oracle {want:?}"));
        }
        for t in types.iter().filter(|t| t.dim().ok() == Some(1)) {
            let weighted = t.output_weight() == Weight::Grey;
            match boundary_strata_with_ops(t) {
                Ok(strata) => {
                    for (s, op) in strata {
                        checked += 1;
                        if !allowed_boundary_degeneration(op, weighted) || s.dim().ok() != Some(0) || !leq(&s, t) {
                            bad.push(format!("{} -> {} via {op:?}", t.encoding(), s.encoding()));
                        }
                    }
                }
                Err(e) => bad.push(format!("{}: {e}", t.encoding())),
            }
        }
    }
    result(2, bad, format!("associahedron censuses k=2..4 match; {checked} boundary faces of 1-dimensional types conform"))
}

fn supported_potentials(n: usize, eps: &Rational) -> Vec<PotentialFunction> {
    let mut v = vec![PotentialFunction::clifford_torus(n).expect("n ≥ 1")];
    v.push(PotentialFunction::exceptional(n, eps.clone()).expect("n ≥ 1"));
    v
}

fn kind_name(k: PotentialKind) -> &'static str {
    match k {
        PotentialKind::CliffordTorusPn => "projective",
        PotentialKind::ExceptionalBlowup => "exceptional",
    }
}

fn c3_ainfty(cfg: &VerifyConfig) -> CriterionResult {
    let mut bad = Vec::new();
    let mut count = 0;
    for n in 1..=4 {
        for w in supported_potentials(n, &cfg.exceptional_eps) {
            if let Some(p) = critical_points(&w).first() {
                count += 1;
                match hessian_clifford(&w, &p.y, cfg.cutoff.clone() + int(1)) {
                    Ok(a) => {
                        let v = check_ainfty(&a);
                        if !v.is_empty() {
                            bad.push(format!("{} n={n}: {} violations", kind_name(w.kind), v.len()));
                        }
                    }
                    Err(e) => bad.push(format!("{} n={n}: {e}", kind_name(w.kind))),
                }
            }
        }
    }
    result(3, bad, format!("{count} Hessian Clifford algebras (ranks 2..16) pass with zero violations"))
}

fn c4_critical(cfg: &VerifyConfig) -> CriterionResult {
    let mut bad = Vec::new();
    for n in 1..=6 {
        for w in supported_potentials(n, &cfg.exceptional_eps) {
            let name = kind_name(w.kind);
            let pts = critical_points(&w);
            let want = match w.kind {
                PotentialKind::CliffordTorusPn => n + 1,
                PotentialKind::ExceptionalBlowup => n - 1,
            };
            if pts.len() != want {
                bad.push(format!("{name} n={n}: {} points", pts.len()));
            }
            for p in &pts {
                let roots = p.y.iter().all(|y| y.root_exponent().is_some());
                if !roots || !w.is_critical(&p.y).unwrap_or(false) {
                    bad.push(format!("{name} n={n} k={}: not an exact critical root-of-unity tuple", p.k));
                    continue;
                }
                match hessian(&w, &p.y) {
                    Ok(h) if hessian_has_clifford_shape(&h) => {}
                    Ok(_) => bad.push(format!("{name} n={n} k={}: Hessian is not unit·q-power·(I+J) with det (n+1)·unit", p.k)),
                    Err(e) => bad.push(format!("{name} n={n} k={}: {e}", p.k)),
                }
            }
        }
    }
    result(4, bad, "counts n+1 and n-1, exact roots, vanishing gradients, Hessians unit·(I+J)".into())
}

fn c5_divisor(cfg: &VerifyConfig) -> CriterionResult {
    let mut bad = Vec::new();
    let mut count = 0;
    for n in 1..=4 {
        for w in supported_potentials(n, &cfg.exceptional_eps) {
            for p in critical_points(&w) {
                count += 1;
                if !divisor_equation_check(&w, &p.y, &cfg.cutoff).unwrap_or(false) {
                    bad.push(format!("{} n={n} k={}", kind_name(w.kind), p.k));
                }
            }
        }
    }
    result(5, bad, format!("{count} critical points, all degree-one pairs equal below cutoff {}", format_rational(&cfg.cutoff)))
}

fn c6_hochschild(cfg: &VerifyConfig) -> CriterionResult {
    let mut bad = Vec::new();
    let mut seen = Vec::new();
    for n in 1..=3 {
        for w in supported_potentials(n, &cfg.exceptional_eps) {
            let Some(p) = critical_points(&w).into_iter().next() else { continue };
            let name = kind_name(w.kind);
            let a = match hessian_clifford(&w, &p.y, cfg.cutoff.clone() + int(1)) {
                Ok(a) => a,
                Err(e) => {
                    bad.push(format!("{name} n={n}: {e}"));
                    continue;
                }
            };
            match hochschild_homology_dims(&a, cfg.hh_length) {
                Ok(r) => {
                    if r.current.total() != 1 || !r.stable {
                        bad.push(format!("{name} n={n}: dims {:?} at L={} (previous {:?}), stable={}", r.current.dims, r.current.length, r.previous.dims, r.stable));
                    }
                    seen.push(format!("{name} n={n}"));
                }
                Err(e) => bad.push(format!("{name} n={n}: {e}")),
            }
        }
    }
    result(6, bad, format!("total dimension 1, stable at L={} and L={} for {}", cfg.hh_length - 1, cfg.hh_length, seen.join(", ")))
}

fn c7_fft(_cfg: &VerifyConfig) -> CriterionResult {
    let mut bad = Vec::new();
    for n in 1..=6 {
        let order = n as u32 + 1;
        let m = match oc_matrix(n, OcKind::Projective, None) {
            Ok(m) => m,
            Err(e) => {
                bad.push(format!("n={n}: {e}"));
                continue;
            }
        };
        let zeta = CyclotomicNumber::root_of_unity(order, 1);
        let qstep = NovikovElement::q_pow(rat(1, n as i64 + 1));
        for b in 0..=n {
            for a in 0..=n {
                let want = qstep.pow(b as u32).scale(&zeta.pow((a * b) as i64).expect("root"));
                if m.entries[b][a] != want {
                    bad.push(format!("n={n} entry ({b},{a})"));
                }
            }
        }
        let g = m.character_gram();
        for k in 0..=n {
            for j in 0..=n {
                // Σ_b ζ^{(k−j)b}
                let direct = (0..=n).fold(CyclotomicNumber::zero(order), |acc, b| &acc + &zeta.pow(((k as i64 - j as i64) * b as i64).rem_euclid(order as i64)).expect("root"));
                let zero = direct.is_zero();
                if (k != j) != zero || (k != j && !g[k][j].is_zero()) {
                    bad.push(format!("n={n} columns {k},{j} not orthogonal at q=1"));
                }
            }
        }
    }
    result(7, bad, "entries q^{b/(n+1)}ζ^{ab} for n=1..6; character sums vanish off the diagonal".into())
}

fn c8_surjectivity(cfg: &VerifyConfig) -> CriterionResult {
    let mut bad = Vec::new();
    for n in 1..=6 {
        let m = oc_matrix(n, OcKind::Projective, None).expect("n ≥ 1");
        match surjectivity_test(&m.entries, &cfg.cutoff) {
            Ok(r) if r.verdict == Surjectivity::Surjective => {}
            Ok(r) => bad.push(format!("projective n={n}: {:?}, val det = {}", r.verdict, r.det.val_q())),
            Err(e) => bad.push(format!("projective n={n}: {e}")),
        }
    }
    for n in 2..=6 {
        let m = oc_matrix(n, OcKind::Exceptional, Some(cfg.exceptional_eps.clone())).expect("n ≥ 2");
        match surjectivity_test(&m.entries, &cfg.cutoff) {
            Ok(r) if r.verdict == Surjectivity::Surjective => {}
            Ok(r) => bad.push(format!("exceptional n={n}: {:?}, val det = {}", r.verdict, r.det.val_q())),
            Err(e) => bad.push(format!("exceptional n={n}: {e}")),
        }
    }
    result(8, bad, format!("det_<E nonzero at E = {} for both kinds", format_rational(&cfg.cutoff)))
}

fn c9_ring_hom(_cfg: &VerifyConfig) -> CriterionResult {
    let mut bad = Vec::new();
    for n in 1..=4 {
        for k in 0..=n {
            if !ring_hom_check(n, k).unwrap_or(false) {
                bad.push(format!("n={n} k={k}"));
            }
        }
    }
    result(9, bad, "(q^{1/(n+1)} y)^{n+1} = q for all k, n=1..4".into())
}

fn eps_grid() -> [Rational; 3] {
    [rat(1, 10), rat(1, 3), rat(9, 10)]
}

fn c10_orthogonality(cfg: &VerifyConfig) -> CriterionResult {
    let mut bad = Vec::new();
    for n in 1..=4 {
        match frobenius_orthogonality(n) {
            Ok(g) if is_orthogonal_gram(&g) => {}
            Ok(_) => bad.push(format!("P^{n}: Gram matrix not diagonal")),
            Err(e) => bad.push(format!("P^{n}: {e}")),
        }
    }
    for n in 2..=4 {
        for eps in eps_grid() {
            let model = BlowupModel::projective(n, eps.clone()).expect("n ≥ 2");
            match blowup_generation(&model, &cfg.cutoff) {
                Ok(r) if r.generation.orthogonal => {}
                Ok(_) => bad.push(format!("Bl P^{n}, eps={}: cross pairing nonzero", format_rational(&eps))),
                Err(e) => bad.push(format!("Bl P^{n}: {e}")),
            }
        }
    }
    result(10, bad, "Gram matrices diagonal for n=1..4; old x exceptional pairings vanish".into())
}

fn c11_blowup(cfg: &VerifyConfig) -> CriterionResult {
    let mut bad = Vec::new();
    for n in 2..=5 {
        for eps in eps_grid() {
            let tag = format!("n={n} eps={}", format_rational(&eps));
            let model = BlowupModel::projective(n, eps.clone()).expect("n ≥ 2");
            match blowup_generation(&model, &cfg.cutoff) {
                Ok(r) => {
                    let dim = r.split.as_ref().map(|s| s.total_dim);
                    if dim != Some((n + 1) + (n - 1)) {
                        bad.push(format!("{tag}: dim {dim:?}"));
                    }
                    if r.generation.verdict != Generation::Generates {
                        bad.push(format!("{tag}: {:?}", r.generation.verdict));
                    }
                }
                Err(e) => bad.push(format!("{tag}: {e}")),
            }
            match bulk_shift_perturbation(n, &eps) {
                Ok(r) if r.min_extra_valuation >= int(1) - &eps => {}
                Ok(r) => bad.push(format!("{tag}: extra valuation {}", format_rational(&r.min_extra_valuation))),
                Err(e) => bad.push(format!("{tag}: {e}")),
            }
        }
    }
    result(11, bad, "dim (n+1)+(n-1), generates, extra valuation >= 1-eps on n=2..5 x {1/10,1/3,9/10}".into())
}

fn c12_index_area(cfg: &VerifyConfig) -> CriterionResult {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x5eed);
    let mut bad = Vec::new();
    for i in 0..100 {
        let n = rng.gen_range(2..=6usize);
        let eps = rat(rng.gen_range(1..=9), 10);
        // moment coordinates with Σx > ε
        let x: Vec<Rational> = (0..n).map(|_| rat(rng.gen_range(1..=12), rng.gen_range(1..=6)) + &eps).collect();
        let model = LocalModel::new(eps.clone(), x).expect("valid fiber");
        let d: Vec<u32> = (0..n).map(|_| rng.gen_range(0..=3)).collect();
        let de = rng.gen_range(0..=3u32);
        let (up, down) = (model.upstairs(&d, de).expect("class"), model.downstairs(&d, de).expect("class"));
        let idx = index_correspondence(down.index(), n, de);
        let area = area_correspondence(&down.area(), &eps, de);
        if idx.as_ref().ok() != Some(&up.index()) || area.area != up.area() {
            bad.push(format!("sample {i}: degrees {d:?}, d_E = {de}"));
        }
    }
    let mut obstructions = 0;
    for n in 2..=6 {
        for k in 0..=10 {
            for m in 1..=5 {
                obstructions += 1;
                if !exceptional_sphere_obstruction(n, k, m).unwrap_or(false) {
                    bad.push(format!("no obstruction at n={n} k={k} m={m}"));
                }
            }
        }
    }
    result(12, bad, format!("100 sampled classes agree; {obstructions} sphere configurations obstructed"))
}

/// Criteria 1..=12 in order.
pub fn run_core(cfg: &VerifyConfig) -> Vec<CriterionResult> {
    (1..=12).map(|i| run_criterion(i, cfg)).collect()
}

pub fn run_criterion(id: u8, cfg: &VerifyConfig) -> CriterionResult {
    match id {
        1 => c1_novikov(cfg),
        2 => c2_trees(cfg),
        3 => c3_ainfty(cfg),
        4 => c4_critical(cfg),
        5 => c5_divisor(cfg),
        6 => c6_hochschild(cfg),
        7 => c7_fft(cfg),
        8 => c8_surjectivity(cfg),
        9 => c9_ring_hom(cfg),
        10 => c10_orthogonality(cfg),
        11 => c11_blowup(cfg),
        12 => c12_index_area(cfg),
        13 => c13_determinism(cfg),
        _ => CriterionResult { id, name: "unknown".into(), passed: false, detail: format!("no criterion {id}") },
    }
}

/// Two independent runs of 1..=12 serialize identically.
fn c13_determinism(cfg: &VerifyConfig) -> CriterionResult {
    let a = serde_json::to_string(&run_core(cfg)).unwrap_or_default();
    let b = serde_json::to_string(&run_core(cfg)).unwrap_or_default();
    let bad = if a == b { Vec::new() } else { vec!["two runs differ".to_string()] };
    result(13, bad, format!("two runs byte-identical ({} bytes)", a.len()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub config: VerifyConfig,
    /// cyclotomic orders in use
    pub cyclotomic_orders: Vec<String>,
    pub criteria: Vec<CriterionResult>,
    pub passed: usize,
    pub total: usize,
}

pub fn verify_all(cfg: &VerifyConfig) -> VerifyReport {
    let mut criteria = run_core(cfg);
    criteria.push(c13_determinism(cfg));
    let passed = criteria.iter().filter(|c| c.passed).count();
    VerifyReport {
        config: cfg.clone(),
        cyclotomic_orders: vec![
            "projective: zeta of order n+1".into(),
            "exceptional critical points: order 2(n-1)".into(),
            "exceptional OC: order n-1".into(),
        ],
        total: criteria.len(),
        passed,
        criteria,
    }
}

impl VerifyReport {
    pub fn to_markdown(&self) -> String {
        let mut s = format!(
            "cutoff {}, seed {}, hh length {}, exceptional eps {}\n\ncyclotomic orders: {}\n\n| # | criterion | result | detail |\n|---|---|---|---|\n",
            format_rational(&self.config.cutoff),
            self.config.seed,
            self.config.hh_length,
            format_rational(&self.config.exceptional_eps),
            self.cyclotomic_orders.join("; ")
        );
        for c in &self.criteria {
            s.push_str(&format!("| {} | {} | {} | {} |\n", c.id, c.name, if c.passed { "PASS" } else { "FAIL" }, c.detail.replace('|', "/")));
        }
        s.push_str(&format!("\n{}/{} passed\n", self.passed, self.total));
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parenthesization_oracle() {
        assert_eq!(parenthesization_faces(2), [(0, 1)].into());
        assert_eq!(parenthesization_faces(3), [(0, 2), (1, 1)].into());
        assert_eq!(parenthesization_faces(4), [(0, 5), (1, 5), (2, 1)].into());
        assert_eq!(parenthesization_faces(5), [(0, 14), (1, 21), (2, 9), (3, 1)].into());
    }

    #[test]
    fn boundary_operation_list() {
        assert!(allowed_boundary_degeneration(Degeneration::WeightToZero, false));
        assert!(!allowed_boundary_degeneration(Degeneration::WeightToZero, true));
        assert!(!allowed_boundary_degeneration(Degeneration::SphereBubble, false));
    }
}
