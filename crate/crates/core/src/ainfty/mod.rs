//! Finite-rank curved A∞ categories over truncated Novikov scalars.

mod clifford;
pub mod json;

use std::collections::BTreeMap;
use std::fmt;

pub use clifford::{clifford_algebra, clifford_product, subset_name};
pub use json::AlgebraJson;

use crate::error::{Error, Result};
use crate::linalg::{add_entry, axpy, SparseVec};
use crate::novikov::{CyclotomicNumber, NovikovElement, Valuation};
use crate::rational::{factorial, Rational};

/// Default maximal arity of stored composition maps.
pub const DEFAULT_MAX_ARITY: usize = 6;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    /// degree in Z_N
    pub degree: u32,
    pub source: usize,
    pub target: usize,
}

/// Sparse composition maps `m_d` keyed by input basis tuples.
///
/// Inputs compose left to right: `x_i ∈ Hom(φ_{i−1}, φ_i)` and `m_d` lands in `Hom(φ_0, φ_d)`.
#[derive(Clone, Debug)]
pub struct AInftyAlgebra {
    grading: u32,
    cutoff: Rational,
    max_arity: usize,
    objects: Vec<String>,
    generators: Vec<Generator>,
    tensors: BTreeMap<Vec<usize>, SparseVec>,
    curvature: Vec<SparseVec>,
    units: Vec<Option<usize>>,
}

fn parity(d: u32) -> u32 {
    d % 2
}

fn signed(x: &NovikovElement, odd: bool) -> NovikovElement {
    if odd {
        -x
    } else {
        x.clone()
    }
}

impl AInftyAlgebra {
    pub fn new(grading: u32, cutoff: Rational) -> Result<Self> {
        if grading == 0 || grading % 2 != 0 {
            return Err(Error::MalformedAlgebra(format!("grading group Z_{grading} must have even order")));
        }
        Ok(AInftyAlgebra {
            grading,
            cutoff,
            max_arity: DEFAULT_MAX_ARITY,
            objects: Vec::new(),
            generators: Vec::new(),
            tensors: BTreeMap::new(),
            curvature: Vec::new(),
            units: Vec::new(),
        })
    }

    pub fn with_max_arity(mut self, d: usize) -> Self {
        self.max_arity = d;
        self
    }

    pub fn add_object(&mut self, name: &str) -> Result<usize> {
        if self.objects.iter().any(|o| o == name) {
            return Err(Error::MalformedAlgebra(format!("object {name} declared twice")));
        }
        self.objects.push(name.to_string());
        self.curvature.push(SparseVec::new());
        self.units.push(None);
        Ok(self.objects.len() - 1)
    }

    pub fn add_generator(&mut self, name: &str, degree: u32, source: usize, target: usize) -> Result<usize> {
        if source >= self.objects.len() || target >= self.objects.len() {
            return Err(Error::MalformedAlgebra(format!("generator {name} between unknown objects")));
        }
        if self.generators.iter().any(|g| g.name == name) {
            return Err(Error::MalformedAlgebra(format!("generator {name} declared twice")));
        }
        self.generators.push(Generator { name: name.to_string(), degree: degree % self.grading, source, target });
        Ok(self.generators.len() - 1)
    }

    pub fn set_unit(&mut self, object: usize, gen: usize) -> Result<()> {
        let g = self.generator(gen)?;
        if g.source != object || g.target != object || g.degree != 0 {
            return Err(Error::MalformedAlgebra(format!("{} cannot be the unit of {}", g.name, self.objects[object])));
        }
        self.units[object] = Some(gen);
        Ok(())
    }

    fn generator(&self, i: usize) -> Result<&Generator> {
        self.generators.get(i).ok_or_else(|| Error::MalformedAlgebra(format!("generator index {i} out of range")))
    }

    /// Checks composability and that every output has degree Σ|x_i| + 2 − d.
    fn check_entry(&self, inputs: &[usize], output: &SparseVec) -> Result<()> {
        if inputs.is_empty() {
            return Err(Error::MalformedAlgebra("use set_curvature for m_0".into()));
        }
        if inputs.len() > self.max_arity {
            return Err(Error::MalformedAlgebra(format!("arity {} exceeds {}", inputs.len(), self.max_arity)));
        }
        for w in inputs.windows(2) {
            if self.generator(w[0])?.target != self.generator(w[1])?.source {
                return Err(Error::MalformedAlgebra(format!("inputs {} not composable", self.names(inputs).join(","))));
            }
        }
        let src = self.generator(inputs[0])?.source;
        let tgt = self.generator(*inputs.last().unwrap())?.target;
        let n = self.grading as i64;
        let want = (inputs.iter().map(|i| self.generators[*i].degree as i64).sum::<i64>() + 2 - inputs.len() as i64).rem_euclid(n) as u32;
        for g in output.keys() {
            let g = self.generator(*g)?;
            if g.source != src || g.target != tgt {
                return Err(Error::MalformedAlgebra(format!("output {} in the wrong morphism space", g.name)));
            }
            if g.degree != want {
                return Err(Error::MalformedAlgebra(format!("m_{} on {} has output {} of the wrong degree", inputs.len(), self.names(inputs).join(","), g.name)));
            }
        }
        Ok(())
    }

    pub fn set_tensor(&mut self, inputs: Vec<usize>, output: SparseVec) -> Result<()> {
        self.check_entry(&inputs, &output)?;
        let output: SparseVec = output.into_iter().filter(|(_, x)| !x.is_zero()).collect();
        if output.is_empty() {
            self.tensors.remove(&inputs);
        } else {
            self.tensors.insert(inputs, output);
        }
        Ok(())
    }

    pub fn add_to_tensor(&mut self, inputs: Vec<usize>, gen: usize, coeff: &NovikovElement) -> Result<()> {
        let mut out = self.tensors.get(&inputs).cloned().unwrap_or_default();
        add_entry(&mut out, gen, coeff);
        self.set_tensor(inputs, out)
    }

    pub fn set_curvature(&mut self, object: usize, value: SparseVec) -> Result<()> {
        if object >= self.objects.len() {
            return Err(Error::MalformedAlgebra(format!("object index {object} out of range")));
        }
        for g in value.keys() {
            let g = self.generator(*g)?;
            if g.source != object || g.target != object || g.degree != 2 % self.grading {
                return Err(Error::MalformedAlgebra(format!("curvature term {} must be an endomorphism of degree 2", g.name)));
            }
        }
        self.curvature[object] = value.into_iter().filter(|(_, x)| !x.is_zero()).collect();
        Ok(())
    }

    pub fn grading(&self) -> u32 {
        self.grading
    }

    pub fn cutoff(&self) -> &Rational {
        &self.cutoff
    }

    pub fn with_cutoff(mut self, cutoff: Rational) -> Self {
        self.cutoff = cutoff;
        self
    }

    pub fn max_arity(&self) -> usize {
        self.max_arity
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn degree(&self, g: usize) -> u32 {
        self.generators[g].degree
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    pub fn names(&self, gs: &[usize]) -> Vec<String> {
        gs.iter().map(|g| self.generators[*g].name.clone()).collect()
    }

    pub fn tensors(&self) -> &BTreeMap<Vec<usize>, SparseVec> {
        &self.tensors
    }

    /// `m_d` on a basis tuple (zero if absent).
    pub fn m(&self, inputs: &[usize]) -> SparseVec {
        self.tensors.get(inputs).cloned().unwrap_or_default()
    }

    pub fn curvature(&self, object: usize) -> &SparseVec {
        &self.curvature[object]
    }

    pub fn unit(&self, object: usize) -> Option<usize> {
        self.units[object]
    }

    pub fn is_unit(&self, g: usize) -> bool {
        self.units.contains(&Some(g))
    }

    pub fn is_flat(&self) -> bool {
        self.curvature.iter().all(|c| c.values().all(|x| x.with_cutoff(Valuation::Finite(self.cutoff.clone())).is_zero()))
    }

    /// Multilinear extension of `m_d`.
    pub fn apply(&self, inputs: &[SparseVec]) -> SparseVec {
        let mut out = SparseVec::new();
        let mut stack: Vec<(Vec<usize>, NovikovElement)> = vec![(Vec::new(), NovikovElement::one(1))];
        for v in inputs {
            let mut next = Vec::new();
            for (key, c) in &stack {
                for (g, x) in v {
                    let mut k = key.clone();
                    k.push(*g);
                    next.push((k, c * x));
                }
            }
            stack = next;
        }
        for (key, c) in stack {
            if let Some(v) = self.tensors.get(&key) {
                axpy(&mut out, &c, v);
            }
        }
        out
    }

    /// Disjoint union of categories; objects are renamed `prefix/name` when prefixes are given.
    pub fn disjoint_union(parts: &[(&str, &AInftyAlgebra)]) -> Result<AInftyAlgebra> {
        let first = parts.first().ok_or_else(|| Error::MalformedAlgebra("empty union".into()))?.1;
        let cutoff = parts.iter().map(|(_, a)| a.cutoff.clone()).min().unwrap();
        let mut out = AInftyAlgebra::new(first.grading, cutoff)?.with_max_arity(parts.iter().map(|(_, a)| a.max_arity).max().unwrap());
        for (prefix, a) in parts {
            if a.grading != first.grading {
                return Err(Error::MalformedAlgebra("gradings differ".into()));
            }
            let rename = |s: &str| if prefix.is_empty() { s.to_string() } else { format!("{prefix}/{s}") };
            let obj0 = out.objects.len();
            for o in &a.objects {
                out.add_object(&rename(o))?;
            }
            let gen0 = out.generators.len();
            for g in &a.generators {
                out.add_generator(&rename(&g.name), g.degree, g.source + obj0, g.target + obj0)?;
            }
            let shift = |v: &SparseVec| -> SparseVec { v.iter().map(|(g, x)| (g + gen0, x.clone())).collect() };
            for (k, v) in &a.tensors {
                out.tensors.insert(k.iter().map(|g| g + gen0).collect(), shift(v));
            }
            for (o, c) in a.curvature.iter().enumerate() {
                out.curvature[o + obj0] = shift(c);
            }
            for (o, u) in a.units.iter().enumerate() {
                out.units[o + obj0] = u.map(|g| g + gen0);
            }
        }
        Ok(out)
    }

    /// Full subcategory on the given objects.
    pub fn restrict(&self, objects: &[usize]) -> Result<AInftyAlgebra> {
        let mut out = AInftyAlgebra::new(self.grading, self.cutoff.clone())?.with_max_arity(self.max_arity);
        let mut omap = BTreeMap::new();
        for &o in objects {
            omap.insert(o, out.add_object(&self.objects[o])?);
        }
        let mut gmap = BTreeMap::new();
        for (i, g) in self.generators.iter().enumerate() {
            if let (Some(s), Some(t)) = (omap.get(&g.source), omap.get(&g.target)) {
                gmap.insert(i, out.add_generator(&g.name, g.degree, *s, *t)?);
            }
        }
        let map_vec = |v: &SparseVec| -> Option<SparseVec> { v.iter().map(|(g, x)| gmap.get(g).map(|h| (*h, x.clone()))).collect() };
        for (k, v) in &self.tensors {
            let key: Option<Vec<usize>> = k.iter().map(|g| gmap.get(g).copied()).collect();
            if let (Some(key), Some(val)) = (key, map_vec(v)) {
                out.tensors.insert(key, val);
            }
        }
        for (&o, &no) in &omap {
            out.curvature[no] = map_vec(&self.curvature[o]).unwrap_or_default();
            out.units[no] = self.units[o].and_then(|g| gmap.get(&g).copied());
        }
        Ok(out)
    }

    /// Subtracts `w·1_φ` from the curvature of each listed object.
    pub fn shift_curvature(&self, w: &NovikovElement, objects: &[usize]) -> Result<AInftyAlgebra> {
        let mut out = self.clone();
        for &o in objects {
            let u = self.units[o].ok_or_else(|| Error::MalformedAlgebra(format!("object {} has no unit", self.objects[o])))?;
            add_entry(&mut out.curvature[o], u, &-w);
        }
        Ok(out)
    }

    fn cut(&self) -> Valuation {
        Valuation::Finite(self.cutoff.clone())
    }

    fn truncate(&self, v: &SparseVec) -> SparseVec {
        let cut = self.cut();
        v.iter().map(|(g, x)| (*g, x.with_cutoff(cut.clone()))).filter(|(_, x)| !x.is_zero()).collect()
    }

    fn start_object(&self, key: &[usize], fallback: usize) -> usize {
        key.first().map_or(fallback, |g| self.generators[*g].source)
    }
}

/// What a reported violation concerns.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    Relation,
    Unit,
    Curvature,
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub object: String,
    pub inputs: Vec<String>,
    pub value: BTreeMap<String, NovikovElement>,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vals: Vec<String> = self.value.iter().map(|(g, x)| format!("{x}·{g}")).collect();
        write!(f, "{:?} at {}({}) = {}", self.kind, self.object, self.inputs.join(", "), vals.join(" + "))
    }
}

/// Σ (−1)^{✠_1^{p}} m(x_1..x_p, m(x_{p+1}..), ..) over composable tuples, keyed by (start object, tuple).
pub fn relation_terms(a: &AInftyAlgebra) -> BTreeMap<(usize, Vec<usize>), SparseVec> {
    let mut index: BTreeMap<usize, Vec<(&Vec<usize>, usize)>> = BTreeMap::new();
    for k in a.tensors.keys() {
        for (p, g) in k.iter().enumerate() {
            index.entry(*g).or_default().push((k, p));
        }
    }
    let mut inner: Vec<(usize, &[usize], &SparseVec)> = a.tensors.iter().map(|(k, v)| (a.start_object(k, 0), k.as_slice(), v)).collect();
    for (o, c) in a.curvature.iter().enumerate() {
        if !c.is_empty() {
            inner.push((o, &[], c));
        }
    }
    let mut out: BTreeMap<(usize, Vec<usize>), SparseVec> = BTreeMap::new();
    for (obj, ikey, ival) in inner {
        for (g, c) in ival {
            let Some(outers) = index.get(g) else { continue };
            for (okey, p) in outers {
                let len = okey.len() - 1 + ikey.len();
                if len > a.max_arity {
                    continue;
                }
                let mut tuple = Vec::with_capacity(len);
                tuple.extend_from_slice(&okey[..*p]);
                tuple.extend_from_slice(ikey);
                tuple.extend_from_slice(&okey[p + 1..]);
                let sign: u32 = okey[..*p].iter().map(|x| a.generators[*x].degree + 1).sum();
                let coeff = signed(c, parity(sign) == 1);
                let start = a.start_object(&tuple, obj);
                axpy(out.entry((start, tuple)).or_default(), &coeff, &a.tensors[*okey]);
            }
        }
    }
    out
}

fn to_named(a: &AInftyAlgebra, v: &SparseVec) -> BTreeMap<String, NovikovElement> {
    v.iter().map(|(g, x)| (a.generators[*g].name.clone(), x.clone())).collect()
}

fn unit_violations(a: &AInftyAlgebra) -> Vec<Violation> {
    let mut out = Vec::new();
    let one = NovikovElement::one(1);
    let mut push = |kind, obj: usize, inputs: &[usize], v: &SparseVec| {
        let v = a.truncate(v);
        if !v.is_empty() {
            out.push(Violation { kind, object: a.objects[obj].clone(), inputs: a.names(inputs), value: to_named(a, &v) });
        }
    };
    for (gi, g) in a.generators.iter().enumerate() {
        if let Some(u) = a.units[g.source] {
            let mut diff = a.m(&[u, gi]);
            add_entry(&mut diff, gi, &-&one);
            push(ViolationKind::Unit, g.source, &[u, gi], &diff);
        }
        if let Some(u) = a.units[g.target] {
            let mut diff = a.m(&[gi, u]);
            add_entry(&mut diff, gi, &-&signed(&one, parity(g.degree) == 1));
            push(ViolationKind::Unit, g.source, &[gi, u], &diff);
        }
    }
    for (k, v) in &a.tensors {
        if k.len() != 2 && k.iter().any(|g| a.is_unit(*g)) {
            push(ViolationKind::Unit, a.start_object(k, 0), k, v);
        }
    }
    for (o, c) in a.curvature.iter().enumerate() {
        if c.values().any(|x| !x.is_zero() && x.val_q() <= Valuation::from_int(0)) {
            push(ViolationKind::Curvature, o, &[], c);
        }
    }
    out
}

/// A∞ relations up to the maximal arity, strict units and positivity of m_0, all below the cutoff.
pub fn check_ainfty(a: &AInftyAlgebra) -> Vec<Violation> {
    let mut out: Vec<Violation> = relation_terms(a)
        .into_iter()
        .filter_map(|((obj, k), v)| {
            let v = a.truncate(&v);
            (!v.is_empty()).then(|| Violation { kind: ViolationKind::Relation, object: a.objects[obj].clone(), inputs: a.names(&k), value: to_named(a, &v) })
        })
        .collect();
    out.extend(unit_violations(a));
    out
}

/// Inserts the cochains `bs[φ]` (odd endomorphisms of φ) in all possible slots.
pub fn deform(a: &AInftyAlgebra, bs: &BTreeMap<usize, SparseVec>) -> Result<AInftyAlgebra> {
    let zero = Valuation::from_int(0);
    let mut nonpositive = BTreeMap::new();
    for (o, b) in bs {
        if *o >= a.objects.len() {
            return Err(Error::MalformedAlgebra(format!("object index {o} out of range")));
        }
        for (g, x) in b {
            let gen = a.generator(*g)?;
            if gen.source != *o || gen.target != *o || parity(gen.degree) != 1 {
                return Err(Error::InvalidInput(format!("{} is not an odd endomorphism of {}", gen.name, a.objects[*o])));
            }
            if x.val_q() <= zero {
                nonpositive.insert(*o, ());
            }
        }
    }
    let in_b = |g: usize| -> Option<&NovikovElement> {
        let o = a.generators[g].source;
        if a.generators[g].target != o {
            return None;
        }
        bs.get(&o).and_then(|b| b.get(&g))
    };
    let cut = a.cut();
    let mut tensors: BTreeMap<Vec<usize>, SparseVec> = BTreeMap::new();
    let mut curvature = a.curvature.clone();
    for (k, v) in &a.tensors {
        let slots: Vec<usize> = (0..k.len()).filter(|t| in_b(k[*t]).is_some()).collect();
        for mask in 0u32..(1 << slots.len()) {
            let mut coeff = NovikovElement::one(1);
            let mut rest = Vec::with_capacity(k.len());
            for (t, g) in k.iter().enumerate() {
                match slots.iter().position(|s| *s == t) {
                    Some(i) if mask & (1 << i) != 0 => {
                        coeff = (&coeff * in_b(*g).unwrap()).with_cutoff(cut.clone());
                        if nonpositive.contains_key(&a.generators[*g].source) && k.len() == a.max_arity {
                            return Err(Error::NonConvergentDeformation(format!(
                                "insertions of a cochain of non-positive valuation into m_{} do not decay",
                                a.max_arity
                            )));
                        }
                    }
                    _ => rest.push(*g),
                }
            }
            if coeff.is_zero() {
                continue;
            }
            if rest.is_empty() {
                let o = a.start_object(k, 0);
                axpy(&mut curvature[o], &coeff, v);
            } else {
                axpy(tensors.entry(rest).or_default(), &coeff, v);
            }
        }
    }
    let mut out = a.clone();
    out.tensors = tensors.into_iter().map(|(k, v)| (k, a.truncate(&v))).filter(|(_, v)| !v.is_empty()).collect();
    out.curvature = curvature.iter().map(|c| a.truncate(c)).collect();
    Ok(out)
}

/// m(b) = w·1 + residual at one object.
pub fn potential(a: &AInftyAlgebra, object: usize, b: &SparseVec) -> Result<(NovikovElement, SparseVec)> {
    let d = deform(a, &BTreeMap::from([(object, b.clone())]))?;
    let mut m0 = d.curvature[object].clone();
    let w = match a.units[object] {
        Some(u) => m0.remove(&u).unwrap_or_else(|| NovikovElement::zero(1)),
        None => NovikovElement::zero(1),
    };
    Ok((w, m0))
}

/// An object together with a weakly bounding cochain and its potential value.
#[derive(Clone, Debug)]
pub struct Brane {
    pub name: String,
    /// endomorphism algebra, a single object
    pub algebra: AInftyAlgebra,
    pub local_system: Vec<CyclotomicNumber>,
    pub b: SparseVec,
    pub w: NovikovElement,
}

impl Brane {
    /// Computes `w` and insists that the residual vanishes below the cutoff.
    pub fn new(name: &str, algebra: AInftyAlgebra, local_system: Vec<CyclotomicNumber>, b: SparseVec) -> Result<Self> {
        if algebra.objects.len() != 1 {
            return Err(Error::MalformedAlgebra("a brane carries a single-object algebra".into()));
        }
        let (w, residual) = potential(&algebra, 0, &b)?;
        let residual = algebra.truncate(&residual);
        if !residual.is_empty() {
            return Err(Error::NotCritical(format!("{name}: m(b) is not a multiple of the unit")));
        }
        Ok(Brane { name: name.to_string(), algebra, local_system, b, w })
    }
}

#[derive(Clone, Debug)]
pub struct SpectralGroup {
    pub w: NovikovElement,
    /// indices into the brane list
    pub members: Vec<usize>,
    /// deformed, with w·1 removed from the curvature
    pub category: AInftyAlgebra,
}

/// Groups branes by potential value; each group becomes a flat category.
pub fn spectral_decompose(branes: &[Brane]) -> Result<Vec<SpectralGroup>> {
    let mut groups: Vec<(NovikovElement, Vec<usize>)> = Vec::new();
    for (i, br) in branes.iter().enumerate() {
        match groups.iter_mut().find(|(w, _)| *w == br.w) {
            Some((_, m)) => m.push(i),
            None => groups.push((br.w.clone(), vec![i])),
        }
    }
    let mut out = Vec::new();
    for (w, members) in groups {
        let parts: Vec<(String, AInftyAlgebra)> = members
            .iter()
            .map(|&i| {
                let br = &branes[i];
                deform(&br.algebra, &BTreeMap::from([(0, br.b.clone())])).map(|d| (br.name.clone(), d))
            })
            .collect::<Result<_>>()?;
        let refs: Vec<(&str, &AInftyAlgebra)> = parts.iter().map(|(n, a)| (n.as_str(), a)).collect();
        let cat = AInftyAlgebra::disjoint_union(&refs)?;
        let objs: Vec<usize> = (0..cat.objects.len()).collect();
        let cat = cat.shift_curvature(&w, &objs)?;
        out.push(SpectralGroup { w, members, category: cat });
    }
    out.sort_by_key(|g| serde_json::to_string(&g.w).unwrap_or_default());
    Ok(out)
}

/// A linear combination of bar tensors x_− ⊗ x_1 ⊗ … ⊗ x_k ⊗ x_+.
pub type BarElement = Vec<(NovikovElement, Vec<usize>)>;

fn diamond(a: &AInftyAlgebra, t: &[usize]) -> u32 {
    let k = t.len();
    a.degree(t[0]) + t[1..k - 1].iter().map(|g| a.degree(*g) + 1).sum::<u32>()
}

/// (−1)^{|x_−| + Σ‖x_j‖} m_{k+2}(x_−, x_1, …, x_k, x_+).
pub fn collapse_mu(a: &AInftyAlgebra, x: &BarElement) -> Result<SparseVec> {
    let mut out = SparseVec::new();
    for (c, t) in x {
        if t.len() < 2 {
            return Err(Error::InvalidInput("a bar tensor needs x_− and x_+".into()));
        }
        let coeff = signed(c, parity(diamond(a, t)) == 1);
        axpy(&mut out, &coeff, &a.m(t));
    }
    Ok(out)
}

/// Bar differential: all contractions that keep x_− and x_+ apart, signed so that μ∘d = −m_1∘μ.
pub fn bar_differential(a: &AInftyAlgebra, x: &BarElement) -> Result<BarElement> {
    let mut acc: BTreeMap<Vec<usize>, NovikovElement> = BTreeMap::new();
    for (c, t) in x {
        let k = t.len();
        if k < 2 {
            return Err(Error::InvalidInput("a bar tensor needs x_− and x_+".into()));
        }
        let d_old = diamond(a, t);
        let mut contract = |i: usize, j: usize, out_gen: usize, coeff: &NovikovElement| {
            let mut nt = Vec::with_capacity(k - j + 1);
            nt.extend_from_slice(&t[..i]);
            nt.push(out_gen);
            nt.extend_from_slice(&t[i + j..]);
            if nt.len() < 2 {
                return;
            }
            let maltese: u32 = t[..i].iter().map(|g| a.degree(*g) + 1).sum();
            let s = maltese + d_old + diamond(a, &nt);
            let term = signed(&(c * coeff), parity(s) == 1);
            let e = acc.entry(nt).or_insert_with(|| NovikovElement::zero(1));
            *e = &*e + &term;
        };
        for i in 0..k {
            for j in 1..=(k - i) {
                if i == 0 && j == k {
                    continue;
                }
                if let Some(v) = a.tensors.get(&t[i..i + j]) {
                    for (g, y) in v {
                        contract(i, j, *g, y);
                    }
                }
            }
        }
        // curvature insertions between consecutive entries
        for i in 1..k {
            let o = a.generators[t[i - 1]].target;
            for (g, y) in &a.curvature[o] {
                let mut nt = t.clone();
                nt.insert(i, *g);
                let maltese: u32 = t[..i].iter().map(|g| a.degree(*g) + 1).sum();
                let s = maltese + d_old + diamond(a, &nt);
                let term = signed(&(c * y), parity(s) == 1);
                let e = acc.entry(nt).or_insert_with(|| NovikovElement::zero(1));
                *e = &*e + &term;
            }
        }
    }
    Ok(acc.into_iter().filter(|(_, c)| !c.is_zero()).map(|(t, c)| (c, t)).collect())
}

/// Data of one counted disk.
#[derive(Clone, Debug)]
pub struct DiskContribution {
    pub bulk: NovikovElement,
    pub branch_weight: Rational,
    pub holonomy: CyclotomicNumber,
    pub area: Rational,
    pub orientation: i8,
    /// number of interior leaves per constraint label
    pub leaf_counts: BTreeMap<String, u32>,
}

/// c·p·y·q^A·o / Π d(◇)!.
pub fn weight(u: &DiskContribution) -> NovikovElement {
    let denom: num_bigint::BigInt = u.leaf_counts.values().map(|d| factorial(*d as u64)).product();
    let scalar = &u.branch_weight / Rational::from_integer(denom) * Rational::from_integer(i64::from(u.orientation).into());
    NovikovElement::monomial(u.holonomy.clone(), u.area.clone()).scale_rational(&scalar) * u.bulk.clone()
}

/// (−1)^{Σ i|x_i|}, inputs numbered from 1.
pub fn sign_heart(degrees: &[u32]) -> i8 {
    let s: u64 = degrees.iter().enumerate().map(|(i, d)| (i as u64 + 1) * (*d as u64)).sum();
    if s % 2 == 0 {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests;
