//! Stable treed-disk combinatorial types: enumeration, dimension, boundary strata, partial order.

mod graph;

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::rc::Rc;

use serde::{Serialize, Serializer};

pub use graph::{BasedTree, EdgeKind, Endpoint, TreeEdge, VertexKind};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Metric type of a finite base edge. `Infinite` is a breaking.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeLength {
    Zero,
    Positive,
    Infinite,
}

/// Weighting type of a semi-infinite edge: weight 0, in (0,1), or 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Weight {
    Black,
    Grey,
    White,
}

impl EdgeLength {
    fn code(self) -> char {
        match self {
            EdgeLength::Zero => '0',
            EdgeLength::Positive => '+',
            EdgeLength::Infinite => 'i',
        }
    }
}

impl Weight {
    fn code(self) -> char {
        match self {
            Weight::Black => 'k',
            Weight::Grey => 'g',
            Weight::White => 'w',
        }
    }

    /// Weight of an edge fed by edges of the given weights (weights multiply).
    fn combine(ws: impl IntoIterator<Item = Weight>) -> Weight {
        let mut all_white = true;
        for w in ws {
            match w {
                Weight::Black => return Weight::Black,
                Weight::Grey => all_white = false,
                Weight::White => {}
            }
        }
        if all_white {
            Weight::White
        } else {
            Weight::Grey
        }
    }
}

/// A boundary (base) child of a disk vertex, in ribbon order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BoundaryChild {
    Leaf(Weight),
    Disk(EdgeLength, DiskVertex),
}

/// A non-base child: a labelled interior leaf or a sphere bubble.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InteriorChild {
    Leaf(usize),
    Sphere(SphereVertex),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiskVertex {
    pub boundary: Vec<BoundaryChild>,
    /// kept sorted by canonical encoding
    pub interior: Vec<InteriorChild>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SphereVertex {
    /// kept sorted by canonical encoding
    pub children: Vec<InteriorChild>,
}

/// A combinatorial type rooted at the output edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreedDiskType {
    pub root: DiskVertex,
}

fn encode_interior(c: &InteriorChild, out: &mut String) {
    match c {
        InteriorChild::Leaf(l) => {
            out.push('l');
            out.push_str(&l.to_string());
        }
        InteriorChild::Sphere(s) => {
            out.push_str("S(");
            for (i, ch) in s.children.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                encode_interior(ch, out);
            }
            out.push(')');
        }
    }
}

fn encode_disk(v: &DiskVertex, out: &mut String) {
    out.push_str("D(");
    for (i, c) in v.boundary.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        match c {
            BoundaryChild::Leaf(w) => {
                out.push('b');
                out.push(w.code());
            }
            BoundaryChild::Disk(len, u) => {
                out.push('e');
                out.push(len.code());
                encode_disk(u, out);
            }
        }
    }
    out.push(';');
    for (i, c) in v.interior.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        encode_interior(c, out);
    }
    out.push(')');
}

fn interior_key(c: &InteriorChild) -> String {
    let mut s = String::new();
    encode_interior(c, &mut s);
    s
}

fn sort_interior(v: &mut [InteriorChild]) {
    v.sort_by_cached_key(interior_key);
}

impl SphereVertex {
    fn normalize(&mut self) {
        for c in self.children.iter_mut() {
            if let InteriorChild::Sphere(s) = c {
                s.normalize();
            }
        }
        sort_interior(&mut self.children);
    }

    fn stable(&self) -> bool {
        1 + self.children.len() >= 3
    }
}

impl DiskVertex {
    fn normalize(&mut self) {
        for c in self.boundary.iter_mut() {
            if let BoundaryChild::Disk(_, u) = c {
                u.normalize();
            }
        }
        for c in self.interior.iter_mut() {
            if let InteriorChild::Sphere(s) = c {
                s.normalize();
            }
        }
        sort_interior(&mut self.interior);
    }

    /// (#base edges) + 2·(#non-base edges) ≥ 3, counting the edge toward the root.
    fn stable_here(&self) -> bool {
        1 + self.boundary.len() + 2 * self.interior.len() >= 3
    }

    fn weight(&self) -> Weight {
        if !self.interior.is_empty() {
            return Weight::Black;
        }
        Weight::combine(self.boundary.iter().map(|c| match c {
            BoundaryChild::Leaf(w) => *w,
            BoundaryChild::Disk(_, u) => u.weight(),
        }))
    }
}

fn interior_stats(c: &InteriorChild, leaves: &mut usize, sphere_edges: &mut usize, vertices: &mut usize, edges: &mut usize) {
    *edges += 1;
    match c {
        InteriorChild::Leaf(_) => *leaves += 1,
        InteriorChild::Sphere(s) => {
            *sphere_edges += 1;
            *vertices += 1;
            for ch in &s.children {
                interior_stats(ch, leaves, sphere_edges, vertices, edges);
            }
        }
    }
}

#[derive(Default, Clone, Debug)]
struct ComponentCounts {
    k: i64,
    l: i64,
    grey: i64,
    zero_edges: i64,
    interior_edges: i64,
}

/// Walks one unbroken component, collecting counts and the roots of components above breakings.
fn component_counts<'a>(v: &'a DiskVertex, acc: &mut ComponentCounts, above: &mut Vec<&'a DiskVertex>) {
    for c in &v.boundary {
        match c {
            BoundaryChild::Leaf(w) => {
                acc.k += 1;
                if *w == Weight::Grey {
                    acc.grey += 1;
                }
            }
            BoundaryChild::Disk(len, u) => match len {
                EdgeLength::Zero => {
                    acc.zero_edges += 1;
                    component_counts(u, acc, above);
                }
                EdgeLength::Positive => component_counts(u, acc, above),
                EdgeLength::Infinite => {
                    acc.k += 1;
                    if u.weight() == Weight::Grey {
                        acc.grey += 1;
                    }
                    above.push(u);
                }
            },
        }
    }
    for c in &v.interior {
        let (mut leaves, mut se, mut vs, mut es) = (0, 0, 0, 0);
        interior_stats(c, &mut leaves, &mut se, &mut vs, &mut es);
        acc.l += leaves as i64;
        acc.interior_edges += se as i64;
    }
}

fn component_dim(root: &DiskVertex) -> i64 {
    let mut acc = ComponentCounts::default();
    let mut above = Vec::new();
    component_counts(root, &mut acc, &mut above);
    let out_grey = root.weight() == Weight::Grey;
    let grey = acc.grey + i64::from(out_grey);
    let base = acc.k + 2 * acc.l + grey - acc.zero_edges - 2 * acc.interior_edges - if out_grey { 4 } else { 2 };
    base + above.into_iter().map(component_dim).sum::<i64>()
}

fn disk_all_stable(v: &DiskVertex) -> bool {
    v.stable_here()
        && v.boundary.iter().all(|c| match c {
            BoundaryChild::Leaf(_) => true,
            BoundaryChild::Disk(_, u) => disk_all_stable(u),
        })
        && v.interior.iter().all(interior_all_stable)
}

fn interior_all_stable(c: &InteriorChild) -> bool {
    match c {
        InteriorChild::Leaf(_) => true,
        InteriorChild::Sphere(s) => s.stable() && s.children.iter().all(interior_all_stable),
    }
}

/// Totals over a whole type.
#[derive(Default, Clone, Debug, PartialEq, Eq)]
pub struct TypeCounts {
    pub boundary_leaves: usize,
    pub interior_leaves: usize,
    pub grey_inputs: usize,
    pub disk_vertices: usize,
    pub sphere_vertices: usize,
    /// all edges, semi-infinite ones included
    pub edges: usize,
    pub breakings: usize,
}

fn totals(v: &DiskVertex, t: &mut TypeCounts) {
    t.disk_vertices += 1;
    for c in &v.boundary {
        t.edges += 1;
        match c {
            BoundaryChild::Leaf(w) => {
                t.boundary_leaves += 1;
                if *w == Weight::Grey {
                    t.grey_inputs += 1;
                }
            }
            BoundaryChild::Disk(len, u) => {
                if *len == EdgeLength::Infinite {
                    t.breakings += 1;
                }
                totals(u, t);
            }
        }
    }
    for c in &v.interior {
        let (mut leaves, mut se, mut vs, mut es) = (0, 0, 0, 0);
        interior_stats(c, &mut leaves, &mut se, &mut vs, &mut es);
        t.interior_leaves += leaves;
        t.sphere_vertices += vs;
        t.edges += es;
    }
}

impl TreedDiskType {
    pub fn new(mut root: DiskVertex) -> Self {
        root.normalize();
        TreedDiskType { root }
    }

    /// Minimal DFS string rooted at the output; ribbon order on boundary children, sorted non-base children.
    pub fn encoding(&self) -> String {
        let mut s = String::new();
        encode_disk(&self.root, &mut s);
        s
    }

    pub fn is_stable(&self) -> bool {
        disk_all_stable(&self.root)
    }

    pub fn output_weight(&self) -> Weight {
        self.root.weight()
    }

    pub fn counts(&self) -> TypeCounts {
        let mut t = TypeCounts { edges: 1, ..Default::default() };
        totals(&self.root, &mut t);
        t
    }

    pub fn vertex_count(&self) -> usize {
        let c = self.counts();
        c.disk_vertices + c.sphere_vertices
    }

    /// Dimension of the cell; broken types add the dimensions of their components.
    pub fn dim(&self) -> Result<i64> {
        if !self.is_stable() {
            return Err(Error::Unstable(self.encoding()));
        }
        Ok(component_dim(&self.root))
    }

    fn dim_unchecked(&self) -> i64 {
        component_dim(&self.root)
    }

    pub fn to_graph(&self) -> BasedTree {
        graph::to_graph(self)
    }

    pub fn from_graph(g: &BasedTree) -> Result<Self> {
        graph::from_graph(g)
    }
}

impl PartialOrd for TreedDiskType {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for TreedDiskType {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.encoding().cmp(&other.encoding())
    }
}

impl fmt::Display for TreedDiskType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.encoding())
    }
}

#[derive(Serialize)]
struct TypeJson {
    encoding: String,
    dim: i64,
    output_weight: Weight,
    tree: BasedTree,
}

impl Serialize for TreedDiskType {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        TypeJson { encoding: self.encoding(), dim: self.dim_unchecked(), output_weight: self.output_weight(), tree: self.to_graph() }
            .serialize(s)
    }
}

/// Which cells to enumerate.
#[derive(Clone, Debug)]
pub struct EnumerationOptions {
    /// allowed metric types of finite base edges
    pub lengths: Vec<EdgeLength>,
    /// assign black/grey/white to boundary inputs; otherwise all black
    pub weighted: bool,
    /// vertex cap; `None` means 2(d_boundary + d_interior) + 2
    pub max_vertices: Option<usize>,
    pub max_types: usize,
}

impl EnumerationOptions {
    /// Stable disks only: the faces of the associahedron.
    pub fn associahedron() -> Self {
        EnumerationOptions { lengths: vec![EdgeLength::Zero], weighted: false, max_vertices: None, max_types: 200_000 }
    }

    /// All metric types, unweighted.
    pub fn treed() -> Self {
        EnumerationOptions {
            lengths: vec![EdgeLength::Zero, EdgeLength::Positive, EdgeLength::Infinite],
            weighted: false,
            max_vertices: None,
            max_types: 200_000,
        }
    }

    /// All metric and weighting types.
    pub fn weighted() -> Self {
        EnumerationOptions { weighted: true, ..Self::treed() }
    }
}

struct Generator<'a> {
    opts: &'a EnumerationOptions,
    disks: BTreeMap<(usize, u32), Rc<Vec<DiskVertex>>>,
    spheres: BTreeMap<u32, Rc<Vec<SphereVertex>>>,
    seqs: BTreeMap<(usize, u32, bool), Rc<Vec<Vec<BoundaryChild>>>>,
    produced: usize,
}

fn submasks(mask: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut s = mask;
    loop {
        out.push(s);
        if s == 0 {
            break;
        }
        s = (s - 1) & mask;
    }
    out.reverse();
    out
}

impl<'a> Generator<'a> {
    fn bump(&mut self, n: usize) -> Result<()> {
        self.produced += n;
        if self.produced > self.opts.max_types {
            return Err(Error::EnumerationBudget(format!("more than {} intermediate types", self.opts.max_types)));
        }
        Ok(())
    }

    /// Set partitions of `mask` into blocks, each block a leaf or a sphere tree.
    fn forests(&mut self, mask: u32, split: bool) -> Result<Vec<Vec<InteriorChild>>> {
        if mask == 0 {
            return Ok(vec![Vec::new()]);
        }
        let low = mask & mask.wrapping_neg();
        let rest = mask ^ low;
        let mut out = Vec::new();
        for extra in submasks(rest) {
            let block = low | extra;
            if split && block == mask {
                continue;
            }
            let heads: Vec<InteriorChild> = if block.count_ones() == 1 {
                vec![InteriorChild::Leaf(block.trailing_zeros() as usize + 1)]
            } else {
                self.spheres(block)?.iter().cloned().map(InteriorChild::Sphere).collect()
            };
            if heads.is_empty() {
                continue;
            }
            let tails = self.forests(rest ^ extra, false)?;
            for h in &heads {
                for t in &tails {
                    let mut f = Vec::with_capacity(t.len() + 1);
                    f.push(h.clone());
                    f.extend(t.iter().cloned());
                    sort_interior(&mut f);
                    out.push(f);
                }
            }
        }
        self.bump(out.len())?;
        Ok(out)
    }

    fn spheres(&mut self, mask: u32) -> Result<Rc<Vec<SphereVertex>>> {
        if let Some(v) = self.spheres.get(&mask) {
            return Ok(v.clone());
        }
        let mut out = Vec::new();
        for f in self.forests(mask, true)? {
            if f.len() >= 2 {
                out.push(SphereVertex { children: f });
            }
        }
        let rc = Rc::new(out);
        self.spheres.insert(mask, rc.clone());
        Ok(rc)
    }

    /// Planar sequences of boundary children using exactly `k` leaves and the labels in `mask`.
    fn sequences(&mut self, k: usize, mask: u32, forbid_whole: bool) -> Result<Rc<Vec<Vec<BoundaryChild>>>> {
        if k == 0 && mask == 0 {
            return Ok(Rc::new(vec![Vec::new()]));
        }
        if let Some(v) = self.seqs.get(&(k, mask, forbid_whole)) {
            return Ok(v.clone());
        }
        let mut out = Vec::new();
        if k >= 1 {
            for tail in self.sequences(k - 1, mask, false)?.iter() {
                let mut s = Vec::with_capacity(tail.len() + 1);
                s.push(BoundaryChild::Leaf(Weight::Black));
                s.extend(tail.iter().cloned());
                out.push(s);
            }
        }
        for k1 in 0..=k {
            for l1 in submasks(mask) {
                if k1 == 0 && l1 == 0 {
                    continue;
                }
                if forbid_whole && k1 == k && l1 == mask {
                    continue;
                }
                let subs = self.disks(k1, l1)?;
                if subs.is_empty() {
                    continue;
                }
                let tails = self.sequences(k - k1, mask ^ l1, false)?;
                for u in subs.iter() {
                    for &len in &self.opts.lengths {
                        for t in tails.iter() {
                            let mut s = Vec::with_capacity(t.len() + 1);
                            s.push(BoundaryChild::Disk(len, u.clone()));
                            s.extend(t.iter().cloned());
                            out.push(s);
                        }
                    }
                }
            }
        }
        self.bump(out.len())?;
        let rc = Rc::new(out);
        self.seqs.insert((k, mask, forbid_whole), rc.clone());
        Ok(rc)
    }

    fn disks(&mut self, k: usize, mask: u32) -> Result<Rc<Vec<DiskVertex>>> {
        if let Some(v) = self.disks.get(&(k, mask)) {
            return Ok(v.clone());
        }
        let mut out = Vec::new();
        for direct in submasks(mask) {
            let forests = self.forests(direct, false)?;
            let seqs = self.sequences(k, mask ^ direct, direct == 0)?;
            for f in &forests {
                for s in seqs.iter() {
                    let v = DiskVertex { boundary: s.clone(), interior: f.clone() };
                    if v.stable_here() {
                        out.push(v);
                    }
                }
            }
        }
        self.bump(out.len())?;
        let rc = Rc::new(out);
        self.disks.insert((k, mask), rc.clone());
        Ok(rc)
    }
}

fn assign_weights(v: &DiskVertex, ws: &mut std::slice::Iter<'_, Weight>) -> DiskVertex {
    DiskVertex {
        boundary: v
            .boundary
            .iter()
            .map(|c| match c {
                BoundaryChild::Leaf(_) => BoundaryChild::Leaf(*ws.next().expect("enough weights")),
                BoundaryChild::Disk(len, u) => BoundaryChild::Disk(*len, assign_weights(u, ws)),
            })
            .collect(),
        interior: v.interior.clone(),
    }
}

/// All stable types with `d_boundary` boundary inputs and interior inputs labelled 1..=d_interior,
/// each isomorphism class once, sorted by canonical encoding.
pub fn enumerate_stable_types(d_boundary: usize, d_interior: usize, opts: &EnumerationOptions) -> Result<Vec<TreedDiskType>> {
    if d_boundary == 0 && d_interior == 0 {
        return Err(Error::InvalidInput("at least one input is required".into()));
    }
    if d_interior > 16 {
        return Err(Error::EnumerationBudget(format!("{d_interior} interior inputs")));
    }
    let max_vertices = opts.max_vertices.unwrap_or(2 * (d_boundary + d_interior) + 2);
    let mut gen = Generator { opts, disks: BTreeMap::new(), spheres: BTreeMap::new(), seqs: BTreeMap::new(), produced: 0 };
    let mask = if d_interior == 0 { 0 } else { (1u32 << d_interior) - 1 };
    let shapes = gen.disks(d_boundary, mask)?;
    let weightings: Vec<Vec<Weight>> = if opts.weighted {
        let mut all = vec![Vec::new()];
        for _ in 0..d_boundary {
            all = all
                .into_iter()
                .flat_map(|w: Vec<Weight>| {
                    [Weight::Black, Weight::Grey, Weight::White].into_iter().map(move |x| {
                        let mut v = w.clone();
                        v.push(x);
                        v
                    })
                })
                .collect();
        }
        all
    } else {
        vec![vec![Weight::Black; d_boundary]]
    };
    if shapes.len().saturating_mul(weightings.len()) > opts.max_types {
        return Err(Error::EnumerationBudget(format!("more than {} types", opts.max_types)));
    }
    let mut out = BTreeMap::new();
    for s in shapes.iter() {
        for w in &weightings {
            let t = TreedDiskType::new(assign_weights(s, &mut w.iter()));
            if t.vertex_count() > max_vertices {
                return Err(Error::EnumerationBudget(format!("a stable type needs {} > {max_vertices} vertices", t.vertex_count())));
            }
            out.insert(t.encoding(), t);
        }
    }
    Ok(out.into_values().collect())
}

/// Number of types in each dimension.
pub fn census(types: &[TreedDiskType]) -> BTreeMap<i64, usize> {
    let mut m = BTreeMap::new();
    for t in types {
        *m.entry(t.dim_unchecked()).or_insert(0) += 1;
    }
    m
}

/// A single elementary degeneration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Degeneration {
    /// a disk vertex splits in two joined by a zero-length edge
    DiskBubble,
    /// interior children bubble off onto a sphere
    SphereBubble,
    EdgeToZero,
    EdgeToInfinity,
    WeightToZero,
    WeightToOne,
}

fn moves_sphere(s: &SphereVertex) -> Vec<(SphereVertex, Degeneration)> {
    let mut out = Vec::new();
    let p = s.children.len();
    for t in 1u32..(1 << p) {
        if t.count_ones() < 2 || t.count_ones() as usize == p {
            continue;
        }
        let (inside, outside) = split_by_mask(&s.children, t);
        let mut children = outside;
        children.push(InteriorChild::Sphere(SphereVertex { children: inside }));
        let ns = SphereVertex { children };
        if ns.stable() {
            out.push((ns, Degeneration::SphereBubble));
        }
    }
    for (i, c) in s.children.iter().enumerate() {
        if let InteriorChild::Sphere(inner) = c {
            for (m, d) in moves_sphere(inner) {
                let mut ns = s.clone();
                ns.children[i] = InteriorChild::Sphere(m);
                out.push((ns, d));
            }
        }
    }
    out
}

fn split_by_mask(v: &[InteriorChild], t: u32) -> (Vec<InteriorChild>, Vec<InteriorChild>) {
    let mut inside = Vec::new();
    let mut outside = Vec::new();
    for (i, c) in v.iter().enumerate() {
        if t & (1 << i) != 0 {
            inside.push(c.clone());
        } else {
            outside.push(c.clone());
        }
    }
    (inside, outside)
}

fn moves_disk(v: &DiskVertex) -> Vec<(DiskVertex, Degeneration)> {
    let mut out = Vec::new();
    let m = v.boundary.len();
    let p = v.interior.len();
    // disk bubbling
    for i in 0..=m {
        for j in i..=m {
            for t in 0u32..(1 << p) {
                let (inside, outside) = split_by_mask(&v.interior, t);
                let child = DiskVertex { boundary: v.boundary[i..j].to_vec(), interior: inside };
                if !child.stable_here() {
                    continue;
                }
                let mut boundary = v.boundary[..i].to_vec();
                boundary.push(BoundaryChild::Disk(EdgeLength::Zero, child));
                boundary.extend(v.boundary[j..].iter().cloned());
                let parent = DiskVertex { boundary, interior: outside };
                if parent.stable_here() {
                    out.push((parent, Degeneration::DiskBubble));
                }
            }
        }
    }
    // sphere bubbling
    for t in 1u32..(1 << p) {
        if t.count_ones() < 2 {
            continue;
        }
        let (inside, outside) = split_by_mask(&v.interior, t);
        let mut interior = outside;
        interior.push(InteriorChild::Sphere(SphereVertex { children: inside }));
        let nv = DiskVertex { boundary: v.boundary.clone(), interior };
        if nv.stable_here() {
            out.push((nv, Degeneration::SphereBubble));
        }
    }
    for (i, c) in v.boundary.iter().enumerate() {
        match c {
            BoundaryChild::Leaf(Weight::Grey) => {
                for (w, d) in [(Weight::Black, Degeneration::WeightToZero), (Weight::White, Degeneration::WeightToOne)] {
                    let mut nv = v.clone();
                    nv.boundary[i] = BoundaryChild::Leaf(w);
                    out.push((nv, d));
                }
            }
            BoundaryChild::Leaf(_) => {}
            BoundaryChild::Disk(len, u) => {
                if *len == EdgeLength::Positive {
                    for (l, d) in [(EdgeLength::Zero, Degeneration::EdgeToZero), (EdgeLength::Infinite, Degeneration::EdgeToInfinity)] {
                        let mut nv = v.clone();
                        nv.boundary[i] = BoundaryChild::Disk(l, u.clone());
                        out.push((nv, d));
                    }
                }
                for (mu, d) in moves_disk(u) {
                    let mut nv = v.clone();
                    nv.boundary[i] = BoundaryChild::Disk(*len, mu);
                    out.push((nv, d));
                }
            }
        }
    }
    for (i, c) in v.interior.iter().enumerate() {
        if let InteriorChild::Sphere(s) = c {
            for (ms, d) in moves_sphere(s) {
                let mut nv = v.clone();
                nv.interior[i] = InteriorChild::Sphere(ms);
                out.push((nv, d));
            }
        }
    }
    out
}

/// Every stable type reachable by one elementary degeneration that lowers the dimension.
pub fn degenerations(g: &TreedDiskType) -> Vec<(TreedDiskType, Degeneration)> {
    let d = g.dim_unchecked();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for (v, op) in moves_disk(&g.root) {
        let t = TreedDiskType::new(v);
        if !t.is_stable() || t.dim_unchecked() >= d {
            continue;
        }
        if seen.insert((t.encoding(), op)) {
            out.push((t, op));
        }
    }
    out.sort_by(|a, b| (a.0.encoding(), a.1).cmp(&(b.0.encoding(), b.1)));
    out
}

/// Codimension-one faces together with the operation producing each.
pub fn boundary_strata_with_ops(g: &TreedDiskType) -> Result<Vec<(TreedDiskType, Degeneration)>> {
    let d = g.dim()?;
    let weighted_out = g.output_weight() == Weight::Grey;
    Ok(degenerations(g)
        .into_iter()
        .filter(|(t, op)| {
            t.dim_unchecked() == d - 1
                && match op {
                    Degeneration::DiskBubble | Degeneration::EdgeToZero | Degeneration::EdgeToInfinity => true,
                    Degeneration::WeightToZero => !weighted_out,
                    Degeneration::WeightToOne => true,
                    Degeneration::SphereBubble => false,
                }
        })
        .collect())
}

/// Codimension-one faces, deduplicated.
pub fn boundary_strata(g: &TreedDiskType) -> Result<Vec<TreedDiskType>> {
    let mut m = BTreeMap::new();
    for (t, _) in boundary_strata_with_ops(g)? {
        m.insert(t.encoding(), t);
    }
    Ok(m.into_values().collect())
}

/// Γ′ ⪯ Γ: Γ′ is reachable from Γ by finitely many degenerations.
pub fn leq(lower: &TreedDiskType, upper: &TreedDiskType) -> bool {
    if lower == upper {
        return true;
    }
    if !lower.is_stable() || !upper.is_stable() || lower.dim_unchecked() >= upper.dim_unchecked() {
        return false;
    }
    let target = lower.encoding();
    let floor = lower.dim_unchecked();
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::from([upper.clone()]);
    while let Some(t) = queue.pop_front() {
        for (s, _) in degenerations(&t) {
            let e = s.encoding();
            if e == target {
                return true;
            }
            if s.dim_unchecked() > floor && seen.insert(e) {
                queue.push_back(s);
            }
        }
    }
    false
}

/// The closure of a cell: the cell and all iterated faces.
pub fn closure(g: &TreedDiskType) -> Vec<TreedDiskType> {
    let mut seen = BTreeMap::new();
    seen.insert(g.encoding(), g.clone());
    let mut queue = VecDeque::from([g.clone()]);
    while let Some(t) = queue.pop_front() {
        for (s, _) in degenerations(&t) {
            let e = s.encoding();
            if !seen.contains_key(&e) {
                seen.insert(e, s.clone());
                queue.push_back(s);
            }
        }
    }
    seen.into_values().collect()
}

/// Combinatorial energy bound #Edge(Γ)/k + λ·a.
pub fn energy_bound(g: &TreedDiskType, k: u32, lambda: &Rational, a: &Rational) -> Result<Rational> {
    energy_bound_from_edges(g.counts().edges, k, lambda, a)
}

pub fn energy_bound_from_edges(edges: usize, k: u32, lambda: &Rational, a: &Rational) -> Result<Rational> {
    if k == 0 {
        return Err(Error::InvalidInput("energy bound needs k ≥ 1".into()));
    }
    if lambda < &Rational::from_integer(0.into()) || a < &Rational::from_integer(0.into()) {
        return Err(Error::InvalidInput("energy bound needs λ, a ≥ 0".into()));
    }
    Ok(Rational::new((edges as i64).into(), (k as i64).into()) + lambda * a)
}

/// A domain type decorated with map data.
#[derive(Clone, Debug)]
pub struct MapTypeSkeleton {
    pub domain: TreedDiskType,
    pub maslov: i64,
    /// Morse indices of the corner labels
    pub corner_indices: Vec<i64>,
    /// constraint codimension per interior leaf label
    pub constraints: BTreeMap<usize, i64>,
}

/// Codimension of a (D,1) divisor constraint.
pub const DIVISOR_CODIM: i64 = 2;

impl MapTypeSkeleton {
    /// Every interior leaf constrained to the divisor.
    pub fn with_divisor_constraints(domain: TreedDiskType, maslov: i64, corner_indices: Vec<i64>) -> Self {
        let l = domain.counts().interior_leaves;
        let constraints = (1..=l).map(|i| (i, DIVISOR_CODIM)).collect();
        MapTypeSkeleton { domain, maslov, corner_indices, constraints }
    }

    pub fn expected_dim(&self) -> Result<i64> {
        Ok(self.domain.dim()? + self.maslov + self.corner_indices.iter().sum::<i64>() - self.constraints.values().sum::<i64>())
    }

    /// Replaces interior leaf `label` by a sphere carrying it and a fresh leaf with the same constraint.
    pub fn crowd_leaf(&self, label: usize) -> Result<MapTypeSkeleton> {
        let codim = *self.constraints.get(&label).ok_or_else(|| Error::InvalidInput(format!("no interior leaf {label}")))?;
        let fresh = self.constraints.keys().max().copied().unwrap_or(0).max(self.domain.counts().interior_leaves) + 1;
        let mut root = self.domain.root.clone();
        if !replace_leaf(&mut root, label, fresh) {
            return Err(Error::InvalidInput(format!("no interior leaf {label}")));
        }
        let mut constraints = self.constraints.clone();
        constraints.insert(fresh, codim);
        Ok(MapTypeSkeleton { domain: TreedDiskType::new(root), maslov: self.maslov, corner_indices: self.corner_indices.clone(), constraints })
    }
}

fn replace_leaf_interior(cs: &mut [InteriorChild], label: usize, fresh: usize) -> bool {
    for c in cs.iter_mut() {
        match c {
            InteriorChild::Leaf(l) if *l == label => {
                *c = InteriorChild::Sphere(SphereVertex { children: vec![InteriorChild::Leaf(label), InteriorChild::Leaf(fresh)] });
                return true;
            }
            InteriorChild::Sphere(s) => {
                if replace_leaf_interior(&mut s.children, label, fresh) {
                    return true;
                }
            }
            _ => {}
        }
    }
    false
}

fn replace_leaf(v: &mut DiskVertex, label: usize, fresh: usize) -> bool {
    if replace_leaf_interior(&mut v.interior, label, fresh) {
        return true;
    }
    v.boundary.iter_mut().any(|c| match c {
        BoundaryChild::Disk(_, u) => replace_leaf(u, label, fresh),
        BoundaryChild::Leaf(_) => false,
    })
}

/// One edge on the path between the vertices nearest two distinguished interior inputs.
#[derive(Clone, Debug)]
pub struct PathEdge {
    /// +1 if traversed toward the root, −1 otherwise
    pub sign: i8,
    pub length: Rational,
}

/// Data of two distinguished interior inputs.
#[derive(Clone, Debug)]
pub struct BalanceData {
    /// empty when both inputs sit on the same base vertex
    pub path: Vec<PathEdge>,
    /// used when the path is empty: whether the two points lie on the same circle
    pub same_circle: bool,
}

pub fn is_balanced(b: &BalanceData) -> bool {
    if b.path.is_empty() {
        return b.same_circle;
    }
    let sum: Rational = b.path.iter().map(|e| if e.sign >= 0 { e.length.clone() } else { -e.length.clone() }).sum();
    sum == Rational::from_integer(0.into())
}
