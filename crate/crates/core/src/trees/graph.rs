//! Graph form of a treed disk: explicit vertices, edges and ribbon orders.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{BoundaryChild, DiskVertex, EdgeLength, InteriorChild, SphereVertex, TreedDiskType, Weight};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VertexKind {
    Disk,
    Sphere,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Endpoint {
    Vertex(usize),
    Infinity,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeKind {
    Output { weight: Weight },
    BoundaryInput { weight: Weight },
    InteriorInput { label: usize },
    Base { length: EdgeLength },
    Interior,
}

/// Oriented toward the output: `tail` is farther from the root than `head`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeEdge {
    pub tail: Endpoint,
    pub head: Endpoint,
    pub kind: EdgeKind,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasedTree {
    pub vertices: Vec<VertexKind>,
    pub edges: Vec<TreeEdge>,
    /// per disk vertex, the cyclic order of its incident base edges (edge indices); empty for spheres
    pub ribbon: Vec<Vec<usize>>,
}

struct Builder {
    vertices: Vec<VertexKind>,
    edges: Vec<TreeEdge>,
    ribbon: Vec<Vec<usize>>,
}

impl Builder {
    fn add_edge(&mut self, tail: Endpoint, head: Endpoint, kind: EdgeKind) -> usize {
        self.edges.push(TreeEdge { tail, head, kind });
        self.edges.len() - 1
    }

    fn disk(&mut self, v: &DiskVertex, up: usize) -> usize {
        let id = self.vertices.len();
        self.vertices.push(VertexKind::Disk);
        self.ribbon.push(Vec::new());
        let mut order = vec![up];
        for c in &v.boundary {
            let e = match c {
                BoundaryChild::Leaf(w) => self.add_edge(Endpoint::Infinity, Endpoint::Vertex(id), EdgeKind::BoundaryInput { weight: *w }),
                BoundaryChild::Disk(len, u) => {
                    let e = self.add_edge(Endpoint::Infinity, Endpoint::Vertex(id), EdgeKind::Base { length: *len });
                    let child = self.disk(u, e);
                    self.edges[e].tail = Endpoint::Vertex(child);
                    e
                }
            };
            order.push(e);
        }
        self.ribbon[id] = order;
        for c in &v.interior {
            self.interior(c, id);
        }
        id
    }

    fn interior(&mut self, c: &InteriorChild, parent: usize) {
        match c {
            InteriorChild::Leaf(l) => {
                self.add_edge(Endpoint::Infinity, Endpoint::Vertex(parent), EdgeKind::InteriorInput { label: *l });
            }
            InteriorChild::Sphere(s) => {
                let id = self.vertices.len();
                self.vertices.push(VertexKind::Sphere);
                self.ribbon.push(Vec::new());
                self.add_edge(Endpoint::Vertex(id), Endpoint::Vertex(parent), EdgeKind::Interior);
                for ch in &s.children {
                    self.interior(ch, id);
                }
            }
        }
    }
}

pub(super) fn to_graph(t: &TreedDiskType) -> BasedTree {
    let mut b = Builder { vertices: Vec::new(), edges: Vec::new(), ribbon: Vec::new() };
    let out = b.add_edge(Endpoint::Vertex(0), Endpoint::Infinity, EdgeKind::Output { weight: t.output_weight() });
    b.disk(&t.root, out);
    BasedTree { vertices: b.vertices, edges: b.edges, ribbon: b.ribbon }
}

fn bad(msg: &str) -> Error {
    Error::InvalidInput(format!("malformed tree: {msg}"))
}

struct Reader<'a> {
    g: &'a BasedTree,
    /// incoming edges per vertex (edges whose head is the vertex)
    incoming: Vec<Vec<usize>>,
    visited: Vec<bool>,
}

impl<'a> Reader<'a> {
    fn visit(&mut self, v: usize) -> Result<()> {
        if self.visited[v] {
            return Err(bad("cycle"));
        }
        self.visited[v] = true;
        Ok(())
    }

    fn disk(&mut self, v: usize, up: usize) -> Result<DiskVertex> {
        self.visit(v)?;
        if self.g.vertices[v] != VertexKind::Disk {
            return Err(bad("base edge into a sphere vertex"));
        }
        let ribbon = &self.g.ribbon[v];
        let pos = ribbon.iter().position(|e| *e == up).ok_or_else(|| bad("ribbon misses the edge toward the root"))?;
        let n = ribbon.len();
        let mut boundary = Vec::new();
        let mut seen_base = vec![up];
        for i in 1..n {
            let e = ribbon[(pos + i) % n];
            let edge = self.g.edges.get(e).ok_or_else(|| bad("ribbon edge out of range"))?;
            if edge.head != Endpoint::Vertex(v) {
                return Err(bad("ribbon edge not incident"));
            }
            seen_base.push(e);
            match edge.kind {
                EdgeKind::BoundaryInput { weight } => {
                    if edge.tail != Endpoint::Infinity {
                        return Err(bad("input edge with a finite tail"));
                    }
                    boundary.push(BoundaryChild::Leaf(weight));
                }
                EdgeKind::Base { length } => {
                    let Endpoint::Vertex(u) = edge.tail else { return Err(bad("base edge without a tail vertex")) };
                    boundary.push(BoundaryChild::Disk(length, self.disk(u, e)?));
                }
                _ => return Err(bad("non-base edge in a ribbon")),
            }
        }
        let mut interior = Vec::new();
        for &e in &self.incoming[v].clone() {
            let edge = &self.g.edges[e];
            match edge.kind {
                EdgeKind::InteriorInput { .. } | EdgeKind::Interior => interior.push(self.interior(e)?),
                _ => {
                    if !seen_base.contains(&e) {
                        return Err(bad("base edge missing from a ribbon"));
                    }
                }
            }
        }
        Ok(DiskVertex { boundary, interior })
    }

    fn interior(&mut self, e: usize) -> Result<InteriorChild> {
        let edge = &self.g.edges[e];
        match edge.kind {
            EdgeKind::InteriorInput { label } => {
                if edge.tail != Endpoint::Infinity {
                    return Err(bad("interior input with a finite tail"));
                }
                Ok(InteriorChild::Leaf(label))
            }
            EdgeKind::Interior => {
                let Endpoint::Vertex(s) = edge.tail else { return Err(bad("interior edge without a tail vertex")) };
                self.visit(s)?;
                if self.g.vertices[s] != VertexKind::Sphere {
                    return Err(bad("interior edge from a disk vertex"));
                }
                let mut children = Vec::new();
                for &c in &self.incoming[s].clone() {
                    children.push(self.interior(c)?);
                }
                Ok(InteriorChild::Sphere(SphereVertex { children }))
            }
            _ => Err(bad("base edge into a sphere vertex")),
        }
    }
}

pub(super) fn from_graph(g: &BasedTree) -> Result<TreedDiskType> {
    let nv = g.vertices.len();
    if g.ribbon.len() != nv {
        return Err(bad("ribbon count"));
    }
    let mut incoming = vec![Vec::new(); nv];
    let mut output = None;
    for (i, e) in g.edges.iter().enumerate() {
        for p in [e.tail, e.head] {
            if let Endpoint::Vertex(v) = p {
                if v >= nv {
                    return Err(bad("vertex out of range"));
                }
            }
        }
        match (e.kind, e.head) {
            (EdgeKind::Output { .. }, Endpoint::Infinity) => {
                if output.replace(i).is_some() {
                    return Err(bad("two output edges"));
                }
            }
            (EdgeKind::Output { .. }, _) => return Err(bad("output edge with a finite head")),
            (_, Endpoint::Vertex(h)) => incoming[h].push(i),
            (_, Endpoint::Infinity) => return Err(bad("input edge pointing to infinity")),
        }
    }
    let out = output.ok_or_else(|| bad("no output edge"))?;
    let Endpoint::Vertex(root) = g.edges[out].tail else { return Err(bad("output edge without a root vertex")) };
    let mut r = Reader { g, incoming, visited: vec![false; nv] };
    let disk = r.disk(root, out)?;
    if r.visited.iter().any(|v| !v) {
        return Err(bad("disconnected"));
    }
    let t = TreedDiskType::new(disk);
    if let EdgeKind::Output { weight } = g.edges[out].kind {
        if weight != t.output_weight() {
            return Err(bad("output weight is not the product of the input weights"));
        }
    }
    let mut labels = BTreeMap::new();
    for e in &g.edges {
        if let EdgeKind::InteriorInput { label } = e.kind {
            if labels.insert(label, ()).is_some() {
                return Err(bad("repeated interior label"));
            }
        }
    }
    Ok(t)
}
