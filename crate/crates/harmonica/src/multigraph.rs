//! Finite connected multigraphs without loop edges.
//!
//! Vertices and edges carry string names in files and dense integer ids
//! internally; parallel edges are distinct objects. The genus of a graph is
//! its first Betti number `|E| - |V| + 1`.

use std::collections::HashMap;

use crate::canon;
use crate::error::{Error, Result};

/// Dense in-graph vertex index.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct VertexId(pub(crate) u32);

/// Dense in-graph edge index.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct EdgeId(pub(crate) u32);

impl VertexId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl EdgeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A finite loopless multigraph. Immutable after construction; connectivity
/// is checked by the operations that need it rather than at build time, so
/// transient pieces (family scaffolding, quotients of subgraphs) can exist.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MultiGraph {
    vertex_names: Vec<String>,
    edge_names: Vec<String>,
    /// Endpoints with the smaller vertex index first.
    ends: Vec<(VertexId, VertexId)>,
    /// Incident edges per vertex, ascending; parallel edges listed separately.
    incidence: Vec<Vec<EdgeId>>,
}

/// The smallest neighborhood of a vertex: the vertex, its neighbors, and
/// every incident edge (parallel edges counted separately).
#[derive(Clone, Debug)]
pub struct Neighborhood {
    pub center: VertexId,
    pub vertices: Vec<VertexId>,
    pub edges: Vec<EdgeId>,
}

/// Witness returned by [`MultiGraph::are_isomorphic`]: an incidence-preserving
/// bijection pair, indexed by the ids of the first graph.
#[derive(Clone, Debug)]
pub struct Isomorphism {
    pub vertex_map: Vec<VertexId>,
    pub edge_map: Vec<EdgeId>,
}

impl MultiGraph {
    /// Builds a graph from named vertices and `(edge, end, end)` triples.
    pub fn build_graph<V, E>(vertices: V, edges: E) -> Result<MultiGraph>
    where
        V: IntoIterator,
        V::Item: Into<String>,
        E: IntoIterator,
        E::Item: Into<(String, String, String)>,
    {
        let vertex_names: Vec<String> = vertices.into_iter().map(Into::into).collect();
        if vertex_names.is_empty() {
            return Err(Error::EmptyGraph);
        }
        let mut vertex_index: HashMap<&str, u32> = HashMap::new();
        for (i, name) in vertex_names.iter().enumerate() {
            if vertex_index.insert(name, i as u32).is_some() {
                return Err(Error::DuplicateId { id: name.clone() });
            }
        }

        let mut edge_names = Vec::new();
        let mut ends = Vec::new();
        let mut seen_edges: HashMap<String, ()> = HashMap::new();
        for item in edges {
            let (id, a, b) = item.into();
            if seen_edges.insert(id.clone(), ()).is_some() {
                return Err(Error::DuplicateId { id });
            }
            let ai = *vertex_index
                .get(a.as_str())
                .ok_or(Error::UnknownVertex { name: a.clone() })?;
            let bi = *vertex_index
                .get(b.as_str())
                .ok_or(Error::UnknownVertex { name: b.clone() })?;
            if ai == bi {
                return Err(Error::LoopEdge { edge: id });
            }
            edge_names.push(id);
            ends.push((VertexId(ai.min(bi)), VertexId(ai.max(bi))));
        }

        let mut incidence = vec![Vec::new(); vertex_names.len()];
        for (i, &(u, v)) in ends.iter().enumerate() {
            incidence[u.index()].push(EdgeId(i as u32));
            incidence[v.index()].push(EdgeId(i as u32));
        }

        Ok(MultiGraph {
            vertex_names,
            edge_names,
            ends,
            incidence,
        })
    }

    /// Convenience builder for literals in tests and family constructors.
    pub fn from_literals(vertices: &[&str], edges: &[(&str, &str, &str)]) -> Result<MultiGraph> {
        MultiGraph::build_graph(
            vertices.iter().map(|s| s.to_string()),
            edges
                .iter()
                .map(|(e, a, b)| (e.to_string(), a.to_string(), b.to_string())),
        )
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_names.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        (0..self.vertex_names.len() as u32).map(VertexId)
    }

    pub fn edges(&self) -> impl Iterator<Item = EdgeId> {
        (0..self.edge_names.len() as u32).map(EdgeId)
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertex_names[v.index()]
    }

    pub fn edge_name(&self, e: EdgeId) -> &str {
        &self.edge_names[e.index()]
    }

    pub fn vertex_by_name(&self, name: &str) -> Result<VertexId> {
        self.vertex_names
            .iter()
            .position(|n| n == name)
            .map(|i| VertexId(i as u32))
            .ok_or(Error::UnknownVertex { name: name.to_string() })
    }

    pub fn edge_by_name(&self, name: &str) -> Result<EdgeId> {
        self.edge_names
            .iter()
            .position(|n| n == name)
            .map(|i| EdgeId(i as u32))
            .ok_or(Error::UnknownEdge { name: name.to_string() })
    }

    /// Endpoints of an edge, smaller vertex index first.
    pub fn ends(&self, e: EdgeId) -> (VertexId, VertexId) {
        self.ends[e.index()]
    }

    /// The endpoint of `e` other than `v`.
    pub fn other_end(&self, e: EdgeId, v: VertexId) -> VertexId {
        let (a, b) = self.ends(e);
        if a == v {
            b
        } else {
            a
        }
    }

    pub fn incident_edges(&self, v: VertexId) -> &[EdgeId] {
        &self.incidence[v.index()]
    }

    /// Degree counting parallel edges separately.
    pub fn degree(&self, v: VertexId) -> usize {
        self.incidence[v.index()].len()
    }

    pub fn is_connected(&self) -> bool {
        let n = self.vertex_count();
        if n == 0 {
            return false;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![VertexId(0)];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &e in self.incident_edges(v) {
                let w = self.other_end(e, v);
                if !seen[w.index()] {
                    seen[w.index()] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == n
    }

    /// First Betti number `|E| - |V| + 1`. Requires connectivity.
    pub fn genus(&self) -> Result<u64> {
        if !self.is_connected() {
            return Err(Error::Disconnected);
        }
        Ok(self.edge_count() as u64 + 1 - self.vertex_count() as u64)
    }

    /// Smallest neighborhood of `x`: `x`, its neighbors, and all incident edges.
    pub fn neighborhood(&self, x: VertexId) -> Result<Neighborhood> {
        if x.index() >= self.vertex_count() {
            return Err(Error::UnknownVertex {
                name: format!("#{}", x.0),
            });
        }
        let edges: Vec<EdgeId> = self.incident_edges(x).to_vec();
        let mut vertices = vec![x];
        for &e in &edges {
            let w = self.other_end(e, x);
            if !vertices.contains(&w) {
                vertices.push(w);
            }
        }
        vertices.sort();
        Ok(Neighborhood {
            center: x,
            vertices,
            edges,
        })
    }

    /// Deterministic byte string with `key(G) == key(H)` iff `G ≅ H`.
    ///
    /// Computed on the multiplicity-labeled simple support; parallel edges
    /// are interchangeable and do not enter the key beyond their count.
    pub fn canonical_key(&self) -> Vec<u8> {
        let support = canon::Support::of(self);
        let (_, cert) = canon::canonical_order(&support);
        let mut key = Vec::with_capacity(4 + 4 * cert.len());
        key.extend_from_slice(&(self.vertex_count() as u32).to_be_bytes());
        for word in cert {
            key.extend_from_slice(&word.to_be_bytes());
        }
        key
    }

    /// Finds an isomorphism witness, or `None` when the graphs differ.
    pub fn are_isomorphic(&self, other: &MultiGraph) -> Option<Isomorphism> {
        if self.vertex_count() != other.vertex_count()
            || self.edge_count() != other.edge_count()
        {
            return None;
        }
        let sup_a = canon::Support::of(self);
        let sup_b = canon::Support::of(other);
        let (order_a, cert_a) = canon::canonical_order(&sup_a);
        let (order_b, cert_b) = canon::canonical_order(&sup_b);
        if cert_a != cert_b {
            return None;
        }
        // Canonical position i holds order_a[i] in self and order_b[i] in
        // other, so order_b ∘ order_a⁻¹ is a vertex isomorphism.
        let mut vertex_map = vec![VertexId(0); self.vertex_count()];
        for i in 0..order_a.len() {
            vertex_map[order_a[i] as usize] = VertexId(order_b[i]);
        }
        // Parallel edges are interchangeable: match each parallel class in
        // ascending edge-id order.
        let mut edge_map = vec![EdgeId(0); self.edge_count()];
        let mut buckets: HashMap<(u32, u32), Vec<EdgeId>> = HashMap::new();
        for e in other.edges() {
            let (u, v) = other.ends(e);
            buckets.entry((u.0, v.0)).or_default().push(e);
        }
        for bucket in buckets.values_mut() {
            bucket.sort();
            bucket.reverse(); // pop() yields ascending order
        }
        for e in self.edges() {
            let (u, v) = self.ends(e);
            let (iu, iv) = (vertex_map[u.index()], vertex_map[v.index()]);
            let key = (iu.0.min(iv.0), iu.0.max(iv.0));
            let image = buckets
                .get_mut(&key)
                .and_then(|b| b.pop())
                .expect("equal canonical certificates imply matching parallel classes");
            edge_map[e.index()] = image;
        }
        Some(Isomorphism { vertex_map, edge_map })
    }
}
