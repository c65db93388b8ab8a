//! Graph morphisms with vertical edges.
//!
//! A morphism maps vertices to vertices and each edge either to an edge with
//! the matching endpoint images, or collapses it to the common image of its
//! endpoints (the edge is then *vertical*). Harmonicity asks that at every
//! source vertex the edges incident to the image vertex all have the same
//! number of preimages incident to the source vertex.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::multigraph::{EdgeId, MultiGraph, VertexId};

/// Image of an edge: a target edge, or collapsed to a vertex.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum EdgeImage {
    Edge(EdgeId),
    Collapsed,
}

/// A validated morphism between two multigraphs.
#[derive(Clone, Debug)]
pub struct GraphMorphism {
    source: Arc<MultiGraph>,
    target: Arc<MultiGraph>,
    vertex_map: Vec<VertexId>,
    edge_map: Vec<EdgeImage>,
}

impl GraphMorphism {
    /// Validates the incidence condition: each edge maps to an edge whose
    /// endpoints are exactly the images of its own, or is collapsed with
    /// both endpoint images equal.
    pub fn build(
        source: Arc<MultiGraph>,
        target: Arc<MultiGraph>,
        vertex_map: Vec<VertexId>,
        edge_map: Vec<EdgeImage>,
    ) -> Result<GraphMorphism> {
        assert_eq!(vertex_map.len(), source.vertex_count(), "vertex map must be total");
        assert_eq!(edge_map.len(), source.edge_count(), "edge map must be total");
        for v in &vertex_map {
            assert!(v.index() < target.vertex_count(), "vertex image out of range");
        }
        for e in source.edges() {
            let (x, y) = source.ends(e);
            let (ix, iy) = (vertex_map[x.index()], vertex_map[y.index()]);
            match edge_map[e.index()] {
                EdgeImage::Edge(f) => {
                    assert!(f.index() < target.edge_count(), "edge image out of range");
                    let (fu, fv) = target.ends(f);
                    let lo = VertexId(ix.0.min(iy.0));
                    let hi = VertexId(ix.0.max(iy.0));
                    if ix == iy || (fu, fv) != (lo, hi) {
                        return Err(Error::NotAMorphism {
                            edge: source.edge_name(e).to_string(),
                        });
                    }
                }
                EdgeImage::Collapsed => {
                    if ix != iy {
                        return Err(Error::EndpointMismatch {
                            edge: source.edge_name(e).to_string(),
                        });
                    }
                }
            }
        }
        Ok(GraphMorphism {
            source,
            target,
            vertex_map,
            edge_map,
        })
    }

    pub fn identity(graph: &Arc<MultiGraph>) -> GraphMorphism {
        GraphMorphism {
            source: Arc::clone(graph),
            target: Arc::clone(graph),
            vertex_map: graph.vertices().collect(),
            edge_map: graph.edges().map(EdgeImage::Edge).collect(),
        }
    }

    pub fn source(&self) -> &MultiGraph {
        &self.source
    }

    pub fn target(&self) -> &MultiGraph {
        &self.target
    }

    pub fn source_arc(&self) -> &Arc<MultiGraph> {
        &self.source
    }

    pub fn target_arc(&self) -> &Arc<MultiGraph> {
        &self.target
    }

    pub fn vertex_image(&self, x: VertexId) -> VertexId {
        self.vertex_map[x.index()]
    }

    pub fn edge_image(&self, e: EdgeId) -> EdgeImage {
        self.edge_map[e.index()]
    }

    /// True when the edge is collapsed to a vertex.
    pub fn is_vertical(&self, e: EdgeId) -> bool {
        self.edge_map[e.index()] == EdgeImage::Collapsed
    }

    /// True when every source edge is collapsed (image is a single vertex
    /// for connected sources).
    pub fn is_constant(&self) -> bool {
        self.edge_map.iter().all(|i| *i == EdgeImage::Collapsed)
    }

    /// Non-degenerate at `x`: some edge at `x` survives. Vertices of degree
    /// zero count as degenerate (their whole neighborhood is a point).
    pub fn is_nondegenerate_at(&self, x: VertexId) -> bool {
        self.source
            .incident_edges(x)
            .iter()
            .any(|&e| !self.is_vertical(e))
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.source.vertices().all(|x| self.is_nondegenerate_at(x))
    }

    /// Preimage counts at `x`: for each edge incident to the image of `x`,
    /// the number of its preimages incident to `x`.
    fn local_counts(&self, x: VertexId) -> Vec<(EdgeId, u64)> {
        let y = self.vertex_map[x.index()];
        self.target
            .incident_edges(y)
            .iter()
            .map(|&f| {
                let count = self
                    .source
                    .incident_edges(x)
                    .iter()
                    .filter(|&&e| self.edge_map[e.index()] == EdgeImage::Edge(f))
                    .count() as u64;
                (f, count)
            })
            .collect()
    }

    fn harmonic_at(&self, x: VertexId) -> bool {
        let counts = self.local_counts(x);
        counts.windows(2).all(|w| w[0].1 == w[1].1)
    }

    /// The per-vertex preimage count is independent of the chosen target edge.
    pub fn is_harmonic(&self) -> bool {
        self.source.vertices().all(|x| self.harmonic_at(x))
    }

    /// Horizontal and vertical multiplicity `(m, v)` at a vertex. Requires
    /// the morphism to be harmonic and non-degenerate at `x`.
    pub fn multiplicities(&self, x: VertexId) -> Result<(u64, u64)> {
        if !self.harmonic_at(x) {
            return Err(Error::NotHarmonicAt {
                vertex: self.source.vertex_name(x).to_string(),
            });
        }
        if !self.is_nondegenerate_at(x) {
            return Err(Error::DegenerateAt {
                vertex: self.source.vertex_name(x).to_string(),
            });
        }
        let counts = self.local_counts(x);
        let horizontal = counts[0].1;
        let vertical = self
            .source
            .incident_edges(x)
            .iter()
            .filter(|&&e| self.is_vertical(e))
            .count() as u64;
        Ok((horizontal, vertical))
    }

    /// Number of preimages of any target edge. Defined for nonconstant
    /// harmonic morphisms; the count is verified to be the same for every
    /// target edge.
    pub fn degree(&self) -> Result<u64> {
        if !self.is_harmonic() {
            return Err(Error::NotHarmonic);
        }
        if self.is_constant() {
            return Err(Error::ConstantMorphism);
        }
        let mut counts = vec![0u64; self.target.edge_count()];
        for e in self.source.edges() {
            if let EdgeImage::Edge(f) = self.edge_map[e.index()] {
                counts[f.index()] += 1;
            }
        }
        let first = counts.first().copied().unwrap_or(0);
        if counts.iter().any(|&c| c != first) || first == 0 {
            return Err(Error::NonconstantPreimageCount);
        }
        Ok(first)
    }

    /// `after ∘ before`. An edge is collapsed when either stage collapses it.
    pub fn compose(after: &GraphMorphism, before: &GraphMorphism) -> Result<GraphMorphism> {
        if *after.source != *before.target {
            return Err(Error::SourceTargetMismatch);
        }
        let vertex_map = before
            .vertex_map
            .iter()
            .map(|&v| after.vertex_map[v.index()])
            .collect();
        let edge_map = before
            .edge_map
            .iter()
            .map(|&img| match img {
                EdgeImage::Collapsed => EdgeImage::Collapsed,
                EdgeImage::Edge(f) => after.edge_map[f.index()],
            })
            .collect();
        GraphMorphism::build(
            Arc::clone(&before.source),
            Arc::clone(&after.target),
            vertex_map,
            edge_map,
        )
    }
}
