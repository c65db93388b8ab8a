//! Abelian voltage assignments and their derived covers.
//!
//! A voltage assignment labels each cotree edge of a base graph with an
//! element of a finite abelian group `(Z/m₁) × … × (Z/mₖ)`; tree edges carry
//! zero. The derived cover has vertex set `V(base) × group`, one edge
//! `(u, a) — (v, a + w(e))` per base edge `e` oriented `u → v`, and the
//! group acting by fiber translations (the deck group). The projection is an
//! unramified harmonic morphism of degree `|group|`, and base automorphisms
//! lift to the cover in deck-coset bundles.
//!
//! `macbeath` combines this with the genus-2 extremal pair: taking the
//! standard-basis voltages in `(Z/m)²` over the genus-2 graph and lifting
//! its order-6 group yields, for every `m ≥ 1`, a graph of genus `m² + 1`
//! carrying a harmonic group of order `6m²`.

use std::sync::Arc;

use crate::action::{ActionGroup, Automorphism};
use crate::error::{Error, Result};
use crate::families;
use crate::multigraph::{EdgeId, MultiGraph, VertexId};
use crate::ramification::{self, RamificationProfile};

/// Finite abelian group `(Z/m₁) × … × (Z/mₖ)` with row-major element order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VoltageGroup {
    moduli: Vec<u64>,
}

impl VoltageGroup {
    pub fn new(moduli: Vec<u64>) -> VoltageGroup {
        assert!(moduli.iter().all(|&m| m >= 1), "moduli must be positive");
        VoltageGroup { moduli }
    }

    /// `(Z/m)^k`.
    pub fn homocyclic(modulus: u64, rank: usize) -> VoltageGroup {
        VoltageGroup::new(vec![modulus; rank])
    }

    pub fn rank(&self) -> usize {
        self.moduli.len()
    }

    pub fn moduli(&self) -> &[u64] {
        &self.moduli
    }

    pub fn order(&self) -> u64 {
        self.moduli.iter().product()
    }

    pub fn zero(&self) -> Vec<u64> {
        vec![0; self.moduli.len()]
    }

    pub fn is_zero(&self, a: &[u64]) -> bool {
        a.iter().all(|&x| x == 0)
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter()
            .zip(b)
            .zip(&self.moduli)
            .map(|((&x, &y), &m)| (x + y) % m)
            .collect()
    }

    pub fn negate(&self, a: &[u64]) -> Vec<u64> {
        a.iter()
            .zip(&self.moduli)
            .map(|(&x, &m)| (m - x) % m)
            .collect()
    }

    /// Row-major index of an element.
    pub fn index_of(&self, a: &[u64]) -> usize {
        let mut idx = 0usize;
        for (x, m) in a.iter().zip(&self.moduli) {
            idx = idx * (*m as usize) + *x as usize;
        }
        idx
    }

    pub fn element(&self, mut idx: usize) -> Vec<u64> {
        let mut out = vec![0u64; self.moduli.len()];
        for i in (0..self.moduli.len()).rev() {
            let m = self.moduli[i] as usize;
            out[i] = (idx % m) as u64;
            idx /= m;
        }
        out
    }

    pub fn elements(&self) -> impl Iterator<Item = Vec<u64>> + '_ {
        (0..self.order() as usize).map(|i| self.element(i))
    }

    /// i-th standard generator.
    pub fn basis(&self, i: usize) -> Vec<u64> {
        let mut out = self.zero();
        out[i] = 1 % self.moduli[i];
        out
    }
}

/// A base graph with a spanning tree, a fixed orientation per edge
/// (lexicographically smaller endpoint name first), and a group voltage per
/// edge, zero on tree edges. Traversing an edge against its orientation
/// contributes the negated voltage.
#[derive(Clone, Debug)]
pub struct VoltageAssignment {
    base: Arc<MultiGraph>,
    tree: Vec<EdgeId>,
    in_tree: Vec<bool>,
    /// (tail, head) per edge.
    orientation: Vec<(VertexId, VertexId)>,
    group: VoltageGroup,
    voltages: Vec<Vec<u64>>,
}

/// Deterministic spanning tree: grow from the lexicographically least vertex
/// name, always adding the least-named edge leaving the visited set.
pub fn spanning_tree(graph: &MultiGraph) -> Result<Vec<EdgeId>> {
    if !graph.is_connected() {
        return Err(Error::Disconnected);
    }
    let root = graph
        .vertices()
        .min_by_key(|&v| graph.vertex_name(v).to_string())
        .expect("graphs are nonempty");
    let mut visited = vec![false; graph.vertex_count()];
    visited[root.index()] = true;
    let mut tree = Vec::new();
    while tree.len() + 1 < graph.vertex_count() {
        let mut best: Option<(String, EdgeId, VertexId)> = None;
        for v in graph.vertices().filter(|&v| visited[v.index()]) {
            for &e in graph.incident_edges(v) {
                let w = graph.other_end(e, v);
                if visited[w.index()] {
                    continue;
                }
                let name = graph.edge_name(e).to_string();
                if best.as_ref().is_none_or(|(n, _, _)| name < *n) {
                    best = Some((name, e, w));
                }
            }
        }
        let (_, e, w) = best.expect("connected graphs always have a crossing edge");
        visited[w.index()] = true;
        tree.push(e);
    }
    tree.sort();
    Ok(tree)
}

fn orientation_by_name(graph: &MultiGraph) -> Vec<(VertexId, VertexId)> {
    graph
        .edges()
        .map(|e| {
            let (u, v) = graph.ends(e);
            if graph.vertex_name(u) <= graph.vertex_name(v) {
                (u, v)
            } else {
                (v, u)
            }
        })
        .collect()
}

fn validate_tree(graph: &MultiGraph, tree: &[EdgeId]) -> Result<Vec<bool>> {
    if tree.len() + 1 != graph.vertex_count() {
        return Err(Error::BadTree {
            detail: format!(
                "expected {} edges, got {}",
                graph.vertex_count() - 1,
                tree.len()
            ),
        });
    }
    let mut in_tree = vec![false; graph.edge_count()];
    for &e in tree {
        if e.index() >= graph.edge_count() {
            return Err(Error::BadTree {
                detail: "unknown edge id".to_string(),
            });
        }
        if in_tree[e.index()] {
            return Err(Error::BadTree {
                detail: format!("edge '{}' listed twice", graph.edge_name(e)),
            });
        }
        in_tree[e.index()] = true;
    }
    // Spanning: every vertex reachable along tree edges.
    let mut seen = vec![false; graph.vertex_count()];
    let mut stack = vec![VertexId(0)];
    seen[0] = true;
    let mut count = 1;
    while let Some(v) = stack.pop() {
        for &e in graph.incident_edges(v) {
            if !in_tree[e.index()] {
                continue;
            }
            let w = graph.other_end(e, v);
            if !seen[w.index()] {
                seen[w.index()] = true;
                count += 1;
                stack.push(w);
            }
        }
    }
    if count != graph.vertex_count() {
        return Err(Error::BadTree {
            detail: "edge set does not span the graph".to_string(),
        });
    }
    Ok(in_tree)
}

impl VoltageAssignment {
    /// Standard homology voltages: the i-th cotree edge (in edge-name order)
    /// carries the i-th basis vector of `(Z/m)^g`, tree edges carry zero.
    pub fn homology(base: Arc<MultiGraph>, tree: Vec<EdgeId>, modulus: u64) -> Result<VoltageAssignment> {
        assert!(modulus >= 1, "modulus must be positive");
        let in_tree = validate_tree(&base, &tree)?;
        let mut cotree: Vec<EdgeId> = base.edges().filter(|e| !in_tree[e.index()]).collect();
        cotree.sort_by_key(|&e| base.edge_name(e).to_string());
        let group = VoltageGroup::homocyclic(modulus, cotree.len());
        let mut voltages = vec![group.zero(); base.edge_count()];
        for (i, &e) in cotree.iter().enumerate() {
            voltages[e.index()] = group.basis(i);
        }
        let orientation = orientation_by_name(&base);
        Ok(VoltageAssignment {
            base,
            tree,
            in_tree,
            orientation,
            group,
            voltages,
        })
    }

    /// Custom voltages; tree edges must carry zero.
    pub fn with_voltages(
        base: Arc<MultiGraph>,
        tree: Vec<EdgeId>,
        group: VoltageGroup,
        voltages: Vec<Vec<u64>>,
    ) -> Result<VoltageAssignment> {
        let in_tree = validate_tree(&base, &tree)?;
        if voltages.len() != base.edge_count() {
            return Err(Error::BadTree {
                detail: "one voltage per edge required".to_string(),
            });
        }
        for (i, v) in voltages.iter().enumerate() {
            if v.len() != group.rank() || v.iter().zip(group.moduli()).any(|(&x, &m)| x >= m) {
                return Err(Error::BadTree {
                    detail: format!("voltage out of range on edge {i}"),
                });
            }
            if in_tree[i] && !group.is_zero(v) {
                return Err(Error::BadTree {
                    detail: "tree edges must carry zero voltage".to_string(),
                });
            }
        }
        let orientation = orientation_by_name(&base);
        Ok(VoltageAssignment {
            base,
            tree,
            in_tree,
            orientation,
            group,
            voltages,
        })
    }

    pub fn base(&self) -> &Arc<MultiGraph> {
        &self.base
    }

    pub fn tree(&self) -> &[EdgeId] {
        &self.tree
    }

    pub fn is_tree_edge(&self, e: EdgeId) -> bool {
        self.in_tree[e.index()]
    }

    pub fn group(&self) -> &VoltageGroup {
        &self.group
    }

    pub fn voltage(&self, e: EdgeId) -> &[u64] {
        &self.voltages[e.index()]
    }

    pub fn orientation(&self, e: EdgeId) -> (VertexId, VertexId) {
        self.orientation[e.index()]
    }
}

/// A derived cover: the covering graph, the projection, and the deck group
/// of fiber translations.
#[derive(Clone, Debug)]
pub struct DerivedCover {
    pub cover: Arc<MultiGraph>,
    pub projection: crate::morphism::GraphMorphism,
    pub deck: ActionGroup,
    group: VoltageGroup,
    /// Fiber index shift per base edge: `a ↦ a + w(e)` as index maps.
    shift: Vec<Vec<usize>>,
    orientation: Vec<(VertexId, VertexId)>,
    base: Arc<MultiGraph>,
}

fn group_tag(elem: &[u64]) -> String {
    let parts: Vec<String> = elem.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}

/// Builds the derived cover of a voltage assignment. Fails with
/// `DisconnectedCover` when the voltages do not generate the group.
pub fn derived_cover(va: &VoltageAssignment) -> Result<DerivedCover> {
    let base = Arc::clone(va.base());
    let group = va.group().clone();
    let fiber = group.order() as usize;
    let n = base.vertex_count();
    let m = base.edge_count();

    let mut vertices = Vec::with_capacity(n * fiber);
    for v in base.vertices() {
        for a in group.elements() {
            vertices.push(format!("{}@{}", base.vertex_name(v), group_tag(&a)));
        }
    }
    // Fiber shifts per edge.
    let mut shift = Vec::with_capacity(m);
    for e in base.edges() {
        let w = va.voltage(e).to_vec();
        let table: Vec<usize> = (0..fiber)
            .map(|a| group.index_of(&group.add(&group.element(a), &w)))
            .collect();
        shift.push(table);
    }
    let mut edges = Vec::with_capacity(m * fiber);
    for e in base.edges() {
        let (tail, head) = va.orientation(e);
        for a in 0..fiber {
            let b = shift[e.index()][a];
            edges.push((
                format!("{}@{}", base.edge_name(e), group_tag(&group.element(a))),
                vertices[tail.index() * fiber + a].clone(),
                vertices[head.index() * fiber + b].clone(),
            ));
        }
    }
    let cover = Arc::new(MultiGraph::build_graph(vertices, edges)?);
    if !cover.is_connected() {
        return Err(Error::DisconnectedCover);
    }

    let vertex_map = cover
        .vertices()
        .map(|cv| VertexId((cv.index() / fiber) as u32))
        .collect();
    let edge_map = cover
        .edges()
        .map(|ce| crate::morphism::EdgeImage::Edge(EdgeId((ce.index() / fiber) as u32)))
        .collect();
    let projection = crate::morphism::GraphMorphism::build(
        Arc::clone(&cover),
        Arc::clone(&base),
        vertex_map,
        edge_map,
    )?;

    // Deck group: translation by b sends fiber index a to index(a + b).
    let mut deck_elements = Vec::with_capacity(fiber);
    for b in group.elements() {
        let translate: Vec<usize> = (0..fiber)
            .map(|a| group.index_of(&group.add(&group.element(a), &b)))
            .collect();
        let vperm: Vec<VertexId> = cover
            .vertices()
            .map(|cv| {
                let (v, a) = (cv.index() / fiber, cv.index() % fiber);
                VertexId((v * fiber + translate[a]) as u32)
            })
            .collect();
        let eperm: Vec<EdgeId> = cover
            .edges()
            .map(|ce| {
                let (e, a) = (ce.index() / fiber, ce.index() % fiber);
                EdgeId((e * fiber + translate[a]) as u32)
            })
            .collect();
        deck_elements.push(Automorphism::build(&cover, vperm, eperm)?);
    }
    let generators: Vec<Automorphism> = (0..group.rank())
        .map(|i| deck_elements[group.index_of(&group.basis(i))].clone())
        .collect();
    let deck = ActionGroup::from_closed_elements(Arc::clone(&cover), deck_elements, generators);

    Ok(DerivedCover {
        cover,
        projection,
        deck,
        group,
        shift,
        orientation: base.edges().map(|e| va.orientation(e)).collect(),
        base,
    })
}

impl DerivedCover {
    pub fn group(&self) -> &VoltageGroup {
        &self.group
    }

    pub fn base(&self) -> &Arc<MultiGraph> {
        &self.base
    }

    fn fiber(&self) -> usize {
        self.group.order() as usize
    }

    fn cover_vertex(&self, v: VertexId, a: usize) -> VertexId {
        VertexId((v.index() * self.fiber() + a) as u32)
    }

    fn cover_edge(&self, e: EdgeId, a: usize) -> EdgeId {
        EdgeId((e.index() * self.fiber() + a) as u32)
    }
}

/// All lifts of a base automorphism to the cover: zero, when the
/// automorphism does not lift, or exactly `|group|` lifts forming a single
/// deck coset. Lifting fixes the image of one fiber point and propagates
/// along cover edges, checking voltage consistency.
pub fn lift_automorphism(gamma: &Automorphism, dc: &DerivedCover) -> Vec<Automorphism> {
    let fiber = dc.fiber();
    let cover = &dc.cover;
    let n_cover = cover.vertex_count();
    let m_cover = cover.edge_count();

    let mut lift_v: Vec<Option<u32>> = vec![None; n_cover];
    let mut lift_e: Vec<Option<u32>> = vec![None; m_cover];
    let base_point = VertexId(0);
    let start = dc.cover_vertex(base_point, 0);
    let image_start = dc.cover_vertex(gamma.vertex_image(base_point), 0);
    lift_v[start.index()] = Some(image_start.0);
    let mut stack = vec![start];

    while let Some(cv) = stack.pop() {
        let image_cv = VertexId(lift_v[cv.index()].expect("stacked vertices have images"));
        let b = image_cv.index() % fiber;
        let u = VertexId((cv.index() / fiber) as u32);
        let a = cv.index() % fiber;
        for &ce in cover.incident_edges(cv) {
            let e = EdgeId((ce.index() / fiber) as u32);
            let c = ce.index() % fiber;
            let (tail, head) = dc.orientation[e.index()];
            // The other endpoint of ce as (vertex, fiber) data.
            let (other_vertex, other_fiber) = if u == tail && c == a {
                (head, dc.shift[e.index()][c])
            } else {
                (tail, c)
            };
            let ge = gamma.edge_image(e);
            let (gtail, ghead) = dc.orientation[ge.index()];
            let gu = gamma.vertex_image(u);
            // Unique cover edge over ge incident to (gu, b).
            let (image_fiber, image_other) = if gu == gtail {
                (b, (ghead, dc.shift[ge.index()][b]))
            } else {
                debug_assert_eq!(gu, ghead);
                // c' + w(ge) = b
                let c_prime = (0..fiber)
                    .find(|&x| dc.shift[ge.index()][x] == b)
                    .expect("fiber shifts are bijections");
                (c_prime, (gtail, c_prime))
            };
            let image_edge = dc.cover_edge(ge, image_fiber);
            match lift_e[ce.index()] {
                None => lift_e[ce.index()] = Some(image_edge.0),
                Some(existing) if existing == image_edge.0 => {}
                Some(_) => return Vec::new(), // voltage inconsistency: no lift
            }
            let ov = dc.cover_vertex(other_vertex, other_fiber);
            let image_ov = dc.cover_vertex(image_other.0, image_other.1);
            match lift_v[ov.index()] {
                None => {
                    lift_v[ov.index()] = Some(image_ov.0);
                    stack.push(ov);
                }
                Some(existing) if existing == image_ov.0 => {}
                Some(_) => return Vec::new(),
            }
        }
    }

    let vertex_perm: Vec<VertexId> = lift_v
        .into_iter()
        .map(|v| VertexId(v.expect("cover is connected")))
        .collect();
    let edge_perm: Vec<EdgeId> = lift_e
        .into_iter()
        .map(|e| EdgeId(e.expect("cover is connected")))
        .collect();
    let lift0 = Automorphism::build(cover, vertex_perm, edge_perm)
        .expect("propagated lift is an automorphism");
    dc.deck
        .elements()
        .iter()
        .map(|t| t.compose(&lift0))
        .collect()
}

/// The cover family attaining the order bound: for `m ≥ 1`, a graph of
/// genus `m² + 1` carrying a harmonic group of order `6m²`, built as the
/// `(Z/m)²` homology cover of the genus-2 extremal graph with all lifts of
/// its order-6 group.
#[derive(Clone, Debug)]
pub struct MacbeathCover {
    pub graph: Arc<MultiGraph>,
    pub group: ActionGroup,
    pub profile: RamificationProfile,
}

pub fn macbeath(m: u64, budget: usize) -> Result<MacbeathCover> {
    assert!(m >= 1, "m must be at least 1");
    let expected_order = 6 * m * m;
    if expected_order as usize > budget {
        return Err(Error::BudgetExceeded {
            what: "lifted group order",
            limit: budget,
        });
    }
    let base_family = families::hurwitz_genus2();
    let tree = spanning_tree(&base_family.graph)?;
    let va = VoltageAssignment::homology(Arc::clone(&base_family.graph), tree, m)?;
    let dc = derived_cover(&va)?;

    let mut lifts = Vec::new();
    for gamma in base_family.group.elements() {
        let mut these = lift_automorphism(gamma, &dc);
        assert!(
            !these.is_empty(),
            "base automorphisms always lift to homology covers"
        );
        lifts.append(&mut these);
    }
    let group = ActionGroup::generate(Arc::clone(&dc.cover), lifts, budget)?;
    assert_eq!(group.order(), expected_order, "lifted group order is 6m^2");
    assert!(group.is_harmonic(), "lifted action is harmonic");
    let profile = ramification::profile(&group)?;
    assert_eq!(profile.genus, m * m + 1, "cover genus is m^2 + 1");
    assert_eq!(profile.quotient_genus, 0);
    assert_eq!(profile.ramification_number, ramification::rational(7, 3));
    Ok(MacbeathCover {
        graph: Arc::clone(&dc.cover),
        group,
        profile,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::DEFAULT_BUDGET;
    use crate::ramification::rational;

    fn cycle(n: usize) -> Arc<MultiGraph> {
        let vertices: Vec<String> = (0..n).map(|i| format!("c{i}")).collect();
        let edges: Vec<(String, String, String)> = (0..n)
            .map(|i| (format!("k{i}"), format!("c{i}"), format!("c{}", (i + 1) % n)))
            .collect();
        Arc::new(MultiGraph::build_graph(vertices, edges).unwrap())
    }

    #[test]
    fn spanning_tree_of_a_tree_is_everything() {
        let path = Arc::new(
            MultiGraph::from_literals(
                &["a", "b", "c"],
                &[("e1", "a", "b"), ("e2", "b", "c")],
            )
            .unwrap(),
        );
        let tree = spanning_tree(&path).unwrap();
        assert_eq!(tree.len(), 2);
    }

    #[test]
    fn spanning_tree_prefers_lexicographically_first_edges() {
        let double = Arc::new(
            MultiGraph::from_literals(&["a", "b"], &[("e2", "a", "b"), ("e1", "a", "b")]).unwrap(),
        );
        let tree = spanning_tree(&double).unwrap();
        assert_eq!(tree.len(), 1);
        assert_eq!(double.edge_name(tree[0]), "e1");
    }

    #[test]
    fn spanning_tree_of_genus2_graph_has_two_cotree_edges() {
        let fam = families::hurwitz_genus2();
        let tree = spanning_tree(&fam.graph).unwrap();
        assert_eq!(tree.len(), 7);
        assert_eq!(fam.graph.edge_count() - tree.len(), 2);
    }

    #[test]
    fn homology_voltages_use_standard_basis() {
        let fam = families::hurwitz_genus2();
        let tree = spanning_tree(&fam.graph).unwrap();
        let va = VoltageAssignment::homology(Arc::clone(&fam.graph), tree, 2).unwrap();
        assert_eq!(va.group().order(), 4);
        let mut basis_seen = Vec::new();
        for e in fam.graph.edges() {
            if va.is_tree_edge(e) {
                assert!(va.group().is_zero(va.voltage(e)));
            } else {
                basis_seen.push(va.voltage(e).to_vec());
            }
        }
        basis_seen.sort();
        assert_eq!(basis_seen, vec![vec![0, 1], vec![1, 0]]);
    }

    #[test]
    fn homology_voltages_on_cycle() {
        let c3 = cycle(3);
        let tree = spanning_tree(&c3).unwrap();
        let va = VoltageAssignment::homology(Arc::clone(&c3), tree, 3).unwrap();
        assert_eq!(va.group().rank(), 1);
        assert_eq!(va.group().order(), 3);
    }

    #[test]
    fn homology_voltages_on_tree_are_trivial() {
        let path = Arc::new(
            MultiGraph::from_literals(&["a", "b"], &[("e", "a", "b")]).unwrap(),
        );
        let tree = spanning_tree(&path).unwrap();
        let va = VoltageAssignment::homology(Arc::clone(&path), tree, 5).unwrap();
        assert_eq!(va.group().rank(), 0);
        assert_eq!(va.group().order(), 1);
        let dc = derived_cover(&va).unwrap();
        assert!(dc.cover.are_isomorphic(&path).is_some());
    }

    #[test]
    fn bad_trees_are_rejected() {
        let fam = families::hurwitz_genus2();
        let err = VoltageAssignment::homology(Arc::clone(&fam.graph), vec![], 2).unwrap_err();
        assert!(matches!(err, Error::BadTree { .. }));
        // Right size but not spanning: the three parallel hub edges plus
        // four pendants leave a leaf unreached.
        let mut bad: Vec<EdgeId> = ["m1", "m2", "m3", "l1", "l2", "l3", "r1"]
            .iter()
            .map(|n| fam.graph.edge_by_name(n).unwrap())
            .collect();
        bad.sort();
        let err = VoltageAssignment::homology(Arc::clone(&fam.graph), bad, 2).unwrap_err();
        assert!(matches!(err, Error::BadTree { .. }));
    }

    #[test]
    fn derived_cover_of_genus2_graph_with_m2() {
        let fam = families::hurwitz_genus2();
        let tree = spanning_tree(&fam.graph).unwrap();
        let va = VoltageAssignment::homology(Arc::clone(&fam.graph), tree, 2).unwrap();
        let dc = derived_cover(&va).unwrap();
        assert_eq!(dc.cover.vertex_count(), 32);
        assert_eq!(dc.cover.edge_count(), 36);
        assert_eq!(dc.cover.genus().unwrap(), 5); // 2²·(2-1)+1
        assert!(dc.projection.is_harmonic());
        assert!(dc.projection.is_nondegenerate());
        assert_eq!(dc.projection.degree().unwrap(), 4);
        for x in dc.cover.vertices() {
            assert_eq!(dc.projection.multiplicities(x).unwrap(), (1, 0));
        }
    }

    #[test]
    fn cyclic_double_cover_of_triangle_is_hexagon() {
        let c3 = cycle(3);
        let tree = spanning_tree(&c3).unwrap();
        let va = VoltageAssignment::homology(Arc::clone(&c3), tree, 2).unwrap();
        let dc = derived_cover(&va).unwrap();
        assert_eq!(dc.cover.genus().unwrap(), 1);
        let hexagon = cycle(6);
        assert!(dc.cover.are_isomorphic(&hexagon).is_some());
        // Unramified deck action on a genus-1 cover: R = 0 and the genus
        // identity degenerates to 0 = n·0.
        let p = crate::ramification::profile(&dc.deck).unwrap();
        assert!(p.branch_points.is_empty());
        assert_eq!(p.ramification_number, rational(0, 1));
        assert_eq!(p.quotient_genus, 1);
        assert!(crate::ramification::verify_riemann_hurwitz(&p));
    }

    #[test]
    fn zero_voltages_disconnect() {
        let fam = families::hurwitz_genus2();
        let tree = spanning_tree(&fam.graph).unwrap();
        let group = VoltageGroup::homocyclic(2, 2);
        let voltages = vec![group.zero(); fam.graph.edge_count()];
        let va =
            VoltageAssignment::with_voltages(Arc::clone(&fam.graph), tree, group, voltages)
                .unwrap();
        assert_eq!(derived_cover(&va).unwrap_err(), Error::DisconnectedCover);
    }

    #[test]
    fn identity_lifts_to_the_deck_group() {
        let fam = families::hurwitz_genus2();
        let tree = spanning_tree(&fam.graph).unwrap();
        let va = VoltageAssignment::homology(Arc::clone(&fam.graph), tree, 2).unwrap();
        let dc = derived_cover(&va).unwrap();
        let id = Automorphism::identity(&fam.graph);
        let mut lifts = lift_automorphism(&id, &dc);
        lifts.sort();
        let mut deck: Vec<Automorphism> = dc.deck.elements().to_vec();
        deck.sort();
        assert_eq!(lifts, deck);
    }

    #[test]
    fn all_base_elements_lift_and_commute_with_projection() {
        let fam = families::hurwitz_genus2();
        let tree = spanning_tree(&fam.graph).unwrap();
        let va = VoltageAssignment::homology(Arc::clone(&fam.graph), tree, 2).unwrap();
        let dc = derived_cover(&va).unwrap();
        for gamma in fam.group.elements() {
            let lifts = lift_automorphism(gamma, &dc);
            assert_eq!(lifts.len(), 4);
            for lift in &lifts {
                // projection ∘ lift = gamma ∘ projection
                for cv in dc.cover.vertices() {
                    assert_eq!(
                        dc.projection.vertex_image(lift.vertex_image(cv)),
                        gamma.vertex_image(dc.projection.vertex_image(cv))
                    );
                }
                for ce in dc.cover.edges() {
                    let lhs = match dc.projection.edge_image(lift.edge_image(ce)) {
                        crate::morphism::EdgeImage::Edge(e) => e,
                        _ => unreachable!("projections collapse nothing"),
                    };
                    let rhs = match dc.projection.edge_image(ce) {
                        crate::morphism::EdgeImage::Edge(e) => gamma.edge_image(e),
                        _ => unreachable!(),
                    };
                    assert_eq!(lhs, rhs);
                }
            }
            // The lift set is one deck coset.
            let first = &lifts[0];
            let mut coset: Vec<Automorphism> = dc
                .deck
                .elements()
                .iter()
                .map(|t| t.compose(first))
                .collect();
            coset.sort();
            let mut sorted = lifts.clone();
            sorted.sort();
            assert_eq!(sorted, coset);
        }
    }

    #[test]
    fn macbeath_small_members() {
        let m1 = macbeath(1, DEFAULT_BUDGET).unwrap();
        assert_eq!(m1.profile.genus, 2);
        assert_eq!(m1.group.order(), 6);

        let m2 = macbeath(2, DEFAULT_BUDGET).unwrap();
        assert_eq!(m2.profile.genus, 5);
        assert_eq!(m2.group.order(), 24);
        assert_eq!(m2.profile.quotient_genus, 0);
        assert_eq!(m2.profile.ramification_number, rational(7, 3));
    }

    #[test]
    fn macbeath_respects_budget() {
        assert_eq!(
            macbeath(3, 10).unwrap_err(),
            Error::BudgetExceeded {
                what: "lifted group order",
                limit: 10
            }
        );
    }
}
