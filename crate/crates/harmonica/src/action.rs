//! Automorphism groups acting on multigraphs: quotients, orbits, and the
//! two harmonicity tests.
//!
//! An action is harmonic when every subgroup's quotient morphism is harmonic
//! and non-degenerate. Equivalently (and much cheaper): no non-identity
//! element fixes a vertex together with an incident edge, and no vertex has
//! its whole neighborhood inside its own orbit. Both tests are provided and
//! cross-validated; the criterion form returns a concrete witness on failure.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use crate::canon;
use crate::error::{Error, Result};
use crate::morphism::{EdgeImage, GraphMorphism};
use crate::multigraph::{EdgeId, MultiGraph, VertexId};

/// Default cap on group orders and closures; the CLI overrides it via
/// `HARMONICA_BUDGET`.
pub const DEFAULT_BUDGET: usize = 256;

/// A compatible pair of vertex and edge permutations. Parallel edges may be
/// permuted independently of the vertex map.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Automorphism {
    vertex_perm: Vec<u32>,
    edge_perm: Vec<u32>,
}

impl Automorphism {
    /// Validates bijectivity and incidence compatibility on `graph`.
    pub fn build(
        graph: &MultiGraph,
        vertex_perm: Vec<VertexId>,
        edge_perm: Vec<EdgeId>,
    ) -> Result<Automorphism> {
        let n = graph.vertex_count();
        let m = graph.edge_count();
        if vertex_perm.len() != n || edge_perm.len() != m {
            return Err(Error::NotBijective);
        }
        let mut vseen = vec![false; n];
        for v in &vertex_perm {
            if v.index() >= n || vseen[v.index()] {
                return Err(Error::NotBijective);
            }
            vseen[v.index()] = true;
        }
        let mut eseen = vec![false; m];
        for e in &edge_perm {
            if e.index() >= m || eseen[e.index()] {
                return Err(Error::NotBijective);
            }
            eseen[e.index()] = true;
        }
        for e in graph.edges() {
            let (u, v) = graph.ends(e);
            let (iu, iv) = (vertex_perm[u.index()], vertex_perm[v.index()]);
            let (a, b) = graph.ends(edge_perm[e.index()]);
            if (a, b) != (VertexId(iu.0.min(iv.0)), VertexId(iu.0.max(iv.0))) {
                return Err(Error::IncidenceViolation {
                    edge: graph.edge_name(e).to_string(),
                });
            }
        }
        Ok(Automorphism {
            vertex_perm: vertex_perm.into_iter().map(|v| v.0).collect(),
            edge_perm: edge_perm.into_iter().map(|e| e.0).collect(),
        })
    }

    /// Builds from name lists, for tests and family constructors: pairs of
    /// (vertex, image) and (edge, image).
    pub fn from_names(
        graph: &MultiGraph,
        vertex_pairs: &[(&str, &str)],
        edge_pairs: &[(&str, &str)],
    ) -> Result<Automorphism> {
        let mut vperm: Vec<VertexId> = graph.vertices().collect();
        for (from, to) in vertex_pairs {
            vperm[graph.vertex_by_name(from)?.index()] = graph.vertex_by_name(to)?;
        }
        let mut eperm: Vec<EdgeId> = graph.edges().collect();
        for (from, to) in edge_pairs {
            eperm[graph.edge_by_name(from)?.index()] = graph.edge_by_name(to)?;
        }
        Automorphism::build(graph, vperm, eperm)
    }

    pub fn identity(graph: &MultiGraph) -> Automorphism {
        Automorphism {
            vertex_perm: (0..graph.vertex_count() as u32).collect(),
            edge_perm: (0..graph.edge_count() as u32).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.vertex_perm.iter().enumerate().all(|(i, &v)| v == i as u32)
            && self.edge_perm.iter().enumerate().all(|(i, &e)| e == i as u32)
    }

    pub fn vertex_image(&self, v: VertexId) -> VertexId {
        VertexId(self.vertex_perm[v.index()])
    }

    pub fn edge_image(&self, e: EdgeId) -> EdgeId {
        EdgeId(self.edge_perm[e.index()])
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Automorphism) -> Automorphism {
        Automorphism {
            vertex_perm: other
                .vertex_perm
                .iter()
                .map(|&v| self.vertex_perm[v as usize])
                .collect(),
            edge_perm: other
                .edge_perm
                .iter()
                .map(|&e| self.edge_perm[e as usize])
                .collect(),
        }
    }

    pub fn inverse(&self) -> Automorphism {
        let mut vertex_perm = vec![0u32; self.vertex_perm.len()];
        for (i, &v) in self.vertex_perm.iter().enumerate() {
            vertex_perm[v as usize] = i as u32;
        }
        let mut edge_perm = vec![0u32; self.edge_perm.len()];
        for (i, &e) in self.edge_perm.iter().enumerate() {
            edge_perm[e as usize] = i as u32;
        }
        Automorphism { vertex_perm, edge_perm }
    }

    pub fn order(&self) -> u64 {
        let mut power = self.clone();
        let mut k = 1;
        while !power.is_identity() {
            power = self.compose(&power);
            k += 1;
        }
        k
    }

    /// Cycle notation on vertex and edge names, for diagnostics.
    pub fn describe(&self, graph: &MultiGraph) -> String {
        fn cycles(perm: &[u32], name: &dyn Fn(usize) -> String) -> String {
            let mut seen = vec![false; perm.len()];
            let mut out = String::new();
            for start in 0..perm.len() {
                if seen[start] || perm[start] as usize == start {
                    seen[start] = true;
                    continue;
                }
                let mut cycle = Vec::new();
                let mut i = start;
                while !seen[i] {
                    seen[i] = true;
                    cycle.push(name(i));
                    i = perm[i] as usize;
                }
                out.push('(');
                out.push_str(&cycle.join(" "));
                out.push(')');
            }
            if out.is_empty() {
                "id".to_string()
            } else {
                out
            }
        }
        let v = cycles(&self.vertex_perm, &|i| {
            graph.vertex_name(VertexId(i as u32)).to_string()
        });
        let e = cycles(&self.edge_perm, &|i| {
            graph.edge_name(EdgeId(i as u32)).to_string()
        });
        format!("vertices {v}, edges {e}")
    }
}

/// Orbit and stabilizer data of an action.
#[derive(Clone, Debug)]
pub struct OrbitData {
    pub vertex_orbits: Vec<Vec<VertexId>>,
    pub edge_orbits: Vec<Vec<EdgeId>>,
    /// Orbit index per vertex / edge.
    pub vertex_orbit_of: Vec<usize>,
    pub edge_orbit_of: Vec<usize>,
    /// Stabilizer order per vertex.
    pub stabilizer_order: Vec<u64>,
}

/// Outcome of the criterion-based harmonicity test, with a witness on failure.
#[derive(Clone, Debug)]
pub enum HarmonicVerdict {
    Harmonic,
    /// A non-identity element fixes `vertex` and the incident `edge`.
    FixedFlag {
        element: Automorphism,
        vertex: VertexId,
        edge: EdgeId,
    },
    /// Every neighbor of `vertex` lies in its orbit, so every quotient by a
    /// subgroup containing a suitable element is degenerate there.
    EngulfedNeighborhood { vertex: VertexId },
}

impl HarmonicVerdict {
    pub fn is_harmonic(&self) -> bool {
        matches!(self, HarmonicVerdict::Harmonic)
    }
}

/// A finite group of automorphisms of a fixed graph, closed under
/// composition and inverses and stored in canonical element order.
#[derive(Clone, Debug)]
pub struct ActionGroup {
    graph: Arc<MultiGraph>,
    elements: Vec<Automorphism>,
    generators: Vec<Automorphism>,
}

/// Closure of a generating set, capped at `budget` elements.
fn close(
    graph: &MultiGraph,
    generators: &[Automorphism],
    budget: usize,
) -> Result<Vec<Automorphism>> {
    let identity = Automorphism::identity(graph);
    let mut elements: BTreeSet<Automorphism> = BTreeSet::new();
    elements.insert(identity);
    let mut frontier: Vec<Automorphism> = Vec::new();
    for g in generators {
        if elements.insert(g.clone()) {
            frontier.push(g.clone());
        }
    }
    while let Some(g) = frontier.pop() {
        for h in generators {
            for product in [g.compose(h), h.compose(&g)] {
                if !elements.contains(&product) {
                    if elements.len() >= budget {
                        return Err(Error::ClosureBudgetExceeded { limit: budget });
                    }
                    elements.insert(product.clone());
                    frontier.push(product);
                }
            }
        }
    }
    Ok(elements.into_iter().collect())
}

impl ActionGroup {
    /// Generates the closure of `generators`, capped at `budget` elements.
    pub fn generate(
        graph: Arc<MultiGraph>,
        generators: Vec<Automorphism>,
        budget: usize,
    ) -> Result<ActionGroup> {
        for g in &generators {
            debug_assert_eq!(g.vertex_perm.len(), graph.vertex_count());
            debug_assert_eq!(g.edge_perm.len(), graph.edge_count());
        }
        let elements = close(&graph, &generators, budget)?;
        Ok(ActionGroup {
            graph,
            elements,
            generators,
        })
    }

    pub fn trivial(graph: Arc<MultiGraph>) -> ActionGroup {
        let id = Automorphism::identity(&graph);
        ActionGroup {
            graph,
            elements: vec![id],
            generators: Vec::new(),
        }
    }

    /// Wraps an element list already known to be a closed group (verified in
    /// debug builds). Used for deck groups, whose closure is structural.
    pub(crate) fn from_closed_elements(
        graph: Arc<MultiGraph>,
        mut elements: Vec<Automorphism>,
        generators: Vec<Automorphism>,
    ) -> ActionGroup {
        elements.sort();
        elements.dedup();
        #[cfg(debug_assertions)]
        {
            for a in &elements {
                for b in &elements {
                    assert!(
                        elements.binary_search(&a.compose(b)).is_ok(),
                        "element set is not closed under composition"
                    );
                }
            }
        }
        ActionGroup {
            graph,
            elements,
            generators,
        }
    }

    /// The full automorphism group. Vertex maps come from backtracking over
    /// the multiplicity-labeled support; each one extends by all products of
    /// symmetric groups on the parallel classes.
    pub fn automorphism_group(graph: &Arc<MultiGraph>, budget: usize) -> Result<ActionGroup> {
        let support = canon::Support::of(graph);
        let vertex_auts = canon::vertex_automorphisms(&support);
        let mut elements = Vec::new();
        for vperm in &vertex_auts {
            extend_vertex_automorphism(graph, &support, vperm, &mut |aut| {
                elements.push(aut);
                if elements.len() > budget {
                    return Err(Error::BudgetExceeded {
                        what: "automorphism group order",
                        limit: budget,
                    });
                }
                Ok(())
            })?;
        }
        elements.sort();
        let generators = elements.iter().filter(|a| !a.is_identity()).cloned().collect();
        Ok(ActionGroup {
            graph: Arc::clone(graph),
            elements,
            generators,
        })
    }

    /// Order of the full automorphism group without materializing it:
    /// the number of support automorphisms times the product of factorials
    /// of the parallel class sizes.
    pub fn automorphism_group_order(graph: &MultiGraph) -> u64 {
        let support = canon::Support::of(graph);
        let vertex_auts = canon::vertex_automorphisms(&support) ;
        let mut order = vertex_auts.len() as u64;
        for (_, _, ids) in &support.classes {
            order *= factorial(ids.len() as u64);
        }
        order
    }

    pub fn graph(&self) -> &Arc<MultiGraph> {
        &self.graph
    }

    pub fn order(&self) -> u64 {
        self.elements.len() as u64
    }

    pub fn elements(&self) -> &[Automorphism] {
        &self.elements
    }

    pub fn generators(&self) -> &[Automorphism] {
        &self.generators
    }

    pub fn contains(&self, aut: &Automorphism) -> bool {
        self.elements.binary_search(aut).is_ok()
    }

    /// Vertex and edge orbits, plus the stabilizer order of every vertex.
    pub fn orbits_and_stabilizers(&self) -> OrbitData {
        let n = self.graph.vertex_count();
        let m = self.graph.edge_count();
        let mut vertex_orbit_of = vec![usize::MAX; n];
        let mut vertex_orbits = Vec::new();
        for v in self.graph.vertices() {
            if vertex_orbit_of[v.index()] != usize::MAX {
                continue;
            }
            let idx = vertex_orbits.len();
            let mut orbit = Vec::new();
            let mut stack = vec![v];
            vertex_orbit_of[v.index()] = idx;
            while let Some(x) = stack.pop() {
                orbit.push(x);
                for g in &self.generators {
                    let y = g.vertex_image(x);
                    if vertex_orbit_of[y.index()] == usize::MAX {
                        vertex_orbit_of[y.index()] = idx;
                        stack.push(y);
                    }
                }
            }
            orbit.sort();
            vertex_orbits.push(orbit);
        }
        let mut edge_orbit_of = vec![usize::MAX; m];
        let mut edge_orbits = Vec::new();
        for e in self.graph.edges() {
            if edge_orbit_of[e.index()] != usize::MAX {
                continue;
            }
            let idx = edge_orbits.len();
            let mut orbit = Vec::new();
            let mut stack = vec![e];
            edge_orbit_of[e.index()] = idx;
            while let Some(x) = stack.pop() {
                orbit.push(x);
                for g in &self.generators {
                    let y = g.edge_image(x);
                    if edge_orbit_of[y.index()] == usize::MAX {
                        edge_orbit_of[y.index()] = idx;
                        stack.push(y);
                    }
                }
            }
            orbit.sort();
            edge_orbits.push(orbit);
        }
        let stabilizer_order = self
            .graph
            .vertices()
            .map(|v| {
                self.elements
                    .iter()
                    .filter(|g| g.vertex_image(v) == v)
                    .count() as u64
            })
            .collect();
        OrbitData {
            vertex_orbits,
            edge_orbits,
            vertex_orbit_of,
            edge_orbit_of,
            stabilizer_order,
        }
    }

    /// Quotient graph and quotient morphism. Quotient vertices are vertex
    /// orbits; edge orbits with both endpoints in one vertex orbit are
    /// dropped and the morphism collapses exactly those edges.
    pub fn quotient(&self) -> (Arc<MultiGraph>, GraphMorphism) {
        let orbits = self.orbits_and_stabilizers();
        // Name each orbit after its least member; sort quotient vertices by
        // name for a deterministic layout.
        let mut vertex_orbit_names: Vec<String> = orbits
            .vertex_orbits
            .iter()
            .map(|orbit| {
                orbit
                    .iter()
                    .map(|&v| self.graph.vertex_name(v))
                    .min()
                    .unwrap()
                    .to_string()
            })
            .collect();
        let mut order: Vec<usize> = (0..vertex_orbit_names.len()).collect();
        order.sort_by(|&a, &b| vertex_orbit_names[a].cmp(&vertex_orbit_names[b]));
        let mut rank = vec![0usize; order.len()];
        for (pos, &o) in order.iter().enumerate() {
            rank[o] = pos;
        }
        vertex_orbit_names.sort();

        struct KeptOrbit {
            name: String,
            ends: (usize, usize),
            members: Vec<EdgeId>,
        }
        let mut kept: Vec<KeptOrbit> = Vec::new();
        let mut kept_of_orbit: Vec<Option<usize>> = vec![None; orbits.edge_orbits.len()];
        for (i, orbit) in orbits.edge_orbits.iter().enumerate() {
            let (u, v) = self.graph.ends(orbit[0]);
            let (ou, ov) = (
                rank[orbits.vertex_orbit_of[u.index()]],
                rank[orbits.vertex_orbit_of[v.index()]],
            );
            if ou == ov {
                continue; // vertical orbit: dropped from the quotient
            }
            let name = orbit
                .iter()
                .map(|&e| self.graph.edge_name(e))
                .min()
                .unwrap()
                .to_string();
            kept_of_orbit[i] = Some(kept.len());
            kept.push(KeptOrbit {
                name,
                ends: (ou, ov),
                members: orbit.clone(),
            });
        }
        kept.sort_by(|a, b| a.name.cmp(&b.name));
        let mut kept_index_sorted: HashMap<*const KeptOrbit, usize> = HashMap::new();
        for (i, k) in kept.iter().enumerate() {
            kept_index_sorted.insert(k as *const KeptOrbit, i);
        }
        let mut edge_image_of: Vec<Option<usize>> = vec![None; self.graph.edge_count()];
        for (i, k) in kept.iter().enumerate() {
            for &e in &k.members {
                edge_image_of[e.index()] = Some(i);
            }
        }

        let quotient = MultiGraph::build_graph(
            vertex_orbit_names.clone(),
            kept.iter().map(|k| {
                (
                    k.name.clone(),
                    vertex_orbit_names[k.ends.0].clone(),
                    vertex_orbit_names[k.ends.1].clone(),
                )
            }),
        )
        .expect("orbit names are unique and vertical orbits were dropped");
        let quotient = Arc::new(quotient);

        let vertex_map = self
            .graph
            .vertices()
            .map(|v| VertexId(rank[orbits.vertex_orbit_of[v.index()]] as u32))
            .collect();
        let edge_map = self
            .graph
            .edges()
            .map(|e| match edge_image_of[e.index()] {
                Some(i) => EdgeImage::Edge(EdgeId(i as u32)),
                None => EdgeImage::Collapsed,
            })
            .collect();
        let morphism = GraphMorphism::build(
            Arc::clone(&self.graph),
            Arc::clone(&quotient),
            vertex_map,
            edge_map,
        )
        .expect("quotient construction yields a valid morphism");
        (quotient, morphism)
    }

    /// Stabilizer-criterion harmonicity test: no non-identity element fixes
    /// a vertex together with an incident edge, and every vertex has a
    /// neighbor outside its orbit. Returns a witness on failure.
    pub fn harmonicity(&self) -> HarmonicVerdict {
        for g in &self.elements {
            if g.is_identity() {
                continue;
            }
            for v in self.graph.vertices() {
                if g.vertex_image(v) != v {
                    continue;
                }
                for &e in self.graph.incident_edges(v) {
                    if g.edge_image(e) == e {
                        return HarmonicVerdict::FixedFlag {
                            element: g.clone(),
                            vertex: v,
                            edge: e,
                        };
                    }
                }
            }
        }
        let orbits = self.orbits_and_stabilizers();
        for v in self.graph.vertices() {
            let my_orbit = orbits.vertex_orbit_of[v.index()];
            let escapes = self
                .graph
                .incident_edges(v)
                .iter()
                .any(|&e| orbits.vertex_orbit_of[self.graph.other_end(e, v).index()] != my_orbit);
            if !escapes {
                return HarmonicVerdict::EngulfedNeighborhood { vertex: v };
            }
        }
        HarmonicVerdict::Harmonic
    }

    pub fn is_harmonic(&self) -> bool {
        self.harmonicity().is_harmonic()
    }

    /// Definitional harmonicity test: enumerates every subgroup and checks
    /// that its quotient morphism is harmonic and non-degenerate.
    pub fn is_harmonic_by_definition(&self, budget: usize) -> Result<bool> {
        for subgroup in self.subgroups(budget)? {
            let (_, morphism) = subgroup.quotient();
            if !morphism.is_harmonic() || !morphism.is_nondegenerate() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Subgroup with the given elements (must form a closed subset).
    fn subgroup_from_elements(&self, elements: Vec<Automorphism>) -> ActionGroup {
        let generators = elements
            .iter()
            .filter(|a| !a.is_identity())
            .cloned()
            .collect();
        ActionGroup {
            graph: Arc::clone(&self.graph),
            elements,
            generators,
        }
    }

    /// All subgroups, from cyclic seeds closed under pairwise joins.
    /// Includes the trivial and the full subgroup.
    pub fn subgroups(&self, budget: usize) -> Result<Vec<ActionGroup>> {
        if self.elements.len() > budget {
            return Err(Error::BudgetExceeded {
                what: "subgroup enumeration base order",
                limit: budget,
            });
        }
        let count_cap = 1_000_000usize;
        let mut seen: BTreeSet<Vec<Automorphism>> = BTreeSet::new();
        let identity = Automorphism::identity(&self.graph);
        seen.insert(vec![identity]);
        // Cyclic seeds.
        let mut cyclics: Vec<Vec<Automorphism>> = Vec::new();
        for g in &self.elements {
            if g.is_identity() {
                continue;
            }
            let cyclic = close(&self.graph, std::slice::from_ref(g), self.elements.len())
                .expect("cyclic subgroup fits inside the group");
            if seen.insert(cyclic.clone()) {
                cyclics.push(cyclic);
            }
        }
        // Join until fixpoint.
        let mut frontier: Vec<Vec<Automorphism>> = seen.iter().cloned().collect();
        while let Some(current) = frontier.pop() {
            for cyclic in &cyclics {
                if cyclic.iter().all(|g| current.binary_search(g).is_ok()) {
                    continue;
                }
                let mut gens = current.clone();
                gens.extend(cyclic.iter().cloned());
                let joined = close(&self.graph, &gens, self.elements.len())
                    .expect("join of subgroups fits inside the group");
                if seen.len() >= count_cap {
                    return Err(Error::BudgetExceeded {
                        what: "subgroup count",
                        limit: count_cap,
                    });
                }
                if seen.insert(joined.clone()) {
                    frontier.push(joined);
                }
            }
        }
        Ok(seen
            .into_iter()
            .map(|elements| self.subgroup_from_elements(elements))
            .collect())
    }
}

fn factorial(k: u64) -> u64 {
    (1..=k).product::<u64>().max(1)
}

/// Enumerates every automorphism whose vertex map is `vperm`: for each
/// parallel class, any bijection onto the image class.
pub(crate) fn extend_vertex_automorphism(
    graph: &MultiGraph,
    support: &canon::Support,
    vperm: &[u32],
    emit: &mut dyn FnMut(Automorphism) -> Result<()>,
) -> Result<()> {
    let class_of: HashMap<(u32, u32), usize> = support
        .classes
        .iter()
        .enumerate()
        .map(|(i, &(u, v, _))| ((u, v), i))
        .collect();
    // Image class per class under the vertex map.
    let image_class: Vec<usize> = support
        .classes
        .iter()
        .map(|&(u, v, _)| {
            let (iu, iv) = (vperm[u as usize], vperm[v as usize]);
            class_of[&(iu.min(iv), iu.max(iv))]
        })
        .collect();

    let mut edge_perm = vec![0u32; graph.edge_count()];
    fn assign(
        support: &canon::Support,
        image_class: &[usize],
        class_idx: usize,
        edge_perm: &mut Vec<u32>,
        vperm: &[u32],
        emit: &mut dyn FnMut(Automorphism) -> Result<()>,
    ) -> Result<()> {
        if class_idx == support.classes.len() {
            let aut = Automorphism {
                vertex_perm: vperm.to_vec(),
                edge_perm: edge_perm.clone(),
            };
            return emit(aut);
        }
        let sources = &support.classes[class_idx].2;
        let targets = &support.classes[image_class[class_idx]].2;
        // All bijections sources -> targets via permutations of target slots.
        let mut slot: Vec<usize> = (0..targets.len()).collect();
        permute_slots(&mut slot, 0, &mut |perm| {
            for (i, &e) in sources.iter().enumerate() {
                edge_perm[e.index()] = targets[perm[i]].0;
            }
            assign(support, image_class, class_idx + 1, edge_perm, vperm, emit)
        })
    }
    assign(support, &image_class, 0, &mut edge_perm, vperm, emit)
}

/// Heap-style permutation enumeration calling `f` on each arrangement.
fn permute_slots(
    slots: &mut Vec<usize>,
    start: usize,
    f: &mut dyn FnMut(&[usize]) -> Result<()>,
) -> Result<()> {
    if start == slots.len() {
        return f(slots);
    }
    for i in start..slots.len() {
        slots.swap(start, i);
        permute_slots(slots, start + 1, f)?;
        slots.swap(start, i);
    }
    Ok(())
}

/// Induced morphism `G/sub -> G/whole` for nested subgroups; pairs with
/// [`GraphMorphism::compose`] to exercise composition of quotient towers.
pub fn induced_quotient_morphism(
    sub_quotient: &GraphMorphism,
    whole_quotient: &GraphMorphism,
) -> Result<GraphMorphism> {
    if *sub_quotient.source() != *whole_quotient.source() {
        return Err(Error::SourceTargetMismatch);
    }
    let not_nested = || Error::HypothesisUnmet {
        detail: "quotients are not nested: the coarser map does not factor".to_string(),
    };
    let mid = sub_quotient.target_arc();
    let bottom = whole_quotient.target_arc();
    let mut vertex_map = vec![None; mid.vertex_count()];
    for x in sub_quotient.source().vertices() {
        let v = sub_quotient.vertex_image(x);
        let w = whole_quotient.vertex_image(x);
        match vertex_map[v.index()] {
            None => vertex_map[v.index()] = Some(w),
            Some(prev) if prev == w => {}
            Some(_) => return Err(not_nested()),
        }
    }
    let vertex_map: Vec<VertexId> = vertex_map
        .into_iter()
        .map(|v| v.expect("quotient morphisms are surjective on vertices"))
        .collect();
    let mut edge_map = vec![None; mid.edge_count()];
    for e in sub_quotient.source().edges() {
        if let EdgeImage::Edge(f) = sub_quotient.edge_image(e) {
            let image = whole_quotient.edge_image(e);
            match edge_map[f.index()] {
                None => edge_map[f.index()] = Some(image),
                Some(prev) if prev == image => {}
                Some(_) => return Err(not_nested()),
            }
        }
    }
    let edge_map: Vec<EdgeImage> = edge_map
        .into_iter()
        .map(|e| e.expect("quotient morphisms are surjective on edges"))
        .collect();
    GraphMorphism::build(Arc::clone(mid), Arc::clone(bottom), vertex_map, edge_map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;

    fn barbell() -> Arc<MultiGraph> {
        Arc::new(
            MultiGraph::from_literals(
                &["a", "b", "c", "d"],
                &[
                    ("ab1", "a", "b"),
                    ("ab2", "a", "b"),
                    ("bc", "b", "c"),
                    ("cd1", "c", "d"),
                    ("cd2", "c", "d"),
                ],
            )
            .unwrap(),
        )
    }

    fn horizontal_reflection(g: &MultiGraph) -> Automorphism {
        Automorphism::from_names(g, &[], &[("ab1", "ab2"), ("ab2", "ab1"), ("cd1", "cd2"), ("cd2", "cd1")])
            .unwrap()
    }

    #[test]
    fn builds_barbell_reflection() {
        let g = barbell();
        let h = horizontal_reflection(&g);
        assert_eq!(h.order(), 2);
    }

    #[test]
    fn parallel_class_swap_is_not_forced() {
        // Vertex swap on a double edge with the identity edge map is valid.
        let g = MultiGraph::from_literals(&["a", "b"], &[("e1", "a", "b"), ("e2", "a", "b")])
            .unwrap();
        let aut = Automorphism::from_names(&g, &[("a", "b"), ("b", "a")], &[]).unwrap();
        assert_eq!(aut.order(), 2);
    }

    #[test]
    fn incidence_violation_rejected() {
        let g = barbell();
        // Swap a and b but keep edge bc fixed: bc = {b, c} must map to {a, c},
        // so the identity edge map breaks incidence at bc... actually at ab1
        // first since {a,b} maps to {b,a} = {a,b}, fine; bc fails.
        let err = Automorphism::from_names(&g, &[("a", "b"), ("b", "a")], &[]).unwrap_err();
        assert!(matches!(err, Error::IncidenceViolation { .. }));
    }

    #[test]
    fn bijectivity_enforced() {
        let g = barbell();
        let ab1 = g.edge_by_name("ab1").unwrap();
        let vperm: Vec<VertexId> = g.vertices().collect();
        let mut eperm: Vec<EdgeId> = g.edges().collect();
        eperm[g.edge_by_name("ab2").unwrap().index()] = ab1;
        assert_eq!(
            Automorphism::build(&g, vperm, eperm),
            Err(Error::NotBijective)
        );
    }

    #[test]
    fn generates_klein_four_from_barbell_involutions() {
        let fam = families::barbell();
        let group = ActionGroup::generate(
            Arc::clone(&fam.graph),
            vec![fam.vertical_reflection.clone(), fam.half_rotation.clone()],
            DEFAULT_BUDGET,
        )
        .unwrap();
        assert_eq!(group.order(), 4);
        // Their product is the horizontal reflection.
        let product = fam.vertical_reflection.compose(&fam.half_rotation);
        assert_eq!(product, fam.horizontal_reflection);
    }

    #[test]
    fn trivial_group_has_order_one() {
        let g = barbell();
        let group = ActionGroup::generate(Arc::clone(&g), vec![], DEFAULT_BUDGET).unwrap();
        assert_eq!(group.order(), 1);
    }

    /// Brute-force automorphism count: all vertex bijections crossed with
    /// all edge bijections, keeping the incidence-compatible pairs.
    fn brute_force_aut_order(g: &MultiGraph) -> u64 {
        fn perms(n: usize) -> Vec<Vec<u32>> {
            if n == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for rest in perms(n - 1) {
                for i in 0..n {
                    let mut p = rest.clone();
                    p.insert(i, (n - 1) as u32);
                    out.push(p);
                }
            }
            out
        }
        let mut count = 0;
        for vp in perms(g.vertex_count()) {
            'edge: for ep in perms(g.edge_count()) {
                for e in g.edges() {
                    let (u, v) = g.ends(e);
                    let (iu, iv) = (vp[u.index()], vp[v.index()]);
                    let (a, b) = g.ends(EdgeId(ep[e.index()]));
                    if (a.0, b.0) != (iu.min(iv), iu.max(iv)) {
                        continue 'edge;
                    }
                }
                count += 1;
            }
        }
        count
    }

    #[test]
    fn automorphism_group_of_single_edge() {
        let g = Arc::new(MultiGraph::from_literals(&["a", "b"], &[("e", "a", "b")]).unwrap());
        let aut = ActionGroup::automorphism_group(&g, DEFAULT_BUDGET).unwrap();
        assert_eq!(aut.order(), 2);
    }

    #[test]
    fn automorphism_group_of_double_edge_matches_brute_force() {
        let g = Arc::new(
            MultiGraph::from_literals(&["a", "b"], &[("e1", "a", "b"), ("e2", "a", "b")]).unwrap(),
        );
        let aut = ActionGroup::automorphism_group(&g, DEFAULT_BUDGET).unwrap();
        assert_eq!(aut.order(), 4);
        assert_eq!(brute_force_aut_order(&g), 4);
        assert_eq!(ActionGroup::automorphism_group_order(&g), 4);
    }

    #[test]
    fn automorphism_group_of_barbell_matches_brute_force() {
        let g = barbell();
        let aut = ActionGroup::automorphism_group(&g, DEFAULT_BUDGET).unwrap();
        assert_eq!(aut.order(), 8);
        assert_eq!(brute_force_aut_order(&g), 8);
        assert_eq!(ActionGroup::automorphism_group_order(&g), 8);
    }

    #[test]
    fn orbit_stabilizer_identity_holds() {
        let fam = families::hurwitz_genus2();
        let orbits = fam.group.orbits_and_stabilizers();
        // Two vertex orbits: the two hubs and the six leaves.
        let mut sizes: Vec<usize> = orbits.vertex_orbits.iter().map(|o| o.len()).collect();
        sizes.sort();
        assert_eq!(sizes, vec![2, 6]);
        for v in fam.graph.vertices() {
            let orbit_size = orbits.vertex_orbits[orbits.vertex_orbit_of[v.index()]].len() as u64;
            assert_eq!(orbit_size * orbits.stabilizer_order[v.index()], fam.group.order());
        }
        let hub = fam.graph.vertex_by_name("L").unwrap();
        assert_eq!(orbits.stabilizer_order[hub.index()], 3);
        let leaf = fam.graph.vertex_by_name("L1").unwrap();
        assert_eq!(orbits.stabilizer_order[leaf.index()], 1);
    }

    #[test]
    fn klein_genus3_orbits_are_two_fours_with_trivial_stabilizers() {
        let fam = families::klein_genus3();
        let orbits = fam.group.orbits_and_stabilizers();
        let mut sizes: Vec<usize> = orbits.vertex_orbits.iter().map(|o| o.len()).collect();
        sizes.sort();
        assert_eq!(sizes, vec![4, 4]);
        assert!(orbits.stabilizer_order.iter().all(|&s| s == 1));
    }

    #[test]
    fn trivial_group_has_singleton_orbits() {
        let g = barbell();
        let group = ActionGroup::trivial(Arc::clone(&g));
        let orbits = group.orbits_and_stabilizers();
        assert_eq!(orbits.vertex_orbits.len(), g.vertex_count());
        assert_eq!(orbits.edge_orbits.len(), g.edge_count());
    }

    #[test]
    fn barbell_horizontal_quotient_is_p3() {
        let g = barbell();
        let h = horizontal_reflection(&g);
        let group = ActionGroup::generate(Arc::clone(&g), vec![h], DEFAULT_BUDGET).unwrap();
        let (quotient, morphism) = group.quotient();
        let p3 = MultiGraph::from_literals(
            &["a", "b", "c", "d"],
            &[("e1", "a", "b"), ("e2", "b", "c"), ("e3", "c", "d")],
        )
        .unwrap();
        assert!(quotient.are_isomorphic(&p3).is_some());
        assert!(!morphism.is_harmonic());
        assert!(morphism.is_nondegenerate());
    }

    #[test]
    fn barbell_vertical_quotient_has_genus_one() {
        let fam = families::barbell();
        let group = ActionGroup::generate(
            Arc::clone(&fam.graph),
            vec![fam.vertical_reflection.clone()],
            DEFAULT_BUDGET,
        )
        .unwrap();
        let (quotient, morphism) = group.quotient();
        assert_eq!(quotient.genus().unwrap(), 1);
        assert_eq!(quotient.vertex_count(), 2);
        assert_eq!(quotient.edge_count(), 2);
        assert!(morphism.is_harmonic());
        assert!(group.is_harmonic());
    }

    #[test]
    fn quotient_by_trivial_group_is_identity() {
        let g = barbell();
        let group = ActionGroup::trivial(Arc::clone(&g));
        let (quotient, morphism) = group.quotient();
        assert!(g.are_isomorphic(&quotient).is_some());
        assert!(morphism.is_harmonic());
        assert_eq!(morphism.degree().unwrap(), 1);
    }

    #[test]
    fn barbell_horizontal_reflection_fails_with_witness() {
        let g = barbell();
        let h = horizontal_reflection(&g);
        let group = ActionGroup::generate(Arc::clone(&g), vec![h], DEFAULT_BUDGET).unwrap();
        match group.harmonicity() {
            HarmonicVerdict::FixedFlag { vertex, edge, .. } => {
                assert_eq!(g.vertex_name(vertex), "b");
                assert_eq!(g.edge_name(edge), "bc");
            }
            other => panic!("expected a fixed flag, got {other:?}"),
        }
    }

    #[test]
    fn barbell_klein_action_is_not_harmonic() {
        let fam = families::barbell();
        let group = ActionGroup::generate(
            Arc::clone(&fam.graph),
            vec![fam.vertical_reflection.clone(), fam.half_rotation.clone()],
            DEFAULT_BUDGET,
        )
        .unwrap();
        assert!(!group.is_harmonic());
        // Its full quotient morphism is nevertheless harmonic (to one edge);
        // the failure is at the horizontal-reflection subgroup.
        let (quotient, morphism) = group.quotient();
        assert_eq!(quotient.vertex_count(), 2);
        assert_eq!(quotient.edge_count(), 1);
        assert!(morphism.is_harmonic());
        assert_eq!(group.is_harmonic_by_definition(DEFAULT_BUDGET).unwrap(), false);
    }

    #[test]
    fn hurwitz_action_is_harmonic_both_ways() {
        let fam = families::hurwitz_genus2();
        assert!(fam.group.is_harmonic());
        assert!(fam.group.is_harmonic_by_definition(DEFAULT_BUDGET).unwrap());
    }

    #[test]
    fn trivial_action_is_harmonic_by_definition() {
        let g = barbell();
        let group = ActionGroup::trivial(g);
        assert!(group.is_harmonic_by_definition(DEFAULT_BUDGET).unwrap());
    }

    /// Brute-force subgroup count: every subset of the element list that is
    /// closed under composition (finite, so closure under inverse follows).
    fn brute_force_subgroup_count(group: &ActionGroup) -> usize {
        let elems = group.elements();
        let n = elems.len();
        assert!(n <= 16, "brute force only for tiny groups");
        let index: HashMap<&Automorphism, usize> =
            elems.iter().enumerate().map(|(i, a)| (a, i)).collect();
        let id_idx = index[&Automorphism::identity(group.graph())];
        let mut count = 0;
        for mask in 0u32..(1 << n) {
            if mask & (1 << id_idx) == 0 {
                continue;
            }
            let members: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
            let closed = members.iter().all(|&i| {
                members
                    .iter()
                    .all(|&j| mask & (1 << index[&elems[i].compose(&elems[j])]) != 0)
            });
            if closed {
                count += 1;
            }
        }
        count
    }

    #[test]
    fn klein_four_has_five_subgroups() {
        let fam = families::barbell();
        let group = ActionGroup::generate(
            Arc::clone(&fam.graph),
            vec![fam.vertical_reflection.clone(), fam.half_rotation.clone()],
            DEFAULT_BUDGET,
        )
        .unwrap();
        assert_eq!(group.subgroups(DEFAULT_BUDGET).unwrap().len(), 5);
        assert_eq!(brute_force_subgroup_count(&group), 5);
    }

    #[test]
    fn cyclic_six_has_four_subgroups() {
        let fam = families::hurwitz_genus2();
        assert_eq!(fam.group.order(), 6);
        assert_eq!(fam.group.subgroups(DEFAULT_BUDGET).unwrap().len(), 4);
        assert_eq!(brute_force_subgroup_count(&fam.group), 4);
    }

    #[test]
    fn dihedral_twelve_has_sixteen_subgroups() {
        let tree = families::RootedTree::single_edge();
        let dec = families::decorated_cycle(6, &tree).unwrap();
        assert_eq!(dec.instance.group.order(), 12);
        assert_eq!(dec.instance.group.subgroups(DEFAULT_BUDGET).unwrap().len(), 16);
        assert_eq!(brute_force_subgroup_count(&dec.instance.group), 16);
    }

    #[test]
    fn harmonicity_is_inherited_by_subgroups() {
        let fam = families::hurwitz_genus2();
        for sub in fam.group.subgroups(DEFAULT_BUDGET).unwrap() {
            assert!(sub.is_harmonic());
            assert_eq!(
                sub.is_harmonic(),
                sub.is_harmonic_by_definition(DEFAULT_BUDGET).unwrap()
            );
        }
    }

    #[test]
    fn criterion_matches_definition_on_barbell_subgroups() {
        let fam = families::barbell();
        let group = ActionGroup::generate(
            Arc::clone(&fam.graph),
            vec![fam.vertical_reflection.clone(), fam.half_rotation.clone()],
            DEFAULT_BUDGET,
        )
        .unwrap();
        for sub in group.subgroups(DEFAULT_BUDGET).unwrap() {
            assert_eq!(
                sub.is_harmonic(),
                sub.is_harmonic_by_definition(DEFAULT_BUDGET).unwrap()
            );
        }
    }

    #[test]
    fn rotations_of_decorated_cycle_are_harmonic() {
        let tree = families::RootedTree::single_edge();
        let dec = families::decorated_cycle(6, &tree).unwrap();
        let rotations = ActionGroup::generate(
            Arc::clone(&dec.instance.graph),
            vec![dec.rotation.clone()],
            DEFAULT_BUDGET,
        )
        .unwrap();
        assert_eq!(rotations.order(), 6);
        assert!(rotations.is_harmonic());
        assert!(rotations.is_harmonic_by_definition(DEFAULT_BUDGET).unwrap());
    }

    #[test]
    fn quotient_tower_composes_to_direct_quotient() {
        let fam = families::hurwitz_genus2();
        let subs = fam.group.subgroups(DEFAULT_BUDGET).unwrap();
        let (_, whole) = fam.group.quotient();
        for sub in &subs {
            let (_, part) = sub.quotient();
            let induced = induced_quotient_morphism(&part, &whole).unwrap();
            let composite = GraphMorphism::compose(&induced, &part).unwrap();
            for x in fam.graph.vertices() {
                assert_eq!(composite.vertex_image(x), whole.vertex_image(x));
            }
            for e in fam.graph.edges() {
                assert_eq!(composite.edge_image(e), whole.edge_image(e));
            }
            // Two-out-of-three: the induced map between harmonic quotients
            // of a harmonic action is harmonic.
            assert!(part.is_harmonic());
            assert!(composite.is_harmonic());
            assert!(induced.is_harmonic());
        }
    }

    #[test]
    fn closure_budget_is_enforced() {
        let fam = families::hurwitz_genus2();
        let gens: Vec<Automorphism> = fam.group.generators().to_vec();
        let err = ActionGroup::generate(Arc::clone(&fam.graph), gens, 3).unwrap_err();
        assert_eq!(err, Error::ClosureBudgetExceeded { limit: 3 });
    }

    mod proptests {
        use super::*;
        use proptest::prelude::*;

        fn small_graph() -> impl Strategy<Value = Arc<MultiGraph>> {
            (2usize..=5, 0usize..=3, any::<u64>()).prop_map(|(n, extra, seed)| {
                let mut state = seed | 1;
                let mut next = move || {
                    state ^= state << 13;
                    state ^= state >> 7;
                    state ^= state << 17;
                    state
                };
                let vertices: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
                let mut edges = Vec::new();
                for i in 1..n {
                    let parent = (next() as usize) % i;
                    edges.push((
                        format!("e{}", edges.len()),
                        format!("v{parent}"),
                        format!("v{i}"),
                    ));
                }
                for _ in 0..extra {
                    let a = (next() as usize) % n;
                    let b = (next() as usize) % n;
                    if a != b {
                        edges.push((format!("e{}", edges.len()), format!("v{a}"), format!("v{b}")));
                    }
                }
                Arc::new(MultiGraph::build_graph(vertices, edges).unwrap())
            })
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(48))]
            // The backtracking automorphism search agrees with the naive scan
            // over all vertex and edge bijections.
            #[test]
            fn automorphism_group_matches_brute_force(g in small_graph()) {
                let expected = brute_force_aut_order(&g);
                prop_assume!(expected <= 4096);
                let group = ActionGroup::automorphism_group(&g, 4096).unwrap();
                prop_assert_eq!(group.order(), expected);
                prop_assert_eq!(ActionGroup::automorphism_group_order(&g), expected);
                // Every element is a valid automorphism.
                for aut in group.elements() {
                    let vperm: Vec<VertexId> = g.vertices().map(|v| aut.vertex_image(v)).collect();
                    let eperm: Vec<EdgeId> = g.edges().map(|e| aut.edge_image(e)).collect();
                    prop_assert!(Automorphism::build(&g, vperm, eperm).is_ok());
                }
            }
        }
    }
}
