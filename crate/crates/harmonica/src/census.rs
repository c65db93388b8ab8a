//! Exhaustive enumeration of small connected loopless multigraphs by genus,
//! maximal harmonic action search, and batch verification of every order
//! bound and branch-locus statement over the harmonic pairs found.
//!
//! Enumeration works per vertex count: the genus pins the edge count, so we
//! enumerate connected simple supports and distribute the excess edge budget
//! as parallel-class multiplicities, deduplicating by canonical key.
//!
//! The harmonic search never materializes the full automorphism group. Every
//! non-identity element of a harmonic group fixes no (vertex, incident edge)
//! flag, so such a group acts freely on the `2|E|` flags and its order
//! divides that count. The search enumerates the flag-free automorphisms,
//! forms the harmonic cyclic subgroups they generate, and joins harmonic
//! subgroups until fixpoint; harmonicity is inherited by subgroups, so every
//! harmonic subgroup arises along such a chain.

use std::collections::BTreeSet;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::action::{extend_vertex_automorphism, ActionGroup, Automorphism};
use crate::canon;
use crate::error::{Error, Result};
use crate::io;
use crate::multigraph::MultiGraph;
use crate::ramification::{
    self, check_gap_theorem, check_order_bounds, check_prime_divisor_bound,
    classify_branch_locus, profile, rational, verify_riemann_hurwitz,
};

/// Census parameters. `budget` caps group-theoretic searches per graph;
/// `jobs` selects the worker count (`None` = rayon default).
#[derive(Clone, Debug)]
pub struct CensusConfig {
    pub genus: u64,
    pub max_vertices: usize,
    pub budget: usize,
    pub jobs: Option<usize>,
}

/// Per-graph census record.
#[derive(Clone, Debug, Serialize)]
pub struct GraphRecord {
    pub key: String,
    pub vertices: usize,
    pub edges: usize,
    pub aut_order: u64,
    pub max_harmonic_order: u64,
    pub witness_generators: Vec<io::MapsDoc>,
    pub witness_profile: Option<io::ProfileDoc>,
    /// Set when the per-graph search hit a budget.
    pub truncated: bool,
}

/// Full census report. `violations` must be empty: every entry is a
/// counterexample to a statement that holds for harmonic actions.
#[derive(Clone, Debug, Serialize)]
pub struct CensusReport {
    pub genus: u64,
    pub max_vertices: usize,
    pub graph_count: usize,
    pub max_harmonic_order: u64,
    pub violations: Vec<String>,
    pub truncated: bool,
    pub note: String,
    pub records: Vec<GraphRecord>,
}

/// All connected loopless multigraphs with `2 ≤ |V| ≤ max_vertices` and the
/// given genus, one representative per isomorphism class, sorted by
/// canonical key.
pub fn enumerate_graphs(genus: u64, max_vertices: usize) -> Vec<MultiGraph> {
    assert!(max_vertices >= 2, "need at least two vertices");
    let mut seen: BTreeSet<Vec<u8>> = BTreeSet::new();
    let mut out: Vec<(Vec<u8>, MultiGraph)> = Vec::new();
    for n in 2..=max_vertices {
        let total_edges = n - 1 + genus as usize;
        let max_support = n * (n - 1) / 2;
        for support in connected_supports(n, total_edges.min(max_support)) {
            let extra = total_edges - support.len();
            distribute(extra, support.len(), &mut |mults| {
                let graph = graph_from_support(n, &support, mults);
                let key = graph.canonical_key();
                if seen.insert(key.clone()) {
                    out.push((key, graph));
                }
            });
        }
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out.into_iter().map(|(_, g)| g).collect()
}

/// Connected spanning simple graphs on `n` labeled vertices with at most
/// `max_edges` edges, reduced to one representative per isomorphism class.
fn connected_supports(n: usize, max_edges: usize) -> Vec<Vec<(u32, u32)>> {
    let mut pairs = Vec::new();
    for u in 0..n as u32 {
        for v in (u + 1)..n as u32 {
            pairs.push((u, v));
        }
    }
    let mut seen: BTreeSet<Vec<u8>> = BTreeSet::new();
    let mut supports = Vec::new();
    let mut chosen: Vec<(u32, u32)> = Vec::new();
    fn rec(
        pairs: &[(u32, u32)],
        start: usize,
        remaining: usize,
        n: usize,
        chosen: &mut Vec<(u32, u32)>,
        seen: &mut BTreeSet<Vec<u8>>,
        supports: &mut Vec<Vec<(u32, u32)>>,
    ) {
        if chosen.len() >= n - 1 && is_connected_support(n, chosen) {
            let graph = graph_from_support(n, chosen, &vec![1; chosen.len()]);
            if seen.insert(graph.canonical_key()) {
                supports.push(chosen.clone());
            }
        }
        if remaining == 0 || start == pairs.len() {
            return;
        }
        for i in start..pairs.len() {
            chosen.push(pairs[i]);
            rec(pairs, i + 1, remaining - 1, n, chosen, seen, supports);
            chosen.pop();
        }
    }
    rec(
        &pairs,
        0,
        max_edges,
        n,
        &mut chosen,
        &mut seen,
        &mut supports,
    );
    supports
}

fn is_connected_support(n: usize, edges: &[(u32, u32)]) -> bool {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, x: usize) -> usize {
        if parent[x] != x {
            let root = find(parent, parent[x]);
            parent[x] = root;
        }
        parent[x]
    }
    let mut components = n;
    for &(u, v) in edges {
        let (ru, rv) = (find(&mut parent, u as usize), find(&mut parent, v as usize));
        if ru != rv {
            parent[ru] = rv;
            components -= 1;
        }
    }
    components == 1
}

fn graph_from_support(n: usize, support: &[(u32, u32)], mults: &[usize]) -> MultiGraph {
    let vertices: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let mut edges = Vec::new();
    for (i, &(u, v)) in support.iter().enumerate() {
        for _ in 0..mults[i] {
            edges.push((
                format!("e{}", edges.len()),
                format!("v{u}"),
                format!("v{v}"),
            ));
        }
    }
    MultiGraph::build_graph(vertices, edges).unwrap()
}

/// Calls `f` on every way of adding `extra` parallel copies across `parts`
/// classes (so each class gets multiplicity `1 + share`).
fn distribute(extra: usize, parts: usize, f: &mut impl FnMut(&[usize])) {
    let mut mults = vec![1usize; parts];
    fn rec(extra: usize, idx: usize, mults: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
        if idx + 1 == mults.len() {
            mults[idx] = 1 + extra;
            f(mults);
            mults[idx] = 1;
            return;
        }
        for here in 0..=extra {
            mults[idx] = 1 + here;
            rec(extra - here, idx + 1, mults, f);
            mults[idx] = 1;
        }
    }
    if parts == 0 {
        if extra == 0 {
            f(&[]);
        }
        return;
    }
    rec(extra, 0, &mut mults, f);
}

/// True when the element fixes some vertex together with an incident edge.
fn fixes_a_flag(graph: &MultiGraph, aut: &Automorphism) -> bool {
    for v in graph.vertices() {
        if aut.vertex_image(v) != v {
            continue;
        }
        for &e in graph.incident_edges(v) {
            if aut.edge_image(e) == e {
                return true;
            }
        }
    }
    false
}

/// Enumerates the automorphisms with no fixed flag. Every non-identity
/// element of a harmonic group is of this kind.
fn flag_free_elements(graph: &Arc<MultiGraph>, cap: usize) -> Result<Vec<Automorphism>> {
    let support = canon::Support::of(graph);
    let mut out = Vec::new();
    for vperm in canon::vertex_automorphisms(&support) {
        // Quick prune: a singleton class fixed with both endpoints fixed
        // forces a fixed flag whatever the edge map does.
        let hopeless = support.classes.iter().any(|&(u, v, ref ids)| {
            ids.len() == 1
                && vperm[u as usize] == u
                && vperm[v as usize] == v
        });
        if hopeless {
            continue;
        }
        extend_vertex_automorphism(graph, &support, &vperm, &mut |aut| {
            if !fixes_a_flag(graph, &aut) && !aut.is_identity() {
                out.push(aut);
                if out.len() > cap {
                    return Err(Error::BudgetExceeded {
                        what: "flag-free element enumeration",
                        limit: cap,
                    });
                }
            }
            Ok(())
        })?;
    }
    Ok(out)
}

/// Result of the harmonic search on one graph: the maximum order with a
/// witness, plus every subgroup the search examined (used by the census for
/// cross-checking the two harmonicity tests).
pub struct HarmonicSearch {
    pub max_order: u64,
    pub witness: ActionGroup,
    pub examined: Vec<ActionGroup>,
}

/// Finds the maximum harmonic subgroup order over all subgroups of the
/// automorphism group, by growing joins of harmonic cyclic subgroups.
/// `Γ` harmonic and `Δ ≤ Γ` imply `Δ` harmonic, so every harmonic subgroup
/// is a join of harmonic cyclic subgroups through harmonic intermediates,
/// and the fixpoint search is exhaustive. A join that outgrows the flag
/// count `2|E|` cannot act freely on flags, hence is discarded as
/// non-harmonic without further checking.
pub fn search_harmonic(graph: &Arc<MultiGraph>, budget: usize) -> Result<HarmonicSearch> {
    let flag_count = 2 * graph.edge_count();
    // Any group the search must materialize fits inside the flag count; if
    // that exceeds the budget the search cannot decide harmonicity within it.
    if flag_count.max(2) > budget {
        return Err(Error::BudgetExceeded {
            what: "harmonic search group-order bound (2|E|)",
            limit: budget,
        });
    }
    let elements = flag_free_elements(graph, budget.max(flag_count) * 64)?;
    let trivial = ActionGroup::trivial(Arc::clone(graph));

    let mut examined: Vec<ActionGroup> = Vec::new();
    let mut seen: BTreeSet<Vec<Automorphism>> = BTreeSet::new();
    seen.insert(trivial.elements().to_vec());
    examined.push(trivial.clone());

    // Harmonic cyclic seeds.
    let mut seeds: Vec<ActionGroup> = Vec::new();
    for g in &elements {
        let cyclic = match ActionGroup::generate(
            Arc::clone(graph),
            vec![g.clone()],
            flag_count.max(2),
        ) {
            Ok(c) => c,
            Err(Error::ClosureBudgetExceeded { .. }) => continue, // order exceeds flag count
            Err(e) => return Err(e),
        };
        if !seen.insert(cyclic.elements().to_vec()) {
            continue;
        }
        examined.push(cyclic.clone());
        if cyclic.is_harmonic() {
            seeds.push(cyclic);
        }
    }

    let mut best: ActionGroup = trivial;
    let mut harmonic: Vec<ActionGroup> = seeds.clone();
    for h in &harmonic {
        if h.order() > best.order() {
            best = h.clone();
        }
    }
    let mut queue: Vec<ActionGroup> = harmonic.clone();
    let examined_cap = 200_000usize;
    while let Some(current) = queue.pop() {
        for seed in &seeds {
            if seed
                .elements()
                .iter()
                .all(|g| current.contains(g))
            {
                continue;
            }
            let mut gens: Vec<Automorphism> = current.elements().to_vec();
            gens.extend(seed.elements().iter().cloned());
            let joined = match ActionGroup::generate(
                Arc::clone(graph),
                gens,
                flag_count.max(2),
            ) {
                Ok(j) => j,
                // A group bigger than the flag count cannot act freely on
                // flags, so the join is certainly not harmonic.
                Err(Error::ClosureBudgetExceeded { .. }) => continue,
                Err(e) => return Err(e),
            };
            if !seen.insert(joined.elements().to_vec()) {
                continue;
            }
            if seen.len() > examined_cap {
                return Err(Error::BudgetExceeded {
                    what: "harmonic subgroup search",
                    limit: examined_cap,
                });
            }
            examined.push(joined.clone());
            if joined.is_harmonic() {
                if joined.order() > best.order() {
                    best = joined.clone();
                }
                harmonic.push(joined.clone());
                queue.push(joined);
            }
        }
    }
    Ok(HarmonicSearch {
        max_order: best.order(),
        witness: best,
        examined,
    })
}

/// Maximum harmonic subgroup order with a witness group.
pub fn max_harmonic_order(graph: &Arc<MultiGraph>, budget: usize) -> Result<(u64, ActionGroup)> {
    let search = search_harmonic(graph, budget)?;
    Ok((search.max_order, search.witness))
}

/// Every statement checked per harmonic pair; returns violation strings.
fn check_harmonic_pair(group: &ActionGroup, key: &str) -> Vec<String> {
    let mut violations = Vec::new();
    let mut fail = |what: &str| {
        violations.push(format!("graph {key} order {}: {what}", group.order()));
    };
    let p = match profile(group) {
        Ok(p) => p,
        Err(e) => {
            fail(&format!("profile failed: {e}"));
            return violations;
        }
    };
    if !verify_riemann_hurwitz(&p) {
        fail("genus identity fails");
    }
    let (_, morphism) = group.quotient();
    match morphism.degree() {
        Ok(d) => {
            if d != group.order() {
                fail(&format!("quotient degree {d} differs from group order"));
            }
        }
        Err(e) => fail(&format!("quotient degree undefined: {e}")),
    }
    // Horizontal multiplicity must match the stabilizer order everywhere.
    for record in &p.vertices {
        match morphism.multiplicities(record.vertex) {
            Ok((m, v)) => {
                if m != record.horizontal || v != record.vertical {
                    fail("morphism multiplicities disagree with stabilizers");
                }
            }
            Err(e) => fail(&format!("multiplicities failed: {e}")),
        }
    }
    match classify_branch_locus(&p) {
        Ok(_) => {}
        Err(e) => fail(&format!("branch classification gap: {e}")),
    }
    let r = &p.ramification_number;
    if *r > rational(2, 1) && *r < rational(7, 3) {
        fail("ramification number in the forbidden window (2, 7/3)");
    }
    if p.genus >= 2 {
        match check_order_bounds(&p) {
            Ok(None) => {}
            Ok(Some(what)) => fail(&what),
            Err(e) => fail(&format!("order bound check failed: {e}")),
        }
        match check_gap_theorem(&p) {
            Ok(true) => {}
            Ok(false) => fail("order lies in the forbidden gap (4(g-1), 6(g-1))"),
            Err(e) => fail(&format!("gap check failed: {e}")),
        }
        match check_prime_divisor_bound(&p) {
            Ok(true) => {}
            Ok(false) => fail("group order has a prime factor above g+1"),
            Err(e) => fail(&format!("prime bound check failed: {e}")),
        }
        // Prime-order cyclic subgroups with eligible quotient genus must be
        // horizontally unramified.
        if ramification::is_prime(group.order()) {
            let order = group.order();
            if p.genus >= 1 && (p.genus - 1) % order == 0 {
                let g1 = (p.genus - 1) / order + 1;
                if g1 > 1 && order > g1 + 1 {
                    match ramification::check_cyclic_unramified(group, g1) {
                        Ok(true) => {}
                        Ok(false) => fail("prime-cyclic cover has horizontal ramification"),
                        Err(e) => fail(&format!("cyclic unramified check failed: {e}")),
                    }
                }
            }
        }
    }
    violations
}

fn census_graph(
    graph: Arc<MultiGraph>,
    genus: u64,
    budget: usize,
) -> (GraphRecord, Vec<String>) {
    let key = hex(&graph.canonical_key());
    let mut violations = Vec::new();
    let aut_order = ActionGroup::automorphism_group_order(&graph);

    let search = match search_harmonic(&graph, budget) {
        Ok(s) => s,
        Err(_) => {
            return (
                GraphRecord {
                    key,
                    vertices: graph.vertex_count(),
                    edges: graph.edge_count(),
                    aut_order,
                    max_harmonic_order: 0,
                    witness_generators: Vec::new(),
                    witness_profile: None,
                    truncated: true,
                },
                violations,
            )
        }
    };

    for examined in &search.examined {
        let by_criterion = examined.is_harmonic();
        match examined.is_harmonic_by_definition(budget.max(examined.order() as usize + 1)) {
            Ok(by_definition) => {
                if by_criterion != by_definition {
                    violations.push(format!(
                        "graph {key} order {}: criterion ({by_criterion}) and definition ({by_definition}) disagree",
                        examined.order()
                    ));
                }
            }
            Err(e) => violations.push(format!(
                "graph {key} order {}: definition check failed: {e}",
                examined.order()
            )),
        }
        if by_criterion {
            violations.extend(check_harmonic_pair(examined, &key));
        }
    }
    if genus >= 2 {
        let hurwitz_cap = 6 * (genus - 1);
        if search.max_order > hurwitz_cap {
            violations.push(format!(
                "graph {key}: harmonic order {} above 6(g-1) = {hurwitz_cap}",
                search.max_order
            ));
        }
    }

    let witness_profile = profile(&search.witness).ok().map(|p| io::profile_doc(&p));
    let record = GraphRecord {
        key,
        vertices: graph.vertex_count(),
        edges: graph.edge_count(),
        aut_order,
        max_harmonic_order: search.max_order,
        witness_generators: io::action_maps(&search.witness),
        witness_profile,
        truncated: false,
    };
    (record, violations)
}

/// Runs the census: enumerate, search, verify, aggregate deterministically.
pub fn run_census(config: &CensusConfig) -> Result<CensusReport> {
    let graphs: Vec<Arc<MultiGraph>> = enumerate_graphs(config.genus, config.max_vertices)
        .into_iter()
        .map(Arc::new)
        .collect();

    let work = |graphs: &[Arc<MultiGraph>]| -> Vec<(GraphRecord, Vec<String>)> {
        graphs
            .par_iter()
            .map(|g| census_graph(Arc::clone(g), config.genus, config.budget))
            .collect()
    };
    let results = match config.jobs {
        Some(jobs) => rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .expect("worker pool")
            .install(|| work(&graphs)),
        None => work(&graphs),
    };

    let mut records = Vec::with_capacity(results.len());
    let mut violations = Vec::new();
    let mut truncated = false;
    let mut max_order = 0;
    for (record, mut graph_violations) in results {
        truncated |= record.truncated;
        max_order = max_order.max(record.max_harmonic_order);
        violations.append(&mut graph_violations);
        records.push(record);
    }
    records.sort_by(|a, b| a.key.cmp(&b.key));
    violations.sort();

    let note = if config.genus >= 2 {
        format!(
            "harmonic orders verified against the bounds 4(g-1) = {} and 6(g-1) = {}; \
             records are existence witnesses over |V| <= {}, not a computation of the \
             maximum over all graphs of this genus",
            4 * (config.genus - 1),
            6 * (config.genus - 1),
            config.max_vertices
        )
    } else {
        "genus below 2: the order bounds do not apply (harmonic actions of \
         unbounded order exist at genus 0 and 1), so only structural checks ran"
            .to_string()
    };

    Ok(CensusReport {
        genus: config.genus,
        max_vertices: config.max_vertices,
        graph_count: records.len(),
        max_harmonic_order: max_order,
        violations,
        truncated,
        note,
        records,
    })
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}
