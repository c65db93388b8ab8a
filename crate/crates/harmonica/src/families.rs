//! Named graphs and group actions used as golden instances: the barbell and
//! its involutions, the two Klein-four covers, decorated cycles with their
//! dihedral actions, doubled and starred trees, the genus-2 graph attaining
//! the order bound `6(g-1)`, and the necklace family attaining `4(g-1)`.

use std::sync::Arc;

use crate::action::{ActionGroup, Automorphism, DEFAULT_BUDGET};
use crate::error::{Error, Result};
use crate::multigraph::{MultiGraph, VertexId};
use crate::ramification::{rational, Rational};

/// Expected profile summary of a family instance.
#[derive(Clone, Debug)]
pub struct ExpectedProfile {
    pub order: u64,
    pub genus: u64,
    pub quotient_genus: u64,
    /// Branch vector sorted by descending `(r, w)`.
    pub branch_points: Vec<(u64, u64)>,
    pub ramification_number: Rational,
    pub harmonic: bool,
}

/// A graph, a group acting on it, and the profile the pair should produce.
#[derive(Clone, Debug)]
pub struct FamilyInstance {
    pub graph: Arc<MultiGraph>,
    pub group: ActionGroup,
    pub expected: ExpectedProfile,
}

/// The genus-2 barbell with its three involutions. Only the vertical
/// reflection and the half rotation act harmonically; the horizontal
/// reflection (their product) does not.
#[derive(Clone, Debug)]
pub struct Barbell {
    pub graph: Arc<MultiGraph>,
    /// Fixes all four vertices, swaps each doubled edge's two members.
    pub horizontal_reflection: Automorphism,
    /// Swaps the two bells preserving top and bottom.
    pub vertical_reflection: Automorphism,
    /// Swaps the two bells exchanging top and bottom.
    pub half_rotation: Automorphism,
}

pub fn barbell() -> Barbell {
    let graph = Arc::new(
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
    );
    let horizontal_reflection = Automorphism::from_names(
        &graph,
        &[],
        &[("ab1", "ab2"), ("ab2", "ab1"), ("cd1", "cd2"), ("cd2", "cd1")],
    )
    .unwrap();
    let vertical_reflection = Automorphism::from_names(
        &graph,
        &[("a", "d"), ("d", "a"), ("b", "c"), ("c", "b")],
        &[("ab1", "cd1"), ("cd1", "ab1"), ("ab2", "cd2"), ("cd2", "ab2")],
    )
    .unwrap();
    let half_rotation = Automorphism::from_names(
        &graph,
        &[("a", "d"), ("d", "a"), ("b", "c"), ("c", "b")],
        &[("ab1", "cd2"), ("cd2", "ab1"), ("ab2", "cd1"), ("cd1", "ab2")],
    )
    .unwrap();
    Barbell {
        graph,
        horizontal_reflection,
        vertical_reflection,
        half_rotation,
    }
}

/// Genus-3 graph (two squares joined by two rungs) with a Klein-four action
/// whose quotient map has only vertical ramification: one branch point with
/// `(r, w) = (1, 1)`.
pub fn klein_genus3() -> FamilyInstance {
    let graph = Arc::new(
        MultiGraph::from_literals(
            &["t1", "t2", "t3", "t4", "b1", "b2", "b3", "b4"],
            &[
                ("t12", "t1", "t2"),
                ("t23", "t2", "t3"),
                ("t34", "t3", "t4"),
                ("t41", "t4", "t1"),
                ("b12", "b1", "b2"),
                ("b23", "b2", "b3"),
                ("b34", "b3", "b4"),
                ("b41", "b4", "b1"),
                ("v1", "t1", "b1"),
                ("v3", "t3", "b3"),
            ],
        )
        .unwrap(),
    );
    // Half-turn of the whole picture.
    let rotation = Automorphism::from_names(
        &graph,
        &[
            ("t1", "b3"),
            ("b3", "t1"),
            ("t2", "b4"),
            ("b4", "t2"),
            ("t3", "b1"),
            ("b1", "t3"),
            ("t4", "b2"),
            ("b2", "t4"),
        ],
        &[
            ("t12", "b34"),
            ("b34", "t12"),
            ("t23", "b41"),
            ("b41", "t23"),
            ("t34", "b12"),
            ("b12", "t34"),
            ("t41", "b23"),
            ("b23", "t41"),
            ("v1", "v3"),
            ("v3", "v1"),
        ],
    )
    .unwrap();
    // Exchange of the squares, flipping both rungs in place.
    let swap = Automorphism::from_names(
        &graph,
        &[
            ("t1", "b1"),
            ("b1", "t1"),
            ("t2", "b2"),
            ("b2", "t2"),
            ("t3", "b3"),
            ("b3", "t3"),
            ("t4", "b4"),
            ("b4", "t4"),
        ],
        &[
            ("t12", "b12"),
            ("b12", "t12"),
            ("t23", "b23"),
            ("b23", "t23"),
            ("t34", "b34"),
            ("b34", "t34"),
            ("t41", "b41"),
            ("b41", "t41"),
        ],
    )
    .unwrap();
    let group =
        ActionGroup::generate(Arc::clone(&graph), vec![rotation, swap], DEFAULT_BUDGET).unwrap();
    FamilyInstance {
        graph,
        group,
        expected: ExpectedProfile {
            order: 4,
            genus: 3,
            quotient_genus: 1,
            branch_points: vec![(1, 1)],
            ramification_number: rational(1, 1),
            harmonic: true,
        },
    }
}

/// Genus-5 graph (four doubled petals and a doubled rung) with a Klein-four
/// action mixing horizontal and vertical ramification: one branch point with
/// `(r, w) = (2, 1)`.
pub fn klein_genus5() -> FamilyInstance {
    let graph = Arc::new(
        MultiGraph::from_literals(
            &["lt1", "lt2", "rt", "lb1", "lb2", "rb"],
            &[
                ("pt1a", "lt1", "rt"),
                ("pt1b", "lt1", "rt"),
                ("pt2a", "lt2", "rt"),
                ("pt2b", "lt2", "rt"),
                ("pb1a", "lb1", "rb"),
                ("pb1b", "lb1", "rb"),
                ("pb2a", "lb2", "rb"),
                ("pb2b", "lb2", "rb"),
                ("va", "rt", "rb"),
                ("vb", "rt", "rb"),
            ],
        )
        .unwrap(),
    );
    // Reflection across the horizontal bisector of the two rungs.
    let mirror = Automorphism::from_names(
        &graph,
        &[
            ("lt1", "lb1"),
            ("lb1", "lt1"),
            ("lt2", "lb2"),
            ("lb2", "lt2"),
            ("rt", "rb"),
            ("rb", "rt"),
        ],
        &[
            ("pt1a", "pb1b"),
            ("pb1b", "pt1a"),
            ("pt1b", "pb1a"),
            ("pb1a", "pt1b"),
            ("pt2a", "pb2b"),
            ("pb2b", "pt2a"),
            ("pt2b", "pb2a"),
            ("pb2a", "pt2b"),
        ],
    )
    .unwrap();
    // Fixes the two degree-6 vertices, exchanges the petals pairwise and
    // switches the rungs.
    let petal_swap = Automorphism::from_names(
        &graph,
        &[("lt1", "lt2"), ("lt2", "lt1"), ("lb1", "lb2"), ("lb2", "lb1")],
        &[
            ("pt1a", "pt2a"),
            ("pt2a", "pt1a"),
            ("pt1b", "pt2b"),
            ("pt2b", "pt1b"),
            ("pb1a", "pb2a"),
            ("pb2a", "pb1a"),
            ("pb1b", "pb2b"),
            ("pb2b", "pb1b"),
            ("va", "vb"),
            ("vb", "va"),
        ],
    )
    .unwrap();
    let group =
        ActionGroup::generate(Arc::clone(&graph), vec![mirror, petal_swap], DEFAULT_BUDGET)
            .unwrap();
    FamilyInstance {
        graph,
        group,
        expected: ExpectedProfile {
            order: 4,
            genus: 5,
            quotient_genus: 1,
            branch_points: vec![(2, 1)],
            ramification_number: rational(2, 1),
            harmonic: true,
        },
    }
}

/// A tree with a distinguished root.
#[derive(Clone, Debug)]
pub struct RootedTree {
    graph: MultiGraph,
    root: VertexId,
}

impl RootedTree {
    pub fn new(graph: MultiGraph, root_name: &str) -> Result<RootedTree> {
        let root = graph.vertex_by_name(root_name)?;
        if graph.genus()? != 0 {
            return Err(Error::BadTree {
                detail: "rooted tree must have genus 0".to_string(),
            });
        }
        Ok(RootedTree { graph, root })
    }

    /// A single root vertex, no edges.
    pub fn single_vertex() -> RootedTree {
        RootedTree {
            graph: MultiGraph::from_literals(&["r"], &[]).unwrap(),
            root: VertexId(0),
        }
    }

    /// A root with one pendant edge.
    pub fn single_edge() -> RootedTree {
        RootedTree::path(1)
    }

    /// A path with `k` edges hanging from the root.
    pub fn path(k: usize) -> RootedTree {
        let vertices: Vec<String> = std::iter::once("r".to_string())
            .chain((1..=k).map(|i| format!("p{i}")))
            .collect();
        let edges: Vec<(String, String, String)> = (1..=k)
            .map(|i| {
                let from = if i == 1 { "r".to_string() } else { format!("p{}", i - 1) };
                (format!("s{i}"), from, format!("p{i}"))
            })
            .collect();
        RootedTree {
            graph: MultiGraph::build_graph(vertices, edges).unwrap(),
            root: VertexId(0),
        }
    }

    /// A root with `k` pendant edges.
    pub fn star(k: usize) -> RootedTree {
        let vertices: Vec<String> = std::iter::once("r".to_string())
            .chain((1..=k).map(|i| format!("p{i}")))
            .collect();
        let edges: Vec<(String, String, String)> = (1..=k)
            .map(|i| (format!("s{i}"), "r".to_string(), format!("p{i}")))
            .collect();
        RootedTree {
            graph: MultiGraph::build_graph(vertices, edges).unwrap(),
            root: VertexId(0),
        }
    }

    pub fn graph(&self) -> &MultiGraph {
        &self.graph
    }

    pub fn root(&self) -> VertexId {
        self.root
    }

    pub fn edge_count(&self) -> usize {
        self.graph.edge_count()
    }
}

/// Appends a copy of `tree` whose root is identified with the existing
/// vertex `attach_to`; all other names get `prefix` prepended.
fn graft_tree_copy(
    tree: &RootedTree,
    prefix: &str,
    attach_to: &str,
    vertices: &mut Vec<String>,
    edges: &mut Vec<(String, String, String)>,
) {
    let g = tree.graph();
    let name_of = |v: VertexId| -> String {
        if v == tree.root() {
            attach_to.to_string()
        } else {
            format!("{prefix}{}", g.vertex_name(v))
        }
    };
    for v in g.vertices() {
        if v != tree.root() {
            vertices.push(name_of(v));
        }
    }
    for e in g.edges() {
        let (u, v) = g.ends(e);
        edges.push((format!("{prefix}{}", g.edge_name(e)), name_of(u), name_of(v)));
    }
}

type NamePairs = Vec<(String, String)>;

/// Name-level map sending copy `from_prefix` to copy `to_prefix`.
fn copy_swap_pairs(tree: &RootedTree, from_prefix: &str, to_prefix: &str) -> (NamePairs, NamePairs) {
    let g = tree.graph();
    let vertex_pairs = g
        .vertices()
        .filter(|&v| v != tree.root())
        .map(|v| {
            (
                format!("{from_prefix}{}", g.vertex_name(v)),
                format!("{to_prefix}{}", g.vertex_name(v)),
            )
        })
        .collect();
    let edge_pairs = g
        .edges()
        .map(|e| {
            (
                format!("{from_prefix}{}", g.edge_name(e)),
                format!("{to_prefix}{}", g.edge_name(e)),
            )
        })
        .collect();
    (vertex_pairs, edge_pairs)
}

fn automorphism_from_owned_pairs(
    graph: &MultiGraph,
    vertex_pairs: &[(String, String)],
    edge_pairs: &[(String, String)],
) -> Result<Automorphism> {
    let v: Vec<(&str, &str)> = vertex_pairs
        .iter()
        .map(|(a, b)| (a.as_str(), b.as_str()))
        .collect();
    let e: Vec<(&str, &str)> = edge_pairs
        .iter()
        .map(|(a, b)| (a.as_str(), b.as_str()))
        .collect();
    Automorphism::from_names(graph, &v, &e)
}

/// An `n`-cycle with two copies of a rooted tree grafted at every cycle
/// vertex, together with its dihedral action of order `2n`. Named elements:
/// the rotation, the reflection through vertex `c0`, and the reflection
/// through edge `k0`.
#[derive(Clone, Debug)]
pub struct DecoratedCycle {
    pub instance: FamilyInstance,
    pub rotation: Automorphism,
    pub vertex_reflection: Automorphism,
    pub edge_reflection: Automorphism,
}

pub fn decorated_cycle(n: usize, tree: &RootedTree) -> Result<DecoratedCycle> {
    assert!(n >= 3, "cycle length must be at least 3");
    if tree.edge_count() == 0 {
        // A bare cycle has every neighborhood inside the cycle orbit, so the
        // dihedral action would be degenerate.
        return Err(Error::DegenerateTree);
    }
    let mut vertices: Vec<String> = (0..n).map(|i| format!("c{i}")).collect();
    let mut edges: Vec<(String, String, String)> = (0..n)
        .map(|i| (format!("k{i}"), format!("c{i}"), format!("c{}", (i + 1) % n)))
        .collect();
    for i in 0..n {
        graft_tree_copy(tree, &format!("a{i}."), &format!("c{i}"), &mut vertices, &mut edges);
        graft_tree_copy(tree, &format!("b{i}."), &format!("c{i}"), &mut vertices, &mut edges);
    }
    let graph = Arc::new(MultiGraph::build_graph(vertices, edges)?);

    let mut rot_v: Vec<(String, String)> = Vec::new();
    let mut rot_e: Vec<(String, String)> = Vec::new();
    let mut refl_v: Vec<(String, String)> = Vec::new();
    let mut refl_e: Vec<(String, String)> = Vec::new();
    for i in 0..n {
        let next = (i + 1) % n;
        let mirror = (n - i) % n;
        rot_v.push((format!("c{i}"), format!("c{next}")));
        rot_e.push((format!("k{i}"), format!("k{next}")));
        refl_v.push((format!("c{i}"), format!("c{mirror}")));
        // k_i = {c_i, c_{i+1}} reflects onto {c_{-i}, c_{-i-1}} = k_{-i-1}.
        refl_e.push((format!("k{i}"), format!("k{}", (n - i - 1) % n)));
        for (prefix, image_rot, image_refl) in [
            (format!("a{i}."), format!("a{next}."), format!("b{mirror}.")),
            (format!("b{i}."), format!("b{next}."), format!("a{mirror}.")),
        ] {
            let (vr, er) = copy_swap_pairs(tree, &prefix, &image_rot);
            rot_v.extend(vr);
            rot_e.extend(er);
            let (vm, em) = copy_swap_pairs(tree, &prefix, &image_refl);
            refl_v.extend(vm);
            refl_e.extend(em);
        }
    }
    let rotation = automorphism_from_owned_pairs(&graph, &rot_v, &rot_e)?;
    let vertex_reflection = automorphism_from_owned_pairs(&graph, &refl_v, &refl_e)?;
    let edge_reflection = rotation.compose(&vertex_reflection);
    let budget = DEFAULT_BUDGET.max(2 * n + 1);
    let group = ActionGroup::generate(
        Arc::clone(&graph),
        vec![rotation.clone(), vertex_reflection.clone()],
        budget,
    )?;
    assert_eq!(group.order(), 2 * n as u64, "dihedral action order");
    Ok(DecoratedCycle {
        instance: FamilyInstance {
            graph,
            group,
            expected: ExpectedProfile {
                order: 2 * n as u64,
                genus: 1,
                quotient_genus: 0,
                branch_points: vec![(2, 1)],
                ramification_number: rational(2, 1),
                harmonic: true,
            },
        },
        rotation,
        vertex_reflection,
        edge_reflection,
    })
}

/// Two copies of a rooted tree joined by an edge between the roots, with the
/// swap involution. One branch point with `(r, w) = (1, 1)`, so the order-2
/// group satisfies `|Γ| = 2/(2 - R)` with `R = 1`.
pub fn tree_double(tree: &RootedTree) -> Result<FamilyInstance> {
    if tree.edge_count() == 0 {
        // With a bare vertex on each side the swap collapses everything:
        // both neighborhoods sit inside the single orbit, so the involution
        // is degenerate rather than harmonic.
        return Err(Error::DegenerateTree);
    }
    let g = tree.graph();
    let root_name = g.vertex_name(tree.root());
    let a_root = format!("a.{root_name}");
    let b_root = format!("b.{root_name}");
    let mut vertices: Vec<String> = vec![a_root.clone(), b_root.clone()];
    let mut edges: Vec<(String, String, String)> =
        vec![("bridge".to_string(), a_root.clone(), b_root.clone())];
    graft_tree_copy(tree, "a.", &a_root, &mut vertices, &mut edges);
    graft_tree_copy(tree, "b.", &b_root, &mut vertices, &mut edges);
    let graph = Arc::new(MultiGraph::build_graph(vertices, edges)?);

    let mut vpairs = vec![
        (a_root.clone(), b_root.clone()),
        (b_root.clone(), a_root.clone()),
    ];
    let mut epairs = Vec::new();
    let (va, ea) = copy_swap_pairs(tree, "a.", "b.");
    let (vb, eb) = copy_swap_pairs(tree, "b.", "a.");
    vpairs.extend(va);
    vpairs.extend(vb);
    epairs.extend(ea);
    epairs.extend(eb);
    let swap = automorphism_from_owned_pairs(&graph, &vpairs, &epairs)?;
    let group = ActionGroup::generate(Arc::clone(&graph), vec![swap], DEFAULT_BUDGET)?;
    debug_assert_eq!(g.genus().unwrap(), 0);
    Ok(FamilyInstance {
        graph,
        group,
        expected: ExpectedProfile {
            order: 2,
            genus: 0,
            quotient_genus: 0,
            branch_points: vec![(1, 1)],
            ramification_number: rational(1, 1),
            harmonic: true,
        },
    })
}

/// A finite group given by labels and a multiplication table; validated on
/// construction (inputs are tiny, so the cubic associativity scan is fine).
#[derive(Clone, Debug)]
pub struct GroupTable {
    labels: Vec<String>,
    table: Vec<Vec<usize>>,
    identity: usize,
}

impl GroupTable {
    pub fn new(labels: Vec<String>, table: Vec<Vec<usize>>) -> Result<GroupTable> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::InvalidGroupTable {
                detail: "empty table".to_string(),
            });
        }
        if table.len() != n || table.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidGroupTable {
                detail: "table is not square".to_string(),
            });
        }
        if table.iter().flatten().any(|&x| x >= n) {
            return Err(Error::InvalidGroupTable {
                detail: "entry out of range".to_string(),
            });
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or_else(|| Error::InvalidGroupTable {
                detail: "no identity element".to_string(),
            })?;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(Error::InvalidGroupTable {
                            detail: format!("associativity fails at ({a}, {b}, {c})"),
                        });
                    }
                }
            }
        }
        for (a, row) in table.iter().enumerate() {
            if !row.contains(&identity) {
                return Err(Error::InvalidGroupTable {
                    detail: format!("element {a} has no inverse"),
                });
            }
        }
        Ok(GroupTable {
            labels,
            table,
            identity,
        })
    }

    pub fn cyclic(k: usize) -> GroupTable {
        let labels = (0..k).map(|i| format!("g{i}")).collect();
        let table = (0..k)
            .map(|i| (0..k).map(|j| (i + j) % k).collect())
            .collect();
        GroupTable::new(labels, table).unwrap()
    }

    pub fn klein_four() -> GroupTable {
        let labels = ["e", "a", "b", "c"].map(String::from).to_vec();
        let table = (0..4).map(|i| (0..4).map(|j| i ^ j).collect()).collect();
        GroupTable::new(labels, table).unwrap()
    }

    pub fn order(&self) -> usize {
        self.labels.len()
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn product(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn is_cyclic(&self) -> bool {
        let n = self.order();
        (0..n).any(|g| {
            let mut x = g;
            let mut count = 1;
            while x != self.identity {
                x = self.product(x, g);
                count += 1;
            }
            count == n
        })
    }
}

/// Copies of a rooted tree joined at their roots, one per group element,
/// with the group permuting the copies by left translation. The central
/// vertex is the unique branch point, with `r = |Γ|` and `w = 0`; the
/// stabilizer there is the whole group, so non-cyclic stabilizers occur.
pub fn tree_star(tree: &RootedTree, table: &GroupTable) -> Result<FamilyInstance> {
    if tree.edge_count() == 0 {
        return Err(Error::DegenerateTree);
    }
    let k = table.order();
    assert!(k >= 2, "tree_star needs a group of order at least 2");
    let mut vertices: Vec<String> = vec!["hub".to_string()];
    let mut edges: Vec<(String, String, String)> = Vec::new();
    for i in 0..k {
        graft_tree_copy(tree, &format!("{}.", table.label(i)), "hub", &mut vertices, &mut edges);
    }
    let graph = Arc::new(MultiGraph::build_graph(vertices, edges)?);

    let mut generators = Vec::new();
    for g in 0..k {
        let mut vpairs = Vec::new();
        let mut epairs = Vec::new();
        for h in 0..k {
            let image = table.product(g, h);
            let (vp, ep) = copy_swap_pairs(
                tree,
                &format!("{}.", table.label(h)),
                &format!("{}.", table.label(image)),
            );
            vpairs.extend(vp);
            epairs.extend(ep);
        }
        generators.push(automorphism_from_owned_pairs(&graph, &vpairs, &epairs)?);
    }
    let budget = DEFAULT_BUDGET.max(k + 1);
    let group = ActionGroup::generate(Arc::clone(&graph), generators, budget)?;
    assert_eq!(group.order(), k as u64, "left translation action order");
    let r = k as u64;
    Ok(FamilyInstance {
        graph,
        group,
        expected: ExpectedProfile {
            order: r,
            genus: 0,
            quotient_genus: 0,
            branch_points: vec![(r, 0)],
            ramification_number: rational(2 * (r as i64 - 1), r as i64),
            harmonic: true,
        },
    })
}

/// The genus-2 graph attaining the order bound `6(g-1)`: two hubs joined by
/// three parallel edges, each hub carrying three pendant edges, with the
/// order-6 action generated by a hub-fixing rotation and the hub swap.
pub fn hurwitz_genus2() -> FamilyInstance {
    let graph = Arc::new(
        MultiGraph::from_literals(
            &["L", "R", "L1", "L2", "L3", "R1", "R2", "R3"],
            &[
                ("m1", "L", "R"),
                ("m2", "L", "R"),
                ("m3", "L", "R"),
                ("l1", "L", "L1"),
                ("l2", "L", "L2"),
                ("l3", "L", "L3"),
                ("r1", "R", "R1"),
                ("r2", "R", "R2"),
                ("r3", "R", "R3"),
            ],
        )
        .unwrap(),
    );
    // Order-3 rotation fixing both hubs and permuting all edges.
    let rotation = Automorphism::from_names(
        &graph,
        &[
            ("L1", "L2"),
            ("L2", "L3"),
            ("L3", "L1"),
            ("R1", "R2"),
            ("R2", "R3"),
            ("R3", "R1"),
        ],
        &[
            ("m1", "m2"),
            ("m2", "m3"),
            ("m3", "m1"),
            ("l1", "l2"),
            ("l2", "l3"),
            ("l3", "l1"),
            ("r1", "r2"),
            ("r2", "r3"),
            ("r3", "r1"),
        ],
    )
    .unwrap();
    // Hub swap fixing each connecting edge (which become vertical in the
    // quotient by the swap).
    let flip = Automorphism::from_names(
        &graph,
        &[
            ("L", "R"),
            ("R", "L"),
            ("L1", "R1"),
            ("R1", "L1"),
            ("L2", "R2"),
            ("R2", "L2"),
            ("L3", "R3"),
            ("R3", "L3"),
        ],
        &[
            ("l1", "r1"),
            ("r1", "l1"),
            ("l2", "r2"),
            ("r2", "l2"),
            ("l3", "r3"),
            ("r3", "l3"),
        ],
    )
    .unwrap();
    let group =
        ActionGroup::generate(Arc::clone(&graph), vec![rotation, flip], DEFAULT_BUDGET).unwrap();
    FamilyInstance {
        graph,
        group,
        expected: ExpectedProfile {
            order: 6,
            genus: 2,
            quotient_genus: 0,
            branch_points: vec![(3, 1)],
            ramification_number: rational(7, 3),
            harmonic: true,
        },
    }
}

/// The genus-`g` necklace of `g-1` squares joined at shared corner vertices,
/// with the harmonic action of order `4(g-1)` generated by the necklace
/// rotation, a reflection, and the inner/outer swap.
pub fn lower_bound_family(g: u64) -> Result<FamilyInstance> {
    assert!(g >= 3, "the necklace family starts at genus 3");
    let n = (g - 1) as usize;
    let mut vertices = Vec::new();
    for i in 0..n {
        vertices.push(format!("j{i}"));
        vertices.push(format!("t{i}"));
        vertices.push(format!("b{i}"));
    }
    let mut edges = Vec::new();
    for i in 0..n {
        let next = (i + 1) % n;
        edges.push((format!("et{i}l"), format!("j{i}"), format!("t{i}")));
        edges.push((format!("et{i}r"), format!("t{i}"), format!("j{next}")));
        edges.push((format!("eb{i}l"), format!("j{i}"), format!("b{i}")));
        edges.push((format!("eb{i}r"), format!("b{i}"), format!("j{next}")));
    }
    let graph = Arc::new(MultiGraph::build_graph(vertices, edges)?);

    let mut rot_v = Vec::new();
    let mut rot_e = Vec::new();
    let mut refl_v = Vec::new();
    let mut refl_e = Vec::new();
    let mut swap_v = Vec::new();
    let mut swap_e = Vec::new();
    for i in 0..n {
        let next = (i + 1) % n;
        let mirror_j = (n - i) % n;
        let mirror_sq = (n - i - 1) % n;
        rot_v.push((format!("j{i}"), format!("j{next}")));
        rot_v.push((format!("t{i}"), format!("t{next}")));
        rot_v.push((format!("b{i}"), format!("b{next}")));
        for side in ["t", "b"] {
            rot_e.push((format!("e{side}{i}l"), format!("e{side}{next}l")));
            rot_e.push((format!("e{side}{i}r"), format!("e{side}{next}r")));
            refl_e.push((format!("e{side}{i}l"), format!("e{side}{mirror_sq}r")));
            refl_e.push((format!("e{side}{i}r"), format!("e{side}{mirror_sq}l")));
        }
        refl_v.push((format!("j{i}"), format!("j{mirror_j}")));
        refl_v.push((format!("t{i}"), format!("t{mirror_sq}")));
        refl_v.push((format!("b{i}"), format!("b{mirror_sq}")));
        swap_v.push((format!("t{i}"), format!("b{i}")));
        swap_v.push((format!("b{i}"), format!("t{i}")));
        swap_e.push((format!("et{i}l"), format!("eb{i}l")));
        swap_e.push((format!("eb{i}l"), format!("et{i}l")));
        swap_e.push((format!("et{i}r"), format!("eb{i}r")));
        swap_e.push((format!("eb{i}r"), format!("et{i}r")));
    }
    let rotation = automorphism_from_owned_pairs(&graph, &rot_v, &rot_e)?;
    let reflection = automorphism_from_owned_pairs(&graph, &refl_v, &refl_e)?;
    let inner_outer = automorphism_from_owned_pairs(&graph, &swap_v, &swap_e)?;
    let budget = DEFAULT_BUDGET.max(4 * n + 1);
    let group = ActionGroup::generate(
        Arc::clone(&graph),
        vec![rotation, reflection, inner_outer],
        budget,
    )?;
    assert_eq!(group.order(), 4 * (g - 1), "necklace action order");
    Ok(FamilyInstance {
        graph,
        group,
        expected: ExpectedProfile {
            order: 4 * (g - 1),
            genus: g,
            quotient_genus: 0,
            branch_points: vec![(4, 0), (2, 0)],
            ramification_number: rational(5, 2),
            harmonic: true,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ramification::{classify_branch_locus, profile, verify_riemann_hurwitz, BranchCase, Rgt2Case};

    fn check_instance(instance: &FamilyInstance) {
        assert_eq!(instance.graph.genus().unwrap(), instance.expected.genus);
        assert_eq!(instance.group.order(), instance.expected.order);
        assert_eq!(instance.group.is_harmonic(), instance.expected.harmonic);
        if instance.expected.harmonic {
            let p = profile(&instance.group).unwrap();
            assert_eq!(p.quotient_genus, instance.expected.quotient_genus);
            let vector: Vec<(u64, u64)> = p.branch_points.iter().map(|b| (b.r, b.w)).collect();
            assert_eq!(vector, instance.expected.branch_points);
            assert_eq!(p.ramification_number, instance.expected.ramification_number);
            assert!(verify_riemann_hurwitz(&p));
        }
    }

    #[test]
    fn barbell_involution_identities() {
        let fam = barbell();
        assert_eq!(fam.graph.genus().unwrap(), 2);
        assert_eq!(
            fam.vertical_reflection.compose(&fam.half_rotation),
            fam.horizontal_reflection
        );
        for a in [
            &fam.horizontal_reflection,
            &fam.vertical_reflection,
            &fam.half_rotation,
        ] {
            assert_eq!(a.order(), 2);
        }
    }

    #[test]
    fn klein_instances_match_expectations() {
        check_instance(&klein_genus3());
        check_instance(&klein_genus5());
    }

    #[test]
    fn hurwitz_genus2_matches_expectations() {
        let fam = hurwitz_genus2();
        check_instance(&fam);
        assert_eq!(fam.graph.vertex_count(), 8);
        assert_eq!(fam.graph.edge_count(), 9);
        assert_eq!(fam.expected.order, 6 * (fam.expected.genus - 1));
        // Quotient is a single edge.
        let (quotient, _) = fam.group.quotient();
        assert_eq!(quotient.vertex_count(), 2);
        assert_eq!(quotient.edge_count(), 1);
        // Degree-6 hub neighborhood.
        let hub = fam.graph.vertex_by_name("L").unwrap();
        assert_eq!(fam.graph.neighborhood(hub).unwrap().edges.len(), 6);
        let p = profile(&fam.group).unwrap();
        assert_eq!(
            classify_branch_locus(&p).unwrap(),
            BranchCase::Rgt2Min(Rgt2Case::Single)
        );
    }

    #[test]
    fn decorated_cycle_matches_expectations() {
        let tree = RootedTree::single_edge();
        let dec = decorated_cycle(6, &tree).unwrap();
        check_instance(&dec.instance);
        assert_eq!(dec.instance.graph.vertex_count(), 18);
        assert_eq!(dec.instance.graph.edge_count(), 18);
    }

    #[test]
    fn decorated_cycle_with_deeper_trees() {
        let dec = decorated_cycle(4, &RootedTree::path(2)).unwrap();
        check_instance(&dec.instance);
        let dec = decorated_cycle(3, &RootedTree::star(2)).unwrap();
        check_instance(&dec.instance);
    }

    #[test]
    fn decorated_cycle_rejects_bare_cycles() {
        let tree = RootedTree::single_vertex();
        assert_eq!(decorated_cycle(5, &tree).unwrap_err(), Error::DegenerateTree);
    }

    #[test]
    fn tree_double_matches_expectations() {
        // Single-edge tree: the doubled tree is the path with three edges and
        // the swap is its harmonic end-for-end reflection, R = 1.
        let instance = tree_double(&RootedTree::single_edge()).unwrap();
        check_instance(&instance);
        assert_eq!(instance.graph.vertex_count(), 4);
        assert_eq!(instance.graph.edge_count(), 3);
        // |Γ| = 2/(2-R).
        assert_eq!(
            rational(2, 1) / (rational(2, 1) - instance.expected.ramification_number.clone()),
            rational(instance.expected.order as i64, 1)
        );

        let deeper = tree_double(&RootedTree::path(2)).unwrap();
        check_instance(&deeper);
    }

    #[test]
    fn tree_double_rejects_bare_vertices() {
        // With single-vertex sides the swap is degenerate (its quotient
        // collapses the bridge and everything with it), so the family
        // refuses to build the instance.
        assert_eq!(
            tree_double(&RootedTree::single_vertex()).unwrap_err(),
            Error::DegenerateTree
        );
    }

    #[test]
    fn tree_star_matches_expectations() {
        let instance = tree_star(&RootedTree::single_edge(), &GroupTable::cyclic(3)).unwrap();
        check_instance(&instance);
        let p = profile(&instance.group).unwrap();
        let vector: Vec<(u64, u64)> = p.branch_points.iter().map(|b| (b.r, b.w)).collect();
        assert_eq!(vector, vec![(3, 0)]);
        // |Γ| = 2/(2-R).
        assert_eq!(
            rational(2, 1) / (rational(2, 1) - p.ramification_number.clone()),
            rational(3, 1)
        );
    }

    #[test]
    fn tree_star_supports_non_cyclic_stabilizers() {
        let table = GroupTable::klein_four();
        assert!(!table.is_cyclic());
        let instance = tree_star(&RootedTree::single_edge(), &table).unwrap();
        check_instance(&instance);
        let hub = instance.graph.vertex_by_name("hub").unwrap();
        let orbits = instance.group.orbits_and_stabilizers();
        assert_eq!(orbits.stabilizer_order[hub.index()], 4);
    }

    #[test]
    fn tree_star_order_two_has_horizontal_branch() {
        let instance = tree_star(&RootedTree::single_edge(), &GroupTable::cyclic(2)).unwrap();
        check_instance(&instance);
        assert_eq!(instance.expected.branch_points, vec![(2, 0)]);
    }

    #[test]
    fn tree_star_rejects_bare_trees() {
        assert_eq!(
            tree_star(&RootedTree::single_vertex(), &GroupTable::cyclic(3)).unwrap_err(),
            Error::DegenerateTree
        );
    }

    #[test]
    fn group_table_validation() {
        assert!(GroupTable::new(
            vec!["e".into(), "x".into()],
            vec![vec![0, 1], vec![1, 1]],
        )
        .is_err());
        let c6 = GroupTable::cyclic(6);
        assert!(c6.is_cyclic());
        assert_eq!(c6.identity(), 0);
    }

    #[test]
    fn lower_bound_family_matches_expectations() {
        for g in [3u64, 7] {
            let instance = lower_bound_family(g).unwrap();
            check_instance(&instance);
            assert_eq!(instance.graph.vertex_count() as u64, 3 * (g - 1));
            assert_eq!(instance.graph.edge_count() as u64, 4 * (g - 1));
        }
    }
}
