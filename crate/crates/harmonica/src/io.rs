//! JSON codecs for graphs, morphisms, actions and profiles, plus DOT export.
//!
//! The file formats are fixed:
//!
//! - graph: `{"vertices":["a",…],"edges":[{"id":"e1","ends":["a","b"]},…]}`
//! - morphism: `{"vertex_map":{…},"edge_map":{"e1":"f1","e2":null,…}}`
//!   with `null` meaning the edge is collapsed
//! - action: `{"generators":[{"vertex_map":{…},"edge_map":{…}},…]}`
//! - profile: `{"order":…,"genus":…,"quotient_genus":…,
//!   "branch_points":[{"r":…,"w":…}],"R":"7/3"}` with `R` a reduced
//!   fraction string

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::action::{ActionGroup, Automorphism};
use crate::error::{Error, Result};
use crate::morphism::{EdgeImage, GraphMorphism};
use crate::multigraph::MultiGraph;
use crate::ramification::RamificationProfile;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GraphDoc {
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeDoc>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EdgeDoc {
    pub id: String,
    pub ends: [String; 2],
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MorphismDoc {
    pub vertex_map: BTreeMap<String, String>,
    pub edge_map: BTreeMap<String, Option<String>>,
}

/// One automorphism as total name maps.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MapsDoc {
    pub vertex_map: BTreeMap<String, String>,
    pub edge_map: BTreeMap<String, String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ActionDoc {
    pub generators: Vec<MapsDoc>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BranchPointDoc {
    pub r: u64,
    pub w: u64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProfileDoc {
    pub order: u64,
    pub genus: u64,
    pub quotient_genus: u64,
    pub branch_points: Vec<BranchPointDoc>,
    #[serde(rename = "R")]
    pub ramification_number: String,
}

fn parse_error<E: std::fmt::Display>(err: E) -> Error {
    Error::Parse {
        detail: err.to_string(),
    }
}

fn json_error(err: serde_json::Error) -> Error {
    Error::Parse {
        detail: format!("line {}, column {}: {err}", err.line(), err.column()),
    }
}

pub fn parse_graph(json: &str) -> Result<MultiGraph> {
    let doc: GraphDoc = serde_json::from_str(json).map_err(json_error)?;
    MultiGraph::build_graph(
        doc.vertices,
        doc.edges
            .into_iter()
            .map(|e| (e.id, e.ends[0].clone(), e.ends[1].clone())),
    )
}

pub fn graph_doc(graph: &MultiGraph) -> GraphDoc {
    GraphDoc {
        vertices: graph.vertices().map(|v| graph.vertex_name(v).to_string()).collect(),
        edges: graph
            .edges()
            .map(|e| {
                let (u, v) = graph.ends(e);
                EdgeDoc {
                    id: graph.edge_name(e).to_string(),
                    ends: [
                        graph.vertex_name(u).to_string(),
                        graph.vertex_name(v).to_string(),
                    ],
                }
            })
            .collect(),
    }
}

pub fn serialize_graph(graph: &MultiGraph) -> String {
    serde_json::to_string_pretty(&graph_doc(graph)).expect("graph docs serialize")
}

/// Parses a morphism between two already-loaded graphs. The maps must be
/// total; unknown names are parse errors.
pub fn parse_morphism(
    source: &Arc<MultiGraph>,
    target: &Arc<MultiGraph>,
    json: &str,
) -> Result<GraphMorphism> {
    let doc: MorphismDoc = serde_json::from_str(json).map_err(json_error)?;
    let mut vertex_map = Vec::with_capacity(source.vertex_count());
    for v in source.vertices() {
        let name = source.vertex_name(v);
        let image = doc
            .vertex_map
            .get(name)
            .ok_or_else(|| parse_error(format!("vertex_map is missing '{name}'")))?;
        vertex_map.push(
            target
                .vertex_by_name(image)
                .map_err(|_| parse_error(format!("unknown target vertex '{image}'")))?,
        );
    }
    let mut edge_map = Vec::with_capacity(source.edge_count());
    for e in source.edges() {
        let name = source.edge_name(e);
        let image = doc
            .edge_map
            .get(name)
            .ok_or_else(|| parse_error(format!("edge_map is missing '{name}'")))?;
        edge_map.push(match image {
            None => EdgeImage::Collapsed,
            Some(f) => EdgeImage::Edge(
                target
                    .edge_by_name(f)
                    .map_err(|_| parse_error(format!("unknown target edge '{f}'")))?,
            ),
        });
    }
    GraphMorphism::build(Arc::clone(source), Arc::clone(target), vertex_map, edge_map)
}

pub fn morphism_doc(morphism: &GraphMorphism) -> MorphismDoc {
    let source = morphism.source();
    let target = morphism.target();
    MorphismDoc {
        vertex_map: source
            .vertices()
            .map(|v| {
                (
                    source.vertex_name(v).to_string(),
                    target.vertex_name(morphism.vertex_image(v)).to_string(),
                )
            })
            .collect(),
        edge_map: source
            .edges()
            .map(|e| {
                let image = match morphism.edge_image(e) {
                    EdgeImage::Collapsed => None,
                    EdgeImage::Edge(f) => Some(target.edge_name(f).to_string()),
                };
                (source.edge_name(e).to_string(), image)
            })
            .collect(),
    }
}

pub fn serialize_morphism(morphism: &GraphMorphism) -> String {
    serde_json::to_string_pretty(&morphism_doc(morphism)).expect("morphism docs serialize")
}

fn automorphism_from_doc(graph: &MultiGraph, doc: &MapsDoc) -> Result<Automorphism> {
    let mut vertex_perm = Vec::with_capacity(graph.vertex_count());
    for v in graph.vertices() {
        let name = graph.vertex_name(v);
        let image = doc
            .vertex_map
            .get(name)
            .ok_or_else(|| parse_error(format!("vertex_map is missing '{name}'")))?;
        vertex_perm.push(
            graph
                .vertex_by_name(image)
                .map_err(|_| parse_error(format!("unknown vertex '{image}'")))?,
        );
    }
    let mut edge_perm = Vec::with_capacity(graph.edge_count());
    for e in graph.edges() {
        let name = graph.edge_name(e);
        let image = doc
            .edge_map
            .get(name)
            .ok_or_else(|| parse_error(format!("edge_map is missing '{name}'")))?;
        edge_perm.push(
            graph
                .edge_by_name(image)
                .map_err(|_| parse_error(format!("unknown edge '{image}'")))?,
        );
    }
    // Bijectivity or incidence failures on an action file are input errors.
    Automorphism::build(graph, vertex_perm, edge_perm).map_err(parse_error)
}

/// Parses an action file and generates the group it spans.
pub fn parse_action(graph: &Arc<MultiGraph>, json: &str, budget: usize) -> Result<ActionGroup> {
    let doc: ActionDoc = serde_json::from_str(json).map_err(json_error)?;
    let generators = doc
        .generators
        .iter()
        .map(|g| automorphism_from_doc(graph, g))
        .collect::<Result<Vec<_>>>()?;
    ActionGroup::generate(Arc::clone(graph), generators, budget)
}

pub fn automorphism_maps(graph: &MultiGraph, aut: &Automorphism) -> MapsDoc {
    MapsDoc {
        vertex_map: graph
            .vertices()
            .map(|v| {
                (
                    graph.vertex_name(v).to_string(),
                    graph.vertex_name(aut.vertex_image(v)).to_string(),
                )
            })
            .collect(),
        edge_map: graph
            .edges()
            .map(|e| {
                (
                    graph.edge_name(e).to_string(),
                    graph.edge_name(aut.edge_image(e)).to_string(),
                )
            })
            .collect(),
    }
}

/// Generator maps of an action (the generating set, not all elements).
pub fn action_maps(group: &ActionGroup) -> Vec<MapsDoc> {
    let graph = group.graph();
    group
        .generators()
        .iter()
        .map(|g| automorphism_maps(graph, g))
        .collect()
}

pub fn action_doc(group: &ActionGroup) -> ActionDoc {
    ActionDoc {
        generators: action_maps(group),
    }
}

pub fn serialize_action(group: &ActionGroup) -> String {
    serde_json::to_string_pretty(&action_doc(group)).expect("action docs serialize")
}

pub fn profile_doc(profile: &RamificationProfile) -> ProfileDoc {
    ProfileDoc {
        order: profile.group_order,
        genus: profile.genus,
        quotient_genus: profile.quotient_genus,
        branch_points: profile
            .branch_points
            .iter()
            .map(|b| BranchPointDoc { r: b.r, w: b.w })
            .collect(),
        ramification_number: profile.ramification_number.to_string(),
    }
}

pub fn serialize_profile(profile: &RamificationProfile) -> String {
    serde_json::to_string_pretty(&profile_doc(profile)).expect("profile docs serialize")
}

/// DOT rendering options: dash the edges a morphism collapses, and label
/// branch points of a profile whose quotient vertices live in this graph.
#[derive(Default)]
pub struct DotOptions<'a> {
    pub vertical_of: Option<&'a GraphMorphism>,
    pub branch_points: Option<&'a RamificationProfile>,
}

pub fn graph_to_dot(graph: &MultiGraph, options: &DotOptions) -> String {
    let mut vertical = vec![false; graph.edge_count()];
    if let Some(morphism) = options.vertical_of {
        assert_eq!(
            morphism.source(),
            graph,
            "vertical edges come from a morphism out of this graph"
        );
        for e in graph.edges() {
            vertical[e.index()] = morphism.is_vertical(e);
        }
    }
    let mut branch_label: BTreeMap<usize, String> = BTreeMap::new();
    if let Some(profile) = options.branch_points {
        for bp in &profile.branch_points {
            branch_label.insert(bp.quotient_vertex.index(), format!("(r={}, w={})", bp.r, bp.w));
        }
    }
    let mut out = String::from("graph {\n");
    for v in graph.vertices() {
        let name = graph.vertex_name(v);
        match branch_label.get(&v.index()) {
            Some(label) => {
                out.push_str(&format!("  \"{name}\" [label=\"{name} {label}\"];\n"))
            }
            None => out.push_str(&format!("  \"{name}\";\n")),
        }
    }
    for e in graph.edges() {
        let (u, v) = graph.ends(e);
        let style = if vertical[e.index()] { ", style=dashed" } else { "" };
        out.push_str(&format!(
            "  \"{}\" -- \"{}\" [label=\"{}\"{style}];\n",
            graph.vertex_name(u),
            graph.vertex_name(v),
            graph.edge_name(e)
        ));
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::DEFAULT_BUDGET;
    use crate::families;
    use crate::ramification::profile;

    fn barbell_json() -> String {
        serialize_graph(&families::barbell().graph)
    }

    #[test]
    fn graph_round_trip_preserves_canonical_form() {
        let fam = families::barbell();
        let parsed = parse_graph(&barbell_json()).unwrap();
        assert_eq!(parsed, *fam.graph);
        assert_eq!(parsed.canonical_key(), fam.graph.canonical_key());
    }

    #[test]
    fn graph_schema_is_exact() {
        let json = barbell_json();
        let value: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert!(value.get("vertices").is_some());
        let edges = value.get("edges").unwrap().as_array().unwrap();
        assert!(edges[0].get("id").is_some());
        assert!(edges[0].get("ends").is_some());
    }

    #[test]
    fn malformed_graph_json_is_a_parse_error() {
        assert!(matches!(
            parse_graph("{\"vertices\": [1, 2]}"),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn morphism_round_trip() {
        let fam = families::hurwitz_genus2();
        let (quotient, morphism) = fam.group.quotient();
        let json = serialize_morphism(&morphism);
        let parsed = parse_morphism(&fam.graph, &quotient, &json).unwrap();
        for v in fam.graph.vertices() {
            assert_eq!(parsed.vertex_image(v), morphism.vertex_image(v));
        }
        for e in fam.graph.edges() {
            assert_eq!(parsed.edge_image(e), morphism.edge_image(e));
        }
        // Collapsed edges round-trip through null.
        let value: serde_json::Value = serde_json::from_str(&json).unwrap();
        let edge_map = value.get("edge_map").unwrap().as_object().unwrap();
        assert!(edge_map.get("m1").unwrap().is_null());
    }

    #[test]
    fn action_round_trip() {
        let fam = families::hurwitz_genus2();
        let json = serialize_action(&fam.group);
        let parsed = parse_action(&fam.graph, &json, DEFAULT_BUDGET).unwrap();
        assert_eq!(parsed.order(), 6);
    }

    #[test]
    fn non_bijective_action_is_a_parse_error() {
        let fam = families::barbell();
        let json = r#"{"generators":[{
            "vertex_map": {"a":"a","b":"b","c":"c","d":"d"},
            "edge_map": {"ab1":"ab1","ab2":"ab1","bc":"bc","cd1":"cd1","cd2":"cd2"}
        }]}"#;
        assert!(matches!(
            parse_action(&fam.graph, json, DEFAULT_BUDGET),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn unknown_edge_in_action_is_a_parse_error() {
        let fam = families::barbell();
        let json = r#"{"generators":[{
            "vertex_map": {"a":"a","b":"b","c":"c","d":"d"},
            "edge_map": {"ab1":"nope","ab2":"ab1","bc":"bc","cd1":"cd1","cd2":"cd2"}
        }]}"#;
        assert!(matches!(
            parse_action(&fam.graph, json, DEFAULT_BUDGET),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn profile_serializes_fraction_string() {
        let fam = families::hurwitz_genus2();
        let p = profile(&fam.group).unwrap();
        let json = serialize_profile(&p);
        let value: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(value.get("R").unwrap(), "7/3");
        assert_eq!(value.get("order").unwrap(), 6);
        let branch = value.get("branch_points").unwrap().as_array().unwrap();
        assert_eq!(branch.len(), 1);
        assert_eq!(branch[0].get("r").unwrap(), 3);
        assert_eq!(branch[0].get("w").unwrap(), 1);
    }

    #[test]
    fn dot_marks_vertical_edges_dashed() {
        let fam = families::hurwitz_genus2();
        let (_, morphism) = fam.group.quotient();
        let dot = graph_to_dot(
            &fam.graph,
            &DotOptions {
                vertical_of: Some(&morphism),
                branch_points: None,
            },
        );
        // The three hub edges are vertical.
        assert_eq!(dot.matches("style=dashed").count(), 3);
        assert!(dot.starts_with("graph {"));
    }

    #[test]
    fn dot_labels_branch_points() {
        let fam = families::hurwitz_genus2();
        let (quotient, _) = fam.group.quotient();
        let p = profile(&fam.group).unwrap();
        let dot = graph_to_dot(
            &quotient,
            &DotOptions {
                vertical_of: None,
                branch_points: Some(&p),
            },
        );
        assert!(dot.contains("(r=3, w=1)"));
    }
}
