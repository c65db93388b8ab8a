//! Command-line front end: verification, quotients, profiles, family and
//! cover construction, the census, and DOT export.
//!
//! Exit codes: 0 = success / property holds, 1 = property fails (with a
//! certificate), 2 = input error, 3 = budget exceeded.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};

use harmonica::action::{ActionGroup, HarmonicVerdict, DEFAULT_BUDGET};
use harmonica::census::{run_census, CensusConfig};
use harmonica::covers::{derived_cover, macbeath, spanning_tree, VoltageAssignment};
use harmonica::error::Error;
use harmonica::families;
use harmonica::io;
use harmonica::multigraph::MultiGraph;
use harmonica::ramification::{classify_branch_locus, profile, verify_riemann_hurwitz};

#[derive(Parser)]
#[command(name = "harmonica", version, about = "Harmonic group actions on finite multigraphs")]
struct Cli {
    /// Cap on group orders and search sizes (also via HARMONICA_BUDGET).
    #[arg(long, global = true)]
    budget: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check whether an action is harmonic; prints a certificate either way.
    Verify(VerifyArgs),
    /// Write the quotient graph and quotient morphism of an action.
    Quotient(QuotientArgs),
    /// Write the ramification profile and branch-locus tag of a harmonic action.
    Profile(ProfileArgs),
    /// Build a named family instance and write its artifacts.
    Construct(ConstructArgs),
    /// Build the derived cover of a graph with standard homology voltages.
    Cover(CoverArgs),
    /// Enumerate small graphs of a genus and verify every bound on them.
    Census(CensusArgs),
    /// Render a graph in DOT, dashing collapsed edges.
    ExportDot(ExportDotArgs),
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    action: PathBuf,
    /// Also run the subgroup-quantified definition and report agreement.
    #[arg(long)]
    by_definition: bool,
}

#[derive(Args)]
struct QuotientArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    action: PathBuf,
    /// Output directory for quotient.json and morphism.json.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ProfileArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    action: PathBuf,
    /// Output file for the profile JSON (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ConstructArgs {
    /// One of: barbell, klein-genus3, klein-genus5, decorated-cycle,
    /// tree-double, tree-star, hurwitz-genus2, lower-bound, macbeath.
    #[arg(long)]
    family: String,
    /// Cycle length for decorated-cycle.
    #[arg(long)]
    n: Option<usize>,
    /// Genus for lower-bound.
    #[arg(long)]
    g: Option<u64>,
    /// Fiber modulus for macbeath.
    #[arg(long)]
    m: Option<u64>,
    /// Edges in the rooted path tree used by decorated-cycle/tree-double/tree-star.
    #[arg(long, default_value_t = 1)]
    tree_edges: usize,
    /// Group for tree-star: "cyclic:N" or "klein4".
    #[arg(long, default_value = "cyclic:3")]
    group: String,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct CoverArgs {
    #[arg(long)]
    graph: PathBuf,
    /// Modulus of the homology voltage group (Z/m)^genus.
    #[arg(long)]
    m: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct CensusArgs {
    #[arg(long)]
    genus: u64,
    #[arg(long)]
    max_vertices: usize,
    #[arg(long)]
    jobs: Option<usize>,
    /// Output file for the report JSON (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ExportDotArgs {
    #[arg(long)]
    graph: PathBuf,
    /// Dash the edges this action's quotient collapses.
    #[arg(long)]
    action: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
    /// Also write the quotient graph with branch labels.
    #[arg(long)]
    quotient_out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let budget = cli
        .budget
        .or_else(|| {
            std::env::var("HARMONICA_BUDGET")
                .ok()
                .and_then(|v| v.parse().ok())
        })
        .unwrap_or(DEFAULT_BUDGET);
    match dispatch(cli.command, budget) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            match err {
                Error::BudgetExceeded { .. } | Error::ClosureBudgetExceeded { .. } => {
                    ExitCode::from(3)
                }
                _ => ExitCode::from(2),
            }
        }
    }
}

fn read_file(path: &Path) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|e| Error::Parse {
        detail: format!("{}: {e}", path.display()),
    })
}

fn write_file(path: &Path, contents: &str) -> Result<(), Error> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent).map_err(|e| Error::Parse {
                detail: format!("{}: {e}", parent.display()),
            })?;
        }
    }
    fs::write(path, contents).map_err(|e| Error::Parse {
        detail: format!("{}: {e}", path.display()),
    })
}

fn load_graph(path: &Path) -> Result<Arc<MultiGraph>, Error> {
    Ok(Arc::new(io::parse_graph(&read_file(path)?)?))
}

fn load_action(path: &Path, graph: &Arc<MultiGraph>, budget: usize) -> Result<ActionGroup, Error> {
    io::parse_action(graph, &read_file(path)?, budget)
}

fn dispatch(command: Command, budget: usize) -> Result<ExitCode, Error> {
    match command {
        Command::Verify(args) => {
            let graph = load_graph(&args.graph)?;
            let group = load_action(&args.action, &graph, budget)?;
            let verdict = group.harmonicity();
            if args.by_definition {
                let by_definition = group.is_harmonic_by_definition(budget)?;
                println!(
                    "definition-based check: {} (agrees: {})",
                    if by_definition { "harmonic" } else { "not harmonic" },
                    by_definition == verdict.is_harmonic()
                );
            }
            match verdict {
                HarmonicVerdict::Harmonic => {
                    let p = profile(&group)?;
                    println!("HARMONIC: order {}", group.order());
                    println!("{}", io::serialize_profile(&p));
                    Ok(ExitCode::SUCCESS)
                }
                HarmonicVerdict::FixedFlag { element, vertex, edge } => {
                    println!(
                        "NOT HARMONIC, witness: element [{}] fixes vertex '{}' and its incident edge '{}'",
                        element.describe(&graph),
                        graph.vertex_name(vertex),
                        graph.edge_name(edge)
                    );
                    Ok(ExitCode::FAILURE)
                }
                HarmonicVerdict::EngulfedNeighborhood { vertex } => {
                    println!(
                        "NOT HARMONIC, witness: the whole neighborhood of '{}' lies in its orbit",
                        graph.vertex_name(vertex)
                    );
                    Ok(ExitCode::FAILURE)
                }
            }
        }
        Command::Quotient(args) => {
            let graph = load_graph(&args.graph)?;
            let group = load_action(&args.action, &graph, budget)?;
            let (quotient, morphism) = group.quotient();
            write_file(&args.out.join("quotient.json"), &io::serialize_graph(&quotient))?;
            write_file(&args.out.join("morphism.json"), &io::serialize_morphism(&morphism))?;
            println!(
                "quotient: {} vertices, {} edges -> {}",
                quotient.vertex_count(),
                quotient.edge_count(),
                args.out.display()
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Profile(args) => {
            let graph = load_graph(&args.graph)?;
            let group = load_action(&args.action, &graph, budget)?;
            match profile(&group) {
                Ok(p) => {
                    assert!(verify_riemann_hurwitz(&p), "genus identity must hold");
                    let case = classify_branch_locus(&p)?;
                    let json = io::serialize_profile(&p);
                    match &args.out {
                        Some(path) => write_file(path, &json)?,
                        None => println!("{json}"),
                    }
                    println!("branch case: {case}");
                    Ok(ExitCode::SUCCESS)
                }
                Err(Error::NotHarmonic) => {
                    println!("NOT HARMONIC: no profile");
                    Ok(ExitCode::FAILURE)
                }
                Err(e) => Err(e),
            }
        }
        Command::Construct(args) => construct(&args, budget),
        Command::Cover(args) => {
            let graph = load_graph(&args.graph)?;
            let tree = spanning_tree(&graph)?;
            let va = VoltageAssignment::homology(Arc::clone(&graph), tree, args.m)?;
            let dc = derived_cover(&va)?;
            write_file(&args.out.join("cover.json"), &io::serialize_graph(&dc.cover))?;
            write_file(
                &args.out.join("projection.json"),
                &io::serialize_morphism(&dc.projection),
            )?;
            write_file(&args.out.join("deck.json"), &io::serialize_action(&dc.deck))?;
            println!(
                "cover: {} vertices, {} edges, genus {} -> {}",
                dc.cover.vertex_count(),
                dc.cover.edge_count(),
                dc.cover.genus()?,
                args.out.display()
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Census(args) => {
            let report = run_census(&CensusConfig {
                genus: args.genus,
                max_vertices: args.max_vertices,
                budget,
                jobs: args.jobs,
            })?;
            let json = serde_json::to_string_pretty(&report).expect("reports serialize");
            match &args.out {
                Some(path) => write_file(path, &json)?,
                None => println!("{json}"),
            }
            println!(
                "census: {} graphs, max harmonic order {}, {} violations{}",
                report.graph_count,
                report.max_harmonic_order,
                report.violations.len(),
                if report.truncated { " (truncated)" } else { "" }
            );
            for v in &report.violations {
                eprintln!("violation: {v}");
            }
            if report.violations.is_empty() {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::FAILURE)
            }
        }
        Command::ExportDot(args) => {
            let graph = load_graph(&args.graph)?;
            match &args.action {
                Some(action_path) => {
                    let group = load_action(action_path, &graph, budget)?;
                    let (quotient, morphism) = group.quotient();
                    let dot = io::graph_to_dot(
                        &graph,
                        &io::DotOptions {
                            vertical_of: Some(&morphism),
                            branch_points: None,
                        },
                    );
                    write_file(&args.out, &dot)?;
                    if let Some(qpath) = &args.quotient_out {
                        let p = profile(&group).ok();
                        let options = io::DotOptions {
                            vertical_of: None,
                            branch_points: p.as_ref(),
                        };
                        write_file(qpath, &io::graph_to_dot(&quotient, &options))?;
                    }
                }
                None => {
                    let dot = io::graph_to_dot(&graph, &io::DotOptions::default());
                    write_file(&args.out, &dot)?;
                }
            }
            println!("wrote {}", args.out.display());
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn parse_group_table(spec: &str) -> Result<families::GroupTable, Error> {
    if spec == "klein4" {
        return Ok(families::GroupTable::klein_four());
    }
    if let Some(k) = spec.strip_prefix("cyclic:") {
        let k: usize = k.parse().map_err(|_| Error::Parse {
            detail: format!("bad group spec '{spec}'"),
        })?;
        if k < 2 {
            return Err(Error::Parse {
                detail: "cyclic group order must be at least 2".to_string(),
            });
        }
        return Ok(families::GroupTable::cyclic(k));
    }
    Err(Error::Parse {
        detail: format!("unknown group spec '{spec}' (use cyclic:<k> or klein4)"),
    })
}

fn write_instance(out: &Path, instance: &families::FamilyInstance) -> Result<(), Error> {
    write_file(&out.join("graph.json"), &io::serialize_graph(&instance.graph))?;
    write_file(&out.join("action.json"), &io::serialize_action(&instance.group))?;
    let (_, morphism) = instance.group.quotient();
    write_file(
        &out.join("graph.dot"),
        &io::graph_to_dot(
            &instance.graph,
            &io::DotOptions {
                vertical_of: Some(&morphism),
                branch_points: None,
            },
        ),
    )?;
    if instance.expected.harmonic {
        let p = profile(&instance.group)?;
        write_file(&out.join("profile.json"), &io::serialize_profile(&p))?;
    }
    Ok(())
}

fn construct(args: &ConstructArgs, budget: usize) -> Result<ExitCode, Error> {
    let tree = families::RootedTree::path(args.tree_edges);
    match args.family.as_str() {
        "barbell" => {
            let fam = families::barbell();
            write_file(&args.out.join("graph.json"), &io::serialize_graph(&fam.graph))?;
            for (name, aut) in [
                ("horizontal_reflection", &fam.horizontal_reflection),
                ("vertical_reflection", &fam.vertical_reflection),
                ("half_rotation", &fam.half_rotation),
            ] {
                let group =
                    ActionGroup::generate(Arc::clone(&fam.graph), vec![aut.clone()], budget)?;
                write_file(
                    &args.out.join(format!("{name}.json")),
                    &io::serialize_action(&group),
                )?;
            }
            write_file(
                &args.out.join("graph.dot"),
                &io::graph_to_dot(&fam.graph, &io::DotOptions::default()),
            )?;
            println!("barbell written to {}", args.out.display());
            Ok(ExitCode::SUCCESS)
        }
        "klein-genus3" => finish_instance(args, families::klein_genus3()),
        "klein-genus5" => finish_instance(args, families::klein_genus5()),
        "decorated-cycle" => {
            let n = args.n.ok_or_else(|| Error::Parse {
                detail: "--n is required for decorated-cycle".to_string(),
            })?;
            let dec = families::decorated_cycle(n, &tree)?;
            finish_instance(args, dec.instance)
        }
        "tree-double" => finish_instance(args, families::tree_double(&tree)?),
        "tree-star" => {
            let table = parse_group_table(&args.group)?;
            finish_instance(args, families::tree_star(&tree, &table)?)
        }
        "hurwitz-genus2" => finish_instance(args, families::hurwitz_genus2()),
        "lower-bound" => {
            let g = args.g.ok_or_else(|| Error::Parse {
                detail: "--g is required for lower-bound".to_string(),
            })?;
            if g < 3 {
                return Err(Error::Parse {
                    detail: "lower-bound needs --g at least 3".to_string(),
                });
            }
            finish_instance(args, families::lower_bound_family(g)?)
        }
        "macbeath" => {
            let m = args.m.ok_or_else(|| Error::Parse {
                detail: "--m is required for macbeath".to_string(),
            })?;
            if m < 1 {
                return Err(Error::Parse {
                    detail: "macbeath needs --m at least 1".to_string(),
                });
            }
            let cover = macbeath(m, budget)?;
            write_file(&args.out.join("graph.json"), &io::serialize_graph(&cover.graph))?;
            write_file(&args.out.join("action.json"), &io::serialize_action(&cover.group))?;
            write_file(
                &args.out.join("profile.json"),
                &io::serialize_profile(&cover.profile),
            )?;
            let (_, morphism) = cover.group.quotient();
            write_file(
                &args.out.join("graph.dot"),
                &io::graph_to_dot(
                    &cover.graph,
                    &io::DotOptions {
                        vertical_of: Some(&morphism),
                        branch_points: None,
                    },
                ),
            )?;
            println!(
                "macbeath m={m}: genus {}, order {} -> {}",
                cover.profile.genus,
                cover.group.order(),
                args.out.display()
            );
            Ok(ExitCode::SUCCESS)
        }
        other => Err(Error::Parse {
            detail: format!("unknown family '{other}'"),
        }),
    }
}

fn finish_instance(args: &ConstructArgs, instance: families::FamilyInstance) -> Result<ExitCode, Error> {
    write_instance(&args.out, &instance)?;
    println!(
        "{}: genus {}, order {} -> {}",
        args.family,
        instance.expected.genus,
        instance.group.order(),
        args.out.display()
    );
    Ok(ExitCode::SUCCESS)
}
