//! Command-line front door: load and validate graphs, build families, run
//! quotients, censuses and separation checks, drive the stack machines and
//! transducers, and export DOT.
//!
//! Exit codes: 0 success or a true answer, 1 a false answer or an invalid
//! input object, 2 usage or I/O errors.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use invgraph::{
    build_group_transducer, cone_separation_check, dv_quotient, dyck_checker_pda,
    end_cone_census, families, find_morphism, is_cover, product, run_pda, text,
    transduce, validate_inverse_pda, wp_member, FamilyOutput, FamilySpec, InversePda,
    LabelMode, PdaOutcome, RootedGraph, VertexId,
};

#[derive(Parser)]
#[command(
    name = "invgraph",
    version,
    about = "Inverse graphs: languages, covers, quotients, censuses, machines"
)]
struct Cli {
    /// Write the produced graph as DOT to this path.
    #[arg(long, global = true, value_name = "OUT")]
    dot: Option<PathBuf>,
    /// Worker threads for parallel classification (default: all cores).
    #[arg(long, global = true, value_name = "N")]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a graph file against the inverse-graph laws.
    Validate { file: PathBuf },
    /// Decide whether a word is a circuit at the root.
    Member { file: PathBuf, word: String },
    /// Emit a built-in family (free_group R RADIUS, free_abelian R RADIUS,
    /// cycle N, bouquet LETTERS.., bicyclic_tree N, dihedral_assembly).
    Make {
        family: String,
        args: Vec<String>,
        /// Write to a file instead of stdout.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Find the root-preserving morphism between two rooted graphs.
    Morphism { src: PathBuf, tgt: PathBuf },
    /// Check whether the root-preserving morphism is a cover.
    Cover { src: PathBuf, tgt: PathBuf },
    /// Quotient by the seed-generated identification.
    Quotient {
        file: PathBuf,
        /// Seed vertices; repeat the flag or comma-separate plain keys.
        #[arg(long, required = true, allow_hyphen_values = true)]
        seeds: Vec<String>,
    },
    /// Classify end-cones out to a norm at a relative depth (TSV).
    Census {
        file: PathBuf,
        #[arg(long)]
        max_norm: u32,
        #[arg(long)]
        depth: u32,
        /// Compare letters literally instead of up to renaming.
        #[arg(long)]
        exact_labels: bool,
    },
    /// Verify a tree decomposition (bag/tree-edge lines) or a strong one
    /// (block lines) against a graph.
    Treedec { file: PathBuf, decfile: PathBuf },
    /// Does deleting a disk around the vertex cut its geodesic cone off the
    /// root?
    Conesep {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        vertex: String,
        #[arg(long)]
        delta: u32,
    },
    /// Run a deterministic stack machine on a word.
    PdaRun { pdafile: PathBuf, word: String },
    /// Bounded configuration graph of an inverse stack machine.
    ConfigGraph {
        pdafile: PathBuf,
        #[arg(long)]
        height: u32,
    },
    /// Emit the machine accepting the identity-reducing circuits at a vertex.
    DyckPda {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        vertex: String,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Product of an inverse transducer (or assembly) with a rooted graph.
    Product { transfile: PathBuf, graphfile: PathBuf },
    /// Word-problem membership for an assembly file.
    Wp { assemblyfile: PathBuf, word: String },
    /// All geodesic words from the root up to a length.
    Geodesics {
        file: PathBuf,
        #[arg(long)]
        max_len: u32,
    },
}

fn main() -> ExitCode {
    // Die quietly when the reader of a pipe goes away.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    if let Some(n) = cli.jobs {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn read(path: &Path) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn write_out(path: &Path, content: &str) -> Result<(), String> {
    std::fs::write(path, content).map_err(|e| format!("{}: {e}", path.display()))
}

fn load_graph(path: &Path) -> Result<RootedGraph, String> {
    text::parse_graph(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

fn resolve_vertex(rg: &RootedGraph, key: &str) -> Result<VertexId, String> {
    rg.graph()
        .vertex_by_key(key)
        .ok_or_else(|| format!("unknown vertex `{key}`"))
}

/// Each occurrence is first matched as a whole key, then split on commas.
fn resolve_seeds(rg: &RootedGraph, given: &[String]) -> Result<BTreeSet<VertexId>, String> {
    let mut seeds = BTreeSet::new();
    for token in given {
        if let Some(v) = rg.graph().vertex_by_key(token) {
            seeds.insert(v);
            continue;
        }
        for part in token.split(',') {
            seeds.insert(resolve_vertex(rg, part)?);
        }
    }
    Ok(seeds)
}

fn maybe_dot(cli: &Cli, rg: &RootedGraph) -> Result<(), String> {
    if let Some(path) = &cli.dot {
        write_out(path, &text::to_dot(rg))?;
    }
    Ok(())
}

fn emit(out: &Option<PathBuf>, content: &str) -> Result<(), String> {
    match out {
        Some(path) => write_out(path, content),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn run(cli: &Cli) -> Result<u8, String> {
    match &cli.command {
        Command::Validate { file } => match text::parse_graph(&read(file)?) {
            Ok(rg) => {
                println!(
                    "valid: {} vertices, {} edge pairs, {} truncated",
                    rg.graph().vertex_count(),
                    rg.graph().edge_pair_count(),
                    rg.graph().truncated_vertices().count()
                );
                maybe_dot(cli, &rg)?;
                Ok(0)
            }
            Err(invgraph::Error::InvalidGraph(report)) => {
                println!("invalid:\n{report}");
                Ok(1)
            }
            Err(e) => Err(e.to_string()),
        },
        Command::Member { file, word } => {
            let rg = load_graph(file)?;
            let w = rg
                .graph()
                .alphabet()
                .parse_word(word)
                .map_err(|e| e.to_string())?;
            maybe_dot(cli, &rg)?;
            if rg.accepts(&w) {
                println!("accepted");
                Ok(0)
            } else {
                println!("rejected");
                Ok(1)
            }
        }
        Command::Make { family, args, out } => {
            let spec = parse_family(family, args)?;
            match families::make(&spec).map_err(|e| e.to_string())? {
                FamilyOutput::Graph(rg) => {
                    emit(out, &text::serialize_graph(&rg))?;
                    maybe_dot(cli, &rg)?;
                }
                FamilyOutput::Assembly(asm) => {
                    emit(out, &text::serialize_assembly(&asm))?;
                }
            }
            Ok(0)
        }
        Command::Morphism { src, tgt } => {
            let s = load_graph(src)?;
            let t = load_graph(tgt)?;
            match find_morphism(&s, &t) {
                Some(m) => {
                    for v in s.graph().vertices() {
                        println!("{} -> {}", s.graph().key(v), t.graph().key(m.apply(v)));
                    }
                    Ok(0)
                }
                None => {
                    println!("no morphism");
                    Ok(1)
                }
            }
        }
        Command::Cover { src, tgt } => {
            let s = load_graph(src)?;
            let t = load_graph(tgt)?;
            match find_morphism(&s, &t) {
                Some(m) => {
                    let check = is_cover(&s, &t, &m);
                    if !check.skipped_truncated.is_empty() {
                        println!("skipped {} truncated vertices", check.skipped_truncated.len());
                    }
                    if check.is_cover {
                        println!("cover");
                        Ok(0)
                    } else {
                        println!(
                            "not a cover; star mismatch at {}",
                            check
                                .failures
                                .iter()
                                .map(|&v| s.graph().key(v))
                                .collect::<Vec<_>>()
                                .join(", ")
                        );
                        Ok(1)
                    }
                }
                None => {
                    println!("no morphism");
                    Ok(1)
                }
            }
        }
        Command::Quotient { file, seeds } => {
            let rg = load_graph(file)?;
            let seeds = resolve_seeds(&rg, seeds)?;
            let q = dv_quotient(&rg, &seeds).map_err(|e| e.to_string())?;
            println!("# classes: {}", q.quotient.graph().vertex_count());
            println!("# saturated: {}", q.saturated);
            print!("{}", text::serialize_graph(&q.quotient));
            maybe_dot(cli, &q.quotient)?;
            Ok(0)
        }
        Command::Census { file, max_norm, depth, exact_labels } => {
            let rg = load_graph(file)?;
            let mode = if *exact_labels {
                LabelMode::Exact
            } else {
                LabelMode::UpToRelabeling
            };
            let table =
                end_cone_census(&rg, *max_norm, *depth, mode).map_err(|e| e.to_string())?;
            print!("{table}");
            maybe_dot(cli, &rg)?;
            Ok(0)
        }
        Command::Treedec { file, decfile } => {
            let rg = load_graph(file)?;
            match text::parse_decomposition(&read(decfile)?, rg.graph())
                .map_err(|e| e.to_string())?
            {
                text::DecompositionFile::Tree(td) => {
                    let report = invgraph::verify_tree_decomposition(rg.graph(), &td)
                        .map_err(|e| e.to_string())?;
                    println!("max bag diameter: {}", report.max_bag_diameter);
                    if let Some(witness) = &report.witness {
                        println!("witness: {witness}");
                    }
                    if report.valid() {
                        println!("valid tree decomposition");
                        Ok(0)
                    } else {
                        println!("invalid tree decomposition");
                        Ok(1)
                    }
                }
                text::DecompositionFile::Partition(p) => {
                    let report = invgraph::verify_strong_tree_decomposition(rg.graph(), &p)
                        .map_err(|e| e.to_string())?;
                    println!("max block diameter: {}", report.max_block_diameter);
                    println!("augmented bag diameter: {}", report.augmented.max_bag_diameter);
                    if report.valid() {
                        println!("valid strong tree decomposition");
                        Ok(0)
                    } else {
                        println!("invalid strong tree decomposition");
                        Ok(1)
                    }
                }
            }
        }
        Command::Conesep { file, vertex, delta } => {
            let rg = load_graph(file)?;
            let v = resolve_vertex(&rg, vertex)?;
            let check = cone_separation_check(&rg, v, *delta).map_err(|e| e.to_string())?;
            if check.boundary_contact {
                println!("note: search touched the ball boundary");
            }
            if check.separated {
                println!("separated");
                Ok(0)
            } else {
                println!("not separated");
                Ok(1)
            }
        }
        Command::PdaRun { pdafile, word } => {
            let pda = text::parse_pda(&read(pdafile)?).map_err(|e| e.to_string())?;
            let w = pda.input().parse_word(word).map_err(|e| e.to_string())?;
            match run_pda(&pda, &w).map_err(|e| e.to_string())? {
                PdaOutcome::Accepted(_) => {
                    println!("accepted");
                    Ok(0)
                }
                PdaOutcome::Rejected(_) => {
                    println!("rejected");
                    Ok(1)
                }
                PdaOutcome::Stuck { position, .. } => {
                    println!("rejected (stuck at position {position})");
                    Ok(1)
                }
            }
        }
        Command::ConfigGraph { pdafile, height } => {
            let pda = text::parse_pda(&read(pdafile)?).map_err(|e| e.to_string())?;
            let issues = validate_inverse_pda(&pda, *height);
            if !issues.is_empty() {
                return Err(format!("not an inverse machine: {}", issues.join("; ")));
            }
            let machine = InversePda::new(pda, *height).map_err(|e| e.to_string())?;
            let cfg = machine.config_graph(*height).map_err(|e| e.to_string())?;
            print!("{}", text::serialize_graph(&cfg));
            maybe_dot(cli, &cfg)?;
            Ok(0)
        }
        Command::DyckPda { file, vertex, out } => {
            let rg = load_graph(file)?;
            let v = resolve_vertex(&rg, vertex)?;
            let machine = dyck_checker_pda(rg.graph(), v).map_err(|e| e.to_string())?;
            emit(out, &text::serialize_inverse_pda(&machine))?;
            Ok(0)
        }
        Command::Product { transfile, graphfile } => {
            let content = read(transfile)?;
            // Accept either a bare transducer or an assembly's machine.
            let machine = if content.lines().any(|l| l.trim_start().starts_with("transversal")) {
                let asm = text::parse_assembly(&content).map_err(|e| e.to_string())?;
                build_group_transducer(&asm).map_err(|e| e.to_string())?
            } else {
                text::parse_transducer(&content).map_err(|e| e.to_string())?
            };
            let rg = load_graph(graphfile)?;
            let prod = product(&machine, &rg).map_err(|e| e.to_string())?;
            print!("{}", text::serialize_graph(&prod));
            maybe_dot(cli, &prod)?;
            Ok(0)
        }
        Command::Wp { assemblyfile, word } => {
            let asm = text::parse_assembly(&read(assemblyfile)?).map_err(|e| e.to_string())?;
            let w = asm.input().parse_word(word).map_err(|e| e.to_string())?;
            // Surface the rewrite for inspection.
            let machine = build_group_transducer(&asm).map_err(|e| e.to_string())?;
            if let Some(h) = transduce(&machine, &w) {
                println!("# rewrites to: {}", asm.output().display_word(&h));
            }
            if wp_member(&asm, &w).map_err(|e| e.to_string())? {
                println!("true");
                Ok(0)
            } else {
                println!("false");
                Ok(1)
            }
        }
        Command::Geodesics { file, max_len } => {
            let rg = load_graph(file)?;
            let words = rg.geodesic_words(*max_len).map_err(|e| e.to_string())?;
            for w in &words {
                println!("{}", rg.graph().alphabet().display_word(w));
            }
            maybe_dot(cli, &rg)?;
            Ok(0)
        }
    }
}

fn parse_family(family: &str, args: &[String]) -> Result<FamilySpec, String> {
    let nat = |i: usize, what: &str| -> Result<u32, String> {
        args.get(i)
            .ok_or_else(|| format!("missing {what}"))?
            .parse::<u32>()
            .map_err(|_| format!("{what} must be a number"))
    };
    match family {
        "free_group" => Ok(FamilySpec::FreeGroup {
            rank: nat(0, "rank")? as usize,
            radius: nat(1, "radius")?,
        }),
        "free_abelian" => Ok(FamilySpec::FreeAbelian {
            rank: nat(0, "rank")? as usize,
            radius: nat(1, "radius")?,
        }),
        "cycle" => Ok(FamilySpec::Cycle { modulus: nat(0, "modulus")? }),
        "bouquet" => {
            if args.is_empty() {
                return Err("bouquet needs letters".into());
            }
            Ok(FamilySpec::Bouquet { letters: args.to_vec() })
        }
        "bicyclic_tree" => Ok(FamilySpec::BicyclicTree { n: nat(0, "ray length")? }),
        "dihedral_assembly" => Ok(FamilySpec::DihedralAssembly),
        other => Err(format!(
            "unknown family `{other}` (expected free_group, free_abelian, cycle, bouquet, bicyclic_tree, dihedral_assembly)"
        )),
    }
}
