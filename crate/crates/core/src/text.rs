//! Line-based text formats. `#` starts a comment; tokens are whitespace
//! separated; an inverse letter is the positive name suffixed with `'`; the
//! empty word is written `-` inside machine files and `1` on its own.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::alphabet::InvolutiveAlphabet;
use crate::analysis::{StrongTreePartition, TreeDecomposition};
use crate::error::{Error, Result};
use crate::grammar::{CnfGrammar, Variable};
use crate::graph::{GraphBuilder, InverseGraph, RootedGraph, VertexId};
use crate::pda::{Acceptance, InversePda, Pda, StackSym, StateId};
use crate::transducer::{GroupAssembly, InverseTransducer, Projection};
use crate::word::Word;

fn err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = line.split_whitespace().collect();
        (!tokens.is_empty()).then_some((i + 1, tokens))
    })
}

/// Graph format: `alphabet`, optional `vertex`, `edge SRC LETTER DST` (the
/// inverse edge is implied), `root`, `truncated`. Invariant violations are
/// rejected with line numbers.
pub fn parse_graph(text: &str) -> Result<RootedGraph> {
    let mut builder: Option<GraphBuilder> = None;
    let mut root_key: Option<String> = None;
    let mut first_vertex: Option<String> = None;
    let mut truncated: Vec<String> = Vec::new();
    for (line, tokens) in content_lines(text) {
        match tokens[0] {
            "alphabet" => {
                if builder.is_some() {
                    return Err(err(line, "duplicate alphabet line"));
                }
                let alpha = InvolutiveAlphabet::new(&tokens[1..])
                    .map_err(|e| err(line, e.to_string()))?;
                builder = Some(GraphBuilder::new(alpha));
            }
            "vertex" => {
                let b = builder.as_mut().ok_or_else(|| err(line, "alphabet line must come first"))?;
                for key in &tokens[1..] {
                    b.vertex(key);
                    first_vertex.get_or_insert_with(|| key.to_string());
                }
            }
            "edge" => {
                let b = builder.as_mut().ok_or_else(|| err(line, "alphabet line must come first"))?;
                if tokens.len() != 4 {
                    return Err(err(line, "expected `edge SRC LETTER DST`"));
                }
                let letter = b
                    .alphabet()
                    .parse_letter(tokens[2])
                    .map_err(|e| err(line, e.to_string()))?;
                let src = b.vertex(tokens[1]);
                first_vertex.get_or_insert_with(|| tokens[1].to_string());
                let dst = b.vertex(tokens[3]);
                b.edge_line(src, letter, dst, Some(line));
            }
            "root" => {
                if tokens.len() != 2 {
                    return Err(err(line, "expected `root VERTEX`"));
                }
                root_key = Some(tokens[1].to_string());
            }
            "truncated" => {
                truncated.extend(tokens[1..].iter().map(|t| t.to_string()));
            }
            other => return Err(err(line, format!("unknown directive `{other}`"))),
        }
    }
    let mut builder = builder.ok_or_else(|| err(0, "missing alphabet line"))?;
    for key in &truncated {
        let v = builder
            .lookup(key)
            .ok_or_else(|| Error::UnknownVertex(key.clone()))?;
        builder.truncate(v);
    }
    match root_key.or(first_vertex) {
        Some(key) => {
            let v = builder
                .lookup(&key)
                .ok_or_else(|| Error::UnknownVertex(key.clone()))?;
            builder.root(v);
        }
        None => return Err(err(0, "graph has no vertices")),
    }
    builder.build_rooted()
}

pub fn serialize_graph(rg: &RootedGraph) -> String {
    let g = rg.graph();
    let mut out = String::new();
    let _ = writeln!(out, "alphabet {}", g.alphabet());
    for v in g.vertices() {
        let _ = writeln!(out, "vertex {}", g.key(v));
    }
    let mut edges: Vec<(VertexId, String, VertexId)> = g
        .positive_edges()
        .map(|(u, l, v)| (u, g.alphabet().display_letter(l), v))
        .collect();
    edges.sort();
    for (u, l, v) in edges {
        let _ = writeln!(out, "edge {} {} {}", g.key(u), l, g.key(v));
    }
    let _ = writeln!(out, "root {}", g.key(rg.root()));
    let marks: Vec<&str> = g.truncated_vertices().map(|v| g.key(v)).collect();
    if !marks.is_empty() {
        let _ = writeln!(out, "truncated {}", marks.join(" "));
    }
    out
}

/// One arrow per edge pair, positive labels only; the root is doubled and
/// truncated vertices dashed.
pub fn to_dot(rg: &RootedGraph) -> String {
    let g = rg.graph();
    let mut out = String::from("digraph inverse_graph {\n  rankdir=LR;\n");
    for v in g.vertices() {
        let mut attrs = Vec::new();
        if v == rg.root() {
            attrs.push("shape=doublecircle".to_owned());
        }
        if g.is_truncated(v) {
            attrs.push("style=dashed".to_owned());
        }
        if attrs.is_empty() {
            let _ = writeln!(out, "  \"{}\";", g.key(v));
        } else {
            let _ = writeln!(out, "  \"{}\" [{}];", g.key(v), attrs.join(","));
        }
    }
    for (u, l, v) in g.positive_edges() {
        let _ = writeln!(
            out,
            "  \"{}\" -> \"{}\" [label=\"{}\"];",
            g.key(u),
            g.key(v),
            g.alphabet().display_letter(l)
        );
    }
    out.push_str("}\n");
    out
}

/// Grammar format: `alphabet`, `start`, `rule X -> Y Z` or `rule X -> a`,
/// `epsilon`.
pub fn parse_grammar(text: &str) -> Result<CnfGrammar> {
    let mut alpha: Option<InvolutiveAlphabet> = None;
    let mut start: Option<String> = None;
    let mut epsilon = false;
    let mut raw_rules: Vec<(usize, String, Vec<String>)> = Vec::new();
    for (line, tokens) in content_lines(text) {
        match tokens[0] {
            "alphabet" => {
                alpha = Some(
                    InvolutiveAlphabet::new(&tokens[1..]).map_err(|e| err(line, e.to_string()))?,
                );
            }
            "start" => {
                if tokens.len() != 2 {
                    return Err(err(line, "expected `start VARIABLE`"));
                }
                start = Some(tokens[1].to_owned());
            }
            "epsilon" => epsilon = true,
            "rule" => {
                if tokens.len() < 4 || tokens[2] != "->" {
                    return Err(err(line, "expected `rule X -> ...`"));
                }
                raw_rules.push((
                    line,
                    tokens[1].to_owned(),
                    tokens[3..].iter().map(|t| t.to_string()).collect(),
                ));
            }
            other => return Err(err(line, format!("unknown directive `{other}`"))),
        }
    }
    let alpha = alpha.ok_or_else(|| err(0, "missing alphabet line"))?;
    let start = start.ok_or_else(|| err(0, "missing start line"))?;

    let mut names: Vec<String> = vec![start.clone()];
    let var = |name: &str, names: &mut Vec<String>| -> Variable {
        match names.iter().position(|n| n == name) {
            Some(i) => Variable(i as u32),
            None => {
                names.push(name.to_owned());
                Variable((names.len() - 1) as u32)
            }
        }
    };
    let mut binary = Vec::new();
    let mut terminal = Vec::new();
    for (line, lhs, rhs) in raw_rules {
        let x = var(&lhs, &mut names);
        match rhs.len() {
            1 => {
                let letter = alpha
                    .parse_letter(&rhs[0])
                    .map_err(|_| err(line, format!("`{}` is not a terminal letter", rhs[0])))?;
                terminal.push((x, letter));
            }
            2 => {
                let y = var(&rhs[0], &mut names);
                let z = var(&rhs[1], &mut names);
                binary.push((x, y, z));
            }
            n => return Err(err(line, format!("rule with {n} symbols on the right"))),
        }
    }
    CnfGrammar::new(alpha, names, Variable(0), binary, terminal, epsilon)
}

pub fn serialize_grammar(g: &CnfGrammar) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "alphabet {}", g.alphabet());
    let _ = writeln!(out, "start {}", g.variable_name(g.start()));
    if g.epsilon() {
        let _ = writeln!(out, "epsilon");
    }
    for &(x, y, z) in g.binary_productions() {
        let _ = writeln!(
            out,
            "rule {} -> {} {}",
            g.variable_name(x),
            g.variable_name(y),
            g.variable_name(z)
        );
    }
    for &(x, letter) in g.terminal_productions() {
        let _ = writeln!(
            out,
            "rule {} -> {}",
            g.variable_name(x),
            g.alphabet().display_letter(letter)
        );
    }
    out
}

/// Machine format: `alphabet`, `bottom`, optional `stack`, `state NAME
/// [initial]`, `final NAME`, `accept final|final-bottom`, and
/// `trans Q A X -> P GAMMA...` with `-` for the empty rewrite.
pub fn parse_pda(text: &str) -> Result<Pda> {
    let mut alpha: Option<InvolutiveAlphabet> = None;
    let mut bottom_name: Option<String> = None;
    let mut stack_names: Vec<String> = Vec::new();
    let mut state_names: Vec<String> = Vec::new();
    let mut initial: Option<String> = None;
    let mut finals: Vec<String> = Vec::new();
    let mut acceptance = Acceptance::FinalState;
    let mut raw_trans: Vec<(usize, Vec<String>)> = Vec::new();
    for (line, tokens) in content_lines(text) {
        match tokens[0] {
            "alphabet" => {
                alpha = Some(
                    InvolutiveAlphabet::new(&tokens[1..]).map_err(|e| err(line, e.to_string()))?,
                );
            }
            "bottom" => {
                if tokens.len() != 2 {
                    return Err(err(line, "expected `bottom SYMBOL`"));
                }
                bottom_name = Some(tokens[1].to_owned());
            }
            "stack" => stack_names.extend(tokens[1..].iter().map(|t| t.to_string())),
            "state" => {
                if tokens.len() < 2 {
                    return Err(err(line, "expected `state NAME [initial]`"));
                }
                state_names.push(tokens[1].to_owned());
                if tokens.get(2) == Some(&"initial") {
                    initial = Some(tokens[1].to_owned());
                }
            }
            "final" => finals.extend(tokens[1..].iter().map(|t| t.to_string())),
            "accept" => {
                acceptance = match tokens.get(1).copied() {
                    Some("final") => Acceptance::FinalState,
                    Some("final-bottom") => Acceptance::FinalStateAndBottom,
                    _ => return Err(err(line, "expected `accept final|final-bottom`")),
                };
            }
            "trans" => raw_trans.push((line, tokens.iter().map(|t| t.to_string()).collect())),
            other => return Err(err(line, format!("unknown directive `{other}`"))),
        }
    }
    let alpha = alpha.ok_or_else(|| err(0, "missing alphabet line"))?;
    let bottom_name = bottom_name.ok_or_else(|| err(0, "missing bottom line"))?;
    let mut all_stack = vec![bottom_name.clone()];
    for name in stack_names {
        if !all_stack.contains(&name) {
            all_stack.push(name);
        }
    }
    let initial = initial.ok_or_else(|| err(0, "no initial state"))?;
    let initial_id = StateId(
        state_names.iter().position(|n| *n == initial).unwrap() as u32
    );
    let mut pda = Pda::new(alpha.clone(), state_names, all_stack, initial_id, StackSym(0), acceptance);
    for name in finals {
        let q = pda
            .state_by_name(&name)
            .ok_or_else(|| Error::InvalidPda(format!("unknown final state `{name}`")))?;
        pda.mark_final(q);
    }
    for (line, tokens) in raw_trans {
        // trans q a x -> p γ...
        if tokens.len() < 6 || tokens[4] != "->" {
            return Err(err(line, "expected `trans Q A X -> P GAMMA`"));
        }
        let q = pda
            .state_by_name(&tokens[1])
            .ok_or_else(|| err(line, format!("unknown state `{}`", tokens[1])))?;
        let a = alpha
            .parse_letter(&tokens[2])
            .map_err(|e| err(line, e.to_string()))?;
        let x = pda
            .stack_by_name(&tokens[3])
            .ok_or_else(|| err(line, format!("unknown stack symbol `{}`", tokens[3])))?;
        let p = pda
            .state_by_name(&tokens[5])
            .ok_or_else(|| err(line, format!("unknown state `{}`", tokens[5])))?;
        let gamma: Vec<StackSym> = if tokens[6..] == ["-"] {
            Vec::new()
        } else {
            tokens[6..]
                .iter()
                .map(|t| {
                    pda.stack_by_name(t)
                        .ok_or_else(|| err(line, format!("unknown stack symbol `{t}`")))
                })
                .collect::<Result<_>>()?
        };
        pda.add_transition(q, a, x, p, gamma);
    }
    Ok(pda)
}

pub fn serialize_pda(m: &Pda) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "alphabet {}", m.input());
    let _ = writeln!(out, "bottom {}", m.stack_name(m.bottom()));
    let rest: Vec<&str> = (0..m.stack_count())
        .map(|i| StackSym(i as u32))
        .filter(|&s| s != m.bottom())
        .map(|s| m.stack_name(s))
        .collect();
    if !rest.is_empty() {
        let _ = writeln!(out, "stack {}", rest.join(" "));
    }
    for i in 0..m.state_count() {
        let q = StateId(i as u32);
        if q == m.initial() {
            let _ = writeln!(out, "state {} initial", m.state_name(q));
        } else {
            let _ = writeln!(out, "state {}", m.state_name(q));
        }
    }
    for &q in m.finals() {
        let _ = writeln!(out, "final {}", m.state_name(q));
    }
    let _ = writeln!(
        out,
        "accept {}",
        match m.acceptance() {
            Acceptance::FinalState => "final",
            Acceptance::FinalStateAndBottom => "final-bottom",
        }
    );
    // Canonical order independent of internal symbol numbering.
    let mut lines: Vec<String> = m
        .transitions()
        .map(|(q, a, x, p, gamma)| {
            let gamma_text = if gamma.is_empty() {
                "-".to_owned()
            } else {
                gamma
                    .iter()
                    .map(|&s| m.stack_name(s))
                    .collect::<Vec<_>>()
                    .join(" ")
            };
            format!(
                "trans {} {} {} -> {} {}",
                m.state_name(q),
                m.input().display_letter(a),
                m.stack_name(x),
                m.state_name(p),
                gamma_text
            )
        })
        .collect();
    lines.sort();
    for line in lines {
        let _ = writeln!(out, "{line}");
    }
    out
}

pub fn serialize_inverse_pda(m: &InversePda) -> String {
    serialize_pda(m.pda())
}

/// Transducer format: `input`, `output`, `state NAME [root]`,
/// `edge SRC LETTER DST OUTPUT...` (`-` for the empty output).
pub fn parse_transducer(text: &str) -> Result<InverseTransducer> {
    let mut input: Option<InvolutiveAlphabet> = None;
    let mut output: Option<InvolutiveAlphabet> = None;
    let mut state_names: Vec<String> = Vec::new();
    let mut root: Option<String> = None;
    let mut raw_edges: Vec<(usize, Vec<String>)> = Vec::new();
    for (line, tokens) in content_lines(text) {
        match tokens[0] {
            "input" => {
                input = Some(
                    InvolutiveAlphabet::new(&tokens[1..]).map_err(|e| err(line, e.to_string()))?,
                )
            }
            "output" => {
                output = Some(
                    InvolutiveAlphabet::new(&tokens[1..]).map_err(|e| err(line, e.to_string()))?,
                )
            }
            "state" => {
                if tokens.len() < 2 {
                    return Err(err(line, "expected `state NAME [root]`"));
                }
                state_names.push(tokens[1].to_owned());
                if tokens.get(2) == Some(&"root") {
                    root = Some(tokens[1].to_owned());
                }
            }
            "edge" => raw_edges.push((line, tokens.iter().map(|t| t.to_string()).collect())),
            other => return Err(err(line, format!("unknown directive `{other}`"))),
        }
    }
    let input = input.ok_or_else(|| err(0, "missing input line"))?;
    let output = output.ok_or_else(|| err(0, "missing output line"))?;
    let root = root.ok_or_else(|| err(0, "no root state"))?;
    let root_id = StateId(state_names.iter().position(|n| *n == root).unwrap() as u32);
    let mut t = InverseTransducer::new(input.clone(), output.clone(), state_names, root_id)?;
    for (line, tokens) in raw_edges {
        if tokens.len() < 5 {
            return Err(err(line, "expected `edge SRC LETTER DST OUTPUT...`"));
        }
        let src = t
            .state_by_name(&tokens[1])
            .ok_or_else(|| err(line, format!("unknown state `{}`", tokens[1])))?;
        let letter = input
            .parse_letter(&tokens[2])
            .map_err(|e| err(line, e.to_string()))?;
        let dst = t
            .state_by_name(&tokens[3])
            .ok_or_else(|| err(line, format!("unknown state `{}`", tokens[3])))?;
        let u = if tokens[4..] == ["-"] {
            Word::empty()
        } else {
            output
                .parse_word(&tokens[4..].join(" "))
                .map_err(|e| err(line, e.to_string()))?
        };
        t.add_edge(src, letter, u, dst)
            .map_err(|e| err(line, e.to_string()))?;
    }
    Ok(t)
}

pub fn serialize_transducer(t: &InverseTransducer) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "input {}", t.input());
    let _ = writeln!(out, "output {}", t.output());
    for i in 0..t.state_count() {
        let q = StateId(i as u32);
        if q == t.root() {
            let _ = writeln!(out, "state {} root", t.state_name(q));
        } else {
            let _ = writeln!(out, "state {}", t.state_name(q));
        }
    }
    for (p, y, u, q) in t.edges() {
        let u_text = if u.is_empty() {
            "-".to_owned()
        } else {
            t.output().display_word(u)
        };
        let _ = writeln!(
            out,
            "edge {} {} {} {}",
            t.state_name(p),
            t.input().display_letter(y),
            t.state_name(q),
            u_text
        );
    }
    out
}

/// Assembly format: `input`, `output`, `transversal NAMES`,
/// `row T Y -> H... T2`, `proj I X -> WORD...`, `target I RADIUS LETTERS...`.
pub fn parse_assembly(text: &str) -> Result<GroupAssembly> {
    let mut input: Option<InvolutiveAlphabet> = None;
    let mut output: Option<InvolutiveAlphabet> = None;
    let mut transversal: Vec<String> = Vec::new();
    let mut raw_rows: Vec<(usize, Vec<String>)> = Vec::new();
    let mut raw_projs: Vec<(usize, Vec<String>)> = Vec::new();
    let mut raw_targets: Vec<(usize, Vec<String>)> = Vec::new();
    for (line, tokens) in content_lines(text) {
        match tokens[0] {
            "input" => {
                input = Some(
                    InvolutiveAlphabet::new(&tokens[1..]).map_err(|e| err(line, e.to_string()))?,
                )
            }
            "output" => {
                output = Some(
                    InvolutiveAlphabet::new(&tokens[1..]).map_err(|e| err(line, e.to_string()))?,
                )
            }
            "transversal" => transversal.extend(tokens[1..].iter().map(|t| t.to_string())),
            "row" => raw_rows.push((line, tokens.iter().map(|t| t.to_string()).collect())),
            "proj" => raw_projs.push((line, tokens.iter().map(|t| t.to_string()).collect())),
            "target" => raw_targets.push((line, tokens.iter().map(|t| t.to_string()).collect())),
            other => return Err(err(line, format!("unknown directive `{other}`"))),
        }
    }
    let input = input.ok_or_else(|| err(0, "missing input line"))?;
    let output = output.ok_or_else(|| err(0, "missing output line"))?;
    let mut asm = GroupAssembly::new(input.clone(), output.clone(), transversal.clone())?;
    let rep = |line: usize, name: &str| -> Result<usize> {
        transversal
            .iter()
            .position(|t| t == name)
            .ok_or_else(|| err(line, format!("unknown representative `{name}`")))
    };
    for (line, tokens) in raw_rows {
        // row t y -> h... t2
        if tokens.len() < 5 || tokens[3] != "->" {
            return Err(err(line, "expected `row T Y -> H... T2`"));
        }
        let t1 = rep(line, &tokens[1])?;
        let y = input
            .parse_letter(&tokens[2])
            .map_err(|e| err(line, e.to_string()))?;
        let t2 = rep(line, tokens.last().unwrap())?;
        let h_tokens = &tokens[4..tokens.len() - 1];
        let h = if h_tokens == ["-"] || h_tokens.is_empty() {
            Word::empty()
        } else {
            output
                .parse_word(&h_tokens.join(" "))
                .map_err(|e| err(line, e.to_string()))?
        };
        asm.row(t1, y, h, t2).map_err(|e| err(line, e.to_string()))?;
    }

    // Targets first, then projections resolved against them.
    let mut targets: Vec<(usize, u32, InvolutiveAlphabet)> = Vec::new();
    for (line, tokens) in &raw_targets {
        if tokens.len() < 4 {
            return Err(err(*line, "expected `target I RADIUS LETTERS...`"));
        }
        let index: usize = tokens[1]
            .parse()
            .map_err(|_| err(*line, "target index must be a number"))?;
        let radius: u32 = tokens[2]
            .parse()
            .map_err(|_| err(*line, "radius must be a number"))?;
        let alpha =
            InvolutiveAlphabet::new(&tokens[3..]).map_err(|e| err(*line, e.to_string()))?;
        targets.push((index, radius, alpha));
    }
    targets.sort_by_key(|&(i, _, _)| i);
    for (pos, &(index, radius, ref alpha)) in targets.iter().enumerate() {
        if index != pos + 1 {
            return Err(Error::InvalidAssembly(format!(
                "target indices must be 1..{}, found {index}",
                targets.len()
            )));
        }
        let mut images: Vec<Word> = vec![Word::empty(); output.positive_count()];
        for (line, tokens) in &raw_projs {
            if tokens.len() < 5 || tokens[3] != "->" {
                return Err(err(*line, "expected `proj I X -> WORD...`"));
            }
            let i: usize = tokens[1]
                .parse()
                .map_err(|_| err(*line, "projection index must be a number"))?;
            if i != index {
                continue;
            }
            let x = output
                .parse_letter(&tokens[2])
                .map_err(|e| err(*line, e.to_string()))?;
            if !x.is_positive() {
                return Err(err(*line, "projections are given on positive letters"));
            }
            let image_tokens = &tokens[4..];
            let image = if image_tokens == ["-"] {
                Word::empty()
            } else {
                alpha
                    .parse_word(&image_tokens.join(" "))
                    .map_err(|e| err(*line, e.to_string()))?
            };
            images[x.base_index()] = image;
        }
        let target = crate::families::free_group_ball_over(alpha, radius)?;
        asm.projection(Projection::new(images), target)?;
    }
    asm.finish()
}

pub fn serialize_assembly(asm: &GroupAssembly) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "input {}", asm.input());
    let _ = writeln!(out, "output {}", asm.output());
    let _ = writeln!(out, "transversal {}", asm.transversal().join(" "));
    for (t1, y, h, t2) in asm.rows() {
        let h_text = if h.is_empty() {
            "-".to_owned()
        } else {
            asm.output().display_word(h)
        };
        let _ = writeln!(
            out,
            "row {} {} -> {} {}",
            asm.transversal()[t1],
            asm.input().display_letter(y),
            h_text,
            asm.transversal()[t2]
        );
    }
    for (i, (proj, target)) in asm.projections().iter().enumerate() {
        let target_alpha = target.graph().alphabet();
        for p in 0..asm.output().positive_count() {
            let image = proj.image_of_positive(p);
            let image_text = if image.is_empty() {
                "-".to_owned()
            } else {
                target_alpha.display_word(image)
            };
            let _ = writeln!(
                out,
                "proj {} {} -> {}",
                i + 1,
                asm.output().positive_names()[p],
                image_text
            );
        }
        let radius = target.trusted_radius().unwrap_or(0);
        let _ = writeln!(out, "target {} {} {}", i + 1, radius, target_alpha);
    }
    out
}

pub enum DecompositionFile {
    Tree(TreeDecomposition),
    Partition(StrongTreePartition),
}

/// Decomposition format: either `bag NODE V...` plus `tree-edge N1 N2`
/// lines, or `block V...` lines. The two styles do not mix.
pub fn parse_decomposition(text: &str, g: &InverseGraph) -> Result<DecompositionFile> {
    let mut node_names: Vec<String> = Vec::new();
    let mut bags: Vec<BTreeSet<VertexId>> = Vec::new();
    let mut raw_tree_edges: Vec<(usize, String, String)> = Vec::new();
    let mut blocks: Vec<BTreeSet<VertexId>> = Vec::new();
    for (line, tokens) in content_lines(text) {
        match tokens[0] {
            "bag" => {
                if tokens.len() < 2 {
                    return Err(err(line, "expected `bag NODE V...`"));
                }
                node_names.push(tokens[1].to_owned());
                let mut bag = BTreeSet::new();
                for key in &tokens[2..] {
                    bag.insert(g.require_vertex(key)?);
                }
                bags.push(bag);
            }
            "tree-edge" => {
                if tokens.len() != 3 {
                    return Err(err(line, "expected `tree-edge N1 N2`"));
                }
                raw_tree_edges.push((line, tokens[1].to_owned(), tokens[2].to_owned()));
            }
            "block" => {
                let mut block = BTreeSet::new();
                for key in &tokens[1..] {
                    block.insert(g.require_vertex(key)?);
                }
                blocks.push(block);
            }
            other => return Err(err(line, format!("unknown directive `{other}`"))),
        }
    }
    match (bags.is_empty(), blocks.is_empty()) {
        (false, true) => {
            let mut tree_edges = Vec::new();
            for (line, a, b) in raw_tree_edges {
                let find = |name: &str| {
                    node_names
                        .iter()
                        .position(|n| n == name)
                        .ok_or_else(|| err(line, format!("unknown tree node `{name}`")))
                };
                tree_edges.push((find(&a)?, find(&b)?));
            }
            Ok(DecompositionFile::Tree(TreeDecomposition { node_names, tree_edges, bags }))
        }
        (true, false) => Ok(DecompositionFile::Partition(StrongTreePartition { blocks })),
        (true, true) => Err(err(0, "empty decomposition file")),
        (false, false) => Err(err(0, "bag and block lines do not mix")),
    }
}
