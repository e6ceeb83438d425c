//! Chomsky-normal-form grammars over involutive alphabets: CYK membership
//! with parse trees, the shortest-word bound, and triangulation of circuits
//! by a derivation.

use std::collections::{BTreeMap, BTreeSet};

use crate::alphabet::{InvolutiveAlphabet, Letter};
use crate::error::{Error, Result};
use crate::graph::Walk;
use crate::word::Word;

#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Variable(pub u32);

impl Variable {
    pub fn idx(self) -> usize {
        self.0 as usize
    }
}

/// A grammar with productions `X -> Y Z` (neither the start symbol) and
/// `X -> a`, plus an optional start epsilon. All variables must be reachable
/// and productive.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CnfGrammar {
    alphabet: InvolutiveAlphabet,
    var_names: Vec<String>,
    start: Variable,
    binary: Vec<(Variable, Variable, Variable)>,
    terminal: Vec<(Variable, Letter)>,
    epsilon: bool,
}

impl CnfGrammar {
    pub fn new(
        alphabet: InvolutiveAlphabet,
        var_names: Vec<String>,
        start: Variable,
        binary: Vec<(Variable, Variable, Variable)>,
        terminal: Vec<(Variable, Letter)>,
        epsilon: bool,
    ) -> Result<CnfGrammar> {
        let g = CnfGrammar { alphabet, var_names, start, binary, terminal, epsilon };
        g.validate()?;
        Ok(g)
    }

    fn validate(&self) -> Result<()> {
        let n = self.var_names.len();
        if self.start.idx() >= n {
            return Err(Error::InvalidGrammar("start symbol out of range".into()));
        }
        {
            let mut seen = BTreeSet::new();
            for name in &self.var_names {
                if !seen.insert(name) {
                    return Err(Error::InvalidGrammar(format!("duplicate variable `{name}`")));
                }
            }
        }
        for &(x, y, z) in &self.binary {
            for v in [x, y, z] {
                if v.idx() >= n {
                    return Err(Error::InvalidGrammar("variable out of range".into()));
                }
            }
            if y == self.start || z == self.start {
                return Err(Error::InvalidGrammar(format!(
                    "start symbol `{}` may not appear on a right-hand side",
                    self.var_names[self.start.idx()]
                )));
            }
        }
        for &(x, letter) in &self.terminal {
            if x.idx() >= n {
                return Err(Error::InvalidGrammar("variable out of range".into()));
            }
            if !self.alphabet.contains(letter) {
                return Err(Error::InvalidGrammar("terminal letter outside alphabet".into()));
            }
        }
        // Productive: derives some terminal word.
        let mut productive = vec![false; n];
        loop {
            let mut grew = false;
            for &(x, _) in &self.terminal {
                if !productive[x.idx()] {
                    productive[x.idx()] = true;
                    grew = true;
                }
            }
            for &(x, y, z) in &self.binary {
                if !productive[x.idx()] && productive[y.idx()] && productive[z.idx()] {
                    productive[x.idx()] = true;
                    grew = true;
                }
            }
            if !grew {
                break;
            }
        }
        // Reachable from the start symbol.
        let mut reachable = vec![false; n];
        reachable[self.start.idx()] = true;
        loop {
            let mut grew = false;
            for &(x, y, z) in &self.binary {
                if reachable[x.idx()] && (!reachable[y.idx()] || !reachable[z.idx()]) {
                    reachable[y.idx()] = true;
                    reachable[z.idx()] = true;
                    grew = true;
                }
            }
            if !grew {
                break;
            }
        }
        for i in 0..n {
            if !productive[i] {
                return Err(Error::InvalidGrammar(format!(
                    "variable `{}` is unproductive",
                    self.var_names[i]
                )));
            }
            if !reachable[i] {
                return Err(Error::InvalidGrammar(format!(
                    "variable `{}` is unreachable",
                    self.var_names[i]
                )));
            }
        }
        Ok(())
    }

    pub fn alphabet(&self) -> &InvolutiveAlphabet {
        &self.alphabet
    }

    pub fn start(&self) -> Variable {
        self.start
    }

    pub fn epsilon(&self) -> bool {
        self.epsilon
    }

    pub fn variable_count(&self) -> usize {
        self.var_names.len()
    }

    pub fn variable_name(&self, v: Variable) -> &str {
        &self.var_names[v.idx()]
    }

    pub fn variable_by_name(&self, name: &str) -> Option<Variable> {
        self.var_names
            .iter()
            .position(|n| n == name)
            .map(|i| Variable(i as u32))
    }

    pub fn binary_productions(&self) -> &[(Variable, Variable, Variable)] {
        &self.binary
    }

    pub fn terminal_productions(&self) -> &[(Variable, Letter)] {
        &self.terminal
    }

    /// CYK membership from any variable.
    pub fn derives(&self, from: Variable, w: &Word) -> Option<ParseTree> {
        if w.is_empty() {
            return (from == self.start && self.epsilon).then_some(ParseTree::Epsilon { var: from });
        }
        let n = w.len();
        // table[len-1][i]: variables deriving w[i .. i+len].
        let mut table: Vec<Vec<BTreeMap<Variable, Back>>> = vec![vec![BTreeMap::new(); n]; n];
        for (i, letter) in w.letters().enumerate() {
            for &(x, a) in &self.terminal {
                if a == letter {
                    table[0][i].entry(x).or_insert(Back::Leaf(letter));
                }
            }
        }
        for len in 2..=n {
            for i in 0..=n - len {
                for split in 1..len {
                    for &(x, y, z) in &self.binary {
                        if table[len - 1][i].contains_key(&x) {
                            continue;
                        }
                        if table[split - 1][i].contains_key(&y)
                            && table[len - split - 1][i + split].contains_key(&z)
                        {
                            table[len - 1][i].insert(x, Back::Split(y, z, split));
                        }
                    }
                }
            }
        }
        table[n - 1][0].contains_key(&from).then(|| self.rebuild(&table, from, 0, n))
    }

    fn rebuild(
        &self,
        table: &[Vec<BTreeMap<Variable, Back>>],
        var: Variable,
        i: usize,
        len: usize,
    ) -> ParseTree {
        match table[len - 1][i][&var] {
            Back::Leaf(letter) => ParseTree::Leaf { var, letter },
            Back::Split(y, z, split) => ParseTree::Branch {
                var,
                left: Box::new(self.rebuild(table, y, i, split)),
                right: Box::new(self.rebuild(table, z, i + split, len - split)),
            },
        }
    }

    /// Parse tree for a word in the language of the start symbol.
    pub fn cyk_member(&self, w: &Word) -> Option<ParseTree> {
        self.derives(self.start, w)
    }

    /// Length of the shortest word generated by each variable, by fixpoint.
    pub fn shortest_word_lengths(&self) -> Vec<usize> {
        let n = self.var_names.len();
        let mut min: Vec<Option<usize>> = vec![None; n];
        if self.epsilon {
            min[self.start.idx()] = Some(0);
        }
        for &(x, _) in &self.terminal {
            let entry = &mut min[x.idx()];
            *entry = Some(entry.map_or(1, |m: usize| m.min(1)));
        }
        loop {
            let mut changed = false;
            for &(x, y, z) in &self.binary {
                if let (Some(ly), Some(lz)) = (min[y.idx()], min[z.idx()]) {
                    let candidate = ly + lz;
                    if min[x.idx()].is_none_or(|m| candidate < m) {
                        min[x.idx()] = Some(candidate);
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        min.into_iter()
            .map(|m| m.expect("validated grammars are productive"))
            .collect()
    }

    /// Maximum over variables of the shortest generated word; bounds the span
    /// of every triangulation edge.
    pub fn shortest_word_bound(&self) -> usize {
        self.shortest_word_lengths().into_iter().max().unwrap_or(0)
    }

    /// The words freely reducing to the identity, as a grammar: one opener
    /// variable per letter so that the bound above stays at two.
    pub fn symmetric_dyck(alphabet: &InvolutiveAlphabet) -> CnfGrammar {
        let closure = alphabet.closure_len();
        let mut names = vec!["S".to_owned(), "N".to_owned()];
        // Per letter x: Rest_x derives L(N) x' and the single letter x',
        // Lit_x derives the letter x.
        let rest_base = names.len();
        for letter in alphabet.letters() {
            names.push(format!("R_{}", alphabet.display_letter(letter)));
        }
        let lit_base = rest_base + closure;
        for letter in alphabet.letters() {
            names.push(format!("L_{}", alphabet.display_letter(letter)));
        }
        let start = Variable(0);
        let n = Variable(1);
        let rest = |l: Letter| Variable((rest_base + l.closure_index()) as u32);
        let lit = |l: Letter| Variable((lit_base + l.closure_index()) as u32);

        let mut binary = Vec::new();
        let mut terminal = Vec::new();
        for x in [start, n] {
            binary.push((x, n, n));
            for letter in alphabet.letters() {
                binary.push((x, lit(letter), rest(letter)));
            }
        }
        for letter in alphabet.letters() {
            binary.push((rest(letter), n, lit(letter.inverse())));
            terminal.push((rest(letter), letter.inverse()));
            terminal.push((lit(letter), letter));
        }
        CnfGrammar::new(alphabet.clone(), names, start, binary, terminal, true)
            .expect("the reduction grammar is well-formed")
    }
}

#[derive(Copy, Clone, Debug)]
enum Back {
    Leaf(Letter),
    Split(Variable, Variable, usize),
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ParseTree {
    Epsilon { var: Variable },
    Leaf { var: Variable, letter: Letter },
    Branch { var: Variable, left: Box<ParseTree>, right: Box<ParseTree> },
}

impl ParseTree {
    pub fn var(&self) -> Variable {
        match self {
            ParseTree::Epsilon { var } | ParseTree::Leaf { var, .. } | ParseTree::Branch { var, .. } => {
                *var
            }
        }
    }

    pub fn word(&self) -> Word {
        let mut out = Word::empty();
        self.collect(&mut out);
        out
    }

    fn collect(&self, out: &mut Word) {
        match self {
            ParseTree::Epsilon { .. } => {}
            ParseTree::Leaf { letter, .. } => out.push(*letter),
            ParseTree::Branch { left, right, .. } => {
                left.collect(out);
                right.collect(out);
            }
        }
    }
}

/// A chord added over a circuit by a derivation step: the factor between the
/// two positions is generated by the labeling variable.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TriangulationEdge {
    pub from: usize,
    pub to: usize,
    pub variable: Variable,
    /// Index of the edge this one was split from.
    pub parent: Option<usize>,
}

/// Lay the derivation over a circuit: one edge per derivation node, positions
/// following the factorization. The root edge spans the whole circuit.
pub fn triangulate_circuit(
    grammar: &CnfGrammar,
    tree: &ParseTree,
    circuit: &Walk,
) -> Result<Vec<TriangulationEdge>> {
    if tree.word() != circuit.label() {
        return Err(Error::InvalidParameter(
            "derivation does not produce the circuit label".into(),
        ));
    }
    if !circuit.is_circuit() {
        return Err(Error::InvalidParameter("walk is not a circuit".into()));
    }
    let _ = grammar;
    let mut edges = Vec::new();
    if matches!(tree, ParseTree::Epsilon { .. }) {
        return Ok(edges);
    }
    fn emit(tree: &ParseTree, at: usize, parent: Option<usize>, edges: &mut Vec<TriangulationEdge>) -> usize {
        let len = match tree {
            ParseTree::Epsilon { .. } => 0,
            ParseTree::Leaf { .. } => 1,
            ParseTree::Branch { .. } => tree.word().len(),
        };
        let idx = edges.len();
        edges.push(TriangulationEdge { from: at, to: at + len, variable: tree.var(), parent });
        if let ParseTree::Branch { left, right, .. } = tree {
            let left_len = emit(left, at, Some(idx), edges);
            emit(right, at + left_len, Some(idx), edges);
        }
        len
    }
    emit(tree, 0, None, &mut edges);
    Ok(edges)
}
