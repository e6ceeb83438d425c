//! Real-time pushdown machines over involutive alphabets, the inverse
//! variant whose positive and negative halves reverse each other, the
//! stack-based checker for words reducing to the identity along a walk, and
//! bounded configuration graphs.
//!
//! Machines here are relations keyed by (state, input letter, stack top); a
//! transition rewrites the top symbol by a word of height change at most one.
//! There are no empty-input moves, so every machine is real-time by
//! construction.

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};

use crate::alphabet::{InvolutiveAlphabet, Letter};
use crate::error::{Error, Result};
use crate::graph::{GraphBuilder, InverseGraph, RootedGraph, VertexId};
use crate::word::Word;

#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct StateId(pub u32);

impl StateId {
    pub fn idx(self) -> usize {
        self.0 as usize
    }
}

#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct StackSym(pub u32);

impl StackSym {
    pub fn idx(self) -> usize {
        self.0 as usize
    }
}

#[derive(Copy, Clone, PartialEq, Eq, Debug, Default)]
pub enum Acceptance {
    #[default]
    FinalState,
    /// Final state with the stack back to the bottom symbol alone.
    FinalStateAndBottom,
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Config {
    pub state: StateId,
    pub stack: Vec<StackSym>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum PdaOutcome {
    Accepted(Config),
    /// Input exhausted in a non-accepting configuration.
    Rejected(Config),
    /// No transition applied at the given input position.
    Stuck { at: Config, position: usize },
}

impl PdaOutcome {
    pub fn is_accepted(&self) -> bool {
        matches!(self, PdaOutcome::Accepted(_))
    }
}

type TransitionTable = BTreeMap<(StateId, Letter, StackSym), Vec<(StateId, Vec<StackSym>)>>;

#[derive(Clone, Debug)]
pub struct Pda {
    state_names: Vec<String>,
    input: InvolutiveAlphabet,
    stack_names: Vec<String>,
    initial: StateId,
    bottom: StackSym,
    finals: BTreeSet<StateId>,
    acceptance: Acceptance,
    transitions: TransitionTable,
}

impl Pda {
    pub fn new(
        input: InvolutiveAlphabet,
        state_names: Vec<String>,
        stack_names: Vec<String>,
        initial: StateId,
        bottom: StackSym,
        acceptance: Acceptance,
    ) -> Pda {
        Pda {
            state_names,
            input,
            stack_names,
            initial,
            bottom,
            finals: BTreeSet::new(),
            acceptance,
            transitions: BTreeMap::new(),
        }
    }

    pub fn input(&self) -> &InvolutiveAlphabet {
        &self.input
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn bottom(&self) -> StackSym {
        self.bottom
    }

    pub fn acceptance(&self) -> Acceptance {
        self.acceptance
    }

    pub fn state_count(&self) -> usize {
        self.state_names.len()
    }

    pub fn state_name(&self, q: StateId) -> &str {
        &self.state_names[q.idx()]
    }

    pub fn state_by_name(&self, name: &str) -> Option<StateId> {
        self.state_names.iter().position(|n| n == name).map(|i| StateId(i as u32))
    }

    pub fn stack_count(&self) -> usize {
        self.stack_names.len()
    }

    pub fn stack_name(&self, s: StackSym) -> &str {
        &self.stack_names[s.idx()]
    }

    pub fn stack_by_name(&self, name: &str) -> Option<StackSym> {
        self.stack_names.iter().position(|n| n == name).map(|i| StackSym(i as u32))
    }

    pub fn finals(&self) -> &BTreeSet<StateId> {
        &self.finals
    }

    pub fn mark_final(&mut self, q: StateId) {
        self.finals.insert(q);
    }

    pub fn add_transition(&mut self, q: StateId, a: Letter, top: StackSym, p: StateId, push: Vec<StackSym>) {
        let entry = self.transitions.entry((q, a, top)).or_default();
        if !entry.contains(&(p, push.clone())) {
            entry.push((p, push));
        }
    }

    pub fn transitions(
        &self,
    ) -> impl Iterator<Item = (StateId, Letter, StackSym, StateId, &[StackSym])> {
        self.transitions
            .iter()
            .flat_map(|(&(q, a, x), outs)| outs.iter().map(move |(p, g)| (q, a, x, *p, g.as_slice())))
    }

    pub fn is_deterministic(&self) -> bool {
        self.transitions.values().all(|outs| outs.len() <= 1)
    }

    pub fn initial_config(&self) -> Config {
        Config { state: self.initial, stack: vec![self.bottom] }
    }

    /// One instantaneous step; `None` when no transition applies.
    pub fn step(&self, c: &Config, a: Letter) -> Option<Config> {
        let &top = c.stack.last()?;
        let outs = self.transitions.get(&(c.state, a, top))?;
        let (p, push) = outs.first()?;
        let mut stack = c.stack[..c.stack.len() - 1].to_vec();
        stack.extend_from_slice(push);
        Some(Config { state: *p, stack })
    }

    pub fn is_accepting(&self, c: &Config) -> bool {
        self.finals.contains(&c.state)
            && match self.acceptance {
                Acceptance::FinalState => true,
                Acceptance::FinalStateAndBottom => c.stack == vec![self.bottom],
            }
    }
}

/// Run a deterministic machine on a word.
pub fn run_pda(m: &Pda, w: &Word) -> Result<PdaOutcome> {
    if !m.is_deterministic() {
        return Err(Error::InvalidPda("machine is nondeterministic".into()));
    }
    let mut config = m.initial_config();
    for (i, letter) in w.letters().enumerate() {
        match m.step(&config, letter) {
            Some(next) => config = next,
            None => return Ok(PdaOutcome::Stuck { at: config, position: i }),
        }
    }
    if m.is_accepting(&config) {
        Ok(PdaOutcome::Accepted(config))
    } else {
        Ok(PdaOutcome::Rejected(config))
    }
}

/// Check the inverse-machine laws: determinism, height discipline, the two
/// transition halves reversing each other on configurations reachable within
/// the height bound, and no reachable empty stack.
pub fn validate_inverse_pda(m: &Pda, search_height: u32) -> Vec<String> {
    let mut issues = Vec::new();
    for (key, outs) in &m.transitions {
        if outs.len() > 1 {
            let (q, a, x) = *key;
            issues.push(format!(
                "nondeterministic: ({}, {}, {}) has {} targets",
                m.state_name(q),
                m.input.display_letter(a),
                m.stack_name(x),
                outs.len()
            ));
        }
    }
    for (q, a, x, _, push) in m.transitions() {
        let ok_shape = match push.len() {
            0 => true,
            1 => push[0] == x,
            2 => push[0] == x,
            _ => false,
        };
        if !ok_shape {
            issues.push(format!(
                "transition ({}, {}, {}) changes the stack height by more than one or rewrites below the top",
                m.state_name(q),
                m.input.display_letter(a),
                m.stack_name(x)
            ));
        }
    }
    if !issues.is_empty() {
        // Shape errors make the semantic search unreliable; report early.
        return issues;
    }

    // Bounded reachability: every realized step must reverse, and the stack
    // must never empty.
    let mut seen: BTreeSet<Config> = BTreeSet::new();
    let start = m.initial_config();
    seen.insert(start.clone());
    let mut queue = VecDeque::from([start]);
    while let Some(c) = queue.pop_front() {
        for a in m.input.letters() {
            let Some(next) = m.step(&c, a) else { continue };
            if next.stack.is_empty() {
                issues.push(format!(
                    "empty stack reachable from ({}, ...) reading {}",
                    m.state_name(c.state),
                    m.input.display_letter(a)
                ));
                continue;
            }
            if m.step(&next, a.inverse()) != Some(c.clone()) {
                issues.push(format!(
                    "step ({}, |{}|) --{}--> ({}, |{}|) has no reverse",
                    m.state_name(c.state),
                    c.stack.len(),
                    m.input.display_letter(a),
                    m.state_name(next.state),
                    next.stack.len()
                ));
            }
            if next.stack.len() as u32 <= search_height + 1 && seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    issues
}

/// A machine whose positive-letter and inverse-letter halves are mutual
/// reverses; its bounded configuration graph is an inverse graph.
#[derive(Clone, Debug)]
pub struct InversePda {
    pda: Pda,
}

impl InversePda {
    pub fn new(pda: Pda, search_height: u32) -> Result<InversePda> {
        let issues = validate_inverse_pda(&pda, search_height);
        if issues.is_empty() {
            Ok(InversePda { pda })
        } else {
            Err(Error::InvalidPda(issues.join("; ")))
        }
    }

    pub fn pda(&self) -> &Pda {
        &self.pda
    }

    pub fn run(&self, w: &Word) -> Result<PdaOutcome> {
        run_pda(&self.pda, w)
    }

    /// Configurations reachable with at most `height` symbols above the
    /// bottom, as a rooted inverse graph. Configurations at the bound are
    /// truncated.
    pub fn config_graph(&self, height: u32) -> Result<RootedGraph> {
        if height == 0 {
            return Err(Error::InvalidParameter("height bound must be at least 1".into()));
        }
        let m = &self.pda;
        let key = |c: &Config| {
            let stack: Vec<&str> = c.stack.iter().map(|&s| m.stack_name(s)).collect();
            format!("{}:{}", m.state_name(c.state), stack.join("."))
        };
        let mut builder = GraphBuilder::new(m.input.clone());
        let start = m.initial_config();
        let root = builder.vertex(&key(&start));
        builder.root(root);
        let mut seen: BTreeMap<Config, VertexId> = BTreeMap::new();
        seen.insert(start.clone(), root);
        let mut queue = VecDeque::from([start]);
        while let Some(c) = queue.pop_front() {
            let src = seen[&c];
            for a in m.input.letters() {
                let Some(next) = m.step(&c, a) else { continue };
                if next.stack.len() as u32 > height + 1 {
                    builder.truncate(src);
                    continue;
                }
                let dst = match seen.get(&next) {
                    Some(&v) => v,
                    None => {
                        let v = builder.vertex(&key(&next));
                        seen.insert(next.clone(), v);
                        queue.push_back(next.clone());
                        v
                    }
                };
                if a.is_positive() {
                    builder.edge(src, a, dst);
                }
            }
        }
        builder.build_rooted()
    }
}

/// The stack machine accepting, at each vertex, exactly the words that reduce
/// to the identity and trace a walk there: states are the vertices, the stack
/// holds the reduced prefix, and reading a letter either extends or cancels.
pub fn dyck_checker_pda(graph: &InverseGraph, base: VertexId) -> Result<InversePda> {
    if graph.has_truncation() {
        return Err(Error::InvalidParameter(
            "the checker needs a complete finite graph".into(),
        ));
    }
    let alpha = graph.alphabet().clone();
    let state_names: Vec<String> = graph.vertices().map(|v| graph.key(v).to_owned()).collect();
    let mut stack_names: Vec<String> = alpha.letters().map(|l| alpha.display_letter(l)).collect();
    let bottom = StackSym(stack_names.len() as u32);
    stack_names.push("bot".to_owned());
    let letter_sym = |l: Letter| StackSym(l.closure_index() as u32);

    let mut pda = Pda::new(
        alpha.clone(),
        state_names,
        stack_names,
        StateId(base.0),
        bottom,
        Acceptance::FinalStateAndBottom,
    );
    pda.mark_final(StateId(base.0));
    for (u, b, v) in graph.edges() {
        let (q, p) = (StateId(u.0), StateId(v.0));
        for top in alpha.letters().map(letter_sym).chain([bottom]) {
            if top != bottom && top == letter_sym(b.inverse()) {
                pda.add_transition(q, b, top, p, vec![]);
            } else {
                pda.add_transition(q, b, top, p, vec![top, letter_sym(b)]);
            }
        }
    }
    InversePda::new(pda, 4)
}

/// Does `w` factor as Dyck insertions around the letters of `base`, along the
/// walk `base` traces from `start`? Decided by memoized search over (input
/// position, base position, reduced residue).
pub fn derivable(graph: &InverseGraph, start: VertexId, w: &Word, base: &Word) -> Result<bool> {
    let base_vertices: Vec<VertexId> = {
        let mut at = start;
        let mut path = vec![at];
        for letter in base.letters() {
            at = graph
                .step(at, letter)
                .ok_or_else(|| Error::NotAccepted("base word does not trace a walk".into()))?;
            path.push(at);
        }
        path
    };

    struct Search<'a> {
        graph: &'a InverseGraph,
        w: Vec<Letter>,
        base: Vec<Letter>,
        base_vertices: Vec<VertexId>,
        failed: HashSet<(usize, usize, Vec<Letter>)>,
    }

    impl Search<'_> {
        fn run(&mut self, i: usize, j: usize, residue: &mut Vec<Letter>, at: VertexId) -> bool {
            if i == self.w.len() {
                return j == self.base.len() && residue.is_empty();
            }
            let memo_key = (i, j, residue.clone());
            if self.failed.contains(&memo_key) {
                return false;
            }
            let c = self.w[i];
            // Continue the current Dyck segment.
            if let Some(next) = self.graph.step(at, c) {
                let cancelled = residue.last() == Some(&c.inverse());
                if cancelled {
                    let popped = residue.pop().unwrap();
                    if self.run(i + 1, j, residue, next) {
                        return true;
                    }
                    residue.push(popped);
                } else {
                    residue.push(c);
                    if self.run(i + 1, j, residue, next) {
                        return true;
                    }
                    residue.pop();
                }
            }
            // Or close it and consume the next base letter.
            if residue.is_empty() && j < self.base.len() && c == self.base[j] {
                debug_assert_eq!(at, self.base_vertices[j]);
                if self.run(i + 1, j + 1, residue, self.base_vertices[j + 1]) {
                    return true;
                }
            }
            self.failed.insert(memo_key);
            false
        }
    }

    let mut search = Search {
        graph,
        w: w.0.clone(),
        base: base.0.clone(),
        base_vertices,
        failed: HashSet::new(),
    };
    Ok(search.run(0, 0, &mut Vec::new(), start))
}
