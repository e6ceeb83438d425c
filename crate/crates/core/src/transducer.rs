//! Inverse letter-to-word transducers, their products with inverse graphs,
//! and transversal-table assemblies for groups presented over a finite-index
//! subgroup of a direct product of free groups.

use std::collections::{BTreeMap, VecDeque};

use crate::alphabet::{InvolutiveAlphabet, Letter};
use crate::error::{Error, Result};
use crate::graph::{GraphBuilder, RootedGraph, TraceOutcome, VertexId};
use crate::pda::StateId;
use crate::word::{free_reduce, Word};

/// A deterministic letter-to-word machine whose edges come in mutually
/// inverse pairs: reading `y` and emitting `u` one way means reading the
/// inverse letter and emitting the inverse word the other way.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct InverseTransducer {
    input: InvolutiveAlphabet,
    output: InvolutiveAlphabet,
    state_names: Vec<String>,
    root: StateId,
    edges: BTreeMap<(StateId, Letter), (StateId, Word)>,
}

impl InverseTransducer {
    pub fn new(
        input: InvolutiveAlphabet,
        output: InvolutiveAlphabet,
        state_names: Vec<String>,
        root: StateId,
    ) -> Result<InverseTransducer> {
        if root.idx() >= state_names.len() {
            return Err(Error::InvalidTransducer("root state out of range".into()));
        }
        Ok(InverseTransducer {
            input,
            output,
            state_names,
            root,
            edges: BTreeMap::new(),
        })
    }

    pub fn input(&self) -> &InvolutiveAlphabet {
        &self.input
    }

    pub fn output(&self) -> &InvolutiveAlphabet {
        &self.output
    }

    pub fn root(&self) -> StateId {
        self.root
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

    pub fn edges(&self) -> impl Iterator<Item = (StateId, Letter, &Word, StateId)> {
        self.edges.iter().map(|(&(p, y), (q, u))| (p, y, u, *q))
    }

    pub fn edge(&self, p: StateId, y: Letter) -> Option<(StateId, &Word)> {
        self.edges.get(&(p, y)).map(|(q, u)| (*q, u))
    }

    /// Add an edge and its inverse. Fails on determinism clashes or when an
    /// existing reverse edge disagrees.
    pub fn add_edge(&mut self, p: StateId, y: Letter, u: Word, q: StateId) -> Result<()> {
        if !self.input.contains(y) {
            return Err(Error::UnknownLetter(format!("input letter id {}", y.closure_index())));
        }
        for letter in u.letters() {
            if !self.output.contains(letter) {
                return Err(Error::UnknownLetter(format!(
                    "output letter id {}",
                    letter.closure_index()
                )));
            }
        }
        let forward = (q, u.clone());
        let backward = (p, u.inverse());
        for (key, value) in [((p, y), forward), ((q, y.inverse()), backward)] {
            match self.edges.get(&key) {
                None => {
                    self.edges.insert(key, value);
                }
                Some(existing) if *existing == value => {}
                Some(_) => {
                    return Err(Error::InvalidTransducer(format!(
                        "conflicting edge at state `{}` on `{}`",
                        self.state_name(key.0),
                        self.input.display_letter(key.1)
                    )))
                }
            }
        }
        Ok(())
    }
}

/// Output of the unique circuit labeled `s` at the root, if the path exists
/// and closes; otherwise undefined.
pub fn transduce(a: &InverseTransducer, s: &Word) -> Option<Word> {
    let mut at = a.root();
    let mut out = Word::empty();
    for y in s.letters() {
        let (next, u) = a.edge(at, y)?;
        out = out.concat(u);
        at = next;
    }
    (at == a.root()).then_some(out)
}

/// The component of (transducer root, graph root) in the pairing whose
/// `y`-edges follow the transducer's output word through the graph. The
/// result is an inverse graph over the transducer's input alphabet; its
/// language is the transducer preimage of the graph's language.
pub fn product(a: &InverseTransducer, rg: &RootedGraph) -> Result<RootedGraph> {
    let g = rg.graph();
    let key = |p: StateId, q: VertexId| format!("{}|{}", a.state_name(p), g.key(q));
    let mut builder = GraphBuilder::new(a.input.clone());
    let root = builder.vertex(&key(a.root(), rg.root()));
    builder.root(root);
    let mut seen: BTreeMap<(StateId, VertexId), VertexId> = BTreeMap::new();
    seen.insert((a.root(), rg.root()), root);
    let mut queue = VecDeque::from([(a.root(), rg.root())]);
    while let Some((p, q)) = queue.pop_front() {
        let src = seen[&(p, q)];
        for y in a.input.letters() {
            let Some((p2, u)) = a.edge(p, y) else { continue };
            match g.trace_trusted(q, u) {
                TraceOutcome::Reached(q2) => {
                    let dst = match seen.get(&(p2, q2)) {
                        Some(&v) => v,
                        None => {
                            let v = builder.vertex(&key(p2, q2));
                            seen.insert((p2, q2), v);
                            queue.push_back((p2, q2));
                            v
                        }
                    };
                    if y.is_positive() {
                        builder.edge(src, y, dst);
                    }
                }
                TraceOutcome::LostAtTruncated(_) => builder.truncate(src),
                TraceOutcome::Dead(_) => {}
            }
        }
    }
    builder.build_rooted()
}

/// A homomorphic letter map into a free group's alphabet.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Projection {
    /// Image of each positive letter; inverses follow.
    images: Vec<Word>,
}

impl Projection {
    pub fn new(images: Vec<Word>) -> Projection {
        Projection { images }
    }

    pub fn identity(alpha: &InvolutiveAlphabet) -> Projection {
        Projection {
            images: alpha.positive_letters().map(|l| Word(vec![l])).collect(),
        }
    }

    pub fn image_of_positive(&self, index: usize) -> &Word {
        &self.images[index]
    }

    pub fn apply(&self, w: &Word) -> Result<Word> {
        let mut out = Word::empty();
        for letter in w.letters() {
            let base = self
                .images
                .get(letter.base_index())
                .ok_or_else(|| Error::UnknownLetter(format!("letter id {}", letter.closure_index())))?;
            let piece = if letter.is_positive() { base.clone() } else { base.inverse() };
            out = out.concat(&piece);
        }
        Ok(out)
    }
}

/// A group over the generators of a finite-index subgroup plus coset
/// representatives: a transversal table rewriting (representative, letter)
/// to (subgroup word, representative), and projections of the subgroup onto
/// free-group factors with their acceptor balls.
#[derive(Clone, Debug)]
pub struct GroupAssembly {
    input: InvolutiveAlphabet,
    output: InvolutiveAlphabet,
    transversal: Vec<String>,
    rows: BTreeMap<(usize, Letter), (Word, usize)>,
    projections: Vec<(Projection, RootedGraph)>,
    machine: Option<InverseTransducer>,
}

impl GroupAssembly {
    /// The first transversal name is the identity coset representative.
    pub fn new(
        input: InvolutiveAlphabet,
        output: InvolutiveAlphabet,
        transversal: Vec<String>,
    ) -> Result<GroupAssembly> {
        if transversal.is_empty() {
            return Err(Error::InvalidAssembly("transversal is empty".into()));
        }
        let mut names = transversal.clone();
        names.sort();
        names.dedup();
        if names.len() != transversal.len() {
            return Err(Error::InvalidAssembly("duplicate transversal name".into()));
        }
        Ok(GroupAssembly {
            input,
            output,
            transversal,
            rows: BTreeMap::new(),
            projections: Vec::new(),
            machine: None,
        })
    }

    pub fn input(&self) -> &InvolutiveAlphabet {
        &self.input
    }

    pub fn output(&self) -> &InvolutiveAlphabet {
        &self.output
    }

    pub fn transversal(&self) -> &[String] {
        &self.transversal
    }

    pub fn rows(&self) -> impl Iterator<Item = (usize, Letter, &Word, usize)> {
        self.rows.iter().map(|(&(t, y), (h, t2))| (t, y, h, *t2))
    }

    pub fn projections(&self) -> &[(Projection, RootedGraph)] {
        &self.projections
    }

    pub fn row(&mut self, t: usize, y: Letter, h: Word, t2: usize) -> Result<()> {
        if t >= self.transversal.len() || t2 >= self.transversal.len() {
            return Err(Error::InvalidAssembly("row references unknown representative".into()));
        }
        if !self.input.contains(y) {
            return Err(Error::UnknownLetter(format!("letter id {}", y.closure_index())));
        }
        for letter in h.letters() {
            if !self.output.contains(letter) {
                return Err(Error::UnknownLetter(format!("letter id {}", letter.closure_index())));
            }
        }
        if self.rows.insert((t, y), (h, t2)).is_some() {
            return Err(Error::InvalidAssembly(format!(
                "duplicate row ({}, {})",
                self.transversal[t],
                self.input.display_letter(y)
            )));
        }
        Ok(())
    }

    pub fn projection(&mut self, proj: Projection, target: RootedGraph) -> Result<()> {
        for i in 0..self.output.positive_count() {
            let image = proj.image_of_positive(i);
            for letter in image.letters() {
                if !target.graph().alphabet().contains(letter) {
                    return Err(Error::InvalidAssembly(format!(
                        "projection image of `{}` uses a letter outside the target alphabet",
                        self.output.display_letter(Letter::positive(i))
                    )));
                }
            }
        }
        self.projections.push((proj, target));
        Ok(())
    }

    /// Complete rows for missing inverse letters from their reverses, then
    /// check totality and reverse consistency.
    pub fn finish(mut self) -> Result<GroupAssembly> {
        let snapshot: Vec<(usize, Letter, Word, usize)> = self
            .rows
            .iter()
            .map(|(&(t, y), (h, t2))| (t, y, h.clone(), *t2))
            .collect();
        for (t, y, h, t2) in snapshot {
            let reverse_key = (t2, y.inverse());
            let reverse_val = (h.inverse(), t);
            match self.rows.get(&reverse_key) {
                None => {
                    self.rows.insert(reverse_key, reverse_val);
                }
                Some(existing) if *existing == reverse_val => {}
                Some(_) => {
                    return Err(Error::InvalidAssembly(format!(
                        "row ({}, {}) disagrees with the reverse of ({}, {})",
                        self.transversal[t2],
                        self.input.display_letter(y.inverse()),
                        self.transversal[t],
                        self.input.display_letter(y)
                    )))
                }
            }
        }
        for t in 0..self.transversal.len() {
            for y in self.input.letters() {
                if !self.rows.contains_key(&(t, y)) {
                    return Err(Error::InvalidAssembly(format!(
                        "missing row ({}, {})",
                        self.transversal[t],
                        self.input.display_letter(y)
                    )));
                }
            }
        }
        if self.projections.is_empty() {
            return Err(Error::InvalidAssembly("no projections".into()));
        }
        let mut machine = InverseTransducer::new(
            self.input.clone(),
            self.output.clone(),
            self.transversal.clone(),
            StateId(0),
        )?;
        for (&(t1, y), (h, t2)) in &self.rows {
            machine.add_edge(StateId(t1 as u32), y, h.clone(), StateId(*t2 as u32))?;
        }
        self.machine = Some(machine);
        Ok(self)
    }

    pub fn is_finished(&self) -> bool {
        self.machine.is_some()
    }

    pub fn machine(&self) -> Result<&InverseTransducer> {
        self.machine
            .as_ref()
            .ok_or_else(|| Error::InvalidAssembly("assembly not finished".into()))
    }
}

/// The coset transducer of an assembly: states are the representatives, the
/// root is the identity representative, and each table row is an edge.
pub fn build_group_transducer(asm: &GroupAssembly) -> Result<InverseTransducer> {
    asm.machine().cloned()
}

/// Word-problem membership: rewrite through the coset transducer, project
/// onto every factor, and demand each image reduce to the identity in its
/// acceptor ball.
pub fn wp_member(asm: &GroupAssembly, w: &Word) -> Result<bool> {
    let machine = asm.machine()?;
    let Some(h) = transduce(machine, w) else {
        return Ok(false);
    };
    for (proj, target) in asm.projections() {
        let image = free_reduce(&proj.apply(&h)?);
        if image.is_empty() {
            continue;
        }
        if target.graph().trace(target.root(), &image) != Some(target.root()) {
            return Ok(false);
        }
    }
    Ok(true)
}
