//! Constructors for the desk-scale graph families used throughout the tests
//! and the command line: free-group and free-abelian Cayley balls, cycles,
//! bouquets, the square-spur tree, and the infinite-dihedral assembly.

use crate::alphabet::{InvolutiveAlphabet, Letter};
use crate::error::{Error, Result};
use crate::graph::{GraphBuilder, RootedGraph};
use crate::transducer::{GroupAssembly, Projection};
use crate::word::Word;

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum FamilySpec {
    /// Radius-`radius` ball of the Cayley graph of the free group of the
    /// given rank; vertex keys are the reduced words.
    FreeGroup { rank: usize, radius: u32 },
    /// L1-ball of the standard Cayley graph of Z^rank; keys are coordinate
    /// tuples like `1,-2`.
    FreeAbelian { rank: usize, radius: u32 },
    /// Cayley graph of Z/modulus on one generator.
    Cycle { modulus: u32 },
    /// One vertex with a loop pair per letter.
    Bouquet { letters: Vec<String> },
    /// Root with an `a`-leaf and a `b`-ray of length `n`, carrying a `c`-leaf
    /// at every perfect square along the ray.
    BicyclicTree { n: u32 },
    /// The infinite dihedral group over its index-2 cyclic subgroup, as a
    /// transversal-table assembly.
    DihedralAssembly,
}

pub enum FamilyOutput {
    Graph(RootedGraph),
    Assembly(GroupAssembly),
}

pub fn make(spec: &FamilySpec) -> Result<FamilyOutput> {
    match spec {
        FamilySpec::FreeGroup { rank, radius } => {
            Ok(FamilyOutput::Graph(free_group_ball(*rank, *radius)?))
        }
        FamilySpec::FreeAbelian { rank, radius } => {
            Ok(FamilyOutput::Graph(free_abelian_ball(*rank, *radius)?))
        }
        FamilySpec::Cycle { modulus } => Ok(FamilyOutput::Graph(cycle_cayley(*modulus)?)),
        FamilySpec::Bouquet { letters } => Ok(FamilyOutput::Graph(bouquet(letters)?)),
        FamilySpec::BicyclicTree { n } => Ok(FamilyOutput::Graph(bicyclic_tree(*n)?)),
        FamilySpec::DihedralAssembly => Ok(FamilyOutput::Assembly(dihedral_assembly()?)),
    }
}

fn word_key(alpha: &InvolutiveAlphabet, w: &Word) -> String {
    if w.is_empty() {
        return "1".to_owned();
    }
    w.letters().map(|l| alpha.display_letter(l)).collect()
}

pub fn free_group_ball(rank: usize, radius: u32) -> Result<RootedGraph> {
    if rank == 0 {
        return Err(Error::InvalidParameter("rank must be at least 1".into()));
    }
    let alpha = InvolutiveAlphabet::of_rank(rank)?;
    let mut builder = GraphBuilder::new(alpha.clone());
    let root = builder.vertex("1");
    builder.root(root);

    // Grow reduced words outward layer by layer.
    let mut layer: Vec<Word> = vec![Word::empty()];
    for depth in 0..radius {
        let mut next = Vec::new();
        for w in &layer {
            let src = builder.lookup(&word_key(&alpha, w)).unwrap();
            for letter in alpha.letters() {
                if w.0.last() == Some(&letter.inverse()) {
                    continue;
                }
                let mut ext = w.clone();
                ext.push(letter);
                let dst = builder.vertex(&word_key(&alpha, &ext));
                builder.edge(src, letter, dst);
                if depth + 1 == radius {
                    builder.truncate(dst);
                }
                next.push(ext);
            }
        }
        layer = next;
    }
    builder.build_rooted()
}

pub fn free_abelian_ball(rank: usize, radius: u32) -> Result<RootedGraph> {
    if rank == 0 {
        return Err(Error::InvalidParameter("rank must be at least 1".into()));
    }
    let alpha = InvolutiveAlphabet::of_rank(rank)?;
    let key = |p: &[i64]| p.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",");
    let norm = |p: &[i64]| p.iter().map(|c| c.unsigned_abs()).sum::<u64>();

    let mut builder = GraphBuilder::new(alpha);
    let mut points = vec![vec![0i64; rank]];
    let root = builder.vertex(&key(&points[0]));
    builder.root(root);
    let mut head = 0;
    while head < points.len() {
        let p = points[head].clone();
        head += 1;
        let src = builder.lookup(&key(&p)).unwrap();
        if norm(&p) == radius as u64 {
            builder.truncate(src);
            continue;
        }
        for (i, letter) in (0..rank).map(|i| (i, Letter::positive(i))) {
            for (delta, l) in [(1i64, letter), (-1, letter.inverse())] {
                let mut q = p.clone();
                q[i] += delta;
                if norm(&q) > radius as u64 {
                    continue;
                }
                let known = builder.lookup(&key(&q)).is_some();
                let dst = builder.vertex(&key(&q));
                builder.edge(src, l, dst);
                if !known {
                    points.push(q);
                }
            }
        }
    }
    builder.build_rooted()
}

pub fn cycle_cayley(modulus: u32) -> Result<RootedGraph> {
    if modulus < 2 {
        return Err(Error::InvalidParameter("modulus must be at least 2".into()));
    }
    let alpha = InvolutiveAlphabet::new(&["a"])?;
    let a = Letter::positive(0);
    let mut builder = GraphBuilder::new(alpha);
    let verts: Vec<_> = (0..modulus).map(|i| builder.vertex(&i.to_string())).collect();
    for i in 0..modulus as usize {
        builder.edge(verts[i], a, verts[(i + 1) % modulus as usize]);
    }
    builder.root(verts[0]);
    builder.build_rooted()
}

pub fn bouquet<S: AsRef<str>>(letters: &[S]) -> Result<RootedGraph> {
    let alpha = InvolutiveAlphabet::new(letters)?;
    let mut builder = GraphBuilder::new(alpha.clone());
    let v = builder.vertex("1");
    for letter in alpha.positive_letters() {
        builder.edge(v, letter, v);
    }
    builder.root(v);
    builder.build_rooted()
}

pub fn bicyclic_tree(n: u32) -> Result<RootedGraph> {
    if n < 1 {
        return Err(Error::InvalidParameter("ray length must be at least 1".into()));
    }
    let alpha = InvolutiveAlphabet::new(&["a", "b", "c"])?;
    let (a, b, c) = (Letter::positive(0), Letter::positive(1), Letter::positive(2));
    let mut builder = GraphBuilder::new(alpha);
    let root = builder.vertex("b0");
    builder.root(root);
    let leaf = builder.vertex("a0");
    builder.edge(root, a, leaf);
    let mut prev = root;
    for i in 1..=n {
        let v = builder.vertex(&format!("b{i}"));
        builder.edge(prev, b, v);
        let mut sq = 1u32;
        while sq * sq < i {
            sq += 1;
        }
        if sq * sq == i {
            let cv = builder.vertex(&format!("c{i}"));
            builder.edge(v, c, cv);
        }
        prev = v;
    }
    // The ray continues past the ball.
    builder.truncate(prev);
    builder.build_rooted()
}

/// The infinite dihedral group generated by a translation `x` and an
/// involution `s`, presented over its translation subgroup with transversal
/// `{1, s}`. One projection, the identity on `{x}`.
pub fn dihedral_assembly() -> Result<GroupAssembly> {
    let input = InvolutiveAlphabet::new(&["x", "s"])?;
    let output = InvolutiveAlphabet::new(&["x"])?;
    let x = input.parse_letter("x")?;
    let s = input.parse_letter("s")?;
    let ox = output.parse_letter("x")?;

    let mut asm = GroupAssembly::new(input, output.clone(), vec!["1".into(), "s".into()])?;
    let one = Word::empty();
    let wx = Word(vec![ox]);
    let wxi = Word(vec![ox.inverse()]);
    asm.row(0, x, wx.clone(), 0)?;
    asm.row(0, x.inverse(), wxi.clone(), 0)?;
    asm.row(0, s, one.clone(), 1)?;
    asm.row(0, s.inverse(), one.clone(), 1)?;
    asm.row(1, x, wxi, 1)?;
    asm.row(1, x.inverse(), wx, 1)?;
    asm.row(1, s, one.clone(), 0)?;
    asm.row(1, s.inverse(), one, 0)?;

    let target = free_group_ball_over(&output, 12)?;
    let proj = Projection::identity(&output);
    asm.projection(proj, target)?;
    asm.finish()
}

/// Free-group ball over a caller-supplied alphabet.
pub fn free_group_ball_over(alpha: &InvolutiveAlphabet, radius: u32) -> Result<RootedGraph> {
    let mut builder = GraphBuilder::new(alpha.clone());
    let root = builder.vertex("1");
    builder.root(root);
    let mut layer: Vec<Word> = vec![Word::empty()];
    for depth in 0..radius {
        let mut next = Vec::new();
        for w in &layer {
            let src = builder.lookup(&word_key(alpha, w)).unwrap();
            for letter in alpha.letters() {
                if w.0.last() == Some(&letter.inverse()) {
                    continue;
                }
                let mut ext = w.clone();
                ext.push(letter);
                let dst = builder.vertex(&word_key(alpha, &ext));
                builder.edge(src, letter, dst);
                if depth + 1 == radius {
                    builder.truncate(dst);
                }
                next.push(ext);
            }
        }
        layer = next;
    }
    builder.build_rooted()
}
