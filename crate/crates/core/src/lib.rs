//! Inverse graphs over involutive alphabets, and the machinery that lives on
//! top of them: rooted languages, morphisms and covers, Stallings foldings,
//! determinizing vertex quotients, Chomsky-normal-form grammars with circuit
//! triangulations, inverse pushdown automata and their configuration graphs,
//! end-cone censuses and tree-likeness verifiers, and inverse transducers with
//! their graph products.
//!
//! Infinite graphs are only ever handled as finite balls whose outer layer is
//! flagged *truncated*; every metric or cone operation either stays inside the
//! trusted region or says so in its result.

pub mod alphabet;
pub mod analysis;
pub mod cones;
pub mod error;
pub mod families;
pub mod grammar;
pub mod graph;
pub mod morphism;
pub mod pda;
pub mod quotient;
pub mod text;
pub mod transducer;
pub mod word;

pub use alphabet::{InvolutiveAlphabet, Letter};
pub use analysis::{
    cone_separation_check, end_cone_census, end_isomorphic, polygon_thin_check,
    verify_strong_tree_decomposition, verify_tree_decomposition, CensusRow, CensusTable,
    ConeType, EndIsoResult, LabelMode, SeparationCheck, StrongDecReport, StrongTreePartition,
    TreeDecReport, TreeDecomposition,
};
pub use cones::EndCone;
pub use error::{Error, Result};
pub use families::{make, FamilyOutput, FamilySpec};
pub use grammar::{triangulate_circuit, CnfGrammar, ParseTree, TriangulationEdge, Variable};
pub use graph::{
    validate, GraphBuilder, InverseGraph, RootedGraph, TraceOutcome, ValidationReport, VertexId,
    Violation, Walk,
};
pub use morphism::{
    are_isomorphic, core_of, find_morphism, folded_accepts, is_cover, lift_walk, spanning_basis,
    stallings_fold, CoverCheck, GraphMorphism,
};
pub use pda::{
    derivable, dyck_checker_pda, run_pda, validate_inverse_pda, Acceptance, Config, InversePda,
    Pda, PdaOutcome, StackSym, StateId,
};
pub use quotient::{
    automorphisms, dv_quotient, is_quasi_transitive, orbit_of_vertex, orbit_partition, DvQuotient,
    OrbitLabeling,
};
pub use transducer::{
    build_group_transducer, product, transduce, wp_member, GroupAssembly, InverseTransducer,
    Projection,
};
pub use word::{free_reduce, Word};
