//! Graph-based batch and PIR codes.
//!
//! A batch code lets any `t` information symbols (with repetition) be read
//! in parallel from pairwise disjoint sets of codeword symbols; a PIR code
//! asks the same for `t` copies of a single symbol. An *asynchronous* batch
//! code additionally lets any completed request be replaced by any new one
//! using only servers the still-running requests do not touch.
//!
//! This crate provides:
//!
//! - exhaustive, budgeted verifiers for the batch, PIR and asynchronous
//!   properties of binary linear codes ([`verify`]);
//! - the bipartite-graph and hypergraph machinery behind the graph-based
//!   constructions: girth, Berge girth, the incidence correspondence,
//!   cycle-structure classification and short-cycle re-wiring
//!   ([`graphs`], [`hypergraphs`]);
//! - code constructions: the redundancy-optimal t = 3 grid family,
//!   PIR codes from packing designs, and batch codes from grid-line
//!   hypergraphs with progression-free slope sets ([`constructions`]);
//! - exact small-instance extremal search for the maximum number of
//!   hyperedges under a Berge-girth or sparsity constraint ([`extremal`]);
//! - a deterministic discrete-event simulator of asynchronous retrieval
//!   from a coded server farm, with an independent trace auditor ([`sim`]);
//! - text/JSON readers and writers for every object above ([`formats`]).
//!
//! The `batchcodes` binary exposes all of it as a small CLI; the
//! `examples/` directory shows one runnable walk-through per capability.

pub mod audit;
pub mod code;
pub mod constructions;
pub mod error;
pub mod extremal;
pub mod formats;
pub mod gf2;
pub mod graphs;
pub mod hypergraphs;
pub mod sim;
pub mod verify;

pub use code::GeneratorMatrix;
pub use error::{Error, Result};
pub use gf2::BitVec;
pub use graphs::{BipartiteGraph, Graph};
pub use hypergraphs::Hypergraph;
pub use verify::{AsyncMode, Query, SearchLimits};
