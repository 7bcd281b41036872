//! Exact-arithmetic engine for Kontsevich graph complexes.
//!
//! The crate is organized around the objects it computes with:
//!
//! * [`exactalg`] — exact fields (`Q`, `F_p`) and sparse rank/cohomology.
//! * [`graphcore`] — oriented multigraphs, canonical forms with signs,
//!   isomorphism-free enumeration.
//! * [`gc`] — the graph complexes `GC_n^2` and `GC_n` as dg Lie algebras.
//! * [`graphsop`] — the dg Hopf cooperads `Graphs_n^2`/`Graphs_n`, their
//!   map to `e_n = H^*(D_n)`, truncations, and the graph-complex action.
//! * [`hairy`] — the hairy complex `HGC` with the hair-attachment
//!   differential and the one-hair map.
//! * [`linfty`] — filtered L-infinity evaluation, Maurer-Cartan checks,
//!   twisting, BCH and polynomial forms on simplices.

pub mod exactalg;
pub mod gc;
pub mod graphcore;
pub mod graphsop;
pub mod hairy;


