//! Full-degree homology and K-theory for the families where everything
//! reduces to finite matrices.

mod free_abelian;
mod graph;
mod katsura;
mod mod2;
mod multispinal;

use rayon::prelude::*;

pub use free_abelian::{
    free_abelian_engine, sausage_matrix, FreeAbelianInput, SelfReplicatingChecks,
};
pub use graph::{graph_engine, GraphInput};
pub use katsura::{katsura_engine, KatsuraInput};
pub use mod2::{
    companion_matrix, f2_matrix_order, grigorchuk_homology, klein_mod2, shuffle_limit,
    sunic_mod2_homology, F2Matrix2, GrigorchukDegree,
};
pub use multispinal::{
    cyclic_group_homology, multispinal_h_scaffold, multispinal_homology, multispinal_k_engine,
    multispinal_mod2_homology, sunic_orbit_count, MultispinalInput, PhiEntry, ScaffoldPieces,
};

/// Whether per-degree work runs on the rayon pool. Both settings give
/// identical results.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Evaluation {
    #[default]
    Sequential,
    Parallel,
}

/// Evaluate `f` on each degree in `0..=max`, collecting in degree order.
pub fn per_degree<T, F>(max: usize, mode: Evaluation, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    match mode {
        Evaluation::Sequential => (0..=max).map(f).collect(),
        Evaluation::Parallel => (0..=max).into_par_iter().map(f).collect(),
    }
}
