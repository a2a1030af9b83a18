//! Builders for every matrix family: generalized Fourier, associated
//! `Γ(Δ, P)`, Vandermonde, (perturbed) DFT, and the two instability
//! constructions.

mod build;
mod dense;
mod io;
mod sets;

pub use build::{
    build_dft, build_fourier, build_figure1, build_gamma, build_instability_submatrix,
    build_perturbed_dft_freq, build_vandermonde, figure1_perturbation, select_columns,
    Vandermonde,
};
pub use dense::ComplexDense;
pub use io::fmt_f17;
pub use sets::{
    rect_lattice, FrequencySet, NodeSet, PerturbationMap, PerturbationMode, PerturbationTable,
};
