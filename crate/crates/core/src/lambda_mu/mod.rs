//! Lengths of `M / T^N` for finitely generated modules over
//! `R[[T]]`, `R = F_q[[π]]`.

pub mod elementary;
pub mod presentation;
pub mod series;
pub mod verify;

pub use elementary::{elementary_invariants, elementary_lengths, ElementaryInvariants, ElementaryModule};
pub use presentation::{presentation_lengths, Lengths, MatrixSpec, PresentationMatrix};
pub use series::{finite_part_length, gamma_iso_check, length_quotient, Length, SeriesT};
pub use verify::{battery, verify_alg_t, AlgTReport, BatteryModule, Expected, SequenceFit};
