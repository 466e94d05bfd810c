//! Character-decomposition analysis, simulation and optimization of quantum circuits.
//!
//! Circuits over a fixed gate set generate finite matrix groups; this crate
//! closes those groups, computes their character tables, decomposes group
//! algebra elements into isotypic components, simulates circuits (dense state
//! vector and stabilizer tableau) and rewrites circuit segments into shortest
//! equivalent gate words.
//!
//! All numeric code is generic over [`Real`] (`f32` or `f64`); the aliases at
//! the crate root fix the double-precision instantiation used by the CLI.

pub mod algebra;
pub mod circuit;
pub mod claims;
pub mod complexity;
pub mod fixtures;
pub mod gates;
pub mod group;
pub mod linalg;
pub mod optimizer;
pub mod repr;
pub mod scalar;
pub mod sim;

pub use scalar::Real;

pub type UnitaryMatrixF64 = linalg::UnitaryMatrix<f64>;
pub type UnitaryMatrixF32 = linalg::UnitaryMatrix<f32>;
pub type MatrixF64 = linalg::CMatrix<f64>;
pub type GroupF64 = group::FiniteMatrixGroup<f64>;
pub type GroupF32 = group::FiniteMatrixGroup<f32>;
pub type CharacterTableF64 = repr::CharacterTable<f64>;
pub type CharacterTableF32 = repr::CharacterTable<f32>;
pub type StateVectorF64 = sim::StateVector<f64>;
pub type ObservableF64 = sim::Observable<f64>;
pub type GroupArtifactsF64 = sim::GroupArtifacts<f64>;
