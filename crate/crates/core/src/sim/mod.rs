//! Circuit simulators: dense state vector, stabilizer tableau, and the
//! isotypic-decomposition expectation path.

mod decomp;
mod histogram;
mod observable;
mod statevector;
mod tableau;

use thiserror::Error;

pub use decomp::{
    closed_form_expectation, closed_form_for_element, decomp_expectation, element_expectation, ClosedFormComparison,
    GroupArtifacts,
};
pub use histogram::{bitstring, MeasurementHistogram};
pub use observable::{Observable, Pauli, PauliString};
pub use statevector::{sv_expectation, sv_run, sv_run_with_rng, StateVector, MAX_SV_QUBITS};
pub use tableau::{tableau_run, StabilizerTableau};

use crate::circuit::CircuitError;
use crate::group::GroupError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("circuit has {n_qubits} qubits; at most {max} are supported by this simulator")]
    TooWide { n_qubits: usize, max: usize },
    #[error("observable is not Hermitian (residual {residual:e})")]
    NotHermitian { residual: f64 },
    #[error("observable acts on {found} qubits, circuit has {expected}")]
    ObservableWidth { expected: usize, found: usize },
    #[error("gate {position} (`{gate}`) is not in the Clifford subset")]
    NonCliffordGate { gate: String, position: usize },
    #[error("circuit unitary is not an element of the supplied group")]
    ElementNotInGroup,
    #[error("expectation value has imaginary part {im:e}")]
    ComplexExpectation { im: f64 },
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Group(#[from] GroupError),
}
