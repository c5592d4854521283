//! Discrete-time coined quantum walks.
//!
//! A walk lives on `H_coin ⊗ H_position`. Amplitudes are stored coin-major:
//! the amplitude of coin basis state `c` at position `x` sits at index
//! `c * position_dim + x`. One step is `U = S · (C ⊗ I)`: the coin acts on
//! every position independently, then the shift moves each coin component
//! along its own permutation of positions.

mod coin;
pub mod dense;
mod evolution;
mod shift;
mod state;
mod walk;

pub use coin::{embed_dft3_gate, make_dft_coin, make_hadamard_coin, CoinOperator};
pub use dense::DenseMatrix;
pub use evolution::{
    coin_distribution, evolution_operator, position_distribution, step, Evolution,
};
pub use shift::{
    make_cycle_shift, make_hypercube_shift, make_torus_shift_2d, CycleShift, Permutation,
    ShiftOperator, MAX_CYCLE_QUBITS, MAX_HYPERCUBE_DIM,
};
pub use state::AmplitudeVector;
pub use walk::{
    classical_spread_variance, loglog_slope, spread_variance, symmetric_coin, Direction, Geometry,
    WalkSpec,
};
