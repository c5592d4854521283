//! Lattice SIR epidemic driven by walkers.
//!
//! Each infected agent launches a walker that lives for `tau` ticks. On every
//! tick all walkers move once, then each one tries to infect the site it
//! landed on with probability `p`. A successful infection marks the site
//! removed and launches a new walker there, which first moves on the next
//! tick. A realization ends when no walkers remain.

mod engine;
mod movement;
mod render;

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::tol;
use crate::{Error, Result};

pub use engine::{
    init_lattice, run_realization, run_realization_with, InfectionEvent, LatticeState,
};
pub use movement::{walker_move, MoveContext, Walker, MOORE_DELTAS};
pub use render::{render_snapshot, Rgb, RgbImage, ACTIVE, EMPTY, REMOVED, SUSCEPTIBLE, VISITED};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SiteState {
    Empty,
    Susceptible,
    Removed,
}

/// How a walker picks its next site.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Policy {
    /// Uniform over the four lattice neighbours.
    Classical,
    /// Uniform over the eight neighbours including diagonals.
    ClassicalMoore,
    /// `H⊗H` on a persistent coin; the direction is drawn from the coin's
    /// Born distribution and the coin is left un-collapsed.
    QuantumHistogram,
    /// As `QuantumHistogram`, but the coin is projected onto the drawn
    /// direction.
    QuantumCollapse,
    /// Full coin ⊗ position amplitudes evolve under `S(H⊗H ⊗ I)`; the site used
    /// for infection is drawn from the position marginal each tick.
    QuantumStatevector,
}

impl Policy {
    pub const ALL: [Policy; 5] = [
        Policy::Classical,
        Policy::ClassicalMoore,
        Policy::QuantumHistogram,
        Policy::QuantumCollapse,
        Policy::QuantumStatevector,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Policy::Classical => "classical",
            Policy::ClassicalMoore => "classical-moore",
            Policy::QuantumHistogram => "quantum-histogram",
            Policy::QuantumCollapse => "quantum-collapse",
            Policy::QuantumStatevector => "quantum-statevector",
        }
    }

    pub fn is_quantum(self) -> bool {
        matches!(
            self,
            Policy::QuantumHistogram | Policy::QuantumCollapse | Policy::QuantumStatevector
        )
    }
}

impl fmt::Display for Policy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Policy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Policy::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown policy `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Boundary {
    Torus,
    /// A move that would leave the lattice bounces back off the wall.
    Reflect,
}

impl fmt::Display for Boundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Boundary::Torus => "torus",
            Boundary::Reflect => "reflect",
        })
    }
}

impl FromStr for Boundary {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "torus" => Ok(Boundary::Torus),
            "reflect" => Ok(Boundary::Reflect),
            _ => Err(Error::InvalidConfig(format!("unknown boundary `{s}`"))),
        }
    }
}

/// Whether directions are drawn from exact Born probabilities or from a
/// finite-shot measurement histogram.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ShotMode {
    Exact,
    Shots(u32),
}

impl fmt::Display for ShotMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ShotMode::Exact => f.write_str("exact"),
            ShotMode::Shots(n) => write!(f, "{n}"),
        }
    }
}

impl FromStr for ShotMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "exact" {
            return Ok(ShotMode::Exact);
        }
        match s.parse::<u32>() {
            Ok(n) if n > 0 => Ok(ShotMode::Shots(n)),
            _ => Err(Error::InvalidConfig(format!(
                "shots must be `exact` or a positive integer, got `{s}`"
            ))),
        }
    }
}

/// `|00⟩`
pub fn default_coin() -> [Complex64; 4] {
    let z = Complex64::new(0.0, 0.0);
    [Complex64::new(1.0, 0.0), z, z, z]
}

#[derive(Debug, Clone, PartialEq)]
pub struct EpidemicConfig {
    /// Lattice side `L`.
    pub extent: usize,
    /// Agents `N`, counting the index case.
    pub agents: usize,
    pub p: f64,
    pub tau: u32,
    pub policy: Policy,
    pub boundary: Boundary,
    pub shots: ShotMode,
    pub initial_site: (usize, usize),
    /// Coin given to every new walker (quantum policies only).
    pub initial_coin: [Complex64; 4],
    pub seed: u64,
    /// Selects the realization's substreams under `seed`.
    pub run_index: u64,
    /// Tick cap; `None` means `(agents + 1) * tau`.
    pub max_steps: Option<u64>,
}

impl EpidemicConfig {
    pub fn new(extent: usize, agents: usize, p: f64, tau: u32, policy: Policy) -> Self {
        Self {
            extent,
            agents,
            p,
            tau,
            policy,
            boundary: Boundary::Torus,
            shots: ShotMode::Exact,
            initial_site: (0, 0),
            initial_coin: default_coin(),
            seed: 0,
            run_index: 0,
            max_steps: None,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn sites(&self) -> usize {
        self.extent * self.extent
    }

    pub fn step_cap(&self) -> u64 {
        self.max_steps
            .unwrap_or((self.agents as u64 + 1) * self.tau as u64)
    }

    pub fn validate(&self) -> Result<()> {
        if self.extent < 2 {
            return Err(Error::InvalidConfig(format!(
                "lattice extent must be >= 2, got {}",
                self.extent
            )));
        }
        if self.agents == 0 {
            return Err(Error::InvalidConfig("need at least the index case".into()));
        }
        if self.agents > self.sites() {
            return Err(Error::OverfullLattice {
                agents: self.agents,
                sites: self.sites(),
            });
        }
        if !(0.0..=1.0).contains(&self.p) {
            return Err(Error::InvalidConfig(format!(
                "p must lie in [0, 1], got {}",
                self.p
            )));
        }
        if self.tau == 0 {
            return Err(Error::InvalidConfig("tau must be >= 1".into()));
        }
        let (x, y) = self.initial_site;
        if x >= self.extent || y >= self.extent {
            return Err(Error::InvalidConfig(format!(
                "initial site ({x}, {y}) outside the lattice"
            )));
        }
        let n: f64 = self.initial_coin.iter().map(|a| a.norm_sqr()).sum();
        if (n - 1.0).abs() > tol::ACCUMULATED {
            return Err(Error::InvalidConfig(format!(
                "initial coin squared norm {n}"
            )));
        }
        if self.policy == Policy::QuantumStatevector && self.boundary != Boundary::Torus {
            return Err(Error::InvalidConfig(
                "quantum-statevector needs the torus boundary".into(),
            ));
        }
        if let ShotMode::Shots(0) = self.shots {
            return Err(Error::InvalidConfig("shot count must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct RealizationStats {
    pub first_generation_infections: u64,
    pub total_infections: u64,
    pub cluster_size_m: u64,
    pub steps_to_extinction: u64,
    pub peak_active_walkers: u64,
}
