use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;

use super::coin::CoinOperator;
use super::evolution::{evolution_operator, position_distribution, Evolution};
use super::shift::{make_hypercube_shift, make_torus_shift_2d, CycleShift, ShiftOperator};
use super::state::AmplitudeVector;
use crate::rng::{self, tag};
use crate::tol;
use crate::{Error, Result};

/// Lattice direction selected by a two-qubit coin basis state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    MinusX = 0,
    MinusY = 1,
    PlusX = 2,
    PlusY = 3,
}

impl Direction {
    /// In coin-basis order `|00⟩, |01⟩, |10⟩, |11⟩`.
    pub const ALL: [Direction; 4] = [
        Direction::MinusX,
        Direction::MinusY,
        Direction::PlusX,
        Direction::PlusY,
    ];

    pub fn from_coin_index(i: usize) -> Option<Self> {
        Self::ALL.get(i).copied()
    }

    pub fn delta(self) -> (isize, isize) {
        match self {
            Direction::MinusX => (-1, 0),
            Direction::MinusY => (0, -1),
            Direction::PlusX => (1, 0),
            Direction::PlusY => (0, 1),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Geometry {
    /// `sites` vertices on a ring, position index = vertex label.
    Cycle { sites: usize },
    /// Finite window of ℤ; index `i` is coordinate `i - extent / 2`.
    Line { extent: usize },
    /// Periodic `lx × ly` lattice, index `x + lx * y`.
    Torus2d { lx: usize, ly: usize },
    /// `d`-cube, index = vertex bit string read most significant bit first.
    Hypercube { dim: usize },
}

impl Geometry {
    pub fn position_dim(&self) -> usize {
        match *self {
            Geometry::Cycle { sites } => sites,
            Geometry::Line { extent } => extent,
            Geometry::Torus2d { lx, ly } => lx * ly,
            Geometry::Hypercube { dim } => 1usize.checked_shl(dim as u32).unwrap_or(0),
        }
    }

    /// Coordinate written to distribution dumps.
    pub fn label(&self, index: usize) -> i64 {
        match *self {
            Geometry::Line { extent } => index as i64 - (extent / 2) as i64,
            _ => index as i64,
        }
    }

    /// Index of the natural starting point (`0`, or the centre of a line).
    pub fn origin(&self) -> usize {
        match *self {
            Geometry::Line { extent } => extent / 2,
            _ => 0,
        }
    }

    /// Shift for this geometry with a coin register of `coin_dim` states.
    pub fn shift(&self, coin_dim: usize) -> Result<ShiftOperator> {
        match *self {
            Geometry::Cycle { sites } | Geometry::Line { extent: sites } => {
                if coin_dim != 2 {
                    return Err(Error::IncompatibleOperator(format!(
                        "1D walks need a 2-state coin, got {coin_dim}"
                    )));
                }
                Ok(CycleShift::with_sites(sites)?.shift)
            }
            Geometry::Torus2d { lx, ly } => {
                if coin_dim != 4 {
                    return Err(Error::IncompatibleOperator(format!(
                        "2D walks need a 4-state coin, got {coin_dim}"
                    )));
                }
                make_torus_shift_2d(lx, ly)
            }
            Geometry::Hypercube { dim } => make_hypercube_shift(dim, coin_dim),
        }
    }
}

/// `(|↑⟩ + i|↓⟩)/√2`, the initial coin that makes the 1D Hadamard walk
/// spread symmetrically.
pub fn symmetric_coin() -> [Complex64; 2] {
    [
        Complex64::new(FRAC_1_SQRT_2, 0.0),
        Complex64::new(0.0, FRAC_1_SQRT_2),
    ]
}

/// A fully specified walk: where, with which coin, from which state.
#[derive(Debug, Clone)]
pub struct WalkSpec {
    geometry: Geometry,
    evolution: Evolution,
    initial_position: usize,
    initial_coin: Vec<Complex64>,
}

impl WalkSpec {
    pub fn new(
        geometry: Geometry,
        coin: CoinOperator,
        initial_position: usize,
        initial_coin: Vec<Complex64>,
    ) -> Result<Self> {
        let n: f64 = initial_coin.iter().map(|a| a.norm_sqr()).sum();
        if (n - 1.0).abs() > tol::ALGEBRAIC {
            return Err(Error::InvalidState(format!(
                "initial coin squared norm {n}"
            )));
        }
        if initial_coin.len() != coin.dim() {
            return Err(Error::IncompatibleOperator(format!(
                "initial coin has {} entries, coin operator acts on {}",
                initial_coin.len(),
                coin.dim()
            )));
        }
        let shift = geometry.shift(coin.dim())?;
        if initial_position >= shift.position_dim() {
            return Err(Error::InvalidDimension(format!(
                "initial position {initial_position} outside 0..{}",
                shift.position_dim()
            )));
        }
        let evolution = evolution_operator(coin, shift)?;
        Ok(Self {
            geometry,
            evolution,
            initial_position,
            initial_coin,
        })
    }

    pub fn geometry(&self) -> Geometry {
        self.geometry
    }

    pub fn evolution(&self) -> &Evolution {
        &self.evolution
    }

    pub fn initial_position(&self) -> usize {
        self.initial_position
    }

    pub fn initial_state(&self) -> AmplitudeVector {
        AmplitudeVector::product(
            &self.initial_coin,
            self.evolution.position_dim(),
            self.initial_position,
        )
        .expect("validated in WalkSpec::new")
    }

    /// Position distributions for `t = 0..=steps`.
    pub fn distributions(&self, steps: usize) -> Result<Vec<Vec<f64>>> {
        let mut psi = self.initial_state();
        let mut out = Vec::with_capacity(steps + 1);
        out.push(position_distribution(&psi));
        for _ in 0..steps {
            psi = self.evolution.apply(&psi)?;
            out.push(position_distribution(&psi));
        }
        Ok(out)
    }
}

/// `σ²(t)` of the exact quantum walk on a line, for `t = 0..=t_max`.
///
/// Displacements are measured from the initial position. The line must be
/// wide enough that no amplitude reaches the seam of the underlying ring.
pub fn spread_variance(spec: &WalkSpec, t_max: usize) -> Result<Vec<(usize, f64)>> {
    let Geometry::Line { extent } = spec.geometry() else {
        return Err(Error::InvalidConfig(
            "spread variance needs line geometry".into(),
        ));
    };
    if t_max < 10 {
        return Err(Error::InvalidConfig(format!(
            "t_max must be at least 10, got {t_max}"
        )));
    }
    let start = spec.initial_position();
    if extent <= 2 * t_max || start < t_max || start + t_max >= extent {
        return Err(Error::WrapAround(format!(
            "line of extent {extent} starting at {start} cannot hold {t_max} steps"
        )));
    }
    let dists = spec.distributions(t_max)?;
    Ok(dists
        .iter()
        .enumerate()
        .map(|(t, p)| {
            let (mut m1, mut m2) = (0.0, 0.0);
            for (i, &w) in p.iter().enumerate() {
                let x = i as f64 - start as f64;
                m1 += w * x;
                m2 += w * x * x;
            }
            (t, m2 - m1 * m1)
        })
        .collect())
}

/// `σ²(t)` of `walkers` independent classical ±1 walkers, for
/// `t = 0..=t_max`. Deterministic in `seed` regardless of thread count.
pub fn classical_spread_variance(walkers: usize, t_max: usize, seed: u64) -> Vec<(usize, f64)> {
    const BATCH: usize = 1024;
    let batches = walkers.div_ceil(BATCH);
    // integer moments add exactly, so the reduction order does not matter
    let (s1, s2) = (0..batches)
        .into_par_iter()
        .map(|b| {
            let mut rng = rng::stream(seed, &[tag::CLASSICAL_WALK, b as u64]);
            let n = BATCH.min(walkers - b * BATCH);
            let mut s1 = vec![0i64; t_max + 1];
            let mut s2 = vec![0i64; t_max + 1];
            for _ in 0..n {
                let mut x = 0i64;
                for t in 1..=t_max {
                    x += if rng.random::<bool>() { 1 } else { -1 };
                    s1[t] += x;
                    s2[t] += x * x;
                }
            }
            (s1, s2)
        })
        .reduce(
            || (vec![0i64; t_max + 1], vec![0i64; t_max + 1]),
            |(mut a1, mut a2), (b1, b2)| {
                for t in 0..=t_max {
                    a1[t] += b1[t];
                    a2[t] += b2[t];
                }
                (a1, a2)
            },
        );
    let n = walkers as f64;
    (0..=t_max)
        .map(|t| {
            let mean = s1[t] as f64 / n;
            (t, s2[t] as f64 / n - mean * mean)
        })
        .collect()
}

/// Least-squares slope of `ln σ²` against `ln t` over `t ∈ [t_lo, t_hi]`.
pub fn loglog_slope(series: &[(usize, f64)], t_lo: usize, t_hi: usize) -> f64 {
    let pts: Vec<(f64, f64)> = series
        .iter()
        .filter(|&&(t, v)| t >= t_lo && t <= t_hi && t > 0 && v > 0.0)
        .map(|&(t, v)| ((t as f64).ln(), v.ln()))
        .collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}
