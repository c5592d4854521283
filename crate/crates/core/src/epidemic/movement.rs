use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;

use super::{Boundary, EpidemicConfig, Policy, ShotMode};
use crate::qwalk::{
    coin_distribution, evolution_operator, make_hadamard_coin, make_torus_shift_2d,
    position_distribution, AmplitudeVector, CoinOperator, Direction, Evolution,
};
use crate::rng::{self, tag, Stream};
use crate::sampling::{sample_index, shot_histogram};
use crate::{Error, Result};

/// The four axis moves followed by the four diagonals.
pub const MOORE_DELTAS: [(isize, isize); 8] = [
    (-1, 0),
    (0, -1),
    (1, 0),
    (0, 1),
    (-1, -1),
    (1, -1),
    (-1, 1),
    (1, 1),
];

/// Per-realization movement machinery shared by all walkers.
#[derive(Debug, Clone)]
pub struct MoveContext {
    pub extent: usize,
    pub boundary: Boundary,
    pub policy: Policy,
    pub shots: ShotMode,
    coin: CoinOperator,
    /// Torus window for statevector walkers. A walker of lifetime `tau` never
    /// spreads more than `tau` sites from its spawn point, so a window of
    /// `2 tau + 1` sites per axis evolves exactly like the full lattice.
    window: usize,
    window_evolution: Option<Arc<Evolution>>,
}

impl MoveContext {
    pub fn new(config: &EpidemicConfig) -> Result<Self> {
        let coin = make_hadamard_coin(2)?;
        let window = (2 * config.tau as usize + 1).min(config.extent);
        let window_evolution = if config.policy == Policy::QuantumStatevector {
            Some(Arc::new(evolution_operator(
                coin.clone(),
                make_torus_shift_2d(window, window)?,
            )?))
        } else {
            None
        };
        Ok(Self {
            extent: config.extent,
            boundary: config.boundary,
            policy: config.policy,
            shots: config.shots,
            coin,
            window,
            window_evolution,
        })
    }

    fn displace(&self, (x, y): (usize, usize), (dx, dy): (isize, isize)) -> (usize, usize) {
        let l = self.extent as isize;
        let wrap = |v: isize| match self.boundary {
            Boundary::Torus => v.rem_euclid(l),
            Boundary::Reflect => {
                if v < 0 {
                    -v
                } else if v >= l {
                    2 * (l - 1) - v
                } else {
                    v
                }
            }
        };
        (
            wrap(x as isize + dx) as usize,
            wrap(y as isize + dy) as usize,
        )
    }

    fn draw<R: Rng + ?Sized>(&self, dist: &[f64], rng: &mut R) -> Result<usize> {
        match self.shots {
            ShotMode::Exact => sample_index(dist, rng),
            ShotMode::Shots(s) => {
                let hist = shot_histogram(dist, s, rng)?;
                sample_index(&hist, rng)
            }
        }
    }
}

#[derive(Debug, Clone)]
enum Motion {
    Classical,
    Coin([Complex64; 4]),
    Statevector(LocalWave),
}

#[derive(Debug, Clone)]
struct LocalWave {
    state: AmplitudeVector,
    /// Lattice coordinate of window cell `(0, 0)`.
    anchor: (usize, usize),
}

/// An infectious agent moving across the lattice.
#[derive(Debug, Clone)]
pub struct Walker {
    pub id: u64,
    /// `None` for the index case.
    pub parent: Option<u64>,
    pub generation: u32,
    pub position: (usize, usize),
    pub age: u32,
    pub lifetime: u32,
    motion: Motion,
    rng: Stream,
}

impl Walker {
    pub(crate) fn spawn(
        config: &EpidemicConfig,
        ctx: &MoveContext,
        id: u64,
        parent: Option<(u64, u32)>,
        position: (usize, usize),
    ) -> Self {
        let motion = match config.policy {
            Policy::Classical | Policy::ClassicalMoore => Motion::Classical,
            Policy::QuantumHistogram | Policy::QuantumCollapse => Motion::Coin(config.initial_coin),
            Policy::QuantumStatevector => {
                let w = ctx.window;
                let centre = w / 2;
                let l = ctx.extent;
                let anchor = (
                    (position.0 + l - centre % l) % l,
                    (position.1 + l - centre % l) % l,
                );
                let state =
                    AmplitudeVector::product(&config.initial_coin, w * w, centre + w * centre)
                        .expect("initial coin validated with the config");
                Motion::Statevector(LocalWave { state, anchor })
            }
        };
        Self {
            id,
            parent: parent.map(|p| p.0),
            generation: parent.map_or(0, |p| p.1 + 1),
            position,
            age: 0,
            lifetime: config.tau,
            motion,
            rng: rng::stream(config.seed, &[config.run_index, tag::WALKER, id]),
        }
    }

    pub fn is_active(&self) -> bool {
        self.age < self.lifetime
    }

    /// The coin register of coin-carrying quantum policies.
    pub fn coin_state(&self) -> Option<[Complex64; 4]> {
        match &self.motion {
            Motion::Coin(c) => Some(*c),
            _ => None,
        }
    }

    /// Position marginal of a statevector walker over the whole lattice.
    pub fn position_marginal(&self, extent: usize) -> Option<Vec<f64>> {
        let Motion::Statevector(wave) = &self.motion else {
            return None;
        };
        let w = (wave.state.position_dim() as f64).sqrt().round() as usize;
        let mut out = vec![0.0; extent * extent];
        for (i, p) in position_distribution(&wave.state).into_iter().enumerate() {
            let gx = (wave.anchor.0 + i % w) % extent;
            let gy = (wave.anchor.1 + i / w) % extent;
            out[gx + extent * gy] += p;
        }
        Some(out)
    }

    /// One Bernoulli(p) draw from this walker's stream.
    pub(crate) fn bernoulli(&mut self, p: f64) -> bool {
        self.rng.random::<f64>() < p
    }
}

/// Moves `w` one tick under the context's policy and ages it.
pub fn walker_move(w: &mut Walker, ctx: &MoveContext) -> Result<()> {
    if !w.is_active() {
        return Err(Error::InactiveWalker(w.id));
    }
    match &mut w.motion {
        Motion::Classical => {
            let delta = match ctx.policy {
                Policy::ClassicalMoore => MOORE_DELTAS[w.rng.random_range(0..8)],
                _ => MOORE_DELTAS[w.rng.random_range(0..4)],
            };
            w.position = ctx.displace(w.position, delta);
        }
        Motion::Coin(coin) => {
            let mut next = [Complex64::new(0.0, 0.0); 4];
            ctx.coin.apply_into(coin, &mut next);
            let dist = coin_distribution(&next)?;
            let d = ctx.draw(&dist, &mut w.rng)?;
            if ctx.policy == Policy::QuantumCollapse {
                next = [Complex64::new(0.0, 0.0); 4];
                next[d] = Complex64::new(1.0, 0.0);
            }
            *coin = next;
            let dir = Direction::from_coin_index(d).expect("coin has four states");
            w.position = ctx.displace(w.position, dir.delta());
        }
        Motion::Statevector(wave) => {
            let u = ctx
                .window_evolution
                .as_ref()
                .expect("statevector context has an evolution");
            wave.state = u.apply(&wave.state)?;
            let marginal = position_distribution(&wave.state);
            let i = ctx.draw(&marginal, &mut w.rng)?;
            let win = ctx.window;
            w.position = (
                (wave.anchor.0 + i % win) % ctx.extent,
                (wave.anchor.1 + i / win) % ctx.extent,
            );
        }
    }
    w.age += 1;
    Ok(())
}
