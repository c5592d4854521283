use rand::seq::index;
use rand::Rng;

use super::movement::{walker_move, MoveContext, Walker};
use super::{EpidemicConfig, RealizationStats, SiteState};
use crate::rng::{self, tag};
use crate::{Error, Result};

/// A successful infection, recorded when it happens.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InfectionEvent {
    /// Tick on which the infection happened (first tick is 1).
    pub step: u64,
    pub infector: u64,
    pub site: (usize, usize),
    /// Generation of the walker launched by this infection.
    pub generation: u32,
}

/// Complete state of one realization.
#[derive(Debug, Clone)]
pub struct LatticeState {
    config: EpidemicConfig,
    ctx: MoveContext,
    sites: Vec<SiteState>,
    visited: Vec<bool>,
    visited_count: u64,
    walkers: Vec<Walker>,
    step_count: u64,
    infection_log: Vec<InfectionEvent>,
    next_id: u64,
    peak_active: u64,
}

/// Places `N − 1` susceptible agents uniformly without replacement on sites
/// other than the initial site, marks the initial site removed and launches
/// the index walker there.
pub fn init_lattice<R: Rng + ?Sized>(config: &EpidemicConfig, rng: &mut R) -> Result<LatticeState> {
    config.validate()?;
    let ctx = MoveContext::new(config)?;
    let l = config.extent;
    let n_sites = config.sites();
    let origin = config.initial_site.0 + l * config.initial_site.1;
    let mut sites = vec![SiteState::Empty; n_sites];
    for k in index::sample(rng, n_sites - 1, config.agents - 1) {
        // skip over the origin
        let s = if k >= origin { k + 1 } else { k };
        sites[s] = SiteState::Susceptible;
    }
    sites[origin] = SiteState::Removed;
    let mut visited = vec![false; n_sites];
    visited[origin] = true;
    let index_walker = Walker::spawn(config, &ctx, 0, None, config.initial_site);
    Ok(LatticeState {
        config: config.clone(),
        ctx,
        sites,
        visited,
        visited_count: 1,
        walkers: vec![index_walker],
        step_count: 0,
        infection_log: Vec::new(),
        next_id: 1,
        peak_active: 1,
    })
}

impl LatticeState {
    /// Initializes from the config's own placement substream.
    pub fn new(config: &EpidemicConfig) -> Result<Self> {
        let mut rng = rng::stream(config.seed, &[config.run_index, tag::PLACEMENT]);
        init_lattice(config, &mut rng)
    }

    pub fn config(&self) -> &EpidemicConfig {
        &self.config
    }

    pub fn extent(&self) -> usize {
        self.config.extent
    }

    #[inline]
    fn idx(&self, (x, y): (usize, usize)) -> usize {
        x + self.config.extent * y
    }

    pub fn site(&self, pos: (usize, usize)) -> SiteState {
        self.sites[self.idx(pos)]
    }

    pub fn is_visited(&self, pos: (usize, usize)) -> bool {
        self.visited[self.idx(pos)]
    }

    pub fn visited_count(&self) -> u64 {
        self.visited_count
    }

    pub fn walkers(&self) -> &[Walker] {
        &self.walkers
    }

    pub fn step_count(&self) -> u64 {
        self.step_count
    }

    pub fn infection_log(&self) -> &[InfectionEvent] {
        &self.infection_log
    }

    pub fn is_extinct(&self) -> bool {
        self.walkers.is_empty()
    }

    /// `(empty, susceptible, removed)`
    pub fn site_counts(&self) -> (usize, usize, usize) {
        self.sites.iter().fold((0, 0, 0), |(e, s, r), st| match st {
            SiteState::Empty => (e + 1, s, r),
            SiteState::Susceptible => (e, s + 1, r),
            SiteState::Removed => (e, s, r + 1),
        })
    }

    /// Each active walker, in ascending id order, tries to infect the site it
    /// stands on. Launched walkers are queued and returned; they are not
    /// added to the active list.
    fn infection_sweep(&mut self) -> Vec<Walker> {
        let p = self.config.p;
        let step = self.step_count + 1;
        let mut spawned = Vec::new();
        for i in 0..self.walkers.len() {
            let pos = self.walkers[i].position;
            let s = self.idx(pos);
            if self.sites[s] != SiteState::Susceptible || !self.walkers[i].bernoulli(p) {
                continue;
            }
            self.sites[s] = SiteState::Removed;
            let (infector, generation) = (self.walkers[i].id, self.walkers[i].generation);
            let child = Walker::spawn(
                &self.config,
                &self.ctx,
                self.next_id,
                Some((infector, generation)),
                pos,
            );
            self.next_id += 1;
            self.infection_log.push(InfectionEvent {
                step,
                infector,
                site: pos,
                generation: child.generation,
            });
            spawned.push(child);
        }
        spawned
    }

    /// Advances one global step: move, mark visited, infect, retire expired
    /// walkers, then activate the newly launched ones.
    pub fn tick(&mut self) -> Result<()> {
        if self.walkers.is_empty() {
            return Err(Error::Extinct);
        }
        let cap = self.config.step_cap();
        if self.step_count >= cap {
            return Err(Error::NonTermination(cap));
        }
        for w in &mut self.walkers {
            walker_move(w, &self.ctx)?;
        }
        for i in 0..self.walkers.len() {
            let s = self.idx(self.walkers[i].position);
            if !self.visited[s] {
                self.visited[s] = true;
                self.visited_count += 1;
            }
        }
        let spawned = self.infection_sweep();
        self.walkers.retain(Walker::is_active);
        self.walkers.extend(spawned);
        self.step_count += 1;
        self.peak_active = self.peak_active.max(self.walkers.len() as u64);
        Ok(())
    }

    pub fn stats(&self) -> RealizationStats {
        RealizationStats {
            first_generation_infections: self
                .infection_log
                .iter()
                .filter(|e| e.infector == 0)
                .count() as u64,
            total_infections: self.infection_log.len() as u64,
            cluster_size_m: self.visited_count,
            steps_to_extinction: self.step_count,
            peak_active_walkers: self.peak_active,
        }
    }
}

/// Runs one realization to extinction.
pub fn run_realization(config: &EpidemicConfig) -> Result<RealizationStats> {
    run_realization_with(config, |_| {})
}

/// As [`run_realization`], calling `observe` on the initial state and after
/// every tick.
pub fn run_realization_with(
    config: &EpidemicConfig,
    mut observe: impl FnMut(&LatticeState),
) -> Result<RealizationStats> {
    let mut lattice = LatticeState::new(config)?;
    observe(&lattice);
    while !lattice.is_extinct() {
        lattice.tick()?;
        observe(&lattice);
    }
    Ok(lattice.stats())
}
