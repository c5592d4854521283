use std::fmt::{self, Display};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_complex::Complex64;
use qwalk_epi::analysis::{cluster_growth, r0_sweep, summarize_comparison, R0Table};
use qwalk_epi::epidemic::{
    render_snapshot, Boundary, EpidemicConfig, LatticeState, Policy, ShotMode,
};
use qwalk_epi::qwalk::{
    embed_dft3_gate, make_dft_coin, make_hadamard_coin, symmetric_coin, CoinOperator, Geometry,
    WalkSpec,
};
use qwalk_epi::verify::{run_checks, VerifySubject};
use qwalk_epi::{io as csv_out, tol};

use crate::config::{List, Resolver};
use crate::error::CliError;
use crate::manifest::RunManifest;
use crate::{ClusterArgs, Common, R0Args, RunArgs, WalkArgs};

pub const DEFAULT_OUT: &str = "out";

/// Output directory plus the list of files written into it.
struct OutDir {
    dir: PathBuf,
    written: Vec<String>,
}

impl OutDir {
    fn create(dir: PathBuf) -> Result<Self, CliError> {
        std::fs::create_dir_all(&dir).map_err(|e| CliError::io(&dir, e))?;
        Ok(Self {
            dir,
            written: Vec::new(),
        })
    }

    fn write(&mut self, name: &str, bytes: &[u8]) -> Result<(), CliError> {
        let path = self.dir.join(name);
        std::fs::write(&path, bytes).map_err(|e| CliError::io(&path, e))?;
        self.written.push(name.to_string());
        Ok(())
    }

    fn write_csv(
        &mut self,
        name: &str,
        fill: impl FnOnce(&mut Vec<u8>) -> Result<(), qwalk_epi::io::CsvError>,
    ) -> Result<(), CliError> {
        let mut buf = Vec::new();
        fill(&mut buf).map_err(|e| CliError::csv(&self.dir.join(name), e))?;
        self.write(name, &buf)
    }

    fn finish(self, command: &str, resolver: &Resolver) -> Result<(), CliError> {
        let mut m = RunManifest::new(command, resolver.effective());
        m.outputs = self.written;
        m.write(&self.dir)
    }
}

fn parse_flag<T: FromStr>(key: &str, raw: &Option<String>) -> Result<Option<T>, CliError>
where
    T::Err: Display,
{
    raw.as_deref()
        .map(|s| {
            s.parse::<T>()
                .map_err(|e| CliError::Config(format!("--{key}: {e}")))
        })
        .transpose()
}

fn default_threads() -> usize {
    std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
}

fn thread_pool(r: &mut Resolver, common: &Common) -> Result<rayon::ThreadPool, CliError> {
    let threads = r.get("threads", common.threads, default_threads())?;
    if threads == 0 {
        return Err(CliError::Config("--threads must be at least 1".into()));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Config(format!("cannot start {threads} worker threads: {e}")))
}

fn out_dir(r: &mut Resolver, common: &Common) -> Result<PathBuf, CliError> {
    Ok(PathBuf::from(r.get(
        "out",
        common.out.clone(),
        DEFAULT_OUT.to_string(),
    )?))
}

// ---------------------------------------------------------------- walk

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeometryKind {
    Cycle,
    Line,
    Torus,
    Hypercube,
}

impl FromStr for GeometryKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "cycle" => Self::Cycle,
            "line" => Self::Line,
            "torus" => Self::Torus,
            "hypercube" => Self::Hypercube,
            _ => {
                return Err(format!(
                    "unknown geometry `{s}` (cycle|line|torus|hypercube)"
                ))
            }
        })
    }
}

impl Display for GeometryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Cycle => "cycle",
            Self::Line => "line",
            Self::Torus => "torus",
            Self::Hypercube => "hypercube",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoinKind {
    Hadamard,
    Hadamard2,
    Dft,
    Dft3Gate,
    Identity,
}

impl FromStr for CoinKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "hadamard" => Self::Hadamard,
            "hadamard2" => Self::Hadamard2,
            "dft" => Self::Dft,
            "dft3-gate" => Self::Dft3Gate,
            "identity" => Self::Identity,
            _ => {
                return Err(format!(
                    "unknown coin `{s}` (hadamard|hadamard2|dft|dft3-gate|identity)"
                ))
            }
        })
    }
}

impl Display for CoinKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Hadamard => "hadamard",
            Self::Hadamard2 => "hadamard2",
            Self::Dft => "dft",
            Self::Dft3Gate => "dft3-gate",
            Self::Identity => "identity",
        })
    }
}

/// Natural coin register size for a geometry.
fn coin_dim_for(g: Geometry) -> usize {
    match g {
        Geometry::Cycle { .. } | Geometry::Line { .. } => 2,
        Geometry::Torus2d { .. } => 4,
        Geometry::Hypercube { dim } => dim,
    }
}

fn build_coin(kind: CoinKind, g: Geometry) -> Result<CoinOperator, CliError> {
    Ok(match kind {
        CoinKind::Hadamard => make_hadamard_coin(1)?,
        CoinKind::Hadamard2 => make_hadamard_coin(2)?,
        CoinKind::Dft => make_dft_coin(coin_dim_for(g))?,
        CoinKind::Dft3Gate => embed_dft3_gate(),
        CoinKind::Identity => CoinOperator::identity(coin_dim_for(g))?,
    })
}

/// `up`, `down`, `zero`, `symmetric`, or a comma list of complex amplitudes
/// such as `0.6,0+0.8i`. Lists are renormalised if already unit within 1e-6.
pub fn parse_coin_state(s: &str, dim: usize) -> Result<Vec<Complex64>, CliError> {
    let basis = |k: usize| -> Result<Vec<Complex64>, CliError> {
        if k >= dim {
            return Err(CliError::Config(format!(
                "coin state `{s}` needs a coin of dimension > {k}, have {dim}"
            )));
        }
        let mut v = vec![Complex64::new(0.0, 0.0); dim];
        v[k] = Complex64::new(1.0, 0.0);
        Ok(v)
    };
    match s {
        "up" | "zero" => basis(0),
        "down" => basis(1),
        "symmetric" => {
            if dim != 2 {
                return Err(CliError::Config(
                    "coin state `symmetric` needs a 2-state coin".into(),
                ));
            }
            Ok(symmetric_coin().to_vec())
        }
        _ => {
            let List(v): List<Complex64> = s
                .parse()
                .map_err(|e| CliError::Config(format!("coin state `{s}`: {e}")))?;
            if v.len() != dim {
                return Err(CliError::Config(format!(
                    "coin state has {} amplitudes, coin has {dim}",
                    v.len()
                )));
            }
            let n: f64 = v.iter().map(|a| a.norm_sqr()).sum();
            if (n - 1.0).abs() > tol::INPUT {
                return Err(CliError::Config(format!(
                    "coin state squared norm is {n}, expected 1"
                )));
            }
            Ok(v.into_iter().map(|a| a / n.sqrt()).collect())
        }
    }
}

pub fn walk(common: &Common, args: &WalkArgs, r: &mut Resolver) -> Result<(), CliError> {
    let out = out_dir(r, common)?;
    let kind = r.get("geometry", args.geometry, GeometryKind::Cycle)?;
    let steps = r.get("steps", args.steps, 10usize)?;
    let geometry = match kind {
        GeometryKind::Cycle => Geometry::Cycle {
            sites: r.get("sites", args.sites, 8usize)?,
        },
        GeometryKind::Line => Geometry::Line {
            extent: r.get("extent", args.extent, 2 * steps + 3)?,
        },
        GeometryKind::Torus => Geometry::Torus2d {
            lx: r.get("lx", args.lx, 8usize)?,
            ly: r.get("ly", args.ly, 8usize)?,
        },
        GeometryKind::Hypercube => Geometry::Hypercube {
            dim: r.get("dim", args.dim, 3usize)?,
        },
    };
    let default_coin = match kind {
        GeometryKind::Cycle | GeometryKind::Line => CoinKind::Hadamard,
        GeometryKind::Torus => CoinKind::Hadamard2,
        GeometryKind::Hypercube => CoinKind::Dft,
    };
    let coin = build_coin(r.get("coin", args.coin, default_coin)?, geometry)?;
    let default_state = if coin.dim() == 2 { "up" } else { "zero" };
    let state = r.get(
        "coin-state",
        args.coin_state.clone(),
        default_state.to_string(),
    )?;
    let coin_state = parse_coin_state(&state, coin.dim())?;
    let start_label = r.get("start", args.start, geometry.label(geometry.origin()))?;
    let start = (0..geometry.position_dim())
        .find(|&i| geometry.label(i) == start_label)
        .ok_or_else(|| {
            CliError::Config(format!("start position {start_label} is not on the {kind}"))
        })?;
    let only_last = r.get("only-last", args.only_last, false)?;

    let spec = WalkSpec::new(geometry, coin, start, coin_state)?;
    let dists = spec.distributions(steps)?;

    let mut dir = OutDir::create(out)?;
    dir.write_csv("distribution.csv", |buf| {
        csv_out::write_distributions(buf, geometry, &dists, only_last)
    })?;
    dir.finish("walk", r)
}

// ---------------------------------------------------------------- run

fn epidemic_base(
    r: &mut Resolver,
    common: &Common,
    extent: usize,
    agents: usize,
    p: f64,
    tau: u32,
    policy: Policy,
) -> Result<EpidemicConfig, CliError> {
    let mut cfg = EpidemicConfig::new(extent, agents, p, tau, policy);
    cfg.boundary = r.get("boundary", common.boundary, Boundary::Torus)?;
    cfg.shots = r.get("shots", common.shots, ShotMode::Exact)?;
    cfg.seed = r.get("seed", common.seed, 0u64)?;
    Ok(cfg)
}

pub fn run(common: &Common, args: &RunArgs, r: &mut Resolver) -> Result<(), CliError> {
    let out = out_dir(r, common)?;
    let policy = r.get(
        "policy",
        parse_flag("policy", &common.policy)?,
        Policy::QuantumHistogram,
    )?;
    let extent = r.get("extent", args.extent, 64usize)?;
    let agents = r.get("agents", args.agents, 4096usize)?;
    let p = r.get("p", args.p, 1.0f64)?;
    let tau = r.get("tau", args.tau, 2u32)?;
    let mut cfg = epidemic_base(r, common, extent, agents, p, tau, policy)?;
    cfg.max_steps = r.get_opt("max-steps", args.max_steps)?;
    let every = r.get("snapshot-every", args.snapshot_every, 0u64)?;
    cfg.validate()?;

    let mut dir = OutDir::create(out)?;
    let mut lattice = LatticeState::new(&cfg)?;
    let frame = |lattice: &LatticeState, dir: &mut OutDir| {
        let name = format!("frame_{:06}.ppm", lattice.step_count());
        dir.write(&name, &render_snapshot(lattice).to_ppm())
    };
    frame(&lattice, &mut dir)?;
    while !lattice.is_extinct() {
        lattice.tick()?;
        let step = lattice.step_count();
        if lattice.is_extinct() || (every > 0 && step % every == 0) {
            frame(&lattice, &mut dir)?;
        }
    }
    let stats = lattice.stats();
    dir.write_csv("stats.csv", |buf| csv_out::write_stats(buf, &cfg, &stats))?;
    dir.write_csv("infection_log.csv", |buf| {
        csv_out::write_infection_log(buf, lattice.infection_log())
    })?;
    dir.finish("run", r)
}

// ---------------------------------------------------------------- r0

pub const DEFAULT_P: [f64; 5] = [1.0, 0.5, 0.25, 0.125, 0.0625];
pub const DEFAULT_TAU: [u32; 3] = [1, 2, 3];

pub fn r0(common: &Common, args: &R0Args, r: &mut Resolver) -> Result<(), CliError> {
    let out = out_dir(r, common)?;
    let pool = thread_pool(r, common)?;
    let policies = r.get(
        "policy",
        parse_flag("policy", &common.policy)?,
        List(vec![Policy::QuantumHistogram, Policy::Classical]),
    )?;
    let ps = r.get("p", args.p.clone(), List(DEFAULT_P.to_vec()))?;
    let taus = r.get("tau", args.tau.clone(), List(DEFAULT_TAU.to_vec()))?;
    let runs = r.get("runs", args.runs, 2000usize)?;
    let extent = r.get("extent", args.extent, 64usize)?;
    let agents = r.get("agents", args.agents, 4096usize)?;
    let base = epidemic_base(r, common, extent, agents, ps.0[0], taus.0[0], policies.0[0])?;

    let tables = pool.install(|| {
        policies
            .0
            .iter()
            .map(|&policy| {
                r0_sweep(
                    &ps.0,
                    &taus.0,
                    &EpidemicConfig {
                        policy,
                        ..base.clone()
                    },
                    runs,
                )
            })
            .collect::<Result<Vec<R0Table>, _>>()
    })?;

    let mut rows = Vec::new();
    for q in tables
        .iter()
        .filter(|t| t.policy().is_some_and(Policy::is_quantum))
    {
        for c in tables
            .iter()
            .filter(|t| t.policy().is_some_and(|p| !p.is_quantum()))
        {
            rows.extend(summarize_comparison(q, c)?);
        }
    }

    let mut dir = OutDir::create(out)?;
    dir.write_csv("r0.csv", |buf| csv_out::write_r0_tables(buf, &tables))?;
    if !rows.is_empty() {
        dir.write_csv("comparison.csv", |buf| {
            csv_out::write_comparison(buf, &rows)
        })?;
    }
    dir.finish("r0", r)
}

// ---------------------------------------------------------------- cluster

pub const DEFAULT_CLUSTER_N: [usize; 5] = [32, 128, 256, 512, 1024];

pub fn cluster(common: &Common, args: &ClusterArgs, r: &mut Resolver) -> Result<(), CliError> {
    let out = out_dir(r, common)?;
    let pool = thread_pool(r, common)?;
    let policy = r.get(
        "policy",
        parse_flag("policy", &common.policy)?,
        Policy::QuantumHistogram,
    )?;
    let ns = r.get(
        "agents",
        args.agents.clone(),
        List(DEFAULT_CLUSTER_N.to_vec()),
    )?;
    let extent = r.get("extent", args.extent, 32usize)?;
    let p = r.get("p", args.p, 1.0f64)?;
    let tau = r.get("tau", args.tau, 3u32)?;
    let runs = r.get("runs", args.runs, 100usize)?;
    let base = epidemic_base(r, common, extent, ns.0[0], p, tau, policy)?;
    if let Some(&n) = ns.0.iter().find(|&&n| n > extent * extent) {
        return Err(CliError::Config(format!(
            "N = {n} exceeds the {extent}x{extent} lattice"
        )));
    }

    let points = pool.install(|| cluster_growth(&ns.0, &base, runs))?;

    let mut dir = OutDir::create(out)?;
    dir.write_csv("cluster.csv", |buf| {
        csv_out::write_cluster_curve(buf, &points)
    })?;
    dir.finish("cluster", r)
}

// ---------------------------------------------------------------- verify

pub fn verify(common: &Common, r: &mut Resolver) -> Result<(), CliError> {
    let out = r.get_opt("out", common.out.clone())?;
    let report = run_checks(&VerifySubject::build());
    print!("{report}");
    if let Some(out) = out {
        let mut dir = OutDir::create(Path::new(&out).to_path_buf())?;
        dir.write("verify.txt", report.to_string().as_bytes())?;
        dir.finish("verify", r)?;
    }
    if report.all_passed() {
        Ok(())
    } else {
        let names: Vec<&str> = report.failed().map(|c| c.name).collect();
        Err(CliError::Verify(names.join(", ")))
    }
}
