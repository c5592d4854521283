use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const BIN: &str = env!("CARGO_BIN_EXE_qwalk-epi");

fn qwalk(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn ok(args: &[&str]) -> Output {
    let out = qwalk(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn read(p: PathBuf) -> String {
    fs::read_to_string(&p).unwrap_or_else(|e| panic!("{}: {e}", p.display()))
}

/// `(t, position, probability)` rows of a distribution dump.
fn distribution(dir: &Path) -> Vec<(usize, i64, f64)> {
    read(dir.join("distribution.csv"))
        .lines()
        .skip(1)
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (
                f[0].parse().unwrap(),
                f[1].parse().unwrap(),
                f[2].parse().unwrap(),
            )
        })
        .collect()
}

fn at_step(rows: &[(usize, i64, f64)], t: usize) -> Vec<f64> {
    rows.iter().filter(|r| r.0 == t).map(|r| r.2).collect()
}

#[test]
fn verify_passes_with_named_checks() {
    let out = ok(&["verify"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines.len() >= 5);
    assert!(lines.iter().all(|l| l.starts_with("PASS")), "{text}");
    assert!(text.contains("cycle8-inc-matrix"));
}

#[test]
fn verify_with_out_writes_report_and_manifest() {
    let tmp = TempDir::new().unwrap();
    ok(&["verify", "--out", s(tmp.path())]);
    assert!(read(tmp.path().join("verify.txt")).contains("PASS"));
    assert!(read(tmp.path().join("manifest.txt")).contains("output = verify.txt"));
}

#[test]
fn hypercube_first_iteration_is_one_third_on_each_neighbour() {
    let tmp = TempDir::new().unwrap();
    ok(&[
        "walk",
        "--geometry",
        "hypercube",
        "--coin",
        "dft",
        "--steps",
        "1",
        "--out",
        s(tmp.path()),
    ]);
    let p1 = at_step(&distribution(tmp.path()), 1);
    assert_eq!(p1.len(), 8);
    for (v, p) in p1.iter().enumerate() {
        let want = if [0b100, 0b010, 0b001].contains(&v) {
            1.0 / 3.0
        } else {
            0.0
        };
        assert!((p - want).abs() < 1e-12, "vertex {v:03b}: {p}");
    }
}

#[test]
fn hypercube_with_embedded_dft3_gate_matches_too() {
    let tmp = TempDir::new().unwrap();
    ok(&[
        "walk",
        "--geometry",
        "hypercube",
        "--coin",
        "dft3-gate",
        "--steps",
        "1",
        "--out",
        s(tmp.path()),
    ]);
    let p1 = at_step(&distribution(tmp.path()), 1);
    // The idle |11⟩ coin state never gets amplitude, so nothing stays put.
    assert!((p1[0b100] - 1.0 / 3.0).abs() < 1e-12);
    assert!((p1[0b010] - 1.0 / 3.0).abs() < 1e-12);
    assert!((p1[0b001] - 1.0 / 3.0).abs() < 1e-12);
    assert!(p1[0].abs() < 1e-12);
}

#[test]
fn cycle8_zero_iterations_keeps_all_mass_at_origin() {
    let tmp = TempDir::new().unwrap();
    ok(&[
        "walk",
        "--geometry",
        "cycle",
        "--sites",
        "8",
        "--steps",
        "0",
        "--out",
        s(tmp.path()),
    ]);
    let rows = distribution(tmp.path());
    assert_eq!(rows.len(), 8);
    assert_eq!(
        at_step(&rows, 0),
        vec![1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]
    );
}

/// Independent dense oracle: the 16×16 matrix `1/√2 [[INC, INC], [DEC, −DEC]]`
/// built entry by entry, applied five times to `|↑, 000⟩`.
#[test]
fn cycle8_five_iterations_match_dense_oracle() {
    let tmp = TempDir::new().unwrap();
    ok(&[
        "walk",
        "--geometry",
        "cycle",
        "--steps",
        "5",
        "--coin-state",
        "up",
        "--out",
        s(tmp.path()),
    ]);
    let rows = distribution(tmp.path());

    let r = std::f64::consts::FRAC_1_SQRT_2;
    let mut u = [[0.0f64; 16]; 16];
    for k in 0..8 {
        let up = (k + 1) % 8;
        let down = (k + 7) % 8;
        u[up][k] = r;
        u[up][8 + k] = r;
        u[8 + down][k] = r;
        u[8 + down][8 + k] = -r;
    }
    let mut psi = [0.0f64; 16];
    psi[0] = 1.0;
    for t in 0..=5 {
        let probs: Vec<f64> = (0..8)
            .map(|x| psi[x] * psi[x] + psi[8 + x] * psi[8 + x])
            .collect();
        let got = at_step(&rows, t);
        for x in 0..8 {
            assert!(
                (got[x] - probs[x]).abs() < 1e-12,
                "t={t} x={x}: {} vs {}",
                got[x],
                probs[x]
            );
        }
        let mut next = [0.0f64; 16];
        for (i, row) in u.iter().enumerate() {
            next[i] = row.iter().zip(&psi).map(|(a, b)| a * b).sum();
        }
        psi = next;
    }
}

#[test]
fn csv_headers_match_schemas() {
    let tmp = TempDir::new().unwrap();
    let d = |n: &str| tmp.path().join(n);
    ok(&["walk", "--steps", "1", "--out", s(&d("walk"))]);
    ok(&["run", "-L", "8", "-N", "10", "--out", s(&d("run"))]);
    ok(&[
        "r0",
        "-L",
        "8",
        "-N",
        "16",
        "--runs",
        "2",
        "--p",
        "1",
        "--tau",
        "1",
        "--out",
        s(&d("r0")),
    ]);
    ok(&[
        "cluster",
        "-L",
        "8",
        "-N",
        "4,8",
        "--runs",
        "2",
        "--out",
        s(&d("cluster")),
    ]);
    let first = |p: PathBuf| read(p).lines().next().unwrap().to_string();
    assert_eq!(first(d("walk/distribution.csv")), "t,position,probability");
    assert_eq!(
        first(d("run/stats.csv")),
        "policy,L,N,p,tau,seed,first_generation_infections,total_infections,cluster_size_M,steps_to_extinction,peak_active_walkers"
    );
    assert_eq!(
        first(d("run/infection_log.csv")),
        "step,infector_id,site_x,site_y,generation"
    );
    assert_eq!(
        first(d("r0/r0.csv")),
        "policy,p,tau,runs,seed,r0_mean,r0_stderr"
    );
    assert_eq!(
        first(d("r0/comparison.csv")),
        "policy_q,policy_c,p,tau,runs,r0_q,r0_q_stderr,r0_c,r0_c_stderr,ratio_q_over_c,naive_p_tau,converged"
    );
    assert_eq!(
        first(d("cluster/cluster.csv")),
        "policy,L,p,tau,N,runs,mean_M,stderr_M"
    );
}

#[test]
fn every_output_directory_has_exactly_one_manifest_listing_its_files() {
    let tmp = TempDir::new().unwrap();
    ok(&[
        "run",
        "-L",
        "8",
        "-N",
        "10",
        "--snapshot-every",
        "2",
        "--out",
        s(tmp.path()),
    ]);
    let manifest = read(tmp.path().join("manifest.txt"));
    let listed: Vec<&str> = manifest
        .lines()
        .filter_map(|l| l.strip_prefix("output = "))
        .collect();
    let mut on_disk: Vec<String> = fs::read_dir(tmp.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .filter(|n| n != "manifest.txt")
        .collect();
    on_disk.sort();
    let mut listed_sorted: Vec<String> = listed.iter().map(|s| s.to_string()).collect();
    listed_sorted.sort();
    assert_eq!(listed_sorted, on_disk);
    for key in [
        "command = run",
        "tool_version = ",
        "timestamp = ",
        "command_line = ",
        "seed = ",
        "policy = ",
    ] {
        assert!(manifest.contains(key), "missing `{key}`:\n{manifest}");
    }
}

fn small_r0(out: &Path, threads: &str) {
    ok(&[
        "r0",
        "-L",
        "16",
        "-N",
        "64",
        "--runs",
        "60",
        "--p",
        "1,0.5",
        "--tau",
        "1,2",
        "--seed",
        "11",
        "--policy",
        "quantum-histogram,quantum-collapse,classical",
        "--threads",
        threads,
        "--out",
        s(out),
    ]);
}

#[test]
fn r0_bytes_do_not_depend_on_thread_count() {
    let tmp = TempDir::new().unwrap();
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    small_r0(&a, "1");
    small_r0(&b, "8");
    for f in ["r0.csv", "comparison.csv"] {
        assert_eq!(
            fs::read(a.join(f)).unwrap(),
            fs::read(b.join(f)).unwrap(),
            "{f}"
        );
    }
}

#[test]
fn cluster_bytes_do_not_depend_on_thread_count() {
    let tmp = TempDir::new().unwrap();
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    for (dir, threads) in [(&a, "1"), (&b, "6")] {
        ok(&[
            "cluster",
            "-L",
            "12",
            "-N",
            "8,32,64",
            "--runs",
            "20",
            "--threads",
            threads,
            "--out",
            s(dir),
        ]);
    }
    assert_eq!(
        fs::read(a.join("cluster.csv")).unwrap(),
        fs::read(b.join("cluster.csv")).unwrap()
    );
}

#[test]
fn manifest_replays_byte_identical_csvs() {
    let tmp = TempDir::new().unwrap();
    let a = tmp.path().join("a");
    small_r0(&a, "3");
    let b = tmp.path().join("b");
    ok(&["r0", "--config", s(&a.join("manifest.txt")), "--out", s(&b)]);
    for f in ["r0.csv", "comparison.csv"] {
        assert_eq!(
            fs::read(a.join(f)).unwrap(),
            fs::read(b.join(f)).unwrap(),
            "{f}"
        );
    }

    let (c, d) = (tmp.path().join("c"), tmp.path().join("d"));
    ok(&[
        "run",
        "-L",
        "12",
        "-N",
        "40",
        "--p",
        "0.7",
        "--tau",
        "3",
        "--seed",
        "5",
        "--snapshot-every",
        "3",
        "--policy",
        "quantum-collapse",
        "--boundary",
        "reflect",
        "--out",
        s(&c),
    ]);
    ok(&[
        "run",
        "--config",
        s(&c.join("manifest.txt")),
        "--out",
        s(&d),
    ]);
    for f in ["stats.csv", "infection_log.csv", "frame_000000.ppm"] {
        assert_eq!(
            fs::read(c.join(f)).unwrap(),
            fs::read(d.join(f)).unwrap(),
            "{f}"
        );
    }

    let (e, f) = (tmp.path().join("e"), tmp.path().join("f"));
    ok(&[
        "walk",
        "--geometry",
        "line",
        "--coin-state",
        "symmetric",
        "--steps",
        "7",
        "--out",
        s(&e),
    ]);
    ok(&[
        "walk",
        "--config",
        s(&e.join("manifest.txt")),
        "--out",
        s(&f),
    ]);
    assert_eq!(
        fs::read(e.join("distribution.csv")).unwrap(),
        fs::read(f.join("distribution.csv")).unwrap()
    );
}

#[test]
fn flags_override_the_config_file() {
    let tmp = TempDir::new().unwrap();
    let cfg = tmp.path().join("cfg.txt");
    fs::write(&cfg, "# walk settings\ngeometry = line\nsteps = 4\n").unwrap();
    let out = tmp.path().join("o");
    ok(&[
        "walk",
        "--config",
        s(&cfg),
        "--steps",
        "2",
        "--out",
        s(&out),
    ]);
    let rows = distribution(&out);
    assert_eq!(rows.last().unwrap().0, 2);
    let manifest = read(out.join("manifest.txt"));
    assert!(manifest.contains("geometry = line"));
    assert!(manifest.contains("steps = 2"));
}

#[test]
fn r0_default_grid_has_three_tau_rows_by_five_p_columns() {
    let tmp = TempDir::new().unwrap();
    ok(&[
        "r0",
        "-L",
        "12",
        "-N",
        "40",
        "--runs",
        "3",
        "--out",
        s(tmp.path()),
    ]);
    let r0 = read(tmp.path().join("r0.csv"));
    let rows: Vec<Vec<&str>> = r0.lines().skip(1).map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 2 * 15);
    for policy in ["quantum-histogram", "classical"] {
        let cells: Vec<&Vec<&str>> = rows.iter().filter(|r| r[0] == policy).collect();
        assert_eq!(cells.len(), 15);
        let mut ps: Vec<&str> = cells.iter().map(|r| r[1]).collect();
        ps.sort();
        ps.dedup();
        let mut taus: Vec<&str> = cells.iter().map(|r| r[2]).collect();
        taus.sort();
        taus.dedup();
        assert_eq!((ps.len(), taus.len()), (5, 3));
    }
    assert_eq!(read(tmp.path().join("comparison.csv")).lines().count(), 16);
}

fn r0_cell(dir: &Path, policy: &str) -> (f64, f64) {
    let text = read(dir.join("r0.csv"));
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[0], policy);
    (row[5].parse().unwrap(), row[6].parse().unwrap())
}

#[test]
fn classical_cell_p0125_tau2_is_near_table_value() {
    let tmp = TempDir::new().unwrap();
    for policy in ["classical", "classical-moore"] {
        let out = tmp.path().join(policy);
        ok(&[
            "r0",
            "--policy",
            policy,
            "--p",
            "0.125",
            "--tau",
            "2",
            "--runs",
            "2000",
            "--seed",
            "2",
            "--out",
            s(&out),
        ]);
        let (mean, _) = r0_cell(&out, policy);
        assert!((mean - 0.234).abs() <= 0.03, "{policy}: {mean}");
    }
}

#[test]
fn cluster_single_n_single_run_has_zero_stderr() {
    let tmp = TempDir::new().unwrap();
    ok(&["cluster", "-N", "50", "--runs", "1", "--out", s(tmp.path())]);
    let text = read(tmp.path().join("cluster.csv"));
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 1);
    let f: Vec<&str> = rows[0].split(',').collect();
    assert_eq!((f[1], f[4], f[5], f[7]), ("32", "50", "1", "0"));
}

#[test]
fn cluster_mean_is_non_decreasing_in_n() {
    let tmp = TempDir::new().unwrap();
    ok(&[
        "cluster",
        "-N",
        "16,64,256,1024",
        "--runs",
        "40",
        "--seed",
        "8",
        "--out",
        s(tmp.path()),
    ]);
    let text = read(tmp.path().join("cluster.csv"));
    let pts: Vec<(f64, f64)> = text
        .lines()
        .skip(1)
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (f[6].parse().unwrap(), f[7].parse().unwrap())
        })
        .collect();
    for w in pts.windows(2) {
        let slack = 3.0 * (w[0].1.powi(2) + w[1].1.powi(2)).sqrt();
        assert!(w[1].0 + slack >= w[0].0, "{pts:?}");
    }
}

struct Ppm {
    width: usize,
    pixels: Vec<[u8; 3]>,
}

fn ppm(path: PathBuf) -> Ppm {
    let bytes = fs::read(&path).unwrap();
    let mut fields = Vec::new();
    let mut i = 0;
    while fields.len() < 4 {
        while bytes[i].is_ascii_whitespace() {
            i += 1;
        }
        let start = i;
        while !bytes[i].is_ascii_whitespace() {
            i += 1;
        }
        fields.push(String::from_utf8(bytes[start..i].to_vec()).unwrap());
    }
    assert_eq!(fields[0], "P6");
    let (w, h): (usize, usize) = (fields[1].parse().unwrap(), fields[2].parse().unwrap());
    let data = &bytes[i + 1..];
    assert_eq!(data.len(), w * h * 3);
    Ppm {
        width: w,
        pixels: data.chunks(3).map(|c| [c[0], c[1], c[2]]).collect(),
    }
}

fn frames(dir: &Path) -> Vec<u64> {
    let mut steps: Vec<u64> = fs::read_dir(dir)
        .unwrap()
        .filter_map(|e| {
            let name = e.unwrap().file_name().into_string().unwrap();
            name.strip_prefix("frame_")?
                .strip_suffix(".ppm")?
                .parse()
                .ok()
        })
        .collect();
    steps.sort();
    steps
}

#[test]
fn zero_infection_probability_leaves_no_red_and_no_green_beyond_origin() {
    let tmp = TempDir::new().unwrap();
    ok(&[
        "run",
        "-L",
        "16",
        "-N",
        "200",
        "--p",
        "0",
        "--tau",
        "5",
        "--out",
        s(tmp.path()),
    ]);
    let last = *frames(tmp.path()).last().unwrap();
    assert_eq!(last, 5);
    let img = ppm(tmp.path().join(format!("frame_{last:06}.ppm")));
    let red = [255, 0, 0];
    let green = [0, 160, 0];
    assert_eq!(img.pixels.iter().filter(|&&p| p == red).count(), 0);
    for (i, p) in img.pixels.iter().enumerate() {
        if *p == green {
            assert_eq!((i % img.width, i / img.width), (0, 0));
        }
    }
}

#[test]
fn frames_follow_the_snapshot_cadence_and_include_the_last_step() {
    let tmp = TempDir::new().unwrap();
    ok(&[
        "run",
        "-L",
        "64",
        "-N",
        "4096",
        "--p",
        "1",
        "--tau",
        "3",
        "--policy",
        "classical",
        "--seed",
        "1",
        "--snapshot-every",
        "66",
        "--out",
        s(tmp.path()),
    ]);
    let steps = frames(tmp.path());
    let stats = read(tmp.path().join("stats.csv"));
    let last: u64 = stats
        .lines()
        .nth(1)
        .unwrap()
        .split(',')
        .nth(9)
        .unwrap()
        .parse()
        .unwrap();
    assert!(
        last > 132,
        "realization too short to exercise the cadence: {last}"
    );
    let mut want: Vec<u64> = (0..=last).step_by(66).collect();
    if *want.last().unwrap() != last {
        want.push(last);
    }
    assert_eq!(steps, want);
}

#[test]
fn same_seed_gives_identical_frames() {
    let tmp = TempDir::new().unwrap();
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    for dir in [&a, &b] {
        ok(&[
            "run",
            "-L",
            "20",
            "-N",
            "150",
            "--p",
            "0.8",
            "--tau",
            "2",
            "--seed",
            "99",
            "--snapshot-every",
            "1",
            "--out",
            s(dir),
        ]);
    }
    let steps = frames(&a);
    assert_eq!(steps, frames(&b));
    for t in steps {
        let name = format!("frame_{t:06}.ppm");
        assert_eq!(
            fs::read(a.join(&name)).unwrap(),
            fs::read(b.join(&name)).unwrap()
        );
    }
}

#[test]
fn exit_codes_distinguish_config_and_io_failures() {
    let tmp = TempDir::new().unwrap();
    assert_eq!(qwalk(&["run", "--policy", "bogus"]).status.code(), Some(2));
    assert_eq!(
        qwalk(&["run", "-L", "4", "-N", "17"]).status.code(),
        Some(2)
    );
    assert_eq!(qwalk(&["run", "--p", "1.5"]).status.code(), Some(2));
    assert_eq!(
        qwalk(&["walk", "--geometry", "torus", "--coin", "hadamard"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        qwalk(&[
            "run",
            "--policy",
            "quantum-statevector",
            "--boundary",
            "reflect",
            "-L",
            "8",
            "-N",
            "4"
        ])
        .status
        .code(),
        Some(2)
    );
    assert_eq!(
        qwalk(&["cluster", "-L", "4", "-N", "20"]).status.code(),
        Some(2)
    );

    let bad = tmp.path().join("bad.txt");
    fs::write(&bad, "no_such_key = 1\n").unwrap();
    assert_eq!(qwalk(&["walk", "--config", s(&bad)]).status.code(), Some(2));
    let wrong = tmp.path().join("m.txt");
    fs::write(&wrong, "command = r0\nseed = 1\n").unwrap();
    assert_eq!(
        qwalk(&["walk", "--config", s(&wrong)]).status.code(),
        Some(2)
    );

    assert_eq!(
        qwalk(&["walk", "--config", s(&tmp.path().join("missing"))])
            .status
            .code(),
        Some(3)
    );
    let file = tmp.path().join("file");
    fs::write(&file, "").unwrap();
    assert_eq!(
        qwalk(&["walk", "--out", s(&file.join("sub"))])
            .status
            .code(),
        Some(3)
    );
}
