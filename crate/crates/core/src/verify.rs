//! Golden self-checks run by `qwalk-epi verify`.
//!
//! The reference tables below are the explicit 3-qubit cycle operators
//! (increment, decrement, conditional shift, and `√2 · U` for the Hadamard
//! coin) written out entry by entry, independent of the code that builds them.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use crate::qwalk::{
    embed_dft3_gate, evolution_operator, make_cycle_shift, make_dft_coin, make_hadamard_coin,
    make_hypercube_shift, make_torus_shift_2d, position_distribution, AmplitudeVector,
    CoinOperator, CycleShift, DenseMatrix, Geometry, ShiftOperator, WalkSpec,
};
use crate::tol;

const INC_ROWS: [&str; 8] = [
    "00000001", "10000000", "01000000", "00100000", "00010000", "00001000", "00000100", "00000010",
];

const DEC_ROWS: [&str; 8] = [
    "01000000", "00100000", "00010000", "00001000", "00000100", "00000010", "00000001", "10000000",
];

const S_ROWS: [&str; 16] = [
    "0000000100000000",
    "1000000000000000",
    "0100000000000000",
    "0010000000000000",
    "0001000000000000",
    "0000100000000000",
    "0000010000000000",
    "0000001000000000",
    "0000000001000000",
    "0000000000100000",
    "0000000000010000",
    "0000000000001000",
    "0000000000000100",
    "0000000000000010",
    "0000000000000001",
    "0000000010000000",
];

// `+` = +1, `-` = -1, `0` = 0; the whole matrix carries a 1/√2 prefactor.
const U_ROWS: [&str; 16] = [
    "000000010000000+",
    "+0000000+0000000",
    "0+0000000+000000",
    "00+0000000+00000",
    "000+0000000+0000",
    "0000+0000000+000",
    "00000+0000000+00",
    "000000+0000000+0",
    "0+0000000-000000",
    "00+0000000-00000",
    "000+0000000-0000",
    "0000+0000000-000",
    "00000+0000000-00",
    "000000+0000000-0",
    "0000000+0000000-",
    "+0000000-0000000",
];

fn parse_rows(rows: &[&str], scale: f64) -> DenseMatrix {
    let n = rows.len();
    let mut m = DenseMatrix::zeros(n);
    for (i, row) in rows.iter().enumerate() {
        assert_eq!(row.len(), n);
        for (j, ch) in row.chars().enumerate() {
            let v = match ch {
                '0' => 0.0,
                '1' | '+' => 1.0,
                '-' => -1.0,
                _ => unreachable!("bad golden table character {ch}"),
            };
            m[(i, j)] = Complex64::new(v * scale, 0.0);
        }
    }
    m
}

pub fn golden_inc() -> DenseMatrix {
    parse_rows(&INC_ROWS, 1.0)
}

pub fn golden_dec() -> DenseMatrix {
    parse_rows(&DEC_ROWS, 1.0)
}

pub fn golden_shift() -> DenseMatrix {
    parse_rows(&S_ROWS, 1.0)
}

/// Row 0 of `U` has `0000000100000001`; the `1` in column 7 is printed
/// without a sign, so both encodings are accepted by the parser.
pub fn golden_evolution() -> DenseMatrix {
    parse_rows(&U_ROWS, FRAC_1_SQRT_2)
}

/// Largest deviation, or infinity if an expected zero is not exactly zero.
pub fn golden_deviation(built: &DenseMatrix, golden: &DenseMatrix) -> f64 {
    if built.dim() != golden.dim() {
        return f64::INFINITY;
    }
    let n = built.dim();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let (b, g) = (built[(i, j)], golden[(i, j)]);
            if g == Complex64::new(0.0, 0.0) && b != g {
                return f64::INFINITY;
            }
            worst = worst.max((b - g).norm());
        }
    }
    worst
}

/// The operators under test. Tests can corrupt a field to check that the
/// matching golden check fails.
#[derive(Debug, Clone)]
pub struct VerifySubject {
    pub cycle: CycleShift,
    pub hadamard: CoinOperator,
    pub hadamard2: CoinOperator,
    pub dft3: CoinOperator,
    pub dft3_gate: CoinOperator,
    pub hypercube: ShiftOperator,
}

impl VerifySubject {
    pub fn build() -> Self {
        Self {
            cycle: make_cycle_shift(3).expect("3 qubits is in range"),
            hadamard: make_hadamard_coin(1).expect("1-qubit Hadamard"),
            hadamard2: make_hadamard_coin(2).expect("2-qubit Hadamard"),
            dft3: make_dft_coin(3).expect("d = 3"),
            dft3_gate: embed_dft3_gate(),
            hypercube: make_hypercube_shift(3, 3).expect("d = 3"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub max_deviation: f64,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failed(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

impl std::fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for c in &self.checks {
            writeln!(
                f,
                "{:<4} {:<28} max_dev={:.3e}  {}",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.max_deviation,
                c.detail
            )?;
        }
        Ok(())
    }
}

fn check(
    name: &'static str,
    max_deviation: f64,
    limit: f64,
    detail: impl Into<String>,
) -> CheckResult {
    CheckResult {
        name,
        passed: max_deviation <= limit,
        max_deviation,
        detail: detail.into(),
    }
}

fn max_abs(pairs: impl IntoIterator<Item = (f64, f64)>) -> f64 {
    pairs
        .into_iter()
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max)
}

/// Runs every golden check against `subject`.
pub fn run_checks(subject: &VerifySubject) -> VerifyReport {
    let mut checks = Vec::new();
    let cs = &subject.cycle;

    checks.push(check(
        "cycle8-inc-matrix",
        golden_deviation(&cs.inc.to_dense(), &golden_inc()),
        tol::ALGEBRAIC,
        "INC against the 8x8 reference",
    ));
    checks.push(check(
        "cycle8-dec-matrix",
        golden_deviation(&cs.dec.to_dense(), &golden_dec()),
        tol::ALGEBRAIC,
        "DEC against the 8x8 reference",
    ));
    checks.push(check(
        "cycle8-shift-matrix",
        golden_deviation(&cs.shift.to_dense(), &golden_shift()),
        tol::ALGEBRAIC,
        "S against the 16x16 reference",
    ));
    let u = evolution_operator(subject.hadamard.clone(), cs.shift.clone());
    checks.push(match &u {
        Ok(u) => check(
            "cycle8-evolution-matrix",
            golden_deviation(&u.to_dense(), &golden_evolution()),
            tol::ALGEBRAIC,
            "U = S(H⊗I) against the 16x16 reference",
        ),
        Err(e) => check("cycle8-evolution-matrix", f64::INFINITY, 0.0, e.to_string()),
    });

    let inc_dec = if cs.inc.len() == cs.dec.len()
        && cs.inc.compose(&cs.dec).is_identity()
        && cs.dec.compose(&cs.inc).is_identity()
    {
        0.0
    } else {
        f64::INFINITY
    };
    checks.push(check(
        "inc-dec-inverse",
        inc_dec,
        0.0,
        "INC∘DEC = DEC∘INC = I",
    ));

    let mut unitary = vec![
        subject.hadamard.unitarity_deviation(),
        subject.hadamard2.unitarity_deviation(),
        subject.dft3.unitarity_deviation(),
        subject.dft3_gate.unitarity_deviation(),
        cs.shift.to_dense().unitarity_deviation(),
        subject.hypercube.to_dense().unitarity_deviation(),
    ];
    if let Ok(u) = &u {
        unitary.push(u.to_dense().unitarity_deviation());
    }
    if let Ok(u) = evolution_operator(subject.dft3.clone(), subject.hypercube.clone()) {
        unitary.push(u.to_dense().unitarity_deviation());
    }
    if let Ok(u) = evolution_operator(
        subject.hadamard2.clone(),
        make_torus_shift_2d(4, 4).expect("4x4 torus"),
    ) {
        unitary.push(u.to_dense().unitarity_deviation());
    }
    checks.push(check(
        "unitarity-suite",
        unitary.iter().copied().fold(0.0, f64::max),
        tol::ALGEBRAIC,
        format!("{} operators, ‖O†O − I‖_max", unitary.len()),
    ));

    let e0 = |d: usize| {
        let mut v = vec![Complex64::new(0.0, 0.0); d];
        v[0] = Complex64::new(1.0, 0.0);
        v
    };
    let third = 1.0 / 3.0;
    let p3: Vec<f64> = subject
        .dft3
        .apply(&e0(3))
        .iter()
        .map(|a| a.norm_sqr())
        .collect();
    let p4: Vec<f64> = subject
        .dft3_gate
        .apply(&e0(4))
        .iter()
        .map(|a| a.norm_sqr())
        .collect();
    let dev = if p3.len() == 3 && p4.len() == 4 {
        max_abs(
            p3.iter()
                .copied()
                .zip([third; 3])
                .chain(p4.iter().copied().zip([third, third, third, 0.0])),
        )
    } else {
        f64::INFINITY
    };
    checks.push(check(
        "dft3-column-law",
        dev,
        tol::ALGEBRAIC,
        "outcome probabilities 1/3 (and 0 on |11⟩)",
    ));

    // t = 1, 2, 3 of the Hadamard walk on a line from |↑⟩|0⟩, derived by hand
    let expected: [&[(i64, f64)]; 3] = [
        &[(1, 0.5), (-1, 0.5)],
        &[(2, 0.25), (0, 0.5), (-2, 0.25)],
        &[(3, 0.125), (1, 0.625), (-1, 0.125), (-3, 0.125)],
    ];
    let g = Geometry::Line { extent: 15 };
    let up = vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
    let dev = match WalkSpec::new(g, subject.hadamard.clone(), g.origin(), up)
        .and_then(|s| s.distributions(3))
    {
        Ok(d) => {
            let mut worst: f64 = 0.0;
            for (t, exp) in expected.iter().enumerate() {
                let mut want = vec![0.0; 15];
                for &(x, p) in exp.iter() {
                    want[(x + 7) as usize] = p;
                }
                worst = worst.max(max_abs(d[t + 1].iter().copied().zip(want)));
            }
            worst
        }
        Err(_) => f64::INFINITY,
    };
    checks.push(check(
        "hadamard-line-t1-t3",
        dev,
        tol::ALGEBRAIC,
        "exact 1D distributions for t = 1, 2, 3",
    ));

    let hc = &subject.hypercube;
    let invol = (0..hc.coin_dim())
        .all(|j| hc.permutation(j).compose(hc.permutation(j)).is_identity())
        && hc.target(0, 0b000) == 0b100
        && hc.coin_dim() > 1
        && hc.target(1, 0b100) == 0b110;
    checks.push(check(
        "hypercube-involution",
        if invol { 0.0 } else { f64::INFINITY },
        0.0,
        "bit flips self-inverse; |000⟩→|100⟩→|110⟩ along directions 1, 2",
    ));

    let dev = evolution_operator(subject.dft3.clone(), hc.clone())
        .and_then(|u| u.apply(&AmplitudeVector::basis(3, 8, 0, 0)?))
        .map(|psi| {
            let p = position_distribution(&psi);
            let mut want = [0.0; 8];
            want[0b100] = third;
            want[0b010] = third;
            want[0b001] = third;
            max_abs(p.into_iter().zip(want))
        })
        .unwrap_or(f64::INFINITY);
    checks.push(check(
        "hypercube-first-step",
        dev,
        tol::ALGEBRAIC,
        "1/3 on |100⟩, |010⟩, |001⟩",
    ));

    VerifyReport { checks }
}
