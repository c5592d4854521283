use num_complex::Complex64;

use super::coin::CoinOperator;
use super::dense::DenseMatrix;
use super::shift::ShiftOperator;
use super::state::AmplitudeVector;
use crate::tol;
use crate::{Error, Result};

/// One walk step `U = S · (C ⊗ I)`, kept in structured form.
///
/// Immutable after construction; share it across threads freely.
#[derive(Debug, Clone, PartialEq)]
pub struct Evolution {
    coin: CoinOperator,
    shift: ShiftOperator,
}

impl Evolution {
    pub fn coin(&self) -> &CoinOperator {
        &self.coin
    }

    pub fn shift(&self) -> &ShiftOperator {
        &self.shift
    }

    pub fn coin_dim(&self) -> usize {
        self.coin.dim()
    }

    pub fn position_dim(&self) -> usize {
        self.shift.position_dim()
    }

    pub fn dim(&self) -> usize {
        self.coin_dim() * self.position_dim()
    }

    /// `S · (C ⊗ I)` as a dense matrix. Only sensible for small walks.
    pub fn to_dense(&self) -> DenseMatrix {
        let coin_part = self
            .coin
            .matrix()
            .kron(&DenseMatrix::identity(self.position_dim()));
        self.shift.to_dense().mul(&coin_part)
    }

    /// Applies the step in `O(coin_dim² · positions)`.
    pub fn apply(&self, state: &AmplitudeVector) -> Result<AmplitudeVector> {
        if state.coin_dim() != self.coin_dim() || state.position_dim() != self.position_dim() {
            return Err(Error::IncompatibleOperator(format!(
                "state is {}x{}, operator is {}x{}",
                state.coin_dim(),
                state.position_dim(),
                self.coin_dim(),
                self.position_dim()
            )));
        }
        let (d, p) = (self.coin_dim(), self.position_dim());
        let amps = state.amplitudes();
        let mut out = vec![Complex64::new(0.0, 0.0); d * p];
        let mut local = vec![Complex64::new(0.0, 0.0); d];
        let mut mixed = vec![Complex64::new(0.0, 0.0); d];
        for x in 0..p {
            let mut any = false;
            for c in 0..d {
                local[c] = amps[c * p + x];
                any |= local[c] != Complex64::new(0.0, 0.0);
            }
            if !any {
                continue;
            }
            self.coin.apply_into(&local, &mut mixed);
            for c in 0..d {
                out[c * p + self.shift.target(c, x)] = mixed[c];
            }
        }
        Ok(AmplitudeVector::from_unitary_image(d, p, out))
    }
}

/// Pairs a coin with a shift over the same coin register.
pub fn evolution_operator(coin: CoinOperator, shift: ShiftOperator) -> Result<Evolution> {
    if coin.dim() != shift.coin_dim() {
        return Err(Error::IncompatibleOperator(format!(
            "coin has dimension {}, shift expects {}",
            coin.dim(),
            shift.coin_dim()
        )));
    }
    Ok(Evolution { coin, shift })
}

/// `|Ψ(t+1)⟩ = U |Ψ(t)⟩`.
pub fn step(state: &AmplitudeVector, u: &Evolution) -> Result<AmplitudeVector> {
    u.apply(state)
}

/// `P(x) = Σ_c |ψ(c, x)|²`.
pub fn position_distribution(state: &AmplitudeVector) -> Vec<f64> {
    let p = state.position_dim();
    let mut dist = vec![0.0; p];
    for (i, a) in state.amplitudes().iter().enumerate() {
        dist[i % p] += a.norm_sqr();
    }
    dist
}

/// Born-rule probabilities of a coin register. For the 2D coin the order is
/// `(−x, −y, +x, +y)`, matching basis `|00⟩, |01⟩, |10⟩, |11⟩`.
pub fn coin_distribution(coin_state: &[Complex64]) -> Result<Vec<f64>> {
    let probs: Vec<f64> = coin_state.iter().map(|a| a.norm_sqr()).collect();
    let n: f64 = probs.iter().sum();
    if coin_state.is_empty() || (n - 1.0).abs() > tol::INPUT {
        return Err(Error::InvalidState(format!("coin state squared norm {n}")));
    }
    Ok(probs)
}

#[cfg(test)]
mod tests {
    use std::f64::consts::FRAC_1_SQRT_2;

    use super::*;
    use crate::qwalk::{
        make_cycle_shift, make_hadamard_coin, make_hypercube_shift, make_torus_shift_2d,
    };
    use proptest::prelude::*;

    fn cycle8() -> Evolution {
        evolution_operator(
            make_hadamard_coin(1).unwrap(),
            make_cycle_shift(3).unwrap().shift,
        )
        .unwrap()
    }

    #[test]
    fn one_step_from_up_zero() {
        let u = cycle8();
        let psi = AmplitudeVector::basis(2, 8, 0, 0).unwrap();
        let out = step(&psi, &u).unwrap();
        for (i, a) in out.amplitudes().iter().enumerate() {
            let expected = if i == 1 || i == 8 + 7 {
                FRAC_1_SQRT_2
            } else {
                0.0
            };
            assert!(
                (a - Complex64::new(expected, 0.0)).norm() < 1e-15,
                "index {i}"
            );
        }
        let p = position_distribution(&out);
        assert!((p[1] - 0.5).abs() < 1e-15 && (p[7] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn structured_step_matches_dense() {
        let u = cycle8();
        let dense = u.to_dense();
        assert!(dense.unitarity_deviation() < 1e-12);
        assert!((dense[(0, 7)].re - FRAC_1_SQRT_2).abs() < 1e-15);
        let mut psi = AmplitudeVector::basis(2, 8, 0, 0).unwrap();
        let mut v = psi.amplitudes().to_vec();
        for _ in 0..12 {
            psi = step(&psi, &u).unwrap();
            v = dense.mul_vec(&v);
            for (a, b) in psi.amplitudes().iter().zip(&v) {
                assert!((a - b).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn dimension_mismatches() {
        let hh = make_hadamard_coin(2).unwrap();
        assert!(matches!(
            evolution_operator(hh.clone(), make_cycle_shift(3).unwrap().shift),
            Err(Error::IncompatibleOperator(_))
        ));
        let u = evolution_operator(hh, make_torus_shift_2d(4, 4).unwrap()).unwrap();
        let wrong = AmplitudeVector::basis(4, 8, 0, 0).unwrap();
        assert!(step(&wrong, &u).is_err());
    }

    #[test]
    fn coin_distribution_examples() {
        let z = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        assert_eq!(
            coin_distribution(&[one, z, z, z]).unwrap(),
            vec![1.0, 0.0, 0.0, 0.0]
        );
        let hh = make_hadamard_coin(2).unwrap();
        for p in coin_distribution(&hh.apply(&[one, z, z, z])).unwrap() {
            assert!((p - 0.25).abs() < 1e-15);
        }
        let s = Complex64::new(FRAC_1_SQRT_2, 0.0);
        let p = coin_distribution(&[s, z, z, s]).unwrap();
        assert!(
            (p[0] - 0.5).abs() < 1e-15 && p[1] == 0.0 && p[2] == 0.0 && (p[3] - 0.5).abs() < 1e-15
        );
        assert!(matches!(
            coin_distribution(&[one, one, z, z]),
            Err(Error::InvalidState(_))
        ));
    }

    #[test]
    fn identity_coin_inc_only_moves_deterministically() {
        let shift = ShiftOperator::new(vec![make_cycle_shift(4).unwrap().inc]).unwrap();
        let u = evolution_operator(CoinOperator::identity(1).unwrap(), shift).unwrap();
        let mut psi = AmplitudeVector::basis(1, 16, 0, 0).unwrap();
        for t in 1..=20 {
            psi = step(&psi, &u).unwrap();
            assert_eq!(position_distribution(&psi)[t % 16], 1.0);
        }
    }

    #[test]
    fn hypercube_walk_is_unitary() {
        let u = evolution_operator(
            crate::qwalk::make_dft_coin(3).unwrap(),
            make_hypercube_shift(3, 3).unwrap(),
        )
        .unwrap();
        assert!(u.to_dense().unitarity_deviation() < 1e-12);
        let g = evolution_operator(
            crate::qwalk::embed_dft3_gate(),
            make_hypercube_shift(3, 4).unwrap(),
        )
        .unwrap();
        assert!(g.to_dense().unitarity_deviation() < 1e-12);
    }

    #[test]
    fn norm_drift_after_1000_steps() {
        let u = evolution_operator(
            make_hadamard_coin(2).unwrap(),
            make_torus_shift_2d(9, 7).unwrap(),
        )
        .unwrap();
        let mut psi = AmplitudeVector::basis(4, 63, 0, 0).unwrap();
        for _ in 0..1000 {
            psi = step(&psi, &u).unwrap();
        }
        assert!((psi.norm_sqr() - 1.0).abs() < 1e-8);
        let total: f64 = position_distribution(&psi).iter().sum();
        assert!((total - 1.0).abs() < 1e-8);
    }

    proptest! {
        #[test]
        fn random_coin_states_keep_norm(
            re in proptest::collection::vec(-1.0f64..1.0, 4),
            im in proptest::collection::vec(-1.0f64..1.0, 4),
            steps in 1usize..40,
        ) {
            let raw: Vec<Complex64> = re.iter().zip(&im).map(|(&a, &b)| Complex64::new(a, b)).collect();
            let n = raw.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
            prop_assume!(n > 1e-3);
            let coin: Vec<Complex64> = raw.iter().map(|a| a / n).collect();
            let u = evolution_operator(make_hadamard_coin(2).unwrap(), make_torus_shift_2d(6, 5).unwrap()).unwrap();
            let mut psi = AmplitudeVector::product(&coin, 30, 7).unwrap();
            for _ in 0..steps {
                psi = step(&psi, &u).unwrap();
            }
            prop_assert!((psi.norm_sqr() - 1.0).abs() < 1e-10);
        }
    }
}
