use num_complex::Complex64;

use crate::tol;
use crate::{Error, Result};

/// A normalized amplitude vector over `coin ⊗ position`.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeVector {
    coin_dim: usize,
    position_dim: usize,
    amps: Vec<Complex64>,
}

impl AmplitudeVector {
    /// Wraps raw amplitudes, checking length and normalization.
    pub fn from_amplitudes(
        coin_dim: usize,
        position_dim: usize,
        amps: Vec<Complex64>,
    ) -> Result<Self> {
        if coin_dim == 0 || position_dim == 0 {
            return Err(Error::InvalidDimension(
                "coin and position dimensions must be positive".into(),
            ));
        }
        if amps.len() != coin_dim * position_dim {
            return Err(Error::InvalidDimension(format!(
                "expected {} amplitudes, got {}",
                coin_dim * position_dim,
                amps.len()
            )));
        }
        let v = Self {
            coin_dim,
            position_dim,
            amps,
        };
        let n = v.norm_sqr();
        if (n - 1.0).abs() > tol::ACCUMULATED {
            return Err(Error::InvalidState(format!("squared norm {n}")));
        }
        Ok(v)
    }

    /// `coin_state ⊗ |position⟩`.
    pub fn product(coin_state: &[Complex64], position_dim: usize, position: usize) -> Result<Self> {
        let coin_dim = coin_state.len();
        if coin_dim == 0 || position_dim == 0 {
            return Err(Error::InvalidDimension(
                "coin and position dimensions must be positive".into(),
            ));
        }
        if position >= position_dim {
            return Err(Error::InvalidDimension(format!(
                "position {position} outside 0..{position_dim}"
            )));
        }
        let n: f64 = coin_state.iter().map(|a| a.norm_sqr()).sum();
        if (n - 1.0).abs() > tol::ALGEBRAIC {
            return Err(Error::InvalidState(format!("coin state squared norm {n}")));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); coin_dim * position_dim];
        for (c, &a) in coin_state.iter().enumerate() {
            amps[c * position_dim + position] = a;
        }
        Ok(Self {
            coin_dim,
            position_dim,
            amps,
        })
    }

    /// The basis state `|coin⟩ ⊗ |position⟩`.
    pub fn basis(
        coin_dim: usize,
        position_dim: usize,
        coin: usize,
        position: usize,
    ) -> Result<Self> {
        if coin >= coin_dim {
            return Err(Error::InvalidDimension(format!(
                "coin index {coin} outside 0..{coin_dim}"
            )));
        }
        let mut c = vec![Complex64::new(0.0, 0.0); coin_dim];
        c[coin] = Complex64::new(1.0, 0.0);
        Self::product(&c, position_dim, position)
    }

    // Callers guarantee the new amplitudes came from a unitary map.
    pub(crate) fn from_unitary_image(
        coin_dim: usize,
        position_dim: usize,
        amps: Vec<Complex64>,
    ) -> Self {
        debug_assert_eq!(amps.len(), coin_dim * position_dim);
        Self {
            coin_dim,
            position_dim,
            amps,
        }
    }

    pub fn coin_dim(&self) -> usize {
        self.coin_dim
    }

    pub fn position_dim(&self) -> usize {
        self.position_dim
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amps.is_empty()
    }

    pub fn amplitude(&self, coin: usize, position: usize) -> Complex64 {
        self.amps[coin * self.position_dim + position]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn product_state_layout_is_coin_major() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let v = AmplitudeVector::product(&[c(s), c(s)], 8, 3).unwrap();
        assert_eq!(v.len(), 16);
        assert_eq!(v.amplitudes()[3], c(s));
        assert_eq!(v.amplitudes()[8 + 3], c(s));
        assert!((v.norm_sqr() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(matches!(
            AmplitudeVector::product(&[c(1.0), c(1.0)], 4, 0),
            Err(Error::InvalidState(_))
        ));
        assert!(AmplitudeVector::product(&[c(1.0)], 4, 4).is_err());
        assert!(AmplitudeVector::from_amplitudes(2, 2, vec![c(1.0); 3]).is_err());
        assert!(AmplitudeVector::from_amplitudes(2, 2, vec![c(0.5); 4]).is_ok());
        assert!(AmplitudeVector::basis(2, 2, 2, 0).is_err());
    }
}
