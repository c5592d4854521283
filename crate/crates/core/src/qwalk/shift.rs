use num_complex::Complex64;

use super::dense::DenseMatrix;
use crate::{Error, Result};

/// Statevector feasibility bound for qubit-encoded cycles.
pub const MAX_CYCLE_QUBITS: usize = 20;
pub const MAX_HYPERCUBE_DIM: usize = 10;

/// A bijection on `0..n`, stored as `image[x]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    image: Vec<usize>,
}

impl Permutation {
    pub fn from_image(image: Vec<usize>) -> Result<Self> {
        let n = image.len();
        let mut seen = vec![false; n];
        for &y in &image {
            if y >= n || seen[y] {
                return Err(Error::IncompatibleOperator(format!(
                    "not a permutation of 0..{n}: {y} out of range or repeated"
                )));
            }
            seen[y] = true;
        }
        Ok(Self { image })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            image: (0..n).collect(),
        }
    }

    fn from_fn(n: usize, f: impl Fn(usize) -> usize) -> Self {
        let p = Self {
            image: (0..n).map(f).collect(),
        };
        debug_assert!(Self::from_image(p.image.clone()).is_ok());
        p
    }

    pub fn len(&self) -> usize {
        self.image.len()
    }

    pub fn is_empty(&self) -> bool {
        self.image.is_empty()
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.image[x]
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(self.len(), other.len());
        Self {
            image: other.image.iter().map(|&x| self.image[x]).collect(),
        }
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.len()];
        for (x, &y) in self.image.iter().enumerate() {
            inv[y] = x;
        }
        Self { image: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(x, &y)| x == y)
    }

    /// Dense form with `M[image[x]][x] = 1`, i.e. `M|x⟩ = |image[x]⟩`.
    pub fn to_dense(&self) -> DenseMatrix {
        let mut m = DenseMatrix::zeros(self.len());
        for (x, &y) in self.image.iter().enumerate() {
            m[(y, x)] = Complex64::new(1.0, 0.0);
        }
        m
    }
}

/// Coin-conditioned shift: coin basis state `c` moves positions along
/// `perms[c]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ShiftOperator {
    position_dim: usize,
    perms: Vec<Permutation>,
}

impl ShiftOperator {
    pub fn new(perms: Vec<Permutation>) -> Result<Self> {
        let position_dim = perms.first().map(Permutation::len).unwrap_or(0);
        if position_dim == 0 {
            return Err(Error::InvalidDimension(
                "shift needs at least one coin state and position".into(),
            ));
        }
        if perms.iter().any(|p| p.len() != position_dim) {
            return Err(Error::IncompatibleOperator(
                "per-coin permutations differ in size".into(),
            ));
        }
        Ok(Self {
            position_dim,
            perms,
        })
    }

    pub fn coin_dim(&self) -> usize {
        self.perms.len()
    }

    pub fn position_dim(&self) -> usize {
        self.position_dim
    }

    pub fn permutation(&self, coin: usize) -> &Permutation {
        &self.perms[coin]
    }

    #[inline]
    pub fn target(&self, coin: usize, position: usize) -> usize {
        self.perms[coin].apply(position)
    }

    /// Block-diagonal dense form `Σ_c |c⟩⟨c| ⊗ P_c`.
    pub fn to_dense(&self) -> DenseMatrix {
        let p = self.position_dim;
        let mut m = DenseMatrix::zeros(self.coin_dim() * p);
        for (c, perm) in self.perms.iter().enumerate() {
            for x in 0..p {
                m[(c * p + perm.apply(x), c * p + x)] = Complex64::new(1.0, 0.0);
            }
        }
        m
    }
}

/// The increment/decrement pair on a cycle and the shift built from them.
#[derive(Debug, Clone, PartialEq)]
pub struct CycleShift {
    pub inc: Permutation,
    pub dec: Permutation,
    /// `|↑⟩⟨↑| ⊗ INC + |↓⟩⟨↓| ⊗ DEC`
    pub shift: ShiftOperator,
}

impl CycleShift {
    /// Cycle of arbitrary length `sites >= 2` in permutation form.
    pub fn with_sites(sites: usize) -> Result<Self> {
        if sites < 2 {
            return Err(Error::InvalidDimension(format!(
                "cycle needs at least 2 sites, got {sites}"
            )));
        }
        let inc = Permutation::from_fn(sites, |k| (k + 1) % sites);
        let dec = Permutation::from_fn(sites, |k| (k + sites - 1) % sites);
        let shift = ShiftOperator::new(vec![inc.clone(), dec.clone()])?;
        Ok(Self { inc, dec, shift })
    }
}

/// INC, DEC and S on a `2^n_qubits`-vertex cycle.
pub fn make_cycle_shift(n_qubits: usize) -> Result<CycleShift> {
    if !(1..=MAX_CYCLE_QUBITS).contains(&n_qubits) {
        return Err(Error::ResourceLimit(format!(
            "cycle register of {n_qubits} qubits (allowed 1..={MAX_CYCLE_QUBITS})"
        )));
    }
    CycleShift::with_sites(1 << n_qubits)
}

/// Four-direction shift on an `lx × ly` torus; position index `x + lx * y`.
///
/// Coin order is `|00⟩, |01⟩, |10⟩, |11⟩` → `−x, −y, +x, +y`.
pub fn make_torus_shift_2d(lx: usize, ly: usize) -> Result<ShiftOperator> {
    if lx < 2 || ly < 2 {
        return Err(Error::InvalidDimension(format!(
            "torus extent {lx}x{ly}; both must be >= 2"
        )));
    }
    let n = lx * ly;
    let moved = |dx: isize, dy: isize| {
        Permutation::from_fn(n, move |i| {
            let (x, y) = ((i % lx) as isize, (i / lx) as isize);
            let nx = (x + dx).rem_euclid(lx as isize) as usize;
            let ny = (y + dy).rem_euclid(ly as isize) as usize;
            nx + lx * ny
        })
    };
    ShiftOperator::new(vec![moved(-1, 0), moved(0, -1), moved(1, 0), moved(0, 1)])
}

/// Bit-flip shift on the `d`-cube. Coin `j` flips bit `j` counted from the
/// most significant end, so direction 1 takes `|000⟩` to `|100⟩`.
///
/// `coin_dim > d` pads the coin register with idle states that leave the
/// position alone (the `|11⟩` state of the two-qubit DFT₃ gate).
pub fn make_hypercube_shift(d: usize, coin_dim: usize) -> Result<ShiftOperator> {
    if !(1..=MAX_HYPERCUBE_DIM).contains(&d) {
        return Err(Error::ResourceLimit(format!(
            "hypercube dimension {d} (allowed 1..={MAX_HYPERCUBE_DIM})"
        )));
    }
    if coin_dim < d {
        return Err(Error::IncompatibleOperator(format!(
            "hypercube of dimension {d} needs at least {d} coin states, got {coin_dim}"
        )));
    }
    let n = 1usize << d;
    let perms = (0..coin_dim)
        .map(|j| {
            if j < d {
                let mask = 1usize << (d - 1 - j);
                Permutation::from_fn(n, move |v| v ^ mask)
            } else {
                Permutation::identity(n)
            }
        })
        .collect();
    ShiftOperator::new(perms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn inc_dec_examples() {
        let cs = make_cycle_shift(3).unwrap();
        assert_eq!(cs.inc.apply(0b000), 0b001);
        assert_eq!(cs.dec.apply(0b000), 0b111);
        assert!(cs.inc.compose(&cs.dec).is_identity());
        assert!(cs.dec.compose(&cs.inc).is_identity());
    }

    #[test]
    fn cycle_size_limits() {
        assert!(matches!(make_cycle_shift(0), Err(Error::ResourceLimit(_))));
        assert!(matches!(make_cycle_shift(21), Err(Error::ResourceLimit(_))));
        assert_eq!(make_cycle_shift(1).unwrap().inc.len(), 2);
        assert!(CycleShift::with_sites(1).is_err());
    }

    #[test]
    fn torus_directions() {
        let s = make_torus_shift_2d(4, 4).unwrap();
        let idx = |x: usize, y: usize| x + 4 * y;
        assert_eq!(s.target(2, idx(0, 0)), idx(1, 0));
        assert_eq!(s.target(0, idx(0, 0)), idx(3, 0));
        assert_eq!(s.target(1, idx(0, 0)), idx(0, 3));
        assert_eq!(s.target(3, idx(0, 0)), idx(0, 1));
        assert_eq!(s.target(2, idx(3, 2)), idx(0, 2));
        assert!(s.to_dense().unitarity_deviation() < 1e-12);
        assert!(matches!(
            make_torus_shift_2d(1, 4),
            Err(Error::InvalidDimension(_))
        ));
    }

    #[test]
    fn hypercube_examples() {
        let s = make_hypercube_shift(3, 3).unwrap();
        assert_eq!(s.target(0, 0b000), 0b100);
        assert_eq!(s.target(1, 0b100), 0b110);
        assert_eq!(s.target(2, 0b000), 0b001);
        for j in 0..3 {
            assert!(s.permutation(j).compose(s.permutation(j)).is_identity());
        }
        let padded = make_hypercube_shift(3, 4).unwrap();
        assert!(padded.permutation(3).is_identity());
        assert!(matches!(
            make_hypercube_shift(0, 1),
            Err(Error::ResourceLimit(_))
        ));
        assert!(matches!(
            make_hypercube_shift(11, 11),
            Err(Error::ResourceLimit(_))
        ));
        assert!(make_hypercube_shift(3, 2).is_err());
    }

    #[test]
    fn rejects_non_bijections() {
        assert!(Permutation::from_image(vec![0, 0, 1]).is_err());
        assert!(Permutation::from_image(vec![0, 3, 1]).is_err());
        assert!(
            ShiftOperator::new(vec![Permutation::identity(2), Permutation::identity(3)]).is_err()
        );
    }

    proptest! {
        #[test]
        fn inc_dec_are_inverse_for_all_sizes(n in 2usize..500) {
            let cs = CycleShift::with_sites(n).unwrap();
            prop_assert!(cs.inc.compose(&cs.dec).is_identity());
            prop_assert!(cs.dec.compose(&cs.inc).is_identity());
            prop_assert_eq!(cs.inc.inverse(), cs.dec);
        }

        #[test]
        fn hypercube_directions_are_involutions(d in 1usize..=10) {
            let s = make_hypercube_shift(d, d).unwrap();
            for j in 0..d {
                prop_assert!(s.permutation(j).compose(s.permutation(j)).is_identity());
            }
        }

        #[test]
        fn torus_opposite_moves_cancel(lx in 2usize..12, ly in 2usize..12) {
            let s = make_torus_shift_2d(lx, ly).unwrap();
            prop_assert!(s.permutation(0).compose(s.permutation(2)).is_identity());
            prop_assert!(s.permutation(1).compose(s.permutation(3)).is_identity());
        }
    }
}
