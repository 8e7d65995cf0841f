//! Beam-split single-photon states and their photon-number partitions.
//!
//! `M` single photons, each sent through its own balanced beam splitter,
//! leave one photon per mode index shared between systems `A` and `B`:
//! the state is an equal superposition of `|n>_A |1-n>_B` over all binary
//! patterns `n`. Photon counting always reveals the local photon number,
//! so most analyses work with one partition `(N, M-N)` at a time.

use std::collections::BTreeMap;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use crate::error::{domain, Error, Result};
use crate::fock::{FockBasis, PhotonPattern, PureState, Space};

/// Largest mode count [`generate_psi`] accepts.
pub const MAX_GENERATED_MODES: usize = 12;

/// Largest joint dimension of a single stratum held densely by
/// [`generate_psi`].
pub const MAX_STRATUM_DIM: usize = 1 << 24;

/// Singular values above this count towards the Schmidt rank.
pub const SCHMIDT_TOLERANCE: f64 = 1e-10;

/// All patterns with at most one photon per mode and `photons` photons in
/// total, in descending lexicographic order.
pub fn binary_patterns(modes: usize, photons: usize) -> Vec<PhotonPattern> {
    let mut out = Vec::new();
    let mut current = vec![0u32; modes];
    fn rec(current: &mut [u32], mode: usize, left: usize, out: &mut Vec<PhotonPattern>) {
        let remaining = current.len() - mode;
        if left > remaining {
            return;
        }
        if mode == current.len() {
            out.push(PhotonPattern::new(current.to_vec()).expect("non-empty"));
            return;
        }
        if left > 0 {
            current[mode] = 1;
            rec(current, mode + 1, left - 1, out);
        }
        current[mode] = 0;
        rec(current, mode + 1, left, out);
    }
    if modes > 0 {
        rec(&mut current, 0, photons, &mut out);
    }
    out
}

/// A joint state with variable local photon number, stored as one
/// amplitude block per partition `(N_A, M - N_A)`.
///
/// Blocks are not normalized individually: the squared norm of the block
/// for `N_A` is the probability of that partition. Coherences between
/// blocks are kept even though photon counting cannot see them.
#[derive(Debug, Clone)]
pub struct StratifiedState {
    modes: usize,
    strata: BTreeMap<usize, PureState>,
}

impl StratifiedState {
    pub fn new(modes: usize, strata: BTreeMap<usize, PureState>) -> Result<Self> {
        for (&n_a, block) in &strata {
            let (a, b) = block.joint_bases()?;
            if a.modes() != modes || b.modes() != modes || a.photons() != n_a {
                return Err(domain(format!("stratum {n_a} has inconsistent bases")));
            }
        }
        Ok(StratifiedState { modes, strata })
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn strata(&self) -> &BTreeMap<usize, PureState> {
        &self.strata
    }

    pub fn stratum(&self, photons_a: usize) -> Option<&PureState> {
        self.strata.get(&photons_a)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.strata.values().map(PureState::norm_sqr).sum()
    }

    /// Probability of finding `photons_a` photons in `A`.
    pub fn partition_probability(&self, photons_a: usize) -> f64 {
        self.stratum(photons_a).map_or(0.0, PureState::norm_sqr) / self.norm_sqr()
    }

    /// The normalized state conditioned on `photons_a` photons in `A`.
    pub fn project(&self, photons_a: usize) -> Result<PureState> {
        self.stratum(photons_a)
            .ok_or_else(|| domain(format!("no stratum with {photons_a} photons in A")))?
            .clone()
            .normalized()
    }

    /// Schmidt rank across all strata together.
    pub fn schmidt_rank(&self) -> Result<usize> {
        let mut row_offset = BTreeMap::new();
        let mut col_offset = BTreeMap::new();
        let (mut rows, mut cols) = (0, 0);
        for block in self.strata.values() {
            let (a, b) = block.joint_bases()?;
            row_offset.entry(a.photons()).or_insert_with(|| {
                rows += a.len();
                rows - a.len()
            });
            col_offset.entry(b.photons()).or_insert_with(|| {
                cols += b.len();
                cols - b.len()
            });
        }
        let mut full = DMatrix::zeros(rows, cols);
        for block in self.strata.values() {
            let (a, b) = block.joint_bases()?;
            let (r0, c0) = (row_offset[&a.photons()], col_offset[&b.photons()]);
            let m = block.amplitude_matrix()?;
            full.view_mut((r0, c0), (a.len(), b.len())).copy_from(&m);
        }
        Ok(matrix_rank(&full))
    }
}

/// `(|1>|0> + |0>|1>)^{(x) M} / 2^{M/2}`, the state after beam-splitting `M`
/// single photons.
pub fn generate_psi(modes: usize) -> Result<StratifiedState> {
    if modes == 0 || modes > MAX_GENERATED_MODES {
        return Err(Error::Resource(format!(
            "generate_psi supports 1..={MAX_GENERATED_MODES} modes, got {modes}"
        )));
    }
    let amplitude = Complex64::new(0.5f64.powf(modes as f64 / 2.0), 0.0);
    let mut strata = BTreeMap::new();
    for n_a in 0..=modes {
        let basis_a = Arc::new(FockBasis::new(modes, n_a)?);
        let basis_b = Arc::new(FockBasis::new(modes, modes - n_a)?);
        let dim = basis_a.len() * basis_b.len();
        if dim > MAX_STRATUM_DIM {
            return Err(Error::Resource(format!(
                "stratum ({n_a}, {}) has joint dimension {dim}",
                modes - n_a
            )));
        }
        strata.insert(
            n_a,
            complementary_superposition(basis_a, basis_b, amplitude)?,
        );
    }
    StratifiedState::new(modes, strata)
}

fn complementary_superposition(
    basis_a: Arc<FockBasis>,
    basis_b: Arc<FockBasis>,
    amplitude: Complex64,
) -> Result<PureState> {
    let db = basis_b.len();
    let mut state = PureState::zeros(Space::Joint(basis_a.clone(), basis_b.clone()));
    for n in binary_patterns(basis_a.modes(), basis_a.photons()) {
        let bar = n.complement().expect("binary pattern");
        let i = basis_a.require_index(&n)? * db + basis_b.require_index(&bar)?;
        state.amplitudes_mut()[i] = amplitude;
    }
    Ok(state)
}

/// `P(N, M-N) = binomial(M, N) / 2^M`, exactly.
pub fn partition_probability_exact(modes: usize, photons_a: usize) -> Result<BigRational> {
    if photons_a > modes {
        return Err(domain(format!(
            "cannot place {photons_a} of {modes} photons in A"
        )));
    }
    let numerator = binomial_big(modes, photons_a);
    let denominator = BigInt::one() << modes;
    Ok(BigRational::new(numerator, denominator))
}

pub fn partition_probability(modes: usize, photons_a: usize) -> Result<f64> {
    Ok(partition_probability_exact(modes, photons_a)?
        .to_f64()
        .unwrap_or(0.0))
}

pub(crate) fn binomial_big(n: usize, k: usize) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Gaussian approximation `sqrt(2/(pi M)) exp(-2 (N - M/2)^2 / M)` of the
/// partition probability.
pub fn gaussian_partition_estimate(modes: usize, photons_a: usize) -> f64 {
    let m = modes as f64;
    let offset = photons_a as f64 - m / 2.0;
    (2.0 / (std::f64::consts::PI * m)).sqrt() * (-2.0 * offset * offset / m).exp()
}

/// The normalized state of the `(N, M-N)` partition: amplitude
/// `1/sqrt(binomial(M,N))` on every `|n>|1-n>` with `|n| = N`.
pub fn phi_partition(modes: usize, photons_a: usize) -> Result<PureState> {
    if modes == 0 || photons_a > modes {
        return Err(domain(format!(
            "no ({photons_a}, {}) partition of {modes} photons",
            modes as i64 - photons_a as i64
        )));
    }
    let basis_a = Arc::new(FockBasis::new(modes, photons_a)?);
    let basis_b = Arc::new(FockBasis::new(modes, modes - photons_a)?);
    let count = binary_patterns(modes, photons_a).len() as f64;
    complementary_superposition(basis_a, basis_b, Complex64::new(count.sqrt().recip(), 0.0))
}

/// Number of singular values of the amplitude matrix above
/// [`SCHMIDT_TOLERANCE`].
pub fn schmidt_rank(state: &PureState) -> Result<usize> {
    Ok(matrix_rank(&state.amplitude_matrix()?))
}

fn matrix_rank(m: &DMatrix<Complex64>) -> usize {
    // Rows and columns that vanish identically do not change the rank.
    let rows: Vec<usize> = (0..m.nrows())
        .filter(|&r| m.row(r).iter().any(|c| c.norm() > 0.0))
        .collect();
    let cols: Vec<usize> = (0..m.ncols())
        .filter(|&c| m.column(c).iter().any(|x| x.norm() > 0.0))
        .collect();
    if rows.is_empty() || cols.is_empty() {
        return 0;
    }
    let reduced = DMatrix::from_fn(rows.len(), cols.len(), |i, j| m[(rows[i], cols[j])]);
    reduced
        .singular_values()
        .iter()
        .filter(|&&s| s > SCHMIDT_TOLERANCE)
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::joint_probability;

    fn pat(s: &str) -> PhotonPattern {
        s.parse().unwrap()
    }

    #[test]
    fn binary_patterns_count() {
        assert_eq!(binary_patterns(4, 2).len(), 6);
        assert_eq!(binary_patterns(5, 0), vec![pat("00000")]);
        assert!(binary_patterns(3, 4).is_empty());
    }

    #[test]
    fn single_mode_psi_is_bell_type() {
        let psi = generate_psi(1).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let s0 = psi.stratum(0).unwrap();
        let s1 = psi.stratum(1).unwrap();
        assert_eq!(s0.amplitudes(), &[Complex64::new(h, 0.0)]);
        assert_eq!(s1.amplitudes(), &[Complex64::new(h, 0.0)]);
        assert!((psi.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn two_mode_psi_has_four_terms() {
        let psi = generate_psi(2).unwrap();
        let terms: usize = psi
            .strata()
            .values()
            .map(|s| s.amplitudes().iter().filter(|c| c.norm() > 0.0).count())
            .sum();
        assert_eq!(terms, 4);
        for s in psi.strata().values() {
            for c in s.amplitudes().iter().filter(|c| c.norm() > 0.0) {
                assert!((c.re - 0.5).abs() < 1e-15);
            }
        }
        let p = joint_probability(psi.stratum(1).unwrap(), &pat("01"), &pat("10")).unwrap();
        assert!((p - 0.25).abs() < 1e-15);
    }

    #[test]
    fn four_mode_partition_amplitudes() {
        let psi = generate_psi(4).unwrap();
        let expected = [1.0, 2.0, 6f64.sqrt(), 2.0, 1.0];
        for (n, e) in expected.iter().enumerate() {
            assert!((psi.stratum(n).unwrap().norm() - e / 4.0).abs() < 1e-12);
        }
    }

    #[test]
    fn mode_range_is_enforced() {
        assert!(matches!(generate_psi(0), Err(Error::Resource(_))));
        assert!(matches!(generate_psi(13), Err(Error::Resource(_))));
    }

    #[test]
    fn exact_partition_probabilities() {
        assert_eq!(
            partition_probability_exact(4, 2).unwrap(),
            BigRational::new(3.into(), 8.into())
        );
        assert_eq!(partition_probability(4, 0).unwrap(), 1.0 / 16.0);
        assert!(partition_probability(4, 5).is_err());
        for m in [1, 7, 64, 80] {
            let total: BigRational = (0..=m)
                .map(|n| partition_probability_exact(m, n).unwrap())
                .sum();
            assert!(total.is_one());
        }
    }

    #[test]
    fn gaussian_estimate_values() {
        assert!((gaussian_partition_estimate(4, 2) - 0.3989422804014327).abs() < 1e-12);
        for n in 0..=10 {
            let d = gaussian_partition_estimate(10, n) - gaussian_partition_estimate(10, 10 - n);
            assert!(d.abs() < 1e-15);
        }
        let exact = partition_probability(100, 50).unwrap();
        let rel = (gaussian_partition_estimate(100, 50) - exact).abs() / exact;
        assert!(rel < 0.01, "relative error {rel}");
    }

    #[test]
    fn phi_examples() {
        let phi = phi_partition(4, 2).unwrap();
        let nonzero: Vec<_> = phi.amplitudes().iter().filter(|c| c.norm() > 0.0).collect();
        assert_eq!(nonzero.len(), 6);
        for c in nonzero {
            assert!((c.re - 1.0 / 6f64.sqrt()).abs() < 1e-15);
        }
        let bell = phi_partition(2, 1).unwrap();
        let p = joint_probability(&bell, &pat("10"), &pat("01")).unwrap();
        assert!((p - 0.5).abs() < 1e-15);
        let single = phi_partition(4, 0).unwrap();
        assert_eq!(
            joint_probability(&single, &pat("0000"), &pat("1111")).unwrap(),
            1.0
        );
        assert!(phi_partition(3, 4).is_err());
    }

    #[test]
    fn schmidt_ranks() {
        assert_eq!(schmidt_rank(&phi_partition(4, 2).unwrap()).unwrap(), 6);
        assert_eq!(schmidt_rank(&phi_partition(4, 0).unwrap()).unwrap(), 1);
        for m in 1..=5 {
            assert_eq!(generate_psi(m).unwrap().schmidt_rank().unwrap(), 1 << m);
        }
    }

    #[test]
    fn projection_matches_phi() {
        for m in 1..=5 {
            let psi = generate_psi(m).unwrap();
            for n in 0..=m {
                let projected = psi.project(n).unwrap();
                let phi = phi_partition(m, n).unwrap();
                assert!(projected.max_distance(&phi) < 1e-12);
                let exact = partition_probability(m, n).unwrap();
                assert!((psi.partition_probability(n) - exact).abs() < 1e-12);
            }
        }
    }
}
