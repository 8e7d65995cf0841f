//! Correlation fidelities and entanglement witnesses for a fixed photon
//! partition `(N, M-N)`.
//!
//! Two measurement settings are compared. In the input modes the ideal
//! state only produces complementary pairs `(n, 1-n)`; the probability of
//! such pairs is `F_n`. After a DFT in both systems the ideal state only
//! produces outcomes with `K_A + K_B = 0 (mod M)`; their probability is
//! `F_K`. Any separable state satisfies `F_n + F_K <= 1 + 1/min d_p`, and
//! the sharper `F_n - D_p + F_K <= 1` once the pattern class defect `D_p`
//! (the complementary-class mass weighted by `1/d_p`) is subtracted.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::entangle::{binary_patterns, binomial_big, phi_partition};
use crate::error::{domain, Error, Result};
use crate::fock::{FockBasis, PhotonPattern, PureState, QuantumState, Space};
use crate::linop::{self, FockUnitary, ModeUnitary};
use crate::patterns::{class_index, classes, complementary_class, k_value, PatternClass};
use crate::rational::{rational_string, to_f64, Rational};

/// Largest joint dimension for which [`witness_operator`] builds a dense
/// matrix.
pub const MAX_OPERATOR_DIM: usize = 4096;

/// A witness value must exceed this before a state is reported as
/// entangled, so that round-off on a saturating separable state is not
/// read as a violation.
pub const DECISION_MARGIN: f64 = 1e-10;

/// Precomputed structure of one `(N, M-N)` partition: bases, DFT lifts,
/// K-values and pattern classes of both sides.
#[derive(Debug, Clone)]
pub struct Partition {
    modes: usize,
    basis_a: Arc<FockBasis>,
    basis_b: Arc<FockBasis>,
    dft_a: FockUnitary,
    dft_b: FockUnitary,
    k_a: Vec<usize>,
    k_b: Vec<usize>,
    classes_a: Vec<PatternClass>,
    class_of_a: Vec<usize>,
    class_of_b: Vec<usize>,
    /// Classes of `A` with a complement, paired with the index of that
    /// complement among the classes of `B`.
    complementary: Vec<(usize, usize)>,
    /// Joint indices of the pairs `(n, 1-n)`.
    correlated: Vec<usize>,
    /// Joint indices whose DFT outcomes satisfy `K_A + K_B = 0`.
    k_correlated: Vec<usize>,
    /// Joint index and `1/d_p` for every entry of a complementary class pair.
    defect_weights: Vec<(usize, f64)>,
}

impl Partition {
    pub fn new(modes: usize, photons_a: usize) -> Result<Self> {
        if modes == 0 || photons_a > modes {
            return Err(domain(format!(
                "no ({photons_a}, {}) partition of {modes} photons",
                modes as i64 - photons_a as i64
            )));
        }
        let basis_a = Arc::new(FockBasis::new(modes, photons_a)?);
        let basis_b = Arc::new(FockBasis::new(modes, modes - photons_a)?);
        Self::from_bases(basis_a, basis_b)
    }

    /// The partition a joint state lives on. Both systems must have the
    /// same mode count `M` and hold `M` photons together.
    pub fn of_state<S: QuantumState>(state: &S) -> Result<Self> {
        match state.space() {
            Space::Joint(a, b) => Self::from_bases(a.clone(), b.clone()),
            Space::Local(_) => Err(domain("witnesses need a joint state")),
        }
    }

    fn from_bases(basis_a: Arc<FockBasis>, basis_b: Arc<FockBasis>) -> Result<Self> {
        let modes = basis_a.modes();
        if basis_b.modes() != modes || basis_a.photons() + basis_b.photons() != modes {
            return Err(domain(format!(
                "bases ({} modes, {} photons) and ({} modes, {} photons) do not form a partition of M photons in M modes",
                modes,
                basis_a.photons(),
                basis_b.modes(),
                basis_b.photons()
            )));
        }
        let dft = ModeUnitary::dft(modes);
        let dft_a = linop::lift(&dft, basis_a.clone())?;
        let dft_b = linop::lift(&dft, basis_b.clone())?;
        let k_a: Vec<usize> = basis_a.patterns().iter().map(k_value).collect();
        let k_b: Vec<usize> = basis_b.patterns().iter().map(k_value).collect();
        let classes_a = classes(&basis_a);
        let classes_b = classes(&basis_b);
        let class_of_a = class_index(&basis_a, &classes_a);
        let class_of_b = class_index(&basis_b, &classes_b);
        let db = basis_b.len();

        let complementary: Vec<(usize, usize)> = classes_a
            .iter()
            .enumerate()
            .filter_map(|(i, c)| {
                let bar = complementary_class(c)?;
                let j = classes_b.iter().position(|cb| *cb == bar)?;
                Some((i, j))
            })
            .collect();

        let correlated = binary_patterns(modes, basis_a.photons())
            .iter()
            .map(|n| {
                let bar = n.complement().expect("binary");
                Ok(basis_a.require_index(n)? * db + basis_b.require_index(&bar)?)
            })
            .collect::<Result<Vec<_>>>()?;

        let mut k_correlated = Vec::new();
        let mut defect_weights = Vec::new();
        for a in 0..basis_a.len() {
            for b in 0..db {
                if (k_a[a] + k_b[b]).is_multiple_of(modes) {
                    k_correlated.push(a * db + b);
                }
                let pair = complementary
                    .iter()
                    .find(|&&(ca, cb)| ca == class_of_a[a] && cb == class_of_b[b]);
                if let Some(&(ca, _)) = pair {
                    let d = classes_a[ca].cardinality() as f64;
                    defect_weights.push((a * db + b, 1.0 / d));
                }
            }
        }

        Ok(Partition {
            modes,
            basis_a,
            basis_b,
            dft_a,
            dft_b,
            k_a,
            k_b,
            classes_a,
            class_of_a,
            class_of_b,
            complementary,
            correlated,
            k_correlated,
            defect_weights,
        })
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn photons_a(&self) -> usize {
        self.basis_a.photons()
    }

    pub fn basis_a(&self) -> &Arc<FockBasis> {
        &self.basis_a
    }

    pub fn basis_b(&self) -> &Arc<FockBasis> {
        &self.basis_b
    }

    pub fn joint_space(&self) -> Space {
        Space::Joint(self.basis_a.clone(), self.basis_b.clone())
    }

    pub fn joint_dim(&self) -> usize {
        self.basis_a.len() * self.basis_b.len()
    }

    pub fn classes_a(&self) -> &[PatternClass] {
        &self.classes_a
    }

    /// K-values of the `A` and `B` bases, in basis order.
    pub fn k_values(&self) -> (&[usize], &[usize]) {
        (&self.k_a, &self.k_b)
    }

    /// Local DFT lifts of `A` and `B`.
    pub fn dft_lifts(&self) -> (&FockUnitary, &FockUnitary) {
        (&self.dft_a, &self.dft_b)
    }

    fn check<S: QuantumState>(&self, state: &S) -> Result<()> {
        if state.space().same_structure(&self.joint_space()) {
            Ok(())
        } else {
            Err(domain("state does not live on this partition"))
        }
    }

    /// Joint distribution after `U_F (x) U_F`.
    pub fn dft_distribution<S: QuantumState>(&self, state: &S) -> Result<Vec<f64>> {
        self.check(state)?;
        let mut out = vec![0.0; self.joint_dim()];
        for (w, s) in state.components() {
            let transformed = linop::apply_lifted_pair(&self.dft_a, &self.dft_b, s)?;
            for (p, c) in out.iter_mut().zip(transformed.amplitudes()) {
                *p += w * c.norm_sqr();
            }
        }
        Ok(out)
    }

    /// Joint distribution in the input modes.
    pub fn input_distribution<S: QuantumState>(&self, state: &S) -> Result<Vec<f64>> {
        self.check(state)?;
        Ok(crate::fock::distribution(state))
    }

    /// `F_n`: probability of complementary input patterns.
    pub fn fidelity_input<S: QuantumState>(&self, state: &S) -> Result<f64> {
        let p = self.input_distribution(state)?;
        Ok(self.correlated.iter().map(|&i| p[i]).sum())
    }

    /// `F_K`: probability of `K_A + K_B = 0 (mod M)` after local DFTs.
    pub fn fidelity_dft<S: QuantumState>(&self, state: &S) -> Result<f64> {
        let p = self.dft_distribution(state)?;
        Ok(self.k_correlated.iter().map(|&i| p[i]).sum())
    }

    /// `D_p`: sum over complementary class pairs of `P(p, p-bar) / d_p`.
    pub fn pattern_defect<S: QuantumState>(&self, state: &S) -> Result<f64> {
        let p = self.input_distribution(state)?;
        Ok(self.defect_weights.iter().map(|&(i, w)| w * p[i]).sum())
    }

    /// Input-basis probability `P(p, p-bar)` of each complementary class pair.
    pub fn complementary_masses<S: QuantumState>(
        &self,
        state: &S,
    ) -> Result<Vec<(PatternClass, f64)>> {
        let p = self.input_distribution(state)?;
        let db = self.basis_b.len();
        Ok(self
            .complementary
            .iter()
            .map(|&(ca, cb)| {
                let mut mass = 0.0;
                for (i, pi) in p.iter().enumerate() {
                    if self.class_of_a[i / db] == ca && self.class_of_b[i % db] == cb {
                        mass += pi;
                    }
                }
                (self.classes_a[ca].clone(), mass)
            })
            .collect())
    }

    /// `1 + 1 / min d_p` over all classes of `A`.
    pub fn basic_bound(&self) -> Rational {
        let min_d = self
            .classes_a
            .iter()
            .map(PatternClass::cardinality)
            .min()
            .expect("a basis has at least one class");
        Rational::new(1 + min_d as i64, min_d as i64)
    }

    pub fn evaluate<S: QuantumState>(&self, state: &S) -> Result<WitnessReport> {
        let f_n = self.fidelity_input(state)?;
        let f_k = self.fidelity_dft(state)?;
        let d_p = self.pattern_defect(state)?;
        Ok(self.report(f_n, f_k, d_p))
    }

    /// Same as evaluating `MixedEnsemble::maximally_mixed`, in `O(D)`: local
    /// unitaries leave `1/D` unchanged, so every statistic is a count.
    pub fn evaluate_white_noise(&self) -> WitnessReport {
        let dim = self.joint_dim() as f64;
        let f_n = self.correlated.len() as f64 / dim;
        let f_k = self.k_correlated.len() as f64 / dim;
        let d_p = self.defect_weights.iter().map(|&(_, w)| w).sum::<f64>() / dim;
        self.report(f_n, f_k, d_p)
    }

    fn report(&self, f_n: f64, f_k: f64, d_p: f64) -> WitnessReport {
        let basic_bound = self.basic_bound();
        let optimized_lhs = f_n - d_p + f_k;
        let witness_value = optimized_lhs - 1.0;
        WitnessReport {
            modes: self.modes,
            photons_a: self.photons_a(),
            f_n,
            f_k,
            d_p,
            basic_bound: to_f64(basic_bound),
            basic_bound_exact: basic_bound.to_string(),
            optimized_lhs,
            witness_value,
            entangled_by_basic: f_n + f_k > to_f64(basic_bound) + DECISION_MARGIN,
            entangled_by_optimized: witness_value > DECISION_MARGIN,
        }
    }

    /// Projector onto outcomes with `K_A + K_B = 0` after the DFTs, pulled
    /// back to the input modes: `sum_K Q_A(K) (x) Q_B(-K)` with
    /// `Q(K) = U_F^dagger P_K U_F`.
    fn k_correlation_operator(&self) -> DMatrix<Complex64> {
        let m = self.modes;
        let qa: Vec<_> = (0..m).map(|k| k_projector(&self.dft_a, &self.k_a, k)).collect();
        let qb: Vec<_> = (0..m).map(|k| k_projector(&self.dft_b, &self.k_b, k)).collect();
        let mut out = DMatrix::zeros(self.joint_dim(), self.joint_dim());
        for k in 0..m {
            out += qa[k].kronecker(&qb[(m - k) % m]);
        }
        out
    }

    /// `W = C_n - C_p + C_K - 1` as a dense Hermitian matrix.
    pub fn witness_operator(&self) -> Result<DMatrix<Complex64>> {
        let dim = self.joint_dim();
        if dim > MAX_OPERATOR_DIM {
            return Err(Error::Resource(format!(
                "witness operator of dimension {dim} exceeds {MAX_OPERATOR_DIM}"
            )));
        }
        let mut w = self.k_correlation_operator();
        for i in 0..dim {
            w[(i, i)] -= Complex64::new(1.0, 0.0);
        }
        for &i in &self.correlated {
            w[(i, i)] += Complex64::new(1.0, 0.0);
        }
        for &(i, weight) in &self.defect_weights {
            w[(i, i)] -= Complex64::new(weight, 0.0);
        }
        Ok(w)
    }

    /// `F_n + F_K - D_p` of the ideal partition state, exactly:
    /// `2 - (number of complementary classes) / binomial(M, N)`.
    pub fn ideal_optimized_lhs(&self) -> Rational {
        let count = binomial_big(self.modes, self.photons_a());
        let count: i64 = count.try_into().expect("binomial fits in i64");
        Rational::from_integer(2) - Rational::new(self.complementary.len() as i64, count)
    }

    /// Largest `1/d_p` over complementary classes.
    pub fn max_defect_weight(&self) -> Rational {
        let min_d = self
            .complementary
            .iter()
            .map(|&(ca, _)| self.classes_a[ca].cardinality())
            .min()
            .expect("every partition has a binary class");
        Rational::new(1, min_d as i64)
    }
}

fn k_projector(lift: &FockUnitary, k_values: &[usize], k: usize) -> DMatrix<Complex64> {
    let l = lift.matrix();
    let d = l.nrows();
    let rows: Vec<usize> = (0..d).filter(|&r| k_values[r] == k).collect();
    let selected = DMatrix::from_fn(rows.len(), d, |i, j| l[(rows[i], j)]);
    selected.adjoint() * selected
}

/// Everything the two criteria report about one state.
#[derive(Debug, Clone, Serialize)]
pub struct WitnessReport {
    pub modes: usize,
    pub photons_a: usize,
    #[serde(rename = "F_n")]
    pub f_n: f64,
    #[serde(rename = "F_K")]
    pub f_k: f64,
    #[serde(rename = "D_p")]
    pub d_p: f64,
    pub basic_bound: f64,
    pub basic_bound_exact: String,
    pub optimized_lhs: f64,
    pub witness_value: f64,
    pub entangled_by_basic: bool,
    pub entangled_by_optimized: bool,
}

impl WitnessReport {
    /// JSON object with an `*_exact` rational string next to each
    /// probability-valued field (`null` when no small fraction matches).
    pub fn to_json(&self) -> serde_json::Value {
        let mut v = serde_json::to_value(self).expect("plain struct");
        let obj = v.as_object_mut().expect("object");
        for (key, x) in [
            ("F_n", self.f_n),
            ("F_K", self.f_k),
            ("D_p", self.d_p),
            ("optimized_lhs", self.optimized_lhs),
            ("witness_value", self.witness_value),
        ] {
            obj.insert(format!("{key}_exact"), serde_json::json!(rational_string(x)));
        }
        v
    }
}

pub fn fidelity_input<S: QuantumState>(state: &S) -> Result<f64> {
    Partition::of_state(state)?.fidelity_input(state)
}

pub fn fidelity_dft<S: QuantumState>(state: &S) -> Result<f64> {
    Partition::of_state(state)?.fidelity_dft(state)
}

pub fn pattern_defect<S: QuantumState>(state: &S) -> Result<f64> {
    Partition::of_state(state)?.pattern_defect(state)
}

pub fn evaluate<S: QuantumState>(state: &S) -> Result<WitnessReport> {
    Partition::of_state(state)?.evaluate(state)
}

/// `1 + 1/min d_p` over all classes of `N` photons in `M` modes.
pub fn basic_bound(modes: usize, photons_a: usize) -> Result<Rational> {
    if photons_a == 0 || photons_a >= modes {
        return Err(domain(format!(
            "the separable bound needs 1 <= N <= M-1, got N = {photons_a}, M = {modes}"
        )));
    }
    let basis = FockBasis::new(modes, photons_a)?;
    let min_d = classes(&basis)
        .iter()
        .map(PatternClass::cardinality)
        .min()
        .expect("non-empty basis");
    Ok(Rational::new(1 + min_d as i64, min_d as i64))
}

pub fn witness_operator(modes: usize, photons_a: usize) -> Result<DMatrix<Complex64>> {
    Partition::new(modes, photons_a)?.witness_operator()
}

/// `<W>` from a dense operator, averaged over the ensemble.
pub fn operator_expectation<S: QuantumState>(op: &DMatrix<Complex64>, state: &S) -> f64 {
    state.average(|s| {
        let v = DVector::from_column_slice(s.amplitudes());
        (v.adjoint() * op * &v)[(0, 0)].re
    })
}

/// Largest eigenvalue of a Hermitian matrix.
pub fn max_eigenvalue(op: &DMatrix<Complex64>) -> f64 {
    op.clone()
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Witness value `slope * p + offset` of `p |phi><phi| + (1-p) 1/D`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct MixtureLaw {
    pub slope: f64,
    pub offset: f64,
    /// Smallest ideal-state weight `p` with a positive witness value.
    pub threshold: f64,
}

impl MixtureLaw {
    pub fn at(&self, p: f64) -> f64 {
        self.slope * p + self.offset
    }
}

pub fn mixture_threshold(modes: usize, photons_a: usize) -> Result<MixtureLaw> {
    let partition = Partition::new(modes, photons_a)?;
    let ideal = partition.evaluate(&phi_partition(modes, photons_a)?)?;
    let random = partition.evaluate_white_noise();
    let slope = ideal.witness_value - random.witness_value;
    let offset = random.witness_value;
    Ok(MixtureLaw {
        slope,
        offset,
        threshold: -offset / slope,
    })
}

/// State fidelities above which the two criteria are guaranteed to detect
/// entanglement, assuming the worst possible error statistics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FidelityThresholds {
    pub basic: Rational,
    pub tight: Rational,
}

impl FidelityThresholds {
    pub fn basic_f64(&self) -> f64 {
        to_f64(self.basic)
    }

    pub fn tight_f64(&self) -> f64 {
        to_f64(self.tight)
    }
}

/// The basic criterion needs `2F > 1 + 1/min d_p`. The optimized one
/// needs `F L + (1-F) e > 1`, where `L` is the ideal-state value of
/// `F_n - D_p + F_K` and `e = -max 1/d_p` is the worst value an error
/// component can contribute.
pub fn state_fidelity_thresholds(modes: usize, photons_a: usize) -> Result<FidelityThresholds> {
    let basic = basic_bound(modes, photons_a)? / 2;
    let partition = Partition::new(modes, photons_a)?;
    let ideal = partition.ideal_optimized_lhs();
    let worst = -partition.max_defect_weight();
    let one = Rational::from_integer(1);
    let tight = (one - worst) / (ideal - worst);
    Ok(FidelityThresholds { basic, tight })
}

/// Haar-like random pure state: normalized complex Gaussian amplitudes on
/// the given support patterns (the whole basis when `support` is `None`).
pub fn random_pure_state<R: Rng>(
    basis: Arc<FockBasis>,
    support: Option<&[PhotonPattern]>,
    rng: &mut R,
) -> Result<PureState> {
    let mut state = PureState::zeros(Space::Local(basis.clone()));
    let indices: Vec<usize> = match support {
        Some(s) => s.iter().map(|p| basis.require_index(p)).collect::<Result<_>>()?,
        None => (0..basis.len()).collect(),
    };
    for i in indices {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        state.amplitudes_mut()[i] = Complex64::new(re, im);
    }
    state.normalized()
}

/// Seed of sample `index` in a reproducible run with base seed `seed`.
pub fn sample_seed(seed: u64, index: u64) -> u64 {
    seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Summary of the witness over random product states.
#[derive(Debug, Clone, Serialize)]
pub struct SeparableSample {
    pub samples: usize,
    pub seed: u64,
    pub max_witness_value: f64,
    pub max_basic_lhs: f64,
}

/// Evaluates the witness on `samples` random pure product states.
pub fn sample_separable(
    modes: usize,
    photons_a: usize,
    samples: usize,
    seed: u64,
) -> Result<SeparableSample> {
    let partition = Partition::new(modes, photons_a)?;
    let mut max_witness_value = f64::NEG_INFINITY;
    let mut max_basic_lhs = f64::NEG_INFINITY;
    for i in 0..samples {
        let mut rng = ChaCha8Rng::seed_from_u64(sample_seed(seed, i as u64));
        let a = random_pure_state(partition.basis_a().clone(), None, &mut rng)?;
        let b = random_pure_state(partition.basis_b().clone(), None, &mut rng)?;
        let report = partition.evaluate(&crate::fock::tensor(&a, &b)?)?;
        max_witness_value = max_witness_value.max(report.witness_value);
        max_basic_lhs = max_basic_lhs.max(report.f_n + report.f_k);
    }
    Ok(SeparableSample {
        samples,
        seed,
        max_witness_value,
        max_basic_lhs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{mix, tensor, MixedEnsemble};

    fn pat(s: &str) -> PhotonPattern {
        s.parse().unwrap()
    }

    fn product(a: &str, b: &str) -> PureState {
        let a = pat(a);
        let b = pat(b);
        let ba = Arc::new(FockBasis::new(a.modes(), a.photons()).unwrap());
        let bb = Arc::new(FockBasis::new(b.modes(), b.photons()).unwrap());
        PureState::joint_basis_state(ba, bb, &a, &b).unwrap()
    }

    #[test]
    fn ideal_state_report() {
        let r = evaluate(&phi_partition(4, 2).unwrap()).unwrap();
        assert!((r.f_n - 1.0).abs() < 1e-12);
        assert!((r.f_k - 1.0).abs() < 1e-12);
        assert!((r.d_p - 1.0 / 3.0).abs() < 1e-12);
        assert!((r.optimized_lhs - 5.0 / 3.0).abs() < 1e-12);
        assert!((r.witness_value - 2.0 / 3.0).abs() < 1e-12);
        assert!(r.entangled_by_basic && r.entangled_by_optimized);
        let json = r.to_json();
        assert_eq!(json["optimized_lhs_exact"], "5/3");
        assert_eq!(json["basic_bound_exact"], "3/2");
    }

    #[test]
    fn product_state_saturates_bound() {
        let r = evaluate(&product("1100", "0011")).unwrap();
        assert!((r.f_n - 1.0).abs() < 1e-12);
        assert!((r.f_k - 0.25).abs() < 1e-12);
        assert!((r.d_p - 0.25).abs() < 1e-12);
        assert!((r.optimized_lhs - 1.0).abs() < 1e-12);
        assert!(!r.entangled_by_optimized);
        assert!(!r.entangled_by_basic);
    }

    #[test]
    fn random_state_report() {
        let p = Partition::new(4, 2).unwrap();
        let rho = MixedEnsemble::maximally_mixed(p.joint_space());
        let r = p.evaluate(&rho).unwrap();
        assert!((r.f_n - 0.06).abs() < 1e-12);
        assert!((r.f_k - 0.26).abs() < 1e-12);
        assert!((r.d_p - 0.06).abs() < 1e-12);
        assert!((r.witness_value + 0.74).abs() < 1e-12);
    }

    #[test]
    fn white_noise_shortcut_matches_direct_evaluation() {
        for (m, n) in [(3, 1), (4, 2), (5, 2), (4, 3)] {
            let p = Partition::new(m, n).unwrap();
            let direct = p.evaluate(&MixedEnsemble::maximally_mixed(p.joint_space())).unwrap();
            let fast = p.evaluate_white_noise();
            assert!((direct.f_n - fast.f_n).abs() < 1e-12);
            assert!((direct.f_k - fast.f_k).abs() < 1e-12);
            assert!((direct.d_p - fast.d_p).abs() < 1e-12);
        }
    }

    #[test]
    fn non_partition_states_are_rejected() {
        let s = product("1100", "0001");
        assert!(evaluate(&s).is_err());
        let b = Arc::new(FockBasis::new(4, 2).unwrap());
        let local = PureState::basis_state(b, &pat("1100")).unwrap();
        assert!(evaluate(&local).is_err());
    }

    #[test]
    fn basic_bounds() {
        assert_eq!(basic_bound(4, 2).unwrap(), Rational::new(3, 2));
        assert_eq!(basic_bound(5, 2).unwrap(), Rational::new(6, 5));
        assert_eq!(basic_bound(7, 3).unwrap(), Rational::new(8, 7));
        assert_eq!(basic_bound(6, 1).unwrap(), Rational::new(7, 6));
        assert_eq!(basic_bound(6, 2).unwrap(), Rational::new(4, 3));
        assert!(basic_bound(4, 0).is_err());
        assert!(basic_bound(4, 4).is_err());
    }

    #[test]
    fn operator_matches_statistics() {
        let p = Partition::new(4, 2).unwrap();
        let w = p.witness_operator().unwrap();
        assert!((&w - w.adjoint()).iter().all(|c| c.norm() < 1e-12));
        let phi = phi_partition(4, 2).unwrap();
        assert!((operator_expectation(&w, &phi) - 2.0 / 3.0).abs() < 1e-10);
        let rho = mix(vec![(0.3, phi), (0.7, product("1010", "0101"))]).unwrap();
        let direct = p.evaluate(&rho).unwrap().witness_value;
        assert!((operator_expectation(&w, &rho) - direct).abs() < 1e-10);
        assert!((max_eigenvalue(&w) - 0.75).abs() < 1e-9);
    }

    #[test]
    fn mixture_law_at_four_modes() {
        let law = mixture_threshold(4, 2).unwrap();
        assert!((law.offset + 0.74).abs() < 1e-12);
        assert!((law.slope - (2.0 / 3.0 + 0.74)).abs() < 1e-12);
        assert!((law.at(1.0) - 2.0 / 3.0).abs() < 1e-12);
        assert!((law.threshold - 0.74 / (2.0 / 3.0 + 0.74)).abs() < 1e-12);
    }

    #[test]
    fn fidelity_thresholds_at_four_modes() {
        let t = state_fidelity_thresholds(4, 2).unwrap();
        assert_eq!(t.basic, Rational::new(3, 4));
        assert_eq!(t.tight, Rational::new(9, 13));
        assert!(t.tight <= t.basic);
    }

    #[test]
    fn sampling_is_reproducible() {
        let a = sample_separable(4, 2, 20, 7).unwrap();
        let b = sample_separable(4, 2, 20, 7).unwrap();
        assert_eq!(a.max_witness_value, b.max_witness_value);
        assert!(a.max_witness_value <= 1e-9);
    }

    #[test]
    fn product_of_local_states_is_separable() {
        let b = Arc::new(FockBasis::new(4, 2).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let x = random_pure_state(b.clone(), None, &mut rng).unwrap();
        let y = random_pure_state(b, None, &mut rng).unwrap();
        let r = evaluate(&tensor(&x, &y).unwrap()).unwrap();
        assert!(r.witness_value < 0.0);
    }
}
