//! Mode unitaries and their action on multi-photon Fock states.
//!
//! A [`ModeUnitary`] is the `M x M` single-photon transfer matrix `T`: a
//! photon entering mode `m` leaves in the superposition `sum_k T[k][m] |k>`.
//! The amplitude between Fock states is a permanent of a submatrix of `T`
//! with repeated rows and columns, see [`fock_amplitude`].

use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{domain, Error, Result};
use crate::fock::{FockBasis, PhotonPattern, PureState, Space};

/// Above this local dimension [`apply`] never materializes the Fock lift.
pub const DENSE_LIFT_LIMIT: usize = 512;

/// Largest matrix [`permanent`] accepts; Ryser is exponential in the size.
pub const MAX_PERMANENT_SIZE: usize = 30;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Permanent by Ryser's formula, visiting column subsets in Gray-code order
/// so each step adds or removes one column from the running row sums.
pub fn permanent(a: &DMatrix<Complex64>) -> Result<Complex64> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(domain(format!(
            "permanent of a non-square {}x{} matrix",
            n,
            a.ncols()
        )));
    }
    if n > MAX_PERMANENT_SIZE {
        return Err(Error::Resource(format!("permanent of a {n}x{n} matrix")));
    }
    Ok(ryser(a))
}

fn ryser(a: &DMatrix<Complex64>) -> Complex64 {
    let n = a.nrows();
    match n {
        0 => return ONE,
        1 => return a[(0, 0)],
        2 => return a[(0, 0)] * a[(1, 1)] + a[(0, 1)] * a[(1, 0)],
        _ => {}
    }
    let mut row_sums = vec![ZERO; n];
    let mut total = ZERO;
    let mut gray: u64 = 0;
    for k in 1u64..(1u64 << n) {
        let col = k.trailing_zeros() as usize;
        let bit = 1u64 << col;
        gray ^= bit;
        if gray & bit != 0 {
            for (i, s) in row_sums.iter_mut().enumerate() {
                *s += a[(i, col)];
            }
        } else {
            for (i, s) in row_sums.iter_mut().enumerate() {
                *s -= a[(i, col)];
            }
        }
        let product = row_sums.iter().fold(ONE, |acc, s| acc * s);
        // (-1)^(n - |S|)
        if (n as u32 - gray.count_ones()).is_multiple_of(2) {
            total += product;
        } else {
            total -= product;
        }
    }
    total
}

/// Single-photon transfer matrix of a linear-optics network.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeUnitary {
    matrix: DMatrix<Complex64>,
}

impl ModeUnitary {
    /// Wraps `matrix`, checking `T^dagger T = 1` within 1e-10 per entry.
    pub fn from_matrix(matrix: DMatrix<Complex64>) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() || matrix.nrows() == 0 {
            return Err(domain("a mode unitary must be a non-empty square matrix"));
        }
        let u = ModeUnitary { matrix };
        let residual = u.unitarity_residual();
        if residual > 1e-10 {
            return Err(domain(format!("matrix is not unitary (residual {residual:e})")));
        }
        Ok(u)
    }

    pub fn identity(modes: usize) -> Self {
        ModeUnitary {
            matrix: DMatrix::identity(modes, modes),
        }
    }

    /// Discrete Fourier transform, `T[k][m] = exp(+2 pi i k m / M) / sqrt(M)`.
    ///
    /// With this sign the Fock lift `U_F` satisfies `U_F S = D U_F` where
    /// `D` multiplies the output pattern `n` by `exp(2 pi i K(n) / M)`.
    pub fn dft(modes: usize) -> Self {
        let norm = 1.0 / (modes as f64).sqrt();
        let matrix = DMatrix::from_fn(modes, modes, |k, m| {
            let phase = 2.0 * PI * ((k * m) % modes) as f64 / modes as f64;
            Complex64::from_polar(norm, phase)
        });
        ModeUnitary { matrix }
    }

    /// Cyclic mode shift `m -> m + 1 (mod M)`.
    pub fn mode_shift(modes: usize) -> Self {
        let matrix = DMatrix::from_fn(modes, modes, |k, m| {
            if k == (m + 1) % modes {
                ONE
            } else {
                ZERO
            }
        });
        ModeUnitary { matrix }
    }

    /// Balanced beam splitter between modes `a` and `b` of a `modes`-mode
    /// network: `|a> -> (|a> + |b>)/sqrt2`, `|b> -> (|a> - |b>)/sqrt2`.
    pub fn beam_splitter(modes: usize, a: usize, b: usize) -> Result<Self> {
        if a >= modes || b >= modes || a == b {
            return Err(domain(format!(
                "beam splitter between modes {a} and {b} of {modes}"
            )));
        }
        let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let mut matrix = DMatrix::identity(modes, modes);
        matrix[(a, a)] = h;
        matrix[(b, a)] = h;
        matrix[(a, b)] = h;
        matrix[(b, b)] = -h;
        Ok(ModeUnitary { matrix })
    }

    pub fn modes(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    /// `T[k][m]`: amplitude from input mode `m` to output mode `k`.
    pub fn entry(&self, out_mode: usize, in_mode: usize) -> Complex64 {
        self.matrix[(out_mode, in_mode)]
    }

    /// The network that applies `first` and then `self`.
    pub fn after(&self, first: &ModeUnitary) -> Result<Self> {
        if self.modes() != first.modes() {
            return Err(domain("composing mode unitaries of different sizes"));
        }
        Ok(ModeUnitary {
            matrix: &self.matrix * &first.matrix,
        })
    }

    pub fn adjoint(&self) -> Self {
        ModeUnitary {
            matrix: self.matrix.adjoint(),
        }
    }

    pub fn power(&self, exponent: usize) -> Self {
        let mut matrix = DMatrix::identity(self.modes(), self.modes());
        for _ in 0..exponent {
            matrix = &self.matrix * matrix;
        }
        ModeUnitary { matrix }
    }

    pub fn unitarity_residual(&self) -> f64 {
        unitarity_residual(&self.matrix)
    }

    /// Row-major `[re, im]` pairs, the `--dump-unitary` layout.
    pub fn to_json(&self) -> serde_json::Value {
        matrix_to_json(&self.matrix)
    }
}

pub(crate) fn matrix_to_json(matrix: &DMatrix<Complex64>) -> serde_json::Value {
    let rows: Vec<Vec<[f64; 2]>> = matrix
        .row_iter()
        .map(|row| row.iter().map(|c| [c.re, c.im]).collect())
        .collect();
    serde_json::json!(rows)
}

/// Largest entrywise deviation of `A^dagger A` from the identity.
pub fn unitarity_residual(a: &DMatrix<Complex64>) -> f64 {
    let product = a.adjoint() * a;
    let n = product.nrows();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let target = if i == j { ONE } else { ZERO };
            worst = worst.max((product[(i, j)] - target).norm());
        }
    }
    worst
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

fn occupation_norm(p: &PhotonPattern) -> f64 {
    p.occupations().iter().map(|&n| factorial(n)).product()
}

/// `<out| U |in>` for the Fock lift of `u`: the permanent of `T` with row
/// `k` repeated `out[k]` times and column `m` repeated `in[m]` times,
/// divided by `sqrt(prod out[k]! prod in[m]!)`. Zero when photon numbers
/// differ.
pub fn fock_amplitude(u: &ModeUnitary, out: &PhotonPattern, input: &PhotonPattern) -> Complex64 {
    assert_eq!(out.modes(), u.modes(), "output pattern has the wrong mode count");
    assert_eq!(input.modes(), u.modes(), "input pattern has the wrong mode count");
    if out.photons() != input.photons() {
        return ZERO;
    }
    let rows = out.mode_list();
    let cols = input.mode_list();
    let sub = DMatrix::from_fn(rows.len(), cols.len(), |i, j| u.entry(rows[i], cols[j]));
    let norm = (occupation_norm(out) * occupation_norm(input)).sqrt();
    ryser(&sub) / norm
}

/// Image of the basis state `basis[input]`: column `input` of the lift.
pub fn lifted_column(u: &ModeUnitary, basis: &FockBasis, input: usize) -> Vec<Complex64> {
    let inp = basis.pattern(input);
    basis
        .patterns()
        .iter()
        .map(|out| fock_amplitude(u, out, inp))
        .collect()
}

/// `U^dagger |n>` expanded over `basis`.
pub fn preimage(u: &ModeUnitary, basis: Arc<FockBasis>, out: &PhotonPattern) -> Result<PureState> {
    check_modes(u, &basis)?;
    basis.require_index(out)?;
    let amplitudes = basis
        .patterns()
        .iter()
        .map(|inp| fock_amplitude(u, out, inp).conj())
        .collect();
    PureState::new(Space::Local(basis), amplitudes)
}

fn check_modes(u: &ModeUnitary, basis: &FockBasis) -> Result<()> {
    if u.modes() != basis.modes() {
        return Err(domain(format!(
            "{}-mode unitary applied to a {}-mode basis",
            u.modes(),
            basis.modes()
        )));
    }
    Ok(())
}

/// The lift of a mode unitary to the `N`-photon Fock space, as a dense
/// `D x D` matrix indexed in basis order.
#[derive(Debug, Clone)]
pub struct FockUnitary {
    basis: Arc<FockBasis>,
    matrix: DMatrix<Complex64>,
}

impl FockUnitary {
    pub fn basis(&self) -> &Arc<FockBasis> {
        &self.basis
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn unitarity_residual(&self) -> f64 {
        unitarity_residual(&self.matrix)
    }

    pub fn apply_local(&self, state: &PureState) -> Result<PureState> {
        if state.local_basis()?.as_ref() != self.basis.as_ref() {
            return Err(domain("state basis does not match the lift"));
        }
        let v = nalgebra::DVector::from_column_slice(state.amplitudes());
        let out = &self.matrix * v;
        PureState::new(state.space().clone(), out.as_slice().to_vec())
    }
}

/// Materializes the Fock lift of `u` on `basis`.
pub fn lift(u: &ModeUnitary, basis: Arc<FockBasis>) -> Result<FockUnitary> {
    check_modes(u, &basis)?;
    let d = basis.len();
    let mut matrix = DMatrix::zeros(d, d);
    for input in 0..d {
        let column = lifted_column(u, &basis, input);
        for (out, c) in column.into_iter().enumerate() {
            matrix[(out, input)] = c;
        }
    }
    Ok(FockUnitary { basis, matrix })
}

/// Which subsystem of a joint state a local unitary acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    A,
    B,
    Both,
}

/// `L . vectors`, where the columns of `vectors` are expanded over `basis`.
fn act_on_columns(
    u: &ModeUnitary,
    basis: &Arc<FockBasis>,
    vectors: &DMatrix<Complex64>,
) -> Result<DMatrix<Complex64>> {
    check_modes(u, basis)?;
    let d = basis.len();
    if d <= DENSE_LIFT_LIMIT {
        return Ok(lift(u, basis.clone())?.matrix * vectors);
    }
    let mut out = DMatrix::zeros(d, vectors.ncols());
    for input in 0..d {
        let row = vectors.row(input);
        if row.iter().all(|c| *c == ZERO) {
            continue;
        }
        let column = lifted_column(u, basis, input);
        for (o, c) in column.iter().enumerate() {
            if *c == ZERO {
                continue;
            }
            for (j, x) in row.iter().enumerate() {
                out[(o, j)] += c * x;
            }
        }
    }
    Ok(out)
}

/// Applies the Fock lift of `u` to one or both subsystems of `state`.
///
/// For a single-system state `Side::A` and `Side::B` both act on it and
/// `Side::Both` is an error.
pub fn apply(u: &ModeUnitary, state: &PureState, side: Side) -> Result<PureState> {
    match state.space() {
        Space::Local(basis) => {
            if side == Side::Both {
                return Err(domain("side=both needs a joint state"));
            }
            let v = DMatrix::from_column_slice(basis.len(), 1, state.amplitudes());
            let out = act_on_columns(u, basis, &v)?;
            PureState::new(state.space().clone(), out.as_slice().to_vec())
        }
        Space::Joint(basis_a, basis_b) => {
            let mut psi = state.amplitude_matrix()?;
            if matches!(side, Side::A | Side::Both) {
                psi = act_on_columns(u, basis_a, &psi)?;
            }
            if matches!(side, Side::B | Side::Both) {
                psi = act_on_columns(u, basis_b, &psi.transpose())?.transpose();
            }
            Ok(PureState::from_amplitude_matrix(
                basis_a.clone(),
                basis_b.clone(),
                &psi,
            ))
        }
    }
}

/// Applies separately lifted local operators to a joint state:
/// `(L_A (x) L_B) |psi>`, i.e. `L_A Psi L_B^T` on the amplitude matrix.
pub fn apply_lifted_pair(
    lift_a: &FockUnitary,
    lift_b: &FockUnitary,
    state: &PureState,
) -> Result<PureState> {
    let (basis_a, basis_b) = state.joint_bases()?;
    if basis_a.as_ref() != lift_a.basis.as_ref() || basis_b.as_ref() != lift_b.basis.as_ref() {
        return Err(domain("lifted operators do not match the state's bases"));
    }
    let psi = state.amplitude_matrix()?;
    let out = &lift_a.matrix * psi * lift_b.matrix.transpose();
    Ok(PureState::from_amplitude_matrix(
        basis_a.clone(),
        basis_b.clone(),
        &out,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn pat(s: &str) -> PhotonPattern {
        s.parse().unwrap()
    }

    #[test]
    fn permanent_small_cases() {
        let m = DMatrix::from_row_slice(2, 2, &[c(1., 2.), c(3., 0.), c(0., 1.), c(2., -1.)]);
        let expected = c(1., 2.) * c(2., -1.) + c(3., 0.) * c(0., 1.);
        assert!((permanent(&m).unwrap() - expected).norm() < 1e-14);
        assert_eq!(permanent(&DMatrix::<Complex64>::zeros(0, 0)).unwrap(), ONE);
        for n in 1..7 {
            let id = DMatrix::<Complex64>::identity(n, n);
            assert!((permanent(&id).unwrap() - ONE).norm() < 1e-14);
        }
        let ones = DMatrix::from_element(3, 3, ONE);
        assert!((permanent(&ones).unwrap() - c(6., 0.)).norm() < 1e-12);
        let ones = DMatrix::from_element(5, 5, ONE);
        assert!((permanent(&ones).unwrap() - c(120., 0.)).norm() < 1e-10);
        assert!(matches!(
            permanent(&DMatrix::<Complex64>::zeros(2, 3)),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn permanent_of_dft_matrices() {
        // Frozen from a brute-force permutation sum.
        let p4 = permanent(ModeUnitary::dft(4).matrix()).unwrap();
        assert!(p4.norm() < 1e-12);
        let p3 = permanent(ModeUnitary::dft(3).matrix()).unwrap();
        assert!((p3 - c(-0.577350269189626, 0.0)).norm() < 1e-12);
        let p5 = permanent(ModeUnitary::dft(5).matrix()).unwrap();
        assert!((p5 - c(-0.08944271909999164, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn dft_has_flat_moduli() {
        assert_eq!(ModeUnitary::dft(1).matrix()[(0, 0)], ONE);
        for m in 1..7 {
            let u = ModeUnitary::dft(m);
            assert!(u.unitarity_residual() < 1e-12);
            for k in 0..m {
                for j in 0..m {
                    assert!((u.entry(k, j).norm_sqr() - 1.0 / m as f64).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn single_photon_amplitude_is_matrix_entry() {
        let u = ModeUnitary::dft(3);
        for k in 0..3 {
            for m in 0..3 {
                let mut out = vec![0; 3];
                out[k] = 1;
                let mut inp = vec![0; 3];
                inp[m] = 1;
                let a = fock_amplitude(
                    &u,
                    &PhotonPattern::new(out).unwrap(),
                    &PhotonPattern::new(inp).unwrap(),
                );
                assert!((a - u.entry(k, m)).norm() < 1e-14);
            }
        }
        let id = ModeUnitary::identity(4);
        assert!((fock_amplitude(&id, &pat("2101"), &pat("2101")) - ONE).norm() < 1e-14);
        assert_eq!(fock_amplitude(&id, &pat("2100"), &pat("2101")), ZERO);
    }

    #[test]
    fn shift_twice_on_three_modes() {
        let basis = Arc::new(FockBasis::new(3, 2).unwrap());
        let s = ModeUnitary::mode_shift(3);
        let start = PureState::basis_state(basis.clone(), &pat("110")).unwrap();
        let once = apply(&s, &start, Side::A).unwrap();
        let expected = PureState::basis_state(basis.clone(), &pat("011")).unwrap();
        assert!(once.max_distance(&expected) < 1e-14);
        let twice = apply(&s, &once, Side::A).unwrap();
        let expected = PureState::basis_state(basis, &pat("101")).unwrap();
        assert!(twice.max_distance(&expected) < 1e-14);
        assert_eq!(ModeUnitary::mode_shift(1), ModeUnitary::identity(1));
    }

    #[test]
    fn lift_of_identity_and_shift() {
        let basis = Arc::new(FockBasis::new(4, 2).unwrap());
        let id = lift(&ModeUnitary::identity(4), basis.clone()).unwrap();
        assert_eq!(id.matrix(), &DMatrix::identity(10, 10));
        let s = lift(&ModeUnitary::mode_shift(4), basis.clone()).unwrap();
        for col in 0..10 {
            let nonzero: Vec<_> = (0..10).filter(|&r| s.matrix()[(r, col)] != ZERO).collect();
            assert_eq!(nonzero.len(), 1);
            let r = nonzero[0];
            assert_eq!(s.matrix()[(r, col)], ONE);
            assert_eq!(basis.pattern(r), &basis.pattern(col).shifted(1));
        }
        assert!(lift(&ModeUnitary::identity(3), basis).is_err());
    }

    #[test]
    fn dft_lift_is_unitary() {
        let basis = Arc::new(FockBasis::new(4, 2).unwrap());
        let l = lift(&ModeUnitary::dft(4), basis).unwrap();
        assert_eq!(l.matrix().nrows(), 10);
        assert!(l.unitarity_residual() < 1e-9);
    }

    #[test]
    fn side_both_rejects_local_states() {
        let basis = Arc::new(FockBasis::new(2, 1).unwrap());
        let s = PureState::basis_state(basis, &pat("10")).unwrap();
        assert!(apply(&ModeUnitary::dft(2), &s, Side::Both).is_err());
        assert!(apply(&ModeUnitary::dft(3), &s, Side::A).is_err());
    }

    #[test]
    fn lazy_and_dense_paths_agree() {
        // Basis of 4 photons in 9 modes has 495 states; 5 photons in 8 has 792.
        let basis = Arc::new(FockBasis::new(8, 5).unwrap());
        assert!(basis.len() > DENSE_LIFT_LIMIT);
        let u = ModeUnitary::dft(8);
        let mut s = PureState::basis_state(basis.clone(), &pat("11000111")).unwrap();
        s.amplitudes_mut()[3] = c(0.5, -0.25);
        let s = s.normalized().unwrap();
        let lazy = apply(&u, &s, Side::A).unwrap();
        let dense = lift(&u, basis).unwrap().apply_local(&s).unwrap();
        assert!(lazy.max_distance(&dense) < 1e-12);
        assert!((lazy.norm() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn beam_splitter_checks() {
        assert!(ModeUnitary::beam_splitter(2, 0, 0).is_err());
        let bs = ModeUnitary::beam_splitter(4, 1, 3).unwrap();
        assert!(bs.unitarity_residual() < 1e-14);
        let m = DMatrix::from_element(2, 2, ONE);
        assert!(ModeUnitary::from_matrix(m).is_err());
    }
}
