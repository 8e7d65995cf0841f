//! Cyclic pattern classes and eigenstates of the mode shift.
//!
//! The orbit of a pattern under the cyclic mode shift `S` is its pattern
//! class. Within a class of cardinality `d`, the shift eigenstates
//! `|E_p, K>` carry the eigenvalue `exp(2 pi i K / M)` with `K` a multiple
//! of `M / d`. After a DFT, an output pattern `n` only receives amplitude
//! from input eigenstates whose `K` equals `K(n) = sum_k k n_k (mod M)`.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{domain, Result};
use crate::fock::{FockBasis, PhotonPattern, PureState, Space};
use crate::linop::{self, ModeUnitary};

/// Total mode index `sum_k k * n_k` reduced mod `M`.
pub fn k_value(n: &PhotonPattern) -> usize {
    let m = n.modes();
    n.occupations()
        .iter()
        .enumerate()
        .map(|(k, &count)| (k * count as usize) % m)
        .sum::<usize>()
        % m
}

/// Reduces any integer `K` into `[0, M)`.
pub fn normalize_k(k: i64, modes: usize) -> usize {
    k.rem_euclid(modes as i64) as usize
}

/// Orbit of a pattern under the cyclic mode shift.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PatternClass {
    /// Lexicographically greatest element.
    representative: PhotonPattern,
    cardinality: usize,
    allowed_k: Vec<usize>,
    /// `S^0 p, S^1 p, ...` starting from the representative.
    elements: Vec<PhotonPattern>,
}

impl PatternClass {
    pub fn representative(&self) -> &PhotonPattern {
        &self.representative
    }

    pub fn elements(&self) -> &[PhotonPattern] {
        &self.elements
    }

    pub fn cardinality(&self) -> usize {
        self.cardinality
    }

    pub fn allowed_k(&self) -> &[usize] {
        &self.allowed_k
    }

    pub fn modes(&self) -> usize {
        self.representative.modes()
    }

    pub fn photons(&self) -> usize {
        self.representative.photons()
    }

    pub fn allows(&self, k: i64) -> bool {
        let k = normalize_k(k, self.modes());
        k.is_multiple_of(self.modes() / self.cardinality)
    }

    /// Number of shifts taking the representative to `p`.
    pub fn shift_of(&self, p: &PhotonPattern) -> Option<usize> {
        self.elements.iter().position(|e| e == p)
    }

    pub fn contains(&self, p: &PhotonPattern) -> bool {
        self.shift_of(p).is_some()
    }

    /// True when no element holds more than one photon per mode, i.e. a
    /// complementary class exists.
    pub fn is_binary(&self) -> bool {
        self.representative.is_binary()
    }
}

/// The class of `p`, with its representative and element order fixed.
pub fn pattern_class(p: &PhotonPattern) -> PatternClass {
    let mut orbit = vec![p.clone()];
    loop {
        let next = orbit.last().expect("non-empty").shifted(1);
        if &next == p {
            break;
        }
        orbit.push(next);
    }
    let representative = orbit.iter().max().expect("non-empty").clone();
    let cardinality = orbit.len();
    let modes = p.modes();
    let step = modes / cardinality;
    let elements = (0..cardinality).map(|s| representative.shifted(s)).collect();
    PatternClass {
        representative,
        cardinality,
        allowed_k: (0..cardinality).map(|j| j * step).collect(),
        elements,
    }
}

/// Every class of a basis, in the basis order of their representatives.
pub fn classes(basis: &FockBasis) -> Vec<PatternClass> {
    let mut seen = vec![false; basis.len()];
    let mut out = Vec::new();
    for i in 0..basis.len() {
        if seen[i] {
            continue;
        }
        let class = pattern_class(basis.pattern(i));
        for e in class.elements() {
            seen[basis.index_of(e).expect("shifts stay in the basis")] = true;
        }
        out.push(class);
    }
    out
}

/// For each basis index, the position of its class in `classes`.
pub fn class_index(basis: &FockBasis, classes: &[PatternClass]) -> Vec<usize> {
    let mut index = vec![0; basis.len()];
    for (c, class) in classes.iter().enumerate() {
        for e in class.elements() {
            index[basis.index_of(e).expect("class of this basis")] = c;
        }
    }
    index
}

/// `|E_p, K> = d^{-1/2} sum_dm exp(-2 pi i K dm / M) S^dm |p>` with the
/// phases anchored at the class representative.
pub fn class_eigenstate(class: &PatternClass, k: i64) -> Result<PureState> {
    let basis = Arc::new(FockBasis::new(class.modes(), class.photons())?);
    eigenstate_anchored(basis, class.representative(), k)
}

/// Shift eigenstate whose `dm = 0` term is `anchor` instead of the
/// canonical representative.
pub fn eigenstate_anchored(
    basis: Arc<FockBasis>,
    anchor: &PhotonPattern,
    k: i64,
) -> Result<PureState> {
    let class = pattern_class(anchor);
    let modes = class.modes();
    if !class.allows(k) {
        return Err(domain(format!(
            "K = {k} is not a multiple of M/d = {} for the class of {anchor}",
            modes / class.cardinality()
        )));
    }
    let k = normalize_k(k, modes);
    let d = class.cardinality();
    let norm = 1.0 / (d as f64).sqrt();
    let mut state = PureState::zeros(Space::Local(basis.clone()));
    for dm in 0..d {
        let phase = -2.0 * PI * ((k * dm) % modes) as f64 / modes as f64;
        let i = basis.require_index(&anchor.shifted(dm))?;
        state.amplitudes_mut()[i] = Complex64::from_polar(norm, phase);
    }
    Ok(state)
}

/// One term of the class expansion of a DFT output pattern.
#[derive(Debug, Clone)]
pub struct ClassComponent {
    pub class: PatternClass,
    pub k: usize,
    pub coefficient: Complex64,
}

/// Expands `U_F^dagger |n>` over the shift eigenstates `|E_p, K(n)>` of
/// every class that admits `K(n)`.
pub fn decompose_dft_output(n: &PhotonPattern) -> Result<Vec<ClassComponent>> {
    let basis = Arc::new(FockBasis::new(n.modes(), n.photons())?);
    let pre = linop::preimage(&ModeUnitary::dft(n.modes()), basis.clone(), n)?;
    let k = k_value(n);
    classes(&basis)
        .into_iter()
        .filter(|c| c.allows(k as i64))
        .map(|class| {
            let e = eigenstate_anchored(basis.clone(), class.representative(), k as i64)?;
            Ok(ClassComponent {
                coefficient: e.inner(&pre)?,
                class,
                k,
            })
        })
        .collect()
}

/// The class of `(1,...,1) - p`, if `p` has at most one photon per mode.
pub fn complementary_class(class: &PatternClass) -> Option<PatternClass> {
    class
        .representative()
        .complement()
        .map(|bar| pattern_class(&bar))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pat(s: &str) -> PhotonPattern {
        s.parse().unwrap()
    }

    #[test]
    fn k_values() {
        for (p, k) in [
            ("0101", 0),
            ("2000", 0),
            ("0020", 0),
            ("0011", 1),
            ("1100", 1),
            ("0000", 0),
            ("1010", 2),
            ("0110", 3),
        ] {
            assert_eq!(k_value(&pat(p)), k, "{p}");
        }
        assert_eq!(normalize_k(-1, 4), 3);
    }

    #[test]
    fn class_shapes() {
        let c = pattern_class(&pat("0101"));
        assert_eq!(c.representative(), &pat("1010"));
        assert_eq!(c.elements(), &[pat("1010"), pat("0101")]);
        assert_eq!(c.allowed_k(), &[0, 2]);
        let c = pattern_class(&pat("0011"));
        assert_eq!(
            c.elements(),
            &[pat("1100"), pat("0110"), pat("0011"), pat("1001")]
        );
        assert_eq!(c.allowed_k(), &[0, 1, 2, 3]);
        let c = pattern_class(&pat("1111"));
        assert_eq!(c.cardinality(), 1);
        assert_eq!(c.allowed_k(), &[0]);
    }

    #[test]
    fn four_mode_two_photon_classes() {
        let basis = FockBasis::new(4, 2).unwrap();
        let reps: Vec<String> = classes(&basis)
            .iter()
            .map(|c| c.representative().to_string())
            .collect();
        assert_eq!(reps, ["2000", "1100", "1010"]);
    }

    #[test]
    fn eigenstates_of_1010_class() {
        let class = pattern_class(&pat("1010"));
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let basis = FockBasis::new(4, 2).unwrap();
        let (i, j) = (
            basis.index_of(&pat("1010")).unwrap(),
            basis.index_of(&pat("0101")).unwrap(),
        );
        let e0 = class_eigenstate(&class, 0).unwrap();
        assert!((e0.amplitudes()[i] - h).norm() < 1e-15);
        assert!((e0.amplitudes()[j] - h).norm() < 1e-15);
        let e2 = class_eigenstate(&class, 2).unwrap();
        assert!((e2.amplitudes()[i] - h).norm() < 1e-15);
        assert!((e2.amplitudes()[j] + h).norm() < 1e-15);
        assert!(class_eigenstate(&class, 1).is_err());
        assert!(class_eigenstate(&class, -2).is_ok());
    }

    #[test]
    fn anchor_sign_between_1100_and_0011() {
        let basis = Arc::new(FockBasis::new(4, 2).unwrap());
        let a = eigenstate_anchored(basis.clone(), &pat("1100"), 1).unwrap();
        let b = eigenstate_anchored(basis, &pat("0011"), 1).unwrap();
        for (x, y) in a.amplitudes().iter().zip(b.amplitudes()) {
            assert!((x + y).norm() < 1e-12);
        }
    }

    #[test]
    fn complements() {
        let c = pattern_class(&pat("1100"));
        assert_eq!(complementary_class(&c), Some(c.clone()));
        let c = pattern_class(&pat("1010"));
        assert_eq!(complementary_class(&c), Some(c.clone()));
        assert_eq!(complementary_class(&pattern_class(&pat("2000"))), None);
        let c = pattern_class(&pat("11000"));
        assert_eq!(
            complementary_class(&c).unwrap().representative(),
            &pat("11100")
        );
    }

    #[test]
    fn dft_output_1100_decomposition() {
        let parts = decompose_dft_output(&pat("1100")).unwrap();
        let reps: Vec<String> = parts
            .iter()
            .map(|p| p.class.representative().to_string())
            .collect();
        assert_eq!(reps, ["2000", "1100"]);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let phase = Complex64::from_polar(h, -PI / 4.0);
        assert!((parts[0].coefficient - h).norm() < 1e-10);
        assert!((parts[1].coefficient - phase).norm() < 1e-10);
        assert!(parts.iter().all(|p| p.k == 1));

        let parts = decompose_dft_output(&pat("0011")).unwrap();
        assert!((parts[0].coefficient - h).norm() < 1e-10);
        assert!((parts[1].coefficient + phase).norm() < 1e-10);
    }
}
