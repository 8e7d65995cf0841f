//! Photon-number patterns, Fock bases and state containers.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{domain, Error, Result};

/// Absolute tolerance for amplitude and probability comparisons.
pub const TOLERANCE: f64 = 1e-10;

/// Occupation numbers of `M` modes: the outcome of a photon-number
/// measurement on one local system.
///
/// Ordering is lexicographic on the occupation vector, so `2000 > 1100`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PhotonPattern(Vec<u32>);

impl PhotonPattern {
    pub fn new(occupations: Vec<u32>) -> Result<Self> {
        if occupations.is_empty() {
            return Err(domain("a photon pattern needs at least one mode"));
        }
        Ok(PhotonPattern(occupations))
    }

    /// All-zero pattern over `modes` modes.
    pub fn vacuum(modes: usize) -> Result<Self> {
        Self::new(vec![0; modes])
    }

    pub fn modes(&self) -> usize {
        self.0.len()
    }

    pub fn photons(&self) -> usize {
        self.0.iter().map(|&n| n as usize).sum()
    }

    pub fn occupations(&self) -> &[u32] {
        &self.0
    }

    pub fn occupation(&self, mode: usize) -> u32 {
        self.0[mode]
    }

    /// True when no mode holds more than one photon.
    pub fn is_binary(&self) -> bool {
        self.0.iter().all(|&n| n <= 1)
    }

    /// `(1,...,1) - n`, defined only for binary patterns.
    pub fn complement(&self) -> Option<PhotonPattern> {
        self.is_binary()
            .then(|| PhotonPattern(self.0.iter().map(|&n| 1 - n).collect()))
    }

    /// Cyclic mode shift applied `steps` times: the occupation of mode `m`
    /// moves to mode `m + steps (mod M)`.
    pub fn shifted(&self, steps: usize) -> PhotonPattern {
        let m = self.modes();
        let mut out = vec![0; m];
        for (mode, &n) in self.0.iter().enumerate() {
            out[(mode + steps) % m] = n;
        }
        PhotonPattern(out)
    }

    /// Mode list with multiplicity: mode `m` repeated `n_m` times.
    pub fn mode_list(&self) -> Vec<usize> {
        self.0
            .iter()
            .enumerate()
            .flat_map(|(mode, &n)| std::iter::repeat_n(mode, n as usize))
            .collect()
    }

    /// Concatenation of two patterns into one pattern over `M_a + M_b` modes.
    pub fn concat(&self, other: &PhotonPattern) -> PhotonPattern {
        PhotonPattern(self.0.iter().chain(other.0.iter()).copied().collect())
    }
}

impl fmt::Display for PhotonPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.iter().all(|&n| n <= 9) {
            for n in &self.0 {
                write!(f, "{n}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.0.iter().map(|n| n.to_string()).collect();
            f.write_str(&parts.join(","))
        }
    }
}

impl FromStr for PhotonPattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let occupations = if s.contains(',') {
            s.split(',')
                .map(|part| {
                    part.trim()
                        .parse::<u32>()
                        .map_err(|_| Error::Parse(format!("bad occupation {part:?} in {s:?}")))
                })
                .collect::<Result<Vec<_>>>()?
        } else {
            s.chars()
                .map(|c| {
                    c.to_digit(10)
                        .ok_or_else(|| Error::Parse(format!("bad digit {c:?} in {s:?}")))
                })
                .collect::<Result<Vec<_>>>()?
        };
        PhotonPattern::new(occupations).map_err(|_| Error::Parse("empty pattern".into()))
    }
}

impl Serialize for PhotonPattern {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PhotonPattern {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// All patterns of `N` photons in `M` modes, in descending lexicographic order.
#[derive(Debug, Clone)]
pub struct FockBasis {
    modes: usize,
    photons: usize,
    patterns: Vec<PhotonPattern>,
    index: HashMap<PhotonPattern, usize>,
}

impl PartialEq for FockBasis {
    fn eq(&self, other: &Self) -> bool {
        self.modes == other.modes && self.photons == other.photons
    }
}

impl FockBasis {
    pub fn new(modes: usize, photons: usize) -> Result<Self> {
        if modes == 0 {
            return Err(domain("a Fock basis needs at least one mode"));
        }
        let mut patterns = Vec::new();
        let mut current = vec![0u32; modes];
        fill_descending(&mut current, 0, photons, &mut patterns);
        let index = patterns
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i))
            .collect();
        Ok(FockBasis {
            modes,
            photons,
            patterns,
            index,
        })
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn photons(&self) -> usize {
        self.photons
    }

    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    pub fn patterns(&self) -> &[PhotonPattern] {
        &self.patterns
    }

    pub fn pattern(&self, i: usize) -> &PhotonPattern {
        &self.patterns[i]
    }

    pub fn index_of(&self, pattern: &PhotonPattern) -> Option<usize> {
        self.index.get(pattern).copied()
    }

    /// Like [`index_of`](Self::index_of) but with a domain error for foreign patterns.
    pub fn require_index(&self, pattern: &PhotonPattern) -> Result<usize> {
        self.index_of(pattern).ok_or_else(|| {
            domain(format!(
                "pattern {pattern} is not in the basis of {} photons in {} modes",
                self.photons, self.modes
            ))
        })
    }
}

fn fill_descending(current: &mut [u32], mode: usize, left: usize, out: &mut Vec<PhotonPattern>) {
    if mode + 1 == current.len() {
        current[mode] = left as u32;
        out.push(PhotonPattern(current.to_vec()));
        return;
    }
    for n in (0..=left).rev() {
        current[mode] = n as u32;
        fill_descending(current, mode + 1, left - n, out);
    }
    current[mode] = 0;
}

/// Enumerates the Fock basis of `photons` photons in `modes` modes.
pub fn enumerate_basis(modes: usize, photons: usize) -> Result<FockBasis> {
    FockBasis::new(modes, photons)
}

/// The Hilbert space a state vector lives in.
#[derive(Debug, Clone)]
pub enum Space {
    Local(Arc<FockBasis>),
    /// Two local systems; amplitudes are stored row-major with the `A`
    /// index outermost.
    Joint(Arc<FockBasis>, Arc<FockBasis>),
}

impl Space {
    pub fn dim(&self) -> usize {
        match self {
            Space::Local(b) => b.len(),
            Space::Joint(a, b) => a.len() * b.len(),
        }
    }

    pub fn is_joint(&self) -> bool {
        matches!(self, Space::Joint(..))
    }

    pub fn same_structure(&self, other: &Space) -> bool {
        match (self, other) {
            (Space::Local(a), Space::Local(b)) => a == b,
            (Space::Joint(a1, b1), Space::Joint(a2, b2)) => a1 == a2 && b1 == b2,
            _ => false,
        }
    }
}

/// A complex amplitude vector over a local or joint Fock basis.
#[derive(Debug, Clone)]
pub struct PureState {
    space: Space,
    amplitudes: Vec<Complex64>,
}

impl PureState {
    pub fn new(space: Space, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != space.dim() {
            return Err(domain(format!(
                "{} amplitudes given for a space of dimension {}",
                amplitudes.len(),
                space.dim()
            )));
        }
        Ok(PureState { space, amplitudes })
    }

    pub fn zeros(space: Space) -> Self {
        let dim = space.dim();
        PureState {
            space,
            amplitudes: vec![Complex64::new(0.0, 0.0); dim],
        }
    }

    /// The Fock state `|n>` of a single local system.
    pub fn basis_state(basis: Arc<FockBasis>, pattern: &PhotonPattern) -> Result<Self> {
        let i = basis.require_index(pattern)?;
        let mut state = PureState::zeros(Space::Local(basis));
        state.amplitudes[i] = Complex64::new(1.0, 0.0);
        Ok(state)
    }

    /// The product Fock state `|n_a>|n_b>`.
    pub fn joint_basis_state(
        basis_a: Arc<FockBasis>,
        basis_b: Arc<FockBasis>,
        a: &PhotonPattern,
        b: &PhotonPattern,
    ) -> Result<Self> {
        let ia = basis_a.require_index(a)?;
        let ib = basis_b.require_index(b)?;
        let db = basis_b.len();
        let mut state = PureState::zeros(Space::Joint(basis_a, basis_b));
        state.amplitudes[ia * db + ib] = Complex64::new(1.0, 0.0);
        Ok(state)
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn normalize(&mut self) -> Result<()> {
        let norm = self.norm();
        if norm < 1e-300 {
            return Err(domain("cannot normalize the zero vector"));
        }
        for c in &mut self.amplitudes {
            *c /= norm;
        }
        Ok(())
    }

    pub fn normalized(mut self) -> Result<Self> {
        self.normalize()?;
        Ok(self)
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &PureState) -> Result<Complex64> {
        if !self.space.same_structure(&other.space) {
            return Err(domain("inner product between states of different spaces"));
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Largest entrywise distance to `other`.
    pub fn max_distance(&self, other: &PureState) -> f64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|c| c.norm_sqr()).collect()
    }

    /// Local bases of a joint state.
    pub fn joint_bases(&self) -> Result<(&Arc<FockBasis>, &Arc<FockBasis>)> {
        match &self.space {
            Space::Joint(a, b) => Ok((a, b)),
            Space::Local(_) => Err(domain("expected a joint state of two systems")),
        }
    }

    pub fn local_basis(&self) -> Result<&Arc<FockBasis>> {
        match &self.space {
            Space::Local(b) => Ok(b),
            Space::Joint(..) => Err(domain("expected a state of a single system")),
        }
    }

    /// Joint amplitudes as a `D_A x D_B` matrix.
    pub fn amplitude_matrix(&self) -> Result<DMatrix<Complex64>> {
        let (a, b) = self.joint_bases()?;
        Ok(DMatrix::from_row_slice(a.len(), b.len(), &self.amplitudes))
    }

    pub(crate) fn from_amplitude_matrix(
        basis_a: Arc<FockBasis>,
        basis_b: Arc<FockBasis>,
        matrix: &DMatrix<Complex64>,
    ) -> Self {
        let mut amplitudes = Vec::with_capacity(matrix.len());
        for row in matrix.row_iter() {
            amplitudes.extend(row.iter().copied());
        }
        PureState {
            space: Space::Joint(basis_a, basis_b),
            amplitudes,
        }
    }
}

/// Product state `|a>|b>` of two local states.
pub fn tensor(state_a: &PureState, state_b: &PureState) -> Result<PureState> {
    let basis_a = state_a.local_basis()?.clone();
    let basis_b = state_b.local_basis()?.clone();
    let mut amplitudes = Vec::with_capacity(state_a.dim() * state_b.dim());
    for x in &state_a.amplitudes {
        amplitudes.extend(state_b.amplitudes.iter().map(|y| x * y));
    }
    Ok(PureState {
        space: Space::Joint(basis_a, basis_b),
        amplitudes,
    })
}

/// A probabilistic mixture of pure states sharing one space.
#[derive(Debug, Clone)]
pub struct MixedEnsemble {
    components: Vec<(f64, PureState)>,
}

impl MixedEnsemble {
    pub fn components(&self) -> &[(f64, PureState)] {
        &self.components
    }

    pub fn space(&self) -> &Space {
        self.components[0].1.space()
    }

    /// The maximally mixed state `1/D`, written as a uniform mixture of the
    /// Fock basis states.
    pub fn maximally_mixed(space: Space) -> Self {
        let dim = space.dim();
        let weight = 1.0 / dim as f64;
        let components = (0..dim)
            .map(|i| {
                let mut s = PureState::zeros(space.clone());
                s.amplitudes[i] = Complex64::new(1.0, 0.0);
                (weight, s)
            })
            .collect();
        MixedEnsemble { components }
    }
}

/// Builds a mixture, renormalizing the weights to sum to one.
pub fn mix(components: Vec<(f64, PureState)>) -> Result<MixedEnsemble> {
    let first = components
        .first()
        .ok_or_else(|| domain("a mixture needs at least one component"))?;
    let space = first.1.space().clone();
    let mut total = 0.0;
    for (w, state) in &components {
        if !w.is_finite() || *w < 0.0 {
            return Err(domain(format!("mixture weight {w} is not a probability")));
        }
        if !state.space().same_structure(&space) {
            return Err(domain("mixture components live in different spaces"));
        }
        total += w;
    }
    if total <= 0.0 {
        return Err(domain("mixture weights sum to zero"));
    }
    Ok(MixedEnsemble {
        components: components
            .into_iter()
            .map(|(w, s)| (w / total, s))
            .collect(),
    })
}

/// Anything with measurement statistics: a pure state or an ensemble.
pub trait QuantumState {
    fn space(&self) -> &Space;
    fn components(&self) -> Vec<(f64, &PureState)>;

    /// Weighted average of a per-component quantity.
    fn average<F: FnMut(&PureState) -> f64>(&self, mut f: F) -> f64
    where
        Self: Sized,
    {
        self.components().into_iter().map(|(w, s)| w * f(s)).sum()
    }
}

impl QuantumState for PureState {
    fn space(&self) -> &Space {
        &self.space
    }

    fn components(&self) -> Vec<(f64, &PureState)> {
        vec![(1.0, self)]
    }
}

impl QuantumState for MixedEnsemble {
    fn space(&self) -> &Space {
        MixedEnsemble::space(self)
    }

    fn components(&self) -> Vec<(f64, &PureState)> {
        self.components.iter().map(|(w, s)| (*w, s)).collect()
    }
}

/// Probability distribution over the basis of `state`, row-major for
/// joint spaces.
pub fn distribution<S: QuantumState>(state: &S) -> Vec<f64> {
    let mut out = vec![0.0; state.space().dim()];
    for (w, s) in state.components() {
        for (p, c) in out.iter_mut().zip(s.amplitudes()) {
            *p += w * c.norm_sqr();
        }
    }
    out
}

/// `P(n_a, n_b)` for a joint pure state or ensemble.
pub fn joint_probability<S: QuantumState>(
    state: &S,
    pattern_a: &PhotonPattern,
    pattern_b: &PhotonPattern,
) -> Result<f64> {
    let Space::Joint(basis_a, basis_b) = state.space() else {
        return Err(domain("joint probabilities need a joint state"));
    };
    let i = basis_a.require_index(pattern_a)? * basis_b.len() + basis_b.require_index(pattern_b)?;
    Ok(state
        .components()
        .into_iter()
        .map(|(w, s)| w * s.amplitudes()[i].norm_sqr())
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pat(s: &str) -> PhotonPattern {
        s.parse().unwrap()
    }

    #[test]
    fn basis_small_cases() {
        let b = FockBasis::new(2, 1).unwrap();
        assert_eq!(b.patterns(), &[pat("10"), pat("01")]);
        let b = FockBasis::new(4, 2).unwrap();
        assert_eq!(b.len(), 10);
        let shown: Vec<String> = b.patterns().iter().map(|p| p.to_string()).collect();
        assert_eq!(
            shown,
            ["2000", "1100", "1010", "1001", "0200", "0110", "0101", "0020", "0011", "0002"]
        );
        let vac = FockBasis::new(4, 0).unwrap();
        assert_eq!(vac.patterns(), &[pat("0000")]);
        assert!(FockBasis::new(0, 1).is_err());
    }

    #[test]
    fn pattern_text_forms() {
        assert_eq!(pat("1100").occupations(), &[1, 1, 0, 0]);
        let wide = pat("10,0,2,0");
        assert_eq!(wide.occupations(), &[10, 0, 2, 0]);
        assert_eq!(wide.to_string(), "10,0,2,0");
        assert!("11a0".parse::<PhotonPattern>().is_err());
        assert!("".parse::<PhotonPattern>().is_err());
    }

    #[test]
    fn shift_moves_photons_up() {
        assert_eq!(pat("110").shifted(1), pat("011"));
        assert_eq!(pat("110").shifted(2), pat("101"));
        assert_eq!(pat("1").shifted(5), pat("1"));
    }

    #[test]
    fn complement_only_for_binary() {
        assert_eq!(pat("1100").complement(), Some(pat("0011")));
        assert_eq!(pat("2000").complement(), None);
    }

    #[test]
    fn foreign_pattern_is_domain_error() {
        let a = Arc::new(FockBasis::new(4, 2).unwrap());
        let b = Arc::new(FockBasis::new(4, 2).unwrap());
        let s = PureState::joint_basis_state(a, b, &pat("1100"), &pat("0011")).unwrap();
        assert!(matches!(
            joint_probability(&s, &pat("1110"), &pat("0011")),
            Err(Error::Domain(_))
        ));
        assert_eq!(joint_probability(&s, &pat("1100"), &pat("0011")).unwrap(), 1.0);
    }

    #[test]
    fn tensor_of_vacua() {
        let v = Arc::new(FockBasis::new(3, 0).unwrap());
        let x = PureState::basis_state(v.clone(), &pat("000")).unwrap();
        let joint = tensor(&x, &x).unwrap();
        assert_eq!(joint.dim(), 1);
        assert!((joint.norm() - 1.0).abs() < 1e-12);
        assert!(tensor(&joint, &x).is_err());
    }

    #[test]
    fn mixing_rules() {
        let b = Arc::new(FockBasis::new(2, 1).unwrap());
        let x = PureState::basis_state(b.clone(), &pat("10")).unwrap();
        assert!(mix(vec![]).is_err());
        assert!(mix(vec![(-0.1, x.clone())]).is_err());
        let m = mix(vec![(0.5, x.clone()), (0.5, x.clone())]).unwrap();
        assert_eq!(distribution(&m), distribution(&x));
        let m = mix(vec![(2.0, x.clone()), (6.0, x.clone())]).unwrap();
        assert_eq!(m.components()[0].0, 0.25);
        let other = Arc::new(FockBasis::new(3, 1).unwrap());
        let y = PureState::basis_state(other, &pat("100")).unwrap();
        assert!(mix(vec![(0.5, x), (0.5, y)]).is_err());
    }

    #[test]
    fn uniform_mixture_is_flat() {
        let b = Arc::new(FockBasis::new(4, 2).unwrap());
        let rho = MixedEnsemble::maximally_mixed(Space::Joint(b.clone(), b));
        let p = joint_probability(&rho, &pat("0200"), &pat("1010")).unwrap();
        assert!((p - 0.01).abs() < 1e-15);
    }
}
