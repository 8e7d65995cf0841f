//! JSON layout of state files.
//!
//! A state file lists one record per photon partition `(N_A, N_B)`. Each
//! record names the patterns of both local bases and stores the joint
//! amplitudes row-major (the `A` index outermost) as `[re, im]` pairs.
//! Amplitudes of the records are not renormalized, so a file written from
//! the full beam-split state keeps its partition probabilities.

use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::entangle::StratifiedState;
use crate::error::{domain, Error, Result};
use crate::fock::{FockBasis, PhotonPattern, PureState, Space};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BasisDescriptor {
    pub modes: usize,
    pub photons: usize,
    pub patterns: Vec<PhotonPattern>,
}

impl BasisDescriptor {
    fn of(basis: &FockBasis) -> Self {
        BasisDescriptor {
            modes: basis.modes(),
            photons: basis.photons(),
            patterns: basis.patterns().to_vec(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StratumRecord {
    pub basis_a: BasisDescriptor,
    pub basis_b: BasisDescriptor,
    pub amplitudes: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateFile {
    pub modes: usize,
    pub strata: Vec<StratumRecord>,
}

impl StateFile {
    pub fn from_joint(state: &PureState) -> Result<Self> {
        let (a, _) = state.joint_bases()?;
        Ok(StateFile {
            modes: a.modes(),
            strata: vec![record(state)?],
        })
    }

    pub fn from_stratified(state: &StratifiedState) -> Result<Self> {
        Ok(StateFile {
            modes: state.modes(),
            strata: state.strata().values().map(record).collect::<Result<_>>()?,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    /// Joint states of all records, unnormalized.
    pub fn states(&self) -> Result<Vec<PureState>> {
        self.strata.iter().map(load_record).collect()
    }

    /// The normalized state of one partition. With `photons_a = None` the
    /// file must hold exactly one record.
    pub fn select(&self, photons_a: Option<usize>) -> Result<PureState> {
        let states = self.states()?;
        let chosen = match photons_a {
            Some(n) => states
                .into_iter()
                .find(|s| s.joint_bases().map(|(a, _)| a.photons() == n).unwrap_or(false))
                .ok_or_else(|| domain(format!("state file has no partition with N = {n}")))?,
            None if states.len() == 1 => states.into_iter().next().expect("one"),
            None => {
                return Err(domain(
                    "state file holds several partitions; choose one with N",
                ))
            }
        };
        chosen.normalized()
    }
}

fn record(state: &PureState) -> Result<StratumRecord> {
    let (a, b) = state.joint_bases()?;
    Ok(StratumRecord {
        basis_a: BasisDescriptor::of(a),
        basis_b: BasisDescriptor::of(b),
        amplitudes: state.amplitudes().iter().map(|c| [c.re, c.im]).collect(),
    })
}

fn load_basis(d: &BasisDescriptor) -> Result<Arc<FockBasis>> {
    let basis = FockBasis::new(d.modes, d.photons)?;
    if d.patterns.len() != basis.len() {
        return Err(Error::Parse(format!(
            "basis of {} photons in {} modes lists {} patterns, expected {}",
            d.photons,
            d.modes,
            d.patterns.len(),
            basis.len()
        )));
    }
    Ok(Arc::new(basis))
}

fn load_record(r: &StratumRecord) -> Result<PureState> {
    let basis_a = load_basis(&r.basis_a)?;
    let basis_b = load_basis(&r.basis_b)?;
    if r.amplitudes.len() != basis_a.len() * basis_b.len() {
        return Err(Error::Parse("amplitude count does not match the bases".into()));
    }
    let db = basis_b.len();
    let mut state = PureState::zeros(Space::Joint(basis_a.clone(), basis_b.clone()));
    let nb = r.basis_b.patterns.len();
    for (i, pa) in r.basis_a.patterns.iter().enumerate() {
        let ia = basis_a.index_of(pa).ok_or_else(|| Error::Parse(format!("unknown pattern {pa}")))?;
        for (j, pb) in r.basis_b.patterns.iter().enumerate() {
            let ib = basis_b
                .index_of(pb)
                .ok_or_else(|| Error::Parse(format!("unknown pattern {pb}")))?;
            let [re, im] = r.amplitudes[i * nb + j];
            state.amplitudes_mut()[ia * db + ib] = Complex64::new(re, im);
        }
    }
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entangle::{generate_psi, phi_partition};

    #[test]
    fn round_trip_keeps_amplitudes() {
        let phi = phi_partition(4, 2).unwrap();
        let file = StateFile::from_joint(&phi).unwrap();
        let back = StateFile::from_json(&file.to_json()).unwrap();
        assert_eq!(back, file);
        let loaded = back.select(None).unwrap();
        assert_eq!(loaded.amplitudes(), phi.amplitudes());
    }

    #[test]
    fn full_state_needs_a_partition_choice() {
        let file = StateFile::from_stratified(&generate_psi(3).unwrap()).unwrap();
        assert_eq!(file.strata.len(), 4);
        assert!(file.select(None).is_err());
        let s = file.select(Some(1)).unwrap();
        assert!(s.max_distance(&phi_partition(3, 1).unwrap()) < 1e-12);
        assert!(file.select(Some(7)).is_err());
    }

    #[test]
    fn malformed_files_are_parse_errors() {
        assert!(matches!(StateFile::from_json("{"), Err(Error::Parse(_))));
        let mut file = StateFile::from_joint(&phi_partition(2, 1).unwrap()).unwrap();
        file.strata[0].amplitudes.pop();
        assert!(file.states().is_err());
    }
}
