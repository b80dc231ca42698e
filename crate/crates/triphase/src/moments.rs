//! Photon-number moments and pair correlations shared by both engines.

use thiserror::Error;

use crate::cfpoly::{CFPoly, CfError};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MomentError {
    /// A g² ratio was requested for a mode with vanishing mean occupation.
    #[error("undefined correlation: mode {mode} has zero mean occupation")]
    UndefinedCorrelation { mode: usize },
}

/// The photon-number moments needed for the Fisher matrix and the pair
/// correlations: per-mode means ⟨nⱼ⟩ and seconds ⟨nⱼ²⟩, cross moments
/// ⟨nⱼnₖ⟩ for the three pairs, and the intra-mode fourth-order moments
/// ⟨aⱼ†²aⱼ²⟩ = ⟨nⱼ(nⱼ−1)⟩.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MomentSet {
    pub mean: [f64; 3],
    pub second: [f64; 3],
    /// Order: (0,1), (0,2), (1,2).
    pub cross: [f64; 3],
    pub intra4: [f64; 3],
}

fn pair_index(j: usize, k: usize) -> usize {
    match (j.min(k), j.max(k)) {
        (0, 1) => 0,
        (0, 2) => 1,
        (1, 2) => 2,
        _ => panic!("cross moment needs two distinct modes in 0..3, got ({j},{k})"),
    }
}

impl MomentSet {
    /// Extract the moment set from a normally ordered characteristic
    /// function. Uses ⟨nⱼ²⟩ = ⟨aⱼ†²aⱼ²⟩ + ⟨nⱼ⟩ and, across distinct modes,
    /// ⟨nⱼnₖ⟩ = ⟨aⱼ†aₖ†aⱼaₖ⟩ directly.
    pub fn from_cf(poly: &CFPoly) -> Result<Self, CfError> {
        let mut mean = [0.0; 3];
        let mut second = [0.0; 3];
        let mut cross = [0.0; 3];
        let mut intra4 = [0.0; 3];
        for j in 0..3 {
            let mut e1 = [0u8; 3];
            e1[j] = 1;
            let mut e2 = [0u8; 3];
            e2[j] = 2;
            mean[j] = poly.extract_moment(e1, e1)?.re;
            intra4[j] = poly.extract_moment(e2, e2)?.re;
            second[j] = intra4[j] + mean[j];
        }
        for (j, k) in [(0, 1), (0, 2), (1, 2)] {
            let mut e = [0u8; 3];
            e[j] = 1;
            e[k] = 1;
            cross[pair_index(j, k)] = poly.extract_moment(e, e)?.re;
        }
        Ok(MomentSet {
            mean,
            second,
            cross,
            intra4,
        })
    }

    #[must_use]
    pub fn variance(&self, j: usize) -> f64 {
        self.second[j] - self.mean[j] * self.mean[j]
    }

    #[must_use]
    pub fn covariance(&self, j: usize, k: usize) -> f64 {
        self.cross[pair_index(j, k)] - self.mean[j] * self.mean[k]
    }

    /// Raw occupation correlator ⟨nⱼnₖ⟩ across two distinct modes.
    #[must_use]
    pub fn cross_moment(&self, j: usize, k: usize) -> f64 {
        self.cross[pair_index(j, k)]
    }

    /// Intra-mode second-order correlation g²ⱼ = ⟨aⱼ†²aⱼ²⟩ / ⟨nⱼ⟩².
    pub fn g2_intra(&self, j: usize) -> Result<f64, MomentError> {
        if self.mean[j] <= 0.0 {
            return Err(MomentError::UndefinedCorrelation { mode: j });
        }
        Ok(self.intra4[j] / (self.mean[j] * self.mean[j]))
    }

    /// Inter-mode correlation g²ⱼₖ = ⟨nⱼnₖ⟩ / (⟨nⱼ⟩⟨nₖ⟩).
    pub fn g2_inter(&self, j: usize, k: usize) -> Result<f64, MomentError> {
        if self.mean[j] <= 0.0 {
            return Err(MomentError::UndefinedCorrelation { mode: j });
        }
        if self.mean[k] <= 0.0 {
            return Err(MomentError::UndefinedCorrelation { mode: k });
        }
        Ok(self.cross[pair_index(j, k)] / (self.mean[j] * self.mean[k]))
    }

    /// Named view of all twelve entries, for reporting and cross-engine
    /// comparison.
    #[must_use]
    pub fn entries(&self) -> [(&'static str, f64); 12] {
        [
            ("mean_n0", self.mean[0]),
            ("mean_n1", self.mean[1]),
            ("mean_n2", self.mean[2]),
            ("second_n0", self.second[0]),
            ("second_n1", self.second[1]),
            ("second_n2", self.second[2]),
            ("cross_01", self.cross[0]),
            ("cross_02", self.cross[1]),
            ("cross_12", self.cross[2]),
            ("intra4_0", self.intra4[0]),
            ("intra4_1", self.intra4[1]),
            ("intra4_2", self.intra4[2]),
        ]
    }

    /// Maximum relative deviation between two moment sets, with the relative
    /// scale floored at 1 so that near-zero entries compare absolutely.
    #[must_use]
    pub fn max_rel_discrepancy(&self, other: &MomentSet) -> f64 {
        self.entries()
            .iter()
            .zip(other.entries().iter())
            .map(|((_, a), (_, b))| (a - b).abs() / a.abs().max(b.abs()).max(1.0))
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cfpoly::{make_w_state_cf, run_pipeline};
    use approx::assert_relative_eq;

    fn w1_moments() -> MomentSet {
        let out = run_pipeline(&make_w_state_cf(1, 4), [0.0; 3], [0.0; 2]);
        MomentSet::from_cf(&out).unwrap()
    }

    #[test]
    fn w1_variance_and_covariance() {
        let ms = w1_moments();
        assert_relative_eq!(ms.variance(0), 2.0 / 9.0, max_relative = 1e-12);
        assert_relative_eq!(ms.covariance(0, 1), -1.0 / 9.0, max_relative = 1e-12);
        assert_relative_eq!(ms.covariance(1, 0), -1.0 / 9.0, max_relative = 1e-12);
    }

    #[test]
    fn g2_intra_zero_for_single_photon() {
        // A single photon can never produce an intra-mode pair.
        let ms = w1_moments();
        assert_relative_eq!(ms.g2_intra(0).unwrap(), 0.0);
    }

    #[test]
    fn g2_undefined_on_vacuum_mode() {
        let ms = MomentSet {
            mean: [0.0, 1.0, 1.0],
            second: [0.0, 2.0, 2.0],
            cross: [0.0, 0.0, 1.0],
            intra4: [0.0, 1.0, 1.0],
        };
        assert_eq!(
            ms.g2_intra(0),
            Err(MomentError::UndefinedCorrelation { mode: 0 })
        );
        assert_eq!(
            ms.g2_inter(0, 1),
            Err(MomentError::UndefinedCorrelation { mode: 0 })
        );
        assert!(ms.g2_inter(1, 2).is_ok());
    }

    #[test]
    fn cauchy_schwarz_on_pipeline_moments() {
        let out = run_pipeline(&make_w_state_cf(3, 4), [0.4, 0.4, 0.4], [0.0; 2]);
        let ms = MomentSet::from_cf(&out).unwrap();
        for (j, k) in [(0, 1), (0, 2), (1, 2)] {
            let bound = (ms.second[j] * ms.second[k]).sqrt();
            assert!(ms.cross[super::pair_index(j, k)] <= bound + 1e-12);
        }
    }

    #[test]
    fn discrepancy_is_zero_on_self() {
        let ms = w1_moments();
        assert_eq!(ms.max_rel_discrepancy(&ms), 0.0);
    }
}
