//! Brute-force truncated Fock-space simulation of the three-mode pipeline.
//!
//! This engine applies the actual operators — exp(−iĤ) for passive optics
//! with the number-conserving generator Ĥ = Σⱼₖ hⱼₖ aⱼ†aₖ (h = i·log U), the
//! single-mode squeezer exp[(r/2)(a†² − a²)], and phase rotations — to a state
//! vector over the product basis |n₀,n₁,n₂⟩ with per-mode cutoff `dim`. It is
//! deliberately simple and serves as the numerical oracle that pins down every
//! sign and ordering convention of the polynomial engine.
//!
//! Passive elements conserve total photon number, so with `dim` greater than
//! the total particle number they introduce no truncation error at all.
//! Squeezers populate arbitrarily high occupations; amplitude weight that a
//! squeezer tries to push past the cutoff is recorded in `norm_deficit`, and
//! [`converged_moments`] escalates the cutoff until the moments stop moving.

use nalgebra::Matrix3;
use num_complex::Complex64;
use thiserror::Error;

use crate::cfpoly::tritter_unitary;
use crate::moments::MomentSet;

/// Maximum tolerated deviation from unitarity for passive maps.
pub const UNITARITY_TOL: f64 = 1e-12;
/// A truncation-loss increment above this aborts a squeeze.
pub const DEFAULT_DEFICIT_TOL: f64 = 1e-10;
/// Taylor series for generator exponentials stops once a term's norm falls
/// below this.
const TAYLOR_TERM_TOL: f64 = 1e-14;
/// Hard cap for cutoff escalation in [`converged_moments`].
const CUTOFF_CAP: usize = 96;

fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[derive(Debug, Error)]
pub enum FockError {
    #[error("occupation {occ} does not fit cutoff {dim}: increase cutoff")]
    CutoffTooSmall { occ: u32, dim: usize },
    #[error("matrix is not unitary within {UNITARITY_TOL:e}")]
    NonUnitary,
    #[error("principal matrix logarithm did not converge (eigenvalue at -1?)")]
    PrincipalLog,
    #[error("generator exponential did not converge within {max_terms} terms")]
    NoConvergence { max_terms: usize },
    #[error("truncation loss {lost:.3e} exceeds {tol:.3e}: increase cutoff")]
    IncreaseCutoff { lost: f64, tol: f64 },
    #[error("accumulated norm deficit {deficit:.3e} exceeds {tol:.3e}")]
    DeficitTooLarge { deficit: f64, tol: f64 },
    #[error("moments did not converge up to cutoff {cap}")]
    NoCutoffConvergence { cap: usize },
}

/// State vector over |n₀,n₁,n₂⟩ with 0 ≤ nⱼ < `dim`, stored row-major
/// (index = (n₀·dim + n₁)·dim + n₂).
#[derive(Clone, Debug)]
pub struct FockState3 {
    dim: usize,
    amps: Vec<Complex64>,
    norm_deficit: f64,
}

impl FockState3 {
    #[must_use]
    pub fn vacuum(dim: usize) -> Self {
        assert!(dim >= 1, "cutoff must be at least 1");
        let mut amps = vec![c64(0.0, 0.0); dim * dim * dim];
        amps[0] = c64(1.0, 0.0);
        FockState3 {
            dim,
            amps,
            norm_deficit: 0.0,
        }
    }

    /// Product Fock state |n₀,n₁,n₂⟩.
    pub fn make_fock_state(n: [u32; 3], dim: usize) -> Result<Self, FockError> {
        let mut s = Self::vacuum(dim);
        for &occ in &n {
            if occ as usize >= dim {
                return Err(FockError::CutoffTooSmall { occ, dim });
            }
        }
        s.amps[0] = c64(0.0, 0.0);
        let idx = s.index(n[0] as usize, n[1] as usize, n[2] as usize);
        s.amps[idx] = c64(1.0, 0.0);
        Ok(s)
    }

    /// W-type state (|N,0,0⟩ + |0,N,0⟩ + |0,0,N⟩)/√3.
    pub fn make_w_state(n: u32, dim: usize) -> Result<Self, FockError> {
        assert!(n >= 1, "W state needs at least one particle");
        if n as usize >= dim {
            return Err(FockError::CutoffTooSmall { occ: n, dim });
        }
        let mut s = Self::vacuum(dim);
        s.amps[0] = c64(0.0, 0.0);
        let a = c64(1.0 / 3.0_f64.sqrt(), 0.0);
        let n = n as usize;
        for idx in [s.index(n, 0, 0), s.index(0, n, 0), s.index(0, 0, n)] {
            s.amps[idx] = a;
        }
        Ok(s)
    }

    #[inline]
    fn index(&self, n0: usize, n1: usize, n2: usize) -> usize {
        (n0 * self.dim + n1) * self.dim + n2
    }

    #[must_use]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[must_use]
    pub fn norm_deficit(&self) -> f64 {
        self.norm_deficit
    }

    #[must_use]
    pub fn amplitude(&self, n0: usize, n1: usize, n2: usize) -> Complex64 {
        self.amps[self.index(n0, n1, n2)]
    }

    #[must_use]
    pub fn norm_sq(&self) -> f64 {
        self.amps.iter().map(Complex64::norm_sqr).sum()
    }

    /// Apply the passive mode transformation with unitary `u` by
    /// exponentiating its number-conserving generator.
    ///
    /// The generator is Ĥ = Σⱼₖ hⱼₖ aⱼ†aₖ with h = i·log u (principal branch,
    /// hermitized), so that exp(−iĤ) maps a single photon in mode j to the
    /// amplitudes in column j of `u`. Total photon number is conserved, so
    /// with an adequate cutoff this stage is numerically exact; the
    /// exponential is evaluated by a sub-stepped Taylor series to keep every
    /// partial sum well conditioned.
    pub fn apply_passive_unitary(&mut self, u: &Matrix3<Complex64>) -> Result<(), FockError> {
        let id = Matrix3::<Complex64>::identity();
        let dev = (u.adjoint() * u - id)
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max);
        if dev > UNITARITY_TOL {
            return Err(FockError::NonUnitary);
        }
        let h = hermitian_generator(u)?;

        // Size the substeps from the highest occupied level, not the cutoff:
        // passive maps never raise it, and for an N-photon state it is far
        // below the escalated cutoffs.
        let mut occ_max = 0usize;
        let d = self.dim;
        let mut idx = 0usize;
        for n0 in 0..d {
            for n1 in 0..d {
                for n2 in 0..d {
                    if self.amps[idx].norm_sqr() > 0.0 {
                        occ_max = occ_max.max(n0).max(n1).max(n2);
                    }
                    idx += 1;
                }
            }
        }
        let habs: f64 = h.iter().map(|c| c.norm()).sum();
        let theta = habs * (occ_max + 1) as f64;
        let substeps = (theta / 2.0).ceil().max(1.0) as usize;
        // Per substep the operator is A = (−i/substeps)·Ĥ.
        let coeff = c64(0.0, -1.0 / substeps as f64);
        let hs: [[Complex64; 3]; 3] =
            std::array::from_fn(|j| std::array::from_fn(|k| h[(j, k)] * coeff));

        let max_terms = 10 * self.dim;
        let sqrt_tab: Vec<f64> = (0..=self.dim).map(|i| (i as f64).sqrt()).collect();
        let mut term = vec![c64(0.0, 0.0); self.amps.len()];
        let mut next = vec![c64(0.0, 0.0); self.amps.len()];
        let mut leak_total = 0.0;

        for _ in 0..substeps {
            term.copy_from_slice(&self.amps);
            let mut converged = false;
            for k in 1..=max_terms {
                let leak = self.number_generator_apply(&hs, &sqrt_tab, &term, &mut next);
                let inv_k = 1.0 / k as f64;
                let mut norm_sq = 0.0;
                for (t, n) in term.iter_mut().zip(next.iter()) {
                    *t = n * inv_k;
                    norm_sq += t.norm_sqr();
                }
                leak_total += leak * inv_k * inv_k;
                for (psi, t) in self.amps.iter_mut().zip(term.iter()) {
                    *psi += t;
                }
                if norm_sq.sqrt() < TAYLOR_TERM_TOL {
                    converged = true;
                    break;
                }
            }
            if !converged {
                return Err(FockError::NoConvergence { max_terms });
            }
        }
        self.norm_deficit += leak_total;
        Ok(())
    }

    /// out ← Σⱼₖ hsⱼₖ aⱼ†aₖ · src. Returns the squared norm of amplitudes a
    /// raising operator tried to push past the cutoff (zero whenever the
    /// cutoff exceeds the total photon number).
    fn number_generator_apply(
        &self,
        hs: &[[Complex64; 3]; 3],
        sqrt_tab: &[f64],
        src: &[Complex64],
        out: &mut [Complex64],
    ) -> f64 {
        let d = self.dim;
        let stride = [d * d, d, 1usize];
        out.fill(c64(0.0, 0.0));
        let mut leak = 0.0;
        let mut idx = 0usize;
        for n0 in 0..d {
            for n1 in 0..d {
                for n2 in 0..d {
                    let a = src[idx];
                    if a.norm_sqr() > 0.0 {
                        let n = [n0, n1, n2];
                        let diag = hs[0][0] * n0 as f64 + hs[1][1] * n1 as f64 + hs[2][2] * n2 as f64;
                        out[idx] += a * diag;
                        for j in 0..3 {
                            for k in 0..3 {
                                if j == k || n[k] == 0 {
                                    continue;
                                }
                                let f = sqrt_tab[n[k]] * sqrt_tab[n[j] + 1];
                                let v = hs[j][k] * (f * a);
                                if n[j] + 1 < d {
                                    out[idx + stride[j] - stride[k]] += v;
                                } else {
                                    leak += v.norm_sqr();
                                }
                            }
                        }
                    }
                    idx += 1;
                }
            }
        }
        leak
    }

    /// Apply the single-mode squeezer exp[(r/2)(a†² − a²)] to `mode`.
    ///
    /// Amplitude weight pushed past the cutoff is accumulated into
    /// `norm_deficit`; if one squeeze loses more than `DEFAULT_DEFICIT_TOL`
    /// the call fails and the caller should increase the cutoff.
    pub fn apply_squeeze(&mut self, mode: usize, r: f64) -> Result<(), FockError> {
        assert!(mode < 3, "mode index out of range");
        if r == 0.0 {
            return Ok(());
        }
        let theta = r.abs() * self.dim as f64;
        let substeps = theta.ceil().max(1.0) as usize;
        let half_r = 0.5 * r / substeps as f64;

        let max_terms = 10 * self.dim;
        let mut term = vec![c64(0.0, 0.0); self.amps.len()];
        let mut next = vec![c64(0.0, 0.0); self.amps.len()];
        let mut lost = 0.0;

        for _ in 0..substeps {
            term.copy_from_slice(&self.amps);
            let mut converged = false;
            for k in 1..=max_terms {
                let leak = self.squeeze_generator_apply(mode, half_r, &term, &mut next);
                let inv_k = 1.0 / k as f64;
                let mut norm_sq = 0.0;
                for (t, n) in term.iter_mut().zip(next.iter()) {
                    *t = n * inv_k;
                    norm_sq += t.norm_sqr();
                }
                lost += leak * inv_k * inv_k;
                for (psi, t) in self.amps.iter_mut().zip(term.iter()) {
                    *psi += t;
                }
                if norm_sq.sqrt() < TAYLOR_TERM_TOL {
                    converged = true;
                    break;
                }
            }
            if !converged {
                return Err(FockError::NoConvergence { max_terms });
            }
        }
        self.norm_deficit += lost;
        if lost > DEFAULT_DEFICIT_TOL {
            return Err(FockError::IncreaseCutoff {
                lost,
                tol: DEFAULT_DEFICIT_TOL,
            });
        }
        Ok(())
    }

    /// out ← half_r (a†² − a²) on `mode` · src; returns squared norm of the
    /// weight the a†² part tried to place beyond the cutoff.
    fn squeeze_generator_apply(
        &self,
        mode: usize,
        half_r: f64,
        src: &[Complex64],
        out: &mut [Complex64],
    ) -> f64 {
        let d = self.dim;
        let stride = [d * d, d, 1usize][mode];
        out.fill(c64(0.0, 0.0));
        let mut leak = 0.0;
        let mut idx = 0usize;
        for n0 in 0..d {
            for n1 in 0..d {
                for n2 in 0..d {
                    let a = src[idx];
                    if a.norm_sqr() > 0.0 {
                        let nm = [n0, n1, n2][mode];
                        // a†² term
                        let up = half_r * (((nm + 1) * (nm + 2)) as f64).sqrt();
                        if nm + 2 < d {
                            out[idx + 2 * stride] += a * up;
                        } else {
                            leak += (a * up).norm_sqr();
                        }
                        // −a² term
                        if nm >= 2 {
                            let down = half_r * ((nm * (nm - 1)) as f64).sqrt();
                            out[idx - 2 * stride] -= a * down;
                        }
                    }
                    idx += 1;
                }
            }
        }
        leak
    }

    /// Apply phase rotations e^{iφ₀n₀} and e^{iφ₁n₁} to the signal modes.
    pub fn apply_phase(&mut self, phi0: f64, phi1: f64) {
        let d = self.dim;
        for n0 in 0..d {
            for n1 in 0..d {
                let ph = c64(0.0, phi0 * n0 as f64 + phi1 * n1 as f64).exp();
                for n2 in 0..d {
                    let idx = self.index(n0, n1, n2);
                    self.amps[idx] *= ph;
                }
            }
        }
    }

    /// Photon-number moments as diagonal sums over |amplitude|². The state is
    /// deliberately *not* renormalized; the accumulated `norm_deficit` must be
    /// within tolerance.
    pub fn measure_moments(&self) -> Result<MomentSet, FockError> {
        if self.norm_deficit > DEFAULT_DEFICIT_TOL {
            return Err(FockError::DeficitTooLarge {
                deficit: self.norm_deficit,
                tol: DEFAULT_DEFICIT_TOL,
            });
        }
        let d = self.dim;
        let mut mean = [0.0; 3];
        let mut second = [0.0; 3];
        let mut cross = [0.0; 3];
        let mut intra4 = [0.0; 3];
        let mut idx = 0usize;
        for n0 in 0..d {
            for n1 in 0..d {
                for n2 in 0..d {
                    let p = self.amps[idx].norm_sqr();
                    if p > 0.0 {
                        let n = [n0 as f64, n1 as f64, n2 as f64];
                        for j in 0..3 {
                            mean[j] += n[j] * p;
                            second[j] += n[j] * n[j] * p;
                            intra4[j] += n[j] * (n[j] - 1.0) * p;
                        }
                        cross[0] += n[0] * n[1] * p;
                        cross[1] += n[0] * n[2] * p;
                        cross[2] += n[1] * n[2] * p;
                    }
                    idx += 1;
                }
            }
        }
        Ok(MomentSet {
            mean,
            second,
            cross,
            intra4,
        })
    }
}

/// Hermitian generator h with exp(−ih) = u, via the principal logarithm.
fn hermitian_generator(u: &Matrix3<Complex64>) -> Result<Matrix3<Complex64>, FockError> {
    let log = principal_log(u)?;
    let h_raw = log * c64(0.0, 1.0);
    let h = (h_raw + h_raw.adjoint()) * c64(0.5, 0.0);
    // Self-check: the hermitized generator must reproduce u.
    let back = expm3(&(h * c64(0.0, -1.0)));
    if (back - u).norm() > 1e-10 {
        return Err(FockError::PrincipalLog);
    }
    Ok(h)
}

/// Principal matrix logarithm by inverse scaling-and-squaring: repeated
/// Denman–Beavers square roots bring the matrix near the identity, a Mercator
/// series evaluates log there, and the result is scaled back. Fails for
/// spectra touching the branch cut at −1.
fn principal_log(u: &Matrix3<Complex64>) -> Result<Matrix3<Complex64>, FockError> {
    let id = Matrix3::<Complex64>::identity();
    let mut x = *u;
    let mut splits = 0u32;
    while (x - id).norm() > 0.3 {
        if splits >= 48 {
            return Err(FockError::PrincipalLog);
        }
        x = sqrtm_db(&x)?;
        splits += 1;
    }
    let e = x - id;
    let mut pow = e;
    let mut acc = e;
    let mut k = 1u32;
    loop {
        k += 1;
        if k > 200 {
            return Err(FockError::PrincipalLog);
        }
        pow *= e;
        let sign = if k % 2 == 0 { -1.0 } else { 1.0 };
        let t = pow * c64(sign / f64::from(k), 0.0);
        acc += t;
        if t.norm() < 1e-17 {
            break;
        }
    }
    Ok(acc * c64(f64::from(1u32 << splits.min(31)), 0.0))
}

/// Denman–Beavers iteration for the principal matrix square root.
fn sqrtm_db(a: &Matrix3<Complex64>) -> Result<Matrix3<Complex64>, FockError> {
    let mut y = *a;
    let mut z = Matrix3::<Complex64>::identity();
    for _ in 0..64 {
        let yi = y.try_inverse().ok_or(FockError::PrincipalLog)?;
        let zi = z.try_inverse().ok_or(FockError::PrincipalLog)?;
        let yn = (y + zi) * c64(0.5, 0.0);
        let zn = (z + yi) * c64(0.5, 0.0);
        let delta = (yn - y).norm();
        y = yn;
        z = zn;
        if delta < 1e-15 * y.norm().max(1.0) {
            return Ok(y);
        }
    }
    Err(FockError::PrincipalLog)
}

/// 3×3 matrix exponential by scaling-and-squaring Taylor summation.
fn expm3(a: &Matrix3<Complex64>) -> Matrix3<Complex64> {
    let norm = a.norm();
    let s = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let b = *a * c64(1.0 / f64::from(1u32 << s.min(31)), 0.0);
    let mut acc = Matrix3::<Complex64>::identity();
    let mut term = Matrix3::<Complex64>::identity();
    for k in 1..=40 {
        term = term * b * c64(1.0 / f64::from(k), 0.0);
        acc += term;
        if term.norm() < 1e-18 {
            break;
        }
    }
    for _ in 0..s {
        acc = acc * acc;
    }
    acc
}

/// Probe selection for the Fock-space pipeline.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FockProbe {
    WState { n: u32 },
    Fock { n: [u32; 3] },
}

impl FockProbe {
    #[must_use]
    pub fn total_n(&self) -> u32 {
        match self {
            FockProbe::WState { n } => *n,
            FockProbe::Fock { n } => n.iter().sum(),
        }
    }

    pub fn build(&self, dim: usize) -> Result<FockState3, FockError> {
        match self {
            FockProbe::WState { n } => FockState3::make_w_state(*n, dim),
            FockProbe::Fock { n } => FockState3::make_fock_state(*n, dim),
        }
    }
}

/// Run the full pipeline (tritter → squeezers → phases) at a fixed cutoff.
pub fn run_pipeline(
    probe: &FockProbe,
    gains: [f64; 3],
    phases: [f64; 2],
    dim: usize,
) -> Result<FockState3, FockError> {
    let mut state = probe.build(dim)?;
    state.apply_passive_unitary(&tritter_unitary())?;
    for (mode, &r) in gains.iter().enumerate() {
        state.apply_squeeze(mode, r)?;
    }
    state.apply_phase(phases[0], phases[1]);
    Ok(state)
}

/// Moments with automatic cutoff control: runs the pipeline at cutoffs d and
/// d+8 and accepts the d+8 result once every entry agrees within `rel_tol`
/// (relative, floored at 1 in the denominator); otherwise the cutoff doubles,
/// up to a hard cap. Returns the accepted moments and the cutoff that
/// produced them.
pub fn converged_moments(
    probe: &FockProbe,
    gains: [f64; 3],
    phases: [f64; 2],
    rel_tol: f64,
) -> Result<(MomentSet, usize), FockError> {
    let mut d = (probe.total_n() as usize + 1).max(2);
    loop {
        let pair = run_and_measure(probe, gains, phases, d)
            .and_then(|lo| run_and_measure(probe, gains, phases, d + 8).map(|hi| (lo, hi)));
        match pair {
            Ok((lo, hi)) => {
                if lo.max_rel_discrepancy(&hi) <= rel_tol {
                    return Ok((hi, d + 8));
                }
            }
            // Cutoff-related failures escalate; anything else is structural.
            Err(
                FockError::IncreaseCutoff { .. }
                | FockError::DeficitTooLarge { .. }
                | FockError::CutoffTooSmall { .. }
                | FockError::NoConvergence { .. },
            ) => {}
            Err(e) => return Err(e),
        }
        d *= 2;
        if d > CUTOFF_CAP {
            return Err(FockError::NoCutoffConvergence { cap: CUTOFF_CAP });
        }
    }
}

fn run_and_measure(
    probe: &FockProbe,
    gains: [f64; 3],
    phases: [f64; 2],
    dim: usize,
) -> Result<MomentSet, FockError> {
    run_pipeline(probe, gains, phases, dim)?.measure_moments()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn fock_state_rejects_overfull_mode() {
        assert!(matches!(
            FockState3::make_fock_state([4, 0, 0], 4),
            Err(FockError::CutoffTooSmall { occ: 4, dim: 4 })
        ));
    }

    #[test]
    fn single_photon_maps_to_unitary_column() {
        let mut s = FockState3::make_fock_state([1, 0, 0], 3).unwrap();
        let u = tritter_unitary();
        s.apply_passive_unitary(&u).unwrap();
        let got = [
            s.amplitude(1, 0, 0),
            s.amplitude(0, 1, 0),
            s.amplitude(0, 0, 1),
        ];
        for j in 0..3 {
            assert!(
                (got[j] - u[(j, 0)]).norm() < 1e-12,
                "amplitude {j}: got {:?}, want {:?}",
                got[j],
                u[(j, 0)]
            );
        }
    }

    #[test]
    fn passive_conserves_norm_and_total_number() {
        let mut s = FockState3::make_w_state(3, 4).unwrap();
        s.apply_passive_unitary(&tritter_unitary()).unwrap();
        assert_relative_eq!(s.norm_sq(), 1.0, max_relative = 1e-12);
        assert_eq!(s.norm_deficit(), 0.0);
        let ms = s.measure_moments().unwrap();
        assert_relative_eq!(ms.mean.iter().sum::<f64>(), 3.0, max_relative = 1e-12);
    }

    #[test]
    fn non_unitary_matrix_rejected() {
        let mut s = FockState3::vacuum(3);
        let bad = Matrix3::from_diagonal_element(Complex64::new(1.1, 0.0));
        assert!(matches!(
            s.apply_passive_unitary(&bad),
            Err(FockError::NonUnitary)
        ));
    }

    #[test]
    fn log_branch_cut_detected() {
        let mut s = FockState3::vacuum(3);
        let mut u = Matrix3::<Complex64>::identity();
        u[(0, 0)] = Complex64::new(-1.0, 0.0);
        assert!(matches!(
            s.apply_passive_unitary(&u),
            Err(FockError::PrincipalLog)
        ));
    }

    #[test]
    fn squeezed_vacuum_mean_occupation() {
        let r = 0.5_f64;
        let mut s = FockState3::vacuum(32);
        s.apply_squeeze(0, r).unwrap();
        let ms = s.measure_moments().unwrap();
        let s2 = r.sinh().powi(2);
        assert_relative_eq!(ms.mean[0], s2, max_relative = 1e-8);
        assert_relative_eq!(ms.intra4[0], s2 + 3.0 * s2 * s2, max_relative = 1e-8);
        assert_relative_eq!(ms.mean[1], 0.0);
    }

    #[test]
    fn squeeze_norm_drift_small() {
        let mut s = FockState3::vacuum(32);
        s.apply_squeeze(1, 0.5).unwrap();
        assert_relative_eq!(s.norm_sq(), 1.0, epsilon = 1e-10);
    }

    #[test]
    fn squeeze_on_tight_cutoff_errors() {
        let mut s = FockState3::vacuum(4);
        match s.apply_squeeze(0, 1.5) {
            Err(FockError::IncreaseCutoff { lost, .. }) => assert!(lost > DEFAULT_DEFICIT_TOL),
            other => panic!("expected IncreaseCutoff, got {other:?}"),
        }
    }

    #[test]
    fn w1_after_tritter_variance_covariance() {
        let mut s = FockState3::make_w_state(1, 2).unwrap();
        s.apply_passive_unitary(&tritter_unitary()).unwrap();
        let ms = s.measure_moments().unwrap();
        assert_relative_eq!(ms.variance(0), 2.0 / 9.0, max_relative = 1e-10);
        assert_relative_eq!(ms.covariance(0, 1), -1.0 / 9.0, max_relative = 1e-10);
    }

    #[test]
    fn phases_leave_moments_unchanged() {
        let (a, _) = converged_moments(&FockProbe::WState { n: 2 }, [0.3; 3], [0.0, 0.0], 1e-8)
            .unwrap();
        let (b, _) = converged_moments(&FockProbe::WState { n: 2 }, [0.3; 3], [1.2, -0.7], 1e-8)
            .unwrap();
        assert!(a.max_rel_discrepancy(&b) < 1e-12);
    }

    #[test]
    fn unsqueezed_scenario_converges_at_minimal_cutoff() {
        let (_, cutoff) =
            converged_moments(&FockProbe::WState { n: 2 }, [0.0; 3], [0.0, 0.0], 1e-8).unwrap();
        // Base cutoff N+1 = 3 already agrees with 3+8: the passive stage is
        // exact there.
        assert_eq!(cutoff, 11);
    }
}
