//! Sparse-polynomial engine for normally ordered characteristic functions.
//!
//! For a three-mode state ρ the normally ordered characteristic function is
//! χ(λ) = Tr[ρ exp(Σⱼ λⱼ aⱼ†) exp(−Σⱼ λⱼ* aⱼ)]. For states with finitely many
//! photons χ is a *polynomial* in the six variables
//! (λ₀, λ₀*, λ₁, λ₁*, λ₂, λ₂*), so every moment ⟨Πⱼ aⱼ†^pⱼ aⱼ^qⱼ⟩ can be read
//! off a coefficient exactly. The interferometer pipeline (tritter, per-mode
//! squeezers, phase shifts) acts on χ by linear substitution of the variables,
//! which preserves total degree; a polynomial truncated at `max_degree`
//! therefore carries its low-order moments exactly through the whole pipeline.
//!
//! One subtlety: a plain substitution is exact for the *symmetric-ordered*
//! characteristic function, where every Gaussian unitary acts as
//! S† D(λ) S = D(λ̃) on the displacement operator. Passive maps (tritter,
//! phases) leave Σⱼ|λⱼ|² invariant, so for those the same substitution is also
//! exact on the normally ordered χ. Squeezers are not passive; applying them
//! as a bare substitution on the normally ordered χ would, e.g., leave the
//! vacuum fixed and miss ⟨n⟩ = sinh²r entirely. [`CFPoly::to_weyl`] and
//! [`CFPoly::to_normal`] convert between the two orderings (multiplication by
//! exp(∓Σⱼ|λⱼ|²/2), truncated), and [`run_pipeline`] wraps the full
//! convert → substitute → convert-back sequence. The conversion factors only
//! ever raise total degree, so coefficients up to `max_degree` remain exact.

use std::collections::BTreeMap;

use nalgebra::{Matrix3, SMatrix};
use num_complex::Complex64;
use thiserror::Error;

/// Default truncation degree; degree 4 carries every moment that enters the
/// 2×2 quantum Fisher information matrix and the pair correlations.
pub const DEFAULT_MAX_DEGREE: u32 = 4;

/// Coefficients with magnitude below this are dropped after substitutions.
const PRUNE_EPS: f64 = 1e-15;

/// Exponent vector of one monomial. Index 2j holds the power of λⱼ and index
/// 2j+1 the power of λⱼ*, for modes j = 0, 1, 2.
pub type Exponents = [u8; 6];

/// Total degree of a monomial.
#[must_use]
pub fn total_degree(e: &Exponents) -> u32 {
    e.iter().map(|&x| u32::from(x)).sum()
}

fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Errors from the characteristic-function engine.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum CfError {
    /// A moment of total degree beyond the truncation was requested.
    #[error("moment of degree {degree} not representable at max_degree {max_degree}: increase max_degree")]
    DegreeOverflow { degree: u32, max_degree: u32 },
}

/// A truncated sparse polynomial in (λ₀, λ₀*, λ₁, λ₁*, λ₂, λ₂*).
///
/// Terms are keyed by [`Exponents`] in a `BTreeMap`, so iteration order (and
/// therefore floating-point summation order) is deterministic.
#[derive(Clone, Debug)]
pub struct CFPoly {
    max_degree: u32,
    terms: BTreeMap<Exponents, Complex64>,
}

impl CFPoly {
    /// The polynomial `1` (characteristic function of any normalized state at
    /// λ = 0 is 1; this is the vacuum's full χ).
    #[must_use]
    pub fn one(max_degree: u32) -> Self {
        let mut p = Self::empty(max_degree);
        p.add_term([0; 6], c64(1.0, 0.0));
        p
    }

    fn empty(max_degree: u32) -> Self {
        CFPoly {
            max_degree,
            terms: BTreeMap::new(),
        }
    }

    #[must_use]
    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    /// Number of stored terms.
    #[must_use]
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    #[must_use]
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Iterate over (exponents, coefficient) pairs in deterministic order.
    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &Complex64)> {
        self.terms.iter()
    }

    /// Coefficient of the given monomial (zero if absent).
    #[must_use]
    pub fn coefficient(&self, e: &Exponents) -> Complex64 {
        self.terms.get(e).copied().unwrap_or_else(|| c64(0.0, 0.0))
    }

    /// Add `c` to the coefficient of `e`, silently discarding terms beyond
    /// the truncation degree.
    fn add_term(&mut self, e: Exponents, c: Complex64) {
        if total_degree(&e) > self.max_degree || c == c64(0.0, 0.0) {
            return;
        }
        *self.terms.entry(e).or_insert_with(|| c64(0.0, 0.0)) += c;
    }

    fn prune(mut self) -> Self {
        self.terms.retain(|_, c| c.norm() >= PRUNE_EPS);
        self
    }

    /// Substitute Λ → M·Λ, where Λ = (λ₀, λ₀*, λ₁, λ₁*, λ₂, λ₂*).
    ///
    /// Every monomial expands into terms of the *same* total degree, so the
    /// truncated polynomial remains exact up to `max_degree`.
    #[must_use]
    pub fn apply_linear_map(&self, map: &LinearMap) -> CFPoly {
        // Sparse rows of M: row v lists the (variable, coefficient) pairs that
        // replace Λ_v.
        let mut rows: [Vec<(usize, Complex64)>; 6] = Default::default();
        for (v, row) in rows.iter_mut().enumerate() {
            for w in 0..6 {
                let a = map.m[(v, w)];
                if a.norm() > 0.0 {
                    row.push((w, a));
                }
            }
        }

        let mut out = CFPoly::empty(self.max_degree);
        for (e, &coeff) in &self.terms {
            // Expand coeff · Π_v (row_v · Λ)^{e_v} term by term.
            let mut acc: BTreeMap<Exponents, Complex64> = BTreeMap::new();
            acc.insert([0; 6], coeff);
            for (v, row) in rows.iter().enumerate() {
                for _ in 0..e[v] {
                    let mut next: BTreeMap<Exponents, Complex64> = BTreeMap::new();
                    for (f, c) in &acc {
                        for &(w, a) in row {
                            let mut g = *f;
                            g[w] += 1;
                            *next.entry(g).or_insert_with(|| c64(0.0, 0.0)) += c * a;
                        }
                    }
                    acc = next;
                }
            }
            for (f, c) in acc {
                out.add_term(f, c);
            }
        }
        out.prune()
    }

    /// Multiply by exp(α Σⱼ λⱼλⱼ*), truncated at `max_degree`.
    fn mul_number_gaussian(&self, alpha: f64) -> CFPoly {
        let mut out = CFPoly::empty(self.max_degree);
        for (e, &coeff) in &self.terms {
            let budget = (self.max_degree - total_degree(e)) / 2;
            for m0 in 0..=budget {
                for m1 in 0..=(budget - m0) {
                    for m2 in 0..=(budget - m0 - m1) {
                        let mut factor = 1.0;
                        for (m, _) in [(m0, 0), (m1, 1), (m2, 2)] {
                            for i in 1..=m {
                                factor *= alpha / f64::from(i);
                            }
                        }
                        let mut f = *e;
                        f[0] += m0 as u8;
                        f[1] += m0 as u8;
                        f[2] += m1 as u8;
                        f[3] += m1 as u8;
                        f[4] += m2 as u8;
                        f[5] += m2 as u8;
                        out.add_term(f, coeff * factor);
                    }
                }
            }
        }
        out.prune()
    }

    /// Convert a normally ordered χ to the symmetric-ordered (Weyl) χ.
    #[must_use]
    pub fn to_weyl(&self) -> CFPoly {
        self.mul_number_gaussian(-0.5)
    }

    /// Convert a symmetric-ordered (Weyl) χ back to normal ordering.
    #[must_use]
    pub fn to_normal(&self) -> CFPoly {
        self.mul_number_gaussian(0.5)
    }

    /// Read off ⟨Πⱼ aⱼ†^pⱼ aⱼ^qⱼ⟩ from a normally ordered χ.
    ///
    /// Expanding the two exponentials gives
    /// χ = Σ ⟨Π a†^p a^q⟩ Πⱼ λⱼ^pⱼ (−λⱼ*)^qⱼ / (pⱼ! qⱼ!), so the moment is the
    /// stored coefficient times Πⱼ pⱼ! qⱼ! (−1)^qⱼ.
    pub fn extract_moment(&self, p: [u8; 3], q: [u8; 3]) -> Result<Complex64, CfError> {
        let e = [p[0], q[0], p[1], q[1], p[2], q[2]];
        let degree = total_degree(&e);
        if degree > self.max_degree {
            return Err(CfError::DegreeOverflow {
                degree,
                max_degree: self.max_degree,
            });
        }
        let mut factor = 1.0;
        let mut sign_pow = 0u32;
        for j in 0..3 {
            for i in 1..=u32::from(p[j]) {
                factor *= f64::from(i);
            }
            for i in 1..=u32::from(q[j]) {
                factor *= f64::from(i);
            }
            sign_pow += u32::from(q[j]);
        }
        let sign = if sign_pow % 2 == 0 { 1.0 } else { -1.0 };
        Ok(self.coefficient(&e) * (factor * sign))
    }

    /// Check the Hermiticity relation of a valid characteristic function:
    /// the coefficient at (q,p) must equal the conjugate of the coefficient
    /// at (p,q) times (−1)^(|p|+|q|).
    #[must_use]
    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.terms.iter().all(|(e, c)| {
            let sw = [e[1], e[0], e[3], e[2], e[5], e[4]];
            let sign = if total_degree(e) % 2 == 0 { 1.0 } else { -1.0 };
            (self.coefficient(&sw) - c.conj() * sign).norm() <= tol
        })
    }
}

/// Exact Laguerre coefficients: Lₙ(x) = Σₘ C(n,m) (−1)^m x^m / m!, with the
/// binomials and factorials computed in integer arithmetic (u128) before
/// conversion to f64. Returns coefficients for m = 0..=m_max.
fn laguerre_coeffs(n: u32, m_max: u32) -> Vec<f64> {
    assert!(n <= 34, "Laguerre order {n} exceeds exact-integer range");
    let top = m_max.min(n);
    let mut out = Vec::with_capacity(top as usize + 1);
    for m in 0..=top {
        let b = binomial_u128(n, m);
        let f = factorial_u128(m);
        let c = (b as f64) / (f as f64);
        out.push(if m % 2 == 0 { c } else { -c });
    }
    out
}

fn binomial_u128(n: u32, k: u32) -> u128 {
    // Pascal-style product form, exact in u128 for n ≤ 34.
    let k = k.min(n - k.min(n));
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * u128::from(n - i) / u128::from(i + 1);
    }
    acc
}

fn factorial_u128(n: u32) -> u128 {
    (1..=u128::from(n)).product::<u128>().max(1)
}

/// Normally ordered χ of the N-particle W-type state
/// (|N,0,0⟩ + |0,N,0⟩ + |0,0,N⟩)/√3, truncated at `max_degree`.
///
/// The diagonal (populations) part is ⅓ Σᵢ L_N(|λᵢ|²); the path coherences
/// contribute ((−1)^N / (3·N!)) Σ_{k≠l} (λₖ λₗ*)^N, which has total degree 2N
/// and is therefore present in the truncation only when 2N ≤ `max_degree`.
#[must_use]
pub fn make_w_state_cf(n: u32, max_degree: u32) -> CFPoly {
    assert!(n >= 1, "W state needs at least one particle");
    let mut p = CFPoly::empty(max_degree);
    let lag = laguerre_coeffs(n, max_degree / 2);
    for j in 0..3usize {
        for (m, &c) in lag.iter().enumerate() {
            let mut e = [0u8; 6];
            e[2 * j] = m as u8;
            e[2 * j + 1] = m as u8;
            p.add_term(e, c64(c / 3.0, 0.0));
        }
    }
    if 2 * n <= max_degree {
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        let pref = sign / (3.0 * factorial_u128(n) as f64);
        for k in 0..3usize {
            for l in 0..3usize {
                if k != l {
                    let mut e = [0u8; 6];
                    e[2 * k] = n as u8;
                    e[2 * l + 1] = n as u8;
                    p.add_term(e, c64(pref, 0.0));
                }
            }
        }
    }
    p
}

/// Normally ordered χ of the product Fock state |n₀, n₁, n₂⟩:
/// Πⱼ L_{nⱼ}(|λⱼ|²), truncated at `max_degree`.
#[must_use]
pub fn make_fock_product_cf(n0: u32, n1: u32, n2: u32, max_degree: u32) -> CFPoly {
    let mut p = CFPoly::empty(max_degree);
    let budget = max_degree / 2;
    let lags = [
        laguerre_coeffs(n0, budget),
        laguerre_coeffs(n1, budget),
        laguerre_coeffs(n2, budget),
    ];
    for (m0, &c0) in lags[0].iter().enumerate() {
        for (m1, &c1) in lags[1].iter().enumerate() {
            for (m2, &c2) in lags[2].iter().enumerate() {
                if 2 * (m0 + m1 + m2) as u32 > max_degree {
                    continue;
                }
                let e = [m0 as u8, m0 as u8, m1 as u8, m1 as u8, m2 as u8, m2 as u8];
                p.add_term(e, c64(c0 * c1 * c2, 0.0));
            }
        }
    }
    p
}

/// The balanced three-mode splitter
/// U = (1/√3) [[1, ω, ω], [ω, 1, ω], [ω, ω, 1]] with ω = e^{2πi/3}.
#[must_use]
pub fn tritter_unitary() -> Matrix3<Complex64> {
    let w = c64(0.0, 2.0 * std::f64::consts::PI / 3.0).exp();
    let s = 1.0 / 3.0_f64.sqrt();
    let one = c64(s, 0.0);
    let om = w * s;
    Matrix3::new(one, om, om, om, one, om, om, om, one)
}

/// A linear substitution Λ → M·Λ on the six phase-space variables.
///
/// Valid maps satisfy the conjugation-consistency condition: row 2j+1 is the
/// elementwise conjugate of row 2j with the (λ, λ*) columns swapped inside
/// each mode pair, so that real-state Hermiticity survives substitution.
#[derive(Clone, Debug)]
pub struct LinearMap {
    m: SMatrix<Complex64, 6, 6>,
}

impl LinearMap {
    #[must_use]
    pub fn identity() -> Self {
        LinearMap {
            m: SMatrix::identity(),
        }
    }

    #[must_use]
    pub fn matrix(&self) -> &SMatrix<Complex64, 6, 6> {
        &self.m
    }

    /// Substitution induced on χ by a passive mode transformation with
    /// unitary `u`: the λ block transforms with u† and the λ* block with uᵀ.
    ///
    /// Convention check: a single photon in mode j evolves to amplitudes given
    /// by column j of `u`, matching the Fock-space engine's exp(−iĤ) with
    /// h = i·log u.
    #[must_use]
    pub fn from_mode_unitary(u: &Matrix3<Complex64>) -> Self {
        let mut m: SMatrix<Complex64, 6, 6> = SMatrix::zeros();
        for j in 0..3 {
            for k in 0..3 {
                let a = u[(k, j)].conj(); // (u†)_{jk}
                m[(2 * j, 2 * k)] = a;
                m[(2 * j + 1, 2 * k + 1)] = a.conj();
            }
        }
        LinearMap { m }
    }

    /// Substitution for the balanced tritter.
    #[must_use]
    pub fn tritter_map() -> Self {
        Self::from_mode_unitary(&tritter_unitary())
    }

    /// Substitution for independent single-mode squeezers with gains
    /// (r_a, r_b, r_c): per mode, (λ, λ*) → (λ cosh r − λ* sinh r,
    /// −λ sinh r + λ* cosh r). Each 2×2 block has unit determinant.
    #[must_use]
    pub fn squeeze_map(r_a: f64, r_b: f64, r_c: f64) -> Self {
        let mut m: SMatrix<Complex64, 6, 6> = SMatrix::zeros();
        for (j, r) in [r_a, r_b, r_c].into_iter().enumerate() {
            let ch = c64(r.cosh(), 0.0);
            let sh = c64(r.sinh(), 0.0);
            m[(2 * j, 2 * j)] = ch;
            m[(2 * j, 2 * j + 1)] = -sh;
            m[(2 * j + 1, 2 * j)] = -sh;
            m[(2 * j + 1, 2 * j + 1)] = ch;
        }
        LinearMap { m }
    }

    /// Substitution for the phase shifts on the two signal modes:
    /// λⱼ → e^{iφⱼ} λⱼ for j = 0, 1; mode 2 is the reference and untouched.
    #[must_use]
    pub fn phase_map(phi0: f64, phi1: f64) -> Self {
        let mut m: SMatrix<Complex64, 6, 6> = SMatrix::identity();
        for (j, phi) in [phi0, phi1].into_iter().enumerate() {
            let ph = c64(0.0, phi).exp();
            m[(2 * j, 2 * j)] = ph;
            m[(2 * j + 1, 2 * j + 1)] = ph.conj();
        }
        LinearMap { m }
    }

    /// Composite map such that applying the result equals applying `inner`
    /// first and then `outer`.
    ///
    /// Substituting with M maps a polynomial χ(Λ) to χ(M·Λ), so sequential
    /// application multiplies matrices on the right: the composite matrix is
    /// M_inner · M_outer.
    #[must_use]
    pub fn compose(outer: &LinearMap, inner: &LinearMap) -> LinearMap {
        LinearMap {
            m: inner.m * outer.m,
        }
    }

    /// Verify the conjugation-consistency condition to tolerance `tol`.
    #[must_use]
    pub fn is_conjugation_consistent(&self, tol: f64) -> bool {
        for j in 0..3 {
            for k in 0..3 {
                let a = self.m[(2 * j, 2 * k)];
                let b = self.m[(2 * j, 2 * k + 1)];
                if (self.m[(2 * j + 1, 2 * k + 1)] - a.conj()).norm() > tol
                    || (self.m[(2 * j + 1, 2 * k)] - b.conj()).norm() > tol
                {
                    return false;
                }
            }
        }
        true
    }
}

/// Composite substitution for the full pipeline: tritter, then per-mode
/// squeezers with gains (r_a, r_b, r_c), then phase shifts (φ₀, φ₁).
#[must_use]
pub fn pipeline_map(gains: [f64; 3], phases: [f64; 2]) -> LinearMap {
    let tritter = LinearMap::tritter_map();
    let squeeze = LinearMap::squeeze_map(gains[0], gains[1], gains[2]);
    let phase = LinearMap::phase_map(phases[0], phases[1]);
    LinearMap::compose(&phase, &LinearMap::compose(&squeeze, &tritter))
}

/// Run the full pipeline on a normally ordered probe χ and return the
/// normally ordered output χ.
///
/// The substitution itself is performed on the symmetric-ordered χ (where it
/// is exact for squeezers as well as passive elements); the ordering
/// conversions at the boundaries only push total degree upward, so all
/// retained coefficients are exact.
#[must_use]
pub fn run_pipeline(probe: &CFPoly, gains: [f64; 3], phases: [f64; 2]) -> CFPoly {
    probe
        .to_weyl()
        .apply_linear_map(&pipeline_map(gains, phases))
        .to_normal()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn moment(p: &CFPoly, pi: [u8; 3], qi: [u8; 3]) -> Complex64 {
        p.extract_moment(pi, qi).unwrap()
    }

    #[test]
    fn w1_cf_has_expected_coefficients() {
        let p = make_w_state_cf(1, 4);
        // 1 − ⅓Σ|λᵢ|² − ⅓Σ_{k≠l} λₖλₗ*
        assert_relative_eq!(p.coefficient(&[0; 6]).re, 1.0, max_relative = 1e-15);
        assert_relative_eq!(p.coefficient(&[1, 1, 0, 0, 0, 0]).re, -1.0 / 3.0);
        assert_relative_eq!(p.coefficient(&[0, 0, 1, 1, 0, 0]).re, -1.0 / 3.0);
        assert_relative_eq!(p.coefficient(&[1, 0, 0, 1, 0, 0]).re, -1.0 / 3.0);
        assert_relative_eq!(p.coefficient(&[0, 1, 1, 0, 0, 0]).re, -1.0 / 3.0);
    }

    #[test]
    fn w3_cf_has_no_coherence_terms_at_degree_4() {
        let p = make_w_state_cf(3, 4);
        // Coherence terms have degree 6 > 4; diagonal part is the truncated
        // ⅓ L₃ per mode: L₃(x) = 1 − 3x + (3/2)x² − x³/6.
        for (e, _) in p.terms() {
            let diag = (0..3).all(|j| e[2 * j] == e[2 * j + 1]);
            assert!(diag, "unexpected off-diagonal term {e:?}");
        }
        assert_relative_eq!(p.coefficient(&[1, 1, 0, 0, 0, 0]).re, -1.0);
        assert_relative_eq!(p.coefficient(&[2, 2, 0, 0, 0, 0]).re, 0.5);
    }

    #[test]
    fn fock_cf_matches_laguerre_expansion() {
        // L₂(x) = 1 − 2x + x²/2
        let p = make_fock_product_cf(2, 0, 0, 4);
        assert_relative_eq!(p.coefficient(&[0; 6]).re, 1.0);
        assert_relative_eq!(p.coefficient(&[1, 1, 0, 0, 0, 0]).re, -2.0);
        assert_relative_eq!(p.coefficient(&[2, 2, 0, 0, 0, 0]).re, 0.5);
        assert_eq!(p.len(), 3);
    }

    #[test]
    fn extract_moment_basics() {
        let mut p = CFPoly::one(4);
        p.add_term([1, 1, 0, 0, 0, 0], c64(-1.0, 0.0));
        // χ = 1 − |λ₀|² is the single-photon mode-0 state: ⟨n₀⟩ = 1.
        assert_relative_eq!(moment(&p, [1, 0, 0], [1, 0, 0]).re, 1.0);
        assert_relative_eq!(moment(&p, [0, 1, 0], [0, 1, 0]).re, 0.0);
        assert!(matches!(
            p.extract_moment([2, 1, 0], [2, 0, 0]),
            Err(CfError::DegreeOverflow { degree: 5, .. })
        ));
    }

    #[test]
    fn vacuum_moments_vanish() {
        let p = make_fock_product_cf(0, 0, 0, 4);
        assert_relative_eq!(p.coefficient(&[0; 6]).re, 1.0);
        assert_relative_eq!(moment(&p, [1, 0, 0], [1, 0, 0]).norm(), 0.0);
    }

    #[test]
    fn tritter_is_unitary_and_map_consistent() {
        let u = tritter_unitary();
        let id = Matrix3::<Complex64>::identity();
        assert!((u.adjoint() * u - id).norm() < 1e-14);
        assert!(LinearMap::tritter_map().is_conjugation_consistent(1e-14));
        assert!(LinearMap::squeeze_map(0.3, -0.2, 0.9).is_conjugation_consistent(1e-14));
        assert!(LinearMap::phase_map(0.7, -1.1).is_conjugation_consistent(1e-14));
    }

    #[test]
    fn squeeze_blocks_have_unit_determinant() {
        let m = LinearMap::squeeze_map(0.4, 0.0, -0.8);
        for j in 0..3 {
            let a = m.matrix()[(2 * j, 2 * j)];
            let b = m.matrix()[(2 * j, 2 * j + 1)];
            let c = m.matrix()[(2 * j + 1, 2 * j)];
            let d = m.matrix()[(2 * j + 1, 2 * j + 1)];
            assert_relative_eq!((a * d - b * c).re, 1.0, max_relative = 1e-14);
        }
    }

    #[test]
    fn substitution_preserves_total_degree() {
        let p = make_w_state_cf(2, 4);
        let before: Vec<u32> = {
            let mut h = vec![0; 5];
            for (e, _) in p.terms() {
                h[total_degree(e) as usize] += 1;
            }
            h
        };
        let q = p.apply_linear_map(&LinearMap::tritter_map());
        let mut after = vec![0; 5];
        for (e, _) in q.terms() {
            after[total_degree(e) as usize] += 1;
        }
        // Degrees present before must still be the only degrees present.
        for d in 0..5 {
            assert_eq!(before[d] == 0, after[d] == 0, "degree {d} mismatch");
        }
    }

    #[test]
    fn hermiticity_survives_tritter() {
        let p = make_w_state_cf(2, 4);
        assert!(p.is_hermitian(1e-14));
        let q = p.apply_linear_map(&LinearMap::tritter_map());
        assert!(q.is_hermitian(1e-12));
    }

    #[test]
    fn w1_after_tritter_mean_occupation() {
        let p = make_w_state_cf(1, 4).apply_linear_map(&LinearMap::tritter_map());
        assert_relative_eq!(
            moment(&p, [1, 0, 0], [1, 0, 0]).re,
            1.0 / 3.0,
            max_relative = 1e-12
        );
    }

    #[test]
    fn squeezed_vacuum_closed_forms() {
        // Vacuum through a single-mode squeezer: ⟨n⟩ = sinh²r and
        // ⟨a†²a²⟩ = sinh²r + 3sinh⁴r.
        let r = 0.5_f64;
        let vac = make_fock_product_cf(0, 0, 0, 4);
        let m = LinearMap::squeeze_map(r, 0.0, 0.0);
        let out = vac.to_weyl().apply_linear_map(&m).to_normal();
        let s2 = r.sinh().powi(2);
        assert_relative_eq!(
            moment(&out, [1, 0, 0], [1, 0, 0]).re,
            s2,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            moment(&out, [2, 0, 0], [2, 0, 0]).re,
            s2 + 3.0 * s2 * s2,
            max_relative = 1e-12
        );
        assert!(out.is_hermitian(1e-13));
    }

    #[test]
    fn weyl_round_trip_is_identity() {
        let p = make_w_state_cf(2, 4);
        let q = p.to_weyl().to_normal();
        for (e, c) in p.terms() {
            assert!((q.coefficient(e) - c).norm() < 1e-13, "term {e:?} drifted");
        }
        assert_eq!(p.len(), q.len());
    }

    #[test]
    fn normalization_preserved_through_pipeline() {
        let out = run_pipeline(&make_w_state_cf(2, 4), [0.5, 0.25, 0.0], [0.3, -0.4]);
        assert_relative_eq!(
            out.extract_moment([0, 0, 0], [0, 0, 0]).unwrap().re,
            1.0,
            max_relative = 1e-12
        );
    }

    #[test]
    fn phase_map_leaves_number_moments_invariant() {
        let base = run_pipeline(&make_w_state_cf(2, 4), [0.3, 0.3, 0.3], [0.0, 0.0]);
        let shifted = run_pipeline(&make_w_state_cf(2, 4), [0.3, 0.3, 0.3], [1.1, -2.4]);
        for p in [[1, 0, 0], [0, 1, 0], [0, 0, 1], [2, 0, 0], [1, 1, 0]] {
            let a = base.extract_moment(p, p).unwrap();
            let b = shifted.extract_moment(p, p).unwrap();
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn single_photon_column_convention() {
        // One photon in mode 0 through the tritter: output single-photon
        // amplitudes are column 0 of the unitary, each of modulus 1/√3. In
        // moment language: ⟨nⱼ⟩ = 1/3 and ⟨aⱼ†aₖ⟩ = U_{j0} U_{k0}*.
        let p = make_fock_product_cf(1, 0, 0, 4).apply_linear_map(&LinearMap::tritter_map());
        let u = tritter_unitary();
        for j in 0..3u8 {
            let mut pj = [0u8; 3];
            pj[j as usize] = 1;
            assert_relative_eq!(
                p.extract_moment(pj, pj).unwrap().re,
                1.0 / 3.0,
                max_relative = 1e-12
            );
        }
        // Cross moment: with output amplitudes cₖ = U_{k0}, ⟨a₀†a₁⟩ = c₀* c₁.
        let m = p.extract_moment([1, 0, 0], [0, 1, 0]).unwrap();
        let expect = u[(0, 0)].conj() * u[(1, 0)];
        assert!((m - expect).norm() < 1e-12);
    }
}
