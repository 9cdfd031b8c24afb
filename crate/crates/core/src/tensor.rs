//! Dense complex linear algebra over n-qubit registers.
//!
//! Basis convention: bit `n - k` of a basis index (counting from the least
//! significant bit at 0) is the label of qubit `k`, so qubit 1 is the most
//! significant bit and a ket string such as `|10⟩` reads directly as the
//! binary index. Label 0 is the `σ_z = +1` eigenstate.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::{Error, Result, ALGEBRA_TOL, C64};

/// Probability below which a projective branch is treated as impossible.
pub const BRANCH_EPS: f64 = 1e-14;

/// A single-qubit ket `(⟨0|ψ⟩, ⟨1|ψ⟩)`.
pub type Qubit = [C64; 2];

/// Pure state of an n-qubit register.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    n_qubits: usize,
    amplitudes: DVector<C64>,
}

impl PureState {
    /// Wraps `amplitudes`, inferring the register size from the length.
    /// The vector is taken as-is; call [`PureState::normalize`] if needed.
    pub fn from_amplitudes(amplitudes: Vec<C64>) -> Result<Self> {
        let len = amplitudes.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::Domain(format!(
                "amplitude vector length {len} is not 2^n with n >= 1"
            )));
        }
        Ok(Self {
            n_qubits: len.trailing_zeros() as usize,
            amplitudes: DVector::from_vec(amplitudes),
        })
    }

    /// Computational basis state `|index⟩` on `n_qubits` qubits.
    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        let dim = 1usize << n_qubits;
        if n_qubits == 0 || index >= dim {
            return Err(Error::Domain(format!(
                "basis index {index} invalid for {n_qubits} qubits"
            )));
        }
        let mut amps = vec![C64::new(0.0, 0.0); dim];
        amps[index] = C64::new(1.0, 0.0);
        Self::from_amplitudes(amps)
    }

    pub fn single(q: Qubit) -> Self {
        Self {
            n_qubits: 1,
            amplitudes: DVector::from_column_slice(&q),
        }
    }

    /// Tensor product of single-qubit kets, qubit 1 first.
    pub fn product(qubits: &[Qubit]) -> Result<Self> {
        let (first, rest) = qubits
            .split_first()
            .ok_or_else(|| Error::Domain("empty product".into()))?;
        Ok(rest
            .iter()
            .fold(Self::single(*first), |acc, q| acc.tensor(&Self::single(*q))))
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        self.amplitudes.as_slice()
    }

    pub fn as_vector(&self) -> &DVector<C64> {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() <= ALGEBRA_TOL
    }

    pub fn normalize(mut self) -> Result<Self> {
        let norm = self.norm_sqr().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotNormalized {
                norm_sqr: norm * norm,
            });
        }
        self.amplitudes.unscale_mut(norm);
        Ok(self)
    }

    /// `(a ⊗ b)[i·2^{n_b} + j] = a[i]·b[j]`.
    pub fn tensor(&self, other: &PureState) -> PureState {
        let nb = other.dim();
        let mut out = DVector::zeros(self.dim() * nb);
        for (i, a) in self.amplitudes.iter().enumerate() {
            for (j, b) in other.amplitudes.iter().enumerate() {
                out[i * nb + j] = a * b;
            }
        }
        PureState {
            n_qubits: self.n_qubits + other.n_qubits,
            amplitudes: out,
        }
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &PureState) -> Result<C64> {
        check_dim(self.dim(), other.dim())?;
        Ok(self.amplitudes.dotc(&other.amplitudes))
    }

    /// Applies a diagonal sign/phase per basis index.
    pub fn map_amplitudes(&self, mut f: impl FnMut(usize, C64) -> C64) -> PureState {
        let amps = self
            .amplitudes
            .iter()
            .enumerate()
            .map(|(i, a)| f(i, *a))
            .collect();
        PureState {
            n_qubits: self.n_qubits,
            amplitudes: DVector::from_vec(amps),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(&StateFile::from(self))?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let file: StateFile = serde_json::from_str(s)?;
        file.try_into()
    }
}

/// On-disk state layout: `{"n_qubits": n, "amplitudes": [[re, im], …]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StateFile {
    pub n_qubits: usize,
    pub amplitudes: Vec<[f64; 2]>,
}

impl From<&PureState> for StateFile {
    fn from(psi: &PureState) -> Self {
        Self {
            n_qubits: psi.n_qubits,
            amplitudes: psi.amplitudes.iter().map(|a| [a.re, a.im]).collect(),
        }
    }
}

impl TryFrom<StateFile> for PureState {
    type Error = Error;

    fn try_from(file: StateFile) -> Result<Self> {
        let expected = 1usize
            .checked_shl(file.n_qubits as u32)
            .filter(|_| file.n_qubits >= 1 && file.n_qubits < 30)
            .ok_or_else(|| Error::Domain(format!("bad n_qubits {}", file.n_qubits)))?;
        check_dim(expected, file.amplitudes.len())?;
        Self::from_amplitudes(
            file.amplitudes
                .into_iter()
                .map(|[re, im]| C64::new(re, im))
                .collect(),
        )
    }
}

/// Density matrix of an n-qubit register. `n_qubits == 0` is the trivial
/// 1×1 register left after every qubit has been measured away.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    n_qubits: usize,
    elements: DMatrix<C64>,
}

impl DensityMatrix {
    pub fn from_matrix(elements: DMatrix<C64>) -> Result<Self> {
        let (r, c) = elements.shape();
        if r != c || !r.is_power_of_two() {
            return Err(Error::Domain(format!("{r}x{c} is not a 2^n square matrix")));
        }
        Ok(Self {
            n_qubits: r.trailing_zeros() as usize,
            elements,
        })
    }

    /// `|ψ⟩⟨ψ|`.
    pub fn outer(psi: &PureState) -> Self {
        let v = psi.as_vector();
        Self {
            n_qubits: psi.n_qubits(),
            elements: v * v.adjoint(),
        }
    }

    pub fn maximally_mixed(n_qubits: usize) -> Self {
        let dim = 1usize << n_qubits;
        Self {
            n_qubits,
            elements: DMatrix::identity(dim, dim).unscale(dim as f64),
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.elements.nrows()
    }

    pub fn elements(&self) -> &DMatrix<C64> {
        &self.elements
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.elements[(row, col)]
    }

    pub fn trace(&self) -> C64 {
        self.elements.trace()
    }

    /// Elementwise (Schur) product with a factor computed per `(row, col)`.
    pub fn map_elements(&self, mut f: impl FnMut(usize, usize, C64) -> C64) -> Self {
        let dim = self.dim();
        Self {
            n_qubits: self.n_qubits,
            elements: DMatrix::from_fn(dim, dim, |r, c| f(r, c, self.elements[(r, c)])),
        }
    }

    /// Largest `|ρ - ρ†|` entry.
    pub fn hermiticity_error(&self) -> f64 {
        let adj = self.elements.adjoint();
        (&self.elements - adj)
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// Eigenvalues in ascending order (Hermitian part only).
    pub fn eigenvalues(&self) -> Vec<f64> {
        let herm = (&self.elements + self.elements.adjoint()).unscale(2.0);
        let mut ev: Vec<f64> = herm.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues().first().copied().unwrap_or(0.0)
    }

    /// `Tr[ρσ]`.
    pub fn trace_product(&self, other: &DensityMatrix) -> Result<C64> {
        check_dim(self.dim(), other.dim())?;
        Ok(self
            .elements
            .iter()
            .zip(other.elements.transpose().iter())
            .map(|(a, b)| a * b)
            .sum())
    }

    /// Projects `qubit` (1-based) onto `axis` and removes it from the register.
    ///
    /// Returns the renormalized state of the remaining qubits together with
    /// the branch probability `Tr[(|axis⟩⟨axis| ⊗ 𝟙) ρ]`.
    pub fn project_and_renormalize(&self, qubit: usize, axis: &Qubit) -> Result<(Self, f64)> {
        self.check_qubit(qubit)?;
        let n = self.n_qubits;
        let shift = n - qubit;
        let low_mask = (1usize << shift) - 1;
        let expand =
            |idx: usize, bit: usize| ((idx & !low_mask) << 1) | (bit << shift) | (idx & low_mask);
        let bra = [axis[0].conj(), axis[1].conj()];
        let out_dim = 1usize << (n - 1);
        let mut out = DMatrix::from_fn(out_dim, out_dim, |r, c| {
            let mut acc = C64::new(0.0, 0.0);
            for a in 0..2 {
                for b in 0..2 {
                    acc += bra[a] * self.elements[(expand(r, a), expand(c, b))] * axis[b];
                }
            }
            acc
        });
        let probability = out.trace().re;
        if probability < BRANCH_EPS {
            return Err(Error::BranchImpossible { probability });
        }
        out.unscale_mut(probability);
        Ok((
            Self {
                n_qubits: n - 1,
                elements: out,
            },
            probability.min(1.0),
        ))
    }

    /// Projects `qubit` onto `axis` but keeps it in the register:
    /// `(P ⊗ 𝟙) ρ (P ⊗ 𝟙) / p`.
    pub fn project_in_place(&self, qubit: usize, axis: &Qubit) -> Result<(Self, f64)> {
        self.check_qubit(qubit)?;
        let shift = self.n_qubits - qubit;
        let bit = |idx: usize| (idx >> shift) & 1;
        let proj = [
            [axis[0] * axis[0].conj(), axis[0] * axis[1].conj()],
            [axis[1] * axis[0].conj(), axis[1] * axis[1].conj()],
        ];
        let flip = 1usize << shift;
        let dim = self.dim();
        // (P ρ P)[r,c] = Σ_{a,b} P[bit r, a] ρ[r_a, c_b] P[b, bit c]
        let mut out = DMatrix::from_fn(dim, dim, |r, c| {
            let mut acc = C64::new(0.0, 0.0);
            for a in 0..2 {
                for b in 0..2 {
                    let ra = (r & !flip) | (a << shift);
                    let cb = (c & !flip) | (b << shift);
                    acc += proj[bit(r)][a] * self.elements[(ra, cb)] * proj[b][bit(c)];
                }
            }
            acc
        });
        let probability = out.trace().re;
        if probability < BRANCH_EPS {
            return Err(Error::BranchImpossible { probability });
        }
        out.unscale_mut(probability);
        Ok((
            Self {
                n_qubits: self.n_qubits,
                elements: out,
            },
            probability.min(1.0),
        ))
    }

    /// Partial trace keeping only `keep` (1-based, any order; output keeps
    /// the register order of the original qubits).
    pub fn partial_trace(&self, keep: &[usize]) -> Result<Self> {
        let mut keep = keep.to_vec();
        keep.sort_unstable();
        keep.dedup();
        for &q in &keep {
            self.check_qubit(q)?;
        }
        let n = self.n_qubits;
        let traced: Vec<usize> = (1..=n).filter(|q| !keep.contains(q)).collect();
        let kept_dim = 1usize << keep.len();
        let assemble = |kept_idx: usize, traced_idx: usize| {
            let mut full = 0usize;
            for (pos, &q) in keep.iter().enumerate() {
                let b = (kept_idx >> (keep.len() - 1 - pos)) & 1;
                full |= b << (n - q);
            }
            for (pos, &q) in traced.iter().enumerate() {
                let b = (traced_idx >> (traced.len() - 1 - pos)) & 1;
                full |= b << (n - q);
            }
            full
        };
        let elements = DMatrix::from_fn(kept_dim, kept_dim, |r, c| {
            (0..1usize << traced.len())
                .map(|e| self.elements[(assemble(r, e), assemble(c, e))])
                .sum()
        });
        Ok(Self {
            n_qubits: keep.len(),
            elements,
        })
    }

    fn check_qubit(&self, qubit: usize) -> Result<()> {
        if qubit == 0 || qubit > self.n_qubits {
            return Err(Error::QubitOutOfRange {
                qubit,
                n_qubits: self.n_qubits,
            });
        }
        Ok(())
    }
}

/// `⟨ψ|ρ|ψ⟩`, real part (the imaginary part vanishes for Hermitian `ρ`).
pub fn overlap(rho: &DensityMatrix, psi: &PureState) -> Result<f64> {
    check_dim(rho.dim(), psi.dim())?;
    let v = psi.as_vector();
    Ok(v.dotc(&(&rho.elements * v)).re)
}

fn check_dim(expected: usize, actual: usize) -> Result<()> {
    if expected != actual {
        return Err(Error::DimensionMismatch { expected, actual });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::NamedState;
    use rand::{rngs::StdRng, Rng, SeedableRng};

    const TOL: f64 = 1e-12;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn random_state(rng: &mut StdRng, n: usize) -> PureState {
        let amps = (0..1 << n)
            .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        PureState::from_amplitudes(amps)
            .unwrap()
            .normalize()
            .unwrap()
    }

    #[test]
    fn outer_of_basis_and_plus() {
        let rho = DensityMatrix::outer(&PureState::basis(1, 0).unwrap());
        assert_eq!(rho.get(0, 0), c(1.0));
        assert_eq!(rho.get(1, 1), c(0.0));
        let plus = PureState::single(NamedState::Plus.vector());
        let rho = DensityMatrix::outer(&plus);
        for z in rho.elements().iter() {
            assert!((z - c(0.5)).norm() < TOL);
        }
    }

    #[test]
    fn outer_of_random_state_is_rank_one() {
        let mut rng = StdRng::seed_from_u64(7);
        let psi = random_state(&mut rng, 3);
        let rho = DensityMatrix::outer(&psi);
        assert!((rho.trace() - c(1.0)).norm() < TOL);
        let ev = rho.eigenvalues();
        assert!((ev[7] - 1.0).abs() < TOL);
        assert!(ev[6].abs() < TOL);
    }

    #[test]
    fn tensor_examples() {
        let zero = PureState::basis(1, 0).unwrap();
        let one = PureState::basis(1, 1).unwrap();
        assert_eq!(
            zero.tensor(&one).amplitudes(),
            &[c(0.0), c(1.0), c(0.0), c(0.0)]
        );

        let plus = PureState::single(NamedState::Plus.vector());
        for a in plus.tensor(&plus).amplitudes() {
            assert!((a - c(0.5)).norm() < TOL);
        }

        let phi = one.tensor(&plus);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let expected = [0.0, 0.0, h, h];
        for (a, e) in phi.amplitudes().iter().zip(expected) {
            assert!((a - c(e)).norm() < TOL);
        }
    }

    #[test]
    fn tensor_is_associative() {
        let mut rng = StdRng::seed_from_u64(11);
        let (a, b, d) = (
            random_state(&mut rng, 1),
            random_state(&mut rng, 2),
            random_state(&mut rng, 1),
        );
        let (l, r) = (a.tensor(&b).tensor(&d), a.tensor(&b.tensor(&d)));
        assert!((l.as_vector() - r.as_vector()).camax() < TOL);
    }

    #[test]
    fn measuring_last_qubit_leaves_empty_register() {
        let rho = DensityMatrix::outer(&PureState::single(NamedState::Plus.vector()));
        let (rest, p) = rho
            .project_and_renormalize(1, &NamedState::Zero.vector())
            .unwrap();
        assert!((p - 0.5).abs() < TOL);
        assert_eq!(rest.n_qubits(), 0);
        assert!((rest.trace() - c(1.0)).norm() < TOL);
    }

    #[test]
    fn orthogonal_branch_is_impossible() {
        let rho = DensityMatrix::outer(&PureState::basis(2, 0b01).unwrap());
        let err = rho
            .project_and_renormalize(2, &NamedState::Zero.vector())
            .unwrap_err();
        assert!(matches!(err, Error::BranchImpossible { .. }));
    }

    #[test]
    fn projection_selects_correct_qubit() {
        // |0⟩|1⟩|+⟩: measuring qubit 2 on |1⟩ leaves |0⟩|+⟩.
        let psi = PureState::product(&[
            NamedState::Zero.vector(),
            NamedState::One.vector(),
            NamedState::Plus.vector(),
        ])
        .unwrap();
        let (rest, p) = DensityMatrix::outer(&psi)
            .project_and_renormalize(2, &NamedState::One.vector())
            .unwrap();
        assert!((p - 1.0).abs() < TOL);
        let expected =
            PureState::product(&[NamedState::Zero.vector(), NamedState::Plus.vector()]).unwrap();
        assert!((overlap(&rest, &expected).unwrap() - 1.0).abs() < TOL);
    }

    #[test]
    fn in_place_projection_matches_removal() {
        let mut rng = StdRng::seed_from_u64(3);
        let rho = DensityMatrix::outer(&random_state(&mut rng, 3));
        let axis = NamedState::PlusY.vector();
        let (removed, p1) = rho.project_and_renormalize(2, &axis).unwrap();
        let (kept, p2) = rho.project_in_place(2, &axis).unwrap();
        assert!((p1 - p2).abs() < TOL);
        let reduced = kept.partial_trace(&[1, 3]).unwrap();
        let diff = (removed.elements() - reduced.elements()).camax();
        assert!(diff < TOL);
    }

    #[test]
    fn partial_trace_of_product() {
        let psi = PureState::product(&[
            NamedState::Zero.vector(),
            NamedState::PlusY.vector(),
            NamedState::One.vector(),
        ])
        .unwrap();
        let red = DensityMatrix::outer(&psi).partial_trace(&[2]).unwrap();
        let expected = DensityMatrix::outer(&PureState::single(NamedState::PlusY.vector()));
        assert!((red.elements() - expected.elements()).camax() < TOL);
    }

    #[test]
    fn overlap_examples() {
        let one = PureState::basis(1, 1).unwrap();
        let zero = PureState::basis(1, 0).unwrap();
        let rho = DensityMatrix::outer(&one);
        assert!((overlap(&rho, &one).unwrap() - 1.0).abs() < TOL);
        assert!(overlap(&rho, &zero).unwrap().abs() < TOL);
        let mixed = DensityMatrix::maximally_mixed(1);
        let plus = PureState::single(NamedState::Plus.vector());
        assert!((overlap(&mixed, &plus).unwrap() - 0.5).abs() < TOL);
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let rho = DensityMatrix::maximally_mixed(2);
        let psi = PureState::basis(1, 0).unwrap();
        assert!(matches!(
            overlap(&rho, &psi),
            Err(Error::DimensionMismatch {
                expected: 4,
                actual: 2
            })
        ));
    }

    #[test]
    fn state_json_round_trip() {
        let psi =
            PureState::product(&[NamedState::One.vector(), NamedState::MinusY.vector()]).unwrap();
        let back = PureState::from_json(&psi.to_json().unwrap()).unwrap();
        assert_eq!(psi, back);
        assert!(PureState::from_json(r#"{"n_qubits":2,"amplitudes":[[1,0]]}"#).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn state_strategy(n: usize) -> impl Strategy<Value = PureState> {
            proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1 << n).prop_filter_map(
                "zero vector",
                |v| {
                    PureState::from_amplitudes(v.into_iter().map(|(r, i)| C64::new(r, i)).collect())
                        .ok()?
                        .normalize()
                        .ok()
                },
            )
        }

        proptest! {
            #[test]
            fn outer_preserves_invariants(psi in state_strategy(3)) {
                let rho = DensityMatrix::outer(&psi);
                prop_assert!((rho.trace() - c(1.0)).norm() < TOL);
                prop_assert!(rho.hermiticity_error() < TOL);
                prop_assert!(rho.min_eigenvalue() > -1e-10);
            }

            #[test]
            fn branch_probabilities_sum_to_one(
                psi in state_strategy(3),
                qubit in 1usize..=3,
                phi in -3.2f64..3.2,
            ) {
                let rho = DensityMatrix::outer(&psi);
                let (up, down) = crate::mbqc::measurement_basis(phi);
                let p_up = rho.project_and_renormalize(qubit, &up).map(|r| r.1).unwrap_or(0.0);
                let p_down = rho.project_and_renormalize(qubit, &down).map(|r| r.1).unwrap_or(0.0);
                prop_assert!((p_up + p_down - 1.0).abs() < TOL);
                if let Ok((post, _)) = rho.project_and_renormalize(qubit, &up) {
                    prop_assert!((post.trace() - c(1.0)).norm() < TOL);
                    prop_assert!(post.hermiticity_error() < TOL);
                }
            }
        }
    }
}
