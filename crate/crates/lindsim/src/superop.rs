//! Vectorization and superoperator assembly.
//!
//! Convention: column stacking, vec(A X B) = (Bᵀ ⊗ A) vec(X). A
//! superoperator on a space of dimension d is a dense d²×d² matrix acting
//! on vectorized operators.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::{complex_mat_serde, HilbertSpace, Operator};
use crate::numerics::{self, c, CMatrix, CVector};

/// A linear map on operators, stored as a dense matrix in the
/// column-stacking convention.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuperOperator {
    pub space: HilbertSpace,
    #[serde(with = "complex_mat_serde")]
    pub matrix: CMatrix,
}

impl SuperOperator {
    pub fn new(space: HilbertSpace, matrix: CMatrix) -> Result<Self> {
        let d2 = space.total_dim() * space.total_dim();
        if matrix.nrows() != d2 || matrix.ncols() != d2 {
            return Err(Error::DimensionMismatch {
                context: "SuperOperator matrix",
                got: matrix.nrows(),
                expected: d2,
            });
        }
        if !numerics::all_finite(&matrix) {
            return Err(Error::NonFinite {
                context: "SuperOperator matrix",
            });
        }
        Ok(Self { space, matrix })
    }

    pub fn zero(space: HilbertSpace) -> Self {
        let d2 = space.total_dim() * space.total_dim();
        Self {
            space,
            matrix: numerics::zeros(d2, d2),
        }
    }

    pub fn identity(space: HilbertSpace) -> Self {
        let d2 = space.total_dim() * space.total_dim();
        Self {
            space,
            matrix: numerics::identity(d2),
        }
    }

    /// Apply to an operator: devec(M · vec(X)).
    pub fn apply(&self, x: &Operator) -> Result<Operator> {
        if x.dim() != self.space.total_dim() {
            return Err(Error::DimensionMismatch {
                context: "SuperOperator::apply",
                got: x.dim(),
                expected: self.space.total_dim(),
            });
        }
        let v = vectorize(x);
        let w = self.matrix.dot(&v);
        devectorize(&w, &self.space)
    }

    pub fn norm(&self) -> f64 {
        numerics::spectral_norm(&self.matrix)
    }

    /// Write the matrix as CSV: one row per matrix row, entries flattened as
    /// re,im pairs. A single `#` header line documents the convention.
    pub fn write_csv<W: std::io::Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(
            w,
            "# superoperator dim={d2} on space {factors:?}; column-stacking \
             vectorization vec(AXB)=(B^T kron A)vec(X); complex entries as re,im pairs",
            d2 = self.matrix.nrows(),
            factors = self.space.factors(),
        )?;
        for i in 0..self.matrix.nrows() {
            let mut line = String::new();
            for j in 0..self.matrix.ncols() {
                if j > 0 {
                    line.push(',');
                }
                let z = self.matrix[[i, j]];
                line.push_str(&format!("{:.16e},{:.16e}", z.re, z.im));
            }
            writeln!(w, "{line}")?;
        }
        Ok(())
    }
}

/// Column-stacking vectorization: vec(X)[i + d j] = X[i, j].
pub fn vectorize(x: &Operator) -> CVector {
    let d = x.dim();
    CVector::from_shape_fn(d * d, |k| x.matrix[[k % d, k / d]])
}

/// Inverse of [`vectorize`].
pub fn devectorize(v: &CVector, space: &HilbertSpace) -> Result<Operator> {
    let d = space.total_dim();
    if v.len() != d * d {
        return Err(Error::DimensionMismatch {
            context: "devectorize",
            got: v.len(),
            expected: d * d,
        });
    }
    let m = CMatrix::from_shape_fn((d, d), |(i, j)| v[i + d * j]);
    Operator::new(space.clone(), m)
}

/// Superoperator of the left/right sandwich X ↦ A X B.
pub fn sandwich(a: &CMatrix, b: &CMatrix) -> CMatrix {
    numerics::kron(&b.t().to_owned(), a)
}

/// Superoperator matrix of −i[H, ·]. `h` must be Hermitian within `tol_abs`.
pub fn hamiltonian_superop(h: &Operator, tol_abs: f64) -> Result<SuperOperator> {
    let dev = h.hermiticity_deviation();
    if dev > tol_abs {
        return Err(Error::NotHermitian {
            deviation: dev,
            tol: tol_abs,
        });
    }
    Ok(hamiltonian_superop_unchecked(h))
}

/// Same as [`hamiltonian_superop`] without the Hermiticity validation; used
/// when composing internally with operators that are Hermitian by
/// construction.
pub fn hamiltonian_superop_unchecked(h: &Operator) -> SuperOperator {
    let d = h.dim();
    let id = numerics::identity(d);
    let m = (&numerics::kron(&id, &h.matrix) - &numerics::kron(&h.matrix.t().to_owned(), &id))
        .mapv(|z| z * c(0.0, -1.0));
    SuperOperator {
        space: h.space.clone(),
        matrix: m,
    }
}

/// Superoperator matrix of the dissipator rate·(L ρ L† − ½{L†L, ρ}).
pub fn dissipator(l: &Operator, rate: f64) -> SuperOperator {
    let d = l.dim();
    let id = numerics::identity(d);
    let l_dag = numerics::adjoint(&l.matrix);
    let ldl = numerics::matmul(&l_dag, &l.matrix);
    let jump = sandwich(&l.matrix, &l_dag);
    let anti = &numerics::kron(&id, &ldl) + &numerics::kron(&ldl.t().to_owned(), &id);
    let m = (&jump - &(&anti * c(0.5, 0.0))).mapv(|z| z * c(rate, 0.0));
    SuperOperator {
        space: l.space.clone(),
        matrix: m,
    }
}

/// Abstract Lindblad generator: Hamiltonian plus (jump operator, rate) pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LindbladSpec {
    pub space: HilbertSpace,
    pub hamiltonian: Operator,
    pub jumps: Vec<(Operator, f64)>,
}

impl LindbladSpec {
    pub fn new(
        space: HilbertSpace,
        hamiltonian: Operator,
        jumps: Vec<(Operator, f64)>,
        hermiticity_abs: f64,
    ) -> Result<Self> {
        if hamiltonian.dim() != space.total_dim() {
            return Err(Error::DimensionMismatch {
                context: "LindbladSpec hamiltonian",
                got: hamiltonian.dim(),
                expected: space.total_dim(),
            });
        }
        let dev = hamiltonian.hermiticity_deviation();
        if dev > hermiticity_abs {
            return Err(Error::NotHermitian {
                deviation: dev,
                tol: hermiticity_abs,
            });
        }
        for (op, rate) in &jumps {
            if op.dim() != space.total_dim() {
                return Err(Error::DimensionMismatch {
                    context: "LindbladSpec jump operator",
                    got: op.dim(),
                    expected: space.total_dim(),
                });
            }
            if !rate.is_finite() || *rate < 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "jump rate must be finite and >= 0, got {rate}"
                )));
            }
        }
        Ok(Self {
            space,
            hamiltonian,
            jumps,
        })
    }

    /// A purely dissipative spec (zero Hamiltonian).
    pub fn dissipative(space: HilbertSpace, jumps: Vec<(Operator, f64)>) -> Result<Self> {
        let h = Operator::zero(space.clone());
        Self::new(space, h, jumps, f64::INFINITY.min(1e-6))
    }
}

/// Full Liouvillian matrix: −i[H, ·] + Σ γ_i D[L_i].
pub fn liouvillian(spec: &LindbladSpec) -> Result<SuperOperator> {
    let mut total = hamiltonian_superop_unchecked(&spec.hamiltonian).matrix;
    for (l, rate) in &spec.jumps {
        total = total + dissipator(l, *rate).matrix;
    }
    SuperOperator::new(spec.space.clone(), total)
}

/// Lift superoperators `m_s` (on a d_s-dimensional system) and `m_b` (on a
/// d_b-dimensional bath) to the superoperator of the composite space whose
/// operator-space action is M_S ⊗ M_B. This accounts for the index
/// interleaving between vec(H_S ⊗ H_B) and vec(H_S) ⊗ vec(H_B).
pub fn superop_kron(m_s: &CMatrix, m_b: &CMatrix, d_s: usize, d_b: usize) -> CMatrix {
    assert_eq!(m_s.nrows(), d_s * d_s, "system superoperator dimension");
    assert_eq!(m_b.nrows(), d_b * d_b, "bath superoperator dimension");
    let d = d_s * d_b;
    let db2 = d_b * d_b;
    // perm[factorized index] = full-space vec index
    let perm: Vec<usize> = (0..d * d)
        .map(|idx| {
            let alpha = idx / db2; // s + d_s s'
            let beta = idx % db2; // b + d_b b'
            let (s, sp) = (alpha % d_s, alpha / d_s);
            let (b, bp) = (beta % d_b, beta / d_b);
            (s * d_b + b) + d * (sp * d_b + bp)
        })
        .collect();
    let mut out = numerics::zeros(d * d, d * d);
    for a1 in 0..d_s * d_s {
        for b1 in 0..db2 {
            let row = perm[a1 * db2 + b1];
            for a2 in 0..d_s * d_s {
                let ms = m_s[[a1, a2]];
                if ms == c(0.0, 0.0) {
                    continue;
                }
                for b2 in 0..db2 {
                    let v = ms * m_b[[b1, b2]];
                    if v != c(0.0, 0.0) {
                        out[[row, perm[a2 * db2 + b2]]] = v;
                    }
                }
            }
        }
    }
    out
}

/// Result of the CPTP propagator diagnostic; values are reported raw, the
/// caller decides what to do with them.
#[derive(Debug, Clone, Serialize)]
pub struct CptpReport {
    pub t: f64,
    /// max over the operator basis of |Tr(E(E_ij)) − Tr(E_ij)|
    pub trace_defect: f64,
    pub choi_min_eig: f64,
    pub choi_max_eig: f64,
    /// Hermiticity deviation of the Choi matrix before symmetrization.
    pub choi_hermiticity: f64,
}

/// Choi matrix of the map given by superoperator matrix `m` (column
/// stacking): C[(i d + k), (j d + l)] = M[(k + d l), (i + d j)].
pub fn choi_matrix(m: &CMatrix, d: usize) -> CMatrix {
    assert_eq!(m.nrows(), d * d);
    CMatrix::from_shape_fn((d * d, d * d), |(r, cidx)| {
        let (i, k) = (r / d, r % d);
        let (j, l) = (cidx / d, cidx % d);
        m[[k + d * l, i + d * j]]
    })
}

/// Trace-preservation defect and Choi spectrum of e^{tL}.
pub fn check_cptp_propagator(l: &SuperOperator, t: f64) -> Result<CptpReport> {
    if t < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "propagator time must be >= 0, got {t}"
        )));
    }
    let d = l.space.total_dim();
    let prop = numerics::expm(&l.matrix.mapv(|z| z * c(t, 0.0)))?;

    // Trace defect: column (i + d j) holds vec(E(|i><j|)); its trace is the
    // sum over rows (k + d k); compare against delta_ij.
    let mut trace_defect = 0.0f64;
    for col in 0..d * d {
        let (i, j) = (col % d, col / d);
        let mut tr = c(0.0, 0.0);
        for k in 0..d {
            tr += prop[[k + d * k, col]];
        }
        let expected = if i == j { 1.0 } else { 0.0 };
        trace_defect = trace_defect.max((tr - c(expected, 0.0)).norm());
    }

    let choi = choi_matrix(&prop, d);
    let herm_dev = numerics::max_abs(&(&choi - &numerics::adjoint(&choi)));
    let sym = (&choi + &numerics::adjoint(&choi)).mapv(|z| z * c(0.5, 0.0));
    let (eigs, _) = numerics::eig_hermitian(&sym)?;
    Ok(CptpReport {
        t,
        trace_defect,
        choi_min_eig: eigs.first().copied().unwrap_or(0.0),
        choi_max_eig: eigs.last().copied().unwrap_or(0.0),
        choi_hermiticity: herm_dev,
    })
}
