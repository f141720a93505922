//! Hilbert-space bookkeeping and named operator builders: Pauli and ladder
//! operators, collective spin operators on N qubits, truncated bosonic
//! modes, and tensor embedding into composite spaces.
//!
//! Basis convention: |0⟩ is the damped steady state, σ⁻ = |0⟩⟨1| annihilates
//! it (σ⁻|1⟩ = |0⟩, σ⁻|0⟩ = 0).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{self, c, CMatrix};

/// An ordered tensor product of finite-dimensional subsystems.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HilbertSpace {
    factors: Vec<usize>,
}

impl HilbertSpace {
    pub fn new(factors: Vec<usize>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidParameter(
                "HilbertSpace needs at least one factor".into(),
            ));
        }
        for &d in &factors {
            if d < 2 {
                return Err(Error::InvalidParameter(format!(
                    "subsystem dimension must be >= 2, got {d}"
                )));
            }
        }
        Ok(Self { factors })
    }

    /// A single subsystem of dimension `d`.
    pub fn single(d: usize) -> Result<Self> {
        Self::new(vec![d])
    }

    /// N qubits.
    pub fn qubits(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("need at least one qubit".into()));
        }
        Self::new(vec![2; n])
    }

    pub fn factors(&self) -> &[usize] {
        &self.factors
    }

    pub fn total_dim(&self) -> usize {
        self.factors.iter().product()
    }

    /// The composite space `self ⊗ other`.
    pub fn tensor(&self, other: &HilbertSpace) -> HilbertSpace {
        let mut factors = self.factors.clone();
        factors.extend_from_slice(&other.factors);
        HilbertSpace { factors }
    }
}

/// A linear operator on a [`HilbertSpace`], stored dense.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Operator {
    pub space: HilbertSpace,
    #[serde(with = "complex_mat_serde")]
    pub matrix: CMatrix,
}

impl Operator {
    pub fn new(space: HilbertSpace, matrix: CMatrix) -> Result<Self> {
        let d = space.total_dim();
        if matrix.nrows() != d || matrix.ncols() != d {
            return Err(Error::DimensionMismatch {
                context: "Operator matrix",
                got: matrix.nrows(),
                expected: d,
            });
        }
        if !numerics::all_finite(&matrix) {
            return Err(Error::NonFinite {
                context: "Operator matrix",
            });
        }
        Ok(Self { space, matrix })
    }

    pub fn identity(space: HilbertSpace) -> Self {
        let d = space.total_dim();
        Self {
            space,
            matrix: numerics::identity(d),
        }
    }

    pub fn zero(space: HilbertSpace) -> Self {
        let d = space.total_dim();
        Self {
            space,
            matrix: numerics::zeros(d, d),
        }
    }

    pub fn dim(&self) -> usize {
        self.space.total_dim()
    }

    pub fn adjoint(&self) -> Self {
        Self {
            space: self.space.clone(),
            matrix: numerics::adjoint(&self.matrix),
        }
    }

    pub fn hermiticity_deviation(&self) -> f64 {
        numerics::max_abs(&(&self.matrix - &numerics::adjoint(&self.matrix)))
    }

    pub fn is_hermitian(&self, tol_abs: f64) -> bool {
        self.hermiticity_deviation() <= tol_abs
    }

    pub fn trace(&self) -> num_complex::Complex64 {
        self.matrix.diag().sum()
    }
}

/// Serialize complex matrices as nested arrays of `[re, im]` pairs.
pub mod complex_mat_serde {
    use super::CMatrix;
    use ndarray::Array2;
    use num_complex::Complex64;
    use serde::de::Error as DeError;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(m: &CMatrix, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<[f64; 2]>> = (0..m.nrows())
            .map(|i| (0..m.ncols()).map(|j| [m[[i, j]].re, m[[i, j]].im]).collect())
            .collect();
        rows.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<CMatrix, D::Error> {
        let rows: Vec<Vec<[f64; 2]>> = Vec::deserialize(d)?;
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        if nrows == 0 || ncols == 0 {
            return Err(D::Error::custom("matrix must be non-empty"));
        }
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(D::Error::custom("ragged matrix rows"));
        }
        Ok(Array2::from_shape_fn((nrows, ncols), |(i, j)| {
            Complex64::new(rows[i][j][0], rows[i][j][1])
        }))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PauliKind {
    X,
    Y,
    Z,
    Plus,
    Minus,
}

/// Single-qubit Pauli / ladder operators in the basis {|0⟩, |1⟩}.
pub fn pauli(which: PauliKind) -> Operator {
    let m = match which {
        PauliKind::X => ndarray::array![[c(0., 0.), c(1., 0.)], [c(1., 0.), c(0., 0.)]],
        PauliKind::Y => ndarray::array![[c(0., 0.), c(0., -1.)], [c(0., 1.), c(0., 0.)]],
        PauliKind::Z => ndarray::array![[c(1., 0.), c(0., 0.)], [c(0., 0.), c(-1., 0.)]],
        // sigma^- annihilates the damped steady state: |0><1|.
        PauliKind::Minus => ndarray::array![[c(0., 0.), c(1., 0.)], [c(0., 0.), c(0., 0.)]],
        PauliKind::Plus => ndarray::array![[c(0., 0.), c(0., 0.)], [c(1., 0.), c(0., 0.)]],
    };
    Operator {
        space: HilbertSpace::qubits(1).unwrap(),
        matrix: m,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CollectiveKind {
    X,
    Z,
    Plus,
    Minus,
}

/// Collective spin operator S^α = Σ_k σ^α acting on qubit k, dimension 2^N.
pub fn collective_spin(n_qubits: usize, which: CollectiveKind) -> Result<Operator> {
    let space = HilbertSpace::qubits(n_qubits)?;
    let single = match which {
        CollectiveKind::X => pauli(PauliKind::X),
        CollectiveKind::Z => pauli(PauliKind::Z),
        CollectiveKind::Plus => pauli(PauliKind::Plus),
        CollectiveKind::Minus => pauli(PauliKind::Minus),
    };
    let d = space.total_dim();
    let mut total = numerics::zeros(d, d);
    for site in 0..n_qubits {
        let embedded = embed(&single, site, &space)?;
        total = total + embedded.matrix;
    }
    Operator::new(space, total)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BosonKind {
    A,
    Adag,
    N,
}

/// Truncated bosonic mode on span{|0⟩..|cutoff−1⟩}: a|n⟩ = √n |n−1⟩.
pub fn boson(cutoff: usize, which: BosonKind) -> Result<Operator> {
    if cutoff < 2 {
        return Err(Error::InvalidParameter(format!(
            "boson cutoff must be >= 2, got {cutoff}"
        )));
    }
    let space = HilbertSpace::single(cutoff)?;
    let mut m = numerics::zeros(cutoff, cutoff);
    match which {
        BosonKind::A => {
            for n in 1..cutoff {
                m[[n - 1, n]] = c((n as f64).sqrt(), 0.0);
            }
        }
        BosonKind::Adag => {
            for n in 1..cutoff {
                m[[n, n - 1]] = c((n as f64).sqrt(), 0.0);
            }
        }
        BosonKind::N => {
            for n in 0..cutoff {
                m[[n, n]] = c(n as f64, 0.0);
            }
        }
    }
    Operator::new(space, m)
}

/// Kronecker embedding of `op` at position `site` of `space`, identities
/// elsewhere; ordering follows the space's factor list.
pub fn embed(op: &Operator, site: usize, space: &HilbertSpace) -> Result<Operator> {
    let factors = space.factors();
    if site >= factors.len() {
        return Err(Error::InvalidParameter(format!(
            "embed site {site} out of range for {} factors",
            factors.len()
        )));
    }
    if op.dim() != factors[site] {
        return Err(Error::DimensionMismatch {
            context: "embed: operator vs factor dimension",
            got: op.dim(),
            expected: factors[site],
        });
    }
    let mut m = numerics::identity(1);
    for (k, &d) in factors.iter().enumerate() {
        if k == site {
            m = numerics::kron(&m, &op.matrix);
        } else {
            m = numerics::kron(&m, &numerics::identity(d));
        }
    }
    Operator::new(space.clone(), m)
}

/// Partial trace over the trailing bath factor of a two-factor split
/// (system dimension `d_s`, bath dimension `d_b`): returns the system-space
/// matrix X with X[s,s'] = Σ_b M[(s,b),(s',b)].
pub fn partial_trace_bath(m: &CMatrix, d_s: usize, d_b: usize) -> Result<CMatrix> {
    let d = d_s * d_b;
    if m.nrows() != d || m.ncols() != d {
        return Err(Error::DimensionMismatch {
            context: "partial_trace_bath",
            got: m.nrows(),
            expected: d,
        });
    }
    let mut out = numerics::zeros(d_s, d_s);
    for s in 0..d_s {
        for sp in 0..d_s {
            let mut acc = c(0.0, 0.0);
            for b in 0..d_b {
                acc += m[[s * d_b + b, sp * d_b + b]];
            }
            out[[s, sp]] = acc;
        }
    }
    Ok(out)
}

/// Orthonormal Hermitian basis of d×d operator space under the
/// Hilbert-Schmidt inner product: the normalized identity followed by the
/// d²−1 traceless generalized Gell-Mann matrices.
pub fn hermitian_basis(d: usize) -> Vec<CMatrix> {
    let mut basis = Vec::with_capacity(d * d);
    let norm = 1.0 / (d as f64).sqrt();
    basis.push(numerics::identity(d).mapv(|z| z * norm));
    let s = std::f64::consts::FRAC_1_SQRT_2;
    for i in 0..d {
        for j in (i + 1)..d {
            let mut sym = numerics::zeros(d, d);
            sym[[i, j]] = c(s, 0.0);
            sym[[j, i]] = c(s, 0.0);
            basis.push(sym);
            let mut asym = numerics::zeros(d, d);
            asym[[i, j]] = c(0.0, -s);
            asym[[j, i]] = c(0.0, s);
            basis.push(asym);
        }
    }
    for l in 1..d {
        let norm = 1.0 / ((l * (l + 1)) as f64).sqrt();
        let mut diag = numerics::zeros(d, d);
        for k in 0..l {
            diag[[k, k]] = c(norm, 0.0);
        }
        diag[[l, l]] = c(-(l as f64) * norm, 0.0);
        basis.push(diag);
    }
    debug_assert_eq!(basis.len(), d * d);
    basis
}
