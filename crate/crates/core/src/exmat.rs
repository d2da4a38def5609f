//! Dense exact linear algebra over any [`Field`].
//!
//! Elimination is fraction-free (Bareiss): after the k-th pivot every live
//! entry is a (k+1)-minor of the input, so integer input stays integral.
//! Pivoting is deterministic: columns left to right, first nonzero row.

use std::fmt;

use crate::scalar::{EmbedModP, Field, ModP, ScalarError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExmatError {
    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("selection of {rows} rows and {cols} columns is not square")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix function is not affine in its parameters")]
    NotAffine,
    #[error("matrix is singular")]
    Singular,
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

#[derive(Clone, PartialEq)]
pub struct ExactMatrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: fmt::Display> fmt::Debug for ExactMatrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ExactMatrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.data[r * self.cols..(r + 1) * self.cols].iter().map(ToString::to_string).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Result of a fraction-free elimination.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankProfile {
    pub rank: usize,
    /// Original indices of the pivot rows, in pivot order.
    pub rows: Vec<usize>,
    /// Pivot columns, increasing.
    pub cols: Vec<usize>,
}

impl<F: Field> ExactMatrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMatrix { rows, cols, data: vec![F::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { F::one() } else { F::zero() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> F) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        ExactMatrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<F>>) -> Result<Self, ExmatError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(ExmatError::DimensionMismatch("ragged rows".into()));
        }
        Ok(ExactMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| F::from_i64(x)).collect()).collect()).expect("rectangular literal")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &F {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: F) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> ExactMatrix<G> {
        ExactMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        ExactMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&other.data).map(|(a, b)| a.add_ref(b)).collect() }
    }

    pub fn scale(&self, s: &F) -> Self {
        self.map(|a| a.mul_ref(s))
    }

    pub fn mul(&self, other: &Self) -> Result<Self, ExmatError> {
        if self.cols != other.rows {
            return Err(ExmatError::DimensionMismatch(format!("{}x{} times {}x{}", self.rows, self.cols, other.rows, other.cols)));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let v = out.get(i, j).add_ref(&a.mul_ref(b));
                        out.set(i, j, v);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[F]) -> Vec<F> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).filter(|(a, b)| !a.is_zero() && !b.is_zero()).fold(F::zero(), |acc, (a, b)| acc.add_ref(&a.mul_ref(b))))
            .collect()
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Result<Self, ExmatError> {
        for &r in rows {
            if r >= self.rows {
                return Err(ExmatError::IndexOutOfRange { index: r, dim: self.rows });
            }
        }
        for &c in cols {
            if c >= self.cols {
                return Err(ExmatError::IndexOutOfRange { index: c, dim: self.cols });
            }
        }
        Ok(Self::from_fn(rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]).clone()))
    }

    /// Bareiss elimination; returns the rank profile and the sign-corrected
    /// last pivot (the determinant when the matrix is square of full rank).
    fn bareiss(&self) -> (RankProfile, F) {
        let mut a = self.data.clone();
        let (nr, nc) = (self.rows, self.cols);
        let mut order: Vec<usize> = (0..nr).collect();
        let mut prev = F::one();
        let mut sign_flips = 0usize;
        let mut cols = Vec::new();
        let mut r = 0;
        for c in 0..nc {
            if r == nr {
                break;
            }
            let Some(p) = (r..nr).find(|&i| !a[i * nc + c].is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..nc {
                    a.swap(r * nc + j, p * nc + j);
                }
                order.swap(r, p);
                sign_flips += 1;
            }
            let pivot = a[r * nc + c].clone();
            // Inverting once per step matters over Q(ζ₅), where each
            // inverse costs several multiplications.
            let prev_inv = prev.inv().expect("pivots are nonzero");
            for i in r + 1..nr {
                let lead = a[i * nc + c].clone();
                for j in c + 1..nc {
                    let t = pivot.mul_ref(&a[i * nc + j]);
                    let t = if lead.is_zero() || a[r * nc + j].is_zero() { t } else { t.sub_ref(&lead.mul_ref(&a[r * nc + j])) };
                    a[i * nc + j] = if prev.is_one() { t } else { t.mul_ref(&prev_inv) };
                }
                a[i * nc + c] = F::zero();
            }
            prev = pivot;
            cols.push(c);
            r += 1;
        }
        let det = if sign_flips % 2 == 1 { -prev } else { prev };
        (RankProfile { rank: r, rows: order[..r].to_vec(), cols }, det)
    }

    pub fn rank(&self) -> usize {
        self.rank_profile().rank
    }

    /// Rank plus a choice of pivot rows and columns whose square submatrix is
    /// nonsingular.
    pub fn rank_profile(&self) -> RankProfile {
        self.bareiss().0
    }

    pub fn determinant(&self) -> Result<F, ExmatError> {
        if self.rows != self.cols {
            return Err(ExmatError::NotSquare { rows: self.rows, cols: self.cols });
        }
        if self.rows == 0 {
            return Ok(F::one());
        }
        let (profile, det) = self.bareiss();
        Ok(if profile.rank == self.rows { det } else { F::zero() })
    }

    pub fn minor(&self, rows: &[usize], cols: &[usize]) -> Result<F, ExmatError> {
        if rows.len() != cols.len() {
            return Err(ExmatError::NotSquare { rows: rows.len(), cols: cols.len() });
        }
        self.submatrix(rows, cols)?.determinant()
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            for j in 0..self.cols {
                m.data.swap(r * self.cols + j, p * self.cols + j);
            }
            let inv = m.get(r, c).inv().expect("nonzero pivot");
            for j in c..self.cols {
                let v = m.get(r, j).mul_ref(&inv);
                m.set(r, j, v);
            }
            for i in 0..self.rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c).clone();
                for j in c..self.cols {
                    if !m.get(r, j).is_zero() {
                        let v = m.get(i, j).sub_ref(&f.mul_ref(m.get(r, j)));
                        m.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    /// Basis of the right null space; every vector is checked against `m v = 0`.
    pub fn kernel_basis(&self) -> Vec<Vec<F>> {
        let (rref, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let basis: Vec<Vec<F>> = free
            .iter()
            .map(|&f| {
                let mut v = vec![F::zero(); self.cols];
                v[f] = F::one();
                for (r, &p) in pivots.iter().enumerate() {
                    v[p] = -rref.get(r, f).clone();
                }
                v
            })
            .collect();
        for v in &basis {
            assert!(self.mul_vec(v).iter().all(|x| x.is_zero()), "kernel residual must vanish");
        }
        basis
    }

    /// Left null space basis (`yᵀ m = 0`).
    pub fn cokernel_basis(&self) -> Vec<Vec<F>> {
        self.transpose().kernel_basis()
    }

    pub fn inverse(&self) -> Result<Self, ExmatError> {
        if self.rows != self.cols {
            return Err(ExmatError::NotSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        let aug = Self::from_fn(n, 2 * n, |i, j| {
            if j < n {
                self.get(i, j).clone()
            } else if j - n == i {
                F::one()
            } else {
                F::zero()
            }
        });
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(ExmatError::Singular);
        }
        Ok(Self::from_fn(n, n, |i, j| r.get(i, n + j).clone()))
    }

    /// Classical adjugate. Uses `det·A⁻¹` at full rank, the rank-one
    /// kernel formula at corank one, and zero otherwise.
    pub fn adjugate(&self) -> Result<Self, ExmatError> {
        if self.rows != self.cols {
            return Err(ExmatError::NotSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(Self::zeros(0, 0));
        }
        if n == 1 {
            return Ok(Self::identity(1));
        }
        let rank = self.rank();
        if rank == n {
            return Ok(self.inverse()?.scale(&self.determinant()?));
        }
        if rank < n - 1 {
            return Ok(Self::zeros(n, n));
        }
        // adj(A) = c · z yᵀ with A z = 0 and yᵀ A = 0; c fixed by one cofactor.
        let z = self.kernel_basis().remove(0);
        let y = self.cokernel_basis().remove(0);
        let i = z.iter().position(|x| !x.is_zero()).expect("nonzero kernel vector");
        let j = y.iter().position(|x| !x.is_zero()).expect("nonzero cokernel vector");
        let cofactor = self.cofactor(j, i)?;
        let c = cofactor.div_ref(&z[i].mul_ref(&y[j]));
        Ok(Self::from_fn(n, n, |a, b| c.mul_ref(&z[a].mul_ref(&y[b]))))
    }

    /// `(-1)^(i+j)` times the minor deleting row `i` and column `j`.
    pub fn cofactor(&self, i: usize, j: usize) -> Result<F, ExmatError> {
        let rows: Vec<usize> = (0..self.rows).filter(|&r| r != i).collect();
        let cols: Vec<usize> = (0..self.cols).filter(|&c| c != j).collect();
        let m = self.minor(&rows, &cols)?;
        Ok(if (i + j).is_multiple_of(2) { m } else { -m })
    }

    pub fn trace(&self) -> F {
        (0..self.rows.min(self.cols)).fold(F::zero(), |acc, i| acc.add_ref(self.get(i, i)))
    }
}

impl<F: Field + EmbedModP> ExactMatrix<F> {
    pub fn embed(&self, zeta_image: &ModP) -> Result<Vec<Vec<ModP>>, ExmatError> {
        (0..self.rows).map(|i| self.row(i).iter().map(|x| x.embed(zeta_image).map_err(ExmatError::from)).collect()).collect()
    }

    /// Rank of the reduction modulo the prime carried by `zeta_image`.
    pub fn rank_mod_p(&self, zeta_image: &ModP) -> Result<usize, ExmatError> {
        Ok(modp_rank(self.embed(zeta_image)?))
    }
}

/// Gaussian elimination over `F_p`.
pub fn modp_rank(mut m: Vec<Vec<ModP>>) -> usize {
    let nr = m.len();
    let nc = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..nc {
        let Some(p) = (r..nr).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].inv().expect("nonzero");
        for i in r + 1..nr {
            if m[i][c].is_zero() {
                continue;
            }
            let f = m[i][c] * inv;
            let (top, rest) = m.split_at_mut(i);
            for (x, &t) in rest[0][c..nc].iter_mut().zip(&top[r][c..nc]) {
                *x = *x - f * t;
            }
        }
        r += 1;
        if r == nr {
            break;
        }
    }
    r
}

/// Outcome of the optional prime-field double check. The exact rank is
/// always authoritative; `agrees` only reports.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct RankCrossCheck {
    pub exact: usize,
    pub modular: usize,
    pub prime: u64,
    pub agrees: bool,
}

/// Exact rank plus its reduction modulo `zeta_image`'s prime.
pub fn rank_with_crosscheck<F: Field + EmbedModP>(m: &ExactMatrix<F>, zeta_image: &ModP) -> Result<RankCrossCheck, ExmatError> {
    let exact = m.rank();
    let modular = m.rank_mod_p(zeta_image)?;
    Ok(RankCrossCheck { exact, modular, prime: zeta_image.modulus(), agrees: exact == modular })
}

/// A matrix whose entries are affine-linear functions of parameters:
/// `M(p) = C + Σ p_k L_k`.
#[derive(Clone)]
pub struct AffineMatrix<F> {
    pub constant: ExactMatrix<F>,
    pub linear: Vec<ExactMatrix<F>>,
}

impl<F: fmt::Display> fmt::Debug for AffineMatrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AffineMatrix").field("constant", &self.constant).field("linear", &self.linear).finish()
    }
}

impl<F: Field> AffineMatrix<F> {
    /// Samples `f` at the origin and unit vectors, then verifies the affine
    /// model at two further points.
    pub fn from_fn(nparams: usize, f: impl Fn(&[F]) -> ExactMatrix<F>) -> Result<Self, ExmatError> {
        let origin = vec![F::zero(); nparams];
        let constant = f(&origin);
        let linear: Vec<ExactMatrix<F>> = (0..nparams)
            .map(|k| {
                let mut e = origin.clone();
                e[k] = F::one();
                f(&e).add(&constant.scale(&F::from_i64(-1)))
            })
            .collect();
        let affine = AffineMatrix { constant, linear };
        let probes = [(0..nparams).map(|k| F::from_i64(k as i64 + 2)).collect::<Vec<_>>(), (0..nparams).map(|k| F::from_i64(3 - 2 * (k as i64 % 3))).collect()];
        for p in &probes {
            if affine.eval(p) != f(p) {
                return Err(ExmatError::NotAffine);
            }
        }
        Ok(affine)
    }

    pub fn eval(&self, point: &[F]) -> ExactMatrix<F> {
        assert_eq!(point.len(), self.linear.len());
        self.linear.iter().zip(point).filter(|(_, p)| !p.is_zero()).fold(self.constant.clone(), |acc, (l, p)| acc.add(&l.scale(p)))
    }
}

/// Gradient of the minor `det M(p)[rows, cols]` at `point`, via
/// `∂_k det S = tr(adj(S) · ∂_k S)`.
pub fn minor_gradient<F: Field>(m: &AffineMatrix<F>, rows: &[usize], cols: &[usize], point: &[F]) -> Result<Vec<F>, ExmatError> {
    if rows.len() != cols.len() {
        return Err(ExmatError::NotSquare { rows: rows.len(), cols: cols.len() });
    }
    let s = m.eval(point).submatrix(rows, cols)?;
    let adj = s.adjugate()?;
    m.linear.iter().map(|l| Ok(adj.mul(&l.submatrix(rows, cols)?)?.trace())).collect()
}
