//! Exterior algebra of the 5-dimensional space V and its dual.
//!
//! Forms of degree k store their `C(5, k)` coefficients against the
//! lexicographically ordered basis `e_I`, `I = (i_1 < ... < i_k)`. The
//! pairing between `Λ^k V` and `Λ^k V*` is `<e_I, e*_J> = δ_IJ`.

use std::sync::OnceLock;

use crate::scalar::Field;

pub const DIM: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExteriorError {
    #[error("forms live over different spaces (V vs V*)")]
    VarianceMismatch,
    #[error("total degree {0} exceeds 5")]
    DegreeOverflow(usize),
    #[error("expected a form of degree {expected}, got degree {found}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("expected forms of opposite variance")]
    SameVariance,
    #[error("covectors are linearly dependent")]
    Dependent,
    #[error("coefficient count {found} does not match degree {degree}")]
    BadLength { degree: usize, found: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variance {
    /// Λ^k V
    Vectors,
    /// Λ^k V*
    Covectors,
}

/// Bitmask encoding of the lexicographic basis of each degree.
fn basis_table() -> &'static [Vec<u8>; DIM + 1] {
    static TABLE: OnceLock<[Vec<u8>; DIM + 1]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut by_degree: [Vec<Vec<usize>>; DIM + 1] = Default::default();
        for mask in 0u8..32 {
            let idx: Vec<usize> = (0..DIM).filter(|i| mask >> i & 1 == 1).collect();
            by_degree[idx.len()].push(idx);
        }
        by_degree.map(|mut v| {
            v.sort();
            v.into_iter().map(|idx| idx.iter().fold(0u8, |m, &i| m | 1 << i)).collect()
        })
    })
}

/// Basis of `Λ^k`, as sorted index lists in lexicographic order.
pub fn basis(k: usize) -> Vec<Vec<usize>> {
    basis_table()[k].iter().map(|&m| (0..DIM).filter(|i| m >> i & 1 == 1).collect()).collect()
}

fn position(k: usize, mask: u8) -> usize {
    basis_table()[k].iter().position(|&m| m == mask).expect("mask of right degree")
}

/// Sign of the shuffle `e_I ∧ e_J -> e_{I∪J}`; zero when `I ∩ J ≠ ∅`.
fn shuffle_sign(a: u8, b: u8) -> i64 {
    if a & b != 0 {
        return 0;
    }
    // Count pairs (i in a, j in b) with i > j.
    let inversions: u32 = (0..DIM).filter(|j| b >> j & 1 == 1).map(|j| (a >> (j + 1)).count_ones()).sum();
    if inversions.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

pub fn binomial5(k: usize) -> usize {
    [1, 5, 10, 10, 5, 1][k]
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExteriorForm<F> {
    degree: usize,
    variance: Variance,
    coeffs: Vec<F>,
}

impl<F: Field> ExteriorForm<F> {
    pub fn new(degree: usize, variance: Variance, coeffs: Vec<F>) -> Result<Self, ExteriorError> {
        if degree > DIM {
            return Err(ExteriorError::DegreeOverflow(degree));
        }
        if coeffs.len() != binomial5(degree) {
            return Err(ExteriorError::BadLength { degree, found: coeffs.len() });
        }
        Ok(ExteriorForm { degree, variance, coeffs })
    }

    pub fn zero(degree: usize, variance: Variance) -> Self {
        ExteriorForm { degree, variance, coeffs: vec![F::zero(); binomial5(degree)] }
    }

    /// The basis form `e_I` (or `e*_I`) up to the sign needed to sort `indices`.
    pub fn basis_element(indices: &[usize], variance: Variance) -> Self {
        let mut form = Self::zero(0, variance);
        form.coeffs[0] = F::one();
        for &i in indices {
            let e = Self::basis_element_sorted(&[i % DIM], variance);
            form = form.wedge(&e).expect("same variance");
        }
        form
    }

    fn basis_element_sorted(indices: &[usize], variance: Variance) -> Self {
        let mut form = Self::zero(indices.len(), variance);
        let mask = indices.iter().fold(0u8, |m, &i| m | 1 << i);
        form.coeffs[position(indices.len(), mask)] = F::one();
        form
    }

    pub fn from_vector(v: &[F; DIM], variance: Variance) -> Self {
        ExteriorForm { degree: 1, variance, coeffs: v.to_vec() }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn variance(&self) -> Variance {
        self.variance
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn coeff(&self, indices: &[usize]) -> F {
        let mut sorted = indices.to_vec();
        sorted.sort();
        let mask = sorted.iter().fold(0u8, |m, &i| m | 1 << i);
        if mask.count_ones() as usize != indices.len() || indices.len() != self.degree {
            return F::zero();
        }
        let sign = ExteriorForm::<F>::basis_element(indices, self.variance).coeffs[position(self.degree, mask)].clone();
        sign * self.coeffs[position(self.degree, mask)].clone()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.degree, self.variance), (other.degree, other.variance));
        ExteriorForm { degree: self.degree, variance: self.variance, coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.add_ref(b)).collect() }
    }

    pub fn scale(&self, s: &F) -> Self {
        ExteriorForm { degree: self.degree, variance: self.variance, coeffs: self.coeffs.iter().map(|a| a.mul_ref(s)).collect() }
    }

    pub fn wedge(&self, other: &Self) -> Result<Self, ExteriorError> {
        if self.variance != other.variance {
            return Err(ExteriorError::VarianceMismatch);
        }
        let degree = self.degree + other.degree;
        if degree > DIM {
            return Err(ExteriorError::DegreeOverflow(degree));
        }
        let table = basis_table();
        let mut out = Self::zero(degree, self.variance);
        for (a, &ma) in self.coeffs.iter().zip(&table[self.degree]) {
            if a.is_zero() {
                continue;
            }
            for (b, &mb) in other.coeffs.iter().zip(&table[other.degree]) {
                let s = shuffle_sign(ma, mb);
                if s == 0 || b.is_zero() {
                    continue;
                }
                let slot = &mut out.coeffs[position(degree, ma | mb)];
                let term = a.mul_ref(b);
                *slot = if s > 0 { slot.add_ref(&term) } else { slot.sub_ref(&term) };
            }
        }
        Ok(out)
    }

    /// Complete contraction of forms of equal degree and opposite variance.
    pub fn full_pair(&self, other: &Self) -> Result<F, ExteriorError> {
        if self.variance == other.variance {
            return Err(ExteriorError::SameVariance);
        }
        if self.degree != other.degree {
            return Err(ExteriorError::DegreeMismatch { expected: self.degree, found: other.degree });
        }
        Ok(self.coeffs.iter().zip(&other.coeffs).fold(F::zero(), |acc, (a, b)| acc.add_ref(&a.mul_ref(b))))
    }
}

/// `(ι_a φ)(v) = φ(a ∧ v)` for `a ∈ Λ²V`, `φ ∈ Λ³V*`: a covector.
pub fn contract<F: Field>(a: &ExteriorForm<F>, phi: &ExteriorForm<F>) -> Result<Covector<F>, ExteriorError> {
    if a.degree != 2 || a.variance != Variance::Vectors {
        return Err(ExteriorError::DegreeMismatch { expected: 2, found: a.degree });
    }
    if phi.degree != 3 || phi.variance != Variance::Covectors {
        return Err(ExteriorError::DegreeMismatch { expected: 3, found: phi.degree });
    }
    let out = std::array::from_fn(|j| {
        let av = a.wedge(&ExteriorForm::basis_element_sorted(&[j], Variance::Vectors)).expect("degree 3");
        phi.full_pair(&av).expect("degree 3 pairing")
    });
    Ok(Covector(out))
}

/// Full contraction `<a, ψ>` of a 2-vector with a 2-covector.
pub fn full_pair<F: Field>(a: &ExteriorForm<F>, psi: &ExteriorForm<F>) -> Result<F, ExteriorError> {
    if a.degree != 2 {
        return Err(ExteriorError::DegreeMismatch { expected: 2, found: a.degree });
    }
    a.full_pair(psi)
}

/// A linear form on V, i.e. a coordinate hyperplane equation `Σ c_i z_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct Covector<F>(pub [F; DIM]);

impl<F: Field> Covector<F> {
    pub fn from_i64(v: [i64; DIM]) -> Self {
        Covector(v.map(F::from_i64))
    }

    pub fn unit(i: usize) -> Self {
        Covector(std::array::from_fn(|j| if i == j { F::one() } else { F::zero() }))
    }

    pub fn to_form(&self) -> ExteriorForm<F> {
        ExteriorForm::from_vector(&self.0, Variance::Covectors)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, o: &Self) -> Self {
        Covector(std::array::from_fn(|i| self.0[i].add_ref(&o.0[i])))
    }

    pub fn scale(&self, s: &F) -> Self {
        Covector(std::array::from_fn(|i| self.0[i].mul_ref(s)))
    }
}

/// Plücker coordinates of a 2-form in the order
/// `(p01, p02, p03, p04, p12, p13, p14, p23, p24, p34)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PluckerPoint<F>(pub [F; 10]);

pub const PLUCKER_LABELS: [&str; 10] = ["p01", "p02", "p03", "p04", "p12", "p13", "p14", "p23", "p24", "p34"];

impl<F: Field> PluckerPoint<F> {
    pub fn from_i64(v: [i64; 10]) -> Self {
        PluckerPoint(v.map(F::from_i64))
    }

    pub fn from_form(omega: &ExteriorForm<F>) -> Self {
        assert_eq!(omega.degree, 2);
        PluckerPoint(std::array::from_fn(|k| omega.coeffs[k].clone()))
    }

    pub fn to_form(&self) -> ExteriorForm<F> {
        ExteriorForm { degree: 2, variance: Variance::Covectors, coeffs: self.0.to_vec() }
    }

    /// `p_ij` for any `i != j` (antisymmetric).
    pub fn get(&self, i: usize, j: usize) -> F {
        self.to_form().coeff(&[i, j])
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.is_zero())
    }

    /// Two covectors `x*, y*` with `x* ∧ y* = ω`, assuming `ω` is decomposable
    /// and nonzero.
    pub fn covectors(&self) -> Result<(Covector<F>, Covector<F>), ExteriorError> {
        let (check, _) = decomposable_test(&self.to_form());
        if !check || self.is_zero() {
            return Err(ExteriorError::Dependent);
        }
        let pairs = basis(2);
        let k = self.0.iter().position(|c| !c.is_zero()).expect("nonzero");
        let (i, j) = (pairs[k][0], pairs[k][1]);
        // Rows of the skew matrix: row_i = x_i y - y_i x, and row_i ∧ row_j = p_ij ω.
        let row = |r: usize| Covector(std::array::from_fn(|c| self.get(r, c)));
        let x = row(i).scale(&self.0[k].inv().expect("nonzero"));
        Ok((x, row(j)))
    }
}

/// `x* ∧ y*` as a Plücker point; fails when the covectors are dependent.
pub fn plucker_from_covectors<F: Field>(x: &Covector<F>, y: &Covector<F>) -> Result<PluckerPoint<F>, ExteriorError> {
    let omega = x.to_form().wedge(&y.to_form())?;
    if omega.is_zero() {
        return Err(ExteriorError::Dependent);
    }
    Ok(PluckerPoint::from_form(&omega))
}

/// Whether `ω ∧ ω = 0`, together with the five Plücker quadrics
/// (`(ω ∧ ω)/2` in the order 0123, 0124, 0134, 0234, 1234), e.g. the first
/// is `p01 p23 - p02 p13 + p03 p12`.
pub fn decomposable_test<F: Field>(omega: &ExteriorForm<F>) -> (bool, [F; 5]) {
    assert_eq!(omega.degree, 2);
    let sq = omega.wedge(omega).expect("degree 4");
    let half = F::from_i64(2).inv().expect("characteristic zero");
    let quadrics: [F; 5] = std::array::from_fn(|k| sq.coeffs[k].mul_ref(&half));
    (quadrics.iter().all(|q| q.is_zero()), quadrics)
}

/// The 2×5 matrix of 2-vectors of the Horrocks-Mumford monad:
/// `a[0][i] = e_{i+2} ∧ e_{i+3}`, `a[1][i] = e_{i+1} ∧ e_{i+4}` (indices mod 5).
#[derive(Debug, Clone)]
pub struct MonadData<F> {
    pub a: [[ExteriorForm<F>; DIM]; 2],
}

impl<F: Field> MonadData<F> {
    pub fn new() -> Self {
        let a = [
            std::array::from_fn(|i| ExteriorForm::basis_element(&[(i + 2) % 5, (i + 3) % 5], Variance::Vectors)),
            std::array::from_fn(|i| ExteriorForm::basis_element(&[(i + 1) % 5, (i + 4) % 5], Variance::Vectors)),
        ];
        MonadData { a }
    }

    /// `B = ᵗ(A·Q)` with `Q = [[0, 1], [-1, 0]]`: the 5×2 matrix with rows
    /// `(-a[1][i], a[0][i])`.
    pub fn b(&self) -> [[ExteriorForm<F>; 2]; DIM] {
        let minus = F::from_i64(-1);
        std::array::from_fn(|i| [self.a[1][i].scale(&minus), self.a[0][i].clone()])
    }
}

impl<F: Field> Default for MonadData<F> {
    fn default() -> Self {
        Self::new()
    }
}
