//! Exact univariate and bivariate polynomials: interpolated determinants of
//! pencils of matrices, GCDs, squarefree parts, Sylvester resultants.

mod bipoly;
mod roots;
mod system;

use std::fmt;

use crate::exmat::ExactMatrix;
use crate::scalar::Field;

pub use bipoly::{resultant, BiPoly, ResultantOutcome, Var};
pub(crate) use roots::modp_gcd;
pub use roots::rational_roots;
pub use system::{solve_by_combinations, FiniteSolution, SystemOutcome, STABLE_ROUNDS};

/// Dense univariate polynomial, coefficients from the constant term up,
/// with no trailing zeros.
#[derive(Clone, PartialEq)]
pub struct UniPoly<F> {
    coeffs: Vec<F>,
}

impl<F: fmt::Debug> fmt::Debug for UniPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("UniPoly").field(&self.coeffs).finish()
    }
}

impl<F: Field> fmt::Display for UniPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| match k {
                0 => format!("({c})"),
                1 => format!("({c})*t"),
                _ => format!("({c})*t^{k}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

impl<F: Field> UniPoly<F> {
    pub fn new(mut coeffs: Vec<F>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: F) -> Self {
        Self::new(vec![c])
    }

    pub fn from_i64(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| F::from_i64(x)).collect())
    }

    /// `x - r`
    pub fn linear_root(r: F) -> Self {
        Self::new(vec![-r, F::one()])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> F {
        self.coeffs.get(k).cloned().unwrap_or_else(F::zero)
    }

    pub fn leading(&self) -> Option<&F> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &F) -> F {
        self.coeffs.iter().rev().fold(F::zero(), |acc, c| acc.mul_ref(x).add_ref(c))
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new((0..n).map(|k| self.coeff(k).add_ref(&o.coeff(k))).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new((0..n).map(|k| self.coeff(k).sub_ref(&o.coeff(k))).collect())
    }

    pub fn scale(&self, s: &F) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.mul_ref(s)).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut out = vec![F::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] = out[i + j].add_ref(&a.mul_ref(b));
                }
            }
        }
        Self::new(out)
    }

    pub fn pow(&self, e: usize) -> Self {
        (0..e).fold(Self::constant(F::one()), |acc, _| acc.mul(self))
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let dl = d.leading().expect("division by zero polynomial");
        let dinv = dl.inv().expect("nonzero leading coefficient");
        let dd = d.coeffs.len() - 1;
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut q = vec![F::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = r[k + dd].mul_ref(&dinv);
            if !c.is_zero() {
                for (i, dc) in d.coeffs.iter().enumerate() {
                    r[k + i] = r[k + i].sub_ref(&c.mul_ref(dc));
                }
            }
            q[k] = c;
        }
        r.truncate(dd);
        (Self::new(q), Self::new(r))
    }

    pub fn divides(&self, other: &Self) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        other.div_rem(self).1.is_zero()
    }

    pub fn derivative(&self) -> Self {
        Self::new(self.coeffs.iter().enumerate().skip(1).map(|(k, c)| c.mul_ref(&F::from_i64(k as i64))).collect())
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Self::zero(),
            Some(l) => self.scale(&l.inv().expect("nonzero")),
        }
    }

    /// Substitutes `x -> x + shift`.
    pub fn shift(&self, shift: &F) -> Self {
        let lin = Self::new(vec![shift.clone(), F::one()]);
        self.coeffs.iter().rev().fold(Self::zero(), |acc, c| acc.mul(&lin).add(&Self::constant(c.clone())))
    }
}

/// Monic GCD by Euclid; remainders are kept primitive by the field's
/// normalization (integer content removal over Q).
pub fn gcd<F: Field>(f: &UniPoly<F>, g: &UniPoly<F>) -> UniPoly<F> {
    let (mut a, mut b) = (normalize(f), normalize(g));
    while !b.is_zero() {
        let r = a.div_rem(&b).1;
        a = b;
        b = normalize(&r);
    }
    a.monic()
}

fn normalize<F: Field>(p: &UniPoly<F>) -> UniPoly<F> {
    if p.is_zero() {
        return p.clone();
    }
    match p.coeffs.iter().map(Field::as_rational).collect::<Option<Vec<_>>>() {
        Some(qs) => {
            let prim = roots::primitive_integer(&qs);
            UniPoly::new(prim.iter().map(|n| F::from_rational(&crate::scalar::Rational::from_integer(n.clone()))).collect())
        }
        None => p.monic(),
    }
}

/// `f / gcd(f, f')`, monic; its degree counts distinct roots over the
/// algebraic closure.
pub fn squarefree_part<F: Field>(f: &UniPoly<F>) -> UniPoly<F> {
    if f.is_zero() {
        return UniPoly::zero();
    }
    let g = gcd(f, &f.derivative());
    f.div_rem(&g).0.monic()
}

/// Newton-form interpolation through `(xs[i], ys[i])`; `xs` distinct.
pub fn interpolate<F: Field>(xs: &[F], ys: &[F]) -> UniPoly<F> {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len();
    let mut dd = ys.to_vec();
    for level in 1..n {
        for i in (level..n).rev() {
            let num = dd[i].sub_ref(&dd[i - 1]);
            let den = xs[i].sub_ref(&xs[i - level]);
            dd[i] = num.div_ref(&den);
        }
    }
    let mut poly = UniPoly::constant(dd[n - 1].clone());
    for i in (0..n - 1).rev() {
        poly = poly.mul(&UniPoly::linear_root(xs[i].clone())).add(&UniPoly::constant(dd[i].clone()));
    }
    poly
}

/// A binary form `Σ c_k t^k s^(d-k)` of degree `d`, stored dehomogenized at
/// `s = 1`. The multiplicity of the root `(s:t) = (0:1)` is
/// `d - deg_t`.
#[derive(Clone, PartialEq, Debug)]
pub struct BinaryForm<F> {
    pub degree: usize,
    pub poly: UniPoly<F>,
}

impl<F: Field> BinaryForm<F> {
    pub fn new(degree: usize, poly: UniPoly<F>) -> Self {
        assert!(poly.degree().is_none_or(|d| d <= degree), "form degree too small");
        BinaryForm { degree, poly }
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    /// Multiplicity of the root at `s = 0`.
    pub fn root_at_infinity(&self) -> usize {
        self.poly.degree().map_or(0, |d| self.degree - d)
    }

    pub fn eval(&self, s: &F, t: &F) -> F {
        let mut acc = F::zero();
        for (k, c) in self.poly.coeffs().iter().enumerate() {
            let mut term = c.clone();
            for _ in 0..k {
                term = term.mul_ref(t);
            }
            for _ in 0..self.degree - k {
                term = term.mul_ref(s);
            }
            acc = acc.add_ref(&term);
        }
        acc
    }

    /// GCD of binary forms (the zero form is neutral).
    pub fn gcd(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let g = gcd(&self.poly, &other.poly);
        let inf = self.root_at_infinity().min(other.root_at_infinity());
        let d = g.degree().unwrap_or(0) + inf;
        BinaryForm::new(d, g)
    }

    pub fn divides(&self, other: &Self) -> bool {
        other.is_zero() || (!self.is_zero() && self.root_at_infinity() <= other.root_at_infinity() && self.poly.divides(&other.poly))
    }
}

/// `det(s·A + t·B)` as a binary form of degree `n`, by evaluating at
/// `t = offset, offset+1, ..., offset+n` (with `s = 1`) and interpolating.
pub fn interp_det<F: Field>(a: &ExactMatrix<F>, b: &ExactMatrix<F>, offset: i64) -> BinaryForm<F> {
    assert_eq!(a.rows(), a.cols());
    assert_eq!((a.rows(), a.cols()), (b.rows(), b.cols()));
    let n = a.rows();
    let xs: Vec<F> = (0..=n as i64).map(|k| F::from_i64(offset + k)).collect();
    let ys: Vec<F> = xs.iter().map(|t| a.add(&b.scale(t)).determinant().expect("square")).collect();
    BinaryForm::new(n, interpolate(&xs, &ys))
}
