//! The Heisenberg group of level 5 acting on `V`, on covectors and on
//! Plücker coordinates.
//!
//! Conventions: `σ e_i = e_{i+1}`, `τ e_i = ζ^i e_i`, and `(a, b, c)` is the
//! element `ζ^c τ^a σ^b`, so `(a, b, c) e_i = ζ^{c + a(i+b)} e_{i+b}`.

use num_traits::{One, Zero};
use thiserror::Error;

use crate::exmat::ExactMatrix;
use crate::exterior::{basis, Covector, PluckerPoint, DIM};
use crate::hmrestrict::{LineSpec, PlaneSpec};
use crate::scalar::{Cyclo5, Field, Rational};

#[derive(Debug, Error, PartialEq)]
pub enum HeisenbergError {
    #[error("character sum for degree {degree} is {value}, not a nonnegative integer")]
    NotAnInteger { degree: usize, value: String },
    #[error("degree must be at least 1")]
    DegreeZero,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    pub a: u8,
    pub b: u8,
    pub c: u8,
}

fn m5(n: i64) -> u8 {
    n.rem_euclid(5) as u8
}

impl GroupElement {
    pub fn new(a: i64, b: i64, c: i64) -> Self {
        GroupElement { a: m5(a), b: m5(b), c: m5(c) }
    }

    pub fn identity() -> Self {
        Self::new(0, 0, 0)
    }

    pub fn sigma() -> Self {
        Self::new(0, 1, 0)
    }

    pub fn tau() -> Self {
        Self::new(1, 0, 0)
    }

    /// The central scalar `ζ^c`.
    pub fn central(c: i64) -> Self {
        Self::new(0, 0, c)
    }

    /// `self · other`: the cocycle comes from `σ^b τ^{a'} = ζ^{-a'b} τ^{a'} σ^b`.
    pub fn compose(&self, o: &Self) -> Self {
        let (a, b, c) = (self.a as i64, self.b as i64, self.c as i64);
        let (a2, b2, c2) = (o.a as i64, o.b as i64, o.c as i64);
        Self::new(a + a2, b + b2, c + c2 - a2 * b)
    }

    pub fn inverse(&self) -> Self {
        let (a, b, c) = (self.a as i64, self.b as i64, self.c as i64);
        Self::new(-a, -b, -c - a * b)
    }

    pub fn pow(&self, n: usize) -> Self {
        (0..n).fold(Self::identity(), |acc, _| acc.compose(self))
    }

    pub fn is_central(&self) -> bool {
        self.a == 0 && self.b == 0
    }

    /// Column `i` holds the image of `e_i`.
    pub fn matrix(&self) -> ExactMatrix<Cyclo5> {
        let (a, b, c) = (self.a as usize, self.b as usize, self.c as usize);
        ExactMatrix::from_fn(DIM, DIM, |row, col| if row == (col + b) % DIM { Cyclo5::zeta_pow((c + a * row) as i64) } else { Cyclo5::zero() })
    }

    /// Trace on `V`: `5ζ^c` on the center, zero elsewhere.
    pub fn trace(&self) -> Cyclo5 {
        if self.b != 0 {
            return Cyclo5::zero();
        }
        let s = (0..DIM as i64).fold(Cyclo5::zero(), |acc, i| acc + Cyclo5::zeta_pow(self.a as i64 * i));
        s * Cyclo5::zeta_pow(self.c as i64)
    }

    /// Contragredient action `(g·φ)(v) = φ(g⁻¹ v)`.
    pub fn act_on_covector(&self, phi: &Covector<Cyclo5>) -> Covector<Cyclo5> {
        let (a, b, c) = (self.a as i64, self.b as i64, self.c as i64);
        Covector(std::array::from_fn(|j| {
            let src = (j as i64 - b).rem_euclid(5) as usize;
            phi.0[src].mul_ref(&Cyclo5::zeta_pow(-(c + a * j as i64)))
        }))
    }

    pub fn act_on_line(&self, line: &LineSpec<Cyclo5>) -> LineSpec<Cyclo5> {
        let c = line.covectors();
        LineSpec::new(std::array::from_fn(|k| self.act_on_covector(&c[k]))).expect("group elements are invertible")
    }

    pub fn act_on_plane(&self, plane: &PlaneSpec<Cyclo5>) -> PlaneSpec<Cyclo5> {
        PlaneSpec::from_covectors(self.act_on_covector(plane.x()), self.act_on_covector(plane.y())).expect("group elements are invertible")
    }

    /// The induced linear map on Plücker coordinates (lex order).
    pub fn plucker_matrix(&self) -> ExactMatrix<Cyclo5> {
        let pairs = basis(2);
        let columns: Vec<PluckerPoint<Cyclo5>> = pairs
            .iter()
            .map(|ij| {
                let x = self.act_on_covector(&Covector::unit(ij[0]));
                let y = self.act_on_covector(&Covector::unit(ij[1]));
                crate::exterior::plucker_from_covectors(&x, &y).expect("covectors")
            })
            .collect();
        ExactMatrix::from_fn(10, 10, |r, c| columns[c].0[r].clone())
    }
}

/// All 125 elements, ordered by `(a, b, c)`.
pub fn all_elements() -> Vec<GroupElement> {
    (0..125).map(|n| GroupElement::new(n / 25, (n / 5) % 5, n % 5)).collect()
}

/// Orbit of a line under `⟨σ, τ⟩`, by breadth-first closure.
pub fn orbit(line: &LineSpec<Cyclo5>) -> Vec<LineSpec<Cyclo5>> {
    let gens = [GroupElement::sigma(), GroupElement::tau()];
    let mut seen = vec![line.clone()];
    let mut frontier = vec![line.clone()];
    while let Some(l) = frontier.pop() {
        for g in &gens {
            let image = g.act_on_line(&l);
            if !seen.iter().any(|s| s.same_line(&image)) {
                seen.push(image.clone());
                frontier.push(image);
            }
        }
    }
    seen
}

pub fn stabilizer(line: &LineSpec<Cyclo5>) -> Vec<GroupElement> {
    all_elements().into_iter().filter(|g| g.act_on_line(line).same_line(line)).collect()
}

/// Trace of `g` on `⋀²V`.
fn trace_wedge2(g: &GroupElement) -> Cyclo5 {
    let t = g.trace();
    (t.clone() * t - g.pow(2).trace()) / Cyclo5::from_i64(2)
}

/// Trace of `g` on `Sⁱ(⋀²V)` from the power sums `p_j = tr(g^j | ⋀²V)`
/// via `i·h_i = Σ_{j=1..i} p_j h_{i-j}`.
fn trace_sym(g: &GroupElement, i: usize) -> Cyclo5 {
    let p: Vec<Cyclo5> = (0..=i).map(|j| trace_wedge2(&g.pow(j))).collect();
    let mut h = vec![Cyclo5::one()];
    for n in 1..=i {
        let s = (1..=n).fold(Cyclo5::zero(), |acc, j| acc + p[j].mul_ref(&h[n - j]));
        h.push(s / Cyclo5::from_i64(n as i64));
    }
    h.pop().expect("h_0 is present")
}

/// Dimension of the invariants of `H₅` in `Sⁱ(⋀²V)`, by averaging the
/// character over the group.
pub fn trivial_summand_dim(i: usize) -> Result<u64, HeisenbergError> {
    if i == 0 {
        return Err(HeisenbergError::DegreeZero);
    }
    let total = all_elements().iter().fold(Cyclo5::zero(), |acc, g| acc + trace_sym(g, i));
    let avg = total / Cyclo5::from_i64(125);
    let bad = || HeisenbergError::NotAnInteger { degree: i, value: avg.to_string() };
    let q: Rational = avg.as_rational().ok_or_else(bad)?;
    if !q.is_integer() || q < Rational::zero() {
        return Err(bad());
    }
    u64::try_from(q.to_integer()).map_err(|_| bad())
}

/// Planes over any field are moved into `Q(ζ₅)` before acting.
pub fn act_on_plane_any<F: Field>(g: &GroupElement, plane: &PlaneSpec<F>) -> PlaneSpec<Cyclo5> {
    g.act_on_plane(&plane.map(Field::to_cyclo5))
}
