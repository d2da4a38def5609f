use std::collections::BTreeMap;

use crate::exmat::ExactMatrix;
use crate::scalar::Field;

use super::{gcd, interpolate, UniPoly};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Var {
    X,
    Y,
}

impl Var {
    pub fn other(self) -> Var {
        match self {
            Var::X => Var::Y,
            Var::Y => Var::X,
        }
    }
}

/// Sparse bivariate polynomial in `x`, `y`; only nonzero terms are stored,
/// keyed by `(deg_x, deg_y)`.
#[derive(Clone, PartialEq, Debug)]
pub struct BiPoly<F> {
    terms: BTreeMap<(usize, usize), F>,
}

impl<F: Field> Default for BiPoly<F> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<F: Field> BiPoly<F> {
    pub fn zero() -> Self {
        BiPoly { terms: BTreeMap::new() }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = ((usize, usize), F)>) -> Self {
        let mut p = Self::zero();
        for (k, c) in terms {
            p.add_term(k, c);
        }
        p
    }

    pub fn constant(c: F) -> Self {
        Self::from_terms([((0, 0), c)])
    }

    pub fn x() -> Self {
        Self::from_terms([((1, 0), F::one())])
    }

    pub fn y() -> Self {
        Self::from_terms([((0, 1), F::one())])
    }

    pub fn from_uni(p: &UniPoly<F>, var: Var) -> Self {
        Self::from_terms(p.coeffs().iter().enumerate().map(|(k, c)| {
            let key = if var == Var::X { (k, 0) } else { (0, k) };
            (key, c.clone())
        }))
    }

    pub fn from_uni_x(p: &UniPoly<F>) -> Self {
        Self::from_uni(p, Var::X)
    }

    pub fn from_uni_y(p: &UniPoly<F>) -> Self {
        Self::from_uni(p, Var::Y)
    }

    fn add_term(&mut self, key: (usize, usize), c: F) {
        if c.is_zero() {
            return;
        }
        let sum = match self.terms.remove(&key) {
            Some(old) => old.add_ref(&c),
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(key, sum);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(usize, usize), &F)> {
        self.terms.iter()
    }

    pub fn coeff(&self, i: usize, j: usize) -> F {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(F::zero)
    }

    pub fn total_degree(&self) -> Option<usize> {
        self.terms.keys().map(|(i, j)| i + j).max()
    }

    pub fn degree_in(&self, var: Var) -> Option<usize> {
        self.terms.keys().map(|&(i, j)| if var == Var::X { i } else { j }).max()
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut p = self.clone();
        for (k, c) in &o.terms {
            p.add_term(*k, c.clone());
        }
        p
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&-F::one()))
    }

    pub fn scale(&self, s: &F) -> Self {
        Self::from_terms(self.terms.iter().map(|(k, c)| (*k, c.mul_ref(s))))
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut p = Self::zero();
        for ((i, j), a) in &self.terms {
            for ((k, l), b) in &o.terms {
                p.add_term((i + k, j + l), a.mul_ref(b));
            }
        }
        p
    }

    pub fn eval(&self, x: &F, y: &F) -> F {
        self.terms.iter().fold(F::zero(), |acc, ((i, j), c)| acc.add_ref(&c.mul_ref(&pow(x, *i)).mul_ref(&pow(y, *j))))
    }

    /// Substitutes `var = value`, leaving a polynomial in the other variable.
    pub fn specialize(&self, var: Var, value: &F) -> UniPoly<F> {
        let n = self.degree_in(var.other()).map_or(0, |d| d + 1);
        let mut c = vec![F::zero(); n];
        for (&(i, j), v) in &self.terms {
            let (e, k) = if var == Var::X { (i, j) } else { (j, i) };
            c[k] = c[k].add_ref(&v.mul_ref(&pow(value, e)));
        }
        UniPoly::new(c)
    }

    /// Coefficients of `var^k` for `k = 0..=deg`, each a polynomial in the
    /// other variable.
    pub fn coeffs_in(&self, var: Var) -> Vec<UniPoly<F>> {
        let Some(d) = self.degree_in(var) else {
            return Vec::new();
        };
        let m = self.degree_in(var.other()).map_or(0, |d| d + 1);
        let mut grid = vec![vec![F::zero(); m]; d + 1];
        for (&(i, j), v) in &self.terms {
            let (e, k) = if var == Var::X { (i, j) } else { (j, i) };
            grid[e][k] = v.clone();
        }
        grid.into_iter().map(UniPoly::new).collect()
    }

    /// Recovers a polynomial with `deg_x <= dx`, `deg_y <= dy` from its
    /// values on the grid `{0..=dx} x {0..=dy}`.
    pub fn interpolate_grid(dx: usize, dy: usize, f: impl Fn(&F, &F) -> F) -> Self {
        let xs: Vec<F> = (0..=dx as i64).map(F::from_i64).collect();
        let ys: Vec<F> = (0..=dy as i64).map(F::from_i64).collect();
        let rows: Vec<UniPoly<F>> = xs
            .iter()
            .map(|x| {
                let vals: Vec<F> = ys.iter().map(|y| f(x, y)).collect();
                interpolate(&ys, &vals)
            })
            .collect();
        let mut p = Self::zero();
        for j in 0..=dy {
            let vals: Vec<F> = rows.iter().map(|r| r.coeff(j)).collect();
            let col = interpolate(&xs, &vals);
            for (i, c) in col.coeffs().iter().enumerate() {
                p.add_term((i, j), c.clone());
            }
        }
        p
    }
}

fn pow<F: Field>(x: &F, e: usize) -> F {
    (0..e).fold(F::one(), |acc, _| acc.mul_ref(x))
}

#[derive(Clone, Debug, PartialEq)]
pub struct ResultantOutcome<F> {
    /// Resultant as a polynomial in the variable not eliminated.
    pub poly: UniPoly<F>,
    /// The resultant vanishes identically: a shared component, or degree
    /// zero in the eliminated variable for both inputs.
    pub identically_zero: bool,
    /// The leading coefficients (in the eliminated variable) share a root,
    /// so some roots of `poly` may not lift to common solutions.
    pub leading_degenerate: bool,
}

/// Sylvester resultant eliminating `eliminate`, computed by evaluating the
/// formal Sylvester matrix at enough points of the remaining variable and
/// interpolating.
pub fn resultant<F: Field>(f: &BiPoly<F>, g: &BiPoly<F>, eliminate: Var) -> ResultantOutcome<F> {
    assert!(!f.is_zero() && !g.is_zero(), "resultant of the zero polynomial");
    let fc = f.coeffs_in(eliminate);
    let gc = g.coeffs_in(eliminate);
    let (m, n) = (fc.len() - 1, gc.len() - 1);
    let other = eliminate.other();
    let df = f.degree_in(other).unwrap_or(0);
    let dg = g.degree_in(other).unwrap_or(0);
    // Bezout bounds the degree by the product of total degrees, which is
    // often far below the Sylvester row count.
    let bezout = f.total_degree().unwrap_or(0) * g.total_degree().unwrap_or(0);
    let bound = (n * df + m * dg).min(bezout);

    let size = m + n;
    let xs: Vec<F> = (0..=bound as i64).map(F::from_i64).collect();
    let ys: Vec<F> = xs
        .iter()
        .map(|t| {
            let fv: Vec<F> = fc.iter().map(|p| p.eval(t)).collect();
            let gv: Vec<F> = gc.iter().map(|p| p.eval(t)).collect();
            let mut s = ExactMatrix::zeros(size, size);
            // Rows hold coefficients from the top degree down.
            for r in 0..n {
                for (k, c) in fv.iter().enumerate() {
                    s.set(r, r + m - k, c.clone());
                }
            }
            for r in 0..m {
                for (k, c) in gv.iter().enumerate() {
                    s.set(n + r, r + n - k, c.clone());
                }
            }
            s.determinant().expect("square")
        })
        .collect();
    let poly = interpolate(&xs, &ys);
    let lf = fc.last().expect("nonzero");
    let lg = gc.last().expect("nonzero");
    let leading_degenerate = gcd(lf, lg).degree().is_some_and(|d| d > 0);
    ResultantOutcome { identically_zero: poly.is_zero(), poly, leading_degenerate }
}
