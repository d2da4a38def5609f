use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{Field, Rational};

/// An element `c0 + c1 z + c2 z^2 + c3 z^3` of Q(z), z a primitive fifth
/// root of unity, reduced modulo `1 + z + z^2 + z^3 + z^4`.
///
/// The representation is canonical, so derived equality is field equality.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Cyclo5 {
    c: [Rational; 4],
}

impl Cyclo5 {
    pub fn new(c: [Rational; 4]) -> Self {
        Cyclo5 { c }
    }

    /// Reduces an arbitrary coefficient list in powers of z.
    pub fn from_powers(coeffs: &[Rational]) -> Self {
        let mut folded: [Rational; 5] = Default::default();
        for (k, a) in coeffs.iter().enumerate() {
            folded[k % 5] += a;
        }
        // z^4 = -(1 + z + z^2 + z^3)
        let top = folded[4].clone();
        Cyclo5 { c: [&folded[0] - &top, &folded[1] - &top, &folded[2] - &top, &folded[3] - &top] }
    }

    pub fn zeta() -> Self {
        Self::zeta_pow(1)
    }

    /// `z^k` for any integer `k`.
    pub fn zeta_pow(k: i64) -> Self {
        let k = k.rem_euclid(5) as usize;
        let mut powers: [Rational; 5] = Default::default();
        powers[k] = Rational::one();
        Self::from_powers(&powers)
    }

    pub fn coeffs(&self) -> &[Rational; 4] {
        &self.c
    }

    /// Image under the Galois automorphism z -> z^k (k not divisible by 5).
    pub fn galois(&self, k: i64) -> Self {
        let mut powers: [Rational; 5] = Default::default();
        for (i, a) in self.c.iter().enumerate() {
            powers[(i as i64 * k).rem_euclid(5) as usize] += a;
        }
        Self::from_powers(&powers)
    }

    /// Field norm down to Q.
    pub fn norm(&self) -> Rational {
        let n = self.clone() * self.galois(2) * self.galois(3) * self.galois(4);
        debug_assert!(n.c[1..].iter().all(Zero::is_zero));
        n.c[0].clone()
    }

    pub fn is_rational(&self) -> bool {
        self.c[1..].iter().all(Zero::is_zero)
    }

    /// Integer numerators over a common denominator.
    fn integral(&self) -> ([BigInt; 4], BigInt) {
        let den = self.c.iter().fold(BigInt::one(), |acc, a| acc.lcm(a.denom()));
        (std::array::from_fn(|k| self.c[k].numer() * (&den / self.c[k].denom())), den)
    }

    // Products dominate the cost of exact elimination over Q(z); working with
    // integers defers the rational reductions to the four final coefficients.
    fn mul_impl(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let (a, da) = self.integral();
        let (b, db) = other.integral();
        let mut prod: [BigInt; 5] = Default::default();
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    prod[(i + j) % 5] += x * y;
                }
            }
        }
        let den = da * db;
        let [p0, p1, p2, p3, top] = prod;
        Cyclo5 { c: [p0, p1, p2, p3].map(|p| Rational::new(p - &top, den.clone())) }
    }
}

impl Zero for Cyclo5 {
    fn zero() -> Self {
        Cyclo5 { c: Default::default() }
    }

    fn is_zero(&self) -> bool {
        self.c.iter().all(Zero::is_zero)
    }
}

impl One for Cyclo5 {
    fn one() -> Self {
        Self::from_rational(&Rational::one())
    }
}

impl Add for Cyclo5 {
    type Output = Cyclo5;
    fn add(self, o: Cyclo5) -> Cyclo5 {
        self.add_ref(&o)
    }
}

impl Sub for Cyclo5 {
    type Output = Cyclo5;
    fn sub(self, o: Cyclo5) -> Cyclo5 {
        self.sub_ref(&o)
    }
}

impl Mul for Cyclo5 {
    type Output = Cyclo5;
    fn mul(self, o: Cyclo5) -> Cyclo5 {
        self.mul_impl(&o)
    }
}

impl Div for Cyclo5 {
    type Output = Cyclo5;
    fn div(self, o: Cyclo5) -> Cyclo5 {
        self.div_ref(&o)
    }
}

impl Neg for Cyclo5 {
    type Output = Cyclo5;
    fn neg(self) -> Cyclo5 {
        let [a, b, c, d] = self.c;
        Cyclo5 { c: [-a, -b, -c, -d] }
    }
}

impl Field for Cyclo5 {
    const NAME: &'static str = "Q(zeta5)";

    /// `x^-1 = (x^(2) x^(3) x^(4)) / N(x)` with `x^(k)` the Galois conjugates.
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let co = self.galois(2) * self.galois(3) * self.galois(4);
        let n = (self.clone() * co.clone()).c[0].clone();
        let ninv = n.recip();
        Some(Cyclo5 { c: co.c.map(|a| a * &ninv) })
    }

    fn from_i64(n: i64) -> Self {
        Self::from_rational(&Rational::from_i64(n))
    }

    fn from_rational(q: &Rational) -> Self {
        let mut c: [Rational; 4] = Default::default();
        c[0] = q.clone();
        Cyclo5 { c }
    }

    fn add_ref(&self, o: &Self) -> Self {
        Cyclo5 { c: [&self.c[0] + &o.c[0], &self.c[1] + &o.c[1], &self.c[2] + &o.c[2], &self.c[3] + &o.c[3]] }
    }

    fn sub_ref(&self, o: &Self) -> Self {
        Cyclo5 { c: [&self.c[0] - &o.c[0], &self.c[1] - &o.c[1], &self.c[2] - &o.c[2], &self.c[3] - &o.c[3]] }
    }

    fn mul_ref(&self, o: &Self) -> Self {
        self.mul_impl(o)
    }

    fn as_rational(&self) -> Option<Rational> {
        self.is_rational().then(|| self.c[0].clone())
    }

    fn to_cyclo5(&self) -> Cyclo5 {
        self.clone()
    }

    fn field_roots(p: &crate::polykit::UniPoly<Self>) -> Vec<Self> {
        if p.degree() == Some(1) {
            return vec![-(p.coeff(0).div_ref(&p.coeff(1)))];
        }
        // Rational polynomials get the full rational-root search.
        let rational: Option<Vec<Rational>> = p.coeffs().iter().map(Field::as_rational).collect();
        match rational {
            Some(qs) => crate::polykit::rational_roots(&crate::polykit::UniPoly::new(qs)).iter().map(Self::from_rational).collect(),
            None => Vec::new(),
        }
    }
}

impl fmt::Display for Cyclo5 {
    /// Prints in the literal grammar accepted by [`super::parse_cyclo`],
    /// e.g. `1+2*z^3` or `-1/2*z`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let neg = a < &Rational::zero();
            let abs = if neg { -a.clone() } else { a.clone() };
            if neg {
                write!(f, "-")?;
            } else if !first {
                write!(f, "+")?;
            }
            first = false;
            match k {
                0 => write!(f, "{abs}")?,
                _ => {
                    if !abs.is_one() {
                        write!(f, "{abs}*")?;
                    }
                    if k == 1 {
                        write!(f, "z")?;
                    } else {
                        write!(f, "z^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}
