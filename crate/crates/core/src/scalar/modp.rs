use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use super::{Cyclo5, Rational, ScalarError};

/// Default cross-check prime: the first prime above 10^6 with `p = 1 mod 5`,
/// so that a primitive fifth root of unity exists.
pub const DEFAULT_PRIME: u64 = 1_000_081;

/// A residue modulo a runtime prime `p < 2^32`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct ModP {
    residue: u64,
    modulus: u64,
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for 32-bit inputs (bases 2, 7, 61).
fn is_prime_u32(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 61] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let (mut d, mut s) = (n - 1, 0);
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 7, 61] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = x * x % n;
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

impl ModP {
    pub fn new(value: i64, modulus: u64) -> Result<Self, ScalarError> {
        if modulus > u32::MAX as u64 || modulus == 2 || !is_prime_u32(modulus) {
            return Err(ScalarError::BadModulus(modulus));
        }
        Ok(ModP { residue: value.rem_euclid(modulus as i64) as u64, modulus })
    }

    fn raw(residue: u64, modulus: u64) -> Self {
        ModP { residue, modulus }
    }

    pub fn residue(&self) -> u64 {
        self.residue
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn is_zero(&self) -> bool {
        self.residue == 0
    }

    pub fn zero_mod(modulus: u64) -> Self {
        ModP::raw(0, modulus)
    }

    pub fn pow(&self, e: u64) -> Self {
        ModP::raw(pow_mod(self.residue, e, self.modulus), self.modulus)
    }

    pub fn inv(&self) -> Result<Self, ScalarError> {
        if self.residue == 0 {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(self.pow(self.modulus - 2))
    }

    fn check(&self, other: &Self) {
        assert_eq!(self.modulus, other.modulus, "{}", ScalarError::ModulusMismatch(self.modulus, other.modulus));
    }

    pub fn from_bigint(n: &BigInt, modulus: u64) -> Self {
        let r = n.mod_floor(&BigInt::from(modulus));
        ModP::raw(r.to_u64().expect("residue fits"), modulus)
    }
}

impl Add for ModP {
    type Output = ModP;
    fn add(self, o: ModP) -> ModP {
        self.check(&o);
        ModP::raw((self.residue + o.residue) % self.modulus, self.modulus)
    }
}

impl Sub for ModP {
    type Output = ModP;
    fn sub(self, o: ModP) -> ModP {
        self.check(&o);
        ModP::raw((self.residue + self.modulus - o.residue) % self.modulus, self.modulus)
    }
}

impl Mul for ModP {
    type Output = ModP;
    fn mul(self, o: ModP) -> ModP {
        self.check(&o);
        ModP::raw(self.residue * o.residue % self.modulus, self.modulus)
    }
}

impl Neg for ModP {
    type Output = ModP;
    fn neg(self) -> ModP {
        ModP::raw((self.modulus - self.residue) % self.modulus, self.modulus)
    }
}

impl fmt::Display for ModP {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.residue, self.modulus)
    }
}

/// Smallest-base primitive fifth root of unity modulo `p`; requires `p = 1 mod 5`.
pub fn primitive_fifth_root(modulus: u64) -> Result<ModP, ScalarError> {
    let one = ModP::new(1, modulus)?;
    if !(modulus - 1).is_multiple_of(5) {
        return Err(ScalarError::BadZetaImage(0, modulus));
    }
    (2..modulus).map(|b| ModP::raw(b, modulus).pow((modulus - 1) / 5)).find(|z| *z != one).ok_or(ScalarError::BadZetaImage(0, modulus))
}

/// Ring homomorphisms from the exact fields into `F_p`.
pub trait EmbedModP {
    /// `zeta_image` fixes the modulus and the image of z; it must be a
    /// primitive fifth root of unity whenever the element involves z.
    fn embed(&self, zeta_image: &ModP) -> Result<ModP, ScalarError>;
}

impl EmbedModP for Rational {
    fn embed(&self, zeta_image: &ModP) -> Result<ModP, ScalarError> {
        let p = zeta_image.modulus;
        let den = ModP::from_bigint(self.denom(), p);
        if den.is_zero() {
            return Err(ScalarError::NotInvertibleModP(self.denom().to_string(), p));
        }
        Ok(ModP::from_bigint(self.numer(), p) * den.inv()?)
    }
}

impl EmbedModP for Cyclo5 {
    fn embed(&self, zeta_image: &ModP) -> Result<ModP, ScalarError> {
        let p = zeta_image.modulus;
        let involves_zeta = self.coeffs()[1..].iter().any(|c| !c.is_zero());
        if involves_zeta {
            let one = ModP::raw(1, p);
            if zeta_image.pow(5) != one || *zeta_image == one {
                return Err(ScalarError::BadZetaImage(zeta_image.residue, p));
            }
        }
        let mut acc = ModP::zero_mod(p);
        let mut zk = ModP::raw(1, p);
        for c in self.coeffs() {
            acc = acc + c.embed(zeta_image)? * zk;
            zk = zk * *zeta_image;
        }
        Ok(acc)
    }
}

/// Free-function form of [`EmbedModP::embed`].
pub fn embed_to_prime_field<T: EmbedModP>(x: &T, zeta_image: &ModP) -> Result<ModP, ScalarError> {
    x.embed(zeta_image)
}
