//! Rational roots by p-adic Newton lifting and rational reconstruction.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::scalar::{ModP, Rational};

use super::{squarefree_part, UniPoly};

/// Scales rationals to coprime integers with a positive leading entry.
pub(crate) fn primitive_integer(c: &[Rational]) -> Vec<BigInt> {
    let lcm = c.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let ints: Vec<BigInt> = c.iter().map(|q| q.numer() * (&lcm / q.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, n| acc.gcd(n));
    if g.is_zero() {
        return ints;
    }
    let sign = if ints.iter().rev().find(|n| !n.is_zero()).is_some_and(|n| n.is_negative()) { -1 } else { 1 };
    ints.iter().map(|n| n / &g * sign).collect()
}

fn eval_int(f: &[BigInt], x: &BigInt, m: &BigInt) -> BigInt {
    f.iter().rev().fold(BigInt::zero(), |acc, c| (acc * x + c).mod_floor(m))
}

fn inverse_mod(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    e.gcd.is_one().then(|| e.x.mod_floor(m))
}

/// Smallest `a/b` with `a = b·r mod m`, `|a|, b <= sqrt(m/2)`.
fn reconstruct(r: &BigInt, m: &BigInt) -> Option<Rational> {
    let bound: BigInt = (m / 2u32).sqrt();
    let (mut r0, mut r1) = (m.clone(), r.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        (r0, r1) = (r1.clone(), &r0 - &q * &r1);
        (t0, t1) = (t1.clone(), &t0 - &q * &t1);
    }
    if t1.is_zero() || t1.abs() > bound {
        return None;
    }
    Some(Rational::new(r1, t1))
}

const START_PRIME: u64 = 1009;

/// All rational roots of `p`, ascending, without multiplicity.
pub fn rational_roots(p: &UniPoly<Rational>) -> Vec<Rational> {
    if p.degree().is_none_or(|d| d == 0) {
        return Vec::new();
    }
    let mut f = primitive_integer(squarefree_part(p).coeffs());
    let mut roots = Vec::new();
    if f[0].is_zero() {
        roots.push(Rational::zero());
        f.remove(0);
    }
    if f.len() > 1 {
        roots.extend(nonzero_roots(&f));
    }
    roots.sort();
    roots
}

fn nonzero_roots(f: &[BigInt]) -> Vec<Rational> {
    let df: Vec<BigInt> = f.iter().enumerate().skip(1).map(|(k, c)| c * k).collect();
    let lead = f.last().expect("nonempty");
    // a/b root => a | f0, b | lead, so moduli beyond 2|f0·lead| pin it down.
    let bound: BigInt = f[0].abs() * lead.abs() * 2u32 + 1u32;

    let mut p = START_PRIME;
    let prime = loop {
        let pb = BigInt::from(p);
        if ModP::new(1, p).is_ok() && !(lead % &pb).is_zero() && squarefree_mod(f, &df, p) {
            break p;
        }
        p += 2;
    };
    let pb = BigInt::from(prime);
    let residues: Vec<BigInt> = (0..prime).map(BigInt::from).filter(|x| eval_int(f, x, &pb).is_zero()).collect();

    let rat_f = UniPoly::new(f.iter().map(|c| Rational::from_integer(c.clone())).collect());
    let mut out = Vec::new();
    for r in residues {
        let (mut x, mut m) = (r, pb.clone());
        while &m * &m <= &bound * &bound * 4u32 {
            let m2 = &m * &m;
            let fx = eval_int(f, &x, &m2);
            let Some(d) = inverse_mod(&eval_int(&df, &x, &m2), &m2) else { break };
            x = (&x - fx * d).mod_floor(&m2);
            m = m2;
        }
        if let Some(q) = reconstruct(&x, &m) {
            if rat_f.eval(&q).is_zero() && !out.contains(&q) {
                out.push(q);
            }
        }
    }
    out
}

fn squarefree_mod(f: &[BigInt], df: &[BigInt], p: u64) -> bool {
    let red = |c: &[BigInt]| -> Vec<ModP> { c.iter().map(|n| ModP::from_bigint(n, p)).collect() };
    let g = modp_gcd(red(f), red(df));
    g.len() == 1
}

fn trim(mut a: Vec<ModP>) -> Vec<ModP> {
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
    a
}

pub(crate) fn modp_gcd(a: Vec<ModP>, b: Vec<ModP>) -> Vec<ModP> {
    let (mut a, mut b) = (trim(a), trim(b));
    while !b.is_empty() {
        let inv = b.last().expect("nonzero").inv().expect("nonzero lead");
        while a.len() >= b.len() {
            let c = *a.last().expect("nonempty") * inv;
            let shift = a.len() - b.len();
            for (i, bc) in b.iter().enumerate() {
                a[shift + i] = a[shift + i] - c * *bc;
            }
            a = trim(a);
            if a.is_empty() {
                break;
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
    a
}
