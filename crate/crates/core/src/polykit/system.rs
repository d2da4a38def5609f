//! Common zeros of a family of bivariate polynomials, accessed through
//! random linear combinations of its members.

use crate::scalar::Field;

use super::{gcd, resultant, squarefree_part, BiPoly, UniPoly, Var};

#[derive(Clone, Debug, PartialEq)]
pub struct FiniteSolution<F> {
    /// GCD of the resultants `Res_y(g_k, g_{k+1})`; its roots are the
    /// x-coordinates of the common zeros.
    pub eliminant: UniPoly<F>,
    /// Roots of the eliminant counted with multiplicity.
    pub count_with_multiplicity: usize,
    pub distinct_count: usize,
    /// Common zeros with both coordinates in the base field.
    pub points: Vec<(F, F)>,
    pub combinations_used: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub enum SystemOutcome<F> {
    Finite(FiniteSolution<F>),
    /// All combinations share a component (or vanish identically).
    PositiveDimensional,
    /// Leading coefficients in `y` collide; try another affine chart.
    Degenerate,
}

/// Number of consecutive fresh combinations that must leave the eliminant
/// degree unchanged.
pub const STABLE_ROUNDS: usize = 3;

/// Solves the system whose members' random combinations are produced by
/// `next`, drawing at most `max_combinations`.
pub fn solve_by_combinations<F: Field>(mut next: impl FnMut() -> BiPoly<F>, max_combinations: usize) -> SystemOutcome<F> {
    let g1 = next();
    let g2 = next();
    if g1.is_zero() || g2.is_zero() {
        return SystemOutcome::PositiveDimensional;
    }
    let first = resultant(&g1, &g2, Var::Y);
    if first.identically_zero {
        // A shared component of two random combinations is shared by the
        // whole family unless we were unlucky; confirm once.
        let g3 = next();
        if g3.is_zero() || resultant(&g1, &g3, Var::Y).identically_zero {
            return SystemOutcome::PositiveDimensional;
        }
        return SystemOutcome::Degenerate;
    }
    if first.leading_degenerate {
        return SystemOutcome::Degenerate;
    }
    let mut family = vec![g1, g2];
    let mut elim = first.poly.monic();
    let mut stable = 0;
    // From here the zero set is finite, since `elim` is nonzero. A draw
    // sharing a component with its partner is just unlucky and is skipped.
    // Pairing each draw with the previous one, rather than always with
    // `g1`, keeps a draw singular at a solution from inflating every
    // intersection multiplicity.
    let mut draws = 2;
    while stable < STABLE_ROUNDS && draws < max_combinations {
        draws += 1;
        let g = next();
        if g.is_zero() {
            continue;
        }
        let r = resultant(family.last().expect("nonempty"), &g, Var::Y);
        if r.identically_zero {
            continue;
        }
        let reduced = gcd(&elim, &r.poly);
        if reduced.degree() == elim.degree() {
            stable += 1;
        } else {
            stable = 0;
        }
        elim = reduced;
        family.push(g);
    }

    let mut points = Vec::new();
    for x0 in F::field_roots(&elim) {
        let fiber = family.iter().fold(UniPoly::zero(), |acc, g| gcd(&acc, &g.specialize(Var::X, &x0)));
        if fiber.is_zero() {
            continue;
        }
        for y0 in F::field_roots(&fiber) {
            points.push((x0.clone(), y0));
        }
    }
    let degree = elim.degree().unwrap_or(0);
    SystemOutcome::Finite(FiniteSolution {
        count_with_multiplicity: degree,
        distinct_count: squarefree_part(&elim).degree().unwrap_or(0),
        eliminant: elim,
        points,
        combinations_used: draws,
    })
}
