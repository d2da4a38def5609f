//! Jumping lines inside a plane.
//!
//! Lines in `P² = {x* = y* = 0}` are the points `m` of the dual plane: the
//! line has annihilator `span(x*, y*, Σ m_s w_s)` for a fixed complement
//! `w_0, w_1, w_2`. In the basis `x*∧y*, x*∧c, y*∧c` of its 2-forms the
//! order matrix has two constant columns and four linear in `m`, and order
//! `>= q` means all `(6-q)`-minors vanish. Random combinations of those
//! minors, `det(R·N(m)·C)`, are restricted to a random affine chart of the
//! dual plane and handed to the resultant solver.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exmat::ExactMatrix;
use crate::exterior::{full_pair, Covector, MonadData, DIM};
use crate::polykit::{gcd, interpolate, solve_by_combinations, BiPoly, SystemOutcome, UniPoly};
use crate::scalar::Field;

use super::{covector_rank, jumping_order, HmError, LineSpec, PlaneSpec};

const CHART_ATTEMPTS: u64 = 8;
const MAX_COMBINATIONS: usize = 24;
const ENTRY_BOUND: i64 = 3;
const INFINITY_PROBES: usize = 3;

#[derive(Clone, Debug, PartialEq)]
pub struct FoundLine<F> {
    /// Coordinates on the complement basis, first nonzero entry 1.
    pub dual_point: [F; 3],
    pub line: LineSpec<F>,
    pub order: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LocusKind {
    Finite { count_with_multiplicity: usize, distinct: usize },
    PositiveDimensional,
}

#[derive(Clone, Debug, PartialEq)]
pub struct InPlaneLines<F> {
    pub min_order: usize,
    pub complement: [Covector<F>; 3],
    pub locus: LocusKind,
    /// Solutions with coordinates in the base field, exactly verified.
    pub lines: Vec<FoundLine<F>>,
    pub charts_tried: u64,
}

impl<F: Field> InPlaneLines<F> {
    pub fn is_empty(&self) -> bool {
        matches!(self.locus, LocusKind::Finite { count_with_multiplicity: 0, .. })
    }
}

/// First three standard covectors independent of `x*, y*`.
pub fn complement_basis<F: Field>(plane: &PlaneSpec<F>) -> [Covector<F>; 3] {
    let mut chosen: Vec<Covector<F>> = vec![plane.x().clone(), plane.y().clone()];
    for k in 0..DIM {
        let e = Covector::unit(k);
        let mut trial: Vec<&Covector<F>> = chosen.iter().collect();
        trial.push(&e);
        if covector_rank(&trial) == trial.len() {
            chosen.push(e);
        }
    }
    let mut it = chosen.into_iter().skip(2);
    std::array::from_fn(|_| it.next().expect("five independent covectors"))
}

/// The order matrix as an affine function of `m`.
struct OrderPencil<F> {
    constant: ExactMatrix<F>,
    linear: [ExactMatrix<F>; 3],
}

impl<F: Field> OrderPencil<F> {
    fn new(plane: &PlaneSpec<F>, w: &[Covector<F>; 3]) -> Self {
        let monad = MonadData::<F>::new();
        let (x, y) = (plane.x().to_form(), plane.y().to_form());
        let xy = x.wedge(&y).expect("covectors");
        let constant = ExactMatrix::from_fn(DIM, 6, |i, col| if col % 3 == 0 { full_pair(&monad.a[col / 3][i], &xy).expect("pairing") } else { F::zero() });
        let linear = std::array::from_fn(|s| {
            let ws = w[s].to_form();
            let xw = x.wedge(&ws).expect("covectors");
            let yw = y.wedge(&ws).expect("covectors");
            ExactMatrix::from_fn(DIM, 6, |i, col| match col % 3 {
                1 => full_pair(&monad.a[col / 3][i], &xw).expect("pairing"),
                2 => full_pair(&monad.a[col / 3][i], &yw).expect("pairing"),
                _ => F::zero(),
            })
        });
        OrderPencil { constant, linear }
    }

    fn eval(&self, m: &[F; 3]) -> ExactMatrix<F> {
        (0..3).fold(self.constant.clone(), |acc, s| acc.add(&self.linear[s].scale(&m[s])))
    }
}

fn random_int_matrix<F: Field>(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> ExactMatrix<F> {
    ExactMatrix::from_fn(rows, cols, |_, _| F::from_i64(rng.gen_range(-ENTRY_BOUND..=ENTRY_BOUND)))
}

fn chart_point<F: Field>(l: &ExactMatrix<F>, h: [&F; 3]) -> [F; 3] {
    std::array::from_fn(|s| (0..3).fold(F::zero(), |acc, t| acc.add_ref(&l.get(s, t).mul_ref(h[t]))))
}

fn normalize<F: Field>(m: [F; 3]) -> [F; 3] {
    let lead = m.iter().find(|c| !c.is_zero()).expect("nonzero point").clone();
    let inv = lead.inv().expect("nonzero");
    m.map(|c| c.mul_ref(&inv))
}

/// Lines of order at least `min_order` in the plane.
pub fn find_jumping_lines_in_plane<F: Field>(plane: &PlaneSpec<F>, min_order: usize, seed: u64) -> Result<InPlaneLines<F>, HmError> {
    assert!((1..=3).contains(&min_order), "min_order must be 1, 2 or 3");
    let w = complement_basis(plane);
    let pencil = OrderPencil::new(plane, &w);
    let size = 6 - min_order;
    let line_at = |m: &[F; 3]| {
        let c = (0..3).fold(Covector(std::array::from_fn(|_| F::zero())), |acc, s| acc.add(&w[s].scale(&m[s])));
        LineSpec::new([plane.x().clone(), plane.y().clone(), c])
    };

    // A curve of solutions meets every line at infinity, so the cheap screen
    // below is dropped after its first rejection and the solver decides.
    let mut screened = true;
    for attempt in 0..CHART_ATTEMPTS {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9E37_79B9).wrapping_add(attempt));
        let chart = random_int_matrix::<F>(&mut rng, 3, 3);
        if chart.rank() < 3 {
            continue;
        }
        let (zero, one) = (F::zero(), F::one());
        let mut mats: Vec<(ExactMatrix<F>, ExactMatrix<F>)> = Vec::new();
        // A rank-deficient R or C makes the combination vanish identically.
        let draw = |rng: &mut ChaCha8Rng| loop {
            let r = random_int_matrix::<F>(rng, size, DIM);
            let c = random_int_matrix::<F>(rng, 6, size);
            if r.rank() == size && c.rank() == size {
                return (r, c);
            }
        };
        let combo_value = |rc: &(ExactMatrix<F>, ExactMatrix<F>), m: &[F; 3]| {
            let n = pencil.eval(m);
            rc.0.mul(&n).and_then(|t| t.mul(&rc.1)).and_then(|t| t.determinant()).expect("shapes")
        };

        // Cheap rejection of charts whose line at infinity carries a
        // solution, before the expensive solve.
        let corner = chart_point(&chart, [&zero, &one, &zero]);
        if screened && line_at(&corner).ok().and_then(|l| jumping_order(&l).ok()).is_some_and(|o| o >= min_order) {
            screened = false;
            continue;
        }
        let ts: Vec<F> = (0..=size as i64).map(F::from_i64).collect();
        let on_infinity = |rc: &(ExactMatrix<F>, ExactMatrix<F>)| {
            let vals: Vec<F> = ts.iter().map(|t| combo_value(rc, &chart_point(&chart, [&one, t, &zero]))).collect();
            interpolate(&ts, &vals)
        };
        if screened {
            let probe = (0..INFINITY_PROBES).fold(UniPoly::zero(), |acc, _| gcd(&acc, &on_infinity(&draw(&mut rng))));
            if probe.degree().is_none_or(|d| d > 0) {
                screened = false;
                continue;
            }
        }

        let outcome = {
            let mut next = || {
                let rc = draw(&mut rng);
                let g = BiPoly::interpolate_grid(size, size, |u, v| combo_value(&rc, &chart_point(&chart, [u, v, &one])));
                mats.push(rc);
                g
            };
            solve_by_combinations(&mut next, MAX_COMBINATIONS)
        };
        let solution = match outcome {
            SystemOutcome::Degenerate => continue,
            SystemOutcome::PositiveDimensional => {
                return Ok(InPlaneLines { min_order, complement: w, locus: LocusKind::PositiveDimensional, lines: Vec::new(), charts_tried: attempt + 1 })
            }
            SystemOutcome::Finite(s) => s,
        };

        // Solutions on the chart's line at infinity would be missed.
        let at_infinity = mats.iter().fold(UniPoly::zero(), |acc, rc| gcd(&acc, &on_infinity(rc)));
        if at_infinity.degree().is_none_or(|d| d > 0) {
            continue;
        }

        let mut lines = Vec::new();
        for (u, v) in &solution.points {
            let m = normalize(chart_point(&chart, [u, v, &one]));
            let line = line_at(&m)?;
            let order = jumping_order(&line)?;
            if order < min_order {
                return Err(HmError::Invariant(format!("in-plane solution has order {order} < {min_order}")));
            }
            lines.push(FoundLine { dual_point: m, line, order });
        }
        return Ok(InPlaneLines {
            min_order,
            complement: w,
            locus: LocusKind::Finite { count_with_multiplicity: solution.count_with_multiplicity, distinct: solution.distinct_count },
            lines,
            charts_tried: attempt + 1,
        });
    }
    Err(HmError::DegenerateParametrization)
}
