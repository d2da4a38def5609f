//! Randomized invariants of every module, shared by the `properties` and
//! `acceptance` test targets. Each property runs on a proptest runner with a
//! fixed ChaCha seed, so a given case count always replays the same inputs.

#![allow(dead_code)]

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use hmplanes::exmat::ExactMatrix;
use hmplanes::exterior::{basis, binomial5, contract, decomposable_test, full_pair, plucker_from_covectors, Covector, ExteriorForm, MonadData, Variance, DIM};
use hmplanes::heisenberg::{trivial_summand_dim, GroupElement};
use hmplanes::hmrestrict::{
    build_m, classify_resolution, find_jumping_lines_in_plane, hm_lines, is_jumping_plane, jumping_order, plane_from_i64, random_line, random_plane,
    random_plane_through, LineSpec, PlaneSpec, Resolution, PI, PI_TILDE, RHO, SIGMA,
};
use hmplanes::polykit::{gcd, interp_det, resultant, squarefree_part, BiPoly, BinaryForm, UniPoly, Var};
use hmplanes::respairs::{enumerate_pairs, enumerate_pairs_within, ResolutionPair, SearchBounds};
use hmplanes::scalar::{primitive_fifth_root, rat, EmbedModP, DEFAULT_PRIME};
use hmplanes::strata::{
    abc_conic_planes, abc_coordinates, distinct_incidence_planes, hm_conics, incidence_analysis, pencil_degree, tangent_dimension, Anchor, HmConic, Incidence,
    IncidenceChart, PencilOutcome, PencilSpec, TernaryQuadric,
};
use hmplanes::{Cyclo5, Field, ModP, QMatrix, Rational};
use num_traits::{One, Zero};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Q = Rational;
type C = Cyclo5;

pub const SEED: [u8; 32] = *b"planes-of-p4-under-the-hm-bundle";

pub struct Property {
    pub module: &'static str,
    pub name: &'static str,
    check: fn(&mut TestRunner) -> Result<(), String>,
}

impl Property {
    pub fn run(&self, cases: u32) -> Result<(), String> {
        let config = Config { cases, max_shrink_iters: 32, failure_persistence: None, ..Config::default() };
        (self.check)(&mut TestRunner::new_with_rng(config, TestRng::from_seed(RngAlgorithm::ChaCha, &SEED)))
    }
}

macro_rules! properties {
    ($($module:literal => [$($name:ident),* $(,)?]),* $(,)?) => {
        pub fn all() -> Vec<Property> {
            vec![$($(Property { module: $module, name: stringify!($name), check: $name }),*),*]
        }
    };
}

properties! {
    "scalar" => [rational_field_axioms, cyclo_field_axioms, modp_field_axioms, embedding_is_a_ring_homomorphism, cyclo_canonical_form],
    "exterior" => [graded_anticommutativity, plucker_points_are_decomposable, contractions_are_bilinear, monad_columns_shift_cyclically],
    "exmat" => [rank_invariant_under_permutation_and_scaling, rank_of_transpose, kernel_plus_rank_is_cols, bareiss_matches_cofactor_expansion],
    "polykit" => [interp_det_independent_of_points, gcd_degree_symmetric_and_scale_invariant, resultant_swap_same_roots, squarefree_part_of_distinct_linear_factors],
    "respairs" => [enumeration_stable_under_larger_bounds, pairs_reverify_and_couples, h0_matches_monomial_count],
    "hmrestrict" => [
        rank_independent_of_covector_basis,
        rank_between_12_and_15,
        jumping_iff_rank_12,
        h0_twist1_matches_classified_pair,
        heisenberg_equivariance,
        jumping_planes_contain_jumping_lines,
    ],
    "strata" => [tangent_dimension_independent_of_anchor, pencil_certificate_divides_minors, l00_chart_jumping_iff_on_conic, hm_conics_pairwise_distinct],
    "heisenberg" => [heisenberg_law_and_commutator, orbit_and_stabilizer_of_l00, invariants_vanish_off_multiples_of_5],
}

fn fail(msg: impl Into<String>) -> TestCaseError {
    TestCaseError::fail(msg.into())
}

fn done<T: std::fmt::Debug>(r: Result<(), proptest::test_runner::TestError<T>>) -> Result<(), String> {
    r.map_err(|e| e.to_string())
}

// ---------------------------------------------------------------------------
// Samplers

fn rational() -> impl Strategy<Value = Q> {
    (-60i64..=60, 1i64..=12).prop_map(|(n, d)| rat(n, d))
}

fn cyclo() -> impl Strategy<Value = C> {
    prop::array::uniform4(rational()).prop_map(C::new)
}

fn modp() -> impl Strategy<Value = ModP> {
    any::<u64>().prop_map(|v| ModP::new((v % DEFAULT_PRIME) as i64, DEFAULT_PRIME).expect("prime modulus"))
}

fn int_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, bound: i64) -> QMatrix {
    ExactMatrix::from_fn(rows, cols, |_, _| Q::from_i64(rng.gen_range(-bound..=bound)))
}

/// A matrix of rank at most `inner`, as a product; small entries keep the
/// rank drop generic rather than accidental.
fn low_rank_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, inner: usize) -> QMatrix {
    int_matrix(rng, rows, inner, 3).mul(&int_matrix(rng, inner, cols, 3)).expect("shapes")
}

fn random_uni(rng: &mut ChaCha8Rng, degree: usize) -> UniPoly<Q> {
    loop {
        let p = UniPoly::new((0..=degree).map(|_| Q::from_i64(rng.gen_range(-6..=6))).collect());
        if p.degree() == Some(degree) {
            return p;
        }
    }
}

pub fn l00() -> LineSpec<Q> {
    LineSpec::from_i64([[1, 0, 0, 0, 0], [0, 0, 1, 1, 0], [0, 1, 0, 0, 1]]).expect("independent")
}

/// `{z0 = z1 = z2 = 0}`, a line of order 2.
pub fn coordinate_line() -> LineSpec<Q> {
    LineSpec::from_i64([[1, 0, 0, 0, 0], [0, 1, 0, 0, 0], [0, 0, 1, 0, 0]]).expect("independent")
}

pub struct L00Chart {
    pub chart: IncidenceChart<Q>,
    pub abc: QMatrix,
    pub conic: TernaryQuadric<Q>,
}

pub fn l00_chart() -> &'static L00Chart {
    static CHART: OnceLock<L00Chart> = OnceLock::new();
    CHART.get_or_init(|| {
        let report = incidence_analysis(&l00(), 0);
        let Incidence::Conic { conic } = report.classification else { panic!("L00 incidence is not a conic") };
        let abc = abc_coordinates(&report.chart).expect("abc coordinates on the L00 chart");
        L00Chart { chart: report.chart, abc, conic }
    })
}

/// `e_j ↦ e_{j+b}` on covectors: the generator σ^b, which keeps planes
/// rational.
fn shift_covector(c: &Covector<Q>, b: usize) -> Covector<Q> {
    Covector(std::array::from_fn(|j| c.0[(j + DIM - b) % DIM].clone()))
}

pub fn shift_plane(p: &PlaneSpec<Q>, b: usize) -> PlaneSpec<Q> {
    PlaneSpec::from_covectors(shift_covector(p.x(), b), shift_covector(p.y(), b)).expect("permutation")
}

fn shift_line(l: &LineSpec<Q>, b: usize) -> LineSpec<Q> {
    let c = l.covectors();
    LineSpec::new(std::array::from_fn(|k| shift_covector(&c[k], b))).expect("permutation")
}

/// Planes drawn from every rank stratum, not only the generic one.
#[derive(Clone, Debug)]
pub enum PlaneSample {
    Generic(u64),
    ThroughL00(u64),
    OnL00Conic(i64, i64),
    ThroughOrder2Line(u64),
    Marked(usize),
}

impl PlaneSample {
    pub fn plane(&self) -> PlaneSpec<Q> {
        match *self {
            PlaneSample::Generic(s) => random_plane(&mut ChaCha8Rng::seed_from_u64(s), 5),
            PlaneSample::ThroughL00(s) => random_plane_through(&l00(), &mut ChaCha8Rng::seed_from_u64(s), 5),
            PlaneSample::OnL00Conic(u, v) => {
                let c = l00_chart();
                abc_conic_planes(&c.chart, &c.abc, &[(u, v)]).expect("conic plane").remove(0)
            }
            PlaneSample::ThroughOrder2Line(s) => random_plane_through(&coordinate_line(), &mut ChaCha8Rng::seed_from_u64(s), 5),
            PlaneSample::Marked(k) => plane_from_i64([PI, RHO, SIGMA, PI_TILDE][k]),
        }
    }
}

fn conic_param() -> impl Strategy<Value = (i64, i64)> {
    (-9i64..=9, -9i64..=9).prop_filter("nonzero", |&(u, v)| (u, v) != (0, 0))
}

pub fn plane_sample() -> impl Strategy<Value = (PlaneSample, usize)> {
    let kind = prop_oneof![
        any::<u64>().prop_map(PlaneSample::Generic),
        any::<u64>().prop_map(PlaneSample::ThroughL00),
        conic_param().prop_map(|(u, v)| PlaneSample::OnL00Conic(u, v)),
        any::<u64>().prop_map(PlaneSample::ThroughOrder2Line),
        (0usize..4).prop_map(PlaneSample::Marked),
    ];
    (kind, 0usize..5)
}

fn sampled_plane(s: &(PlaneSample, usize)) -> PlaneSpec<Q> {
    shift_plane(&s.0.plane(), s.1)
}

#[derive(Clone, Debug)]
pub enum LineSample {
    Generic(u64),
    L00,
    Order2,
}

fn line_sample() -> impl Strategy<Value = (LineSample, usize)> {
    (prop_oneof![any::<u64>().prop_map(LineSample::Generic), Just(LineSample::L00), Just(LineSample::Order2)], 0usize..5)
}

fn sampled_line(s: &(LineSample, usize)) -> LineSpec<Q> {
    let l = match s.0 {
        LineSample::Generic(seed) => random_line(&mut ChaCha8Rng::seed_from_u64(seed), 5),
        LineSample::L00 => l00(),
        LineSample::Order2 => coordinate_line(),
    };
    shift_line(&l, s.1)
}

fn group_element() -> impl Strategy<Value = GroupElement> {
    (0i64..5, 0i64..5, 0i64..5).prop_map(|(a, b, c)| GroupElement::new(a, b, c))
}

// ---------------------------------------------------------------------------
// scalar

fn check_field_axioms<F: Field>(a: F, b: F, c: F) -> Result<(), TestCaseError> {
    prop_assert_eq!((a.clone() + b.clone()) + c.clone(), a.clone() + (b.clone() + c.clone()));
    prop_assert_eq!((a.clone() * b.clone()) * c.clone(), a.clone() * (b.clone() * c.clone()));
    prop_assert_eq!(a.clone() * b.clone(), b.clone() * a.clone());
    prop_assert_eq!(a.clone() * (b.clone() + c.clone()), a.clone() * b.clone() + a.clone() * c.clone());
    prop_assert_eq!(a.clone() + F::zero(), a.clone());
    prop_assert_eq!(a.clone() * F::one(), a.clone());
    match a.inv() {
        Some(ai) => prop_assert!((a * ai).is_one()),
        None => prop_assert!(a.is_zero()),
    }
    Ok(())
}

fn rational_field_axioms(r: &mut TestRunner) -> Result<(), String> {
    done(r.run(&(rational(), rational(), rational()), |(a, b, c)| check_field_axioms(a, b, c)))
}

fn cyclo_field_axioms(r: &mut TestRunner) -> Result<(), String> {
    done(r.run(&(cyclo(), cyclo(), cyclo()), |(a, b, c)| check_field_axioms(a, b, c)))
}

fn modp_field_axioms(r: &mut TestRunner) -> Result<(), String> {
    done(r.run(&(modp(), modp(), modp()), |(a, b, c)| {
        prop_assert_eq!((a + b) + c, a + (b + c));
        prop_assert_eq!((a * b) * c, a * (b * c));
        prop_assert_eq!(a * b, b * a);
        prop_assert_eq!(a * (b + c), a * b + a * c);
        prop_assert_eq!((a - b) + b, a);
        prop_assert!((a + -a).is_zero());
        match a.inv() {
            Ok(ai) => prop_assert_eq!((a * ai).residue(), 1),
            Err(_) => prop_assert!(a.is_zero()),
        }
        Ok(())
    }))
}

fn embedding_is_a_ring_homomorphism(r: &mut TestRunner) -> Result<(), String> {
    let zeta = primitive_fifth_root(DEFAULT_PRIME).expect("prime is 1 mod 5");
    done(r.run(&(cyclo(), cyclo()), |(x, y)| {
        let e = |v: &C| v.embed(&zeta).map_err(|err| fail(err.to_string()));
        prop_assert_eq!(e(&(x.clone() * y.clone()))?, e(&x)? * e(&y)?);
        prop_assert_eq!(e(&(x.clone() + y.clone()))?, e(&x)? + e(&y)?);
        prop_assert_eq!(e(&C::one())?.residue(), 1);
        let qx = x.coeffs()[0].clone();
        prop_assert_eq!(qx.embed(&zeta).map_err(|err| fail(err.to_string()))?, e(&C::from_rational(&qx))?);
        Ok(())
    }))
}

fn cyclo_canonical_form(r: &mut TestRunner) -> Result<(), String> {
    done(r.run(&(cyclo(), cyclo()), |(x, y)| {
        prop_assert!((x.clone() - x.clone()).is_zero());
        prop_assert_eq!(x.clone() - x.clone(), C::zero());
        prop_assert_eq!((x.clone() + y.clone()) - y.clone(), x.clone());
        // 1 + z + z^2 + z^3 + z^4 = 0 must reduce to the zero representative.
        let cyc = (0..5).fold(C::zero(), |acc, k| acc + C::zeta_pow(k));
        prop_assert_eq!(x.clone() * cyc, C::zero());
        Ok(())
    }))
}

// ---------------------------------------------------------------------------
// exterior

fn random_form(rng: &mut ChaCha8Rng, degree: usize, variance: Variance) -> ExteriorForm<Q> {
    let coeffs = (0..binomial5(degree)).map(|_| Q::from_i64(rng.gen_range(-4..=4))).collect();
    ExteriorForm::new(degree, variance, coeffs).expect("length matches")
}

fn graded_anticommutativity(r: &mut TestRunner) -> Result<(), String> {
    let degrees = (0usize..=5).prop_flat_map(|a| (Just(a), 0..=5 - a));
    done(r.run(&(degrees, any::<u64>()), |((da, db), seed)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_form(&mut rng, da, Variance::Covectors);
        let b = random_form(&mut rng, db, Variance::Covectors);
        let sign = if (da * db) % 2 == 0 { Q::one() } else { -Q::one() };
        prop_assert_eq!(a.wedge(&b).unwrap(), b.wedge(&a).unwrap().scale(&sign));
        Ok(())
    }))
}

fn plucker_points_are_decomposable(r: &mut TestRunner) -> Result<(), String> {
    done(r.run(&any::<u64>(), |seed| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut cov = || Covector::<Q>(std::array::from_fn(|_| Q::from_i64(rng.gen_range(-3..=3))));
        let (x, y) = (cov(), cov());
        let independent = QMatrix::from_fn(2, DIM, |i, j| [&x, &y][i].0[j].clone()).rank() == 2;
        match plucker_from_covectors(&x, &y) {
            Ok(p) => {
                prop_assert!(independent);
                prop_assert!(decomposable_test(&p.to_form()).0);
                let (u, v) = p.covectors().map_err(|e| fail(e.to_string()))?;
                let back = plucker_from_covectors(&u, &v).map_err(|e| fail(e.to_string()))?;
                prop_assert_eq!(QMatrix::from_fn(2, 10, |i, k| [&p, &back][i].0[k].clone()).rank(), 1);
            }
            Err(_) => prop_assert!(!independent),
        }
        Ok(())
    }))
}

fn contractions_are_bilinear(r: &mut TestRunner) -> Result<(), String> {
    done(r.run(&(any::<u64>(), rational(), rational()), |(seed, l, m)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a1, a2) = (random_form(&mut rng, 2, Variance::Vectors), random_form(&mut rng, 2, Variance::Vectors));
        let (f1, f2) = (random_form(&mut rng, 3, Variance::Covectors), random_form(&mut rng, 3, Variance::Covectors));
        let (p1, p2) = (random_form(&mut rng, 2, Variance::Covectors), random_form(&mut rng, 2, Variance::Covectors));
        let comb = |x: &ExteriorForm<Q>, y: &ExteriorForm<Q>| x.scale(&l).add(&y.scale(&m));
        let ccomb = |x: Covector<Q>, y: Covector<Q>| x.scale(&l).add(&y.scale(&m));
        let ct = |a: &ExteriorForm<Q>, f: &ExteriorForm<Q>| contract(a, f).unwrap();
        prop_assert_eq!(ct(&comb(&a1, &a2), &f1), ccomb(ct(&a1, &f1), ct(&a2, &f1)));
        prop_assert_eq!(ct(&a1, &comb(&f1, &f2)), ccomb(ct(&a1, &f1), ct(&a1, &f2)));
        let fp = |a: &ExteriorForm<Q>, p: &ExteriorForm<Q>| full_pair(a, p).unwrap();
        prop_assert_eq!(fp(&comb(&a1, &a2), &p1), l.clone() * fp(&a1, &p1) + m.clone() * fp(&a2, &p1));
        prop_assert_eq!(fp(&a1, &comb(&p1, &p2)), l.clone() * fp(&a1, &p1) + m.clone() * fp(&a1, &p2));
        // The contracted covector evaluated at v is φ(a ∧ v).
        let v: [Q; DIM] = std::array::from_fn(|_| Q::from_i64(rng.gen_range(-4..=4)));
        let lhs = ct(&a1, &f1).0.iter().zip(&v).fold(Q::zero(), |acc, (c, x)| acc + c * x);
        let av = a1.wedge(&ExteriorForm::from_vector(&v, Variance::Vectors)).unwrap();
        prop_assert_eq!(lhs, f1.full_pair(&av).unwrap());
        Ok(())
    }))
}

fn shift_two_vector(f: &ExteriorForm<Q>, k: usize) -> ExteriorForm<Q> {
    basis(2).iter().zip(f.coeffs()).fold(ExteriorForm::zero(2, Variance::Vectors), |acc, (ij, c)| {
        acc.add(&ExteriorForm::basis_element(&[ij[0] + k, ij[1] + k], Variance::Vectors).scale(c))
    })
}

fn monad_columns_shift_cyclically(r: &mut TestRunner) -> Result<(), String> {
    let monad = MonadData::<Q>::new();
    done(r.run(&(0usize..2, 0usize..DIM, 0usize..DIM), |(row, i, k)| {
        let a = &monad.a[row][i];
        prop_assert_eq!(a.degree(), 2);
        prop_assert!(decomposable_test(a).0);
        prop_assert_eq!(&shift_two_vector(a, k), &monad.a[row][(i + k) % DIM]);
        Ok(())
    }))
}

// ---------------------------------------------------------------------------
// exmat

fn matrix_sample() -> impl Strategy<Value = (usize, usize, usize, u64)> {
    (1usize..=6, 1usize..=7, 1usize..=6, any::<u64>())
}

fn rank_invariant_under_permutation_and_scaling(r: &mut TestRunner) -> Result<(), String> {
    done(r.run(&(matrix_sample(), rational()), |((rows, cols, inner, seed), s)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = low_rank_matrix(&mut rng, rows, cols, inner);
        let mut rp: Vec<usize> = (0..rows).collect();
        let mut cp: Vec<usize> = (0..cols).collect();
        rp.shuffle(&mut rng);
        cp.shuffle(&mut rng);
        let permuted = m.submatrix(&rp, &cp).unwrap();
        prop_assert_eq!(permuted.rank(), m.rank());
        let s = if s.is_zero() { Q::one() } else { s };
        let target = rng.gen_range(0..rows);
        let scaled = ExactMatrix::from_fn(rows, cols, |i, j| if i == target { m.get(i, j) * &s } else { m.get(i, j).clone() });
        prop_assert_eq!(scaled.rank(), m.rank());
        Ok(())
    }))
}

fn rank_of_transpose(r: &mut TestRunner) -> Result<(), String> {
    done(r.run(&matrix_sample(), |(rows, cols, inner, seed)| {
        let m = low_rank_matrix(&mut ChaCha8Rng::seed_from_u64(seed), rows, cols, inner);
        prop_assert_eq!(m.rank(), m.transpose().rank());
        prop_assert!(m.rank() <= inner.min(rows).min(cols));
        Ok(())
    }))
}

fn kernel_plus_rank_is_cols(r: &mut TestRunner) -> Result<(), String> {
    done(r.run(&matrix_sample(), |(rows, cols, inner, seed)| {
        let m = low_rank_matrix(&mut ChaCha8Rng::seed_from_u64(seed), rows, cols, inner);
        let kernel = m.kernel_basis();
        prop_assert_eq!(kernel.len() + m.rank(), cols);
        for v in &kernel {
            prop_assert!(m.mul_vec(v).iter().all(Zero::is_zero));
        }
        Ok(())
    }))
}

pub fn cofactor_det(m: &QMatrix) -> Q {
    let n = m.rows();
    if n == 0 {
        return Q::one();
    }
    (0..n).fold(Q::zero(), |acc, j| {
        let rows: Vec<usize> = (1..n).collect();
        let cols: Vec<usize> = (0..n).filter(|&c| c != j).collect();
        let term = m.get(0, j) * cofactor_det(&m.submatrix(&rows, &cols).unwrap());
        if j % 2 == 0 {
            acc + term
        } else {
            acc - term
        }
    })
}

fn bareiss_matches_cofactor_expansion(r: &mut TestRunner) -> Result<(), String> {
    done(r.run(&(1usize..=5, any::<u64>(), any::<bool>()), |(n, seed, fractions)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m =
            ExactMatrix::from_fn(n, n, |_, _| if fractions { rat(rng.gen_range(-9..=9), rng.gen_range(1..=7)) } else { Q::from_i64(rng.gen_range(-2..=2)) });
        prop_assert_eq!(m.determinant().unwrap(), cofactor_det(&m));
        Ok(())
    }))
}

// ---------------------------------------------------------------------------
// polykit

fn interp_det_independent_of_points(r: &mut TestRunner) -> Result<(), String> {
    done(r.run(&(1usize..=5, any::<u64>(), -30i64..=30, -30i64..=30), |(n, seed, o1, o2)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, b) = (int_matrix(&mut rng, n, n, 3), int_matrix(&mut rng, n, n, 3));
        let f = interp_det(&a, &b, o1);
        prop_assert_eq!(&f, &interp_det(&a, &b, o2));
        // Spot value: the form at (s, t) = (1, t0) is det(A + t0 B).
        let t0 = Q::from_i64(rng.gen_range(-40..=40));
        prop_assert_eq!(f.eval(&Q::one(), &t0), a.add(&b.scale(&t0)).determinant().unwrap());
        Ok(())
    }))
}

fn gcd_degree_symmetric_and_scale_invariant(r: &mut TestRunner) -> Result<(), String> {
    done(r.run(&(0usize..=3, 1usize..=4, 1usize..=4, any::<u64>(), rational(), rational()), |(dh, df, dg, seed, l, m)| {
        prop_assume!(!l.is_zero() && !m.is_zero());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = random_uni(&mut rng, dh);
        let f = h.mul(&random_uni(&mut rng, df));
        let g = h.mul(&random_uni(&mut rng, dg));
        let d = gcd(&f, &g).degree();
        prop_assert!(d >= Some(dh));
        prop_assert_eq!(gcd(&g, &f).degree(), d);
        prop_assert_eq!(gcd(&f.scale(&l), &g.scale(&m)).degree(), d);
        prop_assert!(gcd(&f, &g).divides(&f) && gcd(&f, &g).divides(&g));
        Ok(())
    }))
}

fn random_bipoly(rng: &mut ChaCha8Rng) -> BiPoly<Q> {
    let (dx, dy) = (rng.gen_range(0..=2), rng.gen_range(0..=2));
    BiPoly::from_terms((0..=dx).flat_map(|i| (0..=dy).map(move |j| (i, j))).map(|ij| (ij, Q::from_i64(rng.gen_range(-3..=3)))).collect::<Vec<_>>())
}

fn resultant_swap_same_roots(r: &mut TestRunner) -> Result<(), String> {
    done(r.run(&(any::<u64>(), any::<bool>()), |(seed, eliminate_x)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (f, g) = (random_bipoly(&mut rng), random_bipoly(&mut rng));
        prop_assume!(!f.is_zero() && !g.is_zero());
        let var = if eliminate_x { Var::X } else { Var::Y };
        let (rfg, rgf) = (resultant(&f, &g, var), resultant(&g, &f, var));
        prop_assert_eq!(rfg.identically_zero, rgf.identically_zero);
        prop_assert!(rfg.poly == rgf.poly || rfg.poly == rgf.poly.scale(&-Q::one()));
        if !rfg.poly.is_zero() {
            prop_assert_eq!(rfg.poly.monic(), rgf.poly.monic());
        }
        Ok(())
    }))
}

fn squarefree_part_of_distinct_linear_factors(r: &mut TestRunner) -> Result<(), String> {
    let roots = prop::collection::btree_set(-40i64..=40, 1..=6);
    done(r.run(&(roots, rational(), 1usize..=3), |(roots, lead, power)| {
        prop_assume!(!lead.is_zero());
        let f = roots.iter().fold(UniPoly::constant(lead), |acc, &x| acc.mul(&UniPoly::linear_root(Q::from_i64(x))));
        prop_assert_eq!(squarefree_part(&f), f.monic());
        prop_assert_eq!(squarefree_part(&f.pow(power)), f.monic());
        Ok(())
    }))
}

// ---------------------------------------------------------------------------
// respairs

fn enumeration_stable_under_larger_bounds(r: &mut TestRunner) -> Result<(), String> {
    type Bounds = (usize, i64, i64);
    static CACHE: OnceLock<Mutex<HashMap<Bounds, Vec<ResolutionPair>>>> = OnceLock::new();
    let base = enumerate_pairs();
    if base.len() != 6 {
        return Err(format!("expected 6 pairs, found {}", base.len()));
    }
    done(r.run(&(10usize..=12, 6i64..=8, 5i64..=7), |(k_max, a_max, b_max)| {
        let found = CACHE
            .get_or_init(Default::default)
            .lock()
            .unwrap()
            .entry((k_max, a_max, b_max))
            .or_insert_with(|| enumerate_pairs_within(SearchBounds { k_max, a_max, b_max }))
            .clone();
        prop_assert_eq!(&found, &base);
        Ok(())
    }))
}

/// The couples of pairs sharing a cohomology table.
pub const COUPLES: [[&str; 2]; 2] = [["(4)(1,2,2)", "(3,4)(1,2,2,3)"], ["(5)(0,3,3)", "(4,5)(0,3,3,4)"]];

fn pairs_reverify_and_couples(r: &mut TestRunner) -> Result<(), String> {
    let pairs = enumerate_pairs();
    done(r.run(&(0..pairs.len(), 0..pairs.len(), 0i64..=8), |(i, j, t_max)| {
        let (p, q) = (&pairs[i], &pairs[j]);
        prop_assert!(p.conditions().iter().all(|&c| c));
        prop_assert!(p.is_admissible());
        let (ps, qs) = (p.to_string(), q.to_string());
        let coupled = i == j || COUPLES.iter().any(|c| c.contains(&ps.as_str()) && c.contains(&qs.as_str()));
        prop_assert_eq!(p.cohomology_table(t_max.max(3)) == q.cohomology_table(t_max.max(3)), coupled, "{} vs {}", ps, qs);
        Ok(())
    }))
}

type Mono = (usize, usize, usize);

fn monomials(d: i64) -> Vec<Mono> {
    if d < 0 {
        return Vec::new();
    }
    let d = d as usize;
    (0..=d).flat_map(|i| (0..=d - i).map(move |j| (i, j, d - i - j))).collect()
}

/// `dim coker φ_t` for a random presentation `φ: ⊕O(-a) → ⊕O(-b)` on P²,
/// counted on monomial bases; the wide coefficient range makes `φ`
/// generic with overwhelming probability.
pub fn cokernel_dim(p: &ResolutionPair, t: i64, rng: &mut ChaCha8Rng) -> (usize, bool) {
    let form = |rng: &mut ChaCha8Rng, d: i64| -> HashMap<Mono, i64> {
        if d <= 0 {
            return HashMap::new();
        }
        monomials(d).into_iter().map(|m| (m, rng.gen_range(-1000..=1000))).collect()
    };
    let phi: Vec<Vec<HashMap<Mono, i64>>> = p.b.iter().map(|b| p.a.iter().map(|a| form(rng, a - b)).collect()).collect();
    let rows: Vec<(usize, Mono)> = p.b.iter().enumerate().flat_map(|(j, b)| monomials(t - b).into_iter().map(move |m| (j, m))).collect();
    let cols: Vec<(usize, Mono)> = p.a.iter().enumerate().flat_map(|(i, a)| monomials(t - a).into_iter().map(move |m| (i, m))).collect();
    let index: HashMap<(usize, Mono), usize> = rows.iter().cloned().enumerate().map(|(k, r)| (r, k)).collect();
    let mut m = QMatrix::zeros(rows.len(), cols.len());
    for (c, &(i, src)) in cols.iter().enumerate() {
        for (j, row) in phi.iter().enumerate() {
            for (&(x, y, z), &coef) in &row[i] {
                let r = index[&(j, (x + src.0, y + src.1, z + src.2))];
                let v = m.get(r, c).clone() + Q::from_i64(coef);
                m.set(r, c, v);
            }
        }
    }
    let rank = m.rank();
    (rows.len() - rank, rank == cols.len())
}

fn h0_matches_monomial_count(r: &mut TestRunner) -> Result<(), String> {
    let pairs = enumerate_pairs();
    done(r.run(&(0..pairs.len(), 0i64..=3, any::<u64>()), |(i, t, seed)| {
        let p = &pairs[i];
        prop_assert!(p.h0(t) >= 0);
        let (coker, injective) = cokernel_dim(p, t, &mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert!(injective, "{} not injective on sections at t={}", p, t);
        prop_assert_eq!(coker as i64, p.h0(t), "{} at t={}", p, t);
        Ok(())
    }))
}

// ---------------------------------------------------------------------------
// hmrestrict

fn rank_independent_of_covector_basis(r: &mut TestRunner) -> Result<(), String> {
    let change = prop::array::uniform4(-5i64..=5).prop_filter("invertible", |[a, b, c, d]| a * d - b * c != 0);
    done(r.run(&(plane_sample(), change), |(s, [a, b, c, d])| {
        let p = sampled_plane(&s);
        let (x, y) = (p.x(), p.y());
        let k = Q::from_i64;
        let q = PlaneSpec::from_covectors(x.scale(&k(a)).add(&y.scale(&k(b))), x.scale(&k(c)).add(&y.scale(&k(d)))).map_err(|e| fail(e.to_string()))?;
        prop_assert!(q.same_plane(&p));
        prop_assert_eq!(build_m(&q).rank(), build_m(&p).rank());
        Ok(())
    }))
}

fn rank_between_12_and_15(r: &mut TestRunner) -> Result<(), String> {
    done(r.run(&plane_sample(), |s| {
        let rank = build_m(&sampled_plane(&s)).rank();
        prop_assert!((12..=15).contains(&rank), "rank {}", rank);
        Ok(())
    }))
}

fn jumping_iff_rank_12(r: &mut TestRunner) -> Result<(), String> {
    done(r.run(&plane_sample(), |s| {
        let p = sampled_plane(&s);
        prop_assert_eq!(is_jumping_plane(&p), build_m(&p).rank() == 12);
        Ok(())
    }))
}

fn h0_twist1_matches_classified_pair(r: &mut TestRunner) -> Result<(), String> {
    done(r.run(&(plane_sample(), any::<u64>()), |(s, seed)| {
        let report = classify_resolution(&sampled_plane(&s), seed).map_err(|e| fail(e.to_string()))?;
        let h0 = 15 - report.rank as i64;
        prop_assert!((0..=3).contains(&h0));
        prop_assert!(report.candidates.iter().all(|c| c.h0(1) == h0));
        match &report.resolution {
            Resolution::Resolved(pair) => prop_assert_eq!(pair.h0(1), h0),
            Resolution::Unresolved(why) => return Err(fail(format!("unresolved: {why}"))),
        }
        Ok(())
    }))
}

fn heisenberg_equivariance(r: &mut TestRunner) -> Result<(), String> {
    done(r.run(&(group_element(), plane_sample(), line_sample()), |(g, ps, ls)| {
        let p = sampled_plane(&ps);
        let gp = hmplanes::heisenberg::act_on_plane_any(&g, &p);
        prop_assert_eq!(build_m(&gp).rank(), build_m(&p).rank());
        prop_assert_eq!(is_jumping_plane(&gp), is_jumping_plane(&p));
        let l = sampled_line(&ls);
        let gl = g.act_on_line(&l.map(Field::to_cyclo5));
        prop_assert_eq!(jumping_order(&gl).ok(), jumping_order(&l).ok());
        Ok(())
    }))
}

fn jumping_planes_contain_jumping_lines(r: &mut TestRunner) -> Result<(), String> {
    let kind = prop_oneof![conic_param().prop_map(|(u, v)| PlaneSample::OnL00Conic(u, v)), Just(PlaneSample::Marked(0))];
    done(r.run(&((kind, 0usize..5), any::<u64>()), |(s, seed)| {
        let p = sampled_plane(&s);
        prop_assert_eq!(build_m(&p).rank(), 12);
        let found = find_jumping_lines_in_plane(&p, 1, seed).map_err(|e| fail(e.to_string()))?;
        prop_assert!(!found.is_empty());
        Ok(())
    }))
}

// ---------------------------------------------------------------------------
// strata

/// `(plane, rank, tangent dimension)` at the three reference points.
pub fn tangent_points() -> [(PlaneSpec<Q>, usize, usize); 3] {
    [(plane_from_i64(PI), 12, 2), (plane_from_i64(RHO), 13, 2), (plane_from_i64(SIGMA), 14, 5)]
}

fn tangent_dimension_independent_of_anchor(r: &mut TestRunner) -> Result<(), String> {
    done(r.run(&(0usize..3, 0usize..5, any::<u64>()), |(k, b, seed)| {
        let (plane, rank, dim) = &tangent_points()[k];
        let plane = shift_plane(plane, b);
        let pivot = tangent_dimension(&plane, *rank, Anchor::Pivot).map_err(|e| fail(e.to_string()))?;
        let shuffled = tangent_dimension(&plane, *rank, Anchor::Shuffled(seed)).map_err(|e| fail(e.to_string()))?;
        prop_assert_eq!(pivot.dimension, *dim);
        prop_assert_eq!(shuffled.dimension, *dim);
        Ok(())
    }))
}

pub struct CertifiedPencil {
    pub pencil: PencilSpec<Q>,
    pub certificate: BinaryForm<Q>,
}

/// The first five certified pencils from seeded draws.
pub fn certified_pencils() -> &'static [CertifiedPencil] {
    static PENCILS: OnceLock<Vec<CertifiedPencil>> = OnceLock::new();
    PENCILS.get_or_init(|| {
        let mut out = Vec::new();
        for seed in 0.. {
            if out.len() == 5 {
                break;
            }
            let pencil = PencilSpec::random(&mut ChaCha8Rng::seed_from_u64(seed), 5);
            let report = pencil_degree(&pencil, seed).expect("pencil report");
            if let (PencilOutcome::Certified { .. }, Some(certificate)) = (report.outcome, report.certificate) {
                out.push(CertifiedPencil { pencil, certificate });
            }
        }
        out
    })
}

/// One 15×15 minor of `M(s, t)` per trial, on the pivots of a shuffled
/// specialization, so the minor is nonzero.
fn pencil_certificate_divides_minors(r: &mut TestRunner) -> Result<(), String> {
    let pencils = certified_pencils();
    let matrices: Vec<(QMatrix, QMatrix)> = pencils.iter().map(|c| c.pencil.matrices()).collect();
    done(r.run(&(0..pencils.len(), -50i64..=50, any::<u64>()), |(k, t0, seed)| {
        let (a, b) = &matrices[k];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut rp: Vec<usize> = (0..a.rows()).collect();
        let mut cp: Vec<usize> = (0..a.cols()).collect();
        rp.shuffle(&mut rng);
        cp.shuffle(&mut rng);
        let at = a.add(&b.scale(&Q::from_i64(t0))).submatrix(&rp, &cp).unwrap();
        let profile = at.rank_profile();
        prop_assume!(profile.rank == 15);
        let rows: Vec<usize> = profile.rows.iter().map(|&i| rp[i]).collect();
        let cols: Vec<usize> = profile.cols.iter().map(|&j| cp[j]).collect();
        let minor = interp_det(&a.submatrix(&rows, &cols).unwrap(), &b.submatrix(&rows, &cols).unwrap(), 0);
        prop_assert!(!minor.is_zero());
        prop_assert!(pencils[k].certificate.divides(&minor));
        Ok(())
    }))
}

fn l00_chart_jumping_iff_on_conic(r: &mut TestRunner) -> Result<(), String> {
    let c = l00_chart();
    let point = prop_oneof![
        prop::array::uniform3(-6i64..=6).prop_filter("nonzero", |m| m.iter().any(|&x| x != 0)).prop_map(|m| m.map(Q::from_i64)),
        conic_param().prop_map(|(u, v)| {
            let c = l00_chart();
            let abc = [u * u, v * v, u * v].map(Q::from_i64);
            let m = c.abc.inverse().unwrap().mul_vec(&abc);
            std::array::from_fn(|s| m[s].clone())
        }),
    ];
    done(r.run(&point, |m: [Q; 3]| {
        let plane = c.chart.plane(&m).map_err(|e| fail(e.to_string()))?;
        prop_assert_eq!(is_jumping_plane(&plane), c.conic.eval(&m).is_zero());
        Ok(())
    }))
}

pub fn cached_hm_conics() -> &'static [HmConic] {
    static CONICS: OnceLock<Vec<HmConic>> = OnceLock::new();
    CONICS.get_or_init(|| hm_conics().expect("25 conics"))
}

fn hm_conics_pairwise_distinct(r: &mut TestRunner) -> Result<(), String> {
    let conics = cached_hm_conics();
    if conics.len() != 25 {
        return Err(format!("{} conics", conics.len()));
    }
    done(r.run(&(0usize..25, 0usize..25), |(i, j)| {
        prop_assume!(i != j);
        prop_assert!(distinct_incidence_planes(&conics[i].report.chart, &conics[j].report.chart));
        Ok(())
    }))
}

// ---------------------------------------------------------------------------
// heisenberg

fn heisenberg_law_and_commutator(r: &mut TestRunner) -> Result<(), String> {
    done(r.run(&(group_element(), group_element()), |(g, h)| {
        let (mg, mh) = (g.matrix(), h.matrix());
        prop_assert_eq!(mg.mul(&mh).unwrap(), g.compose(&h).matrix());
        let comm = g.compose(&h).compose(&g.inverse()).compose(&h.inverse());
        prop_assert!(comm.is_central());
        let prod = mg.mul(&mh).and_then(|x| x.mul(&g.inverse().matrix())).and_then(|x| x.mul(&h.inverse().matrix())).unwrap();
        prop_assert_eq!(prod, ExactMatrix::identity(DIM).scale(&C::zeta_pow(comm.c as i64)));
        Ok(())
    }))
}

fn orbit_and_stabilizer_of_l00(r: &mut TestRunner) -> Result<(), String> {
    let lines = hm_lines();
    let base = &lines[0];
    done(r.run(&group_element(), |g| {
        let image = g.act_on_line(base);
        prop_assert_eq!(lines.iter().filter(|l| l.same_line(&image)).count(), 1);
        prop_assert_eq!(image.same_line(base), g.is_central());
        Ok(())
    }))
}

fn invariants_vanish_off_multiples_of_5(r: &mut TestRunner) -> Result<(), String> {
    static DIMS: OnceLock<Vec<Result<u64, String>>> = OnceLock::new();
    let dims = DIMS.get_or_init(|| (1..=9).map(|i| trivial_summand_dim(i).map_err(|e| e.to_string())).collect());
    done(r.run(&(1usize..=9), |i| {
        let d = dims[i - 1].clone().map_err(fail)?;
        if i % 5 != 0 {
            prop_assert_eq!(d, 0, "degree {}", i);
        }
        Ok(())
    }))
}
