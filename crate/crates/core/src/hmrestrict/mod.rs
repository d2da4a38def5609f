//! Restriction of the bundle to planes and lines.
//!
//! A plane is stored dually, by two covectors `x*, y*` with `P² = {x* = y* = 0}`;
//! a line by three covectors. Plücker coordinates use the lexicographic order
//! `(p01, p02, p03, p04, p12, p13, p14, p23, p24, p34)`. This order reproduces
//! the ranks 12, 13, 14 of `M` at the tuples `(1,0,…)`, `(1,1,1,1,0,…)`,
//! `(1,1,0,0,1,0,…)` and the resolution `(4)(1,2,2)` at `(1,1,1,0,…)`.

mod inplane;

use num_traits::{One, Zero};
use rand::Rng;
use thiserror::Error;

use crate::exmat::ExactMatrix;
use crate::exterior::{
    basis, contract, decomposable_test, full_pair, plucker_from_covectors, Covector, ExteriorError, ExteriorForm, MonadData, PluckerPoint, DIM,
};
use crate::respairs::ResolutionPair;
use crate::scalar::{Cyclo5, Field};

pub use inplane::{find_jumping_lines_in_plane, FoundLine, InPlaneLines, LocusKind};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HmError {
    #[error("Plücker point is not decomposable; quadric values {0:?}")]
    NotDecomposable(Vec<String>),
    #[error("covectors are linearly dependent")]
    Dependent,
    #[error("rank {0} of M is outside 12..=15")]
    RankOutOfRange(usize),
    #[error("computed jumping order {0} exceeds 3")]
    OrderTooHigh(usize),
    #[error("in-plane search failed: every affine chart was degenerate")]
    DegenerateParametrization,
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error(transparent)]
    Exterior(#[from] ExteriorError),
}

pub(crate) fn covector_rank<F: Field>(cs: &[&Covector<F>]) -> usize {
    ExactMatrix::from_fn(cs.len(), DIM, |i, j| cs[i].0[j].clone()).rank()
}

/// A plane `{x* = y* = 0}`.
#[derive(Clone, Debug, PartialEq)]
pub struct PlaneSpec<F> {
    x: Covector<F>,
    y: Covector<F>,
    plucker: PluckerPoint<F>,
}

impl<F: Field> PlaneSpec<F> {
    pub fn from_covectors(x: Covector<F>, y: Covector<F>) -> Result<Self, HmError> {
        let plucker = plucker_from_covectors(&x, &y).map_err(|_| HmError::Dependent)?;
        Ok(PlaneSpec { x, y, plucker })
    }

    /// Validates decomposability, then recovers defining covectors.
    pub fn from_plucker(p: PluckerPoint<F>) -> Result<Self, HmError> {
        let (ok, quadrics) = decomposable_test(&p.to_form());
        if !ok {
            return Err(HmError::NotDecomposable(quadrics.iter().map(ToString::to_string).collect()));
        }
        let (x, y) = p.covectors().map_err(|_| HmError::Dependent)?;
        Ok(PlaneSpec { x, y, plucker: p })
    }

    pub fn x(&self) -> &Covector<F> {
        &self.x
    }

    pub fn y(&self) -> &Covector<F> {
        &self.y
    }

    pub fn plucker(&self) -> &PluckerPoint<F> {
        &self.plucker
    }

    pub fn omega(&self) -> ExteriorForm<F> {
        self.plucker.to_form()
    }

    /// Equality of planes: proportional Plücker vectors.
    pub fn same_plane(&self, other: &Self) -> bool {
        ExactMatrix::from_fn(2, 10, |i, j| if i == 0 { self.plucker.0[j].clone() } else { other.plucker.0[j].clone() }).rank() == 1
    }

    pub fn contains_line(&self, line: &LineSpec<F>) -> bool {
        let [a, b, c] = &line.covectors;
        covector_rank(&[a, b, c, &self.x, &self.y]) == 3
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> PlaneSpec<G> {
        PlaneSpec {
            x: Covector(self.x.0.each_ref().map(&f)),
            y: Covector(self.y.0.each_ref().map(&f)),
            plucker: PluckerPoint(self.plucker.0.each_ref().map(&f)),
        }
    }
}

/// A line given by three independent covectors.
#[derive(Clone, Debug, PartialEq)]
pub struct LineSpec<F> {
    covectors: [Covector<F>; 3],
}

impl<F: Field> LineSpec<F> {
    pub fn new(covectors: [Covector<F>; 3]) -> Result<Self, HmError> {
        let [a, b, c] = &covectors;
        if covector_rank(&[a, b, c]) != 3 {
            return Err(HmError::Dependent);
        }
        Ok(LineSpec { covectors })
    }

    pub fn from_i64(c: [[i64; DIM]; 3]) -> Result<Self, HmError> {
        Self::new(c.map(Covector::from_i64))
    }

    pub fn covectors(&self) -> &[Covector<F>; 3] {
        &self.covectors
    }

    /// Basis `c1∧c2, c1∧c3, c2∧c3` of the 2-forms on the annihilator.
    pub fn psi_basis(&self) -> [ExteriorForm<F>; 3] {
        let [a, b, c] = &self.covectors;
        let w = |p: &Covector<F>, q: &Covector<F>| p.to_form().wedge(&q.to_form()).expect("covectors");
        [w(a, b), w(a, c), w(b, c)]
    }

    pub fn same_line(&self, other: &Self) -> bool {
        let [a, b, c] = &self.covectors;
        let [d, e, f] = &other.covectors;
        covector_rank(&[a, b, c, d, e, f]) == 3
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> LineSpec<G> {
        LineSpec { covectors: self.covectors.each_ref().map(|c| Covector(c.0.each_ref().map(&f))) }
    }
}

/// The 2×5 matrix whose rank drops to 1 exactly on jumping planes.
pub fn restricted_2x5<F: Field>(plane: &PlaneSpec<F>) -> ExactMatrix<F> {
    restricted_2x5_from(&plane.plucker)
}

pub(crate) fn restricted_2x5_from<F: Field>(p: &PluckerPoint<F>) -> ExactMatrix<F> {
    let g = |i, j| p.get(i, j);
    let n = |i, j| -p.get(i, j);
    ExactMatrix::from_rows(vec![vec![g(2, 3), g(3, 4), n(0, 4), g(0, 1), g(1, 2)], vec![g(1, 4), n(0, 2), n(1, 3), n(2, 4), g(0, 3)]]).expect("rectangular")
}

pub fn is_jumping_plane<F: Field>(plane: &PlaneSpec<F>) -> bool {
    restricted_2x5(plane).rank() <= 1
}

/// The 20×50 matrix `M` of a plane.
pub fn build_m<F: Field>(plane: &PlaneSpec<F>) -> ExactMatrix<F> {
    build_m_from_form(&plane.omega())
}

/// `M` for an arbitrary 2-form `ω` (linear in `ω`).
///
/// Row `(r, I)`: the basis 3-form `e*_I` placed in the `r`-th copy. Column
/// block `i`, entry `J`: the `e*_J` coefficient of `ι(a_{r,i}) e*_I ∧ ω`.
pub fn build_m_from_form<F: Field>(omega: &ExteriorForm<F>) -> ExactMatrix<F> {
    let monad = MonadData::<F>::new();
    let b3 = basis(3);
    let mut m = ExactMatrix::zeros(20, 50);
    for r in 0..2 {
        for (ii, idx) in b3.iter().enumerate() {
            let phi = ExteriorForm::basis_element(idx, crate::exterior::Variance::Covectors);
            for i in 0..DIM {
                let cv = contract(&monad.a[r][i], &phi).expect("degrees 2, 3");
                let w = cv.to_form().wedge(omega).expect("covectors");
                for (jj, c) in w.coeffs().iter().enumerate() {
                    m.set(r * 10 + ii, i * 10 + jj, c.clone());
                }
            }
        }
    }
    m
}

/// The matrices `M(e*_i ∧ e*_j)` in Plücker order; `M` of any 2-form is the
/// matching linear combination.
pub fn m_basis<F: Field>() -> Vec<ExactMatrix<F>> {
    basis(2).iter().map(|ij| build_m_from_form(&ExteriorForm::basis_element(ij, crate::exterior::Variance::Covectors))).collect()
}

/// Candidate resolutions for each rank of `M`.
pub fn candidates_for_rank(rank: usize) -> Option<Vec<ResolutionPair>> {
    let p = |s: &str| s.parse::<ResolutionPair>().expect("literal pair");
    Some(match rank {
        15 => vec![p("(3,3,3)(2,2,2,2,2)")],
        14 => vec![p("(4)(1,2,2)"), p("(3,4)(1,2,2,3)")],
        13 => vec![p("(5)(1,1,4)")],
        12 => vec![p("(5)(0,3,3)"), p("(4,5)(0,3,3,4)")],
        _ => return None,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct RankClass {
    pub rank: usize,
    /// `h⁰(F|(1)) = 15 - rank`.
    pub h0_twist1: usize,
    pub candidates: Vec<ResolutionPair>,
}

pub fn rank_class<F: Field>(plane: &PlaneSpec<F>) -> Result<RankClass, HmError> {
    rank_class_of(build_m(plane).rank())
}

pub fn rank_class_of(rank: usize) -> Result<RankClass, HmError> {
    let candidates = candidates_for_rank(rank).ok_or(HmError::RankOutOfRange(rank))?;
    Ok(RankClass { rank, h0_twist1: 15 - rank, candidates })
}

/// 5×6 matrix with entry `(i, (r, s)) = ⟨a_{r,i}, ψ_s⟩`; its kernel has
/// dimension `h⁰` of the bundle on the line, i.e. order + 1.
pub fn line_order_matrix<F: Field>(line: &LineSpec<F>) -> ExactMatrix<F> {
    order_matrix_from_psi(&line.psi_basis())
}

pub(crate) fn order_matrix_from_psi<F: Field>(psi: &[ExteriorForm<F>; 3]) -> ExactMatrix<F> {
    let monad = MonadData::<F>::new();
    ExactMatrix::from_fn(DIM, 6, |i, col| full_pair(&monad.a[col / 3][i], &psi[col % 3]).expect("degree 2 pairing"))
}

pub fn jumping_order<F: Field>(line: &LineSpec<F>) -> Result<usize, HmError> {
    let kernel = 6 - line_order_matrix(line).rank();
    let order = kernel - 1;
    if order > 3 {
        return Err(HmError::OrderTooHigh(order));
    }
    Ok(order)
}

/// `L_{k,j} = {z_k = z_{k+2} + ζ^j z_{k+3} = z_{k+1} + ζ^{3j} z_{k+4} = 0}`.
pub fn hm_line(k: usize, j: usize) -> LineSpec<Cyclo5> {
    let mut c: [Covector<Cyclo5>; 3] = std::array::from_fn(|_| Covector(std::array::from_fn(|_| Cyclo5::zero())));
    c[0].0[k % 5] = Cyclo5::one();
    c[1].0[(k + 2) % 5] = Cyclo5::one();
    c[1].0[(k + 3) % 5] = Cyclo5::zeta_pow(j as i64);
    c[2].0[(k + 1) % 5] = Cyclo5::one();
    c[2].0[(k + 4) % 5] = Cyclo5::zeta_pow(3 * j as i64);
    LineSpec::new(c).expect("independent")
}

/// The 25 lines `L_{k,j}`, `k`-major.
pub fn hm_lines() -> Vec<LineSpec<Cyclo5>> {
    (0..5).flat_map(|k| (0..5).map(move |j| hm_line(k, j))).collect()
}

/// Whether the plane contains one of the 25 lines `L_{k,j}`.
pub fn contains_hm_line<F: Field>(plane: &PlaneSpec<F>) -> Option<(usize, usize)> {
    let p = plane.map(Field::to_cyclo5);
    (0..25).map(|n| (n / 5, n % 5)).find(|&(k, j)| p.contains_line(&hm_line(k, j)))
}

#[derive(Clone, Debug, PartialEq)]
pub enum Resolution {
    Resolved(ResolutionPair),
    /// The witness search degenerated; no label is forced.
    Unresolved(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct StratumReport<F> {
    pub rank: usize,
    pub jumping: bool,
    pub h0_twist1: usize,
    pub candidates: Vec<ResolutionPair>,
    pub resolution: Resolution,
    /// Order threshold of the witness search, when one was needed.
    pub searched_order: Option<usize>,
    pub witnesses: Vec<FoundLine<F>>,
    /// Lines of at least `searched_order`, with multiplicity, over the
    /// algebraic closure.
    pub witness_count: Option<usize>,
    pub hm_line: Option<(usize, usize)>,
}

/// Full classification. Rank 12 and 14 are split by searching the plane
/// for lines of order 3 (resp. 2); `seed` drives the random charts.
pub fn classify_resolution<F: Field>(plane: &PlaneSpec<F>, seed: u64) -> Result<StratumReport<F>, HmError> {
    let class = rank_class(plane)?;
    let jumping = is_jumping_plane(plane);
    if jumping != (class.rank == 12) {
        return Err(HmError::Invariant(format!("jumping flag {jumping} but rank {}", class.rank)));
    }
    let mut report = StratumReport {
        rank: class.rank,
        jumping,
        h0_twist1: class.h0_twist1,
        candidates: class.candidates.clone(),
        resolution: Resolution::Resolved(class.candidates[0].clone()),
        searched_order: None,
        witnesses: Vec::new(),
        witness_count: None,
        hm_line: None,
    };
    let (order, with, without) = match class.rank {
        12 => (3, &class.candidates[1], &class.candidates[0]),
        14 => (2, &class.candidates[1], &class.candidates[0]),
        _ => return Ok(report),
    };
    report.searched_order = Some(order);
    let found = match find_jumping_lines_in_plane(plane, order, seed) {
        Ok(f) => f,
        Err(HmError::DegenerateParametrization) => {
            report.resolution = Resolution::Unresolved("every chart of the dual plane was degenerate".into());
            return Ok(report);
        }
        Err(e) => return Err(e),
    };
    match found.locus {
        LocusKind::PositiveDimensional => {
            if order == 3 {
                return Err(HmError::Invariant("positive-dimensional family of order-3 lines".into()));
            }
            report.resolution = Resolution::Unresolved(format!("lines of order >= {order} form a positive-dimensional family"));
        }
        LocusKind::Finite { count_with_multiplicity, .. } => {
            report.witness_count = Some(count_with_multiplicity);
            report.witnesses = found.lines;
            let has = count_with_multiplicity > 0;
            if order == 3 {
                report.hm_line = contains_hm_line(plane);
                if report.hm_line.is_some() != has {
                    return Err(HmError::Invariant("order-3 search disagrees with containment of an HM line".into()));
                }
            }
            report.resolution = Resolution::Resolved(if has { with.clone() } else { without.clone() });
        }
    }
    Ok(report)
}

/// Reference planes, as lex Plücker coordinates: `PI` has rank 12, `RHO`
/// rank 13, `SIGMA` and `PI_TILDE` rank 14 (resolved as `(3,4)(1,2,2,3)`
/// and `(4)(1,2,2)` respectively).
pub const PI: [i64; 10] = [1, 0, 0, 0, 0, 0, 0, 0, 0, 0];
pub const RHO: [i64; 10] = [1, 1, 1, 1, 0, 0, 0, 0, 0, 0];
pub const SIGMA: [i64; 10] = [1, 1, 0, 0, 1, 0, 0, 0, 0, 0];
pub const PI_TILDE: [i64; 10] = [1, 1, 1, 0, 0, 0, 0, 0, 0, 0];

/// Plane with the given integer Plücker coordinates; panics if they are not
/// decomposable.
pub fn plane_from_i64<F: Field>(p: [i64; 10]) -> PlaneSpec<F> {
    PlaneSpec::from_plucker(PluckerPoint::from_i64(p)).expect("decomposable Plücker point")
}

/// Covector with independent uniform entries in `-bound..=bound`.
pub fn random_covector<F: Field>(rng: &mut impl Rng, bound: i64) -> Covector<F> {
    Covector(std::array::from_fn(|_| F::from_i64(rng.gen_range(-bound..=bound))))
}

pub fn random_plane<F: Field>(rng: &mut impl Rng, bound: i64) -> PlaneSpec<F> {
    loop {
        if let Ok(p) = PlaneSpec::from_covectors(random_covector(rng, bound), random_covector(rng, bound)) {
            return p;
        }
    }
}

pub fn random_line<F: Field>(rng: &mut impl Rng, bound: i64) -> LineSpec<F> {
    loop {
        let c = std::array::from_fn(|_| random_covector(rng, bound));
        if let Ok(l) = LineSpec::new(c) {
            return l;
        }
    }
}

/// A random plane containing `line`: two random combinations of its
/// covectors.
pub fn random_plane_through<F: Field>(line: &LineSpec<F>, rng: &mut impl Rng, bound: i64) -> PlaneSpec<F> {
    loop {
        let mut comb = || {
            let [a, b, c] = line.covectors();
            let k: [F; 3] = std::array::from_fn(|_| F::from_i64(rng.gen_range(-bound..=bound)));
            a.scale(&k[0]).add(&b.scale(&k[1])).add(&c.scale(&k[2]))
        };
        if let Ok(p) = PlaneSpec::from_covectors(comb(), comb()) {
            return p;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    type Q = Rational;

    fn plane(p: [i64; 10]) -> PlaneSpec<Q> {
        PlaneSpec::from_plucker(PluckerPoint::from_i64(p)).unwrap()
    }

    #[test]
    fn restricted_matrix_examples() {
        let p = plane([0, 0, 0, 0, 0, 0, 0, 1, 0, 0]);
        let m = restricted_2x5(&p);
        assert_eq!(m, ExactMatrix::from_i64(&[&[1, 0, 0, 0, 0], &[0, 0, 0, 0, 0]]));
        assert!(is_jumping_plane(&p));
        let bad = PlaneSpec::from_plucker(PluckerPoint::<Q>::from_i64([1, 0, 0, 0, 0, 0, 0, 1, 0, 0]));
        assert!(matches!(bad, Err(HmError::NotDecomposable(_))));
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let p = random_plane::<Q>(&mut rng, 9);
            assert_eq!(restricted_2x5(&p).rank(), 2);
            assert!(!is_jumping_plane(&p));
        }
    }

    #[test]
    fn marked_ranks() {
        assert_eq!(build_m(&plane([1, 0, 0, 0, 0, 0, 0, 0, 0, 0])).rank(), 12);
        assert_eq!(build_m(&plane([1, 1, 1, 1, 0, 0, 0, 0, 0, 0])).rank(), 13);
        assert_eq!(build_m(&plane([1, 1, 0, 0, 1, 0, 0, 0, 0, 0])).rank(), 14);
        assert_eq!(build_m(&plane([1, 1, 1, 0, 0, 0, 0, 0, 0, 0])).rank(), 14);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        assert_eq!(build_m(&random_plane::<Q>(&mut rng, 9)).rank(), 15);
    }

    #[test]
    fn m_is_linear_in_omega() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let basis = m_basis::<Q>();
        let p = random_plane::<Q>(&mut rng, 5);
        let combo = basis.iter().zip(p.plucker().0.iter()).fold(ExactMatrix::zeros(20, 50), |acc, (m, c)| acc.add(&m.scale(c)));
        assert_eq!(combo, build_m(&p));
    }

    #[test]
    fn rank_classes() {
        let c = rank_class_of(13).unwrap();
        assert_eq!(c.candidates, vec!["(5)(1,1,4)".parse().unwrap()]);
        assert_eq!(c.h0_twist1, 2);
        assert_eq!(rank_class_of(15).unwrap().h0_twist1, 0);
        assert_eq!(rank_class_of(12).unwrap().h0_twist1, 3);
        assert_eq!(rank_class_of(11), Err(HmError::RankOutOfRange(11)));
    }

    #[test]
    fn hm_line_orders() {
        let l00 = LineSpec::<Q>::from_i64([[1, 0, 0, 0, 0], [0, 0, 1, 1, 0], [0, 1, 0, 0, 1]]).unwrap();
        assert_eq!(jumping_order(&l00).unwrap(), 3);
        assert_eq!(line_order_matrix(&l00).kernel_basis().len(), 4);
        assert!(hm_line(0, 0).same_line(&l00.map(Field::to_cyclo5)));
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..10 {
            assert_eq!(jumping_order(&random_line::<Q>(&mut rng, 9)).unwrap(), 0);
        }
        let lines = hm_lines();
        for (i, l) in lines.iter().enumerate() {
            assert_eq!(jumping_order(l).unwrap(), 3);
            for m in &lines[i + 1..] {
                assert!(!l.same_line(m));
            }
        }
    }

    #[test]
    fn plane_bases_do_not_matter() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..5 {
            let p = random_plane::<Q>(&mut rng, 5);
            let x2 = p.x().scale(&Q::from_i64(3)).add(p.y());
            let y2 = p.x().add(&p.y().scale(&Q::from_i64(-2)));
            let q = PlaneSpec::from_covectors(x2, y2).unwrap();
            assert!(p.same_plane(&q));
            assert_eq!(build_m(&p).rank(), build_m(&q).rank());
        }
    }

    fn resolved(p: &PlaneSpec<Q>, seed: u64) -> String {
        match classify_resolution(p, seed).unwrap().resolution {
            Resolution::Resolved(r) => r.to_string(),
            Resolution::Unresolved(why) => panic!("unresolved: {why}"),
        }
    }

    #[test]
    fn marked_planes_classify() {
        assert_eq!(resolved(&plane([1, 0, 0, 0, 0, 0, 0, 0, 0, 0]), 1), "(5)(0,3,3)");
        assert_eq!(resolved(&plane([1, 1, 1, 1, 0, 0, 0, 0, 0, 0]), 1), "(5)(1,1,4)");
        assert_eq!(resolved(&plane([1, 1, 1, 0, 0, 0, 0, 0, 0, 0]), 1), "(4)(1,2,2)");
        assert_eq!(resolved(&plane(SIGMA), 1), "(3,4)(1,2,2,3)");
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        assert_eq!(resolved(&random_plane(&mut rng, 5), 1), "(3,3,3)(2,2,2,2,2)");
    }

    #[test]
    fn planes_through_special_lines_classify() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let l00 = LineSpec::<Q>::from_i64([[1, 0, 0, 0, 0], [0, 0, 1, 1, 0], [0, 1, 0, 0, 1]]).unwrap();
        let p = random_plane_through(&l00, &mut rng, 4);
        let report = classify_resolution(&p, 2).unwrap();
        assert_eq!(report.rank, 13);
        assert_eq!(report.resolution, Resolution::Resolved("(5)(1,1,4)".parse().unwrap()));

        // A point of the conic ab = c² of planes through L_{0,0}; a = 1, b = 4, c = 2.
        let p = plane([1, 4, 4, 1, 2, 2, 0, 0, -2, -2]);
        assert!(p.contains_line(&l00));
        let report = classify_resolution(&p, 2).unwrap();
        assert_eq!(report.rank, 12);
        assert_eq!(report.hm_line, Some((0, 0)));
        assert_eq!(report.resolution, Resolution::Resolved("(4,5)(0,3,3,4)".parse().unwrap()));
        assert!(report.witnesses.iter().any(|w| w.line.same_line(&l00)));

        // A coordinate line of the plane {z0 = z1 = 0} has order 2.
        let l = LineSpec::<Q>::from_i64([[1, 0, 0, 0, 0], [0, 1, 0, 0, 0], [0, 0, 1, 0, 0]]).unwrap();
        assert_eq!(jumping_order(&l).unwrap(), 2);
        let p = random_plane_through(&l, &mut rng, 4);
        let report = classify_resolution(&p, 3).unwrap();
        assert_eq!(report.rank, 14);
        assert_eq!(report.resolution, Resolution::Resolved("(3,4)(1,2,2,3)".parse().unwrap()));
        assert!(report.witnesses.iter().any(|w| w.line.same_line(&l)));
    }
}
