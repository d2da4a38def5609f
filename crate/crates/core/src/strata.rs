//! Local geometry of the rank strata of `M`: tangent dimensions, the pencil
//! degree certificate, and the planes through a fixed line.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::exmat::ExactMatrix;
use crate::exterior::{basis, Covector, ExteriorForm, PluckerPoint};
use crate::heisenberg::all_elements;
use crate::hmrestrict::{build_m, build_m_from_form, covector_rank, hm_line, hm_lines, m_basis, restricted_2x5_from, HmError, LineSpec, PlaneSpec};
use crate::polykit::{gcd, interp_det, modp_gcd, solve_by_combinations, BiPoly, BinaryForm, SystemOutcome, UniPoly};
use crate::scalar::{primitive_fifth_root, Cyclo5, EmbedModP, Field, ModP, DEFAULT_PRIME};

#[derive(Debug, Error, PartialEq)]
pub enum StrataError {
    #[error("expected rank {expected}, found {found}")]
    RankMismatch { expected: usize, found: usize },
    #[error("covectors are dependent")]
    Dependent,
    #[error("internal invariant violated: {0}")]
    Invariant(String),
    #[error(transparent)]
    Hm(#[from] HmError),
}

// ---------------------------------------------------------------------------
// Tangent spaces

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Anchor {
    /// Pivots of plain elimination.
    Pivot,
    /// Pivots after a seeded shuffle of rows and columns.
    Shuffled(u64),
}

#[derive(Clone, Debug, PartialEq)]
pub struct TangentReport {
    pub rank: usize,
    pub anchor_rows: Vec<usize>,
    pub anchor_cols: Vec<usize>,
    pub bordered_minors: usize,
    pub jacobian_rank: usize,
    /// `9 - jacobian_rank`.
    pub dimension: usize,
}

/// Index of `p_{ij}` in lex Plücker order.
pub fn plucker_index(i: usize, j: usize) -> usize {
    let (i, j) = if i < j { (i, j) } else { (j, i) };
    basis(2).iter().position(|p| p[0] == i && p[1] == j).expect("0 <= i < j < 5")
}

/// Gradients of the five quadrics `p_ij p_kl - p_ik p_jl + p_il p_jk`.
pub fn plucker_quadric_gradients<F: Field>(p: &PluckerPoint<F>) -> Vec<Vec<F>> {
    basis(4)
        .iter()
        .map(|q| {
            let (i, j, k, l) = (q[0], q[1], q[2], q[3]);
            let mut g = vec![F::zero(); 10];
            for (a, b, sign) in [((i, j), (k, l), 1), ((i, k), (j, l), -1), ((i, l), (j, k), 1)] {
                let (ia, ib) = (plucker_index(a.0, a.1), plucker_index(b.0, b.1));
                let s = F::from_i64(sign);
                g[ia] = g[ia].add_ref(&s.mul_ref(&p.0[ib]));
                g[ib] = g[ib].add_ref(&s.mul_ref(&p.0[ia]));
            }
            g
        })
        .collect()
}

fn anchor_of<F: Field>(m: &ExactMatrix<F>, anchor: Anchor) -> (Vec<usize>, Vec<usize>) {
    match anchor {
        Anchor::Pivot => {
            let p = m.rank_profile();
            (p.rows, p.cols)
        }
        Anchor::Shuffled(seed) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut rows: Vec<usize> = (0..m.rows()).collect();
            let mut cols: Vec<usize> = (0..m.cols()).collect();
            rows.shuffle(&mut rng);
            cols.shuffle(&mut rng);
            let p = m.submatrix(&rows, &cols).expect("permutation").rank_profile();
            let mut r: Vec<usize> = p.rows.iter().map(|&i| rows[i]).collect();
            let mut c: Vec<usize> = p.cols.iter().map(|&j| cols[j]).collect();
            r.sort_unstable();
            c.sort_unstable();
            (r, c)
        }
    }
}

/// Projective tangent dimension of `{rank M <= r}` ∩ G(2,5) at `plane`.
///
/// With the anchor `μ = M[R, C]`, the border through row `i` and column `j`
/// has, at a point of rank exactly `r`, adjugate `det μ · z yᵀ` where
/// `y = (-(μ⁻ᵀ) M[i, C], 1)` and `z = (-μ⁻¹ M[R, j], 1)`; so its gradient is
/// proportional to `yᵀ M_k[R+i, C+j] z`. All borders at once:
/// `Y · M_k · Z` with `Y = [-W | I]`, `Z = [-U ; I]`.
pub fn tangent_dimension<F: Field>(plane: &PlaneSpec<F>, r: usize, anchor: Anchor) -> Result<TangentReport, StrataError> {
    let m = build_m(plane);
    let found = m.rank();
    if found != r {
        return Err(StrataError::RankMismatch { expected: r, found });
    }
    let (rows, cols) = anchor_of(&m, anchor);
    let other_rows: Vec<usize> = (0..m.rows()).filter(|i| !rows.contains(i)).collect();
    let other_cols: Vec<usize> = (0..m.cols()).filter(|j| !cols.contains(j)).collect();
    let mu_inv = m.submatrix(&rows, &cols).and_then(|mu| mu.inverse()).map_err(|e| StrataError::Invariant(e.to_string()))?;
    let w = m.submatrix(&other_rows, &cols).and_then(|c| c.mul(&mu_inv)).expect("shapes");
    let u = m.submatrix(&rows, &other_cols).and_then(|b| mu_inv.mul(&b)).expect("shapes");

    let row_order: Vec<usize> = rows.iter().chain(&other_rows).copied().collect();
    let col_order: Vec<usize> = cols.iter().chain(&other_cols).copied().collect();
    let (nr, nc) = (other_rows.len(), other_cols.len());
    let y = ExactMatrix::from_fn(nr, m.rows(), |a, b| {
        if b < r {
            -w.get(a, b).clone()
        } else if b - r == a {
            F::one()
        } else {
            F::zero()
        }
    });
    let z = ExactMatrix::from_fn(m.cols(), nc, |a, b| {
        if a < r {
            -u.get(a, b).clone()
        } else if a - r == b {
            F::one()
        } else {
            F::zero()
        }
    });
    let project = |mk: &ExactMatrix<F>| {
        let reordered = mk.submatrix(&row_order, &col_order).expect("permutation");
        y.mul(&reordered).and_then(|t| t.mul(&z)).expect("shapes")
    };
    if !project(&m).is_zero() {
        return Err(StrataError::Invariant("Schur complement of the anchor is not zero".into()));
    }

    let per_coordinate: Vec<ExactMatrix<F>> = m_basis::<F>().iter().map(project).collect();
    let mut jac: Vec<Vec<F>> = Vec::with_capacity(nr * nc + 5);
    for a in 0..nr {
        for b in 0..nc {
            jac.push(per_coordinate.iter().map(|g| g.get(a, b).clone()).collect());
        }
    }
    jac.extend(plucker_quadric_gradients(plane.plucker()));
    let jacobian_rank = ExactMatrix::from_rows(jac).expect("rectangular").rank();
    Ok(TangentReport { rank: r, anchor_rows: rows, anchor_cols: cols, bordered_minors: nr * nc, jacobian_rank, dimension: 9 - jacobian_rank })
}

// ---------------------------------------------------------------------------
// Pencils

/// The planes `{x* = s·y* + t·z* = 0}`, all containing the line
/// `{x* = y* = z* = 0}`.
#[derive(Clone, Debug, PartialEq)]
pub struct PencilSpec<F> {
    x: Covector<F>,
    y: Covector<F>,
    z: Covector<F>,
}

impl<F: Field> PencilSpec<F> {
    pub fn new(x: Covector<F>, y: Covector<F>, z: Covector<F>) -> Result<Self, StrataError> {
        if covector_rank(&[&x, &y, &z]) != 3 {
            return Err(StrataError::Dependent);
        }
        Ok(PencilSpec { x, y, z })
    }

    pub fn random(rng: &mut impl Rng, bound: i64) -> Self {
        loop {
            let mut c = || Covector(std::array::from_fn(|_| F::from_i64(rng.gen_range(-bound..=bound))));
            if let Ok(p) = Self::new(c(), c(), c()) {
                return p;
            }
        }
    }

    pub fn covectors(&self) -> [&Covector<F>; 3] {
        [&self.x, &self.y, &self.z]
    }

    pub fn omega(&self, s: &F, t: &F) -> ExteriorForm<F> {
        let second = self.y.scale(s).add(&self.z.scale(t));
        self.x.to_form().wedge(&second.to_form()).expect("covectors")
    }

    pub fn plane(&self, s: &F, t: &F) -> Result<PlaneSpec<F>, StrataError> {
        Ok(PlaneSpec::from_covectors(self.x.clone(), self.y.scale(s).add(&self.z.scale(t)))?)
    }

    /// `(M(x∧y), M(x∧z))`, so that `M(s, t) = s·A + t·B`.
    pub fn matrices(&self) -> (ExactMatrix<F>, ExactMatrix<F>) {
        let one = F::one();
        let zero = F::zero();
        (build_m_from_form(&self.omega(&one, &zero)), build_m_from_form(&self.omega(&zero, &one)))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum PencilOutcome {
    Certified { degree: usize },
    Degenerate { reason: String },
}

#[derive(Clone, Debug, PartialEq)]
pub struct PencilReport<F> {
    pub outcome: PencilOutcome,
    /// GCD of the sampled 15×15 minors, a binary form in `(s, t)`.
    pub certificate: Option<BinaryForm<F>>,
    pub combinations_used: usize,
    /// Pivot 15×15 minors of `M(s, t)` checked to be multiples of the
    /// certificate.
    pub divisibility_checks: usize,
    /// Degree of the GCD recomputed modulo the cross-check prime.
    pub modular_degree: Option<usize>,
    /// Roots `(s, t)` of the certificate lying in the base field, with the
    /// rank of `M` there.
    pub field_roots: Vec<((F, F), usize)>,
}

pub const EXPECTED_PENCIL_DEGREE: usize = 5;
const PENCIL_MAX_COMBINATIONS: usize = 30;
const PENCIL_ZERO_PATIENCE: usize = 6;
const DIVISIBILITY_SAMPLES: usize = 5;

fn random_ints<F: Field>(rng: &mut ChaCha8Rng, rows: usize, cols: usize, bound: i64) -> ExactMatrix<F> {
    ExactMatrix::from_fn(rows, cols, |_, _| F::from_i64(rng.gen_range(-bound..=bound)))
}

fn form_mod_p<F: Field + EmbedModP>(form: &BinaryForm<F>, zeta: &ModP) -> Option<Vec<ModP>> {
    form.poly.coeffs().iter().map(|c| c.embed(zeta).ok()).collect()
}

/// Degree of the locus `rank M(s, t) <= 14` on a pencil, certified by the
/// GCD of random combinations `det(R · M(s, t) · C)` of 15×15 minors.
pub fn pencil_degree<F: Field + EmbedModP>(pencil: &PencilSpec<F>, seed: u64) -> Result<PencilReport<F>, StrataError> {
    pencil_degree_mod(pencil, seed, DEFAULT_PRIME)
}

/// [`pencil_degree`] with the cross-check done modulo `prime`. Any odd prime
/// works for rational pencils; cyclotomic entries need `prime = 1 mod 5`,
/// otherwise `modular_degree` is `None`.
pub fn pencil_degree_mod<F: Field + EmbedModP>(pencil: &PencilSpec<F>, seed: u64, prime: u64) -> Result<PencilReport<F>, StrataError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (a, b) = pencil.matrices();
    let n = 15;
    let mut forms: Vec<BinaryForm<F>> = Vec::new();
    let mut cert: Option<BinaryForm<F>> = None;
    let mut stable = 0;
    let mut zeros = 0;
    let mut used = 0;
    while used < PENCIL_MAX_COMBINATIONS && stable < crate::polykit::STABLE_ROUNDS {
        used += 1;
        let r = random_ints::<F>(&mut rng, n, 20, 3);
        let c = random_ints::<F>(&mut rng, 50, n, 3);
        let ra = r.mul(&a).and_then(|t| t.mul(&c)).expect("shapes");
        let rb = r.mul(&b).and_then(|t| t.mul(&c)).expect("shapes");
        let form = interp_det(&ra, &rb, 0);
        if form.is_zero() {
            zeros += 1;
            if cert.is_none() && zeros >= PENCIL_ZERO_PATIENCE {
                return Ok(PencilReport {
                    outcome: PencilOutcome::Degenerate { reason: format!("{zeros} sampled 15x15 minor combinations vanish identically") },
                    certificate: None,
                    combinations_used: used,
                    divisibility_checks: 0,
                    modular_degree: None,
                    field_roots: Vec::new(),
                });
            }
            continue;
        }
        let next = match &cert {
            None => form.clone(),
            Some(g) => g.gcd(&form),
        };
        let degree = |f: &BinaryForm<F>| f.poly.degree().unwrap_or(0) + f.root_at_infinity();
        if cert.as_ref().is_some_and(|g| degree(g) == degree(&next)) {
            stable += 1;
        } else if cert.is_some() {
            stable = 0;
        }
        forms.push(form);
        cert = Some(next);
    }
    let cert = cert.ok_or_else(|| StrataError::Invariant("no nonzero combination".into()))?;
    let degree = cert.poly.degree().unwrap_or(0) + cert.root_at_infinity();

    let mut checks = 0;
    let mut attempts = 0;
    while checks < DIVISIBILITY_SAMPLES && attempts < 10 * DIVISIBILITY_SAMPLES {
        attempts += 1;
        let t0 = F::from_i64(rng.gen_range(-50..=50));
        let (rows, cols) = anchor_of(&a.add(&b.scale(&t0)), Anchor::Shuffled(rng.gen()));
        if rows.len() != n {
            continue;
        }
        let minor = interp_det(&a.submatrix(&rows, &cols).expect("indices"), &b.submatrix(&rows, &cols).expect("indices"), 0);
        if !cert.divides(&minor) {
            return Err(StrataError::Invariant(format!("certificate does not divide the minor on rows {rows:?}")));
        }
        checks += 1;
    }

    let zeta = primitive_fifth_root(prime).or_else(|_| ModP::new(1, prime));
    let modular_degree = zeta.ok().and_then(|zeta| {
        let mut acc: Vec<ModP> = Vec::new();
        for f in &forms {
            acc = modp_gcd(acc, form_mod_p(f, &zeta)?);
        }
        let inf = forms.iter().map(BinaryForm::root_at_infinity).min().unwrap_or(0);
        Some(acc.len().saturating_sub(1) + inf)
    });

    let mut roots: Vec<(F, F)> = F::field_roots(&cert.poly).into_iter().map(|t| (F::one(), t)).collect();
    if cert.root_at_infinity() > 0 {
        roots.push((F::zero(), F::one()));
    }
    let mut field_roots = Vec::new();
    for (s, t) in roots {
        let rank = build_m_from_form(&pencil.omega(&s, &t)).rank();
        if rank > 14 {
            return Err(StrataError::Invariant(format!("certificate root ({s} : {t}) has rank {rank}")));
        }
        field_roots.push(((s, t), rank));
    }

    let outcome = if degree <= EXPECTED_PENCIL_DEGREE {
        PencilOutcome::Certified { degree }
    } else {
        PencilOutcome::Degenerate { reason: format!("GCD degree stayed at {degree} after {used} combinations") }
    };
    Ok(PencilReport { outcome, certificate: Some(cert), combinations_used: used, divisibility_checks: checks, modular_degree, field_roots })
}

// ---------------------------------------------------------------------------
// Planes through a line

/// A ternary quadratic form `mᵀ S m`, `S` symmetric.
#[derive(Clone, Debug, PartialEq)]
pub struct TernaryQuadric<F> {
    pub matrix: [[F; 3]; 3],
}

impl<F: Field> TernaryQuadric<F> {
    pub fn eval(&self, m: &[F; 3]) -> F {
        let mut acc = F::zero();
        for s in 0..3 {
            for t in 0..3 {
                acc = acc.add_ref(&self.matrix[s][t].mul_ref(&m[s]).mul_ref(&m[t]));
            }
        }
        acc
    }

    /// Symmetric bilinear form `B(m, n)`, with `B(m, m) = Q(m)`.
    pub fn polar(&self, m: &[F; 3], n: &[F; 3]) -> F {
        self.matrix.iter().zip(m).fold(F::zero(), |acc, (row, ms)| row.iter().zip(n).fold(acc, |acc, (b, nt)| acc.add_ref(&b.mul_ref(ms).mul_ref(nt))))
    }

    pub fn as_matrix(&self) -> ExactMatrix<F> {
        ExactMatrix::from_fn(3, 3, |s, t| self.matrix[s][t].clone())
    }

    pub fn rank(&self) -> usize {
        self.as_matrix().rank()
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.iter().flatten().all(|c| c.is_zero())
    }

    /// Coefficients of `m0², m0m1, m0m2, m1², m1m2, m2²`.
    pub fn coefficients(&self) -> [F; 6] {
        let two = F::from_i64(2);
        let s = &self.matrix;
        [s[0][0].clone(), s[0][1].mul_ref(&two), s[0][2].mul_ref(&two), s[1][1].clone(), s[1][2].mul_ref(&two), s[2][2].clone()]
    }

    /// The point where the line through `p0` (on the conic) with direction
    /// `d` meets the conic again: `Q(d)·p0 - 2B(p0, d)·d`.
    pub fn second_intersection(&self, p0: &[F; 3], d: &[F; 3]) -> [F; 3] {
        let qd = self.eval(d);
        let b = self.polar(p0, d).mul_ref(&F::from_i64(2));
        std::array::from_fn(|s| qd.mul_ref(&p0[s]).sub_ref(&b.mul_ref(&d[s])))
    }
}

/// Planes through a line, parametrized by `m ↦ Σ m_s ψ_s`.
#[derive(Clone, Debug, PartialEq)]
pub struct IncidenceChart<F> {
    pub line: LineSpec<F>,
    pub basis: [PluckerPoint<F>; 3],
}

impl<F: Field> IncidenceChart<F> {
    pub fn new(line: &LineSpec<F>) -> Self {
        let basis = line.psi_basis().map(|f| PluckerPoint::from_form(&f));
        IncidenceChart { line: line.clone(), basis }
    }

    pub fn point(&self, m: &[F; 3]) -> PluckerPoint<F> {
        PluckerPoint(std::array::from_fn(|k| (0..3).fold(F::zero(), |acc, s| acc.add_ref(&m[s].mul_ref(&self.basis[s].0[k])))))
    }

    pub fn plane(&self, m: &[F; 3]) -> Result<PlaneSpec<F>, StrataError> {
        Ok(PlaneSpec::from_plucker(self.point(m))?)
    }

    /// Chart coordinates of a plane through the line.
    pub fn coordinates_of(&self, plane: &PlaneSpec<F>) -> Option<[F; 3]> {
        let a = ExactMatrix::from_fn(10, 3, |k, s| self.basis[s].0[k].clone());
        solve_linear(&a, &plane.plucker().0).map(|v| std::array::from_fn(|s| v[s].clone()))
    }

    /// The ten 2×2 minors of the restricted 2×5 matrix as quadrics in `m`.
    pub fn minor_quadrics(&self) -> Vec<TernaryQuadric<F>> {
        let e: Vec<ExactMatrix<F>> = self.basis.iter().map(restricted_2x5_from).collect();
        let half = F::from_i64(2).inv().expect("characteristic zero");
        basis(2)
            .iter()
            .map(|ij| {
                let (i, j) = (ij[0], ij[1]);
                let matrix = std::array::from_fn(|s| {
                    std::array::from_fn(|t| {
                        let st = e[s].get(0, i).mul_ref(e[t].get(1, j)).sub_ref(&e[s].get(0, j).mul_ref(e[t].get(1, i)));
                        let ts = e[t].get(0, i).mul_ref(e[s].get(1, j)).sub_ref(&e[t].get(0, j).mul_ref(e[s].get(1, i)));
                        st.add_ref(&ts).mul_ref(&half)
                    })
                });
                TernaryQuadric { matrix }
            })
            .collect()
    }
}

/// Unique solution of `a·x = b`, if any.
fn solve_linear<F: Field>(a: &ExactMatrix<F>, b: &[F]) -> Option<Vec<F>> {
    let n = a.cols();
    let aug = ExactMatrix::from_fn(a.rows(), n + 1, |i, j| if j < n { a.get(i, j).clone() } else { -b[i].clone() });
    let kernel = aug.kernel_basis();
    if kernel.len() != 1 || kernel[0][n].is_zero() {
        return None;
    }
    let inv = kernel[0][n].inv().expect("nonzero");
    Some(kernel[0][..n].iter().map(|c| c.mul_ref(&inv)).collect())
}

fn cross<F: Field>(p: &[F; 3], q: &[F; 3]) -> [F; 3] {
    [p[1].mul_ref(&q[2]).sub_ref(&p[2].mul_ref(&q[1])), p[2].mul_ref(&q[0]).sub_ref(&p[0].mul_ref(&q[2])), p[0].mul_ref(&q[1]).sub_ref(&p[1].mul_ref(&q[0]))]
}

fn dot<F: Field>(p: &[F; 3], q: &[F; 3]) -> F {
    (0..3).fold(F::zero(), |acc, s| acc.add_ref(&p[s].mul_ref(&q[s])))
}

fn normalize<F: Field>(m: [F; 3]) -> [F; 3] {
    match m.iter().find(|c| !c.is_zero()) {
        Some(lead) => {
            let inv = lead.inv().expect("nonzero");
            m.map(|c| c.mul_ref(&inv))
        }
        None => m,
    }
}

fn to3<F: Field>(v: &[F]) -> [F; 3] {
    std::array::from_fn(|s| v[s].clone())
}

#[derive(Clone, Debug, PartialEq)]
pub enum Incidence<F> {
    /// The jumping planes through the line form the conic `Q = 0`.
    Conic { conic: TernaryQuadric<F> },
    /// Finitely many jumping planes; `points` are those with coordinates in
    /// the base field.
    FinitePoints { count_with_multiplicity: usize, distinct: usize, points: Vec<[F; 3]> },
    /// A line `⟨line, m⟩ = 0` of jumping planes plus one more off it.
    LinePlusPoint { line: [F; 3], point: [F; 3] },
    /// Anything else, kept raw for inspection.
    Other { reason: String },
}

impl<F> Incidence<F> {
    pub fn label(&self) -> &'static str {
        match self {
            Incidence::Conic { .. } => "conic",
            Incidence::FinitePoints { .. } => "finite points",
            Incidence::LinePlusPoint { .. } => "line + point",
            Incidence::Other { .. } => "other",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct IncidenceReport<F> {
    pub chart: IncidenceChart<F>,
    pub quadrics: Vec<TernaryQuadric<F>>,
    /// Dimension of the span of the ten quadrics.
    pub span_dim: usize,
    pub classification: Incidence<F>,
}

const INCIDENCE_CHARTS: u64 = 6;

/// Jumping planes through `line`: the common zeros of the 2×2 minors of the
/// restricted 2×5 matrix on the incidence plane.
pub fn incidence_analysis<F: Field>(line: &LineSpec<F>, seed: u64) -> IncidenceReport<F> {
    let chart = IncidenceChart::new(line);
    let quadrics = chart.minor_quadrics();
    let coeffs = ExactMatrix::from_rows(quadrics.iter().map(|q| q.coefficients().to_vec()).collect()).expect("rectangular");
    let profile = coeffs.rank_profile();
    let independent: Vec<TernaryQuadric<F>> = profile.rows.iter().map(|&i| quadrics[i].clone()).collect();
    let span_dim = profile.rank;
    let classification = match span_dim {
        0 => Incidence::Other { reason: "every plane through the line is jumping".into() },
        1 if independent[0].rank() == 3 => Incidence::Conic { conic: independent[0].clone() },
        1 => Incidence::Other { reason: format!("a single singular quadric of rank {}", independent[0].rank()) },
        _ => solve_quadrics(&independent, seed),
    };
    IncidenceReport { chart, quadrics, span_dim, classification }
}

fn solve_quadrics<F: Field>(qs: &[TernaryQuadric<F>], seed: u64) -> Incidence<F> {
    for attempt in 0..INCIDENCE_CHARTS {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x2545_F491).wrapping_add(attempt));
        let l = random_ints::<F>(&mut rng, 3, 3, 3);
        if l.rank() < 3 {
            continue;
        }
        let at = |h: [&F; 3]| -> [F; 3] { std::array::from_fn(|s| (0..3).fold(F::zero(), |acc, t| acc.add_ref(&l.get(s, t).mul_ref(h[t])))) };
        let (zero, one) = (F::zero(), F::one());
        let outcome = solve_by_combinations(
            || {
                let c: Vec<F> = qs.iter().map(|_| F::from_i64(rng.gen_range(-5..=5))).collect();
                BiPoly::interpolate_grid(2, 2, |u, v| {
                    let m = at([u, v, &one]);
                    qs.iter().zip(&c).fold(F::zero(), |acc, (q, ck)| acc.add_ref(&ck.mul_ref(&q.eval(&m))))
                })
            },
            20,
        );
        match outcome {
            SystemOutcome::Degenerate => continue,
            SystemOutcome::PositiveDimensional => return line_plus_point(qs),
            SystemOutcome::Finite(sol) => {
                if qs.iter().all(|q| q.eval(&at([&zero, &one, &zero])).is_zero()) {
                    continue;
                }
                let ts: Vec<F> = (0..=2).map(F::from_i64).collect();
                let at_infinity = qs.iter().fold(UniPoly::zero(), |acc, q| {
                    let vals: Vec<F> = ts.iter().map(|t| q.eval(&at([&one, t, &zero]))).collect();
                    gcd(&acc, &crate::polykit::interpolate(&ts, &vals))
                });
                if at_infinity.degree().is_none_or(|d| d > 0) {
                    continue;
                }
                let points = sol.points.iter().map(|(u, v)| normalize(at([u, v, &one]))).collect();
                return Incidence::FinitePoints { count_with_multiplicity: sol.count_with_multiplicity, distinct: sol.distinct_count, points };
            }
        }
    }
    Incidence::Other { reason: "every chart of the incidence plane was degenerate".into() }
}

/// Members of the family all have the shape `ℓ₀·a`; recover `ℓ₀` from the
/// singular points of the members, the cofactors `a` by linear algebra, and
/// the residual point as their common zero.
fn line_plus_point<F: Field>(qs: &[TernaryQuadric<F>]) -> Incidence<F> {
    let other = |reason: &str| Incidence::Other { reason: reason.into() };
    let mut line: Option<[F; 3]> = None;
    let mut singular: Vec<[F; 3]> = Vec::new();
    for q in qs {
        let k = q.as_matrix().kernel_basis();
        match k.len() {
            0 => return other("a member of the family is a smooth conic"),
            1 => singular.push(to3(&k[0])),
            _ => line = Some(cross(&to3(&k[0]), &to3(&k[1]))),
        }
    }
    if line.is_none() {
        for (i, p) in singular.iter().enumerate() {
            if let Some(q) = singular[i + 1..].iter().find(|q| !cross(p, q).iter().all(|c| c.is_zero())) {
                line = Some(cross(p, q));
                break;
            }
        }
    }
    let Some(l0) = line else {
        return other("no common line component");
    };
    // ℓ₀·a has symmetric matrix (l aᵀ + a lᵀ)/2; six equations in a.
    let pairs = [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)];
    let half = F::from_i64(2).inv().expect("characteristic zero");
    let system = ExactMatrix::from_fn(6, 3, |e, k| {
        let (s, t) = pairs[e];
        let mut v = F::zero();
        if k == t {
            v = v.add_ref(&l0[s]);
        }
        if k == s {
            v = v.add_ref(&l0[t]);
        }
        v.mul_ref(&half)
    });
    let mut cofactors = Vec::new();
    for q in qs {
        let rhs: Vec<F> = pairs.iter().map(|&(s, t)| q.matrix[s][t].clone()).collect();
        match solve_linear(&system, &rhs) {
            Some(a) => cofactors.push(a),
            None => return other("a member does not contain the common line"),
        }
    }
    let stacked = ExactMatrix::from_rows(cofactors).expect("rectangular");
    let kernel = stacked.kernel_basis();
    if kernel.len() != 1 {
        return other("cofactors do not meet in a single point");
    }
    let point = normalize(to3(&kernel[0]));
    if dot(&l0, &point).is_zero() {
        return other("the residual point lies on the common line");
    }
    Incidence::LinePlusPoint { line: normalize(l0), point }
}

/// The linear map `m ↦ (a, b, c)` for charts whose planes all satisfy
/// `p01 = p04 = a`, `p02 = p03 = b`, `p12 = p13 = -p24 = -p34 = c`,
/// `p14 = p23 = 0`; `None` if some basis plane breaks these relations.
pub fn abc_coordinates<F: Field>(chart: &IncidenceChart<F>) -> Option<ExactMatrix<F>> {
    let ok = chart.basis.iter().all(|b| {
        let g = |i, j| b.0[plucker_index(i, j)].clone();
        g(0, 1) == g(0, 4) && g(0, 2) == g(0, 3) && g(1, 2) == g(1, 3) && g(2, 4) == -g(1, 3) && g(3, 4) == -g(1, 3) && g(1, 4).is_zero() && g(2, 3).is_zero()
    });
    ok.then(|| {
        ExactMatrix::from_fn(3, 3, |row, s| {
            let (i, j) = [(0, 1), (0, 2), (1, 3)][row];
            chart.basis[s].0[plucker_index(i, j)].clone()
        })
    })
}

/// Whether `conic` is a nonzero multiple of `ab - c²` pulled back along the
/// invertible map `t`.
pub fn is_ab_minus_c2<F: Field>(conic: &TernaryQuadric<F>, t: &ExactMatrix<F>) -> bool {
    if t.rank() != 3 {
        return false;
    }
    let half = F::from_i64(2).inv().expect("characteristic zero");
    let abc = ExactMatrix::from_fn(3, 3, |i, j| match (i, j) {
        (0, 1) | (1, 0) => half.clone(),
        (2, 2) => -F::one(),
        _ => F::zero(),
    });
    let pulled = t.transpose().mul(&abc).and_then(|x| x.mul(t)).expect("3x3");
    let ours = conic.as_matrix();
    let pair = ExactMatrix::from_fn(2, 9, |r, k| if r == 0 { pulled.get(k / 3, k % 3).clone() } else { ours.get(k / 3, k % 3).clone() });
    !conic.is_zero() && pair.rank() == 1
}

/// Planes of the chart at `(a, b, c) = (u², v², uv)`, i.e. on the conic
/// `ab = c²` in the coordinates `t` of [`abc_coordinates`].
pub fn abc_conic_planes<F: Field>(chart: &IncidenceChart<F>, t: &ExactMatrix<F>, params: &[(i64, i64)]) -> Result<Vec<PlaneSpec<F>>, StrataError> {
    let tinv = t.inverse().map_err(|_| StrataError::Invariant("abc coordinates are singular".into()))?;
    params
        .iter()
        .filter(|&&(u, v)| (u, v) != (0, 0))
        .map(|&(u, v)| {
            let abc = [F::from_i64(u * u), F::from_i64(v * v), F::from_i64(u * v)];
            chart.plane(&to3(&tinv.mul_vec(&abc)))
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct HmConic {
    pub k: usize,
    pub j: usize,
    pub report: IncidenceReport<Cyclo5>,
}

/// Incidence analysis of each of the 25 lines `L_{k,j}`.
pub fn hm_conics() -> Result<Vec<HmConic>, StrataError> {
    hm_lines()
        .iter()
        .enumerate()
        .map(|(n, line)| {
            let report = incidence_analysis(line, n as u64);
            match report.classification {
                Incidence::Conic { .. } => Ok(HmConic { k: n / 5, j: n % 5, report }),
                ref other => Err(StrataError::Invariant(format!("L_({},{}) gives {}", n / 5, n % 5, other.label()))),
            }
        })
        .collect()
}

/// `per_conic` planes on each of the 25 conics of jumping planes through the
/// lines `L_{k,j}`: points of `ab = c²` through `L_{0,0}`, moved by a
/// Heisenberg element carrying `L_{0,0}` to `L_{k,j}`.
/// A plane labelled by the line `L_{k,j}` it contains.
pub type LabelledPlane = ((usize, usize), PlaneSpec<Cyclo5>);

pub fn hm_conic_planes(per_conic: usize) -> Result<Vec<LabelledPlane>, StrataError> {
    let l00 = hm_line(0, 0);
    let chart = IncidenceChart::new(&l00);
    let t = abc_coordinates(&chart).ok_or_else(|| StrataError::Invariant("L_(0,0) chart lacks abc coordinates".into()))?;
    let params: Vec<(i64, i64)> = (0..per_conic as i64).map(|s| if s == 0 { (1, 0) } else { (s - per_conic as i64 / 2, 1) }).collect();
    let base = abc_conic_planes(&chart, &t, &params)?;
    let group = all_elements();
    let mut out = Vec::new();
    for (k, j) in (0..25).map(|n| (n / 5, n % 5)) {
        let target = hm_line(k, j);
        let g = group
            .iter()
            .find(|g| g.act_on_line(&l00).same_line(&target))
            .ok_or_else(|| StrataError::Invariant(format!("L_({k},{j}) is not in the orbit of L_(0,0)")))?;
        out.extend(base.iter().map(|p| ((k, j), g.act_on_plane(p))));
    }
    Ok(out)
}

/// Whether two charts span different planes of P⁹ (then their conics differ).
pub fn distinct_incidence_planes<F: Field>(a: &IncidenceChart<F>, b: &IncidenceChart<F>) -> bool {
    ExactMatrix::from_fn(6, 10, |i, k| if i < 3 { a.basis[i].0[k].clone() } else { b.basis[i - 3].0[k].clone() }).rank() > 3
}
