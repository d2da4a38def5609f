use hmplanes::heisenberg::{orbit, trivial_summand_dim};
use hmplanes::hmrestrict::{
    build_m, classify_resolution, find_jumping_lines_in_plane, hm_line, hm_lines, jumping_order, line_order_matrix, random_plane, HmError, LocusKind,
    PlaneSpec, Resolution,
};
use hmplanes::respairs::enumerate_pairs;
use hmplanes::scalar::{primitive_fifth_root, ModP};
use hmplanes::strata::{
    abc_coordinates, hm_conics, incidence_analysis, is_ab_minus_c2, pencil_degree_mod, tangent_dimension, Anchor, Incidence, PencilOutcome, PencilSpec,
    StrataError,
};
use hmplanes::{Cyclo5, Field};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::input::{collect_items, parse_covector_triple, parse_line, parse_plane, CliField};
use crate::report::{self, Output};
use crate::{certify, Cli, CliError, Command, InputArgs};

/// Entry bound for seeded random planes and pencils.
pub const RANDOM_BOUND: i64 = 5;
const MAX_INVARIANT_DEGREE: usize = 40;

pub fn hm_error(e: HmError) -> CliError {
    match e {
        HmError::NotDecomposable(_) | HmError::Dependent | HmError::Exterior(_) => CliError::Validation(e.to_string()),
        HmError::DegenerateParametrization => CliError::Mismatch(e.to_string()),
        HmError::RankOutOfRange(_) | HmError::OrderTooHigh(_) | HmError::Invariant(_) => CliError::Invariant(e.to_string()),
    }
}

pub fn strata_error(e: StrataError) -> CliError {
    match e {
        StrataError::RankMismatch { .. } | StrataError::Dependent => CliError::Validation(e.to_string()),
        StrataError::Invariant(_) => CliError::Invariant(e.to_string()),
        StrataError::Hm(h) => hm_error(h),
    }
}

/// Image of ζ in F_p, or 1 when p has no fifth roots of unity (enough for
/// rational data).
pub fn zeta_image(prime: u64) -> Result<ModP, CliError> {
    primitive_fifth_root(prime).or_else(|_| ModP::new(1, prime)).map_err(|_| CliError::Validation(format!("--prime {prime} is not an odd prime below 2^32")))
}

/// Maps `f` over `items` on `jobs` threads, keeping input order.
pub fn par_map<T: Sync, R: Send>(jobs: usize, items: &[T], f: impl Fn(usize, &T) -> R + Sync + Send) -> Vec<R> {
    if jobs <= 1 {
        return items.iter().enumerate().map(|(i, t)| f(i, t)).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build().expect("thread pool");
    pool.install(|| items.par_iter().enumerate().map(|(i, t)| f(i, t)).collect())
}

fn parse_all<T>(args: &InputArgs, parse: impl Fn(&str) -> Result<T, CliError>) -> Result<Vec<(String, T)>, CliError> {
    collect_items(&args.items, args.input.as_deref())?.into_iter().map(|s| parse(&s).map(|t| (s, t))).collect()
}

fn nonempty<T>(items: Vec<T>, what: &str) -> Result<Vec<T>, CliError> {
    if items.is_empty() {
        return Err(CliError::Validation(format!("no {what} given")));
    }
    Ok(items)
}

fn item_seed(cli: &Cli, i: usize) -> u64 {
    cli.seed.wrapping_add(i as u64)
}

fn progress(command: &str, i: usize, n: usize, label: &str) {
    eprintln!("{command}: [{}/{n}] {label}", i + 1);
}

pub fn run<F: CliField>(cli: &Cli) -> Result<Output, CliError> {
    let out = |command: &str, field: &str, results: Vec<Value>| Output::new(command, field, cli.seed, cli.prime, results);
    match &cli.command {
        Command::EnumeratePairs { t_max } => enumerate(cli, *t_max),
        Command::Classify { planes, random } => classify::<F>(cli, planes, *random),
        Command::LineOrder { lines } => {
            let lines = nonempty(parse_all(lines, parse_line::<F>)?, "lines")?;
            let mut rows = Vec::new();
            let results = lines
                .iter()
                .map(|(label, l)| {
                    let order = jumping_order(l).map_err(hm_error)?;
                    let kernel_dim = 6 - line_order_matrix(l).rank();
                    rows.push(vec![label.clone(), order.to_string(), kernel_dim.to_string()]);
                    Ok(json!({
                        "input": label,
                        "covectors": report::line(l),
                        "order": order,
                        "kernel_dim": kernel_dim,
                        "splitting": [order as i64, -1 - order as i64],
                    }))
                })
                .collect::<Result<Vec<_>, CliError>>()?;
            Ok(out("line-order", F::NAME, results).with_table(&["input", "order", "kernel_dim"], rows))
        }
        Command::JumpingLinesInPlane { planes, min_order } => {
            let planes = nonempty(parse_all(planes, parse_plane::<F>)?, "planes")?;
            let n = planes.len();
            let results = par_map(cli.jobs, &planes, |i, (label, p)| {
                progress("jumping-lines-in-plane", i, n, label);
                let found = find_jumping_lines_in_plane(p, *min_order as usize, item_seed(cli, i)).map_err(hm_error)?;
                let locus = match found.locus {
                    LocusKind::Finite { count_with_multiplicity, distinct } => {
                        json!({ "kind": "finite", "count_with_multiplicity": count_with_multiplicity, "distinct": distinct })
                    }
                    LocusKind::PositiveDimensional => json!({ "kind": "positive_dimensional" }),
                };
                Ok(json!({
                    "input": label,
                    "plane": report::plane(p),
                    "min_order": found.min_order,
                    "complement": found.complement.iter().map(report::covector).collect::<Vec<_>>(),
                    "locus": locus,
                    "lines": found.lines.iter().map(report::found_line).collect::<Vec<_>>(),
                    "charts_tried": found.charts_tried,
                }))
            });
            Ok(out("jumping-lines-in-plane", F::NAME, results.into_iter().collect::<Result<_, CliError>>()?))
        }
        Command::TangentDim { planes, rank, anchor_seed } => {
            let planes = nonempty(parse_all(planes, parse_plane::<F>)?, "planes")?;
            let anchor = anchor_seed.map_or(Anchor::Pivot, Anchor::Shuffled);
            let n = planes.len();
            let results = par_map(cli.jobs, &planes, |i, (label, p)| {
                progress("tangent-dim", i, n, label);
                let r = rank.unwrap_or_else(|| build_m(p).rank());
                let t = tangent_dimension(p, r, anchor).map_err(strata_error)?;
                Ok(json!({
                    "input": label,
                    "plane": report::plane(p),
                    "anchor": match anchor {
                        Anchor::Pivot => json!({ "kind": "pivot" }),
                        Anchor::Shuffled(s) => json!({ "kind": "shuffled", "seed": s }),
                    },
                    "rank": t.rank,
                    "anchor_rows": t.anchor_rows,
                    "anchor_cols": t.anchor_cols,
                    "bordered_minors": t.bordered_minors,
                    "jacobian_rank": t.jacobian_rank,
                    "dimension": t.dimension,
                }))
            });
            Ok(out("tangent-dim", F::NAME, results.into_iter().collect::<Result<_, CliError>>()?))
        }
        Command::PencilDegree { pencils, random } => pencil::<F>(cli, pencils, *random),
        Command::Incidence { lines } => {
            let lines = nonempty(parse_all(lines, parse_line::<F>)?, "lines")?;
            let n = lines.len();
            let results = par_map(cli.jobs, &lines, |i, (label, l)| {
                progress("incidence", i, n, label);
                incidence_json(label, l, item_seed(cli, i))
            });
            Ok(out("incidence", F::NAME, results))
        }
        Command::HmLines => {
            let l00_orbit = orbit(&hm_line(0, 0));
            let mut rows = Vec::new();
            let results = hm_lines()
                .iter()
                .enumerate()
                .map(|(n, l)| {
                    let (k, j) = (n / 5, n % 5);
                    let order = jumping_order(l).map_err(hm_error)?;
                    let in_orbit = l00_orbit.iter().any(|o| o.same_line(l));
                    rows.push(vec![k.to_string(), j.to_string(), order.to_string(), in_orbit.to_string()]);
                    Ok(json!({ "k": k, "j": j, "covectors": report::line(l), "order": order, "in_orbit": in_orbit }))
                })
                .collect::<Result<Vec<_>, CliError>>()?;
            Ok(out("hm-lines", Cyclo5::NAME, results).with_table(&["k", "j", "order", "in_orbit"], rows))
        }
        Command::HmConics => {
            let conics = hm_conics().map_err(strata_error)?;
            let results = conics
                .iter()
                .map(|c| {
                    let Incidence::Conic { conic } = &c.report.classification else { unreachable!("hm_conics only returns conics") };
                    json!({
                        "k": c.k,
                        "j": c.j,
                        "chart": c.report.chart.basis.iter().map(report::plucker).collect::<Vec<_>>(),
                        "conic": report::scalars(&conic.coefficients()),
                        "span_dim": c.report.span_dim,
                    })
                })
                .collect();
            Ok(out("hm-conics", Cyclo5::NAME, results))
        }
        Command::Invariants { max_degree } => {
            if !(1..=MAX_INVARIANT_DEGREE).contains(max_degree) {
                return Err(CliError::Validation(format!("--max-degree must be in 1..={MAX_INVARIANT_DEGREE}")));
            }
            let dims = (1..=*max_degree).map(|i| trivial_summand_dim(i).map_err(|e| CliError::Invariant(e.to_string()))).collect::<Result<Vec<_>, _>>()?;
            let rows = dims.iter().enumerate().map(|(i, d)| vec![(i + 1).to_string(), d.to_string()]).collect();
            let results = dims.iter().enumerate().map(|(i, d)| json!({ "degree": i + 1, "dim": d })).collect();
            Ok(out("invariants", Cyclo5::NAME, results).with_table(&["degree", "dim"], rows))
        }
        Command::Certify { kind } => certify::run(cli, *kind),
        Command::HelpInput => unreachable!("handled in main"),
    }
}

fn enumerate(cli: &Cli, t_max: i64) -> Result<Output, CliError> {
    if !(0..=50).contains(&t_max) {
        return Err(CliError::Validation("--t-max must be in 0..=50".into()));
    }
    let pairs = enumerate_pairs();
    let mut header: Vec<String> = ["pair", "k", "c1", "c2", "stable"].map(String::from).to_vec();
    header.extend((0..=t_max).map(|t| format!("h0_{t}")));
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    let rows = pairs
        .iter()
        .map(|p| {
            let mut r = vec![p.to_string(), p.k().to_string(), p.c1().to_string(), p.c2().to_string(), p.is_stable().to_string()];
            r.extend(p.cohomology_table(t_max).iter().map(i64::to_string));
            r
        })
        .collect();
    let results = pairs
        .iter()
        .map(|p| {
            json!({
                "pair": p.to_string(),
                "a": p.a,
                "b": p.b,
                "k": p.k(),
                "c1": p.c1(),
                "c2": p.c2(),
                "stable": p.is_stable(),
                "h0": p.cohomology_table(t_max),
            })
        })
        .collect();
    Ok(Output::new("enumerate-pairs", "Q", cli.seed, cli.prime, results).with_table(&header, rows))
}

struct Classified {
    json: Value,
    row: Vec<String>,
    unresolved: Option<String>,
}

fn classify_one<F: CliField>(label: &str, p: &PlaneSpec<F>, seed: u64, zeta: &ModP) -> Result<Classified, CliError> {
    let r = classify_resolution(p, seed).map_err(hm_error)?;
    let modular = build_m(p).rank_mod_p(zeta).ok();
    let (resolution, unresolved) = match &r.resolution {
        Resolution::Resolved(pair) => {
            if pair.h0(1) != r.h0_twist1 as i64 {
                return Err(CliError::Invariant(format!("{label}: h0(E(1)) of {pair} is {} but 15 - rank = {}", pair.h0(1), r.h0_twist1)));
            }
            (Some(pair.to_string()), None)
        }
        Resolution::Unresolved(why) => (None, Some(why.clone())),
    };
    let row = vec![
        label.to_string(),
        r.rank.to_string(),
        r.jumping.to_string(),
        r.h0_twist1.to_string(),
        resolution.clone().unwrap_or_default(),
        r.witness_count.map(|c| c.to_string()).unwrap_or_default(),
    ];
    let json = json!({
        "input": label,
        "plane": report::plane(p),
        "rank": r.rank,
        "rank_mod_p": modular.map(|m| json!({ "prime": zeta.modulus(), "rank": m, "agrees": m == r.rank })),
        "jumping": r.jumping,
        "h0_twist1": r.h0_twist1,
        "candidates": r.candidates.iter().map(ToString::to_string).collect::<Vec<_>>(),
        "resolution": resolution,
        "unresolved_reason": unresolved,
        "searched_order": r.searched_order,
        "witness_count": r.witness_count,
        "witnesses": r.witnesses.iter().map(report::found_line).collect::<Vec<_>>(),
        "hm_line": r.hm_line.map(|(k, j)| [k, j]),
    });
    Ok(Classified { json, row, unresolved: unresolved.map(|w| format!("{label}: {w}")) })
}

fn classify<F: CliField>(cli: &Cli, args: &InputArgs, random: usize) -> Result<Output, CliError> {
    let mut planes = parse_all(args, parse_plane::<F>)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
    planes.extend((0..random).map(|i| (format!("random:{i}"), random_plane::<F>(&mut rng, RANDOM_BOUND))));
    let planes = nonempty(planes, "planes")?;
    let zeta = zeta_image(cli.prime)?;
    let n = planes.len();
    let done = par_map(cli.jobs, &planes, |i, (label, p)| {
        progress("classify", i, n, label);
        classify_one(label, p, item_seed(cli, i), &zeta)
    })
    .into_iter()
    .collect::<Result<Vec<_>, CliError>>()?;
    let unresolved: Vec<String> = done.iter().filter_map(|c| c.unresolved.clone()).collect();
    let failure = (!unresolved.is_empty()).then(|| CliError::Mismatch(format!("unresolved classification: {}", unresolved.join("; "))));
    let rows = done.iter().map(|c| c.row.clone()).collect();
    let results = done.into_iter().map(|c| c.json).collect();
    Ok(Output::new("classify", F::NAME, cli.seed, cli.prime, results)
        .with_table(&["input", "rank", "jumping", "h0_twist1", "resolution", "witness_count"], rows)
        .failing(failure))
}

pub fn pencil_json<F: CliField>(label: &str, pencil: &PencilSpec<F>, seed: u64, prime: u64) -> Result<(Value, Option<usize>), CliError> {
    let r = pencil_degree_mod(pencil, seed, prime).map_err(strata_error)?;
    let (outcome, degree) = match &r.outcome {
        PencilOutcome::Certified { degree } => (json!({ "status": "certified", "degree": degree }), Some(*degree)),
        PencilOutcome::Degenerate { reason } => (json!({ "status": "degenerate", "reason": reason }), None),
    };
    let json = json!({
        "input": label,
        "covectors": pencil.covectors().iter().map(|c| report::covector(c)).collect::<Vec<_>>(),
        "outcome": outcome,
        "certificate": r.certificate.as_ref().map(|c| json!({ "degree": c.degree, "coefficients": report::scalars(c.poly.coeffs()) })),
        "combinations_used": r.combinations_used,
        "divisibility_checks": r.divisibility_checks,
        "modular_degree": r.modular_degree,
        "field_roots": r.field_roots.iter().map(|((s, t), rank)| json!({ "s": s.to_string(), "t": t.to_string(), "rank": rank })).collect::<Vec<_>>(),
    });
    Ok((json, degree))
}

fn pencil<F: CliField>(cli: &Cli, args: &InputArgs, random: Option<usize>) -> Result<Output, CliError> {
    let mut pencils = parse_all(args, |s| {
        let [x, y, z] = parse_covector_triple::<F>(s)?;
        PencilSpec::new(x, y, z).map_err(strata_error)
    })?;
    let extra = random.unwrap_or(if pencils.is_empty() { 1 } else { 0 });
    let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
    pencils.extend((0..extra).map(|i| (format!("random:{i}"), PencilSpec::random(&mut rng, RANDOM_BOUND))));
    let pencils = nonempty(pencils, "pencils")?;
    zeta_image(cli.prime)?;
    let n = pencils.len();
    let results = par_map(cli.jobs, &pencils, |i, (label, p)| {
        progress("pencil-degree", i, n, label);
        pencil_json(label, p, item_seed(cli, i), cli.prime).map(|(j, _)| j)
    });
    Ok(Output::new("pencil-degree", F::NAME, cli.seed, cli.prime, results.into_iter().collect::<Result<_, CliError>>()?))
}

pub fn incidence_json<F: Field>(label: &str, l: &hmplanes::hmrestrict::LineSpec<F>, seed: u64) -> Value {
    let r = incidence_analysis(l, seed);
    let classification = match &r.classification {
        Incidence::Conic { conic } => json!({ "kind": "conic", "conic": report::scalars(&conic.coefficients()) }),
        Incidence::FinitePoints { count_with_multiplicity, distinct, points } => json!({
            "kind": "finite_points",
            "count_with_multiplicity": count_with_multiplicity,
            "distinct": distinct,
            "points": points.iter().map(|p| report::scalars(p)).collect::<Vec<_>>(),
        }),
        Incidence::LinePlusPoint { line, point } => json!({ "kind": "line_plus_point", "line": report::scalars(line), "point": report::scalars(point) }),
        Incidence::Other { reason } => json!({ "kind": "other", "reason": reason }),
    };
    let abc_conic = match (&r.classification, abc_coordinates(&r.chart)) {
        (Incidence::Conic { conic }, Some(t)) => Some(is_ab_minus_c2(conic, &t)),
        _ => None,
    };
    json!({
        "input": label,
        "covectors": report::line(l),
        "order": jumping_order(l).ok(),
        "chart": r.chart.basis.iter().map(report::plucker).collect::<Vec<_>>(),
        "quadrics": r.quadrics.iter().map(|q| report::scalars(&q.coefficients())).collect::<Vec<_>>(),
        "span_dim": r.span_dim,
        "classification": classification,
        "abc_conic": abc_conic,
    })
}
