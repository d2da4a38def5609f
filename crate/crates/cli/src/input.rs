//! Text input for planes, lines and pencils.
//!
//! ```text
//! item      := group (";" group)*
//! group     := [label ":"] scalar ("," scalar)*
//! plane     := two groups of 5 covector entries     e.g. "x*: 1,0,0,0,0; y*: 0,1,0,0,0"
//!            | one group of 10 Plücker coordinates  e.g. "p: 1,0,0,0,0,0,0,0,0,0"
//! line      := three groups of 5 covector entries
//!            | "L(k,j)"                             the line L_{k,j}
//! pencil    := three groups of 5: x*; y*; z*        planes {x* = s y* + t z* = 0}
//! ```
//!
//! Labels are ignored. Scalars use the literal grammar of the selected
//! field: `n` or `n/d` over Q, polynomials in `z` such as `1+2*z^3` over
//! Q(ζ₅). Plücker coordinates are in lexicographic order
//! `p01 p02 p03 p04 p12 p13 p14 p23 p24 p34`; a plane `{x* = y* = 0}` has
//! `p_ij = x_i y_j - x_j y_i`.

use std::fs;
use std::path::Path;

use hmplanes::exterior::{Covector, PluckerPoint, DIM};
use hmplanes::hmrestrict::{hm_line, HmError, LineSpec, PlaneSpec};
use hmplanes::scalar::{parse_cyclo, parse_rational, EmbedModP};
use hmplanes::{Cyclo5, Field, Rational};

use crate::CliError;

/// The fields selectable on the command line.
pub trait CliField: Field + EmbedModP {
    fn parse(literal: &str) -> Result<Self, String>;

    fn from_cyclo(c: &Cyclo5) -> Option<Self>;
}

impl CliField for Rational {
    fn parse(literal: &str) -> Result<Self, String> {
        parse_rational(literal).map_err(|e| e.to_string())
    }

    fn from_cyclo(c: &Cyclo5) -> Option<Self> {
        c.is_rational().then(|| c.coeffs()[0].clone())
    }
}

impl CliField for Cyclo5 {
    fn parse(literal: &str) -> Result<Self, String> {
        parse_cyclo(literal).map_err(|e| e.to_string())
    }

    fn from_cyclo(c: &Cyclo5) -> Option<Self> {
        Some(c.clone())
    }
}

/// Raw items from positional arguments followed by the lines of `file`.
pub fn collect_items(inline: &[String], file: Option<&Path>) -> Result<Vec<String>, CliError> {
    let mut items: Vec<String> = inline.to_vec();
    if let Some(path) = file {
        let text = fs::read_to_string(path).map_err(|e| CliError::Validation(format!("cannot read {}: {e}", path.display())))?;
        items.extend(text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')).map(String::from));
    }
    Ok(items)
}

fn groups<F: CliField>(item: &str) -> Result<Vec<Vec<F>>, CliError> {
    item.split(';')
        .map(|g| {
            let body = g.split_once(':').map_or(g, |(_, rest)| rest);
            body.split(',').map(|s| F::parse(s.trim()).map_err(|e| CliError::Validation(format!("in {item:?}: {e}")))).collect()
        })
        .collect()
}

fn covector<F: Field>(v: Vec<F>) -> Covector<F> {
    let mut it = v.into_iter();
    Covector(std::array::from_fn(|_| it.next().expect("length checked")))
}

fn shape_error(item: &str, what: &str, lens: &[usize]) -> CliError {
    CliError::Validation(format!("{item:?} is not a {what}: got groups of sizes {lens:?}"))
}

fn hm_error(item: &str, e: HmError) -> CliError {
    CliError::Validation(format!("{item:?}: {e}"))
}

pub fn parse_plane<F: CliField>(item: &str) -> Result<PlaneSpec<F>, CliError> {
    let gs = groups::<F>(item)?;
    let lens: Vec<usize> = gs.iter().map(Vec::len).collect();
    match lens.as_slice() {
        [DIM, DIM] => {
            let mut it = gs.into_iter();
            let (x, y) = (it.next().unwrap(), it.next().unwrap());
            PlaneSpec::from_covectors(covector(x), covector(y)).map_err(|e| hm_error(item, e))
        }
        [10] => {
            let mut it = gs.into_iter().next().unwrap().into_iter();
            let p = PluckerPoint(std::array::from_fn(|_| it.next().unwrap()));
            PlaneSpec::from_plucker(p).map_err(|e| hm_error(item, e))
        }
        _ => Err(shape_error(item, "plane (two covectors or ten Plücker coordinates)", &lens)),
    }
}

fn parse_hm_label(item: &str) -> Option<(usize, usize)> {
    let inner = item.trim().strip_prefix("L(")?.strip_suffix(')')?;
    let (k, j) = inner.split_once(',')?;
    let (k, j) = (k.trim().parse().ok()?, j.trim().parse().ok()?);
    (k < 5 && j < 5).then_some((k, j))
}

pub fn parse_line<F: CliField>(item: &str) -> Result<LineSpec<F>, CliError> {
    if let Some((k, j)) = parse_hm_label(item) {
        let line = hm_line(k, j);
        let cs = line.covectors();
        if cs.iter().all(|c| c.0.iter().all(|x| F::from_cyclo(x).is_some())) {
            return Ok(line.map(|x| F::from_cyclo(x).expect("checked")));
        }
        return Err(CliError::Validation(format!("{item:?} is not defined over {}; use --field cyclo5", F::NAME)));
    }
    let gs = groups::<F>(item)?;
    let lens: Vec<usize> = gs.iter().map(Vec::len).collect();
    if lens != [DIM, DIM, DIM] {
        return Err(shape_error(item, "line (three covectors or L(k,j))", &lens));
    }
    let mut it = gs.into_iter().map(covector);
    LineSpec::new(std::array::from_fn(|_| it.next().unwrap())).map_err(|e| hm_error(item, e))
}

pub fn parse_covector_triple<F: CliField>(item: &str) -> Result<[Covector<F>; 3], CliError> {
    let gs = groups::<F>(item)?;
    let lens: Vec<usize> = gs.iter().map(Vec::len).collect();
    if lens != [DIM, DIM, DIM] {
        return Err(shape_error(item, "pencil (three covectors)", &lens));
    }
    let mut it = gs.into_iter().map(covector);
    Ok(std::array::from_fn(|_| it.next().unwrap()))
}
