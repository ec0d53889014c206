//! Discrete linear Chebyshev approximation as a max-plus problem.
//!
//! Minimizing `max_i |Σ_j X_ij θ_j − Y_i|` over a box is the max-plus
//! minimization of `⊕_i (Y_i θ^{−X_i} ⊕ Y_i^{−1} θ^{X_i})`, one pair of
//! monomials per observation, with `x_j = θ_j` and the box unchanged.

use serde::Deserialize;

use crate::eliminate::{solve, Solution, Solved, SolverOptions, Status};
use crate::error::{Error, Result};
use crate::polynomial::{BoxConstraint, Monomial, Polynomial, Problem};
use crate::rational::Rational;
use crate::semifield::{ExactSemifield, Value};
use crate::univariate::Interval;

#[derive(Debug, Clone, PartialEq)]
pub struct ChebDataset {
    x: Vec<Vec<Rational>>,
    y: Vec<Rational>,
    lower: Vec<Rational>,
    upper: Vec<Rational>,
}

impl ChebDataset {
    pub fn new(
        x: Vec<Vec<Rational>>,
        y: Vec<Rational>,
        lower: Vec<Rational>,
        upper: Vec<Rational>,
    ) -> Result<Self> {
        let k = x.len();
        if k == 0 {
            return Err(Error::validation(
                "data",
                "at least one observation is required",
            ));
        }
        if y.len() != k {
            return Err(Error::validation(
                "data.y",
                format!("{} responses for {k} observations", y.len()),
            ));
        }
        let n = x[0].len();
        if n == 0 {
            return Err(Error::validation(
                "data.x",
                "at least one parameter is required",
            ));
        }
        if let Some(i) = x.iter().position(|row| row.len() != n) {
            return Err(Error::validation(
                format!("data.x[{i}]"),
                format!("expected {n} columns, found {}", x[i].len()),
            ));
        }
        if lower.len() != n || upper.len() != n {
            return Err(Error::validation(
                "bounds",
                format!(
                    "{n} parameters but {} lower and {} upper bounds",
                    lower.len(),
                    upper.len()
                ),
            ));
        }
        if let Some(j) = (0..n).find(|&j| lower[j] > upper[j]) {
            return Err(Error::validation(
                format!("bounds.lower[{j}]"),
                format!("lower bound {} exceeds upper bound {}", lower[j], upper[j]),
            ));
        }
        Ok(ChebDataset { x, y, lower, upper })
    }

    pub fn observations(&self) -> usize {
        self.x.len()
    }

    pub fn parameters(&self) -> usize {
        self.x[0].len()
    }

    pub fn x(&self) -> &[Vec<Rational>] {
        &self.x
    }

    pub fn y(&self) -> &[Rational] {
        &self.y
    }

    /// `max_i |Σ_j X_ij θ_j − Y_i|` in ordinary arithmetic.
    pub fn max_abs_residual(&self, theta: &[Rational]) -> Rational {
        self.x
            .iter()
            .zip(&self.y)
            .map(|(row, yi)| {
                let fit = row
                    .iter()
                    .zip(theta)
                    .fold(Rational::zero(), |acc, (a, t)| acc + a * t);
                (fit - yi).abs()
            })
            .max()
            .expect("dataset has observations")
    }
}

/// The `2K`-term objective before canonicalization: rows `1…K` are
/// `Y_i θ^{−X_i}`, rows `K+1…2K` are `(−Y_i) θ^{X_i}`.
pub fn tropical_polynomial(d: &ChebDataset) -> Polynomial<Rational> {
    let down = d.x.iter().zip(&d.y).map(|(row, yi)| {
        Monomial::new(Value::Finite(yi.clone()), row.iter().map(|v| -v).collect())
    });
    let up =
        d.x.iter()
            .zip(&d.y)
            .map(|(row, yi)| Monomial::new(Value::Finite(-yi), row.clone()));
    Polynomial::new(
        ExactSemifield::max_plus(),
        d.parameters(),
        down.chain(up).collect(),
    )
    .expect("dataset rows have uniform width")
}

pub fn to_tropical(d: &ChebDataset) -> Result<Problem<Rational>> {
    let sf = ExactSemifield::max_plus();
    let finite = |v: &[Rational]| v.iter().cloned().map(Value::Finite).collect();
    let bounds = BoxConstraint::new(&sf, finite(&d.lower), finite(&d.upper))?;
    Problem::new(tropical_polynomial(d), bounds)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChebResult {
    pub error: Rational,
    pub theta: Vec<Rational>,
    pub intervals: Vec<(Rational, Rational)>,
    /// The residual recomputed in ordinary arithmetic at `theta`; always
    /// equal to `error` in a returned result.
    pub max_abs_residual: Rational,
}

/// Reads the solver output back as a fit, and certifies it by recomputing the
/// largest residual in ordinary arithmetic.
pub fn from_tropical(d: &ChebDataset, sol: &Solution<Rational>) -> Result<ChebResult> {
    if sol.status != Status::Attained {
        return Err(Error::Internal(
            "Chebyshev encodings always attain their minimum".into(),
        ));
    }
    let finite = |v: &Value<Rational>| {
        v.finite()
            .cloned()
            .ok_or_else(|| Error::Internal("zero element in a Chebyshev solution".into()))
    };
    let error = finite(&sol.mu)?;
    let theta = sol.point.iter().map(finite).collect::<Result<Vec<_>>>()?;
    let intervals = sol
        .intervals
        .iter()
        .map(|Interval { lower, upper }| Ok((finite(lower)?, finite(upper)?)))
        .collect::<Result<Vec<_>>>()?;
    let residual = d.max_abs_residual(&theta);
    if residual != error {
        return Err(Error::Internal(format!(
            "residual certificate failed: max |Xθ − Y| = {residual}, reported error {error}"
        )));
    }
    Ok(ChebResult {
        error,
        theta,
        intervals,
        max_abs_residual: residual,
    })
}

pub fn solve_chebyshev(
    d: &ChebDataset,
    options: &SolverOptions,
) -> Result<(ChebResult, Solved<Rational>)> {
    let prob = to_tropical(d)?;
    let solved = solve(&prob, options)?;
    Ok((from_tropical(d, &solved.solution)?, solved))
}

/// Reads observations from CSV: `N` columns of `X` followed by `Y`.
///
/// Cells are rationals (`p/q`) or decimals. Lines starting with `#` are
/// skipped, and a first row that does not parse as numbers is taken as a
/// header.
pub fn parse_csv(text: &[u8]) -> Result<(Vec<Vec<Rational>>, Vec<Rational>)> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text);
    let mut x = Vec::new();
    let mut y = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record =
            record.map_err(|e| Error::validation(format!("csv row {line}"), e.to_string()))?;
        if record.iter().all(str::is_empty) {
            continue;
        }
        let parsed: std::result::Result<Vec<Rational>, _> =
            record.iter().map(str::parse::<Rational>).collect();
        let mut row = match parsed {
            Ok(row) => row,
            Err(_) if line == 0 => continue,
            Err(e) => return Err(Error::validation(format!("csv row {line}"), e.to_string())),
        };
        if row.len() < 2 {
            return Err(Error::validation(
                format!("csv row {line}"),
                "need at least one X column and the Y column",
            ));
        }
        y.push(row.pop().expect("checked length"));
        x.push(row);
    }
    Ok((x, y))
}

/// Parses a comma-separated list of rationals such as `-1/4,-1/4,0`.
pub fn parse_list(text: &str, what: &str) -> Result<Vec<Rational>> {
    text.split(',')
        .enumerate()
        .map(|(j, s)| {
            s.trim()
                .parse()
                .map_err(|e: crate::rational::ParseRationalError| {
                    Error::validation(format!("{what}[{j}]"), e.to_string())
                })
        })
        .collect()
}

#[derive(Deserialize)]
struct BoundsDoc {
    lower: Vec<Rational>,
    upper: Vec<Rational>,
}

/// Reads `{"lower": [...], "upper": [...]}`.
pub fn parse_bounds_json(text: &[u8]) -> Result<(Vec<Rational>, Vec<Rational>)> {
    let doc: BoundsDoc =
        serde_json::from_slice(text).map_err(|e| Error::validation("bounds", e.to_string()))?;
    Ok((doc.lower, doc.upper))
}
