//! Backward elimination of variables and forward substitution.
//!
//! Eliminating `x_n` from `min ⊕ a_i x^{p_i}` replaces the objective by a
//! polynomial in `x_1 … x_{n−1}` with one row per falling/rising pair in
//! `x_n` plus one box row per input row, and leaves behind a two-sided bound
//! on `x_n` in terms of the remaining variables and the optimum μ. After all
//! `N` variables are gone the objective is the constant μ; substituting
//! values for `x_1, x_2, …` into the stored bounds then yields a minimizer.

mod document;

pub use document::{format_value, solution_document, stats_document};

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::polynomial::{monomial_value, BoxConstraint, Polynomial, Problem};
use crate::prune::{self, PruneLevel, PruneReport};
use crate::rational::Rational;
use crate::semifield::{Carrier, Mode, Semifield, Value};
use crate::univariate::{
    box_coefficient, close_interval, lower_coefficient, pair_coefficient, upper_coefficient,
    Interval,
};

pub const DEFAULT_MAX_MONOMIALS: usize = 5_000_000;

/// Where a stage row came from, by row index in the previous stage.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Origin {
    Input(usize),
    /// Falling row `i` balanced against rising row `k`.
    Pair(usize, usize),
    Box(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct StageRow<C> {
    pub coeff: Value<C>,
    pub exponents: Vec<Rational>,
    pub origin: Origin,
}

/// The objective after eliminating every variable above `level`.
#[derive(Debug, Clone, PartialEq)]
pub struct ObjectiveStage<C> {
    pub level: usize,
    pub rows: Vec<StageRow<C>>,
}

impl<C: Carrier> ObjectiveStage<C> {
    pub fn from_problem(prob: &Problem<C>) -> Self {
        ObjectiveStage {
            level: prob.arity(),
            rows: prob
                .polynomial()
                .monomials()
                .iter()
                .enumerate()
                .map(|(i, m)| StageRow {
                    coeff: m.coeff.clone(),
                    exponents: m.exponents.clone(),
                    origin: Origin::Input(i),
                })
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn evaluate(&self, sf: &Semifield<C>, x: &[Value<C>]) -> Result<Value<C>> {
        let mut acc = Value::Zero;
        for r in &self.rows {
            acc = sf.oplus(&acc, &monomial_value(sf, &r.coeff, &r.exponents, x)?);
        }
        Ok(acc)
    }

    pub fn to_polynomial(&self, sf: Semifield<C>) -> Result<Polynomial<C>> {
        Polynomial::new(
            sf,
            self.level.max(1),
            self.rows
                .iter()
                .map(|r| {
                    let mut e = r.exponents.clone();
                    e.resize(self.level.max(1), Rational::zero());
                    crate::polynomial::Monomial::new(r.coeff.clone(), e)
                })
                .collect(),
        )
    }
}

/// Bounds on `x_level` in terms of `x_1 … x_{level−1}`:
/// `⊕ c_i Π x_j^{r_ij} ⊕ g ≤ x_level ≤ (⊕ d_i Π x_j^{s_ij} ⊕ h⁻¹)⁻¹`.
///
/// Entries are aligned with the rows of the objective stage at `level`;
/// `c_i` is nonzero exactly for falling rows and `d_i` exactly for rising rows.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintStage<C> {
    pub level: usize,
    pub lower_coeffs: Vec<Value<C>>,
    pub lower_exponents: Vec<Vec<Rational>>,
    pub upper_coeffs: Vec<Value<C>>,
    pub upper_exponents: Vec<Vec<Rational>>,
}

impl<C: Carrier> ConstraintStage<C> {
    /// Numeric interval for `x_level` given values of the earlier variables.
    pub fn interval_at(
        &self,
        sf: &Semifield<C>,
        prefix: &[Value<C>],
        g: &Value<C>,
        h: &Value<C>,
    ) -> Result<Interval<C>> {
        let eval = |coeffs: &[Value<C>], exps: &[Vec<Rational>]| -> Result<Vec<Value<C>>> {
            coeffs
                .iter()
                .zip(exps)
                .filter(|(c, _)| !c.is_zero())
                .map(|(c, e)| monomial_value(sf, c, e, prefix))
                .collect()
        };
        let lows = eval(&self.lower_coeffs, &self.lower_exponents)?;
        let highs = eval(&self.upper_coeffs, &self.upper_exponents)?;
        close_interval(sf, &lows, &highs, g, h)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Pick {
    #[default]
    Lower,
    Midpoint,
    Upper,
}

impl Pick {
    pub const ALL: [Pick; 3] = [Pick::Lower, Pick::Midpoint, Pick::Upper];

    pub fn name(self) -> &'static str {
        match self {
            Pick::Lower => "lower",
            Pick::Midpoint => "midpoint",
            Pick::Upper => "upper",
        }
    }
}

impl std::str::FromStr for Pick {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Pick::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::validation("pick", format!("unknown pick strategy '{s}'")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolverOptions {
    pub prune: PruneLevel,
    pub pick: Pick,
    /// Largest number of nonzero rows any stage may hold.
    pub max_monomials: usize,
    /// Keep every objective stage in the returned trace.
    pub retain_trace: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            prune: PruneLevel::Dominance,
            pick: Pick::Lower,
            max_monomials: DEFAULT_MAX_MONOMIALS,
            retain_trace: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StageStats {
    pub level: usize,
    /// Row count of the formal layout, `M² + M` for the previous stage's `M`.
    pub raw_count: usize,
    /// Rows with a nonzero coefficient.
    pub nonzero_count: usize,
    pub pruned_count: usize,
    pub elapsed_ms: f64,
    pub prune: PruneReport,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EliminationTrace<C> {
    /// `objectives[n]` is the stage at level `n`. Empty unless retained;
    /// see [`SolverOptions::retain_trace`].
    pub objectives: Vec<ObjectiveStage<C>>,
    /// `constraints[n − 1]` bounds `x_n`. Empty when μ is 𝟘.
    pub constraints: Vec<ConstraintStage<C>>,
    pub mu: Value<C>,
    /// One entry per level, from `N` down to 0.
    pub stats: Vec<StageStats>,
}

impl<C> EliminationTrace<C> {
    pub fn constraint(&self, level: usize) -> Option<&ConstraintStage<C>> {
        level.checked_sub(1).and_then(|i| self.constraints.get(i))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Attained,
    InfimumNotAttained,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Solution<C> {
    pub mu: Value<C>,
    pub point: Vec<Value<C>>,
    /// The interval each coordinate was chosen from.
    pub intervals: Vec<Interval<C>>,
    pub status: Status,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Solved<C> {
    pub solution: Solution<C>,
    pub trace: EliminationTrace<C>,
}

fn check_level<C>(stage: &ObjectiveStage<C>) -> Result<usize> {
    if stage.level == 0 {
        return Err(Error::Usage("cannot eliminate from a level-0 stage".into()));
    }
    Ok(stage.level - 1)
}

/// Rows produced by eliminating the last variable, before any pruning beyond
/// skipping 𝟘 coefficients. Pair rows come first in `(i, k)` order, then
/// box rows in `i` order.
pub(crate) fn expand_step<C: Carrier>(
    sf: &Semifield<C>,
    stage: &ObjectiveStage<C>,
    g: &Value<C>,
    h: &Value<C>,
    max_rows: usize,
) -> Result<ObjectiveStage<C>> {
    let last = check_level(stage)?;
    if h.is_zero() || !sf.leq(g, h) {
        return Err(Error::Usage(format!(
            "invalid bounds for x_{}: [{}, {}]",
            stage.level,
            sf.format(g),
            sf.format(h)
        )));
    }
    let rows = &stage.rows;
    let falling: Vec<usize> = (0..rows.len())
        .filter(|&i| !rows[i].coeff.is_zero() && rows[i].exponents[last].is_negative())
        .collect();
    let rising: Vec<usize> = (0..rows.len())
        .filter(|&i| !rows[i].coeff.is_zero() && rows[i].exponents[last].is_positive())
        .collect();
    let boxed = rows
        .iter()
        .filter(|r| !r.coeff.is_zero() && !(g.is_zero() && r.exponents[last].is_positive()))
        .count();
    let count = (falling.len() as u128) * (rising.len() as u128) + boxed as u128;
    if count > max_rows as u128 {
        return Err(Error::Capacity {
            stage: format!("level {last} (eliminating x_{})", stage.level),
            count,
            cap: max_rows as u128,
        });
    }

    let pair_rows: Vec<Vec<StageRow<C>>> = falling
        .par_iter()
        .map(|&i| {
            let ri = &rows[i];
            let p_in = &ri.exponents[last];
            rising
                .iter()
                .map(|&k| {
                    let rk = &rows[k];
                    let p_kn = &rk.exponents[last];
                    let denom = p_in - p_kn;
                    let exponents = (0..last)
                        .map(|j| {
                            let num = &(&ri.exponents[j] * p_kn) - &(&rk.exponents[j] * p_in);
                            -(num / &denom)
                        })
                        .collect();
                    let coeff = pair_coefficient(sf, &ri.coeff, p_in, &rk.coeff, p_kn)?;
                    Ok(StageRow {
                        coeff,
                        exponents,
                        origin: Origin::Pair(i, k),
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;

    let mut out: Vec<StageRow<C>> = Vec::with_capacity(count as usize);
    out.extend(pair_rows.into_iter().flatten());
    for (i, r) in rows.iter().enumerate() {
        if r.coeff.is_zero() {
            continue;
        }
        let coeff = box_coefficient(sf, &r.coeff, &r.exponents[last], g, h)?;
        if coeff.is_zero() {
            continue;
        }
        out.push(StageRow {
            coeff,
            exponents: r.exponents[..last].to_vec(),
            origin: Origin::Box(i),
        });
    }
    Ok(ObjectiveStage {
        level: last,
        rows: out,
    })
}

/// Eliminates the last variable of `stage` over `[g, h]` and returns the
/// canonical (zero-dropped, merged, sorted) stage one level down.
pub fn eliminate_step<C: Carrier>(
    sf: &Semifield<C>,
    stage: &ObjectiveStage<C>,
    g: &Value<C>,
    h: &Value<C>,
) -> Result<ObjectiveStage<C>> {
    let next = expand_step(sf, stage, g, h, usize::MAX)?;
    Ok(prune::merge_duplicates(sf, prune::drop_zero(next)))
}

/// Bounds on `x_level` from the objective stage at `level` and the optimum.
pub fn build_constraints<C: Carrier>(
    sf: &Semifield<C>,
    stage: &ObjectiveStage<C>,
    mu: &Value<C>,
) -> Result<ConstraintStage<C>> {
    if mu.is_zero() {
        return Err(Error::NotAttained(
            "infimum not attained; no certificate intervals".into(),
        ));
    }
    let last = check_level(stage)?;
    let m = stage.len();
    let mut cs = ConstraintStage {
        level: stage.level,
        lower_coeffs: Vec::with_capacity(m),
        lower_exponents: Vec::with_capacity(m),
        upper_coeffs: Vec::with_capacity(m),
        upper_exponents: Vec::with_capacity(m),
    };
    let zeros = || vec![Rational::zero(); last];
    for r in &stage.rows {
        let p = &r.exponents[last];
        let scaled = |sign_flip: bool| -> Vec<Rational> {
            r.exponents[..last]
                .iter()
                .map(|e| if sign_flip { -(e / p) } else { e / p })
                .collect()
        };
        if r.coeff.is_zero() || p.is_zero() {
            cs.lower_coeffs.push(Value::Zero);
            cs.lower_exponents.push(zeros());
            cs.upper_coeffs.push(Value::Zero);
            cs.upper_exponents.push(zeros());
        } else if p.is_negative() {
            cs.lower_coeffs
                .push(lower_coefficient(sf, mu, &r.coeff, p)?);
            cs.lower_exponents.push(scaled(true));
            cs.upper_coeffs.push(Value::Zero);
            cs.upper_exponents.push(zeros());
        } else {
            cs.lower_coeffs.push(Value::Zero);
            cs.lower_exponents.push(zeros());
            cs.upper_coeffs
                .push(upper_coefficient(sf, mu, &r.coeff, p)?);
            cs.upper_exponents.push(scaled(false));
        }
    }
    Ok(cs)
}

fn elapsed_ms(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

/// Eliminates `x_N, …, x_1` in turn, then builds the bound on every variable.
pub fn backward_eliminate<C: Carrier>(
    prob: &Problem<C>,
    options: &SolverOptions,
) -> Result<EliminationTrace<C>> {
    let sf = prob.semifield();
    let bounds = prob.bounds();
    let n_vars = prob.arity();

    let start = Instant::now();
    let initial = ObjectiveStage::from_problem(prob);
    let m = initial.len();
    if m > options.max_monomials {
        return Err(Error::Capacity {
            stage: format!("level {n_vars} (input)"),
            count: m as u128,
            cap: options.max_monomials as u128,
        });
    }
    let (initial, report) = prune::apply(&sf, initial, bounds, options.prune);
    let mut stats = vec![StageStats {
        level: n_vars,
        raw_count: m,
        nonzero_count: m - report.dropped_zero,
        pruned_count: initial.len(),
        elapsed_ms: elapsed_ms(start),
        prune: report,
    }];

    let mut stages: Vec<ObjectiveStage<C>> = vec![initial];
    for level in (1..=n_vars).rev() {
        let start = Instant::now();
        let current = stages.last().expect("at least the input stage");
        let j = level - 1;
        let next = expand_step(
            &sf,
            current,
            &bounds.lower()[j],
            &bounds.upper()[j],
            options.max_monomials,
        )?;
        let mk = current.len();
        let raw = mk * mk + mk;
        let nonzero = next.len();
        let (next, mut report) = prune::apply(&sf, next, bounds, options.prune);
        report.before = raw;
        report.dropped_zero = raw - nonzero;
        stats.push(StageStats {
            level: j,
            raw_count: raw,
            nonzero_count: nonzero,
            pruned_count: next.len(),
            elapsed_ms: elapsed_ms(start),
            prune: report,
        });
        stages.push(next);
    }
    // `stages` runs from level N down to 0.
    stages.reverse();

    let mu = sf.sum(stages[0].rows.iter().map(|r| &r.coeff));
    let constraints = if mu.is_zero() {
        Vec::new()
    } else {
        stages[1..]
            .iter()
            .map(|s| build_constraints(&sf, s, &mu))
            .collect::<Result<Vec<_>>>()?
    };
    if !options.retain_trace {
        stages.clear();
    }
    Ok(EliminationTrace {
        objectives: stages,
        constraints,
        mu,
        stats,
    })
}

fn choose<C: Carrier>(sf: &Semifield<C>, iv: &Interval<C>, pick: Pick) -> Result<Value<C>> {
    // x must stay nonzero, so an interval open at 𝟘 always yields its upper end.
    if iv.lower.is_zero() {
        return Ok(iv.upper.clone());
    }
    match pick {
        Pick::Lower => Ok(iv.lower.clone()),
        Pick::Upper => Ok(iv.upper.clone()),
        Pick::Midpoint => sf.tpow(&sf.otimes(&iv.lower, &iv.upper), &Rational::new(1, 2)),
    }
}

/// Relative slack for float intervals whose ends cross by rounding only.
const FLOAT_INTERVAL_SLACK: f64 = 1e-9;

fn rounding_inverted<C: Carrier>(sf: &Semifield<C>, iv: &Interval<C>) -> bool {
    match (&iv.lower, &iv.upper) {
        (Value::Finite(l), Value::Finite(u)) => {
            let (l, u) = (l.c_to_f64(), u.c_to_f64());
            sf.lt(&iv.upper, &iv.lower)
                && (l - u).abs() <= FLOAT_INTERVAL_SLACK * l.abs().max(u.abs()).max(1.0)
        }
        _ => false,
    }
}

/// Fixes `x_1, …, x_N` in turn from the stored bounds.
pub fn forward_substitute<C: Carrier>(
    sf: &Semifield<C>,
    trace: &EliminationTrace<C>,
    bounds: &BoxConstraint<C>,
    pick: Pick,
) -> Result<Solution<C>> {
    if trace.mu.is_zero() {
        return Ok(Solution {
            mu: Value::Zero,
            point: Vec::new(),
            intervals: Vec::new(),
            status: Status::InfimumNotAttained,
        });
    }
    let mut point = Vec::with_capacity(bounds.len());
    let mut intervals = Vec::with_capacity(bounds.len());
    for level in 1..=bounds.len() {
        let cs = trace.constraint(level).ok_or_else(|| {
            Error::Internal(format!("trace has no constraint stage for x_{level}"))
        })?;
        let j = level - 1;
        let mut iv = cs.interval_at(sf, &point, &bounds.lower()[j], &bounds.upper()[j])?;
        if C::MODE == Mode::Float && rounding_inverted(sf, &iv) {
            iv.lower = iv.upper.clone();
        }
        if !sf.leq(&iv.lower, &iv.upper) {
            return Err(Error::Internal(format!(
                "empty interval for x_{level}: [{}, {}]",
                sf.format(&iv.lower),
                sf.format(&iv.upper)
            )));
        }
        point.push(choose(sf, &iv, pick)?);
        intervals.push(iv);
    }
    Ok(Solution {
        mu: trace.mu.clone(),
        point,
        intervals,
        status: Status::Attained,
    })
}

/// Backward elimination followed by forward substitution.
///
/// In exact mode the returned point is checked to lie in the box and to
/// evaluate to μ.
pub fn solve<C: Carrier>(prob: &Problem<C>, options: &SolverOptions) -> Result<Solved<C>> {
    let sf = prob.semifield();
    let trace = backward_eliminate(prob, options)?;
    let solution = forward_substitute(&sf, &trace, prob.bounds(), options.pick)?;
    if solution.status == Status::Attained && C::MODE == Mode::Exact {
        if !prob.bounds().contains(&sf, &solution.point) {
            return Err(Error::Internal(
                "solution point lies outside the box".into(),
            ));
        }
        let value = prob.evaluate(&solution.point)?;
        if value != solution.mu {
            return Err(Error::Internal(format!(
                "objective at solution point is {}, expected {}",
                sf.format(&value),
                sf.format(&solution.mu)
            )));
        }
    }
    Ok(Solved { solution, trace })
}
