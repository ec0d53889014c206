//! Row-reduction passes applied to objective stages between elimination steps.
//!
//! Every pass leaves the stage's value unchanged at every point of the box.

use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::eliminate::{ObjectiveStage, StageRow};
use crate::error::{Error, Result};
use crate::polynomial::BoxConstraint;
use crate::semifield::{Carrier, Semifield};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum PruneLevel {
    /// Zero-drop only.
    None,
    /// Zero-drop and duplicate merge.
    Basic,
    /// Zero-drop, duplicate merge and pairwise dominance.
    #[default]
    Dominance,
}

impl PruneLevel {
    pub const ALL: [PruneLevel; 3] = [PruneLevel::None, PruneLevel::Basic, PruneLevel::Dominance];

    pub fn name(self) -> &'static str {
        match self {
            PruneLevel::None => "none",
            PruneLevel::Basic => "basic",
            PruneLevel::Dominance => "dominance",
        }
    }
}

impl FromStr for PruneLevel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PruneLevel::ALL
            .into_iter()
            .find(|l| l.name() == s)
            .ok_or_else(|| Error::validation("prune", format!("unknown prune level '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct PruneReport {
    pub before: usize,
    pub dropped_zero: usize,
    pub merged: usize,
    pub dominated: usize,
    pub after: usize,
}

pub fn drop_zero<C: Carrier>(stage: ObjectiveStage<C>) -> ObjectiveStage<C> {
    let ObjectiveStage { level, mut rows } = stage;
    rows.retain(|r| !r.coeff.is_zero());
    ObjectiveStage { level, rows }
}

/// Sorts rows by exponent vector and ⊕-merges equal vectors. The surviving
/// row keeps the origin of the first row attaining the merged coefficient.
pub fn merge_duplicates<C: Carrier>(
    sf: &Semifield<C>,
    stage: ObjectiveStage<C>,
) -> ObjectiveStage<C> {
    let ObjectiveStage { level, mut rows } = stage;
    rows.sort_by(|a, b| a.exponents.cmp(&b.exponents));
    let mut out: Vec<StageRow<C>> = Vec::with_capacity(rows.len());
    for row in rows {
        match out.last_mut() {
            Some(last) if last.exponents == row.exponents => {
                if sf.lt(&last.coeff, &row.coeff) {
                    *last = row;
                }
            }
            _ => out.push(row),
        }
    }
    ObjectiveStage { level, rows: out }
}

/// Whether `dominator ≥ dominated` at every point of the box.
///
/// The supremum of `dominated ⊘ dominator` over the box factors into one
/// bound per variable: `h_j^{δ_j}` when `δ_j ≥ 0` and `g_j^{δ_j}` otherwise,
/// with `δ_j` the exponent difference. A 𝟘 lower bound with `δ_j < 0` makes
/// the supremum unbounded, so no dominance is claimed.
pub(crate) fn dominates<C: Carrier>(
    sf: &Semifield<C>,
    dominator: &StageRow<C>,
    dominated: &StageRow<C>,
    bounds: &BoxConstraint<C>,
) -> bool {
    let Ok(mut sup) = sf.div(&dominated.coeff, &dominator.coeff) else {
        return false;
    };
    for (j, (pi, pk)) in dominated
        .exponents
        .iter()
        .zip(&dominator.exponents)
        .enumerate()
    {
        let delta = pi - pk;
        if delta.is_zero() {
            continue;
        }
        let end = if delta.is_positive() {
            &bounds.upper()[j]
        } else {
            &bounds.lower()[j]
        };
        if end.is_zero() {
            return false;
        }
        match sf.tpow(end, &delta) {
            Ok(b) => sup = sf.otimes(&sup, &b),
            Err(_) => return false,
        }
    }
    sf.leq(&sup, &sf.one())
}

/// Removes every row that some other row bounds from above on the whole box.
///
/// Among rows that bound each other (equal on the box) the lowest index is
/// kept, so the surviving set still attains the maximum everywhere.
pub fn dominance_prune<C: Carrier>(
    sf: &Semifield<C>,
    stage: ObjectiveStage<C>,
    bounds: &BoxConstraint<C>,
) -> ObjectiveStage<C> {
    let ObjectiveStage { level, rows } = stage;
    if rows.len() < 2 {
        return ObjectiveStage { level, rows };
    }
    let bounds = bounds.prefix(level);
    let keep: Vec<bool> = (0..rows.len())
        .into_par_iter()
        .map(|i| {
            !rows.iter().enumerate().any(|(k, other)| {
                k != i
                    && dominates(sf, other, &rows[i], &bounds)
                    && (k < i || !dominates(sf, &rows[i], other, &bounds))
            })
        })
        .collect();
    let rows = rows
        .into_iter()
        .zip(keep)
        .filter_map(|(r, k)| k.then_some(r))
        .collect();
    ObjectiveStage { level, rows }
}

/// Runs the passes selected by `level` in order zero-drop, merge, dominance.
pub fn apply<C: Carrier>(
    sf: &Semifield<C>,
    stage: ObjectiveStage<C>,
    bounds: &BoxConstraint<C>,
    level: PruneLevel,
) -> (ObjectiveStage<C>, PruneReport) {
    let before = stage.len();
    let stage = drop_zero(stage);
    let after_zero = stage.len();
    let stage = if level == PruneLevel::None {
        stage
    } else {
        merge_duplicates(sf, stage)
    };
    let after_merge = stage.len();
    let stage = if level == PruneLevel::Dominance {
        dominance_prune(sf, stage, bounds)
    } else {
        stage
    };
    let report = PruneReport {
        before,
        dropped_zero: before - after_zero,
        merged: after_zero - after_merge,
        dominated: after_merge - stage.len(),
        after: stage.len(),
    };
    (stage, report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eliminate::Origin;
    use crate::rational::Rational;
    use crate::semifield::{ExactSemifield, Value};

    fn z(n: i64) -> Value<Rational> {
        Value::Finite(Rational::from_integer(n))
    }

    fn row(c: Value<Rational>, e: &[i64]) -> StageRow<Rational> {
        StageRow {
            coeff: c,
            exponents: e.iter().map(|&x| Rational::from_integer(x)).collect(),
            origin: Origin::Input(0),
        }
    }

    fn stage(rows: Vec<StageRow<Rational>>) -> ObjectiveStage<Rational> {
        let level = rows.first().map_or(0, |r| r.exponents.len());
        ObjectiveStage { level, rows }
    }

    fn unit_box(g: i64, h: i64, n: usize) -> BoxConstraint<Rational> {
        BoxConstraint::new(&ExactSemifield::max_plus(), vec![z(g); n], vec![z(h); n]).unwrap()
    }

    #[test]
    fn drop_zero_removes_zero_rows() {
        let s = stage(vec![
            row(Value::Zero, &[1]),
            row(z(1), &[0]),
            row(Value::Zero, &[2]),
        ]);
        assert_eq!(drop_zero(s).len(), 1);
    }

    #[test]
    fn merge_keeps_the_larger_coefficient() {
        let mp = ExactSemifield::max_plus();
        let s = stage(vec![row(z(3), &[1, 0]), row(z(5), &[1, 0])]);
        let m = merge_duplicates(&mp, s);
        assert_eq!(m.rows, vec![row(z(5), &[1, 0])]);

        let distinct = stage(vec![row(z(3), &[0, 1]), row(z(5), &[1, 0])]);
        assert_eq!(merge_duplicates(&mp, distinct.clone()), distinct);
    }

    #[test]
    fn same_exponents_smaller_coefficient_is_dominated() {
        let mp = ExactSemifield::max_plus();
        let s = stage(vec![row(z(0), &[1]), row(z(10), &[1])]);
        let p = dominance_prune(&mp, s, &unit_box(0, 1, 1));
        assert_eq!(p.rows, vec![row(z(10), &[1])]);
    }

    #[test]
    fn crossing_terms_both_survive() {
        let mp = ExactSemifield::max_plus();
        let s = stage(vec![row(z(0), &[1]), row(z(0), &[-1])]);
        let p = dominance_prune(&mp, s.clone(), &unit_box(-1, 1, 1));
        assert_eq!(p, s);
    }

    #[test]
    fn rows_equal_on_a_degenerate_box_keep_one() {
        let mp = ExactSemifield::max_plus();
        // on x = 2: 0 + 2x = 4 and 2 + x = 4
        let s = stage(vec![row(z(0), &[2]), row(z(2), &[1])]);
        let p = dominance_prune(&mp, s, &unit_box(2, 2, 1));
        assert_eq!(p.rows, vec![row(z(0), &[2])]);
    }

    #[test]
    fn zero_lower_bound_blocks_dominance() {
        let mp = ExactSemifield::max_plus();
        let bounds = BoxConstraint::new(&mp, vec![Value::Zero], vec![z(1)]).unwrap();
        // 5·x⁻¹ grows without bound as x falls; 100·x⁰ cannot dominate it
        let s = stage(vec![row(z(100), &[0]), row(z(5), &[-1])]);
        assert_eq!(dominance_prune(&mp, s.clone(), &bounds).len(), 2);
        // but x¹ is bounded above by h, so 100 dominates 0·x
        let s = stage(vec![row(z(100), &[0]), row(z(0), &[1])]);
        assert_eq!(dominance_prune(&mp, s, &bounds).len(), 1);
    }

    #[test]
    fn report_accounts_for_every_row() {
        let mp = ExactSemifield::max_plus();
        let s = stage(vec![
            row(Value::Zero, &[1]),
            row(z(0), &[1]),
            row(z(2), &[1]),
            row(z(-50), &[0]),
            row(z(1), &[-1]),
        ]);
        let (out, rep) = apply(&mp, s, &unit_box(-1, 1, 1), PruneLevel::Dominance);
        assert_eq!(rep.before, 5);
        assert_eq!(rep.dropped_zero, 1);
        assert_eq!(rep.merged, 1);
        assert_eq!(rep.dominated, 1);
        assert_eq!(rep.after, out.len());
        assert_eq!(
            rep.after,
            rep.before - rep.dropped_zero - rep.merged - rep.dominated
        );
    }
}
