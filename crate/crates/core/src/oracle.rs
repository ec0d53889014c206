//! Brute-force reference minimizers and a seeded random problem generator.
//!
//! Nothing here shares code with the elimination engine beyond semifield
//! arithmetic and polynomial evaluation.

use std::ops::RangeInclusive;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::solve_exact;
use crate::polynomial::{BoxConstraint, Monomial, Polynomial, Problem};
use crate::rational::Rational;
use crate::semifield::{Semifield, SemifieldId, Value};

pub const DEFAULT_GRID_CAP: u128 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VertexCaps {
    pub max_arity: usize,
    pub max_monomials: usize,
}

impl Default for VertexCaps {
    fn default() -> Self {
        VertexCaps {
            max_arity: 3,
            max_monomials: 8,
        }
    }
}

fn finite_box(prob: &Problem<Rational>, who: &str) -> Result<(Vec<Rational>, Vec<Rational>)> {
    let to_carrier = |vs: &[Value<Rational>], side: &str| {
        vs.iter()
            .enumerate()
            .map(|(j, v)| {
                v.finite().cloned().ok_or_else(|| {
                    Error::Usage(format!("{who} needs a compact box; {side}[{j}] is zero"))
                })
            })
            .collect::<Result<Vec<_>>>()
    };
    Ok((
        to_carrier(prob.bounds().lower(), "lower")?,
        to_carrier(prob.bounds().upper(), "upper")?,
    ))
}

/// Least value of `f` over the `resolution^N` lattice spanning the box.
///
/// Axis `j` uses the points `g_j ⊗ (h_j ⊘ g_j)^{t/(r−1)}`, `t = 0 … r−1`,
/// which are exact rationals in max-plus and min-plus. The result bounds
/// the true minimum from above.
pub fn grid_oracle(
    prob: &Problem<Rational>,
    resolution: usize,
    cap: u128,
) -> Result<Value<Rational>> {
    if resolution < 2 {
        return Err(Error::Usage("grid resolution must be at least 2".into()));
    }
    let sf = prob.semifield();
    finite_box(prob, "grid oracle")?;
    let n = prob.arity();
    let size = (resolution as u128)
        .checked_pow(n as u32)
        .unwrap_or(u128::MAX);
    if size > cap {
        return Err(Error::Capacity {
            stage: format!("grid lattice {resolution}^{n}"),
            count: size,
            cap,
        });
    }
    let steps = Rational::from_integer(resolution as i64 - 1);
    let axes: Vec<Vec<Value<Rational>>> = (0..n)
        .map(|j| {
            let g = &prob.bounds().lower()[j];
            let h = &prob.bounds().upper()[j];
            let ratio = sf.div(h, g)?;
            (0..resolution)
                .map(|t| {
                    let e = Rational::from_integer(t as i64) / &steps;
                    Ok(sf.otimes(g, &sf.tpow(&ratio, &e)?))
                })
                .collect()
        })
        .collect::<Result<_>>()?;

    let mut best = Value::Zero;
    let mut first = true;
    let mut idx = vec![0usize; n];
    loop {
        let x: Vec<_> = idx
            .iter()
            .enumerate()
            .map(|(j, &t)| axes[j][t].clone())
            .collect();
        let v = prob.evaluate(&x)?;
        if first || sf.lt(&v, &best) {
            best = v;
            first = false;
        }
        let mut j = 0;
        loop {
            if j == n {
                return Ok(best);
            }
            idx[j] += 1;
            if idx[j] < resolution {
                break;
            }
            idx[j] = 0;
            j += 1;
        }
    }
}

/// k-subsets of `0..n` in lexicographic order.
fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut c: Vec<usize> = (0..k).collect();
    loop {
        out.push(c.clone());
        // rightmost position that can still advance
        let mut i = k;
        while i > 0 && c[i - 1] == n - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        c[i - 1] += 1;
        for t in i..k {
            c[t] = c[t - 1] + 1;
        }
    }
}

/// Exact minimum by vertex enumeration.
///
/// In max-plus and min-plus every term is affine in the carrier, `f` is the
/// pointwise max (resp. min) of those pieces, and the optimum over the box is
/// attained where `N` independent equalities hold, each either two pieces
/// being equal or a coordinate sitting on a box face. Every such system is
/// solved exactly; in-box solutions and all box corners are evaluated.
pub fn vertex_oracle(prob: &Problem<Rational>, caps: VertexCaps) -> Result<Value<Rational>> {
    let sf = prob.semifield();
    if !sf.id().is_additive() {
        return Err(Error::Usage(format!(
            "vertex oracle supports max-plus and min-plus, not {}",
            sf.id()
        )));
    }
    let n = prob.arity();
    let monos = prob.polynomial().monomials();
    if n > caps.max_arity {
        return Err(Error::Capacity {
            stage: "vertex oracle arity".into(),
            count: n as u128,
            cap: caps.max_arity as u128,
        });
    }
    if monos.len() > caps.max_monomials {
        return Err(Error::Capacity {
            stage: "vertex oracle monomials".into(),
            count: monos.len() as u128,
            cap: caps.max_monomials as u128,
        });
    }
    let (lo, hi) = finite_box(prob, "vertex oracle")?;

    // Each equation is (row, rhs) with row · x = rhs.
    let mut equations: Vec<(Vec<Rational>, Rational)> = Vec::new();
    for (i, mi) in monos.iter().enumerate() {
        for mk in &monos[i + 1..] {
            if mi.exponents == mk.exponents {
                continue;
            }
            let row = mi
                .exponents
                .iter()
                .zip(&mk.exponents)
                .map(|(a, b)| a - b)
                .collect();
            let (ai, ak) = (mi.coeff.finite().unwrap(), mk.coeff.finite().unwrap());
            equations.push((row, ak - ai));
        }
    }
    for j in 0..n {
        let mut unit = vec![Rational::zero(); n];
        unit[j] = Rational::one();
        equations.push((unit.clone(), lo[j].clone()));
        equations.push((unit, hi[j].clone()));
    }

    let inside = |x: &[Rational]| {
        x.iter()
            .enumerate()
            .all(|(j, v)| v >= std::cmp::min(&lo[j], &hi[j]) && v <= std::cmp::max(&lo[j], &hi[j]))
    };
    let evaluate =
        |x: Vec<Rational>| prob.evaluate(&x.into_iter().map(Value::Finite).collect::<Vec<_>>());

    let mut candidates: Vec<Value<Rational>> = combinations(equations.len(), n)
        .into_par_iter()
        .filter_map(|subset| {
            let a: Vec<Vec<Rational>> = subset.iter().map(|&e| equations[e].0.clone()).collect();
            let b: Vec<Rational> = subset.iter().map(|&e| equations[e].1.clone()).collect();
            solve_exact(&a, &b).filter(|x| inside(x))
        })
        .map(evaluate)
        .collect::<Result<Vec<_>>>()?;
    for corner in 0..(1usize << n) {
        let x = (0..n)
            .map(|j| {
                if corner >> j & 1 == 0 {
                    lo[j].clone()
                } else {
                    hi[j].clone()
                }
            })
            .collect();
        candidates.push(evaluate(x)?);
    }
    Ok(sf
        .min_of(&candidates)
        .expect("box corners are always candidates"))
}

/// Ranges are over numerators; each value gets a random denominator in
/// `1..=…_denominator_max`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorParams {
    pub semifield: SemifieldId,
    pub arity: usize,
    pub monomials: usize,
    pub coeff_numerators: RangeInclusive<i64>,
    pub coeff_denominator_max: i64,
    pub exponent_numerators: RangeInclusive<i64>,
    pub exponent_denominator_max: i64,
    /// Carrier value of the box end nearest the bottom of the carrier order.
    pub bound_numerators: RangeInclusive<i64>,
    /// Box width in the carrier, non-negative.
    pub width_numerators: RangeInclusive<i64>,
    pub bound_denominator_max: i64,
    pub seed: u64,
}

impl Default for GeneratorParams {
    fn default() -> Self {
        GeneratorParams {
            semifield: SemifieldId::MaxPlus,
            arity: 2,
            monomials: 4,
            coeff_numerators: -6..=6,
            coeff_denominator_max: 3,
            exponent_numerators: -3..=3,
            exponent_denominator_max: 2,
            bound_numerators: -4..=1,
            width_numerators: 0..=6,
            bound_denominator_max: 2,
            seed: 0,
        }
    }
}

/// Deterministic in `params.seed`. Duplicate exponent vectors are merged, so
/// the result may have fewer than `params.monomials` terms.
pub fn random_problem(params: &GeneratorParams) -> Result<Problem<Rational>> {
    if params.arity == 0 || params.monomials == 0 {
        return Err(Error::Usage(
            "generator needs arity ≥ 1 and at least one monomial".into(),
        ));
    }
    if *params.width_numerators.start() < 0
        || params.coeff_denominator_max < 1
        || params.exponent_denominator_max < 1
        || params.bound_denominator_max < 1
    {
        return Err(Error::Usage("generator ranges out of domain".into()));
    }
    let sf: Semifield<Rational> = Semifield::new(params.semifield)?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut draw = |nums: &RangeInclusive<i64>, den_max: i64| {
        let n = rng.gen_range(nums.clone());
        let d = rng.gen_range(1..=den_max);
        Rational::new(n, d)
    };
    let monos = (0..params.monomials)
        .map(|_| {
            let c = draw(&params.coeff_numerators, params.coeff_denominator_max);
            let e = (0..params.arity)
                .map(|_| draw(&params.exponent_numerators, params.exponent_denominator_max))
                .collect();
            Monomial::new(Value::Finite(c), e)
        })
        .collect();
    let mut lower = Vec::with_capacity(params.arity);
    let mut upper = Vec::with_capacity(params.arity);
    for _ in 0..params.arity {
        let bottom = draw(&params.bound_numerators, params.bound_denominator_max);
        let top = &bottom + &draw(&params.width_numerators, params.bound_denominator_max);
        // induced order is reversed in min-plus
        let (g, h) = if params.semifield.is_max() {
            (bottom, top)
        } else {
            (top, bottom)
        };
        lower.push(Value::Finite(g));
        upper.push(Value::Finite(h));
    }
    Problem::new(
        Polynomial::new(sf, params.arity, monos)?,
        BoxConstraint::new(&sf, lower, upper)?,
    )
}
