//! Closed-form minimization of a one-variable polynomial over an interval.
//!
//! The minimum of `⊕ a_i x^{p_i}` on `[g, h]` is the ⊕ of the pairwise
//! balance values of every falling term (`p_i < 0`) against every rising
//! term (`p_k > 0`), together with each term's value at the end of the box
//! where it is smallest. The minimizers form the interval bounded below by
//! the falling terms and above by the rising ones.

use crate::error::{Error, Result};
use crate::polynomial::Problem;
use crate::rational::Rational;
use crate::semifield::{Carrier, Semifield, Value};

/// `lower ≤ x ≤ upper`; `lower` may be 𝟘 (open at the zero element).
#[derive(Debug, Clone, PartialEq)]
pub struct Interval<C> {
    pub lower: Value<C>,
    pub upper: Value<C>,
}

impl<C: Carrier> Interval<C> {
    pub fn contains(&self, sf: &Semifield<C>, x: &Value<C>) -> bool {
        !x.is_zero() && sf.leq(&self.lower, x) && sf.leq(x, &self.upper)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct UnivariateResult<C> {
    pub mu: Value<C>,
    /// All minimizers; `None` when the infimum is 𝟘 and not attained.
    pub interval: Option<Interval<C>>,
    pub attained: bool,
    /// Number of falling/rising pairs that contributed a balance term.
    pub pair_terms: usize,
}

/// Balance value of a falling term `a_i x^{p_i}` (`p_i < 0`) against a rising
/// term `a_k x^{p_k}` (`p_k > 0`):
/// `a_i^{−p_k/(p_i−p_k)} ⊗ a_k^{p_i/(p_i−p_k)}`.
pub(crate) fn pair_coefficient<C: Carrier>(
    sf: &Semifield<C>,
    a_i: &Value<C>,
    p_i: &Rational,
    a_k: &Value<C>,
    p_k: &Rational,
) -> Result<Value<C>> {
    let d = p_i - p_k;
    let e_i = -(p_k / &d);
    let e_k = p_i / &d;
    Ok(sf.otimes(&sf.tpow(a_i, &e_i)?, &sf.tpow(a_k, &e_k)?))
}

/// `(h^{−p} ⊕ g^{−p})^{−1} ⊗ a`, evaluated by the sign of `p` so that a 𝟘
/// lower bound is never inverted: `h^p a` for `p < 0`, `a` for `p = 0`,
/// `g^p a` for `p > 0`.
pub(crate) fn box_coefficient<C: Carrier>(
    sf: &Semifield<C>,
    a: &Value<C>,
    p: &Rational,
    g: &Value<C>,
    h: &Value<C>,
) -> Result<Value<C>> {
    if p.is_negative() {
        Ok(sf.otimes(&sf.tpow(h, p)?, a))
    } else if p.is_positive() {
        Ok(sf.otimes(&sf.tpow(g, p)?, a))
    } else {
        Ok(a.clone())
    }
}

/// `μ^{1/p} ⊗ a^{−1/p}` for a falling term (`p < 0`).
pub(crate) fn lower_coefficient<C: Carrier>(
    sf: &Semifield<C>,
    mu: &Value<C>,
    a: &Value<C>,
    p: &Rational,
) -> Result<Value<C>> {
    let e = p.recip();
    Ok(sf.otimes(&sf.tpow(mu, &e)?, &sf.tpow(a, &-&e)?))
}

/// `μ^{−1/p} ⊗ a^{1/p}` for a rising term (`p > 0`).
pub(crate) fn upper_coefficient<C: Carrier>(
    sf: &Semifield<C>,
    mu: &Value<C>,
    a: &Value<C>,
    p: &Rational,
) -> Result<Value<C>> {
    let e = p.recip();
    Ok(sf.otimes(&sf.tpow(mu, &-&e)?, &sf.tpow(a, &e)?))
}

/// Closes a set of lower-bound terms and upper-bound terms into an interval:
/// `[⊕ lows ⊕ g, (⊕ highs ⊕ h⁻¹)⁻¹]`.
pub(crate) fn close_interval<C: Carrier>(
    sf: &Semifield<C>,
    lows: &[Value<C>],
    highs: &[Value<C>],
    g: &Value<C>,
    h: &Value<C>,
) -> Result<Interval<C>> {
    let lower = sf.oplus(&sf.sum(lows), g);
    let upper = sf.inv(&sf.oplus(&sf.sum(highs), &sf.inv(h)?))?;
    Ok(Interval { lower, upper })
}

/// Solves `min ⊕ a_i x^{p_i}` subject to `g ≤ x ≤ h` from raw terms.
pub(crate) fn solve_terms<C: Carrier>(
    sf: &Semifield<C>,
    terms: &[(Value<C>, Rational)],
    g: &Value<C>,
    h: &Value<C>,
) -> Result<UnivariateResult<C>> {
    let mut mu = Value::Zero;
    let mut pair_terms = 0;
    for (a_i, p_i) in terms.iter().filter(|(_, p)| p.is_negative()) {
        for (a_k, p_k) in terms.iter().filter(|(_, p)| p.is_positive()) {
            let b = pair_coefficient(sf, a_i, p_i, a_k, p_k)?;
            if !b.is_zero() {
                pair_terms += 1;
            }
            mu = sf.oplus(&mu, &b);
        }
    }
    for (a, p) in terms {
        mu = sf.oplus(&mu, &box_coefficient(sf, a, p, g, h)?);
    }
    if mu.is_zero() {
        return Ok(UnivariateResult {
            mu,
            interval: None,
            attained: false,
            pair_terms,
        });
    }
    let mut lows = Vec::new();
    let mut highs = Vec::new();
    for (a, p) in terms {
        if p.is_negative() {
            lows.push(lower_coefficient(sf, &mu, a, p)?);
        } else if p.is_positive() {
            highs.push(upper_coefficient(sf, &mu, a, p)?);
        }
    }
    let interval = close_interval(sf, &lows, &highs, g, h)?;
    Ok(UnivariateResult {
        mu,
        interval: Some(interval),
        attained: true,
        pair_terms,
    })
}

pub fn solve_univariate<C: Carrier>(prob: &Problem<C>) -> Result<UnivariateResult<C>> {
    if prob.arity() != 1 {
        return Err(Error::Usage(format!(
            "univariate solver needs arity 1, got {}",
            prob.arity()
        )));
    }
    if !prob.polynomial().is_canonical() {
        return Err(Error::Usage("polynomial is not canonical".into()));
    }
    let sf = prob.semifield();
    let terms: Vec<(Value<C>, Rational)> = prob
        .polynomial()
        .monomials()
        .iter()
        .map(|m| (m.coeff.clone(), m.exponents[0].clone()))
        .collect();
    let b = prob.bounds();
    solve_terms(&sf, &terms, &b.lower()[0], &b.upper()[0])
}

/// Independent minimum by enumeration: evaluates `f` at both box ends and at
/// every pairwise crossing point `(a_i ⊘ a_k)^{1/(p_k − p_i)}` clipped into
/// the box, and returns the least value in the induced order.
pub fn breakpoint_oracle<C: Carrier>(prob: &Problem<C>) -> Result<Value<C>> {
    if prob.arity() != 1 {
        return Err(Error::Usage(format!(
            "breakpoint oracle needs arity 1, got {}",
            prob.arity()
        )));
    }
    let sf = prob.semifield();
    let g = &prob.bounds().lower()[0];
    let h = &prob.bounds().upper()[0];
    if g.is_zero() {
        return Err(Error::Usage(
            "breakpoint oracle requires a finite lower bound".into(),
        ));
    }
    let clip = |x: Value<C>| {
        if sf.lt(&x, g) {
            g.clone()
        } else if sf.lt(h, &x) {
            h.clone()
        } else {
            x
        }
    };
    let monos = prob.polynomial().monomials();
    let mut candidates = vec![g.clone(), h.clone()];
    for (i, mi) in monos.iter().enumerate() {
        for mk in &monos[i + 1..] {
            let (p_i, p_k) = (&mi.exponents[0], &mk.exponents[0]);
            if p_i == p_k {
                continue;
            }
            let ratio = sf.div(&mi.coeff, &mk.coeff)?;
            let x = sf.tpow(&ratio, &(p_k - p_i).recip())?;
            candidates.push(clip(x));
        }
    }
    let values = candidates
        .iter()
        .map(|x| prob.evaluate(std::slice::from_ref(x)))
        .collect::<Result<Vec<_>>>()?;
    Ok(sf.min_of(&values).expect("at least two candidates"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polynomial::{BoxConstraint, Monomial, Polynomial};
    use crate::semifield::ExactSemifield;

    fn q(n: i64, d: i64) -> Value<Rational> {
        Value::Finite(Rational::new(n, d))
    }

    fn z(n: i64) -> Value<Rational> {
        q(n, 1)
    }

    fn problem(terms: &[(i64, i64)], g: Value<Rational>, h: Value<Rational>) -> Problem<Rational> {
        let sf = ExactSemifield::max_plus();
        let monos = terms
            .iter()
            .map(|&(a, p)| Monomial::new(z(a), vec![Rational::from_integer(p)]))
            .collect();
        Problem::new(
            Polynomial::new(sf, 1, monos).unwrap(),
            BoxConstraint::new(&sf, vec![g], vec![h]).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn balanced_pair() {
        // 0·x⁻¹ ⊕ 2·x on [−10, 10]: max(−x, 2 + x) is least at x = −1 with value 1
        let p = problem(&[(0, -1), (2, 1)], z(-10), z(10));
        let r = solve_univariate(&p).unwrap();
        assert_eq!(r.mu, z(1));
        assert_eq!(
            r.interval,
            Some(Interval {
                lower: z(-1),
                upper: z(-1)
            })
        );
        assert!(r.attained);
        assert_eq!(r.pair_terms, 1);
        assert_eq!(breakpoint_oracle(&p).unwrap(), z(1));
    }

    #[test]
    fn rising_monomial_sits_at_lower_bound() {
        let p = problem(&[(0, 1)], z(2), z(5));
        let r = solve_univariate(&p).unwrap();
        assert_eq!(r.mu, z(2));
        assert_eq!(
            r.interval,
            Some(Interval {
                lower: z(2),
                upper: z(2)
            })
        );
    }

    #[test]
    fn constant_objective_keeps_whole_box() {
        let p = problem(&[(4, 0)], z(-3), z(7));
        let r = solve_univariate(&p).unwrap();
        assert_eq!(r.mu, z(4));
        assert_eq!(
            r.interval,
            Some(Interval {
                lower: z(-3),
                upper: z(7)
            })
        );
        assert_eq!(breakpoint_oracle(&p).unwrap(), z(4));
    }

    #[test]
    fn symmetric_pair_meets_in_the_middle() {
        let p = problem(&[(0, 1), (0, -1)], z(-5), z(5));
        assert_eq!(breakpoint_oracle(&p).unwrap(), z(0));
        let r = solve_univariate(&p).unwrap();
        assert_eq!(r.mu, z(0));
        assert_eq!(
            r.interval,
            Some(Interval {
                lower: z(0),
                upper: z(0)
            })
        );
    }

    #[test]
    fn zero_lower_bound_with_rising_term_is_not_attained() {
        let p = problem(&[(3, 2)], Value::Zero, z(1));
        let r = solve_univariate(&p).unwrap();
        assert_eq!(r.mu, Value::Zero);
        assert!(!r.attained);
        assert!(r.interval.is_none());
        assert!(breakpoint_oracle(&p).is_err());
    }

    #[test]
    fn zero_lower_bound_with_falling_term_is_attained() {
        // 1·x⁻² on (𝟘, 4]: least at the upper bound, 1 − 8 = −7, interval (𝟘-bounded) [4, 4]
        let p = problem(&[(1, -2)], Value::Zero, z(4));
        let r = solve_univariate(&p).unwrap();
        assert_eq!(r.mu, z(-7));
        assert_eq!(
            r.interval,
            Some(Interval {
                lower: z(4),
                upper: z(4)
            })
        );
    }

    #[test]
    fn rejects_wrong_arity() {
        let sf = ExactSemifield::max_plus();
        let p = Problem::new(
            Polynomial::new(sf, 2, vec![Monomial::new(z(0), vec![Rational::one(); 2])]).unwrap(),
            BoxConstraint::new(&sf, vec![z(0); 2], vec![z(1); 2]).unwrap(),
        )
        .unwrap();
        assert!(matches!(solve_univariate(&p), Err(Error::Usage(_))));
    }
}
