//! Tropical Puiseux polynomials, box constraints and problem instances.

mod json;

pub use json::{parse_problem, serialize_problem, AnyProblem};

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::semifield::{Carrier, Semifield, Value};

/// `coeff ⊗ x₁^p₁ ⊗ … ⊗ x_N^p_N`.
#[derive(Debug, Clone, PartialEq)]
pub struct Monomial<C> {
    pub coeff: Value<C>,
    pub exponents: Vec<Rational>,
}

impl<C> Monomial<C> {
    pub fn new(coeff: Value<C>, exponents: Vec<Rational>) -> Self {
        Monomial { coeff, exponents }
    }
}

/// Value of `coeff ⊗ Π x_j^{exps_j}`. Every `x_j` must be nonzero.
pub fn monomial_value<C: Carrier>(
    sf: &Semifield<C>,
    coeff: &Value<C>,
    exponents: &[Rational],
    x: &[Value<C>],
) -> Result<Value<C>> {
    let mut acc = coeff.clone();
    for (p, xj) in exponents.iter().zip(x) {
        if p.is_zero() {
            continue;
        }
        acc = sf.otimes(&acc, &sf.tpow(xj, p)?);
    }
    Ok(acc)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial<C> {
    sf: Semifield<C>,
    arity: usize,
    monomials: Vec<Monomial<C>>,
}

impl<C: Carrier> Polynomial<C> {
    /// Builds a polynomial as given, without canonicalizing.
    pub fn new(sf: Semifield<C>, arity: usize, monomials: Vec<Monomial<C>>) -> Result<Self> {
        if arity == 0 {
            return Err(Error::validation(
                "arity",
                "polynomial needs at least one variable",
            ));
        }
        for (i, m) in monomials.iter().enumerate() {
            if m.exponents.len() != arity {
                return Err(Error::validation(
                    format!("monomials[{i}].exponents"),
                    format!("expected {arity} exponents, found {}", m.exponents.len()),
                ));
            }
        }
        Ok(Polynomial {
            sf,
            arity,
            monomials,
        })
    }

    pub fn semifield(&self) -> Semifield<C> {
        self.sf
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn monomials(&self) -> &[Monomial<C>] {
        &self.monomials
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    /// Drops 𝟘 terms, merges equal exponent vectors by ⊕ and sorts
    /// lexicographically by exponent vector.
    pub fn canonicalize(&self) -> Polynomial<C> {
        Polynomial {
            sf: self.sf,
            arity: self.arity,
            monomials: canonical_terms(&self.sf, self.monomials.clone()),
        }
    }

    pub fn is_canonical(&self) -> bool {
        self.monomials.iter().all(|m| !m.coeff.is_zero())
            && self
                .monomials
                .windows(2)
                .all(|w| w[0].exponents.cmp(&w[1].exponents) == Ordering::Less)
    }

    /// ⊕ of all terms at `x`; the empty polynomial evaluates to 𝟘.
    pub fn evaluate(&self, x: &[Value<C>]) -> Result<Value<C>> {
        if x.len() != self.arity {
            return Err(Error::Usage(format!(
                "point has {} coordinates, polynomial has arity {}",
                x.len(),
                self.arity
            )));
        }
        if let Some(j) = x.iter().position(Value::is_zero) {
            return Err(Error::Domain(format!("x[{j}] is the zero element")));
        }
        let mut acc = Value::Zero;
        for m in &self.monomials {
            let t = monomial_value(&self.sf, &m.coeff, &m.exponents, x)?;
            acc = self.sf.oplus(&acc, &t);
        }
        Ok(acc)
    }

    /// Per-term values at `x`, in monomial order.
    pub fn term_values(&self, x: &[Value<C>]) -> Result<Vec<Value<C>>> {
        self.monomials
            .iter()
            .map(|m| monomial_value(&self.sf, &m.coeff, &m.exponents, x))
            .collect()
    }
}

/// Zero-drop, sort, and ⊕-merge of equal exponent vectors.
pub(crate) fn canonical_terms<C: Carrier>(
    sf: &Semifield<C>,
    mut terms: Vec<Monomial<C>>,
) -> Vec<Monomial<C>> {
    terms.retain(|m| !m.coeff.is_zero());
    terms.sort_by(|a, b| a.exponents.cmp(&b.exponents));
    let mut out: Vec<Monomial<C>> = Vec::with_capacity(terms.len());
    for m in terms {
        match out.last_mut() {
            Some(last) if last.exponents == m.exponents => {
                last.coeff = sf.oplus(&last.coeff, &m.coeff);
            }
            _ => out.push(m),
        }
    }
    out
}

/// Per-variable bounds `g_j ≤ x_j ≤ h_j` in the induced order.
///
/// A lower bound may be 𝟘, which leaves the variable unbounded below while
/// still requiring `x_j ≠ 𝟘`. Upper bounds are always nonzero.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxConstraint<C> {
    lower: Vec<Value<C>>,
    upper: Vec<Value<C>>,
}

impl<C: Carrier> BoxConstraint<C> {
    pub fn new(sf: &Semifield<C>, lower: Vec<Value<C>>, upper: Vec<Value<C>>) -> Result<Self> {
        if lower.len() != upper.len() {
            return Err(Error::validation(
                "box",
                format!(
                    "lower has {} entries but upper has {}",
                    lower.len(),
                    upper.len()
                ),
            ));
        }
        for (j, (g, h)) in lower.iter().zip(&upper).enumerate() {
            if h.is_zero() {
                return Err(Error::validation(
                    format!("box.upper[{j}]"),
                    "upper bound must not be the zero element",
                ));
            }
            if !sf.leq(g, h) {
                return Err(Error::validation(
                    format!("box.lower[{j}]"),
                    format!(
                        "lower bound {} exceeds upper bound {}",
                        sf.format(g),
                        sf.format(h)
                    ),
                ));
            }
        }
        Ok(BoxConstraint { lower, upper })
    }

    pub fn lower(&self) -> &[Value<C>] {
        &self.lower
    }

    pub fn upper(&self) -> &[Value<C>] {
        &self.upper
    }

    pub fn len(&self) -> usize {
        self.lower.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lower.is_empty()
    }

    pub fn is_compact(&self) -> bool {
        self.lower.iter().all(|g| !g.is_zero())
    }

    pub fn contains(&self, sf: &Semifield<C>, x: &[Value<C>]) -> bool {
        x.len() == self.len()
            && x.iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(xj, (g, h))| !xj.is_zero() && sf.leq(g, xj) && sf.leq(xj, h))
    }

    /// The first `n` variables' bounds.
    pub fn prefix(&self, n: usize) -> BoxConstraint<C> {
        BoxConstraint {
            lower: self.lower[..n].to_vec(),
            upper: self.upper[..n].to_vec(),
        }
    }
}

/// Minimize a polynomial over a box.
#[derive(Debug, Clone, PartialEq)]
pub struct Problem<C> {
    polynomial: Polynomial<C>,
    bounds: BoxConstraint<C>,
}

impl<C: Carrier> Problem<C> {
    /// Validates the instance and canonicalizes the polynomial.
    pub fn new(polynomial: Polynomial<C>, bounds: BoxConstraint<C>) -> Result<Self> {
        if polynomial.arity() != bounds.len() {
            return Err(Error::validation(
                "box",
                format!(
                    "box has {} variables, polynomial has arity {}",
                    bounds.len(),
                    polynomial.arity()
                ),
            ));
        }
        if polynomial.is_empty() {
            return Err(Error::validation(
                "monomials",
                "at least one monomial is required",
            ));
        }
        if let Some(i) = polynomial
            .monomials()
            .iter()
            .position(|m| m.coeff.is_zero())
        {
            return Err(Error::validation(
                format!("monomials[{i}].coeff"),
                "coefficient must not be the zero element",
            ));
        }
        Ok(Problem {
            polynomial: polynomial.canonicalize(),
            bounds,
        })
    }

    pub fn semifield(&self) -> Semifield<C> {
        self.polynomial.semifield()
    }

    pub fn polynomial(&self) -> &Polynomial<C> {
        &self.polynomial
    }

    pub fn bounds(&self) -> &BoxConstraint<C> {
        &self.bounds
    }

    pub fn arity(&self) -> usize {
        self.polynomial.arity()
    }

    pub fn evaluate(&self, x: &[Value<C>]) -> Result<Value<C>> {
        self.polynomial.evaluate(x)
    }
}

impl Problem<Rational> {
    /// The same instance in float mode. Coefficients and bounds are rounded to
    /// the nearest `f64`; exponents stay exact.
    pub fn to_float(&self) -> Problem<f64> {
        let sf = Semifield::<f64>::new(self.semifield().id())
            .expect("additive semifields exist in float mode");
        let conv = |v: &Value<Rational>| match v {
            Value::Zero => Value::Zero,
            Value::Finite(r) => Value::Finite(r.to_f64()),
        };
        let monos = self
            .polynomial
            .monomials()
            .iter()
            .map(|m| Monomial::new(conv(&m.coeff), m.exponents.clone()))
            .collect();
        let bounds = BoxConstraint {
            lower: self.bounds.lower().iter().map(conv).collect(),
            upper: self.bounds.upper().iter().map(conv).collect(),
        };
        Problem {
            polynomial: Polynomial::new(sf, self.arity(), monos)
                .expect("shape is unchanged")
                .canonicalize(),
            bounds,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semifield::ExactSemifield;

    fn r(n: i64) -> Rational {
        Rational::from_integer(n)
    }

    fn v(n: i64) -> Value<Rational> {
        Value::Finite(r(n))
    }

    fn mono(c: Value<Rational>, e: &[i64]) -> Monomial<Rational> {
        Monomial::new(c, e.iter().map(|&x| r(x)).collect())
    }

    #[test]
    fn canonicalize_merges_with_oplus() {
        let mp = ExactSemifield::max_plus();
        let p = Polynomial::new(mp, 1, vec![mono(v(3), &[1]), mono(v(5), &[1])]).unwrap();
        assert_eq!(p.canonicalize().monomials(), &[mono(v(5), &[1])]);
    }

    #[test]
    fn canonicalize_drops_zero_terms() {
        let mp = ExactSemifield::max_plus();
        let p =
            Polynomial::new(mp, 2, vec![mono(Value::Zero, &[1, 0]), mono(v(2), &[0, 1])]).unwrap();
        assert_eq!(p.canonicalize().monomials(), &[mono(v(2), &[0, 1])]);
    }

    #[test]
    fn canonicalize_is_idempotent_on_repeats() {
        let mp = ExactSemifield::max_plus();
        let p = Polynomial::new(mp, 1, vec![mono(v(1), &[0]); 3]).unwrap();
        let c = p.canonicalize();
        assert_eq!(c.monomials(), &[mono(v(1), &[0])]);
        assert_eq!(c.canonicalize(), c);
        assert!(c.is_canonical());
    }

    #[test]
    fn canonical_order_is_lexicographic() {
        let mp = ExactSemifield::max_plus();
        let p = Polynomial::new(
            mp,
            2,
            vec![
                mono(v(0), &[1, -1]),
                mono(v(0), &[-1, 1]),
                mono(v(0), &[1, -2]),
            ],
        )
        .unwrap()
        .canonicalize();
        let exps: Vec<_> = p.monomials().iter().map(|m| m.exponents.clone()).collect();
        assert_eq!(
            exps,
            vec![vec![r(-1), r(1)], vec![r(1), r(-2)], vec![r(1), r(-1)]]
        );
    }

    #[test]
    fn evaluate_examples() {
        let mp = ExactSemifield::max_plus();
        // 2·x^3 ⊕ (−1)·x^(−1) at x = 1: max(2+3, −1−1) = 5
        let f = Polynomial::new(mp, 1, vec![mono(v(2), &[3]), mono(v(-1), &[-1])]).unwrap();
        assert_eq!(f.evaluate(&[v(1)]).unwrap(), v(5));

        let empty = Polynomial::<Rational>::new(mp, 1, vec![]).unwrap();
        assert_eq!(empty.evaluate(&[v(4)]).unwrap(), Value::Zero);

        let c = Polynomial::new(mp, 3, vec![mono(v(-7), &[0, 0, 0])]).unwrap();
        assert_eq!(c.evaluate(&[v(1), v(-9), v(100)]).unwrap(), v(-7));
    }

    #[test]
    fn evaluate_rejects_zero_coordinates() {
        let mp = ExactSemifield::max_plus();
        let f = Polynomial::new(mp, 1, vec![mono(v(0), &[1])]).unwrap();
        assert!(matches!(f.evaluate(&[Value::Zero]), Err(Error::Domain(_))));
        assert!(matches!(f.evaluate(&[v(1), v(2)]), Err(Error::Usage(_))));
    }

    #[test]
    fn box_validation() {
        let mp = ExactSemifield::max_plus();
        assert!(BoxConstraint::new(&mp, vec![v(2)], vec![v(1)]).is_err());
        assert!(BoxConstraint::new(&mp, vec![v(0)], vec![Value::Zero]).is_err());
        assert!(BoxConstraint::new(&mp, vec![Value::Zero], vec![v(1)]).is_ok());
        let err = BoxConstraint::new(&mp, vec![v(0), v(3)], vec![v(1), v(2)]).unwrap_err();
        assert!(matches!(err, Error::Validation { path, .. } if path == "box.lower[1]"));
    }

    #[test]
    fn problem_rejects_zero_coefficients_and_arity_mismatch() {
        let mp = ExactSemifield::max_plus();
        let b = BoxConstraint::new(&mp, vec![v(0)], vec![v(1)]).unwrap();
        let f = Polynomial::new(mp, 1, vec![mono(Value::Zero, &[1])]).unwrap();
        assert!(Problem::new(f, b.clone()).is_err());
        let g = Polynomial::new(mp, 2, vec![mono(v(0), &[1, 1])]).unwrap();
        assert!(Problem::new(g, b).is_err());
    }
}
