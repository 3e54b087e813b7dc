//! Generalized Catalan numbers `g^(q/p)_n = p^{2n} binom(n + q/p, n)`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::exact::{format_rational, int, rat};
use crate::{Error, Integer, Rational, Report, Result};

/// The triple `(p, q, a)` naming the sequence `g^(q/p)` and the offset `a` of
/// the Hankel matrix built from it.
///
/// Invariants: `p >= 2`, `q != 0`, `gcd(p, q) = 1`. Since `p` never divides
/// `q`, every expression of the form `q + m p` is nonzero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GCParams {
    pub p: i64,
    pub q: i64,
    pub a: usize,
}

impl GCParams {
    pub fn new(p: i64, q: i64, a: usize) -> Result<Self> {
        if p < 2 {
            return Err(Error::InvalidParams("p must be at least 2".into()));
        }
        if q == 0 || p.gcd(&q) != 1 {
            return Err(Error::InvalidParams(
                "q must be nonzero and coprime to p".into(),
            ));
        }
        Ok(GCParams { p, q, a })
    }

    /// `(p, q, a) = (2, -3, 1)`, whose Hankel matrix is `-1/2` times the
    /// matrix of reciprocal Catalan numbers.
    pub fn catbert() -> Self {
        GCParams { p: 2, q: -3, a: 1 }
    }

    pub fn with_offset(self, a: usize) -> Self {
        GCParams { a, ..self }
    }

    pub fn q_over_p(&self) -> Rational {
        rat(self.q, self.p)
    }

    pub fn p_squared(&self) -> i64 {
        self.p * self.p
    }

    pub fn to_json(&self) -> Value {
        json!({ "p": self.p, "q": self.q, "a": self.a })
    }
}

impl fmt::Display for GCParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(p={}, q={}, a={})", self.p, self.q, self.a)
    }
}

/// The first `terms.len()` members of `g^(q/p)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GCSequence {
    pub params: GCParams,
    pub terms: Vec<Integer>,
}

impl GCSequence {
    pub fn term(&self, n: usize) -> &Integer {
        &self.terms[n]
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Generates `g_0 .. g_{count-1}` using the ratio
/// `g_{n+1} = g_n * p (q + (n+1) p) / (n+1)`.
///
/// Each division is checked to be exact; a remainder means an integrality
/// theorem has been contradicted and is reported as [`Error::NonIntegerTerm`].
pub fn gen_catalan(params: GCParams, count: usize) -> Result<GCSequence> {
    let GCParams { p, q, .. } = params;
    let mut terms = Vec::with_capacity(count);
    let mut current = BigInt::from(1);
    for n in 0..count {
        if n > 0 {
            let step = n as i64;
            let numer = &current * BigInt::from(p) * BigInt::from(q + step * p);
            let (quot, rem) = numer.div_rem(&BigInt::from(step));
            if !rem.is_zero() {
                return Err(Error::NonIntegerTerm {
                    p,
                    q,
                    index: n,
                    value: format_rational(&Rational::new(numer, step.into())),
                });
            }
            current = quot;
        }
        terms.push(current.clone());
    }
    Ok(GCSequence { params, terms })
}

/// `Cat_0 .. Cat_{count-1}` via `Cat_n = -g^(-3/2)_{n+1} / 2`.
pub fn catalan_numbers(count: usize) -> Vec<Integer> {
    let g = gen_catalan(GCParams::catbert(), count + 1).expect("catalan parameters are valid");
    g.terms[1..]
        .iter()
        .map(|t| {
            let (quot, rem) = (-t).div_rem(&BigInt::from(2));
            debug_assert!(rem.is_zero());
            quot
        })
        .collect()
}

/// Checks the two shift recurrences linking `g^(q/p)` with `g^((q -+ p)/p)`:
///
/// * `g^(q/p)_n = g^((q-p)/p)_n + p^2 g^(q/p)_{n-1}`
/// * `g^(q/p)_n = g^((q+p)/p)_n - p^2 g^((q+p)/p)_{n-1}`
///
/// for `1 <= n < count`. Indices in violations are `[which, n]`.
pub fn check_shift_recurrences(params: GCParams, count: usize) -> Result<Report> {
    let GCParams { p, q, .. } = params;
    let mut report = Report::new("shift-recurrences", params.to_json(), count);
    let base = gen_catalan(params, count)?;
    let lower = gen_catalan(GCParams { q: q - p, ..params }, count)?;
    let upper = gen_catalan(GCParams { q: q + p, ..params }, count)?;
    let p2 = BigInt::from(p * p);
    for n in 1..count {
        let lhs = Rational::from_integer(base.terms[n].clone());
        let down = &lower.terms[n] + &p2 * &base.terms[n - 1];
        report.check(&[1, n as i64], &lhs, &Rational::from_integer(down));
        let up = &upper.terms[n] - &p2 * &upper.terms[n - 1];
        report.check(&[2, n as i64], &lhs, &Rational::from_integer(up));
    }
    Ok(report)
}

/// Checks the defining ratio `g_{n+1} / g_n = p (q + (n+1) p) / (n+1)` and that
/// every term is nonzero.
pub fn check_ratio_identity(seq: &GCSequence) -> Report {
    let GCParams { p, q, .. } = seq.params;
    let mut report = Report::new("ratio-identity", seq.params.to_json(), seq.len());
    for n in 0..seq.len() {
        report.assert(&[n as i64], !seq.terms[n].is_zero(), || "g_n = 0".into());
        if n + 1 < seq.len() && !seq.terms[n].is_zero() {
            let ratio = Rational::new(seq.terms[n + 1].clone(), seq.terms[n].clone());
            let m = n as i64 + 1;
            report.check(&[n as i64], &ratio, &(int(p) * int(q + m * p) / int(m)));
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{binom_rational, factorial};
    use num_traits::One;

    fn ints(v: &[i64]) -> Vec<Integer> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn param_validation() {
        assert!(GCParams::new(2, -3, 1).is_ok());
        assert!(GCParams::new(1, 3, 0).is_err());
        assert!(GCParams::new(7, 0, 0).is_err());
        assert!(GCParams::new(4, 2, 0).is_err());
        assert!(GCParams::new(3, -3, 0).is_err());
        let err = GCParams::new(7, 0, 0).unwrap_err().to_string();
        assert!(err.contains("q must be nonzero and coprime to p"));
    }

    #[test]
    fn catbert_sequence_prefix() {
        let g = gen_catalan(GCParams::catbert(), 5).unwrap();
        assert_eq!(g.terms, ints(&[1, -2, -2, -4, -10]));
    }

    #[test]
    fn central_binomials() {
        let g = gen_catalan(GCParams::new(2, -1, 0).unwrap(), 51).unwrap();
        assert_eq!(&g.terms[..5], &ints(&[1, 2, 6, 20, 70])[..]);
        for n in 0..=50u64 {
            let expected = factorial(2 * n) / (factorial(n) * factorial(n));
            assert_eq!(g.terms[n as usize], expected);
        }
    }

    #[test]
    fn single_term_is_one() {
        for (p, q) in [(2, 1), (3, -7), (5, 2)] {
            let g = gen_catalan(GCParams::new(p, q, 0).unwrap(), 1).unwrap();
            assert_eq!(g.terms, vec![BigInt::one()]);
        }
    }

    #[test]
    fn matches_both_closed_forms() {
        for params in crate::acceptance_grid() {
            let g = gen_catalan(params, 25).unwrap();
            let qp = params.q_over_p();
            let p2 = int(params.p_squared());
            for n in 0..25usize {
                let direct = num_traits::pow(p2.clone(), n)
                    * binom_rational(&(int(n as i64) + &qp), n as u64);
                let reflected = num_traits::pow(-p2.clone(), n)
                    * binom_rational(&(int(-1) - &qp), n as u64);
                let term = Rational::from_integer(g.terms[n].clone());
                assert_eq!(term, direct);
                assert_eq!(term, reflected);
            }
        }
    }

    #[test]
    fn catalan_against_convolution() {
        let cats = catalan_numbers(8);
        let mut oracle = vec![BigInt::one()];
        for n in 0..7 {
            let next: BigInt = (0..=n).map(|i| &oracle[i] * &oracle[n - i]).sum();
            oracle.push(next);
        }
        assert_eq!(cats, oracle);
        assert_eq!(catalan_numbers(4), ints(&[1, 1, 2, 5]));
        assert_eq!(cats[7], BigInt::from(429));
    }

    #[test]
    fn shift_recurrences_small() {
        for (p, q) in [(2, -3), (3, 2)] {
            let r = check_shift_recurrences(GCParams::new(p, q, 0).unwrap(), 10).unwrap();
            assert!(r.passed(), "{r:?}");
            assert_eq!(r.checked, 18);
        }
    }

    #[test]
    fn ratio_identity_on_grid() {
        for params in crate::acceptance_grid() {
            let r = check_ratio_identity(&gen_catalan(params, 40).unwrap());
            assert!(r.passed(), "{r:?}");
        }
    }
}
