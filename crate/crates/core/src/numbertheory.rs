//! Lucas-type divisibility of binomial coefficients and constructive
//! divisibility certificates for the summands of `L^T M K`.
//!
//! Divisibility of a rational by a prime `p` means `v_p(x) >= 1` (or `x = 0`).

use num_bigint::BigInt;
use num_traits::One;
use serde::{Serialize, Serializer};
use serde_json::json;

use crate::exact::{binom_rational, divides, format_rational, int, legendre_valuation, rat, valuation};
use crate::factorization::{m_numerator, FactorizationBundle};
use crate::{Error, ExactMatrix, GCParams, Rational, Report, Result};

/// Lucas corollary: `p | binom(n, k)` whenever `p | n` and `p` does not divide `k`.
pub fn lucas_scan(p: u64, n_max: u64) -> Report {
    let mut report = Report::new("lucas", json!({ "p": p }), n_max as usize);
    for n in (0..=n_max).step_by(p as usize) {
        let mut b = BigInt::one();
        for k in 1..=n {
            b = b * BigInt::from(n - k + 1) / BigInt::from(k);
            if k % p != 0 {
                let value = Rational::from_integer(b.clone());
                report.assert(&[n as i64, k as i64], divides(p, &value), || b.to_string());
            }
        }
    }
    report
}

/// `q | p^(2k) binom(n + q/p, k)` for prime `q`, `q | n`, `k >= 1`, `q` not dividing `k`.
///
/// The hypothesis `p^2 n + p q = 0 (mod q)` reduces to `q | n` because
/// `gcd(p, q) = 1`; the scan confirms that equivalence for each `n` it visits.
pub fn lucas_var1_scan(q: i64, p: i64, n_max: i64, k_max: u64) -> Report {
    let mut report = Report::new("lucas-var1", json!({ "q": q, "p": p }), n_max as usize);
    let p2 = int(p * p);
    for n in 0..=n_max {
        let literal = (p * p * n + p * q).rem_euclid(q) == 0;
        report.assert(&[n, -1], literal == (n % q == 0), || "hypothesis mismatch".into());
        if n % q != 0 {
            continue;
        }
        let top = int(n) + rat(q, p);
        let mut value = Rational::one();
        for k in 1..=k_max {
            value = value * &p2 * (&top - int(k as i64 - 1)) / int(k as i64);
            if k as i64 % q != 0 {
                report.assert(&[n, k as i64], divides(q as u64, &value), || format_rational(&value));
            }
        }
    }
    report
}

/// `3 | 4^k binom(n + k - 3/2, k)` for `n = k = 2 (mod 3)`.
pub fn lucas_var2_scan(n_max: u64, k_max: u64) -> Report {
    let mut report = Report::new("lucas-var2", json!({ "q": -3, "p": 2 }), n_max as usize);
    for n in (2..=n_max).step_by(3) {
        for k in (2..=k_max).step_by(3) {
            let top = int((n + k) as i64) - rat(3, 2);
            let value = Rational::from_integer(crate::exact::pow_int(4, k)) * binom_rational(&top, k);
            report.assert(&[n as i64, k as i64], divides(3, &value), || format_rational(&value));
        }
    }
    report
}

/// `p | p^(2k) binom(n + q/p, k)` for prime `p`, `gcd(p, q) = 1`, any integer
/// `n` and `k >= 1`.
///
/// Every factor `pn + q - pi` of the numerator is prime to `p`, so the
/// valuation is exactly `k - v_p(k!)`, which is at least 1 by Legendre's
/// bound `v_p(k!) <= (k - 1)/(p - 1)`. Both facts are checked.
pub fn lucas_var3_scan(p: i64, q: i64, n_range: std::ops::RangeInclusive<i64>, k_max: u64) -> Report {
    let mut report = Report::new(
        "lucas-var3",
        json!({ "p": p, "q": q, "n_min": n_range.start(), "n_max": n_range.end() }),
        k_max as usize,
    );
    let p2 = int(p * p);
    for n in n_range {
        let top = int(n) + rat(q, p);
        let mut value = Rational::one();
        for k in 1..=k_max {
            value = value * &p2 * (&top - int(k as i64 - 1)) / int(k as i64);
            let expected = k as i64 - legendre_valuation(p as u64, k) as i64;
            let v = valuation(p as u64, &value);
            report.assert(&[n, k as i64], v == Ok(expected) && expected >= 1, || {
                format!("v_p({}) = {v:?}, expected {expected}", format_rational(&value))
            });
        }
    }
    report
}

/// Factor of a summand that carries the divisibility.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Witness {
    /// The numerator `2ip + ap + q` of `M[i]`.
    MNumerator,
    KFactor,
    LFactor,
}

/// Which of the two equal expansions of a summand the witness refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Orientation {
    /// `L[i][r] M[i] K[i][c]`; a K witness is `K[i][c]`.
    Direct,
    /// `K[i][r] M[i] L[i][c]`; an L witness is `L[i][c]`.
    Transposed,
}

fn ser_rational<S: Serializer>(x: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(x))
}

/// Record of why one summand of an inverse entry is divisible by `prime`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DivisibilityCertificate {
    pub prime: u64,
    /// Entry `(r, c)` of the inverse.
    pub entry: (usize, usize),
    /// Summation index `i` with `max(r, c) <= i < n`.
    pub summand: usize,
    pub witness: Witness,
    pub orientation: Orientation,
    /// Which case of the argument selected the witness.
    pub rule: &'static str,
    #[serde(serialize_with = "ser_rational")]
    pub witnessed_value: Rational,
    /// `None` when the witnessed value is zero.
    pub valuation: Option<i64>,
    /// The witnessed factor is divisible by `prime`.
    pub verified: bool,
    /// The summand of the certified matrix has nonnegative valuation at `prime`.
    pub summand_integral: bool,
}

/// The inverse matrix whose integrality a family of certificates establishes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CertifiedMatrix {
    /// `G(n)^-1` for `|q| = 2`.
    HankelInverse,
    /// `C(n)^-1 = -1/2 G^(1,-3/2)(n)^-1`.
    CatbertInverse,
}

impl CertifiedMatrix {
    pub fn for_params(params: &GCParams) -> Result<Self> {
        if *params == GCParams::catbert() {
            Ok(CertifiedMatrix::CatbertInverse)
        } else if params.q.abs() == 2 {
            Ok(CertifiedMatrix::HankelInverse)
        } else {
            Err(Error::UnsupportedCase(format!(
                "no divisibility argument for {params}: need |q| = 2 or the Catalan parameters"
            )))
        }
    }

    /// Primes that can appear in summand denominators.
    pub fn primes(self) -> &'static [u64] {
        match self {
            CertifiedMatrix::HankelInverse => &[2],
            CertifiedMatrix::CatbertInverse => &[2, 3],
        }
    }

    /// Factor relating `G(n)^-1` to this matrix.
    pub fn scale(self) -> Rational {
        match self {
            CertifiedMatrix::HankelInverse => int(1),
            CertifiedMatrix::CatbertInverse => rat(-1, 2),
        }
    }
}

/// Case analysis for `|q| = 2`, target 2 (so `p` is odd). `k` is the column of
/// the witnessed triangular factor.
fn rule_q2(a: usize, i: usize, k: usize) -> (Witness, &'static str) {
    if a.is_multiple_of(2) {
        (Witness::MNumerator, "a even: 2 | 2ip + ap + q")
    } else if i % 2 != k % 2 {
        if i.is_multiple_of(2) {
            (Witness::KFactor, "a odd, i even, k odd: 2 | binom(i, k)")
        } else {
            (Witness::LFactor, "a odd, i odd, k even: 2 | binom(i + a, k + a)")
        }
    } else if k % 2 == 1 {
        (Witness::LFactor, "a odd, i = k (mod 2), k odd: 2 | p^2k binom(i+k+a+q/p-1, k)")
    } else {
        (Witness::KFactor, "a odd, i = k (mod 2), k + a odd: 2 | p^2(k+a) binom(i+k+a+q/p-1, k+a)")
    }
}

/// Case analysis for the Catalan parameters `(2, -3, 1)`.
fn rule_catbert(prime: u64, i: usize, k: usize) -> (Witness, &'static str) {
    if prime == 2 {
        return (Witness::KFactor, "2 | 4^(k+1) binom(i+k-3/2, k+1)");
    }
    match (i % 3, k % 3) {
        (1, _) => (Witness::MNumerator, "i = 1 (mod 3): 3 | 4i - 1"),
        (0, 0) => (Witness::KFactor, "i = k = 0 (mod 3): 3 | 4^k binom(i+k-3/2, k+1)"),
        (0, _) => (Witness::KFactor, "i = 0, k != 0 (mod 3): 3 | binom(i, k)"),
        (_, 2) => (Witness::LFactor, "i = k = 2 (mod 3): 3 | 4^k binom(i+k-3/2, k)"),
        _ => (Witness::LFactor, "i = 2, k != 2 (mod 3): 3 | binom(i + 1, k + 1)"),
    }
}

/// One certificate per `(entry, summand)` of the inverse at size `n`, with the
/// witness chosen by the case analysis for `target` rather than by search.
pub fn build_divisibility_certificate(
    params: GCParams,
    n: usize,
    target: u64,
) -> Result<Vec<DivisibilityCertificate>> {
    let kind = CertifiedMatrix::for_params(&params)?;
    if !kind.primes().contains(&target) {
        return Err(Error::UnsupportedCase(format!(
            "prime {target} is not covered for {params}"
        )));
    }
    let bundle = FactorizationBundle::new(params, n)?;
    let scale = kind.scale();
    let mut certs = Vec::new();
    for r in 0..n {
        for c in 0..n {
            for i in r.max(c)..n {
                let (witness, rule) = match kind {
                    CertifiedMatrix::HankelInverse => rule_q2(params.a, i, c),
                    CertifiedMatrix::CatbertInverse => rule_catbert(target, i, c),
                };
                let (orientation, value) = match witness {
                    Witness::MNumerator => (Orientation::Direct, int(m_numerator(&params, i))),
                    Witness::KFactor => (Orientation::Direct, bundle.k.get(i, c).clone()),
                    Witness::LFactor => (Orientation::Transposed, bundle.l.get(i, c).clone()),
                };
                let summand = match orientation {
                    Orientation::Direct => bundle.summand(r, c, i),
                    Orientation::Transposed => bundle.summand_transposed(r, c, i),
                } * &scale;
                let v = valuation(target, &value).ok();
                certs.push(DivisibilityCertificate {
                    prime: target,
                    entry: (r, c),
                    summand: i,
                    witness,
                    orientation,
                    rule,
                    verified: v.is_none_or(|v| v >= 1),
                    witnessed_value: value,
                    valuation: v,
                    summand_integral: valuation(target, &summand).map_or(true, |v| v >= 0),
                });
            }
        }
    }
    Ok(certs)
}

/// The matrix a certificate family speaks about, computed directly.
pub fn certified_matrix(params: GCParams, n: usize) -> Result<ExactMatrix> {
    let kind = CertifiedMatrix::for_params(&params)?;
    Ok(FactorizationBundle::new(params, n)?.inverse().scale(&kind.scale()))
}

/// Builds certificates for every relevant prime, checks that each
/// `(entry, summand)` pair has one verified witness per prime, and that the
/// resulting integrality claim agrees with a direct scan of the matrix.
pub fn verify_certificates(params: GCParams, n: usize) -> Result<Report> {
    let kind = CertifiedMatrix::for_params(&params)?;
    let mut report = Report::new("certificates", params.to_json(), n);
    let expected = n * (n + 1) * (2 * n + 1) / 6;
    let mut all_ok = true;
    for &prime in kind.primes() {
        let certs = build_divisibility_certificate(params, n, prime)?;
        all_ok &= report.assert(&[prime as i64, -1], certs.len() == expected, || {
            format!("{} certificates, expected {expected}", certs.len())
        });
        for cert in &certs {
            let idx = [prime as i64, cert.entry.0 as i64, cert.entry.1 as i64, cert.summand as i64];
            all_ok &= report.assert(&idx, cert.verified && cert.summand_integral, || {
                format!("{:?} via {}: {}", cert.witness, cert.rule, format_rational(&cert.witnessed_value))
            });
        }
    }
    let direct = certified_matrix(params, n)?.is_integer_matrix().integral;
    report.assert(&[-1], all_ok == direct && direct, || {
        format!("certificates say {all_ok}, direct integrality says {direct}")
    });
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn value_of(p: i64, q: i64, n: i64, k: u64) -> Rational {
        Rational::from_integer(crate::exact::pow_int(p * p, k)) * binom_rational(&(int(n) + rat(q, p)), k)
    }

    #[test]
    fn lucas_examples() {
        assert!(divides(2, &int(4)));
        assert!(divides(3, &int(15)));
        let r = lucas_scan(3, 6);
        // n=3: k=1,2; n=6: k=1,2,4,5.
        assert_eq!(r.checked, 6);
        assert!(r.passed());
    }

    #[test]
    fn var1_examples() {
        assert_eq!(value_of(2, 3, 0, 1), int(6));
        assert_eq!(value_of(2, 3, 3, 2), int(126));
        assert!(lucas_var1_scan(3, 2, 30, 20).passed());
    }

    #[test]
    fn var2_examples() {
        let v = |n: i64, k: u64| {
            Rational::from_integer(crate::exact::pow_int(4, k))
                * binom_rational(&(int(n + k as i64) - rat(3, 2)), k)
        };
        assert_eq!(v(2, 2), int(30));
        assert_eq!(v(5, 2), int(198));
        assert!(divides(3, &v(2, 5)));
        assert!(lucas_var2_scan(30, 30).passed());
    }

    #[test]
    fn var3_examples() {
        assert_eq!(value_of(2, -3, 0, 1), int(-6));
        assert_eq!(value_of(3, 2, 1, 2), int(45));
        assert!(lucas_var3_scan(2, -3, -10..=10, 20).passed());
    }

    #[test]
    fn var1_fails_without_hypothesis() {
        // n = 1 is not a multiple of 3: 4 binom(1 + 3/2, 1) = 10.
        assert_eq!(value_of(2, 3, 1, 1), int(10));
        assert!(!divides(3, &int(10)));
    }

    #[test]
    fn catbert_witness_cases() {
        let certs = build_divisibility_certificate(GCParams::catbert(), 6, 3).unwrap();
        assert!(certs.iter().all(|c| c.verified && c.summand_integral));
        for c in &certs {
            if c.summand % 3 == 1 {
                assert_eq!(c.witness, Witness::MNumerator);
            }
        }
        let twos = build_divisibility_certificate(GCParams::catbert(), 6, 2).unwrap();
        assert!(twos.iter().all(|c| c.witness == Witness::KFactor && c.verified));
    }

    #[test]
    fn q2_even_offset_uses_m() {
        let certs = build_divisibility_certificate(GCParams::new(3, 2, 2).unwrap(), 5, 2).unwrap();
        assert!(certs.iter().all(|c| c.witness == Witness::MNumerator && c.verified));
        let odd = build_divisibility_certificate(GCParams::new(5, -2, 1).unwrap(), 6, 2).unwrap();
        assert!(odd.iter().all(|c| c.verified));
        assert!(odd.iter().any(|c| c.witness == Witness::LFactor));
        assert!(odd.iter().any(|c| c.witness == Witness::KFactor));
    }

    #[test]
    fn unsupported_cases() {
        let p = GCParams::new(5, 3, 0).unwrap();
        assert!(matches!(build_divisibility_certificate(p, 3, 2), Err(Error::UnsupportedCase(_))));
        let q2 = GCParams::new(3, 2, 0).unwrap();
        assert!(matches!(build_divisibility_certificate(q2, 3, 3), Err(Error::UnsupportedCase(_))));
    }

    #[test]
    fn wrong_witness_is_detected() {
        // For the Catalan parameters with i = 0 (mod 3) and k = 0, M[0] = -1/3
        // and 4i - 1 = -1 is a unit, so the M witness must not be used there.
        assert!(!divides(3, &int(m_numerator(&GCParams::catbert(), 0))));
    }

    #[test]
    fn certificates_agree_with_integrality() {
        assert!(verify_certificates(GCParams::catbert(), 5).unwrap().passed());
        assert!(verify_certificates(GCParams::new(3, -2, 1).unwrap(), 5).unwrap().passed());
    }

    #[test]
    fn certificate_json() {
        let certs = build_divisibility_certificate(GCParams::catbert(), 2, 3).unwrap();
        let v = serde_json::to_value(&certs[0]).unwrap();
        assert_eq!(v["prime"], 3);
        assert!(v["witnessed_value"].is_string());
    }
}
