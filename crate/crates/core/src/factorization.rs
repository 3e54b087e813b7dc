//! The orthogonal-polynomial factorization of `G(n)`.
//!
//! With `x = q/p` and offset `a`:
//!
//! ```text
//! L[n][k] = (-1)^(n+k) p^(2k)     binom(n+k+a+x-1, k)   binom(n+a, k+a)
//! K[n][k] = (-1)^(n+k) p^(2(k+a)) binom(n+k+a+x-1, k+a) binom(n, k)
//! M[n]    = (2np + ap + q) / q
//! N[n]    = p^(2a) (2np + ap + q) binom(n+a+x-1, a) / (q binom(n+a, a))
//! ```
//!
//! The rows of `L` are orthogonal for the bilinear form of `G`, with
//! `L G L^T = N^-1` and `N L = M K`, so `G(n)^-1 = L^T N L = L^T M K`.
//! Everything here is checked exhaustively at finite size rather than proven.

use num_traits::{One, Zero};

use crate::exact::{binom_rational, int, pow_int};
use crate::matrices::hankel_g;
use crate::{Error, ExactMatrix, GCParams, Matrix, Rational, Report, Result};

fn sign(e: usize) -> Rational {
    if e.is_multiple_of(2) {
        int(1)
    } else {
        int(-1)
    }
}

fn p_pow(params: &GCParams, exp: usize) -> Rational {
    Rational::from_integer(pow_int(params.p, exp as u64))
}

/// `binom(m + a + q/p - 1, k)`, the rational-top binomial shared by `L` and `K`.
fn shifted_binom(params: &GCParams, m: usize, k: usize) -> Rational {
    let top = int((m + params.a) as i64 - 1) + params.q_over_p();
    binom_rational(&top, k as u64)
}

fn int_binom(n: usize, k: usize) -> Rational {
    binom_rational(&int(n as i64), k as u64)
}

/// Zero above the diagonal.
pub fn l_entry(params: &GCParams, n: usize, k: usize) -> Rational {
    if k > n {
        return Rational::zero();
    }
    let a = params.a;
    sign(n + k) * p_pow(params, 2 * k) * shifted_binom(params, n + k, k) * int_binom(n + a, k + a)
}

pub fn k_entry(params: &GCParams, n: usize, k: usize) -> Rational {
    if k > n {
        return Rational::zero();
    }
    let a = params.a;
    sign(n + k) * p_pow(params, 2 * (k + a)) * shifted_binom(params, n + k, k + a) * int_binom(n, k)
}

/// Numerator `2np + ap + q` of `M[n]`; never zero because `p` does not divide `q`.
pub fn m_numerator(params: &GCParams, n: usize) -> i64 {
    2 * n as i64 * params.p + params.a as i64 * params.p + params.q
}

pub fn m_entry(params: &GCParams, n: usize) -> Rational {
    Rational::new(m_numerator(params, n).into(), params.q.into())
}

pub fn n_entry(params: &GCParams, n: usize) -> Rational {
    let a = params.a;
    p_pow(params, 2 * a) * int(m_numerator(params, n)) * shifted_binom(params, n, a)
        / (int(params.q) * int_binom(n + a, a))
}

pub fn build_l(params: &GCParams, n: usize) -> ExactMatrix {
    Matrix::from_fn(n, n, |i, j| l_entry(params, i, j))
}

pub fn build_k(params: &GCParams, n: usize) -> ExactMatrix {
    Matrix::from_fn(n, n, |i, j| k_entry(params, i, j))
}

pub fn build_m(params: &GCParams, n: usize) -> Vec<Rational> {
    (0..n).map(|i| m_entry(params, i)).collect()
}

pub fn build_n(params: &GCParams, n: usize) -> Vec<Rational> {
    (0..n).map(|i| n_entry(params, i)).collect()
}

/// `L`, `K`, `diag(M)` and `diag(N)` at size `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct FactorizationBundle {
    pub params: GCParams,
    pub n: usize,
    pub l: ExactMatrix,
    pub k: ExactMatrix,
    pub m_diag: Vec<Rational>,
    pub n_diag: Vec<Rational>,
}

impl FactorizationBundle {
    /// Builds all four factors and cross-checks the two independently
    /// transcribed triangular factors through `N L = M K`.
    pub fn new(params: GCParams, n: usize) -> Result<Self> {
        let bundle = FactorizationBundle {
            params,
            n,
            l: build_l(&params, n),
            k: build_k(&params, n),
            m_diag: build_m(&params, n),
            n_diag: build_n(&params, n),
        };
        let report = bundle.nl_eq_mk_report();
        if let Some(v) = report.violations.first() {
            return Err(Error::IdentityViolated {
                identity: report.identity,
                indices: v.indices.clone(),
            });
        }
        Ok(bundle)
    }

    fn nl_eq_mk_report(&self) -> Report {
        let mut report = Report::new("nl-eq-mk", self.params.to_json(), self.n);
        for i in 0..self.n {
            for k in 0..self.n {
                let lhs = &self.n_diag[i] * self.l.get(i, k);
                let rhs = &self.m_diag[i] * self.k.get(i, k);
                report.check(&[i as i64, k as i64], &lhs, &rhs);
            }
        }
        report
    }

    /// Summand `L[i][r] M[i] K[i][c]` of entry `(r, c)` of the inverse.
    pub fn summand(&self, r: usize, c: usize, i: usize) -> Rational {
        self.l.get(i, r) * &self.m_diag[i] * self.k.get(i, c)
    }

    /// The same summand written as `K[i][r] M[i] L[i][c]`.
    pub fn summand_transposed(&self, r: usize, c: usize, i: usize) -> Rational {
        self.k.get(i, r) * &self.m_diag[i] * self.l.get(i, c)
    }

    /// `L^T diag(scale) K`, exploiting that `L^T` is upper and `K` lower
    /// triangular: entry `(r, c)` only sums `i >= max(r, c)`.
    pub fn inverse_with_diag(&self, scale: &[Rational]) -> ExactMatrix {
        let mk = Matrix::diag_from(scale)
            .matmul(&self.k)
            .expect("square factors of equal size");
        let n = self.n;
        Matrix::from_fn(n, n, |r, c| {
            let mut acc = Rational::zero();
            for i in r.max(c)..n {
                acc += self.l.get(i, r) * mk.get(i, c);
            }
            acc
        })
    }

    /// `G(n)^-1 = L^T M K`.
    pub fn inverse(&self) -> ExactMatrix {
        self.inverse_with_diag(&self.m_diag)
    }

    /// `(G(n)/q)^-1 = L^T (qM) K`.
    pub fn scaled_inverse(&self) -> ExactMatrix {
        let q = int(self.params.q);
        let scaled: Vec<Rational> = self.m_diag.iter().map(|m| m * &q).collect();
        self.inverse_with_diag(&scaled)
    }

    /// Largest bit length among the entries of `L`, `K` and `M`.
    pub fn max_bits(&self) -> u64 {
        let diag = Matrix::diag_from(&self.m_diag);
        self.l.max_bits().max(self.k.max_bits()).max(diag.max_bits())
    }
}

/// `alpha_n`, `beta_n`, `gamma_n` with
/// `alpha_n L(n,k) + beta_n L(n+1,k) + gamma_n L(n+1,k-1) = L(n+2,k)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThreeTermCoeffs {
    pub n: usize,
    pub alpha: Rational,
    pub beta: Rational,
    pub gamma: Rational,
}

pub fn three_term_coeffs(params: &GCParams, n: usize) -> ThreeTermCoeffs {
    let (p, q) = (params.p, params.q);
    let a = params.a as i64;
    let n = n as i64;
    let d1 = q + n * p + a * p + p;
    let d2 = q + 2 * n * p + a * p + p;
    // Both are congruent to q mod p.
    assert!(d1 != 0 && d2 != 0, "three-term denominators vanish for p={p}, q={q}");
    let lead = int(n + 2) * int(d1);
    let alpha = -(int(n + a + 1) * int(q + n * p) * int(q + 2 * n * p + a * p + 3 * p))
        / (lead.clone() * int(d2));
    let beta = -(int(q + 2 * n * p + a * p + 2 * p)
        * int(2 * n * q + a * q + 3 * q + 2 * n * n * p + 2 * a * n * p + 4 * n * p + (a + 1) * (a + 1) * p))
        / (lead.clone() * int(d2));
    let gamma = int(p) * int(q + 2 * n * p + a * p + 2 * p) * int(q + 2 * n * p + a * p + 3 * p) / lead;
    ThreeTermCoeffs {
        n: n as usize,
        alpha,
        beta,
        gamma,
    }
}

/// Checks the three-term recurrence for `0 <= n <= n_max - 2`, `0 <= k <= n + 2`.
pub fn verify_three_term(params: GCParams, n_max: usize) -> Report {
    let mut report = Report::new("three-term", params.to_json(), n_max);
    let l = build_l(&params, n_max + 1);
    let at = |r: usize, k: i64| -> Rational {
        if k < 0 {
            Rational::zero()
        } else {
            l.get(r, k as usize).clone()
        }
    };
    for n in 0..=n_max.saturating_sub(2) {
        let c = three_term_coeffs(&params, n);
        for k in 0..=(n as i64 + 2) {
            let lhs = &c.alpha * at(n, k) + &c.beta * at(n + 1, k) + &c.gamma * at(n + 1, k - 1);
            report.check(&[n as i64, k], &lhs, &at(n + 2, k));
        }
    }
    report
}

/// `L G L^T` at size `n`.
pub fn lglt(params: GCParams, n: usize) -> ExactMatrix {
    let l = build_l(&params, n);
    let g = hankel_g(params, n);
    l.matmul(&g)
        .and_then(|lg| lg.matmul(&l.transpose()))
        .expect("square factors of equal size")
}

/// `L G L^T` is diagonal, plus the two low-order row sums
/// `sum_k L[r][k] G[k][r-1] = 0` and `sum_k L[r][k] G[k][r-2] = 0` for `r >= 2`.
pub fn verify_orthogonality(params: GCParams, n: usize) -> Report {
    let mut report = Report::new("orthogonality", params.to_json(), n);
    let l = build_l(&params, n);
    let g = hankel_g(params, n);
    let lg = l.matmul(&g).expect("square");
    let p = lg.matmul(&l.transpose()).expect("square");
    let zero = Rational::zero();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                report.check(&[0, i as i64, j as i64], p.get(i, j), &zero);
            }
        }
    }
    for r in 2..n {
        for back in [1, 2] {
            report.check(&[back as i64, r as i64], lg.get(r, r - back), &zero);
        }
    }
    report
}

/// `L G` is upper triangular: `sum_k L[r][k] G[k][m] = 0` for all `m < r`.
pub fn verify_lg_upper(params: GCParams, n: usize) -> Report {
    let mut report = Report::new("lg-upper-triangular", params.to_json(), n);
    let lg = build_l(&params, n).matmul(&hankel_g(params, n)).expect("square");
    for r in 0..n {
        for m in 0..r {
            report.check(&[r as i64, m as i64], lg.get(r, m), &Rational::zero());
        }
    }
    report
}

/// Diagonal of `L G L^T` equals `1 / N`.
pub fn verify_norm(params: GCParams, n: usize) -> Report {
    let mut report = Report::new("norm", params.to_json(), n);
    let p = lglt(params, n);
    for i in 0..n {
        let nn = n_entry(&params, i);
        report.assert(&[i as i64, -1], !nn.is_zero(), || "N vanishes".into());
        if !nn.is_zero() {
            report.check(&[i as i64], p.get(i, i), &nn.recip());
        }
    }
    report
}

/// `N[i] L[i][k] = M[i] K[i][k]` for `0 <= k, i < n`.
pub fn verify_nl_eq_mk(params: GCParams, n: usize) -> Report {
    let bundle = FactorizationBundle {
        params,
        n,
        l: build_l(&params, n),
        k: build_k(&params, n),
        m_diag: build_m(&params, n),
        n_diag: build_n(&params, n),
    };
    bundle.nl_eq_mk_report()
}

/// `G(n)^-1` through the factorization.
pub fn inverse_via_lmk(params: GCParams, n: usize) -> Result<ExactMatrix> {
    Ok(FactorizationBundle::new(params, n)?.inverse())
}

/// Factorized inverse against the elimination oracle, `G G^-1 = I`, symmetry
/// of the inverse, and summand-wise agreement of `L M K` with `K M L`.
pub fn verify_inverse(params: GCParams, n: usize) -> Result<Report> {
    let mut report = Report::new("inverse", params.to_json(), n);
    let bundle = FactorizationBundle::new(params, n)?;
    let fast = bundle.inverse();
    let g = hankel_g(params, n);
    let oracle = g.invert_oracle()?;
    let product = g.matmul(&fast)?;
    let one = Rational::one();
    let zero = Rational::zero();
    for r in 0..n {
        for c in 0..n {
            let (ri, ci) = (r as i64, c as i64);
            report.check(&[0, ri, ci], fast.get(r, c), oracle.get(r, c));
            report.check(&[1, ri, ci], product.get(r, c), if r == c { &one } else { &zero });
            report.check(&[2, ri, ci], fast.get(r, c), fast.get(c, r));
            for i in r.max(c)..n {
                report.check(
                    &[3, ri, ci, i as i64],
                    &bundle.summand(r, c, i),
                    &bundle.summand_transposed(r, c, i),
                );
            }
        }
    }
    Ok(report)
}

fn integrality_report(identity: &str, params: GCParams, n: usize, m: &ExactMatrix) -> Report {
    let mut report = Report::new(identity, params.to_json(), n);
    for r in 0..n {
        for c in 0..n {
            let v = m.get(r, c);
            report.assert(&[r as i64, c as i64], v.is_integer(), || crate::exact::format_rational(v));
        }
    }
    report
}

/// `q G(n)^-1 = L^T (qM) K` is an integer matrix, and agrees with `q` times
/// the plain factorized inverse.
pub fn scaled_inverse_integrality(params: GCParams, n: usize) -> Result<Report> {
    let bundle = FactorizationBundle::new(params, n)?;
    let scaled = bundle.scaled_inverse();
    let mut report = integrality_report("scaled-integrality", params, n, &scaled);
    let plain = bundle.inverse().scale(&int(params.q));
    for r in 0..n {
        for c in 0..n {
            report.check(&[r as i64, c as i64, -1], scaled.get(r, c), plain.get(r, c));
        }
    }
    Ok(report)
}

/// `G(n)^-1` is an integer matrix; only claimed for `|q| in {1, 2}`.
pub fn main_integrality(params: GCParams, n: usize) -> Result<Report> {
    if !matches!(params.q.abs(), 1 | 2) {
        return Err(Error::UnsupportedCase(format!(
            "integrality of G(n)^-1 is only established for |q| in {{1, 2}}, got q={}",
            params.q
        )));
    }
    let inverse = inverse_via_lmk(params, n)?;
    Ok(integrality_report("integrality", params, n, &inverse))
}

/// `k`-th factor of the product formula for `det(G(n)^-1)`.
fn det_factor(params: &GCParams, k: usize) -> Rational {
    let a = params.a;
    let p2 = params.p_squared();
    Rational::from_integer(pow_int(p2, (2 * k + a) as u64))
        * m_entry(params, k)
        * shifted_binom(params, 2 * k, k)
        * shifted_binom(params, 2 * k, k + a)
}

/// `det(G(n)^-1) = prod_{k<n} (p^2)^(2k+a) (2kp+ap+q)/q binom(2k+a+x-1, k) binom(2k+a+x-1, k+a)`.
pub fn det_inverse_formula(params: GCParams, n: usize) -> Rational {
    (0..n).map(|k| det_factor(&params, k)).product()
}

/// Same product without the `1/q`: `det((G(n)/q)^-1)`.
pub fn det_scaled_inverse_formula(params: GCParams, n: usize) -> Rational {
    let q = int(params.q);
    (0..n).map(|k| det_factor(&params, k) * &q).product()
}

/// Both determinant products against elimination determinants of the
/// corresponding inverses, plus `det(G^-1) det(G) = 1`.
pub fn verify_determinants(params: GCParams, n: usize) -> Result<Report> {
    let mut report = Report::new("determinants", params.to_json(), n);
    let bundle = FactorizationBundle::new(params, n)?;
    let inv = bundle.inverse();
    let det_formula = det_inverse_formula(params, n);
    report.check(&[0], &det_formula, &inv.det_oracle()?);
    report.check(&[1], &det_scaled_inverse_formula(params, n), &bundle.scaled_inverse().det_oracle()?);
    report.check(&[2], &(det_formula * hankel_g(params, n).det_oracle()?), &Rational::one());
    Ok(report)
}
