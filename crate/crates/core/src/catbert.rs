//! The Hankel matrix of reciprocal Catalan numbers, `C(n)[i][j] = 1 / Cat_{i+j}`,
//! which equals `-2 G^(1,-3/2)(n)`.

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use crate::exact::{binom_rational, format_rational, int, pow_int, rat};
use crate::factorization::{det_inverse_formula, FactorizationBundle};
use crate::matrices::hankel_g;
use crate::sequences::catalan_numbers;
use crate::{Error, ExactMatrix, GCParams, Integer, Matrix, Rational, Report, Result};

/// Snapshot of the OEIS b-file for the determinant sequence of `C(n)^-1`.
pub const A296056_SNAPSHOT: &str = include_str!("../data/b296056.txt");

/// Known misprints in the published derivation, surfaced in reports.
pub const ERRATA: [&str; 2] = [
    "M[i] for (p,q,a) = (2,-3,1) is (4i-1)/(-3), not (4i-1)/3",
    "C = -2G gives C^-1 = -(1/2) G^-1; the sign is missing in the printed relation",
];

#[derive(Debug, Clone, PartialEq)]
pub struct CatbertMatrix {
    pub n: usize,
    pub matrix: ExactMatrix,
}

/// Builds `C(n)` from Catalan numbers and from `-2 G^(1,-3/2)(n)`, and checks
/// that the two constructions agree.
pub fn catbert_matrix(n: usize) -> Result<CatbertMatrix> {
    let cats = catalan_numbers(2 * n);
    let direct = Matrix::from_fn(n, n, |i, j| Rational::new(BigInt::one(), cats[i + j].clone()));
    let via_g = hankel_g(GCParams::catbert(), n).scale(&int(-2));
    if direct != via_g {
        return Err(Error::IdentityViolated {
            identity: "C = -2 G^(1,-3/2)".into(),
            indices: vec![n as i64],
        });
    }
    Ok(CatbertMatrix { n, matrix: direct })
}

/// `C(n)^-1 = -(1/2) L^T M K` for the Catalan parameters.
pub fn catbert_inverse(n: usize) -> Result<ExactMatrix> {
    let g_inv = FactorizationBundle::new(GCParams::catbert(), n)?.inverse();
    Ok(g_inv.scale(&rat(-1, 2)))
}

/// `det(C(n)^-1) = prod_{k<n} 4^(2k+1) (4k-1)/6 binom(2k-3/2, k) binom(2k-3/2, k+1)`.
pub fn catbert_det_formula(n: usize) -> Rational {
    (0..n)
        .map(|k| {
            let top = int(2 * k as i64) - rat(3, 2);
            Rational::from_integer(pow_int(4, 2 * k as u64 + 1))
                * rat(4 * k as i64 - 1, 6)
                * binom_rational(&top, k as u64)
                * binom_rational(&top, k as u64 + 1)
        })
        .product()
}

/// Integer determinants `det(C(n)^-1)` for `n = 1..=count`.
pub fn catbert_det_sequence(count: usize) -> Vec<Integer> {
    (1..=count)
        .map(|n| {
            let d = catbert_det_formula(n);
            assert!(d.is_integer(), "det(C({n})^-1) = {d} is not an integer");
            d.to_integer()
        })
        .collect()
}

/// Full check of the Catalan specialization at size `n`: the two constructions
/// of `C`, `C C^-1 = I`, integrality, and both determinant routes.
pub fn verify_catbert(n: usize) -> Result<Report> {
    let mut report = Report::new("catbert", GCParams::catbert().to_json(), n);
    for e in ERRATA {
        report.note(e);
    }
    let c = catbert_matrix(n)?;
    let inv = catbert_inverse(n)?;
    let product = c.matrix.matmul(&inv)?;
    let id = ExactMatrix::identity(n);
    for r in 0..n {
        for col in 0..n {
            let (ri, ci) = (r as i64, col as i64);
            report.check(&[0, ri, ci], product.get(r, col), id.get(r, col));
            let v = inv.get(r, col);
            report.assert(&[1, ri, ci], v.is_integer(), || format_rational(v));
        }
    }
    let formula = catbert_det_formula(n);
    report.check(&[2], &formula, &inv.det_oracle()?);
    let half_power = num_traits::pow(rat(-1, 2), n);
    report.check(&[3], &formula, &(half_power * det_inverse_formula(GCParams::catbert(), n)));
    Ok(report)
}

/// Parsed OEIS b-file: `(index, value)` pairs with strictly increasing index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BFile {
    pub id: String,
    pub entries: Vec<(i64, Integer)>,
}

/// Parses `index value` lines; blank lines and `#` comments are skipped.
pub fn parse_bfile(id: &str, text: &str) -> Result<BFile> {
    let mut entries: Vec<(i64, Integer)> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let malformed = || Error::MalformedLine {
            line: lineno + 1,
            content: raw.to_string(),
        };
        let mut fields = line.split_whitespace();
        let (Some(index), Some(value), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(malformed());
        };
        let index: i64 = index.parse().map_err(|_| malformed())?;
        let value: Integer = value.parse().map_err(|_| malformed())?;
        if entries.last().is_some_and(|(prev, _)| *prev >= index) {
            return Err(malformed());
        }
        entries.push((index, value));
    }
    Ok(BFile {
        id: id.to_string(),
        entries,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub index: i64,
    pub computed: String,
    pub expected: String,
}

/// Result of aligning a computed sequence against a b-file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OeisComparison {
    pub id: String,
    /// b-file index of `computed[0]`.
    pub offset: i64,
    /// Number of leading terms that agree.
    pub matched: usize,
    /// Number of terms that were comparable.
    pub compared: usize,
    pub first_mismatch: Option<Mismatch>,
}

impl OeisComparison {
    pub fn full_match(&self) -> bool {
        self.first_mismatch.is_none() && self.matched > 0
    }
}

/// Compares `computed[j]` with the b-file term at index `offset + j`.
pub fn oeis_compare(computed: &[Integer], bfile: &BFile, offset: i64) -> OeisComparison {
    let mut matched = 0;
    let mut compared = 0;
    let mut first_mismatch = None;
    for (j, value) in computed.iter().enumerate() {
        let index = offset + j as i64;
        let Some((_, expected)) = bfile.entries.iter().find(|(i, _)| *i == index) else {
            break;
        };
        compared += 1;
        if expected == value {
            if first_mismatch.is_none() {
                matched += 1;
            }
        } else if first_mismatch.is_none() {
            first_mismatch = Some(Mismatch {
                index,
                computed: value.to_string(),
                expected: expected.to_string(),
            });
        }
    }
    OeisComparison {
        id: bfile.id.clone(),
        offset,
        matched,
        compared,
        first_mismatch,
    }
}

/// Tries offsets `0..=2` and keeps the one with the longest matching prefix
/// (earliest offset on ties).
pub fn oeis_compare_auto(computed: &[Integer], bfile: &BFile) -> OeisComparison {
    (0..=2)
        .map(|offset| oeis_compare(computed, bfile, offset))
        .reduce(|best, next| if next.matched > best.matched { next } else { best })
        .expect("offset range is nonempty")
}

pub fn snapshot_bfile() -> BFile {
    parse_bfile("A296056", A296056_SNAPSHOT).expect("shipped snapshot is well formed")
}
