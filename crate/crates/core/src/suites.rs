//! Named verification suites run over a parameter grid.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde_json::json;

use crate::catbert::{catbert_det_sequence, oeis_compare_auto, snapshot_bfile, verify_catbert};
use crate::factorization::{
    main_integrality, scaled_inverse_integrality, verify_determinants, verify_inverse, verify_lg_upper,
    verify_nl_eq_mk, verify_norm, verify_orthogonality, verify_three_term,
};
use crate::numbertheory::{lucas_scan, lucas_var1_scan, lucas_var2_scan, lucas_var3_scan, verify_certificates};
use crate::sequences::{check_ratio_identity, check_shift_recurrences, gen_catalan};
use crate::{Error, GCParams, Report, Result};

/// Sizes used when a suite has its own fixed range.
pub const SEQUENCE_TERMS: usize = 60;
pub const INVERSE_N_MAX: usize = 10;
pub const CERTIFICATE_N_MAX: usize = 8;
pub const CATBERT_N_MAX: usize = 15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Suite {
    Sequences,
    ThreeTerm,
    Orthogonality,
    Norm,
    NlEqMk,
    Inverse,
    Integrality,
    Determinants,
    Lucas,
    Certificates,
    Catbert,
}

impl Suite {
    pub const ALL: [Suite; 11] = [
        Suite::Sequences,
        Suite::ThreeTerm,
        Suite::Orthogonality,
        Suite::Norm,
        Suite::NlEqMk,
        Suite::Inverse,
        Suite::Integrality,
        Suite::Determinants,
        Suite::Lucas,
        Suite::Certificates,
        Suite::Catbert,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Sequences => "sequences",
            Suite::ThreeTerm => "three-term",
            Suite::Orthogonality => "orthogonality",
            Suite::Norm => "norm",
            Suite::NlEqMk => "nl-eq-mk",
            Suite::Inverse => "inverse",
            Suite::Integrality => "integrality",
            Suite::Determinants => "determinants",
            Suite::Lucas => "lucas",
            Suite::Certificates => "certificates",
            Suite::Catbert => "catbert",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Suite::ALL.iter().map(|s| s.name()).collect();
                Error::InvalidParams(format!("unknown suite {s:?}; expected one of {}", names.join(", ")))
            })
    }
}

fn per_size(identity: &str, params: GCParams, sizes: std::ops::RangeInclusive<usize>, mut f: impl FnMut(usize) -> Result<Report>) -> Result<Report> {
    let mut total = Report::new(identity, params.to_json(), *sizes.end());
    for n in sizes {
        total.absorb(f(n)?);
    }
    Ok(total)
}

/// Runs a parameter-dependent suite for one member of the grid. Returns
/// `None` when the suite does not apply to these parameters.
pub fn run_for_params(suite: Suite, params: GCParams, n_max: usize) -> Result<Option<Report>> {
    let inv_max = n_max.min(INVERSE_N_MAX);
    let report = match suite {
        Suite::Sequences => {
            let seq = gen_catalan(params, SEQUENCE_TERMS)?;
            let mut r = check_shift_recurrences(params, SEQUENCE_TERMS)?;
            r.identity = "sequences".into();
            r.absorb(check_ratio_identity(&seq));
            r
        }
        Suite::ThreeTerm => verify_three_term(params, n_max),
        Suite::Orthogonality => per_size("orthogonality", params, 1..=n_max, |n| {
            let mut r = verify_orthogonality(params, n);
            r.absorb(verify_lg_upper(params, n));
            Ok(r)
        })?,
        Suite::Norm => verify_norm(params, n_max),
        Suite::NlEqMk => verify_nl_eq_mk(params, n_max),
        Suite::Inverse => per_size("inverse", params, 1..=inv_max, |n| verify_inverse(params, n))?,
        Suite::Integrality => per_size("integrality", params, 1..=inv_max, |n| {
            let mut r = scaled_inverse_integrality(params, n)?;
            if params.q.abs() <= 2 {
                r.absorb(main_integrality(params, n)?);
            }
            Ok(r)
        })?,
        Suite::Determinants => per_size("determinants", params, 1..=inv_max, |n| verify_determinants(params, n))?,
        Suite::Certificates => {
            if params.q.abs() != 2 && params != GCParams::catbert() {
                return Ok(None);
            }
            per_size("certificates", params, 1..=n_max.min(CERTIFICATE_N_MAX), |n| {
                verify_certificates(params, n)
            })?
        }
        Suite::Lucas | Suite::Catbert => return Ok(None),
    };
    Ok(Some(report))
}

/// The four Lucas-type scans over their standard ranges.
pub fn lucas_reports() -> Vec<Report> {
    let mut out: Vec<Report> = [2, 3, 5].into_iter().map(|p| lucas_scan(p, 200)).collect();
    for (q, p) in [(3, 2), (2, 3), (5, 2), (3, 4)] {
        out.push(lucas_var1_scan(q, p, 120, 60));
    }
    out.push(lucas_var2_scan(120, 120));
    for (p, q) in [(2, -3), (3, 2), (5, -2)] {
        out.push(lucas_var3_scan(p, q, -50..=50, 60));
    }
    out
}

/// Catalan specialization up to `n_max` plus the b-file comparison.
pub fn catbert_report(n_max: usize) -> Result<Report> {
    let mut total = per_size("catbert", GCParams::catbert(), 1..=n_max, verify_catbert)?;
    let computed = catbert_det_sequence(n_max);
    let cmp = oeis_compare_auto(&computed, &snapshot_bfile());
    total.assert(&[-1, cmp.offset], cmp.full_match() && cmp.matched == n_max, || {
        serde_json::to_string(&cmp).expect("comparison serializes")
    });
    total.note(format!("A296056 snapshot: {} terms match at offset {}", cmp.matched, cmp.offset));
    Ok(total)
}

/// Runs `suites` over `grid`, in parallel across parameters; reports are
/// returned in suite order, then grid order.
pub fn run_suites(suites: &[Suite], grid: &[GCParams], n_max: usize) -> Result<Vec<Report>> {
    let mut out = Vec::new();
    for &suite in suites {
        match suite {
            Suite::Lucas => out.extend(lucas_reports()),
            Suite::Catbert => out.push(catbert_report(CATBERT_N_MAX)?),
            _ => {
                let reports: Vec<Option<Report>> = grid
                    .par_iter()
                    .map(|&params| run_for_params(suite, params, n_max))
                    .collect::<Result<_>>()?;
                out.extend(reports.into_iter().flatten());
            }
        }
    }
    Ok(out)
}

pub fn reports_to_json(reports: &[Report]) -> String {
    serde_json::to_string_pretty(&json!(reports)).expect("reports serialize")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("bogus".parse::<Suite>().is_err());
    }

    #[test]
    fn small_grid_run() {
        let grid = crate::grid::param_grid(&[3], &[2], &[1]);
        let reports = run_suites(&Suite::ALL[..8], &grid, 5).unwrap();
        assert_eq!(reports.len(), 8);
        assert!(reports.iter().all(Report::passed));
    }

    #[test]
    fn certificates_skip_unsupported() {
        let p = GCParams::new(5, 7, 0).unwrap();
        assert!(run_for_params(Suite::Certificates, p, 4).unwrap().is_none());
    }
}
