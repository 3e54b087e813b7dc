//! Dense matrices over a [`Scalar`] field, the Hankel matrices `G(n)`, and the
//! fraction-free elimination used as an independent oracle for inverses and
//! determinants.

use std::ops::Index;

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::exact::{format_rational, parse_rational};
use crate::sequences::gen_catalan;
use crate::{Error, ExactMatrix, FloatMatrix, GCParams, Integer, Rational, Result, Scalar};

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                left: (rows, cols),
                right: (data.len(), 1),
            });
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|row| row.len() != c) {
            return Err(Error::DimensionMismatch {
                left: (r, c),
                right: (1, bad.len()),
            });
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| T::zero())
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn diag_from(values: &[T]) -> Self {
        let n = values.len();
        Self::from_fn(n, n, |i, j| if i == j { values[i].clone() } else { T::zero() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn scale(&self, factor: &T) -> Self {
        self.map(|x| x.clone() * factor.clone())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    /// Upper-left `n x n` block.
    pub fn leading(&self, n: usize) -> Self {
        assert!(n <= self.rows && n <= self.cols);
        Self::from_fn(n, n, |i, j| self.get(i, j).clone())
    }

    /// Exact product. Output rows are computed in parallel; each entry is a
    /// fixed left-to-right sum so the result does not depend on scheduling.
    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                left: self.shape(),
                right: other.shape(),
            });
        }
        let cols = other.cols;
        let data: Vec<T> = (0..self.rows)
            .into_par_iter()
            .flat_map_iter(|i| {
                (0..cols).map(move |j| {
                    let mut acc = T::zero();
                    for k in 0..self.cols {
                        let a = self.get(i, k);
                        if a.is_zero() {
                            continue;
                        }
                        acc = acc + a.clone() * other.get(k, j).clone();
                    }
                    acc
                })
            })
            .collect();
        Ok(Matrix {
            rows: self.rows,
            cols,
            data,
        })
    }

    /// Multiplies on the left by `diag(values)`, i.e. scales row `i` by `values[i]`.
    pub fn scale_rows(&self, values: &[T]) -> Result<Self> {
        if values.len() != self.rows {
            return Err(Error::DimensionMismatch {
                left: (values.len(), values.len()),
                right: self.shape(),
            });
        }
        Ok(Self::from_fn(self.rows, self.cols, |i, j| {
            values[i].clone() * self.get(i, j).clone()
        }))
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn is_lower_triangular(&self) -> bool {
        (0..self.rows).all(|i| (i + 1..self.cols).all(|j| self.get(i, j).is_zero()))
    }

    pub fn is_upper_triangular(&self) -> bool {
        (0..self.rows).all(|i| (0..i.min(self.cols)).all(|j| self.get(i, j).is_zero()))
    }

    pub fn is_diagonal(&self) -> bool {
        self.is_lower_triangular() && self.is_upper_triangular()
    }

    /// Determinant by Gaussian elimination over the field `T`, pivoting on the
    /// first nonzero entry of each column.
    pub fn det_gauss(&self) -> Result<T> {
        if !self.is_square() {
            return Err(Error::NotSquare(self.rows, self.cols));
        }
        let n = self.rows;
        let mut work = self.clone();
        let mut det = T::one();
        for c in 0..n {
            let Some(pivot) = (c..n).find(|&r| !work.get(r, c).is_zero()) else {
                return Ok(T::zero());
            };
            if pivot != c {
                work.swap_rows(pivot, c);
                det = -det;
            }
            let head = work.get(c, c).clone();
            det = det * head.clone();
            for r in c + 1..n {
                let factor = work.get(r, c).clone() / head.clone();
                if factor.is_zero() {
                    continue;
                }
                for j in c..n {
                    let v = work.get(r, j).clone() - factor.clone() * work.get(c, j).clone();
                    work.set(r, j, v);
                }
            }
        }
        Ok(det)
    }

    /// Gauss-Jordan inverse over the field `T`.
    pub fn inverse_gauss(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::NotSquare(self.rows, self.cols));
        }
        let n = self.rows;
        let mut work = self.clone();
        let mut inv = Self::identity(n);
        for c in 0..n {
            let pivot = (c..n)
                .find(|&r| !work.get(r, c).is_zero())
                .ok_or(Error::SingularMatrix)?;
            work.swap_rows(pivot, c);
            inv.swap_rows(pivot, c);
            let head = work.get(c, c).clone();
            for j in 0..n {
                work.set(c, j, work.get(c, j).clone() / head.clone());
                inv.set(c, j, inv.get(c, j).clone() / head.clone());
            }
            for r in 0..n {
                if r == c || work.get(r, c).is_zero() {
                    continue;
                }
                let factor = work.get(r, c).clone();
                for j in 0..n {
                    let w = work.get(r, j).clone() - factor.clone() * work.get(c, j).clone();
                    work.set(r, j, w);
                    let v = inv.get(r, j).clone() - factor.clone() * inv.get(c, j).clone();
                    inv.set(r, j, v);
                }
            }
        }
        Ok(inv)
    }

    fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;

    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

/// Result of an integrality scan: `offenders` is empty iff `integral`.
#[derive(Debug, Clone, PartialEq)]
pub struct IntegralityCheck {
    pub integral: bool,
    pub offenders: Vec<(usize, usize, Rational)>,
}

/// Per-run statistics of the fraction-free elimination.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EliminationStats {
    /// Largest bit length of any integer held during elimination.
    pub max_bits: u64,
    /// Number of big-integer multiplications performed.
    pub multiplications: u64,
}

/// `G(n)` with entries `1 / g_{i+j+a}`.
pub fn hankel_g(params: GCParams, n: usize) -> ExactMatrix {
    let g = gen_catalan(params, 2 * n + params.a).expect("valid parameters give integer terms");
    Matrix::from_fn(n, n, |i, j| {
        Rational::new(BigInt::one(), g.terms[i + j + params.a].clone())
    })
}

impl ExactMatrix {
    /// Determinant via denominator clearing followed by Bareiss elimination.
    pub fn det_oracle(&self) -> Result<Rational> {
        if !self.is_square() {
            return Err(Error::NotSquare(self.rows, self.cols));
        }
        let (mut work, scale) = self.clear_denominators();
        let mut stats = EliminationStats::default();
        let det = bareiss_forward(&mut work, self.rows, &mut stats);
        Ok(Rational::new(det, scale))
    }

    /// Exact inverse via fraction-free elimination, verified by `A * A^-1 = I`.
    pub fn invert_oracle(&self) -> Result<Self> {
        self.invert_oracle_with_stats().map(|(inv, _)| inv)
    }

    pub fn invert_oracle_with_stats(&self) -> Result<(Self, EliminationStats)> {
        if !self.is_square() {
            return Err(Error::NotSquare(self.rows, self.cols));
        }
        let n = self.rows;
        // Row i of B is d_i times row i of A, so A^-1 = B^-1 diag(d).
        let row_scales: Vec<Integer> = (0..n).map(|i| row_lcm(self.row(i))).collect();
        let mut aug: Vec<Vec<Integer>> = (0..n)
            .map(|i| {
                let mut row: Vec<Integer> = self
                    .row(i)
                    .iter()
                    .map(|x| x.numer() * (&row_scales[i] / x.denom()))
                    .collect();
                row.extend((0..n).map(|j| if i == j { row_scales[i].clone() } else { BigInt::zero() }));
                row
            })
            .collect();
        let mut stats = EliminationStats::default();
        let det = bareiss_forward(&mut aug, n, &mut stats);
        if det.is_zero() {
            return Err(Error::SingularMatrix);
        }
        // Back substitution on the upper-triangular integer system.
        let mut inv = Self::zeros(n, n);
        for col in 0..n {
            for i in (0..n).rev() {
                let mut acc = Rational::from_integer(aug[i][n + col].clone());
                for (k, a) in aug[i].iter().enumerate().take(n).skip(i + 1) {
                    acc -= Rational::from_integer(a.clone()) * inv.get(k, col);
                }
                inv.set(i, col, acc / Rational::from_integer(aug[i][i].clone()));
            }
        }
        let check = self.matmul(&inv)?;
        assert!(check == Self::identity(n), "elimination inverse failed verification");
        Ok((inv, stats))
    }

    pub fn is_integer_matrix(&self) -> IntegralityCheck {
        let offenders: Vec<_> = (0..self.rows)
            .flat_map(|i| (0..self.cols).map(move |j| (i, j)))
            .filter(|&(i, j)| !self.get(i, j).is_integer())
            .map(|(i, j)| (i, j, self.get(i, j).clone()))
            .collect();
        IntegralityCheck {
            integral: offenders.is_empty(),
            offenders,
        }
    }

    /// Largest bit length among numerators and denominators.
    pub fn max_bits(&self) -> u64 {
        self.data
            .iter()
            .map(|x| x.numer().bits().max(x.denom().bits()))
            .max()
            .unwrap_or(0)
    }

    pub fn to_f64(&self) -> FloatMatrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect(),
        }
    }

    pub fn to_string_rows(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(format_rational).collect())
            .collect()
    }

    /// JSON array of arrays of exact strings.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_string_rows()).expect("strings serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let rows: Vec<Vec<String>> =
            serde_json::from_str(text).map_err(|e| Error::ParseRational(e.to_string()))?;
        let parsed = rows
            .iter()
            .map(|r| r.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(parsed)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for row in self.to_string_rows() {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let rows = text
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(|l| l.split(',').map(parse_rational).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(rows)
    }

    /// Whitespace-aligned rows for terminal output.
    pub fn to_plain(&self) -> String {
        let rows = self.to_string_rows();
        let width = rows.iter().flatten().map(String::len).max().unwrap_or(0);
        let mut out = String::new();
        for row in rows {
            let line: Vec<String> = row.iter().map(|s| format!("{s:>width$}")).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    /// Returns `(B, s)` with `B` integral and `det(A) = det(B) / s`.
    fn clear_denominators(&self) -> (Vec<Vec<Integer>>, Integer) {
        let mut scale = BigInt::one();
        let rows = (0..self.rows)
            .map(|i| {
                let l = row_lcm(self.row(i));
                let row = self.row(i).iter().map(|x| x.numer() * (&l / x.denom())).collect();
                scale *= l;
                row
            })
            .collect();
        (rows, scale)
    }
}

fn row_lcm(row: &[Rational]) -> Integer {
    row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

/// In-place Bareiss elimination on the first `n` columns of `work` (which may
/// carry extra augmented columns). Returns the determinant of the leading
/// `n x n` block, zero if it is singular.
fn bareiss_forward(work: &mut [Vec<Integer>], n: usize, stats: &mut EliminationStats) -> Integer {
    let width = work.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut negate = false;
    for k in 0..n {
        let Some(pivot) = (k..n).find(|&r| !work[r][k].is_zero()) else {
            return BigInt::zero();
        };
        if pivot != k {
            work.swap(pivot, k);
            negate = !negate;
        }
        let (head, tail) = work.split_at_mut(k + 1);
        let pivot_row = &head[k];
        for row in tail.iter_mut() {
            for j in k + 1..width {
                let v = (&row[j] * &pivot_row[k] - &row[k] * &pivot_row[j]) / &prev;
                stats.multiplications += 2;
                stats.max_bits = stats.max_bits.max(v.bits());
                row[j] = v;
            }
            row[k] = BigInt::zero();
        }
        prev = pivot_row[k].clone();
    }
    let det = work[n - 1][n - 1].clone();
    if negate {
        -det
    } else {
        det
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};
    use num_traits::Signed;
    use proptest::prelude::*;

    fn m(rows: &[&[(i64, i64)]]) -> ExactMatrix {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&(a, b)| rat(a, b)).collect())
                .collect(),
        )
        .unwrap()
    }

    fn arb_matrix(n: usize) -> impl Strategy<Value = ExactMatrix> {
        proptest::collection::vec((-9i64..10, 1i64..6), n * n).prop_map(move |v| {
            Matrix::new(n, n, v.into_iter().map(|(a, b)| rat(a, b)).collect()).unwrap()
        })
    }

    #[test]
    fn hankel_catbert_small() {
        let g = hankel_g(GCParams::catbert(), 2);
        assert_eq!(g, m(&[&[(-1, 2), (-1, 2)], &[(-1, 2), (-1, 4)]]));
        assert_eq!(hankel_g(GCParams::new(2, -3, 0).unwrap(), 1), m(&[&[(1, 1)]]));
    }

    #[test]
    fn hankel_structure() {
        for params in crate::acceptance_grid() {
            let g = hankel_g(params, 6);
            assert!(g.is_symmetric());
            for i in 0..6 {
                for j in 0..6 {
                    if i + j >= 1 && i >= 1 && j + 1 < 6 {
                        assert_eq!(g[(i, j)], g[(i - 1, j + 1)]);
                    }
                }
            }
        }
    }

    #[test]
    fn oracle_examples() {
        let a = m(&[&[(1, 1), (1, 1)], &[(1, 1), (1, 2)]]);
        assert_eq!(a.det_oracle().unwrap(), rat(-1, 2));
        let inv = a.invert_oracle().unwrap();
        assert_eq!(inv, m(&[&[(-1, 1), (2, 1)], &[(2, 1), (-2, 1)]]));
        assert!(inv.is_integer_matrix().integral);
        let singular = m(&[&[(1, 1), (1, 1)], &[(1, 1), (1, 1)]]);
        assert_eq!(singular.invert_oracle(), Err(Error::SingularMatrix));
        assert_eq!(singular.det_oracle().unwrap(), int(0));
        assert_eq!(ExactMatrix::identity(4).det_oracle().unwrap(), int(1));
        assert_eq!(ExactMatrix::identity(4).invert_oracle().unwrap(), ExactMatrix::identity(4));
    }

    #[test]
    fn pivoting_tracks_sign() {
        let a = m(&[&[(0, 1), (1, 1)], &[(1, 1), (0, 1)]]);
        assert_eq!(a.det_oracle().unwrap(), int(-1));
        assert_eq!(a.det_gauss().unwrap(), int(-1));
        assert_eq!(a.invert_oracle().unwrap(), a);
    }

    #[test]
    fn integrality_offenders() {
        let half = m(&[&[(1, 2)]]);
        let check = half.is_integer_matrix();
        assert!(!check.integral);
        assert_eq!(check.offenders, vec![(0, 0, rat(1, 2))]);
    }

    #[test]
    fn dimension_errors() {
        let a = ExactMatrix::zeros(2, 3);
        assert!(matches!(a.matmul(&a), Err(Error::DimensionMismatch { .. })));
        assert!(matches!(a.det_oracle(), Err(Error::NotSquare(2, 3))));
        assert!(ExactMatrix::new(2, 2, vec![int(1)]).is_err());
    }

    #[test]
    fn hankel_inverse_oracle_on_grid() {
        for params in crate::acceptance_grid() {
            for n in 1..=6 {
                let g = hankel_g(params, n);
                let inv = g.invert_oracle().unwrap();
                assert_eq!(inv.matmul(&g).unwrap(), ExactMatrix::identity(n));
            }
        }
    }

    #[test]
    fn float_instance_tracks_exact() {
        let g = hankel_g(GCParams::catbert(), 5);
        let exact = g.invert_oracle().unwrap().to_f64();
        let approx = g.to_f64().inverse_gauss().unwrap();
        for (x, y) in exact.entries().iter().zip(approx.entries()) {
            assert!((x - y).abs() <= 1e-6 * x.abs().max(1.0), "{x} vs {y}");
        }
        let det_f = g.to_f64().det_gauss().unwrap();
        let det_e = g.det_oracle().unwrap().to_f64().unwrap();
        assert!((det_f - det_e).abs() <= 1e-9 * det_e.abs());
    }

    #[test]
    fn serialization_formats() {
        let a = m(&[&[(-1, 2), (3, 1)], &[(0, 1), (7, 9)]]);
        assert_eq!(a.to_json(), r#"[["-1/2","3"],["0","7/9"]]"#);
        assert_eq!(ExactMatrix::from_json(&a.to_json()).unwrap(), a);
        assert_eq!(a.to_csv(), "-1/2,3\n0,7/9\n");
        assert_eq!(ExactMatrix::from_csv(&a.to_csv()).unwrap(), a);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn identity_and_transpose(a in arb_matrix(4)) {
            prop_assert_eq!(ExactMatrix::identity(4).matmul(&a).unwrap(), a.clone());
            prop_assert_eq!(a.transpose().transpose(), a);
        }

        #[test]
        fn transpose_of_product(a in arb_matrix(4), b in arb_matrix(4)) {
            let ab = a.matmul(&b).unwrap();
            prop_assert_eq!(ab.transpose(), b.transpose().matmul(&a.transpose()).unwrap());
        }

        #[test]
        fn det_is_multiplicative(a in arb_matrix(4), b in arb_matrix(4)) {
            let ab = a.matmul(&b).unwrap();
            prop_assert_eq!(ab.det_oracle().unwrap(), a.det_oracle().unwrap() * b.det_oracle().unwrap());
        }

        #[test]
        fn det_of_transpose(a in arb_matrix(5)) {
            prop_assert_eq!(a.det_oracle().unwrap(), a.transpose().det_oracle().unwrap());
            prop_assert_eq!(a.det_oracle().unwrap(), a.det_gauss().unwrap());
        }

        #[test]
        fn oracle_inverse_agrees_with_gauss_jordan(a in arb_matrix(4)) {
            match a.invert_oracle() {
                Ok(inv) => prop_assert_eq!(inv, a.inverse_gauss().unwrap()),
                Err(e) => {
                    prop_assert_eq!(e, Error::SingularMatrix);
                    prop_assert!(a.det_oracle().unwrap().is_zero());
                }
            }
        }
    }

    #[test]
    fn negative_entries_bits() {
        let a = m(&[&[(-255, 1)]]);
        assert_eq!(a.max_bits(), 8);
        assert!(a.get(0, 0).is_negative());
    }
}
