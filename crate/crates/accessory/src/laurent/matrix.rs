use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{LaurentPoly, RationalFraction};
use crate::error::{Error, Result};

/// A dense row-major matrix over Z[t, t⁻¹].
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LaurentMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<LaurentPoly>,
}

impl LaurentMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<LaurentPoly>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        Ok(LaurentMatrix { rows, cols, entries })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        LaurentMatrix { rows, cols, entries: vec![LaurentPoly::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { LaurentPoly::one() } else { LaurentPoly::zero() })
    }

    pub fn diagonal(diag: &[LaurentPoly]) -> Self {
        let n = diag.len();
        Self::from_fn(n, n, |i, j| if i == j { diag[i].clone() } else { LaurentPoly::zero() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> LaurentPoly) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        LaurentMatrix { rows, cols, entries }
    }

    /// Builds a matrix from its rows; all rows must have the same length.
    pub fn from_rows(rows: Vec<Vec<LaurentPoly>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().position(|row| row.len() != c) {
            return Err(Error::Shape(format!("row {bad} has {} entries, expected {c}", rows[bad].len())));
        }
        Ok(LaurentMatrix { rows: r, cols: c, entries: rows.into_iter().flatten().collect() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[LaurentPoly] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &LaurentPoly {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of range");
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: LaurentPoly) {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of range");
        self.entries[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[LaurentPoly] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<LaurentPoly>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    /// Entrywise `t ↦ t⁻¹` without transposing.
    pub fn involute(&self) -> Self {
        LaurentMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(LaurentPoly::involute).collect(),
        }
    }

    /// The conjugate transpose `Āᵀ`.
    pub fn involute_transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).involute())
    }

    pub fn is_hermitian(&self) -> bool {
        self.is_square() && *self == self.involute_transpose()
    }

    pub fn scale(&self, c: &LaurentPoly) -> Self {
        LaurentMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| e * c).collect(),
        }
    }

    pub fn add(&self, other: &LaurentMatrix) -> Result<Self> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::Shape(format!(
                "cannot add {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(LaurentMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn mul(&self, other: &LaurentMatrix) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Self::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols).map(|k| self.get(i, k) * other.get(k, j)).sum()
        }))
    }

    /// Integer matrix of values at `t = n`, `n = ±1`.
    pub fn eval_int(&self, n: i64) -> Result<Vec<Vec<BigInt>>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|p| p.eval_int(n)).collect())
            .collect()
    }

    /// The matrix with row `i` and column `j` removed.
    pub fn minor(&self, i: usize, j: usize) -> Self {
        let mut entries = Vec::with_capacity(self.rows.saturating_sub(1) * self.cols.saturating_sub(1));
        for r in (0..self.rows).filter(|&r| r != i) {
            for c in (0..self.cols).filter(|&c| c != j) {
                entries.push(self.get(r, c).clone());
            }
        }
        LaurentMatrix { rows: self.rows - 1, cols: self.cols - 1, entries }
    }

    /// Exact determinant. The empty matrix has determinant 1.
    ///
    /// Small matrices are expanded directly; larger ones go through
    /// fraction-free elimination, where every division is exact because the
    /// Laurent ring is an integral domain.
    pub fn det(&self) -> Result<LaurentPoly> {
        self.require_square()?;
        if self.rows <= 3 {
            return Ok(self.det_cofactor());
        }
        Ok(bareiss(self.to_rows()))
    }

    /// Laplace expansion along the first row. Exponential in size; kept as
    /// an independent check on [`LaurentMatrix::det`].
    pub fn det_cofactor(&self) -> LaurentPoly {
        assert!(self.is_square(), "cofactor determinant needs a square matrix");
        match self.rows {
            0 => LaurentPoly::one(),
            1 => self.entries[0].clone(),
            2 => &(self.get(0, 0) * self.get(1, 1)) - &(self.get(0, 1) * self.get(1, 0)),
            n => {
                let mut total = LaurentPoly::zero();
                for j in 0..n {
                    let a = self.get(0, j);
                    if a.is_zero() {
                        continue;
                    }
                    let term = a * &self.minor(0, j).det_cofactor();
                    if j % 2 == 0 {
                        total += term;
                    } else {
                        total -= term;
                    }
                }
                total
            }
        }
    }

    /// The classical adjugate, `adj(A)·A = det(A)·I`.
    pub fn adjugate(&self) -> Result<Self> {
        self.require_square()?;
        let n = self.rows;
        if n == 0 {
            return Ok(LaurentMatrix::zeros(0, 0));
        }
        if n == 1 {
            return Ok(LaurentMatrix::identity(1));
        }
        let mut out = LaurentMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let m = self.minor(i, j).det()?;
                out.set(j, i, if (i + j) % 2 == 0 { m } else { -m });
            }
        }
        Ok(out)
    }

    /// `A⁻¹` over Q(t), entry by entry as adjugate over determinant.
    pub fn inverse(&self) -> Result<Vec<Vec<RationalFraction>>> {
        let det = self.det()?;
        if det.is_zero() {
            return Err(Error::SingularMatrix);
        }
        let adj = self.adjugate()?;
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| RationalFraction::new(adj.get(i, j).clone(), det.clone()))
                    .collect()
            })
            .collect()
    }

    fn require_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::Shape(format!("{}x{} matrix is not square", self.rows, self.cols)))
        }
    }
}

fn bareiss(mut m: Vec<Vec<LaurentPoly>>) -> LaurentPoly {
    let n = m.len();
    if n == 0 {
        return LaurentPoly::one();
    }
    let mut negate = false;
    let mut prev = LaurentPoly::one();
    for k in 0..n - 1 {
        // Sparse pivots keep intermediate polynomials short.
        let pivot = (k..n).filter(|&r| !m[r][k].is_zero()).min_by_key(|&r| m[r][k].len());
        let Some(p) = pivot else {
            return LaurentPoly::zero();
        };
        if p != k {
            m.swap(p, k);
            negate = !negate;
        }
        let (top, bottom) = m.split_at_mut(k + 1);
        let pivot_row = &top[k];
        for row in bottom.iter_mut() {
            let lead = row[k].clone();
            for j in k + 1..n {
                let num = &(&row[j] * &pivot_row[k]) - &(&lead * &pivot_row[j]);
                row[j] = num.div_exact(&prev).expect("fraction-free elimination divides exactly");
            }
            row[k] = LaurentPoly::zero();
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

/// Exact determinant of a square integer matrix by fraction-free elimination.
pub fn det_integer(rows: &[Vec<BigInt>]) -> BigInt {
    let n = rows.len();
    assert!(rows.iter().all(|r| r.len() == n), "integer determinant needs a square matrix");
    if n == 0 {
        return BigInt::one();
    }
    let mut m = rows.to_vec();
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        let Some(p) = (k..n).find(|&r| !m[r][k].is_zero()) else {
            return BigInt::zero();
        };
        if p != k {
            m.swap(p, k);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = num / &prev;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

impl fmt::Debug for LaurentMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentMatrix {}x{} ", self.rows, self.cols)?;
        f.debug_list().entries(self.to_rows().iter().map(|r| r.iter().map(|p| p.to_string()).collect::<Vec<_>>())).finish()
    }
}

impl fmt::Display for LaurentMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<Vec<String>> =
            (0..self.rows).map(|i| self.row(i).iter().map(|p| p.to_string()).collect()).collect();
        let width = cells.iter().flatten().map(String::len).max().unwrap_or(0);
        for row in &cells {
            f.write_str("[ ")?;
            for (j, c) in row.iter().enumerate() {
                if j > 0 {
                    f.write_str(" | ")?;
                }
                write!(f, "{c:>width$}")?;
            }
            f.write_str(" ]\n")?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<LaurentPoly>>,
}

impl Serialize for LaurentMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        MatrixJson { rows: self.rows, cols: self.cols, entries: self.to_rows() }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for LaurentMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = MatrixJson::deserialize(deserializer)?;
        if raw.entries.len() != raw.rows || raw.entries.iter().any(|r| r.len() != raw.cols) {
            return Err(serde::de::Error::custom(format!(
                "entries do not form a {}x{} matrix",
                raw.rows, raw.cols
            )));
        }
        Ok(LaurentMatrix {
            rows: raw.rows,
            cols: raw.cols,
            entries: raw.entries.into_iter().flatten().collect(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn z() -> LaurentPoly {
        LaurentPoly::z()
    }

    fn c(v: i64) -> LaurentPoly {
        LaurentPoly::constant(v)
    }

    #[test]
    fn two_by_two_worked_determinants() {
        let trefoil = LaurentMatrix::from_rows(vec![vec![z(), c(1)], vec![c(1), c(1)]]).unwrap();
        let d = trefoil.det().unwrap();
        assert_eq!(d, &z() - &c(1));
        assert_eq!(d, LaurentPoly::from_dense(-1, &[-1, 1, -1]));

        let figure_eight = LaurentMatrix::from_rows(vec![vec![-z(), c(1)], vec![c(1), c(1)]]).unwrap();
        assert_eq!(figure_eight.det().unwrap(), LaurentPoly::from_dense(-1, &[1, -3, 1]));
    }

    #[test]
    fn empty_and_non_square() {
        assert_eq!(LaurentMatrix::zeros(0, 0).det().unwrap(), LaurentPoly::one());
        assert!(matches!(LaurentMatrix::zeros(2, 3).det(), Err(Error::Shape(_))));
        assert!(LaurentMatrix::new(2, 2, vec![c(1)]).is_err());
        assert!(LaurentMatrix::from_rows(vec![vec![c(1)], vec![c(1), c(2)]]).is_err());
    }

    #[test]
    fn singular_matrix_has_zero_det_and_no_inverse() {
        let m = LaurentMatrix::from_rows(vec![
            vec![z(), c(1), c(0), c(2)],
            vec![z(), c(1), c(0), c(2)],
            vec![c(3), c(0), c(1), c(1)],
            vec![c(0), z(), c(1), c(1)],
        ])
        .unwrap();
        assert!(m.det().unwrap().is_zero());
        assert!(matches!(m.inverse(), Err(Error::SingularMatrix)));
    }

    #[test]
    fn adjugate_identity() {
        let t = LaurentPoly::t();
        let m = LaurentMatrix::from_rows(vec![
            vec![z(), t.clone(), c(1)],
            vec![t.involute(), c(1), c(0)],
            vec![c(1), c(0), -z()],
        ])
        .unwrap();
        let d = m.det().unwrap();
        let prod = m.adjugate().unwrap().mul(&m).unwrap();
        assert_eq!(prod, LaurentMatrix::identity(3).scale(&d));
    }

    #[test]
    fn integer_determinant() {
        let rows = vec![
            vec![BigInt::from(4), BigInt::from(1)],
            vec![BigInt::from(1), BigInt::from(1)],
        ];
        assert_eq!(det_integer(&rows), BigInt::from(3));
        assert_eq!(det_integer(&[]), BigInt::one());
        let swap = vec![
            vec![BigInt::from(0), BigInt::from(1), BigInt::from(0)],
            vec![BigInt::from(1), BigInt::from(0), BigInt::from(0)],
            vec![BigInt::from(0), BigInt::from(0), BigInt::from(5)],
        ];
        assert_eq!(det_integer(&swap), BigInt::from(-5));
    }

    #[test]
    fn json_shape() {
        let m = LaurentMatrix::from_rows(vec![vec![z(), c(1)], vec![c(1), c(1)]]).unwrap();
        let text = serde_json::to_string(&m).unwrap();
        assert_eq!(
            text,
            r#"{"rows":2,"cols":2,"entries":[[{"-1":-1,"0":2,"1":-1},{"0":1}],[{"0":1},{"0":1}]]}"#
        );
        assert_eq!(serde_json::from_str::<LaurentMatrix>(&text).unwrap(), m);
        assert!(serde_json::from_str::<LaurentMatrix>(r#"{"rows":2,"cols":1,"entries":[[{}]]}"#).is_err());
    }

    fn arb_entry() -> impl Strategy<Value = LaurentPoly> {
        (-2i64..2, prop::collection::vec(-3i64..=3, 0..4)).prop_map(|(lo, c)| LaurentPoly::from_dense(lo, &c))
    }

    fn arb_square(n: usize) -> impl Strategy<Value = LaurentMatrix> {
        prop::collection::vec(arb_entry(), n * n).prop_map(move |e| LaurentMatrix::new(n, n, e).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn elimination_agrees_with_cofactor_expansion(m in arb_square(4)) {
            prop_assert_eq!(bareiss(m.to_rows()), m.det_cofactor());
        }

        #[test]
        fn elimination_agrees_on_five_by_five(m in arb_square(5)) {
            prop_assert_eq!(m.det().unwrap(), m.det_cofactor());
        }

        #[test]
        fn determinant_is_multiplicative(a in arb_square(3), b in arb_square(3)) {
            let ab = a.mul(&b).unwrap();
            prop_assert_eq!(ab.det().unwrap(), &a.det().unwrap() * &b.det().unwrap());
        }

        #[test]
        fn determinant_commutes_with_conjugate_transpose(a in arb_square(4)) {
            prop_assert_eq!(a.involute_transpose().det().unwrap(), a.det().unwrap().involute());
        }
    }
}
