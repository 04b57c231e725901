//! Linking forms presented by hermitian matrices.
//!
//! A hermitian matrix `A` over Z[t, t⁻¹] with nonzero determinant presents
//! the module `V = R^d / A R^d` together with the pairing
//! `([x], [y]) ↦ -yᵀ Ā⁻¹ x̄` valued in Q(t)/Z[t, t⁻¹].
//!
//! ```
//! use accessory::blanchfield::{check_linking_form, PresentationMatrix};
//! use accessory::laurent::{LaurentMatrix, LaurentPoly};
//!
//! let z = LaurentPoly::z();
//! let one = LaurentPoly::one();
//! let a = LaurentMatrix::from_rows(vec![vec![z, one.clone()], vec![one.clone(), one]]).unwrap();
//! let report = check_linking_form(&PresentationMatrix::new(a).unwrap());
//! assert!(report.passed());
//! ```

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::laurent::{LaurentMatrix, LaurentPoly, RationalFraction};

/// A square hermitian matrix with nonzero determinant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PresentationMatrix {
    matrix: LaurentMatrix,
    det: LaurentPoly,
}

impl PresentationMatrix {
    pub fn new(matrix: LaurentMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::Shape(format!("{}x{} matrix is not square", matrix.rows(), matrix.cols())));
        }
        if !matrix.is_hermitian() {
            return Err(Error::Validation("presentation matrix is not hermitian".into()));
        }
        let det = matrix.det()?;
        if det.is_zero() {
            return Err(Error::SingularMatrix);
        }
        Ok(PresentationMatrix { matrix, det })
    }

    pub fn matrix(&self) -> &LaurentMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> LaurentMatrix {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn det(&self) -> &LaurentPoly {
        &self.det
    }

    /// Order of the presented module: the determinant in unit normal form.
    pub fn order(&self) -> LaurentPoly {
        self.det.normalize_unit()
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i < self.dim() {
            Ok(())
        } else {
            Err(Error::Shape(format!("index {i} out of range for a {}x{} matrix", self.dim(), self.dim())))
        }
    }

    /// `Ā⁻¹` over Q(t).
    fn conjugate_inverse(&self) -> Result<Vec<Vec<RationalFraction>>> {
        self.matrix.involute().inverse()
    }
}

impl Serialize for PresentationMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.matrix.serialize(serializer)
    }
}

/// An element of Q(t)/Z[t, t⁻¹], held as any representative fraction.
#[derive(Clone, Debug, Serialize)]
pub struct QmodRClass {
    pub rep: RationalFraction,
}

impl QmodRClass {
    pub fn new(rep: RationalFraction) -> Self {
        QmodRClass { rep }
    }

    pub fn is_zero(&self) -> bool {
        self.rep.is_integral()
    }

    pub fn involute(&self) -> Self {
        QmodRClass { rep: self.rep.involute() }
    }
}

impl PartialEq for QmodRClass {
    fn eq(&self, other: &Self) -> bool {
        self.rep.sub(&other.rep).is_integral()
    }
}

impl Eq for QmodRClass {}

impl fmt::Display for QmodRClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.rep)
    }
}

/// The pairing of the generators `e_i` and `e_j`, `-(Ā⁻¹)_{j,i}`.
///
/// ```
/// use accessory::blanchfield::{pairing, PresentationMatrix};
/// use accessory::laurent::{LaurentMatrix, LaurentPoly, RationalFraction};
///
/// // The twist-knot presentation [1 - 2z].
/// let entry = &LaurentPoly::one() - &LaurentPoly::z().scale(&2.into());
/// let a = PresentationMatrix::new(LaurentMatrix::diagonal(&[entry.clone()])).unwrap();
/// let expected = RationalFraction::new(-LaurentPoly::one(), entry).unwrap();
/// assert_eq!(pairing(&a, 0, 0).unwrap().rep, expected);
/// ```
pub fn pairing(a: &PresentationMatrix, i: usize, j: usize) -> Result<QmodRClass> {
    a.check_index(i)?;
    a.check_index(j)?;
    let inv = a.conjugate_inverse()?;
    Ok(QmodRClass::new(inv[j][i].neg()))
}

/// The pairing `-yᵀ Ā⁻¹ x̄` of two vectors of R^d.
pub fn pairing_vectors(a: &PresentationMatrix, x: &[LaurentPoly], y: &[LaurentPoly]) -> Result<QmodRClass> {
    let d = a.dim();
    if x.len() != d || y.len() != d {
        return Err(Error::Shape(format!("vectors of length {} and {} for dimension {d}", x.len(), y.len())));
    }
    let inv = a.conjugate_inverse()?;
    Ok(QmodRClass::new(pair_with(&inv, x, y)))
}

fn pair_with(inv: &[Vec<RationalFraction>], x: &[LaurentPoly], y: &[LaurentPoly]) -> RationalFraction {
    let mut total = RationalFraction::zero();
    for (r, yr) in y.iter().enumerate() {
        if yr.is_zero() {
            continue;
        }
        for (c, xc) in x.iter().enumerate() {
            if xc.is_zero() {
                continue;
            }
            total = total.add(&inv[r][c].mul_poly(&(yr * &xc.involute())));
        }
    }
    total.neg()
}

/// Outcome of [`check_linking_form`].
#[derive(Clone, Debug, Serialize)]
pub struct LinkingFormReport {
    /// `(e_i, e_j)` is the involute of `(e_j, e_i)` for all `i`, `j`.
    pub hermitian: bool,
    /// Every relation `A e_k` pairs to zero with every generator, on either side.
    pub relations_vanish: bool,
    /// The determinant kills every pairing value.
    pub order_annihilates: bool,
    pub order: LaurentPoly,
    pub failures: Vec<String>,
}

impl LinkingFormReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks the axioms of a linking form on the generators of the presented
/// module and records every failure.
pub fn check_linking_form(a: &PresentationMatrix) -> LinkingFormReport {
    let d = a.dim();
    let mut failures = Vec::new();
    let inv = match a.conjugate_inverse() {
        Ok(inv) => inv,
        Err(e) => {
            return LinkingFormReport {
                hermitian: false,
                relations_vanish: false,
                order_annihilates: false,
                order: a.order(),
                failures: vec![e.to_string()],
            }
        }
    };
    let class = |i: usize, j: usize| QmodRClass::new(inv[j][i].neg());

    let mut hermitian = true;
    let mut order_annihilates = true;
    let det = a.det();
    for i in 0..d {
        for j in 0..d {
            let pij = class(i, j);
            if pij != class(j, i).involute() {
                hermitian = false;
                failures.push(format!("pairing ({i}, {j}) is not the conjugate of ({j}, {i})"));
            }
            if !pij.rep.mul_poly(det).is_integral() {
                order_annihilates = false;
                failures.push(format!("det does not annihilate pairing ({i}, {j})"));
            }
        }
    }

    let mut relations_vanish = true;
    let basis = |j: usize| -> Vec<LaurentPoly> {
        (0..d).map(|r| if r == j { LaurentPoly::one() } else { LaurentPoly::zero() }).collect()
    };
    for k in 0..d {
        let relation: Vec<LaurentPoly> = (0..d).map(|r| a.matrix().get(r, k).clone()).collect();
        for j in 0..d {
            let e = basis(j);
            let left = pair_with(&inv, &relation, &e);
            let right = pair_with(&inv, &e, &relation);
            if !left.is_integral() || !right.is_integral() {
                relations_vanish = false;
                failures.push(format!("relation {k} pairs nontrivially with generator {j}"));
            }
        }
    }

    LinkingFormReport { hermitian, relations_vanish, order_annihilates, order: a.order(), failures }
}
