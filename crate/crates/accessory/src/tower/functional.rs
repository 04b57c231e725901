//! The Fox-calculus functional of a two-component sublink `{Û, b}` and the
//! equivariant intersection numbers read off from it.
//!
//! Along `b` the functional is a monomial `t^w`, with `w` dropping by the
//! sign of each crossing where `b` passes under Û. Along Û it jumps by
//! `s(t - 1)F` where `b` passes over it, and obeys the Wirtinger rule
//! `F' = t^{-s}F + (1 - t^{-s})F_over` at its own crossings. The arcs of Û
//! leaving its self-crossings are unknowns; the value at the start of Û is
//! fixed to zero, and the resulting square-plus-one system is solved exactly.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::laurent::{LaurentPoly, RationalFraction};

use super::link::AccessoryLink;

/// Values of the functional at every over-passage of the sublink.
#[derive(Clone, Debug)]
pub(crate) struct Functional {
    /// Value on the strand passing over at each crossing whose over strand
    /// is Û or `b`.
    over_value: HashMap<usize, LaurentPoly>,
    /// Exponent `w` of `t^w` along `b`, at the crossings where `b` is over.
    b_exponent: HashMap<usize, i64>,
}

/// An affine expression `Σ c_k X_k + c` in the unknown arc values.
#[derive(Clone, Debug)]
struct Affine(Vec<LaurentPoly>);

impl Affine {
    fn constant(unknowns: usize, c: LaurentPoly) -> Self {
        let mut v = vec![LaurentPoly::zero(); unknowns + 1];
        v[unknowns] = c;
        Affine(v)
    }

    fn unknown(unknowns: usize, k: usize) -> Self {
        let mut v = vec![LaurentPoly::zero(); unknowns + 1];
        v[k] = LaurentPoly::one();
        Affine(v)
    }

    fn axpy(&self, a: &LaurentPoly, other: &Affine, b: &LaurentPoly) -> Affine {
        Affine(self.0.iter().zip(&other.0).map(|(x, y)| &(a * x) + &(b * y)).collect())
    }

    fn add_constant(&mut self, c: &LaurentPoly) {
        let last = self.0.len() - 1;
        self.0[last] += c;
    }

    fn evaluate(&self, values: &[LaurentPoly]) -> LaurentPoly {
        let last = self.0.len() - 1;
        let mut out = self.0[last].clone();
        for (c, v) in self.0[..last].iter().zip(values) {
            out += c * v;
        }
        out
    }
}

impl Functional {
    pub fn solve(link: &AccessoryLink, b: usize) -> Result<Self> {
        let mut b_exponent = HashMap::new();
        let mut over_value = HashMap::new();
        let mut w = 0i64;
        for p in &link.events[b] {
            let x = link.crossings[p.crossing];
            if p.over {
                b_exponent.insert(p.crossing, w);
                over_value.insert(p.crossing, LaurentPoly::monomial(w, 1));
            } else if x.over == 0 {
                w -= x.sign as i64;
            }
        }
        if w != 0 {
            return Err(Error::Framing(format!("component {b} links Û")));
        }

        let knot = &link.events[0];
        let self_unders: Vec<usize> = knot
            .iter()
            .filter(|p| !p.over && link.crossings[p.crossing].over == 0)
            .map(|p| p.crossing)
            .collect();
        let m = self_unders.len();
        let index: HashMap<usize, usize> = self_unders.iter().enumerate().map(|(k, &x)| (x, k)).collect();

        let t = LaurentPoly::t();
        let t_minus_one = &t - &LaurentPoly::one();
        let mut cur = Affine::constant(m, LaurentPoly::zero());
        let mut knot_over: HashMap<usize, Affine> = HashMap::new();
        let mut before: Vec<Option<Affine>> = vec![None; m];
        for p in knot {
            let x = link.crossings[p.crossing];
            if p.over {
                knot_over.insert(p.crossing, cur.clone());
            } else if x.over == b {
                let jump = over_value[&p.crossing].scale(&(x.sign as i64).into());
                cur.add_constant(&(&t_minus_one * &jump));
            } else if x.over == 0 {
                let k = index[&p.crossing];
                before[k] = Some(cur.clone());
                cur = Affine::unknown(m, k);
            }
        }

        // One equation per self-crossing, and the closing condition.
        let mut rows: Vec<Vec<LaurentPoly>> = Vec::with_capacity(m + 1);
        for (k, &x) in self_unders.iter().enumerate() {
            let s = link.crossings[x].sign as i64;
            let shift = LaurentPoly::monomial(-s, 1);
            let rest = &LaurentPoly::one() - &shift;
            let prev = before[k].as_ref().expect("recorded during the walk");
            let mut eq = prev.axpy(&shift, &knot_over[&x], &rest);
            eq.0[k] -= LaurentPoly::one();
            rows.push(eq.0);
        }
        rows.push(cur.0);
        let solution = solve_affine(rows, m)?;

        for (x, a) in knot_over {
            over_value.insert(x, a.evaluate(&solution));
        }
        Ok(Functional { over_value, b_exponent })
    }

    /// `λ(a, b)`: the sum over crossings where `a` passes under Û or `b`.
    pub fn lambda(&self, link: &AccessoryLink, a: usize, b: usize) -> Result<LaurentPoly> {
        let mut total = LaurentPoly::zero();
        let mut prefix = 0i64;
        for p in &link.events[a] {
            let x = link.crossings[p.crossing];
            if p.over || (x.over != 0 && x.over != b) {
                continue;
            }
            let value = &self.over_value[&p.crossing];
            let step = (x.over == 0) as i64;
            if x.sign > 0 {
                total += value.shift(prefix);
                prefix += step;
            } else {
                prefix -= step;
                total -= value.shift(prefix);
            }
        }
        if prefix != 0 {
            return Err(Error::Framing(format!("component {a} links Û {prefix} times")));
        }
        Ok(total)
    }

    /// Exponent contributed by `b` at a crossing where it passes over.
    pub fn b_exponent(&self, crossing: usize) -> Option<i64> {
        self.b_exponent.get(&crossing).copied()
    }
}

/// Solves `Σ_k row[k] X_k + row[m] = 0` for every row, requiring a unique
/// solution in Z[t, t⁻¹].
fn solve_affine(rows: Vec<Vec<LaurentPoly>>, m: usize) -> Result<Vec<LaurentPoly>> {
    if m == 0 {
        return if rows.iter().all(|r| r[0].is_zero()) {
            Ok(Vec::new())
        } else {
            Err(Error::Pipeline("the functional is inconsistent around Û".into()))
        };
    }
    // Augmented matrix [A | -c], eliminated fraction-free.
    let mut a: Vec<Vec<LaurentPoly>> = rows
        .into_iter()
        .map(|mut r| {
            r[m] = -&r[m];
            r
        })
        .collect();
    let nrows = a.len();
    let mut prev = LaurentPoly::one();
    for col in 0..m {
        let pivot = (col..nrows)
            .filter(|&i| !a[i][col].is_zero())
            .min_by_key(|&i| a[i][col].len())
            .ok_or_else(|| Error::Pipeline("the functional is not determined".into()))?;
        a.swap(col, pivot);
        for i in col + 1..nrows {
            for j in col + 1..=m {
                let v = &(&a[col][col] * &a[i][j]) - &(&a[i][col] * &a[col][j]);
                a[i][j] = v
                    .div_exact(&prev)
                    .ok_or_else(|| Error::Pipeline("inexact elimination step".into()))?;
            }
            a[i][col] = LaurentPoly::zero();
        }
        prev = a[col][col].clone();
    }
    if a[m..].iter().any(|r| !r[m].is_zero()) {
        return Err(Error::Pipeline("the functional is inconsistent around Û".into()));
    }
    let mut x: Vec<RationalFraction> = vec![RationalFraction::zero(); m];
    for i in (0..m).rev() {
        let mut acc = RationalFraction::from_poly(a[i][m].clone());
        for j in i + 1..m {
            acc = acc.sub(&x[j].mul_poly(&a[i][j]));
        }
        x[i] = RationalFraction::new(acc.num().clone(), &a[i][i] * acc.den())?;
    }
    x.iter()
        .map(|f| {
            f.to_laurent()
                .ok_or_else(|| Error::Pipeline(format!("the functional takes the non-Laurent value {f}")))
        })
        .collect()
}
