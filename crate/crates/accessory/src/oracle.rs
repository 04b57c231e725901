//! The Alexander polynomial by Fox calculus, independent of the accessory-disc
//! pipeline, and the Arf invariant by Levine's criterion.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::diagram::OrientedDiagram;
use crate::error::{Error, Result};
use crate::laurent::{LaurentMatrix, LaurentPoly};

/// The relator `x_out = x_over^sign · x_in · x_over^-sign` read off one crossing.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Relator {
    pub over: usize,
    pub under_in: usize,
    pub under_out: usize,
    pub sign: i8,
}

/// One generator per over-arc and one relator per crossing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WirtingerPresentation {
    pub generators: usize,
    pub relators: Vec<Relator>,
}

impl WirtingerPresentation {
    /// Generators are the over-arcs of the diagram, numbered by their
    /// smallest edge label.
    pub fn from_diagram(d: &OrientedDiagram) -> Self {
        let n2 = d.arc_count();
        let mut parent: Vec<usize> = (0..=n2).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        // Edges entering and leaving an over-strand belong to the same arc.
        for x in d.crossings() {
            let a = find(&mut parent, x.over_in());
            let b = find(&mut parent, x.over_out());
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            parent[hi] = lo;
        }
        let mut index = vec![usize::MAX; n2 + 1];
        let mut generators = 0;
        for e in 1..=n2 {
            let r = find(&mut parent, e);
            if index[r] == usize::MAX {
                index[r] = generators;
                generators += 1;
            }
        }
        let mut arc = |e: usize| index[find(&mut parent, e)];
        let relators = d
            .crossings()
            .iter()
            .map(|x| Relator {
                over: arc(x.over_in()),
                under_in: arc(x.under_in()),
                under_out: arc(x.under_out()),
                sign: x.sign,
            })
            .collect();
        WirtingerPresentation { generators, relators }
    }

    /// Abelianised Fox Jacobian: one row per relator, one column per generator.
    pub fn alexander_matrix(&self) -> LaurentMatrix {
        let mut m = LaurentMatrix::zeros(self.relators.len(), self.generators);
        for (r, rel) in self.relators.iter().enumerate() {
            let s = rel.sign as i64;
            let ts = LaurentPoly::monomial(s, 1);
            let mut add = |col: usize, v: LaurentPoly| {
                let cur = m.get(r, col).clone();
                m.set(r, col, cur + v);
            };
            add(rel.over, &LaurentPoly::one() - &ts);
            add(rel.under_in, ts);
            add(rel.under_out, LaurentPoly::constant(-1));
        }
        m
    }
}

/// The Alexander polynomial of the knot in unit normal form.
///
/// The last relator and the highest-numbered generator are deleted; the
/// result is compared against the minor obtained by deleting the first
/// relator and first generator instead.
///
/// ```
/// use accessory::{diagram::OrientedDiagram, oracle, laurent::LaurentPoly};
/// let d = OrientedDiagram::parse_pd("[[4,2,5,1],[8,6,1,5],[6,3,7,4],[2,7,3,8]]").unwrap();
/// let delta = oracle::alexander_poly_oracle(&d).unwrap();
/// assert_eq!(delta, LaurentPoly::from_dense(0, &[1, -3, 1]));
/// ```
pub fn alexander_poly_oracle(d: &OrientedDiagram) -> Result<LaurentPoly> {
    if d.crossing_count() == 0 {
        return Ok(LaurentPoly::one());
    }
    let w = WirtingerPresentation::from_diagram(d);
    let m = w.alexander_matrix();
    let n = m.rows();
    let primary = m.minor(n - 1, m.cols() - 1).det()?.normalize_unit();
    let check = m.minor(0, 0).det()?.normalize_unit();
    if primary != check {
        return Err(Error::Pipeline(format!(
            "Fox minors disagree: {primary} versus {check}"
        )));
    }
    Ok(primary)
}

/// Levine: the Arf invariant is 0 when `Δ(−1) ≡ ±1 (mod 8)` and 1 when
/// `Δ(−1) ≡ ±3 (mod 8)`.
pub fn arf_levine(delta: &LaurentPoly) -> Result<u8> {
    let v = delta.eval_int(-1)?;
    arf_from_value(&v)
}

/// Levine's criterion applied to the value `Δ(−1)` itself.
pub fn arf_from_value(v: &BigInt) -> Result<u8> {
    let r = v.mod_floor(&BigInt::from(8)).to_u8().expect("residue fits");
    match r {
        1 | 7 => Ok(0),
        3 | 5 => Ok(1),
        _ => Err(Error::Domain(format!("Δ(−1) = {v} is even, so this is not an Alexander polynomial"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diagram(code: &str) -> OrientedDiagram {
        OrientedDiagram::parse_pd(code).unwrap()
    }

    #[test]
    fn worked_knots() {
        let trefoil = diagram("[[1,4,2,5],[3,6,4,1],[5,2,6,3]]");
        let delta = alexander_poly_oracle(&trefoil).unwrap();
        assert!(delta.equal_up_to_unit(&LaurentPoly::from_dense(-1, &[-1, 1, -1])));
        let fig8 = diagram("[[4,2,5,1],[8,6,1,5],[6,3,7,4],[2,7,3,8]]");
        let delta = alexander_poly_oracle(&fig8).unwrap();
        assert!(delta.equal_up_to_unit(&LaurentPoly::from_dense(-1, &[1, -3, 1])));
        assert_eq!(alexander_poly_oracle(&OrientedDiagram::unknot()).unwrap(), LaurentPoly::one());
    }

    #[test]
    fn kinks_are_unknotted() {
        for code in ["[[1,1,2,2]]", "[[1,2,2,1]]", "[[4,4,1,3],[2,2,3,1]]"] {
            assert_eq!(alexander_poly_oracle(&diagram(code)).unwrap(), LaurentPoly::one(), "{code}");
        }
    }

    #[test]
    fn presentation_shape() {
        let w = WirtingerPresentation::from_diagram(&diagram("[[1,4,2,5],[3,6,4,1],[5,2,6,3]]"));
        assert_eq!(w.generators, 3);
        assert_eq!(w.relators.len(), 3);
        // Each row of the Fox matrix sums to zero at t = 1.
        let at_one = w.alexander_matrix().eval_int(1).unwrap();
        for row in at_one {
            assert_eq!(row.iter().sum::<BigInt>(), BigInt::from(0));
        }
    }

    #[test]
    fn mirror_image_has_the_same_polynomial() {
        let d = diagram("[[1,4,2,5],[3,6,4,1],[5,2,6,3]]");
        assert_eq!(alexander_poly_oracle(&d).unwrap(), alexander_poly_oracle(&d.mirror()).unwrap());
    }

    #[test]
    fn levine_table() {
        assert_eq!(arf_levine(&LaurentPoly::from_dense(-1, &[-1, 1, -1])).unwrap(), 1);
        assert_eq!(arf_levine(&LaurentPoly::from_dense(-1, &[1, -3, 1])).unwrap(), 1);
        assert_eq!(arf_levine(&LaurentPoly::one()).unwrap(), 0);
        assert_eq!(arf_levine(&LaurentPoly::from_dense(-1, &[-2, 5, -2])).unwrap(), 0);
        assert!(matches!(arf_levine(&LaurentPoly::z()), Err(Error::Domain(_))));
    }

    #[test]
    fn levine_ignores_units_and_involution() {
        let d = LaurentPoly::from_dense(-2, &[1, -3, 5, -3, 1]);
        let arf = arf_levine(&d).unwrap();
        assert_eq!(arf_levine(&(-d.shift(5))).unwrap(), arf);
        assert_eq!(arf_levine(&d.involute()).unwrap(), arf);
    }
}
