//! The matrix Ω of an order-two presentation tower, assembled from abstract
//! intersection data, and the Arf invariant it determines.
//!
//! Rows come in pairs: row `2i - 1` belongs to the `i`-th Whitney disc and
//! row `2i` to its accessory disc (1-based). With `z = (1 - t)(1 - t⁻¹)`:
//!
//! * Whitney diagonal: `z(p + p̄ + a_i)`;
//! * accessory diagonal: `z(p + p̄ + b_i) ± 1`, the sign being that of the
//!   accessory double point;
//! * Whitney–accessory entry of a pair: `z·p + 1`;
//! * every other entry above the diagonal: `z·p_rs`.
//!
//! Entries below the diagonal are conjugates, so Ω is hermitian.
//!
//! ```
//! use accessory::omega::{assemble_omega, TowerData};
//! use accessory::laurent::LaurentPoly;
//!
//! let data = TowerData::from_json(r#"{"pairs":[{"a":-1,"b":0,"sign":1}]}"#).unwrap();
//! let det = assemble_omega(&data).unwrap().det().clone();
//! assert_eq!(det, LaurentPoly::from_dense(-1, &[1, -3, 1]));
//! ```

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::de::{self, Deserializer};
use serde::ser::{SerializeMap, Serializer};
use serde::{Deserialize, Serialize};

use crate::blanchfield::PresentationMatrix;
use crate::error::{Error, Result};
use crate::laurent::{det_integer, LaurentMatrix, LaurentPoly};
use crate::oracle::arf_from_value;

/// One Whitney disc and its accessory disc.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerPair {
    /// Twisting of the Whitney framing.
    pub a: i64,
    /// Twisting of the accessory framing.
    pub b: i64,
    /// Sign of the accessory double point.
    pub sign: i8,
    #[serde(default)]
    pub p_ww: LaurentPoly,
    #[serde(default)]
    pub p_aa: LaurentPoly,
    #[serde(default)]
    pub p_wa: LaurentPoly,
}

impl TowerPair {
    /// A pair with the given twists and no intersections.
    pub fn twisted(a: i64, b: i64, sign: i8) -> Self {
        TowerPair { a, b, sign, p_ww: LaurentPoly::zero(), p_aa: LaurentPoly::zero(), p_wa: LaurentPoly::zero() }
    }
}

/// Intersection data of an order-two tower.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerData {
    pub pairs: Vec<TowerPair>,
    /// Intersections between discs of different pairs, keyed by 1-based
    /// `(r, s)` with `r < s`.
    #[serde(default, serialize_with = "write_cross", deserialize_with = "read_cross")]
    pub cross: BTreeMap<(usize, usize), LaurentPoly>,
}

fn write_cross<S: Serializer>(cross: &BTreeMap<(usize, usize), LaurentPoly>, s: S) -> Result<S::Ok, S::Error> {
    let mut map = s.serialize_map(Some(cross.len()))?;
    for ((r, c), p) in cross {
        map.serialize_entry(&format!("({r},{c})"), p)?;
    }
    map.end()
}

fn read_cross<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<(usize, usize), LaurentPoly>, D::Error> {
    let raw: BTreeMap<String, LaurentPoly> = BTreeMap::deserialize(d)?;
    raw.into_iter()
        .map(|(key, p)| {
            let inner = key
                .trim()
                .strip_prefix('(')
                .and_then(|k| k.strip_suffix(')'))
                .ok_or_else(|| de::Error::custom(format!("cross key {key:?} is not of the form \"(r,s)\"")))?;
            let (r, s) = inner
                .split_once(',')
                .ok_or_else(|| de::Error::custom(format!("cross key {key:?} needs two indices")))?;
            let parse = |v: &str| v.trim().parse::<usize>().map_err(|_| de::Error::custom(format!("bad index in {key:?}")));
            Ok(((parse(r)?, parse(s)?), p))
        })
        .collect()
}

impl TowerData {
    pub fn from_json(text: &str) -> Result<Self> {
        let data: TowerData = serde_json::from_str(text)?;
        data.validate()?;
        Ok(data)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("tower data serialises")
    }

    pub fn dim(&self) -> usize {
        2 * self.pairs.len()
    }

    /// Signs are ±1 and every cross entry names two discs of different
    /// pairs, in increasing order.
    pub fn validate(&self) -> Result<()> {
        for (i, p) in self.pairs.iter().enumerate() {
            if p.sign != 1 && p.sign != -1 {
                return Err(Error::Validation(format!("pair {} has sign {}", i + 1, p.sign)));
            }
        }
        let d = self.dim();
        for &(r, s) in self.cross.keys() {
            if r == 0 || s > d || r >= s {
                return Err(Error::Shape(format!("cross entry ({r},{s}) is outside 1 ≤ r < s ≤ {d}")));
            }
            if r % 2 == 1 && s == r + 1 {
                return Err(Error::Shape(format!("cross entry ({r},{s}) duplicates the pair's own p_wa")));
            }
        }
        Ok(())
    }
}

/// Assembles Ω; fails with a shape error on an inconsistent table.
pub fn assemble_omega(data: &TowerData) -> Result<PresentationMatrix> {
    data.validate()?;
    let d = data.dim();
    let z = LaurentPoly::z();
    let symmetric = |p: &LaurentPoly, twist: i64| &z * &(&(p + &p.involute()) + &LaurentPoly::constant(twist));
    let mut m = LaurentMatrix::zeros(d, d);
    for (i, pair) in data.pairs.iter().enumerate() {
        let (w, a) = (2 * i, 2 * i + 1);
        m.set(w, w, symmetric(&pair.p_ww, pair.a));
        m.set(a, a, &symmetric(&pair.p_aa, pair.b) + &LaurentPoly::constant(pair.sign as i64));
        let off = &(&z * &pair.p_wa) + &LaurentPoly::one();
        m.set(a, w, off.involute());
        m.set(w, a, off);
    }
    for (&(r, s), p) in &data.cross {
        let entry = &z * p;
        m.set(s - 1, r - 1, entry.involute());
        m.set(r - 1, s - 1, entry);
    }
    PresentationMatrix::new(m)
}

/// Parity of the number of Whitney discs with odd twisting.
pub fn arf_from_tower(data: &TowerData) -> u8 {
    (data.pairs.iter().filter(|p| p.a.is_odd()).count() % 2) as u8
}

/// Whether the Arf invariant read from `det Ω(-1)` agrees with the parity
/// of odd Whitney twists. Fails with a domain error when `det Ω(-1)` is even.
pub fn verify_arf_consistency(data: &TowerData) -> Result<bool> {
    let omega = assemble_omega(data)?;
    let value = omega.det().eval_int(-1)?;
    Ok(arf_from_value(&value)? == arf_from_tower(data))
}

/// Builds `A = B + 4C + 4Cᵀ`, with `B` the block sum of `[[x_i, 1], [1, 1 + y_i]]`,
/// and returns `det A mod 8`, after checking that it equals
/// `(-1)^k + Σ x_i mod 8`.
///
/// ```
/// use accessory::omega::det_mod8_blocked;
/// assert_eq!(det_mod8_blocked(&[4], &[0], &[vec![0, 0], vec![0, 0]]).unwrap(), 3);
/// ```
pub fn det_mod8_blocked(x: &[i64], y: &[i64], c: &[Vec<i64>]) -> Result<u8> {
    let k = x.len();
    if y.len() != k {
        return Err(Error::Shape(format!("{} values of x but {} of y", k, y.len())));
    }
    if let Some(v) = x.iter().chain(y).find(|v| v.rem_euclid(4) != 0) {
        return Err(Error::Domain(format!("{v} is not a multiple of 4")));
    }
    let n = 2 * k;
    if c.len() != n || c.iter().any(|row| row.len() != n) {
        return Err(Error::Shape(format!("C must be {n}x{n}")));
    }
    if (0..n).any(|i| (0..i).any(|j| c[i][j] != 0)) {
        return Err(Error::Validation("C must be upper triangular".into()));
    }
    let mut a = vec![vec![BigInt::from(0); n]; n];
    for i in 0..k {
        a[2 * i][2 * i] = x[i].into();
        a[2 * i][2 * i + 1] = 1.into();
        a[2 * i + 1][2 * i] = 1.into();
        a[2 * i + 1][2 * i + 1] = (1 + y[i]).into();
    }
    for i in 0..n {
        for j in 0..n {
            a[i][j] += BigInt::from(4 * c[i][j] + 4 * c[j][i]);
        }
    }
    let det = det_integer(&a).mod_floor(&BigInt::from(8)).to_u8().expect("residue fits");
    let sign = if k % 2 == 0 { 1 } else { -1 };
    let expected = (sign + x.iter().sum::<i64>()).rem_euclid(8) as u8;
    if det != expected {
        return Err(Error::Pipeline(format!("det A ≡ {det} but (-1)^k + Σx ≡ {expected} mod 8")));
    }
    Ok(det)
}
