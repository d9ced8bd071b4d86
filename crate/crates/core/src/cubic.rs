//! Cubic forms as symmetric trilinear tensors, their Hessian matrices of
//! linear forms, exact Hessian rank, base change, and blow-up transforms.
//!
//! A form in `m` variables is stored as a sparse map from sorted index
//! triples `a <= b <= c` to the full symmetric tensor value `T[a,b,c]`
//! (not divided by multiplicity), so that
//!
//! ```text
//! F(x) = sum over all ordered triples (a,b,c) of T[a,b,c] * xa * xb * xc
//! ```
//!
//! and the Hessian entry `(j,k)` is the linear form `6 * sum_c T[j,k,c] * xc`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::de::{self, MapAccess, Visitor};
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::field::{FieldElem, FieldTag, Rational};
use crate::linalg::FieldMatrix;

/// A class in coordinates: a length-`m` vector over one field.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Point {
    tag: FieldTag,
    coords: Vec<FieldElem>,
}

impl Point {
    pub fn new(tag: FieldTag, coords: Vec<FieldElem>) -> Result<Self> {
        for c in &coords {
            if c.tag() != tag {
                return Err(Error::FieldMismatch(tag, c.tag()));
            }
        }
        Ok(Point { tag, coords })
    }

    pub fn zero(m: usize, tag: FieldTag) -> Self {
        Point { tag, coords: vec![FieldElem::zero(tag); m] }
    }

    /// The standard unit vector `e_idx`.
    pub fn unit(m: usize, idx: usize, tag: FieldTag) -> Self {
        let mut p = Self::zero(m, tag);
        p.coords[idx] = FieldElem::one(tag);
        p
    }

    pub fn from_integers(values: &[i64]) -> Self {
        Point {
            tag: FieldTag::Q,
            coords: values.iter().map(|&v| FieldElem::from_int(v)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn tag(&self) -> FieldTag {
        self.tag
    }

    pub fn coord(&self, i: usize) -> &FieldElem {
        &self.coords[i]
    }

    pub fn coords(&self) -> &[FieldElem] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(FieldElem::is_zero)
    }

    pub fn widened(&self, target: FieldTag) -> Result<Point> {
        let coords = self
            .coords
            .iter()
            .map(|c| c.widen(target))
            .collect::<Result<Vec<_>>>()?;
        Ok(Point { tag: target, coords })
    }

    /// Splits into the first `m` and the trailing coordinates.
    pub fn split_at(&self, m: usize) -> Result<(Point, Point)> {
        if m > self.len() {
            return Err(Error::DimensionMismatch { expected: m, got: self.len() });
        }
        Ok((
            Point { tag: self.tag, coords: self.coords[..m].to_vec() },
            Point { tag: self.tag, coords: self.coords[m..].to_vec() },
        ))
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl Serialize for Point {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.coords.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Point {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let coords = Vec::<FieldElem>::deserialize(deserializer)?;
        let tag = coords
            .iter()
            .map(FieldElem::tag)
            .find(|&t| t != FieldTag::Q)
            .unwrap_or(FieldTag::Q);
        let coords = coords
            .iter()
            .map(|c| c.widen(tag))
            .collect::<Result<Vec<_>>>()
            .map_err(de::Error::custom)?;
        Ok(Point { tag, coords })
    }
}

/// A linear form given by its coefficient vector.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LinearForm {
    coeffs: Vec<FieldElem>,
}

impl LinearForm {
    pub fn zero(m: usize, tag: FieldTag) -> Self {
        LinearForm { coeffs: vec![FieldElem::zero(tag); m] }
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(FieldElem::is_zero)
    }

    pub fn evaluate(&self, p: &Point) -> Result<FieldElem> {
        if p.len() != self.coeffs.len() {
            return Err(Error::DimensionMismatch { expected: self.coeffs.len(), got: p.len() });
        }
        let tag = p.tag();
        let mut acc = FieldElem::zero(tag);
        for (c, x) in self.coeffs.iter().zip(p.coords()) {
            if !c.is_zero() {
                acc = acc.add(&c.mul(x)?)?;
            }
        }
        Ok(acc)
    }

    /// Renders as e.g. `6*x_2 - 6*x_5` with 1-based variable names.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let var = format!("x_{}", i + 1);
            if out.is_empty() {
                if c.is_rational() {
                    out = format!("{c}*{var}");
                } else {
                    out = format!("({c})*{var}");
                }
            } else if c.is_rational() {
                use num_traits::Signed;
                if c.re().is_negative() {
                    out.push_str(&format!(" - {}*{var}", c.neg()));
                } else {
                    out.push_str(&format!(" + {c}*{var}"));
                }
            } else {
                out.push_str(&format!(" + ({c})*{var}"));
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

/// Symmetric `m x m` matrix of linear forms: the second partials of a
/// cubic form.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HessianForm {
    m: usize,
    tag: FieldTag,
    entries: Vec<LinearForm>,
}

impl HessianForm {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn tag(&self) -> FieldTag {
        self.tag
    }

    pub fn entry(&self, j: usize, k: usize) -> &LinearForm {
        &self.entries[j * self.m + k]
    }

    /// Evaluates every entry at `p`, producing an exact matrix.
    pub fn evaluate(&self, p: &Point) -> Result<FieldMatrix> {
        if p.len() != self.m {
            return Err(Error::DimensionMismatch { expected: self.m, got: p.len() });
        }
        if p.tag() != self.tag {
            return Err(Error::FieldMismatch(self.tag, p.tag()));
        }
        let mut out = FieldMatrix::zeros(self.m, self.m, self.tag);
        for j in 0..self.m {
            for k in 0..self.m {
                out.set(j, k, self.entry(j, k).evaluate(p)?)?;
            }
        }
        Ok(out)
    }
}

/// Sorted index triple with the number of its distinct arrangements.
fn orderings(key: [usize; 3]) -> u32 {
    let [a, b, c] = key;
    if a == b && b == c {
        1
    } else if a == b || b == c {
        3
    } else {
        6
    }
}

/// All distinct ordered arrangements of a sorted triple.
fn arrangements(key: [usize; 3]) -> Vec<[usize; 3]> {
    let [a, b, c] = key;
    let mut out = vec![
        [a, b, c],
        [a, c, b],
        [b, a, c],
        [b, c, a],
        [c, a, b],
        [c, b, a],
    ];
    out.sort();
    out.dedup();
    out
}

fn sorted_key(a: usize, b: usize, c: usize) -> [usize; 3] {
    let mut k = [a, b, c];
    k.sort();
    k
}

/// A cubic form as a sparse symmetric trilinear tensor.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CubicForm {
    m: usize,
    tag: FieldTag,
    tensor: BTreeMap<[usize; 3], FieldElem>,
}

impl CubicForm {
    /// The zero form in `m` variables (`m = 0` is allowed).
    pub fn zero(m: usize, tag: FieldTag) -> Self {
        CubicForm { m, tag, tensor: BTreeMap::new() }
    }

    /// Builds a form from 0-based index triples. Keys are sorted on entry;
    /// repeated unordered keys accumulate; zero coefficients are dropped.
    pub fn from_entries<I>(m: usize, tag: FieldTag, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = ((usize, usize, usize), FieldElem)>,
    {
        let mut tensor: BTreeMap<[usize; 3], FieldElem> = BTreeMap::new();
        for ((a, b, c), coeff) in entries {
            let key = sorted_key(a, b, c);
            if key[2] >= m {
                return Err(Error::DimensionMismatch { expected: m, got: key[2] + 1 });
            }
            if coeff.tag() != tag {
                return Err(Error::FieldMismatch(tag, coeff.tag()));
            }
            let slot = tensor.entry(key).or_insert_with(|| FieldElem::zero(tag));
            *slot = slot.add(&coeff)?;
        }
        tensor.retain(|_, v| !v.is_zero());
        Ok(CubicForm { m, tag, tensor })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn field_tag(&self) -> FieldTag {
        self.tag
    }

    /// Number of nonzero sorted-key tensor entries.
    pub fn support_len(&self) -> usize {
        self.tensor.len()
    }

    /// Iterates sorted keys and their symmetric tensor values.
    pub fn entries(&self) -> impl Iterator<Item = (&[usize; 3], &FieldElem)> {
        self.tensor.iter()
    }

    /// Symmetric tensor entry `T[a,b,c]` for arbitrary index order.
    pub fn coefficient(&self, a: usize, b: usize, c: usize) -> FieldElem {
        self.tensor
            .get(&sorted_key(a, b, c))
            .cloned()
            .unwrap_or_else(|| FieldElem::zero(self.tag))
    }

    pub fn is_zero(&self) -> bool {
        self.tensor.is_empty()
    }

    pub fn widened(&self, target: FieldTag) -> Result<CubicForm> {
        let mut tensor = BTreeMap::new();
        for (k, v) in &self.tensor {
            tensor.insert(*k, v.widen(target)?);
        }
        Ok(CubicForm { m: self.m, tag: target, tensor })
    }

    fn check_point(&self, p: &Point) -> Result<()> {
        if p.len() != self.m {
            return Err(Error::DimensionMismatch { expected: self.m, got: p.len() });
        }
        if p.tag() != self.tag {
            return Err(Error::FieldMismatch(self.tag, p.tag()));
        }
        Ok(())
    }

    /// Exact evaluation `sum over ordered triples of T[a,b,c] xa xb xc`.
    pub fn evaluate(&self, p: &Point) -> Result<FieldElem> {
        self.check_point(p)?;
        let mut acc = FieldElem::zero(self.tag);
        for (key, t) in &self.tensor {
            let mult = FieldElem::from_int(orderings(*key) as i64).widen(self.tag)?;
            let prod = p
                .coord(key[0])
                .mul(p.coord(key[1]))?
                .mul(p.coord(key[2]))?;
            acc = acc.add(&mult.mul(t)?.mul(&prod)?)?;
        }
        Ok(acc)
    }

    /// Exact gradient, computed by its own walk over the tensor:
    /// `dF/dx_j = 3 * sum over ordered pairs (b,c) of T[j,b,c] xb xc`.
    pub fn gradient(&self, p: &Point) -> Result<Vec<FieldElem>> {
        self.check_point(p)?;
        let three = FieldElem::from_int(3).widen(self.tag)?;
        let two = FieldElem::from_int(2).widen(self.tag)?;
        let mut grad = vec![FieldElem::zero(self.tag); self.m];
        for (key, t) in &self.tensor {
            let mut distinct = key.to_vec();
            distinct.dedup();
            for &j in &distinct {
                // remaining multiset after removing one copy of j
                let pos = key.iter().position(|&x| x == j).expect("j is in key");
                let mut rest = key.to_vec();
                rest.remove(pos);
                let quad = p.coord(rest[0]).mul(p.coord(rest[1]))?;
                let contrib = if rest[0] == rest[1] {
                    three.mul(t)?.mul(&quad)?
                } else {
                    three.mul(&two)?.mul(t)?.mul(&quad)?
                };
                grad[j] = grad[j].add(&contrib)?;
            }
        }
        Ok(grad)
    }

    /// The full matrix of second partials as linear forms; entry `(j,k)`
    /// has coefficient `6 * T[j,k,c]` on `x_c`.
    pub fn hessian_form(&self) -> HessianForm {
        let six = FieldElem::from_int(6)
            .widen(self.tag)
            .expect("rational constant widens into any field");
        let mut entries = vec![LinearForm::zero(self.m, self.tag); self.m * self.m];
        for (key, t) in &self.tensor {
            let value = six.mul(t).expect("same tag");
            for [u, v, w] in arrangements(*key) {
                entries[u * self.m + v].coeffs[w] = value.clone();
            }
        }
        HessianForm { m: self.m, tag: self.tag, entries }
    }

    /// Exact rank of the Hessian matrix evaluated at `p`.
    pub fn hessian_rank_at(&self, p: &Point) -> Result<usize> {
        self.check_point(p)?;
        Ok(self.hessian_form().evaluate(p)?.rank())
    }

    /// Substitution `x -> L x` for an invertible matrix `L`, returning the
    /// form with tensor `T'[a,b,c] = sum T[d,e,f] L[d][a] L[e][b] L[f][c]`.
    pub fn base_change(&self, l: &FieldMatrix) -> Result<CubicForm> {
        if l.rows() != self.m || l.cols() != self.m {
            return Err(Error::DimensionMismatch { expected: self.m, got: l.rows() });
        }
        if l.tag() != self.tag {
            return Err(Error::FieldMismatch(self.tag, l.tag()));
        }
        if !l.is_invertible() {
            return Err(Error::SingularMatrix);
        }
        let mut tensor: BTreeMap<[usize; 3], FieldElem> = BTreeMap::new();
        for (key, t) in &self.tensor {
            for [d, e, f] in arrangements(*key) {
                for a in 0..self.m {
                    let la = l.get(d, a);
                    if la.is_zero() {
                        continue;
                    }
                    for b in a..self.m {
                        let lb = l.get(e, b);
                        if lb.is_zero() {
                            continue;
                        }
                        for c in b..self.m {
                            let lc = l.get(f, c);
                            if lc.is_zero() {
                                continue;
                            }
                            // ordered (d,e,f) against sorted (a<=b<=c) hits every
                            // ordered combination exactly once
                            let term = t.mul(la)?.mul(lb)?.mul(lc)?;
                            let slot = tensor
                                .entry([a, b, c])
                                .or_insert_with(|| FieldElem::zero(self.tag));
                            *slot = slot.add(&term)?;
                        }
                    }
                }
            }
        }
        tensor.retain(|_, v| !v.is_zero());
        Ok(CubicForm { m: self.m, tag: self.tag, tensor })
    }

    /// Blow-up of a point: a new first variable `x0` with `F' = a*x0^3 + F`.
    /// The exceptional self-intersection `a` must be nonzero.
    pub fn blowup_point(&self, a: &FieldElem) -> Result<CubicForm> {
        if a.is_zero() {
            return Err(Error::ZeroExceptionalCube);
        }
        let a = a.widen(self.tag)?;
        let mut tensor = BTreeMap::new();
        tensor.insert([0usize, 0, 0], a);
        for (key, t) in &self.tensor {
            tensor.insert([key[0] + 1, key[1] + 1, key[2] + 1], t.clone());
        }
        Ok(CubicForm { m: self.m + 1, tag: self.tag, tensor })
    }

    /// Blow-up of a curve: `F' = a*x0^3 + 3*sum b_i x0^2 x_i + F` in `m+1`
    /// variables, the new variable first.
    pub fn blowup_curve(&self, a: &FieldElem, b: &[FieldElem]) -> Result<CubicForm> {
        if b.len() != self.m {
            return Err(Error::DimensionMismatch { expected: self.m, got: b.len() });
        }
        let a = a.widen(self.tag)?;
        let mut tensor = BTreeMap::new();
        if !a.is_zero() {
            tensor.insert([0usize, 0, 0], a);
        }
        for (i, bi) in b.iter().enumerate() {
            let bi = bi.widen(self.tag)?;
            if !bi.is_zero() {
                // tensor value b_i carries polynomial coefficient 3*b_i
                tensor.insert([0, 0, i + 1], bi);
            }
        }
        for (key, t) in &self.tensor {
            tensor.insert([key[0] + 1, key[1] + 1, key[2] + 1], t.clone());
        }
        Ok(CubicForm { m: self.m + 1, tag: self.tag, tensor })
    }

    /// Appends `k` pure cubes: `F' = F + sum a_i y_i^3` in `m + k`
    /// variables, modelling a resolution with `k` irreducible exceptional
    /// divisors of self-intersection `a_i`. Every `a_i` must be nonzero.
    pub fn direct_sum_with_cubes(&self, cubes: &[BigInt]) -> Result<CubicForm> {
        if cubes.iter().any(Zero::is_zero) {
            return Err(Error::ZeroExceptionalCube);
        }
        let mut tensor = self.tensor.clone();
        for (i, a) in cubes.iter().enumerate() {
            let idx = self.m + i;
            let v = FieldElem::from_rational(Rational::from_integer(a.clone()))
                .widen(self.tag)?;
            tensor.insert([idx, idx, idx], v);
        }
        Ok(CubicForm { m: self.m + cubes.len(), tag: self.tag, tensor })
    }
}

// JSON schema: {"m": int, "field": "Q"|"Q_I"|"Q_OMEGA",
//               "entries": [[[a,b,c], coeff], ...]}
// with 1-based sorted index triples and coefficients in the field's
// textual form. Emission is canonical; parsing also accepts plain
// rational strings inside extension-tagged forms.
impl Serialize for CubicForm {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(3))?;
        map.serialize_entry("m", &self.m)?;
        map.serialize_entry("field", self.tag.name())?;
        let entries: Vec<([usize; 3], &FieldElem)> = self
            .tensor
            .iter()
            .map(|(k, v)| ([k[0] + 1, k[1] + 1, k[2] + 1], v))
            .collect();
        map.serialize_entry("entries", &entries)?;
        map.end()
    }
}

struct CubicFormVisitor;

impl<'de> Visitor<'de> for CubicFormVisitor {
    type Value = CubicForm;

    fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("a cubic form object {m, field, entries}")
    }

    fn visit_map<M: MapAccess<'de>>(self, mut map: M) -> std::result::Result<CubicForm, M::Error> {
        let mut m: Option<usize> = None;
        let mut field: Option<String> = None;
        let mut entries: Option<Vec<([usize; 3], FieldElem)>> = None;
        while let Some(key) = map.next_key::<String>()? {
            match key.as_str() {
                "m" => m = Some(map.next_value()?),
                "field" => field = Some(map.next_value()?),
                "entries" => entries = Some(map.next_value()?),
                other => return Err(de::Error::unknown_field(other, &["m", "field", "entries"])),
            }
        }
        let m = m.ok_or_else(|| de::Error::missing_field("m"))?;
        let field = field.ok_or_else(|| de::Error::missing_field("field"))?;
        let entries = entries.ok_or_else(|| de::Error::missing_field("entries"))?;
        let tag = FieldTag::from_name(&field).map_err(de::Error::custom)?;
        let mut tensor: BTreeMap<[usize; 3], FieldElem> = BTreeMap::new();
        for (key, coeff) in entries {
            if key[0] < 1 || key[0] > key[1] || key[1] > key[2] || key[2] > m {
                return Err(de::Error::custom(format!(
                    "tensor index {key:?} is not a sorted 1-based triple within m={m}"
                )));
            }
            let key = [key[0] - 1, key[1] - 1, key[2] - 1];
            let coeff = coeff.widen(tag).map_err(de::Error::custom)?;
            if tensor.insert(key, coeff).is_some() {
                return Err(de::Error::custom(format!("duplicate tensor index {:?}", key)));
            }
        }
        tensor.retain(|_, v| !v.is_zero());
        Ok(CubicForm { m, tag, tensor })
    }
}

impl<'de> Deserialize<'de> for CubicForm {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        deserializer.deserialize_map(CubicFormVisitor)
    }
}

/// Parses a point from JSON: an array of field elements, or an object
/// keyed by degree-2 basis names when the form has 15 or 9 variables.
pub fn parse_point_json(form: &CubicForm, json: &str) -> Result<Point> {
    let value: serde_json::Value =
        serde_json::from_str(json).map_err(|e| Error::Parse(e.to_string()))?;
    let point = match &value {
        serde_json::Value::Array(_) => {
            let p: Point =
                serde_json::from_value(value).map_err(|e| Error::Parse(e.to_string()))?;
            p
        }
        serde_json::Value::Object(obj) => {
            let basis = crate::exterior::H2Basis::standard();
            // 15-variable forms use the full basis, 9-variable forms the
            // mixed block z1b1..z3b3 (slots 3..12)
            let offset = match form.m() {
                15 => 0usize,
                9 => 3usize,
                other => {
                    return Err(Error::Parse(format!(
                        "named coordinates need a 15- or 9-variable form, got m={other}"
                    )))
                }
            };
            let mut elems = vec![FieldElem::zero(FieldTag::Q); form.m()];
            let mut tag = FieldTag::Q;
            for (name, v) in obj {
                let slot = basis
                    .index_of(name)
                    .and_then(|s| s.checked_sub(offset))
                    .filter(|&s| s < form.m())
                    .ok_or_else(|| Error::Parse(format!("unknown coordinate `{name}`")))?;
                let elem: FieldElem = serde_json::from_value(v.clone())
                    .map_err(|e| Error::Parse(e.to_string()))?;
                if elem.tag() != FieldTag::Q {
                    tag = elem.tag();
                }
                elems[slot] = elem;
            }
            let coords = elems
                .iter()
                .map(|e| e.widen(tag))
                .collect::<Result<Vec<_>>>()?;
            Point::new(tag, coords)?
        }
        _ => return Err(Error::Parse("point must be a JSON array or object".into())),
    };
    if point.len() != form.m() {
        return Err(Error::DimensionMismatch { expected: form.m(), got: point.len() });
    }
    Ok(point)
}
