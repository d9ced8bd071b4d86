//! Dense exact matrices over a single field, with fraction-free rank and
//! determinant computation.

use crate::cubic::Point;
use crate::error::{Error, Result};
use crate::field::{FieldElem, FieldTag};

/// A dense `rows x cols` matrix whose entries all share one field tag.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FieldMatrix {
    rows: usize,
    cols: usize,
    tag: FieldTag,
    data: Vec<FieldElem>,
}

impl FieldMatrix {
    /// The zero matrix.
    pub fn zeros(rows: usize, cols: usize, tag: FieldTag) -> Self {
        FieldMatrix {
            rows,
            cols,
            tag,
            data: vec![FieldElem::zero(tag); rows * cols],
        }
    }

    pub fn identity(n: usize, tag: FieldTag) -> Self {
        let mut m = Self::zeros(n, n, tag);
        for i in 0..n {
            m.data[i * n + i] = FieldElem::one(tag);
        }
        m
    }

    pub fn diagonal(entries: &[FieldElem], tag: FieldTag) -> Result<Self> {
        let n = entries.len();
        let mut m = Self::zeros(n, n, tag);
        for (i, e) in entries.iter().enumerate() {
            if e.tag() != tag {
                return Err(Error::FieldMismatch(tag, e.tag()));
            }
            m.data[i * n + i] = e.clone();
        }
        Ok(m)
    }

    pub fn from_rows(tag: FieldTag, rows: Vec<Vec<FieldElem>>) -> Result<Self> {
        let height = rows.len();
        let width = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(height * width);
        for row in rows {
            if row.len() != width {
                return Err(Error::DimensionMismatch { expected: width, got: row.len() });
            }
            for e in row {
                if e.tag() != tag {
                    return Err(Error::FieldMismatch(tag, e.tag()));
                }
                data.push(e);
            }
        }
        Ok(FieldMatrix { rows: height, cols: width, tag, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn tag(&self) -> FieldTag {
        self.tag
    }

    pub fn get(&self, r: usize, c: usize) -> &FieldElem {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: FieldElem) -> Result<()> {
        if value.tag() != self.tag {
            return Err(Error::FieldMismatch(self.tag, value.tag()));
        }
        self.data[r * self.cols + c] = value;
        Ok(())
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows, self.tag);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.data[c * self.rows + r] = self.get(r, c).clone();
            }
        }
        out
    }

    pub fn mul(&self, rhs: &FieldMatrix) -> Result<FieldMatrix> {
        if self.tag != rhs.tag {
            return Err(Error::FieldMismatch(self.tag, rhs.tag));
        }
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, got: rhs.rows });
        }
        let mut out = Self::zeros(self.rows, rhs.cols, self.tag);
        for i in 0..self.rows {
            for j in 0..rhs.cols {
                let mut acc = FieldElem::zero(self.tag);
                for k in 0..self.cols {
                    acc = acc.add(&self.get(i, k).mul(rhs.get(k, j))?)?;
                }
                out.data[i * rhs.cols + j] = acc;
            }
        }
        Ok(out)
    }

    /// Matrix-vector product on a point of matching tag.
    pub fn apply(&self, p: &Point) -> Result<Point> {
        if self.tag != p.tag() {
            return Err(Error::FieldMismatch(self.tag, p.tag()));
        }
        if self.cols != p.len() {
            return Err(Error::DimensionMismatch { expected: self.cols, got: p.len() });
        }
        let mut coords = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let mut acc = FieldElem::zero(self.tag);
            for k in 0..self.cols {
                acc = acc.add(&self.get(i, k).mul(p.coord(k))?)?;
            }
            coords.push(acc);
        }
        Point::new(self.tag, coords)
    }

    pub fn pow(&self, mut n: u32) -> Result<FieldMatrix> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch { expected: self.rows, got: self.cols });
        }
        let mut acc = Self::identity(self.rows, self.tag);
        while n > 0 {
            acc = acc.mul(self)?;
            n -= 1;
        }
        Ok(acc)
    }

    pub fn widened(&self, target: FieldTag) -> Result<FieldMatrix> {
        let data = self
            .data
            .iter()
            .map(|e| e.widen(target))
            .collect::<Result<Vec<_>>>()?;
        Ok(FieldMatrix { rows: self.rows, cols: self.cols, tag: target, data })
    }

    /// Exact rank by fraction-free (Bareiss-style) elimination with row
    /// pivoting and column advance. Intermediate entries stay minors of the
    /// original matrix, which keeps coefficient growth polynomial.
    pub fn rank(&self) -> usize {
        let mut m = self.data.clone();
        let (rows, cols) = (self.rows, self.cols);
        let at = |m: &Vec<FieldElem>, r: usize, c: usize| -> FieldElem { m[r * cols + c].clone() };
        let mut prev = FieldElem::one(self.tag);
        let mut r = 0usize;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(pivot_row) = (r..rows).find(|&i| !m[i * cols + c].is_zero()) else {
                continue;
            };
            if pivot_row != r {
                for j in 0..cols {
                    m.swap(r * cols + j, pivot_row * cols + j);
                }
            }
            let pivot = at(&m, r, c);
            for i in (r + 1)..rows {
                let head = at(&m, i, c);
                for j in (c + 1)..cols {
                    let num = pivot
                        .mul(&at(&m, i, j))
                        .and_then(|x| x.sub(&head.mul(&at(&m, r, j)).expect("same tag")))
                        .expect("same tag");
                    m[i * cols + j] = num.div(&prev).expect("exact division by prior pivot");
                }
                m[i * cols + c] = FieldElem::zero(self.tag);
            }
            prev = pivot;
            r += 1;
        }
        r
    }

    /// Exact determinant of a square matrix via the same elimination.
    pub fn determinant(&self) -> Result<FieldElem> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch { expected: self.rows, got: self.cols });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(FieldElem::one(self.tag));
        }
        let mut m = self.data.clone();
        let at = |m: &Vec<FieldElem>, r: usize, c: usize| -> FieldElem { m[r * n + c].clone() };
        let mut prev = FieldElem::one(self.tag);
        let mut sign_flip = false;
        for r in 0..n {
            let Some(pivot_row) = (r..n).find(|&i| !m[i * n + r].is_zero()) else {
                return Ok(FieldElem::zero(self.tag));
            };
            if pivot_row != r {
                for j in 0..n {
                    m.swap(r * n + j, pivot_row * n + j);
                }
                sign_flip = !sign_flip;
            }
            let pivot = at(&m, r, r);
            for i in (r + 1)..n {
                let head = at(&m, i, r);
                for j in (r + 1)..n {
                    let num = pivot
                        .mul(&at(&m, i, j))
                        .and_then(|x| x.sub(&head.mul(&at(&m, r, j)).expect("same tag")))
                        .expect("same tag");
                    m[i * n + j] = num.div(&prev).expect("exact division by prior pivot");
                }
                m[i * n + r] = FieldElem::zero(self.tag);
            }
            prev = pivot;
        }
        // after full fraction-free elimination the last pivot is the determinant
        Ok(if sign_flip { prev.neg() } else { prev })
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }
}
