//! Dense exact linear algebra over Q(zeta_L): matrix arithmetic, rank,
//! kernel bases and the span computations behind the Burnside and
//! intertwiner oracles.
//!
//! Elimination pivots on the first nonzero entry in column order; exact
//! arithmetic needs no numeric pivoting and the deterministic choice keeps
//! kernel bases reproducible.

use crate::cyclotomic::CycNum;
use crate::error::{Error, Result};

/// A dense matrix with entries in Q(zeta_L), row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycMatrix {
    rows: usize,
    cols: usize,
    order: u64,
    entries: Vec<CycNum>,
}

/// A vector over Q(zeta_L).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycVector {
    order: u64,
    entries: Vec<CycNum>,
}

impl CycVector {
    pub fn new(order: u64, entries: Vec<CycNum>) -> Result<CycVector> {
        for e in &entries {
            if e.order() != order {
                return Err(Error::OrderMismatch(order, e.order()));
            }
        }
        Ok(CycVector { order, entries })
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[CycNum] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(CycNum::is_zero)
    }
}

impl CycMatrix {
    pub fn new(rows: usize, cols: usize, order: u64, entries: Vec<CycNum>) -> Result<CycMatrix> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(rows, cols, entries.len(), 1));
        }
        for e in &entries {
            if e.order() != order {
                return Err(Error::OrderMismatch(order, e.order()));
            }
        }
        Ok(CycMatrix { rows, cols, order, entries })
    }

    pub fn zero(rows: usize, cols: usize, order: u64) -> CycMatrix {
        CycMatrix {
            rows,
            cols,
            order,
            entries: vec![CycNum::zero(order); rows * cols],
        }
    }

    pub fn identity(n: usize, order: u64) -> CycMatrix {
        let mut m = Self::zero(n, n, order);
        for i in 0..n {
            *m.get_mut(i, i) = CycNum::one(order);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, order: u64, mut f: impl FnMut(usize, usize) -> CycNum) -> Result<CycMatrix> {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Self::new(rows, cols, order, entries)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn get(&self, i: usize, j: usize) -> &CycNum {
        &self.entries[i * self.cols + j]
    }

    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut CycNum {
        &mut self.entries[i * self.cols + j]
    }

    pub fn entries(&self) -> &[CycNum] {
        &self.entries
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    if i == j {
                        self.get(i, j).is_one()
                    } else {
                        self.get(i, j).is_zero()
                    }
                })
            })
    }

    /// Lifts every entry into Q(zeta_M), L | M.
    pub fn change_order(&self, new_order: u64) -> Result<CycMatrix> {
        let entries = self
            .entries
            .iter()
            .map(|e| e.change_order(new_order))
            .collect::<Result<Vec<_>>>()?;
        Ok(CycMatrix {
            rows: self.rows,
            cols: self.cols,
            order: new_order,
            entries,
        })
    }

    pub fn add(&self, other: &CycMatrix) -> Result<CycMatrix> {
        self.check_same_shape(other)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.add(b))
            .collect::<Result<Vec<_>>>()?;
        Ok(CycMatrix {
            rows: self.rows,
            cols: self.cols,
            order: self.order,
            entries,
        })
    }

    pub fn sub(&self, other: &CycMatrix) -> Result<CycMatrix> {
        self.check_same_shape(other)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.sub(b))
            .collect::<Result<Vec<_>>>()?;
        Ok(CycMatrix {
            rows: self.rows,
            cols: self.cols,
            order: self.order,
            entries,
        })
    }

    pub fn scale(&self, c: &CycNum) -> Result<CycMatrix> {
        if c.order() != self.order {
            return Err(Error::OrderMismatch(self.order, c.order()));
        }
        let entries = self
            .entries
            .iter()
            .map(|e| e.mul(c))
            .collect::<Result<Vec<_>>>()?;
        Ok(CycMatrix {
            rows: self.rows,
            cols: self.cols,
            order: self.order,
            entries,
        })
    }

    fn check_same_shape(&self, other: &CycMatrix) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(
                self.rows, self.cols, other.rows, other.cols,
            ));
        }
        if self.order != other.order {
            return Err(Error::OrderMismatch(self.order, other.order));
        }
        Ok(())
    }

    pub fn mat_mul(&self, other: &CycMatrix) -> Result<CycMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(
                self.rows, self.cols, other.rows, other.cols,
            ));
        }
        if self.order != other.order {
            return Err(Error::OrderMismatch(self.order, other.order));
        }
        let mut out = CycMatrix::zero(self.rows, other.cols, self.order);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let prod = a.mul(b)?;
                    let cur = out.get(i, j).add(&prod)?;
                    *out.get_mut(i, j) = cur;
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &CycVector) -> Result<CycVector> {
        if self.cols != v.len() {
            return Err(Error::DimensionMismatch(self.rows, self.cols, v.len(), 1));
        }
        if self.order != v.order {
            return Err(Error::OrderMismatch(self.order, v.order));
        }
        let mut out = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let mut acc = CycNum::zero(self.order);
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() || v.entries[j].is_zero() {
                    continue;
                }
                acc = acc.add(&a.mul(&v.entries[j])?)?;
            }
            out.push(acc);
        }
        CycVector::new(self.order, out)
    }

    /// Exact k-th power by square-and-multiply; negative k inverts first.
    pub fn mat_pow(&self, k: i64) -> Result<CycMatrix> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch(self.rows, self.cols, self.cols, self.rows));
        }
        if k < 0 {
            return self.inverse()?.mat_pow(-k);
        }
        let mut result = CycMatrix::identity(self.rows, self.order);
        let mut base = self.clone();
        let mut k = k as u64;
        while k > 0 {
            if k & 1 == 1 {
                result = result.mat_mul(&base)?;
            }
            k >>= 1;
            if k > 0 {
                base = base.mat_mul(&base)?;
            }
        }
        Ok(result)
    }

    /// Exact inverse by Gauss-Jordan on the augmented matrix.
    pub fn inverse(&self) -> Result<CycMatrix> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch(self.rows, self.cols, self.cols, self.rows));
        }
        let n = self.rows;
        let mut rows: Vec<Vec<CycNum>> = (0..n)
            .map(|i| {
                let mut r: Vec<CycNum> = (0..n).map(|j| self.get(i, j).clone()).collect();
                for j in 0..n {
                    r.push(if i == j {
                        CycNum::one(self.order)
                    } else {
                        CycNum::zero(self.order)
                    });
                }
                r
            })
            .collect();
        let pivots = row_reduce(&mut rows)?;
        if pivots.len() < n || pivots.iter().any(|&p| p >= n) {
            return Err(Error::Singular);
        }
        let mut out = CycMatrix::zero(n, n, self.order);
        for (r, _) in pivots.iter().enumerate() {
            for j in 0..n {
                *out.get_mut(r, j) = rows[r][n + j].clone();
            }
        }
        Ok(out)
    }

    /// Rank over Q(zeta_L).
    pub fn rank(&self) -> usize {
        let mut rows: Vec<Vec<CycNum>> = (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).clone()).collect())
            .collect();
        let pivots = row_reduce(&mut rows).expect("uniform order enforced at construction");
        pivots.len()
    }

    /// Exact basis of the right null space; empty iff rank = cols.
    pub fn kernel_basis(&self) -> Vec<CycVector> {
        let mut rows: Vec<Vec<CycNum>> = (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).clone()).collect())
            .collect();
        let pivots = row_reduce(&mut rows).expect("uniform order enforced at construction");
        let pivot_set: Vec<Option<usize>> = {
            let mut v = vec![None; self.cols];
            for (r, &c) in pivots.iter().enumerate() {
                v[c] = Some(r);
            }
            v
        };
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_set[free].is_some() {
                continue;
            }
            let mut vec = vec![CycNum::zero(self.order); self.cols];
            vec[free] = CycNum::one(self.order);
            for (c, pr) in pivot_set.iter().enumerate() {
                if let Some(r) = pr {
                    vec[c] = rows[*r][free].neg();
                }
            }
            basis.push(CycVector::new(self.order, vec).expect("orders uniform"));
        }
        basis
    }

    /// Flattens the matrix row-major into a vector of length rows*cols.
    pub fn flatten(&self) -> CycVector {
        CycVector {
            order: self.order,
            entries: self.entries.clone(),
        }
    }
}

/// Reduced row echelon form in place; returns the pivot columns in order.
/// All rows must share a cyclotomic order and a common length.
fn row_reduce(rows: &mut Vec<Vec<CycNum>>) -> Result<Vec<usize>> {
    if rows.is_empty() {
        return Ok(Vec::new());
    }
    let cols = rows[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r >= rows.len() {
            break;
        }
        let Some(pr) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = rows[r][c].inverse()?;
        for j in c..cols {
            if !rows[r][j].is_zero() {
                rows[r][j] = rows[r][j].mul(&inv)?;
            }
        }
        for i in 0..rows.len() {
            if i == r || rows[i][c].is_zero() {
                continue;
            }
            let f = rows[i][c].clone();
            for j in c..cols {
                if rows[r][j].is_zero() {
                    continue;
                }
                let t = f.mul(&rows[r][j])?;
                rows[i][j] = rows[i][j].sub(&t)?;
            }
        }
        pivots.push(c);
        r += 1;
    }
    Ok(pivots)
}

/// Incremental row-echelon span of vectors over Q(zeta_L).
///
/// Used by the Burnside fixpoint: vectors are reduced against the current
/// echelon basis as they arrive, so the dimension is maintained without
/// re-eliminating from scratch each round.
pub struct RowSpan {
    order: u64,
    width: usize,
    // rows sorted by pivot column, each with leading coefficient 1
    rows: Vec<Vec<CycNum>>,
    pivots: Vec<usize>,
}

impl RowSpan {
    pub fn new(order: u64, width: usize) -> RowSpan {
        RowSpan {
            order,
            width,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn dimension(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the span; inserts the residue if nonzero.
    /// Returns true when the dimension grew.
    pub fn insert(&mut self, v: &CycVector) -> Result<bool> {
        if v.order() != self.order {
            return Err(Error::OrderMismatch(self.order, v.order()));
        }
        if v.len() != self.width {
            return Err(Error::DimensionMismatch(1, v.len(), 1, self.width));
        }
        let mut w = v.entries.clone();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if w[p].is_zero() {
                continue;
            }
            let f = w[p].clone();
            for j in p..self.width {
                if row[j].is_zero() {
                    continue;
                }
                let t = f.mul(&row[j])?;
                w[j] = w[j].sub(&t)?;
            }
        }
        let Some(p) = w.iter().position(|e| !e.is_zero()) else {
            return Ok(false);
        };
        let inv = w[p].inverse()?;
        for e in w.iter_mut().skip(p) {
            if !e.is_zero() {
                *e = e.mul(&inv)?;
            }
        }
        let at = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(at, p);
        self.rows.insert(at, w);
        Ok(true)
    }

    /// The echelon basis rows as vectors.
    pub fn basis(&self) -> Vec<CycVector> {
        self.rows
            .iter()
            .map(|r| CycVector {
                order: self.order,
                entries: r.clone(),
            })
            .collect()
    }
}

/// Dimension of the linear span of the matrices viewed as flattened vectors.
pub fn span_dimension(generators: &[CycMatrix]) -> Result<usize> {
    let Some(first) = generators.first() else {
        return Ok(0);
    };
    let mut span = RowSpan::new(first.order(), first.rows() * first.cols());
    for g in generators {
        if g.rows() != first.rows() || g.cols() != first.cols() {
            return Err(Error::DimensionMismatch(
                first.rows(),
                first.cols(),
                g.rows(),
                g.cols(),
            ));
        }
        span.insert(&g.flatten())?;
    }
    Ok(span.dimension())
}
