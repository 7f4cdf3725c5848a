//! Dense matrices over the ground field, ranks, solving, and reduction of a
//! complex by cancelling invertible incidences.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::novikov::{Field, Scalar};

/// A dense matrix acting on column vectors: entry `(r, c)` is the
/// coefficient of basis vector `r` in the image of basis vector `c`.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} over {}", self.rows, self.cols, self.field)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self.get(r, c).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl Matrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Matrix {
        Matrix {
            field,
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_fn(field: Field, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Matrix {
        let mut m = Matrix::zeros(field, rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m.set(r, c, f(r, c));
            }
        }
        m
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.data[r * self.cols + c] = v;
    }

    pub fn column(&self, c: usize) -> Vec<Scalar> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix shapes do not compose");
        let mut out = Matrix::zeros(self.field, self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if !b.is_zero() {
                        let v = out.get(r, c) + &(a * b);
                        out.set(r, c, v);
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn neg(&self) -> Matrix {
        Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| -a.clone()).collect(),
        }
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.field, self.cols, self.rows, |r, c| self.get(c, r).clone())
    }

    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                let mut acc = self.field.zero();
                for (c, x) in v.iter().enumerate() {
                    if !x.is_zero() {
                        acc += &(self.get(r, c) * x);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        Matrix::from_fn(self.field, rows.len(), cols.len(), |r, c| {
            self.get(rows[r], cols[c]).clone()
        })
    }

    pub fn hcat(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows);
        Matrix::from_fn(self.field, self.rows, self.cols + other.cols, |r, c| {
            if c < self.cols {
                self.get(r, c).clone()
            } else {
                other.get(r, c - self.cols).clone()
            }
        })
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(pr) = (row..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            if pr != row {
                for c in 0..m.cols {
                    m.data.swap(pr * m.cols + c, row * m.cols + c);
                }
            }
            let inv = m.get(row, col).inv().unwrap();
            for c in 0..m.cols {
                let v = m.get(row, c) * &inv;
                m.set(row, c, v);
            }
            for r in 0..m.rows {
                if r == row || m.get(r, col).is_zero() {
                    continue;
                }
                let factor = m.get(r, col).clone();
                for c in 0..m.cols {
                    let v = m.get(r, c) - &(&factor * m.get(row, c));
                    m.set(r, c, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// A solution `X` of `self * X = rhs`, if any.
    pub fn solve(&self, rhs: &Matrix) -> Option<Matrix> {
        assert_eq!(self.rows, rhs.rows);
        let aug = self.hcat(rhs);
        let (r, pivots) = aug.rref();
        if pivots.iter().any(|&p| p >= self.cols) {
            return None;
        }
        let mut x = Matrix::zeros(self.field, self.cols, rhs.cols);
        for (i, &p) in pivots.iter().enumerate() {
            for c in 0..rhs.cols {
                x.set(p, c, r.get(i, self.cols + c).clone());
            }
        }
        Some(x)
    }

    /// Columns spanning the kernel.
    pub fn kernel(&self) -> Matrix {
        let (r, pivots) = self.rref();
        let pivot_set: BTreeSet<usize> = pivots.iter().copied().collect();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivot_set.contains(c)).collect();
        let mut k = Matrix::zeros(self.field, self.cols, free.len());
        for (j, &f) in free.iter().enumerate() {
            k.set(f, j, self.field.one());
            for (i, &p) in pivots.iter().enumerate() {
                k.set(p, j, -r.get(i, f).clone());
            }
        }
        k
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let x = self.solve(&Matrix::identity(self.field, self.rows))?;
        (self.mul(&x) == Matrix::identity(self.field, self.rows)).then_some(x)
    }
}

/// Betti numbers of a finite cochain complex whose differential raises the
/// degree by one.
pub fn cohomology_ranks(d: &Matrix, degrees: &[i64]) -> BTreeMap<i64, usize> {
    let by_degree = indices_by_degree(degrees);
    let rank_from = |k: i64| -> usize {
        let Some(src) = by_degree.get(&k) else {
            return 0;
        };
        let Some(dst) = by_degree.get(&(k + 1)) else {
            return 0;
        };
        d.select(dst, src).rank()
    };
    by_degree
        .iter()
        .map(|(&k, idx)| (k, idx.len() - rank_from(k) - rank_from(k - 1)))
        .collect()
}

pub fn indices_by_degree(degrees: &[i64]) -> BTreeMap<i64, Vec<usize>> {
    let mut out: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    for (i, &k) in degrees.iter().enumerate() {
        out.entry(k).or_default().push(i);
    }
    out
}

/// Whether the degree-preserving chain map `f` (target x source) induces an
/// isomorphism on cohomology in every degree.
pub fn is_quasi_isomorphism(f: &Matrix, d_src: &Matrix, deg_src: &[i64], d_tgt: &Matrix, deg_tgt: &[i64]) -> bool {
    if d_tgt.mul(f) != f.mul(d_src) {
        return false;
    }
    let h_src = cohomology_ranks(d_src, deg_src);
    let h_tgt = cohomology_ranks(d_tgt, deg_tgt);
    let src = indices_by_degree(deg_src);
    let tgt = indices_by_degree(deg_tgt);
    let degrees: BTreeSet<i64> = h_src.keys().chain(h_tgt.keys()).copied().collect();
    for k in degrees {
        let hs = h_src.get(&k).copied().unwrap_or(0);
        let ht = h_tgt.get(&k).copied().unwrap_or(0);
        if hs != ht {
            return false;
        }
        if hs == 0 {
            continue;
        }
        let empty = Vec::new();
        let s_k = src.get(&k).unwrap_or(&empty);
        let t_k = tgt.get(&k).unwrap_or(&empty);
        let s_next = src.get(&(k + 1)).unwrap_or(&empty);
        let t_prev = tgt.get(&(k - 1)).unwrap_or(&empty);
        let cycles = d_src.select(s_next, s_k).kernel();
        let cycles_full = embed_rows(&cycles, s_k, deg_src.len());
        let image = f.mul(&cycles_full).select(t_k, &(0..cycles.cols()).collect::<Vec<_>>());
        let boundaries = d_tgt.select(t_k, t_prev);
        let with = boundaries.hcat(&image).rank();
        if with - boundaries.rank() != hs {
            return false;
        }
    }
    true
}

fn embed_rows(m: &Matrix, rows: &[usize], total: usize) -> Matrix {
    let mut out = Matrix::zeros(m.field(), total, m.cols());
    for (i, &r) in rows.iter().enumerate() {
        for c in 0..m.cols() {
            out.set(r, c, m.get(i, c).clone());
        }
    }
    out
}

/// A strong deformation retraction of a complex `(C, d)` onto a smaller
/// complex: `1 - iota proj = d h + h d`, `proj iota = 1`, and
/// `h iota = 0`, `proj h = 0`, `h h = 0`.
#[derive(Clone, Debug)]
pub struct Reduction {
    /// Surviving basis indices of the original complex.
    pub kept: Vec<usize>,
    pub iota: Matrix,
    pub proj: Matrix,
    pub homotopy: Matrix,
    pub differential: Matrix,
}

/// Incremental cancellation of invertible incidences. Cells are indexed by
/// the original basis throughout.
pub struct Reducer {
    d: Matrix,
    iota: Matrix,
    proj: Matrix,
    h: Matrix,
    alive: BTreeSet<usize>,
}

impl Reducer {
    pub fn new(d: &Matrix) -> Reducer {
        let n = d.rows();
        assert_eq!(n, d.cols());
        let f = d.field();
        Reducer {
            d: d.clone(),
            iota: Matrix::identity(f, n),
            proj: Matrix::identity(f, n),
            h: Matrix::zeros(f, n, n),
            alive: (0..n).collect(),
        }
    }

    /// The current differential, indexed by original cells.
    pub fn current(&self) -> &Matrix {
        &self.d
    }

    pub fn alive(&self) -> &BTreeSet<usize> {
        &self.alive
    }

    /// Cancels the pair where `b` appears in `d(a)` with invertible coefficient.
    pub fn cancel(&mut self, a: usize, b: usize) -> Result<()> {
        if a == b || !self.alive.contains(&a) || !self.alive.contains(&b) {
            return Err(Error::invalid(format!("cells {a}, {b} cannot be cancelled")));
        }
        let phi_inv = self
            .d
            .get(b, a)
            .inv()
            .ok_or_else(|| Error::invalid(format!("incidence of {b} in d({a}) is zero")))?;
        let n = self.d.rows();
        let f = self.d.field();
        let rest: Vec<usize> = self.alive.iter().copied().filter(|&x| x != a && x != b).collect();
        let u: Vec<Scalar> = (0..n).map(|x| &phi_inv * self.d.get(b, x)).collect();
        let v: Vec<Scalar> = (0..n).map(|y| self.d.get(y, a).clone()).collect();

        let row_b: Vec<Scalar> = (0..n).map(|c| &phi_inv * self.proj.get(b, c)).collect();
        let col_a: Vec<Scalar> = (0..n).map(|r| self.iota.get(r, a).clone()).collect();
        for r in 0..n {
            if col_a[r].is_zero() {
                continue;
            }
            for c in 0..n {
                if !row_b[c].is_zero() {
                    let val = self.h.get(r, c) + &(&col_a[r] * &row_b[c]);
                    self.h.set(r, c, val);
                }
            }
        }
        for &x in &rest {
            if u[x].is_zero() {
                continue;
            }
            for r in 0..n {
                if !col_a[r].is_zero() {
                    let val = self.iota.get(r, x) - &(&u[x] * &col_a[r]);
                    self.iota.set(r, x, val);
                }
            }
            for &y in &rest {
                if !v[y].is_zero() {
                    let val = self.d.get(y, x) - &(&v[y] * &u[x]);
                    self.d.set(y, x, val);
                }
            }
        }
        for &y in &rest {
            if v[y].is_zero() {
                continue;
            }
            let coef = &v[y] * &phi_inv;
            for c in 0..n {
                let pb = self.proj.get(b, c);
                if !pb.is_zero() {
                    let val = self.proj.get(y, c) - &(&coef * pb);
                    self.proj.set(y, c, val);
                }
            }
        }
        for x in [a, b] {
            self.alive.remove(&x);
            for i in 0..n {
                self.d.set(x, i, f.zero());
                self.d.set(i, x, f.zero());
                self.iota.set(i, x, f.zero());
                self.proj.set(x, i, f.zero());
            }
        }
        Ok(())
    }

    /// Pairs `(a, b)` still available for cancellation.
    pub fn invertible_incidences(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for &a in &self.alive {
            for &b in &self.alive {
                if !self.d.get(b, a).is_zero() {
                    out.push((a, b));
                }
            }
        }
        out
    }

    pub fn finish(self) -> Reduction {
        let kept: Vec<usize> = self.alive.iter().copied().collect();
        let n = self.d.rows();
        let all: Vec<usize> = (0..n).collect();
        Reduction {
            iota: self.iota.select(&all, &kept),
            proj: self.proj.select(&kept, &all),
            differential: self.d.select(&kept, &kept),
            homotopy: self.h,
            kept,
        }
    }
}

/// Cancels the listed pairs in order.
pub fn reduce_pairs(d: &Matrix, pairs: &[(usize, usize)]) -> Result<Reduction> {
    let mut r = Reducer::new(d);
    for &(a, b) in pairs {
        r.cancel(a, b)?;
    }
    Ok(r.finish())
}

/// Cancels greedily until the differential vanishes; the survivors carry
/// the cohomology.
pub fn reduce_fully(d: &Matrix) -> Reduction {
    let mut r = Reducer::new(d);
    while let Some(&(a, b)) = r.invertible_incidences().first() {
        r.cancel(a, b).expect("incidence is invertible");
    }
    r.finish()
}
