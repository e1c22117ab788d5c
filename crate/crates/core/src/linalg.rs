//! Exact linear algebra over the Gaussian rationals.
//!
//! Row reduction keeps the transformation matrix so that many right-hand
//! sides can be solved against one elimination, which is how per-mode
//! systems sharing a constant matrix are handled.

use std::collections::BTreeMap;
use std::fmt;

use crate::coeff::Scalar;

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self[(i, j)].to_string()).collect();
            writeln!(f, "  {}", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = Scalar;
    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Scalar {
        &mut self.data[i * self.cols + j]
    }
}

/// Hermitian inner product `Σ conj(u_i) v_i`.
pub fn inner(u: &[Scalar], v: &[Scalar]) -> Scalar {
    let mut s = Scalar::zero();
    for (a, b) in u.iter().zip(v) {
        if !a.is_zero() && !b.is_zero() {
            s += &(&a.conj() * b);
        }
    }
    s
}

pub fn norm_sq(u: &[Scalar]) -> Scalar {
    inner(u, u)
}

pub fn is_zero_vec(u: &[Scalar]) -> bool {
    u.iter().all(Scalar::is_zero)
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Scalar::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row);
        }
        Matrix {
            rows: r,
            cols: c,
            data,
        }
    }

    /// Builds a matrix whose columns are the given vectors of length `rows`.
    pub fn from_cols(rows: usize, cols: &[Vec<Scalar>]) -> Self {
        let mut m = Matrix::zeros(rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (i, v) in col.iter().enumerate() {
                m[(i, j)] = v.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn mul(&self, o: &Matrix) -> Matrix {
        assert_eq!(self.cols, o.rows, "shape mismatch in product");
        let mut out = Matrix::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = &o[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += &(a * b);
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut s = Scalar::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        s += &(a * b);
                    }
                }
                s
            })
            .collect()
    }

    pub fn add(&self, o: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, o: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * s).collect(),
        }
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].clone();
            }
        }
        out
    }

    pub fn conj(&self) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(Scalar::conj).collect(),
        }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Matrix {
        self.transpose().conj()
    }

    /// Stacks `o` below `self`.
    pub fn vstack(&self, o: &Matrix) -> Matrix {
        assert_eq!(self.cols, o.cols);
        let mut data = self.data.clone();
        data.extend(o.data.iter().cloned());
        Matrix {
            rows: self.rows + o.rows,
            cols: self.cols,
            data,
        }
    }

    /// Places `o` to the right of `self`.
    pub fn hstack(&self, o: &Matrix) -> Matrix {
        assert_eq!(self.rows, o.rows);
        let mut out = Matrix::zeros(self.rows, self.cols + o.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self[(i, j)].clone();
            }
            for j in 0..o.cols {
                out[(i, self.cols + j)] = o[(i, j)].clone();
            }
        }
        out
    }

    pub fn select_cols(&self, idx: &[usize]) -> Matrix {
        let cols: Vec<Vec<Scalar>> = idx.iter().map(|&j| self.col(j)).collect();
        Matrix::from_cols(self.rows, &cols)
    }

    pub fn factor(&self) -> Factored {
        Factored::new(self)
    }

    pub fn rank(&self) -> usize {
        self.factor().rank()
    }

    /// Basis of `{x : A x = 0}`.
    pub fn nullspace(&self) -> Vec<Vec<Scalar>> {
        self.factor().nullspace()
    }

    /// Some solution of `A x = b` (free variables set to zero), if consistent.
    pub fn solve(&self, b: &[Scalar]) -> Option<Vec<Scalar>> {
        self.factor().solve(b)
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let f = self.factor();
        if f.rank() != self.rows {
            return None;
        }
        let cols: Vec<Vec<Scalar>> = (0..self.rows)
            .map(|j| {
                let mut e = vec![Scalar::zero(); self.rows];
                e[j] = Scalar::one();
                f.solve(&e).expect("invertible")
            })
            .collect();
        Some(Matrix::from_cols(self.rows, &cols))
    }

    /// Indices of a maximal set of linearly independent columns.
    pub fn pivot_cols(&self) -> Vec<usize> {
        self.factor().pivots.clone()
    }

    /// Orthonormal-free basis of the column space: the pivot columns.
    pub fn column_basis(&self) -> Matrix {
        self.select_cols(&self.pivot_cols())
    }

    /// Minimal-norm solution of `A x = b` for the Hermitian norm.
    pub fn min_norm_solve(&self, b: &[Scalar]) -> Option<Vec<Scalar>> {
        let aa = self.mul(&self.adjoint());
        let y = aa.solve(b)?;
        let x = self.adjoint().mul_vec(&y);
        (self.mul_vec(&x) == b).then_some(x)
    }
}

/// Reusable minimal-norm solver for a fixed `A`: `x = A^†y` with
/// `AA^†y = b`, which lies in the row space of `A`.
#[derive(Clone, Debug)]
pub struct MinNormSolver {
    adj: Matrix,
    gram: Factored,
}

impl MinNormSolver {
    pub fn new(a: &Matrix) -> Self {
        let adj = a.adjoint();
        let gram = a.mul(&adj).factor();
        MinNormSolver { adj, gram }
    }

    pub fn solve(&self, b: &[Scalar]) -> Option<Vec<Scalar>> {
        let y = self.gram.solve(b)?;
        Some(self.adj.mul_vec(&y))
    }
}

/// Row-reduced form `T·A = R` retaining `T` for repeated solves.
#[derive(Clone, Debug)]
pub struct Factored {
    rows: usize,
    cols: usize,
    reduced: Matrix,
    transform: Matrix,
    pivots: Vec<usize>,
}

impl Factored {
    fn new(a: &Matrix) -> Self {
        let (rows, cols) = (a.rows, a.cols);
        let mut r = a.clone();
        let mut t = Matrix::identity(rows);
        let mut pivots = Vec::new();
        let mut prow = 0;
        for c in 0..cols {
            if prow == rows {
                break;
            }
            let Some(p) = (prow..rows).find(|&i| !r[(i, c)].is_zero()) else {
                continue;
            };
            if p != prow {
                swap_rows(&mut r, p, prow);
                swap_rows(&mut t, p, prow);
            }
            let inv = r[(prow, c)].inv().expect("nonzero pivot");
            scale_row(&mut r, prow, &inv);
            scale_row(&mut t, prow, &inv);
            for i in 0..rows {
                if i != prow && !r[(i, c)].is_zero() {
                    let f = r[(i, c)].clone();
                    axpy_row(&mut r, i, prow, &f);
                    axpy_row(&mut t, i, prow, &f);
                }
            }
            pivots.push(c);
            prow += 1;
        }
        Factored {
            rows,
            cols,
            reduced: r,
            transform: t,
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn reduced(&self) -> &Matrix {
        &self.reduced
    }

    pub fn solve(&self, b: &[Scalar]) -> Option<Vec<Scalar>> {
        assert_eq!(b.len(), self.rows);
        let y = self.transform.mul_vec(b);
        if y[self.rank()..].iter().any(|v| !v.is_zero()) {
            return None;
        }
        let mut x = vec![Scalar::zero(); self.cols];
        for (i, &c) in self.pivots.iter().enumerate() {
            x[c] = y[i].clone();
        }
        Some(x)
    }

    pub fn nullspace(&self) -> Vec<Vec<Scalar>> {
        let mut is_pivot = vec![false; self.cols];
        for &c in &self.pivots {
            is_pivot[c] = true;
        }
        let mut out = Vec::new();
        for f in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![Scalar::zero(); self.cols];
            v[f] = Scalar::one();
            for (i, &c) in self.pivots.iter().enumerate() {
                v[c] = -&self.reduced[(i, f)];
            }
            out.push(v);
        }
        out
    }
}

/// Sparse row-echelon elimination for tall exact systems with several
/// right-hand sides.
#[derive(Clone, Debug, Default)]
pub struct SparseSystem {
    cols: usize,
    nrhs: usize,
    /// Pivot rows keyed by leading column; the leading entry is 1.
    pivots: BTreeMap<usize, (BTreeMap<usize, Scalar>, Vec<Scalar>)>,
    /// For each right-hand side, whether a zero row with nonzero value appeared.
    inconsistent: Vec<bool>,
}

impl SparseSystem {
    pub fn new(cols: usize, nrhs: usize) -> Self {
        SparseSystem {
            cols,
            nrhs,
            pivots: BTreeMap::new(),
            inconsistent: vec![false; nrhs],
        }
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Adds the equation `Σ row[c] x_c = rhs[j]` for every right-hand side `j`.
    pub fn push(&mut self, mut row: BTreeMap<usize, Scalar>, mut rhs: Vec<Scalar>) {
        assert_eq!(rhs.len(), self.nrhs);
        row.retain(|_, v| !v.is_zero());
        loop {
            let Some((&lead, _)) = row.iter().next() else {
                for (j, v) in rhs.iter().enumerate() {
                    if !v.is_zero() {
                        self.inconsistent[j] = true;
                    }
                }
                return;
            };
            match self.pivots.get(&lead) {
                Some((prow, prhs)) => {
                    let f = row[&lead].clone();
                    for (c, v) in prow {
                        let d = v * &f;
                        let e = row.entry(*c).or_insert_with(Scalar::zero);
                        *e -= &d;
                        if e.is_zero() {
                            row.remove(c);
                        }
                    }
                    for (r, pv) in rhs.iter_mut().zip(prhs) {
                        if !pv.is_zero() {
                            *r -= &(pv * &f);
                        }
                    }
                }
                None => {
                    let inv = row[&lead].inv().expect("nonzero lead");
                    for v in row.values_mut() {
                        *v = &*v * &inv;
                    }
                    for v in rhs.iter_mut() {
                        if !v.is_zero() {
                            *v = &*v * &inv;
                        }
                    }
                    self.pivots.insert(lead, (row, rhs));
                    return;
                }
            }
        }
    }

    /// Back substitution with free variables set from `free`.
    fn back_substitute(&self, j: Option<usize>, free: &BTreeMap<usize, Scalar>) -> Vec<Scalar> {
        let mut x = vec![Scalar::zero(); self.cols];
        for (c, v) in free {
            x[*c] = v.clone();
        }
        for (lead, (row, rhs)) in self.pivots.iter().rev() {
            let mut v = j.map(|j| rhs[j].clone()).unwrap_or_else(Scalar::zero);
            for (c, a) in row.range(lead + 1..) {
                if !x[*c].is_zero() {
                    v -= &(a * &x[*c]);
                }
            }
            x[*lead] = v;
        }
        x
    }

    /// A particular solution for right-hand side `j` (free variables zero).
    pub fn solution(&self, j: usize) -> Option<Vec<Scalar>> {
        (!self.inconsistent[j]).then(|| self.back_substitute(Some(j), &BTreeMap::new()))
    }

    pub fn nullspace(&self) -> Vec<Vec<Scalar>> {
        (0..self.cols)
            .filter(|c| !self.pivots.contains_key(c))
            .map(|f| self.back_substitute(None, &BTreeMap::from([(f, Scalar::one())])))
            .collect()
    }
}

fn swap_rows(m: &mut Matrix, a: usize, b: usize) {
    for j in 0..m.cols {
        m.data.swap(a * m.cols + j, b * m.cols + j);
    }
}

fn scale_row(m: &mut Matrix, i: usize, s: &Scalar) {
    for j in 0..m.cols {
        let v = &mut m.data[i * m.cols + j];
        if !v.is_zero() {
            *v = &*v * s;
        }
    }
}

/// `row_i -= f · row_p`.
fn axpy_row(m: &mut Matrix, i: usize, p: usize, f: &Scalar) {
    for j in 0..m.cols {
        let src = &m.data[p * m.cols + j];
        if src.is_zero() {
            continue;
        }
        let d = src * f;
        m.data[i * m.cols + j] -= &d;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: i64) -> Scalar {
        Scalar::int(n)
    }

    #[test]
    fn sparse_matches_dense() {
        let rows = vec![
            vec![s(1), s(2), s(0), s(1)],
            vec![s(0), s(1), s(1), s(0)],
            vec![s(1), s(3), s(1), s(1)],
        ];
        let a = Matrix::from_rows(rows.clone());
        let mut sys = SparseSystem::new(4, 2);
        let b1 = a.mul_vec(&[s(1), s(-1), s(2), s(3)]);
        let b2 = vec![s(1), s(0), s(0)];
        for (i, r) in rows.iter().enumerate() {
            let row = r.iter().cloned().enumerate().collect();
            sys.push(row, vec![b1[i].clone(), b2[i].clone()]);
        }
        assert_eq!(sys.rank(), a.rank());
        assert_eq!(a.mul_vec(&sys.solution(0).unwrap()), b1);
        assert!(sys.solution(1).is_none());
        for v in sys.nullspace() {
            assert!(is_zero_vec(&a.mul_vec(&v)));
        }
        assert_eq!(sys.nullspace().len(), 4 - a.rank());
    }

    #[test]
    fn solve_and_nullspace() {
        let a = Matrix::from_rows(vec![vec![s(1), s(2), s(3)], vec![s(2), s(4), s(6)]]);
        assert_eq!(a.rank(), 1);
        let ns = a.nullspace();
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(is_zero_vec(&a.mul_vec(v)));
        }
        assert!(a.solve(&[s(1), s(3)]).is_none());
        let x = a.solve(&[s(1), s(2)]).unwrap();
        assert_eq!(a.mul_vec(&x), vec![s(1), s(2)]);
    }

    #[test]
    fn complex_inverse() {
        let a = Matrix::from_rows(vec![vec![Scalar::i(), s(1)], vec![s(0), s(2)]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), Matrix::identity(2));
    }

    #[test]
    fn min_norm_is_orthogonal_to_kernel() {
        let a = Matrix::from_rows(vec![vec![s(1), s(1), Scalar::i()]]);
        let x = a.min_norm_solve(&[s(3)]).unwrap();
        for k in a.nullspace() {
            assert!(inner(&k, &x).is_zero());
        }
        assert_eq!(a.mul_vec(&x), vec![s(3)]);
    }
}
