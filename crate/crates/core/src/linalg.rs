//! Exact integer linear algebra: column Hermite form, Smith form, kernels,
//! integer solving and cohomology of `Z^a -> Z^b -> Z^c`.
//!
//! Entries are `i128`. Every matrix carries its shape so that `0 x n` and
//! `n x 0` matrices behave.

use std::fmt;
use std::ops::{Index, IndexMut};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i128>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMatrix{}x{}{:?}", self.rows, self.cols, self.to_rows())
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = i128;
    fn index(&self, (i, j): (usize, usize)) -> &i128 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i128 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    /// Builds from row vectors; `cols` is needed when `rows` is empty.
    pub fn from_rows(rows: &[Vec<i128>], cols: usize) -> Result<Self> {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(Error::Contract(format!(
                    "row {i} has length {}, expected {cols}",
                    r.len()
                )));
            }
            for (j, &x) in r.iter().enumerate() {
                m[(i, j)] = x;
            }
        }
        Ok(m)
    }

    pub fn from_cols(cols: &[Vec<i128>], rows: usize) -> Result<Self> {
        Ok(Self::from_rows(cols, rows)?.transpose())
    }

    pub fn from_i64_rows(rows: &[Vec<i64>], cols: usize) -> Result<Self> {
        let r: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
        Self::from_rows(&r, cols)
    }

    pub fn diagonal(d: &[i128]) -> Self {
        let mut m = Self::zeros(d.len(), d.len());
        for (i, &x) in d.iter().enumerate() {
            m[(i, i)] = x;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> Vec<i128> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vec<i128> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<i128>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::Contract(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] = checked_add(out[(i, j)], checked_mul(a, other[(k, j)]));
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[i128]) -> Result<Vec<i128>> {
        if self.cols != v.len() {
            return Err(Error::Contract(format!(
                "cannot apply {}x{} matrix to vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                (0..self.cols).fold(0i128, |acc, j| checked_add(acc, checked_mul(self[(i, j)], v[j])))
            })
            .collect())
    }

    pub fn scale(&self, c: i128) -> IntMatrix {
        let mut m = self.clone();
        for x in m.data.iter_mut() {
            *x = checked_mul(*x, c);
        }
        m
    }

    pub fn add(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Contract("shape mismatch in matrix sum".into()));
        }
        let mut m = self.clone();
        for (x, y) in m.data.iter_mut().zip(&other.data) {
            *x = checked_add(*x, *y);
        }
        Ok(m)
    }

    pub fn select_cols(&self, idx: &[usize]) -> IntMatrix {
        let mut m = Self::zeros(self.rows, idx.len());
        for i in 0..self.rows {
            for (k, &j) in idx.iter().enumerate() {
                m[(i, k)] = self[(i, j)];
            }
        }
        m
    }

    pub fn hstack(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.rows != other.rows {
            return Err(Error::Contract("row count mismatch in hstack".into()));
        }
        let mut m = Self::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(i, j)] = self[(i, j)];
            }
            for j in 0..other.cols {
                m[(i, self.cols + j)] = other[(i, j)];
            }
        }
        Ok(m)
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// col[dst] += c * col[src]
    fn add_col(&mut self, dst: usize, src: usize, c: i128) {
        if c == 0 {
            return;
        }
        for i in 0..self.rows {
            let v = checked_mul(c, self[(i, src)]);
            self[(i, dst)] = checked_add(self[(i, dst)], v);
        }
    }

    /// row[dst] += c * row[src]
    fn add_row(&mut self, dst: usize, src: usize, c: i128) {
        if c == 0 {
            return;
        }
        for j in 0..self.cols {
            let v = checked_mul(c, self[(src, j)]);
            self[(dst, j)] = checked_add(self[(dst, j)], v);
        }
    }

    fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            self[(i, j)] = -self[(i, j)];
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            self[(i, j)] = -self[(i, j)];
        }
    }
}

fn checked_mul(a: i128, b: i128) -> i128 {
    a.checked_mul(b).expect("integer overflow in exact linear algebra")
}

fn checked_add(a: i128, b: i128) -> i128 {
    a.checked_add(b).expect("integer overflow in exact linear algebra")
}

/// Column Hermite normal form `H = A U` with `U` unimodular.
///
/// The first `rank` columns of `H` are nonzero, column `j` has its leading
/// (topmost nonzero) entry at row `pivots[j]` with `pivots` strictly
/// increasing, pivot entries are positive, and every entry left of a pivot in
/// its row lies in `[0, pivot)`. Remaining columns are zero, so the matching
/// columns of `U` span the kernel.
#[derive(Clone, Debug)]
pub struct ColumnHnf {
    pub h: IntMatrix,
    pub u: IntMatrix,
    pub pivots: Vec<usize>,
}

impl ColumnHnf {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

pub fn column_hnf(a: &IntMatrix) -> ColumnHnf {
    let mut h = a.clone();
    let n = a.cols;
    let mut u = IntMatrix::identity(n);
    let mut pivots = Vec::new();
    let mut next = 0usize;
    for row in 0..a.rows {
        if next == n {
            break;
        }
        // Euclid across columns next.. on this row.
        loop {
            let mut best: Option<usize> = None;
            for j in next..n {
                if h[(row, j)] != 0 && best.is_none_or(|b| h[(row, j)].abs() < h[(row, b)].abs()) {
                    best = Some(j);
                }
            }
            let Some(b) = best else { break };
            h.swap_cols(next, b);
            u.swap_cols(next, b);
            let mut done = true;
            for j in next + 1..n {
                let q = h[(row, j)].div_euclid(h[(row, next)]);
                if q != 0 {
                    h.add_col(j, next, -q);
                    u.add_col(j, next, -q);
                }
                if h[(row, j)] != 0 {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h[(row, next)] == 0 {
            continue;
        }
        if h[(row, next)] < 0 {
            h.negate_col(next);
            u.negate_col(next);
        }
        let piv = h[(row, next)];
        for j in 0..next {
            let q = h[(row, j)].div_euclid(piv);
            if q != 0 {
                h.add_col(j, next, -q);
                u.add_col(j, next, -q);
            }
        }
        pivots.push(row);
        next += 1;
    }
    ColumnHnf { h, u, pivots }
}

pub fn rank(a: &IntMatrix) -> usize {
    column_hnf(a).rank()
}

/// A canonical Z-basis (as columns) of the lattice spanned by the columns of `a`.
pub fn lattice_basis(a: &IntMatrix) -> IntMatrix {
    let hnf = column_hnf(a);
    let idx: Vec<usize> = (0..hnf.rank()).collect();
    hnf.h.select_cols(&idx)
}

/// Canonical Z-basis of `{x : a x = 0}` as the columns of the returned matrix.
pub fn kernel_basis(a: &IntMatrix) -> IntMatrix {
    let hnf = column_hnf(a);
    let idx: Vec<usize> = (hnf.rank()..a.cols).collect();
    let raw = hnf.u.select_cols(&idx);
    // The kernel is saturated, so its column HNF is a canonical basis.
    lattice_basis(&raw)
}

/// An integer solution of `a x = b`, if one exists.
pub fn solve(a: &IntMatrix, b: &[i128]) -> Option<Vec<i128>> {
    assert_eq!(a.rows, b.len(), "right-hand side length");
    let hnf = column_hnf(a);
    let mut rest = b.to_vec();
    let mut w = vec![0i128; a.cols];
    for (j, &pr) in hnf.pivots.iter().enumerate() {
        let piv = hnf.h[(pr, j)];
        if rest[pr] % piv != 0 {
            return None;
        }
        let t = rest[pr] / piv;
        w[j] = t;
        for i in 0..a.rows {
            rest[i] = checked_add(rest[i], -checked_mul(t, hnf.h[(i, j)]));
        }
    }
    if rest.iter().any(|&x| x != 0) {
        return None;
    }
    Some(hnf.u.mul_vec(&w).expect("shapes agree"))
}

/// Inverse of a unimodular matrix.
pub fn unimodular_inverse(a: &IntMatrix) -> Result<IntMatrix> {
    if a.rows != a.cols {
        return Err(Error::Contract("inverse of a non-square matrix".into()));
    }
    let n = a.rows;
    let mut cols = Vec::with_capacity(n);
    for j in 0..n {
        let mut e = vec![0i128; n];
        e[j] = 1;
        cols.push(solve(a, &e).ok_or_else(|| Error::Contract("matrix is not unimodular".into()))?);
    }
    IntMatrix::from_cols(&cols, n)
}

/// Smith normal form `U A V = D` with `U`, `V` unimodular and
/// `d_1 | d_2 | ... | d_rank`, all positive.
#[derive(Clone, Debug)]
pub struct Smith {
    pub u: IntMatrix,
    pub v: IntMatrix,
    pub diag: Vec<i128>,
}

impl Smith {
    pub fn rank(&self) -> usize {
        self.diag.iter().filter(|&&d| d != 0).count()
    }
}

pub fn smith(a: &IntMatrix) -> Smith {
    let (m, n) = (a.rows, a.cols);
    let mut d = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);
    let mut t = 0usize;
    while t < m.min(n) {
        // smallest nonzero entry of the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                if d[(i, j)] != 0 && best.is_none_or(|(bi, bj)| d[(i, j)].abs() < d[(bi, bj)].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        d.swap_rows(t, bi);
        u.swap_rows(t, bi);
        d.swap_cols(t, bj);
        v.swap_cols(t, bj);
        let mut clean = true;
        for i in t + 1..m {
            let q = d[(i, t)].div_euclid(d[(t, t)]);
            d.add_row(i, t, -q);
            u.add_row(i, t, -q);
            if d[(i, t)] != 0 {
                clean = false;
            }
        }
        for j in t + 1..n {
            let q = d[(t, j)].div_euclid(d[(t, t)]);
            d.add_col(j, t, -q);
            v.add_col(j, t, -q);
            if d[(t, j)] != 0 {
                clean = false;
            }
        }
        if !clean {
            continue;
        }
        // divisibility of the trailing block
        let piv = d[(t, t)];
        let mut bad = None;
        'outer: for i in t + 1..m {
            for j in t + 1..n {
                if d[(i, j)] % piv != 0 {
                    bad = Some(i);
                    break 'outer;
                }
            }
        }
        if let Some(i) = bad {
            d.add_row(t, i, 1);
            u.add_row(t, i, 1);
            continue;
        }
        if piv < 0 {
            d.negate_row(t);
            u.negate_row(t);
        }
        t += 1;
    }
    let diag = (0..m.min(n)).map(|i| d[(i, i)]).collect();
    Smith { u, v, diag }
}

/// Cohomology `ker(outgoing) / im(incoming)` at the middle of
/// `Z^a --incoming--> Z^b --outgoing--> Z^c`.
#[derive(Clone, Debug)]
pub struct Cohomology {
    /// Columns: canonical basis of `ker(outgoing)`.
    pub kernel: IntMatrix,
    /// Image of `incoming` in kernel coordinates.
    pub relations: IntMatrix,
    pub smith: Smith,
    /// `P^{-1}` for the row transform `P` of the Smith form.
    pub smith_u_inv: IntMatrix,
    pub free_rank: usize,
    /// Invariant factors greater than one.
    pub torsion: Vec<i128>,
    /// Lifts to `Z^b` of the free generators.
    pub free_lifts: IntMatrix,
    /// Lifts to `Z^b` of the torsion generators, aligned with `torsion`.
    pub torsion_lifts: IntMatrix,
}

impl Cohomology {
    pub fn ambient_dim(&self) -> usize {
        self.kernel.rows
    }

    /// Coordinates of a cocycle `z` in (free generators, torsion generators).
    /// Errors if `z` is not a cocycle.
    pub fn coordinates(&self, z: &[i128]) -> Result<(Vec<i128>, Vec<i128>)> {
        let y = solve(&self.kernel, z).ok_or_else(|| Error::Contract("vector is not a cocycle".into()))?;
        let yp = self.smith.u.mul_vec(&y)?;
        let k = self.kernel.cols;
        let mut free = Vec::new();
        let mut tors = Vec::new();
        for (i, &c) in yp.iter().enumerate().take(k) {
            let di = self.smith.diag.get(i).copied().unwrap_or(0);
            if di == 0 {
                free.push(c);
            } else if di > 1 {
                tors.push(c.rem_euclid(di));
            }
        }
        Ok((free, tors))
    }

    /// Free coordinates only.
    pub fn free_coordinates(&self, z: &[i128]) -> Result<Vec<i128>> {
        Ok(self.coordinates(z)?.0)
    }
}

pub fn cohomology(incoming: &IntMatrix, outgoing: &IntMatrix) -> Result<Cohomology> {
    if incoming.rows != outgoing.cols {
        return Err(Error::Contract(format!(
            "composable maps expected: {}x{} then {}x{}",
            incoming.rows, incoming.cols, outgoing.rows, outgoing.cols
        )));
    }
    let kernel = kernel_basis(outgoing);
    let k = kernel.cols;
    let mut rel_cols = Vec::with_capacity(incoming.cols);
    for j in 0..incoming.cols {
        let c = incoming.col(j);
        let y = solve(&kernel, &c).ok_or_else(|| {
            Error::InconsistentData(format!("composite of differentials is nonzero on column {j}"))
        })?;
        rel_cols.push(y);
    }
    let relations = IntMatrix::from_cols(&rel_cols, k)?;
    let sm = smith(&relations);
    let u_inv = unimodular_inverse(&sm.u)?;
    let gens = kernel.mul(&u_inv)?; // b x k
    let mut free_idx = Vec::new();
    let mut tors_idx = Vec::new();
    let mut torsion = Vec::new();
    for i in 0..k {
        let di = sm.diag.get(i).copied().unwrap_or(0);
        if di == 0 {
            free_idx.push(i);
        } else if di > 1 {
            tors_idx.push(i);
            torsion.push(di);
        }
    }
    Ok(Cohomology {
        free_rank: free_idx.len(),
        free_lifts: gens.select_cols(&free_idx),
        torsion_lifts: gens.select_cols(&tors_idx),
        torsion,
        kernel,
        relations,
        smith: sm,
        smith_u_inv: u_inv,
    })
}

/// Determinant by fraction-free elimination (Bareiss).
pub fn determinant(a: &IntMatrix) -> Result<i128> {
    if a.rows != a.cols {
        return Err(Error::Contract("determinant of a non-square matrix".into()));
    }
    let n = a.rows;
    if n == 0 {
        return Ok(1);
    }
    let mut m = a.clone();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if m[(k, k)] == 0 {
            let Some(r) = (k + 1..n).find(|&r| m[(r, k)] != 0) else {
                return Ok(0);
            };
            m.swap_rows(k, r);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = checked_add(checked_mul(m[(i, j)], m[(k, k)]), -checked_mul(m[(i, k)], m[(k, j)]));
                m[(i, j)] = num / prev;
            }
        }
        prev = m[(k, k)];
    }
    Ok(sign * m[(n - 1, n - 1)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mat(rows: &[&[i128]], cols: usize) -> IntMatrix {
        IntMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>(), cols).unwrap()
    }

    #[test]
    fn smith_of_known_matrix() {
        let a = mat(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]], 3);
        let s = smith(&a);
        assert_eq!(s.diag, vec![2, 6, 12]);
        let d = s.u.mul(&a).unwrap().mul(&s.v).unwrap();
        assert_eq!(d, IntMatrix::diagonal(&[2, 6, 12]));
    }

    #[test]
    fn kernel_of_theta_incidence() {
        // d* of the theta graph: rows = vertices, cols = edges v1->v2
        let a = mat(&[&[1, 1, 1], &[-1, -1, -1]], 3);
        let k = kernel_basis(&a);
        assert_eq!(k.cols(), 2);
        assert!(a.mul(&k).unwrap().is_zero());
    }

    #[test]
    fn cohomology_of_cycle() {
        // Z^3 (vertices) -> Z^3 (edges) via coboundary of C_3, then -> 0
        let d = mat(&[&[1, -1, 0], &[0, 1, -1], &[-1, 0, 1]], 3);
        let h = cohomology(&d, &IntMatrix::zeros(0, 3)).unwrap();
        assert_eq!(h.free_rank, 1);
        assert!(h.torsion.is_empty());
        assert_eq!(h.free_coordinates(&[1, 1, 1]).unwrap().len(), 1);
        let c = h.free_coordinates(&[1, 1, 1]).unwrap()[0];
        let g = h.free_coordinates(&[1, 0, 0]).unwrap()[0];
        assert_eq!(c, 3 * g);
    }

    #[test]
    fn cohomology_with_torsion() {
        let two = mat(&[&[2]], 1);
        let h = cohomology(&two, &IntMatrix::zeros(0, 1)).unwrap();
        assert_eq!(h.free_rank, 0);
        assert_eq!(h.torsion, vec![2]);
        assert_eq!(h.coordinates(&[3]).unwrap().1, vec![1]);
    }

    #[test]
    fn inconsistent_complex_detected() {
        let a = mat(&[&[1]], 1);
        let b = mat(&[&[1]], 1);
        assert!(matches!(cohomology(&a, &b), Err(Error::InconsistentData(_))));
    }

    #[test]
    fn empty_shapes() {
        let z = IntMatrix::zeros(0, 0);
        let h = cohomology(&z, &z).unwrap();
        assert_eq!(h.free_rank, 0);
        let k = kernel_basis(&IntMatrix::zeros(0, 3));
        assert_eq!(k, IntMatrix::identity(3));
    }

    #[test]
    fn determinant_examples() {
        assert_eq!(determinant(&mat(&[&[2, 1], &[1, 2]], 2)).unwrap(), 3);
        assert_eq!(determinant(&mat(&[&[0, 1], &[1, 0]], 2)).unwrap(), -1);
        assert_eq!(determinant(&mat(&[&[1, 2], &[2, 4]], 2)).unwrap(), 0);
    }

    fn arb_matrix() -> impl Strategy<Value = IntMatrix> {
        (0usize..5, 0usize..5).prop_flat_map(|(r, c)| {
            proptest::collection::vec(-6i128..=6, r * c)
                .prop_map(move |d| IntMatrix { rows: r, cols: c, data: d })
        })
    }

    proptest! {
        #[test]
        fn smith_is_a_factorization(a in arb_matrix()) {
            let s = smith(&a);
            let d = s.u.mul(&a).unwrap().mul(&s.v).unwrap();
            for i in 0..d.rows() {
                for j in 0..d.cols() {
                    let expect = if i == j { s.diag[i] } else { 0 };
                    prop_assert_eq!(d[(i, j)], expect);
                }
            }
            let r = s.rank();
            for i in 0..r {
                prop_assert!(s.diag[i] > 0);
                if i + 1 < r {
                    prop_assert_eq!(s.diag[i + 1] % s.diag[i], 0);
                }
            }
            prop_assert_eq!(determinant(&s.u).unwrap().abs(), 1);
            prop_assert_eq!(determinant(&s.v).unwrap().abs(), 1);
            prop_assert_eq!(r, rank(&a));
        }

        #[test]
        fn hnf_is_a_factorization(a in arb_matrix()) {
            let h = column_hnf(&a);
            prop_assert_eq!(a.mul(&h.u).unwrap(), h.h.clone());
            prop_assert_eq!(determinant(&h.u).unwrap().abs(), 1);
            for w in h.pivots.windows(2) {
                prop_assert!(w[0] < w[1]);
            }
        }

        #[test]
        fn kernel_is_exact(a in arb_matrix()) {
            let k = kernel_basis(&a);
            prop_assert!(a.mul(&k).unwrap().is_zero());
            prop_assert_eq!(k.cols(), a.cols() - rank(&a));
            prop_assert_eq!(rank(&k), k.cols());
        }

        #[test]
        fn solve_recovers_image(a in arb_matrix(), seed in proptest::collection::vec(-5i128..=5, 5)) {
            let x: Vec<i128> = seed.into_iter().take(a.cols()).chain(std::iter::repeat(0)).take(a.cols()).collect();
            let b = a.mul_vec(&x).unwrap();
            let y = solve(&a, &b).expect("b is in the image");
            prop_assert_eq!(a.mul_vec(&y).unwrap(), b);
        }
    }
}
