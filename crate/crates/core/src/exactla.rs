//! Exact integer linear algebra: Smith normal form, kernel lattices and
//! cohomology of integer cochain complexes.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{violated, Result};

/// Dense integer matrix, row-major.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        IntMatrix { rows, cols, data }
    }

    /// Panics on ragged input.
    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        Self::from_fn(r, c, |i, j| rows[i][j].clone().into())
    }

    pub fn from_diagonal<T: Into<BigInt> + Clone>(rows: usize, cols: usize, diag: &[T]) -> Self {
        let mut m = Self::zeros(rows, cols);
        for (i, d) in diag.iter().enumerate() {
            m[(i, i)] = d.clone().into();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn select_columns(&self, cols: &[usize]) -> Self {
        Self::from_fn(self.rows, cols.len(), |i, j| self[(i, cols[j])].clone())
    }

    pub fn select_rows(&self, rows: &[usize]) -> Self {
        Self::from_fn(rows.len(), self.cols, |i, j| self[(rows[i], j)].clone())
    }

    /// Stack blocks vertically; all blocks must share a column count.
    pub fn vstack(blocks: &[IntMatrix], cols: usize) -> Self {
        let mut data = Vec::new();
        let mut rows = 0;
        for b in blocks {
            assert_eq!(b.cols, cols);
            rows += b.rows;
            data.extend(b.data.iter().cloned());
        }
        IntMatrix { rows, cols, data }
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn sub(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, k: &BigInt) -> IntMatrix {
        IntMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * k).collect() }
    }

    /// Determinant by fraction-free elimination.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if a[(k, k)].is_zero() {
                match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                    Some(i) => {
                        a.swap_rows(i, k);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)]) / &prev;
                    a[(i, j)] = v;
                }
            }
            prev = a[(k, k)].clone();
        }
        sign * prev
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row[dst] += k * row[src]
    fn add_row(&mut self, dst: usize, src: usize, k: &BigInt) {
        for j in 0..self.cols {
            let v = &self.data[src * self.cols + j] * k;
            self.data[dst * self.cols + j] += v;
        }
    }

    /// col[dst] += k * col[src]
    fn add_col(&mut self, dst: usize, src: usize, k: &BigInt) {
        for i in 0..self.rows {
            let v = &self.data[i * self.cols + src] * k;
            self.data[i * self.cols + dst] += v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -core::mem::take(&mut self.data[i * self.cols + j]);
            self.data[i * self.cols + j] = v;
        }
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let cells: Vec<String> = self.row(i).iter().map(|x| alloc::format!("{x}")).collect();
            writeln!(f, "[{}]", cells.join(" "))?;
        }
        Ok(())
    }
}

/// `u * m * v == s` with `s` diagonal and each diagonal entry dividing the next.
#[derive(Clone, Debug)]
pub struct Snf {
    pub s: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
    pub rank: usize,
}

impl Snf {
    /// The nonzero diagonal entries, all positive.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.rank).map(|i| self.s[(i, i)].clone()).collect()
    }
}

pub fn snf(m: &IntMatrix) -> Snf {
    snf_impl(m, true, true)
}

fn snf_impl(m: &IntMatrix, track_u: bool, track_v: bool) -> Snf {
    let (r, c) = (m.rows, m.cols);
    let mut a = m.clone();
    let mut u = if track_u { IntMatrix::identity(r) } else { IntMatrix::zeros(0, 0) };
    let mut v = if track_v { IntMatrix::identity(c) } else { IntMatrix::zeros(0, 0) };
    let mut t = 0;

    macro_rules! row_op {
        (swap $i:expr, $j:expr) => {{
            a.swap_rows($i, $j);
            if track_u {
                u.swap_rows($i, $j);
            }
        }};
        (add $dst:expr, $src:expr, $k:expr) => {{
            a.add_row($dst, $src, $k);
            if track_u {
                u.add_row($dst, $src, $k);
            }
        }};
        (neg $i:expr) => {{
            a.negate_row($i);
            if track_u {
                u.negate_row($i);
            }
        }};
    }
    macro_rules! col_op {
        (swap $i:expr, $j:expr) => {{
            a.swap_cols($i, $j);
            if track_v {
                v.swap_cols($i, $j);
            }
        }};
        (add $dst:expr, $src:expr, $k:expr) => {{
            a.add_col($dst, $src, $k);
            if track_v {
                v.add_col($dst, $src, $k);
            }
        }};
    }

    while t < r.min(c) {
        // minimal |a_ij| over the trailing block, first hit in row-major order
        let mut best: Option<(usize, usize)> = None;
        for i in t..r {
            for j in t..c {
                let x = &a[(i, j)];
                if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < a[(bi, bj)].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        row_op!(swap t, pi);
        col_op!(swap t, pj);

        loop {
            let mut clean = true;
            for i in t + 1..r {
                if a[(i, t)].is_zero() {
                    continue;
                }
                let q = -(&a[(i, t)] / &a[(t, t)]);
                if !q.is_zero() {
                    row_op!(add i, t, &q);
                }
                clean &= a[(i, t)].is_zero();
            }
            for j in t + 1..c {
                if a[(t, j)].is_zero() {
                    continue;
                }
                let q = -(&a[(t, j)] / &a[(t, t)]);
                if !q.is_zero() {
                    col_op!(add j, t, &q);
                }
                clean &= a[(t, j)].is_zero();
            }
            if !clean {
                // a remainder is smaller than the pivot: move the smallest to (t,t)
                let mut best = (t, t);
                for i in t + 1..r {
                    let x = &a[(i, t)];
                    if !x.is_zero() && x.abs() < a[best].abs() {
                        best = (i, t);
                    }
                }
                for j in t + 1..c {
                    let x = &a[(t, j)];
                    if !x.is_zero() && x.abs() < a[best].abs() {
                        best = (t, j);
                    }
                }
                row_op!(swap t, best.0);
                col_op!(swap t, best.1);
                continue;
            }
            let p = a[(t, t)].clone();
            let bad = (t + 1..r).find(|&i| (t + 1..c).any(|j| !a[(i, j)].is_multiple_of(&p)));
            match bad {
                Some(i) => row_op!(add t, i, &BigInt::one()),
                None => break,
            }
        }
        if a[(t, t)].is_negative() {
            row_op!(neg t);
        }
        t += 1;
    }
    Snf { s: a, u, v, rank: t }
}

/// Basis (as columns) of the integer kernel of `m`. The basis spans a direct
/// summand of Z^cols.
pub fn kernel_lattice(m: &IntMatrix) -> IntMatrix {
    let d = snf_impl(m, false, true);
    let idx: Vec<usize> = (d.rank..m.cols).collect();
    d.v.select_columns(&idx)
}

pub fn rank(m: &IntMatrix) -> usize {
    snf_impl(m, false, false).rank
}

/// Integer left inverse of a matrix whose columns span a direct summand.
/// Returns `None` when the columns are dependent or not saturated.
pub fn left_inverse(b: &IntMatrix) -> Option<IntMatrix> {
    let d = snf(b);
    if d.rank != b.cols || d.invariant_factors().iter().any(|x| !x.is_one()) {
        return None;
    }
    // u b v = [I; 0]  =>  (v [I 0] u) b = I
    let mut top = IntMatrix::zeros(b.cols, b.rows);
    for i in 0..b.cols {
        top[(i, i)] = BigInt::one();
    }
    Some(d.v.mul(&top).mul(&d.u))
}

/// Rank plus torsion coefficients d1 | d2 | ..., each at least 2.
#[derive(Clone, PartialEq, Eq, Debug, Default, PartialOrd, Ord, Hash)]
pub struct AbelianGroupInv {
    pub rank: usize,
    pub torsion: Vec<BigInt>,
}

impl AbelianGroupInv {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn free(rank: usize) -> Self {
        AbelianGroupInv { rank, torsion: Vec::new() }
    }

    /// Z^rank ⊕ ⊕ Z/c for arbitrary nonzero cyclic orders `c`, put in
    /// invariant-factor form.
    pub fn from_cyclic(rank: usize, orders: &[BigInt]) -> Self {
        let orders: Vec<BigInt> = orders.iter().map(|x| x.abs()).filter(|x| !x.is_one()).collect();
        if orders.is_empty() {
            return Self::free(rank);
        }
        let d = snf_impl(&IntMatrix::from_diagonal(orders.len(), orders.len(), &orders), false, false);
        let torsion = d.invariant_factors().into_iter().filter(|x| !x.is_one()).collect();
        AbelianGroupInv { rank, torsion }
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut t = self.torsion.clone();
        t.extend(other.torsion.iter().cloned());
        Self::from_cyclic(self.rank + other.rank, &t)
    }

    pub fn is_zero(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    pub fn is_free(&self) -> bool {
        self.torsion.is_empty()
    }
}

impl fmt::Display for AbelianGroupInv {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(alloc::format!("Z^{r}")),
        }
        for d in &self.torsion {
            parts.push(alloc::format!("Z/{d}"));
        }
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" ⊕ "))
        }
    }
}

/// Cohomology ker(d_out) / im(d_in) at the middle term of
/// `C_prev --d_in--> C --d_out--> C_next`.
pub fn cochain_cohomology(d_in: &IntMatrix, d_out: &IntMatrix) -> Result<AbelianGroupInv> {
    if d_in.rows != d_out.cols {
        return Err(violated!(
            "cochain maps do not compose: {}x{} after {}x{}",
            d_out.rows,
            d_out.cols,
            d_in.rows,
            d_in.cols
        ));
    }
    if !d_out.mul(d_in).is_zero() {
        return Err(violated!("d∘d ≠ 0 in a cochain complex"));
    }
    let k = kernel_lattice(d_out);
    if k.cols == 0 {
        return Ok(AbelianGroupInv::zero());
    }
    let l = left_inverse(&k).expect("kernel basis is saturated");
    let x = l.mul(d_in);
    let d = snf_impl(&x, false, false);
    Ok(AbelianGroupInv::from_cyclic(k.cols - d.rank, &d.invariant_factors()))
}

/// Cohomology of every term of `0 -> C^0 -> C^1 -> ... -> C^top -> 0`,
/// given the differentials `ds[j]: C^j -> C^{j+1}` and the ranks of all terms.
pub fn complex_cohomology(dims: &[usize], ds: &[IntMatrix]) -> Result<Vec<AbelianGroupInv>> {
    let mut out = Vec::with_capacity(dims.len());
    for j in 0..dims.len() {
        let d_in = if j == 0 { IntMatrix::zeros(dims[0], 0) } else { ds[j - 1].clone() };
        let d_out = if j + 1 < dims.len() { ds[j].clone() } else { IntMatrix::zeros(0, dims[j]) };
        out.push(cochain_cohomology(&d_in, &d_out)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
    }

    fn check(a: &IntMatrix) -> Snf {
        let d = snf(a);
        assert_eq!(d.u.mul(a).mul(&d.v), d.s);
        assert!(d.u.det().abs().is_one());
        assert!(d.v.det().abs().is_one());
        d
    }

    #[test]
    fn snf_small() {
        assert_eq!(check(&IntMatrix::identity(2)).s, IntMatrix::identity(2));
        assert_eq!(check(&m(&[&[2, 0], &[0, 3]])).invariant_factors(), [1.into(), 6.into()]);
        assert_eq!(check(&m(&[&[2, 4], &[6, 8]])).invariant_factors(), [2.into(), 4.into()]);
        assert_eq!(check(&IntMatrix::zeros(2, 3)).rank, 0);
    }

    #[test]
    fn kernels() {
        assert_eq!(kernel_lattice(&IntMatrix::zeros(1, 3)).cols(), 3);
        let k = kernel_lattice(&m(&[&[1, -1]]));
        assert_eq!(k.cols(), 1);
        assert_eq!(k[(0, 0)].abs(), BigInt::one());
        assert_eq!(k[(0, 0)], k[(1, 0)]);
        let k = kernel_lattice(&m(&[&[2, 0]]));
        assert_eq!((k[(0, 0)].clone(), k[(1, 0)].abs()), (BigInt::zero(), BigInt::one()));
    }

    #[test]
    fn klein_bottle_cells() {
        let h = complex_cohomology(&[1, 2, 1], &[IntMatrix::zeros(2, 1), m(&[&[2, 0]])]).unwrap();
        assert_eq!(h[0], AbelianGroupInv::free(1));
        assert_eq!(h[1], AbelianGroupInv::free(1));
        assert_eq!(h[2], AbelianGroupInv::from_cyclic(0, &[2.into()]));
        assert_eq!(alloc::format!("{}", h[2]), "Z/2");
    }

    #[test]
    fn circle_and_rejection() {
        let h = complex_cohomology(&[1, 1], &[IntMatrix::zeros(1, 1)]).unwrap();
        assert_eq!(h, [AbelianGroupInv::free(1), AbelianGroupInv::free(1)]);
        assert!(cochain_cohomology(&m(&[&[1]]), &m(&[&[1]])).is_err());
    }

    #[test]
    fn group_rendering() {
        let g = AbelianGroupInv::from_cyclic(2, &[6.into(), 4.into()]);
        assert_eq!(g.torsion, [BigInt::from(2), BigInt::from(12)]);
        assert_eq!(alloc::format!("{g}"), "Z^2 ⊕ Z/2 ⊕ Z/12");
        assert_eq!(alloc::format!("{}", AbelianGroupInv::zero()), "0");
    }
}
