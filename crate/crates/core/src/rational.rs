//! Rational vectors and small dense linear algebra over Q, used by the geometry.

use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(n.into())
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

/// Parses "p", "-p" or "p/q".
pub fn parse_q(s: &str) -> Option<Q> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().ok()?;
    let d: BigInt = d.parse().ok()?;
    if d.is_zero() {
        return None;
    }
    Some(Q::new(n, d))
}

pub fn fmt_q(x: &Q) -> String {
    if x.is_integer() {
        alloc::format!("{}", x.numer())
    } else {
        alloc::format!("{}/{}", x.numer(), x.denom())
    }
}

/// x mod 1, in [0, 1).
pub fn frac(x: &Q) -> Q {
    x - x.floor()
}

pub fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn dot_int(a: &[i64], b: &[Q]) -> Q {
    a.iter().zip(b).map(|(&x, y)| y * BigInt::from(x)).sum()
}

/// Reduced row echelon form; returns the nonzero rows and their pivot columns.
pub fn rref(rows: &[Vec<Q>]) -> (Vec<Vec<Q>>, Vec<usize>) {
    let mut a: Vec<Vec<Q>> = rows.to_vec();
    let cols = a.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..a.len() {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..cols {
                    let v = &a[r][j] * &f;
                    a[i][j] -= v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    a.truncate(r);
    (a, pivots)
}

/// Basis of {x : rows · x = 0} in `n` variables, one vector per free column.
pub fn nullspace(rows: &[Vec<Q>], n: usize) -> Vec<Vec<Q>> {
    let (r, piv) = rref(rows);
    let mut out = Vec::new();
    for free in (0..n).filter(|c| !piv.contains(c)) {
        let mut v = alloc::vec![Q::zero(); n];
        v[free] = Q::one();
        for (row, &p) in r.iter().zip(&piv) {
            v[p] = -row[free].clone();
        }
        out.push(v);
    }
    out
}

/// Unique solution of a square system, if the matrix is invertible.
pub fn solve(a: &[Vec<Q>], b: &[Q]) -> Option<Vec<Q>> {
    let n = a.len();
    let aug: Vec<Vec<Q>> = a
        .iter()
        .zip(b)
        .map(|(row, y)| {
            let mut r = row.clone();
            r.push(y.clone());
            r
        })
        .collect();
    let (r, piv) = rref(&aug);
    if piv.len() != n || piv.iter().any(|&p| p >= n) {
        return None;
    }
    Some(r.iter().map(|row| row[n].clone()).collect())
}

pub fn inverse(a: &[Vec<Q>]) -> Option<Vec<Vec<Q>>> {
    let n = a.len();
    let aug: Vec<Vec<Q>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Q::one() } else { Q::zero() }));
            r
        })
        .collect();
    let (r, piv) = rref(&aug);
    if piv.len() < n || piv[n - 1] >= n {
        return None;
    }
    Some(r.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Sign of the determinant of a square rational matrix.
pub fn det_sign(a: &[Vec<Q>]) -> i32 {
    let n = a.len();
    let mut m = a.to_vec();
    let mut sign = 1;
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else { return 0 };
        if p != c {
            m.swap(p, c);
            sign = -sign;
        }
        if m[c][c].is_negative() {
            sign = -sign;
        }
        for i in c + 1..n {
            if !m[i][c].is_zero() {
                let f = &m[i][c] / &m[c][c];
                for j in c..n {
                    let v = &m[c][j] * &f;
                    m[i][j] -= v;
                }
            }
        }
    }
    sign
}

/// Scales a nonzero rational vector to a primitive integer vector whose first
/// nonzero entry is positive.
pub fn primitive(v: &[Q]) -> Option<Vec<i64>> {
    use num_integer::Integer;
    let l = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * &l).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return None;
    }
    let first_neg = ints.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative());
    let g = if first_neg { -g } else { g };
    ints.iter().map(|x| i64::try_from(x / &g).ok()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parsing() {
        assert_eq!(parse_q("3/6"), Some(qf(1, 2)));
        assert_eq!(parse_q("-2"), Some(q(-2)));
        assert_eq!(parse_q("1/0"), None);
        assert_eq!(fmt_q(&qf(-4, 6)), "-2/3");
        assert_eq!(frac(&qf(-1, 3)), qf(2, 3));
    }

    #[test]
    fn linear_algebra() {
        let a = alloc::vec![alloc::vec![q(1), q(1)], alloc::vec![q(1), q(-1)]];
        assert_eq!(solve(&a, &[q(2), q(0)]), Some(alloc::vec![q(1), q(1)]));
        assert_eq!(det_sign(&a), -1);
        let inv = inverse(&a).unwrap();
        assert_eq!(inv[0], alloc::vec![qf(1, 2), qf(1, 2)]);
        let ns = nullspace(&[alloc::vec![q(1), q(-1), q(0)]], 3);
        assert_eq!(ns.len(), 2);
        assert_eq!(primitive(&[qf(-1, 2), q(1)]), Some(alloc::vec![1, -2]));
    }
}
