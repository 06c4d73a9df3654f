//! Cyclotomic integers Z[ζ_n] stored as coefficient vectors over 1, ζ, …, ζ^{n-1}.
//!
//! The representation is not unique; comparisons reduce modulo the n-th
//! cyclotomic polynomial first.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_integer::Integer;

#[derive(Clone, Debug)]
pub struct Cyclo {
    n: usize,
    c: Vec<i64>,
}

impl Cyclo {
    pub fn zero(n: usize) -> Self {
        assert!(n >= 1);
        Cyclo { n, c: vec![0; n] }
    }

    pub fn int(n: usize, k: i64) -> Self {
        let mut z = Self::zero(n);
        z.c[0] = k;
        z
    }

    /// ζ_n^k
    pub fn root(n: usize, k: i64) -> Self {
        let mut z = Self::zero(n);
        z.c[k.rem_euclid(n as i64) as usize] = 1;
        z
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.c
    }

    pub fn from_coeffs(n: usize, c: Vec<i64>) -> Self {
        assert_eq!(c.len(), n);
        Cyclo { n, c }
    }

    /// Same number viewed in Z[ζ_m] for a multiple m of the order.
    pub fn lift(&self, m: usize) -> Self {
        assert!(m % self.n == 0, "cannot lift order {} to {}", self.n, m);
        let f = m / self.n;
        let mut z = Self::zero(m);
        for (k, &a) in self.c.iter().enumerate() {
            z.c[k * f] = a;
        }
        z
    }

    fn common(a: &Self, b: &Self) -> (Self, Self) {
        if a.n == b.n {
            return (a.clone(), b.clone());
        }
        let m = a.n.lcm(&b.n);
        (a.lift(m), b.lift(m))
    }

    pub fn add(&self, o: &Self) -> Self {
        let (mut a, b) = Self::common(self, o);
        for (x, y) in a.c.iter_mut().zip(&b.c) {
            *x += y;
        }
        a
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        Cyclo { n: self.n, c: self.c.iter().map(|x| -x).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let (a, b) = Self::common(self, o);
        let n = a.n;
        let mut z = Self::zero(n);
        for (i, &x) in a.c.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.c.iter().enumerate() {
                if y != 0 {
                    z.c[(i + j) % n] += x * y;
                }
            }
        }
        z
    }

    pub fn scale(&self, k: i64) -> Self {
        Cyclo { n: self.n, c: self.c.iter().map(|x| x * k).collect() }
    }

    /// Complex conjugate: ζ ↦ ζ^{-1}.
    pub fn conj(&self) -> Self {
        let mut z = Self::zero(self.n);
        for (k, &a) in self.c.iter().enumerate() {
            z.c[(self.n - k) % self.n] += a;
        }
        z
    }

    /// Coefficients modulo the cyclotomic polynomial, length φ(n).
    pub fn canonical(&self) -> Vec<i64> {
        let phi = cyclotomic_poly(self.n);
        let d = phi.len() - 1;
        let mut r = self.c.clone();
        for top in (d..r.len()).rev() {
            let q = r[top];
            if q != 0 {
                for (i, &p) in phi.iter().enumerate() {
                    r[top - d + i] -= q * p;
                }
            }
        }
        r.truncate(d);
        r
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|&x| x == 0) || self.canonical().iter().all(|&x| x == 0)
    }

    /// The value as an ordinary integer, if it is one.
    pub fn as_int(&self) -> Option<i64> {
        let r = self.canonical();
        if r[1..].iter().all(|&x| x == 0) {
            Some(r[0])
        } else {
            None
        }
    }

    /// Exact division by a rational integer, when possible.
    pub fn div_int(&self, k: i64) -> Option<Self> {
        let r = self.canonical();
        if r.iter().any(|x| x % k != 0) {
            return None;
        }
        let mut c = vec![0; self.n];
        for (i, x) in r.iter().enumerate() {
            c[i] = x / k;
        }
        Some(Cyclo { n: self.n, c })
    }
}

impl PartialEq for Cyclo {
    fn eq(&self, other: &Self) -> bool {
        self.sub(other).is_zero()
    }
}

impl Eq for Cyclo {}

impl fmt::Display for Cyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(k) = self.as_int() {
            return write!(f, "{k}");
        }
        let mut first = true;
        for (k, &a) in self.canonical().iter().enumerate() {
            if a == 0 {
                continue;
            }
            let sign = if a < 0 { "-" } else if first { "" } else { "+" };
            let mag = a.abs();
            match (k, mag) {
                (0, _) => write!(f, "{sign}{mag}")?,
                (_, 1) => write!(f, "{sign}z{}^{k}", self.n)?,
                _ => write!(f, "{sign}{mag}*z{}^{k}", self.n)?,
            }
            first = false;
        }
        Ok(())
    }
}

/// Integer coefficients of Φ_n, constant term first.
pub fn cyclotomic_poly(n: usize) -> Vec<i64> {
    // x^n - 1 divided by Φ_d for all proper divisors d
    let mut p = vec![0i64; n + 1];
    p[0] = -1;
    p[n] = 1;
    for d in 1..n {
        if n % d == 0 {
            p = div_monic(&p, &cyclotomic_poly(d));
        }
    }
    p
}

fn div_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let dn = den.len() - 1;
    let mut r = num.to_vec();
    let mut q = vec![0i64; num.len() - dn];
    for top in (dn..num.len()).rev() {
        let c = r[top];
        q[top - dn] = c;
        if c != 0 {
            for (i, &b) in den.iter().enumerate() {
                r[top - dn + i] -= c * b;
            }
        }
    }
    debug_assert!(r.iter().all(|&x| x == 0), "inexact cyclotomic division");
    q
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclotomic_polys() {
        assert_eq!(cyclotomic_poly(1), [-1, 1]);
        assert_eq!(cyclotomic_poly(4), [1, 0, 1]);
        assert_eq!(cyclotomic_poly(6), [1, -1, 1]);
        assert_eq!(cyclotomic_poly(12), [1, 0, -1, 0, 1]);
    }

    #[test]
    fn arithmetic() {
        let w = Cyclo::root(3, 1);
        // 1 + ω + ω² = 0
        assert!(Cyclo::int(3, 1).add(&w).add(&w.mul(&w)).is_zero());
        assert_eq!(w.mul(&w.conj()), Cyclo::int(3, 1));
        assert_eq!(Cyclo::root(4, 1).mul(&Cyclo::root(4, 1)), Cyclo::int(1, -1));
        assert_eq!(Cyclo::root(2, 1).lift(6), Cyclo::root(6, 3));
        assert_eq!(Cyclo::root(4, 1).add(&Cyclo::root(6, 1)).order(), 12);
        assert_eq!(Cyclo::int(5, 6).div_int(3), Some(Cyclo::int(5, 2)));
    }
}
