use alloc::vec;
use alloc::vec::Vec;

use super::Group;
use crate::cyclo::Cyclo;
use crate::error::{invalid, Result};

/// Constant 2-cocycle with values in the m-th roots of unity:
/// γ(a, b) = exp(2πi · exponent(a, b) / m).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Cocycle {
    modulus: u32,
    order: usize,
    table: Vec<u32>,
}

impl Cocycle {
    pub fn trivial(order: usize) -> Self {
        Cocycle { modulus: 1, order, table: vec![0; order * order] }
    }

    /// Sparse constructor; unlisted pairs get exponent 0.
    pub fn from_entries(order: usize, modulus: u32, entries: &[(usize, usize, i64)]) -> Result<Self> {
        if modulus == 0 {
            return Err(invalid!("cocycle modulus must be positive"));
        }
        let mut table = vec![0; order * order];
        for &(a, b, k) in entries {
            if a >= order || b >= order {
                return Err(invalid!("cocycle entry ({a},{b}) outside the group"));
            }
            table[a * order + b] = k.rem_euclid(modulus as i64) as u32;
        }
        Ok(Cocycle { modulus, order, table })
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn exponent(&self, a: usize, b: usize) -> u32 {
        self.table[a * self.order + b]
    }

    pub fn value(&self, a: usize, b: usize) -> Cyclo {
        Cyclo::root(self.modulus as usize, self.exponent(a, b) as i64)
    }

    pub fn is_trivial(&self) -> bool {
        self.table.iter().all(|&x| x == 0)
    }

    /// Sparse listing of the nonzero exponents.
    pub fn entries(&self) -> Vec<(usize, usize, u32)> {
        let mut out = Vec::new();
        for a in 0..self.order {
            for b in 0..self.order {
                let k = self.exponent(a, b);
                if k != 0 {
                    out.push((a, b, k));
                }
            }
        }
        out
    }

    /// Normalization plus the 2-cocycle identity
    /// γ(u,v) γ(uv,w) = γ(v,w) γ(u,vw).
    pub fn validate(&self, g: &Group) -> Result<()> {
        if self.order != g.order() {
            return Err(invalid!("cocycle table is for a group of order {}, not {}", self.order, g.order()));
        }
        let m = self.modulus;
        for a in g.elements() {
            if self.exponent(0, a) != 0 || self.exponent(a, 0) != 0 {
                return Err(invalid!("cocycle is not normalized at element {a}"));
            }
        }
        for u in g.elements() {
            for v in g.elements() {
                let uv = g.mul(u, v);
                for w in g.elements() {
                    let lhs = (self.exponent(u, v) + self.exponent(uv, w)) % m;
                    let rhs = (self.exponent(v, w) + self.exponent(u, g.mul(v, w))) % m;
                    if lhs != rhs {
                        return Err(invalid!("2-cocycle identity fails at ({u},{v},{w})"));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn is_inverse_normalized(&self, g: &Group) -> bool {
        g.elements().all(|w| self.exponent(w, g.inv(w)) == 0)
    }

    /// A cohomologous cocycle with γ(w, w⁻¹) = 1, obtained by rescaling each
    /// w by a square root of γ(w, w⁻¹). May double the modulus.
    pub fn normalize_inverse(&self, g: &Group) -> Cocycle {
        if self.is_inverse_normalized(g) {
            return self.clone();
        }
        let m2 = 2 * self.modulus;
        // f(w) = -k_w in Z/2m where γ(w,w⁻¹) = ζ_m^{k_w} = ζ_{2m}^{2k_w}
        let f: Vec<u32> = g.elements().map(|w| (m2 - self.exponent(w, g.inv(w))) % m2).collect();
        let mut table = vec![0; self.order * self.order];
        for a in g.elements() {
            for b in g.elements() {
                let e = 2 * self.exponent(a, b) + f[a] + f[b] + (m2 - f[g.mul(a, b)]);
                table[a * self.order + b] = e % m2;
            }
        }
        Cocycle { modulus: m2, order: self.order, table }.reduced()
    }

    /// Same cocycle with the smallest modulus that expresses it.
    pub fn reduced(&self) -> Cocycle {
        use num_integer::Integer;
        let g = self.table.iter().fold(self.modulus, |acc, &x| acc.gcd(&x));
        Cocycle { modulus: self.modulus / g, order: self.order, table: self.table.iter().map(|x| x / g).collect() }
    }

    /// Restriction to the sorted subgroup `elems`, relabelled by position.
    pub fn restrict(&self, elems: &[usize]) -> Cocycle {
        let k = elems.len();
        let mut table = Vec::with_capacity(k * k);
        for &a in elems {
            for &b in elems {
                table.push(self.exponent(a, b));
            }
        }
        Cocycle { modulus: self.modulus, order: k, table }
    }

    /// Central extension μ_m ×_γ G; the pair (a, g) has index g·m + a and
    /// multiplies as (a,g)(b,h) = (a + b + exponent(g,h), gh).
    pub fn central_extension(&self, g: &Group) -> Group {
        let m = self.modulus as usize;
        let n = g.order() * m;
        let mut table = Vec::with_capacity(n * n);
        for x in 0..n {
            let (gx, ax) = (x / m, x % m);
            for y in 0..n {
                let (gy, ay) = (y / m, y % m);
                let a = (ax + ay + self.exponent(gx, gy) as usize) % m;
                table.push(g.mul(gx, gy) * m + a);
            }
        }
        let mut gens: Vec<usize> = g.generators().iter().map(|&x| x * m).collect();
        if m > 1 {
            gens.push(1);
        }
        Group::from_table(n, table, gens).expect("central extension of a valid cocycle is a group")
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    /// C2×C2 as an abstract group: element 2a + b ↔ (a, b).
    pub(crate) fn klein_four() -> Group {
        let mut t = Vec::new();
        for x in 0..4usize {
            for y in 0..4usize {
                t.push(x ^ y);
            }
        }
        Group::from_table(4, t, vec![2, 1]).unwrap()
    }

    /// γ((a,b),(c,d)) = (−1)^{bc}
    pub(crate) fn klein_twist() -> Cocycle {
        let mut e = Vec::new();
        for x in 0..4usize {
            for y in 0..4usize {
                let (b, c) = (x & 1, y >> 1);
                if b * c == 1 {
                    e.push((x, y, 1));
                }
            }
        }
        Cocycle::from_entries(4, 2, &e).unwrap()
    }

    #[test]
    fn validation() {
        let g = klein_four();
        klein_twist().validate(&g).unwrap();
        let bad = Cocycle::from_entries(4, 2, &[(1, 2, 1)]).unwrap();
        assert!(bad.validate(&g).is_err());
        let unnorm = Cocycle::from_entries(4, 2, &[(0, 1, 1)]).unwrap();
        assert!(unnorm.validate(&g).is_err());
    }

    #[test]
    fn extension_order() {
        let g = klein_four();
        let e = klein_twist().central_extension(&g);
        assert_eq!(e.order(), 8);
        // nonabelian: dihedral or quaternion
        assert!(e.elements().any(|a| e.elements().any(|b| e.mul(a, b) != e.mul(b, a))));
    }

    #[test]
    fn inverse_normalization() {
        let g = klein_four();
        let c = klein_twist();
        let n = c.normalize_inverse(&g);
        n.validate(&g).unwrap();
        assert!(n.is_inverse_normalized(&g));
        // still a nontrivial class: the extension stays nonabelian
        let e = n.central_extension(&g);
        assert!(e.elements().any(|a| e.elements().any(|b| e.mul(a, b) != e.mul(b, a))));
    }
}
