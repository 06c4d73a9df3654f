use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{invalid, Result};
use crate::groups::{AffineTorusMap, Group};
use crate::rational::{dot_int, frac, inverse, q, Q};

/// The periodic family {u : ⟨normal, u⟩ ∈ offsets + Z} in lattice coordinates,
/// with a primitive integer normal whose first nonzero entry is positive and
/// sorted offsets in [0, 1).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct HyperplaneFamily {
    normal: Vec<i64>,
    offsets: Vec<Q>,
}

impl HyperplaneFamily {
    /// {u : ⟨v, u⟩ ∈ offsets + Z} for a rational covector v.
    pub fn new(v: &[Q], offsets: &[Q]) -> Result<Self> {
        if v.iter().all(Zero::is_zero) {
            return Err(invalid!("hyperplane normal is zero"));
        }
        if offsets.is_empty() {
            return Err(invalid!("hyperplane family without offsets"));
        }
        // v = c·p with p primitive; ⟨p,u⟩ ∈ (offsets + Z)/c
        let l = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let ints: Vec<BigInt> = v.iter().map(|x| (x * &l).to_integer()).collect();
        let mut g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        if ints.iter().find(|x| !x.is_zero()).unwrap().is_negative() {
            g = -g;
        }
        let c = Q::new(g.clone(), l);
        let normal: Vec<i64> = ints
            .iter()
            .map(|x| i64::try_from(x / &g).map_err(|_| invalid!("normal entry overflow")))
            .collect::<Result<_>>()?;
        let (base, step): (BTreeSet<Q>, Q) = if c.is_positive() {
            (offsets.iter().map(frac).collect(), c)
        } else {
            (offsets.iter().map(|o| frac(&-o)).collect(), -c)
        };
        // the set (base + Z)/step must be invariant under +1
        let shifted: BTreeSet<Q> = base.iter().map(|o| frac(&(o + &step))).collect();
        if shifted != base {
            return Err(invalid!("hyperplane family is not periodic for the lattice"));
        }
        let mut offs = BTreeSet::new();
        for o in &base {
            let mut j = Q::zero();
            while &(o + &j) < &step {
                offs.insert((o + &j) / &step);
                j += Q::one();
            }
        }
        Ok(HyperplaneFamily { normal, offsets: offs.into_iter().collect() })
    }

    /// {x : ⟨a, x⟩ ∈ offsets + period·Z} in ambient coordinates, where Λ is
    /// spanned by the columns of `lattice`.
    pub fn from_ambient(lattice: &[Vec<i64>], a: &[Q], offsets: &[Q], period: &Q) -> Result<Self> {
        let n = lattice.len();
        if a.len() != n {
            return Err(invalid!("normal has {} entries in dimension {n}", a.len()));
        }
        if period.is_zero() {
            return Err(invalid!("hyperplane period is zero"));
        }
        if inverse(&lattice.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect::<Vec<_>>()).is_none() {
            return Err(invalid!("lattice basis is singular"));
        }
        // ⟨a, L u⟩ / period = ⟨L^T a / period, u⟩
        let v: Vec<Q> = (0..n).map(|j| (0..n).map(|i| &a[i] * BigInt::from(lattice[i][j])).sum::<Q>() / period).collect();
        let offs: Vec<Q> = offsets.iter().map(|o| o / period).collect();
        Self::new(&v, &offs)
    }

    /// Unit covector e_i with offset 0.
    pub fn coordinate(n: usize, i: usize) -> Self {
        let mut normal = alloc::vec![0; n];
        normal[i] = 1;
        HyperplaneFamily { normal, offsets: alloc::vec![Q::zero()] }
    }

    pub fn normal(&self) -> &[i64] {
        &self.normal
    }

    pub fn offsets(&self) -> &[Q] {
        &self.offsets
    }

    pub fn dim(&self) -> usize {
        self.normal.len()
    }

    pub fn value(&self, x: &[Q]) -> Q {
        dot_int(&self.normal, x)
    }

    pub fn contains_value(&self, t: &Q) -> bool {
        self.offsets.binary_search(&frac(t)).is_ok()
    }

    /// Position of the component index of `⟨normal, x⟩` among the breakpoints:
    /// `None` on a hyperplane, otherwise k such that the value lies strictly
    /// between breakpoints k-1 and k.
    pub fn interval_index(&self, t: &Q) -> Option<i64> {
        let f = frac(t);
        if self.offsets.binary_search(&f).is_ok() {
            return None;
        }
        let below = self.offsets.iter().filter(|o| **o < f).count() as i64;
        let fl = i64::try_from(t.floor().to_integer()).expect("coordinate overflow");
        Some(fl * self.offsets.len() as i64 + below)
    }

    /// Shift of interval indices under translation by an integer vector.
    pub fn index_shift(&self, lambda: &[i64]) -> i64 {
        self.normal.iter().zip(lambda).map(|(a, b)| a * b).sum::<i64>() * self.offsets.len() as i64
    }

    /// {u : g(u) ∈ self}
    pub fn preimage(&self, g: &AffineTorusMap) -> Self {
        let a: Vec<Q> = self.normal.iter().map(|&x| q(x)).collect();
        let v = g.pullback(&a);
        let c = dot_int(&self.normal, g.shift());
        let offs: Vec<Q> = self.offsets.iter().map(|o| o - &c).collect();
        Self::new(&v, &offs).expect("preimage of a periodic family under a torus map is periodic")
    }

    /// Family with the union of both offset sets; normals must agree.
    fn merge(&mut self, other: &Self) {
        debug_assert_eq!(self.normal, other.normal);
        let s: BTreeSet<Q> = self.offsets.iter().chain(&other.offsets).cloned().collect();
        self.offsets = s.into_iter().collect();
    }

    /// Every hyperplane of `self` is a hyperplane of `other`.
    pub fn is_subfamily_of(&self, other: &Self) -> bool {
        self.normal == other.normal && self.offsets.iter().all(|o| other.offsets.binary_search(o).is_ok())
    }
}

/// Finite union of periodic families on R^n / Z^n, one family per normal.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Arrangement {
    n: usize,
    families: Vec<HyperplaneFamily>,
}

impl Arrangement {
    pub fn new(n: usize, families: &[HyperplaneFamily]) -> Result<Self> {
        let mut a = Arrangement { n, families: Vec::new() };
        for f in families {
            if f.dim() != n {
                return Err(invalid!("family of dimension {} in a {n}-dimensional arrangement", f.dim()));
            }
            a.add(f);
        }
        Ok(a)
    }

    /// Adds the coordinate families u_i ∈ Z, which keep every cell inside a
    /// translate of the closed unit cube.
    pub fn with_grid(mut self) -> Self {
        for i in 0..self.n {
            self.add(&HyperplaneFamily::coordinate(self.n, i));
        }
        self
    }

    pub fn add(&mut self, f: &HyperplaneFamily) {
        match self.families.binary_search_by(|x| x.normal.cmp(&f.normal)) {
            Ok(i) => self.families[i].merge(f),
            Err(i) => self.families.insert(i, f.clone()),
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn families(&self) -> &[HyperplaneFamily] {
        &self.families
    }

    pub fn contains(&self, f: &HyperplaneFamily) -> bool {
        self.families.iter().any(|x| f.is_subfamily_of(x))
    }

    /// Smallest arrangement containing `self` and stable under every element.
    pub fn closed_under(&self, g: &Group) -> Self {
        let mut out = self.clone();
        loop {
            let before = out.clone();
            for m in g.maps() {
                for f in before.families.clone() {
                    out.add(&f.preimage(m));
                }
            }
            if out == before {
                return out;
            }
        }
    }

    /// Whether the element maps the union of hyperplanes onto itself.
    pub fn is_invariant_under(&self, m: &AffineTorusMap) -> bool {
        self.families.iter().all(|f| self.contains(&f.preimage(m)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qf;

    fn lat2() -> Vec<alloc::vec::Vec<i64>> {
        alloc::vec![alloc::vec![2, 0], alloc::vec![0, 2]]
    }

    #[test]
    fn ambient_conversion() {
        // x ∈ 2Z on (2Z)² is u_1 ∈ Z
        let f = HyperplaneFamily::from_ambient(&lat2(), &[q(1), q(0)], &[q(0)], &q(2)).unwrap();
        assert_eq!(f, HyperplaneFamily::coordinate(2, 0));
        // x ∈ Z is u_1 ∈ ½Z
        let f = HyperplaneFamily::from_ambient(&lat2(), &[q(1), q(0)], &[q(0)], &q(1)).unwrap();
        assert_eq!(f.offsets(), [q(0), qf(1, 2)]);
        // x − y ∈ 2Z: normal (1,−1)
        let f = HyperplaneFamily::from_ambient(&lat2(), &[q(-1), q(1)], &[q(0)], &q(2)).unwrap();
        assert_eq!(f.normal(), [1, -1]);
    }

    #[test]
    fn periodicity_is_checked() {
        // x ∈ 3Z is not invariant under x ↦ x + 2
        assert!(HyperplaneFamily::from_ambient(&[alloc::vec![2]], &[q(1)], &[q(0)], &q(3)).is_err());
        assert!(HyperplaneFamily::new(&[q(0), q(0)], &[q(0)]).is_err());
        // 2u ∈ Z is u ∈ {0, 1/2} + Z
        let f = HyperplaneFamily::new(&[q(2)], &[q(0)]).unwrap();
        assert_eq!(f.offsets(), [q(0), qf(1, 2)]);
    }

    #[test]
    fn intervals() {
        let f = HyperplaneFamily::new(&[q(1)], &[q(0), qf(1, 2)]).unwrap();
        assert_eq!(f.interval_index(&qf(1, 4)), Some(1));
        assert_eq!(f.interval_index(&qf(3, 4)), Some(2));
        assert_eq!(f.interval_index(&qf(-1, 4)), Some(0));
        assert_eq!(f.interval_index(&qf(1, 2)), None);
        assert_eq!(f.index_shift(&[1]), 2);
    }

    #[test]
    fn merging_and_preimages() {
        let mut a = Arrangement::new(1, &[HyperplaneFamily::new(&[q(1)], &[qf(1, 2)]).unwrap()]).unwrap().with_grid();
        assert_eq!(a.families().len(), 1);
        assert_eq!(a.families()[0].offsets(), [q(0), qf(1, 2)]);
        let shift = AffineTorusMap::new(alloc::vec![1], alloc::vec![qf(1, 3)]).unwrap();
        assert!(!a.is_invariant_under(&shift));
        a.add(&HyperplaneFamily::new(&[q(1)], &[qf(1, 3)]).unwrap());
        assert!(!a.is_invariant_under(&shift));
    }
}
