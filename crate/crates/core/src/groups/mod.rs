//! Finite groups acting affinely on tori, constant 2-cocycles and exact
//! (twisted) character theory.

mod chartab;
pub(crate) mod cocycle;

pub use chartab::{
    character_table, conjugation_matrix, lying_over_basis, ordinary_irreducibles, restriction_matrix,
    CharTable, Character, DEFAULT_ORDER_CAP,
};
pub use cocycle::Cocycle;

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{invalid, Error, Result};
use crate::rational::{frac, inverse, q, Q};

/// x ↦ A x + b on R^n / Z^n, written in lattice coordinates. Scenario input in
/// ambient coordinates goes through [`AffineTorusMap::from_ambient`].
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct AffineTorusMap {
    n: usize,
    linear: Vec<i64>,
    shift: Vec<Q>,
}

impl AffineTorusMap {
    pub fn identity(n: usize) -> Self {
        let mut linear = vec![0; n * n];
        for i in 0..n {
            linear[i * n + i] = 1;
        }
        AffineTorusMap { n, linear, shift: vec![Q::zero(); n] }
    }

    /// `linear` row-major n×n; the shift is reduced mod Z^n.
    pub fn new(linear: Vec<i64>, shift: Vec<Q>) -> Result<Self> {
        let n = shift.len();
        if linear.len() != n * n {
            return Err(invalid!("linear part has {} entries, expected {}", linear.len(), n * n));
        }
        let m = AffineTorusMap { n, linear, shift: shift.iter().map(frac).collect() };
        let rows: Vec<Vec<Q>> = (0..n).map(|i| (0..n).map(|j| q(m.a(i, j))).collect()).collect();
        let inv = inverse(&rows).ok_or_else(|| invalid!("linear part is singular"))?;
        if inv.iter().flatten().any(|x| !x.is_integer()) {
            return Err(invalid!("linear part is not invertible over the integers"));
        }
        Ok(m)
    }

    /// Converts x ↦ A x + b in ambient coordinates, with Λ spanned by the
    /// columns of `lattice`, into lattice coordinates.
    pub fn from_ambient(lattice: &[Vec<i64>], linear: &[Vec<i64>], shift: &[Q]) -> Result<Self> {
        let n = lattice.len();
        if linear.len() != n || linear.iter().any(|r| r.len() != n) || shift.len() != n {
            return Err(invalid!("map dimensions do not match the lattice dimension {n}"));
        }
        let l: Vec<Vec<Q>> = lattice.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect();
        let li = inverse(&l).ok_or_else(|| invalid!("lattice basis is singular"))?;
        let a: Vec<Vec<Q>> = linear.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect();
        let conj = matmul(&matmul(&li, &a), &l);
        let mut lin = Vec::with_capacity(n * n);
        for row in &conj {
            for x in row {
                if !x.is_integer() {
                    return Err(invalid!("linear part does not preserve the lattice"));
                }
                lin.push(i64::try_from(x.to_integer()).map_err(|_| invalid!("entry overflow"))?);
            }
        }
        let b: Vec<Q> = li.iter().map(|row| crate::rational::dot(row, shift)).collect();
        Self::new(lin, b)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn a(&self, i: usize, j: usize) -> i64 {
        self.linear[i * self.n + j]
    }

    pub fn linear(&self) -> &[i64] {
        &self.linear
    }

    pub fn shift(&self) -> &[Q] {
        &self.shift
    }

    /// self ∘ other
    pub fn compose(&self, other: &Self) -> Self {
        let n = self.n;
        let mut linear = vec![0; n * n];
        for i in 0..n {
            for j in 0..n {
                linear[i * n + j] = (0..n).map(|k| self.a(i, k) * other.a(k, j)).sum();
            }
        }
        let mut shift = self.apply_linear(&other.shift);
        for (s, b) in shift.iter_mut().zip(&self.shift) {
            *s = frac(&(&*s + b));
        }
        AffineTorusMap { n, linear, shift }
    }

    pub fn apply_linear(&self, x: &[Q]) -> Vec<Q> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| &x[j] * BigInt::from(self.a(i, j))).sum())
            .collect()
    }

    /// Image of a point of the cover (no reduction mod Z^n).
    pub fn apply(&self, x: &[Q]) -> Vec<Q> {
        let mut y = self.apply_linear(x);
        for (v, b) in y.iter_mut().zip(&self.shift) {
            *v += b;
        }
        y
    }

    /// Rows of A^T, i.e. the action on covectors by pullback: ⟨a, A x⟩ = ⟨A^T a, x⟩.
    pub fn pullback(&self, a: &[Q]) -> Vec<Q> {
        (0..self.n)
            .map(|j| (0..self.n).map(|i| &a[i] * BigInt::from(self.a(i, j))).sum())
            .collect()
    }
}

fn matmul(a: &[Vec<Q>], b: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let m = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| (0..m).map(|j| row.iter().zip(b).map(|(x, r)| x * &r[j]).sum()).collect())
        .collect()
}

/// A finite group given by its multiplication table. Element 0 is the identity.
#[derive(Clone, Debug)]
pub struct Group {
    order: usize,
    table: Vec<usize>,
    inv: Vec<usize>,
    gens: Vec<usize>,
    maps: Vec<AffineTorusMap>,
}

impl Group {
    pub fn trivial() -> Self {
        Group { order: 1, table: vec![0], inv: vec![0], gens: Vec::new(), maps: Vec::new() }
    }

    /// Validates closure, associativity, identity and inverses.
    pub fn from_table(order: usize, table: Vec<usize>, gens: Vec<usize>) -> Result<Self> {
        if order == 0 || table.len() != order * order || table.iter().any(|&x| x >= order) {
            return Err(invalid!("malformed multiplication table"));
        }
        let g = |a: usize, b: usize| table[a * order + b];
        if (0..order).any(|a| g(0, a) != a || g(a, 0) != a) {
            return Err(invalid!("element 0 is not the identity"));
        }
        let mut inv = vec![usize::MAX; order];
        for a in 0..order {
            match (0..order).find(|&b| g(a, b) == 0) {
                Some(b) if g(b, a) == 0 => inv[a] = b,
                _ => return Err(invalid!("element {a} has no inverse")),
            }
        }
        for a in 0..order {
            for b in 0..order {
                let ab = g(a, b);
                for c in 0..order {
                    if g(ab, c) != g(a, g(b, c)) {
                        return Err(invalid!("multiplication is not associative"));
                    }
                }
            }
        }
        if gens.iter().any(|&x| x >= order) {
            return Err(invalid!("generator index out of range"));
        }
        Ok(Group { order, table, inv, gens, maps: Vec::new() })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    /// w h w⁻¹
    pub fn conj(&self, w: usize, h: usize) -> usize {
        self.mul(self.mul(w, h), self.inv(w))
    }

    pub fn generators(&self) -> &[usize] {
        &self.gens
    }

    /// Torus maps of the elements, empty for abstract groups.
    pub fn maps(&self) -> &[AffineTorusMap] {
        &self.maps
    }

    pub fn elements(&self) -> core::ops::Range<usize> {
        0..self.order
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn exponent(&self) -> usize {
        use num_integer::Integer;
        self.elements().fold(1, |acc, a| acc.lcm(&self.element_order(a)))
    }

    /// Sorted closure of a set of elements under multiplication.
    pub fn generated(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = BTreeSet::from([0usize]);
        let mut stack = vec![0usize];
        while let Some(x) = stack.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if seen.insert(y) {
                    stack.push(y);
                }
            }
        }
        seen.into_iter().collect()
    }

    pub fn is_subgroup(&self, elems: &[usize]) -> bool {
        let set: BTreeSet<usize> = elems.iter().copied().collect();
        set.contains(&0) && elems.iter().all(|&a| elems.iter().all(|&b| set.contains(&self.mul(a, self.inv(b)))))
    }

    /// `sub` normal in the subgroup `ambient`.
    pub fn is_normal_in(&self, sub: &[usize], ambient: &[usize]) -> bool {
        let set: BTreeSet<usize> = sub.iter().copied().collect();
        ambient.iter().all(|&w| sub.iter().all(|&h| set.contains(&self.conj(w, h))))
    }

    /// Sorted w H w⁻¹.
    pub fn conjugate_subgroup(&self, w: usize, sub: &[usize]) -> Vec<usize> {
        let mut v: Vec<usize> = sub.iter().map(|&h| self.conj(w, h)).collect();
        v.sort_unstable();
        v
    }

    /// The subgroup on the sorted element list `elems` (which must start with 0),
    /// relabelled by position.
    pub fn subgroup(&self, elems: &[usize]) -> Result<Group> {
        if elems.first() != Some(&0) || !self.is_subgroup(elems) {
            return Err(invalid!("element set is not a subgroup"));
        }
        let pos: BTreeMap<usize, usize> = elems.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let k = elems.len();
        let mut table = Vec::with_capacity(k * k);
        for &a in elems {
            for &b in elems {
                table.push(pos[&self.mul(a, b)]);
            }
        }
        let inv = elems.iter().map(|&a| pos[&self.inv(a)]).collect();
        let maps = if self.maps.is_empty() { Vec::new() } else { elems.iter().map(|&a| self.maps[a].clone()).collect() };
        Ok(Group { order: k, table, inv, gens: (1..k).collect(), maps })
    }

    /// Conjugacy classes of the subgroup `elems` (global indices), each sorted,
    /// ordered by smallest member.
    pub fn classes_within(&self, elems: &[usize]) -> Vec<Vec<usize>> {
        let mut done = BTreeSet::new();
        let mut out = Vec::new();
        for &a in elems {
            if done.contains(&a) {
                continue;
            }
            let cls: BTreeSet<usize> = elems.iter().map(|&w| self.conj(w, a)).collect();
            done.extend(cls.iter().copied());
            out.push(cls.into_iter().collect());
        }
        out
    }

    pub fn classes(&self) -> Vec<Vec<usize>> {
        let all: Vec<usize> = self.elements().collect();
        self.classes_within(&all)
    }

    /// Element given by a word in generator positions (product left to right).
    pub fn word(&self, word: &[usize]) -> Option<usize> {
        word.iter().try_fold(0, |acc, &g| self.gens.get(g).map(|&x| self.mul(acc, x)))
    }

    /// Index of a torus map in a geometric group.
    pub fn find_map(&self, m: &AffineTorusMap) -> Option<usize> {
        self.maps.iter().position(|x| x == m)
    }
}

/// Smallest group of torus maps containing `gens`, in breadth-first order from
/// the identity. Generators keep their positions as the group's generator list.
pub fn close_affine_group(gens: &[AffineTorusMap], bound: usize) -> Result<Group> {
    let n = match gens.first() {
        Some(g) => g.dim(),
        None => return Err(invalid!("at least one generator is required")),
    };
    if gens.iter().any(|g| g.dim() != n) {
        return Err(invalid!("generators act on tori of different dimensions"));
    }
    let mut maps = vec![AffineTorusMap::identity(n)];
    let mut index: BTreeMap<AffineTorusMap, usize> = BTreeMap::from([(maps[0].clone(), 0)]);
    let mut head = 0;
    while head < maps.len() {
        for g in gens {
            let y = g.compose(&maps[head]);
            if !index.contains_key(&y) {
                if maps.len() >= bound {
                    return Err(Error::GroupClosure(bound));
                }
                index.insert(y.clone(), maps.len());
                maps.push(y);
            }
        }
        head += 1;
    }
    let order = maps.len();
    let mut table = Vec::with_capacity(order * order);
    for a in &maps {
        for b in &maps {
            table.push(index[&a.compose(b)]);
        }
    }
    let gen_idx = gens.iter().map(|g| index[g]).collect();
    let mut g = Group::from_table(order, table, gen_idx)?;
    g.maps = maps;
    Ok(g)
}
