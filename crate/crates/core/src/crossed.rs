//! Twisted crossed products C(O) ⋊_γ W for a finite W-set O, as explicit
//! algebras on the basis δ_x·w.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;

use crate::cyclo::Cyclo;
use crate::error::{invalid, violated, Result};
use crate::exactla::{rank, IntMatrix};
use crate::groups::{character_table, lying_over_basis, Cocycle, Group};

/// A finite set with a left action of a group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WSet {
    points: usize,
    /// act[w * points + x] = w·x
    act: Vec<usize>,
}

impl WSet {
    pub fn new(g: &Group, points: usize, act: Vec<usize>) -> Result<Self> {
        if act.len() != g.order() * points || act.iter().any(|&y| y >= points) {
            return Err(invalid!("action table has the wrong shape"));
        }
        let s = WSet { points, act };
        for x in 0..points {
            if s.act(0, x) != x {
                return Err(invalid!("the identity moves point {x}"));
            }
            for a in g.elements() {
                for b in g.elements() {
                    if s.act(g.mul(a, b), x) != s.act(a, s.act(b, x)) {
                        return Err(invalid!("action table is not a group action"));
                    }
                }
            }
        }
        Ok(s)
    }

    /// Left cosets W/H with w·aH = waH, points ordered by smallest member.
    pub fn cosets(g: &Group, sub: &[usize]) -> Result<Self> {
        if !g.is_subgroup(sub) {
            return Err(invalid!("coset space of a set that is not a subgroup"));
        }
        let mut reps: Vec<Vec<usize>> = Vec::new();
        let mut owner = vec![usize::MAX; g.order()];
        for a in g.elements() {
            if owner[a] == usize::MAX {
                let coset: Vec<usize> = sub.iter().map(|&h| g.mul(a, h)).collect();
                for &c in &coset {
                    owner[c] = reps.len();
                }
                reps.push(coset);
            }
        }
        let points = reps.len();
        let mut act = Vec::with_capacity(g.order() * points);
        for w in g.elements() {
            for r in &reps {
                act.push(owner[g.mul(w, r[0])]);
            }
        }
        WSet::new(g, points, act)
    }

    pub fn disjoint_union(&self, other: &WSet) -> WSet {
        let order = self.act.len() / self.points.max(1);
        let order = if self.points == 0 { other.act.len() / other.points.max(1) } else { order };
        let points = self.points + other.points;
        let mut act = Vec::with_capacity(order * points);
        for w in 0..order {
            act.extend((0..self.points).map(|x| self.act(w, x)));
            act.extend((0..other.points).map(|x| self.points + other.act(w, x)));
        }
        WSet { points, act }
    }

    pub fn len(&self) -> usize {
        self.points
    }

    pub fn is_empty(&self) -> bool {
        self.points == 0
    }

    pub fn act(&self, w: usize, x: usize) -> usize {
        self.act[w * self.points + x]
    }

    pub fn stabilizer(&self, g: &Group, x: usize) -> Vec<usize> {
        g.elements().filter(|&w| self.act(w, x) == x).collect()
    }

    /// Orbits, each sorted, ordered by smallest point.
    pub fn orbits(&self, g: &Group) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.points];
        let mut out = Vec::new();
        for x in 0..self.points {
            if !seen[x] {
                let o: BTreeSet<usize> = g.elements().map(|w| self.act(w, x)).collect();
                for &y in &o {
                    seen[y] = true;
                }
                out.push(o.into_iter().collect());
            }
        }
        out
    }
}

/// Coefficients on the basis δ_x·w, indexed x·|W| + w.
pub type Element = Vec<Cyclo>;

#[derive(Clone, Debug)]
pub struct FiniteCrossedProduct {
    group: Group,
    set: WSet,
    gamma: Cocycle,
    /// Root-of-unity order used for coefficients.
    n: usize,
}

/// δ_x w₁ · δ_y w₂ = [x = w₁y] γ(w₁, w₂) δ_x w₁w₂ and
/// (δ_x w)* = conj γ(w⁻¹, w) δ_{w⁻¹x} w⁻¹, with γ normalized so that
/// γ(w, w⁻¹) = 1. Associativity and the involution laws are checked.
pub fn build_crossed_product(g: &Group, set: &WSet, gamma: &Cocycle) -> Result<FiniteCrossedProduct> {
    gamma.validate(g)?;
    if set.act.len() != g.order() * set.points {
        return Err(invalid!("W-set belongs to a group of a different order"));
    }
    let gamma = gamma.normalize_inverse(g);
    let a = FiniteCrossedProduct { group: g.clone(), set: set.clone(), n: gamma.modulus() as usize, gamma };
    a.check_associativity()?;
    a.check_involution()?;
    Ok(a)
}

impl FiniteCrossedProduct {
    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn set(&self) -> &WSet {
        &self.set
    }

    pub fn gamma(&self) -> &Cocycle {
        &self.gamma
    }

    pub fn dim(&self) -> usize {
        self.set.points * self.group.order()
    }

    pub fn index(&self, x: usize, w: usize) -> usize {
        x * self.group.order() + w
    }

    fn split(&self, i: usize) -> (usize, usize) {
        i.div_rem(&self.group.order())
    }

    pub fn zero(&self) -> Element {
        vec![Cyclo::zero(self.n); self.dim()]
    }

    pub fn basis(&self, x: usize, w: usize) -> Element {
        let mut e = self.zero();
        e[self.index(x, w)] = Cyclo::int(self.n, 1);
        e
    }

    /// Σ_x δ_x · 1
    pub fn one(&self) -> Element {
        let mut e = self.zero();
        for x in 0..self.set.points {
            e[self.index(x, 0)] = Cyclo::int(self.n, 1);
        }
        e
    }

    /// Product of two basis elements, if nonzero.
    pub fn basis_product(&self, i: usize, j: usize) -> Option<(usize, Cyclo)> {
        let (x, w1) = self.split(i);
        let (y, w2) = self.split(j);
        if x != self.set.act(w1, y) {
            return None;
        }
        Some((self.index(x, self.group.mul(w1, w2)), self.gamma.value(w1, w2)))
    }

    pub fn mul(&self, a: &Element, b: &Element) -> Element {
        let mut out = self.zero();
        let right: Vec<(usize, &Cyclo)> = b.iter().enumerate().filter(|(_, c)| !c.is_zero()).collect();
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for &(j, bj) in &right {
                if let Some((k, c)) = self.basis_product(i, j) {
                    out[k] = out[k].add(&ai.mul(bj).mul(&c));
                }
            }
        }
        out
    }

    /// (δ_x w)* as a multiple of a single basis element.
    fn star_basis(&self, i: usize) -> (usize, Cyclo) {
        let (x, w) = self.split(i);
        let wi = self.group.inv(w);
        (self.index(self.set.act(wi, x), wi), self.gamma.value(wi, w).conj())
    }

    pub fn star(&self, a: &Element) -> Element {
        let g = &self.group;
        let mut out = self.zero();
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            let (x, w) = self.split(i);
            let wi = g.inv(w);
            let k = self.index(self.set.act(wi, x), wi);
            out[k] = out[k].add(&ai.conj().mul(&self.gamma.value(wi, w).conj()));
        }
        out
    }

    pub fn scale(&self, a: &Element, k: i64) -> Element {
        a.iter().map(|c| c.scale(k)).collect()
    }

    pub fn equal(&self, a: &Element, b: &Element) -> bool {
        a.iter().zip(b).all(|(x, y)| x == y)
    }

    /// (ab)c = a(bc) on every basis triple.
    pub fn check_associativity(&self) -> Result<()> {
        let d = self.dim();
        for i in 0..d {
            for j in 0..d {
                let ij = self.basis_product(i, j);
                for k in 0..d {
                    let left = ij.as_ref().and_then(|(p, c)| self.basis_product(*p, k).map(|(r, e)| (r, c.mul(&e))));
                    let right = self
                        .basis_product(j, k)
                        .and_then(|(p, c)| self.basis_product(i, p).map(|(r, e)| (r, c.mul(&e))));
                    if left != right {
                        return Err(violated!("structure constants are not associative on basis triple ({i}, {j}, {k})"));
                    }
                }
            }
        }
        Ok(())
    }

    /// a** = a and (ab)* = b*a* on basis elements.
    pub fn check_involution(&self) -> Result<()> {
        let d = self.dim();
        for i in 0..d {
            let (j, c) = self.star_basis(i);
            let (k, e) = self.star_basis(j);
            if k != i || !c.conj().mul(&e).sub(&Cyclo::int(self.n, 1)).is_zero() {
                return Err(violated!("the involution does not have order 2"));
            }
        }
        for i in 0..d {
            for j in 0..d {
                let left = self.basis_product(i, j).map(|(p, c)| {
                    let (q, e) = self.star_basis(p);
                    (q, c.conj().mul(&e))
                });
                let (a, ca) = self.star_basis(j);
                let (b, cb) = self.star_basis(i);
                let right = self.basis_product(a, b).map(|(r, e)| (r, ca.mul(&cb).mul(&e)));
                if left != right {
                    return Err(violated!("the involution is not an anti-automorphism"));
                }
            }
        }
        Ok(())
    }

    fn unit(&self, i: usize) -> Element {
        let (x, w) = self.split(i);
        self.basis(x, w)
    }

    /// a commutes with every basis element.
    pub fn is_central(&self, a: &Element) -> bool {
        (0..self.dim()).all(|i| {
            let b = self.unit(i);
            self.equal(&self.mul(a, &b), &self.mul(&b, a))
        })
    }

    /// Dimension of P_x A P_x with P_x = δ_x · 1.
    pub fn corner_dimension(&self, x: usize) -> usize {
        let p = self.basis(x, 0);
        (0..self.dim()).filter(|&i| self.mul(&self.mul(&p, &self.unit(i)), &p).iter().any(|c| !c.is_zero())).count()
    }

    /// Dimension of the centre, by exact linear algebra over Q.
    pub fn center_dimension(&self) -> usize {
        let g = &self.group;
        let phi = Cyclo::int(self.n, 1).canonical().len();
        // a central element commutes with every δ_y, so it lives on δ_x w with wx = x
        let support: Vec<usize> =
            (0..self.dim()).filter(|&i| {
                let (x, w) = self.split(i);
                self.set.act(w, x) == x
            }).collect();
        let units: Vec<Element> = g
            .generators()
            .iter()
            .map(|&h| {
                let mut e = self.zero();
                for y in 0..self.set.points {
                    e[self.index(y, h)] = Cyclo::int(self.n, 1);
                }
                e
            })
            .collect();
        let cols = support.len() * phi;
        let rows = units.len() * self.dim() * phi;
        let mut m = IntMatrix::zeros(rows, cols);
        for (si, &i) in support.iter().enumerate() {
            for t in 0..phi {
                let mut e = self.zero();
                e[i] = Cyclo::root(self.n, t as i64);
                for (ui, u) in units.iter().enumerate() {
                    let comm: Vec<Cyclo> =
                        self.mul(u, &e).iter().zip(self.mul(&e, u)).map(|(a, b)| a.sub(&b)).collect();
                    for (k, c) in comm.iter().enumerate() {
                        for (r, v) in c.canonical().into_iter().enumerate() {
                            m[((ui * self.dim() + k) * phi + r, si * phi + t)] = BigInt::from(v);
                        }
                    }
                }
            }
        }
        (cols - rank(&m)) / phi
    }
}

/// One irreducible representation of the algebra, induced from the
/// irreducible γ-representation `irrep` of the stabilizer of `basepoint`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualPoint {
    pub basepoint: usize,
    pub orbit_size: usize,
    /// Index in the stabilizer's twisted character table.
    pub irrep: usize,
    pub degree: usize,
    /// Dimension of the induced representation.
    pub dim: usize,
}

/// Irreducible representations up to equivalence, one basepoint per orbit.
pub fn orbit_dual(a: &FiniteCrossedProduct, order_cap: usize) -> Result<Vec<DualPoint>> {
    let mut out = Vec::new();
    for orbit in a.set.orbits(&a.group) {
        let x = orbit[0];
        let stab = a.set.stabilizer(&a.group, x);
        let table = character_table(&a.group, &stab, &a.gamma, order_cap)?;
        for (i, d) in table.degrees().into_iter().enumerate() {
            out.push(DualPoint { basepoint: x, orbit_size: orbit.len(), irrep: i, degree: d, dim: d * orbit.len() });
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct IdealSummand {
    /// c with c·P integral, c = |W'_x|.
    pub scale: usize,
    /// c·P
    pub projection: Element,
    /// Dimension of the ideal P·A, as the trace of left multiplication by P.
    pub dimension: usize,
    /// Number of dual points of the orbit lying over conj(ι).
    pub k0_rank: usize,
}

/// P = Σ_{z∈O} |W'_z|⁻¹ Σ_{w∈W'_z} ι(w, z) δ_z w on the orbit of `basepoint`,
/// with W'_z and ι transported from the basepoint. Checks that P is a
/// self-adjoint central idempotent and that its trace matches the lying-over
/// count.
pub fn ideal_summand(
    a: &FiniteCrossedProduct,
    basepoint: usize,
    normal: &[usize],
    iota: &[Cyclo],
    order_cap: usize,
) -> Result<IdealSummand> {
    let g = &a.group;
    let gamma = &a.gamma;
    let stab = a.set.stabilizer(g, basepoint);
    let table = character_table(g, &stab, gamma, order_cap)?;
    let over = lying_over_basis(g, gamma, &table, normal, iota)?;

    let c = normal.len();
    let mut p = a.zero();
    let mut done = BTreeSet::new();
    for u in g.elements() {
        let z = a.set.act(u, basepoint);
        if !done.insert(z) {
            continue;
        }
        let ui = g.inv(u);
        for (&v, val) in normal.iter().zip(iota) {
            // ι(u v u⁻¹, u x) = ι(v, x) γ(uv, u⁻¹) γ(u, v) conj γ(u, u⁻¹)
            let moved = val
                .mul(&gamma.value(g.mul(u, v), ui))
                .mul(&gamma.value(u, v))
                .mul(&gamma.value(u, ui).conj());
            let k = a.index(z, g.conj(u, v));
            p[k] = p[k].add(&moved);
        }
    }
    if !a.equal(&a.mul(&p, &p), &a.scale(&p, c as i64)) {
        return Err(violated!("P is not idempotent"));
    }
    if !a.equal(&a.star(&p), &p) {
        return Err(violated!("P is not self-adjoint"));
    }
    if !a.is_central(&p) {
        return Err(violated!("P is not central: W' and ι are inconsistent along the orbit"));
    }
    let orbit = done.len();
    let dimension = orbit * g.order() / c;
    let blocks: usize = over.iter().map(|&i| (table.irr[i].degree * orbit).pow(2)).sum();
    if blocks != dimension {
        return Err(violated!("ideal dimension {dimension} differs from the sum of its block sizes {blocks}"));
    }
    Ok(IdealSummand { scale: c, projection: p, dimension, k0_rank: over.len() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::cocycle::tests::{klein_four, klein_twist};
    use crate::groups::DEFAULT_ORDER_CAP;

    fn c2() -> Group {
        Group::from_table(2, vec![0, 1, 1, 0], vec![1]).unwrap()
    }

    #[test]
    fn point_orbit_is_group_algebra() {
        let g = c2();
        let pt = WSet::cosets(&g, &[0, 1]).unwrap();
        let a = build_crossed_product(&g, &pt, &Cocycle::trivial(2)).unwrap();
        assert_eq!(a.dim(), 2);
        assert_eq!(orbit_dual(&a, DEFAULT_ORDER_CAP).unwrap().len(), 2);
        assert_eq!(a.center_dimension(), 2);
    }

    #[test]
    fn free_orbit_is_simple() {
        let g = c2();
        let free = WSet::cosets(&g, &[0]).unwrap();
        let a = build_crossed_product(&g, &free, &Cocycle::trivial(2)).unwrap();
        assert_eq!(a.dim(), 4);
        assert_eq!(orbit_dual(&a, DEFAULT_ORDER_CAP).unwrap().len(), 1);
        assert_eq!(a.center_dimension(), 1);
    }

    #[test]
    fn twisted_point() {
        let g = klein_four();
        let pt = WSet::cosets(&g, &[0, 1, 2, 3]).unwrap();
        let a = build_crossed_product(&g, &pt, &klein_twist()).unwrap();
        let dual = orbit_dual(&a, DEFAULT_ORDER_CAP).unwrap();
        assert_eq!(dual.len(), 1);
        assert_eq!(dual[0].degree, 2);
        assert_eq!(a.center_dimension(), 1);
    }

    #[test]
    fn ideal_ranks() {
        let g = klein_four();
        let pt = WSet::cosets(&g, &[0, 1, 2, 3]).unwrap();
        let a = build_crossed_product(&g, &pt, &Cocycle::trivial(4)).unwrap();
        let one = |k: usize| vec![Cyclo::int(1, 1); k];
        assert_eq!(ideal_summand(&a, 0, &[0], &one(1), 64).unwrap().k0_rank, 4);
        assert_eq!(ideal_summand(&a, 0, &[0, 1, 2, 3], &one(4), 64).unwrap().k0_rank, 1);
        assert_eq!(ideal_summand(&a, 0, &[0, 1], &one(2), 64).unwrap().k0_rank, 2);
    }
}
