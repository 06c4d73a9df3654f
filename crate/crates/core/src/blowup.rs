//! Cutting the torus open along the sliced locus: the space of pairs (point,
//! adjacent complement component) in the cover, modulo the lattice.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::arrangement::{EquivariantComplex, HyperplaneFamily, TorusComplex};
use crate::cyclo::Cyclo;
use crate::error::{invalid, violated, Result};
use crate::exactla::IntMatrix;
use crate::groups::{Cocycle, Group};
use crate::rational::{dot, dot_int, q, Q};

/// Hyperplanes on which one element acts as a scalar, with the value of ι on
/// each component (one component per offset).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlicedLocus {
    pub reflection: usize,
    pub family: HyperplaneFamily,
    /// Exponents k with ι = exp(2πi k / modulus), aligned with the family's
    /// offsets.
    pub iota: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlicedLocusSpec {
    pub modulus: u32,
    pub loci: Vec<SlicedLocus>,
}

impl SlicedLocusSpec {
    pub fn empty() -> Self {
        SlicedLocusSpec { modulus: 1, loci: Vec::new() }
    }

    /// Locus with ι ≡ 1.
    pub fn push_trivial(&mut self, reflection: usize, family: HyperplaneFamily) {
        let iota = vec![0; family.offsets().len()];
        self.loci.push(SlicedLocus { reflection, family, iota });
    }

    /// Every hyperplane with its reflection and ι exponent.
    fn hyperplanes(&self) -> Vec<(usize, HyperplaneFamily, u32)> {
        let mut out = Vec::new();
        for l in &self.loci {
            for (o, &e) in l.family.offsets().iter().zip(&l.iota) {
                let pq: Vec<Q> = l.family.normal().iter().map(|&x| q(x)).collect();
                out.push((l.reflection, HyperplaneFamily::new(&pq, &[o.clone()]).unwrap(), e % self.modulus));
            }
        }
        out
    }

    /// Adds the images of every locus under the group, with ι transported by
    /// ι(w r w⁻¹, w z) = ι(r, z) γ(w r, w⁻¹) γ(w, r) conj γ(w, w⁻¹).
    /// Fails if a listed locus or ι value contradicts its transport.
    pub fn completed(&self, g: &Group, gamma: &Cocycle) -> Result<Self> {
        let m = lcm(self.modulus, gamma.modulus());
        let scale = m / self.modulus;
        let mut table: BTreeMap<(usize, Vec<i64>, Q), u32> = BTreeMap::new();
        for l in &self.loci {
            if l.reflection >= g.order() || l.reflection == 0 {
                return Err(invalid!("sliced locus refers to element {} which is not a nontrivial element", l.reflection));
            }
            if l.iota.len() != l.family.offsets().len() {
                return Err(invalid!("ι must list one value per component of the locus of element {}", l.reflection));
            }
        }
        for (r, h, e) in self.hyperplanes() {
            let key = (r, h.normal().to_vec(), h.offsets()[0].clone());
            if let Some(&old) = table.get(&key) {
                if old != e * scale {
                    return Err(violated!("conflicting ι values on one component of the locus of element {r}"));
                }
            }
            table.insert(key, e * scale);
        }
        let gm = gamma.modulus();
        let to_m = |k: u32| k * (m / gm);
        loop {
            let mut added = false;
            for ((r, normal, off), e) in table.clone() {
                let pq: Vec<Q> = normal.iter().map(|&x| q(x)).collect();
                let h = HyperplaneFamily::new(&pq, &[off]).unwrap();
                for w in g.elements() {
                    let wi = g.inv(w);
                    let image = h.preimage(&g.maps()[wi]);
                    let r2 = g.conj(w, r);
                    let e2 = (e
                        + to_m(gamma.exponent(g.mul(w, r), wi))
                        + to_m(gamma.exponent(w, r))
                        + (m - to_m(gamma.exponent(w, wi))) % m)
                        % m;
                    let key = (r2, image.normal().to_vec(), image.offsets()[0].clone());
                    match table.get(&key) {
                        Some(&old) if old != e2 => {
                            return Err(violated!(
                                "ι is not compatible with conjugation: element {w} carries the locus of {r} to that of {r2} with a different value"
                            ))
                        }
                        Some(_) => {}
                        None => {
                            table.insert(key, e2);
                            added = true;
                        }
                    }
                }
            }
            if !added {
                break;
            }
        }
        let mut grouped: BTreeMap<(usize, Vec<i64>), Vec<(Q, u32)>> = BTreeMap::new();
        for ((r, normal, off), e) in table {
            grouped.entry((r, normal)).or_default().push((off, e));
        }
        let mut loci = Vec::new();
        for ((r, normal), offs) in grouped {
            let pq: Vec<Q> = normal.iter().map(|&x| q(x)).collect();
            let os: Vec<Q> = offs.iter().map(|(o, _)| o.clone()).collect();
            let family = HyperplaneFamily::new(&pq, &os)?;
            let iota = family.offsets().iter().map(|o| offs.iter().find(|(x, _)| x == o).unwrap().1).collect();
            loci.push(SlicedLocus { reflection: r, family, iota });
        }
        Ok(SlicedLocusSpec { modulus: m, loci })
    }

    pub fn families(&self) -> Vec<HyperplaneFamily> {
        self.loci.iter().map(|l| l.family.clone()).collect()
    }
}

fn lcm(a: u32, b: u32) -> u32 {
    use num_integer::Integer;
    a.lcm(&b)
}

/// X together with the cut-open space X̃, the gluing map and the per-cell
/// scalar subgroups and ι characters on X.
#[derive(Clone, Debug)]
pub struct BlowupResult {
    x: EquivariantComplex,
    x_tilde: EquivariantComplex,
    pi: Vec<Vec<usize>>,
    keys: Vec<Vec<Vec<i64>>>,
    scalar: Vec<Vec<Vec<usize>>>,
    iota: Vec<Vec<Vec<Cyclo>>>,
    gamma: Cocycle,
}

/// Per-cell annotations on X.
#[derive(Clone, Debug, PartialEq)]
pub struct CellSubgroups {
    pub stabilizer: Vec<usize>,
    pub scalar: Vec<usize>,
    pub iota: Vec<Cyclo>,
}

fn on_locus(t: &TorusComplex, k: usize, z: usize, fam: &HyperplaneFamily) -> bool {
    fam.contains_value(&fam.value(t.centroid(k, z)))
        && t.directions(k, z).iter().all(|d| dot_int(fam.normal(), d).is_zero())
}

fn component_key(loci: &[SlicedLocus], x: &[Q]) -> Option<Vec<i64>> {
    loci.iter().map(|l| l.family.interval_index(&l.family.value(x))).collect()
}

fn key_shift(loci: &[SlicedLocus], key: &[i64], lambda: &[i64]) -> Vec<i64> {
    loci.iter().zip(key).map(|(l, &k)| k - l.family.index_shift(lambda)).collect()
}

/// Builds X̃ from a refined X whose arrangement contains every sliced family.
/// The spec is completed under the group first.
pub fn build_blowup(x: &TorusComplex, spec: &SlicedLocusSpec, gamma: &Cocycle) -> Result<BlowupResult> {
    let g = x.complex().group().clone();
    let n = x.dim();
    if let Some((k, z, w)) = x.pointwise_violation() {
        return Err(violated!("element {w} stabilizes {} without fixing it pointwise", x.complex().label(k, z)));
    }
    let spec = spec.completed(&g, gamma)?;
    for l in &spec.loci {
        if !x.arrangement().contains(&l.family) {
            return Err(invalid!("sliced locus of element {} is not a subcomplex of X", l.reflection));
        }
        let m = &g.maps()[l.reflection];
        let p: Vec<Q> = l.family.normal().iter().map(|&v| q(v)).collect();
        let norm = dot(&p, &p);
        let dirs = crate::rational::nullspace(&[p.clone()], n);
        for o in l.family.offsets() {
            let x0: Vec<Q> = p.iter().map(|c| c * o / &norm).collect();
            let y = m.apply(&x0);
            let moved = y.iter().zip(&x0).any(|(a, b)| !(a - b).is_integer());
            if moved || dirs.iter().any(|d| m.apply_linear(d) != *d) {
                return Err(violated!("sliced locus of element {} is not fixed by it", l.reflection));
            }
        }
    }
    let loci = &spec.loci;
    let xc = x.complex();

    let mut scalar = Vec::new();
    let mut iota = Vec::new();
    for k in 0..=n {
        let mut sk = Vec::new();
        let mut ik = Vec::new();
        for z in 0..xc.count(k) {
            let mut gens: Vec<(usize, u32)> = Vec::new();
            for l in loci {
                if on_locus(x, k, z, &l.family) {
                    let off = crate::rational::frac(&l.family.value(x.centroid(k, z)));
                    let pos = l.family.offsets().iter().position(|o| *o == off).unwrap();
                    gens.push((l.reflection, l.iota[pos]));
                }
            }
            let sub = g.generated(&gens.iter().map(|x| x.0).collect::<Vec<_>>());
            let vals = extend_iota(&g, gamma, &sub, &gens, spec.modulus).ok_or_else(|| {
                violated!("ι does not extend to a character of the scalar subgroup at {}", xc.label(k, z))
            })?;
            if !sub.iter().all(|w| xc.stabilizer(k, z).binary_search(w).is_ok()) {
                return Err(invalid!("scalar subgroup at {} is not contained in the stabilizer", xc.label(k, z)));
            }
            sk.push(sub);
            ik.push(vals);
        }
        scalar.push(sk);
        iota.push(ik);
    }

    // cells of X̃: (cell of X, component key), keys relative to the representative
    let mut cells: Vec<Vec<(usize, Vec<i64>)>> = Vec::new();
    let mut chamber_of: Vec<Vec<usize>> = Vec::new();
    let mut index: Vec<BTreeMap<(usize, Vec<i64>), usize>> = Vec::new();
    for k in 0..=n {
        let mut list = Vec::new();
        let mut ch = Vec::new();
        let mut idx = BTreeMap::new();
        for z in 0..xc.count(k) {
            let fi = x.cells[k][z];
            let mut found: BTreeMap<Vec<i64>, usize> = BTreeMap::new();
            for h in x.chambers_around(fi) {
                let key = component_key(loci, &x.window.faces[h].centroid)
                    .ok_or_else(|| violated!("a chamber meets the sliced locus"))?;
                found.entry(key).or_insert(h);
            }
            for (key, h) in found {
                idx.insert((z, key.clone()), list.len());
                list.push((z, key));
                ch.push(h);
            }
        }
        cells.push(list);
        chamber_of.push(ch);
        index.push(idx);
    }
    let counts: Vec<usize> = cells.iter().map(Vec::len).collect();
    let mut incidence = Vec::new();
    let mut facets = vec![vec![Vec::new(); counts[0]]];
    for k in 0..n {
        let mut mat = IntMatrix::zeros(counts[k], counts[k + 1]);
        let mut fk = Vec::new();
        for (zt, (z, key)) in cells[k + 1].iter().enumerate() {
            let fi = x.cells[k + 1][*z];
            let mut ys = BTreeSet::new();
            for &(gf, s) in &x.window.faces[fi].facets {
                let (y, lambda) = &x.placement[gf];
                let k2 = key_shift(loci, key, lambda);
                let yt = *index[k]
                    .get(&(*y, k2))
                    .ok_or_else(|| violated!("face of a cut cell has no matching component"))?;
                mat[(yt, zt)] += BigInt::from(s);
                ys.insert(yt);
            }
            fk.push(ys.into_iter().collect());
        }
        incidence.push(mat);
        facets.push(fk);
    }
    let mut action = Vec::new();
    for k in 0..=n {
        let mut table = Vec::with_capacity(g.order() * counts[k]);
        for w in g.elements() {
            let m = &g.maps()[w];
            for (zt, (z, _)) in cells[k].iter().enumerate() {
                let (z2, s) = xc.act(w, k, *z);
                let fi = x.cells[k][*z];
                let (_, lambda) = x
                    .locate(&m.apply(&x.window.faces[fi].centroid))
                    .ok_or_else(|| violated!("image of a cell is not a cell"))?;
                let qpt = m.apply(&x.window.faces[chamber_of[k][zt]].centroid);
                let key = component_key(loci, &qpt).ok_or_else(|| violated!("the sliced locus is not invariant"))?;
                let key = key_shift(loci, &key, &lambda);
                let zt2 = *index[k]
                    .get(&(z2, key))
                    .ok_or_else(|| violated!("image of a cut cell has no matching component"))?;
                table.push((zt2, s));
            }
        }
        action.push(table);
    }
    let labels: Vec<Vec<String>> = cells
        .iter()
        .enumerate()
        .map(|(k, list)| {
            list.iter()
                .map(|(z, key)| {
                    if key.is_empty() {
                        xc.label(k, *z).into()
                    } else {
                        alloc::format!("{}{:?}", xc.label(k, *z), key)
                    }
                })
                .collect()
        })
        .collect();
    let x_tilde = EquivariantComplex::new(g.clone(), counts, incidence, Some(facets), action, Some(labels))?;
    let pi = cells.iter().map(|l| l.iter().map(|(z, _)| *z).collect()).collect();
    let keys = cells.iter().map(|l| l.iter().map(|(_, k)| k.clone()).collect()).collect();
    Ok(BlowupResult { x: xc.clone(), x_tilde, pi, keys, scalar, iota, gamma: gamma.clone() })
}

/// ι on the subgroup generated by `gens`, from ι(u r) = ι(u) ι(r) γ(u, r).
fn extend_iota(g: &Group, gamma: &Cocycle, sub: &[usize], gens: &[(usize, u32)], modulus: u32) -> Option<Vec<Cyclo>> {
    let mut val: BTreeMap<usize, Cyclo> = BTreeMap::new();
    val.insert(0, Cyclo::int(1, 1));
    let mut queue = vec![0usize];
    let mut head = 0;
    while head < queue.len() {
        let u = queue[head];
        head += 1;
        for &(r, e) in gens {
            let next = g.mul(u, r);
            let v = val[&u].mul(&Cyclo::root(modulus as usize, e as i64)).mul(&gamma.value(u, r));
            match val.get(&next) {
                Some(old) if *old != v => return None,
                Some(_) => {}
                None => {
                    val.insert(next, v);
                    queue.push(next);
                }
            }
        }
    }
    Some(sub.iter().map(|w| val[w].clone()).collect())
}

impl BlowupResult {
    pub fn x(&self) -> &EquivariantComplex {
        &self.x
    }

    pub fn x_tilde(&self) -> &EquivariantComplex {
        &self.x_tilde
    }

    pub fn gamma(&self) -> &Cocycle {
        &self.gamma
    }

    /// Π on k-cells of X̃.
    pub fn pi(&self, k: usize, zt: usize) -> usize {
        self.pi[k][zt]
    }

    pub fn component_key(&self, k: usize, zt: usize) -> &[i64] {
        &self.keys[k][zt]
    }

    pub fn fiber(&self, k: usize, z: usize) -> Vec<usize> {
        (0..self.pi[k].len()).filter(|&zt| self.pi[k][zt] == z).collect()
    }

    /// Subgroup generated by the reflections whose locus contains the X-cell.
    pub fn scalar_subgroup(&self, k: usize, z: usize) -> &[usize] {
        &self.scalar[k][z]
    }

    /// Scalar subgroups and ι of all X-cells, for the lying-over system.
    pub fn scalar_data(&self) -> crate::bredon::ScalarData<'_> {
        crate::bredon::ScalarData { scalar: &self.scalar, iota: &self.iota }
    }

    /// ι on the scalar subgroup, aligned with [`Self::scalar_subgroup`].
    pub fn iota(&self, k: usize, z: usize) -> &[Cyclo] {
        &self.iota[k][z]
    }
}

/// Stabilizer, scalar subgroup and ι for every cell of X.
pub fn cell_subgroups(result: &BlowupResult) -> Vec<Vec<CellSubgroups>> {
    (0..=result.x.dim())
        .map(|k| {
            (0..result.x.count(k))
                .map(|z| CellSubgroups {
                    stabilizer: result.x.stabilizer(k, z).to_vec(),
                    scalar: result.scalar[k][z].clone(),
                    iota: result.iota[k][z].clone(),
                })
                .collect()
        })
        .collect()
}

/// Outcome of one structural check; `Err` names the offending cell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub outcome: core::result::Result<(), String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlowupReport {
    pub checks: Vec<Check>,
}

impl BlowupReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.outcome.is_ok())
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| c.outcome.is_err())
    }
}

type Outcome = core::result::Result<(), String>;

/// Structural checks relating X̃, Π and the annotations on X.
pub fn validate_blowup(r: &BlowupResult) -> BlowupReport {
    let checks = vec![
        Check { name: "gluing map is equivariant", outcome: check_equivariant(r) },
        Check { name: "fibers have the size of the scalar subgroup", outcome: check_fibers(r) },
        Check { name: "scalar subgroup acts simply transitively on fibers", outcome: check_transitive(r) },
        Check { name: "stabilizer splits as scalar subgroup ⋊ lifted stabilizer", outcome: check_splitting(r) },
        Check { name: "gluing map is a bijection on orbits", outcome: check_orbits(r) },
        Check { name: "annotations agree along faces", outcome: check_faces(r) },
        Check { name: "ι is a stable character of the scalar subgroup", outcome: check_iota(r) },
    ];
    BlowupReport { checks }
}

fn check_equivariant(r: &BlowupResult) -> Outcome {
    let g = r.x.group();
    for k in 0..=r.x.dim() {
        for zt in 0..r.x_tilde.count(k) {
            for w in g.elements() {
                let a = r.pi[k][r.x_tilde.act(w, k, zt).0];
                let b = r.x.act(w, k, r.pi[k][zt]).0;
                if a != b {
                    return Err(alloc::format!("Π(w·z̃) ≠ w·Π(z̃) at {} for element {w}", r.x_tilde.label(k, zt)));
                }
            }
        }
    }
    Ok(())
}

fn check_fibers(r: &BlowupResult) -> Outcome {
    for k in 0..=r.x.dim() {
        for z in 0..r.x.count(k) {
            if r.fiber(k, z).len() != r.scalar[k][z].len() {
                return Err(alloc::format!(
                    "fiber over {} has {} cells, scalar subgroup has order {}",
                    r.x.label(k, z),
                    r.fiber(k, z).len(),
                    r.scalar[k][z].len()
                ));
            }
        }
    }
    Ok(())
}

fn check_transitive(r: &BlowupResult) -> Outcome {
    for k in 0..=r.x.dim() {
        for z in 0..r.x.count(k) {
            let fiber = r.fiber(k, z);
            let Some(&z0) = fiber.first() else {
                return Err(alloc::format!("empty fiber over {}", r.x.label(k, z)));
            };
            let images: BTreeSet<usize> = r.scalar[k][z].iter().map(|&w| r.x_tilde.act(w, k, z0).0).collect();
            if images.len() != r.scalar[k][z].len() || images.into_iter().collect::<Vec<_>>() != fiber {
                return Err(alloc::format!("scalar subgroup is not simply transitive over {}", r.x.label(k, z)));
            }
        }
    }
    Ok(())
}

fn check_splitting(r: &BlowupResult) -> Outcome {
    let g = r.x.group();
    for k in 0..=r.x.dim() {
        for zt in 0..r.x_tilde.count(k) {
            let z = r.pi[k][zt];
            let wz = r.x.stabilizer(k, z);
            let sc = &r.scalar[k][z];
            let lifted = r.x_tilde.stabilizer(k, zt);
            let label = r.x_tilde.label(k, zt);
            if !g.is_normal_in(sc, wz) {
                return Err(alloc::format!("scalar subgroup is not normal in the stabilizer at {label}"));
            }
            if !lifted.iter().all(|w| wz.binary_search(w).is_ok()) {
                return Err(alloc::format!("lifted stabilizer not inside the stabilizer at {label}"));
            }
            if lifted.iter().any(|w| *w != 0 && sc.binary_search(w).is_ok()) {
                return Err(alloc::format!("scalar subgroup meets the lifted stabilizer at {label}"));
            }
            if sc.len() * lifted.len() != wz.len() {
                return Err(alloc::format!("|W'||W̃| ≠ |W| at {label}"));
            }
        }
    }
    Ok(())
}

fn check_orbits(r: &BlowupResult) -> Outcome {
    for k in 0..=r.x.dim() {
        let orbits = r.x_tilde.orbits(k);
        let base = r.x.orbits(k);
        let images: BTreeSet<usize> =
            orbits.iter().map(|o| base.iter().position(|p| p.contains(&r.pi[k][o[0]])).unwrap()).collect();
        if images.len() != orbits.len() || orbits.len() != base.len() {
            return Err(alloc::format!("{} orbits of {k}-cells in X̃ against {} in X", orbits.len(), base.len()));
        }
    }
    Ok(())
}

fn check_faces(r: &BlowupResult) -> Outcome {
    for k in 1..=r.x.dim() {
        for z in 0..r.x.count(k) {
            for &y in r.x.facets(k, z) {
                let expect: Vec<usize> = r
                    .x
                    .stabilizer(k, z)
                    .iter()
                    .copied()
                    .filter(|w| r.scalar[k - 1][y].binary_search(w).is_ok())
                    .collect();
                if expect != r.scalar[k][z] {
                    return Err(alloc::format!(
                        "W'_z ≠ W_z ∩ W'_y for z = {}, y = {}",
                        r.x.label(k, z),
                        r.x.label(k - 1, y)
                    ));
                }
                for (w, v) in r.scalar[k][z].iter().zip(&r.iota[k][z]) {
                    let pos = r.scalar[k - 1][y].binary_search(w).unwrap();
                    if r.iota[k - 1][y][pos] != *v {
                        return Err(alloc::format!("ι differs between {} and its face {}", r.x.label(k, z), r.x.label(k - 1, y)));
                    }
                }
            }
        }
    }
    Ok(())
}

fn check_iota(r: &BlowupResult) -> Outcome {
    let g = r.x.group();
    let gamma = &r.gamma;
    for k in 0..=r.x.dim() {
        for z in 0..r.x.count(k) {
            let sc = &r.scalar[k][z];
            let at = |w: usize| &r.iota[k][z][sc.binary_search(&w).unwrap()];
            for &u in sc {
                for &v in sc {
                    if at(u).mul(at(v)) != gamma.value(u, v).conj().mul(at(g.mul(u, v))) {
                        return Err(alloc::format!("ι is not a conj(γ)-character at {}", r.x.label(k, z)));
                    }
                }
            }
            for &w in r.x.stabilizer(k, z) {
                let wi = g.inv(w);
                for &v in sc {
                    let rhs = at(v)
                        .mul(&gamma.value(g.mul(w, v), wi))
                        .mul(&gamma.value(w, v))
                        .mul(&gamma.value(w, wi).conj());
                    if *at(g.conj(w, v)) != rhs {
                        return Err(alloc::format!("ι is not stable under element {w} at {}", r.x.label(k, z)));
                    }
                }
            }
        }
    }
    Ok(())
}
