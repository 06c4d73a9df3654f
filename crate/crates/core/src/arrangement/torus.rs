use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::complex::EquivariantComplex;
use super::family::{Arrangement, HyperplaneFamily};
use crate::error::{violated, Error, Result};
use crate::exactla::IntMatrix;
use crate::groups::{AffineTorusMap, Group};
use crate::rational::{det_sign, dot, fmt_q, inverse, nullspace, primitive, q, rref, Q};

/// Largest dimension the geometric builder supports.
pub const MAX_GEOMETRIC_DIM: usize = 3;

const WINDOW_LO: i64 = -1;
const WINDOW_HI: i64 = 2;
const MAX_REFINE_ROUNDS: usize = 8;

#[derive(Clone)]
struct Hyper {
    normal: Vec<Q>,
    value: Q,
}

/// A face of the arrangement in the cover, inside the window [-1, 2]^n.
#[derive(Clone, Debug)]
pub(crate) struct Face {
    pub dim: usize,
    pub cov: Vec<i8>,
    /// Window indices of the vertices in the closure.
    pub verts: Vec<usize>,
    pub centroid: Vec<Q>,
    /// Columns whose entries give coordinates on the direction space.
    free: Vec<usize>,
    frame: Vec<Vec<Q>>,
    /// Codimension-one faces with incidence signs.
    pub facets: Vec<(usize, i8)>,
}

impl Face {
    fn coords(&self, v: &[Q]) -> Vec<Q> {
        self.free.iter().map(|&c| v[c].clone()).collect()
    }
}

#[derive(Clone)]
pub(crate) struct Window {
    pub faces: Vec<Face>,
    pub by_dim: Vec<Vec<usize>>,
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

fn sign(x: &Q) -> i8 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

fn rank(rows: &[Vec<Q>]) -> usize {
    rref(rows).1.len()
}

fn conformal(small: &[i8], big: &[i8]) -> bool {
    small.iter().zip(big).all(|(&s, &b)| s == 0 || s == b)
}

impl Window {
    fn build(arr: &Arrangement) -> Window {
        let n = arr.dim();
        let fams = arr.families();
        let mut hypers = Vec::new();
        let mut per_family: Vec<Vec<usize>> = Vec::new();
        let mut box_lo = vec![0; n];
        let mut box_hi = vec![0; n];
        for f in fams {
            let p = f.normal();
            let mn: i64 = p.iter().map(|&x| (x * WINDOW_LO).min(x * WINDOW_HI)).sum();
            let mx: i64 = p.iter().map(|&x| (x * WINDOW_LO).max(x * WINDOW_HI)).sum();
            let unit = p.iter().filter(|&&x| x != 0).count() == 1 && p.iter().any(|&x| x == 1);
            let mut ids = Vec::new();
            for k in mn..=mx {
                for o in f.offsets() {
                    let v = o + q(k);
                    if v > q(mx) {
                        continue;
                    }
                    if unit {
                        let i = p.iter().position(|&x| x == 1).unwrap();
                        if v == q(WINDOW_LO) {
                            box_lo[i] = hypers.len();
                        }
                        if v == q(WINDOW_HI) {
                            box_hi[i] = hypers.len();
                        }
                    }
                    ids.push(hypers.len());
                    hypers.push(Hyper { normal: p.iter().map(|&x| q(x)).collect(), value: v });
                }
            }
            per_family.push(ids);
        }
        let covector = |x: &[Q]| -> Vec<i8> { hypers.iter().map(|h| sign(&(dot(&h.normal, x) - &h.value))).collect() };
        let inside = |x: &[Q]| x.iter().all(|c| *c >= q(WINDOW_LO) && *c <= q(WINDOW_HI));

        let mut points = BTreeSet::new();
        for combo in combinations(fams.len(), n) {
            let rows: Vec<Vec<Q>> = combo.iter().map(|&f| hypers[per_family[f][0]].normal.clone()).collect();
            let Some(inv) = inverse(&rows) else { continue };
            let mut idx = vec![0usize; n];
            'values: loop {
                let rhs: Vec<Q> = (0..n).map(|i| hypers[per_family[combo[i]][idx[i]]].value.clone()).collect();
                let x: Vec<Q> = inv.iter().map(|r| dot(r, &rhs)).collect();
                if inside(&x) {
                    points.insert(x);
                }
                for i in 0..n {
                    idx[i] += 1;
                    if idx[i] < per_family[combo[i]].len() {
                        continue 'values;
                    }
                    idx[i] = 0;
                }
                break;
            }
        }

        let mut faces: Vec<Face> = Vec::new();
        let mut index: BTreeMap<Vec<i8>, usize> = BTreeMap::new();
        let mut by_dim = vec![Vec::new(); n + 1];
        for x in points {
            let cov = covector(&x);
            let id = faces.len();
            index.insert(cov.clone(), id);
            by_dim[0].push(id);
            faces.push(Face {
                dim: 0,
                cov,
                verts: vec![id],
                centroid: x,
                free: Vec::new(),
                frame: Vec::new(),
                facets: Vec::new(),
            });
        }
        for k in 0..n {
            for gi in by_dim[k].clone() {
                let zero: Vec<usize> = (0..hypers.len()).filter(|&h| faces[gi].cov[h] == 0).collect();
                let normals = |set: &[usize]| -> Vec<Vec<Q>> { set.iter().map(|&h| hypers[h].normal.clone()).collect() };
                let target = n - k - 1;
                let mut flats = BTreeSet::new();
                for sub in combinations(zero.len(), target) {
                    let s: Vec<usize> = sub.iter().map(|&i| zero[i]).collect();
                    if rank(&normals(&s)) != target {
                        continue;
                    }
                    let closure: Vec<usize> = zero
                        .iter()
                        .copied()
                        .filter(|h| {
                            let mut t = s.clone();
                            t.push(*h);
                            rank(&normals(&t)) == target
                        })
                        .collect();
                    flats.insert(closure);
                }
                for flat in flats {
                    let dirs = nullspace(&normals(&flat), n);
                    let off: Vec<usize> = zero.iter().copied().filter(|h| !flat.contains(h)).collect();
                    let d = dirs
                        .iter()
                        .find(|d| off.iter().any(|&h| !dot(&hypers[h].normal, d).is_zero()))
                        .expect("a larger flat leaves the smaller one");
                    for s in [1i8, -1] {
                        let mut cov = faces[gi].cov.clone();
                        for &h in &off {
                            cov[h] = s * sign(&dot(&hypers[h].normal, d));
                        }
                        if (0..n).any(|i| cov[box_lo[i]] < 0 || cov[box_hi[i]] > 0) {
                            continue;
                        }
                        let fi = *index.entry(cov.clone()).or_insert_with(|| {
                            by_dim[k + 1].push(faces.len());
                            faces.push(Face {
                                dim: k + 1,
                                cov,
                                verts: Vec::new(),
                                centroid: Vec::new(),
                                free: Vec::new(),
                                frame: Vec::new(),
                                facets: Vec::new(),
                            });
                            faces.len() - 1
                        });
                        if !faces[fi].facets.iter().any(|&(x, _)| x == gi) {
                            faces[fi].facets.push((gi, 0));
                        }
                    }
                }
            }
        }
        for k in 1..=n {
            for &fi in &by_dim[k] {
                let mut vs = BTreeSet::new();
                for &(g, _) in &faces[fi].facets {
                    vs.extend(faces[g].verts.iter().copied());
                }
                let verts: Vec<usize> = vs.into_iter().collect();
                let mut c = vec![Q::zero(); n];
                for &v in &verts {
                    for (ci, x) in c.iter_mut().zip(&faces[v].centroid) {
                        *ci += x;
                    }
                }
                let cnt = Q::from_integer(BigInt::from(verts.len()));
                for ci in c.iter_mut() {
                    *ci /= &cnt;
                }
                let face = &mut faces[fi];
                face.verts = verts;
                face.centroid = c;
            }
        }
        for face in faces.iter_mut() {
            let zero: Vec<Vec<Q>> =
                (0..hypers.len()).filter(|&h| face.cov[h] == 0).map(|h| hypers[h].normal.clone()).collect();
            let piv = rref(&zero).1;
            face.free = (0..n).filter(|c| !piv.contains(c)).collect();
            face.frame = nullspace(&zero, n);
            debug_assert_eq!(face.frame.len(), face.dim);
        }
        for k in 1..=n {
            for &fi in &by_dim[k] {
                let facets = faces[fi].facets.clone();
                let signed = facets
                    .iter()
                    .map(|&(g, _)| {
                        let u: Vec<Q> = faces[g].centroid.iter().zip(&faces[fi].centroid).map(|(a, b)| a - b).collect();
                        let mut m = vec![faces[fi].coords(&u)];
                        for d in &faces[g].frame {
                            m.push(faces[fi].coords(d));
                        }
                        (g, det_sign(&m) as i8)
                    })
                    .collect();
                faces[fi].facets = signed;
            }
        }
        Window { faces, by_dim }
    }

    fn contains_conformally(&self, small: usize, big: usize) -> bool {
        conformal(&self.faces[small].cov, &self.faces[big].cov)
    }
}

fn floor_vec(x: &[Q]) -> Vec<i64> {
    x.iter().map(|c| i64::try_from(c.floor().to_integer()).expect("coordinate overflow")).collect()
}

fn shifted(x: &[Q], lambda: &[i64]) -> Vec<Q> {
    x.iter().zip(lambda).map(|(c, &l)| c - q(l)).collect()
}

fn point_label(x: &[Q]) -> String {
    let parts: Vec<String> = x.iter().map(fmt_q).collect();
    alloc::format!("({})", parts.join(", "))
}

/// Cell decomposition of R^n / Z^n induced by a periodic arrangement, with
/// the window geometry kept for lifting and blowing up.
#[derive(Clone)]
pub struct TorusComplex {
    arrangement: Arrangement,
    pub(crate) window: Window,
    /// Window face representing each cell (centroid in [0,1)^n).
    pub(crate) cells: Vec<Vec<usize>>,
    /// For each window face: its cell and the lattice translation from the
    /// representative.
    pub(crate) placement: Vec<(usize, Vec<i64>)>,
    lookup: BTreeMap<Vec<Q>, usize>,
    complex: EquivariantComplex,
}

impl TorusComplex {
    /// Complex of the arrangement together with the coordinate grid, with the
    /// trivial group acting.
    pub fn build(arrangement: &Arrangement) -> Result<Self> {
        let n = arrangement.dim();
        if n == 0 || n > MAX_GEOMETRIC_DIM {
            return Err(Error::Dimension(n));
        }
        let arrangement = arrangement.clone().with_grid();
        let window = Window::build(&arrangement);
        let mut reps: Vec<BTreeMap<Vec<Q>, usize>> = vec![BTreeMap::new(); n + 1];
        for (fi, f) in window.faces.iter().enumerate() {
            if f.centroid.iter().all(|c| !c.is_negative() && *c < q(1)) {
                reps[f.dim].insert(f.centroid.clone(), fi);
            }
        }
        let cells: Vec<Vec<usize>> = reps.iter().map(|m| m.values().copied().collect()).collect();
        let mut lookup = BTreeMap::new();
        for dim_cells in &cells {
            for (z, &fi) in dim_cells.iter().enumerate() {
                lookup.insert(window.faces[fi].centroid.clone(), z);
            }
        }
        let mut placement = Vec::with_capacity(window.faces.len());
        for f in &window.faces {
            let lambda = floor_vec(&f.centroid);
            let z = *lookup
                .get(&shifted(&f.centroid, &lambda))
                .ok_or_else(|| violated!("window face at {} has no representative cell", point_label(&f.centroid)))?;
            placement.push((z, lambda));
        }
        let counts: Vec<usize> = cells.iter().map(Vec::len).collect();
        let mut incidence = Vec::new();
        let mut facets = vec![vec![Vec::new(); counts[0]]];
        for k in 0..n {
            let mut m = IntMatrix::zeros(counts[k], counts[k + 1]);
            let mut fk = Vec::new();
            for (z, &fi) in cells[k + 1].iter().enumerate() {
                let mut ys = BTreeSet::new();
                for &(g, s) in &window.faces[fi].facets {
                    let y = placement[g].0;
                    m[(y, z)] += BigInt::from(s);
                    ys.insert(y);
                }
                fk.push(ys.into_iter().collect());
            }
            incidence.push(m);
            facets.push(fk);
        }
        let labels =
            cells.iter().map(|cs| cs.iter().map(|&fi| point_label(&window.faces[fi].centroid)).collect()).collect();
        let action = counts.iter().map(|&c| (0..c).map(|z| (z, 1)).collect()).collect();
        let complex = EquivariantComplex::new(Group::trivial(), counts, incidence, Some(facets), action, Some(labels))?;
        if complex.euler_characteristic() != 0 {
            return Err(violated!("torus complex has Euler characteristic {}", complex.euler_characteristic()));
        }
        Ok(TorusComplex { arrangement, window, cells, placement, lookup, complex })
    }

    /// Records the permutation of cells by every element, with orientation
    /// signs; fails if some element does not preserve the arrangement.
    pub fn install_action(&self, g: &Group) -> Result<Self> {
        let n = self.arrangement.dim();
        if g.maps().len() != g.order() {
            return Err(crate::error::invalid!("group elements carry no torus maps"));
        }
        for (i, m) in g.maps().iter().enumerate() {
            if m.dim() != n {
                return Err(crate::error::invalid!("element {i} acts in dimension {}, expected {n}", m.dim()));
            }
            if !self.arrangement.is_invariant_under(m) {
                return Err(Error::NotCellular(alloc::format!("element {i} does not preserve the arrangement")));
            }
        }
        let counts = self.complex.counts().to_vec();
        let mut action = Vec::new();
        for k in 0..=n {
            let mut table = Vec::with_capacity(g.order() * counts[k]);
            for m in g.maps() {
                for &fi in &self.cells[k] {
                    table.push(self.image(m, fi)?);
                }
            }
            action.push(table);
        }
        let facets = (0..=n)
            .map(|k| (0..counts[k]).map(|z| self.complex.facets(k, z).to_vec()).collect())
            .collect();
        let labels = (0..=n).map(|k| (0..counts[k]).map(|z| self.complex.label(k, z).into()).collect()).collect();
        let incidence = (0..n).map(|k| self.complex.incidence(k).clone()).collect();
        let complex = EquivariantComplex::new(g.clone(), counts, incidence, Some(facets), action, Some(labels))?;
        Ok(TorusComplex { complex, ..self.clone() })
    }

    /// Cell and orientation sign of the image of a window face.
    fn image(&self, m: &AffineTorusMap, fi: usize) -> Result<(usize, i8)> {
        let f = &self.window.faces[fi];
        let c = m.apply(&f.centroid);
        let lambda = floor_vec(&c);
        let key = shifted(&c, &lambda);
        let z = *self
            .lookup
            .get(&key)
            .ok_or_else(|| Error::NotCellular(alloc::format!("image of {} is not a cell", point_label(&f.centroid))))?;
        let target = &self.window.faces[self.cells[f.dim].get(z).copied().ok_or_else(|| {
            Error::NotCellular(alloc::format!("image of {} changes dimension", point_label(&f.centroid)))
        })?];
        if target.centroid != key {
            return Err(Error::NotCellular(alloc::format!("image of {} changes dimension", point_label(&f.centroid))));
        }
        let rows: Vec<Vec<Q>> = f.frame.iter().map(|d| target.coords(&m.apply_linear(d))).collect();
        let s = if rows.is_empty() { 1 } else { det_sign(&rows) as i8 };
        if s == 0 {
            return Err(violated!("degenerate image frame at {}", point_label(&f.centroid)));
        }
        Ok((z, s))
    }

    /// Translation λ with g(F) = F + λ when g stabilizes the cell of F, and
    /// whether g then fixes F pointwise.
    fn fixes_pointwise(&self, m: &AffineTorusMap, fi: usize) -> bool {
        let f = &self.window.faces[fi];
        let c = m.apply(&f.centroid);
        let lambda: Vec<Q> = c.iter().zip(&f.centroid).map(|(a, b)| a - b).collect();
        f.verts.iter().all(|&v| {
            let x = &self.window.faces[v].centroid;
            let y = m.apply(x);
            y.iter().zip(x).zip(&lambda).all(|((a, b), l)| a - l == *b)
        })
    }

    /// First cell whose stabilizer does not fix it pointwise.
    pub fn pointwise_violation(&self) -> Option<(usize, usize, usize)> {
        let g = self.complex.group();
        for (k, cs) in self.cells.iter().enumerate() {
            for (z, &fi) in cs.iter().enumerate() {
                for &w in &self.complex.stabilizer(k, z)[1..] {
                    if !self.fixes_pointwise(&g.maps()[w], fi) {
                        return Some((k, z, w));
                    }
                }
            }
        }
        None
    }

    /// Adds hyperplanes through fixed loci until every stabilizer fixes its
    /// cell pointwise. Cells that already satisfy this are left alone.
    pub fn equivariant_refine(&self) -> Result<Self> {
        let g = self.complex.group().clone();
        let n = self.arrangement.dim();
        let mut current = self.clone();
        for _ in 0..MAX_REFINE_ROUNDS {
            let mut extra: Vec<HyperplaneFamily> = Vec::new();
            for (k, cs) in current.cells.iter().enumerate() {
                for (z, &fi) in cs.iter().enumerate() {
                    let f = &current.window.faces[fi];
                    for &w in &current.complex.stabilizer(k, z)[1..] {
                        let m = &g.maps()[w];
                        if current.fixes_pointwise(m, fi) {
                            continue;
                        }
                        // rows of A − I are constant on the fixed set of the
                        // element composed with the translation back to F
                        for i in 0..n {
                            let row: Vec<Q> = (0..n).map(|j| q(m.a(i, j) - i64::from(i == j))).collect();
                            if f.frame.iter().all(|d| dot(&row, d).is_zero()) {
                                continue;
                            }
                            let p = primitive(&row).expect("nonzero row");
                            let pq: Vec<Q> = p.iter().map(|&x| q(x)).collect();
                            let fam = HyperplaneFamily::new(&pq, &[dot(&pq, &f.centroid)])?;
                            extra.push(fam);
                        }
                    }
                }
            }
            if extra.is_empty() {
                return Ok(current);
            }
            let mut arr = current.arrangement.clone();
            for f in &extra {
                arr.add(f);
            }
            let arr = arr.closed_under(&g);
            current = TorusComplex::build(&arr)?.install_action(&g)?;
        }
        Err(violated!("equivariant refinement did not terminate"))
    }

    pub fn complex(&self) -> &EquivariantComplex {
        &self.complex
    }

    pub fn arrangement(&self) -> &Arrangement {
        &self.arrangement
    }

    pub fn dim(&self) -> usize {
        self.arrangement.dim()
    }

    /// Sample point of a cell in [0,1)^n, lattice coordinates.
    pub fn centroid(&self, k: usize, z: usize) -> &[Q] {
        &self.window.faces[self.cells[k][z]].centroid
    }

    /// Vertices of the closure of a cell, in the cover.
    pub fn closure_vertices(&self, k: usize, z: usize) -> Vec<Vec<Q>> {
        self.window.faces[self.cells[k][z]].verts.iter().map(|&v| self.window.faces[v].centroid.clone()).collect()
    }

    /// Direction vectors spanning the affine hull of a cell.
    pub fn directions(&self, k: usize, z: usize) -> &[Vec<Q>] {
        &self.window.faces[self.cells[k][z]].frame
    }

    /// Window chambers whose closure contains the given window face.
    pub(crate) fn chambers_around(&self, fi: usize) -> Vec<usize> {
        let n = self.dim();
        self.window.by_dim[n].iter().copied().filter(|&h| self.window.contains_conformally(fi, h)).collect()
    }

    /// Cell and translation of a point-set image, located by its centroid.
    pub(crate) fn locate(&self, x: &[Q]) -> Option<(usize, Vec<i64>)> {
        let lambda = floor_vec(x);
        self.lookup.get(&shifted(x, &lambda)).map(|&z| (z, lambda))
    }
}

/// Cell structure induced by an arrangement (plus the coordinate grid).
pub fn build_torus_complex(arrangement: &Arrangement) -> Result<TorusComplex> {
    TorusComplex::build(arrangement)
}

pub fn install_action(complex: &TorusComplex, g: &Group) -> Result<TorusComplex> {
    complex.install_action(g)
}

pub fn equivariant_refine(complex: &TorusComplex) -> Result<TorusComplex> {
    complex.equivariant_refine()
}
