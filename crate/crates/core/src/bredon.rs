//! Coefficient systems on equivariant complexes and their invariant cochain
//! complexes.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::arrangement::EquivariantComplex;
use crate::cyclo::Cyclo;
use crate::error::{violated, Result};
use crate::exactla::{complex_cohomology, kernel_lattice, left_inverse, AbelianGroupInv, IntMatrix};
use crate::groups::{character_table, conjugation_matrix, lying_over_basis, restriction_matrix, CharTable, Cocycle};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SystemKind {
    /// Z on every cell, acted on by orientation signs.
    Constant,
    /// Twisted representation ring of the stabilizer.
    TwistedRep,
    /// Twisted representations of the stabilizer lying over conj(ι) on the
    /// scalar subgroup.
    LyingOver,
}

/// Per-cell data needed by the lying-over system.
#[derive(Clone, Copy)]
pub struct ScalarData<'a> {
    /// Scalar subgroup of each cell, indexed [k][z].
    pub scalar: &'a [Vec<Vec<usize>>],
    /// ι on it, aligned with `scalar`.
    pub iota: &'a [Vec<Vec<Cyclo>>],
}

/// Materialized coefficient system: per-cell bases of irreducibles and the
/// restriction and conjugation matrices between them.
#[derive(Clone, Debug)]
pub struct CoefficientSystem {
    kind: SystemKind,
    tables: Vec<CharTable>,
    table_of: Vec<Vec<usize>>,
    basis: Vec<Vec<Vec<usize>>>,
    /// (k, y, z) with y a (k-1)-cell and z a k-cell
    restriction: BTreeMap<(usize, usize, usize), IntMatrix>,
    /// conjugation[k][g][z]: F_z → F_{gz}
    conjugation: Vec<Vec<Vec<IntMatrix>>>,
}

impl CoefficientSystem {
    pub fn kind(&self) -> SystemKind {
        self.kind
    }

    pub fn rank(&self, k: usize, z: usize) -> usize {
        self.basis[k][z].len()
    }

    /// Irreducible indices (in the stabilizer's table) spanning F_z.
    pub fn basis(&self, k: usize, z: usize) -> &[usize] {
        &self.basis[k][z]
    }

    pub fn table(&self, k: usize, z: usize) -> Option<&CharTable> {
        match self.kind {
            SystemKind::Constant => None,
            _ => Some(&self.tables[self.table_of[k][z]]),
        }
    }

    /// F_y → F_z for a face y of the k-cell z.
    pub fn restriction(&self, k: usize, y: usize, z: usize) -> &IntMatrix {
        &self.restriction[&(k, y, z)]
    }

    pub fn conjugation(&self, k: usize, g: usize, z: usize) -> &IntMatrix {
        &self.conjugation[k][g][z]
    }
}

fn restricted(full: &IntMatrix, rows: &[usize], cols: &[usize], what: &str) -> Result<IntMatrix> {
    for &c in cols {
        for r in 0..full.rows() {
            if !full[(r, c)].is_zero() && !rows.contains(&r) {
                return Err(violated!("{what} leaves the lying-over subsystem"));
            }
        }
    }
    Ok(full.select_rows(rows).select_columns(cols))
}

/// Builds the system and verifies the functoriality laws: restriction is
/// transitive along face chains, conjugation composes along the group and
/// is trivial on stabilizers, and the two commute.
pub fn build_system(
    kind: SystemKind,
    complex: &EquivariantComplex,
    gamma: &Cocycle,
    scalar: Option<&ScalarData<'_>>,
    order_cap: usize,
) -> Result<CoefficientSystem> {
    let g = complex.group();
    let dims = complex.dim() + 1;
    let mut tables: Vec<CharTable> = Vec::new();
    let mut by_group: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    let mut table_of = Vec::new();
    let mut basis = Vec::new();
    for k in 0..dims {
        let mut tk = Vec::new();
        let mut bk = Vec::new();
        for z in 0..complex.count(k) {
            if kind == SystemKind::Constant {
                tk.push(0);
                bk.push(vec![0]);
                continue;
            }
            let stab = complex.stabilizer(k, z).to_vec();
            let ti = match by_group.get(&stab) {
                Some(&i) => i,
                None => {
                    tables.push(character_table(g, &stab, gamma, order_cap)?);
                    by_group.insert(stab, tables.len() - 1);
                    tables.len() - 1
                }
            };
            tk.push(ti);
            bk.push(match kind {
                SystemKind::LyingOver => {
                    let data = scalar.ok_or_else(|| violated!("lying-over system needs scalar subgroups"))?;
                    lying_over_basis(g, gamma, &tables[ti], &data.scalar[k][z], &data.iota[k][z])?
                }
                _ => (0..tables[ti].len()).collect(),
            });
        }
        table_of.push(tk);
        basis.push(bk);
    }
    let one = || IntMatrix::identity(1);
    let res = |k: usize, y: usize, z: usize| -> Result<IntMatrix> {
        if kind == SystemKind::Constant {
            return Ok(one());
        }
        let full = restriction_matrix(&tables[table_of[k - 1][y]], &tables[table_of[k][z]])?;
        restricted(&full, &basis[k][z], &basis[k - 1][y], "restriction")
    };
    let conj = |k: usize, w: usize, z: usize| -> Result<IntMatrix> {
        if kind == SystemKind::Constant {
            return Ok(one());
        }
        let z2 = complex.act(w, k, z).0;
        let full = conjugation_matrix(g, gamma, w, &tables[table_of[k][z]], &tables[table_of[k][z2]])?;
        restricted(&full, &basis[k][z2], &basis[k][z], "conjugation")
    };
    let mut restriction = BTreeMap::new();
    for k in 1..dims {
        for z in 0..complex.count(k) {
            let mut faces: Vec<usize> = complex.facets(k, z).to_vec();
            faces.extend((0..complex.count(k - 1)).filter(|&y| !complex.incidence(k - 1)[(y, z)].is_zero()));
            faces.sort_unstable();
            faces.dedup();
            for y in faces {
                restriction.insert((k, y, z), res(k, y, z)?);
            }
        }
    }
    let mut conjugation = Vec::new();
    for k in 0..dims {
        let mut ck = Vec::new();
        for w in g.elements() {
            ck.push((0..complex.count(k)).map(|z| conj(k, w, z)).collect::<Result<Vec<_>>>()?);
        }
        conjugation.push(ck);
    }
    let sys = CoefficientSystem { kind, tables, table_of, basis, restriction, conjugation };

    for k in 0..dims {
        for z in 0..complex.count(k) {
            let n = sys.rank(k, z);
            for &w in complex.stabilizer(k, z) {
                if *sys.conjugation(k, w, z) != IntMatrix::identity(n) {
                    return Err(violated!("a stabilizer element acts nontrivially on F at {}", complex.label(k, z)));
                }
            }
            for a in g.elements() {
                for b in g.elements() {
                    let bz = complex.act(b, k, z).0;
                    let lhs = sys.conjugation(k, a, bz).mul(sys.conjugation(k, b, z));
                    if lhs != *sys.conjugation(k, g.mul(a, b), z) {
                        return Err(violated!("conjugation does not compose at {}", complex.label(k, z)));
                    }
                }
            }
        }
    }
    for (&(k, y, z), r) in &sys.restriction {
        for w in g.elements() {
            let (wz, _) = complex.act(w, k, z);
            let (wy, _) = complex.act(w, k - 1, y);
            let Some(r2) = sys.restriction.get(&(k, wy, wz)) else {
                return Err(violated!("image of a face is not a face at {}", complex.label(k, z)));
            };
            if sys.conjugation(k, w, z).mul(r) != r2.mul(sys.conjugation(k - 1, w, y)) {
                return Err(violated!("conjugation and restriction do not commute at {}", complex.label(k, z)));
            }
        }
        if k >= 2 {
            for x in complex.facets(k - 1, y) {
                if let Some(rxz) = two_step(&sys, complex, k, *x, z)? {
                    if r.mul(sys.restriction(k - 1, *x, y)) != rxz {
                        return Err(violated!("restriction is not transitive at {}", complex.label(k, z)));
                    }
                }
            }
        }
    }
    Ok(sys)
}

/// Direct restriction from a (k-2)-cell to a k-cell.
fn two_step(sys: &CoefficientSystem, complex: &EquivariantComplex, k: usize, x: usize, z: usize) -> Result<Option<IntMatrix>> {
    if sys.kind == SystemKind::Constant {
        return Ok(Some(IntMatrix::identity(1)));
    }
    let tz = &sys.tables[sys.table_of[k][z]];
    let tx = &sys.tables[sys.table_of[k - 2][x]];
    if !complex.stabilizer(k, z).iter().all(|w| tx.elements.binary_search(w).is_ok()) {
        return Ok(None);
    }
    let full = restriction_matrix(tx, tz)?;
    Ok(Some(restricted(&full, &sys.basis[k][z], &sys.basis[k - 2][x], "restriction")?))
}

/// Invariant sublattices and the differentials between them.
#[derive(Clone, Debug)]
pub struct InvariantComplex {
    /// Basis of the invariants inside ⊕ F_z, as columns.
    pub bases: Vec<IntMatrix>,
    /// Differential on invariants, degree k → k+1.
    pub differentials: Vec<IntMatrix>,
}

impl InvariantComplex {
    pub fn ranks(&self) -> Vec<usize> {
        self.bases.iter().map(IntMatrix::cols).collect()
    }
}

fn offsets(sys: &CoefficientSystem, complex: &EquivariantComplex, k: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(complex.count(k) + 1);
    let mut acc = 0;
    for z in 0..complex.count(k) {
        out.push(acc);
        acc += sys.rank(k, z);
    }
    out.push(acc);
    out
}

/// The cochain differential on ⊕ F_z: Σ [y:z] · restriction.
pub fn full_differential(complex: &EquivariantComplex, sys: &CoefficientSystem, k: usize) -> IntMatrix {
    let src = offsets(sys, complex, k);
    let dst = offsets(sys, complex, k + 1);
    let mut d = IntMatrix::zeros(dst[complex.count(k + 1)], src[complex.count(k)]);
    for z in 0..complex.count(k + 1) {
        for y in 0..complex.count(k) {
            let e = &complex.incidence(k)[(y, z)];
            if e.is_zero() {
                continue;
            }
            let r = sys.restriction(k + 1, y, z);
            for i in 0..r.rows() {
                for j in 0..r.cols() {
                    d[(dst[z] + i, src[y] + j)] += e * &r[(i, j)];
                }
            }
        }
    }
    d
}

/// Action of one element on ⊕ F_z in degree k.
pub fn full_action(complex: &EquivariantComplex, sys: &CoefficientSystem, k: usize, w: usize) -> IntMatrix {
    let off = offsets(sys, complex, k);
    let mut a = IntMatrix::zeros(off[complex.count(k)], off[complex.count(k)]);
    for z in 0..complex.count(k) {
        let (z2, s) = complex.act(w, k, z);
        let c = sys.conjugation(k, w, z);
        for i in 0..c.rows() {
            for j in 0..c.cols() {
                a[(off[z2] + i, off[z] + j)] = &c[(i, j)] * BigInt::from(s);
            }
        }
    }
    a
}

/// Invariants of ⊕ F_z: the joint kernel of (action(w) − id) over the
/// generators, solved one orbit block at a time.
fn invariants(complex: &EquivariantComplex, sys: &CoefficientSystem, k: usize) -> IntMatrix {
    let g = complex.group();
    let off = offsets(sys, complex, k);
    let total = off[complex.count(k)];
    let actions: Vec<IntMatrix> = g.generators().iter().map(|&w| full_action(complex, sys, k, w)).collect();
    let mut cols: Vec<Vec<BigInt>> = Vec::new();
    for orbit in complex.orbits(k) {
        let idx: Vec<usize> = orbit.iter().flat_map(|&z| off[z]..off[z + 1]).collect();
        if idx.is_empty() {
            continue;
        }
        let blocks: Vec<IntMatrix> = actions
            .iter()
            .map(|a| a.select_rows(&idx).select_columns(&idx).sub(&IntMatrix::identity(idx.len())))
            .collect();
        let ker = if blocks.is_empty() {
            IntMatrix::identity(idx.len())
        } else {
            kernel_lattice(&IntMatrix::vstack(&blocks, idx.len()))
        };
        for c in 0..ker.cols() {
            let mut v = vec![BigInt::zero(); total];
            for (r, &i) in idx.iter().enumerate() {
                v[i] = ker[(r, c)].clone();
            }
            cols.push(v);
        }
    }
    IntMatrix::from_fn(total, cols.len(), |i, j| cols[j][i].clone())
}

/// Invariant cochain complex C^*(X; F)^W with its differentials.
pub fn invariant_cochain_complex(complex: &EquivariantComplex, sys: &CoefficientSystem) -> Result<InvariantComplex> {
    let dims = complex.dim() + 1;
    let full: Vec<IntMatrix> = (0..dims - 1).map(|k| full_differential(complex, sys, k)).collect();
    for k in 1..full.len() {
        if !full[k].mul(&full[k - 1]).is_zero() {
            return Err(violated!("∂∘∂ ≠ 0 on cochains from degree {}", k - 1));
        }
    }
    let bases: Vec<IntMatrix> = (0..dims).map(|k| invariants(complex, sys, k)).collect();
    let mut differentials = Vec::new();
    for k in 0..dims - 1 {
        let image = full[k].mul(&bases[k]);
        let d = if bases[k + 1].cols() == 0 {
            IntMatrix::zeros(0, bases[k].cols())
        } else {
            let l = left_inverse(&bases[k + 1]).ok_or_else(|| violated!("invariant basis is not saturated"))?;
            l.mul(&image)
        };
        if bases[k + 1].mul(&d) != image {
            return Err(violated!("differential does not preserve invariants in degree {k}"));
        }
        differentials.push(d);
    }
    Ok(InvariantComplex { bases, differentials })
}

/// H^k_W(complex; F) for k = 0..dim.
pub fn bredon_cohomology(complex: &EquivariantComplex, sys: &CoefficientSystem) -> Result<Vec<AbelianGroupInv>> {
    let inv = invariant_cochain_complex(complex, sys)?;
    let h = complex_cohomology(&inv.ranks(), &inv.differentials)?;
    if !h[0].torsion.is_empty() {
        return Err(violated!("H^0 has torsion"));
    }
    Ok(h)
}
