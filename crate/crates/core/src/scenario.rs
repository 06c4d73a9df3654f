//! Scenario description in ambient coordinates, independent of any file
//! format, and its resolution into group, cocycle, arrangement and slicing.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::arrangement::{Arrangement, HyperplaneFamily};
use crate::blowup::{SlicedLocus, SlicedLocusSpec};
use crate::error::{invalid, Error, Result};
use crate::groups::{close_affine_group, AffineTorusMap, Cocycle, Group};
use crate::rational::{frac, Q};

/// x ↦ A x + b in ambient coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorSpec {
    pub name: String,
    pub linear: Vec<Vec<i64>>,
    pub translation: Vec<Q>,
}

/// {x : ⟨normal, x⟩ ∈ offsets + period·Z}
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilySpec {
    pub normal: Vec<Q>,
    pub offsets: Vec<Q>,
    pub period: Q,
}

/// A group element written as a product of generator names, applied right
/// to left like composition. The empty word is the identity.
pub type Word = Vec<String>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CocycleEntry {
    pub left: Word,
    pub right: Word,
    pub exponent: i64,
}

/// Sparse table γ(a, b) = exp(2πi · exponent / modulus); unlisted pairs are 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CocycleSpec {
    pub modulus: u32,
    pub entries: Vec<CocycleEntry>,
}

/// ι on the component of the locus through the given offset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IotaEntry {
    pub offset: Q,
    pub exponent: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlicedSpec {
    pub reflection: Word,
    pub family: FamilySpec,
    /// Components not listed get ι = 1.
    pub iota: Vec<IotaEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Scenario {
    pub name: String,
    pub description: String,
    /// Columns span the lattice.
    pub lattice: Vec<Vec<i64>>,
    pub generators: Vec<GeneratorSpec>,
    pub cocycle: Option<CocycleSpec>,
    pub families: Vec<FamilySpec>,
    pub sliced: Vec<SlicedSpec>,
    /// ι values are exp(2πi · exponent / iota_modulus).
    pub iota_modulus: u32,
}

/// Scenario data converted to lattice coordinates.
#[derive(Clone, Debug)]
pub struct Resolved {
    pub group: Group,
    pub gamma: Cocycle,
    pub families: Vec<HyperplaneFamily>,
    pub sliced: SlicedLocusSpec,
    names: BTreeMap<String, usize>,
}

impl Resolved {
    /// Group element of a word.
    pub fn element(&self, w: &[String]) -> Option<usize> {
        let gens: Option<Vec<usize>> = w.iter().map(|s| self.names.get(s).copied()).collect();
        self.group.word(&gens?)
    }
}

impl Scenario {
    pub fn dim(&self) -> usize {
        self.lattice.len()
    }

    /// Group closure, cocycle validation, and conversion of all hyperplane
    /// data to lattice coordinates.
    pub fn resolve(&self, max_group_order: usize) -> Result<Resolved> {
        let n = self.dim();
        if n == 0 || self.lattice.iter().any(|r| r.len() != n) {
            return Err(invalid!("lattice: expected a square nonempty integer matrix"));
        }
        let mut maps = Vec::new();
        let mut names = BTreeMap::new();
        for (i, g) in self.generators.iter().enumerate() {
            if names.insert(g.name.clone(), i).is_some() {
                return Err(invalid!("generators[{i}]: duplicate name {:?}", g.name));
            }
            let m = AffineTorusMap::from_ambient(&self.lattice, &g.linear, &g.translation)
                .map_err(|e| invalid!("generators[{i}] ({}): {}", g.name, detail(e)))?;
            maps.push(m);
        }
        if maps.is_empty() {
            maps.push(AffineTorusMap::identity(n));
        }
        let group = close_affine_group(&maps, max_group_order)?;
        let mut resolved = Resolved {
            gamma: Cocycle::trivial(group.order()),
            group,
            families: Vec::new(),
            sliced: SlicedLocusSpec { modulus: self.iota_modulus.max(1), loci: Vec::new() },
            names,
        };
        if let Some(c) = &self.cocycle {
            let mut entries = Vec::new();
            for (i, e) in c.entries.iter().enumerate() {
                let a = resolved.element(&e.left).ok_or_else(|| invalid!("cocycle.entries[{i}].left: unknown generator"))?;
                let b =
                    resolved.element(&e.right).ok_or_else(|| invalid!("cocycle.entries[{i}].right: unknown generator"))?;
                entries.push((a, b, e.exponent));
            }
            let gamma = Cocycle::from_entries(resolved.group.order(), c.modulus, &entries)
                .map_err(|e| invalid!("cocycle: {}", detail(e)))?;
            gamma.validate(&resolved.group).map_err(|e| invalid!("cocycle: {}", detail(e)))?;
            resolved.gamma = gamma;
        }
        for (i, f) in self.families.iter().enumerate() {
            let fam = HyperplaneFamily::from_ambient(&self.lattice, &f.normal, &f.offsets, &f.period)
                .map_err(|e| invalid!("families[{i}]: {}", detail(e)))?;
            resolved.families.push(fam);
        }
        for (i, s) in self.sliced.iter().enumerate() {
            let r = resolved
                .element(&s.reflection)
                .ok_or_else(|| invalid!("sliced[{i}].reflection: unknown generator in {:?}", s.reflection))?;
            if r == 0 {
                return Err(invalid!("sliced[{i}].reflection: the identity cannot act as a reflection"));
            }
            let f = &s.family;
            let fam = HyperplaneFamily::from_ambient(&self.lattice, &f.normal, &f.offsets, &f.period)
                .map_err(|e| invalid!("sliced[{i}].family: {}", detail(e)))?;
            let mut iota = alloc::vec![0; fam.offsets().len()];
            for (j, e) in s.iota.iter().enumerate() {
                // the offset is an ambient value of ⟨normal, x⟩; locate its component
                let single = HyperplaneFamily::from_ambient(&self.lattice, &f.normal, &[e.offset.clone()], &f.period)
                    .map_err(|e| invalid!("sliced[{i}].iota[{j}]: {}", detail(e)))?;
                let hits: Vec<usize> =
                    single.offsets().iter().filter_map(|o| fam.offsets().iter().position(|x| *x == frac(o))).collect();
                if hits.is_empty() {
                    return Err(invalid!("sliced[{i}].iota[{j}]: offset is not on the locus"));
                }
                for pos in hits {
                    iota[pos] = e.exponent % resolved.sliced.modulus;
                }
            }
            resolved.sliced.loci.push(SlicedLocus { reflection: r, family: fam, iota });
        }
        Ok(resolved)
    }

    /// Arrangement of the listed families; sliced families are added by the
    /// pipeline after completion.
    pub fn arrangement(&self, r: &Resolved) -> Result<Arrangement> {
        Arrangement::new(self.dim(), &r.families)
    }
}

fn detail(e: Error) -> String {
    match e {
        Error::Invalid(s) => s,
        other => alloc::format!("{other}"),
    }
}
