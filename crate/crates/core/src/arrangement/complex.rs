use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{invalid, violated, Result};
use crate::exactla::IntMatrix;
use crate::groups::Group;

/// Finite cell complex with a cellular group action.
///
/// `incidence(k)` has rows indexed by k-cells and columns by (k+1)-cells, so
/// its (y, z) entry is [y:z] and its transpose is the cochain differential
/// C^k → C^{k+1}. Elements act by `act(g, k, z) = (z', ε)`, meaning g carries
/// the oriented cell z to ε·z'.
#[derive(Clone, Debug)]
pub struct EquivariantComplex {
    group: Group,
    counts: Vec<usize>,
    incidence: Vec<IntMatrix>,
    facets: Vec<Vec<Vec<usize>>>,
    action: Vec<Vec<(usize, i8)>>,
    stabilizers: Vec<Vec<Vec<usize>>>,
    labels: Vec<Vec<String>>,
}

impl EquivariantComplex {
    /// Assembles and validates a complex. `facets[k][z]` lists the
    /// (k-1)-dimensional faces of z (empty for k = 0); when `None`, the cells
    /// with nonzero incidence are used. `action[k][g * counts[k] + z]`.
    pub fn new(
        group: Group,
        counts: Vec<usize>,
        incidence: Vec<IntMatrix>,
        facets: Option<Vec<Vec<Vec<usize>>>>,
        action: Vec<Vec<(usize, i8)>>,
        labels: Option<Vec<Vec<String>>>,
    ) -> Result<Self> {
        let dims = counts.len();
        if dims == 0 {
            return Err(invalid!("complex without cells"));
        }
        if incidence.len() + 1 != dims {
            return Err(invalid!("expected {} incidence matrices, got {}", dims - 1, incidence.len()));
        }
        for (k, m) in incidence.iter().enumerate() {
            if m.rows() != counts[k] || m.cols() != counts[k + 1] {
                return Err(invalid!(
                    "incidence matrix {k} is {}×{}, expected {}×{}",
                    m.rows(),
                    m.cols(),
                    counts[k],
                    counts[k + 1]
                ));
            }
        }
        if action.len() != dims {
            return Err(invalid!("action table has {} dimensions, expected {dims}", action.len()));
        }
        for (k, a) in action.iter().enumerate() {
            if a.len() != group.order() * counts[k] {
                return Err(invalid!("action table in dimension {k} has the wrong size"));
            }
            if a.iter().any(|&(z, s)| z >= counts[k] || (s != 1 && s != -1)) {
                return Err(invalid!("action table in dimension {k} has an invalid entry"));
            }
        }
        let facets = match facets {
            Some(f) => f,
            None => {
                let mut f = alloc::vec![alloc::vec![Vec::new(); counts[0]]];
                for (k, m) in incidence.iter().enumerate() {
                    f.push(
                        (0..counts[k + 1])
                            .map(|z| (0..counts[k]).filter(|&y| !m[(y, z)].is_zero()).collect())
                            .collect(),
                    );
                }
                f
            }
        };
        let labels = labels.unwrap_or_else(|| {
            counts
                .iter()
                .enumerate()
                .map(|(k, &c)| (0..c).map(|z| alloc::format!("e{k}.{z}")).collect())
                .collect()
        });
        let mut out = EquivariantComplex {
            group,
            counts,
            incidence,
            facets,
            action,
            stabilizers: Vec::new(),
            labels,
        };
        out.stabilizers = (0..dims)
            .map(|k| {
                (0..out.counts[k])
                    .map(|z| out.group.elements().filter(|&g| out.act(g, k, z).0 == z).collect())
                    .collect()
            })
            .collect();
        out.validate()?;
        Ok(out)
    }

    /// Complex with the trivial group acting.
    pub fn without_action(counts: Vec<usize>, incidence: Vec<IntMatrix>) -> Result<Self> {
        let action = counts.iter().map(|&c| (0..c).map(|z| (z, 1)).collect()).collect();
        Self::new(Group::trivial(), counts, incidence, None, action, None)
    }

    /// ∂∘∂ = 0, action laws and the chain-map property of every element.
    pub fn validate(&self) -> Result<()> {
        for k in 1..self.incidence.len() {
            if !self.incidence[k - 1].mul(&self.incidence[k]).is_zero() {
                return Err(violated!("∂∘∂ ≠ 0 between dimensions {} and {}", k + 1, k - 1));
            }
        }
        let g = &self.group;
        for k in 0..self.counts.len() {
            for z in 0..self.counts[k] {
                if self.act(0, k, z) != (z, 1) {
                    return Err(violated!("identity moves cell {}", self.labels[k][z]));
                }
                for a in g.elements() {
                    for b in g.generators().iter().copied() {
                        let (z1, s1) = self.act(b, k, z);
                        let (z2, s2) = self.act(a, k, z1);
                        if self.act(g.mul(a, b), k, z) != (z2, s1 * s2) {
                            return Err(violated!("action is not a group action on cell {}", self.labels[k][z]));
                        }
                    }
                }
            }
        }
        for (k, m) in self.incidence.iter().enumerate() {
            for a in g.elements() {
                for z in 0..self.counts[k + 1] {
                    let (gz, sz) = self.act(a, k + 1, z);
                    for y in 0..self.counts[k] {
                        let (gy, sy) = self.act(a, k, y);
                        let lhs = &m[(gy, gz)] * BigInt::from(sz);
                        let rhs = &m[(y, z)] * BigInt::from(sy);
                        if lhs != rhs {
                            return Err(violated!(
                                "element {a} does not commute with the boundary at [{}:{}]",
                                self.labels[k][y],
                                self.labels[k + 1][z]
                            ));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Stabilizers shrink along faces: W_z ⊆ W_y whenever y is a face of z.
    /// Holds once stabilizers fix their cells pointwise.
    pub fn check_face_stabilizers(&self) -> Result<()> {
        for k in 1..self.counts.len() {
            for z in 0..self.counts[k] {
                for &y in &self.facets[k][z] {
                    if !self.stabilizers[k][z].iter().all(|w| self.stabilizers[k - 1][y].binary_search(w).is_ok()) {
                        return Err(violated!(
                            "stabilizer of {} is not contained in that of its face {}",
                            self.labels[k][z],
                            self.labels[k - 1][y]
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn dim(&self) -> usize {
        self.counts.len() - 1
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn count(&self, k: usize) -> usize {
        self.counts[k]
    }

    /// [y:z] for y of dimension k and z of dimension k+1.
    pub fn incidence(&self, k: usize) -> &IntMatrix {
        &self.incidence[k]
    }

    /// Cochain differential C^k → C^{k+1}.
    pub fn coboundary(&self, k: usize) -> IntMatrix {
        self.incidence[k].transpose()
    }

    pub fn act(&self, g: usize, k: usize, z: usize) -> (usize, i8) {
        self.action[k][g * self.counts[k] + z]
    }

    pub fn stabilizer(&self, k: usize, z: usize) -> &[usize] {
        &self.stabilizers[k][z]
    }

    /// Codimension-one faces of a k-cell.
    pub fn facets(&self, k: usize, z: usize) -> &[usize] {
        &self.facets[k][z]
    }

    pub fn label(&self, k: usize, z: usize) -> &str {
        &self.labels[k][z]
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.counts.iter().enumerate().map(|(k, &c)| if k % 2 == 0 { c as i64 } else { -(c as i64) }).sum()
    }

    /// Orbits of k-cells, each sorted, listed by smallest member.
    pub fn orbits(&self, k: usize) -> Vec<Vec<usize>> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for z in 0..self.counts[k] {
            if seen.contains(&z) {
                continue;
            }
            let orbit: BTreeSet<usize> = self.group.elements().map(|g| self.act(g, k, z).0).collect();
            seen.extend(orbit.iter().copied());
            out.push(orbit.into_iter().collect());
        }
        out
    }

    /// Whether some element maps a cell to itself with reversed orientation.
    pub fn has_orientation_reversal(&self) -> bool {
        (0..self.counts.len()).any(|k| {
            (0..self.counts[k]).any(|z| self.stabilizers[k][z].iter().any(|&g| self.act(g, k, z).1 < 0))
        })
    }

    pub fn is_free(&self) -> bool {
        self.stabilizers.iter().flatten().all(|s| s.len() == 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn klein_bottle_cells() {
        let d0 = IntMatrix::zeros(1, 2);
        let d1 = IntMatrix::from_rows(&[alloc::vec![2], alloc::vec![0]]);
        let c = EquivariantComplex::without_action(alloc::vec![1, 2, 1], alloc::vec![d0, d1]).unwrap();
        assert_eq!(c.euler_characteristic(), 0);
        assert_eq!(c.facets(2, 0), [0]);
        assert!(c.is_free());
    }

    #[test]
    fn broken_boundary_is_rejected() {
        let d0 = IntMatrix::from_rows(&[alloc::vec![1], alloc::vec![-1]]);
        let d1 = IntMatrix::from_rows(&[alloc::vec![1]]);
        assert!(EquivariantComplex::without_action(alloc::vec![2, 1, 1], alloc::vec![d0, d1]).is_err());
    }
}
