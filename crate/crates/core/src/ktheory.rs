//! Assembling K-groups from Bredon cohomology.

use alloc::vec::Vec;

use crate::exactla::AbelianGroupInv;

/// One nonzero-capable entry of the E² page, homological indexing, q taken
/// in {0, 1} by 2-periodicity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct E2Entry {
    pub p: usize,
    pub q: usize,
    pub group: AbelianGroupInv,
}

/// E²_{p,q} = H^{n-p+1} when q + n is odd and 0 otherwise, for p = 1..n+1.
pub fn e2_page(h: &[AbelianGroupInv], n: usize) -> Vec<E2Entry> {
    let mut out = Vec::new();
    for p in 1..=n + 1 {
        for q in 0..2 {
            let group = if (q + n) % 2 == 1 { h.get(n + 1 - p).cloned().unwrap_or_default() } else { AbelianGroupInv::zero() };
            out.push(E2Entry { p, q, group });
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KGroups {
    pub k0: AbelianGroupInv,
    pub k1: AbelianGroupInv,
    /// False when the sum of E² terms only determines K up to extensions
    /// and higher differentials.
    pub exact: bool,
}

/// K₀ = ⊕ H^even, K₁ = ⊕ H^odd. Exact for n ≤ 2; for larger n this is only
/// the E² total and is flagged as such.
pub fn k_groups(h: &[AbelianGroupInv], n: usize) -> KGroups {
    let mut k0 = AbelianGroupInv::zero();
    let mut k1 = AbelianGroupInv::zero();
    for (j, g) in h.iter().enumerate() {
        if j % 2 == 0 {
            k0 = k0.direct_sum(g);
        } else {
            k1 = k1.direct_sum(g);
        }
    }
    KGroups { k0, k1, exact: n <= 2 }
}

/// Ranks of K₀ ⊗ Q and K₁ ⊗ Q.
pub fn rational_k(h: &[AbelianGroupInv]) -> (usize, usize) {
    let even = h.iter().step_by(2).map(|g| g.rank).sum();
    let odd = h.iter().skip(1).step_by(2).map(|g| g.rank).sum();
    (even, odd)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CrossCheck {
    Agree,
    /// First degree where the two sides differ.
    Differ { degree: usize },
    /// Only one side was computed.
    Skipped,
}

/// Degreewise comparison of H*_W(X, lying-over) and H*_W(X̃, rep ring).
pub fn cross_check(x_side: &[AbelianGroupInv], blowup_side: &[AbelianGroupInv]) -> CrossCheck {
    let len = x_side.len().max(blowup_side.len());
    for j in 0..len {
        if x_side.get(j) != blowup_side.get(j) {
            return CrossCheck::Differ { degree: j };
        }
    }
    CrossCheck::Agree
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(r: usize) -> AbelianGroupInv {
        AbelianGroupInv::free(r)
    }

    #[test]
    fn klein_bottle_assembly() {
        let h = [z(1), z(1), AbelianGroupInv::from_cyclic(0, &[2.into()])];
        let k = k_groups(&h, 2);
        assert_eq!(alloc::format!("{}", k.k0), "Z ⊕ Z/2");
        assert_eq!(k.k1, z(1));
        assert!(k.exact);
        assert_eq!(rational_k(&h), (1, 1));
    }

    #[test]
    fn e2_vanishes_in_half_the_rows() {
        let h = [z(1), z(2), z(1)];
        for e in e2_page(&h, 2) {
            if (e.q + 2) % 2 == 0 {
                assert!(e.group.is_zero());
            }
        }
        let e = e2_page(&h, 2);
        assert_eq!(e.iter().find(|e| e.p == 2 && e.q == 1).unwrap().group, z(2));
    }

    #[test]
    fn three_dimensional_is_flagged() {
        let h = [z(1), z(3), z(3), z(1)];
        let k = k_groups(&h, 3);
        assert!(!k.exact);
        assert_eq!(rational_k(&h), (4, 4));
    }

    #[test]
    fn cross_check_pinpoints_degree() {
        assert_eq!(cross_check(&[z(1), z(0)], &[z(1), z(0)]), CrossCheck::Agree);
        assert_eq!(cross_check(&[z(1), z(1)], &[z(1), z(0)]), CrossCheck::Differ { degree: 1 });
    }
}
