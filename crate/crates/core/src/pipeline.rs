//! End-to-end run of one scenario: group closure, torus complex, blow-up,
//! both coefficient systems, cohomology, cross-check and K-groups.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::arrangement::{build_torus_complex, equivariant_refine, Arrangement, TorusComplex};
use crate::blowup::{build_blowup, validate_blowup, BlowupResult, Check, SlicedLocusSpec};
use crate::bredon::{bredon_cohomology, build_system, invariant_cochain_complex, SystemKind};
use crate::error::{violated, Error, Result};
use crate::exactla::AbelianGroupInv;
use crate::groups::{Cocycle, Group, DEFAULT_ORDER_CAP};
use crate::ktheory::{cross_check, e2_page, k_groups, rational_k, CrossCheck, E2Entry, KGroups};
use crate::scenario::Scenario;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Systems {
    /// Twisted representation rings on the blow-up.
    Blowup,
    /// Lying-over system on the original torus.
    XSide,
    #[default]
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum CheckLevel {
    #[default]
    Fast,
    Full,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Options {
    pub systems: Systems,
    pub check: CheckLevel,
    /// Bound for group closure and for character tables.
    pub max_group_order: usize,
}

impl Default for Options {
    fn default() -> Self {
        Options { systems: Systems::Both, check: CheckLevel::Fast, max_group_order: DEFAULT_ORDER_CAP }
    }
}

/// Geometric stage of a run, before any coefficient system is built.
#[derive(Clone)]
pub struct Prepared {
    pub group: Group,
    pub gamma: Cocycle,
    pub sliced: SlicedLocusSpec,
    /// Refined torus complex carrying the action.
    pub torus: TorusComplex,
    pub blowup: BlowupResult,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub name: String,
    pub dim: usize,
    pub group_order: usize,
    pub x_cells: Vec<usize>,
    pub x_tilde_cells: Vec<usize>,
    /// Ranks of the invariant cochain groups on the blow-up side.
    pub invariant_ranks: Option<Vec<usize>>,
    pub blowup_side: Option<Vec<AbelianGroupInv>>,
    pub x_side: Option<Vec<AbelianGroupInv>>,
    pub cross_check: CrossCheck,
    pub e2: Vec<E2Entry>,
    pub k: KGroups,
    pub rational: (usize, usize),
    pub checks: Vec<Check>,
}

/// Builds the refined torus complex and its blow-up.
pub fn prepare(s: &Scenario, opts: &Options) -> Result<Prepared> {
    let n = s.dim();
    if !(1..=crate::arrangement::MAX_GEOMETRIC_DIM).contains(&n) {
        return Err(Error::Dimension(n));
    }
    let r = s.resolve(opts.max_group_order)?;
    let group = r.group.clone();
    let gamma = r.gamma.normalize_inverse(&group);
    let sliced = r.sliced.completed(&group, &gamma)?;

    let mut arr = Arrangement::new(n, &r.families)?;
    for f in sliced.families() {
        arr.add(&f);
    }
    for w in group.elements() {
        if !arr.is_invariant_under(&group.maps()[w]) {
            return Err(Error::NotCellular(format!(
                "element {} does not map the hyperplane arrangement to itself",
                describe(&group, w)
            )));
        }
    }
    let arr = arr.with_grid().closed_under(&group);
    let torus = build_torus_complex(&arr)?.install_action(&group)?;
    let torus = equivariant_refine(&torus)?;
    let blowup = build_blowup(&torus, &sliced, &gamma)?;
    Ok(Prepared { group, gamma, sliced, torus, blowup })
}

/// Full pipeline. Any failed structural check is an `Invariant` error.
pub fn run(s: &Scenario, opts: &Options) -> Result<Report> {
    let p = prepare(s, opts)?;
    let n = s.dim();
    let b = &p.blowup;
    let mut checks = validate_blowup(b).checks;
    if opts.check == CheckLevel::Full {
        checks.extend(full_checks(&p));
    }
    if let Some(c) = checks.iter().find(|c| c.outcome.is_err()) {
        return Err(violated!("{}: {}", c.name, c.outcome.clone().unwrap_err()));
    }

    let cap = opts.max_group_order;
    let (mut blowup_side, mut x_side, mut invariant_ranks) = (None, None, None);
    if opts.systems != Systems::XSide {
        let sys = build_system(SystemKind::TwistedRep, b.x_tilde(), &p.gamma, None, cap)?;
        invariant_ranks = Some(invariant_cochain_complex(b.x_tilde(), &sys)?.ranks());
        blowup_side = Some(bredon_cohomology(b.x_tilde(), &sys)?);
    }
    if opts.systems != Systems::Blowup {
        let data = b.scalar_data();
        let sys = build_system(SystemKind::LyingOver, b.x(), &p.gamma, Some(&data), cap)?;
        x_side = Some(bredon_cohomology(b.x(), &sys)?);
    }
    let cross = match (&x_side, &blowup_side) {
        (Some(x), Some(bl)) => cross_check(x, bl),
        _ => CrossCheck::Skipped,
    };
    if let CrossCheck::Differ { degree } = cross {
        return Err(violated!(
            "the lying-over cohomology of X and the representation-ring cohomology of the blow-up differ in degree {degree}"
        ));
    }
    let h = blowup_side.as_ref().or(x_side.as_ref()).cloned().unwrap_or_default();
    let e2 = e2_page(&h, n);
    if opts.check == CheckLevel::Full {
        if let Some(e) = e2.iter().find(|e| (e.q + n) % 2 == 0 && !e.group.is_zero()) {
            return Err(violated!("E² entry ({}, {}) should vanish", e.p, e.q));
        }
    }
    let k = k_groups(&h, n);
    let rational = rational_k(&h);
    if rational.0 + rational.1 != h.iter().map(|g| g.rank).sum::<usize>() {
        return Err(violated!("rational K ranks do not add up to the total cohomology rank"));
    }
    Ok(Report {
        name: s.name.clone(),
        dim: n,
        group_order: p.group.order(),
        x_cells: b.x().counts().to_vec(),
        x_tilde_cells: b.x_tilde().counts().to_vec(),
        invariant_ranks,
        blowup_side,
        x_side,
        cross_check: cross,
        e2,
        k,
        rational,
        checks,
    })
}

fn describe(g: &Group, w: usize) -> String {
    let m = &g.maps()[w];
    format!("#{w} (linear part {:?}, shift {:?})", m.linear(), m.shift().iter().map(crate::rational::fmt_q).collect::<Vec<_>>())
}

fn outcome(name: &'static str, r: Result<()>) -> Check {
    Check { name, outcome: r.map_err(|e| format!("{e}")) }
}

/// Checks beyond those the constructors already enforce.
fn full_checks(p: &Prepared) -> Vec<Check> {
    let b = &p.blowup;
    let mut out = Vec::new();
    out.push(outcome("stabilizers shrink towards faces on X", b.x().check_face_stabilizers()));
    out.push(outcome("stabilizers shrink towards faces on the blow-up", b.x_tilde().check_face_stabilizers()));
    out.push(outcome("X satisfies the complex and action laws", b.x().validate()));
    out.push(outcome("the blow-up satisfies the complex and action laws", b.x_tilde().validate()));
    out.push(outcome(
        "Euler characteristic of the torus is zero",
        if b.x().euler_characteristic() == 0 { Ok(()) } else { Err(violated!("nonzero Euler characteristic")) },
    ));
    out.push(outcome(
        "the blow-up has no scalar stabilizers",
        match cell_with_scalar_lift(b) {
            None => Ok(()),
            Some(label) => Err(violated!("reflection fixes its locus through {label}")),
        },
    ));
    out.push(outcome("constant system on the blow-up has ∂∘∂ = 0", {
        build_system(SystemKind::Constant, b.x_tilde(), &p.gamma, None, DEFAULT_ORDER_CAP)
            .and_then(|sys| invariant_cochain_complex(b.x_tilde(), &sys).map(|_| ()))
    }));
    out
}

/// A blow-up cell fixed by a reflection whose locus contains it would mean the
/// cut did not separate the two sides.
fn cell_with_scalar_lift(b: &BlowupResult) -> Option<String> {
    let xt = b.x_tilde();
    for k in 0..=xt.dim() {
        for zt in 0..xt.count(k) {
            let z = b.pi(k, zt);
            let scalar = b.scalar_subgroup(k, z);
            if xt.stabilizer(k, zt).iter().any(|w| *w != 0 && scalar.contains(w)) {
                return Some(String::from(xt.label(k, zt)));
            }
        }
    }
    None
}
