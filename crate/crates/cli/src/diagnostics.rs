//! Crossed-product diagnostics for the built-in finite orbits.

use bredon_core::crossed::{build_crossed_product, ideal_summand, orbit_dual, DualPoint};
use bredon_core::presets::CrossedExample;
use bredon_core::Result;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossedDiagnostics {
    pub name: String,
    pub group_order: usize,
    pub points: usize,
    pub dimension: usize,
    pub center_dimension: usize,
    pub dual: Vec<DualPoint>,
    /// Σ (dim of each irreducible)², equal to the dimension.
    pub block_sum: usize,
    /// dim δ_x A δ_x for each point x.
    pub corner_dimensions: Vec<usize>,
    /// (dimension, K₀ rank) of the ideal cut out at the first point.
    pub ideal: Option<(usize, usize)>,
}

pub fn diagnose(e: &CrossedExample, order_cap: usize) -> Result<CrossedDiagnostics> {
    let a = build_crossed_product(&e.group, &e.set, &e.gamma)?;
    let dual = orbit_dual(&a, order_cap)?;
    let ideal = match &e.ideal {
        Some((normal, iota)) => {
            let s = ideal_summand(&a, 0, normal, iota, order_cap)?;
            Some((s.dimension, s.k0_rank))
        }
        None => None,
    };
    Ok(CrossedDiagnostics {
        name: e.name.clone(),
        group_order: e.group.order(),
        points: e.set.len(),
        dimension: a.dim(),
        center_dimension: a.center_dimension(),
        block_sum: dual.iter().map(|p| p.dim * p.dim).sum(),
        corner_dimensions: (0..e.set.len()).map(|x| a.corner_dimension(x)).collect(),
        dual,
        ideal,
    })
}
