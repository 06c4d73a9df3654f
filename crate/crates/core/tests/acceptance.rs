//! Acceptance suite: one line per criterion, nonzero exit if any fails.

mod common;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};

use bredon_core::blowup::{cell_subgroups, validate_blowup};
use bredon_core::bredon::{bredon_cohomology, build_system, SystemKind};
use bredon_core::crossed::{build_crossed_product, ideal_summand, orbit_dual, Element, FiniteCrossedProduct, WSet};
use bredon_core::cyclo::Cyclo;
use bredon_core::exactla::{snf, AbelianGroupInv};
use bredon_core::groups::{character_table, restriction_matrix, CharTable, Cocycle, Group};
use bredon_core::ktheory::CrossCheck;
use bredon_core::pipeline::{prepare, run, Options, Report};
use bredon_core::presets;
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::numeric::{classes, eval, C};

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn report(name: &str) -> Result<Report, String> {
    let s = presets::preset(name).ok_or_else(|| format!("missing preset {name}"))?;
    run(&s, &Options::default()).map_err(|e| format!("{name}: {e}"))
}

fn free(ranks: &[usize]) -> Vec<AbelianGroupInv> {
    ranks.iter().map(|&r| AbelianGroupInv::free(r)).collect()
}

fn group(rank: usize, torsion: &[i64]) -> AbelianGroupInv {
    AbelianGroupInv { rank, torsion: torsion.iter().map(|&t| BigInt::from(t)).collect() }
}

fn show(h: &[AbelianGroupInv]) -> String {
    h.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

fn sp4_table() -> Outcome {
    let expected: [&[usize]; 8] =
        [&[2, 0, 0], &[4, 0, 0], &[1, 1, 0], &[6, 0, 0], &[9, 0, 0], &[2, 2, 0], &[3, 3, 0], &[1, 2, 1]];
    for (i, want) in expected.iter().enumerate() {
        let name = format!("sp4-case{}", i + 1);
        let r = report(&name)?;
        let h = r.blowup_side.ok_or("blow-up side not computed")?;
        ensure(h == free(want), || format!("{name}: got ({}), want {want:?}", show(&h)))?;
    }
    Ok("all eight cases match".into())
}

fn sp4_case1_k() -> Outcome {
    let r = report("sp4-case1")?;
    ensure(r.k.k0 == AbelianGroupInv::free(2) && r.k.k1.is_zero() && r.k.exact, || {
        format!("got K0 = {}, K1 = {}", r.k.k0, r.k.k1)
    })?;
    Ok("K0 = Z^2, K1 = 0".into())
}

fn klein_bottle() -> Outcome {
    let r = report("klein-bottle")?;
    ensure(r.k.k0 == group(1, &[2]) && r.k.k1 == AbelianGroupInv::free(1) && r.k.exact, || {
        format!("got K0 = {}, K1 = {}", r.k.k0, r.k.k1)
    })?;
    Ok(format!("K0 = {}, K1 = {}", r.k.k0, r.k.k1))
}

fn dim1_pairs() -> Outcome {
    let cases = [("dim1-free", 1, 1), ("dim1-case-a", 3, 0), ("dim1-case-b", 2, 0), ("dim1-case-c", 1, 0)];
    for (name, k0, k1) in cases {
        let r = report(name)?;
        ensure(
            r.k.k0 == AbelianGroupInv::free(k0) && r.k.k1 == AbelianGroupInv::free(k1),
            || format!("{name}: got ({}, {})", r.k.k0, r.k.k1),
        )?;
    }
    Ok("(Z,Z), (Z^3,0), (Z^2,0), (Z,0)".into())
}

fn cross_check_all() -> Outcome {
    let names = presets::names();
    for name in &names {
        let r = report(name)?;
        let (x, b) = (r.x_side.ok_or("x side missing")?, r.blowup_side.ok_or("blow-up side missing")?);
        ensure(x == b && r.cross_check == CrossCheck::Agree, || {
            format!("{name}: X side ({}) vs blow-up side ({})", show(&x), show(&b))
        })?;
    }
    Ok(format!("{} presets agree degreewise", names.len()))
}

fn blowup_structure() -> Outcome {
    let mut cells = 0;
    for name in presets::names() {
        let s = presets::preset(&name).unwrap();
        let p = prepare(&s, &Options::default()).map_err(|e| format!("{name}: {e}"))?;
        let b = &p.blowup;
        if let Some(c) = validate_blowup(b).first_failure() {
            return Err(format!("{name}: {} ({:?})", c.name, c.outcome));
        }
        let g = &p.group;
        let (x, xt) = (b.x(), b.x_tilde());
        let ann = cell_subgroups(b);
        for k in 0..=x.dim() {
            for z in 0..x.count(k) {
                cells += 1;
                let at = || format!("{name}: {k}-cell {z}");
                let wz: BTreeSet<usize> = x.stabilizer(k, z).iter().copied().collect();
                let scalar = &ann[k][z].scalar;
                let fiber = b.fiber(k, z);
                ensure(fiber.len() == scalar.len(), || format!("{}: fiber {} vs |W'| {}", at(), fiber.len(), scalar.len()))?;
                let fset: BTreeSet<usize> = fiber.iter().copied().collect();
                for &zt in &fiber {
                    ensure(b.pi(k, zt) == z, || format!("{}: fiber cell maps elsewhere", at()))?;
                    let images: BTreeSet<usize> = scalar.iter().map(|&w| xt.act(w, k, zt).0).collect();
                    ensure(images == fset && images.len() == scalar.len(), || format!("{}: W' not simply transitive", at()))?;
                    let lifted = xt.stabilizer(k, zt);
                    // W_z = W'_z · W_z̃ with trivial intersection and W'_z normal
                    ensure(lifted.iter().all(|w| wz.contains(w)), || format!("{}: lifted stabilizer escapes W_z", at()))?;
                    let meet = lifted.iter().filter(|w| scalar.contains(w)).count();
                    ensure(meet == 1, || format!("{}: W' meets the lifted stabilizer", at()))?;
                    let prod: BTreeSet<usize> =
                        scalar.iter().flat_map(|&a| lifted.iter().map(move |&c| g.mul(a, c))).collect();
                    ensure(prod == wz && scalar.len() * lifted.len() == wz.len(), || format!("{}: no splitting", at()))?;
                    let normal = wz.iter().all(|&w| scalar.iter().all(|&v| scalar.contains(&g.conj(w, v))));
                    ensure(normal, || format!("{}: W' not normal in W_z", at()))?;
                }
            }
        }
    }
    Ok(format!("{cells} cells checked"))
}

fn free_quotient_oracle() -> Outcome {
    let names = ["klein-bottle", "discrete-series-2", "discrete-series-3", "discrete-series-twisted", "dim1-free", "sp4-case8"];
    for name in names {
        let s = presets::preset(name).unwrap();
        let p = prepare(&s, &Options::default()).map_err(|e| format!("{name}: {e}"))?;
        let x = p.blowup.x_tilde();
        ensure(x.is_free(), || format!("{name}: action is not free"))?;
        let sys = build_system(SystemKind::Constant, x, &p.gamma, None, 64).map_err(|e| e.to_string())?;
        let h = bredon_cohomology(x, &sys).map_err(|e| e.to_string())?;
        let (dims, ds) = common::quotient_coboundaries(x);
        for (j, hj) in h.iter().enumerate() {
            let (rank, torsion) = common::naive_cohomology(&dims, &ds, j);
            let want = group(rank, &torsion.iter().map(|&t| t as i64).collect::<Vec<_>>());
            ensure(*hj == want, || format!("{name}: H^{j} = {hj}, quotient complex gives {want}"))?;
        }
    }
    Ok(format!("{} free presets match the quotient complex", names.len()))
}

/// Orthogonality, Σd² and the regular-class count, evaluated numerically.
fn check_table(g: &Group, elems: &[usize], gamma: &Cocycle, t: &CharTable) -> Result<(), String> {
    let n = elems.len() as f64;
    let sq: usize = t.degrees().iter().map(|d| d * d).sum();
    ensure(sq == elems.len(), || format!("Σd² = {sq} for order {}", elems.len()))?;
    for i in 0..t.len() {
        for j in 0..t.len() {
            let s = elems.iter().fold(C(0.0, 0.0), |acc, &h| acc.add(eval(t.value(i, h)).mul(eval(t.value(j, h)).conj())));
            ensure(s.near(if i == j { n } else { 0.0 }, 0.0), || format!("⟨χ{i}, χ{j}⟩ = {s:?}"))?;
        }
    }
    let regular = classes(g, elems)
        .iter()
        .filter(|c| {
            let x = c[0];
            elems.iter().all(|&y| g.mul(x, y) != g.mul(y, x) || gamma.exponent(x, y) == gamma.exponent(y, x))
        })
        .count();
    ensure(regular == t.len(), || format!("{} irreducibles, {regular} regular classes", t.len()))
}

fn random_subgroup(g: &Group, within: &[usize], rng: &mut ChaCha8Rng) -> Vec<usize> {
    let picks: Vec<usize> = (0..rng.gen_range(0..=2)).map(|_| within[rng.gen_range(0..within.len())]).collect();
    let mut h = g.generated(&picks);
    h.sort_unstable();
    h
}

fn characters() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut cases: Vec<(String, Group, Cocycle)> = Vec::new();
    for name in presets::names() {
        let s = presets::preset(&name).unwrap();
        let p = prepare(&s, &Options::default()).map_err(|e| format!("{name}: {e}"))?;
        if p.group.order() <= 16 {
            cases.push((name, p.group, p.gamma));
        }
    }
    for (name, g) in common::small_groups() {
        let order = g.order();
        cases.push((name.into(), g, Cocycle::trivial(order)));
    }
    let mut tables = 0;
    for (name, g, gamma) in &cases {
        let all: Vec<usize> = g.elements().collect();
        let mut subs: BTreeSet<Vec<usize>> = BTreeSet::from([all.clone()]);
        for _ in 0..6 {
            subs.insert(random_subgroup(g, &all, &mut rng));
        }
        for h in &subs {
            let t = character_table(g, h, gamma, 64).map_err(|e| format!("{name}: {e}"))?;
            check_table(g, h, gamma, &t).map_err(|e| format!("{name} on {h:?}: {e}"))?;
            tables += 1;
        }
        // K ≤ H ≤ G: restriction factors through H
        for _ in 0..4 {
            let h = random_subgroup(g, &all, &mut rng);
            let k = random_subgroup(g, &h, &mut rng);
            let tg = character_table(g, &all, gamma, 64).map_err(|e| e.to_string())?;
            let th = character_table(g, &h, gamma, 64).map_err(|e| e.to_string())?;
            let tk = character_table(g, &k, gamma, 64).map_err(|e| e.to_string())?;
            let direct = restriction_matrix(&tg, &tk).map_err(|e| e.to_string())?;
            let steps = restriction_matrix(&th, &tk).unwrap().mul(&restriction_matrix(&tg, &th).unwrap());
            ensure(direct == steps, || format!("{name}: restriction to {k:?} does not factor through {h:?}"))?;
        }
    }
    Ok(format!("{tables} tables over {} groups", cases.len()))
}

/// γ = δf with f(w⁻¹) = −f(w), so γ(w, w⁻¹) = 1 already.
fn coboundary(g: &Group, m: i64, rng: &mut ChaCha8Rng) -> (Cocycle, Vec<i64>) {
    let mut f = vec![0i64; g.order()];
    for w in 1..g.order() {
        let wi = g.inv(w);
        if wi == w {
            f[w] = if rng.gen_bool(0.5) { m / 2 } else { 0 };
        } else if wi > w {
            f[w] = rng.gen_range(0..m);
            f[wi] = (m - f[w]) % m;
        }
    }
    let e: Vec<(usize, usize, i64)> =
        g.elements().flat_map(|a| g.elements().map(move |b| (a, b))).map(|(a, b)| (a, b, f[a] + f[b] - f[g.mul(a, b)])).collect();
    (Cocycle::from_entries(g.order(), m as u32, &e).unwrap(), f)
}

fn random_element(a: &FiniteCrossedProduct, rng: &mut ChaCha8Rng) -> Element {
    let n = a.gamma().modulus() as usize;
    (0..a.dim()).map(|_| if rng.gen_bool(0.3) { Cyclo::root(n, rng.gen_range(0..n as i64)).scale(rng.gen_range(-2..=2)) } else { Cyclo::zero(n) }).collect()
}

fn crossed_products() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let groups: Vec<(&str, Group)> = common::small_groups().into_iter().filter(|(_, g)| g.order() <= 8).collect();
    let trials = 24;
    for trial in 0..trials {
        let (name, g) = &groups[trial % groups.len()];
        let all: Vec<usize> = g.elements().collect();
        let mut set = WSet::cosets(g, &random_subgroup(g, &all, &mut rng)).map_err(|e| e.to_string())?;
        if rng.gen_bool(0.5) {
            set = set.disjoint_union(&WSet::cosets(g, &random_subgroup(g, &all, &mut rng)).unwrap());
        }
        let (gamma, f) = if rng.gen_bool(0.5) { coboundary(g, 4, &mut rng) } else { (Cocycle::trivial(g.order()), vec![0; g.order()]) };
        let at = || format!("trial {trial} ({name}, {} points)", set.len());
        let a = build_crossed_product(g, &set, &gamma).map_err(|e| format!("{}: {e}", at()))?;
        a.check_associativity().map_err(|e| format!("{}: {e}", at()))?;
        a.check_involution().map_err(|e| format!("{}: {e}", at()))?;
        for _ in 0..4 {
            let (x, y, z) = (random_element(&a, &mut rng), random_element(&a, &mut rng), random_element(&a, &mut rng));
            ensure(a.equal(&a.mul(&a.mul(&x, &y), &z), &a.mul(&x, &a.mul(&y, &z))), || format!("{}: (xy)z ≠ x(yz)", at()))?;
            ensure(a.equal(&a.star(&a.mul(&x, &y)), &a.mul(&a.star(&y), &a.star(&x))), || format!("{}: (xy)* ≠ y*x*", at()))?;
            ensure(a.equal(&a.star(&a.star(&x)), &x), || format!("{}: x** ≠ x", at()))?;
        }
        let order = g.order();
        for x in 0..set.len() {
            let wx = set.stabilizer(g, x).len();
            ensure(a.corner_dimension(x) == wx, || format!("{}: corner at {x} has dimension {}", at(), a.corner_dimension(x)))?;
        }
        let dual = orbit_dual(&a, 64).map_err(|e| e.to_string())?;
        let blocks: usize = dual.iter().map(|p| p.dim * p.dim).sum();
        ensure(blocks == set.len() * order, || format!("{}: block sum {blocks} vs {}", at(), set.len() * order))?;
        ensure(dual.len() == a.center_dimension(), || format!("{}: {} dual points, centre {}", at(), dual.len(), a.center_dimension()))?;
        let mut expected_dual = 0;
        for o in set.orbits(g) {
            let stab = set.stabilizer(g, o[0]);
            expected_dual += classes(g, &stab)
                .iter()
                .filter(|c| stab.iter().all(|&y| g.mul(c[0], y) != g.mul(y, c[0]) || gamma.exponent(c[0], y) == gamma.exponent(y, c[0])))
                .count();
        }
        ensure(dual.len() == expected_dual, || format!("{}: {} dual points, {expected_dual} regular classes", at(), dual.len()))?;

        // projection onto the ideal over a normal subgroup of the first stabilizer
        let stab = set.stabilizer(g, 0);
        let normal = random_subgroup(g, &stab, &mut rng);
        if g.is_normal_in(&normal, &stab) {
            let m = gamma.modulus() as usize;
            let iota: Vec<Cyclo> = normal.iter().map(|&v| Cyclo::root(m, -f[v])).collect();
            let s = ideal_summand(&a, 0, &normal, &iota, 64).map_err(|e| format!("{}: {e}", at()))?;
            let (p, c) = (&s.projection, s.scale as i64);
            ensure(a.equal(&a.mul(p, p), &a.scale(p, c)), || format!("{}: P not idempotent", at()))?;
            ensure(a.equal(&a.star(p), p), || format!("{}: P not self-adjoint", at()))?;
            ensure(a.is_central(p), || format!("{}: P not central", at()))?;
        }
    }
    let extra = presets::crossed_preset("crossed-twisted-point").unwrap();
    let a = build_crossed_product(&extra.group, &extra.set, &extra.gamma).map_err(|e| e.to_string())?;
    let dual = orbit_dual(&a, 64).map_err(|e| e.to_string())?;
    ensure(dual.len() == 1 && dual[0].dim == 2 && a.center_dimension() == 1, || "twisted point".into())?;
    Ok(format!("{trials} random orbits plus the twisted point"))
}

fn snf_engine() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for trial in 0..200 {
        let (r, c) = (rng.gen_range(1..=8), rng.gen_range(1..=8));
        let m: common::Mat = (0..r).map(|_| (0..c).map(|_| rng.gen_range(-5..=5)).collect()).collect();
        let big = common::from_mat(&m, c);
        let d = snf(&big);
        let at = || format!("matrix {trial} {m:?}");
        ensure(d.u.mul(&big).mul(&d.v) == d.s, || format!("{}: U·M·V ≠ S", at()))?;
        ensure(d.u.det().magnitude() == &1u32.into() && d.v.det().magnitude() == &1u32.into(), || format!("{}: not unimodular", at()))?;
        let s = common::to_mat(&d.s);
        let off = (0..r).any(|i| (0..c).any(|j| i != j && s[i][j] != 0));
        ensure(!off, || format!("{}: S not diagonal", at()))?;
        let f: Vec<i128> = d.invariant_factors().iter().map(|x| i128::try_from(x).unwrap()).collect();
        ensure(f.windows(2).all(|w| w[1] % w[0] == 0) && f.iter().all(|&x| x > 0), || format!("{}: no divisibility chain {f:?}", at()))?;
        ensure(f == common::naive_invariant_factors(&m, c), || format!("{}: oracle disagrees", at()))?;
        let products: Vec<i128> = f.iter().scan(1i128, |acc, &x| {
            *acc *= x;
            Some(*acc)
        }).collect();
        ensure(products == common::determinantal_divisors(&m, c), || format!("{}: determinantal divisors disagree", at()))?;
    }
    Ok("200 random matrices".into())
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("sp4 results table", sp4_table),
        ("sp4 case 1 K-groups", sp4_case1_k),
        ("Klein bottle K-groups with torsion", klein_bottle),
        ("dim-1 quadrichotomy", dim1_pairs),
        ("cross-check on every preset", cross_check_all),
        ("blow-up fibers, transitivity, splitting", blowup_structure),
        ("free actions against the quotient complex", free_quotient_oracle),
        ("character tables", characters),
        ("finite crossed products", crossed_products),
        ("Smith normal form engine", snf_engine),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = std::time::Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        let ms = start.elapsed().as_millis();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} ({ms} ms)", i + 1),
            Err(e) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {e} ({ms} ms)", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} of {} criteria failed", criteria.len());
        std::process::exit(1);
    }
    println!("all {} criteria passed", criteria.len());
}
