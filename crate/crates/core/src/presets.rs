//! Built-in scenarios.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::rational::{q, qf, Q};
use crate::scenario::{
    CocycleEntry, CocycleSpec, FamilySpec, GeneratorSpec, IotaEntry, Scenario, SlicedSpec,
};

fn gen(name: &str, linear: &[&[i64]], translation: &[Q]) -> GeneratorSpec {
    GeneratorSpec {
        name: name.into(),
        linear: linear.iter().map(|r| r.to_vec()).collect(),
        translation: translation.to_vec(),
    }
}

fn family(normal: &[i64], offsets: &[i64], period: i64) -> FamilySpec {
    FamilySpec { normal: normal.iter().map(|&x| q(x)).collect(), offsets: offsets.iter().map(|&x| q(x)).collect(), period: q(period) }
}

fn word(w: &str) -> Vec<String> {
    w.split_whitespace().map(String::from).collect()
}

fn sliced(reflection: &str, f: FamilySpec) -> SlicedSpec {
    SlicedSpec { reflection: word(reflection), family: f, iota: Vec::new() }
}

fn scenario(name: &str, description: &str, lattice: &[&[i64]], generators: Vec<GeneratorSpec>) -> Scenario {
    Scenario {
        name: name.into(),
        description: description.into(),
        lattice: lattice.iter().map(|r| r.to_vec()).collect(),
        generators,
        cocycle: None,
        families: Vec::new(),
        sliced: Vec::new(),
        iota_modulus: 1,
    }
}

const EVEN2: &[&[i64]] = &[&[2, 0], &[0, 2]];

fn swap() -> GeneratorSpec {
    gen("s", &[&[0, 1], &[1, 0]], &[q(0), q(0)])
}
fn flip() -> GeneratorSpec {
    gen("t", &[&[1, 0], &[0, -1]], &[q(0), q(0)])
}
fn minus() -> GeneratorSpec {
    gen("m", &[&[-1, 0], &[0, -1]], &[q(0), q(0)])
}

fn sp4(case: u8) -> Scenario {
    let name = alloc::format!("sp4-case{case}");
    let diag = || family(&[1, -1], &[0], 2);
    let anti = || family(&[1, 1], &[0], 2);
    let horiz = || family(&[0, 1], &[0], 2);
    let vert = || family(&[1, 0], &[0], 2);
    let (desc, gens, loci): (&str, Vec<GeneratorSpec>, Vec<SlicedSpec>) = match case {
        1 => (
            "dihedral group of order 8, all four reflection loci sliced",
            vec![swap(), flip()],
            vec![sliced("s", diag()), sliced("t s t", anti()), sliced("t", horiz()), sliced("s t s", vert())],
        ),
        2 => ("dihedral group of order 8, diagonal loci sliced", vec![swap(), flip()], vec![sliced("s", diag()), sliced("t s t", anti())]),
        3 => ("order 2 swap with its diagonal sliced", vec![swap()], vec![sliced("s", diag())]),
        4 => ("{±1, ±t} with the horizontal locus of t sliced", vec![minus(), flip()], vec![sliced("t", horiz())]),
        5 => ("{±1, ±t}, nothing sliced", vec![minus(), flip()], Vec::new()),
        6 => ("order 2 reflection with its locus sliced", vec![flip()], vec![sliced("t", horiz())]),
        7 => ("order 2 reflection, nothing sliced", vec![flip()], Vec::new()),
        _ => ("trivial group", Vec::new(), Vec::new()),
    };
    let mut s = scenario(&name, desc, EVEN2, gens);
    s.sliced = loci;
    s
}

fn dim1(case: char) -> Scenario {
    let shift = gen("u", &[&[1]], &[q(2)]);
    let refl = gen("r", &[&[-1]], &[q(0)]);
    let mut s = scenario(
        &alloc::format!("dim1-case-{case}"),
        match case {
            'a' => "dihedral action on a circle of length 6, nothing sliced",
            'b' => "dihedral action on a circle of length 6, one orbit of fixed points sliced",
            _ => "dihedral action on a circle of length 6, every fixed point sliced",
        },
        &[&[6]],
        vec![shift, refl],
    );
    match case {
        'b' => s.sliced = vec![sliced("r", family(&[1], &[0], 6))],
        'c' => s.sliced = vec![sliced("r", family(&[1], &[0], 3))],
        _ => {}
    }
    s
}

fn dim1_free() -> Scenario {
    scenario("dim1-free", "rotation of order 3 on a circle", &[&[6]], vec![gen("u", &[&[1]], &[q(2)])])
}

fn klein() -> Scenario {
    scenario(
        "klein-bottle",
        "free glide reflection; quotient is a Klein bottle",
        EVEN2,
        vec![gen("g", &[&[1, 0], &[0, -1]], &[q(1), q(0)])],
    )
}

fn discrete_series(k: i64) -> Scenario {
    scenario(
        &alloc::format!("discrete-series-{k}"),
        "free action of a cyclic group of translations",
        EVEN2,
        vec![gen("a", &[&[1, 0], &[0, 1]], &[qf(2, k), q(0)])],
    )
}

fn discrete_series_twisted() -> Scenario {
    let mut s = scenario(
        "discrete-series-twisted",
        "free action of half-period translations with a nontrivial cocycle",
        EVEN2,
        vec![gen("a", &[&[1, 0], &[0, 1]], &[q(1), q(0)]), gen("b", &[&[1, 0], &[0, 1]], &[q(0), q(1)])],
    );
    let entry = |l: &str, r: &str| CocycleEntry { left: word(l), right: word(r), exponent: 1 };
    s.cocycle = Some(CocycleSpec {
        modulus: 2,
        entries: vec![entry("b", "a"), entry("b", "a b"), entry("a b", "a"), entry("a b", "a b")],
    });
    s
}

fn torus3(inversion: bool) -> Scenario {
    let lat: &[&[i64]] = &[&[2, 0, 0], &[0, 2, 0], &[0, 0, 2]];
    let gens = if inversion { vec![gen("m", &[&[-1, 0, 0], &[0, -1, 0], &[0, 0, -1]], &[q(0), q(0), q(0)])] } else { Vec::new() };
    scenario(
        if inversion { "t3-inversion" } else { "t3-trivial" },
        if inversion { "inversion on the three-torus" } else { "three-torus, trivial group" },
        lat,
        gens,
    )
}

/// A sliced locus with a nontrivial ι: the sign character on one of the two
/// fixed circles of a reflection.
fn sp4_case6_signed() -> Scenario {
    let mut s = sp4(6);
    s.name = "sp4-case6-signed".into();
    s.description = "case 6 with ι = −1 on the sliced circle".into();
    s.iota_modulus = 2;
    s.sliced[0].iota = vec![IotaEntry { offset: q(0), exponent: 1 }];
    s
}

/// Names of the built-in scenarios in catalog order.
pub fn names() -> Vec<String> {
    let mut v: Vec<String> = (1..=8).map(|i| alloc::format!("sp4-case{i}")).collect();
    v.extend(["dim1-case-a", "dim1-case-b", "dim1-case-c", "dim1-free", "klein-bottle"].map(String::from));
    v.extend(["discrete-series-2", "discrete-series-3", "discrete-series-twisted"].map(String::from));
    v.extend(["sp4-case6-signed", "t3-trivial", "t3-inversion"].map(String::from));
    v
}

pub fn preset(name: &str) -> Option<Scenario> {
    if let Some(c) = name.strip_prefix("sp4-case") {
        if let Ok(i) = c.parse::<u8>() {
            if (1..=8).contains(&i) && c == i.to_string() {
                return Some(sp4(i));
            }
        }
    }
    Some(match name {
        "dim1-case-a" => dim1('a'),
        "dim1-case-b" => dim1('b'),
        "dim1-case-c" => dim1('c'),
        "dim1-free" => dim1_free(),
        "klein-bottle" => klein(),
        "discrete-series-2" => discrete_series(2),
        "discrete-series-3" => discrete_series(3),
        "discrete-series-twisted" => discrete_series_twisted(),
        "sp4-case6-signed" => sp4_case6_signed(),
        "t3-trivial" => torus3(false),
        "t3-inversion" => torus3(true),
        _ => return None,
    })
}

pub fn all() -> Vec<Scenario> {
    names().iter().map(|n| preset(n).unwrap()).collect()
}

/// A finite orbit with optional ideal data at its first point, for the
/// crossed-product diagnostics.
#[derive(Clone, Debug)]
pub struct CrossedExample {
    pub name: String,
    pub description: String,
    pub group: crate::groups::Group,
    pub set: crate::crossed::WSet,
    pub gamma: crate::groups::Cocycle,
    /// Normal subgroup of the first point's stabilizer and ι on it.
    pub ideal: Option<(Vec<usize>, Vec<crate::cyclo::Cyclo>)>,
}

fn table_group(order: usize, mul: impl Fn(usize, usize) -> usize, gens: Vec<usize>) -> crate::groups::Group {
    let t = (0..order).flat_map(|a| (0..order).map(move |b| (a, b))).map(|(a, b)| mul(a, b)).collect();
    crate::groups::Group::from_table(order, t, gens).unwrap()
}

fn crossed_example(name: &str) -> Option<CrossedExample> {
    use crate::crossed::WSet;
    use crate::cyclo::Cyclo;
    use crate::groups::Cocycle;
    let c2 = || table_group(2, |a, b| a ^ b, vec![1]);
    // element 2a + b ↔ (a, b); with t = (0, 1)
    let v4 = || table_group(4, |a, b| a ^ b, vec![2, 1]);
    let ones = |k: usize| vec![Cyclo::int(1, 1); k];
    let (desc, group, set, gamma, ideal): (&str, _, _, _, Option<(Vec<usize>, Vec<Cyclo>)>) = match name {
        "crossed-point-c2" => {
            let g = c2();
            let s = WSet::cosets(&g, &[0, 1]).ok()?;
            ("a point with an order 2 group: the group algebra", g, s, Cocycle::trivial(2), None)
        }
        "crossed-free-c2" => {
            let g = c2();
            let s = WSet::cosets(&g, &[0]).ok()?;
            ("a free orbit of an order 2 group: a full matrix algebra", g, s, Cocycle::trivial(2), None)
        }
        "crossed-twisted-point" => {
            let g = v4();
            let s = WSet::cosets(&g, &[0, 1, 2, 3]).ok()?;
            let e: Vec<(usize, usize, i64)> =
                (0..4).flat_map(|x| (0..4).map(move |y| (x, y))).filter(|&(x, y)| x & 1 == 1 && y >> 1 == 1).map(|(x, y)| (x, y, 1)).collect();
            ("a point with C2×C2 and the nontrivial cocycle class", g, s, Cocycle::from_entries(4, 2, &e).ok()?, None)
        }
        "crossed-half-orbit" => {
            let g = v4();
            let s = WSet::cosets(&g, &[0, 1]).ok()?;
            ("C2×C2 acting on its quotient by {1, t}", g, s, Cocycle::trivial(4), None)
        }
        "crossed-ideal" => {
            let g = v4();
            let s = WSet::cosets(&g, &[0, 1, 2, 3]).ok()?;
            ("stabilizer {±1, ±t} with scalar subgroup {1, t} and trivial ι", g, s, Cocycle::trivial(4), Some((vec![0, 1], ones(2))))
        }
        _ => return None,
    };
    Some(CrossedExample { name: name.into(), description: desc.into(), group, set, gamma, ideal })
}

pub fn crossed_names() -> Vec<String> {
    ["crossed-point-c2", "crossed-free-c2", "crossed-twisted-point", "crossed-half-orbit", "crossed-ideal"]
        .map(String::from)
        .to_vec()
}

pub fn crossed_preset(name: &str) -> Option<CrossedExample> {
    crossed_example(name)
}
