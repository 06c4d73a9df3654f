//! JSON scenario files. Rationals are written as "p/q" strings; plain
//! integers are accepted on input.

use std::fmt;

use bredon_core::pipeline::{CheckLevel, Options, Systems};
use bredon_core::rational::{fmt_q, parse_q, Q};
use bredon_core::scenario::{
    CocycleEntry, CocycleSpec, FamilySpec, GeneratorSpec, IotaEntry, Scenario, SlicedSpec,
};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rat(pub Q);

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_q(&self.0))
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = Rat;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a rational number as \"p/q\" or an integer")
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<Rat, E> {
                parse_q(v).map(Rat).ok_or_else(|| E::custom(format!("not a rational number: {v:?}")))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Rat, E> {
                Ok(Rat(Q::from_integer(v.into())))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Rat, E> {
                Ok(Rat(Q::from_integer(v.into())))
            }
        }
        d.deserialize_any(V)
    }
}

fn rats(v: &[Q]) -> Vec<Rat> {
    v.iter().cloned().map(Rat).collect()
}

fn unrats(v: Vec<Rat>) -> Vec<Q> {
    v.into_iter().map(|r| r.0).collect()
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct GeneratorFile {
    pub name: String,
    pub linear: Vec<Vec<i64>>,
    pub translation: Vec<Rat>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct FamilyFile {
    pub normal: Vec<Rat>,
    pub offsets: Vec<Rat>,
    pub period: Rat,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct CocycleEntryFile {
    pub left: Vec<String>,
    pub right: Vec<String>,
    pub exponent: i64,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct CocycleFile {
    pub modulus: u32,
    #[serde(default)]
    pub entries: Vec<CocycleEntryFile>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct IotaFile {
    pub offset: Rat,
    pub exponent: u32,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct SlicedFile {
    pub reflection: Vec<String>,
    pub family: FamilyFile,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub iota: Vec<IotaFile>,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq, Eq, Default)]
#[serde(rename_all = "kebab-case")]
pub enum SystemsFile {
    Blowup,
    XSide,
    #[default]
    Both,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq, Eq, Default)]
#[serde(rename_all = "kebab-case")]
pub enum CheckFile {
    #[default]
    Fast,
    Full,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq, Eq, Default)]
#[serde(deny_unknown_fields)]
pub struct OptionsFile {
    #[serde(default)]
    pub systems: SystemsFile,
    #[serde(default)]
    pub check_invariants: CheckFile,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_group_order: Option<usize>,
}

fn one() -> u32 {
    1
}

fn is_one(x: &u32) -> bool {
    *x == 1
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub name: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub description: String,
    pub lattice: Vec<Vec<i64>>,
    #[serde(default)]
    pub generators: Vec<GeneratorFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cocycle: Option<CocycleFile>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub families: Vec<FamilyFile>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sliced: Vec<SlicedFile>,
    #[serde(default = "one", skip_serializing_if = "is_one")]
    pub iota_modulus: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub options: Option<OptionsFile>,
}

impl From<&FamilySpec> for FamilyFile {
    fn from(f: &FamilySpec) -> Self {
        FamilyFile { normal: rats(&f.normal), offsets: rats(&f.offsets), period: Rat(f.period.clone()) }
    }
}

impl From<FamilyFile> for FamilySpec {
    fn from(f: FamilyFile) -> Self {
        FamilySpec { normal: unrats(f.normal), offsets: unrats(f.offsets), period: f.period.0 }
    }
}

impl From<&Scenario> for ScenarioFile {
    fn from(s: &Scenario) -> Self {
        ScenarioFile {
            name: s.name.clone(),
            description: s.description.clone(),
            lattice: s.lattice.clone(),
            generators: s
                .generators
                .iter()
                .map(|g| GeneratorFile { name: g.name.clone(), linear: g.linear.clone(), translation: rats(&g.translation) })
                .collect(),
            cocycle: s.cocycle.as_ref().map(|c| CocycleFile {
                modulus: c.modulus,
                entries: c
                    .entries
                    .iter()
                    .map(|e| CocycleEntryFile { left: e.left.clone(), right: e.right.clone(), exponent: e.exponent })
                    .collect(),
            }),
            families: s.families.iter().map(FamilyFile::from).collect(),
            sliced: s
                .sliced
                .iter()
                .map(|l| SlicedFile {
                    reflection: l.reflection.clone(),
                    family: (&l.family).into(),
                    iota: l.iota.iter().map(|e| IotaFile { offset: Rat(e.offset.clone()), exponent: e.exponent }).collect(),
                })
                .collect(),
            iota_modulus: s.iota_modulus,
            options: None,
        }
    }
}

impl ScenarioFile {
    pub fn to_scenario(&self) -> Scenario {
        let f = self.clone();
        Scenario {
            name: f.name,
            description: f.description,
            lattice: f.lattice,
            generators: f
                .generators
                .into_iter()
                .map(|g| GeneratorSpec { name: g.name, linear: g.linear, translation: unrats(g.translation) })
                .collect(),
            cocycle: f.cocycle.map(|c| CocycleSpec {
                modulus: c.modulus,
                entries: c
                    .entries
                    .into_iter()
                    .map(|e| CocycleEntry { left: e.left, right: e.right, exponent: e.exponent })
                    .collect(),
            }),
            families: f.families.into_iter().map(FamilySpec::from).collect(),
            sliced: f
                .sliced
                .into_iter()
                .map(|l| SlicedSpec {
                    reflection: l.reflection,
                    family: l.family.into(),
                    iota: l.iota.into_iter().map(|e| IotaEntry { offset: e.offset.0, exponent: e.exponent }).collect(),
                })
                .collect(),
            iota_modulus: f.iota_modulus,
        }
    }

    /// Options from the file, if any, as pipeline options.
    pub fn options(&self) -> Options {
        let mut o = Options::default();
        if let Some(f) = self.options {
            o.systems = f.systems.into();
            o.check = f.check_invariants.into();
            if let Some(m) = f.max_group_order {
                o.max_group_order = m;
            }
        }
        o
    }
}

impl From<SystemsFile> for Systems {
    fn from(s: SystemsFile) -> Self {
        match s {
            SystemsFile::Blowup => Systems::Blowup,
            SystemsFile::XSide => Systems::XSide,
            SystemsFile::Both => Systems::Both,
        }
    }
}

impl From<CheckFile> for CheckLevel {
    fn from(c: CheckFile) -> Self {
        match c {
            CheckFile::Fast => CheckLevel::Fast,
            CheckFile::Full => CheckLevel::Full,
        }
    }
}

pub fn parse_scenario(text: &str) -> Result<ScenarioFile, serde_json::Error> {
    serde_json::from_str(text)
}

pub fn to_json(s: &Scenario) -> String {
    serde_json::to_string_pretty(&ScenarioFile::from(s)).expect("scenario serialization cannot fail")
}
