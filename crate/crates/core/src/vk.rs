//! The van Kampen group `VK(π, π'; π''_1, …, π''_s)` in its four equivalent
//! presentations, and the checks that they agree.
//!
//! All four forms share the free group `F` on `v2, …, vs` (with `v1 = e`),
//! whose elements `u_ij = v_i^-1 v_j` satisfy `u_ii = e` and
//! `u_ij u_jk = u_ik` by construction.
//!
//! * [`VkForm::Conjugation`]: `π ∐ π' ∐ F` modulo `ψ_i(a) = v_i^-1 φ_i(a) v_i`.
//! * [`VkForm::Copies`]: `π ∐ π'_1 ∐ … ∐ π'_s ∐ F` modulo
//!   `u_ij^-1 [y]_i u_ij = [y]_j` and `ψ_i(a) = [φ_i(a)]_i`.
//! * [`VkForm::Amalgam`]: `(π ∐_{π''_1} π') ∐ F` modulo the conjugation
//!   relations for `i >= 2`.
//! * [`VkForm::AmalgamCopies`]: the `s` amalgams `π ∐_{π''_i} π'` glued along
//!   their common `π`, then `∐ F` modulo `u_ij^-1 (e *_i y) u_ij = e *_j y`.
//!
//! Relation families are imposed for generators `a` of each `π''_i` and `y` of
//! `π'` only; relations on generators imply them on the generated subgroup.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::Bounds;
use crate::error::{Error, Result};
use crate::group_spec::GroupSpec;
use crate::homcount::count_homs_with;
use crate::homo::{relation_evidence, Homo};
use crate::presentation::{coproduct, fibered_coproduct, quotient_by_relations, Presentation};
use crate::word::{GeneratorSymbol, Word};

/// A leg group with its generator images in `pi` and in `pi'`.
pub type LegSpec = (
    GroupSpec,
    BTreeMap<GeneratorSymbol, Word>,
    BTreeMap<GeneratorSymbol, Word>,
);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum VkForm {
    #[serde(rename = "i")]
    Conjugation,
    #[serde(rename = "ii")]
    Copies,
    #[serde(rename = "iii")]
    Amalgam,
    #[serde(rename = "iv")]
    AmalgamCopies,
}

impl VkForm {
    pub const ALL: [VkForm; 4] = [
        VkForm::Conjugation,
        VkForm::Copies,
        VkForm::Amalgam,
        VkForm::AmalgamCopies,
    ];

    pub fn roman(self) -> &'static str {
        match self {
            VkForm::Conjugation => "i",
            VkForm::Copies => "ii",
            VkForm::Amalgam => "iii",
            VkForm::AmalgamCopies => "iv",
        }
    }
}

impl fmt::Display for VkForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.roman())
    }
}

impl FromStr for VkForm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "i" | "conjugation" => Ok(VkForm::Conjugation),
            "ii" | "copies" => Ok(VkForm::Copies),
            "iii" | "amalgam" => Ok(VkForm::Amalgam),
            "iv" | "amalgam-copies" => Ok(VkForm::AmalgamCopies),
            other => Err(Error::input(format!("unknown VK form `{other}`"))),
        }
    }
}

/// The free group `F` of rank `s - 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreeF {
    s: usize,
    presentation: Presentation,
}

pub fn build_f(s: usize) -> Result<FreeF> {
    if s == 0 {
        return Err(Error::input("the VK construction needs s >= 1"));
    }
    let generators = (2..=s)
        .map(|j| GeneratorSymbol::new("", format!("v{j}")))
        .collect::<Result<Vec<_>>>()?;
    Ok(FreeF {
        s,
        presentation: Presentation::new(generators, Vec::new())?,
    })
}

impl FreeF {
    pub fn s(&self) -> usize {
        self.s
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    /// `v_j` as a word; `v_1` is the empty word. Indices are 1-based.
    pub fn v(&self, j: usize) -> Word {
        assert!((1..=self.s).contains(&j), "index {j} out of 1..={}", self.s);
        if j == 1 {
            Word::empty()
        } else {
            Word::gen(&self.presentation.generators()[j - 2])
        }
    }

    /// `u_ij = v_i^-1 v_j`.
    pub fn u(&self, i: usize, j: usize) -> Word {
        self.v(i).inverse().concat(&self.v(j))
    }
}

/// One leg `π''_i` with its maps into `π` and `π'`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VkLeg {
    pub group: Presentation,
    pub psi: Homo,
    pub phi: Homo,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VkData {
    pi: Presentation,
    pi_prime: Presentation,
    legs: Vec<VkLeg>,
}

impl VkData {
    pub fn new(pi: Presentation, pi_prime: Presentation, legs: Vec<VkLeg>) -> Result<Self> {
        if legs.is_empty() {
            return Err(Error::input("the VK construction needs at least one leg"));
        }
        for (i, leg) in legs.iter().enumerate() {
            if leg.psi.source() != &leg.group || leg.phi.source() != &leg.group {
                return Err(Error::InvalidHomo {
                    name: format!("leg {}", i + 1),
                    reason: "map source differs from the leg group".into(),
                });
            }
            if leg.psi.target() != &pi || leg.phi.target() != &pi_prime {
                return Err(Error::InvalidHomo {
                    name: format!("leg {}", i + 1),
                    reason: "map targets differ from π and π'".into(),
                });
            }
        }
        Ok(VkData { pi, pi_prime, legs })
    }

    /// Builds the data from concrete groups; each map is given by generator
    /// images and checked by evaluation.
    pub fn from_specs(pi: &GroupSpec, pi_prime: &GroupSpec, legs: Vec<LegSpec>) -> Result<Self> {
        let legs = legs
            .into_iter()
            .enumerate()
            .map(|(i, (k, psi, phi))| {
                Ok(VkLeg {
                    group: k.presentation().clone(),
                    psi: Homo::between(&format!("psi_{}", i + 1), &k, pi, psi)?,
                    phi: Homo::between(&format!("phi_{}", i + 1), &k, pi_prime, phi)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        VkData::new(
            pi.presentation().clone(),
            pi_prime.presentation().clone(),
            legs,
        )
    }

    /// All maps trivial.
    pub fn trivial_legs(pi: &GroupSpec, pi_prime: &GroupSpec, legs: &[GroupSpec]) -> Result<Self> {
        VkData::new(
            pi.presentation().clone(),
            pi_prime.presentation().clone(),
            legs.iter()
                .map(|k| VkLeg {
                    group: k.presentation().clone(),
                    psi: Homo::trivial(k.presentation(), pi.presentation()),
                    phi: Homo::trivial(k.presentation(), pi_prime.presentation()),
                })
                .collect(),
        )
    }

    pub fn pi(&self) -> &Presentation {
        &self.pi
    }

    pub fn pi_prime(&self) -> &Presentation {
        &self.pi_prime
    }

    pub fn legs(&self) -> &[VkLeg] {
        &self.legs
    }

    pub fn s(&self) -> usize {
        self.legs.len()
    }
}

/// A built VK group with the canonical images of `π` and `π'` in it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VkGroup {
    pub form: VkForm,
    pub presentation: Presentation,
    pub pi_map: BTreeMap<GeneratorSymbol, Word>,
    pub pi_prime_map: BTreeMap<GeneratorSymbol, Word>,
}

fn tag_map(p: &Presentation, tags: &[&str]) -> BTreeMap<GeneratorSymbol, Word> {
    p.generators()
        .iter()
        .map(|g| {
            let mut s = g.clone();
            for t in tags {
                s = s.under(t);
            }
            (g.clone(), Word::gen(&s))
        })
        .collect()
}

fn copy_tag(i: usize) -> String {
    format!("pi'{i}")
}

fn amalgam_tag(i: usize) -> String {
    format!("fc{i}")
}

/// `u_ij^-1 [y]_i u_ij = [y]_j` for every ordered pair `i != j` and every
/// generator `y`, where `copy(i, y)` names `y` inside copy `i`.
fn conjugation_family(
    f: &FreeF,
    gens: &[GeneratorSymbol],
    copy: impl Fn(usize, &GeneratorSymbol) -> Word,
) -> Vec<(Word, Word)> {
    let mut pairs = Vec::new();
    for i in 1..=f.s() {
        for j in 1..=f.s() {
            if i == j {
                continue;
            }
            let u = f.u(i, j).under("F");
            for y in gens {
                pairs.push((u.conjugating(&copy(i, y)), copy(j, y)));
            }
        }
    }
    pairs
}

pub fn vk_build(data: &VkData, form: VkForm) -> Result<VkGroup> {
    let s = data.s();
    let f = build_f(s)?;
    let fp = f.presentation();
    let v = |i: usize| f.v(i).under("F");
    match form {
        VkForm::Conjugation => {
            let base = coproduct(&[("pi", &data.pi), ("pi'", &data.pi_prime), ("F", fp)])?;
            let mut pairs = Vec::new();
            for (idx, leg) in data.legs.iter().enumerate() {
                for a in leg.group.generators() {
                    let lhs = leg.psi.image_of(a).under("pi");
                    let rhs = v(idx + 1).conjugating(&leg.phi.image_of(a).under("pi'"));
                    pairs.push((lhs, rhs));
                }
            }
            Ok(VkGroup {
                form,
                presentation: quotient_by_relations(&base, &pairs)?,
                pi_map: tag_map(&data.pi, &["pi"]),
                pi_prime_map: tag_map(&data.pi_prime, &["pi'"]),
            })
        }
        VkForm::Copies => {
            let tags: Vec<String> = (1..=s).map(copy_tag).collect();
            let mut parts: Vec<(&str, &Presentation)> = vec![("pi", &data.pi)];
            parts.extend(tags.iter().map(|t| (t.as_str(), &data.pi_prime)));
            parts.push(("F", fp));
            let base = coproduct(&parts)?;
            let mut pairs = conjugation_family(&f, data.pi_prime.generators(), |i, y| {
                Word::gen(&y.under(&copy_tag(i)))
            });
            for (idx, leg) in data.legs.iter().enumerate() {
                for a in leg.group.generators() {
                    let lhs = leg.psi.image_of(a).under("pi");
                    let rhs = leg.phi.image_of(a).under(&copy_tag(idx + 1));
                    pairs.push((lhs, rhs));
                }
            }
            Ok(VkGroup {
                form,
                presentation: quotient_by_relations(&base, &pairs)?,
                pi_map: tag_map(&data.pi, &["pi"]),
                pi_prime_map: tag_map(&data.pi_prime, &[&copy_tag(1)]),
            })
        }
        VkForm::Amalgam => {
            let first = &data.legs[0];
            let amalgam = fibered_coproduct(&data.pi, &data.pi_prime, &first.psi, &first.phi)?;
            let base = coproduct(&[("fc", &amalgam), ("F", fp)])?;
            let mut pairs = Vec::new();
            for (idx, leg) in data.legs.iter().enumerate().skip(1) {
                for a in leg.group.generators() {
                    let lhs = leg.psi.image_of(a).under("l").under("fc");
                    let rhs = v(idx + 1).conjugating(&leg.phi.image_of(a).under("r").under("fc"));
                    pairs.push((lhs, rhs));
                }
            }
            Ok(VkGroup {
                form,
                presentation: quotient_by_relations(&base, &pairs)?,
                pi_map: tag_map(&data.pi, &["l", "fc"]),
                pi_prime_map: tag_map(&data.pi_prime, &["r", "fc"]),
            })
        }
        VkForm::AmalgamCopies => {
            let amalgams = data
                .legs
                .iter()
                .map(|leg| fibered_coproduct(&data.pi, &data.pi_prime, &leg.psi, &leg.phi))
                .collect::<Result<Vec<_>>>()?;
            let tags: Vec<String> = (1..=s).map(amalgam_tag).collect();
            let mut parts: Vec<(&str, &Presentation)> = tags
                .iter()
                .map(String::as_str)
                .zip(amalgams.iter())
                .collect();
            parts.push(("F", fp));
            let base = coproduct(&parts)?;
            // Glue the copies of π along the identity.
            let mut pairs = Vec::new();
            for i in 2..=s {
                for x in data.pi.generators() {
                    pairs.push((
                        Word::gen(&x.under("l").under(&amalgam_tag(1))),
                        Word::gen(&x.under("l").under(&amalgam_tag(i))),
                    ));
                }
            }
            pairs.extend(conjugation_family(
                &f,
                data.pi_prime.generators(),
                |i, y| Word::gen(&y.under("r").under(&amalgam_tag(i))),
            ));
            Ok(VkGroup {
                form,
                presentation: quotient_by_relations(&base, &pairs)?,
                pi_map: tag_map(&data.pi, &["l", &amalgam_tag(1)]),
                pi_prime_map: tag_map(&data.pi_prime, &["r", &amalgam_tag(1)]),
            })
        }
    }
}

/// One named check inside a verification report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VkReport {
    /// Form label to degree to hom count.
    pub counts: BTreeMap<String, BTreeMap<usize, u64>>,
    pub maps_checked: bool,
    pub agree: bool,
    pub checks: Vec<Check>,
}

impl VkReport {
    pub fn passed(&self) -> bool {
        self.agree && self.checks.iter().all(|c| c.passed)
    }
}

fn counts_agree(counts: &BTreeMap<String, BTreeMap<usize, u64>>) -> bool {
    let mut it = counts.values();
    match it.next() {
        Some(first) => it.all(|c| c == first),
        None => true,
    }
}

fn count_table(
    builds: &[(String, Presentation)],
    degrees: &[usize],
    bounds: &Bounds,
) -> Result<BTreeMap<String, BTreeMap<usize, u64>>> {
    let jobs: Vec<(usize, usize)> = (0..builds.len())
        .flat_map(|b| degrees.iter().map(move |&d| (b, d)))
        .collect();
    let results = jobs
        .par_iter()
        .map(|&(b, d)| count_homs_with(&builds[b].1, d, bounds).map(|n| (b, d, n)))
        .collect::<Result<Vec<_>>>()?;
    let mut table: BTreeMap<String, BTreeMap<usize, u64>> = BTreeMap::new();
    for (b, d, n) in results {
        table.entry(builds[b].0.clone()).or_default().insert(d, n);
    }
    Ok(table)
}

/// The two sides of the copy lemma: `π' ∐ F` against `s` copies of `π'` and
/// `F` glued by `u_ij^-1 [y]_i u_ij = [y]_j`, with the explicit maps
/// `y ↦ [y]_1` and `[y]_j ↦ v_j^-1 y v_j` in between.
pub struct CopySides {
    pub single: Presentation,
    pub copies: Presentation,
    pub to_copies: BTreeMap<GeneratorSymbol, Word>,
    pub to_single: BTreeMap<GeneratorSymbol, Word>,
}

pub fn copy_sides(pi_prime: &Presentation, s: usize) -> Result<CopySides> {
    let f = build_f(s)?;
    let fp = f.presentation();
    let single = coproduct(&[("pi'", pi_prime), ("F", fp)])?;
    let tags: Vec<String> = (1..=s).map(copy_tag).collect();
    let mut parts: Vec<(&str, &Presentation)> =
        tags.iter().map(|t| (t.as_str(), pi_prime)).collect();
    parts.push(("F", fp));
    let copies = quotient_by_relations(
        &coproduct(&parts)?,
        &conjugation_family(&f, pi_prime.generators(), |i, y| {
            Word::gen(&y.under(&copy_tag(i)))
        }),
    )?;

    let mut to_copies = BTreeMap::new();
    for y in pi_prime.generators() {
        to_copies.insert(y.under("pi'"), Word::gen(&y.under(&copy_tag(1))));
    }
    for g in fp.generators() {
        to_copies.insert(g.under("F"), Word::gen(&g.under("F")));
    }
    let mut to_single = BTreeMap::new();
    for j in 1..=s {
        let vj = f.v(j).under("F");
        for y in pi_prime.generators() {
            to_single.insert(
                y.under(&copy_tag(j)),
                vj.conjugating(&Word::gen(&y.under("pi'"))),
            );
        }
    }
    for g in fp.generators() {
        to_single.insert(g.under("F"), Word::gen(&g.under("F")));
    }
    Ok(CopySides {
        single,
        copies,
        to_copies,
        to_single,
    })
}

/// Checks that `g^-1 · back(forth(g))` is trivial in `p` for every generator.
fn round_trip_check(
    name: &str,
    p: &Presentation,
    forth: &BTreeMap<GeneratorSymbol, Word>,
    back: &BTreeMap<GeneratorSymbol, Word>,
    degrees: &[usize],
    bounds: &Bounds,
) -> Result<Check> {
    for g in p.generators() {
        let there = forth[g].substitute(back);
        let w = Word::gen(g).inverse().concat(&there);
        if relation_evidence(p, &w, degrees, bounds)?.is_none() {
            return Ok(Check {
                name: name.into(),
                passed: false,
                detail: format!("{g} returns as {there}"),
            });
        }
    }
    Ok(Check {
        name: name.into(),
        passed: true,
        detail: format!("identity on all {} generators", p.num_generators()),
    })
}

/// Builds both sides of the copy lemma, checks the explicit maps are
/// homomorphisms that are mutually inverse on generators, and compares hom
/// counts at each degree.
pub fn verify_copy_lemma(
    pi_prime: &GroupSpec,
    s: usize,
    degrees: &[usize],
    bounds: &Bounds,
) -> Result<VkReport> {
    let sides = copy_sides(pi_prime.presentation(), s)?;
    let mut checks = Vec::new();
    for (name, src, dst, images) in [
        (
            "single -> copies is a homomorphism",
            &sides.single,
            &sides.copies,
            &sides.to_copies,
        ),
        (
            "copies -> single is a homomorphism",
            &sides.copies,
            &sides.single,
            &sides.to_single,
        ),
    ] {
        let check = match Homo::checked(name, src, dst, images.clone(), degrees, bounds) {
            Ok(h) => Check {
                name: name.into(),
                passed: true,
                detail: format!("{:?}", h.validity()),
            },
            Err(Error::InvalidHomo { reason, .. }) => Check {
                name: name.into(),
                passed: false,
                detail: reason,
            },
            Err(e) => return Err(e),
        };
        checks.push(check);
    }
    checks.push(round_trip_check(
        "copies ∘ single = id",
        &sides.single,
        &sides.to_copies,
        &sides.to_single,
        degrees,
        bounds,
    )?);
    checks.push(round_trip_check(
        "single ∘ copies = id",
        &sides.copies,
        &sides.to_single,
        &sides.to_copies,
        degrees,
        bounds,
    )?);
    let maps_checked = checks.iter().all(|c| c.passed);
    let counts = count_table(
        &[
            ("i".to_string(), sides.single),
            ("ii".to_string(), sides.copies),
        ],
        degrees,
        bounds,
    )?;
    Ok(VkReport {
        agree: counts_agree(&counts),
        counts,
        maps_checked,
        checks,
    })
}

/// Builds all four forms and compares their hom counts at each degree.
pub fn verify_vk_forms(data: &VkData, degrees: &[usize], bounds: &Bounds) -> Result<VkReport> {
    let builds = VkForm::ALL
        .par_iter()
        .map(|&form| vk_build(data, form).map(|g| (form.roman().to_string(), g.presentation)))
        .collect::<Result<Vec<_>>>()?;
    let counts = count_table(&builds, degrees, bounds)?;
    let agree = counts_agree(&counts);
    Ok(VkReport {
        checks: vec![Check {
            name: "four forms agree".into(),
            passed: agree,
            detail: format!("degrees {degrees:?}"),
        }],
        agree,
        counts,
        maps_checked: false,
    })
}
