//! Assembly of the fundamental group of a scheme from its dual graph.
//!
//! Results are built as [`NoohiExpression`] trees whose leaves name groups in
//! a [`SchemeConfig`]. Lowering a tree produces a presentation together with,
//! for every group named in it, the images of that group's generators; those
//! maps are what the van Kampen nodes glue along.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group_spec::GroupSpec;
use crate::homo::Homo;
use crate::presentation::{coproduct, quotient_by_relations, Presentation};
use crate::scheme::{
    build_t, build_t_complement, free_rank, intersection, is_valid_order, SchemeConfig,
};
use crate::tietze::tietze_simplify;
use crate::vk::{vk_build, VkData, VkForm, VkLeg};
use crate::word::{GeneratorSymbol, Word};

/// A group declared in the configuration.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "id", rename_all = "snake_case")]
pub enum GroupRef {
    Component(String),
    Singular(String),
    Branch(String),
}

impl GroupRef {
    pub fn resolve<'a>(&self, cfg: &'a SchemeConfig) -> Result<&'a GroupSpec> {
        match self {
            GroupRef::Component(id) => Ok(&cfg.component(id)?.group),
            GroupRef::Singular(id) => Ok(&cfg.singular(id)?.group),
            GroupRef::Branch(id) => cfg
                .branches
                .iter()
                .find(|b| &b.id == id)
                .map(|b| &b.group)
                .ok_or_else(|| Error::input(format!("unknown branch `{id}`"))),
        }
    }
}

impl fmt::Display for GroupRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupRef::Component(id) => write!(f, "component:{id}"),
            GroupRef::Singular(id) => write!(f, "singular:{id}"),
            GroupRef::Branch(id) => write!(f, "branch:{id}"),
        }
    }
}

/// A map out of a leg group, given as words in the generators of `via`,
/// which must be a group already present in the target subtree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LegMap {
    pub via: GroupRef,
    pub images: BTreeMap<GeneratorSymbol, Word>,
}

impl LegMap {
    fn identity(r: &GroupRef, g: &GroupSpec) -> Self {
        LegMap {
            via: r.clone(),
            images: g
                .generators()
                .iter()
                .map(|x| (x.clone(), Word::gen(x)))
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VkLegExpr {
    pub group: GroupRef,
    pub psi: LegMap,
    pub phi: LegMap,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "node", rename_all = "snake_case")]
pub enum NoohiExpression {
    Atom {
        group: GroupRef,
    },
    FreeGroup {
        rank: usize,
    },
    Coproduct {
        children: Vec<NoohiExpression>,
    },
    /// Coproduct of the legs with the copies of `base` in them identified.
    FiberedCoproduct {
        base: GroupRef,
        legs: Vec<NoohiExpression>,
    },
    /// Relations are words in the lowered child's generators.
    QuotientByRelations {
        child: Box<NoohiExpression>,
        relations: Vec<(Word, Word)>,
    },
    Vk {
        form: VkForm,
        pi: Box<NoohiExpression>,
        pi_prime: Box<NoohiExpression>,
        legs: Vec<VkLegExpr>,
    },
}

type Images = BTreeMap<GeneratorSymbol, Word>;

/// A lowered expression with the images of every group it names.
#[derive(Debug, Clone)]
pub struct Lowered {
    pub presentation: Presentation,
    pub maps: BTreeMap<GroupRef, Images>,
}

fn retag(images: &Images, tag: &str) -> Images {
    images
        .iter()
        .map(|(g, w)| (g.clone(), w.under(tag)))
        .collect()
}

fn compose(images: &Images, then: &Images) -> Images {
    images
        .iter()
        .map(|(g, w)| (g.clone(), w.substitute(then)))
        .collect()
}

fn lower_children(
    children: &[NoohiExpression],
    cfg: &SchemeConfig,
) -> Result<(Presentation, Vec<Lowered>, Vec<String>)> {
    let lowered = children
        .iter()
        .map(|c| lower(c, cfg))
        .collect::<Result<Vec<_>>>()?;
    let tags: Vec<String> = (1..=children.len()).map(|i| format!("c{i}")).collect();
    let parts: Vec<(&str, &Presentation)> = tags
        .iter()
        .map(String::as_str)
        .zip(lowered.iter().map(|l| &l.presentation))
        .collect();
    Ok((coproduct(&parts)?, lowered, tags))
}

fn merge_tagged(lowered: &[Lowered], tags: &[String]) -> BTreeMap<GroupRef, Images> {
    let mut maps = BTreeMap::new();
    for (l, t) in lowered.iter().zip(tags) {
        for (r, images) in &l.maps {
            maps.entry(r.clone()).or_insert_with(|| retag(images, t));
        }
    }
    maps
}

fn leg_homo(
    name: &str,
    leg: &VkLegExpr,
    map: &LegMap,
    side: &Lowered,
    cfg: &SchemeConfig,
) -> Result<Homo> {
    let source = leg.group.resolve(cfg)?.presentation();
    let via = map.via.resolve(cfg)?.presentation();
    for w in map.images.values() {
        via.check_word(w, name)?;
    }
    let through = side.maps.get(&map.via).ok_or_else(|| {
        Error::input(format!(
            "{name}: `{}` does not occur on that side of the van Kampen node",
            map.via
        ))
    })?;
    Homo::into_presentation(
        name,
        source,
        &side.presentation,
        compose(&map.images, through),
    )
}

/// Lowers an expression to a presentation, tracking group images.
pub fn lower(expr: &NoohiExpression, cfg: &SchemeConfig) -> Result<Lowered> {
    match expr {
        NoohiExpression::Atom { group } => {
            let g = group.resolve(cfg)?;
            Ok(Lowered {
                presentation: g.presentation().clone(),
                maps: [(group.clone(), LegMap::identity(group, g).images)]
                    .into_iter()
                    .collect(),
            })
        }
        NoohiExpression::FreeGroup { rank } => Ok(Lowered {
            presentation: Presentation::free("", *rank)?,
            maps: BTreeMap::new(),
        }),
        NoohiExpression::Coproduct { children } => {
            let (presentation, lowered, tags) = lower_children(children, cfg)?;
            Ok(Lowered {
                presentation,
                maps: merge_tagged(&lowered, &tags),
            })
        }
        NoohiExpression::FiberedCoproduct { base, legs } => {
            let (joined, lowered, tags) = lower_children(legs, cfg)?;
            let base_images = lowered
                .iter()
                .zip(&tags)
                .map(|(l, t)| {
                    l.maps.get(base).map(|m| retag(m, t)).ok_or_else(|| {
                        Error::input(format!(
                            "fibered coproduct leg `{t}` does not contain `{base}`"
                        ))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            let mut pairs = Vec::new();
            if let Some((first, rest)) = base_images.split_first() {
                for other in rest {
                    for (g, w) in first {
                        pairs.push((w.clone(), other[g].clone()));
                    }
                }
            }
            Ok(Lowered {
                presentation: quotient_by_relations(&joined, &pairs)?,
                maps: merge_tagged(&lowered, &tags),
            })
        }
        NoohiExpression::QuotientByRelations { child, relations } => {
            let l = lower(child, cfg)?;
            Ok(Lowered {
                presentation: quotient_by_relations(&l.presentation, relations)?,
                maps: l.maps,
            })
        }
        NoohiExpression::Vk {
            form,
            pi,
            pi_prime,
            legs,
        } => {
            let (lp, lq) = (lower(pi, cfg)?, lower(pi_prime, cfg)?);
            let vk_legs = legs
                .iter()
                .enumerate()
                .map(|(i, leg)| {
                    Ok(VkLeg {
                        group: leg.group.resolve(cfg)?.presentation().clone(),
                        psi: leg_homo(&format!("psi[{}]", i + 1), leg, &leg.psi, &lp, cfg)?,
                        phi: leg_homo(&format!("phi[{}]", i + 1), leg, &leg.phi, &lq, cfg)?,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            let data = VkData::new(lp.presentation.clone(), lq.presentation.clone(), vk_legs)?;
            let built = vk_build(&data, *form)?;
            let mut maps: BTreeMap<GroupRef, Images> = lp
                .maps
                .iter()
                .map(|(r, m)| (r.clone(), compose(m, &built.pi_map)))
                .collect();
            for (r, m) in &lq.maps {
                maps.entry(r.clone())
                    .or_insert_with(|| compose(m, &built.pi_prime_map));
            }
            for (leg, vl) in legs.iter().zip(data.legs()) {
                maps.entry(leg.group.clone())
                    .or_insert_with(|| compose(vl.psi.images(), &built.pi_map));
            }
            Ok(Lowered {
                presentation: built.presentation,
                maps,
            })
        }
    }
}

/// One entry of the construction trace.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivationStep {
    /// The construction rule applied.
    pub theorem: String,
    pub node: String,
    pub inputs: Vec<String>,
}

fn step(theorem: &str, node: String, inputs: Vec<String>) -> DerivationStep {
    DerivationStep {
        theorem: theorem.into(),
        node,
        inputs,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pi1Result {
    pub expression: NoohiExpression,
    pub presentation: Presentation,
    pub derivation: Vec<DerivationStep>,
}

impl Pi1Result {
    /// The lowering of the expression before simplification.
    pub fn raw_presentation(&self, cfg: &SchemeConfig) -> Result<Presentation> {
        Ok(lower(&self.expression, cfg)?.presentation)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pi1Options {
    pub form: VkForm,
    pub simplify: bool,
    /// Overrides the splitting order of the recursive route.
    pub order: Option<Vec<String>>,
}

impl Default for Pi1Options {
    fn default() -> Self {
        Pi1Options {
            form: VkForm::Conjugation,
            simplify: true,
            order: None,
        }
    }
}

fn scope(cfg: &SchemeConfig) -> String {
    let ids: Vec<&str> = cfg.singulars.iter().map(|s| s.id.as_str()).collect();
    format!("pi1[{}]", ids.join(","))
}

fn finish(
    expression: NoohiExpression,
    derivation: Vec<DerivationStep>,
    cfg: &SchemeConfig,
    opts: &Pi1Options,
) -> Result<Pi1Result> {
    let raw = lower(&expression, cfg)?.presentation;
    Ok(Pi1Result {
        expression,
        presentation: if opts.simplify {
            tietze_simplify(&raw)
        } else {
            raw
        },
        derivation,
    })
}

fn regular_expr(cfg: &SchemeConfig) -> (NoohiExpression, Vec<DerivationStep>) {
    let c = &cfg.components[0].id;
    (
        NoohiExpression::Atom {
            group: GroupRef::Component(c.clone()),
        },
        vec![step("regular-scheme", scope(cfg), vec![c.clone()])],
    )
}

/// Per component a VK group over the singular group along that component's
/// branches, then all of them glued along their common copy of the singular
/// group.
fn connected_expr(cfg: &SchemeConfig, form: VkForm) -> (NoohiExpression, Vec<DerivationStep>) {
    let z = &cfg.singulars[0];
    let zref = GroupRef::Singular(z.id.clone());
    let mut derivation = Vec::new();
    let mut pieces = Vec::new();
    let mut inputs = Vec::new();
    for c in &cfg.components {
        let cref = GroupRef::Component(c.id.clone());
        let branches: Vec<_> = cfg.branches_of_component(&c.id).collect();
        let legs = branches
            .iter()
            .map(|b| VkLegExpr {
                group: GroupRef::Branch(b.id.clone()),
                psi: LegMap {
                    via: cref.clone(),
                    images: b.psi.clone(),
                },
                phi: LegMap {
                    via: zref.clone(),
                    images: b.phi.clone(),
                },
            })
            .collect();
        pieces.push(NoohiExpression::Vk {
            form,
            pi: Box::new(NoohiExpression::Atom {
                group: cref.clone(),
            }),
            pi_prime: Box::new(NoohiExpression::Atom {
                group: zref.clone(),
            }),
            legs,
        });
        let node = format!("vk({}|{})", c.id, z.id);
        let mut from = vec![c.id.clone(), z.id.clone()];
        from.extend(branches.iter().map(|b| b.id.clone()));
        derivation.push(step("van-kampen-per-component", node.clone(), from));
        inputs.push(node);
    }
    let expr = if pieces.len() == 1 {
        pieces.pop().unwrap()
    } else {
        NoohiExpression::FiberedCoproduct {
            base: zref,
            legs: pieces,
        }
    };
    derivation.push(step(
        "glue-over-connected-singular-locus",
        scope(cfg),
        inputs,
    ));
    (expr, derivation)
}

/// The group of a scheme whose singular locus is connected.
pub fn pi1_connected_singular(cfg: &SchemeConfig, opts: &Pi1Options) -> Result<Pi1Result> {
    cfg.validate()?;
    if cfg.m() != 1 {
        return Err(Error::precondition(format!(
            "the connected-singular-locus route needs exactly one singular component, found {}",
            cfg.m()
        )));
    }
    let (expr, derivation) = connected_expr(cfg, opts.form);
    finish(expr, derivation, cfg, opts)
}

fn devissage_expr(
    cfg: &SchemeConfig,
    order: &[String],
    form: VkForm,
) -> Result<(NoohiExpression, Vec<DerivationStep>)> {
    match cfg.m() {
        0 => return Ok(regular_expr(cfg)),
        1 => return Ok(connected_expr(cfg, form)),
        _ => {}
    }
    let (k, prefix) = order.split_last().expect("order covers every singular");
    let t1 = build_t(cfg, k)?;
    let t1c = build_t_complement(cfg, k)?;
    let inter = intersection(cfg, &t1, &t1c)?;
    let (star, rest) = rayon::join(
        || devissage_expr(&t1.config, std::slice::from_ref(k), form),
        || devissage_expr(&t1c.config, prefix, form),
    );
    let ((e1, d1), (e2, d2)) = (star?, rest?);
    let legs = inter
        .s
        .iter()
        .map(|c| {
            let r = GroupRef::Component(c.clone());
            let g = &cfg.component(c)?.group;
            Ok(VkLegExpr {
                group: r.clone(),
                psi: LegMap::identity(&r, g),
                phi: LegMap::identity(&r, g),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut derivation = d1;
    derivation.extend(d2);
    let mut inputs = vec![scope(&t1.config), scope(&t1c.config)];
    inputs.extend(inter.pieces.iter().map(|p| p.id.clone()));
    derivation.push(step("devissage-split", scope(cfg), inputs));
    Ok((
        NoohiExpression::Vk {
            form,
            pi: Box::new(e1),
            pi_prime: Box::new(e2),
            legs,
        },
        derivation,
    ))
}

/// The general recursive route: split off the last singular of the order,
/// compute both halves, and glue them along the components they share.
pub fn pi1_devissage(cfg: &SchemeConfig, opts: &Pi1Options) -> Result<Pi1Result> {
    cfg.validate()?;
    let order = match &opts.order {
        Some(o) => {
            if !is_valid_order(cfg, o) {
                return Err(Error::precondition(format!(
                    "{o:?} is not a valid splitting order"
                )));
            }
            o.clone()
        }
        None if cfg.m() == 0 => Vec::new(),
        None => crate::scheme::devissage_order(cfg)?,
    };
    let (expr, derivation) = devissage_expr(cfg, &order, opts.form)?;
    finish(expr, derivation, cfg, opts)
}

/// The free product of the component groups with a free group of the
/// graph's cycle rank. Valid when all singular and branch groups are
/// trivial; with `require_trivial_singulars` unset that hypothesis is not
/// checked.
pub fn pi1_closed_form(
    cfg: &SchemeConfig,
    require_trivial_singulars: bool,
    opts: &Pi1Options,
) -> Result<Pi1Result> {
    cfg.validate()?;
    if require_trivial_singulars {
        let offender = cfg
            .singulars
            .iter()
            .find(|s| !s.group.is_trivial())
            .map(|s| format!("singular component `{}`", s.id))
            .or_else(|| {
                cfg.branches
                    .iter()
                    .find(|b| !b.group.is_trivial())
                    .map(|b| format!("branch `{}`", b.id))
            });
        if let Some(o) = offender {
            return Err(Error::precondition(format!(
                "closed form needs trivial singular and branch groups; {o} is not trivial"
            )));
        }
    }
    let rank = free_rank(cfg)?;
    let mut children: Vec<NoohiExpression> = cfg
        .components
        .iter()
        .filter(|c| !c.group.is_trivial())
        .map(|c| NoohiExpression::Atom {
            group: GroupRef::Component(c.id.clone()),
        })
        .collect();
    if rank > 0 {
        children.push(NoohiExpression::FreeGroup { rank });
    }
    let expr = match children.len() {
        0 => NoohiExpression::Atom {
            group: GroupRef::Component(cfg.components[0].id.clone()),
        },
        1 => children.pop().unwrap(),
        _ => NoohiExpression::Coproduct { children },
    };
    let mut inputs: Vec<String> = cfg.components.iter().map(|c| c.id.clone()).collect();
    inputs.push(format!("F{rank}"));
    finish(
        expr,
        vec![step("closed-form", scope(cfg), inputs)],
        cfg,
        opts,
    )
}

/// One node of the admission trace.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessStep {
    pub path: String,
    pub construct: String,
    pub rule: String,
}

pub const RULE_NORMAL: &str = "étale fundamental group of normal scheme";
pub const RULE_STRATUM: &str = "fundamental group of a lower-dimensional stratum (inductive)";
pub const RULE_FREE: &str = "discrete free group";
pub const RULE_COPRODUCT: &str = "closed under coproducts";
pub const RULE_FIBERED: &str = "closed under fiber coproducts";
pub const RULE_QUOTIENT: &str = "closed under quotients";

fn witness(
    expr: &NoohiExpression,
    cfg: &SchemeConfig,
    path: &str,
    out: &mut Vec<WitnessStep>,
) -> Result<()> {
    let mut push = |p: &str, construct: &str, rule: &str| {
        out.push(WitnessStep {
            path: p.into(),
            construct: construct.into(),
            rule: rule.into(),
        })
    };
    match expr {
        NoohiExpression::Atom { group } => {
            let g = group.resolve(cfg)?;
            let rule = match group {
                GroupRef::Component(_) => RULE_NORMAL,
                _ if g.is_trivial() => RULE_NORMAL,
                _ => RULE_STRATUM,
            };
            push(path, &format!("atom {group}"), rule);
        }
        NoohiExpression::FreeGroup { rank } => {
            push(path, &format!("free group of rank {rank}"), RULE_FREE)
        }
        NoohiExpression::Coproduct { children } => {
            push(path, "coproduct", RULE_COPRODUCT);
            for (i, c) in children.iter().enumerate() {
                witness(c, cfg, &format!("{path}/{i}"), out)?;
            }
        }
        NoohiExpression::FiberedCoproduct { base, legs } => {
            push(
                path,
                &format!("fibered coproduct over {base}"),
                RULE_FIBERED,
            );
            for (i, c) in legs.iter().enumerate() {
                witness(c, cfg, &format!("{path}/{i}"), out)?;
            }
        }
        NoohiExpression::QuotientByRelations { child, .. } => {
            push(path, "quotient", RULE_QUOTIENT);
            witness(child, cfg, &format!("{path}/0"), out)?;
        }
        NoohiExpression::Vk {
            pi, pi_prime, legs, ..
        } => {
            // (π ∐_{π''_1} π') ∐ F_{s-1}, modulo the remaining leg relations.
            push(path, "van Kampen quotient", RULE_QUOTIENT);
            push(&format!("{path}/0"), "coproduct with F", RULE_COPRODUCT);
            push(
                &format!("{path}/0/0"),
                "amalgam along the first leg",
                RULE_FIBERED,
            );
            push(
                &format!("{path}/0/1"),
                &format!("free group of rank {}", legs.len() - 1),
                RULE_FREE,
            );
            witness(pi, cfg, &format!("{path}/0/0/pi"), out)?;
            witness(pi_prime, cfg, &format!("{path}/0/0/pi'"), out)?;
        }
    }
    Ok(())
}

/// Walks the expression and names, for every node, the closure rule that
/// admits it into the class generated by étale groups of normal schemes.
pub fn class_witness(result: &Pi1Result, cfg: &SchemeConfig) -> Result<Vec<WitnessStep>> {
    let mut out = Vec::new();
    witness(&result.expression, cfg, "", &mut out)?;
    Ok(out)
}
