//! The dual-graph model of a singular scheme.
//!
//! Vertices of the incidence multigraph are the irreducible components (each
//! carrying the étale fundamental group of its normalisation) and the
//! connected components of the singular locus; edges are the branches, i.e.
//! the connected components of the preimage of the singular locus in the
//! normalisation. Each branch carries its own group and two maps, into its
//! component's group and into its singular component's group.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group_spec::GroupSpec;
use crate::homo::Homo;
use crate::word::{GeneratorSymbol, Word};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Component {
    pub id: String,
    pub group: GroupSpec,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Singular {
    pub id: String,
    pub group: GroupSpec,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Branch {
    pub id: String,
    pub component: String,
    pub singular: String,
    pub group: GroupSpec,
    /// Images of the branch group's generators in the component group.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub psi: BTreeMap<GeneratorSymbol, Word>,
    /// Images of the branch group's generators in the singular group.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub phi: BTreeMap<GeneratorSymbol, Word>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchemeConfig {
    pub components: Vec<Component>,
    #[serde(default)]
    pub singulars: Vec<Singular>,
    #[serde(default)]
    pub branches: Vec<Branch>,
}

/// The first violated invariant of a configuration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub invariant: String,
    pub ids: Vec<String>,
    pub message: String,
}

impl Diagnostic {
    fn new(invariant: &str, ids: Vec<String>, message: String) -> Self {
        Diagnostic {
            invariant: invariant.into(),
            ids,
            message,
        }
    }
}

impl From<Diagnostic> for Error {
    fn from(d: Diagnostic) -> Self {
        Error::Precondition(format!("{}: {}", d.invariant, d.message))
    }
}

/// Union-find over `0..n`.
struct Dsu(Vec<usize>);

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu((0..n).collect())
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    /// Returns false when `a` and `b` were already joined.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.0[rb] = ra;
        true
    }
}

impl SchemeConfig {
    /// Parses the JSON form; structural problems are reported with the JSON
    /// path of the offending value.
    pub fn from_json_str(s: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(s);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let path = if path == "." {
                "$".to_string()
            } else {
                format!("$.{path}")
            };
            Error::schema(path, e.into_inner().to_string())
        })
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serialises")
    }

    /// `n`, the number of irreducible components.
    pub fn n(&self) -> usize {
        self.components.len()
    }

    /// `m`, the number of connected components of the singular locus.
    pub fn m(&self) -> usize {
        self.singulars.len()
    }

    /// `m̃`, the number of branches.
    pub fn m_tilde(&self) -> usize {
        self.branches.len()
    }

    pub fn component(&self, id: &str) -> Result<&Component> {
        self.components
            .iter()
            .find(|c| c.id == id)
            .ok_or_else(|| Error::input(format!("unknown component `{id}`")))
    }

    pub fn singular(&self, id: &str) -> Result<&Singular> {
        self.singulars
            .iter()
            .find(|c| c.id == id)
            .ok_or_else(|| Error::input(format!("unknown singular component `{id}`")))
    }

    /// Branches at a component, in declaration order.
    pub fn branches_of_component<'a>(
        &'a self,
        id: &'a str,
    ) -> impl Iterator<Item = &'a Branch> + 'a {
        self.branches.iter().filter(move |b| b.component == id)
    }

    pub fn branches_of_singular<'a>(
        &'a self,
        id: &'a str,
    ) -> impl Iterator<Item = &'a Branch> + 'a {
        self.branches.iter().filter(move |b| b.singular == id)
    }

    /// Component ids meeting the given singular component, in declaration order.
    pub fn components_meeting(&self, singular: &str) -> Vec<String> {
        self.components
            .iter()
            .filter(|c| {
                self.branches
                    .iter()
                    .any(|b| b.singular == singular && b.component == c.id)
            })
            .map(|c| c.id.clone())
            .collect()
    }

    /// The branch's map into its component group, checked by evaluation.
    pub fn branch_psi(&self, b: &Branch) -> Result<Homo> {
        let target = &self.component(&b.component)?.group;
        Homo::between(&format!("{}.psi", b.id), &b.group, target, b.psi.clone())
    }

    /// The branch's map into its singular group, checked by evaluation.
    pub fn branch_phi(&self, b: &Branch) -> Result<Homo> {
        let target = &self.singular(&b.singular)?.group;
        Homo::between(&format!("{}.phi", b.id), &b.group, target, b.phi.clone())
    }

    /// Whether every singular and branch group is trivial.
    pub fn has_trivial_singular_data(&self) -> bool {
        self.singulars.iter().all(|s| s.group.is_trivial())
            && self.branches.iter().all(|b| b.group.is_trivial())
    }

    fn vertex_index(&self) -> BTreeMap<(bool, &str), usize> {
        let mut idx = BTreeMap::new();
        for (i, c) in self.components.iter().enumerate() {
            idx.insert((false, c.id.as_str()), i);
        }
        for (j, s) in self.singulars.iter().enumerate() {
            idx.insert((true, s.id.as_str()), self.n() + j);
        }
        idx
    }

    fn vertex_name(&self, v: usize) -> &str {
        if v < self.n() {
            &self.components[v].id
        } else {
            &self.singulars[v - self.n()].id
        }
    }

    /// Checks every invariant and reports the first violation.
    pub fn validate(&self) -> Result<(), Diagnostic> {
        if self.components.is_empty() {
            return Err(Diagnostic::new(
                "nonempty",
                vec![],
                "a scheme needs at least one component".into(),
            ));
        }
        let mut ids = BTreeSet::new();
        for id in self
            .components
            .iter()
            .map(|c| &c.id)
            .chain(self.singulars.iter().map(|s| &s.id))
            .chain(self.branches.iter().map(|b| &b.id))
        {
            if !ids.insert(id) {
                return Err(Diagnostic::new(
                    "unique_ids",
                    vec![id.clone()],
                    format!("id `{id}` is declared twice"),
                ));
            }
        }
        for b in &self.branches {
            if self.component(&b.component).is_err() {
                return Err(Diagnostic::new(
                    "references_resolve",
                    vec![b.id.clone(), b.component.clone()],
                    format!(
                        "branch `{}` names unknown component `{}`",
                        b.id, b.component
                    ),
                ));
            }
            if self.singular(&b.singular).is_err() {
                return Err(Diagnostic::new(
                    "references_resolve",
                    vec![b.id.clone(), b.singular.clone()],
                    format!(
                        "branch `{}` names unknown singular component `{}`",
                        b.id, b.singular
                    ),
                ));
            }
        }
        for b in &self.branches {
            for r in [self.branch_psi(b), self.branch_phi(b)] {
                if let Err(e) = r {
                    return Err(Diagnostic::new(
                        "valid_branch_maps",
                        vec![b.id.clone()],
                        e.to_string(),
                    ));
                }
            }
        }
        for s in &self.singulars {
            if self.branches_of_singular(&s.id).next().is_none() {
                return Err(Diagnostic::new(
                    "singular_has_branch",
                    vec![s.id.clone()],
                    format!("singular component `{}` has no incident branch", s.id),
                ));
            }
        }
        let cut = self.unreachable_vertices();
        if !cut.is_empty() {
            return Err(Diagnostic::new(
                "connected",
                cut.clone(),
                format!(
                    "incidence graph is disconnected; not reachable from `{}`: {}",
                    self.components[0].id,
                    cut.join(", ")
                ),
            ));
        }
        if self.n() > 1 {
            for c in &self.components {
                if self.branches_of_component(&c.id).next().is_none() {
                    return Err(Diagnostic::new(
                        "component_has_branch",
                        vec![c.id.clone()],
                        format!("component `{}` has no incident branch", c.id),
                    ));
                }
            }
        }
        Ok(())
    }

    /// Vertex ids not connected to the first component.
    fn unreachable_vertices(&self) -> Vec<String> {
        let idx = self.vertex_index();
        let mut dsu = Dsu::new(self.n() + self.m());
        for b in &self.branches {
            if let (Some(&c), Some(&s)) = (
                idx.get(&(false, b.component.as_str())),
                idx.get(&(true, b.singular.as_str())),
            ) {
                dsu.union(c, s);
            }
        }
        let root = dsu.find(0);
        (0..self.n() + self.m())
            .filter(|&v| dsu.find(v) != root)
            .map(|v| self.vertex_name(v).to_string())
            .collect()
    }

    fn require_valid(&self) -> Result<()> {
        self.validate().map_err(Error::from)
    }

    /// First Betti number of the incidence multigraph, counted as the number
    /// of edges that close a cycle while a spanning forest is grown.
    pub fn cycle_rank(&self) -> usize {
        let idx = self.vertex_index();
        let mut dsu = Dsu::new(self.n() + self.m());
        self.branches
            .iter()
            .filter(|b| {
                let c = idx[&(false, b.component.as_str())];
                let s = idx[&(true, b.singular.as_str())];
                !dsu.union(c, s)
            })
            .count()
    }
}

/// Free rank `m̃ - m - n + 1`, cross-checked against the cycle rank.
pub fn free_rank(cfg: &SchemeConfig) -> Result<usize> {
    cfg.require_valid()?;
    let rank = cfg.m_tilde() as i64 - cfg.m() as i64 - cfg.n() as i64 + 1;
    let betti = cfg.cycle_rank() as i64;
    if rank != betti {
        return Err(Error::Internal(format!(
            "rank {rank} differs from cycle rank {betti}"
        )));
    }
    Ok(rank as usize)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "singular", rename_all = "snake_case")]
pub enum SubKind {
    /// The neighbourhood of one singular component.
    Star(String),
    /// The union of the neighbourhoods of all singular components but one.
    Complement(String),
}

/// A sub-configuration with a record of how it was cut out.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubConfig {
    pub kind: SubKind,
    pub config: SchemeConfig,
}

impl SubConfig {
    pub fn component_ids(&self) -> Vec<String> {
        self.config
            .components
            .iter()
            .map(|c| c.id.clone())
            .collect()
    }

    pub fn singular_ids(&self) -> Vec<String> {
        self.config.singulars.iter().map(|c| c.id.clone()).collect()
    }

    pub fn branch_ids(&self) -> Vec<String> {
        self.config.branches.iter().map(|c| c.id.clone()).collect()
    }
}

/// Restriction to the given singular components: their branches, and the
/// components those branches reach. Declaration order is kept.
fn restrict(cfg: &SchemeConfig, singulars: &BTreeSet<&str>) -> SchemeConfig {
    let branches: Vec<Branch> = cfg
        .branches
        .iter()
        .filter(|b| singulars.contains(b.singular.as_str()))
        .cloned()
        .collect();
    let comps: BTreeSet<&str> = branches.iter().map(|b| b.component.as_str()).collect();
    SchemeConfig {
        components: cfg
            .components
            .iter()
            .filter(|c| comps.contains(c.id.as_str()))
            .cloned()
            .collect(),
        singulars: cfg
            .singulars
            .iter()
            .filter(|s| singulars.contains(s.id.as_str()))
            .cloned()
            .collect(),
        branches,
    }
}

/// The open piece around singular component `j`: every component meeting
/// `Z_j`, with the other singular components removed.
pub fn build_t(cfg: &SchemeConfig, j: &str) -> Result<SubConfig> {
    cfg.singular(j)?;
    Ok(SubConfig {
        kind: SubKind::Star(j.to_string()),
        config: restrict(cfg, &[j].into_iter().collect()),
    })
}

/// The union of the pieces around every singular component except `k`.
pub fn build_t_complement(cfg: &SchemeConfig, k: &str) -> Result<SubConfig> {
    cfg.singular(k)?;
    if cfg.m() < 2 {
        return Err(Error::precondition(
            "the complement piece needs at least two singular components",
        ));
    }
    let keep: BTreeSet<&str> = cfg
        .singulars
        .iter()
        .map(|s| s.id.as_str())
        .filter(|&s| s != k)
        .collect();
    Ok(SubConfig {
        kind: SubKind::Complement(k.to_string()),
        config: restrict(cfg, &keep),
    })
}

/// Whether the union of the pieces around `singulars` is connected.
fn union_connected(cfg: &SchemeConfig, singulars: &[String]) -> bool {
    let set: BTreeSet<&str> = singulars.iter().map(String::as_str).collect();
    let sub = restrict(cfg, &set);
    sub.components.is_empty() || sub.unreachable_vertices().is_empty()
}

/// Whether `order` lists every singular id once and each prefix union of
/// pieces is connected.
pub fn is_valid_order(cfg: &SchemeConfig, order: &[String]) -> bool {
    let declared: BTreeSet<&str> = cfg.singulars.iter().map(|s| s.id.as_str()).collect();
    let given: BTreeSet<&str> = order.iter().map(String::as_str).collect();
    if order.len() != cfg.m() || given != declared {
        return false;
    }
    (1..=order.len()).all(|r| union_connected(cfg, &order[..r]))
}

/// Greedy ordering of the singular components such that every prefix union
/// of pieces is connected; ties go to the earliest declared id.
pub fn devissage_order(cfg: &SchemeConfig) -> Result<Vec<String>> {
    cfg.require_valid()?;
    if cfg.m() == 0 {
        return Err(Error::precondition("no singular components to order"));
    }
    let mut order = vec![cfg.singulars[0].id.clone()];
    let mut covered: BTreeSet<String> = cfg.components_meeting(&order[0]).into_iter().collect();
    while order.len() < cfg.m() {
        let next = cfg
            .singulars
            .iter()
            .filter(|s| !order.contains(&s.id))
            .find(|s| {
                cfg.components_meeting(&s.id)
                    .iter()
                    .any(|c| covered.contains(c))
            })
            .ok_or_else(|| Error::Internal("no piece meets the current union".into()))?;
        covered.extend(cfg.components_meeting(&next.id));
        order.push(next.id.clone());
    }
    if !is_valid_order(cfg, &order) {
        return Err(Error::Internal(format!(
            "greedy order {order:?} has a disconnected prefix"
        )));
    }
    Ok(order)
}

/// Every valid order, by brute force over permutations. Intended for small
/// `m` in tests and robustness checks.
pub fn all_valid_orders(cfg: &SchemeConfig) -> Vec<Vec<String>> {
    fn rec(
        cfg: &SchemeConfig,
        prefix: &mut Vec<String>,
        rest: &mut Vec<String>,
        out: &mut Vec<Vec<String>>,
    ) {
        if rest.is_empty() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..rest.len() {
            let x = rest.remove(i);
            prefix.push(x);
            if union_connected(cfg, prefix) {
                rec(cfg, prefix, rest, out);
            }
            let x = prefix.pop().unwrap();
            rest.insert(i, x);
        }
    }
    let mut out = Vec::new();
    let mut rest: Vec<String> = cfg.singulars.iter().map(|s| s.id.clone()).collect();
    rec(cfg, &mut Vec::new(), &mut rest, &mut out);
    out
}

/// One connected piece of the overlap of the two halves of a split; it lies
/// in a single component.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OverlapPiece {
    pub id: String,
    pub component: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectionReport {
    /// Components meeting the split-off singular component.
    pub s1: Vec<String>,
    /// Components meeting some other singular component.
    pub s2: Vec<String>,
    /// `s1 ∩ s2`, in declaration order.
    pub s: Vec<String>,
    pub pieces: Vec<OverlapPiece>,
    pub m_tilde_1: usize,
    pub m_tilde_2: usize,
    pub d: usize,
}

pub fn intersection(
    cfg: &SchemeConfig,
    t1: &SubConfig,
    t1c: &SubConfig,
) -> Result<IntersectionReport> {
    let k = match (&t1.kind, &t1c.kind) {
        (SubKind::Star(a), SubKind::Complement(b)) if a == b => a.clone(),
        _ => {
            return Err(Error::input(
                "the two pieces were not split off along the same singular component",
            ))
        }
    };
    let expected_t1 = build_t(cfg, &k)?;
    let expected_t1c = build_t_complement(cfg, &k)?;
    if *t1 != expected_t1 || *t1c != expected_t1c {
        return Err(Error::input(format!(
            "pieces do not come from this configuration split at `{k}`"
        )));
    }
    let s1 = t1.component_ids();
    let s2 = t1c.component_ids();
    let s: Vec<String> = cfg
        .components
        .iter()
        .map(|c| c.id.clone())
        .filter(|c| s1.contains(c) && s2.contains(c))
        .collect();
    let m_tilde_1 = t1.config.m_tilde();
    Ok(IntersectionReport {
        pieces: s
            .iter()
            .map(|c| OverlapPiece {
                id: format!("D[{c}]"),
                component: c.clone(),
            })
            .collect(),
        d: s.len(),
        m_tilde_1,
        m_tilde_2: cfg.m_tilde() - m_tilde_1,
        s1,
        s2,
        s,
    })
}

/// One step of the recursive splitting, with the rank arithmetic.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanStep {
    pub split_off: String,
    pub star: Vec<String>,
    pub complement_singulars: Vec<String>,
    pub intersection: IntersectionReport,
    pub rank: usize,
    pub rank_star: usize,
    pub rank_complement: usize,
    pub additive: bool,
}

/// What remains after the last split: one connected singular and the
/// components meeting it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaseStep {
    pub singular: String,
    pub components: Vec<String>,
    pub branches: usize,
    pub rank: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Plan {
    pub order: Vec<String>,
    pub steps: Vec<PlanStep>,
    pub base: BaseStep,
}

/// Splits along the last singular of `order`, then recurses on the
/// complement with the order's prefix, recording `S1`, `S2`, `S`, `d`, the
/// branch counts and whether `rank = rank(T) + rank(T') + d - 1`.
pub fn plan_with_order(cfg: &SchemeConfig, order: &[String]) -> Result<Plan> {
    cfg.require_valid()?;
    if cfg.m() == 0 {
        return Err(Error::precondition("regular scheme, nothing to plan"));
    }
    if !is_valid_order(cfg, order) {
        return Err(Error::precondition(format!(
            "{order:?} is not a valid splitting order"
        )));
    }
    let mut steps = Vec::new();
    let mut current = cfg.clone();
    let mut prefix = order.to_vec();
    while prefix.len() > 1 {
        let k = prefix.pop().unwrap();
        let t1 = build_t(&current, &k)?;
        let t1c = build_t_complement(&current, &k)?;
        let inter = intersection(&current, &t1, &t1c)?;
        let rank = free_rank(&current)?;
        let rank_star = free_rank(&t1.config)?;
        let rank_complement = free_rank(&t1c.config)?;
        let additive =
            rank as i64 == rank_star as i64 + rank_complement as i64 + inter.d as i64 - 1;
        steps.push(PlanStep {
            split_off: k,
            star: t1.component_ids(),
            complement_singulars: t1c.singular_ids(),
            intersection: inter,
            rank,
            rank_star,
            rank_complement,
            additive,
        });
        current = t1c.config;
    }
    let base = BaseStep {
        singular: prefix[0].clone(),
        components: current.components.iter().map(|c| c.id.clone()).collect(),
        branches: current.m_tilde(),
        rank: free_rank(&current)?,
    };
    Ok(Plan {
        order: order.to_vec(),
        steps,
        base,
    })
}

pub fn plan(cfg: &SchemeConfig) -> Result<Plan> {
    cfg.require_valid()?;
    if cfg.m() == 0 {
        return Err(Error::precondition("regular scheme, nothing to plan"));
    }
    let order = devissage_order(cfg)?;
    plan_with_order(cfg, &order)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn comp(id: &str, g: GroupSpec) -> Component {
        Component {
            id: id.into(),
            group: g,
        }
    }

    fn sing(id: &str) -> Singular {
        Singular {
            id: id.into(),
            group: GroupSpec::trivial(),
        }
    }

    fn br(id: &str, c: &str, s: &str) -> Branch {
        Branch {
            id: id.into(),
            component: c.into(),
            singular: s.into(),
            group: GroupSpec::trivial(),
            psi: BTreeMap::new(),
            phi: BTreeMap::new(),
        }
    }

    fn t() -> GroupSpec {
        GroupSpec::trivial()
    }

    fn nodal() -> SchemeConfig {
        SchemeConfig {
            components: vec![comp("X", t())],
            singulars: vec![sing("Z")],
            branches: vec![br("b0", "X", "Z"), br("b1", "X", "Z")],
        }
    }

    /// X1 - Z1 - X2 - Z2 - X3.
    fn chain() -> SchemeConfig {
        SchemeConfig {
            components: vec![comp("X1", t()), comp("X2", t()), comp("X3", t())],
            singulars: vec![sing("Z1"), sing("Z2")],
            branches: vec![
                br("a", "X1", "Z1"),
                br("b", "X2", "Z1"),
                br("c", "X2", "Z2"),
                br("d", "X3", "Z2"),
            ],
        }
    }

    /// Two components meeting in two separate points.
    fn theta() -> SchemeConfig {
        SchemeConfig {
            components: vec![comp("X1", t()), comp("X2", t())],
            singulars: vec![sing("Z1"), sing("Z2")],
            branches: vec![
                br("a", "X1", "Z1"),
                br("b", "X2", "Z1"),
                br("c", "X1", "Z2"),
                br("d", "X2", "Z2"),
            ],
        }
    }

    fn star() -> SchemeConfig {
        SchemeConfig {
            components: vec![
                comp("C", t()),
                comp("L1", t()),
                comp("L2", t()),
                comp("L3", t()),
            ],
            singulars: vec![sing("Z1"), sing("Z2"), sing("Z3")],
            branches: vec![
                br("c1", "C", "Z1"),
                br("l1", "L1", "Z1"),
                br("c2", "C", "Z2"),
                br("l2", "L2", "Z2"),
                br("c3", "C", "Z3"),
                br("l3", "L3", "Z3"),
            ],
        }
    }

    #[test]
    fn validation_cases() {
        let regular = SchemeConfig {
            components: vec![comp("X", t())],
            singulars: vec![],
            branches: vec![],
        };
        assert!(regular.validate().is_ok());
        let two = SchemeConfig {
            components: vec![comp("X1", t()), comp("X2", t())],
            singulars: vec![],
            branches: vec![],
        };
        let d = two.validate().unwrap_err();
        assert_eq!(d.invariant, "connected");
        assert_eq!(d.ids, vec!["X2".to_string()]);
        assert!(nodal().validate().is_ok());
        let mut lonely = nodal();
        lonely.singulars.push(sing("W"));
        assert_eq!(
            lonely.validate().unwrap_err().invariant,
            "singular_has_branch"
        );
        let mut dangling = nodal();
        dangling.branches[0].singular = "nope".into();
        assert_eq!(
            dangling.validate().unwrap_err().invariant,
            "references_resolve"
        );
        let mut dup = nodal();
        dup.branches[1].id = "b0".into();
        assert_eq!(dup.validate().unwrap_err().invariant, "unique_ids");
    }

    #[test]
    fn bad_branch_map_is_reported() {
        let mut cfg = nodal();
        cfg.components[0].group = GroupSpec::cyclic(4).unwrap();
        cfg.branches[0].group = GroupSpec::cyclic(2).unwrap();
        let g0 = GeneratorSymbol::bare("g0");
        cfg.branches[0].psi.insert(g0.clone(), Word::gen(&g0));
        cfg.branches[0].phi.insert(g0, Word::empty());
        let d = cfg.validate().unwrap_err();
        assert_eq!(d.invariant, "valid_branch_maps");
        assert_eq!(d.ids, vec!["b0".to_string()]);
    }

    #[test]
    fn star_pieces() {
        let c = chain();
        let t1 = build_t(&c, "Z1").unwrap();
        assert_eq!(t1.component_ids(), vec!["X1", "X2"]);
        assert_eq!(t1.branch_ids(), vec!["a", "b"]);
        let whole = build_t(&nodal(), "Z").unwrap();
        assert_eq!(whole.config, nodal());
        assert!(build_t(&c, "Z9").is_err());
    }

    #[test]
    fn complement_pieces() {
        let c = chain();
        let t1c = build_t_complement(&c, "Z1").unwrap();
        assert_eq!(t1c.component_ids(), vec!["X2", "X3"]);
        assert_eq!(t1c.config, build_t(&c, "Z2").unwrap().config);
        assert!(build_t_complement(&nodal(), "Z").is_err());
        let s = build_t_complement(&star(), "Z2").unwrap();
        assert_eq!(s.component_ids(), vec!["C", "L1", "L3"]);
        assert_eq!(s.singular_ids(), vec!["Z1", "Z3"]);
    }

    #[test]
    fn pieces_partition_singulars_and_branches() {
        for cfg in [chain(), theta(), star()] {
            for s in &cfg.singulars {
                let a = build_t(&cfg, &s.id).unwrap();
                let b = build_t_complement(&cfg, &s.id).unwrap();
                let sa: BTreeSet<_> = a.singular_ids().into_iter().collect();
                let sb: BTreeSet<_> = b.singular_ids().into_iter().collect();
                assert!(sa.is_disjoint(&sb));
                assert_eq!(sa.len() + sb.len(), cfg.m());
                assert_eq!(a.config.m_tilde() + b.config.m_tilde(), cfg.m_tilde());
            }
        }
    }

    #[test]
    fn orders() {
        assert_eq!(devissage_order(&nodal()).unwrap(), vec!["Z"]);
        assert_eq!(devissage_order(&chain()).unwrap(), vec!["Z1", "Z2"]);
        assert_eq!(devissage_order(&star()).unwrap(), vec!["Z1", "Z2", "Z3"]);
        assert_eq!(all_valid_orders(&star()).len(), 6);
        assert_eq!(all_valid_orders(&chain()).len(), 2);
    }

    #[test]
    fn greedy_skips_disconnected_candidates() {
        // Z1 on X1/X2, Z2 on X3/X4, Z3 on X2/X3: Z2 is not adjacent to Z1.
        let cfg = SchemeConfig {
            components: vec![
                comp("X1", t()),
                comp("X2", t()),
                comp("X3", t()),
                comp("X4", t()),
            ],
            singulars: vec![sing("Z1"), sing("Z2"), sing("Z3")],
            branches: vec![
                br("a", "X1", "Z1"),
                br("b", "X2", "Z1"),
                br("c", "X3", "Z2"),
                br("d", "X4", "Z2"),
                br("e", "X2", "Z3"),
                br("f", "X3", "Z3"),
            ],
        };
        assert_eq!(devissage_order(&cfg).unwrap(), vec!["Z1", "Z3", "Z2"]);
        assert!(!is_valid_order(
            &cfg,
            &["Z1".into(), "Z2".into(), "Z3".into()]
        ));
    }

    #[test]
    fn intersections() {
        let c = chain();
        let r = intersection(
            &c,
            &build_t(&c, "Z2").unwrap(),
            &build_t_complement(&c, "Z2").unwrap(),
        )
        .unwrap();
        assert_eq!(r.s, vec!["X2"]);
        assert_eq!(r.d, 1);
        assert_eq!((r.m_tilde_1, r.m_tilde_2), (2, 2));
        let th = theta();
        let r = intersection(
            &th,
            &build_t(&th, "Z2").unwrap(),
            &build_t_complement(&th, "Z2").unwrap(),
        )
        .unwrap();
        assert_eq!(r.s, vec!["X1", "X2"]);
        assert_eq!(r.d, 2);
        let mismatched = intersection(
            &th,
            &build_t(&th, "Z1").unwrap(),
            &build_t_complement(&th, "Z2").unwrap(),
        );
        assert!(mismatched.is_err());
    }

    #[test]
    fn ranks() {
        assert_eq!(free_rank(&nodal()).unwrap(), 1);
        assert_eq!(free_rank(&theta()).unwrap(), 1);
        assert_eq!(free_rank(&chain()).unwrap(), 0);
        let regular = SchemeConfig {
            components: vec![comp("X", t())],
            singulars: vec![],
            branches: vec![],
        };
        assert_eq!(free_rank(&regular).unwrap(), 0);
        let two = SchemeConfig {
            components: vec![comp("X1", t()), comp("X2", t())],
            singulars: vec![],
            branches: vec![],
        };
        assert!(free_rank(&two).is_err());
    }

    #[test]
    fn plans_are_additive() {
        let p = plan(&star()).unwrap();
        assert_eq!(p.steps.len(), 2);
        assert!(p.steps.iter().all(|s| s.additive));
        let p = plan(&chain()).unwrap();
        assert_eq!(p.steps.len(), 1);
        assert_eq!(p.steps[0].intersection.d, 1);
        assert_eq!(plan(&nodal()).unwrap().steps.len(), 0);
    }

    #[test]
    fn json_paths_in_schema_errors() {
        let bad = r#"{"components":[{"id":"X","group":{"kind":"trivial"}}],
            "singulars":[], "branches":[{"id":"b","component":"X","singular":"Z","group":{"kind":"cyclic"}}]}"#;
        match SchemeConfig::from_json_str(bad).unwrap_err() {
            Error::Schema { path, .. } => assert_eq!(path, "$.branches[0].group"),
            other => panic!("unexpected {other:?}"),
        }
        let truncated = r#"{"components":[{"id":"X","#;
        assert!(matches!(
            SchemeConfig::from_json_str(truncated),
            Err(Error::Schema { .. })
        ));
    }

    #[test]
    fn json_round_trip() {
        let text = chain().to_json_pretty();
        assert_eq!(SchemeConfig::from_json_str(&text).unwrap(), chain());
    }
}
