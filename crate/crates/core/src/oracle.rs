//! Ground truth by counting covers.
//!
//! A degree-`d` cover of the scheme is described, after identifying every
//! fibre with `0..d`, by an action of each component group and each singular
//! group on `0..d` together with one bijection per branch intertwining the
//! two actions it connects. These rigid data are counted exactly; dividing by
//! the order of the relabelling group `Sym(d)^(n+m)` gives the groupoid
//! cardinality of the category of degree-`d` covers.

use std::ops::ControlFlow;

use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::Bounds;
use crate::error::{Error, Result};
use crate::homcount::{count_homs_with, count_transitive_homs_with, HomSpace};
use crate::perm::{Elem, Perm, SymTable};
use crate::pi1::Pi1Result;
use crate::scheme::SchemeConfig;

/// One rigidified cover.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DescentDatum {
    pub degree: usize,
    /// Per component, the images of its group's generators.
    pub rho: Vec<Vec<Perm>>,
    /// Per singular component, the images of its group's generators.
    pub tau: Vec<Vec<Perm>>,
    /// Per branch, the identification of the component fibre with the
    /// singular fibre.
    pub lambda: Vec<Perm>,
}

/// Hom spaces of every vertex group and, per branch, the admissible
/// bijections for each pair of vertex actions.
struct Setup {
    degree: usize,
    table: &'static SymTable,
    /// Per vertex (components first, then singulars), every action.
    actions: Vec<Vec<Vec<Elem>>>,
    /// Per branch, `(component vertex, singular vertex)`.
    ends: Vec<(usize, usize)>,
    /// Per branch, indexed `[rho][tau]`, the admissible bijections.
    admissible: Vec<Vec<Vec<Vec<Elem>>>>,
}

fn factorial(d: usize) -> u128 {
    (1..=d as u128).product()
}

fn relabelling_order(cfg: &SchemeConfig, d: usize) -> Result<u128> {
    let exp = (cfg.n() + cfg.m()) as u32;
    factorial(d)
        .checked_pow(exp)
        .ok_or_else(|| Error::Resource {
            what: "relabelling group order".into(),
            estimate: u128::MAX,
            limit: u128::MAX,
        })
}

impl Setup {
    fn new(cfg: &SchemeConfig, d: usize, bounds: &Bounds) -> Result<Setup> {
        cfg.validate()?;
        if d > bounds.max_degree {
            return Err(Error::Resource {
                what: "cover degree".into(),
                estimate: d as u128,
                limit: bounds.max_degree as u128,
            });
        }
        let table = SymTable::get(d)?;
        let groups = cfg
            .components
            .iter()
            .map(|c| &c.group)
            .chain(cfg.singulars.iter().map(|s| &s.group));
        let spaces = groups
            .map(|g| HomSpace::new(g.presentation(), d, bounds))
            .collect::<Result<Vec<_>>>()?;
        let actions: Vec<Vec<Vec<Elem>>> = spaces.iter().map(HomSpace::collect).collect();

        let mut estimate: u128 = actions
            .iter()
            .fold(1u128, |acc, a| acc.saturating_mul(a.len() as u128));
        for _ in 0..cfg.m_tilde() {
            estimate = estimate.saturating_mul(factorial(d));
        }
        if estimate > bounds.oracle_ceiling {
            return Err(Error::Resource {
                what: format!("descent data candidates at degree {d}"),
                estimate,
                limit: bounds.oracle_ceiling,
            });
        }

        let n = cfg.n();
        let mut ends = Vec::new();
        let mut admissible = Vec::new();
        for b in &cfg.branches {
            let ci = cfg
                .components
                .iter()
                .position(|c| c.id == b.component)
                .unwrap();
            let sj = cfg
                .singulars
                .iter()
                .position(|s| s.id == b.singular)
                .unwrap();
            let psi = cfg.branch_psi(b)?;
            let phi = cfg.branch_phi(b)?;
            let gens = b.group.generators();
            // Images of the branch generators under every component action.
            let pushed = |space: &HomSpace,
                          acts: &[Vec<Elem>],
                          map: &crate::homo::Homo|
             -> Result<Vec<Vec<Elem>>> {
                acts.iter()
                    .map(|a| {
                        gens.iter()
                            .map(|g| space.eval_word(&map.image_of(g), a))
                            .collect()
                    })
                    .collect()
            };
            let left = pushed(&spaces[ci], &actions[ci], &psi)?;
            let right = pushed(&spaces[n + sj], &actions[n + sj], &phi)?;
            let table_b: Vec<Vec<Vec<Elem>>> = left
                .iter()
                .map(|x| {
                    right
                        .iter()
                        .map(|y| {
                            table
                                .elements()
                                .filter(|&l| {
                                    x.iter()
                                        .zip(y)
                                        .all(|(&xa, &ya)| table.mul(l, xa) == table.mul(ya, l))
                                })
                                .collect()
                        })
                        .collect()
                })
                .collect();
            ends.push((ci, n + sj));
            admissible.push(table_b);
        }
        Ok(Setup {
            degree: d,
            table,
            actions,
            ends,
            admissible,
        })
    }

    fn admissible_for(&self, choice: &[usize], b: usize) -> &[Elem] {
        let (c, s) = self.ends[b];
        &self.admissible[b][choice[c]][choice[s]]
    }

    /// Calls `f` on every vertex-action choice whose first entry is `first`.
    fn for_each_choice(&self, first: usize, mut f: impl FnMut(&[usize])) {
        let v = self.actions.len();
        let mut choice = vec![0usize; v];
        choice[0] = first;
        if self.actions[1..].iter().any(Vec::is_empty) {
            return;
        }
        loop {
            f(&choice);
            let mut k = 1;
            loop {
                if k == v {
                    return;
                }
                choice[k] += 1;
                if choice[k] < self.actions[k].len() {
                    break;
                }
                choice[k] = 0;
                k += 1;
            }
        }
    }

    fn rigid_count(&self) -> u128 {
        (0..self.actions[0].len())
            .into_par_iter()
            .map(|first| {
                let mut total = 0u128;
                self.for_each_choice(first, |choice| {
                    let mut prod = 1u128;
                    for b in 0..self.ends.len() {
                        prod *= self.admissible_for(choice, b).len() as u128;
                        if prod == 0 {
                            break;
                        }
                    }
                    total += prod;
                });
                total
            })
            .sum()
    }

    /// Walks the bijection choices for a fixed vertex choice.
    fn walk_lambdas(
        &self,
        choice: &[usize],
        lambdas: &mut Vec<Elem>,
        f: &mut dyn FnMut(&[Elem]) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        let b = lambdas.len();
        if b == self.ends.len() {
            return f(lambdas);
        }
        for &l in self.admissible_for(choice, b) {
            lambdas.push(l);
            let flow = self.walk_lambdas(choice, lambdas, f);
            lambdas.pop();
            flow?;
        }
        ControlFlow::Continue(())
    }

    fn connected(&self, choice: &[usize], lambdas: &[Elem]) -> bool {
        let d = self.degree;
        let v = self.actions.len();
        let mut parent: Vec<usize> = (0..v * d).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let join = |p: &mut Vec<usize>, a: usize, b: usize| {
            let (ra, rb) = (find(p, a), find(p, b));
            if ra != rb {
                p[ra] = rb;
            }
        };
        for (vx, &c) in choice.iter().enumerate() {
            for &g in &self.actions[vx][c] {
                let img = self.table.images(g);
                for (x, &y) in img.iter().enumerate().take(d) {
                    join(&mut parent, vx * d + x, vx * d + y as usize);
                }
            }
        }
        for (b, &l) in lambdas.iter().enumerate() {
            let (c, s) = self.ends[b];
            let img = self.table.images(l);
            for (x, &y) in img.iter().enumerate().take(d) {
                join(&mut parent, c * d + x, s * d + y as usize);
            }
        }
        let root = find(&mut parent, 0);
        (1..v * d).all(|x| find(&mut parent, x) == root)
    }

    fn connected_count(&self) -> u128 {
        if self.degree == 0 {
            return 0;
        }
        (0..self.actions[0].len())
            .into_par_iter()
            .map(|first| {
                let mut total = 0u128;
                self.for_each_choice(first, |choice| {
                    let _ = self.walk_lambdas(choice, &mut Vec::new(), &mut |ls| {
                        if self.connected(choice, ls) {
                            total += 1;
                        }
                        ControlFlow::Continue(())
                    });
                });
                total
            })
            .sum()
    }

    fn perm(&self, e: Elem) -> Perm {
        Perm::from_images(self.table.images(e).iter().map(|&x| x as u32).collect())
            .expect("table entries are permutations")
    }
}

/// Number of rigid descent data of degree `d`.
pub fn enumerate_descent_data(cfg: &SchemeConfig, d: usize, bounds: &Bounds) -> Result<u128> {
    Ok(Setup::new(cfg, d, bounds)?.rigid_count())
}

/// Calls `f` on every rigid datum in a fixed order, stopping if it breaks.
pub fn for_each_descent_datum(
    cfg: &SchemeConfig,
    d: usize,
    bounds: &Bounds,
    mut f: impl FnMut(&DescentDatum) -> ControlFlow<()>,
) -> Result<()> {
    let setup = Setup::new(cfg, d, bounds)?;
    let n = cfg.n();
    for first in 0..setup.actions[0].len() {
        let mut stop = false;
        setup.for_each_choice(first, |choice| {
            if stop {
                return;
            }
            let flow = setup.walk_lambdas(choice, &mut Vec::new(), &mut |ls| {
                let acts: Vec<Vec<Perm>> = choice
                    .iter()
                    .enumerate()
                    .map(|(v, &c)| setup.actions[v][c].iter().map(|&e| setup.perm(e)).collect())
                    .collect();
                let (rho, tau) = acts.split_at(n);
                f(&DescentDatum {
                    degree: d,
                    rho: rho.to_vec(),
                    tau: tau.to_vec(),
                    lambda: ls.iter().map(|&l| setup.perm(l)).collect(),
                })
            });
            stop = flow.is_break();
        });
        if stop {
            break;
        }
    }
    Ok(())
}

/// `rigid_count / (d!)^(n+m)`.
pub fn groupoid_cardinality(cfg: &SchemeConfig, d: usize, bounds: &Bounds) -> Result<Ratio<u128>> {
    let rigid = enumerate_descent_data(cfg, d, bounds)?;
    Ok(Ratio::new(rigid, relabelling_order(cfg, d)?))
}

/// Number of rigid data whose total space is connected.
pub fn connected_count(cfg: &SchemeConfig, d: usize, bounds: &Bounds) -> Result<u128> {
    Ok(Setup::new(cfg, d, bounds)?.connected_count())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fraction {
    pub num: u128,
    pub den: u128,
}

impl From<Ratio<u128>> for Fraction {
    fn from(r: Ratio<u128>) -> Self {
        Fraction {
            num: *r.numer(),
            den: *r.denom(),
        }
    }
}

impl From<Fraction> for Ratio<u128> {
    fn from(f: Fraction) -> Self {
        Ratio::new(f.num, f.den)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConnectedComparison {
    pub connected_count: u128,
    pub connected_cardinality: Fraction,
    pub transitive_count: u64,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleReport {
    pub degree: usize,
    pub rigid_count: u128,
    pub groupoid_cardinality: Fraction,
    pub presentation_count: u64,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub connected: Option<ConnectedComparison>,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
            && self
                .connected
                .as_ref()
                .is_none_or(|c| c.verdict == Verdict::Pass)
    }

    /// Groupoid cardinality times `d!`, the number the presentation must match.
    pub fn oracle_count(&self) -> Ratio<u128> {
        Ratio::from(self.groupoid_cardinality) * Ratio::from_integer(factorial(self.degree))
    }
}

fn verdict(ok: bool) -> Verdict {
    if ok {
        Verdict::Pass
    } else {
        Verdict::Fail
    }
}

/// Checks `groupoid_cardinality × d! = |Hom(π, Sym(d))|` exactly; with
/// `connected` also the connected analogue against transitive actions.
pub fn compare(
    cfg: &SchemeConfig,
    d: usize,
    result: &Pi1Result,
    bounds: &Bounds,
    connected: bool,
) -> Result<OracleReport> {
    let setup = Setup::new(cfg, d, bounds)?;
    let order = relabelling_order(cfg, d)?;
    let rigid = setup.rigid_count();
    let card = Ratio::new(rigid, order);
    let presentation_count = count_homs_with(&result.presentation, d, bounds)?;
    let ok =
        card * Ratio::from_integer(factorial(d)) == Ratio::from_integer(presentation_count as u128);
    let connected = if connected {
        let cc = setup.connected_count();
        let cc_card = Ratio::new(cc, order);
        let transitive = count_transitive_homs_with(&result.presentation, d, bounds)?;
        Some(ConnectedComparison {
            connected_count: cc,
            connected_cardinality: cc_card.into(),
            transitive_count: transitive,
            verdict: verdict(
                cc_card * Ratio::from_integer(factorial(d))
                    == Ratio::from_integer(transitive as u128),
            ),
        })
    } else {
        None
    };
    Ok(OracleReport {
        degree: d,
        rigid_count: rigid,
        groupoid_cardinality: card.into(),
        presentation_count,
        verdict: verdict(ok),
        connected,
    })
}

/// The smallest degree whose report fails, with both counts.
pub fn first_failure(reports: &[OracleReport]) -> Option<(usize, Ratio<u128>, u64)> {
    reports
        .iter()
        .filter(|r| !r.passed())
        .min_by_key(|r| r.degree)
        .map(|r| (r.degree, r.oracle_count(), r.presentation_count))
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::*;
    use crate::group_spec::GroupSpec;
    use crate::pi1::{pi1_devissage, Pi1Options};
    use crate::scheme::{Branch, Component, Singular};

    fn cfg(
        comps: &[(&str, GroupSpec)],
        sings: &[&str],
        branches: &[(&str, &str, &str)],
    ) -> SchemeConfig {
        SchemeConfig {
            components: comps
                .iter()
                .map(|(id, g)| Component {
                    id: (*id).into(),
                    group: g.clone(),
                })
                .collect(),
            singulars: sings
                .iter()
                .map(|id| Singular {
                    id: (*id).into(),
                    group: GroupSpec::trivial(),
                })
                .collect(),
            branches: branches
                .iter()
                .map(|(id, c, s)| Branch {
                    id: (*id).into(),
                    component: (*c).into(),
                    singular: (*s).into(),
                    group: GroupSpec::trivial(),
                    psi: BTreeMap::new(),
                    phi: BTreeMap::new(),
                })
                .collect(),
        }
    }

    fn nodal() -> SchemeConfig {
        cfg(
            &[("X", GroupSpec::trivial())],
            &["Z"],
            &[("a", "X", "Z"), ("b", "X", "Z")],
        )
    }

    fn regular(g: GroupSpec) -> SchemeConfig {
        cfg(&[("X", g)], &[], &[])
    }

    fn theta() -> SchemeConfig {
        let t = GroupSpec::trivial;
        cfg(
            &[("X1", t()), ("X2", t())],
            &["Z1", "Z2"],
            &[
                ("a", "X1", "Z1"),
                ("b", "X2", "Z1"),
                ("c", "X1", "Z2"),
                ("d", "X2", "Z2"),
            ],
        )
    }

    #[test]
    fn rigid_counts() {
        let b = Bounds::default();
        assert_eq!(enumerate_descent_data(&nodal(), 2, &b).unwrap(), 4);
        assert_eq!(
            enumerate_descent_data(&regular(GroupSpec::cyclic(2).unwrap()), 2, &b).unwrap(),
            2
        );
        assert_eq!(enumerate_descent_data(&theta(), 2, &b).unwrap(), 16);
    }

    #[test]
    fn cardinalities() {
        let b = Bounds::default();
        assert_eq!(
            groupoid_cardinality(&nodal(), 2, &b).unwrap(),
            Ratio::from_integer(1)
        );
        assert_eq!(
            groupoid_cardinality(&regular(GroupSpec::cyclic(2).unwrap()), 2, &b).unwrap(),
            Ratio::from_integer(1)
        );
        assert_eq!(
            groupoid_cardinality(&regular(GroupSpec::trivial()), 3, &b).unwrap(),
            Ratio::new(1, 6)
        );
    }

    #[test]
    fn reports_on_small_schemes() {
        let b = Bounds::default();
        let o = Pi1Options::default();
        let nodal_pi = pi1_devissage(&nodal(), &o).unwrap();
        let r = compare(&nodal(), 2, &nodal_pi, &b, true).unwrap();
        assert_eq!((r.presentation_count, r.verdict), (2, Verdict::Pass));
        let c = r.connected.unwrap();
        assert_eq!(c.connected_cardinality, Fraction { num: 1, den: 2 });
        assert_eq!(c.transitive_count, 1);
        let r = compare(&nodal(), 3, &nodal_pi, &b, false).unwrap();
        assert_eq!(r.presentation_count, 6);
        assert!(r.passed());

        let reg = regular(GroupSpec::cyclic(2).unwrap());
        let r = compare(&reg, 3, &pi1_devissage(&reg, &o).unwrap(), &b, false).unwrap();
        assert_eq!(r.presentation_count, 4);
        assert!(r.passed());
    }

    #[test]
    fn connected_counts() {
        let b = Bounds::default();
        assert_eq!(
            connected_count(&regular(GroupSpec::trivial()), 2, &b).unwrap(),
            0
        );
        let th = theta();
        let pi = pi1_devissage(&th, &Pi1Options::default()).unwrap();
        let r = compare(&th, 2, &pi, &b, true).unwrap();
        assert!(r.passed());
        assert_eq!(r.connected.unwrap().transitive_count, 1);
    }

    #[test]
    fn ceiling_is_enforced() {
        let tight = Bounds {
            oracle_ceiling: 10,
            ..Bounds::default()
        };
        let err = enumerate_descent_data(&theta(), 2, &tight).unwrap_err();
        assert!(err.is_resource());
    }

    #[test]
    fn streamed_data_match_the_count() {
        let b = Bounds::default();
        let mut seen = 0u128;
        for_each_descent_datum(&theta(), 3, &b, |_| {
            seen += 1;
            ControlFlow::Continue(())
        })
        .unwrap();
        assert_eq!(seen, enumerate_descent_data(&theta(), 3, &b).unwrap());
    }
}
