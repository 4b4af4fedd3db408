//! Exhaustive enumeration of homomorphisms from a finitely presented group
//! into `Sym(d)`.
//!
//! This is the semantic evaluator for every construction in the crate: two
//! presentations are treated as the same group when they have the same number
//! of homomorphisms into `Sym(d)` for every tested `d`.
//!
//! The search assigns generators one at a time. A generator that occurs exactly
//! once, with exponent `±1`, in a relator whose other generators are already
//! assigned is solved for instead of enumerated; every other generator is a
//! free choice over the elements of `Sym(d)` that satisfy the relators in that
//! generator alone. The resource guard bounds the product of those choice
//! counts.

use std::collections::HashMap;
use std::ops::ControlFlow;

use crate::bounds::Bounds;
use crate::error::{Error, Result};
use crate::perm::{Elem, SymTable};
use crate::presentation::Presentation;
use crate::word::{GeneratorSymbol, Word};

type Letters = Vec<(usize, i32)>;

#[derive(Debug, Clone)]
enum StepKind {
    Choose,
    /// Generator value is `rest^-sign`.
    Solve {
        rest: Letters,
        sign: i32,
    },
}

#[derive(Debug, Clone)]
struct Step {
    gen: usize,
    kind: StepKind,
    /// Relators that become fully assigned at this step and must be checked.
    checks: Vec<usize>,
}

/// The set `Hom(G, Sym(d))` for a presented group `G`, ready to enumerate.
#[derive(Debug)]
pub struct HomSpace {
    table: &'static SymTable,
    generators: Vec<GeneratorSymbol>,
    index: HashMap<GeneratorSymbol, usize>,
    relators: Vec<Letters>,
    steps: Vec<Step>,
    /// Per generator, the elements satisfying every relator in that generator alone.
    candidates: Vec<Vec<Elem>>,
}

fn compile(index: &HashMap<GeneratorSymbol, usize>, w: &Word) -> Letters {
    w.letters().iter().map(|(s, e)| (index[s], *e)).collect()
}

fn plan(num_gens: usize, relators: &[Letters]) -> Vec<Step> {
    let mut assigned = vec![false; num_gens];
    let mut checked = vec![false; relators.len()];
    let mut steps = Vec::with_capacity(num_gens);
    for _ in 0..num_gens {
        let mut solve: Option<(usize, usize, usize)> = None;
        'find: for (ri, r) in relators.iter().enumerate() {
            if checked[ri] {
                continue;
            }
            let unassigned: Vec<usize> = r
                .iter()
                .filter(|(g, _)| !assigned[*g])
                .map(|(g, _)| *g)
                .collect();
            if unassigned.is_empty() {
                continue;
            }
            let g = unassigned[0];
            if unassigned.iter().all(|&x| x == g) && unassigned.len() == 1 {
                let pos = r.iter().position(|(x, _)| *x == g).unwrap();
                if r[pos].1.abs() == 1 {
                    solve = Some((g, ri, pos));
                    break 'find;
                }
            }
        }
        let step = match solve {
            Some((g, ri, pos)) => {
                let r = &relators[ri];
                let rest: Letters = r[pos + 1..]
                    .iter()
                    .chain(r[..pos].iter())
                    .copied()
                    .collect();
                checked[ri] = true;
                assigned[g] = true;
                Step {
                    gen: g,
                    kind: StepKind::Solve {
                        rest,
                        sign: r[pos].1,
                    },
                    checks: Vec::new(),
                }
            }
            None => {
                // Free choice: favour the generator that brings some relator
                // closest to being fully assigned.
                let mut best: Option<(usize, usize)> = None;
                for (ri, r) in relators.iter().enumerate() {
                    if checked[ri] {
                        continue;
                    }
                    let mut open: Vec<usize> = r
                        .iter()
                        .filter(|(g, _)| !assigned[*g])
                        .map(|(g, _)| *g)
                        .collect();
                    open.sort_unstable();
                    open.dedup();
                    if let Some(&g) = open.first() {
                        if best.is_none_or(|(n, _)| open.len() < n) {
                            best = Some((open.len(), g));
                        }
                    }
                }
                let g = match best {
                    Some((_, g)) => g,
                    None => (0..num_gens).find(|&g| !assigned[g]).unwrap(),
                };
                assigned[g] = true;
                Step {
                    gen: g,
                    kind: StepKind::Choose,
                    checks: Vec::new(),
                }
            }
        };
        steps.push(step);
        let last = steps.last_mut().unwrap();
        for (ri, r) in relators.iter().enumerate() {
            if !checked[ri] && r.iter().all(|(g, _)| assigned[*g]) {
                checked[ri] = true;
                last.checks.push(ri);
            }
        }
    }
    steps
}

impl HomSpace {
    pub fn new(p: &Presentation, d: usize, bounds: &Bounds) -> Result<Self> {
        if d > bounds.max_degree {
            return Err(Error::Resource {
                what: "hom-count degree".into(),
                estimate: d as u128,
                limit: bounds.max_degree as u128,
            });
        }
        let table = SymTable::get(d)?;
        let generators = p.generators().to_vec();
        let index: HashMap<GeneratorSymbol, usize> = generators
            .iter()
            .enumerate()
            .map(|(i, g)| (g.clone(), i))
            .collect();
        let relators: Vec<Letters> = p.relators().iter().map(|r| compile(&index, r)).collect();
        let steps = plan(generators.len(), &relators);
        let candidates = (0..generators.len())
            .map(|g| {
                let own: Vec<&Letters> = relators
                    .iter()
                    .filter(|r| r.iter().all(|(x, _)| *x == g))
                    .collect();
                table
                    .elements()
                    .filter(|&x| {
                        own.iter().all(|r| {
                            r.iter().fold(table.identity(), |acc, &(_, e)| {
                                table.mul(acc, table.pow(x, e))
                            }) == table.identity()
                        })
                    })
                    .collect()
            })
            .collect();
        let space = HomSpace {
            table,
            generators,
            index,
            relators,
            steps,
            candidates,
        };
        let estimate = space.search_estimate();
        if estimate > bounds.max_search {
            return Err(Error::Resource {
                what: format!("hom enumeration into Sym({d})"),
                estimate,
                limit: bounds.max_search,
            });
        }
        Ok(space)
    }

    /// Product, over the generators that are enumerated rather than solved,
    /// of the number of candidate images surviving that generator's own
    /// relators. At most `(d!)^k` for `k` enumerated generators.
    pub fn search_estimate(&self) -> u128 {
        self.steps
            .iter()
            .filter(|s| matches!(s.kind, StepKind::Choose))
            .fold(1u128, |acc, s| {
                acc.saturating_mul(self.candidates[s.gen].len() as u128)
            })
    }

    pub fn degree(&self) -> usize {
        self.table.degree()
    }

    pub fn table(&self) -> &'static SymTable {
        self.table
    }

    pub fn generators(&self) -> &[GeneratorSymbol] {
        &self.generators
    }

    fn eval(&self, letters: &Letters, assignment: &[Elem]) -> Elem {
        letters.iter().fold(self.table.identity(), |acc, &(g, e)| {
            self.table.mul(acc, self.table.pow(assignment[g], e))
        })
    }

    /// Evaluates a word over this presentation's generators at an assignment.
    pub fn eval_word(&self, w: &Word, assignment: &[Elem]) -> Result<Elem> {
        let mut acc = self.table.identity();
        for (s, e) in w.letters() {
            let g = *self
                .index
                .get(s)
                .ok_or_else(|| Error::UndeclaredGenerator {
                    symbol: s.to_string(),
                    context: "word evaluation".into(),
                })?;
            acc = self.table.mul(acc, self.table.pow(assignment[g], *e));
        }
        Ok(acc)
    }

    /// Calls `f` on every homomorphism, given as the image of each generator
    /// in declaration order. Stops early when `f` breaks.
    pub fn for_each<F>(&self, mut f: F)
    where
        F: FnMut(&[Elem]) -> ControlFlow<()>,
    {
        let mut assignment = vec![self.table.identity(); self.generators.len()];
        let _ = self.walk(0, &mut assignment, &mut f);
    }

    fn walk<F>(&self, depth: usize, assignment: &mut [Elem], f: &mut F) -> ControlFlow<()>
    where
        F: FnMut(&[Elem]) -> ControlFlow<()>,
    {
        let Some(step) = self.steps.get(depth) else {
            return f(assignment);
        };
        match &step.kind {
            StepKind::Choose => {
                for &x in &self.candidates[step.gen] {
                    assignment[step.gen] = x;
                    if self.passes(step, assignment) {
                        self.walk(depth + 1, assignment, f)?;
                    }
                }
                ControlFlow::Continue(())
            }
            StepKind::Solve { rest, sign } => {
                let w = self.eval(rest, assignment);
                assignment[step.gen] = if *sign > 0 { self.table.inv(w) } else { w };
                if self.passes(step, assignment) {
                    self.walk(depth + 1, assignment, f)
                } else {
                    ControlFlow::Continue(())
                }
            }
        }
    }

    fn passes(&self, step: &Step, assignment: &[Elem]) -> bool {
        step.checks
            .iter()
            .all(|&ri| self.eval(&self.relators[ri], assignment) == self.table.identity())
    }

    pub fn count(&self) -> u64 {
        let mut n = 0u64;
        self.for_each(|_| {
            n += 1;
            ControlFlow::Continue(())
        });
        n
    }

    /// Homomorphisms whose image acts transitively on `0..d`.
    pub fn count_transitive(&self) -> u64 {
        let mut n = 0u64;
        self.for_each(|a| {
            if self.table.is_transitive(a) {
                n += 1;
            }
            ControlFlow::Continue(())
        });
        n
    }

    pub fn collect(&self) -> Vec<Vec<Elem>> {
        let mut out = Vec::new();
        self.for_each(|a| {
            out.push(a.to_vec());
            ControlFlow::Continue(())
        });
        out
    }
}

/// `|Hom(G, Sym(d))|` under default bounds.
pub fn count_homs(p: &Presentation, d: usize) -> Result<u64> {
    count_homs_with(p, d, &Bounds::default())
}

pub fn count_homs_with(p: &Presentation, d: usize, bounds: &Bounds) -> Result<u64> {
    Ok(HomSpace::new(p, d, bounds)?.count())
}

/// Number of transitive actions of `G` on `d` labelled points.
pub fn count_transitive_homs(p: &Presentation, d: usize) -> Result<u64> {
    count_transitive_homs_with(p, d, &Bounds::default())
}

pub fn count_transitive_homs_with(p: &Presentation, d: usize, bounds: &Bounds) -> Result<u64> {
    Ok(HomSpace::new(p, d, bounds)?.count_transitive())
}

/// Whether `w` maps to the identity under every homomorphism into `Sym(d)`.
pub fn word_vanishes(p: &Presentation, w: &Word, d: usize, bounds: &Bounds) -> Result<bool> {
    p.check_word(w, "vanishing test")?;
    let space = HomSpace::new(p, d, bounds)?;
    let id = space.table().identity();
    let mut ok = true;
    space.for_each(|a| {
        if space.eval_word(w, a).expect("alphabet checked") != id {
            ok = false;
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    Ok(ok)
}
