//! Shared helpers for integration tests: seeded configuration generators and
//! brute-force reference computations written independently of the library's
//! search code.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use proetale_core::perm::Perm;
use proetale_core::{
    Branch, Component, GeneratorSymbol, GroupSpec, Homo, Presentation, SchemeConfig, Singular, Word,
};
use rand::RngExt;

pub fn fact(d: usize) -> u64 {
    (1..=d as u64).product()
}

pub fn all_perms(d: usize) -> Vec<Perm> {
    fn rec(prefix: &mut Vec<u32>, d: usize, out: &mut Vec<Perm>) {
        if prefix.len() == d {
            out.push(Perm::from_images(prefix.clone()).unwrap());
            return;
        }
        for x in 0..d as u32 {
            if !prefix.contains(&x) {
                prefix.push(x);
                rec(prefix, d, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), d, &mut out);
    out
}

pub fn eval(w: &Word, at: &BTreeMap<GeneratorSymbol, Perm>, d: usize) -> Perm {
    w.letters().iter().fold(Perm::identity(d), |acc, (s, e)| {
        acc.compose(&at[s].pow(*e as i64))
    })
}

/// Every homomorphism `p -> Sym(d)`, by trying all generator tuples.
pub fn naive_homs(p: &Presentation, d: usize) -> Vec<BTreeMap<GeneratorSymbol, Perm>> {
    let perms = all_perms(d);
    let gens = p.generators();
    let mut out = Vec::new();
    let mut idx = vec![0usize; gens.len()];
    loop {
        let at: BTreeMap<_, _> = gens
            .iter()
            .cloned()
            .zip(idx.iter().map(|&i| perms[i].clone()))
            .collect();
        if p.relators().iter().all(|r| eval(r, &at, d).is_identity()) {
            out.push(at);
        }
        let mut k = 0;
        loop {
            if k == idx.len() {
                return out;
            }
            idx[k] += 1;
            if idx[k] < perms.len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

pub fn naive_count(p: &Presentation, d: usize) -> u64 {
    naive_homs(p, d).len() as u64
}

/// Words reaching every element of a concrete group, found by breadth-first
/// search in its permutation realisation.
pub fn element_words(g: &GroupSpec) -> Vec<Word> {
    let mut seen = BTreeSet::new();
    let mut out = vec![Word::empty()];
    seen.insert(g.evaluate(&Word::empty()).unwrap());
    let mut frontier = vec![Word::empty()];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for w in &frontier {
            for s in g.generators() {
                let v = w.concat(&Word::gen(s));
                if seen.insert(g.evaluate(&v).unwrap()) {
                    out.push(v.clone());
                    next.push(v);
                }
            }
        }
        frontier = next;
    }
    out
}

/// Every homomorphism between two concrete groups, as generator images.
pub fn all_maps(source: &GroupSpec, target: &GroupSpec) -> Vec<BTreeMap<GeneratorSymbol, Word>> {
    let elems = element_words(target);
    let gens = source.generators();
    let mut out = Vec::new();
    let mut idx = vec![0usize; gens.len()];
    loop {
        let images: BTreeMap<_, _> = gens
            .iter()
            .cloned()
            .zip(idx.iter().map(|&i| elems[i].clone()))
            .collect();
        if Homo::between("probe", source, target, images.clone()).is_ok() {
            out.push(images);
        }
        let mut k = 0;
        loop {
            if k == idx.len() {
                return out;
            }
            idx[k] += 1;
            if idx[k] < elems.len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

pub fn group(name: &str) -> GroupSpec {
    match name {
        "1" => GroupSpec::trivial(),
        "C2" => GroupSpec::cyclic(2).unwrap(),
        "C3" => GroupSpec::cyclic(3).unwrap(),
        "C4" => GroupSpec::cyclic(4).unwrap(),
        "S3" => GroupSpec::symmetric(3).unwrap(),
        other => panic!("no test group {other}"),
    }
}

/// A random connected incidence graph: a bipartite spanning tree grown one
/// vertex at a time, then extra branches up to `max_branches`.
pub fn random_shape<R: RngExt>(
    rng: &mut R,
    max_n: usize,
    max_m: usize,
    max_branches: usize,
) -> (usize, usize, Vec<(usize, usize)>) {
    loop {
        let n = rng.random_range(1..=max_n);
        let m = rng.random_range(0..=max_m);
        if m == 0 {
            if n == 1 {
                return (1, 0, Vec::new());
            }
            continue;
        }
        if n + m - 1 > max_branches {
            continue;
        }
        let mut edges = vec![(0usize, 0usize)];
        let (mut placed_c, mut placed_s) = (1usize, 1usize);
        while placed_c < n || placed_s < m {
            let take_c = placed_s == m || (placed_c < n && rng.random_bool(0.5));
            if take_c {
                edges.push((placed_c, rng.random_range(0..placed_s)));
                placed_c += 1;
            } else {
                edges.push((rng.random_range(0..placed_c), placed_s));
                placed_s += 1;
            }
        }
        let total = rng.random_range(edges.len()..=max_branches);
        while edges.len() < total {
            edges.push((rng.random_range(0..n), rng.random_range(0..m)));
        }
        return (n, m, edges);
    }
}

type BranchSpec = (
    usize,
    usize,
    GroupSpec,
    BTreeMap<GeneratorSymbol, Word>,
    BTreeMap<GeneratorSymbol, Word>,
);

fn build(comps: Vec<GroupSpec>, sings: Vec<GroupSpec>, branches: Vec<BranchSpec>) -> SchemeConfig {
    SchemeConfig {
        components: comps
            .into_iter()
            .enumerate()
            .map(|(i, group)| Component {
                id: format!("X{}", i + 1),
                group,
            })
            .collect(),
        singulars: sings
            .into_iter()
            .enumerate()
            .map(|(j, group)| Singular {
                id: format!("Z{}", j + 1),
                group,
            })
            .collect(),
        branches: branches
            .into_iter()
            .enumerate()
            .map(|(b, (c, s, group, psi, phi))| Branch {
                id: format!("b{}", b + 1),
                component: format!("X{}", c + 1),
                singular: format!("Z{}", s + 1),
                group,
                psi,
                phi,
            })
            .collect(),
    }
}

/// Trivial singular and branch groups; vertex groups from `{1, C2, C3}`.
pub fn random_trivial_config<R: RngExt>(
    rng: &mut R,
    max_n: usize,
    max_m: usize,
    max_branches: usize,
) -> SchemeConfig {
    let (n, m, edges) = random_shape(rng, max_n, max_m, max_branches);
    let pool = ["1", "C2", "C3"];
    let comps = (0..n)
        .map(|_| group(pool[rng.random_range(0..pool.len())]))
        .collect();
    let sings = (0..m).map(|_| GroupSpec::trivial()).collect();
    let branches = edges
        .into_iter()
        .map(|(c, s)| (c, s, GroupSpec::trivial(), BTreeMap::new(), BTreeMap::new()))
        .collect();
    build(comps, sings, branches)
}

/// Non-trivial singular and branch groups with randomly chosen valid maps.
pub fn random_general_config<R: RngExt>(
    rng: &mut R,
    max_n: usize,
    max_m: usize,
    max_branches: usize,
) -> SchemeConfig {
    let (n, m, edges) = random_shape(rng, max_n, max_m, max_branches);
    let vertex_pool = ["1", "C2", "C3", "C4", "S3"];
    let singular_pool = ["1", "C2", "S3"];
    let branch_pool = ["1", "C2"];
    let comps: Vec<GroupSpec> = (0..n)
        .map(|_| group(vertex_pool[rng.random_range(0..vertex_pool.len())]))
        .collect();
    let sings: Vec<GroupSpec> = (0..m)
        .map(|_| group(singular_pool[rng.random_range(0..singular_pool.len())]))
        .collect();
    let branches = edges
        .into_iter()
        .map(|(c, s)| {
            let k = group(branch_pool[rng.random_range(0..branch_pool.len())]);
            let psis = all_maps(&k, &comps[c]);
            let phis = all_maps(&k, &sings[s]);
            let psi = psis[rng.random_range(0..psis.len())].clone();
            let phi = phis[rng.random_range(0..phis.len())].clone();
            (c, s, k, psi, phi)
        })
        .collect();
    build(comps, sings, branches)
}

pub fn corpus_dir() -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../cli/corpus")
}

/// The bundled example configurations, by file stem.
pub fn corpus() -> Vec<(String, SchemeConfig)> {
    let mut out: Vec<(String, SchemeConfig)> = std::fs::read_dir(corpus_dir())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .map(|p| {
            let text = std::fs::read_to_string(&p).unwrap();
            (
                p.file_stem().unwrap().to_string_lossy().into_owned(),
                SchemeConfig::from_json_str(&text).unwrap(),
            )
        })
        .collect();
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}
