//! Permutations in two flavours: a general [`Perm`] used to realise finite
//! groups concretely, and [`SymTable`], a fully tabulated `Sym(d)` for small
//! `d` that the hom counter and the cover oracle walk over.

use std::collections::{HashMap, VecDeque};
use std::sync::OnceLock;

use crate::bounds::HARD_MAX_DEGREE;
use crate::error::{Error, Result};

/// A permutation of `0..n`, stored as its image list.
///
/// Products compose right to left: `(a * b)(i) = a(b(i))`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(Vec<u32>);

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm((0..n as u32).collect())
    }

    pub fn from_images(images: Vec<u32>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            let x = x as usize;
            if x >= n || seen[x] {
                return Err(Error::input(format!(
                    "{images:?} is not a permutation of 0..{n}"
                )));
            }
            seen[x] = true;
        }
        Ok(Perm(images))
    }

    /// Builds the cycle `(0 1 ... k-1)` on `n >= k` points.
    pub fn cycle(n: usize, k: usize) -> Self {
        let mut images: Vec<u32> = (0..n as u32).collect();
        for (i, x) in images.iter_mut().enumerate().take(k) {
            *x = ((i + 1) % k) as u32;
        }
        Perm(images)
    }

    pub fn transposition(n: usize, a: usize, b: usize) -> Self {
        let mut images: Vec<u32> = (0..n as u32).collect();
        images.swap(a, b);
        Perm(images)
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn images(&self) -> &[u32] {
        &self.0
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i] as usize
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    pub fn compose(&self, other: &Perm) -> Perm {
        debug_assert_eq!(self.degree(), other.degree());
        Perm(other.0.iter().map(|&x| self.0[x as usize]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u32; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Perm(inv)
    }

    pub fn pow(&self, exp: i64) -> Perm {
        let base = if exp < 0 {
            self.inverse()
        } else {
            self.clone()
        };
        let mut acc = Perm::identity(self.degree());
        for _ in 0..exp.unsigned_abs() {
            acc = acc.compose(&base);
        }
        acc
    }

    /// Pads to `n` points by fixing the extra ones.
    pub fn extended(&self, n: usize) -> Perm {
        let mut images = self.0.clone();
        images.extend(self.0.len() as u32..n as u32);
        Perm(images)
    }
}

/// Enumerates the group generated by `gens` (all of degree `n`), failing once
/// more than `max_order` elements have been found.
pub fn closure(n: usize, gens: &[Perm], max_order: usize) -> Result<Vec<Perm>> {
    let id = Perm::identity(n);
    let mut seen: HashMap<Perm, ()> = HashMap::new();
    let mut out = vec![id.clone()];
    seen.insert(id.clone(), ());
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = g.compose(&x);
            if !seen.contains_key(&y) {
                if out.len() >= max_order {
                    return Err(Error::Resource {
                        what: "group closure".into(),
                        estimate: (out.len() + 1) as u128,
                        limit: max_order as u128,
                    });
                }
                seen.insert(y.clone(), ());
                out.push(y.clone());
                queue.push_back(y);
            }
        }
    }
    Ok(out)
}

/// Element index into a [`SymTable`].
pub type Elem = u16;

/// `Sym(d)` tabulated: elements are indices, products and inverses are table
/// lookups.
#[derive(Debug)]
pub struct SymTable {
    degree: usize,
    elems: Vec<Vec<u8>>,
    mul: Vec<Elem>,
    inv: Vec<Elem>,
    identity: Elem,
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

fn all_perms(d: usize) -> Vec<Vec<u8>> {
    fn rec(prefix: &mut Vec<u8>, used: &mut [bool], d: usize, out: &mut Vec<Vec<u8>>) {
        if prefix.len() == d {
            out.push(prefix.clone());
            return;
        }
        for x in 0..d {
            if !used[x] {
                used[x] = true;
                prefix.push(x as u8);
                rec(prefix, used, d, out);
                prefix.pop();
                used[x] = false;
            }
        }
    }
    let mut out = Vec::with_capacity(factorial(d));
    rec(&mut Vec::new(), &mut vec![false; d], d, &mut out);
    out
}

impl SymTable {
    fn build(d: usize) -> SymTable {
        let elems = all_perms(d);
        let index: HashMap<Vec<u8>, Elem> = elems
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i as Elem))
            .collect();
        let n = elems.len();
        let mut mul = vec![0 as Elem; n * n];
        let mut inv = vec![0 as Elem; n];
        for (i, a) in elems.iter().enumerate() {
            for (j, b) in elems.iter().enumerate() {
                let c: Vec<u8> = b.iter().map(|&x| a[x as usize]).collect();
                mul[i * n + j] = index[&c];
            }
            let mut ai = vec![0u8; d];
            for (k, &x) in a.iter().enumerate() {
                ai[x as usize] = k as u8;
            }
            inv[i] = index[&ai];
        }
        let identity = index[&(0..d as u8).collect::<Vec<_>>()];
        SymTable {
            degree: d,
            elems,
            mul,
            inv,
            identity,
        }
    }

    /// Shared table for `Sym(d)`, `d <= HARD_MAX_DEGREE`.
    pub fn get(d: usize) -> Result<&'static SymTable> {
        static TABLES: [OnceLock<SymTable>; HARD_MAX_DEGREE + 1] =
            [const { OnceLock::new() }; HARD_MAX_DEGREE + 1];
        if d > HARD_MAX_DEGREE {
            return Err(Error::Resource {
                what: "symmetric group degree".into(),
                estimate: d as u128,
                limit: HARD_MAX_DEGREE as u128,
            });
        }
        Ok(TABLES[d].get_or_init(|| SymTable::build(d)))
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elems.len()
    }

    pub fn identity(&self) -> Elem {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.mul[a as usize * self.elems.len() + b as usize]
    }

    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        self.inv[a as usize]
    }

    pub fn pow(&self, a: Elem, exp: i32) -> Elem {
        let base = if exp < 0 { self.inv(a) } else { a };
        let mut acc = self.identity;
        for _ in 0..exp.unsigned_abs() {
            acc = self.mul(acc, base);
        }
        acc
    }

    /// Image list of an element.
    pub fn images(&self, a: Elem) -> &[u8] {
        &self.elems[a as usize]
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.elems.len() as Elem
    }

    /// Whether the subgroup generated by `gens` acts transitively on `0..d`.
    pub fn is_transitive(&self, gens: &[Elem]) -> bool {
        let d = self.degree;
        if d == 0 {
            return false;
        }
        let mut seen = vec![false; d];
        seen[0] = true;
        let mut stack = vec![0usize];
        let mut count = 1;
        while let Some(x) = stack.pop() {
            for &g in gens {
                let y = self.elems[g as usize][x] as usize;
                if !seen[y] {
                    seen[y] = true;
                    count += 1;
                    stack.push(y);
                }
            }
        }
        count == d
    }
}
