//! Brute-force oracles on multiplication tables, independent of the pc
//! search code they are compared against.

#![allow(dead_code)]

pub mod reference;

use schur_sigma::classify::{Catalog, MasseyRecord};
use schur_sigma::pcgroup::is_isomorphic;
use schur_sigma::{covers, fp, PcGroup};
use std::collections::HashMap;

const P: u32 = 3;

/// Multiplication table of a small group; element 0 is the identity.
pub struct Table {
    pub n: usize,
    pub mul: Vec<Vec<usize>>,
    inv: Vec<usize>,
}

impl Table {
    pub fn from_pc(g: &PcGroup) -> Table {
        let elems: Vec<Vec<u8>> = g.elements().collect();
        let index: HashMap<&Vec<u8>, usize> = elems.iter().enumerate().map(|(i, e)| (e, i)).collect();
        assert!(g.is_identity(&elems[0]));
        let mul = elems
            .iter()
            .map(|x| elems.iter().map(|y| index[&g.mul(x, y)]).collect())
            .collect();
        let inv = elems.iter().map(|x| index[&g.inverse(x)]).collect();
        Table { n: elems.len(), mul, inv }
    }

    pub fn order(&self, x: usize) -> usize {
        let (mut y, mut k) = (x, 1);
        while y != 0 {
            y = self.mul[y][x];
            k += 1;
        }
        k
    }

    pub fn order_profile(&self) -> Vec<usize> {
        let mut v: Vec<usize> = (0..self.n).map(|x| self.order(x)).collect();
        v.sort_unstable();
        v
    }

    pub fn closure(&self, gens: &[usize]) -> Vec<bool> {
        let mut inside = vec![false; self.n];
        inside[0] = true;
        let mut queue = vec![0];
        while let Some(x) = queue.pop() {
            for &g in gens {
                let y = self.mul[x][g];
                if !inside[y] {
                    inside[y] = true;
                    queue.push(y);
                }
            }
        }
        inside
    }

    fn inverse(&self, x: usize) -> usize {
        self.inv[x]
    }

    /// Subgroup generated by p-th powers and commutators.
    pub fn frattini(&self, p: usize) -> Vec<bool> {
        let mut gens = Vec::new();
        for x in 0..self.n {
            let mut y = 0;
            for _ in 0..p {
                y = self.mul[y][x];
            }
            gens.push(y);
            for z in 0..self.n {
                let c = self.mul[self.mul[self.inverse(x)][self.inverse(z)]][self.mul[x][z]];
                gens.push(c);
            }
        }
        gens.sort_unstable();
        gens.dedup();
        self.closure(&gens)
    }

    /// A generating set of minimal size: elements chosen one at a time
    /// outside the subgroup generated so far together with the Frattini
    /// subgroup.
    pub fn min_generators(&self, p: usize) -> Vec<usize> {
        let fr = self.frattini(p);
        let fr_elems: Vec<usize> = (0..self.n).filter(|&x| fr[x]).collect();
        let mut gens = Vec::new();
        loop {
            let mut all = gens.clone();
            all.extend(&fr_elems);
            let inside = self.closure(&all);
            match (0..self.n).find(|&x| !inside[x]) {
                Some(x) => gens.push(x),
                None => return gens,
            }
        }
    }
}

impl Table {
    fn members(set: &[bool]) -> Vec<usize> {
        (0..set.len()).filter(|&x| set[x]).collect()
    }

    fn commutator(&self, a: &[bool], b: &[bool]) -> Vec<bool> {
        let mut gens = Vec::new();
        for x in Self::members(a) {
            for y in Self::members(b) {
                gens.push(self.mul[self.mul[self.inverse(x)][self.inverse(y)]][self.mul[x][y]]);
            }
        }
        gens.sort_unstable();
        gens.dedup();
        self.closure(&gens)
    }

    fn powers(&self, a: &[bool], p: usize) -> Vec<bool> {
        let gens: Vec<usize> = Self::members(a)
            .into_iter()
            .map(|x| (0..p).fold(0, |y, _| self.mul[y][x]))
            .collect();
        self.closure(&gens)
    }

    fn join(&self, a: &[bool], b: &[bool]) -> Vec<bool> {
        let gens: Vec<usize> = (0..self.n).filter(|&x| a[x] || b[x]).collect();
        self.closure(&gens)
    }

    /// `log_p |D_i / D_{i+1}|` until the series reaches 1, from the
    /// recursion `D_n = [D_{n-1}, G] (D_{ceil(n/p)})^p`.
    pub fn zassenhaus_dims(&self, p: usize) -> Vec<usize> {
        let whole = vec![true; self.n];
        let mut d: Vec<Vec<bool>> = vec![whole.clone(), whole.clone()];
        while d.last().unwrap().iter().filter(|&&b| b).count() > 1 {
            let n = d.len();
            let next = self.join(&self.commutator(&d[n - 1], &whole), &self.powers(&d[n.div_ceil(p)], p));
            d.push(next);
        }
        let size = |s: &Vec<bool>| s.iter().filter(|&&b| b).count();
        d[1..]
            .windows(2)
            .map(|w| ((size(&w[0]) / size(&w[1])) as f64).log(p as f64).round() as usize)
            .collect()
    }
}

/// Extends `images` of the first `gens.len()` generators to the subgroup
/// they generate; `None` unless the assignment gives a well-defined
/// injective homomorphism.
fn extend(a: &Table, b: &Table, gens: &[usize], images: &[usize]) -> Option<Vec<usize>> {
    let mut f = vec![usize::MAX; a.n];
    let mut used = vec![false; b.n];
    f[0] = 0;
    used[0] = true;
    let mut queue = vec![0];
    while let Some(x) = queue.pop() {
        for (&g, &h) in gens.iter().zip(images) {
            let (y, fy) = (a.mul[x][g], b.mul[f[x]][h]);
            if f[y] == usize::MAX {
                if used[fy] {
                    return None;
                }
                f[y] = fy;
                used[fy] = true;
                queue.push(y);
            } else if f[y] != fy {
                return None;
            }
        }
    }
    Some(f)
}

/// Calls `found` on every injective homomorphism `a -> b` that is onto,
/// given by the images of a minimal generating set of `a`; stops when it
/// returns false.
fn search(a: &Table, b: &Table, p: usize, found: &mut dyn FnMut() -> bool) {
    if a.n != b.n {
        return;
    }
    let gens = a.min_generators(p);
    let orders: Vec<usize> = gens.iter().map(|&g| a.order(g)).collect();
    let b_orders: Vec<usize> = (0..b.n).map(|x| b.order(x)).collect();
    let mut images = Vec::with_capacity(gens.len());
    fn rec(
        a: &Table,
        b: &Table,
        gens: &[usize],
        orders: &[usize],
        b_orders: &[usize],
        images: &mut Vec<usize>,
        found: &mut dyn FnMut() -> bool,
    ) -> bool {
        let k = images.len();
        if k == gens.len() {
            return found();
        }
        for y in 0..b.n {
            if b_orders[y] != orders[k] {
                continue;
            }
            images.push(y);
            let ok = extend(a, b, &gens[..=k], images).is_some();
            let go_on = !ok || rec(a, b, gens, orders, b_orders, images, found);
            images.pop();
            if !go_on {
                return false;
            }
        }
        true
    }
    rec(a, b, &gens, &orders, &b_orders, &mut images, found);
}

pub fn brute_isomorphic(a: &PcGroup, b: &PcGroup) -> bool {
    if a.order() != b.order() {
        return false;
    }
    let (ta, tb) = (Table::from_pc(a), Table::from_pc(b));
    if ta.order_profile() != tb.order_profile() {
        return false;
    }
    let p = a.prime() as usize;
    if ta.min_generators(p).len() != tb.min_generators(p).len() {
        return false;
    }
    let mut hit = false;
    search(&ta, &tb, p, &mut || {
        hit = true;
        false
    });
    hit
}

pub fn brute_automorphism_count(g: &PcGroup) -> u128 {
    let t = Table::from_pc(g);
    let mut count = 0u128;
    search(&t, &t, g.prime() as usize, &mut || {
        count += 1;
        true
    });
    count
}

/// `|GL_n(F_p)|`.
pub fn gl_order(p: u128, n: u32) -> u128 {
    (0..n).map(|i| p.pow(n) - p.pow(i)).product()
}

/// Every allowable quotient of the p-cover of `g` of the given step, with
/// no isomorphism reduction.
pub fn raw_descendants(g: &PcGroup, step: usize) -> Vec<PcGroup> {
    let data = covers::p_cover(g).unwrap();
    let mu = data.mu_rank;
    if step > mu {
        return Vec::new();
    }
    let nucleus = data.subspace_rows(&data.nucleus).unwrap();
    fp::subspaces(mu, mu - step, P)
        .into_iter()
        .filter(|u| {
            let mut all = u.clone();
            all.extend(nucleus.iter().cloned());
            fp::rank(&all, P) == mu
        })
        .map(|u| data.quotient_by_rows(&u).0)
        .collect()
}

/// Presentations of all groups of order `p^n`, `n <= max`, and the oracle
/// partition of each order into isomorphism classes.
pub struct Census {
    pub raw: Vec<Vec<PcGroup>>,
    pub reps: Vec<Vec<PcGroup>>,
    pub class_of: Vec<Vec<usize>>,
}

pub fn census(max: usize) -> Census {
    let mut raw: Vec<Vec<PcGroup>> = vec![Vec::new(); max + 1];
    for (d, r) in raw.iter_mut().enumerate().skip(1) {
        r.push(PcGroup::elementary_abelian(P, d));
    }
    let mut reps: Vec<Vec<PcGroup>> = vec![Vec::new(); max + 1];
    let mut class_of: Vec<Vec<usize>> = vec![Vec::new(); max + 1];
    for n in 1..=max {
        for g in raw[n].clone() {
            let c = match reps[n].iter().position(|r| brute_isomorphic(r, &g)) {
                Some(c) => c,
                None => {
                    reps[n].push(g.clone());
                    reps[n].len() - 1
                }
            };
            class_of[n].push(c);
        }
        // Every group of order p^m is an iterated descendant of the
        // elementary abelian group of its rank.
        for g in reps[n].clone() {
            for step in 1..=max - n {
                raw[n + step].extend(raw_descendants(&g, step));
            }
        }
    }
    Census { raw, reps, class_of }
}

/// Orbits by union-find over the induced action, without canonical forms.
pub fn orbit_partition(k: usize, mats: &[Vec<Vec<u8>>]) -> Vec<usize> {
    let subs = fp::subspaces(4, k, P);
    let index: HashMap<Vec<Vec<u8>>, usize> = subs.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
    let mut parent: Vec<usize> = (0..subs.len()).collect();
    fn root(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            i = parent[i];
        }
        i
    }
    for (i, s) in subs.iter().enumerate() {
        for m in mats {
            let mut img: Vec<Vec<u8>> = s.iter().map(|r| fp::vec_mat(r, m, P)).collect();
            fp::rref(&mut img, P);
            let j = index[&img];
            let (a, b) = (root(&mut parent, i), root(&mut parent, j));
            parent[a.max(b)] = a.min(b);
        }
    }
    let mut sizes: HashMap<usize, usize> = HashMap::new();
    for i in 0..subs.len() {
        *sizes.entry(root(&mut parent, i)).or_default() += 1;
    }
    let mut v: Vec<usize> = sizes.into_values().collect();
    v.sort_unstable();
    v
}

pub struct DirectCheck {
    pub records: usize,
    pub mismatches: usize,
    /// Distinct relator subgroups met.
    pub subgroups: usize,
}

/// Classifies every exponent tuple and compares with the catalog entry
/// isomorphic to the quotient by the relator words, built once per
/// relator subgroup.
pub fn direct_classification(cat: &Catalog) -> DirectCheck {
    let free = &cat.free;
    let mut by_subgroup: HashMap<Vec<Vec<u8>>, Option<String>> = HashMap::new();
    let (mut records, mut mismatches) = (0, 0);
    for t in fp::all_vectors(8, P) {
        let e: [u8; 8] = t.try_into().unwrap();
        let rec = MasseyRecord::new(-3299, e).unwrap();
        let rels = rec.relator_elements(free);
        let mut key: Vec<Vec<u8>> = rels.iter().map(|x| free.gr3.coords(&free.group, x).unwrap()).collect();
        fp::rref(&mut key, P);
        key.retain(|r| !fp::is_zero(r));
        let label = by_subgroup.entry(key).or_insert_with(|| {
            let h = free.group.quotient(&free.group.subgroup(&rels)).unwrap().0;
            let hits: Vec<&str> =
                cat.entries.iter().filter(|c| is_isomorphic(&c.group, &h)).map(|c| c.label.as_str()).collect();
            (hits.len() == 1).then(|| hits[0].to_string())
        });
        if label.as_deref() != Some(cat.classify_record(&rec).label.as_str()) {
            mismatches += 1;
        }
        records += 1;
    }
    DirectCheck { records, mismatches, subgroups: by_subgroup.len() }
}
