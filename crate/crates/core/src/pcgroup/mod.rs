//! Finite p-groups given by consistent polycyclic presentations.
//!
//! Generators are numbered from 0 internally and from 1 in the text format.
//! Relations: `g_i^p = powers[i]` and `[g_i, g_j] = comms[i][j]` for `j < i`,
//! with `[a, b] = a^-1 b^-1 a b`. Both right-hand sides involve only
//! generators with index greater than `i`.

mod hom;
mod invariants;
mod search;
mod subgroup;
mod text;

pub use hom::{GroupMap, Relator, Slp, SlpOp, TrackedPresentation};
pub use invariants::{abelian_invariants, abelian_invariants_of, maximal_subgroups, Invariants};
pub(crate) use search::find_isomorphism_unscreened;
pub use search::{
    automorphism_count, automorphisms_with, count_automorphisms_with, find_automorphism_with, find_isomorphism,
    is_isomorphic, sample_automorphisms, LiftingOptions, DEFAULT_ORDER_BOUND,
};
pub use subgroup::Subgroup;

use crate::error::{Error, Result};
use std::sync::atomic::{AtomicU64, Ordering};

/// Exponent vector of a normal form `g_1^{e_1} ... g_n^{e_n}`, `0 <= e_i < p`.
pub type Element = Vec<u8>;

static NEXT_ID: AtomicU64 = AtomicU64::new(1);

#[derive(Debug, Clone)]
pub struct PcGroup {
    id: u64,
    p: u32,
    n: usize,
    powers: Vec<Element>,
    comms: Vec<Vec<Element>>,
    /// `conj[i][j] = g_j^-1 g_i g_j = g_i [g_i, g_j]` for `j < i`.
    conj: Vec<Vec<Element>>,
    weights: Option<Vec<u32>>,
}

impl PartialEq for PcGroup {
    /// Equality of presentations, not isomorphism.
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.powers == other.powers && self.comms == other.comms
    }
}

fn is_prime(p: u32) -> bool {
    p >= 2 && (2..p).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

impl PcGroup {
    /// Builds a presentation without checking consistency.
    pub fn from_relations(p: u32, powers: Vec<Element>, comms: Vec<Vec<Element>>) -> Result<Self> {
        if !is_prime(p) || p > 251 {
            return Err(Error::InvalidPresentation(format!("{p} is not a supported prime")));
        }
        let n = powers.len();
        if comms.len() != n {
            return Err(Error::InvalidPresentation("commutator table has wrong size".into()));
        }
        let check = |w: &Element, after: usize, what: &str| -> Result<()> {
            if w.len() != n || w.iter().any(|&e| e as u32 >= p) {
                return Err(Error::InvalidPresentation(format!("{what}: malformed word")));
            }
            if w[..=after].iter().any(|&e| e != 0) {
                return Err(Error::InvalidPresentation(format!(
                    "{what}: word must only involve generators after g{}",
                    after + 1
                )));
            }
            Ok(())
        };
        for i in 0..n {
            check(&powers[i], i, &format!("g{}^p", i + 1))?;
            if comms[i].len() != i {
                return Err(Error::InvalidPresentation("commutator table has wrong shape".into()));
            }
            for (j, c) in comms[i].iter().enumerate() {
                check(c, i, &format!("[g{},g{}]", i + 1, j + 1))?;
            }
        }
        let conj = (0..n)
            .map(|i| {
                (0..i)
                    .map(|j| {
                        let mut w = comms[i][j].clone();
                        w[i] = 1;
                        w
                    })
                    .collect()
            })
            .collect();
        Ok(PcGroup {
            id: NEXT_ID.fetch_add(1, Ordering::Relaxed),
            p,
            n,
            powers,
            comms,
            conj,
            weights: None,
        })
    }

    /// Builds a presentation and verifies consistency.
    pub fn new(p: u32, powers: Vec<Element>, comms: Vec<Vec<Element>>) -> Result<Self> {
        let g = Self::from_relations(p, powers, comms)?;
        g.check_consistency()?;
        Ok(g)
    }

    pub fn trivial(p: u32) -> Self {
        Self::from_relations(p, vec![], vec![]).expect("trivial group")
    }

    /// Elementary abelian group of rank `n`.
    pub fn elementary_abelian(p: u32, n: usize) -> Self {
        let powers = vec![vec![0; n]; n];
        let comms = (0..n).map(|i| vec![vec![0; n]; i]).collect();
        Self::from_relations(p, powers, comms).expect("elementary abelian")
    }

    /// Cyclic group of order `p^k`.
    pub fn cyclic(p: u32, k: usize) -> Self {
        let powers = (0..k)
            .map(|i| {
                let mut w = vec![0; k];
                if i + 1 < k {
                    w[i + 1] = 1;
                }
                w
            })
            .collect();
        let comms = (0..k).map(|i| vec![vec![0; k]; i]).collect();
        Self::from_relations(p, powers, comms).expect("cyclic")
    }

    /// Direct product, generators of `self` first.
    pub fn direct_product(&self, other: &PcGroup) -> Result<Self> {
        if self.p != other.p {
            return Err(Error::InvalidPresentation("different primes".into()));
        }
        let (a, b) = (self.n, other.n);
        let n = a + b;
        let left = |w: &Element| {
            let mut v = w.clone();
            v.resize(n, 0);
            v
        };
        let right = |w: &Element| {
            let mut v = vec![0; a];
            v.extend_from_slice(w);
            v
        };
        let mut powers: Vec<Element> = self.powers.iter().map(left).collect();
        powers.extend(other.powers.iter().map(right));
        let mut comms: Vec<Vec<Element>> = self.comms.iter().map(|r| r.iter().map(left).collect()).collect();
        for i in 0..b {
            let mut row = vec![vec![0; n]; a];
            row.extend(other.comms[i].iter().map(right));
            comms.push(row);
        }
        Self::from_relations(self.p, powers, comms)
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn prime(&self) -> u32 {
        self.p
    }

    pub fn ngens(&self) -> usize {
        self.n
    }

    /// `log_p |G|`.
    pub fn log_order(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> u128 {
        (self.p as u128).pow(self.n as u32)
    }

    pub fn weights(&self) -> Option<&[u32]> {
        self.weights.as_deref()
    }

    pub fn with_weights(mut self, w: Vec<u32>) -> Self {
        assert_eq!(w.len(), self.n);
        self.weights = Some(w);
        self
    }

    pub fn power_relation(&self, i: usize) -> &Element {
        &self.powers[i]
    }

    /// Right-hand side of `[g_i, g_j]`, `j < i`.
    pub fn commutator_relation(&self, i: usize, j: usize) -> &Element {
        &self.comms[i][j]
    }

    pub fn identity(&self) -> Element {
        vec![0; self.n]
    }

    pub fn generator(&self, i: usize) -> Element {
        let mut e = self.identity();
        e[i] = 1;
        e
    }

    pub fn generators(&self) -> Vec<Element> {
        (0..self.n).map(|i| self.generator(i)).collect()
    }

    pub fn is_identity(&self, x: &[u8]) -> bool {
        x.iter().all(|&e| e == 0)
    }

    /// Multiplies `x` on the right by `g_k`.
    fn mul_gen(&self, x: &mut [u8], k: usize) {
        let p = self.p as u8;
        if x[k + 1..].iter().all(|&e| e == 0) {
            x[k] += 1;
            if x[k] == p {
                x[k] = 0;
                x[k + 1..].copy_from_slice(&self.powers[k][k + 1..]);
            }
            return;
        }
        let tail: Vec<u8> = x[k + 1..].to_vec();
        if x[k] + 1 < p && tail.iter().enumerate().all(|(t, &e)| e == 0 || self.commutes(k + 1 + t, k)) {
            x[k] += 1;
            return;
        }
        x[k + 1..].iter_mut().for_each(|e| *e = 0);
        x[k] += 1;
        if x[k] == p {
            x[k] = 0;
            x[k + 1..].copy_from_slice(&self.powers[k][k + 1..]);
        }
        // x = prefix g_k tail, and tail g_k = g_k prod_j (g_j^{g_k})^{e_j}
        for (t, &e) in tail.iter().enumerate() {
            let j = k + 1 + t;
            for _ in 0..e {
                let c = &self.conj[j][k];
                self.mul_in_place(x, c);
            }
        }
    }

    fn commutes(&self, i: usize, j: usize) -> bool {
        self.comms[i][j].iter().all(|&e| e == 0)
    }

    /// `x <- x * y`.
    pub fn mul_in_place(&self, x: &mut [u8], y: &[u8]) {
        let p = self.p as u8;
        for (j, &e) in y.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if x[j + 1..].iter().all(|&v| v == 0) {
                let s = x[j] + e;
                if s >= p {
                    x[j] = s - p;
                    x[j + 1..].copy_from_slice(&self.powers[j][j + 1..]);
                } else {
                    x[j] = s;
                }
            } else {
                for _ in 0..e {
                    self.mul_gen(x, j);
                }
            }
        }
    }

    pub fn mul(&self, x: &[u8], y: &[u8]) -> Element {
        let mut z = x.to_vec();
        self.mul_in_place(&mut z, y);
        z
    }

    pub fn inverse(&self, x: &[u8]) -> Element {
        let mut z = x.to_vec();
        let mut y = self.identity();
        let p = self.p as u8;
        for i in 0..self.n {
            if z[i] != 0 {
                let e = p - z[i];
                let mut gi = self.identity();
                gi[i] = e;
                self.mul_in_place(&mut z, &gi);
                self.mul_in_place(&mut y, &gi);
            }
        }
        y
    }

    pub fn pow(&self, x: &[u8], e: u64) -> Element {
        let mut result = self.identity();
        let mut base = x.to_vec();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                self.mul_in_place(&mut result, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        result
    }

    /// `[a, b] = a^-1 b^-1 a b`.
    pub fn comm(&self, a: &[u8], b: &[u8]) -> Element {
        let ba = self.mul(b, a);
        let mut z = self.inverse(&ba);
        self.mul_in_place(&mut z, a);
        self.mul_in_place(&mut z, b);
        z
    }

    /// `b^-1 a b`.
    pub fn conjugate(&self, a: &[u8], b: &[u8]) -> Element {
        let mut z = self.inverse(b);
        self.mul_in_place(&mut z, a);
        self.mul_in_place(&mut z, b);
        z
    }

    /// Multiplicative order of `x` (a power of p).
    pub fn element_order(&self, x: &[u8]) -> u64 {
        let mut y = x.to_vec();
        let mut ord = 1u64;
        while !self.is_identity(&y) {
            y = self.pow(&y, self.p as u64);
            ord *= self.p as u64;
        }
        ord
    }

    /// Collects a word of signed 1-based generator indices.
    pub fn collect(&self, word: &[i64]) -> Result<Element> {
        let mut x = self.identity();
        for &w in word {
            let k = w.unsigned_abs() as usize;
            if k == 0 || k > self.n {
                return Err(Error::IndexOutOfRange { index: w, ngens: self.n });
            }
            if w > 0 {
                self.mul_gen(&mut x, k - 1);
            } else {
                let inv = self.inverse(&self.generator(k - 1));
                self.mul_in_place(&mut x, &inv);
            }
        }
        Ok(x)
    }

    /// All elements in lexicographic order of exponent vectors.
    pub fn elements(&self) -> impl Iterator<Item = Element> {
        crate::fp::all_vectors(self.n, self.p)
    }

    /// Pairs of words that must collect to the same normal form.
    fn consistency_tests(&self) -> Vec<(String, Element, Element)> {
        self.consistency_tests_below(self.n)
    }

    /// Test words involving only the first `n` generators.
    fn consistency_tests_below(&self, n: usize) -> Vec<(String, Element, Element)> {
        let pp = self.p as u64;
        let g = |i: usize| self.generator(i);
        let mut out = Vec::new();
        for k in 0..n {
            for j in 0..k {
                for i in 0..j {
                    let lhs = self.mul(&self.mul(&g(k), &g(j)), &g(i));
                    let rhs = self.mul(&g(k), &self.mul(&g(j), &g(i)));
                    out.push((format!("(g{} g{}) g{}", k + 1, j + 1, i + 1), lhs, rhs));
                }
            }
        }
        for j in 0..n {
            let gjp1 = self.pow(&g(j), pp - 1);
            for i in 0..j {
                // g_j^p g_i = g_j^{p-1} (g_j g_i)
                let lhs = self.mul(&self.powers[j], &g(i));
                let rhs = self.mul(&gjp1, &self.mul(&g(j), &g(i)));
                out.push((format!("g{}^p g{}", j + 1, i + 1), lhs, rhs));
                // g_j g_i^p = (g_j g_i) g_i^{p-1}
                let lhs = self.mul(&g(j), &self.powers[i]);
                let rhs = self.mul(&self.mul(&g(j), &g(i)), &self.pow(&g(i), pp - 1));
                out.push((format!("g{} g{}^p", j + 1, i + 1), lhs, rhs));
            }
        }
        for i in 0..n {
            // g_i g_i^p = g_i^p g_i
            let lhs = self.mul(&g(i), &self.powers[i]);
            let rhs = self.mul(&self.powers[i], &g(i));
            out.push((format!("g{} g{}^p", i + 1, i + 1), lhs, rhs));
        }
        out
    }

    /// Both collections `(lhs, rhs)` of every test word in the first `n`
    /// generators. In an inconsistent presentation the collector is not a
    /// group law, so callers compare the two sides coordinatewise.
    pub fn consistency_pairs_below(&self, n: usize) -> Vec<(Element, Element)> {
        self.consistency_tests_below(n).into_iter().map(|(_, l, r)| (l, r)).collect()
    }

    pub fn check_consistency(&self) -> Result<()> {
        for (name, l, r) in self.consistency_tests() {
            if l != r {
                return Err(Error::Inconsistent(format!("test word {name} collects two ways")));
            }
        }
        Ok(())
    }

    pub fn is_consistent(&self) -> bool {
        self.check_consistency().is_ok()
    }

    pub fn is_abelian(&self) -> bool {
        self.comms.iter().flatten().all(|w| self.is_identity(w))
    }

    pub fn to_text(&self) -> String {
        text::write(self)
    }

    pub fn from_text(s: &str) -> Result<Self> {
        text::parse(s)
    }
}

/// Order-27 Heisenberg group (exponent p): `[g2, g1] = g3` central.
pub fn heisenberg(p: u32) -> PcGroup {
    let powers = vec![vec![0; 3]; 3];
    let comms = vec![vec![], vec![vec![0, 0, 1]], vec![vec![0; 3], vec![0; 3]]];
    PcGroup::new(p, powers, comms).expect("heisenberg")
}

/// `M(p^3) = <a, b | a^{p^2} = b^p = 1, [a, b] = a^p>` on generators `a, b, a^p`.
pub fn m27(p: u32) -> PcGroup {
    let powers = vec![vec![0, 0, 1], vec![0; 3], vec![0; 3]];
    // [b, a] = [a, b]^-1 = a^{-p}
    let comms = vec![vec![], vec![vec![0, 0, (p - 1) as u8]], vec![vec![0; 3], vec![0; 3]]];
    PcGroup::new(p, powers, comms).expect("m27")
}
