//! Homomorphism search by lifting through the lower p-central series.
//!
//! Let `Q_j = B / P_j(B)`. A node at level `k` is a tuple in `Q_k^d` whose
//! relator values, evaluated on any lift, vanish in `Q_{k+1}`. The
//! children of a node differ from a fixed lift by elements of the central
//! layer `P_k / P_{k+1}`, and the relator values of a child modulo
//! `P_{k+2}` are affine in that difference, so children are the solutions
//! of a linear system over `F_p`. Nodes at level `c - 1` (`c` the p-class
//! of `B`) extend to homomorphisms in every possible way.

use super::{Element, GroupMap, Invariants, PcGroup, Subgroup, TrackedPresentation};
use crate::error::{Error, Result};
use crate::filtrations;
use crate::fp;
use rand::Rng;
use rayon::prelude::*;

/// Default bound on `log_p |G|` for automorphism enumeration.
pub const DEFAULT_ORDER_BOUND: usize = 10;

#[derive(Debug, Clone, Copy)]
pub struct LiftingOptions {
    pub order_bound: usize,
}

impl Default for LiftingOptions {
    fn default() -> Self {
        LiftingOptions { order_bound: DEFAULT_ORDER_BOUND }
    }
}

/// The quotients `Q_j = B / P_j(B)` for `j = 1..=c` with lifting data.
struct Ladder {
    c: usize,
    /// `q[j]` for `j = 0..=c`; `q[0]` is unused.
    q: Vec<PcGroup>,
    /// `keep[j]`: positions in `q[j + 1]` carrying the generators of `q[j]`.
    keep: Vec<Vec<usize>>,
    /// `layer[j] = P_j(Q_{j+1})`, a central elementary abelian subgroup of
    /// `q[j + 1]`, for `j = 1..c`.
    layer: Vec<Subgroup>,
}

impl Ladder {
    fn new(b: &PcGroup) -> Self {
        let chain = filtrations::lower_p_central_chain(b);
        let c = chain.terms.len() - 1;
        let mut q: Vec<Option<PcGroup>> = vec![None; c + 1];
        let mut keep = vec![Vec::new(); c + 1];
        let mut layer: Vec<Option<Subgroup>> = vec![None; c + 1];
        q[c] = Some(b.clone());
        for j in (1..c).rev() {
            let upper = q[j + 1].as_ref().unwrap();
            let pj = filtrations::lower_p_central_chain(upper).term(upper, j);
            let (lower, _) = upper.quotient(&pj).expect("characteristic subgroup");
            keep[j] = (0..upper.ngens()).filter(|i| !pj.leading_positions().contains(i)).collect();
            layer[j] = Some(pj);
            q[j] = Some(lower);
        }
        let q = q.into_iter().map(|g| g.unwrap_or_else(|| PcGroup::trivial(b.prime()))).collect();
        let layer = layer.into_iter().map(|s| s.unwrap_or_else(|| Subgroup::trivial(b))).collect();
        Ladder { c, q, keep, layer }
    }

    /// Quotient `Q_j`, with `Q_j = B` for `j >= c`.
    fn quot(&self, j: usize) -> &PcGroup {
        &self.q[j.min(self.c)]
    }

    /// Lifts an element of `Q_j` to `Q_{j+1}`.
    fn lift(&self, j: usize, x: &[u8]) -> Element {
        if j >= self.c {
            return x.to_vec();
        }
        let mut y = self.q[j + 1].identity();
        for (&pos, &e) in self.keep[j].iter().zip(x) {
            y[pos] = e;
        }
        y
    }

    fn lift_to_top(&self, k: usize, x: &[u8]) -> Element {
        let mut y = x.to_vec();
        for j in k..self.c {
            y = self.lift(j, &y);
        }
        y
    }

    /// Central layer `P_j / P_{j+1}` inside `Q_{j+1}`; empty for `j >= c`.
    fn layer(&self, j: usize) -> &[Element] {
        if j >= self.c || j == 0 {
            &[]
        } else {
            self.layer[j].pcgs()
        }
    }
}

struct Search {
    tp: TrackedPresentation,
    ladder: Ladder,
    d: usize,
    p: u32,
}

/// Children of a node: `base * prod u_t^{x_{i,t}}` for `x` in an affine space.
struct Children {
    base: Vec<Element>,
    particular: Vec<u8>,
    kernel: Vec<Vec<u8>>,
}

impl Search {
    /// Search for endomorphisms of `g`, with marks lifting the standard
    /// basis of the ladder's `G/Fr(G)`.
    fn automorphisms(g: &PcGroup) -> Result<Self> {
        let ladder = Ladder::new(g);
        let d = ladder.quot(1).ngens();
        let marks: Vec<Element> = (0..d).map(|i| ladder.lift_to_top(1, &fp::unit(d, i))).collect();
        let tp = TrackedPresentation::new(g, &marks)?;
        Ok(Search { tp, ladder, d, p: g.prime() })
    }

    /// Coordinates of all relator values at `imgs` (tuple in `Q_k`) in the
    /// layer `P_k(Q_{k+1})`, or `None` if some value leaves that layer.
    fn relator_coords(&self, k: usize, imgs: &[Element]) -> Option<Vec<u8>> {
        let qk1 = self.ladder.quot(k + 1);
        let lifted: Vec<Element> = imgs.iter().map(|x| self.ladder.lift(k, x)).collect();
        let y = self.tp.eval_pcgs(qk1, &lifted);
        let vals = self.tp.relator_values(qk1, &y);
        if k >= self.ladder.c {
            return vals.iter().all(|v| qk1.is_identity(v)).then(Vec::new);
        }
        let layer = &self.ladder.layer[k];
        let mut out = Vec::new();
        for v in &vals {
            out.extend(layer.coords(qk1, v)?);
        }
        Some(out)
    }

    fn is_node(&self, k: usize, imgs: &[Element]) -> bool {
        let qk1 = self.ladder.quot(k + 1);
        let lifted: Vec<Element> = imgs.iter().map(|x| self.ladder.lift(k, x)).collect();
        self.tp.extends(qk1, &lifted)
    }

    /// Level-1 nodes whose top matrix passes `pred`. Tuples are expanded
    /// lazily below prefixes of length `d - 2`, so `GL_d(F_p)` is never
    /// held in memory.
    fn top_nodes<'a>(
        &'a self,
        pred: &'a (dyn Fn(&[Vec<u8>]) -> bool + Sync),
    ) -> impl ParallelIterator<Item = Vec<Element>> + 'a {
        let dim = self.ladder.quot(1).ngens();
        let vectors: Vec<Vec<u8>> = fp::all_vectors(dim, self.p).collect();
        let mut prefixes: Vec<Vec<Vec<u8>>> = if dim == self.d { vec![vec![]] } else { Vec::new() };
        for _ in 0..self.d.saturating_sub(2) {
            prefixes = prefixes.iter().flat_map(|t| self.extensions(t, &vectors)).collect();
        }
        prefixes.into_par_iter().flat_map_iter(move |t| {
            let mut level = vec![t];
            while level.first().is_some_and(|t| t.len() < self.d) {
                level = level.iter().flat_map(|t| self.extensions(t, &vectors)).collect();
            }
            // At class 1 both groups are elementary abelian, whose relators
            // hold in every elementary abelian group.
            let trivial = self.ladder.c == 1;
            level.into_iter().filter(|t| pred(t) && (trivial || self.is_node(1, t))).collect::<Vec<_>>()
        })
    }

    /// `t` extended by each vector keeping the rows independent.
    fn extensions(&self, t: &[Vec<u8>], vectors: &[Vec<u8>]) -> Vec<Vec<Vec<u8>>> {
        vectors
            .iter()
            .filter_map(|v| {
                let mut u = t.to_vec();
                u.push(v.clone());
                (fp::rank(&u, self.p) == u.len()).then_some(u)
            })
            .collect()
    }

    /// A uniformly random level-1 node, by rejection.
    fn random_top<R: Rng>(&self, rng: &mut R) -> Option<Vec<Element>> {
        let dim = self.ladder.quot(1).ngens();
        if dim != self.d {
            return None;
        }
        for _ in 0..RANDOM_TRIES * RANDOM_TRIES {
            let t: Vec<Vec<u8>> =
                (0..self.d).map(|_| (0..dim).map(|_| rng.gen_range(0..self.p) as u8).collect()).collect();
            if fp::rank(&t, self.p) == self.d && self.is_node(1, &t) {
                return Some(t);
            }
        }
        None
    }

    /// Children of a level-`k` node as an affine solution set.
    fn children(&self, k: usize, node: &[Element]) -> Option<Children> {
        let qk1 = self.ladder.quot(k + 1);
        let base: Vec<Element> = node.iter().map(|x| self.ladder.lift(k, x)).collect();
        let u = self.ladder.layer(k);
        let o0 = self.relator_coords(k + 1, &base)?;
        let mut cols = Vec::with_capacity(self.d * u.len());
        for i in 0..self.d {
            for ut in u {
                let mut imgs = base.clone();
                imgs[i] = qk1.mul(&imgs[i], ut);
                let o = self.relator_coords(k + 1, &imgs)?;
                cols.push(o.iter().zip(&o0).map(|(&a, &b)| fp::sub(a, b, self.p)).collect());
            }
        }
        let rhs: Vec<u8> = o0.iter().map(|&e| fp::neg(e, self.p)).collect();
        let (particular, kernel) = if cols.is_empty() || rhs.is_empty() {
            if fp::is_zero(&rhs) {
                let n = self.d * u.len();
                (vec![0; n], (0..n).map(|t| fp::unit(n, t)).collect())
            } else {
                return None;
            }
        } else {
            fp::solve_columns(&cols, &rhs, self.p)?
        };
        Some(Children { base, particular, kernel })
    }

    fn child(&self, k: usize, ch: &Children, x: &[u8]) -> Vec<Element> {
        let qk1 = self.ladder.quot(k + 1);
        let u = self.ladder.layer(k);
        let m = u.len();
        (0..self.d)
            .map(|i| {
                let mut b = ch.base[i].clone();
                for (t, ut) in u.iter().enumerate() {
                    let e = x[i * m + t];
                    if e != 0 {
                        qk1.mul_in_place(&mut b, &qk1.pow(ut, e as u64));
                    }
                }
                b
            })
            .collect()
    }

    fn enumerate_children(&self, k: usize, node: &[Element]) -> Vec<Vec<Element>> {
        let Some(ch) = self.children(k, node) else { return Vec::new() };
        fp::all_vectors(ch.kernel.len(), self.p)
            .map(|c| fp::combine(&ch.particular, &ch.kernel, &c, self.p))
            .map(|x| self.child(k, &ch, &x))
            .filter(|b| self.is_node(k + 1, b))
            .collect()
    }

    /// Number of level-`k + 1` nodes below a level-`k` node, with the
    /// affine structure spot-checked at the particular solution and along
    /// every kernel direction.
    fn count_children(&self, k: usize, node: &[Element]) -> u128 {
        let Some(ch) = self.children(k, node) else { return 0 };
        let pt = self.child(k, &ch, &ch.particular);
        assert!(self.is_node(k + 1, &pt), "relator values are not affine in the layer");
        for v in &ch.kernel {
            let x = fp::combine(&ch.particular, std::slice::from_ref(v), &[1], self.p);
            assert!(self.is_node(k + 1, &self.child(k, &ch, &x)), "relator values are not affine in the layer");
        }
        (self.p as u128).pow(ch.kernel.len() as u32)
    }

    /// Lifts of a level-`(c-1)` node per homomorphism count.
    fn leaf_multiplicity(&self) -> u128 {
        let c = self.ladder.c;
        let dim = self.ladder.layer(c - 1).len();
        (self.p as u128).pow((self.d * dim) as u32)
    }

    fn count_below(&self, k: usize, node: &[Element]) -> u128 {
        let c = self.ladder.c;
        if k + 1 == c {
            return self.leaf_multiplicity();
        }
        if k + 2 == c {
            return self.count_children(k, node) * self.leaf_multiplicity();
        }
        self.enumerate_children(k, node).iter().map(|ch| self.count_below(k + 1, ch)).sum()
    }

    fn find_below(&self, k: usize, node: &[Element]) -> Option<Vec<Element>> {
        if k + 1 >= self.ladder.c {
            return Some(node.iter().map(|x| self.lift_to_top(k, x)).collect());
        }
        self.enumerate_children(k, node).iter().find_map(|ch| self.find_below(k + 1, ch))
    }

    fn all_below(&self, k: usize, node: &[Element], out: &mut Vec<Vec<Element>>) {
        let c = self.ladder.c;
        if k + 1 >= c {
            let b: Vec<Element> = node.iter().map(|x| self.lift_to_top(k, x)).collect();
            let bg = self.ladder.quot(c);
            let u = if c >= 1 { self.ladder.layer(c - 1).to_vec() } else { vec![] };
            let m = if k + 1 == c { u.len() } else { 0 };
            for x in fp::all_vectors(self.d * m, self.p) {
                let imgs = (0..self.d)
                    .map(|i| {
                        let mut y = b[i].clone();
                        for t in 0..m {
                            let e = x[i * m + t];
                            if e != 0 {
                                bg.mul_in_place(&mut y, &bg.pow(&u[t], e as u64));
                            }
                        }
                        y
                    })
                    .collect();
                out.push(imgs);
            }
            return;
        }
        for ch in self.enumerate_children(k, node) {
            self.all_below(k + 1, &ch, out);
        }
    }

    fn lift_to_top(&self, k: usize, x: &[u8]) -> Element {
        self.ladder.lift_to_top(k, x)
    }

    /// A leaf below `node` reached by random descent, if the attempts at
    /// every level find an extendable child.
    fn random_below<R: Rng>(&self, k: usize, node: &[Element], rng: &mut R) -> Option<Vec<Element>> {
        let c = self.ladder.c;
        if k + 1 >= c {
            let mut imgs: Vec<Element> = node.iter().map(|x| self.lift_to_top(k, x)).collect();
            if k + 1 == c {
                let bg = self.ladder.quot(c);
                for y in imgs.iter_mut() {
                    for u in self.ladder.layer(c - 1) {
                        let e = rng.gen_range(0..self.p);
                        if e != 0 {
                            bg.mul_in_place(y, &bg.pow(u, e as u64));
                        }
                    }
                }
            }
            return Some(imgs);
        }
        let ch = self.children(k, node)?;
        for _ in 0..RANDOM_TRIES {
            let coeffs: Vec<u8> = (0..ch.kernel.len()).map(|_| rng.gen_range(0..self.p) as u8).collect();
            let x = fp::combine(&ch.particular, &ch.kernel, &coeffs, self.p);
            let child = self.child(k, &ch, &x);
            if self.is_node(k + 1, &child) {
                if let Some(leaf) = self.random_below(k + 1, &child, rng) {
                    return Some(leaf);
                }
            }
        }
        None
    }
}

/// Attempts per level of a random descent.
const RANDOM_TRIES: usize = 8;

/// Lifts of a basis of `G / Fr(G)`.
fn frattini_marks(g: &PcGroup) -> Vec<Element> {
    let fr = filtrations::frattini(g);
    let (q, proj) = g.quotient(&fr).unwrap();
    let data = proj.analyze(g, &q);
    (0..q.ngens()).map(|i| data.preimage(g, &q, &q.generator(i)).unwrap()).collect()
}

fn check_bound(g: &PcGroup, opts: LiftingOptions) -> Result<()> {
    if g.ngens() > opts.order_bound {
        return Err(Error::OrderBound { order_log: g.ngens(), bound: opts.order_bound });
    }
    Ok(())
}

/// `|Aut(G)|`.
pub fn automorphism_count(g: &PcGroup, opts: LiftingOptions) -> Result<u128> {
    check_bound(g, opts)?;
    count_automorphisms_with(g, &|_| true)
}

/// Number of automorphisms whose Frattini-quotient matrix satisfies `pred`.
pub fn count_automorphisms_with(g: &PcGroup, pred: &(dyn Fn(&[Vec<u8>]) -> bool + Sync)) -> Result<u128> {
    if g.ngens() == 0 {
        return Ok(1);
    }
    let s = Search::automorphisms(g)?;
    let tops = s.top_nodes(pred);
    if s.ladder.c == 1 {
        return Ok(tops.count() as u128);
    }
    Ok(tops.map(|t| s.count_below(1, &t)).sum())
}

/// All automorphisms whose matrix on `G/Fr(G)` satisfies `pred`. Row `i`
/// of the matrix is the image of the `i`-th basis vector, where the basis
/// is the standard one of the quotient presentation `G/Fr(G)`.
pub fn automorphisms_with(
    g: &PcGroup,
    pred: &(dyn Fn(&[Vec<u8>]) -> bool + Sync),
    opts: LiftingOptions,
) -> Result<Vec<GroupMap>> {
    check_bound(g, opts)?;
    if g.ngens() == 0 {
        return Ok(vec![GroupMap::identity(g)]);
    }
    let s = Search::automorphisms(g)?;
    let leaves: Vec<Vec<Element>> = s
        .top_nodes(pred)
        .flat_map_iter(|t| {
            let mut out = Vec::new();
            s.all_below(1, &t, &mut out);
            out
        })
        .collect();
    Ok(leaves.iter().map(|imgs| s.tp.group_map(g, g, imgs)).collect())
}

/// Some automorphism whose Frattini-quotient matrix satisfies `pred`.
pub fn find_automorphism_with(g: &PcGroup, pred: &(dyn Fn(&[Vec<u8>]) -> bool + Sync)) -> Option<GroupMap> {
    if g.ngens() == 0 {
        return Some(GroupMap::identity(g));
    }
    let s = Search::automorphisms(g).ok()?;
    let imgs = s.top_nodes(pred).find_map_any(|t| s.find_below(1, &t))?;
    Some(s.tp.group_map(g, g, &imgs))
}

/// Up to `count` automorphisms drawn by random descent through the search
/// tree. They are not uniformly distributed.
pub fn sample_automorphisms<R: Rng>(g: &PcGroup, count: usize, rng: &mut R) -> Result<Vec<GroupMap>> {
    if g.ngens() == 0 {
        return Ok(vec![GroupMap::identity(g)]);
    }
    let s = Search::automorphisms(g)?;
    let mut out = Vec::with_capacity(count);
    for _ in 0..count * RANDOM_TRIES {
        if out.len() == count {
            break;
        }
        let Some(top) = s.random_top(rng) else { continue };
        if let Some(imgs) = s.random_below(1, &top, rng) {
            out.push(s.tp.group_map(g, g, &imgs));
        }
    }
    Ok(out)
}

/// An isomorphism `a -> b`, if one exists.
pub fn find_isomorphism(a: &PcGroup, b: &PcGroup) -> Option<GroupMap> {
    if a.prime() != b.prime() || a.ngens() != b.ngens() {
        return None;
    }
    if a.ngens() == 0 {
        return Some(GroupMap::new_unchecked(a, b, vec![]));
    }
    if Invariants::compute(a) != Invariants::compute(b) {
        return None;
    }
    find_isomorphism_unscreened(a, b)
}

pub(crate) fn find_isomorphism_unscreened(a: &PcGroup, b: &PcGroup) -> Option<GroupMap> {
    let marks = frattini_marks(a);
    let tp = TrackedPresentation::new(a, &marks).ok()?;
    let s = Search { tp, ladder: Ladder::new(b), d: marks.len(), p: b.prime() };
    if s.ladder.c != filtrations::p_class(a) {
        return None;
    }
    let imgs = s.top_nodes(&|_| true).find_map_any(|t| s.find_below(1, &t))?;
    let map = s.tp.group_map(a, b, &imgs);
    debug_assert!(map.is_homomorphism(a, b) && map.is_surjective(a, b));
    Some(map)
}

pub fn is_isomorphic(a: &PcGroup, b: &PcGroup) -> bool {
    find_isomorphism(a, b).is_some()
}
