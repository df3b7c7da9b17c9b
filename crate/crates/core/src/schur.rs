//! Sigma-structures, relation ranks, the Schur quotient step and the
//! powerfulness recursion.

use crate::covers::{self, CoverData};
use crate::error::{Error, Result};
use crate::filtrations;
use crate::fp;
use crate::pcgroup::{
    automorphisms_with, find_automorphism_with, sample_automorphisms, Element, GroupMap, LiftingOptions, PcGroup,
    Subgroup, TrackedPresentation,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

/// A characteristic subgroup of the free group, evaluated in quotients.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SubgroupRecipe {
    Whole,
    /// `D_i`, `i >= 1`.
    Zassenhaus(usize),
    /// `P_j`, `j >= 0`.
    PCentral(usize),
    Agemo(Box<SubgroupRecipe>),
    Comm(Box<SubgroupRecipe>, Box<SubgroupRecipe>),
    Product(Box<SubgroupRecipe>, Box<SubgroupRecipe>),
    Frattini(Box<SubgroupRecipe>),
}

impl SubgroupRecipe {
    pub fn d(i: usize) -> Self {
        SubgroupRecipe::Zassenhaus(i)
    }

    pub fn p(j: usize) -> Self {
        SubgroupRecipe::PCentral(j)
    }

    pub fn agemo(self) -> Self {
        SubgroupRecipe::Agemo(Box::new(self))
    }

    pub fn frattini(self) -> Self {
        SubgroupRecipe::Frattini(Box::new(self))
    }

    pub fn comm(self, other: Self) -> Self {
        SubgroupRecipe::Comm(Box::new(self), Box::new(other))
    }

    pub fn product(self, other: Self) -> Self {
        SubgroupRecipe::Product(Box::new(self), Box::new(other))
    }

    /// `E_1 = Fr(E)`.
    pub fn e1(&self) -> Self {
        self.clone().frattini()
    }

    /// `E_2 = mho_1(E) [F, Fr(E)]`.
    pub fn e2(&self) -> Self {
        self.clone().agemo().product(SubgroupRecipe::Whole.comm(self.e1()))
    }

    /// Parses `D<i>` or `P<j>`.
    pub fn parse_filtration_term(s: &str) -> Result<Self> {
        let bad = || Error::Input(format!("unknown subgroup `{s}`, expected D<i> or P<j>"));
        let (head, num) = s.split_at(1.min(s.len()));
        let k: usize = num.parse().map_err(|_| bad())?;
        match head {
            "D" if k >= 1 => Ok(SubgroupRecipe::d(k)),
            "P" => Ok(SubgroupRecipe::p(k)),
            _ => Err(bad()),
        }
    }

    pub fn eval(&self, g: &PcGroup) -> Result<Subgroup> {
        self.eval_with(g, &mut Chains::default())
    }

    fn eval_with(&self, g: &PcGroup, chains: &mut Chains) -> Result<Subgroup> {
        Ok(match self {
            SubgroupRecipe::Whole => Subgroup::whole(g),
            SubgroupRecipe::Zassenhaus(0) => {
                return Err(Error::Precondition("Zassenhaus terms start at D1".into()));
            }
            SubgroupRecipe::Zassenhaus(i) => chains
                .zassenhaus
                .get_or_insert_with(|| filtrations::zassenhaus_chain(g))
                .term(g, *i),
            SubgroupRecipe::PCentral(j) => chains
                .lower
                .get_or_insert_with(|| filtrations::lower_p_central_chain(g))
                .term(g, *j),
            SubgroupRecipe::Agemo(x) => filtrations::agemo_normal(g, &x.eval_with(g, chains)?),
            SubgroupRecipe::Comm(a, b) => {
                let (a, b) = (a.eval_with(g, chains)?, b.eval_with(g, chains)?);
                Subgroup::commutator(g, &a, &b)?
            }
            SubgroupRecipe::Product(a, b) => {
                let (a, b) = (a.eval_with(g, chains)?, b.eval_with(g, chains)?);
                a.join(g, &b)?
            }
            SubgroupRecipe::Frattini(x) => {
                let x = x.eval_with(g, chains)?;
                let c = Subgroup::commutator(g, &x, &x)?;
                filtrations::agemo_normal(g, &x).join(g, &c)?
            }
        })
    }
}

#[derive(Default)]
struct Chains {
    zassenhaus: Option<filtrations::FiltrationChain>,
    lower: Option<filtrations::FiltrationChain>,
}

impl fmt::Display for SubgroupRecipe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SubgroupRecipe::Whole => write!(f, "F"),
            SubgroupRecipe::Zassenhaus(i) => write!(f, "D{i}"),
            SubgroupRecipe::PCentral(j) => write!(f, "P{j}"),
            SubgroupRecipe::Agemo(x) => write!(f, "mho1({x})"),
            SubgroupRecipe::Comm(a, b) => write!(f, "[{a},{b}]"),
            SubgroupRecipe::Product(a, b) => write!(f, "{a}{b}"),
            SubgroupRecipe::Frattini(x) => write!(f, "Fr({x})"),
        }
    }
}

/// An involutive automorphism acting as `-1` on `G / Fr(G)`.
#[derive(Debug, Clone)]
pub struct SigmaWitness {
    pub group: PcGroup,
    pub sigma: GroupMap,
}

impl SigmaWitness {
    pub fn verify(&self) -> bool {
        let g = &self.group;
        if !self.sigma.is_homomorphism(g, g) {
            return false;
        }
        let fr = filtrations::frattini(g);
        g.generators().iter().all(|x| {
            let y = self.sigma.apply(g, x);
            self.sigma.apply(g, &y) == *x && fr.contains(g, &g.mul(&y, x))
        })
    }
}

fn is_negation(rows: &[Vec<u8>], p: u32) -> bool {
    rows.iter().enumerate().all(|(i, r)| {
        r.iter().enumerate().all(|(k, &e)| e == if i == k { (p - 1) as u8 } else { 0 })
    })
}

/// The involution among the powers of an automorphism of order `2 p^k`.
/// Raising to the odd power `p` keeps the action `-1` on the Frattini
/// quotient.
fn involution_power(g: &PcGroup, alpha: GroupMap) -> GroupMap {
    let id = g.generators();
    let mut a = alpha;
    while a.then(&a, g).images() != id.as_slice() {
        a = map_pow(g, &a, g.prime() as usize);
    }
    a
}

/// A verified sigma-witness, if `g` has an automorphism of order 2 acting as
/// `-1` on its Frattini quotient.
pub fn is_sigma_group(g: &PcGroup) -> Option<SigmaWitness> {
    let p = g.prime();
    let alpha = find_automorphism_with(g, &|rows| is_negation(rows, p))?;
    let w = SigmaWitness { group: g.clone(), sigma: involution_power(g, alpha) };
    assert!(w.verify(), "involution power must be a sigma-witness");
    Some(w)
}

/// Witness induced on `K = H* / U` by an automorphism of `H*` leaving `U`
/// invariant and acting as `-1` modulo the Frattini subgroup.
fn induced_witness(
    k: &PcGroup,
    proj: &GroupMap,
    cover: &CoverData,
    sigma_star: &GroupMap,
) -> Option<SigmaWitness> {
    let marks: Vec<Element> = cover.marks.iter().map(|m| proj.apply(k, m)).collect();
    let images: Vec<Element> =
        cover.marks.iter().map(|m| proj.apply(k, &sigma_star.apply(&cover.cover, m))).collect();
    let tp = TrackedPresentation::new(k, &marks).ok()?;
    let map = tp.group_map(k, k, &images);
    if !map.is_homomorphism(k, k) {
        return None;
    }
    let w = SigmaWitness { group: k.clone(), sigma: involution_power(k, map) };
    w.verify().then_some(w)
}

/// `[Aut(G) : Aut_sigma(G)]`, counted as the number of involutions acting
/// as `-1` on `G / Fr(G)`. These form one conjugacy class of `Aut(G)`, whose
/// size is the index of the centralizer of any member.
pub fn sigma_class_size(g: &PcGroup, opts: LiftingOptions) -> Result<u128> {
    let p = g.prime();
    let auts = automorphisms_with(g, &|rows| is_negation(rows, p), opts)?;
    let id = g.generators();
    Ok(auts.par_iter().filter(|a| a.then(a, g).images() == id.as_slice()).count() as u128)
}

/// `|C_Aut(G)(sigma)|` by direct enumeration of `Aut(G)`.
pub fn sigma_centralizer_order(w: &SigmaWitness, opts: LiftingOptions) -> Result<u128> {
    let g = &w.group;
    let auts = automorphisms_with(g, &|_| true, opts)?;
    Ok(auts.par_iter().filter(|a| a.then(&w.sigma, g).images() == w.sigma.then(a, g).images()).count() as u128)
}

/// `mho_1(G) = Fr(G)`.
pub fn is_powerful(g: &PcGroup) -> bool {
    filtrations::agemo_normal(g, &Subgroup::whole(g)) == filtrations::frattini(g)
}

/// Whether `E_1` and `E_2` agree in `q`, a quotient of `G` by a subgroup
/// contained in `E_2(G)`. Then `E(G)` is powerful exactly when they do.
pub fn powerful_via_criterion(e: &SubgroupRecipe, q: &PcGroup) -> Result<bool> {
    Ok(e.e1().eval(q)? == e.e2().eval(q)?)
}

/// Whether `E(G)`, as a group in its own right, is powerful.
pub fn is_powerful_subgroup(g: &PcGroup, e: &SubgroupRecipe) -> Result<bool> {
    let (eg, _) = e.eval(g)?.to_group(g);
    Ok(is_powerful(&eg))
}

type FreeKey = (String, u32, usize, usize);
type FreeCache = Mutex<HashMap<FreeKey, Arc<(PcGroup, Vec<Element>)>>>;

fn free_cache() -> &'static FreeCache {
    static CACHE: OnceLock<FreeCache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// `F_d / P_k E` with the images of the free generators, built by
/// alternately taking p-covers and factoring out `E`.
pub fn free_quotient(p: u32, d: usize, e: &SubgroupRecipe, k: usize) -> Result<Arc<(PcGroup, Vec<Element>)>> {
    let key = (e.to_string(), p, d, k);
    if let Some(q) = free_cache().lock().unwrap().get(&key) {
        return Ok(q.clone());
    }
    let out = if k <= 1 {
        let q = PcGroup::elementary_abelian(p, d);
        if !e.eval(&q)?.is_trivial() {
            return Err(Error::Precondition(format!("{e} is not contained in the Frattini subgroup")));
        }
        let marks = q.generators();
        (q, marks)
    } else {
        let below = free_quotient(p, d, e, k - 1)?;
        let data = covers::p_cover_with_marks(&below.0, &below.1)?;
        let ec = e.eval(&data.cover)?;
        let (q, proj) = data.cover.quotient(&ec)?;
        let marks = data.marks.iter().map(|m| proj.apply(&q, m)).collect();
        (q, marks)
    };
    let out = Arc::new(out);
    free_cache().lock().unwrap().insert(key, out.clone());
    Ok(out)
}

/// `r_E(K) = dim N / E N*` for `K = F_n / N`, computed in `F_n / P_{c+1} E`
/// with `c` the p-class of `K`; there `N*` contains `P_{c+1}`.
pub fn rel_rank(k: &PcGroup, e: &SubgroupRecipe) -> Result<usize> {
    if !e.eval(k)?.is_trivial() {
        return Err(Error::Precondition(format!("{e}(K) is not trivial")));
    }
    let d = filtrations::rank(k);
    if d > covers::GENERATOR_BOUND {
        return Err(Error::GeneratorBound { d, bound: covers::GENERATOR_BOUND });
    }
    let c = filtrations::p_class(k);
    let free = free_quotient(k.prime(), d, e, c + 1)?;
    let (q, qmarks) = (&free.0, &free.1);
    let tp = TrackedPresentation::new(q, qmarks)?;
    let map = tp.group_map(q, k, &covers::default_marks(k));
    if !map.is_homomorphism(q, k) {
        return Err(Error::NotHomomorphism);
    }
    let n = map.kernel(q, k);
    let nstar = filtrations::relative_frattini(q, &n)?;
    Ok(n.log_order() - nstar.log_order())
}

/// Depth of the free quotient used to test `D* <= E`.
pub const CONTAINMENT_DEPTH: usize = 6;

/// Whether `D* <= E P_depth` in the free group of rank `d`.
pub fn star_contained(p: u32, d: usize, dd: &SubgroupRecipe, e: &SubgroupRecipe, depth: usize) -> Result<bool> {
    let free = free_quotient(p, d, e, depth)?;
    let q = &free.0;
    let dq = dd.eval(q)?;
    Ok(filtrations::relative_frattini(q, &dq)?.is_trivial())
}

/// Lift to the p-cover of an automorphism of the base. The cover marks
/// go to arbitrary preimages; the action on the multiplicator does not
/// depend on that choice.
pub fn lift_automorphism(cover: &CoverData, alpha: &GroupMap) -> Result<GroupMap> {
    let (c, b) = (&cover.cover, &cover.base);
    let data = cover.projection.analyze(c, b);
    let images: Vec<Element> = cover
        .marks
        .iter()
        .map(|m| {
            let down = cover.projection.apply(b, m);
            data.preimage(c, b, &alpha.apply(b, &down)).expect("projection is onto")
        })
        .collect();
    let tp = TrackedPresentation::new(c, &cover.marks)?;
    let map = tp.group_map(c, c, &images);
    debug_assert!(map.is_homomorphism(c, c));
    Ok(map)
}

fn lift_sigma(cover: &CoverData, w: &SigmaWitness) -> Result<GroupMap> {
    lift_automorphism(cover, &w.sigma)
}

fn map_pow(g: &PcGroup, f: &GroupMap, k: usize) -> GroupMap {
    let mut out = GroupMap::identity(g);
    for _ in 0..k {
        out = out.then(f, g);
    }
    out
}

fn map_order(g: &PcGroup, f: &GroupMap) -> usize {
    let id = g.generators();
    let mut x = f.clone();
    let mut k = 1;
    while x.images() != id.as_slice() {
        x = x.then(f, g);
        k += 1;
    }
    k
}

/// An element of the centralizer of `sigma` in the coset `C beta`. With
/// `gamma = beta sigma beta^-1` the product `x = gamma sigma` has odd order
/// `m`, and `u = x^((m+1)/2)` conjugates `sigma` to `gamma`, so `u^-1 beta`
/// commutes with `sigma`.
pub fn centralizing(w: &SigmaWitness, beta: &GroupMap) -> GroupMap {
    let g = &w.group;
    let beta_inv = map_pow(g, beta, map_order(g, beta) - 1);
    let gamma = beta_inv.then(&w.sigma, g).then(beta, g);
    let x = w.sigma.then(&gamma, g);
    let m = map_order(g, &x);
    debug_assert!(m % 2 == 1);
    let u_inv = map_pow(g, &x, (m - 1) / 2);
    beta.then(&u_inv, g)
}

/// Matrix of an automorphism of the cover on the multiplicator; row `i` is
/// the image of basis vector `i`.
fn multiplicator_matrix(cover: &CoverData, f: &GroupMap) -> Vec<Vec<u8>> {
    cover
        .multiplicator
        .pcgs()
        .iter()
        .map(|b| cover.mult_coords(&f.apply(&cover.cover, b)).expect("M is characteristic"))
        .collect()
}

/// Output of a Schur step before deduplication.
#[derive(Debug, Clone, Serialize)]
pub struct StepStats {
    pub mu: usize,
    pub dim_e_cover: usize,
    pub step: usize,
    pub odd_dim: usize,
    pub candidates: usize,
    pub survivors: usize,
}

/// All Schur `E`-quotients `K` with `K / D(K) = H`, up to isomorphism, for a
/// Schur `D`-quotient `H` with `r_D(H) = n` and `D* <= E`. Preconditions are
/// verified first.
pub fn schur_step(h: &PcGroup, e: &SubgroupRecipe, dd: &SubgroupRecipe) -> Result<Vec<PcGroup>> {
    let n = filtrations::rank(h);
    let r = rel_rank(h, dd)?;
    if r != n {
        return Err(Error::Precondition(format!("r_{dd}(H) = {r}, expected {n}")));
    }
    if !star_contained(h.prime(), n, dd, e, CONTAINMENT_DEPTH)? {
        return Err(Error::Precondition(format!("{dd}* is not contained in {e}")));
    }
    let w = is_sigma_group(h).ok_or(Error::Precondition("H has no sigma-structure".into()))?;
    Ok(schur_step_unchecked(h, e, dd, &w)?.0)
}

/// Candidates are `K = H* / U` with `E(H*) <= U`, `U + D(H*)` the whole
/// multiplicator and `dim U / E(H*) = n`. Up to isomorphism `U` may be taken
/// invariant under the lift of `sigma`, and `U / E(H*)`, which is isomorphic
/// to `Rel_E(K)`, must then be totally odd.
pub fn schur_step_unchecked(
    h: &PcGroup,
    e: &SubgroupRecipe,
    dd: &SubgroupRecipe,
    w: &SigmaWitness,
) -> Result<(Vec<PcGroup>, StepStats)> {
    let (cover, found, stats) = candidates_with_rows(h, e, dd, w, true)?;
    let reps = merge_orbits(&cover, w, found)?;
    Ok((covers::dedupe(reps), stats))
}

/// Random automorphisms used to merge candidate orbits. Missing generators
/// only leave more work for the isomorphism tests that follow.
const ORBIT_SAMPLES: usize = 6;
const ORBIT_SEED: u64 = 0x5c4e_51a3;

/// Keeps one candidate per orbit of `C(sigma)` on the subspaces `U`. The
/// kernel of `K -> H` is `D(K)`, which is characteristic, so `H*/U` and
/// `H*/U'` are isomorphic exactly when an automorphism of `H` lifted to the
/// cover maps `U` to `U'`; only a sampled part of that group is used here.
fn merge_orbits(cover: &CoverData, w: &SigmaWitness, found: Vec<(Vec<Vec<u8>>, PcGroup)>) -> Result<Vec<PcGroup>> {
    if found.len() < 2 {
        return Ok(found.into_iter().map(|(_, k)| k).collect());
    }
    let p = cover.base.prime();
    let mu = cover.mu_rank;
    let canon = |rows: &[Vec<u8>]| {
        let mut r = rows.to_vec();
        fp::rref(&mut r, p);
        r.retain(|v| !fp::is_zero(v));
        r
    };
    let keys: Vec<Vec<Vec<u8>>> = found.iter().map(|(u, _)| canon(u)).collect();
    let index: HashMap<&Vec<Vec<u8>>, usize> = keys.iter().enumerate().map(|(i, k)| (k, i)).collect();
    let mut parent: Vec<usize> = (0..keys.len()).collect();
    fn root(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    let mut rng = ChaCha8Rng::seed_from_u64(ORBIT_SEED);
    for beta in sample_automorphisms(&cover.base, ORBIT_SAMPLES, &mut rng)? {
        let c = centralizing(w, &beta);
        let a = multiplicator_matrix(cover, &lift_automorphism(cover, &c)?);
        for (i, k) in keys.iter().enumerate() {
            let image: Vec<Vec<u8>> = k.iter().map(|v| fp::combine(&vec![0; mu], &a, v, p)).collect();
            if let Some(&j) = index.get(&canon(&image)) {
                let (ri, rj) = (root(&mut parent, i), root(&mut parent, j));
                parent[ri.max(rj)] = ri.min(rj);
            }
        }
    }
    Ok(found
        .into_iter()
        .enumerate()
        .filter(|(i, _)| root(&mut parent, *i) == *i)
        .map(|(_, (_, k))| k)
        .collect())
}

/// Candidate quotients with their sigma-witness filter applied. With
/// `odd_only` false, every `U` of the right shape is tried.
pub fn schur_candidates(
    h: &PcGroup,
    e: &SubgroupRecipe,
    dd: &SubgroupRecipe,
    w: &SigmaWitness,
    odd_only: bool,
) -> Result<(Vec<PcGroup>, StepStats)> {
    let (_, found, stats) = candidates_with_rows(h, e, dd, w, odd_only)?;
    Ok((found.into_iter().map(|(_, k)| k).collect(), stats))
}

type Found = Vec<(Vec<Vec<u8>>, PcGroup)>;

fn candidates_with_rows(
    h: &PcGroup,
    e: &SubgroupRecipe,
    dd: &SubgroupRecipe,
    w: &SigmaWitness,
    odd_only: bool,
) -> Result<(CoverData, Found, StepStats)> {
    let p = h.prime();
    let n = filtrations::rank(h);
    let cover = covers::p_cover(h)?;
    let mu = cover.mu_rank;
    let e_rows = cover.subspace_rows(&e.eval(&cover.cover)?)?;
    let d_rows = cover.subspace_rows(&dd.eval(&cover.cover)?)?;
    let dim_e = e_rows.len();
    let step = mu
        .checked_sub(n + dim_e)
        .ok_or_else(|| Error::Precondition(format!("mu(H) = {mu} < n + dim E(H*) = {}", n + dim_e)))?;

    // Directions spanning the space in which U / E(H*) is chosen.
    let dirs: Vec<Vec<u8>> = if odd_only {
        let sigma_star = lift_sigma(&cover, w)?;
        let shifted: Vec<Vec<u8>> = cover
            .multiplicator
            .pcgs()
            .iter()
            .enumerate()
            .map(|(i, b)| {
                let mut row = cover.mult_coords(&sigma_star.apply(&cover.cover, b)).expect("M is invariant");
                row[i] = fp::add(row[i], 1, p);
                row
            })
            .collect();
        let zero = vec![0u8; mu];
        let (_, odd) = fp::solve_columns(&shifted, &zero, p).expect("homogeneous");
        odd
    } else {
        (0..mu).map(|i| fp::unit(mu, i)).collect()
    };
    let pivots = {
        let mut tmp = e_rows.clone();
        fp::rref(&mut tmp, p)
    };
    let mut complement: Vec<Vec<u8>> = dirs
        .into_iter()
        .map(|mut v| {
            fp::reduce(&mut v, &e_rows, &pivots, p);
            v
        })
        .collect();
    fp::rref(&mut complement, p);
    let t = complement.len();

    let candidates: Vec<Vec<Vec<u8>>> = fp::subspaces(t, n, p)
        .into_iter()
        .map(|x| {
            let mut u = e_rows.clone();
            u.extend(x.iter().map(|c| fp::combine(&vec![0; mu], &complement, c, p)));
            u
        })
        .filter(|u| {
            let mut all = u.clone();
            all.extend(d_rows.iter().cloned());
            fp::rank(&all, p) == mu
        })
        .collect();
    let ncand = candidates.len();
    let sigma_star = if odd_only { Some(lift_sigma(&cover, w)?) } else { None };
    let survivors: Found = candidates
        .into_par_iter()
        .filter_map(|u| {
            let (k, proj) = cover.quotient_by_rows(&u);
            if !e.eval(&k).ok()?.is_trivial() {
                return None;
            }
            let sigma_ok = match &sigma_star {
                Some(s) => induced_witness(&k, &proj, &cover, s).is_some() || is_sigma_group(&k).is_some(),
                None => is_sigma_group(&k).is_some(),
            };
            sigma_ok.then_some((u, k))
        })
        .collect();
    let stats =
        StepStats { mu, dim_e_cover: dim_e, step, odd_dim: t, candidates: ncand, survivors: survivors.len() };
    Ok((cover, survivors, stats))
}

/// Outcome of the powerfulness recursion over one type.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    AllPowerful,
    NeverPowerful,
    Mixed,
    Inconclusive,
}

#[derive(Debug, Clone, Serialize)]
pub struct RecursionReport {
    #[serde(rename = "type")]
    pub type_label: String,
    #[serde(rename = "E")]
    pub e: String,
    pub verdict: Verdict,
    /// Largest `d(E(G))` over positive branches.
    pub max_rank: Option<usize>,
    pub levels_explored: usize,
    pub groups_examined: usize,
    /// Every group met whose order is at most `3^8`, for criterion checks.
    #[serde(skip)]
    pub small_groups: Vec<PcGroup>,
}

#[derive(Debug, Clone, Default)]
struct Tally {
    positive: bool,
    negative: bool,
    unresolved: bool,
    max_rank: Option<usize>,
    levels: usize,
    examined: usize,
    small: Vec<PcGroup>,
}

impl Tally {
    fn merge(mut self, o: Tally) -> Tally {
        self.positive |= o.positive;
        self.negative |= o.negative;
        self.unresolved |= o.unresolved;
        self.max_rank = self.max_rank.max(o.max_rank);
        self.levels = self.levels.max(o.levels);
        self.examined += o.examined;
        self.small.extend(o.small);
        self
    }

    fn verdict(&self) -> Verdict {
        match (self.positive, self.negative, self.unresolved) {
            (true, true, _) => Verdict::Mixed,
            (_, _, true) => Verdict::Inconclusive,
            (true, false, false) => Verdict::AllPowerful,
            (false, true, false) => Verdict::NeverPowerful,
            (false, false, false) => Verdict::Inconclusive,
        }
    }
}

pub const DEFAULT_MAX_CLASS: usize = 12;
const SMALL_ORDER_LOG: usize = 8;

/// Decides whether `E(G)` is powerful for all, none or some weak Schur
/// sigma-groups `G` with `G / D_4(G) = H0`, by walking the quotients
/// `G / P_j(G) E_2(G)` for `j = 3, 4, ...`.
pub fn powerfulness_recursion(
    label: &str,
    h0: &PcGroup,
    e: &SubgroupRecipe,
    max_class: usize,
) -> Result<RecursionReport> {
    let n = filtrations::rank(h0);
    let e2 = e.e2();
    let d4 = SubgroupRecipe::d(4);
    let p3 = SubgroupRecipe::p(3);
    let r = rel_rank(h0, &d4)?;
    if r != n {
        return Err(Error::Precondition(format!("r_D4(H0) = {r}, expected {n}")));
    }
    let w = is_sigma_group(h0).ok_or(Error::Precondition("H0 has no sigma-structure".into()))?;
    let (tops, _) = schur_step_unchecked(h0, &p3, &d4, &w)?;
    let mut level: Vec<PcGroup> = Vec::new();
    for k in &tops {
        let (q, _) = k.quotient(&e2.eval(k)?)?;
        level.push(q);
    }
    let level = covers::dedupe(level);
    let mut tally = Tally { levels: 1, examined: tops.len(), ..Default::default() };
    tally.small.extend(tops.iter().filter(|k| k.ngens() <= SMALL_ORDER_LOG).cloned());
    let branches: Vec<Result<Tally>> = level.par_iter().map(|h| branch(h, e, 3, max_class)).collect();
    for b in branches {
        tally = tally.merge(b?);
    }
    Ok(RecursionReport {
        type_label: label.to_string(),
        e: e.to_string(),
        verdict: tally.verdict(),
        max_rank: if tally.positive && !tally.negative { tally.max_rank } else { None },
        levels_explored: tally.levels,
        groups_examined: tally.examined,
        small_groups: tally.small,
    })
}

/// `h = G / P_j(G) E_2(G)`.
fn branch(h: &PcGroup, e: &SubgroupRecipe, j: usize, max_class: usize) -> Result<Tally> {
    let mut t = Tally { levels: j - 1, examined: 1, ..Default::default() };
    if h.ngens() <= SMALL_ORDER_LOG {
        t.small.push(h.clone());
    }
    if !e.e1().eval(h)?.is_trivial() {
        t.negative = true;
        return Ok(t);
    }
    let e2 = e.e2();
    let dd = SubgroupRecipe::p(j).product(e2.clone());
    let ee = SubgroupRecipe::p(j + 1).product(e2.clone());
    let cover = covers::p_cover(h)?;
    let dim_e = cover.subspace_rows(&e2.eval(&cover.cover)?)?.len();
    if cover.mu_rank == filtrations::rank(h) + dim_e {
        // No proper extension: `h = G / E_2(G)` and `E_1(G) = E_2(G)`.
        t.positive = true;
        t.max_rank = Some(e.eval(h)?.log_order());
        return Ok(t);
    }
    if j >= max_class {
        t.unresolved = true;
        return Ok(t);
    }
    let w = is_sigma_group(h).ok_or(Error::Precondition("branch group has no sigma-structure".into()))?;
    let (kids, _) = schur_step_unchecked(h, &ee, &dd, &w)?;
    let results: Vec<Result<Tally>> = kids.par_iter().map(|k| branch(k, e, j + 1, max_class)).collect();
    for r in results {
        t = t.merge(r?);
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pcgroup::{heisenberg, m27};

    #[test]
    fn powerful_examples() {
        assert!(is_powerful(&PcGroup::elementary_abelian(3, 3)));
        assert!(!is_powerful(&heisenberg(3)));
        assert!(is_powerful(&m27(3)));
    }

    #[test]
    fn sigma_examples() {
        let g = PcGroup::cyclic(3, 2).direct_product(&PcGroup::cyclic(3, 1)).unwrap();
        let w = is_sigma_group(&g).unwrap();
        assert!(w.verify());
        assert!(is_sigma_group(&heisenberg(3)).unwrap().verify());
    }

    #[test]
    fn recipe_display() {
        assert_eq!(SubgroupRecipe::d(2).e2().to_string(), "mho1(D2)[F,Fr(D2)]");
        assert_eq!(SubgroupRecipe::parse_filtration_term("D3").unwrap(), SubgroupRecipe::d(3));
        assert!(SubgroupRecipe::parse_filtration_term("D0").is_err());
        assert!(SubgroupRecipe::parse_filtration_term("X1").is_err());
    }

    #[test]
    fn free_quotient_orders() {
        let q = free_quotient(3, 2, &SubgroupRecipe::p(2), 2).unwrap();
        assert_eq!(q.0.ngens(), 5);
        let q = free_quotient(3, 2, &SubgroupRecipe::d(4), 3).unwrap();
        assert_eq!(filtrations::zassenhaus_chain(&q.0).graded_dims, vec![2, 1, 4]);
    }

    #[test]
    fn rel_rank_examples() {
        let q = free_quotient(3, 2, &SubgroupRecipe::d(4), 3).unwrap();
        assert_eq!(rel_rank(&q.0, &SubgroupRecipe::d(4)).unwrap(), 0);
        // C3 x C3 = F / P1: relations in F / P1 are not needed at all
        assert_eq!(rel_rank(&PcGroup::elementary_abelian(3, 2), &SubgroupRecipe::p(1)).unwrap(), 0);
        // C3 x C3 as a quotient of F needs three relations
        assert_eq!(rel_rank(&PcGroup::elementary_abelian(3, 2), &SubgroupRecipe::p(2)).unwrap(), 3);
        assert!(rel_rank(&heisenberg(3), &SubgroupRecipe::p(1)).is_err());
    }

    #[test]
    fn star_containment() {
        assert!(star_contained(3, 2, &SubgroupRecipe::d(4), &SubgroupRecipe::p(3), 4).unwrap());
        assert!(!star_contained(3, 2, &SubgroupRecipe::d(2), &SubgroupRecipe::d(4), 4).unwrap());
    }
}
