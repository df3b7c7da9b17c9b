use super::{Element, GroupMap, PcGroup};
use crate::error::{Error, Result};
use crate::fp;

/// A subgroup of a [`PcGroup`], stored by its canonical induced pcgs:
/// leading positions strictly increase, every leading exponent is 1, and
/// every element has exponent 0 at the leading positions of the others.
#[derive(Debug, Clone)]
pub struct Subgroup {
    owner: u64,
    gens: Vec<Element>,
    pcgs: Vec<Element>,
    leads: Vec<usize>,
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.owner == other.owner && self.pcgs == other.pcgs
    }
}
impl Eq for Subgroup {}

fn leading(x: &[u8]) -> Option<usize> {
    x.iter().position(|&e| e != 0)
}

/// Partial induced pcgs indexed by leading position.
#[derive(Clone)]
struct Table<'a> {
    g: &'a PcGroup,
    slots: Vec<Option<Element>>,
    /// `inv_pows[l][c] = slots[l]^{-c}`.
    inv_pows: Vec<Vec<Element>>,
}

impl<'a> Table<'a> {
    fn new(g: &'a PcGroup) -> Self {
        Table { g, slots: vec![None; g.n], inv_pows: vec![Vec::new(); g.n] }
    }

    fn sift(&self, x: &mut Element) -> Option<usize> {
        for l in 0..self.g.n {
            if x[l] != 0 {
                if self.slots[l].is_none() {
                    return Some(l);
                }
                let y = &self.inv_pows[l][x[l] as usize];
                self.g.mul_in_place(x, y);
            }
        }
        None
    }

    fn insert(&mut self, l: usize, r: Element) {
        let inv = self.g.inverse(&r);
        let mut pows = vec![self.g.identity()];
        for c in 1..self.g.p as usize {
            let prev = pows[c - 1].clone();
            pows.push(self.g.mul(&prev, &inv));
        }
        self.slots[l] = Some(r);
        self.inv_pows[l] = pows;
    }

    /// Adds `x` and closes under p-th powers, commutators and conjugation
    /// by `conjugators`.
    fn close(&mut self, start: Vec<Element>, conjugators: &[Element]) {
        let g = self.g;
        let mut queue = start;
        while let Some(mut x) = queue.pop() {
            let Some(l) = self.sift(&mut x) else { continue };
            let k = fp::inv(x[l], g.p);
            let r = if k == 1 { x } else { g.pow(&x, k as u64) };
            queue.push(g.pow(&r, g.p as u64));
            for s in self.slots.iter().flatten() {
                queue.push(g.comm(&r, s));
            }
            for c in conjugators {
                queue.push(g.conjugate(&r, c));
            }
            self.insert(l, r);
        }
    }

    fn canonical(&self) -> (Vec<Element>, Vec<usize>) {
        let g = self.g;
        let leads: Vec<usize> = (0..g.n).filter(|&l| self.slots[l].is_some()).collect();
        let mut pcgs = Vec::with_capacity(leads.len());
        for &l in &leads {
            let mut s = self.slots[l].clone().unwrap();
            for &m in leads.iter().filter(|&&m| m > l) {
                if s[m] != 0 {
                    let y = &self.inv_pows[m][s[m] as usize];
                    g.mul_in_place(&mut s, y);
                }
            }
            pcgs.push(s);
        }
        (pcgs, leads)
    }
}

impl Subgroup {
    fn build(g: &PcGroup, gens: Vec<Element>, conjugators: &[Element]) -> Self {
        let mut t = Table::new(g);
        t.close(gens.clone(), conjugators);
        let (pcgs, leads) = t.canonical();
        Subgroup { owner: g.id, gens, pcgs, leads }
    }

    fn check_elements(g: &PcGroup, gens: &[Element]) {
        for x in gens {
            assert_eq!(x.len(), g.n, "element has wrong length for this group");
        }
    }

    /// The subgroup generated by `gens`.
    pub fn generated(g: &PcGroup, gens: &[Element]) -> Self {
        Self::check_elements(g, gens);
        Self::build(g, gens.to_vec(), &[])
    }

    /// The smallest normal subgroup containing `gens`.
    pub fn normal_closure(g: &PcGroup, gens: &[Element]) -> Self {
        Self::check_elements(g, gens);
        Self::build(g, gens.to_vec(), &g.generators())
    }

    pub fn trivial(g: &PcGroup) -> Self {
        Subgroup { owner: g.id, gens: vec![], pcgs: vec![], leads: vec![] }
    }

    pub fn whole(g: &PcGroup) -> Self {
        let gens = g.generators();
        Subgroup { owner: g.id, gens: gens.clone(), pcgs: gens, leads: (0..g.n).collect() }
    }

    /// Wraps an already canonical pcgs.
    fn from_canonical(g: &PcGroup, pcgs: Vec<Element>) -> Self {
        let leads = pcgs.iter().map(|s| leading(s).unwrap()).collect();
        Subgroup { owner: g.id, gens: pcgs.clone(), pcgs, leads }
    }

    /// Subgroup `<g_k, ..., g_{n-1}>` spanned by a tail of the pcgs; it is
    /// normal and canonical by construction.
    pub fn tail(g: &PcGroup, k: usize) -> Self {
        Self::from_canonical(g, (k..g.n).map(|i| g.generator(i)).collect())
    }

    pub fn owner_id(&self) -> u64 {
        self.owner
    }

    pub fn check_owner(&self, g: &PcGroup) -> Result<()> {
        if self.owner == g.id {
            Ok(())
        } else {
            Err(Error::ForeignSubgroup)
        }
    }

    pub fn generators(&self) -> &[Element] {
        &self.gens
    }

    pub fn pcgs(&self) -> &[Element] {
        &self.pcgs
    }

    pub fn leading_positions(&self) -> &[usize] {
        &self.leads
    }

    /// `log_p` of the order.
    pub fn log_order(&self) -> usize {
        self.pcgs.len()
    }

    pub fn order(&self, g: &PcGroup) -> u128 {
        (g.p as u128).pow(self.pcgs.len() as u32)
    }

    pub fn is_trivial(&self) -> bool {
        self.pcgs.is_empty()
    }

    /// Right-sifts `x` by the pcgs: returns `x * h` for the unique `h` in
    /// the subgroup making the result vanish at every leading position.
    pub fn reduce(&self, g: &PcGroup, x: &[u8]) -> Element {
        let mut y = x.to_vec();
        for (s, &l) in self.pcgs.iter().zip(&self.leads) {
            if y[l] != 0 {
                let c = g.p as u8 - y[l];
                let sc = g.pow(s, c as u64);
                // s^c has leading exponent c at l and zero at earlier leads,
                // but may carry into later leads; those are handled next.
                g.mul_in_place(&mut y, &sc);
            }
        }
        y
    }

    pub fn contains(&self, g: &PcGroup, x: &[u8]) -> bool {
        g.is_identity(&self.reduce(g, x))
    }

    /// Exponents `c` with `x = s_1^{c_1} ... s_m^{c_m}`, if `x` is a member.
    pub fn coords(&self, g: &PcGroup, x: &[u8]) -> Option<Vec<u8>> {
        let mut y = x.to_vec();
        let mut c = Vec::with_capacity(self.pcgs.len());
        for (s, &l) in self.pcgs.iter().zip(&self.leads) {
            let e = y[l];
            c.push(e);
            if e != 0 {
                let inv = g.inverse(&g.pow(s, e as u64));
                y = g.mul(&inv, &y);
            }
        }
        g.is_identity(&y).then_some(c)
    }

    /// Element `prod s_i^{c_i}`.
    pub fn element(&self, g: &PcGroup, c: &[u8]) -> Element {
        let mut x = g.identity();
        for (s, &e) in self.pcgs.iter().zip(c) {
            if e != 0 {
                g.mul_in_place(&mut x, &g.pow(s, e as u64));
            }
        }
        x
    }

    pub fn is_subgroup_of(&self, g: &PcGroup, other: &Subgroup) -> bool {
        self.pcgs.iter().all(|s| other.contains(g, s))
    }

    pub fn is_normal(&self, g: &PcGroup) -> bool {
        let gens = g.generators();
        self.pcgs.iter().all(|s| gens.iter().all(|h| self.contains(g, &g.conjugate(s, h))))
    }

    pub fn is_central(&self, g: &PcGroup) -> bool {
        let gens = g.generators();
        self.pcgs.iter().all(|s| gens.iter().all(|h| g.is_identity(&g.comm(s, h))))
    }

    /// `<A, B>`.
    pub fn join(&self, g: &PcGroup, other: &Subgroup) -> Result<Subgroup> {
        self.check_owner(g)?;
        other.check_owner(g)?;
        let mut t = Table::new(g);
        t.close(self.pcgs.clone(), &[]);
        t.close(other.pcgs.clone(), &[]);
        let (pcgs, leads) = t.canonical();
        let mut gens = self.gens.clone();
        gens.extend(other.gens.iter().cloned());
        Ok(Subgroup { owner: g.id, gens, pcgs, leads })
    }

    /// `[A, B]`, the subgroup generated by all commutators `[a, b]`.
    pub fn commutator(g: &PcGroup, a: &Subgroup, b: &Subgroup) -> Result<Subgroup> {
        a.check_owner(g)?;
        b.check_owner(g)?;
        let mut comms = Vec::new();
        for x in &a.pcgs {
            for y in &b.pcgs {
                comms.push(g.comm(x, y));
            }
        }
        // [A, B] is the normal closure in <A, B> of the generator commutators
        let mut conj = a.pcgs.clone();
        conj.extend(b.pcgs.iter().cloned());
        Ok(Self::build(g, comms, &conj))
    }

    /// `<h^{p^i} : h in H>`.
    pub fn agemo(g: &PcGroup, h: &Subgroup, i: u32) -> Result<Subgroup> {
        h.check_owner(g)?;
        if i == 0 {
            return Ok(h.clone());
        }
        let q = (g.p as u64).pow(i);
        let pcgs = &h.pcgs;
        let mut start: Vec<Element> = pcgs.iter().map(|s| g.pow(s, q)).collect();
        for a in 0..pcgs.len() {
            for b in a + 1..pcgs.len() {
                start.push(g.pow(&g.mul(&pcgs[a], &pcgs[b]), q));
            }
        }
        // powers and their H-conjugates are all p^i-th powers
        let mut t = Table::new(g);
        t.close(start, pcgs);
        loop {
            let (kp, _) = t.canonical();
            let k = Subgroup::from_canonical(g, kp);
            let Some(extra) = h.power_outside(g, &k, q) else {
                return Ok(k);
            };
            t.close(vec![extra], pcgs);
        }
    }

    /// Some `x^q` with `x` in `self` and `x^q` outside `k`, where `k` is a
    /// normal subgroup of `self`.
    fn power_outside(&self, g: &PcGroup, k: &Subgroup, q: u64) -> Option<Element> {
        // enumerate coset representatives: vectors over the non-leading
        // positions of k within self, using the coordinates of self's pcgs
        let (hg, emb) = self.to_group(g);
        let kk: Vec<Element> = k.pcgs.iter().map(|x| self.coords(g, x).unwrap()).collect();
        let ksub = Subgroup::generated(&hg, &kk);
        let free: Vec<usize> = (0..hg.n).filter(|i| !ksub.leads.contains(i)).collect();
        for v in fp::all_vectors(free.len(), g.p) {
            let mut y = hg.identity();
            for (&pos, &e) in free.iter().zip(&v) {
                y[pos] = e;
            }
            let yq = hg.pow(&y, q);
            if !ksub.contains(&hg, &yq) {
                return Some(emb.apply(g, &yq));
            }
        }
        None
    }

    /// Presentation on the canonical pcgs, with the embedding into `g`.
    pub fn to_group(&self, g: &PcGroup) -> (PcGroup, GroupMap) {
        let m = self.pcgs.len();
        let coords = |x: &Element| self.coords(g, x).expect("closed subgroup");
        let powers = self.pcgs.iter().map(|s| coords(&g.pow(s, g.p as u64))).collect();
        let comms = (0..m)
            .map(|i| (0..i).map(|j| coords(&g.comm(&self.pcgs[i], &self.pcgs[j]))).collect())
            .collect();
        let h = PcGroup::from_relations(g.p, powers, comms).expect("induced presentation");
        let emb = GroupMap::new_unchecked(&h, g, self.pcgs.clone());
        (h, emb)
    }

    /// `G / N` with its projection. Normality is always verified.
    pub fn quotient(g: &PcGroup, n: &Subgroup) -> Result<(PcGroup, GroupMap)> {
        n.check_owner(g)?;
        if !n.is_normal(g) {
            return Err(Error::NotNormal);
        }
        let keep: Vec<usize> = (0..g.n).filter(|i| !n.leads.contains(i)).collect();
        let project = |x: &Element| -> Element {
            let r = n.reduce(g, x);
            keep.iter().map(|&i| r[i]).collect()
        };
        let m = keep.len();
        let powers = keep.iter().map(|&i| project(&g.pow(&g.generator(i), g.p as u64))).collect();
        let comms = (0..m)
            .map(|a| {
                (0..a)
                    .map(|b| project(&g.comm(&g.generator(keep[a]), &g.generator(keep[b]))))
                    .collect()
            })
            .collect();
        let q = PcGroup::from_relations(g.p, powers, comms)?;
        let images = (0..g.n).map(|i| project(&g.generator(i))).collect();
        let map = GroupMap::new_unchecked(g, &q, images);
        Ok((q, map))
    }

    /// Image under a map into the map's target.
    pub fn image(&self, map: &GroupMap, target: &PcGroup) -> Subgroup {
        let imgs: Vec<Element> = self.pcgs.iter().map(|s| map.apply(target, s)).collect();
        Subgroup::generated(target, &imgs)
    }
}

impl PcGroup {
    pub fn subgroup(&self, gens: &[Element]) -> Subgroup {
        Subgroup::generated(self, gens)
    }

    pub fn normal_closure(&self, gens: &[Element]) -> Subgroup {
        Subgroup::normal_closure(self, gens)
    }

    pub fn quotient(&self, n: &Subgroup) -> Result<(PcGroup, GroupMap)> {
        Subgroup::quotient(self, n)
    }
}
