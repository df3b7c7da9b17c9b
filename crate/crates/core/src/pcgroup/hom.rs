use super::{Element, PcGroup, Subgroup};
use crate::error::{Error, Result};
use crate::fp;

/// A homomorphism given by the images of the source's pc generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupMap {
    source_id: u64,
    target_id: u64,
    images: Vec<Element>,
}

impl GroupMap {
    pub(crate) fn new_unchecked(source: &PcGroup, target: &PcGroup, images: Vec<Element>) -> Self {
        debug_assert_eq!(images.len(), source.ngens());
        GroupMap { source_id: source.id(), target_id: target.id(), images }
    }

    /// Checked constructor: fails unless every relation is preserved.
    pub fn new(source: &PcGroup, target: &PcGroup, images: Vec<Element>) -> Result<Self> {
        if images.len() != source.ngens() {
            return Err(Error::GeneratorCountMismatch { expected: source.ngens(), got: images.len() });
        }
        if images.iter().any(|x| x.len() != target.ngens() || x.iter().any(|&e| e as u32 >= target.prime())) {
            return Err(Error::InvalidPresentation("image is not an element of the target".into()));
        }
        let m = Self::new_unchecked(source, target, images);
        if m.is_homomorphism(source, target) {
            Ok(m)
        } else {
            Err(Error::NotHomomorphism)
        }
    }

    pub fn identity(g: &PcGroup) -> Self {
        Self::new_unchecked(g, g, g.generators())
    }

    pub fn source_id(&self) -> u64 {
        self.source_id
    }

    pub fn target_id(&self) -> u64 {
        self.target_id
    }

    pub fn images(&self) -> &[Element] {
        &self.images
    }

    /// Image of a source element given by its exponent vector.
    pub fn apply(&self, target: &PcGroup, x: &[u8]) -> Element {
        let mut y = target.identity();
        for (img, &e) in self.images.iter().zip(x) {
            if e != 0 {
                target.mul_in_place(&mut y, &target.pow(img, e as u64));
            }
        }
        y
    }

    pub fn is_homomorphism(&self, source: &PcGroup, target: &PcGroup) -> bool {
        if source.id() != self.source_id || target.id() != self.target_id {
            return false;
        }
        let p = source.prime() as u64;
        let im = &self.images;
        for i in 0..source.ngens() {
            if target.pow(&im[i], p) != self.apply(target, source.power_relation(i)) {
                return false;
            }
            for j in 0..i {
                if target.comm(&im[i], &im[j]) != self.apply(target, source.commutator_relation(i, j)) {
                    return false;
                }
            }
        }
        true
    }

    /// `next` after `self`.
    pub fn then(&self, next: &GroupMap, next_target: &PcGroup) -> GroupMap {
        assert_eq!(self.target_id, next.source_id, "maps do not compose");
        GroupMap {
            source_id: self.source_id,
            target_id: next.target_id,
            images: self.images.iter().map(|x| next.apply(next_target, x)).collect(),
        }
    }

    /// Kernel, image and a preimage oracle.
    pub fn analyze(&self, source: &PcGroup, target: &PcGroup) -> MapData {
        MapData::new(self, source, target)
    }

    pub fn kernel(&self, source: &PcGroup, target: &PcGroup) -> Subgroup {
        self.analyze(source, target).kernel
    }

    pub fn image(&self, source: &PcGroup, target: &PcGroup) -> Subgroup {
        let _ = source;
        Subgroup::generated(target, &self.images)
    }

    pub fn is_surjective(&self, source: &PcGroup, target: &PcGroup) -> bool {
        self.image(source, target).log_order() == target.ngens()
    }

    pub fn is_injective(&self, source: &PcGroup, target: &PcGroup) -> bool {
        self.kernel(source, target).is_trivial()
    }
}

/// Image pcgs with preimages, plus the kernel.
pub struct MapData {
    /// Indexed by leading position in the target: `(a, b)` with `phi(b) = a`
    /// and leading exponent of `a` equal to 1.
    table: Vec<Option<(Element, Element)>>,
    pub kernel: Subgroup,
    pub image_log_order: usize,
}

impl MapData {
    fn new(map: &GroupMap, source: &PcGroup, target: &PcGroup) -> Self {
        let p = source.prime();
        let mut table: Vec<Option<(Element, Element)>> = vec![None; target.ngens()];
        let mut kern = Vec::new();
        for i in (0..source.ngens()).rev() {
            let mut s = source.generator(i);
            let mut t = map.images[i].clone();
            let (t, s) = Self::sift(&table, source, target, &mut t, &mut s);
            match t {
                None => kern.push(s),
                Some((l, t)) => {
                    let k = fp::inv(t[l], p) as u64;
                    table[l] = Some((target.pow(&t, k), source.pow(&s, k)));
                }
            }
        }
        let image_log_order = table.iter().flatten().count();
        let kernel = Subgroup::generated(source, &kern);
        debug_assert_eq!(kernel.log_order() + image_log_order, source.ngens());
        MapData { table, kernel, image_log_order }
    }

    fn sift(
        table: &[Option<(Element, Element)>],
        source: &PcGroup,
        target: &PcGroup,
        t: &mut Element,
        s: &mut Element,
    ) -> (Option<(usize, Element)>, Element) {
        for l in 0..target.ngens() {
            if t[l] == 0 {
                continue;
            }
            let Some((a, b)) = &table[l] else {
                return (Some((l, t.clone())), s.clone());
            };
            let c = (target.prime() - t[l] as u32) as u64;
            target.mul_in_place(t, &target.pow(a, c));
            source.mul_in_place(s, &source.pow(b, c));
        }
        (None, s.clone())
    }

    /// Some `x` with `phi(x) = y`, if `y` lies in the image.
    pub fn preimage(&self, source: &PcGroup, target: &PcGroup, y: &[u8]) -> Option<Element> {
        let mut t = y.to_vec();
        let mut s = source.identity();
        let (rest, s) = Self::sift(&self.table, source, target, &mut t, &mut s);
        // y * phi(s) = 1
        rest.is_none().then(|| source.inverse(&s))
    }
}

/// Straight-line program over a list of generator values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SlpOp {
    Gen(usize),
    Mul(usize, usize),
    Pow(usize, u64),
    Inv(usize),
    Comm(usize, usize),
}

#[derive(Debug, Clone, Default)]
pub struct Slp {
    pub ops: Vec<SlpOp>,
}

impl Slp {
    fn push(&mut self, op: SlpOp) -> usize {
        self.ops.push(op);
        self.ops.len() - 1
    }

    /// Drops ops that do not contribute to `outputs`; returns the pruned
    /// program and the new indices of the outputs.
    fn prune(&self, outputs: &[usize]) -> (Slp, Vec<usize>) {
        let mut needed = vec![false; self.ops.len()];
        for &o in outputs {
            needed[o] = true;
        }
        for i in (0..self.ops.len()).rev() {
            if !needed[i] {
                continue;
            }
            match self.ops[i] {
                SlpOp::Gen(_) => {}
                SlpOp::Pow(a, _) | SlpOp::Inv(a) => needed[a] = true,
                SlpOp::Mul(a, b) | SlpOp::Comm(a, b) => {
                    needed[a] = true;
                    needed[b] = true;
                }
            }
        }
        let mut map = vec![usize::MAX; self.ops.len()];
        let mut out = Slp::default();
        for (i, op) in self.ops.iter().enumerate() {
            if needed[i] {
                let op = match *op {
                    SlpOp::Gen(k) => SlpOp::Gen(k),
                    SlpOp::Pow(a, e) => SlpOp::Pow(map[a], e),
                    SlpOp::Inv(a) => SlpOp::Inv(map[a]),
                    SlpOp::Mul(a, b) => SlpOp::Mul(map[a], map[b]),
                    SlpOp::Comm(a, b) => SlpOp::Comm(map[a], map[b]),
                };
                map[i] = out.push(op);
            }
        }
        (out, outputs.iter().map(|&o| map[o]).collect())
    }

    /// Values of every op, evaluated in `g` on the given generator values.
    pub fn eval(&self, g: &PcGroup, gens: &[Element]) -> Vec<Element> {
        let mut v: Vec<Element> = Vec::with_capacity(self.ops.len());
        for op in &self.ops {
            let x = match *op {
                SlpOp::Gen(i) => gens[i].clone(),
                SlpOp::Mul(a, b) => g.mul(&v[a], &v[b]),
                SlpOp::Pow(a, e) => g.pow(&v[a], e),
                SlpOp::Inv(a) => g.inverse(&v[a]),
                SlpOp::Comm(a, b) => g.comm(&v[a], &v[b]),
            };
            v.push(x);
        }
        v
    }
}

/// Relation of an induced pcgs `h`: `lhs(h) = prod_l h_l^{rhs_l}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Relator {
    Power { i: usize, rhs: Vec<u8> },
    Comm { i: usize, j: usize, rhs: Vec<u8> },
}

/// A pc presentation of a group in terms of a chosen generating tuple:
/// an induced pcgs `h` with straight-line programs from the tuple and the
/// power/commutator relations among the `h`.
#[derive(Debug, Clone)]
pub struct TrackedPresentation {
    p: u32,
    marks: Vec<Element>,
    slp: Slp,
    /// SLP index of each `h_i`.
    h_idx: Vec<usize>,
    h: Vec<Element>,
    leads: Vec<usize>,
    relators: Vec<Relator>,
    /// Coordinates of each pc generator of the group with respect to `h`.
    gen_coords: Vec<Vec<u8>>,
}

impl TrackedPresentation {
    /// Fails when `marks` does not generate `g`.
    pub fn new(g: &PcGroup, marks: &[Element]) -> Result<Self> {
        let n = g.ngens();
        let p = g.prime();
        let mut slp = Slp::default();
        let mut slots: Vec<Option<(Element, usize)>> = vec![None; n];
        // cached inverse-power SLP entries per slot: inv_pow[l][c]
        let mut inv_pow: Vec<Vec<Option<(Element, usize)>>> = vec![vec![None; p as usize]; n];
        let mut queue: Vec<(Element, usize)> = marks
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), slp.push(SlpOp::Gen(i))))
            .collect();
        queue.reverse();
        while let Some((mut x, mut xi)) = queue.pop() {
            let mut lead = None;
            for l in 0..n {
                if x[l] == 0 {
                    continue;
                }
                let Some((s, si)) = &slots[l] else {
                    lead = Some(l);
                    break;
                };
                let c = x[l] as usize;
                if inv_pow[l][c].is_none() {
                    let inv = g.inverse(s);
                    let ii = slp.push(SlpOp::Inv(*si));
                    let (val, idx) = if c == 1 {
                        (inv, ii)
                    } else {
                        (g.pow(&inv, c as u64), slp.push(SlpOp::Pow(ii, c as u64)))
                    };
                    inv_pow[l][c] = Some((val, idx));
                }
                let (y, yi) = inv_pow[l][c].as_ref().unwrap();
                g.mul_in_place(&mut x, y);
                xi = slp.push(SlpOp::Mul(xi, *yi));
            }
            let Some(l) = lead else { continue };
            let k = fp::inv(x[l], p) as u64;
            let (r, ri) = if k == 1 { (x, xi) } else { (g.pow(&x, k), slp.push(SlpOp::Pow(xi, k))) };
            // new work: p-th power and commutators with existing entries
            queue.push((g.pow(&r, p as u64), slp.push(SlpOp::Pow(ri, p as u64))));
            for (s, si) in slots.iter().flatten() {
                queue.push((g.comm(&r, s), slp.push(SlpOp::Comm(ri, *si))));
            }
            slots[l] = Some((r, ri));
        }
        if slots.iter().any(|s| s.is_none()) {
            return Err(Error::Precondition("elements do not generate the group".into()));
        }
        let (h, h_idx): (Vec<Element>, Vec<usize>) = slots.into_iter().map(|s| s.unwrap()).unzip();
        let (slp, h_idx) = slp.prune(&h_idx);
        let leads: Vec<usize> = (0..n).collect();
        let mut tp = TrackedPresentation {
            p,
            marks: marks.to_vec(),
            slp,
            h_idx,
            h,
            leads,
            relators: Vec::new(),
            gen_coords: Vec::new(),
        };
        let mut rels = Vec::new();
        for i in 0..n {
            rels.push(Relator::Power { i, rhs: tp.coords(g, &g.pow(&tp.h[i], p as u64)) });
            for j in 0..i {
                rels.push(Relator::Comm { i, j, rhs: tp.coords(g, &g.comm(&tp.h[i], &tp.h[j])) });
            }
        }
        tp.relators = rels;
        tp.gen_coords = (0..n).map(|i| tp.coords(g, &g.generator(i))).collect();
        Ok(tp)
    }

    /// Exponents `c` with `x = h_1^{c_1} ... h_n^{c_n}`.
    fn coords(&self, g: &PcGroup, x: &[u8]) -> Vec<u8> {
        let mut y = x.to_vec();
        let mut c = vec![0u8; self.h.len()];
        for (k, (s, &l)) in self.h.iter().zip(&self.leads).enumerate() {
            let e = y[l];
            c[k] = e;
            if e != 0 {
                let inv = g.inverse(&g.pow(s, e as u64));
                y = g.mul(&inv, &y);
            }
        }
        debug_assert!(g.is_identity(&y));
        c
    }

    pub fn marks(&self) -> &[Element] {
        &self.marks
    }

    pub fn relators(&self) -> &[Relator] {
        &self.relators
    }

    pub fn prime(&self) -> u32 {
        self.p
    }

    /// Images of `h` under the assignment `marks -> images`.
    pub fn eval_pcgs(&self, target: &PcGroup, images: &[Element]) -> Vec<Element> {
        let vals = self.slp.eval(target, images);
        self.h_idx.iter().map(|&i| vals[i].clone()).collect()
    }

    fn word(target: &PcGroup, y: &[Element], c: &[u8]) -> Element {
        let mut x = target.identity();
        for (yl, &e) in y.iter().zip(c) {
            if e != 0 {
                target.mul_in_place(&mut x, &target.pow(yl, e as u64));
            }
        }
        x
    }

    /// For each relator `lhs = rhs`, the value `rhs^-1 lhs` at `y`.
    pub fn relator_values(&self, target: &PcGroup, y: &[Element]) -> Vec<Element> {
        let p = self.p as u64;
        self.relators
            .iter()
            .map(|r| {
                let (lhs, rhs) = match r {
                    Relator::Power { i, rhs } => (target.pow(&y[*i], p), rhs),
                    Relator::Comm { i, j, rhs } => (target.comm(&y[*i], &y[*j]), rhs),
                };
                let w = Self::word(target, y, rhs);
                target.mul(&target.inverse(&w), &lhs)
            })
            .collect()
    }

    /// Whether `marks -> images` extends to a homomorphism.
    pub fn extends(&self, target: &PcGroup, images: &[Element]) -> bool {
        let y = self.eval_pcgs(target, images);
        self.relator_values(target, &y).iter().all(|v| target.is_identity(v))
    }

    /// The homomorphism determined by `marks -> images` (assumed valid),
    /// as images of the source's pc generators.
    pub fn map_images(&self, target: &PcGroup, images: &[Element]) -> Vec<Element> {
        let y = self.eval_pcgs(target, images);
        self.gen_coords.iter().map(|c| Self::word(target, &y, c)).collect()
    }

    pub fn group_map(&self, source: &PcGroup, target: &PcGroup, images: &[Element]) -> GroupMap {
        GroupMap::new_unchecked(source, target, self.map_images(target, images))
    }
}

impl PcGroup {
    /// Checked homomorphism from pc-generator images.
    pub fn homomorphism(&self, target: &PcGroup, images: Vec<Element>) -> Result<GroupMap> {
        GroupMap::new(self, target, images)
    }
}

#[cfg(test)]
mod tests {
    use super::super::{heisenberg, m27};
    use super::*;

    #[test]
    fn identity_map_is_valid() {
        let g = m27(3);
        assert!(GroupMap::identity(&g).is_homomorphism(&g, &g));
        assert!(g.homomorphism(&g, g.generators()).is_ok());
        assert!(matches!(
            g.homomorphism(&g, vec![g.identity()]),
            Err(Error::GeneratorCountMismatch { .. })
        ));
    }

    #[test]
    fn rejects_non_homomorphism() {
        let h = heisenberg(3);
        let c9 = PcGroup::cyclic(3, 2);
        // an element of order 9 cannot be the image of g1
        assert!(h.homomorphism(&c9, vec![vec![1, 0], vec![0, 0], vec![0, 0]]).is_err());
        // g3 = [g2, g1] must map to a commutator
        assert!(h.homomorphism(&c9, vec![vec![0, 0], vec![0, 0], vec![0, 1]]).is_err());
        assert!(h.homomorphism(&c9, vec![vec![0, 1], vec![0, 2], vec![0, 0]]).is_ok());
    }

    #[test]
    fn kernel_and_preimage() {
        let g = heisenberg(3);
        let z = g.subgroup(&[g.generator(2)]);
        let (q, proj) = g.quotient(&z).unwrap();
        let data = proj.analyze(&g, &q);
        assert_eq!(data.kernel, z);
        for y in q.elements() {
            let x = data.preimage(&g, &q, &y).unwrap();
            assert_eq!(proj.apply(&q, &x), y);
        }
    }

    #[test]
    fn tracked_presentation_reproduces_generators() {
        let g = heisenberg(3).direct_product(&m27(3)).unwrap();
        let marks = vec![
            g.mul(&g.generator(0), &g.generator(3)),
            g.generator(1),
            g.generator(4),
            g.generator(3),
        ];
        let tp = TrackedPresentation::new(&g, &marks).unwrap();
        assert!(tp.extends(&g, &marks));
        assert_eq!(tp.map_images(&g, &marks), g.generators());
        assert!(TrackedPresentation::new(&g, &marks[..2]).is_err());
    }
}
