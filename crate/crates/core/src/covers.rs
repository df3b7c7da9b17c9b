//! p-covers, multiplicators, nuclei and immediate descendants.

use crate::error::{Error, Result};
use crate::filtrations;
use crate::fp;
use crate::pcgroup::{find_isomorphism_unscreened, Element, GroupMap, Invariants, PcGroup, Subgroup};
use crate::schur::SubgroupRecipe;
use rayon::prelude::*;

/// Largest generator number accepted by [`p_cover`].
pub const GENERATOR_BOUND: usize = 3;

/// The p-cover `G*` of a group `G` with its distinguished subgroups.
#[derive(Debug, Clone)]
pub struct CoverData {
    pub base: PcGroup,
    pub cover: PcGroup,
    /// Surjection `cover -> base` with kernel the multiplicator.
    pub projection: GroupMap,
    pub multiplicator: Subgroup,
    /// `P_c(cover)` for `c` the p-class of the base.
    pub nucleus: Subgroup,
    pub mu_rank: usize,
    pub nu_rank: usize,
    /// Lifts in the cover of the base marks.
    pub marks: Vec<Element>,
}

/// Generators `g_i` whose indices are not leading positions of `Fr(G)`.
/// They map onto a basis of `G / Fr(G)`.
pub fn default_marks(g: &PcGroup) -> Vec<Element> {
    let fr = filtrations::frattini(g);
    (0..g.ngens())
        .filter(|i| !fr.leading_positions().contains(i))
        .map(|i| g.generator(i))
        .collect()
}

pub fn p_cover(g: &PcGroup) -> Result<CoverData> {
    p_cover_with_marks(g, &default_marks(g))
}

/// p-cover with respect to a minimal generating tuple `marks` of `g`.
/// Cover marks are lifts of `marks` and generate the cover.
pub fn p_cover_with_marks(g: &PcGroup, marks: &[Element]) -> Result<CoverData> {
    let d = filtrations::rank(g);
    if d > GENERATOR_BOUND {
        return Err(Error::GeneratorBound { d, bound: GENERATOR_BOUND });
    }
    if marks.len() != d || g.subgroup(marks).log_order() != g.ngens() {
        return Err(Error::Precondition("marks must be a minimal generating tuple".into()));
    }
    let ext = tails_extension(g)?;
    let n = g.ngens();
    let lifts: Vec<Element> = marks
        .iter()
        .map(|m| {
            let mut x = m.clone();
            x.resize(ext.ngens(), 0);
            x
        })
        .collect();
    let s = ext.subgroup(&lifts);
    let (cover, emb) = s.to_group(&ext);
    let images = emb.images().iter().map(|x| x[..n].to_vec()).collect();
    let projection = GroupMap::new_unchecked(&cover, g, images);
    let cover_marks: Vec<Element> = lifts.iter().map(|x| s.coords(&ext, x).expect("lift lies in S")).collect();
    let data = projection.analyze(&cover, g);
    let multiplicator = data.kernel;
    let c = filtrations::p_class(g);
    let nucleus = filtrations::lower_p_central_chain(&cover).term(&cover, c);
    Ok(CoverData {
        base: g.clone(),
        mu_rank: multiplicator.log_order(),
        nu_rank: nucleus.log_order(),
        cover,
        projection,
        multiplicator,
        nucleus,
        marks: cover_marks,
    })
}

/// Central extension of `g` by one tail per relation, made consistent by
/// factoring out the tail combinations forced by the test words.
fn tails_extension(g: &PcGroup) -> Result<PcGroup> {
    let n = g.ngens();
    let p = g.prime();
    let m = n + n * (n - 1) / 2;
    let tail = |r: usize, w: &Element| -> Element {
        let mut x = w.clone();
        x.resize(n + m, 0);
        x[n + r] = 1;
        x
    };
    let mut powers = Vec::with_capacity(n + m);
    let mut comms: Vec<Vec<Element>> = Vec::with_capacity(n + m);
    let mut r = n;
    for i in 0..n {
        powers.push(tail(i, g.power_relation(i)));
        let mut row = Vec::with_capacity(i);
        for j in 0..i {
            row.push(tail(r, g.commutator_relation(i, j)));
            r += 1;
        }
        comms.push(row);
    }
    for i in n..n + m {
        powers.push(vec![0; n + m]);
        comms.push(vec![vec![0; n + m]; i]);
    }
    let mut ext = PcGroup::from_relations(p, powers, comms)?;
    loop {
        // Tails are central, so test words that involve them always agree and
        // the two sides of any other test word differ by a tail vector.
        let mut defects: Vec<Vec<u8>> = ext
            .consistency_pairs_below(n)
            .into_iter()
            .map(|(l, r)| {
                debug_assert_eq!(l[..n], r[..n]);
                l[n..].iter().zip(&r[n..]).map(|(&a, &b)| fp::sub(b, a, p)).collect::<Vec<u8>>()
            })
            .filter(|v| !fp::is_zero(v))
            .collect();
        if defects.is_empty() {
            return Ok(ext);
        }
        let width = ext.ngens() - n;
        let pivots = fp::rref(&mut defects, p);
        let free: Vec<usize> = (0..width).filter(|c| !pivots.contains(c)).collect();
        // A tail vector v is congruent to its reduction, supported on `free`.
        let rewrite = |x: &Element| -> Element {
            let mut v = x[n..].to_vec();
            fp::reduce(&mut v, &defects, &pivots, p);
            let mut y = x[..n].to_vec();
            y.extend(free.iter().map(|&c| v[c]));
            y
        };
        let k = n + free.len();
        let mut powers = Vec::with_capacity(k);
        let mut comms = Vec::with_capacity(k);
        for i in 0..n {
            powers.push(rewrite(ext.power_relation(i)));
            comms.push((0..i).map(|j| rewrite(ext.commutator_relation(i, j))).collect::<Vec<_>>());
        }
        for i in n..k {
            powers.push(vec![0; k]);
            comms.push(vec![vec![0; k]; i]);
        }
        ext = PcGroup::from_relations(p, powers, comms)?;
    }
}

impl CoverData {
    /// Coordinates of a multiplicator element in the multiplicator's pcgs.
    pub fn mult_coords(&self, x: &[u8]) -> Option<Vec<u8>> {
        self.multiplicator.coords(&self.cover, x)
    }

    /// Subgroup of the multiplicator spanned by coordinate vectors.
    pub fn mult_subspace(&self, rows: &[Vec<u8>]) -> Subgroup {
        let gens: Vec<Element> = rows.iter().map(|r| self.multiplicator.element(&self.cover, r)).collect();
        self.cover.subgroup(&gens)
    }

    /// Coordinate rows of a subgroup of the multiplicator, in echelon form.
    pub fn subspace_rows(&self, s: &Subgroup) -> Result<Vec<Vec<u8>>> {
        let mut rows = Vec::with_capacity(s.log_order());
        for x in s.pcgs() {
            rows.push(self.mult_coords(x).ok_or(Error::Precondition("subgroup not inside the multiplicator".into()))?);
        }
        fp::rref(&mut rows, self.cover.prime());
        Ok(rows)
    }

    /// `cover / U` for `U` inside the multiplicator given by coordinate rows.
    pub fn quotient_by_rows(&self, rows: &[Vec<u8>]) -> (PcGroup, GroupMap) {
        let u = self.mult_subspace(rows);
        self.cover.quotient(&u).expect("multiplicator subgroups are central")
    }
}

/// `log_p |E(G*)|`, where `E(G*)` must lie in the multiplicator.
pub fn dim_e_in_cover(data: &CoverData, recipe: &SubgroupRecipe) -> Result<usize> {
    let e = recipe.eval(&data.cover)?;
    if !e.is_subgroup_of(&data.cover, &data.multiplicator) {
        return Err(Error::Precondition(format!("{recipe} is not contained in the multiplicator")));
    }
    Ok(e.log_order())
}

/// Immediate descendants of `g` of order `|g| p^step`, up to isomorphism,
/// in the order of first appearance over the echelon enumeration.
pub fn immediate_descendants(g: &PcGroup, step: usize) -> Result<Vec<PcGroup>> {
    if step == 0 {
        return Err(Error::Precondition("step must be positive".into()));
    }
    if g.ngens() == 0 {
        return Err(Error::Precondition("the trivial group has no descendants".into()));
    }
    let data = p_cover(g)?;
    let mu = data.mu_rank;
    if step > mu {
        return Ok(Vec::new());
    }
    let p = g.prime();
    let nucleus_rows = data.subspace_rows(&data.nucleus)?;
    let candidates: Vec<Vec<Vec<u8>>> = fp::subspaces(mu, mu - step, p)
        .into_iter()
        .filter(|u| {
            let mut all = u.clone();
            all.extend(nucleus_rows.iter().cloned());
            fp::rank(&all, p) == mu
        })
        .collect();
    let groups: Vec<PcGroup> = candidates.par_iter().map(|u| data.quotient_by_rows(u).0).collect();
    Ok(dedupe(groups))
}

/// Keeps the first member of every isomorphism class, preserving order.
pub fn dedupe(groups: Vec<PcGroup>) -> Vec<PcGroup> {
    let invs: Vec<Invariants> = groups.par_iter().map(Invariants::compute).collect();
    let mut reps: Vec<usize> = Vec::new();
    for i in 0..groups.len() {
        let dup = reps
            .par_iter()
            .any(|&r| invs[r] == invs[i] && find_isomorphism_unscreened(&groups[r], &groups[i]).is_some());
        if !dup {
            reps.push(i);
        }
    }
    let mut groups: Vec<Option<PcGroup>> = groups.into_iter().map(Some).collect();
    reps.into_iter().map(|i| groups[i].take().unwrap()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pcgroup::{abelian_invariants, heisenberg};

    fn check(data: &CoverData) {
        let (c, b) = (&data.cover, &data.base);
        assert!(c.is_consistent());
        assert!(data.projection.is_homomorphism(c, b));
        assert!(data.projection.is_surjective(c, b));
        assert!(data.multiplicator.is_central(c));
        assert_eq!(c.ngens(), b.ngens() + data.mu_rank);
        assert!(data.nucleus.is_subgroup_of(c, &data.multiplicator));
        assert_eq!(c.subgroup(&data.marks).log_order(), c.ngens());
    }

    #[test]
    fn cyclic_cover() {
        let data = p_cover(&PcGroup::cyclic(3, 1)).unwrap();
        check(&data);
        assert_eq!((data.mu_rank, data.nu_rank), (1, 1));
        assert_eq!(abelian_invariants(&data.cover), vec![9]);
    }

    #[test]
    fn elementary_cover() {
        let data = p_cover(&PcGroup::elementary_abelian(3, 2)).unwrap();
        check(&data);
        assert_eq!((data.mu_rank, data.nu_rank), (3, 3));
        assert_eq!(data.cover.ngens(), 5);
        let data = p_cover(&heisenberg(3)).unwrap();
        check(&data);
        // d(G) plus the rank of the Schur multiplier C_3 x C_3.
        assert_eq!(data.mu_rank, 4);
    }

    #[test]
    fn class_three_cover() {
        // Tails enter the defects of (g4 g2) g1 only through the collector.
        let g = PcGroup::from_text("pcgroup p=3 n=5\ng1^p = g3^1\n[g2,g1] = g4^1\n[g4,g1] = g5^1\n").unwrap();
        let data = p_cover(&g).unwrap();
        check(&data);
    }

    #[test]
    fn order_27_descendants() {
        let c32 = PcGroup::elementary_abelian(3, 2);
        let kids = immediate_descendants(&c32, 1).unwrap();
        assert_eq!(kids.len(), 3);
        assert!(kids.iter().all(|k| k.ngens() == 3 && filtrations::p_class(k) == 2));
        assert!(immediate_descendants(&c32, 4).unwrap().is_empty());
        assert!(immediate_descendants(&c32, 0).is_err());
    }

    #[test]
    fn generator_bound() {
        assert!(p_cover(&PcGroup::elementary_abelian(3, 4)).is_err());
    }
}
