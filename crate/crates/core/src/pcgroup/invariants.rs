use super::{PcGroup, Subgroup};
use crate::filtrations;
use crate::fp;

/// Abelian invariants of `G/[G, G]`, ascending.
pub fn abelian_invariants(g: &PcGroup) -> Vec<u64> {
    let whole = Subgroup::whole(g);
    let d = Subgroup::commutator(g, &whole, &whole).expect("same owner");
    let (q, _) = g.quotient(&d).expect("derived subgroup is normal");
    abelian_group_invariants(&q)
}

pub fn abelian_invariants_of(g: &PcGroup, h: &Subgroup) -> Vec<u64> {
    let (hg, _) = h.to_group(g);
    abelian_invariants(&hg)
}

/// Invariants of an abelian group from the orders of its agemo series.
fn abelian_group_invariants(q: &PcGroup) -> Vec<u64> {
    let p = q.prime() as u64;
    let mut logs = vec![q.ngens()];
    let mut cur = Subgroup::whole(q);
    while !cur.is_trivial() {
        let gens: Vec<_> = cur.pcgs().iter().map(|s| q.pow(s, p)).collect();
        cur = q.subgroup(&gens);
        logs.push(cur.log_order());
    }
    // r[i] = number of cyclic factors of order > p^i
    let r: Vec<usize> = logs.windows(2).map(|w| w[0] - w[1]).collect();
    let mut out = Vec::new();
    for i in 0..r.len() {
        let next = r.get(i + 1).copied().unwrap_or(0);
        for _ in 0..r[i] - next {
            out.push(p.pow(i as u32 + 1));
        }
    }
    out.sort();
    out
}

/// Isomorphism prescreen invariants. Enumeration-based entries are only
/// filled for small groups.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Invariants {
    pub log_order: usize,
    pub abelian: Vec<u64>,
    pub zassenhaus_dims: Vec<usize>,
    pub p_central_dims: Vec<usize>,
    pub derived_log_order: usize,
    pub center_log_order: Option<usize>,
    pub order_counts: Option<Vec<(u64, u64)>>,
    pub maximal_abelian: Vec<Vec<u64>>,
}

const ENUMERATION_LIMIT: usize = 10;

impl Invariants {
    pub fn compute(g: &PcGroup) -> Self {
        let whole = Subgroup::whole(g);
        let derived = Subgroup::commutator(g, &whole, &whole).unwrap();
        let small = g.ngens() <= ENUMERATION_LIMIT;
        let center_log_order = small.then(|| {
            let gens = g.generators();
            let center: Vec<_> = g
                .elements()
                .filter(|x| gens.iter().all(|h| g.is_identity(&g.comm(x, h))))
                .collect();
            g.subgroup(&center).log_order()
        });
        let order_counts = small.then(|| {
            let mut counts = std::collections::BTreeMap::new();
            for x in g.elements() {
                *counts.entry(g.element_order(&x)).or_insert(0u64) += 1;
            }
            counts.into_iter().collect()
        });
        Invariants {
            log_order: g.ngens(),
            abelian: abelian_invariants(g),
            zassenhaus_dims: filtrations::zassenhaus_chain(g).graded_dims,
            p_central_dims: filtrations::lower_p_central_chain(g).graded_dims,
            derived_log_order: derived.log_order(),
            center_log_order,
            order_counts,
            maximal_abelian: maximal_subgroup_invariants(g),
        }
    }
}

/// Maximal subgroups as preimages of the hyperplanes of `G/Fr(G)`,
/// in the order of the hyperplanes' normal vectors.
pub fn maximal_subgroups(g: &PcGroup) -> Vec<Subgroup> {
    let fr = filtrations::frattini(g);
    let (q, proj) = g.quotient(&fr).unwrap();
    let data = proj.analyze(g, &q);
    let d = q.ngens();
    let p = g.prime();
    let mut out = Vec::new();
    // one normal vector per line of the dual space, normalized leading 1
    for v in fp::all_vectors(d, p) {
        if v.iter().find(|&&e| e != 0) != Some(&1) {
            continue;
        }
        let hyper: Vec<Vec<u8>> = fp::all_vectors(d, p)
            .filter(|x| x.iter().zip(&v).map(|(a, b)| *a as u32 * *b as u32).sum::<u32>() % p == 0)
            .collect();
        let mut gens: Vec<_> = fr.pcgs().to_vec();
        for x in hyper {
            gens.push(data.preimage(g, &q, &x).unwrap());
        }
        out.push(g.subgroup(&gens));
    }
    out
}

fn maximal_subgroup_invariants(g: &PcGroup) -> Vec<Vec<u64>> {
    let mut inv: Vec<Vec<u64>> = maximal_subgroups(g).iter().map(|m| abelian_invariants_of(g, m)).collect();
    inv.sort();
    inv
}

#[cfg(test)]
mod tests {
    use super::super::{heisenberg, m27};
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(abelian_invariants(&PcGroup::elementary_abelian(3, 2)), vec![3, 3]);
        // the derived subgroup of M_27 is <a^3>, so the quotient is C_3 x C_3
        assert_eq!(abelian_invariants(&m27(3)), vec![3, 3]);
        assert_eq!(abelian_invariants(&heisenberg(3)), vec![3, 3]);
        assert_eq!(abelian_invariants(&PcGroup::cyclic(3, 3)), vec![27]);
        assert_eq!(abelian_invariants(&PcGroup::trivial(3)), Vec::<u64>::new());
        let g = PcGroup::cyclic(3, 2).direct_product(&PcGroup::cyclic(3, 1)).unwrap();
        assert_eq!(abelian_invariants(&g), vec![3, 9]);
    }

    #[test]
    fn maximal_subgroup_count() {
        assert_eq!(maximal_subgroups(&heisenberg(3)).len(), 4);
        assert_eq!(maximal_subgroups(&PcGroup::elementary_abelian(3, 3)).len(), 13);
        assert!(maximal_subgroups(&heisenberg(3)).iter().all(|m| m.log_order() == 2));
    }
}
