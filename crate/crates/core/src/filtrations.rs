//! Zassenhaus filtration, lower p-central series, Frattini subgroups.

use crate::error::{Error, Result};
use crate::pcgroup::{PcGroup, Subgroup};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FiltrationKind {
    Zassenhaus,
    LowerPCentral,
}

/// Descending chain from the whole group to the trivial subgroup.
#[derive(Debug, Clone)]
pub struct FiltrationChain {
    pub kind: FiltrationKind,
    pub terms: Vec<Subgroup>,
    pub graded_dims: Vec<usize>,
}

impl FiltrationChain {
    fn new(kind: FiltrationKind, terms: Vec<Subgroup>) -> Self {
        let graded_dims = terms.windows(2).map(|w| w[0].log_order() - w[1].log_order()).collect();
        FiltrationChain { kind, terms, graded_dims }
    }

    /// Term with the given index, trivial past the end. Zassenhaus chains
    /// are indexed from 1, lower p-central chains from 0.
    pub fn term(&self, g: &PcGroup, i: usize) -> Subgroup {
        let k = match self.kind {
            FiltrationKind::Zassenhaus => i.checked_sub(1).expect("Zassenhaus index starts at 1"),
            FiltrationKind::LowerPCentral => i,
        };
        self.terms.get(k).cloned().unwrap_or_else(|| Subgroup::trivial(g))
    }
}

/// `N* = mho_1(N) [G, N]` for `N` normal in `G`.
pub fn relative_frattini(g: &PcGroup, n: &Subgroup) -> Result<Subgroup> {
    n.check_owner(g)?;
    if !n.is_normal(g) {
        return Err(Error::NotNormal);
    }
    Ok(relative_frattini_unchecked(g, n))
}

/// Modulo `[G, N]` the subgroup `N` is central, so `mho_1(N)[G, N]` is the
/// normal closure of the p-th powers of a generating set of `N` together
/// with the commutators of `N`'s generators with those of `G`.
fn relative_frattini_unchecked(g: &PcGroup, n: &Subgroup) -> Subgroup {
    let mut gens = Vec::new();
    for s in n.pcgs() {
        gens.push(g.pow(s, g.prime() as u64));
        for h in g.generators() {
            gens.push(g.comm(s, &h));
        }
    }
    Subgroup::normal_closure(g, &gens)
}

/// Frattini subgroup `mho_1(G)[G, G] = P_1(G)`.
pub fn frattini(g: &PcGroup) -> Subgroup {
    relative_frattini_unchecked(g, &Subgroup::whole(g))
}

/// `d(G) = dim G / Fr(G)`.
pub fn rank(g: &PcGroup) -> usize {
    g.ngens() - frattini(g).log_order()
}

pub fn lower_p_central_chain(g: &PcGroup) -> FiltrationChain {
    let mut terms = vec![Subgroup::whole(g)];
    while !terms.last().unwrap().is_trivial() {
        let next = relative_frattini_unchecked(g, terms.last().unwrap());
        assert!(next.log_order() < terms.last().unwrap().log_order());
        terms.push(next);
    }
    FiltrationChain::new(FiltrationKind::LowerPCentral, terms)
}

pub fn p_class(g: &PcGroup) -> usize {
    lower_p_central_chain(g).terms.len() - 1
}

/// `mho_1` of a normal subgroup.
pub fn agemo_normal(g: &PcGroup, h: &Subgroup) -> Subgroup {
    Subgroup::agemo(g, h, 1).expect("same owner")
}

pub fn zassenhaus_chain(g: &PcGroup) -> FiltrationChain {
    let p = g.prime() as usize;
    // d[k] = D_{k+1}
    let mut d: Vec<Subgroup> = vec![Subgroup::whole(g)];
    let mut agemos: Vec<Option<Subgroup>> = vec![None];
    let mut i: usize = 2;
    while !d.last().unwrap().is_trivial() {
        let k = i.div_ceil(p);
        if agemos[k - 1].is_none() {
            agemos[k - 1] = Some(agemo_normal(g, &d[k - 1]));
        }
        let mut acc = agemos[k - 1].clone().unwrap();
        for j in 1..=i / 2 {
            let c = Subgroup::commutator(g, &d[j - 1], &d[i - j - 1]).unwrap();
            acc = acc.join(g, &c).unwrap();
        }
        d.push(acc);
        agemos.push(None);
        i += 1;
    }
    FiltrationChain::new(FiltrationKind::Zassenhaus, d)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Containment {
    Equal,
    Proper,
    /// Neither contains the other (never expected).
    Incomparable,
}

#[derive(Debug, Clone, Serialize)]
pub struct InclusionReport {
    /// `(name, log_p order)` for D2, P1, D3, P2, D4, P3.
    pub terms: Vec<(String, usize)>,
    /// Verdict between consecutive terms.
    pub steps: Vec<Containment>,
}

pub fn inclusion_chain_report(g: &PcGroup) -> InclusionReport {
    let z = zassenhaus_chain(g);
    let pc = lower_p_central_chain(g);
    let subs = [
        ("D2", z.term(g, 2)),
        ("P1", pc.term(g, 1)),
        ("D3", z.term(g, 3)),
        ("P2", pc.term(g, 2)),
        ("D4", z.term(g, 4)),
        ("P3", pc.term(g, 3)),
    ];
    let steps = subs
        .windows(2)
        .map(|w| {
            let (a, b) = (&w[0].1, &w[1].1);
            if !b.is_subgroup_of(g, a) {
                Containment::Incomparable
            } else if a.log_order() == b.log_order() {
                Containment::Equal
            } else {
                Containment::Proper
            }
        })
        .collect();
    InclusionReport {
        terms: subs.iter().map(|(n, s)| (n.to_string(), s.log_order())).collect(),
        steps,
    }
}
