//! The 19 isomorphism types of `G / D_4(G)` for two-generated weak Schur
//! sigma-groups at `p = 3`, Massey-relator classification, and IPADs.
//!
//! `Fbar = F_2 / D_4(F_2)` has `gr_3 = D_3(Fbar)` of dimension 4 with basis
//! `(a1^3, a2^3, [[a1,a2],a1], [[a1,a2],a2])`. Every type is `Fbar / S` for
//! a subspace `S` of `gr_3` of dimension at most 2, and two subspaces give
//! isomorphic quotients exactly when they lie in one orbit of the action of
//! `GL_2(F_3)` induced by substituting the generators.

use crate::error::{Error, Result};
use crate::filtrations;
use crate::fp;
use crate::pcgroup::{
    abelian_invariants, abelian_invariants_of, automorphism_count, find_isomorphism, maximal_subgroups,
    Element, GroupMap, LiftingOptions, PcGroup, Subgroup, TrackedPresentation,
};
use crate::schur::{self, SubgroupRecipe};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

pub const P: u32 = 3;

/// Square matrix over `F_p`, acting on row vectors from the right.
pub type Matrix = Vec<Vec<u8>>;

/// `F_2 / D_4(F_2)` with its generators and the basis of `gr_3`.
#[derive(Debug, Clone)]
pub struct FreeD4 {
    pub group: PcGroup,
    pub marks: Vec<Element>,
    /// `D_3`, which equals `gr_3` because `D_4` is trivial.
    pub gr3: Subgroup,
    /// `(a1^3, a2^3, [[a1,a2],a1], [[a1,a2],a2])`.
    pub basis: Vec<Element>,
    /// Inverse of the matrix whose rows are the basis in `gr3` coordinates.
    to_basis: Vec<Vec<u8>>,
}

impl FreeD4 {
    pub fn new() -> Result<Self> {
        let free = schur::free_quotient(P, 2, &SubgroupRecipe::d(4), 3)?;
        let (g, marks) = (free.0.clone(), free.1.clone());
        let gr3 = filtrations::zassenhaus_chain(&g).term(&g, 3);
        let (a1, a2) = (&marks[0], &marks[1]);
        let c = g.comm(a1, a2);
        let basis = vec![g.pow(a1, 3), g.pow(a2, 3), g.comm(&c, a1), g.comm(&c, a2)];
        let rows: Vec<Vec<u8>> = basis.iter().map(|b| gr3.coords(&g, b).expect("basis lies in D3")).collect();
        let to_basis = invert(&rows).ok_or(Error::Precondition("gr3 basis is dependent".into()))?;
        Ok(FreeD4 { group: g, marks, gr3, basis, to_basis })
    }

    /// Coordinates of an element of `D_3` in the fixed basis.
    pub fn gr3_coords(&self, x: &[u8]) -> Option<Vec<u8>> {
        let c = self.gr3.coords(&self.group, x)?;
        Some(fp::vec_mat(&c, &self.to_basis, P))
    }

    pub fn gr3_element(&self, v: &[u8]) -> Element {
        let mut x = self.group.identity();
        for (b, &e) in self.basis.iter().zip(v) {
            self.group.mul_in_place(&mut x, &self.group.pow(b, e as u64));
        }
        x
    }

    /// Automorphism sending `a_i` to `a1^{m[i][0]} a2^{m[i][1]}`.
    pub fn substitution(&self, m: &[Vec<u8>]) -> GroupMap {
        let g = &self.group;
        let images: Vec<Element> = m
            .iter()
            .map(|r| g.mul(&g.pow(&self.marks[0], r[0] as u64), &g.pow(&self.marks[1], r[1] as u64)))
            .collect();
        let tp = TrackedPresentation::new(g, &self.marks).expect("marks generate");
        tp.group_map(g, g, &images)
    }

    /// Matrix of the induced action on `gr_3`: row `k` is the image of the
    /// `k`-th basis vector.
    pub fn induced_matrix(&self, m: &[Vec<u8>]) -> Vec<Vec<u8>> {
        let phi = self.substitution(m);
        self.basis
            .iter()
            .map(|b| self.gr3_coords(&phi.apply(&self.group, b)).expect("gr3 is characteristic"))
            .collect()
    }

    /// `Fbar / S` for `S` spanned by the given `gr_3` vectors.
    pub fn quotient(&self, rows: &[Vec<u8>]) -> PcGroup {
        let gens: Vec<Element> = rows.iter().map(|r| self.gr3_element(r)).collect();
        let s = self.group.subgroup(&gens);
        self.group.quotient(&s).expect("gr3 is central").0
    }
}

fn invert(m: &[Vec<u8>]) -> Option<Vec<Vec<u8>>> {
    let n = m.len();
    let mut aug: Vec<Vec<u8>> = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend(fp::unit(n, i));
            row
        })
        .collect();
    let piv = fp::rref(&mut aug, P);
    if piv.len() != n || piv.iter().enumerate().any(|(i, &c)| c != i) {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// All 48 elements of `GL_2(F_3)`, rows are images of basis vectors.
pub fn gl2() -> Vec<Vec<Vec<u8>>> {
    let mut out = Vec::new();
    for r0 in fp::all_vectors(2, P) {
        for r1 in fp::all_vectors(2, P) {
            let m = vec![r0.clone(), r1];
            if fp::rank(&m, P) == 2 {
                out.push(m);
            }
        }
    }
    out
}

/// Induced `gr_3` matrices for every element of `GL_2(F_3)`, in the order
/// of [`gl2`].
pub fn induced_action(free: &FreeD4) -> Vec<(Matrix, Matrix)> {
    gl2().into_par_iter().map(|a| (a.clone(), free.induced_matrix(&a))).collect()
}

/// Row-reduced basis of the image of a subspace under a matrix.
fn transform(rows: &[Vec<u8>], m: &[Vec<u8>]) -> Vec<Vec<u8>> {
    let mut img: Vec<Vec<u8>> = rows.iter().map(|r| fp::vec_mat(r, m, P)).collect();
    fp::rref(&mut img, P);
    img
}

/// Lexicographically least echelon basis in the orbit of a subspace.
pub fn orbit_rep(rows: &[Vec<u8>], mats: &[Vec<Vec<u8>>]) -> Vec<Vec<u8>> {
    mats.iter().map(|m| transform(rows, m)).min().expect("nonempty group")
}

/// Index-p-abelianization data: invariants of the group and of its
/// maximal subgroups.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Ipad {
    pub top: Vec<u64>,
    /// Sorted ascending, each list ascending.
    pub subquotients: Vec<Vec<u64>>,
}

pub fn ipad(g: &PcGroup) -> Result<Ipad> {
    let d = filtrations::rank(g);
    if d != 2 {
        return Err(Error::Precondition(format!("IPAD needs d(G) = 2, got {d}")));
    }
    let mut subquotients: Vec<Vec<u64>> = maximal_subgroups(g).iter().map(|m| abelian_invariants_of(g, m)).collect();
    subquotients.sort();
    Ok(Ipad { top: abelian_invariants(g), subquotients })
}

fn bracket(v: &[u64]) -> String {
    let parts: Vec<String> = v.iter().rev().map(|x| x.to_string()).collect();
    format!("[{}]", parts.join(","))
}

impl fmt::Display for Ipad {
    /// `[3,3]; [3,3,3], [9,3]^3`, largest factor first within a bracket.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}; ", bracket(&self.top))?;
        let mut groups: Vec<(Vec<u64>, usize)> = Vec::new();
        for s in &self.subquotients {
            match groups.last_mut() {
                Some((v, c)) if v == s => *c += 1,
                _ => groups.push((s.clone(), 1)),
            }
        }
        let parts: Vec<String> = groups
            .iter()
            .map(|(v, c)| if *c == 1 { bracket(v) } else { format!("{}^{c}", bracket(v)) })
            .collect();
        write!(f, "{}", parts.join(", "))
    }
}

/// Transfer kernels `ker(G/G' -> M/M')` for the maximal subgroups `M`,
/// summarized up to relabeling: for each `M`, the order of its kernel and
/// the set of maximal subgroups containing it, canonicalized over all
/// permutations of the maximal subgroups.
pub fn transfer_pattern(g: &PcGroup) -> Vec<(usize, Vec<usize>)> {
    let maxes = maximal_subgroups(g);
    let whole = Subgroup::whole(g);
    let derived = Subgroup::commutator(g, &whole, &whole).expect("same owner");
    let (ab, proj) = g.quotient(&derived).expect("normal");
    let data = proj.analyze(g, &ab);
    let reps: Vec<Element> = ab.elements().map(|y| data.preimage(g, &ab, &y).unwrap()).collect();
    let kernels: Vec<Subgroup> = maxes
        .iter()
        .map(|m| {
            let md = Subgroup::commutator(g, m, m).unwrap();
            let outside = (0..g.ngens()).map(|i| g.generator(i)).find(|x| !m.contains(g, x)).expect("proper");
            let kernel: Vec<Element> = reps
                .iter()
                .filter(|x| {
                    let v = if m.contains(g, x) {
                        let mut acc = g.identity();
                        let mut conj = (*x).clone();
                        for _ in 0..g.prime() {
                            g.mul_in_place(&mut acc, &conj);
                            conj = g.conjugate(&conj, &outside);
                        }
                        acc
                    } else {
                        g.pow(x, g.prime() as u64)
                    };
                    md.contains(g, &v)
                })
                .map(|x| proj.apply(&ab, x))
                .collect();
            ab.subgroup(&kernel)
        })
        .collect();
    let max_images: Vec<Subgroup> = maxes.iter().map(|m| m.image(&proj, &ab)).collect();
    let k = maxes.len();
    let rows: Vec<(usize, Vec<bool>)> = kernels
        .iter()
        .map(|kr| (kr.log_order(), max_images.iter().map(|mi| kr.is_subgroup_of(&ab, mi)).collect()))
        .collect();
    let mut best: Option<Vec<(usize, Vec<usize>)>> = None;
    for perm in permutations(k) {
        // relabel subgroup i as perm[i]
        let mut form: Vec<(usize, Vec<usize>)> = vec![(0, Vec::new()); k];
        for i in 0..k {
            let mut inc: Vec<usize> = (0..k).filter(|&j| rows[i].1[j]).map(|j| perm[j]).collect();
            inc.sort();
            form[perm[i]] = (rows[i].0, inc);
        }
        if best.as_ref().is_none_or(|b| form < *b) {
            best = Some(form);
        }
    }
    best.unwrap_or_default()
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for rest in permutations(k - 1) {
        for pos in 0..=rest.len() {
            let mut v = rest.clone();
            v.insert(pos, k - 1);
            out.push(v);
        }
    }
    out
}

/// One isomorphism type of `G / D_4(G)`.
#[derive(Debug, Clone, Serialize)]
pub struct CatalogEntry {
    /// `S<dim>` followed by the rows of the orbit representative.
    pub label: String,
    #[serde(skip)]
    pub group: PcGroup,
    pub order: u128,
    pub subspace_dim: usize,
    pub orbit_rep: Vec<Vec<u8>>,
    pub orbit_size: usize,
    pub abelianization: Vec<u64>,
    pub aut_order: u128,
    pub ipad: Ipad,
    pub transfer_pattern: Vec<(usize, Vec<usize>)>,
    pub gap_alias: Option<String>,
}

impl CatalogEntry {
    pub fn display_name(&self) -> String {
        self.gap_alias.clone().unwrap_or_else(|| self.label.clone())
    }
}

pub fn label_for(rows: &[Vec<u8>]) -> String {
    let body: Vec<String> = rows.iter().map(|r| r.iter().map(|e| e.to_string()).collect()).collect();
    if body.is_empty() {
        "S0".to_string()
    } else {
        format!("S{}-{}", rows.len(), body.join("."))
    }
}

/// Orbits of subspaces of dimension `k` of `gr_3`: representative and size.
pub fn orbits(k: usize, mats: &[Vec<Vec<u8>>]) -> Vec<(Vec<Vec<u8>>, usize)> {
    let mut sizes: BTreeMap<Vec<Vec<u8>>, usize> = BTreeMap::new();
    for s in fp::subspaces(4, k, P) {
        *sizes.entry(orbit_rep(&s, mats)).or_insert(0) += 1;
    }
    sizes.into_iter().collect()
}

#[derive(Debug, Clone)]
pub struct Catalog {
    pub free: FreeD4,
    /// `(GL_2 element, induced gr_3 matrix)`.
    pub action: Vec<(Matrix, Matrix)>,
    /// Ordered by order, then label.
    pub entries: Vec<CatalogEntry>,
}

impl Catalog {
    /// Builds the 19 types and attaches aliases from the default alias table.
    pub fn build() -> Result<Self> {
        let mut cat = Self::build_unaliased()?;
        let table = AliasTable::load_default()?;
        table.apply(&mut cat.entries)?;
        Ok(cat)
    }

    pub fn build_unaliased() -> Result<Self> {
        let free = FreeD4::new()?;
        let action = induced_action(&free);
        let mats: Vec<Vec<Vec<u8>>> = action.iter().map(|(_, m)| m.clone()).collect();
        let mut reps: Vec<(Vec<Vec<u8>>, usize)> = Vec::new();
        for k in [2, 1, 0] {
            reps.extend(orbits(k, &mats));
        }
        let opts = LiftingOptions { order_bound: free.group.ngens() };
        let entries: Result<Vec<CatalogEntry>> = reps
            .par_iter()
            .map(|(rep, size)| {
                let group = free.quotient(rep);
                Ok(CatalogEntry {
                    label: label_for(rep),
                    order: group.order(),
                    subspace_dim: rep.len(),
                    orbit_rep: rep.clone(),
                    orbit_size: *size,
                    abelianization: abelian_invariants(&group),
                    aut_order: automorphism_count(&group, opts)?,
                    ipad: ipad(&group)?,
                    transfer_pattern: transfer_pattern(&group),
                    gap_alias: None,
                    group,
                })
            })
            .collect();
        let mut entries = entries?;
        entries.sort_by(|a, b| (a.order, &a.label).cmp(&(b.order, &b.label)));
        Ok(Catalog { free, action, entries })
    }

    fn matrices(&self) -> Vec<Vec<Vec<u8>>> {
        self.action.iter().map(|(_, m)| m.clone()).collect()
    }

    /// Entry whose orbit contains the subspace spanned by `rows`.
    pub fn entry_for_subspace(&self, rows: &[Vec<u8>]) -> &CatalogEntry {
        let mut r = rows.to_vec();
        fp::rref(&mut r, P);
        let rep = orbit_rep(&r, &self.matrices());
        self.entries.iter().find(|e| e.orbit_rep == rep).expect("every subspace lies in a catalog orbit")
    }

    pub fn classify_record(&self, rec: &MasseyRecord) -> &CatalogEntry {
        self.entry_for_subspace(&rec.relator_vectors())
    }

    /// Catalog entry by label or alias.
    pub fn lookup(&self, name: &str) -> Result<&CatalogEntry> {
        let norm = |s: &str| s.chars().filter(|c| !c.is_whitespace()).collect::<String>();
        let want = norm(name);
        self.entries
            .iter()
            .find(|e| e.label == want || e.gap_alias.as_deref().map(norm) == Some(want.clone()))
            .ok_or_else(|| Error::UnknownLabel {
                label: name.to_string(),
                valid: self.entries.iter().map(|e| e.display_name()).collect::<Vec<_>>().join(", "),
            })
    }

    /// The entry isomorphic to `g`, if any.
    pub fn identify(&self, g: &PcGroup) -> Option<&CatalogEntry> {
        self.entries.iter().find(|e| e.order == g.order() && find_isomorphism(g, &e.group).is_some())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.entries
                .iter()
                .map(|e| {
                    serde_json::json!({
                        "label": e.label,
                        "order": e.order,
                        "abelianization": e.abelianization,
                        "ipad": e.ipad.to_string(),
                        "gap_alias": e.gap_alias,
                        "orbit_rep": e.orbit_rep,
                        "aut_order": e.aut_order.to_string(),
                    })
                })
                .collect(),
        )
    }
}

/// Exponents of the two relators of a two-generated presentation modulo
/// `D_4`, in the order of the CSV columns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MasseyRecord {
    pub discriminant: i64,
    pub e111_1: u8,
    pub e222_1: u8,
    pub e112_1: u8,
    pub e221_1: u8,
    pub e111_2: u8,
    pub e222_2: u8,
    pub e112_2: u8,
    pub e221_2: u8,
}

pub const MASSEY_HEADER: [&str; 9] =
    ["discriminant", "e111_1", "e222_1", "e112_1", "e221_1", "e111_2", "e222_2", "e112_2", "e221_2"];

impl MasseyRecord {
    pub fn new(discriminant: i64, e: [u8; 8]) -> Result<Self> {
        let rec = MasseyRecord {
            discriminant,
            e111_1: e[0],
            e222_1: e[1],
            e112_1: e[2],
            e221_1: e[3],
            e111_2: e[4],
            e222_2: e[5],
            e112_2: e[6],
            e221_2: e[7],
        };
        rec.validate()?;
        Ok(rec)
    }

    pub fn exponents(&self) -> [u8; 8] {
        [
            self.e111_1, self.e222_1, self.e112_1, self.e221_1, self.e111_2, self.e222_2, self.e112_2, self.e221_2,
        ]
    }

    pub fn validate(&self) -> Result<()> {
        let d = self.discriminant;
        if d >= 0 || !matches!(d.rem_euclid(4), 0 | 1) {
            return Err(Error::Input(format!("invalid discriminant {d}")));
        }
        if self.exponents().iter().any(|&e| e > 2) {
            return Err(Error::Input("exponents must lie in {0,1,2}".into()));
        }
        Ok(())
    }

    /// `gr_3` coordinates of
    /// `f = a1^{-3 e111} a2^{-3 e222} [[a1,a2],a1]^{-e112} [[a1,a2],a2]^{e221}`.
    pub fn relator_vectors(&self) -> Vec<Vec<u8>> {
        let e = self.exponents();
        e.chunks(4)
            .map(|c| vec![fp::neg(c[0], P), fp::neg(c[1], P), fp::neg(c[2], P), c[3]])
            .collect()
    }

    /// The relators as elements of `Fbar`, built from words.
    pub fn relator_elements(&self, free: &FreeD4) -> Vec<Element> {
        let g = &free.group;
        let (a1, a2) = (&free.marks[0], &free.marks[1]);
        let c = g.comm(a1, a2);
        let (c1, c2) = (g.comm(&c, a1), g.comm(&c, a2));
        let pw = |x: &Element, e: i64| g.pow(x, e.rem_euclid(9) as u64);
        self.exponents()
            .chunks(4)
            .map(|e| {
                let mut x = pw(a1, -3 * e[0] as i64);
                g.mul_in_place(&mut x, &pw(a2, -3 * e[1] as i64));
                g.mul_in_place(&mut x, &pw(&c1, -(e[2] as i64)));
                g.mul_in_place(&mut x, &pw(&c2, e[3] as i64));
                x
            })
            .collect()
    }
}

/// Reads MasseyRecord CSV with the standard header. Errors carry the
/// 1-based line number.
pub fn read_massey_csv<R: std::io::Read>(r: R) -> Result<Vec<MasseyRecord>> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(r);
    let headers = rdr.headers().map_err(|e| Error::Parse { line: 1, msg: e.to_string() })?.clone();
    if headers.iter().collect::<Vec<_>>() != MASSEY_HEADER {
        return Err(Error::Parse { line: 1, msg: format!("expected header {}", MASSEY_HEADER.join(",")) });
    }
    let mut out = Vec::new();
    for (i, row) in rdr.deserialize::<MasseyRecord>().enumerate() {
        let line = i + 2;
        let rec = row.map_err(|e| Error::Parse { line, msg: e.to_string() })?;
        rec.validate().map_err(|e| Error::Parse { line, msg: e.to_string() })?;
        out.push(rec);
    }
    Ok(out)
}

pub fn write_massey_csv<W: std::io::Write>(w: W, recs: &[MasseyRecord]) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    for r in recs {
        wtr.serialize(r).map_err(|e| Error::Input(e.to_string()))?;
    }
    wtr.flush().map_err(|e| Error::Input(e.to_string()))?;
    Ok(())
}

/// External names for catalog entries, keyed by fingerprint.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AliasRecord {
    pub alias: String,
    pub order: u128,
    pub abelianization: Vec<u64>,
    pub aut_order: u128,
    pub ipad: String,
    /// Present when the other fields do not single out the entry.
    #[serde(default)]
    pub transfer_pattern: Option<Vec<(usize, Vec<usize>)>>,
    #[serde(default)]
    pub note: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AliasTable {
    pub aliases: Vec<AliasRecord>,
}

pub const DATA_ENV: &str = "SCHUR_SIGMA_DATA";

impl AliasTable {
    /// Path given by `SCHUR_SIGMA_DATA`, else the table shipped with the crate.
    pub fn default_path() -> PathBuf {
        std::env::var_os(DATA_ENV)
            .map(PathBuf::from)
            .unwrap_or_else(|| Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join("aliases.json"))
    }

    pub fn load_default() -> Result<Self> {
        Self::load(&Self::default_path())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Input(format!("cannot read alias table {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| Error::Input(format!("alias table {}: {e}", path.display())))
    }

    fn matches(rec: &AliasRecord, e: &CatalogEntry) -> bool {
        rec.order == e.order
            && rec.abelianization == e.abelianization
            && rec.aut_order == e.aut_order
            && rec.ipad == e.ipad.to_string()
            && rec.transfer_pattern.as_ref().is_none_or(|t| *t == e.transfer_pattern)
    }

    /// Assigns aliases. An entry matched by several records, or a record
    /// matching several entries, is a collision and reported as an error.
    pub fn apply(&self, entries: &mut [CatalogEntry]) -> Result<()> {
        for e in entries.iter_mut() {
            let hits: Vec<&AliasRecord> = self.aliases.iter().filter(|r| Self::matches(r, e)).collect();
            match hits.as_slice() {
                [] => e.gap_alias = None,
                [one] => e.gap_alias = Some(one.alias.clone()),
                _ => {
                    return Err(Error::Input(format!(
                        "fingerprint collision for {}: {}",
                        e.label,
                        hits.iter().map(|h| h.alias.as_str()).collect::<Vec<_>>().join(", ")
                    )))
                }
            }
        }
        let mut seen: BTreeMap<&str, &str> = BTreeMap::new();
        for e in entries.iter() {
            if let Some(a) = &e.gap_alias {
                if let Some(prev) = seen.insert(a, &e.label) {
                    return Err(Error::Input(format!("alias {a} matches both {prev} and {}", e.label)));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gl2_has_48_elements() {
        assert_eq!(gl2().len(), 48);
    }

    #[test]
    fn ipad_of_elementary() {
        let i = ipad(&PcGroup::elementary_abelian(3, 2)).unwrap();
        assert_eq!(i.to_string(), "[3,3]; [3]^4");
        assert!(ipad(&PcGroup::elementary_abelian(3, 3)).is_err());
    }

    #[test]
    fn free_d4_basics() {
        let f = FreeD4::new().unwrap();
        assert_eq!(f.group.ngens(), 7);
        for (k, b) in f.basis.iter().enumerate() {
            assert_eq!(f.gr3_coords(b).unwrap(), fp::unit(4, k));
        }
        let id = vec![vec![1, 0], vec![0, 1]];
        assert_eq!(f.induced_matrix(&id), fp::identity(4));
        let minus = vec![vec![2, 0], vec![0, 2]];
        let m = f.induced_matrix(&minus);
        assert!(m.iter().enumerate().all(|(i, r)| r.iter().enumerate().all(|(j, &e)| e
            == if i == j { 2 } else { 0 })));
    }

    #[test]
    fn record_vectors() {
        let r = MasseyRecord::new(-4027, [1, 0, 2, 1, 0, 1, 1, 0]).unwrap();
        assert_eq!(r.relator_vectors(), vec![vec![2, 0, 1, 1], vec![0, 2, 2, 0]]);
        assert!(MasseyRecord::new(-4026, [0; 8]).is_err());
        assert!(MasseyRecord::new(5, [0; 8]).is_err());
    }

    #[test]
    fn csv_round_trip() {
        let recs = vec![MasseyRecord::new(-3299, [0, 1, 2, 0, 1, 1, 0, 2]).unwrap()];
        let mut buf = Vec::new();
        write_massey_csv(&mut buf, &recs).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with(&MASSEY_HEADER.join(",")));
        assert_eq!(read_massey_csv(buf.as_slice()).unwrap(), recs);
        let bad = format!("{}\n-3299,0,1,2,0,1,1,0,3\n", MASSEY_HEADER.join(","));
        assert!(matches!(read_massey_csv(bad.as_bytes()), Err(Error::Parse { line: 2, .. })));
    }
}
