//! Expected and observed frequencies of the catalog types.
//!
//! Finite products `C_k` are exact rationals. The infinite product and
//! everything derived from it are evaluated in a float type `T`.

use crate::classify::{Catalog, CatalogEntry};
use crate::error::{Error, Result};
use crate::schur::{rel_rank, SubgroupRecipe};
use num::{BigInt, BigRational, One, ToPrimitive};
use num_traits::{Float, FromPrimitive};
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt::Write as _;

/// Index of `Aut_sigma(H)` in `Aut(H)` for every catalog entry.
pub const SIGMA_INDEX: u128 = 9;

/// Truncation threshold for the infinite product.
const TAIL_CUTOFF: f64 = 1e-16;

/// `prod_{i=1}^k (1 - p^{-i})`, exactly.
pub fn c_k(p: u32, k: usize) -> BigRational {
    let mut acc = BigRational::one();
    let mut pow = BigInt::one();
    for _ in 0..k {
        pow *= p;
        acc *= BigRational::new(&pow - 1, pow.clone());
    }
    acc
}

/// `C_infinity` with the truncation it was evaluated at.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CInfinity<T> {
    pub value: T,
    /// Number of factors multiplied in.
    pub factors: usize,
    /// `p^{-i}` for the first factor left out.
    pub omitted_term: T,
}

/// Multiplies factors until `p^{-i}` drops below `1e-16`. The omitted tail
/// changes the value by a relative amount below twice that term.
pub fn c_infinity<T: Float + FromPrimitive>(p: u32) -> CInfinity<T> {
    c_infinity_to(p, T::from_f64(TAIL_CUTOFF).unwrap())
}

pub fn c_infinity_to<T: Float + FromPrimitive>(p: u32, cutoff: T) -> CInfinity<T> {
    let inv = T::one() / T::from_u32(p).unwrap();
    let mut term = inv;
    let mut value = T::one();
    let mut factors = 0;
    while term >= cutoff {
        value = value * (T::one() - term);
        term = term * inv;
        factors += 1;
    }
    CInfinity { value, factors, omitted_term: term }
}

fn to_float<T: FromPrimitive>(q: &BigRational) -> T {
    T::from_f64(q.to_f64().expect("finite rational")).unwrap()
}

/// Per-type data of the frequency model.
#[derive(Debug, Clone, Serialize)]
pub struct ModelEntry<T> {
    pub label: String,
    pub name: String,
    pub abelianization: Vec<u64>,
    /// Relation rank over `F_2 / D_4(F_2)`.
    pub m: usize,
    pub aut_order: u128,
    pub aut_sigma_order: u128,
    /// Unconditional probability `C_inf / C_{2-m} / |Aut_sigma|`.
    pub mu: T,
    /// `mu / mu_inf(Sch_2)` as an exact rational.
    #[serde(serialize_with = "ser_rational")]
    pub mu_cond_exact: BigRational,
    pub mu_cond: T,
}

fn ser_rational<S: serde::Serializer>(q: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&q.to_string())
}

#[derive(Debug, Clone, Serialize)]
pub struct ExpectedModel<T> {
    pub p: u32,
    /// `C_0, C_1, C_2`.
    #[serde(serialize_with = "ser_rationals")]
    pub c_values: Vec<BigRational>,
    pub c_infinity: CInfinity<T>,
    /// Probability that a tower group has two generators.
    pub mu_sch2: T,
    pub entries: Vec<ModelEntry<T>>,
}

fn ser_rationals<S: serde::Serializer>(v: &[BigRational], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|q| q.to_string()))
}

/// `C_inf / C_2^2 * p^{-4}`.
pub fn mu_sch2<T: Float + FromPrimitive>(p: u32) -> T {
    let c2 = c_k(p, 2);
    let denom = &c2 * &c2 * BigRational::from_integer(BigInt::from(p).pow(4));
    c_infinity::<T>(p).value / to_float::<T>(&denom)
}

/// `C_2^2 / C_{2-m} * p^6 / |Aut(H)|`.
pub fn mu_cond_exact(p: u32, m: usize, aut_order: u128) -> Result<BigRational> {
    if m > 2 {
        return Err(Error::Precondition(format!("relation rank {m} exceeds 2")));
    }
    let c2 = c_k(p, 2);
    let scale = BigRational::new(BigInt::from(p).pow(6), BigInt::from(aut_order));
    Ok(&c2 * &c2 / c_k(p, 2 - m) * scale)
}

impl<T: Float + FromPrimitive> ExpectedModel<T> {
    /// Model for explicit `(entry, m)` pairs.
    pub fn from_parts(p: u32, parts: &[(&CatalogEntry, usize)]) -> Result<Self> {
        let c_values: Vec<BigRational> = (0..=2).map(|k| c_k(p, k)).collect();
        let cinf = c_infinity::<T>(p);
        let entries = parts
            .iter()
            .map(|&(e, m)| {
                let exact = mu_cond_exact(p, m, e.aut_order)?;
                let aut_sigma_order = e.aut_order / SIGMA_INDEX;
                let mu = cinf.value / to_float::<T>(&c_values[2 - m]) / T::from_u128(aut_sigma_order).unwrap();
                Ok(ModelEntry {
                    label: e.label.clone(),
                    name: e.display_name(),
                    abelianization: e.abelianization.clone(),
                    m,
                    aut_order: e.aut_order,
                    aut_sigma_order,
                    mu,
                    mu_cond: to_float(&exact),
                    mu_cond_exact: exact,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ExpectedModel { p, c_values, c_infinity: cinf, mu_sch2: mu_sch2(p), entries })
    }

    pub fn entry(&self, label: &str) -> Option<&ModelEntry<T>> {
        self.entries.iter().find(|e| e.label == label)
    }

    pub fn total_mu_cond(&self) -> BigRational {
        self.entries.iter().map(|e| e.mu_cond_exact.clone()).sum()
    }

    /// Whether the conditional frequencies sum to exactly 1.
    pub fn is_normalized(&self) -> bool {
        self.total_mu_cond().is_one()
    }
}

/// Relation ranks from the catalog groups, then the model.
pub fn expected_model<T: Float + FromPrimitive>(catalog: &Catalog) -> Result<ExpectedModel<T>> {
    let d4 = SubgroupRecipe::d(4);
    let ms = catalog.entries.iter().map(|e| rel_rank(&e.group, &d4)).collect::<Result<Vec<_>>>()?;
    let parts: Vec<(&CatalogEntry, usize)> = catalog.entries.iter().zip(ms).collect();
    ExpectedModel::from_parts(crate::classify::P, &parts)
}

#[derive(Debug, Clone, Serialize)]
pub struct ReportRow {
    pub label: String,
    pub name: String,
    pub abelianization: Vec<u64>,
    pub mu_cond: f64,
    pub count: u64,
    pub mu_obs: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct FrequencyReport {
    pub total: u64,
    /// Model order; types that never occur have count zero.
    pub rows: Vec<ReportRow>,
}

/// Counts classified labels and compares them with the model. Labels may be
/// catalog labels or aliases.
pub fn frequency_report<I, S>(classified: I, catalog: &Catalog, model: &ExpectedModel<f64>) -> Result<FrequencyReport>
where
    I: IntoIterator<Item = (i64, S)>,
    S: AsRef<str>,
{
    let mut counts: BTreeMap<String, u64> = BTreeMap::new();
    for (_, name) in classified {
        let e = catalog.lookup(name.as_ref())?;
        *counts.entry(e.label.clone()).or_insert(0) += 1;
    }
    report_from_counts(&counts, model)
}

/// Report from per-label counts keyed by catalog label.
pub fn report_from_counts(counts: &BTreeMap<String, u64>, model: &ExpectedModel<f64>) -> Result<FrequencyReport> {
    let total: u64 = counts.values().sum();
    if total == 0 {
        return Err(Error::Input("N = 0: no classified records".into()));
    }
    if let Some(l) = counts.keys().find(|l| model.entry(l).is_none()) {
        return Err(Error::Input(format!("label {l} is not in the model")));
    }
    let rows = model
        .entries
        .iter()
        .map(|e| {
            let count = counts.get(&e.label).copied().unwrap_or(0);
            let mu_obs = count as f64 / total as f64;
            ReportRow {
                label: e.label.clone(),
                name: e.name.clone(),
                abelianization: e.abelianization.clone(),
                mu_cond: e.mu_cond,
                count,
                mu_obs,
                ratio: mu_obs / e.mu_cond,
            }
        })
        .collect();
    Ok(FrequencyReport { total, rows })
}

fn bracket(v: &[u64]) -> String {
    let s: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("[{}]", s.join(","))
}

const COLUMNS: [&str; 6] = ["H", "H_ab", "mu_cond", "n(H)", "mu_obs", "ratio"];

impl FrequencyReport {
    fn cells(&self) -> Vec<[String; 6]> {
        self.rows
            .iter()
            .map(|r| {
                [
                    r.name.clone(),
                    bracket(&r.abelianization),
                    format!("{:.5}", r.mu_cond),
                    r.count.to_string(),
                    format!("{:.5}", r.mu_obs),
                    format!("{:.5}", r.ratio),
                ]
            })
            .collect()
    }

    pub fn to_tsv(&self) -> String {
        let mut out = COLUMNS.join("\t");
        out.push('\n');
        for row in self.cells() {
            out.push_str(&row.join("\t"));
            out.push('\n');
        }
        let _ = writeln!(out, "N\t\t\t{}\t\t", self.total);
        out
    }

    pub fn to_markdown(&self) -> String {
        let mut out = format!("| {} |\n", COLUMNS.join(" | "));
        out.push_str("|---|---|---:|---:|---:|---:|\n");
        for row in self.cells() {
            let _ = writeln!(out, "| {} |", row.join(" | "));
        }
        let _ = writeln!(out, "\nN = {}", self.total);
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serializes")
    }
}

/// A reference value set against the corresponding model value.
#[derive(Debug, Clone, Serialize)]
pub struct Deviation {
    pub label: String,
    pub model: f64,
    pub reference: f64,
    pub abs: f64,
    /// `abs` exceeds the tolerance it was checked against.
    pub flagged: bool,
}

/// Pairs each `(label, reference)` with the model value of that label.
fn deviations<'a>(
    values: impl Iterator<Item = (&'a str, f64)>,
    reference: &BTreeMap<String, f64>,
    tol: f64,
) -> Result<Vec<Deviation>> {
    let values: BTreeMap<&str, f64> = values.collect();
    reference
        .iter()
        .map(|(label, &r)| {
            let m = *values.get(label.as_str()).ok_or_else(|| Error::Input(format!("label {label} is not in the model")))?;
            let abs = (m - r).abs();
            Ok(Deviation { label: label.clone(), model: m, reference: r, abs, flagged: abs > tol })
        })
        .collect()
}

/// Least-squares factor `s` with `reference ~ s * model`; a value away
/// from 1 beyond the printed precision marks a systematic deviation.
pub fn scale_fit(devs: &[Deviation]) -> f64 {
    let num: f64 = devs.iter().map(|d| d.model * d.reference).sum();
    let den: f64 = devs.iter().map(|d| d.model * d.model).sum();
    num / den
}

impl ExpectedModel<f64> {
    /// Reference conditional frequencies keyed by catalog label.
    pub fn compare_mu_cond(&self, reference: &BTreeMap<String, f64>, tol: f64) -> Result<Vec<Deviation>> {
        deviations(self.entries.iter().map(|e| (e.label.as_str(), e.mu_cond)), reference, tol)
    }
}

impl FrequencyReport {
    pub fn compare_mu_obs(&self, reference: &BTreeMap<String, f64>, tol: f64) -> Result<Vec<Deviation>> {
        deviations(self.rows.iter().map(|r| (r.label.as_str(), r.mu_obs)), reference, tol)
    }

    pub fn compare_ratio(&self, reference: &BTreeMap<String, f64>, tol: f64) -> Result<Vec<Deviation>> {
        deviations(self.rows.iter().map(|r| (r.label.as_str(), r.ratio)), reference, tol)
    }
}

/// Reads `discriminant,label` rows.
pub fn read_labels_csv<R: std::io::Read>(r: R) -> Result<Vec<(i64, String)>> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(r);
    let headers = rdr.headers().map_err(|e| Error::Parse { line: 1, msg: e.to_string() })?.clone();
    if headers.iter().collect::<Vec<_>>() != ["discriminant", "label"] {
        return Err(Error::Parse { line: 1, msg: "expected header discriminant,label".into() });
    }
    let mut out = Vec::new();
    for (i, row) in rdr.records().enumerate() {
        let line = i + 2;
        let row = row.map_err(|e| Error::Parse { line, msg: e.to_string() })?;
        if row.len() != 2 {
            return Err(Error::Parse { line, msg: format!("expected 2 fields, got {}", row.len()) });
        }
        let d = row[0].parse::<i64>().map_err(|e| Error::Parse { line, msg: format!("discriminant: {e}") })?;
        out.push((d, row[1].to_string()));
    }
    Ok(out)
}

pub fn write_labels_csv<W: std::io::Write>(w: W, rows: &[(i64, String)]) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    let io = |e: csv::Error| Error::Input(e.to_string());
    wtr.write_record(["discriminant", "label"]).map_err(io)?;
    for (d, l) in rows {
        wtr.write_record([d.to_string(), l.clone()]).map_err(io)?;
    }
    wtr.flush().map_err(|e| Error::Input(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::Zero;

    #[test]
    fn finite_products() {
        assert_eq!(c_k(3, 0), BigRational::one());
        assert_eq!(c_k(3, 1), BigRational::new(2.into(), 3.into()));
        assert_eq!(c_k(3, 2), BigRational::new(16.into(), 27.into()));
        for k in 0..8 {
            assert!(c_k(3, k + 1) < c_k(3, k));
        }
    }

    #[test]
    fn infinite_product_converges() {
        let fine = c_infinity::<f64>(3);
        let coarse = c_infinity_to::<f64>(3, 1e-8);
        assert!(fine.omitted_term < 1e-16);
        assert!((fine.value - coarse.value).abs() < 3e-8);
        assert!((fine.value - 0.56012).abs() < 1e-5);
        // Truncating a product of factors below one only overestimates.
        assert!(fine.value <= coarse.value);
        let single = c_infinity::<f32>(3);
        assert!((single.value as f64 - fine.value).abs() < 1e-6);
    }

    #[test]
    fn sch2_mass() {
        let mu: f64 = mu_sch2(3);
        assert!((mu - 0.01969).abs() < 1e-4);
    }

    #[test]
    fn cond_formula_strata() {
        // The closed forms 256 / |Aut|, 384 / |Aut|, 432 / |Aut|.
        for (m, num) in [(2, 256), (1, 384), (0, 432)] {
            let q = mu_cond_exact(3, m, 1458).unwrap();
            assert_eq!(q, BigRational::new(num.into(), 1458.into()));
        }
        assert!(mu_cond_exact(3, 3, 1).is_err());
    }

    #[test]
    fn labels_csv_round_trip() {
        let rows = vec![(-4027, "S0".to_string()), (-3299, "[243,5]".to_string())];
        let mut buf = Vec::new();
        write_labels_csv(&mut buf, &rows).unwrap();
        assert_eq!(read_labels_csv(&buf[..]).unwrap(), rows);
        let err = read_labels_csv("discriminant,label\n-3,x\nabc,y\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }));
    }

    #[test]
    fn empty_counts_rejected() {
        let model = ExpectedModel::<f64> {
            p: 3,
            c_values: vec![],
            c_infinity: c_infinity(3),
            mu_sch2: mu_sch2(3),
            entries: vec![],
        };
        let err = report_from_counts(&BTreeMap::new(), &model).unwrap_err();
        assert!(err.to_string().contains("N = 0"));
        assert!(model.total_mu_cond().is_zero());
    }

    #[test]
    fn deviations_flag_and_fit() {
        let values = [("a", 1.0), ("b", 2.0)];
        let reference: BTreeMap<String, f64> = [("a".to_string(), 1.1), ("b".to_string(), 2.2)].into();
        let devs = deviations(values.iter().copied(), &reference, 0.15).unwrap();
        assert_eq!(devs.iter().filter(|d| d.flagged).count(), 1);
        assert!((scale_fit(&devs) - 1.1).abs() < 1e-12);
        let unknown: BTreeMap<String, f64> = [("c".to_string(), 0.0)].into();
        assert!(deviations(values.iter().copied(), &unknown, 0.1).is_err());
    }
}
