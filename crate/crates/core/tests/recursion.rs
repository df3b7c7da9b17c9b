use schur_sigma::classify::Catalog;
use schur_sigma::schur::{self, RecursionReport, SubgroupRecipe, Verdict, DEFAULT_MAX_CLASS};

fn run(cat: &Catalog, alias: &str, e: SubgroupRecipe) -> RecursionReport {
    let entry = cat.lookup(alias).unwrap();
    schur::powerfulness_recursion(alias, &entry.group, &e, DEFAULT_MAX_CLASS).unwrap()
}

/// `E(K)` is powerful exactly when `E_1` and `E_2` agree, checked on `K`
/// and on `K / E_2(K)`.
fn assert_criterion(report: &RecursionReport, e: &SubgroupRecipe) {
    for k in &report.small_groups {
        let direct = schur::is_powerful_subgroup(k, e).unwrap();
        let q = k.quotient(&e.e2().eval(k).unwrap()).unwrap().0;
        assert_eq!(schur::powerful_via_criterion(e, k).unwrap(), direct);
        assert_eq!(schur::powerful_via_criterion(e, &q).unwrap(), direct);
    }
}

#[test]
fn d2_never_powerful_for_the_ninth_type() {
    let cat = Catalog::build().unwrap();
    let r = run(&cat, "[243,9]", SubgroupRecipe::d(2));
    assert_eq!(r.verdict, Verdict::NeverPowerful);
    assert_criterion(&r, &SubgroupRecipe::d(2));
}

#[test]
fn d3_mixed_for_the_third_type() {
    let cat = Catalog::build().unwrap();
    let r = run(&cat, "[243,3]", SubgroupRecipe::d(3));
    assert_eq!(r.verdict, Verdict::Mixed);
    assert!(r.max_rank.is_none());
    assert_criterion(&r, &SubgroupRecipe::d(3));
}

#[test]
fn d3_mixed_for_the_ninth_type() {
    let cat = Catalog::build().unwrap();
    let r = run(&cat, "[243,9]", SubgroupRecipe::d(3));
    assert_eq!(r.verdict, Verdict::Mixed);
    assert_criterion(&r, &SubgroupRecipe::d(3));
}

#[test]
fn d3_verdicts_for_small_types() {
    let cat = Catalog::build().unwrap();
    for alias in ["[243,4]", "[243,17]"] {
        let r = run(&cat, alias, SubgroupRecipe::d(3));
        assert_eq!(r.verdict, Verdict::AllPowerful, "{alias}");
        assert!(r.max_rank.unwrap() <= 3);
    }
}

#[test]
fn class_bound_makes_branches_inconclusive() {
    let cat = Catalog::build().unwrap();
    let entry = cat.lookup("[243,3]").unwrap();
    let r = schur::powerfulness_recursion("[243,3]", &entry.group, &SubgroupRecipe::d(2), 3).unwrap();
    assert_eq!(r.verdict, Verdict::Inconclusive);
}

#[test]
fn recursion_rejects_wrong_start() {
    let cat = Catalog::build().unwrap();
    let entry = cat.lookup("[2187,33]").unwrap();
    assert!(schur::powerfulness_recursion("x", &entry.group, &SubgroupRecipe::d(2), DEFAULT_MAX_CLASS).is_err());
}
