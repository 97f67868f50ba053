//! Catalog families checked end to end through the measurement modules.

use chorefair::catalog::{default_grid, make_family, FamilyKind, FamilyParams};
use chorefair::cost::{check_monotone, check_submodular, SUBMODULAR_CHECK_MAX};
use chorefair::verify::{check_family, check_price_family, family_label};
use chorefair::{q, Criterion, ExtendedRational, FamilyId, Instance, Rational, Setting};

fn eps() -> Rational {
    q(1, 1000)
}

fn failures(rows: Vec<chorefair::verify::PropositionReport>) -> Vec<String> {
    rows.into_iter().filter(|r| !r.passed()).map(|r| r.to_string()).collect()
}

#[test]
fn every_family_has_a_valid_grid() {
    for &id in FamilyId::ALL {
        assert!(!default_grid(id, 5, eps()).is_empty(), "{id} has no valid parameters up to n = 5");
    }
}

#[test]
fn connection_families_match_their_closed_forms() {
    let mut bad = Vec::new();
    for &id in FamilyId::ALL.iter().filter(|f| f.kind() == FamilyKind::Connection) {
        for params in default_grid(id, 5, eps()) {
            let bundle = make_family(id, &params).unwrap();
            bad.extend(failures(check_family(&bundle)));
        }
    }
    assert!(bad.is_empty(), "{}", bad.join("\n"));
}

#[test]
fn price_families_match_brute_force() {
    let mut bad = Vec::new();
    for &id in FamilyId::ALL.iter().filter(|f| f.kind() == FamilyKind::Price) {
        for params in default_grid(id, 4, eps()) {
            let bundle = make_family(id, &params).unwrap();
            bad.extend(failures(check_family(&bundle)));
            bad.extend(failures(check_price_family(&bundle)));
        }
    }
    assert!(bad.is_empty(), "{}", bad.join("\n"));
}

#[test]
fn price_families_follow_epsilon() {
    for den in [100, 250, 1000, 4000] {
        let e = q(1, den);
        let b = make_family(FamilyId::PofEf1N2, &FamilyParams::default().with_epsilon(e)).unwrap();
        let want = (q(5, 6) + e) / (q(2, 3) + q(2, 1) * e);
        assert_eq!(b.expected("price"), Some(want.into()));
        let b = make_family(FamilyId::PofPmmsN2, &FamilyParams::default().with_epsilon(e)).unwrap();
        assert_eq!(b.expected("price"), Some((q(1, 2) + q(2, 1) * e).recip().into()));
        assert!(failures(check_price_family(&b)).is_empty());
    }
}

#[test]
fn settings_match_cost_classes() {
    for &id in FamilyId::ALL {
        for params in default_grid(id, 5, eps()) {
            let b = make_family(id, &params).unwrap();
            let inst = &b.instance;
            match id.setting() {
                Setting::Additive => assert!(inst.all_additive(), "{}", family_label(&b)),
                Setting::Submodular => {
                    if inst.m() > SUBMODULAR_CHECK_MAX {
                        continue;
                    }
                    for (i, f) in inst.costs().iter().enumerate() {
                        assert!(check_monotone(f, inst.m()).unwrap(), "{} agent {i}", family_label(&b));
                        assert!(check_submodular(f, inst.m()).unwrap(), "{} agent {i}", family_label(&b));
                    }
                }
            }
        }
    }
}

#[test]
fn submodular_checks_reach_the_coverage_family() {
    // n = 4 gives 16 chores, the largest ground set the check accepts.
    let b = make_family(FamilyId::SubEfCoverage, &FamilyParams::default().with_n(4)).unwrap();
    assert_eq!(b.instance.m(), 16);
    assert!(b.instance.costs().iter().all(|f| check_submodular(f, 16).unwrap()));
}

#[test]
fn mms_not_families_track_p() {
    for p in [1u32, 2, 3, 10, 50] {
        let params = FamilyParams::default().with_n(4).with_p(p);
        let b = make_family(FamilyId::MmsNotEf1, &params).unwrap();
        let m = b.measure().unwrap();
        let want = Rational::from(p).max(Rational::ONE);
        assert_eq!(m.target(Criterion::Ef1), Some(want.into()), "p = {p}");
        assert_eq!(m.source_alpha, ExtendedRational::ONE);
    }
}

#[test]
fn bundles_serialize_with_instance_and_expectations() {
    for &id in FamilyId::ALL {
        let b = make_family(id, &FamilyParams::default()).unwrap();
        let json = serde_json::to_value(&b).unwrap();
        assert_eq!(json["family_id"], id.name());
        let inst: Instance = serde_json::from_value(json["instance"].clone()).unwrap();
        assert_eq!(inst, b.instance);
        let expected = json["expected"].as_object().unwrap();
        assert!(expected.contains_key("source_alpha"), "{id}");
        for v in expected.values() {
            v.as_str().unwrap().parse::<ExtendedRational>().unwrap();
        }
    }
}

#[test]
fn invalid_parameters_are_refused() {
    let cases = [
        (FamilyId::PmmsMmsLb, FamilyParams::default().with_n(4)),
        (FamilyId::SubEfCoverage, FamilyParams::default().with_n(3)),
        (FamilyId::PmmsNotEf1, FamilyParams::default().with_alpha(q(2, 1))),
        (FamilyId::Ef1MmsTight, FamilyParams::default().with_alpha(q(1, 2))),
        (FamilyId::PofEf1N2, FamilyParams::default().with_epsilon(q(1, 10))),
        (FamilyId::PofN3Unbounded, FamilyParams::default().with_m(4)),
        (FamilyId::MmsNotPmms, FamilyParams::default().with_n(2)),
    ];
    for (id, params) in cases {
        let err = make_family(id, &params).unwrap_err();
        assert!(err.is_input_error(), "{id}: {err}");
    }
}
