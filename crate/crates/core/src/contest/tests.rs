use super::*;

fn uniform() -> Distribution {
    Distribution::uniform(0.0, 1.0).unwrap()
}

fn mixture() -> Distribution {
    Distribution::mixture(&[(1.0, 2.0, 0.75), (2.0, 3.0, 0.25)]).unwrap()
}

#[test]
fn uniform_optimal_design() {
    let d = uniform();
    for n in [2usize, 3, 5, 10] {
        let c = design_optimal_contest(&d, n).unwrap();
        let nf = n as f64;
        assert!((c.reserve_bid() - 1.0 / (nf + 1.0)).abs() < 1e-9);
        assert!(c.forbidden_intervals().is_empty());
        let mp = expected_max_payment(&d, n, &c).unwrap();
        assert!((mp - nf / (2.0 * (nf + 1.0))).abs() < 1e-8, "n={n}: {mp}");
    }
}

#[test]
fn uniform_no_reserve_objectives() {
    let d = uniform();
    for n in [2usize, 3, 7] {
        let nf = n as f64;
        let c = ContestSpec::no_reserve(n);
        let mp = expected_max_payment(&d, n, &c).unwrap();
        let rev = expected_revenue(&d, n, &c).unwrap();
        assert!((mp - (nf - 1.0) / (2.0 * nf)).abs() < 1e-9);
        assert!((rev - (nf - 1.0) / (nf + 1.0)).abs() < 1e-9);
    }
    let c = ContestSpec::no_reserve(2);
    assert!((expected_max_payment_via_virtual_surplus(&d, 2, &c).unwrap() - 0.25).abs() < 1e-9);
}

#[test]
fn uniform_optimal_virtual_surplus_and_revenue() {
    let d = uniform();
    let c = design_optimal_contest(&d, 2).unwrap();
    assert!((expected_max_payment_via_virtual_surplus(&d, 2, &c).unwrap() - 1.0 / 3.0).abs() < 1e-9);
    // Myerson: revenue is expected revenue virtual surplus, 2∫_r^1 (2v−1)·v dv
    let r = 3f64.powf(-0.5);
    let anti = |v: f64| 2.0 * v.powi(3) / 3.0 - v * v / 2.0;
    let expect = 2.0 * (anti(1.0) - anti(r));
    assert!((expected_revenue(&d, 2, &c).unwrap() - expect).abs() < 1e-9);
}

#[test]
fn exponential_design_is_plain_reserve() {
    let d = Distribution::exponential(1.0).unwrap();
    let c = design_optimal_contest(&d, 2).unwrap();
    assert!((c.reserve_bid() - 0.85).abs() < 0.005, "{}", c.reserve_bid());
    assert!(c.forbidden_intervals().is_empty());
    match &c {
        ContestSpec::SymmetricHighestWins { reserve_value: Some(r), .. } => assert!((r - 1.21).abs() < 0.005),
        other => panic!("{other:?}"),
    }
}

#[test]
fn mixture_design_has_forbidden_intervals() {
    let d = mixture();
    let c = design_optimal_contest(&d, 2).unwrap();
    let f = c.forbidden_intervals();
    assert_eq!(f.len(), 2, "{c:?}");
    assert!((f[0].lo - 1.10).abs() < 0.01, "{f:?}");
    assert!((f[0].hi - 1.199).abs() < 0.005);
    assert!((f[1].lo - 1.199).abs() < 0.005);
    assert!((f[1].hi - 1.31).abs() < 0.01);
    assert!(!f[0].contains(f[0].hi) && f[0].contains(f[0].lo));
    assert!(!f[1].contains(f[1].lo) && f[1].contains(f[1].hi));
    assert_eq!(c.snap(1.25), f[1].snap_to);
    assert_eq!(c.snap(f[0].hi), f[0].hi);

    let mp = expected_max_payment(&d, 2, &c).unwrap();
    let vs = expected_max_payment_via_virtual_surplus(&d, 2, &c).unwrap();
    assert!((mp - vs).abs() < 1e-6 * mp.max(1.0), "{mp} vs {vs}");
    // ironing beats the best plain reserve
    let plain = ContestSpec::highest_wins(&d, 2, c_reserve(&c)).unwrap();
    assert!(mp > expected_max_payment(&d, 2, &plain).unwrap());
}

fn c_reserve(c: &ContestSpec) -> f64 {
    match c {
        ContestSpec::SymmetricHighestWins { reserve_value: Some(r), .. } => *r,
        _ => panic!(),
    }
}

#[test]
fn reserve_above_support_is_degenerate() {
    let d = uniform();
    let c = ContestSpec::SymmetricHighestWins {
        n: 3,
        reserve_bid: 2.0,
        reserve_value: None,
        forbidden_intervals: vec![],
        pools: vec![],
        tie_rule: TieRule::EqualSplit,
    };
    assert_eq!(expected_max_payment(&d, 3, &c).unwrap(), 0.0);
    assert_eq!(expected_revenue(&d, 3, &c).unwrap(), 0.0);
    assert_eq!(ratios(&d, 3, &c), Err(Error::DegenerateContest));
}

#[test]
fn reserve_value_recovered_from_bid() {
    let d = Distribution::power(1.5).unwrap();
    let r = 0.7;
    let bid = r * d.cdf(r);
    assert!((value_for_reserve_bid(&d, 2, bid) - r).abs() < 1e-9);
    let explicit = ContestSpec::highest_wins(&d, 2, r).unwrap();
    let implicit = ContestSpec::SymmetricHighestWins {
        n: 2,
        reserve_bid: bid,
        reserve_value: None,
        forbidden_intervals: vec![],
        pools: vec![],
        tie_rule: TieRule::EqualSplit,
    };
    let a = expected_max_payment(&d, 2, &explicit).unwrap();
    let b = expected_max_payment(&d, 2, &implicit).unwrap();
    assert!((a - b).abs() < 1e-8);
}

#[test]
fn revenue_benchmarks() {
    assert!((optimal_revenue_benchmark(&uniform(), 2).unwrap() - 5.0 / 12.0).abs() < 1e-9);
    let e = Distribution::exponential(1.0).unwrap();
    let expect = 2.0 * ((-1.0f64).exp() - (-2.0f64).exp() / 4.0);
    // the tail beyond quantile 1 − 1e-10 carries about 5e-9
    assert!((optimal_revenue_benchmark(&e, 2).unwrap() - expect).abs() < 1e-8);
    let big = optimal_revenue_benchmark(&uniform(), 200).unwrap();
    assert!(big > 0.98 && big < 1.0);
    assert_eq!(optimal_revenue_benchmark(&mixture(), 2), Err(Error::IrregularForRevenue));
}

#[test]
fn ratio_examples() {
    let d = uniform();
    let rep = ratios(&d, 10, &ContestSpec::no_reserve(10)).unwrap();
    assert!((rep.utilization_ratio - 20.0 / 11.0).abs() < 1e-8);
    assert!(rep.utilization_ratio < 2.0);
    let rep = ratios(&d, 2, &ContestSpec::no_reserve(2)).unwrap();
    assert!((rep.approximation_ratio.unwrap() - 5.0 / 3.0).abs() < 1e-8);
    assert!(rep.approximation_ratio.unwrap() <= 4.0);

    let m = mixture();
    let c = design_optimal_contest(&m, 2).unwrap();
    let rep = ratios(&m, 2, &c).unwrap();
    assert!(rep.opt_revenue.is_none() && rep.approximation_ratio.is_none());
    let rep = ratios_with_benchmark(&m, 2, &c, 2.0).unwrap();
    assert!((rep.approximation_ratio.unwrap() - 2.0 / rep.mp_exact).abs() < 1e-12);
}

#[test]
fn static_comparison() {
    let d = uniform();
    let table = compare_static(&d, 2, &[vec![1.0, 0.0], vec![2.0 / 3.0, 1.0 / 3.0], vec![0.5, 0.5]]).unwrap();
    assert!(table.winner_take_all_dominates);
    let mps: Vec<f64> = table.rows.iter().map(|r| r.mp).collect();
    assert!((mps[0] - 0.25).abs() < 1e-9);
    assert!(mps[0] > mps[1] + 1e-6 && mps[1] > mps[2]);
    assert!(mps[2].abs() < 1e-12);
    // b = v²/6 gives MP = 2∫ v³/6 dv = 1/12
    assert!((mps[1] - 1.0 / 12.0).abs() < 1e-9);

    let top = compare_static(&d, 3, &[vec![2.0 / 3.0, 1.0 / 3.0, 0.0]]).unwrap();
    assert!(top.winner_take_all_mp > top.rows[0].mp + 1e-6);
    let nr = expected_max_payment(&d, 3, &ContestSpec::no_reserve(3)).unwrap();
    assert!((top.winner_take_all_mp - nr).abs() < 1e-8);
}

#[test]
fn prize_parsing() {
    let p = parse_prizes("2/3, 1/3, 0").unwrap();
    assert!((p[0] - 2.0 / 3.0).abs() < 1e-15 && p[2] == 0.0);
    assert!(matches!(parse_prizes("0.5,0.4"), Err(Error::PrizeSum { .. })));
    assert!(parse_prizes("a,b").is_err());
}

#[test]
fn asymmetric_spec_rejected_by_symmetric_evaluators() {
    let (d, c) = example_instance();
    assert_eq!(expected_max_payment(&d, 2, &c), Err(Error::AsymmetricContest));
    assert_eq!(expected_revenue(&d, 2, &c), Err(Error::AsymmetricContest));
    let mp = exact_max_payment(&d, 2, &c).unwrap();
    assert!((mp - 0.397).abs() < 0.002);
    assert!(matches!(
        expected_max_payment(&d, 3, &ContestSpec::no_reserve(2)),
        Err(Error::InvalidParameter(_))
    ));
}

#[test]
fn validation() {
    let bad_bid = ContestSpec::SymmetricHighestWins {
        n: 2,
        reserve_bid: -0.1,
        reserve_value: None,
        forbidden_intervals: vec![],
        pools: vec![],
        tie_rule: TieRule::EqualSplit,
    };
    assert!(bad_bid.validate().is_err());
    let interval = ForbiddenInterval { lo: 0.3, hi: 0.2, lo_open: false, hi_open: true, snap_to: 0.3 };
    let bad_interval = ContestSpec::SymmetricHighestWins {
        n: 2,
        reserve_bid: 0.1,
        reserve_value: None,
        forbidden_intervals: vec![interval],
        pools: vec![ValuePool { lo: 0.5, hi: 0.6 }],
        tie_rule: TieRule::EqualSplit,
    };
    assert!(bad_interval.validate().is_err());
    let orphan = ContestSpec::SymmetricHighestWins {
        n: 2,
        reserve_bid: 0.1,
        reserve_value: None,
        forbidden_intervals: vec![ForbiddenInterval { lo: 0.2, hi: 0.3, ..interval }],
        pools: vec![],
        tie_rule: TieRule::EqualSplit,
    };
    assert!(orphan.validate().is_err());
    assert!(ContestSpec::StaticPrizes { n: 2, prizes: vec![0.6, 0.6] }.validate().is_err());
    assert!(ContestSpec::AsymmetricTwoAgent { reserve_value: 0.8, favored_threshold: 0.7 }.validate().is_err());
}

#[test]
fn json_round_trip() {
    let c = design_optimal_contest(&mixture(), 2).unwrap();
    let s = serde_json::to_string(&c).unwrap();
    assert!(s.contains("\"type\":\"symmetric_highest_wins\""));
    let back: ContestSpec = serde_json::from_str(&s).unwrap();
    assert_eq!(back, c);
    let minimal: ContestSpec = serde_json::from_str(r#"{"type":"symmetric_highest_wins","n":5,"reserve_bid":0.1}"#).unwrap();
    assert_eq!(minimal.n(), 5);
    let st: ContestSpec = serde_json::from_str(r#"{"type":"static_prizes","n":3,"prizes":[0.7,0.3]}"#).unwrap();
    assert!(st.validate().is_ok());
}
