use posetcode::codes::{
    bottleneck_grid, build_code, compare_metrics, constrained_basis, hyper_matrix, nrt_grid,
    run_rs_sweep, Basis, Metric, RsCodeSpec, RsSweepPoint, SweepStatus,
};
use posetcode::gf::{Field, FieldElement};
use posetcode::poly::Polynomial;
use posetcode::poset::MatrixWord;
use posetcode::{Error, DEFAULT_BUDGET};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn elems(field: &Field, codes: &[u64]) -> Vec<FieldElement> {
    codes.iter().map(|&c| field.elem(c).unwrap()).collect()
}

fn all_messages(field: &Field, k: usize) -> Vec<Vec<FieldElement>> {
    let q = field.order();
    let total = q.pow(k as u32);
    (0..total)
        .map(|mut idx| {
            (0..k)
                .map(|_| {
                    let c = idx % q;
                    idx /= q;
                    field.elem(c).unwrap()
                })
                .collect()
        })
        .collect()
}

#[test]
fn constrained_space_dimensions() {
    let f5 = Field::new(5, 1).unwrap();
    let pts = elems(&f5, &[1, 3, 4]);
    let basis = constrained_basis(&f5, &pts, 4, 0).unwrap();
    assert_eq!(basis.len(), 2);
    for b in &basis {
        let v0 = b.eval(&pts[0]).unwrap();
        for p in &pts[1..] {
            assert_eq!(b.eval(p).unwrap(), v0);
        }
    }
    // the two basis polynomials are not proportional
    assert!(f5
        .elems()
        .all(|c| basis[1].checked_sub(&basis[0].scale(&c).unwrap()).unwrap() != Polynomial::zero(&f5)));

    let f7 = Field::new(7, 1).unwrap();
    let pts7 = elems(&f7, &[1, 2, 3, 4]);
    let basis7 = constrained_basis(&f7, &pts7, 6, 1).unwrap();
    assert_eq!(basis7.len(), 3);
    for b in &basis7 {
        let d1 = b.hyperderivative(1);
        let v0 = d1.eval(&pts7[0]).unwrap();
        for p in &pts7[1..] {
            assert_eq!(d1.eval(p).unwrap(), v0);
        }
    }

    // derivative order at or above t leaves the whole space: the shared value
    // is forced to zero and every polynomial of degree < t qualifies
    let vac = constrained_basis(&f5, &pts, 4, 5).unwrap();
    assert_eq!(vac.len(), 4);
    for (i, b) in vac.iter().enumerate() {
        assert_eq!(*b, Polynomial::monomial(&f5.one(), i));
    }

    assert!(matches!(
        constrained_basis(&f5, &elems(&f5, &[1, 1]), 4, 0),
        Err(Error::DuplicatePoints)
    ));
}

#[test]
fn spec_validation() {
    let f5 = Field::new(5, 1).unwrap();
    assert!(matches!(
        RsCodeSpec::from_point_codes(&f5, &[1, 3, 1], 2, 4, None),
        Err(Error::DuplicatePoints)
    ));
    assert!(matches!(
        RsCodeSpec::from_point_codes(&f5, &[1, 3], 2, 0, None),
        Err(Error::ParameterOutOfRange(_))
    ));
    assert!(matches!(
        RsCodeSpec::from_point_codes(&f5, &[1, 3], 2, 5, None),
        Err(Error::ParameterOutOfRange(_))
    ));
    assert!(matches!(
        RsCodeSpec::from_point_codes(&f5, &[1, 3], 2, 4, Some(3)),
        Err(Error::ParameterOutOfRange(_))
    ));
    assert!(matches!(
        RsCodeSpec::from_point_codes(&f5, &[1], 2, 2, Some(1)),
        Err(Error::ParameterOutOfRange(_))
    ));
    // t below r(b_row - 1) + 1 leaves no room for the constant row
    assert!(matches!(
        RsCodeSpec::from_point_codes(&f5, &[1, 3], 3, 2, Some(2)),
        Err(Error::ParameterOutOfRange(_))
    ));
    assert!(matches!(
        RsCodeSpec::from_point_codes(&f5, &[1, 5], 2, 3, None),
        Err(Error::ParameterOutOfRange(_))
    ));

    let spec = RsCodeSpec::from_point_codes(&f5, &[1, 3, 4], 2, 4, Some(1)).unwrap();
    assert_eq!(spec.r(), 3);
    assert_eq!(spec.metric().length(), 4);
    assert_eq!(
        RsCodeSpec::from_point_codes(&f5, &[1, 3, 4], 2, 4, None).unwrap().metric().length(),
        6
    );
}

#[test]
fn encoding_matches_hyperderivative_tables() {
    let f5 = Field::new(5, 1).unwrap();
    let pts = elems(&f5, &[1, 3, 4]);
    let spec = RsCodeSpec::new(&f5, &pts, 2, 4, Some(1)).unwrap();
    let code = build_code(&spec).unwrap();
    assert_eq!(code.dim(), 2);
    assert_eq!(code.length(), 4);

    for (f_codes, expect) in [
        (vec![0, 1, 3, 4], [3, 3, 3, 4, 2, 2]),
        (vec![1, 3, 4, 2], [0, 0, 0, 2, 1, 1]),
    ] {
        let f = Polynomial::from_codes(&f5, &f_codes).unwrap();
        let word = hyper_matrix(&f, &pts, 2).unwrap();
        assert_eq!(word.entry_codes(), expect);
        // some message encodes to exactly this table
        let hits = all_messages(&f5, 2)
            .iter()
            .filter(|m| code.encode(m).unwrap().entry_codes() == expect)
            .count();
        assert_eq!(hits, 1);
    }
    assert_eq!(
        hyper_matrix(
            &Polynomial::from_codes(&f5, &[0, 1, 3, 4]).unwrap(),
            &pts,
            2
        )
        .unwrap()
        .to_string(),
        "[[3,3,3],[4,2,2]]"
    );

    let zero = code.encode(&elems(&f5, &[0, 0])).unwrap();
    assert!(zero.is_zero());
    assert_eq!(code.metric().weight(&zero).unwrap(), 0);

    assert!(matches!(
        code.encode(&elems(&f5, &[1])),
        Err(Error::LengthMismatch { want: 2, got: 1 })
    ));
}

#[test]
fn weight_enumerator_and_distance() {
    let f5 = Field::new(5, 1).unwrap();
    let pts = elems(&f5, &[1, 3, 4]);
    let code = build_code(&RsCodeSpec::new(&f5, &pts, 2, 4, Some(1)).unwrap()).unwrap();
    let we = code.weight_enumerator(DEFAULT_BUDGET).unwrap();
    assert_eq!(we.counts(), [1, 0, 0, 4, 20]);
    assert_eq!(we.poly_string(), "1 + 4x^3 + 20x^4");
    assert_eq!(we.total(), 25);
    assert_eq!(code.min_distance(DEFAULT_BUDGET).unwrap(), 3);
    let report = code.singleton_report(3);
    assert_eq!((report.n, report.k, report.d, report.slack), (4, 2, 3, 0));
    assert!(report.mds);

    // the same points without the constraint: the full hyperderivative table
    let nrt = build_code(&RsCodeSpec::new(&f5, &pts, 2, 4, None).unwrap()).unwrap();
    assert_eq!(nrt.dim(), 4);
    assert_eq!(nrt.length(), 6);
    assert_eq!(nrt.min_distance(DEFAULT_BUDGET).unwrap(), 3);
    assert!(nrt.singleton_report(3).mds);

    assert!(matches!(
        nrt.weight_enumerator(10),
        Err(Error::BudgetExceeded { needed: 625, budget: 10 })
    ));

    // t = rs forces distance 1 in both metrics
    let f3 = Field::new(3, 1).unwrap();
    let p01 = elems(&f3, &[0, 1]);
    let full_nrt = build_code(&RsCodeSpec::new(&f3, &p01, 2, 4, None).unwrap()).unwrap();
    assert_eq!(full_nrt.min_distance(DEFAULT_BUDGET).unwrap(), 1);
    let full_b = build_code(&RsCodeSpec::new(&f3, &p01, 2, 4, Some(1)).unwrap()).unwrap();
    assert_eq!(full_b.dim(), 3);
    assert_eq!(full_b.min_distance(DEFAULT_BUDGET).unwrap(), 1);
}

#[test]
fn enumerator_agrees_with_generic_poset_weights() {
    let f3 = Field::new(3, 1).unwrap();
    let p01 = elems(&f3, &[0, 1]);

    let bott = build_code(&RsCodeSpec::new(&f3, &p01, 2, 3, Some(1)).unwrap()).unwrap();
    let poset = bott.metric().poset();
    let mut tally = vec![0u64; bott.length() + 1];
    for m in all_messages(&f3, bott.dim()) {
        let word = bott.encode(&m).unwrap();
        let flat = word.flatten().unwrap();
        tally[poset.p_weight(&flat).unwrap()] += 1;
    }
    assert_eq!(bott.weight_enumerator(DEFAULT_BUDGET).unwrap().counts(), tally);

    let nrt = build_code(&RsCodeSpec::new(&f3, &p01, 2, 2, None).unwrap()).unwrap();
    let chain = nrt.metric().poset();
    let mut tally = vec![0u64; nrt.length() + 1];
    for m in all_messages(&f3, nrt.dim()) {
        let word = nrt.encode(&m).unwrap();
        tally[chain.p_weight(&word.nrt_flatten()).unwrap()] += 1;
    }
    assert_eq!(nrt.weight_enumerator(DEFAULT_BUDGET).unwrap().counts(), tally);
}

#[test]
fn nrt_weight_counts_clipped_vanishing_orders() {
    let f7 = Field::new(7, 1).unwrap();
    let pts = elems(&f7, &[1, 2, 5]);
    let s = 3;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..300 {
        // random polynomial times a random power of (z - 1) to reach deep
        // vanishing orders at the first point
        let deg = rng.gen_range(0..6);
        let mut codes: Vec<u64> = (0..=deg).map(|_| rng.gen_range(0..7)).collect();
        codes[deg] = rng.gen_range(1..7);
        let mut f = Polynomial::from_codes(&f7, &codes).unwrap();
        let x_minus_1 = Polynomial::monomial(&f7.one(), 1)
            .checked_sub(&Polynomial::constant(&f7.one()))
            .unwrap();
        for _ in 0..rng.gen_range(0..5) {
            f = f.checked_mul(&x_minus_1).unwrap();
        }
        let word = hyper_matrix(&f, &pts, s).unwrap();
        let expect: usize = pts
            .iter()
            .map(|p| s - s.min(f.vanishing_order(p).unwrap().unwrap()))
            .sum();
        assert_eq!(word.nrt_weight(), expect);
    }
}

#[test]
fn constant_row_constraint_holds_on_every_codeword() {
    let f7 = Field::new(7, 1).unwrap();
    let pts = elems(&f7, &[0, 1, 3]);
    let spec = RsCodeSpec::new(&f7, &pts, 3, 5, Some(2)).unwrap();
    let code = build_code(&spec).unwrap();
    assert_eq!(code.dim(), 3);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..50 {
        let m: Vec<FieldElement> =
            (0..3).map(|_| f7.elem(rng.gen_range(0..7)).unwrap()).collect();
        let word = code.encode(&m).unwrap();
        let row: Vec<u64> = (0..3).map(|j| word.entry(1, j).code()).collect();
        assert!(row.iter().all(|&c| c == row[0]));
        let w = code.metric().weight(&word).unwrap();
        assert_eq!(w, word.bottleneck_weight().unwrap());
    }
}

#[test]
fn subcodes_stay_within_singleton() {
    let f5 = Field::new(5, 1).unwrap();
    let pts = elems(&f5, &[1, 3, 4]);
    let code = build_code(&RsCodeSpec::new(&f5, &pts, 2, 4, None).unwrap()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..20 {
        let k = rng.gen_range(1..=code.dim());
        let mut keep: Vec<usize> = (0..code.dim()).collect();
        for i in (1..keep.len()).rev() {
            keep.swap(i, rng.gen_range(0..=i));
        }
        keep.truncate(k);
        let sub = code.subcode(&keep).unwrap();
        assert_eq!(sub.dim(), k);
        let d = sub.min_distance(DEFAULT_BUDGET).unwrap();
        assert!(sub.singleton_report(d).slack >= 0);
        assert!(d >= code.min_distance(DEFAULT_BUDGET).unwrap());
    }
    assert!(code.subcode(&[0, 0]).is_err());
    assert!(code.subcode(&[9]).is_err());
    let empty = code.subcode(&[]).unwrap();
    assert_eq!(empty.dim(), 0);
    assert_eq!(empty.weight_enumerator(DEFAULT_BUDGET).unwrap().counts()[0], 1);
    assert!(matches!(
        empty.min_distance(DEFAULT_BUDGET),
        Err(Error::ParameterOutOfRange(_))
    ));
}

#[test]
fn metric_comparison_table() {
    let f5 = Field::new(5, 1).unwrap();
    let pts = elems(&f5, &[1, 3, 4]);
    let cmp = compare_metrics(&f5, &pts, 2, 4, DEFAULT_BUDGET).unwrap();
    assert_eq!((cmp.q, cmp.r, cmp.s, cmp.t), (5, 3, 2, 4));
    assert_eq!((cmp.nrt.n, cmp.nrt.k, cmp.nrt.d), (6, 4, 3));
    assert_eq!((cmp.bottleneck.n, cmp.bottleneck.k, cmp.bottleneck.d), (4, 2, 3));
    assert_eq!(cmp.nrt.relative_distance, num_rational::Ratio::new(1, 2));
    assert_eq!(cmp.bottleneck.relative_distance, num_rational::Ratio::new(3, 4));
    assert_eq!(cmp.nrt.rate, num_rational::Ratio::new(2, 3));
    assert_eq!(cmp.bottleneck.rate, num_rational::Ratio::new(1, 2));
    assert!(cmp.bottleneck_advantage);

    // t = r edge: the constrained code shrinks to dimension 1 but still works
    let edge = compare_metrics(&f5, &pts, 2, 3, DEFAULT_BUDGET).unwrap();
    assert_eq!(edge.bottleneck.k, 1);
    assert!(matches!(
        compare_metrics(&f5, &pts, 2, 2, DEFAULT_BUDGET),
        Err(Error::ParameterOutOfRange(_))
    ));
}

#[test]
fn deterministic_across_worker_counts() {
    let f5 = Field::new(5, 1).unwrap();
    let pts = elems(&f5, &[1, 3, 4]);
    let code = build_code(&RsCodeSpec::new(&f5, &pts, 2, 4, None).unwrap()).unwrap();
    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| code.weight_enumerator(DEFAULT_BUDGET).unwrap())
    };
    let one = run(1);
    let eight = run(8);
    assert_eq!(one, eight);
    assert_eq!(
        serde_json::to_string(&one).unwrap(),
        serde_json::to_string(&eight).unwrap()
    );
    assert_eq!(one.total(), 625);
}

#[test]
fn code_serialization_round_trips() {
    let f5 = Field::new(5, 1).unwrap();
    let pts = elems(&f5, &[1, 3, 4]);
    let code = build_code(&RsCodeSpec::new(&f5, &pts, 2, 4, Some(1)).unwrap()).unwrap();
    let json = serde_json::to_string_pretty(&code).unwrap();
    let back: posetcode::codes::Code = serde_json::from_str(&json).unwrap();
    assert_eq!(back, code);
    assert_eq!(back.basis_words(), code.basis_words());
    match back.basis() {
        Basis::Poly(polys) => assert_eq!(polys.len(), 2),
        Basis::Rational(_) => panic!("point-evaluation code carries a polynomial basis"),
    }

    // tampering with the recorded dimension must be caught on load
    let mut v: serde_json::Value = serde_json::from_str(&json).unwrap();
    v["dim"] = serde_json::json!(3);
    assert!(serde_json::from_value::<posetcode::codes::Code>(v).is_err());
}

#[test]
fn metric_weight_checks_dimensions_and_rows() {
    let f3 = Field::new(3, 1).unwrap();
    let m = Metric::Nrt { s: 2, r: 3 };
    let w = MatrixWord::from_codes(&f3, 2, 2, &[1, 0, 0, 1]).unwrap();
    assert!(matches!(m.weight(&w), Err(Error::LengthMismatch { .. })));

    let mb = Metric::Bottleneck(posetcode::poset::BottleneckShape::new(2, 3, 1).unwrap());
    let bad = MatrixWord::from_codes(&f3, 2, 3, &[1, 2, 0, 0, 0, 0]).unwrap();
    assert!(matches!(mb.weight(&bad), Err(Error::NotConstantRow { row: 1 })));
    let good = MatrixWord::from_codes(&f3, 2, 3, &[1, 1, 1, 2, 0, 1]).unwrap();
    assert_eq!(mb.weight(&good).unwrap(), 4);
}

#[test]
fn sweep_grids_have_frozen_sizes() {
    assert_eq!(bottleneck_grid(500_000).len(), 716);
    assert_eq!(nrt_grid(500_000).len(), 324);
    // every grid point fits its enumeration budget by construction
    assert!(nrt_grid(1_000).iter().all(|p| (p.q as u128).pow(p.t as u32) <= 1_000));
}

#[test]
fn nrt_sweep_subset_passes() {
    let points: Vec<RsSweepPoint> =
        nrt_grid(1_000).into_iter().filter(|p| p.q == 3).collect();
    assert!(!points.is_empty());
    let rows = run_rs_sweep(&points, DEFAULT_BUDGET);
    assert_eq!(rows.len(), points.len());
    for row in &rows {
        assert_eq!(row.status, SweepStatus::Pass, "q={} r={} s={} t={:?}: {}", row.q, row.r, row.s, row.t, row.detail);
        assert_eq!(row.family, "nrt");
        assert_eq!(row.observed_dim, Some(row.expected_dim as u64));
        assert_eq!(row.observed_dist, Some(row.expected_dist as u64));
    }
}

#[test]
fn constant_row_sweep_subset_passes_where_rank_is_clean() {
    let points: Vec<RsSweepPoint> = bottleneck_grid(500_000)
        .into_iter()
        .filter(|p| p.q == 3 && p.b_row == Some(1) && p.t >= p.r)
        .collect();
    assert!(!points.is_empty());
    for row in run_rs_sweep(&points, DEFAULT_BUDGET) {
        assert_eq!(row.status, SweepStatus::Pass, "q={} r={} s={} t={:?}: {}", row.q, row.r, row.s, row.t, row.detail);
    }
}

#[test]
fn sweep_reports_dimension_mismatch_without_enumerating() {
    // over GF(4) with derivative order 1, the binomial C(2,1) = 2 vanishes in
    // characteristic 2, so the linear system loses rank and the space is one
    // dimension larger than the generic count t - r + 1
    let pt = RsSweepPoint { q: 4, r: 2, s: 2, b_row: Some(2), t: 3 };
    let rows = run_rs_sweep(&[pt], DEFAULT_BUDGET);
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0].status, SweepStatus::Fail);
    assert_eq!(rows[0].expected_dim, 2);
    assert_eq!(rows[0].observed_dim, Some(3));
    assert_eq!(rows[0].observed_dist, None);
    assert!(rows[0].detail.contains("dimension"));
}

#[test]
fn sweep_flags_bad_parameters_and_budget() {
    let bad_t = RsSweepPoint { q: 5, r: 2, s: 2, b_row: Some(1), t: 9 };
    let bad_q = RsSweepPoint { q: 6, r: 2, s: 2, b_row: None, t: 2 };
    let heavy = RsSweepPoint { q: 3, r: 2, s: 2, b_row: None, t: 3 };
    let rows = run_rs_sweep(&[bad_t, bad_q, heavy], 10);
    assert_eq!(rows[0].status, SweepStatus::ParameterOutOfRange);
    assert_eq!(rows[1].status, SweepStatus::ParameterOutOfRange);
    assert_eq!(rows[2].status, SweepStatus::BudgetExceeded);
    assert!(rows[2].detail.contains("27"));
}
