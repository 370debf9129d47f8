use posetcode::gf::{Field, FieldElement};
use posetcode::poset::{bottleneck, chain_union, BottleneckShape, MatrixWord, Poset};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn gf(p: u64, m: u32) -> Field {
    Field::new(p, m).unwrap()
}

fn word(field: &Field, s: usize, r: usize, codes: &[u64]) -> MatrixWord {
    MatrixWord::from_codes(field, s, r, codes).unwrap()
}

fn shaped(field: &Field, sh: BottleneckShape, codes: &[u64]) -> MatrixWord {
    word(field, sh.s(), sh.r(), codes).with_shape(sh).unwrap()
}

fn vec_of_codes(field: &Field, codes: &[u64]) -> Vec<FieldElement> {
    codes.iter().map(|&c| field.elem(c).unwrap()).collect()
}

#[test]
fn chain_union_shapes() {
    let c23 = chain_union(2, 3).unwrap();
    assert_eq!(c23.n(), 6);
    assert_eq!(c23.labels(), &[1, 2, 3, 4, 5, 6]);
    assert_eq!(c23.covers(), vec![(1, 4), (2, 5), (3, 6)]);

    let anti = chain_union(1, 4).unwrap();
    assert_eq!(anti.n(), 4);
    assert!(anti.covers().is_empty());
    for i in 0..4 {
        assert_eq!(anti.rank(i), 0);
        assert!(anti.is_maximal(i));
    }

    let c33 = chain_union(3, 3).unwrap();
    assert_eq!(c33.n(), 9);
    assert_eq!(
        c33.covers(),
        vec![(1, 4), (2, 5), (3, 6), (4, 7), (5, 8), (6, 9)]
    );
    for label in 1..=9u64 {
        let i = c33.index_of(label).unwrap();
        assert_eq!(c33.rank(i), ((label - 1) / 3) as usize);
    }

    assert!(chain_union(0, 3).is_err());
    assert!(chain_union(2, 0).is_err());
}

#[test]
fn bottleneck_shapes() {
    let u332 = bottleneck(BottleneckShape::new(3, 3, 2).unwrap());
    assert_eq!(u332.n(), 7);
    assert_eq!(u332.labels(), &[1, 2, 3, 4, 7, 8, 9]);
    assert_eq!(
        u332.covers(),
        vec![(1, 4), (2, 4), (3, 4), (4, 7), (4, 8), (4, 9)]
    );

    let u231 = bottleneck(BottleneckShape::new(2, 3, 1).unwrap());
    assert_eq!(u231.n(), 4);
    assert_eq!(u231.labels(), &[1, 2, 3, 4]);
    assert_eq!(u231.covers(), vec![(1, 4), (2, 4), (3, 4)]);

    let single = bottleneck(BottleneckShape::new(1, 3, 1).unwrap());
    assert_eq!(single.n(), 1);
    assert!(single.covers().is_empty());

    // collapse at the bottom
    let u322 = bottleneck(BottleneckShape::new(3, 2, 3).unwrap());
    assert_eq!(u322.labels(), &[1, 3, 4, 5, 6]);
    assert_eq!(u322.covers(), vec![(1, 3), (1, 4), (3, 5), (4, 6)]);
}

#[test]
fn bottleneck_maximal_elements_share_top_rank() {
    for s in 1..=4usize {
        for r in 2..=4usize {
            for b_row in 1..=s {
                let sh = BottleneckShape::new(s, r, b_row).unwrap();
                let p = bottleneck(sh);
                assert_eq!(p.n(), sh.vertex_count());
                for i in 0..p.n() {
                    if p.is_maximal(i) {
                        assert_eq!(p.rank(i), s - 1, "shape {sh}");
                    }
                }
            }
        }
    }
}

#[test]
fn p_weight_examples() {
    let f5 = gf(5, 1);
    let c23 = chain_union(2, 3).unwrap();

    let zero = vec_of_codes(&f5, &[0; 6]);
    assert_eq!(c23.p_weight(&zero).unwrap(), 0);

    let mut e4 = vec![0u64; 6];
    e4[c23.index_of(4).unwrap()] = 1;
    assert_eq!(c23.p_weight(&vec_of_codes(&f5, &e4)).unwrap(), 2);

    let u231 = bottleneck(BottleneckShape::new(2, 3, 1).unwrap());
    let mut at4 = vec![0u64; 4];
    at4[u231.index_of(4).unwrap()] = 3;
    assert_eq!(u231.p_weight(&vec_of_codes(&f5, &at4)).unwrap(), 4);

    assert!(matches!(
        c23.p_weight(&vec_of_codes(&f5, &[1, 2])),
        Err(posetcode::Error::LengthMismatch { want: 6, got: 2 })
    ));
}

#[test]
fn nrt_weight_examples() {
    let f5 = gf(5, 1);
    let a = word(&f5, 3, 3, &[1, 0, 1, 1, 1, 1, 0, 0, 1]);
    assert_eq!(a.nrt_weight(), 8);

    assert_eq!(word(&f5, 2, 3, &[0; 6]).nrt_weight(), 0);

    // a single column given bottom-up as (0,1,1,0,1,0,0,0); stored top-down
    let f2 = gf(2, 1);
    let col = word(&f2, 8, 1, &[0, 0, 0, 1, 0, 1, 1, 0]);
    assert_eq!(col.nrt_weight(), 5);
}

#[test]
fn bottleneck_weight_examples() {
    let f5 = gf(5, 1);
    let sh332 = BottleneckShape::new(3, 3, 2).unwrap();
    let a = shaped(&f5, sh332, &[1, 0, 1, 1, 1, 1, 0, 0, 1]);
    assert_eq!(a.bottleneck_weight().unwrap(), 6);
    assert_eq!(a.nrt_weight(), 8);

    let sh231 = BottleneckShape::new(2, 3, 1).unwrap();
    assert_eq!(shaped(&f5, sh231, &[0, 0, 0, 2, 1, 1]).bottleneck_weight().unwrap(), 3);
    assert_eq!(shaped(&f5, sh231, &[3, 3, 3, 4, 2, 2]).bottleneck_weight().unwrap(), 4);

    // rows 1..b_row all zero: plain NRT weight
    let sh333 = BottleneckShape::new(3, 3, 3).unwrap();
    assert_eq!(shaped(&f5, sh333, &[1, 1, 0, 0, 2, 0, 0, 0, 0]).bottleneck_weight().unwrap(), 5);

    assert!(matches!(
        word(&f5, 2, 3, &[3, 1, 3, 4, 2, 2]).with_shape(sh231),
        Err(posetcode::Error::NotConstantRow { row: 1 })
    ));
    assert!(word(&f5, 2, 3, &[1; 6]).bottleneck_weight().is_err());
}

#[test]
fn flatten_examples() {
    let f5 = gf(5, 1);
    let sh231 = BottleneckShape::new(2, 3, 1).unwrap();

    let z = shaped(&f5, sh231, &[0; 6]);
    assert!(z.flatten().unwrap().iter().all(|x| x.is_zero()));

    let a = shaped(&f5, sh231, &[3, 3, 3, 4, 2, 2]);
    let flat: Vec<u64> = a.flatten().unwrap().iter().map(|x| x.code()).collect();
    assert_eq!(flat, vec![4, 2, 2, 3]);
    let u231 = bottleneck(sh231);
    assert_eq!(u231.p_weight(&a.flatten().unwrap()).unwrap(), 4);
    assert_eq!(a.bottleneck_weight().unwrap(), 4);

    let sh332 = BottleneckShape::new(3, 3, 2).unwrap();
    let b = shaped(&f5, sh332, &[1, 0, 1, 1, 1, 1, 0, 0, 1]);
    let flat = b.flatten().unwrap();
    assert_eq!(flat.len(), 7);
    assert_eq!(bottleneck(sh332).p_weight(&flat).unwrap(), 6);
}

#[test]
fn nrt_flatten_matches_generic_weight() {
    let f3 = gf(3, 1);
    let c33 = chain_union(3, 3).unwrap();
    let a = word(&f3, 3, 3, &[1, 0, 1, 1, 1, 1, 0, 0, 1]);
    assert_eq!(c33.p_weight(&a.nrt_flatten()).unwrap(), 8);
    // the top matrix row lands on the top level's labels
    let flat: Vec<u64> = a.nrt_flatten().iter().map(|x| x.code()).collect();
    assert_eq!(flat, vec![0, 0, 1, 1, 1, 1, 1, 0, 1]);
}

#[test]
fn exhaustive_oracle_equivalence_small_fields() {
    // every matrix over GF(2) and GF(3) with s, r <= 3 and every b_row:
    // the closed-form weights agree with the generic lower-ideal oracle
    for field in [gf(2, 1), gf(3, 1)] {
        let q = field.order();
        for s in 1..=3usize {
            for r in 2..=3usize {
                let c = chain_union(s, r).unwrap();
                let cells = s * r;
                for raw in 0..q.pow(cells as u32) {
                    let mut codes = vec![0u64; cells];
                    let mut acc = raw;
                    for c in codes.iter_mut() {
                        *c = acc % q;
                        acc /= q;
                    }
                    let a = word(&field, s, r, &codes);
                    assert_eq!(a.nrt_weight(), c.p_weight(&a.nrt_flatten()).unwrap());
                }
                for b_row in 1..=s {
                    let sh = BottleneckShape::new(s, r, b_row).unwrap();
                    let u = bottleneck(sh);
                    // free cells: all rows except b_row, plus one shared value
                    let free = (s - 1) * r + 1;
                    for raw in 0..q.pow(free as u32) {
                        let mut digits = vec![0u64; free];
                        let mut acc = raw;
                        for d in digits.iter_mut() {
                            *d = acc % q;
                            acc /= q;
                        }
                        let mut codes = Vec::with_capacity(s * r);
                        let mut it = digits.iter().copied();
                        for i in 0..s {
                            if i == b_row - 1 {
                                codes.extend(std::iter::repeat(digits[free - 1]).take(r));
                            } else {
                                codes.extend((&mut it).take(r));
                            }
                        }
                        let a = word(&field, s, r, &codes).with_shape(sh).unwrap();
                        assert_eq!(
                            a.bottleneck_weight().unwrap(),
                            u.p_weight(&a.flatten().unwrap()).unwrap(),
                            "shape {sh}, matrix {a}"
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn random_oracle_equivalence_larger_fields() {
    let mut rng = ChaCha8Rng::seed_from_u64(47);
    for field in [gf(5, 1), gf(7, 1)] {
        let q = field.order();
        for s in 1..=4usize {
            for r in 2..=4usize {
                let c = chain_union(s, r).unwrap();
                for b_row in 1..=s {
                    let sh = BottleneckShape::new(s, r, b_row).unwrap();
                    let u = bottleneck(sh);
                    for _ in 0..1000 {
                        let mut codes: Vec<u64> =
                            (0..s * r).map(|_| rng.gen_range(0..q)).collect();
                        let a = word(&field, s, r, &codes);
                        assert_eq!(a.nrt_weight(), c.p_weight(&a.nrt_flatten()).unwrap());

                        let common = rng.gen_range(0..q);
                        for j in 0..r {
                            codes[(b_row - 1) * r + j] = common;
                        }
                        let a = word(&field, s, r, &codes).with_shape(sh).unwrap();
                        assert_eq!(
                            a.bottleneck_weight().unwrap(),
                            u.p_weight(&a.flatten().unwrap()).unwrap()
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn poset_distance_is_a_metric() {
    let mut rng = ChaCha8Rng::seed_from_u64(53);
    let f4 = gf(2, 2);
    let posets = vec![
        chain_union(2, 3).unwrap(),
        chain_union(3, 3).unwrap(),
        chain_union(1, 4).unwrap(),
        bottleneck(BottleneckShape::new(3, 3, 2).unwrap()),
        bottleneck(BottleneckShape::new(2, 3, 1).unwrap()),
        bottleneck(BottleneckShape::new(4, 2, 3).unwrap()),
    ];
    let dist = |p: &Poset, u: &[FieldElement], w: &[FieldElement]| -> usize {
        let diff: Vec<FieldElement> = u
            .iter()
            .zip(w)
            .map(|(a, b)| a.checked_sub(b).unwrap())
            .collect();
        p.p_weight(&diff).unwrap()
    };
    for p in &posets {
        for _ in 0..1000 {
            let rand_vec = |rng: &mut ChaCha8Rng| -> Vec<FieldElement> {
                (0..p.n()).map(|_| f4.elem(rng.gen_range(0..4)).unwrap()).collect()
            };
            let u = rand_vec(&mut rng);
            let v = rand_vec(&mut rng);
            let w = rand_vec(&mut rng);
            assert_eq!(dist(p, &u, &w), dist(p, &w, &u));
            assert_eq!(dist(p, &u, &u), 0);
            if u != w {
                assert!(dist(p, &u, &w) > 0);
            }
            assert!(dist(p, &u, &w) <= dist(p, &u, &v) + dist(p, &v, &w));
        }
    }
}

#[test]
fn dot_and_json_exports() {
    let u332 = bottleneck(BottleneckShape::new(3, 3, 2).unwrap());
    let dot = u332.to_dot();
    assert!(dot.starts_with("digraph"));
    assert!(dot.contains("1 -> 4;"));
    assert!(dot.contains("4 -> 9;"));
    assert!(dot.contains("rank = same; 7; 8; 9;"));

    let json: serde_json::Value = serde_json::from_str(&u332.to_json()).unwrap();
    assert_eq!(json["n"], 7);
    assert_eq!(json["covers"].as_array().unwrap().len(), 6);
    assert_eq!(json["labels"][3], 4);
    assert_eq!(json["ranks"][4], 2);
}
