use super::*;
use crate::arrangement::Arrangement;
use crate::field::FieldSpec;
use crate::linalg::Subspace;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const Q: FieldSpec = FieldSpec::Rational;

fn camera() -> Arrangement {
    Arrangement::coordinate(Q, 4, &[&[1], &[2]])
}

fn golden() -> Arrangement {
    Arrangement::coordinate(Q, 5, &[&[1, 2], &[1, 3], &[5]])
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn kernel_ok(a: &Arrangement, mats: &[Matrix]) -> bool {
    mats.iter().zip(a.subspaces()).all(|(m, v)| {
        m.rank() == m.nrows()
            && m.nrows() == a.ambient_dim() - v.dim()
            && v.basis_vectors().iter().all(|b| m.apply(b).unwrap().iter().all(Scalar::is_zero))
    })
}

#[test]
fn natural_camera_matrices() {
    let mats = natural_projection_matrices(&camera());
    assert_eq!(mats[0], Matrix::from_i64(Q, &[vec![0, 1, 0, 0], vec![0, 0, 1, 0], vec![0, 0, 0, 1]]));
    assert_eq!(mats[1], Matrix::from_i64(Q, &[vec![1, 0, 0, 0], vec![0, 0, 1, 0], vec![0, 0, 0, 1]]));
}

#[test]
fn random_projections_keep_kernels() {
    let a = golden();
    let mats = projection_matrices(&a, &mut rng(7), &DetConfig::default()).unwrap();
    let shapes: Vec<(usize, usize)> = mats.iter().map(|m| (m.nrows(), m.ncols())).collect();
    assert_eq!(shapes, vec![(3, 5), (3, 5), (4, 5)]);
    assert!(kernel_ok(&a, &mats));
}

#[test]
fn genericity_counterexample() {
    let a = camera();
    let t = a.rank_table().unwrap();
    let g = genericity_check(&natural_projection_matrices(&a), &t, 0, &mut rng(0));
    assert!(!g.passed);
    assert!(g.exhaustive);
    // rows e3* of A_1 (row 2) and e3* of A_2 (row 2), or the e4* pair
    let w = g.witness.unwrap();
    assert_eq!(w.len(), 2);
    assert!(w == vec![(1, 2), (2, 2)] || w == vec![(1, 3), (2, 3)], "{w:?}");
    let mats = projection_matrices(&a, &mut rng(42), &DetConfig::default()).unwrap();
    assert!(genericity_check(&mats, &t, 0, &mut rng(0)).passed);
}

#[test]
fn single_block_is_generic() {
    let a = Arrangement::new(Q, 4, vec![Subspace::zero(Q, 4)]).unwrap();
    let t = a.rank_table().unwrap();
    assert!(genericity_check(&natural_projection_matrices(&a), &t, 0, &mut rng(1)).passed);
}

#[test]
fn b_shapes() {
    let a = camera();
    let t = a.rank_table().unwrap();
    let mats = natural_projection_matrices(&a);
    let b = build_b(&mats, 0b11, &t);
    assert_eq!((b.rows, b.cols), (6, 6));
    let b1 = build_b(&mats, 0b01, &t);
    assert_eq!((b1.rows, b1.cols), (3, 5));
    assert_eq!(b1.get(1, 4), &Entry::Var(BlockVar { block: 0, index: 2 }));
    let g = golden();
    let tg = g.rank_table().unwrap();
    let bg = build_b(&natural_projection_matrices(&g), 0b111, &tg);
    assert_eq!((bg.rows, bg.cols), (10, 8));
    assert_eq!(minor_count(&tg), 54);
    assert_eq!(minor_count(&t), 1);
}

#[test]
fn symbolic_minors_match_numeric_determinants() {
    let a = golden();
    let t = a.rank_table().unwrap();
    let mut r = rng(3);
    let mats = projection_matrices(&a, &mut r, &DetConfig::default()).unwrap();
    let order = LexOrder::new(t.block_sizes());
    let minors = minor_ideal(&mats, &t, &order, &DetConfig::default()).unwrap();
    assert_eq!(minors.len(), 54);
    let point: BTreeMap<BlockVar, Scalar> = (0..t.n())
        .flat_map(|b| (1..=t.block_size(b)).map(move |j| BlockVar { block: b, index: j }))
        .map(|v| (v, Q.sample(&mut r, 9)))
        .collect();
    let eval = |p: &SparsePoly| -> Scalar {
        p.terms().fold(Q.zero(), |acc, (m, c)| {
            let mut x = c.clone();
            for (s, &k) in m.0.iter().enumerate() {
                for _ in 0..k {
                    x = &x * &point[&order.var_at(s)];
                }
            }
            &acc + &x
        })
    };
    let mut k = 0;
    for s in 1..=t.full() {
        let b = build_b(&mats, s, &t);
        let size = SymbolicMatrix::minor_size(&t, s);
        if size > b.rows || size > b.cols {
            continue;
        }
        let numeric = b.evaluate(&point);
        for rows in subsets_of_size(b.rows, size) {
            for cols in subsets_of_size(b.cols, size) {
                let sub = Matrix::from_rows(Q, size, rows.iter().map(|&r| cols.iter().map(|&c| numeric.get(r, c).clone()).collect()).collect()).unwrap();
                assert_eq!(eval(&minors[k]), sub.det(), "minor {k} of subset {s}");
                assert!(minors[k].max_block_degree(&order) <= 1);
                assert!(minors[k].is_block_homogeneous(&order));
                k += 1;
            }
        }
    }
}

#[test]
fn camera_initial_ideal_by_groebner() {
    let check = verify_initial(&camera(), &mut rng(42), &DetConfig::default()).unwrap();
    assert!(check.equal, "{:?}", check.computed);
    assert_eq!(check.computed, vec!["x[1,1]*x[2,1]"]);
    assert_eq!(check.minors, 1);
    assert_eq!(check.basis_size, 1);
}

#[test]
fn trivial_instances_have_zero_ideals() {
    let one = Arrangement::new(Q, 4, vec![Subspace::zero(Q, 4)]).unwrap();
    let check = verify_initial(&one, &mut rng(1), &DetConfig::default()).unwrap();
    assert!(check.equal && check.minors == 0 && check.computed.is_empty());
    let lines = Arrangement::coordinate(Q, 3, &[&[1], &[2]]);
    let check = verify_initial(&lines, &mut rng(1), &DetConfig::default()).unwrap();
    assert!(check.equal && check.minors == 0);
}

#[test]
fn deterministic_basis() {
    let a = camera();
    let x = verify_initial(&a, &mut rng(9), &DetConfig::default()).unwrap();
    let y = verify_initial(&a, &mut rng(9), &DetConfig::default()).unwrap();
    assert_eq!(x.basis, y.basis);
    let order = LexOrder::new(vec![3, 3]);
    assert_eq!(dump_ideal(&x.basis, &order), dump_ideal(&y.basis, &order));
}

#[test]
fn golden_initial_ideal_by_groebner() {
    let check = verify_initial(&golden(), &mut rng(5), &DetConfig::default()).unwrap();
    assert!(check.equal, "computed {:?} expected {}", check.computed, check.expected);
}
