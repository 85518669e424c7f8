use multiproj::instance::random_arrangement;
use multiproj::oracle::{count_intersection_points, in_closure, witness_curve, TupleW};
use multiproj::{Arrangement, Exec, FieldSpec, SampleConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_extensions(a: &Arrangement, rng: &mut ChaCha8Rng) -> TupleW {
    let cfg = SampleConfig::default();
    let ambient = a.ambient_dim();
    let w = a
        .subspaces()
        .iter()
        .map(|v| v.random_superspace(ambient - v.dim() - 1, rng, &cfg).unwrap())
        .collect();
    TupleW::new(a, w).unwrap()
}

fn random_vector(a: &Arrangement, rng: &mut ChaCha8Rng) -> Vec<multiproj::Scalar> {
    (0..a.ambient_dim()).map(|_| a.field().sample(rng, 3)).collect()
}

/// Limit at `t = 0` of the image of `w0 + t w1`, with `w0` drawn from the
/// intersection of a random subset of the `V_i`.
fn limit_tuple(a: &Arrangement, rng: &mut ChaCha8Rng) -> TupleW {
    let mask = rng.gen_range(0..1u32 << a.n());
    let base = a.intersection(mask);
    let w0: Vec<_> = base.basis_vectors().iter().fold(vec![a.field().zero(); a.ambient_dim()], |acc, b| {
        let k = a.field().sample(rng, 3);
        acc.iter().zip(b).map(|(x, y)| x + &(&k * y)).collect()
    });
    loop {
        let w1 = random_vector(a, rng);
        let w = a
            .subspaces()
            .iter()
            .map(|v| {
                let first = v.extend(&w0).unwrap();
                if first.dim() > v.dim() { first } else { v.extend(&w1).unwrap() }
            })
            .collect();
        if let Ok(t) = TupleW::new(a, w) {
            return t;
        }
    }
}

#[test]
fn witness_curves_on_random_closure_tuples() {
    let f = FieldSpec::prime(7).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut accepted = 0;
    let mut multi_stage = 0;
    for dims in [[1, 1, 2], [2, 1, 0], [1, 2, 2]] {
        let a = random_arrangement(f, 4, &dims, &mut rng, 50).unwrap();
        for _ in 0..60 {
            let t = if rng.gen_bool(0.5) { random_extensions(&a, &mut rng) } else { limit_tuple(&a, &mut rng) };
            let closed = in_closure(&a, &t).unwrap();
            let curve = witness_curve(&a, &t);
            assert_eq!(closed, curve.is_ok());
            if let Ok(curve) = curve {
                accepted += 1;
                multi_stage += usize::from(curve.w.len() > 1);
                assert!(curve.check(&a, &t, &mut rng, 5).unwrap(), "{dims:?}: {curve:?}");
            }
        }
    }
    assert!(accepted >= 40, "only {accepted} closure tuples");
    assert!(multi_stage > 0);
}

#[test]
fn golden_counts_over_f101() {
    let f = FieldSpec::prime(101).unwrap();
    let a = Arrangement::coordinate(f, 5, &[&[1, 2], &[1, 3], &[5]]);
    let budget = 2_000_000;
    for (c, want) in [([2, 1, 1], 1), ([2, 2, 0], 0)] {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let pc = count_intersection_points(&a, &c, &mut rng, budget, Exec::default()).unwrap();
        assert_eq!(pc.count, want, "{c:?}");
    }
}
