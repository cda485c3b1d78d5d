use proptest::prelude::*;

use projgrad::{FeasibleSet, Vector};

const TOL: f64 = 1e-10;

fn v(x: Vec<f64>) -> Vector {
    Vector::new(x).unwrap()
}

fn coords(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-5.0..5.0f64, n)
}

fn boxed(n: usize) -> impl Strategy<Value = FeasibleSet> {
    (coords(n), prop::collection::vec(0.0..3.0f64, n), prop::collection::vec(0u8..4, n)).prop_map(|(lo, width, open)| {
        // 1 drops the lower bound, 2 the upper one, 3 both
        let lower = lo.iter().zip(&open).map(|(l, o)| if o & 1 == 1 { f64::NEG_INFINITY } else { *l }).collect();
        let upper =
            lo.iter().zip(&width).zip(&open).map(|((l, w), o)| if o & 2 == 2 { f64::INFINITY } else { l + w }).collect();
        FeasibleSet::boxed(lower, upper).unwrap()
    })
}

fn nonzero(n: usize) -> impl Strategy<Value = Vec<f64>> {
    coords(n).prop_filter("normal must not vanish", |a| a.iter().map(|x| x * x).sum::<f64>() > 1e-3)
}

fn any_set(n: usize) -> BoxedStrategy<FeasibleSet> {
    prop_oneof![
        boxed(n),
        (coords(n), 0.0..4.0f64).prop_map(|(c, r)| FeasibleSet::ball(v(c), r).unwrap()),
        (nonzero(n), -3.0..3.0f64).prop_map(|(a, b)| FeasibleSet::halfspace(v(a), b).unwrap()),
        (nonzero(n), -3.0..3.0f64).prop_map(|(a, b)| FeasibleSet::hyperplane(v(a), b).unwrap()),
        (0.1..5.0f64).prop_map(move |s| FeasibleSet::simplex(n, s).unwrap()),
        Just(FeasibleSet::whole_space(n).unwrap()),
    ]
    .boxed()
}

fn triple() -> impl Strategy<Value = (FeasibleSet, Vector, Vector, Vector)> {
    (1usize..=10).prop_flat_map(|n| {
        (any_set(n), coords(n), coords(n), coords(n)).prop_map(|(s, x, y, z)| (s, v(x), v(y), v(z)))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn obtuse_angle((set, x, _y, z) in triple()) {
        let px = set.project(&x).unwrap();
        let member = set.project(&z).unwrap();
        let ip = x.sub(&px).unwrap().dot(&member.sub(&px).unwrap()).unwrap();
        let scale = 1.0 + x.norm() + member.norm();
        prop_assert!(ip <= TOL * scale * scale, "⟨x−P(x), z−P(x)⟩ = {ip}");
    }

    #[test]
    fn member_distance_inequality((set, _x, y, z) in triple()) {
        // ⟨z − y, z − P(y)⟩ ≥ ‖z − P(y)‖² for z in the set
        let member = set.project(&z).unwrap();
        let py = set.project(&y).unwrap();
        let lhs = member.sub(&y).unwrap().dot(&member.sub(&py).unwrap()).unwrap();
        let rhs = member.sub(&py).unwrap().norm_squared();
        let scale = 1.0 + y.norm() + member.norm();
        prop_assert!(lhs - rhs >= -TOL * scale * scale, "margin {}", lhs - rhs);
    }

    #[test]
    fn idempotent_and_feasible((set, x, _y, _z) in triple()) {
        let px = set.project(&x).unwrap();
        prop_assert!(set.contains(&px, 1e-9).unwrap());
        let again = set.project(&px).unwrap();
        prop_assert!(again.dist(&px).unwrap() <= TOL * (1.0 + px.norm()));
    }

    #[test]
    fn nonexpansive((set, x, y, _z) in triple()) {
        let d = set.project(&x).unwrap().dist(&set.project(&y).unwrap()).unwrap();
        prop_assert!(d <= x.dist(&y).unwrap() + TOL);
    }

    #[test]
    fn members_are_fixed((set, _x, _y, z) in triple()) {
        let member = set.project(&z).unwrap();
        if set.contains(&member, 0.0).unwrap() {
            prop_assert!(set.project(&member).unwrap().dist(&member).unwrap() <= TOL * (1.0 + member.norm()));
        }
    }
}

#[test]
fn dimension_mismatch_is_rejected() {
    let set = FeasibleSet::simplex(3, 1.0).unwrap();
    assert!(set.project(&v(vec![1.0, 2.0])).is_err());
}
