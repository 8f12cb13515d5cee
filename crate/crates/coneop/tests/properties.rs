//! Property tests for the cone algebra and operator laws.

use coneop::cone::{disjoint, pointwise_min, ConeFunction};
use coneop::operators::{as_oracle, random_op, PointMap, WeightFunction};
use coneop::scalar::Scalar;
use coneop::space::{DiscreteSpace, SpaceDescriptor};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

prop_compose! {
    fn discrete_values(n: usize)(raw in prop::collection::vec((0i64..=60, 1i64..=12, any::<bool>()), n)) -> Vec<BigRational> {
        raw.into_iter()
            .map(|(num, den, zero)| if zero { rat(0, 1) } else { rat(num, den) })
            .collect()
    }
}

fn discrete_fn(space: &DiscreteSpace) -> impl Strategy<Value = ConeFunction> {
    let space = space.clone();
    discrete_values(space.len())
        .prop_map(move |values| ConeFunction::discrete(space.clone(), values).unwrap())
}

fn pl_fn() -> impl Strategy<Value = ConeFunction> {
    (
        prop::collection::btree_set(-80i32..=80, 2..8),
        prop::collection::vec(0u32..=100, 8),
    )
        .prop_map(|(xs, raw_vals)| {
            let xs: Vec<f64> = xs.into_iter().map(|x| x as f64 / 4.0).collect();
            let n = xs.len();
            let values: Vec<f64> = (0..n)
                .map(|i| {
                    if i == 0 || i == n - 1 {
                        0.0
                    } else {
                        raw_vals[i % raw_vals.len()] as f64 / 10.0
                    }
                })
                .collect();
            ConeFunction::pl(xs, values).unwrap()
        })
}

fn space4() -> DiscreteSpace {
    DiscreteSpace::with_size(4).unwrap()
}

proptest! {
    #[test]
    fn min_cozero_duality_discrete(
        f in discrete_fn(&space4()),
        g in discrete_fn(&space4()),
    ) {
        let min_zero = pointwise_min(&[f.clone(), g.clone()]).unwrap().is_zero();
        let coz_disjoint = !f.coz().intersects(&g.coz()).unwrap();
        prop_assert_eq!(min_zero, coz_disjoint);
        prop_assert_eq!(disjoint(&[f, g]).unwrap(), min_zero);
    }

    #[test]
    fn min_cozero_duality_pl(f in pl_fn(), g in pl_fn()) {
        let min_zero = pointwise_min(&[f.clone(), g.clone()]).unwrap().is_zero();
        let coz_disjoint = !f.coz().intersects(&g.coz()).unwrap();
        prop_assert_eq!(min_zero, coz_disjoint);
    }

    #[test]
    fn support_contains_cozero_discrete(f in discrete_fn(&space4())) {
        // on a discrete space the closure is the identity
        match (f.coz(), f.supp()) {
            (coneop::cone::Cozero::Points(c), coneop::cone::Support::Points(s)) => {
                prop_assert_eq!(c, s);
            }
            _ => prop_assert!(false, "discrete function returned interval sets"),
        }
    }

    #[test]
    fn truncate_bounds_discrete(
        f in discrete_fn(&space4()),
        num in 0i64..=40, den in 1i64..=8,
    ) {
        let eps = Scalar::Rational(rat(num, den));
        let t = f.truncate(&eps).unwrap();
        prop_assert!(t.leq(&f).unwrap());
        prop_assert!(f.sup_distance(&t).unwrap().le(&eps).unwrap());
        // support of the truncation sits inside {f >= eps}
        if let (Some(tv), Some(fv)) = (t.discrete_values(), f.discrete_values()) {
            for (tval, fval) in tv.iter().zip(fv) {
                if !num_traits::Zero::is_zero(tval) {
                    prop_assert!(fval >= eps.as_rational().unwrap());
                }
            }
        }
    }

    #[test]
    fn truncate_bounds_pl(f in pl_fn(), raw_eps in 1u32..=60) {
        let eps = raw_eps as f64 / 20.0;
        let t = f.truncate(&Scalar::Real(eps)).unwrap();
        prop_assert!(t.leq(&f).unwrap());
        prop_assert!(f.sup_distance(&t).unwrap().to_f64() <= eps + 1e-12);
    }

    #[test]
    fn leq_is_a_partial_order(
        f in discrete_fn(&space4()),
        d1 in discrete_fn(&space4()),
        d2 in discrete_fn(&space4()),
    ) {
        // reflexive
        prop_assert!(f.leq(&f).unwrap());
        // transitive along constructed comparable triples
        let g = f.add(&d1).unwrap();
        let h = g.add(&d2).unwrap();
        prop_assert!(f.leq(&g).unwrap() && g.leq(&h).unwrap() && f.leq(&h).unwrap());
        // antisymmetric
        if f.leq(&g).unwrap() && g.leq(&f).unwrap() {
            prop_assert_eq!(&f, &g);
        }
    }

    #[test]
    fn norm_laws_discrete(
        f in discrete_fn(&space4()),
        g in discrete_fn(&space4()),
        num in 0i64..=20, den in 1i64..=5,
    ) {
        let sub = f.add(&g).unwrap().sup_norm();
        let bound = f.sup_norm().add(&g.sup_norm()).unwrap();
        prop_assert!(sub.le(&bound).unwrap());
        let r = Scalar::Rational(rat(num, den));
        let scaled = f.scale(&r).unwrap().sup_norm();
        prop_assert_eq!(scaled, r.mul(&f.sup_norm()).unwrap());
    }

    #[test]
    fn pl_operations_stay_canonical(f in pl_fn(), g in pl_fn(), r in 0u32..40) {
        // rebuilding an operation result from its own node data must be a
        // no-op (idempotent canonicalization)
        for result in [
            f.add(&g).unwrap(),
            f.pointwise_max(&g).unwrap(),
            pointwise_min(&[f.clone(), g.clone()]).unwrap(),
            f.scale(&Scalar::Real(r as f64 / 8.0)).unwrap(),
        ] {
            if let Some(p) = result.as_pl() {
                let rebuilt =
                    ConeFunction::pl(p.breakpoints().to_vec(), p.values().to_vec()).unwrap();
                prop_assert_eq!(&rebuilt, &result);
            }
        }
    }

    #[test]
    fn operator_laws_discrete(seed in any::<u64>(), f in discrete_fn(&space4()), g in discrete_fn(&space4())) {
        let s = SpaceDescriptor::Discrete(space4());
        let op = random_op(seed, &s, &s, (0.1, 10.0)).unwrap();

        // additivity and positive homogeneity of the canonical form
        let lhs = op.apply(&f.add(&g).unwrap()).unwrap();
        let rhs = op.apply(&f).unwrap().add(&op.apply(&g).unwrap()).unwrap();
        prop_assert_eq!(&lhs, &rhs);
        let r = Scalar::Rational(rat(7, 3));
        prop_assert_eq!(
            op.apply(&f.scale(&r).unwrap()).unwrap(),
            op.apply(&f).unwrap().scale(&r).unwrap()
        );

        // inverse round trip is exact
        let inv = op.invert();
        prop_assert_eq!(&inv.apply(&op.apply(&f).unwrap()).unwrap(), &f);

        // norm bounds: h_min ||f|| <= ||Tf|| <= h_max ||f||
        let norm = op.apply(&f).unwrap().sup_norm();
        prop_assert!(norm.le(&op.h_max().mul(&f.sup_norm()).unwrap()).unwrap());
        prop_assert!(op.h_min().mul(&f.sup_norm()).unwrap().le(&norm).unwrap());

        // order preservation both ways
        let bigger = f.add(&g).unwrap();
        prop_assert!(op.apply(&f).unwrap().leq(&op.apply(&bigger).unwrap()).unwrap());
    }

    #[test]
    fn operator_locality_discrete(seed in any::<u64>(), point in 0usize..4) {
        let space = space4();
        let s = SpaceDescriptor::Discrete(space.clone());
        let op = random_op(seed, &s, &s, (0.5, 2.0)).unwrap();
        let f = ConeFunction::indicator(&space, point).unwrap();
        let image = op.apply(&f).unwrap();
        let map = match op.point_map() {
            PointMap::Permutation { map } => map.clone(),
            _ => unreachable!(),
        };
        let supp = f.supp();
        for (y, value) in image.discrete_values().unwrap().iter().enumerate() {
            let in_support = supp
                .contains(&coneop::space::Point::Discrete(map[y]))
                .unwrap();
            // tau(y) outside supp(f) forces Tf(y) = 0
            if !in_support {
                prop_assert!(num_traits::Zero::is_zero(value));
            }
        }
    }

    #[test]
    fn oracle_norm_additive_identity_discrete(seed in any::<u64>(), f in discrete_fn(&space4()), g in discrete_fn(&space4())) {
        let s = SpaceDescriptor::Discrete(space4());
        let op = random_op(seed, &s, &s, (0.1, 10.0)).unwrap();
        let oracle = as_oracle(&op);
        let (lhs, rhs, disc) =
            coneop::verification::norm_additive_sides(&oracle, &f, &g).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert!(disc.is_zero());
    }

    #[test]
    fn weight_duality_via_operators(seed in any::<u64>()) {
        let s = SpaceDescriptor::discrete(5).unwrap();
        let op = random_op(seed, &s, &s, (0.1, 10.0)).unwrap();
        let inv = op.invert();
        if let (
            PointMap::Permutation { map },
            WeightFunction::Discrete(h),
            WeightFunction::Discrete(w),
        ) = (op.point_map(), op.weight(), inv.weight())
        {
            for y in 0..map.len() {
                let prod = h.values()[y].clone() * &w.values()[map[y]];
                prop_assert_eq!(prod, rat(1, 1));
            }
        }
    }
}
