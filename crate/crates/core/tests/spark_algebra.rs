mod common;

use std::sync::Arc;

use common::{dense_coboundary, fixture, q, rational_solve, rng, FIXTURES};
use dfchar::cohomology::{class_of, cohomology_z, cycle_lattice_basis, homology_data};
use dfchar::complex::{circle, cup_product, torus_grid, Chain, Cochain, SimplicialComplex, SimplicialMap};
use dfchar::scalar::frac;
use dfchar::spark::{
    cup_or_empty, duality_pair, equivalent, flat_spark_from_torsion, linking_matrix, random_cocycle, random_rational,
    random_spark, spark_from_cocycle, star, star_tilde, DiscreteSpark,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use rand::Rng;

/// `a = (0, 1/3, 2/3)` on the triangle with edges `[01], [02], [12]` and
/// `R = -1` on `[02]`.
fn winding() -> DiscreteSpark {
    let c = circle(3).into_arc();
    DiscreteSpark::new(c, Cochain::new(0, vec![q(0, 1), q(1, 3), q(2, 3)]), Cochain::from_i64(1, &[0, -1, 0])).unwrap()
}

fn torsion_generator(k: &SimplicialComplex, deg: usize) -> Cochain<BigInt> {
    cohomology_z(k, deg).unwrap().torsion_generators()[0].clone()
}

#[test]
fn winding_spark() {
    let s = winding();
    // δa = (1/3, 2/3, 1/3) by hand, plus R.
    assert_eq!(s.phi().values, vec![q(1, 3), q(-1, 3), q(1, 3)]);
    let fund = Chain::fundamental(s.complex()).unwrap();
    assert_eq!(s.d1().evaluate_int(&fund).abs(), BigRational::one());
    let d2 = s.d2().unwrap();
    assert_eq!(d2.free.len(), 1);
    assert!(d2.free[0].abs().is_one());
}

#[test]
fn spark_of_the_circle_generator() {
    let k = circle(3).into_arc();
    let g = cohomology_z(&k, 1).unwrap().free_generators()[0].clone();
    let s = spark_from_cocycle(&k, &g).unwrap();
    let fund = Chain::fundamental(&k).unwrap();
    assert_eq!(s.phi().evaluate_int(&fund), g.evaluate(&fund).into());
    assert_eq!(s.phi().evaluate_int(&fund).abs(), BigRational::one());
}

#[test]
fn torsion_cocycles_give_flat_sparks() {
    let k = fixture("rp3");
    let t = torsion_generator(&k, 2);
    assert!(spark_from_cocycle(&k, &t).unwrap().phi().is_zero());
    let f = flat_spark_from_torsion(&k, &t, &BigInt::one()).unwrap();
    assert!(f.phi().is_zero());
    assert_eq!(f.d2().unwrap(), class_of(&k, &t).unwrap());
}

#[test]
fn half_period_breaks_equivalence() {
    let s = winding();
    let shifted = DiscreteSpark::new(
        s.complex().clone(),
        s.a().add(&Cochain::new(0, vec![q(0, 1), q(1, 2), q(0, 1)])),
        s.r().clone(),
    )
    .unwrap();
    // The curvature changes, so the oracle must say no.
    assert_ne!(s.phi(), shifted.phi());
    assert!(!equivalent(&s, &shifted).unwrap());
}

#[test]
fn holonomy_examples() {
    let s = winding();
    assert_eq!(s.holonomy(&Chain::from_i64(0, &[-1, 1, 0])).unwrap(), q(1, 3));

    let k = fixture("rp3");
    let f = flat_spark_from_torsion(&k, &torsion_generator(&k, 2), &BigInt::one()).unwrap();
    let h1 = homology_data(&k, 1).unwrap();
    assert_eq!(h1.structure.torsion, vec![BigInt::from(2)]);
    let z = Chain::new(1, h1.generators[0].clone());
    assert_eq!(f.holonomy(&z).unwrap(), q(1, 2));
}

#[test]
fn doubling_pullback() {
    let hexagon = circle(6).into_arc();
    let triangle = circle(3).into_arc();
    let f = SimplicialMap::new(hexagon.clone(), triangle.clone(), (0..6).map(|v| v % 3).collect()).unwrap();
    let s = winding();
    let p = s.pullback(&f).unwrap();
    let period = |sp: &DiscreteSpark| sp.phi().evaluate_int(&Chain::fundamental(sp.complex()).unwrap());
    assert_eq!(period(&p), period(&s) * BigRational::from_integer(2.into()));
    let z = Chain::from_i64(0, &[-1, 1, 0, 0, 0, 0]);
    assert_eq!(p.holonomy(&z).unwrap(), s.holonomy(&f.push_chain(&z)).unwrap());
}

#[test]
fn constant_times_winding() {
    let k = circle(3).into_arc();
    let c = DiscreteSpark::new(k.clone(), Cochain::new(0, vec![q(1, 3); 3]), Cochain::zero(&k, 1)).unwrap();
    let p = winding().scale(&BigInt::from(2));
    let fund = Chain::fundamental(&k).unwrap();
    // (c·φ_p)([S¹]) = c · 2 · (±1), computed directly.
    let direct = frac(&(q(1, 3) * p.phi().evaluate_int(&fund)));
    assert_eq!(star(&c, &p).unwrap().holonomy(&fund).unwrap(), direct);
    assert_eq!(duality_pair(&c, &p).unwrap(), direct);
    assert!(direct == q(2, 3) || direct == q(1, 3));
}

#[test]
fn torus_generators_multiply_to_the_fundamental_class() {
    let k = torus_grid(3).into_arc();
    let h1 = cohomology_z(&k, 1).unwrap();
    let (a, b) = (&h1.free_generators()[0], &h1.free_generators()[1]);
    let sa = spark_from_cocycle(&k, a).unwrap();
    let sb = spark_from_cocycle(&k, b).unwrap();
    let d2 = star(&sa, &sb).unwrap().d2().unwrap();
    assert_eq!(d2.free.len(), 1);
    assert!(d2.free[0].abs().is_one());
}

#[test]
fn projective_three_space_linking() {
    let k = fixture("rp3");
    assert_eq!(linking_matrix(&k, 1).unwrap(), vec![vec![q(1, 2)]]);
    let f = flat_spark_from_torsion(&k, &torsion_generator(&k, 2), &BigInt::one()).unwrap();
    assert_eq!(duality_pair(&f, &f).unwrap(), q(1, 2));
}

#[test]
fn linking_against_a_rational_witness() {
    // Any rational S with δS = 2T gives the same value: S differs from an
    // integral witness by a rational coboundary, as H¹(RP³; ℚ) = 0.
    let k = fixture("rp3");
    let t = torsion_generator(&k, 2);
    let rhs: Vec<BigRational> = t.values.iter().map(|x| BigRational::from_integer(x * 2)).collect();
    let s = rational_solve(&dense_coboundary(&k, 1), &rhs).expect("2T is a rational coboundary");
    let fund = Chain::fundamental(&k).unwrap();
    let pairing = cup_product(&k, &Cochain::new(1, s), &t.to_rational()).unwrap().evaluate_int(&fund);
    assert_eq!(frac(&(pairing / BigRational::from_integer(2.into()))), q(1, 2));
}

fn spark_pair(k: &Arc<SimplicialComplex>, r: &mut impl Rng) -> (DiscreteSpark, DiscreteSpark) {
    let n = k.dimension();
    let d1 = r.gen_range(0..n);
    let d2 = r.gen_range(0..n - d1);
    (random_spark(k, d1, r).unwrap(), random_spark(k, d2, r).unwrap())
}

fn random_shift(s: &DiscreteSpark, r: &mut impl Rng) -> DiscreteSpark {
    let k = s.complex();
    let deg = s.degree();
    let b = if deg > 0 { random_rational(k, deg - 1, r) } else { Cochain::new(0, vec![]) };
    let sh = Cochain::from_i64(deg, &(0..k.count(deg)).map(|_| r.gen_range(-2i64..=2)).collect::<Vec<_>>());
    s.shifted(&b, &sh).unwrap()
}

proptest! {
    #![proptest_config(common::cases(32))]

    #[test]
    fn product_curvature(f in 0..FIXTURES.len(), seed in any::<u64>()) {
        let k = fixture(FIXTURES[f]);
        let mut r = rng(seed);
        let (s1, s2) = spark_pair(&k, &mut r);
        let p = star(&s1, &s2).unwrap();
        let cup_phi = cup_or_empty(&k, &s1.phi(), &s2.phi()).unwrap();
        let cup_r = cup_or_empty(&k, s1.r(), s2.r()).unwrap().to_rational();
        prop_assert_eq!(p.a().coboundary(&k), cup_phi.sub(&cup_r));
        prop_assert_eq!(p.phi(), cup_phi);
    }

    #[test]
    fn product_is_well_defined(f in 0..FIXTURES.len(), seed in any::<u64>()) {
        let k = fixture(FIXTURES[f]);
        let mut r = rng(seed);
        let (s1, s2) = spark_pair(&k, &mut r);
        let (t1, t2) = (random_shift(&s1, &mut r), random_shift(&s2, &mut r));
        let (p, q) = (star(&s1, &s2).unwrap(), star(&t1, &t2).unwrap());
        prop_assert!(equivalent(&p, &q).unwrap());
        prop_assert_eq!(p.d2().unwrap(), q.d2().unwrap());
        prop_assert!(equivalent(&p, &star_tilde(&s1, &s2).unwrap()).unwrap());
    }

    #[test]
    fn second_differential_is_multiplicative(f in 0..FIXTURES.len(), seed in any::<u64>()) {
        let k = fixture(FIXTURES[f]);
        let mut r = rng(seed);
        let (s1, s2) = spark_pair(&k, &mut r);
        let (t1, t2) = (random_shift(&s1, &mut r), random_shift(&s2, &mut r));
        let p = star(&t1, &t2).unwrap();
        if p.r().degree <= k.dimension() {
            prop_assert_eq!(p.d2().unwrap(), class_of(&k, &cup_product(&k, s1.r(), s2.r()).unwrap()).unwrap());
        }
    }

    #[test]
    fn holonomy_respects_equivalence(f in 0..FIXTURES.len(), seed in any::<u64>()) {
        let k = fixture(FIXTURES[f]);
        let mut r = rng(seed);
        let deg = r.gen_range(0..k.dimension());
        let s = random_spark(&k, deg, &mut r).unwrap();
        let t = random_shift(&s, &mut r);
        prop_assert!(equivalent(&s, &t).unwrap());
        for z in cycle_lattice_basis(&k, deg).unwrap() {
            prop_assert_eq!(s.holonomy(&z).unwrap(), t.holonomy(&z).unwrap());
        }
    }

    #[test]
    fn equivalence_is_an_equivalence_relation(f in 0..FIXTURES.len(), seed in any::<u64>()) {
        let k = fixture(FIXTURES[f]);
        let mut r = rng(seed);
        let deg = r.gen_range(0..k.dimension());
        let s = random_spark(&k, deg, &mut r).unwrap();
        let t = random_shift(&s, &mut r);
        let u = random_shift(&t, &mut r);
        prop_assert!(equivalent(&s, &s).unwrap());
        prop_assert!(equivalent(&t, &s).unwrap());
        prop_assert!(equivalent(&s, &u).unwrap());
        let other = random_spark(&k, deg, &mut r).unwrap();
        prop_assert_eq!(equivalent(&s, &other).unwrap(), equivalent(&other, &s).unwrap());
    }

    #[test]
    fn smooth_pairings_agree_for_both_formulas(f in 0..2usize, seed in any::<u64>()) {
        let k = fixture(["torus", "cp2"][f]);
        let mut r = rng(seed);
        let n = k.dimension();
        let d1 = r.gen_range(0..n);
        let s1 = DiscreteSpark::new(k.clone(), random_rational(&k, d1, &mut r), Cochain::zero(&k, d1 + 1)).unwrap();
        let s2 = DiscreteSpark::new(k.clone(), random_rational(&k, n - 1 - d1, &mut r), Cochain::zero(&k, n - d1)).unwrap();
        let fund = Chain::fundamental(&k).unwrap();
        prop_assert_eq!(duality_pair(&s1, &s2).unwrap(), star_tilde(&s1, &s2).unwrap().holonomy(&fund).unwrap());
    }

    #[test]
    fn cocycle_sparks_realize_their_class(f in 0..FIXTURES.len(), seed in any::<u64>()) {
        let k = fixture(FIXTURES[f]);
        let mut r = rng(seed);
        let deg = r.gen_range(1..=k.dimension());
        let c = random_cocycle(&k, deg, &mut r).unwrap();
        let s = spark_from_cocycle(&k, &c).unwrap();
        prop_assert_eq!(s.d2().unwrap(), class_of(&k, &c).unwrap());
        prop_assert!(s.phi().coboundary(&k).is_zero());
    }
}

#[test]
fn rational_witness_helper_agrees_with_cohomology() {
    // 2T is a coboundary but T is not.
    let k = fixture("rp3");
    let t = torsion_generator(&k, 2);
    let d = dense_coboundary(&k, 1);
    let ti: Vec<BigRational> = t.values.iter().map(|x| BigRational::from_integer(x.clone())).collect();
    // Over ℚ both are coboundaries; integrality is what distinguishes them.
    assert!(rational_solve(&d, &ti).is_some());
    assert!(!class_of(&k, &t).unwrap().is_zero());
    assert!(class_of(&k, &t.scale(&BigInt::from(2))).unwrap().is_zero());
    let _ = BigInt::zero();
}
