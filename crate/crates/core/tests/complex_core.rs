mod common;

use common::{dense_boundary, fixture, q, rational_rank, rng, FIXTURES, ORIENTED};
use dfchar::cohomology::{betti_numbers, cohomology_z, homology_data};
use dfchar::complex::{
    barycentric_subdivide, cap_product, circle, cup_product, poincare_dual, rp2, sphere, torus_grid, torus_grid_loops,
    torus_surface, Chain, Cochain, SimplicialMap,
};
use dfchar::spark::{cup_or_empty, random_cocycle, random_rational};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use rand::Rng;

#[test]
fn boundary_of_boundary_vanishes_everywhere() {
    for name in FIXTURES.iter().copied().chain(["genus2", "lens5_2", "grid4", "circle"]) {
        let k = fixture(name);
        for d in 2..=k.dimension() {
            let (outer, inner) = (dense_boundary(&k, d - 1), dense_boundary(&k, d));
            for (i, row) in outer.iter().enumerate() {
                for j in 0..k.count(d) {
                    let s: BigInt = row.iter().zip(&inner).map(|(a, r)| a * &r[j]).sum();
                    assert!(s.is_zero(), "{name}: ∂∂ entry ({i},{j}) in degree {d}");
                }
            }
        }
    }
}

#[test]
fn projective_plane_boundary_has_full_column_rank() {
    let k = rp2();
    let m = dense_boundary(&k, 2);
    assert_eq!(k.count(2), 10);
    assert_eq!(rational_rank(&m), 10);
}

#[test]
fn fixture_betti_numbers() {
    assert_eq!(betti_numbers(&fixture("cp2")), vec![1, 0, 1, 0, 1]);
    assert_eq!(fixture("cp2").vertex_count(), 9);
    assert_eq!(betti_numbers(&torus_surface(1)), vec![1, 2, 1]);
    assert_eq!(betti_numbers(&torus_grid(3)), vec![1, 2, 1]);
}

#[test]
fn subdivided_tetrahedron_boundary() {
    let k = sphere(2).into_arc();
    let (sd, transfer) = barycentric_subdivide(&k);
    assert_eq!(sd.count(2), 24);
    assert_eq!(betti_numbers(&sd), betti_numbers(&k));
    assert!(transfer.commutes_with_boundary());
}

#[test]
fn torus_cup_form_is_unimodular() {
    let k = torus_grid(3);
    let h1 = cohomology_z(&k, 1).unwrap();
    let (a, b) = (&h1.free_generators()[0], &h1.free_generators()[1]);
    let fund = Chain::fundamental(&k).unwrap();
    let ab = cup_product(&k, a, b).unwrap().evaluate(&fund);
    let ba = cup_product(&k, b, a).unwrap().evaluate(&fund);
    assert_eq!(ab.abs(), BigInt::one());
    assert_eq!(ab, -ba);
}

#[test]
fn projective_plane_square_of_generator() {
    let k = fixture("cp2");
    let h2 = cohomology_z(&k, 2).unwrap();
    let g = &h2.free_generators()[0];
    let fund = Chain::fundamental(&k).unwrap();
    assert_eq!(cup_product(&k, g, g).unwrap().evaluate(&fund).abs(), BigInt::one());
}

#[test]
fn dual_of_a_point_on_the_triangle() {
    let k = circle(3);
    let u = poincare_dual(&k, &Chain::from_i64(0, &[1, 0, 0])).unwrap();
    assert!(u.coboundary(&k).is_zero());
    assert_eq!(u.evaluate(&Chain::fundamental(&k).unwrap()), BigInt::one());
}

#[test]
fn dual_of_the_meridian() {
    let m = 3;
    let k = torus_grid(m);
    let [x, y] = torus_grid_loops(&k, m).unwrap();
    let (x, y) = (Chain::from_i64(1, &x), Chain::from_i64(1, &y));
    let u = poincare_dual(&k, &x).unwrap();
    assert!(u.coboundary(&k).is_zero());
    assert_eq!(u.evaluate(&x), BigInt::zero());
    assert_eq!(u.evaluate(&y).abs(), BigInt::one());
}

#[test]
fn doubling_map_commutes_with_boundary() {
    let hexagon = circle(6).into_arc();
    let triangle = circle(3).into_arc();
    let f = SimplicialMap::new(hexagon.clone(), triangle, (0..6).map(|v| v % 3).collect()).unwrap();
    assert!(f.transfer().commutes_with_boundary());
    let fund = Chain::fundamental(&hexagon).unwrap();
    let pushed = f.push_chain(&fund);
    assert!(pushed.values.iter().all(|v| v.abs() == BigInt::from(2)));
}

fn leibniz_holds(name: &str, seed: u64) -> Result<(), TestCaseError> {
    let k = fixture(name);
    let mut r = rng(seed);
    let n = k.dimension();
    let p = r.gen_range(0..n);
    let qd = r.gen_range(0..n - p);
    let u = random_rational(&k, p, &mut r);
    let v = random_rational(&k, qd, &mut r);
    let lhs = cup_product(&k, &u, &v).unwrap().coboundary(&k);
    let sign = if p % 2 == 0 { BigRational::one() } else { -BigRational::one() };
    let rhs = cup_or_empty(&k, &u.coboundary(&k), &v)
        .unwrap()
        .add(&cup_or_empty(&k, &u, &v.coboundary(&k)).unwrap().scale(&sign));
    prop_assert_eq!(lhs, rhs, "{} degrees {} {}", name, p, qd);
    Ok(())
}

fn graded_symmetry_holds(name: &str, seed: u64) -> Result<(), TestCaseError> {
    let k = fixture(name);
    let mut r = rng(seed);
    let n = k.dimension();
    let p = r.gen_range(0..=n);
    let u = random_cocycle(&k, p, &mut r).unwrap();
    let v = random_cocycle(&k, n - p, &mut r).unwrap();
    let fund = Chain::fundamental(&k).unwrap();
    let uv = cup_product(&k, &u, &v).unwrap().evaluate(&fund);
    let vu = cup_product(&k, &v, &u).unwrap().evaluate(&fund);
    let sign = if (p * (n - p)) % 2 == 0 { 1 } else { -1 };
    prop_assert_eq!(uv, vu * sign);
    Ok(())
}

fn dual_then_cap_holds(name: &str, seed: u64) -> Result<(), TestCaseError> {
    let k = fixture(name);
    let mut r = rng(seed);
    let n = k.dimension();
    let deg = r.gen_range(0..=n);
    let hd = homology_data(&k, deg).unwrap();
    let mut z = vec![BigInt::zero(); k.count(deg)];
    for basis in &hd.kernel {
        let c = BigInt::from(r.gen_range(-2i64..=2));
        for (zi, b) in z.iter_mut().zip(basis) {
            *zi += &c * b;
        }
    }
    let z = Chain::new(deg, z);
    let u = poincare_dual(&k, &z).unwrap();
    let back = cap_product(&k, &u, &Chain::fundamental(&k).unwrap()).unwrap();
    prop_assert_eq!(hd.coordinates(&back.values), hd.coordinates(&z.values));
    Ok(())
}

proptest! {
    #![proptest_config(common::cases(64))]

    #[test]
    fn coboundary_squares_to_zero(f in 0..FIXTURES.len(), seed in any::<u64>()) {
        let k = fixture(FIXTURES[f]);
        let mut r = rng(seed);
        let deg = r.gen_range(0..k.dimension().saturating_sub(1).max(1));
        let u = random_rational(&k, deg, &mut r);
        let dd = u.coboundary(&k).coboundary(&k);
        prop_assert!(dd.is_zero());
    }

    #[test]
    fn leibniz(f in 0..FIXTURES.len(), seed in any::<u64>()) {
        leibniz_holds(FIXTURES[f], seed)?;
    }

    #[test]
    fn evaluated_cup_is_graded_symmetric(f in 0..ORIENTED.len(), seed in any::<u64>()) {
        graded_symmetry_holds(ORIENTED[f], seed)?;
    }

    #[test]
    fn cap_inverts_poincare_duality(f in 0..ORIENTED.len(), seed in any::<u64>()) {
        dual_then_cap_holds(ORIENTED[f], seed)?;
    }

    #[test]
    fn pushforward_commutes_with_boundary(values in prop::collection::vec(-5i64..=5, 6)) {
        let hexagon = circle(6).into_arc();
        let f = SimplicialMap::new(hexagon.clone(), circle(3).into_arc(), (0..6).map(|v| v % 3).collect()).unwrap();
        let c: Chain<BigInt> = Chain::from_i64(1, &values);
        prop_assert_eq!(f.push_chain(&c.boundary(&hexagon)), f.push_chain(&c).boundary(&f.transfer().target));
    }

    #[test]
    fn pullback_commutes_with_coboundary(nums in prop::collection::vec(-9i64..=9, 3)) {
        let hexagon = circle(6).into_arc();
        let triangle = circle(3).into_arc();
        let f = SimplicialMap::new(hexagon.clone(), triangle.clone(), (0..6).map(|v| v % 3).collect()).unwrap();
        let u = Cochain::new(0, nums.iter().map(|&n| q(n, 7)).collect());
        prop_assert_eq!(f.pull_cochain(&u.coboundary(&triangle)), f.pull_cochain(&u).coboundary(&hexagon));
    }
}

#[test]
fn leibniz_on_two_hundred_pairs_per_fixture() {
    for name in FIXTURES {
        for seed in 0..200 {
            leibniz_holds(name, seed).unwrap();
        }
    }
}
