mod common;

use common::{dense_boundary, fixture, rational_rank, FIXTURES, ORIENTED};
use dfchar::characters::{
    character_structure, character_table, dual_structure, q_group, verify_sequences, verify_structure, SpaceData,
};
use dfchar::cohomology::GroupStructure;
use dfchar::complex::{barycentric_subdivide, point, torus_surface};
use num_bigint::BigInt;

fn data(name: &str) -> SpaceData {
    SpaceData::from_complex(name, &fixture(name))
}

fn two() -> Vec<BigInt> {
    vec![BigInt::from(2)]
}

#[test]
fn surfaces_in_degree_one() {
    for g in 1..=3 {
        let k = torus_surface(g);
        let c = character_structure(&SpaceData::from_complex("surface", &k), 1).unwrap();
        assert_eq!(c.torus_rank, 2 * g);
        assert_eq!(c.discrete, GroupStructure::free(1));
        assert!(c.exact_dim > 0);
    }
}

#[test]
fn projective_examples() {
    let c = character_structure(&data("cp2"), 2).unwrap();
    assert_eq!((c.torus_rank, c.discrete.clone()), (1, GroupStructure::trivial()));
    let c = character_structure(&data("rp3"), 1).unwrap();
    assert_eq!((c.torus_rank, c.discrete.free_rank, c.discrete.torsion.clone()), (0, 0, two()));
}

#[test]
fn dual_examples() {
    let t = data("torus");
    let d = dual_structure(&t, 0).unwrap();
    assert!(d.structure_equal(&character_structure(&t, 1).unwrap()));
    assert_eq!((d.torus_rank, d.discrete.clone()), (2, GroupStructure::free(1)));
    let r = data("rp3");
    let d = dual_structure(&r, 1).unwrap();
    assert!(d.structure_equal(&character_structure(&r, 1).unwrap()));
    assert_eq!(d.discrete.torsion, two());
}

#[test]
fn top_degree_and_point() {
    for name in ORIENTED {
        let d = data(name);
        let c = character_structure(&d, d.dimension as i64).unwrap();
        assert_eq!((c.torus_rank, c.exact_dim, c.discrete.clone()), (1, 0, GroupStructure::trivial()), "{name}");
    }
    let p = SpaceData::from_complex("point", &point());
    let rows = character_table(&p).rows;
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0].discrete, GroupStructure::free(1));
    assert_eq!((rows[1].torus_rank, rows[1].exact_dim), (1, 0));
}

#[test]
fn exact_dimension_against_rank_oracle() {
    for name in FIXTURES {
        let k = fixture(name);
        let d = data(name);
        for deg in 0..k.dimension() {
            // δ_deg is the transpose of ∂_{deg+1}.
            let rank = rational_rank(&dense_boundary(&k, deg + 1));
            assert_eq!(character_structure(&d, deg as i64).unwrap().exact_dim, rank, "{name} degree {deg}");
        }
    }
}

#[test]
fn duality_on_closed_oriented_fixtures() {
    for name in ORIENTED.iter().copied().chain(["genus2", "lens5_2"]) {
        let d = data(name);
        let n = d.dimension as i64;
        for k in -1..=n {
            let dual = dual_structure(&d, k).unwrap();
            let ch = character_structure(&d, n - k - 1).unwrap();
            assert!(dual.structure_equal(&ch), "{name} degree {k}: {} vs {}", dual.render(), ch.render());
        }
    }
}

#[test]
fn q_group_lattice_rank() {
    for name in FIXTURES {
        let d = data(name);
        for k in -1..d.dimension as i64 {
            let q = q_group(&d, k).unwrap();
            let h = d.group(k + 1);
            assert_eq!((q.lattice_rank, q.torsion.clone()), (h.free_rank, h.torsion.clone()), "{name} degree {k}");
        }
    }
}

#[test]
fn sequences_are_exact() {
    for name in FIXTURES {
        let k = fixture(name);
        for deg in -1..=k.dimension() as i64 {
            let rep = verify_sequences(&k, deg).unwrap();
            assert!(rep.passed(), "{name} degree {deg}: {:?}", rep.first_failure());
        }
    }
}

#[test]
fn kunneth_product_structure() {
    let cp2 = data("cp2");
    let prod = SpaceData::kunneth(&cp2, &cp2);
    let c = character_structure(&prod, 3).unwrap();
    assert_eq!(c.discrete, GroupStructure::free(3));
    for k in -1..=prod.dimension as i64 {
        assert!(verify_structure(&prod, k).unwrap().passed(), "degree {k}");
    }
}

#[test]
fn subdivision_keeps_structure_and_grows_exact_part() {
    for name in ["rp2", "torus", "sphere2"] {
        let k = fixture(name);
        let (sd, _) = barycentric_subdivide(&k);
        let (coarse, fine) = (data(name), SpaceData::from_complex(name, &sd));
        for deg in -1..=k.dimension() as i64 {
            let (a, b) = (character_structure(&coarse, deg).unwrap(), character_structure(&fine, deg).unwrap());
            assert_eq!((a.torus_rank, a.discrete.clone()), (b.torus_rank, b.discrete.clone()), "{name} degree {deg}");
            assert!(b.exact_dim >= a.exact_dim);
        }
    }
}

#[test]
fn table_render() {
    let t = character_table(&data("rp3"));
    let rendered: Vec<String> = t.rows.iter().map(|r| r.render()).collect();
    assert_eq!(rendered[0], "ℤ");
    assert!(rendered[2].starts_with("ℤ_2×dℰ^1["));
    assert_eq!(rendered.last().unwrap(), "S¹");
}
