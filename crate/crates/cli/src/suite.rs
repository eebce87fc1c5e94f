//! Invariant checks shared by `verify` and the acceptance target.

use std::sync::Arc;

use dfchar::characters::{character_structure, dual_structure, verify_sequences, Check, SpaceData};
use dfchar::cohomology::{class_of, cohomology_z, cycle_lattice_basis, integral_primitive};
use dfchar::complex::{torus_grid, torus_grid_loops, Chain, Cochain, SimplicialComplex, Simplex};
use dfchar::hodge::{HodgeContext, EXACT_LIMIT};
use dfchar::lowdeg::gerbe::{random_gauge, random_integral_shift};
use dfchar::lowdeg::{
    circle_function_of_spark, fractional_gerbe, monopole, spark_of_circle_function, spark_of_connection, CircleFunction, Cover,
    PatchAssignment,
};
use dfchar::morse::{morse_complex, MorseMatching};
use dfchar::scalar::{frac, is_integral, rat, Field};
use dfchar::spark::{
    cup_or_empty, equivalent, linking_matrix, linking_with_witness, random_cocycle, random_rational, random_spark, star, star_tilde,
    torsion_order, DiscreteSpark,
};
use dfchar::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::report::RunReport;

/// A generator seeded from the run seed and a label, so that suites draw
/// independent streams.
pub fn stream(seed: u64, label: &str) -> ChaCha8Rng {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in label.bytes() {
        h = (h ^ b as u64).wrapping_mul(0x0100_0000_01b3);
    }
    ChaCha8Rng::seed_from_u64(seed ^ h)
}

fn tally(name: &str, ok: usize, total: usize, failure: Option<String>) -> Check {
    let detail = match failure {
        Some(f) => format!("{ok}/{total}; first failure: {f}"),
        None => format!("{ok}/{total}"),
    };
    Check::new(name, ok == total && total > 0, detail)
}

/// Counts trials that pass and remembers the first failure.
#[derive(Default)]
struct Tally {
    ok: usize,
    total: usize,
    failure: Option<String>,
}

impl Tally {
    fn record(&mut self, passed: bool, what: impl FnOnce() -> String) {
        self.total += 1;
        if passed {
            self.ok += 1;
        } else if self.failure.is_none() {
            self.failure = Some(what());
        }
    }

    fn check(self, name: &str) -> Check {
        tally(name, self.ok, self.total, self.failure)
    }
}

fn random_integral(k: &SimplicialComplex, deg: usize, rng: &mut impl Rng) -> Cochain<BigInt> {
    Cochain::from_i64(deg, &(0..k.count(deg)).map(|_| rng.gen_range(-2i64..=2)).collect::<Vec<_>>())
}

/// Constructive exactness witnesses in every degree from `-1` to `n`.
pub fn sequences(k: &Arc<SimplicialComplex>) -> Result<Vec<Check>> {
    let n = k.dimension() as i64;
    (-1..=n)
        .map(|d| {
            let rep = verify_sequences(k, d)?;
            let detail = match rep.first_failure() {
                Some(c) => format!("{}: {}", c.name, c.detail),
                None => format!("{} checks", rep.checks.len()),
            };
            Ok(Check::new(format!("exact sequences in degree {d}"), rep.passed(), detail))
        })
        .collect()
}

/// Dual structure in degree `k` against the character structure in degree
/// `n - k - 1`, for every `k`.
pub fn duality(data: &SpaceData) -> Result<Vec<Check>> {
    let n = data.dimension as i64;
    (-1..=n)
        .map(|k| {
            let dual = dual_structure(data, k)?;
            let ch = character_structure(data, n - k - 1)?;
            Ok(Check::new(
                format!("duality in degree {k}"),
                dual.structure_equal(&ch),
                format!("{} vs {}", dual.render(), ch.render()),
            ))
        })
        .collect()
}

/// Whether a pairing between `⊕ℤ/d_i` and `⊕ℤ/e_j` with the given matrix has
/// no nonzero element pairing trivially with everything, on either side.
pub fn pairing_nondegenerate(m: &[Vec<BigRational>], rows: &[BigInt], cols: &[BigInt]) -> bool {
    let side = |orders: &[BigInt], entry: &dyn Fn(usize, usize) -> BigRational, others: usize| -> bool {
        let orders: Vec<u64> = orders.iter().map(|d| u64::try_from(d).unwrap_or(u64::MAX)).collect();
        let size: u64 = orders.iter().product();
        if size > 1 << 16 {
            return false;
        }
        let mut x = vec![0u64; orders.len()];
        for _ in 1..size {
            for (xi, d) in x.iter_mut().zip(&orders) {
                *xi += 1;
                if *xi < *d {
                    break;
                }
                *xi = 0;
            }
            let pairs_trivially = (0..others).all(|j| {
                let s = x.iter().enumerate().fold(BigRational::zero(), |acc, (i, xi)| acc + entry(i, j) * rat(*xi as i64, 1));
                frac(&s).is_zero()
            });
            if pairs_trivially {
                return false;
            }
        }
        true
    };
    let order = |d: &[BigInt]| d.iter().fold(BigInt::one(), |a, b| a * b);
    order(rows) == order(cols)
        && side(rows, &|i, j| m[i][j].clone(), cols.len())
        && side(cols, &|j, i| m[i][j].clone(), rows.len())
}

/// The torsion linking matrix between `H^{k+1}` and `H^{n-k}`, its
/// nondegeneracy, and its independence of the primitive chosen for `m·T`.
pub fn linking(k: &SimplicialComplex, deg: usize, seed: u64) -> Result<(Vec<Vec<BigRational>>, Vec<Check>)> {
    let n = k.dimension();
    let m = linking_matrix(k, deg)?;
    let hu = cohomology_z(k, deg + 1)?;
    let hv = cohomology_z(k, n - deg)?;
    let rows = hu.structure().torsion;
    let cols = hv.structure().torsion;
    let mut checks = vec![Check::new(
        format!("linking nondegenerate in degree {deg}"),
        pairing_nondegenerate(&m, &rows, &cols),
        format!("{} × {} matrix", rows.len(), cols.len()),
    )];
    let mut rng = stream(seed, "linking");
    let mut t = Tally::default();
    for (i, tu) in hu.torsion_generators().iter().enumerate() {
        let order = torsion_order(k, tu)?;
        let s0 = integral_primitive(k, &tu.scale(&order)).ok_or(Error::NotTorsion)?;
        for (j, tv) in hv.torsion_generators().iter().enumerate() {
            let tv_shift = if tv.degree > 0 { tv.add(&random_integral(k, tv.degree - 1, &mut rng).coboundary(k)) } else { tv.clone() };
            let mut witnesses = vec![s0.clone()];
            if s0.degree > 0 {
                witnesses.push(s0.add(&random_integral(k, s0.degree - 1, &mut rng).coboundary(k)));
            } else {
                witnesses.push(s0.clone());
            }
            witnesses.push(s0.add(&random_cocycle(k, s0.degree, &mut rng)?));
            for (w, s) in witnesses.iter().enumerate() {
                for v in [tv, &tv_shift] {
                    let value = linking_with_witness(k, tu, &order, s, v)?;
                    t.record(value == m[i][j], || format!("entry ({i},{j}) witness {w}: {value} vs {}", m[i][j]));
                }
            }
        }
    }
    checks.push(t.check(&format!("linking witness independence in degree {deg}")));
    Ok((m, checks))
}

fn random_degrees(n: usize, rng: &mut impl Rng) -> (usize, usize) {
    let k1 = rng.gen_range(0..n);
    let k2 = rng.gen_range(0..n - k1);
    (k1, k2)
}

fn random_shift(s: &DiscreteSpark, rng: &mut impl Rng) -> Result<DiscreteSpark> {
    let k = s.complex();
    let deg = s.degree();
    let b = if deg > 0 { random_rational(k, deg - 1, rng) } else { Cochain::new(0, Vec::new()) };
    s.shifted(&b, &random_integral(k, deg, rng))
}

/// Product identities for random spark pairs: curvature and `δa*` of the
/// product, `δ₂` multiplicativity on shifted representatives, independence
/// of representatives, and agreement of the two product formulas.
pub fn star_identities(k: &Arc<SimplicialComplex>, trials: usize, seed: u64) -> Result<Vec<Check>> {
    let n = k.dimension();
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut rng = stream(seed, "star");
    let mut curv = Tally::default();
    let mut da = Tally::default();
    let mut d2 = Tally::default();
    let mut rep = Tally::default();
    let mut tilde = Tally::default();
    for trial in 0..trials {
        let (k1, k2) = random_degrees(n, &mut rng);
        let s1 = random_spark(k, k1, &mut rng)?;
        let s2 = random_spark(k, k2, &mut rng)?;
        let p = star(&s1, &s2)?;
        let what = || format!("trial {trial}, degrees ({k1},{k2})");
        let phi_psi = cup_or_empty(k, &s1.phi(), &s2.phi())?;
        curv.record(p.phi() == phi_psi, what);
        let rs = cup_or_empty(k, &s1.r().to_rational(), &s2.r().to_rational())?;
        da.record(p.a().coboundary(k) == phi_psi.sub(&rs), what);
        let t1 = random_shift(&s1, &mut rng)?;
        let t2 = random_shift(&s2, &mut rng)?;
        let q = star(&t1, &t2)?;
        let shifted_class = if q.r().degree > n { p.d2()? } else { class_of(k, &cup_or_empty(k, t1.r(), t2.r())?)? };
        d2.record(p.d2()? == shifted_class && q.d2()? == p.d2()?, what);
        rep.record(equivalent(&p, &q)?, what);
        tilde.record(equivalent(&star_tilde(&s1, &s2)?, &p)?, what);
    }
    Ok(vec![
        curv.check("product curvature is φ∪ψ"),
        da.check("δ of product is φ∪ψ - R∪S"),
        d2.check("δ₂ of product is the cup of classes"),
        rep.check("product independent of representatives"),
        tilde.check("second product formula is equivalent"),
    ])
}

/// Random equivalence perturbations `(a + δb - S, R + δS)`: the oracle
/// accepts them and holonomy agrees on every lattice cycle.
pub fn holonomy_invariance(k: &Arc<SimplicialComplex>, trials: usize, seed: u64) -> Result<Vec<Check>> {
    let n = k.dimension();
    let mut rng = stream(seed, "holonomy");
    let bases: Vec<Vec<Chain<BigInt>>> = (0..=n).map(|d| cycle_lattice_basis(k, d)).collect::<Result<_>>()?;
    let free: Vec<Vec<Cochain<BigInt>>> =
        (0..=n).map(|d| Ok(cohomology_z(k, d)?.free_generators().to_vec())).collect::<Result<_>>()?;
    let mut eq = Tally::default();
    let mut hol = Tally::default();
    let mut control = Tally::default();
    for trial in 0..trials {
        let deg = rng.gen_range(0..=n);
        let s = random_spark(k, deg, &mut rng)?;
        let t = random_shift(&s, &mut rng)?;
        eq.record(equivalent(&s, &t)?, || format!("trial {trial}, degree {deg}"));
        let mut same = true;
        for z in &bases[deg] {
            same &= s.holonomy(z)? == t.holonomy(z)?;
        }
        hol.record(same, || format!("trial {trial}, degree {deg}"));
        if !free[deg].is_empty() {
            let g = &free[deg][rng.gen_range(0..free[deg].len())];
            let half = DiscreteSpark::new(k.clone(), t.a().add(&g.to_rational().scale(&rat(1, 2))), t.r().clone())?;
            let mut same = true;
            for z in &bases[deg] {
                same &= s.holonomy(z)? == half.holonomy(z)?;
            }
            control.record(equivalent(&s, &half)? == same, || format!("trial {trial}, degree {deg}"));
        }
    }
    let mut checks = vec![eq.check("shifted sparks are equivalent"), hol.check("holonomy agrees on lattice cycles")];
    if control.total > 0 {
        checks.push(control.check("half-period changes are equivalent exactly when holonomy agrees"));
    }
    Ok(checks)
}

fn hodge_pass<F: Field>(
    ctx: &HodgeContext<F>,
    label: &str,
    samples: usize,
    rng: &mut impl Rng,
    report: &mut RunReport,
) -> Result<()> {
    let k = ctx.complex().clone();
    let n = k.dimension();
    for deg in 0..=n {
        for _ in 0..samples {
            let x = random_rational(&k, deg, rng).map(|q| F::from_rational(q));
            report.residual(&format!("decomposition {label}"), ctx.decomposition_residual(&x)?);
            if deg >= 1 {
                let r = random_cocycle(&k, deg, rng)?;
                report.residual(&format!("spark equation {label}"), ctx.spark_residual(&r)?);
            }
            if deg < n {
                let g = random_integral(&k, deg, rng);
                report.residual(&format!("primitive identity {label}"), ctx.primitive_identity_residual(&g)?);
            }
        }
    }
    Ok(())
}

/// Hodge decomposition, spark equation and primitive identity residuals:
/// zero with the rational solver below [`EXACT_LIMIT`] simplices, at most
/// `tol` with the iterative solver.
pub fn hodge_residuals(k: &Arc<SimplicialComplex>, samples: usize, tol: f64, seed: u64, report: &mut RunReport) -> Result<()> {
    let mut rng = stream(seed, "hodge");
    let float = HodgeContext::<f64>::new(k.clone(), None, tol)?;
    hodge_pass(&float, "iterative", samples, &mut rng, report)?;
    let names = ["decomposition", "spark equation", "primitive identity"];
    for name in names {
        if let Some(&r) = report.residuals.get(&format!("{name} iterative")) {
            report.check(Check::new(format!("{name} residual (iterative)"), r <= tol, format!("{r:e} ≤ {tol:e}")));
        }
    }
    if k.total_simplices() < EXACT_LIMIT {
        let exact = HodgeContext::<BigRational>::unit(k.clone());
        hodge_pass(&exact, "exact", samples, &mut rng, report)?;
        for name in names {
            if let Some(&r) = report.residuals.get(&format!("{name} exact")) {
                report.check(Check::new(format!("{name} residual (exact)"), r == 0.0, format!("{r:e}")));
            }
        }
    }
    Ok(())
}

/// A grid chain from vertex 0 to `q` through random intermediate vertices,
/// plus random multiples of the two grid loops.
fn random_grid_path(k: &SimplicialComplex, q: usize, loops: &[Vec<i64>; 2], rng: &mut impl Rng) -> Result<Vec<i64>> {
    let mut stops = vec![0];
    for _ in 0..rng.gen_range(1..=3) {
        stops.push(rng.gen_range(0..k.vertex_count()));
    }
    stops.push(q);
    let mut chain = vec![0i64; k.count(1)];
    for w in stops.windows(2) {
        for (c, p) in chain.iter_mut().zip(k.path_chain(w[0], w[1])?) {
            *c += p;
        }
    }
    for l in loops {
        let m = rng.gen_range(-2i64..=2);
        for (c, x) in chain.iter_mut().zip(l) {
            *c += m * x;
        }
    }
    Ok(chain)
}

/// Abel–Jacobi checks on the `m × m` torus grid with the horizontal and
/// vertical loop basis, from vertex 0 to vertex `q`.
pub fn abel_jacobi_grid(m: usize, q: usize, expected: &[BigRational], paths: usize, seed: u64, report: &mut RunReport) -> Result<()> {
    let k = torus_grid(m).into_arc();
    let loops = torus_grid_loops(&k, m)?;
    let basis: Vec<Chain<BigInt>> = loops.iter().map(|l| Chain::from_i64(1, l)).collect();
    let ctx = HodgeContext::<BigRational>::unit(k.clone()).with_cycle_basis(1, basis.clone())?;
    let aj = ctx.point_aj(0, q)?;
    report.result("point_aj", serde_json::json!(aj.iter().map(dfchar::scalar::format_rational).collect::<Vec<_>>()));
    report.check(Check::new(
        "point Abel–Jacobi value",
        aj == expected,
        format!("{:?}", aj.iter().map(dfchar::scalar::format_rational).collect::<Vec<_>>()),
    ));
    let float = HodgeContext::<f64>::new(k.clone(), None, dfchar::hodge::DEFAULT_TOL)?.with_cycle_basis(1, basis.clone())?;
    let af = float.point_aj(0, q)?;
    let err = af.iter().zip(expected).map(|(x, e)| (x - dfchar::scalar::Ring::to_f64_lossy(e)).abs()).fold(0.0, f64::max);
    report.residual("point Abel–Jacobi iterative", err);
    report.check(Check::new("point Abel–Jacobi value (iterative)", err <= dfchar::hodge::DEFAULT_TOL, format!("{err:e}")));
    let mut rng = stream(seed, "abel-jacobi");
    let mut t = Tally::default();
    for i in 0..paths {
        let path = Chain::from_i64(1, &random_grid_path(&k, q, &loops, &mut rng)?);
        let v = ctx.abel_jacobi(&path)?;
        t.record(v == aj, || format!("path {i}"));
    }
    report.check(t.check("Abel–Jacobi path independence"));
    let lattice = ctx.harmonic_lattice(1)?;
    let integral_periods = |c: &Chain<BigInt>| lattice.iter().all(|h| is_integral(&h.evaluate_int(c)));
    let gamma = Chain::from_i64(1, &k.path_chain(0, q)?);
    let mut cases: Vec<(String, Chain<BigInt>, Option<bool>)> = vec![
        ("Γ".into(), gamma.clone(), None),
        ("3Γ".into(), gamma.scale(&BigInt::from(3)), None),
        ("x loop".into(), basis[0].clone(), Some(true)),
        ("y loop".into(), basis[1].clone(), Some(true)),
    ];
    cases[0].2 = Some(expected.iter().all(|e| e.is_integer()));
    cases[1].2 = Some(expected.iter().all(|e| (e * rat(3, 1)).is_integer()));
    for i in 0..paths {
        let c = Chain::from_i64(1, &random_grid_path(&k, rng.gen_range(0..k.vertex_count()), &loops, &mut rng)?);
        cases.push((format!("random chain {i}"), c, None));
    }
    let mut t = Tally::default();
    for (name, c, want) in &cases {
        let p = ctx.is_principal(c)?;
        t.record(p == integral_periods(c) && want.map_or(true, |w| w == p), || format!("{name}: principal {p}"));
    }
    report.check(t.check("principality matches integral periods"));
    Ok(())
}

/// A hand-written acyclic matching for the named fixtures.
pub fn hand_matching(name: &str, k: Arc<SimplicialComplex>) -> Result<MorseMatching> {
    let pairs: Vec<(Simplex, Simplex)> = match name {
        "circle" => vec![(vec![1], vec![0, 1]), (vec![2], vec![1, 2])],
        "sphere2" => vec![
            (vec![1], vec![0, 1]),
            (vec![2], vec![0, 2]),
            (vec![3], vec![0, 3]),
            (vec![1, 2], vec![0, 1, 2]),
            (vec![1, 3], vec![0, 1, 3]),
            (vec![2, 3], vec![1, 2, 3]),
        ],
        "torus" => (1..7).map(|v| (vec![v], vec![0, v])).collect(),
        "rp2" => (1..6).map(|v| (vec![v], vec![0, v])).collect(),
        other => return Err(Error::UnknownSpace(format!("no hand matching for {other}"))),
    };
    MorseMatching::new(k, &pairs)
}

/// The Morse identity in every degree, the Morse complex, its homology,
/// and idempotence of `P`.
pub fn morse_checks(m: &MorseMatching, label: &str) -> Result<Vec<Check>> {
    let k = m.complex();
    let n = k.dimension();
    let degrees: Vec<usize> = (0..=n).filter(|&d| !m.identity_holds(d)).collect();
    let mut checks =
        vec![Check::new(format!("{label}: δT + Tδ = 1 - P"), degrees.is_empty(), format!("failing degrees {degrees:?}"))];
    let mc = morse_complex(m);
    checks.push(Check::new(format!("{label}: ∂² = 0 on critical cells"), mc.is_chain_complex(), format!("critical {:?}", m.critical_counts())));
    let hom: Vec<String> = (0..=n).map(|d| mc.homology(d).render()).collect();
    checks.push(Check::new(format!("{label}: Morse homology"), mc.matches_homology(k)?, hom.join(", ")));
    let idem = (0..=n).all(|d| {
        let p = m.projection_matrix(d);
        p.mul(&p) == p
    });
    checks.push(Check::new(format!("{label}: P² = P"), idem, String::new()));
    Ok(checks)
}

fn random_turns(len: usize, rng: &mut impl Rng) -> Vec<BigRational> {
    (0..len).map(|_| rat(rng.gen_range(-20..=20), 2 * rng.gen_range(1..=6) + 1)).collect()
}

/// Circle-function round trip on a circle.
pub fn circle_round_trip(m: usize, trials: usize, seed: u64) -> Result<Check> {
    let k = dfchar::complex::circle(m).into_arc();
    let mut rng = stream(seed, "circle");
    let mut t = Tally::default();
    for i in 0..trials {
        let f = CircleFunction::new(k.clone(), random_turns(m, &mut rng))?;
        let back = circle_function_of_spark(&spark_of_circle_function(&f)?)?;
        t.record(back == f, || format!("function {i}"));
    }
    Ok(t.check("circle function round trip"))
}

/// Monopole of charge one on the sphere: Chern number and equivalence of
/// sparks built from random sections.
pub fn monopole_sections(trials: usize, seed: u64) -> Result<Vec<Check>> {
    let k = dfchar::complex::sphere(2).into_arc();
    let c = monopole(k.clone(), 1)?;
    let chern = c.chern_number()?;
    let mut checks = vec![Check::new("monopole Chern number", chern == BigInt::one(), chern.to_string())];
    let mut rng = stream(seed, "monopole");
    let mut t = Tally::default();
    for i in 0..trials {
        let p = random_turns(k.vertex_count(), &mut rng);
        let q = random_turns(k.vertex_count(), &mut rng);
        let sp = spark_of_connection(&c, Some(&p))?;
        let sq = spark_of_connection(&c, Some(&q))?;
        t.record(equivalent(&sp, &sq)?, || format!("sections {i}"));
    }
    checks.push(t.check("sparks from different sections are equivalent"));
    Ok(checks)
}

/// Surface holonomy of the gerbe with value `1/3` on the `m × m` torus
/// grid, under random gauges, integral shifts and patch assignments.
pub fn gerbe_holonomy(m: usize, trials: usize, seed: u64, report: &mut RunReport) -> Result<()> {
    let k = torus_grid(m).into_arc();
    let cover = Arc::new(Cover::vertex_stars(k.clone()));
    let third = rat(1, 3);
    let g = fractional_gerbe(cover.clone(), &third)?;
    let h = g.holonomy()?;
    report.result("gerbe_holonomy", serde_json::json!(dfchar::scalar::format_rational(&h)));
    report.check(Check::new("gerbe holonomy is 1/3", h == third, dfchar::scalar::format_rational(&h)));
    let defects = cover.acyclicity_defects();
    report.result("cover_acyclicity_defects", serde_json::json!(defects.len()));
    let z = Chain::fundamental(&k).ok_or(Error::Unoriented)?;
    let mut rng = stream(seed, "gerbe");
    let mut t = Tally::default();
    let mut eq = Tally::default();
    for i in 0..trials {
        let (b0, b1) = random_gauge(&cover, &mut rng);
        let s = random_integral_shift(&cover, &mut rng);
        let gauged = g.gauge(&b0, &b1, Some(&s))?;
        let asg = PatchAssignment::random(&cover, &mut rng)?;
        let v = gauged.surface_holonomy(&z, Some(&asg))?;
        t.record(v == third, || format!("gauge {i}: {}", dfchar::scalar::format_rational(&v)));
        eq.record(gauged.gauge_equivalent(&g)?, || format!("gauge {i}"));
    }
    report.check(t.check("gerbe holonomy is gauge invariant"));
    report.check(eq.check("gauged gerbes are gauge equivalent"));
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairing_detects_degenerate_matrix() {
        let d = [BigInt::from(2)];
        assert!(pairing_nondegenerate(&[vec![rat(1, 2)]], &d, &d));
        assert!(!pairing_nondegenerate(&[vec![rat(0, 1)]], &d, &d));
        let d4 = [BigInt::from(4)];
        assert!(!pairing_nondegenerate(&[vec![rat(1, 2)]], &d4, &d4));
        assert!(pairing_nondegenerate(&[vec![rat(3, 4)]], &d4, &d4));
    }

    #[test]
    fn streams_differ_by_label() {
        let a: u64 = stream(0, "a").gen();
        let b: u64 = stream(0, "b").gen();
        assert_ne!(a, b);
        assert_eq!(a, stream(0, "a").gen::<u64>());
    }
}
