//! Combinatorial Hodge theory for a diagonal inner product on cochains:
//! harmonic projection `H`, Green operator `G`, Hodge sparks
//! `σ(R) = -δ*G(R)`, integral-period harmonic lattices and Abel–Jacobi
//! periods.
//!
//! With `⟨x, y⟩_k = Σ w_k(σ) x(σ) y(σ)` the adjoint of `δ_k` is
//! `δ*_k = W_k⁻¹ δ_kᵀ W_{k+1}` and `Δ_k = δ*_k δ_k + δ_{k-1} δ*_{k-1}`.
//! The harmonic basis is always computed exactly; [`HodgeContext`] is
//! generic over the field used for `G` (exact elimination for
//! `BigRational`, deflated conjugate gradients for `f64`).

use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Map, Value};

use crate::cohomology::{cohomology_data, homology_data};
use crate::complex::{Chain, Cochain, SimplicialComplex};
use crate::error::{Error, Result};
use crate::linalg::{conjugate_gradient, integer_kernel, rank, smith_normal_form, DenseMatrix, Lu, PadicSolver, SparseMatrix};
use crate::scalar::{format_rational, parse_rational, rationalize, Field, Ring};
use crate::spark::DiscreteSpark;

/// Largest cochain space handled by the exact Green solver.
pub const EXACT_LIMIT: usize = 2000;
pub const DEFAULT_TOL: f64 = 1e-10;

/// Positive weights per simplex, indexed by dimension.
pub type Weights = Vec<Vec<BigRational>>;

pub fn unit_weights(k: &SimplicialComplex) -> Weights {
    (0..=k.dimension()).map(|d| vec![BigRational::one(); k.count(d)]).collect()
}

/// Parses `{"k": [w, ...]}`; missing dimensions default to 1.
pub fn weights_from_json(k: &SimplicialComplex, doc: &Value) -> Result<Weights> {
    let obj = doc.as_object().ok_or_else(|| Error::Parse("weights document must be an object".into()))?;
    let mut w = unit_weights(k);
    for (key, list) in obj {
        let d: usize = key.parse().map_err(|_| Error::Parse(format!("bad dimension key {key:?}")))?;
        if d > k.dimension() {
            return Err(Error::InvalidWeights(format!("dimension {d} exceeds the complex")));
        }
        let vals = list.as_array().ok_or_else(|| Error::Parse("weights must be an array".into()))?;
        w[d] = vals
            .iter()
            .map(|v| match v {
                Value::String(s) => parse_rational(s),
                Value::Number(n) if n.is_i64() => Ok(BigRational::from_integer(n.as_i64().unwrap().into())),
                Value::Number(n) => Ok(rationalize(n.as_f64().unwrap_or(0.0), 1_000_000)),
                _ => Err(Error::Parse("weight must be a number or \"p/q\"".into())),
            })
            .collect::<Result<_>>()?;
    }
    validate_weights(k, &w)?;
    Ok(w)
}

pub fn weights_to_json(w: &Weights) -> Value {
    let mut m = Map::new();
    for (d, ws) in w.iter().enumerate() {
        m.insert(d.to_string(), json!(ws.iter().map(format_rational).collect::<Vec<_>>()));
    }
    Value::Object(m)
}

fn validate_weights(k: &SimplicialComplex, w: &Weights) -> Result<()> {
    if w.len() != k.dimension() + 1 {
        return Err(Error::InvalidWeights(format!("{} weight lists for dimension {}", w.len(), k.dimension())));
    }
    for (d, ws) in w.iter().enumerate() {
        if ws.len() != k.count(d) {
            return Err(Error::InvalidWeights(format!("{} weights for {} simplices of dimension {d}", ws.len(), k.count(d))));
        }
        if ws.iter().any(|x| !x.is_positive()) {
            return Err(Error::InvalidWeights(format!("non-positive weight in dimension {d}")));
        }
    }
    Ok(())
}

/// Rational basis of the harmonic `deg`-cochains for weights `w` on
/// `deg`-simplices: `ker δ_deg ∩ ker(∂_deg W)`.
pub fn harmonic_basis(k: &SimplicialComplex, deg: usize, w: &[BigRational]) -> Result<Vec<Vec<BigRational>>> {
    let data = cohomology_data(k, deg)?;
    let b = data.structure.free_rank;
    if b == 0 {
        return Ok(Vec::new());
    }
    let q = |x: &BigInt| BigRational::from_integer(x.clone());
    let kernel: Vec<Vec<BigRational>> = data.kernel.iter().map(|v| v.iter().map(q).collect()).collect();
    if deg == 0 {
        return Ok(kernel);
    }
    let cols: Vec<Vec<BigRational>> = kernel
        .iter()
        .map(|v| {
            let wv: Vec<BigRational> = v.iter().zip(w).map(|(x, y)| x * y).collect();
            k.apply_boundary(deg, &wv)
        })
        .collect();
    let m = DenseMatrix::from_columns(k.count(deg - 1), &cols);
    let ys = integer_kernel(&m);
    if ys.len() != b {
        return Err(Error::Unsupported(format!("harmonic space of dimension {} but b = {b}", ys.len())));
    }
    Ok(ys
        .iter()
        .map(|y| {
            let mut h = vec![BigRational::zero(); k.count(deg)];
            for (c, v) in y.iter().zip(&kernel) {
                if c.is_zero() {
                    continue;
                }
                let c = q(c);
                for (hi, vi) in h.iter_mut().zip(v) {
                    if !vi.is_zero() {
                        *hi += &c * vi;
                    }
                }
            }
            h
        })
        .collect())
}

fn unit_basis(k: &SimplicialComplex, deg: usize) -> Result<Arc<Vec<Vec<BigRational>>>> {
    if let Some(b) = k.cache.harmonic.lock().unwrap().get(&deg) {
        return Ok(b.clone());
    }
    let b = Arc::new(harmonic_basis(k, deg, &vec![BigRational::one(); k.count(deg)])?);
    Ok(k.cache.harmonic.lock().unwrap().entry(deg).or_insert(b).clone())
}

fn dot<F: Field>(x: &[F], y: &[F]) -> F {
    let mut acc = F::zero();
    for (a, b) in x.iter().zip(y) {
        if !a.is_zero() && !b.is_zero() {
            acc = acc + a.clone() * b.clone();
        }
    }
    acc
}

/// Unit-weight harmonic projection, exact.
pub fn harmonic_part(k: &SimplicialComplex, x: &Cochain<BigRational>) -> Result<Cochain<BigRational>> {
    x.check(k)?;
    let basis = unit_basis(k, x.degree)?;
    let ones = vec![BigRational::one(); k.count(x.degree)];
    Ok(Cochain::new(x.degree, project(&basis, &ones, &x.values, 0.0)?))
}

fn project<F: Field>(basis: &[Vec<F>], w: &[F], x: &[F], tol: f64) -> Result<Vec<F>> {
    let mut out = vec![F::zero(); x.len()];
    if basis.is_empty() {
        return Ok(out);
    }
    let wx: Vec<F> = x.iter().zip(w).map(|(a, b)| a.clone() * b.clone()).collect();
    let rhs: Vec<F> = basis.iter().map(|b| dot(b, &wx)).collect();
    let gram = gram_lu(basis, w, tol)?;
    let c = gram.solve(&rhs);
    for (ci, b) in c.iter().zip(basis) {
        for (o, v) in out.iter_mut().zip(b) {
            if !v.is_zero() {
                *o = o.clone() + ci.clone() * v.clone();
            }
        }
    }
    Ok(out)
}

fn gram_lu<F: Field>(basis: &[Vec<F>], w: &[F], tol: f64) -> Result<Lu<F>> {
    let b = basis.len();
    let mut g = DenseMatrix::zeros(b, b);
    for i in 0..b {
        let wi: Vec<F> = basis[i].iter().zip(w).map(|(a, c)| a.clone() * c.clone()).collect();
        for j in 0..b {
            g[(i, j)] = dot(&wi, &basis[j]);
        }
    }
    Lu::new(g, tol).ok_or_else(|| Error::Unsupported("singular harmonic Gram matrix".into()))
}

#[derive(Debug)]
struct Level<F> {
    basis: Vec<Vec<F>>,
    /// Spans the harmonic space for projection and deflation; `W`-orthonormal
    /// on the iterative path.
    deflation: Vec<Vec<F>>,
    gram: Option<Lu<F>>,
    green: OnceLock<Result<Arc<ExactGreen>>>,
    lattice: OnceLock<Result<Vec<Vec<F>>>>,
}

/// Modified Gram–Schmidt in the `W` inner product.
fn orthonormalize<F: Field>(basis: &[Vec<F>], w: &[F]) -> Vec<Vec<F>> {
    let w: Vec<f64> = w.iter().map(F::to_f64_lossy).collect();
    let dot = |u: &[f64], v: &[f64]| u.iter().zip(v).zip(&w).map(|((a, b), c)| a * b * c).sum::<f64>();
    let mut out: Vec<Vec<f64>> = Vec::with_capacity(basis.len());
    for b in basis {
        let mut v: Vec<f64> = b.iter().map(F::to_f64_lossy).collect();
        for _ in 0..2 {
            for q in &out {
                let c = dot(&v, q);
                v.iter_mut().zip(q).for_each(|(x, y)| *x -= c * y);
            }
        }
        let n = dot(&v, &v).sqrt();
        v.iter_mut().for_each(|x| *x /= n);
        out.push(v);
    }
    out.into_iter().map(|v| v.into_iter().map(|t| F::from_f64(t).unwrap()).collect()).collect()
}

/// `L·M` as an integer system, for the deflated operator `M` with entry
/// denominators clearing to `L`.
#[derive(Debug)]
struct ExactGreen {
    solver: PadicSolver,
    scale: BigInt,
}

impl ExactGreen {
    /// `M g = rhs`
    fn solve(&self, rhs: &[BigRational]) -> Result<Vec<BigRational>> {
        let d = rhs.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        let b: Vec<BigInt> = rhs.iter().map(|q| q.numer() * (&d / q.denom()) * &self.scale).collect();
        let y = self.solver.solve(&b).ok_or_else(|| Error::Unsupported("exact Green solve failed".into()))?;
        let d = BigRational::from_integer(d);
        Ok(y.into_iter().map(|v| v / &d).collect())
    }
}

/// `x = H(x) + δδ*G(x) + δ*δG(x)`
#[derive(Clone, Debug, PartialEq)]
pub struct Decomposition<F> {
    pub harmonic: Cochain<F>,
    pub exact: Cochain<F>,
    pub coexact: Cochain<F>,
}

/// Weights, tolerance and cached per-degree data of the Hodge operators.
#[derive(Debug)]
pub struct HodgeContext<F: Field> {
    complex: Arc<SimplicialComplex>,
    weights: Weights,
    w: Vec<Vec<F>>,
    w_inv: Vec<Vec<F>>,
    tol: f64,
    cycles: HashMap<usize, Vec<Chain<BigInt>>>,
    levels: Vec<OnceLock<Result<Arc<Level<F>>>>>,
}

impl<F: Field> HodgeContext<F> {
    pub fn new(complex: Arc<SimplicialComplex>, weights: Option<Weights>, tol: f64) -> Result<Self> {
        let weights = weights.unwrap_or_else(|| unit_weights(&complex));
        validate_weights(&complex, &weights)?;
        let w: Vec<Vec<F>> = weights.iter().map(|ws| ws.iter().map(F::from_rational).collect()).collect();
        let w_inv = weights.iter().map(|ws| ws.iter().map(|x| F::from_rational(&x.recip())).collect()).collect();
        let levels = (0..=complex.dimension()).map(|_| OnceLock::new()).collect();
        Ok(HodgeContext { complex, weights, w, w_inv, tol, cycles: HashMap::new(), levels })
    }

    pub fn unit(complex: Arc<SimplicialComplex>) -> Self {
        Self::new(complex, None, DEFAULT_TOL).expect("unit weights are valid")
    }

    /// Fixes the cycle basis that the integral-period lattice in degree
    /// `deg` is made dual to. The cycles must represent a basis of
    /// `H_deg(X; ℤ)` modulo torsion.
    pub fn with_cycle_basis(mut self, deg: usize, cycles: Vec<Chain<BigInt>>) -> Result<Self> {
        let h = homology_data(&self.complex, deg)?;
        if cycles.len() != h.structure.free_rank {
            return Err(Error::DimensionMismatch(format!("{} cycles for rank {}", cycles.len(), h.structure.free_rank)));
        }
        let mut m = DenseMatrix::zeros(cycles.len(), cycles.len());
        for (i, z) in cycles.iter().enumerate() {
            if z.degree != deg {
                return Err(Error::DimensionMismatch(format!("cycle of degree {} in degree {deg}", z.degree)));
            }
            z.check(&self.complex)?;
            let c = h.coordinates(&z.values).ok_or(Error::NotACycle)?;
            for (j, x) in c.free.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        let snf = smith_normal_form(&m);
        if snf.rank() != cycles.len() || snf.diagonal.iter().any(|d| !d.is_one()) {
            return Err(Error::Unsupported("cycles do not form a basis of the free homology".into()));
        }
        self.cycles.insert(deg, cycles);
        if deg < self.levels.len() {
            self.levels[deg] = OnceLock::new();
        }
        Ok(self)
    }

    pub fn complex(&self) -> &Arc<SimplicialComplex> {
        &self.complex
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn weights(&self) -> &Weights {
        &self.weights
    }

    fn check(&self, x: &Cochain<F>) -> Result<()> {
        let n = self.complex.dimension();
        if x.degree > n {
            return Err(Error::DegreeOutOfRange { degree: x.degree as i64, min: 0, max: n as i64 });
        }
        x.check(&self.complex)
    }

    fn level(&self, deg: usize) -> Result<Arc<Level<F>>> {
        self.levels[deg]
            .get_or_init(|| {
                let exact = if self.weights[deg].iter().all(One::is_one) {
                    unit_basis(&self.complex, deg)?.as_ref().clone()
                } else {
                    harmonic_basis(&self.complex, deg, &self.weights[deg])?
                };
                let basis: Vec<Vec<F>> = exact.iter().map(|v| v.iter().map(F::from_rational).collect()).collect();
                let deflation = if F::EXACT { basis.clone() } else { orthonormalize(&basis, &self.w[deg]) };
                let gram = if basis.is_empty() { None } else { Some(gram_lu(&deflation, &self.w[deg], self.tol)?) };
                Ok(Arc::new(Level { basis, deflation, gram, green: OnceLock::new(), lattice: OnceLock::new() }))
            })
            .clone()
    }

    /// `δ_deg x`
    pub fn d(&self, deg: usize, x: &[F]) -> Vec<F> {
        self.complex.apply_coboundary(deg, x)
    }

    /// `δ*_deg y` for a `(deg+1)`-cochain `y`.
    pub fn d_star(&self, deg: usize, y: &[F]) -> Vec<F> {
        let n = self.complex.dimension();
        if deg >= n {
            return vec![F::zero(); self.complex.count(deg)];
        }
        let wy: Vec<F> = y.iter().zip(&self.w[deg + 1]).map(|(a, b)| a.clone() * b.clone()).collect();
        let t = self.complex.apply_boundary(deg + 1, &wy);
        t.into_iter().zip(&self.w_inv[deg]).map(|(a, b)| a * b.clone()).collect()
    }

    fn laplacian_vec(&self, deg: usize, x: &[F]) -> Vec<F> {
        let mut out = self.d_star(deg, &self.d(deg, x));
        if deg > 0 {
            let down = self.d(deg - 1, &self.d_star(deg - 1, x));
            for (o, v) in out.iter_mut().zip(down) {
                *o = o.clone() + v;
            }
        }
        out
    }

    pub fn codifferential(&self, y: &Cochain<F>) -> Result<Cochain<F>> {
        self.check(y)?;
        if y.degree == 0 {
            return Err(Error::DegreeOutOfRange { degree: -1, min: 0, max: self.complex.dimension() as i64 });
        }
        Ok(Cochain::new(y.degree - 1, self.d_star(y.degree - 1, &y.values)))
    }

    pub fn laplacian(&self, x: &Cochain<F>) -> Result<Cochain<F>> {
        self.check(x)?;
        Ok(Cochain::new(x.degree, self.laplacian_vec(x.degree, &x.values)))
    }

    /// Dense matrix of `Δ_deg`.
    pub fn laplacian_matrix(&self, deg: usize) -> DenseMatrix<F> {
        let c = self.complex.count(deg);
        let cols: Vec<Vec<F>> = (0..c)
            .map(|j| {
                let mut e = vec![F::zero(); c];
                e[j] = F::one();
                self.laplacian_vec(deg, &e)
            })
            .collect();
        DenseMatrix::from_columns(c, &cols)
    }

    /// `dim ker Δ_deg` by elimination on the Laplacian itself.
    pub fn kernel_dimension(&self, deg: usize) -> usize {
        let m = self.laplacian_matrix(deg);
        m.cols() - rank(&m, self.tol.max(1e-9))
    }

    pub fn harmonic_basis(&self, deg: usize) -> Result<Vec<Cochain<F>>> {
        Ok(self.level(deg)?.basis.iter().map(|b| Cochain::new(deg, b.clone())).collect())
    }

    pub fn harmonic_projection(&self, x: &Cochain<F>) -> Result<Cochain<F>> {
        self.check(x)?;
        let lvl = self.level(x.degree)?;
        Ok(Cochain::new(x.degree, self.project_with(&lvl, x.degree, &x.values)))
    }

    fn project_with(&self, lvl: &Level<F>, deg: usize, x: &[F]) -> Vec<F> {
        let mut out = vec![F::zero(); x.len()];
        let Some(gram) = &lvl.gram else { return out };
        let rhs: Vec<F> = lvl
            .deflation
            .iter()
            .map(|b| {
                let mut acc = F::zero();
                for ((bi, xi), wi) in b.iter().zip(x).zip(&self.w[deg]) {
                    if !bi.is_zero() && !xi.is_zero() {
                        acc = acc + bi.clone() * xi.clone() * wi.clone();
                    }
                }
                acc
            })
            .collect();
        for (c, b) in gram.solve(&rhs).iter().zip(&lvl.deflation) {
            for (o, v) in out.iter_mut().zip(b) {
                if !v.is_zero() {
                    *o = o.clone() + c.clone() * v.clone();
                }
            }
        }
        out
    }

    /// `M = Δ + B Bᵀ W`, nonsingular; `M g = x - H(x)` has the Green solution.
    fn deflated(&self, lvl: &Level<F>, deg: usize, x: &[F]) -> Vec<F> {
        let mut out = self.laplacian_vec(deg, x);
        for b in &lvl.deflation {
            let mut c = F::zero();
            for ((bi, xi), wi) in b.iter().zip(x).zip(&self.w[deg]) {
                if !bi.is_zero() && !xi.is_zero() {
                    c = c + bi.clone() * xi.clone() * wi.clone();
                }
            }
            if c.is_zero() {
                continue;
            }
            for (o, v) in out.iter_mut().zip(b) {
                if !v.is_zero() {
                    *o = o.clone() + c.clone() * v.clone();
                }
            }
        }
        out
    }

    /// `G(x)`: the solution of `ΔG(x) = x - H(x)` with `H(G(x)) = 0`.
    pub fn green(&self, x: &Cochain<F>) -> Result<Cochain<F>> {
        self.check(x)?;
        let deg = x.degree;
        let lvl = self.level(deg)?;
        let h = self.project_with(&lvl, deg, &x.values);
        let rhs: Vec<F> = x.values.iter().zip(&h).map(|(a, b)| a.clone() - b.clone()).collect();
        let c = rhs.len();
        if F::EXACT {
            let green = lvl
                .green
                .get_or_init(|| {
                    if c > EXACT_LIMIT {
                        return Err(Error::BudgetExceeded { needed: c, budget: EXACT_LIMIT });
                    }
                    let cols: Vec<Vec<BigRational>> = (0..c)
                        .map(|j| {
                            let mut e = vec![F::zero(); c];
                            e[j] = F::one();
                            self.deflated(&lvl, deg, &e).iter().map(Field::to_rational).collect()
                        })
                        .collect();
                    let scale = cols.iter().flatten().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
                    let triplets = cols.iter().enumerate().flat_map(|(j, col)| {
                        let scale = &scale;
                        col.iter().enumerate().filter(|(_, q)| !q.is_zero()).map(move |(i, q)| (i, j, q.numer() * (scale / q.denom())))
                    });
                    let a = SparseMatrix::from_triplets(c, c, triplets);
                    let solver = PadicSolver::new(a).ok_or_else(|| Error::Unsupported("singular deflated Laplacian".into()))?;
                    Ok(Arc::new(ExactGreen { solver, scale }))
                })
                .clone()?;
            let rhs_q: Vec<BigRational> = rhs.iter().map(Field::to_rational).collect();
            let g = green.solve(&rhs_q)?;
            return Ok(Cochain::new(deg, g.iter().map(F::from_rational).collect()));
        }
        // W M is symmetric positive definite.
        let wd = &self.w[deg];
        let apply = |v: &[f64]| -> Vec<f64> {
            let vf: Vec<F> = v.iter().map(|t| F::from_f64(*t).unwrap()).collect();
            self.deflated(&lvl, deg, &vf).iter().zip(wd).map(|(a, b)| (a.clone() * b.clone()).to_f64_lossy()).collect()
        };
        let b: Vec<f64> = rhs.iter().zip(wd).map(|(a, w)| (a.clone() * w.clone()).to_f64_lossy()).collect();
        let wmin = wd.iter().map(|w| w.to_f64_lossy()).fold(f64::INFINITY, f64::min).min(1.0);
        let max_iter = 20 * c + 200;
        // The tight target can sit below f64 resolution; fall back to the one the check needs.
        let (g, _) = match conjugate_gradient(&apply, &b, self.tol * wmin * 1e-2, max_iter) {
            Err(Error::NoConvergence { .. }) => conjugate_gradient(&apply, &b, self.tol * wmin * 0.5, max_iter)?,
            r => r?,
        };
        let g: Vec<F> = g.into_iter().map(|t| F::from_f64(t).unwrap()).collect();
        let res = max_abs(&sub(&self.deflated(&lvl, deg, &g), &rhs));
        if res > self.tol {
            return Err(Error::NoConvergence { residual: res });
        }
        Ok(Cochain::new(deg, g))
    }

    pub fn decompose(&self, x: &Cochain<F>) -> Result<Decomposition<F>> {
        let deg = x.degree;
        let g = self.green(x)?;
        let harmonic = self.harmonic_projection(x)?;
        let exact = if deg == 0 {
            Cochain::new(0, vec![F::zero(); x.len()])
        } else {
            Cochain::new(deg, self.d(deg - 1, &self.d_star(deg - 1, &g.values)))
        };
        let coexact = Cochain::new(deg, self.d_star(deg, &self.d(deg, &g.values)));
        Ok(Decomposition { harmonic, exact, coexact })
    }

    /// `‖x - H(x) - δδ*G(x) - δ*δG(x)‖∞`
    pub fn decomposition_residual(&self, x: &Cochain<F>) -> Result<f64> {
        let dec = self.decompose(x)?;
        let total = dec.harmonic.add(&dec.exact).add(&dec.coexact);
        Ok(max_abs(&sub(&x.values, &total.values)))
    }

    /// `σ(R) = -δ*G(R)` for an integral cocycle `R` of degree `k+1`.
    pub fn sigma(&self, r: &Cochain<BigInt>) -> Result<Cochain<F>> {
        if r.degree == 0 {
            return Err(Error::DegreeOutOfRange { degree: -1, min: 0, max: self.complex.dimension() as i64 });
        }
        r.check(&self.complex)?;
        if !r.coboundary(&self.complex).is_zero() {
            return Err(Error::NotACocycle);
        }
        let rf = r.map(|x| F::from_bigint(x));
        let g = self.green(&rf)?;
        Ok(Cochain::new(r.degree - 1, self.d_star(r.degree - 1, &g.values)).neg())
    }

    /// `‖δσ(R) - H(R) + R‖∞`
    pub fn spark_residual(&self, r: &Cochain<BigInt>) -> Result<f64> {
        let s = self.sigma(r)?;
        let rf = r.map(|x| F::from_bigint(x));
        let h = self.harmonic_projection(&rf)?;
        let lhs = s.coboundary(&self.complex);
        Ok(max_abs(&sub(&lhs.values, &h.sub(&rf).values)))
    }

    /// The Hodge spark `(σ(R), R)`. On the floating path `σ` is rounded to
    /// nearby small-denominator rationals when that keeps the spark equation
    /// within tolerance, and converted bit-exactly otherwise.
    pub fn hodge_spark(&self, r: &Cochain<BigInt>) -> Result<DiscreteSpark> {
        let s = self.sigma(r)?;
        let res = self.spark_residual(r)?;
        if res > self.tol {
            return Err(Error::Residual { residual: res, tol: self.tol });
        }
        let a = if F::EXACT {
            s.map(|x| x.to_rational())
        } else {
            let rounded = s.map(|x| rationalize(x.to_f64_lossy(), 1_000_000));
            let h = self.harmonic_projection(&r.map(|x| F::from_bigint(x)))?;
            let phi = rounded.coboundary(&self.complex).add(&r.to_rational());
            let err = phi
                .values
                .iter()
                .zip(&h.values)
                .map(|(p, q)| (Ring::to_f64_lossy(p) - q.to_f64_lossy()).abs())
                .fold(0.0f64, f64::max);
            if err <= self.tol {
                rounded
            } else {
                s.map(|x| x.to_rational())
            }
        };
        DiscreteSpark::new(self.complex.clone(), a, r.clone())
    }

    /// For a `k`-cochain `Γ` with `R = δΓ`: `‖Γ - H(Γ) - δB + σ(R)‖∞` with
    /// `B = δ*G(Γ)`.
    pub fn primitive_identity_residual(&self, gamma: &Cochain<BigInt>) -> Result<f64> {
        let deg = gamma.degree;
        if deg >= self.complex.dimension() {
            return Err(Error::DegreeOutOfRange { degree: deg as i64, min: 0, max: self.complex.dimension() as i64 - 1 });
        }
        let gf = gamma.map(|x| F::from_bigint(x));
        let r = gamma.coboundary(&self.complex);
        let sigma = self.sigma(&r)?;
        let h = self.harmonic_projection(&gf)?;
        let mut rest = gf.sub(&h).add(&sigma);
        if deg > 0 {
            let g = self.green(&gf)?;
            let b = self.d_star(deg - 1, &g.values);
            rest = rest.sub(&Cochain::new(deg, self.d(deg - 1, &b)));
        }
        Ok(max_abs(&rest.values))
    }

    fn lattice_cycles(&self, deg: usize) -> Result<Vec<Chain<BigInt>>> {
        if let Some(c) = self.cycles.get(&deg) {
            return Ok(c.clone());
        }
        let h = homology_data(&self.complex, deg)?;
        Ok(h.generators[..h.structure.free_rank].iter().map(|g| Chain::new(deg, g.clone())).collect())
    }

    /// Harmonic `deg`-cochains dual to the lattice cycle basis; a lattice
    /// basis of the harmonic cochains with integral periods.
    pub fn harmonic_lattice(&self, deg: usize) -> Result<Vec<Cochain<F>>> {
        if deg > self.complex.dimension() {
            return Err(Error::DegreeOutOfRange { degree: deg as i64, min: 0, max: self.complex.dimension() as i64 });
        }
        let lvl = self.level(deg)?;
        let theta = lvl
            .lattice
            .get_or_init(|| {
                let b = lvl.basis.len();
                if b == 0 {
                    return Ok(Vec::new());
                }
                let cycles = self.lattice_cycles(deg)?;
                let mut p = DenseMatrix::zeros(b, b);
                for (i, z) in cycles.iter().enumerate() {
                    let zf: Vec<F> = z.values.iter().map(F::from_bigint).collect();
                    for (j, v) in lvl.basis.iter().enumerate() {
                        p[(i, j)] = dot(v, &zf);
                    }
                }
                let lu = Lu::new(p, self.tol).ok_or_else(|| Error::Unsupported("singular period matrix".into()))?;
                // θ_i = Σ_j B_j (P⁻¹)_{ji}
                Ok((0..b)
                    .map(|i| {
                        let mut e = vec![F::zero(); b];
                        e[i] = F::one();
                        let col = lu.solve(&e);
                        let mut th = vec![F::zero(); self.complex.count(deg)];
                        for (c, v) in col.iter().zip(&lvl.basis) {
                            for (t, x) in th.iter_mut().zip(v) {
                                if !x.is_zero() {
                                    *t = t.clone() + c.clone() * x.clone();
                                }
                            }
                        }
                        th
                    })
                    .collect())
            })
            .clone()?;
        Ok(theta.into_iter().map(|v| Cochain::new(deg, v)).collect())
    }

    fn reduce(&self, x: F) -> F {
        let f = x.clone() - x.floor();
        if !F::EXACT && (f.to_f64_lossy() > 1.0 - self.tol || f.to_f64_lossy() < self.tol) {
            return F::zero();
        }
        f
    }

    /// Periods of `Γ` against the integral harmonic lattice, mod 1.
    pub fn abel_jacobi(&self, gamma: &Chain<BigInt>) -> Result<Vec<F>> {
        gamma.check(&self.complex)?;
        let theta = self.harmonic_lattice(gamma.degree)?;
        let gf: Vec<F> = gamma.values.iter().map(F::from_bigint).collect();
        Ok(theta.iter().map(|t| self.reduce(dot(&t.values, &gf))).collect())
    }

    /// [`Self::abel_jacobi`] after checking `∂Γ` against the expected cycle.
    pub fn abel_jacobi_bounding(&self, gamma: &Chain<BigInt>, boundary: &Chain<BigInt>) -> Result<Vec<F>> {
        gamma.check(&self.complex)?;
        if gamma.degree == 0 || gamma.boundary(&self.complex) != *boundary {
            return Err(Error::DimensionMismatch("∂Γ differs from the expected cycle".into()));
        }
        self.abel_jacobi(gamma)
    }

    /// Whether every Abel–Jacobi period of `Γ` vanishes mod 1.
    pub fn is_principal(&self, gamma: &Chain<BigInt>) -> Result<bool> {
        Ok(self.abel_jacobi(gamma)?.iter().all(|x| x.is_negligible(self.tol)))
    }

    /// Abel–Jacobi image of `q - p` along a shortest edge path.
    pub fn point_aj(&self, p: usize, q: usize) -> Result<Vec<F>> {
        let n = self.complex.vertex_count();
        if p >= n || q >= n {
            return Err(Error::DimensionMismatch(format!("vertex out of range 0..{n}")));
        }
        if self.complex.dimension() == 0 {
            return if p == q { Ok(Vec::new()) } else { Err(Error::Disconnected) };
        }
        let path = Chain::from_i64(1, &self.complex.path_chain(p, q)?);
        self.abel_jacobi(&path)
    }
}

pub fn max_abs<F: Field>(x: &[F]) -> f64 {
    x.iter().map(|v| v.magnitude()).fold(0.0, f64::max)
}

fn sub<F: Field>(x: &[F], y: &[F]) -> Vec<F> {
    x.iter().zip(y).map(|(a, b)| a.clone() - b.clone()).collect()
}
