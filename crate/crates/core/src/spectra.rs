//! Determinants, characteristic and E-characteristic polynomials of tensors.
//!
//! Both polynomials are resultants of systems that are affine in `λ`. We build
//! the Macaulay template once, evaluate the quotient at integer points, and
//! interpolate.

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{
    evaluation_points, interpolate, ModMatrix, MultiPoly, PrimeSet, Rational, RationalMatrix, UniPoly,
};
use crate::error::{Error, Result};
use crate::resultant::{
    macaulay_size, perturbed_value, quotient, resultant_value_robust, transform_schedule, MacaulayLayout, PolySystem,
    VariableTransform,
};
use crate::tensor::{apply, Tensor};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectralConfig {
    /// Largest accepted `n(m−1)^(n−1)`.
    pub degree_cap: usize,
    /// Largest accepted Macaulay matrix size.
    pub dim_cap: usize,
    /// Rotates the CRT prime list and seeds the transform schedule.
    pub prime_seed: u64,
}

impl Default for SpectralConfig {
    fn default() -> Self {
        SpectralConfig { degree_cap: 128, dim_cap: 256, prime_seed: 0 }
    }
}

impl SpectralConfig {
    fn primes(&self) -> PrimeSet {
        PrimeSet::with_seed(self.prime_seed)
    }
}

/// Points tried per transform before the degeneracy ratio is judged.
const MIN_ATTEMPTS: usize = 8;

/// `(𝒜x)_i` as polynomials in `nvars ≥ dim` variables.
pub fn component_polys(a: &Tensor, nvars: usize) -> Vec<MultiPoly> {
    let n = a.dim();
    let mut out = vec![MultiPoly::zero(nvars); n];
    for (idx, v) in a.nonzeros() {
        let mut e = vec![0u32; nvars];
        for &j in &idx[1..] {
            e[j] += 1;
        }
        out[idx[0]].add_term(e, v.clone());
    }
    out
}

/// `n(m−1)^(n−1)`, or `None` on overflow.
pub fn char_poly_degree(order: usize, dim: usize) -> Option<usize> {
    let base = order.checked_sub(1)?;
    let p = u32::try_from(dim.checked_sub(1)?).ok().and_then(|e| base.checked_pow(e))?;
    dim.checked_mul(p)
}

fn check_order(a: &Tensor) -> Result<()> {
    if a.order() < 2 {
        return Err(Error::BadSize(format!("tensor order {} < 2", a.order())));
    }
    Ok(())
}

fn check_dim(degrees: &[u32], cfg: &SpectralConfig) -> Result<()> {
    let size = macaulay_size(degrees);
    if size > cfg.dim_cap as u128 {
        return Err(Error::DegreeCapExceeded {
            what: "Macaulay dimension",
            value: size.min(usize::MAX as u128) as usize,
            cap: cfg.dim_cap,
        });
    }
    Ok(())
}

pub fn det_tensor(a: &Tensor, cfg: &SpectralConfig) -> Result<Rational> {
    check_order(a)?;
    let degrees = vec![(a.order() - 1) as u32; a.dim()];
    check_dim(&degrees, cfg)?;
    let sys = PolySystem::new(component_polys(a, a.dim()), degrees)?;
    resultant_value_robust(&sys, cfg.prime_seed, &cfg.primes())
}

/// A square homogeneous system `c_i + λ·l_i`.
#[derive(Clone, Debug)]
pub struct LambdaSystem {
    constant: Vec<MultiPoly>,
    linear: Vec<MultiPoly>,
    degrees: Vec<u32>,
}

type TemplateRow = Vec<(usize, Rational, Rational)>;

impl LambdaSystem {
    pub fn new(constant: Vec<MultiPoly>, linear: Vec<MultiPoly>, degrees: Vec<u32>) -> Result<Self> {
        // validates shape and homogeneity of both parts
        PolySystem::new(constant.clone(), degrees.clone())?;
        PolySystem::new(linear.clone(), degrees.clone())?;
        Ok(LambdaSystem { constant, linear, degrees })
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn at(&self, lambda: &Rational) -> PolySystem {
        let polys = self.constant.iter().zip(&self.linear).map(|(c, l)| c.add(&l.scale(lambda))).collect();
        PolySystem::new(polys, self.degrees.clone()).expect("validated at construction")
    }

    fn transformed(&self, t: &VariableTransform) -> LambdaSystem {
        LambdaSystem {
            constant: self.constant.iter().map(|p| t.apply(p)).collect(),
            linear: self.linear.iter().map(|p| t.apply(p)).collect(),
            degrees: self.degrees.clone(),
        }
    }

    /// Macaulay rows whose polynomial carries `λ`.
    pub fn lambda_rows(&self) -> usize {
        let layout = MacaulayLayout::new(&self.degrees);
        layout.owners().iter().filter(|&&i| !self.linear[i].is_zero()).count()
    }

    /// The resultant as a polynomial in `λ` of degree at most `bound`.
    pub fn resultant_poly(&self, bound: usize, cfg: &SpectralConfig) -> Result<UniPoly> {
        let needed = bound + 1;
        let primes = cfg.primes();
        let layout = MacaulayLayout::new(&self.degrees);
        for t in transform_schedule(self.degrees.len(), cfg.prime_seed) {
            let sys = self.transformed(&t);
            let rows = template(&layout, &sys);
            if minor_vanishes_mod_p(&layout, &rows, cfg.prime_seed) {
                continue;
            }
            let factor = t.resultant_factor(&self.degrees);
            let mut points: Vec<(Rational, Rational)> = Vec::with_capacity(needed);
            let mut xs = evaluation_points();
            let (mut attempted, mut degenerate) = (0usize, 0usize);
            while points.len() < needed {
                // small first batch so a hopeless transform is abandoned early
                let size = if attempted == 0 { MIN_ATTEMPTS.min(needed) } else { needed - points.len() };
                let batch: Vec<i64> = xs.by_ref().take(size).collect();
                let values: Vec<Result<Rational>> = batch
                    .par_iter()
                    .map(|&x| {
                        let m = evaluate(&layout, &rows, &Rational::from_integer(x.into()));
                        quotient(&m, layout.minor_indices(), &primes)
                    })
                    .collect();
                for (x, v) in batch.into_iter().zip(values) {
                    attempted += 1;
                    match v {
                        Ok(v) => points.push((Rational::from_integer(x.into()), v / &factor)),
                        Err(Error::DegenerateMinor) => degenerate += 1,
                        Err(e) => return Err(e),
                    }
                }
                if attempted >= MIN_ATTEMPTS && 2 * degenerate > attempted {
                    break;
                }
            }
            if points.len() == needed {
                return interpolate(&points);
            }
        }
        // every transform leaves M′ singular: perturb each point instead
        let rows = template(&layout, self);
        let points: Vec<(Rational, Rational)> = evaluation_points()
            .take(needed)
            .collect::<Vec<_>>()
            .into_par_iter()
            .map(|x| {
                let x = Rational::from_integer(x.into());
                let m = evaluate(&layout, &rows, &x);
                perturbed_value(&m, layout.minor_indices(), &primes).map(|v| (x, v))
            })
            .collect::<Result<_>>()?;
        interpolate(&points)
    }
}

fn template(layout: &MacaulayLayout, sys: &LambdaSystem) -> Vec<TemplateRow> {
    let c = layout.sparse_rows(&sys.constant);
    let l = layout.sparse_rows(&sys.linear);
    c.into_iter()
        .zip(l)
        .map(|(c, l)| {
            let mut row: Vec<(usize, Rational, Rational)> =
                c.into_iter().map(|(j, v)| (j, v, Rational::zero())).collect();
            for (j, v) in l {
                match row.iter_mut().find(|e| e.0 == j) {
                    Some(e) => e.2 += v,
                    None => row.push((j, Rational::zero(), v)),
                }
            }
            row
        })
        .collect()
}

fn evaluate(layout: &MacaulayLayout, rows: &[TemplateRow], lambda: &Rational) -> RationalMatrix {
    let n = layout.size();
    let mut m = RationalMatrix::zeros(n, n);
    for (r, row) in rows.iter().enumerate() {
        for (j, c, l) in row {
            m.set(r, *j, c + l * lambda);
        }
    }
    m
}

/// Cheap screen: `det M′(λ)` modulo one prime at two random residues.
fn minor_vanishes_mod_p(layout: &MacaulayLayout, rows: &[TemplateRow], seed: u64) -> bool {
    let idx = layout.minor_indices();
    if idx.is_empty() {
        return false;
    }
    let p = crate::algebra::modular::primes()[0];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..2).all(|_| {
        let lambda = Rational::from_integer(rng.random_range(1_000i64..1_000_000_000).into());
        let m = evaluate(layout, rows, &lambda).submatrix(idx, idx);
        match ModMatrix::from_rational(&m, p) {
            Ok(mm) => mm.det() == 0,
            Err(_) => false,
        }
    })
}

/// `Φ(λ) = det(λℐ − 𝒜)`, monic of degree `n(m−1)^(n−1)`.
pub fn char_poly(a: &Tensor, cfg: &SpectralConfig) -> Result<UniPoly> {
    check_order(a)?;
    let (m, n) = (a.order(), a.dim());
    let degree = char_poly_degree(m, n).filter(|&d| d <= cfg.degree_cap).ok_or(Error::DegreeCapExceeded {
        what: "characteristic polynomial degree",
        value: char_poly_degree(m, n).unwrap_or(usize::MAX),
        cap: cfg.degree_cap,
    })?;
    let degrees = vec![(m - 1) as u32; n];
    check_dim(&degrees, cfg)?;
    let constant = component_polys(a, n).into_iter().map(|p| p.scale(&-Rational::one())).collect();
    let linear = (0..n)
        .map(|i| {
            let mut e = vec![0u32; n];
            e[i] = (m - 1) as u32;
            MultiPoly::monomial(e, Rational::one())
        })
        .collect();
    let sys = LambdaSystem::new(constant, linear, degrees)?;
    let phi = sys.resultant_poly(degree, cfg)?;
    if phi.degree() != Some(degree) || !phi.leading().is_some_and(One::is_one) {
        return Err(Error::Inconsistent(format!(
            "characteristic polynomial has degree {:?}, expected monic of degree {degree}",
            phi.degree()
        )));
    }
    Ok(phi)
}

/// The E-characteristic system.
///
/// Even `m`: `(𝒜x)_i − λ(xᵀx)^((m−2)/2) x_i` in `x`. Odd `m`: the extra
/// variable `β` comes last, `(𝒜x)_i − λβ^(m−2) x_i` and `xᵀx − β²`.
pub fn e_system(a: &Tensor) -> Result<LambdaSystem> {
    check_order(a)?;
    let (m, n) = (a.order(), a.dim());
    let odd = m % 2 == 1;
    let nvars = if odd { n + 1 } else { n };
    let mut constant = component_polys(a, nvars);
    let norm = (0..n).fold(MultiPoly::zero(nvars), |acc, i| {
        let x = MultiPoly::var(nvars, i);
        acc.add(&x.mul(&x))
    });
    let weight = if odd { MultiPoly::var(nvars, n).pow((m - 2) as u32) } else { norm.pow(((m - 2) / 2) as u32) };
    let mut linear: Vec<MultiPoly> =
        (0..n).map(|i| weight.mul(&MultiPoly::var(nvars, i)).scale(&-Rational::one())).collect();
    let mut degrees = vec![(m - 1) as u32; n];
    if odd {
        let beta = MultiPoly::var(nvars, n);
        constant.push(norm.sub(&beta.mul(&beta)));
        linear.push(MultiPoly::zero(nvars));
        degrees.push(2);
    }
    LambdaSystem::new(constant, linear, degrees)
}

/// Raw `φ(λ)`; apply [`UniPoly::normalized`] before comparing.
pub fn e_char_poly(a: &Tensor, cfg: &SpectralConfig) -> Result<UniPoly> {
    let sys = e_system(a)?;
    check_dim(sys.degrees(), cfg)?;
    sys.resultant_poly(sys.lambda_rows(), cfg)
}

/// Does `𝒜x = λ x^[m−1]` hold exactly?
pub fn eigen_check(a: &Tensor, lambda: &Rational, x: &[Rational]) -> Result<bool> {
    if x.iter().all(Zero::is_zero) {
        return Err(Error::ZeroVector);
    }
    let ax = apply(a, x)?;
    let e = a.order() - 1;
    Ok(ax.iter().zip(x).all(|(l, xi)| *l == lambda * num_traits::pow(xi.clone(), e)))
}
