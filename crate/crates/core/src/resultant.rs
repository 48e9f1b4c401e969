//! Multivariate resultants of square homogeneous systems via the Macaulay
//! quotient `det(M)/det(M′)`.
//!
//! Rows of `M` are indexed by the monomials `μ` of degree
//! `D = Σ(d_i − 1) + 1`; `μ` is assigned to the least `i` with `x_i^{d_i} | μ`
//! and its row holds the coefficients of `(μ / x_i^{d_i})·f_i`. `M′` is the
//! square submatrix on the monomials divisible by at least two of the
//! `x_i^{d_i}`. With this choice the resultant of `{x_i^{d_i}}` is 1.

use std::collections::HashMap;

use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::matrix::{det_exact_with, lowest_shifted_ratio};
use crate::algebra::multipoly::Exponent;
use crate::algebra::{permutation_sign, MultiPoly, PrimeSet, Rational, RationalMatrix};
use crate::error::{Error, Result};

/// Square system of homogeneous polynomials with declared degrees.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolySystem {
    polys: Vec<MultiPoly>,
    degrees: Vec<u32>,
}

impl PolySystem {
    pub fn new(polys: Vec<MultiPoly>, degrees: Vec<u32>) -> Result<Self> {
        let vars = polys.first().map_or(0, MultiPoly::nvars);
        if polys.len() != vars || degrees.len() != polys.len() || polys.iter().any(|p| p.nvars() != vars) {
            return Err(Error::NotSquare { polys: polys.len(), vars });
        }
        for (index, (p, &d)) in polys.iter().zip(&degrees).enumerate() {
            if d == 0 {
                return Err(Error::BadSize(format!("polynomial {index} has declared degree 0")));
            }
            if !p.is_homogeneous(d) {
                return Err(Error::NotHomogeneous { index, degree: d });
            }
        }
        Ok(PolySystem { polys, degrees })
    }

    pub fn nvars(&self) -> usize {
        self.polys.len()
    }

    pub fn polys(&self) -> &[MultiPoly] {
        &self.polys
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn transformed(&self, t: &VariableTransform) -> PolySystem {
        PolySystem { polys: self.polys.iter().map(|p| t.apply(p)).collect(), degrees: self.degrees.clone() }
    }
}

/// All exponent vectors of the given total degree, in descending lex order.
pub fn monomial_basis(nvars: usize, degree: u32) -> Vec<Exponent> {
    fn rec(nvars: usize, degree: u32, prefix: &mut Vec<u32>, out: &mut Vec<Exponent>) {
        if prefix.len() + 1 == nvars {
            prefix.push(degree);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for a in (0..=degree).rev() {
            prefix.push(a);
            rec(nvars, degree - a, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if nvars > 0 {
        rec(nvars, degree, &mut Vec::with_capacity(nvars), &mut out);
    }
    out
}

/// `Σ(d_i − 1) + 1`
pub fn macaulay_degree(degrees: &[u32]) -> u32 {
    degrees.iter().map(|d| d - 1).sum::<u32>() + 1
}

/// Number of monomials of degree `D` in `n` variables, i.e. the size of `M`.
pub fn macaulay_size(degrees: &[u32]) -> u128 {
    let n = degrees.len() as u128;
    let d = macaulay_degree(degrees) as u128;
    // C(d + n − 1, n − 1)
    (1..n).fold(1u128, |acc, i| acc * (d + i) / i)
}

/// Row/column bookkeeping of the Macaulay matrix for a given degree vector.
#[derive(Clone, Debug)]
pub struct MacaulayLayout {
    degrees: Vec<u32>,
    basis: Vec<Exponent>,
    index: HashMap<Exponent, usize>,
    owners: Vec<usize>,
    minor: Vec<usize>,
}

impl MacaulayLayout {
    pub fn new(degrees: &[u32]) -> Self {
        let basis = monomial_basis(degrees.len(), macaulay_degree(degrees));
        let index = basis.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        let owners = basis
            .iter()
            .map(|mu| (0..degrees.len()).find(|&i| mu[i] >= degrees[i]).expect("degree D forces a divisor"))
            .collect();
        let minor = basis
            .iter()
            .enumerate()
            .filter(|(_, mu)| mu.iter().zip(degrees).filter(|(a, d)| a >= d).count() >= 2)
            .map(|(i, _)| i)
            .collect();
        MacaulayLayout { degrees: degrees.to_vec(), basis, index, owners, minor }
    }

    pub fn size(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Exponent] {
        &self.basis
    }

    /// Polynomial index assigned to each row.
    pub fn owners(&self) -> &[usize] {
        &self.owners
    }

    /// Row/column indices of `M′`.
    pub fn minor_indices(&self) -> &[usize] {
        &self.minor
    }

    /// Sparse rows `(column, coefficient)` for the given polynomials.
    pub fn sparse_rows(&self, polys: &[MultiPoly]) -> Vec<Vec<(usize, Rational)>> {
        self.basis
            .iter()
            .zip(&self.owners)
            .map(|(mu, &i)| {
                let mut shift = mu.clone();
                shift[i] -= self.degrees[i];
                polys[i]
                    .terms()
                    .map(|(e, c)| {
                        let target: Exponent = e.iter().zip(&shift).map(|(a, b)| a + b).collect();
                        (self.index[&target], c.clone())
                    })
                    .collect()
            })
            .collect()
    }

    pub fn fill(&self, polys: &[MultiPoly]) -> RationalMatrix {
        let n = self.size();
        let mut m = RationalMatrix::zeros(n, n);
        for (r, row) in self.sparse_rows(polys).into_iter().enumerate() {
            for (c, v) in row {
                m.set(r, c, v);
            }
        }
        m
    }
}

/// The Macaulay matrix `M` and the designated minor `M′`.
#[derive(Clone, Debug)]
pub struct MacaulayPair {
    layout: MacaulayLayout,
    matrix: RationalMatrix,
}

impl MacaulayPair {
    pub fn matrix(&self) -> &RationalMatrix {
        &self.matrix
    }

    pub fn minor(&self) -> RationalMatrix {
        let idx = self.layout.minor_indices();
        self.matrix.submatrix(idx, idx)
    }

    pub fn layout(&self) -> &MacaulayLayout {
        &self.layout
    }
}

pub fn macaulay_pair(sys: &PolySystem) -> Result<MacaulayPair> {
    let layout = MacaulayLayout::new(&sys.degrees);
    let matrix = layout.fill(&sys.polys);
    Ok(MacaulayPair { layout, matrix })
}

/// `det(M)/det(M′)`; fails with [`Error::DegenerateMinor`] when `det(M′) = 0`.
pub fn resultant_value(sys: &PolySystem) -> Result<Rational> {
    resultant_value_with(sys, &PrimeSet::default())
}

pub fn resultant_value_with(sys: &PolySystem, primes: &PrimeSet) -> Result<Rational> {
    // n − 1 homogeneous equations in n unknowns always share a projective zero
    if sys.polys.iter().any(MultiPoly::is_zero) {
        return Ok(Rational::zero());
    }
    let pair = macaulay_pair(sys)?;
    quotient(&pair.matrix, pair.layout.minor_indices(), primes)
}

pub(crate) fn quotient(m: &RationalMatrix, minor: &[usize], primes: &PrimeSet) -> Result<Rational> {
    let dm = det_exact_with(&m.submatrix(minor, minor), primes)?;
    if dm.is_zero() {
        return Err(Error::DegenerateMinor);
    }
    Ok(det_exact_with(m, primes)? / dm)
}

/// A linear change of variables `x ↦ L·x` applied before building `M`.
///
/// `Res(f ∘ L) = det(L)^(d_1⋯d_n) · Res(f)`, so any invertible `L` can stand
/// in when the identity makes `M′` singular.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VariableTransform {
    Identity,
    /// Variable `i` is renamed to `perm[i]`.
    Permutation(Vec<usize>),
    Linear(RationalMatrix),
}

impl VariableTransform {
    pub fn apply(&self, p: &MultiPoly) -> MultiPoly {
        match self {
            VariableTransform::Identity => p.clone(),
            VariableTransform::Permutation(perm) => p.permute_vars(perm),
            VariableTransform::Linear(l) => p.compose_linear(l),
        }
    }

    /// `det(L)^(Π d_i)`: divide a transformed resultant by this.
    pub fn resultant_factor(&self, degrees: &[u32]) -> Rational {
        let det = match self {
            VariableTransform::Identity => return Rational::one(),
            VariableTransform::Permutation(perm) => Rational::from_integer(permutation_sign(perm).into()),
            VariableTransform::Linear(l) => l.det().expect("transform is square"),
        };
        let e: u128 = degrees.iter().map(|&d| d as u128).product();
        // only the parity matters for ±1
        if matches!(self, VariableTransform::Permutation(_)) {
            return if e.is_multiple_of(2) { Rational::one() } else { det };
        }
        num_traits::pow(det, e as usize)
    }
}

/// Number of random permutations tried after the identity.
pub const PERMUTATION_RETRIES: usize = 3;
/// Number of dense integer transforms tried after the permutations.
pub const LINEAR_RETRIES: usize = 4;

/// Identity, then seeded random permutations, then seeded dense invertible
/// integer matrices with entries in `[-3, 3]`.
pub fn transform_schedule(nvars: usize, seed: u64) -> Vec<VariableTransform> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_1dea_u64);
    let mut out = vec![VariableTransform::Identity];
    if nvars > 1 {
        for _ in 0..PERMUTATION_RETRIES {
            let mut perm: Vec<usize> = (0..nvars).collect();
            perm.shuffle(&mut rng);
            out.push(VariableTransform::Permutation(perm));
        }
    }
    let mut added = 0;
    while added < LINEAR_RETRIES {
        let rows = (0..nvars)
            .map(|_| (0..nvars).map(|_| Rational::from_integer(rng.random_range(-3i64..=3).into())).collect())
            .collect();
        let l = RationalMatrix::from_rows(rows).expect("square");
        if !l.det().expect("square").is_zero() {
            out.push(VariableTransform::Linear(l));
            added += 1;
        }
    }
    out
}

/// Resultant with retries over [`transform_schedule`], falling back to
/// [`perturbed_value`] when every transform leaves `M′` singular.
pub fn resultant_value_robust(sys: &PolySystem, seed: u64, primes: &PrimeSet) -> Result<Rational> {
    for t in &transform_schedule(sys.nvars(), seed) {
        let ts = sys.transformed(t);
        match resultant_value_with(&ts, primes) {
            Ok(v) => return Ok(v / t.resultant_factor(&sys.degrees)),
            Err(Error::DegenerateMinor) => continue,
            Err(e) => return Err(e),
        }
    }
    let pair = macaulay_pair(sys)?;
    perturbed_value(pair.matrix(), pair.layout().minor_indices(), primes)
}

/// Resultant from the Macaulay matrix of the perturbed system
/// `f_i + s·x_i^(d_i)`, whose matrix is `M + sI`.
///
/// `det(M + sI) = Res(f + s·x^d)·det(M′ + sI)` as polynomials in `s`, so the
/// ratio of their lowest nonvanishing coefficients is `Res(f)`. This stays
/// exact when `M′` is singular, including identically vanishing resultants.
pub fn perturbed_value(m: &RationalMatrix, minor: &[usize], primes: &PrimeSet) -> Result<Rational> {
    lowest_shifted_ratio(m, minor, primes)
}
