//! Dense cubical tensors over the rationals and the general tensor product.
//!
//! Entries are stored row-major by index tuple: `(i_1, …, i_m)` lives at
//! `Σ_j i_j·n^(m−j)` with 0-based indices. The JSON form uses 1-based indices.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::rational::{format_rational, parse_rational};
use crate::algebra::{Rational, RationalMatrix};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Tensor {
    order: usize,
    dim: usize,
    entries: Vec<Rational>,
}

impl Tensor {
    pub fn zeros(order: usize, dim: usize) -> Result<Self> {
        if order == 0 || dim == 0 {
            return Err(Error::BadSize(format!("tensor order {order} dimension {dim}")));
        }
        let len = checked_len(order, dim)?;
        Ok(Tensor { order, dim, entries: vec![Rational::zero(); len] })
    }

    pub fn from_entries(order: usize, dim: usize, entries: Vec<Rational>) -> Result<Self> {
        let t = Self::zeros(order, dim)?;
        if entries.len() != t.entries.len() {
            return Err(Error::DimMismatch(format!("{} entries for order {order} dimension {dim}", entries.len())));
        }
        Ok(Tensor { entries, ..t })
    }

    /// Order-1 tensor.
    pub fn vector(x: Vec<Rational>) -> Result<Self> {
        let n = x.len();
        Self::from_entries(1, n, x)
    }

    pub fn from_matrix(m: &RationalMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::DimMismatch("tensors are cubical; matrix is not square".into()));
        }
        Self::from_entries(2, m.rows(), m.data().to_vec())
    }

    pub fn to_matrix(&self) -> Result<RationalMatrix> {
        if self.order != 2 {
            return Err(Error::DimMismatch(format!("order {} tensor is not a matrix", self.order)));
        }
        Ok(RationalMatrix::from_data(self.dim, self.dim, self.entries.clone()))
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn flat_index(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.order);
        idx.iter().fold(0, |acc, &i| {
            debug_assert!(i < self.dim);
            acc * self.dim + i
        })
    }

    pub fn multi_index(&self, mut flat: usize) -> Vec<usize> {
        let mut idx = vec![0; self.order];
        for slot in idx.iter_mut().rev() {
            *slot = flat % self.dim;
            flat /= self.dim;
        }
        idx
    }

    pub fn get(&self, idx: &[usize]) -> &Rational {
        &self.entries[self.flat_index(idx)]
    }

    pub fn set(&mut self, idx: &[usize], v: Rational) {
        let f = self.flat_index(idx);
        self.entries[f] = v;
    }

    /// Nonzero entries with their 0-based index tuples.
    pub fn nonzeros(&self) -> impl Iterator<Item = (Vec<usize>, &Rational)> + '_ {
        self.entries.iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(f, v)| (self.multi_index(f), v))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    /// True iff every entry equals the entry at every permutation of its index.
    ///
    /// Comparing each entry against the one at its sorted index is equivalent
    /// and avoids enumerating permutations.
    pub fn is_symmetric(&self) -> bool {
        (0..self.entries.len()).all(|f| {
            let mut idx = self.multi_index(f);
            idx.sort_unstable();
            self.entries[f] == *self.get(&idx)
        })
    }

    pub fn add(&self, other: &Tensor) -> Result<Tensor> {
        self.same_shape(other)?;
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect();
        Ok(Tensor { entries, ..self.clone() })
    }

    pub fn sub(&self, other: &Tensor) -> Result<Tensor> {
        self.same_shape(other)?;
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect();
        Ok(Tensor { entries, ..self.clone() })
    }

    pub fn scale(&self, c: &Rational) -> Tensor {
        Tensor { entries: self.entries.iter().map(|a| a * c).collect(), ..self.clone() }
    }

    fn same_shape(&self, other: &Tensor) -> Result<()> {
        if self.order != other.order || self.dim != other.dim {
            return Err(Error::DimMismatch(format!(
                "order {} dim {} vs order {} dim {}",
                self.order, self.dim, other.order, other.dim
            )));
        }
        Ok(())
    }
}

fn checked_len(order: usize, dim: usize) -> Result<usize> {
    (0..order)
        .try_fold(1usize, |acc, _| acc.checked_mul(dim))
        .ok_or_else(|| Error::BadSize(format!("tensor order {order} dimension {dim} is too large")))
}

/// Unit tensor: 1 on the main diagonal `i_1 = ⋯ = i_m`, 0 elsewhere.
pub fn unit_tensor(order: usize, dim: usize) -> Result<Tensor> {
    if order < 2 {
        return Err(Error::BadSize(format!("unit tensor needs order >= 2, got {order}")));
    }
    let mut t = Tensor::zeros(order, dim)?;
    for i in 0..dim {
        t.set(&vec![i; order], Rational::one());
    }
    Ok(t)
}

/// General product of an order-m tensor `A` (m ≥ 2) with an order-k tensor
/// `B` (k ≥ 1) of the same dimension:
///
/// `C[i, α_1, …, α_{m−1}] = Σ_{i_2..i_m} a[i, i_2, …, i_m] · b[i_2, α_1] ⋯ b[i_m, α_{m−1}]`
///
/// with each `α_j ∈ [n]^(k−1)`. The result has order `(m−1)(k−1)+1`.
pub fn shao_product(a: &Tensor, b: &Tensor) -> Result<Tensor> {
    if a.dim != b.dim {
        return Err(Error::DimMismatch(format!("dimensions {} and {}", a.dim, b.dim)));
    }
    if a.order < 2 {
        return Err(Error::DimMismatch(format!("left factor must have order >= 2, got {}", a.order)));
    }
    let n = a.dim;
    let (m, k) = (a.order, b.order);
    let out_order = (m - 1) * (k - 1) + 1;
    let mut out = Tensor::zeros(out_order, n)?;
    // number of α tuples per block and the block stride
    let block = n.pow((k - 1) as u32);
    let tail = block.pow((m - 1) as u32);
    for (idx, aval) in a.nonzeros() {
        let i = idx[0];
        let rows = &idx[1..];
        // enumerate every (α_1..α_{m−1}) as a mixed-radix number in base `block`
        for t in 0..tail {
            let mut prod = aval.clone();
            let mut rem = t;
            for j in (0..m - 1).rev() {
                let alpha = rem % block;
                rem /= block;
                let bv = &b.entries[rows[j] * block + alpha];
                if bv.is_zero() {
                    prod = Rational::zero();
                    break;
                }
                prod *= bv;
            }
            if !prod.is_zero() {
                out.entries[i * tail + t] += prod;
            }
        }
    }
    Ok(out)
}

/// `(A x)_i = Σ a[i, i_2, …, i_m] x_{i_2} ⋯ x_{i_m}`.
pub fn apply(a: &Tensor, x: &[Rational]) -> Result<Vec<Rational>> {
    if x.len() != a.dim {
        return Err(Error::DimMismatch(format!("vector length {} for dimension {}", x.len(), a.dim)));
    }
    let mut out = vec![Rational::zero(); a.dim];
    for (idx, v) in a.nonzeros() {
        let term = idx[1..].iter().fold(v.clone(), |acc, &j| acc * &x[j]);
        out[idx[0]] += term;
    }
    Ok(out)
}

/// `P·A·Pᵀ`, entrywise `Σ a[j_1..j_m] p[i_1][j_1] ⋯ p[i_m][j_m]`.
///
/// Computed as `m` successive mode products with `P`.
pub fn mat_sim(p: &RationalMatrix, a: &Tensor) -> Result<Tensor> {
    if !p.is_square() || p.rows() != a.dim {
        return Err(Error::DimMismatch(format!("{}x{} matrix against dimension {}", p.rows(), p.cols(), a.dim)));
    }
    let mut t = a.clone();
    for mode in 0..a.order {
        t = mode_product(&t, p, mode);
    }
    Ok(t)
}

fn mode_product(t: &Tensor, p: &RationalMatrix, mode: usize) -> Tensor {
    let n = t.dim;
    let stride = n.pow((t.order - 1 - mode) as u32);
    let outer = n.pow(mode as u32);
    let mut out = vec![Rational::zero(); t.entries.len()];
    for o in 0..outer {
        for row in 0..n {
            for col in 0..n {
                let pv = p.get(row, col);
                if pv.is_zero() {
                    continue;
                }
                let src = (o * n + col) * stride;
                let dst = (o * n + row) * stride;
                for s in 0..stride {
                    let v = &t.entries[src + s];
                    if !v.is_zero() {
                        out[dst + s] += pv * v;
                    }
                }
            }
        }
    }
    Tensor { entries: out, ..t.clone() }
}

#[derive(Serialize, Deserialize)]
struct TensorJson {
    order: usize,
    dim: usize,
    entries: Vec<(Vec<usize>, String)>,
}

impl Serialize for Tensor {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let entries =
            self.nonzeros().map(|(idx, v)| (idx.iter().map(|i| i + 1).collect(), format_rational(v))).collect();
        TensorJson { order: self.order, dim: self.dim, entries }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Tensor {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = TensorJson::deserialize(d)?;
        let mut t = Tensor::zeros(raw.order, raw.dim).map_err(D::Error::custom)?;
        for (idx, v) in raw.entries {
            if idx.len() != raw.order || idx.iter().any(|&i| i == 0 || i > raw.dim) {
                return Err(D::Error::custom(format!("index {idx:?} out of range")));
            }
            let zero_based: Vec<usize> = idx.iter().map(|i| i - 1).collect();
            let v = parse_rational(&v).map_err(D::Error::custom)?;
            t.set(&zero_based, v);
        }
        Ok(t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::{int, rat};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn single_edge() -> Tensor {
        let mut t = Tensor::zeros(3, 3).unwrap();
        for idx in [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]] {
            t.set(&idx, rat(1, 2));
        }
        t
    }

    fn random_tensor(rng: &mut ChaCha8Rng, order: usize, dim: usize) -> Tensor {
        let len = dim.pow(order as u32);
        let e = (0..len).map(|_| rat(rng.random_range(-5..=5), rng.random_range(1..=3))).collect();
        Tensor::from_entries(order, dim, e).unwrap()
    }

    fn random_matrix(rng: &mut ChaCha8Rng, n: usize) -> RationalMatrix {
        let rows =
            (0..n).map(|_| (0..n).map(|_| rat(rng.random_range(-4..=4), rng.random_range(1..=3))).collect()).collect();
        RationalMatrix::from_rows(rows).unwrap()
    }

    /// Entrywise sum over all j-tuples, straight from the definition.
    fn mat_sim_oracle(p: &RationalMatrix, a: &Tensor) -> Tensor {
        let mut out = Tensor::zeros(a.order(), a.dim()).unwrap();
        for f in 0..a.entries().len() {
            let i = a.multi_index(f);
            let mut acc = int(0);
            for g in 0..a.entries().len() {
                let j = a.multi_index(g);
                let mut term = a.entries()[g].clone();
                for (ii, jj) in i.iter().zip(&j) {
                    term *= p.get(*ii, *jj);
                }
                acc += term;
            }
            out.set(&i, acc);
        }
        out
    }

    #[test]
    fn unit_tensors() {
        let i2 = unit_tensor(2, 3).unwrap();
        assert_eq!(i2.to_matrix().unwrap(), RationalMatrix::identity(3));
        let i3 = unit_tensor(3, 2).unwrap();
        let nz: Vec<_> = i3.nonzeros().map(|(i, _)| i).collect();
        assert_eq!(nz, vec![vec![0, 0, 0], vec![1, 1, 1]]);
        let i4 = unit_tensor(4, 1).unwrap();
        assert_eq!(i4.entries(), &[int(1)]);
        assert!(unit_tensor(1, 3).is_err());
    }

    #[test]
    fn matrix_case_is_matrix_multiplication() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = random_matrix(&mut rng, 4);
        let b = random_matrix(&mut rng, 4);
        let c = shao_product(&Tensor::from_matrix(&a).unwrap(), &Tensor::from_matrix(&b).unwrap()).unwrap();
        assert_eq!(c.to_matrix().unwrap(), a.mul(&b).unwrap());
    }

    #[test]
    fn identity_times_anything() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let b = random_tensor(&mut rng, 3, 3);
        assert_eq!(shao_product(&unit_tensor(2, 3).unwrap(), &b).unwrap(), b);
    }

    #[test]
    fn single_edge_on_all_ones() {
        let x = vec![int(1); 3];
        let a = single_edge();
        assert_eq!(apply(&a, &x).unwrap(), x);
        let via_product = shao_product(&a, &Tensor::vector(x.clone()).unwrap()).unwrap();
        assert_eq!(via_product.order(), 1);
        assert_eq!(via_product.entries(), &x[..]);
    }

    #[test]
    fn apply_examples() {
        let z = Tensor::zeros(3, 4).unwrap();
        assert_eq!(apply(&z, &[int(1), int(2), int(3), int(4)]).unwrap(), vec![int(0); 4]);
        let u = unit_tensor(3, 2).unwrap();
        assert_eq!(apply(&u, &[int(3), rat(-1, 2)]).unwrap(), vec![int(9), rat(1, 4)]);
        assert!(apply(&u, &[int(1)]).is_err());
    }

    #[test]
    fn apply_agrees_with_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for order in 2..=4 {
            let a = random_tensor(&mut rng, order, 3);
            let x: Vec<Rational> = (0..3).map(|_| rat(rng.random_range(-5..=5), 2)).collect();
            let p = shao_product(&a, &Tensor::vector(x.clone()).unwrap()).unwrap();
            assert_eq!(p.entries(), &apply(&a, &x).unwrap()[..]);
        }
    }

    #[test]
    fn mat_sim_matches_definition_and_product_composition() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for (order, dim) in [(2, 3), (3, 2), (3, 3), (4, 2)] {
            let a = random_tensor(&mut rng, order, dim);
            let p = random_matrix(&mut rng, dim);
            let got = mat_sim(&p, &a).unwrap();
            assert_eq!(got, mat_sim_oracle(&p, &a));
            let pt = Tensor::from_matrix(&p.transpose()).unwrap();
            let pa = shao_product(&Tensor::from_matrix(&p).unwrap(), &a).unwrap();
            assert_eq!(shao_product(&pa, &pt).unwrap(), got);
        }
    }

    #[test]
    fn mat_sim_identity_and_permutation() {
        let a = single_edge();
        assert_eq!(mat_sim(&RationalMatrix::identity(3), &a).unwrap(), a);
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let t = random_tensor(&mut rng, 3, 3);
        let perm = [2, 0, 1];
        let moved = mat_sim(&RationalMatrix::permutation(&perm), &t).unwrap();
        for f in 0..t.entries().len() {
            let idx = t.multi_index(f);
            let image: Vec<usize> = idx.iter().map(|&i| perm[i]).collect();
            assert_eq!(moved.get(&image), &t.entries()[f]);
        }
    }

    #[test]
    fn mat_sim_composes() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let a = random_tensor(&mut rng, 3, 3);
        let p1 = random_matrix(&mut rng, 3);
        let p2 = random_matrix(&mut rng, 3);
        let lhs = mat_sim(&p1, &mat_sim(&p2, &a).unwrap()).unwrap();
        let rhs = mat_sim(&p1.mul(&p2).unwrap(), &a).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn symmetry() {
        assert!(single_edge().is_symmetric());
        let m = Tensor::from_matrix(&RationalMatrix::from_i64(&[&[1, 2], &[2, 5]])).unwrap();
        assert!(m.is_symmetric());
        let m = Tensor::from_matrix(&RationalMatrix::from_i64(&[&[1, 2], &[3, 5]])).unwrap();
        assert!(!m.is_symmetric());
        let mut t = Tensor::zeros(3, 3).unwrap();
        t.set(&[0, 1, 1], int(1));
        assert!(!t.is_symmetric());
    }

    #[test]
    fn json_uses_one_based_nonzeros() {
        let mut t = Tensor::zeros(2, 2).unwrap();
        t.set(&[0, 1], rat(1, 2));
        let s = serde_json::to_string(&t).unwrap();
        assert_eq!(s, r#"{"order":2,"dim":2,"entries":[[[1,2],"1/2"]]}"#);
        let back: Tensor = serde_json::from_str(&s).unwrap();
        assert_eq!(back, t);
        assert!(serde_json::from_str::<Tensor>(r#"{"order":2,"dim":2,"entries":[[[0,1],"1"]]}"#).is_err());
    }

    #[test]
    fn dimension_mismatch() {
        let a = Tensor::zeros(3, 3).unwrap();
        let b = Tensor::zeros(2, 2).unwrap();
        assert!(matches!(shao_product(&a, &b), Err(Error::DimMismatch(_))));
        assert!(mat_sim(&RationalMatrix::identity(2), &a).is_err());
    }
}
