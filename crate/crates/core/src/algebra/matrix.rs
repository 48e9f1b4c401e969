use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use super::modular::{charpoly_mod_raw, crt_symmetric, det_mod_raw, reduce_bigint, PrimeSet};
use super::rational::{denominator_lcm, Rational};
use crate::error::{Error, Result};

/// Largest dimension handled by fraction-free elimination; bigger
/// determinants go through the modular path.
pub const FRACTION_FREE_MAX_DIM: usize = 12;

/// Dense row-major matrix of rationals.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    /// `P` with `P[perm[i]][i] = 1`, so that `P·e_i = e_{perm[i]}`.
    pub fn permutation(perm: &[usize]) -> Self {
        let n = perm.len();
        let mut m = Self::zeros(n, n);
        for (i, &j) in perm.iter().enumerate() {
            m.set(j, i, Rational::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimMismatch("ragged rows".into()));
        }
        Ok(RationalMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let v = rows.iter().map(|r| r.iter().map(|&x| Rational::from_integer(x.into())).collect()).collect();
        Self::from_rows(v).expect("rectangular input")
    }

    pub(crate) fn from_data(rows: usize, cols: usize, data: Vec<Rational>) -> Self {
        assert_eq!(data.len(), rows * cols);
        RationalMatrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[Rational] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &RationalMatrix) -> Result<RationalMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimMismatch(format!("{}x{} times {}x{}", self.rows, self.cols, other.rows, other.cols)));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// The submatrix on the given rows and columns.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> RationalMatrix {
        let data = rows.iter().flat_map(|&i| cols.iter().map(move |&j| self.get(i, j).clone())).collect();
        RationalMatrix { rows: rows.len(), cols: cols.len(), data }
    }

    pub fn det(&self) -> Result<Rational> {
        det_exact(self)
    }
}

/// Exact determinant. The empty matrix has determinant 1.
///
/// Up to [`FRACTION_FREE_MAX_DIM`] rows this is Bareiss elimination over the
/// integers; above that it is a multi-modular computation sized by the
/// Hadamard bound.
pub fn det_exact(m: &RationalMatrix) -> Result<Rational> {
    det_exact_with(m, &PrimeSet::default())
}

pub fn det_exact_with(m: &RationalMatrix, primes: &PrimeSet) -> Result<Rational> {
    if !m.is_square() {
        return Err(Error::DimMismatch(format!("{}x{} matrix has no determinant", m.rows, m.cols)));
    }
    let (ints, scale) = clear_denominators(m);
    let det = if m.rows <= FRACTION_FREE_MAX_DIM {
        bareiss(m.rows, ints)
    } else {
        det_integer_modular(m.rows, &ints, primes)?
    };
    Ok(Rational::new(det, scale))
}

/// Scales each row to integers; returns the entries and the product of the
/// row multipliers.
fn clear_denominators(m: &RationalMatrix) -> (Vec<BigInt>, BigInt) {
    let mut scale = BigInt::one();
    let mut out = Vec::with_capacity(m.data.len());
    for i in 0..m.rows {
        let row = m.row(i);
        let l = denominator_lcm(row);
        for r in row {
            out.push(if l.is_one() { r.numer().clone() } else { r.numer() * (&l / r.denom()) });
        }
        scale *= l;
    }
    (out, scale)
}

fn bareiss(n: usize, mut a: Vec<BigInt>) -> BigInt {
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k * n + k].is_zero() {
            let Some(r) = (k + 1..n).find(|&r| !a[r * n + k].is_zero()) else {
                return BigInt::zero();
            };
            for j in 0..n {
                a.swap(r * n + j, k * n + j);
            }
            sign = -sign;
        }
        let pivot = a[k * n + k].clone();
        for i in k + 1..n {
            let aik = a[i * n + k].clone();
            for j in k + 1..n {
                let v = &pivot * &a[i * n + j] - &aik * &a[k * n + j];
                a[i * n + j] = v / &prev;
            }
            a[i * n + k] = BigInt::zero();
        }
        prev = pivot;
    }
    sign * &a[n * n - 1]
}

/// Hadamard bound squared: the product of squared row norms.
pub(crate) fn hadamard_bound_sq(n: usize, a: &[BigInt]) -> BigUint {
    a.chunks(n.max(1)).map(|row| row.iter().map(|x| x.magnitude() * x.magnitude()).sum::<BigUint>()).product()
}

fn det_integer_modular(n: usize, a: &[BigInt], primes: &PrimeSet) -> Result<BigInt> {
    let h2 = hadamard_bound_sq(n, a);
    if h2.is_zero() {
        return Ok(BigInt::zero());
    }
    // need a modulus M > 2·H, i.e. M² > 4·H²
    let target = h2 * 4u32;
    let mut chosen = Vec::new();
    let mut modulus = BigUint::one();
    for p in primes.iter() {
        if &modulus * &modulus > target {
            break;
        }
        chosen.push(p);
        modulus *= p;
    }
    if &modulus * &modulus <= target {
        return Err(Error::InsufficientModuli);
    }
    let small: Vec<Option<i64>> = a.iter().map(num_traits::ToPrimitive::to_i64).collect();
    let residues: Vec<(u64, u64)> = chosen
        .par_iter()
        .map(|&p| {
            let entries = a
                .iter()
                .zip(&small)
                .map(|(x, s)| match s {
                    Some(v) => v.rem_euclid(p as i64) as u64,
                    None => reduce_bigint(x, p),
                })
                .collect();
            (det_mod_raw(p, n, entries), p)
        })
        .collect();
    crt_symmetric(&residues)
}

/// `c_a(M) / c_a(M_S)` where `c_j(X)` is the coefficient of `t^j` in
/// `det(X + tI)`, `M_S` is the principal submatrix on `minor`, and `a` is the
/// order of vanishing of `det(M_S + tI)` at `t = 0`.
///
/// When `det(M_S + tI)` divides `det(M + tI)` this is the quotient's value at
/// `t = 0`, obtained without `det(M_S)` being nonzero.
pub fn lowest_shifted_ratio(m: &RationalMatrix, minor: &[usize], primes: &PrimeSet) -> Result<Rational> {
    if !m.is_square() {
        return Err(Error::DimMismatch(format!("{}x{} matrix", m.rows, m.cols)));
    }
    let n = m.rows;
    // uniform scaling keeps the shift structure: c_j(L·M) = L^(n−j)·c_j(M)
    let l = denominator_lcm(&m.data);
    let ints: Vec<BigInt> = m.data.iter().map(|r| r.numer() * (&l / r.denom())).collect();
    // every c_j is a sum of at most 2^n principal minors, each under the
    // product of max(1, row norm)
    let rows_sq: BigUint = ints
        .chunks(n.max(1))
        .map(|row| row.iter().map(|x| x.magnitude() * x.magnitude()).sum::<BigUint>().max(BigUint::one()))
        .product();
    let target = (rows_sq << (2 * n)) * 4u32;
    let small: Vec<Option<i64>> = ints.iter().map(num_traits::ToPrimitive::to_i64).collect();
    let sub: Vec<usize> = minor.iter().flat_map(|&r| minor.iter().map(move |&c| r * n + c)).collect();
    let shifted = |p: u64| {
        // det(X + tI) is the characteristic polynomial of −X
        let neg: Vec<u64> = ints
            .iter()
            .zip(&small)
            .map(|(x, s)| {
                let r = match s {
                    Some(v) => v.rem_euclid(p as i64) as u64,
                    None => reduce_bigint(x, p),
                };
                (p - r) % p
            })
            .collect();
        let minor_entries = sub.iter().map(|&k| neg[k]).collect();
        (p, charpoly_mod_raw(p, n, neg), charpoly_mod_raw(p, minor.len(), minor_entries))
    };
    let mut pool = primes.iter();
    let mut results: Vec<(u64, Vec<u64>, Vec<u64>)> = Vec::new();
    loop {
        // a prime dividing c_a(M_S) reports a later first nonzero; the true
        // order is the minimum once the product of primes exceeds the bound
        let order = results.iter().filter_map(|(_, _, c)| c.iter().position(|&x| x != 0)).min();
        let good: Vec<&(u64, Vec<u64>, Vec<u64>)> = match order {
            Some(a) => results.iter().filter(|(_, _, c)| c.iter().position(|&x| x != 0) == Some(a)).collect(),
            None => Vec::new(),
        };
        let modulus: BigUint = good.iter().map(|(p, _, _)| BigUint::from(*p)).product();
        if !good.is_empty() && &modulus * &modulus > target {
            let a = order.unwrap();
            let num = crt_symmetric(&good.iter().map(|(p, c, _)| (c[a], *p)).collect::<Vec<_>>())?;
            let den = crt_symmetric(&good.iter().map(|(p, _, c)| (c[a], *p)).collect::<Vec<_>>())?;
            let scale = num_traits::pow(Rational::from_integer(l), n - minor.len());
            return Ok(Rational::new(num, den) / scale);
        }
        // enough fresh primes to meet the bound if all of them are good
        let mut acc = modulus;
        let mut batch = Vec::new();
        while batch.is_empty() || &acc * &acc <= target {
            let Some(p) = pool.next() else { break };
            acc *= p;
            batch.push(p);
        }
        if batch.is_empty() {
            return Err(Error::InsufficientModuli);
        }
        results.extend(batch.into_par_iter().map(shifted).collect::<Vec<_>>());
    }
}

/// Sign of a permutation given as an image vector.
pub fn permutation_sign(perm: &[usize]) -> i32 {
    let mut seen = vec![false; perm.len()];
    let mut sign = 1;
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = perm[i];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

impl std::fmt::Display for RationalMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl RationalMatrix {
    /// Largest absolute entry, handy for diagnostics.
    pub fn max_abs(&self) -> Rational {
        self.data.iter().map(|x| x.abs()).max().unwrap_or_else(Rational::zero)
    }
}

#[cfg(test)]
mod tests {
    #[test]
    fn lowest_shifted_ratio_cases() {
        use crate::algebra::rational::{int, rat};
        let primes = PrimeSet::default();
        // regular minor: plain quotient of determinants
        let m = RationalMatrix::from_rows(vec![
            vec![int(2), rat(1, 3), int(0)],
            vec![int(1), int(4), int(-1)],
            vec![rat(1, 2), int(0), int(5)],
        ])
        .unwrap();
        let idx = [0, 2];
        let expected = m.det().unwrap() / m.submatrix(&idx, &idx).det().unwrap();
        assert_eq!(lowest_shifted_ratio(&m, &idx, &primes).unwrap(), expected);
        // singular minor: det(M + tI) = (t+1)·t·(t+2), minor block diag(0, 2)
        let m = RationalMatrix::from_i64(&[&[1, 7, 0], &[0, 0, 0], &[0, 3, 2]]);
        // det(M_S + tI) = t(t+2), lowest coefficient 2; det(M + tI) lowest is 2
        assert_eq!(lowest_shifted_ratio(&m, &[1, 2], &primes).unwrap(), int(1));
        // empty minor gives det(M)
        assert_eq!(lowest_shifted_ratio(&m, &[], &primes).unwrap(), int(0));
        let big = RationalMatrix::from_i64(&[&[3, 1], &[1, 2]]);
        assert_eq!(lowest_shifted_ratio(&big, &[], &primes).unwrap(), int(5));
    }

    use super::*;
    use crate::algebra::modular::{crt_reconstruct_bounded, det_mod, primes, ModMatrix};
    use crate::algebra::rational::{int, rat};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(rng: &mut ChaCha8Rng, n: usize) -> RationalMatrix {
        let data = (0..n * n).map(|_| rat(rng.random_range(-20..=20), rng.random_range(1..=6))).collect();
        RationalMatrix::from_data(n, n, data)
    }

    /// Cofactor expansion along the first row.
    fn cofactor_det(m: &RationalMatrix) -> Rational {
        let n = m.rows();
        if n == 0 {
            return int(1);
        }
        let mut total = int(0);
        for j in 0..n {
            if m.get(0, j).is_zero() {
                continue;
            }
            let rows: Vec<usize> = (1..n).collect();
            let cols: Vec<usize> = (0..n).filter(|&c| c != j).collect();
            let minor = cofactor_det(&m.submatrix(&rows, &cols));
            let term = m.get(0, j) * minor;
            if j % 2 == 0 {
                total += term;
            } else {
                total -= term;
            }
        }
        total
    }

    #[test]
    fn small_examples() {
        assert_eq!(det_exact(&RationalMatrix::identity(3)).unwrap(), int(1));
        assert_eq!(det_exact(&RationalMatrix::from_i64(&[&[1, 2], &[3, 4]])).unwrap(), int(-2));
        assert_eq!(det_exact(&RationalMatrix::zeros(0, 0)).unwrap(), int(1));
        assert!(det_exact(&RationalMatrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn repeated_row_is_singular() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut m = random_matrix(&mut rng, 8);
        for j in 0..8 {
            let v = m.get(2, j).clone();
            m.set(5, j, v);
        }
        assert_eq!(det_exact(&m).unwrap(), int(0));
    }

    #[test]
    fn agrees_with_cofactor_expansion() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 1..=6 {
            let m = random_matrix(&mut rng, n);
            assert_eq!(det_exact(&m).unwrap(), cofactor_det(&m), "n = {n}");
        }
    }

    #[test]
    fn both_routes_agree_across_the_threshold() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in [12, 13, 16] {
            let m = random_matrix(&mut rng, n);
            let (ints, scale) = clear_denominators(&m);
            let via_bareiss = Rational::new(bareiss(n, ints.clone()), scale.clone());
            let via_modular = Rational::new(det_integer_modular(n, &ints, &PrimeSet::default()).unwrap(), scale);
            assert_eq!(via_bareiss, via_modular, "n = {n}");
        }
    }

    /// det_mod per prime plus rational reconstruction, independent of det_exact.
    /// The numerator is bounded by the Hadamard bound of the row-scaled matrix
    /// and the denominator by the scale, so M > 2·H·scale suffices.
    fn det_by_reconstruction(m: &RationalMatrix) -> Rational {
        let (ints, scale) = clear_denominators(m);
        let num_bound = hadamard_bound_sq(m.rows(), &ints).sqrt() + 1u32;
        let den_bound = scale.magnitude().clone();
        let need = BigUint::from(2u32) * &num_bound * &den_bound;
        let mut residues = Vec::new();
        let mut modulus = BigUint::one();
        for &p in primes() {
            if modulus > need {
                break;
            }
            let Ok(mm) = ModMatrix::from_rational(m, p) else { continue };
            residues.push((det_mod(&mm), p));
            modulus *= p;
        }
        crt_reconstruct_bounded(&residues, &num_bound, &den_bound).unwrap()
    }

    #[test]
    fn modular_reconstruction_matches_exact_up_to_20() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for n in [1, 2, 5, 9, 12, 13, 17, 20] {
            let m = random_matrix(&mut rng, n);
            assert_eq!(det_by_reconstruction(&m), det_exact(&m).unwrap(), "n = {n}");
        }
    }

    #[test]
    fn sign_of_permutations() {
        assert_eq!(permutation_sign(&[0, 1, 2]), 1);
        assert_eq!(permutation_sign(&[1, 0, 2]), -1);
        assert_eq!(permutation_sign(&[1, 2, 0]), 1);
    }

    proptest! {
        #[test]
        fn permutation_matrix_det_is_sign(perm in Just((0..7usize).collect::<Vec<_>>()).prop_shuffle()) {
            let p = RationalMatrix::permutation(&perm);
            prop_assert_eq!(det_exact(&p).unwrap(), int(permutation_sign(&perm) as i64));
        }

        #[test]
        fn product_rule(seed in 0u64..1000) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = random_matrix(&mut rng, 4);
            let b = random_matrix(&mut rng, 4);
            let ab = a.mul(&b).unwrap();
            prop_assert_eq!(det_exact(&ab).unwrap(), det_exact(&a).unwrap() * det_exact(&b).unwrap());
        }
    }
}
