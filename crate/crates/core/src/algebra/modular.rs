//! Word-size modular arithmetic: the fixed prime list, Montgomery
//! multiplication, determinants mod p and Chinese remaindering.

use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::matrix::RationalMatrix;
use super::rational::Rational;
use crate::error::{Error, Result};

/// Number of primes in the fixed list.
pub const PRIME_COUNT: usize = 256;

/// All primes in the list are below this bound.
pub const PRIME_CEILING: u64 = 1 << 62;

/// The `PRIME_COUNT` largest primes below 2^62, in descending order.
pub fn primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let mut out = Vec::with_capacity(PRIME_COUNT);
        let mut c = PRIME_CEILING - 1;
        while out.len() < PRIME_COUNT {
            if is_prime(c) {
                out.push(c);
            }
            c -= 2;
        }
        out
    })
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, m);
        }
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller–Rabin for all 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &p in &BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// A rotation of the fixed prime list selected by a seed.
///
/// Results never depend on the seed; only which moduli are used does.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PrimeSet {
    offset: usize,
}

impl PrimeSet {
    pub fn with_seed(seed: u64) -> Self {
        PrimeSet { offset: (seed % PRIME_COUNT as u64) as usize }
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        let list = primes();
        (0..list.len()).map(move |i| list[(self.offset + i) % list.len()])
    }
}

/// Montgomery arithmetic for an odd modulus below 2^62, with R = 2^64.
#[derive(Debug, Clone, Copy)]
pub struct Montgomery {
    p: u64,
    neg_inv: u64,
    r2: u64,
}

impl Montgomery {
    pub fn new(p: u64) -> Self {
        assert!(p % 2 == 1 && p < PRIME_CEILING, "modulus must be odd and below 2^62");
        let mut inv = p;
        for _ in 0..6 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(p.wrapping_mul(inv)));
        }
        let r = ((1u128 << 64) % p as u128) as u64;
        Montgomery { p, neg_inv: inv.wrapping_neg(), r2: mul_mod(r, r, p) }
    }

    #[inline(always)]
    fn redc(&self, t: u128) -> u64 {
        let m = (t as u64).wrapping_mul(self.neg_inv);
        let u = ((t + m as u128 * self.p as u128) >> 64) as u64;
        if u >= self.p {
            u - self.p
        } else {
            u
        }
    }

    #[inline(always)]
    pub fn to_mont(&self, a: u64) -> u64 {
        self.redc(a as u128 * self.r2 as u128)
    }

    #[inline(always)]
    pub fn from_mont(&self, a: u64) -> u64 {
        self.redc(a as u128)
    }

    #[inline(always)]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        self.redc(a as u128 * b as u128)
    }

    #[inline(always)]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    pub fn pow(&self, mut a: u64, mut e: u64) -> u64 {
        let mut r = self.to_mont(1);
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }

    /// Inverse of a nonzero Montgomery-form value.
    pub fn inv(&self, a: u64) -> u64 {
        self.pow(a, self.p - 2)
    }
}

/// Dense square matrix of residues modulo a prime.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModMatrix {
    p: u64,
    n: usize,
    entries: Vec<u64>,
}

impl ModMatrix {
    /// Row-major entries, reduced into `[0, p)`.
    pub fn new(p: u64, n: usize, entries: Vec<u64>) -> Result<Self> {
        if !is_prime(p) || p >= PRIME_CEILING || p == 2 {
            return Err(Error::NotPrime(p));
        }
        if entries.len() != n * n {
            return Err(Error::DimMismatch(format!("{} entries for a {n}x{n} matrix", entries.len())));
        }
        let entries = entries.into_iter().map(|e| e % p).collect();
        Ok(ModMatrix { p, n, entries })
    }

    pub fn from_i64(p: u64, rows: &[&[i64]]) -> Result<Self> {
        let n = rows.len();
        let entries = rows.iter().flat_map(|r| r.iter().map(|&v| v.rem_euclid(p as i64) as u64)).collect();
        Self::new(p, n, entries)
    }

    /// Reduces a rational matrix; fails when `p` divides a denominator.
    pub fn from_rational(m: &RationalMatrix, p: u64) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::DimMismatch("matrix is not square".into()));
        }
        let mut entries = Vec::with_capacity(m.rows() * m.cols());
        for r in m.data() {
            let num = reduce_bigint(r.numer(), p);
            let den = reduce_bigint(r.denom(), p);
            if den == 0 {
                return Err(Error::BadPrime(p));
            }
            entries.push(mul_mod(num, pow_mod(den, p - 2, p), p));
        }
        Self::new(p, m.rows(), entries)
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    /// Determinant by in-place Gaussian elimination.
    pub fn det(&self) -> u64 {
        det_mod_raw(self.p, self.n, self.entries.clone())
    }

    /// Coefficients of `det(tI − A)`, lowest degree first.
    pub fn charpoly(&self) -> Vec<u64> {
        charpoly_mod_raw(self.p, self.n, self.entries.clone())
    }
}

/// Determinant of a matrix of residues already reduced into `[0, p)`.
pub(crate) fn det_mod_raw(p: u64, n: usize, mut a: Vec<u64>) -> u64 {
    if n == 0 {
        return 1 % p;
    }
    let mg = Montgomery::new(p);
    for x in a.iter_mut() {
        *x = mg.to_mont(*x);
    }
    let mut det = mg.to_mont(1);
    for c in 0..n {
        let Some(piv) = (c..n).find(|&r| a[r * n + c] != 0) else {
            return 0;
        };
        if piv != c {
            for j in 0..n {
                a.swap(piv * n + j, c * n + j);
            }
            det = mg.sub(0, det);
        }
        let pv = a[c * n + c];
        det = mg.mul(det, pv);
        let inv = mg.inv(pv);
        let (top, bottom) = a.split_at_mut((c + 1) * n);
        let pivot_row = &top[c * n + c + 1..c * n + n];
        for row in bottom.chunks_exact_mut(n) {
            let x = row[c];
            if x == 0 {
                continue;
            }
            let f = mg.mul(x, inv);
            for (dst, &src) in row[c + 1..].iter_mut().zip(pivot_row) {
                if src != 0 {
                    *dst = mg.sub(*dst, mg.mul(f, src));
                }
            }
        }
    }
    mg.from_mont(det)
}

/// Coefficients `c_0..=c_n` of `det(tI − A)` modulo `p`, via similarity
/// reduction to upper Hessenberg form and the standard recurrence.
pub(crate) fn charpoly_mod_raw(p: u64, n: usize, mut a: Vec<u64>) -> Vec<u64> {
    let mg = Montgomery::new(p);
    let add = |x: u64, y: u64| if x + y >= p { x + y - p } else { x + y };
    for x in a.iter_mut() {
        *x = mg.to_mont(*x);
    }
    for j in 0..n.saturating_sub(2) {
        let Some(i) = (j + 1..n).find(|&i| a[i * n + j] != 0) else {
            continue;
        };
        if i != j + 1 {
            for c in 0..n {
                a.swap(i * n + c, (j + 1) * n + c);
            }
            for r in 0..n {
                a.swap(r * n + i, r * n + j + 1);
            }
        }
        let inv = mg.inv(a[(j + 1) * n + j]);
        for i in j + 2..n {
            let u = mg.mul(a[i * n + j], inv);
            if u == 0 {
                continue;
            }
            for c in j..n {
                let v = mg.mul(u, a[(j + 1) * n + c]);
                a[i * n + c] = mg.sub(a[i * n + c], v);
            }
            for r in 0..n {
                let v = mg.mul(u, a[r * n + i]);
                a[r * n + j + 1] = add(a[r * n + j + 1], v);
            }
        }
    }
    let one = mg.to_mont(1);
    let mut polys: Vec<Vec<u64>> = vec![vec![one]];
    for m in 1..=n {
        let prev = &polys[m - 1];
        let h = a[(m - 1) * n + m - 1];
        // (t − h)·p_{m−1}
        let mut next = vec![0u64; m + 1];
        for (k, &c) in prev.iter().enumerate() {
            next[k + 1] = add(next[k + 1], c);
            next[k] = mg.sub(next[k], mg.mul(h, c));
        }
        let mut t = one;
        for i in 1..m {
            t = mg.mul(t, a[(m - i) * n + m - i - 1]);
            if t == 0 {
                break;
            }
            let f = mg.mul(t, a[(m - i - 1) * n + m - 1]);
            if f == 0 {
                continue;
            }
            for (k, &c) in polys[m - i - 1].iter().enumerate() {
                next[k] = mg.sub(next[k], mg.mul(f, c));
            }
        }
        polys.push(next);
    }
    polys.pop().unwrap().into_iter().map(|c| mg.from_mont(c)).collect()
}

/// Determinant modulo the matrix's prime.
pub fn det_mod(m: &ModMatrix) -> u64 {
    m.det()
}

pub(crate) fn reduce_bigint(x: &BigInt, p: u64) -> u64 {
    if let Some(v) = x.to_i64() {
        return v.rem_euclid(p as i64) as u64;
    }
    let r = x.mod_floor(&BigInt::from(p));
    r.to_u64().expect("residue fits in u64")
}

/// Chinese remaindering into `[0, M)`; returns the residue and `M`.
pub fn crt_combine(residues: &[(u64, u64)]) -> Result<(BigUint, BigUint)> {
    let mut x = BigUint::zero();
    let mut m = BigUint::one();
    for (i, &(r, p)) in residues.iter().enumerate() {
        if residues[..i].iter().any(|&(_, q)| q == p) {
            return Err(Error::BadSize(format!("modulus {p} repeated")));
        }
        let r = r % p;
        let x_mod = (&x % p).to_u64().unwrap();
        let m_mod = (&m % p).to_u64().unwrap();
        let m_inv = pow_mod(m_mod, p - 2, p);
        let t = mul_mod((r + p - x_mod) % p, m_inv, p);
        x += &m * t;
        m *= p;
    }
    Ok((x, m))
}

/// The unique integer in `(-M/2, M/2]` with the given residues.
pub fn crt_symmetric(residues: &[(u64, u64)]) -> Result<BigInt> {
    let (x, m) = crt_combine(residues)?;
    let x = BigInt::from_biguint(Sign::Plus, x);
    let m = BigInt::from_biguint(Sign::Plus, m);
    Ok(if &x * 2 > m { x - m } else { x })
}

/// Rational reconstruction from residues modulo distinct primes.
///
/// Finds `a/b` with `|a|, b ≤ sqrt(M/2)` congruent to the combined residue,
/// which is unique when it exists.
pub fn crt_reconstruct(residues: &[(u64, u64)]) -> Result<Rational> {
    if residues.is_empty() {
        return Err(Error::InsufficientModuli);
    }
    let (u, m) = crt_combine(residues)?;
    let bound = (&m / 2u32).sqrt();
    reconstruct(u, m, &bound, &bound)
}

/// Rational reconstruction with separate bounds `|a| ≤ num_bound`,
/// `0 < b ≤ den_bound`; the answer is unique once `M > 2·num_bound·den_bound`.
pub fn crt_reconstruct_bounded(residues: &[(u64, u64)], num_bound: &BigUint, den_bound: &BigUint) -> Result<Rational> {
    let (u, m) = crt_combine(residues)?;
    if m <= BigUint::from(2u32) * num_bound * den_bound {
        return Err(Error::InsufficientModuli);
    }
    reconstruct(u, m, num_bound, den_bound)
}

fn reconstruct(u: BigUint, m: BigUint, num_bound: &BigUint, den_bound: &BigUint) -> Result<Rational> {
    let m = BigInt::from_biguint(Sign::Plus, m);
    let nb = BigInt::from_biguint(Sign::Plus, num_bound.clone());
    let db = BigInt::from_biguint(Sign::Plus, den_bound.clone());
    let (mut r0, mut r1) = (m.clone(), BigInt::from_biguint(Sign::Plus, u));
    let (mut s0, mut s1) = (BigInt::zero(), BigInt::one());
    while r1 > nb {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let s2 = &s0 - &q * &s1;
        r0 = std::mem::replace(&mut r1, r2);
        s0 = std::mem::replace(&mut s1, s2);
    }
    if s1.is_zero() || s1.abs() > db || !s1.gcd(&m).is_one() {
        return Err(Error::InsufficientModuli);
    }
    Ok(Rational::new(r1, s1))
}
