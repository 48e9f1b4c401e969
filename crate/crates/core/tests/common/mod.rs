//! Test-only oracles, written without touching the library's algorithms.
#![allow(dead_code)]

use hyperspec::algebra::rational::{int, rat};
use hyperspec::algebra::{Rational, RationalMatrix, UniPoly};
use hyperspec::tensor::Tensor;
use rand::Rng;

/// det(λI − A) by Laplace expansion along the first row, over polynomial entries.
pub fn cofactor_charpoly(a: &RationalMatrix) -> UniPoly {
    let n = a.rows();
    let entries: Vec<Vec<UniPoly>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let c = -a.get(i, j).clone();
                    if i == j {
                        UniPoly::from_coeffs(vec![c, int(1)])
                    } else {
                        UniPoly::constant(c)
                    }
                })
                .collect()
        })
        .collect();
    laplace(&entries)
}

fn laplace(m: &[Vec<UniPoly>]) -> UniPoly {
    let n = m.len();
    if n == 0 {
        return UniPoly::one();
    }
    let mut acc = UniPoly::zero();
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<UniPoly>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, p)| p.clone()).collect())
            .collect();
        let term = m[0][j].mul(&laplace(&minor));
        acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
    }
    acc
}

/// Plain cofactor determinant of a rational matrix.
pub fn cofactor_det(a: &RationalMatrix) -> Rational {
    let n = a.rows();
    if n == 0 {
        return int(1);
    }
    let mut acc = int(0);
    for j in 0..n {
        let rows: Vec<usize> = (1..n).collect();
        let cols: Vec<usize> = (0..n).filter(|&c| c != j).collect();
        let term = a.get(0, j) * cofactor_det(&a.submatrix(&rows, &cols));
        if j % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

pub fn small_rational<R: Rng>(rng: &mut R) -> Rational {
    rat(rng.random_range(-4..=4), rng.random_range(1..=3))
}

pub fn random_symmetric_matrix<R: Rng>(rng: &mut R, n: usize) -> RationalMatrix {
    let mut m = RationalMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = small_rational(rng);
            m.set(i, j, v.clone());
            m.set(j, i, v);
        }
    }
    m
}

pub fn random_matrix<R: Rng>(rng: &mut R, n: usize) -> RationalMatrix {
    let mut m = RationalMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            m.set(i, j, small_rational(rng));
        }
    }
    m
}

/// Random symmetric tensor with small integer entries.
pub fn random_symmetric_tensor<R: Rng>(rng: &mut R, order: usize, dim: usize) -> Tensor {
    let mut t = Tensor::zeros(order, dim).unwrap();
    let total = dim.pow(order as u32);
    for f in 0..total {
        let idx = t.multi_index(f);
        if idx.windows(2).all(|w| w[0] <= w[1]) {
            let v = int(rng.random_range(-2..=2));
            for g in 0..total {
                let mut other = t.multi_index(g);
                other.sort_unstable();
                if other == idx {
                    t.set(&t.multi_index(g), v.clone());
                }
            }
        }
    }
    t
}

/// Random exactly orthogonal rational 3×3 matrices: signed permutations,
/// optionally composed with an embedded 2×2 swap block or the 3×3 block
/// `(2/3)J − I`.
pub fn random_rational_orthogonal<R: Rng>(rng: &mut R) -> RationalMatrix {
    let mut perm = [0usize, 1, 2];
    for i in (1..3).rev() {
        perm.swap(i, rng.random_range(0..=i));
    }
    let mut p = RationalMatrix::zeros(3, 3);
    for (i, &j) in perm.iter().enumerate() {
        p.set(i, j, int(if rng.random_bool(0.5) { 1 } else { -1 }));
    }
    let block = match rng.random_range(0..3) {
        0 => RationalMatrix::identity(3),
        1 => RationalMatrix::from_i64(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 1]]),
        _ => {
            let mut b = RationalMatrix::zeros(3, 3);
            for i in 0..3 {
                for j in 0..3 {
                    b.set(i, j, if i == j { rat(-1, 3) } else { rat(2, 3) });
                }
            }
            b
        }
    };
    block.mul(&p).unwrap()
}

pub fn is_orthogonal(p: &RationalMatrix) -> bool {
    p.mul(&p.transpose()).unwrap() == RationalMatrix::identity(p.rows())
}
