use std::collections::HashSet;

use num_traits::Zero;

use super::rational::{format_rational, Rational};
use super::unipoly::UniPoly;
use crate::error::{Error, Result};

/// The integer abscissae 0, 1, −1, 2, −2, … in that order.
pub fn evaluation_points() -> impl Iterator<Item = i64> {
    std::iter::once(0).chain((1..).flat_map(|t| [t, -t]))
}

/// Unique polynomial of degree below `points.len()` through every point,
/// by Newton divided differences.
pub fn interpolate(points: &[(Rational, Rational)]) -> Result<UniPoly> {
    if points.is_empty() {
        return Err(Error::BadSize("interpolation needs at least one point".into()));
    }
    let mut seen = HashSet::new();
    for (x, _) in points {
        if !seen.insert(x) {
            return Err(Error::DuplicateAbscissa(format_rational(x)));
        }
    }
    let n = points.len();
    let xs: Vec<&Rational> = points.iter().map(|(x, _)| x).collect();
    // table[i] holds f[x_{i-j}, ..., x_i] after pass j
    let mut table: Vec<Rational> = points.iter().map(|(_, y)| y.clone()).collect();
    for j in 1..n {
        for i in (j..n).rev() {
            table[i] = (&table[i] - &table[i - 1]) / (xs[i] - xs[i - j]);
        }
    }
    // Horner on the Newton form: p = c_{n-1}; p = p·(λ − x_i) + c_i
    let mut coeffs = vec![Rational::zero(); n];
    coeffs[0] = table[n - 1].clone();
    let mut deg = 0;
    for i in (0..n - 1).rev() {
        deg += 1;
        for d in (1..=deg).rev() {
            let prev = coeffs[d - 1].clone();
            coeffs[d] = &coeffs[d] * -xs[i] + prev;
        }
        coeffs[0] = &coeffs[0] * -xs[i];
        coeffs[0] += &table[i];
    }
    let poly = UniPoly::from_coeffs(coeffs);
    debug_assert!(points.iter().all(|(x, y)| &poly.eval(x) == y));
    Ok(poly)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::{int, rat};
    use proptest::prelude::*;

    fn pts(v: &[(i64, i64)]) -> Vec<(Rational, Rational)> {
        v.iter().map(|&(x, y)| (int(x), int(y))).collect()
    }

    #[test]
    fn quadratic_through_three_points() {
        let p = interpolate(&pts(&[(0, 1), (1, 2), (2, 5)])).unwrap();
        assert_eq!(p, UniPoly::from_i64(&[1, 0, 1]));
    }

    #[test]
    fn constant_and_zero() {
        let p = interpolate(&[(int(0), rat(3, 7))]).unwrap();
        assert_eq!(p, UniPoly::constant(rat(3, 7)));
        assert!(interpolate(&pts(&[(0, 0), (1, 0), (-1, 0)])).unwrap().is_zero());
    }

    #[test]
    fn duplicates_rejected() {
        assert!(matches!(interpolate(&pts(&[(1, 0), (1, 2)])), Err(Error::DuplicateAbscissa(_))));
        assert!(interpolate(&[]).is_err());
    }

    #[test]
    fn point_order() {
        let v: Vec<i64> = evaluation_points().take(6).collect();
        assert_eq!(v, [0, 1, -1, 2, -2, 3]);
    }

    #[test]
    fn recovers_a_known_polynomial() {
        let target = UniPoly::from_coeffs(vec![rat(1, 2), int(0), int(-3), rat(5, 4), int(0), int(0), int(1)]);
        let points: Vec<_> = evaluation_points().take(9).map(|x| (int(x), target.eval(&int(x)))).collect();
        assert_eq!(interpolate(&points).unwrap(), target);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn passes_through_every_point(
            xs in proptest::collection::hash_set(-50i64..50, 1..9),
            ys in proptest::collection::vec((-100i64..100, 1i64..9), 9),
        ) {
            let points: Vec<_> = xs.iter().zip(&ys).map(|(&x, &(n, d))| (int(x), rat(n, d))).collect();
            let p = interpolate(&points).unwrap();
            prop_assert!(p.degree().is_none_or(|d| d < points.len()));
            for (x, y) in &points {
                prop_assert_eq!(&p.eval(x), y);
            }
        }
    }
}
