#!/usr/bin/env python3
"""Regenerate the golden polynomials under crates/core/tests/data/v1.

Uses sympy only (its own polynomial expansion, Bareiss determinant and
Lagrange interpolation), so the values are independent of the Rust code
paths they check. Run from the repository root:

    python3 scripts/gen_golden.py
"""
import itertools
import json
import pathlib
import random

import sympy as sp

OUT = pathlib.Path(__file__).resolve().parent.parent / "crates/core/tests/data/v1"


def monomials(nvars, degree):
    if nvars == 1:
        yield (degree,)
        return
    for a in range(degree, -1, -1):
        for rest in monomials(nvars - 1, degree - a):
            yield (a,) + rest


def resultant_at(polys, variables, degrees):
    """det(M)/det(M') with the least-index assignment; None if det(M') = 0."""
    nv = len(variables)
    top = sum(d - 1 for d in degrees) + 1
    basis = list(monomials(nv, top))
    index = {m: i for i, m in enumerate(basis)}
    size = len(basis)
    rows = []
    for mu in basis:
        i = next(i for i in range(nv) if mu[i] >= degrees[i])
        shift = list(mu)
        shift[i] -= degrees[i]
        row = [sp.Integer(0)] * size
        for expo, coeff in sp.Poly(sp.expand(polys[i]), *variables).terms():
            row[index[tuple(a + b for a, b in zip(shift, expo))]] += coeff
        rows.append(row)
    full = sp.Matrix(rows)
    nonreduced = [
        r for r, mu in enumerate(basis)
        if sum(1 for i in range(nv) if mu[i] >= degrees[i]) >= 2
    ]
    minor = full.extract(nonreduced, nonreduced) if nonreduced else None
    dminor = minor.det(method="bareiss") if minor is not None else sp.Integer(1)
    if dminor == 0:
        return None
    return full.det(method="bareiss") / dminor


def interpolate(system_at, count, lam):
    points, t = [], 0
    while len(points) < count:
        for x in ([0] if t == 0 else [t, -t]):
            v = system_at(x)
            if v is not None and len(points) < count:
                points.append((x, v))
        t += 1
    return sp.Poly(sp.interpolate(points, lam), lam)


def coeffs(poly):
    c = list(reversed(poly.all_coeffs()))
    return [str(sp.Rational(x)) for x in c]


def normalized(poly):
    if poly.is_zero:
        return poly
    content, prim = poly.primitive()
    prim = sp.Poly(prim, poly.gen)
    _, prim = prim.clear_denoms()
    c, prim = prim.primitive()
    if prim.LC() < 0:
        prim = -prim
    return prim


def main():
    lam = sp.Symbol("lam")
    x1, x2, x3, beta = sp.symbols("x1 x2 x3 beta")
    xs = [x1, x2, x3]
    # single 3-uniform edge {1,2,3}: (A x)_i = product of the other two coordinates
    ax = [x2 * x3, x1 * x3, x1 * x2]

    def char_at(l):
        return resultant_at([l * xs[i] ** 2 - ax[i] for i in range(3)], xs, [2, 2, 2])

    char = interpolate(char_at, 13, lam)
    assert char.degree() == 12 and char.LC() == 1
    assert sp.expand(char.as_expr() - lam**3 * (lam**3 - 1) ** 3) == 0

    # odd order: variables (x1, x2, x3, beta), equations (A x - lam*beta*x, x.x - beta^2).
    # The plain Macaulay minor vanishes identically here, so evaluate on f(Lv)
    # for a dense integer L and divide by det(L)^(2^4).
    vs = xs + [beta]
    rng = random.Random(20240611)
    while True:
        L = sp.Matrix(4, 4, lambda i, j: rng.randint(-3, 3))
        if L.det() != 0:
            break
    sub = dict(zip(vs, list(L * sp.Matrix(vs))))
    scale = L.det() ** 16

    def e_at(l):
        sysm = [ax[i] - l * beta * xs[i] for i in range(3)] + [x1**2 + x2**2 + x3**2 - beta**2]
        sysm = [sp.expand(f.subs(sub, simultaneous=True)) for f in sysm]
        v = resultant_at(sysm, vs, [2, 2, 2, 2])
        return None if v is None else v / scale

    echar = interpolate(e_at, 30, lam)
    enorm = normalized(echar)
    # E-eigenvalues of the single edge are 0 and +-1/sqrt(3)
    assert set(sp.roots(enorm.as_expr(), lam).keys()) <= {0, 1 / sp.sqrt(3), -1 / sp.sqrt(3)}

    OUT.mkdir(parents=True, exist_ok=True)
    (OUT / "single_edge_k3_char_poly.json").write_text(json.dumps({
        "hypergraph": "n=3 k=3 edges=[[1,2,3]]",
        "degree": char.degree(),
        "coefficients": coeffs(char),
    }, indent=2) + "\n")
    (OUT / "single_edge_k3_e_char_poly.json").write_text(json.dumps({
        "hypergraph": "n=3 k=3 edges=[[1,2,3]]",
        "raw_degree": echar.degree(),
        "raw_coefficients": coeffs(echar),
        "normalized_coefficients": coeffs(enorm),
        "factored": str(sp.factor(enorm.as_expr())),
    }, indent=2) + "\n")
    print("char:", sp.factor(char.as_expr()))
    print("echar raw:", sp.factor(echar.as_expr()))


if __name__ == "__main__":
    main()
