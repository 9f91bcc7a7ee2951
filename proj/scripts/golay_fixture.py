#!/usr/bin/env python3
"""Writes base spectral data JSON for antipodal distance-regular graphs.

The graph is described by its intersection array only. Eigenvalues come from
the tridiagonal intersection matrix, multiplicities from the standard
sequences (m = n / sum_i k_i u_i^2), and projector entries from
(E_theta)_{xy} = m u_d(theta) / n for vertices x, y at distance d.
The JSON records the pair (0, 1) as an antipodal pair at the diameter.
"""
import argparse
import json
from fractions import Fraction

import numpy as np

GRAPHS = {
    # bipartite double of the coset graph of the binary Golay code
    "golay_double_coset": ([23, 22, 21, 20, 3, 2, 1], [1, 2, 3, 20, 21, 22, 23]),
    # coset graph of the shortened binary Golay code
    "shortened_golay": ([22, 21, 20, 3, 2, 1], [1, 2, 3, 20, 21, 22]),
}


def spectral_data(b, c):
    k = b[0]
    d = len(b)
    bs = list(b) + [0]
    cs = [0] + list(c)
    a = [k - bs[i] - cs[i] for i in range(d + 1)]
    sizes = [1]
    for i in range(d):
        sizes.append(sizes[-1] * bs[i] // cs[i + 1])
    n = sum(sizes)
    tri = np.zeros((d + 1, d + 1))
    for i in range(d + 1):
        tri[i, i] = a[i]
        if i > 0:
            tri[i, i - 1] = cs[i]
        if i < d:
            tri[i, i + 1] = bs[i]
    thetas = sorted({int(round(x)) for x in np.linalg.eigvals(tri).real}, reverse=True)
    rows = []
    for theta in thetas:
        u = [Fraction(1), Fraction(theta, k)]
        for i in range(1, d):
            u.append((theta * u[i] - cs[i] * u[i - 1] - a[i] * u[i]) / bs[i])
        norm = sum(sizes[i] * u[i] ** 2 for i in range(d + 1))
        mult = Fraction(n) / norm
        assert mult.denominator == 1
        rows.append((theta, int(mult), u[d]))
    assert sum(m for _, m, _ in rows) == n
    return k, n, rows


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("name", choices=sorted(GRAPHS))
    parser.add_argument("out")
    args = parser.parse_args()
    k, n, rows = spectral_data(*GRAPHS[args.name])
    fmt = lambda x: "%.12g" % x
    data = {
        "r": k,
        "n": n,
        "eigenvalues": [float(t) for t, _, _ in rows],
        "multiplicities": [m for _, m, _ in rows],
        "projector_entries": {
            "0,0": {fmt(t): m / n for t, m, _ in rows},
            "1,1": {fmt(t): m / n for t, m, _ in rows},
            "0,1": {fmt(t): float(m * ud) / n for t, m, ud in rows},
        },
    }
    with open(args.out, "w") as fh:
        json.dump(data, fh, indent=2)
        fh.write("\n")


if __name__ == "__main__":
    main()
