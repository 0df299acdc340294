#!/usr/bin/env python3
"""Independent evaluations of the embedding-dimension calculators.

Evaluates the four bounds and the sampling-quality constant on a fixed
27-point parameter grid and emits a C++ include file with the frozen
values. Written and run before the C++ implementations; the unit and
acceptance tests compare against this file at 1e-10 relative.

Regenerate with:  python3 tests/oracles/bounds_oracle.py > tests/bounds_expected.inc
"""

import math

CONFIGS = [
    # (P, dims, R, N)
    (1, (64,), 1, 8),
    (3, (16, 16, 16), 2, 6),
    (2, (32, 128), 3, 5),
]
EPS_VALUES = (0.5, 0.25, 0.1)
DELTA_VALUES = (0.01, 0.05, 0.1)


def j_subspace(dims, r, eps, delta):
    p = len(dims)
    value = (8.0 / 3.0) * 2.0**p * float(r) ** (p + 1) / eps**2
    value *= math.log(2.0 * r * (p + 1) / delta)
    for ip in dims:
        value *= math.log(2.0 * ip * r * (p + 1) / delta)
    return value


def j_jlt(dims, n, eps, delta):
    p = len(dims)
    value = (16.0 / 3.0) * 4.0**p / eps**2
    value *= math.log(4.0 * n * n * (p + 1) / delta)
    for ip in dims:
        value *= math.log(4.0 * ip * n * n * (p + 1) / delta)
    return value


def j_simplified(dims, n, eps, delta, c1=1.0, c2=1.0):
    p = len(dims)
    assert n > max(p, 4)
    value = c1 / eps**2 * c2**p * math.log(n / delta)
    for ip in dims:
        value *= math.log(ip * n / delta)
    return value


def j_jin(dims, n, eps, delta, c=1.0):
    p = len(dims)
    log1 = math.log(p * n / delta)
    prod_dims = 1.0
    for ip in dims:
        prod_dims *= ip
    inner = log1**p / eps
    assert p * n / delta > 1.0 and inner > 1.0 and prod_dims > 1.0
    return (
        c
        / eps**2
        * log1 ** (2 * p - 1)
        * math.log(inner) ** 4
        * math.log(prod_dims)
    )


def beta(dims, r, eta):
    inv = 1.0
    for ip in dims:
        inv *= 2.0 * r * math.log(2.0 * ip * r / eta)
    return min(1.0, 1.0 / inv)


def main():
    print("// Generated by tests/oracles/bounds_oracle.py. Do not edit.")
    print("// clang-format off")
    print("static const BoundsOracleRow kBoundsOracle[] = {")
    for p, dims, r, n in CONFIGS:
        dims_str = "{" + ", ".join(str(d) for d in dims) + "}"
        for eps in EPS_VALUES:
            for delta in DELTA_VALUES:
                row = (
                    j_subspace(dims, r, eps, delta),
                    j_jlt(dims, n, eps, delta),
                    j_simplified(dims, n, eps, delta),
                    j_jin(dims, n, eps, delta),
                    beta(dims, r, delta),
                )
                vals = ", ".join(f"{v:.17g}" for v in row)
                print(
                    f"    {{{p}, {dims_str}, {r}, {n}, {eps:.17g}, "
                    f"{delta:.17g}, {vals}}},"
                )
    print("};")
    print("// clang-format on")


if __name__ == "__main__":
    main()
