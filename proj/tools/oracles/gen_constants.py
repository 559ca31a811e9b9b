#!/usr/bin/env python3
"""Regenerates data/constants.json with mpmath at 40 digits.

Every value here is an independent high-precision quadrature of the closed
forms; the C++ tests compare against these numbers.
"""
import json
import sys

import mpmath as mp

mp.mp.dps = 40


def H(x, y):
    return mp.log(mp.sqrt((1 - x * x) * (1 - y * y)) + 1 - x * y) / mp.pi


def G(x, y):
    if abs(y) >= 1:
        return mp.mpf(0)
    return H(x, y) - mp.log(abs(x - y)) / mp.pi


def torsion_integral(x):
    # split at the log singularity and at the endpoints
    pts = sorted(set([mp.mpf(-1), mp.mpf(x), mp.mpf(1)]))
    return mp.quad(lambda y: G(x, y), pts)


def main():
    out = {
        "schema_version": 1,
        "version": "2026.10.1",
        "generator": "tools/oracles/gen_constants.py (mpmath, 40 digits)",
        "c_G": float(torsion_integral(mp.mpf(0))),
        "green_0_half": float(G(mp.mpf(0), mp.mpf("0.5"))),
        "regular_part_0_0": float(H(mp.mpf(0), mp.mpf(0))),
        "green_integral_x_0p3": float(torsion_integral(mp.mpf("0.3"))),
        "green_integral_x_0p9": float(torsion_integral(mp.mpf("0.9"))),
    }
    path = sys.argv[1] if len(sys.argv) > 1 else "data/constants.json"
    with open(path, "w") as f:
        json.dump(out, f, indent=2, sort_keys=True)
        f.write("\n")


if __name__ == "__main__":
    main()
