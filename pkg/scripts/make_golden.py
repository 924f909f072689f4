"""Regenerate the frozen special-function golden vectors with mpmath.

Usage: python3 scripts/make_golden.py [output.jsonl]

The grid is 20 moduli, log-spaced over [0.1, 50], times 10 arguments
evenly spaced over [-pi/2, pi/2] (both endpoints on the imaginary axis).
Every point is evaluated for K_0, K_1, K_{1/2}, K_{3/2}, K_{5/2} and E_1
at 60 significant digits.
"""
import json
import sys
from pathlib import Path

import mpmath as mp

mp.mp.dps = 60

OUT = Path(__file__).resolve().parents[1] / "src" / "impedance_green" / "data" / "golden_special.jsonl"
TWO_LAMBDAS = (0, 2, 1, 3, 5)
TOL_OFF_AXIS = 1e-12
TOL_ON_AXIS = 1e-10


def grid():
    mods = [mp.mpf("0.1") * (mp.mpf(500) ** (mp.mpf(i) / 19)) for i in range(20)]
    args = [-mp.pi / 2 + mp.pi * j / 9 for j in range(10)]
    for m in mods:
        for j, a in enumerate(args):
            on_axis = j in (0, 9)
            if on_axis:
                z = mp.mpc(0, m if j == 9 else -m)
            else:
                z = m * mp.expj(a)
            # round the abscissa to double first so the record is exact
            zc = complex(z)
            yield mp.mpc(zc.real, zc.imag), on_axis


def pair(v):
    c = complex(v)
    return [c.real, c.imag]


def main(path=OUT):
    records = []
    for z, on_axis in grid():
        tol = TOL_ON_AXIS if on_axis else TOL_OFF_AXIS
        zp = pair(z)
        for two in TWO_LAMBDAS:
            val = mp.besselk(mp.mpf(two) / 2, z)
            records.append({"fn": "K", "two_lambda": two, "z": zp, "value": pair(val), "tol": tol})
        records.append({"fn": "E1", "two_lambda": 0, "z": zp, "value": pair(mp.e1(z)), "tol": tol})
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(json.dumps(rec) + "\n")
    print(f"wrote {len(records)} records to {path}")


if __name__ == "__main__":
    main(*sys.argv[1:])
