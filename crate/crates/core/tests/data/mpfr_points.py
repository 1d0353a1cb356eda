"""Regenerates mpfr_points.txt: directed roundings of cbrt, exp, sin and
atanh at sample points, computed with MPFR through gmpy2.

Each line is `<fn> <format> <x> <RD f(x)> <RU f(x)>` with hex-float values.
"""
import random
import struct

import gmpy2
from gmpy2 import mpfr

FORMATS = {
    "b64": dict(precision=53, emin=-1073, emax=1024),
    "b32": dict(precision=24, emin=-148, emax=128),
}


def to_b32(x):
    return struct.unpack("<f", struct.pack("<f", x))[0]


def random_value(rng, fmt, lo_exp, hi_exp):
    e = rng.uniform(lo_exp, hi_exp)
    x = rng.choice([-1.0, 1.0]) * 2.0 ** e * rng.uniform(1.0, 2.0)
    return to_b32(x) if fmt == "b32" else x


def points(fn, fmt, rng):
    xs = []
    if fn == "exp":
        limit = 88.0 if fmt == "b32" else 709.0
        xs += [random_value(rng, fmt, -60, 9.5) for _ in range(60)]
        xs += [rng.uniform(-limit * 1.1, limit * 1.05) for _ in range(40)]
    elif fn == "sin":
        top = 127 if fmt == "b32" else 1023
        xs += [random_value(rng, fmt, -40, 8) for _ in range(60)]
        xs += [random_value(rng, fmt, 8, top) for _ in range(40)]
    elif fn == "cbrt":
        top = 127 if fmt == "b32" else 1023
        bottom = -149 if fmt == "b32" else -1074
        xs += [random_value(rng, fmt, bottom, top - 1) for _ in range(100)]
    elif fn == "atanh":
        xs += [random_value(rng, fmt, -60, -1) for _ in range(70)]
        xs += [rng.choice([-1, 1]) * (1 - 2.0 ** -rng.randint(2, 50)) for _ in range(30)]
    return [to_b32(x) if fmt == "b32" else x for x in xs]


def main():
    rng = random.Random(1788)
    out = []
    for fmt, params in FORMATS.items():
        for fn in ["cbrt", "exp", "sin", "atanh"]:
            for x in points(fn, fmt, rng):
                if x == 0.0 or (fn == "atanh" and abs(x) >= 1.0):
                    continue
                vals = []
                for rnd in (gmpy2.RoundDown, gmpy2.RoundUp):
                    gmpy2.set_context(gmpy2.context(subnormalize=True, round=rnd, **params))
                    vals.append(float(getattr(gmpy2, fn)(mpfr(x))))
                out.append(f"{fn} {fmt} {x.hex()} {vals[0].hex()} {vals[1].hex()}")
    with open("mpfr_points.txt", "w") as f:
        f.write("\n".join(out) + "\n")


if __name__ == "__main__":
    main()
