#!/usr/bin/env python3
"""Builds anchors.csv: the published EDAP-tuned PPA points plus a constructed
1-32 MB capacity grid and the 8x3 organization-target variants per technology.

Knot values are hand-placed; intermediate grid rows are log-log interpolated
between knots and rounded. Published points are emitted verbatim. Variant curves
are the published curve scaled by per-(opt, acc) trade-off factors, checked to
lose on EDAP for every read fraction so the tuner reselects the published point.

Usage: python3 gen_anchors.py > anchors.csv
"""
import math
import sys

GRID = [1, 2, 3, 4, 5, 6, 7, 8, 10, 12, 16, 24, 32]
FIELDS = ["rl", "wl", "re", "we", "leak", "area"]

# Published iso-capacity / iso-area points (verbatim).
PUBLISHED = {
    ("SRAM", 3): (2.91, 1.53, 0.35, 0.32, 6442, 5.53),
    ("STT", 3): (2.98, 9.31, 0.81, 0.31, 748, 2.34),
    ("STT", 7): (4.58, 10.06, 0.93, 0.43, 1706, 5.12),
    ("SOT", 3): (3.71, 1.38, 0.49, 0.22, 527, 1.95),
    ("SOT", 10): (6.69, 2.47, 0.51, 0.40, 1434, 5.64),
}

# Constructed knots: (rl ns, wl ns, re nJ, we nJ, leak mW, area mm2).
KNOTS = {
    "SRAM": {
        1: (2.10, 1.10, 0.20, 0.19, 2240, 1.95),
        3: PUBLISHED[("SRAM", 3)],
        4: (3.85, 1.95, 0.41, 0.41, 8700, 7.45),
        7: (5.88, 3.10, 0.51, 0.62, 15500, 13.2),
        32: (18.3, 12.6, 1.60, 2.00, 75000, 63.0),
    },
    "STT": {
        1: (2.30, 8.80, 0.62, 0.22, 290, 0.86),
        3: PUBLISHED[("STT", 3)],
        4: (3.30, 9.45, 0.85, 0.34, 960, 3.02),
        7: PUBLISHED[("STT", 7)],
        32: (11.0, 13.0, 1.90, 1.05, 7200, 22.5),
    },
    "SOT": {
        1: (2.85, 0.95, 0.47, 0.15, 210, 0.72),
        3: PUBLISHED[("SOT", 3)],
        4: (3.80, 1.50, 0.495, 0.25, 680, 2.55),
        7: (5.35, 2.05, 0.50, 0.33, 1060, 4.12),
        10: PUBLISHED[("SOT", 10)],
        32: (12.6, 5.20, 0.80, 0.95, 4300, 17.5),
    },
}

OPTS = ["ReadLatency", "WriteLatency", "ReadEnergy", "WriteEnergy",
        "ReadEDP", "WriteEDP", "Area", "Leakage"]
ACCS = ["Normal", "Fast", "Sequential"]

# Multiplicative trade-offs relative to the published organization.
OPT_FACTORS = {
    "ReadLatency":  (0.86, 1.04, 1.30, 1.20, 1.45, 1.30),
    "WriteLatency": (1.08, 0.88, 1.18, 1.30, 1.40, 1.28),
    "ReadEnergy":   (1.30, 1.25, 0.90, 1.05, 1.05, 1.15),
    "WriteEnergy":  (1.25, 1.35, 1.08, 0.88, 1.05, 1.18),
    "ReadEDP":      (0.96, 1.10, 1.02, 1.12, 1.18, 1.20),
    "WriteEDP":     (1.10, 0.97, 1.12, 1.00, 1.18, 1.20),
    "Area":         (1.35, 1.40, 1.15, 1.15, 0.95, 0.85),
    "Leakage":      (1.45, 1.40, 1.10, 1.10, 0.80, 1.10),
}
ACC_FACTORS = {
    "Normal":     (1.00, 1.00, 1.00, 1.00, 1.00, 1.00),
    "Fast":       (0.90, 0.95, 1.35, 1.20, 1.10, 1.08),
    "Sequential": (1.25, 1.02, 0.92, 1.00, 0.97, 1.02),
}
# The published point is the variant the EDAP search settles on.
WINNER = {"SRAM": ("ReadEDP", "Normal"), "STT": ("WriteEDP", "Normal"), "SOT": ("ReadEDP", "Normal")}


def loglog(c, c0, v0, c1, v1):
    t = (math.log(c) - math.log(c0)) / (math.log(c1) - math.log(c0))
    return math.exp(math.log(v0) + t * (math.log(v1) - math.log(v0)))


def fmt(v, field):
    if field == "leak":
        return float(round(v))
    if field in ("re", "we"):
        return round(v, 3)
    return round(v, 2)


def published_curve(tech):
    knots = KNOTS[tech]
    caps = sorted(knots)
    rows = {}
    for c in GRID:
        if (tech, c) in PUBLISHED:
            rows[c] = PUBLISHED[(tech, c)]
            continue
        if c in knots:
            rows[c] = knots[c]
            continue
        lo = max(k for k in caps if k < c)
        hi = min(k for k in caps if k > c)
        rows[c] = tuple(fmt(loglog(c, lo, knots[lo][i], hi, knots[hi][i]), f)
                        for i, f in enumerate(FIELDS))
    return rows


def factors(tech, opt, acc):
    if (opt, acc) == WINNER[tech]:
        return (1.0,) * 6
    return tuple(a * b for a, b in zip(OPT_FACTORS[opt], ACC_FACTORS[acc]))


def edap(p, rho, leak=True):
    rl, wl, re_, we, lk, area = p
    d = (rho * rl + (1 - rho) * wl) * 1e-9
    e = (rho * re_ + (1 - rho) * we) * 1e-9 + (lk * 1e-3 * d if leak else 0.0)
    return e * d * area


def check(curves):
    problems = []
    s, t, o = curves["SRAM"], curves["STT"], curves["SOT"]
    for c in GRID:
        if c <= 3 and not (s[c][0] < t[c][0] and s[c][0] < o[c][0]):
            problems.append(f"SRAM read latency not lowest at {c}")
        if c >= 4 and not (t[c][0] < s[c][0] and o[c][0] < s[c][0]):
            problems.append(f"MRAM read latency not below SRAM at {c}")
        if (o[c][2] <= s[c][2]) != (c >= 7):
            problems.append(f"SOT read-energy break-even wrong at {c}")
        if not (t[c][2] > s[c][2] and t[c][2] > o[c][2]):
            problems.append(f"STT read energy not highest at {c}")
        if not (t[c][1] > s[c][1] and t[c][1] > o[c][1]):
            problems.append(f"STT write latency not highest at {c}")
        if not (o[c][3] < t[c][3] and o[c][3] < s[c][3]):
            problems.append(f"SOT write energy not lowest at {c}")
        if c > 3 and not (s[c][3] > t[c][3]):
            problems.append(f"SRAM write energy not highest at {c}")
    for tech, curve in curves.items():
        areas = [curve[c][5] for c in GRID]
        if any(b <= a for a, b in zip(areas, areas[1:])):
            problems.append(f"{tech} area not strictly increasing")
        for c in GRID:
            base = curve[c]
            for opt in OPTS:
                for acc in ACCS:
                    if (opt, acc) == WINNER[tech]:
                        continue
                    f = factors(tech, opt, acc)
                    var = tuple(v * k for v, k in zip(base, f))
                    for leak in (True, False):
                        for i in range(101):
                            rho = i / 100
                            if edap(var, rho, leak) <= edap(base, rho, leak) * 1.001:
                                problems.append(f"{tech} {opt}/{acc} beats published at {c} MB rho={rho}")
                                break
    return problems


def main():
    curves = {tech: published_curve(tech) for tech in KNOTS}
    problems = check(curves)
    if problems:
        for p in problems:
            print(p, file=sys.stderr)
        sys.exit(1)
    out = sys.stdout
    out.write("# nvcache-dse v1 anchor dataset\n")
    out.write("# Rows tagged `published` reproduce measured iso-capacity/iso-area values verbatim.\n")
    out.write("# Rows tagged `constructed` are shape-faithful, not value-faithful: hand-placed\n")
    out.write("# knots honoring the qualitative capacity crossovers, log-log filled in between.\n")
    out.write("# Variant rows (non-EDAP opt) are the EDAP row scaled by per-target trade-off factors.\n")
    out.write("tech,opt,acc,capacity_mb,read_lat_ns,write_lat_ns,read_e_nj,write_e_nj,leak_mw,area_mm2\n")

    def row(tech, opt, acc, c, vals):
        rl, wl, re_, we, lk, area = vals
        return f"{tech},{opt},{acc},{c},{rl:g},{wl:g},{re_:g},{we:g},{lk:g},{area:g}\n"

    for tech in ["SRAM", "STT", "SOT"]:
        out.write(f"# {tech}: published EDAP-tuned curve\n")
        for c in GRID:
            tag = "published" if (tech, c) in PUBLISHED else "constructed"
            out.write(f"# {tag}\n")
            out.write(row(tech, "EDAP", "Normal", c, curves[tech][c]))
        for opt in OPTS:
            for acc in ACCS:
                f = factors(tech, opt, acc)
                out.write(f"# {tech} {opt}/{acc}: constructed variant, factors {' '.join(f'{x:.4g}' for x in f)}\n")
                for c in GRID:
                    vals = tuple(float(f"{v * k:.6g}") for v, k in zip(curves[tech][c], f))
                    out.write(row(tech, opt, acc, c, vals))


if __name__ == "__main__":
    main()
