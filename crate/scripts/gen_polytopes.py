#!/usr/bin/env python3
"""Writes the toric corpus as explicit vertex/edge/facet JSON.

Each polytope is given by inequalities <normal, x> >= offset. Vertices are
the feasible triple intersections and edges join vertices sharing two facets.
"""
import itertools
import json
import sys
from fractions import Fraction
from pathlib import Path


def det3(m):
    return (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]))


def solve(rows, rhs):
    d = det3(rows)
    if d == 0:
        return None
    out = []
    for i in range(3):
        m = [list(r) for r in rows]
        for j in range(3):
            m[j][i] = rhs[j]
        out.append(Fraction(det3(m), d))
    return out


def build(name, facets, xi, row, reconstructed=False):
    dot = lambda a, b: sum(x * y for x, y in zip(a, b))
    verts = []
    for tri in itertools.combinations(range(len(facets)), 3):
        p = solve([facets[i][0] for i in tri], [facets[i][1] for i in tri])
        if p is None or any(dot(n, p) < c for n, c in facets):
            continue
        if any(x.denominator != 1 for x in p):
            sys.exit(f"{name}: non-integral vertex {p}")
        p = [int(x) for x in p]
        if p not in verts:
            verts.append(p)
    verts.sort()
    tight = [{i for i, (n, c) in enumerate(facets) if dot(n, v) == c} for v in verts]
    for v, t in zip(verts, tight):
        if len(t) != 3:
            sys.exit(f"{name}: vertex {v} lies on {len(t)} facets")
    edges = [[a, b] for a, b in itertools.combinations(range(len(verts)), 2) if len(tight[a] & tight[b]) == 2]
    return {
        "name": name,
        "row": row,
        "xi": xi,
        "reflexive": True,
        "reconstructed": reconstructed,
        "vertices": verts,
        "edges": edges,
        "facets": [{"normal": n, "offset": c} for n, c in facets],
    }


X, Y, Z = (1, 0, 0), (0, 1, 0), (0, 0, 1)
neg = lambda v: tuple(-a for a in v)
add = lambda *vs: tuple(map(sum, zip(*vs)))
ONES = (1, 1, 1)

SIMPLEX = [(X, 0), (Y, 0), (Z, 0), (neg(ONES), -4)]
V7 = SIMPLEX + [(neg(Z), -2)]

CORPUS = [
    ("P3", SIMPLEX, [1, 1, 1], "III-1", False),
    ("V7", V7, [0, -1, 0], "III-2", False),
    ("P1xP1xP1", [(X, 0), (Y, 0), (Z, 0), (neg(X), -2), (neg(Y), -2), (neg(Z), -2)], [1, 1, 1], "I-2", False),
    ("I-3", [(X, 0), (Y, 0), (Z, 0), (neg(Z), -2), (neg(add(X, Z)), -3), (neg(add(Y, Z)), -3)], [1, 1, 1], "I-3", True),
    ("II-3.1", [(X, 0), (Y, 0), (Z, 0), (neg(Z), -2), ((-1, -1, -2), -5)], [1, 1, 1], "II-3.1", False),
    ("P1xP2", [(neg(X), 0), (neg(Z), 0), (add(X, Z), -3), (Y, 0), (neg(Y), -2)], [0, -1, 1], "II-3.2", False),
    ("II-4.1", [(X, 0), (Y, 0), (Z, 0), (neg(Y), -2), (neg(Z), -2), (neg(add(X, Z)), -3), (neg(add(Y, Z)), -3)],
     [-1, 1, 0], "II-4.1", True),
    ("II-4.2", [(X, 0), (Z, 0), (neg(X), -2), (neg(Z), -2), (neg(add(X, Z)), -3), (Y, 0), (neg(Y), -2)],
     [1, -1, 1], "II-4.2", True),
    ("III-3.1", SIMPLEX + [(neg(add(X, Y)), -3)], [1, 1, 1], "III-3.1", False),
    ("III-4.1", V7 + [((-1, -1, -2), -5)], [1, 1, 1], "III-4.1", False),
    ("III-4.2", V7 + [(add(X, Y), 1)], [-1, 0, 0], "III-4.2", False),
    ("III-4.3", V7 + [(neg(add(X, Y)), -3)], [1, 1, 1], "III-4.3", False),
    ("III-4.5", [(X, 0), (Y, 0), (Z, 0), (neg(Z), -2), (neg(ONES), -4), (add(X, Y), 1), (ONES, 2)],
     [-1, 0, 0], "III-4.5", True),
    ("P1xF1", [(X, -1), (Y, -1), (neg(add(X, Y)), -1), (neg(Y), -1), (Z, -1), (neg(Z), -1)],
     [1, 1, 1], "unlisted-1", False),
]


def main():
    out = Path(sys.argv[1] if len(sys.argv) > 1 else Path(__file__).resolve().parent.parent / "data" / "polytopes")
    out.mkdir(parents=True, exist_ok=True)
    for name, facets, xi, row, rec in CORPUS:
        p = build(name, [(list(n), c) for n, c in facets], xi, row, rec)
        (out / f"{name}.json").write_text(json.dumps(p, indent=1) + "\n")
        print(f"{name}: {len(p['vertices'])} vertices, {len(p['edges'])} edges")


if __name__ == "__main__":
    main()
