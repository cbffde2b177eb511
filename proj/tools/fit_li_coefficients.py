"""Refit the degree-(3,3) rational seed coefficients.

Targets come from the flashiv bisection reference on a uniform grid over
|x| < 3, 0.0005 < c < 0.9995. Relative error is minimised by nonlinear least
squares, with a penalty that keeps the denominator above 0.05 on the grid.

    PYTHONPATH=build/python python tools/fit_li_coefficients.py --out data/li_coefficients.txt
"""

import argparse
import sys

import numpy as np
from scipy.optimize import least_squares

import flashiv

TERMS = [(i, j) for i in range(4) for j in range(4) if i + j <= 3]
MIN_DENOMINATOR = 0.05
PENALTY = 10.0
HEADER = (
    "# Degree-(3,3) rational seed v(x, c) = P(x, c) / Q(x, c) with P = sum m_ij x^i c^j.\n"
    "# Order: m00 m01 m02 m03 m10 m11 m12 m20 m21 m30, then n in the same order (n00 = 1).\n"
)


def basis(x, c):
    return np.stack([x**i * c**j for i, j in TERMS], axis=1)


def split(s):
    return s[:10], np.concatenate([[1.0], s[10:]])


def make_grid(n):
    x = -3.0 * (np.arange(n) + 0.5) / n
    c = 0.0005 + 0.999 * (np.arange(n) + 0.5) / n
    xx, cc = np.meshgrid(x, c, indexing="ij")
    xx, cc = xx.ravel(), cc.ravel()
    return xx, cc, flashiv.iv_reference(xx, cc)


def fit(b, v, restarts, seed):
    def residuals(s):
        p, q = split(s)
        num, den = b @ p, b @ q
        return np.concatenate([num / den / v - 1.0, PENALTY * np.minimum(den - MIN_DENOMINATOR, 0.0)])

    def jacobian(s):
        p, q = split(s)
        num, den = b @ p, b @ q
        j_fit = np.hstack([b / (den * v)[:, None], -(b[:, 1:] * (num / (den * den * v))[:, None])])
        active = (den < MIN_DENOMINATOR)[:, None]
        j_pen = np.hstack([np.zeros((len(den), 10)), PENALTY * b[:, 1:] * active])
        return np.vstack([j_fit, j_pen])

    # Linearised start: P - v (Q - 1) = v, weighted by 1 / v.
    w = 1.0 / v
    a = np.hstack([b * w[:, None], -(b[:, 1:] * (v * w)[:, None])])
    s0, *_ = np.linalg.lstsq(a, v * w, rcond=None)

    rng = np.random.default_rng(seed)
    best = None
    for trial in range(restarts):
        init = s0 if trial == 0 else s0 * (1 + 0.5 * rng.standard_normal(19)) + 0.3 * rng.standard_normal(19)
        sol = least_squares(residuals, init, jac=jacobian, max_nfev=400, x_scale="jac")
        p, q = split(sol.x)
        den = b @ q
        if den.min() <= 0.0:
            continue
        score = np.mean(np.abs((b @ p) / den / v - 1.0))
        if best is None or score < best[0]:
            best = (score, sol.x)
    if best is None:
        sys.exit("no restart produced a positive denominator")
    return split(best[1])


def report(label, m, n, b, v):
    err = np.abs((b @ m) / (b @ n) / v - 1.0)
    print(f"{label}: max {err.max():.4f} mean {err.mean():.4f} median {np.median(err):.4f} "
          f"min Q {(b @ n).min():.4f}", file=sys.stderr)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--grid", type=int, default=200, help="points per axis")
    ap.add_argument("--stride", type=int, default=7, help="fit on every k-th grid point")
    ap.add_argument("--restarts", type=int, default=12)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", help="coefficient file to write (stdout if omitted)")
    args = ap.parse_args()

    x, c, v = make_grid(args.grid)
    b_all = basis(x, c)
    sel = np.arange(len(x)) % args.stride == 0
    m, n = fit(b_all[sel], v[sel], args.restarts, args.seed)

    report("refit", m, n, b_all, v)
    m_old, n_old = (np.asarray(a) for a in flashiv.li_coefficients())
    report("builtin", m_old, n_old, b_all, v)

    text = HEADER + "".join(f"{val!r}\n" for val in np.concatenate([m, n]).tolist())
    if args.out:
        with open(args.out, "w") as f:
            f.write(text)
    else:
        sys.stdout.write(text)


if __name__ == "__main__":
    main()
