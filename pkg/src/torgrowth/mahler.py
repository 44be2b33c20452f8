"""Numerical Mahler measure on the additive (log) scale.

Univariate values come from Jensen's formula over certified roots of the
polynomial; multivariate values come either from the one-variable
specializations t^m -> t^(m·k) along a schedule of directions k with growing
orthogonal defect (Lawton's limit), or from seeded median-of-means Monte
Carlo integration of log|f| over the unit torus.

All estimates carry a method tag and an explicit error bound; the additive
measure of a nonzero integer polynomial is nonnegative, and is 0 exactly for
generalized cyclotomic polynomials (detected in one variable by the
Kronecker-style test).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .lattices import lawton_norm
from .laurent import LaurentPoly, normalize_unit


class NonconvergenceError(RuntimeError):
    """Root refinement failed to reach the requested certification."""


@dataclass(frozen=True)
class MahlerEstimate:
    """An additive Mahler-measure value with provenance and error bound."""

    value: float
    method: str
    error_bound: float
    diagnostics: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.error_bound < 0:
            raise ValueError("error bound must be nonnegative")

    def to_json(self) -> dict:
        return {
            "value": self.value,
            "method": self.method,
            "error_bound": self.error_bound,
            "diagnostics": self.diagnostics,
        }


def _poly_coeffs(f: LaurentPoly) -> list[int]:
    """Dense coefficients (low to high) of the unit-normalized polynomial."""
    p = normalize_unit(f).poly
    deg = p.max_exponents()[0]
    out = [0] * (deg + 1)
    for (e,), c in p.terms:
        out[e] = c
    return out


def _aberth_roots(coeffs: Sequence[float], max_iter: int = 400) -> tuple[list[complex], list[float]]:
    """All roots of a polynomial (coeffs low->high, ends nonzero) plus
    per-root inclusion radii d*|p(z)|/|p'(z)| (each disk contains a root).
    """
    deg = len(coeffs) - 1
    if deg == 0:
        return [], []
    c = [complex(x) for x in coeffs]
    dcoef = [i * c[i] for i in range(1, deg + 1)]

    def horner(cs, z):
        acc = 0j
        for a in reversed(cs):
            acc = acc * z + a
        return acc

    lead = abs(c[-1])
    radius = 1.0 + max(abs(a) / lead for a in c[:-1])
    roots = [
        radius * cmath.exp(2j * cmath.pi * (k + 0.354) / deg) * (1 + 1e-3 * k / max(deg, 1))
        for k in range(deg)
    ]
    for _ in range(max_iter):
        moved = 0.0
        for i in range(deg):
            zi = roots[i]
            pv = horner(c, zi)
            dv = horner(dcoef, zi)
            if pv == 0:
                continue
            if dv == 0:
                roots[i] = zi * (1 + 1e-8) + 1e-8
                moved = math.inf
                continue
            newton = pv / dv
            s = 0j
            for j in range(deg):
                if j != i:
                    diff = zi - roots[j]
                    if diff == 0:
                        diff = 1e-20
                    s += 1.0 / diff
            denom = 1.0 - newton * s
            step = newton / denom if denom != 0 else newton
            roots[i] = zi - step
            moved = max(moved, abs(step))
        if moved < 1e-14 * max(1.0, radius):
            break
    bounds = []
    for z in roots:
        pv = horner(c, z)
        dv = horner(dcoef, z)
        if dv == 0:
            bounds.append(math.inf)
        else:
            bounds.append(deg * abs(pv) / abs(dv))
    return roots, bounds


def mahler_univariate(f: LaurentPoly, tol: float = 1e-9) -> MahlerEstimate:
    """Jensen's formula: log|lead| plus the log of every root outside the
    unit circle, with an error bound from certified per-root inclusion disks.
    """
    if f.nvars != 1:
        raise ValueError("mahler_univariate takes a one-variable polynomial")
    if f.is_zero():
        raise ValueError("the Mahler measure of 0 is undefined")
    coeffs = _poly_coeffs(f)
    deg = len(coeffs) - 1
    if deg == 0:
        return MahlerEstimate(math.log(abs(coeffs[0])), "jensen", 0.0, {"roots": []})
    for iters in (400, 2000, 10000):
        roots, bounds = _aberth_roots(coeffs, max_iter=iters)
        value = math.log(abs(coeffs[-1]))
        err = 0.0
        for z, b in zip(roots, bounds):
            r = abs(z)
            value += math.log(max(1.0, r))
            if math.isinf(b):
                err = math.inf
                break
            hi = math.log(max(1.0, r + b))
            lo = math.log(max(1.0, max(r - b, 1e-300)))
            err += hi - lo
        if err <= tol:
            return MahlerEstimate(
                value,
                "jensen",
                err,
                {"roots": [(z.real, z.imag) for z in roots], "residual_bounds": bounds},
            )
    raise NonconvergenceError(
        f"root certification stalled: error bound {err} above tolerance {tol}"
    )


def is_kronecker(f: LaurentPoly, tol: float = 1e-8) -> bool:
    """Kronecker-style zero-measure test for integer univariate polynomials:
    unit leading and trailing coefficients and every root on the unit circle
    (within the certified root tolerance).  Implies Mahler measure 0.
    """
    if f.nvars != 1:
        raise ValueError("is_kronecker takes a one-variable polynomial")
    if f.is_zero():
        raise ValueError("the zero polynomial has no Mahler measure")
    coeffs = _poly_coeffs(f)
    if abs(coeffs[0]) != 1 or abs(coeffs[-1]) != 1:
        return False
    if len(coeffs) == 1:
        return True
    roots, bounds = _aberth_roots(coeffs)
    for z, b in zip(roots, bounds):
        if math.isinf(b):
            raise NonconvergenceError("root bounds did not converge")
        if abs(abs(z) - 1.0) > b + tol:
            return False
    return True


def default_lawton_schedule(nvars: int, ms: Sequence[int] = (8, 16, 32, 64)) -> list[tuple[int, ...]]:
    """Directions k = (1, m, m^2, ...) for a geometric ladder of m."""
    return [tuple(m ** i for i in range(nvars)) for m in ms]


def mahler_lawton(f: LaurentPoly, schedule: Sequence[Sequence[int]] | None = None,
                  tol: float = 1e-9) -> MahlerEstimate:
    """Mahler measure through one-variable specializations t^m -> t^(m·k).

    The schedule must have strictly increasing orthogonal defect <k> (the
    shortest nonzero vector of k's orthogonal lattice); the limit over
    <k> -> infinity is the multivariate measure.  The reported error bound is
    the largest pairwise gap among the last three schedule values.
    """
    if f.is_zero():
        raise ValueError("the Mahler measure of 0 is undefined")
    if schedule is None:
        schedule = default_lawton_schedule(f.nvars)
    schedule = [tuple(int(x) for x in k) for k in schedule]
    if not schedule:
        raise ValueError("empty specialization schedule")
    norms = []
    for k in schedule:
        if len(k) != f.nvars:
            raise ValueError("schedule vector has wrong length")
        norms.append(lawton_norm(k))
    if f.nvars > 1 and any(b <= a for a, b in zip(norms, norms[1:])):
        raise ValueError("schedule must have strictly increasing <k>")
    values = []
    for k in schedule:
        img = f.tau(k)
        if img.is_zero():
            raise ValueError(f"specialization along {k} collapses f to 0; enlarge <k>")
        values.append(mahler_univariate(img, tol=tol).value)
    tail = values[-3:]
    gap = max((abs(a - b) for a in tail for b in tail), default=0.0)
    return MahlerEstimate(
        values[-1],
        "lawton",
        gap,
        {"schedule": [list(k) for k in schedule], "norms": norms, "values": values},
    )


def _torus_eval_log(f: LaurentPoly, thetas: np.ndarray) -> np.ndarray:
    """log|f| at torus points exp(2*pi*i*theta); theta is (N, nvars)."""
    exps = np.array([e for e, _ in f.terms], dtype=np.float64)
    coefs = np.array([c for _, c in f.terms], dtype=np.complex128)
    phases = thetas @ exps.T
    vals = np.exp(2j * np.pi * phases) @ coefs
    with np.errstate(divide="ignore"):
        return np.log(np.abs(vals))


def mahler_quadrature(f: LaurentPoly, samples: int = 1_000_000, seed: int = 0,
                      shards: int = 16) -> MahlerEstimate:
    """Median-of-means Monte Carlo estimate of the torus integral of log|f|.

    Sampling uses counter-based Philox streams spawned deterministically from
    the seed, one per shard; the value is the median of the shard means and
    the error bound is the standard error of that median
    (1.2533 * std(means) / sqrt(shards)).  Samples where log|f| is not
    finite (underflow at a zero of f) are resampled and counted.
    """
    if f.is_zero():
        raise ValueError("the Mahler measure of 0 is undefined")
    if samples < shards:
        shards = max(1, samples)
    per_shard = samples // shards
    root = np.random.SeedSequence(seed)
    children = root.spawn(shards)
    means = []
    rejected = 0
    for child in children:
        rng = np.random.Generator(np.random.Philox(child))
        remaining = per_shard
        total = 0.0
        while remaining > 0:
            chunk = min(remaining, 1 << 19)
            thetas = rng.random((chunk, f.nvars))
            logs = _torus_eval_log(f, thetas)
            good = np.isfinite(logs)
            bad = int(chunk - good.sum())
            if bad:
                rejected += bad
            total += float(logs[good].sum())
            remaining -= int(good.sum())
        means.append(total / per_shard)
    means_arr = np.asarray(means)
    value = float(np.median(means_arr))
    if shards > 1:
        err = 1.2533 * float(np.std(means_arr, ddof=1)) / math.sqrt(shards)
    else:
        err = float("inf")
    return MahlerEstimate(
        value,
        "quadrature",
        err,
        {"samples": samples, "shards": shards, "seed": seed,
         "rejected": rejected, "shard_means": [float(m) for m in means_arr]},
    )
