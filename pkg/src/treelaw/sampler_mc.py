"""Seeded Monte Carlo for MST under product measures, plus statistical checks."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .graph_core import Graph, GraphError, kruskal_select
from .shift_exact import EdgeMeasure, shift_measures

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SamplerConfig:
    seed: int = 0
    samples: int = 100_000
    streams: int = 1

    def __post_init__(self):
        if self.samples < 1 or self.streams < 1:
            raise ValueError("samples and streams must be positive")


@dataclass
class EmpiricalTreeDistribution:
    counts: dict
    n: int
    ties: int = 0

    def freq(self, t) -> float:
        return self.counts.get(tuple(t), 0) / self.n

    def stderr(self, t) -> float:
        p = self.freq(t)
        return math.sqrt(p * (1 - p) / self.n)

    def edge_freq(self, e: int) -> float:
        return sum(c for t, c in self.counts.items() if e in t) / self.n

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "ties": self.ties,
            "counts": [{"tree": list(t), "count": c} for t, c in sorted(self.counts.items())],
        }


def _as_measures(spec, m: int) -> list:
    if all(isinstance(x, EdgeMeasure) for x in spec):
        out = list(spec)
    else:
        out = shift_measures(spec)
    if len(out) != m:
        raise ValueError(f"need {m} edge laws, got {len(out)}")
    return out


def draw_weights(measures: Sequence[EdgeMeasure], size: int, rng: np.random.Generator) -> np.ndarray:
    """Float weights, shape (size, m); atoms and uniform pieces only."""
    w = np.empty((size, len(measures)))
    for j, mu in enumerate(measures):
        if not mu.is_uniform_mixture():
            raise ValueError("sampler handles atoms and uniform pieces only")
        comps = [(float(x), float(x), float(p)) for x, p in mu.atoms]
        comps += [(float(a), float(b), float(c[0] * (b - a))) for a, b, c in mu.pieces]
        probs = np.array([c[2] for c in comps])
        pick = rng.choice(len(comps), size=size, p=probs / probs.sum())
        lo = np.array([c[0] for c in comps])[pick]
        hi = np.array([c[1] for c in comps])[pick]
        w[:, j] = lo + (hi - lo) * rng.random(size)
    return w


def _tally(g: Graph, w: np.ndarray, counts: dict) -> int:
    order = np.argsort(w, axis=1, kind="stable")
    srt = np.take_along_axis(w, order, axis=1)
    ties = int(np.count_nonzero(np.any(np.diff(srt, axis=1) == 0, axis=1)))
    uniq, mult = np.unique(order, axis=0, return_counts=True)
    for row, c in zip(uniq, mult):
        t = kruskal_select(g, [int(x) for x in row])
        counts[t] = counts.get(t, 0) + int(c)
    return ties


def sample_mst_empirical(g: Graph, spec, cfg: SamplerConfig,
                         chunk: int = 200_000) -> EmpiricalTreeDistribution:
    """Tally Kruskal trees over cfg.samples independent weight draws.

    Each stream gets its own child of SeedSequence(cfg.seed); streams are
    merged in index order, so counts depend only on (seed, streams).  Ties
    can only happen at float precision and go to the lower edge index.
    """
    if not g.is_connected():
        raise GraphError("graph not connected")
    measures = _as_measures(spec, g.m)
    children = np.random.SeedSequence(cfg.seed).spawn(cfg.streams)
    base, extra = divmod(cfg.samples, cfg.streams)
    counts = {}
    ties = 0
    for i, child in enumerate(children):
        rng = np.random.default_rng(child)
        todo = base + (1 if i < extra else 0)
        while todo > 0:
            size = min(chunk, todo)
            ties += _tally(g, draw_weights(measures, size, rng), counts)
            todo -= size
    if ties:
        log.warning("%d samples had tied weights; broken by edge index", ties)
    return EmpiricalTreeDistribution(dict(sorted(counts.items())), cfg.samples, ties)


def z_scores(emp: EmpiricalTreeDistribution, exact: dict) -> dict:
    """Per-tree (freq - p) / sqrt(p(1-p)/N); inf when p is 0 but the tree was seen."""
    out = {}
    for t in set(exact) | set(emp.counts):
        p = float(exact.get(t, 0))
        f = emp.freq(t)
        if p in (0.0, 1.0):
            out[t] = 0.0 if f == p else math.inf
        else:
            out[t] = (f - p) / math.sqrt(p * (1 - p) / emp.n)
    return out


def consistent_with(emp: EmpiricalTreeDistribution, exact: dict, sigmas: float = 4.0) -> bool:
    return all(abs(z) <= sigmas for z in z_scores(emp, exact).values())


def tv_to(emp: EmpiricalTreeDistribution, target: dict) -> float:
    keys = set(target) | set(emp.counts)
    return 0.5 * sum(abs(emp.freq(t) - float(target.get(t, 0))) for t in keys)


# ---- interval sliding --------------------------------------------------

@dataclass
class SlideReport:
    k: int
    grid: list
    estimates: dict            # j -> list of P(e_j in T) per grid point
    stderr: dict
    violations: list = field(default_factory=list)
    strict: dict = field(default_factory=dict)   # j -> increase seen on overlapping steps

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {
            "result": "PASS" if self.passed else "FAIL",
            "k": self.k,
            "grid": [str(Fraction(t)) for t in self.grid],
            "estimates": {str(j): v for j, v in self.estimates.items()},
            "stderr": {str(j): v for j, v in self.stderr.items()},
            "violations": self.violations,
            "strictly_increasing": {str(j): v for j, v in self.strict.items()},
        }


def slide_monotonicity_test(g: Graph, s: Sequence, k: int, t_grid: Sequence,
                            cfg: SamplerConfig, sigmas: float = 3.0) -> SlideReport:
    """Slide edge k's interval up by t and watch P(e_j in T) for j != k.

    A drop of more than ``sigmas`` standard errors between neighbouring grid
    points is a violation.  Steps where the two intervals overlap at both
    grid points should show a significant rise; that is recorded in
    ``strict``.
    """
    if len(t_grid) < 3:
        raise ValueError("need at least 3 grid points")
    s = [Fraction(str(x)) if not isinstance(x, Fraction) else x for x in s]
    grid = sorted(Fraction(str(t)) if not isinstance(t, Fraction) else t for t in t_grid)
    others = [j for j in range(g.m) if j != k]
    est = {j: [] for j in others}
    err = {j: [] for j in others}
    for i, t in enumerate(grid):
        shifted = list(s)
        shifted[k] += t
        sub = SamplerConfig(cfg.seed + i, cfg.samples, cfg.streams)
        emp = sample_mst_empirical(g, shifted, sub)
        for j in others:
            p = emp.edge_freq(j)
            est[j].append(p)
            err[j].append(math.sqrt(max(p * (1 - p), 1e-300) / emp.n))
    report = SlideReport(k, grid, est, err)
    for j in others:
        rises = []
        for i in range(len(grid) - 1):
            diff = est[j][i + 1] - est[j][i]
            sd = math.hypot(err[j][i], err[j][i + 1])
            if diff < -sigmas * sd:
                report.violations.append({"edge": j, "step": i, "drop": -diff, "sd": sd})
            overlap = all(abs((s[k] + t) - s[j]) < 1 for t in (grid[i], grid[i + 1]))
            if overlap:
                rises.append(diff > sigmas * sd)
        report.strict[j] = bool(rises) and all(rises)
    return report


# ---- FKG-type check ----------------------------------------------------

def fkg_check(measures: Sequence[EdgeMeasure], cfg: SamplerConfig,
              sigmas: float = 4.0) -> dict:
    """Empirical check of P(a<b, a<c) >= P(a<b) P(a<c) for three variables.

    This is P(a<b | a<c) >= P(a<b) multiplied through, and stays defined
    when P(a<c) = 0.  The covariance's standard error uses the delta method.
    """
    if len(measures) != 3:
        raise ValueError("need exactly three variables")
    rng = np.random.default_rng(np.random.SeedSequence(cfg.seed))
    w = draw_weights(measures, cfg.samples, rng)
    ab = (w[:, 0] < w[:, 1]).astype(float)
    ac = (w[:, 0] < w[:, 2]).astype(float)
    p_ab, p_ac = float(ab.mean()), float(ac.mean())
    cov = float((ab * ac).mean()) - p_ab * p_ac
    infl = ab * ac - ab * p_ac - ac * p_ab
    sd = float(infl.std()) / math.sqrt(cfg.samples)
    n_c = int(ac.sum())
    return {
        "p_ab": p_ab,
        "p_ac": p_ac,
        "p_ab_given_ac": float(ab[ac > 0].mean()) if n_c else None,
        "covariance": cov,
        "sd": sd,
        "holds": cov >= -sigmas * sd,
    }


def random_measure(rng: np.random.Generator, grid: int = 8, max_atoms: int = 1,
                   used_atoms: set | None = None) -> EdgeMeasure:
    """A small random law: one or two uniform pieces on a 1/grid lattice, maybe an atom.

    Atom locations sit at odd multiples of 1/(4 grid) and are kept distinct
    across calls through ``used_atoms``, so specs built this way never collide.
    """
    used = used_atoms if used_atoms is not None else set()
    parts = []
    for _ in range(int(rng.integers(1, 3))):
        a = int(rng.integers(0, 2 * grid))
        b = a + int(rng.integers(1, grid + 1))
        parts.append(("u", Fraction(a, grid), Fraction(b, grid)))
    for _ in range(int(rng.integers(0, max_atoms + 1))):
        while True:
            loc = Fraction(2 * int(rng.integers(0, 8 * grid)) + 1, 4 * grid)
            if loc not in used:
                used.add(loc)
                break
        parts.append(("a", loc))
    raw = [int(x) for x in rng.integers(1, 5, size=len(parts))]
    total = sum(raw)
    atoms, pieces = [], []
    for part, r in zip(parts, raw):
        mass = Fraction(r, total)
        if part[0] == "a":
            atoms.append((part[1], mass))
        else:
            _, a, b = part
            pieces.append((a, b, [mass / (b - a)]))
    return EdgeMeasure(atoms, pieces)
