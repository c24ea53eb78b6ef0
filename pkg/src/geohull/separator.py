"""Separation inequalities and the constructive convex separator.

Works at sampled-domain scale: functions are finite samples, evaluation off
the sample grid snaps to the nearest domain point, and every checker
reports the snapping distances it incurred so tolerances stay
interpretable.  The separator phi is the lower envelope of the iterated
hull of the lifted graph: phi(x) = min height among cloud points whose base
lies within snap_radius of x.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

import numpy as np

from .errors import GeometryError, SnapRadiusError
from .extension import EPoint
from .hull import DEFAULT_MAX_POINTS, PointCloud, kantorovich_hull
from .spaces import make_space

__all__ = [
    "SampledFunction",
    "SeparatorResult",
    "SeparatorReport",
    "check_sep2",
    "check_sep1_euclidean",
    "build_separator",
    "verify_separator",
    "write_function_csv",
    "read_function_csv",
]

_DISTINCT_TOL = 1e-9


@dataclass
class SampledFunction:
    """A function known at finitely many base-space points.

    domain rows use the base space's row layout; distinctness is enforced in
    row coordinates (coincident rows are the same sample point in every
    supported space).
    """

    domain: np.ndarray
    values: np.ndarray

    def __init__(self, domain, values):
        self.domain = np.atleast_2d(np.asarray(domain, dtype=np.float64))
        self.values = np.asarray(values, dtype=np.float64).ravel()
        if self.domain.shape[0] != self.values.shape[0]:
            raise GeometryError(
                f"domain/values length mismatch: {self.domain.shape[0]} vs "
                f"{self.values.shape[0]}")
        if self.domain.shape[0] == 0:
            raise GeometryError("empty sampled function")
        if self.domain.shape[0] <= 4096:
            diff = self.domain[:, None, :] - self.domain[None, :, :]
            d2 = (diff * diff).sum(axis=2)
            np.fill_diagonal(d2, np.inf)
            if d2.min() <= _DISTINCT_TOL ** 2:
                i, j = np.unravel_index(int(d2.argmin()), d2.shape)
                raise GeometryError(
                    f"domain samples {i} and {j} coincide within "
                    f"{_DISTINCT_TOL:g}")

    def __len__(self) -> int:
        return self.domain.shape[0]

    def nearest(self, space, row) -> tuple[int, float]:
        """Index and distance of the domain sample closest to a row."""
        d = space.dist_rows(np.asarray(row, dtype=np.float64), self.domain)
        i = int(d.argmin())
        return i, float(d[i])

    @classmethod
    def from_callable(cls, xs, fn) -> "SampledFunction":
        xs = np.atleast_2d(np.asarray(xs, dtype=np.float64))
        if xs.shape[0] == 1 and xs.shape[1] > 1:
            xs = xs.T
        return cls(xs, [fn(*row) for row in xs])


def _shared_domain(f: SampledFunction, g: SampledFunction) -> None:
    if f.domain.shape != g.domain.shape or \
            not np.array_equal(f.domain, g.domain):
        raise GeometryError("f and g must share the same domain samples")


def _snap_guard(dist: float, max_snap, what: str) -> None:
    if max_snap is not None and dist > max_snap:
        raise SnapRadiusError(
            f"{what}: nearest domain sample is {dist:.6g} away, above the "
            f"configured bound {max_snap:g}; the domain is too sparse")


def check_sep2(space, f: SampledFunction, g: SampledFunction,
               tuple_budget: int, t_steps: int, seed: int, tol: float, *,
               max_len: int = 4, max_snap: float | None = None,
               hull_iterations: int = 2) -> list[dict]:
    """Sampled check of the curve inequality
    f(c(t)) <= (1-t) g(x0) + t f(x), c = geod(x0, x, .).

    A falsifier: it can only refute the inequality, never confirm it; an
    empty return means no counterexample was found within the budget.
    Each tuple draws x0 and up to max_len further domain points; x is a
    random point of their iterated segment hull, snapped to the nearest
    domain sample.  f along the curve is evaluated by snapping too; every
    violation record carries both snap distances.
    """
    _shared_domain(f, g)
    if t_steps < 2:
        raise GeometryError(f"t_steps must be >= 2, got {t_steps}")
    if tuple_budget < 0 or max_len < 1:
        raise GeometryError("tuple_budget must be >= 0 and max_len >= 1")
    rng = random.Random(seed)
    n = len(f)
    violations: list[dict] = []
    for ti in range(tuple_budget):
        x0 = rng.randrange(n)
        k = rng.randint(1, max_len)
        picked = [rng.randrange(n) for _ in range(k)]
        uniq = list(dict.fromkeys(picked))
        if len(uniq) == 1:
            xrow = f.domain[uniq[0]]
        else:
            seeds = [space.from_row(f.domain[i]) for i in uniq]
            rows = f.domain[uniq]
            diam = 0.0
            for ii in range(len(uniq)):
                d = space.dist_rows(rows[ii], rows)
                diam = max(diam, float(d.max()))
            cloud = kantorovich_hull(space, seeds, hull_iterations,
                                     max(diam / 12.0, 1e-9))
            xrow = cloud.coords[rng.randrange(len(cloud))]
        xi, snap_x = f.nearest(space, xrow)
        _snap_guard(snap_x, max_snap, f"tuple {ti}")
        p0 = space.from_row(f.domain[x0])
        px = space.from_row(f.domain[xi])
        gx0 = float(g.values[x0])
        fx = float(f.values[xi])
        for s in range(t_steps):
            t = s / (t_steps - 1)
            # the snapped x can land back on x0; the curve is then constant
            ct = f.domain[x0] if xi == x0 else \
                space.to_row(space.geod(p0, px, t))
            ei, snap_e = f.nearest(space, ct)
            _snap_guard(snap_e, max_snap, f"tuple {ti}, t={t:g}")
            lhs = float(f.values[ei])
            rhs = (1.0 - t) * gx0 + t * fx
            if lhs > rhs + tol:
                violations.append({
                    "tuple_index": ti, "t": t, "x0_index": x0,
                    "x_index": xi, "eval_index": ei,
                    "lhs": lhs, "rhs": rhs, "excess": lhs - rhs,
                    "snap_x": snap_x, "snap_eval": snap_e})
    return violations


def check_sep1_euclidean(f: SampledFunction, g: SampledFunction,
                         max_len: int, budget: int, seed: int, tol: float, *,
                         max_snap: float | None = None) -> list[dict]:
    """Sampled check of f(sum t_k x_k) <= sum t_k g(x_k) on a Euclidean
    domain, with combinations of up to max_len + 1 samples."""
    _shared_domain(f, g)
    if max_len < 1 or budget < 0:
        raise GeometryError("max_len must be >= 1 and budget >= 0")
    rng = random.Random(seed)
    n = len(f)
    violations: list[dict] = []
    for ci in range(budget):
        k = rng.randint(1, max_len + 1)
        idxs = [rng.randrange(n) for _ in range(k)]
        weights = [rng.random() for _ in range(k)]
        total = sum(weights)
        weights = [w / total for w in weights]
        comb = np.zeros(f.domain.shape[1])
        rhs = 0.0
        for w, i in zip(weights, idxs):
            comb += w * f.domain[i]
            rhs += w * float(g.values[i])
        d = np.sqrt(((f.domain - comb) ** 2).sum(axis=1))
        ei = int(d.argmin())
        snap = float(d[ei])
        _snap_guard(snap, max_snap, f"combination {ci}")
        lhs = float(f.values[ei])
        if lhs > rhs + tol:
            violations.append({
                "tuple_index": ci, "indices": idxs, "weights": weights,
                "eval_index": ei, "lhs": lhs, "rhs": rhs,
                "excess": lhs - rhs, "snap_eval": snap})
    return violations


@dataclass
class SeparatorResult:
    phi: SampledFunction
    hull_cloud: PointCloud
    violations: list = field(default_factory=list)
    snap_radius: float = 0.0
    max_snap_used: float = 0.0
    # windowed minima cannot dip below the global cloud minimum, so this
    # stays empty; kept so reports always carry the clamp count
    clamp_events: list = field(default_factory=list)


def build_separator(space, g: SampledFunction, iterations: int, res: float,
                    snap_radius: float, *, dedup_tol: float | None = None,
                    max_points: int = DEFAULT_MAX_POINTS,
                    engine: str = "auto") -> SeparatorResult:
    """Lower envelope of the iterated hull of the lifted graph of g.

    Graph points suffice: adding epigraph points vertically above a sample
    can only raise, never lower, the envelope minimum.  phi <= g pointwise
    holds exactly because every graph point is a seed of its own hull and
    snapping at x includes x itself.
    """
    if not (snap_radius > 0.0):
        raise GeometryError(f"snap_radius must be positive, got {snap_radius}")
    ext = make_space(space.id + "xr")
    seeds = [EPoint(space.from_row(row), float(v))
             for row, v in zip(g.domain, g.values)]
    cloud = kantorovich_hull(ext, seeds, iterations, res, dedup_tol,
                             max_points=max_points, engine=engine)
    bases = cloud.coords[:, :-1]
    heights = cloud.coords[:, -1]
    phi_vals = np.empty(len(g))
    max_used = 0.0
    clamp_events: list[dict] = []
    floor = float(heights.min())
    for i, row in enumerate(g.domain):
        d = space.dist_rows(row, bases)
        mask = d <= snap_radius
        if not mask.any():
            raise SnapRadiusError(
                f"no hull point within snap_radius={snap_radius:g} of domain "
                f"sample {i}; increase snap_radius or refine res")
        sel = np.flatnonzero(mask)
        j = sel[int(heights[sel].argmin())]
        v = float(heights[j])
        if v < floor:
            clamp_events.append({"index": i, "raw": v, "clamped_to": floor})
            v = floor
        phi_vals[i] = v
        # distance at which the minimizing point sat, not the nearest point
        max_used = max(max_used, float(d[j]))
    phi = SampledFunction(g.domain.copy(), phi_vals)
    return SeparatorResult(phi=phi, hull_cloud=cloud,
                           snap_radius=snap_radius, max_snap_used=max_used,
                           clamp_events=clamp_events)


@dataclass
class SeparatorReport:
    tol: float
    t_steps: int
    pair_budget: int
    seed: int
    snap_radius: float
    lower_violations: list = field(default_factory=list)
    upper_violations: list = field(default_factory=list)
    convexity_violations: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not (self.lower_violations or self.upper_violations
                    or self.convexity_violations)

    def to_record(self) -> dict:
        return {"report": "separator", "tol": self.tol,
                "t_steps": self.t_steps, "pair_budget": self.pair_budget,
                "seed": self.seed, "snap_radius": self.snap_radius,
                "lower_violations": list(self.lower_violations),
                "upper_violations": list(self.upper_violations),
                "convexity_violations": list(self.convexity_violations),
                "passed": self.passed}

    def to_text(self) -> str:
        lines = [f"separator verification (tol={self.tol:g}, "
                 f"t_steps={self.t_steps}, pairs={self.pair_budget}, "
                 f"seed={self.seed}, snap_radius={self.snap_radius:g})"]
        for name, vs in (("f <= phi", self.lower_violations),
                         ("phi <= g", self.upper_violations),
                         ("segment convexity", self.convexity_violations)):
            if vs:
                worst = max(v["excess"] for v in vs)
                lines.append(f"  {name}: {len(vs)} violation(s), "
                             f"worst excess {worst:.6g}")
            else:
                lines.append(f"  {name}: ok")
        lines.append("  => " + ("PASS" if self.passed else "FAIL"))
        return "\n".join(lines)


def verify_separator(space, f: SampledFunction, g: SampledFunction,
                     result: SeparatorResult, t_steps: int, tol: float, *,
                     pair_budget: int = 200, seed: int = 0) -> SeparatorReport:
    """Check f <= phi <= g pointwise and approximate segment convexity of
    phi along random domain pairs."""
    _shared_domain(f, g)
    _shared_domain(f, result.phi)
    if t_steps < 2:
        raise GeometryError(f"t_steps must be >= 2, got {t_steps}")
    phi = result.phi
    rep = SeparatorReport(tol=tol, t_steps=t_steps, pair_budget=pair_budget,
                          seed=seed, snap_radius=result.snap_radius)
    for i in range(len(f)):
        lo = float(f.values[i])
        mid = float(phi.values[i])
        hi = float(g.values[i])
        if lo > mid + tol:
            rep.lower_violations.append(
                {"index": i, "f": lo, "phi": mid, "excess": lo - mid})
        if mid > hi + tol:
            rep.upper_violations.append(
                {"index": i, "phi": mid, "g": hi, "excess": mid - hi})
    rng = random.Random(seed)
    n = len(f)
    for pi in range(pair_budget):
        i0 = rng.randrange(n)
        i1 = rng.randrange(n)
        if i0 == i1:
            continue
        p0 = space.from_row(phi.domain[i0])
        p1 = space.from_row(phi.domain[i1])
        v0 = float(phi.values[i0])
        v1 = float(phi.values[i1])
        for s in range(t_steps):
            t = s / (t_steps - 1)
            ct = space.to_row(space.geod(p0, p1, t))
            ei, snap = phi.nearest(space, ct)
            lhs = float(phi.values[ei])
            rhs = (1.0 - t) * v0 + t * v1
            if lhs > rhs + tol:
                rep.convexity_violations.append(
                    {"pair_index": pi, "t": t, "i0": i0, "i1": i1,
                     "eval_index": ei, "lhs": lhs, "rhs": rhs,
                     "excess": lhs - rhs, "snap_eval": snap})
    return rep


# ---------------------------------------------------------------------------
# CSV:  header x1[,x2,...],value


def write_function_csv(path, fn: SampledFunction) -> None:
    d = fn.domain.shape[1]
    header = ",".join(f"x{i + 1}" for i in range(d)) + ",value"
    with open(path, "w", newline="") as out:
        out.write(header + "\n")
        for row, v in zip(fn.domain, fn.values):
            cols = ",".join(format(c, ".17g") for c in row)
            out.write(f"{cols},{format(v, '.17g')}\n")


def read_function_csv(path) -> SampledFunction:
    import csv as _csv

    from .errors import ConfigError

    with open(path, newline="") as f:
        reader = _csv.reader(f)
        header = next(reader, None)
        if header is None or len(header) < 2 or \
                header[-1].strip() != "value" or \
                any(h.strip() != f"x{i + 1}"
                    for i, h in enumerate(header[:-1])):
            raise ConfigError(f"{path}: not a sampled-function CSV")
        rows, vals = [], []
        for row in reader:
            if not row or not any(c.strip() for c in row):
                continue
            try:
                rows.append([float(c) for c in row[:-1]])
                vals.append(float(row[-1]))
            except ValueError as exc:
                raise ConfigError(f"{path}: bad row: {exc}") from None
    if not rows:
        raise ConfigError(f"{path}: empty sampled function")
    return SampledFunction(np.asarray(rows), np.asarray(vals))
