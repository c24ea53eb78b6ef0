"""Iterated segment hulls by exhaustive pair sampling.

The core operation grows a point cloud toward the geodesic convex hull of
its seeds: every pass connects point pairs by geodesic segments and samples
them at arc-length steps of `res`, skipping pairs both of whose members
already existed before the previous pass.  An optional on-line
deduplication keeps the cloud from exploding: a candidate within
`dedup_tol` of an already kept point is dropped.  With dedup off the result
is the verbatim construction.

Everything here is deterministic: candidates are generated and tested in
ascending (pass, i, j, k) order, so the same inputs give the same cloud
point for point, and the CSV writer gives the same bytes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _fastpath as fp
from . import halfplane as hp
from .errors import ConfigError, GeometryError, ResourceLimitError

DEFAULT_MAX_POINTS = 10**7

__all__ = [
    "DEFAULT_MAX_POINTS",
    "PointCloud",
    "GridIndex",
    "kantorovich_hull",
    "drop_set",
    "covers",
    "min_dist",
    "hausdorff",
    "generator_witness",
    "slice_cloud",
    "write_cloud_csv",
    "read_cloud_csv",
    "write_slice_csv",
    "read_slice_csv",
]


# ---------------------------------------------------------------------------
# Cloud container


@dataclass
class PointCloud:
    """A generated cloud with its construction record.

    coords: (n, ncoords) float rows in the space's row layout.
    gen: generation numbers; seeds are 1, points added in pass p are p + 1.
    parents: (n, 2) indices of the generating pair, (-1, -1) for seeds.
    pass_sizes: cloud size after seeding and after each pass.
    """

    space: object
    coords: np.ndarray
    gen: np.ndarray
    parents: np.ndarray
    pass_sizes: list[int] = field(default_factory=list)
    witnesses: list[frozenset] | None = None
    _wit_cache: dict = field(default_factory=dict, repr=False)

    def __len__(self) -> int:
        return self.coords.shape[0]

    @property
    def seed_count(self) -> int:
        return self.pass_sizes[0] if self.pass_sizes else int((self.gen == 1).sum())

    def point(self, i: int):
        return self.space.from_row(self.coords[i])

    def added_in_pass(self, p: int) -> np.ndarray:
        """Rows appended during pass p (1-based)."""
        lo, hi = self.pass_sizes[p - 1], self.pass_sizes[p]
        return self.coords[lo:hi]

    def validate(self) -> None:
        n = len(self)
        if self.gen.shape != (n,) or self.parents.shape != (n, 2):
            raise GeometryError("inconsistent cloud record shapes")
        if n and self.gen.min() < 1:
            raise GeometryError("generation below 1")
        for i in range(n):
            p1, p2 = self.parents[i]
            if (p1 < 0) != (p2 < 0):
                raise GeometryError(f"point {i} has a half-missing parent pair")
            if p1 >= 0 and (p1 >= i or p2 >= i):
                raise GeometryError(f"point {i} generated by a later point")
            if (p1 < 0) != (self.gen[i] == 1):
                raise GeometryError(f"point {i} parent/generation mismatch")


class GridIndex:
    """Uniform bucket grid over chart coordinates.

    Cell edge equals the dedup radius, so any point within that radius of a
    query lies in the query's cell or one of its immediate neighbors; the
    implementation visits exactly that neighborhood.
    """

    __slots__ = ("cell_size", "_inv", "_cells")

    def __init__(self, cell_size: float):
        if not (cell_size > 0.0) or not math.isfinite(cell_size):
            raise GeometryError(f"cell size must be positive, got {cell_size}")
        self.cell_size = float(cell_size)
        self._inv = 1.0 / float(cell_size)
        self._cells: dict[tuple, list[int]] = {}

    def cell_of(self, chart) -> tuple:
        return tuple(int(math.floor(float(c) * self._inv)) for c in chart)

    def insert(self, chart, index: int) -> None:
        self._cells.setdefault(self.cell_of(chart), []).append(index)

    def neighbors(self, chart):
        """Indices stored in the cell of `chart` and all adjacent cells."""
        cell = self.cell_of(chart)
        m = len(cell)
        for off in _offsets(m):
            bucket = self._cells.get(tuple(c + o for c, o in zip(cell, off)))
            if bucket:
                yield from bucket

    def __len__(self) -> int:
        return sum(len(v) for v in self._cells.values())

    def cells(self):
        return self._cells.items()


_OFFSET_CACHE: dict[int, list[tuple]] = {}


def _offsets(m: int) -> list[tuple]:
    out = _OFFSET_CACHE.get(m)
    if out is None:
        out = [(0,) * m]
        rest = [()]
        for _ in range(m):
            rest = [t + (o,) for t in rest for o in (-1, 0, 1)]
        out += [t for t in rest if any(t)]
        _OFFSET_CACHE[m] = out
    return out


# ---------------------------------------------------------------------------
# Scalar row helpers (reference engine; mirrors the compiled kernels)


def _srow_dist(code: int, a, b) -> float:
    if code == 0:
        s = 0.0
        for d in range(len(a)):
            t = a[d] - b[d]
            s += t * t
        return math.sqrt(s)
    dx = a[0] - b[0]
    ya, yb = a[1], b[1]
    straight = math.sqrt(dx * dx + (ya - yb) ** 2)
    mirrored = math.sqrt(dx * dx + (ya + yb) ** 2)
    db = 2.0 * math.log((straight + mirrored) / (2.0 * math.sqrt(ya * yb)))
    if code == 1:
        return db
    dh = a[2] - b[2]
    return math.sqrt(db * db + dh * dh)


def _srow_geod(code: int, a, b, t: float) -> tuple:
    if code == 0:
        return tuple((1.0 - t) * a[d] + t * b[d] for d in range(len(a)))
    xa, ya = a[0], a[1]
    xb, yb = b[0], b[1]
    scale = max(1.0, abs(xa), abs(xb))
    if abs(xb - xa) <= 1e-8 * scale:
        w0 = xa
        w1 = math.exp((1.0 - t) * math.log(ya) + t * math.log(yb))
    else:
        mC = (xb * xb + yb * yb - xa * xa - ya * ya) / (2.0 * (xb - xa))
        R = math.sqrt((xa - mC) ** 2 + ya * ya)
        # log form of atanh((x-mC)/R), stable out to |x-mC| ~ R
        clip = fp._S_CLIP
        dxa = xa - mC
        dxb = xb - mC
        if dxa >= 0.0:
            sa = math.log((R + dxa) / ya)
        else:
            sa = -math.log((R - dxa) / ya)
        if dxb >= 0.0:
            sb = math.log((R + dxb) / yb)
        else:
            sb = -math.log((R - dxb) / yb)
        sa = min(clip, max(-clip, sa))
        sb = min(clip, max(-clip, sb))
        s = (1.0 - t) * sa + t * sb
        w0 = mC + R * math.tanh(s)
        w1 = R / math.cosh(s)
    if code == 1:
        return (w0, w1)
    return (w0, w1, (1.0 - t) * a[2] + t * b[2])


def _srow_chart(code: int, w) -> tuple:
    if code == 0:
        return tuple(w)
    if code == 1:
        return (w[0], math.log(w[1]))
    return (w[0], math.log(w[1]), w[2])


# ---------------------------------------------------------------------------
# Engine


class _Store:
    """Growable coordinate/record arrays plus the dedup index."""

    def __init__(self, space, rows, tol: float):
        self.space = space
        self.code = space.kernel_code
        self.nd = space.ncoords
        self.m = space.chart_dim
        self.tol = float(tol)
        self.inv = 1.0 / self.tol if self.tol > 0.0 else 0.0
        S = len(rows)
        cap = max(1024, 2 * S)
        self.nat = np.empty((cap, self.nd), dtype=np.float64)
        self.nat[:S] = rows
        self.cha = np.empty((cap, self.m), dtype=np.float64)
        self.cha[:S] = space.chart_rows(self.nat[:S])
        self.nxt = np.full(cap, -1, dtype=np.int64)
        self.par = np.full((cap, 2), -1, dtype=np.int64)
        tcap = 4096
        while tcap * 3 < S * 5:
            tcap *= 2
        self.keys = np.full(tcap, fp.EMPTY_KEY, dtype=np.int64)
        self.vals = np.full(tcap, -1, dtype=np.int64)
        self.n = S
        self.entries = 0
        if self.tol > 0.0:
            self.entries = int(fp.rebuild_table(self.m, self.cha, self.n,
                                                self.inv, self.keys, self.vals,
                                                self.nxt))

    def grow_points(self) -> None:
        cap = self.nat.shape[0] * 2
        for name in ("nat", "cha", "par"):
            old = getattr(self, name)
            new = np.empty((cap,) + old.shape[1:], dtype=old.dtype)
            new[: self.n] = old[: self.n]
            if name == "par":
                new[self.n:] = -1
            setattr(self, name, new)
        nxt = np.full(cap, -1, dtype=np.int64)
        nxt[: self.n] = self.nxt[: self.n]
        self.nxt = nxt

    def grow_table(self) -> None:
        tcap = self.keys.shape[0] * 2
        self.keys = np.full(tcap, fp.EMPTY_KEY, dtype=np.int64)
        self.vals = np.full(tcap, -1, dtype=np.int64)
        self.entries = int(fp.rebuild_table(self.m, self.cha, self.n, self.inv,
                                            self.keys, self.vals, self.nxt))

    # -- reference-path operations ------------------------------------------

    def ref_grid(self) -> GridIndex:
        grid = GridIndex(self.tol) if self.tol > 0.0 else None
        if grid is not None:
            for i in range(self.n):
                grid.insert(self.cha[i], i)
        return grid

    def ref_covered(self, grid, w, u) -> bool:
        for idx in grid.neighbors(u):
            if _srow_dist(self.code, self.nat[idx], w) <= self.tol:
                return True
        return False

    def ref_append(self, grid, w, u, i: int, j: int) -> None:
        if self.n >= self.nat.shape[0]:
            self.grow_points()
        self.nat[self.n] = w
        self.cha[self.n] = u
        self.par[self.n, 0] = i
        self.par[self.n, 1] = j
        if grid is not None:
            grid.insert(u, self.n)
        self.n += 1


def _ref_segment(store: _Store, grid, i: int, j: int, res: float,
                 max_points: int) -> None:
    """Reference-path body for one pair: sample, dedup, append."""
    a = store.nat[i].copy()
    b = store.nat[j].copy()
    d = _srow_dist(store.code, a, b)
    K = int(math.floor(d / res))
    if K * res >= d:
        K -= 1
    for k in range(1, K + 1):
        t = k * res / d
        w = _srow_geod(store.code, a, b, t)
        u = _srow_chart(store.code, w)
        if grid is not None and store.ref_covered(grid, w, u):
            continue
        if store.n >= max_points:
            raise ResourceLimitError(
                f"cloud exceeded max_points={max_points}; raise the limit or "
                f"coarsen res/dedup_tol")
        store.ref_append(grid, w, u, i, j)


def _run_kernel(store: _Store, runner, state: np.ndarray, args: tuple,
                max_points: int) -> None:
    while True:
        rc = runner(np.int64(store.code), np.int64(store.nd), np.int64(store.m),
                    store.nat, store.cha, store.nxt, store.par,
                    store.keys, store.vals, state, *args,
                    np.float64(store.tol), np.float64(store.inv),
                    np.int64(max_points))
        store.n = int(state[fp.S_COUNT])
        store.entries = int(state[fp.S_ENTRIES])
        if rc == fp.PASS_DONE:
            return
        if rc == fp.PASS_HIT_LIMIT:
            raise ResourceLimitError(
                f"cloud exceeded max_points={max_points}; raise the limit or "
                f"coarsen res/dedup_tol")
        if rc == fp.PASS_GROW_POINTS:
            store.grow_points()
        elif rc == fp.PASS_GROW_TABLE:
            store.grow_table()
            state[fp.S_ENTRIES] = store.entries


def _resolve_engine(space, engine: str) -> str:
    if engine not in ("auto", "compiled", "python"):
        raise ConfigError(f"unknown engine {engine!r}")
    can_compile = fp.HAVE_NUMBA and space.kernel_code in (0, 1, 2) \
        and space.ncoords <= 4
    if engine == "compiled" and not can_compile:
        raise ConfigError("compiled engine unavailable for this space")
    if engine == "auto":
        return "compiled" if can_compile else "python"
    return engine


def _check_params(res: float, dedup_tol, iterations: int, threads: int):
    if not (res > 0.0) or not math.isfinite(res):
        raise GeometryError(f"res must be positive, got {res}")
    tol = res / 2.0 if dedup_tol is None else float(dedup_tol)
    if tol < 0.0 or not math.isfinite(tol):
        raise GeometryError(f"dedup_tol must be >= 0, got {dedup_tol}")
    if iterations < 0:
        raise GeometryError(f"iterations must be >= 0, got {iterations}")
    if threads < 1:
        raise ConfigError(f"threads must be >= 1, got {threads}")
    return tol


def kantorovich_hull(space, seeds, iterations: int, res: float,
                     dedup_tol: float | None = None, *,
                     max_points: int = DEFAULT_MAX_POINTS,
                     track_witnesses: bool = False,
                     threads: int = 1,
                     engine: str = "auto") -> PointCloud:
    """Iterate segment sampling toward the geodesic convex hull of seeds.

    Pass p connects every pair (i, j) with j at or beyond the pre-previous
    pass boundary, so pairs fully inside the older cloud, already processed,
    are not revisited.  dedup_tol defaults to res/2; pass 0 to keep every
    sample verbatim.  The result never depends on `threads`; the flag is
    accepted for interface stability and validated only.
    """
    tol = _check_params(res, dedup_tol, iterations, threads)
    rows = np.asarray([space.to_row(p) for p in seeds], dtype=np.float64)
    if rows.ndim != 2 or rows.shape[0] == 0:
        raise GeometryError("need at least one seed")
    if rows.shape[0] > max_points:
        raise ResourceLimitError(
            f"{rows.shape[0]} seeds exceed max_points={max_points}")
    mode = _resolve_engine(space, engine)
    store = _Store(space, rows, tol)
    sizes = [store.n]
    prev = 0
    for p in range(iterations):
        size = store.n
        if mode == "compiled":
            state = np.array([store.n, store.entries, 0, -1], dtype=np.int64)
            _run_kernel(store, fp.run_pass, state,
                        (np.int64(size), np.int64(prev), np.float64(res)),
                        max_points)
        else:
            grid = store.ref_grid()
            for i in range(size):
                for j in range(max(prev, i + 1), size):
                    _ref_segment(store, grid, i, j, res, max_points)
        prev = size
        sizes.append(store.n)
    return _finish_cloud(space, store, sizes, track_witnesses)


def _finish_cloud(space, store: _Store, sizes: list[int],
                  track_witnesses: bool) -> PointCloud:
    n = store.n
    gen = np.empty(n, dtype=np.int64)
    gen[: sizes[0]] = 1
    for p in range(1, len(sizes)):
        gen[sizes[p - 1]: sizes[p]] = p + 1
    cloud = PointCloud(space, store.nat[:n].copy(), gen,
                       store.par[:n].copy(), sizes)
    if track_witnesses:
        cloud.witnesses = [generator_witness(cloud, i) for i in range(n)]
    return cloud


def drop_set(space, apex, base, res: float, dedup_tol: float | None = None, *,
             max_points: int = DEFAULT_MAX_POINTS,
             engine: str = "auto") -> PointCloud:
    """Sample the segments from one apex to every base point.

    `base` may be a PointCloud or an array of rows.  The result's first
    point is the apex, followed by the base points (all generation 1 seeds
    of this construction), then the kept segment samples in (base index,
    step) order with parents (0, 1 + base index).
    """
    tol = _check_params(res, dedup_tol, 0, 1)
    base_rows = base.coords if isinstance(base, PointCloud) else \
        np.asarray(base, dtype=np.float64)
    if base_rows.ndim != 2 or base_rows.shape[0] == 0:
        raise GeometryError("need at least one base point")
    rows = np.vstack([np.asarray(space.to_row(apex), dtype=np.float64)[None],
                      base_rows])
    if rows.shape[0] > max_points:
        raise ResourceLimitError(
            f"{rows.shape[0]} seeds exceed max_points={max_points}")
    mode = _resolve_engine(space, engine)
    store = _Store(space, rows, tol)
    size = store.n
    if mode == "compiled":
        state = np.array([store.n, store.entries, 1, 1], dtype=np.int64)
        _run_kernel(store, fp.run_drop, state,
                    (np.int64(size), np.float64(res)), max_points)
    else:
        grid = store.ref_grid()
        for j in range(1, size):
            _ref_segment(store, grid, 0, j, res, max_points)
    return _finish_cloud(space, store, [size, store.n], False)


# ---------------------------------------------------------------------------
# Queries


def _as_row(space, p) -> np.ndarray:
    if isinstance(p, np.ndarray) and p.ndim == 1 and len(p) == space.ncoords:
        return p.astype(np.float64)
    return np.asarray(space.to_row(p), dtype=np.float64)


def covers(cloud: PointCloud, p, delta: float) -> bool:
    """Whether some cloud point is within delta of p.  Deliberately a full
    linear scan: this is the ground-truth query the index must agree with."""
    row = _as_row(cloud.space, p)
    return bool((cloud.space.dist_rows(row, cloud.coords) <= delta).any())


def min_dist(cloud: PointCloud, p) -> float:
    row = _as_row(cloud.space, p)
    return float(cloud.space.dist_rows(row, cloud.coords).min())


def hausdorff(space, rows_a, rows_b) -> float:
    """Symmetric Hausdorff distance between two row sets."""
    A = np.asarray(rows_a, dtype=np.float64)
    B = np.asarray(rows_b, dtype=np.float64)
    if A.shape[0] == 0 or B.shape[0] == 0:
        raise GeometryError("hausdorff needs non-empty sets")
    d = 0.0
    for src, dst in ((A, B), (B, A)):
        for row in src:
            d = max(d, float(space.dist_rows(row, dst).min()))
    return d


def generator_witness(cloud: PointCloud, index: int) -> frozenset:
    """Seed indices this point ultimately derives from.

    Seeds witness themselves; a generated point inherits the union of its
    parents' witnesses.  Derived from the stored parent record, so it works
    whether or not witnesses were materialized at build time.
    """
    cache = cloud._wit_cache
    stack = [int(index)]
    while stack:
        i = stack[-1]
        if i in cache:
            stack.pop()
            continue
        p1, p2 = int(cloud.parents[i, 0]), int(cloud.parents[i, 1])
        if p1 < 0:
            cache[i] = frozenset((i,))
            stack.pop()
            continue
        missing = [p for p in (p1, p2) if p not in cache]
        if missing:
            stack.extend(missing)
            continue
        cache[i] = cache[p1] | cache[p2]
        stack.pop()
    return cache[int(index)]


# ---------------------------------------------------------------------------
# Plane slices (half-plane extension clouds)


def _plane_dist_foot(g, X: np.ndarray, Y: np.ndarray):
    """Vectorized distance to the geodesic and foot parameter along it."""
    if isinstance(g, hp.Vertical):
        dist = np.arcsinh(np.abs(X - g.x0) / Y)
        foot = 0.5 * np.log((X - g.x0) ** 2 + Y * Y)
        return dist, foot
    m, R = g.center, g.radius
    power = (X - m) ** 2 + Y * Y - R * R
    dist = np.arcsinh(np.abs(power) / (2.0 * R * Y))
    z = X + 1j * Y
    foot = np.log(np.abs((z - (m - R)) / ((m + R) - z)))
    return dist, foot


def slice_cloud(cloud: PointCloud, a, b, plane_tol: float) -> np.ndarray:
    """Cut an h2xr cloud along the vertical plane over the geodesic through
    a and b.  Returns (k, 2) rows (s, h): arc position of the point's base
    along the plane (a at 0, increasing toward b) and the point's height.
    Cloud order is preserved.
    """
    if getattr(cloud.space, "id", None) != "h2xr":
        raise GeometryError("slice requires an h2xr cloud")
    if not (plane_tol >= 0.0):
        raise GeometryError(f"plane_tol must be >= 0, got {plane_tol}")
    g = hp.geodesic_through(a, b)
    X, Y, H = cloud.coords[:, 0], cloud.coords[:, 1], cloud.coords[:, 2]
    dist, foot = _plane_dist_foot(g, X, Y)
    s0 = hp.foot_param(a, g)
    sign = 1.0 if hp.foot_param(b, g) >= s0 else -1.0
    mask = dist <= plane_tol
    s = (foot[mask] - s0) * sign
    return np.column_stack([s, H[mask]])


# ---------------------------------------------------------------------------
# CSV
#
# Cloud schema: kind,x,y,h,gen,parent1,parent2.  Coordinates fill x,y for
# the base (or the point itself for non-extended spaces, up to three
# columns); extension heights always go to h.  Missing columns stay empty.
# Floats are written with repr-exact precision and \n newlines so identical
# clouds give identical bytes.


def _csv_layout(space) -> list[int]:
    sid = space.id
    nc = space.ncoords
    if sid.endswith("xr"):
        if nc - 1 > 2:
            raise ConfigError(f"space {sid} does not fit the x,y,h schema")
        return list(range(nc - 1)) + [2]
    if nc > 3:
        raise ConfigError(f"space {sid} does not fit the x,y,h schema")
    return list(range(nc))


def _fmt(v: float) -> str:
    return format(v, ".17g")


def write_cloud_csv(cloud: PointCloud, path) -> None:
    layout = _csv_layout(cloud.space)
    kind = cloud.space.id
    with open(path, "w", newline="") as f:
        f.write("kind,x,y,h,gen,parent1,parent2\n")
        chunk: list[str] = []
        for i in range(len(cloud)):
            cols = ["", "", ""]
            for c, pos in enumerate(layout):
                cols[pos] = _fmt(cloud.coords[i, c])
            p1, p2 = cloud.parents[i]
            chunk.append(
                f"{kind},{cols[0]},{cols[1]},{cols[2]},{cloud.gen[i]},"
                f"{p1 if p1 >= 0 else ''},{p2 if p2 >= 0 else ''}\n")
            if len(chunk) >= 65536:
                f.write("".join(chunk))
                chunk.clear()
        f.write("".join(chunk))


def read_cloud_csv(path):
    """Rebuild a cloud from the CSV schema.  pass_sizes are not stored in
    the file and come back as the generation breakdown."""
    import csv as _csv

    from .spaces import make_space

    with open(path, newline="") as f:
        reader = _csv.reader(f)
        header = next(reader, None)
        if header is None or [h.strip() for h in header[:4]] != ["kind", "x", "y", "h"]:
            raise ConfigError(f"{path}: not a cloud CSV (bad header)")
        kinds: set[str] = set()
        raw: list[tuple] = []
        for row in reader:
            if not row or not any(c.strip() for c in row):
                continue
            kinds.add(row[0].strip())
            raw.append(row)
    if not raw:
        raise ConfigError(f"{path}: empty cloud")
    if len(kinds) != 1:
        raise ConfigError(f"{path}: mixed kinds {sorted(kinds)}")
    space = make_space(kinds.pop())
    layout = _csv_layout(space)
    n = len(raw)
    coords = np.empty((n, space.ncoords))
    gen = np.empty(n, dtype=np.int64)
    parents = np.full((n, 2), -1, dtype=np.int64)
    for i, row in enumerate(raw):
        try:
            for c, pos in enumerate(layout):
                coords[i, c] = float(row[1 + pos])
            gen[i] = int(row[4]) if len(row) > 4 and row[4].strip() else 1
            if len(row) > 6 and row[5].strip():
                parents[i, 0] = int(row[5])
                parents[i, 1] = int(row[6])
        except (ValueError, IndexError) as exc:
            raise ConfigError(f"{path}: bad row {i + 2}: {exc}") from None
    sizes = [int((gen <= g).sum()) for g in range(1, int(gen.max()) + 1)]
    return PointCloud(space, coords, gen, parents, sizes)


def write_slice_csv(path, sh: np.ndarray) -> None:
    sh = np.asarray(sh, dtype=np.float64)
    with open(path, "w", newline="") as f:
        f.write("s,h\n")
        f.write("".join(f"{_fmt(r[0])},{_fmt(r[1])}\n" for r in sh))


def read_slice_csv(path) -> np.ndarray:
    import csv as _csv

    with open(path, newline="") as f:
        reader = _csv.reader(f)
        header = next(reader, None)
        if header is None or [h.strip() for h in header[:2]] != ["s", "h"]:
            raise ConfigError(f"{path}: not a slice CSV (bad header)")
        rows = []
        for row in reader:
            if not row or not any(c.strip() for c in row):
                continue
            try:
                rows.append((float(row[0]), float(row[1])))
            except (ValueError, IndexError) as exc:
                raise ConfigError(f"{path}: bad row: {exc}") from None
    return np.asarray(rows, dtype=np.float64).reshape(-1, 2)
