"""Deterministic global search over products of probability simplices.

The search space is a list of :class:`SimplexBlock` values; every block is a
stack of ``n_slices`` independent simplices of dimension ``k`` (a marginal is
a block with one slice, a conditional has one slice per conditioning index).

Strategy: exhaustively score a composition grid (step ``1/steps`` per block),
then refine with projected coordinate ascent (step halving, bounded
iterations) from the best grid point, from caller-supplied prior candidates,
and from seeded random restarts.  Everything is deterministic for a fixed
seed; grid ties resolve to the lexicographically smallest flat index because
enumeration order is lexicographic and strict improvement is required.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterable, Iterator, Mapping, Sequence

import numpy as np

from .errors import ConfigError

#: Default number of candidate points evaluated per vectorized chunk.
CHUNK = 4096

#: Improvement below this is treated as a tie (keeps earlier candidate).
IMPROVE_EPS = 1e-13

Objective = Callable[[Mapping[str, np.ndarray]], np.ndarray]
Point = dict[str, np.ndarray]


@dataclass(frozen=True)
class SimplexBlock:
    name: str
    n_slices: int
    k: int
    steps: int

    def __post_init__(self) -> None:
        if self.n_slices < 1 or self.k < 1 or self.steps < 1:
            raise ConfigError(
                "block needs n_slices, k, steps >= 1",
                block=self.name,
                n_slices=self.n_slices,
                k=self.k,
                steps=self.steps,
            )

    @property
    def shape(self) -> tuple[int, int]:
        return (self.n_slices, self.k)


@lru_cache(maxsize=256)
def simplex_grid(k: int, steps: int) -> np.ndarray:
    """All points of the simplex with coordinates that are multiples of 1/steps.

    Shape ``[m, k]`` with ``m = C(steps + k - 1, k - 1)``, ordered
    lexicographically by descending composition (first point is the vertex
    ``e_1``). Doubling ``steps`` yields a superset of the coarser grid.
    """

    def compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
        if parts == 1:
            yield (total,)
            return
        for head in range(total, -1, -1):
            for rest in compositions(total - head, parts - 1):
                yield (head, *rest)

    rows = np.array(list(compositions(steps, k)), dtype=np.float64) / float(steps)
    rows.setflags(write=False)
    return rows


def grid_size(blocks: Sequence[SimplexBlock]) -> int:
    total = 1
    for b in blocks:
        total *= simplex_grid(b.k, b.steps).shape[0] ** b.n_slices
    return total


def shrink_to_budget(blocks: Sequence[SimplexBlock], budget: int) -> list[SimplexBlock]:
    """Halve the step count of the widest block until the grid fits ``budget``.

    The returned blocks keep their order; effective resolutions may differ
    from the requested ones and are reported through ``SearchResult``.
    """
    out = list(blocks)
    while grid_size(out) > budget:
        sizes = [simplex_grid(b.k, b.steps).shape[0] ** b.n_slices for b in out]
        i = int(np.argmax(sizes))
        b = out[i]
        if b.steps == 1:
            # Cannot coarsen further; accept the overshoot on this block.
            others = [j for j in range(len(out)) if j != i and out[j].steps > 1]
            if not others:
                break
            i = max(others, key=lambda j: sizes[j])
            b = out[i]
        out[i] = SimplexBlock(b.name, b.n_slices, b.k, max(1, b.steps // 2))
    return out


def iter_grid_batches(
    blocks: Sequence[SimplexBlock], chunk: int = CHUNK
) -> Iterator[tuple[np.ndarray, Point]]:
    """Yield ``(flat_indices, point_batch)`` over the full product grid.

    ``point_batch[name]`` has shape ``[B, n_slices, k]``.  Flat indices run
    lexicographically: earlier blocks (and earlier slices within a block)
    vary slowest.
    """
    tables: list[np.ndarray] = []
    owners: list[tuple[int, int]] = []  # (block index, slice index) per axis
    for bi, b in enumerate(blocks):
        table = simplex_grid(b.k, b.steps)
        for s in range(b.n_slices):
            tables.append(table)
            owners.append((bi, s))
    radices = np.array([t.shape[0] for t in tables], dtype=np.int64)
    total = int(np.prod(radices))
    for start in range(0, total, chunk):
        idx = np.arange(start, min(start + chunk, total), dtype=np.int64)
        batch: Point = {
            b.name: np.empty((idx.size, b.n_slices, b.k), dtype=np.float64) for b in blocks
        }
        rem = idx.copy()
        for axis in range(len(tables) - 1, -1, -1):
            rows = rem % radices[axis]
            rem //= radices[axis]
            bi, s = owners[axis]
            batch[blocks[bi].name][:, s, :] = tables[axis][rows]
        yield idx, batch


def project_simplex(v: np.ndarray) -> np.ndarray:
    """Euclidean projection of a vector onto the probability simplex."""
    v = np.asarray(v, dtype=np.float64)
    u = np.sort(v)[::-1]
    css = np.cumsum(u) - 1.0
    rho = np.nonzero(u * np.arange(1, v.size + 1) > css)[0][-1]
    theta = css[rho] / float(rho + 1)
    return np.maximum(v - theta, 0.0)


def _stack_points(points: Sequence[Point], blocks: Sequence[SimplexBlock]) -> Point:
    return {
        b.name: np.stack([p[b.name].reshape(b.shape) for p in points]) for b in blocks
    }


def _eval_points(objective: Objective, points: Sequence[Point], blocks: Sequence[SimplexBlock]) -> np.ndarray:
    return np.asarray(objective(_stack_points(points, blocks)), dtype=np.float64)


def _ascend(
    objective: Objective,
    blocks: Sequence[SimplexBlock],
    start: Point,
    max_iters: int = 50,
    init_step: float = 0.5,
    min_step: float = 1e-7,
) -> tuple[float, Point]:
    """Projected coordinate ascent with step halving from one start point."""
    point = {b.name: start[b.name].reshape(b.shape).copy() for b in blocks}
    best = float(_eval_points(objective, [point], blocks)[0])
    step = init_step
    for _ in range(max_iters):
        proposals: list[Point] = []
        for b in blocks:
            for s in range(b.n_slices):
                for j in range(b.k):
                    for sign in (1.0, -1.0):
                        cand = {n: a.copy() for n, a in point.items()}
                        row = cand[b.name][s].copy()
                        row[j] += sign * step
                        cand[b.name][s] = project_simplex(row)
                        proposals.append(cand)
        values = _eval_points(objective, proposals, blocks)
        k = int(np.argmax(values))
        if values[k] > best + IMPROVE_EPS:
            point = proposals[k]
            best = float(values[k])
        else:
            step *= 0.5
            if step < min_step:
                break
    return best, point


@dataclass
class SearchResult:
    value: float
    point: Point
    grid_value: float
    n_evaluated: int
    effective_steps: dict[str, int]
    near_optima: list[tuple[float, Point]] = field(default_factory=list)


def maximize(
    objective: Objective,
    blocks: Sequence[SimplexBlock],
    *,
    seed: int = 0,
    restarts: int = 4,
    budget: int = 200_000,
    chunk: int = CHUNK,
    extra_candidates: Iterable[Point] = (),
    near_tol: float = 1e-9,
    max_near: int = 16,
) -> SearchResult:
    """Grid scan + multistart refinement; returns the best point found.

    ``extra_candidates`` (for example, witnesses from an earlier lower
    resolution run) are both re-scored and used as ascent starts, so the
    returned value never falls below a re-tested prior witness.
    """
    eff_blocks = shrink_to_budget(blocks, budget)
    n_evaluated = 0

    best_val = -math.inf
    best_point: Point | None = None
    near: list[tuple[float, Point]] = []

    def consider(value: float, point: Point) -> None:
        nonlocal best_val, best_point, near
        if value > best_val + IMPROVE_EPS:
            best_val = value
            best_point = point
        if value >= best_val - near_tol:
            near.append((value, point))
            near[:] = [nv for nv in near if nv[0] >= best_val - near_tol][-max_near:]

    for idx, batch in iter_grid_batches(eff_blocks, chunk):
        values = np.asarray(objective(batch), dtype=np.float64)
        n_evaluated += idx.size
        order = np.argsort(-values, kind="stable")
        for k in order[: max_near]:
            if values[k] < best_val - near_tol:
                break
            consider(
                float(values[k]),
                {b.name: batch[b.name][k].copy() for b in eff_blocks},
            )

    assert best_point is not None, "grid is never empty"
    grid_value = best_val

    starts: list[Point] = [best_point]
    for cand in extra_candidates:
        point = {b.name: np.asarray(cand[b.name], dtype=np.float64) for b in eff_blocks}
        consider(float(_eval_points(objective, [point], eff_blocks)[0]), point)
        n_evaluated += 1
        starts.append(point)
    rng = np.random.default_rng(np.random.SeedSequence([0x5EA2C4, seed]))
    for _ in range(restarts):
        starts.append(
            {b.name: rng.dirichlet(np.ones(b.k), size=b.n_slices) for b in eff_blocks}
        )

    for start in starts:
        value, point = _ascend(objective, eff_blocks, start)
        consider(value, point)

    near_sorted = sorted(
        (nv for nv in near if nv[0] >= best_val - near_tol),
        key=lambda nv: -nv[0],
    )
    deduped: list[tuple[float, Point]] = []
    for value, point in near_sorted:
        key = tuple(np.round(point[b.name], 12).tobytes() for b in eff_blocks)
        if key not in {tuple(np.round(p[b.name], 12).tobytes() for b in eff_blocks) for _, p in deduped}:
            deduped.append((value, point))
        if len(deduped) >= max_near:
            break

    assert best_point is not None
    return SearchResult(
        value=best_val,
        point=best_point,
        grid_value=grid_value,
        n_evaluated=n_evaluated,
        effective_steps={b.name: b.steps for b in eff_blocks},
        near_optima=deduped,
    )
