"""Two-dimensional achievable rate regions.

A *polytope* is the rate set of one fixed layered input law: an intersection
of half-planes ``c1*R1 + c2*R2 <= bound`` with ``(c1, c2)`` drawn from
``{(1,0), (0,1), (1,1), (2,1), (1,2)}`` and bounds given by sums of mutual
information terms.  A *region* is the convex hull of a union of polytopes
over a family of input laws, stored as support-function samples
``h(theta) = max (R1 cos(theta) + R2 sin(theta))`` on a fixed angle grid in
``[0 deg, 90 deg]`` together with extracted frontier vertices.

Time sharing is implemented exactly as convexification: mixing operating
points of fixed laws is a convex combination, and the pointwise maximum of
the per-law support functions *is* the support function of the convex hull
of the union.

Family enumeration is a coverage/cost compromise: a composition grid over
every simplex factor, plus seeded random draws, plus derived members that
are always legal points of the same family (collapsed auxiliary layers,
identity ``W = X`` lifts, and the interference-as-noise maximizer).  The
derived members cost little and make finite-resolution comparisons between
equivalent schemes sharp.

The reduced families used by ``hk_strong_y2`` and ``one_sided`` carry no W1
layer at all: the union runs over ``P(X1) P(W2) P(X2|W2)``, with X1 entering
directly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Mapping, Sequence

import numpy as np

from .channels import DiscreteIC, GaussianIC, OneSided, is_one_sided
from .errors import (
    AngleGridMismatchError,
    ConfigError,
    DimensionMismatchError,
    EmptyListError,
    IcError,
    NotOneSidedError,
    ValidationError,
)
from .gaussian import GaussSystem, split_system
from .probtensor import (
    BatchJoint,
    InfoQuery,
    ProbTensor,
    compose_joint,
    mutual_information,
    require_valid,
)
from .regimes import SearchConfig
from .search import SimplexBlock, iter_grid_batches, shrink_to_budget

SCHEMES = ("tin", "semijoint", "hk", "hk_strong_y2", "one_sided", "strong_capacity")

ALLOWED_DIRS = ((1, 0), (0, 1), (1, 1), (2, 1), (1, 2))

_FEAS_TOL = 1e-12
_CHUNK = 4096

# Mutual-information term: (target names, second names, given names).
Term = tuple[tuple[str, ...], tuple[str, ...], tuple[str, ...]]
# Constraint: (c1, c2, terms); bound = sum of the terms' MI values.
Constraint = tuple[int, int, tuple[Term, ...]]

_T = lambda t, s, g=(): (tuple(t), tuple(s), tuple(g))  # noqa: E731 - table shorthand

#: Per-scheme constraint systems.  ``strong_capacity`` reuses the
#: ``semijoint`` table evaluated at W1 = X1, W2 = X2.
SCHEME_TABLES: dict[str, tuple[Constraint, ...]] = {
    "tin": (
        (1, 0, (_T(("X1",), ("Y1",)),)),
        (0, 1, (_T(("X2",), ("Y2",)),)),
    ),
    "semijoint": (
        (1, 0, (_T(("X1",), ("Y1",), ("W2",)),)),
        (0, 1, (_T(("X2",), ("Y2",), ("W1",)),)),
        (1, 1, (_T(("X1", "W2"), ("Y1",)), _T(("X2",), ("Y2",), ("W2",)))),
        (1, 1, (_T(("X1",), ("Y1",), ("W1",)), _T(("X2", "W1"), ("Y2",)))),
    ),
    "hk": (
        (1, 0, (_T(("X1",), ("Y1",), ("W2",)),)),
        (0, 1, (_T(("X2",), ("Y2",), ("W1",)),)),
        (1, 1, (_T(("X1", "W2"), ("Y1",)), _T(("X2",), ("Y2",), ("W1", "W2")))),
        (1, 1, (_T(("X1",), ("Y1",), ("W1", "W2")), _T(("X2", "W1"), ("Y2",)))),
        (1, 1, (_T(("X1", "W2"), ("Y1",), ("W1",)), _T(("X2", "W1"), ("Y2",), ("W2",)))),
        (2, 1, (_T(("X1", "W2"), ("Y1",)), _T(("X1",), ("Y1",), ("W1", "W2")),
                _T(("X2", "W1"), ("Y2",), ("W2",)))),
        (1, 2, (_T(("X2", "W1"), ("Y2",)), _T(("X2",), ("Y2",), ("W1", "W2")),
                _T(("X1", "W2"), ("Y1",), ("W1",)))),
    ),
    "hk_strong_y2": (
        (1, 0, (_T(("X1",), ("Y1",), ("W2",)),)),
        (0, 1, (_T(("X2",), ("Y2",), ("X1",)),)),
        (1, 1, (_T(("X1", "X2"), ("Y2",)),)),
        (1, 1, (_T(("X1", "W2"), ("Y1",)), _T(("X2",), ("Y2",), ("X1", "W2")))),
        (2, 1, (_T(("X1", "W2"), ("Y1",)), _T(("X1", "X2"), ("Y2",), ("W2",)))),
    ),
    "one_sided": (
        (1, 0, (_T(("X1",), ("Y1",), ("W2",)),)),
        (0, 1, (_T(("X2",), ("Y2",)),)),
        (1, 1, (_T(("X1", "W2"), ("Y1",)), _T(("X2",), ("Y2",), ("W2",)))),
    ),
}


# ---------------------------------------------------------------------------
# Input-law family member
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AuxInputDist:
    """One layered input law ``P(w1) P(w2) P(x1|w1) P(x2|w2)``."""

    pw1: np.ndarray
    pw2: np.ndarray
    px1_given_w1: np.ndarray
    px2_given_w2: np.ndarray

    def __post_init__(self) -> None:
        for name in ("pw1", "pw2", "px1_given_w1", "px2_given_w2"):
            arr = np.asarray(getattr(self, name), dtype=np.float64)
            object.__setattr__(self, name, arr)
        if self.pw1.ndim != 1 or self.pw2.ndim != 1:
            raise DimensionMismatchError("pw1/pw2 must be vectors")
        if self.px1_given_w1.shape[:1] != self.pw1.shape or self.px1_given_w1.ndim != 2:
            raise DimensionMismatchError(
                "px1_given_w1 must be [nw1, nx1]", shape=self.px1_given_w1.shape
            )
        if self.px2_given_w2.shape[:1] != self.pw2.shape or self.px2_given_w2.ndim != 2:
            raise DimensionMismatchError(
                "px2_given_w2 must be [nw2, nx2]", shape=self.px2_given_w2.shape
            )
        for name, cond in (
            ("pw1", ()), ("pw2", ()),
            ("px1_given_w1", ("W",)), ("px2_given_w2", ("W",)),
        ):
            arr = getattr(self, name)
            names = ("W", "X")[: arr.ndim] if arr.ndim == 2 else ("W",)
            try:
                require_valid(ProbTensor(names, arr), conditioning=cond)
            except IcError as e:
                raise ValidationError(f"factor {name} invalid: {e}") from e
            arr.setflags(write=False)

    @property
    def nw1(self) -> int:
        return self.pw1.shape[0]

    @property
    def nw2(self) -> int:
        return self.pw2.shape[0]

    @property
    def nx1(self) -> int:
        return self.px1_given_w1.shape[1]

    @property
    def nx2(self) -> int:
        return self.px2_given_w2.shape[1]

    def x_marginals(self) -> tuple[np.ndarray, np.ndarray]:
        return self.pw1 @ self.px1_given_w1, self.pw2 @ self.px2_given_w2

    @classmethod
    def product(cls, px1: np.ndarray, px2: np.ndarray) -> "AuxInputDist":
        """Degenerate layers: W1 and W2 are constants."""
        return cls(np.ones(1), np.ones(1),
                   np.asarray(px1, dtype=np.float64)[np.newaxis, :],
                   np.asarray(px2, dtype=np.float64)[np.newaxis, :])

    @classmethod
    def identity_w(cls, px1: np.ndarray, px2: np.ndarray) -> "AuxInputDist":
        """Full common layers: W1 = X1 and W2 = X2."""
        px1 = np.asarray(px1, dtype=np.float64)
        px2 = np.asarray(px2, dtype=np.float64)
        return cls(px1, px2, np.eye(px1.size), np.eye(px2.size))


# ---------------------------------------------------------------------------
# Rate polytopes
# ---------------------------------------------------------------------------


def _candidate_vertices(
    dirs: Sequence[tuple[int, int]], bounds: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Candidate vertices and feasibility for batched polytopes.

    ``bounds`` has shape ``[B, k]``; returns ``V [B, P, 2]`` and a boolean
    mask ``[B, P]``.  Candidates: origin, axis intercepts, and pairwise
    half-plane intersections (the constraint directions are fixed, so the
    2x2 solves are closed-form in the bounds).
    """
    b = np.asarray(bounds, dtype=np.float64)
    B, k = b.shape
    zeros = np.zeros(B)
    pts: list[np.ndarray] = [np.zeros((B, 2))]
    for i, (c1, c2) in enumerate(dirs):
        if c1 > 0:
            pts.append(np.stack([b[:, i] / c1, zeros], axis=1))
        if c2 > 0:
            pts.append(np.stack([zeros, b[:, i] / c2], axis=1))
    for i in range(k):
        c1i, c2i = dirs[i]
        for j in range(i + 1, k):
            c1j, c2j = dirs[j]
            det = c1i * c2j - c1j * c2i
            if det == 0:
                continue
            x = (b[:, i] * c2j - b[:, j] * c2i) / det
            y = (c1i * b[:, j] - c1j * b[:, i]) / det
            pts.append(np.stack([x, y], axis=1))
    V = np.stack(pts, axis=1)
    feas = (V[:, :, 0] >= -_FEAS_TOL) & (V[:, :, 1] >= -_FEAS_TOL)
    for i, (c1, c2) in enumerate(dirs):
        feas &= c1 * V[:, :, 0] + c2 * V[:, :, 1] <= b[:, i, np.newaxis] + _FEAS_TOL
    return V, feas


@dataclass(frozen=True)
class RatePolytope:
    """Intersection of rate half-planes for one fixed input law.

    Bounds are clamped to be nonnegative, so every polytope contains the
    origin and is never empty.
    """

    constraints: tuple[tuple[int, int, float], ...]

    def __post_init__(self) -> None:
        cleaned = []
        for c1, c2, bound in self.constraints:
            if (c1, c2) not in ALLOWED_DIRS:
                raise ConfigError("unsupported constraint direction", direction=(c1, c2))
            cleaned.append((int(c1), int(c2), max(float(bound), 0.0)))
        object.__setattr__(self, "constraints", tuple(cleaned))

    def _dirs_bounds(self) -> tuple[list[tuple[int, int]], np.ndarray]:
        merged: dict[tuple[int, int], float] = {}
        for c1, c2, bound in self.constraints:
            key = (c1, c2)
            merged[key] = min(merged.get(key, math.inf), bound)
        dirs = list(merged.keys())
        return dirs, np.array([[merged[d] for d in dirs]])

    def vertices(self) -> np.ndarray:
        """Feasible candidate vertices (deduplicated, unordered)."""
        dirs, bounds = self._dirs_bounds()
        V, feas = _candidate_vertices(dirs, bounds)
        pts = V[0][feas[0]]
        uniq = np.unique(np.round(pts, 12), axis=0)
        return uniq

    def support(self, theta_deg: float) -> float:
        t = math.radians(theta_deg)
        v = self.vertices()
        return float((v @ np.array([math.cos(t), math.sin(t)])).max())

    def max_sum(self) -> float:
        v = self.vertices()
        return float((v[:, 0] + v[:, 1]).max())

    def contains(self, r1: float, r2: float, tol: float = 1e-9) -> bool:
        if r1 < -tol or r2 < -tol:
            return False
        return all(c1 * r1 + c2 * r2 <= bound + tol for c1, c2, bound in self.constraints)

    def includes(self, other: "RatePolytope", tol: float = 1e-9) -> bool:
        return all(self.contains(r1, r2, tol) for r1, r2 in other.vertices())


# ---------------------------------------------------------------------------
# Rate regions (support samples + frontier vertices)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RateRegion:
    """Convex, downward-closed rate set sampled on an angle grid."""

    theta_deg: np.ndarray
    h_bits: np.ndarray
    points: np.ndarray  # [K, 2] supporting point per angle
    vertices: np.ndarray  # frontier extreme points, angle-ordered
    meta: dict = field(default_factory=dict, compare=False, repr=False)

    def to_json_dict(self) -> dict:
        return {
            "angles_deg": self.theta_deg.tolist(),
            "support_bits": self.h_bits.tolist(),
            "supporting_points": self.points.tolist(),
            "vertices": self.vertices.tolist(),
            "max_sumrate_bits": max_sumrate(self),
            "meta": self.meta,
        }


def _pareto_prune(rows: np.ndarray) -> np.ndarray:
    """Drop rows strictly dominated in both coordinates.

    A strictly dominated point scores strictly less in every direction of
    the closed positive quadrant, so it can neither set a support value nor
    win a tie; pruning keeps the angle reduction exact while shrinking the
    candidate set to (roughly) the frontier.
    """
    if rows.shape[0] <= 2:
        return rows
    order = np.lexsort((rows[:, 1], -rows[:, 0]))
    r = rows[order]
    r1, r2 = r[:, 0], r[:, 1]
    new_group = np.empty(len(r), dtype=bool)
    new_group[0] = True
    new_group[1:] = r1[1:] < r1[:-1]
    starts = np.nonzero(new_group)[0]
    gid = np.cumsum(new_group) - 1
    gmax = np.maximum.reduceat(r2, starts)
    prev_best = np.concatenate(([-math.inf], np.maximum.accumulate(gmax)[:-1]))
    keep = r2 >= prev_best[gid]
    return r[keep]


def _angle_grid(angles: int) -> tuple[np.ndarray, np.ndarray]:
    theta = np.linspace(0.0, 90.0, angles)
    rad = np.radians(theta)
    u = np.stack([np.cos(rad), np.sin(rad)], axis=1)
    return theta, u


class SupportAccumulator:
    """Running union of polytopes as per-angle support maxima.

    The reduction keeps, per angle, the best ``(h, -r1, -r2)`` in
    lexicographic order, which is a total order, so the result does not
    depend on how the polytopes are chunked.
    """

    def __init__(self, angles: int) -> None:
        self.theta_deg, self._u = _angle_grid(angles)
        K = angles
        self._h = np.full(K, -math.inf)
        self._pts = np.zeros((K, 2))

    def add(self, dirs: Sequence[tuple[int, int]], bounds: np.ndarray) -> None:
        V, feas = _candidate_vertices(dirs, bounds)
        flatV = V.reshape(-1, 2)[feas.reshape(-1)]
        # Snap to 12 decimals so that geometric ties are exact equalities;
        # without this, 1e-16 noise defeats both the lexicographic tie-break
        # and the dominance prune.
        flatV = np.maximum(np.round(flatV, 12), 0.0)
        flatV = _pareto_prune(flatV)
        # sub-chunk to bound the [n, K] score matrix; the merge is a max in a
        # total order, so chunking does not change the result
        for start in range(0, flatV.shape[0], 8192):
            self._reduce_merge(flatV[start : start + 8192])

    def _reduce_merge(self, rows: np.ndarray) -> None:
        if rows.size == 0:
            return
        scores = rows @ self._u.T  # [n, K]
        m = scores.max(axis=0)
        tie = scores == m
        r1m = np.where(tie, rows[:, 0:1], math.inf).min(axis=0)
        tie &= rows[:, 0:1] == r1m
        r2m = np.where(tie, rows[:, 1:2], math.inf).min(axis=0)
        better = (m > self._h) | (
            (m == self._h)
            & ((r1m < self._pts[:, 0]) | ((r1m == self._pts[:, 0]) & (r2m < self._pts[:, 1])))
        )
        self._h = np.where(better, m, self._h)
        self._pts[:, 0] = np.where(better, r1m, self._pts[:, 0])
        self._pts[:, 1] = np.where(better, r2m, self._pts[:, 1])

    def add_polytope(self, poly: RatePolytope) -> None:
        dirs, bounds = poly._dirs_bounds()
        self.add(dirs, bounds)

    def finalize(self, meta: dict | None = None) -> RateRegion:
        if not np.isfinite(self._h).all():
            raise EmptyListError("no polytopes were accumulated")
        h = np.maximum(self._h, 0.0)
        return RateRegion(
            theta_deg=self.theta_deg.copy(),
            h_bits=h,
            points=self._pts.copy(),
            vertices=_extract_vertices(self._pts),
            meta=dict(meta or {}),
        )


def _extract_vertices(points: np.ndarray) -> np.ndarray:
    """Angle-ordered distinct extreme points from per-angle supporting points."""
    rounded = np.round(points, 12)
    keep: list[np.ndarray] = []
    for row in rounded:
        if not keep or not np.array_equal(keep[-1], row):
            keep.append(row)
    # Drop interior exactly-collinear points (coordinates are snapped, so
    # flat edges produce exact zeros; near-extreme points are kept).
    out: list[np.ndarray] = []
    for row in keep:
        while len(out) >= 2:
            a, b = out[-2], out[-1]
            cross = (b[0] - a[0]) * (row[1] - a[1]) - (b[1] - a[1]) * (row[0] - a[0])
            if abs(cross) <= 1e-18:
                out.pop()
            else:
                break
        out.append(row)
    return np.array(out)


def union_region(polytopes: Sequence[RatePolytope], angles: int = 91) -> RateRegion:
    """Convex hull of a union of polytopes (exact time-sharing closure)."""
    if not polytopes:
        raise EmptyListError("union_region needs at least one polytope")
    acc = SupportAccumulator(angles)
    for poly in polytopes:
        acc.add_polytope(poly)
    return acc.finalize({"n_polytopes": len(polytopes)})


# ---------------------------------------------------------------------------
# Region comparison operations
# ---------------------------------------------------------------------------


def _check_grids(r: RateRegion, s: RateRegion) -> None:
    if r.theta_deg.shape != s.theta_deg.shape or not np.allclose(
        r.theta_deg, s.theta_deg, atol=1e-12, rtol=0.0
    ):
        raise AngleGridMismatchError(
            "regions use different angle grids",
            left=r.theta_deg.shape,
            right=s.theta_deg.shape,
        )


def includes(r: RateRegion, s: RateRegion, tol: float = 5e-3) -> bool:
    """True when ``r`` contains ``s`` up to ``tol`` bits of support slack."""
    _check_grids(r, s)
    return bool(np.all(r.h_bits >= s.h_bits - tol))


def equals(r: RateRegion, s: RateRegion, tol: float = 5e-3) -> bool:
    return includes(r, s, tol) and includes(s, r, tol)


def hausdorff_support_gap(r: RateRegion, s: RateRegion) -> float:
    """Largest absolute support difference across the shared angle grid."""
    _check_grids(r, s)
    return float(np.abs(r.h_bits - s.h_bits).max())


def max_sumrate(r: RateRegion) -> float:
    """Maximum of ``R1 + R2`` over the region (attained at a vertex)."""
    v = r.vertices
    return float((v[:, 0] + v[:, 1]).max())


# ---------------------------------------------------------------------------
# Per-law polytope constructors
# ---------------------------------------------------------------------------


def _bounds_from_joint(joint: ProbTensor, table: Sequence[Constraint]) -> list[float]:
    out = []
    for _, _, terms in table:
        val = 0.0
        for target, second, given in terms:
            val += mutual_information(joint, InfoQuery.of(target, second, given))
        out.append(val)
    return out


def _polytope_from_table(ch: DiscreteIC, d: AuxInputDist, table: Sequence[Constraint]) -> RatePolytope:
    joint = compose_joint(d, ch)
    bounds = _bounds_from_joint(joint, table)
    return RatePolytope(tuple((c1, c2, b) for (c1, c2, _), b in zip(table, bounds)))


def polytope_semijoint(ch: DiscreteIC, d: AuxInputDist) -> RatePolytope:
    """Four-constraint polytope of the two-step (semi-joint) decoder."""
    return _polytope_from_table(ch, d, SCHEME_TABLES["semijoint"])


def polytope_hk(ch: DiscreteIC, d: AuxInputDist) -> RatePolytope:
    """Seven-constraint compact superposition/joint-decoding polytope."""
    return _polytope_from_table(ch, d, SCHEME_TABLES["hk"])


def polytope_hk_strong_y2(ch: DiscreteIC, d: AuxInputDist) -> RatePolytope:
    """Five-constraint polytope for strong interference at receiver 2.

    Requires a degenerate W1 layer (the reduced family has none).
    """
    if d.nw1 != 1:
        raise DimensionMismatchError("strong-at-Y2 polytope needs nw1 == 1", nw1=d.nw1)
    return _polytope_from_table(ch, d, SCHEME_TABLES["hk_strong_y2"])


def polytope_one_sided(ch: DiscreteIC, d: AuxInputDist) -> RatePolytope:
    """Three-constraint polytope for channels whose receiver 2 is clean."""
    if is_one_sided(ch) != OneSided.SIDE_A:
        raise NotOneSidedError("channel is not one-sided toward receiver 2")
    if d.nw1 != 1:
        raise DimensionMismatchError("one-sided polytope needs nw1 == 1", nw1=d.nw1)
    return _polytope_from_table(ch, d, SCHEME_TABLES["one_sided"])


# ---------------------------------------------------------------------------
# Batched family enumeration and region assembly
# ---------------------------------------------------------------------------

#: A batch of input laws: pw1 [B, nw1], px1w1 [B, nw1, nx1], pw2, px2w2.
DistBatch = dict[str, np.ndarray]


def batch_joint(ch: DiscreteIC, batch: DistBatch) -> BatchJoint:
    joint = np.einsum(
        "bw,bv,bwi,bvj,ijkl->bwvijkl",
        batch["pw1"], batch["pw2"], batch["px1w1"], batch["px2w2"],
        ch.law.values, optimize=True,
    )
    return BatchJoint(("W1", "W2", "X1", "X2", "Y1", "Y2"), joint)


def batch_bounds(bj: BatchJoint, table: Sequence[Constraint]) -> np.ndarray:
    """``[B, n_constraints]`` bound matrix for one constraint table."""
    cols = []
    for _, _, terms in table:
        val = np.zeros(bj.batch_size)
        for target, second, given in terms:
            val = val + bj.mi(target, second, given)
        cols.append(np.maximum(val, 0.0))
    return np.stack(cols, axis=1)


def merged_dirs_bounds(
    table: Sequence[Constraint], bounds: np.ndarray
) -> tuple[list[tuple[int, int]], np.ndarray]:
    """Deduplicate parallel constraints by taking the minimum bound."""
    dirs: list[tuple[int, int]] = []
    cols: dict[tuple[int, int], np.ndarray] = {}
    for idx, (c1, c2, _) in enumerate(table):
        key = (c1, c2)
        if key in cols:
            cols[key] = np.minimum(cols[key], bounds[:, idx])
        else:
            dirs.append(key)
            cols[key] = bounds[:, idx]
    return dirs, np.stack([cols[d] for d in dirs], axis=1)


def dist_batch_from_aux(dists: Sequence[AuxInputDist]) -> DistBatch:
    return {
        "pw1": np.stack([d.pw1 for d in dists]),
        "pw2": np.stack([d.pw2 for d in dists]),
        "px1w1": np.stack([d.px1_given_w1 for d in dists]),
        "px2w2": np.stack([d.px2_given_w2 for d in dists]),
    }


def aux_from_dist_batch(batch: DistBatch, row: int) -> AuxInputDist:
    return AuxInputDist(
        pw1=batch["pw1"][row],
        pw2=batch["pw2"][row],
        px1_given_w1=batch["px1w1"][row],
        px2_given_w2=batch["px2w2"][row],
    )


def collapse_w1(batch: DistBatch) -> DistBatch:
    """Replace the W1 layer by its X1 marginal (a legal family member)."""
    px1 = np.einsum("bw,bwi->bi", batch["pw1"], batch["px1w1"])
    B = px1.shape[0]
    return {
        "pw1": np.ones((B, 1)),
        "px1w1": px1[:, np.newaxis, :],
        "pw2": batch["pw2"],
        "px2w2": batch["px2w2"],
    }


def collapse_w2(batch: DistBatch) -> DistBatch:
    px2 = np.einsum("bw,bwj->bj", batch["pw2"], batch["px2w2"])
    B = px2.shape[0]
    return {
        "pw1": batch["pw1"],
        "px1w1": batch["px1w1"],
        "pw2": np.ones((B, 1)),
        "px2w2": px2[:, np.newaxis, :],
    }


def lift_w1_from_marginal(batch: DistBatch) -> DistBatch:
    """Replace the W1 layer by the identity layer ``W1 = X1`` at the same
    X1 marginal (a legal family member for any batch)."""
    px1 = np.einsum("bw,bwi->bi", batch["pw1"], batch["px1w1"])
    B, nx1 = px1.shape
    return {
        "pw1": px1,
        "px1w1": np.broadcast_to(np.eye(nx1), (B, nx1, nx1)).copy(),
        "pw2": batch["pw2"],
        "px2w2": batch["px2w2"],
    }


def lift_wx(px1: np.ndarray, px2: np.ndarray, side1: bool = True, side2: bool = True) -> DistBatch:
    """Identity lifts ``W_i = X_i`` of a batch of product input laws."""
    B, nx1 = px1.shape
    nx2 = px2.shape[1]
    if side1:
        pw1 = px1
        px1w1 = np.broadcast_to(np.eye(nx1), (B, nx1, nx1)).copy()
    else:
        pw1 = np.ones((B, 1))
        px1w1 = px1[:, np.newaxis, :]
    if side2:
        pw2 = px2
        px2w2 = np.broadcast_to(np.eye(nx2), (B, nx2, nx2)).copy()
    else:
        pw2 = np.ones((B, 1))
        px2w2 = px2[:, np.newaxis, :]
    return {"pw1": pw1, "px1w1": px1w1, "pw2": pw2, "px2w2": px2w2}


def _product_grid(ch: DiscreteIC, cfg: SearchConfig, chunk: int = _CHUNK) -> Iterator[tuple[np.ndarray, np.ndarray]]:
    blocks = [
        SimplexBlock("px1", 1, ch.nx1, cfg.grid_steps),
        SimplexBlock("px2", 1, ch.nx2, cfg.grid_steps),
    ]
    for _, batch in iter_grid_batches(blocks, chunk):
        yield batch["px1"][:, 0, :], batch["px2"][:, 0, :]


def layered_family(
    ch: DiscreteIC,
    cfg: SearchConfig,
    nw1: int,
    nw2: int,
    *,
    chunk: int = _CHUNK,
    tag: int = 0,
) -> Iterator[DistBatch]:
    """Grid + seeded random draws over ``P(w1) P(w2) P(x1|w1) P(x2|w2)``.

    Side layers of cardinality one use the marginal resolution (that factor
    *is* a marginal); wider layers use the conditional resolution.  Blocks
    are coarsened to respect ``cfg.max_candidates``.
    """
    def steps_for(n_slices: int) -> int:
        return cfg.grid_steps if n_slices == 1 else cfg.cond_grid_steps

    blocks = [
        SimplexBlock("pw1", 1, nw1, cfg.grid_steps),
        SimplexBlock("px1w1", nw1, ch.nx1, steps_for(nw1)),
        SimplexBlock("pw2", 1, nw2, cfg.grid_steps),
        SimplexBlock("px2w2", nw2, ch.nx2, steps_for(nw2)),
    ]
    blocks = shrink_to_budget(blocks, cfg.max_candidates)
    for _, raw in iter_grid_batches(blocks, chunk):
        yield {
            "pw1": raw["pw1"][:, 0, :],
            "px1w1": raw["px1w1"],
            "pw2": raw["pw2"][:, 0, :],
            "px2w2": raw["px2w2"],
        }
    if cfg.restarts > 0:
        rng = np.random.default_rng(np.random.SeedSequence([0xFA111E5, cfg.seed, tag]))
        yield {
            "pw1": rng.dirichlet(np.ones(nw1), size=cfg.restarts),
            "px1w1": rng.dirichlet(np.ones(ch.nx1), size=(cfg.restarts, nw1)),
            "pw2": rng.dirichlet(np.ones(nw2), size=cfg.restarts),
            "px2w2": rng.dirichlet(np.ones(ch.nx2), size=(cfg.restarts, nw2)),
        }


def _tin_anchor(ch: DiscreteIC, cfg: SearchConfig) -> tuple[np.ndarray, np.ndarray]:
    from .sumcap import tin_sumrate

    opt, _ = tin_sumrate(ch, cfg)
    return opt.px1, opt.px2


def scheme_family(ch: DiscreteIC, scheme: str, cfg: SearchConfig) -> Iterator[DistBatch]:
    """Enumerated input-law family for one scheme (see module docstring)."""
    tag = SCHEMES.index(scheme)
    ax1, ax2 = _tin_anchor(ch, cfg)
    anchors1 = ax1[np.newaxis, :]
    anchors2 = ax2[np.newaxis, :]

    if scheme == "tin":
        for px1, px2 in _product_grid(ch, cfg):
            yield lift_wx(px1, px2, side1=False, side2=False)
        yield lift_wx(anchors1, anchors2, side1=False, side2=False)
        return

    if scheme == "strong_capacity":
        for px1, px2 in _product_grid(ch, cfg):
            yield lift_wx(px1, px2)
        yield lift_wx(anchors1, anchors2)
        return

    if scheme in ("hk", "semijoint"):
        nw1 = cfg.card_w(ch.nx1)
        nw2 = cfg.card_w(ch.nx2)
        for batch in layered_family(ch, cfg, nw1, nw2, tag=tag):
            yield batch
            yield collapse_w1(batch)
            yield collapse_w2(batch)
            yield collapse_w2(collapse_w1(batch))
        for px1, px2 in _product_grid(ch, cfg):
            yield lift_wx(px1, px2, side1=False, side2=False)  # interference-as-noise laws
            yield lift_wx(px1, px2)  # full common layers
        yield lift_wx(anchors1, anchors2, side1=False, side2=False)
        yield lift_wx(anchors1, anchors2)
        return

    if scheme in ("hk_strong_y2", "one_sided"):
        nw2 = cfg.card_w(ch.nx2)
        for batch in layered_family(ch, cfg, 1, nw2, tag=tag):
            yield batch
            yield collapse_w2(batch)
        yield lift_wx(anchors1, anchors2, side1=False, side2=False)
        return

    raise ConfigError("unknown scheme", scheme=scheme)


def table_for_scheme(scheme: str) -> tuple[Constraint, ...]:
    return SCHEME_TABLES["semijoint" if scheme == "strong_capacity" else scheme]


def union_over_batches(
    ch: DiscreteIC,
    tables: Mapping[str, Sequence[Constraint]],
    batches: Iterable[DistBatch],
    angles: int,
    per_batch_hook: Callable[[BatchJoint, Mapping[str, np.ndarray]], None] | None = None,
) -> dict[str, RateRegion]:
    """Accumulate several schemes' unions over one shared family.

    ``per_batch_hook`` receives each batch's joint and the per-scheme bound
    matrices, enabling zero-tolerance per-law checks on exactly the laws the
    regions were built from.
    """
    accs = {name: SupportAccumulator(angles) for name in tables}
    count = 0
    for batch in batches:
        bj = batch_joint(ch, batch)
        count += bj.batch_size
        bounds = {name: batch_bounds(bj, table) for name, table in tables.items()}
        for name, table in tables.items():
            dirs, merged = merged_dirs_bounds(table, bounds[name])
            accs[name].add(dirs, merged)
        if per_batch_hook is not None:
            per_batch_hook(bj, bounds)
    return {
        name: acc.finalize({"scheme": name, "laws_enumerated": count, "angles": angles})
        for name, acc in accs.items()
    }


def region_scheme(ch: DiscreteIC, scheme: str, cfg: SearchConfig = SearchConfig()) -> RateRegion:
    """Grid-resolution rate region of one scheme (union + convex hull)."""
    if scheme not in SCHEMES:
        raise ConfigError("unknown scheme", scheme=scheme, allowed=SCHEMES)
    if scheme == "one_sided" and is_one_sided(ch) != OneSided.SIDE_A:
        raise NotOneSidedError("one_sided scheme needs a channel with a clean receiver 2")
    regions = union_over_batches(
        ch, {scheme: table_for_scheme(scheme)}, scheme_family(ch, scheme, cfg), cfg.angles
    )
    region = regions[scheme]
    region.meta.update({
        "grid_steps": cfg.grid_steps,
        "cond_grid_steps": cfg.cond_grid_steps,
        "restarts": cfg.restarts,
        "seed": cfg.seed,
    })
    return region


# ---------------------------------------------------------------------------
# Gaussian regions (closed-form bounds over power splits)
# ---------------------------------------------------------------------------

GAUSSIAN_SCHEMES = ("tin", "semijoint", "hk_strong_y2", "one_sided")


def _gauss_bounds(sys: GaussSystem, table: Sequence[Constraint]) -> list[float]:
    out = []
    for _, _, terms in table:
        val = 0.0
        for target, second, given in terms:
            val += sys.mi_bits(target, second, given)
        out.append(val)
    return out


def region_gaussian(
    g: GaussianIC, scheme: str, splits: int = 17, angles: int = 91
) -> RateRegion:
    """Gaussian-input rate region with a common/private power-split grid.

    The common layer of user ``i`` carries ``lam_i * P_i``; ``splits`` grid
    points cover ``lam in [0, 1]``.  All mutual-information bounds come from
    the exact jointly Gaussian log-determinant algebra.
    """
    if scheme not in GAUSSIAN_SCHEMES:
        raise ConfigError("unknown gaussian scheme", scheme=scheme, allowed=GAUSSIAN_SCHEMES)
    if splits < 1:
        raise ConfigError("splits must be >= 1", splits=splits)
    if scheme == "one_sided" and abs(g.b) > 1e-12:
        raise NotOneSidedError("gaussian one_sided scheme needs b == 0", b=g.b)
    table = table_for_scheme(scheme)
    lam = np.linspace(0.0, 1.0, splits) if splits > 1 else np.array([0.0])
    acc = SupportAccumulator(angles)
    if scheme == "tin":
        pairs = [(0.0, 0.0)]
    elif scheme == "semijoint":
        pairs = [(float(l1), float(l2)) for l1 in lam for l2 in lam]
    else:
        pairs = [(0.0, float(l2)) for l2 in lam]
    for lam1, lam2 in pairs:
        sys = split_system(g, lam1, lam2)
        bounds = np.array([_gauss_bounds(sys, table)])
        dirs, merged = merged_dirs_bounds(table, bounds)
        acc.add(dirs, merged)
    return acc.finalize({
        "scheme": scheme, "splits": splits, "angles": angles, "gaussian": True,
    })
