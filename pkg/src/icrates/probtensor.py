"""Exact finite-probability kernels over named dense tensors.

Conventions used throughout the package:

- all logarithms are base 2, every information quantity is in bits per
  channel use;
- ``0 * log 0 := 0``;
- mutual information is computed through entropies of sub-marginals
  (``I(T;S|G) = H(TG) + H(SG) - H(G) - H(TSG)``) so no ratio of a positive
  mass by a zero mass is ever formed;
- tensors are 64-bit floats, dense, and immutable after construction.

A tensor is *unconditional* when its values sum to one over all axes, and
*conditional* when every slice obtained by fixing the conditioning axes sums
to one.  The normalization tolerance is ``MASS_TOL``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Iterable, Sequence

import numpy as np

from .errors import (
    DimensionMismatchError,
    InvalidQueryError,
    NegativeMassError,
    OverlappingSetsError,
    SizeLimitError,
    SliceNormalizationError,
    UnknownAxisError,
)

if TYPE_CHECKING:  # pragma: no cover - import cycle guard, hints only
    from .channels import DiscreteIC
    from .regions import AuxInputDist

#: Hard cap on the product of axis cardinalities for a dense tensor.
SIZE_LIMIT = 10_000_000

#: Tolerance for "sums to one" checks on distributions and slices.
MASS_TOL = 1e-9


def _neg_xlog2x_sum(values: np.ndarray) -> float:
    """Return ``-sum(v * log2(v))`` with the 0*log0 := 0 convention."""
    v = np.asarray(values, dtype=np.float64).reshape(-1)
    logs = np.zeros_like(v)
    np.log2(v, out=logs, where=v > 0.0)
    return float(-(v * logs).sum())


@dataclass(frozen=True)
class ProbTensor:
    """Dense nonnegative tensor over named finite variable axes.

    ``names`` orders the axes; ``values.shape[i]`` is the cardinality of
    ``names[i]``.  Construction checks structure only (shapes, unique names,
    size budget); the mass invariants are checked by :func:`validate` /
    :func:`require_valid` so that deliberately invalid tensors can be built
    and diagnosed.
    """

    names: tuple[str, ...]
    values: np.ndarray

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=np.float64)
        if values.ndim != len(self.names):
            raise DimensionMismatchError(
                "tensor rank does not match axis names",
                rank=values.ndim,
                names=list(self.names),
            )
        if len(set(self.names)) != len(self.names):
            raise DimensionMismatchError("axis names are not unique", names=list(self.names))
        if any(c < 1 for c in values.shape):
            raise DimensionMismatchError("every axis needs cardinality >= 1", shape=values.shape)
        if values.size > SIZE_LIMIT:
            raise SizeLimitError(
                "dense tensor exceeds size budget", size=values.size, limit=SIZE_LIMIT
            )
        values = values.copy()
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "names", tuple(self.names))

    @classmethod
    def from_array(cls, values: np.ndarray, names: Sequence[str]) -> "ProbTensor":
        return cls(tuple(names), np.asarray(values, dtype=np.float64))

    @property
    def cards(self) -> tuple[int, ...]:
        return self.values.shape

    def card(self, name: str) -> int:
        return self.values.shape[self.axis(name)]

    def axis(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise UnknownAxisError("no such axis", axis=name, have=list(self.names)) from None

    def axes(self, names: Iterable[str]) -> tuple[int, ...]:
        return tuple(self.axis(n) for n in names)


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of a mass-invariant check.

    ``slice_deviations`` holds ``|mass - 1|`` per conditioning slice in
    C-order of the conditioning axes (a single entry for unconditional
    tensors).  ``worst_slice`` identifies the offending slice by axis name.
    """

    ok: bool
    min_value: float
    max_deviation: float
    worst_slice: dict[str, int]
    slice_deviations: np.ndarray = field(repr=False)


def validate(t: ProbTensor, conditioning: Iterable[str] = ()) -> ValidationReport:
    """Check nonnegativity and per-slice normalization; never raises."""
    cond = tuple(conditioning)
    cond_axes = t.axes(cond)
    sum_axes = tuple(i for i in range(len(t.names)) if i not in cond_axes)
    mass = t.values.sum(axis=sum_axes) if sum_axes else t.values
    mass = np.atleast_1d(np.asarray(mass))
    dev = np.abs(mass - 1.0)
    flat_worst = int(np.argmax(dev))
    if cond_axes:
        shape = tuple(t.values.shape[i] for i in cond_axes)
        idx = np.unravel_index(flat_worst, shape)
        worst = {cond[k]: int(idx[k]) for k in range(len(cond))}
    else:
        worst = {}
    min_value = float(t.values.min())
    max_dev = float(dev.max())
    ok = min_value >= -MASS_TOL and max_dev <= MASS_TOL
    return ValidationReport(
        ok=ok,
        min_value=min_value,
        max_deviation=max_dev,
        worst_slice=worst,
        slice_deviations=dev.reshape(-1),
    )


def require_valid(t: ProbTensor, conditioning: Iterable[str] = ()) -> ValidationReport:
    """Like :func:`validate` but raises on the first violated invariant."""
    report = validate(t, conditioning)
    if report.min_value < -MASS_TOL:
        raise NegativeMassError(
            "tensor has negative probability mass", min_value=report.min_value
        )
    if report.max_deviation > MASS_TOL:
        raise SliceNormalizationError(
            "slice mass deviates from 1",
            slice=report.worst_slice,
            deviation=report.max_deviation,
        )
    return report


def marginalize(t: ProbTensor, keep: Iterable[str]) -> ProbTensor:
    """Sum out every axis not in ``keep`` (unconditional tensors only).

    Summing is exact -- no renormalization is applied.
    """
    keep = tuple(keep)
    keep_axes = set(t.axes(keep))
    order = [n for n in t.names if n in set(keep)]
    sum_axes = tuple(i for i in range(len(t.names)) if i not in keep_axes)
    out = t.values.sum(axis=sum_axes) if sum_axes else t.values
    return ProbTensor(tuple(order), np.asarray(out, dtype=np.float64))


@dataclass(frozen=True)
class InfoQuery:
    """Variable sets for an information query ``target``/``second``/``given``.

    The three sets must be pairwise disjoint and name existing axes of the
    tensor they are evaluated against.
    """

    target: frozenset[str]
    second: frozenset[str] = frozenset()
    given: frozenset[str] = frozenset()

    @classmethod
    def of(
        cls,
        target: str | Iterable[str],
        second: str | Iterable[str] = (),
        given: str | Iterable[str] = (),
    ) -> "InfoQuery":
        return cls(_as_names(target), _as_names(second), _as_names(given))

    def __post_init__(self) -> None:
        if not self.target:
            raise InvalidQueryError("query target set is empty")
        if self.target & self.second or self.target & self.given or self.second & self.given:
            raise OverlappingSetsError(
                "query sets overlap",
                target=sorted(self.target),
                second=sorted(self.second),
                given=sorted(self.given),
            )

    def check_names(self, t: ProbTensor) -> None:
        for name in sorted(self.target | self.second | self.given):
            t.axis(name)


def _as_names(spec: str | Iterable[str]) -> frozenset[str]:
    if isinstance(spec, str):
        return frozenset((spec,))
    return frozenset(spec)


def _subset_entropy(t: ProbTensor, names: frozenset[str]) -> float:
    sum_axes = tuple(i for i, n in enumerate(t.names) if n not in names)
    m = t.values.sum(axis=sum_axes) if sum_axes else t.values
    return _neg_xlog2x_sum(m)


def entropy(t: ProbTensor, q: InfoQuery) -> float:
    """Conditional entropy ``H(target | given)`` in bits.

    ``q.second`` must be empty.  The result is clamped into
    ``[0, log2(prod of target cardinalities)]`` (floating slack only).
    """
    if q.second:
        raise InvalidQueryError("entropy query must have an empty `second` set")
    q.check_names(t)
    h = _subset_entropy(t, q.target | q.given) - _subset_entropy(t, q.given)
    return max(h, 0.0)


def mutual_information(t: ProbTensor, q: InfoQuery) -> float:
    """Conditional mutual information ``I(target; second | given)`` in bits."""
    if not q.second:
        raise InvalidQueryError("mutual information query needs a nonempty `second` set")
    q.check_names(t)
    h_tg = _subset_entropy(t, q.target | q.given)
    h_sg = _subset_entropy(t, q.second | q.given)
    h_g = _subset_entropy(t, q.given)
    h_tsg = _subset_entropy(t, q.target | q.second | q.given)
    return max(h_tg + h_sg - h_g - h_tsg, 0.0)


def compose_joint(aux: "AuxInputDist", ch: "DiscreteIC") -> ProbTensor:
    """Full joint over ``(W1, W2, X1, X2, Y1, Y2)`` for a layered input law.

    The construction multiplies ``P(w1) P(w2) P(x1|w1) P(x2|w2)`` with the
    channel law, so the chains ``(W1, W2) -> (X1, X2) -> (Y1, Y2)``,
    ``W1 -> X1 -> outputs`` and ``W2 -> X2 -> outputs`` hold by construction.
    """
    if aux.nx1 != ch.nx1 or aux.nx2 != ch.nx2:
        raise DimensionMismatchError(
            "input-layer cardinalities do not match the channel",
            aux=(aux.nx1, aux.nx2),
            channel=(ch.nx1, ch.nx2),
        )
    joint = np.einsum(
        "a,b,ai,bj,ijkl->abijkl",
        aux.pw1,
        aux.pw2,
        aux.px1_given_w1,
        aux.px2_given_w2,
        ch.law.values,
        optimize=True,
    )
    return ProbTensor(("W1", "W2", "X1", "X2", "Y1", "Y2"), joint)


class BatchJoint:
    """A batch of joint distributions sharing one axis layout.

    ``values`` has shape ``[B, c1, ..., cn]`` where row ``b`` is one joint
    distribution.  Subset entropies are cached per instance, so evaluating
    many mutual-information terms over the same batch reuses marginals.
    Instances are write-once: callers must not mutate ``values``.
    """

    #: Joints with more cells than this marginalize by axis sums instead of
    #: cached aggregation matrices (which would get quadratically large).
    _AGG_LIMIT = 65536

    def __init__(self, names: Sequence[str], values: np.ndarray) -> None:
        self.names = tuple(names)
        self.values = values
        if values.ndim != len(self.names) + 1:
            raise DimensionMismatchError(
                "batch rank must be 1 + number of axes",
                rank=values.ndim,
                names=list(self.names),
            )
        self._flat = np.ascontiguousarray(values.reshape(values.shape[0], -1))
        self._cache: dict[frozenset[str], np.ndarray] = {}
        self._agg_cache: dict[frozenset[str], np.ndarray] = {}

    @property
    def batch_size(self) -> int:
        return self.values.shape[0]

    def _agg_matrix(self, key: frozenset[str]) -> np.ndarray:
        """0/1 matrix mapping flattened joint cells to flattened kept cells."""
        cached = self._agg_cache.get(key)
        if cached is not None:
            return cached
        shape = self.values.shape[1:]
        keep_axes = tuple(i for i, n in enumerate(self.names) if n in key)
        coords = np.indices(shape).reshape(len(shape), -1)
        if keep_axes:
            kept_shape = tuple(shape[i] for i in keep_axes)
            kept_flat = np.ravel_multi_index([coords[i] for i in keep_axes], kept_shape)
            mtot = int(np.prod(kept_shape))
        else:
            kept_flat = np.zeros(coords.shape[1], dtype=np.int64)
            mtot = 1
        agg = np.zeros((coords.shape[1], mtot))
        agg[np.arange(coords.shape[1]), kept_flat] = 1.0
        self._agg_cache[key] = agg
        return agg

    def entropy(self, names: Iterable[str]) -> np.ndarray:
        key = frozenset(names)
        cached = self._cache.get(key)
        if cached is not None:
            return cached
        unknown = key - set(self.names)
        if unknown:
            raise UnknownAxisError("no such axis", axis=sorted(unknown), have=list(self.names))
        if self._flat.shape[1] <= self._AGG_LIMIT:
            m = self._flat @ self._agg_matrix(key)
        else:
            sum_axes = tuple(i + 1 for i, n in enumerate(self.names) if n not in key)
            m = self.values.sum(axis=sum_axes) if sum_axes else self.values
            m = m.reshape(m.shape[0], -1)
        logs = np.zeros_like(m)
        np.log2(m, out=logs, where=m > 0.0)
        h = -(m * logs).sum(axis=1)
        self._cache[key] = h
        return h

    def mi(
        self,
        target: Iterable[str],
        second: Iterable[str],
        given: Iterable[str] = (),
    ) -> np.ndarray:
        t = frozenset(target)
        s = frozenset(second)
        g = frozenset(given)
        out = self.entropy(t | g) + self.entropy(s | g) - self.entropy(g) - self.entropy(t | s | g)
        return np.maximum(out, 0.0)
