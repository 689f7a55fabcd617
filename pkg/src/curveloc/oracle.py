"""Brute-force inclusion/exclusion point location used as ground truth.

The sign vector of a query point records, per input curve, on which side of
the curve's supporting locus the point lies: inside/outside for disk
boundaries, above/below for graphs (parabola arcs and segments, classified
against the full supporting parabola or line).  ``naive_locate`` is a plain
linear scan over the curves and serves as the validation oracle for the
indexed structures.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .geometry_core import Curve, DiskBoundary, Point, support_sign

INSIDE = "i"
OUTSIDE = "o"
ABOVE_LBL = "a"
BELOW_LBL = "b"


@dataclass(frozen=True)
class SignVector:
    """Per-curve side labels plus on-flags for epsilon-near classifications."""
    labels: tuple[str, ...]
    on_flags: tuple[bool, ...]

    def __str__(self) -> str:
        return "".join(l.upper() if f else l
                       for l, f in zip(self.labels, self.on_flags))

    @property
    def near_any_curve(self) -> bool:
        return any(self.on_flags)

    def matches(self, other: "SignVector") -> bool:
        return self.labels == other.labels


def _label(curve: Curve, sign: int) -> str:
    if isinstance(curve, DiskBoundary):
        return OUTSIDE if sign >= 0 else INSIDE
    return ABOVE_LBL if sign >= 0 else BELOW_LBL


def sign_vector(curves: list[Curve], q: Point, eps: float) -> SignVector:
    """Componentwise classification of q by implicit equation sign."""
    labels = []
    flags = []
    for curve in curves:
        s = support_sign(curve, q.x, q.y, eps)
        flags.append(s == 0)
        labels.append(_label(curve, 1 if s == 0 else s))
    return SignVector(tuple(labels), tuple(flags))


@dataclass
class OracleCounter:
    evaluations: int = 0


def naive_locate(curves: list[Curve], q: Point, eps: float,
                 counter: OracleCounter | None = None) -> SignVector:
    """Linear scan over all curves; one predicate evaluation per curve."""
    if counter is not None:
        counter.evaluations += len(curves)
    return sign_vector(curves, q, eps)


def signs_from_array(curves: list[Curve], signs: np.ndarray) -> SignVector:
    """SignVector from a raw +-1/0 sign row (0 marks an on-flag)."""
    labels = tuple(_label(c, 1 if s == 0 else int(s))
                   for c, s in zip(curves, signs))
    flags = tuple(bool(s == 0) for s in signs)
    return SignVector(labels, flags)


@dataclass
class ValidationReport:
    total: int
    compared: int
    mismatches: list[tuple[Point, str, str]] = field(default_factory=list)

    @property
    def agreement_rate(self) -> float:
        if self.compared == 0:
            return 1.0
        return 1.0 - len(self.mismatches) / self.compared

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def summary(self) -> str:
        return (f"compared={self.compared}/{self.total} "
                f"agreement={self.agreement_rate:.6f} "
                f"mismatches={len(self.mismatches)}")


def validate_index(locate_fn, curves: list[Curve], working_box,
                   num_samples: int, seed: int, eps: float) -> ValidationReport:
    """Compare a structure's sign vectors against the naive oracle.

    ``locate_fn(q) -> SignVector`` is the structure under test.  Samples are
    seeded-uniform in the working box; points with any on-flag (within eps
    of a curve) are excluded from the comparison.
    """
    rng = np.random.default_rng(seed)
    xs = rng.uniform(working_box.xmin, working_box.xmax, num_samples)
    ys = rng.uniform(working_box.ymin, working_box.ymax, num_samples)
    report = ValidationReport(total=num_samples, compared=0)
    for x, y in zip(xs, ys):
        q = Point(float(x), float(y))
        expected = naive_locate(curves, q, eps)
        if expected.near_any_curve:
            continue
        report.compared += 1
        got = locate_fn(q)
        if not expected.matches(got):
            report.mismatches.append((q, str(got), str(expected)))
    return report
