"""Cross-check of the group-law prediction for nine points against the rank oracle.

For nine distinct points S on a smooth plane cubic C, with w the class of
3H - sum(P_i) in Pic^0(C):

    h^0(I_S^t(3t)) = 1 + #{1 <= k <= t : k w = 0},    h^1 = h^0 - 1.

``verify_config`` computes the right-hand side from the chord-tangent law and
the left-hand side from interpolation ranks, independently.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from ninepoints import catalog
from ninepoints.cubic import (
    DEFAULT_TORSION_BOUND,
    FINITE_FIELD_NOTE,
    GroupContext,
    PlaneCubic,
    TorsionReport,
    cubics_through,
    gamma,
    lclass,
    smooth_member,
    torsion_order,
)
from ninepoints.errors import (
    AmbiguousCubicError,
    InputError,
    InsufficientBoundError,
    RealizabilityError,
    SingularCubicError,
)
from ninepoints.fatpoints import dim_symbolic_component, euler_char_nine
from ninepoints.linalg import QQ, Field
from ninepoints.projective import PointConfiguration, normalize

DEFAULT_T_MAX = 8


def predict_h0(order: int | None, t: int, bound: int | None = None) -> int:
    """1 + floor(t / order); 1 when the class has no torsion.

    ``bound`` is how far absence of torsion has been certified (None: for all t).
    """
    if t < 1:
        raise InputError("t must be positive")
    if order is not None:
        return 1 + t // order
    if bound is not None and t > bound:
        raise InsufficientBoundError(f"no-torsion certified only up to {bound}, asked t={t}")
    return 1


def predict_from_report(report: TorsionReport, t: int) -> int:
    return 1 + sum(gamma(report, k) for k in range(1, t + 1))


@dataclass(frozen=True)
class VerifyRecord:
    t: int
    predicted_h0: int
    oracle_h0: int
    h1: int
    match: bool


@dataclass
class VerifyReport:
    config: PointConfiguration
    curve: PlaneCubic
    pencil: bool
    torsion: TorsionReport
    records: list = field(default_factory=list)
    jumps: list = field(default_factory=list)
    torsion_iff_holds: bool = True
    note: str = ""

    @property
    def all_match(self) -> bool:
        return all(r.match for r in self.records)

    @property
    def oracle_h0(self) -> list[int]:
        return [r.oracle_h0 for r in self.records]

    @property
    def predicted_h0(self) -> list[int]:
        return [r.predicted_h0 for r in self.records]

    @property
    def first_jump(self) -> int | None:
        return self.jumps[0] if self.jumps else None

    def to_dict(self) -> dict:
        F = self.config.field
        return {
            "field": "rationals" if F.is_rational else {"prime": F.p},
            "points": [[str(x) for x in P.coords] for P in self.config.points],
            "cubic": [str(c) for c in self.curve.coeffs],
            "pencil": self.pencil,
            "torsion": self.torsion.to_dict(),
            "records": [{"t": r.t, "predicted_h0": r.predicted_h0, "oracle_h0": r.oracle_h0,
                         "h1": r.h1, "match": r.match} for r in self.records],
            "jumps": list(self.jumps),
            "all_match": self.all_match,
            "torsion_iff_holds": self.torsion_iff_holds,
            "note": self.note,
        }

    def table(self) -> str:
        lines = [f"field: {self.config.field}   torsion order: "
                 f"{self.torsion.order if self.torsion.order else 'none'}"
                 + ("   (pencil)" if self.pencil else "")]
        if self.note:
            lines.append(f"note: {self.note}")
        lines.append(" t  predicted  oracle  h1  match")
        for r in self.records:
            lines.append(f"{r.t:2d}  {r.predicted_h0:9d}  {r.oracle_h0:6d}  {r.h1:2d}  "
                         f"{'yes' if r.match else 'NO'}")
        lines.append(f"jumps: {', '.join(map(str, self.jumps)) or 'none'}")
        return "\n".join(lines) + "\n"


def admissible_cubic(config: PointConfiguration) -> tuple[PlaneCubic, bool]:
    """The smooth cubic through nine points, and whether the points span a pencil.

    A pencil (two independent cubics) is accepted when it has a smooth member:
    its base points are the nine points and the class of 3H - sum(P_i) is trivial.
    """
    if config.n != 2 or len(config) != 9:
        raise InputError("verification needs nine points in P^2")
    basis = cubics_through(config.points)
    if len(basis) > 2:
        raise AmbiguousCubicError(f"{len(basis)}-dimensional space of cubics through the points",
                                  basis)
    C = smooth_member(basis)
    if C is None:
        if len(basis) == 2:
            raise AmbiguousCubicError("pencil of cubics without a smooth member found", basis)
        raise SingularCubicError("the unique cubic through the points is singular")
    return C, len(basis) == 2


def verify_config(config: PointConfiguration, t_max: int = DEFAULT_T_MAX,
                  K: int = DEFAULT_TORSION_BOUND) -> VerifyReport:
    if t_max < 1:
        raise InputError("t_max must be positive")
    C, pencil = admissible_cubic(config)
    ctx = GroupContext(C, config.points[0])
    w = lclass(ctx, config.points)
    report = torsion_order(ctx, w, max(K, t_max) if not config.field.is_rational else K)
    out = VerifyReport(config, C, pencil, report)
    if not config.field.is_rational:
        out.note = FINITE_FIELD_NOTE
    prev_h1 = 0
    for t in range(1, t_max + 1):
        predicted = predict_from_report(report, t)
        oracle = dim_symbolic_component(config, t, 3 * t)
        h1 = oracle - euler_char_nine(t)
        out.records.append(VerifyRecord(t, predicted, oracle, h1, predicted == oracle))
        if h1 > prev_h1:
            out.jumps.append(t)
        prev_h1 = h1
        torsion_seen = any(gamma(report, k) for k in range(1, t + 1))
        if (h1 > 0) != torsion_seen:
            out.torsion_iff_holds = False
    return out


@dataclass(frozen=True)
class SupportEntry:
    order: int
    field: Field
    report: VerifyReport
    generated: catalog.GeneratedConfig

    @property
    def first_jump(self) -> int | None:
        return self.report.first_jump


@dataclass
class SupportSummary:
    entries: list = field(default_factory=list)

    @property
    def thresholds(self) -> list[int]:
        return sorted({e.first_jump for e in self.entries if e.first_jump is not None})

    @property
    def sequences(self) -> list[tuple]:
        return [tuple(e.report.oracle_h0) for e in self.entries]

    def distinct_sequences(self) -> int:
        return len(set(self.sequences))

    def to_csv(self) -> str:
        lines = ["order,field,first_jump,all_match,h0_sequence"]
        for e in self.entries:
            fj = "" if e.first_jump is None else e.first_jump
            seq = " ".join(map(str, e.report.oracle_h0))
            lines.append(f"{e.order},{e.field},{fj},{int(e.report.all_match)},{seq}")
        return "\n".join(lines) + "\n"


def support_experiment(orders, field: Field = QQ, t_max: int = DEFAULT_T_MAX,
                       seed: int = 0) -> SupportSummary:
    """One generated configuration per target order; records where h^1 first becomes nonzero.

    Over QQ, orders without a rational realization in the catalog are moved to
    a finite field and the entry records that field.
    """
    orders = list(orders)
    if len(set(orders)) != len(orders):
        raise InputError("target orders must be distinct")
    summary = SupportSummary()
    for d in orders:
        if d < 1:
            raise RealizabilityError(f"torsion order must be positive, got {d}")
        gen = catalog.generate_config(d, field, seed)
        report = verify_config(gen.config, t_max, max(DEFAULT_TORSION_BOUND, d))
        summary.entries.append(SupportEntry(d, gen.field, report, gen))
    return summary


def random_general_config(seed: int, height: int = 6) -> PointConfiguration:
    """Nine random rational points with small integer coordinates on a smooth unique cubic."""
    rng = random.Random(seed)
    while True:
        pts = set()
        while len(pts) < 9:
            raw = [rng.randint(-height, height) for _ in range(3)]
            if any(raw):
                pts.add(normalize(raw, QQ))
        config = PointConfiguration(2, tuple(sorted(pts, key=str)), None, QQ)
        try:
            _, pencil = admissible_cubic(config)
        except (AmbiguousCubicError, SingularCubicError):
            continue
        if not pencil:
            return config
