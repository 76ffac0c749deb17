"""Interleaving construction: two-sided domain bounds along a wobbling sequence.

Given an interior-exhausting sequence I_n, an exterior-shrinking sequence
E_n and a Hausdorff-convergent (possibly non-monotonic) sequence D_n, the
construction finds threshold indices m_k (smallest index from which every
later D_m is sandwiched between I_k and E_k), then builds monotone
sequences L_n, U_n with verified compact containments

    L_n inside D_{m_1 + n - 1} inside U_n   for every materialized n.

Case 1 steps (threshold advances by at most one) append the next I/E pair
directly; Case 2 steps (threshold jumps by s >= 2) repeat the current
interior domain s-1 times on the L side and build intermediate U domains
as shrinking envelopes of the union of the skipped D's with the next
exterior domain.  Every containment is recorded with its margin and can be
re-verified at doubled geometry resolution.  Evaluating a certificate
produces the two-sided inequality chain d_U <= d_D <= d_L for certified
solver intervals; a chain violation beyond slack is flagged as FAILURE
(it would indicate a solver bug, never fired in shipped configs).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional

import numpy as np

from imlab.estimates import MetricEstimate
from imlab.extremal import SolverConfig
from imlab.extremal.intervals import certified_interval
from imlab.geometry import (
    GeometryError,
    ModelDomain,
    PlanarDomain,
    compactly_contained,
    contains_compact,
    envelope,
    hausdorff,
    polygon_union,
)


class SequenceNotConverged(RuntimeError):
    """No admissible threshold index below the search cap."""

    def __init__(self, message: str, first_violation: Optional[int] = None):
        super().__init__(message)
        self.first_violation = first_violation


class SandwichConstructionError(RuntimeError):
    """The envelope shrinking loop could not fit between consecutive U's."""


@dataclass
class DomainSequence:
    """Lazy indexed family of domains with a declared convergence role.

    role: "interior" (I_n, increasing), "exterior" (E_n, decreasing), or
    "wobble" (D_n, Hausdorff-convergent without monotonicity).  Generators
    are deterministic; materialized domains are memoized.  The Hausdorff
    distance to the declared limit is recorded per materialized index.
    """

    role: str
    generator: Callable[[int], PlanarDomain | ModelDomain]
    limit: PlanarDomain | ModelDomain
    _memo: dict = field(default_factory=dict, repr=False)
    _hausdorff: dict = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        if self.role not in ("interior", "exterior", "wobble"):
            raise ValueError(f"unknown sequence role {self.role!r}")

    def domain(self, n: int):
        if n < 1:
            raise IndexError("sequences are 1-indexed")
        if n not in self._memo:
            self._memo[n] = self.generator(n)
        return self._memo[n]

    def hausdorff_to_limit(self, n: int) -> float:
        if n not in self._hausdorff:
            self._hausdorff[n] = hausdorff(self.domain(n), self.limit).distance
        return self._hausdorff[n]

    def validate(self, depth: int) -> None:
        """Check the role invariants over indices 1..depth."""
        if self.role == "interior":
            for n in range(1, depth):
                ok = compactly_contained(self.domain(n), self.domain(n + 1))
                if not ok:
                    raise SequenceNotConverged(
                        f"interior role violated: I_{n} not compactly inside "
                        f"I_{n + 1} (margin {ok.margin:.2e})", first_violation=n)
            for n in range(1, depth + 1):
                ok = compactly_contained(self.domain(n), self.limit)
                if not ok:
                    raise SequenceNotConverged(
                        f"interior role violated: I_{n} escapes the limit domain",
                        first_violation=n)
        elif self.role == "exterior":
            for n in range(1, depth):
                ok = compactly_contained(self.domain(n + 1), self.domain(n))
                if not ok:
                    raise SequenceNotConverged(
                        f"exterior role violated: E_{n + 1} not compactly inside "
                        f"E_{n} (margin {ok.margin:.2e})", first_violation=n)
            for n in range(1, depth + 1):
                ok = compactly_contained(self.limit, self.domain(n))
                if not ok:
                    raise SequenceNotConverged(
                        f"exterior role violated: closure(D) escapes E_{n}",
                        first_violation=n)
        else:
            values = [self.hausdorff_to_limit(n) for n in range(1, depth + 1)]
            tail = values[-max(3, depth // 4):]
            head = values[:max(3, depth // 4)]
            if depth >= 6 and not (max(tail) <= max(head) + 1e-12):
                raise SequenceNotConverged(
                    "wobble role violated: Hausdorff distances do not trend to zero")

    def eventual_containment_index(self, points: Iterable, depth: int) -> int:
        """Smallest n0 with the points compactly inside D_n for all n in [n0, depth]."""
        pts = list(points)
        ok = [contains_compact(self.domain(n), pts) for n in range(1, depth + 1)]
        n0 = None
        for n in range(depth, 0, -1):
            if ok[n - 1]:
                n0 = n
            else:
                break
        if n0 is None:
            raise SequenceNotConverged(
                "points are not eventually contained within the materialized range",
                first_violation=depth)
        return n0


def find_first_index(interior: PlanarDomain | ModelDomain,
                     exterior: PlanarDomain | ModelDomain,
                     dseq: DomainSequence, search_cap: int) -> int:
    """Smallest m with I inside D_m' inside E for every m' in [m, search_cap].

    Finite-horizon reading of the threshold index; the cap is an explicit
    experiment parameter and is recorded in the certificate.
    """
    ok = np.zeros(search_cap + 1, dtype=bool)
    for m in range(1, search_cap + 1):
        dm = dseq.domain(m)
        ok[m] = bool(compactly_contained(interior, dm)) and \
            bool(compactly_contained(dm, exterior))
    m_first = None
    for m in range(search_cap, 0, -1):
        if ok[m]:
            m_first = m
        else:
            break
    if m_first is None:
        first_bad = int(np.where(~ok[1:])[0][-1] + 1)
        raise SequenceNotConverged(
            f"no admissible index below cap {search_cap}; last violation at "
            f"m={first_bad}", first_violation=first_bad)
    return m_first


@dataclass
class SandwichPairing:
    """One verified triple L_n inside D_{m1+n-1} inside U_n."""

    n: int
    d_index: int
    lower_margin: float
    upper_margin: float


@dataclass
class SandwichCertificate:
    """The full interleaving artifact with audit data.

    Domains are stored by value (polygon payloads) so the certificate can
    be re-verified or evaluated without re-running the generators.
    """

    m_indices: list[int]
    lower_domains: list[PlanarDomain]
    upper_domains: list[PlanarDomain]
    wobble_domains: list[PlanarDomain]
    pairings: list[SandwichPairing]
    case_log: list[dict]
    search_cap: int

    @property
    def depth(self) -> int:
        return len(self.pairings)

    def to_json(self) -> str:
        payload = {
            "version": 1,
            "m_indices": self.m_indices,
            "search_cap": self.search_cap,
            "case_log": self.case_log,
            "pairings": [
                {"n": p.n, "d_index": p.d_index,
                 "lower_margin": p.lower_margin, "upper_margin": p.upper_margin}
                for p in self.pairings
            ],
            "lower_domains": [d.as_dict() for d in self.lower_domains],
            "upper_domains": [d.as_dict() for d in self.upper_domains],
            "wobble_domains": [d.as_dict() for d in self.wobble_domains],
        }
        return json.dumps(payload)

    @classmethod
    def from_json(cls, text: str) -> "SandwichCertificate":
        data = json.loads(text)
        return cls(
            m_indices=data["m_indices"],
            lower_domains=[PlanarDomain.from_dict(d) for d in data["lower_domains"]],
            upper_domains=[PlanarDomain.from_dict(d) for d in data["upper_domains"]],
            wobble_domains=[PlanarDomain.from_dict(d) for d in data["wobble_domains"]],
            pairings=[SandwichPairing(**p) for p in data["pairings"]],
            case_log=data["case_log"],
            search_cap=data["search_cap"],
        )

    def reverify(self, resolution_factor: float = 0.5) -> bool:
        """Re-check every recorded containment at refined resolution."""
        for p in self.pairings:
            ln = self.lower_domains[p.n - 1]
            un = self.upper_domains[p.n - 1]
            dn = self.wobble_domains[p.n - 1]
            ln_f = ln.with_resolution(ln.boundary_resolution * resolution_factor)
            un_f = un.with_resolution(un.boundary_resolution * resolution_factor)
            dn_f = dn.with_resolution(dn.boundary_resolution * resolution_factor)
            if not compactly_contained(ln_f, dn_f):
                return False
            if not compactly_contained(dn_f, un_f):
                return False
        for n in range(1, self.depth):
            ln = self.lower_domains[n - 1]
            ln1 = self.lower_domains[n]
            if not ln1.shapely.covers(ln.shapely):
                return False
            un = self.upper_domains[n - 1]
            un1 = self.upper_domains[n]
            if not compactly_contained(un1, un):
                return False
        return True


def _shrinking_envelope(cover_parts: list[PlanarDomain], outer: PlanarDomain,
                        resolution: float) -> PlanarDomain:
    """Envelope of the union, with the radius halved until inside ``outer``."""
    union = polygon_union(cover_parts, resolution)
    gap = compactly_contained(union, outer)
    if not gap:
        raise SandwichConstructionError(
            "union of skipped domains escapes the previous upper domain")
    delta = max(gap.margin / 2.0, resolution)
    while delta > resolution / 2.0:
        try:
            grown = envelope(union, delta)
        except GeometryError:
            delta /= 2.0
            continue
        if compactly_contained(grown, outer):
            return grown
        delta /= 2.0
    raise SandwichConstructionError(
        "envelope shrinking reached the resolution floor; exterior gap too tight")


def build_sandwich(iseq: DomainSequence, eseq: DomainSequence,
                   dseq: DomainSequence, depth: int,
                   search_cap: int) -> SandwichCertificate:
    """Run the interleaving induction to the requested monotone depth."""
    if iseq.role != "interior" or eseq.role != "exterior" or dseq.role != "wobble":
        raise ValueError("sequences must have roles interior/exterior/wobble")
    iseq.validate(depth)
    eseq.validate(depth)

    m_indices = [find_first_index(iseq.domain(1), eseq.domain(1), dseq, search_cap)]
    lower = [iseq.domain(1)]
    upper = [eseq.domain(1)]
    case_log: list[dict] = []
    mu = m_indices[0]  # D-index paired with the most recent entry

    for stage in range(1, depth):
        m_next = find_first_index(iseq.domain(stage + 1), eseq.domain(stage + 1),
                                  dseq, search_cap)
        m_indices.append(m_next)
        if m_next <= mu + 1:
            case_log.append({"stage": stage, "case": 1, "m": m_next})
            lower.append(iseq.domain(stage + 1))
            upper.append(eseq.domain(stage + 1))
            mu += 1
        else:
            s = m_next - mu
            case_log.append({"stage": stage, "case": 2, "m": m_next, "s": s})
            e_next = eseq.domain(stage + 1)
            res = e_next.boundary_resolution
            for k in range(1, s):
                lower.append(iseq.domain(stage))
                window = [dseq.domain(l) for l in range(mu + k, m_next)]
                upper.append(_shrinking_envelope([e_next] + window, upper[-1], res))
            lower.append(iseq.domain(stage + 1))
            upper.append(e_next)
            mu += s

    wobble = [dseq.domain(m_indices[0] + n - 1) for n in range(1, len(lower) + 1)]
    pairings = []
    for n, (ln, un, dn) in enumerate(zip(lower, upper, wobble), start=1):
        lo = compactly_contained(ln, dn)
        hi = compactly_contained(dn, un)
        if not lo or not hi:
            raise SandwichConstructionError(
                f"pairing containment failed at n={n} "
                f"(lower margin {lo.margin:.2e}, upper margin {hi.margin:.2e})")
        pairings.append(SandwichPairing(n=n, d_index=m_indices[0] + n - 1,
                                        lower_margin=lo.margin,
                                        upper_margin=hi.margin))
    return SandwichCertificate(
        m_indices=m_indices,
        lower_domains=lower,
        upper_domains=upper,
        wobble_domains=wobble,
        pairings=pairings,
        case_log=case_log,
        search_cap=search_cap,
    )


@dataclass
class ChainRow:
    """Evaluated inequality chain at one (n, pair) cell."""

    n: int
    d_index: int
    pair_id: int
    entered: bool
    upper_track: Optional[MetricEstimate]
    middle_track: Optional[MetricEstimate]
    lower_track: Optional[MetricEstimate]
    chain_ok: Optional[bool]


@dataclass
class SandwichReport:
    rows: list[ChainRow]
    failures: int

    @property
    def all_chains_hold(self) -> bool:
        return self.failures == 0


def evaluate_sandwich(cert: SandwichCertificate, pairs: list[tuple],
                      system: str = "k",
                      config: Optional[SolverConfig] = None,
                      waypoints: Iterable = ()) -> SandwichReport:
    """Evaluate d_{U_n} <= d_{D_m} <= d_{L_n} with certified intervals.

    Rows where the pair has not yet entered L_n (with margin) are reported
    as skipped; a chain violation beyond the merged interval slack counts
    as a FAILURE.
    """
    config = config or SolverConfig()
    cache: dict = {}
    rows = []
    failures = 0
    eps = 1e-9
    for pair_id, (z, w) in enumerate(pairs):
        for p in cert.pairings:
            ln = cert.lower_domains[p.n - 1]
            un = cert.upper_domains[p.n - 1]
            dn = cert.wobble_domains[p.n - 1]
            if not contains_compact(ln, [z, w]):
                rows.append(ChainRow(p.n, p.d_index, pair_id, False,
                                     None, None, None, None))
                continue
            est_u = certified_interval(un, z, w, system, config,
                                       waypoints=waypoints, edge_cache=cache)
            est_d = certified_interval(dn, z, w, system, config,
                                       waypoints=waypoints, edge_cache=cache)
            est_l = certified_interval(ln, z, w, system, config,
                                       waypoints=waypoints, edge_cache=cache)
            slack_ud = est_u.slack + est_d.slack + eps
            slack_dl = est_d.slack + est_l.slack + eps
            ok = (est_u.lower <= est_d.upper + slack_ud) and \
                (est_d.lower <= est_l.upper + slack_dl)
            if not ok:
                failures += 1
            rows.append(ChainRow(p.n, p.d_index, pair_id, True,
                                 est_u, est_d, est_l, ok))
    return SandwichReport(rows=rows, failures=failures)
