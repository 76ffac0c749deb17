"""Generators for the convergence experiments' domain sequences.

Monotone interior/exterior families come from erosions and envelopes at
radii 1/(N0+n); wobble families are deliberately non-monotonic (radial
boundary waves with drifting phase, alternating envelope/erosion offsets,
or the alternating mode with amplitude spikes on a sparse subsequence);
the hyperconvex exterior family realizes sublevel sets of an explicit
plurisubharmonic exhaustion on a planar disc model.
"""

from __future__ import annotations

import math
from typing import Callable

import numpy as np

from imlab.geometry import (
    GeometryError,
    ModelDomain,
    PlanarDomain,
    disc_polygon,
    envelope,
    erode,
)
from imlab.sandwich import DomainSequence

GOLDEN = 0.5 * (math.sqrt(5.0) - 1.0)


class GeneratorError(RuntimeError):
    """A sequence generator could not satisfy its role invariants."""


def amplitude_law(spec: dict) -> Callable[[int], float]:
    """Amplitude law a(n) -> 0 from a JSON-friendly spec.

    Supported: inv_linear  a0/(n+b);  inv_square  a0/(n+b)^2;
    inv_sqrt  a0/sqrt(n+b);  spiky  base law plus spikes
    s0/(n+b)^gamma on the subsequence n = 2^j.
    """
    name = spec["name"]
    if name == "spiky":
        base = amplitude_law(spec["base"])
        s0 = float(spec.get("spike_scale", 4.0 * spec["base"].get("scale", 1.0)))
        gamma = float(spec.get("spike_exponent", 1.0))
        b = float(spec["base"].get("offset", 2.0))

        def law(n: int) -> float:
            if n >= 2 and (n & (n - 1)) == 0:
                return s0 / (n + b) ** gamma
            return base(n)

        return law
    a0 = float(spec.get("scale", 1.0))
    b = float(spec.get("offset", 2.0))
    if name == "inv_linear":
        return lambda n: a0 / (n + b)
    if name == "inv_square":
        return lambda n: a0 / (n + b) ** 2
    if name == "inv_sqrt":
        return lambda n: a0 / math.sqrt(n + b)
    raise GeneratorError(f"unknown amplitude law {name!r}")


def gen_monotone_sequences(domain: PlanarDomain, n0: int, count: int,
                           n0_cap: int = 40):
    """Interior erosions I_n and exterior envelopes E_n at radii 1/(N0+n).

    N0 is auto-raised to the smallest value for which every erosion in the
    materialized range is nonempty and connected; the used value is
    returned alongside the sequences.
    """
    if n0 < 1:
        raise GeneratorError("N0 must be a positive integer")
    used = n0
    while used <= n0_cap:
        good = True
        for n in range(1, count + 1):
            result = erode(domain, 1.0 / (used + n))
            if not result.is_connected:
                good = False
                break
        if good:
            break
        used += 1
    else:
        raise GeneratorError(f"no valid N0 below {n0_cap}: erosions stay disconnected")

    iseq = DomainSequence(
        role="interior",
        generator=lambda n: erode(domain, 1.0 / (used + n)).domain,
        limit=domain,
    )
    eseq = DomainSequence(
        role="exterior",
        generator=lambda n: envelope(domain, 1.0 / (used + n)),
        limit=domain,
    )
    try:
        iseq.validate(count)
        eseq.validate(count)
    except Exception as exc:
        raise GeneratorError(
            f"monotone role invariants failed at N0={used}: {exc}; "
            "use a finer boundary resolution or a shallower range") from exc
    return iseq, eseq, used


def _radial_wobble(domain: PlanarDomain, amp: float, wave: int,
                   phase: float, n_points: int) -> PlanarDomain:
    samples = domain.boundary_samples(domain.perimeter / n_points)
    nxt = np.roll(samples, -1)
    prv = np.roll(samples, 1)
    tangents = nxt - prv
    normals = -1j * tangents / np.abs(tangents)
    arc = np.cumsum(np.abs(samples - prv))
    arc = 2.0 * math.pi * arc / arc[-1]
    disp = amp * np.sin(wave * arc + phase)
    return PlanarDomain(samples + disp * normals, domain.boundary_resolution)


def gen_wobble_sequence(domain: PlanarDomain | ModelDomain, law_spec: dict,
                        mode: str, seed: int = 0, wave: int = 5,
                        n_points: int = 192) -> DomainSequence:
    """Hausdorff-convergent non-monotonic sequence toward the given limit.

    Modes: "radial" (boundary waves along outward normals, drifting phase),
    "alt_offset" (envelope for even n, erosion for odd n), "spiky"
    (alt_offset driven by a spiky amplitude law), "ball_radius" (model
    balls with alternating radius modulation).
    """
    law = amplitude_law(law_spec)

    if mode == "ball_radius":
        if not isinstance(domain, ModelDomain):
            raise GeneratorError("ball_radius mode needs a model domain")

        def gen_ball(n: int) -> ModelDomain:
            a = law(n)
            return domain.scaled(+a if n % 2 == 0 else -a)

        return DomainSequence(role="wobble", generator=gen_ball, limit=domain)

    if not isinstance(domain, PlanarDomain):
        raise GeneratorError(f"mode {mode!r} needs a planar domain")
    from shapely.ops import polylabel

    pole = polylabel(domain.shapely, tolerance=domain.boundary_resolution)
    inradius = float(domain.shapely.exterior.distance(pole))
    max_amp = max(law(n) for n in range(1, 200))
    if max_amp >= 0.8 * inradius:
        raise GeneratorError(
            f"amplitude {max_amp:.3f} too large for inradius {inradius:.3f}")

    if mode == "radial":
        rng = np.random.default_rng(seed)
        phase0 = float(rng.uniform(0.0, 2.0 * math.pi))

        def gen_radial(n: int) -> PlanarDomain:
            phase = phase0 + 2.0 * math.pi * GOLDEN * n
            try:
                return _radial_wobble(domain, law(n), wave, phase, n_points)
            except GeometryError as exc:
                raise GeneratorError(
                    f"radial wobble self-intersected at n={n}") from exc

        return DomainSequence(role="wobble", generator=gen_radial, limit=domain)

    if mode in ("alt_offset", "spiky"):
        def gen_alt(n: int) -> PlanarDomain:
            a = law(n)
            if n % 2 == 0:
                return envelope(domain, a)
            result = erode(domain, a)
            if not result.is_connected:
                raise GeneratorError(f"erosion disconnected/empty at n={n}")
            return result.domain

        return DomainSequence(role="wobble", generator=gen_alt, limit=domain)

    raise GeneratorError(f"unknown wobble mode {mode!r}")


def gen_hyperconvex_exterior(center: complex, radius: float, count: int,
                             resolution: float = 1e-2):
    """Exterior sequence from the sublevel sets of rho(z) = |z-c|^2/R^2 - 1.

    rho is plurisubharmonic and exhaustive on the ambient disc B(c, R*sqrt(2))
    with connected sublevel sets, the limit domain is {rho < 0} = B(c, R),
    and D^k = {rho < 1/k} is the disc of radius R*sqrt(1 + 1/k).
    """
    if radius <= 0:
        raise GeneratorError("radius must be positive")
    limit = disc_polygon(center, radius, resolution)
    eseq = DomainSequence(
        role="exterior",
        generator=lambda k: disc_polygon(center, radius * math.sqrt(1.0 + 1.0 / k),
                                         resolution),
        limit=limit,
    )
    try:
        eseq.validate(count)
    except Exception as exc:
        raise GeneratorError(
            f"hyperconvex exterior steps too tight at resolution {resolution}: "
            f"{exc}") from exc
    return eseq, limit


def non_monotonicity_witnesses(seq: DomainSequence, depth: int,
                               max_pairs: int = 8) -> list[dict]:
    """Witness points showing D_n and D_{n+1} are incomparable by inclusion.

    For each checked consecutive pair, a boundary sample of one domain
    strictly inside it but outside the other (and vice versa) is recorded;
    absence of a witness in either direction marks that step as one-sided.
    """
    out = []
    steps = range(1, min(depth, max_pairs + 1))
    for n in steps:
        a = seq.domain(n)
        b = seq.domain(n + 1)
        if isinstance(a, ModelDomain):
            ra, rb = a.radii[0], b.radii[0]
            out.append({
                "n": n,
                "a_not_in_b": ra > rb,
                "b_not_in_a": rb > ra,
            })
            continue
        margin = 0.25 * a.boundary_resolution

        def witness(src: PlanarDomain, dst: PlanarDomain):
            samples = src.boundary_samples()
            inner = samples + (src.interior_anchor() - samples) * (
                margin / np.abs(src.interior_anchor() - samples))
            keep = src.contains_points(inner) & ~dst.covers_points(inner)
            if np.any(keep):
                pt = inner[np.argmax(keep)]
                return [pt.real, pt.imag]
            return None

        wa = witness(a, b)
        wb = witness(b, a)
        out.append({
            "n": n,
            "a_not_in_b": wa,
            "b_not_in_a": wb,
        })
    return out
