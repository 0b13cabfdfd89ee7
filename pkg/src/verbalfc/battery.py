"""Named batteries of (group, word, m) instances and the suite runner."""

from __future__ import annotations

import zlib
from dataclasses import dataclass
from typing import Callable, Iterator

from .constructions import build, cyclic
from .group import DEFAULT_MAX_ORDER
from .verbal import DEFAULT_MAX_TUPLES
from .verify import (
    Instance,
    VerificationReport,
    check_central_exponent,
    check_commutator_identity,
    check_conjugacy_bound,
    check_group_axioms,
    check_decomposition,
    check_order_bound,
    check_sorted_conjugators,
    check_uniform_bounds,
    wreath_orbit_growth,
)
from .words import parse_word


@dataclass(frozen=True)
class Battery:
    groups: tuple[str, ...]
    words: tuple[str, ...]
    ms: tuple[int, ...]
    identity_ms: tuple[int, ...] = (0, 1, 2, 3, 4)
    wreath_ts: tuple[int, ...] = (1, 3, 5, 7, 9)
    wreath_ms: tuple[int, ...] = (1, 2)
    decomposition_samples: int = 200


BATTERIES = {
    "default": Battery(
        groups=("C6", "S3", "D4", "Q8", "D6", "A4", "S4", "wr2(C3)", "wr2(C5)", "C3xS3"),
        words=("x1", "x1^2", "[x1,x2]", "[x1^2,x2^2]", "[x1,x2,x3]"),
        ms=(0, 1, 2, 3),
    ),
    "small": Battery(
        groups=("C6", "S3", "D4", "Q8"),
        words=("x1", "[x1,x2]"),
        ms=(0, 1, 2),
        wreath_ts=(1, 3, 5),
        decomposition_samples=50,
    ),
}

# Instance checks in suite order; the decomposition check is added for m >= 1.
INSTANCE_CHECKS: dict[str, Callable[..., VerificationReport]] = {
    "conjugacy_bound": check_conjugacy_bound,
    "central_exponent": check_central_exponent,
    "sorted_conjugators": check_sorted_conjugators,
    "uniform_bounds": check_uniform_bounds,
    "order_bound": check_order_bound,
}


def instance_seed(*parts) -> int:
    return zlib.crc32("|".join(map(str, parts)).encode())


def run_instance(G, w, m: int, checks=None, samples: int = 200, max_tuples: int = DEFAULT_MAX_TUPLES) -> Iterator[VerificationReport]:
    data = Instance(G, w, m, max_tuples=max_tuples)
    names = list(checks) if checks is not None else ["decomposition", *INSTANCE_CHECKS]
    for name in names:
        if name == "decomposition":
            if m >= 1:
                yield check_decomposition(G, w, m, samples=samples, seed=instance_seed(G.name, w, m))
        else:
            yield INSTANCE_CHECKS[name](G, w, m, data=data)


def run_suite(
    battery: str | Battery = "default",
    max_tuples: int = DEFAULT_MAX_TUPLES,
    max_order: int = DEFAULT_MAX_ORDER,
) -> Iterator[VerificationReport]:
    """Yield every report of a battery in a fixed order."""
    bat = BATTERIES[battery] if isinstance(battery, str) else battery
    words = [parse_word(t) for t in bat.words]
    for spec in bat.groups:
        G = build(spec, max_order=max_order)
        yield check_group_axioms(G)
        if G.order <= 64:
            yield check_commutator_identity(G, bat.identity_ms)
        for w in words:
            for m in bat.ms:
                yield from run_instance(G, w, m, samples=bat.decomposition_samples, max_tuples=max_tuples)
    for t in bat.wreath_ts:
        for m in bat.wreath_ms:
            yield wreath_orbit_growth(cyclic(t), m)
