"""Instance constructors, synthetic profile generators, and profile file I/O.

File grammar (the only on-disk format):

* ``#`` starts a comment running to end of line; blank lines are ignored;
* the first significant line is the header ``n m``;
* exactly ``n`` significant lines follow, each with ``m`` space-separated
  1-based alternative indices, most preferred first;
* optional trailing blocks ``costs: c1 ... cm``, ``caps: x1 ... xm``,
  ``budget: B`` and ``weights: w1 ... wn`` describe general instances;
* files are written with LF line endings; the parser also accepts CRLF.

Generators live here, apart from the solvers, so experiment profiles and
solver sampling never share an RNG stream.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from .core import Instance, Profile
from .rng import SplitMix64, shuffled


class ParseError(ValueError):
    """A profile document violated the grammar; ``line`` is 1-based."""

    def __init__(self, line: int, message: str):
        self.line = line
        super().__init__(f"line {line}: {message}")


@dataclass(frozen=True)
class ParsedDocument:
    """Parse result: the profile plus any general-instance blocks present."""

    profile: Profile
    costs: Optional[Tuple[int, ...]] = None
    caps: Optional[Tuple[int, ...]] = None
    budget: Optional[int] = None
    weights: Optional[Tuple[int, ...]] = None


def make_monroe(profile: Profile, k: int) -> Instance:
    """Monroe restriction: unit costs, budget ``k``, capacities ``ceil(n/k)``."""
    if not 1 <= k <= profile.m:
        raise ValueError(f"committee size must lie in 1..{profile.m}, got {k}")
    n = profile.n
    cap = math.ceil(n / k)
    return Instance(
        profile=profile,
        weights=(1,) * n,
        costs=(1,) * profile.m,
        capacities=(cap,) * profile.m,
        budget=k,
        system_tag="monroe",
        committee_size=k,
    )


def make_cc(profile: Profile, k: int) -> Instance:
    """Chamberlin-Courant restriction: unit costs, budget ``k``, capacities ``n``."""
    if not 1 <= k <= profile.m:
        raise ValueError(f"committee size must lie in 1..{profile.m}, got {k}")
    n = profile.n
    return Instance(
        profile=profile,
        weights=(1,) * n,
        costs=(1,) * profile.m,
        capacities=(n,) * profile.m,
        budget=k,
        system_tag="cc",
        committee_size=k,
    )


def gen_impartial_culture(n: int, m: int, seed: int) -> Profile:
    """Profile with each order drawn independently and uniformly at random."""
    if n < 1 or m < 1:
        raise ValueError("need n >= 1 and m >= 1")
    rng = SplitMix64(seed)
    orders = tuple(
        tuple(shuffled(range(1, m + 1), rng)) for _ in range(n)
    )
    return Profile(n=n, m=m, orders=orders)


def gen_identical(n: int, m: int) -> Profile:
    """Profile where every agent ranks the alternatives 1, 2, ..., m."""
    if n < 1 or m < 1:
        raise ValueError("need n >= 1 and m >= 1")
    order = tuple(range(1, m + 1))
    return Profile(n=n, m=m, orders=(order,) * n)


def _significant_lines(document: str) -> List[Tuple[int, str]]:
    out = []
    for lineno, raw in enumerate(document.split("\n"), start=1):
        line = raw.rstrip("\r")
        hash_at = line.find("#")
        if hash_at >= 0:
            line = line[:hash_at]
        line = line.strip()
        if line:
            out.append((lineno, line))
    return out


def _parse_ints(lineno: int, tokens: Sequence[str], what: str) -> List[int]:
    values = []
    for tok in tokens:
        try:
            values.append(int(tok))
        except ValueError:
            raise ParseError(lineno, f"{what}: {tok!r} is not an integer") from None
    return values


def parse_instance(document: str) -> ParsedDocument:
    """Parse a profile document; raises :class:`ParseError` naming the line."""
    lines = _significant_lines(document)
    if not lines:
        raise ParseError(1, "empty document, expected header 'n m'")
    lineno, header = lines[0]
    tokens = header.split()
    if len(tokens) != 2:
        raise ParseError(lineno, f"malformed header {header!r}, expected 'n m'")
    n, m = _parse_ints(lineno, tokens, "header")
    if n < 1 or m < 1:
        raise ParseError(lineno, f"header needs n >= 1 and m >= 1, got {n} {m}")
    if len(lines) < 1 + n:
        raise ParseError(
            lines[-1][0], f"expected {n} order lines, found {len(lines) - 1}"
        )
    orders = []
    for lineno, line in lines[1 : 1 + n]:
        tokens = line.split()
        if len(tokens) != m:
            raise ParseError(
                lineno, f"order line has {len(tokens)} entries, expected {m}"
            )
        values = _parse_ints(lineno, tokens, "order line")
        seen = set()
        for v in values:
            if not 1 <= v <= m:
                raise ParseError(
                    lineno, f"alternative index {v} out of range 1..{m}"
                )
            if v in seen:
                raise ParseError(lineno, f"duplicate alternative index {v}")
            seen.add(v)
        orders.append(tuple(values))
    profile = Profile(n=n, m=m, orders=tuple(orders))

    blocks = {}
    expected = {"costs": m, "caps": m, "budget": 1, "weights": n}
    for lineno, line in lines[1 + n :]:
        key, sep, rest = line.partition(":")
        key = key.strip()
        if not sep or key not in expected:
            raise ParseError(lineno, f"unknown trailing block {line!r}")
        if key in blocks:
            raise ParseError(lineno, f"duplicate block {key!r}")
        values = _parse_ints(lineno, rest.split(), key)
        if len(values) != expected[key]:
            raise ParseError(
                lineno,
                f"block {key!r} has {len(values)} entries, expected {expected[key]}",
            )
        if any(v < 1 for v in values):
            raise ParseError(lineno, f"block {key!r} entries must be positive")
        blocks[key] = tuple(values)

    return ParsedDocument(
        profile=profile,
        costs=blocks.get("costs"),
        caps=blocks.get("caps"),
        budget=blocks["budget"][0] if "budget" in blocks else None,
        weights=blocks.get("weights"),
    )


def write_instance(
    profile: Profile,
    costs: Optional[Sequence[int]] = None,
    caps: Optional[Sequence[int]] = None,
    budget: Optional[int] = None,
    weights: Optional[Sequence[int]] = None,
) -> str:
    """Render a profile (plus optional general blocks) in the file grammar."""
    out = [f"{profile.n} {profile.m}"]
    for order in profile.orders:
        out.append(" ".join(str(a) for a in order))
    if costs is not None:
        out.append("costs: " + " ".join(str(c) for c in costs))
    if caps is not None:
        out.append("caps: " + " ".join(str(c) for c in caps))
    if budget is not None:
        out.append(f"budget: {budget}")
    if weights is not None:
        out.append("weights: " + " ".join(str(w) for w in weights))
    return "\n".join(out) + "\n"


def general_instance(parsed: ParsedDocument) -> Instance:
    """Build a general instance from a document carrying all trailing blocks."""
    profile = parsed.profile
    if parsed.costs is None or parsed.caps is None or parsed.budget is None:
        raise ValueError("general instance needs costs, caps and budget blocks")
    weights = parsed.weights or (1,) * profile.n
    return Instance(
        profile=profile,
        weights=tuple(weights),
        costs=parsed.costs,
        capacities=parsed.caps,
        budget=parsed.budget,
        system_tag="general",
    )
