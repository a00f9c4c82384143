"""Finite-rank construction schemes on an initial segment of the naturals.

Naturals stand in for countable ordinals.  A finite set of them is kept as a
strictly increasing tuple; every "uncountable" quantifier becomes a quantifier
over the finite ground set.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from .errors import (AxiomViolation, BadPrefix, NonAllowed, NotDeltaSystem, NotInScheme,
                     RootTooLarge, SizeMismatch)
from .report import Report

OrdinalSet = tuple


def ordinal_set(xs: Iterable[int]) -> OrdinalSet:
    xs = [int(x) for x in xs]
    s = tuple(sorted(xs))
    if len(set(s)) != len(s):
        raise ValueError(f"duplicate elements in {xs}")
    return s


def is_initial_fragment(f: Sequence[int], e: Sequence[int]) -> bool:
    """``f`` is ``e`` cut below some ordinal (``e`` end-extends ``f``)."""
    return tuple(e[: len(f)]) == tuple(f)


def precedes(f: Sequence[int], e: Sequence[int]) -> bool:
    """``f < e``: every element of ``f`` is below every element of ``e``."""
    return not f or not e or max(f) < min(e)


@dataclass(frozen=True)
class OrderIso:
    source: OrdinalSet
    target: OrdinalSet

    @property
    def pairs(self) -> tuple:
        return tuple(zip(self.source, self.target))

    @cached_property
    def mapping(self) -> dict:
        return dict(zip(self.source, self.target))

    def __call__(self, x: int) -> int:
        return self.mapping[x]

    def image(self, xs: Iterable[int]) -> OrdinalSet:
        return ordinal_set(self.mapping[x] for x in xs)

    def inverse(self) -> "OrderIso":
        return OrderIso(self.target, self.source)

    def is_identity(self) -> bool:
        return self.source == self.target


def order_iso(e: Iterable[int], f: Iterable[int]) -> OrderIso:
    """The order preserving bijection ``phi_{F,E}: E -> F``."""
    e, f = ordinal_set(e), ordinal_set(f)
    if len(e) != len(f):
        raise SizeMismatch(f"|E|={len(e)} but |F|={len(f)}")
    return OrderIso(e, f)


@dataclass(frozen=True)
class DeltaSystem:
    members: tuple
    root: OrdinalSet
    increasing: bool

    def __len__(self):
        return len(self.members)


def delta_system(members: Sequence[Iterable[int]]) -> DeltaSystem:
    members = tuple(ordinal_set(m) for m in members)
    if len(members) < 2:
        raise NotDeltaSystem("a Delta-system needs at least two members")
    root = set(members[0])
    for m in members[1:]:
        root &= set(m)
    for a, b in itertools.combinations(members, 2):
        if set(a) & set(b) != root:
            raise NotDeltaSystem(f"{a} and {b} meet in {sorted(set(a) & set(b))}, root is {sorted(root)}")
    root = ordinal_set(root)
    tails = [tuple(x for x in m if x not in root) for m in members]
    increasing = all(precedes(a, b) for a, b in zip(tails, tails[1:]))
    return DeltaSystem(members, root, increasing)


@dataclass(frozen=True)
class SchemeParams:
    n_seq: tuple
    r_seq: tuple
    m_seq: tuple
    K: int
    coverage: dict = field(default_factory=dict, compare=False, hash=False)

    def to_json(self) -> dict:
        return {"n": list(self.n_seq), "r": list(self.r_seq), "m": list(self.m_seq), "K": self.K}


def validate_params(n_seq: Sequence[int], r_seq: Sequence[int], K: int) -> SchemeParams:
    """Check allowed parameters up to rank ``K`` and compute ``m_k``.

    The requirement that every natural recurs infinitely often in ``(r_k)`` has no
    finite meaning; instead ``coverage`` records the first rank at which each
    value of ``r`` occurs below ``K``.
    """
    if K < 0:
        raise ValueError("K must be nonnegative")
    n_seq = tuple(int(x) for x in n_seq[: K + 1])
    r_seq = tuple(int(x) for x in r_seq[: K + 1])
    if len(n_seq) < K + 1 or len(r_seq) < K + 1:
        raise ValueError(f"sequences must be defined up to index K={K}")
    if n_seq[0] != 0 or r_seq[0] != 0 or (K >= 1 and r_seq[1] != 0):
        raise BadPrefix("need r_0 = r_1 = n_0 = 0")
    for k in range(1, K + 1):
        if n_seq[k] < 2:
            raise NonAllowed(f"n_{k} = {n_seq[k]} < 2")
    m = [1]
    for k in range(K):
        r = r_seq[k + 1]
        if r >= m[k]:
            raise RootTooLarge(f"r_{k + 1} = {r} >= m_{k} = {m[k]}")
        m.append(r + n_seq[k + 1] * (m[k] - r))
    coverage = {}
    for k, r in enumerate(r_seq):
        coverage.setdefault(r, k)
    return SchemeParams(n_seq, r_seq, tuple(m), K, coverage)


def default_partition(K: int) -> tuple:
    """Class label per decomposition rank ``k < K`` cycling type 1, vector class 3, type 2."""
    return tuple((1, 3, 2)[k % 3] for k in range(K))


@dataclass(frozen=True)
class Scheme:
    params: SchemeParams
    levels: tuple          # levels[k] is the sorted tuple of members of F_k
    partition: tuple       # partition[k] governs the members of F_{k+1}
    ground: OrdinalSet

    @property
    def K(self) -> int:
        return self.params.K

    @cached_property
    def rank(self) -> dict:
        out = {}
        for k, lev in enumerate(self.levels):
            for f in lev:
                out.setdefault(f, k)
        return out

    @cached_property
    def members(self) -> tuple:
        return tuple(f for lev in self.levels for f in lev)

    def rank_of(self, f) -> int:
        f = ordinal_set(f)
        if f not in self.rank:
            raise NotInScheme(f"{f} is not a member of the scheme")
        return self.rank[f]

    def below(self, f) -> list:
        """``F|F``: members strictly contained in ``f``."""
        fs = set(f)
        return [e for e in self.members if len(e) < len(fs) and set(e) <= fs]

    def maximal_below(self, f) -> list:
        below = self.below(f)
        sets = [set(e) for e in below]
        out = []
        for e, se in zip(below, sets):
            if not any(se < other for other in sets):
                out.append(e)
        return sorted(set(out))

    def class_of(self, k: int):
        return self.partition[k]

    def to_json(self) -> dict:
        return {
            "params": self.params.to_json(),
            "partition": list(self.partition),
            "levels": [[list(f) for f in lev] for lev in self.levels],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def _canonical_levels(params: SchemeParams) -> list:
    K, m, r = params.K, params.m_seq, params.r_seq
    levels = [set() for _ in range(K + 1)]
    levels[K].add(tuple(range(m[K])))
    for k in range(K - 1, -1, -1):
        root_size, block = r[k + 1], m[k] - r[k + 1]
        for f in levels[k + 1]:
            root, rest = f[:root_size], f[root_size:]
            for i in range(params.n_seq[k + 1]):
                levels[k].add(root + rest[i * block:(i + 1) * block])
    return [tuple(sorted(lev)) for lev in levels]


def _normalize_partition(partition, K) -> tuple:
    if partition is None:
        return default_partition(K)
    partition = tuple(int(c) for c in partition)
    if not partition and K:
        return default_partition(K)
    if len(partition) < K:
        partition = tuple(partition[k % len(partition)] for k in range(K))
    return partition[:K]


def build_scheme(params: SchemeParams, partition: Sequence[int] | None = None) -> Scheme:
    """Canonical scheme on ``[0, m_K)``: interval blocks under nested roots.

    ``[0, m_K)`` is the single top member; each member of rank ``k+1`` splits into
    its first ``r_{k+1}`` elements (the root) and ``n_{k+1}`` consecutive blocks,
    each block joined with the root giving a member of rank ``k``.  The result is
    checked by brute force and rejected on the first violation.
    """
    levels = _canonical_levels(params)
    scheme = Scheme(params, tuple(levels), _normalize_partition(partition, params.K),
                    tuple(range(params.m_seq[params.K])))
    report = verify_scheme_axioms(scheme)
    if not report.passed:
        bad = report.violations[0]
        raise AxiomViolation(bad.indices, bad.detail, f"{bad.kind}: {bad.detail}")
    return scheme


def scheme_from_levels(params: SchemeParams, levels, partition=None, ground=None) -> Scheme:
    """Wrap hand-made levels (no checking), e.g. for mutation tests."""
    levels = tuple(tuple(sorted(ordinal_set(f) for f in lev)) for lev in levels)
    if ground is None:
        ground = ordinal_set(set().union(*[set(f) for lev in levels for f in lev]))
    return Scheme(params, levels, _normalize_partition(partition, params.K), tuple(ground))


def _decompose(scheme: Scheme, f) -> tuple:
    parts = scheme.maximal_below(f)
    parts.sort(key=lambda e: tuple(x for x in e))
    return parts


def verify_scheme_axioms(scheme: Scheme) -> Report:
    """Brute-force check of cardinalities, coherence and decomposition."""
    p = scheme.params
    rep = Report("scheme-axioms", inputs=scheme.to_json())
    ground = set(scheme.ground)
    if set(scheme.levels[0]) != {(x,) for x in ground}:
        rep.violation("singletons", 0, sorted(set(scheme.levels[0]) ^ {(x,) for x in ground}))
    for k, lev in enumerate(scheme.levels):
        for f in lev:
            if len(f) != p.m_seq[k]:
                rep.violation("cardinality", k, {"set": f, "size": len(f), "expected": p.m_seq[k]})
            if not set(f) <= ground:
                rep.violation("ground", k, {"set": f})
    for k in range(1, len(scheme.levels)):
        lev = scheme.levels[k]
        for e, f in itertools.combinations(lev, 2):
            inter = ordinal_set(set(e) & set(f))
            if not (is_initial_fragment(inter, e) and is_initial_fragment(inter, f)):
                rep.violation("coherence-initial", k, {"E": e, "F": f, "meet": inter})
                continue
            if len(e) != len(f):
                continue
            phi = order_iso(e, f)
            image = {phi.image(g) for g in scheme.below(e)}
            if image != set(scheme.below(f)):
                rep.violation("coherence-phi", k, {"E": e, "F": f})
    for k in range(len(scheme.levels) - 1):
        for f in scheme.levels[k + 1]:
            parts = _decompose(scheme, f)
            where = {"F": f}
            if any(scheme.rank.get(g) != k for g in parts):
                rep.violation("decomposition-rank", k + 1, where)
            if len(parts) != p.n_seq[k + 1]:
                rep.violation("decomposition-length", k + 1, {**where, "length": len(parts)})
            if set().union(*map(set, parts)) != set(f):
                rep.violation("decomposition-union", k + 1, where)
            try:
                ds = delta_system(parts)
            except Exception as exc:
                rep.violation("decomposition-delta", k + 1, {**where, "error": str(exc)})
                continue
            if not ds.increasing:
                rep.violation("decomposition-increasing", k + 1, where)
            if len(ds.root) != p.r_seq[k + 1]:
                rep.violation("decomposition-root", k + 1, {**where, "root": ds.root})
    rep.add("checked", None, {"levels": [len(lev) for lev in scheme.levels]})
    return rep


def canonical_decomposition(scheme: Scheme, f) -> DeltaSystem:
    """Maximal members of ``F|F`` as an increasing Delta-system, in block order."""
    f = ordinal_set(f)
    k = scheme.rank_of(f)
    if k == 0:
        raise NotInScheme(f"{f} has rank 0 and no decomposition")
    return delta_system(_decompose(scheme, f))


@dataclass(frozen=True)
class CaptureResult:
    kind: str  # "none" | "partial" | "full"
    n: int = 0

    def __bool__(self):
        return self.kind != "none"


def _as_system(system) -> DeltaSystem:
    if isinstance(system, DeltaSystem):
        return system
    members = [ordinal_set(m) for m in system]
    if len(members) == 1:
        return DeltaSystem(tuple(members), (), True)
    return delta_system(members)


def captures(scheme: Scheme, f, system) -> CaptureResult:
    """Does ``f`` capture ``system`` through its canonical decomposition?"""
    system = _as_system(system)
    dec = canonical_decomposition(scheme, f)
    n = len(system.members)
    if n > len(dec.members):
        return CaptureResult("none")
    delta = set(dec.root)
    s = set(system.root)
    if not s <= delta:
        return CaptureResult("none")
    for i, si in enumerate(system.members):
        if not (set(si) - s) <= set(dec.members[i]) - delta:
            return CaptureResult("none")
    for i, j in itertools.combinations(range(n), 2):
        phi = order_iso(dec.members[i], dec.members[j])
        if not set(system.members[i]) <= set(dec.members[i]):
            return CaptureResult("none")
        if phi.image(system.members[i]) != system.members[j]:
            return CaptureResult("none")
    return CaptureResult("full" if n == len(dec.members) else "partial", n)


def _best_subsystem(scheme, f, system: DeltaSystem):
    dec = canonical_decomposition(scheme, f)
    members = system.members
    best: list = []

    def extend(chosen: list, start: int):
        nonlocal best
        if len(chosen) > len(best):
            best = list(chosen)
        if len(chosen) == len(dec.members):
            return
        for idx in range(start, len(members)):
            cand = chosen + [idx]
            sub = DeltaSystem(tuple(members[i] for i in cand), system.root, True)
            if captures(scheme, f, sub):
                extend(cand, idx + 1)
                if len(best) == len(dec.members):
                    return

    extend([], 0)
    return best, len(dec.members)


def find_capture(scheme: Scheme, system, class_label=None, require_full: bool = False,
                 min_length: int = 1):
    """First ``(F, subsystem, result)`` in (rank, lexicographic) order, or ``None``.

    Ranks are the decomposition ranks ``k`` (``F`` in ``F_{k+1}``) whose partition
    class equals ``class_label`` (all ranks when ``None``).
    """
    system = _as_system(system)
    for k in range(scheme.K):
        if class_label is not None and scheme.partition[k] != class_label:
            continue
        for f in scheme.levels[k + 1]:
            idxs, width = _best_subsystem(scheme, f, system)
            if len(idxs) < max(min_length, 1) or (require_full and len(idxs) != width):
                continue
            sub = DeltaSystem(tuple(system.members[i] for i in idxs), system.root, True)
            return f, sub, captures(scheme, f, sub)
    return None


def scheme_from_json(data) -> Scheme:
    if isinstance(data, str):
        data = json.loads(data)
    pr = data["params"]
    params = validate_params(pr["n"], pr["r"], int(pr["K"]))
    if "m" in pr and list(pr["m"]) != list(params.m_seq):
        raise ValueError(f"stored m {pr['m']} disagrees with recursion {list(params.m_seq)}")
    return scheme_from_levels(params, data["levels"], data.get("partition"),
                              tuple(range(params.m_seq[params.K])))
