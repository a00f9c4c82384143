"""The family ``G = {p_F}`` indexed by a construction scheme, and its limit windows.

Rank-0 members get trivial width-one conditions.  A member ``F`` of rank
``k + 1`` is the amalgamation of the conditions of its canonical
decomposition ``G_1, G_2, G_3``, of the type named by the partition class of
``k``.  Class ``m >= 3`` uses the ``m``-th rational pair and falls back to type
1 while the current width is below ``m``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .algebra import SubalgebraBasis, star_closure
from .blockop import ColumnShape, Rect
from .errors import AxiomViolation, BadIndex, Inconsistent, NotCovered, ParamError
from .poset import (Condition, amalgamate_type1, amalgamate_type2, amalgamate_type3,
                    compose, convenient_position, dominate_column, extension_report,
                    has_f_witness, trivial_condition, validate_condition)
from .poset.condition import DEFAULT_WIDTH_CAP
from .poset.recipe import Identity
from .report import Report
from .scheme import Scheme, canonical_decomposition, order_iso, precedes

# ---------------------------------------------------------------------------
# rational orthogonal pairs


def _gauss_key(z):
    re, im = z
    return (z == (0, 0), abs(re) + abs(im), -re, -im)


@lru_cache(maxsize=None)
def _gaussians(weight: int) -> tuple:
    """Gaussian integers ``a + bi`` with ``|a| + |b| = weight``."""
    if weight == 0:
        return ((0, 0),)
    out = set()
    for a in range(-weight, weight + 1):
        b = weight - abs(a)
        out.add((a, b))
        out.add((a, -b))
    return tuple(sorted(out, key=_gauss_key))


def _vectors(dim: int, weight: int):
    """All vectors in ``Z[i]^dim`` of total weight exactly ``weight``."""
    if dim == 0:
        if weight == 0:
            yield ()
        return
    for w0 in range(weight + 1):
        for z in _gaussians(w0):
            for rest in _vectors(dim - 1, weight - w0):
                yield (z,) + rest


def _inner_zero(v, w) -> bool:
    # sum v_k * conj(w_k) in exact integer arithmetic
    re = sum(a * c + b * d for (a, b), (c, d) in zip(v, w))
    im = sum(b * c - a * d for (a, b), (c, d) in zip(v, w))
    return re == 0 and im == 0


def _pairs_of_height(height: int) -> list:
    out = []
    for dim in range(2, height + 1):
        block = []
        for hv in range(1, height):
            for v in _vectors(dim, hv):
                for w in _vectors(dim, height - hv):
                    if v[-1] == (0, 0) and w[-1] == (0, 0):
                        continue
                    if _inner_zero(v, w):
                        block.append((v, w))
        block.sort(key=lambda vw: [_gauss_key(z) for z in vw[0] + vw[1]])
        out.extend((dim, vw) for vw in block)
    return out


_ENUM: list = []
_ENUM_HEIGHT = [1]


def rational_pair(m: int) -> tuple:
    """The ``m``-th pair as exact Gaussian-integer vectors ``((re, im), ...)``.

    Order: total weight ``sum |re| + |im|`` over both vectors, then the minimal
    dimension, then a fixed lexicographic key.  Index 3 is the first entry.
    """
    if m < 3:
        raise BadIndex(f"pairs are indexed from 3, got {m}")
    while len(_ENUM) <= m - 3:
        _ENUM_HEIGHT[0] += 1
        _ENUM.extend(_pairs_of_height(_ENUM_HEIGHT[0]))
    dim, (v, w) = _ENUM[m - 3]
    assert dim <= m
    return v, w


def enumerate_rational_pairs(m: int) -> tuple:
    """Unit-normalized ``(v^m, w^m)`` with exactly orthogonal rational data."""
    v, w = rational_pair(m)
    out = []
    for vec in (v, w):
        arr = np.array([complex(a, b) for a, b in vec])
        out.append(arr / np.linalg.norm(arr))
    return tuple(out)


# ---------------------------------------------------------------------------
# the family


@dataclass
class FamilyBuild:
    scheme: Scheme
    partition: tuple
    conditions: dict                    # F -> Condition
    recipes: dict                       # (F, G) -> recipe witnessing p_F <= p_G for G in dec(F)
    l_seq: tuple
    kinds: dict = field(default_factory=dict)      # k -> "type1" | "type2" | "type3"
    vectors: dict = field(default_factory=dict)    # k -> (m, v, w) for type 3 ranks
    report: Report | None = None

    @property
    def top(self):
        return self.scheme.levels[self.scheme.K][-1]

    def condition(self, f) -> Condition:
        return self.conditions[tuple(f)]

    def embedding(self, f, g):
        """Recipe for ``p_F <= p_G`` composed along the decomposition chain from ``G`` up to ``F``."""
        f, g = tuple(f), tuple(g)
        if f == g:
            return Identity(self.conditions[f].shape)
        if not set(g) < set(f):
            raise ValueError(f"{g} is not below {f}")
        for h in canonical_decomposition(self.scheme, f).members:
            if set(g) <= set(h):
                return compose(self.embedding(h, g), self.recipes[(f, h)])
        raise ValueError(f"{g} is not below any block of {f}")

    def to_json(self) -> dict:
        from .io import condition_to_json, recipe_to_json
        from .report import digest
        sj = self.scheme.to_json()
        return {
            "scheme-ref": digest(sj),
            "scheme": sj,
            "assignment": list(self.partition),
            "l_seq": list(self.l_seq),
            "kinds": {str(k): v for k, v in sorted(self.kinds.items())},
            "vectors": {str(k): {"m": m, "v": [list(map(float, (z.real, z.imag))) for z in v],
                                 "w": [list(map(float, (z.real, z.imag))) for z in w]}
                        for k, (m, v, w) in sorted(self.vectors.items())},
            "conditions": [{"F": list(f), "condition": condition_to_json(p)}
                           for f, p in sorted(self.conditions.items(), key=lambda t: (len(t[0]), t[0]))],
            "recipes": [{"F": list(f), "G": list(g), "recipe": recipe_to_json(r)}
                        for (f, g), r in sorted(self.recipes.items())],
        }


def _same_rank_pairs(level):
    for f, g in itertools.permutations(level, 2):
        fd = tuple(x for x in f if x not in g)
        gd = tuple(x for x in g if x not in f)
        if fd and gd and precedes(fd, gd):
            yield f, g


def check_rank_invariants(family: FamilyBuild, k: int) -> Report:
    """(*) convenient position along ``phi``, (**) supports, (***) uniform width ``l_k``."""
    rep = Report("rank-invariants", inputs={"rank": k})
    level = family.scheme.levels[k]
    lk = family.l_seq[k]
    for f in level:
        p = family.conditions[f]
        if tuple(p.support) != tuple(f):
            rep.violation("support", list(f), {"support": list(p.support)})
        bad = {c: w for c, w in p.widths.items() if w != lk}
        if bad:
            rep.violation("uniform-width", list(f), {"l_k": lk, "widths": bad})
        if not validate_condition(p).passed:
            rep.violation("condition", list(f))
    pairs = 0
    for f, g in _same_rank_pairs(level):
        pairs += 1
        sigma = convenient_position(family.conditions[f], family.conditions[g])
        if sigma is None or sigma.pairs != order_iso(f, g).pairs:
            rep.violation("convenient", [list(f), list(g)])
    rep.add("pairs", k, pairs)
    return rep


def build_family(scheme: Scheme, partition=None, increment: int = 2,
                 width_cap: int | None = DEFAULT_WIDTH_CAP, check: bool = True) -> FamilyBuild:
    """Construct ``p_F`` for every member, rank by rank."""
    params = scheme.params
    if any(n != 3 for n in params.n_seq[1:]):
        raise ParamError(f"the family needs n_k = 3 for k >= 1, got {params.n_seq}")
    partition = tuple(scheme.partition if partition is None else partition)
    if len(partition) < scheme.K:
        raise ParamError(f"partition has {len(partition)} classes, need {scheme.K}")
    conds = {f: trivial_condition(f[0]) for f in scheme.levels[0]}
    recipes, kinds, vectors = {}, {}, {}
    l_seq = [1]
    fam = FamilyBuild(scheme, partition, conds, recipes, (1,), kinds, vectors, Report("family"))
    if check:
        _absorb(fam.report, check_rank_invariants(fam, 0), 0)
    for k in range(scheme.K):
        cls = partition[k]
        lk = l_seq[k]
        kind = "type1" if cls == 1 or (cls >= 3 and lk < cls) else ("type2" if cls == 2 else "type3")
        if kind == "type3":
            _, v, w = vectors.setdefault(k, (cls, *enumerate_rational_pairs(cls)))
        kinds[k] = kind
        widths = set()
        for f in scheme.levels[k + 1]:
            dec = canonical_decomposition(scheme, f).members
            ps = [conds[g] for g in dec]
            if kind == "type1":
                r, recs = amalgamate_type1(*ps, increment=increment, width_cap=width_cap)
            elif kind == "type2":
                r, recs = amalgamate_type2(*ps)
            else:
                r, recs = amalgamate_type3(*ps, v, w)
            conds[f] = r
            for g, rec in zip(dec, recs):
                recipes[(f, g)] = rec
            widths.update(r.widths.values())
        if len(widths) != 1:
            raise AxiomViolation(k + 1, sorted(widths), "widths are not uniform at this rank")
        l_seq.append(widths.pop())
        fam.l_seq = tuple(l_seq)
        if check:
            sub = check_rank_invariants(fam, k + 1)
            _absorb(fam.report, sub, k + 1)
            if not sub.passed:
                bad = sub.violations[0]
                raise AxiomViolation(k + 1, bad.indices, f"{bad.kind} fails")
    if check:
        ok = all(b > a for a, b, kd in zip(l_seq, l_seq[1:], [kinds[k] for k in range(scheme.K)])
                 if kd == "type1") and all(b == a for a, b, kd in
                                           zip(l_seq, l_seq[1:], [kinds[k] for k in range(scheme.K)])
                                           if kd != "type1")
        fam.report.add("l_seq", None, list(l_seq), None, ok)
    return fam


def _absorb(rep: Report, sub: Report, k: int):
    for f in sub.findings:
        rep.findings.append(type(f)(f"rank{k}:{f.kind}", f.indices, f.value, f.tolerance, f.passed, f.detail))


def check_f_richness(family: FamilyBuild) -> Report:
    """Every type-1 step records ``F_{X_{p_G}, alpha}`` witnesses for all blocks ``G``."""
    rep = Report("f-rich")
    sch = family.scheme
    for k, kind in sorted(family.kinds.items()):
        if kind != "type1":
            continue
        for f in sch.levels[k + 1]:
            p = family.conditions[f]
            for g in canonical_decomposition(sch, f).members:
                x = family.conditions[g].X
                missing = [a for a in g if not has_f_witness(p, x, a)]
                if missing:
                    rep.violation("witness", [list(f), list(g)], {"alpha": missing})
        rep.add("rank", k, kind)
    return rep


def check_directed(family: FamilyBuild, unit_limit: int = 48, tol: float = 1e-9) -> Report:
    """``p_F <= p_{F'}`` for every nested pair, through composed recipes."""
    rep = Report("directed", inputs={"l_seq": list(family.l_seq)})
    members = family.scheme.members
    for f in members:
        if len(f) == 1:
            continue
        for g in members:
            if len(g) >= len(f) or not set(g) <= set(f):
                continue
            rec = family.embedding(f, g)
            sub = extension_report(family.conditions[f], family.conditions[g], rec, tol, unit_limit)
            worst = max((x.value for x in sub.findings if isinstance(x.value, float)), default=0.0)
            rep.add("extension", [list(f), list(g)], worst, tol, sub.passed)
    return rep


# ---------------------------------------------------------------------------
# windows of the limit


@dataclass
class Window:
    columns: tuple
    widths: dict
    shape: ColumnShape        # ambient shape of the covering top condition
    rect: Rect
    generators: dict          # (xi, m, n) -> BlockOperator on ``shape``
    provenance: dict          # (xi, m, n) -> tuple of members whose conditions agree on it

    def algebra(self) -> SubalgebraBasis:
        return star_closure(list(self.generators.values()), self.shape)


def materialize_window(family: FamilyBuild, columns=None, width=None) -> Window:
    """Read ``A^G_{xi,m,n}`` off the top condition and cross-check every covering ``p_F``."""
    top = family.top
    pt = family.conditions[top]
    columns = tuple(sorted(pt.support if columns is None else columns))
    missing = [c for c in columns if c not in pt.shape]
    if missing:
        raise NotCovered(f"columns {missing} are outside every condition")
    widths = {}
    for c in columns:
        w = pt.width(c) if width is None else int(width)
        if w > pt.width(c):
            raise NotCovered(f"column {c} has width {pt.width(c)} < {w}")
        widths[c] = w
    rect = Rect({c: range(widths[c]) for c in columns})
    gens, prov = {}, {}
    for (xi, m, n), a in pt.generators.items():
        if xi in widths and m < widths[xi] and n < widths[xi]:
            gens[(xi, m, n)] = a
            prov[(xi, m, n)] = [top]
    for f, p in family.conditions.items():
        if f == top:
            continue
        for key, b in p.generators.items():
            if key not in gens:
                continue
            a = gens[key]
            for c, w in p.widths.items():
                # i_{G,p}(A^p)|X_p = A^p: compare the columns of X_p
                ours = a.block(c)[:, :w]
                theirs = np.zeros((pt.width(c), w), dtype=complex)
                theirs[:w, :] = b.block(c)
                if not np.array_equal(ours, theirs):
                    raise Inconsistent((top, f), {"generator": key, "column": c})
            # columns outside X_p: nothing to compare
            prov[key].append(f)
    return Window(columns, widths, pt.shape, rect, gens, {k: tuple(v) for k, v in prov.items()})


def _kernel_dim(basis: SubalgebraBasis, alpha: int) -> int:
    """Dimension of ``{A : A|[alpha, inf) = 0}`` inside the span of ``basis``."""
    if basis.dim == 0:
        return 0
    cols = []
    off = 0
    for c, w in basis.shape.widths.items():
        if c >= alpha:
            cols.extend(range(off, off + w * w))
        off += w * w
    if not cols:
        return basis.dim
    m = basis.basis[:, cols]
    s = np.linalg.svd(m, compute_uv=False)
    rank = int(np.sum(s > 1e-8 * max(1.0, s[0] if s.size else 1.0)))
    return basis.dim - rank


def ideal_structure_check(family: FamilyBuild, window: Window, alpha: int, samples: int = 500,
                          seed: int = 0, tol: float = 1e-9) -> Report:
    """Kernel of restriction to ``[alpha, inf)`` and faithfulness at ``alpha`` on a window."""
    rep = Report("ideal", inputs={"columns": list(window.columns), "widths": window.widths, "alpha": alpha,
                                  "samples": samples, "seed": seed})
    alg = window.algebra()
    kdim = _kernel_dim(alg, alpha)
    sub_gens = [a for (xi, _, _), a in window.generators.items() if xi < alpha]
    sub = star_closure(sub_gens, window.shape)
    full = all(window.widths[c] == window.shape.width(c) for c in window.columns)
    expected = sum(window.widths[c] ** 2 for c in window.columns if c < alpha)
    rep.add("kernel-vs-subalgebra", alpha, {"kernel": kdim, "sub-alpha": sub.dim}, None, kdim == sub.dim)
    leak = max((a.tail(alpha).norm() for a in sub.operators()), default=0.0)
    rep.add("sub-alpha-in-kernel", alpha, leak, tol, leak <= tol)
    if full:
        rep.add("kernel-dimension", alpha, {"kernel": kdim, "expected": expected}, None, kdim == expected)
    cols = window.columns
    if alpha in window.shape and alpha in cols:
        pt = family.conditions[family.top]
        p, rec = dominate_column(pt, window.rect, alpha, None)
        rep.add("witness", alpha, None, None, has_f_witness(p, window.rect, alpha))
        # A^p_X is the image of the window algebra under the mirror embedding,
        # since the embedding sends generators to generators
        rng = np.random.default_rng(seed)
        worst, bad = np.inf, 0
        for _ in range(samples):
            a = rec.evaluate(alg.random_element(rng))
            nrm = a.norm()
            if nrm == 0:
                continue
            a = a / nrm
            gap = a.at(alpha).norm() - a.tail(alpha).norm()
            worst = min(worst, gap)
            bad += gap < -tol
        rep.add("faithful", alpha, {"samples": samples, "violations": int(bad), "worst_gap": float(worst)},
                tol, bad == 0)
    return rep


def ideal_chain(family: FamilyBuild, window: Window, samples: int = 500, seed: int = 0) -> Report:
    """Kernels are nested and exhaust the window algebra as ``alpha`` sweeps the columns."""
    rep = Report("ideal-chain", inputs={"columns": list(window.columns)})
    alg = window.algebra()
    alphas = list(window.columns) + [max(window.columns) + 1]
    dims = [_kernel_dim(alg, a) for a in alphas]
    rep.add("nested", None, dims, None, all(a <= b for a, b in zip(dims, dims[1:])))
    rep.add("zero-at-min", alphas[0], dims[0], None, dims[0] == 0)
    rep.add("exhaust", alphas[-1], {"kernel": dims[-1], "dim": alg.dim}, None, dims[-1] == alg.dim)
    return rep
