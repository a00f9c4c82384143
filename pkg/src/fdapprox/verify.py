"""Verification suites: irredundance, projections, commutator graphs, the main finite suite."""
from __future__ import annotations

from dataclasses import dataclass, field

import networkx as nx
import numpy as np

from .algebra import MEMBERSHIP_TOL, Membership, SubalgebraBasis, membership, star_closure
from .blockop import BlockOperator, ColumnShape, commutator, random_positive_contraction
from .errors import NoCaptureAvailable, NotNearProjection
from .poset.amalgamation import V_HALF, anticommuting_unitary
from .report import Report, digest
from .scheme import canonical_decomposition, captures, find_capture, order_iso

__all__ = [
    "DichotomyGraph", "IrredundanceResult", "Membership", "brute_force_irredundance", "dichotomy_scan",
    "irredundance_test", "main_suite_recheck", "membership", "minimal_projections", "onehalf_suite",
    "round_to_projection", "stampfli_suite", "star_closure", "template_projection", "theorem_main_suite",
]

# ---------------------------------------------------------------------------
# irredundance


@dataclass
class IrredundanceResult:
    family: list
    verdicts: list          # "independent" | "redundant" per element
    residuals: list
    witnesses: dict         # index -> coefficients over the basis of the others
    marginal: list = field(default_factory=list)

    @property
    def irredundant(self) -> bool:
        return all(v == "independent" for v in self.verdicts)


def _common_shape(family):
    shape = family[0].shape
    for a in family[1:]:
        shape = shape.union(a.shape)
    return shape


def irredundance_test(family, tol: float = MEMBERSHIP_TOL) -> IrredundanceResult:
    """Decide for each ``A`` whether it lies in the algebra generated by the others."""
    family = list(family)
    if not family:
        raise ValueError("empty family")
    shape = _common_shape(family)
    family = [a.extend(shape) for a in family]
    verdicts, residuals, witnesses, marginal = [], [], {}, []
    for i, a in enumerate(family):
        rest = family[:i] + family[i + 1:]
        basis = star_closure(rest, shape)
        res = membership(a, basis, tol)
        verdicts.append("redundant" if res.member else "independent")
        residuals.append(res.residual)
        if res.member:
            witnesses[i] = res.coefficients
        if res.marginal:
            marginal.append(i)
    return IrredundanceResult(family, verdicts, residuals, witnesses, marginal)


def _word_span(letters, max_len: int):
    """Span of all products of ``letters`` of length at most ``max_len``.

    Words are extended only when they added a new direction, which loses
    nothing: a product that starts with a dependent word is a combination of
    products starting with shorter words.
    """
    span = np.zeros((0, letters[0].size), dtype=complex) if letters else None
    frontier = []
    for x in letters:
        span, new = _add(span, x)
        if new:
            frontier.append(x)
    stable = False
    for _ in range(max_len - 1):
        nxt = []
        for w in frontier:
            for x in letters:
                prod = w @ x
                span, new = _add(span, prod)
                if new:
                    nxt.append(prod)
        frontier = nxt
        if not frontier:
            stable = True
            break
    return span, stable


def _add(span, mat):
    v = mat.ravel()
    if not np.any(np.abs(v) > 1e-12):
        return span, False
    cand = np.vstack([span, v]) if span.shape[0] else v[None, :]
    if np.linalg.matrix_rank(cand, tol=1e-9 * max(1.0, np.abs(cand).max())) > span.shape[0]:
        return cand, True
    return span, False


def brute_force_irredundance(family, max_len: int = 6, tol: float = MEMBERSHIP_TOL) -> dict:
    """Reference verdicts from dense products of words up to ``max_len``."""
    family = list(family)
    shape = _common_shape(family)
    mats = [a.extend(shape).to_dense() for a in family]
    verdicts, stable = [], []
    for i, a in enumerate(mats):
        letters = []
        for j, b in enumerate(mats):
            if j == i:
                continue
            letters.append(b)
            if not np.array_equal(b, b.conj().T):
                letters.append(b.conj().T)
        v = a.ravel()
        if not np.any(v):
            verdicts.append("redundant")
            stable.append(True)
            continue
        if not letters:
            verdicts.append("independent")
            stable.append(True)
            continue
        span, st = _word_span(letters, max_len)
        if span.shape[0] == 0:
            verdicts.append("independent")
        else:
            coef, *_ = np.linalg.lstsq(span.T, v, rcond=None)
            res = np.linalg.norm(span.T @ coef - v) / np.linalg.norm(v)
            verdicts.append("redundant" if res < tol else "independent")
        stable.append(st)
    return {"verdicts": verdicts, "stable": stable}


# ---------------------------------------------------------------------------
# projections


def _spectral(op: BlockOperator, cluster: float = 1e-6):
    """Global eigenvalue clusters of a self-adjoint block operator: ``[(value, projector)]``."""
    pieces = []
    for c, b in op.blocks.items():
        w, v = np.linalg.eigh((b + b.conj().T) / 2)
        for lam, vec in zip(w, v.T):
            pieces.append((float(lam), c, vec))
    for c in op.shape.columns:
        if c not in op.blocks:
            for k in range(op.shape.width(c)):
                e = np.zeros(op.shape.width(c), dtype=complex)
                e[k] = 1
                pieces.append((0.0, c, e))
    pieces.sort(key=lambda t: t[0])
    groups = []
    for lam, c, vec in pieces:
        if groups and abs(lam - groups[-1][0][-1]) < cluster:
            groups[-1][0].append(lam)
            groups[-1][1].append((c, vec))
        else:
            groups.append(([lam], [(c, vec)]))
    out = []
    for lams, vecs in groups:
        blocks = {}
        for c, vec in vecs:
            blocks[c] = blocks.get(c, 0) + np.outer(vec, vec.conj())
        out.append((float(np.mean(lams)), BlockOperator(op.shape, blocks)))
    return out


def minimal_projections(basis: SubalgebraBasis, seed: int = 0, tol: float = 1e-8) -> list:
    """Spectral projections of a generic self-adjoint element with ``dim(pAp) = 1``."""
    if basis.dim == 0:
        return []
    rng = np.random.default_rng(seed)
    ops = basis.operators()
    h = BlockOperator.zero(basis.shape)
    for a in ops:
        h = h + a * complex(rng.standard_normal(), rng.standard_normal())
    h = (h + h.adjoint()) * 0.5
    out = []
    for lam, p in _spectral(h):
        if not basis.contains(p, tol):
            continue  # the kernel of h where the algebra is not unital
        corner = [p @ a @ p for a in ops]
        mat = np.array([np.concatenate([x.block(c).ravel() for c in basis.shape.columns]) for x in corner])
        if np.linalg.matrix_rank(mat, tol=1e-8) == 1:
            out.append(p)
    return out


def round_to_projection(a: BlockOperator, eps: float, gap: float = 1e-9) -> BlockOperator:
    """Eigen-threshold ``(A + A*)/2`` at ``1/2``.

    Raises when ``||A^2 - A|| >= eps/2`` or an eigenvalue sits within ``gap``
    of ``1/2``.
    """
    s = (a + a.adjoint()) * 0.5
    if (s @ s - s).norm() >= eps / 2:
        raise NotNearProjection(f"||A^2 - A|| = {(s @ s - s).norm():.3g} is not below eps/2 = {eps / 2:.3g}")
    blocks = {}
    for c, b in s.blocks.items():
        w, v = np.linalg.eigh(b)
        if np.any(np.abs(w - 0.5) < gap):
            raise NotNearProjection("spectrum meets 1/2")
        keep = v[:, w > 0.5]
        if keep.shape[1]:
            q = keep @ keep.conj().T
            blocks[c] = (q + q.conj().T) / 2
    return BlockOperator(a.shape, blocks)


# ---------------------------------------------------------------------------
# commutator graphs


@dataclass
class DichotomyGraph:
    eps: float
    norms: np.ndarray
    edges: list
    clique: list
    independent: list
    regime: str

    @property
    def vertices(self) -> list:
        return list(range(self.norms.shape[0]))

    def to_json(self) -> dict:
        return {"eps": self.eps, "n": len(self.vertices), "edges": [list(e) for e in self.edges],
                "clique": self.clique, "independent": self.independent, "regime": self.regime}


def commutator_norms(family) -> np.ndarray:
    family = list(family)
    n = len(family)
    out = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            out[i, j] = out[j, i] = commutator(family[i], family[j]).norm()
    return out


def _local_improve(g: nx.Graph, found: set) -> set:
    """Greedy additions, then 1-for-2 swaps, until nothing changes."""
    found = set(found)
    changed = True
    while changed:
        changed = False
        for v in sorted(g.nodes - found):
            if all(g.has_edge(v, u) for u in found):
                found.add(v)
                changed = True
        for u in sorted(found):
            rest = found - {u}
            cands = [v for v in sorted(g.nodes - found) if all(g.has_edge(v, x) for x in rest)]
            for a in range(len(cands)):
                for b in range(a + 1, len(cands)):
                    if g.has_edge(cands[a], cands[b]):
                        found = rest | {cands[a], cands[b]}
                        changed = True
                        break
                if changed:
                    break
            if changed:
                break
    return found


def _homogeneous(g: nx.Graph, exact: bool) -> list:
    if g.number_of_nodes() == 0:
        return []
    if exact:
        clique, _ = nx.max_weight_clique(g, weight=None)
        return sorted(clique)
    start = nx.algorithms.approximation.max_clique(g)
    return sorted(_local_improve(g, start))


def dichotomy_scan(family, eps: float, exact_limit: int = 20) -> DichotomyGraph:
    """Graph with an edge where ``||[A_i, A_j]|| > eps``; largest clique and independent set."""
    norms = commutator_norms(family)
    n = norms.shape[0]
    edges = [(i, j) for i in range(n) for j in range(i + 1, n) if norms[i, j] > eps]
    g = nx.Graph()
    g.add_nodes_from(range(n))
    g.add_edges_from(edges)
    exact = n <= exact_limit
    clique = _homogeneous(g, exact)
    indep = _homogeneous(nx.complement(g), exact)
    return DichotomyGraph(eps, norms, edges, clique, indep, "exact" if exact else "greedy")


# ---------------------------------------------------------------------------
# suites


def onehalf_suite() -> Report:
    """The rotating unitary against ``P = diag(1, 0)``."""
    rep = Report("onehalf")
    p = np.diag([1.0, 0.0])
    u = V_HALF
    upu = u @ p @ u.conj().T
    target = np.array([[0.5, -0.5], [-0.5, 0.5]])
    dev = float(np.max(np.abs(upu - target)))
    rep.add("UPU*", None, dev, 1e-12, dev <= 1e-12, {"matrix": upu.tolist()})
    val = float(np.linalg.norm(upu @ p - p @ upu, 2))
    rep.add("commutator", None, val, 1e-12, abs(val - 0.5) <= 1e-12)
    u3 = anticommuting_unitary([1, 0, 0], [0, 1, 0], 3)
    ref = np.zeros((3, 3))
    ref[:2, :2] = V_HALF
    ref[2, 2] = 1
    dev3 = float(np.max(np.abs(u3 - ref)))
    rep.add("V+I", 3, dev3, 1e-12, dev3 <= 1e-12)
    return rep


def stampfli_suite(trials: int = 1000, seed: int = 0, max_width: int = 32, tol: float = 1e-9) -> Report:
    """Commutators of random positive contractions never exceed ``1/2``."""
    rep = Report("stampfli", inputs={"trials": trials, "seed": seed, "max_width": max_width})
    rng = np.random.default_rng(seed)
    worst, at = 0.0, None
    for t in range(trials):
        w = int(rng.integers(2, max_width + 1))
        a = random_positive_contraction(w, rng)
        b = random_positive_contraction(w, rng)
        val = float(np.linalg.norm(a @ b - b @ a, 2))
        if val > worst:
            worst, at = val, t
    rep.add("max-commutator", at, worst, 0.5 + tol, worst <= 0.5 + tol)
    return rep


def template_projection(shape: ColumnShape, alpha: int, vec) -> BlockOperator:
    """Rank one projection onto ``vec`` (zero-padded, normalized) at column ``alpha``."""
    vec = np.asarray(vec, dtype=complex)
    w = shape.width(alpha)
    full = np.zeros(w, dtype=complex)
    full[: vec.size] = vec
    full = full / np.linalg.norm(full)
    return BlockOperator(shape, {alpha: np.outer(full, full.conj())})


def _transport(op: BlockOperator, src, dst, shape) -> BlockOperator:
    phi = order_iso(src, dst)
    return op.relabel(phi.mapping, shape)


def theorem_main_suite(family, eps: float = 0.1, template=(1, 1)) -> Report:
    """Finite versions of the three projection properties on a built family.

    Projections are a rational template on the first non-root column of the
    first block, transported along the order isomorphisms, then pushed into
    the top condition through the composed recipes.
    """
    sch = family.scheme
    top = family.top
    rep = Report("main", inputs={"eps": eps, "l_seq": list(family.l_seq), "kinds": family.kinds,
                                 "template": list(template), "scheme": digest(sch.to_json())})

    def push(g, q):
        return family.embedding(top, g).evaluate(q)

    def system_at(kind):
        ks = [k for k, v in sorted(family.kinds.items()) if v == kind]
        if not ks:
            raise NoCaptureAvailable(f"no rank of {kind} in this build")
        k = ks[0]
        f0 = sch.levels[k + 1][0]
        blocks = canonical_decomposition(sch, f0).members
        hit = find_capture(sch, blocks, class_label=sch.partition[k], require_full=True)
        f = hit[0] if hit else f0
        dec = canonical_decomposition(sch, f)
        rep.add(f"{kind}-capture", [list(x) for x in dec.members], captures(sch, f, dec).kind, None,
                captures(sch, f, dec).kind == "full")
        return k, f, dec

    # (a), (b): type 2
    k, f, dec = system_at("type2")
    g1, g2, g3 = dec.members
    alpha = next(x for x in g1 if x not in dec.root)
    q1 = template_projection(family.conditions[g1].shape, alpha, template)
    qs = [q1] + [_transport(q1, g1, g, family.conditions[g].shape) for g in (g2, g3)]
    cong = max((_transport(qs[0], g1, g, family.conditions[g].shape) - q).norm()
               for g, q in zip((g2, g3), qs[1:]))
    rep.add("congruence", 2, cong, eps / 2, cong < eps / 2)
    ps = [push(g, q) for g, q in zip((g1, g2, g3), qs)]
    va = (ps[0] - ps[1] @ ps[2]).norm()
    rep.add("a", [list(x) for x in (g1, g2, g3)], va, eps, va < eps)
    vb = commutator(ps[1], ps[2]).norm()
    rep.add("b", [list(g2), list(g3)], vb, eps, vb < eps)
    rep.artifacts["a"] = [p.to_dump() for p in ps]

    # (c): type 3
    k, f, dec = system_at("type3")
    m, v, _ = family.vectors[k]
    g1, g2 = dec.members[:2]
    alpha = next(x for x in g2 if x not in dec.root)
    q2 = template_projection(family.conditions[g2].shape, alpha, v)
    q1 = _transport(q2, g2, g1, family.conditions[g1].shape)
    p1, p2 = push(g1, q1), push(g2, q2)
    vc = commutator(p1, p2).norm()
    rep.add("c", [list(g1), list(g2)], vc, 0.5 - eps, vc >= 0.5 - eps, {"m": m})
    rep.artifacts["c"] = [p1.to_dump(), p2.to_dump()]
    return rep


def main_suite_recheck(artifacts: dict) -> dict:
    """Recompute the three values from dumped operators by norm evaluation alone."""
    pa = [BlockOperator.from_dump(d) for d in artifacts["a"]]
    pc = [BlockOperator.from_dump(d) for d in artifacts["c"]]
    return {"a": (pa[0] - pa[1] @ pa[2]).norm(), "b": commutator(pa[1], pa[2]).norm(),
            "c": commutator(pc[0], pc[1]).norm()}
