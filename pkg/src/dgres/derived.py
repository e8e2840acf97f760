"""Derived Hom and tensor functors on bounded windows, three ways.

Route one resolves the source by a semifree DG-module and applies the
strict Hom or tensor complex.  Routes two and three read the same
dimensions off a sup-projective or inf-injective resolution through the
slot formulas: with s_i = sup P_i the group Hom(M, N[n]) vanishes unless
n = i - s_i for some stage i, and at a slot it is computed from the
three-term complex of Hom_{H0}(H^sup(P_*), N) spaces, with the kernel,
cokernel or middle-cohomology case keyed on the equality pattern of
adjacent stage sups.  Tor tables use the tensor analogue with slots
n = -i + s_i, and inf-injective resolutions give the Hom tables with a
heart source at slots n = i + inf I_{-i}.

Every functor takes an explicit finite window; the semifree construction
takes a floor deep enough that the window is unaffected by truncating the
resolution, namely H^i(cone(augmentation)) = 0 for all i above the floor.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import dgcore as dg
from . import exactla as la
from . import heartkit as hk
from .resolve import IfijResolution, SppjResolution


@dataclass
class HomTable:
    window: tuple[int, int]
    dims: dict[int, int]
    route: str

    def dim(self, n: int) -> int:
        return self.dims.get(n, 0)

    def support(self) -> list[int]:
        return sorted(n for n, d in self.dims.items() if d)

    def same_dims(self, other) -> bool:
        a, b = self.window
        return all(self.dim(n) == other.dim(n) for n in range(a, b + 1))


TorTable = HomTable


# ---------------------------------------------------------------------------
# semifree resolutions


@dataclass
class SemifreeResolution:
    """A free DG-module with a filtration-compatible differential and a
    quasi-isomorphism onto the target above the floor."""

    module: dg.DGModule  # the resolved module
    floor: int
    gen_degrees: list[int] = field(default_factory=list)
    twists: dict = field(default_factory=dict)  # (h, g) -> R-vector, h earlier than g
    images: list = field(default_factory=list)  # augmentation images of the generators
    free: dg.DGModule | None = None
    augmentation: dg.DGMorphism | None = None

    def ranks_by_degree(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for s in self.gen_degrees:
            out[s] = out.get(s, 0) + 1
        return out


def semifree(M: dg.DGModule, floor: int, max_rounds: int | None = None) -> SemifreeResolution:
    """Adjoin free generators top-down until the cone of the augmentation is
    acyclic above the floor.

    Each round kills the top surviving cohomology of the cone by one new
    generator per minimal generator of that cohomology over H0.
    """
    R = M.algebra
    p = M.p
    sf = SemifreeResolution(M, floor)
    coh0 = dg.cohomology(M, with_action=False)
    if coh0.is_acyclic():
        sf.free = dg.free_module(R, [])
        sf.augmentation = dg.DGMorphism(sf.free, M, {})
        return sf
    rounds = 0
    budget = max_rounds if max_rounds is not None else (int(coh0.sup) - floor + 4)
    while True:
        F = dg.free_module(R, sf.gen_degrees, twists=sf.twists, label="F")
        eps = dg.free_map(F, M, list(sf.images))
        C, _, _ = dg.cone(eps)
        cohC = dg.cohomology(C)
        tops = [j for j, d in cohC.dims.items() if d and j > floor]
        if not tops:
            sf.free = F
            sf.augmentation = eps
            return sf
        j = max(tops)
        Q = dg.heart_module(C, j, cohC)
        top, proj_top = hk.top_of(Q)
        for t in range(top.dim):
            coords = la.solve(proj_top, la.eye(top.dim)[t], p)
            rep = cohC.rep(j, coords)  # cocycle in C^j = M^j + F^{j+1}
            m_part = rep[: M.dim(j)]
            x_part = rep[M.dim(j) :]
            g_new = len(sf.gen_degrees)
            # d(e_new) = x_part, split into earlier-generator blocks
            for h, sh in enumerate(sf.gen_degrees):
                nb = R.dim(j + 1 - sh)
                if nb == 0:
                    continue
                off = F._offsets[(j + 1, h)]
                z = x_part[off : off + nb]
                if np.any(z):
                    sf.twists[(h, g_new)] = z.copy()
            sf.gen_degrees.append(j)
            sf.images.append((-m_part) % p)
        rounds += 1
        if rounds > budget:
            raise RuntimeError("semifree construction failed to reach the floor")


def _augmentation(F, M, sf: SemifreeResolution) -> dg.DGMorphism:
    imgs = []
    for s, img in zip(sf.gen_degrees, sf.images):
        imgs.append(img)
    return dg.free_map(F, M, imgs)


# ---------------------------------------------------------------------------
# windowed derived functors, route one


def rhom(M: dg.DGModule, N: dg.DGModule, window: tuple[int, int],
         resolution: SemifreeResolution | None = None) -> HomTable:
    """Per-degree dimensions of H^n RHom(M, N) for n in the window."""
    a, b = window
    if not N.degrees() or dg.is_acyclic(M):
        return HomTable(window, {}, "semifree")
    floor = N.lo() - b - 2
    if resolution is None:
        resolution = semifree(M, floor)
    elif resolution.floor > floor:
        raise ValueError(f"semifree floor {resolution.floor} is too shallow for window {window}")
    hc = dg.hom_complex(resolution.free, N, window=(a, b))
    coh = dg.cohomology(hc, with_action=False)
    dims = {n: coh.dim(n) for n in range(a, b + 1) if coh.dim(n)}
    return HomTable(window, dims, "semifree")


def ltensor(M: dg.DGModule, L: dg.DGModule, window: tuple[int, int],
            resolution: SemifreeResolution | None = None) -> TorTable:
    """Per-degree dimensions of H^n (M ⊗^L L) for n in the window; L is a
    right module over the opposite algebra."""
    a, b = window
    if not L.degrees() or dg.is_acyclic(M):
        return TorTable(window, {}, "semifree")
    floor = a - L.hi() - 2
    if resolution is None:
        resolution = semifree(M, floor)
    elif resolution.floor > floor:
        raise ValueError(f"semifree floor {resolution.floor} is too shallow for window {window}")
    tc = dg.tensor_complex(resolution.free, L, window=(a, b))
    coh = dg.cohomology(tc, with_action=False)
    dims = {n: coh.dim(n) for n in range(a, b + 1) if coh.dim(n)}
    return TorTable(window, dims, "semifree")


# ---------------------------------------------------------------------------
# slot-formula routes


class InsufficientStagesError(RuntimeError):
    pass


def _hom_spaces_along_sppj(res: SppjResolution, N: hk.FDModule, need_slot: int, stage_cap: int = 64):
    """Stage data (sups, Hom spaces, transition matrices) covering all slots
    up to need_slot."""
    hd = hk.heart_of(res.base.algebra)
    p = res.base.p
    # build stages until the slot passes the window or the resolution ends
    i = 0
    while True:
        s = res.sup_term(i)
        if s is None:
            last = i - 1
            break
        if i - s > need_slot + 1:
            last = i
            break
        if i > stage_cap:
            raise InsufficientStagesError("extend resolution: stage cap reached before covering the window")
        i += 1
    sups, homs, qs, cohs = {}, {}, {}, {}
    for i in range(last + 1):
        s = res.sup_term(i)
        if s is None:
            break
        sups[i] = s
        cohs[i] = dg.cohomology(res.terms[i])
        qs[i] = dg.heart_module(res.terms[i], s, cohs[i])
        homs[i] = hk.hom_space(qs[i], N)
    trans = {}
    for i in sorted(sups):
        if i - 1 in sups and sups[i - 1] == sups[i]:
            alpha = dg.cohomology_map(res.delta(i), sups[i], cohs[i], cohs[i - 1])
            cols = []
            for k in range(homs[i - 1].dim):
                cols.append(homs[i].coords(la.matmul(homs[i - 1].matrix(k), alpha, p)))
            trans[i] = np.stack(cols, axis=1) if cols else la.zeros(homs[i].dim, 0)
    return sups, homs, trans


def hom_table_via_sppj(M: dg.DGModule, N: hk.FDModule, resolution: SppjResolution | None = None,
                       window: tuple[int, int] = (0, 8)) -> HomTable:
    """Hom(M, N[n]) for a heart module N, read off a sup-projective
    resolution through the slot formula."""
    a, b = window
    res = resolution or SppjResolution(M)
    if res.cohs[0].is_acyclic():
        return HomTable(window, {}, "sppj")
    p = M.p
    sups, homs, trans = _hom_spaces_along_sppj(res, N, b)
    dims = {}
    for i, s in sups.items():
        slot = i - s
        if slot < a or slot > b:
            continue
        prev_eq = (i - 1) in sups and sups[i - 1] == s
        nxt = res.sup_term(i + 1)
        next_eq = nxt is not None and nxt == s
        if next_eq and (i + 1) not in homs:
            raise InsufficientStagesError("extend resolution: neighbour stage missing")
        if not prev_eq and not next_eq:
            val = homs[i].dim
        elif not prev_eq and next_eq:
            val = _ker_dim(trans[i + 1], homs[i].dim, p)
        elif prev_eq and not next_eq:
            val = homs[i].dim - la.rank(trans[i], p)
        else:
            val = _ker_dim(trans[i + 1], homs[i].dim, p) - la.rank(trans[i], p)
        if val:
            dims[slot] = val
    return HomTable(window, dims, "sppj")


def _ker_dim(mat, src_dim, p):
    """Kernel dimension of a map out of a space of dimension src_dim."""
    return src_dim - la.rank(mat, p)


def tensor_over_h0(Q: hk.FDModule, L: hk.FDModule):
    """Q (x)_{H0} L for Q a right module and L a right module over the
    opposite algebra (a left module); returns (dim, proj, sect) for the
    quotient of the ambient Q (x) L by the middle-action relations."""
    A = Q.algebra
    p = A.p
    big = Q.dim * L.dim
    if big == 0:
        return 0, la.zeros(0, 0), la.zeros(0, 0)
    rels = []
    for a in range(A.dim):
        qa = Q.action[a]  # q . e_a
        al = L.action[a]  # e_a . l  (left action via the opposite module)
        for qi in range(Q.dim):
            for li in range(L.dim):
                rel = np.zeros(big, dtype=np.int64)
                rel[np.arange(Q.dim) * L.dim + li] = qa[:, qi]
                rel[qi * L.dim + np.arange(L.dim)] = (rel[qi * L.dim + np.arange(L.dim)] - al[:, li]) % p
                rels.append(rel)
    sub = la.span(rels if rels else la.zeros(0, big), big, p)
    proj, sect = la.quotient_basis(sub)
    return proj.shape[0], proj, sect


def tor_table_via_spft(M: dg.DGModule, L: hk.FDModule, resolution: SppjResolution | None = None,
                       window: tuple[int, int] = (-8, 0), stage_cap: int = 64) -> TorTable:
    """H^n(M (x)^L T) for a left heart module T, via the sup-flat slot
    formula with slots n = -i + sup P_i."""
    a, b = window
    res = resolution or SppjResolution(M)
    if res.cohs[0].is_acyclic():
        return TorTable(window, {}, "spft")
    p = M.p
    # stages until the slot drops below the window
    i = 0
    while True:
        s = res.sup_term(i)
        if s is None:
            last = i - 1
            break
        if -i + s < a - 1:
            last = i
            break
        if i > stage_cap:
            raise InsufficientStagesError("extend resolution: stage cap reached before covering the window")
        i += 1
    sups, tens, cohs, qs = {}, {}, {}, {}
    for i in range(last + 1):
        s = res.sup_term(i)
        if s is None:
            break
        sups[i] = s
        cohs[i] = dg.cohomology(res.terms[i])
        qs[i] = dg.heart_module(res.terms[i], s, cohs[i])
        tens[i] = tensor_over_h0(qs[i], L)
    trans = {}
    for i in sorted(sups):
        if i - 1 in sups and sups[i - 1] == sups[i]:
            alpha = dg.cohomology_map(res.delta(i), sups[i], cohs[i], cohs[i - 1])
            # induced map Q_i (x) L -> Q_{i-1} (x) L
            di, proj_i, sect_i = tens[i]
            dj, proj_j, sect_j = tens[i - 1]
            big = np.kron(alpha, la.eye(L.dim))
            trans[i] = la.matmul(proj_j, la.matmul(big, sect_i, p), p) if di and dj else la.zeros(dj, di)
    dims = {}
    for i, s in sups.items():
        slot = -i + s
        if slot < a or slot > b:
            continue
        prev_eq = (i - 1) in sups and sups[i - 1] == s
        nxt = res.sup_term(i + 1)
        next_eq = nxt is not None and nxt == s
        d_i = tens[i][0]
        if next_eq and (i + 1) not in tens:
            raise InsufficientStagesError("extend resolution: neighbour stage missing")
        if not prev_eq and not next_eq:
            val = d_i
        elif not prev_eq and next_eq:
            # cokernel of Q_{i+1} (x) L -> Q_i (x) L
            val = d_i - la.rank(trans[i + 1], p)
        elif prev_eq and not next_eq:
            val = _ker_dim(trans[i], d_i, p)
        else:
            val = _ker_dim(trans[i], d_i, p) - la.rank(trans[i + 1], p)
        if val:
            dims[slot] = val
    return TorTable(window, dims, "spft")


def hom_table_via_ifij(N: hk.FDModule, M: dg.DGModule, resolution: IfijResolution | None = None,
                       window: tuple[int, int] = (0, 8), stage_cap: int = 64) -> HomTable:
    """Hom(N, M[n]) for a heart module N, read off an inf-injective
    resolution through the dual slot formula, slots n = i + inf I_{-i}."""
    a, b = window
    res = resolution or IfijResolution(M)
    if res.cohs[0].is_acyclic():
        return HomTable(window, {}, "ifij")
    p = M.p
    i = 0
    while True:
        t = res.inf_term(i)
        if t is None:
            last = i - 1
            break
        if i + t > b + 1:
            last = i
            break
        if i > stage_cap:
            raise InsufficientStagesError("extend resolution: stage cap reached before covering the window")
        i += 1
    infs, homs, cohs, js = {}, {}, {}, {}
    for i in range(last + 1):
        t = res.inf_term(i)
        if t is None:
            break
        infs[i] = t
        cohs[i] = dg.cohomology(res.terms[i])
        js[i] = dg.heart_module(res.terms[i], t, cohs[i])
        homs[i] = hk.hom_space(N, js[i])
    trans = {}
    for i in sorted(infs):
        if i - 1 in infs and infs[i - 1] == infs[i]:
            beta = dg.cohomology_map(res.delta(i), infs[i], cohs[i - 1], cohs[i])
            cols = []
            for k in range(homs[i - 1].dim):
                cols.append(homs[i].coords(la.matmul(beta, homs[i - 1].matrix(k), p)))
            trans[i] = np.stack(cols, axis=1) if cols else la.zeros(homs[i].dim, 0)
    dims = {}
    for i, t in infs.items():
        slot = i + t
        if slot < a or slot > b:
            continue
        prev_eq = (i - 1) in infs and infs[i - 1] == t
        nxt = res.inf_term(i + 1)
        next_eq = nxt is not None and nxt == t
        if next_eq and (i + 1) not in homs:
            raise InsufficientStagesError("extend resolution: neighbour stage missing")
        if not prev_eq and not next_eq:
            val = homs[i].dim
        elif not prev_eq and next_eq:
            val = _ker_dim(trans[i + 1], homs[i].dim, p)
        elif prev_eq and not next_eq:
            val = homs[i].dim - la.rank(trans[i], p)
        else:
            val = _ker_dim(trans[i + 1], homs[i].dim, p) - la.rank(trans[i], p)
        if val:
            dims[slot] = val
    return HomTable(window, dims, "ifij")


# ---------------------------------------------------------------------------
# concentration scan


def heart_battery(R: dg.DGAlgebra) -> list[hk.FDModule]:
    """Simples, the regular H0-module and its radical layers."""
    hd = hk.heart_of(R)
    out = list(hk.simples(hd.h0))
    reg = hk.regular_module(hd.h0)
    out.append(reg)
    chain = hk.radical_chain(hd.h0)
    for k in range(1, len(chain) - 1):
        sub_k, _ = hk.subspace_module(reg, chain[k], label=f"rad^{k}")
        layer, _ = hk.quotient_module(sub_k, _coords_in(chain[k], chain[k + 1], R.p), label=f"rad^{k}/rad^{k+1}")
        if layer.dim:
            out.append(layer)
    return out


def _coords_in(outer: la.Subspace, inner: la.Subspace, p: int) -> la.Subspace:
    rows = [outer.coordinates(v) for v in inner.basis]
    return la.span(rows if rows else la.zeros(0, outer.dim), outer.dim, p)


def concentration_scan(M: dg.DGModule, battery: list[hk.FDModule] | None = None,
                       window: tuple[int, int] = (-8, 8),
                       resolution: SemifreeResolution | None = None) -> dict:
    """Union of the supports of RHom(M, heart(N)) over a battery of heart
    modules, as an interval report."""
    R = M.algebra
    battery = battery if battery is not None else heart_battery(R)
    a, b = window
    if resolution is None and not dg.is_acyclic(M):
        resolution = semifree(M, 0 - b - 2)
    per = {}
    lo, hi = None, None
    for idx, N in enumerate(battery):
        table = rhom(M, dg.heart_embed(R, N), window, resolution=resolution)
        sup_n = table.support()
        per[f"{idx}:{N.label}"] = sup_n
        if sup_n:
            lo = sup_n[0] if lo is None else min(lo, sup_n[0])
            hi = sup_n[-1] if hi is None else max(hi, sup_n[-1])
    return {"window": window, "support": None if lo is None else (lo, hi), "per_module": per}
