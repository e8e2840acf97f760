"""Finite-dimensional connective DG-algebras, right DG-modules and the
triangulated toolkit: cohomology, shifts, cones, truncations, Hom and tensor
complexes, dualities and the injective-producing functor psi.

Grading is cohomological; differentials raise degree by one.  The algebra is
concentrated in degrees [w, 0] with w <= 0, which makes the standard
t-structure available and forces the degree-zero part R0 to consist of
cocycles.

One coherent Koszul sign system is fixed once and used by every
construction, so that independently computed Hom and Tor groups agree on
the nose:

  shift       d_{M[n]}   = (-1)^n d_M, action unchanged
  cone(f)     C^i = N^i + M^{i+1},  d(n, m) = (d n + f m, -d m)
  Hom complex (d phi)     = d_N phi - (-1)^{|phi|} phi d_M
  tensor      d(m (x) l)  = d m (x) l + (-1)^{|m|} m (x) d l
  opposite    a *op b     = (-1)^{|a||b|} b a
  dual        d(f)        = -(-1)^{|f|} f d_M,  (f . a)(m) = (-1)^{|a||f|} f(m a)

Any globally consistent alternative changes no dimension output.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import exactla as la
from . import heartkit as hk

NEG_INF = -math.inf
POS_INF = math.inf


# ---------------------------------------------------------------------------
# core types


@dataclass
class DGAlgebra:
    """Structure-constant tables of a connective DG-algebra over GF(p).

    mult[(i, j)] has shape (dim_i, dim_j, dim_{i+j}); diff[i] is the matrix
    of the differential R^i -> R^{i+1}; unit is a degree-zero vector.
    Components live in degrees [w, 0] only.
    """

    p: int
    dims: dict[int, int]
    mult: dict[tuple[int, int], np.ndarray]
    diff: dict[int, np.ndarray]
    unit: np.ndarray
    label: str = ""
    seed: int = 0
    _memo: dict = field(default_factory=dict, repr=False)

    def dim(self, i: int) -> int:
        return self.dims.get(i, 0)

    def degrees(self) -> list[int]:
        return sorted(d for d, n in self.dims.items() if n)

    @property
    def total_dim(self) -> int:
        return sum(self.dims.values())

    def mult_tensor(self, i: int, j: int) -> np.ndarray:
        t = self.mult.get((i, j))
        if t is None:
            t = np.zeros((self.dim(i), self.dim(j), self.dim(i + j)), dtype=np.int64)
        return t

    def diff_mat(self, i: int) -> np.ndarray:
        d = self.diff.get(i)
        if d is None:
            d = la.zeros(self.dim(i + 1), self.dim(i))
        return d

    def multiply(self, u, i: int, v, j: int) -> np.ndarray:
        return np.einsum("a,b,abc->c", la.as_field(u, self.p), la.as_field(v, self.p), self.mult_tensor(i, j)) % self.p

    def left_mult_matrix(self, u, i: int, j: int) -> np.ndarray:
        """Matrix of R^j -> R^{i+j}, x -> u x, for u in R^i."""
        return np.einsum("a,abc->cb", la.as_field(u, self.p), self.mult_tensor(i, j)) % self.p

    def right_mult_matrix(self, v, j: int, i: int) -> np.ndarray:
        """Matrix of R^i -> R^{i+j}, x -> x v, for v in R^j."""
        return np.einsum("b,abc->ca", la.as_field(v, self.p), self.mult_tensor(i, j)) % self.p

    def regular_module(self) -> "DGModule":
        if "regular" not in self._memo:
            self._memo["regular"] = DGModule(
                self, dict(self.dims), dict(self.diff), dict(self.mult), label=self.label or "R"
            )
        return self._memo["regular"]

    def opposite(self) -> "DGAlgebra":
        if "opposite" not in self._memo:
            mult = {}
            for (i, j), t in self.mult.items():
                sign = -1 if (i * j) % 2 else 1
                mult[(j, i)] = (sign * np.swapaxes(t, 0, 1)) % self.p
            op = DGAlgebra(
                self.p, dict(self.dims), mult, {k: v.copy() for k, v in self.diff.items()},
                self.unit.copy(), label=self.label + "^op", seed=self.seed,
            )
            self._memo["opposite"] = op
        return self._memo["opposite"]


@dataclass
class DGModule:
    """A right DG-module given by per-degree dimensions, differentials and
    action tables act[(i, j)] of shape (dim_i, dimR_j, dim_{i+j})."""

    algebra: DGAlgebra
    dims: dict[int, int]
    diff: dict[int, np.ndarray]
    act: dict[tuple[int, int], np.ndarray]
    label: str = ""

    @property
    def p(self) -> int:
        return self.algebra.p

    def dim(self, i: int) -> int:
        return self.dims.get(i, 0)

    def degrees(self) -> list[int]:
        return sorted(d for d, n in self.dims.items() if n)

    @property
    def total_dim(self) -> int:
        return sum(self.dims.values())

    def lo(self) -> int:
        degs = self.degrees()
        return degs[0] if degs else 0

    def hi(self) -> int:
        degs = self.degrees()
        return degs[-1] if degs else 0

    def diff_mat(self, i: int) -> np.ndarray:
        d = self.diff.get(i)
        if d is None:
            d = la.zeros(self.dim(i + 1), self.dim(i))
        return d

    def act_tensor(self, i: int, j: int) -> np.ndarray:
        t = self.act.get((i, j))
        if t is None:
            t = np.zeros((self.dim(i), self.algebra.dim(j), self.dim(i + j)), dtype=np.int64)
        return t

    def action(self, m, i: int, r, j: int) -> np.ndarray:
        return np.einsum("a,b,abc->c", la.as_field(m, self.p), la.as_field(r, self.p), self.act_tensor(i, j)) % self.p

    def right_mult_matrix(self, r, j: int, i: int) -> np.ndarray:
        """Matrix of M^i -> M^{i+j}, m -> m r, for r in R^j."""
        return np.einsum("b,abc->ca", la.as_field(r, self.p), self.act_tensor(i, j)) % self.p


@dataclass
class DGMorphism:
    source: DGModule
    target: DGModule
    blocks: dict[int, np.ndarray]  # degree i -> matrix (target dim_i, source dim_i)
    label: str = ""

    @property
    def p(self) -> int:
        return self.source.p

    def block(self, i: int) -> np.ndarray:
        b = self.blocks.get(i)
        if b is None:
            b = la.zeros(self.target.dim(i), self.source.dim(i))
        return b

    def apply(self, v, i: int) -> np.ndarray:
        return la.matmul(self.block(i), v, self.p)


def compose(g: DGMorphism, f: DGMorphism) -> DGMorphism:
    """g after f."""
    if f.target is not g.source and f.target.dims != g.source.dims:
        raise ValueError("compose: middle modules differ")
    degs = set(f.blocks) | set(g.blocks)
    blocks = {
        i: la.matmul(g.block(i), f.block(i), f.p)
        for i in degs
        if f.source.dim(i) and g.target.dim(i)
    }
    return DGMorphism(f.source, g.target, blocks)


def identity_morphism(M: DGModule) -> DGMorphism:
    return DGMorphism(M, M, {i: la.eye(M.dim(i)) for i in M.degrees()})


def zero_module(R: DGAlgebra) -> DGModule:
    return DGModule(R, {}, {}, {}, label="0")


# ---------------------------------------------------------------------------
# validation


def validate_algebra(R: DGAlgebra) -> list[str]:
    bad = []
    p = R.p
    for i in R.degrees():
        if i > 0:
            bad.append(f"component in positive degree {i}")
    if R.dim(0) == 0:
        bad.append("no degree-zero component")
        return bad
    # d o d = 0
    for i in R.degrees():
        if np.any(la.matmul(R.diff_mat(i + 1), R.diff_mat(i), p)):
            bad.append(f"d o d != 0 at degree {i}")
    # unit
    for j in R.degrees():
        for b in range(R.dim(j)):
            e = la.eye(R.dim(j))[b]
            if np.any(R.multiply(R.unit, 0, e, j) != e):
                bad.append(f"unit fails on left of basis ({j},{b})")
            if np.any(R.multiply(e, j, R.unit, 0) != e):
                bad.append(f"unit fails on right of basis ({j},{b})")
    # graded Leibniz on basis pairs
    for i in R.degrees():
        for j in R.degrees():
            for a in range(R.dim(i)):
                for b in range(R.dim(j)):
                    ea, eb = la.eye(R.dim(i))[a], la.eye(R.dim(j))[b]
                    lhs = la.matmul(R.diff_mat(i + j), R.multiply(ea, i, eb, j), p)
                    rhs = (
                        R.multiply(la.matmul(R.diff_mat(i), ea, p), i + 1, eb, j)
                        + (-1) ** i * R.multiply(ea, i, la.matmul(R.diff_mat(j), eb, p), j + 1)
                    ) % p
                    if np.any(lhs != rhs):
                        bad.append(f"Leibniz fails at degrees ({i},{j}) basis ({a},{b})")
    # associativity on basis triples
    for i in R.degrees():
        for j in R.degrees():
            for k in R.degrees():
                for a in range(R.dim(i)):
                    for b in range(R.dim(j)):
                        ea, eb = la.eye(R.dim(i))[a], la.eye(R.dim(j))[b]
                        ab = R.multiply(ea, i, eb, j)
                        for c in range(R.dim(k)):
                            ec = la.eye(R.dim(k))[c]
                            lhs = R.multiply(ab, i + j, ec, k)
                            rhs = R.multiply(ea, i, R.multiply(eb, j, ec, k), j + k)
                            if np.any(lhs != rhs):
                                bad.append(f"associativity fails at ({i},{j},{k}) basis ({a},{b},{c})")
    return bad


def validate_module(M: DGModule) -> list[str]:
    bad = []
    R, p = M.algebra, M.p
    for i in M.degrees():
        if np.any(la.matmul(M.diff_mat(i + 1), M.diff_mat(i), p)):
            bad.append(f"d o d != 0 at degree {i}")
    for i in M.degrees():
        for m in range(M.dim(i)):
            em = la.eye(M.dim(i))[m]
            if np.any(M.action(em, i, R.unit, 0) != em):
                bad.append(f"unit fails on basis ({i},{m})")
    for i in M.degrees():
        for j in R.degrees():
            for m in range(M.dim(i)):
                for r in range(R.dim(j)):
                    em, er = la.eye(M.dim(i))[m], la.eye(R.dim(j))[r]
                    lhs = la.matmul(M.diff_mat(i + j), M.action(em, i, er, j), p)
                    rhs = (
                        M.action(la.matmul(M.diff_mat(i), em, p), i + 1, er, j)
                        + (-1) ** i * M.action(em, i, la.matmul(R.diff_mat(j), er, p), j + 1)
                    ) % p
                    if np.any(lhs != rhs):
                        bad.append(f"module Leibniz fails at ({i},{j}) basis ({m},{r})")
                    mr = M.action(em, i, er, j)
                    for k in R.degrees():
                        for s in range(R.dim(k)):
                            es = la.eye(R.dim(k))[s]
                            lhs2 = M.action(mr, i + j, es, k)
                            rhs2 = M.action(em, i, R.multiply(er, j, es, k), j + k)
                            if np.any(lhs2 != rhs2):
                                bad.append(f"action associativity fails at ({i},{j},{k})")
    return bad


def validate_morphism(f: DGMorphism) -> list[str]:
    bad = []
    M, N, p = f.source, f.target, f.p
    if M.algebra is not N.algebra and M.algebra.dims != N.algebra.dims:
        bad.append("source and target over different algebras")
    for i in set(M.degrees()) | set(N.degrees()):
        lhs = la.matmul(f.block(i + 1), M.diff_mat(i), p)
        rhs = la.matmul(N.diff_mat(i), f.block(i), p)
        if np.any(lhs != rhs):
            bad.append(f"not a chain map at degree {i}")
    for i in M.degrees():
        for j in M.algebra.degrees():
            for m in range(M.dim(i)):
                for r in range(M.algebra.dim(j)):
                    em, er = la.eye(M.dim(i))[m], la.eye(M.algebra.dim(j))[r]
                    lhs = f.apply(M.action(em, i, er, j), i + j)
                    rhs = N.action(f.apply(em, i), i, er, j)
                    if np.any(lhs != rhs):
                        bad.append(f"not R-linear at ({i},{j}) basis ({m},{r})")
    return bad


def validate(x) -> list[str]:
    if isinstance(x, DGAlgebra):
        return validate_algebra(x)
    if isinstance(x, DGModule):
        return validate_module(x)
    if isinstance(x, DGMorphism):
        return validate_morphism(x)
    raise TypeError(f"cannot validate {type(x).__name__}")


def assert_valid(x):
    report = validate(x)
    if report:
        raise ValueError(f"invalid {type(x).__name__} {getattr(x, 'label', '')!r}: " + "; ".join(report[:6]))
    return x


# ---------------------------------------------------------------------------
# cohomology


@dataclass
class CohomologyData:
    """Graded cohomology with chosen cocycle representatives.

    reps[i] has the representatives as columns; project(i, z) gives the
    class coordinates of a cocycle z.  When built from a DG-module together
    with the algebra's own cohomology, action[(i, j)] holds the induced
    right action of H^j(R) on H^i(M).
    """

    p: int
    dims: dict[int, int]
    reps: dict[int, np.ndarray]
    cycle_basis: dict[int, la.Subspace]
    class_proj: dict[int, np.ndarray]  # (h_i, dim Z^i): class coords from cycle coords
    action: dict[tuple[int, int], np.ndarray] = field(default_factory=dict)

    def dim(self, i: int) -> int:
        return self.dims.get(i, 0)

    @property
    def sup(self):
        degs = [d for d, n in self.dims.items() if n]
        return max(degs) if degs else NEG_INF

    @property
    def inf(self):
        degs = [d for d, n in self.dims.items() if n]
        return min(degs) if degs else POS_INF

    @property
    def champ(self):
        if self.sup is NEG_INF:
            return None
        return self.sup - self.inf

    def is_acyclic(self) -> bool:
        return not any(self.dims.values())

    def project(self, i: int, z) -> np.ndarray:
        """Class coordinates of a cocycle z in degree i."""
        Z = self.cycle_basis.get(i)
        if Z is None or self.dim(i) == 0:
            if Z is not None:
                coords = Z.coordinates(z)
                if coords is None:
                    raise ValueError(f"vector is not a cocycle in degree {i}")
            return np.zeros(self.dim(i), dtype=np.int64)
        coords = Z.coordinates(z)
        if coords is None:
            raise ValueError(f"vector is not a cocycle in degree {i}")
        return la.matmul(self.class_proj[i], coords, self.p)

    def rep(self, i: int, coords) -> np.ndarray:
        return la.matmul(self.reps[i], coords, self.p)


def cohomology(M, with_action: bool = True) -> CohomologyData:
    """H(M) with canonical representatives; M is a DGModule or a KComplex.

    For a DGModule the induced right action of H(R) on H(M) is computed by
    acting on representatives and projecting.
    """
    p = M.p
    dims, reps, cyc, cproj = {}, {}, {}, {}
    for i in M.degrees():
        Z = la.kernel(M.diff_mat(i), p)
        dprev = M.diff_mat(i - 1)
        B = la.span(dprev.T, M.dim(i), p) if M.dim(i - 1) else la.span(la.zeros(0, M.dim(i)), M.dim(i), p)
        # coordinates of the boundary space inside the cycle space
        bc = []
        for row in B.basis:
            c = Z.coordinates(row)
            if c is None:
                raise RuntimeError("boundary is not a cycle; differential tables corrupt")
            bc.append(c)
        Bin = la.span(bc if bc else la.zeros(0, Z.dim), Z.dim, p)
        proj, sect = la.quotient_basis(Bin)
        h = proj.shape[0]
        if h == 0:
            cyc[i] = Z
            continue
        dims[i] = h
        reps[i] = la.matmul(Z.basis.T, sect, p)  # columns are representatives
        cyc[i] = Z
        cproj[i] = proj
    data = CohomologyData(p, dims, reps, cyc, cproj)
    if with_action and isinstance(M, DGModule):
        _fill_action(M, data)
    return data


def algebra_cohomology(R: DGAlgebra) -> CohomologyData:
    """H(R) with its multiplicative structure, cached on the algebra."""
    if "coh" not in R._memo:
        R._memo["coh"] = cohomology(R.regular_module())
    return R._memo["coh"]


def _fill_action(M: DGModule, data: CohomologyData):
    cohR = algebra_cohomology(M.algebra) if M is not M.algebra.regular_module() else data
    p = M.p
    for i, hi in data.dims.items():
        for j, hj in cohR.dims.items():
            if data.dim(i + j) == 0:
                continue
            t = np.zeros((hi, hj, data.dim(i + j)), dtype=np.int64)
            for a in range(hi):
                ma = data.reps[i][:, a]
                for b in range(hj):
                    rb = cohR.reps[j][:, b]
                    t[a, b] = data.project(i + j, M.action(ma, i, rb, j))
            data.action[(i, j)] = t


def cohomology_map(f: DGMorphism, i: int, coh_src: CohomologyData, coh_tgt: CohomologyData) -> np.ndarray:
    """Matrix of H^i(f) in the chosen class bases."""
    hs, ht = coh_src.dim(i), coh_tgt.dim(i)
    if hs == 0 or ht == 0:
        return la.zeros(ht, hs)
    cols = [coh_tgt.project(i, f.apply(coh_src.reps[i][:, a], i)) for a in range(hs)]
    return np.stack(cols, axis=1)


def sup(M: DGModule):
    return cohomology(M, with_action=False).sup


def inf(M: DGModule):
    return cohomology(M, with_action=False).inf


def heart_module(M: DGModule, i: int, coh: CohomologyData | None = None) -> hk.FDModule:
    """H^i(M) as a right module over H0 = H0(R)."""
    hd = hk.heart_of(M.algebra)
    coh = coh or cohomology(M)
    h = coh.dim(i)
    action = np.zeros((hd.h0.dim, h, h), dtype=np.int64)
    if h:
        cohR = algebra_cohomology(M.algebra)
        # H0 basis classes are exactly cohR's degree-zero classes
        t = coh.action.get((i, 0))
        if t is None:
            t = np.zeros((h, hd.h0.dim, h), dtype=np.int64)
        for b in range(hd.h0.dim):
            action[b] = t[:, b, :].T
    return hk.FDModule(hd.h0, h, action, label=f"H^{i}({M.label})")


# ---------------------------------------------------------------------------
# shift, cone, truncation


def shift(M: DGModule, n: int) -> DGModule:
    """M[n] with (M[n])^i = M^{i+n} and d = (-1)^n d_M."""
    if n == 0:
        return M
    sign = -1 if n % 2 else 1
    dims = {i - n: d for i, d in M.dims.items()}
    diff = {i - n: (sign * m) % M.p for i, m in M.diff.items()}
    act = {(i - n, j): t for (i, j), t in M.act.items()}
    return DGModule(M.algebra, dims, diff, act, label=f"{M.label}[{n}]")


def shift_morphism(f: DGMorphism, n: int) -> DGMorphism:
    return DGMorphism(shift(f.source, n), shift(f.target, n), {i - n: b for i, b in f.blocks.items()})


def cone(f: DGMorphism):
    """Mapping cone with the inclusion of the target and projection to M[1].

    C^i = N^i + M^{i+1}, d(n, m) = (d n + f m, -d m); the action is
    componentwise.  Returns (C, include: N -> C, project: C -> M[1]).
    """
    M, N, p = f.source, f.target, f.p
    R = M.algebra
    degs = sorted(set(N.degrees()) | {i - 1 for i in M.degrees()})
    dims = {i: N.dim(i) + M.dim(i + 1) for i in degs}
    diff, act = {}, {}
    for i in degs:
        rN, rM = N.dim(i + 1), M.dim(i + 2)
        cN, cM = N.dim(i), M.dim(i + 1)
        d = la.zeros(rN + rM, cN + cM)
        d[:rN, :cN] = N.diff_mat(i)
        d[:rN, cN:] = f.block(i + 1)
        d[rN:, cN:] = (-M.diff_mat(i + 1)) % p
        diff[i] = d
        for j in R.degrees():
            tN = N.act_tensor(i, j)
            tM = M.act_tensor(i + 1, j)
            t = np.zeros((cN + cM, R.dim(j), N.dim(i + j) + M.dim(i + j + 1)), dtype=np.int64)
            t[:cN, :, : N.dim(i + j)] = tN
            t[cN:, :, N.dim(i + j):] = tM
            act[(i, j)] = t
    C = DGModule(R, dims, diff, act, label=f"cone({f.label or f.source.label + '->' + f.target.label})")
    inc = DGMorphism(N, C, {i: np.concatenate([la.eye(N.dim(i)), la.zeros(M.dim(i + 1), N.dim(i))]) for i in degs if N.dim(i) or M.dim(i + 1)})
    M1 = shift(M, 1)
    prj = DGMorphism(C, M1, {i: np.concatenate([la.zeros(M.dim(i + 1), N.dim(i)), la.eye(M.dim(i + 1))], axis=1) for i in degs if N.dim(i) or M.dim(i + 1)})
    return C, inc, prj


def cocone(f: DGMorphism):
    """cone(f)[-1] with its strict projection onto the source of f.

    For f : P -> M this produces the triangle  cocone -> P -> M  used by
    resolution steps; returns (cocone, project: cocone -> P).
    """
    C, _, _ = cone(f)
    N = shift(C, -1)
    N.label = f"cocone({f.label or f.source.label + '->' + f.target.label})"
    P = f.source
    blocks = {}
    for i in N.degrees():
        cM = f.target.dim(i - 1)
        blocks[i] = np.concatenate([la.zeros(P.dim(i), cM), la.eye(P.dim(i))], axis=1)
    return N, DGMorphism(N, P, blocks)


def truncate(M: DGModule, n: int, side: str):
    """Smart truncation for the standard t-structure.

    side='below' is the DG-submodule with components M^i for i < n and
    ker(d_n) in degree n, returned with its inclusion; side='above' is the
    quotient by it, returned with the projection.
    """
    p = M.p
    R = M.algebra
    if side == "below":
        Z = la.kernel(M.diff_mat(n), p)
        incl = {i: la.eye(M.dim(i)) for i in M.degrees() if i < n}
        if Z.dim:
            incl[n] = Z.basis.T.copy()
        dims = {i: M.dim(i) for i in M.degrees() if i < n}
        if Z.dim:
            dims[n] = Z.dim
        diff = {}
        for i in [d for d in dims if d < n]:
            if i + 1 < n:
                diff[i] = M.diff_mat(i)
            elif i + 1 == n and Z.dim:
                cols = la.matmul(M.diff_mat(i), la.eye(M.dim(i)), p)
                coords = la.solve_many(Z.basis.T, cols, p)
                if coords is None:
                    raise RuntimeError("truncation: image of d is not inside the cycles")
                diff[i] = coords
        act = {}
        for i in dims:
            for j in R.degrees():
                k = i + j
                if k not in dims and k != n:
                    continue
                src = incl[i]
                t = np.zeros((dims[i], R.dim(j), dims.get(k, 0)), dtype=np.int64)
                if dims.get(k, 0) == 0:
                    continue
                for a in range(dims[i]):
                    va = src[:, a]
                    for b in range(R.dim(j)):
                        img = M.action(va, i, la.eye(R.dim(j))[b], j)
                        if k == n:
                            c = la.solve(incl[n], img, p) if Z.dim else np.zeros(0, dtype=np.int64)
                            if c is None:
                                raise RuntimeError("truncation: submodule not action-stable")
                            t[a, b] = c
                        else:
                            t[a, b] = img
                act[(i, j)] = t
        S = DGModule(R, dims, diff, act, label=f"trunc<= {n}({M.label})")
        return S, DGMorphism(S, M, {i: v for i, v in incl.items()})
    if side == "above":
        Z = la.kernel(M.diff_mat(n), p)
        proj_n, sect_n = la.quotient_basis(Z)
        q = proj_n.shape[0]
        dims = {i: M.dim(i) for i in M.degrees() if i > n}
        if q:
            dims[n] = q
        proj = {i: la.eye(M.dim(i)) for i in M.degrees() if i > n}
        if q:
            proj[n] = proj_n
        diff = {}
        if q:
            diff[n] = la.matmul(M.diff_mat(n), sect_n, p)
        for i in [d for d in dims if d > n]:
            diff[i] = M.diff_mat(i)
        act = {}
        for i in dims:
            for j in R.degrees():
                k = i + j
                if dims.get(k, 0) == 0 or dims.get(i, 0) == 0:
                    continue
                t = np.zeros((dims[i], R.dim(j), dims[k]), dtype=np.int64)
                sect_i = sect_n if i == n else la.eye(M.dim(i))
                for a in range(dims[i]):
                    va = sect_i[:, a]
                    for b in range(R.dim(j)):
                        img = M.action(va, i, la.eye(R.dim(j))[b], j)
                        t[a, b] = la.matmul(proj[k], img, p)
                act[(i, j)] = t
        Q = DGModule(R, dims, diff, act, label=f"trunc> {n}({M.label})")
        return Q, DGMorphism(M, Q, {i: v for i, v in proj.items()})
    raise ValueError("side must be 'below' or 'above'")


def is_quasi_iso(f: DGMorphism) -> bool:
    C, _, _ = cone(f)
    return cohomology(C, with_action=False).is_acyclic()


def is_acyclic(M: DGModule) -> bool:
    return cohomology(M, with_action=False).is_acyclic()


# ---------------------------------------------------------------------------
# free modules


def free_module(R: DGAlgebra, gen_degrees: list[int], twists: dict | None = None, label="") -> DGModule:
    """⊕_g R[-s_g] for generator degrees s_g, with optional lower-triangular
    twists: twists[(h, g)] is an R-vector in degree s_g + 1 - s_h giving the
    e_h-coefficient of d(e_g).  Without twists this is a plain free module.

    Basis of degree i: pairs (g, b) with b running over R^{i - s_g}, grouped
    by generator in list order.
    """
    p = R.p
    twists = twists or {}
    degs = sorted({s + d for s in gen_degrees for d in R.degrees()})
    offs = {}
    dims = {}
    for i in degs:
        off = 0
        for g, s in enumerate(gen_degrees):
            offs[(i, g)] = off
            off += R.dim(i - s)
        dims[i] = off
    dims = {i: n for i, n in dims.items() if n}
    diff = {}
    for i in degs:
        if dims.get(i, 0) == 0 or dims.get(i + 1, 0) == 0:
            continue
        d = la.zeros(dims[i + 1], dims[i])
        for g, s in enumerate(gen_degrees):
            nb = R.dim(i - s)
            if nb == 0:
                continue
            c0 = offs[(i, g)]
            sign = -1 if s % 2 else 1
            blk = (sign * R.diff_mat(i - s)) % p
            if i + 1 - s <= 0 and R.dim(i + 1 - s):
                d[offs[(i + 1, g)] : offs[(i + 1, g)] + R.dim(i + 1 - s), c0 : c0 + nb] = blk
            for h, sh in enumerate(gen_degrees):
                z = twists.get((h, g))
                if z is None:
                    continue
                # d(e_g . b) includes e_h . (z b)
                zdeg = s + 1 - sh
                mat = R.left_mult_matrix(z, zdeg, i - s)
                rows = R.dim(i + 1 - sh)
                if rows:
                    r0 = offs[(i + 1, h)]
                    d[r0 : r0 + rows, c0 : c0 + nb] = (d[r0 : r0 + rows, c0 : c0 + nb] + mat) % p
        diff[i] = d
    act = {}
    for i in degs:
        if dims.get(i, 0) == 0:
            continue
        for j in R.degrees():
            k = i + j
            if dims.get(k, 0) == 0:
                continue
            t = np.zeros((dims[i], R.dim(j), dims[k]), dtype=np.int64)
            for g, s in enumerate(gen_degrees):
                nb, nk = R.dim(i - s), R.dim(k - s)
                if nb == 0 or nk == 0:
                    continue
                t[offs[(i, g)] : offs[(i, g)] + nb, :, offs[(k, g)] : offs[(k, g)] + nk] = R.mult_tensor(i - s, j)
            act[(i, j)] = t
    F = DGModule(R, dims, diff, act, label=label or f"free{gen_degrees}")
    F._gen_degrees = gen_degrees
    F._offsets = offs
    return F


def free_generator_offset(F: DGModule, g: int) -> int:
    s = F._gen_degrees[g]
    return F._offsets[(s, g)]


def free_map(F: DGModule, M: DGModule, images: list[np.ndarray]) -> DGMorphism:
    """The R-linear map F -> M with e_g . b -> images[g] . b."""
    p = F.p
    R = F.algebra
    blocks = {}
    for i in F.degrees():
        b = la.zeros(M.dim(i), F.dim(i))
        for g, s in enumerate(F._gen_degrees):
            nb = R.dim(i - s)
            if nb == 0 or M.dim(i) == 0:
                continue
            c0 = F._offsets[(i, g)]
            b[:, c0 : c0 + nb] = np.stack(
                [M.action(images[g], s, la.eye(nb)[t], i - s) for t in range(nb)], axis=1
            )
        blocks[i] = b
    return DGMorphism(F, M, blocks)


# ---------------------------------------------------------------------------
# complexes over the base field (Hom and tensor outputs)


@dataclass
class KComplex:
    """A bounded complex of GF(p) vector spaces."""

    p: int
    dims: dict[int, int]
    diff: dict[int, np.ndarray]
    label: str = ""
    basis: dict = field(default_factory=dict, repr=False)  # per-degree MapSpace or similar

    def dim(self, i: int) -> int:
        return self.dims.get(i, 0)

    def degrees(self) -> list[int]:
        return sorted(d for d, n in self.dims.items() if n)

    def diff_mat(self, i: int) -> np.ndarray:
        d = self.diff.get(i)
        if d is None:
            d = la.zeros(self.dim(i + 1), self.dim(i))
        return d


def hom_complex(M: DGModule, N: DGModule, window: tuple[int, int] | None = None) -> KComplex:
    """The complex of R-linear graded maps M -> N.

    Degree-n component: families phi_i : M^i -> N^{i+n} with
    phi(m . r) = phi(m) . r; differential d(phi) = d_N phi - (-1)^n phi d_M.
    """
    if M.algebra is not N.algebra and M.algebra.dims != N.algebra.dims:
        raise ValueError("hom_complex: modules over different algebras")
    p = M.p
    R = M.algebra
    if not M.degrees() or not N.degrees():
        return KComplex(p, {}, {}, label="Hom")
    nlo = N.lo() - M.hi()
    nhi = N.hi() - M.lo()
    if window:
        nlo, nhi = max(nlo, window[0] - 1), min(nhi, window[1] + 1)
    spaces: dict[int, la.MapSpace] = {}
    layouts: dict[int, list] = {}
    for n in range(nlo, nhi + 1):
        spaces[n], layouts[n] = _hom_component(M, N, n)
    dims = {n: sp.dim for n, sp in spaces.items() if sp.dim}
    diff = {}
    for n in range(nlo, nhi):
        src, tgt = spaces[n], spaces[n + 1]
        if src.dim == 0 or tgt.dim == 0:
            continue
        sign = -1 if n % 2 else 1
        cols = []
        for k in range(src.dim):
            phi = _unflatten(src.basis[k], layouts[n], M, N, n)
            dphi = {}
            for i, _, _ in layouts[n + 1]:
                a = la.matmul(N.diff_mat(i + n), phi.get(i, la.zeros(N.dim(i + n), M.dim(i))), p)
                b = la.matmul(phi.get(i + 1, la.zeros(N.dim(i + 1 + n), M.dim(i + 1))), M.diff_mat(i), p)
                dphi[i] = (a - sign * b) % p
            cols.append(tgt.coords(_flatten(dphi, layouts[n + 1])))
        diff[n] = np.stack(cols, axis=1)
    hc = KComplex(p, dims, diff, label=f"Hom({M.label},{N.label})")
    hc.basis = {"spaces": spaces, "layouts": layouts, "source": M, "target": N}
    return hc


def _hom_component(M: DGModule, N: DGModule, n: int):
    """Canonical basis of degree-n R-linear maps with its block layout."""
    p = M.p
    R = M.algebra
    layout = []  # (i, rows, cols) for blocks phi_i with both sides nonzero
    for i in M.degrees():
        if N.dim(i + n):
            layout.append((i, N.dim(i + n), M.dim(i)))
    total = sum(r * c for _, r, c in layout)
    if total == 0:
        return la.MapSpace.from_rows(p, 1, 1, la.zeros(0, 1)), layout
    offs = {}
    off = 0
    for i, r, c in layout:
        offs[i] = off
        off += r * c
    rows = []
    for i in M.degrees():
        for j in R.degrees():
            k = i + j
            tgt_rows = N.dim(k + n)
            if M.dim(i) == 0 or R.dim(j) == 0:
                continue
            if tgt_rows == 0 and N.dim(i + n) == 0:
                continue
            for a in range(M.dim(i)):
                for b in range(R.dim(j)):
                    # phi_{i+j}(m_a . r_b) - phi_i(m_a) . r_b = 0
                    row_block = np.zeros((tgt_rows, total), dtype=np.int64) if tgt_rows else None
                    if tgt_rows == 0:
                        continue
                    v = M.act_tensor(i, j)[a, b]  # vector in M^{i+j}
                    if k in offs:
                        r_, c_ = N.dim(k + n), M.dim(k)
                        blk = np.kron(la.eye(r_), v.reshape(1, -1))
                        row_block[:, offs[k] : offs[k] + r_ * c_] = blk
                    if i in offs and N.dim(i + n):
                        Rb = N.right_mult_matrix(la.eye(R.dim(j))[b], j, i + n)  # N^{i+n} -> N^{k+n}
                        sel = np.zeros((M.dim(i), 1), dtype=np.int64)
                        sel[a, 0] = 1
                        blk = np.kron(Rb, sel.T)
                        row_block[:, offs[i] : offs[i] + N.dim(i + n) * M.dim(i)] = (
                            row_block[:, offs[i] : offs[i] + N.dim(i + n) * M.dim(i)] - blk
                        ) % p
                    rows.append(row_block % p)
    if rows:
        big = np.concatenate(rows, axis=0)
        ker = la.kernel(big, p)
        basis = ker.basis
    else:
        basis = la.eye(total)
    sp = la.MapSpace.from_rows(p, 1, total, basis)
    return sp, layout


def _unflatten(vec, layout, M, N, n):
    out = {}
    off = 0
    for i, r, c in layout:
        out[i] = vec[off : off + r * c].reshape(r, c)
        off += r * c
    return out


def _flatten(blocks: dict, layout):
    parts = []
    for i, r, c in layout:
        parts.append(np.asarray(blocks.get(i, np.zeros((r, c), dtype=np.int64))).reshape(-1))
    return np.concatenate(parts) if parts else np.zeros(0, dtype=np.int64)


def hom_component_matrices(hc: KComplex, n: int) -> list[dict[int, np.ndarray]]:
    """The basis of degree-n maps as per-degree block dictionaries."""
    spaces, layouts = hc.basis["spaces"], hc.basis["layouts"]
    M, N = hc.basis["source"], hc.basis["target"]
    if n not in spaces:
        return []
    sp = spaces[n]
    return [_unflatten(sp.basis[k], layouts[n], M, N, n) for k in range(sp.dim)]


def tensor_complex(M: DGModule, L: DGModule, window: tuple[int, int] | None = None) -> KComplex:
    """(M ⊗_R L) as a complex over k, for M a right module over R and L a
    right module over R^op (i.e. a left R-module).

    Degree n is the quotient of ⊕_i M^i ⊗ L^{n-i} by the action relations
    (m r) ⊗ l - (-1)^{|r||l|} m ⊗ (l *op r).
    """
    R = M.algebra
    Rop = L.algebra
    if R.opposite().dims != Rop.dims and R.dims != Rop.dims:
        raise ValueError("tensor_complex: side mismatch")
    p = M.p
    if not M.degrees() or not L.degrees():
        return KComplex(p, {}, {}, label="Tensor")
    nlo, nhi = M.lo() + L.lo(), M.hi() + L.hi()
    if window:
        nlo, nhi = max(nlo, window[0] - 1), min(nhi, window[1] + 1)
    layouts, projs, sects = {}, {}, {}
    for n in range(nlo, nhi + 1):
        layout = [(i, M.dim(i), L.dim(n - i)) for i in M.degrees() if L.dim(n - i)]
        layouts[n] = layout
        total = sum(a * b for _, a, b in layout)
        if total == 0:
            continue
        offs = {}
        off = 0
        for i, a, b in layout:
            offs[i] = off
            off += a * b
        rels = []
        for i in M.degrees():
            for j in Rop.degrees():
                # (m r) ⊗ l - (-1)^{|r||l|} m ⊗ (l *op r),  r in R^j, l in L^t
                t = n - i - j
                if L.dim(t) == 0 or R.dim(j) == 0 or M.dim(i) == 0:
                    continue
                for mi in range(M.dim(i)):
                    for rj in range(R.dim(j)):
                        mr = M.act_tensor(i, j)[mi, rj]  # in M^{i+j}
                        for lt in range(L.dim(t)):
                            rel = np.zeros(total, dtype=np.int64)
                            if (i + j) in offs and L.dim(n - i - j):
                                o = offs[i + j]
                                bdim = L.dim(n - i - j)
                                rel[o + np.arange(M.dim(i + j)) * bdim + lt] = mr
                            lr = L.act_tensor(t, j)[lt, rj]  # l *op r in L^{t+j}
                            sign = -1 if (j * t) % 2 else 1
                            if i in offs and L.dim(n - i):
                                o = offs[i]
                                bdim = L.dim(n - i)
                                rel[o + mi * bdim + np.arange(L.dim(t + j))] = (
                                    rel[o + mi * bdim + np.arange(L.dim(t + j))] - sign * lr
                                ) % p
                            rels.append(rel % p)
        sub = la.span(rels if rels else la.zeros(0, total), total, p)
        projs[n], sects[n] = la.quotient_basis(sub)
    dims = {n: projs[n].shape[0] for n in projs if projs[n].shape[0]}
    diff = {}
    for n in sorted(projs):
        if n + 1 not in projs or dims.get(n, 0) == 0 or dims.get(n + 1, 0) == 0:
            continue
        # big differential then conjugate by section/projection
        cols = []
        for col in range(dims[n]):
            vec = sects[n][:, col]
            img = np.zeros(sum(a * b for _, a, b in layouts[n + 1]), dtype=np.int64)
            offs_n1 = {}
            off = 0
            for i, a, b in layouts[n + 1]:
                offs_n1[i] = off
                off += a * b
            off = 0
            for i, a, b in layouts[n]:
                blk = vec[off : off + a * b].reshape(a, b)
                off += a * b
                # d_M ⊗ 1
                dm = la.matmul(M.diff_mat(i), blk, p)
                if (i + 1) in offs_n1 and L.dim(n - i):
                    o = offs_n1[i + 1]
                    img[o : o + dm.size] = (img[o : o + dm.size] + dm.reshape(-1)) % p
                # (-1)^i 1 ⊗ d_L
                dl = la.matmul(blk, L.diff_mat(n - i).T, p)
                sign = -1 if i % 2 else 1
                if i in offs_n1 and L.dim(n + 1 - i):
                    o = offs_n1[i]
                    img[o : o + dl.size] = (img[o : o + dl.size] + sign * dl.reshape(-1)) % p
            cols.append(la.matmul(projs[n + 1], img, p))
        diff[n] = np.stack(cols, axis=1)
    return KComplex(p, dims, diff, label=f"({M.label})⊗({L.label})")


# ---------------------------------------------------------------------------
# psi, heart embedding, duality


def psi(R: DGAlgebra, K: hk.FDModule) -> DGModule:
    """The DG-injective module Hom_{R0}(R, K) for a right R0-module K.

    Degree i is Hom_{R0}(R^{-i}, K); the right action is (phi . r)(s) =
    phi(r s) and the differential is -(-1)^{|phi|} phi d_R.  H^0 is the
    submodule of K killed by the 0-boundaries.
    """
    hd = hk.heart_of(R)
    if K.algebra.dim != hd.r0.dim or np.any(K.algebra.mult != hd.r0.mult):
        raise ValueError("psi: K is not a module over the degree-zero subalgebra")
    p = R.p
    spaces: dict[int, la.MapSpace] = {}
    for i in range(0, -min(R.degrees()) + 1):
        src = -i
        if R.dim(src) == 0:
            continue
        rows, cols = K.dim, R.dim(src)
        if rows == 0:
            continue
        constraints = []
        for b in range(hd.r0.dim):
            # phi(s . e_b) = phi(s) . e_b
            Rb = R.right_mult_matrix(la.eye(hd.r0.dim)[b], 0, src)  # R^src -> R^src
            Kb = K.action[b]
            constraints.append((np.kron(la.eye(rows), Rb.T) - np.kron(Kb, la.eye(cols))) % p)
        if constraints:
            ker = la.kernel(np.concatenate(constraints, axis=0), p)
            basis = ker.basis
        else:
            basis = la.eye(rows * cols)
        spaces[i] = la.MapSpace.from_rows(p, rows, cols, basis)
    dims = {i: sp.dim for i, sp in spaces.items() if sp.dim}
    diff = {}
    for i in sorted(spaces):
        if spaces.get(i) is None or spaces.get(i + 1) is None:
            continue
        if dims.get(i, 0) == 0 or dims.get(i + 1, 0) == 0:
            continue
        sign = -1 if i % 2 else 1  # d(phi) = -(-1)^i phi d_R
        cols = []
        for k in range(spaces[i].dim):
            phi = spaces[i].matrix(k)
            dphi = (-sign * la.matmul(phi, R.diff_mat(-i - 1), p)) % p
            cols.append(spaces[i + 1].coords(dphi))
        diff[i] = np.stack(cols, axis=1)
    act = {}
    for i in sorted(spaces):
        if dims.get(i, 0) == 0:
            continue
        for j in R.degrees():
            k = i + j
            if dims.get(k, 0) == 0:
                continue
            t = np.zeros((dims[i], R.dim(j), dims[k]), dtype=np.int64)
            for a in range(dims[i]):
                phi = spaces[i].matrix(a)
                for b in range(R.dim(j)):
                    Lb = R.left_mult_matrix(la.eye(R.dim(j))[b], j, -k)  # R^{-k} -> R^{-i}
                    t[a, b] = spaces[k].coords(la.matmul(phi, Lb, p))
            act[(i, j)] = t
    M = DGModule(R, dims, diff, act, label=f"psi({K.label})")
    M._psi_spaces = spaces
    M._psi_K = K
    return M


def psi_h0_identification(R: DGAlgebra, I: DGModule):
    """For I = psi(R, K): the matrix sending H^0(I)-classes into K,
    with image the annihilator of the boundaries, plus that annihilator."""
    hd = hk.heart_of(R)
    K = I._psi_K
    coh = cohomology(I, with_action=False)
    pi_mod, ann = hk.pi_shriek(hd, K)
    cols = []
    for t in range(coh.dim(0)):
        phi = np.zeros(I.dim(0), dtype=np.int64)
        phi[:] = coh.reps[0][:, t]
        mat = I._psi_spaces[0]
        m = np.zeros((K.dim, R.dim(0)), dtype=np.int64)
        for k in range(mat.dim):
            m = (m + int(phi[k]) * mat.matrix(k)) % R.p
        cols.append(la.matmul(m, R.unit, R.p))
    into_K = np.stack(cols, axis=1) if cols else la.zeros(K.dim, 0)
    return into_K, ann, pi_mod


def heart_embed(R: DGAlgebra, N: hk.FDModule) -> DGModule:
    """An H0-module as a DG-module concentrated in degree zero."""
    hd = hk.heart_of(R)
    if N.algebra.dim != hd.h0.dim or np.any(N.algebra.mult != hd.h0.mult):
        raise ValueError("heart_embed expects a module over H0")
    if N.dim == 0:
        return zero_module(R)
    act = {}
    t = np.zeros((N.dim, R.dim(0), N.dim), dtype=np.int64)
    for b in range(R.dim(0)):
        t[:, b, :] = N.action_of(la.matmul(hd.project, la.eye(R.dim(0))[b], R.p)).T
    act[(0, 0)] = t
    return DGModule(R, {0: N.dim}, {}, act, label=f"heart({N.label})")


def dualize(M: DGModule) -> DGModule:
    """The k-dual as a DG-module over the opposite algebra.

    D(M)^i = Hom_k(M^{-i}, k), d(f) = -(-1)^{|f|} f d_M and
    (f . a)(m) = (-1)^{|a|(|f|+1)} f(m a), the unique sign (up to a global
    convention) making the right action of the opposite algebra satisfy the
    module Leibniz rule against this differential.
    """
    R = M.algebra
    op = R.opposite()
    p = M.p
    dims = {-i: d for i, d in M.dims.items()}
    diff = {}
    for i in dims:
        # d_D^i : D^i -> D^{i+1} is -(-1)^i (d_M^{-i-1})^T
        dm = M.diff_mat(-i - 1)
        if dm.size:
            sign = -1 if i % 2 else 1
            diff[i] = (-sign * dm.T) % p
    act = {}
    for i in dims:
        for j in op.degrees():
            k = i + j
            if dims.get(k, 0) == 0 or dims.get(i, 0) == 0:
                continue
            tM = M.act_tensor(-k, j)  # (M^{-k}, R^j, M^{-i})
            if tM.size == 0:
                continue
            sign = -1 if (j * (i + 1)) % 2 else 1
            act[(i, j)] = (sign * np.transpose(tM, (2, 1, 0))) % p
    return DGModule(op, dims, diff, act, label=f"D({M.label})")


def double_dual_map(M: DGModule) -> DGMorphism:
    """The canonical strict isomorphism M -> D(D(M))."""
    dd = dualize(dualize(M))
    dd = DGModule(M.algebra, dd.dims, dd.diff, dd.act, label=dd.label)
    blocks = {}
    for i in M.degrees():
        sign = -1 if i % 2 else 1
        blocks[i] = (sign * la.eye(M.dim(i))) % M.p
    return DGMorphism(M, dd, blocks)


def direct_sum_modules(mods: list[DGModule], label="") -> tuple[DGModule, list[DGMorphism]]:
    R = mods[0].algebra
    p = mods[0].p
    degs = sorted({i for m in mods for i in m.degrees()})
    dims = {i: sum(m.dim(i) for m in mods) for i in degs}
    diff, act = {}, {}
    for i in degs:
        if dims.get(i + 1, 0):
            d = la.zeros(dims[i + 1], dims[i])
            r0 = 0
            c0 = 0
            for m in mods:
                d[r0 : r0 + m.dim(i + 1), c0 : c0 + m.dim(i)] = m.diff_mat(i)
                r0 += m.dim(i + 1)
                c0 += m.dim(i)
            diff[i] = d
        for j in R.degrees():
            k = i + j
            if dims.get(k, 0) == 0:
                continue
            t = np.zeros((dims[i], R.dim(j), dims[k]), dtype=np.int64)
            a0 = 0
            c0 = 0
            for m in mods:
                t[a0 : a0 + m.dim(i), :, c0 : c0 + m.dim(k)] = m.act_tensor(i, j)
                a0 += m.dim(i)
                c0 += m.dim(k)
            act[(i, j)] = t
    S = DGModule(R, dims, diff, act, label=label or "⊕")
    incls = []
    for idx, m in enumerate(mods):
        blocks = {}
        for i in m.degrees():
            off = sum(mm.dim(i) for mm in mods[:idx])
            blk = la.zeros(dims[i], m.dim(i))
            blk[off : off + m.dim(i)] = la.eye(m.dim(i))
            blocks[i] = blk
        incls.append(DGMorphism(m, S, blocks))
    return S, incls
