"""Dense exact linear algebra over a prime field GF(p).

Matrices are numpy int64 arrays with entries reduced mod p; a matrix of
shape (m, n) represents a linear map k^n -> k^m acting on column vectors.
Subspaces are stored by their unique reduced row echelon basis, so subspace
equality is plain array comparison.

p must be an odd prime; callers that rely on the trace-form radical
computation additionally need p larger than the dimension of the algebra,
which is enforced where the algebra is built.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

DEFAULT_PRIME = 32003


def as_field(m, p: int) -> np.ndarray:
    return np.asarray(m, dtype=np.int64) % p


def zeros(rows: int, cols: int) -> np.ndarray:
    return np.zeros((rows, cols), dtype=np.int64)


def eye(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


def matmul(a, b, p: int) -> np.ndarray:
    return (np.asarray(a, dtype=np.int64) @ np.asarray(b, dtype=np.int64)) % p


def rref(m, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and pivot column indices."""
    m = as_field(m, p).copy()
    rows, cols = m.shape
    r = 0
    pivots: list[int] = []
    for c in range(cols):
        if r == rows:
            break
        pr = None
        for k in range(r, rows):
            if m[k, c]:
                pr = k
                break
        if pr is None:
            continue
        if pr != r:
            m[[r, pr]] = m[[pr, r]]
        m[r] = (m[r] * pow(int(m[r, c]), p - 2, p)) % p
        col = m[:, c].copy()
        col[r] = 0
        m = (m - np.outer(col, m[r])) % p
        pivots.append(c)
        r += 1
    return m, pivots


def rank(m, p: int) -> int:
    return len(rref(m, p)[1])


@dataclass(frozen=True)
class Subspace:
    """A subspace of k^ambient_dim given by its canonical RREF row basis."""

    p: int
    ambient_dim: int
    basis: np.ndarray  # (dim, ambient_dim), reduced row echelon, full row rank

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def contains(self, v) -> bool:
        return self.coordinates(v) is not None

    def coordinates(self, v):
        """Coordinates of v in the RREF basis, or None if v is outside."""
        v = as_field(v, self.p)
        _, piv = rref(self.basis, self.p)
        coords = v[piv] if piv else np.zeros(0, dtype=np.int64)
        residual = (v - coords @ self.basis) % self.p if self.dim else v
        if np.any(residual):
            return None
        return coords

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Subspace)
            and self.ambient_dim == other.ambient_dim
            and self.basis.shape == other.basis.shape
            and np.array_equal(self.basis, other.basis)
        )


def span(vectors, ambient_dim: int, p: int) -> Subspace:
    """Canonical subspace spanned by the given row vectors."""
    if ambient_dim == 0:
        return Subspace(p, 0, zeros(0, 0))
    vs = as_field(vectors, p).reshape(-1, ambient_dim)
    rr, piv = rref(vs, p)
    return Subspace(p, ambient_dim, rr[: len(piv)].copy())


def kernel(m, p: int) -> Subspace:
    """{v : m v = 0} with canonical basis."""
    m = as_field(m, p)
    rows, cols = m.shape
    rr, piv = rref(m, p)
    free = [c for c in range(cols) if c not in piv]
    basis = zeros(len(free), cols)
    for t, c in enumerate(free):
        basis[t, c] = 1
        for i, pc in enumerate(piv):
            basis[t, pc] = (-rr[i, c]) % p
    return span(basis, cols, p)


def image(m, p: int) -> Subspace:
    """Column space of m as a canonical subspace of k^rows."""
    return span(as_field(m, p).T, m.shape[0], p)


def solve(m, b, p: int):
    """Some x with m x = b, or None when the system is inconsistent."""
    m = as_field(m, p)
    b = as_field(b, p).reshape(-1)
    if b.shape[0] != m.shape[0]:
        raise ValueError(f"solve: {m.shape[0]} rows vs rhs of length {b.shape[0]}")
    aug = np.concatenate([m, b.reshape(-1, 1)], axis=1)
    rr, piv = rref(aug, p)
    if m.shape[1] in piv:
        return None
    x = np.zeros(m.shape[1], dtype=np.int64)
    for i, c in enumerate(piv):
        x[c] = rr[i, -1]
    return x


def quotient_basis(sub: Subspace) -> tuple[np.ndarray, np.ndarray]:
    """Projection and section for k^n -> k^n / sub.

    projection has full row rank n - dim(sub) and kernel exactly sub;
    section is a right inverse selecting the non-pivot coordinates.
    """
    p, n = sub.p, sub.ambient_dim
    _, piv = rref(sub.basis, p)
    free = [c for c in range(n) if c not in piv]
    proj = zeros(len(free), n)
    section = zeros(n, len(free))
    for t, c in enumerate(free):
        proj[t, c] = 1
        for i, pc in enumerate(piv):
            proj[t, pc] = (-sub.basis[i, c]) % p
        section[c, t] = 1
    return proj, section


def intersection(a: Subspace, b: Subspace) -> Subspace:
    """Intersection of two subspaces of the same ambient space."""
    if a.ambient_dim != b.ambient_dim or a.p != b.p:
        raise ValueError("intersection: ambient mismatch")
    if a.dim == 0 or b.dim == 0:
        return span(zeros(0, a.ambient_dim), a.ambient_dim, a.p)
    stacked = np.concatenate([a.basis.T, -b.basis.T % a.p], axis=1)
    ker = kernel(stacked, a.p)
    vecs = [(row[: a.dim] @ a.basis) % a.p for row in ker.basis]
    return span(vecs if vecs else zeros(0, a.ambient_dim), a.ambient_dim, a.p)


@dataclass
class MapSpace:
    """A subspace of Hom_k(k^cols, k^rows) with a canonical basis.

    Basis rows are row-major vectorizations in reduced row echelon form, so
    coordinates of a member map are read off at the pivot positions.
    """

    p: int
    rows: int
    cols: int
    basis: np.ndarray  # (dim, rows*cols)
    pivots: list[int]

    @classmethod
    def from_rows(cls, p: int, rows: int, cols: int, vectors) -> "MapSpace":
        sp = span(vectors if len(vectors) else zeros(0, rows * cols), rows * cols, p)
        _, piv = rref(sp.basis, p)
        return cls(p, rows, cols, sp.basis, piv)

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def matrix(self, k: int) -> np.ndarray:
        return self.basis[k].reshape(self.rows, self.cols)

    def coords(self, mat) -> np.ndarray:
        """Coordinates of a map known to lie in the space."""
        v = as_field(mat, self.p).reshape(-1)
        c = v[self.pivots] if self.pivots else np.zeros(0, dtype=np.int64)
        residual = (v - c @ self.basis) % self.p if self.dim else v
        if np.any(residual):
            raise ValueError("MapSpace.coords: map is outside the space")
        return c


def solve_many(m, rhs, p: int):
    """Solve m X = rhs columnwise; None if any column is inconsistent."""
    m = as_field(m, p)
    rhs = as_field(rhs, p)
    cols = []
    for j in range(rhs.shape[1]):
        x = solve(m, rhs[:, j], p)
        if x is None:
            return None
        cols.append(x)
    return np.stack(cols, axis=1) if cols else zeros(m.shape[1], 0)
