"""Plain-text instance format: one algebra block plus named module blocks.

The format is line-based so fixtures stay bit-exact in the repository:

    p 32003

    algebra
    degree 0 names one x
    degree -1 names e xe
    unit one
    mul x x = 0
    mul e x = xe
    mul x e = xe
    d e = x

    module M
    degree 0 names m
    d m = 0
    act m x = 0

Unspecified products, actions and differentials default to zero; products
with a unit declared as a single basis name are filled in automatically.
Blocks may instead reference builtin generators:

    algebra builtin koszul(x; k[x]/(x^2))
    module N builtin M_of(3)

parse() returns an InputDocument whose instances are validate-clean, or
raises ParseError with the offending line number.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass, field

import numpy as np

from . import battery
from . import dgcore as dg
from . import exactla as la


class ParseError(ValueError):
    def __init__(self, line_no, message):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


@dataclass
class InputDocument:
    p: int
    algebra: dg.DGAlgebra
    modules: dict[str, dg.DGModule] = field(default_factory=dict)
    algebra_ref: str | None = None  # builtin spec when referenced
    module_refs: dict[str, str] = field(default_factory=dict)

    def digest(self) -> str:
        return hashlib.sha256(emit(self).encode()).hexdigest()[:16]


_NAME = r"[A-Za-z_][A-Za-z_0-9^*]*"
_TERM = re.compile(rf"^\s*(?:(-?\d+)\s*\*\s*)?({_NAME})\s*$")


def _parse_combo(expr, names_to, line_no, p):
    """A linear combination of named basis vectors -> {name: coeff}."""
    expr = expr.strip()
    if expr == "0":
        return {}
    out = {}
    chunks = re.split(r"(?=[+-])", expr.replace(" ", ""))
    for chunk in [c for c in chunks if c]:
        sign = 1
        if chunk[0] == "+":
            chunk = chunk[1:]
        elif chunk[0] == "-":
            sign = -1
            chunk = chunk[1:]
        m = _TERM.match(chunk)
        if not m:
            raise ParseError(line_no, f"cannot parse term {chunk!r}")
        coeff = int(m.group(1)) if m.group(1) else 1
        name = m.group(2)
        if name not in names_to:
            raise ParseError(line_no, f"unknown basis name {name!r}")
        out[name] = (out.get(name, 0) + sign * coeff) % p
    return out


class _Block:
    def __init__(self, kind, name, line_no):
        self.kind = kind  # 'algebra' | 'module'
        self.name = name
        self.line_no = line_no
        self.builtin = None
        self.degrees: dict[int, list[str]] = {}
        self.unit_expr = None
        self.unit_line = 0
        self.mul: list = []  # (line, a, b, expr)
        self.diff: list = []  # (line, a, expr)
        self.act: list = []  # (line, m, r, expr)


def _lex(text):
    blocks = []
    p_val = None
    p_line = 0
    current = None
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        head = toks[0]
        if head == "p":
            if len(toks) != 2 or not re.fullmatch(r"\d+", toks[1]):
                raise ParseError(line_no, "expected 'p <prime>'")
            p_val, p_line = int(toks[1]), line_no
        elif head == "algebra":
            current = _Block("algebra", None, line_no)
            blocks.append(current)
            if len(toks) >= 2:
                if toks[1] != "builtin":
                    raise ParseError(line_no, "expected 'algebra' or 'algebra builtin <spec>'")
                current.builtin = line.split("builtin", 1)[1].strip()
        elif head == "module":
            if len(toks) < 2:
                raise ParseError(line_no, "module block needs a name")
            current = _Block("module", toks[1], line_no)
            blocks.append(current)
            if len(toks) >= 3:
                if toks[2] != "builtin":
                    raise ParseError(line_no, "expected 'module <name>' or 'module <name> builtin <spec>'")
                current.builtin = line.split("builtin", 1)[1].strip()
        elif current is None:
            raise ParseError(line_no, f"directive {head!r} outside any block")
        elif head == "degree":
            if len(toks) < 3 or toks[2] != "names":
                raise ParseError(line_no, "expected 'degree <d> names <n1> <n2> ...'")
            try:
                d = int(toks[1])
            except ValueError:
                raise ParseError(line_no, f"bad degree {toks[1]!r}")
            if d in current.degrees:
                raise ParseError(line_no, f"degree {d} declared twice")
            names = toks[3:]
            if not names:
                raise ParseError(line_no, "empty basis list")
            current.degrees[d] = names
        elif head == "unit":
            current.unit_expr = line.split(None, 1)[1]
            current.unit_line = line_no
        elif head == "mul":
            m = re.match(rf"^mul\s+({_NAME})\s+({_NAME})\s*=\s*(.+)$", line)
            if not m:
                raise ParseError(line_no, "expected 'mul <a> <b> = <combo>'")
            current.mul.append((line_no, m.group(1), m.group(2), m.group(3)))
        elif head == "d":
            m = re.match(rf"^d\s+({_NAME})\s*=\s*(.+)$", line)
            if not m:
                raise ParseError(line_no, "expected 'd <a> = <combo>'")
            current.diff.append((line_no, m.group(1), m.group(2)))
        elif head == "act":
            m = re.match(rf"^act\s+({_NAME})\s+({_NAME})\s*=\s*(.+)$", line)
            if not m:
                raise ParseError(line_no, "expected 'act <m> <r> = <combo>'")
            current.act.append((line_no, m.group(1), m.group(2), m.group(3)))
        else:
            raise ParseError(line_no, f"unknown directive {head!r}")
    return p_val, p_line, blocks


def _index_names(degrees: dict[int, list[str]], line_no):
    where = {}
    for d, names in degrees.items():
        for idx, nm in enumerate(names):
            if nm in where:
                raise ParseError(line_no, f"basis name {nm!r} declared twice")
            where[nm] = (d, idx)
    return where


def _combo_vector(combo: dict, where, dims, expect_degree, line_no, p):
    v = np.zeros(dims.get(expect_degree, 0), dtype=np.int64)
    for nm, c in combo.items():
        d, idx = where[nm]
        if d != expect_degree:
            raise ParseError(line_no, f"{nm!r} has degree {d}, expected {expect_degree}")
        v[idx] = c % p
    return v


def _build_algebra(block: _Block, p: int, seed: int) -> dg.DGAlgebra:
    if block.builtin is not None:
        return battery.builtin_algebra(block.builtin, p, seed)
    if not block.degrees:
        raise ParseError(block.line_no, "algebra block declares no basis")
    where = _index_names(block.degrees, block.line_no)
    dims = {d: len(ns) for d, ns in block.degrees.items()}
    if sum(dims.values()) >= p:
        raise ParseError(block.line_no, f"p must exceed the total dimension {sum(dims.values())}")
    if block.unit_expr is None:
        raise ParseError(block.line_no, "algebra block has no unit")
    unit_combo = _parse_combo(block.unit_expr, where, block.unit_line, p)
    unit = _combo_vector(unit_combo, where, dims, 0, block.unit_line, p)
    mult = {
        (i, j): np.zeros((dims[i], dims[j], dims.get(i + j, 0)), dtype=np.int64)
        for i in dims
        for j in dims
    }
    # unit products are automatic when the unit is a single basis name
    unit_name = None
    if len(unit_combo) == 1:
        nm, c = next(iter(unit_combo.items()))
        if c == 1:
            unit_name = nm
    if unit_name is not None:
        for nm, (d, idx) in where.items():
            iu, uidx = where[unit_name]
            t = mult[(iu, d)]
            if t.shape[2]:
                t[uidx, idx, idx] = 1
            t = mult[(d, iu)]
            if t.shape[2]:
                t[idx, uidx, idx] = 1
    for line_no, a, b, expr in block.mul:
        for nm in (a, b):
            if nm not in where:
                raise ParseError(line_no, f"unknown basis name {nm!r}")
        (ia, xa), (ib, xb) = where[a], where[b]
        combo = _parse_combo(expr, where, line_no, p)
        vec = _combo_vector(combo, where, dims, ia + ib, line_no, p)
        t = mult[(ia, ib)]
        if t.shape[2] == 0 and np.any(vec):
            raise ParseError(line_no, f"product lands in the empty degree {ia + ib}")
        if t.shape[2]:
            t[xa, xb, :] = vec
    diff = {}
    for line_no, a, expr in block.diff:
        if a not in where:
            raise ParseError(line_no, f"unknown basis name {a!r}")
        ia, xa = where[a]
        combo = _parse_combo(expr, where, line_no, p)
        vec = _combo_vector(combo, where, dims, ia + 1, line_no, p)
        if dims.get(ia + 1, 0) == 0:
            if combo:
                raise ParseError(line_no, f"differential lands in the empty degree {ia + 1}")
            continue
        d = diff.setdefault(ia, la.zeros(dims[ia + 1], dims[ia]))
        d[:, xa] = vec
    R = dg.DGAlgebra(p, dims, {k: v for k, v in mult.items() if v.size}, diff, unit, label="algebra", seed=seed)
    R.names = {d: list(ns) for d, ns in block.degrees.items()}
    report = dg.validate_algebra(R)
    if report:
        raise ParseError(block.line_no, "algebra fails validation: " + "; ".join(report[:4]))
    return R


def _build_module(block: _Block, R: dg.DGAlgebra, p: int) -> dg.DGModule:
    if block.builtin is not None:
        return battery.builtin_module(R, block.builtin)
    where = _index_names(block.degrees, block.line_no)
    dims = {d: len(ns) for d, ns in block.degrees.items()}
    if not dims:
        return dg.zero_module(R)
    alg_names = getattr(R, "names", {})
    alg_where = {nm: (d, i) for d, ns in alg_names.items() for i, nm in enumerate(ns)}
    act = {
        (i, j): np.zeros((dims[i], R.dim(j), dims.get(i + j, 0)), dtype=np.int64)
        for i in dims
        for j in R.degrees()
    }
    # unit action is automatic
    iu = None
    unit_idx = np.flatnonzero(R.unit % p)
    for i in dims:
        t = act[(i, 0)]
        if t.shape[2]:
            inv_total = 0
            for u in unit_idx:
                t[:, u, :] += int(R.unit[u]) * la.eye(dims[i])
            t %= p
    for line_no, mname, rname, expr in block.act:
        if mname not in where:
            raise ParseError(line_no, f"unknown module basis name {mname!r}")
        if rname not in alg_where:
            raise ParseError(line_no, f"unknown algebra basis name {rname!r}")
        (im, xm), (jr, xr) = where[mname], alg_where[rname]
        combo = _parse_combo(expr, where, line_no, p)
        vec = _combo_vector(combo, where, dims, im + jr, line_no, p)
        t = act[(im, jr)]
        if t.shape[2] == 0 and np.any(vec):
            raise ParseError(line_no, f"action lands in the empty degree {im + jr}")
        if t.shape[2]:
            t[xm, xr, :] = vec
    diff = {}
    for line_no, a, expr in block.diff:
        if a not in where:
            raise ParseError(line_no, f"unknown module basis name {a!r}")
        ia, xa = where[a]
        combo = _parse_combo(expr, where, line_no, p)
        vec = _combo_vector(combo, where, dims, ia + 1, line_no, p)
        if dims.get(ia + 1, 0) == 0:
            if combo:
                raise ParseError(line_no, f"differential lands in the empty degree {ia + 1}")
            continue
        d = diff.setdefault(ia, la.zeros(dims[ia + 1], dims[ia]))
        d[:, xa] = vec
    M = dg.DGModule(R, dims, diff, {k: v for k, v in act.items() if v.size}, label=block.name)
    M.names = {d: list(ns) for d, ns in block.degrees.items()}
    report = dg.validate_module(M)
    if report:
        raise ParseError(block.line_no, f"module {block.name!r} fails validation: " + "; ".join(report[:4]))
    return M


def parse(text: str, seed: int = 0, default_p: int | None = None) -> InputDocument:
    p_val, p_line, blocks = _lex(text)
    if p_val is None:
        if default_p is None:
            raise ParseError(1, "missing 'p <prime>' line")
        p_val = default_p
    alg_blocks = [b for b in blocks if b.kind == "algebra"]
    if len(alg_blocks) != 1:
        raise ParseError(alg_blocks[1].line_no if len(alg_blocks) > 1 else 1, "expected exactly one algebra block")
    R = _build_algebra(alg_blocks[0], p_val, seed)
    doc = InputDocument(p_val, R, algebra_ref=alg_blocks[0].builtin)
    for b in blocks:
        if b.kind != "module":
            continue
        if b.name in doc.modules:
            raise ParseError(b.line_no, f"module {b.name!r} declared twice")
        doc.modules[b.name] = _build_module(b, R, p_val)
        if b.builtin:
            doc.module_refs[b.name] = b.builtin
    return doc


# ---------------------------------------------------------------------------
# emission


def _names_for(obj, fallback_prefix="b"):
    names = getattr(obj, "names", None)
    if names:
        return names
    out = {}
    for d in obj.degrees():
        out[d] = [f"{fallback_prefix}{d}_{i}".replace("-", "m") for i in range(obj.dim(d))]
    return out


def _combo_str(vec, names, p):
    terms = []
    for i, c in enumerate(np.asarray(vec) % p):
        c = int(c)
        if c == 0:
            continue
        if c == 1:
            terms.append(names[i])
        else:
            terms.append(f"{c}*{names[i]}")
    return " + ".join(terms) if terms else "0"


def emit(doc: InputDocument) -> str:
    R = doc.algebra
    p = doc.p
    lines = [f"p {p}", ""]
    lines.append("algebra")
    names = _names_for(R)
    for d in sorted(R.degrees(), reverse=True):
        lines.append(f"degree {d} names " + " ".join(names[d]))
    lines.append("unit " + _combo_str(R.unit, names[0], p))
    for i in sorted(R.degrees(), reverse=True):
        for j in sorted(R.degrees(), reverse=True):
            t = R.mult_tensor(i, j)
            for a in range(R.dim(i)):
                for b in range(R.dim(j)):
                    vec = t[a, b] if t.size else np.zeros(0, dtype=np.int64)
                    if vec.size and np.any(vec):
                        lines.append(f"mul {names[i][a]} {names[j][b]} = " + _combo_str(vec, names[i + j], p))
    for i in sorted(R.degrees(), reverse=True):
        d = R.diff_mat(i)
        for a in range(R.dim(i)):
            if d.size and np.any(d[:, a]):
                lines.append(f"d {names[i][a]} = " + _combo_str(d[:, a], names[i + 1], p))
    for name in sorted(doc.modules):
        M = doc.modules[name]
        lines.append("")
        lines.append(f"module {name}")
        mnames = _names_for(M, fallback_prefix="m")
        for dgr in sorted(M.degrees(), reverse=True):
            lines.append(f"degree {dgr} names " + " ".join(mnames[dgr]))
        for i in sorted(M.degrees(), reverse=True):
            for j in sorted(R.degrees(), reverse=True):
                t = M.act_tensor(i, j)
                for a in range(M.dim(i)):
                    for b in range(R.dim(j)):
                        vec = t[a, b] if t.size else np.zeros(0, dtype=np.int64)
                        if vec.size and np.any(vec):
                            lines.append(
                                f"act {mnames[i][a]} {names[j][b]} = " + _combo_str(vec, mnames[i + j], p)
                            )
        for i in sorted(M.degrees(), reverse=True):
            d = M.diff_mat(i)
            for a in range(M.dim(i)):
                if d.size and np.any(d[:, a]):
                    lines.append(f"d {mnames[i][a]} = " + _combo_str(d[:, a], mnames[i + 1], p))
    return "\n".join(lines) + "\n"
