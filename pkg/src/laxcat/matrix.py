"""Exact rational matrices as numpy object arrays.

Entries are ``int`` or :class:`fractions.Fraction`; products go through
``numpy.dot`` on object arrays so nothing is ever rounded.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np


def qmat(rows) -> np.ndarray:
    """Object array of exact entries from nested lists (or an existing array)."""
    a = np.array(rows, dtype=object)
    if a.ndim == 1:
        a = a.reshape(1, -1) if a.size else a.reshape(0, 0)
    return np.vectorize(_exact, otypes=[object])(a) if a.size else a


def _exact(v):
    if isinstance(v, Fraction):
        return v.numerator if v.denominator == 1 else v
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, float) and v.is_integer():
        return int(v)
    if isinstance(v, str):
        return _exact(Fraction(v))
    raise TypeError(f"non-exact matrix entry {v!r}")


def zeros(r: int, c: int) -> np.ndarray:
    a = np.empty((r, c), dtype=object)
    a.fill(0)
    return a


def eye(n: int) -> np.ndarray:
    a = zeros(n, n)
    for i in range(n):
        a[i, i] = 1
    return a


_SAFE = 2 ** 62


def _as_int(a):
    """int64 copy of an all-integer array, or ``None``."""
    if a.dtype != object:
        return a.astype(np.int64) if np.issubdtype(a.dtype, np.integer) else None
    try:
        ia = a.astype(np.int64)
    except (OverflowError, TypeError, ValueError):
        return None
    if ia.size and (np.abs(ia).max() >= _SAFE or not (ia.astype(object) == a).all()):
        return None
    return ia


def _bound(a):
    return int(np.abs(a).max()) if a.size else 0


def dot(a, b, axes=None):
    """Exact ``tensordot`` (or matrix product when ``axes`` is ``None``).

    Integer inputs go through int64 when the result provably fits.
    """
    ia, ib = _as_int(a), _as_int(b)
    if ia is not None and ib is not None:
        inner = a.shape[axes[0][0]] if axes else a.shape[-1]
        if _bound(ia) * _bound(ib) * max(inner, 1) < _SAFE:
            r = np.tensordot(ia, ib, axes=axes) if axes else np.dot(ia, ib)
            return r.astype(object)
    return np.tensordot(a, b, axes=axes) if axes else np.dot(a, b)


def kron(*ms) -> np.ndarray:
    out = eye(1)
    for m in ms:
        ia, ib = _as_int(out), _as_int(m)
        if ia is not None and ib is not None and _bound(ia) * _bound(ib) < _SAFE:
            out = np.kron(ia, ib).astype(object)
        else:
            out = np.kron(out, m).astype(object)
    return out


def matmul(*ms) -> np.ndarray:
    """Classical-order product ``ms[0] @ ms[1] @ ...``."""
    out = ms[-1]
    for m in ms[-2::-1]:
        if m.shape[1] != out.shape[0]:
            raise ValueError(f"shape mismatch {m.shape} x {out.shape}")
        out = zeros(m.shape[0], out.shape[1]) if m.shape[1] == 0 else dot(m, out)
    return out


def swap(p: int, q: int) -> np.ndarray:
    """Permutation ``V_p (x) V_q -> V_q (x) V_p``."""
    s = zeros(p * q, p * q)
    for i in range(p):
        for j in range(q):
            s[j * p + i, i * q + j] = 1
    return s


def mat_eq(a, b) -> bool:
    a, b = np.asarray(a, dtype=object), np.asarray(b, dtype=object)
    return a.shape == b.shape and bool((a == b).all())


def inverse(m) -> np.ndarray:
    """Exact Gauss-Jordan inverse; raises ``ValueError`` when singular."""
    n = m.shape[0]
    if m.shape != (n, n):
        raise ValueError("inverse of a non-square matrix")
    a = [[Fraction(m[i, j]) for j in range(n)] + [Fraction(int(i == j)) for j in range(n)]
         for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            raise ValueError("singular matrix")
        a[col], a[piv] = a[piv], a[col]
        pv = a[col][col]
        a[col] = [v / pv for v in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [v - f * w for v, w in zip(a[r], a[col])]
    return qmat([row[n:] for row in a])


def parse_rational(tok: str):
    """``3``, ``-2/5`` or ``p/q`` style tokens."""
    return _exact(Fraction(tok.strip()))


def format_entry(v) -> str:
    return str(v)


def format_matrix(m) -> str:
    m = np.asarray(m, dtype=object)
    if m.ndim != 2:
        return str(m)
    head = f"matrix {m.shape[0]}x{m.shape[1]}"
    rows = [" ".join(format_entry(v) for v in row) for row in m]
    return "\n".join([head] + rows)


def parse_matrix(text: str) -> np.ndarray:
    """Read what :func:`format_matrix` writes; the ``matrix RxC`` header is optional."""
    lines = [ln for ln in text.strip().splitlines() if ln.strip()]
    shape = None
    if lines and lines[0].startswith("matrix"):
        r, c = lines.pop(0).split()[-1].split("x")
        shape = (int(r), int(c))
    rows = [[parse_rational(t) for t in ln.split()] for ln in lines]
    m = qmat(rows) if rows else zeros(0, shape[1] if shape else 0)
    if shape and m.shape != shape:
        raise ValueError(f"matrix is {m.shape[0]}x{m.shape[1]}, header says {shape[0]}x{shape[1]}")
    return m
