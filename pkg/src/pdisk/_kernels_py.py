"""Pure-Python series kernels.

Interface mirror of the compiled extension ``pdisk._kernels``; results are
bit-identical.  Coefficients are field elements encoded as integers (see
``pdisk.field``), ``mod`` is the tuple of the k low modulus digits for
extension fields and ``None`` for k = 1.

BACKEND tells the benchmark and tests which implementation they got.
"""

from __future__ import annotations

BACKEND = "python"


def _decode(a: int, p: int, k: int) -> list[int]:
    digs = []
    for _ in range(k):
        digs.append(a % p)
        a //= p
    return digs


def _encode(digs: list[int], p: int) -> int:
    a = 0
    for d in reversed(digs):
        a = a * p + d
    return a


def _fmul(a: int, b: int, p: int, k: int, mod: tuple[int, ...]) -> int:
    if a == 0 or b == 0:
        return 0
    da = _decode(a, p, k)
    db = _decode(b, p, k)
    buf = [0] * (2 * k - 1)
    for i, x in enumerate(da):
        if x:
            for j, y in enumerate(db):
                buf[i + j] = (buf[i + j] + x * y) % p
    for i in range(2 * k - 2, k - 1, -1):
        c = buf[i]
        if c:
            buf[i] = 0
            for j in range(k):
                buf[i - k + j] = (buf[i - k + j] - c * mod[j]) % p
    return _encode(buf[:k], p)


def _fadd(a: int, b: int, p: int, k: int) -> int:
    da = _decode(a, p, k)
    db = _decode(b, p, k)
    return _encode([(x + y) % p for x, y in zip(da, db)], p)


def series_add(a, b, p: int, k: int, mod) -> list[int]:
    n = min(len(a), len(b))
    if k == 1:
        return [(a[i] + b[i]) % p for i in range(n)]
    return [_fadd(a[i], b[i], p, k) for i in range(n)]


def series_neg(a, p: int, k: int, mod) -> list[int]:
    if k == 1:
        return [(-c) % p for c in a]
    return [_encode([(-d) % p for d in _decode(c, p, k)], p) for c in a]


def series_mul(a, b, nout: int, p: int, k: int, mod) -> list[int]:
    na, nb = len(a), len(b)
    out = [0] * nout
    if k == 1:
        for i in range(min(na, nout)):
            ai = a[i]
            if ai:
                hi = min(nb, nout - i)
                for j in range(hi):
                    out[i + j] = (out[i + j] + ai * b[j]) % p
        return out
    for m in range(nout):
        acc = 0
        for i in range(max(0, m - nb + 1), min(na, m + 1)):
            t = _fmul(a[i], b[m - i], p, k, mod)
            acc = _fadd(acc, t, p, k)
        out[m] = acc
    return out


def series_inv(a, nout: int, c0inv: int, p: int, k: int, mod) -> list[int]:
    """Triangular recursion for 1/a; c0inv is the field inverse of a[0]."""
    out = [0] * nout
    out[0] = c0inv
    if k == 1:
        for m in range(1, nout):
            acc = 0
            for i in range(1, min(m, len(a) - 1) + 1):
                acc = (acc + a[i] * out[m - i]) % p
            out[m] = (-c0inv * acc) % p
        return out
    for m in range(1, nout):
        acc = 0
        for i in range(1, min(m, len(a) - 1) + 1):
            acc = _fadd(acc, _fmul(a[i], out[m - i], p, k, mod), p, k)
        neg = _encode([(-d) % p for d in _decode(acc, p, k)], p)
        out[m] = _fmul(c0inv, neg, p, k, mod)
    return out
