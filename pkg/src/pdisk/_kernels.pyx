# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled series kernels: truncated convolution, inversion, addition.

Interface and results are identical to ``pdisk._kernels_py``; this module
only exists to make the hot inner loops (dense coefficient arithmetic over
F_{p^k}) run at C speed.  Coefficients are encoded integers, extension
fields are handled through base-p digit buffers of width k <= 8.
"""

from libc.stdlib cimport free, malloc

BACKEND = "compiled"

DEF MAXK = 8


cdef inline long long _nmod(long long x, long long p) noexcept:
    cdef long long r = x % p
    if r < 0:
        r += p
    return r


cdef long long *_load(object seq, Py_ssize_t n) except NULL:
    cdef long long *buf = <long long *> malloc((n if n else 1) * sizeof(long long))
    if buf == NULL:
        raise MemoryError()
    cdef Py_ssize_t i
    for i in range(n):
        buf[i] = seq[i]
    return buf


cdef void _decode(long long a, long long p, int k, long long *out) noexcept:
    cdef int i
    for i in range(k):
        out[i] = a % p
        a //= p


cdef long long _encode(long long *digs, long long p, int k) noexcept:
    cdef long long a = 0
    cdef int i
    for i in range(k - 1, -1, -1):
        a = a * p + digs[i]
    return a


cdef void _fmul_digits(long long *da, long long *db, long long p, int k,
                       long long *mod, long long *out) noexcept:
    """out[0..k) = da * db reduced by the monic modulus digits."""
    cdef long long buf[2 * MAXK]
    cdef int i, j
    cdef long long c
    for i in range(2 * k - 1):
        buf[i] = 0
    for i in range(k):
        if da[i] != 0:
            for j in range(k):
                buf[i + j] = (buf[i + j] + da[i] * db[j]) % p
    for i in range(2 * k - 2, k - 1, -1):
        c = buf[i]
        if c != 0:
            buf[i] = 0
            for j in range(k):
                buf[i - k + j] = _nmod(buf[i - k + j] - c * mod[j], p)
    for i in range(k):
        out[i] = buf[i]


def series_add(a, b, long long p, int k, mod):
    cdef Py_ssize_t n = min(len(a), len(b))
    cdef Py_ssize_t i
    cdef int d
    cdef long long *ca = _load(a, n)
    cdef long long *cb = _load(b, n)
    cdef long long da[MAXK]
    cdef long long db[MAXK]
    cdef long long dc[MAXK]
    out = [0] * n
    try:
        if k == 1:
            for i in range(n):
                out[i] = (ca[i] + cb[i]) % p
        else:
            for i in range(n):
                _decode(ca[i], p, k, da)
                _decode(cb[i], p, k, db)
                for d in range(k):
                    dc[d] = (da[d] + db[d]) % p
                out[i] = _encode(dc, p, k)
        return out
    finally:
        free(ca)
        free(cb)


def series_neg(a, long long p, int k, mod):
    cdef Py_ssize_t n = len(a)
    cdef Py_ssize_t i
    cdef int d
    cdef long long *ca = _load(a, n)
    cdef long long da[MAXK]
    cdef long long dc[MAXK]
    out = [0] * n
    try:
        if k == 1:
            for i in range(n):
                out[i] = _nmod(-ca[i], p)
        else:
            for i in range(n):
                _decode(ca[i], p, k, da)
                for d in range(k):
                    dc[d] = _nmod(-da[d], p)
                out[i] = _encode(dc, p, k)
        return out
    finally:
        free(ca)


def series_mul(a, b, Py_ssize_t nout, long long p, int k, mod):
    cdef Py_ssize_t na = len(a), nb = len(b)
    cdef Py_ssize_t i, m, lo, hi
    cdef int d
    cdef long long acc
    cdef long long *ca = _load(a, na)
    cdef long long *cb = _load(b, nb)
    cdef long long *cm = NULL
    cdef long long *dda = NULL
    cdef long long *ddb = NULL
    cdef long long dacc[MAXK]
    cdef long long prod[MAXK]
    out = [0] * nout
    try:
        if k == 1:
            for m in range(nout):
                acc = 0
                lo = m - nb + 1
                if lo < 0:
                    lo = 0
                hi = m + 1
                if hi > na:
                    hi = na
                for i in range(lo, hi):
                    acc = (acc + ca[i] * cb[m - i]) % p
                out[m] = acc
            return out
        cm = _load(mod, k)
        dda = <long long *> malloc((na if na else 1) * k * sizeof(long long))
        ddb = <long long *> malloc((nb if nb else 1) * k * sizeof(long long))
        if dda == NULL or ddb == NULL:
            raise MemoryError()
        for i in range(na):
            _decode(ca[i], p, k, dda + i * k)
        for i in range(nb):
            _decode(cb[i], p, k, ddb + i * k)
        for m in range(nout):
            for d in range(k):
                dacc[d] = 0
            lo = m - nb + 1
            if lo < 0:
                lo = 0
            hi = m + 1
            if hi > na:
                hi = na
            for i in range(lo, hi):
                _fmul_digits(dda + i * k, ddb + (m - i) * k, p, k, cm, prod)
                for d in range(k):
                    dacc[d] = (dacc[d] + prod[d]) % p
            out[m] = _encode(dacc, p, k)
        return out
    finally:
        free(ca)
        free(cb)
        if cm != NULL:
            free(cm)
        if dda != NULL:
            free(dda)
        if ddb != NULL:
            free(ddb)


def series_inv(a, Py_ssize_t nout, long long c0inv, long long p, int k, mod):
    """Triangular recursion for 1/a; c0inv is the field inverse of a[0]."""
    cdef Py_ssize_t na = len(a)
    cdef Py_ssize_t i, m, hi
    cdef int d
    cdef long long acc
    cdef long long *ca = _load(a, na)
    cdef long long *cm = NULL
    cdef long long *co = <long long *> malloc((nout if nout else 1) * sizeof(long long))
    cdef long long *dda = NULL
    cdef long long *ddo = NULL
    cdef long long dacc[MAXK]
    cdef long long prod[MAXK]
    cdef long long dinv[MAXK]
    out = [0] * nout
    if co == NULL:
        free(ca)
        raise MemoryError()
    try:
        if nout > 0:
            co[0] = c0inv
        if k == 1:
            for m in range(1, nout):
                acc = 0
                hi = m if m < na - 1 else na - 1
                for i in range(1, hi + 1):
                    acc = (acc + ca[i] * co[m - i]) % p
                co[m] = _nmod(-c0inv * acc, p)
        else:
            cm = _load(mod, k)
            dda = <long long *> malloc((na if na else 1) * k * sizeof(long long))
            ddo = <long long *> malloc((nout if nout else 1) * k * sizeof(long long))
            if dda == NULL or ddo == NULL:
                raise MemoryError()
            for i in range(na):
                _decode(ca[i], p, k, dda + i * k)
            _decode(c0inv, p, k, dinv)
            if nout > 0:
                _decode(c0inv, p, k, ddo)
            for m in range(1, nout):
                for d in range(k):
                    dacc[d] = 0
                hi = m if m < na - 1 else na - 1
                for i in range(1, hi + 1):
                    _fmul_digits(dda + i * k, ddo + (m - i) * k, p, k, cm, prod)
                    for d in range(k):
                        dacc[d] = (dacc[d] + prod[d]) % p
                for d in range(k):
                    dacc[d] = _nmod(-dacc[d], p)
                _fmul_digits(dinv, dacc, p, k, cm, ddo + m * k)
                co[m] = _encode(ddo + m * k, p, k)
        for m in range(nout):
            out[m] = co[m]
        return out
    finally:
        free(ca)
        free(co)
        if cm != NULL:
            free(cm)
        if dda != NULL:
            free(dda)
        if ddo != NULL:
            free(ddo)
