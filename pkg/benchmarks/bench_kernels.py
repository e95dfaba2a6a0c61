"""Compare the compiled series kernels against the pure-Python fallback.

Feeds identical inputs to ``pdisk._kernels`` and ``pdisk._kernels_py``,
checks the outputs agree bit for bit, and reports per-call timings.  Run
from the repository root:

    python3 benchmarks/bench_kernels.py

The compiled extension is optional; without it this script reports the
fallback timings alone.
"""

from __future__ import annotations

import time

import pdisk._kernels_py as pure
from pdisk.field import FieldSpec
from pdisk.rng import SplitMix64

try:
    import pdisk._kernels as compiled
except ImportError:
    compiled = None

FIELDS = [FieldSpec(5), FieldSpec(3, 2, (1, 0, 1))]
LENGTHS = [16, 64, 256]
REPEAT = 200


def draw(rng: SplitMix64, field: FieldSpec, n: int) -> list[int]:
    q = field.p**field.k
    out = [rng.below(q) for _ in range(n)]
    if out[0] == 0:
        out[0] = 1
    return out


def clock(fn, *args) -> tuple[float, object]:
    best = float("inf")
    result = None
    for _ in range(3):
        t0 = time.perf_counter()
        for _ in range(REPEAT):
            result = fn(*args)
        best = min(best, (time.perf_counter() - t0) / REPEAT)
    return best, result


def fmt(seconds: float) -> str:
    if seconds < 1e-3:
        return f"{seconds * 1e6:8.1f} us"
    return f"{seconds * 1e3:8.2f} ms"


def main() -> None:
    rng = SplitMix64(2024)
    impls = [("python", pure)] + ([("compiled", compiled)] if compiled else [])
    print(f"backends: {', '.join(name for name, _ in impls)}")
    header = f"{'field':>8} {'n':>5} {'op':>4}" + "".join(
        f" {name:>12}" for name, _ in impls
    )
    if compiled:
        header += f" {'speedup':>9}"
    print(header)
    for field in FIELDS:
        p, k = field.p, field.k
        mod = None if k == 1 else field.modulus
        label = f"F_{p**k}"
        for n in LENGTHS:
            a = draw(rng, field, n)
            b = draw(rng, field, n)
            c0inv = field.inv(a[0])
            for op, args in [
                ("mul", (a, b, n, p, k, mod)),
                ("inv", (a, n, c0inv, p, k, mod)),
            ]:
                times = []
                outs = []
                for _, impl in impls:
                    fn = impl.series_mul if op == "mul" else impl.series_inv
                    t, out = clock(fn, *args)
                    times.append(t)
                    outs.append(out)
                if len(outs) == 2 and outs[0] != outs[1]:
                    raise SystemExit(f"backend mismatch: {label} n={n} {op}")
                row = f"{label:>8} {n:>5} {op:>4}" + "".join(
                    f" {fmt(t):>12}" for t in times
                )
                if len(times) == 2:
                    row += f" {times[0] / times[1]:>8.1f}x"
                print(row)


if __name__ == "__main__":
    main()
