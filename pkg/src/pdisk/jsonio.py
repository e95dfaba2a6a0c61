"""JSON wire formats and the series text grammar.

Every emitted object is self-contained: it carries "p", "ext_degree" and
"modulus" alongside its payload, so files round-trip without out-of-band
context.  Readers accept objects missing the field keys when a fallback
prime is supplied (the CLI's --p flag).

Series grammar: terms `c`, `c*z^k`, `z^k`, `z` joined by `+`; c is an
integer coefficient, or a `[a0,...,a_{k-1}]` vector in the modulus basis
for extension fields.  Canonical output is ascending in the exponent,
omits zero terms, prints the zero series as `0`, uses bare `z` at
exponent 1, and always writes the letter z; the accompanying "var" tag
says which coordinate (z or z') the letters mean.  Parsing is more
lenient: whitespace, a missing `*`, `z'` letters, `z^1`, repeated
exponents and out-of-range integers are all accepted and normalized.
"""

from __future__ import annotations

import json
import re
from typing import Any

from .connection import Connection, FHiggs
from .errors import SchemaError
from .field import FieldSpec
from .harmonic import CorrespondencePackage, HarmonicDatum
from .hitchin import InvariantTuple
from .matrix import SeriesMatrix
from .series import TruncSeries, VAR_DISK, VAR_TWIST
from .spectral import SpectralElement, SpectralRing

_TERM_RE = re.compile(
    r"^(?:(?P<coeff>-?\d+|\[[^\]]*\])\s*\*?\s*)?(?:(?P<letter>z'?)(?:\^(?P<exp>\d+))?)?$"
)


# -- element and series text ------------------------------------------------


def format_element(field: FieldSpec, a: int) -> str:
    if field.k == 1:
        return str(a)
    return "[" + ",".join(str(d) for d in field.decode(a)) + "]"


def parse_element(field: FieldSpec, text: str, path: str) -> int:
    text = text.strip()
    if text.startswith("["):
        if not text.endswith("]"):
            raise SchemaError(f"unterminated coefficient vector {text!r}", path)
        body = text[1:-1].strip()
        digits = []
        if body:
            for part in body.split(","):
                part = part.strip()
                try:
                    digits.append(int(part) % field.p)
                except ValueError:
                    raise SchemaError(f"bad digit {part!r} in coefficient vector", path)
        if len(digits) > field.k:
            raise SchemaError(
                f"coefficient vector longer than extension degree {field.k}", path
            )
        digits += [0] * (field.k - len(digits))
        return field.encode(digits)
    try:
        value = int(text)
    except ValueError:
        raise SchemaError(f"bad coefficient {text!r}", path)
    return value % field.p


def format_series(s: TruncSeries) -> str:
    field = s.field
    terms = []
    for m, c in enumerate(s.coeffs):
        if c == 0:
            continue
        if m == 0:
            terms.append(format_element(field, c))
            continue
        zpart = "z" if m == 1 else f"z^{m}"
        if c == 1:
            terms.append(zpart)
        else:
            terms.append(f"{format_element(field, c)}*{zpart}")
    if not terms:
        return "0"
    return " + ".join(terms)


def parse_series(
    field: FieldSpec, text: str, var: str, precision: int, path: str
) -> TruncSeries:
    if not isinstance(text, str):
        raise SchemaError("series must be a string", path)
    coeffs = [0] * precision
    stripped = text.strip()
    if stripped == "":
        raise SchemaError("empty series string", path)
    for raw in stripped.split("+"):
        term = raw.strip()
        if term == "":
            raise SchemaError("empty term in series string", path)
        m = _TERM_RE.match(term)
        if m is None or (m.group("coeff") is None and m.group("letter") is None):
            raise SchemaError(f"unparseable term {term!r}", path)
        if m.group("coeff") is None:
            c = 1
        else:
            c = parse_element(field, m.group("coeff"), path)
        if m.group("letter") is None:
            exp = 0
        elif m.group("exp") is None:
            exp = 1
        else:
            exp = int(m.group("exp"))
        if c == 0:
            continue
        if exp >= precision:
            raise SchemaError(
                f"term {term!r} has exponent {exp} beyond stated precision {precision}",
                path,
            )
        coeffs[exp] = field.add(coeffs[exp], c)
    return TruncSeries.make(field, var, coeffs, precision)


# -- structural helpers -----------------------------------------------------


def _need(obj: Any, key: str, path: str) -> Any:
    if not isinstance(obj, dict):
        raise SchemaError("expected a JSON object", path)
    if key not in obj:
        raise SchemaError(f"missing key {key!r}", path)
    return obj[key]


def _need_int(obj: Any, key: str, path: str) -> int:
    v = _need(obj, key, path)
    if not isinstance(v, int) or isinstance(v, bool):
        raise SchemaError(f"key {key!r} must be an integer", f"{path}.{key}")
    return v


def _need_var(obj: Any, path: str, expect: str | None = None) -> str:
    v = _need(obj, "var", path)
    if v not in (VAR_DISK, VAR_TWIST):
        raise SchemaError(f"var must be 'z' or \"z'\", got {v!r}", f"{path}.var")
    if expect is not None and v != expect:
        raise SchemaError(f"expected var {expect!r}, got {v!r}", f"{path}.var")
    return v


def field_to_obj(field: FieldSpec) -> dict[str, Any]:
    return {
        "p": field.p,
        "ext_degree": field.k,
        "modulus": list(field.modulus) if field.modulus is not None else None,
    }


def field_from_obj(obj: Any, path: str, fallback_p: int | None = None) -> FieldSpec:
    if not isinstance(obj, dict):
        raise SchemaError("expected a JSON object", path)
    if "p" not in obj:
        if fallback_p is None:
            raise SchemaError("missing key 'p' and no --p fallback given", path)
        return _build_field(fallback_p, 1, None, path)
    p = _need_int(obj, "p", path)
    k = obj.get("ext_degree", 1)
    if not isinstance(k, int) or isinstance(k, bool):
        raise SchemaError("key 'ext_degree' must be an integer", f"{path}.ext_degree")
    modulus = obj.get("modulus")
    if modulus is not None:
        if not isinstance(modulus, list) or not all(
            isinstance(c, int) and not isinstance(c, bool) for c in modulus
        ):
            raise SchemaError("modulus must be a list of integers", f"{path}.modulus")
        modulus = tuple(modulus)
    return _build_field(p, k, modulus, path)


def _build_field(p: int, k: int, modulus: tuple[int, ...] | None, path: str) -> FieldSpec:
    try:
        return FieldSpec(p, k, modulus)
    except ValueError as exc:
        raise SchemaError(str(exc), path)


# -- scalar and plain-series files ------------------------------------------


def scalar_to_json(field: FieldSpec, a: int) -> dict[str, Any]:
    obj = field_to_obj(field)
    obj["element"] = a if field.k == 1 else field.decode(a)
    return obj


def scalar_from_json(obj: Any, path: str = "$", fallback_p: int | None = None) -> tuple[FieldSpec, int]:
    field = field_from_obj(obj, path, fallback_p)
    v = _need(obj, "element", path)
    if isinstance(v, str):
        return field, parse_element(field, v, f"{path}.element")
    if isinstance(v, int) and not isinstance(v, bool):
        return field, v % field.p if field.k == 1 else field.validate(v)
    if isinstance(v, list) and all(isinstance(c, int) and not isinstance(c, bool) for c in v):
        if len(v) > field.k:
            raise SchemaError("element vector longer than extension degree", f"{path}.element")
        digits = [c % field.p for c in v] + [0] * (field.k - len(v))
        return field, field.encode(digits)
    raise SchemaError("element must be an integer or integer vector", f"{path}.element")


def series_to_json(s: TruncSeries) -> dict[str, Any]:
    obj = field_to_obj(s.field)
    obj["var"] = s.var
    obj["precision"] = s.precision
    obj["series"] = format_series(s)
    return obj


def series_from_json(obj: Any, path: str = "$", fallback_p: int | None = None) -> TruncSeries:
    field = field_from_obj(obj, path, fallback_p)
    var = _need_var(obj, path)
    precision = _need_int(obj, "precision", path)
    if precision < 0:
        raise SchemaError("precision must be nonnegative", f"{path}.precision")
    return parse_series(field, _need(obj, "series", path), var, precision, f"{path}.series")


# -- one-forms --------------------------------------------------------------


def oneform_to_json(w) -> dict[str, Any]:
    s = w.coefficient
    obj = field_to_obj(s.field)
    obj["var"] = s.var
    obj["precision"] = s.precision
    obj["coefficient"] = format_series(s)
    return obj


def oneform_from_json(obj: Any, path: str = "$", fallback_p: int | None = None):
    from .cartier import OneForm, TwistOneForm

    field = field_from_obj(obj, path, fallback_p)
    var = _need_var(obj, path)
    precision = _need_int(obj, "precision", path)
    if precision < 0:
        raise SchemaError("precision must be nonnegative", f"{path}.precision")
    coeff = parse_series(
        field, _need(obj, "coefficient", path), var, precision, f"{path}.coefficient"
    )
    return OneForm(coeff) if var == VAR_DISK else TwistOneForm(coeff)


# -- matrices, connections, F-Higgs fields ----------------------------------


def _matrix_payload(m: SeriesMatrix) -> dict[str, Any]:
    obj = field_to_obj(m.field)
    obj["var"] = m.var
    obj["precision"] = m.precision
    obj["rank"] = m.rank
    obj["matrix"] = [[format_series(e) for e in row] for row in m.entries]
    return obj


def matrix_to_json(m: SeriesMatrix) -> dict[str, Any]:
    return _matrix_payload(m)


def matrix_from_json(obj: Any, path: str = "$", fallback_p: int | None = None) -> SeriesMatrix:
    field = field_from_obj(obj, path, fallback_p)
    var = _need_var(obj, path)
    precision = _need_int(obj, "precision", path)
    if precision < 0:
        raise SchemaError("precision must be nonnegative", f"{path}.precision")
    rank = _need_int(obj, "rank", path)
    if rank < 1:
        raise SchemaError("rank must be at least 1", f"{path}.rank")
    rows = _need(obj, "matrix", path)
    if not isinstance(rows, list) or len(rows) != rank:
        raise SchemaError(f"matrix must be a list of {rank} rows", f"{path}.matrix")
    out = []
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != rank:
            raise SchemaError(f"row must be a list of {rank} entries", f"{path}.matrix[{i}]")
        out.append(
            tuple(
                parse_series(field, e, var, precision, f"{path}.matrix[{i}][{j}]")
                for j, e in enumerate(row)
            )
        )
    return SeriesMatrix(tuple(out))


def connection_to_json(conn: Connection) -> dict[str, Any]:
    return _matrix_payload(conn.matrix)


def connection_from_json(obj: Any, path: str = "$", fallback_p: int | None = None) -> Connection:
    m = matrix_from_json(obj, path, fallback_p)
    if m.var != VAR_DISK:
        raise SchemaError("a connection matrix lives in the z coordinate", f"{path}.var")
    return Connection(m)


def fhiggs_to_json(psi: FHiggs) -> dict[str, Any]:
    obj = _matrix_payload(psi.matrix)
    obj["twist_weight"] = psi.twist_weight
    return obj


def fhiggs_from_json(obj: Any, path: str = "$", fallback_p: int | None = None) -> FHiggs:
    m = matrix_from_json(obj, path, fallback_p)
    weight = _need_int(obj, "twist_weight", path)
    return FHiggs(m, weight)


# -- invariant tuples -------------------------------------------------------


def invariants_to_json(b: InvariantTuple) -> dict[str, Any]:
    obj = field_to_obj(b.field)
    obj["var"] = b.var
    obj["precision"] = b.precision
    obj["rank"] = b.rank
    obj["entries"] = [format_series(e) for e in b.entries]
    return obj


def invariants_from_json(obj: Any, path: str = "$", fallback_p: int | None = None) -> InvariantTuple:
    field = field_from_obj(obj, path, fallback_p)
    var = _need_var(obj, path)
    precision = _need_int(obj, "precision", path)
    if precision < 0:
        raise SchemaError("precision must be nonnegative", f"{path}.precision")
    rank = _need_int(obj, "rank", path)
    if rank < 1:
        raise SchemaError("rank must be at least 1", f"{path}.rank")
    entries = _need(obj, "entries", path)
    if not isinstance(entries, list) or len(entries) != rank:
        raise SchemaError(f"entries must be a list of {rank} series", f"{path}.entries")
    parsed = tuple(
        parse_series(field, e, var, precision, f"{path}.entries[{i}]")
        for i, e in enumerate(entries)
    )
    return InvariantTuple(parsed)


# -- spectral elements and harmonic data ------------------------------------


def spectral_to_json(elt: SpectralElement) -> dict[str, Any]:
    # the textual coefficients carry no precision of their own, so the
    # embedded base is cut to the element's precision to keep the
    # roundtrip from claiming unknown coefficients are zero
    return {
        "b": invariants_to_json(elt.ring.b.truncate(elt.precision)),
        "coeffs_in_lambda": [format_series(c) for c in elt.coeffs],
    }


def spectral_from_json(obj: Any, path: str = "$", fallback_p: int | None = None) -> SpectralElement:
    b = invariants_from_json(_need(obj, "b", path), f"{path}.b", fallback_p)
    ring = SpectralRing(b)
    raw = _need(obj, "coeffs_in_lambda", path)
    if not isinstance(raw, list) or not raw:
        raise SchemaError("coeffs_in_lambda must be a nonempty list", f"{path}.coeffs_in_lambda")
    coeffs = [
        parse_series(b.field, c, b.var, b.precision, f"{path}.coeffs_in_lambda[{i}]")
        for i, c in enumerate(raw)
    ]
    return ring.element(coeffs)


def harmonic_to_json(h: HarmonicDatum) -> dict[str, Any]:
    obj = {
        "b_prime": invariants_to_json(h.b_prime),
        "theta": spectral_to_json(h.theta),
        "frame": h.frame,
    }
    if h.curvature_sign != 1:
        obj["curvature_sign"] = h.curvature_sign
    return obj


def harmonic_from_json(obj: Any, path: str = "$", fallback_p: int | None = None) -> HarmonicDatum:
    b_prime = invariants_from_json(_need(obj, "b_prime", path), f"{path}.b_prime", fallback_p)
    theta = spectral_from_json(_need(obj, "theta", path), f"{path}.theta", fallback_p)
    frame = _need(obj, "frame", path)
    if frame not in ("rank1", "eigen", "cyclic"):
        raise SchemaError(f"frame must be rank1, eigen or cyclic, got {frame!r}", f"{path}.frame")
    sign = obj.get("curvature_sign", 1)
    if sign not in (1, -1):
        raise SchemaError("curvature_sign must be 1 or -1", f"{path}.curvature_sign")
    return HarmonicDatum(b_prime, theta, frame, sign)


def package_to_json(pkg: CorrespondencePackage) -> dict[str, Any]:
    return {
        "connection": connection_to_json(pkg.connection),
        "higgs": matrix_to_json(pkg.higgs),
        "harmonic": harmonic_to_json(pkg.harmonic),
        "gauge": matrix_to_json(pkg.gauge),
    }


def package_from_json(obj: Any, path: str = "$", fallback_p: int | None = None) -> CorrespondencePackage:
    conn = connection_from_json(_need(obj, "connection", path), f"{path}.connection", fallback_p)
    higgs = matrix_from_json(_need(obj, "higgs", path), f"{path}.higgs", fallback_p)
    harmonic = harmonic_from_json(_need(obj, "harmonic", path), f"{path}.harmonic", fallback_p)
    gm = matrix_from_json(_need(obj, "gauge", path), f"{path}.gauge", fallback_p)
    return CorrespondencePackage(harmonic, conn, higgs, gm, gm)


# -- canonical dumping ------------------------------------------------------


def dumps_canonical(obj: Any, compact: bool = False) -> str:
    if compact:
        return json.dumps(obj, sort_keys=True, separators=(",", ":"))
    return json.dumps(obj, sort_keys=True, indent=2)
