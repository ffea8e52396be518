"""Loading, validating and writing the series/constant catalog.

The on-disk format is a sequence of blocks of ``key = value`` lines
separated by ``---``.  Lines starting with ``#`` are comments.  A leading
block holding only ``format = ...`` is the file header.  See
``docs/formats.md`` for the full description.
"""

from __future__ import annotations

import io
from collections.abc import Iterable, Iterator
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path

from .bigreal import BigReal
from .errors import CatalogError, DomainError, NotAvailableError, SurdSyntaxError
from .expr import Environment, SurdExpr, surd_parse
from .series import LEVEL_OF_S, S_VALUES, SeriesParams

FORMAT_TAG = "ramanujan3-catalog/1"
KINDS = ("series", "constant")
STATUSES = ("proved", "conjectured", "derived-here")
SERIES_EXPRS = ("z", "a", "b")
KNOWN_KEYS = {
    "id", "kind", "level", "s", "z", "a", "b", "normalization", "value",
    "quantity", "r_value", "status", "citation", "aldawoud_n",
}
QUANTITIES = ("rho", "lambda_star", "alpha", "g", "g_minus6", "sigma", "y")
VALIDATION_BITS = 128


@dataclass(frozen=True)
class CatalogEntry:
    id: str
    kind: str
    status: str
    expressions: dict = field(default_factory=dict)
    normalization: SurdExpr | None = None
    s: int | None = None
    level: int | None = None
    quantity: str | None = None
    r_value: Fraction | None = None
    aldawoud_n: int | None = None
    citation: str = ""
    line: int = 0

    @property
    def is_placeholder(self) -> bool:
        """A series listed by reference only, with no expressions stored."""
        return self.kind == "series" and not self.expressions


class Catalog:
    """An ordered collection of entries with constant cross-references."""

    def __init__(self, entries: Iterable[CatalogEntry], source: str = "<memory>"):
        self.entries = list(entries)
        self.source = source
        self._by_id = {e.id: e for e in self.entries}
        self.env = Environment(
            {e.id: e.expressions["value"] for e in self.entries if e.kind == "constant"}
        )

    def __iter__(self) -> Iterator[CatalogEntry]:
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    def __contains__(self, entry_id):
        return entry_id in self._by_id

    def __getitem__(self, entry_id: str) -> CatalogEntry:
        try:
            return self._by_id[entry_id]
        except KeyError:
            raise NotAvailableError(f"no catalog entry {entry_id!r}") from None

    def series(self) -> list[CatalogEntry]:
        return [e for e in self.entries if e.kind == "series"]

    def constants(self) -> list[CatalogEntry]:
        return [e for e in self.entries if e.kind == "constant"]

    def evaluate(self, expr: SurdExpr, prec: int) -> BigReal:
        return expr.evaluate(prec, self.env)

    def constant(self, quantity: str, r, prec: int) -> BigReal:
        """Closed-form value of ``quantity`` at singular argument ``r``."""
        r = Fraction(r)
        for e in self.constants():
            if e.quantity == quantity and e.r_value == r:
                return self.evaluate(e.expressions["value"], prec)
        raise NotAvailableError(f"no closed form for {quantity} at r = {r}")

    def closed_forms(self, r) -> list[CatalogEntry]:
        r = Fraction(r)
        return [e for e in self.constants() if e.r_value == r]

    def series_params(self, entry: CatalogEntry | str, prec: int) -> SeriesParams:
        """Evaluate a series entry's expressions at ``prec`` bits."""
        if isinstance(entry, str):
            entry = self[entry]
        if entry.kind != "series":
            raise DomainError(f"{entry.id} is not a series")
        if entry.is_placeholder:
            raise NotAvailableError(f"{entry.id} is listed without values")
        z, a, b = (self.evaluate(entry.expressions[k], prec) for k in SERIES_EXPRS)
        c = self.evaluate(entry.normalization, prec) if entry.normalization else None
        return SeriesParams(entry.s, z, a, b, c, label=entry.id)


# ----------------------------------------------------------------------
# parsing


def _blocks(text: str):
    block, start = [], None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line == "---":
            if block:
                yield start, block
            block, start = [], None
            continue
        if start is None:
            start = lineno
        block.append((lineno, line))
    if block:
        yield start, block


def _fail(source, lineno, msg, entry_id=None):
    where = f"{source}:{lineno}"
    who = f" [{entry_id}]" if entry_id else ""
    raise CatalogError(f"{where}{who}: {msg}")


def _parse_block(source, start, lines) -> CatalogEntry:
    fields, where = {}, {}
    for lineno, line in lines:
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not key:
            _fail(source, lineno, f"expected 'key = value', got {line!r}")
        if key not in KNOWN_KEYS:
            _fail(source, lineno, f"unknown field {key!r}")
        if key in fields:
            _fail(source, lineno, f"duplicate field {key!r}")
        fields[key] = value
        where[key] = lineno

    entry_id = fields.get("id")
    if not entry_id:
        _fail(source, start, "missing field 'id'")

    def need(key):
        if key not in fields:
            _fail(source, start, f"missing field {key!r}", entry_id)
        return fields[key]

    def integer(key):
        try:
            return int(fields[key]) if key in fields else None
        except ValueError:
            _fail(source, where[key], f"field {key!r} must be an integer", entry_id)

    def expression(key):
        try:
            return surd_parse(fields[key])
        except SurdSyntaxError as exc:
            _fail(source, where[key], f"field {key!r}: {exc}", entry_id)

    kind = need("kind")
    if kind not in KINDS:
        _fail(source, where["kind"], f"kind must be one of {KINDS}", entry_id)
    status = need("status")
    if status not in STATUSES:
        _fail(source, where["status"], f"status must be one of {STATUSES}", entry_id)
    r_value = None
    if "r_value" in fields:
        try:
            r_value = Fraction(fields["r_value"])
        except (ValueError, ZeroDivisionError):
            _fail(source, where["r_value"], "r_value must be a rational", entry_id)
        if r_value <= 0:
            _fail(source, where["r_value"], "r_value must be positive", entry_id)

    common = dict(
        id=entry_id, kind=kind, status=status, r_value=r_value,
        aldawoud_n=integer("aldawoud_n"), citation=fields.get("citation", ""), line=start,
    )
    if kind == "constant":
        quantity = need("quantity")
        if quantity not in QUANTITIES:
            _fail(source, where["quantity"], f"quantity must be one of {QUANTITIES}", entry_id)
        for key in ("z", "a", "b", "s", "level", "normalization"):
            if key in fields:
                _fail(source, where[key], f"field {key!r} is not allowed on a constant", entry_id)
        need("value")
        return CatalogEntry(quantity=quantity, expressions={"value": expression("value")}, **common)

    s = integer("s")
    if s not in S_VALUES:
        _fail(source, where.get("s", start), f"s must be one of {S_VALUES}", entry_id)
    level = integer("level")
    if level is None:
        level = LEVEL_OF_S[s]
    elif level != LEVEL_OF_S[s]:
        _fail(source, where["level"], f"level {level} is inconsistent with s = {s}", entry_id)
    present = [k for k in SERIES_EXPRS if k in fields]
    if present and len(present) != len(SERIES_EXPRS):
        missing = sorted(set(SERIES_EXPRS) - set(present))
        _fail(source, start, f"missing field(s) {missing}", entry_id)
    if not present and status != "conjectured":
        _fail(source, start, "a series without z, a, b must have status 'conjectured'", entry_id)
    if "value" in fields or "quantity" in fields:
        _fail(source, start, "'value' and 'quantity' belong to constants", entry_id)
    return CatalogEntry(
        s=s, level=level,
        expressions={k: expression(k) for k in present},
        normalization=expression("normalization") if "normalization" in fields else None,
        **common,
    )


def parse(text: str, source: str = "<string>", deep: bool = False) -> Catalog:
    """Parse catalog text and validate it (see :func:`load`)."""
    entries, seen = [], {}
    for start, lines in _blocks(text):
        keys = [line.partition("=")[0].strip() for _, line in lines]
        if keys == ["format"]:
            tag = lines[0][1].partition("=")[2].strip()
            if entries or tag != FORMAT_TAG:
                _fail(source, start, f"unsupported header {tag!r}")
            continue
        entry = _parse_block(source, start, lines)
        if entry.id in seen:
            _fail(source, start, f"duplicate id (first defined on line {seen[entry.id]})", entry.id)
        seen[entry.id] = start
        entries.append(entry)
    catalog = Catalog(entries, source)
    _validate(catalog, deep)
    return catalog


def _validate(catalog: Catalog, deep: bool):
    """Check references and invariants by evaluating at a modest precision.

    Every expression must evaluate (names resolve, no cycles, no domain
    errors) and every series must have |z| < 1.  With ``deep`` the series
    are also summed and must reproduce 1/pi unless conjectured, and
    level-3 entries with an ``r_value`` must survive the recover_r round trip.
    """
    p = VALIDATION_BITS
    for e in catalog:
        exprs = list(e.expressions.items())
        if e.normalization is not None:
            exprs.append(("normalization", e.normalization))
        for key, expr in exprs:
            try:
                catalog.evaluate(expr, p)
            except (SurdSyntaxError, DomainError, ZeroDivisionError) as exc:
                _fail(catalog.source, e.line, f"field {key!r}: {exc}", e.id)
        if e.kind == "series" and not e.is_placeholder:
            params = catalog.series_params(e, p)
            if abs(params.z.value) >= 1:
                _fail(catalog.source, e.line, "|z| >= 1, the series diverges", e.id)
            if deep and e.status != "conjectured":
                _deep_check(catalog, e, params)


def _deep_check(catalog: Catalog, e: CatalogEntry, params: SeriesParams):
    # imported here: the builder depends on this module through singular values
    from .builder import recover_r
    from .errors import Level3Error
    from .series import pi_residual

    residual, _ = pi_residual(params, VALIDATION_BITS - 16)
    if abs(residual.value) > 2.0 ** (-VALIDATION_BITS + 32):
        _fail(catalog.source, e.line,
              f"series does not sum to 1/pi (residual {residual.to_decimal(5)})", e.id)
    if e.s == 3 and e.r_value is not None:
        try:
            found = recover_r(params).r.r
        except Level3Error as exc:
            _fail(catalog.source, e.line, f"recover_r failed: {exc}", e.id)
        if found != e.r_value:
            _fail(catalog.source, e.line, f"recover_r gives r = {found}, entry says {e.r_value}", e.id)


def load(path: str | Path | None = None, deep: bool = False) -> Catalog:
    """Load a catalog file, or the built-in dataset when ``path`` is None."""
    if path is None:
        text = resources.files("ramanujan3").joinpath("data/catalog.txt").read_text()
        source = "<built-in catalog>"
    else:
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise CatalogError(f"cannot read catalog {path}: {exc}") from exc
        source = str(path)
    return parse(text, source, deep)


_builtin: Catalog | None = None


def builtin() -> Catalog:
    """The built-in catalog, loaded once."""
    global _builtin
    if _builtin is None:
        _builtin = load()
    return _builtin


# ----------------------------------------------------------------------
# writing


def format_entry(entry: CatalogEntry) -> str:
    out = io.StringIO()
    rows = [("id", entry.id), ("kind", entry.kind)]
    if entry.kind == "constant":
        rows.append(("quantity", entry.quantity))
    else:
        rows += [("level", entry.level), ("s", entry.s)]
    rows += [(k, v.text) for k, v in entry.expressions.items()]
    if entry.normalization is not None:
        rows.append(("normalization", entry.normalization.text))
    if entry.r_value is not None:
        rows.append(("r_value", entry.r_value))
    if entry.aldawoud_n is not None:
        rows.append(("aldawoud_n", entry.aldawoud_n))
    rows.append(("status", entry.status))
    if entry.citation:
        rows.append(("citation", entry.citation))
    for key, value in rows:
        out.write(f"{key} = {value}\n")
    return out.getvalue()


def dumps(entries: Iterable[CatalogEntry]) -> str:
    parts = [f"format = {FORMAT_TAG}\n"] + [format_entry(e) for e in entries]
    return "---\n".join(parts)


def derived_entry(entry_id: str, r, z: str, a: str, b: str, citation: str = "") -> CatalogEntry:
    """A ``derived-here`` level-3 series entry from surd texts."""
    return CatalogEntry(
        id=entry_id, kind="series", status="derived-here", s=3, level=3,
        expressions={"z": surd_parse(z), "a": surd_parse(a), "b": surd_parse(b)},
        r_value=Fraction(r), citation=citation,
    )


__all__ = [
    "Catalog",
    "CatalogEntry",
    "builtin",
    "derived_entry",
    "dumps",
    "format_entry",
    "load",
    "parse",
    "surd_parse",
]
