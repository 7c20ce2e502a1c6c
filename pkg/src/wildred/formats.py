"""Plain-text formats for matrices, pencils, spatial matrices, quivers,
posets, and their representations.

The formats double as regression fixtures: printing is canonical, and
parse(print(v)) == v while print(parse(text)) is byte-identical on
normalized text.  Rational entries are written n or n/d.
"""

from __future__ import annotations

from .errors import ParseError, WildredError
from .fields import GF, QQ, FieldSpec
from .matrix import Mat
from .pencil import Pencil
from .reps import Poset, PosetRep, Quiver, QuiverRep
from .spatial import SpatialMatrix


def format_field(field: FieldSpec) -> str:
    return "Q" if not field.is_finite else f"GF({field.p})"


def parse_field_token(tok: str, line: int):
    if tok == "Q":
        return QQ
    if tok.startswith("GF(") and tok.endswith(")"):
        try:
            return GF(int(tok[3:-1]))
        except (ValueError, WildredError) as exc:
            raise ParseError(line, 7, f"bad field {tok!r}: {exc}") from exc
    raise ParseError(line, 7, f"bad field {tok!r}")


class _Lines:
    """Token cursor over meaningful lines (blank and # lines skipped)."""

    def __init__(self, text: str):
        self.rows = []
        for no, raw in enumerate(text.splitlines(), start=1):
            body = raw.split("#", 1)[0].strip()
            if body:
                self.rows.append((no, body))
        self.pos = 0

    def peek(self):
        return self.rows[self.pos] if self.pos < len(self.rows) else (0, "")

    def next(self, what: str):
        if self.pos >= len(self.rows):
            last = self.rows[-1][0] if self.rows else 1
            raise ParseError(last, 1, f"unexpected end of input, wanted {what}")
        row = self.rows[self.pos]
        self.pos += 1
        return row

    def done(self) -> bool:
        return self.pos >= len(self.rows)


def _parse_int(tok: str, line: int, what: str) -> int:
    try:
        return int(tok)
    except ValueError as exc:
        raise ParseError(line, 1, f"bad {what} {tok!r}") from exc


def _parse_matrix_block(lines: _Lines, field: FieldSpec) -> Mat:
    no, body = lines.next("matrix header")
    parts = body.split()
    if parts[0] != "matrix" or len(parts) != 3:
        raise ParseError(no, 1, f"expected 'matrix ROWS COLS', got {body!r}")
    rows = _parse_int(parts[1], no, "row count")
    cols = _parse_int(parts[2], no, "column count")
    data = []
    for i in range(rows):
        rno, rbody = lines.next(f"row {i + 1} of {rows}")
        toks = rbody.split()
        if len(toks) != cols:
            raise ParseError(rno, 1, f"expected {cols} entries, got {len(toks)}")
        for col, tok in enumerate(toks):
            try:
                data.append(field.parse(tok))
            except WildredError as exc:
                raise ParseError(rno, col + 1, str(exc)) from exc
    return Mat(rows, cols, field, data)


def format_matrix_block(M: Mat) -> str:
    out = [f"matrix {M.rows} {M.cols}"]
    for i in range(M.rows):
        out.append(" ".join(M.field.format(x) for x in M.row(i)))
    return "\n".join(out)


def parse_text(text: str):
    """Parse any supported object; dispatch on the first keyword."""
    lines = _Lines(text)
    no, body = lines.peek()
    if not body:
        raise ParseError(1, 1, "empty input")
    head = body.split()[0]
    if head == "field":
        return _parse_field_led(lines)
    if head == "quiver":
        return _parse_quiver_file(lines)
    if head == "poset":
        return _parse_poset_file(lines)
    raise ParseError(no, 1, f"unknown header {head!r}")


def _parse_field_line(lines: _Lines) -> FieldSpec:
    no, body = lines.next("field line")
    parts = body.split()
    if parts[0] != "field" or len(parts) != 2:
        raise ParseError(no, 1, f"expected 'field Q' or 'field GF(p)', got {body!r}")
    return parse_field_token(parts[1], no)


def _parse_field_led(lines: _Lines):
    field = _parse_field_line(lines)
    no, body = lines.peek()
    head = body.split()[0] if body else ""
    if head == "spatial":
        lines.next("spatial header")
        parts = body.split()
        if len(parts) != 4:
            raise ParseError(no, 1, "expected 'spatial M N Q'")
        m = _parse_int(parts[1], no, "m")
        n = _parse_int(parts[2], no, "n")
        q = _parse_int(parts[3], no, "q")
        slices = []
        for k in range(q):
            data = []
            for i in range(m):
                rno, rbody = lines.next(f"slice {k + 1} row {i + 1}")
                toks = rbody.split()
                if len(toks) != n:
                    raise ParseError(rno, 1, f"expected {n} entries, got {len(toks)}")
                for col, tok in enumerate(toks):
                    try:
                        data.append(field.parse(tok))
                    except WildredError as exc:
                        raise ParseError(rno, col + 1, str(exc)) from exc
            slices.append(Mat(m, n, field, data))
        if not lines.done():
            eno, ebody = lines.peek()
            raise ParseError(eno, 1, f"trailing content {ebody!r}")
        flat = []
        for i in range(m):
            for j in range(n):
                for k in range(q):
                    flat.append(slices[k][i, j])
        return SpatialMatrix(m, n, q, field, flat)
    if head == "matrix":
        mats = [_parse_matrix_block(lines, field)]
        while not lines.done():
            mats.append(_parse_matrix_block(lines, field))
        if len(mats) == 1:
            return mats[0]
        if len(mats) == 2:
            return Pencil(mats[0], mats[1])
        raise ParseError(lines.rows[-1][0], 1, "expected one or two matrix blocks")
    raise ParseError(no, 1, f"expected 'matrix' or 'spatial' after field, got {body!r}")


def _parse_quiver_file(lines: _Lines):
    no, body = lines.next("quiver header")
    parts = body.split()
    if len(parts) != 2:
        raise ParseError(no, 1, "expected 'quiver V'")
    v = _parse_int(parts[1], no, "vertex count")
    arrows = []
    while not lines.done() and lines.peek()[1].split()[0] == "arrow":
        ano, abody = lines.next("arrow line")
        parts = abody.split()
        if len(parts) != 4:
            raise ParseError(ano, 1, "expected 'arrow ID SRC DST'")
        arrows.append((parts[1], _parse_int(parts[2], ano, "source"),
                       _parse_int(parts[3], ano, "target")))
    try:
        quiver = Quiver.make(v, arrows)
    except WildredError as exc:
        raise ParseError(no, 1, str(exc)) from exc
    if lines.done():
        return quiver
    field = _parse_field_line(lines)
    dno, dbody = lines.next("dims line")
    parts = dbody.split()
    if parts[0] != "dims" or len(parts) != v + 1:
        raise ParseError(dno, 1, f"expected 'dims' with {v} entries")
    dims = [_parse_int(p, dno, "dimension") for p in parts[1:]]
    mats = [_parse_matrix_block(lines, field) for _ in arrows]
    if not lines.done():
        eno, ebody = lines.peek()
        raise ParseError(eno, 1, f"trailing content {ebody!r}")
    try:
        return QuiverRep.make(quiver, field, dims, mats)
    except WildredError as exc:
        raise ParseError(dno, 1, str(exc)) from exc


def _parse_poset_file(lines: _Lines):
    no, body = lines.next("poset header")
    parts = body.split()
    if len(parts) != 2:
        raise ParseError(no, 1, "expected 'poset T'")
    t = _parse_int(parts[1], no, "element count")
    rels = []
    while not lines.done() and lines.peek()[1].split()[0] == "rel":
        rno, rbody = lines.next("rel line")
        parts = rbody.split()
        if len(parts) != 3:
            raise ParseError(rno, 1, "expected 'rel I J'")
        rels.append((_parse_int(parts[1], rno, "element"),
                     _parse_int(parts[2], rno, "element")))
    try:
        poset = Poset.make(t, rels)
    except WildredError as exc:
        raise ParseError(no, 1, str(exc)) from exc
    if lines.done():
        return poset
    field = _parse_field_line(lines)
    wno, wbody = lines.next("widths line")
    parts = wbody.split()
    if parts[0] != "widths" or len(parts) != t + 1:
        raise ParseError(wno, 1, f"expected 'widths' with {t} entries")
    widths = [_parse_int(p, wno, "width") for p in parts[1:]]
    mat = _parse_matrix_block(lines, field)
    if not lines.done():
        eno, ebody = lines.peek()
        raise ParseError(eno, 1, f"trailing content {ebody!r}")
    try:
        return PosetRep.make(poset, field, widths, mat)
    except WildredError as exc:
        raise ParseError(wno, 1, str(exc)) from exc


def parse_path(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        return parse_text(fh.read())


def format_object(obj) -> str:
    """Canonical text form; parse(format_object(v)) == v."""
    if isinstance(obj, Mat):
        return f"field {format_field(obj.field)}\n{format_matrix_block(obj)}\n"
    if isinstance(obj, Pencil):
        return (f"field {format_field(obj.field)}\n"
                f"{format_matrix_block(obj.A)}\n{format_matrix_block(obj.B)}\n")
    if isinstance(obj, SpatialMatrix):
        out = [f"field {format_field(obj.field)}", f"spatial {obj.m} {obj.n} {obj.q}"]
        for k in range(obj.q):
            for i in range(obj.m):
                out.append(" ".join(obj.field.format(obj[i, j, k]) for j in range(obj.n)))
        return "\n".join(out) + "\n"
    if isinstance(obj, Quiver):
        out = [f"quiver {obj.vertices}"]
        out.extend(f"arrow {a} {s} {t}" for a, s, t in obj.arrows)
        return "\n".join(out) + "\n"
    if isinstance(obj, QuiverRep):
        out = [format_object(obj.quiver).rstrip("\n")]
        out.append(f"field {format_field(obj.field)}")
        out.append("dims " + " ".join(str(d) for d in obj.dims))
        out.extend(format_matrix_block(M) for M in obj.mats)
        return "\n".join(out) + "\n"
    if isinstance(obj, Poset):
        out = [f"poset {obj.size}"]
        out.extend(f"rel {i} {j}" for i, j in sorted(obj.relation))
        return "\n".join(out) + "\n"
    if isinstance(obj, PosetRep):
        out = [format_object(obj.poset).rstrip("\n")]
        out.append(f"field {format_field(obj.field)}")
        out.append("widths " + " ".join(str(w) for w in obj.widths))
        out.append(format_matrix_block(obj.mat))
        return "\n".join(out) + "\n"
    raise WildredError(f"cannot format {type(obj).__name__}")
