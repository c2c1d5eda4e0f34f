"""``.rig`` session files: one field, one ring, and named objects over it.

    # comments run to the end of the line
    field F101
    ring R = poly(x1, x2) / ideal(x1^2, x1*x2)
    ideal a = ideal(x2)
    prime m = ideal(x1, x2)
    module N = coker(rows=1, [[x1]])
    module K = coker(rows=2, [[x1, 0], [0, x2]], degrees=[0, 1])
    complex C = { bottom=0, ranks=[1,1], d1=[[x2]] }

Statements end at a line break; line breaks inside brackets are ignored.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

from .coeff import FieldSpec, GF, parse_field
from .groebner import Ideal, PrimeSpec
from .lexer import ParseError, Token, TokenStream, tokenize
from .modres import FreeComplex, Matrix, ModulePresentation
from .polyring import PolyRing, QuotientRing, UnitIdeal, format_poly, parse_poly_expr

__all__ = ["Session", "parse_session", "render_session", "load_session", "ParseError", "UnitIdeal"]

_OPEN = {"(": ")", "[": "]", "{": "}"}


@dataclass
class Session:
    field: FieldSpec
    ring: QuotientRing
    ring_name: str
    objects: dict = field(default_factory=dict)
    source: str = ""

    @property
    def declarations(self) -> int:
        """Number of statements: field, ring and each named object."""
        return 2 + len(self.objects)

    def get(self, name: str, kind=None):
        if name not in self.objects:
            known = ", ".join(sorted(self.objects)) or "none"
            raise KeyError(f"no object named {name!r} (known: {known})")
        obj = self.objects[name]
        if kind is not None and not isinstance(obj, kind):
            raise TypeError(f"{name} is a {type(obj).__name__}, not a {kind.__name__}")
        return obj

    def content_hash(self) -> str:
        return hashlib.sha256(render_session(self).encode()).hexdigest()[:16]

    def __eq__(self, other):
        return isinstance(other, Session) and render_session(self) == render_session(other)


def _strip_bracketed_newlines(tokens: list[Token]) -> list[Token]:
    out, depth = [], 0
    for t in tokens:
        if t.kind == "OP" and t.text in _OPEN:
            depth += 1
        elif t.kind == "OP" and t.text in _OPEN.values():
            depth = max(depth - 1, 0)
        if t.kind == "NEWLINE" and depth:
            continue
        out.append(t)
    return out


class _Parser:
    def __init__(self, text: str):
        self.s = TokenStream(_strip_bracketed_newlines(tokenize(text, newlines=True)))
        self.field: FieldSpec | None = None
        self.ring: QuotientRing | None = None
        self.ring_name = ""
        self.objects: dict = {}

    def skip_newlines(self):
        while self.s.peek().kind == "NEWLINE":
            self.s.next()

    def end_statement(self):
        tok = self.s.peek()
        if tok.kind not in ("NEWLINE", "EOF"):
            raise ParseError(tok.line, tok.col, "end of line", tok.text)

    def name(self, what="a name") -> Token:
        return self.s.expect_kind("NAME", what)

    def fresh_name(self) -> Token:
        tok = self.name()
        if tok.text in self.objects or tok.text == self.ring_name:
            raise ParseError(tok.line, tok.col, "a new name", f"duplicate {tok.text}")
        return tok

    def int_lit(self) -> int:
        neg = self.s.accept("-")
        v = int(self.s.expect_kind("INT", "an integer").text)
        return -v if neg else v

    def int_list(self) -> list[int]:
        self.s.expect("[")
        out = []
        if not self.s.at("]"):
            out.append(self.int_lit())
            while self.s.accept(","):
                out.append(self.int_lit())
        self.s.expect("]")
        return out

    def poly(self):
        return parse_poly_expr(self.s, self.ring.ambient)

    def poly_list(self, close=")"):
        out = []
        if not self.s.at(close):
            out.append(self.poly())
            while self.s.accept(","):
                out.append(self.poly())
        return out

    def rows(self) -> list[list]:
        self.s.expect("[")
        rows = []
        if not self.s.at("]"):
            while True:
                tok = self.s.expect("[")
                rows.append((tok, self.poly_list("]")))
                self.s.expect("]")
                if not self.s.accept(","):
                    break
        self.s.expect("]")
        if rows:
            width = len(rows[0][1])
            for tok, r in rows:
                if len(r) != width:
                    raise ParseError(tok.line, tok.col, f"a row of length {width}", f"length {len(r)}")
        return [r for _, r in rows]

    def require_ring(self, tok):
        if self.ring is None:
            raise ParseError(tok.line, tok.col, "a ring declaration first", tok.text)

    # statements

    def parse(self) -> Session:
        self.skip_newlines()
        while self.s.peek().kind != "EOF":
            kw = self.name("a declaration keyword")
            handler = getattr(self, f"decl_{kw.text}", None)
            if handler is None:
                raise ParseError(kw.line, kw.col, "field, ring, ideal, prime, module or complex", kw.text)
            handler(kw)
            self.end_statement()
            self.skip_newlines()
        if self.ring is None:
            tok = self.s.peek()
            raise ParseError(tok.line, tok.col, "a ring declaration", "end of input")
        return Session(self.field, self.ring, self.ring_name, self.objects)

    def decl_field(self, kw):
        if self.field is not None or self.ring is not None:
            raise ParseError(kw.line, kw.col, "a single field declaration before the ring", "field")
        tok = self.name("QQ or F<p>")
        try:
            self.field = parse_field(tok.text)
        except ValueError as e:
            raise ParseError(tok.line, tok.col, "QQ or F<p> with p prime", tok.text) from e

    def decl_ring(self, kw):
        if self.ring is not None:
            raise ParseError(kw.line, kw.col, "one ring per session", "ring")
        name = self.name()
        self.s.expect("=")
        self.s.expect("poly")
        self.s.expect("(")
        variables = [self.name("a variable").text]
        while self.s.accept(","):
            variables.append(self.name("a variable").text)
        self.s.expect(")")
        P = PolyRing(self.field or GF(101), variables)
        self.field = P.field
        gens = []
        if self.s.accept("/"):
            self.s.expect("ideal")
            self.s.expect("(")
            self.ring = QuotientRing(P, [], name=name.text)  # for parsing only
            gens = self.poly_list()
            self.s.expect(")")
        self.ring = QuotientRing(P, gens, name=name.text)
        self.ring_name = name.text

    def _ideal_body(self, kw) -> Ideal:
        self.require_ring(kw)
        self.s.expect("ideal")
        self.s.expect("(")
        gens = self.poly_list()
        self.s.expect(")")
        return Ideal(self.ring, gens)

    def decl_ideal(self, kw):
        self.require_ring(kw)
        name = self.fresh_name()
        self.s.expect("=")
        I = self._ideal_body(kw)
        I.name = name.text
        self.objects[name.text] = I

    def decl_prime(self, kw):
        self.require_ring(kw)
        name = self.fresh_name()
        self.s.expect("=")
        I = self._ideal_body(kw)
        self.objects[name.text] = PrimeSpec(I, name=name.text)

    def decl_module(self, kw):
        self.require_ring(kw)
        name = self.fresh_name()
        self.s.expect("=")
        if self.s.accept("free"):
            self.s.expect("(")
            n = self.int_lit()
            self.s.expect(")")
            self.objects[name.text] = ModulePresentation.free(self.ring, n, name=name.text)
            return
        self.s.expect("coker")
        self.s.expect("(")
        self.s.expect("rows")
        self.s.expect("=")
        tok = self.s.peek()
        nrows = self.int_lit()
        if nrows < 0:
            raise ParseError(tok.line, tok.col, "a nonnegative row count", str(nrows))
        self.s.expect(",")
        tok = self.s.peek()
        rows = self.rows()
        if rows and len(rows) != nrows:
            raise ParseError(tok.line, tok.col, f"{nrows} rows", f"{len(rows)} rows")
        degrees = None
        if self.s.accept(","):
            self.s.expect("degrees")
            self.s.expect("=")
            tok = self.s.peek()
            degrees = self.int_list()
            if len(degrees) != nrows:
                raise ParseError(tok.line, tok.col, f"{nrows} degrees", f"{len(degrees)}")
        self.s.expect(")")
        A = Matrix.from_rows(self.ring, rows, len(rows[0]) if rows else 0) if rows else Matrix.zero(self.ring, nrows, 0)
        if degrees is not None:
            for c in A.cols:
                if len({sum(m) + degrees[r] for (r, m) in c}) > 1:
                    raise ParseError(tok.line, tok.col, "relations homogeneous for the given degrees", "an inhomogeneous column")
        M = ModulePresentation(self.ring, nrows, A.cols, degrees=degrees, name=name.text)
        M.explicit_degrees = degrees is not None
        self.objects[name.text] = M

    def decl_complex(self, kw):
        self.require_ring(kw)
        name = self.fresh_name()
        self.s.expect("=")
        self.s.expect("{")
        bottom, ranks, diffs = 0, None, {}
        seen = set()
        while not self.s.at("}"):
            key = self.name("bottom, ranks or d<i>")
            if key.text in seen:
                raise ParseError(key.line, key.col, "each key once", key.text)
            seen.add(key.text)
            self.s.expect("=")
            if key.text == "bottom":
                bottom = self.int_lit()
            elif key.text == "ranks":
                ranks = self.int_list()
            elif key.text.startswith("d") and (key.text[1:].isdigit() or key.text[1:2] == "m"):
                idx = key.text[1:]
                i = -int(idx[1:]) if idx.startswith("m") else int(idx)
                diffs[i] = (key, self.rows())
            else:
                raise ParseError(key.line, key.col, "bottom, ranks or d<i>", key.text)
            if not self.s.accept(","):
                break
        close = self.s.expect("}")
        if ranks is None:
            raise ParseError(close.line, close.col, "a ranks entry", "}")
        tmp = FreeComplex(self.ring, bottom, ranks, check=False)
        mats = {}
        for i, (key, rows) in sorted(diffs.items()):
            nr, nc = tmp.rank(i - 1), tmp.rank(i)
            if (nr and len(rows) != nr) or (rows and len(rows[0]) != nc):
                raise ParseError(key.line, key.col, f"a {nr}x{nc} matrix", f"{len(rows)} rows")
            mats[i] = Matrix.from_rows(self.ring, rows, nc) if rows else Matrix.zero(self.ring, nr, nc)
        C = FreeComplex(self.ring, bottom, ranks, mats, check=False)
        if not C.dd_zero():
            raise ParseError(close.line, close.col, "differentials with d*d = 0", "d*d != 0")
        C.name = name.text
        self.objects[name.text] = C


def parse_session(text: str) -> Session:
    S = _Parser(text).parse()
    S.source = text
    return S


def load_session(path: str) -> Session:
    with open(path, encoding="utf-8") as fh:
        return parse_session(fh.read())


def _rows_text(rows) -> str:
    return "[" + ", ".join("[" + ", ".join(rows_i) + "]" for rows_i in rows) + "]"


def _matrix_rows(A: Matrix) -> list[list[str]]:
    return [[format_poly(f) for f in row] for row in A.rows()]


def render_session(S: Session) -> str:
    """Canonical text; parse_session(render_session(S)) == S."""
    R = S.ring
    lines = [f"field {S.field.name}"]
    ring = f"ring {S.ring_name} = poly({', '.join(R.variables)})"
    if R.ideal_gens:
        ring += " / ideal(" + ", ".join(format_poly(g) for g in R.ideal_gens) + ")"
    lines.append(ring)
    for name, obj in S.objects.items():
        if isinstance(obj, PrimeSpec):
            gens = ", ".join(format_poly(g) for g in obj.ideal.generators)
            lines.append(f"prime {name} = ideal({gens})")
        elif isinstance(obj, Ideal):
            gens = ", ".join(format_poly(g) for g in obj.generators)
            lines.append(f"ideal {name} = ideal({gens})")
        elif isinstance(obj, ModulePresentation):
            rows = _matrix_rows(obj.matrix) if obj.relations else []
            explicit = getattr(obj, "explicit_degrees", False)
            degs = ", ".join(str(d) for d in obj.degrees) if explicit else None
            text = f"module {name} = coker(rows={obj.rank}, {_rows_text(rows)}"
            if degs is not None and obj.rank:
                text += f", degrees=[{degs}]"
            lines.append(text + ")")
        elif isinstance(obj, FreeComplex):
            parts = [f"bottom={obj.bottom}", "ranks=[" + ", ".join(map(str, obj.ranks)) + "]"]
            for i in sorted(obj.d):
                key = f"d{i}" if i >= 0 else f"dm{-i}"
                parts.append(f"{key}={_rows_text(_matrix_rows(obj.d[i]))}")
            lines.append(f"complex {name} = {{ " + ", ".join(parts) + " }")
    return "\n".join(lines) + "\n"
