"""Line-oriented script front end.

Grammar (one statement per logical line; lines continue while brackets are
open; `#` starts a comment):

    algebra <id> = [n1,n2,...]
    elem <id> in <algebra> = { [[re+imi, ...], ...] ; ... }
    hom <id> : <A> -> <B> = mult [[...]] unitary (default | <elem-id>)
    tensor <id> = <A> (x) <B>
    product <id> = <A> * <B> * ...
    mediator <id> = mediate(<hom>, <hom>)
    check <suite> <args> trials=<n> seed=<n> tol=<float>
    report json <path>

Identifiers must be declared before use and argument kinds must match;
both are enforced during parsing, so a parsed Script is well-formed by
construction.  Scripts are diffable regression fixtures: `pretty_print`
emits a canonical rendering whose re-parse is structurally equal.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .checks import REGISTRY
from .errors import (
    MultiplicityOverflow,
    NonPositiveBlockSize,
    ScriptNameError,
    ScriptSyntaxError,
    ScriptTypeError,
)


@dataclass(frozen=True)
class AlgebraDecl:
    name: str
    sizes: tuple[int, ...]
    line: int = field(compare=False, default=0)


@dataclass(frozen=True)
class ElemDecl:
    name: str
    algebra: str
    blocks: tuple[tuple[tuple[complex, ...], ...], ...]
    line: int = field(compare=False, default=0)


@dataclass(frozen=True)
class HomDecl:
    name: str
    source: str
    target: str
    counts: tuple[tuple[int, ...], ...]
    unitary: str | None  # None means the default identity conjugation
    line: int = field(compare=False, default=0)


@dataclass(frozen=True)
class TensorDecl:
    name: str
    left: str
    right: str
    line: int = field(compare=False, default=0)


@dataclass(frozen=True)
class ProductDecl:
    name: str
    factors: tuple[str, ...]
    line: int = field(compare=False, default=0)


@dataclass(frozen=True)
class MediatorDecl:
    name: str
    first: str
    second: str
    line: int = field(compare=False, default=0)


@dataclass(frozen=True)
class CheckDecl:
    suite: str
    args: tuple[str | int, ...]
    trials: int | None
    seed: int | None
    tol: float | None
    line: int = field(compare=False, default=0)


@dataclass(frozen=True)
class ReportDecl:
    path: str
    line: int = field(compare=False, default=0)


@dataclass(frozen=True)
class Script:
    statements: tuple


_TOKEN_RE = re.compile(
    r"""(?P<ws>\s+)
      | (?P<number>(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?i?)
      | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
      | (?P<arrow>->)
      | (?P<tensorop>\(x\))
      | (?P<punct>[\[\]{}()=:,;*+\-])
    """,
    re.X,
)


@dataclass(frozen=True)
class _Token:
    kind: str  # number | ident | arrow | tensorop | punct
    text: str
    line: int
    column: int


def _tokenize(text: str, line_no: int):
    tokens, pos = [], 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ScriptSyntaxError(
                f"unexpected character {text[pos]!r}", line_no, pos + 1
            )
        kind = m.lastgroup
        if kind != "ws":
            tokens.append(_Token(kind, m.group(), line_no, pos + 1))
        pos = m.end()
    return tokens


def _logical_lines(text: str):
    """Join physical lines while brackets stay open; strip comments."""
    out = []
    buffer, start, depth = "", 0, 0
    for idx, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        if not buffer and not body.strip():
            continue
        if not buffer:
            start = idx
        buffer += ("\n" if buffer else "") + body
        depth = _depth(buffer)
        if depth > 0:
            continue
        if buffer.strip():
            out.append((start, buffer))
        buffer = ""
    if buffer.strip():
        if _depth(buffer) > 0:
            raise ScriptSyntaxError("unbalanced brackets at end of input", start, 1)
        out.append((start, buffer))
    return out


def _depth(s: str) -> int:
    return sum(s.count(c) for c in "[{(") - sum(s.count(c) for c in "]})")


class _Parser:
    """One statement per logical line, with a symbol table for name and
    kind checking."""

    def __init__(self):
        # name -> ("algebra", sizes) | ("elem", algebra name)
        #       | ("hom", (source sizes, target sizes))
        self.symbols = {}

    # --- token stream helpers -------------------------------------------
    def _fail(self, msg, tok=None):
        if tok is None:
            raise ScriptSyntaxError(msg, self.line, 1)
        raise ScriptSyntaxError(msg, tok.line, tok.column)

    def _peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def _next(self):
        tok = self._peek()
        if tok is None:
            self._fail("unexpected end of statement")
        self.pos += 1
        return tok

    def _expect(self, text):
        tok = self._next()
        if tok.text != text:
            self._fail(f"expected {text!r}, found {tok.text!r}", tok)
        return tok

    def _expect_ident(self):
        tok = self._next()
        if tok.kind != "ident":
            self._fail(f"expected an identifier, found {tok.text!r}", tok)
        return tok

    def _expect_int(self):
        tok = self._next()
        if tok.kind != "number" or tok.text.endswith("i") or "." in tok.text or "e" in tok.text.lower():
            self._fail(f"expected an integer, found {tok.text!r}", tok)
        return int(tok.text), tok

    def _done(self):
        tok = self._peek()
        if tok is not None:
            self._fail(f"trailing input {tok.text!r}", tok)

    # --- symbol table helpers -------------------------------------------
    def _declare(self, tok, entry):
        if tok.text in self.symbols:
            self._fail(f"identifier {tok.text!r} is already declared", tok)
        self.symbols[tok.text] = entry

    def _lookup(self, tok, kind=None):
        entry = self.symbols.get(tok.text)
        if entry is None:
            raise ScriptNameError(
                f"undeclared identifier {tok.text!r}", tok.line, tok.column
            )
        if kind is not None and entry[0] != kind:
            raise ScriptTypeError(
                f"{tok.text!r} is a {entry[0]}, expected a {kind}",
                tok.line,
                tok.column,
            )
        return entry

    # --- literals ---------------------------------------------------------
    def _parse_number_token(self, tok):
        if tok.kind == "ident" and tok.text == "i":
            return 1.0, True
        if tok.kind != "number":
            self._fail(f"expected a number, found {tok.text!r}", tok)
        if tok.text.endswith("i"):
            body = tok.text[:-1] or "1"
            return float(body), True
        return float(tok.text), False

    def _parse_complex(self):
        sign = 1.0
        tok = self._peek()
        if tok is not None and tok.text in {"+", "-"}:
            self._next()
            sign = -1.0 if tok.text == "-" else 1.0
        value, imag = self._parse_number_token(self._next())
        first = complex(0, sign * value) if imag else complex(sign * value, 0)
        tok = self._peek()
        if tok is not None and tok.text in {"+", "-"}:
            self._next()
            sign2 = -1.0 if tok.text == "-" else 1.0
            value2, imag2 = self._parse_number_token(self._next())
            if imag == imag2:
                self._fail("complex literal needs one real and one imaginary part", tok)
            second = complex(0, sign2 * value2) if imag2 else complex(sign2 * value2, 0)
            return first + second
        return first

    def _parse_int_list(self):
        self._expect("[")
        items = []
        if self._peek() is not None and self._peek().text == "]":
            self._next()
            return tuple(items)
        while True:
            value, tok = self._expect_int()
            items.append(value)
            tok = self._next()
            if tok.text == "]":
                return tuple(items)
            if tok.text != ",":
                self._fail(f"expected ',' or ']', found {tok.text!r}", tok)

    def _parse_row(self):
        self._expect("[")
        row = [self._parse_complex()]
        while True:
            tok = self._next()
            if tok.text == "]":
                return tuple(row)
            if tok.text != ",":
                self._fail(f"expected ',' or ']', found {tok.text!r}", tok)
            row.append(self._parse_complex())

    def _parse_matrix(self):
        opening = self._expect("[")
        rows = [self._parse_row()]
        while True:
            tok = self._next()
            if tok.text == "]":
                break
            if tok.text != ",":
                self._fail(f"expected ',' or ']', found {tok.text!r}", tok)
            rows.append(self._parse_row())
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise ScriptTypeError(
                "matrix rows have unequal lengths", opening.line, opening.column
            )
        return tuple(rows)

    def _parse_int_matrix(self):
        opening = self._expect("[")
        rows = [self._parse_int_list()]
        while True:
            tok = self._next()
            if tok.text == "]":
                break
            if tok.text != ",":
                self._fail(f"expected ',' or ']', found {tok.text!r}", tok)
            rows.append(self._parse_int_list())
        if rows and any(len(r) != len(rows[0]) for r in rows):
            raise ScriptTypeError(
                "count matrix rows have unequal lengths", opening.line, opening.column
            )
        return tuple(rows)

    # --- statements -------------------------------------------------------
    def parse_statement(self, line_no, text):
        self.line = line_no
        # report paths may contain characters outside the token alphabet,
        # so that statement is matched on the raw line
        if re.match(r"\s*report\b", text):
            m = re.match(r"\s*report\s+(\w+)\s+(.*?)\s*$", text)
            if m is None or m.group(1) != "json":
                raise ScriptSyntaxError("expected 'report json <path>'", line_no, 1)
            if not m.group(2):
                raise ScriptSyntaxError("report json needs a path", line_no, 1)
            return ReportDecl(m.group(2), line_no)
        self.tokens = _tokenize(text, line_no)
        self.pos = 0
        if not self.tokens:
            return None
        head = self._expect_ident()
        handler = {
            "algebra": self._stmt_algebra,
            "elem": self._stmt_elem,
            "hom": self._stmt_hom,
            "tensor": self._stmt_tensor,
            "product": self._stmt_product,
            "mediator": self._stmt_mediator,
            "check": self._stmt_check,
        }.get(head.text)
        if handler is None:
            self._fail(f"unknown statement {head.text!r}", head)
        return handler(head)

    def _stmt_algebra(self, head):
        name = self._expect_ident()
        self._expect("=")
        sizes = self._parse_int_list()
        self._done()
        for n in sizes:
            if n <= 0:
                raise NonPositiveBlockSize(
                    f"block size {n} is not >= 1", head.line, head.column
                )
        self._declare(name, ("algebra", sizes))
        return AlgebraDecl(name.text, sizes, head.line)

    def _stmt_elem(self, head):
        name = self._expect_ident()
        self._expect("in")
        alg = self._expect_ident()
        _, sizes = self._lookup(alg, "algebra")
        self._expect("=")
        self._expect("{")
        blocks = []
        tok = self._peek()
        if tok is not None and tok.text == "}":
            self._next()
        else:
            while True:
                blocks.append(self._parse_matrix())
                tok = self._next()
                if tok.text == "}":
                    break
                if tok.text != ";":
                    self._fail(f"expected ';' or '}}', found {tok.text!r}", tok)
        self._done()
        if len(blocks) != len(sizes):
            raise ScriptTypeError(
                f"{len(blocks)} blocks for algebra of {len(sizes)} blocks",
                head.line,
                head.column,
            )
        for n, blk in zip(sizes, blocks):
            if len(blk) != n or any(len(row) != n for row in blk):
                raise ScriptTypeError(
                    f"block of shape {len(blk)}x{len(blk[0])} does not match size {n}",
                    head.line,
                    head.column,
                )
        self._declare(name, ("elem", alg.text))
        return ElemDecl(name.text, alg.text, tuple(blocks), head.line)

    def _stmt_hom(self, head):
        name = self._expect_ident()
        self._expect(":")
        src = self._expect_ident()
        _, src_sizes = self._lookup(src, "algebra")
        self._expect("->")
        tgt = self._expect_ident()
        _, tgt_sizes = self._lookup(tgt, "algebra")
        self._expect("=")
        self._expect("mult")
        counts = self._parse_int_matrix()
        self._expect("unitary")
        utok = self._expect_ident()
        unitary = None
        if utok.text != "default":
            kind, owner = self._lookup(utok, "elem")
            if self.symbols[owner][1] != tgt_sizes:
                raise ScriptTypeError(
                    f"unitary element {utok.text!r} lives in the wrong algebra",
                    utok.line,
                    utok.column,
                )
            unitary = utok.text
        self._done()
        if len(counts) != len(tgt_sizes) or (
            counts and len(counts[0]) != len(src_sizes)
        ):
            raise ScriptTypeError(
                f"count matrix shape does not match ({len(tgt_sizes)}, {len(src_sizes)})",
                head.line,
                head.column,
            )
        for j, m in enumerate(tgt_sizes):
            used = sum(c * n for c, n in zip(counts[j], src_sizes))
            if any(c < 0 for c in counts[j]):
                raise MultiplicityOverflow(
                    f"negative count in target block {j}", head.line, head.column
                )
            if used > m:
                raise MultiplicityOverflow(
                    f"target block {j} holds {m} rows, counts need {used}",
                    head.line,
                    head.column,
                )
        self._declare(name, ("hom", (src_sizes, tgt_sizes)))
        return HomDecl(name.text, src.text, tgt.text, counts, unitary, head.line)

    def _tensor_sizes(self, left, right):
        return tuple(n * m for n in left for m in right)

    def _stmt_tensor(self, head):
        name = self._expect_ident()
        self._expect("=")
        left = self._expect_ident()
        _, ls = self._lookup(left, "algebra")
        tok = self._next()
        if tok.kind != "tensorop":
            self._fail(f"expected '(x)', found {tok.text!r}", tok)
        right = self._expect_ident()
        _, rs = self._lookup(right, "algebra")
        self._done()
        self._declare(name, ("algebra", self._tensor_sizes(ls, rs)))
        return TensorDecl(name.text, left.text, right.text, head.line)

    def _stmt_product(self, head):
        name = self._expect_ident()
        self._expect("=")
        factors, sizes = [], []
        while True:
            tok = self._expect_ident()
            _, s = self._lookup(tok, "algebra")
            factors.append(tok.text)
            sizes.extend(s)
            nxt = self._peek()
            if nxt is None:
                break
            if nxt.text != "*":
                self._fail(f"expected '*', found {nxt.text!r}", nxt)
            self._next()
        self._declare(name, ("algebra", tuple(sizes)))
        return ProductDecl(name.text, tuple(factors), head.line)

    def _stmt_mediator(self, head):
        name = self._expect_ident()
        self._expect("=")
        self._expect("mediate")
        self._expect("(")
        first = self._expect_ident()
        _, (fsrc, ftgt) = self._lookup(first, "hom")
        self._expect(",")
        second = self._expect_ident()
        _, (gsrc, gtgt) = self._lookup(second, "hom")
        self._expect(")")
        self._done()
        if ftgt != gtgt:
            raise ScriptTypeError(
                "mediate() needs homs with a shared target", head.line, head.column
            )
        self._declare(
            name, ("hom", (self._tensor_sizes(fsrc, gsrc), ftgt))
        )
        return MediatorDecl(name.text, first.text, second.text, head.line)

    def _stmt_check(self, head):
        suite_tok = self._expect_ident()
        suite = suite_tok.text
        if suite not in REGISTRY:
            raise ScriptNameError(
                f"unknown check suite {suite!r}", suite_tok.line, suite_tok.column
            )
        kind = REGISTRY[suite][1]
        args = []
        trials = seed = tol = None
        while True:
            tok = self._peek()
            if tok is None:
                break
            if tok.kind == "ident" and self._peek_is_param():
                ptok = self._next()
                self._expect("=")
                if ptok.text == "trials":
                    trials, _ = self._expect_int()
                elif ptok.text == "seed":
                    seed, _ = self._expect_int()
                elif ptok.text == "tol":
                    vtok = self._next()
                    value, imag = self._parse_number_token(vtok)
                    if imag:
                        self._fail("tol must be real", vtok)
                    tol = float(value)
                else:
                    self._fail(f"unknown parameter {ptok.text!r}", ptok)
                continue
            if tok.kind == "ident":
                self._next()
                if kind == "int":
                    raise ScriptTypeError(
                        f"suite {suite!r} takes integer arguments",
                        tok.line,
                        tok.column,
                    )
                self._lookup(tok, "algebra")
                args.append(tok.text)
            elif tok.kind == "number":
                value, vtok = self._expect_int()
                if kind == "algebra":
                    raise ScriptTypeError(
                        f"suite {suite!r} takes algebra arguments",
                        vtok.line,
                        vtok.column,
                    )
                args.append(value)
            else:
                self._fail(f"unexpected token {tok.text!r}", tok)
        lo, hi = REGISTRY[suite][2], REGISTRY[suite][3]
        if not lo <= len(args) <= hi:
            raise ScriptTypeError(
                f"suite {suite!r} takes between {lo} and {hi} arguments, "
                f"got {len(args)}",
                head.line,
                head.column,
            )
        return CheckDecl(suite, tuple(args), trials, seed, tol, head.line)

    def _peek_is_param(self):
        tok = self.tokens[self.pos]
        if tok.kind != "ident" or tok.text not in {"trials", "seed", "tol"}:
            return False
        nxt = self.tokens[self.pos + 1] if self.pos + 1 < len(self.tokens) else None
        return nxt is not None and nxt.text == "="

def parse(text: str) -> Script:
    """Parse script text; raises script errors carrying line/column."""
    parser = _Parser()
    statements = []
    for line_no, logical in _logical_lines(text):
        stmt = parser.parse_statement(line_no, logical)
        if stmt is not None:
            statements.append(stmt)
    return Script(tuple(statements))


# ---------------------------------------------------------------------------
# Canonical rendering
# ---------------------------------------------------------------------------

def _format_complex(c: complex) -> str:
    re_, im = c.real, c.imag
    if im == 0:
        return _format_float(re_)
    if re_ == 0:
        return f"{_format_float(im)}i"
    sign = "+" if im >= 0 else "-"
    return f"{_format_float(re_)}{sign}{_format_float(abs(im))}i"


def _format_float(x: float) -> str:
    if x == int(x) and abs(x) < 1e15:
        return str(int(x))
    return repr(x)


def pretty_print(script: Script) -> str:
    lines = []
    for stmt in script.statements:
        if isinstance(stmt, AlgebraDecl):
            lines.append(f"algebra {stmt.name} = [{','.join(map(str, stmt.sizes))}]")
        elif isinstance(stmt, ElemDecl):
            blocks = " ; ".join(
                "[" + ",".join(
                    "[" + ",".join(_format_complex(c) for c in row) + "]"
                    for row in blk
                ) + "]"
                for blk in stmt.blocks
            )
            lines.append(f"elem {stmt.name} in {stmt.algebra} = {{ {blocks} }}")
        elif isinstance(stmt, HomDecl):
            counts = "[" + ",".join(
                "[" + ",".join(map(str, row)) + "]" for row in stmt.counts
            ) + "]"
            unitary = stmt.unitary if stmt.unitary is not None else "default"
            lines.append(
                f"hom {stmt.name} : {stmt.source} -> {stmt.target} = "
                f"mult {counts} unitary {unitary}"
            )
        elif isinstance(stmt, TensorDecl):
            lines.append(f"tensor {stmt.name} = {stmt.left} (x) {stmt.right}")
        elif isinstance(stmt, ProductDecl):
            lines.append(f"product {stmt.name} = {' * '.join(stmt.factors)}")
        elif isinstance(stmt, MediatorDecl):
            lines.append(f"mediator {stmt.name} = mediate({stmt.first}, {stmt.second})")
        elif isinstance(stmt, CheckDecl):
            parts = [f"check {stmt.suite}"]
            parts.extend(str(a) for a in stmt.args)
            if stmt.trials is not None:
                parts.append(f"trials={stmt.trials}")
            if stmt.seed is not None:
                parts.append(f"seed={stmt.seed}")
            if stmt.tol is not None:
                parts.append(f"tol={repr(stmt.tol)}")
            lines.append(" ".join(parts))
        elif isinstance(stmt, ReportDecl):
            lines.append(f"report json {stmt.path}")
    return "\n".join(lines) + "\n"
