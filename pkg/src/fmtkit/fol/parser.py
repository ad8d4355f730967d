"""Concrete ASCII syntax: tokenizer, recursive-descent parser and printer.

Grammar::

    formula    := quantified | binary
    quantified := ("forall"|"exists") VAR ["in" term] formula
    binary     := unary { ("&"|"|"|"->"|"<->") unary }
    unary      := "~" unary | "(" formula ")" | quantified | atom
    atom       := IDENT "(" term {"," term} ")" | term "=" term | term "in" term
    term       := VAR | IDENT | IDENT "(" term {"," term} ")"

Precedence is ``~ > & > | > -> > <->``; ``->`` associates to the right, the
others to the left.  A quantifier body extends as far right as possible.
Identifiers that are not declared constants, functions or predicates are
variables.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from fmtkit.errors import FormulaSyntaxError, SignatureError
from fmtkit.fol.syntax import (
    App, And, Atom, BoundedExists, BoundedForall, Const, Equals, Exists,
    Forall, Formula, Iff, Implies, KEYWORDS, Member, Not, Or, Signature, Term,
    Var, term_vars,
)

_TOKEN_RE = re.compile(r"\s*(?:(<->|->|[~&|()=,])|([A-Za-z_][A-Za-z0-9_]*))")


@dataclass(frozen=True)
class _Tok:
    kind: str  # "op", "id", "eof"
    text: str
    pos: int  # 1-based column


def _tokenize(text: str) -> list[_Tok]:
    toks: list[_Tok] = []
    i = 0
    n = len(text)
    while i < n:
        if text[i].isspace():
            i += 1
            continue
        m = _TOKEN_RE.match(text, i)
        if m is None or m.end() == i:
            raise FormulaSyntaxError(f"unexpected character {text[i]!r}", i + 1, text)
        op, ident = m.group(1), m.group(2)
        start = m.start(1) if op else m.start(2)
        toks.append(_Tok("op" if op else "id", op or ident, start + 1))
        i = m.end()
    toks.append(_Tok("eof", "", n + 1))
    return toks


# binary operators: token -> (precedence, right associative, node class)
_BINOPS = {
    "<->": (1, False, Iff),
    "->": (2, True, Implies),
    "|": (3, False, Or),
    "&": (4, False, And),
}


class _Parser:
    def __init__(self, text: str, sig: Signature):
        self.text = text
        self.sig = sig
        self.toks = _tokenize(text)
        self.i = 0
        self.funcs = sig.function_arity
        self.preds = sig.predicate_arity
        self.consts = set(sig.constants)

    # -- helpers --
    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def error(self, msg: str, tok: _Tok | None = None) -> FormulaSyntaxError:
        tok = tok or self.tok
        found = "end of input" if tok.kind == "eof" else repr(tok.text)
        return FormulaSyntaxError(f"{msg}, found {found}", tok.pos, self.text)

    def advance(self) -> _Tok:
        t = self.tok
        self.i += 1
        return t

    def expect(self, text: str) -> _Tok:
        if self.tok.text != text or self.tok.kind == "eof":
            raise self.error(f"expected {text!r}")
        return self.advance()

    def at(self, text: str) -> bool:
        return self.tok.kind != "eof" and self.tok.text == text

    # -- grammar --
    def parse(self) -> Formula:
        f = self.formula()
        if self.tok.kind != "eof":
            raise self.error("unexpected trailing input")
        return f

    def formula(self) -> Formula:
        return self.binary(0)

    def binary(self, min_prec: int) -> Formula:
        left = self.unary()
        while self.tok.kind == "op" and self.tok.text in _BINOPS:
            prec, right_assoc, node = _BINOPS[self.tok.text]
            if prec < min_prec:
                break
            self.advance()
            right = self.binary(prec if right_assoc else prec + 1)
            left = node(left, right)
        return left

    def unary(self) -> Formula:
        if self.at("~"):
            self.advance()
            return Not(self.unary())
        if self.at("("):
            self.advance()
            f = self.formula()
            self.expect(")")
            return f
        if self.tok.kind == "id" and self.tok.text in ("forall", "exists"):
            return self.quantified()
        return self.atom()

    def quantified(self) -> Formula:
        kw = self.advance().text
        vt = self.tok
        if vt.kind != "id" or vt.text in KEYWORDS:
            raise self.error("expected a variable after quantifier")
        if vt.text in self.sig.symbols():
            raise SignatureError(f"cannot quantify over declared symbol {vt.text!r} (position {vt.pos})")
        self.advance()
        var = vt.text
        bound = None
        if self.at("in"):
            if not self.sig.membership:
                raise SignatureError(f"bounded quantifier needs the membership relation (position {self.tok.pos})")
            self.advance()
            btok = self.tok
            bound = self.term(in_bound=True)
            if var in set(term_vars(bound)):
                raise FormulaSyntaxError(f"bound term may not mention the bound variable {var!r}", btok.pos, self.text)
        body = self.formula()
        if bound is None:
            return Forall(var, body) if kw == "forall" else Exists(var, body)
        return BoundedForall(var, bound, body) if kw == "forall" else BoundedExists(var, bound, body)

    def atom(self) -> Formula:
        t = self.tok
        if t.kind == "id" and t.text in self.preds:
            self.advance()
            arity = self.preds[t.text]
            args = self.arglist(t, arity == 0)
            if len(args) != arity:
                raise SignatureError(
                    f"predicate {t.text!r} expects {arity} argument(s), got {len(args)} (position {t.pos})"
                )
            return Atom(t.text, tuple(args))
        if t.kind != "id" or t.text in KEYWORDS:
            raise self.error("expected an atomic formula")
        left = self.term()
        if self.at("="):
            self.advance()
            return Equals(left, self.term())
        if self.at("in"):
            if not self.sig.membership:
                raise SignatureError(f"'in' used but membership is not declared (position {self.tok.pos})")
            self.advance()
            return Member(left, self.term())
        raise self.error("expected '=' or 'in'")

    def arglist(self, head: _Tok, allow_empty: bool) -> list[Term]:
        if not self.at("("):
            if allow_empty:
                return []
            raise self.error(f"expected '(' after {head.text!r}")
        self.advance()
        if allow_empty and self.at(")"):
            self.advance()
            return []
        args = [self.term()]
        while self.at(","):
            self.advance()
            args.append(self.term())
        self.expect(")")
        return args

    def term(self, in_bound: bool = False) -> Term:
        t = self.tok
        if t.kind != "id" or t.text in KEYWORDS:
            raise self.error("expected a term")
        self.advance()
        name = t.text
        # in "forall x in y (body)" the parenthesis opens the body
        if self.at("(") and not (in_bound and name not in self.funcs):
            if name in self.preds:
                raise SignatureError(f"predicate {name!r} used as a function (position {t.pos})")
            if name not in self.funcs:
                raise SignatureError(f"undeclared function symbol {name!r} (position {t.pos})")
            args = self.arglist(t, False)
            if len(args) != self.funcs[name]:
                raise SignatureError(
                    f"function {name!r} expects {self.funcs[name]} argument(s), got {len(args)} (position {t.pos})"
                )
            return App(name, tuple(args))
        if name in self.funcs:
            raise SignatureError(f"function {name!r} used without arguments (position {t.pos})")
        if name in self.preds:
            raise SignatureError(f"predicate {name!r} used as a term (position {t.pos})")
        if name in self.consts:
            return Const(name)
        return Var(name)


def parse_formula(text: str, sig: Signature) -> Formula:
    """Parse *text* against *sig*; raises FormulaSyntaxError/SignatureError."""
    return _Parser(text, sig).parse()


def parse_term(text: str, sig: Signature) -> Term:
    p = _Parser(text, sig)
    t = p.term()
    if p.tok.kind != "eof":
        raise p.error("unexpected trailing input")
    return t


_DECL_RE = re.compile(r"^(const|func|pred|membership)\b\s*(.*)$")


def parse_signature(text: str) -> Signature:
    """Parse a header such as ``const c; func f/2; pred edge/2; membership;``.

    ``const a, b;`` and ``pred p/1, q/2;`` list forms are accepted too.
    """
    consts: list[str] = []
    funcs: list[tuple[str, int]] = []
    preds: list[tuple[str, int]] = []
    membership = False
    for clause in text.split(";"):
        clause = clause.strip()
        if not clause:
            continue
        m = _DECL_RE.match(clause)
        if m is None:
            raise SignatureError(f"unknown declaration {clause!r}")
        kind, rest = m.group(1), m.group(2).strip()
        if kind == "membership":
            if rest:
                raise SignatureError("'membership' takes no arguments")
            membership = True
            continue
        for item in (s.strip() for s in rest.split(",")):
            if not item:
                raise SignatureError(f"empty item in {clause!r}")
            if kind == "const":
                if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", item):
                    raise SignatureError(f"bad constant name {item!r}")
                consts.append(item)
                continue
            mm = re.fullmatch(r"([A-Za-z_][A-Za-z0-9_]*)\s*/\s*(\d+)", item)
            if mm is None:
                raise SignatureError(f"expected name/arity, got {item!r}")
            (funcs if kind == "func" else preds).append((mm.group(1), int(mm.group(2))))
    return Signature(tuple(consts), tuple(funcs), tuple(preds), membership)


def is_declaration(line: str) -> bool:
    return _DECL_RE.match(line.strip()) is not None


# -- printing ------------------------------------------------------------------


def render_term(t: Term) -> str:
    if isinstance(t, (Var, Const)):
        return t.name
    return f"{t.func}({', '.join(render_term(a) for a in t.args)})"


_PREC = {Iff: 1, Implies: 2, Or: 3, And: 4}
_SYM = {Iff: "<->", Implies: "->", Or: "|", And: "&"}


def _prec(f: Formula) -> int:
    if isinstance(f, (Exists, Forall, BoundedExists, BoundedForall)):
        return 0
    return _PREC.get(type(f), 5)


def _render(f: Formula) -> str:
    if isinstance(f, Atom):
        if not f.args:
            return f"{f.pred}()"
        return f"{f.pred}({', '.join(render_term(a) for a in f.args)})"
    if isinstance(f, Equals):
        return f"{render_term(f.left)} = {render_term(f.right)}"
    if isinstance(f, Member):
        return f"{render_term(f.left)} in {render_term(f.right)}"
    if isinstance(f, Not):
        inner = _render(f.body)
        if isinstance(f.body, (Atom, Not)):
            return "~" + inner
        return f"~({inner})"
    if type(f) in _PREC:
        p = _PREC[type(f)]
        right_assoc = isinstance(f, Implies)
        lp, rp = _prec(f.left), _prec(f.right)
        left = _render(f.left)
        right = _render(f.right)
        if lp < p or (lp == p and right_assoc):
            left = f"({left})"
        if rp < p or (rp == p and not right_assoc):
            right = f"({right})"
        return f"{left} {_SYM[type(f)]} {right}"
    kw = "forall" if isinstance(f, (Forall, BoundedForall)) else "exists"
    head = f"{kw} {f.var}"
    if isinstance(f, (BoundedExists, BoundedForall)):
        head += f" in {render_term(f.bound)}"
    body = _render(f.body)
    if isinstance(f.body, (Atom, Not, Exists, Forall, BoundedExists, BoundedForall)):
        return f"{head} {body}"
    return f"{head} ({body})"


def render_formula(f: Formula) -> str:
    """Print *f* so that ``parse_formula`` gives back the same tree."""
    return _render(f)
