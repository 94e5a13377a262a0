"""A small text form for descendent brackets.

Brackets are written as whitespace-separated insertions "tau(k, cls)" where
cls is a class name (one, F, W, pt, beta, e1..e10, f1..f10, sigma, sigmabar)
or a rational linear combination such as "F + 2*e1 - 1/2*f3".  ``beta``
stands for the curve class of the slice being extracted and is resolved to
W + mF at evaluation time.  Printing and parsing round-trip exactly.
"""

import re

from .exact import QQ, QQ1, rat_from_str
from .engine import F, ONE, PT, W, av, bv

BETA = "beta"

_CLASS_NAMES = {"one": ONE, "pt": PT, "W": W, "F": F}
for _i in range(1, 11):
    _CLASS_NAMES["e%d" % _i] = av(_i)
    _CLASS_NAMES["f%d" % _i] = bv(_i)
_CLASS_NAMES["sigma"] = av(10)
_CLASS_NAMES["sigmabar"] = bv(10)

_NAME_OF = {}
for _n, _c in _CLASS_NAMES.items():
    _NAME_OF.setdefault(_c, _n)
_NAME_OF[av(10)] = "e10"
_NAME_OF[bv(10)] = "f10"


class ParseError(ValueError):
    def __init__(self, message, pos):
        super().__init__("%s (at position %d)" % (message, pos))
        self.pos = pos


_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<name>[A-Za-z][A-Za-z0-9]*)|(?P<op>[(),+*-]))"
)


def _tokenize(text):
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            if text[pos:].strip():
                raise ParseError("unexpected character %r" % text[pos], pos)
            break
        kind = m.lastgroup
        out.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, text, symbolic_indices=False):
        self.tokens = _tokenize(text)
        self.i = 0
        self.text = text
        self.symbolic_indices = symbolic_indices

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None, len(self.text))

    def next(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expect(self, kind, value=None):
        k, v, p = self.next()
        if k != kind or (value is not None and v != value):
            want = value if value is not None else kind
            raise ParseError("expected %r, found %r" % (want, v), p)
        return v

    def parse_bracket(self):
        out = []
        while True:
            k, v, p = self.peek()
            if k is None:
                return out
            if k != "name" or v != "tau":
                raise ParseError("expected 'tau', found %r" % (v,), p)
            out.append(self.parse_tau())

    def parse_tau(self):
        self.expect("name", "tau")
        self.expect("op", "(")
        sign = 1
        k, v, p = self.peek()
        if k == "op" and v == "-":
            self.next()
            sign = -1
        k, v, p = self.peek()
        if self.symbolic_indices and k == "name" and sign == 1:
            self.next()
            kdesc = v
        else:
            kdesc = sign * int(self.expect("num"))
        self.expect("op", ",")
        cls = self.parse_class()
        self.expect("op", ")")
        return (kdesc, cls)

    def parse_class(self):
        terms = {}
        sign = QQ1
        first = True
        while True:
            k, v, p = self.peek()
            if k == "op" and v in "+-":
                self.next()
                sign = QQ1 if v == "+" else -QQ1
            elif not first:
                break
            coeff, name = self.parse_term()
            key = BETA if name == BETA else _CLASS_NAMES[name]
            terms[key] = terms.get(key, QQ(0)) + sign * coeff
            sign = QQ1
            first = False
            k, v, p = self.peek()
            if not (k == "op" and v in "+-"):
                break
        terms = {c: r for c, r in terms.items() if r}
        if len(terms) == 1 and BETA not in terms:
            ((c, r),) = terms.items()
            if r == 1:
                return c
        return terms

    def parse_term(self):
        k, v, p = self.next()
        if k == "num":
            coeff = rat_from_str(v)
            k2, v2, _ = self.peek()
            if k2 == "op" and v2 == "*":
                self.next()
                name = self._class_name()
                return coeff, name
            raise ParseError("bare number needs '*class'", p)
        if k == "name":
            if v != BETA and v not in _CLASS_NAMES:
                raise ParseError("unknown class %r" % v, p)
            return QQ1, v
        raise ParseError("expected a class term, found %r" % (v,), p)

    def _class_name(self):
        k, v, p = self.next()
        if k != "name" or (v != BETA and v not in _CLASS_NAMES):
            raise ParseError("expected a class name, found %r" % (v,), p)
        return v


def parse_bracket(text, symbolic_indices=False):
    """Parse the DSL text into a list of (k, class) insertions.

    Classes are basis indices, the string "beta", or {index_or_beta: coeff}
    combinations; resolve beta before evaluation with resolve_beta().  With
    ``symbolic_indices``, descendent levels may be identifiers (for family
    fits).
    """
    parser = _Parser(text, symbolic_indices)
    out = parser.parse_bracket()
    k, v, p = parser.peek()
    if k is not None:
        raise ParseError("trailing input %r" % v, p)
    return out


def resolve_beta(insertions, m):
    """Substitute the curve class W + mF for beta markers."""
    out = []
    for k, cls in insertions:
        if cls == BETA:
            cls = {W: QQ1, F: QQ(m)} if m else {W: QQ1}
        elif isinstance(cls, dict) and BETA in cls:
            cls = dict(cls)
            r = cls.pop(BETA)
            cls[W] = cls.get(W, QQ(0)) + r
            if m:
                cls[F] = cls.get(F, QQ(0)) + r * m
            cls = {c: x for c, x in cls.items() if x}
        out.append((k, cls))
    return out


def class_to_text(cls):
    if cls == BETA:
        return BETA
    if isinstance(cls, int):
        return _NAME_OF[cls]
    parts = []
    for key in sorted(cls, key=lambda c: (c == BETA, c if isinstance(c, int) else 0)):
        r = cls[key]
        name = BETA if key == BETA else _NAME_OF[key]
        body = name if abs(r) == 1 else "%s*%s" % (abs(r), name)
        if not parts:
            parts.append(body if r > 0 else "-" + body)
        else:
            parts.append(("+ " if r > 0 else "- ") + body)
    return " ".join(parts)


def bracket_to_text(insertions):
    return " ".join("tau(%d,%s)" % (k, class_to_text(c)) for k, c in insertions)
