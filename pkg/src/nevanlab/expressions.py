"""Symbolic expressions closed under arithmetic, powers, and differentiation.

The tractable class is generated by rational functions and exponentials of
polynomials.  Every member that matters for divisor extraction normalizes to
the canonical shape (num/den) * exp(p) with polynomial num, den, p.  Sums
that mix distinct exponentials stay evaluatable but are rejected for any
purpose that needs the canonical form.

Expression grammar accepted by parse() and emitted by print_expr():
complex literals (3, 2.5, 1i, 1+2i as arithmetic), the variable z, + - * /,
^ with integer exponents, exp(polynomial), and D[expr, k] which constructs
the k-th derivative on the spot.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .polynomials import Polynomial, poly_roots

INFINITY = complex(math.inf, 0.0)

_POLE_REL = 1e-12
_CANCEL_RADIUS = 1e-6


def is_infinite(w):
    """True for the infinity marker (any non-finite complex value)."""
    return not (math.isfinite(w.real) and math.isfinite(w.imag))


class NotNormalizableError(ValueError):
    """The expression does not reduce to (num/den) * exp(p)."""


class IndeterminatePointError(ValueError):
    """Evaluation hit 0/0; the caller should perturb the point."""


class ParseError(ValueError):
    def __init__(self, message, position):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class Expr:
    """Base class carrying operator sugar; nodes are frozen dataclasses."""

    def __add__(self, other):
        return add(self, _coerce(other))

    def __radd__(self, other):
        return add(_coerce(other), self)

    def __sub__(self, other):
        return add(self, mul(Const(-1), _coerce(other)))

    def __rsub__(self, other):
        return add(_coerce(other), mul(Const(-1), self))

    def __mul__(self, other):
        return mul(self, _coerce(other))

    def __rmul__(self, other):
        return mul(_coerce(other), self)

    def __truediv__(self, other):
        return div(self, _coerce(other))

    def __rtruediv__(self, other):
        return div(_coerce(other), self)

    def __pow__(self, k):
        return pow_int(self, k)

    def __neg__(self):
        return mul(Const(-1), self)

    def __str__(self):
        return print_expr(self)


@dataclass(frozen=True)
class Const(Expr):
    value: complex

    def __post_init__(self):
        object.__setattr__(self, "value", complex(self.value))


@dataclass(frozen=True)
class Var(Expr):
    pass


@dataclass(frozen=True)
class Poly(Expr):
    poly: Polynomial


@dataclass(frozen=True)
class Exp(Expr):
    exponent: Polynomial


@dataclass(frozen=True)
class Sum(Expr):
    terms: tuple

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))


@dataclass(frozen=True)
class Product(Expr):
    factors: tuple

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))


@dataclass(frozen=True)
class Power(Expr):
    base: Expr
    exponent: int


@dataclass(frozen=True)
class Quotient(Expr):
    numerator: Expr
    denominator: Expr


def _coerce(x):
    if isinstance(x, Expr):
        return x
    if isinstance(x, (int, float, complex)):
        return Const(x)
    raise TypeError(f"cannot use {type(x).__name__} as an expression")


def as_polynomial(e):
    """Polynomial form of e when it is built purely from polynomial pieces."""
    if isinstance(e, Const):
        return Polynomial([e.value])
    if isinstance(e, Var):
        return Polynomial([0, 1])
    if isinstance(e, Poly):
        return e.poly
    if isinstance(e, Sum):
        acc = Polynomial([0])
        for t in e.terms:
            p = as_polynomial(t)
            if p is None:
                return None
            acc = acc + p
        return acc
    if isinstance(e, Product):
        acc = Polynomial([1])
        for f in e.factors:
            p = as_polynomial(f)
            if p is None:
                return None
            acc = acc * p
        return acc
    if isinstance(e, Power):
        p = as_polynomial(e.base)
        return None if p is None else p ** e.exponent
    return None


def _wrap_poly(p):
    if p.degree == 0:
        return Const(p.coefficients[0])
    return Poly(p)


def add(*terms):
    flat = []
    for t in terms:
        t = _coerce(t)
        if isinstance(t, Sum):
            flat.extend(t.terms)
        else:
            flat.append(t)
    poly_part = Polynomial([0])
    rest = []
    for t in flat:
        p = as_polynomial(t)
        if p is None:
            rest.append(t)
        else:
            poly_part = poly_part + p
    if not poly_part.is_zero:
        rest.append(_wrap_poly(poly_part))
    if not rest:
        return Const(0)
    if len(rest) == 1:
        return rest[0]
    return Sum(tuple(rest))


def mul(*factors):
    flat = []
    for f in factors:
        f = _coerce(f)
        if isinstance(f, Product):
            flat.extend(f.factors)
        else:
            flat.append(f)
    poly_part = Polynomial([1])
    rest = []
    npoly = 0
    for f in flat:
        if isinstance(f, Const) and f.value == 0:
            return Const(0)
        p = as_polynomial(f)
        if p is None:
            rest.append(f)
        else:
            if p.is_zero:
                return Const(0)
            poly_part = poly_part * p
            npoly += 1
    if npoly and poly_part.coefficients != (1 + 0j,):
        rest.insert(0, _wrap_poly(poly_part))
    if not rest:
        return Const(1)
    if len(rest) == 1:
        return rest[0]
    return Product(tuple(rest))


def pow_int(base, k):
    if not isinstance(k, int):
        raise ValueError("exponents must be integers")
    base = _coerce(base)
    if k < 0:
        return div(Const(1), pow_int(base, -k))
    if k == 0:
        return Const(1)
    if k == 1:
        return base
    p = as_polynomial(base)
    if p is not None:
        return _wrap_poly(p ** k)
    if isinstance(base, Exp):
        return Exp(base.exponent * k)
    return Power(base, k)


def div(num, den):
    num = _coerce(num)
    den = _coerce(den)
    if isinstance(den, Const):
        if den.value == 0:
            raise ZeroDivisionError("division by the zero constant")
        return mul(Const(1 / den.value), num)
    p = as_polynomial(den)
    if p is not None and p.is_zero:
        raise ZeroDivisionError("division by the identically zero polynomial")
    # flatten nested quotients so reciprocals stay structurally simple
    if isinstance(den, Quotient):
        return div(mul(num, den.denominator), den.numerator)
    if isinstance(num, Quotient):
        return div(num.numerator, mul(num.denominator, den))
    return Quotient(num, den)


# ---------------------------------------------------------------------------
# differentiation

def _d(e):
    if isinstance(e, (Const,)):
        return Const(0)
    if isinstance(e, Var):
        return Const(1)
    if isinstance(e, Poly):
        return _wrap_poly(e.poly.derivative())
    if isinstance(e, Exp):
        return mul(_wrap_poly(e.exponent.derivative()), e)
    if isinstance(e, Sum):
        return add(*[_d(t) for t in e.terms])
    if isinstance(e, Product):
        parts = []
        for i in range(len(e.factors)):
            fs = list(e.factors)
            fs[i] = _d(fs[i])
            parts.append(mul(*fs))
        return add(*parts)
    if isinstance(e, Power):
        return mul(Const(e.exponent), pow_int(e.base, e.exponent - 1), _d(e.base))
    if isinstance(e, Quotient):
        u, v = e.numerator, e.denominator
        return div(add(mul(_d(u), v), mul(Const(-1), u, _d(v))), pow_int(v, 2))
    raise TypeError(f"cannot differentiate {type(e).__name__}")


def differentiate(e, k=1):
    """k-th symbolic derivative of e, k >= 1."""
    if not isinstance(k, int) or k < 1:
        raise ValueError("derivative order must be a positive integer")
    out = _coerce(e)
    for _ in range(k):
        out = _d(out)
    return out


# ---------------------------------------------------------------------------
# evaluation

def evaluate(e, z):
    """Value of e at the complex point z.

    Poles come back as the INFINITY marker; 0/0 raises
    IndeterminatePointError.  Values beyond double range saturate to the
    marker as well.
    """
    return _eval(e, complex(z))


def _eval(e, z):
    if isinstance(e, Const):
        return e.value
    if isinstance(e, Var):
        return z
    if isinstance(e, Poly):
        return e.poly(z)
    if isinstance(e, Exp):
        try:
            return cmath.exp(e.exponent(z))
        except OverflowError:
            return INFINITY
    if isinstance(e, Sum):
        acc = 0j
        for t in e.terms:
            v = _eval(t, z)
            if is_infinite(v):
                return INFINITY
            acc += v
        return acc
    if isinstance(e, Product):
        acc = 1 + 0j
        saw_inf = False
        for f in e.factors:
            v = _eval(f, z)
            if is_infinite(v):
                saw_inf = True
            else:
                acc *= v
        if saw_inf:
            if acc == 0:
                raise IndeterminatePointError(f"0 * infinity at z = {z}")
            return INFINITY
        return acc if math.isfinite(acc.real) and math.isfinite(acc.imag) else INFINITY
    if isinstance(e, Power):
        v = _eval(e.base, z)
        if is_infinite(v):
            return INFINITY
        try:
            return v ** e.exponent
        except OverflowError:
            return INFINITY
    if isinstance(e, Quotient):
        num = _eval(e.numerator, z)
        den = _eval(e.denominator, z)
        if is_infinite(den):
            if is_infinite(num):
                raise IndeterminatePointError(f"infinity/infinity at z = {z}")
            return 0j
        if is_infinite(num):
            if den == 0:
                raise IndeterminatePointError(f"infinity/0 ill-posed at z = {z}")
            return INFINITY
        if abs(den) < _POLE_REL * (1.0 + abs(num)):
            if abs(num) < _POLE_REL:
                raise IndeterminatePointError(f"0/0 at z = {z}")
            return INFINITY
        v = num / den
        return v if math.isfinite(v.real) and math.isfinite(v.imag) else INFINITY
    raise TypeError(f"cannot evaluate {type(e).__name__}")


def evaluate_on_grid(e, zs):
    """Vectorized evaluation over an ndarray of points.

    Poles and overflow show up as inf, indeterminacies as nan; callers mask.
    """
    zs = np.asarray(zs, dtype=complex)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        return _eval_grid(e, zs)


def _eval_grid(e, zs):
    if isinstance(e, Const):
        return np.full_like(zs, e.value)
    if isinstance(e, Var):
        return zs.copy()
    if isinstance(e, Poly):
        return e.poly(zs)
    if isinstance(e, Exp):
        return np.exp(e.exponent(zs))
    if isinstance(e, Sum):
        acc = np.zeros_like(zs)
        for t in e.terms:
            acc = acc + _eval_grid(t, zs)
        return acc
    if isinstance(e, Product):
        acc = np.ones_like(zs)
        for f in e.factors:
            acc = acc * _eval_grid(f, zs)
        return acc
    if isinstance(e, Power):
        return _eval_grid(e.base, zs) ** e.exponent
    if isinstance(e, Quotient):
        return _eval_grid(e.numerator, zs) / _eval_grid(e.denominator, zs)
    raise TypeError(f"cannot evaluate {type(e).__name__}")


def substitute_affine(e, a, b):
    """The expression z -> e(a*z + b), staying inside the tractable class."""
    a = complex(a)
    b = complex(b)
    if isinstance(e, Const):
        return e
    if isinstance(e, Var):
        return _wrap_poly(Polynomial([b, a]))
    if isinstance(e, Poly):
        return _wrap_poly(e.poly.compose_affine(a, b))
    if isinstance(e, Exp):
        return Exp(e.exponent.compose_affine(a, b))
    if isinstance(e, Sum):
        return add(*[substitute_affine(t, a, b) for t in e.terms])
    if isinstance(e, Product):
        return mul(*[substitute_affine(f, a, b) for f in e.factors])
    if isinstance(e, Power):
        return pow_int(substitute_affine(e.base, a, b), e.exponent)
    if isinstance(e, Quotient):
        return Quotient(
            substitute_affine(e.numerator, a, b),
            substitute_affine(e.denominator, a, b),
        )
    raise TypeError(f"cannot substitute into {type(e).__name__}")


# ---------------------------------------------------------------------------
# canonical form and divisors

@dataclass(frozen=True)
class Canonical:
    """f = (num/den) * exp(expo) with den not identically zero."""

    num: Polynomial
    den: Polynomial
    expo: Polynomial

    def log_abs(self, zs):
        """log|f| on an ndarray of points; exact in the log domain."""
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            out = np.log(np.abs(self.num(zs)))
            if self.den.degree > 0 or self.den.coefficients != (1 + 0j,):
                out = out - np.log(np.abs(self.den(zs)))
            if not self.expo.is_zero:
                out = out + np.real(self.expo(zs))
        return out


def canonicalize(e):
    """Reduce e to Canonical or raise NotNormalizableError."""
    c = _canon(_coerce(e))
    if c.den.is_zero:
        raise ZeroDivisionError("denominator is identically zero")
    return c


def _canon(e):
    if isinstance(e, Const):
        return Canonical(Polynomial([e.value]), Polynomial([1]), Polynomial([0]))
    if isinstance(e, Var):
        return Canonical(Polynomial([0, 1]), Polynomial([1]), Polynomial([0]))
    if isinstance(e, Poly):
        return Canonical(e.poly, Polynomial([1]), Polynomial([0]))
    if isinstance(e, Exp):
        return Canonical(Polynomial([1]), Polynomial([1]), e.exponent)
    if isinstance(e, Product):
        num, den, expo = Polynomial([1]), Polynomial([1]), Polynomial([0])
        for f in e.factors:
            c = _canon(f)
            num = num * c.num
            den = den * c.den
            expo = expo + c.expo
        return Canonical(num, den, expo)
    if isinstance(e, Power):
        c = _canon(e.base)
        k = e.exponent
        return Canonical(c.num ** k, c.den ** k, c.expo * k)
    if isinstance(e, Quotient):
        cn = _canon(e.numerator)
        cd = _canon(e.denominator)
        if cd.num.is_zero:
            raise ZeroDivisionError("denominator is identically zero")
        return Canonical(cn.num * cd.den, cn.den * cd.num, cn.expo - cd.expo)
    if isinstance(e, Sum):
        groups = []  # list of [expo, num, den]
        for t in e.terms:
            c = _canon(t)
            for g in groups:
                if g[0] == c.expo:
                    g[1] = g[1] * c.den + c.num * g[2]
                    g[2] = g[2] * c.den
                    break
            else:
                groups.append([c.expo, c.num, c.den])
        groups = [g for g in groups if not g[1].is_zero]
        if not groups:
            return Canonical(Polynomial([0]), Polynomial([1]), Polynomial([0]))
        if len(groups) > 1:
            raise NotNormalizableError(
                "sum mixes distinct exponential parts; no canonical form"
            )
        expo, num, den = groups[0]
        return Canonical(num, den, expo)
    raise TypeError(f"cannot canonicalize {type(e).__name__}")


@dataclass(frozen=True)
class Divisor:
    """Finite weighted point set (zeros or poles) with positive multiplicities."""

    entries: tuple  # ((point, multiplicity), ...) sorted by (re, im)
    kind: str

    @classmethod
    def from_pairs(cls, pairs, kind):
        pairs = [(complex(z), int(m)) for z, m in pairs if m > 0]
        pairs.sort(key=lambda e: (e[0].real, e[0].imag))
        return cls(tuple(pairs), kind)

    def truncated(self):
        """Same support, every multiplicity clamped to 1."""
        return Divisor(tuple((z, 1) for z, _ in self.entries), self.kind)

    def count_within(self, t):
        """Sum of multiplicities over points with |z| <= t."""
        return sum(m for z, m in self.entries if abs(z) <= t)

    @property
    def total(self):
        return sum(m for _, m in self.entries)

    @property
    def is_empty(self):
        return not self.entries

    def as_dict(self):
        return {z: m for z, m in self.entries}

    def __len__(self):
        return len(self.entries)


def _cancel_common(zero_pairs, pole_pairs):
    zeros = [[z, m] for z, m in zero_pairs]
    poles = [[z, m] for z, m in pole_pairs]
    for zp in zeros:
        for pp in poles:
            if pp[1] == 0:
                continue
            if abs(zp[0] - pp[0]) <= _CANCEL_RADIUS:
                c = min(zp[1], pp[1])
                zp[1] -= c
                pp[1] -= c
                if zp[1] == 0:
                    break
    return (
        [(z, m) for z, m in zeros if m > 0],
        [(z, m) for z, m in poles if m > 0],
    )


def divisors(e):
    """Zero and pole divisors of e as (zeros, poles).

    Requires the canonical form; common roots of numerator and denominator
    (clustered within 1e-6) cancel at the minimum multiplicity.
    """
    c = canonicalize(e)
    if c.num.is_zero:
        raise ValueError("the zero function has no divisor")
    zero_pairs = poly_roots(c.num) if c.num.degree > 0 else []
    pole_pairs = poly_roots(c.den) if c.den.degree > 0 else []
    zero_pairs, pole_pairs = _cancel_common(zero_pairs, pole_pairs)
    return (
        Divisor.from_pairs(zero_pairs, "zeros"),
        Divisor.from_pairs(pole_pairs, "poles"),
    )


# ---------------------------------------------------------------------------
# parsing

_SYMBOLS = set("+-*/^()[],")


def _tokenize(text):
    tokens = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch in _SYMBOLS:
            tokens.append((ch, ch, i))
            i += 1
            continue
        if ch.isdigit() or ch == ".":
            j = i
            while j < n and (text[j].isdigit() or text[j] == "."):
                j += 1
            if j < n and text[j] in "eE":
                k = j + 1
                if k < n and text[k] in "+-":
                    k += 1
                if k < n and text[k].isdigit():
                    j = k
                    while j < n and text[j].isdigit():
                        j += 1
            lexeme = text[i:j]
            try:
                value = float(lexeme)
            except ValueError:
                raise ParseError(f"bad number {lexeme!r}", i) from None
            if j < n and text[j] == "i":
                tokens.append(("number", complex(0.0, value), i))
                j += 1
            else:
                tokens.append(("number", complex(value, 0.0), i))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(("name", text[i:j], i))
            i = j
            continue
        raise ParseError(f"unexpected character {ch!r}", i)
    tokens.append(("end", None, n))
    return tokens


class _Parser:
    def __init__(self, tokens, params):
        self.tokens = tokens
        self.pos = 0
        self.params = params

    def peek(self):
        return self.tokens[self.pos]

    def next(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind):
        tok = self.next()
        if tok[0] != kind:
            raise ParseError(f"expected {kind!r}, found {tok[1]!r}", tok[2])
        return tok

    def parse_expr(self):
        node = self.parse_term()
        while self.peek()[0] in "+-":
            op = self.next()[0]
            rhs = self.parse_term()
            node = add(node, rhs) if op == "+" else add(node, mul(Const(-1), rhs))
        return node

    def parse_term(self):
        node = self.parse_unary()
        while self.peek()[0] in "*/":
            op = self.next()[0]
            rhs = self.parse_unary()
            node = mul(node, rhs) if op == "*" else div(node, rhs)
        return node

    def parse_unary(self):
        if self.peek()[0] == "-":
            self.next()
            return mul(Const(-1), self.parse_unary())
        if self.peek()[0] == "+":
            self.next()
            return self.parse_unary()
        return self.parse_power()

    def parse_power(self):
        base = self.parse_atom()
        if self.peek()[0] != "^":
            return base
        self.next()
        return pow_int(base, self.parse_int_exponent())

    def parse_int_exponent(self):
        tok = self.peek()
        if tok[0] == "(":
            self.next()
            k = self.parse_int_exponent()
            self.expect(")")
            return k
        sign = 1
        if tok[0] == "-":
            self.next()
            sign = -1
            tok = self.peek()
        if tok[0] != "number":
            raise ParseError("exponent must be an integer", tok[2])
        self.next()
        v = tok[1]
        if v.imag != 0 or v.real != int(v.real):
            raise ParseError("exponent must be an integer", tok[2])
        return sign * int(v.real)

    def parse_atom(self):
        kind, value, pos = self.next()
        if kind == "number":
            return Const(value)
        if kind == "(":
            node = self.parse_expr()
            self.expect(")")
            return node
        if kind == "name":
            if value == "z":
                return Var()
            if value == "i":
                return Const(1j)
            if value == "exp":
                self.expect("(")
                arg = self.parse_expr()
                self.expect(")")
                p = as_polynomial(arg)
                if p is None:
                    raise ParseError(
                        "unsupported construct: exp argument must be a polynomial",
                        pos,
                    )
                return Exp(p)
            if value == "D":
                self.expect("[")
                arg = self.parse_expr()
                self.expect(",")
                tok = self.expect("number")
                order = tok[1]
                if order.imag != 0 or order.real != int(order.real) or order.real < 1:
                    raise ParseError("derivative order must be a positive integer", tok[2])
                self.expect("]")
                return differentiate(arg, int(order.real))
            if value in self.params:
                return Const(self.params[value])
            raise ParseError(f"unknown symbol {value!r}", pos)
        raise ParseError(f"unexpected token {value!r}", pos)


def parse(text, params=None):
    """Parse the expression grammar; params maps extra symbols to constants."""
    parser = _Parser(_tokenize(text), dict(params or {}))
    node = parser.parse_expr()
    end = parser.next()
    if end[0] != "end":
        raise ParseError(f"trailing input {end[1]!r}", end[2])
    return node


def parse_complex(text):
    """Parse a literal like '2', '-1.5', '1+2i', '3i' into a complex number."""
    node = parse(text)
    if as_polynomial(node) is None or as_polynomial(node).degree > 0:
        raise ValueError(f"expected a complex literal, got {text!r}")
    return evaluate(node, 0.0)


# ---------------------------------------------------------------------------
# printing

def _fmt_float(x):
    if x == int(x) and abs(x) < 1e16:
        return repr(float(x))
    return repr(x)


def _fmt_const(c):
    re, im = c.real, c.imag
    if im == 0:
        s = _fmt_float(re)
        return f"({s})" if re < 0 else s
    if re == 0:
        s = f"{_fmt_float(abs(im))}i"
        return f"(-{s})" if im < 0 else s
    sign = "+" if im > 0 else "-"
    return f"({_fmt_float(re)}{sign}{_fmt_float(abs(im))}i)"


def _fmt_coeff_factor(c):
    """Coefficient prefix for a monomial, e.g. '' for 1, '-' for -1."""
    if c == 1:
        return ""
    if c == -1:
        return "-"
    return _fmt_const(c) + "*"


def _fmt_poly(p):
    if p.is_zero:
        return "0.0"
    pieces = []
    for k in range(p.degree, -1, -1):
        c = p.coefficients[k]
        if c == 0:
            continue
        if k == 0:
            if c.imag == 0 and c.real < 0:
                term = "-" + _fmt_float(abs(c.real))
            else:
                term = _fmt_const(c)
        elif k == 1:
            term = _fmt_coeff_factor(c) + "z"
        else:
            term = _fmt_coeff_factor(c) + f"z^{k}"
        pieces.append(term)
    out = pieces[0]
    for term in pieces[1:]:
        out += "+" + term if not term.startswith("-") else term
    return out


def _needs_parens_in_product(e):
    if isinstance(e, (Sum, Quotient)):
        return True
    if isinstance(e, Const):
        return e.value.real < 0 and e.value.imag == 0
    if isinstance(e, Poly):
        s = _fmt_poly(e.poly)
        return "+" in s[1:] or "-" in s[1:]
    return False


def _atom_str(e):
    s = print_expr(e)
    if isinstance(e, (Var, Exp)):
        return s
    if isinstance(e, Const) and e.value.imag == 0 and e.value.real >= 0:
        return s
    return f"({s})"


def print_expr(e):
    """Render e in the accepted grammar; parse(print_expr(e)) evaluates identically."""
    if isinstance(e, Const):
        return _fmt_const(e.value)
    if isinstance(e, Var):
        return "z"
    if isinstance(e, Poly):
        return _fmt_poly(e.poly)
    if isinstance(e, Exp):
        return f"exp({_fmt_poly(e.exponent)})"
    if isinstance(e, Sum):
        parts = [print_expr(t) for t in e.terms]
        out = parts[0]
        for p in parts[1:]:
            out += p if p.startswith("-") else "+" + p
        return out
    if isinstance(e, Product):
        parts = []
        for f in e.factors:
            s = print_expr(f)
            parts.append(f"({s})" if _needs_parens_in_product(f) else s)
        return "*".join(parts)
    if isinstance(e, Power):
        return f"{_atom_str(e.base)}^{e.exponent}"
    if isinstance(e, Quotient):
        return f"({print_expr(e.numerator)})/({print_expr(e.denominator)})"
    raise TypeError(f"cannot print {type(e).__name__}")
