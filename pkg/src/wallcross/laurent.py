"""Exact multivariate Laurent polynomials over the rationals.

Values are immutable.  ``Monomial`` maps variable names to nonzero integer
exponents, ``LaurentExpr`` maps monomials to nonzero ``Fraction``
coefficients, and ``RationalExpr`` is a quotient of two Laurent expressions
used while a computation is not yet known to be Laurent.

Area symbols such as ``qL`` are ordinary variables here.
"""

from __future__ import annotations

import json
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Mapping

from .errors import DomainError, InvalidRuleError, NotLaurentError, PoleError

__all__ = [
    "Monomial",
    "LaurentExpr",
    "RationalExpr",
    "Ring",
    "add",
    "mul",
    "substitute",
    "partial_derivative",
    "log_derivative",
    "eval_complex",
    "to_laurent",
    "divide_exact",
    "format_expr",
    "to_json",
    "from_json",
    "to_data",
    "from_data",
]


def _check_name(name):
    if not isinstance(name, str) or not name:
        raise DomainError(f"variable names must be nonempty strings, got {name!r}")
    return name


def _check_int(e):
    if isinstance(e, bool) or not isinstance(e, int):
        if isinstance(e, Rational) and Fraction(e).denominator == 1:
            return int(e)
        raise DomainError(f"exponents must be integers, got {e!r}")
    return e


def _fraction(c):
    if isinstance(c, Fraction):
        return c
    if isinstance(c, bool):
        raise DomainError("booleans are not coefficients")
    if isinstance(c, (int, Rational)):
        return Fraction(c)
    if isinstance(c, str):
        return Fraction(c)
    raise DomainError(f"coefficients must be exact rationals, got {c!r}")


class Monomial:
    """A product of named variables raised to nonzero integer powers."""

    __slots__ = ("_exps", "_hash")

    def __init__(self, exponents: Mapping[str, int] | Iterable[tuple[str, int]] = ()):
        items = exponents.items() if isinstance(exponents, Mapping) else exponents
        acc: dict[str, int] = {}
        for name, e in items:
            acc[_check_name(name)] = acc.get(name, 0) + _check_int(e)
        self._exps = tuple(sorted((k, v) for k, v in acc.items() if v != 0))
        self._hash = hash(self._exps)

    @property
    def exponents(self) -> dict[str, int]:
        return dict(self._exps)

    @property
    def variables(self) -> tuple[str, ...]:
        return tuple(k for k, _ in self._exps)

    def __getitem__(self, name: str) -> int:
        for k, v in self._exps:
            if k == name:
                return v
        return 0

    def items(self):
        return self._exps

    @property
    def degree(self) -> int:
        return sum(v for _, v in self._exps)

    def is_one(self) -> bool:
        return not self._exps

    def __mul__(self, other: Monomial) -> Monomial:
        if not isinstance(other, Monomial):
            return NotImplemented
        return Monomial(list(self._exps) + list(other._exps))

    def __pow__(self, k: int) -> Monomial:
        k = _check_int(k)
        return Monomial([(n, e * k) for n, e in self._exps])

    def inverse(self) -> Monomial:
        return self ** -1

    def __truediv__(self, other: Monomial) -> Monomial:
        return self * other.inverse()

    def __eq__(self, other):
        return isinstance(other, Monomial) and self._exps == other._exps

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Monomial({dict(self._exps)!r})"

    def __str__(self):
        return _format_monomial(self._exps) or "1"


ONE = Monomial()


def _format_monomial(exps) -> str:
    parts = []
    for name, e in exps:
        parts.append(name if e == 1 else f"{name}^{e}")
    return "*".join(parts)


class LaurentExpr:
    """Finite sum of rational multiples of monomials, in canonical form."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, object] | Iterable[tuple[Monomial, object]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Monomial, Fraction] = {}
        for m, c in items:
            if not isinstance(m, Monomial):
                m = Monomial(m)
            acc[m] = acc.get(m, Fraction(0)) + _fraction(c)
        self._terms = {m: c for m, c in acc.items() if c != 0}
        self._hash = None

    # constructors
    @classmethod
    def constant(cls, c) -> LaurentExpr:
        return cls({ONE: c})

    @classmethod
    def variable(cls, name: str) -> LaurentExpr:
        return cls({Monomial({name: 1}): 1})

    @classmethod
    def monomial(cls, m: Monomial | Mapping[str, int], c=1) -> LaurentExpr:
        if not isinstance(m, Monomial):
            m = Monomial(m)
        return cls({m: c})

    # views
    @property
    def terms(self) -> dict[Monomial, Fraction]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def coefficient(self, m: Monomial | Mapping[str, int]) -> Fraction:
        if not isinstance(m, Monomial):
            m = Monomial(m)
        return self._terms.get(m, Fraction(0))

    @property
    def variables(self) -> tuple[str, ...]:
        seen = set()
        for m in self._terms:
            seen.update(m.variables)
        return tuple(sorted(seen))

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def __len__(self):
        return len(self._terms)

    def single_term(self):
        """Return ``(monomial, coeff)`` if this is a single term, else ``None``."""
        if len(self._terms) != 1:
            return None
        return next(iter(self._terms.items()))

    def constant_value(self):
        if not self._terms:
            return Fraction(0)
        if len(self._terms) == 1 and ONE in self._terms:
            return self._terms[ONE]
        return None

    # arithmetic
    def __add__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return add(self, other)

    __radd__ = __add__

    def __neg__(self):
        return LaurentExpr({m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return add(self, -other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return add(other, -self)

    def __mul__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        k = _check_int(k)
        if k < 0:
            single = self.single_term()
            if single is None:
                raise NotLaurentError("negative power of a non-monomial is not Laurent")
            m, c = single
            return LaurentExpr({m ** k: c ** k})
        result = LaurentExpr.constant(1)
        base = self
        while k:
            if k & 1:
                result = mul(result, base)
            k >>= 1
            if k:
                base = mul(base, base)
        return result

    def __truediv__(self, other):
        if isinstance(other, RationalExpr):
            return RationalExpr(self) / other
        other = _coerce(other)
        if other is None:
            return NotImplemented
        single = other.single_term()
        if single is None:
            return RationalExpr(self, other)
        if not other:
            raise PoleError("division by zero")
        m, c = single
        inv = m.inverse()
        return LaurentExpr({mm * inv: cc / c for mm, cc in self._terms.items()})

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return other / self

    def __eq__(self, other):
        if isinstance(other, LaurentExpr):
            return self._terms == other._terms
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return self._terms == o._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __repr__(self):
        return f"LaurentExpr({format_expr(self)!r})"

    def __str__(self):
        return format_expr(self)


def _coerce(x):
    if isinstance(x, LaurentExpr):
        return x
    if isinstance(x, Monomial):
        return LaurentExpr({x: 1})
    if isinstance(x, (int, Fraction)) and not isinstance(x, bool):
        return LaurentExpr.constant(x)
    if isinstance(x, Rational):
        return LaurentExpr.constant(Fraction(x))
    return None


def as_laurent(x) -> LaurentExpr:
    out = _coerce(x)
    if out is None:
        raise DomainError(f"cannot interpret {x!r} as a Laurent expression")
    return out


def add(p: LaurentExpr, q: LaurentExpr) -> LaurentExpr:
    acc = dict(p._terms)
    for m, c in q._terms.items():
        acc[m] = acc.get(m, Fraction(0)) + c
    return LaurentExpr(acc)


def mul(p: LaurentExpr, q: LaurentExpr) -> LaurentExpr:
    acc: dict[Monomial, Fraction] = {}
    for m1, c1 in p._terms.items():
        for m2, c2 in q._terms.items():
            m = m1 * m2
            acc[m] = acc.get(m, Fraction(0)) + c1 * c2
    return LaurentExpr(acc)


def partial_derivative(p: LaurentExpr, v: str) -> LaurentExpr:
    acc = {}
    for m, c in p._terms.items():
        e = m[v]
        if e:
            acc[m * Monomial({v: -1})] = c * e
    return LaurentExpr(acc)


def log_derivative(p: LaurentExpr, v: str) -> LaurentExpr:
    """``v * dp/dv``; it scales each term by its exponent of ``v``."""
    return LaurentExpr({m: c * m[v] for m, c in p._terms.items() if m[v]})


def eval_complex(p: LaurentExpr, point: Mapping[str, complex]) -> complex:
    total = 0j
    for m, c in p._terms.items():
        val = complex(float(c.numerator) / float(c.denominator))
        for name, e in m.items():
            if name not in point:
                raise DomainError(f"no value assigned to variable {name!r}")
            x = complex(point[name])
            if x == 0 and e < 0:
                raise PoleError(f"pole: {name} = 0 with exponent {e}")
            val *= x ** e
        total += val
    return total


# --- exact division -------------------------------------------------------


def _content(p: LaurentExpr) -> Monomial:
    """Largest monomial dividing every term (componentwise minimum exponent)."""
    if not p:
        return ONE
    names = set()
    for m in p._terms:
        names.update(m.variables)
    return Monomial({n: min(m[n] for m in p._terms) for n in names})


def divide_exact(num: LaurentExpr, den: LaurentExpr):
    """Divide in the Laurent ring.

    Returns ``(quotient, remainder)`` with ``num == quotient*den + remainder``;
    the remainder is zero exactly when ``den`` divides ``num``.
    """
    if not den:
        raise PoleError("division by the zero polynomial")
    if not num:
        return LaurentExpr(), LaurentExpr()
    names = sorted(set(num.variables) | set(den.variables))
    cn, cd = _content(num), _content(den)

    def vec(p, content):
        inv = content.inverse()
        return {tuple((m * inv)[n] for n in names): c for m, c in p._terms.items()}

    rem = vec(num, cn)
    dv = vec(den, cd)
    lead = max(dv)
    lead_c = dv[lead]
    quot: dict[tuple, Fraction] = {}
    left: dict[tuple, Fraction] = {}
    while rem:
        top = max(rem)
        if all(a >= b for a, b in zip(top, lead)):
            shift = tuple(a - b for a, b in zip(top, lead))
            f = rem[top] / lead_c
            quot[shift] = quot.get(shift, Fraction(0)) + f
            for e, c in dv.items():
                key = tuple(a + b for a, b in zip(e, shift))
                val = rem.get(key, Fraction(0)) - f * c
                if val:
                    rem[key] = val
                else:
                    rem.pop(key, None)
        else:
            left[top] = rem.pop(top)

    shift_q = cn / cd

    def back(d, m0):
        return LaurentExpr({Monomial(zip(names, e)) * m0: c for e, c in d.items()})

    return back(quot, shift_q), back(left, cn)


class RationalExpr:
    """Quotient of Laurent expressions.

    On construction the monomial content of the denominator is moved into the
    numerator and the denominator is scaled to have leading coefficient 1; a
    monomial denominator therefore disappears entirely.
    """

    __slots__ = ("numerator", "denominator")

    def __init__(self, numerator, denominator=None):
        num = as_laurent(numerator)
        den = LaurentExpr.constant(1) if denominator is None else as_laurent(denominator)
        if not den:
            raise PoleError("denominator is identically zero")
        if not num:
            den = LaurentExpr.constant(1)
        else:
            content = _content(den)
            if not content.is_one():
                inv = LaurentExpr.monomial(content.inverse())
                num, den = mul(num, inv), mul(den, inv)
            lead = den._terms[max(den._terms, key=_lex_key)]
            if lead != 1:
                num = LaurentExpr({m: c / lead for m, c in num._terms.items()})
                den = LaurentExpr({m: c / lead for m, c in den._terms.items()})
        self.numerator = num
        self.denominator = den

    def is_laurent(self) -> bool:
        return self.denominator == LaurentExpr.constant(1)

    def __add__(self, other):
        other = _rational(other)
        if other is None:
            return NotImplemented
        return _sum_rationals([self, other])

    __radd__ = __add__

    def __neg__(self):
        return RationalExpr(-self.numerator, self.denominator)

    def __sub__(self, other):
        other = _rational(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _rational(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = _rational(other)
        if other is None:
            return NotImplemented
        return RationalExpr(
            mul(self.numerator, other.numerator), mul(self.denominator, other.denominator)
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _rational(other)
        if other is None:
            return NotImplemented
        if not other.numerator:
            raise PoleError("division by zero")
        return RationalExpr(
            mul(self.numerator, other.denominator), mul(self.denominator, other.numerator)
        )

    def __rtruediv__(self, other):
        other = _rational(other)
        if other is None:
            return NotImplemented
        return other / self

    def __pow__(self, k: int):
        k = _check_int(k)
        if k >= 0:
            return RationalExpr(self.numerator ** k, self.denominator ** k)
        if not self.numerator:
            raise PoleError("negative power of zero")
        return RationalExpr(self.denominator ** -k, self.numerator ** -k)

    def __eq__(self, other):
        other = _rational(other)
        if other is None:
            return NotImplemented
        return mul(self.numerator, other.denominator) == mul(other.numerator, self.denominator)

    def __hash__(self):
        # equal values can have different representations; hash only what is canonical
        return hash(self.is_laurent() and self.numerator)

    def __repr__(self):
        return f"RationalExpr(({self.numerator}) / ({self.denominator}))"


def _rational(x):
    if isinstance(x, RationalExpr):
        return x
    lx = _coerce(x)
    return None if lx is None else RationalExpr(lx)


def _lex_key(m: Monomial):
    return (m.degree, m.items())


def _sum_rationals(parts: Iterable[RationalExpr]) -> RationalExpr:
    groups: dict[LaurentExpr, LaurentExpr] = {}
    for r in parts:
        groups[r.denominator] = groups.get(r.denominator, LaurentExpr()) + r.numerator
    ordered = sorted(groups.items(), key=lambda kv: (-len(kv[0]), format_expr(kv[0])))
    den, num = ordered[0]
    for d, n in ordered[1:]:
        q, rem = divide_exact(den, d)
        if not rem:
            num = num + n * q
        else:
            q2, rem2 = divide_exact(d, den)
            if not rem2:
                num = num * q2 + n
                den = d
            else:
                num = num * d + n * den
                den = den * d
    return RationalExpr(num, den)


def substitute(p: LaurentExpr, rules: Mapping[str, object]) -> RationalExpr:
    """Simultaneously replace variables by rational expressions.

    A rule value may be a ``RationalExpr``, a ``LaurentExpr``, a rational
    number, or a ``(numerator, denominator)`` pair.  Variables without a rule
    are left alone.
    """
    prepared: dict[str, RationalExpr] = {}
    for name, rule in rules.items():
        if isinstance(rule, tuple) and len(rule) == 2:
            num, den = as_laurent(rule[0]), as_laurent(rule[1])
            if not den:
                raise InvalidRuleError(f"rule for {name!r} has a zero denominator")
            rule = RationalExpr(num, den)
        r = _rational(rule)
        if r is None:
            raise InvalidRuleError(f"cannot use {rule!r} as a substitution rule")
        prepared[name] = r

    power_cache: dict[tuple[str, int], RationalExpr] = {}

    def power(name, e):
        key = (name, e)
        if key not in power_cache:
            r = prepared[name]
            if e < 0 and not r.numerator:
                raise InvalidRuleError(f"rule for {name!r} is zero but appears with exponent {e}")
            power_cache[key] = r ** e
        return power_cache[key]

    parts = []
    for m, c in p._terms.items():
        kept = {}
        term = RationalExpr(LaurentExpr.constant(c))
        for name, e in m.items():
            if name in prepared:
                term = term * power(name, e)
            else:
                kept[name] = e
        if kept:
            term = term * RationalExpr(LaurentExpr.monomial(kept))
        parts.append(term)
    if not parts:
        return RationalExpr(LaurentExpr())
    return _sum_rationals(parts)


def to_laurent(r) -> LaurentExpr:
    if isinstance(r, LaurentExpr):
        return r
    r = _rational(r)
    if r is None:
        raise DomainError("expected a rational expression")
    q, rem = divide_exact(r.numerator, r.denominator)
    if rem:
        raise NotLaurentError(
            f"denominator {r.denominator} does not divide numerator; remainder {rem}",
            remainder=rem,
        )
    return q


# --- ordering, display, serialization ------------------------------------


class Ring:
    """Declared variable order used for display and serialization.

    Terms are listed in descending graded-lexicographic order with respect to
    ``variables``.
    """

    def __init__(self, variables: Iterable[str]):
        self.variables = tuple(_check_name(v) for v in variables)
        if len(set(self.variables)) != len(self.variables):
            raise DomainError("ring variables must be distinct")
        self._index = {v: i for i, v in enumerate(self.variables)}

    def gens(self, *names: str):
        out = tuple(LaurentExpr.variable(self._checked(n)) for n in (names or self.variables))
        return out[0] if len(out) == 1 else out

    def _checked(self, name):
        if name not in self._index:
            raise DomainError(f"variable {name!r} is not in the declared alphabet {self.variables}")
        return name

    def check(self, p: LaurentExpr) -> LaurentExpr:
        for v in p.variables:
            self._checked(v)
        return p

    def exponent_vector(self, m: Monomial) -> tuple[int, ...]:
        for v in m.variables:
            self._checked(v)
        return tuple(m[v] for v in self.variables)

    def sort_key(self, m: Monomial):
        vec = self.exponent_vector(m)
        return (sum(vec), vec)

    def sorted_terms(self, p: LaurentExpr) -> list[tuple[Monomial, Fraction]]:
        return sorted(p.items(), key=lambda mc: self.sort_key(mc[0]), reverse=True)

    def ordered_exponents(self, m: Monomial) -> dict[str, int]:
        return {v: m[v] for v in self.variables if m[v]}

    def __repr__(self):
        return f"Ring({self.variables!r})"


def _default_ring(p: LaurentExpr) -> Ring:
    return Ring(p.variables)


def format_expr(p: LaurentExpr, ring: Ring | None = None) -> str:
    if not p:
        return "0"
    ring = ring or _default_ring(p)
    out = []
    for m, c in ring.sorted_terms(p):
        body = _format_monomial(ring.ordered_exponents(m).items())
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if not body:
            text = str(a)
        elif a == 1:
            text = body
        else:
            text = f"{a}*{body}"
        out.append((sign, text))
    first_sign, first = out[0]
    s = ("-" if first_sign == "-" else "") + first
    for sign, text in out[1:]:
        s += f" {sign} {text}"
    return s


def to_data(p: LaurentExpr, ring: Ring | None = None) -> list[dict]:
    ring = ring or _default_ring(p)
    return [
        {"coeff": f"{c.numerator}/{c.denominator}", "exps": ring.ordered_exponents(m)}
        for m, c in ring.sorted_terms(p)
    ]


def from_data(data, ring: Ring | None = None) -> LaurentExpr:
    if not isinstance(data, list):
        raise DomainError("Laurent JSON must be an array of terms")
    terms = []
    for item in data:
        if not isinstance(item, dict) or set(item) != {"coeff", "exps"}:
            raise DomainError(f"malformed term {item!r}")
        coeff = item["coeff"]
        if not isinstance(coeff, str):
            raise DomainError("coefficients are serialized as strings")
        exps = item["exps"]
        if not isinstance(exps, dict):
            raise DomainError("exps must be an object")
        terms.append((Monomial({k: _check_int(v) for k, v in exps.items()}), Fraction(coeff)))
    p = LaurentExpr(terms)
    if ring is not None:
        ring.check(p)
    return p


def to_json(p: LaurentExpr, ring: Ring | None = None) -> str:
    return json.dumps(to_data(p, ring), separators=(",", ":"))


def from_json(text: str, ring: Ring | None = None) -> LaurentExpr:
    return from_data(json.loads(text), ring)
