"""Exact scalars, monomials and multivariate polynomials.

Everything is exact: coefficients are rationals (``fractions.Fraction``) or
elements of a prime field F_p; monomials are exponent tuples over a fixed
number of variables, all of degree 1.  Polynomials are immutable sparse maps
monomial -> coefficient with no zero values stored.
"""

from fractions import Fraction
from functools import lru_cache
import math

__all__ = [
    "Rationals",
    "PrimeField",
    "RATIONALS",
    "binomial",
    "grevlex_key",
    "lex_key",
    "monomial_key",
    "Polynomial",
    "parse_polynomial",
    "ParseError",
    "DimensionMismatch",
]


class DimensionMismatch(ValueError):
    """Operands live over different variable counts or ambients."""


class ParseError(ValueError):
    """Syntax error in polynomial / vector text, with position info."""

    def __init__(self, message, text, pos):
        super().__init__(f"{message} at position {pos}: {text!r}")
        self.text = text
        self.pos = pos


# ---------------------------------------------------------------------------
# coefficient fields
# ---------------------------------------------------------------------------

class Rationals:
    """Field descriptor for exact rational coefficients."""

    name = "q"
    characteristic = 0

    def from_int(self, a):
        return Fraction(a)

    def fraction(self, num, den):
        return Fraction(num, den)

    @property
    def one(self):
        return Fraction(1)

    @property
    def zero(self):
        return Fraction(0)

    def __repr__(self):
        return "Rationals()"

    def __eq__(self, other):
        return isinstance(other, Rationals)

    def __hash__(self):
        return hash("Rationals")


RATIONALS = Rationals()


@lru_cache(maxsize=None)
def _gfp_class(p):
    class GFElement:
        __slots__ = ("v",)
        modulus = p

        def __init__(self, v):
            self.v = v % p

        def __add__(self, other):
            if isinstance(other, int):
                other = GFElement(other)
            elif not isinstance(other, GFElement):
                return NotImplemented
            return GFElement(self.v + other.v)

        __radd__ = __add__

        def __sub__(self, other):
            if isinstance(other, int):
                other = GFElement(other)
            elif not isinstance(other, GFElement):
                return NotImplemented
            return GFElement(self.v - other.v)

        def __rsub__(self, other):
            if isinstance(other, int):
                return GFElement(other - self.v)
            return NotImplemented

        def __mul__(self, other):
            if isinstance(other, int):
                other = GFElement(other)
            elif not isinstance(other, GFElement):
                return NotImplemented
            return GFElement(self.v * other.v)

        __rmul__ = __mul__

        def __truediv__(self, other):
            if isinstance(other, int):
                other = GFElement(other)
            elif not isinstance(other, GFElement):
                return NotImplemented
            if other.v == 0:
                raise ZeroDivisionError("division by zero in F_%d" % p)
            return GFElement(self.v * pow(other.v, -1, p))

        def __rtruediv__(self, other):
            if isinstance(other, int):
                return GFElement(other) / self
            return NotImplemented

        def __neg__(self):
            return GFElement(-self.v)

        def __eq__(self, other):
            if isinstance(other, GFElement):
                return self.v == other.v
            if isinstance(other, int):
                return self.v == other % p
            return NotImplemented

        def __hash__(self):
            return hash((p, self.v))

        def __bool__(self):
            return self.v != 0

        def __repr__(self):
            return f"GF({p})({self.v})"

        def __str__(self):
            # symmetric representative keeps printed polynomials short
            return str(self.v)

    GFElement.__name__ = f"GF{p}"
    return GFElement


def _is_prime(p):
    if p < 2:
        return False
    for q in range(2, int(math.isqrt(p)) + 1):
        if p % q == 0:
            return False
    return True


class PrimeField:
    """Field descriptor for F_p, p an odd-or-even prime below 2^31."""

    characteristic_bound = 2**31

    def __init__(self, p):
        if p >= self.characteristic_bound or not _is_prime(p):
            raise ValueError(f"not a prime below 2^31: {p}")
        self.p = p
        self.name = f"p:{p}"
        self.characteristic = p
        self._cls = _gfp_class(p)

    def from_int(self, a):
        return self._cls(a)

    def fraction(self, num, den):
        return self._cls(num) / self._cls(den)

    @property
    def one(self):
        return self._cls(1)

    @property
    def zero(self):
        return self._cls(0)

    def __repr__(self):
        return f"PrimeField({self.p})"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("PrimeField", self.p))


def field_from_name(name):
    """Resolve the CLI field spec: "q" or "p:PRIME"."""
    if name == "q":
        return RATIONALS
    if name.startswith("p:"):
        return PrimeField(int(name[2:]))
    raise ValueError(f"unknown field spec {name!r}")


# ---------------------------------------------------------------------------
# integer combinatorics
# ---------------------------------------------------------------------------

def binomial(n, k):
    """Binomial coefficient for arbitrary integer arguments.

    Zero when k < 0 or when 0 <= n < k; for n < 0 the binomial-series
    convention (-1)^k * C(k-n-1, k) applies.
    """
    if k < 0:
        return 0
    if n >= 0:
        return math.comb(n, k) if k <= n else 0
    return (-1) ** k * math.comb(k - n - 1, k)


# ---------------------------------------------------------------------------
# monomials and orders
# ---------------------------------------------------------------------------
# A monomial over n variables is an exponent tuple of length n.

def mono_mul(u, v):
    return tuple(a + b for a, b in zip(u, v))


def mono_divides(u, v):
    """Whether u | v componentwise."""
    return all(a <= b for a, b in zip(u, v))


def mono_div(v, u):
    return tuple(b - a for a, b in zip(u, v))


def mono_lcm(u, v):
    return tuple(max(a, b) for a, b in zip(u, v))


def mono_degree(u):
    return sum(u)


def grevlex_key(u):
    # Larger key <=> larger monomial.  Ties in total degree are broken by
    # the reversed negated exponent vector (smallest last exponent wins).
    return (sum(u), tuple(-e for e in reversed(u)))


def lex_key(u):
    return u


def monomial_key(order):
    if order == "grevlex":
        return grevlex_key
    if order == "lex":
        return lex_key
    raise ValueError(f"unknown monomial order {order!r}")


# ---------------------------------------------------------------------------
# polynomials
# ---------------------------------------------------------------------------

class Polynomial:
    """Immutable multivariate polynomial with exact coefficients.

    ``terms`` maps exponent tuples to nonzero coefficients.  The number of
    variables ``n`` is fixed at construction; the homogeneous degree is
    cached when all monomials share one.
    """

    __slots__ = ("n", "terms", "_homdeg")

    def __init__(self, n, terms):
        self.n = n
        cleaned = {}
        for exp, c in terms.items():
            if c:
                if len(exp) != n:
                    raise DimensionMismatch(
                        f"exponent tuple {exp} does not match n={n}")
                cleaned[exp] = c
        self.terms = cleaned
        degs = {sum(e) for e in cleaned}
        self._homdeg = degs.pop() if len(degs) == 1 else None

    # -- constructors -------------------------------------------------
    @classmethod
    def zero(cls, n):
        return cls(n, {})

    @classmethod
    def constant(cls, n, c):
        return cls(n, {(0,) * n: c})

    @classmethod
    def variable(cls, n, i, field=RATIONALS):
        """The variable x_i (1-based)."""
        exp = tuple(1 if j == i - 1 else 0 for j in range(n))
        return cls(n, {exp: field.one})

    @classmethod
    def monomial(cls, n, exp, coeff):
        return cls(n, {tuple(exp): coeff})

    # -- structure ----------------------------------------------------
    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def degree(self):
        """Maximum total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def homogeneous_degree(self):
        """Shared degree of all terms, or None (zero poly gives None)."""
        return self._homdeg

    def is_homogeneous(self):
        return not self.terms or self._homdeg is not None

    def constant_term(self):
        return self.terms.get((0,) * self.n)

    # -- arithmetic ---------------------------------------------------
    def _check(self, other):
        if self.n != other.n:
            raise DimensionMismatch(
                f"variable counts differ: {self.n} vs {other.n}")

    def __add__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._check(other)
        terms = dict(self.terms)
        for exp, c in other.terms.items():
            s = terms.get(exp)
            if s is None:
                terms[exp] = c
            else:
                s = s + c
                if s:
                    terms[exp] = s
                else:
                    del terms[exp]
        return Polynomial(self.n, terms)

    def __sub__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._check(other)
        terms = dict(self.terms)
        for exp, c in other.terms.items():
            s = terms.get(exp)
            if s is None:
                terms[exp] = -c
            else:
                s = s - c
                if s:
                    terms[exp] = s
                else:
                    del terms[exp]
        return Polynomial(self.n, terms)

    def __neg__(self):
        return Polynomial(self.n, {e: -c for e, c in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._check(other)
        terms = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = mono_mul(e1, e2)
                c = c1 * c2
                s = terms.get(e)
                if s is None:
                    terms[e] = c
                else:
                    s = s + c
                    if s:
                        terms[e] = s
                    else:
                        del terms[e]
        return Polynomial(self.n, terms)

    def scale(self, c):
        if not c:
            return Polynomial.zero(self.n)
        return Polynomial(self.n, {e: c * v for e, v in self.terms.items()})

    def mul_term(self, exp, c):
        """Multiply by the single term c * x^exp."""
        if not c:
            return Polynomial.zero(self.n)
        return Polynomial(
            self.n, {mono_mul(e, exp): v * c for e, v in self.terms.items()})

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.n == other.n and self.terms == other.terms

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    # -- printing -----------------------------------------------------
    def sorted_terms(self, order="grevlex"):
        key = monomial_key(order)
        return sorted(self.terms.items(), key=lambda t: key(t[0]), reverse=True)

    def __str__(self):
        return format_polynomial(self)

    def __repr__(self):
        return f"Polynomial({self.n}, {format_polynomial(self)!r})"


def _coeff_str(c):
    if isinstance(c, Fraction):
        return str(c)
    return str(c)  # prime field: residue in [0, p)


def format_polynomial(p, order="grevlex"):
    """Render in the bit-exact grammar; terms in descending monomial order."""
    if p.is_zero():
        return "0"
    chunks = []
    for exp, c in p.sorted_terms(order):
        factors = [
            f"x{i + 1}^{e}" if e > 1 else f"x{i + 1}"
            for i, e in enumerate(exp) if e
        ]
        cs = _coeff_str(c)
        neg = cs.startswith("-")
        if neg:
            cs = cs[1:]
        if not factors:
            body = cs
        elif cs == "1":
            body = "*".join(factors)
        else:
            body = cs + "*" + "*".join(factors)
        if not chunks:
            chunks.append(("-" if neg else "") + body)
        else:
            chunks.append(("- " if neg else "+ ") + body)
    return " ".join(chunks)


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------

class _Scanner:
    def __init__(self, text):
        self.text = text
        self.pos = 0

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self, ch):
        if self.peek() == ch:
            self.pos += 1
            return True
        return False

    def error(self, msg):
        raise ParseError(msg, self.text, self.pos)

    def integer(self):
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start:
            self.error("expected integer")
        return int(self.text[start:self.pos])


def _parse_factor(sc, n):
    """var ['^' posint] -> (var index 0-based, exponent)."""
    if not sc.take("x"):
        sc.error("expected variable")
    i = sc.integer()
    if not 1 <= i <= n:
        sc.error(f"variable x{i} out of range 1..{n}")
    e = 1
    if sc.take("^"):
        e = sc.integer()
        if e < 1:
            sc.error("exponent must be positive")
    return i - 1, e


def _parse_term(sc, n, field):
    """[rational '*'] factor ('*' factor)* | rational  -> (exp, coeff)."""
    coeff = field.one
    exp = [0] * n
    ch = sc.peek()
    if ch.isdigit():
        num = sc.integer()
        den = 1
        if sc.take("/"):
            den = sc.integer()
            if den == 0:
                sc.error("zero denominator")
        coeff = field.fraction(num, den)
        if not sc.take("*"):
            return tuple(exp), coeff  # bare constant
    i, e = _parse_factor(sc, n)
    exp[i] += e
    while sc.take("*"):
        i, e = _parse_factor(sc, n)
        exp[i] += e
    return tuple(exp), coeff


def parse_polynomial(text, n, field=RATIONALS):
    """Parse the polynomial grammar over x1..xn; "0" is the zero polynomial."""
    sc = _Scanner(text)
    if sc.peek() == "":
        sc.error("empty input")
    terms = {}
    first = True
    while True:
        sign = 1
        if sc.take("+"):
            sign = 1
        elif sc.take("-"):
            sign = -1
        elif not first:
            break
        if first and sign == 1 and sc.peek() == "0":
            mark = sc.pos
            sc.pos += 1
            if sc.peek() == "":
                return Polynomial.zero(n)
            sc.pos = mark  # "0" was a leading coefficient digit after all
        exp, coeff = _parse_term(sc, n, field)
        if sign < 0:
            coeff = -coeff
        prev = terms.get(exp)
        if prev is None:
            terms[exp] = coeff
        else:
            s = prev + coeff
            if s:
                terms[exp] = s
            else:
                del terms[exp]
        first = False
        if sc.peek() == "":
            break
    sc.skip_ws()
    if sc.pos != len(sc.text):
        sc.error("trailing input")
    return Polynomial(n, terms)
