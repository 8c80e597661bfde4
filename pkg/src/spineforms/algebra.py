"""Exact arithmetic substrate.

Four value families cover every computation in the package:

* ``Fraction`` (re-exported) for rational scalars,
* ``LaurentPoly`` for integer-coefficient Laurent polynomials in the
  half-coordinate variables ``t_*`` and loop weights ``w_*``,
* ``SqrtRational`` for numbers of the shape ``a*sqrt(b)`` with rational
  ``a, b`` (lambda-lengths at exact points live here),
* ``SqrtExtension`` for Laurent polynomials extended by square roots of
  Laurent polynomials (the flip-identity checks live here).

2x2 matrices over any of these are handled by ``Mat2``, which is ring
agnostic: entries only need ``+``, ``*`` and unary ``-``.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Mapping, Optional

__all__ = [
    "Fraction",
    "LaurentPoly",
    "Mat2",
    "SqrtExtension",
    "SqrtRational",
    "lp_mul",
    "lp_div_exact",
    "mat2_mul",
    "sqrt_reduce",
    "fraction_sqrt",
    "fraction_nth_root",
    "frac_matmul",
    "frac_inverse",
    "frac_kernel",
]


Key = tuple  # tuple of (variable, exponent) pairs, sorted, exponents nonzero


def _merge_keys(k1: Key, k2: Key) -> Key:
    exps = dict(k1)
    for v, e in k2:
        e2 = exps.get(v, 0) + e
        if e2:
            exps[v] = e2
        else:
            del exps[v]
    return tuple(sorted(exps.items()))


class LaurentPoly:
    """Sparse Laurent polynomial with integer coefficients.

    Terms map a sorted tuple of (variable, exponent) pairs to a nonzero
    int.  The empty tuple keys the constant term.  Canonical form (no
    zero coefficients, no zero exponents) is maintained by every
    operation, so ``==`` is plain dict equality.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[Mapping[Key, int]] = None):
        clean: dict[Key, int] = {}
        if terms:
            for key, coeff in terms.items():
                if coeff == 0:
                    continue
                key = tuple(sorted((v, e) for v, e in key if e != 0))
                clean[key] = clean.get(key, 0) + coeff
                if clean[key] == 0:
                    del clean[key]
        self.terms = clean

    @classmethod
    def const(cls, c: int) -> "LaurentPoly":
        return cls({(): int(c)})

    @classmethod
    def var(cls, name: str, exp: int = 1) -> "LaurentPoly":
        return cls({((name, exp),): 1})

    @classmethod
    def monomial_from(cls, coeff: int, exps: Mapping[str, int]) -> "LaurentPoly":
        return cls({tuple(sorted(exps.items())): coeff})

    def is_zero(self) -> bool:
        return not self.terms

    def is_one(self) -> bool:
        return self.terms == {(): 1}

    def is_constant(self) -> bool:
        return all(k == () for k in self.terms)

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def monomial(self) -> tuple[int, dict[str, int]]:
        """Coefficient and exponent dict of a one-term polynomial."""
        if len(self.terms) != 1:
            raise ValueError("not a monomial: %s" % self)
        ((key, coeff),) = self.terms.items()
        return coeff, dict(key)

    def variables(self) -> set[str]:
        out: set[str] = set()
        for key in self.terms:
            out.update(v for v, _ in key)
        return out

    def sign_definite(self) -> Optional[int]:
        """+1 or -1 if every coefficient has that sign, 0 for the zero
        polynomial, None when signs are mixed."""
        if not self.terms:
            return 0
        signs = {1 if c > 0 else -1 for c in self.terms.values()}
        if len(signs) > 1:
            return None
        return signs.pop()

    def _coerce(self, other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            return other
        if isinstance(other, int):
            return LaurentPoly.const(other)
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self.terms)
        for key, coeff in other.terms.items():
            s = out.get(key, 0) + coeff
            if s:
                out[key] = s
            else:
                out.pop(key, None)
        result = LaurentPoly.__new__(LaurentPoly)
        result.terms = out
        return result

    __radd__ = __add__

    def __neg__(self):
        result = LaurentPoly.__new__(LaurentPoly)
        result.terms = {k: -c for k, c in self.terms.items()}
        return result

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            if other == 0:
                return LaurentPoly()
            result = LaurentPoly.__new__(LaurentPoly)
            result.terms = {k: c * other for k, c in self.terms.items()}
            return result
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        out: dict[Key, int] = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                key = _merge_keys(k1, k2)
                s = out.get(key, 0) + c1 * c2
                if s:
                    out[key] = s
                else:
                    del out[key]
        result = LaurentPoly.__new__(LaurentPoly)
        result.terms = out
        return result

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = LaurentPoly.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def inverse(self) -> "LaurentPoly":
        """Inverse of a unit monomial (coefficient +-1)."""
        coeff, exps = self.monomial()
        if coeff not in (1, -1):
            raise ValueError("not a unit monomial: %s" % self)
        return LaurentPoly.monomial_from(coeff, {v: -e for v, e in exps.items()})

    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.const(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def subs(self, values: Mapping[str, Fraction]) -> Fraction:
        """Exact evaluation; every variable present must be covered."""
        total = Fraction(0)
        for key, coeff in self.terms.items():
            term = Fraction(coeff)
            for v, e in key:
                term *= Fraction(values[v]) ** e
            total += term
        return total

    def evalf(self, values: Mapping[str, float]) -> float:
        total = 0.0
        for key, coeff in self.terms.items():
            term = float(coeff)
            for v, e in key:
                term *= values[v] ** e
            total += term
        return total

    def __str__(self):
        if not self.terms:
            return "0"
        chunks = []
        for key in sorted(self.terms):
            coeff = self.terms[key]
            factors = ["%s^%d" % (v, e) if e != 1 else v for v, e in key]
            body = "*".join(factors)
            mag = abs(coeff)
            if not body:
                text = str(mag)
            elif mag == 1:
                text = body
            else:
                text = "%d*%s" % (mag, body)
            chunks.append(("-" if coeff < 0 else "+", text))
        sign, text = chunks[0]
        out = ("-" if sign == "-" else "") + text
        for sign, text in chunks[1:]:
            out += " %s %s" % (sign, text)
        return out

    def __repr__(self):
        return "LaurentPoly(%s)" % self


def lp_mul(p: LaurentPoly, q: LaurentPoly) -> LaurentPoly:
    return p * q


def lp_div_exact(p: LaurentPoly, q: LaurentPoly) -> LaurentPoly:
    """Quotient p/q when q divides p exactly in the Laurent ring.

    Peels the lexicographically least term of q off the remainder; since
    Laurent monomials are units, any nonzero q has an invertible least
    term and the loop either terminates with zero remainder or the
    division was not exact.
    """
    if q.is_zero():
        raise ZeroDivisionError("division by zero polynomial")
    # raw key comparison is not translation-invariant once exponents go
    # negative; order terms by their exponent vector instead
    allvars = sorted(
        {v for k in p.terms for v, _ in k} | {v for k in q.terms for v, _ in k}
    )

    def vec(key: Key) -> tuple[int, ...]:
        d = dict(key)
        return tuple(d.get(v, 0) for v in allvars)

    qk = min(q.terms, key=vec)
    qc = q.terms[qk]
    rem = dict(p.terms)
    out: dict[Key, int] = {}
    guard = 0
    while rem:
        guard += 1
        if guard > 10000:
            raise ValueError("non-exact Laurent division")
        rk = min(rem, key=vec)
        rc = rem[rk]
        if rc % qc != 0:
            raise ValueError("non-exact Laurent division")
        fac_c = rc // qc
        fac_k = _merge_keys(rk, tuple((v, -e) for v, e in qk))
        out[fac_k] = out.get(fac_k, 0) + fac_c
        for k2, c2 in q.terms.items():
            key = _merge_keys(fac_k, k2)
            s = rem.get(key, 0) - fac_c * c2
            if s:
                rem[key] = s
            else:
                rem.pop(key, None)
    return LaurentPoly(out)


class SqrtRational:
    """Exact number of the shape rat*sqrt(rad), rad a positive integer.

    Normalization clears the radicand's denominator and folds perfect
    squares into the rational part, so purely rational values always end
    up with rad == 1.  Sums are only defined inside one square class
    (rad2/rad1 a rational square), which is all the matrix words ever
    produce: entries of a fixed word keep a single parity of exponents.
    """

    __slots__ = ("rat", "rad")

    def __init__(self, rat, rad=1):
        rat = Fraction(rat)
        rad = Fraction(rad)
        if rad <= 0:
            raise ValueError("radicand must be positive")
        # sqrt(p/q) = sqrt(p*q)/q
        if rad.denominator != 1:
            rat /= rad.denominator
            rad = Fraction(rad.numerator * rad.denominator)
        n = rad.numerator
        root = math.isqrt(n)
        if root * root == n:
            rat *= root
            n = 1
        if rat == 0:
            n = 1
        self.rat = rat
        self.rad = n

    @classmethod
    def from_fraction(cls, q) -> "SqrtRational":
        return cls(Fraction(q), 1)

    @classmethod
    def sqrt(cls, q) -> "SqrtRational":
        return cls(1, Fraction(q))

    def is_zero(self) -> bool:
        return self.rat == 0

    def sign(self) -> int:
        return 0 if self.rat == 0 else (1 if self.rat > 0 else -1)

    def square(self) -> Fraction:
        return self.rat * self.rat * self.rad

    def to_fraction(self) -> Fraction:
        if self.rad != 1:
            raise ValueError("not rational: %r" % self)
        return self.rat

    def __float__(self):
        return float(self.rat) * math.sqrt(self.rad)

    def _coerce(self, other) -> "SqrtRational":
        if isinstance(other, SqrtRational):
            return other
        if isinstance(other, (int, Fraction)):
            return SqrtRational(other, 1)
        return NotImplemented  # type: ignore[return-value]

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        g = math.gcd(self.rad, other.rad)
        return SqrtRational(self.rat * other.rat * g, (self.rad // g) * (other.rad // g))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other * self.inverse()

    def inverse(self) -> "SqrtRational":
        if self.rat == 0:
            raise ZeroDivisionError("inverse of zero")
        return SqrtRational(1 / (self.rat * self.rad), self.rad)

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = SqrtRational(1, 1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.rat == 0:
            return other
        if other.rat == 0:
            return self
        if self.rad == other.rad:
            return SqrtRational(self.rat + other.rat, self.rad)
        ratio = Fraction(other.rad, self.rad)
        num_root = math.isqrt(ratio.numerator)
        den_root = math.isqrt(ratio.denominator)
        if num_root * num_root != ratio.numerator or den_root * den_root != ratio.denominator:
            raise ValueError("incompatible square classes: %r + %r" % (self, other))
        return SqrtRational(self.rat + other.rat * Fraction(num_root, den_root), self.rad)

    __radd__ = __add__

    def __neg__(self):
        return SqrtRational(-self.rat, self.rad)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = SqrtRational(other, 1)
        if not isinstance(other, SqrtRational):
            return NotImplemented
        return self.sign() == other.sign() and self.square() == other.square()

    def __hash__(self):
        return hash((self.sign(), self.square()))

    def __str__(self):
        if self.rad == 1:
            return str(self.rat)
        if self.rat == 1:
            return "sqrt(%d)" % self.rad
        return "%s*sqrt(%d)" % (self.rat, self.rad)

    def __repr__(self):
        return "SqrtRational(%s, %s)" % (self.rat, self.rad)


def fraction_sqrt(q: Fraction) -> Fraction:
    """Exact square root of a perfect-square rational."""
    q = Fraction(q)
    if q < 0:
        raise ValueError("negative radicand")
    num = math.isqrt(q.numerator)
    den = math.isqrt(q.denominator)
    if num * num != q.numerator or den * den != q.denominator:
        raise ValueError("%s is not a rational square" % q)
    return Fraction(num, den)


def fraction_nth_root(q: Fraction, k: int) -> Fraction:
    """Exact k-th root of a rational, erroring when none exists."""
    q = Fraction(q)
    if k <= 0:
        raise ValueError("root order must be positive")
    if q <= 0:
        raise ValueError("positive values only")

    def iroot(n: int) -> int:
        r = round(n ** (1.0 / k))
        for cand in (r - 1, r, r + 1):
            if cand > 0 and cand**k == n:
                return cand
        raise ValueError("%d has no integer %d-th root" % (n, k))

    return Fraction(iroot(q.numerator), iroot(q.denominator))


class Mat2:
    """2x2 matrix over an arbitrary commutative ring."""

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a, b, c, d):
        self.a = a
        self.b = b
        self.c = c
        self.d = d

    def __mul__(self, other):
        if not isinstance(other, Mat2):
            return NotImplemented
        return Mat2(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def __neg__(self):
        return Mat2(-self.a, -self.b, -self.c, -self.d)

    def trace(self):
        return self.a + self.d

    def det(self):
        return self.a * self.d - self.b * self.c

    def __eq__(self, other):
        if not isinstance(other, Mat2):
            return NotImplemented
        return self.a == other.a and self.b == other.b and self.c == other.c and self.d == other.d

    def __str__(self):
        return "[[%s, %s], [%s, %s]]" % (self.a, self.b, self.c, self.d)

    __repr__ = __str__


def mat2_mul(A: Mat2, B: Mat2) -> Mat2:
    """Product A*B; words apply right to left, so B acts first."""
    return A * B


class SqrtExtension:
    """Laurent polynomials extended by square-root generators.

    ``gens`` is a sorted tuple of (name, r) pairs declaring u^2 = r with
    r a LaurentPoly.  Elements are maps from subsets of generator names
    to LaurentPoly coefficients; reduction keeps every u-degree at 0 or
    1, applying u^2 -> r during multiplication.
    """

    __slots__ = ("gens", "parts")

    def __init__(self, gens, parts: Optional[Mapping[frozenset, LaurentPoly]] = None):
        self.gens = tuple(sorted(gens))
        names = {name for name, _ in self.gens}
        clean: dict[frozenset, LaurentPoly] = {}
        if parts:
            for subset, poly in parts.items():
                subset = frozenset(subset)
                if not subset <= names:
                    raise ValueError("undeclared generator in %s" % sorted(subset))
                if isinstance(poly, int):
                    poly = LaurentPoly.const(poly)
                if poly.is_zero():
                    continue
                prior = clean.get(subset)
                clean[subset] = poly if prior is None else prior + poly
                if clean[subset].is_zero():
                    del clean[subset]
        self.parts = clean

    @classmethod
    def from_poly(cls, gens, poly) -> "SqrtExtension":
        if isinstance(poly, int):
            poly = LaurentPoly.const(poly)
        return cls(gens, {frozenset(): poly})

    @classmethod
    def gen(cls, gens, name: str) -> "SqrtExtension":
        return cls(gens, {frozenset([name]): LaurentPoly.const(1)})

    def _square(self, name: str) -> LaurentPoly:
        for n, r in self.gens:
            if n == name:
                return r
        raise ValueError("undeclared generator %s" % name)

    def _coerce(self, other) -> "SqrtExtension":
        if isinstance(other, SqrtExtension):
            if other.gens != self.gens:
                raise ValueError("mismatched square-root extensions")
            return other
        if isinstance(other, (int, LaurentPoly)):
            return SqrtExtension.from_poly(self.gens, other)
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self.parts)
        for subset, poly in other.parts.items():
            prior = out.get(subset)
            tot = poly if prior is None else prior + poly
            if tot.is_zero():
                out.pop(subset, None)
            else:
                out[subset] = tot
        res = SqrtExtension.__new__(SqrtExtension)
        res.gens = self.gens
        res.parts = out
        return res

    __radd__ = __add__

    def __neg__(self):
        res = SqrtExtension.__new__(SqrtExtension)
        res.gens = self.gens
        res.parts = {s: -p for s, p in self.parts.items()}
        return res

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, LaurentPoly)):
            other = SqrtExtension.from_poly(self.gens, other)
        if not isinstance(other, SqrtExtension):
            return NotImplemented
        if other.gens != self.gens:
            raise ValueError("mismatched square-root extensions")
        out: dict[frozenset, LaurentPoly] = {}
        for s1, p1 in self.parts.items():
            for s2, p2 in other.parts.items():
                coeff = p1 * p2
                for name in s1 & s2:
                    coeff = coeff * self._square(name)
                subset = s1 ^ s2
                prior = out.get(subset)
                tot = coeff if prior is None else prior + coeff
                if tot.is_zero():
                    out.pop(subset, None)
                else:
                    out[subset] = tot
        res = SqrtExtension.__new__(SqrtExtension)
        res.gens = self.gens
        res.parts = out
        return res

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not self.parts

    def __eq__(self, other):
        if isinstance(other, (int, LaurentPoly)):
            other = SqrtExtension.from_poly(self.gens, other)
        if not isinstance(other, SqrtExtension):
            return NotImplemented
        return self.gens == other.gens and self.parts == other.parts

    def __hash__(self):
        return hash((self.gens, frozenset((s, hash(p)) for s, p in self.parts.items())))

    def __str__(self):
        if not self.parts:
            return "0"
        chunks = []
        for subset in sorted(self.parts, key=sorted):
            poly = self.parts[subset]
            names = "*".join(sorted(subset))
            if names:
                chunks.append("(%s)*%s" % (poly, names))
            else:
                chunks.append("(%s)" % poly)
        return " + ".join(chunks)

    __repr__ = __str__


def sqrt_reduce(x: SqrtExtension) -> SqrtExtension:
    """Canonical form of a square-root extension element.

    Arithmetic already reduces on the fly; this re-normalizes an element
    assembled by hand (dropping zero parts, re-checking generators).
    """
    return SqrtExtension(x.gens, x.parts)


# Small exact linear algebra over Fraction, list-of-lists convention.


def frac_matmul(A: list[list[Fraction]], B: list[list[Fraction]]) -> list[list[Fraction]]:
    n, k = len(A), len(B)
    m = len(B[0]) if B else 0
    out = [[Fraction(0)] * m for _ in range(n)]
    for i in range(n):
        Ai = A[i]
        for t in range(k):
            a = Ai[t]
            if a == 0:
                continue
            Bt = B[t]
            row = out[i]
            for j in range(m):
                row[j] += a * Bt[j]
    return out


def frac_inverse(A: list[list[Fraction]]) -> list[list[Fraction]]:
    """Inverse via Gauss-Jordan; raises ValueError when singular."""
    n = len(A)
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(A)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if pivot is None:
            raise ValueError("singular matrix")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        pv = aug[col][col]
        aug[col] = [x / pv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def frac_kernel(A: list[list[Fraction]]) -> list[list[Fraction]]:
    """Basis of the right kernel of A (rows are basis vectors)."""
    if not A:
        return []
    rows = [list(map(Fraction, row)) for row in A]
    n, m = len(rows), len(rows[0])
    pivots: list[int] = []
    r = 0
    for col in range(m):
        pivot = next((i for i in range(r, n) if rows[i][col] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        pv = rows[r][col]
        rows[r] = [x / pv for x in rows[r]]
        for i in range(n):
            if i != r and rows[i][col] != 0:
                f = rows[i][col]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
        if r == n:
            break
    free = [c for c in range(m) if c not in pivots]
    basis = []
    for fc in free:
        vec = [Fraction(0)] * m
        vec[fc] = Fraction(1)
        for prow, pcol in enumerate(pivots):
            vec[pcol] = -rows[prow][fc]
        basis.append(vec)
    return basis
