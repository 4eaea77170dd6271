"""Exact multivariate polynomial arithmetic, expression parsing, and jets.

Coefficients are Gaussian rationals (complex numbers with Fraction real and
imaginary parts), so polynomial identities are decided exactly; floating
complex evaluation is a separate code path used by the numeric solvers.

A polynomial in variables u1..un is a mapping from exponent tuples to nonzero
coefficients:

    u1^2*u2 + 3  ->  {(2, 1): 1, (0, 0): 3}

The zero polynomial has an empty term map and degree -1 by convention, which
keeps degree bounds valid in randomized identity testing.

Expression grammar (whitespace insignificant, one optional unary minus before
the leading term):

    expr     := '-'? term (('+'|'-') term)*
    term     := factor ('*' factor)*
    factor   := base ('^' nat)?
    base     := rational | 'i' | var | '(' expr ')'
    var      := 'u' nat
    rational := nat ('/' nat)?
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

import numpy as np

from .errors import PolyParseError

ScalarLike = Union[int, Fraction, "GaussianRational"]


class GaussianRational:
    """Exact complex scalar a + b*i with rational a, b."""

    __slots__ = ("re", "im")

    def __init__(self, re: int | Fraction = 0, im: int | Fraction = 0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @staticmethod
    def coerce(x: ScalarLike) -> "GaussianRational":
        if isinstance(x, GaussianRational):
            return x
        return GaussianRational(Fraction(x))

    def __add__(self, other: ScalarLike) -> "GaussianRational":
        o = GaussianRational.coerce(other)
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other: ScalarLike) -> "GaussianRational":
        o = GaussianRational.coerce(other)
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other: ScalarLike) -> "GaussianRational":
        return GaussianRational.coerce(other) - self

    def __neg__(self) -> "GaussianRational":
        return GaussianRational(-self.re, -self.im)

    def __mul__(self, other: ScalarLike) -> "GaussianRational":
        o = GaussianRational.coerce(other)
        return GaussianRational(
            self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re
        )

    __rmul__ = __mul__

    def __truediv__(self, other: ScalarLike) -> "GaussianRational":
        o = GaussianRational.coerce(other)
        d = o.re * o.re + o.im * o.im
        if d == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        return GaussianRational(
            (self.re * o.re + self.im * o.im) / d,
            (self.im * o.re - self.re * o.im) / d,
        )

    def __rtruediv__(self, other: ScalarLike) -> "GaussianRational":
        return GaussianRational.coerce(other) / self

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction, GaussianRational)):
            o = GaussianRational.coerce(other)
            return self.re == o.re and self.im == o.im
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.re, self.im))

    def __bool__(self) -> bool:
        return self.re != 0 or self.im != 0

    def l1(self) -> Fraction:
        """|re| + |im|; exact magnitude proxy used for pivot selection."""
        return abs(self.re) + abs(self.im)

    def to_complex(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __repr__(self) -> str:
        return f"GaussianRational({self.re!r}, {self.im!r})"

    def __str__(self) -> str:
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return f"{self.im}*i" if self.im != 1 else "i"
        return f"({self.re} {'+' if self.im > 0 else '-'} {abs(self.im)}*i)"


ZERO = GaussianRational(0)
ONE = GaussianRational(1)
I_UNIT = GaussianRational(0, 1)


class Polynomial:
    """Immutable sparse polynomial with exact coefficients.

    ``terms`` maps exponent tuples (length ``num_vars``, entries >= 0) to
    nonzero GaussianRational coefficients; no two terms share an exponent
    vector.  Do not mutate after construction.
    """

    __slots__ = ("num_vars", "terms")

    def __init__(self, num_vars: int, terms: Mapping[tuple, ScalarLike]):
        if num_vars < 0:
            raise ValueError("num_vars must be non-negative")
        canon: dict[tuple, GaussianRational] = {}
        for exps, coeff in terms.items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != num_vars or any(e < 0 for e in exps):
                raise ValueError(f"bad exponent vector {exps} for {num_vars} variables")
            c = GaussianRational.coerce(coeff)
            if c:
                prev = canon.get(exps)
                c = c if prev is None else prev + c
                if c:
                    canon[exps] = c
                else:
                    del canon[exps]
        self.num_vars = num_vars
        self.terms = canon

    @staticmethod
    def zero(num_vars: int) -> "Polynomial":
        return Polynomial(num_vars, {})

    @staticmethod
    def const(num_vars: int, value: ScalarLike) -> "Polynomial":
        return Polynomial(num_vars, {(0,) * num_vars: value})

    @staticmethod
    def variable(num_vars: int, index: int) -> "Polynomial":
        """The polynomial u_{index+1} (0-based index)."""
        if not 0 <= index < num_vars:
            raise IndexError(f"variable index {index} out of range for {num_vars} variables")
        exps = [0] * num_vars
        exps[index] = 1
        return Polynomial(num_vars, {tuple(exps): 1})

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        """Max total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def _check_same_vars(self, other: "Polynomial") -> None:
        if self.num_vars != other.num_vars:
            raise ValueError("polynomials have different variable counts")

    def __add__(self, other) -> "Polynomial":
        if not isinstance(other, Polynomial):
            other = Polynomial.const(self.num_vars, other)
        self._check_same_vars(other)
        out = dict(self.terms)
        for exps, c in other.terms.items():
            s = out.get(exps, ZERO) + c
            if s:
                out[exps] = s
            else:
                out.pop(exps, None)
        return Polynomial(self.num_vars, out)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial(self.num_vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> "Polynomial":
        if not isinstance(other, Polynomial):
            other = Polynomial.const(self.num_vars, other)
        return self + (-other)

    def __rsub__(self, other) -> "Polynomial":
        return (-self) + other

    def __mul__(self, other) -> "Polynomial":
        if not isinstance(other, Polynomial):
            c = GaussianRational.coerce(other)
            return Polynomial(self.num_vars, {e: cc * c for e, cc in self.terms.items()})
        self._check_same_vars(other)
        out: dict[tuple, GaussianRational] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(e, ZERO) + c1 * c2
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        return Polynomial(self.num_vars, out)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "Polynomial":
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = Polynomial.const(self.num_vars, 1)
        base = self
        e = exponent
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.num_vars == other.num_vars and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.num_vars, frozenset(self.terms.items())))

    def partial(self, index: int) -> "Polynomial":
        """Formal partial derivative with respect to u_{index+1} (0-based)."""
        if not 0 <= index < self.num_vars:
            raise IndexError(f"variable index {index} out of range for {self.num_vars} variables")
        out: dict[tuple, GaussianRational] = {}
        for exps, c in self.terms.items():
            e = exps[index]
            if e == 0:
                continue
            new = list(exps)
            new[index] = e - 1
            out[tuple(new)] = c * e
        return Polynomial(self.num_vars, out)

    def eval_exact(self, point: Sequence[ScalarLike]) -> GaussianRational:
        if len(point) != self.num_vars:
            raise ValueError("point has wrong length")
        vals = [GaussianRational.coerce(x) for x in point]
        total = GaussianRational(0)
        for exps, c in self.terms.items():
            term = c
            for v, e in zip(vals, exps):
                for _ in range(e):
                    term = term * v
            total = total + term
        return total

    def eval_complex(self, point: Sequence[complex]) -> complex:
        if len(point) != self.num_vars:
            raise ValueError("point has wrong length")
        total = 0j
        for exps, c in self.terms.items():
            term = c.to_complex()
            for v, e in zip(point, exps):
                if e:
                    term *= complex(v) ** e
            total += term
        return total

    def shift(self, offset: Sequence[ScalarLike]) -> "Polynomial":
        """Exact substitution u_i -> u_i + offset_i."""
        if len(offset) != self.num_vars:
            raise ValueError("offset has wrong length")
        shifted_vars = [
            Polynomial.variable(self.num_vars, i) + GaussianRational.coerce(offset[i])
            for i in range(self.num_vars)
        ]
        total = Polynomial.zero(self.num_vars)
        for exps, c in self.terms.items():
            term = Polynomial.const(self.num_vars, c)
            for i, e in enumerate(exps):
                if e:
                    term = term * (shifted_vars[i] ** e)
            total = total + term
        return total

    # -- canonical printing -------------------------------------------------

    def _sorted_terms(self):
        return sorted(
            self.terms.items(),
            key=lambda kv: (-sum(kv[0]), tuple(-e for e in kv[0])),
        )

    @staticmethod
    def _positive_coeff_str(c: GaussianRational) -> str:
        """Render a coefficient already known to have positive sign marker."""
        if c.im == 0:
            return str(c.re)
        if c.re == 0:
            return "i" if c.im == 1 else f"{c.im}*i"
        sign = "+" if c.im > 0 else "-"
        im = abs(c.im)
        im_str = "i" if im == 1 else f"{im}*i"
        return f"({c.re} {sign} {im_str})"

    def to_expr(self) -> str:
        """Canonical grammar-conformant rendering; parse(to_expr()) == self."""
        if not self.terms:
            return "0"
        pieces: list[str] = []
        for idx, (exps, c) in enumerate(self._sorted_terms()):
            # sign of a term follows its real part, or imaginary part if real is 0
            negative = (c.re < 0) or (c.re == 0 and c.im < 0)
            mag = -c if negative else c
            factors = []
            for i, e in enumerate(exps):
                if e == 1:
                    factors.append(f"u{i + 1}")
                elif e > 1:
                    factors.append(f"u{i + 1}^{e}")
            if not factors or mag != ONE:
                factors.insert(0, self._positive_coeff_str(mag))
            body = "*".join(factors)
            if idx == 0:
                pieces.append(f"-{body}" if negative else body)
            else:
                pieces.append(f"{'-' if negative else '+'} {body}")
        return " ".join(pieces)

    def __str__(self) -> str:
        return self.to_expr()

    def __repr__(self) -> str:
        return f"Polynomial({self.num_vars}, {self.to_expr()!r})"


# -- expression parser -------------------------------------------------------


class _ExprParser:
    def __init__(self, text: str, num_vars: int):
        self.text = text
        self.n = num_vars
        self.pos = 0

    def error(self, message: str, pos: int | None = None):
        raise PolyParseError(message, self.pos if pos is None else pos)

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, char: str) -> None:
        if self.peek() != char:
            self.error(f"expected '{char}'")
        self.pos += 1

    def parse(self) -> Polynomial:
        self.skip_ws()
        result = self.expr()
        self.skip_ws()
        if self.pos < len(self.text):
            self.error(f"unexpected character {self.text[self.pos]!r}")
        return result

    def expr(self) -> Polynomial:
        self.skip_ws()
        negate = False
        if self.peek() == "-":
            negate = True
            self.pos += 1
        total = self.term()
        if negate:
            total = -total
        while True:
            self.skip_ws()
            op = self.peek()
            if op not in ("+", "-"):
                return total
            self.pos += 1
            rhs = self.term()
            total = total + rhs if op == "+" else total - rhs

    def term(self) -> Polynomial:
        total = self.factor()
        while True:
            self.skip_ws()
            if self.peek() != "*":
                return total
            self.pos += 1
            total = total * self.factor()

    def factor(self) -> Polynomial:
        base = self.base()
        self.skip_ws()
        if self.peek() == "^":
            self.pos += 1
            self.skip_ws()
            if self.peek() == "^":
                self.error("unexpected '^'")
            exponent = self.nat("exponent")
            return base ** exponent
        return base

    def base(self) -> Polynomial:
        self.skip_ws()
        ch = self.peek()
        if ch == "(":
            self.pos += 1
            inner = self.expr()
            self.skip_ws()
            self.expect(")")
            return inner
        if ch == "i":
            self.pos += 1
            return Polynomial.const(self.n, I_UNIT)
        if ch == "u":
            start = self.pos
            self.pos += 1
            index = self.nat("variable index")
            if not 1 <= index <= self.n:
                self.error(f"variable u{index} out of range for {self.n} variables", start)
            return Polynomial.variable(self.n, index - 1)
        if ch.isdigit():
            num = self.nat("number")
            self.skip_ws()
            if self.peek() == "/":
                slash = self.pos
                self.pos += 1
                self.skip_ws()
                den = self.nat("denominator")
                if den == 0:
                    self.error("zero denominator", slash)
                return Polynomial.const(self.n, Fraction(num, den))
            return Polynomial.const(self.n, num)
        self.error("expected a number, 'i', a variable, or '('")

    def nat(self, what: str) -> int:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start:
            self.error(f"expected {what}")
        return int(self.text[start : self.pos])


def parse_poly(text: str, num_vars: int) -> Polynomial:
    """Parse an expression in variables u1..u{num_vars} into canonical form."""
    return _ExprParser(text, num_vars).parse()


# -- polynomial maps and jets -------------------------------------------------


@dataclass
class Jet2:
    """Value, Jacobian, and symmetric Hessian tensor of a map at a point.

    hessian[i, j, k] is the second partial of component i with respect to
    variables j and k; the two index orders hold identical floats because the
    tensor is assembled from one formal second partial per unordered pair.
    """

    value: np.ndarray      # (m,)
    jacobian: np.ndarray   # (m, n)
    hessian: np.ndarray    # (m, n, n)


class PolyMap:
    """Ordered tuple of polynomials sharing a variable count: a map C^n -> C^m."""

    __slots__ = ("num_vars", "components", "_grad", "_hess")

    def __init__(self, components: Iterable[Polynomial]):
        comps = tuple(components)
        if not comps:
            raise ValueError("a map needs at least one component")
        n = comps[0].num_vars
        if any(p.num_vars != n for p in comps):
            raise ValueError("components must share the variable count")
        self.num_vars = n
        self.components = comps
        self._grad = None
        self._hess = None

    @property
    def num_components(self) -> int:
        return len(self.components)

    def _derivatives(self):
        """Cache first partials and one second partial per unordered pair."""
        if self._grad is None:
            n = self.num_vars
            self._grad = [[p.partial(k) for k in range(n)] for p in self.components]
            self._hess = [
                {
                    (j, k): row[j].partial(k)
                    for j in range(n)
                    for k in range(j, n)
                }
                for row in self._grad
            ]
        return self._grad, self._hess

    def value_at(self, u: Sequence[complex]) -> np.ndarray:
        return np.array([p.eval_complex(u) for p in self.components], dtype=complex)

    def jacobian_at(self, u: Sequence[complex]) -> np.ndarray:
        grad, _ = self._derivatives()
        return np.array(
            [[g.eval_complex(u) for g in row] for row in grad], dtype=complex
        )

    def jet2(self, u: Sequence[complex]) -> Jet2:
        if len(u) != self.num_vars:
            raise ValueError("point has wrong length")
        grad, hess = self._derivatives()
        m, n = self.num_components, self.num_vars
        value = self.value_at(u)
        jac = np.array([[g.eval_complex(u) for g in row] for row in grad], dtype=complex)
        H = np.empty((m, n, n), dtype=complex)
        for i in range(m):
            for j in range(n):
                for k in range(j, n):
                    v = hess[i][(j, k)].eval_complex(u)
                    H[i, j, k] = v
                    H[i, k, j] = v
        return Jet2(value=value, jacobian=jac, hessian=H)

    def value_exact(self, point: Sequence[ScalarLike]) -> list[GaussianRational]:
        return [p.eval_exact(point) for p in self.components]

    def jacobian_exact(self, point: Sequence[ScalarLike]) -> list[list[GaussianRational]]:
        grad, _ = self._derivatives()
        return [[g.eval_exact(point) for g in row] for row in grad]

    def hessian0_exact(self) -> list[list[list[GaussianRational]]]:
        """Exact second-derivative tensor at the origin, symmetric in (j, k)."""
        _, hess = self._derivatives()
        n = self.num_vars
        origin = [0] * n
        out = []
        for row in hess:
            mat = [[ZERO] * n for _ in range(n)]
            for j in range(n):
                for k in range(j, n):
                    v = row[(j, k)].eval_exact(origin)
                    mat[j][k] = v
                    mat[k][j] = v
            out.append(mat)
        return out

    def degree(self) -> int:
        return max(p.degree() for p in self.components)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PolyMap):
            return NotImplemented
        return self.components == other.components

    def __repr__(self) -> str:
        return f"PolyMap([{', '.join(p.to_expr() for p in self.components)}])"


def parse_map(exprs: Sequence[str], num_vars: int) -> PolyMap:
    return PolyMap([parse_poly(e, num_vars) for e in exprs])


def poly_matrix_det(entries: Sequence[Sequence[Polynomial]]) -> Polynomial:
    """Symbolic determinant by cofactor expansion; meant for small matrices
    (the exact fullness test caps the dimension at 4)."""
    n = len(entries)
    if any(len(row) != n for row in entries):
        raise ValueError("matrix must be square")
    if n == 0:
        raise ValueError("empty matrix")
    num_vars = entries[0][0].num_vars
    if n == 1:
        return entries[0][0]

    def minor(rows: list[int], cols: list[int]) -> Polynomial:
        if len(rows) == 1:
            return entries[rows[0]][cols[0]]
        total = Polynomial.zero(num_vars)
        r = rows[0]
        for pos, c in enumerate(cols):
            sub = minor(rows[1:], cols[:pos] + cols[pos + 1 :])
            term = entries[r][c] * sub
            total = total + term if pos % 2 == 0 else total - term
        return total

    return minor(list(range(n)), list(range(n)))


# -- random sampling ----------------------------------------------------------


def random_point(n: int, box: float, rng: random.Random) -> np.ndarray:
    """Complex vector with real and imaginary parts uniform in [-box, box]."""
    if box <= 0:
        raise ValueError("box radius must be positive")
    return np.array(
        [complex(rng.uniform(-box, box), rng.uniform(-box, box)) for _ in range(n)]
    )


def random_rational_point(n: int, bound: int, rng: random.Random) -> tuple[Fraction, ...]:
    """Exact rational vector with integer entries uniform in [-bound, bound]."""
    if bound <= 0:
        raise ValueError("bound must be positive")
    return tuple(Fraction(rng.randint(-bound, bound)) for _ in range(n))
