"""Exact sparse-polynomial engine for the general Ahern-Rudin map class.

The class consists of maps g(z, w) = (z, w, P(z, zbar, w, wbar)) where

    P = (zbar d/dw - wbar d/dz) ( sum_j Q_j / (p_j (q_j + 1)) ),

each Q_j a bihomogeneous harmonic polynomial of bidegree (p_j, q_j) with
p_j >= 1 (degree p_j in z, w and q_j in zbar, wbar), and Q = sum Q_j
nonvanishing on S^3.  Everything here is computed over exact Gaussian
rationals: harmonicity, the operator, bidegree decompositions, and the
divisibility obstruction are exact statements, so floating point only
appears at evaluation boundaries.

Polynomials are sparse maps from exponent quadruples (a, b, c, d) --
degrees in z, zbar, w, wbar -- to Gaussian-rational coefficients.  The
polarization substitution z -> w1, zbar -> w2, w -> w3, wbar -> w4 turns
such a polynomial into its holomorphic extension on C^4 (the exponent
data is untouched; only the variable interpretation changes).

The classical embedding map arises from the generator returned by
:func:`f_generator`: applying the operator gives a harmonic polynomial
whose zbar*wbar term, multiplied by |z|^2 + |w|^2 (a no-op on S^3, made
explicit by :func:`pad_term_with_norm`), reproduces the third component
of the map exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

Exponents = tuple[int, int, int, int]

Z_VARS = ("z", "zb", "w", "wb")
W_VARS = ("w1", "w2", "w3", "w4")


class PolyParseError(ValueError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} at offset {pos}")
        self.pos = pos


class QQi:
    """Gaussian rational a + b i with exact Fraction components."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @classmethod
    def _coerce(cls, other):
        if isinstance(other, QQi):
            return other
        if isinstance(other, (int, Fraction)):
            return cls(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return QQi(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return QQi(-self.re, -self.im)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return QQi(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return QQi(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        n = other.re * other.re + other.im * other.im
        if n == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        return QQi(
            (self.re * other.re + self.im * other.im) / n,
            (self.im * other.re - self.re * other.im) / n,
        )

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers not supported")
        out = QQi(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def conjugate(self):
        return QQi(self.re, -self.im)

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return self.re != 0 or self.im != 0

    def to_complex(self) -> complex:
        return complex(self.re) + 1j * complex(self.im)

    def __repr__(self):
        return f"QQi({self.re!r}, {self.im!r})"


QQI_ZERO = QQi(0)
QQI_ONE = QQi(1)
QQI_I = QQi(0, 1)


class Poly4:
    """Sparse polynomial in four variables over Gaussian rationals.

    Canonical form: zero coefficients are never stored.  Instances are
    treated as immutable values; all operations return new objects.
    """

    __slots__ = ("terms", "vars")

    def __init__(self, terms: dict[Exponents, QQi] | None = None, vars: tuple = Z_VARS):
        self.terms = {e: c for e, c in (terms or {}).items() if c}
        self.vars = tuple(vars)

    # -- constructors ------------------------------------------------------
    @classmethod
    def zero(cls, vars=Z_VARS):
        return cls({}, vars)

    @classmethod
    def constant(cls, c, vars=Z_VARS):
        c = c if isinstance(c, QQi) else QQi(c)
        return cls({(0, 0, 0, 0): c}, vars)

    @classmethod
    def monomial(cls, exponents: Exponents, coeff=QQI_ONE, vars=Z_VARS):
        coeff = coeff if isinstance(coeff, QQi) else QQi(coeff)
        return cls({tuple(exponents): coeff}, vars)

    @classmethod
    def variable(cls, index: int, vars=Z_VARS):
        e = [0, 0, 0, 0]
        e[index] = 1
        return cls.monomial(tuple(e), vars=vars)

    # -- ring operations ---------------------------------------------------
    def _check_compat(self, other: "Poly4"):
        if self.vars != other.vars:
            raise ValueError(f"variable mismatch: {self.vars} vs {other.vars}")

    def __add__(self, other):
        if not isinstance(other, Poly4):
            other = Poly4.constant(other, self.vars)
        self._check_compat(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, QQI_ZERO) + c
        return Poly4(out, self.vars)

    __radd__ = __add__

    def __neg__(self):
        return Poly4({e: -c for e, c in self.terms.items()}, self.vars)

    def __sub__(self, other):
        if not isinstance(other, Poly4):
            other = Poly4.constant(other, self.vars)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Poly4):
            return self.scale(other)
        self._check_compat(other)
        out: dict[Exponents, QQi] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = (e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2], e1[3] + e2[3])
                out[e] = out.get(e, QQI_ZERO) + c1 * c2
        return Poly4(out, self.vars)

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, c) -> "Poly4":
        c = c if isinstance(c, QQi) else QQi(c)
        return Poly4({e: co * c for e, co in self.terms.items()}, self.vars)

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers not supported")
        out = Poly4.constant(1, self.vars)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        return (
            isinstance(other, Poly4)
            and self.vars == other.vars
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.vars, frozenset(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    # -- calculus ----------------------------------------------------------
    def diff(self, index: int) -> "Poly4":
        out = {}
        for e, c in self.terms.items():
            if e[index] == 0:
                continue
            ne = list(e)
            ne[index] -= 1
            out[tuple(ne)] = c * e[index]
        return Poly4(out, self.vars)

    def bidegree_parts(self) -> dict[tuple[int, int], "Poly4"]:
        """Decompose into bihomogeneous parts, keyed by (p, q) = (a+c, b+d)."""
        parts: dict[tuple[int, int], dict[Exponents, QQi]] = {}
        for e, c in self.terms.items():
            key = (e[0] + e[2], e[1] + e[3])
            parts.setdefault(key, {})[e] = c
        return {k: Poly4(v, self.vars) for k, v in sorted(parts.items())}

    # -- evaluation ---------------------------------------------------------
    def eval_exact(self, values: tuple[QQi, QQi, QQi, QQi]) -> QQi:
        total = QQI_ZERO
        for e, c in self.terms.items():
            term = c
            for v, k in zip(values, e):
                if k:
                    term = term * v**k
            total = total + term
        return total

    def eval_complex(self, values) -> complex:
        v = [complex(x) for x in values]
        total = 0j
        for e, c in self.terms.items():
            total += c.to_complex() * v[0] ** e[0] * v[1] ** e[1] * v[2] ** e[2] * v[3] ** e[3]
        return total

    def eval_batch(self, points: np.ndarray) -> np.ndarray:
        """Evaluate on an (m, 4) complex array; returns (m,) complex."""
        points = np.asarray(points, dtype=complex)
        total = np.zeros(points.shape[0], dtype=complex)
        for e, c in self.terms.items():
            term = np.full(points.shape[0], c.to_complex())
            for k in range(4):
                if e[k]:
                    term = term * points[:, k] ** e[k]
            total += term
        return total

    # -- serialization -------------------------------------------------------
    def to_json(self) -> list:
        return [
            [list(e), [c.re.numerator, c.re.denominator, c.im.numerator, c.im.denominator]]
            for e, c in sorted(self.terms.items())
        ]

    @classmethod
    def from_json(cls, data, vars=Z_VARS) -> "Poly4":
        terms = {}
        for e, (rn, rd, imn, imd) in data:
            terms[tuple(int(v) for v in e)] = QQi(Fraction(rn, rd), Fraction(imn, imd))
        return cls(terms, vars)

    # -- printing -------------------------------------------------------------
    def _format_coeff(self, c: QQi) -> tuple[str, str]:
        """Return (sign, body) for a coefficient; mixed ones keep their sign."""
        if c.im == 0:
            sign = "-" if c.re < 0 else "+"
            return sign, str(abs(c.re))
        if c.re == 0:
            sign = "-" if c.im < 0 else "+"
            mag = abs(c.im)
            return sign, "i" if mag == 1 else f"{mag}i"
        re, im = c.re, c.im
        imag = f"{'+' if im > 0 else '-'}{abs(im)}i"
        return "+", f"({re}{imag})"

    def __str__(self):
        if not self.terms:
            return "0"
        chunks = []
        for e, c in sorted(self.terms.items()):
            sign, body = self._format_coeff(c)
            factors = []
            for name, k in zip(self.vars, e):
                if k == 1:
                    factors.append(name)
                elif k > 1:
                    factors.append(f"{name}^{k}")
            if factors and body == "1":
                body = ""
            parts = ([body] if body else []) + factors
            chunks.append((sign, "*".join(parts) if parts else "1"))
        first_sign, first_body = chunks[0]
        out = ("-" if first_sign == "-" else "") + first_body
        for sign, body in chunks[1:]:
            out += f" {sign} {body}"
        return out

    __repr__ = __str__


# ---------------------------------------------------------------------------
# parser for the z/zb/w/wb grammar
# ---------------------------------------------------------------------------

_VAR_INDEX = {name: k for k, name in enumerate(Z_VARS)}


class _Tokenizer:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def _skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self._skip_ws()
        if self.pos >= len(self.text):
            return ("end", None, self.pos)
        ch = self.text[self.pos]
        if ch in "+-*^()":
            return (ch, ch, self.pos)
        if ch.isdigit():
            j = self.pos
            while j < len(self.text) and self.text[j].isdigit():
                j += 1
            return ("number", self.text[self.pos : j], self.pos)
        if ch == "/":
            return ("/", ch, self.pos)
        if ch.isalpha():
            j = self.pos
            while j < len(self.text) and self.text[j].isalpha():
                j += 1
            return ("name", self.text[self.pos : j], self.pos)
        raise PolyParseError(f"unexpected character {ch!r}", self.pos)

    def next(self):
        kind, value, pos = self.peek()
        if kind == "end":
            return kind, value, pos
        self.pos = pos + (len(value) if value else 0)
        return kind, value, pos


def parse_poly(text: str) -> Poly4:
    """Parse the polynomial grammar over z, zb, w, wb.

    Terms are joined by + and -, factors by * with optional ^k powers,
    and parenthesized subexpressions are allowed.  Coefficients are exact
    rationals; a numeric literal directly followed by ``i`` is imaginary,
    so complex coefficients read like (3/2+1/4i).  Raises
    :class:`PolyParseError` with the offending offset on malformed input.
    """
    tok = _Tokenizer(text)

    def parse_rational(first: str, pos: int) -> Fraction:
        num = int(first)
        kind, _, _ = tok.peek()
        if kind == "/":
            tok.next()
            kind, value, p2 = tok.next()
            if kind != "number":
                raise PolyParseError("expected denominator digits", p2)
            den = int(value)
            if den == 0:
                raise PolyParseError("zero denominator", p2)
            return Fraction(num, den)
        return Fraction(num)

    def parse_atom() -> Poly4:
        kind, value, pos = tok.next()
        if kind == "number":
            frac = parse_rational(value, pos)
            kind2, value2, _ = tok.peek()
            if kind2 == "name" and value2 == "i":
                tok.next()
                return Poly4.constant(QQi(0, frac))
            return Poly4.constant(QQi(frac))
        if kind == "name":
            if value == "i":
                return Poly4.constant(QQI_I)
            if value in _VAR_INDEX:
                return Poly4.variable(_VAR_INDEX[value])
            raise PolyParseError(f"unknown symbol {value!r}", pos)
        if kind == "(":
            inner = parse_expr()
            kind2, _, pos2 = tok.next()
            if kind2 != ")":
                raise PolyParseError("expected ')'", pos2)
            return inner
        raise PolyParseError("expected a term", pos)

    def parse_factor() -> Poly4:
        atom = parse_atom()
        kind, _, _ = tok.peek()
        if kind == "^":
            tok.next()
            kind2, value2, pos2 = tok.next()
            if kind2 != "number":
                raise PolyParseError("expected integer exponent", pos2)
            atom = atom ** int(value2)
        return atom

    def parse_term() -> Poly4:
        result = parse_factor()
        while True:
            kind, _, _ = tok.peek()
            if kind == "*":
                tok.next()
                result = result * parse_factor()
            else:
                return result

    def parse_expr() -> Poly4:
        kind, _, _ = tok.peek()
        sign = 1
        if kind in "+-":
            tok.next()
            sign = -1 if kind == "-" else 1
        result = parse_term().scale(sign)
        while True:
            kind, _, pos = tok.peek()
            if kind in "+-":
                tok.next()
                term = parse_term()
                result = result + (term if kind == "+" else -term)
            else:
                return result

    result = parse_expr()
    kind, _, pos = tok.peek()
    if kind != "end":
        raise PolyParseError("trailing input", pos)
    return result


# ---------------------------------------------------------------------------
# the calculus of the map class
# ---------------------------------------------------------------------------


def laplacian(p: Poly4) -> Poly4:
    """Euclidean Laplacian of R^4 in Wirtinger form: 4 (dz dzb + dw dwb)."""
    out = p.diff(0).diff(1) + p.diff(2).diff(3)
    return out.scale(4)


def is_harmonic(p: Poly4) -> bool:
    return laplacian(p).is_zero()


def ar_operator(q: Poly4) -> Poly4:
    """Weighted derivation producing the map's third component.

    Decomposes q into bihomogeneous parts Q_j of bidegree (p_j, q_j),
    scales each by 1/(p_j (q_j + 1)), and applies zbar d/dw - wbar d/dz.
    Parts with p_j = 0 are rejected (the weight is undefined there).
    """
    zb = Poly4.variable(1, q.vars)
    wb = Poly4.variable(3, q.vars)
    total = Poly4.zero(q.vars)
    for (pj, qj), part in q.bidegree_parts().items():
        if pj == 0:
            raise ValueError(
                f"bidegree ({pj}, {qj}) part {part} has degree 0 in (z, w); "
                "the weight 1/(p_j (q_j + 1)) is undefined"
            )
        weight = QQi(Fraction(1, pj * (qj + 1)))
        total = total + (zb * part.diff(2) - wb * part.diff(0)).scale(weight)
    return total


def polarize(p: Poly4) -> Poly4:
    """Holomorphic extension to C^4: substitute z, zb, w, wb -> w1..w4.

    The sparse data is untouched; on the totally real slice w2 = conj w1,
    w4 = conj w3 the extension restricts back to p.
    """
    return Poly4(dict(p.terms), W_VARS)


def pad_term_with_norm(p: Poly4, exponents: Exponents) -> Poly4:
    """Multiply one monomial of p by |z|^2 + |w|^2 (a no-op on S^3).

    The explicit substitution step that turns a harmonic representative
    into a sphere-equal polynomial of the wanted bidegree.
    """
    exponents = tuple(exponents)
    if exponents not in p.terms:
        raise KeyError(f"no monomial with exponents {exponents}")
    c = p.terms[exponents]
    rest = dict(p.terms)
    del rest[exponents]
    norm = Poly4({(1, 1, 0, 0): QQI_ONE, (0, 0, 1, 1): QQI_ONE}, p.vars)
    return Poly4(rest, p.vars) + Poly4.monomial(exponents, c, p.vars) * norm


@dataclass(frozen=True)
class GMap:
    """Holomorphic extension (w1, w3, P_w) of a map in the class.

    ``generator`` is the defining polynomial q, ``third`` the polynomial
    P in z-variables after any padding, ``third_w`` its polarization.
    """

    generator: Poly4
    third: Poly4
    third_w: Poly4

    def __call__(self, W) -> np.ndarray:
        W = np.asarray(W, dtype=complex)
        return np.array([W[0], W[2], self.third_w.eval_complex(W)])

    def eval_batch(self, W: np.ndarray) -> np.ndarray:
        W = np.asarray(W, dtype=complex)
        out = np.empty((W.shape[0], 3), dtype=complex)
        out[:, 0] = W[:, 0]
        out[:, 1] = W[:, 2]
        out[:, 2] = self.third_w.eval_batch(W)
        return out


def build_G(q: Poly4, pad: Exponents | None = None) -> GMap:
    """Assemble the holomorphic map for generator q.

    ``pad`` optionally names one monomial of the operator output to be
    multiplied by |z|^2 + |w|^2 before polarizing (see
    :func:`pad_term_with_norm`).
    """
    P = ar_operator(q)
    if pad is not None:
        P = pad_term_with_norm(P, pad)
    return GMap(generator=q, third=P, third_w=polarize(P))


def f_generator() -> tuple[Poly4, Exponents]:
    """Generator data reproducing the classical embedding map exactly.

    Returns (q, pad) with q = (1+i)/2 (|w|^2 - |z|^2)
    + (1-i)/2 (|z|^4 - 4|z|^2|w|^2 + |w|^4); both bihomogeneous parts are
    harmonic, and build_G(q, pad) equals the holomorphic continuation of
    the classical map, with pad pointing at the zbar*wbar term.
    """
    half = Fraction(1, 2)
    deg1 = Poly4(
        {(0, 0, 1, 1): QQi(half, half), (1, 1, 0, 0): -QQi(half, half)}
    )
    deg2 = Poly4(
        {
            (2, 2, 0, 0): QQi(half, -half),
            (1, 1, 1, 1): QQi(-2, 2),
            (0, 0, 2, 2): QQi(half, -half),
        }
    )
    return deg1 + deg2, (0, 1, 0, 1)


def divisibility_check(q: Poly4) -> bool:
    """Whether the operator output is divisible by zbar * wbar.

    Requires q to be a polynomial in |z|^2 and |w|^2 (every monomial with
    a = b and c = d); such generators always produce maps that identify
    the w4 = 0 and w2 = 0 triple-fiber points, obstructing embeddings of
    M_t^3 for t >= sqrt(2).
    """
    for e in q.terms:
        if e[0] != e[1] or e[2] != e[3]:
            raise ValueError(
                f"generator is not a polynomial in |z|^2, |w|^2: monomial {e}"
            )
    P = ar_operator(q)
    return all(e[1] >= 1 and e[3] >= 1 for e in P.terms)


def q_nonvanishing_check(
    q: Poly4, samples: int, seed: int, refine: bool = True
) -> tuple[float, tuple[complex, complex]]:
    """Heuristic minimum of |q| over S^3 (Monte-Carlo plus local descent).

    A positive result is evidence, not proof; a zero crossing is reported
    with its witness.  Deterministic in the seed.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    rng = np.random.default_rng(np.random.SeedSequence((int(seed), 7)))
    v = rng.standard_normal((samples, 4))
    v /= np.linalg.norm(v, axis=1, keepdims=True)
    z = v[:, 0] + 1j * v[:, 1]
    w = v[:, 2] + 1j * v[:, 3]
    pts = np.stack([z, np.conj(z), w, np.conj(w)], axis=1)
    vals = np.abs(q.eval_batch(pts))
    k = int(np.argmin(vals))
    best_v, best = v[k], float(vals[k])

    if refine:
        from scipy.optimize import minimize

        def objective(u):
            u = u / np.linalg.norm(u)
            zz = u[0] + 1j * u[1]
            ww = u[2] + 1j * u[3]
            return abs(q.eval_complex((zz, zz.conjugate(), ww, ww.conjugate())))

        res = minimize(objective, best_v, method="Nelder-Mead",
                       options={"xatol": 1e-12, "fatol": 1e-14, "maxiter": 2000})
        if res.fun < best:
            best = float(res.fun)
            best_v = res.x / np.linalg.norm(res.x)

    zw = (complex(best_v[0], best_v[1]), complex(best_v[2], best_v[3]))
    return best, zw
