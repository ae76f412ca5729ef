"""Free Lie algebras in Lyndon coordinates.

A `LieElement` stores coordinates on the Lyndon-word basis, each word
standing for its standard bracketing (recursive standard factorization).
Conversion to and from `NCSeries` goes through the triangular expansion
of bracketed Lyndon words: the expansion of b_w is w plus lexicographically
larger words of the same length, so a primitive series projects back by a
single sweep in lex order, and any non-primitive input is detected at the
degree where the sweep gets stuck.

The universal Campbell-Baker-Hausdorff element lives here too, and
`eval_lie` realizes the unique Lie morphism out of a free Lie algebra into
any target that provides `bracket`, addition and scalar `scale`.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Protocol, Sequence

from .series import NCSeries, OneVarSeries, Word, frac_from_str, frac_to_str, word_key

ZERO = Fraction(0)
ONE = Fraction(1)

_lyndon_cache: dict[tuple[int, int], tuple[Word, ...]] = {}
_factorization_cache: dict[Word, tuple[Word, Word]] = {}
_expand_cache: dict[Word, dict[Word, Fraction]] = {}
_sc_cache: dict[tuple[Word, Word], dict[Word, Fraction]] = {}
_cbh_cache: dict[tuple[int, int], "LieElement"] = {}


def is_lyndon(w: Word) -> bool:
    """A nonempty word strictly smaller than all its proper rotations."""
    n = len(w)
    if n == 0:
        return False
    for i in range(1, n):
        if w[i:] + w[:i] <= w:
            return False
    return True


def lyndon_words(n: int, d: int) -> tuple[Word, ...]:
    """All Lyndon words of length d over letters 1..n, in lex order (Duval)."""
    if n < 1 or d < 1:
        raise ValueError("need n >= 1 and d >= 1")
    got = _lyndon_cache.get((n, d))
    if got is not None:
        return got
    result = []
    w = [1]
    while True:
        if len(w) == d:
            result.append(tuple(w))
        # Duval step: extend periodically to length d, strip n's, increment
        w = [w[i % len(w)] for i in range(d)]
        while w and w[-1] == n:
            w.pop()
        if not w:
            break
        w[-1] += 1
    out = tuple(result)
    _lyndon_cache[(n, d)] = out
    return out


def lyndon_words_upto(n: int, cap: int) -> list[Word]:
    out: list[Word] = []
    for d in range(1, cap + 1):
        out.extend(lyndon_words(n, d))
    return out


def witt_dimension(n: int, d: int) -> int:
    """Number of Lyndon words of length d over n letters (necklace count)."""
    return len(lyndon_words(n, d))


def standard_factorization(w: Word) -> tuple[Word, Word]:
    """Split a Lyndon word of length >= 2 as u·v with v the least proper suffix."""
    got = _factorization_cache.get(w)
    if got is not None:
        return got
    best = min(range(1, len(w)), key=lambda i: w[i:])
    out = (w[:best], w[best:])
    _factorization_cache[w] = out
    return out


def expand_word(w: Word) -> dict[Word, Fraction]:
    """Expansion of the standard bracketing of a Lyndon word in the free algebra."""
    got = _expand_cache.get(w)
    if got is not None:
        return got
    if len(w) == 1:
        out = {w: ONE}
    else:
        u, v = standard_factorization(w)
        eu, ev = expand_word(u), expand_word(v)
        out = {}
        for a, ca in eu.items():
            for b, cb in ev.items():
                for word, c in ((a + b, ca * cb), (b + a, -ca * cb)):
                    acc = out.get(word, ZERO) + c
                    if acc:
                        out[word] = acc
                    else:
                        del out[word]
    _expand_cache[w] = out
    return out


class NotPrimitiveError(ValueError):
    """Raised when a series fails to be a Lie element; carries the bad degree."""

    def __init__(self, degree: int, word: Word):
        self.degree = degree
        self.word = word
        super().__init__(f"not primitive at degree {degree} (stuck on word {word})")


def project_to_lyndon(terms: dict[Word, Fraction]) -> dict[Word, Fraction]:
    """Lyndon coordinates of a Lie element given by its word expansion.

    Sweeps each degree in lex order; the least word remaining in the
    residual must be Lyndon, otherwise the input was not primitive.
    """
    coords: dict[Word, Fraction] = {}
    by_deg: dict[int, dict[Word, Fraction]] = {}
    for w, c in terms.items():
        if not w:
            if c:
                raise NotPrimitiveError(0, ())
            continue
        by_deg.setdefault(len(w), {})[w] = c
    for d in sorted(by_deg):
        residual = by_deg[d]
        while residual:
            w = min(residual)
            c = residual[w]
            if not is_lyndon(w):
                raise NotPrimitiveError(d, w)
            coords[w] = c
            for word, k in expand_word(w).items():
                acc = residual.get(word, ZERO) - c * k
                if acc:
                    residual[word] = acc
                else:
                    del residual[word]
    return coords


def lie_structure(u: Word, v: Word) -> dict[Word, Fraction]:
    """Lyndon coordinates of [b_u, b_v]; cached, exact, letter-count agnostic."""
    if u == v:
        return {}
    key = (u, v)
    got = _sc_cache.get(key)
    if got is not None:
        return got
    if v < u:
        out = {w: -c for w, c in lie_structure(v, u).items()}
    else:
        eu, ev = expand_word(u), expand_word(v)
        comm: dict[Word, Fraction] = {}
        for a, ca in eu.items():
            for b, cb in ev.items():
                for word, c in ((a + b, ca * cb), (b + a, -ca * cb)):
                    acc = comm.get(word, ZERO) + c
                    if acc:
                        comm[word] = acc
                    else:
                        del comm[word]
        out = project_to_lyndon(comm)
    _sc_cache[key] = out
    return out


class LieElement:
    """Element of the free Lie algebra on letters 1..n in Lyndon coordinates."""

    __slots__ = ("letters", "cap", "coords")

    def __init__(self, letters: int, cap: int, coords=None):
        if letters < 1:
            raise ValueError("need at least one letter")
        clean: dict[Word, Fraction] = {}
        if coords:
            for w, c in (coords.items() if hasattr(coords, "items") else coords):
                w = tuple(w)
                if len(w) > cap:
                    continue
                if any(not (1 <= x <= letters) for x in w):
                    raise ValueError(f"letter out of range in {w}")
                if not is_lyndon(w):
                    raise ValueError(f"{w} is not a Lyndon word")
                c = Fraction(c)
                if c:
                    acc = clean.get(w, ZERO) + c
                    if acc:
                        clean[w] = acc
                    else:
                        del clean[w]
        object.__setattr__(self, "letters", letters)
        object.__setattr__(self, "cap", cap)
        object.__setattr__(self, "coords", clean)

    def __setattr__(self, *a):
        raise AttributeError("LieElement is immutable")

    @classmethod
    def zero(cls, letters: int, cap: int) -> "LieElement":
        return cls(letters, cap)

    @classmethod
    def generator(cls, letters: int, cap: int, k: int) -> "LieElement":
        return cls(letters, cap, {(k,): ONE})

    def zero_like(self) -> "LieElement":
        return LieElement(self.letters, self.cap)

    def _compat(self, other: "LieElement") -> int:
        if self.letters != other.letters:
            raise ValueError("letter counts differ")
        return min(self.cap, other.cap)

    def __add__(self, other: "LieElement") -> "LieElement":
        cap = self._compat(other)
        coords = dict(self.coords)
        for w, c in other.coords.items():
            acc = coords.get(w, ZERO) + c
            if acc:
                coords[w] = acc
            else:
                del coords[w]
        return LieElement(self.letters, cap, coords)

    def __neg__(self):
        return LieElement(self.letters, self.cap, {w: -c for w, c in self.coords.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, q) -> "LieElement":
        q = Fraction(q)
        if not q:
            return self.zero_like()
        return LieElement(self.letters, self.cap, {w: q * c for w, c in self.coords.items()})

    def __rmul__(self, q):
        if isinstance(q, (int, Fraction)):
            return self.scale(q)
        return NotImplemented

    def bracket(self, other: "LieElement") -> "LieElement":
        cap = self._compat(other)
        out: dict[Word, Fraction] = {}
        for u, cu in self.coords.items():
            du = len(u)
            for v, cv in other.coords.items():
                if du + len(v) > cap:
                    continue
                q = cu * cv
                for w, k in lie_structure(u, v).items():
                    acc = out.get(w, ZERO) + q * k
                    if acc:
                        out[w] = acc
                    else:
                        del out[w]
        return LieElement(self.letters, cap, out)

    def __eq__(self, other):
        return (
            isinstance(other, LieElement)
            and self.letters == other.letters
            and self.cap == other.cap
            and self.coords == other.coords
        )

    def __hash__(self):
        return hash((self.letters, self.cap, frozenset(self.coords.items())))

    def is_zero(self) -> bool:
        return not self.coords

    def valuation(self) -> int:
        if not self.coords:
            return self.cap + 1
        return min(len(w) for w in self.coords)

    def max_degree(self) -> int:
        return max((len(w) for w in self.coords), default=0)

    def degree_part(self, d: int) -> "LieElement":
        return LieElement(self.letters, self.cap, {w: c for w, c in self.coords.items() if len(w) == d})

    def with_cap(self, cap: int) -> "LieElement":
        return LieElement(self.letters, cap, self.coords)

    def with_letters(self, letters: int) -> "LieElement":
        """Reinterpret in a larger alphabet (inclusion of free Lie algebras)."""
        if letters < self.letters:
            for w in self.coords:
                if any(x > letters for x in w):
                    raise ValueError("element uses letters beyond the new alphabet")
        return LieElement(letters, self.cap, self.coords)

    def linear_coeff(self, k: int) -> Fraction:
        return self.coords.get((k,), ZERO)

    def grading_derivation(self) -> "LieElement":
        """Image under the derivation sending every generator to itself."""
        return LieElement(self.letters, self.cap, {w: len(w) * c for w, c in self.coords.items()})

    def to_ncseries(self) -> NCSeries:
        terms: dict[Word, Fraction] = {}
        for w, c in self.coords.items():
            for word, k in expand_word(w).items():
                acc = terms.get(word, ZERO) + c * k
                if acc:
                    terms[word] = acc
                else:
                    del terms[word]
        return NCSeries(self.letters, self.cap, terms)

    @classmethod
    def from_ncseries(cls, z: NCSeries) -> "LieElement":
        """Project a primitive series; raises NotPrimitiveError otherwise."""
        return cls(z.letters, z.cap, project_to_lyndon(dict(z.terms)))

    def sorted_items(self) -> list[tuple[Word, Fraction]]:
        return sorted(self.coords.items(), key=lambda it: word_key(it[0]))

    def __repr__(self):
        if not self.coords:
            return "0"
        bits = [f"{c}*L{''.join(map(str, w))}" for w, c in self.sorted_items()[:12]]
        tail = " + ..." if len(self.coords) > 12 else ""
        return " + ".join(bits) + tail

    def to_payload(self) -> dict:
        return {
            "letters": self.letters,
            "cap": self.cap,
            "basis": "lyndon",
            "terms": [[list(w), frac_to_str(c)] for w, c in self.sorted_items()],
        }

    @classmethod
    def from_payload(cls, payload: dict) -> "LieElement":
        if payload.get("basis", "lyndon") != "lyndon":
            raise ValueError("unknown basis")
        return cls(
            payload["letters"],
            payload["cap"],
            {tuple(w): frac_from_str(c) for w, c in payload["terms"]},
        )


class GradedLieOracle(Protocol):
    """What eval_lie needs from a target Lie algebra element.

    Any positively graded Lie algebra value works: elements of free Lie
    algebras, of the infinitesimal-braid algebras, and tangential
    derivations all implement this protocol.  Bilinearity, antisymmetry
    and the Jacobi identity are spot-checked in the test suite rather
    than assumed.
    """

    def bracket(self, other): ...

    def __add__(self, other): ...

    def scale(self, q): ...

    def zero_like(self): ...


def oracle_spot_check(elements: Sequence, rng) -> None:
    """Assert antisymmetry and Jacobi on random triples from `elements`."""
    for _ in range(8):
        a, b, c = (rng.choice(elements) for _ in range(3))
        ab = a.bracket(b)
        if ab + b.bracket(a) != ab.zero_like():
            raise AssertionError("bracket is not antisymmetric")
        jac = a.bracket(b.bracket(c)) + b.bracket(c.bracket(a)) + c.bracket(a.bracket(b))
        if jac != jac.zero_like():
            raise AssertionError("Jacobi identity fails")


def eval_lie(expr: LieElement, targets: Sequence, zero=None):
    """Image of `expr` under the Lie morphism sending letter k to targets[k-1].

    Targets must be positively graded (valuation >= 1) so that truncation
    degrees are respected; targets exposing a `valuation` method are
    checked.
    """
    if len(targets) != expr.letters:
        raise ValueError(f"expected {expr.letters} targets, got {len(targets)}")
    for t in targets:
        val = getattr(t, "valuation", None)
        if val is not None and val() < 1:
            raise ValueError("eval_lie target has valuation 0")
    if zero is None:
        zero = targets[0].zero_like()
    memo: dict[Word, object] = {}

    def ev(w: Word):
        got = memo.get(w)
        if got is None:
            if len(w) == 1:
                got = targets[w[0] - 1]
            else:
                u, v = standard_factorization(w)
                got = ev(u).bracket(ev(v))
            memo[w] = got
        return got

    acc = zero
    for w, c in expr.sorted_items():
        acc = acc + ev(w).scale(c)
    return acc


def universal_cbh(p: int, cap: int) -> LieElement:
    """log(e^{x_1} ... e^{x_p}) as a Lie element in p letters, memoized."""
    if p < 1:
        raise ValueError("arity must be >= 1")
    got = _cbh_cache.get((p, cap))
    if got is None:
        prod = NCSeries.one(p, cap)
        for k in range(1, p + 1):
            prod = prod * NCSeries.letter(p, cap, k).exp()
        got = LieElement.from_ncseries(prod.log())
        _cbh_cache[(p, cap)] = got
    return got


def group_mul(g, h):
    """Logarithm of exp(g)·exp(h) computed in the algebra of g and h."""
    capg = getattr(g, "cap")
    caph = getattr(h, "cap")
    cap = min(capg, caph)
    return eval_lie(universal_cbh(2, cap), (g, h))


def group_mul_many(logs: Sequence):
    """BCH-fold a sequence of logarithms, left to right."""
    acc = logs[0]
    for z in logs[1:]:
        acc = group_mul(acc, z)
    return acc


def conj_exp_ad(a: LieElement, z: LieElement) -> LieElement:
    """e^{ad a}(z): conjugation of z by exp(a) inside the Lie algebra."""
    cap = min(a.cap, z.cap)
    acc = z.with_cap(cap)
    term = z.with_cap(cap)
    k = 0
    va = max(a.valuation(), 1)
    while k * va <= cap:
        k += 1
        term = a.with_cap(cap).bracket(term).scale(Fraction(1, k))
        if term.is_zero():
            break
        acc = acc + term
    return acc


def cbh_series_coefficient(w: Word, cap: int) -> Fraction:
    """Lyndon coefficient of the two-letter CBH element (for quick probes)."""
    return universal_cbh(2, cap).coords.get(w, ZERO)
