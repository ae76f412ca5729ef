"""Degree-truncated noncommutative power series over the rationals.

`NCSeries` is the enveloping-algebra workhorse: a sparse mapping from
words over the letters 1..n to nonzero `Fraction` coefficients, truncated
at a cap that is part of the value.  Binary operations take the minimum
cap of their operands, so precision can only be lost explicitly.

The module also carries the two small commutative companions used by the
Gamma-function computations: `CommSeries` (the abelianization target) and
`OneVarSeries` (Duflo series, log Gamma, Bernoulli generating functions).
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations

Word = tuple[int, ...]

ZERO = Fraction(0)
ONE = Fraction(1)


def frac_to_str(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def frac_from_str(s: str) -> Fraction:
    return Fraction(s)


def word_key(w: Word) -> tuple[int, Word]:
    """Graded-lexicographic sort key."""
    return (len(w), w)


def _factorials(n: int) -> list[Fraction]:
    out = [ONE]
    for k in range(1, n + 1):
        out.append(out[-1] * k)
    return out


class NCSeries:
    """Truncated noncommutative series in letters 1..n.

    Values are immutable; all operations return fresh objects.  Stored
    words never exceed the cap and stored coefficients are never zero.
    """

    __slots__ = ("letters", "cap", "terms")

    def __init__(self, letters: int, cap: int, terms=None):
        if letters < 1:
            raise ValueError("need at least one letter")
        if cap < 0:
            raise ValueError("cap must be nonnegative")
        clean: dict[Word, Fraction] = {}
        if terms:
            for w, c in (terms.items() if hasattr(terms, "items") else terms):
                w = tuple(w)
                if len(w) > cap:
                    continue
                if any(not (1 <= x <= letters) for x in w):
                    raise ValueError(f"letter out of range in word {w}")
                c = Fraction(c)
                if c:
                    acc = clean.get(w, ZERO) + c
                    if acc:
                        clean[w] = acc
                    else:
                        clean.pop(w, None)
        object.__setattr__(self, "letters", letters)
        object.__setattr__(self, "cap", cap)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, *a):
        raise AttributeError("NCSeries is immutable")

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, letters: int, cap: int) -> "NCSeries":
        return cls(letters, cap)

    @classmethod
    def one(cls, letters: int, cap: int) -> "NCSeries":
        return cls(letters, cap, {(): ONE})

    @classmethod
    def letter(cls, letters: int, cap: int, k: int) -> "NCSeries":
        if not 1 <= k <= letters:
            raise ValueError(f"letter {k} out of range")
        return cls(letters, cap, {(k,): ONE})

    def zero_like(self) -> "NCSeries":
        return NCSeries(self.letters, self.cap)

    # -- ring structure -----------------------------------------------

    def _check_compatible(self, other: "NCSeries") -> int:
        if self.letters != other.letters:
            raise ValueError(f"letter counts differ: {self.letters} vs {other.letters}")
        return min(self.cap, other.cap)

    def __add__(self, other: "NCSeries") -> "NCSeries":
        cap = self._check_compatible(other)
        terms = dict(self.terms)
        for w, c in other.terms.items():
            acc = terms.get(w, ZERO) + c
            if acc:
                terms[w] = acc
            else:
                terms.pop(w, None)
        return NCSeries(self.letters, cap, terms)

    def __neg__(self) -> "NCSeries":
        return NCSeries(self.letters, self.cap, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other: "NCSeries") -> "NCSeries":
        return self + (-other)

    def scale(self, q) -> "NCSeries":
        q = Fraction(q)
        if not q:
            return self.zero_like()
        return NCSeries(self.letters, self.cap, {w: q * c for w, c in self.terms.items()})

    def __rmul__(self, q):
        if isinstance(q, (int, Fraction)):
            return self.scale(q)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        cap = self._check_compatible(other)
        out: dict[Word, Fraction] = {}
        for w1, c1 in self.terms.items():
            if len(w1) > cap:
                continue
            room = cap - len(w1)
            for w2, c2 in other.terms.items():
                if len(w2) > room:
                    continue
                w = w1 + w2
                acc = out.get(w, ZERO) + c1 * c2
                if acc:
                    out[w] = acc
                else:
                    del out[w]
        return NCSeries(self.letters, cap, out)

    def bracket(self, other: "NCSeries") -> "NCSeries":
        return self * other - other * self

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, NCSeries)
            and self.letters == other.letters
            and self.cap == other.cap
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.letters, self.cap, frozenset(self.terms.items())))

    # -- views ----------------------------------------------------------

    def coeff(self, w: Word) -> Fraction:
        return self.terms.get(tuple(w), ZERO)

    def constant_term(self) -> Fraction:
        return self.terms.get((), ZERO)

    def is_zero(self) -> bool:
        return not self.terms

    def valuation(self) -> int:
        """Smallest degree with a nonzero term; cap + 1 when zero."""
        if not self.terms:
            return self.cap + 1
        return min(len(w) for w in self.terms)

    def degree_part(self, d: int) -> "NCSeries":
        return NCSeries(self.letters, self.cap, {w: c for w, c in self.terms.items() if len(w) == d})

    def max_degree_part(self) -> int:
        return max((len(w) for w in self.terms), default=0)

    def with_cap(self, cap: int) -> "NCSeries":
        return NCSeries(self.letters, cap, self.terms)

    def sorted_items(self) -> list[tuple[Word, Fraction]]:
        return sorted(self.terms.items(), key=lambda it: word_key(it[0]))

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        bits = []
        for w, c in self.sorted_items()[:12]:
            mon = "1" if not w else "".join(f"x{i}" for i in w)
            bits.append(f"{c}*{mon}")
        tail = " + ..." if len(self.terms) > 12 else ""
        return " + ".join(bits) + tail

    # -- exp / log -------------------------------------------------------

    def exp(self) -> "NCSeries":
        """Sum of z^k / k! for z with zero constant term."""
        if self.constant_term():
            raise ValueError("exp needs zero constant term")
        fact = _factorials(self.cap)
        acc = NCSeries.one(self.letters, self.cap)
        power = NCSeries.one(self.letters, self.cap)
        v = max(self.valuation(), 1)
        for k in range(1, self.cap // v + 1):
            power = power * self
            if power.is_zero():
                break
            acc = acc + power.scale(ONE / fact[k])
        return acc

    def log(self) -> "NCSeries":
        """Logarithm of a series with constant term 1."""
        if self.constant_term() != 1:
            raise ValueError("log needs constant term 1")
        u = self - NCSeries.one(self.letters, self.cap)
        acc = NCSeries.zero(self.letters, self.cap)
        power = NCSeries.one(self.letters, self.cap)
        v = max(u.valuation(), 1)
        sign = ONE
        for k in range(1, self.cap // v + 1):
            power = power * u
            if power.is_zero():
                break
            acc = acc + power.scale(sign / k)
            sign = -sign
        return acc

    # -- morphisms --------------------------------------------------------

    def substitute(self, images: list["NCSeries"]) -> "NCSeries":
        """Algebra-morphism image under letter k -> images[k-1].

        Images must have zero constant term so the substitution respects
        the truncation grading.
        """
        if len(images) != self.letters:
            raise ValueError(f"expected {self.letters} images, got {len(images)}")
        for z in images:
            if z.constant_term():
                raise ValueError("substitution image has a constant term")
        cap = min([self.cap] + [z.cap for z in images])
        tgt_letters = images[0].letters
        out = NCSeries.zero(tgt_letters, cap)
        word_cache: dict[Word, NCSeries] = {(): NCSeries.one(tgt_letters, cap)}

        def image_of(w: Word) -> NCSeries:
            got = word_cache.get(w)
            if got is None:
                got = image_of(w[:-1]) * images[w[-1] - 1]
                word_cache[w] = got
            return got

        for w, c in sorted(self.terms.items(), key=lambda it: word_key(it[0])):
            out = out + image_of(w).scale(c)
        return out

    def abelianize(self) -> "CommSeries":
        out: dict[Word, Fraction] = {}
        for w, c in self.terms.items():
            m = [0] * self.letters
            for x in w:
                m[x - 1] += 1
            key = tuple(m)
            acc = out.get(key, ZERO) + c
            if acc:
                out[key] = acc
            else:
                del out[key]
        return CommSeries(self.letters, self.cap, out)

    # -- Hopf structure ----------------------------------------------------

    def coproduct(self) -> dict[tuple[Word, Word], Fraction]:
        """Coproduct with every letter primitive, as a sparse tensor."""
        out: dict[tuple[Word, Word], Fraction] = {}
        for w, c in self.terms.items():
            n = len(w)
            for r in range(n + 1):
                for pos in combinations(range(n), r):
                    left = tuple(w[i] for i in pos)
                    posset = set(pos)
                    right = tuple(w[i] for i in range(n) if i not in posset)
                    key = (left, right)
                    acc = out.get(key, ZERO) + c
                    if acc:
                        out[key] = acc
                    else:
                        del out[key]
        return out

    def is_grouplike(self) -> bool:
        """True iff the coproduct of g equals g tensor g through the cap."""
        if self.constant_term() != 1:
            return False
        expected: dict[tuple[Word, Word], Fraction] = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in self.terms.items():
                if len(w1) + len(w2) > self.cap:
                    continue
                key = (w1, w2)
                acc = expected.get(key, ZERO) + c1 * c2
                if acc:
                    expected[key] = acc
                else:
                    del expected[key]
        actual = {k: v for k, v in self.coproduct().items() if len(k[0]) + len(k[1]) <= self.cap}
        return actual == expected

    def is_primitive(self) -> bool:
        if self.constant_term():
            return False
        cop = self.coproduct()
        expected: dict[tuple[Word, Word], Fraction] = {}
        for w, c in self.terms.items():
            for key in ((w, ()), ((), w)):
                acc = expected.get(key, ZERO) + c
                if acc:
                    expected[key] = acc
                else:
                    del expected[key]
        return cop == expected

    # -- serialization ------------------------------------------------------

    def to_payload(self) -> dict:
        return {
            "letters": self.letters,
            "cap": self.cap,
            "terms": [[list(w), frac_to_str(c)] for w, c in self.sorted_items()],
        }

    @classmethod
    def from_payload(cls, payload: dict) -> "NCSeries":
        return cls(
            payload["letters"],
            payload["cap"],
            {tuple(w): frac_from_str(c) for w, c in payload["terms"]},
        )


class CommSeries:
    """Truncated commutative series, keyed by multidegree tuples."""

    __slots__ = ("letters", "cap", "terms")

    def __init__(self, letters: int, cap: int, terms=None):
        clean: dict[Word, Fraction] = {}
        if terms:
            for m, c in (terms.items() if hasattr(terms, "items") else terms):
                m = tuple(m)
                if len(m) != letters:
                    raise ValueError("multidegree arity mismatch")
                if sum(m) > cap:
                    continue
                c = Fraction(c)
                if c:
                    acc = clean.get(m, ZERO) + c
                    if acc:
                        clean[m] = acc
                    else:
                        del clean[m]
        object.__setattr__(self, "letters", letters)
        object.__setattr__(self, "cap", cap)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, *a):
        raise AttributeError("CommSeries is immutable")

    @classmethod
    def one(cls, letters: int, cap: int) -> "CommSeries":
        return cls(letters, cap, {(0,) * letters: ONE})

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * self.letters, ZERO)

    def __add__(self, other: "CommSeries") -> "CommSeries":
        cap = min(self.cap, other.cap)
        terms = dict(self.terms)
        for m, c in other.terms.items():
            acc = terms.get(m, ZERO) + c
            if acc:
                terms[m] = acc
            else:
                del terms[m]
        return CommSeries(self.letters, cap, terms)

    def __neg__(self):
        return CommSeries(self.letters, self.cap, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, q) -> "CommSeries":
        q = Fraction(q)
        if not q:
            return CommSeries(self.letters, self.cap)
        return CommSeries(self.letters, self.cap, {m: q * c for m, c in self.terms.items()})

    def __mul__(self, other: "CommSeries") -> "CommSeries":
        cap = min(self.cap, other.cap)
        out: dict[Word, Fraction] = {}
        for m1, c1 in self.terms.items():
            d1 = sum(m1)
            for m2, c2 in other.terms.items():
                if d1 + sum(m2) > cap:
                    continue
                m = tuple(a + b for a, b in zip(m1, m2))
                acc = out.get(m, ZERO) + c1 * c2
                if acc:
                    out[m] = acc
                else:
                    del out[m]
        return CommSeries(self.letters, cap, out)

    def exp(self) -> "CommSeries":
        if self.constant_term():
            raise ValueError("exp needs zero constant term")
        fact = _factorials(self.cap)
        acc = CommSeries.one(self.letters, self.cap)
        power = CommSeries.one(self.letters, self.cap)
        for k in range(1, self.cap + 1):
            power = power * self
            if not power.terms:
                break
            acc = acc + power.scale(ONE / fact[k])
        return acc

    def log(self) -> "CommSeries":
        if self.constant_term() != 1:
            raise ValueError("log needs constant term 1")
        u = self - CommSeries.one(self.letters, self.cap)
        acc = CommSeries(self.letters, self.cap)
        power = CommSeries.one(self.letters, self.cap)
        sign = ONE
        for k in range(1, self.cap + 1):
            power = power * u
            if not power.terms:
                break
            acc = acc + power.scale(sign / k)
            sign = -sign
        return acc

    def coeff(self, m: Word) -> Fraction:
        return self.terms.get(tuple(m), ZERO)

    def __eq__(self, other):
        return (
            isinstance(other, CommSeries)
            and self.letters == other.letters
            and self.cap == other.cap
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.letters, self.cap, frozenset(self.terms.items())))

    def __repr__(self):
        items = sorted(self.terms.items(), key=lambda it: (sum(it[0]), it[0]))
        return " + ".join(f"{c}*{m}" for m, c in items[:10]) or "0"


class OneVarSeries:
    """Truncated one-variable series u^d -> coefficient."""

    __slots__ = ("cap", "coeffs")

    def __init__(self, cap: int, coeffs=None):
        clean: dict[int, Fraction] = {}
        if coeffs:
            for d, c in (coeffs.items() if hasattr(coeffs, "items") else coeffs):
                if d > cap:
                    continue
                c = Fraction(c)
                if c:
                    acc = clean.get(d, ZERO) + c
                    if acc:
                        clean[d] = acc
                    else:
                        del clean[d]
        object.__setattr__(self, "cap", cap)
        object.__setattr__(self, "coeffs", clean)

    def __setattr__(self, *a):
        raise AttributeError("OneVarSeries is immutable")

    def coeff(self, d: int) -> Fraction:
        return self.coeffs.get(d, ZERO)

    def __add__(self, other: "OneVarSeries") -> "OneVarSeries":
        cap = min(self.cap, other.cap)
        c = dict(self.coeffs)
        for d, v in other.coeffs.items():
            acc = c.get(d, ZERO) + v
            if acc:
                c[d] = acc
            else:
                del c[d]
        return OneVarSeries(cap, c)

    def __neg__(self):
        return OneVarSeries(self.cap, {d: -v for d, v in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, q) -> "OneVarSeries":
        q = Fraction(q)
        return OneVarSeries(self.cap, {d: q * v for d, v in self.coeffs.items()} if q else {})

    def __mul__(self, other: "OneVarSeries") -> "OneVarSeries":
        cap = min(self.cap, other.cap)
        out: dict[int, Fraction] = {}
        for d1, v1 in self.coeffs.items():
            for d2, v2 in other.coeffs.items():
                if d1 + d2 > cap:
                    continue
                acc = out.get(d1 + d2, ZERO) + v1 * v2
                if acc:
                    out[d1 + d2] = acc
                else:
                    del out[d1 + d2]
        return OneVarSeries(cap, out)

    def derivative(self) -> "OneVarSeries":
        return OneVarSeries(self.cap, {d - 1: d * v for d, v in self.coeffs.items() if d >= 1})

    def times_u(self) -> "OneVarSeries":
        return OneVarSeries(self.cap, {d + 1: v for d, v in self.coeffs.items()})

    def even_part(self) -> "OneVarSeries":
        return OneVarSeries(self.cap, {d: v for d, v in self.coeffs.items() if d % 2 == 0})

    def odd_part(self) -> "OneVarSeries":
        return OneVarSeries(self.cap, {d: v for d, v in self.coeffs.items() if d % 2 == 1})

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other):
        return (
            isinstance(other, OneVarSeries)
            and self.cap == other.cap
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.cap, frozenset(self.coeffs.items())))

    def __repr__(self):
        return " + ".join(f"{v}*u^{d}" for d, v in sorted(self.coeffs.items())) or "0"

    def to_list(self) -> list[str]:
        """Coefficients of u^0 .. u^cap as reduced fraction strings."""
        return [frac_to_str(self.coeff(d)) for d in range(self.cap + 1)]

    @classmethod
    def from_list(cls, cap: int, entries: list[str]) -> "OneVarSeries":
        return cls(cap, {d: frac_from_str(s) for d, s in enumerate(entries)})


def u_over_expm1(cap: int) -> OneVarSeries:
    """The series u/(e^u - 1), i.e. the Bernoulli generating function."""
    # invert (e^u - 1)/u = sum_{k>=0} u^k/(k+1)! term by term
    fact = _factorials(cap + 2)
    g = [ONE / fact[k + 1] for k in range(cap + 1)]
    inv = [ZERO] * (cap + 1)
    inv[0] = ONE
    for d in range(1, cap + 1):
        acc = ZERO
        for k in range(1, d + 1):
            acc += g[k] * inv[d - k]
        inv[d] = -acc
    return OneVarSeries(cap, dict(enumerate(inv)))


def even_zeta_generating(cap: int) -> OneVarSeries:
    """-(1/2)(u/(e^u-1) - 1 + u/2); its u^{2n} coefficient is the even zeta value."""
    b = u_over_expm1(cap)
    corr = OneVarSeries(cap, {0: -ONE, 1: Fraction(1, 2)})
    return (b + corr).scale(Fraction(-1, 2))
