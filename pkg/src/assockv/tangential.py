"""Tangential derivations and automorphisms of free Lie algebras.

A tangential derivation sends each generator x_k to [u_k, x_k]; the tuple
(u_1, ..., u_n) is stored normalized, with the x_k coefficient of u_k
removed (that component acts trivially, and stripping it makes the tuple
canonical).  A tangential automorphism sends x_k to U_k x_k U_k^{-1} and
stores the logarithms a_k of the conjugators.  Conjugator tuples are not
canonical, so equality of automorphisms is decided by comparing images of
all generators, which is the only equality the algebra guarantees.

exp goes from derivations to automorphisms by solving the defining flow
equation U_k'(t) = g_t(u_k) U_k(t) coefficient by coefficient; log goes
back via the operator logarithm followed by an exact solve of
[a, x_k] = r on word coefficients.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .free_lie import (
    LieElement,
    NotPrimitiveError,
    conj_exp_ad,
    eval_lie,
    group_mul,
    group_mul_many,
    universal_cbh,
)
from .series import NCSeries, Word, frac_to_str

ZERO = Fraction(0)
ONE = Fraction(1)


def solve_bracket_letter(r: LieElement, k: int) -> LieElement:
    """Solve [a, x_k] = r for a, normalized so a has no x_k linear term.

    Works word by word: writing r = a·x_k - x_k·a forces
    a_w = r_{w·k} + a_{w[1:]·k} when w starts with k, and a_w = r_{w·k}
    otherwise.  Pure powers of x_k get coefficient 0, which is the
    normalization in degree 1 and forced in higher degree.  Raises
    ValueError when no solution exists.
    """
    letters, cap = r.letters, r.cap
    rser = r.to_ncseries()
    coeffs: dict[Word, Fraction] = {}

    def coeff_of(w: Word) -> Fraction:
        got = coeffs.get(w)
        if got is not None:
            return got
        if all(x == k for x in w):
            val = ZERO
        else:
            coeffs[w] = ZERO  # guard against cycles while recursing
            val = rser.coeff(w + (k,))
            if w and w[0] == k:
                val += coeff_of(w[1:] + (k,))
        coeffs[w] = val
        return val

    # candidate support: strip the trailing letter from r-words ending in k,
    # then close under w' -> k·w'[:-1] (the only way coefficients propagate)
    frontier = [v[:-1] for v in rser.terms if v and v[-1] == k and len(v) >= 2]
    seen: set[Word] = set()
    while frontier:
        w = frontier.pop()
        if w in seen:
            continue
        seen.add(w)
        if w and w[-1] == k:
            frontier.append((k,) + w[:-1])
    terms: dict[Word, Fraction] = {}
    for w in seen:
        c = coeff_of(w)
        if c:
            terms[w] = c
    try:
        cand = LieElement.from_ncseries(NCSeries(letters, cap, terms))
    except NotPrimitiveError as exc:
        raise ValueError(f"bracket equation has no tangential solution: {exc}") from exc
    gen = LieElement.generator(letters, cap, k)
    if cand.with_cap(cap).bracket(gen) != r:
        raise ValueError(f"bracket equation [a, x_{k}] = r is inconsistent")
    return cand


def canonical_conjugator(target: LieElement, k: int) -> LieElement:
    """The unique c with e^{ad c}(x_k) = target and no x_k linear term.

    Exists exactly when target is conjugate to x_k; solved degree by
    degree, one bracket equation per degree.
    """
    letters, cap = target.letters, target.cap
    gen = LieElement.generator(letters, cap, k)
    if target.degree_part(1) != gen:
        raise ValueError("target must equal the generator in degree 1")
    c = LieElement.zero(letters, cap)
    while True:
        residual = target - conj_exp_ad(c, gen)
        v = residual.valuation()
        if v > cap:
            return c
        c = c + solve_bracket_letter(residual.degree_part(v), k)
        new_v = (target - conj_exp_ad(c, gen)).valuation()
        if new_v <= v:
            raise ValueError(f"element is not conjugate to the generator (stuck at degree {v})")


class StrandMap:
    """Partially defined map [m] ⊇ D → [n], with optional fiber orders.

    The fibers partition the domain.  When an operation needs the ordered
    (cbh) variant and no explicit orders were given, fibers are taken in
    increasing strand order.
    """

    __slots__ = ("source", "target", "mapping", "orders")

    def __init__(self, source: int, target: int, mapping: dict[int, int], orders=None):
        mapping = dict(mapping)
        for ell, k in mapping.items():
            if not (1 <= ell <= source) or not (1 <= k <= target):
                raise ValueError(f"strand map entry {ell}->{k} out of range")
        object.__setattr__(self, "source", source)
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "mapping", mapping)
        clean_orders = None
        if orders is not None:
            clean_orders = {}
            for k, seq in orders.items():
                seq = tuple(seq)
                if sorted(seq) != sorted(ell for ell, kk in mapping.items() if kk == k):
                    raise ValueError(f"order for fiber {k} does not enumerate it")
                clean_orders[k] = seq
        object.__setattr__(self, "orders", clean_orders)

    def __setattr__(self, *a):
        raise AttributeError("StrandMap is immutable")

    @classmethod
    def from_fibers(cls, fibers: Sequence[Sequence[int]], source: int) -> "StrandMap":
        """Build from fiber lists: slot k gets fibers[k-1] (orders preserved)."""
        mapping = {}
        orders = {}
        for k, fib in enumerate(fibers, start=1):
            for ell in fib:
                if ell in mapping:
                    raise ValueError(f"strand {ell} in two fibers")
                mapping[ell] = k
            orders[k] = tuple(fib)
        return cls(source, len(fibers), mapping, orders)

    @classmethod
    def identity(cls, n: int) -> "StrandMap":
        return cls(n, n, {i: i for i in range(1, n + 1)})

    @classmethod
    def from_permutation(cls, sigma: Sequence[int]) -> "StrandMap":
        """The map whose coface realizes relabeling by sigma^{-1}."""
        n = len(sigma)
        return cls(n, n, {sigma[i - 1]: i for i in range(1, n + 1)})

    def fiber(self, k: int) -> tuple[int, ...]:
        if self.orders is not None and k in self.orders:
            return self.orders[k]
        return tuple(sorted(ell for ell, kk in self.mapping.items() if kk == k))

    def defined(self, ell: int) -> bool:
        return ell in self.mapping

    def compose(self, inner: "StrandMap") -> "StrandMap":
        """The composite self ∘ inner as partial maps (inner feeds into self)."""
        if inner.target != self.source:
            raise ValueError("strand map sizes do not compose")
        mapping = {}
        for ell, mid in inner.mapping.items():
            if mid in self.mapping:
                mapping[ell] = self.mapping[mid]
        return StrandMap(inner.source, self.target, mapping)

    def signature(self) -> tuple:
        orders = None
        if self.orders is not None:
            orders = tuple(sorted(self.orders.items()))
        return (self.source, self.target, tuple(sorted(self.mapping.items())), orders)

    def __eq__(self, other):
        return isinstance(other, StrandMap) and self.signature() == other.signature()

    def __hash__(self):
        return hash(self.signature())

    def __repr__(self):
        fibs = ["".join(map(str, self.fiber(k))) for k in range(1, self.target + 1)]
        return f"StrandMap[{self.source}->({','.join(fibs)})]"


def _fiber_images(phi: StrandMap, cap: int, variant: str) -> list[LieElement]:
    """Letter images x_k -> sum (or cbh) over the k-th fiber, in the big algebra."""
    m = phi.source
    images = []
    for k in range(1, phi.target + 1):
        fib = phi.fiber(k)
        if not fib:
            images.append(LieElement.zero(m, cap))
            continue
        gens = [LieElement.generator(m, cap, ell) for ell in fib]
        if variant == "additive":
            acc = gens[0]
            for g in gens[1:]:
                acc = acc + g
        elif variant == "cbh":
            acc = gens[0] if len(gens) == 1 else group_mul_many(gens)
        else:
            raise ValueError(f"unknown coface variant {variant!r}")
        images.append(acc)
    return images


class TangDer:
    """Tangential derivation of the free Lie algebra on letters 1..n."""

    __slots__ = ("letters", "cap", "parts", "_act_memo")

    def __init__(self, letters: int, cap: int, parts: Sequence[LieElement]):
        parts = tuple(parts)
        if len(parts) != letters:
            raise ValueError("need one component per letter")
        norm = []
        for k, u in enumerate(parts, start=1):
            if u.letters != letters:
                raise ValueError("component letter count mismatch")
            u = u.with_cap(cap)
            lam = u.linear_coeff(k)
            if lam:
                u = u - LieElement.generator(letters, cap, k).scale(lam)
            norm.append(u)
        object.__setattr__(self, "letters", letters)
        object.__setattr__(self, "cap", cap)
        object.__setattr__(self, "parts", tuple(norm))
        object.__setattr__(self, "_act_memo", {})

    def __setattr__(self, *a):
        raise AttributeError("TangDer is immutable")

    @classmethod
    def zero(cls, letters: int, cap: int) -> "TangDer":
        z = LieElement.zero(letters, cap)
        return cls(letters, cap, (z,) * letters)

    def zero_like(self) -> "TangDer":
        return TangDer.zero(self.letters, self.cap)

    def is_zero(self) -> bool:
        return all(u.is_zero() for u in self.parts)

    def valuation(self) -> int:
        """Derivation degree valuation (degree of u_k equals the degree shift)."""
        return min((u.valuation() for u in self.parts), default=self.cap + 1)

    def _compat(self, other: "TangDer") -> int:
        if self.letters != other.letters:
            raise ValueError("letter counts differ")
        return min(self.cap, other.cap)

    def __add__(self, other: "TangDer") -> "TangDer":
        cap = self._compat(other)
        return TangDer(self.letters, cap, [a + b for a, b in zip(self.parts, other.parts)])

    def __neg__(self):
        return TangDer(self.letters, self.cap, [-a for a in self.parts])

    def __sub__(self, other):
        return self + (-other)

    def scale(self, q) -> "TangDer":
        return TangDer(self.letters, self.cap, [a.scale(q) for a in self.parts])

    def __rmul__(self, q):
        if isinstance(q, (int, Fraction)):
            return self.scale(q)
        return NotImplemented

    def act_lie(self, z: LieElement) -> LieElement:
        """Derivation action on a Lie element (memoized on Lyndon words)."""
        if z.letters != self.letters:
            raise ValueError("letter counts differ")
        cap = min(self.cap, z.cap)
        memo = self._act_memo

        def act_word(w: Word) -> LieElement:
            got = memo.get(w)
            if got is None:
                if len(w) == 1:
                    k = w[0]
                    got = self.parts[k - 1].bracket(LieElement.generator(self.letters, self.cap, k))
                else:
                    from .free_lie import standard_factorization

                    u, v = standard_factorization(w)
                    bu = LieElement(self.letters, self.cap, {u: ONE})
                    bv = LieElement(self.letters, self.cap, {v: ONE})
                    got = act_word(u).bracket(bv) + bu.bracket(act_word(v))
                memo[w] = got
            return got

        acc = LieElement.zero(self.letters, cap)
        for w, c in z.coords.items():
            acc = acc + act_word(w).with_cap(cap).scale(c)
        return acc

    def act_power_lie(self, z: LieElement, m: int) -> LieElement:
        for _ in range(m):
            z = self.act_lie(z)
        return z

    def act_series(self, z: NCSeries) -> NCSeries:
        """Leibniz extension of the derivation to the free associative algebra."""
        if z.letters != self.letters:
            raise ValueError("letter counts differ")
        cap = min(self.cap, z.cap)
        # D_k = u_k x_k - x_k u_k as series, one per letter
        dser = []
        for k in range(1, self.letters + 1):
            uk = self.parts[k - 1].to_ncseries().with_cap(cap)
            xk = NCSeries.letter(self.letters, cap, k)
            dser.append(uk * xk - xk * uk)
        out = NCSeries.zero(self.letters, cap)
        for w, c in z.terms.items():
            for i in range(len(w)):
                left = NCSeries(self.letters, cap, {w[:i]: c})
                right = NCSeries(self.letters, cap, {w[i + 1:]: ONE})
                out = out + left * dser[w[i] - 1] * right
        return out

    def bracket(self, other: "TangDer") -> "TangDer":
        """[u, v] is tangential with components u(v_k) - v(u_k) - [u_k, v_k]."""
        cap = self._compat(other)
        parts = []
        for uk, vk in zip(self.parts, other.parts):
            parts.append(self.act_lie(vk.with_cap(cap)) - other.act_lie(uk.with_cap(cap)) - uk.with_cap(cap).bracket(vk.with_cap(cap)))
        return TangDer(self.letters, cap, parts)

    def coface(self, phi: StrandMap, variant: str = "additive") -> "TangDer":
        """Simplicial image: component over strand ℓ is u_{φ(ℓ)} at the fiber images."""
        if phi.target != self.letters:
            raise ValueError("strand map target must match letter count")
        images = _fiber_images(phi, self.cap, variant)
        zero = LieElement.zero(phi.source, self.cap)
        parts = []
        for ell in range(1, phi.source + 1):
            if phi.defined(ell):
                src = self.parts[phi.mapping[ell] - 1]
                parts.append(eval_lie(src, images, zero=zero) if not src.is_zero() else zero)
            else:
                parts.append(zero)
        return TangDer(phi.source, self.cap, parts)

    def __eq__(self, other):
        return (
            isinstance(other, TangDer)
            and self.letters == other.letters
            and self.cap == other.cap
            and self.parts == other.parts
        )

    def __hash__(self):
        return hash((self.letters, self.cap, self.parts))

    def __repr__(self):
        return f"TangDer{list(self.parts)!r}"

    def to_payload(self) -> dict:
        return {
            "letters": self.letters,
            "cap": self.cap,
            "normalized": True,
            "parts": [u.to_payload() for u in self.parts],
        }

    @classmethod
    def from_payload(cls, payload: dict) -> "TangDer":
        return cls(
            payload["letters"],
            payload["cap"],
            [LieElement.from_payload(p) for p in payload["parts"]],
        )


class TangAut:
    """Tangential automorphism x_k -> U_k x_k U_k^{-1}, stored by log U_k."""

    __slots__ = ("letters", "cap", "exponents", "_images_lie", "_images_ser", "_canonical")

    def __init__(self, letters: int, cap: int, exponents: Sequence[LieElement]):
        exponents = tuple(e.with_cap(cap) for e in exponents)
        if len(exponents) != letters:
            raise ValueError("need one conjugator per letter")
        for e in exponents:
            if e.letters != letters:
                raise ValueError("conjugator letter count mismatch")
        object.__setattr__(self, "letters", letters)
        object.__setattr__(self, "cap", cap)
        object.__setattr__(self, "exponents", exponents)
        object.__setattr__(self, "_images_lie", None)
        object.__setattr__(self, "_images_ser", None)
        object.__setattr__(self, "_canonical", None)

    def __setattr__(self, *a):
        raise AttributeError("TangAut is immutable")

    @classmethod
    def identity(cls, letters: int, cap: int) -> "TangAut":
        z = LieElement.zero(letters, cap)
        return cls(letters, cap, (z,) * letters)

    @classmethod
    def inner(cls, w: LieElement) -> "TangAut":
        """Inn(exp w): every conjugator equals exp(w)."""
        if not w.is_zero() and w.valuation() < 1:
            raise ValueError("inner log must have valuation >= 1")
        return cls(w.letters, w.cap, (w,) * w.letters)

    def is_identity_action(self) -> bool:
        return all(
            img == LieElement.generator(self.letters, self.cap, k)
            for k, img in enumerate(self.images_lie(), start=1)
        )

    def images_lie(self) -> tuple[LieElement, ...]:
        got = self._images_lie
        if got is None:
            got = tuple(
                conj_exp_ad(a, LieElement.generator(self.letters, self.cap, k))
                for k, a in enumerate(self.exponents, start=1)
            )
            object.__setattr__(self, "_images_lie", got)
        return got

    def images_series(self) -> tuple[NCSeries, ...]:
        got = self._images_ser
        if got is None:
            got = tuple(z.to_ncseries() for z in self.images_lie())
            object.__setattr__(self, "_images_ser", got)
        return got

    def apply_lie(self, z: LieElement) -> LieElement:
        if z.letters != self.letters:
            raise ValueError("letter counts differ")
        if z.is_zero():
            return z.with_cap(min(self.cap, z.cap))
        return eval_lie(z.with_cap(min(self.cap, z.cap)), self.images_lie())

    def apply_series(self, z: NCSeries) -> NCSeries:
        if z.letters != self.letters:
            raise ValueError("letter counts differ")
        return z.substitute(list(self.images_series()))

    def compose(self, other: "TangAut") -> "TangAut":
        """self ∘ other: apply other first.  Conjugators: self(V_k)·U_k."""
        if self.letters != other.letters:
            raise ValueError("letter counts differ")
        cap = min(self.cap, other.cap)
        exps = []
        for a_k, b_k in zip(self.exponents, other.exponents):
            left = self.apply_lie(b_k.with_cap(cap))
            exps.append(group_mul(left, a_k.with_cap(cap)))
        return TangAut(self.letters, cap, exps)

    def inverse(self) -> "TangAut":
        """Fixed-point iteration for b_k = -h(a_k); gains one degree per pass."""
        cap = self.cap
        h = TangAut(self.letters, cap, tuple(-a for a in self.exponents))
        for _ in range(cap):
            h = TangAut(self.letters, cap, tuple(-h.apply_lie(a) for a in self.exponents))
        return h

    def power(self, q) -> "TangAut":
        """exp(q · log): rational powers inside the pronilpotent group."""
        return taut_exp(taut_log(self).scale(q))

    def coface(self, phi: StrandMap, variant: str = "additive") -> "TangAut":
        """The group morphism induced by the derivation-level coface.

        Computed as exp of the coface of the logarithm.  Substituting
        directly into conjugator exponents describes the same action only
        up to central gauge, which would corrupt the Jacobian, so the
        definitional route is used.
        """
        if phi.target != self.letters:
            raise ValueError("strand map target must match letter count")
        return taut_exp(taut_log(self).coface(phi, variant))

    def canonicalize(self) -> "TangAut":
        """Rewrite with the unique conjugators having no x_k linear term."""
        got = self._canonical
        if got is None:
            exps = [canonical_conjugator(img, k) for k, img in enumerate(self.images_lie(), start=1)]
            got = TangAut(self.letters, self.cap, exps)
            object.__setattr__(got, "_canonical", got)
            object.__setattr__(self, "_canonical", got)
        return got

    def __eq__(self, other):
        """Equality of automorphisms: same action on every generator."""
        if not isinstance(other, TangAut):
            return NotImplemented
        if self.letters != other.letters or self.cap != other.cap:
            return False
        return self.images_lie() == other.images_lie()

    def __hash__(self):
        return hash((self.letters, self.cap, self.images_lie()))

    def __repr__(self):
        return f"TangAut(exp={list(self.exponents)!r})"

    def with_cap(self, cap: int) -> "TangAut":
        return TangAut(self.letters, cap, [e.with_cap(cap) for e in self.exponents])

    def to_payload(self, canonical: bool = False) -> dict:
        g = self.canonicalize() if canonical else self
        return {
            "letters": g.letters,
            "cap": g.cap,
            "normalized": canonical,
            "parts": [a.to_payload() for a in g.exponents],
        }

    @classmethod
    def from_payload(cls, payload: dict) -> "TangAut":
        return cls(
            payload["letters"],
            payload["cap"],
            [LieElement.from_payload(p) for p in payload["parts"]],
        )


def taut_exp(u: TangDer) -> TangAut:
    """Exponential tder -> TAut via the flow U_k' = g_t(u_k) U_k at t = 1."""
    letters, cap = u.letters, u.cap
    exps = []
    for k in range(1, letters + 1):
        uk = u.parts[k - 1]
        # h_i = u^i(u_k)/i! as series; all have valuation >= i+1
        h: list[NCSeries] = []
        term = uk
        fact = ONE
        for i in range(cap + 1):
            if i > 0:
                term = u.act_lie(term)
                fact *= i
            if term.is_zero():
                h.append(NCSeries.zero(letters, cap))
                if i > 0:
                    break
            else:
                h.append(term.to_ncseries().scale(ONE / fact))
        c = [NCSeries.one(letters, cap)]
        total = NCSeries.one(letters, cap)
        for j in range(cap):
            acc = NCSeries.zero(letters, cap)
            for i in range(min(j, len(h) - 1) + 1):
                if not h[i].is_zero():
                    acc = acc + h[i] * c[j - i]
            nxt = acc.scale(Fraction(1, j + 1))
            c.append(nxt)
            if nxt.is_zero():
                break
            total = total + nxt
        exps.append(LieElement.from_ncseries(total.log()))
    return TangAut(letters, cap, exps)


def taut_log(g: TangAut) -> TangDer:
    """Operator logarithm of a tangential automorphism.

    Computed one degree above the cap so the derivation keeps its full
    degree-cap component, then each u_k is recovered from u(x_k) = [u_k, x_k].
    """
    letters, cap = g.letters, g.cap
    lift = g.with_cap(cap + 1)
    parts = []
    for k in range(1, letters + 1):
        xk = LieElement.generator(letters, cap + 1, k)
        term = lift.apply_lie(xk) - xk
        acc = term
        sign = ONE
        j = 1
        while not term.is_zero() and j <= cap + 1:
            term = lift.apply_lie(term) - term
            j += 1
            sign = -sign
            if not term.is_zero():
                acc = acc + term.scale(sign / j)
        parts.append(solve_bracket_letter(acc, k).with_cap(cap))
    return TangDer(letters, cap, parts)


def group_word_eval(word_log: LieElement, g: TangAut, h: TangAut) -> TangAut:
    """Evaluate a pronilpotent group word (given by its log in two letters)."""
    if word_log.letters != 2:
        raise ValueError("group words live in two letters")
    if word_log.is_zero():
        return TangAut.identity(g.letters, min(g.cap, h.cap))
    return taut_exp(eval_lie(word_log, (taut_log(g), taut_log(h))))
