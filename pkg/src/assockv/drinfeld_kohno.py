"""The Lie algebras of infinitesimal braids.

t_n is presented by generators t_ij = t_ji with the locality relations
[t_ij, t_ik + t_jk] = 0 and [t_ij, t_kl] = 0 for distinct indices, but it
is never stored that way.  Instead we use the iterated semidirect
decomposition: the generators t_{1n}, ..., t_{n-1,n} span a free Lie
ideal, and the remaining strands generate a copy of t_{n-1}, so a basis
is indexed by pairs (level m, Lyndon word over 1..m-1) where the word at
level m stands for its standard bracketing in the letters t_{1m}, ...,
t_{m-1,m}.  Every basis element carries a defining bracket tree over the
generators, so any Lie morphism out of t_n (cofaces, symmetric-group
relabelings, the adjoint map onto tangential derivations) is evaluated by
substituting generator images into those trees; exact normal forms, no
ideal membership ever.

Internal strands are 1..n.  Texts that single out a strand "0" correspond
to internal strand 1 (the global +1 shift).
"""

from __future__ import annotations

from fractions import Fraction

from .free_lie import LieElement, eval_lie, lyndon_words, standard_factorization, universal_cbh
from .linalg import kernel_basis, span_equal
from .series import frac_from_str, frac_to_str
from .tangential import StrandMap, TangDer

ZERO = Fraction(0)
ONE = Fraction(1)

# basis key: (level m >= 2, lyndon word over letters 1..m-1); degree = len(word)
Key = tuple[int, tuple[int, ...]]

_tree_cache: dict[Key, tuple] = {}
_sc_cache: dict[tuple[Key, Key], dict[Key, Fraction]] = {}
_ad_cache: dict[tuple[int, int, Key], TangDer] = {}
_morphism_caches: dict[tuple, dict[Key, "TnElement"]] = {}


def basis_keys(n: int, d: int) -> list[Key]:
    """Degree-d basis of t_n: tail level first, then the lower levels."""
    out: list[Key] = []
    for m in range(n, 1, -1):
        if m == 2 and d != 1:
            continue
        out.extend((m, w) for w in lyndon_words(m - 1, d))
    return out


def basis_keys_upto(n: int, cap: int) -> list[Key]:
    out: list[Key] = []
    for d in range(1, cap + 1):
        out.extend(basis_keys(n, d))
    return out


def dim_tn(n: int, d: int) -> int:
    return len(basis_keys(n, d))


def defining_tree(key: Key):
    """Bracket tree over generator pairs for a basis element."""
    got = _tree_cache.get(key)
    if got is None:
        m, w = key
        if len(w) == 1:
            got = ("gen", w[0], m)
        else:
            u, v = standard_factorization(w)
            got = (defining_tree((m, u)), defining_tree((m, v)))
        _tree_cache[key] = got
    return got


class TnElement:
    """Element of t_n, stored as exact coordinates on the recursive basis."""

    __slots__ = ("strands", "cap", "coords")

    def __init__(self, strands: int, cap: int, coords=None):
        if strands < 2:
            raise ValueError("need at least two strands")
        clean: dict[Key, Fraction] = {}
        if coords:
            for key, c in (coords.items() if hasattr(coords, "items") else coords):
                m, w = key
                w = tuple(w)
                if not (2 <= m <= strands):
                    raise ValueError(f"level {m} out of range for {strands} strands")
                if len(w) > cap:
                    continue
                c = Fraction(c)
                if c:
                    k = (m, w)
                    acc = clean.get(k, ZERO) + c
                    if acc:
                        clean[k] = acc
                    else:
                        del clean[k]
        object.__setattr__(self, "strands", strands)
        object.__setattr__(self, "cap", cap)
        object.__setattr__(self, "coords", clean)

    def __setattr__(self, *a):
        raise AttributeError("TnElement is immutable")

    @classmethod
    def zero(cls, strands: int, cap: int) -> "TnElement":
        return cls(strands, cap)

    def zero_like(self) -> "TnElement":
        return TnElement(self.strands, self.cap)

    def is_zero(self) -> bool:
        return not self.coords

    def _compat(self, other: "TnElement") -> int:
        if self.strands != other.strands:
            raise ValueError("strand counts differ")
        return min(self.cap, other.cap)

    def __add__(self, other: "TnElement") -> "TnElement":
        cap = self._compat(other)
        coords = dict(self.coords)
        for k, c in other.coords.items():
            acc = coords.get(k, ZERO) + c
            if acc:
                coords[k] = acc
            else:
                del coords[k]
        return TnElement(self.strands, cap, coords)

    def __neg__(self):
        return TnElement(self.strands, self.cap, {k: -c for k, c in self.coords.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, q) -> "TnElement":
        q = Fraction(q)
        if not q:
            return self.zero_like()
        return TnElement(self.strands, self.cap, {k: q * c for k, c in self.coords.items()})

    def __rmul__(self, q):
        if isinstance(q, (int, Fraction)):
            return self.scale(q)
        return NotImplemented

    def bracket(self, other: "TnElement") -> "TnElement":
        cap = self._compat(other)
        out: dict[Key, Fraction] = {}
        for k1, c1 in self.coords.items():
            d1 = len(k1[1])
            for k2, c2 in other.coords.items():
                if d1 + len(k2[1]) > cap:
                    continue
                q = c1 * c2
                for k, v in _structure(k1, k2).items():
                    acc = out.get(k, ZERO) + q * v
                    if acc:
                        out[k] = acc
                    else:
                        del out[k]
        return TnElement(self.strands, cap, out)

    def __eq__(self, other):
        return (
            isinstance(other, TnElement)
            and self.strands == other.strands
            and self.cap == other.cap
            and self.coords == other.coords
        )

    def __hash__(self):
        return hash((self.strands, self.cap, frozenset(self.coords.items())))

    def valuation(self) -> int:
        if not self.coords:
            return self.cap + 1
        return min(len(w) for _, w in self.coords)

    def degree_part(self, d: int) -> "TnElement":
        return TnElement(self.strands, self.cap, {k: c for k, c in self.coords.items() if len(k[1]) == d})

    def with_cap(self, cap: int) -> "TnElement":
        return TnElement(self.strands, cap, self.coords)

    def tail(self) -> LieElement:
        """The free-ideal component: a Lie element in the letters t_{k,n}."""
        return LieElement(
            self.strands - 1,
            self.cap,
            {w: c for (m, w), c in self.coords.items() if m == self.strands},
        )

    def rest(self) -> "TnElement":
        """The lower-strand component, an element of t_{n-1}."""
        if self.strands == 2:
            raise ValueError("t_2 has no lower component")
        return TnElement(
            self.strands - 1,
            self.cap,
            {(m, w): c for (m, w), c in self.coords.items() if m < self.strands},
        )

    @classmethod
    def from_parts(cls, tail: LieElement, rest: "TnElement") -> "TnElement":
        n = rest.strands + 1
        if tail.letters != n - 1:
            raise ValueError("tail letter count mismatch")
        coords = {(n, w): c for w, c in tail.coords.items()}
        for k, c in rest.coords.items():
            coords[k] = c
        return cls(n, min(tail.cap, rest.cap), coords)

    def sorted_items(self):
        return sorted(self.coords.items(), key=lambda it: (len(it[0][1]), -it[0][0], it[0][1]))

    def __repr__(self):
        bits = [f"{c}*T{m}:{''.join(map(str, w))}" for (m, w), c in self.sorted_items()[:10]]
        return " + ".join(bits) + (" + ..." if len(self.coords) > 10 else "") if bits else "0"

    def to_payload(self) -> dict:
        tail_terms = sorted(
            ((w, c) for (m, w), c in self.coords.items() if m == self.strands),
            key=lambda it: (len(it[0]), it[0]),
        )
        payload = {
            "strands": self.strands,
            "cap": self.cap,
            "tail": [[list(w), frac_to_str(c)] for w, c in tail_terms],
        }
        if self.strands > 2:
            payload["rest"] = self.rest().to_payload()
        return payload

    @classmethod
    def from_payload(cls, payload: dict) -> "TnElement":
        n = payload["strands"]
        cap = payload["cap"]
        coords = {(n, tuple(w)): frac_from_str(c) for w, c in payload["tail"]}
        if "rest" in payload and payload["rest"] is not None:
            inner = cls.from_payload(payload["rest"])
            if inner.strands != n - 1:
                raise ValueError("nested strand count mismatch")
            coords.update(inner.coords)
        return cls(n, cap, coords)


def tn_gen(n: int, i: int, j: int, cap: int) -> TnElement:
    """The generator t_ij (= t_ji) in the recursive basis."""
    if i == j or not (1 <= i <= n) or not (1 <= j <= n):
        raise ValueError(f"bad generator indices ({i},{j}) for {n} strands")
    i, j = min(i, j), max(i, j)
    return TnElement(n, cap, {(j, (i,)): ONE})


def casimir(n: int, cap: int) -> TnElement:
    acc = TnElement.zero(n, cap)
    for j in range(2, n + 1):
        for i in range(1, j):
            acc = acc + tn_gen(n, i, j, cap)
    return acc


def _ad_generator_parts(n: int, base: int) -> dict[tuple[int, int], TangDer]:
    """Tangential images of the generators under ad with a marked strand.

    Letters are the strands other than `base` in increasing order.  For a
    pair meeting the base, every letter is conjugated by the partner; for
    a pair missing the base only its two members move.
    """
    others = [s for s in range(1, n + 1) if s != base]
    pos = {s: idx + 1 for idx, s in enumerate(others)}
    m = n - 1
    images: dict[tuple[int, int], TangDer] = {}
    # exact homogeneous images: cap 1 is enough, callers lift as needed
    cap = 1
    zero = LieElement.zero(m, cap)
    for jj in range(2, n + 1):
        for ii in range(1, jj):
            parts = [zero] * m
            if base in (ii, jj):
                other = jj if ii == base else ii
                xo = LieElement.generator(m, cap, pos[other])
                for s in others:
                    if s != other:
                        parts[pos[s] - 1] = xo
            else:
                parts[pos[ii] - 1] = -LieElement.generator(m, cap, pos[jj])
                parts[pos[jj] - 1] = -LieElement.generator(m, cap, pos[ii])
            images[(ii, jj)] = TangDer(m, cap, parts)
    return images


def _eval_tree(tree, images: dict, memo: dict):
    got = memo.get(tree)
    if got is None:
        if tree[0] == "gen":
            _, i, m = tree
            got = images[(i, m)]
        else:
            got = _eval_tree(tree[0], images, memo).bracket(_eval_tree(tree[1], images, memo))
        memo[tree] = got
    return got


def ad_basis_image(n: int, base: int, key: Key) -> TangDer:
    """Adjoint image of one basis element of t_n, exact in its degree."""
    got = _ad_cache.get((n, base, key))
    if got is None:
        deg = len(key[1])
        gens = _ad_generator_parts(n, base)
        images = {p: _tder_with_cap(t, deg) for p, t in gens.items()}
        got = _eval_tree(defining_tree(key), images, {})
        _ad_cache[(n, base, key)] = got
    return got


def _tder_with_cap(t: TangDer, cap: int) -> TangDer:
    return TangDer(t.letters, cap, [p.with_cap(cap) for p in t.parts])


def ad_tn(a: TnElement, base: int = 1, cap: int | None = None) -> TangDer:
    """The Lie morphism onto tangential derivations of the free ideal.

    Letters of the result are the strands other than `base`, relabeled in
    increasing order.
    """
    n = a.strands
    if not 1 <= base <= n:
        raise ValueError("base strand out of range")
    cap = a.cap if cap is None else cap
    acc = TangDer.zero(n - 1, cap)
    for key, c in a.coords.items():
        img = ad_basis_image(n, base, key)
        acc = acc + _tder_with_cap(img, cap).scale(c)
    return acc


def _rho(level: int, key: Key) -> TangDer:
    """Action of a lower basis element on the free ideal at `level`."""
    return ad_basis_image(level, level, key)


def _structure(k1: Key, k2: Key) -> dict[Key, Fraction]:
    """Structure constants of t_n on basis pairs; exact and level-intrinsic."""
    got = _sc_cache.get((k1, k2))
    if got is not None:
        return got
    m1, w1 = k1
    m2, w2 = k2
    if m1 < m2 or (m1 == m2 and w2 < w1):
        out = {k: -c for k, c in _structure(k2, k1).items()}
    elif m1 == m2:
        if w1 == w2:
            out = {}
        else:
            # bracket inside the free tail at this level
            from .free_lie import lie_structure

            out = {(m1, w): c for w, c in lie_structure(w1, w2).items()}
    else:
        # lower level acts on the tail: [tail, lower] = -rho(lower)(tail)
        deg = len(w1) + len(w2)
        rho = _tder_with_cap(_rho(m1, k2), deg)
        tail = LieElement(m1 - 1, deg, {w1: ONE})
        img = rho.act_lie(tail)
        out = {(m1, w): -c for w, c in img.coords.items()}
    _sc_cache[(k1, k2)] = out
    return out


def tn_eval_morphism(a: TnElement, images: dict[tuple[int, int], object], zero, cache_token=None):
    """Evaluate the Lie morphism with the given generator images on `a`.

    `images` maps ordered pairs (i, j), i < j, to protocol targets.  When
    `cache_token` is supplied, per-basis images are memoized under it so
    repeated morphisms (cofaces, relabelings) stay cheap.
    """
    if cache_token is not None:
        memo_basis = _morphism_caches.setdefault(cache_token, {})
    else:
        memo_basis = {}
    tree_memo: dict = {}
    acc = zero
    for key, c in a.coords.items():
        img = memo_basis.get(key)
        if img is None:
            img = _eval_tree(defining_tree(key), images, tree_memo)
            memo_basis[key] = img
        acc = acc + img.scale(c)
    return acc


def tn_coface(a: TnElement, phi: StrandMap) -> TnElement:
    """Simplicial image: t_ij goes to the sum over preimage pairs."""
    if phi.target != a.strands:
        raise ValueError(f"strand map target {phi.target} != strands {a.strands}")
    m = phi.source
    # exact images: cap large enough for any degree we will meet
    cap = a.cap
    images: dict[tuple[int, int], TnElement] = {}
    for jj in range(2, a.strands + 1):
        for ii in range(1, jj):
            acc = TnElement.zero(m, cap)
            for ip in phi.fiber(ii):
                for jp in phi.fiber(jj):
                    acc = acc + tn_gen(m, ip, jp, cap)
            images[(ii, jj)] = acc
    token = ("coface", a.strands, m, phi.signature(), cap)
    return tn_eval_morphism(a, images, TnElement.zero(m, cap), cache_token=token)


def sn_act(sigma: tuple[int, ...], a: TnElement) -> TnElement:
    """Relabel strands by a permutation: t_ij -> t_{sigma(i) sigma(j)}."""
    n = a.strands
    if sorted(sigma) != list(range(1, n + 1)):
        raise ValueError("not a permutation of the strands")
    cap = a.cap
    images = {
        (i, j): tn_gen(n, sigma[i - 1], sigma[j - 1], cap)
        for j in range(2, n + 1)
        for i in range(1, j)
    }
    token = ("perm", n, tuple(sigma), cap)
    return tn_eval_morphism(a, images, TnElement.zero(n, cap), cache_token=token)


class TnGroupElement:
    """Element of the exponential group of t_n, stored by its logarithm."""

    __slots__ = ("log",)

    def __init__(self, log: TnElement):
        object.__setattr__(self, "log", log)

    def __setattr__(self, *a):
        raise AttributeError("TnGroupElement is immutable")

    @classmethod
    def identity(cls, strands: int, cap: int) -> "TnGroupElement":
        return cls(TnElement.zero(strands, cap))

    @classmethod
    def exp(cls, log: TnElement) -> "TnGroupElement":
        return cls(log)

    @property
    def strands(self) -> int:
        return self.log.strands

    @property
    def cap(self) -> int:
        return self.log.cap

    def mul(self, other: "TnGroupElement") -> "TnGroupElement":
        cap = min(self.cap, other.cap)
        cbh = universal_cbh(2, cap)
        return TnGroupElement(eval_lie(cbh, (self.log.with_cap(cap), other.log.with_cap(cap))))

    def inv(self) -> "TnGroupElement":
        return TnGroupElement(-self.log)

    def coface(self, phi: StrandMap) -> "TnGroupElement":
        return TnGroupElement(tn_coface(self.log, phi))

    def perm(self, sigma: tuple[int, ...]) -> "TnGroupElement":
        return TnGroupElement(sn_act(sigma, self.log))

    def __eq__(self, other):
        return isinstance(other, TnGroupElement) and self.log == other.log

    def __hash__(self):
        return hash(self.log)

    def __repr__(self):
        return f"exp({self.log!r})"


def group_mul_tn(logs) -> TnElement:
    """BCH-fold logarithms in t_n, left to right."""
    acc = TnGroupElement(logs[0])
    for z in logs[1:]:
        acc = acc.mul(TnGroupElement(z))
    return acc.log


def centralizer_t(n: int, i: int, j: int, d: int):
    """Kernel of ad t_ij on degree d, with the predicted comparison space.

    Returns (kernel vectors, predicted vectors, spaces agree?) where the
    prediction is the span of t_ij (degree 1 only) together with the
    doubling coface of t_{n-1} in degree d.
    """
    cap = d + 1
    keys_d = basis_keys(n, d)
    keys_d1 = basis_keys(n, d + 1)
    index = {k: idx for idx, k in enumerate(keys_d1)}
    t = tn_gen(n, i, j, cap)
    cols = []
    for key in keys_d:
        img = TnElement(n, cap, {key: ONE}).bracket(t)
        vec = [ZERO] * len(keys_d1)
        for k, c in img.coords.items():
            vec[index[k]] = c
        cols.append(vec)
    mat = [[cols[c][r] for c in range(len(keys_d))] for r in range(len(keys_d1))]
    ker = kernel_basis(mat, len(keys_d))

    # prediction: merge strands i and j into slot 1, others in increasing order
    rest = [s for s in range(1, n + 1) if s not in (i, j)]
    phi = StrandMap.from_fibers([(i, j)] + [(s,) for s in rest], n)
    predicted = []
    for key in basis_keys(n - 1, d):
        img = tn_coface(TnElement(n - 1, cap, {key: ONE}), phi)
        vec = [ZERO] * len(keys_d)
        kidx = {k: idx for idx, k in enumerate(keys_d)}
        for k, c in img.coords.items():
            vec[kidx[k]] = c
        predicted.append(vec)
    if d == 1:
        vec = [ZERO] * len(keys_d)
        kidx = {k: idx for idx, k in enumerate(keys_d)}
        for k, c in tn_gen(n, i, j, cap).coords.items():
            vec[kidx[k]] = c
        predicted.append(vec)
    return ker, predicted, span_equal(ker, predicted)


_guard_cache: dict[tuple[int, int], bool] = {}


def ad_kernel_guard(n: int, cap: int) -> None:
    """Verify ker(ad) on t_n is the Casimir line in degree 1 and zero above.

    This licenses verifying exponential-group identities through their
    tangential images plus a degree-1 comparison.  Raises RuntimeError
    with a diagnostic when the expectation fails at some degree.
    """
    if _guard_cache.get((n, cap)):
        return
    for d in range(1, cap + 1):
        keys = basis_keys(n, d)
        imgs = [ad_basis_image(n, 1, key) for key in keys]
        # coordinates: stacked Lyndon coefficients of every part
        coordset = sorted({(p, w) for t in imgs for p, part in enumerate(t.parts) for w in part.coords})
        cindex = {c: idx for idx, c in enumerate(coordset)}
        mat_rows = len(coordset)
        mat = [[ZERO] * len(keys) for _ in range(mat_rows)]
        for cidx, t in enumerate(imgs):
            for p, part in enumerate(t.parts):
                for w, v in part.coords.items():
                    mat[cindex[(p, w)]][cidx] = v
        ker = kernel_basis(mat, len(keys))
        if d == 1:
            cas = casimir(n, cap)
            kidx = {k: idx for idx, k in enumerate(keys)}
            vec = [ZERO] * len(keys)
            for k, c in cas.coords.items():
                vec[kidx[k]] = c
            if not span_equal(ker, [vec]):
                raise RuntimeError(
                    f"adjoint kernel guard failed: t_{n} degree 1 kernel is not the Casimir line"
                )
        elif ker:
            raise RuntimeError(
                f"adjoint kernel guard failed: t_{n} has a {len(ker)}-dimensional kernel in degree {d}"
            )
    _guard_cache[(n, cap)] = True
