"""Command-line front end.

Four subcommands: `solve` builds a rational associator degree by degree
and writes it to a JSON file; `verify` runs one of the named verification
suites against an associator file and emits a machine-readable report;
`gamma` prints the zeta table of an associator; `braid` exposes the exact
braid-word computations (Artin images, the conjugation action, cabling).

Reports are deterministic given inputs and seed (wall time aside), checks
are sorted by id, and the schema ships with the package.  Exit codes:
0 all checks pass, 1 at least one check failed, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time
from fractions import Fraction

from . import __version__
from .associators import (
    Associator,
    CheckResult,
    GRTElement,
    GTElement,
    act_grt,
    act_gt,
    bernoulli_check,
    check_grt1,
    check_gt1,
    check_m1,
    element_between,
    gamma_of_f,
    gamma_of_phi,
    solve_associator,
)
from .braids import (
    BraidWord,
    PBWord,
    ParenWord,
    ad_pb,
    all_trees,
    artin_action,
    braid_from_text,
    braid_to_text,
    cabling,
    check_centralizer_pb,
    check_pb_relations,
    FreeWord,
    gt_cochain_identity_check,
    jacobian_alpha_O,
    jacobian_mu_O,
    leaf_doubling_check,
    malcev_taut,
    right_comb,
    telescopic_factors,
    telescopic_mu,
    mu_O,
)
from .drinfeld_kohno import ad_kernel_guard, centralizer_t, dim_tn
from .free_lie import LieElement, lyndon_words
from .kv import (
    ABPair,
    alpha_of_f,
    a_of_g,
    check_kv1,
    check_kv3,
    check_krv_group,
    check_kv_group,
    check_solkv,
    check_solkv_n,
    cochain_identity_check,
    kv_equations_pair,
    mu_of_phi,
    s_family,
    symmetry_check,
)
from .series import frac_to_str
from .tangential import TangAut, TangDer, taut_exp
from .traces import (
    delta_exactness_dims,
    divergence,
    jacobian,
    trace_act,
)

SUITES = ("kv", "torsor", "braid", "cocycle", "centralizer", "all")

# multi-strand suites default to degree 5, two-letter suites to 8
DEFAULT_DEGREE = {"kv": 8, "torsor": 5, "braid": 5, "cocycle": 5, "centralizer": 5}


class Check:
    def __init__(self, id: str, anchor: str, ok: bool, first_failure_degree=None, witness=None):
        self.id = id
        self.anchor = anchor
        self.ok = ok
        self.first_failure_degree = first_failure_degree
        self.witness = witness

    @classmethod
    def wrap(cls, id: str, anchor: str, result: CheckResult, witness=None):
        return cls(id, anchor, result.ok, result.first_failure_degree, witness)

    def to_json(self) -> dict:
        out = {"id": self.id, "anchor": self.anchor, "status": "pass" if self.ok else "fail"}
        if self.first_failure_degree is not None:
            out["first_failure_degree"] = self.first_failure_degree
        if self.witness is not None:
            out["witness"] = self.witness
        return out


def _report(command: str, cap: int, seed, checks: list[Check], t0: float) -> dict:
    return {
        "version": __version__,
        "command": command,
        "cap": cap,
        "seed": seed,
        "wall_time_s": round(time.time() - t0, 3),
        "checks": [c.to_json() for c in sorted(checks, key=lambda c: c.id)],
    }


def _load_associator(path: str) -> Associator:
    with open(path) as fh:
        return Associator.from_payload(json.load(fh))


def _rand_tder(letters: int, cap: int, rng: random.Random) -> TangDer:
    parts = []
    for k in range(1, letters + 1):
        coords = {}
        for d in range(1, cap):
            words = lyndon_words(letters, d)
            coords[rng.choice(words)] = Fraction(rng.randint(-2, 2), rng.randint(1, 3))
        parts.append(LieElement(letters, cap, coords))
    return TangDer(letters, cap, parts)


# ---------------------------------------------------------------------------
# suites


def suite_kv(phi: Associator, cap: int, rng: random.Random) -> list[Check]:
    from .kv import grading_conjugate_defect, mu_aut_of_phi

    phi = Associator(phi.log.with_cap(cap), even=phi.even)
    checks = []
    for r in check_m1(phi):
        checks.append(Check.wrap(f"kv.m1.{r.name}", r.name, r))
    try:
        log_gamma, zetas = gamma_of_phi(phi)
        checks.append(Check("kv.gamma.identity", "gamma-function", True))
        checks.append(
            Check(
                "kv.gamma.bernoulli",
                "even-zeta-values",
                bernoulli_check(zetas, cap),
                witness={"zeta": [frac_to_str(z) for z in zetas]},
            )
        )
    except RuntimeError as exc:
        log_gamma = None
        checks.append(Check("kv.gamma.identity", "gamma-function", False, witness=str(exc)))
    mu = mu_aut_of_phi(phi)
    ok, duf, res = check_solkv(mu)
    checks.append(Check.wrap("kv.solkv", "kv-predicate", res))
    checks.append(Check("kv.duflo", "duflo-series", ok and log_gamma is not None and duf == -log_gamma))
    checks.append(Check.wrap("kv.cochain", "cochain-identity", cochain_identity_check(phi)))
    if ok and duf is not None:
        defect = -grading_conjugate_defect(mu.inverse())
        pair = ABPair(defect.parts[0], defect.parts[1])
        checks.append(Check.wrap("kv.kv1", "kv1", check_kv1(pair)))
        sym_pair = ABPair(-pair.a, -pair.b)
        sym_defect = TangDer(2, defect.cap, [-p for p in defect.parts])
        checks.append(Check.wrap("kv.kv3", "kv3", check_kv3(sym_defect, duf)))
        for s in (1, Fraction(-1, 4)):
            checks.append(Check.wrap(f"kv.kv1.s={s}", "kv1-family", check_kv1(s_family(pair, s))))
        checks.append(
            Check.wrap(
                "kv.symmetry", "swap-symmetry", symmetry_check(s_family(sym_pair, Fraction(-1, 4)))
            )
        )
    else:
        checks.append(Check("kv.kv1", "kv1", False, witness="skipped: predicate failed"))
    return checks


def suite_torsor(phi: Associator, cap: int, rng: random.Random) -> list[Check]:
    phi = Associator(phi.log.with_cap(cap), even=phi.even)
    phi2 = solve_associator(cap, even=False, tiebreak="ones")
    checks = [Check("torsor.distinct", "torsor-freedom", phi2.log != phi.log)]
    g = element_between(phi, phi2, "grt")
    f = element_between(phi, phi2, "gt")
    checks.append(Check("torsor.grt.roundtrip", "torsor-transitivity", act_grt(phi, g).log == phi2.log))
    checks.append(Check("torsor.gt.roundtrip", "torsor-transitivity", act_gt(f, phi).log == phi2.log))
    for r in check_grt1(g):
        checks.append(Check.wrap(f"torsor.{r.name}", r.name, r))
    for r in check_gt1(f):
        checks.append(Check.wrap(f"torsor.{r.name}", r.name, r))
    alpha = alpha_of_f(f)
    ok_a, sigma, _ = check_kv_group(alpha)
    checks.append(Check("torsor.alpha-in-kv", "kv-group", ok_a))
    ag = a_of_g(g)
    ok_b, _, _ = check_krv_group(ag)
    checks.append(Check("torsor.a-in-krv", "krv-group", ok_b))
    sol = mu_of_phi(phi)
    sol2 = mu_of_phi(phi2)
    checks.append(Check("torsor.compat.gt", "action-compatibility", sol2.mu == sol.mu.compose(alpha)))
    checks.append(Check("torsor.compat.grt", "action-compatibility", sol2.mu == ag.compose(sol.mu)))
    if ok_a and sigma is not None:
        ok3, r3, _ = check_solkv(sol.mu.compose(alpha))
        checks.append(Check("torsor.duflo-additivity", "duflo-bookkeeping", ok3 and r3 == sol.duflo + sigma))
    lg_f = gamma_of_f(f)
    lg1, _ = gamma_of_phi(phi, verify=False)
    lg2, _ = gamma_of_phi(phi2, verify=False)
    checks.append(Check("torsor.gamma-product", "gamma-product-rule", lg2 == lg_f + lg1))
    c22 = gt_cochain_identity_check(f, min(cap, 4))
    checks.append(Check.wrap("torsor.gt-cochain", "gt-cochain-identity", c22))
    _, _, ok84 = jacobian_alpha_O(f, ParenWord.from_text("(••)•"), min(cap, 4))
    checks.append(Check("torsor.gt-jacobian", "gt-jacobian-closed-form", ok84))
    return checks


def suite_braid(phi: Associator, cap: int, rng: random.Random) -> list[Check]:
    phi = Associator(phi.log.with_cap(cap), even=phi.even)
    checks = []
    for n in (3, 4):
        ok = all(r.ok for r in check_pb_relations(n))
        ok_ad = all(
            all(im == FreeWord.gen(n - 1, k) for k, im in enumerate(ad_pb(rel), start=1))
            for _, rel in __import__("assockv.braids", fromlist=["pb_relators"]).pb_relators(n)
        )
        checks.append(Check(f"braid.relators.n{n}", "pure-braid-presentation", ok and ok_ad))
    pairs4 = [(i, j) for j in range(2, 5) for i in range(1, j)]
    ok = True
    for _ in range(10):
        w = PBWord(4, tuple((rng.choice(pairs4), rng.choice((1, -1))) for _ in range(4)))
        if not jacobian(malcev_taut(w, min(cap, 5))).is_zero():
            ok = False
    checks.append(Check("braid.jacobian-vanishes", "conjugation-jacobian", ok))
    small_cap = min(cap, 4)
    ok = all(
        leaf_doubling_check(phi, o, i, small_cap).ok
        for size in (2, 3)
        for o in all_trees(size)
        for i in range(1, size)
    )
    checks.append(Check("braid.leaf-doubling", "leaf-doubling-identity", ok))
    o9 = ParenWord.from_text("(((••)(••))(•(••)))(••)")
    expect = [
        ((1, 2, 3, 4, 5, 6, 7), (8, 9)),
        ((1, 2, 3, 4), (5, 6, 7)),
        ((8,), (9,)),
        ((1, 2), (3, 4)),
        ((5,), (6, 7)),
        ((1,), (2,)),
        ((3,), (4,)),
        ((6,), (7,)),
    ]
    checks.append(Check("braid.telescopic-shape", "telescopic-product", telescopic_factors(o9) == expect))
    o3 = ParenWord.from_text("(••)•")
    tele = telescopic_mu(phi, o3, min(cap, 3))
    route = mu_O(phi, ParenWord.pair(ParenWord.leaf(), o3), min(cap, 3))
    checks.append(Check("braid.telescopic-agrees", "telescopic-product", tele == route))
    okn, _, _ = check_solkv_n(tele)
    checks.append(Check("braid.solkv-n", "higher-kv-predicate", okn))
    _, _, okj = jacobian_mu_O(phi, right_comb(3), min(cap, 4))
    checks.append(Check("braid.jacobian-closed-form", "jacobian-closed-form", okj))
    return checks


def suite_cocycle(phi: Associator, cap: int, rng: random.Random) -> list[Check]:
    cap = min(cap, 5)
    checks = []
    ok_j = ok_J = True
    for _ in range(12):
        n = rng.choice((2, 2, 3))
        u, v = _rand_tder(n, cap, rng), _rand_tder(n, cap, rng)
        if divergence(u.bracket(v)) != trace_act(u, divergence(v)) - trace_act(v, divergence(u)):
            ok_j = False
        g, h = taut_exp(u), taut_exp(v)
        if jacobian(h.compose(g)) != jacobian(h) + trace_act(h, jacobian(g)):
            ok_J = False
    checks.append(Check("cocycle.divergence", "divergence-cocycle", ok_j))
    checks.append(Check("cocycle.jacobian", "jacobian-cocycle", ok_J))
    ok = True
    for d in range(1, min(cap, 6) + 1):
        ker, im = delta_exactness_dims(d, d)
        if ker != im:
            ok = False
    checks.append(Check("cocycle.exactness", "degree-two-acyclicity", ok))
    return checks


def suite_centralizer(phi: Associator, cap: int, rng: random.Random) -> list[Check]:
    cap = min(cap, 5)
    checks = []
    for n in (3, 4):
        for r in check_centralizer_pb(n, min(cap, 4 if n == 4 else 5), rng):
            checks.append(Check.wrap(f"centralizer.{r.name}", "centralizer", r))
    try:
        ad_kernel_guard(3, min(cap, 5))
        ad_kernel_guard(4, min(cap, 4))
        checks.append(Check("centralizer.kernel-guard", "adjoint-kernel", True))
    except RuntimeError as exc:
        checks.append(Check("centralizer.kernel-guard", "adjoint-kernel", False, witness=str(exc)))
    return checks


SUITE_FUNCS = {
    "kv": suite_kv,
    "torsor": suite_torsor,
    "braid": suite_braid,
    "cocycle": suite_cocycle,
    "centralizer": suite_centralizer,
}


# ---------------------------------------------------------------------------
# commands


def cmd_solve(args) -> int:
    t0 = time.time()
    if args.degree < 2:
        print("error: --degree must be at least 2", file=sys.stderr)
        return 2
    try:
        phi = solve_associator(args.degree, even=args.even, tiebreak=args.tiebreak)
    except Exception as exc:
        print(f"error: solver failed: {exc}", file=sys.stderr)
        return 1
    payload = phi.to_payload()
    text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    _, zetas = gamma_of_phi(phi, verify=False)
    print(f"# associator solved to degree {args.degree} in {time.time()-t0:.2f}s", file=sys.stderr)
    for n, z in enumerate(zetas, start=2):
        print(f"# zeta({n}) = {frac_to_str(z)}", file=sys.stderr)
    return 0


def cmd_verify(args) -> int:
    t0 = time.time()
    try:
        phi = _load_associator(args.associator)
    except Exception as exc:
        print(f"error: cannot load associator: {exc}", file=sys.stderr)
        return 2
    suites = list(SUITE_FUNCS) if args.suite == "all" else [args.suite]
    checks: list[Check] = []
    seed = args.seed
    for name in suites:
        cap = args.degree if args.degree is not None else min(phi.cap, DEFAULT_DEGREE[name])
        if cap > phi.cap:
            print(f"error: requested degree {cap} exceeds the file cap {phi.cap}", file=sys.stderr)
            return 2
        rng = random.Random(seed)
        try:
            checks.extend(SUITE_FUNCS[name](phi, cap, rng))
        except Exception as exc:  # a crash counts as a failed check, not a usage error
            checks.append(Check(f"{name}.exception", "suite-execution", False, witness=str(exc)))
    report = _report("verify " + args.suite, args.degree or phi.cap, seed, checks, t0)
    print(json.dumps(report, indent=2))
    return 0 if all(c.ok for c in checks) else 1


def cmd_gamma(args) -> int:
    try:
        phi = _load_associator(args.associator)
    except Exception as exc:
        print(f"error: cannot load associator: {exc}", file=sys.stderr)
        return 2
    log_gamma, zetas = gamma_of_phi(phi)
    rows = [("n", "zeta(n)", "log-gamma coefficient")]
    for n, z in enumerate(zetas, start=2):
        rows.append((str(n), frac_to_str(z), frac_to_str(log_gamma.coeff(n))))
    width = [max(len(r[c]) for r in rows) for c in range(3)]
    for r in rows:
        print("  ".join(r[c].ljust(width[c]) for c in range(3)))
    print("bernoulli check:", "pass" if bernoulli_check(zetas, phi.cap) else "fail")
    return 0 if bernoulli_check(zetas, phi.cap) else 1


def _parse_braid_arg(args):
    if args.file:
        with open(args.file) as fh:
            return braid_from_text(fh.read())
    if args.word is None or args.strands is None:
        raise ValueError("need --word together with --strands, or --file")
    return braid_from_text(f"strands: {args.strands}\n{args.word}\n")


def cmd_braid(args) -> int:
    try:
        word = _parse_braid_arg(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.action == "artin":
        braid = word.to_braid() if isinstance(word, PBWord) else word
        for k, img in enumerate(artin_action(braid), start=1):
            print(f"X{k} -> {img}")
        return 0
    if args.action == "ad":
        if not isinstance(word, PBWord):
            print("error: the conjugation action needs a pure-braid word (x-tokens)", file=sys.stderr)
            return 2
        if args.cap:
            payload = malcev_taut(word, args.cap).to_payload()
            print(json.dumps(payload, sort_keys=True, indent=2))
        else:
            for k, img in enumerate(ad_pb(word), start=1):
                print(f"X{k} -> {img}")
        return 0
    if args.action == "cable":
        if not isinstance(word, PBWord):
            print("error: cabling needs a pure-braid word (x-tokens)", file=sys.stderr)
            return 2
        try:
            mult = tuple(int(x) for x in args.multiplicities.split(","))
            out = cabling(word, mult)
        except Exception as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
        sys.stdout.write(braid_to_text(out))
        return 0
    print(f"error: unknown action {args.action}", file=sys.stderr)
    return 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="assockv", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve for a rational associator")
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--even", action=argparse.BooleanOptionalAction, default=True)
    p.add_argument("--tiebreak", choices=("zero", "ones"), default="zero")
    p.add_argument("--out", type=str, default=None)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="run a verification suite against an associator file")
    p.add_argument("--suite", choices=SUITES, required=True)
    p.add_argument("--associator", type=str, required=True)
    p.add_argument("--degree", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("gamma", help="print the zeta table of an associator")
    p.add_argument("--associator", type=str, required=True)
    p.set_defaults(func=cmd_gamma)

    p = sub.add_parser("braid", help="exact braid-word computations")
    p.add_argument("--action", choices=("ad", "artin", "cable"), required=True)
    p.add_argument("--word", type=str, default=None)
    p.add_argument("--strands", type=int, default=None)
    p.add_argument("--file", type=str, default=None)
    p.add_argument("--multiplicities", type=str, default="")
    p.add_argument("--cap", type=int, default=None)
    p.set_defaults(func=cmd_braid)
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
