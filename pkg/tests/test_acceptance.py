"""Acceptance criteria 1-7.

Each test prints one ``PASS``/``FAIL`` line (shown even under capture) and
then asserts.  Tolerances are pinned below.  Run standalone with
``python3 tests/test_acceptance.py``.
"""

import json
import random
import sys
import time
from fractions import Fraction
from math import gcd
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parent.parent
if __name__ == "__main__":  # standalone run from a source checkout
    sys.path.insert(0, str(ROOT / "src"))

from tpc_invariants import cli, embed, jspace, kirby, lattice, lens  # noqa: E402
from tpc_invariants.errors import InfeasibleInput, NotUnimodular, SignatureObstruction  # noqa: E402
from tpc_invariants.jspace import SurfaceData  # noqa: E402
from tpc_invariants.kirby import LinkingPresentation, SpinStructureRep  # noqa: E402
from tpc_invariants.lattice import EVEN, ODD, FormDescriptor  # noqa: E402

# pinned limits
LIMIT_REFERENCE_VALUES = 1.0
LIMIT_CONGRUENCE = 30.0
CONGRUENCE_CASES = 500
LIMIT_LENS = 5.0
LENS_PMAX = 30
LIMIT_CONSTRUCTION = 60.0
CONSTRUCTION_CASES = 120
CONSTRUCTION_MMAX = 6
GOLDEN_RUNS = 3

DOC = ROOT / "demos" / "example_document.json"
GOLDEN = ROOT / "tests" / "golden" / "example_output.json"

_terminal = None


@pytest.fixture(autouse=True)
def _grab_terminal(capsys):
    global _terminal
    _terminal = capsys
    yield
    _terminal = None


def report(n, title, ok, detail, elapsed=None):
    t = "" if elapsed is None else f" [{elapsed:.2f}s]"
    line = f"acceptance {n} {'PASS' if ok else 'FAIL'}: {title}{t} {detail}"
    if _terminal is not None:
        with _terminal.disabled():
            print("\n" + line)
    else:
        print(line)
    return ok


def zero_spin(P):
    return SpinStructureRep((0,) * P.n)


def random_even(rng, max_n=8, bound=6):
    n = rng.randint(0, max_n)
    m = [[0] * n for _ in range(n)]
    for i in range(n):
        m[i][i] = 2 * rng.randint(-(bound // 2), bound // 2)
        for j in range(i):
            m[i][j] = m[j][i] = rng.randint(-bound, bound)
    return LinkingPresentation(m)


# 1 ---------------------------------------------------------------------------

def criterion_reference_values():
    t0 = time.perf_counter()
    empty = jspace.theta_tilde(kirby.EMPTY, SpinStructureRep(()), SurfaceData(()))
    got = {
        "theta standard": empty.theta.value,
        "theta mirror": jspace.act_J(empty, -1).theta.value,
        "mu(E8)": kirby.rohlin(kirby.E8, zero_spin(kirby.E8)),
        "mu(S2xS1)": [kirby.rohlin(kirby.S2xS1, s) for s in kirby.spin_structures(kirby.S2xS1)],
    }
    want = {"theta standard": -2, "theta mirror": 2, "mu(E8)": 8, "mu(S2xS1)": [0, 0]}
    elapsed = time.perf_counter() - t0
    ok = got == want and elapsed < LIMIT_REFERENCE_VALUES
    return ok, f"{got}", elapsed


# 2 ---------------------------------------------------------------------------

def criterion_congruence():
    rng = random.Random(20261016)
    t0 = time.perf_counter()
    bad = []
    checked = 0
    for case in range(CONGRUENCE_CASES):
        P = random_even(rng)
        F = SurfaceData([rng.randint(-5, 5) for _ in range(P.n)],
                        [rng.randint(-3, 3) for _ in range(P.n)])
        d = jspace.theta_tilde(P, zero_spin(P), F)
        b1 = kirby.invariants(P).b1_M
        descriptors = [d]
        # other spin structures through a correction surface with zero twists
        for s in kirby.spin_structures(P)[1:3]:
            a = [c + 2 * rng.randint(-2, 2) for c in s.c]
            descriptors.append(jspace.vary_spin(d, s, SurfaceData(a)))
        for e in descriptors:
            want = 2 * (1 + b1) - kirby.rohlin(P, e.spin)
            checked += 1
            if not e.theta.congruent(want, 4):
                bad.append((case, P.L, e.spin.c))
    elapsed = time.perf_counter() - t0
    ok = not bad and elapsed < LIMIT_CONGRUENCE
    return ok, f"{checked} descriptors over {CONGRUENCE_CASES} presentations, {len(bad)} violations", elapsed


# 3 ---------------------------------------------------------------------------

def criterion_zspace():
    rng = random.Random(3)
    t0 = time.perf_counter()
    problems = 0
    cases = 0
    for _ in range(150):
        P = random_even(rng, max_n=5, bound=5)
        F = SurfaceData([rng.randint(-4, 4) for _ in range(P.n)])
        d = jspace.theta_tilde(P, zero_spin(P), F)
        m = d.orbit_order
        cases += 1
        for k in (-3, -1, 1, 2, 7):
            j, w = jspace.act_J(d, k), jspace.act_omega(d, k)
            if j.theta != d.theta + (-4 * k) or w.theta != d.theta + 4 * k:
                problems += 1
            if jspace.act_omega(j, k) != d:
                problems += 1
        window = 10 * m if m else 40
        orbit = {jspace.act_J(d, k).theta for k in range(window)}
        if len(orbit) != (m if m else window):
            problems += 1
        if m != lattice.divisibility(d.c1):
            problems += 1
    elapsed = time.perf_counter() - t0
    return problems == 0, f"{cases} descriptors, {problems} problems", elapsed


# 4 ---------------------------------------------------------------------------

def criterion_lens():
    t0 = time.perf_counter()
    problems = []
    count = 0
    for p in range(2, LENS_PMAX + 1, 2):
        for q in range(1, p):
            if gcd(p, q) != 1:
                continue
            count += 1
            cf = lens.even_cf(p, q)
            if cf.value() != Fraction(-p, q):
                problems.append((p, q, "reconstruction"))
            if len(cf.coeffs) % 2 == 0 or any(a % 2 for a in cf.coeffs):
                problems.append((p, q, "shape"))
            if abs(lattice.determinant(lens.chain_matrix(cf).L)) != p:
                problems.append((p, q, "det"))
            a, b = lens.rohlin_pair(p, q)
            diffs = {(a - b) % 16, (b - a) % 16}
            if cf.odd_sum % 16 not in diffs:
                problems.append((p, q, "difference"))
            if q == 1 and p % 16 not in diffs:
                problems.append((p, q, "circle bundle"))
    elapsed = time.perf_counter() - t0
    ok = not problems and elapsed < LIMIT_LENS
    return ok, f"{count} lens spaces, problems {problems[:5]}", elapsed


# 5 ---------------------------------------------------------------------------

def _random_unimodular(rng, n):
    u = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(3 * n):
        i, j = rng.randrange(n), rng.randrange(n)
        if i != j:
            c = rng.randint(-2, 2)
            u[i] = [x + c * y for x, y in zip(u[i], u[j])]
    return u


def criterion_lattice():
    rng = random.Random(5)
    t0 = time.perf_counter()
    problems = 0
    forms = 0
    while forms < 300:
        n = rng.randint(1, 8)
        # random unimodular forms: diagonal +-1 or E8/H blocks, congruent by GL(n, Z)
        kinds = []
        size = 0
        while size < n:
            k = rng.choice(["+", "-", "H"] + (["E8"] if n - size >= 8 else []))
            if k == "H" and n - size < 2:
                k = "+"
            kinds.append(k)
            size += {"+": 1, "-": 1, "H": 2, "E8": 8}[k]
        blocks = [[[1]] if k == "+" else [[-1]] if k == "-" else
                  lattice.HYPERBOLIC if k == "H" else lattice.E8_NEGATIVE for k in kinds]
        A0 = lattice.block_diag(*blocks)
        U = _random_unimodular(rng, len(A0))
        A = lattice.matmul(lattice.matmul(lattice.transpose(U), A0), U)
        forms += 1
        sigma = lattice.signature(A)
        c0, _ = kirby.gf2_solve([[x % 2 for x in row] for row in A], [A[i][i] % 2 for i in range(len(A))])
        for _ in range(4):
            c = [ci + 2 * rng.randint(-3, 3) for ci in c0]
            if not lattice.is_characteristic(c, A) or (lattice.quad(A, c) - sigma) % 8:
                problems += 1
            if lattice.char_square_defect(c, A) % 8:
                problems += 1
        desc = FormDescriptor.of(A)
        if desc.is_indefinite and desc.realizable:
            summands = lattice.classify_indefinite(desc)
            if lattice.summands_descriptor(summands) != desc:
                problems += 1
    try:
        lattice.char_square_defect([0], [[2]])
        problems += 1
    except NotUnimodular:
        pass
    # classification reconstructs, perp rejects sigma not 0 mod 16
    for bp in range(1, 8):
        for bm in range(1, 8):
            for par in (EVEN, ODD):
                desc = FormDescriptor(bp, bm, par)
                if par == EVEN and (bp - bm) % 8:
                    continue
                if lattice.summands_descriptor(lattice.classify_indefinite(desc)) != desc:
                    problems += 1
    rejected = 0
    for sub in [FormDescriptor(0, 8, EVEN), FormDescriptor(8, 0, EVEN), FormDescriptor(1, 9, EVEN)]:
        try:
            lattice.perp_complement(FormDescriptor(20, 20, EVEN), sub)
            problems += 1
        except SignatureObstruction:
            rejected += 1
    lattice.perp_complement(FormDescriptor(20, 20, EVEN), FormDescriptor(0, 16, EVEN))
    elapsed = time.perf_counter() - t0
    return problems == 0, f"{forms} unimodular forms, {rejected} obstructions raised, {problems} problems", elapsed


# 6 ---------------------------------------------------------------------------

def _random_target(rng, d, nM, m):
    spin = m % 2 == 0
    bound = embed.embedding_bound(embed.TargetSurface(1, 1, m, spin), nM)
    if spin:
        C = 2 * m * m * rng.randint(-2, 2)
        sigma = 16 * rng.randint(-2, 2)
    else:
        C = m * m * rng.randint(-8, 8)
        sigma = C % 8 + 8 * rng.randint(-3, 3)
    bm = bound + rng.randint(0, 6)
    bp = bm + sigma
    if bp < bound:
        bm += bound - bp
        bp = bound
    return embed.TargetSurface(bp, bm, m, spin, c1_squared=C)


def criterion_construction():
    rng = random.Random(6)
    t0 = time.perf_counter()
    verified = 0
    problems = []
    caveat_skips = 0
    tries = 0
    while verified < CONSTRUCTION_CASES and tries < 20 * CONSTRUCTION_CASES:
        tries += 1
        P = random_even(rng, max_n=4, bound=6)
        F = SurfaceData([rng.randint(-4, 4) for _ in range(P.n)])
        s = zero_spin(P)
        d = jspace.act_J(jspace.theta_tilde(P, s, F), rng.randint(-6, 6))
        ms = [m for m in range(1, CONSTRUCTION_MMAX + 1) if lattice.is_factor(m, d.c1)]
        m = rng.choice(ms)
        X = _random_target(rng, d, embed.n_M(P, F), m)
        try:
            cert = embed.construct_plan(P, s, F, d, X)
        except InfeasibleInput:
            blocked = embed.spin_caveat(d.c1.group, m) == "blocked"
            own = [r for r in embed.factor_spin_selection(d, m) if r.spin == s]
            if blocked and own and not own[0].passes:
                caveat_skips += 1
                continue
            problems.append(("infeasible", P.L, F.a, m))
            continue
        ok, _ = embed.check_certificate(cert)
        unit = m * m // 2 if X.spin else 2 * m * m
        if not ok or cert.tuning_blocks >= unit or cert.projective_blocks > 10:
            problems.append(("certificate", P.L, F.a, m))
        verified += 1
    # the caveat example: H1 = Z + Z/2, m = 4
    Q = LinkingPresentation([[0, 0], [0, 2]])
    caveat_ok = True
    for n in (1, 2, 3):
        bad = jspace.theta_tilde(Q, zero_spin(Q), SurfaceData((2 * n, 1)))
        good = jspace.theta_tilde(Q, zero_spin(Q), SurfaceData((2 * n, 0)))
        sel = {r.gamma.coords: r.passes for r in embed.factor_spin_selection(bad, 4)}
        X = embed.TargetSurface(60, 60, 4, True, c1_squared=0)
        caveat_ok &= embed.spin_caveat(bad.c1.group, 4) == "blocked"
        caveat_ok &= sel == {(2 * n, 1): False, (2 * n, 0): True}
        try:
            embed.construct_plan(Q, zero_spin(Q), SurfaceData((2 * n, 1)), bad, X)
            caveat_ok = False
        except InfeasibleInput:
            pass
        cert = embed.construct_plan(Q, zero_spin(Q), SurfaceData((2 * n, 0)), good, X)
        caveat_ok &= embed.check_certificate(cert)[0]
    elapsed = time.perf_counter() - t0
    ok = (not problems and caveat_ok and verified >= CONSTRUCTION_CASES
          and elapsed < LIMIT_CONSTRUCTION)
    detail = (f"{verified} certificates verified, {caveat_skips} caveat cases skipped, "
              f"caveat example {'ok' if caveat_ok else 'wrong'}, problems {problems[:3]}")
    return ok, detail, elapsed


# 7 ---------------------------------------------------------------------------

def criterion_golden():
    import contextlib
    import io as _io

    t0 = time.perf_counter()
    outputs = []
    for i in range(GOLDEN_RUNS):
        buf = _io.StringIO()
        with contextlib.redirect_stdout(buf):
            code = cli.main(["--json", "--jobs", str(1 + 3 * i), "--input", str(DOC)])
        outputs.append((code, buf.getvalue()))
    golden = GOLDEN.read_text(encoding="utf-8")
    same = all(o == (0, golden) for o in outputs)
    json.loads(golden)
    return same, f"{GOLDEN_RUNS} runs against {GOLDEN.name}", time.perf_counter() - t0


CRITERIA = [
    (1, "reference values", criterion_reference_values),
    (2, "congruence suite", criterion_congruence),
    (3, "Z-space suite", criterion_zspace),
    (4, "lens suite", criterion_lens),
    (5, "lattice suite", criterion_lattice),
    (6, "construction round trip", criterion_construction),
    (7, "CLI determinism", criterion_golden),
]


@pytest.mark.parametrize("n,title,fn", CRITERIA, ids=[f"criterion_{n}" for n, _, _ in CRITERIA])
def test_acceptance(n, title, fn):
    ok, detail, elapsed = fn()
    assert report(n, title, ok, detail, elapsed), detail


if __name__ == "__main__":
    results = [report(n, title, *fn()) for n, title, fn in CRITERIA]
    sys.exit(0 if all(results) else 1)
