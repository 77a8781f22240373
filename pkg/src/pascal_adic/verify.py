"""The acceptance suite: every criterion as a list of named, self-contained checks."""

from __future__ import annotations

import math
import time
from dataclasses import asdict, dataclass
from fractions import Fraction
from itertools import product

import numpy as np

from . import measures as M
from . import subdiagrams as S
from .diagram import Diagram, Edge, FinitePath, GenVertex, PascalVertex
from .orders import (
    barrier_order,
    canonical_order,
    continuum_order,
    countable_max_order,
    fiber_audit,
    horizontal_zero_segments,
    lift_subdiagram_order,
    max_branching_audit,
    minimal_prefix_count,
    mirrored_order,
)
from .orders.guides import branch_point_violations, merging_vertices, pairwise_intersections
from .orders.tree import tree_incoming_counts, tree_is_forest_of_root
from .vershik import AtExtreme, barrier_certificate, barrier_hit_dp, extreme_path_exists, fiber_orbit, predecessor, successor

F = Fraction
P = PascalVertex

SUITES = ("all", "measures", "orders", "extension", "bands")
DEFAULT_SEED = 20240611
MC_SAMPLES = 10**5


@dataclass
class CheckResult:
    criterion: int
    name: str
    passed: bool
    measured: str
    seconds: float = 0.0

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.criterion:>2} {self.name}: {self.measured} ({self.seconds:.2f}s)"

    def to_json(self) -> dict:
        return asdict(self)


def _timed(criterion: int, name: str, fn) -> CheckResult:
    t = time.perf_counter()
    passed, measured = fn()
    return CheckResult(criterion, name, bool(passed), measured, time.perf_counter() - t)


# -- 1, 2, 3: eigenpair measures ----------------------------------------------------


def check_eigen_identity(size: int = 200) -> tuple[bool, str]:
    # independent route: explicit incidence rows of the truncated one-sided diagram
    d = Diagram.gen1(1, hi=size)
    worst = []
    for lam in (F(5, 4), F(3, 2), F(7, 4), F(2), F(3)):
        xi = M.eigen_vector_one_sided(lam, size)
        bad = 0
        for m in range(1, size):
            row = [w.index for w, _ in d.children(GenVertex(m, 0))]
            if sum(xi[c - 1] for c in row) != lam * xi[m - 1]:
                bad += 1
        bad += sum(1 for r in M.eigen_residual_one_sided(lam, xi) if r != 0)
        worst.append(f"{lam}:{bad}")
    return all(w.endswith(":0") for w in worst), "nonzero residuals " + " ".join(worst)


def check_total_mass(terms: int = 60, tol: float = 1e-12) -> tuple[bool, str]:
    ok = True
    parts = []
    for lam in (F(5, 4), F(3, 2), F(9, 5)):
        t = M.mu_lambda_total(lam, terms)
        err = float(abs(t.closed_form - t.partial))
        ok &= err < tol
        parts.append(f"{lam}: |diff|={err:.3g}")
    for lam in (F(2), F(3)):
        t = M.mu_lambda_total(lam, terms)
        ok &= t.infinite
        parts.append(f"{lam}: infinite={t.infinite}")
    return ok, "; ".join(parts)


def check_restriction() -> tuple[bool, str]:
    parts = []
    ok = True
    for lam in (F(3, 2), F(4, 3)):
        for i in (1, 2, 3):
            r = M.restriction_check(lam, i, 12)
            ok &= r.ok
            parts.append(f"{lam}@{i}:{r.checked}")
    neg = M.restriction_check(F(3, 2), 1, 12, p=F(1, 2))
    ok &= not neg.ok
    return ok, "cylinders " + " ".join(parts) + f"; wrong-p control rejected={not neg.ok}"


# -- 4: extension limit ----------------------------------------------------------------


def check_extension(n_max: int = 200, tol: float = 1e-6) -> tuple[bool, str]:
    ok = True
    parts = []
    for p in (F(2, 3), F(3, 4), F(9, 10)):
        r = S.extension_value(1, p, range(n_max + 1))
        mono = all(a <= b for a, b in zip(r.values, r.values[1:]))
        target = p / (2 * p - 1)
        diff = float(abs(r.values[-1] - target))
        ok &= mono and diff < tol and not r.diverged
        parts.append(f"p={p}: limit={target} |diff|={diff:.2e} monotone={mono}")
    r = S.extension_value(1, F(2, 5), range(n_max + 1))
    ok &= r.diverged
    parts.append(f"p=2/5: diverged={r.diverged}")
    return ok, "; ".join(parts)


# -- 5: extreme-set measure ---------------------------------------------------------------


def check_x_min() -> tuple[bool, str]:
    exact = all(M.x_min_level_measure(F(1, 2), n) == F(n + 1, 2**n) for n in range(31))
    orders = [canonical_order(Diagram.pascal(8)), mirrored_order(Diagram.pascal(8)), countable_max_order(8)]
    indep = True
    for p in (F(1, 3), F(1, 2), F(2, 3)):
        for n in range(9):
            want = M.x_min_level_measure(p, n)
            for o in orders:
                got = sum(
                    (M.bernoulli_cylinder(p, o.extreme_path(v, "min")) for v in o.diagram.level_vertices(n)),
                    F(0),
                )
                indep &= got == want
    decay = True
    last = {}
    for p in (F(1, 3), F(1, 2), F(2, 3)):
        vals = [M.x_min_level_measure(p, n) for n in range(61)]
        decay &= all(b < a for a, b in zip(vals[1:], vals[2:])) and vals[60] < F(1, 10**6)
        last[str(p)] = f"{float(vals[60]):.2e}"
    return exact and indep and decay, f"(n+1)/2^n exact={exact}; order-independent={indep}; level-60 values {last}"


# -- 6: tail invariance and consistency ----------------------------------------------------


def check_tail_invariance(depth: int = 10) -> tuple[bool, str]:
    pas = Diagram.pascal(depth)
    bad = 0
    checked = 0
    for p in (F(1, 3), F(1, 2), F(2, 3)):
        for n in range(depth + 1):
            for v in pas.level_vertices(n):
                paths = pas.enumerate_paths(v)
                checked += len(paths)
                bad += len(M.tail_invariance_violations(lambda x: M.bernoulli_cylinder(p, x), paths))
                if n < depth:
                    for x in paths:
                        refined = [FinitePath(x.vertices + (w,)) for w, _ in pas.children(v)]
                        if M.bernoulli_cylinder(p, x) != sum(M.bernoulli_cylinder(p, y) for y in refined):
                            bad += 1
    lam = F(3, 2)
    gen = Diagram.gen1(depth, hi=depth + 3)

    def mu(x):
        return M.mu_lambda_cylinder(lam, x.end.index, x.end.level)

    for n in range(depth + 1):
        for m in range(1, 4):
            v = GenVertex(m, n)
            paths = gen.enumerate_paths(v)
            checked += len(paths)
            bad += len(M.tail_invariance_violations(mu, paths))
            if n < depth:
                for x in paths:
                    refined = [FinitePath(x.vertices + (w,)) for w, _ in gen.children(v)]
                    if mu(x) != sum(mu(y) for y in refined):
                        bad += 1
    return bad == 0, f"{checked} cylinders, {bad} violations"


# -- 7: Vershik towers ----------------------------------------------------------------------


def _tower_orders(depth: int):
    pas = Diagram.pascal(depth)
    gen = Diagram.gen1(depth, hi=depth + 2)
    return [
        canonical_order(pas),
        countable_max_order(max(depth, 4)),
        lift_subdiagram_order(gen, countable_max_order(max(depth, 4)), 1),
    ]


def check_towers(depth: int = 8) -> tuple[bool, str]:
    bad = 0
    verts = 0
    for o in _tower_orders(depth):
        d = o.diagram
        for n in range(depth + 1):
            vs = d.level_vertices(n) if d.is_pascal else [GenVertex(m, n) for m in range(1, 4)]
            for v in vs:
                verts += 1
                chain = fiber_orbit(o, v)
                paths = d.enumerate_paths(v)
                if len(chain) != d.path_count(v) or len(set(chain)) != len(chain) or set(chain) != set(paths):
                    bad += 1
                for x in chain[:-1]:
                    if predecessor(o, successor(o, x)) != x:
                        bad += 1
                for x in chain[1:]:
                    if successor(o, predecessor(o, x)) != x:
                        bad += 1
                if successor(o, chain[-1]) is not AtExtreme.MAXIMAL or predecessor(o, chain[0]) is not AtExtreme.MINIMAL:
                    bad += 1
    return bad == 0, f"{verts} towers over 3 orders, {bad} failures"


# -- 8: countable-max order ----------------------------------------------------------------


def criterion8_checks(depth: int = 64) -> list[CheckResult]:
    o = countable_max_order(depth)
    d = o.diagram
    out = []

    def fibers():
        a = fiber_audit(o)
        return a.ok, f"{a.checked} fibers, {len(a.violations)} violations"

    def tree():
        counts = tree_incoming_counts(depth)
        ok = tree_is_forest_of_root(depth) and max(counts.values()) <= 1
        return ok, f"connected from origin, max incoming tree edges {max(counts.values())}"

    def even_verticals():
        bad = [
            (i, j)
            for i in range(depth)
            for j in range(0, depth - i, 2)
            if i + j + 1 <= depth and o.label(Edge(P(i, j), P(i, j + 1))) != 0
        ]
        return not bad, f"{len(bad)} edges ((i,2j),(i,2j+1)) not labeled 0"

    def segments():
        worst = max(len(horizontal_zero_segments(o, y)) for y in range(depth))
        return worst <= 1, f"max 0-segments per row {worst}"

    def prefixes():
        a = minimal_prefix_count(o, 4, 16)
        b = minimal_prefix_count(o, 16, 64)
        return a >= 2 and b >= 4, f"minimalPrefixCount(4,16)={a}, (16,64)={b}"

    rep = max_branching_audit(o)
    rep1 = max_branching_audit(o, label_one_only=True)

    def branching():
        return rep.max_per_path <= 2, (
            f"{len(rep.branching_vertices)} branching vertices, max per maximal path {rep.max_per_path} "
            f"(witness ends at {rep.witness[-1]}); with two 1-labeled out-edges only: "
            f"{len(rep1.branching_vertices)} vertices, max per path {rep1.max_per_path}"
        )

    def turns():
        return rep.max_turns_per_path <= 2, f"max direction changes at branching vertices per maximal path {rep.max_turns_per_path}"

    out.append(_timed(8, "thm42 fiber consistency", fibers))
    out.append(_timed(8, "thm42 tree structure", tree))
    out.append(_timed(8, "thm42 even vertical edges labeled 0", even_verticals))
    out.append(_timed(8, "thm42 one 0-segment per horizontal line", segments))
    out.append(_timed(8, "thm42 minimal prefix growth", prefixes))
    out.append(_timed(8, "thm42 at most two branching points per maximal path", branching))
    out.append(_timed(8, "thm42 at most two turns per maximal path (supplementary)", turns))
    return out


# -- 9: continuum order --------------------------------------------------------------------


def criterion9_checks(depth: int = 512, level: int = 1, tag: str = "") -> list[CheckResult]:
    c = continuum_order(depth, level)
    g = c.guides
    prefix = f"thm41 L={level} depth={depth}{tag}"

    def intersections():
        worst = max((len(s) for s in pairwise_intersections(g).values()), default=0)
        merges = merging_vertices(g)
        branch = branch_point_violations(g)
        return worst <= 1 and not merges and not branch, (
            f"{len(g)} guides, max pairwise intersection {worst}, merges {len(merges)}, off-parent starts {len(branch)}"
        )

    def band():
        worst = max(gp.max_band_distance() for gp in g.values())
        return worst < 2, f"max distance to ray past stabilization {worst:.4f}"

    def separation():
        seps = [s.separation for s in c.steps]
        return all(s >= 5 for s in seps), f"separations {[round(s, 2) for s in seps]}"

    def disjoint():
        zv = {v for e in c.zero_edges for v in e}
        ov = {v for e in c.one_edges for v in e}
        shared_e = c.zero_edges & c.one_edges
        shared_v = zv & ov
        return not shared_e and not shared_v, f"shift N={c.shift}, shared edges {len(shared_e)}, shared vertices {len(shared_v)}"

    def fibers():
        a = fiber_audit(c.order)
        return a.ok, f"{a.checked} fibers, {len(a.violations)} violations"

    return [
        _timed(9, f"{prefix} guide intersections", intersections),
        _timed(9, f"{prefix} band condition", band),
        _timed(9, f"{prefix} separation", separation),
        _timed(9, f"{prefix} shifted copies disjoint", disjoint),
        _timed(9, f"{prefix} fiber consistency", fibers),
    ]


# -- 10: barriers --------------------------------------------------------------------------

G_TABLE = {(0, 0): 1, (0, 1): 2, (1, 0): 3}


def _exhaustive_hit(barrier_edges, start: int, level: int) -> bool:
    edges = set(barrier_edges)
    for steps in product((0, 1), repeat=level):
        m = start
        hit = False
        for k, s in enumerate(steps):
            e = Edge(GenVertex(m, k), GenVertex(m + s, k + 1))
            hit |= e in edges
            m += s
        if not hit:
            return False
    return True


def check_barriers() -> tuple[bool, str]:
    d = Diagram.gen2(56, -2, 40)
    order, barriers = barrier_order(d, G_TABLE)
    res = {(b.n, b.i): barrier_certificate(barriers, d, b.n, b.i).hit_all for b in barriers}
    ok = len(res) == 3 and all(res.values())
    b0 = next(b for b in barriers if b.K == 3)
    dp7 = barrier_hit_dp(d, b0.edges, 0, 7).hit_all
    ex7 = _exhaustive_hit(b0.edges, 0, 7)
    ok &= dp7 == ex7
    corrupted = [e for e in b0.edges if e != Edge(GenVertex(1, 4), GenVertex(1, 5))]
    neg = barrier_hit_dp(d, corrupted, 0, 8)
    ok &= not neg.hit_all and neg.witness is not None and not set(neg.witness.edges) & set(corrupted)
    a = fiber_audit(order)
    ok &= a.ok
    # no maximal path of length 2K(0,0)+2 and no minimal one of length 2K(0,1)+2
    no_max = not extreme_path_exists(order, 0, "max", 8)
    no_min = not extreme_path_exists(order, 0, "min", 20)
    ok &= no_max and no_min
    return ok, (
        f"DP {res}; K=3 DP={dp7} exhaustive(2^7)={ex7}; corrupted escapes={not neg.hit_all}; "
        f"fibers ok={a.ok}; no max path to 8={no_max}, no min path to 20={no_min}"
    )


# -- 11: bands -----------------------------------------------------------------------------


def _mc_band_frequency(spec: S.BandSpec, depth: int, count: int, seed: int) -> float:
    steps = M.sample_steps(spec.p, depth, count, seed)
    x = np.cumsum(steps, axis=1, dtype=np.int64)
    a, b = spec.p.p.numerator, spec.p.p.denominator
    ok = np.ones(count, dtype=bool)
    for k in range(1, depth + 1):
        i = spec.active_band(k)
        if i is None:
            continue
        # |x/k - a/b| < 2^(1-i)  <=>  |b x - a k| 2^i < 2 b k
        ok &= np.abs(b * x[:, k - 1] - a * k) * 2**i < 2 * b * k
    return float(ok.mean())


def check_bands(depth: int = 200, seed: int = DEFAULT_SEED, samples: int = MC_SAMPLES) -> list[CheckResult]:
    eps = F(1, 10)
    specs = {}
    subs = {}

    def measure():
        parts = []
        ok = True
        for p in (F(3, 10), F(1, 2), F(7, 10)):
            sub, spec = S.build_band_subdiagram(p, eps, depth)
            subs[p], specs[p] = sub, spec
            m = S.band_measure_dp(p, spec, depth)
            ok &= m > F(9, 10) and all(sub.is_interval(n) for n in range(depth + 1))
            parts.append(f"p={p}: {float(m):.6f} N={spec.thresholds}")
        return ok, "; ".join(parts)

    def disjoint(dep):
        def run():
            dj = S.band_disjointness(F(3, 10), F(7, 10), 4)
            a, sa = S.build_band_subdiagram(F(3, 10), eps, dep)
            b, sb = S.build_band_subdiagram(F(7, 10), eps, dep)
            start = max(sa.thresholds[3], sb.thresholds[3])
            shared = [n for n in range(start + 1, dep + 1) if set(a.W[n]) & set(b.W[n])]
            levels = max(0, dep - start)
            return dj.disjoint and dj.least_index == 4 and not shared, (
                f"disjoint at i=4: {dj.disjoint}, least i {dj.least_index}; "
                f"levels beyond N_4={start} within depth {dep}: {levels}, shared {len(shared)}"
            )

        return run

    def monte_carlo():
        parts = []
        ok = True
        for p, spec in specs.items():
            m = float(S.band_measure_dp(p, spec, depth))
            freq = _mc_band_frequency(spec, depth, samples, seed)
            sigma = math.sqrt(max(m * (1 - m), 1e-12) / samples)
            z = abs(freq - m) / sigma
            ok &= z <= 3
            parts.append(f"p={p}: mc={freq:.5f} dp={m:.5f} z={z:.2f}")
        return ok, "; ".join(parts)

    return [
        _timed(11, f"band measure > 0.9 at depth {depth}", measure),
        _timed(11, f"band disjointness at depth {depth}", disjoint(depth)),
        _timed(11, "band disjointness at depth 400 (supplementary)", disjoint(400)),
        _timed(11, f"Monte Carlo vs DP ({samples} paths, seed {seed})", monte_carlo),
    ]


# -- 12: two-sided eigenvector ------------------------------------------------------------


def check_two_sided() -> tuple[bool, str]:
    half = M.eigen_vector_two_sided(F(1, 2), (-50, 50))
    twothirds = M.eigen_vector_two_sided(F(2, 3), (-50, 50))
    ones = all(v == 1 for v in half.values.values()) and half.lam == 2
    ok = half.identity_holds and twothirds.identity_holds and ones and twothirds.lam == F(3, 2)
    return ok, (
        f"identity p=1/2: {half.identity_holds}, p=2/3: {twothirds.identity_holds}; "
        f"all-ones at 1/2: {ones}; lambda {half.lam}, {twothirds.lam}"
    )


# -- runner --------------------------------------------------------------------------------


def run_suite(suite: str = "all", slow: bool = False, seed: int = DEFAULT_SEED) -> list[CheckResult]:
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; choose from {SUITES}")
    out: list[CheckResult] = []
    want = (lambda s: True) if suite == "all" else (lambda s: s == suite)
    if want("measures"):
        out.append(_timed(1, "eigen identity, sizes up to 200", check_eigen_identity))
        out.append(_timed(2, "total mass within 1e-12 by 60 terms", check_total_mass))
        out.append(_timed(3, "restriction identity to depth 12", check_restriction))
    if want("extension"):
        out.append(_timed(4, "extension limit by n = 200", check_extension))
    if want("measures"):
        out.append(_timed(5, "minimal-path level measure", check_x_min))
        out.append(_timed(6, "tail invariance and consistency to depth 10", check_tail_invariance))
    if want("orders"):
        out.append(_timed(7, "Vershik towers to depth 8", check_towers))
        out += criterion8_checks()
        out += criterion9_checks(512, 1)
        if slow:
            out += criterion9_checks(2048, 2, " (slow)")
        out.append(_timed(10, "barrier certificates", check_barriers))
    if want("bands"):
        out += check_bands(seed=seed)
    if want("measures"):
        out.append(_timed(12, "two-sided eigenvector on [-50, 50]", check_two_sided))
    return sorted(out, key=lambda r: r.criterion)
