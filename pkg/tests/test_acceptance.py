"""Acceptance criteria, one test each, at the stated workloads, tolerances and runtime bounds.

Run with ``python3 -m pytest tests/test_acceptance.py`` (the PASS/FAIL lines appear in
the terminal summary) or directly with ``python3 tests/test_acceptance.py``.
"""

from __future__ import annotations

import math
import random
import sys
import time
from fractions import Fraction as F
from pathlib import Path

import mpmath
import pytest

sys.path.insert(0, str(Path(__file__).parent))

import oracles  # noqa: E402

from infinitesimal import smooth as s  # noqa: E402
from infinitesimal.cli import Session  # noqa: E402
from infinitesimal.fermat import (  # noqa: E402
    FermatReal,
    compare,
    dt,
    exact_sample_index,
    graph_points,
    nilpotent_power_is_zero,
    order,
    pow_int,
    power_product_order,
    separation_delta,
    sign_crossover_index,
    st,
)
from infinitesimal.opensets import (  # noqa: E402
    OpenSet,
    int_diff,
    intersect,
    member_ext,
    project_exists,
    project_forall,
    union,
)
from infinitesimal.plot import emit_plot  # noqa: E402
from infinitesimal.realsets import RealSet  # noqa: E402
from infinitesimal.ultrapower import (  # noqa: E402
    EpSet,
    FilterOracle,
    Hyper,
    HyperFrac,
    PowerSum,
    Strategy,
    check_filter_axioms,
    frac_div,
    frac_member,
    frac_member_naturals,
    frac_st,
    hyper_eq,
    hyper_le,
    is_infinite_frac,
    is_infinitesimal_hyper,
    parse_log,
    replay,
    st_hyper,
    star_apply_poly,
    star_member,
)

RESULTS: list[str] = []


class CriterionFailed(AssertionError):
    pass


def check(cond, message):
    if not cond:
        raise CriterionFailed(message)


def run_criterion(number: int, title: str, body, bound=None):
    """Time ``body``, record one PASS/FAIL line, and fail on a wrong answer or a slow run."""
    start = time.perf_counter()
    try:
        detail = body()
        error = None
    except AssertionError as err:
        detail, error = f"{err}", err
    elapsed = time.perf_counter() - start
    slow = bound is not None and elapsed >= bound
    verdict = "FAIL" if error or slow else "PASS"
    limit = f" < {bound} s" if bound is not None else ""
    line = f"{verdict} criterion {number}: {title} [{detail}] ({elapsed:.2f} s{limit})"
    RESULTS.append(line)
    print(line)
    if error:
        raise error
    assert not slow, f"criterion {number} took {elapsed:.2f} s, bound {bound} s"


# -- 1. golden transcript ---------------------------------------------------------------

SESSION_LINES = [
    "x=dt(3)+2*dt(2)",
    "y=-dt(4)-4*dt(1)",
    "g=inline('cos(y)')",
    "f=inline('sin(x)')",
    "decomposition(ext(f,x)/ext(g,y))",
]
EXPECTED_PAYLOADS = [
    "dt_3 + 2*dt_2",
    "-dt_4 - 4*dt",
    "Inline function: g(y) = cos(y)",
    "Inline function: f(x) = sin(x)",
    "dt_3 + 2*dt_2 + 1/2*dt_6/5 + 5/6*dt",
]


def golden_transcript():
    # sign resolution first: the independent series expansion fixes the dt_6/5 coefficient
    series = oracles.flagship_quotient()
    check(series.get(F(5, 6)) == F(1, 2), f"series oracle gives {series.get(F(5, 6))} for dt_6/5")
    session = Session()
    payloads = [session.eval_line(line) for line in SESSION_LINES]
    check(payloads == EXPECTED_PAYLOADS, f"payloads {payloads}")
    check(oracles.to_exponent_dict(session.bindings["ans"]) == series, "quotient differs from series oracle")
    return "5 payload lines byte-identical; dt_6/5 coefficient +1/2 by series oracle"


def test_criterion_1_golden_transcript():
    run_criterion(1, "golden transcript", golden_transcript, bound=1)


# -- 2. dt algebra ----------------------------------------------------------------------


def _rand_order(rng, lo=1):
    return F(rng.randint(lo * 4, 24), rng.randint(1, 4)) if rng.random() < 0.7 else rng.choice(oracles.ORDER_POOL)


def dt_algebra():
    rng = random.Random(2024)
    for _ in range(500):
        a, b = _rand_order(rng), _rand_order(rng)
        w = a * b / (a + b)
        got = dt(a) * dt(b)
        check(got == (dt(w) if w >= 1 else 0), f"dt_{a}*dt_{b}")
        check(oracles.to_exponent_dict(got) == oracles.poly_mul({1 / a: F(1)}, {1 / b: F(1)}), f"oracle dt_{a}*dt_{b}")
    for _ in range(500):
        a, p = _rand_order(rng), rng.randint(1, 6)
        got = pow_int(dt(a), p)
        check(got == dt(a / p) if a / p >= 1 else got == 0, f"(dt_{a})^{p}")
        check(oracles.to_exponent_dict(got) == oracles.poly_pow({1 / a: F(1)}, p), f"oracle (dt_{a})^{p}")
    for _ in range(500):
        a = F(rng.randint(1, 999), 1000)
        check(dt(a) == 0 and not dt(a).terms, f"dt_{a} is not zero")
    return "500 product, 500 power, 500 vanishing instances, exact"


def test_criterion_2_dt_algebra():
    run_criterion(2, "dt-algebra laws", dt_algebra, bound=5)


# -- 3. nilpotency and products of powers -----------------------------------------------


def _nonzero_infinitesimal(rng):
    while True:
        h = oracles.random_fermat(rng, max_terms=3, std_zero_prob=1)
        if h.terms:
            return h


def nilpotency():
    rng = random.Random(3)
    zero_seen = 0
    for _ in range(500):
        x = oracles.random_fermat(rng, max_terms=3, std_zero_prob=0.6)
        k = rng.randint(2, 6)
        brute = oracles.poly_pow(oracles.to_exponent_dict(x), k) == {}
        check(nilpotent_power_is_zero(x, k) == brute, f"x={x}, k={k}")
        check((pow_int(x, k) == 0) == brute, f"library power x={x}, k={k}")
        zero_seen += brute
    check(50 < zero_seen < 450, f"unbalanced sample: {zero_seen} zero powers")
    for _ in range(200):
        hs = [_nonzero_infinitesimal(rng) for _ in range(rng.randint(1, 3))]
        exps = [rng.randint(0, 3) for _ in hs]
        if not any(exps):
            exps[0] = 1
        direct = {F(0): F(1)}
        for h, i in zip(hs, exps):
            direct = oracles.poly_mul(direct, oracles.poly_pow(oracles.to_exponent_dict(h), i))
        verdict = power_product_order(hs, exps)
        if not direct:
            check(verdict is None, f"product of {hs}^{exps} is zero, decision says {verdict}")
        else:
            check(verdict == 1 / min(direct), f"order of {hs}^{exps}: {verdict} vs {1 / min(direct)}")
    return f"500 (x, k) pairs with k in 2..6 ({zero_seen} zero), 200 products, exact"


def test_criterion_3_nilpotency():
    run_criterion(3, "nilpotency and product-of-powers decisions", nilpotency, bound=10)


# -- 4. order decision vs representative sign ------------------------------------------


def _sign_at_power_index(d, m):
    """Sign of the representative of ``d`` at ``n + 1 = m**L``, straight from the decomposition."""
    L = oracles.exponent_lcm(oracles.to_exponent_dict(d))
    total = F(d.std)
    for c, w in d.terms:
        k = F(L) / w  # (1/(n+1))**(1/w) = m**(-k) with k an integer
        check(k.denominator == 1, "non-integral sample exponent")
        total += c * F(1, m ** int(k))
    return (total > 0) - (total < 0)


def order_decision():
    rng = random.Random(4)
    for _ in range(300):
        x = oracles.random_fermat(rng, max_terms=3)
        y = x + oracles.random_fermat(rng, max_terms=2, std_zero_prob=0.8) if rng.random() < 0.5 else oracles.random_fermat(rng)
        d = x - y
        verdict = compare(x, y)
        start = sign_crossover_index(d)
        indices, m = [], 2
        while len(indices) < 5:
            if exact_sample_index(d, m) > start:
                indices.append(m)
            m += 1
        for m in indices:
            check(_sign_at_power_index(d, m) == verdict, f"compare({x}, {y}) = {verdict}, m = {m}")
    return "300 pairs, 5 exact indices past the crossover each, exact"


def test_criterion_4_order_decision():
    run_criterion(4, "order decision matches representative sign", order_decision)


# -- 5. Taylor and derivatives ----------------------------------------------------------


def taylor_ad():
    rng = random.Random(5)
    for _ in range(100):
        f = oracles.random_poly_expr(rng, max_degree=4)
        pt = oracles.random_rational(rng)
        check(s.derivative_at(f, pt) == s.eval_real(s.differentiate(f), [pt]), f"polynomial {s.format_expr(f)} at {pt}")
    worst_sym = worst_fd = 0.0
    for name in ("sin", "cos", "exp", "log"):
        f = s.func(name, s.var(0))
        for k in range(20):
            pt = 0.15 + 0.2 * k
            m = s.derivative_at(f, pt)
            sym = s.eval_real(s.differentiate(f), [pt])
            hh = 1e-6
            central = (s.eval_real(f, [pt + hh]) - s.eval_real(f, [pt - hh])) / (2 * hh)
            worst_sym, worst_fd = max(worst_sym, abs(m - sym)), max(worst_fd, abs(m - central))
    check(worst_sym <= 1e-9 and worst_fd <= 1e-6, f"errors {worst_sym:.2e}, {worst_fd:.2e}")
    tau = s.parse_expr("t^2", ["x", "t"])
    check(s.ext_apply(tau, [FermatReal(5), dt(1)]) == 0, "tau^2 != 0")
    lorentz = s.parse_expr("1/sqrt(1 - x^2)")
    for beta in (F(1), F(3, 4), F(-2, 5), F(7), F(1, 3)):
        check(s.ext_apply(lorentz, [beta * dt(2)]) == 1 + beta**2 * dt(1) / 2, f"Lorentz beta={beta}")
    fs = [s.parse_expr(t) for t in ("sin(x)", "cos(x)*exp(x)", "1/(2 + x)", "x^3 - x", "log(1 + x)")]
    for _ in range(100):
        f = rng.choice(fs)
        h = oracles.random_fermat(rng, max_terms=3, std_zero_prob=1)
        n = s.taylor_degree([h])
        base = s.ext_apply(f, [h])
        check(s.ext_apply(f, [h], degree=n + 1) == base == s.ext_apply(f, [h], degree=n + 2), f"truncation {h}")
    return f"100 exact polynomial cases; transcendental max errors {worst_sym:.1e} / {worst_fd:.1e}; 100 truncation cases"


def test_criterion_5_taylor():
    run_criterion(5, "Taylor extension and derivatives", taylor_ad)


# -- 6. intuitionistic transfer ---------------------------------------------------------


def _set_trial(rng):
    pa, pb = oracles.random_pairs(rng), oracles.random_pairs(rng)
    if rng.random() < 0.2:
        pb = pb + pa
    v = oracles.boundary_std(rng, pa + pb)
    return pa, pb, OpenSet.of(*pa), OpenSet.of(*pb), oracles.dress(rng, v), v


def transfer_suite():
    rng = random.Random(6)
    empty = OpenSet.empty()
    for _ in range(500):
        pa, pb, a, b, x, v = _set_trial(rng)
        check(st(x) == v, "dressing changed the standard part")
        in_a, in_b = oracles.in_pairs(v, pa), oracles.in_pairs(v, pb)
        # items 1-3: union, intersection, interior of difference
        check(member_ext(x, union(a, b)) == (member_ext(x, a) or member_ext(x, b)) == (in_a or in_b), "union")
        check(member_ext(x, intersect(a, b)) == (member_ext(x, a) and member_ext(x, b)) == (in_a and in_b), "intersection")
        check(member_ext(x, int_diff(a, b)) == (in_a and not oracles.in_closure(v, pb)), "interior of difference")
        # items 4-6: inclusion, empty set, equality, probed at dressed cut points
        probes = [oracles.dress(rng, c) for c in oracles.cut_points(pa, pb)] + [x]
        check(a.issubset(b) == all(member_ext(y, b) for y in probes if member_ext(y, a)), "inclusion")
        check(not member_ext(x, empty), "empty set")
        check((a == b) == all(member_ext(y, a) == member_ext(y, b) for y in probes), "equality")
    grid = oracles.SET_GRID
    for _ in range(500):
        a, b, c = oracles.random_relation(rng)
        flat = [(r.x[0], r.x[1]) for r in c.rectangles] + a.intervals + b.intervals
        x = oracles.dress(rng, oracles.boundary_std(rng, flat))
        witnesses = [y for y in grid if y in b]
        check(member_ext(x, project_exists(c)) == any(c.contains(st(x), y) for y in witnesses), "exists")
        x = oracles.dress(rng, rng.choice(grid))
        brute = member_ext(x, a) and all(c.contains(st(x), y) for y in witnesses)
        check(member_ext(x, project_forall(c, a, b)) == brute, "forall")
    nontrivial = 0
    for _ in range(100):
        a, b, c = oracles.random_relation(rng)
        result = project_forall(c, a, b)
        bs = [y for y in grid if y in b]
        for v in grid:
            check((v in result) == (v in a and all(c.contains(v, y) for y in bs)), f"grid forall at {v}")
        nontrivial += not result.is_empty()
    check(nontrivial >= 10, "too few nonempty projections")
    return "items 1-6 on 500 boundary-stressed trials; both quantifiers on 500; project_forall vs grid on 100"


def test_criterion_6_transfer():
    run_criterion(6, "intuitionistic transfer over open sets", transfer_suite)


# -- 7. ultrapower ----------------------------------------------------------------------

EVENS, ODDS = EpSet.evens(), EpSet.odds()
H = Hyper.h()


def _region(rng):
    out = RealSet.empty()
    for _ in range(rng.randint(0, 3)):
        a, b = sorted(rng.sample(oracles.HALVES[4:13], 2))
        out = out | RealSet.interval(a, b, rng.random() < 0.5, rng.random() < 0.5)
    if rng.random() < 0.3:
        out = out | RealSet.point(rng.choice(oracles.HALVES[4:13]))
    return out


def ultrapower_suite():
    for strategy in Strategy:
        rng = random.Random(f"acceptance-{strategy.value}")
        o = FilterOracle(strategy)
        # zero divisors and the alternating sign
        u = Hyper.of([(EVENS, PowerSum(0)), (ODDS, PowerSum.power(1))])
        w = Hyper.of([(EVENS, PowerSum.power(1)), (ODDS, PowerSum(0))])
        check(hyper_eq(o, u * w, 0), "u*w != 0")
        check(hyper_eq(o, u, 0) != hyper_eq(o, w, 0), f"{strategy.value}: zero factor not unique")
        # infinitesimals are exactly the null sequences
        for _ in range(200):
            x = oracles.random_hyper(rng)
            verdict = is_infinitesimal_hyper(o, x)
            tail = abs(oracles.seq_value(x, 10**12))
            check(verdict == (st_hyper(x) == 0) == (tail < mpmath.mpf("0.001")), f"null sequence {x}")
        # propositional transfer
        empty = RealSet.empty()
        for _ in range(300):
            a, b = _region(rng), _region(rng)
            if rng.random() < 0.2:
                b = b | a
            limits = list(a.points + b.points) or [F(0)]
            x = oracles.random_hyper(rng, limits=limits + [F(1, 4)])
            in_a, in_b = star_member(o, x, a), star_member(o, x, b)
            check(star_member(o, x, a | b) == (in_a or in_b), "transfer union")
            check(star_member(o, x, a & b) == (in_a and in_b), "transfer intersection")
            check(star_member(o, x, a - b) == (in_a and not in_b), "transfer difference")
            check(not star_member(o, x, empty), "transfer empty")
            if a <= b:
                check(not in_a or in_b, "transfer inclusion")
        # principal corollary: a standard element sees exactly the standard memberships
        for _ in range(50):
            region = _region(rng)
            check(star_member(o, Hyper.const(F(1, 2)), region) == (F(1, 2) in region), "principal corollary")
        # free corollary: e = 1/h lies in every cofinite set of naturals, in no finite one
        e = HyperFrac.make(o, 1, H)
        check(is_infinite_frac(o, e), "e is not infinite")
        for k in (0, 5, 17):
            check(frac_member_naturals(o, e, EpSet.at_least(k)), "cofinite set missed")
            check(not frac_member_naturals(o, e, EpSet.finite(range(k + 1))), "finite set caught")
        check(not frac_member(o, e, RealSet.interval(0, 1000)), "bounded set caught e")
        # replayed log satisfies the filter axioms
        entries = parse_log(o.log_text())
        check(entries == o.log and replay(entries, strategy), "log does not replay")
        check(check_filter_axioms(entries).ok, f"{strategy.value}: filter axioms violated")
    alt = Hyper.of([(EVENS, PowerSum.power(1)), (ODDS, PowerSum.power(1, -1))])
    check(hyper_le(FilterOracle("evens-first"), 0, alt), "alternating sign under evens-first")
    check(not hyper_le(FilterOracle("odds-first"), 0, alt), "alternating sign under odds-first")
    o = FilterOracle()
    sq = s.parse_expr("x^2")
    quotient = frac_div(o, star_apply_poly(sq, [1 + H]) - star_apply_poly(sq, [Hyper.const(1)]), H)
    check(frac_st(quotient) == 2, f"derivative quotient has standard part {frac_st(quotient)}")
    return "4 strategies x (200 null-sequence checks, 300 transfer triples, axioms on replayed log); corollaries; st = 2"


def test_criterion_7_ultrapower():
    run_criterion(7, "ultrapower suite", ultrapower_suite, bound=30)


# -- 8. plot contract -------------------------------------------------------------------


def _abscissa(x, t, dps=60):
    with mpmath.workdps(dps):
        total = mpmath.mpf(x.std.numerator) / x.std.denominator
        for c, w in x.terms:
            total += mpmath.mpf(c.numerator) / c.denominator * mpmath.power(mpmath.mpf(t.numerator) / t.denominator, mpmath.mpf(w.denominator) / w.numerator)
        return total


def plot_contract(tmp_dir: Path):
    path = emit_plot(dt(2), 1, 100, "csv", tmp_dir / "dt2.csv")
    rows = [line.split(",") for line in path.read_text().splitlines()[1:]]
    check(len(rows) == 100, f"{len(rows)} rows")
    exact_rows = 0
    for p, t in rows:
        t = F(t)
        if oracles.exact_root(t, F(1, 2)) is not None:
            check("." not in p and F(p) ** 2 == t, f"row {p},{t} is not exact")
            exact_rows += 1
    check(exact_rows == 10, f"{exact_rows} exact-sample rows")
    rng = random.Random(8)
    pairs = 0
    while pairs < 50:
        x, y = oracles.random_fermat(rng, max_terms=3), oracles.random_fermat(rng, max_terms=3)
        if rng.random() < 0.5:
            y = FermatReal(x.std, [(c, w) for c, w in x.terms] + [(oracles.random_rational(rng), oracles.random_order(rng))])
        c = compare(x, y)
        if c == 0:
            continue
        if c > 0:
            x, y = y, x
        pairs += 1
        delta = separation_delta(x, y)
        gx, gy = graph_points(x, delta, 1000), graph_points(y, delta, 1000)
        for (px, t), (py, t2) in zip(gx, gy):
            check(t == t2, "grids differ")
            ex, ey = _abscissa(x, F(t)), _abscissa(y, F(t))
            check(abs(ex - float(px)) <= 1e-9 * (1 + abs(ex)), "graph point off")
            if t == 0:
                check(ex <= ey, f"{x} < {y} but graphs cross at 0")
            else:
                check(ex < ey, f"{x} < {y} but graphs not ordered at t = {t}")
    return "100 CSV rows, p^2 = t exactly on the 10 exact-sample rows; 50 ordered pairs x 1000 grid points"


def test_criterion_8_plot(tmp_path):
    run_criterion(8, "plot contract and representation", lambda: plot_contract(tmp_path))


if __name__ == "__main__":
    import tempfile

    criteria = [
        (1, "golden transcript", golden_transcript, 1),
        (2, "dt-algebra laws", dt_algebra, 5),
        (3, "nilpotency and product-of-powers decisions", nilpotency, 10),
        (4, "order decision matches representative sign", order_decision, None),
        (5, "Taylor extension and derivatives", taylor_ad, None),
        (6, "intuitionistic transfer over open sets", transfer_suite, None),
        (7, "ultrapower suite", ultrapower_suite, 30),
    ]
    failed = 0
    with tempfile.TemporaryDirectory() as tmp:
        criteria.append((8, "plot contract and representation", lambda: plot_contract(Path(tmp)), None))
        for number, title, body, bound in criteria:
            try:
                run_criterion(number, title, body, bound)
            except AssertionError:
                failed += 1
    sys.exit(1 if failed else 0)
