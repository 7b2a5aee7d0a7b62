"""End-to-end acceptance suite, one test per numbered criterion.

Every criterion runs a fully seeded computation and serializes its numeric
results to a canonical report string.  First runs are cached for the
session; the final criterion reruns all of them from scratch and demands
byte-identical reports.  Run with -s to see the per-criterion summary lines.
"""

import json
import math
import time

import numpy as np

from stablelab import (
    CoefVector,
    CounterStream,
    PiecewiseLinear,
    StableParams,
    abs_moment,
    c_pr_estimate,
    contraction_constant,
    derive_seed,
    divergence_table,
    gen_instance,
    lr_truncation_convergence,
    p_norm,
    sample_range,
    sphere_family_case,
    tail_asymptote,
    verify_corollary_p2,
    verify_scalar_contraction,
    verify_stability_law,
    verify_vector_contraction,
)

_RESULTS = {}


def _unit(p):
    return StableParams(alpha=p, beta=0.0, gamma=1.0, delta=0.0)


def _cached(num):
    if num not in _RESULTS:
        fn = globals()[f"_crit{num}"]
        t0 = time.perf_counter()
        report = fn()
        _RESULTS[num] = (report, time.perf_counter() - t0)
    return _RESULTS[num]


def _announce(num, ok, detail, elapsed=None):
    tag = "PASS" if ok else "FAIL"
    stamp = f" [{elapsed:.1f}s]" if elapsed is not None else ""
    line = f"CRITERION {num:2d}: {tag} - {detail}{stamp}"
    print(line, flush=True)
    return line


# ---------------------------------------------------------------------
# 1. weighted sum matches its single-law reduction in distribution
# ---------------------------------------------------------------------


def _crit1():
    v = CoefVector((3.0, 4.0), 1.5)
    reps = [verify_stability_law(v, _unit(1.5), 100_000, derive_seed(7, rep))
            for rep in range(20)]
    return json.dumps({
        "passes": sum(r.verdict == "pass" for r in reps),
        "p_values": [r.p_value for r in reps],
    }, sort_keys=True)


def test_criterion_01_stability_law():
    report, elapsed = _cached(1)
    doc = json.loads(report)
    ok = doc["passes"] >= 19 and elapsed < 30.0
    line = _announce(1, ok, f"KS p > 0.01 in {doc['passes']}/20 seeded runs "
                            "(need 19)", elapsed)
    assert ok, line


# ---------------------------------------------------------------------
# 2. moment ratio is vector-free and matches quadrature
# ---------------------------------------------------------------------


def _crit2():
    vecs = ((1.0,), (1.0, 1.0), (3.0, 4.0, 5.0))
    ests = [c_pr_estimate(1.5, 1.0, CoefVector(v, 1.5), 1_000_000,
                          derive_seed(101, i)).estimate
            for i, v in enumerate(vecs)]
    return json.dumps({"estimates": ests,
                       "quadrature": abs_moment(_unit(1.5), 1.0)},
                      sort_keys=True)


def test_criterion_02_moment_ratio_constancy():
    report, elapsed = _cached(2)
    doc = json.loads(report)
    ests, quad = doc["estimates"], doc["quadrature"]
    pair = max(abs(a - b) / min(a, b) for a in ests for b in ests)
    vs_quad = max(abs(e - quad) / quad for e in ests)
    ok = pair <= 0.02 and vs_quad <= 0.02 and elapsed < 120.0
    line = _announce(2, ok, f"pairwise {pair:.2%}, vs quadrature {vs_quad:.2%}"
                            " (bounds 2%)", elapsed)
    assert ok, line


# ---------------------------------------------------------------------
# 3. empirical tail level matches the asymptote constant
# ---------------------------------------------------------------------


def _crit3():
    ratios = {}
    for i, alpha in enumerate((1.2, 1.5, 1.8)):
        params = _unit(alpha)
        x = sample_range(params, derive_seed(3, i), 0, 10_000_000)
        cut = float(np.quantile(x, 0.999))
        emp = float((x > cut).mean())
        ratios[str(alpha)] = emp / tail_asymptote(params, cut)
    return json.dumps({"ratios": ratios}, sort_keys=True)


def test_criterion_03_tail_constant():
    report, elapsed = _cached(3)
    ratios = json.loads(report)["ratios"]
    dev = max(abs(r - 1.0) for r in ratios.values())
    ok = dev <= 0.15 and elapsed < 300.0
    line = _announce(3, ok, f"tail level within {dev:.1%} of the asymptote "
                            "at the 0.999 quantile (bound 15%)", elapsed)
    assert ok, line


# ---------------------------------------------------------------------
# 4. sampler agrees with the characteristic function
# ---------------------------------------------------------------------


def _crit4():
    x = sample_range(_unit(1.5), 40, 0, 1_000_000)
    devs = {str(t): abs(float(np.cos(t * x).mean()) - math.exp(-t ** 1.5))
            for t in (0.25, 0.5, 1.0, 2.0)}
    return json.dumps({"deviations": devs}, sort_keys=True)


def test_criterion_04_sampler_cf_agreement():
    report, elapsed = _cached(4)
    devs = json.loads(report)["deviations"]
    bound = 4.0 / math.sqrt(1_000_000.0)
    worst = max(devs.values())
    ok = worst <= bound
    line = _announce(4, ok, f"max |emp cos - cf| = {worst:.5f} "
                            f"(bound {bound:.4f})", elapsed)
    assert ok, line


# ---------------------------------------------------------------------
# 5. norm recovery bound on random coefficient vectors
# ---------------------------------------------------------------------


def _crit5():
    p = 1.5
    c = contraction_constant(p)
    n = 100_000
    stream = CounterStream(11)
    margins = []
    for i in range(50):
        gen = stream.child(2 * i)
        k = 1 + (i % 10)
        entries = 2.0 * gen.uniforms(0, k) - 1.0
        norm = p_norm(entries, p)
        draws = sample_range(_unit(p), stream.child(2 * i + 1).seed, 0, n * k)
        sums = np.abs(draws.reshape(n, k) @ entries)
        se = float(sums.std(ddof=1)) / math.sqrt(n)
        margins.append(c * float(sums.mean()) + 3.0 * se - norm)
    return json.dumps({"margins": margins}, sort_keys=True)


def test_criterion_05_norm_recovery_bound():
    report, elapsed = _cached(5)
    margins = json.loads(report)["margins"]
    holds = sum(m >= 0.0 for m in margins)
    ok = holds == 50
    line = _announce(5, ok, f"norm bound held in {holds}/50 instances "
                            f"(min margin {min(margins):+.4f})", elapsed)
    assert ok, line


# ---------------------------------------------------------------------
# 6. vector contraction sweep across p
# ---------------------------------------------------------------------


def _crit6():
    values = []
    passes = 0
    idx = 0
    for p in (1.2, 1.5, 1.8):
        for _ in range(100):
            table = gen_instance(1 + (idx % 5), 1 + (idx % 4), 1 + (idx % 8),
                                 p, derive_seed(6, idx))
            rep = verify_vector_contraction(table, 200_000,
                                            derive_seed(60, idx))
            passes += rep.verdict == "pass"
            values.append([rep.lhs, rep.rhs, rep.rhs_err])
            idx += 1
    return json.dumps({"passes": passes, "values": values}, sort_keys=True)


def test_criterion_06_vector_contraction_sweep():
    report, elapsed = _cached(6)
    doc = json.loads(report)
    ok = doc["passes"] == 300 and elapsed < 600.0
    line = _announce(6, ok, f"{doc['passes']}/300 instances passed at "
                            "2e5 trials, p in {1.2, 1.5, 1.8}", elapsed)
    assert ok, line


# ---------------------------------------------------------------------
# 7. p = 2 corollary with doubly indexed signs
# ---------------------------------------------------------------------


def _crit7():
    values = []
    passes = 0
    for j in range(100):
        table = gen_instance(1 + (j % 5), 1 + (j % 4), 1 + (j % 8), 2.0,
                             derive_seed(7, j))
        rep = verify_corollary_p2(table, 200_000, derive_seed(70, j))
        passes += rep.verdict == "pass"
        values.append([rep.lhs, rep.rhs, rep.rhs_err])
    return json.dumps({"passes": passes, "values": values}, sort_keys=True)


def test_criterion_07_p2_corollary_sweep():
    report, elapsed = _cached(7)
    doc = json.loads(report)
    ok = doc["passes"] == 100
    line = _announce(7, ok, f"{doc['passes']}/100 instances passed with "
                            "constant sqrt(2)", elapsed)
    assert ok, line


# ---------------------------------------------------------------------
# 8. scalar contraction, both sides enumerated exactly
# ---------------------------------------------------------------------


def _crit8():
    stream = CounterStream(8)
    passes = 0
    gap = 0.0
    for j in range(100):
        n = 1 + (j % 5)
        m = 1 + (j % 8)
        gen = stream.child(j)
        a = 2.0 * (2.0 * gen.uniforms(0, n * m) - 1.0).reshape(n, m)
        kind = j % 3
        if kind == 0:
            hs = [np.abs] * n
        elif kind == 1:
            hs = [lambda x: np.clip(x, -1.0, 1.0)] * n
        else:
            knots = -2.5 + 0.5 * np.arange(11)
            hs = [PiecewiseLinear(knots, 0.0,
                                  2.0 * gen.child(1 + i).uniforms(0, 10) - 1.0)
                  for i in range(n)]
        rep = verify_scalar_contraction(a, hs, 1.0)
        passes += rep.verdict == "pass"
        ident = verify_scalar_contraction(a, [lambda x: x] * n, 1.0)
        gap = max(gap, abs(ident.lhs - ident.rhs))
    return json.dumps({"passes": passes, "identity_gap_max": gap},
                      sort_keys=True)


def test_criterion_08_scalar_contraction_sweep():
    report, elapsed = _cached(8)
    doc = json.loads(report)
    ok = doc["passes"] == 100 and doc["identity_gap_max"] == 0.0
    line = _announce(8, ok, f"{doc['passes']}/100 exact instances passed, "
                            f"identity gap {doc['identity_gap_max']:.1e}",
                     elapsed)
    assert ok, line


# ---------------------------------------------------------------------
# 9. exact divergence table
# ---------------------------------------------------------------------


def _crit9():
    rows = divergence_table([4, 16, 64, 256], 1.5)
    ones = divergence_table([4, 16, 64, 256], 1.0)
    return json.dumps({
        "lhs": [r.lhs for r in rows],
        "rhs": [r.rhs_bound for r in rows],
        "ratios": [r.ratio for r in rows],
        "p1_ratios": [r.ratio for r in ones],
    }, sort_keys=True)


def test_criterion_09_divergence_table_exact():
    report, elapsed = _cached(9)
    doc = json.loads(report)
    ratios = doc["ratios"]
    ok = (
        doc["lhs"] == [2.0, 8.0, 32.0, 128.0]
        and all(math.isclose(got, n ** (2.0 / 3.0), rel_tol=1e-13)
                for got, n in zip(doc["rhs"], (4, 16, 64, 256)))
        and doc["rhs"][2] == 16.0
        and ratios[0] < ratios[1] < ratios[2] < ratios[3]
        and ratios[2] == 2.0
        and doc["p1_ratios"] == [0.5, 0.5, 0.5, 0.5]
    )
    line = _announce(9, ok, "exact table reproduced, ratio strictly grows, "
                            "n=64 ratio 2.0, p=1 column 0.5", elapsed)
    assert ok, line


# ---------------------------------------------------------------------
# 10. sphere family vanishes exactly
# ---------------------------------------------------------------------


def _crit10():
    cases = {str(n): list(sphere_family_case(n)) for n in (1, 10, 100)}
    return json.dumps({"cases": cases}, sort_keys=True)


def test_criterion_10_sphere_family_exact():
    report, elapsed = _cached(10)
    cases = json.loads(report)["cases"]
    ok = all(cases[str(n)] == [0.0, float(n)] for n in (1, 10, 100))
    line = _announce(10, ok, "sign functional exactly 0, bound exactly n, "
                             "n in {1, 10, 100}", elapsed)
    assert ok, line


# ---------------------------------------------------------------------
# 11. truncation error decays at the predicted rate
# ---------------------------------------------------------------------


def _crit11():
    v = CoefVector(tuple(1.0 / k for k in range(1, 20001)), 1.5)
    res = lr_truncation_convergence(v, 1.0, (10, 100, 1000), 20_000, 20260818)
    return json.dumps({"errors": [[K, sr.estimate] for K, sr in res]},
                      sort_keys=True)


def test_criterion_11_truncation_convergence():
    report, elapsed = _cached(11)
    errors = json.loads(report)["errors"]
    ests = [e for _, e in errors]
    anchor = ests[2] / (2.0 / math.sqrt(1000.0)) ** (2.0 / 3.0)
    ratios = [e / (anchor * (2.0 / math.sqrt(K)) ** (2.0 / 3.0))
              for K, e in errors]
    ok = (ests[0] > ests[1] > ests[2]
          and all(0.5 <= r <= 2.0 for r in ratios))
    line = _announce(11, ok, "error strictly decreasing, within factor 2 of "
                             f"the anchored K^-1/3 rate (ratios "
                             f"{', '.join('%.2f' % r for r in ratios)})",
                     elapsed)
    assert ok, line


# ---------------------------------------------------------------------
# 12. byte-identical reruns
# ---------------------------------------------------------------------


def test_criterion_12_reproducibility():
    mismatches = []
    for num in range(1, 12):
        first, _ = _cached(num)
        again = globals()[f"_crit{num}"]()
        if again != first:
            mismatches.append(num)
    ok = not mismatches
    line = _announce(12, ok, "all 11 seeded reports byte-identical on rerun"
                     if ok else f"report drift in criteria {mismatches}")
    assert ok, line
