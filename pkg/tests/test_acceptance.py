"""Acceptance criteria 1-10.

Every test appends one ``CRITERION n: PASS|FAIL ...`` line to the shared log,
printed in the terminal summary, before asserting.  All comparisons are exact
integer equalities; wall-clock bounds are checked per run.
"""

import time

import numpy as np
import pytest

from koszul_lab import exactla as la
from koszul_lab import models as mdl
from koszul_lab.field import get_field
from koszul_lab.gradedring import GradedRing, ProjectiveModel, substitute_forms
from koszul_lab.koszul import betti_table, full_space, koszul_cell
from koszul_lab.verify import suite_cross_model, suite_geometric, suite_green, suite_restriction

SEEDS = (1, 2, 3)
GEOMETRIC_RUNS = [(7, 1), (7, 2), (101, 1), (101, 2)]


def _log(log, n, ok, detail):
    log.append(f"CRITERION {n}: {'PASS' if ok else 'FAIL'}  {detail}")


def _timed(fn, *args, **kw):
    t0 = time.perf_counter()
    out = fn(*args, **kw)
    return out, time.perf_counter() - t0


def _checks(rep, names):
    return {c.name: c for c in rep.checks if c.name in names}


def test_criterion_1_green_vanishing_g6(acceptance_log):
    rows = []
    ok = True
    for variant in ("grass", "sextic"):
        for p in (7, 101):
            for seed in SEEDS:
                rep, dt = _timed(suite_green, p, seed, genus=6, variant=variant)
                b31 = _checks(rep, {"b_3,1"})["b_3,1"].observed
                good = rep.passed and b31 == 0 and dt < 10
                ok &= good
                rows.append(f"{variant}/p={p}/s={seed}:b31={b31},{dt:.1f}s")
    _log(acceptance_log, 1, ok, "b_3,1 = 0 on 12 runs; " + " ".join(rows))
    assert ok


def test_criterion_2_dimension_formula(acceptance_log):
    details = []
    ok = True
    for p in (11, 101):
        g6, _ = mdl.escalate(p, lambda F: mdl.gen_canonical(6, "grass", F, 5))
        b21 = betti_table(GradedRing(g6), (2,), (1,))[(2, 1)]
        t0 = time.perf_counter()
        g8, F8 = mdl.escalate(p, lambda F: mdl.gen_canonical(8, "grass", F, 5))
        bt = betti_table(GradedRing(g8), (3, 4), (1,))
        dt = time.perf_counter() - t0
        good = b21 == 5 and bt[(3, 1)] == 21 and bt[(4, 1)] == 0 and dt < 60
        ok &= good
        details.append(f"p={p}: g6 b21={b21}; g8 over F_{F8.q} b31={bt[(3, 1)]} b41={bt[(4, 1)]} ({dt:.1f}s)")
    _log(acceptance_log, 2, ok, "; ".join(details))
    assert ok


def test_criterion_3_genus_four(acceptance_log):
    details = []
    ok = True
    for p in (7, 101):
        t0 = time.perf_counter()
        model, _ = mdl.escalate(p, lambda F: mdl.gen_canonical(4, "ci", F, 2))
        bt = betti_table(GradedRing(model), (1, 2), (1,))
        dt = time.perf_counter() - t0
        good = bt[(1, 1)] == 1 and bt[(2, 1)] == 0 and dt < 2
        ok &= good
        details.append(f"p={p}: b11={bt[(1, 1)]} b21={bt[(2, 1)]} ({dt:.2f}s)")
    _log(acceptance_log, 3, ok, "; ".join(details))
    assert ok


def test_criterion_4_hyperplane_restriction(acceptance_log):
    details = []
    ok = True
    for p, seed in ((7, 1), (101, 1), (101, 2)):
        rep, dt = _timed(suite_restriction, p, seed)
        obs = {c.name: c.observed for c in rep.checks}
        k3 = [obs[f"K3 b_{i},1"] for i in (1, 2, 3)]
        cur = [obs[f"section b_{i},1"] for i in (1, 2, 3)]
        good = rep.passed and k3 == cur == [6, 5, 0] and dt < 30
        ok &= good
        details.append(f"p={p}/s={seed}: K3 {k3} section {cur} ({dt:.1f}s)")
    _log(acceptance_log, 4, ok, "; ".join(details))
    assert ok


@pytest.fixture(scope="module")
def geometric_reports():
    return {(p, s): _timed(suite_geometric, p, s) for p, s in GEOMETRIC_RUNS}


def _geometric_criterion(log, n, reports, names, label):
    details = []
    ok = True
    for (p, s), (rep, dt) in reports.items():
        cs = _checks(rep, names)
        good = len(cs) == len(names) and all(c.passed for c in cs.values()) and dt < 60
        ok &= good
        obs = ",".join(f"{k}={_short(c.observed)}" for k, c in sorted(cs.items()))
        details.append(f"p={p}/s={s} over F_{rep.field['p'] ** rep.field['m']}: {obs} ({dt:.1f}s)")
    _log(log, n, ok, label + "; " + "; ".join(details))
    return ok


def _short(v):
    if isinstance(v, list) and v and all(x == v[0] for x in v):
        return f"{v[0]}x{len(v)}"
    return str(v)


def test_criterion_5_pencils_and_regularity(acceptance_log, geometric_reports):
    names = {"pencils", "divisor degrees", "divisor points on sextic", "base-point-free", "special subspace dims"}
    assert _geometric_criterion(acceptance_log, 5, geometric_reports, names, "5 pencils, deg 4, bpf, h0(K-Z)=3")


def test_criterion_6_one_dimensional_images(acceptance_log, geometric_reports):
    assert _geometric_criterion(acceptance_log, 6, geometric_reports, {"image dims"}, "15 images of dim 1")


def test_criterion_7_generation(acceptance_log, geometric_reports):
    names = {"dim K_2,1", "span of all images"}
    assert _geometric_criterion(acceptance_log, 7, geometric_reports, names, "images span K_2,1 of dim 5")


def test_criterion_8_collinearity(acceptance_log, geometric_reports):
    names = {"per-pencil span", "per-pencil span with extra parameter"}
    assert _geometric_criterion(acceptance_log, 8, geometric_reports, names, "per-pencil span 2, also with 4th")


def test_criterion_9_oracle_equivalence(acceptance_log):
    details = []
    ok = True
    for p, seed in ((101, 1), (101, 2)):
        rep, dt = _timed(suite_cross_model, p, seed)
        rows = {c.observed.__str__() for c in rep.checks if c.name.endswith("q=1")}
        dims = {c.observed.__str__() for c in rep.checks if c.name.endswith("M_3")}
        good = rep.passed and len(rep.checks) == 8 and dt < 60
        ok &= good
        details.append(f"p={p}/s={seed}: dims {sorted(dims)} rows {sorted(rows)} ({dt:.1f}s)")
    _log(acceptance_log, 9, ok, "4 model/representation pairs agree; " + "; ".join(details))
    assert ok


# ---------------------------------------------------------------------------
# criterion 10


def _delta_squares(ring) -> int:
    V = full_space(ring.field, ring.n)
    cells = 0
    for q in range(0, 3):
        for p in range(0, ring.n + 1):
            koszul_cell(ring, V, p, q)  # raises on d o d != 0
            cells += 1
    return cells


def _random_subspace(F, rng, n):
    k = int(rng.integers(0, n + 1))
    return la.span(F, la.random_matrix(F, rng, k, n), n)


def _matrix_identities(count: int) -> int:
    rng = np.random.default_rng(2024)
    fields = [get_field(7), get_field(101), get_field(3, 2), get_field(5, 3)]
    for i in range(count):
        F = fields[i % len(fields)]
        r, c = (int(x) for x in rng.integers(1, 13, size=2))
        A = la.random_matrix(F, rng, r, c)
        if i % 3 == 0:
            # force rank deficiency
            k = int(rng.integers(1, min(r, c) + 1))
            A = la.matmul(F, la.random_matrix(F, rng, r, k), la.random_matrix(F, rng, k, c))
        rk = la.rank(F, A)
        K = la.kernel_basis(F, A)
        assert rk + K.dim == c
        assert la.is_zero(la.matmul(F, A, K.basis.T))
        assert la.rank(F, A.T) == rk
        n = int(rng.integers(1, 9))
        U, W = _random_subspace(F, rng, n), _random_subspace(F, rng, n)
        S, I = U.sum(W), U.intersect(W)
        assert S.dim + I.dim == U.dim + W.dim
        assert S.contains(U) and S.contains(W) and U.contains(I) and W.contains(I)
    return count


def _change_basis(model, P):
    F = model.field
    gens = substitute_forms(F, model.generators, model.n, P)
    return ProjectiveModel(F, model.n, tuple((d, g) for (d, _), g in zip(model.generators, gens)),
                           None, dict(model.expected_hilbert))


def _gl_invariance(model, changes: int) -> int:
    F = model.field
    rng = np.random.default_rng(77)
    ref = betti_table(GradedRing(model), range(model.n + 1), (0, 1, 2)).to_json()["rows"]
    for _ in range(changes):
        P = mdl.random_full_rank(F, rng, model.n, model.n)
        other = betti_table(GradedRing(_change_basis(model, P)), range(model.n + 1), (0, 1, 2)).to_json()["rows"]
        assert other == ref
    return changes


def _duality(model, g) -> None:
    bt = betti_table(GradedRing(model), range(g - 1), (1, 2))
    for p in range(g - 1):
        assert bt[(p, 1)] == bt[(g - 2 - p, 2)]


def test_criterion_10_property_suites(acceptance_log, g4, g6, g6_sextic, k3):
    t0 = time.perf_counter()
    parts = []
    ok = True
    try:
        cells = sum(_delta_squares(GradedRing(m)) for m in (g4, g6, g6_sextic, k3))
        parts.append(f"d∘d=0 on {cells} cells")
        parts.append(f"{_matrix_identities(1000)} random matrices")
        parts.append(f"{_gl_invariance(g6, 5)} GL changes at g=6")
        _duality(g4, 4)
        _duality(g6, 6)
        _duality(g6_sextic, 6)
        parts.append("duality g=4,6")
    except Exception as exc:  # noqa: BLE001
        ok = False
        parts.append(f"error {type(exc).__name__}: {exc}")
    dt = time.perf_counter() - t0
    ok &= dt < 120
    _log(acceptance_log, 10, ok, "; ".join(parts) + f" ({dt:.1f}s)")
    assert ok
