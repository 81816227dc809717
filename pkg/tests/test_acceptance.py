"""The eight acceptance criteria, each run through the check registry at its stated cutoffs.

Every criterion prints one PASS/FAIL line in the terminal summary.  Three
literal sub-statements do not hold (see the decisions ledger): they are run,
asserted as strict xfails, and make their criterion's line read FAIL with
the reason.  The pytest assertions of a criterion cover its attainable parts.
"""

from __future__ import annotations

import json
import time
from concurrent.futures import ProcessPoolExecutor

import pytest
from conftest import record_criterion

from bvworldline import checks as C
from bvworldline.cli import main

pytestmark = pytest.mark.slow


def run_all(ids, cfg=None, jobs=4):
    cfg = cfg or C.CheckConfig()
    with ProcessPoolExecutor(max_workers=min(jobs, len(ids))) as pool:
        return dict(zip(ids, pool.map(C.run_check, ids, [cfg] * len(ids))))


def judge(n, reports, limit_s, wall, note="", literal=None):
    """Record the criterion line; ``literal`` maps unattainable literal check ids to their configs.

    The line is PASS only if the literal statements pass too; the assertions
    below cover the attainable parts, the literal ones are strict xfails.
    """
    bad = {k: r.status for k, r in reports.items() if r.status != "pass"}
    lit_bad = [cid for cid, cfg in (literal or {}).items() if C.run_check(cid, cfg).status != "pass"]
    ok = not bad and not lit_bad and wall < limit_s
    detail = f"{len(reports)} checks, {wall:.0f}s (limit {limit_s}s)"
    if bad:
        detail += f"; not passing: {bad}"
    if lit_bad:
        detail += f"; literal sub-statement unattainable (ledgered): {', '.join(lit_bad)}; all other parts pass"
    if note:
        detail += f"; {note}"
    record_criterion(n, ok, detail)
    for k, r in reports.items():
        assert r.status == "pass", f"{k}: {r.residual}"
    assert wall < limit_s


def timed(ids, cfg=None, jobs=4):
    t = time.perf_counter()
    reps = run_all(ids, cfg, jobs)
    return reps, time.perf_counter() - t


def test_criterion_1_clifford():
    reps, wall = timed([k for k in C.REGISTRY if k.startswith("clifford.")])
    judge(1, reps, 30, wall)


def test_criterion_2_brackets():
    reps, wall = timed(["bracket.axioms"], C.CheckConfig(samples=100, seed=0))
    assert reps["bracket.axioms"].params["samples"] >= 100
    judge(2, reps, 120, wall, f"nonzero brackets in {reps['bracket.axioms'].params.get('nonzero_brackets')}/100 samples")


def test_criterion_3_particle():
    reps, wall = timed([k for k in C.REGISTRY if k.startswith("particle.")])
    judge(3, reps, 60, wall)


def test_criterion_4_superparticle():
    ids = ["super.s_squared", "super.psi_recursion", "super.sQ", "super.q_psi", "super.q_g0"]
    reps, wall = timed(ids, C.CheckConfig(K=6, N=8))
    judge(4, reps, 600, wall, "𝗌Q holds with −2e⁺θ₁ (super.sQ)",
          literal={"super.sQ_literal": C.CheckConfig(K=6, N=8)})


@pytest.mark.xfail(strict=True, reason="𝗌Q = ∂(pγθ₀ + 2e⁺θ₁) fails at order e⁺θ₁; ledgered sign conflict")
def test_criterion_4_literal_sQ():
    r = C.run_check("super.sQ_literal", C.CheckConfig(K=6, N=8))
    assert r.status == "pass", r.residual


def test_criterion_5_lorentz():
    ids = ["ce.sM", "ce.relations", "ce.MD", "ce.d_squared"]
    reps, wall = timed(ids)
    assert reps["ce.relations"].params["pairs"] >= 10
    judge(5, reps, 600, wall)


def test_criterion_6_thom_whitney():
    ids = ["tw.delta_squared", "tw.functoriality", "tw.faces", "tw.dd_identity", "tw.ggg0",
           "tw.g0_identity", "tw.cocycles"]
    reps, wall = timed(ids, C.CheckConfig(K=4, N=6), jobs=7)
    judge(6, reps, 1200, wall, "k=0 telescoping holds with +B₋₁; cocycles hold on charts and in form degree 0",
          literal={"tw.ggg0_literal": C.CheckConfig(K=4, N=6, kmax=0),
                   "tw.cocycles_literal": C.CheckConfig(K=4, N=6, kmax=1, charts=3)})


@pytest.mark.xfail(strict=True, reason="GGG0 at k=0 holds with +B₋₁, not −B₋₁; ledgered")
def test_criterion_6_literal_ggg0():
    r = C.run_check("tw.ggg0_literal", C.CheckConfig(K=4, N=6, kmax=0))
    assert r.status == "pass", r.residual


@pytest.mark.xfail(strict=True, reason="(δ+𝗌)𝖼 and (δ+𝗌)𝗑 pick up dt-terms on edges; ledgered")
def test_criterion_6_literal_cocycles():
    r = C.run_check("tw.cocycles_literal", C.CheckConfig(K=4, N=6, kmax=1, charts=3))
    assert r.status == "pass", r.residual


def test_criterion_7_maurer_cartan():
    t = time.perf_counter()
    closed = C.run_check("mc.rhs_closed", C.CheckConfig())
    g1 = C.run_check("mc.solve_g1", C.CheckConfig())
    wall = time.perf_counter() - t
    ok = closed.status == "pass" and g1.status in ("pass", "infeasible_at_bounds") and wall < 3600
    record_criterion(7, ok, f"rhs closed: {closed.status}; 𝖦₁ solve: {g1.status} "
                            f"({g1.params.get('solver', {})}); {wall:.0f}s (limit 3600s)")
    assert closed.status == "pass", closed.residual
    assert g1.status in ("pass", "infeasible_at_bounds"), g1.residual
    assert wall < 3600


def test_criterion_8_roundtrip_and_determinism(capsys):
    rt = C.run_check("io.roundtrip", C.CheckConfig(seed=0))
    argv = ["check", "bracket.axioms", "io.roundtrip", "particle", "--seed", "3", "--report", "json", "--no-timing"]
    main(argv)
    a = capsys.readouterr().out
    main(argv)
    b = capsys.readouterr().out
    reps = [json.loads(l) for l in a.splitlines()]
    ok = rt.status == "pass" and rt.params["polynomials"] >= 1000 and a == b
    record_criterion(8, ok, f"{rt.params['polynomials']} round trips; two seeded runs byte-identical: {a == b}")
    assert rt.status == "pass"
    assert a == b and len(reps) == 8
