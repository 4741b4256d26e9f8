"""Acceptance criteria, one test per criterion, each reporting a pass/fail line."""

import math
import time

import numpy as np
import pytest

from conftest import random_mixture, random_state, record_criterion, relative_steps
from mcentropy.cases import case_library
from mcentropy.cli import read_config_text
from mcentropy.config import parse_config, run_config_from_dict
from mcentropy.entropy_pairs import (
    Baseline,
    CandidateI,
    CandidateII,
    candidate1_report,
    candidate2_two_species_minors,
    congruence_diagonal,
    convolution_entropy,
    convolution_quadrature,
    entropy_hessian,
    entropy_variables,
    euler_reduction_check,
    identity,
    pair_eval,
    pair_from_conservative,
    quadratic_about,
    state_jacobians,
)
from mcentropy.fv_solver import (
    BC,
    DEFAULT_CFL,
    Field1D,
    Grid1D,
    Scheme,
    advance,
    max_wave_speed,
    step,
)
from mcentropy.numerics import fd_derivatives
from mcentropy.runner import mirror_states, run
from mcentropy.thermo import (
    ConstantCv,
    MixtureSpec,
    SpeciesSpec,
    conservative_from_primitive,
    thermo_eval,
)
from mcentropy.verification import lax_cfl_bound, lxf_pair_residual

TOL = 1e-12
BUNDLED_RUNS = ("sod2.json", "advect-Y.json", "random-riemann.json")


def rel_err(a, b):
    """Max-norm error relative to the size of the reference."""
    return float(np.max(np.abs(np.asarray(a) - b)) / max(np.max(np.abs(b)), 1e-300))


@pytest.fixture(scope="module")
def bundled_results():
    return {name: run(parse_config(read_config_text(name))) for name in BUNDLED_RUNS}


def test_criterion_01_entropy_variables_and_hessian():
    rng = np.random.default_rng(101)
    t0 = time.perf_counter()
    worst_v = worst_G = 0.0
    count = 0
    for n in (1, 2, 3):
        for _ in range(40):
            mix = random_mixture(rng, n, linear=True)
            Z = random_state(rng, n)
            u = conservative_from_primitive(Z, mix)
            fd = fd_derivatives(lambda x: float(pair_from_conservative(x, mix, Baseline()).U), u,
                                relative_steps(u))
            worst_v = max(worst_v, rel_err(entropy_variables(Z, mix), fd.gradient))
            worst_G = max(worst_G, rel_err(entropy_hessian(Z, mix).G, fd.hessian))
            count += 1
    elapsed = time.perf_counter() - t0
    ok = count >= 100 and worst_v <= 1e-6 and worst_G <= 1e-5 and elapsed < 5.0
    assert record_criterion(1, ok, f"{count} states, grad err {worst_v:.1e}, "
                                   f"Hessian err {worst_G:.1e}, {elapsed:.2f} s")


def test_criterion_02_congruence_identity():
    rng = np.random.default_rng(102)
    worst = 0.0
    for n in (1, 2, 3):
        mix = random_mixture(rng, n, linear=True)
        Z = np.array([random_state(rng, n) for _ in range(100)])
        jac = state_jacobians(Z, mix)
        G = entropy_hessian(Z, mix).G
        H = np.swapaxes(jac.dudZ, -1, -2) @ G @ jac.dudZ
        D = congruence_diagonal(Z, mix)
        for Hi, Di in zip(H, D):
            worst = max(worst, rel_err(Hi, np.diag(Di)))
    assert record_criterion(2, worst <= 1e-10, f"300 states, worst relative error {worst:.1e}")


def test_criterion_03_candidate_reductions():
    rng = np.random.default_rng(103)
    worst_pair = worst_H = 0.0
    for n in (1, 2, 3):
        mix = random_mixture(rng, n)
        for _ in range(30):
            Z = random_state(rng, n)
            base = pair_eval(Z, mix, Baseline())
            H = np.diag(congruence_diagonal(Z, mix))
            for fam in (CandidateI(tuple(identity() for _ in range(n))), CandidateII(identity())):
                pv = pair_eval(Z, mix, fam)
                worst_pair = max(worst_pair, abs(pv.U - base.U), abs(pv.F - base.F))
                worst_H = max(worst_H, rel_err(fam.congruence_matrix(Z, mix), H))
    ok = worst_pair <= 1e-14 and worst_H <= 1e-12
    assert record_criterion(3, ok, f"pair diff {worst_pair:.1e}, matrix err {worst_H:.1e}")


def _admissible_candidate1(rng, n):
    while True:
        mix = random_mixture(rng, n)
        Z = random_state(rng, n)
        s_k = thermo_eval(Z, mix).s_k
        # a common slope at each s_k keeps the family conservative
        slope = rng.uniform(0.5, 2.0)
        fam = [quadratic_about(s_k[k], 0.0, slope, -rng.uniform(0.0, 0.3)) for k in range(n)]
        rep = candidate1_report(Z, mix, fam)
        if rep.verdict == "admissible":
            return rep


def test_criterion_04_determinant_closed_forms():
    rng = np.random.default_rng(104)
    worst1 = worst2 = 0.0
    for i in range(100):
        rep = _admissible_candidate1(rng, 1 + i % 3)
        worst1 = max(worst1, abs(rep.det_closed_form / np.linalg.det(rep.matrix) - 1))
    count2 = 0
    while count2 < 100:
        mix = random_mixture(rng, 2)
        Z = random_state(rng, 2)
        s = float(thermo_eval(Z, mix).s)
        f = quadratic_about(s, rng.normal(), rng.uniform(0.2, 2.0), -rng.uniform(0.0, 2.0))
        H = CandidateII(f).congruence_matrix(Z, mix)
        direct = np.array([np.linalg.det(H[:k, :k]) for k in range(1, 5)])
        if not np.all(direct > 0):
            continue
        closed = candidate2_two_species_minors(Z, mix, f)
        worst2 = max(worst2, float(np.max(np.abs(closed / direct - 1))))
        count2 += 1
    ok = worst1 <= 1e-9 and worst2 <= 1e-9
    assert record_criterion(4, ok, f"candidate I det err {worst1:.1e}, "
                                   f"candidate II minors err {worst2:.1e}")


def test_criterion_05_euler_reduction():
    rng = np.random.default_rng(105)
    agree = total = 0
    while total < 500:
        cv, r = rng.uniform(1.0, 3.0), rng.uniform(0.3, 2.0)
        sp_ = SpeciesSpec("A", r=r, cv_model=ConstantCv(cv))
        mix = MixtureSpec((sp_,))
        Z = np.array([rng.uniform(0.1, 3.0), rng.uniform(-1, 1), rng.uniform(0.3, 3.0)])
        s = float(thermo_eval(Z, mix).s)
        value, slope, curv = rng.normal(), rng.uniform(-1, 2), rng.uniform(-2, 2)
        # skip draws on the boundary of either condition, where rounding decides
        if min(abs(slope), abs(slope - (cv + r) * curv)) < 1e-9:
            continue
        f = quadratic_about(s, value, slope, curv)
        verdict = candidate1_report(Z, mix, [f]).verdict == "admissible"
        agree += verdict == euler_reduction_check(f, sp_, [s]).harten_ok
        total += 1
    assert record_criterion(5, agree == total, f"{agree}/{total} verdicts agree")


def test_criterion_06_convolution_entropies():
    worst_f = worst_df = worst_0 = 0.0
    shape_ok = True
    for eps in (1.0, 0.3, 0.1, 0.03, 0.01):
        for s0 in (-0.7, 0.0, 1.3):
            fn = convolution_entropy(eps, s0)
            s = s0 + eps * np.linspace(-5.0, 8.0, 261)
            fq, dfq = convolution_quadrature(s, eps, s0)
            worst_f = max(worst_f, float(np.max(np.abs(fn.f(s) - fq))))
            worst_df = max(worst_df, float(np.max(np.abs(fn.df(s) - dfq))))
            df, d2f = fn.df(s), fn.d2f(s)
            shape_ok &= bool(np.all((df > 0) & (df < 1)) and np.all(d2f < 0))
            worst_0 = max(worst_0, abs(float(fn.f(s0)) + eps / (2 * math.sqrt(math.pi))))
    ok = worst_f <= 1e-8 and worst_df <= 1e-8 and shape_ok and worst_0 <= 1e-12
    assert record_criterion(6, ok, f"f err {worst_f:.1e}, df err {worst_df:.1e}, "
                                   f"shape {'ok' if shape_ok else 'violated'}, "
                                   f"f(s0) err {worst_0:.1e}")


def _min_entropy_config(case, scheme, n_cells, t_end):
    local = "stencil2" if scheme == "lxf" else "stencil3"
    return run_config_from_dict({
        "case": case, "scheme": scheme, "n_cells": n_cells, "t_end": t_end,
        "monitors": [{"kind": "min_entropy", "mode": "global"},
                     {"kind": "min_entropy", "mode": local}],
    })


def test_criterion_07_minimum_entropy_principle():
    t0 = time.perf_counter()
    worst = {}
    failures = 0
    jobs = [({"name": "sod2"}, 400, 0.2)]
    jobs += [({"name": "random-riemann", "seed": seed}, 100, 0.15) for seed in range(50)]
    for case, n_cells, t_end in jobs:
        for scheme in ("lxf", "rusanov", "hll"):
            res = run(_min_entropy_config(case, scheme, n_cells, t_end))
            for row in res.rows:
                worst[row.label] = min(worst.get(row.label, np.inf), row.worst)
                failures += not row.passed
    elapsed = time.perf_counter() - t0
    ok = failures == 0 and elapsed < 60.0
    margins = ", ".join(f"{k} {v:.1e}" for k, v in sorted(worst.items()))
    assert record_criterion(7, ok, f"{len(jobs) * 3} runs, {failures} failing steps, "
                                   f"worst margins {margins}, {elapsed:.1f} s")


def test_criterion_08_lxf_cell_entropy_inequality(bundled_results):
    res = bundled_results["sod2.json"]
    rows = [r for r in res.rows if r.monitor == "entropy_inequality"]
    labels = sorted({r.label for r in rows})
    worst = max(r.worst for r in rows)
    ok = res.config.scheme is Scheme.LXF and len(labels) == 6 and worst <= TOL
    assert record_criterion(8, ok, f"{len(res.steps)} steps, {len(labels)} entropies, "
                                   f"worst residual {worst:.1e}")


def test_criterion_09_total_entropy_decay(bundled_results):
    worst = -np.inf
    count = 0
    for res in bundled_results.values():
        rows = [r for r in res.rows if r.monitor == "total_entropy"]
        assert rows
        worst = max(worst, max(r.worst for r in rows))
        count += len(rows)
    assert record_criterion(9, worst <= TOL, f"{count} step checks over {len(BUNDLED_RUNS)} "
                                             f"runs, worst increase {worst:.1e}")


def test_criterion_10_lax_bound():
    rng = np.random.default_rng(110)
    worst_res = -np.inf
    min_bound = np.inf
    for i in range(20):
        n = 1 + i % 3
        mix = random_mixture(rng, n)
        v = conservative_from_primitive(random_state(rng, n), mix)
        w = conservative_from_primitive(random_state(rng, n), mix)
        bound = lax_cfl_bound(v, w, Baseline(), mix).lambda_bound
        min_bound = min(min_bound, bound)
        worst_res = max(worst_res, lxf_pair_residual(v, w, 0.5 * bound, mix, Baseline()))
    ok = min_bound > 0 and worst_res <= TOL
    assert record_criterion(10, ok, f"20 pairs, smallest bound {min_bound:.2e}, "
                                    f"largest residual {worst_res:.1e}")


def _periodic_field(mix, n=64):
    x = (np.arange(n) + 0.5) / n
    Z = np.column_stack([0.6 + 0.2 * np.sin(2 * np.pi * x), 0.4 + 0.1 * np.cos(2 * np.pi * x),
                         0.3 * np.sin(4 * np.pi * x), 1.0 + 0.2 * np.cos(2 * np.pi * x)])
    return Field1D(Grid1D(n, 1.0 / n, BC.PERIODIC), conservative_from_primitive(Z, mix))


def test_criterion_11_conservation_and_symmetry():
    case = case_library("sod2")
    mix = case.mixture
    drift = mirror = 0.0
    for scheme in Scheme:
        fld = _periodic_field(mix)
        start = fld.totals()
        for _ in range(100):
            lam = DEFAULT_CFL[scheme] / max_wave_speed(fld, mix)
            fld, _ = step(fld, scheme, lam, mix)
        drift = max(drift, rel_err(fld.totals(), start))

        init = case.initial_field(200)
        a, _ = advance(init, scheme, DEFAULT_CFL[scheme], 0.1, mix)
        b, _ = advance(init.with_states(mirror_states(init.states)), scheme,
                       DEFAULT_CFL[scheme], 0.1, mix)
        mirror = max(mirror, rel_err(mirror_states(b.states), a.states))
    ok = drift <= TOL and mirror <= TOL
    assert record_criterion(11, ok, f"periodic drift {drift:.1e} over 100 steps, "
                                    f"mirror error {mirror:.1e}")
