"""
Acceptance suite.  Every check prints one PASS/FAIL line; the lines are
repeated in the pytest terminal summary.  Run directly with
``python tests/test_acceptance.py`` to get only the report.

Lines tagged with a trailing prime (e.g. 7a') are supplementary checks
recorded next to a literal criterion that does not hold.
"""
import functools
import math
import os
import random
import sys
import tempfile
import time
from fractions import Fraction
from pathlib import Path

import numpy as np

sys.path.insert(0, os.path.dirname(__file__))

from oracles import adaptive_gauss_legendre, brute_gauss  # noqa: E402
from sphere_talbot.carpet import local_maxima, slice_profile  # noqa: E402
from sphere_talbot.cli import PRESETS, run_carpet, run_optical  # noqa: E402
from sphere_talbot.diophantine import convergents, error_indicator  # noqa: E402
from sphere_talbot.evolution import limit_profile, psi_rational, psi_series  # noqa: E402
from sphere_talbot.gauss_sums import gauss_modulus_sq, gauss_sum_row, phase_normalized_gauss  # noqa: E402
from sphere_talbot.legendre_kernel import generating_function, normalization_constant  # noqa: E402
from sphere_talbot.singularity_atlas import blowup_indices, verify_blowup_numerically  # noqa: E402
from sphere_talbot.valleys import CANDIDATE, scan_zeros, shadow_mask, slice_grid, v0_slices  # noqa: E402

RESULTS = []


def report(cid, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'} [{cid}] {detail}"
    RESULTS.append(line)
    print(line)
    return ok


def _coprime(q):
    return [a for a in range(q) if math.gcd(a, q) == 1]


@functools.cache
def _fig3():
    out = Path(tempfile.mkdtemp(prefix="fig3-"))
    t0 = time.perf_counter()
    grid, _ = run_carpet(PRESETS["fig3"].params, out, "fig3", threads=os.cpu_count())
    return grid, time.perf_counter() - t0, out


@functools.cache
def _fig1():
    out = Path(tempfile.mkdtemp(prefix="fig1-"))
    t0 = time.perf_counter()
    grid, _ = run_optical(PRESETS["fig1"].params, out, "fig1")
    return grid, time.perf_counter() - t0


def _corr(u, v):
    return float(np.corrcoef(u, v)[0, 1])


# 1 ---------------------------------------------------------------------------

def test_1_gauss_theorems():
    t0 = time.perf_counter()
    bad_zero = bad_mod = bad_phase = 0
    count = 0
    for q in range(1, 61):
        tol = 1e-9 * math.sqrt(q)
        for a in _coprime(q) or [0]:
            g = gauss_sum_row(a, q)
            b = np.arange(q)
            dead = (2 * (b + 1) + q) % 4 == 0
            bad_zero += int(np.sum((np.abs(g) < tol) != dead))
            if q % 2:
                closed = np.full(q, float(q))
            else:
                closed = np.where((a * (q // 2) + b) % 2 == 0, 2.0 * q, 0.0)
            bad_mod += int(np.sum(np.abs(np.abs(g) ** 2 - closed) > 1e-9 * q))
            bad_mod += sum(gauss_modulus_sq(a, int(x), q) != closed[x] for x in b)
            vals = np.array([phase_normalized_gauss(a, int(x), q) for x in b[~dead]])
            bad_phase += int(np.sum(np.abs(vals - vals[0]) > tol))
            count += q
    dt = time.perf_counter() - t0
    ok = bad_zero == bad_mod == bad_phase == 0 and dt < 10
    assert report(
        "1", ok,
        f"{count} triples q<=60: vanishing mismatches={bad_zero}, modulus mismatches={bad_mod}, "
        f"phase mismatches={bad_phase}, {dt:.2f}s (<10s)",
    )


# 2 ---------------------------------------------------------------------------

def test_2_closed_form_vs_series():
    t0 = time.perf_counter()
    rng = random.Random(20240601)
    pool = [(a, q) for q in range(1, 21) for a in _coprime(q) or [0]]
    picks = rng.sample(pool, 30)
    th = np.array([rng.uniform(0.0, math.pi) for _ in range(50)])
    worst = 0.0
    for a, q in picks:
        s = psi_series(th, 2 * math.pi * a / q, 0.9)
        c = psi_rational(th, (a, q), 0.9)
        worst = max(worst, float(np.max(np.abs(s - c) / np.abs(s))))
    dt = time.perf_counter() - t0
    assert report("2", worst <= 1e-8 and dt < 30,
                  f"30 times x 50 angles, r=0.9: max pointwise relative difference {worst:.2e} (<=1e-8), {dt:.2f}s (<30s)")


# 3 ---------------------------------------------------------------------------

def test_3_unitarity():
    worst, nodes = 0.0, []
    for r in (0.5, 0.9, 0.95):
        for t in (0.0, 0.3, 2 * math.pi * 3 / 7):
            f = lambda th: 2 * math.pi * np.abs(psi_series(th, t, r)) ** 2 * np.sin(th)
            val, n = adaptive_gauss_legendre(f, 0.0, math.pi, tol=1e-10)
            worst = max(worst, abs(val - 1.0))
            nodes.append(n)
    assert report("3", worst <= 1e-5 and min(nodes) >= 10_000,
                  f"max |norm - 1| = {worst:.2e} (<=1e-5) with >= {min(nodes)} nodes")


# 4 ---------------------------------------------------------------------------

def test_4a_pi_periodicity():
    th = np.linspace(0.0, math.pi, 1001)
    worst = max(float(np.max(np.abs(psi_series(th, math.pi, r) - psi_series(th, 0.0, r))))
                for r in (0.5, 0.9, 0.95))
    assert report("4a", worst <= 1e-10, f"max |Psi(theta, pi) - Psi(theta, 0)| = {worst:.2e} (<=1e-10)")


def test_4b_half_period():
    th = np.linspace(0.0, math.pi, 1001)
    worst = 0.0
    for r in (0.5, 0.9, 0.95):
        ref = normalization_constant(r) * generating_function(r, th)
        worst = max(worst, float(np.max(np.abs(psi_rational(th, (1, 2), r) - ref))))
    assert report("4b", worst <= 1e-12, f"psi_rational at (1,2) vs c_r F(r, theta): {worst:.2e} (<=1e-12)")


# 5 ---------------------------------------------------------------------------

def _enumeration(a, q):
    # blow-ups: every k for odd q, even k for q = 2 mod 4, odd k for 4 | q
    if q % 2:
        return list(range(q // 2 + 1))
    return list(range(0 if q % 4 == 2 else 1, q // 2 + 1, 2))


def test_5a_atlas_enumeration():
    bad = 0
    for q in range(1, 41):
        for a in _coprime(q) or [0]:
            got = blowup_indices((a, q))
            brute = [k for k in range(q // 2 + 1) if abs(brute_gauss(a, a + k, q)) > 1e-6]
            bad += got != _enumeration(a, q) or got != brute
    assert report("5a", bad == 0, f"atlas vs parity enumeration and brute-force sums for q<=40: {bad} mismatches")


def test_5b_blowup_growth():
    rows, ok = [], True
    for aq in [(2, 7), (7, 15), (1, 12), (3, 14)]:
        for k in blowup_indices(aq):
            chk = verify_blowup_numerically(aq, k, rs=(0.9, 0.95, 0.97))
            ok &= chk.ok
            rows.append(f"{aq[0]}/{aq[1]}:k={k}{'' if chk.ok else '(x)'}")
    assert report("5b", ok, "monotone growth in r right of each blow-up, bounded left: " + " ".join(rows))


# 6 ---------------------------------------------------------------------------

def test_6a_valley_cancellation():
    worst = 0.0
    for s in v0_slices(16):
        a, q = s.rt.a, s.rt.q
        th = np.linspace(0.0, 2 * math.pi / q - 1e-4, 2000)
        # unregularized sum, so the cancellation is actually computed
        raw = np.max(np.abs(limit_profile(th, (a, q), regularize=False)))
        med = np.median(np.abs(limit_profile(slice_grid(1024), (a, q))))
        worst = max(worst, raw / med)
    assert report("6a", worst <= 1e-8, f"max |S| / slice median on the proven arcs, 4|q<=16: {worst:.2e} (<=1e-8)")


def test_6b_mask_nesting():
    grid = _fig3()[0]
    m25 = shadow_mask(grid, 0.025)
    m5 = shadow_mask(grid, 0.05)
    outside = int(np.sum(m25 & ~m5))
    assert report("6b", outside == 0,
                  f"fig3 carpet: 2.5% mask ({int(m25.sum())} cells) inside 5% mask ({int(m5.sum())} cells), {outside} outside")


# 7 ---------------------------------------------------------------------------

TARGETS = [Fraction(4, 15), Fraction(27, 101), Fraction(31, 116)]


def test_7a_first_five_convergents():
    first = [c.fraction for c in convergents(1 / math.sqrt(14), 5)]
    missing = [str(f) for f in TARGETS if f not in first]
    assert report("7a", not missing,
                  f"first five convergents {[str(f) for f in first]}; missing {missing or 'none'}")


def test_7a_supplementary_first_six():
    first = [c.fraction for c in convergents(1 / math.sqrt(14), 6)]
    assert report("7a'", all(f in first for f in TARGETS),
                  "4/15, 27/101, 31/116 are convergents 4-6 of 1/sqrt(14) (exact match)")


def test_7b_epsilons():
    cs = {c.fraction: c for c in convergents(1 / math.sqrt(14), 6)}
    eps = [cs[f].epsilon for f in TARGETS]
    ok = all(e < 1 for e in eps) and min(eps) < 1 / math.sqrt(5)
    assert report("7b", ok, "epsilon = " + ", ".join(f"{f}:{e:.4f}" for f, e in zip(TARGETS, eps))
                  + f"; min < 1/sqrt(5) = {1 / math.sqrt(5):.4f}")


# 8 ---------------------------------------------------------------------------

def _small_q_times():
    return sorted({Fraction(a, q) for q in range(1, 8) for a in range(q + 1)
                   if math.gcd(a, q) == 1 and Fraction(a, q) <= Fraction(1, 2)})


def test_8a_fig3_runtime():
    grid, dt, out = _fig3()
    ok = dt < 300 and (out / "fig3.pgm").stat().st_size == len(b"P5\n1024 1024\n255\n") + 1024 * 1024
    assert report("8a", ok, f"fig3 1024x1024, L=1000, r=0.95 in {dt:.1f}s (<300s) with {os.cpu_count()} thread(s)")


def _peak_offsets(theta, values, times, r, window):
    """For each predicted blow-up: nearest local maximum, and whether one lies in (theta_k, theta_k + window]."""
    near, in_window = [], []
    for f, col in zip(times, values):
        mx = theta[local_maxima(col)]
        for k in blowup_indices((f.numerator, f.denominator)):
            th_k = 2 * math.pi * k / f.denominator
            if th_k > math.pi:
                continue
            d = mx - th_k
            near.append(float(np.min(np.abs(d))))
            in_window.append(bool(np.any((d > 0) & (d <= window))))
    return np.array(near), np.array(in_window)


def test_8b_fig3_peaks_within_one_cell():
    grid = _fig3()[0]
    times = _small_q_times()
    cols = [grid.column(2 * math.pi * float(f))[1] for f in times]
    cell = math.pi / grid.y_axis.size
    near, _ = _peak_offsets(grid.y_axis, cols, times, 0.95, 0.1)
    hits = int(np.sum(near <= cell))
    assert report("8b", hits == near.size,
                  f"{hits}/{near.size} predicted blow-ups (q<=7) have a column maximum within one cell; "
                  f"nearest maxima lie {near.min() / cell:.1f}-{near.max() / cell:.1f} cells away")


def test_8b_supplementary_right_window():
    grid = _fig3()[0]
    times = _small_q_times()
    window = 2 * (1 - 0.95)
    cols = [grid.column(2 * math.pi * float(f))[1] for f in times]
    _, in_carpet = _peak_offsets(grid.y_axis, cols, times, 0.95, window)
    slices = [slice_profile((f.numerator, f.denominator), 0.95, 1024)["density"] for f in times]
    _, in_slice = _peak_offsets(slice_grid(1024), slices, times, 0.95, window)
    ok = in_carpet.all() and in_slice.all()
    assert report("8b'", ok,
                  f"maximum in (theta_k, theta_k + 2(1-r)]: carpet columns {int(in_carpet.sum())}/{in_carpet.size}, "
                  f"exact slices {int(in_slice.sum())}/{in_slice.size}")


def test_8c_fig1():
    grid, dt = _fig1()
    p = PRESETS["fig1"].params
    c = _corr(grid.column(0.0)[1], grid.column(2.0 * p["inv_lambda"])[1])
    ci = _corr(grid.column(0.0)[1] ** 2, grid.column(2.0 * p["inv_lambda"])[1] ** 2)
    assert report("8c", dt < 30 and c > 0.9,
                  f"fig1 300x300 in {dt:.2f}s (<30s); amplitude column correlation x=2/lambda vs x=0: {c:.3f} (>0.9) "
                  f"[intensity: {ci:.3f}]")


# 9 ---------------------------------------------------------------------------

def _runs(zs, n):
    th = np.array([z.theta for z in zs if z.label == CANDIDATE])
    if th.size == 0:
        return 0
    return 1 + int(np.sum(np.diff(th) > 1.5 * math.pi / n))


def test_9a_candidate_counts_stable():
    times = [(1, 3), (1, 4), (1, 5), (1, 6), (2, 7), (1, 8), (3, 8), (1, 12), (5, 12), (3, 14), (7, 15), (3, 16)]
    rows, ok = [], True
    for aq in times:
        c1 = _runs(scan_zeros(aq, 1024), 1024)
        c4 = _runs(scan_zeros(aq, 4096), 4096)
        ok &= c1 == c4
        rows.append(f"{aq[0]}/{aq[1]}:{c1}->{c4}")
    assert report("9a", ok, "CANDIDATE zero clusters at 1024 -> 4096 cells (no claim of V = V0): " + " ".join(rows))


def test_9b_indicator_decreases_at_theta_1():
    E = [error_indicator(c, 0.95, 1.0) for c in convergents(1 / math.sqrt(14), 6)]
    ok = all(e1 > e2 for e1, e2 in zip(E, E[1:]))
    assert report("9b", ok, "E along convergents at r=0.95, theta=1: " + ", ".join(f"{e:.3g}" for e in E)
                  + " (|log theta| = 0 makes E vanish identically)")


def test_9b_supplementary_other_angles():
    cs = convergents(1 / math.sqrt(14), 6)
    ok = True
    for theta in (0.5, 2.0):
        E = [error_indicator(c, 0.95, theta) for c in cs]
        ok &= all(e1 > e2 for e1, e2 in zip(E, E[1:]))
    assert report("9b'", ok, "E strictly decreases along the six convergents at r=0.95, theta in {0.5, 2.0}")


if __name__ == "__main__":
    failed = 0
    for name, fn in list(globals().items()):
        if name.startswith("test_") and callable(fn):
            try:
                fn()
            except AssertionError:
                failed += 1
    print(f"\n{len(RESULTS) - failed} passed, {failed} failed")
    sys.exit(1 if failed else 0)
