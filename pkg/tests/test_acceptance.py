"""Acceptance criteria 1-10, one PASS/FAIL line each.

Run under pytest (lines are collected and printed in the terminal summary)
or directly with ``python tests/test_acceptance.py``.
"""

import csv
import io
import json
import math
import os
import subprocess
import sys
from dataclasses import replace

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(__file__))

from conftest import ACCEPTANCE_LINES, BASELINE_TEXT  # noqa: E402
from test_gausstrace import transfer_cycle, xi_from_cycle  # noqa: E402

from pdcschmidt import estimator, spectral  # noqa: E402
from pdcschmidt.cli import EXIT_COMPUTE, EXIT_CONFIG, EXIT_OK  # noqa: E402
from pdcschmidt.gausstrace import fitted_beta_power, xi_limit, xi_tc  # noqa: E402
from pdcschmidt.kernels import FULL_SINC, THIN_CRYSTAL, KernelSpec  # noqa: E402
from pdcschmidt.params import BASELINE, derive, retarget  # noqa: E402
from pdcschmidt.pwtrace import collapsed_cycle_xi, first_trace_quadrature, xi_pw  # noqa: E402


def record(n, ok, detail, note=False):
    tag = "note" if note else ("PASS" if ok else "FAIL")
    line = f"CRITERION {n:>2} {tag}: {detail}"
    ACCEPTANCE_LINES.setdefault(n, []).append(line)
    print(line)
    return ok


def within(value, target, rel):
    return abs(value - target) <= rel * abs(target)


def test_criterion_01_parameters():
    p = derive(BASELINE)
    checks = [
        ("photons/pulse", p.photons_per_pulse, 2.01e10, 5e-3),
        ("|alpha0|", p.alpha0_mag, 0.14e6, 2e-2),
        ("beta", p.beta, 0.00211, 1e-2),
        ("K_biphot", p.k_biphot, 236.6, 5e-3),
    ]
    ok = all(within(v, t, r) for _, v, t, r in checks)
    detail = ", ".join(f"{name} = {v:.6g} (target {t:g} +-{r:.1%})" for name, v, t, r in checks)
    assert record(1, ok, detail)


def test_criterion_02_first_trace():
    worst = 0.0
    parts = []
    for beta in (1e-3, 3e-3, 1e-2, 3e-2, 1e-1):
        cfg = retarget(BASELINE, beta=beta, big_x=0.3)
        p = derive(cfg)
        target = p.eta_mag**2 * 2 / (math.pi * cfg.waist**4 * p.beta)
        res = first_trace_quadrature(p.beta, p.nu1, p.nu2, p.big_a, p.big_x)
        rel = abs(res.value / target - 1)
        worst = max(worst, rel)
        parts.append(f"{beta:g}:{rel:.1e}")
    assert record(2, worst <= 1e-6, f"max rel err {worst:.2e} <= 1e-6 over beta {' '.join(parts)}")


def test_criterion_03_plane_wave_coefficients():
    printed = estimator.series_coefficients("pw", 4, source="printed")
    worst_printed = worst_routes = 0.0
    for n in range(1, 5):
        a_n = float(estimator.lncosh_coeff(n))
        one_d = xi_pw(n).xi
        direct, _ = collapsed_cycle_xi(n)
        worst_printed = max(worst_printed, abs(a_n * one_d / printed[n - 1] - 1))
        worst_routes = max(worst_routes, abs(direct / one_d - 1))
    ok = worst_printed <= 1e-8 and worst_routes <= 1e-9
    assert record(3, ok, f"vs printed f_pw {worst_printed:.1e} <= 1e-8; 1D vs direct {worst_routes:.1e} <= 1e-9")


def test_criterion_04_thin_crystal_consistency():
    beta = 1e-2
    worst = 0.0
    for n in (1, 2, 3):
        for nu1 in (1.0, derive(BASELINE).nu1):
            ref = xi_from_cycle(n, beta, nu1, 2 - nu1, transfer_cycle(n, beta, nu1, 2 - nu1))
            worst = max(worst, abs(xi_tc(n, beta, nu1, 2 - nu1) / ref - 1))
    betas = np.geomspace(1e-4, 1e-2, 9)
    exps = [fitted_beta_power(n, betas)[0] for n in (1, 2, 3, 4)]
    exp_ok = all(abs(p + 1) <= 1e-3 for p in exps)
    xi1_err = max(abs(xi_tc(1, b) - 1) for b in (1e-3, 1e-2, 1e-1))
    ok = worst <= 5e-9 and exp_ok and xi1_err <= 1e-10
    detail = (f"analytic vs transfer-matrix {worst:.1e} <= 5e-9; beta exponents "
              f"{', '.join(f'{p:.6f}' for p in exps)}; |xi1 - 1| = {xi1_err:.1e}")
    assert record(4, ok, detail)
    limits = [xi_limit(n)[0] for n in (2, 3, 4)]
    implied = [estimator.implied_xi("tc", n) for n in (2, 3, 4)]
    record(4, True, "xi_2..4 computed " + ", ".join(f"{v:.6f}" for v in limits)
           + " vs implied " + ", ".join(f"{v:.6f}" for v in implied)
           + " (ratio 2^(n-1); see convention ledger)", note=True)


def test_criterion_05_closed_model_baseline():
    k1 = estimator.logk_model(derive(BASELINE)).k
    p100 = derive(replace(BASELINE, pump_power=100.0))
    log10_100 = estimator.logk_model(p100).log10_k
    ok = abs(k1 - 1.16) <= 0.02 and abs(log10_100 - 6.35) <= 0.35
    # the same model at the quoted X = 0.502 (enhanced cross-section 1e-2 um^2)
    p_x = derive(retarget(BASELINE, enhanced_cross_section=1e-14))
    p_low = derive(retarget(BASELINE, enhanced_cross_section=1e-15))
    record(5, True, f"at quoted strengths: X = {p_low.big_x:.5f} gives K = {estimator.logk_model(p_low).k:.4f}; "
           f"X = {p_x.big_x:.4f} gives log10 K = {estimator.logk_model(p_x).log10_k:.3f}", note=True)
    assert record(5, ok, f"K_model(1 W) = {k1:.4f} (target 1.16 +-0.02); log10 K_model(100 W) = "
                  f"{log10_100:.3f} at derived X = {p100.big_x:.4f} (target 6.35 +-0.35)")


def test_criterion_06_curve_ordering():
    bad = []
    for i in range(1, 82):
        x = 0.8 * i / 81
        c = estimator.f_curves(x)
        if not (c.f_tc <= c.f_model <= c.f_pw <= c.f_quad):
            bad.append(x)
    assert record(6, not bad, "f_tc <= f_model <= f_pw <= f_quad on 81/81 rows" if not bad
                  else f"ordering broken at X = {bad[:5]}")


def test_criterion_07_oracle_vs_series():
    worst = 0.0
    parts = []
    for x in (0.1, 0.2, 0.3):
        p = derive(retarget(BASELINE, beta=0.01, big_x=x))
        oracle = estimator.logk_oracle(p, THIN_CRYSTAL).ln_k
        series = estimator.logk_series(p, "tc").ln_k
        rel = abs(oracle - series) / oracle
        worst = max(worst, rel)
        parts.append(f"X={x}: {oracle:.6f} vs {series:.6f}")
    assert record(7, worst <= 1e-2, f"max rel diff {worst:.1e} <= 1e-2 ({'; '.join(parts)})")


def test_criterion_08_biphoton_scaling():
    betas = np.array([1e-2, 3e-3, 1e-3])
    ok = True
    details = []
    for variant in (THIN_CRYSTAL, FULL_SINC):
        kb = np.array([spectral.compute_spectrum(KernelSpec(variant, b, amplitude=0.05)).k_biphot_spectral
                       for b in betas])
        slope, intercept = np.polyfit(np.log(betas), np.log(kb), 1)
        ok = ok and abs(slope + 1) <= 0.05
        details.append(f"{variant}: exponent {slope:.4f}, K_b*beta = {kb[-1] * betas[-1]:.4f} "
                       f"at beta=1e-3 (1/(2 beta) gives 0.5)")
    assert record(8, ok, "; ".join(details))


def test_criterion_09_cross_section_sweep(tmp_path):
    from pdcschmidt.cli import main
    cfg = tmp_path / "base.cfg"
    cfg.write_text(BASELINE_TEXT)
    out = tmp_path / "sweep.csv"
    code = main(["sweep", str(cfg), "--param", "enhanced_cross_section", "--from", "1e-3", "--to", "1e-2",
                 "--points", "50", "--scale", "log", "--methods", "model", "--out", str(out)])
    ln_k = [float(r["ln_k_model"]) for r in csv.DictReader(io.StringIO(out.read_text()))]
    increasing = all(b > a for a, b in zip(ln_k, ln_k[1:]))
    ok = code == 0 and increasing and abs(ln_k[0] - 0.15) <= 0.01 and abs(ln_k[-1] - 14.6) <= 0.15
    assert record(9, ok, f"strictly increasing={increasing}, ln K {ln_k[0]:.4f} -> {ln_k[-1]:.3f} "
                  f"(~0.15 -> ~14.6), K grows by 10^{(ln_k[-1] - ln_k[0]) / math.log(10):.2f}")


def _cli(args, cwd):
    proc = subprocess.run([sys.executable, "-m", "pdcschmidt.cli", *args], capture_output=True, cwd=cwd)
    return proc.returncode, proc.stdout


def test_criterion_10_determinism_and_exit_codes(tmp_path):
    cfg = tmp_path / "base.cfg"
    cfg.write_text(BASELINE_TEXT)
    same = True
    for args in (["derive", str(cfg)], ["schmidt", str(cfg), "--method", "model"],
                 ["schmidt", str(cfg), "--method", "series-pw"], ["curves", "--points", "81"]):
        a, b = _cli(args, tmp_path), _cli(args, tmp_path)
        same = same and a == b and a[0] == EXIT_OK
    sweep = ["sweep", str(cfg), "--param", "pump_power", "--from", "1", "--to", "100", "--points", "9",
             "--methods", "model,quadratic"]
    workers_same = _cli(sweep + ["--workers", "1"], tmp_path) == _cli(sweep + ["--workers", "2"], tmp_path)
    bad = tmp_path / "bad.cfg"
    bad.write_text(BASELINE_TEXT.replace("waist = 1 mm", "waist = 1 parsec"))
    code_cfg, _ = _cli(["derive", str(bad)], tmp_path)
    code_comp, body = _cli(["schmidt", str(cfg), "--method", "oracle", "--n-angle", "48"], tmp_path)
    error_json = json.loads(body).get("error") if body else None
    ok = same and workers_same and code_cfg == EXIT_CONFIG and code_comp == EXIT_COMPUTE and error_json
    assert record(10, ok, f"byte-identical reruns={same}, workers 1 vs 2 identical={workers_same}, "
                  f"exit codes ok/config/compute = 0/{code_cfg}/{code_comp}")


if __name__ == "__main__":
    import tempfile
    from pathlib import Path

    failed = 0
    for name, fn in sorted(globals().items()):
        if not name.startswith("test_criterion"):
            continue
        try:
            if "tmp_path" in fn.__code__.co_varnames[: fn.__code__.co_argcount]:
                with tempfile.TemporaryDirectory() as d:
                    fn(Path(d))
            else:
                fn()
        except AssertionError:
            failed += 1
    sys.exit(1 if failed else 0)
