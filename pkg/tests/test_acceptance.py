"""Exit criteria. Each test prints one PASS/FAIL line and then asserts it.

Run alone with ``pytest -m acceptance -v``.
"""

import json
import math
import time

import numpy as np
import pytest

from resonator_metrology import (
    ModelConfig,
    ObservableId,
    cfi_error_propagation,
    cfi_projective,
    qfi,
    qfim,
    wigner_grid,
)
from resonator_metrology.estimation import probe_with_derivatives
from resonator_metrology.sweep import Axis, Convergence, Quantity, SweepSpec, evaluate_point, run_sweep
from resonator_metrology.sweep.cli import run as cli_run
from resonator_metrology.sweep.figures import panels
from resonator_metrology.sweep.runner import NOISE_COLUMNS, _close

pytestmark = pytest.mark.acceptance

QUAD, RP = "quadratic", "radiation_pressure"


@pytest.fixture
def report(capsys):
    def emit(label, ok, detail, elapsed=None):
        t = "" if elapsed is None else f" [{elapsed:.1f}s]"
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} {label}: {detail}{t}")
        assert ok, detail

    return emit


def bose(omega, t):
    return 1.0 / math.expm1(omega / t)


def test_c01_decoupled_thermometry(report):
    t0 = time.perf_counter()
    temps = (0.1, 0.3, 1.0)
    # B is untouched at g = 0, so only the probe cutoff matters
    base = ModelConfig(g=0.0, temperature=0.1, n_a=30, n_b=10)
    errs, flags = [], []
    for t in temps:
        spec = SweepSpec(base.with_(temperature=t), (), (Quantity("qfi_t"),), Convergence(True, 1e-6, 45))
        row = run_sweep(spec, timing=False).rows[0]
        nb = bose(1.0, t)
        exact = nb * (nb + 1) / t**4
        errs.append(abs(row.values["qfi_t"] - exact) / exact)
        flags.append(row.converged and row.cutoff[0] >= 30)
    ok = max(errs) <= 1e-4 and all(flags)
    report(
        "criterion 1 (decoupled thermometry oracle)",
        ok,
        f"max rel err {max(errs):.2e} <= 1e-4, converged={flags}",
        time.perf_counter() - t0,
    )


def test_c02_factorization_zero(report):
    t0 = time.perf_counter()
    worst = 0.0
    for it in (QUAD, RP):
        for t, b in ((0.1, 0.0), (0.3, 0.04), (1.0, 0.1)):
            cfg = ModelConfig(g=0.0, temperature=t, b_ext=b, interaction=it)
            rho, dt, db = probe_with_derivatives(cfg)
            vals = [qfi(rho, db), qfim(rho, dt, db).f_tb]
            for obs in ObservableId:
                vals.append(cfi_projective(rho, db, obs))
                vals.append(cfi_error_propagation(cfg, obs, "b"))
            worst = max(worst, max(abs(v) for v in vals))
    report("criterion 2 (factorization zero)", worst <= 1e-8, f"max |value| {worst:.2e} <= 1e-8", time.perf_counter() - t0)


# cfi_projective / QFI for photon counting under radiation pressure at the
# criterion-3 point; the probe is diagonal in the Fock basis so the ratio is one
RP_PHOTON_RATIO = {"t": 1.0, "b": 1.0}


def test_c03_optimality_chain(report):
    t0 = time.perf_counter()
    slack = 1e-6
    bad, ratios = [], {}
    for it in (QUAD, RP):
        cfg = ModelConfig(g=0.02, temperature=0.2, b_ext=0.04, interaction=it)
        rho, dt, db = probe_with_derivatives(cfg)
        for tag, d in (("t", dt), ("b", db)):
            f = qfi(rho, d)
            for obs in ObservableId:
                ep = cfi_error_propagation(cfg, obs, tag)
                pr = cfi_projective(rho, d, obs)
                if not (ep <= pr + slack and pr <= f + slack):
                    bad.append(f"{it}/{tag}/{obs.value}: {ep:.6g} <= {pr:.6g} <= {f:.6g}")
                if it == RP and obs is ObservableId.PHOTON_NUMBER:
                    ratios[tag] = pr / f
    near = all(r >= 0.95 and abs(r - RP_PHOTON_RATIO[k]) <= 1e-6 for k, r in ratios.items())
    detail = "; ".join(bad) if bad else "16 chains hold"
    detail += ", RP photon ratio " + ", ".join(f"{k}={v:.9f}" for k, v in ratios.items())
    report("criterion 3 (optimality chain)", not bad and near, detail, time.perf_counter() - t0)


def test_c04_wigner_oracles(report):
    t0 = time.perf_counter()
    n = 60
    vac = np.zeros((n, n))
    vac[0, 0] = 1
    fock1 = np.zeros((n, n))
    fock1[1, 1] = 1
    # thermal nbar = 1: p_k = 2^-(k+1); 60 levels leave 2^-60 outside
    therm = np.diag(0.5 ** np.arange(1, n + 1))
    therm /= np.trace(therm)
    cases = ((vac, 1 / math.pi), (fock1, -1 / math.pi), (therm, 1 / (3 * math.pi)))
    centre_err, norm_err = 0.0, 0.0
    for rho, expected in cases:
        grid = wigner_grid(rho)
        i = len(grid.xs) // 2
        assert grid.xs[i] == 0 and grid.ps[i] == 0
        centre_err = max(centre_err, abs(grid.values[i, i] - expected))
        norm_err = max(norm_err, abs(grid.total_integral - 1))
    ok = centre_err <= 1e-8 and norm_err <= 1e-2
    report(
        "criterion 4 (Wigner oracles)",
        ok,
        f"centre err {centre_err:.2e} <= 1e-8, normalization err {norm_err:.2e} <= 1e-2",
        time.perf_counter() - t0,
    )


def _fig2_point(tag):
    (panel,) = [p for p in panels("fig2") if p.name == tag]
    return panel.point


def test_c05a_rp_not_squeezed(report):
    t0 = time.perf_counter()
    cfg = _fig2_point("rp_g0.08")
    v = evaluate_point(cfg, [Quantity("nongauss")]).values
    ok = v["min_rotated_variance"] >= 0.5 - 1e-6 and v["delta"] <= 1e-3
    report(
        "criterion 5a (radiation pressure g=0.08: no squeezing, near Gaussian)",
        ok,
        f"min rotated variance {v['min_rotated_variance']:.6f} >= 0.5, delta {v['delta']:.2e} <= 1e-3",
        time.perf_counter() - t0,
    )


def test_c05b_quadratic_squeezed(report):
    t0 = time.perf_counter()
    cfg = _fig2_point("quadratic_g0.04")
    v = evaluate_point(cfg, [Quantity("nongauss")]).values
    ok = v["min_rotated_variance"] < 0.5
    report(
        "criterion 5b (quadratic g=0.04 squeezed)",
        ok,
        f"min rotated variance {v['min_rotated_variance']:.6f} < 0.5 at cutoffs ({cfg.n_a}, {cfg.n_b})",
        time.perf_counter() - t0,
    )


def test_c05c_quadratic_negativity(report):
    t0 = time.perf_counter()
    cfg = _fig2_point("quadratic_g0.08")
    v = evaluate_point(cfg, [Quantity("wigner")]).values
    ok = v["wigner_min"] < 0 and v["wigner_negative_volume"] > 0
    report(
        "criterion 5c (quadratic g=0.08 Wigner negativity)",
        ok,
        f"min {v['wigner_min']:.3e} < 0, negative volume {v['wigner_negative_volume']:.3e} > 0",
        time.perf_counter() - t0,
    )


def test_c06_nonmonotonic_qfi(report):
    t0 = time.perf_counter()
    (panel,) = panels("fig5")
    res = run_sweep(panel.spec, threads=4, timing=False)
    f = res.column("qfi_t")
    k = int(np.argmax(f))
    ratio = f[k] / f[0]
    ok = len(f) == 19 and 0 < k < 18 and ratio >= 10
    report(
        "criterion 6 (nonmonotonic QFI vs g)",
        ok,
        f"argmax index {k} of 19 (g={res.column('g')[k]:.3f}), ratio {ratio:.1f} >= 10",
        time.perf_counter() - t0,
    )


def test_c07_kurtosis(report):
    t0 = time.perf_counter()
    (panel,) = panels("fig3")
    res = run_sweep(panel.spec, threads=4, timing=False)
    g = res.column("g")
    kx, kp = res.column("kurtosis_x"), res.column("kurtosis_p")
    near = np.abs(g - 0.04) <= 0.01
    ok = bool(np.nanmin(kx) < 2.9 and np.nanmax(kp[near]) > 3.1)
    report(
        "criterion 7 (kurtosis signature)",
        ok,
        f"min kappa(X) {np.nanmin(kx):.3f} < 2.9, max kappa(P) near g=0.04 {np.nanmax(kp[near]):.3f} > 3.1",
        time.perf_counter() - t0,
    )


def test_c08_sld_consistency(report):
    t0 = time.perf_counter()
    rng = np.random.default_rng(8)
    worst = dict(res=0.0, mean=0.0, rel=0.0, r_tb=0.0, c_ratio=0.0)
    for i in range(20):
        cfg = ModelConfig(
            g=float(rng.uniform(0.0, 0.1)),
            temperature=float(rng.uniform(0.02, 1.0)),
            b_ext=float(rng.uniform(0.0, 0.1)),
            interaction=(QUAD, RP)[i % 2],
        )
        v = evaluate_point(cfg, [Quantity("sld_check"), Quantity("qfim")]).values
        worst["res"] = max(worst["res"], v["sld_residual_t"], v["sld_residual_b"])
        worst["mean"] = max(worst["mean"], abs(v["sld_mean_t"]), abs(v["sld_mean_b"]))
        worst["rel"] = max(worst["rel"], v["sld_qfi_rel_err_t"], v["sld_qfi_rel_err_b"])
        worst["r_tb"] = max(worst["r_tb"], v["r_tb"])
        scale = math.sqrt(max(v["f_tt"] * v["f_bb"], 0.0))
        c = abs(v["c_tb"])
        worst["c_ratio"] = max(worst["c_ratio"], c / scale if scale > 0 else (0.0 if c == 0 else math.inf))
    ok = (
        worst["res"] <= 1e-7
        and worst["mean"] <= 1e-9
        and worst["rel"] <= 1e-6
        and worst["r_tb"] <= 1e-9
        and worst["c_ratio"] <= 1e-6
    )
    detail = (
        f"residual {worst['res']:.1e}, |Tr rho L| {worst['mean']:.1e}, QFI rel {worst['rel']:.1e}, "
        f"r_tb {worst['r_tb']:.1e}, |c_tb|/sqrt(FttFbb) {worst['c_ratio']:.1e}"
    )
    report("criterion 8 (SLD consistency, 20 points)", ok, detail, time.perf_counter() - t0)


def test_c09_joint_estimation(report):
    t0 = time.perf_counter()
    bad, corner = [], 0.0
    for panel in panels("fig7"):
        if not panel.name.startswith("quadratic"):
            continue
        res = run_sweep(panel.spec, threads=4, timing=False)
        t = res.column("temperature")
        for row, tv in zip(res.rows, t):
            v = row.values
            m = np.array([[v["f_tt"], v["f_tb"]], [v["f_tb"], v["f_bb"]]])
            lo = np.linalg.eigvalsh(m)[0]
            if not (np.array_equal(m, m.T) and lo >= -1e-8 and v["det_fq"] >= -1e-8):
                bad.append(f"{panel.name} row {row.index}: eig {lo:.2e}, det {v['det_fq']:.2e}")
            if tv == t.min() or tv == t.max():
                corner = max(corner, abs(v["f_tb"]))
    ok = not bad and corner <= 1e-6
    detail = ("; ".join(bad[:3]) + "; " if bad else "all QFIMs symmetric PSD, det >= -1e-8; ") + (
        f"max |F_TB| at T corners {corner:.2e} <= 1e-6"
    )
    report("criterion 9 (joint-estimation structure)", ok, detail, time.perf_counter() - t0)


def test_c10_determinism_and_plumbing(report, tmp_path, capsys):
    t0 = time.perf_counter()
    cfg = tmp_path / "spec.json"
    spec = {
        "base": {"g": 0.04, "temperature": 0.2, "b_ext": 0.02, "interaction": "quadratic", "n_a": 12, "n_b": 12},
        "axes": [
            {"name": "temperature", "min": 0.05, "max": 1.0, "count": 4},
            {"name": "b_ext", "min": 0.0, "max": 0.1, "count": 3},
        ],
        "quantities": ["qfi_t", "qfim", "nongauss", {"name": "cfi", "observable": "parity", "param": "b_ext"}],
    }
    cfg.write_text(json.dumps(spec))
    outs = []
    codes = []
    for i, threads in enumerate((1, 1, 4)):
        out = tmp_path / f"run{i}.csv"
        codes.append(cli_run(["qfim", "--config", str(cfg), "--out", str(out), "--threads", str(threads), "--seedless"]))
        outs.append(out.read_bytes())
    same = outs[0] == outs[1] == outs[2]

    spec["base"]["temperature"] = -1.0
    cfg.write_text(json.dumps(spec))
    capsys.readouterr()
    bad_code = cli_run(["qfim", "--config", str(cfg)])
    err = capsys.readouterr().err
    ok = codes == [0, 0, 0] and same and bad_code == 2 and "base" in err
    report(
        "criterion 10 (determinism and plumbing)",
        ok,
        f"exit codes {codes}, byte-identical across runs and threads: {same}, malformed config exit {bad_code}, "
        f"diagnostic {err.strip()!r}",
        time.perf_counter() - t0,
    )


def test_converged_rows_spot_check(report):
    """Rows flagged converged must move by at most tol when both cutoffs grow by 5."""
    t0 = time.perf_counter()
    tol = 1e-6
    base = ModelConfig(g=0.02, temperature=0.03, b_ext=0.04, interaction=RP, n_a=10, n_b=20)
    quantities = (Quantity("qfi_t"), Quantity("qfi_b"))
    spec = SweepSpec(base, (Axis("g", 0.005, 0.05, 10),), quantities, Convergence(True, tol, 40))
    res = run_sweep(spec, threads=4, timing=False)
    rows = [r for r in res.rows if r.converged]
    rng = np.random.default_rng(5)
    picks = rng.choice(len(rows), size=min(5, len(rows)), replace=False)
    bad = []
    for k in picks:
        r = rows[k]
        cfg = base.with_(g=r.coords[0]).with_cutoffs(r.cutoff[0] + 5, r.cutoff[1] + 5)
        new = evaluate_point(cfg, quantities).values
        old = {c: v for c, v in r.values.items() if c not in NOISE_COLUMNS}
        if not _close({c: new[c] for c in old}, old, tol):
            bad.append(r.index)
    ok = len(rows) >= 5 and not bad
    report(
        "invariant (converged rows stable at cutoff + 5)",
        ok,
        f"{len(rows)} of {len(res.rows)} rows converged, spot-checked {len(picks)}, unstable {bad}",
        time.perf_counter() - t0,
    )
