"""Exit criteria; each test records one PASS/FAIL line in the terminal summary."""

import math
import time

import numpy as np
from scipy.integrate import trapezoid

from defbec import (
    ModelParams,
    Variant,
    deviation_curve,
    drift_eigenvalues,
    fluctuation_coeffs,
    solve_deformed_steady_state,
    spectrum_surface,
    spectrum_values,
    stationary_occupation,
    undeformed_steady_state,
    xi,
)
from defbec.algebra import commutator_defect, expansion_error
from defbec.oracle import converged_cutoff, mean_amplitude, regression_spectrum, steady_density

from .conftest import ACCEPTANCE_LINES, fig1_deviation

FIG = ModelParams(delta=0.0, g=2.5, gamma=1.0, n_atoms=100.0)
ORACLE = ModelParams(delta=0.0, g=0.5, gamma=1.0, n_atoms=25.0)


class Criterion:
    def __init__(self, number, title):
        self.number, self.title = number, title
        self.checks = []
        self.t0 = time.perf_counter()

    def check(self, ok, what):
        self.checks.append((bool(ok), what))

    def finish(self, budget=None, note=""):
        elapsed = time.perf_counter() - self.t0
        if budget is not None:
            self.check(elapsed < budget, f"runtime {elapsed:.2f}s < {budget}s")
        failed = [w for ok, w in self.checks if not ok]
        status = "PASS" if not failed else "FAIL"
        line = f"[{status}] {self.number}. {self.title} ({elapsed:.2f}s)"
        if note:
            line += f" -- {note}"
        if failed:
            line += " | failed: " + "; ".join(failed)
        print(line)
        ACCEPTANCE_LINES.append(line)
        assert not failed, line


def test_1_fig1_deviation_curve():
    cr = Criterion(1, "deviation curve vs closed form")
    ns = [25, 50, 100, 400, 1e6]
    rows = deviation_curve(FIG, ns)
    for r in rows:
        ref = fig1_deviation(r.n_atoms)
        cr.check(r.ok and abs(r.deviation - ref) <= 1e-9 * ref, f"N={r.n_atoms:g} rel 1e-9")
    cr.check(round(rows[0].deviation, 6) == 0.252551, "N=25 -> 0.252551")
    cr.check(round(rows[2].deviation, 6) == 0.073593, "N=100 -> 0.073593")
    dense = deviation_curve(FIG, np.geomspace(20, 1e6, 60))
    devs = np.array([r.deviation for r in dense])
    cr.check(np.all(np.diff(devs) < 0), "monotone decreasing")
    cr.check(devs[-1] < 1e-5, "tends to zero")
    cr.finish(budget=1.0, note=f"dev(25)={rows[0].deviation:.6f}, dev(100)={rows[2].deviation:.6f}")


def test_2_fig2_spectrum_surface():
    cr = Criterion(2, "spectrum surface, paper variant")
    s0 = float(spectrum_values(FIG, 0.0, Variant.PAPER))
    cr.check(abs(s0 - 3.7071e-5) <= 1e-3 * 3.7071e-5, "S(0, N=100) = 3.7071e-5 rel 1e-3")

    t0 = time.perf_counter()
    surf = spectrum_surface(FIG, np.linspace(20, 200, 200), np.linspace(-20, 20, 400))
    t_grid = time.perf_counter() - t0
    cr.check(t_grid < 5.0 and surf.ok.all(), f"200x400 grid in {t_grid:.2f}s")

    peak = spectrum_surface(FIG, np.arange(20, 201), np.linspace(-20, 20, 401))
    cr.check(np.all(np.argmax(peak.values, axis=1) == 200), "row maxima at omega=0 for N in [20,200]")

    w = np.array([0.0, 1.0, 5.0, 20.0])
    big = [spectrum_values(FIG.replace(n_atoms=n), w) for n in (1e2, 1e4, 1e6, 1e8)]
    decreasing = all(np.all(a > b) for a, b in zip(big, big[1:]))
    cr.check(decreasing and np.all(big[-1] < 1e-10 * big[0]), "S -> 0 pointwise as N grows")
    cr.finish(note=f"S(0,100)={s0:.5e}")


def test_3_algebra_suite():
    cr = Criterion(3, "deformed commutator and expansion order")
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(50):
        eta = rng.uniform(1e-3, 0.5)
        n_cut = int(rng.integers(3, min(200, math.floor(1 / eta + 1)) + 1))
        worst = max(worst, max(abs(r.defect) for r in commutator_defect(n_cut, eta) if not r.boundary))
    cr.check(worst < 1e-13, f"interior defect {worst:.2e} < 1e-13")
    ratio = expansion_error(20, 1e-3) / expansion_error(20, 5e-4)
    cr.check(abs(ratio - 4.0) <= 0.1, f"error ratio {ratio:.4f} = 4.0 +- 0.1")
    cr.finish(budget=1.0, note=f"max defect {worst:.1e}, ratio {ratio:.3f}")


def test_4_linear_limit_oracle():
    cr = Criterion(4, "linear-limit oracle exactness")
    rho = steady_density(ORACLE, 15, eta=0.0)
    err = abs(mean_amplitude(rho) - undeformed_steady_state(ORACLE))
    cr.check(err < 1e-6, f"|<b> - beta_inf| = {err:.1e} < 1e-6")
    table = regression_spectrum(ORACLE, 15, np.linspace(-50, 50, 201), eta=0.0)
    s_max = float(np.max(np.abs(table.values)))
    cr.check(s_max < 1e-10, f"max S_or = {s_max:.1e} < 1e-10")
    cr.finish(budget=30.0, note=f"amp err {err:.1e}, max S_or {s_max:.1e}")


def test_5_semiclassical_convergence():
    cr = Criterion(5, "oracle amplitude approaches semiclassical root")
    errs = []
    for n in (25, 50, 100):
        p = ORACLE.replace(n_atoms=float(n))
        rho = steady_density(p, converged_cutoff(p))
        beta = solve_deformed_steady_state(p).beta
        errs.append(abs(mean_amplitude(rho) - beta) / abs(beta))
    cr.check(errs[0] > errs[1] > errs[2], "strictly decreasing over N = 25, 50, 100")
    cr.check(errs[2] < 0.05, "below 5% at N = 100")
    cr.finish(budget=300.0, note="rel errors " + ", ".join(f"{e:.2e}" for e in errs))


def test_6_normalization_measurement():
    cr = Criterion(6, "oracle / paper-variant spectrum ratio")
    p = ORACLE.replace(n_atoms=100.0)
    ss = solve_deformed_steady_state(p)
    c = fluctuation_coeffs(p, ss.beta)
    # half-maximum frequency of the closed-form spectrum
    dense = np.linspace(0, 100, 200001)
    s_dense = np.abs(c.b_coef) ** 2 / np.abs(xi(c, dense)) ** 2
    w_half = dense[np.argmax(s_dense < 0.5 * s_dense[0])]
    w = np.linspace(-w_half, w_half, 41)
    oracle = regression_spectrum(p, converged_cutoff(p), w).values
    ratio = oracle / spectrum_values(p, w, Variant.PAPER)
    spread = (ratio.max() - ratio.min()) / ratio.mean()
    cr.check(spread < 0.15, f"ratio spread {spread:.2e} < 15% across FWHM")
    big_gamma = math.sqrt(p.n_atoms) * p.gamma
    candidate = 2 * big_gamma / (2 * math.pi)
    cr.finish(
        note=(
            f"ratio {ratio.mean():.6f} vs 2*Gamma*kappa = {candidate:.6f} with kappa = 1/(2 pi) "
            f"(off by {abs(ratio.mean() / candidate - 1):.1e}); FWHM/2 = {w_half:.3f}"
        )
    )


def test_7_parseval():
    cr = Criterion(7, "integrated physical spectrum vs Lyapunov occupation")
    notes = []
    for p in (FIG, FIG.replace(delta=1.5, n_atoms=40.0), ORACLE):
        ss = solve_deformed_steady_state(p)
        c = fluctuation_coeffs(p, ss.beta)
        w = np.linspace(-200, 200, 400001)
        integral = trapezoid(spectrum_values(p, w, Variant.PHYSICAL), w) / (2 * math.pi)
        occ = stationary_occupation(c, math.sqrt(p.n_atoms) * p.gamma)
        rel = abs(integral - occ) / occ
        cr.check(rel < 1e-3, f"{p}: rel {rel:.1e} < 1e-3")
        notes.append(f"{rel:.1e}")
    cr.finish(note="rel errors " + ", ".join(notes))


def test_8_property_suite():
    cr = Criterion(8, "properties on 100 random stable parameter sets")
    rng = np.random.default_rng(8)
    sets = 0
    worst = dict(xi=0.0, parity=0.0, residual=0.0, scaling=0.0)
    negatives = 0
    while sets < 100:
        p = ModelParams(rng.uniform(-5, 5), rng.uniform(0, 5), 1.0, rng.uniform(20, 500))
        ss = solve_deformed_steady_state(p)
        if not ss.stable:
            continue
        sets += 1
        c = fluctuation_coeffs(p, ss.beta)
        l1, l2 = drift_eigenvalues(c)
        w = rng.uniform(-50, 50, 100)
        worst["xi"] = max(worst["xi"], np.max(np.abs(xi(c, w) - (l1 - 1j * w) * (l2 - 1j * w))))
        grid = np.linspace(-30, 30, 121)
        s = spectrum_values(p, grid)
        worst["parity"] = max(worst["parity"], np.max(np.abs(s - s[::-1])))
        negatives += int(np.sum(s < 0))
        worst["residual"] = max(worst["residual"], ss.residual_norm)
        k = rng.uniform(0.2, 5)
        scaled = ModelParams(k * p.delta, k * p.g, k * p.gamma, p.n_atoms)
        s_scaled = spectrum_values(scaled, k * grid)
        nz = s > 0
        if nz.any():
            worst["scaling"] = max(worst["scaling"], np.max(np.abs(s_scaled[nz] * k**2 / s[nz] - 1)))
    cr.check(worst["xi"] < 1e-10, f"Xi factorization {worst['xi']:.1e} < 1e-10")
    cr.check(worst["parity"] == 0.0 and negatives == 0, "parity exact, S >= 0")
    cr.check(worst["residual"] <= 1e-12, f"residual certificate {worst['residual']:.1e} <= 1e-12")
    cr.check(worst["scaling"] < 1e-9, f"unit scaling S(c w; c params) = S(w)/c^2, {worst['scaling']:.1e}")
    cr.finish(note=", ".join(f"{k}={v:.1e}" for k, v in worst.items()))
