"""Compare the Lindblad regression spectrum with the linearized closed form.

Prints the ratio oracle / (|B|^2/|Xi|^2) across frequency for a few N and
the candidate constant Gamma / pi.
"""

import math

import numpy as np

from defbec import ModelParams, Variant, solve_deformed_steady_state, spectrum_values
from defbec.oracle import converged_cutoff, mean_amplitude, regression_spectrum, steady_density


def main():
    w = np.linspace(-20, 20, 9)
    for n in (25, 50, 100, 200):
        p = ModelParams(delta=0.0, g=0.5, n_atoms=float(n))
        n_cut = converged_cutoff(p)
        oracle = regression_spectrum(p, n_cut, w).values
        ratio = oracle / spectrum_values(p, w, Variant.PAPER)
        beta = solve_deformed_steady_state(p).beta
        amp = mean_amplitude(steady_density(p, n_cut))
        print(
            f"N={n:4d} n_cut={n_cut:2d}  <b>={amp.imag:+.8f}i  beta={beta.imag:+.8f}i  "
            f"ratio mean={ratio.mean():.6f} spread={np.ptp(ratio) / ratio.mean():.1e}  "
            f"Gamma/pi={math.sqrt(n) / math.pi:.6f}"
        )


if __name__ == "__main__":
    main()
