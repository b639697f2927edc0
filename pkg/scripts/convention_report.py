"""Trace-coefficient bookkeeping: computed xi_n vs the values implied by the printed curves.

Also checks xi_1, xi_2 extracted from oracle spectra, which is the
convention-free reference. Takes ~10 s.
"""
import numpy as np

from pdcschmidt import spectral
from pdcschmidt.estimator import implied_xi
from pdcschmidt.gausstrace import xi_limit, xi_tc
from pdcschmidt.kernels import FULL_SINC, THIN_CRYSTAL, KernelSpec, kernel_amplitude
from pdcschmidt.pwtrace import xi_pw, xi_pw_gaussian_pump

print("n   tc limit   tc implied   ratio    pw delta-chain  pw implied  pw gaussian-pump")
for n in range(1, 5):
    tc, _ = xi_limit(n)
    print(f"{n}  {tc:9.6f}  {implied_xi('tc', n):10.6f}  {implied_xi('tc', n) / tc:6.3f}"
          f"   {xi_pw(n).xi:13.6f}  {implied_xi('pw', n):10.6f}  {xi_pw_gaussian_pump(n).xi:15.6f}")


def spectral_xi(variant, beta, big_x=0.1):
    big_a = 1 / (4 * beta)
    spec = KernelSpec(variant, beta, amplitude=kernel_amplitude(big_a, big_x, beta, variant))
    res = spectral.compute_spectrum(spec)
    s2 = sum(m * np.sum(v**2) for _, v, m in res.sectors)
    s4 = sum(m * np.sum(v**4) for _, v, m in res.sectors)
    return 16 * s2 / (big_a * big_x**2), 256 * s4 / (big_a * big_x**4)


print("\nfrom oracle spectra (xi_1, xi_2):")
for beta in (1e-2, 3e-3):
    x1, x2 = spectral_xi(THIN_CRYSTAL, beta)
    print(f"  thin crystal beta={beta:g}: {x1:.8f} {x2:.8f}   analytic xi_2 = {xi_tc(2, beta):.8f}")
    x1, x2 = spectral_xi(FULL_SINC, beta)
    print(f"  sinc kernel  beta={beta:g}: {x1:.8f} {x2:.8f}   (radial window drops ~1% of xi_1)")
