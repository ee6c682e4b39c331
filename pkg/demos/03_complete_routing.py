"""
Complete routing to the other waveguide
=======================================

With opposite Sagnac shifts of equal size there is a rotation speed at
which, at zero detuning, every photon leaves through the other waveguide.
The search scans shift and detuning, then nests two golden-section searches.
"""

import math

from spincirc import load_preset
from spincirc.params import reference_physical
from spincirc.analysis import find_complete_routing
from spincirc.params import g_factor

rp = load_preset("fig3-counter").reduced()
r = find_complete_routing(rp)
print(f"shift*  = {r.shift_star:.4f} rad/s")
print(f"delta*  = {r.delta_star:.3e} rad/s")
print(f"1 - min cross transmission = {1 - r.min_cross:.2e}")
for name, value in r.candidates.items():
    print(f"  {name:18s} = {value:.4f}{'   <- matched' if name in r.matched else ''}")

# %%
# The required shift converts back to a rotation speed through the
# geometric factor of the resonator.
print(f"rotation speed = {r.shift_star / g_factor(reference_physical()):.1f} rad/s")

# %%
# In the weak-decay limit the optimum approaches the inter-resonator
# coupling itself.
weak = find_complete_routing(rp.__class__(1e3, 1e3, rp.j))
print(f"Gamma = 1e3: shift* / J = {weak.shift_star / rp.j:.9f}  (sqrt(1 - Gamma**2 / J**2) = "
      f"{math.sqrt(1 - 1e6 / rp.j**2):.9f})")
