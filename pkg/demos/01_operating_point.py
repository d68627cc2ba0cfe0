"""From drive settings to an operating point.

Walks the chain that turns source powers into the quantities that matter
for conversion: intra-resonator drive photons n, enhanced coupling g,
induced mechanical damping Gamma, and cooperativity C.  Ends by solving
for the source powers that match the cooperativities at C = 35.
"""

import math

from emconv import angular_to_hz, operating_point
from emconv.harness import preset

cfg = preset("fink2018")
res1, res2 = cfg.resonators
mech = cfg.mech

print("device preset 'fink2018'")
print(f"  resonator 1: {angular_to_hz(res1.omega)/1e9:.3f} GHz, "
      f"kappa/2pi = {angular_to_hz(res1.kappa)/1e3:.0f} kHz, eta = {res1.eta:.2f}")
print(f"  resonator 2: {angular_to_hz(res2.omega)/1e9:.3f} GHz, "
      f"kappa/2pi = {angular_to_hz(res2.kappa)/1e3:.0f} kHz, eta = {res2.eta:.2f}")
print(f"  mechanics:   {angular_to_hz(mech.omega_m)/1e6:.3f} MHz, "
      f"gamma_m/2pi = {angular_to_hz(mech.gamma_m):.0f} Hz, "
      f"n_bath = {mech.n_bath:.0f}")
print()

# ---- operating point versus applied power (both drives swept together)
print(f"{'P [dBm]':>8} {'n_1':>12} {'g_1/2pi [kHz]':>14} "
      f"{'Gamma_1/2pi [Hz]':>17} {'C_1':>8} {'C_2':>8} {'BW/2pi [Hz]':>12}")
for p in range(-14, 1, 2):
    state = operating_point(cfg.with_drive_powers(p, p).drives,
                            cfg.resonators, mech)
    print(f"{p:>8} {state.n_drive[0]:>12.3e} "
          f"{angular_to_hz(state.g[0])/1e3:>14.2f} "
          f"{angular_to_hz(state.big_gamma[0]):>17.1f} "
          f"{state.coop[0]:>8.2f} {state.coop[1]:>8.2f} "
          f"{angular_to_hz(state.total_linewidth):>12.1f}")
print()

# ---- matched operation: C is linear in drive power (in watts), so the
# powers hitting an exact target follow from one reference evaluation
target = 35.0
ref = operating_point(cfg.drives, cfg.resonators, mech)
powers = [d.p_applied + 10.0 * math.log10(target / c)
          for d, c in zip(cfg.drives, ref.coop)]
state = operating_point(cfg.with_drive_powers(*powers).drives,
                        cfg.resonators, mech)
print(f"matched C = {target}: P_1 = {powers[0]:+.2f} dBm, "
      f"P_2 = {powers[1]:+.2f} dBm")
print(f"  -> C = ({state.coop[0]:.3f}, {state.coop[1]:.3f}), "
      f"conversion bandwidth {angular_to_hz(state.total_linewidth):.0f} Hz "
      f"= (1 + 2C) gamma_m")
