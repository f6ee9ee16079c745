#!/usr/bin/env python3
"""Where the energy goes: boundary and internal dashpots.

The total mechanical energy of the unforced bar decays exactly at the rate
-(EA/c) [h1 u_t(0)^2 + h2 u_t(L)^2 + 2 h3 u_t(a)^2]: each plateau ends when
a wave reaches a damper.  With all dampers off the energy is conserved; a
negative h would pump energy in instead.
"""
import pathlib

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from viscobar import BarConfig, GaussianPulse, InitialData, energy_and_flux

OUT = pathlib.Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

pulse = GaussianPulse(center=0.45, width=0.09, amplitude=0.01)
init = InitialData(u0=pulse, du0=pulse.slope)
damped = BarConfig(L=1.8, c=1.5, a=0.9, h1=0.4, h2=0.6, h3=0.5)
conservative = BarConfig(L=1.8, c=1.5)

# sample between (not on) wavefront arrival instants
t = np.linspace(0.0137, 2.9, 120)
E_damped, F_damped, E_cons = [], [], []
for tv in t:
    e, f = energy_and_flux(damped, init, float(tv))
    E_damped.append(e)
    F_damped.append(f)
    E_cons.append(energy_and_flux(conservative, init, float(tv))[0])

fig, (ax1, ax2) = plt.subplots(2, 1, sharex=True, figsize=(7, 5.4),
                               height_ratios=[2, 1])
ax1.plot(t, E_cons, label="all dampers off (conserved)")
ax1.plot(t, E_damped, label="h1=0.4, h2=0.6, h3=0.5")
ax1.set_ylabel("energy [J]")
ax1.legend()
ax2.plot(t, F_damped, color="tab:red")
ax2.set_ylabel("flux [W]")
ax2.set_xlabel("t [s]")
fig.tight_layout()
fig.savefig(OUT / "energy_audit.png", dpi=150)
print(f"wrote {OUT/'energy_audit.png'}")

drift = (max(E_cons) - min(E_cons)) / E_cons[0]
print(f"conservative drift: {drift:.2e}")
dt = 2e-5
tv = 0.4087   # left half pulse is being absorbed at x = 0
rate = (energy_and_flux(damped, init, tv + dt)[0]
        - energy_and_flux(damped, init, tv - dt)[0]) / (2 * dt)
flux = energy_and_flux(damped, init, tv)[1]
print(f"dE/dt vs flux at t={tv}: {rate:.6e} vs {flux:.6e}")
