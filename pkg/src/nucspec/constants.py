"""Physical constants and default sample parameters (SI, frequencies in Hz)."""

import numpy as np

# fundamental
MU0 = 4e-7 * np.pi            # T m / A
H_PLANCK = 6.62607015e-34     # J s
MU_B_HZ_PER_T = 13.996e9      # Bohr magneton / h
EPS0 = 8.8541878128e-12       # F / m
E_CHARGE = 1.602176634e-19    # C
DEBYE = 3.33564e-30           # C m

# Er3+ ground multiplet
G_J = 6.0 / 5.0
J_ER = 15.0 / 2.0

# effective gyromagnetic tensor of the lowest Kramers doublet (Hz/T), c = z
GAMMA_PAR = -17.45e9
GAMMA_PERP = -117.3e9

# 93Nb
I_NB = 9.0 / 2.0
# Effective in-situ gyromagnetic ratio of the probed nucleus (Hz/T).  This is
# the conversion constant between the nuclear Zeeman frequency and the applied
# field used consistently throughout; it differs slightly from the bare
# literature value because of chemical shielding at the lattice site.
GAMMA_NB = 10.4213e6            # Hz/T

# scheelite lattice defaults (m)
LATTICE_A = 5.243e-10
LATTICE_C = 11.376e-10

# resonator defaults
NU_R = 7.7492e9               # Hz
KAPPA = 740e3                 # Hz (linewidth, linear frequency)
G0 = 9.3e3                    # Hz (single spin coupling, linear frequency)

# sample alignment defaults (degrees)
BETA0_DEG = -0.57
THETA0_DEG = -0.6
