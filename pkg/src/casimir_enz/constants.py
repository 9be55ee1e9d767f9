"""SI constants (CODATA exact / defined values)."""

HBAR = 1.054_571_817e-34  # J s
C = 299_792_458.0  # m/s
