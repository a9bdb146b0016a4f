"""Special functions, quadrature and harmonic extension on the unit ball."""
