"""Numerical laboratory for multiple ergodic averages on explicit systems.

Subpackages by topic:

  systems     torus rotations, skew products, cyclic shifts; trig-polynomial
              observables with exact integration, spectra, eigenfunctions
  sequences   integer sequences (polynomials, floors of generalized power
              sums, Hardy-style power-log sums) with exact floor evaluation
  expsums     exponential sums, equidistribution verdicts, rational
              detection, the averaged difference inequality
  averages    multiple ergodic averages, joint-ergodicity diagnostics,
              rational-eigenfunction projections, recurrence counts
  seminorms   uniformity seminorm estimators (box / iterative / subsampled),
              monotonicity, soft inverse, box Cauchy-Schwarz checks
  flows       translation flows, time-changed flow averages via oscillatory
              quadrature, change-of-variables and stability checks
  cli         deterministic experiment runner (`ergolab run`, `ergolab batch`)
"""

__version__ = "0.1.0"
