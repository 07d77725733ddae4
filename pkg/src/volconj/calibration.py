"""Calibrated constants for the O(1) boundedness probes.

Only the shape of the remainders is known (bounded, or O(1) in a log), not
their size, so each band below was measured once with this package and
frozen here.  Boundedness probes compare a large-N value against
``BOUND_FACTOR`` times the calibrated moderate-N value.
"""

BOUND_FACTOR = 1.5

# max over 0 < n < N/2 of |s_n - (N/pi) L(pi n/N) + log(n)/2| at N = 100
SEST_RESIDUAL_N100 = 0.99989033

# max over N in [50, 100] of |J_{T(2,3),N} - kt_leading(2, 3, N)|
KT_REMAINDER_C0 = 0.99614211

# brackets for 2 pi log|J| / N at single large N
WL0_N1000_BRACKET = (3.66, 3.80)  # measured 3.72571
WD23_N600_BRACKET = (3.60, 3.85)  # measured 3.77731

# informational: N^2 * max ratio for T(2,5), delta = 0.6, N = 400
RATIO_T25_N400 = 1138.57
