"""Named numerical tolerances shared by every module.

All values are absolute unless noted. Reports embed :data:`TOLERANCES` so a
rerun can be audited against the constants that produced it.
"""

#: Negative eigenvalues above ``-CLAMP_TOL * max|x|`` are set to zero.
CLAMP_TOL = 1e-10
#: Entries above ``RANK_TOL * max(x)`` count towards the numerical rank.
RANK_TOL = 1e-9
#: Equality threshold on the normalized inequality gap.
EQ_TOL = 1e-10
GAP_TOL = 1e-9
FD_TOL = 1e-6
EULER_TOL = 1e-8
#: Hermiticity check, relative to ``max(1, max|m|)``.
HERM_TOL = 1e-10
TRACE_TOL = 1e-9
SPEC_TOL = 1e-9
#: Trace preservation of Kraus families, max-norm of ``sum K^dag K - I``.
TP_TOL = 1e-8
NORM_TOL = 1e-10
#: Ensemble recombination, max-norm of ``sum p_i pi_i - rho``.
ENS_TOL = 1e-9
PROBE_TOL = 1e-9

TOLERANCES = {
    "clamp_tol": CLAMP_TOL,
    "rank_tol": RANK_TOL,
    "eq_tol": EQ_TOL,
    "gap_tol": GAP_TOL,
    "fd_tol": FD_TOL,
    "euler_tol": EULER_TOL,
    "herm_tol": HERM_TOL,
    "trace_tol": TRACE_TOL,
    "spec_tol": SPEC_TOL,
    "tp_tol": TP_TOL,
    "norm_tol": NORM_TOL,
    "ens_tol": ENS_TOL,
    "probe_tol": PROBE_TOL,
}
