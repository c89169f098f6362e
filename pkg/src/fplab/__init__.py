"""Exact counting kernels and bound checks for sparse exponential sums over F_p."""
from ._backend import backend, current_backend, set_backend
from .bounds import BoundReport, GcdParams, bound_report, gcd_params, gcd_params_for
from .charsum import (
    SparsePoly,
    WeightTable,
    additive_char,
    eval_sparse_sum,
    eval_sum_subgroup_decomposed,
    eval_trilinear,
    mult_char,
)
from .energy import d_times, dx_vs_t_check, energy_deviation_report, mult_energy, t_energy_relation
from .field import (
    FieldContext,
    Subgroup,
    dilate_set,
    dlog,
    make_field,
    multiplicative_order,
    subgroup,
    translate_set,
)
from .incidence import (
    LineHistogram,
    TripleCountReport,
    collinear_triples,
    collinear_triples_bruteforce,
    iota_cube_sum,
    iota_moments,
    line_histogram,
    second_moment_closed_form,
    triple_deviation_report,
)
from .sumsets import SumsetReport, ratio_shift_set, romanoff_coverage, three_fold_sumset

__version__ = "0.1.0"
