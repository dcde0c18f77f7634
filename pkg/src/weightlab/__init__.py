"""Discrete Muckenhoupt and reverse Hölder weights on the dyadic circle.

Weights are positive, piecewise constant on the ``2**N`` cells of the
circle.  The package computes weight-class constants over grid arcs and
dyadic intervals, the log-oscillation characterisations, Haar analysis,
geometric-arithmetic and translation averages of weight families, and
their two-parameter analogues.
"""

__version__ = "0.1.0"

from .averaging import (NormalizationRecord, WeightFamily, ap_factor_product, beta_envelope,
                        blo_envelope, denormalize, ga_average, normalize_logmean,
                        translation_average, uniform_dyadic_bound)
from .constants import (ap_constant, bmo_norm, doubling_constant, hl_maximal,
                        maximal_norm_ratio, rhp_constant, rhp_sup)
from .families import (CascadeSpec, cascade_2d, cascade_family, cascade_weight,
                       paper_log_weight, random_family, seam_weight, smooth_doubling_weight,
                       translate_family)
from .grid import (Arc, DyadicInterval, Scope, ValidationError, Weight, arc_average,
                   dyadic_intervals, enumerate_arcs, make_weight, translate)
from .haar import (HaarCoeffs, carleson_constant, empirical_CA_CB, haar_analyze,
                   haar_reconstruct, scale_split)
from .oscillation import OscKind, lemma35_crosscheck, osc_constant
from .product import (Weight2D, WeightFamily2D, ap_constant_2d, doubling_constant_2d,
                      ga_average_2d, rect_average, rhp_constant_2d, slice_constants,
                      translation_average_2d)
