"""Generalized numbers and functions built from ultranorms over scales r_n -> 0."""

__version__ = "0.1.0"

from .errors import (AmbiguousDominance, DegenerateScale, InvalidParameter, NotCauchy, NotModerate,
                     PreconditionFailed, ScaleMismatch, Unsupported, UltraseqError)
from .verdict import State, Verdict
from .scales import (Scale, ScaleFamily, AsymptoticScale, ladder, make_log_scale, make_power_scale,
                     make_colombeau_family, make_egorov_family, make_power_family, scale_from_json)
from .growth import GrowthClass, SymbolicSeq, seq_from_json
from .ultranorm import (ABS, Classification, Seminorm, UltraNormValue, classify, diagonal_limit, norm,
                        norm_estimate, norm_exact)
from .gnum import GenNumber, maddox_c0_test, maddox_linf_test
from .torus import CoeffFamily, TorusGF, embed, full, pair
from .association import s_assoc, strong_assoc, strong_weak_assoc, weak_assoc
from .functorial import check_temperate, extend
from .asymptotic import classify_A, classify_A_secondkind, family_classify
