from .borel import borel_conjugator, borel_discriminant
from .free import extend_free_tuple, random_sl2_rational
from .mat2 import GaussianRational, Mat2, mat_from_json, mat_ops, max_diff, psl_equal
from .plane import invariant_plane, plane_residual
from .sl2 import (
    Borderline,
    Elliptic,
    Hyperbolic,
    LieOrbit,
    Nilpotent,
    ParabolicCentral,
    ParabolicShear,
    Rotation,
    Sl2LieElem,
    Split,
    classify_key,
    exp_sl2,
    lie_classify,
    sl2_classify,
)
from .spectrum import SpectrumReport, eigenvalues, spectrum_of_words
