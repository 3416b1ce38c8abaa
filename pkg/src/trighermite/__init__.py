"""Trigonometric Hermite splines on uniform periodic grids."""

from .errors import PreconditionError, SingularSystemError, TrigHermiteError
from .hermite_spline import (
    HermiteSpline,
    MeanLedger,
    ResidualReport,
    build,
    build_c1,
    build_c2,
    eval_uniform,
    evaluate,
    node_residuals,
    node_values,
)
from .series_kernels import (
    MINUS,
    PLUS,
    FrequencyFamily,
    LacunarySumSpec,
    SeriesTable,
    basis_eval,
    collapsed_sum,
    residue_class,
    series_constants_c1,
    series_constants_c2,
)
from .trig_interp import (
    SampleSet,
    TrigPolyCoeffs,
    UniformGrid,
    center_samples,
    eval_trig_poly,
    interp_coeffs,
    make_grid,
)

__version__ = "0.1.0"

__all__ = [
    "FrequencyFamily",
    "HermiteSpline",
    "LacunarySumSpec",
    "MINUS",
    "MeanLedger",
    "PLUS",
    "PreconditionError",
    "ResidualReport",
    "SampleSet",
    "SeriesTable",
    "SingularSystemError",
    "TrigHermiteError",
    "TrigPolyCoeffs",
    "UniformGrid",
    "basis_eval",
    "build",
    "build_c1",
    "build_c2",
    "center_samples",
    "collapsed_sum",
    "eval_trig_poly",
    "eval_uniform",
    "evaluate",
    "interp_coeffs",
    "make_grid",
    "node_residuals",
    "node_values",
    "residue_class",
    "series_constants_c1",
    "series_constants_c2",
]
