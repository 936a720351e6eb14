"""Decision-template fusion of probabilistic classifier ensembles.

Fit one mean decision profile per class from the softmax outputs of K base
classifiers, score test samples against those templates with six fuzzy
similarity measures, combine multi-crop predictions by majority vote, and
evaluate with accuracy / precision / recall / F1 and a fused-vs-base cross
tabulation.
"""

from .core import (
    ROW_SUM_TOL,
    DecisionTemplateSet,
    EnsembleSpec,
    LabelSpace,
    build_profile,
    fit_templates,
    softmax,
    validate_decision_vector,
)
from .dataio import (
    DumpData,
    align_labels,
    read_dump,
    read_labels,
    read_predictions,
    read_templates,
    write_crosstab,
    write_dump,
    write_labels,
    write_predictions,
    write_report,
    write_templates,
)
from .errors import (
    DegenerateInputError,
    DTFusionError,
    EmptyClassError,
    FormatError,
    ShapeError,
    ValidationError,
)
from .inference import (
    CropGroup,
    Prediction,
    majority_vote_argmax,
    predict,
    predict_batch,
    vote_crops,
)
from .metrics import (
    ClassMetrics,
    EvaluationReport,
    FusionCrossTab,
    StratumCell,
    confusion,
    crosstab,
    report,
)
from .similarity import Measure, c_measure, i1, i2, n_measure, s1, s2, score
from .synth import DEFAULT_CONFIG, SynthConfig, SynthData, generate

__version__ = "0.1.0"

__all__ = [
    "ROW_SUM_TOL",
    "DecisionTemplateSet",
    "EnsembleSpec",
    "LabelSpace",
    "build_profile",
    "fit_templates",
    "softmax",
    "validate_decision_vector",
    "DTFusionError",
    "ValidationError",
    "ShapeError",
    "EmptyClassError",
    "DegenerateInputError",
    "FormatError",
    "DumpData",
    "read_dump",
    "write_dump",
    "read_labels",
    "write_labels",
    "align_labels",
    "read_templates",
    "write_templates",
    "write_predictions",
    "read_predictions",
    "write_report",
    "write_crosstab",
    "CropGroup",
    "Prediction",
    "predict",
    "predict_batch",
    "vote_crops",
    "majority_vote_argmax",
    "ClassMetrics",
    "EvaluationReport",
    "FusionCrossTab",
    "StratumCell",
    "confusion",
    "crosstab",
    "report",
    "Measure",
    "s1",
    "s2",
    "i1",
    "i2",
    "c_measure",
    "n_measure",
    "score",
    "SynthConfig",
    "SynthData",
    "DEFAULT_CONFIG",
    "generate",
    "__version__",
]
