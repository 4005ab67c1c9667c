"""Discriminant wavelet-packet bases with dyadic cluster oracle classifiers.

The pipeline: expand signals over a periodized wavelet-packet dictionary
(``wavelets``), score every coordinate's class-separation power
(``measures``), pick the best basis and its top-K features (``basis``),
train cube-list oracle classifiers in feature space (``dcsa``), classify
with weighted votes and superposition ensembles (``classify``), and
reproduce the synthetic benchmarks end to end (``datagen``,
``experiment``, ``cli``).
"""

from ._kernels import BACKEND as KERNEL_BACKEND
from ._kernels import HAVE_COMPILED
from .basis import Basis, FeatureSpace, best_basis, project, project_many, top_k_features
from .classify import (
    UNDETERMINED,
    EnsembleMember,
    EnsembleSpec,
    ScoreReport,
    Vote,
    classify_batch,
    classify_ensemble,
    classify_sample,
    dump_predictions,
    ensemble_of,
    make_one_vs_rest,
    merge_ensembles,
    score_dataset,
)
from .cubes import MAX_SPLIT_DEPTH, DyadicCube, cube_contains, root_cube, split_cube
from .datagen import RngSpec, gen_ex3, gen_ex12, gen_experiment
from .dataset import (
    Dataset,
    concat,
    export_csv,
    load_dataset,
    make_dataset,
    read_csv,
    save_dataset,
)
from .dcsa import (
    LDB,
    MLDB,
    ClusterRecord,
    DcsaParams,
    Oracle,
    TrainingTrace,
    run_dcsa,
    training_trace,
)
from .errors import (
    ClassTooSmall,
    ConfigMismatch,
    DepthExceedsLog2N,
    DimensionMismatch,
    EmptyClass,
    EmptyDataset,
    IndexOutOfRange,
    InvalidClass,
    InvalidN,
    InvalidParams,
    KTooLarge,
    LdbError,
    LengthNotDyadic,
    UnsupportedFilter,
)
from .experiment import (
    ExperimentConfig,
    MethodStats,
    ResultTable,
    emit_report,
    load_config,
    parse_config,
    run_experiment,
)
from .measures import (
    LAMBDA,
    LAMBDA_DOUBLE_PRIME,
    LAMBDA_PRIME,
    CoordinateStats,
    MeasureKind,
    ScoreTable,
    coordinate_stats,
    energy_map,
    interval_overlap,
    score_lambda,
    score_lambda_double_prime,
    score_lambda_prime,
    score_table,
)
from .wavelets import (
    CoefficientTree,
    DictionarySpec,
    NodeId,
    QmfPair,
    build_filter,
    wpt_analyze,
    wpt_analyze_many,
)

__version__ = "0.1.0"
