"""Mutation screening: align a patient gene to its reference, keep the
protein-changing differences, and classify them with a small
backpropagation network trained on a catalog of known mutations."""

from .align import (
    Alignment,
    ScoringScheme,
    SeedHit,
    global_align,
    mismatch_columns,
    percent_identity,
    seed_scan,
)
from .catalog import (
    CatalogEntry,
    LabeledExample,
    build_training_set,
    encode,
    feature_layout,
    load_catalog,
    sample_catalog,
    sample_references,
)
from .config import Config
from .neuralnet import (
    Network,
    TrainConfig,
    TrainReport,
    backprop_deltas,
    forward,
    init_network,
    load_model,
    save_model,
    train,
)
from .pipeline import Prediction, RunReport, Verdict, predict, train_model
from .seqio import Alphabet, Sequence, fetch_reference, parse_fasta, write_fasta
from .translate import CODON_TABLE, StopPolicy, best_orf_frame, find_orf, revcomp, translate
from .variants import (
    CandidateVerdict,
    Kind,
    Level,
    Rationale,
    Variant,
    apply_variants,
    assess_candidate,
    call_variants,
)

__version__ = "0.1.0"
