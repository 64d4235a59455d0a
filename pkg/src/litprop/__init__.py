"""Information-propagation analysis for annotated literary texts.

The package detects who says what to whom in annotated novels: quotation
spans, sieve-attributed speakers, dialogue-block co-presence networks,
propositional tuples, implicit and explicit propagation triads, and the
network statistics that describe propagating characters.
"""

from .corpus import AnnotatedBook, GoldQuote, Mention, Token, load_book, save_book, validate
from .quotation import QuotationSpan, SpanScore, identify_quotations, score_quotations
from .attribution import QuoteAttribution, SieveConfig, ablate, attribute_speakers
from .cluster_metrics import Clustering, ClusterScore, b_cubed, ceaf_phi4, muc, score_clusterings
from .conversation import CharacterNetwork, DialogueBlock, build_network, segment_dialogue_blocks
from .tuples import PropTuple, extract_tuples, filter_topic
from .propagation import (
    CounterfactualPair,
    ExplicitEvent,
    ImplicitEvent,
    detect_explicit,
    detect_implicit,
    sample_counterfactuals,
)
from .netmetrics import FEATURE_NAMES, NodeFeatures, all_features, node_features
from .stats import (
    FeatureMatrix,
    GenderReport,
    NullDistribution,
    RegressionResult,
    expected_degree_graph,
    fit_logistic,
    gender_triads,
    infer_gender,
    minmax_scale,
    randomization_test,
)

__version__ = "0.1.0"
