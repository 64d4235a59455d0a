"""Feature scaling, logistic regression, degree-preserving null models,
the randomization test, and gender-triad proportions.

The regression distinguishes information-propagating B nodes (label 1)
from co-present non-propagating B' nodes (label 0) using the six node
measures, after min-max scaling the pooled rows to [0, 1]. Significance
is assessed twice: Wald tests on the fitted model, and an empirical null
built from expected-degree (Chung-Lu) resamples of each network.
"""

from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass, field
from math import erfc, sqrt
from typing import Optional, Sequence

import numpy as np

from .conversation import CharacterNetwork
from .corpus import AnnotatedBook
from .errors import ConstantColumnWarning, LitpropError
from .lexicons import GenderLexicon, load_gender_lexicon
from .netmetrics import FEATURE_NAMES, all_features
from .propagation import ExplicitEvent

log = logging.getLogger(__name__)

SEPARATION_NORM = 1e3  # coefficient sup-norm beyond which the fit is declared separated
MAX_ITERATIONS = 100
LOGLIK_TOL = 1e-8


@dataclass
class FeatureMatrix:
    values: np.ndarray  # (n_rows, n_features)
    labels: np.ndarray  # (n_rows,) of 0/1
    columns: tuple[str, ...]
    provenance: list[tuple] = field(default_factory=list)  # (book_id, entity_id, event_id)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        self.labels = np.asarray(self.labels, dtype=int)
        if self.values.ndim != 2 or self.values.shape[0] != self.labels.shape[0]:
            raise ValueError("values and labels must agree on the number of rows")
        if self.values.shape[1] != len(self.columns):
            raise ValueError("column names must match the value width")
        if not np.isfinite(self.values).all():
            raise ValueError("feature values must be finite")


def minmax_scale(m: FeatureMatrix) -> FeatureMatrix:
    """Affine map of each column onto [0, 1] over the pooled rows.

    Constant columns carry no information for the classifier; they are
    dropped with a ConstantColumnWarning.
    """
    mins = m.values.min(axis=0)
    maxs = m.values.max(axis=0)
    keep = maxs > mins
    for name, kept in zip(m.columns, keep):
        if not kept:
            warnings.warn(f"constant feature column dropped: {name}", ConstantColumnWarning)
    scaled = (m.values[:, keep] - mins[keep]) / (maxs[keep] - mins[keep])
    return FeatureMatrix(
        values=scaled,
        labels=m.labels,
        columns=tuple(name for name, kept in zip(m.columns, keep) if kept),
        provenance=list(m.provenance),
    )


@dataclass
class RegressionResult:
    feature_names: tuple[str, ...]
    coefficients: np.ndarray
    intercept: float
    standard_errors: Optional[np.ndarray]
    p_values: Optional[np.ndarray]
    converged: bool
    separation: bool
    iterations: int

    def coefficient_of(self, name: str) -> float:
        return float(self.coefficients[self.feature_names.index(name)])


def _wald_p(z: float) -> float:
    return erfc(abs(z) / sqrt(2.0))


def fit_logistic(m: FeatureMatrix) -> RegressionResult:
    """Non-regularized maximum-likelihood fit via iteratively reweighted
    least squares (Newton-Raphson on the log-likelihood).

    Convergence is declared when the log-likelihood moves by less than
    1e-8; a diverging coefficient norm or singular information matrix
    flags (quasi-)separation, in which case no Wald statistics are
    reported.
    """
    labels = np.unique(m.labels)
    if labels.size < 2:
        raise ValueError("both labels must be present to fit the classifier")

    y = m.labels.astype(float)
    X = np.hstack([np.ones((m.values.shape[0], 1)), m.values])
    beta = np.zeros(X.shape[1])
    previous_ll = -np.inf
    converged = False
    separated = False
    iterations = 0

    for iterations in range(1, MAX_ITERATIONS + 1):
        eta = X @ beta
        mu = 1.0 / (1.0 + np.exp(-eta))
        mu = np.clip(mu, 1e-12, 1.0 - 1e-12)
        weights = mu * (1.0 - mu)
        hessian = X.T @ (weights[:, None] * X)
        gradient = X.T @ (y - mu)
        try:
            step = np.linalg.solve(hessian, gradient)
        except np.linalg.LinAlgError:
            separated = True
            break
        beta = beta + step
        if not np.isfinite(beta).all() or np.max(np.abs(beta)) > SEPARATION_NORM:
            separated = True
            break
        ll = float(np.sum(y * np.log(mu) + (1.0 - y) * np.log(1.0 - mu)))
        if abs(ll - previous_ll) < LOGLIK_TOL:
            converged = True
            break
        previous_ll = ll

    standard_errors = p_values = None
    if converged and not separated:
        eta = X @ beta
        mu = np.clip(1.0 / (1.0 + np.exp(-eta)), 1e-12, 1.0 - 1e-12)
        weights = mu * (1.0 - mu)
        hessian = X.T @ (weights[:, None] * X)
        try:
            covariance = np.linalg.inv(hessian)
            se = np.sqrt(np.diag(covariance))
            standard_errors = se[1:]
            p_values = np.array([_wald_p(b / s) for b, s in zip(beta[1:], se[1:])])
        except np.linalg.LinAlgError:
            separated = True

    return RegressionResult(
        feature_names=tuple(m.columns),
        coefficients=beta[1:],
        intercept=float(beta[0]),
        standard_errors=standard_errors,
        p_values=p_values,
        converged=converged and not separated,
        separation=separated,
        iterations=iterations,
    )


def expected_degree_graph(degrees: Sequence[float], seed) -> CharacterNetwork:
    """Chung-Lu random graph: pair (i, j) connects with probability
    min(1, w_i * w_j / sum(w)); no self-loops. Nodes are 0..n-1."""
    weights = np.asarray(list(degrees), dtype=float)
    if (weights < 0).any():
        raise ValueError("degrees must be non-negative")
    rng = np.random.default_rng(seed)
    n = weights.size
    net = CharacterNetwork()
    for v in range(n):
        net.add_node(v)
    total = weights.sum()
    if total <= 0:
        return net
    for i in range(n - 1):
        if weights[i] == 0:
            rng.random(n - 1 - i)  # keep the draw count independent of weights
            continue
        probs = np.minimum(1.0, weights[i] * weights[i + 1 :] / total)
        draws = rng.random(n - 1 - i)
        for offset in np.nonzero(draws < probs)[0]:
            net.add_edge(i, i + 1 + int(offset))
    return net


@dataclass
class NullDistribution:
    feature_names: tuple[str, ...]
    observed: np.ndarray
    null_coefficients: np.ndarray  # (trials, n_features)
    p_values: np.ndarray
    redrawn_trials: int


def empirical_p_values(observed: np.ndarray, null_coefficients: np.ndarray) -> np.ndarray:
    """Two-sided by magnitude: share of null draws at least as extreme."""
    return (np.abs(null_coefficients) >= np.abs(observed)[None, :]).mean(axis=0)


def build_feature_matrix(
    networks_with_pairs: Sequence[tuple[str, CharacterNetwork, Sequence[tuple[int, int]]]],
    closeness_variant: str = "average_inverse",
) -> FeatureMatrix:
    """Rows for every (B, B') pair: B labeled 1, B' labeled 0."""
    rows = []
    labels = []
    provenance = []
    for book_id, network, pairs in networks_with_pairs:
        features = all_features(network, closeness_variant)
        for event_id, (b, b_prime) in enumerate(pairs):
            rows.append(features[b].as_row())
            labels.append(1)
            provenance.append((book_id, b, event_id))
            rows.append(features[b_prime].as_row())
            labels.append(0)
            provenance.append((book_id, b_prime, event_id))
    if not rows:
        raise LitpropError("no propagation pairs: cannot build a feature matrix")
    return FeatureMatrix(
        values=np.array(rows, dtype=float),
        labels=np.array(labels, dtype=int),
        columns=FEATURE_NAMES,
        provenance=provenance,
    )


def _scale_columns_safe(values: np.ndarray) -> np.ndarray:
    """Min-max per column, mapping constant columns to zeros (trial scaling
    cannot drop columns without changing the coefficient space)."""
    mins = values.min(axis=0)
    maxs = values.max(axis=0)
    span = np.where(maxs > mins, maxs - mins, 1.0)
    scaled = (values - mins) / span
    scaled[:, maxs == mins] = 0.0
    return scaled


def randomization_test(
    networks_with_pairs: Sequence[tuple[str, CharacterNetwork, Sequence[tuple[int, int]]]],
    trials: int = 10_000,
    graphs_per_network: int = 10,
    seed: int = 0,
    closeness_variant: str = "average_inverse",
) -> NullDistribution:
    """Degree-preserving randomization of the regression coefficients.

    Per network, its degree sequence seeds ``graphs_per_network`` expected
    degree graphs whose B/B' node measures form a pool; each trial samples
    one pooled measure per node, refits the regression, and records the
    coefficients. Empirical p-values compare the observed coefficients
    against that null. Trials whose refit separates or degenerates are
    redrawn (and counted).
    """
    observed_matrix = minmax_scale(build_feature_matrix(networks_with_pairs, closeness_variant))
    if observed_matrix.values.shape[1] != len(FEATURE_NAMES):
        raise LitpropError("constant observed feature column; null comparison is undefined")
    observed_fit = fit_logistic(observed_matrix)
    if not observed_fit.converged:
        raise LitpropError("observed regression did not converge; cannot calibrate a null")

    node_count = 0
    pools = []  # aligned with row order of build_feature_matrix
    root = np.random.SeedSequence(seed)
    for net_index, (book_id, network, pairs) in enumerate(networks_with_pairs):
        nodes = network.nodes()
        position = {v: i for i, v in enumerate(nodes)}
        degrees = [network.degree(v) for v in nodes]
        sampled = []
        for g_index in range(graphs_per_network):
            graph_seed = np.random.SeedSequence(
                entropy=root.entropy, spawn_key=(0, net_index, g_index)
            )
            random_graph = expected_degree_graph(degrees, graph_seed)
            sampled.append(all_features(random_graph, closeness_variant))
        for b, b_prime in pairs:
            pools.append(np.array([s[position[b]].as_row() for s in sampled]))
            pools.append(np.array([s[position[b_prime]].as_row() for s in sampled]))
            node_count += 2

    labels = observed_matrix.labels
    null = np.empty((trials, len(FEATURE_NAMES)))
    redrawn = 0
    for trial in range(trials):
        for attempt in range(100):
            rng = np.random.default_rng(
                np.random.SeedSequence(entropy=root.entropy, spawn_key=(1, trial, attempt))
            )
            choices = rng.integers(graphs_per_network, size=node_count)
            values = np.array([pools[row][choices[row]] for row in range(node_count)])
            matrix = FeatureMatrix(
                values=_scale_columns_safe(values), labels=labels, columns=FEATURE_NAMES
            )
            try:
                fit = fit_logistic(matrix)
            except ValueError:
                fit = None
            if fit is not None and fit.converged:
                null[trial] = fit.coefficients
                break
            redrawn += 1
        else:
            raise LitpropError(f"trial {trial}: no convergent resample in 100 attempts")

    if redrawn:
        log.info("randomization test redrew %d degenerate trials", redrawn)
    return NullDistribution(
        feature_names=FEATURE_NAMES,
        observed=observed_fit.coefficients.copy(),
        null_coefficients=null,
        p_values=empirical_p_values(observed_fit.coefficients, null),
        redrawn_trials=redrawn,
    )


FEMALE = "F"
MALE = "M"
UNKNOWN = "UNKNOWN"


def infer_gender(entity_id: int, book: AnnotatedBook, gender_lexicon: Optional[GenderLexicon] = None) -> str:
    """Majority vote over gendered words in the entity's mention chain."""
    lex = gender_lexicon if gender_lexicon is not None else load_gender_lexicon()
    female = male = 0
    for mention in book.mentions:
        if mention.entity_id != entity_id:
            continue
        for tid in range(mention.start_token, mention.end_token + 1):
            word = GenderLexicon.normalize(book.tokens[tid].surface)
            lemma = book.tokens[tid].lemma.lower()
            if word in lex.female or lemma in lex.female:
                female += 1
            elif word in lex.male or lemma in lex.male:
                male += 1
    if female > male:
        return FEMALE
    if male > female:
        return MALE
    return UNKNOWN


TRIAD_CONFIGURATIONS = tuple(
    (a, b, c) for a in (FEMALE, MALE) for b in (FEMALE, MALE) for c in (FEMALE, MALE)
)


@dataclass
class GenderReport:
    configurations: tuple[tuple[str, str, str], ...]
    structural_proportions: dict[tuple[str, str, str], float]
    propagating_proportions: dict[tuple[str, str, str], float]
    structural_halfwidths: dict[tuple[str, str, str], float]
    propagating_halfwidths: dict[tuple[str, str, str], float]
    structural_n: int
    propagating_n: int


def _proportions(counts: dict, total: int) -> tuple[dict, dict]:
    proportions = {}
    halfwidths = {}
    for config in TRIAD_CONFIGURATIONS:
        p = counts.get(config, 0) / total if total else 0.0
        proportions[config] = p
        halfwidths[config] = 1.96 * sqrt(p * (1.0 - p) / total) if total else 0.0
    return proportions, halfwidths


def gender_triads(
    book_networks: Sequence[tuple[AnnotatedBook, CharacterNetwork, Sequence[ExplicitEvent]]],
    gender_lexicon: Optional[GenderLexicon] = None,
) -> GenderReport:
    """Gender-configuration proportions for structural vs propagating triads.

    Structural triads are center-distinguished paths A-B-C (B adjacent to
    both endpoints); each unordered path is counted in both orientations,
    matching the directed propagating triads drawn from explicit events.
    Triads containing an unknown-gender character are excluded from both
    populations.
    """
    lex = gender_lexicon if gender_lexicon is not None else load_gender_lexicon()
    structural: dict[tuple[str, str, str], int] = {}
    propagating: dict[tuple[str, str, str], int] = {}
    structural_n = propagating_n = 0

    for book, network, events in book_networks:
        gender = {v: infer_gender(v, book, lex) for v in network.nodes()}
        for b in network.nodes():
            if gender[b] == UNKNOWN:
                continue
            neighbors = network.neighbors(b)
            for a in neighbors:
                if gender[a] == UNKNOWN:
                    continue
                for c in neighbors:
                    if c == a or gender[c] == UNKNOWN:
                        continue
                    config = (gender[a], gender[b], gender[c])
                    structural[config] = structural.get(config, 0) + 1
                    structural_n += 1
        for event in events:
            ga = gender.get(event.a_entity, infer_gender(event.a_entity, book, lex))
            gb = gender.get(event.b_entity, infer_gender(event.b_entity, book, lex))
            if ga == UNKNOWN or gb == UNKNOWN:
                continue
            for c in event.c_entities:
                gc = gender.get(c, infer_gender(c, book, lex))
                if gc == UNKNOWN:
                    continue
                config = (ga, gb, gc)
                propagating[config] = propagating.get(config, 0) + 1
                propagating_n += 1

    structural_p, structural_hw = _proportions(structural, structural_n)
    propagating_p, propagating_hw = _proportions(propagating, propagating_n)
    return GenderReport(
        configurations=TRIAD_CONFIGURATIONS,
        structural_proportions=structural_p,
        propagating_proportions=propagating_p,
        structural_halfwidths=structural_hw,
        propagating_halfwidths=propagating_hw,
        structural_n=structural_n,
        propagating_n=propagating_n,
    )
