"""Near-multicollinearity detection measures with thresholds and verdicts.

Variable roles drive what enters each measure: the correlation matrix,
VIFs and the Stewart index use quantitative regressors only, the
condition number uses every column including intercept and dummies, and
dummies get a proportion-of-ones summary instead of a coefficient of
variation.
"""

import dataclasses
from dataclasses import dataclass

import numpy as np

from . import linalg
from .dataset import DesignMatrix

__all__ = [
    "Thresholds",
    "DEFAULT_THRESHOLDS",
    "CorrelationReport",
    "CnReport",
    "StewartReport",
    "SlmReport",
    "DiagnosticsReport",
    "correlation_matrix",
    "vif",
    "condition_number",
    "cns",
    "cn_severity",
    "stewart_index",
    "coefficient_of_variation",
    "proportion_of_ones",
    "slm",
    "multicol",
]

NEED_TWO_QUANTITATIVE = (
    "At least two quantitative independent variables are needed (excluding the intercept)"
)
NEED_ONE_QUANTITATIVE = (
    "At least one quantitative independent variable is needed (excluding the intercept)"
)
NEED_ONE_DUMMY = (
    "At least one qualitative independent variable is needed (excluding the intercept)"
)
SLM_NEEDS_TWO_COLUMNS = "Only 2 independent variables are needed (including the intercept)"
NEED_INTERCEPT = "an intercept column is needed for the with/without intercept comparison"
CENTERED_CV_MESSAGE = (
    "CV undefined: the variable is centered, so nonessential collinearity is impossible"
)


@dataclass(frozen=True)
class Thresholds:
    """Decision thresholds for every measure; defaults are the customary ones.

    The det(R) cutoff is the affine function
    det_r_intercept_a + det_r_n_coef * n - det_r_k_coef * k
    evaluated at the number of observations n and the number of
    quantitative regressors k.
    """

    pairwise_corr: float = 0.9486833
    det_r_intercept_a: float = 0.1013
    det_r_n_coef: float = 0.00008626
    det_r_k_coef: float = 0.01384
    vif_limit: float = 10.0
    cn_moderate: float = 20.0
    cn_severe: float = 30.0
    cv_limit: float = 0.1002506

    def __post_init__(self):
        for f in dataclasses.fields(self):
            if getattr(self, f.name) <= 0:
                raise ValueError(f"threshold {f.name} must be positive")
        if self.cn_moderate >= self.cn_severe:
            raise ValueError("cn_moderate must be below cn_severe")

    def det_r_threshold(self, n: int, n_quantitative: int) -> float:
        return self.det_r_intercept_a + self.det_r_n_coef * n - self.det_r_k_coef * n_quantitative


DEFAULT_THRESHOLDS = Thresholds()


@dataclass(frozen=True)
class CorrelationReport:
    """Pairwise correlations among quantitative regressors and det(R)."""

    labels: tuple[str, ...]
    r: np.ndarray
    det_r: float
    det_threshold: float
    flagged_pairs: tuple[tuple[str, str, float], ...]
    problematic_pairs: bool
    problematic_det: bool

    @property
    def problematic(self) -> bool:
        return self.problematic_pairs or self.problematic_det


@dataclass(frozen=True)
class CnReport:
    cn_without: float
    cn_with: float
    increase_pct: float


@dataclass(frozen=True)
class StewartReport:
    """Stewart collinearity indexes k_i^2 and the essential split.

    k2 carries one entry per column of the intercept-plus-quantitative
    submatrix (intercept first when present).  essential_pct and
    nonessential_pct cover the quantitative entries only and are None
    when fewer than two quantitative regressors exist.
    """

    labels: tuple[str, ...]
    k2: np.ndarray
    essential_pct: np.ndarray | None
    nonessential_pct: np.ndarray | None


@dataclass(frozen=True)
class SlmReport:
    """Diagnostics for a model with an intercept and a single regressor."""

    label: str
    is_dummy: bool
    cn: float
    cv: float | None = None
    vif: float | None = None
    k2: tuple[float, float] | None = None
    ones_pct: float | None = None


@dataclass(frozen=True)
class DiagnosticsReport:
    """Bundle of every applicable measure for one design matrix.

    Inapplicable sections are None, with the guidance text recorded in
    notes under the section name.
    """

    cv: tuple[tuple[str, float | None], ...] | None
    dummy_pct: tuple[tuple[str, float], ...] | None
    correlation: CorrelationReport | None
    vifs: tuple[tuple[str, float], ...] | None
    cn: CnReport | None
    stewart: StewartReport | None
    notes: dict[str, str]


def _quantitative_block(X: DesignMatrix) -> tuple[tuple[str, ...], np.ndarray]:
    labels = X.quantitative_labels
    return labels, X.X[:, list(X.quantitative_idx)]


def _pearson(Q: np.ndarray, labels) -> np.ndarray:
    centered = Q - Q.mean(axis=0)
    norms = np.sqrt((centered * centered).sum(axis=0))
    zero = np.nonzero(norms == 0.0)[0]
    if zero.size:
        raise ValueError(f"quantitative column {labels[zero[0]]!r} has zero variance")
    U = centered / norms
    R = U.T @ U
    np.fill_diagonal(R, 1.0)
    return (R + R.T) / 2.0


def correlation_matrix(X: DesignMatrix, thresholds: Thresholds = DEFAULT_THRESHOLDS) -> CorrelationReport:
    """Correlation matrix over the quantitative regressors, with det(R).

    Intercept and dummy columns never enter.  Pairs with |r| above
    thresholds.pairwise_corr are flagged; det(R) below the affine cutoff
    evaluated at (n, number of quantitative regressors) is flagged too.
    """
    labels, Q = _quantitative_block(X)
    if len(labels) < 2:
        raise ValueError(NEED_TWO_QUANTITATIVE)
    R = _pearson(Q, labels)
    det_r = linalg.determinant(R)
    det_threshold = thresholds.det_r_threshold(X.n, len(labels))
    flagged = tuple(
        (labels[i], labels[j], float(R[i, j]))
        for i in range(len(labels))
        for j in range(i + 1, len(labels))
        if abs(R[i, j]) > thresholds.pairwise_corr
    )
    return CorrelationReport(
        labels=labels,
        r=R,
        det_r=det_r,
        det_threshold=det_threshold,
        flagged_pairs=flagged,
        problematic_pairs=bool(flagged),
        problematic_det=det_r < det_threshold,
    )


def _worst_pair(labels, R) -> tuple[str, str, float]:
    best = (0, 1)
    for i in range(len(labels)):
        for j in range(i + 1, len(labels)):
            if abs(R[i, j]) > abs(R[best[0], best[1]]):
                best = (i, j)
    i, j = best
    return labels[i], labels[j], float(R[i, j])


def vif(X: DesignMatrix) -> tuple[tuple[str, float], ...]:
    """Variance inflation factors: diagonal of the inverted correlation
    matrix of the quantitative regressors."""
    labels, Q = _quantitative_block(X)
    if len(labels) < 2:
        raise ValueError(NEED_TWO_QUANTITATIVE)
    R = _pearson(Q, labels)
    try:
        R_inv = linalg.spd_inverse(R)
    except linalg.SingularMatrixError:
        a, b, r = _worst_pair(labels, R)
        raise linalg.SingularMatrixError(
            f"correlation matrix is numerically singular; "
            f"worst pair {a!r}, {b!r} with r = {r:.7g}"
        ) from None
    return tuple((label, float(R_inv[i, i])) for i, label in enumerate(labels))


def condition_number(X: DesignMatrix, include_intercept: bool = True) -> float:
    """Condition number sqrt(lambda_max / lambda_min) of X'X after
    scaling every column of X to unit length.

    Dummy columns are included.  include_intercept=False drops the
    intercept column before scaling.
    """
    M = X.X
    if not include_intercept and X.intercept_present:
        M = M[:, 1:]
    if M.shape[1] == 0:
        raise ValueError("no columns left for the condition number")
    scaled = linalg.unit_length_scale(M)
    eig = linalg.sym_eigenvalues(scaled.T @ scaled)
    lam_max, lam_min = float(eig[0]), float(eig[-1])
    if lam_min <= 1e-12 * lam_max:
        raise linalg.SingularMatrixError(linalg.SINGULAR_MESSAGE)
    return float(np.sqrt(lam_max / lam_min))


def cns(X: DesignMatrix) -> CnReport:
    """Condition numbers with and without the intercept and the
    percentage increase 100 * (with - without) / with."""
    if not X.intercept_present:
        raise ValueError(NEED_INTERCEPT)
    cn_with = condition_number(X, include_intercept=True)
    cn_without = condition_number(X, include_intercept=False)
    return CnReport(
        cn_without=cn_without,
        cn_with=cn_with,
        increase_pct=100.0 * (cn_with - cn_without) / cn_with,
    )


def cn_severity(cn: float, thresholds: Thresholds = DEFAULT_THRESHOLDS) -> str:
    """Three-level verdict for a condition number: none, moderate, severe."""
    if cn > thresholds.cn_severe:
        return "severe"
    if cn >= thresholds.cn_moderate:
        return "moderate"
    return "none"


def stewart_index(X: DesignMatrix) -> StewartReport:
    """Stewart indexes k_i^2 = ||x_i||^2 [(X'X)^-1]_ii over the
    intercept-plus-quantitative submatrix.

    Dummies are excluded throughout.  With at least two quantitative
    regressors the essential percentage 100 * VIF(i) / k_i^2 and its
    complement are reported per quantitative regressor.
    """
    q_labels, Q = _quantitative_block(X)
    if len(q_labels) < 1:
        raise ValueError(NEED_ONE_QUANTITATIVE)
    if X.intercept_present:
        sub = np.column_stack([np.ones(X.n), Q])
        labels = ("intercept",) + q_labels
    else:
        sub = Q
        labels = q_labels
    gram_inv = linalg.spd_inverse(sub.T @ sub)
    k2 = (sub * sub).sum(axis=0) * gram_inv.diagonal()

    essential = nonessential = None
    if len(q_labels) >= 2:
        vifs = np.array([v for _, v in vif(X)])
        quant_k2 = k2[1:] if X.intercept_present else k2
        essential = 100.0 * vifs / quant_k2
        nonessential = 100.0 - essential
    return StewartReport(labels=labels, k2=k2, essential_pct=essential, nonessential_pct=nonessential)


def coefficient_of_variation(col) -> float:
    """Coefficient of variation: standard deviation (divisor n) over the
    absolute mean.  Values below the cv_limit threshold signal
    nonessential collinearity.  A centered column has no CV."""
    x = np.asarray(col, dtype=float)
    if x.ndim != 1 or x.size == 0:
        raise ValueError("expected a nonempty vector")
    mean = x.mean()
    sd = x.std()
    if mean == 0.0 or abs(mean) < 1e-12 * sd:
        raise ValueError(CENTERED_CV_MESSAGE)
    return float(sd / abs(mean))


def proportion_of_ones(col) -> float:
    """Percentage of ones in a 0/1 column."""
    x = np.asarray(col, dtype=float)
    if x.ndim != 1 or x.size == 0:
        raise ValueError("expected a nonempty vector")
    if not np.all(np.isin(x, (0.0, 1.0))):
        raise ValueError("column contains values other than 0 and 1")
    return float(100.0 * np.count_nonzero(x == 1.0) / x.size)


def slm(X: DesignMatrix, thresholds: Thresholds = DEFAULT_THRESHOLDS) -> SlmReport:
    """Diagnostics for the simple linear model: intercept plus exactly
    one regressor.

    A quantitative regressor gets CV, VIF (identically 1), CN and the
    Stewart pair; a dummy gets the proportion of ones and CN.
    """
    if X.k != 2 or not X.intercept_present:
        raise ValueError(SLM_NEEDS_TWO_COLUMNS)
    label = X.labels[1]
    cn = condition_number(X, include_intercept=True)
    if X.dummy_idx:
        return SlmReport(label=label, is_dummy=True, cn=cn,
                         ones_pct=proportion_of_ones(X.X[:, 1]))
    gram_inv = linalg.spd_inverse(X.X.T @ X.X)
    k2 = (X.X * X.X).sum(axis=0) * gram_inv.diagonal()
    return SlmReport(
        label=label,
        is_dummy=False,
        cn=cn,
        cv=coefficient_of_variation(X.X[:, 1]),
        vif=1.0,
        k2=(float(k2[0]), float(k2[1])),
    )


def multicol(X: DesignMatrix, thresholds: Thresholds = DEFAULT_THRESHOLDS):
    """Every applicable measure for X in one report.

    Dispatches to slm for an intercept-plus-one-regressor design.
    Sections that need column roles the design lacks are set to None and
    explained in notes.
    """
    if X.k == 2 and X.intercept_present:
        return slm(X, thresholds)

    notes: dict[str, str] = {}

    cv_entries = None
    if X.quantitative_idx:
        entries = []
        for i in X.quantitative_idx:
            try:
                entries.append((X.labels[i], coefficient_of_variation(X.X[:, i])))
            except ValueError:
                entries.append((X.labels[i], None))
        cv_entries = tuple(entries)
    else:
        notes["cv"] = NEED_ONE_QUANTITATIVE

    dummy_entries = None
    if X.dummy_idx:
        dummy_entries = tuple(
            (X.labels[i], proportion_of_ones(X.X[:, i])) for i in X.dummy_idx
        )
    else:
        notes["dummy_pct"] = NEED_ONE_DUMMY

    correlation = vifs = None
    if len(X.quantitative_idx) >= 2:
        correlation = correlation_matrix(X, thresholds)
        vifs = vif(X)
    else:
        notes["correlation"] = NEED_TWO_QUANTITATIVE
        notes["vif"] = NEED_TWO_QUANTITATIVE

    cn_report = None
    if X.intercept_present:
        cn_report = cns(X)
    else:
        notes["cn"] = NEED_INTERCEPT

    stewart = None
    if X.quantitative_idx:
        stewart = stewart_index(X)
    else:
        notes["stewart"] = NEED_ONE_QUANTITATIVE

    return DiagnosticsReport(
        cv=cv_entries,
        dummy_pct=dummy_entries,
        correlation=correlation,
        vifs=vifs,
        cn=cn_report,
        stewart=stewart,
        notes=notes,
    )
