"""Scoring, ROC threshold tuning, feature dumps, and the bias regression.

Scoring is per one-second window, the detector's native granularity.
Sensitivity applies to walking activity groups, specificity to everything
else; group membership comes from a two-column (raw_label, group) mapping and
groups whose name starts with ``walking`` count as walking. Trial scores are
averaged within subject first, then across subjects, reported as
mean +- 1.96 * SD / sqrt(n) without clipping to [0, 1].

Threshold tuning sweeps one parameter stage at a time in the order
A -> f_w -> (alpha, beta) -> T, each stage fixing previously selected values.
The operating point returned per stage maximizes tpr - fpr (Youden), and the
AUC integrates the upper convex hull of the stage's operating points anchored
at (0,0) and (1,1).
"""

from __future__ import annotations

import importlib.resources
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
import pandas as pd
from scipy.stats import t as t_dist

from .cwt import FrequencyGrid, MorseParams, detection_grid, get_plan
from .detect import DetectorParams, PerSecondLabels, detect, window_band_stats, with_overrides
from .errors import Empty, IncompleteRows, LengthMismatch, NoNegatives, NoPositives, RankDeficient, TooShort
from .preprocess import SAMPLES_PER_WINDOW, VmSeries, window_p2p

_trapezoid = getattr(np, "trapezoid", None) or np.trapz  # numpy < 2 compatibility

SENSOR_LOCATIONS = ("thigh", "waist", "chest", "arm", "unspecified", "wrist")


# ---------------------------------------------------------------------------
# activity grouping and confusion counts


@dataclass(frozen=True)
class ActivityGrouping:
    """Raw activity label -> activity group, case-insensitive on lookup."""

    mapping: dict

    @staticmethod
    def is_walking_group(group: str) -> bool:
        return group.startswith("walking")

    def group_of(self, raw_label: str) -> str | None:
        return self.mapping.get(str(raw_label).strip().lower())

    @classmethod
    def from_csv(cls, path) -> "ActivityGrouping":
        df = pd.read_csv(path)
        if "raw_label" not in df.columns or "group" not in df.columns:
            raise ValueError(f"{path}: grouping file needs columns raw_label,group")
        mapping = {
            str(r).strip().lower(): str(g).strip()
            for r, g in zip(df["raw_label"], df["group"])
        }
        return cls(mapping=mapping)

    @classmethod
    def default(cls) -> "ActivityGrouping":
        ref = importlib.resources.files("walkrec").joinpath("data/activity_groups.csv")
        with importlib.resources.as_file(ref) as path:
            return cls.from_csv(path)


@dataclass
class ConfusionCounts:
    tp: int = 0
    fp: int = 0
    tn: int = 0
    fn: int = 0

    def sensitivity(self) -> float:
        return self.tp / (self.tp + self.fn) if self.tp + self.fn else float("nan")

    def specificity(self) -> float:
        return self.tn / (self.tn + self.fp) if self.tn + self.fp else float("nan")


def window_labels(labels: Sequence[str], samples_per_window: int = SAMPLES_PER_WINDOW) -> np.ndarray:
    """Collapse per-sample labels to per-window by majority (earliest wins ties)."""
    labels = np.asarray(labels, dtype=object)
    n = len(labels) // samples_per_window
    out = np.empty(n, dtype=object)
    for w in range(n):
        block = labels[w * samples_per_window : (w + 1) * samples_per_window]
        uniq, first, counts = np.unique(block, return_index=True, return_counts=True)
        order = np.lexsort((first, -counts))
        out[w] = uniq[order[0]]
    return out


def score(
    pred: PerSecondLabels,
    truth: Sequence[str],
    grouping: ActivityGrouping,
) -> tuple[dict[str, ConfusionCounts], dict[str, int]]:
    """Confusion counts per activity group, plus counts of unmapped labels.

    ``truth`` is one activity label per window. Windows in walking groups
    score tp/fn on the prediction; windows in other groups score tn/fp.
    Labels the grouping does not know are excluded and tallied.
    """
    truth = np.asarray(truth, dtype=object)
    if len(truth) != pred.n_windows:
        raise LengthMismatch(f"{pred.n_windows} predicted windows vs {len(truth)} labels")
    by_group: dict[str, ConfusionCounts] = {}
    unmapped: dict[str, int] = {}
    for predicted_walk, raw in zip(pred.walking, truth):
        group = grouping.group_of(raw)
        if group is None:
            unmapped[raw] = unmapped.get(raw, 0) + 1
            continue
        cc = by_group.setdefault(group, ConfusionCounts())
        if ActivityGrouping.is_walking_group(group):
            if predicted_walk:
                cc.tp += 1
            else:
                cc.fn += 1
        else:
            if predicted_walk:
                cc.fp += 1
            else:
                cc.tn += 1
    return by_group, unmapped


@dataclass
class SubjectAverage:
    per_subject: dict
    mean: float
    ci: tuple[float, float]
    n: int


def subject_average(per_trial_scores: dict[str, Sequence[float]]) -> SubjectAverage:
    """Average trials within subject, then across subjects with a normal CI.

    CI = mean +- 1.96 * SD / sqrt(n), not clipped to [0, 1]. With a single
    subject the CI degenerates to (mean, mean).
    """
    if not per_trial_scores:
        raise Empty("no subjects to average")
    per_subject = {
        subject: float(np.mean(trials)) for subject, trials in per_trial_scores.items()
    }
    values = np.array(list(per_subject.values()), dtype=float)
    mean = float(values.mean())
    if len(values) > 1:
        half = 1.96 * values.std(ddof=1) / np.sqrt(len(values))
        ci = (mean - float(half), mean + float(half))
    else:
        ci = (mean, mean)
    return SubjectAverage(per_subject=per_subject, mean=mean, ci=ci, n=len(values))


# ---------------------------------------------------------------------------
# ROC sweeps


@dataclass
class TuningRecord:
    """One labelled series for tuning: vm plus per-window truth.

    ``truth`` uses 1 for normal-walking windows, 0 for non-walking windows,
    and -1 for windows excluded from the one-vs-all comparison (other walking
    variants, unmapped labels).
    """

    vm: VmSeries
    truth: np.ndarray

    def __post_init__(self):
        self.truth = np.asarray(self.truth, dtype=int)
        if len(self.truth) != self.vm.n_windows:
            raise LengthMismatch("truth must have one entry per full window")


@dataclass
class RocCurve:
    param_name: str
    points: list  # (candidate, fpr, tpr)
    auc: float
    youden_point: object  # candidate maximizing tpr - fpr


PARAM_NAMES = ("A", "f_w", "alpha_beta", "T")


def _substitute(params: DetectorParams, name: str, value) -> DetectorParams:
    if name == "A":
        return with_overrides(params, a_threshold=float(value))
    if name == "f_w":
        return with_overrides(params, f_min=float(value[0]), f_max=float(value[1]))
    if name == "alpha_beta":
        return with_overrides(params, alpha=float(value[0]), beta=float(value[1]))
    if name == "T":
        return with_overrides(params, min_windows=int(value))
    raise ValueError(f"unknown parameter name {name!r}; expected one of {PARAM_NAMES}")


def _rates(dataset: Iterable[TuningRecord], params: DetectorParams) -> tuple[float, float]:
    tp = fp = tn = fn = 0
    for rec in dataset:
        pred = detect(rec.vm, params).walking
        truth = rec.truth
        tp += int(np.count_nonzero(pred & (truth == 1)))
        fn += int(np.count_nonzero(~pred & (truth == 1)))
        fp += int(np.count_nonzero(pred & (truth == 0)))
        tn += int(np.count_nonzero(~pred & (truth == 0)))
    return fp / (fp + tn), tp / (tp + fn)


def trapezoid_auc(points: Sequence[tuple[float, float]]) -> float:
    """Plain trapezoid over the sorted raw points with (0,0)/(1,1) anchors."""
    pts = sorted(set((float(f), float(t)) for f, t in points) | {(0.0, 0.0), (1.0, 1.0)})
    xs, ys = zip(*pts)
    return float(_trapezoid(ys, xs))


def rocch_auc(points: Sequence[tuple[float, float]]) -> float:
    """Area under the upper convex hull of (fpr, tpr) points with anchors."""
    pts = sorted(set((float(f), float(t)) for f, t in points) | {(0.0, 0.0), (1.0, 1.0)})
    hull: list[tuple[float, float]] = []
    for p in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # pop the middle point when it lies on or below the chord
            if (x2 - x1) * (p[1] - y1) - (y2 - y1) * (p[0] - x1) >= 0:
                hull.pop()
            else:
                break
        hull.append(p)
    xs, ys = zip(*hull)
    return float(_trapezoid(ys, xs))


def roc_sweep(
    dataset: Sequence[TuningRecord],
    param_name: str,
    candidates: Sequence,
    fixed_params: DetectorParams,
) -> RocCurve:
    """Sweep one tuning parameter, collecting (fpr, tpr) per candidate.

    The Youden point maximizes tpr - fpr; ties resolve to the smallest
    candidate (tuples compare lexicographically). Raises NoPositives or
    NoNegatives when the dataset lacks a class.
    """
    total = np.concatenate([rec.truth for rec in dataset]) if dataset else np.array([])
    if np.count_nonzero(total == 1) == 0:
        raise NoPositives("dataset has no normal-walking windows")
    if np.count_nonzero(total == 0) == 0:
        raise NoNegatives("dataset has no non-walking windows")
    points = []
    for cand in sorted(candidates):
        cand = tuple(cand) if isinstance(cand, (tuple, list, np.ndarray)) else float(cand)
        fpr, tpr = _rates(dataset, _substitute(fixed_params, param_name, cand))
        points.append((cand, fpr, tpr))
    best = max(points, key=lambda p: (p[2] - p[1], _neg_key(p[0])))
    return RocCurve(
        param_name=param_name,
        points=points,
        auc=rocch_auc([(f, t) for _, f, t in points]),
        youden_point=best[0],
    )


def _neg_key(candidate):
    # max() with this secondary key prefers the smallest candidate on ties
    if isinstance(candidate, tuple):
        return tuple(-c for c in candidate)
    return -candidate


def default_stage_grids() -> dict[str, list]:
    return {
        "A": [round(a, 2) for a in np.arange(0.05, 1.0001, 0.05)],
        "f_w": [
            (round(lo, 1), round(hi, 1))
            for lo in np.arange(1.0, 1.8001, 0.1)
            for hi in np.arange(2.0, 3.0001, 0.1)
        ],
        "alpha_beta": [
            (round(a, 4), round(b, 2))
            for a in np.logspace(-1, 2, 13)
            for b in np.arange(1.0, 3.0001, 0.25)
        ],
        "T": list(range(1, 11)),
    }


def staged_tuning(
    dataset: Sequence[TuningRecord],
    initial_params: DetectorParams,
    stage_grids: dict[str, Sequence] | None = None,
) -> tuple[DetectorParams, dict[str, RocCurve]]:
    """Greedy staged sweep A -> f_w -> (alpha, beta) -> T.

    Later stages run with every earlier stage pinned at its Youden selection;
    parameters not yet swept stay at ``initial_params``.
    """
    grids = dict(default_stage_grids())
    if stage_grids:
        grids.update(stage_grids)
    params = initial_params
    curves: dict[str, RocCurve] = {}
    for name in PARAM_NAMES:
        curve = roc_sweep(dataset, name, grids[name], params)
        params = _substitute(params, name, curve.youden_point)
        curves[name] = curve
    return params, curves


# ---------------------------------------------------------------------------
# per-second feature dump


def dump_features(
    vm: VmSeries, grid: FrequencyGrid | None = None, mp: MorseParams | None = None
) -> pd.DataFrame:
    """Per-window amplitude and band maxima, for external plotting.

    Columns: window_index, p2p_g, dominant_freq_hz, m_in, m_lo, m_hi. The
    transform runs over the whole series (no amplitude gating).
    """
    if len(vm) < SAMPLES_PER_WINDOW:
        raise TooShort("need at least 10 samples")
    mp = mp or MorseParams()
    if grid is None:
        grid = detection_grid(fs=vm.fs, mp=mp)
    plan = get_plan(grid, mp, vm.fs)
    n_win = vm.n_windows
    p2p = window_p2p(vm.values)
    m_in, m_lo, m_hi, dom = window_band_stats(
        vm.values, plan, grid.band, 0, n_win * SAMPLES_PER_WINDOW
    )
    return pd.DataFrame(
        {
            "window_index": np.arange(n_win),
            "p2p_g": p2p,
            "dominant_freq_hz": dom,
            "m_in": m_in,
            "m_lo": m_lo,
            "m_hi": m_hi,
        }
    )


# ---------------------------------------------------------------------------
# per-location accuracy report


@dataclass
class ReportCell:
    mean: float
    ci: tuple[float, float]
    n: int


@dataclass
class AccuracyReport:
    """mean (95% CI), n per (activity group, sensor location) cell."""

    cells: dict  # (group, location) -> ReportCell
    groups: list
    locations: list = field(default_factory=lambda: list(SENSOR_LOCATIONS))
    unmapped: dict = field(default_factory=dict)

    def to_frame(self) -> pd.DataFrame:
        rows = {}
        for g in self.groups:
            row = {}
            for loc in self.locations:
                cell = self.cells.get((g, loc))
                row[loc] = (
                    f"{cell.mean:.2f} ({cell.ci[0]:.2f},{cell.ci[1]:.2f}), {cell.n}"
                    if cell
                    else "-"
                )
            rows[g] = row
        return pd.DataFrame.from_dict(rows, orient="index", columns=self.locations)


def build_report(
    trial_scores: Sequence[tuple[str, str, str, float]],
    unmapped: dict | None = None,
) -> AccuracyReport:
    """Aggregate (subject, location, group, score) trials into a report."""
    nested: dict = {}
    for subject, location, group, value in trial_scores:
        nested.setdefault((group, location), {}).setdefault(subject, []).append(value)
    cells = {}
    groups = []
    for (group, location), per_subject in nested.items():
        stats = subject_average(per_subject)
        cells[(group, location)] = ReportCell(mean=stats.mean, ci=stats.ci, n=stats.n)
        if group not in groups:
            groups.append(group)
    walking_first = sorted(groups, key=lambda g: (not ActivityGrouping.is_walking_group(g), g))
    return AccuracyReport(cells=cells, groups=walking_first, unmapped=dict(unmapped or {}))


# ---------------------------------------------------------------------------
# bias regression (StandardReg)

REGRESSION_COLUMNS = ("sensitivity", "age_y", "bmi", "gender", "condition", "location", "study")

_LOCATION_LEVELS = ("thigh", "waist", "chest", "wrist", "unspecified")  # reference: arm


@dataclass
class RegressionResult:
    covariates: list
    estimates: np.ndarray
    standard_errors: np.ndarray
    ci_lower: np.ndarray
    ci_upper: np.ndarray
    references: dict
    age_mean: float
    age_sd: float
    bmi_mean: float
    bmi_sd: float
    n_used: int
    n_dropped: int

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            {
                "covariate": self.covariates,
                "estimate": self.estimates,
                "se": self.standard_errors,
                "ci_lo": self.ci_lower,
                "ci_hi": self.ci_upper,
            }
        )


@dataclass
class OlsFit:
    covariates: list
    estimates: np.ndarray
    standard_errors: np.ndarray
    ci_lower: np.ndarray
    ci_upper: np.ndarray
    residuals: np.ndarray


def ols_fit(design: np.ndarray, y: np.ndarray, names: Sequence[str] | None = None) -> OlsFit:
    """Ordinary least squares via QR, with t-based 95% confidence intervals.

    Raises RankDeficient when the design matrix is not full column rank.
    SEs come from ``sigma^2 * (X'X)^-1`` with ``sigma^2 = RSS / (n - p)``;
    an exact fit therefore yields zero SEs.
    """
    x = np.asarray(design, dtype=float)
    y = np.asarray(y, dtype=float)
    n, p = x.shape
    if np.linalg.matrix_rank(x) < p:
        raise RankDeficient(f"design matrix rank < {p}")
    q, r = np.linalg.qr(x)
    beta = np.linalg.solve(r, q.T @ y)
    residuals = y - x @ beta
    dof = n - p
    sigma2 = float(residuals @ residuals) / dof if dof > 0 else 0.0
    r_inv = np.linalg.solve(r, np.eye(p))
    se = np.sqrt(np.clip(sigma2 * np.sum(r_inv**2, axis=1), 0.0, None))
    t_crit = float(t_dist.ppf(0.975, dof)) if dof > 0 else 0.0
    return OlsFit(
        covariates=list(names) if names is not None else [f"x{i}" for i in range(p)],
        estimates=beta,
        standard_errors=se,
        ci_lower=beta - t_crit * se,
        ci_upper=beta + t_crit * se,
        residuals=residuals,
    )


def _indicator_block(values: pd.Series, levels: Sequence[str], reference: str, prefix: str):
    observed = [lv for lv in levels if lv in set(values)]
    ref = reference if reference in set(values) else (observed[0] if observed else None)
    cols, names = [], []
    for lv in observed:
        if lv == ref:
            continue
        cols.append((values == lv).to_numpy(dtype=float))
        names.append(f"{prefix}:{lv}")
    return cols, names, ref


def standard_reg(table: pd.DataFrame, reference_study: str = "UniMiBSHAR") -> RegressionResult:
    """Ordinary least squares of sensitivity on demographics and context.

    Expects columns sensitivity, age_y, bmi, gender, condition, location,
    study. Age and BMI are standardized by their sample mean and SD (the
    constants are recorded on the result). Gender, condition, location, and
    study enter as indicators against the references female, controlled, arm,
    and ``reference_study``. Rows with any missing covariate are dropped and
    counted. 95% CIs use the t distribution with n - p degrees of freedom.
    """
    missing_cols = [c for c in REGRESSION_COLUMNS if c not in table.columns]
    if missing_cols:
        raise ValueError(f"regression table lacks columns {missing_cols}")
    df = table.loc[:, list(REGRESSION_COLUMNS)].copy()
    for col in ("sensitivity", "age_y", "bmi"):
        df[col] = pd.to_numeric(df[col], errors="coerce")
    for col in ("gender", "condition", "location", "study"):
        df[col] = df[col].astype(str).str.strip()
        df.loc[df[col].isin(("", "nan", "None")), col] = np.nan
    complete = df.dropna()
    n_dropped = len(df) - len(complete)
    if complete.empty:
        raise IncompleteRows(f"all {len(df)} rows have missing covariates")

    age = complete["age_y"].to_numpy(dtype=float)
    bmi = complete["bmi"].to_numpy(dtype=float)
    age_mean = float(age.mean())
    age_sd = float(age.std(ddof=1)) if len(age) > 1 and age.std(ddof=1) > 0 else 1.0
    bmi_mean = float(bmi.mean())
    bmi_sd = float(bmi.std(ddof=1)) if len(bmi) > 1 and bmi.std(ddof=1) > 0 else 1.0

    cols = [np.ones(len(complete)), (age - age_mean) / age_sd, (bmi - bmi_mean) / bmi_sd]
    names = ["intercept", "age", "bmi"]
    references = {}
    gender = complete["gender"].str.lower()
    block, block_names, ref = _indicator_block(gender, ("male",), "female", "gender")
    references["gender"] = "female" if "female" in set(gender) else ref
    cols += block
    names += block_names
    condition = complete["condition"].str.lower()
    block, block_names, ref = _indicator_block(condition, ("free_living",), "controlled", "condition")
    references["condition"] = "controlled" if "controlled" in set(condition) else ref
    cols += block
    names += block_names
    location = complete["location"].str.lower()
    block, block_names, ref = _indicator_block(location, _LOCATION_LEVELS, "arm", "location")
    references["location"] = "arm" if "arm" in set(location) else ref
    cols += block
    names += block_names
    studies = sorted(set(complete["study"]))
    block, block_names, ref = _indicator_block(complete["study"], studies, reference_study, "study")
    references["study"] = ref
    cols += block
    names += block_names

    x = np.column_stack(cols)
    y = complete["sensitivity"].to_numpy(dtype=float)
    fit = ols_fit(x, y, names)
    return RegressionResult(
        covariates=fit.covariates,
        estimates=fit.estimates,
        standard_errors=fit.standard_errors,
        ci_lower=fit.ci_lower,
        ci_upper=fit.ci_upper,
        references=references,
        age_mean=age_mean,
        age_sd=age_sd,
        bmi_mean=bmi_mean,
        bmi_sd=bmi_sd,
        n_used=len(complete),
        n_dropped=n_dropped,
    )
