"""Command-line surface: detect, tune, evaluate, synth, regress, features.

Exit codes: 0 success, 2 input error, 3 configuration error, 4 internal
invariant violation. Failures print one ``Category: message`` line to stderr,
where the category is the error class name. Diagnostics always go to stderr;
stdout carries only machine-readable JSON (suppressed details with --quiet).

A flat key=value config file (# comments allowed) may set any long flag;
explicit flags override the file. Detector parameters resolve from --profile
(default smartphone) with explicit --a/--f-min/--f-max/--alpha/--beta/--twin
overrides.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np
import pandas as pd

from . import evaluate as ev
from . import synth as synthmod
from .cwt import detection_grid
from .detect import PROFILES, DetectorParams, detect, summarize_bouts, with_overrides
from .errors import (
    BadBand,
    BadSpec,
    ConfigError,
    WalkrecError,
)
from .ingest import RecordingMeta, normalize_units, parse_csv, resample_10hz
from .preprocess import adjust_walk_labels, vector_magnitude

EXIT_INPUT = 2
EXIT_CONFIG = 3
EXIT_INTERNAL = 4

_CONFIG_ERRORS = (ConfigError, BadBand)


def _diag(args, msg: str) -> None:
    if not args.quiet:
        print(msg, file=sys.stderr)


def load_config(path: str | None) -> dict:
    """Parse a flat ``key = value`` config file; '#' starts a comment."""
    if not path:
        return {}
    cfg = {}
    text = Path(path).read_text(encoding="utf-8")
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key = value")
        key, value = line.split("=", 1)
        cfg[key.strip().replace("-", "_")] = value.strip()
    return cfg


_CONFIG_TYPES = {
    "units": str, "profile": str, "out": str, "jobs": int, "seed": int,
    "grouping": str, "max_gap_s": float, "a": float, "f_min": float,
    "f_max": float, "alpha": float, "beta": float, "twin": int, "voices": int,
    "reference_study": str, "stage": str, "manifest": str,
    "predictions_dir": str, "no_label_adjust": lambda v: v.lower() in ("1", "true", "yes"),
}


def apply_config(args: argparse.Namespace) -> argparse.Namespace:
    cfg = load_config(getattr(args, "config", None))
    for key, raw in cfg.items():
        if key not in _CONFIG_TYPES:
            raise ConfigError(f"unknown config key {key!r}")
        if getattr(args, key, None) in (None, False):
            try:
                setattr(args, key, _CONFIG_TYPES[key](raw))
            except ValueError:
                raise ConfigError(f"config key {key!r}: cannot parse {raw!r}")
    # defaults for flags that a config file may also set
    args.out = args.out or "."
    if getattr(args, "max_gap_s", None) is None:
        args.max_gap_s = 1.0
    return args


def resolve_params(args) -> DetectorParams:
    profile = args.profile or "smartphone"
    if profile not in PROFILES:
        raise ConfigError(f"unknown profile {profile!r}")
    return with_overrides(
        PROFILES[profile],
        a_threshold=args.a, f_min=args.f_min, f_max=args.f_max,
        alpha=args.alpha, beta=args.beta, min_windows=args.twin,
    )


def _params_dict(p: DetectorParams) -> dict:
    return {
        "profile": p.profile, "a_threshold_g": p.a_threshold,
        "f_min_hz": p.f_min, "f_max_hz": p.f_max,
        "alpha": p.alpha, "beta": p.beta, "min_windows": p.min_windows,
    }


def _write_json(path: Path, payload: dict) -> None:
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _load_chunks(path: str, units: str, max_gap_s: float, meta: RecordingMeta | None = None):
    rec = normalize_units(parse_csv(path, units="m_per_s2" if units == "ms2" else "g", meta=meta))
    return rec, resample_10hz(rec, max_gap_s=max_gap_s)


# ---------------------------------------------------------------------------
# detect


def _grid_for(args, params: DetectorParams):
    if getattr(args, "voices", None) is None:
        return None  # detect/features build the default grid themselves
    return detection_grid(fs=10.0, band=params.band, voices_per_octave=args.voices)


def _detect_one(path: str, args, params: DetectorParams) -> dict:
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    stem = Path(path).stem
    t0 = time.perf_counter()
    grid = _grid_for(args, params)
    raw, chunks = _load_chunks(path, args.units or "g", args.max_gap_s)

    label_rows = []
    bouts_payload = []
    window_index = 0
    walking_seconds = 0
    total_steps = 0.0
    for chunk in chunks:
        vm = vector_magnitude(chunk)
        if vm.n_windows < params.min_windows:
            # too short to ever satisfy the duration rule: all non-walking
            for w in range(vm.n_windows):
                label_rows.append((window_index + w, chunk.start_time + w, 0, ""))
            window_index += vm.n_windows
            continue
        labels = detect(vm, params, grid=grid)
        for w in range(labels.n_windows):
            walk = bool(labels.walking[w])
            label_rows.append(
                (
                    window_index + w,
                    chunk.start_time + w,
                    1 if walk else 0,
                    f"{labels.dominant_freq[w]:.6f}" if walk else "",
                )
            )
        for bout in summarize_bouts(labels):
            bouts_payload.append(
                {
                    "start_s": chunk.start_time + bout.start_s,
                    "duration_s": bout.duration_s,
                    "cadence_hz": round(bout.cadence_hz, 6),
                    "steps": round(bout.steps, 6),
                }
            )
            total_steps += bout.steps
        walking_seconds += int(labels.walking.sum())
        window_index += labels.n_windows

    labels_path = out_dir / f"{stem}.labels.csv"
    with labels_path.open("w", encoding="utf-8") as fh:
        fh.write("window_index,start_s,walking,dominant_freq_hz\n")
        for idx, start_s, walk, dom in label_rows:
            fh.write(f"{idx},{start_s:.3f},{walk},{dom}\n")
    (out_dir / f"{stem}.bouts.json").write_text(
        json.dumps(bouts_payload, indent=2) + "\n", encoding="utf-8"
    )
    summary = {
        "input": str(path),
        "n_windows": window_index,
        "walking_seconds": walking_seconds,
        "bout_count": len(bouts_payload),
        "total_steps": round(total_steps, 6),
        "dropped_rows": raw.dropped_rows,
        "chunks": len(chunks),
        "params": _params_dict(params),
        "runtime_s": round(time.perf_counter() - t0, 3),
    }
    _write_json(out_dir / f"{stem}.summary.json", summary)
    return summary


def cmd_detect(args) -> int:
    params = resolve_params(args)
    jobs = args.jobs or 1
    summaries = []
    if jobs > 1 and len(args.inputs) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = [pool.submit(_detect_one, path, args, params) for path in args.inputs]
            summaries = [f.result() for f in futures]
    else:
        for path in args.inputs:
            summaries.append(_detect_one(path, args, params))
    for s in summaries:
        _diag(args, f"{s['input']}: {s['walking_seconds']} walking s in {s['bout_count']} bouts")
    print(json.dumps(summaries if len(summaries) > 1 else summaries[0], sort_keys=True))
    return 0


# ---------------------------------------------------------------------------
# tune


def _truth_windows(chunk, grouping: ev.ActivityGrouping) -> np.ndarray:
    """Per-window one-vs-all truth: 1 normal walking, 0 non-walking, -1 excluded."""
    win_labels = ev.window_labels(chunk.labels)
    truth = np.full(len(win_labels), -1, dtype=int)
    for i, raw in enumerate(win_labels):
        group = grouping.group_of(raw)
        if group is None:
            continue
        if group == "walking_normal":
            truth[i] = 1
        elif not ev.ActivityGrouping.is_walking_group(group):
            truth[i] = 0
    return truth


def _tuning_dataset(args, grouping) -> list[ev.TuningRecord]:
    dataset = []
    walking_labels = {
        raw for raw, grp in grouping.mapping.items() if ev.ActivityGrouping.is_walking_group(grp)
    }
    for path in args.inputs:
        _, chunks = _load_chunks(path, args.units or "g", args.max_gap_s)
        for chunk in chunks:
            if chunk.labels is None:
                raise BadSpec(f"{path}: tuning requires a label column")
            if len(chunk) < 100:
                continue  # too short for the duration-rule sweep (T up to 10)
            if not args.no_label_adjust:
                chunk = adjust_walk_labels(chunk, walking_labels)
            dataset.append(
                ev.TuningRecord(vm=vector_magnitude(chunk), truth=_truth_windows(chunk, grouping))
            )
    return dataset


def _format_candidate(cand) -> str:
    if isinstance(cand, tuple):
        return ";".join(f"{c:g}" for c in cand)
    return f"{cand:g}"


def _write_roc(path: Path, curve: ev.RocCurve) -> None:
    with path.open("w", encoding="utf-8") as fh:
        fh.write("threshold,fpr,tpr\n")
        for cand, fpr, tpr in curve.points:
            fh.write(f"{_format_candidate(cand)},{fpr:.6f},{tpr:.6f}\n")


def cmd_tune(args) -> int:
    grouping = ev.ActivityGrouping.from_csv(args.grouping) if args.grouping else ev.ActivityGrouping.default()
    params = resolve_params(args)
    dataset = _tuning_dataset(args, grouping)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    stage = args.stage or "all"
    if stage == "all":
        selected, curves = ev.staged_tuning(dataset, params)
    else:
        name = {"A": "A", "fw": "f_w", "alphabeta": "alpha_beta", "T": "T"}.get(stage)
        if name is None:
            raise ConfigError(f"unknown stage {stage!r}")
        curve = ev.roc_sweep(dataset, name, ev.default_stage_grids()[name], params)
        curves = {name: curve}
        selected = ev._substitute(params, name, curve.youden_point)
    for name, curve in curves.items():
        _write_roc(out_dir / f"roc_{name}.csv", curve)
    payload = {
        "selected": _params_dict(selected),
        "stages": {
            name: {"auc": round(curve.auc, 6), "youden": curve.youden_point}
            for name, curve in curves.items()
        },
    }
    _write_json(out_dir / "selected_params.json", payload)
    for name, curve in curves.items():
        _diag(args, f"stage {name}: AUC {curve.auc:.3f} youden {curve.youden_point}")
    print(json.dumps(payload, sort_keys=True))
    return 0


# ---------------------------------------------------------------------------
# evaluate


def _profile_for_location(location: str, args) -> DetectorParams:
    if args.profile:
        return resolve_params(args)
    base = PROFILES["smartwatch" if location == "wrist" else "smartphone"]
    return with_overrides(
        base,
        a_threshold=args.a, f_min=args.f_min, f_max=args.f_max,
        alpha=args.alpha, beta=args.beta, min_windows=args.twin,
    )


def _load_predictions(pred_dir: Path, stem: str, n_windows: int) -> np.ndarray | None:
    path = pred_dir / f"{stem}.labels.csv"
    if not path.exists():
        return None
    df = pd.read_csv(path)
    walking = df["walking"].to_numpy(dtype=int).astype(bool)
    if len(walking) != n_windows:
        raise ev.LengthMismatch(f"{path}: {len(walking)} rows vs {n_windows} windows")
    return walking


def cmd_evaluate(args) -> int:
    grouping = ev.ActivityGrouping.from_csv(args.grouping) if args.grouping else ev.ActivityGrouping.default()
    manifest = pd.read_csv(args.manifest)
    for col in ("path", "subject", "location"):
        if col not in manifest.columns:
            raise BadSpec(f"{args.manifest}: manifest needs columns path,subject,location")
    walking_labels = {
        raw for raw, grp in grouping.mapping.items() if ev.ActivityGrouping.is_walking_group(grp)
    }
    base = Path(args.manifest).parent
    trials = []
    unmapped_total: dict = {}
    for row in manifest.itertuples(index=False):
        location = str(row.location)
        params = _profile_for_location(location, args)
        path = Path(row.path)
        if not path.is_absolute():
            path = base / path
        _, chunks = _load_chunks(str(path), args.units or "g", args.max_gap_s)
        per_group: dict = {}
        for chunk in chunks:
            if chunk.labels is None:
                raise BadSpec(f"{path}: evaluation requires a label column")
            if not args.no_label_adjust:
                chunk = adjust_walk_labels(chunk, walking_labels)
            vm = vector_magnitude(chunk)
            if vm.n_windows < params.min_windows:
                continue
            pred = detect(vm, params)
            if args.predictions_dir:
                walking = _load_predictions(Path(args.predictions_dir), path.stem, pred.n_windows)
                if walking is not None:
                    pred.walking = walking
            counts, unmapped = ev.score(pred, ev.window_labels(chunk.labels), grouping)
            for raw, cnt in unmapped.items():
                unmapped_total[raw] = unmapped_total.get(raw, 0) + cnt
            for group, cc in counts.items():
                agg = per_group.setdefault(group, ev.ConfusionCounts())
                agg.tp += cc.tp
                agg.fp += cc.fp
                agg.tn += cc.tn
                agg.fn += cc.fn
        for group, cc in per_group.items():
            value = (
                cc.sensitivity() if ev.ActivityGrouping.is_walking_group(group) else cc.specificity()
            )
            if np.isfinite(value):
                trials.append((str(row.subject), location, group, value))

    report = ev.build_report(trials, unmapped=unmapped_total)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    frame = report.to_frame()
    frame.to_csv(out_dir / "report.csv", index_label="activity_group")
    payload = {
        "cells": {
            f"{g}|{loc}": {"mean": c.mean, "ci": list(c.ci), "n": c.n}
            for (g, loc), c in sorted(report.cells.items())
        },
        "ungrouped": report.unmapped,
    }
    _write_json(out_dir / "report.json", payload)
    _diag(args, frame.to_string())
    print(json.dumps(payload, sort_keys=True))
    return 0


# ---------------------------------------------------------------------------
# synth / regress / features


def cmd_synth(args) -> int:
    payload = json.loads(Path(args.spec).read_text(encoding="utf-8"))
    if args.seed is not None:
        payload["seed"] = args.seed
    spec = synthmod.spec_from_dict(payload)
    rec, truth = synthmod.generate(spec)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    stem = Path(args.spec).stem
    data_path = out_dir / f"{stem}.csv"
    with data_path.open("w", encoding="utf-8") as fh:
        fh.write("t,x,y,z,label\n")
        times = rec.times
        for i in range(len(rec)):
            x, y, z = rec.samples[i]
            fh.write(f"{times[i]:.1f},{x:.9g},{y:.9g},{z:.9g},{rec.labels[i]}\n")
    truth_path = out_dir / f"{stem}.truth.csv"
    with truth_path.open("w", encoding="utf-8") as fh:
        fh.write("window_index,walking\n")
        for i, val in enumerate(truth):
            fh.write(f"{i},{int(val)}\n")
    summary = {
        "input_csv": str(data_path), "truth_csv": str(truth_path),
        "n_samples": len(rec), "walking_windows": int(truth.sum()), "seed": spec.seed,
    }
    _diag(args, f"wrote {data_path} and {truth_path}")
    print(json.dumps(summary, sort_keys=True))
    return 0


def cmd_regress(args) -> int:
    table = pd.read_csv(args.table)
    result = ev.standard_reg(table, reference_study=args.reference_study or "UniMiBSHAR")
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    frame = result.to_frame()
    frame.to_csv(out_dir / "regression.csv", index=False, float_format="%.10g")
    payload = {
        "n_used": result.n_used,
        "n_dropped": result.n_dropped,
        "references": result.references,
        "age_mean": result.age_mean, "age_sd": result.age_sd,
        "bmi_mean": result.bmi_mean, "bmi_sd": result.bmi_sd,
    }
    _diag(args, frame.to_string(index=False))
    print(json.dumps(payload, sort_keys=True))
    return 0


def _features_one(path: str, args) -> dict:
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    stem = Path(path).stem
    _, chunks = _load_chunks(path, args.units or "g", args.max_gap_s)
    grid = detection_grid(fs=10.0, voices_per_octave=args.voices or 16)
    frames = []
    offset = 0
    for chunk in chunks:
        vm = vector_magnitude(chunk)
        if vm.n_windows == 0:
            continue
        df = ev.dump_features(vm, grid)
        df["window_index"] += offset
        offset += vm.n_windows
        frames.append(df)
    if not frames:
        raise ev.TooShort(f"{path}: no full one-second window")
    out = pd.concat(frames, ignore_index=True)
    out_path = out_dir / f"{stem}.features.csv"
    out.to_csv(out_path, index=False, float_format="%.9g")
    return {"input": str(path), "features_csv": str(out_path), "n_windows": len(out)}


def cmd_features(args) -> int:
    jobs = args.jobs or 1
    if jobs > 1 and len(args.inputs) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = [pool.submit(_features_one, path, args) for path in args.inputs]
            results = [f.result() for f in futures]
    else:
        results = [_features_one(path, args) for path in args.inputs]
    for r in results:
        _diag(args, f"{r['input']}: {r['n_windows']} feature rows")
    print(json.dumps(results if len(results) > 1 else results[0], sort_keys=True))
    return 0


# ---------------------------------------------------------------------------
# parser


def _add_shared(p: argparse.ArgumentParser) -> None:
    p.add_argument("--units", choices=("g", "ms2"), default=None, help="input units (default g)")
    p.add_argument("--profile", choices=tuple(PROFILES), default=None)
    p.add_argument("--config", default=None, help="flat key=value config file")
    p.add_argument("--out", default=None, help="output directory (default .)")
    p.add_argument("--jobs", type=int, default=None, help="parallel workers over input files")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--quiet", action="store_true", help="machine-readable stdout only")
    p.add_argument("--max-gap-s", dest="max_gap_s", type=float, default=None)
    p.add_argument("--a", type=float, default=None, help="amplitude threshold, g")
    p.add_argument("--f-min", dest="f_min", type=float, default=None)
    p.add_argument("--f-max", dest="f_max", type=float, default=None)
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--beta", type=float, default=None)
    p.add_argument("--twin", type=int, default=None, help="minimum consecutive windows (T)")
    p.add_argument("--voices", type=int, default=None,
                   help="analysis-grid voices per octave (default 16)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="walkrec", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("detect", help="classify walking seconds in recordings")
    p.add_argument("inputs", nargs="+")
    _add_shared(p)
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("tune", help="ROC sweeps over labelled recordings")
    p.add_argument("inputs", nargs="+")
    p.add_argument("--grouping", default=None, help="raw_label,group CSV")
    p.add_argument("--stage", choices=("A", "fw", "alphabeta", "T", "all"), default=None)
    p.add_argument("--no-label-adjust", dest="no_label_adjust", action="store_true")
    _add_shared(p)
    p.set_defaults(func=cmd_tune)

    p = sub.add_parser("evaluate", help="score recordings into a per-location report")
    p.add_argument("--manifest", required=True, help="CSV: path,subject,location")
    p.add_argument("--grouping", default=None)
    p.add_argument("--predictions-dir", dest="predictions_dir", default=None)
    p.add_argument("--no-label-adjust", dest="no_label_adjust", action="store_true")
    _add_shared(p)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("synth", help="render a synthetic recording spec")
    p.add_argument("spec", help="JSON spec file")
    _add_shared(p)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("regress", help="fit the sensitivity bias regression")
    p.add_argument("table", help="CSV with sensitivity,age_y,bmi,gender,condition,location,study")
    p.add_argument("--reference-study", dest="reference_study", default=None)
    _add_shared(p)
    p.set_defaults(func=cmd_regress)

    p = sub.add_parser("features", help="dump per-second amplitude/band features")
    p.add_argument("inputs", nargs="+")
    _add_shared(p)
    p.set_defaults(func=cmd_features)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args = apply_config(args)
        return args.func(args)
    except _CONFIG_ERRORS as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (WalkrecError, FileNotFoundError, ValueError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except Exception as exc:  # pragma: no cover - defensive
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    raise SystemExit(main())
