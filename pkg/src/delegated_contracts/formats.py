"""Reading and writing settings, contracts, curve samples, and curve models.

Structured documents are JSON in canonical form: sorted keys, two-space
indent, floats rounded to 12 significant digits, trailing newline.  Writing a
document that was just read reproduces it byte for byte.
"""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path

import numpy as np

from .core import ActionSpec, Contract, DelegationSetting, OutcomeDistribution
from .curves import CurveModel, CurveSamples
from .errors import InputError
from .solvers import SolveReport


def _canon(value):
    if isinstance(value, (bool, np.bool_)) or value is None or isinstance(value, str):
        return bool(value) if isinstance(value, np.bool_) else value
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        x = float(value)
        if not math.isfinite(x):
            return None
        x = float(f"{x:.12g}")
        return 0.0 if x == 0 else x
    if isinstance(value, dict):
        return {str(k): _canon(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, np.ndarray)):
        return [_canon(v) for v in value]
    if hasattr(value, "value"):  # enums
        return _canon(value.value)
    raise TypeError(f"cannot serialize {type(value).__name__}")


def dumps(doc) -> str:
    return json.dumps(_canon(doc), sort_keys=True, indent=2) + "\n"


def loads(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed document: {exc}") from exc


def write_text(path, text: str):
    Path(path).write_text(text)


def read_doc(path):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    return loads(text)


# settings

def setting_to_doc(setting: DelegationSetting) -> dict:
    actions = []
    for a in setting.actions:
        entry = {"id": a.id, "n_samples": a.n_samples, "cost": a.cost,
                 "pmf": a.outcome_dist.probs}
        if a.expected_accuracy is not None:
            entry["expected_accuracy"] = a.expected_accuracy
        actions.append(entry)
    return {"m": setting.m, "actions": actions}


def setting_from_doc(doc) -> DelegationSetting:
    try:
        m = int(doc["m"])
        actions = tuple(
            ActionSpec(
                id=int(a["id"]),
                n_samples=int(a.get("n_samples", 0)),
                cost=float(a["cost"]),
                outcome_dist=OutcomeDistribution(a["pmf"]),
                expected_accuracy=a.get("expected_accuracy"),
            )
            for a in doc["actions"]
        )
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, InputError):
            raise
        raise InputError(f"bad setting document: {exc!r}") from exc
    return DelegationSetting(m, actions)


def write_setting(setting: DelegationSetting, path):
    write_text(path, dumps(setting_to_doc(setting)))


def read_setting(path) -> DelegationSetting:
    return setting_from_doc(read_doc(path))


# contracts and solver reports

def report_to_doc(report: SolveReport) -> dict:
    c = report.contract
    doc = {
        "target_action": report.target_action,
        "budget": None if c is None else c.budget,
        "payments": None if c is None else c.payments,
        "solver": report.solver_name,
        "status": report.status,
        "diagnostics": {
            "dual_objective": report.dual_objective,
            "is_threshold": report.is_threshold,
            "is_all_or_nothing": report.is_all_or_nothing,
            "binding_ic_actions": list(report.binding_ic_actions),
        },
    }
    if report.violating_actions:
        doc["diagnostics"]["violating_actions"] = list(report.violating_actions)
    if report.expected_accuracy is not None:
        doc["expected_accuracy"] = report.expected_accuracy
    if report.candidates:
        doc["candidates"] = [
            {"action_id": k.action_id, "status": k.status, "budget": k.budget, "value": k.value}
            for k in report.candidates
        ]
    return doc


def contract_from_doc(doc) -> Contract:
    payments = doc.get("payments") if isinstance(doc, dict) else None
    if payments is None:
        raise InputError("document holds no payments")
    return Contract(payments)


def write_report(report: SolveReport, path):
    write_text(path, dumps(report_to_doc(report)))


def read_contract(path) -> Contract:
    return contract_from_doc(read_doc(path))


# curve samples (CSV) and models

def samples_to_csv(samples: CurveSamples) -> str:
    buf = io.StringIO()
    buf.write("n,accuracy\n")
    for n, acc in samples.records:
        buf.write(f"{n},{acc:.12g}\n")
    return buf.getvalue()


def samples_from_csv(text: str) -> CurveSamples:
    reader = csv.DictReader(io.StringIO(text))
    if reader.fieldnames is None or [f.strip() for f in reader.fieldnames] != ["n", "accuracy"]:
        raise InputError("curve samples need the header 'n,accuracy'")
    records = []
    for line_no, row in enumerate(reader, start=2):
        try:
            records.append((int(row["n"]), float(row["accuracy"])))
        except (TypeError, ValueError) as exc:
            raise InputError(f"line {line_no}: {exc}") from exc
    return CurveSamples.from_records(records)


def read_samples(path) -> CurveSamples:
    try:
        return samples_from_csv(Path(path).read_text())
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def write_samples(samples: CurveSamples, path):
    write_text(path, samples_to_csv(samples))


def model_to_doc(model: CurveModel) -> dict:
    return {"a": model.a, "b": model.b, "c": model.c,
            "fit_rmse": model.fit_rmse, "n_fit_max": model.n_fit_max}


def model_from_doc(doc) -> CurveModel:
    try:
        return CurveModel(float(doc["a"]), float(doc["b"]), float(doc["c"]),
                          float(doc.get("fit_rmse", 0.0)), int(doc.get("n_fit_max", 0)))
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, InputError):
            raise
        raise InputError(f"bad curve model document: {exc!r}") from exc


def read_model(path) -> CurveModel:
    return model_from_doc(read_doc(path))
