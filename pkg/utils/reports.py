import csv
import hashlib
import json
import logging
import os

import numpy as np

from errors import UsageError
from models import CircleDiffeo, HalfPlaneField

# Configure logging
logger = logging.getLogger(__name__)


def _plain(value):
    """JSON-friendly view of numpy scalars and arrays."""
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, complex):
        return [value.real, value.imag]
    raise TypeError(f"{type(value).__name__} is not JSON serializable")


def dumps(payload):
    """Deterministic JSON text: sorted keys, fixed indentation, no timestamps."""
    return json.dumps(payload, indent=2, sort_keys=True, default=_plain) + "\n"


def inputs_digest(*parts):
    """First 16 hex digits of the sha256 of the JSON-encoded parts."""
    text = json.dumps(parts, sort_keys=True, default=_plain)
    return hashlib.sha256(text.encode()).hexdigest()[:16]


def load_json(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as e:
        raise UsageError(f"Cannot read {path}: {e}") from e


def write_json(path, payload):
    """
    Write payload as deterministic JSON, or print it when path is None.

    Args:
        path (str | None): Target file; parent directories are created.
        payload (dict | list): Report content.
    """
    text = dumps(payload)
    if path is None:
        print(text, end="")
        return
    parent = os.path.dirname(path)
    if parent:
        os.makedirs(parent, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
    logger.info(f"Wrote {path}")


def write_csv(path, header, rows):
    """Profile or trace export; prints to stdout when path is None."""
    if path is None:
        print(",".join(header))
        for row in rows:
            print(",".join(repr(float(v)) if not isinstance(v, int) else str(v) for v in row))
        return
    parent = os.path.dirname(path)
    if parent:
        os.makedirs(parent, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)
    logger.info(f"Wrote {path}")


def suite_payload(suite, reports):
    return {
        "suite": suite,
        "passed": all(r.passed for r in reports),
        "reports": [r.to_dict() for r in reports],
    }


def function_payload(f):
    values = np.asarray(f.values)
    return {"n": f.n_samples, "values_re": np.real(values).tolist(), "values_im": np.imag(values).tolist()}


def diffeo_payload(h):
    return {"n": h.n_samples, "lift": h.lift.tolist(), "deriv": h.deriv.tolist(), "normalized": h.normalized}


def diffeo_from_payload(payload):
    try:
        return CircleDiffeo(np.asarray(payload["lift"], dtype=float), np.asarray(payload["deriv"], dtype=float),
                            normalized=bool(payload.get("normalized", False)))
    except (KeyError, TypeError, ValueError) as e:
        raise UsageError(f"malformed diffeomorphism payload: {e}") from e


def field_payload(field):
    values = np.asarray(field.values)
    return {
        "kind": field.kind,
        "depths": field.depths.tolist(),
        "values_re": np.real(values).tolist(),
        "values_im": np.imag(values).tolist(),
    }


def field_from_payload(payload):
    try:
        values = np.asarray(payload["values_re"], dtype=float) + 1j * np.asarray(payload["values_im"], dtype=float)
        return HalfPlaneField(np.asarray(payload["depths"], dtype=float), values, payload["kind"])
    except (KeyError, TypeError, ValueError) as e:
        raise UsageError(f"malformed field payload: {e}") from e

