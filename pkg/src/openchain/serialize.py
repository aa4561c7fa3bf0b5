"""JSON and CSV encodings of operators, states, root sets and observables.

Exact scalars are always written as ``"num/den"`` strings, complex floats as
``{"re": .., "im": ..}`` objects (see :func:`openchain.scalars.to_json`).
"""

from __future__ import annotations

import csv
import io
import json

import numpy as np

from . import linalg, scalars
from .errors import SizeLimitExceeded
from .scalars import EXACT

CSV_MAX_SITES = 6


def dumps(obj) -> str:
    """Deterministic JSON text (insertion order, fixed indentation)."""
    return json.dumps(obj, indent=2) + "\n"


def scalar_text(v) -> str:
    """Flat text form for CSV cells: ``"3/4"`` or Python's complex/float repr."""
    if scalars.mode_of(v) == EXACT:
        return scalars.to_json(v)
    c = complex(v)
    return repr(c.real) if c.imag == 0 else repr(c)


# operators -------------------------------------------------------------------------


def operator_to_json(op: np.ndarray) -> dict:
    """``{"n_sites", "entries": [[row, col, scalar], ...]}`` with nonzero entries only."""
    n = linalg.sites_of(op.shape[0])
    entries = []
    for (r, c), v in np.ndenumerate(op):
        if not scalars.is_zero(v):
            entries.append([int(r), int(c), scalars.to_json(v)])
    return {"n_sites": n, "entries": entries}


def operator_from_json(obj: dict) -> np.ndarray:
    dim = 1 << int(obj["n_sites"])
    vals = [(r, c, scalars.from_json(v)) for r, c, v in obj["entries"]]
    mode = scalars.mode_of(*(v for _, _, v in vals))
    out = scalars.zeros((dim, dim), mode)
    for r, c, v in vals:
        out[r, c] = v
    return out


def operator_to_csv(op: np.ndarray) -> str:
    n = linalg.sites_of(op.shape[0])
    if n > CSV_MAX_SITES:
        raise SizeLimitExceeded(f"dense CSV export is limited to N <= {CSV_MAX_SITES}")
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    for row in op:
        writer.writerow([scalar_text(v) for v in row])
    return buf.getvalue()


# states ----------------------------------------------------------------------------


def vector_to_json(v: np.ndarray) -> dict:
    """``{basis_index: scalar}`` over nonzero amplitudes, keys as decimal strings."""
    return {str(b): scalars.to_json(x) for b, x in enumerate(v) if not scalars.is_zero(x)}


def vector_from_json(obj: dict, n: int) -> np.ndarray:
    vals = {int(k): scalars.from_json(v) for k, v in obj.items()}
    out = scalars.zeros(1 << n, scalars.mode_of(*vals.values()))
    for b, x in vals.items():
        out[b] = x
    return out


def eigenmap_to_json(m: int, coefficients, vector: np.ndarray) -> dict:
    return {
        "m": int(m),
        "coefficients": [scalars.to_json(c) for c in coefficients],
        "vector": vector_to_json(vector),
    }


# SSEP observables ------------------------------------------------------------------


def config_string(b: int, n: int) -> str:
    return "".join(str(m) for m in linalg.occupations(b, n))


def probabilities_to_json(probs: np.ndarray) -> dict:
    """``{"0110...": scalar}`` in basis-index order."""
    n = linalg.sites_of(probs.shape[0])
    return {config_string(b, n): scalars.to_json(v) for b, v in enumerate(probs)}


def probabilities_from_json(obj: dict) -> np.ndarray:
    n = len(next(iter(obj)))
    out = scalars.zeros(1 << n, scalars.mode_of(*(scalars.from_json(v) for v in obj.values())))
    for key, v in obj.items():
        out[linalg.basis_index(int(c) for c in key)] = scalars.from_json(v)
    return out


def probabilities_to_csv(probs: np.ndarray) -> str:
    n = linalg.sites_of(probs.shape[0])
    rows = [(config_string(b, n), scalar_text(v)) for b, v in enumerate(probs)]
    return _csv(("config", "value"), rows)


def probability_to_json(config: str, value) -> dict:
    return {"config": config, "value": scalars.to_json(value)}


def correlator_to_json(sites, value) -> dict:
    return {"sites": [int(i) for i in sites], "value": scalars.to_json(value)}


def density_to_csv(profile) -> str:
    return _csv(("site", "value"), [(i, scalar_text(v)) for i, v in enumerate(profile, start=1)])


def density_to_json(profile) -> list:
    return [{"site": i, "value": scalars.to_json(v)} for i, v in enumerate(profile, start=1)]


def _csv(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()
