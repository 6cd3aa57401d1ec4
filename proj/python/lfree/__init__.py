"""Leinert sets, exact trace moments and L-free matrix constructions.

Thin layer over the compiled ``_core`` module. Seeded experiment runners
return the same report dictionaries as the ``lfree`` command line tool
(without the timestamp field).
"""

import json as _json
import os as _os

# The bundled calibration fixture, unless the caller points elsewhere.
_fixture = _os.path.join(_os.path.dirname(__file__), "calibration.json")
if "LFREE_CALIBRATION" not in _os.environ and _os.path.exists(_fixture):
    _os.environ["LFREE_CALIBRATION"] = _fixture

from ._core import (  # noqa: F401
    AssertionFailure,
    ParseError,
    __version__,
    coefficient_bound,
    dilate,
    haar_unitary,
    inverse,
    kesten_norm,
    laplacian_moments,
    leinert,
    leinert_norm,
    lfree_defect,
    moments,
    multiply,
    op_norm,
    pave,
    paving_norm_bound,
    paving_size,
    projection,
    qpq_norm,
    qvq_norm,
    random_contraction,
    reduce_word,
    verify_witness,
)
from . import _core


def pave_report(n, d, trials, seed, targets=5):
    return _json.loads(_core.pave_report(n, d, trials, seed, targets))


def qpq_report(tau_p, tau_q, d, trials, seed):
    return _json.loads(_core.qpq_report(tau_p, tau_q, d, trials, seed))


def sharpness_report(n, traces, d, trials, seed):
    return _json.loads(_core.sharpness_report(n, list(traces), d, trials, seed))


def dilation_defect_report(n, d, max_len, trials, seed):
    return _json.loads(_core.dilation_defect_report(n, d, max_len, trials, seed))
