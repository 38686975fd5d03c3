"""Exact six-layer block-triangular factorizations.

Matrices are dictionaries {"field": ..., "rows": [[...], ...]} using the same
JSON schema as the command line tool.
"""

import json

from . import _core
from ._core import BlocktriError, SCHEMA_VERSION

__all__ = [
    "BlocktriError",
    "SCHEMA_VERSION",
    "blockdiag_witness",
    "canonical",
    "commutator",
    "coupling_network",
    "evaluate",
    "factor",
    "matrix",
    "nonrepresentable",
    "obstruction",
    "perm_sweep",
    "perm_witness",
    "rank_one_case_check",
    "verify",
    "verify_lemma",
]


def _dump(doc):
    return json.dumps(doc)


def matrix(rows, field="rational"):
    """Matrix document from nested rows."""
    return {"field": field, "rows": [list(r) for r in rows]}


def factor(m, gl=False, diag=None):
    """Six-layer factorization; gl=True ends in a diagonal upper layer."""
    return json.loads(_core.factor(_dump(m), gl, None if diag is None else _dump(diag)))


def evaluate(factorization):
    return json.loads(_core.evaluate(_dump(factorization)))


def canonical(m):
    """Matrix document with every entry in canonical form."""
    return json.loads(_core.canonical(_dump(m)))


def verify(m, factorization):
    """True iff the layers multiply to m exactly (exact fields only)."""
    product = evaluate(factorization)
    target = canonical(m)
    return product["field"] == target["field"] and product["rows"] == target["rows"]


def commutator(m):
    return json.loads(_core.commutator(_dump(m)))


def obstruction(m1, m4, mode="trace"):
    return json.loads(_core.obstruction(_dump(m1), _dump(m4), mode))


def perm_sweep(m, top, bottom):
    return json.loads(_core.perm_sweep(_dump(m), top, bottom))


def rank_one_case_check(m, field):
    return json.loads(_core.rank_one_case_check(m, field))


def blockdiag_witness(m, n, field="rational"):
    return json.loads(_core.blockdiag_witness(m, n, field))


def perm_witness(m, n, field="rational"):
    return json.loads(_core.perm_witness(m, n, field))


def verify_lemma():
    return json.loads(_core.verify_lemma())


def nonrepresentable():
    return [json.loads(doc) for doc in _core.nonrepresentable()]


def coupling_network(m, nice=False, strategy="corner"):
    return json.loads(_core.coupling_network(_dump(m), nice, strategy))
