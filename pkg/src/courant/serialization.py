"""JSON input schemas and canonical report rendering.

All scalars are exact: rationals are strings like "-3/2", complex
rationals are objects {"re": "...", "im": "..."}.  Polynomials are
canonical expression strings over the declared base names.  Indices in
input files are 1-based, matching the frame labels e1..en.  Every file
carries a schema_version field.
"""

from __future__ import annotations

import json

from .graded import parse_element
from .presentations import (AlternatingForm, CourantPresentation,
                            LieAlgebraPresentation, PresentationError,
                            SeveraForm)
from .scalars import field_by_name, scalar_from_json, scalar_to_json

SCHEMA_VERSION = 1


class SchemaError(ValueError):
    """Input file violates the expected schema."""


def _require(data, key, where):
    if key not in data:
        raise SchemaError("missing field %r in %s" % (key, where))
    return data[key]


def _check_version(data, where):
    version = data.get("schema_version", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        raise SchemaError("unsupported schema_version %r in %s"
                          % (version, where))


def _field_of(data, default_field):
    name = data.get("field", default_field)
    try:
        return field_by_name(name)
    except ValueError as err:
        raise SchemaError(str(err)) from None


def presentation_from_dict(data, default_field="Q", where="presentation"):
    _check_version(data, where)
    field = _field_of(data, default_field)
    base = list(data.get("base", []))
    rank = _require(data, "rank", where)
    metric_rows = _require(data, "metric", where)
    try:
        metric = [[scalar_from_json(v, field) for v in row]
                  for row in metric_rows]
    except (ValueError, KeyError, TypeError) as err:
        raise SchemaError("bad metric entry in %s: %s" % (where, err)) \
            from None
    anchor = {}
    for k, entry in enumerate(data.get("anchor", [])):
        try:
            a = int(entry["a"]) - 1
            i = int(entry["i"]) - 1
            poly = str(entry["poly"])
        except (KeyError, ValueError, TypeError):
            raise SchemaError("bad anchor entry %d in %s" % (k, where)) \
                from None
        anchor[(a, i)] = poly
    structure = {}
    for k, entry in enumerate(data.get("C", [])):
        try:
            key = (int(entry["a"]) - 1, int(entry["b"]) - 1,
                   int(entry["c"]) - 1)
            poly = str(entry["poly"])
        except (KeyError, ValueError, TypeError):
            raise SchemaError("bad C entry %d in %s" % (k, where)) from None
        structure[key] = poly
    labels = data.get("labels")
    try:
        pres = CourantPresentation(field, base, rank, metric,
                                   anchor, structure, labels=labels)
    except (PresentationError, ValueError) as err:
        raise SchemaError("invalid presentation in %s: %s" % (where, err)) \
            from None
    return pres


def presentation_to_dict(pres):
    data = {
        "schema_version": SCHEMA_VERSION,
        "field": pres.field.name,
        "base": list(pres.base_names),
        "rank": pres.rank,
        "metric": [[scalar_to_json(v) for v in row] for row in pres.metric],
        "anchor": [{"a": a + 1, "i": i + 1, "poly": p.render()}
                   for (a, i), p in sorted(pres.anchor.items())],
        "C": [{"a": a + 1, "b": b + 1, "c": c + 1, "poly": p.render()}
              for (a, b, c), p in sorted(pres.structure.items())],
        "labels": list(pres.labels),
    }
    return data


def matched_pair_from_dict(data, default_field="Q"):
    from .matched import MatchedPairPresentation
    _check_version(data, "matched pair")
    e1 = presentation_from_dict(_require(data, "E1", "matched pair"),
                                default_field, "E1")
    e2 = presentation_from_dict(_require(data, "E2", "matched pair"),
                                default_field, "E2")
    conn_right = {}
    for k, entry in enumerate(data.get("conn_right", [])):
        try:
            key = (int(entry["a"]) - 1, int(entry["alpha"]) - 1,
                   int(entry["beta"]) - 1)
            conn_right[key] = str(entry["poly"])
        except (KeyError, ValueError, TypeError):
            raise SchemaError("bad conn_right entry %d" % k) from None
    conn_left = {}
    for k, entry in enumerate(data.get("conn_left", [])):
        try:
            key = (int(entry["alpha"]) - 1, int(entry["a"]) - 1,
                   int(entry["b"]) - 1)
            conn_left[key] = str(entry["poly"])
        except (KeyError, ValueError, TypeError):
            raise SchemaError("bad conn_left entry %d" % k) from None
    try:
        return MatchedPairPresentation(e1, e2, conn_right, conn_left)
    except (PresentationError, ValueError) as err:
        raise SchemaError("invalid matched pair: %s" % err) from None


def lie_algebra_from_dict(data, field, where="algebra"):
    dim = _require(data, "dim", where)
    brackets = {}
    for k, entry in enumerate(data.get("brackets", [])):
        try:
            a, b, c = (int(entry["a"]) - 1, int(entry["b"]) - 1,
                       int(entry["c"]) - 1)
            v = scalar_from_json(entry["value"], field)
        except (KeyError, ValueError, TypeError):
            raise SchemaError("bad bracket entry %d in %s" % (k, where)) \
                from None
        brackets.setdefault((a, b), {})[c] = v
    try:
        return LieAlgebraPresentation(dim, brackets, field)
    except PresentationError as err:
        raise SchemaError("invalid Lie algebra in %s: %s" % (where, err)) \
            from None


def severa_input_from_dict(data, default_field="Q"):
    """(algebra, h3 form, optional 2-form) for the splitting commands."""
    _check_version(data, "severa input")
    field = _field_of(data, default_field)
    algebra = lie_algebra_from_dict(_require(data, "algebra", "severa input"),
                                    field)
    entries = {}
    for k, entry in enumerate(data.get("h3", [])):
        try:
            idx = (int(entry["a"]) - 1, int(entry["b"]) - 1,
                   int(entry["c"]) - 1)
            entries[idx] = scalar_from_json(entry["value"], field)
        except (KeyError, ValueError, TypeError):
            raise SchemaError("bad h3 entry %d" % k) from None
    try:
        h3 = SeveraForm(algebra, entries)
    except PresentationError as err:
        raise SchemaError("invalid twist form: %s" % err) from None
    b2 = None
    if "b2" in data:
        bentries = {}
        for k, entry in enumerate(data["b2"]):
            try:
                idx = (int(entry["a"]) - 1, int(entry["b"]) - 1)
                bentries[idx] = scalar_from_json(entry["value"], field)
            except (KeyError, ValueError, TypeError):
                raise SchemaError("bad b2 entry %d" % k) from None
        b2 = AlternatingForm(algebra.dim, 2, bentries, field)
    return algebra, h3, b2


def split_model_from_dict(data, default_field="Q"):
    from .splitbase import SplitBaseModel, SplitBaseError
    _check_version(data, "split model")
    field = _field_of(data, default_field)
    gens = []
    for k, entry in enumerate(_require(data, "naive_generators",
                                       "split model")):
        try:
            gens.append((str(entry["name"]), int(entry["degree"])))
        except (KeyError, ValueError, TypeError):
            raise SchemaError("bad naive generator %d" % k) from None
    n_vars = int(_require(data, "n_vars", "split model"))
    severa = data.get("severa", "0")
    try:
        return SplitBaseModel(gens, n_vars, severa=str(severa), field=field)
    except (SplitBaseError, ValueError) as err:
        raise SchemaError("invalid split model: %s" % err) from None


def form_to_entries(form):
    return [{"a": a + 1, "b": b + 1, "c": c + 1, "value": scalar_to_json(v)}
            for (a, b, c), v in sorted(form.entries.items())]


def load_json(path):
    try:
        with open(path) as handle:
            return json.load(handle)
    except OSError as err:
        raise SchemaError("cannot read %s: %s" % (path, err)) from None
    except json.JSONDecodeError as err:
        raise SchemaError("%s is not valid JSON: %s" % (path, err)) \
            from None


def dump_report(report, path=None):
    text = json.dumps(report, sort_keys=True, indent=2,
                      default=_json_default) + "\n"
    if path:
        with open(path, "w") as handle:
            handle.write(text)
    return text


def _json_default(obj):
    from .graded import Element
    if isinstance(obj, Element):
        return obj.render()
    if isinstance(obj, tuple):
        return list(obj)
    try:
        return scalar_to_json(obj)
    except TypeError:
        return str(obj)
