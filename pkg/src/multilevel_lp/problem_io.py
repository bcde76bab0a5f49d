"""JSON problem documents and compromise reports.

A problem document looks like::

    {
      "levels": [2, 1, 1],
      "objectives": [[-5, 1, 2, 3], [6, 2, -3, 1], [0, -1, 2, 3]],
      "A": [[3, 2, 1, 2], ...],
      "b": [6, ...],
      "alpha": {"1,1": 0.25, "2,1": 0.25},
      "epsilon": 0
    }

Numbers may also be written as strings such as ``"2/3"``. Optional fields:
``alpha_fraction``, ``tolerances`` (``feas``, ``opt``, ``pivot``), ``cap``,
``exact``, ``level_optima``, ``reference`` (``compromise``, ``objectives``) and
``format`` (``"table"`` or ``"json"``).

Every validation failure raises :class:`ProblemFormatError` with one of these codes:

====== ==========================================================
E100   file unreadable or not valid JSON
E101   required field missing
E102   field has the wrong type or a non-numeric entry
E103   dimensions do not agree
E104   alpha offset negative or not smaller than its range width
E105   alpha override names a component that does not exist
E106   option value out of range (epsilon, format, tolerances, cap)
====== ==========================================================
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

import numpy as np

from ._arith import to_fraction
from .adaptive import Status, Tolerances
from .lp_model import MultilevelProblem
from .multilevel import CompromiseReport, IterationRecord, LevelResult, RunConfig, compute_initial_bounds

REQUIRED = ("levels", "objectives", "A", "b")
KNOWN = REQUIRED + ("alpha", "alpha_fraction", "epsilon", "tolerances", "cap", "exact",
                    "level_optima", "reference", "format")
FORMATS = ("table", "json")


class ProblemFormatError(ValueError):
    def __init__(self, code: str, message: str, where: str | None = None):
        self.code, self.where = code, where
        loc = f" [{where}]" if where else ""
        super().__init__(f"{code}{loc}: {message}")


def _number(value, where):
    if isinstance(value, bool) or not isinstance(value, (int, float, str)):
        raise ProblemFormatError("E102", f"expected a number, got {value!r}", where)
    try:
        return to_fraction(value) if isinstance(value, str) else value
    except (ValueError, ZeroDivisionError):
        raise ProblemFormatError("E102", f"cannot read {value!r} as a number", where) from None


def _vector(value, where):
    if not isinstance(value, list):
        raise ProblemFormatError("E102", "expected a list of numbers", where)
    return [_number(v, f"{where}[{i}]") for i, v in enumerate(value)]


def _matrix(value, where):
    if not isinstance(value, list):
        raise ProblemFormatError("E102", "expected a list of rows", where)
    rows = [_vector(r, f"{where}[{i}]") for i, r in enumerate(value)]
    if rows and len({len(r) for r in rows}) != 1:
        raise ProblemFormatError("E103", "rows have different lengths", where)
    return rows


def _parse_alpha(raw, sizes):
    items = []
    if isinstance(raw, dict):
        for key, v in raw.items():
            parts = str(key).split(",")
            if len(parts) != 2:
                raise ProblemFormatError("E102", f"alpha key {key!r} must look like 'level,position'", "alpha")
            try:
                items.append((int(parts[0]), int(parts[1]), v, f"alpha[{key}]"))
            except ValueError:
                raise ProblemFormatError("E102", f"alpha key {key!r} must hold integers", "alpha") from None
    elif isinstance(raw, list):
        for k, entry in enumerate(raw):
            if not isinstance(entry, dict) or not {"level", "position", "value"} <= entry.keys():
                raise ProblemFormatError("E102", "alpha entries need level, position and value", f"alpha[{k}]")
            items.append((entry["level"], entry["position"], entry["value"], f"alpha[{k}]"))
    else:
        raise ProblemFormatError("E102", "alpha must be an object or a list", "alpha")
    alpha = {}
    for level, pos, v, where in items:
        if not (isinstance(level, int) and isinstance(pos, int)
                and 1 <= level <= len(sizes) and 1 <= pos <= sizes[level - 1]):
            raise ProblemFormatError("E105", f"no component x[{level},{pos}]", where)
        value = _number(v, where)
        if value < 0:
            raise ProblemFormatError("E104", f"alpha for x[{level},{pos}] must be nonnegative", where)
        alpha[(level, pos)] = value
    return alpha


def _check_alpha_widths(alpha, sizes, lower, upper):
    for (level, pos), value in alpha.items():
        k = sum(sizes[: level - 1]) + pos - 1
        width = upper[k] - lower[k]
        if width > 0 and not value < width:
            raise ProblemFormatError(
                "E104", f"alpha for x[{level},{pos}] is {value}, must be smaller than the range width "
                        f"u - l = {width}", f"alpha[{level},{pos}]")


def load_document(doc: dict):
    """Validate a decoded document; return ``(MultilevelProblem, RunConfig)``."""
    if not isinstance(doc, dict):
        raise ProblemFormatError("E102", "document must be a JSON object")
    for name in REQUIRED:
        if name not in doc:
            raise ProblemFormatError("E101", f"missing field {name!r}", name)
    unknown = set(doc) - set(KNOWN)
    if unknown:
        raise ProblemFormatError("E102", f"unknown fields {sorted(unknown)}")
    sizes = doc["levels"]
    if not isinstance(sizes, list) or not all(isinstance(s, int) and not isinstance(s, bool) for s in sizes):
        raise ProblemFormatError("E102", "levels must be a list of integers", "levels")
    if len(sizes) < 2 or any(s < 1 for s in sizes):
        raise ProblemFormatError("E103", "need at least 2 levels, each with at least one variable", "levels")
    n = sum(sizes)
    C = _matrix(doc["objectives"], "objectives")
    A = _matrix(doc["A"], "A")
    b = _vector(doc["b"], "b")
    if len(C) != len(sizes) or any(len(r) != n for r in C):
        raise ProblemFormatError("E103", f"objectives must be {len(sizes)} rows of length {n}", "objectives")
    if any(len(r) != n for r in A):
        raise ProblemFormatError("E103", f"every row of A must have {n} entries", "A")
    if len(A) != len(b):
        raise ProblemFormatError("E103", f"A has {len(A)} rows but b has {len(b)} entries", "b")

    exact = doc.get("exact", False)
    if not isinstance(exact, bool):
        raise ProblemFormatError("E102", "exact must be true or false", "exact")
    mlp = MultilevelProblem(tuple(sizes), C, A if A else np.zeros((0, n)), b, exact=exact)

    config = RunConfig(exact=exact)
    eps = doc.get("epsilon", 0)
    if isinstance(eps, list):
        if len(eps) != len(sizes):
            raise ProblemFormatError("E103", f"epsilon needs one value per level ({len(sizes)})", "epsilon")
        eps = _vector(eps, "epsilon")
        if any(e < 0 for e in eps):
            raise ProblemFormatError("E106", "epsilon must be nonnegative", "epsilon")
    else:
        eps = _number(eps, "epsilon")
        if eps < 0:
            raise ProblemFormatError("E106", "epsilon must be nonnegative", "epsilon")
    config.epsilon = eps
    if "alpha_fraction" in doc:
        frac = _number(doc["alpha_fraction"], "alpha_fraction")
        if not 0 <= frac < 1:
            raise ProblemFormatError("E106", "alpha_fraction must lie in [0, 1)", "alpha_fraction")
        config.alpha_fraction = frac
    if "alpha" in doc:
        config.alpha = _parse_alpha(doc["alpha"], sizes)
    if "tolerances" in doc:
        tol = doc["tolerances"]
        if not isinstance(tol, dict) or not set(tol) <= {"feas", "opt", "pivot", "refactor_every"}:
            raise ProblemFormatError("E106", "tolerances accepts feas, opt, pivot, refactor_every", "tolerances")
        values = {k: _number(v, f"tolerances.{k}") for k, v in tol.items()}
        if any(v < 0 for v in values.values()):
            raise ProblemFormatError("E106", "tolerances must be nonnegative", "tolerances")
        config.tolerances = Tolerances(**{k: (int(v) if k == "refactor_every" else float(v))
                                          for k, v in values.items()})
    if "cap" in doc:
        cap = _number(doc["cap"], "cap")
        if not cap > 0:
            raise ProblemFormatError("E106", "cap must be positive", "cap")
        config.cap = cap
    if "level_optima" in doc:
        optima = _matrix(doc["level_optima"], "level_optima")
        if len(optima) != len(sizes) or any(len(r) != n for r in optima):
            raise ProblemFormatError("E103", f"level_optima must be {len(sizes)} rows of length {n}",
                                     "level_optima")
        config.level_optima = optima
        lower, upper = compute_initial_bounds(np.array(optima, dtype=object))
        _check_alpha_widths(config.alpha, sizes, lower, upper)
    if "reference" in doc:
        ref = doc["reference"]
        if not isinstance(ref, dict) or not set(ref) <= {"compromise", "objectives"}:
            raise ProblemFormatError("E102", "reference accepts compromise and objectives", "reference")
        config.reference = {}
        if "compromise" in ref:
            config.reference["compromise"] = [float(v) for v in _vector(ref["compromise"], "reference.compromise")]
            if len(config.reference["compromise"]) != n:
                raise ProblemFormatError("E103", f"reference compromise needs {n} entries", "reference")
        if "objectives" in ref:
            config.reference["objectives"] = [float(v) for v in _vector(ref["objectives"], "reference.objectives")]
            if len(config.reference["objectives"]) != len(sizes):
                raise ProblemFormatError("E103", f"reference objectives need {len(sizes)} entries", "reference")
    fmt = doc.get("format", "table")
    if fmt not in FORMATS:
        raise ProblemFormatError("E106", f"format must be one of {FORMATS}", "format")
    config.report_format = fmt
    return mlp, config


def loads_problem(text: str):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as err:
        raise ProblemFormatError("E100", err.msg, f"line {err.lineno}, column {err.colno}") from None
    return load_document(doc)


def parse_problem(path):
    """Read and validate a problem document; return ``(MultilevelProblem, RunConfig)``."""
    try:
        text = Path(path).read_text()
    except OSError as err:
        raise ProblemFormatError("E100", f"cannot read {path}: {err.strerror}") from None
    return loads_problem(text)


def _num_out(v):
    if isinstance(v, Fraction):
        return str(v) if v.denominator != 1 else v.numerator
    if isinstance(v, (np.integer, int)) and not isinstance(v, bool):
        return int(v)
    v = float(v)
    if v.is_integer() and abs(v) < 2**53:
        return int(v)
    return v


def _vec_out(values):
    if values is None:
        return None
    return [_num_out(v) for v in values]


def problem_document(mlp: MultilevelProblem, config: RunConfig | None = None) -> dict:
    doc = {
        "levels": list(mlp.n_sizes),
        "objectives": [_vec_out(r) for r in mlp.C],
        "A": [_vec_out(r) for r in mlp.A],
        "b": _vec_out(mlp.b),
    }
    if mlp.exact:
        doc["exact"] = True
    if config is None:
        return doc
    if config.alpha:
        doc["alpha"] = {f"{i},{j}": _num_out(v) for (i, j), v in sorted(config.alpha.items())}
    if config.alpha_fraction != RunConfig.alpha_fraction:
        doc["alpha_fraction"] = _num_out(config.alpha_fraction)
    if np.ndim(config.epsilon) == 0:
        if config.epsilon != 0:
            doc["epsilon"] = _num_out(config.epsilon)
    else:
        doc["epsilon"] = _vec_out(config.epsilon)
    if config.tolerances is not None:
        doc["tolerances"] = dict(vars(config.tolerances))
    if config.cap != RunConfig.cap:
        doc["cap"] = _num_out(config.cap)
    if config.level_optima is not None:
        doc["level_optima"] = [_vec_out(r) for r in config.level_optima]
    if config.reference:
        doc["reference"] = {k: _vec_out(v) for k, v in config.reference.items()}
    fmt = getattr(config, "report_format", "table")
    if fmt != "table":
        doc["format"] = fmt
    return doc


def dump_problem(mlp: MultilevelProblem, config: RunConfig | None = None) -> str:
    return json.dumps(problem_document(mlp, config), indent=2)


# -- reports -----------------------------------------------------------------

def _fmt_vec(values, digits):
    return "(" + ", ".join(f"{float(v):.{digits}f}" for v in values) + ")"


def _table(report: CompromiseReport, digits: int) -> str:
    mlp = report.problem
    lines = [f"Multilevel LP: {mlp.P} levels, {mlp.n} variables {list(mlp.n_sizes)}, {mlp.m} constraints"]
    if report.levels:
        lines.append("")
        lines.append("Independent level optima")
        for lv in report.levels:
            lines.append(f"  level {lv.p}: f{lv.p} = {float(lv.value):.{digits}f} at x = {_fmt_vec(lv.x, digits)}"
                         f"  [{lv.status.value}, {lv.iterations} it]")
    if report.initial_lower is not None:
        lines.append("")
        lines.append("Initial bounds")
        lines.append(f"  l(1) = {_fmt_vec(report.initial_lower, digits)}")
        lines.append(f"  u(1) = {_fmt_vec(report.initial_upper, digits)}")
    for it in report.iterations:
        lines.append("")
        alpha = ", ".join(f"alpha[{i},{j}] = {float(v):.{digits}f}" for (i, j), v in sorted(it.alpha.items()))
        lines.append(f"Iteration {it.p - 1} (level {it.p})" + (f": {alpha}" if alpha else ""))
        lines.append(f"  l({it.p}) = {_fmt_vec(it.lower, digits)}")
        lines.append(f"  u({it.p}) = {_fmt_vec(it.upper, digits)}")
        if it.x is None:
            lines.append(f"  solve ended {it.status.value}")
            continue
        lines.append(f"  x({it.p}) = {_fmt_vec(it.x, digits)}")
        lines.append("  f    = " + _fmt_vec(it.objectives, digits))
        lines.append(f"  beta = {float(it.beta):.{digits}f}   beta_xi = {float(it.beta_xi):.{digits}f}"
                     f"  [{it.status.value}, {it.iterations} it]")
    lines.append("")
    if report.failure:
        f = report.failure
        lines.append("FAILED")
        lines.append(f"  stage: {f['stage']}, level {f['level']}: {f['status']}")
    elif report.compromise is not None:
        lines.append("Compromise")
        lines.append(f"  x = {_fmt_vec(report.compromise, digits)}")
        lines.append(f"  f = {_fmt_vec(report.compromise_objectives, digits)}")
        lines.append(f"  status: {report.status.value}")
    if report.notes:
        lines.append("")
        lines.append("Notes")
        lines.extend(f"  - {note}" for note in report.notes)
    return "\n".join(lines) + "\n"


def report_document(report: CompromiseReport) -> dict:
    return {
        "problem": problem_document(report.problem),
        "status": report.status.value,
        "failure": report.failure,
        "notes": list(report.notes),
        "levels": [{"level": lv.p, "x": _vec_out(lv.x), "value": _num_out(lv.value),
                    "status": lv.status.value, "solver_iterations": lv.iterations}
                   for lv in report.levels],
        "level_optima": None if report.level_optima is None else [_vec_out(r) for r in report.level_optima],
        "initial_bounds": None if report.initial_lower is None else {
            "lower": _vec_out(report.initial_lower), "upper": _vec_out(report.initial_upper)},
        "iterations": [{
            "level": it.p,
            "alpha": [{"level": i, "position": j, "value": _num_out(v)} for (i, j), v in sorted(it.alpha.items())],
            "lower": _vec_out(it.lower), "upper": _vec_out(it.upper), "x": _vec_out(it.x),
            "objectives": _vec_out(it.objectives),
            "beta": None if it.beta is None else _num_out(it.beta),
            "beta_xi": None if it.beta_xi is None else _num_out(it.beta_xi),
            "status": it.status.value, "solver_iterations": it.iterations,
        } for it in report.iterations],
        "compromise": None if report.compromise is None else {
            "x": _vec_out(report.compromise), "objectives": _vec_out(report.compromise_objectives)},
    }


def emit_report(report: CompromiseReport, fmt: str = "table", digits: int = 6) -> str:
    """Render a report as a text table or as JSON."""
    if fmt == "table":
        return _table(report, digits)
    if fmt == "json":
        return json.dumps(report_document(report), indent=2) + "\n"
    raise ValueError(f"unknown report format {fmt!r}")


def _num_in(v, exact):
    if v is None:
        return None
    if exact:
        return to_fraction(v)
    return float(to_fraction(v)) if isinstance(v, str) else float(v)


def _arr_in(values, exact):
    if values is None:
        return None
    return np.array([_num_in(v, exact) for v in values], dtype=object if exact else float)


def report_from_json(text: str) -> CompromiseReport:
    """Rebuild a report (without solver internals) from :func:`emit_report` JSON output."""
    doc = json.loads(text)
    mlp, _ = load_document(doc["problem"])
    exact = mlp.exact
    report = CompromiseReport(problem=mlp, status=Status(doc["status"]), failure=doc["failure"],
                              notes=list(doc["notes"]))
    report.levels = [LevelResult(lv["level"], _arr_in(lv["x"], exact), _num_in(lv["value"], exact),
                                 Status(lv["status"]), lv["solver_iterations"]) for lv in doc["levels"]]
    if doc["level_optima"] is not None:
        report.level_optima = np.array([_arr_in(r, exact) for r in doc["level_optima"]])
    if doc["initial_bounds"] is not None:
        report.initial_lower = _arr_in(doc["initial_bounds"]["lower"], exact)
        report.initial_upper = _arr_in(doc["initial_bounds"]["upper"], exact)
    for it in doc["iterations"]:
        report.iterations.append(IterationRecord(
            it["level"], {(a["level"], a["position"]): _num_in(a["value"], exact) for a in it["alpha"]},
            _arr_in(it["lower"], exact), _arr_in(it["upper"], exact), _arr_in(it["x"], exact),
            _arr_in(it["objectives"], exact), _num_in(it["beta"], exact), _num_in(it["beta_xi"], exact),
            Status(it["status"]), it["solver_iterations"]))
    if doc["compromise"] is not None:
        report.compromise = _arr_in(doc["compromise"]["x"], exact)
    return report
