"""Canonical text forms: fraction strings, JSON payloads, CSV tables.

Serialization is deterministic, so equal objects always produce the same
bytes, and every parser here inverts its emitter exactly: parsing a file
and re-serializing the result reproduces the file byte for byte. Exact
rationals travel as "num/den" strings; floats use their shortest
round-trip repr.
"""

from __future__ import annotations

import csv
import io
import json
from fractions import Fraction

from .chain import Distribution, TransitionMatrix
from .modp import CensusRow, ClassSummary, StationaryReport, ZeroCensus
from .spectral import MixingReport

MIXING_COLUMNS = ("d", "m", "c", "sigma1", "sigma2", "sigma3", "sigma4",
                  "l2_sq", "tv_upper", "lower_term", "f1", "f2", "f3", "f4")
CENSUS_COLUMNS = ("p", "residue_class", "unique", "zero_count",
                  "predicted_count", "exact_match", "min_nonzero", "max_entry")


def format_fraction(x) -> str:
    """Exact "num/den" form; integers get an explicit /1."""
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_fraction(text: str) -> Fraction:
    return Fraction(text)


def dump_json(payload) -> str:
    """Canonical JSON: sorted keys, two-space indent, trailing newline."""
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def load_json(text: str):
    return json.loads(text)


def _emit_csv(header, rows) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return out.getvalue()


def _read_csv(text: str, header) -> list:
    reader = csv.reader(io.StringIO(text))
    first = next(reader)
    if first != list(header):
        raise ValueError(f"unexpected CSV header {first!r}")
    return [row for row in reader if row]


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _opt_int(cell: str):
    return None if cell == "" else int(cell)


def _flag(cell: str):
    if cell == "":
        return None
    if cell not in ("true", "false"):
        raise ValueError(f"bad boolean cell {cell!r}")
    return cell == "true"


# -- matrices and distributions --------------------------------------------

def matrix_payload(K: TransitionMatrix) -> dict:
    return {
        "states": list(K.states),
        "rows": [[format_fraction(x) for x in row] for row in K.dense()],
    }


def matrix_from_payload(payload) -> TransitionMatrix:
    rows = []
    for row in payload["rows"]:
        parsed = {j: parse_fraction(cell) for j, cell in enumerate(row)}
        rows.append({j: x for j, x in parsed.items() if x})
    return TransitionMatrix(payload["states"], rows)


def distribution_payload(dist: Distribution) -> dict:
    return {
        "states": list(dist.states),
        "values": [format_fraction(v) for v in dist.values],
    }


def distribution_from_payload(payload) -> Distribution:
    return Distribution(
        payload["states"], [parse_fraction(v) for v in payload["values"]])


def distribution_csv(dist: Distribution) -> str:
    return _emit_csv(
        ("state", "probability"),
        ((s, format_fraction(v)) for s, v in zip(dist.states, dist.values)),
    )


def parse_distribution_csv(text: str) -> Distribution:
    rows = _read_csv(text, ("state", "probability"))
    return Distribution(
        [r[0] for r in rows], [parse_fraction(r[1]) for r in rows])


# -- mixing sweeps ---------------------------------------------------------

def mixing_payload(report: MixingReport) -> dict:
    fields = {name: getattr(report, name) for name in MIXING_COLUMNS}
    fields["n"] = report.n
    return fields


def mixing_csv(reports) -> str:
    def get(row, name):
        return row[name] if isinstance(row, dict) else getattr(row, name)

    return _emit_csv(
        MIXING_COLUMNS,
        ([_cell(get(r, name)) for name in MIXING_COLUMNS] for r in reports),
    )


def parse_mixing_csv(text: str) -> list:
    out = []
    for row in _read_csv(text, MIXING_COLUMNS):
        cells = dict(zip(MIXING_COLUMNS, row))
        parsed = {"d": int(cells["d"])}
        for name in MIXING_COLUMNS[1:]:
            parsed[name] = float(cells[name])
        out.append(parsed)
    return out


# -- mod-p reports ---------------------------------------------------------

def stationary_payload(report: StationaryReport) -> dict:
    return {
        "p": report.p,
        "unique": report.unique,
        "pi_tilde": None if report.pi_tilde is None else list(report.pi_tilde),
        "zero_set": None if report.zero_set is None else list(report.zero_set),
        "predicted_zero_set": list(report.predicted_zero_set),
        "gap_set": list(report.gap_set),
        "max_min_ratio": (None if report.max_min_ratio is None
                          else format_fraction(report.max_min_ratio)),
    }


def stationary_from_payload(payload) -> StationaryReport:
    pi = payload["pi_tilde"]
    zeros = payload["zero_set"]
    ratio = payload["max_min_ratio"]
    return StationaryReport(
        p=payload["p"],
        pi_tilde=None if pi is None else tuple(pi),
        zero_set=None if zeros is None else tuple(zeros),
        predicted_zero_set=tuple(payload["predicted_zero_set"]),
        unique=payload["unique"],
        max_min_ratio=None if ratio is None else parse_fraction(ratio),
    )


def stationary_csv(report: StationaryReport) -> str:
    if report.pi_tilde is None:
        raise ValueError("non-unique stationary report has no vector to tabulate")
    return _emit_csv(
        ("residue", "pi_tilde"),
        ((j, v) for j, v in enumerate(report.pi_tilde)),
    )


def parse_stationary_csv(text: str) -> list:
    rows = _read_csv(text, ("residue", "pi_tilde"))
    return [{"residue": int(r[0]), "pi_tilde": int(r[1])} for r in rows]


# -- census ----------------------------------------------------------------

def _summary_payload(summary: ClassSummary | None):
    if summary is None:
        return None
    return {
        "primes": summary.primes,
        "mean_zero_fraction": format_fraction(summary.mean_zero_fraction),
        "all_exact": summary.all_exact,
    }


def census_payload(census: ZeroCensus) -> dict:
    return {
        "rows": [
            {name: getattr(row, name) for name in CENSUS_COLUMNS}
            for row in census.rows
        ],
        "class_one": _summary_payload(census.class_one),
        "class_three": _summary_payload(census.class_three),
    }


def census_csv(census: ZeroCensus) -> str:
    return _emit_csv(
        CENSUS_COLUMNS,
        ([_cell(getattr(row, name)) for name in CENSUS_COLUMNS]
         for row in census.rows),
    )


def parse_census_csv(text: str) -> list:
    out = []
    for row in _read_csv(text, CENSUS_COLUMNS):
        cells = dict(zip(CENSUS_COLUMNS, row))
        out.append(CensusRow(
            p=int(cells["p"]),
            residue_class=int(cells["residue_class"]),
            unique=_flag(cells["unique"]),
            zero_count=_opt_int(cells["zero_count"]),
            predicted_count=int(cells["predicted_count"]),
            exact_match=_flag(cells["exact_match"]),
            min_nonzero=_opt_int(cells["min_nonzero"]),
            max_entry=_opt_int(cells["max_entry"]),
        ))
    return out
