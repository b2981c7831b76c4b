"""Whole-tower analysis: one pass that ties the verdicts together.

The report is deliberately JSON-plain (dicts, lists, scalars) so that the
machine emission round-trips bit for bit.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .errors import EmptyCore, InvalidParameter, ParseError
from .maps import retraction_map
from .towers import FAILS, HOLDS, INCONCLUSIVE, MLReport, Tower, ml_verdict
from .trees import branches, max_geodesic_subtree, tree_of_tower
from .ends import end_space_of
from .formats import _load_json


@dataclass(frozen=True)
class AnalysisReport:
    tower: dict
    ml: dict
    t_infinity: dict
    end_space: dict
    retraction: dict
    cross_check: dict


def _truncate(tower: Tower, horizon: int) -> Tower:
    if horizon < 1:
        raise InvalidParameter("depth horizon must be >= 1")
    if tower.oracle is not None:
        from .towers import windowed_solenoid_tower

        return windowed_solenoid_tower(tower.oracle.primes, tower.oracle.window, horizon)
    if horizon > tower.depth:
        raise InvalidParameter(
            f"horizon {horizon} exceeds the stored depth {tower.depth} of an extensional tower"
        )
    return Tower(tower.levels[:horizon], tower.bonds[: horizon - 1])


def _ml_dict(report: MLReport) -> dict:
    witness = None
    if report.witness is not None:
        witness = {
            "level": report.witness.level,
            "chain": [list(row) for row in report.witness.chain],
        }
    return {
        "verdict": report.verdict,
        "stabilization": [[r.level, r.stabilization, r.margin] for r in report.per_level],
        "witness": witness,
    }


def build_report(tower: Tower, depth_horizon: int | None = None) -> AnalysisReport:
    if depth_horizon is not None:
        tower = _truncate(tower, depth_horizon)
    ml = ml_verdict(tower)
    tree = tree_of_tower(tower)
    core = max_geodesic_subtree(tree)
    t_inf = {
        "vertex_count": len(core.vertices),
        "depth": core.depth,
        "branch_count": len(branches(core)),
    }
    try:
        space = end_space_of(tree)
        histogram: dict[str, int] = {}
        for _, _, value in space.pairs():
            histogram[str(value)] = histogram.get(str(value), 0) + 1
        diam = space.diameter_exponent()
        end = {
            "point_count": len(space.points),
            "exponent_histogram": dict(sorted(histogram.items())),
            "diameter_exponent": diam,
        }
    except EmptyCore:
        end = {"point_count": 0, "exponent_histogram": {}, "diameter_exponent": None}
    retr = retraction_map(tree).properness
    retraction = {
        "witness_total": retr.total,
        "table": [[n + 1, m] for n, m in enumerate(retr.table)],
        "failure_level": retr.failure_level,
        "oracle_override": retr.oracle_override,
    }
    margins_positive = retr.total and all(
        tower.depth - m >= 1 for n, m in enumerate(retr.table, start=1) if n <= tower.depth - 1
    )
    if not retr.total:
        expected = FAILS
    elif margins_positive:
        expected = HOLDS
    else:
        expected = INCONCLUSIVE
    cross = {
        "consistent": ml.verdict == expected,
        "ml_verdict": ml.verdict,
        "retraction_expects": expected,
        "witness_total": retr.total,
    }
    return AnalysisReport(
        tower={
            "depth": tower.depth,
            "level_sizes": [len(level) for level in tower.levels],
            "flavor": tower.flavor,
        },
        ml=_ml_dict(ml),
        t_infinity=t_inf,
        end_space=end,
        retraction=retraction,
        cross_check=cross,
    )


def render_text(r: AnalysisReport) -> str:
    lines = []
    sizes = " ".join(str(s) for s in r.tower["level_sizes"])
    lines.append(f"tower: depth {r.tower['depth']}, {r.tower['flavor']}, level sizes {sizes}")
    verdict = r.ml["verdict"]
    lines.append(f"ml: {verdict}")
    for level, s, margin in r.ml["stabilization"]:
        lines.append(f"  level {level}: images stabilize at {s} (margin {margin})")
    if r.ml["witness"] is not None:
        w = r.ml["witness"]
        lines.append(f"  witness at level {w['level']}:")
        for n1, alpha, fails_at in w["chain"]:
            lines.append(f"    {alpha} extends to level {n1} but not to {fails_at}")
    lines.append(
        "t-infinity: {vertex_count} vertices, depth {depth}, "
        "{branch_count} complete branch(es)".format(**r.t_infinity)
    )
    diam = r.end_space["diameter_exponent"]
    lines.append(
        f"end space: {r.end_space['point_count']} point(s), "
        f"diameter {'e-' + str(diam) if diam is not None else 'n/a'}"
    )
    hist = r.end_space["exponent_histogram"]
    if hist:
        pairs = ", ".join(f"e-{k}: {v}" for k, v in hist.items())
        lines.append(f"  agreement histogram: {pairs}")
    if r.retraction["witness_total"]:
        table = " ".join(f"m({n})={m}" for n, m in r.retraction["table"])
        lines.append(f"retraction: proper, witness {table}")
    else:
        source = " (oracle)" if r.retraction["oracle_override"] else ""
        lines.append(
            f"retraction: not proper, fails at radius {r.retraction['failure_level']}{source}"
        )
    status = "consistent" if r.cross_check["consistent"] else "INCONSISTENT"
    lines.append(
        f"cross-check: {status} (ml {r.cross_check['ml_verdict']}, "
        f"retraction expects {r.cross_check['retraction_expects']})"
    )
    return "\n".join(lines) + "\n"


def emit_report(r: AnalysisReport) -> str:
    data = {
        "tower": r.tower,
        "ml": r.ml,
        "t_infinity": r.t_infinity,
        "end_space": r.end_space,
        "retraction": r.retraction,
        "cross_check": r.cross_check,
    }
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


def parse_report(text: str) -> AnalysisReport:
    data = _load_json(text)
    keys = {"tower", "ml", "t_infinity", "end_space", "retraction", "cross_check"}
    if not isinstance(data, dict) or set(data) != keys:
        raise ParseError("report object must carry exactly the analysis fields")
    return AnalysisReport(**data)
