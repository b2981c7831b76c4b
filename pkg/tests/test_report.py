"""Analysis reports: content, horizon handling, serialization, rendering."""

import pytest

from towertree import (
    InvalidParameter,
    build_report,
    emit_report,
    parse_report,
    render_text,
    windowed_solenoid_tower,
)
from conftest import constant_tower


def test_report_two_branch_frozen(two_branch_tower):
    r = build_report(two_branch_tower)
    assert r.tower == {"depth": 3, "level_sizes": [1, 2, 1], "flavor": "extensional"}
    assert r.ml["verdict"] == "inconclusive_at_depth"
    assert r.ml["stabilization"] == [[1, 1, 2], [2, 3, 0]]
    assert r.ml["witness"] is None
    assert r.t_infinity == {"vertex_count": 4, "depth": 3, "branch_count": 1}
    assert r.end_space == {
        "point_count": 1,
        "exponent_histogram": {},
        "diameter_exponent": None,
    }
    assert r.retraction == {
        "witness_total": True,
        "table": [[1, 1], [2, 3], [3, 3]],
        "failure_level": None,
        "oracle_override": False,
    }
    assert r.cross_check == {
        "consistent": True,
        "ml_verdict": "inconclusive_at_depth",
        "retraction_expects": "inconclusive_at_depth",
        "witness_total": True,
    }


def test_report_solenoid_failure_is_consistent(solenoid_p2):
    r = build_report(solenoid_p2)
    assert r.ml["verdict"] == "fails"
    assert len(r.ml["witness"]["chain"]) == 10
    assert r.retraction["witness_total"] is False
    assert r.cross_check["consistent"] is True
    assert r.end_space["point_count"] == 1


def test_report_constant_tower_holds():
    r = build_report(constant_tower(4))
    assert r.ml["verdict"] == "holds"
    assert r.cross_check == {
        "consistent": True,
        "ml_verdict": "holds",
        "retraction_expects": "holds",
        "witness_total": True,
    }
    assert r.t_infinity["branch_count"] == 1


def test_report_horizon_truncates_extensional(two_branch_tower):
    r = build_report(two_branch_tower, depth_horizon=2)
    assert r.tower["depth"] == 2
    assert r.ml["verdict"] == "holds"
    assert r.ml["stabilization"] == [[1, 1, 1]]


def test_report_horizon_extends_generator_tower():
    t = windowed_solenoid_tower([2], 256, 4)
    r = build_report(t, depth_horizon=7)
    assert r.tower["depth"] == 7
    assert r.ml["verdict"] == "fails"
    assert len(r.ml["witness"]["chain"]) == 6


def test_report_horizon_beyond_extensional_depth_rejected(two_branch_tower):
    with pytest.raises(InvalidParameter) as err:
        build_report(two_branch_tower, depth_horizon=5)
    assert "exceeds the stored depth" in str(err.value)


def test_report_roundtrip_exact(two_branch_tower, solenoid_p2):
    for t in (two_branch_tower, solenoid_p2, constant_tower(5, size=2)):
        r = build_report(t)
        assert parse_report(emit_report(r)) == r


def test_render_text_frozen(two_branch_tower):
    lines = render_text(build_report(two_branch_tower)).splitlines()
    assert lines[0] == "tower: depth 3, extensional, level sizes 1 2 1"
    assert lines[1] == "ml: inconclusive_at_depth"
    assert "  level 2: images stabilize at 3 (margin 0)" in lines
    assert "t-infinity: 4 vertices, depth 3, 1 complete branch(es)" in lines
    assert "end space: 1 point(s), diameter n/a" in lines
    assert "retraction: proper, witness m(1)=1 m(2)=3 m(3)=3" in lines
    assert lines[-1] == (
        "cross-check: consistent (ml inconclusive_at_depth, "
        "retraction expects inconclusive_at_depth)"
    )


def test_render_text_failure_mentions_witness(solenoid_p2):
    text = render_text(build_report(solenoid_p2))
    assert "ml: fails" in text
    assert "retraction: not proper" in text
