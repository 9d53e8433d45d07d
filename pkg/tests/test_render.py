from __future__ import annotations

import xml.etree.ElementTree as ET
from fractions import Fraction

import pytest

from troptev.enumeration import enumerate_contributing, paper_point_config
from troptev.render import EmptyScene, RenderOptions, contact_sheet, fmt, render_all, render_curve

SVG = "{http://www.w3.org/2000/svg}"


@pytest.fixture
def curves(example_b):
    cfg = paper_point_config(example_b)
    return [c.to_json() for c in enumerate_contributing(example_b, cfg, labelled=False)]


def test_fmt_is_exact_six_decimals():
    assert fmt(Fraction(1, 3)) == "0.333333"
    assert fmt(Fraction(-2, 3)) == "-0.666667"
    assert fmt(5) == "5.000000"
    assert fmt(Fraction(-1, 10**7)) == "0.000000"


def test_render_curve_is_valid_and_deterministic(curves):
    doc = render_curve(curves[0], 1, title="t")
    assert doc == render_curve(curves[0], 1, title="t")
    root = ET.fromstring(doc.split("\n", 1)[1])
    assert root.tag == SVG + "svg"
    circles = root.findall(f".//{SVG}circle")
    assert len(circles) == 4  # one dot per marking
    labels = [t.text for t in root.iter(SVG + "text")]
    assert {"x1", "x2", "x3", "x4"} <= set(labels)
    # weights above one are printed
    assert "3" in labels and "4" in labels


def test_fan_toggle(curves):
    with_fan = render_curve(curves[0], 1)
    without = render_curve(curves[0], 1, RenderOptions(fan=False))
    assert "stroke-dasharray" in with_fan and "stroke-dasharray" not in without


def test_render_all_names(curves):
    files = render_all(curves, 1)
    assert set(files) == {"curve_1_B.svg", "curve_2_A.svg", "contact_sheet.svg"}
    sheet = ET.fromstring(files["contact_sheet.svg"].split("\n", 1)[1])
    assert len(sheet.findall(f"{SVG}svg")) == 2


def test_empty_inputs():
    with pytest.raises(EmptyScene):
        render_all([], 1)
    with pytest.raises(EmptyScene):
        contact_sheet([])
