import pytest

from ndepth.audit import render, run_audit


@pytest.fixture(scope="module")
def findings():
    return {f.key: f for f in run_audit()}


def test_every_probe_reports(findings):
    expected = {
        "strict-vs-corestriction",
        "ndga-vs-depth",
        "three-assoc",
        "three-assoc-identity",
        "end-dga",
        "ndga-normal-forms",
        "assN",
        "mc-range",
        "mc-oracle",
        "tk-exponents",
        "proper-deformation",
        "tensor",
        "kapranov",
    }
    assert expected <= set(findings)
    assert all(f.evidence for f in findings.values())


def test_mc_suite_verdicts_recorded(findings):
    text = "\n".join(findings["mc-oracle"].evidence)
    for case in ("(2, 4)", "(3, 3)", "(3, 4)", "(2, 5)", "(3, 5)", "(4, 4)"):
        assert case in text


def test_render_is_markdown(findings):
    md = render(list(findings.values()))
    assert md.startswith("# Findings")
    assert md.count("\n## ") == len(findings)
