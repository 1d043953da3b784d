"""Golden machine-readable outputs for the cheap symbolic targets.

The classification targets (table5, thm1, thm2, thm3) are golden-checked
inside the acceptance suite where they already run once.
"""

import os

from supertriples.classify import report

GOLDEN_DIR = os.path.join(os.path.dirname(__file__), "golden")


def _check(target):
    rendered = report(target).render("machine") + "\n"
    path = os.path.join(GOLDEN_DIR, "report_%s.txt" % target)
    if os.environ.get("REGEN_GOLDEN"):
        with open(path, "w") as fh:
            fh.write(rendered)
    with open(path) as fh:
        assert fh.read() == rendered, target


def test_golden_table2():
    _check("table2")


def test_golden_table4():
    _check("table4")


def test_golden_table7():
    _check("table7")
