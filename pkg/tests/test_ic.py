import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import parent_dict
import oracles
from taxosim.errors import UnknownCode
from taxosim.ic import IcMeasure, ic, ic_max, ic_table
from taxosim.synthetic import random_taxonomy
from taxosim.taxonomy import parse_edge_list

LN2 = 0.6931471805599453  # -ln((1/2 + 1) / 3), evaluated by tests/oracles.py


def test_level_examples(chain):
    assert ic(chain, IcMeasure.LEVEL, "ICD-10-GM") == 0
    assert ic(chain, IcMeasure.LEVEL, "C25.0") == 6
    assert ic_max(chain, IcMeasure.LEVEL) == 6 == chain.max_depth


@pytest.mark.parametrize("measure", list(IcMeasure))
def test_root_is_zero(measure, tree200, chain, star):
    for tax in (tree200, chain, star):
        assert ic(tax, measure, tax.root) == 0.0


def test_sanchez_star(star):
    assert ic(star, IcMeasure.SANCHEZ, "a") == pytest.approx(LN2, abs=1e-15)
    assert ic_max(star, IcMeasure.SANCHEZ) == pytest.approx(LN2, abs=1e-15)


@pytest.mark.parametrize("measure", list(IcMeasure))
def test_single_node_ic_max(measure):
    assert ic_max(parse_edge_list("root,\n"), measure) == 0.0


def test_sanchez_matches_oracle(tree200):
    parent = parent_dict(tree200)
    for c in tree200.codes[::5]:
        assert ic(tree200, IcMeasure.SANCHEZ, c) == pytest.approx(oracles.ic_sanchez(parent, c), rel=1e-13, abs=1e-15)


def test_unknown(chain):
    with pytest.raises(UnknownCode):
        ic(chain, "level", "nope")


def test_measure_names():
    assert [m.value for m in IcMeasure] == ["level", "sanchez"]


@settings(max_examples=30, deadline=None)
@given(n=st.integers(2, 250), seed=st.integers(0, 10_000), measure=st.sampled_from(list(IcMeasure)))
def test_strictly_increasing_along_edges(n, seed, measure):
    tax = random_taxonomy(n, seed=seed)
    values = ic_table(tax, measure)
    parents = tax.parents
    child = np.flatnonzero(parents >= 0)
    assert np.all(values[child] - values[parents[child]] > 1e-12)
    assert np.all(values >= 0)
    assert ic_max(tax, measure) == max(ic(tax, measure, c) for c in tax.codes)


def test_table_is_memoized_and_read_only(tree200):
    t1 = ic_table(tree200, IcMeasure.SANCHEZ)
    assert ic_table(tree200, IcMeasure.SANCHEZ) is t1
    with pytest.raises(ValueError):
        t1[0] = 1.0


def test_log_base_is_natural(star):
    # ratio for a leaf is (1/2 + 1) / 3 = 0.5
    assert ic(star, "sanchez", "b") == pytest.approx(-math.log(0.5))
