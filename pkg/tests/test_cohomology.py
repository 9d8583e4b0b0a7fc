from __future__ import annotations

import pytest

from lietype.cohomology import (
    dim_g,
    em_collapse_check,
    koszul_tor,
    module_rank_one_check,
    poincare_series,
    psiq_action,
    serre_e2,
)
from lietype.errors import AppError
from lietype.invariants import degrees
from lietype.rootdata import parse_label
from lietype.series import PoincareSeries


def test_model_series():
    assert poincare_series([2], "BG") == PoincareSeries.from_degrees([], [4])
    assert poincare_series([2], "G") == PoincareSeries.from_degrees([3], [])
    assert poincare_series([1], "BGq") == PoincareSeries.from_degrees([], [1])
    assert poincare_series([2, 3], "LBG") == poincare_series([2, 3], "BGq")
    with pytest.raises(AppError):
        poincare_series([2], "BU")


def test_dim_g():
    assert dim_g([2]) == 3
    assert dim_g([2, 3]) == 8
    assert dim_g([1, 2, 3]) == 9


def test_koszul_tor_for_su2():
    tor = koszul_tor([2], 8)
    assert tor.entries == {(0, 0): 1, (0, 4): 1, (0, 8): 1, (-1, 4): 1, (-1, 8): 1}


@pytest.mark.parametrize("degs", [[2], [4], [2, 4], [4, 6, 8], [2, 3, 4, 5]])
def test_eilenberg_moore_collapse(degs):
    check = em_collapse_check(degs, 40)
    assert check.ok, check.mismatches


def test_twisted_collapse_keeps_only_fixed_generators():
    check = em_collapse_check([1, 2], 10, ell=3, q=2)
    assert check.ok
    assert list(check.expected_totals[:5]) == [1, 0, 0, 1, 1]


def test_psiq_action():
    assert psiq_action([2, 3], 2, 3).verdict == "NOT_IDENTITY"
    assert psiq_action([2, 3], 2, 3).eigenvalues == ((4, 1), (6, 2))
    action = psiq_action([2, 3], 2, 5)
    assert action.eigenvalues == ((4, 4), (6, 3))
    assert action.verdict == "NOT_IDENTITY"
    assert psiq_action([2, 3], 3, 2).verdict == "IDENTITY"
    assert psiq_action([1, 2], 4, 3).verdict == "IDENTITY"


def test_serre_e2_table():
    base = PoincareSeries.from_degrees([], [4])
    fiber = PoincareSeries.from_degrees([3], [])
    table = serre_e2(base, fiber, 8)
    assert set(table.entries) == {(0, 0), (0, 3), (4, 0), (4, 3), (8, 0)}


@pytest.mark.parametrize("degs", [[2], [2, 3], [2, 6], [1, 2, 3]])
def test_serre_e2_edges_are_base_and_fiber(degs):
    base = poincare_series(degs, "BG")
    fiber = poincare_series(degs, "G")
    table = serre_e2(base, fiber, 24)
    assert [table.get(s, 0) for s in range(25)] == base.expand(24)
    assert [table.get(0, t) for t in range(25)] == fiber.expand(24)


@pytest.mark.parametrize(
    "degs",
    [[1], [2], [1, 2], [2, 3], [2, 4], [2, 6], [1, 2, 3], [2, 3, 4], [2, 4, 6], [3, 4]],
)
def test_module_rank_one(degs):
    check = module_rank_one_check(degs, dim_g(degs) + 2)
    assert check.ok, check.mismatches
    assert check.generator == (0, dim_g(degs))


def test_module_check_generator_for_su2_and_truncation_guard():
    assert module_rank_one_check([2], 4).generator == (0, 3)
    with pytest.raises(AppError) as excinfo:
        module_rank_one_check([2, 3], 4)
    assert excinfo.value.code == "INVALID_INPUT"


def test_degree_data_is_accepted_in_place_of_a_list():
    data = degrees(parse_label("G2"))
    assert dim_g(data) == 14
    assert poincare_series(data, "BG") == PoincareSeries.from_degrees([], [4, 12])
