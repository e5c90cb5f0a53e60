import itertools

import pytest

from monodual.signs import (
    EQUATIONS,
    SignExpr,
    SearchSpaceExceeded,
    default_assignment,
    eval_sign,
    flipped,
    search,
    table_passes,
    theorem_family,
    verify_table,
)


def test_eval_sign_examples():
    d = default_assignment()
    assert eval_sign(d["sym"], (1, 1)) == -1
    assert eval_sign(d["ath"], (0, 0)) == 1
    assert eval_sign(d["ath"], (2, 0)) == -1
    assert eval_sign(d["ath"], (3, 0)) == -1
    # any expression at all-zero indices is its global sign
    for name, expr in d.items():
        assert eval_sign(expr, (0,) * expr.arity) == expr.global_sign


def test_default_assignment_passes_everything():
    reports = verify_table(default_assignment(1, 1))
    assert len(reports) == 22
    assert all(r.passed for r in reports)


def test_b_flip_passes_a_flip_fails_rows_15_17():
    # the adjunction sign flips freely (it appears squared everywhere),
    # while the constant tensor-suspension sign is pinned by the two
    # associator rows with an odd factor count; see the decisions ledger
    assert table_passes(default_assignment(1, -1))
    for b in (1, -1):
        bad = [r.num for r in verify_table(default_assignment(-1, b)) if not r.passed]
        assert bad == [15, 17]


def test_corrupted_symmetry_fails_row_6():
    s = default_assignment()
    s["sym"] = SignExpr(2, 1)  # symmetry sign identically +1
    reports = verify_table(s)
    assert not [r for r in reports if r.num == 6][0].passed


def test_corrupted_tp_fails_row_14():
    s = default_assignment()
    s["tp1"] = SignExpr(2, 1)
    s["tp2"] = SignExpr(2, 1)
    reports = verify_table(s)
    assert not [r for r in reports if r.num == 14][0].passed
    # the failure names the first failing index tuple
    assert [r for r in reports if r.num == 14][0].first_failure is not None


def test_window_is_complete():
    # the window {-4..3} decides each row exactly as the wider {-8..7}
    wide = tuple(range(-8, 8))
    candidates = [default_assignment(1, 1), default_assignment(-1, 1),
                  flipped(default_assignment(), "T"),
                  flipped(default_assignment(), "tens2"),
                  flipped(default_assignment(), "hom2")]
    for s in candidates:
        narrow = [(r.num, r.passed) for r in verify_table(s)]
        wide_r = [(r.num, r.passed) for r in verify_table(s, wide)]
        assert narrow == wide_r


def test_search_joint_family():
    # searching the four joint (a, b) assignments keeps exactly the a=+1 half
    passing = [s for s in theorem_family() if table_passes(s)]
    assert len(passing) == 2
    assert all(s["tp1"].global_sign == 1 for s in passing)


def test_search_assoc_flip():
    base = default_assignment()
    fam = {"assoc": [base["assoc"], base["assoc"].flip()]}
    found = search(fam)
    # the pentagon has an odd number of associator factors
    assert len(found) == 1
    assert found[0]["assoc"].global_sign == 1


def test_search_th2_not_pinned_by_table():
    # th2 appears in no table row; only evaluated diagrams constrain it
    base = default_assignment()
    fam = {"th2": [base["th2"], base["th2"].flip()]}
    assert len(search(fam)) == 2


def test_search_empty_family_is_empty():
    assert search({}) == []


def test_search_space_cap():
    base = default_assignment()
    fam = {k: [base[k], base[k].flip()] for k in base}
    with pytest.raises(SearchSpaceExceeded):
        search(fam, limit=100)


def test_equation_table_shape():
    assert len(EQUATIONS) == 22
    assert [e.num for e in EQUATIONS] == list(range(1, 23))
    # rows displayed with a right-hand side of -1
    minus = [e.num for e in EQUATIONS if e.rhs.arity == 0 and e.rhs.global_sign == -1]
    assert minus == [1, 14, 19, 20]
    # the double-dual normalization row has a nonconstant right-hand side
    assert EQUATIONS[21].rhs.arity > 0


def test_missing_symbol_rejected():
    s = default_assignment()
    del s["ath"]
    with pytest.raises(ValueError):
        verify_table(s)
