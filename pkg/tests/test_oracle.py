"""Brute-force oracle tests: frozen counts, cross-checks against the scalar
group arithmetic, and the defining-system search."""

import numpy as np
import pytest

from massey_census import oracle
from massey_census.census import GroupModel, epi_count, tmp_enumerate
from massey_census.fp import BudgetError, FpVector, vector_from_index
from massey_census.forms import consecutive_orthogonal_basis, demushkin_gram
from massey_census.oracle import (
    count_epi_bruteforce,
    count_lifts_bruteforce,
    cup_defining_check,
    massey_system_exists,
)
from massey_census.unipotent import UniMatrix, element_from_index, group_mul
from massey_census.words import (
    Comm,
    Gen,
    Pow,
    Prod,
    RamifiedRelatorData,
    demushkin_presentation,
    evaluate_word,
    free_presentation,
    preset,
    ramified_presentation,
)


def test_epi_presets_frozen():
    assert count_epi_bruteforce(preset("borromean"), 4, 2) == 3072
    assert count_epi_bruteforce(preset("ram01"), 4, 2) == 86016


def test_epi_demushkin_f_independent():
    for f in (2, "inf"):
        pres = demushkin_presentation(3, 2, 2, "D2", f=f)
        assert count_epi_bruteforce(pres, 4, 2) == 6144


def test_epi_small_target():
    pres = demushkin_presentation(3, 2, 2, "D2", f="inf")
    assert count_epi_bruteforce(pres, 3, 2) == 144


def test_epi_threads_and_chunks_deterministic():
    pres = demushkin_presentation(3, 2, 2, "D2", f="inf")
    serial = count_epi_bruteforce(pres, 4, 2)
    threaded = count_epi_bruteforce(pres, 4, 2, threads=2, chunk=2 ** 14)
    rechunked = count_epi_bruteforce(pres, 4, 2, chunk=2 ** 10)
    assert serial == threaded == rechunked == 6144


def test_epi_budget_error_names_space():
    pres = free_presentation(3)
    with pytest.raises(BudgetError) as err:
        count_epi_bruteforce(pres, 4, 3)
    assert str(3 ** 18) in str(err.value)


def test_epi_profile_memo_fallback(monkeypatch):
    monkeypatch.setattr(oracle, "_PROFILE_TABLE_LIMIT", 1)
    oracle._surjective_table.cache_clear()
    try:
        pres = demushkin_presentation(3, 2, 2, "D2", f="inf")
        assert count_epi_bruteforce(pres, 4, 2) == 6144
    finally:
        oracle._surjective_table.cache_clear()


def test_lifts_constant_on_triples():
    pres = demushkin_presentation(3, 2, 2, "D2", f="inf")
    _, triples = tmp_enumerate(GroupModel.demushkin(3, 2), 2, want_list=True)
    counts = {count_lifts_bruteforce(pres, 2, t) for t in triples}
    assert counts == {256}


def test_lifts_free_and_sum_identity():
    free3 = free_presentation(3)
    _, triples = tmp_enumerate(GroupModel.free(3), 2, want_list=True)
    assert count_lifts_bruteforce(free3, 2, triples[0]) == 512

    pres = demushkin_presentation(3, 2, 2, "D2", f="inf")
    _, tmp_triples = tmp_enumerate(GroupModel.demushkin(3, 2), 2, want_list=True)
    total = sum(count_lifts_bruteforce(pres, 2, t) for t in tmp_triples)
    assert total == count_epi_bruteforce(pres, 4, 2) == 6144


def test_lifts_zero_off_condition():
    pres = demushkin_presentation(3, 2, 2, "D2", f="inf")
    e1 = FpVector((1, 0, 0), 2)
    e2 = FpVector((0, 1, 0), 2)
    e3 = FpVector((0, 0, 1), 2)
    # independent, but e2 pairs with e3 under the relator form
    assert count_lifts_bruteforce(pres, 2, (e1, e2, e3)) == 0


def test_lifts_validation():
    pres = demushkin_presentation(3, 2, 2, "D2", f="inf")
    good = (FpVector((1, 0, 0), 2),) * 3
    with pytest.raises(ValueError):
        count_lifts_bruteforce(pres, 2, good, n=5)
    with pytest.raises(ValueError):
        count_lifts_bruteforce(pres, 2, (FpVector((1, 0), 2),) * 3)
    with pytest.raises(BudgetError):
        count_lifts_bruteforce(pres, 2, good, budget=1)


def test_massey_counterexample_false():
    pres = preset("counterexample1")
    chars = [vector_from_index(2 ** (3 - i), 4, 2) for i in range(4)]
    assert [tuple(map(int, c)) for c in chars] == [
        (1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1),
    ]
    assert massey_system_exists(pres, chars, 2, budget=2 ** 20) is False


def test_massey_free_always_true():
    chars = [FpVector((1, 1, 0), 3), FpVector((0, 2, 1), 3),
             FpVector((1, 0, 1), 3)]
    assert massey_system_exists(free_presentation(3), chars, 3) is True


def test_massey_demushkin_consecutive_basis_true():
    pres = demushkin_presentation(4, 2, 4, "D1")
    basis = consecutive_orthogonal_basis(demushkin_gram(4, 2, 4, "D1"))
    assert massey_system_exists(pres, basis[:4], 2) is True


def test_massey_validation():
    pres = preset("counterexample1")
    c = FpVector((1, 0, 0, 0), 2)
    with pytest.raises(ValueError):
        massey_system_exists(pres, [c] * 6, 2)  # target size 7 unsupported
    with pytest.raises(ValueError):
        massey_system_exists(pres, [c], 2)
    with pytest.raises(ValueError):
        massey_system_exists(pres, [FpVector((1, 0), 2)] * 3, 2)
    with pytest.raises(BudgetError):
        massey_system_exists(pres, [c] * 4, 2, budget=2 ** 10)


def test_cup_defining_demushkin_exhaustive_empty():
    pres = demushkin_presentation(3, 2, 2, "D2", f="inf")
    report = cup_defining_check(pres, 2, 3)
    assert report == {"checked": 176, "failures": [], "exhaustive": True}


def test_cup_defining_counterexample_flagged():
    pres = preset("counterexample1")
    chars = tuple(
        FpVector(tuple(1 if j == i else 0 for j in range(4)), 2)
        for i in range(4)
    )
    report = cup_defining_check(
        pres, 2, 4, samples=0, include=(chars,), budget=2 ** 20
    )
    assert report["checked"] == 1
    assert report["exhaustive"] is False
    assert report["failures"] == [
        ((1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1))
    ]
    # a reported failure can be fed straight back in as plain int tuples
    again = cup_defining_check(
        pres, 2, 4, samples=0, include=report["failures"], budget=2 ** 20
    )
    assert again["failures"] == report["failures"]


def test_cup_defining_sampled_demushkin_d4():
    pres = demushkin_presentation(4, 2, 4, "D1")
    report = cup_defining_check(pres, 2, 4, samples=5, seed=7, budget=2 ** 22)
    assert report["checked"] == 5
    assert report["failures"] == []
    assert report["exhaustive"] is False


def test_cup_defining_budget_error():
    pres = preset("counterexample1")
    with pytest.raises(BudgetError):
        cup_defining_check(pres, 2, 4, budget=2 ** 20)  # exhaustive over budget


def test_batch_matches_scalar_arithmetic():
    rng = np.random.default_rng(20260818)
    n, p, bar = 4, 3, False
    words = [
        Comm(Gen(1), Gen(2)),
        Prod(Pow(Gen(1), 5), Comm(Gen(2), Gen(1)), Gen(2)),
        Pow(Comm(Gen(1), Gen(2)), -3),
        Prod(Comm(Comm(Gen(1), Gen(2)), Gen(1)), Pow(Gen(2), 9)),
    ]
    size = 64
    N = p ** 6
    idx1 = rng.integers(N, size=size)
    idx2 = rng.integers(N, size=size)
    mats1 = [element_from_index(int(i), n, p) for i in idx1]
    mats2 = [element_from_index(int(i), n, p) for i in idx2]
    images_batch = [
        [np.array([m.entries[t] for m in mats], dtype=np.int16)
         for t in range(6)]
        for mats in (mats1, mats2)
    ]
    for w in words:
        batch = oracle._batch_eval(w, images_batch, n, p, bar)
        for s in range(size):
            scalar = evaluate_word(w, [mats1[s], mats2[s]])
            got = tuple(int(np.asarray(e)[s]) if isinstance(e, np.ndarray)
                        else int(e) for e in batch)
            assert got == scalar.entries, (w, s)


def test_random_tensor_census_matches_oracle():
    rng = np.random.default_rng(42)
    n = 3
    triples = [(i, j, k) for i in range(1, 4) for j in range(i + 1, 4)
               for k in range(1, j + 1)]
    for _ in range(3):
        entries = {}
        for m in (1, 2):
            for t in triples:
                if rng.integers(2):
                    entries[t + (m,)] = 1
        if not entries:
            entries[(1, 2, 1, 1)] = 1
        data = RamifiedRelatorData(n, entries)
        model = GroupModel.s3(data)
        pres = ramified_presentation(data, 2)
        formula = epi_count(model, 2, method="formula").epi
        brute = count_epi_bruteforce(pres, 4, 2)
        assert formula == brute


def test_redei_three_relator_tensor_matches_preset_count():
    # the arithmetic table carries a third, redundant relator; the count is
    # unchanged from the two-relator preset
    entries = {
        (2, 3, 1, 1): 1,
        (1, 3, 2, 2): 1,
        (1, 3, 2, 3): 1,
        (2, 3, 1, 3): 1,
    }
    pres = ramified_presentation(RamifiedRelatorData(3, entries), 2)
    assert count_epi_bruteforce(pres, 4, 2) == 3072


def test_progress_reporting(capsys):
    pres = demushkin_presentation(3, 2, 2, "D2", f="inf")
    count = count_epi_bruteforce(pres, 3, 2, progress=True)
    assert count == 144
    assert "epi" in capsys.readouterr().err
