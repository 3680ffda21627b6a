"""Tests for Gram forms, consecutive-orthogonal bases, and trilinear traces."""

import numpy as np
import pytest

from massey_census.fp import (
    FpMatrix,
    FpVector,
    GramForm,
    form_eval,
    is_nondegenerate,
    rank_mod,
)
from massey_census.forms import (
    TrilinearForm,
    consecutive_orthogonal_basis,
    demushkin_gram,
    gram_from_demushkin,
    load_input_file,
    ramified_from_redei,
    trace_tensor,
    trilinear_trace,
    trilinear_trace_split,
    zero_form,
)
from massey_census.words import (
    RamifiedRelatorData,
    demushkin_presentation,
    preset_tensor,
)


def test_gram_d1_symplectic():
    pres = demushkin_presentation(4, 2, 4, "D1")
    g = gram_from_demushkin(pres)
    assert g.diagonal_profile == "all_zero"
    assert g.matrix == FpMatrix(
        [[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], 2
    )
    assert is_nondegenerate(g)


def test_gram_d1_p3():
    g = demushkin_gram(2, 3, 3, "D1")
    assert g.matrix == FpMatrix([[0, 1], [-1, 0]], 3)


def test_gram_d2():
    g = demushkin_gram(3, 2, 2, "D2")
    assert g.diagonal_profile == "first_one"
    assert g.matrix == FpMatrix([[1, 0, 0], [0, 0, 1], [0, 1, 0]], 2)
    # determinant of that matrix is 1 over F_2, hence nondegenerate
    assert is_nondegenerate(g)


def test_gram_d3_d4():
    g3 = demushkin_gram(4, 2, 2, "D3")
    assert g3.matrix == FpMatrix(
        [[1, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], 2
    )
    g4 = demushkin_gram(4, 2, 2, "D4")
    assert g4.matrix == g3.matrix  # the patterns coincide at d = 4
    g4b = demushkin_gram(6, 2, 2, "D4")
    assert g4b.matrix.entry(2, 3) == 1  # (v3,v4) pair
    assert g4b.matrix.entry(4, 5) == 1  # (v5,v6) pair


def test_gram_grid_nondegenerate():
    # every legal case/d combination up to d = 8 gives a full-rank form with
    # the declared diagonal
    cells = []
    for d in range(2, 9, 2):
        cells.append((d, 3, 3, "D1"))
        cells.append((d, 2, 4, "D1"))
        cells.append((d, 5, 25, "D1"))
        cells.append((d, 2, 2, "D3"))
        if d >= 4:
            cells.append((d, 2, 2, "D4"))
    for d in range(3, 9, 2):
        cells.append((d, 2, 2, "D2"))
    for d, p, q, case in cells:
        g = demushkin_gram(d, p, q, case)
        assert is_nondegenerate(g), (d, p, q, case)
        diag = [int(g.matrix.array[i, i]) for i in range(d)]
        if q == 2:
            assert g.diagonal_profile == "first_one" and diag[0] == 1
        else:
            assert g.diagonal_profile == "all_zero" and not any(diag)


def test_gram_validation():
    with pytest.raises(ValueError):
        demushkin_gram(3, 2, 4, "D1")
    with pytest.raises(ValueError):
        demushkin_gram(4, 3, 3, "D2")
    with pytest.raises(ValueError):
        gram_from_demushkin_free()


def gram_from_demushkin_free():
    from massey_census.words import free_presentation

    return gram_from_demushkin(free_presentation(3))


def check_consecutive(f, basis):
    assert len(basis) == f.dim
    assert rank_mod([list(v.entries) for v in basis], f.p) == f.dim
    for a, b in zip(basis, basis[1:]):
        assert form_eval(f, a, b) == 0


def test_basis_zero_form():
    f = zero_form(3, 2)
    basis = consecutive_orthogonal_basis(f)
    assert [v.entries for v in basis] == [(1, 0, 0), (0, 1, 0), (0, 0, 1)]


def test_basis_standard_symplectic():
    f = demushkin_gram(4, 2, 4, "D1")
    basis = consecutive_orthogonal_basis(f)
    check_consecutive(f, basis)
    # hyperbolic-pair members end up separated: (u1, u2, w1, w2)
    assert [v.entries for v in basis] == [
        (1, 0, 0, 0),
        (0, 0, 1, 0),
        (0, 1, 0, 0),
        (0, 0, 0, 1),
    ]


def test_basis_d2():
    f = demushkin_gram(3, 2, 2, "D2")
    check_consecutive(f, consecutive_orthogonal_basis(f))


def test_basis_single_pair_plus_radical():
    # rank-2 alternate form in dimension 3: the r = 1 ordering (u, z, w)
    f = GramForm(FpMatrix([[0, 1, 0], [-1, 0, 0], [0, 0, 0]], 3))
    check_consecutive(f, consecutive_orthogonal_basis(f))


def test_basis_dim_error():
    with pytest.raises(ValueError):
        consecutive_orthogonal_basis(zero_form(2, 2))


def test_basis_random_forms():
    rng = np.random.default_rng(20260818)
    for p in (2, 3, 5):
        for d in (3, 4, 5, 6):
            for _ in range(12):
                m = np.triu(rng.integers(0, p, size=(d, d)), 1)
                m = (m - m.T) % p
                f = GramForm(FpMatrix(m, p))
                check_consecutive(f, consecutive_orthogonal_basis(f))
    # non-alternate forms at p = 2 (first_one profile), random off-diagonals
    for d in (3, 4, 5, 6, 7):
        for _ in range(12):
            m = np.triu(rng.integers(0, 2, size=(d, d)), 1)
            m = (m + m.T) % 2
            m[0, 0] = 1
            f = GramForm(FpMatrix(m, 2), "first_one")
            check_consecutive(f, consecutive_orthogonal_basis(f))


def borromean_form():
    return TrilinearForm(preset_tensor("borromean"), 2)


def test_trace_zero_tensor():
    t = TrilinearForm(RamifiedRelatorData(3, {}, r=2), 2)
    rng = np.random.default_rng(5)
    for _ in range(10):
        a, b, c = (FpVector(rng.integers(0, 2, size=3), 2) for _ in range(3))
        assert trilinear_trace(t, a, b, c, 1) == 0
        assert trilinear_trace(t, a, b, c, 2) == 0


def test_trace_borromean_values():
    t = borromean_form()
    chi = [FpVector([1, 0, 0], 2), FpVector([0, 1, 0], 2), FpVector([0, 0, 1], 2)]
    assert trilinear_trace(t, chi[0], chi[1], chi[2], 1) == 1
    assert trilinear_trace(t, chi[0], chi[1], chi[2], 2) == 0
    # the full nonzero pattern of relator 1: (1,2,3), (3,2,1), (1,3,2), (2,3,1)
    nonzero_r1 = set()
    nonzero_r2 = set()
    for i in range(3):
        for j in range(3):
            for k in range(3):
                if trilinear_trace(t, chi[i], chi[j], chi[k], 1) == 1:
                    nonzero_r1.add((i + 1, j + 1, k + 1))
                if trilinear_trace(t, chi[i], chi[j], chi[k], 2) == 1:
                    nonzero_r2.add((i + 1, j + 1, k + 1))
    assert nonzero_r1 == {(1, 2, 3), (3, 2, 1), (1, 3, 2), (2, 3, 1)}
    assert nonzero_r2 == {(1, 3, 2), (2, 3, 1), (3, 1, 2), (2, 1, 3)}


def test_trace_errors():
    t = borromean_form()
    v = FpVector([1, 0, 0], 2)
    with pytest.raises(ValueError):
        trilinear_trace(t, v, v, FpVector([1, 0], 2), 1)
    with pytest.raises(ValueError):
        trilinear_trace(t, v, v, v, 3)
    with pytest.raises(ValueError):
        trilinear_trace(t, v, v, FpVector([1, 0, 0], 3), 1)


def test_trace_statement_equals_split():
    rng = np.random.default_rng(99)
    forms = [borromean_form()]
    # random tensors at p = 2 and p = 3, including k = j and k = i terms
    for p in (2, 3):
        for _ in range(6):
            n = int(rng.integers(3, 6))
            e = {}
            for _ in range(8):
                i = int(rng.integers(1, n))
                j = int(rng.integers(i + 1, n + 1))
                k = int(rng.integers(1, j + 1))
                m = int(rng.integers(1, 4))
                e[(i, j, k, m)] = int(rng.integers(1, p))
            forms.append(TrilinearForm(RamifiedRelatorData(n, e, r=3), p))
    checks = 0
    while checks < 10 ** 4:
        t = forms[int(rng.integers(0, len(forms)))]
        a, b, c = (
            FpVector(rng.integers(0, t.p, size=t.n), t.p) for _ in range(3)
        )
        m = int(rng.integers(1, t.relator_count + 1))
        assert trilinear_trace(t, a, b, c, m) == trilinear_trace_split(
            t, a, b, c, m
        )
        checks += 1


def test_trace_tensor_agrees():
    rng = np.random.default_rng(17)
    for t in (
        borromean_form(),
        TrilinearForm(
            RamifiedRelatorData(4, {(1, 3, 3, 1): 2, (2, 4, 2, 1): 1}, r=1), 3
        ),
    ):
        for m in range(1, t.relator_count + 1):
            T = trace_tensor(t, m)
            for _ in range(50):
                a, b, c = (
                    np.asarray(rng.integers(0, t.p, size=t.n)) for _ in range(3)
                )
                via_tensor = int(np.einsum("ijk,i,j,k->", T, a, b, c)) % t.p
                direct = trilinear_trace(
                    t,
                    FpVector(a, t.p),
                    FpVector(b, t.p),
                    FpVector(c, t.p),
                    m,
                )
                assert via_tensor == int(direct)


def proper_borromean_table():
    # distinct-index symbols are -1, repeated-index symbols are +1
    table = {
        "primes": [13, 61, 937],
        "symbols": [
            {"triple": [2, 3, 1], "value": -1},
            {"triple": [1, 3, 2], "value": -1},
            {"triple": [1, 2, 1], "value": 1},
            {"triple": [1, 2, 2], "value": 1},
            {"triple": [1, 3, 1], "value": 1},
            {"triple": [1, 3, 3], "value": 1},
            {"triple": [2, 3, 2], "value": 1},
            {"triple": [2, 3, 3], "value": 1},
        ],
    }
    return table


def test_redei_ingestion_borromean():
    data = ramified_from_redei(proper_borromean_table())
    assert data.n == 3 and data.r == 3
    assert data.e == {
        (2, 3, 1, 1): 1,
        (2, 3, 1, 3): 1,
        (1, 3, 2, 2): 1,
        (1, 3, 2, 3): 1,
    }
    # relators 1 and 2 match the two-relator preset; relator 3 is their product
    assert data.terms(1) == preset_tensor("borromean").terms(1)
    assert data.terms(2) == preset_tensor("borromean").terms(2)
    assert data.terms(3) == [(1, 3, 2, 1), (2, 3, 1, 1)]


def test_redei_ingestion_trivial():
    table = proper_borromean_table()
    for s in table["symbols"]:
        s["value"] = 1
    table["primes"] = [5, 101, 8081]
    data = ramified_from_redei(table)
    assert data.e == {}


def test_redei_validation():
    table = proper_borromean_table()
    table["symbols"] = table["symbols"][:-1]
    with pytest.raises(ValueError, match=r"\(2,3,3\)"):
        ramified_from_redei(table)
    with pytest.raises(ValueError, match="value"):
        ramified_from_redei(
            {"primes": [3, 5], "symbols": [{"triple": [1, 2, 1], "value": 0}]}
        )
    with pytest.raises(ValueError, match="triple"):
        ramified_from_redei(
            {"primes": [3, 5], "symbols": [{"triple": [1, 4, 1], "value": 1}]}
        )


def test_load_input_file_redei(tmp_path):
    import json

    f = tmp_path / "symbols.json"
    f.write_text(json.dumps(proper_borromean_table()))
    data = load_input_file(str(f))
    assert isinstance(data, RamifiedRelatorData)
    assert data.terms(1) == preset_tensor("borromean").terms(1)
