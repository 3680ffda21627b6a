"""Tests for words, presentations, and the standard relator families."""

import json

import numpy as np
import pytest

from massey_census import words
from massey_census.unipotent import (
    P_INFINITY,
    ExponentToken,
    UniMatrix,
    enumerate_group,
    group_mul,
)
from massey_census.words import (
    Comm,
    Gen,
    Pow,
    Presentation,
    Prod,
    QInvariant,
    RamifiedRelatorData,
    demushkin_presentation,
    evaluate_word,
    free_presentation,
    free_product,
    load_presentation_file,
    max_generator,
    preset,
    preset_tensor,
    q_value,
    ramified_presentation,
    word_from_json,
    word_to_json,
)


def test_word_equality_and_validation():
    w = Comm(Comm(Gen(2), Gen(3)), Gen(1))
    assert w == Comm(Comm(Gen(2), Gen(3)), Gen(1))
    assert w != Comm(Gen(2), Gen(3))
    assert max_generator(w) == 3
    assert max_generator(Prod()) == 0
    with pytest.raises(ValueError):
        Gen(0)
    with pytest.raises(TypeError):
        Prod(Gen(1), "x2")


def test_evaluate_commutator_hand_value():
    # [x1, x2] with x1 = I + E12, x2 = I + E23 lands on I + E13
    x1 = UniMatrix.from_entry_map(4, 2, {(1, 2): 1})
    x2 = UniMatrix.from_entry_map(4, 2, {(2, 3): 1})
    val = evaluate_word(Comm(Gen(1), Gen(2)), [x1, x2])
    assert val == UniMatrix.from_entry_map(4, 2, {(1, 3): 1})
    ident = UniMatrix.identity(4, 2)
    assert evaluate_word(Comm(Gen(1), Gen(2)), [ident, ident]) == ident
    assert evaluate_word(Pow(Gen(1), P_INFINITY), [x1]) == ident
    assert evaluate_word(Prod(), [x1]) == ident


def test_evaluate_errors():
    x = UniMatrix.identity(3, 2)
    with pytest.raises(ValueError):
        evaluate_word(Gen(2), [x])
    with pytest.raises(ValueError):
        evaluate_word(Gen(1), [])


def test_prod_slot_homomorphism():
    # evaluate(Prod(a, b)) = evaluate(a) * evaluate(b), exhaustively over
    # image pairs in U_3(F_2) for a few random word shapes
    rng = np.random.default_rng(11)

    def random_word(depth=2):
        kind = rng.integers(0, 4)
        if depth == 0 or kind == 0:
            return Gen(int(rng.integers(1, 3)))
        if kind == 1:
            return Prod([random_word(depth - 1) for _ in range(rng.integers(0, 3))])
        if kind == 2:
            return Pow(random_word(depth - 1), int(rng.integers(-2, 4)))
        return Comm(random_word(depth - 1), random_word(depth - 1))

    elems = list(enumerate_group(3, 2))
    for _ in range(6):
        a, b = random_word(), random_word()
        for g1 in elems:
            for g2 in elems:
                images = [g1, g2]
                lhs = evaluate_word(Prod(a, b), images)
                rhs = group_mul(
                    evaluate_word(a, images), evaluate_word(b, images)
                )
                assert lhs == rhs


def test_q_value():
    assert q_value(4, 2) == 4
    assert q_value(0, 2) == 0
    assert q_value("inf", 5) == 0
    assert q_value(QInvariant.finite(2), 2) == 4
    assert q_value(QInvariant.infinite(), 3) == 0
    with pytest.raises(ValueError):
        q_value(6, 2)
    with pytest.raises(ValueError):
        q_value(1, 2)
    with pytest.raises(ValueError):
        q_value(9, 3) and q_value(3, 2)
    with pytest.raises(ValueError):
        QInvariant(0)


def test_demushkin_d1():
    pres = demushkin_presentation(4, 2, 4, "D1")
    assert pres.rank == 4
    assert pres.relators == (
        Prod(
            Pow(Gen(1), 4),
            Comm(Gen(1), Gen(2)),
            Comm(Gen(3), Gen(4)),
        ),
    )
    assert pres.tag["case"] == "D1" and pres.tag["q"] == 4
    # q accepted as a QInvariant too
    assert demushkin_presentation(4, 2, QInvariant.finite(2), "D1") == pres
    # infinite q gives an identity power factor
    pinf = demushkin_presentation(2, 3, "inf", "D1")
    assert pinf.relators[0].factors[0] == Pow(Gen(1), P_INFINITY)


def test_demushkin_d2():
    pres = demushkin_presentation(3, 2, 2, "D2", f="inf")
    # x1^2 x2^{2^inf} [x2,x3]: the x2 factor is a p-infinity power
    assert pres.relators == (
        Prod(
            Pow(Gen(1), 2),
            Pow(Gen(2), P_INFINITY),
            Comm(Gen(2), Gen(3)),
        ),
    )
    assert pres.tag["f"] is None
    p2 = demushkin_presentation(3, 2, 2, "D2", f=2)
    assert p2.relators[0].factors[1] == Pow(Gen(2), 4)
    p5 = demushkin_presentation(5, 2, 2, "D2", f=3)
    assert p5.relators[0].factors[2:] == (
        Comm(Gen(2), Gen(3)),
        Comm(Gen(4), Gen(5)),
    )


def test_demushkin_d3_d4():
    p3 = demushkin_presentation(4, 2, 2, "D3", f=2)
    assert p3.relators[0].factors[0] == Pow(Gen(1), 6)  # 2 + 2^2
    p3i = demushkin_presentation(4, 2, 2, "D3", f="inf")
    assert p3i.relators[0].factors[0] == Pow(Gen(1), 2)  # 2 + 0
    p4 = demushkin_presentation(4, 2, 2, "D4", f=2)
    assert p4.relators == (
        Prod(
            Pow(Gen(1), 2),
            Comm(Gen(1), Gen(2)),
            Pow(Gen(3), 4),
            Comm(Gen(3), Gen(4)),
        ),
    )


def test_demushkin_constraint_errors():
    with pytest.raises(ValueError):
        demushkin_presentation(3, 3, 3, "D1")  # d odd
    with pytest.raises(ValueError):
        demushkin_presentation(4, 2, 2, "D1")  # q = 2 not allowed in D1
    with pytest.raises(ValueError):
        demushkin_presentation(4, 2, 2, "D2")  # d must be odd
    with pytest.raises(ValueError):
        demushkin_presentation(3, 3, 3, "D2")  # p must be 2
    with pytest.raises(ValueError):
        demushkin_presentation(3, 2, 2, "D2", f=1)  # f >= 2
    with pytest.raises(ValueError):
        demushkin_presentation(3, 2, 2, "D2")  # f required
    with pytest.raises(ValueError):
        demushkin_presentation(4, 2, 2, "D4", f="inf")  # f finite in D4
    with pytest.raises(ValueError):
        demushkin_presentation(2, 2, 2, "D4", f=2)  # d >= 4
    with pytest.raises(ValueError):
        demushkin_presentation(4, 2, 4, "D9")


def test_relator_f_independence_in_u4_f2():
    # with f >= 2, 2^f = 0 mod 4, and every element of U_4(F_2) has order
    # dividing 4 -- so the relator kernel cannot depend on the finite f.
    # Exhaustive check at d=3 via the vectorized evaluator would be overkill
    # here; sampled word evaluation plus the exponent argument covers it.
    rng = np.random.default_rng(12)
    variants = [
        demushkin_presentation(3, 2, 2, "D2", f=f) for f in (2, 3, "inf")
    ]
    t = 6  # entries of U_4
    for _ in range(200):
        images = [UniMatrix(4, 2, rng.integers(0, 2, size=t)) for _ in range(3)]
        values = {
            evaluate_word(v.relators[0], images) for v in variants
        }
        assert len(values) == 1


def test_free_product_shifts():
    dem = demushkin_presentation(3, 2, 2, "D2", f="inf")
    combo = free_product([dem, free_presentation(2)])
    assert combo.rank == 5
    assert len(combo.relators) == 1
    assert max_generator(combo.relators[0]) == 3
    combo2 = free_product([free_presentation(2), dem])
    # the relator now lives in generators 3..5
    assert combo2.relators[0] == words._shift_word(dem.relators[0], 2)
    assert max_generator(combo2.relators[0]) == 5
    assert combo.tag["kind"] == "free_product"


def test_presets():
    b = preset("borromean")
    assert b.rank == 3 and len(b.relators) == 2
    assert b.relators[0] == Comm(Comm(Gen(2), Gen(3)), Gen(1))
    assert b.relators[1] == Comm(Comm(Gen(1), Gen(3)), Gen(2))
    r = preset("ram01")
    assert r.rank == 3 and len(r.relators) == 0
    c = preset("counterexample1")
    assert c.rank == 4 and len(c.relators) == 1
    with pytest.raises(ValueError):
        preset("nope")


def test_preset_tensors_match_presets():
    for name in ("borromean", "counterexample1"):
        data = preset_tensor(name)
        pres = ramified_presentation(data, 2)
        expect = preset(name)
        assert pres.rank == expect.rank
        assert pres.relators == expect.relators
    assert preset_tensor("ram01").e == {}
    assert ramified_presentation(preset_tensor("ram01"), 2).relators == ()


def test_ramified_data_validation():
    with pytest.raises(ValueError):
        RamifiedRelatorData(3, {(2, 1, 1, 1): 1})  # needs i < j
    with pytest.raises(ValueError):
        RamifiedRelatorData(3, {(1, 2, 3, 1): 1})  # k <= j
    with pytest.raises(ValueError):
        RamifiedRelatorData(3, {(1, 2, 1, 2): 1}, r=1)  # m beyond r
    data = RamifiedRelatorData(3, {(1, 3, 2, 1): 2, (1, 2, 1, 1): 0})
    assert data.terms(1) == [(1, 3, 2, 2)]
    # exponents reduce mod p at presentation time
    pres = ramified_presentation(data, 2)
    assert pres.relators == ()
    pres3 = ramified_presentation(data, 3)
    assert pres3.relators == (
        Pow(Comm(Comm(Gen(1), Gen(3)), Gen(2)), 2),
    )


def test_word_json_roundtrip():
    w = Prod(
        Pow(Gen(1), 4),
        Comm(Comm(Gen(2), Gen(3)), Gen(1)),
        Pow(Gen(2), P_INFINITY),
    )
    assert word_from_json(word_to_json(w)) == w
    assert word_to_json(Pow(Gen(1), P_INFINITY)) == ["pow", ["gen", 1], "p-inf"]


def test_word_json_errors():
    with pytest.raises(ValueError, match="gen"):
        word_from_json(["gen", "one"])
    with pytest.raises(ValueError, match=r"relator\b|word"):
        word_from_json([])
    with pytest.raises(ValueError, match=r"word\.comm\[1\]"):
        word_from_json(["comm", ["gen", 1], ["zen", 2]])
    with pytest.raises(ValueError, match="p-inf"):
        word_from_json(["pow", ["gen", 1], 1.5])


def test_presentation_file_loading(tmp_path):
    f = tmp_path / "pres.json"
    f.write_text(
        json.dumps(
            {
                "rank": 3,
                "relators": [
                    ["comm", ["comm", ["gen", 2], ["gen", 3]], ["gen", 1]],
                    ["comm", ["comm", ["gen", 1], ["gen", 3]], ["gen", 2]],
                ],
            }
        )
    )
    pres = load_presentation_file(str(f))
    assert isinstance(pres, Presentation)
    assert pres.relators == preset("borromean").relators

    g = tmp_path / "preset.json"
    g.write_text(json.dumps({"preset": "ram01"}))
    assert load_presentation_file(str(g)).rank == 3

    t = tmp_path / "tensor.json"
    t.write_text(
        json.dumps(
            {
                "n": 3,
                "relators": [
                    {"m": 1, "terms": [{"i": 2, "j": 3, "k": 1, "e": 1}]},
                    {"m": 2, "terms": [{"i": 1, "j": 3, "k": 2, "e": 1}]},
                ],
            }
        )
    )
    data = load_presentation_file(str(t))
    assert isinstance(data, RamifiedRelatorData)
    assert data == preset_tensor("borromean")

    bad = tmp_path / "bad.json"
    bad.write_text("{\"rank\": 3,,}")
    with pytest.raises(ValueError, match="line 1"):
        load_presentation_file(str(bad))

    badrel = tmp_path / "badrel.json"
    badrel.write_text(json.dumps({"rank": 2, "relators": [["gen", 5]]}))
    with pytest.raises(ValueError, match="beyond rank"):
        load_presentation_file(str(badrel))


def test_presentation_validation():
    with pytest.raises(ValueError):
        Presentation(0)
    with pytest.raises(ValueError):
        Presentation(2, [Gen(3)])
    p = Presentation(2, [Comm(Gen(1), Gen(2))])
    assert p.tag == {"kind": "custom"}
