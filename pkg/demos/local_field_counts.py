#!/usr/bin/env python3
"""Walk through the unipotent extension census for the 2-adic field Q_2."""

import time

from massey_census import (
    aut_order,
    count_epi_bruteforce,
    demushkin_presentation,
    epi_count,
    local_field_model,
    nu_extensions,
    nu_local_closed,
    tmp_enumerate,
    z1_closed,
)


def main():
    p = 2

    # The maximal pro-2 quotient of the absolute Galois group of Q_2 is a
    # one-relator group of rank 3 whose relator is determined by q = 2.
    model = local_field_model(1, 2, 2)
    print(f"group model for Q_2: {model.describe()}")

    count, triples = tmp_enumerate(model, p, want_list=True)
    print(f"\nindependent character triples with vanishing consecutive cups: "
          f"{count}")
    for t in triples[:4]:
        print(f"    x={t.x.entries} y={t.y.entries} z={t.z.entries}")
    print("    ...")

    per_triple = z1_closed(model, p, "noncentral")
    print(f"\neach triple admits {per_triple} lifts to U_4(F_2), so the "
          f"closed census gives {count} * {per_triple} = "
          f"{count * per_triple} surjections")

    report = epi_count(model, p)
    t0 = time.monotonic()
    brute = count_epi_bruteforce(
        demushkin_presentation(3, 2, 2, "D2", f="inf"), 4, p
    )
    elapsed = time.monotonic() - t0
    assert report.epi == brute == count * per_triple
    print(f"the brute-force oracle scanned all 2^18 assignments in "
          f"{elapsed:.2f}s and agrees: {brute}")

    autos = aut_order(4, p)
    print(f"\ndividing by |Aut U_4(F_2)| = {autos} counts the Galois "
          f"extensions themselves:")
    for target in (2, 3, 4):
        nu = nu_extensions(model, p, target=target).nu
        print(f"    nu(Q_2, U_{target}(F_2)) = {nu}")

    print("\nthe same counts from the closed formulas, across base fields:")
    print(f"    {'field':<22}{'U_2':>8} {'U_3':>10} {'U_4':>16}")
    rows = [
        ("Q_2", 1, 2, 2),
        ("ramified quad. / Q_2", 2, 2, 2),
        ("Q_2(zeta_4)", 2, 2, 4),
        ("cubic / Q_2", 3, 2, 2),
        ("Q_3(zeta_3)", 2, 3, 3),
        ("Q_5(zeta_5)", 4, 5, 5),
    ]
    for name, degree, base_p, q in rows:
        vals = [nu_local_closed(degree, base_p, q, target)
                for target in (2, 3, 4)]
        print(f"    {name:<22}{vals[0]:>8} {vals[1]:>10} {vals[2]:>16}")


if __name__ == "__main__":
    main()
