"""Counting-theory layer: spectra from the frequency vector alone,
periodic families, and the exact search."""

from fractions import Fraction

import numpy as np
import pytest

from conftest import (MIXED_PARITIES, random_generator,
                      random_precondition_generator)
from qcode import (FrequencyVector, GeneratorSpec, PreconditionError,
                   aliasing_exponent, analyze, build_design,
                   candidate_count, class_rhos, evaluate, fixed_point_7,
                   frequency_vector, generator_for_frequency,
                   parity_class_sums, periodic_extend, precondition_sums,
                   preconditions_met, search, spectrum_bruteforce,
                   theory_spectrum)

HALF = Fraction(1, 2)


def test_evaluate_frozen_design(f256, design256):
    ev = evaluate(f256)
    # C x F, which disagrees with the frozen K vector at the six
    # transposed cells; the frozen comparison lives in golden.verify
    assert list(ev.a_values) == design256[1]["A"]
    assert list(ev.k_values[:23]) == design256[1]["K"][:23]
    assert ev.k_values[23:30] == (6, 2, 6, 2, 4, 2, 6)


def test_evaluate_rejects_wrong_width(systems):
    with pytest.raises(ValueError):
        evaluate(FrequencyVector(2, (1,) + (0,) * 15), systems[3])


def test_precondition_sums(f256):
    sums = precondition_sums(f256)
    assert set(sums) == set(MIXED_PARITIES)
    assert all(v > 0 for v in sums.values())
    assert preconditions_met(f256)


def test_precondition_failure_names_patterns():
    counts = [0] * 64
    counts[21] = 2  # (1,1,1): all three mixed classes stay empty
    f = FrequencyVector(3, tuple(counts))
    assert not preconditions_met(f)
    with pytest.raises(PreconditionError, match="110.*101.*011"):
        theory_spectrum(f)


def test_aliasing_exponent():
    # q odd entries in the class, a the evaluated linear form
    assert aliasing_exponent(1, 2) == 1
    assert aliasing_exponent(2, 1) == 1
    assert aliasing_exponent(2, 3) == 2
    assert aliasing_exponent(3, 1) == 1
    assert aliasing_exponent(3, 3) == 2


def test_theory_spectrum_frozen_design(f256, design256):
    spec = theory_spectrum(f256)
    want = tuple((l, Fraction(r), c) for l, r, c in design256[1]["spectrum"])
    assert spec.entries == want
    rhos = class_rhos(f256)
    assert rhos == (HALF,) * 7


def test_parity_class_sums(f256, design256):
    sums = parity_class_sums(f256)
    assert [sums[pi] for pi in sorted(sums, key=lambda x: (sum(x), x))] \
        == design256[1]["A"]


def test_analyze_both_agree_on_frozen_design(design256):
    rep = analyze(design256[0], method="both")
    assert rep.method == "both"
    assert rep.preconditions_met
    assert str(rep.summary.resolution) == design256[1]["resolution"]


def test_analyze_p3_requires_preconditions_for_theory():
    g = GeneratorSpec(3, 3, ((1, 1, 1), (2, 0, 0), (0, 2, 2)))
    with pytest.raises(PreconditionError):
        analyze(g, method="theory")
    rep = analyze(g, method="bruteforce")
    assert not rep.preconditions_met
    assert rep.spectrum.is_dyadic()


def test_analyze_small_p_both(rng):
    for p in (1, 2):
        for _ in range(4):
            g = random_generator(rng, 3, p)
            rep = analyze(g, method="both")
            brute = spectrum_bruteforce(build_design(g),
                                        2 * g.n + 2 * g.p)
            assert rep.spectrum == brute


def test_theory_oracle_equivalence_random(rng):
    for _ in range(6):
        g = random_precondition_generator(rng, int(rng.integers(3, 5)))
        rep = analyze(g, method="both")
        assert rep.preconditions_met


def test_wordlength_parity_within_class(rng, systems):
    """All four length slots of a parity class share one parity."""
    sysm = systems[3]
    for _ in range(5):
        f = frequency_vector(random_precondition_generator(rng, 4))
        ev = evaluate(f, sysm)
        by_class = {}
        for w, k in zip(sysm.k_order, ev.k_values):
            pi = tuple(x % 2 for x in w)
            if not any(pi):
                continue
            const = sum(1 if x % 2 else x for x in w)
            by_class.setdefault(pi, set()).add((k + const) % 2)
        assert all(len(par) == 1 for par in by_class.values())


def test_gwlp_mass_law(rng):
    for _ in range(5):
        g = random_precondition_generator(rng, 4)
        rep = analyze(g, method="both")
        assert sum(rep.summary.gwlp) == 63


def test_column_permutation_invariance(rng):
    g = random_precondition_generator(rng, 4)
    perm = (2, 0, 1)
    gp = GeneratorSpec(g.n, g.p, tuple(tuple(row[j] for j in perm)
                                       for row in g.V))
    assert analyze(g).spectrum == analyze(gp).spectrum


def test_periodic_extension_frozen(f256, examples):
    ex = examples["periodic_extension"]
    fam = periodic_extend(f256, 1)
    assert list(fam.extended.counts) == ex["Ft"]
    assert fam.predicted_r == ex["r"]
    assert str(fam.predicted_rho) == ex["rho"]
    assert fixed_point_7(fam.predicted_resolution) \
        == ex["rendered_resolution"]


def test_periodic_extension_identity(f256):
    fam = periodic_extend(f256, 0)
    assert fam.extended.counts == f256.counts
    assert fam.predicted_r == 6
    assert fam.predicted_rho == HALF
    assert fam.predicted_resolution == Fraction(13, 2)


def test_shift_identities_random(rng, systems):
    sysm = systems[3]
    for _ in range(10):
        f0 = frequency_vector(random_precondition_generator(rng, 4))
        base = evaluate(f0, sysm)
        for t in (1, 2, 3):
            counts = tuple(c if i == 0 else c + t
                           for i, c in enumerate(f0.counts))
            shifted = evaluate(FrequencyVector(3, counts), sysm)
            assert all(b - a == 64 * t for a, b in
                       zip(base.k_values, shifted.k_values))
            assert all(b - a == 32 * t for a, b in
                       zip(base.a_values, shifted.a_values))


def test_fixed_point_7_rounding():
    assert fixed_point_7(Fraction(1, 2)) == "0.5000000"
    assert fixed_point_7(Fraction(13, 2)) == "6.5000000"
    # ties round to even in the last kept digit
    assert fixed_point_7(Fraction(1, 2 * 10 ** 7)) == "0.0000000"
    assert fixed_point_7(Fraction(3, 2 * 10 ** 7)) == "0.0000002"


def test_candidate_count():
    assert candidate_count(1, 1) == 3
    assert candidate_count(4, 3) == 720720


def test_search_tiny_exhaustive():
    results = search(1, 1, criterion="max_resolution", top=3)
    assert [f.counts for f, _ in results] == [(0, 0, 0, 1), (0, 1, 0, 0),
                                              (0, 0, 1, 0)]
    assert [str(r.summary.resolution) for _, r in results] == \
        ["4", "4", "3"]
    gma = search(1, 1, criterion="gma", top=1)
    assert gma[0][0].counts == (0, 0, 0, 1)


def test_search_budget_guard():
    from qcode import BudgetExceeded
    with pytest.raises(BudgetExceeded):
        search(9, 3)


def test_search_matches_direct_analysis(rng):
    results = search(2, 2, top=2)
    for f, rep in results:
        direct = analyze(generator_for_frequency(f), method="bruteforce")
        assert rep.spectrum == direct.spectrum


def test_search_rejects_large_p():
    with pytest.raises(ValueError):
        search(2, 4)
