import pytest

from relcr import fixtures, generate, representations
from relcr.acyclic import gyo_join_tree, random_acyclic
from relcr.core import Signature, Structure
from relcr.homcount import (TooLargeError, hom_acyclic, hom_bruteforce,
                            hom_multigraph)

SIG_E = Signature([("E", 2)])
SIG_RE = Signature([("R", 3), ("E", 2)])


def directed_path(k):
    return Structure.from_named(
        SIG_E, [("E", (str(i), str(i + 1))) for i in range(k)])


def directed_cycle(n):
    return Structure.from_named(
        SIG_E, [("E", (str(i), str((i + 1) % n))) for i in range(n)])


def test_path_into_cycle_closed_form():
    # walks of length k around a directed n-cycle: one per starting vertex
    for k in (1, 2, 3):
        for n in (3, 4, 5):
            assert hom_bruteforce(directed_path(k), directed_cycle(n)) == n


def test_single_tuple_counts_rows():
    C = Structure.from_named(fixtures.SIG_CYCLES, [("E", ("x", "y"))])
    A = fixtures.a1()
    # distinct-element single tuple: one hom per E-row of the target
    count = hom_bruteforce(C, A)
    assert count == len(A.relations["E"])


def test_hom_to_itself_is_positive():
    A = fixtures.a1()
    assert hom_bruteforce(A, A) >= 1


def test_no_hom_between_the_cycle_fixtures():
    assert hom_bruteforce(fixtures.a1(), fixtures.b1()) == 0


def test_guard_rejects_huge_instances():
    C = generate.random_graph_structure(30, 0.2, 0)
    A = generate.random_graph_structure(30, 0.2, 1)
    with pytest.raises(TooLargeError):
        hom_bruteforce(C, A)


def test_signature_mismatch_rejected():
    with pytest.raises(ValueError):
        hom_bruteforce(fixtures.a1(), fixtures.a2())


def test_acyclic_dp_matches_bruteforce():
    for seed in range(40):
        C, J = random_acyclic(SIG_RE, 3, seed)
        A = generate.random_structure(SIG_RE, 6, {"R": 4, "E": 4}, seed + 1000)
        assert hom_acyclic(C, J, A) == hom_bruteforce(C, A)


def test_multigraph_count_matches_bruteforce():
    for seed in range(40):
        C, J = random_acyclic(SIG_RE, 3, seed)
        A = generate.random_structure(SIG_RE, 6, {"R": 4, "E": 4}, seed + 2000)
        T, _ = representations.jtrep(C, J)
        G, _ = representations.grep(A)
        assert hom_multigraph(T, G) == hom_bruteforce(C, A)


def test_multigraph_rejects_cyclic_pattern():
    tri, _ = representations.grep(directed_cycle(3))
    with pytest.raises(ValueError):
        hom_multigraph(tri, tri)


def test_dp_handles_repeated_elements():
    C = Structure.from_named(SIG_E, [("E", ("x", "x"))])
    J = gyo_join_tree(C)
    A = directed_cycle(3)
    assert hom_acyclic(C, J, A) == hom_bruteforce(C, A) == 0
    loopy = Structure.from_named(SIG_E, [("E", ("a", "a")), ("E", ("a", "b"))])
    assert hom_acyclic(C, J, loopy) == hom_bruteforce(C, loopy) == 1
