import itertools
import random

from relcr import fixtures, representations
from relcr.acyclic import gyo_join_tree
from relcr.core import Signature, Structure, self_stp, stp


def slices_oracle(a):
    # all duplicate-free vectors over set(a), found the dumb way
    elems = set(a)
    out = set()
    for length in range(1, len(elems) + 1):
        for t in itertools.product(sorted(elems), repeat=length):
            if len(set(t)) == length:
                out.add(t)
    return out


def test_slices_against_bruteforce():
    rng = random.Random(0)
    for _ in range(200):
        a = tuple(rng.randrange(5) for _ in range(rng.randrange(1, 5)))
        got = representations.slices(a)
        assert len(got) == len(set(got))
        assert set(got) == slices_oracle(a)


def test_slices_enumeration_order():
    got = representations.slices((2, 1, 2))
    assert got == [(1,), (2,), (1, 2), (2, 1)]


def test_slice_example_slice_set():
    A = fixtures.slice_example()
    all_slices = set()
    for ref in A.tuple_refs:
        all_slices.update(representations.slices(A.vector(ref)))
    want = {(0,), (1,), (2,), (0, 1), (1, 0), (1, 2), (2, 1)}
    assert all_slices == want


def test_vgrep_of_slice_example_has_nine_nodes():
    A = fixtures.slice_example()
    g, node_of, slice_node_of = representations.vgrep(A)
    assert g.n == 2 + 7
    assert len(node_of) == 2 and len(slice_node_of) == 7


def test_grep_edge_symmetry_and_cohesion():
    for make in (fixtures.a1, fixtures.a2, fixtures.slice_example):
        A = make()
        g, node_of = representations.grep(A)
        pairs = set()
        for name, arr in g.edges.items():
            i, j = (int(x) for x in name.split("_")[1:])
            for v, w in arr.tolist():
                if v != w:
                    pairs.add((v, w))
                    assert g.has_edge(representations.overlap_label(j, i), w, v)
        assert len(pairs) == A.metrics()[1]


def test_grep_loops_encode_self_type():
    A = fixtures.slice_example()
    g, node_of = representations.grep(A)
    for ref in A.tuple_refs:
        vec = A.vector(ref)
        k = node_of[ref]
        loops = {
            tuple(int(x) for x in name.split("_")[1:])
            for name, arr in g.edges.items()
            if any(v == w == k for v, w in arr.tolist())}
        assert loops == set(self_stp(vec))


def test_vgrep_is_bipartite_with_neighbor_characterization():
    A = fixtures.a2()
    g, node_of, slice_node_of = representations.vgrep(A)
    nw = len(node_of)
    adj = g.gaifman_adjacency()
    for v, ws in adj.items():
        for w in ws:
            assert (v < nw) != (w < nw)
    for ref in A.tuple_refs:
        sa = set(representations.slices(A.vector(ref)))
        neighbors = {s for s, k in slice_node_of.items()
                     if nw + k in adj[node_of[ref]]}
        assert neighbors == sa


def test_distinct_slices_have_distinct_overlap_types():
    rng = random.Random(7)
    for _ in range(100):
        a = tuple(rng.randrange(4) for _ in range(rng.randrange(1, 5)))
        ss = representations.slices(a)
        types = [stp(a, s) for s in ss]
        assert len(set(types)) == len(types)


def test_slice_bijection_both_directions():
    rng = random.Random(11)
    for _ in range(300):
        k = rng.randrange(1, 5)
        a = tuple(rng.randrange(4) for _ in range(k))
        b = tuple(rng.randrange(4) for _ in range(k))
        pi = representations.slice_bijection(a, b)
        if self_stp(a) != self_stp(b):
            assert pi is None
            continue
        assert sorted(pi) == sorted(representations.slices(a))
        assert sorted(pi.values()) == sorted(representations.slices(b))
        for s, t in pi.items():
            assert stp(a, s) == stp(b, t)
            assert len(s) == len(t)
        # inclusion preservation and the round trip through the inverse
        inv = {t: s for s, t in pi.items()}
        for s1 in pi:
            assert inv[pi[s1]] == s1
            for s2 in pi:
                assert (set(s1) <= set(s2)) == (set(pi[s1]) <= set(pi[s2]))


def test_incidence_connects_elements_to_tuples():
    A = fixtures.slice_example()
    g = representations.incidence(A)
    assert g.n == A.n + A.size()
    for v, w in g.edges["E"].tolist():
        assert v < A.n <= w


def test_jtrep_single_tuple():
    A = Structure.from_named(Signature([("R", 3)]), [("R", ("a", "b", "a"))])
    J = gyo_join_tree(A)
    g, node_of = representations.jtrep(A, J)
    assert g.n == 1
    assert all(len(arr) == 0 or (arr[:, 0] == arr[:, 1]).all()
               for arr in g.edges.values())


def test_jtrep_gaifman_is_a_forest():
    A = fixtures.a1()
    J = gyo_join_tree(A)
    g, _ = representations.jtrep(A, J)
    adj = g.gaifman_adjacency()
    assert sum(len(ws) for ws in adj.values()) // 2 == len(J.edges)
