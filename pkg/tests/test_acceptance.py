"""End-to-end acceptance suite.

Each test covers one numbered criterion and prints a single pass/fail line
(run pytest with -s or check captured output).  Random corpora are seeded,
so every run exercises the same instances.
"""

import gc
import itertools
import math
import random
import time

from relcr import fixtures, generate, logic, representations
from relcr.acyclic import gyo_join_tree, random_acyclic
from relcr.core import Signature, Structure, self_stp, stp
from relcr.cr import cr_distinguishes, cr_run
from relcr.game import spoiler_wins
from relcr.homcount import hom_acyclic, hom_bruteforce, hom_multigraph
from relcr.rcr import rcr_compare, rcr_distinguishes, rcr_run

SIG3 = Signature([("R", 3), ("E", 2)])
SIG4 = Signature([("Q", 4), ("R", 3), ("E", 2)])


def report(num, ok, detail):
    print("criterion %d: %s — %s" % (num, "PASS" if ok else "FAIL", detail))
    assert ok, "criterion %d: %s" % (num, detail)


def blocks(values):
    out = {}
    for k, c in enumerate(values):
        out.setdefault(c, set()).add(k)
    return frozenset(frozenset(b) for b in out.values())


def test_criterion_01_cycle_fixtures():
    t0 = time.monotonic()
    res = rcr_compare(fixtures.a1(), fixtures.b1())
    ha0 = res.side_histogram(0, "A")
    hb0 = res.side_histogram(0, "B")
    ha1 = res.side_histogram(1, "A")
    hb1 = res.side_histogram(1, "B")
    ok = (res.round == 1
          and ha0 == hb0
          and sorted(ha0.values()) == [1, 6]
          and sorted(ha1.values()) == [1] * 7
          and sorted(hb1.values()) == [1] * 7)
    dt = time.monotonic() - t0
    ok = ok and dt < 1.0
    report(1, ok, "distinguished in round %s, %.3fs" % (res.round, dt))


def test_criterion_02_overlap_fixtures():
    t0 = time.monotonic()
    A2, B2 = fixtures.a2(), fixtures.b2()
    rcr = rcr_distinguishes(A2, B2)
    eg = cr_distinguishes(representations.enriched_gaifman(A2),
                          representations.enriched_gaifman(B2))
    ei = cr_distinguishes(representations.enriched_incidence(A2),
                          representations.enriched_incidence(B2))
    dt = time.monotonic() - t0
    ok = rcr is not None and eg is None and ei is None and dt < 1.0
    report(2, ok, "rcr=%s enriched-gaifman=%s enriched-incidence=%s, %.3fs"
           % (rcr, eg, ei, dt))


def test_criterion_03_fixture_hom_counts():
    t0 = time.monotonic()
    A1, B1 = fixtures.a1(), fixtures.b1()
    J = gyo_join_tree(A1)
    ab = (hom_bruteforce(A1, B1), hom_acyclic(A1, J, B1))
    aa = (hom_bruteforce(A1, A1), hom_acyclic(A1, J, A1))
    dt = time.monotonic() - t0
    ok = ab == (0, 0) and aa[0] == aa[1] >= 1 and dt < 5.0
    report(3, ok, "hom(A1,B1)=%s hom(A1,A1)=%s, %.3fs" % (ab, aa, dt))


def test_criterion_04_three_hom_engines():
    t0 = time.monotonic()
    rng = random.Random(40)
    mismatches = 0
    for _ in range(300):
        C, J = random_acyclic(SIG3, rng.randint(1, 4), rng.getrandbits(40))
        A = generate.random_structure(
            SIG3, rng.randint(3, 8),
            {"R": rng.randint(1, 4), "E": rng.randint(1, 4)},
            rng.getrandbits(40))
        brute = hom_bruteforce(C, A)
        dp = hom_acyclic(C, J, A)
        mg = hom_multigraph(representations.jtrep(C, J)[0],
                            representations.grep(A)[0])
        if not brute == dp == mg:
            mismatches += 1
    dt = time.monotonic() - t0
    ok = mismatches == 0 and dt < 60.0
    report(4, ok, "300 triples, %d mismatches, %.1fs" % (mismatches, dt))


def _random_sig4(rng):
    n = rng.randint(3, 12)
    total = rng.randint(2, 30)
    q = rng.randint(0, min(4, total))
    r = rng.randint(0, min(8, total - q))
    e = min(max(1, total - q - r), n * n)
    return generate.random_structure(
        SIG4, n, {"Q": q, "R": r, "E": e}, rng.getrandbits(40))


def test_criterion_05_vgrep_round_correspondence():
    t0 = time.monotonic()
    rng = random.Random(50)
    mismatches = 0
    for _ in range(500):
        A = _random_sig4(rng)
        trace = rcr_run(A)
        g, node_of, _ = representations.vgrep(A)
        nc = cr_run(g)
        wnodes = [node_of[r] for r in A.tuple_refs]
        for i in range(trace.stable_round + 1):
            cols = nc.colors_at(2 * i + 1)
            if blocks([cols[w] for w in wnodes]) != blocks(trace.colors_at(i)):
                mismatches += 1
                break
    dt = time.monotonic() - t0
    ok = mismatches == 0 and dt < 120.0
    report(5, ok, "500 structures, %d mismatches, %.1fs" % (mismatches, dt))


def test_criterion_06_grep_correspondence_and_graph_cr():
    t0 = time.monotonic()
    rng = random.Random(50)   # same corpus as criterion 5
    mismatches = 0
    for _ in range(500):
        A = _random_sig4(rng)
        trace = rcr_run(A)
        g, node_of = representations.grep(A)
        nc = cr_run(g)
        wnodes = [node_of[r] for r in A.tuple_refs]
        for i in range(trace.stable_round + 1):
            cols = nc.colors_at(i)
            if blocks([cols[w] for w in wnodes]) != blocks(trace.colors_at(i)):
                mismatches += 1
                break

    rng = random.Random(60)
    graph_mismatches = 0
    for _ in range(200):
        n = rng.randint(2, 25)
        G = generate.random_graph_structure(n, rng.uniform(0.1, 0.7),
                                            rng.getrandbits(40))
        trace = rcr_run(G)
        stable = trace.colors_at(trace.stable_round)
        ours = {}
        for r in G.tuple_refs:
            if r.relation == "U":
                ours.setdefault(stable[G.tuple_pos[r]], set()).add(
                    G.relations["U"][r.index][0])
        adj = {v: set() for v in range(G.n)}
        for (u, v) in G.relations["E"]:
            adj[u].add(v)
            adj[v].add(u)
        col = {v: 0 for v in range(G.n)}
        while True:
            key = {v: (col[v], tuple(sorted(col[w] for w in adj[v])))
                   for v in adj}
            ids = {k: i for i, k in enumerate(sorted(set(key.values())))}
            nxt = {v: ids[key[v]] for v in adj}
            if len(set(nxt.values())) == len(set(col.values())):
                break
            col = nxt
        theirs = {}
        for v, c in col.items():
            theirs.setdefault(c, set()).add(v)
        if (frozenset(frozenset(b) for b in ours.values())
                != frozenset(frozenset(b) for b in theirs.values())):
            graph_mismatches += 1
    dt = time.monotonic() - t0
    ok = mismatches == 0 and graph_mismatches == 0 and dt < 60.0
    report(6, ok, "grep %d mismatches, graphs %d mismatches, %.1fs"
           % (mismatches, graph_mismatches, dt))


def _random_pair(rng):
    na = {"R": rng.randint(0, 3), "E": rng.randint(1, 3)}
    A = generate.random_structure(SIG3, rng.randint(3, 6), na,
                                  rng.getrandbits(40))
    if rng.random() < 0.7:
        B = generate.random_structure_like(A, rng.getrandbits(40))
    else:
        nb = {"R": rng.randint(0, 3), "E": rng.randint(1, 3)}
        B = generate.random_structure(SIG3, rng.randint(3, 6), nb,
                                      rng.getrandbits(40))
    return A, B


def test_criterion_07_three_way_agreement():
    t0 = time.monotonic()
    rng = random.Random(70)
    violations = 0
    for _ in range(200):
        A, B = _random_pair(rng)
        refined = rcr_distinguishes(A, B) is not None
        game, _ = spoiler_wins(A, B)
        sent = logic.distinguishing_sentence(A, B)
        if not (refined == game == (sent is not None)):
            violations += 1
            continue
        if sent is not None:
            f, side = sent
            hold, other = (A, B) if side == "A" else (B, A)
            if not (logic.evaluate(f, hold, {})
                    and not logic.evaluate(f, other, {})):
                violations += 1
    dt = time.monotonic() - t0
    ok = violations == 0 and dt < 600.0
    report(7, ok, "200 pairs, %d violations, %.1fs" % (violations, dt))


def test_criterion_08_color_formulas():
    t0 = time.monotonic()
    rng = random.Random(80)
    mismatches = 0
    cases = 0
    while cases < 200:
        A = generate.random_structure(
            SIG3, rng.randint(3, 6),
            {"R": rng.randint(0, 3), "E": rng.randint(1, 3)},
            rng.getrandbits(40))
        B = generate.random_structure_like(A, rng.getrandbits(40))
        res = rcr_compare(A, B)
        ctx = logic.SynthesisContext(res.trace)
        ev = logic.Evaluator(res.union)
        i = rng.randint(0, res.trace.stable_round)
        cols = res.trace.colors_at(i)
        c = rng.choice(sorted(set(cols)))
        k = ctx.color_arity(c)
        xv = tuple("y%d" % j for j in range(1, k + 1))
        f = ctx.formula(i, c, xv)
        for p, ref in enumerate(res.union.tuple_refs):
            vec = res.union.vector(ref)
            if len(vec) != k:
                continue
            if ev.holds(f, dict(zip(xv, vec))) != (cols[p] == c):
                mismatches += 1
                break
        cases += 1
    dt = time.monotonic() - t0
    ok = mismatches == 0 and dt < 600.0
    report(8, ok, "200 colors, %d mismatches, %.1fs" % (mismatches, dt))


def _sub_structure(A, refs):
    facts = [(r.relation, [A.element_names[x] for x in A.vector(r)])
             for r in refs]
    return Structure.from_named(A.signature, facts)


def _connected(A):
    adj = A.gaifman()
    if A.n == 0:
        return False
    seen = {0}
    stack = [0]
    while stack:
        for w in adj[stack.pop()]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == A.n


def _candidate_patterns(A, B, rng, budget=40):
    for side in (A, B):
        refs = side.tuple_refs
        for size in (1, 2, 3):
            for combo in itertools.combinations(refs, size):
                C = _sub_structure(side, combo)
                if _connected(C) and gyo_join_tree(C) is not None:
                    yield C
    for _ in range(budget):
        yield random_acyclic(SIG3, rng.randint(1, 5), rng.getrandbits(40))[0]


def test_criterion_09_hom_counts_vs_refinement():
    t0 = time.monotonic()
    rng = random.Random(90)
    # forward: a separating acyclic connected pattern implies refinement
    # tells the pair apart
    forward = 0
    violations = 0
    while forward < 100:
        A, B = _random_pair(rng)
        C, J = random_acyclic(SIG3, rng.randint(1, 5), rng.getrandbits(40))
        if hom_bruteforce(C, A) != hom_bruteforce(C, B):
            forward += 1
            if rcr_distinguishes(A, B) is None:
                violations += 1

    # converse: budgeted search for a separating pattern; misses are logged,
    # not failed (the search space is unbounded in principle)
    hits = 0
    total = 0
    misses = []
    while total < 50:
        A, B = _random_pair(rng)
        if A.size() > 5 or B.size() > 5:
            continue
        if rcr_distinguishes(A, B) is None:
            continue
        total += 1
        for C in _candidate_patterns(A, B, rng):
            if hom_bruteforce(C, A) != hom_bruteforce(C, B):
                hits += 1
                break
        else:
            misses.append((A, B))
    for A, B in misses:
        print("criterion 9 miss: no separating pattern found for %r / %r"
              % (A, B))
    rate = hits / total
    dt = time.monotonic() - t0
    ok = violations == 0 and rate >= 0.9
    report(9, ok, "forward 100/100 ok=%s, converse hit-rate %.0f%% (%d/%d), %.1fs"
           % (violations == 0, 100 * rate, hits, total, dt))


def test_criterion_10_scaling():
    from relcr.cli import bench_once
    t0 = time.monotonic()
    sizes = [1000, 2000, 4000, 8000, 16000, 32000, 64000, 100000]
    bench_once(1000, 7)  # warm-up
    times = []
    for n in sizes:
        # the small sizes run in milliseconds where scheduler jitter swamps
        # the signal; take the best of several collected runs
        reps = 7 if n <= 8000 else 3
        best = math.inf
        for _ in range(reps):
            gc.collect()
            best = min(best, bench_once(n, 7))
        times.append(best)
    ratios = [times[i + 1] / times[i] for i in range(len(times) - 1)]
    dt = time.monotonic() - t0
    ok = all(r <= 2.6 for r in ratios) and dt < 300.0
    report(10, ok, "ratios %s, %.0fs"
           % (["%.2f" % r for r in ratios], dt))


def test_criterion_11_slice_fixture():
    A = fixtures.slice_example()
    g, node_of, slice_node_of = representations.vgrep(A)
    name = {i: n for n, i in enumerate(A.element_names)}
    want = {("1",), ("2",), ("3",), ("1", "2"), ("2", "1"), ("2", "3"),
            ("3", "2")}
    got = {tuple(A.element_names[x] for x in s) for s in slice_node_of}
    ok = g.n == 9 and got == want
    report(11, ok, "vgrep has %d nodes, slice set %s" % (g.n, sorted(got)))


def test_criterion_12_slice_lemmas():
    t0 = time.monotonic()
    rng = random.Random(120)
    violations = 0
    for _ in range(10 ** 4):
        k = rng.randint(1, 5)
        a = tuple(rng.randrange(5) for _ in range(k))
        b = tuple(rng.randrange(5) for _ in range(k))
        if bool(stp(a, b)) != bool(set(a) & set(b)):
            violations += 1
            continue
        sa = representations.slices(a)
        if len({stp(a, s) for s in sa}) != len(sa):
            violations += 1
            continue
        pi = representations.slice_bijection(a, b)
        if (pi is None) != (self_stp(a) != self_stp(b)):
            violations += 1
            continue
        if pi is None:
            continue
        inv = {t: s for s, t in pi.items()}
        for s in sa:
            if stp(a, s) != stp(b, pi[s]) or len(pi[s]) != len(s):
                violations += 1
                break
            if inv[pi[s]] != s:
                violations += 1
                break
        else:
            s1, s2 = rng.choice(sa), rng.choice(sa)
            if (set(s1) <= set(s2)) != (set(pi[s1]) <= set(pi[s2])):
                violations += 1
    dt = time.monotonic() - t0
    ok = violations == 0 and dt < 30.0
    report(12, ok, "10^4 instances, %d violations, %.1fs" % (violations, dt))
