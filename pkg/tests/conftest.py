import itertools
from collections import deque

import numpy as np
import pytest

from transclust import UndirectedGraph

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def graph_from_pairs(n, pairs):
    pairs = list(pairs)
    return UndirectedGraph.from_edges(n, [a for a, _ in pairs], [b for _, b in pairs])


def complete(n):
    return graph_from_pairs(n, itertools.combinations(range(n), 2))


def bridged_k4s():
    k4 = list(itertools.combinations(range(4), 2))
    return graph_from_pairs(8, k4 + [(a + 4, b + 4) for a, b in k4] + [(3, 4)])


def random_graph(rng, n, p):
    a = np.triu(rng.random((n, n)) < p, 1)
    return UndirectedGraph.from_dense(a)


def brute_components(n, pairs):
    """Connected components by plain BFS, as a set of frozensets."""
    adj = [[] for _ in range(n)]
    for a, b in pairs:
        adj[a].append(b)
        adj[b].append(a)
    seen = [False] * n
    comps = set()
    for s in range(n):
        if seen[s]:
            continue
        seen[s] = True
        comp, q = [s], deque([s])
        while q:
            x = q.popleft()
            for y in adj[x]:
                if not seen[y]:
                    seen[y] = True
                    comp.append(y)
                    q.append(y)
        comps.add(frozenset(comp))
    return comps


@pytest.fixture
def k3():
    return complete(3)


@pytest.fixture
def k4():
    return complete(4)


@pytest.fixture
def bridged():
    return bridged_k4s()


@pytest.fixture
def pendant():
    return graph_from_pairs(4, [(0, 1), (1, 2), (2, 0), (2, 3)])
