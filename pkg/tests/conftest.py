import itertools
import random

import pytest

from flatkern.diagram import Matching, SeparatrixDiagram, metric_feasible
from flatkern.enumerator import enumerate_stable_prediagrams


def random_stable_diagrams(count: int, seed: int = 20240801):
    """Valid stable connected-surface diagrams with rational witness metrics.

    Classes come from the stable enumeration over a few small strata; each
    draw relabels the ends and picks a random feasible connected matching.
    """
    rng = random.Random(seed)
    pool = []
    for kappa in [(0,), (1,), (1, 1), (2,), (0, 0), (2, 1)]:
        pool.extend(enumerate_stable_prediagrams(kappa))
    out = []
    attempts = 0
    while len(out) < count and attempts < count * 60:
        attempts += 1
        P0 = rng.choice(pool)
        phi = list(range(P0.n_ends))
        rng.shuffle(phi)
        P = P0.relabel(tuple(phi))
        comps = P.cylinder_components()
        pos = [c.cid for c in comps if c.positive]
        neg = [c.cid for c in comps if not c.positive]
        if len(pos) != len(neg):
            continue
        assignment = list(neg)
        rng.shuffle(assignment)
        m = Matching(tuple(zip(pos, assignment)))
        from flatkern.surface import is_connected_surface

        if not is_connected_surface(P, m):
            continue
        metric = metric_feasible(P, m)
        if metric is None:
            continue
        D = SeparatrixDiagram(P, m, tuple(sorted(metric.items())))
        if D.is_valid():
            out.append(D)
    if len(out) < count:
        raise RuntimeError("could not assemble enough random diagrams")
    return out


@pytest.fixture(scope="session")
def random_diagrams():
    return random_stable_diagrams(20)
