import itertools

import pytest

from verbalfc.constructions import build


def compose(p, q):
    """Apply p, then q (images on 0..n-1)."""
    return tuple(q[p[i]] for i in range(len(p)))


def perm_inverse(p):
    out = [0] * len(p)
    for i, j in enumerate(p):
        out[j] = i
    return tuple(out)


def perm_comm(a, b):
    ai, bi = perm_inverse(a), perm_inverse(b)
    return compose(compose(compose(ai, bi), a), b)


def all_perms(n):
    return [tuple(p) for p in itertools.permutations(range(n))]


def cycle(n, *pts):
    """Permutation of 0..n-1 from a 1-based cycle."""
    img = list(range(n))
    for a, b in zip(pts, pts[1:] + pts[:1]):
        img[a - 1] = b - 1
    return tuple(img)


@pytest.fixture(scope="session")
def groups():
    cache = {}

    def get(spec):
        if spec not in cache:
            cache[spec] = build(spec)
        return cache[spec]

    return get


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
