"""Independent brute-force oracles used to freeze expected metric values.

Everything here is plain Python loops over lists, deliberately sharing no
code path with the package kernels.
"""
import itertools
import math


def cosine(x, y):
    dot = sum(a * b for a, b in zip(x, y))
    nx = math.sqrt(sum(a * a for a in x))
    ny = math.sqrt(sum(b * b for b in y))
    return max(0.0, min(2.0, 1.0 - dot / (nx * ny)))


def dist_matrix(a, b):
    return [[cosine(x, y) for y in b] for x in a]


def apd(a, b):
    d = dist_matrix(a, b)
    return sum(sum(row) for row in d) / (len(a) * len(b))


def _unit(v):
    norm = math.sqrt(sum(x * x for x in v))
    return [x / norm for x in v]


def prt(a, b):
    ua = [_unit(row) for row in a]
    ub = [_unit(row) for row in b]
    mu_a = [sum(col) / len(a) for col in zip(*ua)]
    mu_b = [sum(col) / len(b) for col in zip(*ub)]
    return cosine(mu_a, mu_b)


def amd_directional(a, b):
    d = dist_matrix(a, b)
    a_to_b = sum(min(row) for row in d) / len(a)
    b_to_a = sum(min(col) for col in zip(*d)) / len(b)
    return a_to_b, b_to_a


def amd(a, b):
    fwd, rev = amd_directional(a, b)
    return (fwd + rev) / 2.0


def assignment_minimum(cost):
    """Exact minimum mean assignment cost by enumerating all permutations."""
    n = len(cost)
    best = math.inf
    for perm in itertools.permutations(range(n)):
        total = sum(cost[i][perm[i]] for i in range(n))
        best = min(best, total)
    return best / n


def spearman_no_ties(xs, ys):
    """Classical 1 - 6*sum(d^2)/(n(n^2-1)); valid only without ties."""
    n = len(xs)
    rank_x = {i: r for r, i in enumerate(sorted(range(n), key=lambda i: xs[i]))}
    rank_y = {i: r for r, i in enumerate(sorted(range(n), key=lambda i: ys[i]))}
    d2 = sum((rank_x[i] - rank_y[i]) ** 2 for i in range(n))
    return 1.0 - 6.0 * d2 / (n * (n * n - 1))


def pearson(xs, ys):
    n = len(xs)
    mx = sum(xs) / n
    my = sum(ys) / n
    num = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
    dx = math.sqrt(sum((x - mx) ** 2 for x in xs))
    dy = math.sqrt(sum((y - my) ** 2 for y in ys))
    return num / (dx * dy)


def fractional_ranks(xs):
    n = len(xs)
    ranks = [0.0] * n
    for i, x in enumerate(xs):
        smaller = sum(1 for y in xs if y < x)
        equal = sum(1 for y in xs if y == x)
        ranks[i] = smaller + (equal + 1) / 2.0
    return ranks
