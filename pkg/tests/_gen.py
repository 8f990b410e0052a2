"""Seeded generators of promise-satisfying instances, shared by the test modules."""

from spernerlab.chains import Ring
from spernerlab.instances import random_labeling, random_manifold, random_oriented_manifold
from spernerlab.solver import brute_force, spm_case


def spm_instances(count, seed=0, sizes=(2, 40)):
    """(manifold, labels, start, case) for SPM, alternating promise cases when possible."""
    out = []
    k = 0
    while len(out) < count:
        k += 1
        size = sizes[0] + (seed * 7919 + k * 104729) % (sizes[1] - sizes[0] + 1)
        m = random_manifold(seed * 100003 + k, size)
        labels = random_labeling(m, seed * 31 + k)
        start = m.facets[0]
        case = spm_case(m, labels, start)
        if case is None:
            sols = sorted(brute_force(m, labels, 1))
            if len(sols) < 2:
                continue
            start = sols[k % len(sols)]
            case = spm_case(m, labels, start)
        out.append((m, labels, start, case))
    return out


def ospm_instances(count, seed=0, sizes=(2, 50)):
    out = []
    k = 0
    while len(out) < count:
        k += 1
        size = sizes[0] + (seed * 7919 + k * 104729) % (sizes[1] - sizes[0] + 1)
        m = random_oriented_manifold(seed * 100003 + k, size)
        labels = random_labeling(m, seed * 31 + k)
        start = m.facets[0]
        case = spm_case(m, labels, start, oriented=True)
        if case is None:
            plus = sorted(brute_force(m, labels, 1, Ring.Z))
            if not plus:
                continue
            start = plus[0]
            case = spm_case(m, labels, start, oriented=True)
            if case is None:
                continue
        out.append((m, labels, start, case))
    return out
