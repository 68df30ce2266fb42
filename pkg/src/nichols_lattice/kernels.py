"""Kernel selection: the compiled extension when built, else the Python twin."""
from array import array

try:
    from ._kernels import symmetrizer_counts as _counts
    COMPILED = True
except ImportError:  # extension not built
    from ._kernels_py import symmetrizer_counts as _counts
    COMPILED = False


def symmetrizer_counts(words, perms, E, n, rank, N, lookup, impl=None):
    """Counts table (flat, target-major) for one multidegree block."""
    fn = impl or _counts
    nw = len(words)
    args = [array("q", [x for w in words for x in w]), array("q", [x for p in perms for x in p]),
            array("q", [x for row in E for x in row]), n, rank, N, array("q", lookup)]
    out = array("q", bytes(8 * nw * nw * N))
    fn(*args, out)
    return out
