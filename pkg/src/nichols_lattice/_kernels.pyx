# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loop of the quantum symmetrizer.

Every term of the symmetrizer applied to a basis word is a single word
times a root of unity, so a block of the matrix is a table of counts
indexed by (target word, source word, exponent mod N).
"""


def symmetrizer_counts(const long long[:] words, const long long[:] perms, const long long[:] E,
                       long long n, long long rank, long long N, const long long[:] lookup,
                       long long[:] out):
    cdef Py_ssize_t nw = words.shape[0] // n if n else 0
    cdef Py_ssize_t npm = perms.shape[0] // n if n else 0
    cdef Py_ssize_t w, p, a, b, k
    cdef long long e, code, x, y
    cdef long long tgt[64]
    if n > 64:
        raise ValueError("degree too large for the compiled kernel")
    for w in range(nw):
        for p in range(npm):
            e = 0
            for a in range(n):
                x = words[w * n + a]
                tgt[perms[p * n + a]] = x
                for b in range(a + 1, n):
                    if perms[p * n + a] > perms[p * n + b]:
                        y = words[w * n + b]
                        e += E[x * rank + y]
            code = 0
            for k in range(n):
                code = code * rank + tgt[k]
            e %= N
            if e < 0:
                e += N
            out[(lookup[code] * nw + w) * N + e] += 1
