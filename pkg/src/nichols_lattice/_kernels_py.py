"""Pure-Python twin of the compiled symmetrizer kernel (same signature)."""


def symmetrizer_counts(words, perms, E, n, rank, N, lookup, out):
    nw = len(words) // n if n else 0
    npm = len(perms) // n if n else 0
    for w in range(nw):
        word = words[w * n:(w + 1) * n]
        for p in range(npm):
            perm = perms[p * n:(p + 1) * n]
            e = 0
            tgt = [0] * n
            for a in range(n):
                x = word[a]
                pa = perm[a]
                tgt[pa] = x
                for b in range(a + 1, n):
                    if pa > perm[b]:
                        e += E[x * rank + word[b]]
            code = 0
            for x in tgt:
                code = code * rank + x
            out[(lookup[code] * nw + w) * N + e % N] += 1
