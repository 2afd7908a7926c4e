"""Exact-arithmetic oracles shared by the test modules."""
import sympy as sp


def exact_dims(alg, gram=None, x=None):
    """Brute-force oracle: exact rational nullspaces of the defining linear systems.

    Derivation equations are written out entry by entry from the bracket
    table, with no shared code with the SVD path.
    """
    n = alg.dim
    C = [[[sp.Rational(str(alg.structure[k, i, j])) for j in range(n)] for i in range(n)]
         for k in range(n)]
    d = sp.symbols(f"d0:{n * n}")
    D = sp.Matrix(n, n, d)

    def br(u, v):
        return sp.Matrix([sum(C[k][i][j] * u[i] * v[j] for i in range(n) for j in range(n))
                          for k in range(n)])
    e = [sp.Matrix([1 if r == i else 0 for r in range(n)]) for i in range(n)]
    eqs = []
    for i in range(n):
        for j in range(i + 1, n):
            eqs += list(D * br(e[i], e[j]) - br(D * e[i], e[j]) - br(e[i], D * e[j]))
    out = {"der": _kernel_dim(eqs, d)}
    if x is not None:
        X = sp.Matrix([sp.Rational(str(v)) for v in x])
        g = sp.Matrix(gram)
        fix = list(D * X)
        skew = list(D.T * g + g * D)
        out["x_fixing"] = _kernel_dim(eqs + fix, d)
        out["skew"] = _kernel_dim(eqs + skew, d)
        out["k_prime"] = _kernel_dim(eqs + fix + skew, d)
    return out


def _kernel_dim(eqs, syms):
    if not eqs:
        return len(syms)
    M = sp.Matrix([[sp.diff(eq, s) for s in syms] for eq in eqs])
    return len(syms) - M.rank()
