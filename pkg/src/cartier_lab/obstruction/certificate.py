"""
Nonperiodicity Certificates

If x_N - x_K = q(a) with a in F_p[[t]], the coefficients satisfy

    a_{n-1} - a_{np-1} = c_{n-1}    (n >= 1),
    c_m = [e_N divides m+1] - [e_K divides m+1],   e = (p-1)^N, (p-1)^K.

An eventually periodic a (preperiod L, period P) turns these into equations
A[(n-1) mod P] - A[(np-1) mod P] = c_{n-1} for n - 1 >= L over P unknowns.
A weighted union-find over F_p finds an inconsistent cycle; the cycle is the
refutation and re-verifies by summing the cited constraints.

The constraint for n depends only on n mod lcm(P, e_K), so a window of that
many constraints contains all of them. Constraint sets shrink as L grows,
so one cycle found above Lmax refutes every L <= Lmax.
"""

from collections import deque
from math import lcm
from typing import Optional

from cartier_lab.config import get_logger
from cartier_lab.errors import PreconditionError
from cartier_lab.obstruction.models import (
    Constraint,
    PeriodicityCertificate,
    Refutation,
    TelescopedChain,
)

logger = get_logger(__name__)


def difference_coefficient(p: int, N: int, K: int, m: int) -> int:
    """c_m of x_N - x_K at [t], reduced to [0, p)."""
    e_n = (p - 1) ** N
    e_k = (p - 1) ** K
    value = (1 if (m + 1) % e_n == 0 else 0) - (1 if (m + 1) % e_k == 0 else 0)
    return value % p


def periodic_constraint(p: int, N: int, K: int, P: int, n: int) -> Constraint:
    """Constraint n of the period-P system."""
    return Constraint(
        n=n,
        left=(n - 1) % P,
        right=(n * p - 1) % P,
        rhs=difference_coefficient(p, N, K, n - 1),
    )


class WeightedUnionFind:
    """
    Union-find over residue classes with potentials in F_p.

    potential(x) is A[x] - A[root(x)]. Accepted constraints are kept as a
    spanning forest so that a conflict can be explained as a cycle.
    """

    def __init__(self, size: int, p: int):
        self.p = p
        self.parent = list(range(size))
        self.potential = [0] * size
        self.rank = [0] * size
        self.edges: dict[int, list[tuple[int, Constraint, int]]] = {i: [] for i in range(size)}

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        # compress, accumulating potentials towards the root
        path = []
        while self.parent[x] != x:
            path.append(x)
            x = self.parent[x]
        for node in reversed(path):
            parent = self.parent[node]
            if parent != root:
                self.potential[node] = (self.potential[node] + self.potential[parent]) % self.p
            self.parent[node] = root
        return root

    def add(self, constraint: Constraint) -> Optional[list[tuple[Constraint, int]]]:
        """
        Record A[left] - A[right] = rhs.

        Returns:
            None if consistent, else the signed cycle (constraint, sign) whose
            left-hand sides cancel and whose right-hand sides do not
        """
        p = self.p
        a, b = constraint.left, constraint.right
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            if (self.potential[a] - self.potential[b] - constraint.rhs) % p == 0:
                return None
            return self._path(a, b) + [(constraint, -1)]
        # A[ra] - A[rb] = rhs - pot(a) + pot(b)
        shift = (constraint.rhs - self.potential[a] + self.potential[b]) % p
        if self.rank[ra] < self.rank[rb]:
            ra, rb, shift = rb, ra, (-shift) % p
        self.parent[rb] = ra
        self.potential[rb] = (-shift) % p
        if self.rank[ra] == self.rank[rb]:
            self.rank[ra] += 1
        self.edges[a].append((b, constraint, 1))
        self.edges[b].append((a, constraint, -1))
        return None

    def _path(self, start: int, goal: int) -> list[tuple[Constraint, int]]:
        """Signed constraints along the forest path start -> goal (sum = A[start] - A[goal])."""
        if start == goal:
            return []
        previous: dict[int, tuple[int, Constraint, int]] = {start: (start, None, 0)}
        queue = deque([start])
        while queue:
            node = queue.popleft()
            if node == goal:
                break
            for neighbour, constraint, sign in self.edges[node]:
                if neighbour not in previous:
                    previous[neighbour] = (node, constraint, sign)
                    queue.append(neighbour)
        chain = []
        node = goal
        while node != start:
            parent, constraint, sign = previous[node]
            chain.append((constraint, sign))
            node = parent
        chain.reverse()
        return chain


def refute_period(
    p: int, N: int, K: int, P: int, Lmax: int, window: Optional[int] = None
) -> Optional[Refutation]:
    """
    An inconsistent cycle among constraints n with n - 1 >= Lmax, or None
    if the scanned window stays consistent.
    """
    span = window if window is not None else lcm(P, (p - 1) ** K)
    uf = WeightedUnionFind(P, p)
    for n in range(Lmax + 1, Lmax + 1 + span):
        cycle = uf.add(periodic_constraint(p, N, K, P, n))
        if cycle is not None:
            total = sum(sign * c.rhs for c, sign in cycle) % p
            return Refutation(
                period=P,
                max_preperiod=Lmax,
                constraints=[c for c, _ in cycle],
                signs=[sign for _, sign in cycle],
                total=total,
            )
    return None


def nonperiodicity_certificate(
    p: int, N: int, K: int, Pmax: int, Lmax: int, window: Optional[int] = None
) -> PeriodicityCertificate:
    """
    Refute every (P, L) with P <= Pmax, L <= Lmax.

    Periods with no contradiction inside the scanned window are listed as
    inconclusive, never as consistent.

    Raises:
        PreconditionError: unless K > N >= 0
    """
    if not 0 <= N < K:
        raise PreconditionError(f"need K > N >= 0, got N={N}, K={K}")
    refutations = []
    inconclusive = []
    for P in range(1, Pmax + 1):
        refutation = refute_period(p, N, K, P, Lmax, window)
        if refutation is None:
            logger.warning("Period %d not refuted within the window", P)
            inconclusive.append(P)
        else:
            refutations.append(refutation)
    logger.info(
        "Certificate x_%d - x_%d: %d periods refuted, %d inconclusive",
        N,
        K,
        len(refutations),
        len(inconclusive),
    )
    return PeriodicityCertificate(
        p=p,
        N=N,
        K=K,
        Pmax=Pmax,
        Lmax=Lmax,
        refutations=refutations,
        inconclusive=inconclusive,
    )


def verify_refutation(refutation: Refutation, p: int, N: int, K: int) -> bool:
    """Recompute every cited constraint and check the cycle sum."""
    P = refutation.period
    if len(refutation.signs) != len(refutation.constraints) or not refutation.constraints:
        return False
    balance: dict[int, int] = {}
    total = 0
    for constraint, sign in zip(refutation.constraints, refutation.signs):
        if sign not in (1, -1) or constraint.n - 1 < refutation.max_preperiod:
            return False
        if constraint != periodic_constraint(p, N, K, P, constraint.n):
            return False
        balance[constraint.left] = balance.get(constraint.left, 0) + sign
        balance[constraint.right] = balance.get(constraint.right, 0) - sign
        total += sign * constraint.rhs
    if any(v % p for v in balance.values()):
        return False
    return total % p != 0 and total % p == refutation.total


def verify_certificate(cert: PeriodicityCertificate) -> bool:
    """True if every refutation re-verifies and they cover 1..Pmax up to Lmax."""
    periods = sorted(r.period for r in cert.refutations)
    if periods != list(range(1, cert.Pmax + 1)):
        return False
    return all(
        r.max_preperiod >= cert.Lmax and verify_refutation(r, cert.p, cert.N, cert.K)
        for r in cert.refutations
    )


def telescoped_chain(p: int, N: int, K: int, M: int, s: int) -> TelescopedChain:
    """
    Sum the recursion over n = M (p-1)^N p^j, j = 0..s-1.

    The intermediate coefficients cancel, leaving
    a_{M(p-1)^N - 1} - a_{M(p-1)^N p^s - 1} = sum of c_{n-1}, which is s
    whenever (p-1)^(K-N) does not divide M.
    """
    if M < 1 or s < 1:
        raise PreconditionError("telescoping needs M >= 1 and s >= 1")
    base = M * (p - 1) ** N
    constraints = []
    for j in range(s):
        n = base * p**j
        constraints.append(
            Constraint(n=n, left=n - 1, right=n * p - 1, rhs=difference_coefficient(p, N, K, n - 1))
        )
    for first, second in zip(constraints, constraints[1:]):
        if first.right != second.left:
            raise PreconditionError("chain does not telescope")  # pragma: no cover
    return TelescopedChain(
        start=base - 1,
        end=base * p**s - 1,
        constraints=constraints,
        total=sum(c.rhs for c in constraints) % p,
    )


__all__ = [
    "difference_coefficient",
    "periodic_constraint",
    "WeightedUnionFind",
    "refute_period",
    "nonperiodicity_certificate",
    "verify_refutation",
    "verify_certificate",
    "telescoped_chain",
]
