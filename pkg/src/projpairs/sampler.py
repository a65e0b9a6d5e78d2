"""Random e-tuples in a fiber-power model of a free group.

The model for the ambient group is the fiber power ``Delta_n`` of
``beta: H -> B`` with ``mu = beta_hat``; its coordinate projections are
``n`` solutions of ``beta o theta = mu`` with independent kernels. A tuple
``sigma`` with ``mu(sigma) = b`` lies in the lifting set when some solution
sends it to ``h``. The union of the ``n`` cosets where a projection already
does this has measure ``1 - (1 - (|B|/|H|)^e)^n`` inside the coset ``C``.
"""

from __future__ import annotations

import itertools
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .constructions import fiber_power
from .groups import CapExceeded, FiniteGroup, GroupError, intersection
from .homs import GroupHom, HomConstraints, enumerate_homs

EXHAUSTIVE_LIMIT = 10 ** 6
BLOCK = 1024


@dataclass
class ExperimentSpec:
    beta: GroupHom
    e: int
    n: int
    b: tuple
    h: tuple
    trials: int = 10_000
    seed: int = 0
    exhaustive: str = "auto"  # "auto" | "force" | "off"

    def __post_init__(self):
        self.b = tuple(int(v) for v in self.b)
        self.h = tuple(int(v) for v in self.h)
        if self.e < 1 or self.n < 1:
            raise GroupError("e and n must be positive")
        if len(self.b) != self.e or len(self.h) != self.e:
            raise GroupError("b and h must be e-tuples")
        if any(int(self.beta.map[x]) != y for x, y in zip(self.h, self.b)):
            raise GroupError("beta(h) != b")
        if self.trials < 1:
            raise GroupError("trials must be positive")
        if self.exhaustive not in ("auto", "force", "off"):
            raise GroupError(f"unknown exhaustive mode {self.exhaustive!r}")


@dataclass
class ExperimentReport:
    exact_fraction: Fraction | None
    estimate: float
    standard_error: float
    lower_bound: Fraction
    independence_verified: bool
    samples_in_C: int
    trials: int
    seed: int
    coset_size: int
    model_order: int
    solutions: int
    elapsed_ms: int = 0

    def to_json(self, timing: bool = True) -> dict:
        d = asdict(self)
        d["exact_fraction"] = None if self.exact_fraction is None else str(self.exact_fraction)
        d["lower_bound"] = str(self.lower_bound)
        if not timing:
            d.pop("elapsed_ms")
        return d


def sigma_membership(L: FiniteGroup, mu: GroupHom, beta: GroupHom,
                     sigma: Sequence[int], h: Sequence[int]) -> bool:
    """Whether ``mu(sigma) = beta(h)`` implies a solution ``theta`` with ``theta(sigma) = h``."""
    if len(sigma) != len(h):
        raise GroupError("sigma and h must have the same length")
    if mu.source is not L or mu.target is not beta.target:
        raise GroupError("mu must map L onto the target of beta")
    if any(int(mu.map[s]) != int(beta.map[t]) for s, t in zip(sigma, h)):
        return True
    pin = list(zip((int(s) for s in sigma), (int(t) for t in h)))
    c = HomConstraints(commuting=(beta, mu), pin=pin)
    return next(enumerate_homs(L, beta.source, c), None) is not None


def kernel_independence_check(homs: Sequence[GroupHom], mu: GroupHom) -> bool:
    """Normalised kernel sizes inside ``ker mu`` multiply over every subset."""
    if not homs:
        return True
    K = mu.kernel
    for th in homs:
        if th.source is not mu.source:
            raise GroupError("maps have different sources")
    kernels = [intersection(th.kernel, K) for th in homs]
    size = Fraction(K.order)
    ratios = [Fraction(k.order) / size for k in kernels]
    masks = [k.mask for k in kernels]
    for r in range(2, len(homs) + 1):
        for subset in itertools.combinations(range(len(homs)), r):
            m = K.mask.copy()
            for i in subset:
                m &= masks[i]
            expected = math.prod(ratios[i] for i in subset)
            if Fraction(int(m.sum())) / size != expected:
                return False
    return True


def _check_relation(homs: Sequence[GroupHom], beta: GroupHom, mu: GroupHom) -> None:
    for k, th in enumerate(homs):
        if not np.array_equal(beta.map[th.map], mu.map):
            raise GroupError(f"map {k} does not satisfy beta o theta = mu")


def lower_bound(H: FiniteGroup, B: FiniteGroup, e: int, n: int) -> Fraction:
    return 1 - (1 - Fraction(B.order, H.order) ** e) ** n


def _sample_block(seed: int, block: int, count: int, kernel: np.ndarray, e: int) -> np.ndarray:
    # one generator per block keeps results independent of the worker count
    rng = np.random.default_rng([seed, block])
    return kernel[rng.integers(0, len(kernel), size=(count, e))]


def run_experiment(spec: ExperimentSpec, threads: int = 1) -> ExperimentReport:
    start = time.perf_counter()
    beta = spec.beta
    H, B = beta.source, beta.target
    fp = fiber_power(beta, spec.n)
    L, mu = fp.total, fp.beta_hat
    _check_relation(fp.projections, beta, mu)
    independent = kernel_independence_check(fp.projections, mu)

    solutions = list(enumerate_homs(L, H, HomConstraints(commuting=(beta, mu))))
    thetas = np.stack([s.map for s in solutions])  # (m, |L|)
    kernel = mu.kernel.array
    # coset representative: any sigma_i with mu(sigma_i) = b_i
    rep = np.array([int(np.nonzero(mu.map == b)[0][0]) for b in spec.b], dtype=np.int64)
    h = np.array(spec.h, dtype=np.int64)
    coset_size = len(kernel) ** spec.e

    def member(samples: np.ndarray) -> np.ndarray:
        # samples: (count, e) kernel elements; sigma_i = rep_i * k_i
        sigma = L.mul[rep[None, :], samples]
        hit = np.ones((thetas.shape[0], len(samples)), dtype=bool)
        for i in range(spec.e):
            hit &= thetas[:, sigma[:, i]] == h[i]
        return hit.any(axis=0)

    exact = None
    want_exact = spec.exhaustive == "force" or (spec.exhaustive == "auto" and coset_size <= EXHAUSTIVE_LIMIT)
    if spec.exhaustive == "force" and coset_size > EXHAUSTIVE_LIMIT:
        raise CapExceeded(f"exhaustive enumeration of {coset_size} tuples exceeds {EXHAUSTIVE_LIMIT}")
    if want_exact:
        total = 0
        for chunk in _chunks(kernel, spec.e, 1 << 16):
            total += int(member(chunk).sum())
        exact = Fraction(total, coset_size)

    blocks = [(k, min(BLOCK, spec.trials - k * BLOCK)) for k in range(math.ceil(spec.trials / BLOCK))]

    def run_block(item):
        k, count = item
        return int(member(_sample_block(spec.seed, k, count, kernel, spec.e)).sum())

    if threads > 1 and len(blocks) > 1:
        with ThreadPoolExecutor(threads) as pool:
            hits = sum(pool.map(run_block, blocks))
    else:
        hits = sum(map(run_block, blocks))
    est = hits / spec.trials
    se = math.sqrt(est * (1 - est) / spec.trials)
    elapsed = int((time.perf_counter() - start) * 1000)
    return ExperimentReport(exact, est, se, lower_bound(H, B, spec.e, spec.n), independent,
                            hits, spec.trials, spec.seed, coset_size, L.order, len(solutions),
                            elapsed)


def _chunks(kernel: np.ndarray, e: int, size: int):
    """All e-tuples of kernel elements, in blocks of at most ``size`` rows."""
    k = len(kernel)
    total = k ** e
    for start in range(0, total, size):
        idx = np.arange(start, min(total, start + size))
        cols = [(idx // k ** (e - 1 - i)) % k for i in range(e)]
        yield kernel[np.stack(cols, axis=1)]
