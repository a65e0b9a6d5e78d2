"""Double embedding problems for a finite pair and their solvers.

A problem ties a pair ``Gm <= L`` to a commuting square of groups::

        L ---nu---> B            theta: L -> H   with beta o theta = nu
        |           |            and theta(Gm) <= G
        Gm --mu---> A
    H ---beta--> B,  G <= H, A <= B, alpha = beta|G, mu = nu|Gm

A weak solution is determined by ``theta``; ``eta`` is its restriction.

Finite pairs are approximations of profinite ones, so several constructions
(complements, prescribed lifts) can legitimately come back empty here. Those
``None`` results are facts about the finite instance, and a ``None`` from
:func:`split_over_subgroup` or :func:`solve_weak_prescribed` shows that this
particular finite pair does not behave projectively.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator

import numpy as np

from . import catalog
from .constructions import FiberProduct, fiber_lift, fiber_product, wreath_product
from .groups import (FiniteGroup, FinitePair, GroupError, Subgroup, intersection, is_normal,
                     is_simple, normal_core, normal_subgroups, product_set, sylow_subgroup)
from .homs import (GroupHom, HomConstraints, compose, enumerate_homs, identity_hom, inclusion,
                   quotient, trivial_hom)


class DEPError(GroupError):
    """A problem or solution violates its invariants."""

    def __init__(self, message: str, diagnostics: list | None = None):
        super().__init__(message)
        self.diagnostics = diagnostics or []


@dataclass(frozen=True)
class Diagnostic:
    arrow: str
    message: str
    witness: int | None = None

    def __str__(self) -> str:
        w = "" if self.witness is None else f" (witness {self.witness})"
        return f"{self.arrow}: {self.message}{w}"


@dataclass(eq=False)
class DoubleEmbeddingProblem:
    pair: FinitePair
    H: FiniteGroup
    B: FiniteGroup
    G: Subgroup
    A: Subgroup
    beta: GroupHom
    nu: GroupHom
    name: str = ""
    # set by normalize_dep: H -> H of the raw problem
    h_embedding: GroupHom | None = None
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def L(self) -> FiniteGroup:
        return self.pair.ambient

    @property
    def Gm(self) -> Subgroup:
        return self.pair.distinguished

    @cached_property
    def alpha(self) -> GroupHom:
        """``beta`` restricted to ``G``, as ``G.group -> A.group``."""
        return self.beta.restrict(self.G).corestrict(self.A)

    @cached_property
    def mu(self) -> GroupHom:
        """``nu`` restricted to ``Gm``, as ``Gm.group -> A.group``."""
        return self.nu.restrict(self.Gm).corestrict(self.A)

    @cached_property
    def j(self) -> GroupHom:
        return inclusion(self.G)

    def __repr__(self) -> str:
        return (f"DEP({self.name or '?'}: L={self.L.order}, Gm={self.Gm.order}, "
                f"H={self.H.order}, G={self.G.order}, B={self.B.order}, A={self.A.order})")


@dataclass(eq=False)
class WeakSolution:
    theta: GroupHom
    eta: GroupHom


def _first_unhit(hom: GroupHom, within: Subgroup | None = None) -> int | None:
    hit = np.zeros(hom.target.order, dtype=bool)
    hit[hom.map] = True
    want = within.array if within is not None else np.arange(hom.target.order)
    missing = want[~hit[want]]
    return int(missing[0]) if len(missing) else None


def validate_dep(dep: DoubleEmbeddingProblem) -> list[Diagnostic]:
    """All violated invariants; an empty list means the problem is valid."""
    diags: list[Diagnostic] = []
    L, Gm = dep.L, dep.Gm
    if dep.G.parent is not dep.H:
        diags.append(Diagnostic("j", "G is not a subgroup of H"))
    if dep.A.parent is not dep.B:
        diags.append(Diagnostic("i", "A is not a subgroup of B"))
    if dep.beta.source is not dep.H or dep.beta.target is not dep.B:
        diags.append(Diagnostic("beta", "beta is not a map H -> B"))
    if dep.nu.source is not L or dep.nu.target is not dep.B:
        diags.append(Diagnostic("nu", "nu is not a map L -> B"))
    if diags:
        return diags
    miss = _first_unhit(dep.beta)
    if miss is not None:
        diags.append(Diagnostic("beta", "not surjective", miss))
    miss = _first_unhit(dep.nu)
    if miss is not None:
        diags.append(Diagnostic("nu", "not surjective", miss))
    bg = dep.beta.map[dep.G.array]
    outside = dep.G.array[~dep.A.mask[bg]]
    if len(outside):
        diags.append(Diagnostic("alpha", "beta(G) is not contained in A (lower square fails)",
                                int(outside[0])))
    else:
        miss = _first_unhit(GroupHom(dep.G.group, dep.B, bg, check=False), dep.A)
        if miss is not None:
            diags.append(Diagnostic("alpha", "beta(G) is a proper subgroup of A", miss))
    ng = dep.nu.map[Gm.array]
    outside = Gm.array[~dep.A.mask[ng]]
    if len(outside):
        diags.append(Diagnostic("mu", "nu(Gm) is not contained in A (square with phi fails)",
                                int(outside[0])))
    else:
        miss = _first_unhit(GroupHom(Gm.group, dep.B, ng, check=False), dep.A)
        if miss is not None:
            diags.append(Diagnostic("mu", "nu(Gm) is a proper subgroup of A", miss))
    return diags


def require_valid(dep: DoubleEmbeddingProblem) -> DoubleEmbeddingProblem:
    diags = validate_dep(dep)
    if diags:
        raise DEPError("invalid double embedding problem: " + "; ".join(map(str, diags)), diags)
    return dep


def make_solution(dep: DoubleEmbeddingProblem, theta: GroupHom) -> WeakSolution:
    eta = theta.restrict(dep.Gm).corestrict(dep.G)
    return WeakSolution(theta, eta)


def check_solution(dep: DoubleEmbeddingProblem, sol: WeakSolution) -> None:
    """Element-by-element verification of every weak-solution invariant."""
    theta, eta = sol.theta, sol.eta
    if theta.source is not dep.L or theta.target is not dep.H:
        raise DEPError("theta is not a map L -> H")
    theta.verify()
    bad = np.nonzero(dep.beta.map[theta.map] != dep.nu.map)[0]
    if len(bad):
        raise DEPError(f"beta o theta != nu at {int(bad[0])}")
    images = theta.map[dep.Gm.array]
    if not np.all(dep.G.mask[images]):
        raise DEPError("theta(Gm) is not contained in G")
    if eta.source is not dep.Gm.group or eta.target is not dep.G.group:
        raise DEPError("eta is not a map Gm -> G")
    if not np.array_equal(dep.G.array[eta.map], images):
        raise DEPError("eta is not the restriction of theta")
    if not np.array_equal(dep.alpha.map[eta.map], dep.mu.map):
        raise DEPError("alpha o eta != mu")


def higher_solutions(dep: DoubleEmbeddingProblem) -> Iterator[GroupHom]:
    """Weak solutions of the higher problem alone (``beta o theta = nu``)."""
    return enumerate_homs(dep.L, dep.H, HomConstraints(commuting=(dep.beta, dep.nu)))


def lower_solutions(dep: DoubleEmbeddingProblem) -> Iterator[GroupHom]:
    """Weak solutions ``eta: Gm -> G`` of the lower problem (``alpha o eta = mu``)."""
    return enumerate_homs(dep.Gm.group, dep.G.group, HomConstraints(commuting=(dep.alpha, dep.mu)))


def solve_weak(dep: DoubleEmbeddingProblem, want_all: bool = False):
    """First weak solution (or ``None``); with ``want_all`` the full list."""
    c = HomConstraints(commuting=(dep.beta, dep.nu), image_in=(dep.Gm, dep.G))
    stream = (make_solution(dep, th) for th in enumerate_homs(dep.L, dep.H, c))
    if want_all:
        return list(stream)
    return next(stream, None)


def _check_lower(dep: DoubleEmbeddingProblem, eta: GroupHom) -> None:
    if eta.source is not dep.Gm.group or eta.target is not dep.G.group:
        raise DEPError("eta must be a map Gm -> G")
    if not np.array_equal(dep.alpha.map[eta.map], dep.mu.map):
        raise DEPError("eta does not solve the lower problem (alpha o eta != mu)")


def solve_weak_prescribed(dep: DoubleEmbeddingProblem, eta: GroupHom) -> WeakSolution | None:
    """A weak solution whose restriction to ``Gm`` is exactly ``eta``."""
    _check_lower(dep, eta)
    c = HomConstraints(commuting=(dep.beta, dep.nu), restriction=(dep.Gm, compose(dep.j, eta)))
    theta = next(enumerate_homs(dep.L, dep.H, c), None)
    return None if theta is None else WeakSolution(theta, eta)


def _fiber_with_L(dep: DoubleEmbeddingProblem) -> FiberProduct:
    fp = dep._cache.get("fiber_with_L")
    if fp is None:
        fp = fiber_product(dep.beta, dep.nu)
        dep._cache["fiber_with_L"] = fp
    return fp


def lift_via_fiber(dep: DoubleEmbeddingProblem, eta: GroupHom) -> WeakSolution | None:
    """Prescribed lifting through ``Hhat = H x_B L``.

    ``Ghat = {(eta(g), g)}`` is a copy of ``Gm``; a section of the projection
    ``Hhat -> L`` that maps ``Gm`` into ``Ghat`` composes with the projection
    to ``H`` to give the lift.
    """
    _check_lower(dep, eta)
    fp = _fiber_with_L(dep)
    gm = dep.Gm.array
    eta_amb = dep.G.array[eta.map]
    ghat = np.array([fp.index_of(int(h), int(g)) for h, g in zip(eta_amb, gm)], dtype=np.int64)
    if np.any(ghat < 0):  # pragma: no cover - excluded by _check_lower
        raise DEPError("eta is incompatible with nu")
    ghat_sub = Subgroup(fp.total, tuple(sorted(ghat.tolist())))
    c = HomConstraints(commuting=(fp.right_proj, identity_hom(dep.L)), image_in=(dep.Gm, ghat_sub))
    section = next(enumerate_homs(dep.L, fp.total, c), None)
    if section is None:
        return None
    theta = section.then(fp.left_proj)
    sol = WeakSolution(theta, eta)
    check_solution(dep, sol)
    return sol


def normalize_dep(raw: DoubleEmbeddingProblem) -> DoubleEmbeddingProblem:
    """Shrink ``B, A`` to the images of ``L, Gm`` and ``H, G`` to their preimages.

    The result's ``h_embedding`` maps its ``H`` back into ``raw.H``, which
    turns its weak solutions into weak solutions of ``raw``.
    """
    if raw.beta.source is not raw.H or raw.beta.target is not raw.B or raw.nu.source is not raw.L:
        raise DEPError("maps do not match the groups of the problem")
    if not raw.beta.is_surjective:
        raise DEPError("beta must be surjective")
    if not np.all(raw.A.mask[raw.beta.map[raw.G.array]]):
        raise DEPError("diagram does not commute: beta(G) is not inside A")
    if not np.all(raw.A.mask[raw.nu.map[raw.Gm.array]]):
        raise DEPError("diagram does not commute: nu(Gm) is not inside A")
    new_B = raw.nu.image
    new_A = raw.nu.image_of(raw.Gm)
    if new_B.order == raw.B.order and new_A == raw.A:
        return raw
    new_H = raw.beta.preimage(new_B)
    new_G = intersection(raw.G, raw.beta.preimage(new_A))
    Hg, Bg = new_H.group, new_B.group
    beta = raw.beta.restrict(new_H).corestrict(new_B)
    nu = raw.nu.corestrict(new_B)
    G = Subgroup(Hg, tuple(sorted(new_H.local_index[new_G.array].tolist())))
    A = Subgroup(Bg, tuple(sorted(new_B.local_index[new_A.array].tolist())))
    embed = inclusion(new_H)
    if raw.h_embedding is not None:
        embed = compose(raw.h_embedding, embed)
    dep = DoubleEmbeddingProblem(raw.pair, Hg, Bg, G, A, beta, nu,
                                 name=(raw.name + "/normalized") if raw.name else "",
                                 h_embedding=embed)
    return require_valid(dep)


def pull_back_solution(raw: DoubleEmbeddingProblem, normalized: DoubleEmbeddingProblem,
                       sol: WeakSolution) -> WeakSolution:
    """A weak solution of the normalized problem, read in the raw problem."""
    if normalized is raw:
        return sol
    theta = compose(normalized.h_embedding, sol.theta)
    return make_solution(raw, theta)


def is_split(dep: DoubleEmbeddingProblem) -> tuple[bool, tuple[GroupHom, GroupHom] | None]:
    """Whether ``alpha`` and ``beta`` both have sections (chosen independently)."""
    from .homs import sections_of
    a = next(sections_of(dep.alpha), None)
    if a is None:
        return False, None
    b = next(sections_of(dep.beta), None)
    if b is None:
        return False, None
    return True, (a, b)


@dataclass(eq=False)
class DominationWitness:
    dominated: DoubleEmbeddingProblem
    dominating: DoubleEmbeddingProblem
    pi1: GroupHom  # Ghat -> G
    pi2: GroupHom  # Hhat -> H
    pi3: GroupHom  # Ahat -> A
    pi4: GroupHom  # Bhat -> B
    alpha_hat_prime: GroupHom
    beta_hat_prime: GroupHom
    N: Subgroup

    @property
    def sections(self) -> tuple[GroupHom, GroupHom]:
        return self.alpha_hat_prime, self.beta_hat_prime


def dominate_split(dep: DoubleEmbeddingProblem, theta: GroupHom, eta: GroupHom) -> DominationWitness:
    """A split problem dominating ``dep``, built from independent higher and
    lower solutions ``theta`` and ``eta``.

    ``N = ker(theta) ∩ core_L(ker eta)``; ``Bhat = L/N``,
    ``Ahat = Gm N / N``, ``Hhat = H x_B Bhat``, ``Ghat = G x_A Ahat``, with
    sections ``x -> (theta(x), x)`` and ``x -> (eta(x), x)``.
    """
    L, Gm = dep.L, dep.Gm
    if theta.source is not L or theta.target is not dep.H:
        raise DEPError("theta must be a map L -> H")
    if not np.array_equal(dep.beta.map[theta.map], dep.nu.map):
        raise DEPError("theta does not solve the higher problem")
    _check_lower(dep, eta)
    ker_eta = Subgroup(L, tuple(sorted(Gm.array[eta.kernel.array].tolist())))
    N = intersection(theta.kernel, normal_core(L, ker_eta))

    B_hat, nu_hat = quotient(L, N)
    pi4_map = np.zeros(B_hat.order, dtype=np.int64)
    pi4_map[nu_hat.map] = dep.nu.map
    pi4 = GroupHom(B_hat, dep.B, pi4_map)
    A_hat = nu_hat.image_of(Gm)

    fp = fiber_product(dep.beta, pi4)
    H_hat, beta_hat, pi2 = fp.total, fp.right_proj, fp.left_proj
    G_hat = fp.subgroup_of_pairs(dep.G, A_hat)

    # sections are well defined because N <= ker(theta) and Gm ∩ N <= ker(eta)
    bp = np.zeros(B_hat.order, dtype=np.int64)
    bp[nu_hat.map] = fp._lookup[theta.map, nu_hat.map]
    beta_hat_prime = GroupHom(B_hat, H_hat, bp)
    eta_amb = dep.G.array[eta.map]
    x_of_gamma = nu_hat.map[Gm.array]
    ap = np.zeros(A_hat.order, dtype=np.int64)
    ap[A_hat.local_index[x_of_gamma]] = G_hat.local_index[fp._lookup[eta_amb, x_of_gamma]]
    alpha_hat_prime = GroupHom(A_hat.group, G_hat.group, ap)

    dominating = DoubleEmbeddingProblem(dep.pair, H_hat, B_hat, G_hat, A_hat, beta_hat, nu_hat,
                                        name=(dep.name + "/split") if dep.name else "")
    require_valid(dominating)
    pi1 = pi2.restrict(G_hat).corestrict(dep.G)
    pi3 = pi4.restrict(A_hat).corestrict(dep.A)
    w = DominationWitness(dep, dominating, pi1, pi2, pi3, pi4,
                          alpha_hat_prime, beta_hat_prime, N)
    check_domination(w)
    return w


def check_domination(w: DominationWitness) -> None:
    d, D = w.dominated, w.dominating
    for name, f in (("pi1", w.pi1), ("pi2", w.pi2), ("pi3", w.pi3), ("pi4", w.pi4)):
        if not f.is_surjective:
            raise DEPError(f"{name} is not surjective")
    if not np.array_equal(w.pi4.map[D.beta.map], d.beta.map[w.pi2.map]):
        raise DEPError("pi4 o beta_hat != beta o pi2")
    if not np.array_equal(w.pi3.map[D.alpha.map], d.alpha.map[w.pi1.map]):
        raise DEPError("pi3 o alpha_hat != alpha o pi1")
    if not np.array_equal(w.pi4.map[D.nu.map], d.nu.map):
        raise DEPError("pi4 o nu_hat != nu")
    if not np.array_equal(w.pi3.map[D.mu.map], d.mu.map):
        raise DEPError("pi3 o mu_hat != mu")
    if not np.array_equal(d.G.array[w.pi1.map], w.pi2.map[D.G.array]):
        raise DEPError("pi2 o j_hat != j o pi1")
    if not np.array_equal(d.A.array[w.pi3.map], w.pi4.map[D.A.array]):
        raise DEPError("pi4 o i_hat != i o pi3")
    if not np.array_equal(D.alpha.map[w.alpha_hat_prime.map], np.arange(D.A.order)):
        raise DEPError("alpha_hat o alpha_hat' != id")
    if not np.array_equal(D.beta.map[w.beta_hat_prime.map], np.arange(D.B.order)):
        raise DEPError("beta_hat o beta_hat' != id")


def canonical_solution(w: DominationWitness) -> WeakSolution | None:
    """``theta_hat = beta_hat' o nu_hat`` when it restricts to ``alpha_hat' o mu_hat`` on Gm."""
    D = w.dominating
    theta_hat = compose(w.beta_hat_prime, D.nu)
    images = theta_hat.map[D.Gm.array]
    if not np.all(D.G.mask[images]):
        return None
    sol = make_solution(D, theta_hat)
    if not np.array_equal(sol.eta.map, compose(w.alpha_hat_prime, D.mu).map):
        return None
    return sol


def induced_solution(w: DominationWitness, sol: WeakSolution) -> WeakSolution:
    """Push a solution of the dominating problem down: ``(pi1 eta_hat, pi2 theta_hat)``."""
    check_solution(w.dominating, sol)
    theta = compose(w.pi2, sol.theta)
    eta = compose(w.pi1, sol.eta)
    out = WeakSolution(theta, eta)
    check_solution(w.dominated, out)
    return out


@dataclass(eq=False)
class KernelReduction:
    """Quotient data for a normal ``U <= H`` with ``U ∩ KG <= G`` and ``K ∩ U = 1``."""

    dep: DoubleEmbeddingProblem
    U: Subgroup
    reduced: DoubleEmbeddingProblem
    pi: GroupHom  # H -> Hbar
    rho: GroupHom  # B -> Bbar
    square: FiberProduct  # Hbar x_Bbar B
    to_square: GroupHom  # H -> square.total, an isomorphism
    from_square: GroupHom
    certificate: bool  # (KG) ∩ (UG) == G

    def lift(self, theta_bar: GroupHom) -> WeakSolution:
        """Lift a solution of the reduced problem through the cartesian square."""
        theta = fiber_lift(theta_bar, self.dep.nu, self.square, onto=self.from_square)
        sol = make_solution(self.dep, theta)
        check_solution(self.dep, sol)
        return sol


def finite_kernel_reduction(dep: DoubleEmbeddingProblem) -> KernelReduction:
    """Divide out the largest admissible normal ``U`` (ties: first in member order)."""
    H = dep.H
    K = dep.beta.kernel
    KG = Subgroup(H, tuple(product_set(K, dep.G).tolist()))
    candidates = sorted(normal_subgroups(H), key=lambda s: (-s.order, s.members))
    U = H.trivial_subgroup
    for cand in candidates:
        if intersection(cand, K).order != 1:
            continue
        if intersection(cand, KG).is_subset(dep.G):
            U = cand
            break
    UG = set(product_set(U, dep.G).tolist())
    certificate = set(KG.members) & UG == set(dep.G.members)

    H_bar, pi = quotient(H, U)
    B_bar, rho = quotient(dep.B, dep.beta.image_of(U))
    bb = np.zeros(H_bar.order, dtype=np.int64)
    bb[pi.map] = rho.map[dep.beta.map]
    beta_bar = GroupHom(H_bar, B_bar, bb)
    G_bar = pi.image_of(dep.G)
    A_bar = rho.image_of(dep.A)
    reduced = require_valid(DoubleEmbeddingProblem(
        dep.pair, H_bar, B_bar, G_bar, A_bar, beta_bar, compose(rho, dep.nu),
        name=(dep.name + "/U") if dep.name else ""))

    square = fiber_product(beta_bar, rho)
    to = square._lookup[pi.map, dep.beta.map]
    if np.any(to < 0) or len(set(to.tolist())) != H.order or square.total.order != H.order:
        raise DEPError("square is not cartesian")  # pragma: no cover - K ∩ U = 1 guarantees it
    to_square = GroupHom(H, square.total, to)
    back = np.empty(H.order, dtype=np.int64)
    back[to] = np.arange(H.order)
    from_square = GroupHom(square.total, H, back)
    return KernelReduction(dep, U, reduced, pi, rho, square, to_square, from_square, certificate)


def _subgroup_of_L(pair: FinitePair, sub) -> Subgroup:
    L = pair.ambient
    if isinstance(sub, Subgroup) and sub.parent is L:
        return sub
    if isinstance(sub, Subgroup) and sub.parent is pair.distinguished.group:
        return Subgroup(L, tuple(sorted(pair.distinguished.array[sub.array].tolist())))
    raise GroupError("N must be a subgroup of the distinguished subgroup")


def split_over_subgroup(pair: FinitePair, N: Subgroup) -> Subgroup | None:
    """``M <= L`` with ``N = Gm ∩ M`` and ``Gm M = L``, or ``None``.

    Lifts the quotient map ``Gm -> Gm/Nhat`` (``Nhat`` the core of ``N`` in
    ``Gm``) to ``theta: L -> Gm/Nhat`` and takes ``M = theta^-1(N/Nhat)``.
    """
    L, Gm = pair.ambient, pair.distinguished
    N = _subgroup_of_L(pair, N)
    if not N.is_subset(Gm):
        raise GroupError("N is not a subgroup of the distinguished subgroup")
    Gg = Gm.group
    N_loc = Subgroup(Gg, tuple(sorted(Gm.local_index[N.array].tolist())))
    N_hat = normal_core(Gg, N_loc)
    Q, q = quotient(Gg, N_hat)
    one = catalog.trivial_group()
    dep = DoubleEmbeddingProblem(pair, Q, one, Q.whole, one.whole, trivial_hom(Q, one),
                                 trivial_hom(L, one), name="split")
    require_valid(dep)
    sol = solve_weak_prescribed(dep, q)
    if sol is None:
        return None
    target = q.image_of(N_loc)
    M = sol.theta.preimage(target)
    if intersection(Gm, M) != N:
        raise DEPError("split postcondition N = Gm ∩ M failed")
    if len(product_set(Gm, M)) != L.order:
        raise DEPError("split postcondition Gm M = L failed")
    if is_normal(Gg, N_loc) and not is_normal(L, M):
        raise DEPError("split postcondition: M is not normal although N is")
    return M


def semidirect_complement(pair: FinitePair) -> Subgroup | None:
    """A normal complement ``M`` to ``Gm`` in ``L`` (so ``L = M ⋊ Gm``), or ``None``."""
    M = split_over_subgroup(pair, pair.ambient.trivial_subgroup)
    if M is not None:
        if not (is_normal(pair.ambient, M) and intersection(M, pair.distinguished).order == 1):
            raise DEPError("complement postconditions failed")  # pragma: no cover
    return M


def wreath_obstruction_dep(pair: FinitePair, eta: GroupHom, nu: GroupHom
                           ) -> tuple[DoubleEmbeddingProblem, GroupHom]:
    """The problem ``(Gm -> 1, A^1 -> 1), (nu, A≀G -> G)`` with ``eta`` moved into ``A^1``.

    For normal ``Gm`` and nontrivial ``A``, ``G`` this problem has no lift
    of ``eta``: ``theta(Gm) = A^1`` would be normalised by some ``theta(l)``
    moving it to a different coordinate.
    """
    L, Gm = pair.ambient, pair.distinguished
    if not is_normal(L, Gm):
        raise GroupError("distinguished subgroup is not normal")
    if eta.source is not Gm.group:
        raise GroupError("eta must be defined on the distinguished subgroup")
    if nu.source is not L:
        raise GroupError("nu must be defined on the ambient group")
    A, G = eta.target, nu.target
    if A.order == 1 or G.order == 1:
        raise GroupError("both targets must be nontrivial")
    if not (eta.is_surjective and nu.is_surjective):
        raise GroupError("eta and nu must be surjective")
    if np.any(nu.map[Gm.array] != 0):
        raise GroupError("nu must vanish on the distinguished subgroup")
    W = wreath_product(A, G)
    A1 = W.coord_embed.image
    dep = DoubleEmbeddingProblem(pair, W.group, G, A1, G.trivial_subgroup, W.top_quot, nu,
                                 name=f"wreath({A.name},{G.name})")
    require_valid(dep)
    eta1 = compose(W.coord_embed, eta).corestrict(A1)
    return dep, eta1


def sylow_obstruction_check(Q: FiniteGroup, p: int, psi: GroupHom) -> bool:
    """True when no normal ``M`` complements the Sylow p-subgroup ``P`` of ``Q``."""
    S = psi.target
    if psi.source is not Q:
        raise GroupError("psi must be defined on Q")
    if S.is_abelian:
        raise GroupError("quotient must be non-abelian")
    if not psi.is_surjective:
        raise GroupError("psi must be surjective")
    if S.order % p:
        raise GroupError(f"{p} does not divide |S| = {S.order}")
    if not is_simple(S):
        raise GroupError("quotient is not simple")
    P = sylow_subgroup(Q, p)
    for M in normal_subgroups(Q):
        if M.order * P.order == Q.order and intersection(M, P).order == 1:
            return False
    return True
