"""Explicit proofs of the phi family.

``build_phi_proof(n)`` is the normal minimal-logic proof discharging ``2**n``
copies of ``xi(n)``; each step reuses the previous derivation through an
atomic substitution, and the two copies of that derivation are the same
object, so the proof is exponential as a tree but small as a DAG.
``build_phi_classical(n)`` uses Peirce's rule and a single copy of ``xi(n)``.
"""
from __future__ import annotations

from .formula import C, D, Formula, Imp, atoms, chi, shift_substitution, xi
from .nd import Assume, Elim, Intro, NDProof, Peirce, relabel, substitute_proof

__all__ = ["build_sigma", "build_phi_proof", "build_peirce_proof", "build_phi_classical",
           "phi_step"]


def build_sigma(a: Formula, x: Formula, *, leaf_label: int | None = None, first_label: int = 1) -> NDProof:
    """Derive ``x`` from two copies of ``chi(a, x)``.

    Labels: ``first_label`` discharges ``a``, the next one ``(a->x)->a`` and
    the one after that is the vacuous discharge. The two ``chi(a, x)`` leaves
    carry ``leaf_label`` (open when ``None``).
    """
    if not a.is_atom:
        raise ValueError(f"build_sigma needs an atom, got {a}")
    if a.name in atoms(x):
        raise ValueError(f"{a} occurs in {x}")
    l_a, l_ax, l_vac = first_label, first_label + 1, first_label + 2
    a_x = Imp(a, x)
    ax_a = Imp(a_x, a)
    hyp = chi(a, x)

    peirce_like = Intro(l_vac, Assume(a, l_a), hypothesis=ax_a)       # ((a->x)->a)->a
    x1 = Elim(peirce_like, Assume(hyp, leaf_label))                 # x
    got_a = Elim(Intro(l_a, x1, hypothesis=a), Assume(ax_a, l_ax))  # a
    return Elim(Intro(l_ax, got_a, hypothesis=ax_a), Assume(hyp, leaf_label))


def phi_step(prev: Intro, i: int) -> Intro:
    """Turn a proof of ``phi(i)`` into one of ``phi(i+1)``."""
    m = prev.label
    star = substitute_proof(prev.body, shift_substitution(i))  # xi(1) from copies of xi(i+1)
    l_d, l_dc, l_vac, final = m + 1, m + 2, m + 3, m + 4
    star = relabel(star, {m: final})

    d1 = D(1)
    d1_c = Imp(d1, C)
    dc_d = Imp(d1_c, d1)
    peirce_like = Intro(l_vac, Assume(d1, l_d), hypothesis=dc_d)     # ((D1->C)->D1)->D1
    c1 = Elim(peirce_like, star)                                     # C
    got_d = Elim(Intro(l_d, c1, hypothesis=d1), Assume(dc_d, l_dc))  # D1
    c2 = Elim(Intro(l_dc, got_d, hypothesis=dc_d), star)             # C
    return Intro(final, c2, hypothesis=xi(i + 1))


def build_phi_proof(n: int) -> Intro:
    """Normal proof of ``phi(n)`` whose last rule discharges ``2**n`` copies of ``xi(n)``."""
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"n must be a positive integer, got {n!r}")
    proof = Intro(4, build_sigma(D(1), C, leaf_label=4), hypothesis=xi(1))
    for i in range(1, n):
        proof = phi_step(proof, i)
    return proof


def build_peirce_proof(c: Formula, d: Formula, *, first_label: int = 1) -> NDProof:
    """Classical proof of ``((c->d)->c)->c``."""
    l_outer, l_inner = first_label, first_label + 1
    c_d = Imp(c, d)
    cd_c = Imp(c_d, c)
    body = Elim(Assume(c_d, l_inner), Assume(cd_c, l_outer))
    return Intro(l_outer, Peirce(l_inner, body), hypothesis=cd_c)


def build_phi_classical(n: int) -> Intro:
    """Classical proof of ``phi(n)`` with one assumption of ``xi(n)``.

    ``xi(k)`` applied to a Peirce proof of ``((D_k -> xi(k-1)) -> D_k) -> D_k``
    yields ``xi(k-1)``; chaining from ``k = n`` down to 1 reaches ``C``.
    """
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"n must be a positive integer, got {n!r}")
    final = 2 * n + 1
    current: NDProof = Assume(xi(n), final)
    label = 1
    for k in range(n, 0, -1):
        below = xi(k - 1) if k > 1 else C
        current = Elim(build_peirce_proof(D(k), below, first_label=label), current)
        label += 2
    return Intro(final, current, hypothesis=xi(n))
