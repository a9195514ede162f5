"""Root data and representation matrices.

``pairing[a, i]`` is the value of simple root ``a`` on Cartan basis element
``h_i``. For type A the Cartan basis is orthonormal for the trace form of the
defining representation; lattice windows carry no representation and have one
more Cartan direction than roots.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True, eq=False)
class Representation:
    H: np.ndarray  # (n_cartan, M, M)
    E: np.ndarray  # (n_roots, M, M)
    F: np.ndarray  # (n_roots, M, M)

    @property
    def dim(self) -> int:
        return self.H.shape[1]


@dataclass(frozen=True, eq=False)
class RootData:
    pairing: np.ndarray
    exponents: tuple[int, ...] = ()
    rep: Representation | None = None
    name: str = "custom"
    cartan_labels: tuple[int, ...] = field(default=())

    def __post_init__(self):
        P = np.array(self.pairing, dtype=float)
        if P.ndim != 2 or 0 in P.shape:
            raise ValueError("pairing must be a non-empty 2-D matrix")
        P.flags.writeable = False
        object.__setattr__(self, "pairing", P)
        if not self.cartan_labels:
            object.__setattr__(self, "cartan_labels", tuple(range(1, P.shape[1] + 1)))
        if len(self.cartan_labels) != P.shape[1]:
            raise ValueError("one label per Cartan direction")
        if self.rep is not None:
            if self.rep.H.shape[0] != P.shape[1] or self.rep.E.shape[0] != P.shape[0]:
                raise ValueError("representation matrices do not match the pairing shape")

    @property
    def rank(self) -> int:
        """Number of simple roots."""
        return self.pairing.shape[0]

    @property
    def n_cartan(self) -> int:
        return self.pairing.shape[1]

    def rep_residuals(self):
        """Worst violation of the normalisations the Lax formalism assumes.

        Returns a dict with the max abs error of tr(H_i H_j) = delta_ij,
        tr(E_j F_j) = 1 and [H_i, E_j] = pairing[j, i] E_j.
        """
        if self.rep is None:
            return {}
        H, E, F = self.rep.H, self.rep.E, self.rep.F
        gram = np.einsum("imn,jnm->ij", H, H)
        ef = np.einsum("jmn,jnm->j", E, F)
        comm = np.einsum("imn,jnk->ijmk", H, E) - np.einsum("jmn,ink->ijmk", E, H)
        target = self.pairing.T[:, :, None, None] * E[None]
        return {
            "cartan_orthonormal": float(np.max(np.abs(gram - np.eye(len(H))))),
            "trace_ef": float(np.max(np.abs(ef - 1.0))),
            "root_action": float(np.max(np.abs(comm - target))),
        }


def _elementary(M, i, j):
    e = np.zeros((M, M))
    e[i, j] = 1.0
    return e


def type_a(s: int) -> RootData:
    """sl(s+1) in its defining representation."""
    if s < 1:
        raise ValueError("rank must be >= 1")
    M = s + 1
    # Gram-Schmidt of diag(e_i - e_{i+1}) for the trace form tr(XY)
    basis = []
    for i in range(s):
        d = np.zeros(M)
        d[i], d[i + 1] = 1.0, -1.0
        for b in basis:
            d = d - np.dot(d, b) * b
        basis.append(d / np.linalg.norm(d))
    H = np.array([np.diag(d) for d in basis])
    E = np.array([_elementary(M, j, j + 1) for j in range(s)])
    F = np.array([_elementary(M, j + 1, j) for j in range(s)])
    # [H_i, E_j] = (d_i[j] - d_i[j+1]) E_j
    pairing = np.array([[basis[i][j] - basis[i][j + 1] for i in range(s)] for j in range(s)])
    return RootData(
        pairing=pairing,
        exponents=tuple(range(1, s + 1)),
        rep=Representation(H, E, F),
        name=f"A{s}",
    )


def lattice_window(i_min: int, i_max: int) -> RootData:
    """Free-end window ``i_min..i_max`` of the A-infinity lattice.

    Roots ``eps_i - eps_{i+1}`` for ``i_min <= i < i_max``; no representation.
    """
    if i_max - i_min < 1:
        raise ValueError("lattice window needs at least two sites")
    sites = list(range(i_min, i_max + 1))
    R = len(sites) - 1
    P = np.zeros((R, len(sites)))
    for a in range(R):
        P[a, a], P[a, a + 1] = 1.0, -1.0
    return RootData(pairing=P, name=f"lattice[{i_min},{i_max}]", cartan_labels=tuple(sites))


def from_config(spec: dict) -> RootData:
    """Build root data from the JSON forms

    ``{"algebra": "A", "rank": s}``, ``{"algebra": "lattice", "window": [lo, hi]}``
    or ``{"algebra": "custom", "pairing": [[...]], "rep": {"H": ..., "E": ..., "F": ...},
    "exponents": [...]}``.
    """
    kind = str(spec.get("algebra", "")).lower()
    if kind in ("a", "sl", "type_a"):
        return type_a(int(spec["rank"]))
    if kind == "lattice":
        lo, hi = spec["window"]
        return lattice_window(int(lo), int(hi))
    if kind == "custom":
        rep = None
        if spec.get("rep") is not None:
            r = spec["rep"]
            rep = Representation(
                np.array(r["H"], dtype=float), np.array(r["E"], dtype=float), np.array(r["F"], dtype=float)
            )
        return RootData(
            pairing=np.array(spec["pairing"], dtype=float),
            exponents=tuple(int(e) for e in spec.get("exponents", ())),
            rep=rep,
            name=str(spec.get("name", "custom")),
        )
    raise ValueError(f"unknown algebra {spec.get('algebra')!r}")
