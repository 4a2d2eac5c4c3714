"""Noisy qubit/qutrit phase estimation: channels, QFI, and global MI caps.

The phase is imprinted by the gate U_phi = diag(1, e^{i phi}, 1, ...) and
degraded by one of three Kraus families (dephasing, amplitude damping,
erasure) parameterized by a noise strength eta in (0, 1], eta = 1 noiseless.
Known Fisher-information caps for N noisy gates translate into global
mutual-information caps ln(1 + pi sqrt(F_cap)) on the phase interval
[0, 2 pi), which is where the Heisenberg-to-SQL transition shows up.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bounds import BoundReport, NATS, UPPER_MI
from .numerics import ParameterGrid
from .stat_model import ConditionalModel

__all__ = [
    "DensityMatrix",
    "KrausChannel",
    "PhaseChannelFamily",
    "Povm",
    "asymptotic_fi_cap",
    "channel_outcome_model",
    "classical_fi_of_povm",
    "finite_n_fi_cap",
    "make_channel",
    "mi_cap",
    "noon_family",
    "noon_outcome_model",
    "phase_gate",
    "plus_minus_povm",
    "qfi",
    "random_povm",
    "transition_sweep",
]

MATRIX_TOL = 1e-12     # hermiticity / trace / completeness / POVM resolution
PSD_TOL = 1e-10        # eigenvalue negativity allowance for states
QFI_EIG_TOL = 1e-12    # eigenvalue-sum regularization in the QFI formula

CHANNEL_KINDS = ("dephasing", "amplitude-damping", "erasure")


def _as_matrix(rho) -> np.ndarray:
    if isinstance(rho, DensityMatrix):
        return rho.matrix
    return np.asarray(rho, dtype=complex)


@dataclass(frozen=True)
class DensityMatrix:
    """Validated density matrix: Hermitian, unit trace, positive semidefinite."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex, copy=True)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"density matrix must be square, got {m.shape}")
        if np.max(np.abs(m - m.conj().T)) > MATRIX_TOL:
            raise ValueError("density matrix is not Hermitian")
        if abs(np.trace(m).real - 1.0) > MATRIX_TOL or abs(np.trace(m).imag) > MATRIX_TOL:
            raise ValueError("density matrix trace must be 1")
        if np.min(np.linalg.eigvalsh(m)) < -PSD_TOL:
            raise ValueError("density matrix has a negative eigenvalue")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @classmethod
    def pure(cls, statevector) -> "DensityMatrix":
        psi = np.asarray(statevector, dtype=complex)
        psi = psi / np.linalg.norm(psi)
        return cls(np.outer(psi, psi.conj()))


@dataclass(frozen=True)
class KrausChannel:
    """CPTP map given by Kraus operators; sum_k K_k^dag K_k = identity."""

    kraus: tuple
    eta: float
    kind: str
    phi: float = 0.0

    def __post_init__(self):
        ops = tuple(np.asarray(k, dtype=complex) for k in self.kraus)
        if not ops:
            raise ValueError("channel needs at least one Kraus operator")
        dim = ops[0].shape[0]
        total = sum(k.conj().T @ k for k in ops)
        if np.max(np.abs(total - np.eye(dim))) > MATRIX_TOL:
            raise ValueError("Kraus operators do not resolve the identity")
        object.__setattr__(self, "kraus", ops)

    @property
    def dim(self) -> int:
        return self.kraus[0].shape[0]

    def apply(self, rho) -> np.ndarray:
        r = _as_matrix(rho)
        return sum(k @ r @ k.conj().T for k in self.kraus)


@dataclass(frozen=True)
class Povm:
    """Positive operator-valued measure: M_x >= 0, sum_x M_x = identity."""

    elements: tuple

    def __post_init__(self):
        ops = tuple(np.asarray(m, dtype=complex) for m in self.elements)
        if not ops:
            raise ValueError("POVM needs at least one element")
        dim = ops[0].shape[0]
        for i, m in enumerate(ops):
            if np.max(np.abs(m - m.conj().T)) > MATRIX_TOL:
                raise ValueError(f"POVM element {i} is not Hermitian")
            if np.min(np.linalg.eigvalsh(m)) < -MATRIX_TOL:
                raise ValueError(f"POVM element {i} is not positive semidefinite")
        if np.max(np.abs(sum(ops) - np.eye(dim))) > MATRIX_TOL:
            raise ValueError("POVM elements do not resolve the identity")
        object.__setattr__(self, "elements", ops)

    @property
    def dim(self) -> int:
        return self.elements[0].shape[0]

    @property
    def n_outcomes(self) -> int:
        return len(self.elements)


def phase_gate(phi: float, dim: int = 2) -> np.ndarray:
    """Diagonal unitary putting the phase e^{i phi} on level |1> only.

    Extra levels (the erasure channel's loss level) are untouched.
    """
    if dim < 2:
        raise ValueError(f"phase gate needs dim >= 2, got {dim}")
    diag = np.ones(dim, dtype=complex)
    diag[1] = np.exp(1j * phi)
    return np.diag(diag)


def _noise_kraus(kind: str, eta: float) -> tuple:
    if kind == "dephasing":
        k0 = math.sqrt((1.0 + math.sqrt(eta)) / 2.0) * np.eye(2, dtype=complex)
        k1 = math.sqrt((1.0 - math.sqrt(eta)) / 2.0) * np.diag([1.0, -1.0]).astype(complex)
        return (k0, k1)
    if kind == "amplitude-damping":
        k0 = np.array([[1.0, 0.0], [0.0, math.sqrt(eta)]], dtype=complex)
        k1 = np.array([[0.0, math.sqrt(1.0 - eta)], [0.0, 0.0]], dtype=complex)
        return (k0, k1)
    if kind == "erasure":
        s, r = math.sqrt(eta), math.sqrt(1.0 - eta)
        k0 = np.diag([s, s, 0.0]).astype(complex)
        k1 = np.zeros((3, 3), dtype=complex)
        k1[2, 2] = 1.0
        k2 = np.zeros((3, 3), dtype=complex)
        k2[2, 0] = r
        k3 = np.zeros((3, 3), dtype=complex)
        k3[2, 1] = r
        return (k0, k1, k2, k3)
    raise ValueError(f"unknown channel kind {kind!r}; expected one of {CHANNEL_KINDS}")


def make_channel(kind: str, eta: float, phi: float) -> KrausChannel:
    """Phase-encoding noisy channel rho -> sum_k K_k U_phi rho U_phi^dag K_k^dag.

    The returned Kraus operators are the noise operators composed with the
    phase gate; erasure lives on a qutrit whose third level marks the loss.
    """
    if not 0.0 < eta <= 1.0:
        raise ValueError(f"eta must be in (0, 1], got {eta}")
    noise = _noise_kraus(kind, eta)
    u = phase_gate(phi, noise[0].shape[0])
    return KrausChannel(tuple(k @ u for k in noise), eta, kind, phi)


@dataclass(frozen=True)
class PhaseChannelFamily:
    """phi -> Lambda(U_{g phi} rho0 U^dag) with an analytic phi-derivative.

    ``gates`` winds the phase g times before the single noise application,
    which is exactly the N00N-subspace equivalence of g sequential noiseless
    gates.  The derivative uses d(U rho U^dag)/d phi = i g [G, U rho U^dag]
    with G the |1><1| projector, then pushes through the (phi-independent)
    noise.
    """

    kind: str
    eta: float
    rho0: np.ndarray
    gates: int = 1

    def __post_init__(self):
        if self.gates < 1:
            raise ValueError(f"gates must be >= 1, got {self.gates}")
        if not 0.0 < self.eta <= 1.0:
            raise ValueError(f"eta must be in (0, 1], got {self.eta}")
        noise = _noise_kraus(self.kind, self.eta)  # validates kind
        rho = _as_matrix(self.rho0)
        if rho.shape[0] != noise[0].shape[0]:
            raise ValueError(
                f"input state dim {rho.shape[0]} does not match channel dim {noise[0].shape[0]}")
        object.__setattr__(self, "rho0", rho)

    def _unitary_state(self, phi: float) -> np.ndarray:
        u = phase_gate(self.gates * phi, self.rho0.shape[0])
        return u @ self.rho0 @ u.conj().T

    def state(self, phi: float) -> np.ndarray:
        noise = _noise_kraus(self.kind, self.eta)
        r = self._unitary_state(phi)
        return sum(k @ r @ k.conj().T for k in noise)

    def derivative(self, phi: float) -> np.ndarray:
        dim = self.rho0.shape[0]
        g = np.zeros((dim, dim), dtype=complex)
        g[1, 1] = 1.0
        r = self._unitary_state(phi)
        dr = 1j * self.gates * (g @ r - r @ g)
        noise = _noise_kraus(self.kind, self.eta)
        return sum(k @ dr @ k.conj().T for k in noise)

    def __call__(self, phi: float) -> np.ndarray:
        return self.state(phi)


def noon_family(n: int) -> PhaseChannelFamily:
    """Pure |+> family accumulating phase n*phi: the N00N two-level subspace."""
    plus = DensityMatrix.pure([1.0, 1.0]).matrix
    return PhaseChannelFamily("dephasing", 1.0, plus, gates=n)


def _state_and_derivative(family, phi: float, derivative, step: float):
    if derivative is None and hasattr(family, "state") and hasattr(family, "derivative"):
        return _as_matrix(family.state(phi)), _as_matrix(family.derivative(phi))
    rho = _as_matrix(family(phi) if not hasattr(family, "state") else family.state(phi))
    if derivative is not None:
        return rho, _as_matrix(derivative(phi))
    call = family if not hasattr(family, "state") else family.state
    drho = (_as_matrix(call(phi + step)) - _as_matrix(call(phi - step))) / (2.0 * step)
    return rho, drho


def qfi(state_family, phi: float, *, derivative=None, step: float = 1e-5) -> float:
    """Quantum Fisher information of a phi-differentiable state family.

    QFI = 2 sum_{j,k: l_j + l_k > eps} |<j| d rho |k>|^2 / (l_j + l_k) over
    the eigendecomposition of rho(phi), with eps = 1e-12 handling rank
    deficiency.  The derivative is analytic when the family provides one
    (or via ``derivative``), else a central difference of the entries.
    """
    rho, drho = _state_and_derivative(state_family, phi, derivative, step)
    if np.max(np.abs(rho - rho.conj().T)) > 1e-9:
        raise ValueError("state family returned a non-Hermitian matrix")
    evals, evecs = np.linalg.eigh(rho)
    d = evecs.conj().T @ drho @ evecs
    sums = evals[:, None] + evals[None, :]
    keep = sums > QFI_EIG_TOL
    return float(2.0 * np.sum(np.abs(d[keep]) ** 2 / sums[keep]))


def classical_fi_of_povm(state_family, povm: Povm, phi: float, *,
                         derivative=None, step: float = 1e-5) -> float:
    """Fisher information of the outcome distribution p(x|phi) = tr(rho_phi M_x).

    Never exceeds the QFI of the family.  Returns inf when some outcome has
    zero probability but a nonzero probability derivative.
    """
    rho, drho = _state_and_derivative(state_family, phi, derivative, step)
    fi = 0.0
    for m in povm.elements:
        p = float(np.trace(rho @ m).real)
        dp = float(np.trace(drho @ m).real)
        if p <= 0.0:
            if abs(dp) > 1e-9:
                return math.inf
            continue
        fi += dp * dp / p
    return fi


def plus_minus_povm(dim: int = 2) -> Povm:
    """sigma_x-basis measurement on the qubit block; the loss level, if any, is its own outcome."""
    plus = np.zeros((dim, dim), dtype=complex)
    plus[:2, :2] = 0.5 * np.array([[1.0, 1.0], [1.0, 1.0]])
    minus = np.zeros((dim, dim), dtype=complex)
    minus[:2, :2] = 0.5 * np.array([[1.0, -1.0], [-1.0, 1.0]])
    if dim == 2:
        return Povm((plus, minus))
    rest = np.eye(dim, dtype=complex)
    rest[:2, :2] = 0.0
    return Povm((plus, minus, rest))


def random_povm(rng: np.random.Generator, dim: int, n_outcomes: int) -> Povm:
    """Random POVM: normalized random positive operators, S^{-1/2} E_x S^{-1/2}."""
    if n_outcomes < 2:
        raise ValueError(f"need at least 2 outcomes, got {n_outcomes}")
    raw = []
    for _ in range(n_outcomes):
        a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
        raw.append(a @ a.conj().T)
    total = sum(raw)
    evals, evecs = np.linalg.eigh(total)
    inv_sqrt = evecs @ np.diag(evals ** -0.5) @ evecs.conj().T
    return Povm(tuple(inv_sqrt @ e @ inv_sqrt for e in raw))


def asymptotic_fi_cap(n: int, eta: float) -> float:
    """Asymptotic Fisher-information cap for N noisy phase gates: N eta / (1 - eta).

    Valid for dephasing and erasure under any adaptive strategy.  At eta = 1
    there is no cap (noiseless case); inf is returned as the divergence flag.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if not 0.0 < eta <= 1.0:
        raise ValueError(f"eta must be in (0, 1], got {eta}")
    if eta == 1.0:
        return math.inf
    return n * eta / (1.0 - eta)


def finite_n_fi_cap(n: int, eta: float) -> float:
    """Finite-N Fisher cap N F_as / (1 + F_as / N), entanglement-assisted strategy.

    Computed as N^2 eta / (eta + N (1 - eta)), which is stable in the
    noiseless limit where it degenerates to the Heisenberg value N^2.  Never
    exceeds the asymptotic cap nor N^2.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if not 0.0 < eta <= 1.0:
        raise ValueError(f"eta must be in (0, 1], got {eta}")
    return n * n * eta / (eta + n * (1.0 - eta))


def mi_cap(n: int, eta: float, regime: str = "finite-N", kind: str = "dephasing",
           fi_cap: float | None = None) -> BoundReport:
    """Global MI cap for N noisy phase gates on phi in [0, 2 pi): ln(1 + pi sqrt(F_cap)).

    This is the finite-support MI bound with the Fisher information replaced
    by its channel cap, so it holds for any input state and measurement.
    The builtin cap formulas are the dephasing/erasure ones; the exact
    amplitude-damping cap differs and is not built in, so that channel either
    takes an explicit ``fi_cap`` or falls back to the dephasing cap with a
    caveat flag.
    """
    if kind not in CHANNEL_KINDS:
        raise ValueError(f"unknown channel kind {kind!r}; expected one of {CHANNEL_KINDS}")
    flags: tuple = ()
    if fi_cap is not None:
        if fi_cap < 0.0:
            raise ValueError(f"fi_cap must be nonnegative, got {fi_cap}")
        cap = float(fi_cap)
        flags += ("configured-fi-cap",)
    elif regime == "asymptotic":
        cap = asymptotic_fi_cap(n, eta)
    elif regime == "finite-N":
        cap = finite_n_fi_cap(n, eta)
    else:
        raise ValueError(f"unknown regime {regime!r}; expected 'asymptotic' or 'finite-N'")
    if kind == "amplitude-damping" and fi_cap is None:
        flags += ("amplitude-damping-default-cap",)
    if eta == 1.0:
        flags += ("noiseless-no-cap",)
    value = math.inf if math.isinf(cap) else math.log1p(math.pi * math.sqrt(cap))
    return BoundReport(
        name=f"mi-cap-{regime}",
        value=value,
        units=NATS,
        direction=UPPER_MI,
        inputs={"N": n, "eta": eta, "regime": regime, "kind": kind, "fi_cap": cap},
        flags=flags,
    )


def transition_sweep(eta: float, n_values, regime: str = "finite-N") -> list[dict]:
    """MI cap versus N, with reference scalings and a local slope.

    Rows carry the cap in nats, the Heisenberg (ln N) and standard-quantum-
    limit (ln(N)/2) reference scalings, and the local log-log slope of the
    bound argument pi sqrt(F_cap(N)).  In the default finite-N regime the
    slope moves from 1 (Heisenberg) to 1/2 (SQL) around N ~ eta/(1-eta);
    stronger noise moves the transition to smaller N.
    """
    ns = np.array(sorted(set(int(n) for n in n_values)), dtype=np.int64)
    if ns.size < 2:
        raise ValueError("need at least two distinct N values for a sweep")
    if ns[0] < 1:
        raise ValueError("N values must be >= 1")
    if regime == "finite-N":
        cap_fn = finite_n_fi_cap
    elif regime == "asymptotic":
        cap_fn = asymptotic_fi_cap
    else:
        raise ValueError(f"unknown regime {regime!r}; expected 'asymptotic' or 'finite-N'")
    caps = np.array([cap_fn(int(n), eta) for n in ns])
    arg = math.pi * np.sqrt(caps)
    slope = np.gradient(np.log(arg), np.log(ns.astype(float)))
    rows = []
    for i, n in enumerate(ns):
        rows.append({
            "eta": eta,
            "N": int(n),
            "mi_cap_nats": float(np.log1p(arg[i])),
            "hs_ref": float(np.log(n)),
            "sql_ref": float(0.5 * np.log(n)),
            "slope": float(slope[i]),
        })
    return rows


def _family_outcome_model(family: PhaseChannelFamily, povm: Povm,
                          grid: ParameterGrid) -> ConditionalModel:
    if povm.dim != family.rho0.shape[0]:
        raise ValueError(f"POVM dim {povm.dim} does not match state dim {family.rho0.shape[0]}")
    probs = np.empty((povm.n_outcomes, grid.points))
    dprobs = np.empty_like(probs)
    for g, phi in enumerate(grid.values):
        rho = family.state(phi)
        drho = family.derivative(phi)
        for x, m in enumerate(povm.elements):
            probs[x, g] = np.trace(rho @ m).real
            dprobs[x, g] = np.trace(drho @ m).real
    np.clip(probs, 0.0, None, out=probs)
    probs /= probs.sum(axis=0, keepdims=True)
    return ConditionalModel(grid, probs, dprobs, "analytic")


def noon_outcome_model(n: int, povm: Povm | None = None,
                       grid: ParameterGrid | None = None) -> ConditionalModel:
    """Outcome model of a measured N00N family: p(x|phi) = tr(rho_{N phi} M_x).

    The family has QFI N^2, yet being confined to a two-dimensional subspace
    it can deliver at most ln 2 nats of mutual information; feeding this
    model to the MI oracle exhibits exactly that ceiling.
    """
    if grid is None:
        grid = ParameterGrid(0.0, 2.0 * math.pi, 2001)
    if povm is None:
        povm = plus_minus_povm(2)
    return _family_outcome_model(noon_family(n), povm, grid)


def channel_outcome_model(kind: str, eta: float, grid: ParameterGrid,
                          rho0=None, povm: Povm | None = None) -> ConditionalModel:
    """Outcome model of a measured noisy phase channel on the given grid."""
    dim = 3 if kind == "erasure" else 2
    if rho0 is None:
        psi = np.zeros(dim, dtype=complex)
        psi[0] = psi[1] = 1.0
        rho0 = DensityMatrix.pure(psi).matrix
    if povm is None:
        povm = plus_minus_povm(dim)
    family = PhaseChannelFamily(kind, eta, rho0)
    return _family_outcome_model(family, povm, grid)
