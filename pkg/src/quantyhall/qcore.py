"""Dense state-vector and density-matrix algebra over named registers.

Basis indices are mixed-radix numbers with the first-listed register most
significant, so a three-qutrit ket ``|o b a>`` lives at ``9*o + 3*b + a``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, Sequence, Union

import numpy as np

EPS = 1e-9


class DegenerateStateError(ValueError):
    """Raised when a projection has zero probability."""


@dataclass(frozen=True)
class Layout:
    """Ordered registers as ``(name, dimension)`` pairs."""

    registers: tuple[tuple[str, int], ...]

    def __init__(self, registers: Iterable[tuple[str, int]]):
        regs = tuple((str(n), int(d)) for n, d in registers)
        names = [n for n, _ in regs]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate register names in {names}")
        for n, d in regs:
            if d < 2:
                raise ValueError(f"register {n!r} has dimension {d} < 2")
        object.__setattr__(self, "registers", regs)

    @cached_property
    def names(self) -> tuple[str, ...]:
        return tuple(n for n, _ in self.registers)

    @cached_property
    def dims(self) -> tuple[int, ...]:
        return tuple(d for _, d in self.registers)

    @cached_property
    def dim(self) -> int:
        return int(np.prod(self.dims, dtype=np.int64)) if self.registers else 1

    def position(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"no register named {name!r} in {self.names}") from None

    def index(self, digits: Sequence[int]) -> int:
        """Flat basis index of a digit tuple given in layout order."""
        if len(digits) != len(self.registers):
            raise ValueError("digit count does not match layout")
        return int(np.ravel_multi_index(tuple(digits), self.dims))

    def digits(self, index: int) -> tuple[int, ...]:
        return tuple(int(x) for x in np.unravel_index(index, self.dims))

    def without(self, names: Iterable[str]) -> "Layout":
        drop = set(names)
        return Layout(r for r in self.registers if r[0] not in drop)

    def __add__(self, other: "Layout") -> "Layout":
        return Layout(self.registers + other.registers)


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class PureState:
    layout: Layout
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = _frozen(self.amplitudes).reshape(-1)
        if amps.shape[0] != self.layout.dim:
            raise ValueError(
                f"{amps.shape[0]} amplitudes for layout of dimension {self.layout.dim}"
            )
        norm = np.vdot(amps, amps).real
        if abs(norm - 1.0) > EPS:
            raise ValueError(f"state is not normalized (norm^2 = {norm})")
        object.__setattr__(self, "amplitudes", amps)

    def amplitude(self, *digits: int) -> complex:
        return complex(self.amplitudes[self.layout.index(digits)])

    def density(self) -> "MixedState":
        return MixedState(self.layout, np.outer(self.amplitudes, self.amplitudes.conj()))

    def support(self, tol: float = EPS) -> list[tuple[int, ...]]:
        """Digit tuples of the basis states with non-negligible amplitude."""
        return [self.layout.digits(i) for i in np.flatnonzero(np.abs(self.amplitudes) > tol)]

    def allclose(self, other: "PureState", atol: float = EPS) -> bool:
        return self.layout == other.layout and np.allclose(
            self.amplitudes, other.amplitudes, atol=atol, rtol=0
        )


@dataclass(frozen=True, eq=False)
class MixedState:
    layout: Layout
    matrix: np.ndarray

    def __post_init__(self):
        rho = _frozen(self.matrix)
        n = self.layout.dim
        if rho.shape != (n, n):
            raise ValueError(f"density matrix shape {rho.shape} does not match dimension {n}")
        if not np.allclose(rho, rho.conj().T, atol=EPS, rtol=0):
            raise ValueError("density matrix is not Hermitian")
        tr = np.trace(rho).real
        if abs(tr - 1.0) > EPS:
            raise ValueError(f"density matrix has trace {tr}")
        if np.linalg.eigvalsh(rho).min() < -EPS:
            raise ValueError("density matrix is not positive semidefinite")
        object.__setattr__(self, "matrix", rho)

    def density(self) -> "MixedState":
        return self

    def allclose(self, other: "MixedState", atol: float = EPS) -> bool:
        return self.layout == other.layout and np.allclose(
            self.matrix, other.matrix, atol=atol, rtol=0
        )


State = Union[PureState, MixedState]


@dataclass(frozen=True, eq=False)
class Operator:
    """Square matrix acting on a layout.

    Used both for unitaries (gates, game operators) and for Hermitian
    observables such as Bell operators; see :meth:`is_unitary` and
    :meth:`is_hermitian`.
    """

    layout: Layout
    matrix: np.ndarray

    def __post_init__(self):
        m = _frozen(self.matrix)
        n = self.layout.dim
        if m.shape != (n, n):
            raise ValueError(f"operator shape {m.shape} does not match dimension {n}")
        object.__setattr__(self, "matrix", m)

    def is_unitary(self, atol: float = EPS) -> bool:
        m = self.matrix
        return bool(np.abs(m.conj().T @ m - np.eye(len(m))).max() < atol)

    def is_hermitian(self, atol: float = EPS) -> bool:
        return bool(np.abs(self.matrix - self.matrix.conj().T).max() < atol)

    def is_permutation(self) -> bool:
        m = self.matrix
        if not np.all((m == 0) | (m == 1)):
            return False
        return bool(np.all(m.sum(axis=0) == 1) and np.all(m.sum(axis=1) == 1))

    def __matmul__(self, other: "Operator") -> "Operator":
        _check_compatible(self.layout, other.layout)
        return Operator(self.layout, self.matrix @ other.matrix)

    def dagger(self) -> "Operator":
        return Operator(self.layout, self.matrix.conj().T)


def _check_compatible(a: Layout, b: Layout) -> None:
    if a.dims != b.dims:
        raise ValueError(f"incompatible layouts {a.registers} and {b.registers}")


def identity(layout: Layout) -> Operator:
    return Operator(layout, np.eye(layout.dim))


def basis_state(layout: Layout, digits: Sequence[int]) -> PureState:
    amps = np.zeros(layout.dim, dtype=complex)
    amps[layout.index(digits)] = 1.0
    return PureState(layout, amps)


def superposition(layout: Layout, terms: Mapping[tuple[int, ...], complex]) -> PureState:
    """Normalized superposition of basis kets given as ``{digits: weight}``."""
    amps = np.zeros(layout.dim, dtype=complex)
    for digits, w in terms.items():
        amps[layout.index(digits)] += w
    norm = np.linalg.norm(amps)
    if norm == 0:
        raise DegenerateStateError("all weights are zero")
    return PureState(layout, amps / norm)


def permutation_operator(layout: Layout, mapping) -> Operator:
    """Operator sending basis ket ``d`` to ``mapping(d)`` (digit tuples).

    Raises if ``mapping`` is not a bijection on the basis.
    """
    n = layout.dim
    m = np.zeros((n, n))
    for col in range(n):
        row = layout.index(mapping(layout.digits(col)))
        m[row, col] = 1.0
    op = Operator(layout, m)
    if not op.is_permutation():
        raise ValueError("mapping is not a bijection of basis states")
    return op


def tensor(a, b):
    """Kronecker product; ``a``'s registers are the more significant ones."""
    if isinstance(a, Operator) and isinstance(b, Operator):
        return Operator(a.layout + b.layout, np.kron(a.matrix, b.matrix))
    if isinstance(a, PureState) and isinstance(b, PureState):
        return PureState(a.layout + b.layout, np.kron(a.amplitudes, b.amplitudes))
    raise TypeError(f"cannot tensor {type(a).__name__} with {type(b).__name__}")


def embed(op: Operator, layout: Layout, targets: Sequence[str]) -> Operator:
    """Lift ``op`` acting on ``targets`` (in that order) to the full ``layout``."""
    targets = list(targets)
    pos = [layout.position(t) for t in targets]
    tdims = tuple(layout.dims[p] for p in pos)
    if tdims != op.layout.dims:
        raise ValueError(f"operator dims {op.layout.dims} do not match targets {tdims}")
    rest = [i for i in range(len(layout.registers)) if i not in pos]
    rest_dim = int(np.prod([layout.dims[i] for i in rest], dtype=np.int64))
    big = np.kron(op.matrix, np.eye(rest_dim))
    order = pos + rest
    dims = [layout.dims[i] for i in order]
    k = len(dims)
    t = big.reshape(dims + dims)
    # axis i of the reordered tensor belongs to register order[i]
    inv = np.argsort(order)
    t = t.transpose(list(inv) + [k + i for i in inv])
    return Operator(layout, t.reshape(layout.dim, layout.dim))


def apply(u: Operator, s: PureState) -> PureState:
    _check_compatible(u.layout, s.layout)
    return PureState(s.layout, u.matrix @ s.amplitudes)


def apply_mixed(u: Operator, m: MixedState) -> MixedState:
    _check_compatible(u.layout, m.layout)
    return MixedState(m.layout, u.matrix @ m.matrix @ u.matrix.conj().T)


def _as_list(targets: str | Sequence[str]) -> list[str]:
    return [targets] if isinstance(targets, str) else list(targets)


def _split(layout: Layout, targets: list[str]):
    pos = [layout.position(t) for t in targets]
    rest = [i for i in range(len(layout.registers)) if i not in pos]
    return pos, rest


def outcome_probabilities(state: State, targets: str | Sequence[str]) -> np.ndarray:
    """Born probabilities of the joint outcome on ``targets``.

    Outcomes are indexed mixed-radix in the order the targets are given.
    """
    targets = _as_list(targets)
    layout = state.layout
    pos, rest = _split(layout, targets)
    if isinstance(state, PureState):
        diag = np.abs(state.amplitudes) ** 2
    else:
        diag = np.diagonal(state.matrix).real
    t = diag.reshape(layout.dims).transpose(pos + rest)
    tdim = int(np.prod([layout.dims[p] for p in pos]))
    return t.reshape(tdim, -1).sum(axis=1)


def project(
    state: PureState, targets: str | Sequence[str], outcome: int, keep: bool = False
) -> tuple[float, PureState]:
    """Project ``targets`` onto ``outcome`` and renormalize.

    Returns ``(probability, residual)``.  The measured registers are dropped
    from the residual unless ``keep`` is set, in which case they stay in place
    holding the collapsed basis value.
    """
    targets = _as_list(targets)
    layout = state.layout
    pos, rest = _split(layout, targets)
    tdims = tuple(layout.dims[p] for p in pos)
    digits = np.unravel_index(outcome, tdims)
    t = state.amplitudes.reshape(layout.dims)
    index: list = [slice(None)] * len(layout.dims)
    for p, d in zip(pos, digits):
        index[p] = int(d)
    if keep:
        mask = np.zeros(layout.dims, dtype=bool)
        mask[tuple(index)] = True
        amps = np.where(mask, t, 0).reshape(-1)
        out_layout = layout
    else:
        amps = t[tuple(index)].reshape(-1)
        out_layout = layout.without(targets)
    prob = float(np.vdot(amps, amps).real)
    if prob < EPS * EPS:
        raise DegenerateStateError(
            f"outcome {outcome} on {targets} has zero probability"
        )
    return prob, PureState(out_layout, amps / np.sqrt(prob))


def measure(
    state: PureState,
    targets: str | Sequence[str],
    rng: np.random.Generator,
    keep: bool = False,
) -> tuple[int, PureState]:
    """Computational-basis measurement with collapse.

    Draws exactly one uniform variate from ``rng``.
    """
    probs = outcome_probabilities(state, targets)
    total = probs.sum()
    if total < EPS:
        raise DegenerateStateError("state has zero total probability")
    cdf = np.cumsum(probs / total)
    k = int(np.searchsorted(cdf, rng.random(), side="right"))
    k = min(k, len(probs) - 1)
    while probs[k] <= 0:  # guard the cdf edge against float ties
        k -= 1
    _, residual = project(state, targets, k, keep=keep)
    return k, residual


def expectation(h: Operator, state: State) -> float:
    if not h.is_hermitian():
        raise ValueError("expectation requires a Hermitian operator")
    _check_compatible(h.layout, state.layout)
    if isinstance(state, PureState):
        val = np.vdot(state.amplitudes, h.matrix @ state.amplitudes)
    else:
        val = np.trace(state.matrix @ h.matrix)
    if abs(val.imag) > EPS:
        raise ValueError(f"expectation has imaginary part {val.imag}")
    return float(val.real)


def mix(ensemble: Sequence[tuple[float, State]]) -> MixedState:
    """Convex combination of states."""
    if not ensemble:
        raise ValueError("empty ensemble")
    weights = np.array([w for w, _ in ensemble], dtype=float)
    if np.any(weights < -EPS):
        raise ValueError("negative weight in ensemble")
    if abs(weights.sum() - 1.0) > EPS:
        raise ValueError(f"weights sum to {weights.sum()}, not 1")
    layout = ensemble[0][1].layout
    rho = np.zeros((layout.dim, layout.dim), dtype=complex)
    for w, s in ensemble:
        _check_compatible(layout, s.layout)
        rho += w * s.density().matrix
    return MixedState(layout, rho)


def dephase(state: State) -> MixedState:
    """Drop all off-diagonal coherences in the computational basis."""
    rho = state.density().matrix
    return MixedState(state.layout, np.diag(np.diagonal(rho)))
