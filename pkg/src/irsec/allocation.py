"""Energy model and Gas-ranked computational resource allocation.

Sensors are ranked by the Gas they pay, servers by computing power
(f/c).  The proposed scheme masks rank mismatches beyond a
dissatisfaction threshold and solves the remaining band with a
minimum-cost perfect matching; bidding, grouping, and unconstrained
energy minimization (ECM) serve as baselines.

The array-level helpers (rank_desc, energy_matrix, band_masked,
solve_entries, solve_groups) carry the Monte Carlo hot path; the
dataclass API wraps them for single instances.
"""

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from ._km_kernels import km_solve_kernel


class InfeasibleMatchingError(RuntimeError):
    """No finite-cost perfect matching exists."""


class ConfigurationError(ValueError):
    """Inconsistent allocation inputs (e.g. fewer servers than sensors)."""


@dataclass(frozen=True)
class Task:
    """One sensor's offloading job: payload size, paid Gas, link figures."""

    data_bits: float
    gas: float
    power_w: float
    ergodic_rate: float  # bit/s/Hz, may be 0 (upload impossible)

    def __post_init__(self):
        if self.data_bits < 0 or self.gas <= 0 or self.power_w <= 0:
            raise ValueError("invalid task parameters")
        if self.ergodic_rate < 0:
            raise ValueError("ergodic_rate must be nonnegative")


@dataclass(frozen=True)
class Server:
    """MEC server: cycle rate f, cycles per bit c, energy coefficient eta."""

    cycles_per_sec: float
    cycles_per_bit: float
    energy_coeff: float

    def __post_init__(self):
        if min(self.cycles_per_sec, self.cycles_per_bit, self.energy_coeff) <= 0:
            raise ValueError("server parameters must be positive")

    @property
    def computing_power(self) -> float:
        return self.cycles_per_sec / self.cycles_per_bit


@dataclass(frozen=True)
class CostMatrix:
    """Rank-ordered energy costs, +inf outside the dissatisfaction band.

    entries[i, k] is the energy of giving the i-th Gas-ranked sensor the
    k-th power-ranked server; row_order/col_order map ranked positions
    back to the original task/server indices.
    """

    entries: np.ndarray
    row_order: np.ndarray
    col_order: np.ndarray
    epsilon: int


@dataclass(frozen=True)
class Matching:
    """Perfect matching in ranked index space plus its total energy."""

    assignment: np.ndarray  # ranked sensor i -> ranked server assignment[i]
    total_energy: float


# ---------------------------------------------------------------------------
# array-level core

def rank_desc(values) -> np.ndarray:
    """Indices sorting values descending, original order kept under ties."""
    return np.argsort(-np.asarray(values, dtype=float), kind="stable")


def energy_matrix(data_bits, power_w, rates, f, c, eta, bandwidth_hz) -> np.ndarray:
    """Pairwise energies eta c D f^2 + D P / (R B); +inf where R is zero."""
    d = np.asarray(data_bits, dtype=float)
    p = np.asarray(power_w, dtype=float)
    r = np.asarray(rates, dtype=float)
    f = np.asarray(f, dtype=float)
    c = np.asarray(c, dtype=float)
    eta = np.asarray(eta, dtype=float)
    compute = d[:, None] * (eta * c * f**2)[None, :]
    with np.errstate(divide="ignore"):
        per_hz = np.where(r > 0.0, p / (np.maximum(r, 1e-300) * bandwidth_hz), np.inf)
    return compute + (d * per_hz)[:, None]


def band_masked(entries: np.ndarray, epsilon: int) -> np.ndarray:
    """Copy of a ranked matrix with |i-k| > epsilon set to +inf."""
    n = entries.shape[0]
    i, k = np.indices((n, n))
    out = entries.copy()
    out[np.abs(i - k) > epsilon] = np.inf
    return out


def assignment_total(entries: np.ndarray, assignment: np.ndarray) -> float:
    """Total cost of a matching, summed the same way for every scheme."""
    n = entries.shape[0]
    return float(entries[np.arange(n), assignment].sum())


def solve_entries(entries: np.ndarray):
    """Minimum-cost perfect matching; raises when no finite one exists."""
    assignment, feasible = km_solve_kernel(entries)
    if not feasible:
        raise InfeasibleMatchingError(
            "no finite-cost perfect matching (some in-band rate is zero)")
    return assignment, assignment_total(entries, assignment)


def solve_groups(entries: np.ndarray, n_groups: int):
    """Blockwise matching on contiguous rank groups; remainder joins the last."""
    n = entries.shape[0]
    if not 1 <= n_groups <= n:
        raise ValueError("n_groups must lie in [1, n]")
    size = n // n_groups
    assignment = np.empty(n, dtype=np.int64)
    for g in range(n_groups):
        lo = g * size
        hi = (g + 1) * size if g < n_groups - 1 else n
        sub, feasible = km_solve_kernel(entries[lo:hi, lo:hi])
        if not feasible:
            raise InfeasibleMatchingError(f"group {g} has no finite matching")
        assignment[lo:hi] = sub + lo
    return assignment, assignment_total(entries, assignment)


# ---------------------------------------------------------------------------
# single-instance API

def offload_energy(task: Task, server: Server, bandwidth_hz: float) -> float:
    """Energy of running one task on one server: compute plus upload term.

    A zero ergodic rate makes the upload impossible and the cost +inf.
    """
    compute = (server.energy_coeff * server.cycles_per_bit
               * task.data_bits * server.cycles_per_sec**2)
    if task.ergodic_rate == 0.0:
        return np.inf
    upload = task.data_bits * task.power_w / (task.ergodic_rate * bandwidth_hz)
    return compute + upload


def rank_sensors(tasks: Sequence[Task]) -> np.ndarray:
    """Indices of tasks in descending-Gas order (stable under ties)."""
    return rank_desc([t.gas for t in tasks])


def rank_servers(servers: Sequence[Server], n_keep: Optional[int] = None) -> np.ndarray:
    """Indices of servers by descending f/c, truncated to the strongest n_keep."""
    if n_keep is not None and n_keep > len(servers):
        raise ConfigurationError(
            f"need at least {n_keep} servers, have {len(servers)}")
    order = rank_desc([s.computing_power for s in servers])
    return order if n_keep is None else order[:n_keep]


def dissatisfaction(sensor_rank: int, server_rank: int, assigned: bool) -> int:
    """Rank gap |r(V_i) - r(f_k/c_k)| when assigned, else 0."""
    return abs(sensor_rank - server_rank) if assigned else 0


def build_cost_matrix(tasks: Sequence[Task], servers: Sequence[Server],
                      bandwidth_hz: float, epsilon: int) -> CostMatrix:
    """Ranked energy matrix with the |i-k| <= epsilon band kept finite."""
    n = len(tasks)
    if not 0 <= epsilon <= n - 1:
        raise ValueError(f"epsilon must lie in [0, {n - 1}]")
    row_order = rank_sensors(tasks)
    col_order = rank_servers(servers, n_keep=n)
    entries = energy_matrix(
        [tasks[i].data_bits for i in row_order],
        [tasks[i].power_w for i in row_order],
        [tasks[i].ergodic_rate for i in row_order],
        [servers[k].cycles_per_sec for k in col_order],
        [servers[k].cycles_per_bit for k in col_order],
        [servers[k].energy_coeff for k in col_order],
        bandwidth_hz,
    )
    return CostMatrix(entries=band_masked(entries, epsilon),
                      row_order=row_order, col_order=col_order, epsilon=epsilon)


def with_band(costs: CostMatrix, epsilon: int) -> CostMatrix:
    """Narrow an existing matrix to a smaller dissatisfaction band."""
    if epsilon > costs.epsilon:
        raise ValueError("cannot widen a band once masked")
    return CostMatrix(entries=band_masked(costs.entries, epsilon),
                      row_order=costs.row_order, col_order=costs.col_order,
                      epsilon=epsilon)


def km_solve(costs: CostMatrix) -> Matching:
    """Minimum-total-energy perfect matching over the finite entries."""
    assignment, total = solve_entries(costs.entries)
    return Matching(assignment=assignment, total_energy=total)


def max_dissatisfaction(matching: Matching) -> int:
    """Largest rank gap produced by a matching."""
    n = matching.assignment.shape[0]
    if n == 0:
        return 0
    return int(np.abs(matching.assignment - np.arange(n)).max())


def bidding_allocate(tasks, servers, bandwidth_hz: float) -> Matching:
    """Highest Gas gets the strongest server: identity on ranked indices."""
    costs = build_cost_matrix(tasks, servers, bandwidth_hz, epsilon=0)
    identity = np.arange(len(tasks), dtype=np.int64)
    return Matching(assignment=identity,
                    total_energy=assignment_total(costs.entries, identity))


def ecm_allocate(tasks, servers, bandwidth_hz: float) -> Matching:
    """Unconstrained energy-consumption minimization over all pairs."""
    n = len(tasks)
    return km_solve(build_cost_matrix(tasks, servers, bandwidth_hz, epsilon=n - 1))


def group_allocate(tasks, servers, bandwidth_hz: float, n_groups: int = 4) -> Matching:
    """Contiguous Gas-ranked groups, each energy-optimal within its block."""
    n = len(tasks)
    costs = build_cost_matrix(tasks, servers, bandwidth_hz, epsilon=n - 1)
    assignment, total = solve_groups(costs.entries, n_groups)
    return Matching(assignment=assignment, total_energy=total)


def proposed_allocate(tasks, servers, bandwidth_hz: float, epsilon: int) -> Matching:
    """Gas-oriented scheme: band-restricted minimum-energy matching."""
    return km_solve(build_cost_matrix(tasks, servers, bandwidth_hz, epsilon))
