"""Randomized bordering of quasi-orthogonal matrices.

A trial samples an m x d sign block B, completes the d x m block C by the
no-cancellation sign rule C = sgn(B^T Q), greedily fixes the d x d corner
D (diagonal -1), and evaluates the bordered determinant exactly through
the integer Schur block N = C Q^T B - k D.  Ratios |det| / n^(n/2) are
carried in log scale.

Float products here are exact: B^T Q and C Q^T have integer entries
bounded by the order m, and the final d x d Gram product is accumulated
in float64 with entries bounded by m^2 << 2^53.
"""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .constructions import QuasiOrthogonal, build_recipe
from .exact import IntMatrix, LogScalar, det_exact, normalized_ratio


class WitnessError(ValueError):
    """Stored witness data is inconsistent with its own fields."""


class SchurConsistencyError(RuntimeError):
    """Direct and Schur-path determinants disagree (internal bug)."""


@dataclass(frozen=True)
class SearchConfig:
    trials: int = 256
    master_seed: int = 0
    greedy_order: str = "row-major"     # or "col-major"
    objective: str = "abs"              # or "signed"
    direct_check_limit: int = 64

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.greedy_order not in ("row-major", "col-major"):
            raise ValueError(f"unknown greedy_order {self.greedy_order!r}")
        if self.objective not in ("abs", "signed"):
            raise ValueError(f"unknown objective {self.objective!r}")


DEFAULT_CONFIG = SearchConfig()


@dataclass(frozen=True)
class Border:
    """The blocks bordering Q: B (m x d), C (d x m), D (d x d), G = C Q^T B."""

    B: np.ndarray
    C: np.ndarray
    D: np.ndarray
    G: IntMatrix


@dataclass(frozen=True)
class TrialResult:
    ratio: LogScalar
    trial_index: int
    n: int
    m: int
    d: int
    kind: str
    weight: int
    recipe: str
    master_seed: int | None
    det_n: int
    border: Border


def trial_generator(master_seed: int, trial_index: int) -> np.random.Generator:
    """Per-trial stream: Philox keyed by (master_seed, trial_index).

    This is the documented mixing function; streams for distinct trial
    indices are independent and the mapping is stable across runs, which
    makes parallel search order-independent.
    """
    key = np.array([master_seed & 0xFFFFFFFFFFFFFFFF,
                    trial_index & 0xFFFFFFFFFFFFFFFF], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def sample_border_columns(rng: np.random.Generator, m: int, d: int) -> np.ndarray:
    """m x d matrix of independent fair +-1 entries."""
    if m < 1 or d < 1:
        raise ValueError("m and d must be >= 1")
    return (rng.integers(0, 2, size=(m, d), dtype=np.int8) * 2 - 1).astype(np.int8)


def _float_dtype(order: int):
    # partial sums are integers bounded by the order: exact in float32 to
    # 2^24 and in float64 to 2^53
    return np.float64 if order <= 2048 else np.float32


def _qf(q: QuasiOrthogonal) -> np.ndarray:
    return q.matrix.astype(_float_dtype(q.order))


def sign_completion(b: np.ndarray, q: QuasiOrthogonal) -> np.ndarray:
    """C with C[i, j] = +1 iff (B^T Q)[i, j] >= 0 else -1 (sgn(0) = +1)."""
    return _sign_completion(b.astype(_float_dtype(q.order)), _qf(q))


def _sign_completion(bf: np.ndarray, qf: np.ndarray) -> np.ndarray:
    p = bf.T @ qf
    return np.where(p >= 0.0, 1, -1).astype(np.int8)


def gram_block(q: QuasiOrthogonal, b: np.ndarray, c: np.ndarray) -> IntMatrix:
    """Exact integer G = C Q^T B (equals weight times the Schur block F)."""
    qf = _qf(q)
    return _gram_block(qf, b.astype(qf.dtype), c.astype(qf.dtype))


def _gram_block(qf: np.ndarray, bf: np.ndarray, cf: np.ndarray) -> IntMatrix:
    cqt = cf @ qf.T                      # entries bounded by m: exact
    g = cqt.astype(np.float64) @ bf.astype(np.float64)  # bounded by m^2: exact
    return IntMatrix(np.rint(g).astype(np.int64).tolist())


def greedy_complete(g: IntMatrix, k: int, greedy_order: str = "row-major",
                    objective: str = "abs") -> tuple[np.ndarray, int]:
    """Fix D entrywise to maximize the Schur determinant N = G - k D.

    The diagonal of D is -1.  Off-diagonal positions are visited in the
    given order; each is set to the sign whose exact determinant (with the
    undecided positions held at 0) is larger, +1 winning ties.  det N is
    affine in each entry, so the final value is at least |det(G + kI)|.
    """
    d = g.rows
    midpoint_rows = [[g[i, j] + (k if i == j else 0) for j in range(d)]
                     for i in range(d)]
    work = [row[:] for row in midpoint_rows]
    d_block = -np.eye(d, dtype=np.int8)
    if greedy_order == "row-major":
        positions = [(i, j) for i in range(d) for j in range(d) if i != j]
    else:
        positions = [(i, j) for j in range(d) for i in range(d) if i != j]
    for i, j in positions:
        base = g[i, j]
        work[i][j] = base - k
        v_plus = det_exact(work)
        work[i][j] = base + k
        v_minus = det_exact(work)
        if objective == "abs":
            sign = 1 if abs(v_plus) >= abs(v_minus) else -1
        else:
            sign = 1 if v_plus >= v_minus else -1
        d_block[i, j] = sign
        work[i][j] = base - k * sign
    det_n = det_exact(work)
    if __debug__ and d > 0:
        midpoint = det_exact(midpoint_rows)
        if objective == "abs":
            assert abs(det_n) >= abs(midpoint)
        else:
            assert det_n >= midpoint
    return d_block, det_n


def _ratio_from_det(det_n: int, m: int, k: int, d: int) -> LogScalar:
    n = m + d
    if det_n == 0:
        return LogScalar(0, 0.0)
    log_det = 0.5 * m * math.log(k) + math.log(abs(det_n)) - d * math.log(k)
    return normalized_ratio(LogScalar(1, log_det), n)


def run_trial(q: QuasiOrthogonal, d: int, rng: np.random.Generator | None,
              trial_index: int = 0, master_seed: int | None = None,
              config: SearchConfig = DEFAULT_CONFIG,
              _qf_cache: np.ndarray | None = None) -> TrialResult:
    """One bordering trial; d = 0 reports the bare core ratio k^(m/2)/m^(m/2)."""
    m, k = q.order, q.weight
    if d < 0:
        raise ValueError("d must be >= 0")
    if d == 0:
        ratio = LogScalar(1, 0.5 * m * (math.log(k) - math.log(m)))
        empty = Border(B=np.zeros((m, 0), np.int8), C=np.zeros((0, m), np.int8),
                       D=np.zeros((0, 0), np.int8), G=IntMatrix([]))
        return TrialResult(ratio=ratio, trial_index=trial_index, n=m, m=m, d=0,
                           kind=q.kind, weight=k, recipe=q.recipe,
                           master_seed=master_seed, det_n=1, border=empty)
    qf = _qf(q) if _qf_cache is None else _qf_cache
    b = sample_border_columns(rng, m, d)
    return _finish_trial(q, qf, b, d, trial_index, master_seed, config)


def _finish_trial(q, qf, b, d, trial_index, master_seed, config) -> TrialResult:
    m, k = q.order, q.weight
    bf = b.astype(qf.dtype)
    c = _sign_completion(bf, qf)
    g = _gram_block(qf, bf, c.astype(qf.dtype))
    d_block, det_n = greedy_complete(g, k, config.greedy_order, config.objective)
    ratio = _ratio_from_det(det_n, m, k, d)
    return TrialResult(ratio=ratio, trial_index=trial_index, n=m + d, m=m, d=d,
                       kind=q.kind, weight=k, recipe=q.recipe,
                       master_seed=master_seed, det_n=det_n,
                       border=Border(B=b, C=c, D=d_block, G=g))


def search(q: QuasiOrthogonal, d: int, config: SearchConfig = DEFAULT_CONFIG
           ) -> TrialResult:
    """Best trial over indices 0..trials-1; deterministic for a given seed.

    The reduction takes the maximum ratio with the lowest trial index
    winning ties, so results do not depend on execution order; trials may
    run on threads (MAXDET_THREADS) since the heavy products release the GIL.
    """
    if d == 0:
        return run_trial(q, 0, None, 0, config.master_seed, config)
    qf = _qf(q)

    def one(t: int) -> TrialResult:
        rng = trial_generator(config.master_seed, t)
        return run_trial(q, d, rng, t, config.master_seed, config, _qf_cache=qf)

    threads = int(os.environ.get("MAXDET_THREADS", "1") or "1")
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = pool.map(one, range(config.trials), chunksize=8)
            best = None
            for res in results:  # input order: ties keep lowest index
                if best is None or res.ratio > best.ratio:
                    best = res
    else:
        best = None
        for t in range(config.trials):
            res = one(t)
            if best is None or res.ratio > best.ratio:
                best = res
    return best


def iter_all_borders(q: QuasiOrthogonal, d: int,
                     config: SearchConfig = DEFAULT_CONFIG):
    """Every possible B (2^(m*d) patterns), for exhaustive small cases.

    Pattern index bit t (row-major entry t of B) gives entry +1 when the
    bit is 0.  Trial index is the pattern index.
    """
    m = q.order
    if m * d > 24:
        raise ValueError("exhaustive enumeration limited to m*d <= 24")
    qf = _qf(q)
    shifts = np.arange(m * d, dtype=np.uint32)
    for pattern in range(1 << (m * d)):
        bits = (pattern >> shifts) & 1
        b = (1 - 2 * bits.astype(np.int8)).reshape(m, d)
        yield _finish_trial(q, qf, b, d, pattern, None, config)


def exhaustive_search(q: QuasiOrthogonal, d: int,
                      config: SearchConfig = DEFAULT_CONFIG) -> TrialResult:
    best = None
    for res in iter_all_borders(q, d, config):
        if best is None or res.ratio > best.ratio:
            best = res
    return best


def assemble_bordered(q: QuasiOrthogonal, border: Border) -> IntMatrix:
    """The full n x n matrix [[Q, B], [C, D]] as exact integers."""
    m, d = q.order, border.D.shape[0]
    full = np.zeros((m + d, m + d), dtype=np.int64)
    full[:m, :m] = q.matrix
    if d:
        full[:m, m:] = border.B
        full[m:, :m] = border.C
        full[m:, m:] = border.D
    return IntMatrix(full.tolist())


# ---------------------------------------------------------------------------
# witnesses


def _signs_to_str(arr) -> str:
    return "".join("+" if v > 0 else "-" for v in arr)


def witness_dict(result: TrialResult) -> dict:
    """Serializable witness; C is omitted (recomputed from B on verify)."""
    d = result.d
    d_off = [result.border.D[i, j] for i in range(d) for j in range(d) if i != j]
    return {
        "n": result.n, "m": result.m, "d": d,
        "kind": result.kind, "weight": result.weight,
        "recipe": result.recipe,
        "master_seed": result.master_seed,
        "trial_index": result.trial_index,
        "B": [_signs_to_str(row) for row in result.border.B],
        "D_off": _signs_to_str(d_off),
        "ratio_log": result.ratio.log_abs,
        "ratio_decimal": result.ratio.value(),
    }


def save_witness(path, result: TrialResult) -> None:
    with open(path, "w") as fh:
        json.dump(witness_dict(result), fh, indent=2)
        fh.write("\n")


def _parse_signs(s: str) -> list[int]:
    if not set(s) <= {"+", "-"}:
        raise WitnessError(f"bad sign string {s!r}")
    return [1 if ch == "+" else -1 for ch in s]


def _witness_blocks(w: dict) -> tuple[QuasiOrthogonal, np.ndarray, np.ndarray]:
    q = build_recipe(w["recipe"])
    m, d = w["m"], w["d"]
    if q.order != m or q.kind != w["kind"] or q.weight != w["weight"]:
        raise WitnessError("recipe does not reproduce the stated core matrix")
    if len(w["B"]) != m or any(len(row) != d for row in w["B"]):
        raise WitnessError("B block has wrong shape")
    b = np.array([_parse_signs(row) for row in w["B"]], dtype=np.int8) \
        if d else np.zeros((m, 0), np.int8)
    off = _parse_signs(w["D_off"])
    if len(off) != d * (d - 1):
        raise WitnessError("D off-diagonal block has wrong length")
    d_block = -np.eye(d, dtype=np.int8)
    it = iter(off)
    for i in range(d):
        for j in range(d):
            if i != j:
                d_block[i, j] = next(it)
    return q, b, d_block


def verify_witness(source, direct_check_limit: int | None = None) -> LogScalar:
    """Recompute a witness's ratio from scratch; raise on any inconsistency.

    Accepts a TrialResult, a witness dict, or a path to a witness file.
    For n within the direct-check limit the full bordered matrix is
    assembled and its exact determinant is checked against the Schur path:
    |det A~| * k^d = k^(m/2) * |det N| as integers.
    """
    if isinstance(source, TrialResult):
        w = witness_dict(source)
        stored_c = source.border.C
    elif isinstance(source, dict):
        w, stored_c = source, None
    else:
        with open(source) as fh:
            w = json.load(fh)
        stored_c = None

    q, b, d_block = _witness_blocks(w)
    m, d, k, n = w["m"], w["d"], w["weight"], w["n"]
    if n != m + d:
        raise WitnessError("n != m + d")

    if d == 0:
        ratio = LogScalar(1, 0.5 * m * (math.log(k) - math.log(m)))
        det_n = 1
        c = np.zeros((0, m), np.int8)
    else:
        c = sign_completion(b, q)
        if stored_c is not None and not np.array_equal(c, stored_c):
            raise WitnessError("stored C does not match sign completion of B")
        g = gram_block(q, b, c)
        n_mat = IntMatrix([[g[i, j] - k * int(d_block[i, j]) for j in range(d)]
                           for i in range(d)])
        det_n = det_exact(n_mat)
        ratio = _ratio_from_det(det_n, m, k, d)

    stored_sign = 0 if w["ratio_decimal"] == 0 else 1
    if ratio.sign != stored_sign or abs(ratio.log_abs - w["ratio_log"]) > 1e-9:
        raise WitnessError(
            f"stored ratio_log {w['ratio_log']} does not match recomputed "
            f"{ratio.log_abs}")

    limit = DEFAULT_CONFIG.direct_check_limit if direct_check_limit is None \
        else direct_check_limit
    if n <= limit:
        border = Border(B=b, C=c, D=d_block, G=IntMatrix([]))
        full = assemble_bordered(q, border)
        det_full = det_exact(full)
        if abs(det_full) * k ** d != math.isqrt(k ** m) * abs(det_n):
            raise SchurConsistencyError(
                f"direct determinant {det_full} inconsistent with Schur "
                f"value {det_n} at (m={m}, d={d}, k={k})")
    return ratio
