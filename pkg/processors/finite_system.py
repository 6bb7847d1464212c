"""
有限系統驗證模組
在有限 N 下精確計算 Hamiltonian、經驗磁化分佈 ν_N，
並與自由能的 Stirling 展開比較
"""

import math
import logging
import itertools
from dataclasses import dataclass, field
from typing import Callable, Dict, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd
from scipy.special import gammaln, logsumexp

from core.config import VerifierConfig
from core.exceptions import CapacityError, DomainError
from core.model import Coupling, ModelParams, PairMagnetization
from processors.landscape import free_energy_array


logger = logging.getLogger("CWPLogger")

STIRLING_SIZES = (10, 20, 40)
MAX_MEASURABILITY_N = 8
MAX_BRUTE_FORCE_STATES = 1_000_000


# ============================================================================
# 資料結構
# ============================================================================

@dataclass(frozen=True)
class SpinConfiguration:
    """兩個成分各 N 個自旋，取值 1..q"""
    first: Tuple[int, ...]
    second: Tuple[int, ...]
    q: int

    def __post_init__(self):
        object.__setattr__(self, 'first', tuple(int(s) for s in self.first))
        object.__setattr__(self, 'second', tuple(int(s) for s in self.second))
        if len(self.first) != len(self.second) or len(self.first) < 1:
            raise DomainError(f"兩個成分必須有相同且 ≥ 1 的長度：{len(self.first)} 與 {len(self.second)}")
        if any(not 1 <= s <= self.q for s in self.first + self.second):
            raise DomainError(f"自旋必須位於 1..{self.q}")

    @property
    def N(self) -> int:
        return len(self.first)


@dataclass(frozen=True)
class LatticePoint:
    """Ξ_N² 上的格點：兩組各 q 個非負整數，和均為 N"""
    first: Tuple[int, ...]
    second: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, 'first', tuple(int(n) for n in self.first))
        object.__setattr__(self, 'second', tuple(int(n) for n in self.second))
        if len(self.first) != len(self.second):
            raise DomainError("兩個成分的 q 不一致")
        if any(n < 0 for n in self.first + self.second):
            raise DomainError(f"計數必須非負：{self.first}, {self.second}")
        if sum(self.first) != sum(self.second) or sum(self.first) < 1:
            raise DomainError(f"兩個成分的計數和必須相同且 ≥ 1：{self.first}, {self.second}")

    @property
    def N(self) -> int:
        return sum(self.first)

    def as_magnetization(self) -> PairMagnetization:
        N = self.N
        return PairMagnetization.from_weights([n / N for n in self.first], [n / N for n in self.second])


@dataclass(frozen=True, eq=False)
class DistributionTable:
    """
    ν_N 的精確對數機率表

    log_probs[i, j] 為 (compositions[i], compositions[j]) 的對數機率
    """
    N: int
    params: ModelParams
    compositions: np.ndarray
    log_probs: np.ndarray
    _index: Dict[Tuple[int, ...], int] = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, '_index', {tuple(int(n) for n in row): i
                                            for i, row in enumerate(self.compositions)})

    def log_prob(self, point: LatticePoint) -> float:
        try:
            return float(self.log_probs[self._index[point.first], self._index[point.second]])
        except KeyError:
            raise DomainError(f"格點不在 Ξ_{self.N}² 上：{point}")

    def argmax(self) -> LatticePoint:
        i, j = np.unravel_index(int(np.argmax(self.log_probs)), self.log_probs.shape)
        return LatticePoint(tuple(self.compositions[i]), tuple(self.compositions[j]))

    def total_mass(self) -> float:
        return float(np.sum(np.exp(self.log_probs)))

    def _distances(self, point: PairMagnetization) -> np.ndarray:
        """每個格點與 point 的 ∞-範數距離，形狀 (M, M)"""
        x = self.compositions / self.N
        target = point.as_array()
        d_first = np.max(np.abs(x - target[0]), axis=1)
        d_second = np.max(np.abs(x - target[1]), axis=1)
        return np.maximum(d_first[:, None], d_second[None, :])

    def mass_within(self, points: Sequence[PairMagnetization], radius: float) -> float:
        """與任一給定點的 ∞-範數距離 ≤ radius 的總機率"""
        mask = np.zeros(self.log_probs.shape, dtype=bool)
        for point in points:
            mask |= self._distances(point) <= radius + 1e-12
        return float(np.sum(np.exp(self.log_probs[mask])))

    def to_frame(self) -> pd.DataFrame:
        """欄位 n1..nq（第一成分）、m1..mq（第二成分）、log_prob"""
        q = self.compositions.shape[1]
        m = len(self.compositions)
        frame = pd.DataFrame(np.repeat(self.compositions, m, axis=0), columns=[f"n{i + 1}" for i in range(q)])
        second = pd.DataFrame(np.tile(self.compositions, (m, 1)), columns=[f"m{i + 1}" for i in range(q)])
        frame = pd.concat([frame, second], axis=1)
        frame['log_prob'] = self.log_probs.reshape(-1)
        return frame


# ============================================================================
# Hamiltonian 與磁化
# ============================================================================

def _pair_weights(coupling: Union[float, Coupling]) -> Tuple[float, float]:
    """(成分內權重, 成分間權重)：有限 J 為 (1/(1+J), J/(1+J))，J = ∞ 為 (0, 1)"""
    if not isinstance(coupling, Coupling):
        coupling = Coupling.finite(coupling)
    if not coupling.is_finite:
        return 0.0, 1.0
    J = coupling.value
    return 1.0 / (1.0 + J), J / (1.0 + J)


def hamiltonian(config: SpinConfiguration, coupling: Union[float, Coupling]) -> float:
    """
    H_N(σ) = −(1/N)Σ_k Σ_{i<j} α·1{σ_i⁽ᵏ⁾=σ_j⁽ᵏ⁾} − (1/N)Σ_{i,j} γ·1{σ_i⁽¹⁾=σ_j⁽²⁾}

    重合對數以整數計算，相同磁化的組態得到位元相同的值
    """
    intra, inter = _pair_weights(coupling)
    first = np.asarray(config.first)
    second = np.asarray(config.second)
    N = config.N
    within = sum(int((np.sum(s[:, None] == s[None, :]) - N) // 2) for s in (first, second))
    across = int(np.sum(first[:, None] == second[None, :]))
    return -(intra * within + inter * across) / N


def magnetization(config: SpinConfiguration) -> LatticePoint:
    """每個成分的自旋計數"""
    return LatticePoint(
        tuple(np.bincount(np.asarray(config.first) - 1, minlength=config.q)),
        tuple(np.bincount(np.asarray(config.second) - 1, minlength=config.q)),
    )


# ============================================================================
# 精確分佈
# ============================================================================

def compositions(N: int, q: int) -> np.ndarray:
    """N 分成 q 個非負整數的所有組合（字典序），形狀 (C(N+q−1, q−1), q)"""
    rows = []
    for bars in itertools.combinations(range(N + q - 1), q - 1):
        edges = (-1,) + bars + (N + q - 1,)
        rows.append([edges[i + 1] - edges[i] - 1 for i in range(q)])
    return np.asarray(rows, dtype=np.int64)


def _check_capacity(N: int, q: int, config: VerifierConfig) -> None:
    m = math.comb(N + q - 1, q - 1)
    required = 8 * m * m
    cap = config.max_n(q)
    if cap is not None:
        exceeded = N > cap
        limit = f"N ≤ {cap}"
    else:
        exceeded = m * m > config.max_entries
        limit = f"|Ξ_N|² ≤ {config.max_entries}"
    if exceeded:
        raise CapacityError(
            f"N={N}, q={q} 超出精確列舉上限 ({limit})，約需 {required / 2 ** 20:.1f} MiB",
            required_bytes=required,
        )


def exact_nu(N: int, params: ModelParams, config: Optional[VerifierConfig] = None) -> DistributionTable:
    """
    精確計算 ν_N

    log 權重 = log 多項式係數(n) + log 多項式係數(m)
              + (β/N)[α Σ_k Σ_i n_i(n_i−1)/2 + γ Σ_i n_i m_i]，再以 log-sum-exp 正規化

    Raises:
        CapacityError: N 超過上限
    """
    config = config or VerifierConfig()
    if N < 1:
        raise DomainError(f"N 必須 ≥ 1，收到 {N}")
    _check_capacity(N, params.q, config)

    intra, inter = _pair_weights(params.coupling)
    comps = compositions(N, params.q)
    counts = comps.astype(float)
    log_multinomial = gammaln(N + 1.0) - np.sum(gammaln(counts + 1.0), axis=1)
    self_pairs = 0.5 * np.sum(counts * (counts - 1.0), axis=1)
    cross = counts @ counts.T

    log_weights = (log_multinomial[:, None] + log_multinomial[None, :]
                   + (params.beta / N) * (intra * (self_pairs[:, None] + self_pairs[None, :]) + inter * cross))
    log_probs = log_weights - logsumexp(log_weights)
    logger.debug(f"ν_{N}：{params}，{len(comps) ** 2} 個格點")
    return DistributionTable(N, params, comps, log_probs)


def enumerate_nu(N: int, params: ModelParams) -> DistributionTable:
    """逐一列舉 q^{2N} 個組態並依磁化分組（小 N 的對照組）"""
    q = params.q
    states = q ** (2 * N)
    if states > MAX_BRUTE_FORCE_STATES:
        raise CapacityError(f"暴力列舉 q^(2N) = {states} 個組態超出上限 {MAX_BRUTE_FORCE_STATES}",
                            required_bytes=8 * states)
    comps = compositions(N, q)
    index = {tuple(int(n) for n in row): i for i, row in enumerate(comps)}
    grouped: Dict[Tuple[int, int], list] = {}
    for spins in itertools.product(range(1, q + 1), repeat=2 * N):
        config = SpinConfiguration(spins[:N], spins[N:], q)
        point = magnetization(config)
        key = (index[point.first], index[point.second])
        grouped.setdefault(key, []).append(-params.beta * hamiltonian(config, params.coupling))

    log_weights = np.full((len(comps), len(comps)), -np.inf)
    for (i, j), values in grouped.items():
        log_weights[i, j] = logsumexp(values)
    return DistributionTable(N, params, comps, log_weights - logsumexp(log_weights))


# ============================================================================
# 磁化可測性
# ============================================================================

@dataclass(frozen=True)
class MeasurabilityCheck:
    """H_N 是否只依賴磁化"""
    passed: bool
    trials: int
    witness: Optional[Tuple[SpinConfiguration, SpinConfiguration]] = None

    def to_dict(self) -> dict:
        data = {'passed': self.passed, 'trials': self.trials, 'witness': None}
        if self.witness is not None:
            data['witness'] = [[list(c.first), list(c.second)] for c in self.witness]
        return data


def hamiltonian_is_magnetization_measurable(
    N: int, q: int, J: Union[float, Coupling], trials: int, seed: int = 0,
    energy: Optional[Callable[[SpinConfiguration], float]] = None,
) -> MeasurabilityCheck:
    """
    隨機抽組態，對每個成分的位置做置換後（磁化不變）比較能量是否完全相同

    Args:
        energy: 受測函數，預設為 hamiltonian(·, J)
    """
    if not 1 <= N <= MAX_MEASURABILITY_N:
        raise DomainError(f"可測性檢查只支援 1 ≤ N ≤ {MAX_MEASURABILITY_N}，收到 N={N}")
    if energy is None:
        def energy(config):
            return hamiltonian(config, J)

    rng = np.random.default_rng(seed)
    for _ in range(trials):
        first = rng.integers(1, q + 1, size=N)
        second = rng.integers(1, q + 1, size=N)
        original = SpinConfiguration(tuple(first), tuple(second), q)
        shuffled = SpinConfiguration(tuple(rng.permutation(first)), tuple(rng.permutation(second)), q)
        if energy(original) != energy(shuffled):
            logger.warning(f"能量不只依賴磁化：{original} 與 {shuffled}")
            return MeasurabilityCheck(False, trials, (original, shuffled))
    return MeasurabilityCheck(True, trials)


# ============================================================================
# Stirling 比較
# ============================================================================

def g_correction(params: ModelParams, x: PairMagnetization) -> float:
    """G(x) = (c/2) Σ log x_i，對 2q 個座標求和；有限 J 時 c = (1+J)/β"""
    c = params.coefficients()[2]
    values = x.as_array()
    if np.any(values <= 0):
        raise DomainError("G 的對數乘積只定義於內點")
    return 0.5 * c * float(np.sum(np.log(values)))


def _centered_gap(table: DistributionTable, min_fraction: float) -> float:
    """log ν + (N/c)(F + G/N) 在內部格點上去平均後的最大絕對值"""
    params, N = table.params, table.N
    c = params.coefficients()[2]
    x = table.compositions / N
    bulk = np.flatnonzero(np.all(x >= min_fraction - 1e-12, axis=1))
    if len(bulk) < 2:
        raise DomainError(f"N={N} 時內部格點不足，無法比較 Stirling 展開")
    xb = x[bulk]
    m = len(bulk)
    z = np.concatenate([np.repeat(xb[:, :-1], m, axis=0), np.tile(xb[:, :-1], (m, 1))], axis=1)
    F = free_energy_array(params, z).reshape(m, m)
    log_terms = np.sum(np.log(xb), axis=1)
    G = 0.5 * c * (log_terms[:, None] + log_terms[None, :])
    residual = table.log_probs[np.ix_(bulk, bulk)] + (N / c) * (F + G / N)
    return float(np.max(np.abs(residual - residual.mean())))


@dataclass(frozen=True)
class StirlingGapReport:
    gaps: Dict[int, float]
    max_abs_gap: float
    fitted_decay: float

    def to_dict(self) -> dict:
        return {
            'gaps': {str(n): gap for n, gap in self.gaps.items()},
            'max_abs_gap': self.max_abs_gap,
            'fitted_decay': self.fitted_decay,
        }


def stirling_gap(N: int, params: ModelParams, sizes: Sequence[int] = STIRLING_SIZES,
                 config: Optional[VerifierConfig] = None) -> StirlingGapReport:
    """
    比較精確 log ν 與 −(N/c)(F + G/N)

    max_abs_gap 取自 N，fitted_decay 為 log gap 對 log N 在 sizes 上的最小平方斜率
    """
    config = config or VerifierConfig()
    all_sizes = sorted(set(int(n) for n in sizes) | {int(N)})
    gaps = {n: _centered_gap(exact_nu(n, params, config), config.stirling_min_fraction) for n in all_sizes}
    fit_sizes = sorted(set(int(n) for n in sizes))
    if len(fit_sizes) >= 2:
        slope = np.polyfit(np.log(fit_sizes), np.log([gaps[n] for n in fit_sizes]), 1)[0]
    else:
        slope = math.nan
    logger.debug(f"Stirling 殘差：{gaps}，衰減指數 {slope:.3f}")
    return StirlingGapReport(gaps=gaps, max_abs_gap=gaps[int(N)], fitted_decay=float(slope))


def argmax_distance(table: DistributionTable, points: Sequence[PairMagnetization]) -> float:
    """ν 的最大值格點到最近給定點的 ∞-範數距離"""
    if not points:
        raise DomainError("至少需要一個比較點")
    peak = table.argmax().as_magnetization().as_array()
    return float(min(np.max(np.abs(peak - p.as_array())) for p in points))
