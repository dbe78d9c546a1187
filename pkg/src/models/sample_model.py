"""
Sample Model - engine configuration, compression trigger, bandwidth state and the two-level model
"""

import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import config
from src.models.gaussian import CovarianceKind, CovarianceMatrix
from src.models.mixture import Mixture
from src.models.whitening import WhiteningTransform
from src.utils.validators import DataValidator


@dataclass
class EngineConfig:
    """Tunable parameters of one online estimator"""

    d_th: float = config.ENGINE_CONFIG["D_TH"]
    forgetting: float = config.ENGINE_CONFIG["FORGETTING"]
    covariance: CovarianceKind = CovarianceKind.parse(config.ENGINE_CONFIG["COVARIANCE"])
    trigger_floor: int = config.ENGINE_CONFIG["TRIGGER_FLOOR"]
    trigger_growth: float = config.ENGINE_CONFIG["TRIGGER_GROWTH"]
    revitalize: bool = config.ENGINE_CONFIG["REVITALIZE"]

    def __post_init__(self):
        self.covariance = CovarianceKind.parse(self.covariance)

        checks = [
            DataValidator.validate_number_range(self.d_th, 0.0, 1.0, "Compression threshold", min_exclusive=True),
            DataValidator.validate_number_range(self.forgetting, 0.0, 1.0, "Forgetting factor", min_exclusive=True),
            DataValidator.validate_integer(self.trigger_floor, 2, "Trigger floor"),
            DataValidator.validate_number_range(self.trigger_growth, 1.0, None, "Trigger growth factor")
        ]
        for is_valid, message in checks:
            if not is_valid:
                raise ValueError(message)

    def to_dict(self) -> Dict[str, Any]:
        """Convert config to dictionary"""
        return {
            'd_th': self.d_th,
            'forgetting': self.forgetting,
            'covariance': self.covariance.value,
            'trigger_floor': self.trigger_floor,
            'trigger_growth': self.trigger_growth,
            'revitalize': self.revitalize
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'EngineConfig':
        """Create config from dictionary"""
        return cls(
            d_th=float(data['d_th']),
            forgetting=float(data['forgetting']),
            covariance=CovarianceKind.parse(data['covariance']),
            trigger_floor=int(data['trigger_floor']),
            trigger_growth=float(data['trigger_growth']),
            revitalize=bool(data['revitalize'])
        )


@dataclass
class CompressionTrigger:
    """Fires when the component count reaches max(floor, ceil(growth * K_last))"""

    floor: int = config.ENGINE_CONFIG["TRIGGER_FLOOR"]
    growth_factor: float = config.ENGINE_CONFIG["TRIGGER_GROWTH"]
    k_last: int = 0

    @property
    def threshold(self) -> int:
        return max(self.floor, int(math.ceil(self.growth_factor * self.k_last)))

    def fires(self, n_components: int) -> bool:
        return n_components >= self.threshold

    def to_dict(self) -> Dict[str, Any]:
        return {'floor': self.floor, 'growth_factor': self.growth_factor, 'k_last': self.k_last}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'CompressionTrigger':
        return cls(int(data['floor']), float(data['growth_factor']), int(data['k_last']))


@dataclass
class BandwidthState:
    """Kernel bandwidth of the current model and how it was obtained"""

    h_opt: Optional[CovarianceMatrix] = None
    h_white: Optional[CovarianceMatrix] = None
    beta: float = 0.0
    roughness: float = 0.0
    whitening: Optional[WhiteningTransform] = None
    fallback_used: bool = False
    stale: bool = True

    def mark_stale(self) -> 'BandwidthState':
        """Keep the last values for inspection but require recomputation"""
        self.stale = True
        return self


@dataclass
class CompressionResult:
    """Summary of one compression pass"""

    components_before: int
    components_after: int
    splits: int = 0
    leaf_errors: List[float] = field(default_factory=list)
    revitalized: int = 0

    @property
    def max_leaf_error(self) -> float:
        return max(self.leaf_errors) if self.leaf_errors else 0.0

    @property
    def changed(self) -> bool:
        return self.components_after != self.components_before or self.revitalized > 0


@dataclass
class SampleModel:
    """Two-level model: the compressed mixture p_s and one detailed model per component"""

    mixture: Mixture
    detailed: List[Mixture]
    n_eff: float = 0.0
    forgetting: float = 1.0
    d_th: float = config.ENGINE_CONFIG["D_TH"]
    trigger: CompressionTrigger = field(default_factory=CompressionTrigger)
    bandwidth: BandwidthState = field(default_factory=BandwidthState)
    last_compression: Optional[CompressionResult] = None

    def __post_init__(self):
        if len(self.detailed) != len(self.mixture):
            raise ValueError(f"{len(self.mixture)} components but {len(self.detailed)} detailed models")

    @classmethod
    def empty(cls, dim: int, engine_config: EngineConfig) -> 'SampleModel':
        """Model that has not observed any sample"""
        return cls(
            mixture=Mixture([], dim, engine_config.covariance),
            detailed=[],
            forgetting=engine_config.forgetting,
            d_th=engine_config.d_th,
            trigger=CompressionTrigger(engine_config.trigger_floor, engine_config.trigger_growth)
        )

    @property
    def dim(self) -> int:
        return self.mixture.dim

    @property
    def kind(self) -> CovarianceKind:
        return self.mixture.kind

    @property
    def n_components(self) -> int:
        return len(self.mixture)

    def check_invariants(self, tolerance: float = 1e-9) -> None:
        """Raise ValueError if the model is internally inconsistent"""
        if len(self.detailed) != len(self.mixture):
            raise ValueError("Detailed model count differs from component count")

        if self.mixture.components:
            total = self.mixture.total_weight()
            if abs(total - 1.0) > tolerance:
                raise ValueError(f"Component weights sum to {total!r}")

        for i, detailed in enumerate(self.detailed):
            if not 1 <= len(detailed) <= 2:
                raise ValueError(f"Detailed model {i} has {len(detailed)} components")
            total = detailed.total_weight()
            if abs(total - 1.0) > tolerance:
                raise ValueError(f"Detailed model {i} weights sum to {total!r}")

        if not self.bandwidth.stale and self.bandwidth.h_opt is None:
            raise ValueError("Fresh bandwidth state without a bandwidth")

    def scalar_count(self) -> int:
        """Stored scalars across the mixture, detailed models and bandwidth"""
        count = self.mixture.scalar_count() + sum(q.scalar_count() for q in self.detailed)
        if self.bandwidth.h_opt is not None:
            count += self.bandwidth.h_opt.values.size
        return count + 2

    def to_dict(self) -> Dict[str, Any]:
        """Convert model to dictionary"""
        return {
            'dim': self.dim,
            'kind': self.kind.value,
            'n_eff': self.n_eff,
            'forgetting': self.forgetting,
            'd_th': self.d_th,
            'trigger': self.trigger.to_dict(),
            'mixture': self.mixture.to_dict(),
            'detailed': [q.to_dict() for q in self.detailed]
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'SampleModel':
        """Create model from dictionary; the bandwidth is recomputed on demand"""
        return cls(
            mixture=Mixture.from_dict(data['mixture']),
            detailed=[Mixture.from_dict(q) for q in data['detailed']],
            n_eff=float(data['n_eff']),
            forgetting=float(data['forgetting']),
            d_th=float(data['d_th']),
            trigger=CompressionTrigger.from_dict(data['trigger'])
        )
