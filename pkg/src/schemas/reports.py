from typing import Any, Dict, List, Optional, Tuple

from pydantic import BaseModel

BOUND_JSON_FIELDS = {
    "bound_id",
    "exponent",
    "sup_q",
    "median_q",
    "verdict",
    "window",
}


class BoundReport(BaseModel):
    bound_id: str
    exponent: float
    sup_q: float
    median_q: float
    verdict: str  # bounded | unbounded
    window: Tuple[float, float]
    ratio_cap: float = 10.0
    times: List[float] = []
    values: List[float] = []
    q: List[float] = []

    class Config:
        orm_mode = True

    @property
    def bounded(self) -> bool:
        return self.verdict == "bounded"

    def to_json(self) -> str:
        return self.json(include=BOUND_JSON_FIELDS, sort_keys=True)


class HolderEstimate(BaseModel):
    slope: float
    intercept: float
    residual: float
    window: Tuple[float, float]
    total: float
    k: int
    gamma: float
    accepted: bool

    class Config:
        orm_mode = True

    @property
    def label(self) -> str:
        return f"C^{{{self.k},{self.gamma:.3g}}}"


class IterationRecord(BaseModel):
    iteration: int
    r0: float
    norm: float
    ratio: Optional[float] = None

    class Config:
        orm_mode = True


class ConvergenceLog(BaseModel):
    iterations: List[IterationRecord] = []
    r0_history: List[float] = []
    restarts: List[str] = []
    r0: Optional[float] = None
    c0: Optional[float] = None
    certificate: Optional[float] = None
    certified: bool = False
    final_residual: Optional[float] = None

    class Config:
        orm_mode = True

    def norms(self, r0: Optional[float] = None) -> List[float]:
        r0 = self.r0 if r0 is None else r0
        return [it.norm for it in self.iterations if it.r0 == r0]

    def ratios(self, r0: Optional[float] = None) -> List[Optional[float]]:
        r0 = self.r0 if r0 is None else r0
        return [it.ratio for it in self.iterations if it.r0 == r0]


class RunSummary(BaseModel):
    command: str
    version: str
    passed: bool
    config: Dict[str, Any] = {}
    checks: Dict[str, bool] = {}
    results: Dict[str, Any] = {}

    class Config:
        orm_mode = True
