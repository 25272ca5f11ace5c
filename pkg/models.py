"""
Pydantic models for xlab reports and run manifests.

Every JSON document the CLI emits is one of these models; graphs are
carried as graph6 strings.
"""

from datetime import datetime
from typing import Literal, Optional, Union

from pydantic import BaseModel, Field, model_validator


class InvariantBundle(BaseModel):
    """Exact invariants of a single graph."""
    chi: int
    nu: int
    delta_max: int
    edge_count: int


class Partition(BaseModel):
    """Vertex partition into classes ``0 .. r-1`` with nonincreasing sizes."""
    assignment: list[int]
    sizes: list[int]

    @model_validator(mode="after")
    def _check(self) -> "Partition":
        counts = [0] * len(self.sizes)
        for c in self.assignment:
            if not 0 <= c < len(self.sizes):
                raise ValueError(f"Class {c} outside 0..{len(self.sizes) - 1}")
            counts[c] += 1
        if counts != self.sizes:
            raise ValueError(f"Class sizes {counts} do not match declared sizes {self.sizes}")
        if any(a < b for a, b in zip(self.sizes, self.sizes[1:])):
            raise ValueError(f"Class sizes must be nonincreasing: {self.sizes}")
        return self

    @property
    def r(self) -> int:
        return len(self.sizes)

    def masks(self) -> list[int]:
        out = [0] * len(self.sizes)
        for v, c in enumerate(self.assignment):
            out[c] |= 1 << v
        return out

    @classmethod
    def from_sizes(cls, sizes: list[int]) -> "Partition":
        assignment = [i for i, size in enumerate(sizes) for _ in range(size)]
        return cls(assignment=assignment, sizes=list(sizes))


class PackingWitness(BaseModel):
    """Pairwise edge-disjoint copies of F_1..F_k inside a host graph."""
    vertex_maps: list[list[int]]
    copies: list[list[tuple[int, int]]]


class EditDistance(BaseModel):
    """Distance to T_{n,r}: alpha1 edges inside parts, alpha2 missing cross pairs."""
    alpha1: int = Field(ge=0)
    alpha2: int = Field(ge=0)
    partition: Partition


class MembershipWitness(BaseModel):
    """Embedding of some H into the decomposition host of M."""
    member: str
    forbidden: str
    host: str
    embedding: list[int]


class DecompositionReport(BaseModel):
    """The decomposition family M(H) and the matching/star test on it."""
    family: str
    r: int
    phi: int
    family_M: list[str]
    witnesses: list[MembershipWitness]
    nu_star: Optional[int] = None
    delta_star: Optional[int] = None
    condition_ii: bool
    candidates_checked: int
    minimality_certified: bool


class ExtremalReport(BaseModel):
    """ex(n, H) and the extremal graphs up to isomorphism."""
    n: int
    family: str
    value: int
    extremal: list[str]
    method: Literal["exhaustive", "pruned"]
    complete: bool = True
    threshold: Optional[int] = None
    frontier_hash: Optional[str] = None
    nodes_explored: int
    elapsed: float


class SpectralReport(BaseModel):
    """Spectral radius with a certified Perron vector."""
    rho: float
    perron: list[float]
    residual: float
    iterations: int


class SpexReport(BaseModel):
    """spex(n, H) and the spectral extremal graphs within the tie tolerance."""
    n: int
    family: str
    rho_star: float
    spex_set: list[str]
    ties_flagged: bool
    ex_value: int
    within_ex: bool
    method: Literal["exhaustive", "pruned"] = "pruned"
    complete: bool = True
    candidates: int
    elapsed: float


class InstanceResult(BaseModel):
    """One checked instance of a claim."""
    instance: str
    verdict: Literal["pass", "small-n-exception", "fail", "skipped"]
    detail: dict = Field(default_factory=dict)


class VerifyReport(BaseModel):
    """Outcome of one verification suite."""
    claim: str
    instances: list[InstanceResult]
    summary: dict = Field(default_factory=dict)

    @property
    def hard_failures(self) -> int:
        return sum(1 for i in self.instances if i.verdict == "fail")


class ConstructionReport(BaseModel):
    """A named construction and its basic counts."""
    name: str
    parameters: dict
    graph6: str
    n: int
    edge_count: int
    partition: Optional[Partition] = None


Payload = Union[
    DecompositionReport,
    ExtremalReport,
    SpexReport,
    VerifyReport,
    ConstructionReport,
    SpectralReport,
]


class RunManifest(BaseModel):
    """Full record of one CLI invocation."""
    command: str
    parameters: dict
    tool_version: str
    started: Optional[datetime] = None
    elapsed: float
    exit_code: int = 0
    payload: Optional[Payload] = None
    error: Optional[str] = None
    exceptions: list[InstanceResult] = Field(default_factory=list)
