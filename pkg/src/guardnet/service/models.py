"""Pydantic request/response models mirroring the bundle wire format."""

from __future__ import annotations

from typing import Any, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field


class PlaceModel(BaseModel):
    id: str
    colors: list[str] = []


class TransitionModel(BaseModel):
    id: str
    pre: list[str] = []
    post: list[str] = []


class NetModel(BaseModel):
    places: list[PlaceModel] = []
    transitions: list[TransitionModel] = []


class GuardRowModel(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    witness: Optional[str] = None
    inputs: list[str] = Field(default_factory=list, alias="in")
    outputs: list[str] = Field(default_factory=list, alias="out")


class GuardModel(BaseModel):
    kind: Literal["partial", "span", "none"] = "none"
    tables: Optional[dict[str, list[GuardRowModel]]] = None


class MarkingModel(BaseModel):
    kind: Literal["plain", "colored"]
    tokens: list[Any] = []


class ProjectionEntryModel(BaseModel):
    transition: str
    payload: Optional[list[str]] = None
    witness: Optional[str] = None


class ProjectionModel(BaseModel):
    places: dict[str, str] = {}
    transitions: dict[str, ProjectionEntryModel] = {}


class BundleModel(BaseModel):
    format_version: int = 1
    net: NetModel
    guard: Optional[GuardModel] = None
    markings: Optional[dict[str, MarkingModel]] = None
    projection: Optional[ProjectionModel] = None


class FunctorModel(BaseModel):
    object_map: dict[str, list[str]] = {}
    morphism_map: dict[str, Any] = {}


MarkingRef = Union[str, MarkingModel]


class ValidateRequest(BaseModel):
    bundle: BundleModel


class ValidateResponse(BaseModel):
    valid: bool
    diagnostics: list[str]


class InternalizeRequest(BaseModel):
    bundle: BundleModel


class InternalizeResponse(BaseModel):
    bundle: BundleModel
    places: int
    transitions: int


class ReachRequest(BaseModel):
    bundle: BundleModel
    source: MarkingRef
    target: MarkingRef
    depth_bound: Optional[int] = None
    state_cap: Optional[int] = None


class RunStepModel(BaseModel):
    transition: str
    inputs: list[str]
    outputs: list[str]
    witness: Optional[str] = None


class ReachResponse(BaseModel):
    outcome: Literal["reachable", "not_reachable", "inconclusive"]
    exit_code: int
    explored: int
    sequence: Optional[list[str]] = None
    run: Optional[list[RunStepModel]] = None


class FireRequest(BaseModel):
    bundle: BundleModel
    marking: MarkingRef
    transition: str
    inputs: Optional[list[str]] = None
    witness: Optional[str] = None


class FireResponse(BaseModel):
    marking: MarkingModel


class IdentifyRequest(BaseModel):
    bundle: BundleModel
    witness_net: NetModel
    left: FunctorModel
    right: FunctorModel


class AddRequest(BaseModel):
    bundle: BundleModel
    generators: NetModel
    along: FunctorModel


class EraseRequest(BaseModel):
    bundle: BundleModel
    victims: list[str]


class SyncRequest(BaseModel):
    bundle: BundleModel
    victims: list[str]
    generators: NetModel
    along: FunctorModel


class ComposeResponse(BaseModel):
    bundle: BundleModel
    place_map: Optional[dict[str, str]] = None
    transition_map: Optional[dict[str, str]] = None


class DotRequest(BaseModel):
    bundle: BundleModel


class DotResponse(BaseModel):
    dot: str


class CheckRequest(BaseModel):
    suite: Literal["all", "reachability", "lifting", "monoidality", "counterexamples"]
    samples: Optional[int] = None
    seed: Optional[int] = None


class CheckItemModel(BaseModel):
    name: str
    passed: bool
    detail: str = ""


class CheckResponse(BaseModel):
    suite: str
    passed: bool
    results: list[CheckItemModel]
