"""FastAPI endpoints wrapping the core package.

Every handler is stateless: the request carries the bundle, the response
carries the result.  Domain errors surface as 422 with the error class name.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__
from ..bundle import (
    Bundle,
    bundle_from_dict,
    bundle_to_dict,
    diagnose_bundle,
    functor_from_dict,
    marking_from_dict,
    marking_to_dict,
    net_from_dict,
)
from ..checks import run_suite
from ..dot import export_dot
from ..errors import GuardnetError, TokenGameError
from ..internalize import ColoredMarking, internalize
from ..nets import Marking, fire
from ..reach import (
    DEFAULT_DEPTH_BOUND,
    DEFAULT_STATE_CAP,
    ReachQuery,
    colored_steps,
    reach_colored,
    reach_plain,
)
from ..transform import add_generators, erase_generators, identify, synchronize
from . import models


def _load_bundle(model: models.BundleModel, check: bool = True) -> Bundle:
    data = model.model_dump(by_alias=True, exclude_none=True)
    return bundle_from_dict(data, check=check)


def _bundle_model(bundle: Bundle) -> models.BundleModel:
    return models.BundleModel.model_validate(bundle_to_dict(bundle))


def _resolve_marking(bundle: Bundle, ref):
    if isinstance(ref, str):
        return bundle.marking(ref)
    return marking_from_dict(ref.model_dump(), "marking")


def create_app() -> FastAPI:
    app = FastAPI(title="guardnet", version=__version__)

    @app.exception_handler(GuardnetError)
    async def domain_error(_request: Request, exc: GuardnetError):
        return JSONResponse(
            status_code=422,
            content={"detail": str(exc), "error": type(exc).__name__},
        )

    @app.get("/healthz")
    def healthz() -> dict:
        return {"name": "guardnet", "version": __version__}

    @app.post("/validate", response_model=models.ValidateResponse, response_model_exclude_none=True)
    def validate_endpoint(request: models.ValidateRequest) -> models.ValidateResponse:
        bundle = _load_bundle(request.bundle, check=False)
        diagnostics = diagnose_bundle(bundle)
        return models.ValidateResponse(valid=not diagnostics, diagnostics=diagnostics)

    @app.post("/internalize", response_model=models.InternalizeResponse, response_model_exclude_none=True)
    def internalize_endpoint(request: models.InternalizeRequest) -> models.InternalizeResponse:
        bundle = _load_bundle(request.bundle)
        net, projection = internalize(bundle.guarded())
        compiled = Bundle(net, {p: () for p in net.places}, None, {}, projection)
        return models.InternalizeResponse(
            bundle=_bundle_model(compiled),
            places=len(net.places),
            transitions=len(net.transitions),
        )

    @app.post("/reach", response_model=models.ReachResponse, response_model_exclude_none=True)
    def reach_endpoint(request: models.ReachRequest) -> models.ReachResponse:
        bundle = _load_bundle(request.bundle)
        source = _resolve_marking(bundle, request.source)
        target = _resolve_marking(bundle, request.target)
        query = ReachQuery(
            source,
            target,
            request.depth_bound or DEFAULT_DEPTH_BOUND,
            request.state_cap or DEFAULT_STATE_CAP,
        )
        if isinstance(source, ColoredMarking):
            if bundle.guard is None:
                raise TokenGameError("colored reachability needs a guarded bundle")
            result = reach_colored(bundle.net, bundle.guard, query)
        else:
            result = reach_plain(bundle.net, query)
        run = None
        if result.run is not None:
            run = [
                models.RunStepModel(
                    transition=s.transition,
                    inputs=list(s.inputs),
                    outputs=list(s.outputs),
                    witness=s.witness,
                )
                for s in result.run.steps
            ]
        return models.ReachResponse(
            outcome=result.status,
            exit_code=result.exit_code,
            explored=result.explored,
            sequence=list(result.sequence) if result.sequence is not None else None,
            run=run,
        )

    @app.post("/fire", response_model=models.FireResponse, response_model_exclude_none=True)
    def fire_endpoint(request: models.FireRequest) -> models.FireResponse:
        bundle = _load_bundle(request.bundle)
        marking = _resolve_marking(bundle, request.marking)
        if isinstance(marking, Marking):
            result = fire(bundle.net, marking, request.transition)
            return models.FireResponse(marking=models.MarkingModel(**marking_to_dict(result)))
        if bundle.guard is None:
            raise TokenGameError("colored firing needs a guarded bundle")
        candidates = [
            (step, nxt)
            for step, nxt in colored_steps(bundle.net, bundle.guard, marking)
            if step.transition == request.transition
            and (request.inputs is None or step.inputs == tuple(request.inputs))
            and (request.witness is None or step.witness == request.witness)
        ]
        if not candidates:
            raise TokenGameError(
                f"transition {request.transition!r} is not enabled for that selection"
            )
        if len(candidates) > 1:
            options = ", ".join(
                f"inputs={list(s.inputs)} witness={s.witness}" for s, _ in candidates
            )
            raise TokenGameError(f"ambiguous firing; candidates: {options}")
        _, nxt = candidates[0]
        return models.FireResponse(marking=models.MarkingModel(**marking_to_dict(nxt)))

    @app.post("/compose/identify", response_model=models.ComposeResponse, response_model_exclude_none=True)
    def identify_endpoint(request: models.IdentifyRequest) -> models.ComposeResponse:
        bundle = _load_bundle(request.bundle)
        witness_net, _ = net_from_dict(request.witness_net.model_dump(), "witness_net")
        left = functor_from_dict(request.left.model_dump(), witness_net, bundle.net, "left")
        right = functor_from_dict(request.right.model_dump(), witness_net, bundle.net, "right")
        quotient = identify(witness_net, left, right, bundle.guarded())
        markings = {
            name: _map_marking(m, quotient.place_map) for name, m in bundle.markings.items()
        }
        out = Bundle.from_guarded(quotient.guarded(), markings)
        return models.ComposeResponse(
            bundle=_bundle_model(out),
            place_map=dict(quotient.place_map),
            transition_map=dict(quotient.transition_map),
        )

    @app.post("/compose/add", response_model=models.ComposeResponse, response_model_exclude_none=True)
    def add_endpoint(request: models.AddRequest) -> models.ComposeResponse:
        bundle = _load_bundle(request.bundle)
        w_net, _ = net_from_dict(request.generators.model_dump(), "generators")
        along = functor_from_dict(request.along.model_dump(), w_net, bundle.net, "along")
        result = add_generators(bundle.guarded(), w_net, along)
        out = Bundle.from_guarded(result, bundle.markings)
        return models.ComposeResponse(bundle=_bundle_model(out))

    @app.post("/compose/erase", response_model=models.ComposeResponse, response_model_exclude_none=True)
    def erase_endpoint(request: models.EraseRequest) -> models.ComposeResponse:
        bundle = _load_bundle(request.bundle)
        result = erase_generators(bundle.guarded(), request.victims)
        out = Bundle.from_guarded(result, bundle.markings)
        return models.ComposeResponse(bundle=_bundle_model(out))

    @app.post("/compose/sync", response_model=models.ComposeResponse, response_model_exclude_none=True)
    def sync_endpoint(request: models.SyncRequest) -> models.ComposeResponse:
        bundle = _load_bundle(request.bundle)
        w_net, _ = net_from_dict(request.generators.model_dump(), "generators")
        along = functor_from_dict(request.along.model_dump(), w_net, bundle.net, "along")
        result = synchronize(bundle.guarded(), request.victims, w_net, along)
        out = Bundle.from_guarded(result, bundle.markings)
        return models.ComposeResponse(bundle=_bundle_model(out))

    @app.post("/export-dot", response_model=models.DotResponse, response_model_exclude_none=True)
    def dot_endpoint(request: models.DotRequest) -> models.DotResponse:
        bundle = _load_bundle(request.bundle, check=False)
        return models.DotResponse(dot=export_dot(bundle))

    @app.post("/check", response_model=models.CheckResponse, response_model_exclude_none=True)
    def check_endpoint(request: models.CheckRequest) -> models.CheckResponse:
        results = run_suite(request.suite, request.samples, request.seed)
        return models.CheckResponse(
            suite=request.suite,
            passed=all(r.passed for r in results),
            results=[
                models.CheckItemModel(name=r.name, passed=r.passed, detail=r.detail)
                for r in results
            ],
        )

    return app


def _map_marking(marking, place_map):
    if isinstance(marking, ColoredMarking):
        return ColoredMarking.of(
            *((place_map.get(p, p), c) for p, c in marking.tokens())
        )
    return Marking.of(*(place_map.get(p, p) for p in marking.tokens()))


app = create_app()
