"""HTTP face of the library: build operators, compute masses and fields,
run verifications.

Error contract: malformed requests answer 400 (422 for schema violations),
numerical/truncation failures answer 409; both carry {"error": {"kind",
"detail"}} so thin clients can map them to exit codes.
"""

import numpy as np
from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from ..errors import NumericalError, PhaseOVMError, UsageError
from ..fock import basic_operators
from ..linalg import commutator_defect, hermiticity_defect
from ..quasiprob import quasiprob_mass, quasiprob_field
from ..regions1d import (
    Region1D,
    build_region_operator,
    build_region_operator_smeared,
    is_symmetric,
    region_from_json,
    region_to_json,
)
from ..regions2d import (
    Circle,
    Disc,
    PhaseGrid,
    Segment,
    circle_operator,
    disc_operator,
    region_operator_oracle,
    region2d_from_json,
    region2d_to_json,
    segment_operator,
    AREA_REGIONS,
)
from ..verify import run_target
from .schemas import (
    BuildRequest,
    BuildResponse,
    FieldRequest,
    FieldResponse,
    MassRequest,
    MassResponse,
    VerifyRequest,
    VerifyResponse,
    matrix_to_json,
    provenance,
    state_from_json,
)


def _any_region(data: dict):
    """Decode a region descriptor from either family."""
    kind = data.get("type")
    if kind in ("interval", "union", "fourier", "integer_comb"):
        return region_from_json(data)
    return region2d_from_json(data)


def _region_json(region) -> dict:
    if isinstance(region, Region1D):
        return region_to_json(region)
    return region2d_to_json(region)


def _grid(data: dict | None) -> PhaseGrid:
    return PhaseGrid.from_json(data) if data else PhaseGrid()


def create_app() -> FastAPI:
    app = FastAPI(
        title="phaseovm service",
        description="Operator-valued measures over phase-space regions in a "
        "truncated Fock basis, with quadrature verification.",
        version=provenance()["version"],
    )

    @app.exception_handler(PhaseOVMError)
    async def phaseovm_error(request: Request, exc: PhaseOVMError):
        status = 409 if isinstance(exc, NumericalError) else 400
        return JSONResponse(
            status_code=status,
            content={"error": {"kind": exc.kind, "detail": str(exc)}},
        )

    @app.get("/health")
    def health():
        return {"status": "ok", "provenance": provenance()}

    @app.post("/build", response_model=BuildResponse)
    def build(req: BuildRequest):
        region = _any_region(req.region)
        if req.path == "smeared":
            built = build_region_operator_smeared(region, req.dim, req.quadrature_points)
        elif req.path == "oracle":
            if isinstance(region, AREA_REGIONS):
                built = region_operator_oracle(region, req.dim, _grid(req.grid))
            else:
                built = region_operator_oracle(region, req.dim)
        elif isinstance(region, Circle):
            built = circle_operator(region.a, req.dim)
        elif isinstance(region, Segment):
            built = segment_operator(region.a, req.dim)
        elif isinstance(region, Disc):
            built = disc_operator(region.a, req.dim, req.quadrature_points)
        elif isinstance(region, Region1D):
            built = build_region_operator(region, req.dim)
        else:
            built = region_operator_oracle(region, req.dim, _grid(req.grid))

        op = built.op
        hermitian = hermiticity_defect(op) <= 1e-10
        parity = basic_operators(req.dim).parity
        symbol_complex = isinstance(region, Region1D) and not is_symmetric(region)
        eigenvalues = np.sort(np.linalg.eigvalsh(op)).tolist() if hermitian else None
        return BuildResponse(
            provenance=provenance(req.dim, path=built.path),
            region=_region_json(built.region),
            path=built.path,
            dim=req.dim,
            hermitian=hermitian,
            complex_valued=float(np.max(np.abs(op.imag))) > 1e-10,
            symbol_complex=symbol_complex,
            parity_commutes=commutator_defect(op, parity) <= 1e-10,
            eigenvalues=eigenvalues,
            matrix=matrix_to_json(op),
        )

    @app.post("/mass", response_model=MassResponse)
    def mass(req: MassRequest):
        region = region2d_from_json(req.region)
        grid = _grid(req.grid)
        state = state_from_json(req.state, req.dim)
        field_route = quasiprob_mass(state, region, grid, req.s, req.convention)
        if req.s == 0.0 and req.convention == "bare":
            if isinstance(region, AREA_REGIONS):
                oracle = region_operator_oracle(region, req.dim, grid)
            else:
                oracle = region_operator_oracle(region, req.dim)
            trace_route = float(np.trace(state.density() @ oracle.op).real)
            deviation = abs(trace_route - field_route)
            note = None
        else:
            trace_route, deviation = None, None
            note = "operator route defined for s = 0, bare convention only"
        return MassResponse(
            provenance=provenance(req.dim, grid=grid.to_json(), s=req.s),
            region=_region_json(region),
            s=req.s,
            convention=req.convention,
            operator_trace=trace_route,
            field_integral=field_route,
            deviation=deviation,
            note=note,
        )

    @app.post("/verify", response_model=VerifyResponse)
    def verify(req: VerifyRequest):
        params = dict(req.params)
        if "a" in params and isinstance(params["a"], (int, float)) and req.target in (
            "kraus",
            "fourier",
        ):
            params["a"] = (float(params["a"]),)
        reports = run_target(req.target, **params)
        return VerifyResponse(
            provenance=provenance(),
            target=req.target,
            passed=all(r.passed for r in reports),
            reports=[r.to_json() for r in reports],
        )

    @app.post("/field", response_model=FieldResponse)
    def field(req: FieldRequest):
        grid = _grid(req.grid)
        state = state_from_json(req.state, req.dim)
        result = quasiprob_field(state, grid, req.s, req.convention)
        return FieldResponse(
            provenance=provenance(req.dim, grid=grid.to_json(), s=req.s),
            s=req.s,
            convention=req.convention,
            q=result.grid.q_centers().tolist(),
            p=result.grid.p_centers().tolist(),
            values=result.values.tolist(),
        )

    return app


app = create_app()
