"""Local HTTP service for interactive material editing.

In-memory material store with per-material revisions; all computation
is delegated to the core modules, so clients never need local color
science.  Every response carries the library version and the hash of
the active sensitivity basis for reproducibility.
"""

from __future__ import annotations

import threading
import uuid

import numpy as np
from fastapi import FastAPI, HTTPException, Request, Response
from fastapi.middleware.cors import CORSMiddleware

from . import __version__, data as _data
from .analytic import FluorescentMaterial, ModelGaussian, reduce_fluorescence
from .cli import palette_sidecar
from .colorimetry import albedo_to_reduced_R, lift_albedo_U
from .images import ppm_bytes
from .palette import PaletteContext, generate_palette
from .render import PreviewScene, render_sphere
from .reradiation import compose_reduced
from .spectral import SpectralError

PARAM_RANGES = {
    "alpha_bar": (0.0, 1.0),
    "mu_a_nm": (300.0, 800.0),
    "sigma_a_nm": (1.0, 200.0),
    "mu_e_nm": (300.0, 800.0),
    "sigma_e_nm": (1.0, 200.0),
}


def _invalid(field: str, message: str):
    raise HTTPException(status_code=422, detail=[{"field": field, "message": message}])


def _check_gaussian_fields(g: dict, index: int):
    for key, value in g.items():
        if key not in PARAM_RANGES:
            _invalid(f"gaussians[{index}].{key}", "unknown parameter")
        lo, hi = PARAM_RANGES[key]
        try:
            v = float(value)
        except (TypeError, ValueError):
            _invalid(f"gaussians[{index}].{key}", "not a number")
        if not lo <= v <= hi:
            _invalid(key, f"must lie in [{lo:g}, {hi:g}]")


def _check_albedo(a):
    if not isinstance(a, (list, tuple)) or len(a) != 3:
        _invalid("albedo_xyz", "expected three components")
    for v in a:
        if not isinstance(v, (int, float)) or not 0.0 <= float(v) <= 1.0:
            _invalid("albedo_xyz", "components must lie in [0, 1]")


def _material_from_body(body: dict) -> FluorescentMaterial:
    albedo = body.get("albedo_xyz", [0.0, 0.0, 0.0])
    _check_albedo(albedo)
    gaussians = body.get("gaussians", [])
    if not gaussians:
        _invalid("gaussians", "at least one fluorescence lobe required")
    lobes = []
    for i, g in enumerate(gaussians):
        merged = {
            "alpha_bar": 0.0,
            "mu_a_nm": 400.0,
            "sigma_a_nm": 50.0,
            "mu_e_nm": 550.0,
            "sigma_e_nm": 50.0,
        }
        merged.update(g)
        _check_gaussian_fields(merged, i)
        lobes.append(
            ModelGaussian(
                merged["alpha_bar"],
                merged["mu_a_nm"],
                merged["sigma_a_nm"],
                merged["mu_e_nm"],
                merged["sigma_e_nm"],
            )
        )
    return FluorescentMaterial(
        np.asarray(albedo, dtype=float), tuple(lobes), body.get("notes", "")
    )


def _material_dict(mat: FluorescentMaterial) -> dict:
    return {
        "albedo_xyz": [float(v) for v in mat.albedo[:3]],
        "gaussians": [
            {
                "alpha_bar": g.alpha_bar,
                "mu_a_nm": g.mu_a,
                "sigma_a_nm": g.sigma_a,
                "mu_e_nm": g.mu_e,
                "sigma_e_nm": g.sigma_e,
            }
            for g in mat.gaussians
        ],
        "notes": mat.notes,
    }


class Session:
    def __init__(self):
        self.lock = threading.Lock()
        self.materials: dict[str, tuple[FluorescentMaterial, int]] = {}

    def get(self, mid: str) -> tuple[FluorescentMaterial, int]:
        try:
            return self.materials[mid]
        except KeyError:
            raise HTTPException(status_code=404, detail=f"unknown material {mid!r}")


def create_app() -> FastAPI:
    app = FastAPI(title="fluoro edit service", version=__version__)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["http://localhost", "http://127.0.0.1"],
        allow_origin_regex=r"http://(localhost|127\.0\.0\.1)(:\d+)?",
        allow_methods=["*"],
        allow_headers=["*"],
    )
    session = Session()
    basis_hash = _data.xyzu_basis().content_hash()

    @app.middleware("http")
    async def _stamp(request: Request, call_next):
        response = await call_next(request)
        response.headers["X-Fluoro-Version"] = __version__
        response.headers["X-Basis-Hash"] = basis_hash
        return response

    @app.get("/illuminants")
    def illuminants():
        return {
            "illuminants": _data.illuminant_names(),
            "version": __version__,
            "basis_hash": basis_hash,
        }

    @app.post("/materials", status_code=201)
    async def create_material(request: Request):
        body = await request.json()
        mat = _material_from_body(body)
        mid = body.get("id") or uuid.uuid4().hex[:12]
        with session.lock:
            if mid in session.materials:
                raise HTTPException(status_code=409, detail=f"material {mid!r} exists")
            session.materials[mid] = (mat, 1)
        return {"id": mid, "revision": 1, "material": _material_dict(mat)}

    @app.get("/materials/{mid}")
    def get_material(mid: str):
        mat, rev = session.get(mid)
        return {"id": mid, "revision": rev, "material": _material_dict(mat)}

    @app.patch("/materials/{mid}")
    async def patch_material(mid: str, request: Request):
        body = await request.json()
        with session.lock:
            mat, rev = session.get(mid)
            expected = body.get("revision")
            if expected is not None and int(expected) != rev:
                raise HTTPException(
                    status_code=409,
                    detail=f"stale revision {expected}, current is {rev}",
                )
            current = _material_dict(mat)
            if "albedo_xyz" in body:
                current["albedo_xyz"] = body["albedo_xyz"]
            if "notes" in body:
                current["notes"] = body["notes"]
            if "gaussians" in body:
                patches = body["gaussians"]
                if not isinstance(patches, list):
                    _invalid("gaussians", "expected a list")
                lobes = current["gaussians"]
                while len(lobes) < len(patches):
                    lobes.append(
                        {"alpha_bar": 0.0, "mu_a_nm": 400.0, "sigma_a_nm": 50.0,
                         "mu_e_nm": 550.0, "sigma_e_nm": 50.0}
                    )
                for i, patch in enumerate(patches):
                    if patch is not None:
                        lobes[i].update(patch)
            new_mat = _material_from_body(current)
            session.materials[mid] = (new_mat, rev + 1)
            return {"id": mid, "revision": rev + 1, "material": _material_dict(new_mat)}

    @app.post("/materials/{mid}/export")
    def export_material(mid: str):
        mat, rev = session.get(mid)
        return Response(
            content=mat.to_json(),
            media_type="application/json",
            headers={"X-Revision": str(rev)},
        )

    def _query_material(mid: str) -> FluorescentMaterial:
        return session.get(mid)[0]

    @app.get("/palette")
    def palette_image(
        material: str,
        mu_a: float | None = None,
        sigma_a: float | None = None,
        illuminant: str = "D65",
        res: int = 64,
    ):
        mat = _query_material(material)
        lobe = mat.gaussians[0]
        try:
            ctx = PaletteContext(
                mat.albedo[:3],
                illuminant,
                lobe.mu_a if mu_a is None else mu_a,
                lobe.sigma_a if sigma_a is None else sigma_a,
            )
            pal = generate_palette(ctx, resolution=(res, res))
        except (SpectralError, KeyError) as e:
            raise HTTPException(status_code=422, detail=[{"field": "query", "message": str(e)}])
        return Response(content=ppm_bytes(pal.pixels), media_type="image/x-portable-pixmap")

    @app.get("/palette/params")
    def palette_params(
        material: str,
        mu_a: float | None = None,
        sigma_a: float | None = None,
        illuminant: str = "D65",
        res: int = 64,
    ):
        mat = _query_material(material)
        lobe = mat.gaussians[0]
        try:
            ctx = PaletteContext(
                mat.albedo[:3],
                illuminant,
                lobe.mu_a if mu_a is None else mu_a,
                lobe.sigma_a if sigma_a is None else sigma_a,
            )
            pal = generate_palette(ctx, resolution=(res, res))
        except (SpectralError, KeyError) as e:
            raise HTTPException(status_code=422, detail=[{"field": "query", "message": str(e)}])
        return Response(content=palette_sidecar(pal), media_type="application/json")

    @app.get("/preview")
    def preview(
        material: str,
        illuminant: str = "D65",
        illuminant2: str | None = None,
        size: int = 256,
        fluorescence_only: bool = False,
    ):
        mat = _query_material(material)
        try:
            scene = PreviewScene(
                mat, illuminant, illuminant2, size,
                fluorescence_only=fluorescence_only,
            )
            _, display, _ = render_sphere(scene)
        except (SpectralError, KeyError) as e:
            raise HTTPException(status_code=422, detail=[{"field": "query", "message": str(e)}])
        return Response(content=ppm_bytes(display), media_type="image/x-portable-pixmap")

    @app.get("/reduced")
    def reduced(material: str, basis: str = "xyzu"):
        mat = _query_material(material)
        try:
            b = _data.get_basis(basis)
        except KeyError as e:
            raise HTTPException(status_code=422, detail=[{"field": "basis", "message": str(e)}])
        rho = lift_albedo_U(mat.albedo[:3]) if b.K == 4 else mat.albedo[:3]
        red = compose_reduced(albedo_to_reduced_R(rho, b), reduce_fluorescence(mat, b))
        return {
            "labels": list(red.labels),
            "entries": [[float(v) for v in row] for row in red.entries],
            "version": __version__,
            "basis_hash": b.content_hash(),
        }

    return app
