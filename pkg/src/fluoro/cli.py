"""Command-line interface.

Exit codes: 0 on success, 1 on usage errors (bad flags / arguments),
2 on data errors (unreadable or invalid inputs).  A JSON config file
passed via ``--config`` supplies defaults for any flag of the chosen
subcommand; explicit flags win.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__, data as _data
from .analytic import FluorescentMaterial, reduce_fluorescence
from .colorimetry import albedo_to_reduced_R, lift_albedo_U
from .fitting import (
    EVAL_PATHS,
    FitConfig,
    evaluate_dE,
    fit_material,
    interpolate_materials,
)
from .images import write_pfm, write_ppm
from .palette import Palette, PaletteContext, generate_palette, pick
from .render import PreviewScene, render_sphere
from .reradiation import compose_reduced, load_bispec, reduce_matrix
from .spectral import SpectralError


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """Argument parser reporting usage problems via exit code 1."""

    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _parse_triple(text: str) -> np.ndarray:
    parts = text.split(",")
    if len(parts) != 3:
        raise UsageError(f"expected three comma-separated values, got {text!r}")
    try:
        return np.array([float(p) for p in parts])
    except ValueError as e:
        raise UsageError(str(e)) from None


def _load_material(path) -> FluorescentMaterial:
    return FluorescentMaterial.from_json(Path(path).read_text(encoding="utf-8"))


def build_parser() -> _Parser:
    p = _Parser(prog="fluoro", description="Fluorescent material toolkit")
    p.add_argument("--version", action="version", version=f"fluoro {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    f = sub.add_parser("fit", help="fit the Gaussian model to a reradiation matrix")
    f.add_argument("--input", required=True, help="BISPEC or CSV matrix file")
    f.add_argument("--q", type=int, default=1, help="number of fluorescence lobes")
    f.add_argument("--albedo", default="0.0,0.0,0.0", help="XYZ albedo r,g,b")
    f.add_argument("--seed", type=int, default=0)
    f.add_argument("--out", required=True, help="output material JSON")

    r = sub.add_parser("reduce", help="reduce a material or matrix to K x K")
    src = r.add_mutually_exclusive_group(required=True)
    src.add_argument("--material", help="material JSON file")
    src.add_argument("--input", help="BISPEC matrix file")
    r.add_argument("--basis", default="xyzu", choices=("xyz", "xyzu"))
    r.add_argument("--out", required=True, help="output JSON file")

    e = sub.add_parser("eval", help="color-difference evaluation over a dataset")
    e.add_argument("--dataset", required=True, help="directory of .bispec files")
    e.add_argument("--paths", default="analytic", help="comma list: spectral,brute,analytic")
    e.add_argument("--illuminants", default="D65,A,FL11")
    e.add_argument("--q", type=int, default=1)
    e.add_argument("--report", required=True, help="output report JSON")

    pa = sub.add_parser("palette", help="emission-parameter palette image")
    pa.add_argument("--albedo", default="0.14,0.14,0.2")
    pa.add_argument("--illuminant", default="D65")
    pa.add_argument("--mu-a", type=float, default=420.0)
    pa.add_argument("--sigma-a", type=float, default=100.0)
    pa.add_argument("--res", type=int, default=64)
    pa.add_argument("--out", required=True, help="output PPM image")
    pa.add_argument("--params", help="output JSON parameter sidecar")

    re_ = sub.add_parser("render", help="sphere preview render")
    re_.add_argument("--material", required=True)
    re_.add_argument("--illuminant", default="D65")
    re_.add_argument("--illuminant2", help="right-half illuminant (split render)")
    re_.add_argument("--size", type=int, default=256)
    re_.add_argument("--exposure", type=float, default=1.0)
    re_.add_argument("--out", required=True, help="output PPM image")
    re_.add_argument("--float-out", help="optional output PFM (XYZ floats)")

    i = sub.add_parser("interp", help="interpolate two materials")
    i.add_argument("--a", required=True)
    i.add_argument("--b", required=True)
    i.add_argument("--t", type=float, required=True)
    i.add_argument("--out", required=True)

    s = sub.add_parser("serve", help="run the local editing service")
    s.add_argument("--port", type=int, default=8765)
    s.add_argument("--host", default="127.0.0.1")

    for name, sp in sub.choices.items():
        sp.add_argument("--config", help="JSON file with default flag values")
    return p


def _apply_config(args: argparse.Namespace, argv: list[str]):
    if not getattr(args, "config", None):
        return
    try:
        cfg = json.loads(Path(args.config).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as e:
        raise SpectralError(f"cannot read config {args.config}: {e}") from None
    given = {a.lstrip("-").replace("-", "_").split("=")[0] for a in argv if a.startswith("--")}
    for key, value in cfg.items():
        attr = key.replace("-", "_")
        if hasattr(args, attr) and attr not in given:
            setattr(args, attr, value)


def _reduced_to_json(red) -> str:
    return json.dumps(
        {"labels": list(red.labels), "entries": [[float(v) for v in row] for row in red.entries]},
        indent=2,
    )


def _cmd_fit(args) -> int:
    matrix, zeroed = load_bispec(args.input)
    from .reradiation import decompose

    d = decompose(matrix)
    mat = fit_material(
        d.fbar, _parse_triple(args.albedo), matrix.grid, FitConfig(Q=args.q, seed=args.seed)
    )
    Path(args.out).write_text(mat.to_json() + "\n", encoding="utf-8")
    if zeroed:
        print(f"note: zeroed {zeroed} below-diagonal entries", file=sys.stderr)
    return 0


def _cmd_reduce(args) -> int:
    basis = _data.get_basis(args.basis)
    if args.material:
        mat = _load_material(args.material)
        rho = lift_albedo_U(mat.albedo[:3]) if basis.K == 4 else mat.albedo[:3]
        red = compose_reduced(
            albedo_to_reduced_R(rho, basis), reduce_fluorescence(mat, basis)
        )
    else:
        matrix, _ = load_bispec(args.input)
        red = reduce_matrix(matrix, basis)
    Path(args.out).write_text(_reduced_to_json(red) + "\n", encoding="utf-8")
    return 0


_PATH_ALIASES = {
    "spectral": "spectral-fit",
    "brute": "reduced-brute",
    "analytic": "reduced-analytic",
}


def _cmd_eval(args) -> int:
    files = sorted(Path(args.dataset).glob("*.bispec"))
    if not files:
        raise SpectralError(f"no .bispec files in {args.dataset}")
    dataset, models = [], []
    from .reradiation import decompose

    for fp in files:
        matrix, _ = load_bispec(fp)
        dataset.append(matrix)
        side = fp.with_suffix(".json")
        if side.exists():
            models.append(_load_material(side))
        else:
            d = decompose(matrix)
            models.append(
                fit_material(d.fbar, np.zeros(3), matrix.grid, FitConfig(Q=args.q))
            )
    illums = [n.strip() for n in args.illuminants.split(",") if n.strip()]
    report = {"version": __version__, "paths": {}}
    for alias in (a.strip() for a in args.paths.split(",") if a.strip()):
        path = _PATH_ALIASES.get(alias, alias)
        if path not in EVAL_PATHS:
            raise UsageError(f"unknown path {alias!r}")
        rep = evaluate_dE(dataset, models, illums, path=path)
        report["paths"][path] = rep.stats
    Path(args.report).write_text(json.dumps(report, indent=2) + "\n", encoding="utf-8")
    return 0


def palette_sidecar(palette: Palette) -> str:
    """JSON parameter grid matching the palette image cells."""
    rows, cols = palette.shape
    return json.dumps(
        {
            "mu_e_nm": [float(v) for v in palette.mu_e],
            "sigma_e_nm": [float(v) for v in palette.sigma_e],
            "resolved_alpha": [
                [float(palette.resolved_alpha[r, c]) for c in range(cols)]
                for r in range(rows)
            ],
            "context": {
                "albedo_xyz": [float(v) for v in palette.context.albedo_xyz],
                "illuminant": palette.context.illuminant,
                "mu_a_nm": palette.context.mu_a,
                "sigma_a_nm": palette.context.sigma_a,
            },
        },
        indent=2,
    )


def _cmd_palette(args) -> int:
    ctx = PaletteContext(
        _parse_triple(args.albedo), args.illuminant, args.mu_a, args.sigma_a
    )
    palette = generate_palette(ctx, resolution=(args.res, args.res))
    write_ppm(args.out, palette.pixels)
    if args.params:
        Path(args.params).write_text(palette_sidecar(palette) + "\n", encoding="utf-8")
    return 0


def _cmd_render(args) -> int:
    mat = _load_material(args.material)
    scene = PreviewScene(
        mat, args.illuminant, args.illuminant2, args.size, args.exposure
    )
    xyz, display, clipped = render_sphere(scene)
    write_ppm(args.out, display)
    if args.float_out:
        write_pfm(args.float_out, xyz)
    if clipped:
        print(f"note: {clipped} channel values clipped for display", file=sys.stderr)
    return 0


def _cmd_interp(args) -> int:
    if not 0.0 <= args.t <= 1.0:
        raise UsageError("--t must lie in [0, 1]")
    mid = interpolate_materials(_load_material(args.a), _load_material(args.b), args.t)
    Path(args.out).write_text(mid.to_json() + "\n", encoding="utf-8")
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(), host=args.host, port=args.port, log_level="warning")
    return 0


_COMMANDS = {
    "fit": _cmd_fit,
    "reduce": _cmd_reduce,
    "eval": _cmd_eval,
    "palette": _cmd_palette,
    "render": _cmd_render,
    "interp": _cmd_interp,
    "serve": _cmd_serve,
}


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        _apply_config(args, argv)
        return _COMMANDS[args.command](args)
    except SystemExit as e:  # --help / --version
        return int(e.code or 0)
    except UsageError as e:
        print(str(e), file=sys.stderr)
        return 1
    except (SpectralError, OSError, KeyError, ValueError, json.JSONDecodeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
