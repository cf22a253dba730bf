"""
Command implementations behind ``polytile <command>``.

Every command takes the parsed arguments and the active
:class:`~polytile.config.Config` and returns the process exit code:
0 on success, 1 on a negative verdict, 2 on bad input, 3 when a search
budget runs out. Bad input surfaces as ``ValueError`` or ``OSError`` and is
turned into exit code 2 by :func:`polytile.polytile.main`.
"""

import os
from pathlib import Path

from loguru import logger

from polytile.assembler import AssemblyError
from polytile.assembler import OffsetError
from polytile.assembler import assemble_and_verify
from polytile.assembler import assembly_from_manifest
from polytile.assembler import assembly_manifest
from polytile.blocks import build_cross
from polytile.diffsets import DifferenceSet
from polytile.diffsets import encoder_levels
from polytile.diffsets import is_golomb
from polytile.diffsets import is_modular_golomb
from polytile.diffsets import modular_powers_ruler
from polytile.diffsets import powers_ruler
from polytile.diffsets import search_min_ruler
from polytile.planecheck import bn_exact_factorization
from polytile.planecheck import boundary_word
from polytile.planecheck import filler_projection
from polytile.planecheck import find_obstruction
from polytile.planecheck import polyomino_from_text
from polytile.plot import plot_section
from polytile.reduction import manifest
from polytile.reduction import reduce
from polytile.utils import export
from polytile.utils import read_cells
from polytile.utils import read_manifest
from polytile.utils import write_cells
from polytile.utils import write_manifest
from polytile.voxel import CellSet
from polytile.wang import SolveStatus
from polytile.wang import parse_torus
from polytile.wang import parse_wang_set
from polytile.wang import serialize_torus
from polytile.wang import solve_any_torus
from polytile.wang import solve_torus


__all__ = [
    "cmd_ruler",
    "cmd_reduce",
    "cmd_solve",
    "cmd_assemble",
    "cmd_export",
    "cmd_planecheck",
    "cmd_section",
]

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_INPUT = 2
EXIT_BUDGET = 3


def _parse_set(tokens):
    """``["4,8,16", "mod=18"]`` -> DifferenceSet."""
    values, modulus = [], None
    for tok in tokens:
        if tok.startswith("mod="):
            modulus = int(tok[4:])
        else:
            values.extend(int(v) for v in tok.split(",") if v)
    return DifferenceSet(sorted(values), modulus=modulus)


def cmd_ruler(args, config):
    action, params = args.action, args.params
    if action in ("powers", "modpowers", "levels"):
        if len(params) != 1:
            raise ValueError(f"ruler {action} takes one integer")
        n = int(params[0])
        if action == "powers":
            print(powers_ruler(n))
        elif action == "modpowers":
            print(modular_powers_ruler(n))
        else:
            levels, total = encoder_levels(n)
            print(DifferenceSet(levels, modulus=total))
        return EXIT_OK

    if action == "check":
        s = _parse_set(params)
        ok = is_golomb(s)
        print(f"{s}: {'Golomb' if ok else 'not Golomb'}")
        return EXIT_OK if ok else EXIT_NEGATIVE

    if action == "modcheck":
        s = _parse_set(params)
        ok = is_modular_golomb(s)
        print(f"{s}: {'modular Golomb' if ok else 'not modular Golomb'}")
        return EXIT_OK if ok else EXIT_NEGATIVE

    if action == "search":
        if len(params) != 2:
            raise ValueError("ruler search takes an order and a length budget")
        found = search_min_ruler(int(params[0]), int(params[1]))
        if found is None:
            print(f"none: no ruler of order {params[0]} up to length {params[1]}")
            return EXIT_NEGATIVE
        print(f"{found} length={found.length}")
        return EXIT_OK

    raise ValueError(f"Unknown ruler action {action!r}")


def cmd_reduce(args, config):
    outdir = args.outdir or config.outdir

    # Task 1: read the tile set
    s = parse_wang_set(Path(args.tileset).read_text())

    # Task 2: build the polycubes
    if args.manifest_only:
        data = manifest(s)
    else:
        triple = reduce(s)
        data = manifest(s, triple)
        for name, tile in zip(triple._fields, triple):
            write_cells(tile, os.path.join(outdir, f"{name}.txt"))

    # Task 3: write the manifest
    write_manifest(data, os.path.join(outdir, "manifest.json"))
    print(f"n={data['n']} m={data['m']} t={data['t']} levels={data['levels']}")
    return EXIT_OK


def cmd_solve(args, config):
    s = parse_wang_set(Path(args.tileset).read_text())
    budget = args.budget or config.node_budget
    if args.auto:
        out = solve_any_torus(s, args.max_side or config.max_torus, budget)
    else:
        if args.w is None or args.h is None:
            raise ValueError("solve needs a width and a height, or --auto")
        out = solve_torus(s, args.w, args.h, budget)

    if out.status is SolveStatus.UNKNOWN:
        print(f"unknown: budget of {budget} nodes exhausted")
        return EXIT_BUDGET
    if out.status is SolveStatus.NONE:
        print("none")
        return EXIT_NEGATIVE
    text = serialize_torus(out.tiling)
    if args.output:
        Path(args.output).parent.mkdir(parents=True, exist_ok=True)
        Path(args.output).write_text(text)
        logger.info(f"Tiling written to {args.output}")
    print(text, end="")
    return EXIT_OK


def cmd_assemble(args, config):
    outdir = args.outdir or config.outdir

    # Task 1: read the inputs
    s = parse_wang_set(Path(args.tileset).read_text())
    torus = parse_torus(Path(args.tiling).read_text())

    # Task 2: assemble and verify
    try:
        assembly = assemble_and_verify(
            s,
            torus,
            repeat_limit=config.torus_repeat_limit,
            offset_budget=config.offset_budget,
            check_torus=False,
        )
    except AssemblyError as err:
        print(f"failed at stage {err.stage!r}: {err}")
        return EXIT_NEGATIVE
    except OffsetError as err:
        print(f"failed at stage 'offsets': {err}")
        return EXIT_NEGATIVE

    # Task 3: store the result
    path = os.path.join(outdir, "assembly.json")
    write_manifest(assembly_manifest(assembly), path)
    print(f"verified: {len(assembly.placements)} tiles partition {assembly.basis.det} cells")
    return EXIT_OK


def _load_cells(source):
    if source == "cross":
        return build_cross()
    if source.endswith(".json"):
        assembly = assembly_from_manifest(read_manifest(source))
        cells = CellSet()
        for shape, offset in assembly.pieces():
            cells = cells | shape.translate(offset)
        return cells
    return read_cells(source)


def cmd_export(args, config):
    fmt = args.format or config.export_format
    cells = _load_cells(args.source)
    text = export(cells, fmt, args.output)
    if text is not None and args.output is None:
        print(text, end="")
    return EXIT_OK


def cmd_planecheck(args, config):
    if args.polyomino == "cross":
        tile = filler_projection()
    else:
        tile = polyomino_from_text(Path(args.polyomino).read_text())
    word = boundary_word(tile)
    found = bn_exact_factorization(word)
    print(f"boundary: {word}")
    print(f"exact tile: {'yes' if found else 'no'}")
    if found:
        print(f"factors: {found.a or '-'} {found.b or '-'} {found.c or '-'} (rotation {found.rotation})")
    if args.witness:
        window = find_obstruction(tile, args.witness)
        side = int(len(window) ** 0.5) if window else None
        print(f"witness window: {f'{side}x{side}' if window else 'none'}")
    return EXIT_OK if found else EXIT_NEGATIVE


def cmd_section(args, config):
    assembly = assembly_from_manifest(read_manifest(args.assembly))
    out = args.output or os.path.join(config.outdir, f"section_z{args.z}.png")
    plot_section(assembly, args.z, out_path=out)
    print(out)
    return EXIT_OK
