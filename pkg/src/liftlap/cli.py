"""Command-line surface: constructions, spectra, and theorem verification.

Reports are JSON on stdout (stable key order, deterministic for fixed
inputs and seed); a human summary goes to stderr.  Exit codes: 0 when
every verdict holds, 1 when a verified claim fails, 2 for parse errors,
3 for precondition errors.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from pathlib import Path

import numpy as np

from . import io as llio
from .complexes import COMBINATORIAL, NORMALIZED
from .covering import derived_complex, induced_incidence_voltage, verify_covering
from .errors import CoveringViolation, GroupStructureError, LiftlapError, MalformedInputError
from .reference_fixture import search_reference_fixture
from .homology import verify_betti_inequality
from .operators import compare_spectra, laplacian_matrix, spectrum
from .representation import (
    abelian_weightings,
    block_laplacians,
    decompose_representation,
    voltage_group,
    two_fold_signing,
)

SCHEMES = {"combinatorial": COMBINATORIAL, "normalized": NORMALIZED}


def _hash_file(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _verdict(claim, holds, tolerance, max_error, **extra):
    out = {
        "claim": claim,
        "holds": bool(holds),
        "tolerance": tolerance,
        "max_error": None if max_error is None else float(max_error),
    }
    out.update(extra)
    return out


def _schemes(name):
    if name == "both":
        return [("combinatorial", COMBINATORIAL), ("normalized", NORMALIZED)]
    return [(name, SCHEMES[name])]


def _resolve_covering(args, inputs):
    if getattr(args, "map", None):
        cover, _ = llio.load_complex(args.cover)
        base, _ = llio.load_complex(args.base)
        vmap = llio.load_vertex_map(args.map)
        inputs.update({"cover": _hash_file(args.cover), "base": _hash_file(args.base), "map": _hash_file(args.map)})
        return verify_covering(cover, base, vmap)
    if getattr(args, "voltage", None):
        base, _ = llio.load_complex(args.base)
        psi = llio.load_edge_voltages(args.voltage, base)
        inputs.update({"base": _hash_file(args.base), "voltage": _hash_file(args.voltage)})
        result = derived_complex(base, psi)
        if not result.connected:
            raise LiftlapError(
                "the derived complex is disconnected; run 'cover build' to inspect its components"
            )
        return result.covering
    raise MalformedInputError("provide either --cover/--base/--map or --base/--voltage")


def _spec_values(s):
    return [float(v) for v in s.values]


# -- commands -----------------------------------------------------------------


def cmd_spectrum(args, report):
    K, file_scheme = llio.load_complex(args.complex)
    report["inputs"]["complex"] = _hash_file(args.complex)
    scheme = SCHEMES[args.scheme] if args.scheme else file_scheme
    decoration = None
    if args.signing:
        decoration = llio.load_signing(args.signing)
        report["inputs"]["signing"] = _hash_file(args.signing)
    if args.weighting:
        decoration = llio.load_weighting(args.weighting)
        report["inputs"]["weighting"] = _hash_file(args.weighting)
    op = laplacian_matrix(K, args.dim, args.kind, scheme, decoration)
    s = spectrum(op, args.tol)
    report["results"] = {
        "dim": args.dim,
        "kind": args.kind,
        "scheme": scheme.kind,
        "values": _spec_values(s),
        "clamped": s.clamped,
    }
    return []


def cmd_cover_build(args, report):
    base, _ = llio.load_complex(args.base)
    psi = llio.load_edge_voltages(args.voltage, base)
    report["inputs"]["base"] = _hash_file(args.base)
    report["inputs"]["voltage"] = _hash_file(args.voltage)
    result = derived_complex(base, psi)
    K = result.complex
    report["results"] = {
        "face_counts": {str(d): K.face_count(d) for d in K.dims()},
        "fold": psi.k,
        "connected": result.connected,
        "components": [sorted(c) for c in result.components],
        "vertex_map": [[v, result.vertex_map[v]] for v in sorted(result.vertex_map)],
    }
    if args.out:
        llio.save_complex(K, args.out)
        report["results"]["out"] = str(args.out)
    verdicts = [
        _verdict(
            "derived complex is a connected cover satisfying the covering axioms",
            result.connected,
            None,
            None,
            components=len(result.components),
        )
    ]
    if result.connected:
        verdicts.append(
            _verdict("constant fiber size across all dimensions", True, None, None, degree=result.covering.degree)
        )
    return verdicts


def cmd_cover_verify(args, report):
    cover, _ = llio.load_complex(args.cover)
    base, _ = llio.load_complex(args.base)
    vmap = llio.load_vertex_map(args.map)
    report["inputs"].update(
        {"cover": _hash_file(args.cover), "base": _hash_file(args.base), "map": _hash_file(args.map)}
    )
    try:
        cov = verify_covering(cover, base, vmap)
    except CoveringViolation as exc:
        report["results"] = {"violation": exc.kind, "witness": repr(exc.witness)}
        return [_verdict(f"covering axioms hold ({exc.kind})", False, None, None)]
    report["results"] = {"degree": cov.degree}
    return [_verdict("covering axioms hold", True, None, None, degree=cov.degree)]


def cmd_decompose(args, report):
    cov = _resolve_covering(args, report["inputs"])
    scheme = SCHEMES[args.scheme]
    layer = args.dim if args.direction == "up" else args.dim - 1
    psi = induced_incidence_voltage(cov, layer)
    group = voltage_group(psi)
    dec = decompose_representation(group, seed=args.seed)
    blocks = block_laplacians(cov.base, psi, args.dim, scheme, args.direction, dec)
    lifted = spectrum(laplacian_matrix(cov.cover, args.dim, args.direction, scheme), args.tol)
    spectra = [spectrum(b, args.tol) for b in blocks]
    union = spectra[0]
    for s in spectra[1:]:
        union = union.union(s)
    cmp_union = compare_spectra(lifted, union, "equal", tol=args.tol)
    base_op = laplacian_matrix(cov.base, args.dim, args.direction, scheme)
    first_err = (
        float(np.max(np.abs(blocks[0].matrix - base_op.matrix))) if base_op.size else 0.0
    )
    report["results"] = {
        "group_order": group.order,
        "block_sizes": list(dec.block_sizes),
        "block_spectra": [_spec_values(s) for s in spectra],
        "lifted_spectrum": _spec_values(lifted),
        "residual": dec.residual,
    }
    return [
        _verdict("block decomposition: off-block residual", dec.residual <= 1e-10, 1e-10, dec.residual),
        _verdict("block decomposition: first block is the base operator", first_err <= 1e-12, 1e-12, first_err),
        _verdict(
            "block decomposition: block spectra union to the lifted spectrum",
            cmp_union.holds,
            args.tol,
            cmp_union.max_pairing_error,
        ),
    ]


def _dims(cov, direction, requested):
    top = cov.base.top_dim
    valid = range(0, top + 1) if direction == "up" else range(1, top + 1)
    if requested is None:
        return list(valid)
    return [requested] if requested in valid else []


def cmd_verify_union(args, report):
    cov = _resolve_covering(args, report["inputs"])
    if cov.degree != 2:
        raise LiftlapError(f"the two-fold union property needs a 2-fold cover, got degree {cov.degree}")
    verdicts = []
    payload = {}
    for direction in ("up", "down"):
        for i in _dims(cov, direction, args.dim):
            psi = induced_incidence_voltage(cov, i if direction == "up" else i - 1)
            signing = two_fold_signing(psi)
            for name, scheme in _schemes(args.scheme):
                lifted = spectrum(laplacian_matrix(cov.cover, i, direction, scheme), args.tol)
                plain = spectrum(laplacian_matrix(cov.base, i, direction, scheme), args.tol)
                signed = spectrum(laplacian_matrix(cov.base, i, direction, scheme, signing), args.tol)
                cmp = compare_spectra(lifted, plain, "union", signed, tol=args.tol)
                verdicts.append(
                    _verdict(
                        f"two-fold spectral union ({direction}, dim {i}, {name})",
                        cmp.holds,
                        args.tol,
                        cmp.max_pairing_error,
                    )
                )
                payload[f"{direction}/{i}/{name}"] = {
                    "lifted": _spec_values(lifted),
                    "base": _spec_values(plain),
                    "signed": _spec_values(signed),
                }
    report["results"] = payload
    return verdicts


def cmd_verify_inclusion(args, report):
    cov = _resolve_covering(args, report["inputs"])
    verdicts = []
    for direction in ("up", "down"):
        for i in _dims(cov, direction, args.dim):
            for name, scheme in _schemes(args.scheme):
                big = spectrum(laplacian_matrix(cov.cover, i, direction, scheme), args.tol)
                small = spectrum(laplacian_matrix(cov.base, i, direction, scheme), args.tol)
                cmp = compare_spectra(small, big, "subset", tol=args.tol)
                verdicts.append(
                    _verdict(
                        f"spectral inclusion ({direction}, dim {i}, {name})",
                        cmp.holds,
                        args.tol,
                        cmp.max_pairing_error,
                    )
                )
    report["results"] = {"degree": cov.degree}
    return verdicts


def cmd_verify_abelian(args, report):
    cov = _resolve_covering(args, report["inputs"])
    verdicts = []
    skipped = []
    for direction in ("up", "down"):
        for i in _dims(cov, direction, args.dim):
            psi = induced_incidence_voltage(cov, i if direction == "up" else i - 1)
            group = voltage_group(psi)
            try:
                weightings = abelian_weightings(psi, group, seed=args.seed)
            except GroupStructureError:
                if args.dim is not None:
                    raise
                # hypothesis not met on this layer (trivial or intransitive
                # voltage group); the claim does not apply there
                skipped.append(f"{direction}/{i}")
                continue
            for name, scheme in _schemes(args.scheme):
                lifted = spectrum(laplacian_matrix(cov.cover, i, direction, scheme), args.tol)
                union = spectrum(laplacian_matrix(cov.base, i, direction, scheme), args.tol)
                for w in weightings:
                    union = union.union(
                        spectrum(laplacian_matrix(cov.base, i, direction, scheme, w), args.tol)
                    )
                cmp = compare_spectra(lifted, union, "equal", tol=args.tol)
                verdicts.append(
                    _verdict(
                        f"abelian character decomposition ({direction}, dim {i}, {name})",
                        cmp.holds,
                        args.tol,
                        cmp.max_pairing_error,
                    )
                )
    report["results"] = {"degree": cov.degree, "skipped_layers": skipped}
    return verdicts


def cmd_verify_betti(args, report):
    cov = _resolve_covering(args, report["inputs"])
    verdicts = []
    payload = {}
    for name, scheme in _schemes(args.scheme):
        rep = verify_betti_inequality(cov, scheme, args.tol, args.kernel_tol)
        for v in rep.per_dim:
            if args.dim is not None and v.dim != args.dim:
                continue
            verdicts.append(
                _verdict(
                    f"betti inequality via harmonic lifting (dim {v.dim}, {name})",
                    v.holds,
                    args.tol,
                    v.lift_residual,
                    betti_base=v.betti_base,
                    betti_cover=v.betti_cover,
                )
            )
        payload[name] = {str(v.dim): [v.betti_base, v.betti_cover] for v in rep.per_dim}
    report["results"] = payload
    return verdicts


def cmd_fixture(args, report):
    fixture = search_reference_fixture(args.tol)
    if fixture is None:
        report["results"] = {"found": False}
        return [_verdict("reference 2-complex recovered by spectrum search", False, args.tol, None)]
    doc = {
        "found": True,
        "facets": [list(f) for f in fixture.facets],
        "flip": {"face": list(fixture.flip[0]), "cofacet": list(fixture.flip[1])},
        "labeled_matches": fixture.matches,
    }
    report["results"] = doc
    out = Path(args.out)
    out.write_text(json.dumps(doc, sort_keys=True, indent=1))
    report["results"]["out"] = str(out)
    return [
        _verdict(
            "reference 2-complex recovered and companion spectra reproduced",
            True,
            args.tol,
            None,
        )
    ]


# -- argument parsing ----------------------------------------------------------


def _add_cover_inputs(p):
    p.add_argument("--cover", help="covering complex file")
    p.add_argument("--base", required=True, help="base complex file")
    p.add_argument("--map", help="vertex map file (with --cover)")
    p.add_argument("--voltage", help="1-skeleton voltage file (instead of --cover/--map)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="liftlap", description=__doc__)
    ap.add_argument("--seed", type=int, default=0, help="seed for the randomized decomposition")
    ap.add_argument("--tol", type=float, default=1e-8, help="spectrum comparison tolerance")
    ap.add_argument("--kernel-tol", type=float, default=1e-7, help="kernel eigenvalue cutoff")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", help="spectrum of a Laplace operator")
    p.add_argument("--complex", required=True)
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--kind", choices=["up", "down", "full"], default="up")
    p.add_argument("--scheme", choices=sorted(SCHEMES))
    p.add_argument("--signing")
    p.add_argument("--weighting")
    p.set_defaults(func=cmd_spectrum)

    pc = sub.add_parser("cover", help="build or verify coverings")
    csub = pc.add_subparsers(dest="subcommand", required=True)
    p = csub.add_parser("build", help="derived complex from 1-skeleton voltages")
    p.add_argument("--base", required=True)
    p.add_argument("--voltage", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_cover_build)
    p = csub.add_parser("verify", help="check the covering axioms of a vertex map")
    p.add_argument("--cover", required=True)
    p.add_argument("--base", required=True)
    p.add_argument("--map", required=True)
    p.set_defaults(func=cmd_cover_verify)

    p = sub.add_parser("decompose", help="block decomposition of a lifted operator")
    _add_cover_inputs(p)
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--direction", choices=["up", "down"], default="up")
    p.add_argument("--scheme", choices=sorted(SCHEMES), default="combinatorial")
    p.set_defaults(func=cmd_decompose)

    pv = sub.add_parser("verify", help="verify a spectral or homological claim")
    vsub = pv.add_subparsers(dest="subcommand", required=True)
    for name, fn in [
        ("union", cmd_verify_union),
        ("inclusion", cmd_verify_inclusion),
        ("abelian", cmd_verify_abelian),
        ("betti", cmd_verify_betti),
    ]:
        p = vsub.add_parser(name)
        _add_cover_inputs(p)
        p.add_argument("--dim", type=int)
        p.add_argument("--scheme", choices=sorted(SCHEMES) + ["both"], default="both")
        p.set_defaults(func=fn)

    pf = sub.add_parser("fixture", help="fixture recovery oracles")
    fsub = pf.add_subparsers(dest="subcommand", required=True)
    p = fsub.add_parser("search-fig1", help="brute-force search for the reference 2-complex")
    p.add_argument("--out", default="fig1_fixture.json")
    p.set_defaults(func=cmd_fixture)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    report = {
        "command": args.command + (f" {args.subcommand}" if getattr(args, "subcommand", None) else ""),
        "inputs": {},
        "seed": args.seed,
        "results": {},
        "verdicts": [],
    }
    import warnings

    try:
        with warnings.catch_warnings(record=True) as notes:
            warnings.simplefilter("always")
            verdicts = args.func(args, report)
    except MalformedInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except LiftlapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    for note in notes:
        print(f"note: {note.message}", file=sys.stderr)
    report["verdicts"] = verdicts
    print(json.dumps(report, sort_keys=True))
    for v in verdicts:
        status = "PASS" if v["holds"] else "FAIL"
        err = "" if v["max_error"] is None else f" (max_error={v['max_error']:.3e})"
        print(f"[{status}] {v['claim']}{err}", file=sys.stderr)
    if not verdicts:
        print("done (no verdicts)", file=sys.stderr)
    return 0 if all(v["holds"] for v in verdicts) else 1


if __name__ == "__main__":
    sys.exit(main())
