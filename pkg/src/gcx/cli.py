"""Batch command-line front end.

Exit codes: 0 success, 2 validation failure, 3 cap exceeded, 4 property
violation (nonzero d^2 product or Maurer-Cartan residual).  All numeric
output is exact (rationals rendered p or p/q); outputs are byte-deterministic
for fixed inputs.
"""

from __future__ import annotations

import argparse
import os
import sys
from fractions import Fraction

from gcx import basis as basismod
from gcx import lie, linalg, pairing, twisted
from gcx.basis import CapExceeded
from gcx.graphs import GraphError, GraphSum, graph_degree, read_terms, write_terms
from gcx.pairing import SpaceError, format_fraction

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_CAP = 3
EXIT_PROPERTY = 4


def resolve_space(arg, decoration_weight="homological"):
    """A path, or the name of a bundled space (s2, s3, s4, t2, s1xs2)."""
    if os.path.exists(arg):
        return pairing.load_space(arg, decoration_weight=decoration_weight)
    name = arg[:-6] if arg.endswith(".space") else arg
    builtin = pairing.builtin_space_path(name)
    if os.path.exists(builtin):
        return pairing.load_space(builtin, decoration_weight=decoration_weight)
    raise SpaceError("no such space file or bundled space: %s" % arg)


def parse_degree_range(text):
    if ".." in text:
        a, b = text.split("..", 1)
        return int(a), int(b)
    v = int(text)
    return v, v


def _load_element(space, path, truncation):
    with open(path, "r", encoding="utf-8") as fh:
        gs, osp_terms = read_terms(space, fh, default_truncation=truncation)
    el = lie.LieElement(space, gs.truncation, gs)
    if osp_terms:
        for (c, idx) in osp_terms:
            el.osp[idx] = el.osp.get(idx, Fraction(0)) + c
    return el


def _write_element(space, el, fh):
    write_terms(
        space,
        el.graphs.items(),
        fh,
        truncation=el.truncation,
        osp_terms=[(c, k) for k, c in sorted(el.osp.items())] or None,
    )


def _view_for(args, space, z):
    name = args.view
    if name == "gc":
        return lie.LieView(space, args.truncation, z=z)
    if name == "ge3":
        return lie.LieView(space, args.truncation, min_valence=3, z=z)
    if name == "gM":
        if z is None:
            z = lie.LieElement.zero(space, args.truncation)
        return lie.assemble_gM(space, z, args.truncation)
    raise SpaceError("view %s is not a Lie view" % name)


# -- commands ----------------------------------------------------------------


def cmd_space(args):
    if args.action != "validate":
        raise SpaceError("unknown space action %r" % args.action)
    sp = pairing.load_space(args.file)
    osp = sp.osp_neg_basis()
    print("OK %s: d=%d dim=%d osp_neg_dim=%d" % (sp.name, sp.d, sp.dim, len(osp)))
    return EXIT_OK


def cmd_basis(args):
    sp = resolve_space(args.space)
    gs = basismod.enumerate_basis(
        sp,
        args.degree,
        args.weight_max,
        connected=args.connected,
        min_valence=args.min_valence,
        cap=args.max_basis,
    )
    out = sys.stdout if args.out is None else open(args.out, "w", encoding="utf-8")
    try:
        write_terms(sp, [(g, Fraction(1)) for g in gs], out, truncation=args.weight_max)
    finally:
        if out is not sys.stdout:
            out.close()
    if args.out:
        print("wrote %d basis elements to %s" % (len(gs), args.out))
    return EXIT_OK


def cmd_dmatrix(args):
    sp = resolve_space(args.space)
    mat, src, dst = twisted.differential_matrix(
        sp,
        args.degree,
        args.weight_max,
        connected=args.connected,
        min_valence=args.min_valence,
        with_osp=(args.view == "osp-semidirect"),
        cap=args.max_basis,
    )
    prefix = args.out
    with open(prefix + ".sms", "w", encoding="utf-8") as fh:
        linalg.write_sms(mat, fh)
    from gcx.graphs import format_term_line

    def write_manifest(path, items):
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("truncation=%d\n" % args.weight_max)
            for it in items:
                if args.view == "osp-semidirect":
                    w, g = it
                    if w:
                        fh.write("osp=[%s]\n" % ",".join("(1,%d)" % b for b in w))
                    fh.write(format_term_line(sp, g, Fraction(1)) + "\n")
                else:
                    fh.write(format_term_line(sp, it, Fraction(1)) + "\n")

    write_manifest(prefix + ".src.terms", src)
    write_manifest(prefix + ".dst.terms", dst)
    print(
        "wrote %dx%d matrix (%d entries) to %s.sms"
        % (mat.rows, mat.cols, mat.nnz(), prefix)
    )
    return EXIT_OK


def cmd_verify_d2(args):
    sp = resolve_space(args.space)
    lo, hi = parse_degree_range(args.degree)
    with_osp = args.view == "osp-semidirect"
    mats = {}
    for deg in range(lo, hi + 1):
        mats[deg], _s, _t = twisted.differential_matrix(
            sp, deg, args.weight_max, connected=args.connected,
            min_valence=args.min_valence, with_osp=with_osp, cap=args.max_basis,
        )
    ok = True
    for deg in range(lo, hi):
        comp = mats[deg].matmul(mats[deg + 1])
        status = "OK" if comp.is_zero() else "FAIL"
        if not comp.is_zero():
            ok = False
        print("d2 %s degree %d -> %d: %s" % (sp.name, deg, deg + 2, status))
    return EXIT_OK if ok else EXIT_PROPERTY


def cmd_cohomology(args):
    sp = resolve_space(args.space)
    lo, hi = parse_degree_range(args.degree)
    rows = []
    if args.view in ("fgc", "osp-semidirect"):
        with_osp = args.view == "osp-semidirect"
        mats = {}
        for deg in range(lo - 1, hi + 2):
            mats[deg], _s, _t = twisted.differential_matrix(
                sp, deg, args.weight_max, connected=args.connected,
                min_valence=args.min_valence, with_osp=with_osp, cap=args.max_basis,
            )
        for deg in range(lo, hi + 1):
            dim = linalg.cohomology_dim(mats[deg - 1], mats[deg])
            rows.append((deg, dim))
    else:
        z = None
        if args.mc:
            z = _load_element(sp, args.mc, args.truncation)
        view = _view_for(args, sp, z)
        top = min(hi, 0) if args.view == "gM" else hi
        mats = {}
        for deg in range(lo - 1, top + 2):
            mats[deg] = view.matrix(deg)
        for deg in range(lo, top + 1):
            dim = linalg.cohomology_dim(mats[deg - 1], mats[deg])
            rows.append((deg, dim))
    for (deg, dim) in rows:
        print("H^%d: %d" % (deg, dim))
    return EXIT_OK


def cmd_mc_check(args):
    sp = resolve_space(args.space)
    el = _load_element(sp, args.element, args.truncation)
    res = lie.mc_residual(el, args.truncation)
    if res.is_zero():
        print("MC to order %d" % args.truncation)
        return EXIT_OK
    print("residual nonzero to order %d:" % args.truncation)
    for (g, c) in res.graphs.items():
        print("  %s * %s" % (format_fraction(c), g))
    for k, c in sorted(res.osp.items()):
        print("  %s * osp[%d]" % (format_fraction(c), k))
    return EXIT_PROPERTY


def cmd_bracket(args):
    sp = resolve_space(args.space)
    x = _load_element(sp, args.x, args.truncation)
    y = _load_element(sp, args.y, args.truncation)
    out_el = lie.bracket(x, y)
    out = sys.stdout if args.out is None else open(args.out, "w", encoding="utf-8")
    try:
        _write_element(sp, out_el, out)
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_OK


def cmd_z0(args):
    sp = resolve_space(args.space)
    el = lie.z0(sp, args.truncation)
    out = sys.stdout if args.out is None else open(args.out, "w", encoding="utf-8")
    try:
        _write_element(sp, el, out)
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_OK


def cmd_regen_golden(args):
    """Maintenance: rewrite the bundled golden outputs."""
    from gcx import golden

    golden.regenerate(args.dir)
    print("regenerated golden files in %s" % (args.dir or golden.default_dir()))
    return EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(prog="gcx", description=__doc__)
    p.add_argument("--jobs", type=int, default=1,
                   help="cap on worker processes (current build runs 1)")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("space", help="space file utilities")
    sp.add_argument("action", choices=["validate"])
    sp.add_argument("file")
    sp.set_defaults(func=cmd_space)

    def common(q, *, degree_range=False, truncation=False):
        q.add_argument("--space", required=True)
        if degree_range:
            q.add_argument("--degree", required=True,
                           help="single degree or inclusive range a..b")
        else:
            q.add_argument("--degree", type=int, required=True)
        q.add_argument("--weight-max", type=int, default=8)
        q.add_argument("--connected", action="store_true")
        q.add_argument("--min-valence", type=int, default=0)
        q.add_argument("--view", default="fgc",
                       choices=["fgc", "gc", "osp-semidirect", "ge3", "gM"])
        q.add_argument("--max-basis", type=int, default=None)
        if truncation:
            q.add_argument("--truncation", type=int, default=8)

    q = sub.add_parser("basis", help="write a canonical basis manifest")
    common(q)
    q.add_argument("--out")
    q.set_defaults(func=cmd_basis)

    q = sub.add_parser("dmatrix", help="write differential matrix (SMS) + manifests")
    common(q)
    q.add_argument("--out", required=True, help="output path prefix")
    q.set_defaults(func=cmd_dmatrix)

    q = sub.add_parser("verify-d2", help="check d o d = 0 on enumerated windows")
    common(q, degree_range=True)
    q.set_defaults(func=cmd_verify_d2)

    q = sub.add_parser("cohomology", help="print cohomology dimensions per degree")
    common(q, degree_range=True, truncation=True)
    q.add_argument("--mc", help="Maurer-Cartan element file for twisted views")
    q.set_defaults(func=cmd_cohomology)

    q = sub.add_parser("mc-check", help="verify the Maurer-Cartan equation")
    q.add_argument("--space", required=True)
    q.add_argument("--element", required=True)
    q.add_argument("--truncation", type=int, required=True)
    q.set_defaults(func=cmd_mc_check)

    q = sub.add_parser("bracket", help="Lie bracket of two element files")
    q.add_argument("--space", required=True)
    q.add_argument("--x", required=True)
    q.add_argument("--y", required=True)
    q.add_argument("--truncation", type=int, default=None)
    q.add_argument("--out")
    q.set_defaults(func=cmd_bracket)

    q = sub.add_parser("z0", help="write the one-vertex Maurer-Cartan element")
    q.add_argument("--space", required=True)
    q.add_argument("--truncation", type=int, default=12)
    q.add_argument("--out")
    q.set_defaults(func=cmd_z0)

    q = sub.add_parser("regen-golden", help="maintenance: regenerate golden files")
    q.add_argument("--dir", default=None)
    q.set_defaults(func=cmd_regen_golden)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (SpaceError, GraphError, linalg.LinalgError, OSError) as e:
        print("error: %s" % e, file=sys.stderr)
        return EXIT_VALIDATION
    except CapExceeded as e:
        print("cap exceeded: %s" % e, file=sys.stderr)
        return EXIT_CAP


if __name__ == "__main__":
    sys.exit(main())
