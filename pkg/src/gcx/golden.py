"""Bundled golden outputs for the derived CLI examples.

Regenerated by `gcx regen-golden`; the test suite compares fresh runs
byte-for-byte against these files.
"""

from __future__ import annotations

import io
import os
from contextlib import redirect_stdout


def default_dir():
    return os.path.join(os.path.dirname(os.path.abspath(__file__)), "golden")


# (relative filename, CLI argv producing it on stdout or via --out)
CASES = [
    ("z0_s2.terms", ["z0", "--space", "s2", "--truncation", "12"]),
    ("z0_s3.terms", ["z0", "--space", "s3", "--truncation", "12"]),
    ("z0_s4.terms", ["z0", "--space", "s4", "--truncation", "12"]),
    ("z0_t2.terms", ["z0", "--space", "t2", "--truncation", "12"]),
    ("basis_s3_deg0_w11.terms",
     ["basis", "--space", "s3", "--degree", "0", "--weight-max", "11", "--connected"]),
    ("cohomology_s3_fgc.txt",
     ["cohomology", "--space", "s3", "--degree=-2..1", "--weight-max", "9"]),
    ("cohomology_t2_gc.txt",
     ["cohomology", "--space", "t2", "--degree=1..3", "--weight-max", "6",
      "--view", "gc", "--truncation", "6"]),
]


def run_capture(argv):
    from gcx import cli

    buf = io.StringIO()
    with redirect_stdout(buf):
        code = cli.main(argv)
    if code != 0:
        raise RuntimeError("golden command failed (%d): %r" % (code, argv))
    return buf.getvalue()


def regenerate(directory=None):
    directory = directory or default_dir()
    os.makedirs(directory, exist_ok=True)
    for (name, argv) in CASES:
        text = run_capture(argv)
        with open(os.path.join(directory, name), "w", encoding="utf-8") as fh:
            fh.write(text)
