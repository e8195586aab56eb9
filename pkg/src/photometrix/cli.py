"""Command-line front end: figure pipelines and parameter sweeps.

    photometrix <pipeline> [--config FILE] [--out DIR] [--key value ...]
    photometrix sweep --engine NAME --grid "name=a:b:step" [...] [--out DIR]

Configuration files are flat ``key = value`` text; command-line flags win.
Exit codes: 0 success, 2 configuration error, 3 infeasible parameters.
"""

import sys
from pathlib import Path

from .errors import ConfigError, Infeasible, NoCrossing, PhotometrixError
from .pipelines import SWEEP_ENGINES, pipeline_names, run_pipeline, run_sweep


def usage():
    lines = [
        "usage: photometrix <pipeline> [--config FILE] [--out DIR] [--key value ...]",
        "       photometrix sweep --engine NAME --grid 'name=a:b:step' [options]",
        "",
        "pipelines:",
    ]
    lines += [f"  {name}" for name in pipeline_names()]
    lines.append("sweep engines:")
    lines += [f"  {name}" for name in sorted(SWEEP_ENGINES)]
    return "\n".join(lines)


def load_config(path):
    """Flat key = value file; '#' starts a comment, blank lines ignored."""
    layer = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key = value, got {raw!r}")
        key, _, value = line.partition("=")
        layer[key.strip().replace("-", "_")] = value.strip()
    return layer


def _split_args(argv):
    """Separate known flags from --key value overrides."""
    known = {"config": None, "out": ".", "engine": None, "grids": []}
    overrides = {}
    i = 0
    while i < len(argv):
        tok = argv[i]
        if not tok.startswith("--"):
            raise ConfigError(f"unexpected argument {tok!r}")
        key = tok[2:].replace("-", "_")
        if i + 1 >= len(argv):
            raise ConfigError(f"flag {tok} needs a value")
        value = argv[i + 1]
        i += 2
        if key == "config":
            known["config"] = value
        elif key == "out":
            known["out"] = value
        elif key == "engine":
            known["engine"] = value
        elif key == "grid":
            known["grids"].append(value)
        else:
            overrides[key] = value
    return known, overrides


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    if not argv or argv[0] in ("-h", "--help", "help"):
        print(usage())
        return 0 if argv else 2
    name = argv[0]
    try:
        known, overrides = _split_args(argv[1:])
        layers = []
        if known["config"]:
            layers.append(load_config(known["config"]))
        layers.append(overrides)
        if name == "sweep":
            if not known["engine"]:
                raise ConfigError("sweep requires --engine")
            manifest = run_sweep(known["engine"], known["grids"], layers, known["out"])
        else:
            manifest = run_pipeline(name, layers, known["out"])
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        print(usage(), file=sys.stderr)
        return 2
    except (Infeasible, NoCrossing, ValueError) as exc:
        # valid syntax, impossible physics (negative times, budgets, ...)
        print(f"infeasible: {exc}", file=sys.stderr)
        return 3
    except PhotometrixError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    for out in manifest["outputs"]:
        print(f"wrote {Path(known['out']) / out['file']} ({out['rows']} rows)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
