"""Command-line interface.

    cnemci featurize     --dataset DIR --embeddings VEC --out DIR
    cnemci evaluate      --dataset DIR --embeddings VEC --out DIR
    cnemci sweep         --dataset DIR --embeddings VEC --thresholds 0.3:0.9:0.1 --out DIR
    cnemci dump-network  --dataset DIR [--id ID] [--embeddings VEC --threshold T] [--out DIR]

Settings come from (lowest to highest priority) built-in defaults, a
``--dataset-preset``, a ``--config`` file of ``key = value`` lines, and
command-line flags.  Config keys are the long flag names without the
leading dashes (``dataset``, ``threshold``, ``svm-c`` ...).

Exit codes: 0 success, 1 internal error, 2 unreadable or malformed input
(or bad usage), 3 infeasible fold split, 4 invalid configuration value,
5 training failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import asdict, dataclass
from pathlib import Path

from .classify import MODEL_KINDS
from .corpus import Corpus, prepare_corpus
from .embedding import load_embeddings
from .errors import ConfigError, FormatError, SplitError, TrainingError
from .evalharness import DATASET_PRESETS, EvalConfig, cross_validate, threshold_sweep
from .preprocess import default_fillers, default_stopwords, load_dataset, load_wordlist
from .topometrics import assortativity_degenerate

logger = logging.getLogger("cnemci")

EXIT_OK, EXIT_INTERNAL, EXIT_INPUT, EXIT_SPLIT, EXIT_CONFIG, EXIT_TRAINING = 0, 1, 2, 3, 4, 5


class InputError(Exception):
    """A required input file is missing or unreadable (exit code 2)."""


# key -> (type, default)
SETTINGS = {
    "dataset": (str, None),
    "embeddings": (str, None),
    "stopwords": (str, None),
    "fillers": (str, None),
    "language": (str, "en"),
    "speaker": (str, "PAR"),
    "threshold": (float, 0.7),
    "thresholds": (str, "0.3:0.9:0.1"),
    "cross-sentence": (bool, True),
    "spaces": (str, "cn,cne,lm,bow"),
    "models": (str, ",".join(MODEL_KINDS)),
    "combine": (str, "ensemble,multiview"),
    "force-tie": (bool, False),
    "standardize": (bool, True),
    "k": (int, 5),
    "seed": (int, 0),
    "knn-k": (int, 3),
    "svm-c": (float, 1.0),
    "svm-gamma": (float, None),
    "svm-epochs": (int, 200),
    "smo-max-passes": (int, 200),
    "reference": (str, "svm_rbf:CNE"),
    "id": (str, None),
    "out": (str, "out"),
    "jobs": (int, 0),  # 0: one worker per CPU
    "dataset-preset": (str, None),
}


def _parse_bool(text: str) -> bool:
    t = str(text).strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"not a boolean: {text!r}")


def _convert(key: str, value):
    typ = SETTINGS[key][0]
    if value is None or isinstance(value, typ) and not isinstance(value, str):
        return value
    try:
        if typ is bool:
            return _parse_bool(value)
        return typ(value)
    except ValueError:
        raise ConfigError(f"bad value for {key}: {value!r}") from None


def read_config_file(path) -> dict:
    """Flat ``key = value`` file; ``#`` comments and blank lines ignored."""
    path = Path(path)
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise InputError(f"{path}: {exc}") from exc
    out = {}
    for lineno, line in enumerate(lines, start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise FormatError("expected 'key = value'", path=path, line=lineno)
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("_", "-")
        if key not in SETTINGS or key == "config":
            raise FormatError(f"unknown key {key!r}", path=path, line=lineno)
        out[key] = value
    return out


@dataclass
class RunConfig:
    dataset: str | None
    embeddings: str | None
    stopwords: str | None
    fillers: str | None
    language: str
    speaker: str
    threshold: float
    thresholds: str
    cross_sentence: bool
    spaces: tuple
    models: tuple
    ensemble: bool
    multiview: bool
    force_tie: bool
    standardize: bool
    k: int
    seed: int
    knn_k: int
    svm_c: float
    svm_gamma: float | None
    svm_epochs: int
    smo_max_passes: int
    reference: tuple
    id: str | None
    out: str
    jobs: int
    dataset_preset: str | None

    def eval_config(self, threshold: float | None = None) -> EvalConfig:
        return EvalConfig(
            spaces=self.spaces, models=self.models,
            combinations=None if self.multiview else (),
            ensemble=self.ensemble, k=self.k, seed=self.seed,
            threshold=self.threshold if threshold is None else threshold,
            standardize=self.standardize, force_tie_rule=self.force_tie,
            knn_k=self.knn_k, C=self.svm_c, gamma=self.svm_gamma,
            epochs=self.svm_epochs, max_passes=self.smo_max_passes)

    def threshold_list(self) -> list[float]:
        return parse_thresholds(self.thresholds)


def parse_thresholds(text: str) -> list[float]:
    """``start:stop:step`` (inclusive) or a comma-separated list."""
    text = text.strip()
    try:
        if ":" in text:
            start, stop, step = (float(x) for x in text.split(":"))
            if step <= 0:
                raise ConfigError("threshold step must be positive")
            n = int(round((stop - start) / step)) + 1
            vals = [round(start + i * step, 10) for i in range(n)]
        else:
            vals = [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise ConfigError(f"cannot parse thresholds {text!r}") from None
    return vals


def resolve(args: argparse.Namespace) -> RunConfig:
    settings = {k: d for k, (_, d) in SETTINGS.items()}
    flags = {k: getattr(args, k.replace("-", "_"), None) for k in SETTINGS}
    file_values = read_config_file(args.config) if getattr(args, "config", None) else {}
    preset = flags["dataset-preset"] or file_values.get("dataset-preset")
    if preset:
        if preset not in DATASET_PRESETS:
            raise ConfigError(f"unknown preset {preset!r}; choose from {sorted(DATASET_PRESETS)}")
        settings.update(DATASET_PRESETS[preset])
        settings["dataset-preset"] = preset
    for key, value in file_values.items():
        settings[key] = _convert(key, value)
    for key, value in flags.items():
        if value is not None:
            settings[key] = _convert(key, value)

    spaces = tuple(s.strip().upper() for s in settings["spaces"].split(",") if s.strip())
    models = tuple(m.strip().lower() for m in settings["models"].split(",") if m.strip())
    combine = {c.strip().lower() for c in settings["combine"].split(",") if c.strip()}
    if combine - {"ensemble", "multiview", "none"}:
        raise ConfigError(f"unknown combiner(s) {sorted(combine - {'ensemble', 'multiview', 'none'})}")
    ref = settings["reference"].split(":")
    if len(ref) != 2:
        raise ConfigError("reference must look like 'svm_rbf:CNE'")
    if not (0.0 < settings["threshold"] <= 1.0):
        raise ConfigError(f"threshold must be in (0, 1], got {settings['threshold']}")
    if settings["k"] < 2:
        raise ConfigError("k must be >= 2")
    if settings["language"] not in ("en", "pt") and not (settings["stopwords"] and settings["fillers"]):
        raise ConfigError(f"no built-in word lists for language {settings['language']!r}; "
                          "pass --stopwords and --fillers")
    jobs = settings["jobs"] if settings["jobs"] > 0 else (os.cpu_count() or 1)
    return RunConfig(
        dataset=settings["dataset"], embeddings=settings["embeddings"],
        stopwords=settings["stopwords"], fillers=settings["fillers"],
        language=settings["language"], speaker=settings["speaker"],
        threshold=settings["threshold"], thresholds=settings["thresholds"],
        cross_sentence=settings["cross-sentence"], spaces=spaces, models=models,
        ensemble="ensemble" in combine, multiview="multiview" in combine,
        force_tie=settings["force-tie"], standardize=settings["standardize"],
        k=settings["k"], seed=settings["seed"], knn_k=settings["knn-k"],
        svm_c=settings["svm-c"], svm_gamma=settings["svm-gamma"],
        svm_epochs=settings["svm-epochs"], smo_max_passes=settings["smo-max-passes"],
        reference=(ref[0], ref[1].upper()), id=settings["id"], out=settings["out"],
        jobs=jobs, dataset_preset=settings["dataset-preset"])


def _require_file(path, what):
    if not path:
        raise InputError(f"no {what} given")
    if not Path(path).exists():
        raise InputError(f"{what} not found: {path}")


def load_corpus(cfg: RunConfig, need_embeddings: bool) -> Corpus:
    _require_file(cfg.dataset, "dataset directory")
    if need_embeddings:
        _require_file(cfg.embeddings, "embedding file")
    stop = load_wordlist(cfg.stopwords) if cfg.stopwords else default_stopwords(cfg.language)
    fill = load_wordlist(cfg.fillers) if cfg.fillers else default_fillers(cfg.language)
    raws = load_dataset(cfg.dataset, speaker=cfg.speaker)
    emb = None
    if need_embeddings or cfg.embeddings:
        _require_file(cfg.embeddings, "embedding file")
        emb = load_embeddings(cfg.embeddings)
    corpus = prepare_corpus(raws, stop, fill, emb, cross_sentence=cfg.cross_sentence, jobs=cfg.jobs)
    for tid, reason in corpus.excluded:
        print(f"excluded {tid}: {reason}", file=sys.stderr)
    if not len(corpus):
        raise InputError("no usable transcripts in dataset")
    return corpus


def _outdir(cfg: RunConfig) -> Path:
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_featurize(cfg: RunConfig) -> int:
    corpus = load_corpus(cfg, need_embeddings="CNE" in cfg.spaces)
    out = _outdir(cfg)
    for space in cfg.spaces:
        if space == "BOW":
            fm = corpus.bow()
        else:
            fm = corpus.fixed_space(space, cfg.threshold)
        fm.to_csv(out / f"{space.lower()}.csv")
    if "CNE" in cfg.spaces:
        per = {}
        for t in corpus.items:
            net, rep = t.enriched(cfg.threshold)
            per[t.id] = {**asdict(rep), "assortativity_degenerate": assortativity_degenerate(net)}
        report = {
            "threshold": cfg.threshold,
            "total": asdict(corpus.enrichment_report(cfg.threshold)),
            "assortativity_degenerate": sorted(k for k, v in per.items() if v["assortativity_degenerate"]),
            "transcripts": per,
            "excluded": [list(e) for e in corpus.excluded],
        }
        (out / "enrichment_report.json").write_text(json.dumps(report, indent=2, sort_keys=True) + "\n",
                                                    encoding="utf-8")
    print(f"wrote {len(cfg.spaces)} feature file(s) for {len(corpus)} transcripts to {out}")
    return EXIT_OK


def cmd_evaluate(cfg: RunConfig) -> int:
    config = cfg.eval_config()
    corpus = load_corpus(cfg, need_embeddings="CNE" in cfg.spaces)
    report = cross_validate(corpus, config)
    out = _outdir(cfg)
    (out / "report.csv").write_text(report.to_csv(), encoding="utf-8")
    (out / "report.json").write_text(report.to_json(), encoding="utf-8")
    print(report.format_table())
    return EXIT_OK


def cmd_sweep(cfg: RunConfig) -> int:
    thresholds = cfg.threshold_list()
    config = cfg.eval_config(threshold=thresholds[0] if thresholds else None)
    corpus = load_corpus(cfg, need_embeddings=True)
    result = threshold_sweep(corpus, thresholds, config, reference=cfg.reference)
    out = _outdir(cfg)
    (out / "sweep.csv").write_text(result.to_csv(), encoding="utf-8")
    print(f"best_threshold={result.best_threshold:g}")
    return EXIT_OK


def cmd_dump_network(cfg: RunConfig) -> int:
    corpus = load_corpus(cfg, need_embeddings=False)
    items = corpus.items
    if cfg.id is not None:
        items = [t for t in items if t.id == cfg.id]
        if not items:
            raise InputError(f"no transcript with id {cfg.id!r}")
    out = Path(cfg.out) if cfg.out != SETTINGS["out"][1] or cfg.id is None else None
    if out is not None:
        out.mkdir(parents=True, exist_ok=True)
    for t in items:
        net = t.enriched(cfg.threshold)[0] if t.similarities is not None else t.network
        if out is None:
            sys.stdout.write(net.to_edgelist())
        else:
            net.write_edgelist(out / f"{t.id}.tsv")
    return EXIT_OK


COMMANDS = {
    "featurize": cmd_featurize,
    "evaluate": cmd_evaluate,
    "sweep": cmd_sweep,
    "dump-network": cmd_dump_network,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cnemci", description=__doc__.split("\n\n")[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", help="key = value settings file")
        for key, (typ, default) in SETTINGS.items():
            kw = {"default": None, "dest": key.replace("-", "_")}
            if typ is bool:
                p.add_argument(f"--{key}", action="store_const", const=True, **kw)
                p.add_argument(f"--no-{key}", action="store_const", const=False, **kw)
            else:
                p.add_argument(f"--{key}", type=typ, help=f"default: {default}", **kw)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = resolve(args)
        return COMMANDS[args.command](cfg)
    except (InputError, FormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except SplitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SPLIT
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except TrainingError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_TRAINING
    except Exception:
        logger.exception("internal error")
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
