"""Command line entry point: ``mutascan <subcommand> ...``.

Exit codes: 0 success, 1 domain or I/O error (one ``error: Kind: message``
line on stderr), 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import catalog as catalog_mod
from .align import default_scheme, global_align, percent_identity, seed_scan
from .config import Config, load_config
from .errors import MutascanError
from .neuralnet import load_model, save_model
from .pipeline import predict, resolve_gene, train_model
from .seqio import fetch_reference, read_fasta_file, write_fasta
from .translate import StopPolicy, best_orf_frame, translate
from .variants import assess_candidate


def _read_one(path):
    return read_fasta_file(path)[0]


def _write_text(path, text):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _config(args) -> Config:
    cfg = load_config(args.config) if getattr(args, "config", None) else Config()
    over = {}
    for attr, key in (("seed", "seed"), ("frame", "frame"), ("threshold", "threshold"),
                      ("negatives", "negatives"), ("lr", "learning_rate"), ("goal", "mse_goal"),
                      ("max_epochs", "max_epochs"), ("init_range", "init_range"),
                      ("endpoint", "endpoint"), ("timeout", "timeout")):
        value = getattr(args, attr, None)
        if value is not None:
            over[key] = value
    for attr in ("match", "mismatch", "gap_open", "gap_extend"):
        value = getattr(args, attr, None)
        if value is not None:
            over[f"dna_{attr}"] = value
    return cfg.with_overrides(**over)


# -- subcommands --------------------------------------------------------------


def cmd_fetch(args):
    cfg = _config(args)
    endpoint = cfg.resolved_endpoint()
    if not endpoint:
        raise MutascanError("no endpoint: pass --endpoint, set fetch.endpoint or MUTASCAN_ENDPOINT")
    seq = fetch_reference(args.accession, endpoint, cfg.timeout)
    _write_text(args.out, write_fasta([seq]))
    return 0


def cmd_align(args):
    cfg = _config(args)
    a, b = _read_one(args.a), _read_one(args.b)
    scheme = cfg.dna_scheme if a.alphabet.value == "DNA" else cfg.protein_scheme
    al = global_align(a, b, scheme)
    if args.format == "json":
        d = al.to_dict()
        d["identity"] = percent_identity(al)
        d["ids"] = [a.id, b.id]
        if args.k:
            d["seeds"] = [
                {"query_pos": h.query_pos, "subject_pos": h.subject_pos, "length": h.length}
                for h in seed_scan(a, b, args.k)
            ]
        _write_text(args.out, json.dumps(d, indent=2) + "\n")
    else:
        _write_text(args.out, f"# {a.id} vs {b.id}  identity {percent_identity(al):.4f}\n" + al.to_text())
    return 0


def cmd_translate(args):
    out = []
    for seq in read_fasta_file(args.input):
        if args.frame == "auto":
            _, prot = best_orf_frame(seq)
        else:
            prot = translate(seq, int(args.frame), StopPolicy(args.stop_policy))
            if prot is None:
                print(f"warning: {seq.id} translates to an empty protein", file=sys.stderr)
                continue
        out.append(prot)
    _write_text(args.out, write_fasta(out))
    return 0


def cmd_call(args):
    cfg = _config(args)
    ref, patient = _read_one(args.ref), _read_one(args.patient)
    verdict = assess_candidate(ref, patient, cfg.frame_value, cfg.dna_scheme, cfg.protein_scheme)
    _write_text(args.out, json.dumps(verdict.to_dict(), indent=2) + "\n")
    return 0


def _parse_arch(text, cfg):
    sizes = [int(x) for x in text.split(",")]
    n = catalog_mod.feature_length(len(cfg.genes))
    if len(sizes) < 3 or sizes[0] != n or sizes[-1] != len(cfg.genes):
        raise MutascanError(f"--arch must look like {n},h1,...,{len(cfg.genes)}")
    return sizes[1:-1]


def cmd_train(args):
    cfg = _config(args)
    if args.arch:
        cfg = cfg.with_overrides(hidden=_parse_arch(args.arch, cfg))
    if args.catalog:
        with open(args.catalog, encoding="utf-8") as fh:
            cat = catalog_mod.load_catalog(fh.read(), cfg.genes)
    else:
        cat = catalog_mod.sample_catalog()
    if args.references:
        refs = {s.id: s for s in read_fasta_file(args.references)}
    else:
        refs = catalog_mod.sample_references()
    net, report, examples = train_model(cat, refs, cfg)
    save_model(net, args.out)
    if args.history:
        _write_text(args.history, report.history_csv())
    if args.dump_training_set:
        _write_text(args.dump_training_set, catalog_mod.training_set_json(examples))
    status = "goal met" if report.goal_met else "goal NOT met"
    print(f"trained {list(net.layer_sizes)} on {len(examples)} examples: "
          f"{report.epochs_run} epochs, final MSE {report.final_mse:.3e} ({status})")
    return 0


def cmd_predict(args):
    cfg = _config(args)
    ref, patient = _read_one(args.ref), _read_one(args.patient)
    model = load_model(args.model)
    with open(args.catalog, encoding="utf-8") as fh:
        cat = catalog_mod.load_catalog(fh.read(), cfg.genes)
    gene = resolve_gene(ref, cfg, args.gene)
    report = predict(ref, patient, model, cat, cfg, gene)
    if args.out:
        _write_text(args.out, report.to_json() + "\n")
    print(report.summary())
    return 0


# -- parser -------------------------------------------------------------------


def _add_config(p):
    p.add_argument("--config", help="key=value configuration file")


def _add_scheme(p):
    for name in ("match", "mismatch", "gap_open", "gap_extend"):
        p.add_argument(f"--{name.replace('_', '-')}", dest=name, type=int, help=f"DNA {name} score")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mutascan", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fetch", help="download a reference sequence as FASTA")
    p.add_argument("accession")
    p.add_argument("--endpoint", help="URL template containing {accession}")
    p.add_argument("--timeout", type=float)
    p.add_argument("--out", help="output FASTA (default stdout)")
    _add_config(p)
    p.set_defaults(func=cmd_fetch)

    p = sub.add_parser("align", help="global alignment of two sequences")
    p.add_argument("--a", required=True, help="first FASTA file")
    p.add_argument("--b", required=True, help="second FASTA file")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--k", type=int, help="also report exact seed hits of length >= k (json)")
    p.add_argument("--out")
    _add_scheme(p)
    _add_config(p)
    p.set_defaults(func=cmd_align)

    p = sub.add_parser("translate", help="translate DNA FASTA to protein FASTA")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--frame", choices=("0", "1", "2", "auto"), default="0")
    p.add_argument("--stop-policy", choices=("truncate", "through"), default="truncate")
    p.add_argument("--out")
    p.set_defaults(func=cmd_translate)

    p = sub.add_parser("call", help="call DNA and protein variants of a patient against a reference")
    p.add_argument("--ref", required=True)
    p.add_argument("--patient", required=True)
    p.add_argument("--frame", choices=("0", "1", "2", "auto"))
    p.add_argument("--out")
    _add_scheme(p)
    _add_config(p)
    p.set_defaults(func=cmd_call)

    p = sub.add_parser("train", help="train the classifier on a mutation catalog")
    p.add_argument("--catalog", help="catalog TSV (default: shipped synthetic sample)")
    p.add_argument("--references", help="FASTA with one reference per gene (default: shipped sample)")
    p.add_argument("--negatives", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--arch", help="layer sizes n,h1,h2,m")
    p.add_argument("--lr", type=float)
    p.add_argument("--goal", type=float)
    p.add_argument("--max-epochs", type=int)
    p.add_argument("--init-range", type=float)
    p.add_argument("--out", required=True, help="model file to write")
    p.add_argument("--history", help="per-epoch MSE CSV")
    p.add_argument("--dump-training-set", help="training set JSON for audit")
    _add_config(p)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("predict", help="classify a patient sequence")
    p.add_argument("--ref", required=True)
    p.add_argument("--patient", required=True)
    p.add_argument("--model", required=True)
    p.add_argument("--catalog", required=True)
    p.add_argument("--gene", help="gene name (default: reference id)")
    p.add_argument("--threshold", type=float)
    p.add_argument("--frame", choices=("0", "1", "2", "auto"))
    p.add_argument("--seed", type=int)
    p.add_argument("--out", help="RunReport JSON")
    _add_scheme(p)
    _add_config(p)
    p.set_defaults(func=cmd_predict)
    return parser


def run_cli(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (MutascanError, OSError, ValueError, KeyError) as exc:
        msg = str(exc).replace("\n", " ")
        print(f"error: {type(exc).__name__}: {msg}", file=sys.stderr)
        return 1


def main():
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
