"""End-to-end flow: detect protein-changing variants, match and classify them."""

from __future__ import annotations

import enum
import json
import time
from dataclasses import dataclass, field

import numpy as np

from .align import percent_identity
from .catalog import CatalogEntry, LabeledExample, build_training_set, encode, feature_length
from .config import Config
from .errors import ModelShapeMismatch, PositionOutOfRange, UnknownGene
from .neuralnet import Network, TrainConfig, TrainReport, forward, init_network, train
from .seqio import Sequence
from .variants import CandidateVerdict, assess_candidate

DISCLAIMER = (
    "DISCLAIMER: research reproduction only; this output is not a medical "
    "diagnosis and must not be used for clinical decisions."
)


class Verdict(str, enum.Enum):
    NORMAL = "Normal"
    ABNORMAL = "Abnormal"


@dataclass
class Prediction:
    verdict: Verdict
    per_gene_scores: dict[str, float]
    matched_catalog_entries: list[CatalogEntry]
    threshold: float
    variant_scores: list[dict] = field(default_factory=list)
    unscored_variants: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict.value,
            "per_gene_scores": dict(self.per_gene_scores),
            "matched_catalog_entries": [e.to_dict() for e in self.matched_catalog_entries],
            "threshold": self.threshold,
            "variant_scores": list(self.variant_scores),
            "unscored_variants": list(self.unscored_variants),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Prediction":
        return cls(
            Verdict(d["verdict"]),
            {k: float(v) for k, v in d["per_gene_scores"].items()},
            [CatalogEntry.from_dict(e) for e in d["matched_catalog_entries"]],
            float(d["threshold"]),
            list(d.get("variant_scores", [])),
            list(d.get("unscored_variants", [])),
        )


@dataclass
class RunReport:
    """Everything one ``predict`` call found, serialisable to JSON.

    ``prediction`` is ``None`` when the patient has no protein change; the
    network is not consulted in that case.
    """

    gene: str
    inputs: dict
    alignments: dict
    candidate: CandidateVerdict
    prediction: Prediction | None
    config: dict
    timings: dict = field(default_factory=dict)

    @property
    def verdict(self) -> Verdict:
        return self.prediction.verdict if self.prediction else Verdict.NORMAL

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict.value,
            "gene": self.gene,
            "inputs": self.inputs,
            "alignments": self.alignments,
            "candidate": self.candidate.to_dict(),
            "prediction": self.prediction.to_dict() if self.prediction else None,
            "config": self.config,
            "timings": self.timings,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "RunReport":
        return cls(
            d["gene"],
            d["inputs"],
            d["alignments"],
            CandidateVerdict.from_dict(d["candidate"]),
            Prediction.from_dict(d["prediction"]) if d.get("prediction") else None,
            d["config"],
            d.get("timings", {}),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "RunReport":
        return cls.from_dict(json.loads(text))

    def summary(self) -> str:
        c = self.candidate
        lines = [
            f"gene: {self.gene}",
            f"reference: {self.inputs['reference']['id']} ({self.inputs['reference']['length']} nt)",
            f"patient: {self.inputs['patient']['id']} ({self.inputs['patient']['length']} nt)",
            f"DNA variants: {', '.join(str(v) for v in c.dna_variants) or 'none'}",
            f"protein variants: {', '.join(str(v) for v in c.protein_variants) or 'none'}",
            f"rationale: {c.rationale.value}",
        ]
        if self.prediction:
            p = self.prediction
            scores = ", ".join(f"{g}={s:.4f}" for g, s in p.per_gene_scores.items())
            lines.append(f"network scores: {scores or 'n/a'} (threshold {p.threshold})")
            matched = ", ".join(f"{e.gene} {e.variant}" for e in p.matched_catalog_entries)
            lines.append(f"catalog matches: {matched or 'none'}")
        lines.append(f"verdict: {self.verdict.value}")
        lines.append(DISCLAIMER)
        return "\n".join(lines)


def resolve_gene(ref: Sequence, cfg: Config, gene: str | None = None) -> str:
    gene = gene or ref.id
    if gene not in cfg.genes:
        raise UnknownGene(f"cannot tell which gene {ref.id!r} is; pass one of {list(cfg.genes)}")
    return gene


def predict(
    ref: Sequence,
    patient: Sequence,
    model: Network,
    catalog: list[CatalogEntry],
    cfg: Config = Config(),
    gene: str | None = None,
) -> RunReport:
    t0 = time.perf_counter()
    gene = resolve_gene(ref, cfg, gene)
    n_features = feature_length(len(cfg.genes))
    if model.n_inputs != n_features or model.n_outputs != len(cfg.genes):
        raise ModelShapeMismatch(
            f"model maps {model.n_inputs}->{model.n_outputs}, "
            f"encoder needs {n_features}->{len(cfg.genes)}"
        )

    cand = assess_candidate(ref, patient, cfg.frame_value, cfg.dna_scheme, cfg.protein_scheme)
    t1 = time.perf_counter()
    alignments = {
        "dna": _alignment_summary(cand.dna_alignment),
        "protein": _alignment_summary(cand.protein_alignment),
    }

    prediction = None
    if cand.malignant_candidate:
        matched = [
            e for e in catalog if any(e.matches(gene, v) for v in cand.dna_variants)
        ]
        scores: dict[str, float] = {}
        per_variant = []
        unscored = []
        for v in cand.dna_variants:
            try:
                x = encode(gene, v, ref, len(ref), cfg.genes)
            except PositionOutOfRange:
                unscored.append(v.notation)
                continue
            y = forward(model, x).output
            per_variant.append({"variant": v.notation, "scores": dict(zip(cfg.genes, map(float, y)))})
            for g, s in zip(cfg.genes, y):
                scores[g] = max(scores.get(g, 0.0), float(s))
        top = max(scores.values(), default=0.0)
        abnormal = bool(matched) or top >= cfg.threshold
        prediction = Prediction(
            Verdict.ABNORMAL if abnormal else Verdict.NORMAL,
            scores,
            matched,
            cfg.threshold,
            per_variant,
            unscored,
        )
    t2 = time.perf_counter()

    return RunReport(
        gene=gene,
        inputs={
            "reference": {"id": ref.id, "length": len(ref)},
            "patient": {"id": patient.id, "length": len(patient)},
        },
        alignments=alignments,
        candidate=cand,
        prediction=prediction,
        config=cfg.to_dict(),
        timings={"assess_s": t1 - t0, "classify_s": t2 - t1},
    )


def _alignment_summary(al) -> dict | None:
    if al is None:
        return None
    return {
        "score": al.score,
        "identity": percent_identity(al),
        "columns": len(al),
        "banded": al.banded,
        "band_hit": al.band_hit,
    }


def train_model(
    catalog: list[CatalogEntry],
    references: dict[str, Sequence],
    cfg: Config = Config(),
) -> tuple[Network, TrainReport, list[LabeledExample]]:
    """Build the seeded training set, initialise the network and train it."""
    examples = build_training_set(catalog, references, cfg.negatives, cfg.seed, cfg.genes)
    sizes = cfg.architecture(feature_length(len(cfg.genes)))
    net = init_network(sizes, cfg.seed, cfg.init_range)
    tcfg = TrainConfig(cfg.learning_rate, cfg.mse_goal, cfg.max_epochs, cfg.seed, cfg.init_range)
    trained, report = train(net, examples, tcfg)
    return trained, report, examples


def feature_matrix(examples: list[LabeledExample]) -> tuple[np.ndarray, np.ndarray]:
    return np.array([e.features for e in examples]), np.array([e.target for e in examples])
