"""Seeded generator of correlated noisy classifier outputs.

This is harness machinery, not a model of real network behavior: it exists
so the fusion pipeline can be exercised end to end, at desk scale, on data
where base classifiers make partially overlapping mistakes.

Per sample and model the generator first decides whether the model errs
(marginal rate 1 - accuracy_k).  Error events are coupled across models: a
sample is "shared difficulty" with probability ``error_overlap``, in which
case all models judge it against one common uniform draw, otherwise each
model draws independently.  With overlap 1.0 and equal accuracies the
models err on exactly the same samples.

Each row is then a peaked mixture.  A peak budget p in (1/2, 1) is drawn
from ``confusion_concentration`` (p = 1/2 + Beta(concentration, 2)/2).  A
correct model puts all of p on the true class and spreads 1 - p over the
other classes by a symmetric Dirichlet draw.  An erring model splits its
budget between the wrongly predicted class (share q ~ U(0.6, 0.9)) and the
true class (share 1 - q): mistakes come with reduced confidence and a
visible second guess, which is what gives a fusion rule something to
recover.  The wrongly predicted class always keeps the row's argmax.

All randomness is drawn from two fixed-length streams per split (error
events, then vector shapes), so a config's output is byte-stable and the
error pattern does not move when only vector-level parameters change.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import EnsembleSpec, LabelSpace, build_profile
from .dataio import DumpData
from .errors import ValidationError
from .inference import CropGroup

_Q_LOW, _Q_HIGH = 0.6, 0.9  # wrong-peak share of the budget on erring rows


@dataclass(frozen=True)
class SynthConfig:
    """Parameters of one synthetic run; every field is validated eagerly."""

    class_count: int = 11
    model_count: int = 2
    samples_per_class: int = 910
    per_model_accuracy: tuple[float, ...] = (0.90, 0.93)
    confusion_concentration: float = 8.0
    error_overlap: float = 0.3
    seed: int = 42

    def __post_init__(self):
        object.__setattr__(
            self, "per_model_accuracy", tuple(float(a) for a in self.per_model_accuracy)
        )
        problems = []
        if not isinstance(self.class_count, int) or self.class_count < 2:
            problems.append(f"class_count must be an integer >= 2, got {self.class_count!r}")
        if not isinstance(self.model_count, int) or self.model_count < 1:
            problems.append(f"model_count must be an integer >= 1, got {self.model_count!r}")
        if not isinstance(self.samples_per_class, int) or self.samples_per_class < 1:
            problems.append(
                f"samples_per_class must be a positive integer, got {self.samples_per_class!r}"
            )
        if isinstance(self.model_count, int) and self.model_count >= 1:
            if len(self.per_model_accuracy) != self.model_count:
                problems.append(
                    f"per_model_accuracy has {len(self.per_model_accuracy)} entries "
                    f"for model_count {self.model_count}"
                )
        for k, acc in enumerate(self.per_model_accuracy):
            if not 0.0 < acc < 1.0:
                problems.append(
                    f"per_model_accuracy[{k}] must lie strictly inside (0, 1), got {acc!r}"
                )
        if not self.confusion_concentration > 0.0:
            problems.append(
                f"confusion_concentration must be positive, got {self.confusion_concentration!r}"
            )
        if not 0.0 <= self.error_overlap <= 1.0:
            problems.append(
                f"error_overlap must lie in [0, 1], got {self.error_overlap!r}"
            )
        if not isinstance(self.seed, int) or not 0 <= self.seed < 2**64:
            problems.append(f"seed must be an unsigned 64-bit integer, got {self.seed!r}")
        if problems:
            raise ValidationError("invalid synth config: " + "; ".join(problems))

    @property
    def class_names(self) -> tuple[str, ...]:
        width = max(2, len(str(self.class_count - 1)))
        return tuple(f"class_{i:0{width}d}" for i in range(self.class_count))

    @property
    def model_names(self) -> tuple[str, ...]:
        return tuple(f"model_{k}" for k in range(self.model_count))


DEFAULT_CONFIG = SynthConfig()


@dataclass(frozen=True)
class SynthData:
    """Disjoint train and test dumps plus their label sidecars."""

    train: DumpData
    train_labels: dict[str, str]
    test: DumpData
    test_labels: dict[str, str]


def draw_error_events(cfg: SynthConfig, n: int, rng: np.random.Generator) -> np.ndarray:
    """(n, K) boolean error indicators with the documented pairwise coupling.

    Exactly n * (2 + K) uniforms are consumed whatever the overlap, so the
    same seed yields the same sample-level randomness across configs that
    differ only in error_overlap.
    """
    z = rng.random(n)
    u_shared = rng.random(n)
    u_own = rng.random((n, cfg.model_count))
    coupled = z < cfg.error_overlap
    u_eff = np.where(coupled[:, None], u_shared[:, None], u_own)
    thresholds = 1.0 - np.asarray(cfg.per_model_accuracy)
    return u_eff < thresholds[None, :]


def _generate_split(cfg: SynthConfig, split: str, split_code: int) -> tuple[DumpData, dict[str, str]]:
    c, k = cfg.class_count, cfg.model_count
    n = c * cfg.samples_per_class
    truth = np.repeat(np.arange(c), cfg.samples_per_class)

    rng_err = np.random.default_rng([cfg.seed, split_code, 0])
    errs = draw_error_events(cfg, n, rng_err)
    wrong_pick = rng_err.random((n, k))

    rng_vec = np.random.default_rng([cfg.seed, split_code, 1])
    budget = 0.5 + 0.5 * rng_vec.beta(cfg.confusion_concentration, 2.0, size=(n, k))
    q = rng_vec.uniform(_Q_LOW, _Q_HIGH, size=(n, k))
    gammas = rng_vec.standard_gamma(1.0, size=(n, k, c - 1))

    width = max(6, len(str(n - 1)))
    class_names = cfg.class_names
    groups: dict[str, CropGroup] = {}
    labels: dict[str, str] = {}
    for i in range(n):
        t = int(truth[i])
        rows = []
        for m in range(k):
            rows.append(
                _draw_row(
                    c,
                    t,
                    bool(errs[i, m]),
                    float(wrong_pick[i, m]),
                    float(budget[i, m]),
                    float(q[i, m]),
                    gammas[i, m],
                )
            )
        sample_id = f"{split}-{i:0{width}d}"
        groups[sample_id] = CropGroup(
            sample_id=sample_id,
            profiles=(build_profile(rows, model_count=k, class_count=c),),
            crop_ids=(0,),
        )
        labels[sample_id] = class_names[t]
    dump = DumpData(
        ensemble=EnsembleSpec(cfg.model_names),
        label_space=LabelSpace(class_names),
        groups=groups,
    )
    return dump, labels


def _draw_row(
    c: int,
    truth: int,
    errs: bool,
    wrong_pick: float,
    budget: float,
    q: float,
    gammas: np.ndarray,
) -> np.ndarray:
    row = np.zeros(c, dtype=np.float64)
    if not errs:
        spread = gammas / gammas.sum()
        others = [j for j in range(c) if j != truth]
        row[truth] = budget
        row[others] = (1.0 - budget) * spread
        return row
    wrong = [j for j in range(c) if j != truth][int(wrong_pick * (c - 1))]
    if c == 2:
        # no third class to spread over: the whole mass is the split
        row[wrong] = q
        row[truth] = 1.0 - q
        return row
    peak = q * budget
    second = (1.0 - q) * budget
    rest = 1.0 - budget
    others = [j for j in range(c) if j != truth and j != wrong]
    spread = rest * (gammas[: c - 2] / gammas[: c - 2].sum())
    top = spread.max()
    if top >= peak:
        # rare spiky draw: rescale the spread so the wrong class keeps the
        # argmax, and return the freed mass to the peak
        lam = peak / (2.0 * top)
        spread = spread * lam
        peak += rest * (1.0 - lam)
    row[others] = spread
    row[wrong] = peak
    row[truth] = second
    return row


def generate(cfg: SynthConfig) -> SynthData:
    """Generate disjoint train and test dumps, deterministically per seed."""
    train, train_labels = _generate_split(cfg, "train", 1)
    test, test_labels = _generate_split(cfg, "test", 2)
    return SynthData(
        train=train, train_labels=train_labels, test=test, test_labels=test_labels
    )
