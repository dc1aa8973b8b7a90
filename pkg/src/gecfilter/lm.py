"""Language-model scoring: a character n-gram model and a process adapter.

Both scorers satisfy one contract: ``score(sentence)`` returns the total
negative log-likelihood in nats together with the number of scored tokens
(one per character plus one end-of-sentence event). Perplexity is then
``exp(nll / tokens)``, so an empty sentence still has a defined score and
deletions cannot game the length normalization.
"""

from __future__ import annotations

import math
import shlex
import subprocess
import threading
from collections import Counter
from typing import Iterable, Protocol, Sequence

from .errors import ConfigError, ScorerError

PAD = "\x02"
END = "\x03"

_ESCAPES = {"\\": "\\\\", "\t": "\\t", "\n": "\\n", "\r": "\\r",
            " ": "\\s", PAD: "\\x02", END: "\\x03"}
_UNESCAPES = {v: k for k, v in _ESCAPES.items()}


class LMScorer(Protocol):
    """Anything that can score a sentence."""

    def score(self, sentence: str) -> tuple[float, int]:
        """Return (total negative log-likelihood in nats, token count)."""
        ...


def perplexity(nll_total: float, token_count: int) -> float:
    """exp of the mean per-token negative log-likelihood; always >= 1."""
    if token_count < 1:
        raise ValueError(f"token_count must be >= 1, got {token_count}")
    return math.exp(nll_total / token_count)


def sentence_perplexity(scorer: LMScorer, sentence: str) -> float:
    return perplexity(*scorer.score(sentence))


class CharNgramLM:
    """Add-k smoothed character n-gram model.

    Contexts are the preceding ``order - 1`` characters, start-padded; the
    vocabulary is every character seen in training plus the end symbol, and
    each context distribution over that vocabulary sums to one. Unseen
    characters still receive the additive floor probability. Instances are
    immutable after construction and safe to share across threads.
    """

    def __init__(self, order: int, smooth_k: float,
                 counts: dict[str, Counter], vocab: Iterable[str]):
        if order < 1:
            raise ConfigError(f"order must be >= 1, got {order}")
        if smooth_k <= 0:
            raise ConfigError(f"smooth_k must be > 0, got {smooth_k}")
        self.order = order
        self.smooth_k = smooth_k
        self.counts = {ctx: Counter(c) for ctx, c in counts.items()}
        self.totals = {ctx: sum(c.values()) for ctx, c in self.counts.items()}
        self.vocab = frozenset(vocab) | {END}
        self._logp_cache: dict[tuple[str, str], float] = {}

    def prob(self, context: str, unit: str) -> float:
        """P(unit | last order-1 characters of context)."""
        if self.order > 1:
            context = (PAD * (self.order - 1) + context)[-(self.order - 1):]
        else:
            context = ""
        ctx_counts = self.counts.get(context)
        count = ctx_counts.get(unit, 0) if ctx_counts else 0
        total = self.totals.get(context, 0)
        k = self.smooth_k
        return (count + k) / (total + k * len(self.vocab))

    def _logp(self, context: str, unit: str) -> float:
        key = (context, unit)
        cached = self._logp_cache.get(key)
        if cached is None:
            cached = math.log(self.prob(context, unit))
            self._logp_cache[key] = cached
        return cached

    def score(self, sentence: str) -> tuple[float, int]:
        """Total NLL in nats and token count (characters + end symbol)."""
        if PAD in sentence or END in sentence:
            raise ValueError("sentence contains reserved control characters")
        n = self.order
        padded = PAD * (n - 1) + sentence + END
        logp = self._logp
        nll = 0.0
        for t in range(n - 1, len(padded)):
            nll -= logp(padded[t - n + 1:t], padded[t])
        return nll, len(sentence) + 1

    def save(self, path) -> str:
        """Write the model as a versioned TSV file; returns the path."""
        lines = [f"gecfilter-charlm\t1\t{self.order}\t{self.smooth_k!r}"]
        lines.append("V\t" + " ".join(sorted(_escape(u) for u in self.vocab)))
        for ctx in sorted(self.counts):
            for unit, count in sorted(self.counts[ctx].items()):
                lines.append(f"{_escape(ctx)}\t{_escape(unit)}\t{count}")
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("\n".join(lines) + "\n")
        return str(path)

    @classmethod
    def load(cls, path) -> "CharNgramLM":
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
        if not lines:
            raise ConfigError(f"{path}: empty model file")
        header = lines[0].split("\t")
        if len(header) != 4 or header[0] != "gecfilter-charlm":
            raise ConfigError(f"{path}: not a charlm model file")
        if header[1] != "1":
            raise ConfigError(f"{path}: unsupported model version {header[1]}")
        order, smooth_k = int(header[2]), float(header[3])
        if len(lines) < 2 or not lines[1].startswith("V\t"):
            raise ConfigError(f"{path}: missing vocabulary line")
        vocab = {_unescape(tok) for tok in lines[1][2:].split(" ") if tok}
        counts: dict[str, Counter] = {}
        for line_no, line in enumerate(lines[2:], start=3):
            parts = line.split("\t")
            if len(parts) != 3:
                raise ConfigError(f"{path}:{line_no}: malformed count line")
            ctx, unit, count = _unescape(parts[0]), _unescape(parts[1]), parts[2]
            counts.setdefault(ctx, Counter())[unit] = int(count)
        return cls(order, smooth_k, counts, vocab - {END})


def train_ngram(corpus: Sequence[str], order: int = 3,
                smooth_k: float = 0.1) -> CharNgramLM:
    """Count boundary-padded n-grams over a corpus of sentences."""
    if order < 1:
        raise ConfigError(f"order must be >= 1, got {order}")
    if smooth_k <= 0:
        raise ConfigError(f"smooth_k must be > 0, got {smooth_k}")
    corpus = list(corpus)
    if not corpus:
        raise ConfigError("cannot train an n-gram model on an empty corpus")
    counts: dict[str, Counter] = {}
    vocab: set[str] = set()
    pad = PAD * (order - 1)
    for sentence in corpus:
        if PAD in sentence or END in sentence:
            raise ValueError("sentence contains reserved control characters")
        vocab.update(sentence)
        padded = pad + sentence + END
        for t in range(order - 1, len(padded)):
            ctx = padded[t - order + 1:t]
            counts.setdefault(ctx, Counter())[padded[t]] += 1
    return CharNgramLM(order, smooth_k, counts, vocab)


class ExternalScorer:
    """Adapter for an external scorer speaking a line protocol.

    The child is started lazily and kept alive: we write one sentence per
    line to its stdin and read one ``<nll_total> <token_count>`` line back
    per sentence, in order. Requests are serialized per child process. Any
    exit, protocol breach or unparsable reply raises ScorerError.
    """

    def __init__(self, command: str):
        self.command = command
        self._argv = shlex.split(command)
        if not self._argv:
            raise ConfigError("empty scorer command")
        self._proc: subprocess.Popen | None = None
        self._lock = threading.Lock()

    def _ensure_started(self) -> subprocess.Popen:
        if self._proc is None or self._proc.poll() is not None:
            try:
                self._proc = subprocess.Popen(
                    self._argv, stdin=subprocess.PIPE, stdout=subprocess.PIPE,
                    stderr=subprocess.PIPE, text=True, encoding="utf-8",
                    bufsize=1)
            except OSError as exc:
                raise ScorerError(f"cannot start scorer {self.command!r}: {exc}")
        return self._proc

    def score(self, sentence: str) -> tuple[float, int]:
        if "\n" in sentence or "\r" in sentence:
            raise ValueError("sentence contains a line break")
        with self._lock:
            proc = self._ensure_started()
            try:
                proc.stdin.write(sentence + "\n")
                proc.stdin.flush()
                reply = proc.stdout.readline()
            except (BrokenPipeError, OSError) as exc:
                raise ScorerError(f"scorer pipe failed: {exc}") from exc
            if reply == "":
                rc = proc.wait()
                stderr = proc.stderr.read() if proc.stderr else ""
                raise ScorerError(
                    f"scorer exited with code {rc} before replying"
                    + (f" [stderr: {stderr.strip()[-500:]}]" if stderr.strip() else ""))
        parts = reply.split()
        if len(parts) != 2:
            raise ScorerError(f"malformed scorer reply {reply!r}")
        try:
            nll, tokens = float(parts[0]), int(parts[1])
        except ValueError:
            raise ScorerError(f"non-numeric scorer reply {reply!r}")
        if nll < 0 or tokens < 1:
            raise ScorerError(f"out-of-range scorer reply {reply!r}")
        return nll, tokens

    def close(self) -> None:
        with self._lock:
            proc, self._proc = self._proc, None
        if proc is not None and proc.poll() is None:
            proc.stdin.close()
            try:
                proc.wait(timeout=5)
            except subprocess.TimeoutExpired:
                proc.kill()
                proc.wait()

    def __enter__(self) -> "ExternalScorer":
        return self

    def __exit__(self, *exc_info) -> None:
        self.close()


def _escape(text: str) -> str:
    for raw, esc in _ESCAPES.items():
        text = text.replace(raw, esc)
    return text


def _unescape(text: str) -> str:
    out = []
    i = 0
    while i < len(text):
        if text[i] == "\\":
            for esc, raw in _UNESCAPES.items():
                if text.startswith(esc, i):
                    out.append(raw)
                    i += len(esc)
                    break
            else:
                raise ConfigError(f"bad escape in model file near {text[i:i+4]!r}")
        else:
            out.append(text[i])
            i += 1
    return "".join(out)
