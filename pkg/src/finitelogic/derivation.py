"""Finite derivation traces that can be replayed step by step."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Mapping


@dataclass(frozen=True)
class Step:
    sentence: Any
    rule: str
    premises: tuple = ()
    params: tuple = ()  # sorted (key, value) pairs; values are hashable
    note: str = ""

    @property
    def param_dict(self) -> dict:
        return dict(self.params)


@dataclass(frozen=True)
class Derivation:
    steps: tuple
    render: Callable[[Any], str] = field(default=str, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple(self.steps))

    @property
    def conclusion(self):
        return self.steps[-1].sentence if self.steps else None

    def __len__(self) -> int:
        return len(self.steps)

    def skeleton(self) -> list:
        """Rule names and premise indices, ignoring the sentences."""
        return [(s.rule, s.premises) for s in self.steps]

    def to_records(self) -> list:
        out = []
        for i, s in enumerate(self.steps, 1):
            rec = {"step": i, "sentence": self.render(s.sentence), "rule": s.rule,
                   "premises": list(s.premises)}
            if s.params:
                rec["params"] = {k: self._param(v) for k, v in s.params}
            if s.note:
                rec["note"] = s.note
            out.append(rec)
        return out

    def _param(self, v):
        if isinstance(v, (str, int)):
            return v
        if isinstance(v, tuple):
            return [self._param(x) for x in v]
        return self.render(v)

    def to_text(self) -> str:
        lines = []
        for i, s in enumerate(self.steps, 1):
            prem = f" [{', '.join(map(str, s.premises))}]" if s.premises else ""
            note = f"  ({s.note})" if s.note else ""
            lines.append(f"{i:>3}. {self.render(s.sentence)}    {s.rule}{prem}{note}")
        return "\n".join(lines)


class ReplayError(ValueError):
    pass


def replay(d: Derivation, checkers: Mapping[str, Callable]) -> bool:
    """Re-verify every step.  ``checkers[rule](step, premise_sentences)`` -> bool.

    Premise indices are 1-based and must point backwards.
    """
    for i, step in enumerate(d.steps, 1):
        if any(not (1 <= p < i) for p in step.premises):
            raise ReplayError(f"step {i} cites a premise that is not earlier")
        check = checkers.get(step.rule)
        if check is None:
            raise ReplayError(f"step {i} uses unknown rule {step.rule!r}")
        prem = [d.steps[p - 1].sentence for p in step.premises]
        if not check(step, prem):
            raise ReplayError(f"step {i} ({step.rule}) does not follow: {d.render(step.sentence)}")
    return True
