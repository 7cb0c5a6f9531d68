"""Verdicts, reports and their text / key=value serializations."""

from __future__ import annotations

from dataclasses import dataclass, field

PASS = "pass"
FAIL = "fail"
INCONCLUSIVE = "inconclusive"
NOT_APPLICABLE = "not-applicable"

CERTIFIED = "windowed-certified"
REFUTED = "refuted"
INCONCLUSIVE_WINDOW = "inconclusive-window"

EXIT_CODES = {
    CERTIFIED: 0,
    PASS: 0,
    NOT_APPLICABLE: 0,
    REFUTED: 1,
    FAIL: 1,
    INCONCLUSIVE_WINDOW: 2,
    INCONCLUSIVE: 2,
}


@dataclass
class Verdict:
    """One named check: status plus a message and string-valued witnesses."""

    name: str
    status: str
    message: str = ""
    witness: dict = field(default_factory=dict)
    data: dict = field(default_factory=dict, repr=False)

    @property
    def ok(self) -> bool:
        return self.status in (PASS, NOT_APPLICABLE)

    def __bool__(self):
        return self.ok


def passed(name: str, message: str = "", **witness) -> Verdict:
    return Verdict(name, PASS, message, {k: str(v) for k, v in witness.items()})


def failed(name: str, message: str, **witness) -> Verdict:
    return Verdict(name, FAIL, message, {k: str(v) for k, v in witness.items()})


def combine(verdicts: list[Verdict], saturated: bool = True) -> str:
    """Certificate level from a list of verdicts."""
    if any(v.status == FAIL for v in verdicts):
        return REFUTED
    if not saturated or any(v.status == INCONCLUSIVE for v in verdicts):
        return INCONCLUSIVE_WINDOW
    return CERTIFIED


@dataclass
class Report:
    job: str
    instance: dict = field(default_factory=dict)
    verdicts: list[Verdict] = field(default_factory=list)
    certificate: str = CERTIFIED
    timing: dict | None = None

    def add(self, v: Verdict) -> Verdict:
        self.verdicts.append(v)
        return v

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.certificate]


def _clean(text: str) -> str:
    return " ".join(str(text).split())


def emit(report: Report, fmt: str = "text") -> str:
    """Serialize with a stable field order; ``fmt`` is text or structured."""
    if fmt == "structured":
        lines = [f"job={report.job}"]
        for k, v in report.instance.items():
            lines.append(f"instance.{k}={_clean(v)}")
        for v in report.verdicts:
            lines.append(f"check.{v.name}.status={v.status}")
            if v.message:
                lines.append(f"check.{v.name}.message={_clean(v.message)}")
            for k, w in v.witness.items():
                lines.append(f"check.{v.name}.witness.{k}={_clean(w)}")
        lines.append(f"certificate={report.certificate}")
        lines.append(f"exit={report.exit_code}")
        if report.timing:
            for k, t in report.timing.items():
                lines.append(f"timing.{k}={t:.3f}")
        return "\n".join(lines) + "\n"
    if fmt != "text":
        raise ValueError(f"unknown format {fmt!r}")
    lines = [f"{report.job}"]
    for k, v in report.instance.items():
        lines.append(f"  {k}: {v}")
    width = max((len(v.name) for v in report.verdicts), default=0)
    for v in report.verdicts:
        line = f"  [{v.status.upper():>14}] {v.name.ljust(width)}"
        if v.message:
            line += f"  {v.message}"
        lines.append(line)
        for k, w in v.witness.items():
            lines.append(f"{'':20}{k} = {w}")
    lines.append(f"certificate: {report.certificate}")
    if report.timing:
        lines.append("timing: " + ", ".join(f"{k} {t:.3f}s" for k, t in report.timing.items()))
    return "\n".join(lines) + "\n"


def parse_structured(text: str) -> dict[str, str]:
    """Read back the key=value form (for golden-file comparisons)."""
    out = {}
    for line in text.splitlines():
        if line.strip():
            k, _, v = line.partition("=")
            out[k] = v
    return out
