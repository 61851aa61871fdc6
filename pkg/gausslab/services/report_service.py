import json
import math
from typing import Any

from ..models import OutputFormat, Report, Verdict

EXIT_CODES = {Verdict.passed: 0, Verdict.failed: 1, Verdict.inconclusive: 3}


def exit_code(report: Report) -> int:
    """The process exit code is a function of the verdict alone."""
    return EXIT_CODES[report.verdict]


def _clean(value: Any) -> Any:
    """Non-finite floats become null; tuples become lists."""
    if isinstance(value, float):
        return value if math.isfinite(value) else None
    if isinstance(value, dict):
        return {str(k): _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    return value


def report_payload(report: Report) -> dict:
    return _clean(report.model_dump(mode="json", by_alias=True))


def to_json(report: Report) -> str:
    return json.dumps(report_payload(report), sort_keys=True, separators=(",", ":"), allow_nan=False)


def _text_lines(prefix: str, value: Any):
    if isinstance(value, dict):
        for key in sorted(value):
            yield from _text_lines(f"{prefix}.{key}" if prefix else key, value[key])
    elif isinstance(value, list) and value and all(isinstance(v, dict) for v in value):
        for i, item in enumerate(value):
            yield from _text_lines(f"{prefix}[{i}]", item)
    else:
        yield f"{prefix}: {json.dumps(value, allow_nan=False)}"


def to_text(report: Report) -> str:
    payload = report_payload(report)
    head = [f"command: {payload.pop('command')}", f"verdict: {payload.pop('verdict')}",
            f"seed: {payload.pop('seed')}", f"tol: {payload.pop('tol')}"]
    return "\n".join(head + list(_text_lines("", payload)))


def emit_report(report: Report, output_format: OutputFormat = OutputFormat.text) -> str:
    if OutputFormat(output_format) is OutputFormat.json:
        return to_json(report)
    return to_text(report)
