"""
Report generation for lattice-maximal.
Builds the versioned JSON envelope every command prints, and the HTML suite summary.
"""
import hashlib
import json
import math
from pathlib import Path
from typing import Any, Dict, Optional

import numpy as np
from jinja2 import Template
from pydantic import BaseModel

from src.config import config
from src.models import SuiteReport

SCHEMA_VERSION = "1.0"

HTML_TEMPLATE = """
<!DOCTYPE html>
<html lang="en">
<head>
    <meta charset="UTF-8">
    <title>Acceptance suite - seed {{ report.seed }}</title>
    <style>
        body { font-family: 'Segoe UI', Roboto, sans-serif; color: #333; background: #f8f9fa; padding: 20px; }
        .container { max-width: 1000px; margin: 0 auto; background: white; border-radius: 10px; box-shadow: 0 4px 6px rgba(0,0,0,0.1); }
        .header { background: linear-gradient(135deg, #667eea 0%, #764ba2 100%); color: white; padding: 24px; border-radius: 10px 10px 0 0; }
        .content { padding: 24px; }
        table { width: 100%; border-collapse: collapse; }
        th, td { text-align: left; padding: 8px; border-bottom: 1px solid #e1e8ed; vertical-align: top; }
        .pass { color: #27ae60; font-weight: bold; }
        .fail { color: #c0392b; font-weight: bold; }
        pre { margin: 0; font-size: 0.85em; white-space: pre-wrap; }
        .digest { font-family: monospace; color: #7f8c8d; }
    </style>
</head>
<body>
<div class="container">
    <div class="header">
        <h1>Acceptance suite</h1>
        <div>seed {{ report.seed }}{% if report.quick %} &middot; quick mode{% endif %} &middot;
            <span class="{{ 'pass' if report.passed else 'fail' }}">{{ 'passed' if report.passed else 'failed' }}</span></div>
    </div>
    <div class="content">
        <table>
            <tr><th>#</th><th>Criterion</th><th>Result</th><th>Details</th></tr>
            {% for c in report.criteria %}
            <tr>
                <td>{{ loop.index }}</td>
                <td>{{ c.name }}</td>
                <td class="{{ 'pass' if c.passed else 'fail' }}">{{ 'pass' if c.passed else 'fail' }}</td>
                <td><pre>{{ details[loop.index0] }}</pre></td>
            </tr>
            {% endfor %}
        </table>
        <p class="digest">result digest {{ digest }}</p>
    </div>
</div>
</body>
</html>
"""


def to_jsonable(value: Any) -> Any:
    """Plain JSON types: models dumped, numpy unwrapped, infinities as "inf"."""
    if isinstance(value, BaseModel):
        return to_jsonable(value.model_dump())
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return to_jsonable(value.tolist())
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        if math.isnan(value):
            return "nan"
        return value
    if isinstance(value, Path):
        return str(value)
    return value


def canonical_json(value: Any) -> str:
    return json.dumps(to_jsonable(value), sort_keys=True, indent=2, ensure_ascii=False, allow_nan=False)


def digest(result: Any) -> str:
    return hashlib.sha256(canonical_json(result).encode("utf-8")).hexdigest()


def build_report(command: str, run_config: Dict[str, Any], result: Any) -> Dict[str, Any]:
    """The envelope printed by every command; equal inputs give equal bytes."""
    body = to_jsonable(result)
    return {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "config": to_jsonable(run_config),
        "result": body,
        "digest": digest(body),
    }


def write_report(document: Dict[str, Any], output: Optional[str]) -> str:
    """Write the canonical JSON to ``output`` (or return it for stdout)."""
    text = canonical_json(document) + "\n"
    if output:
        path = Path(output)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
    return text


def generate_suite_html(report: SuiteReport, output_path: Optional[str] = None) -> str:
    """
    Render the suite report as a standalone HTML page.

    Returns:
        Path to the generated HTML report
    """
    if output_path is None:
        config.setup_directories()
        output_path = config.ARTIFACTS_DIR / "suite_report.html"

    template = Template(HTML_TEMPLATE)
    html_content = template.render(
        report=report,
        details=[canonical_json(c.details) for c in report.criteria],
        digest=digest(report),
    )

    Path(output_path).parent.mkdir(parents=True, exist_ok=True)
    with open(output_path, "w", encoding="utf-8") as f:
        f.write(html_content)

    return str(output_path)
