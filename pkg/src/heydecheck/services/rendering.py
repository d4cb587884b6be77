"""Human-readable rendering of report envelopes."""

from typing import Any

from rich.table import Table
from rich.text import Text

from heydecheck.models.equation import VerificationReport, VerificationStatus
from heydecheck.services.serialization import IReportCodec, JsonReportCodec

FORMATS = ("text", "markdown")

_STATUS_STYLES = {
    VerificationStatus.VERIFIED: "green",
    VerificationStatus.VIOLATED: "red",
    VerificationStatus.INCONCLUSIVE: "yellow",
}


def status_line(report: VerificationReport) -> str:
    """E.g. "VERIFIED (4096 pairs, exact)"."""
    if report.pairs_checked == 0:
        return f"{report.status.label} (0 pairs)"
    if report.exact_pairs == report.pairs_checked:
        mode = "exact"
    else:
        mode = f"tolerance {report.tolerance_used:g}"
    return f"{report.status.label} ({report.pairs_checked} pairs, {mode})"


def witness_line(report: VerificationReport) -> str | None:
    if report.witness is None:
        return None
    w = report.witness
    return f"(u,v) = ({w.u}, {w.v}): lhs = {w.lhs}, rhs = {w.rhs}"


class ReportRenderer:
    """Renders {config, result, generatedAt} envelopes per command."""

    def __init__(self, codec: IReportCodec | None = None) -> None:
        self._codec = codec or JsonReportCodec()

    def _check(self, envelope: Any) -> tuple[str, dict[str, Any], Any]:
        if not isinstance(envelope, dict):
            raise ValueError("A report must be a JSON object")
        for key in ("config", "result", "generatedAt"):
            if key not in envelope:
                raise ValueError(f"Report is missing '{key}'")
        config = envelope["config"]
        if not isinstance(config, dict) or not isinstance(config.get("command"), str):
            raise ValueError("Report config needs a 'command'")
        return config["command"], config, envelope["result"]

    def lines(self, envelope: Any) -> list[str]:
        """Plain lines shared by the text and markdown formats."""
        command, _, result = self._check(envelope)
        if not isinstance(result, dict):
            raise ValueError("Report result must be an object")
        try:
            return self._command_lines(command, result)
        except KeyError as e:
            raise ValueError(f"Report is missing {e}") from e
        except (TypeError, AttributeError) as e:
            raise ValueError(f"Malformed {command} report: {e}") from e

    def _command_lines(self, command: str, result: dict[str, Any]) -> list[str]:
        if command == "aut":
            return self._aut_lines(result)
        if command == "construct":
            return self._construct_lines(result)
        if command == "verify":
            return self._verify_lines(result)
        if command == "simulate":
            return self._simulate_lines(result)
        if command == "suite":
            return [f"{e['name']}: {'ok' if e['green'] else 'FAIL'}" for e in self._suite_entries(result)]
        raise ValueError(f"Unsupported report command: {command}")

    def _aut_lines(self, result: dict[str, Any]) -> list[str]:
        lines = [
            f"f_{result.get('n')} is {'an automorphism' if result['isAut'] else 'not an automorphism'}",
            f"Heyde admissible: {'yes' if result['heydeAdmissible'] else 'no'}",
        ]
        if result.get("primeWitness") is not None:
            lines.append(f"prime witness: {result['primeWitness']}")
        return lines

    def _construct_lines(self, result: dict[str, Any]) -> list[str]:
        construction = result["construction"]
        lines = [
            f"{construction['name']} ({construction['provenance']})",
            f"equation: {construction['equation']['name']}",
            f"grid: {construction['grid']['label']}",
            f"expected classes: {construction['expectedClass1']} / {construction['expectedClass2']}",
        ]
        if "classes" in result:
            lines.append(f"classified: {' / '.join(result['classes'])}")
        lines.extend(f"note: {note}" for note in construction.get("notes", []))
        return lines

    def _verify_lines(self, result: dict[str, Any]) -> list[str]:
        report = self._codec.decode_verification(result.get("report"))
        lines = [f"{report.equation}: {status_line(report)}"]
        witness = witness_line(report)
        if witness:
            lines.append(witness)
        if report.note:
            lines.append(f"note: {report.note}")
        lines.extend(f"note: {note}" for note in result.get("notes", []))
        implication = result.get("implication")
        if implication:
            for data in (implication["premise"], *implication["conclusions"]):
                sub = self._codec.decode_verification(data)
                lines.append(f"  {sub.equation}: {status_line(sub)}")
            lines.append(f"implication holds: {'yes' if implication['holds'] else 'no'}")
        return lines

    def _simulate_lines(self, result: dict[str, Any]) -> list[str]:
        lines = [f"model: {result.get('model')}"]
        if "symmetry" in result:
            symmetry = result["symmetry"]
            verdict = "symmetric" if symmetry["symmetric"] else "asymmetric"
            lines.append(f"conditional law: {verdict} (deviation {symmetry['deviation']})")
            if symmetry.get("witness") is not None:
                h, g = symmetry["witness"]
                lines.append(f"(h,g) = ({h}, {g})")
        if "empirical" in result:
            table = result["empirical"]
            lines.append(
                f"{table['samples']} samples, seed {table['seed']}: "
                f"max asymmetry {table['maxAsymmetry']:.4f}"
            )
        return lines

    def _suite_entries(self, result: dict[str, Any]) -> list[dict[str, Any]]:
        entries = result.get("entries")
        if not isinstance(entries, list):
            raise ValueError("Suite report needs 'entries'")
        for entry in entries:
            if not isinstance(entry, dict) or "name" not in entry or "green" not in entry:
                raise ValueError("Suite entries need 'name' and 'green'")
        return entries

    def to_text(self, envelope: Any) -> str:
        command, _, result = self._check(envelope)
        lines = self.lines(envelope)
        if command == "suite":
            counts = result.get("counts", {})
            lines.append(
                f"{counts.get('green', 0)}/{counts.get('total', 0)} green"
                f" at level {result.get('level')}"
            )
        return "\n".join(lines) + "\n"

    def to_markdown(self, envelope: Any) -> str:
        command, config, result = self._check(envelope)
        out = [f"# heydecheck {command}", ""]
        if command == "suite":
            out += ["| entry | expected | outcome | detail |", "| --- | --- | --- | --- |"]
            for e in self._suite_entries(result):
                expected = "pass" if e.get("expectSuccess", True) else "fail"
                outcome = "green" if e["green"] else "red"
                detail = (e.get("error") or e.get("detail") or "").replace("|", "\\|")
                out.append(f"| {e['name']} | {expected} | {outcome} | {detail} |")
        else:
            out += [f"- {line}" for line in self.lines(envelope)]
        params = {k: v for k, v in config.items() if k != "command" and v is not None}
        if params:
            out += ["", "## Configuration", ""]
            out += [f"- `{k}`: `{v}`" for k, v in sorted(params.items())]
        return "\n".join(out) + "\n"

    def render(self, envelope: Any, fmt: str = "text") -> str:
        if fmt == "text":
            return self.to_text(envelope)
        if fmt == "markdown":
            return self.to_markdown(envelope)
        raise ValueError(f"Unsupported format: {fmt}")

    def to_rich(self, envelope: Any) -> Table | Text:
        """Terminal summary: a table for suite runs, styled lines otherwise."""
        command, _, result = self._check(envelope)
        if command == "suite":
            table = Table(title=f"heydecheck suite ({result.get('level')})")
            table.add_column("entry")
            table.add_column("expected")
            table.add_column("outcome")
            table.add_column("detail", overflow="fold")
            for e in self._suite_entries(result):
                table.add_row(
                    e["name"],
                    "pass" if e.get("expectSuccess", True) else "fail",
                    Text("green", style="green") if e["green"] else Text("red", style="bold red"),
                    e.get("error") or e.get("detail") or "",
                )
            return table
        text = Text()
        style = None
        if command == "verify":
            status = self._codec.decode_verification(result.get("report")).status
            style = _STATUS_STYLES[status]
        for i, line in enumerate(self.lines(envelope)):
            text.append(line + "\n", style=style if i == 0 else None)
        return text
