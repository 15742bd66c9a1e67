import csv
import json
from dataclasses import dataclass, field
from typing import Optional

from rich.console import Console
from rich.markup import escape
from rich.table import Table

from rational_base_kit.core.words import EPSILON, word_to_str

STATUS_STYLES = {'green': 'bold green', 'amber': 'bold yellow', 'red': 'bold red'}


@dataclass
class Report:
    """
    Output of one command.

    Args:
        title: heading shown by the text handler
        summary: scalar fields, printed before the rows
        rows: list of records with identical keys
        text: plain text shown instead of summary and rows in text format
        raw: text written verbatim whatever the format (DOT, SVG)
        failed: the command found a violation; the CLI exits with status 1
    """
    title: str = ""
    summary: dict = field(default_factory=dict)
    rows: list = field(default_factory=list)
    text: Optional[str] = None
    raw: Optional[str] = None
    failed: bool = False


class OutputHandler:
    """Base handler with default implementations"""
    @staticmethod
    def format_cell(value):
        if value is None:
            return ""
        if isinstance(value, tuple):
            return word_to_str(value, EPSILON)
        if isinstance(value, list):
            return " ".join(str(item) for item in value)
        return str(value)

    def write(self, report, stream):
        for key, value in report.summary.items():
            stream.write(f"{key}: {self.format_cell(value)}\n")
        for row in report.rows:
            stream.write(", ".join(f"{key}={self.format_cell(value)}" for key, value in row.items()) + "\n")


class TextHandler(OutputHandler):
    @staticmethod
    def styled(key, value):
        text = escape(OutputHandler.format_cell(value))
        if key in ('status', 'overall') and value in STATUS_STYLES:
            return f"[{STATUS_STYLES[value]}]{text}[/]"
        return text

    def write(self, report, stream):
        if report.text is not None:
            stream.write(report.text + "\n")
            return
        console = Console(file=stream, width=160, highlight=False)
        if report.title:
            console.print(f"[bold cyan]{escape(report.title)}[/]")
        for key, value in report.summary.items():
            console.print(f"{escape(key)}: {self.styled(key, value)}")
        if report.rows:
            table = Table(show_header=True, header_style="bold")
            for column in report.rows[0]:
                table.add_column(column)
            for row in report.rows:
                table.add_row(*(self.styled(key, value) for key, value in row.items()))
            console.print(table)


class JsonHandler(OutputHandler):
    def write(self, report, stream):
        payload = dict(report.summary)
        if report.rows:
            payload['rows'] = report.rows
        json.dump(payload, stream, indent=2, ensure_ascii=False)
        stream.write("\n")


class CsvHandler(OutputHandler):
    def write(self, report, stream):
        writer = csv.writer(stream, lineterminator="\n")
        if report.rows:
            columns = list(report.rows[0])
            writer.writerow(columns)
            for row in report.rows:
                writer.writerow([self.format_cell(row[column]) for column in columns])
        else:
            for key, value in report.summary.items():
                writer.writerow([key, self.format_cell(value)])


HANDLERS = {
    'text': TextHandler,
    'json': JsonHandler,
    'csv': CsvHandler,
}


def get_handler(output_format):
    if output_format not in HANDLERS:
        raise ValueError(f"Invalid format: {output_format}. Valid formats: {', '.join(HANDLERS)}")
    return HANDLERS[output_format]()
