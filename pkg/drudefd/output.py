"""Writing result tables as CSV, JSON or PDF.

CSV files start with ``# key: value`` comment lines holding the header,
followed by the column names and the rows. Energies, errors and steps are
written with 17 significant digits and rates with 4; missing values are empty
cells. JSON files hold ``{"header": ..., "rows": [...]}`` with the raw
numbers (``null`` for missing values). PDF files are a human readable report
built with ``pdfme``.
"""

import csv
import io
import json
import logging
import sys
from typing import Any, Iterable, List

from pdfme import build_pdf

logger = logging.getLogger(__name__)


def format_value(column: str, value: Any) -> str:
    """Function to format one CSV cell.

    Args:
        column (str): the column name; ``rate_*`` columns get 4 significant
            digits.
        value: the value.

    Returns:
        str: the formatted cell.
    """
    if value is None:
        return ''
    if isinstance(value, bool) or isinstance(value, (int, str)):
        return str(value)
    if column.startswith('rate_'):
        return '{:.4g}'.format(value)
    return '{:.17g}'.format(value)


def _header_value(value: Any) -> str:
    if isinstance(value, str):
        return value
    return json.dumps(value, sort_keys=True)


def to_csv(table: 'ResultTable') -> str:
    """Function to render a table as CSV text (``\\n`` line endings)."""
    buffer = io.StringIO()
    for key, value in table.header.items():
        buffer.write('# {}: {}\n'.format(key, _header_value(value)))
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(table.columns)
    for row in table.rows:
        writer.writerow([format_value(c, row.get(c)) for c in table.columns])
    return buffer.getvalue()


def to_json(table: 'ResultTable') -> str:
    """Function to render a table as a JSON document."""
    document = {
        'header': table.header,
        'rows': [{c: row.get(c) for c in table.columns} for row in table.rows],
    }
    return json.dumps(document, indent=2, allow_nan=False) + '\n'


def _pdf_cells(values: Iterable[str]) -> List[dict]:
    return [{'.': v, 'style': {'s': 7}} for v in values]


def to_pdf_document(table: 'ResultTable') -> dict:
    """Function to build the ``pdfme`` document of a table report: a title,
    the header as a key/value table and the data rows."""
    header_rows = [
        _pdf_cells([key, _header_value(value)])
        for key, value in table.header.items()
    ]
    data_rows = [_pdf_cells(table.columns)] + [
        _pdf_cells(format_value(c, row.get(c)) for c in table.columns)
        for row in table.rows
    ]
    content = [
        {'.': 'drudefd {} results'.format(table.kind), 'style': 'title'},
        {
            'widths': [1, 3],
            'style': {'border_width': 0.5, 'cell_margin': 3},
            'fills': [{'pos': '::2;:', 'color': 0.9}],
            'table': header_rows,
        },
        {'.': 'Data', 'style': 'title'},
    ]
    if table.rows:
        content.append({
            'style': {'border_width': 0.5, 'cell_margin': 3},
            'fills': [{'pos': '0;:', 'color': 0.8}],
            'table': data_rows,
        })
    else:
        content.append({'.': 'No rows.'})
    return {
        'style': {'margin_bottom': 15, 's': 9},
        'formats': {'title': {'b': 1, 's': 13}},
        'sections': [{'content': content}],
    }


def emit(table: 'ResultTable', format: str='csv', path: str=None) -> None:
    """Function to write a result table.

    Args:
        table (ResultTable): the table.
        format (str, optional): ``'csv'``, ``'json'`` or ``'pdf'``.
        path (str, optional): the output file. CSV and JSON go to standard
            output when it's ``None`` or ``'-'``; PDF needs a file.

    Raises:
        ValueError: if ``format`` is unknown, or PDF output has no path.
        OSError: if the file can't be written; the message names the path.
    """
    if format not in ('csv', 'json', 'pdf'):
        raise ValueError('unknown output format {!r}'.format(format))
    to_stdout = path is None or path == '-'
    if format == 'pdf' and to_stdout:
        raise ValueError('PDF output needs a file path')
    try:
        if format == 'pdf':
            with open(path, 'wb') as f:
                build_pdf(to_pdf_document(table), f)
        else:
            text = to_csv(table) if format == 'csv' else to_json(table)
            if to_stdout:
                sys.stdout.write(text)
            else:
                with open(path, 'w', encoding='utf-8', newline='\n') as f:
                    f.write(text)
    except OSError as e:
        raise OSError(e.errno, 'cannot write {}: {}'
            .format(path, e.strerror or e), path) from e
    if not to_stdout:
        logger.info('wrote %s (%d rows) to %s', format, len(table.rows), path)
