"""Output formats shared by every management command."""

import csv
import io
import json
from fractions import Fraction

OUTPUT_FORMATS = ('text', 'csv', 'json')

SCHEMA_VERSION = 1


def format_value(value):
    """
    Render one cell.

    Exact integers become decimal strings and rationals "p/q"; floats use
    the shortest repr that round-trips.
    """
    if value is None:
        return ''
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if isinstance(value, int):
        return str(value)
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return str(value.numerator)
        return f'{value.numerator}/{value.denominator}'
    if isinstance(value, float):
        # numpy scalars subclass float but repr as np.float64(...)
        return repr(float(value))
    return str(value)


def _json_value(value):
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, float):
        return float(value)
    if isinstance(value, (list, tuple)):
        return [_json_value(v) for v in value]
    return format_value(value)


def render_text(columns, rows):
    """Left-aligned columns separated by two spaces."""
    cells = [list(columns)] + [[format_value(v) for v in row] for row in rows]
    widths = [max(len(row[i]) for row in cells) for i in range(len(columns))]
    lines = []
    for row in cells:
        line = '  '.join(cell.ljust(w) for cell, w in zip(row, widths))
        lines.append(line.rstrip() + '\n')
    return ''.join(lines)


def render_csv(columns, rows):
    """A header row and one line per row, with LF line endings."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator='\n')
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_value(v) for v in row])
    return out.getvalue()


def render_json(columns, rows, params):
    """{"schema_version", "params", "rows"}, one object per row."""
    document = {
        'schema_version': SCHEMA_VERSION,
        'params': {key: _json_value(value) for key, value in params.items()},
        'rows': [
            {column: _json_value(v) for column, v in zip(columns, row)}
            for row in rows
        ],
    }
    return json.dumps(document, indent=2) + '\n'


def render(output_format, columns, rows, params):
    """Render a table in one of OUTPUT_FORMATS."""
    if output_format == 'text':
        return render_text(columns, rows)
    elif output_format == 'csv':
        return render_csv(columns, rows)
    elif output_format == 'json':
        return render_json(columns, rows, params)
    else:
        raise ValueError(f'Invalid output format: {output_format}')
