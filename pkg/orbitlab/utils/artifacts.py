from __future__ import annotations

import csv
import json
import logging
import os

from openpyxl import Workbook
from openpyxl.styles import Alignment, Font

from orbitlab.utils.hashing import config_hash

logger = logging.getLogger(__name__)


def build_meta(config, frac_bits, tool_name, tool_version) -> dict:
    # без timestamp, еднаквата конфигурация дава еднакви байтове
    return {
        "tool": tool_name,
        "version": tool_version,
        "F": frac_bits,
        "config_hash": config_hash(config),
        "seed": config.seed,
        "config": config.to_dict(),
    }


def write_csv(path, header, rows, meta) -> str:
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write("# " + json.dumps(meta, sort_keys=True, separators=(",", ":"), default=str) + "\n")
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow(row)
    return path


def write_json(path, payload, meta) -> str:
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    data = {"meta": meta, **payload}
    with open(path, "w", encoding="utf-8") as f:
        json.dump(data, f, sort_keys=True, indent=2, default=str)
        f.write("\n")
    return path


def export_xlsx(path, header, rows, title="Data") -> str:
    wb = Workbook()
    ws = wb.active
    ws.title = title[:31]

    ws.append(list(header))
    for cell in ws[1]:
        cell.font = Font(bold=True)
        cell.alignment = Alignment(horizontal="center")

    for row in rows:
        ws.append(list(row))

    for col in ws.columns:
        max_len = 0
        col_letter = col[0].column_letter
        for cell in col:
            val = str(cell.value) if cell.value is not None else ""
            max_len = max(max_len, len(val))
        ws.column_dimensions[col_letter].width = min(max_len + 2, 40)

    wb.save(path)
    return path


class ArtifactWriter:
    """Пише артефактите на една команда в out директорията, с общ meta header."""

    def __init__(self, out_dir, meta, xlsx=False):
        self.out_dir = out_dir
        self.meta = meta
        self.xlsx = xlsx
        self.written = []

    def _path(self, name):
        return os.path.join(self.out_dir, name)

    def csv(self, name, header, rows):
        rows = list(rows)
        path = write_csv(self._path(name), header, rows, self.meta)
        self.written.append(path)
        if self.xlsx:
            xlsx_path = os.path.splitext(path)[0] + ".xlsx"
            export_xlsx(xlsx_path, header, rows, title=os.path.splitext(name)[0])
            self.written.append(xlsx_path)
        logger.debug("wrote %s (%d rows)", path, len(rows))
        return path

    def text(self, name, content):
        # суров дъмп без meta, напр. граф във формата {t, k, edges}
        path = self._path(name)
        os.makedirs(self.out_dir, exist_ok=True)
        with open(path, "w", encoding="utf-8") as f:
            f.write(content.rstrip("\n") + "\n")
        self.written.append(path)
        return path

    def json(self, name, payload):
        path = write_json(self._path(name), payload, self.meta)
        self.written.append(path)
        return path
