# Repository:   https://github.com/PyRadon
# File Name:    radon/log_channel_file.py
# Description:  File log channel writing the node log
#
# Copyright (C) 2026 Dieter J Kybelksties <github@kybelksties.com>
#
# This program is free software; you can redistribute it and/or
# modify it under the terms of the GNU General Public License
# as published by the Free Software Foundation; either version 2
# of the License, or (at your option) any later version.
#
# This program is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU General Public License for more details.
#
# You should have received a copy of the GNU General Public License
# along with this program; if not, write to the Free Software
# Foundation, Inc., 59 Temple Place - Suite 330, Boston, MA  02111-1307, USA.
#
# @date: 2026-04-02
# @author: Dieter J Kybelksties

from __future__ import annotations

import logging
from logging import LogRecord
from pathlib import Path
from typing import Any

# handle missing overrides decorator gracefully
try:
    from fundamentals.overrides import overrides
except Exception:
    def overrides(_):  # type: ignore[no-redef]
        def decorator(func):
            return func
        return decorator

from radon.log_channel_abc import LogChannelABC, OutputFormat, render_record
from radon.log_levels import LogLevel


class FileLogFormatter(logging.Formatter):
    """
    A formatter class to customize how file-log-entries should be written.
    """

    def __init__(self, output_format: OutputFormat | None = None):
        logging.Formatter.__init__(self)
        self.output_format = output_format if output_format is not None else OutputFormat.KEY_VALUE

    @overrides(logging.Formatter)
    def format(self, record: LogRecord) -> str:
        return render_record(record, self.output_format)


class FileLogChannel(LogChannelABC):
    """
    A logging channel which appends log lines to a file.
    """

    def __init__(self,
                 log_filename: str | Path,
                 logfile_open_mode: str = "a",
                 minimum_log_level: Any = None,
                 include_log_levels: Any = None,
                 exclude_log_levels: Any = None,
                 output_format: OutputFormat | str | None = None):
        super().__init__(minimum_log_level=minimum_log_level,
                         include_log_levels=include_log_levels,
                         exclude_log_levels=exclude_log_levels,
                         output_format=output_format if output_format is not None else OutputFormat.KEY_VALUE)
        self.log_file = Path(log_filename)
        self.log_file.parent.mkdir(parents=True, exist_ok=True)

        self._formatter = FileLogFormatter(output_format=self.output_format)
        self._handler = logging.FileHandler(self.log_file, mode=logfile_open_mode, encoding="utf-8")
        self._handler.setFormatter(self._formatter)
        self._logger = logging.getLogger(f"radon.file.{self.log_file.resolve()}")
        self._logger.setLevel(logging.DEBUG)
        self._logger.propagate = False
        self._logger.addHandler(self._handler)

    @overrides(LogChannelABC)
    def set_output_format(self, output_format: OutputFormat | str) -> None:
        super().set_output_format(output_format)
        self._formatter.output_format = self.output_format

    @overrides(LogChannelABC)
    def close(self) -> None:
        self._logger.removeHandler(self._handler)
        self._handler.close()

    @overrides(LogChannelABC)
    def do_log(self, log_level: LogLevel | str | int, message: str = "", **fields: Any) -> None:
        """
        Log a message to file.
        :param log_level: the logging level
        :param message: free text
        :param fields: structured fields
        """
        if not self.is_loggable(log_level):
            return
        log_level = LogLevel.parse(log_level)
        self._logger.log(log_level.logging_level(), message, extra={"fields": fields})
        self._handler.flush()
