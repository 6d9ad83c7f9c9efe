# Repository:   https://github.com/PyRadon
# File Name:    radon/log_channel_console.py
# Description:  Console log channel with colour support
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

import itertools
import logging
import sys
from logging import LogRecord
from pathlib import Path
from typing import Any, TextIO

from colorama import Style

# `fundamentals` previously exported an `overrides` decorator; newer
# versions don't, so provide a harmless fallback if unavailable.
try:
    from fundamentals.overrides import overrides
except Exception:
    def overrides(_):  # type: ignore[no-redef]
        def decorator(func):
            return func
        return decorator

from radon.color_scheme import ColorScheme
from radon.log_channel_abc import LogChannelABC, OutputFormat, render_record
from radon.log_levels import LogLevel

_channel_ids = itertools.count()


class ConsoleFormatter(logging.Formatter):
    """
    A formatter class to customize how log-entries should be displayed on the console.
    """

    def __init__(self, color_scheme: ColorScheme | None = None, output_format: OutputFormat | None = None):
        logging.Formatter.__init__(self)
        self.color_scheme = color_scheme if color_scheme is not None else ColorScheme()
        self.output_format = output_format if output_format is not None else OutputFormat.HUMAN_READABLE

    def _paint(self, key: str, text: str) -> str:
        style = Style.BRIGHT if key in {level.name.lower() for level in LogLevel} else Style.NORMAL
        return self.color_scheme.paint(key, text, style=style)

    @overrides(logging.Formatter)
    def format(self, record: LogRecord) -> str:
        """
        Colour only the human-readable layout; machine-readable lines stay plain.
        :param record: the logging record.
        :return: the formatted record as string.
        """
        paint = self._paint if self.output_format == OutputFormat.HUMAN_READABLE else None
        return render_record(record, self.output_format, paint)


class LogChannelConsole(LogChannelABC):
    """
    A logging channel which writes log messages to the console (stderr by default).
    """

    def __init__(self,
                 color_scheme: ColorScheme | ColorScheme.Default | None = None,
                 minimum_log_level: Any = None,
                 include_log_levels: Any = None,
                 exclude_log_levels: Any = None,
                 output_format: OutputFormat | str | None = None,
                 stream: TextIO | None = None):
        super().__init__(minimum_log_level=minimum_log_level,
                         include_log_levels=include_log_levels,
                         exclude_log_levels=exclude_log_levels,
                         output_format=output_format)
        self.color_scheme = color_scheme if isinstance(color_scheme, ColorScheme) \
            else ColorScheme(default_scheme=color_scheme)
        self._formatter = ConsoleFormatter(color_scheme=self.color_scheme, output_format=self.output_format)
        self._handler = logging.StreamHandler(stream if stream is not None else sys.stderr)
        self._handler.setFormatter(self._formatter)
        self._logger = logging.getLogger(f"radon.console.{next(_channel_ids)}")
        self._logger.setLevel(logging.DEBUG)
        self._logger.propagate = False
        self._logger.addHandler(self._handler)

    def set_color_scheme(self, color_scheme: ColorScheme | ColorScheme.Default | str | Path) -> None:
        """
        Set the color scheme for this console channel.

        :param color_scheme: a ColorScheme.Default, a path to a scheme JSON file, or a ColorScheme instance
        """
        if isinstance(color_scheme, ColorScheme.Default):
            self.color_scheme = ColorScheme(default_scheme=color_scheme)
        elif isinstance(color_scheme, (str, Path)):
            self.color_scheme = ColorScheme(colorscheme_json=Path(color_scheme))
        elif isinstance(color_scheme, ColorScheme):
            self.color_scheme = color_scheme
        else:
            raise ValueError(f"Invalid color_scheme type: {type(color_scheme)}. "
                             f"Expected ColorScheme.Default, path, or ColorScheme instance.")
        self._formatter.color_scheme = self.color_scheme

    @overrides(LogChannelABC)
    def set_output_format(self, output_format: OutputFormat | str) -> None:
        super().set_output_format(output_format)
        self._formatter.output_format = self.output_format

    @overrides(LogChannelABC)
    def close(self) -> None:
        self._logger.removeHandler(self._handler)
        self._handler.flush()

    @overrides(LogChannelABC)
    def do_log(self, log_level: LogLevel | str | int, message: str = "", **fields: Any) -> None:
        """
        Log a message to console.
        :param log_level: the logging level
        :param message: free text
        :param fields: structured fields
        """
        if not self.is_loggable(log_level):
            return
        log_level = LogLevel.parse(log_level)
        self._logger.log(log_level.logging_level(), message, extra={"fields": fields})
